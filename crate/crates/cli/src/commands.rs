//! Command dispatch. Every command reads documents, runs one operation, and
//! returns a report; input problems are errors (exit code 2).

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use coarse_core::covers::{
    is_bounded_by, is_disjoint, search_dimension_certificate, SearchMode, SearchOutcome,
    SubsetFamily, DEFAULT_EXACT_LIMIT,
};
use coarse_core::decomposition::{
    gamec_collapse, gamec_play, play_fdc, run_sfdc, sfdc_from_propc, Adversary, CertificateCoverStrategy,
    Challenge, Challenger, ConstantChallenger, CoverStrategy, Decomposer, DimensionStrategy, GameKind,
    GameTranscript, GreedyCoverStrategy, Outcome, RandomChallenger, Response, ScriptedStrategy, SearchStrategy,
};
use coarse_core::maps::{check_coarse_equivalence, pullback_decomposition, pullback_family, CoarseMap, ProductSpace};
use coarse_core::metric::{entourage_at_radius, FiniteMetric};
use coarse_core::property_a::{build_witness, verify_b_bounds, verify_witness};
use coarse_core::rational;
use coarse_core::relations::{Entourage, Filtration};
use coarse_core::verdict::{Failure, Verdict};

use crate::document::{self, Certificate, Document, Report, Status};
use crate::dot;
use crate::error::{input, CliError, CliResult};
use crate::repl::Operator;

/// Environment variable capping the number of points exact search accepts.
pub const EXACT_LIMIT_VAR: &str = "COARSE_EXACT_LIMIT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    CheckDisjoint,
    CheckBounded,
    VerifyPropc,
    SearchDim,
    BuildPropa,
    VerifyPropa,
    VerifyDecomp,
    PlayFdc,
    RunSfdc,
    PlayGamec,
    CollapseGamec,
    Product,
    Pullback,
    Equivalence,
}

impl Command {
    fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

/// Entourage flags take a radius for metric spaces and a level index (or
/// `diagonal`, `full`, `top`) for filtrations.
#[derive(Debug, Parser)]
#[command(name = "coarse", version, about = "Certificates and games on finite coarse spaces")]
pub struct Cli {
    pub command: Command,
    /// Input documents, in the order the command expects.
    pub inputs: Vec<PathBuf>,
    /// The relation families must be disjoint at.
    #[arg(long)]
    pub scale: Option<String>,
    /// The relation every member must fit inside.
    #[arg(long)]
    pub bound: Option<String>,
    /// Dimension for searches and games; the witness parameter for build-propa.
    #[arg(long)]
    pub n: Option<u64>,
    /// Target variation for property A witnesses, as an integer or `p/q`.
    #[arg(long)]
    pub epsilon: Option<String>,
    /// Rounds before a game is scored lost.
    #[arg(long, default_value_t = 8)]
    pub max_rounds: usize,
    /// `exact` can refute; `greedy` only finds.
    #[arg(long, default_value = "exact")]
    pub mode: SearchMode,
    /// Player one picks rising filtration levels at random from this seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Writes the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Writes the relation the command worked at as a Graphviz graph.
    #[arg(long)]
    pub emit_dot: Option<PathBuf>,
    /// Player one in the cover game saturates after every round.
    #[arg(long)]
    pub adversary: bool,
    /// Player two's moves are read from standard input.
    #[arg(long)]
    pub interactive: bool,
}

/// A loaded space: its presentation, and the metric when it has one.
struct Presented {
    filtration: Filtration,
    metric: Option<FiniteMetric>,
}

impl Presented {
    fn resolve(&self, flag: &str, value: Option<&str>) -> CliResult<Entourage> {
        let Some(value) = value else {
            return input(format!("--{flag} is required"));
        };
        let n = self.filtration.points();
        match value {
            "diagonal" => return Ok(Entourage::diagonal(n)),
            "full" => return Ok(Entourage::full(n)),
            "top" => return Ok(self.filtration.top().clone()),
            _ => {}
        }
        if let Some(m) = &self.metric {
            let r = rational::parse(value).map_err(|e| CliError::Input(format!("--{flag}: {e}")))?;
            return Ok(entourage_at_radius(m, &r));
        }
        let i: usize = value.parse().map_err(|_| CliError::Input(format!("--{flag}: expected a level index")))?;
        match self.filtration.levels().get(i) {
            Some(l) => Ok(l.clone()),
            None => input(format!("--{flag}: no level {i}")),
        }
    }
}

struct Inputs<'a> {
    paths: &'a [PathBuf],
    next: usize,
}

impl<'a> Inputs<'a> {
    fn doc(&mut self, what: &str) -> CliResult<(Document, &'a Path)> {
        let Some(path) = self.paths.get(self.next) else {
            return input(format!("missing input: {what}"));
        };
        self.next += 1;
        Ok((document::load(path)?, path))
    }

    fn optional(&mut self) -> CliResult<Option<Document>> {
        if self.next < self.paths.len() {
            self.doc("").map(|(d, _)| Some(d))
        } else {
            Ok(None)
        }
    }

    fn space(&mut self) -> CliResult<Presented> {
        match self.doc("space")? {
            (Document::Space(s), _) => Ok(Presented { filtration: s.filtration()?, metric: Some(s.metric) }),
            (Document::Filtration(f), _) => Ok(Presented { filtration: f, metric: None }),
            (_, p) => input(format!("{}: expected a space or filtration", p.display())),
        }
    }

    fn family(&mut self) -> CliResult<SubsetFamily> {
        match self.doc("family")? {
            (Document::Family(f), _) => Ok(f),
            (_, p) => input(format!("{}: expected a family", p.display())),
        }
    }

    fn certificate(&mut self) -> CliResult<Certificate> {
        match self.doc("certificate")? {
            (Document::Certificate(c), _) => Ok(c),
            (_, p) => input(format!("{}: expected a certificate", p.display())),
        }
    }

    fn map(&mut self) -> CliResult<CoarseMap> {
        match self.certificate()? {
            Certificate::Map(m) => Ok(m),
            _ => input("expected a map certificate"),
        }
    }

    fn transcript(&mut self) -> CliResult<GameTranscript> {
        match self.doc("transcript")? {
            (Document::Transcript(t), _) => Ok(t),
            (_, p) => input(format!("{}: expected a transcript", p.display())),
        }
    }
}

fn exact_limit() -> CliResult<usize> {
    match std::env::var(EXACT_LIMIT_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Input(format!("{EXACT_LIMIT_VAR} must be a count"))),
        Err(_) => Ok(DEFAULT_EXACT_LIMIT),
    }
}

fn space_of(points: usize) -> Filtration {
    let space = coarse_core::relations::Space::new(points).expect("positive size");
    Filtration::new(space, vec![Entourage::full(points)]).expect("one level")
}

fn transcript_status(t: &GameTranscript) -> Status {
    match t.outcome {
        Outcome::Won => Status::Won,
        Outcome::Lost { .. } => Status::Lost,
        Outcome::Invalid { .. } => Status::Invalid,
    }
}

fn transcript_report(command: &str, t: GameTranscript) -> Report {
    Report::new(command, transcript_status(&t))
        .fact("rounds", t.rounds.len())
        .with_output(Document::Transcript(t))
}

/// Replays a transcript through the referee's checks.
fn recheck_transcript(t: &GameTranscript) -> Verdict {
    let mut v = Verdict::holds();
    let mut current = t.initial.clone();
    for (i, r) in t.rounds.iter().enumerate() {
        match &r.response {
            Response::Decompose(mv) if t.kind == GameKind::Decomposition => {
                let dec = &mv.decomposition;
                if dec.source != current || dec.target != mv.family {
                    v.push(Failure::Other { message: format!("round {i} does not continue the previous family") });
                }
                if dec.entourage != r.asserted {
                    v.push(Failure::WrongEntourage);
                }
                v.absorb(dec.verify());
                current = mv.family.clone();
            }
            Response::Cover { family } if t.kind == GameKind::Cover => {
                v.absorb(is_disjoint(family, &r.asserted));
                v.absorb(is_bounded_by(family, &t.win_bound));
            }
            Response::Resign { .. } => {}
            _ => v.push(Failure::Other { message: format!("round {i} answer does not fit the game") }),
        }
    }
    if t.won() && t.kind == GameKind::Decomposition {
        v.absorb(is_bounded_by(&current, &t.win_bound));
    }
    v
}

pub struct Execution {
    pub report: Report,
    pub dot: Option<String>,
}

impl Execution {
    fn plain(report: Report) -> Self {
        Execution { report, dot: None }
    }

    fn with_dot(report: Report, presented: &Presented, e: &Entourage) -> Self {
        Execution { report, dot: Some(dot::entourage_graph(presented.filtration.space(), e)) }
    }
}

fn player_one(cli: &Cli, presented: &Presented, scale: &Entourage) -> CliResult<Box<dyn Challenger>> {
    Ok(match cli.seed {
        Some(seed) => Box::new(RandomChallenger::new(presented.filtration.levels().to_vec(), seed)?),
        None => Box::new(ConstantChallenger::new(scale.clone())),
    })
}

pub fn execute(cli: &Cli) -> CliResult<Execution> {
    let name = cli.command.name();
    let name = name.as_str();
    let mut inputs = Inputs { paths: &cli.inputs, next: 0 };
    let exec = match cli.command {
        Command::CheckDisjoint | Command::CheckBounded => {
            let family = inputs.family()?;
            let space = inputs.space()?;
            if family.points() != space.filtration.points() {
                return input(format!(
                    "family lives on {} points, space has {}",
                    family.points(),
                    space.filtration.points()
                ));
            }
            let (flag, value) = match cli.command {
                Command::CheckDisjoint => ("scale", cli.scale.as_deref()),
                _ => ("bound", cli.bound.as_deref()),
            };
            let e = space.resolve(flag, value)?;
            let verdict = match cli.command {
                Command::CheckDisjoint => is_disjoint(&family, &e),
                _ => is_bounded_by(&family, &e),
            };
            Execution::with_dot(Report::from_verdict(name, verdict), &space, &e)
        }
        Command::VerifyPropc => {
            let verdict = match inputs.certificate()? {
                Certificate::PropertyC(c) => c.verify(),
                Certificate::Dimension(c) => c.verify(),
                _ => return input("expected a property C or dimension certificate"),
            };
            Execution::plain(Report::from_verdict(name, verdict))
        }
        Command::SearchDim => {
            let space = inputs.space()?;
            let scale = space.resolve("scale", cli.scale.as_deref())?;
            let bound = space.resolve("bound", cli.bound.as_deref())?;
            let n = cli.n.unwrap_or(0) as usize;
            let outcome = search_dimension_certificate(&scale, &bound, n, cli.mode, exact_limit()?, None)?;
            let report = match outcome {
                SearchOutcome::Found(cert) => Report::new(name, Status::Constructed)
                    .with_output(Document::Certificate(Certificate::Dimension(cert))),
                SearchOutcome::Refuted { explored } => Report::new(name, Status::Refuted).fact("explored", explored),
                SearchOutcome::Unknown => Report::new(name, Status::Unknown),
            };
            Execution::with_dot(report.fact("n", n), &space, &scale)
        }
        Command::BuildPropa => {
            let Certificate::PropertyAConfig(mut cfg) = inputs.certificate()? else {
                return input("expected a property A configuration");
            };
            if let Some(n) = cli.n {
                cfg.n = n;
            }
            let Some(eps) = cli.epsilon.as_deref() else {
                return input("--epsilon is required");
            };
            let eps = rational::parse(eps).map_err(CliError::Input)?;
            let witness = build_witness(&cfg, &eps)?;
            let report = Report::new(name, Status::Constructed)
                .fact("epsilon_bound", rational::format(&witness.epsilon_bound))
                .with_output(Document::Certificate(Certificate::PropertyAWitness(witness)));
            Execution::plain(report)
        }
        Command::VerifyPropa => {
            let Certificate::PropertyAConfig(cfg) = inputs.certificate()? else {
                return input("expected a property A configuration first");
            };
            let mut verdict = verify_b_bounds(&cfg)?;
            if let Some(doc) = inputs.optional()? {
                let Document::Certificate(Certificate::PropertyAWitness(w)) = doc else {
                    return input("expected a property A witness second");
                };
                verdict.absorb(verify_witness(&w, &cfg.base));
            }
            Execution::plain(Report::from_verdict(name, verdict))
        }
        Command::VerifyDecomp => {
            let verdict = match inputs.doc("decomposition or transcript")? {
                (Document::Certificate(Certificate::Decomposition(d)), _) => d.verify(),
                (Document::Transcript(t), _) => recheck_transcript(&t),
                (_, p) => return input(format!("{}: expected a decomposition or transcript", p.display())),
            };
            Execution::plain(Report::from_verdict(name, verdict))
        }
        Command::PlayFdc => {
            let space = inputs.space()?;
            let scale = space.resolve("scale", cli.scale.as_deref())?;
            let bound = space.resolve("bound", cli.bound.as_deref())?;
            let points = space.filtration.points();
            let whole = SubsetFamily::normalized(points, [space.filtration.space().all_points()])?;
            let mut p1 = player_one(cli, &space, &scale)?;
            let mut p2: Box<dyn Decomposer> = if cli.interactive {
                Box::new(Operator::new(io::stdin().lock(), io::stderr()))
            } else {
                match inputs.optional()? {
                    Some(Document::Certificate(Certificate::Dimension(c))) => Box::new(DimensionStrategy::new(c)),
                    Some(_) => return input("expected a dimension certificate as the second input"),
                    None => {
                        let parts = cli.n.unwrap_or(1) as usize + 1;
                        Box::new(SearchStrategy::new(bound.clone(), parts, cli.mode, exact_limit()?))
                    }
                }
            };
            let t = play_fdc(&whole, p1.as_mut(), p2.as_mut(), &bound, cli.max_rounds);
            Execution::with_dot(transcript_report(name, t), &space, &scale)
        }
        Command::RunSfdc => match inputs.doc("certificate or space")? {
            (Document::Certificate(Certificate::PropertyC(cert)), _) => {
                let chain = sfdc_from_propc(&cert)?;
                let challenge = Challenge::new(cert.challenge.levels().to_vec(), cert.bound.clone())?;
                let whole = SubsetFamily::normalized(cert.points(), [cert.domain()])?;
                let t = run_sfdc(&whole, &challenge, &mut ScriptedStrategy::from_chain(chain));
                Execution::plain(transcript_report(name, t))
            }
            (Document::Space(_) | Document::Filtration(_), _) => {
                inputs.next -= 1;
                let space = inputs.space()?;
                let bound = space.resolve("bound", cli.bound.as_deref())?;
                let challenge = Challenge::new(space.filtration.levels().to_vec(), bound.clone())?;
                let whole = SubsetFamily::normalized(space.filtration.points(), [space.filtration.space().all_points()])?;
                let parts = cli.n.unwrap_or(1) as usize + 1;
                let mut p2 = SearchStrategy::new(bound, parts, cli.mode, exact_limit()?);
                Execution::plain(transcript_report(name, run_sfdc(&whole, &challenge, &mut p2)))
            }
            (_, p) => return input(format!("{}: expected a property C certificate or a space", p.display())),
        },
        Command::PlayGamec => {
            let (scale, bound, points, domain, mut p2): (Entourage, Entourage, usize, _, Box<dyn CoverStrategy>) =
                match inputs.doc("certificate or space")? {
                    (Document::Certificate(Certificate::Dimension(cert)), _) => {
                        let c = (cert.scale.clone(), cert.bound.clone(), cert.points(), cert.domain());
                        (c.0, c.1, c.2, c.3, Box::new(CertificateCoverStrategy::new(cert)))
                    }
                    (Document::Space(_) | Document::Filtration(_), _) => {
                        inputs.next -= 1;
                        let space = inputs.space()?;
                        let scale = space.resolve("scale", cli.scale.as_deref())?;
                        let bound = space.resolve("bound", cli.bound.as_deref())?;
                        let all = space.filtration.space().all_points();
                        let p2 = Box::new(GreedyCoverStrategy::new(all.clone(), bound.clone()));
                        (scale, bound, space.filtration.points(), all, p2)
                    }
                    (_, p) => return input(format!("{}: expected a dimension certificate or a space", p.display())),
                };
            let mut p1: Box<dyn Challenger> = if cli.adversary {
                Box::new(Adversary::new(scale)?)
            } else {
                Box::new(ConstantChallenger::new(scale))
            };
            let t = gamec_play(points, &domain, p1.as_mut(), p2.as_mut(), &bound, cli.max_rounds)?;
            Execution::plain(transcript_report(name, t))
        }
        Command::CollapseGamec => {
            let t = inputs.transcript()?;
            let (family, bound) = gamec_collapse(&t)?;
            let first = t.rounds.first().map(|r| r.asserted.clone());
            let report = Report::new(name, Status::Constructed)
                .fact("bound_pairs", bound.len())
                .fact("members", family.len())
                .with_output(Document::Family(family));
            match first {
                Some(e) => Execution { report, dot: Some(dot::entourage_graph(space_of(e.points()).space(), &e)) },
                None => Execution::plain(report),
            }
        }
        Command::Product => {
            let left = inputs.space()?;
            let right = inputs.space()?;
            let product = ProductSpace::new(left.filtration, right.filtration)?;
            let report = Report::new(name, Status::Constructed)
                .fact("points", product.space.points())
                .with_output(Document::Filtration(product.space));
            Execution::plain(report)
        }
        Command::Pullback => {
            let map = inputs.map()?;
            let source = Presented { filtration: map.source().clone(), metric: None };
            match inputs.doc("family or decomposition")? {
                (Document::Family(u), _) => {
                    let pulled = pullback_family(&map, &u)?;
                    Execution::plain(Report::new(name, Status::Constructed).with_output(Document::Family(pulled)))
                }
                (Document::Certificate(Certificate::Decomposition(d)), _) => {
                    let l = source.resolve("scale", cli.scale.as_deref())?;
                    let pulled = pullback_decomposition(&map, &d, &l)?;
                    let doc = Document::Certificate(Certificate::Decomposition(pulled));
                    Execution::plain(Report::new(name, Status::Constructed).with_output(doc))
                }
                (_, p) => return input(format!("{}: expected a family or decomposition", p.display())),
            }
        }
        Command::Equivalence => {
            let f = inputs.map()?;
            let g = inputs.map()?;
            let source = Presented { filtration: f.source().clone(), metric: None };
            let target = Presented { filtration: f.target().clone(), metric: None };
            let close_source = source.resolve("scale", Some(cli.scale.as_deref().unwrap_or("top")))?;
            let close_target = target.resolve("bound", Some(cli.bound.as_deref().unwrap_or("top")))?;
            let verdict = check_coarse_equivalence(&f, &g, &close_source, &close_target)?;
            Execution::plain(Report::from_verdict(name, verdict))
        }
    };
    Ok(exec)
}

/// Runs a command and writes its report (and DOT file) where asked.
/// Returns the exit code.
pub fn run(cli: &Cli) -> u8 {
    match execute(cli) {
        Ok(exec) => {
            let text = document::render(&Document::Report(exec.report.clone()));
            let written = match &cli.output {
                Some(path) => fs::write(path, &text).map_err(|source| CliError::Io { path: path.clone(), source }),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            let dotted = match (&cli.emit_dot, &exec.dot) {
                (Some(path), Some(graph)) => {
                    fs::write(path, graph).map_err(|source| CliError::Io { path: path.clone(), source })
                }
                (Some(_), None) => Err(CliError::Input("this command has no relation to draw".into())),
                _ => Ok(()),
            };
            match written.and(dotted) {
                Ok(()) => exec.report.status.exit_code(),
                Err(e) => {
                    eprintln!("error: {e}");
                    2
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
