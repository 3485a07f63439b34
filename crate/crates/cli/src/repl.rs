//! Player two typed in by an operator: each prompt shows the assertion and
//! the current family, each answer is a move literal (or `resign`), and the
//! referee's verdict on it is printed before it is played.

use std::io::{BufRead, Write};

use coarse_core::covers::SubsetFamily;
use coarse_core::decomposition::{Decomposer, Move, Response};
use coarse_core::relations::Entourage;
use coarse_core::verdict::{Failure, Verdict};

pub struct Operator<R, W> {
    input: R,
    prompt: W,
}

impl<R: BufRead, W: Write> Operator<R, W> {
    pub fn new(input: R, prompt: W) -> Self {
        Operator { input, prompt }
    }

    fn say(&mut self, text: &str) {
        let _ = writeln!(self.prompt, "{text}");
        let _ = self.prompt.flush();
    }
}

fn precheck(asserted: &Entourage, current: &SubsetFamily, mv: &Move) -> Verdict {
    let dec = &mv.decomposition;
    if dec.source != *current || dec.target != mv.family {
        return Verdict::fails(Failure::Other { message: "move does not start from the current family".into() });
    }
    if dec.entourage != *asserted {
        return Verdict::fails(Failure::WrongEntourage);
    }
    dec.verify()
}

impl<R: BufRead, W: Write> Decomposer for Operator<R, W> {
    fn respond(&mut self, asserted: &Entourage, current: &SubsetFamily) -> Response {
        let state = serde_json::json!({ "asserted": asserted, "current": current });
        self.say(&format!("assertion: {state}"));
        loop {
            self.say("move> ");
            let mut line = String::new();
            match self.input.read_line(&mut line) {
                Ok(0) | Err(_) => return Response::Resign { reason: "operator input ended".into() },
                Ok(_) => {}
            }
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if line == "resign" {
                return Response::Resign { reason: "operator resigned".into() };
            }
            match serde_json::from_str::<Move>(line) {
                Ok(mv) => {
                    let verdict = precheck(asserted, current, &mv);
                    if verdict.is_ok() {
                        self.say("verdict: accepted");
                        return Response::Decompose(mv);
                    }
                    self.say(&format!("verdict: rejected: {verdict}"));
                }
                Err(e) => self.say(&format!("unreadable move: {e}")),
            }
        }
    }
}
