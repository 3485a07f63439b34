//! Graphviz export of a relation, one undirected edge per symmetric pair.

use std::fmt::Write;

use coarse_core::relations::{Entourage, Space};

pub fn entourage_graph(space: &Space, e: &Entourage) -> String {
    let mut out = String::from("graph entourage {\n");
    for p in 0..e.points() {
        let _ = writeln!(out, "  {p} [label={:?}];", space.label(p));
    }
    for (i, j) in e.pairs() {
        if i < j || (i > j && !e.contains(j, i)) {
            let _ = writeln!(out, "  {} -- {};", i.min(j), i.max(j));
        }
    }
    out.push_str("}\n");
    out
}
