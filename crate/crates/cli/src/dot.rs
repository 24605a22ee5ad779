//! Graphviz text output.

use std::fmt::Write;

use fibre_core::config::CurveConfiguration;
use fibre_core::resolution::{CenterRef, ResolutionTree};

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Dual graph: one node per component, one edge per intersecting pair.
pub fn configuration_dot(name: &str, cfg: &CurveConfiguration) -> String {
    let mut out = String::new();
    writeln!(out, "graph \"{}\" {{", escape(name)).unwrap();
    for c in cfg.components() {
        let si = c.self_int.map_or_else(|| "?".to_string(), |v| v.to_string());
        writeln!(
            out,
            "  c{} [label=\"C{}\\nm={} pa={} C2={}\"];",
            c.id, c.id, c.mult, c.pa, si
        )
        .unwrap();
    }
    for (a, b, k) in cfg.edges() {
        if k == 1 {
            writeln!(out, "  c{a} -- c{b};").unwrap();
        } else {
            writeln!(out, "  c{a} -- c{b} [label=\"{k}\"];").unwrap();
        }
    }
    out.push_str("}\n");
    out
}

/// One node per blow-up, with an arc from the exceptional curve a center lies on.
pub fn tree_dot(name: &str, tree: &ResolutionTree) -> String {
    let ledger = tree.ledger();
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", escape(name)).unwrap();
    for s in &tree.steps {
        let parity = if s.in_branch { "odd" } else { "even" };
        writeln!(
            out,
            "  e{} [label=\"E{}\\n{}\\nm={} {} E2={}\"];",
            s.exceptional_id,
            s.exceptional_id,
            escape(&s.center.to_string()),
            s.multiplicity,
            parity,
            ledger.self_int[&s.exceptional_id]
        )
        .unwrap();
    }
    for s in &tree.steps {
        match &s.center {
            CenterRef::Near { on, .. } | CenterRef::Conjugate { on, .. }
                if tree.steps.iter().any(|p| p.exceptional_id == *on) =>
            {
                writeln!(out, "  e{on} -> e{};", s.exceptional_id).unwrap();
            }
            _ => {}
        }
    }
    out.push_str("}\n");
    out
}
