//! Graphviz output. Node and edge order depends only on the structure, so
//! the same input always renders to the same bytes.

use crate::cells::{BranchingCell, CellAnalysis, CellHost};
use crate::error::Result;
use crate::eventset::EventSet;
use crate::prime::PrimeEs;
use crate::stable::StableEs;
use crate::structure::EventStructure;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Event nodes, grouped into one cluster per cell when cells are given.
/// Events of `v` are drawn filled.
fn nodes<H: EventStructure>(host: &H, v: EventSet, cells: &[BranchingCell]) -> String {
    let n = host.names().as_slice();
    let node = |e: usize, indent: &str| {
        let style = if v.contains(e) {
            " [style=filled, fillcolor=gray80]"
        } else {
            ""
        };
        format!("{indent}{}{style};\n", quote(&n[e]))
    };
    let mut out = String::new();
    let mut clustered = EventSet::EMPTY;
    for (i, c) in cells.iter().enumerate() {
        out += &format!(
            "  subgraph cluster_{i} {{\n    label={};\n    style=rounded;\n",
            quote(&format!("c{}", i + 1))
        );
        for e in c.events {
            out += &node(e, "    ");
        }
        out += "  }\n";
        clustered = clustered | c.events;
    }
    for e in host.live() - clustered {
        out += &node(e, "  ");
    }
    out
}

fn es_body(es: &PrimeEs, v: EventSet, cells: &[BranchingCell]) -> String {
    let n = es.names().as_slice();
    let mut out = format!(
        "digraph {} {{\n  rankdir=BT;\n  node [shape=circle];\n",
        quote(es.name())
    );
    out += &nodes(es, v, cells);
    for (a, b) in es.hasse_pairs() {
        out += &format!("  {} -> {};\n", quote(&n[a]), quote(&n[b]));
    }
    for (a, b) in es.immediate_conflict_pairs() {
        out += &format!("  {} -> {} [style=dashed, dir=none];\n", quote(&n[a]), quote(&n[b]));
    }
    out += "}\n";
    out
}

fn ses_body(ses: &StableEs, v: EventSet, cells: &[BranchingCell]) -> String {
    let n = ses.names().as_slice();
    let mut out = format!(
        "digraph {} {{\n  rankdir=BT;\n  node [shape=circle];\n",
        quote(ses.name())
    );
    out += &nodes(ses, v, cells);
    for (i, r) in ses.rules().iter().enumerate() {
        if r.premise.len() <= 1 {
            for p in r.premise {
                out += &format!("  {} -> {};\n", quote(&n[p]), quote(&n[r.conclusion]));
            }
        } else {
            let hub = quote(&format!("rule{i}"));
            out += &format!("  {hub} [shape=point];\n");
            for p in r.premise {
                out += &format!("  {} -> {hub} [arrowhead=none];\n", quote(&n[p]));
            }
            out += &format!("  {hub} -> {};\n", quote(&n[r.conclusion]));
        }
    }
    for (i, f) in ses.forbidden().iter().enumerate() {
        let members: Vec<usize> = f.iter().collect();
        if members.len() == 2 {
            out += &format!(
                "  {} -> {} [style=dashed, dir=none];\n",
                quote(&n[members[0]]),
                quote(&n[members[1]])
            );
        } else {
            let hub = quote(&format!("forbidden{i}"));
            out += &format!("  {hub} [shape=box, label=\"#\", style=dashed];\n");
            for e in members {
                out += &format!("  {hub} -> {} [style=dashed, dir=none];\n", quote(&n[e]));
            }
        }
    }
    out += "}\n";
    out
}

pub fn es_to_dot(es: &PrimeEs) -> String {
    es_body(es, EventSet::EMPTY, &[])
}

pub fn ses_to_dot(ses: &StableEs) -> String {
    ses_body(ses, EventSet::EMPTY, &[])
}

fn cells_for<H: CellHost>(host: &H, v: EventSet) -> Result<Vec<BranchingCell>> {
    CellAnalysis::new(host.clone()).enabled_cells(v)
}

/// The structure with the cells of `δ(v)` drawn as clusters; fails when `v`
/// is not R-stopped.
pub fn es_cells_to_dot(es: &PrimeEs, v: EventSet) -> Result<String> {
    let cells = cells_for(es, v)?;
    Ok(es_body(es, v, &cells))
}

pub fn ses_cells_to_dot(ses: &StableEs, v: EventSet) -> Result<String> {
    let cells = cells_for(ses, v)?;
    Ok(ses_body(ses, v, &cells))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn example_es_shape() {
        let dot = es_to_dot(&fixtures::es_example());
        let solid = dot
            .lines()
            .filter(|l| l.contains("->") && !l.contains("dashed"))
            .count();
        let nodes = dot
            .lines()
            .filter(|l| l.trim_end().ends_with(';') && !l.contains("->") && l.starts_with("  \""))
            .count();
        assert_eq!(solid, 3);
        assert_eq!(nodes, 7);
        assert_eq!(dot, es_to_dot(&fixtures::es_example()));
    }

    #[test]
    fn cells_are_clustered() {
        let es = fixtures::es_example();
        let dot = es_cells_to_dot(&es, EventSet::EMPTY).unwrap();
        assert_eq!(dot.matches("subgraph cluster_").count(), 1);
        let n = es.names();
        let v = n.set(["e1", "e3"]).unwrap();
        assert!(es_cells_to_dot(&es, v).unwrap().contains("fillcolor"));
        assert!(es_cells_to_dot(&es, n.set(["e1"]).unwrap()).is_err());
    }

    #[test]
    fn ses_hyperedges() {
        let dot = ses_to_dot(&fixtures::ses_example());
        assert_eq!(dot.matches("shape=box").count(), 1);
        assert_eq!(dot.matches("[style=dashed, dir=none]").count(), 3 + 3);
    }
}
