//! Graphviz export of `G(M)`.

use std::fmt::Write;

use crate::graph::graph_of;
use crate::pattern::PatternMatrix;

#[derive(Debug, Clone, Default)]
pub struct DotOptions {
    /// Nodes `0..states` are drawn as states; the rest as sensors.
    /// `None` treats every node as a state.
    pub states: Option<usize>,
    /// Per-state cost in `[0, 1]`, shown as fill from white (0) to red (1).
    pub costs: Option<Vec<f64>>,
    /// Final colouring; Black nodes are filled black, or outlined in bold
    /// when a cost fill is already present.
    pub black: Option<Vec<bool>>,
}

fn cost_fill(c: f64) -> String {
    let c = c.clamp(0.0, 1.0);
    let gb = (255.0 * (1.0 - c)).round() as u8;
    format!("#ff{gb:02x}{gb:02x}")
}

/// DOT digraph of `G(M)`: `*` edges solid, `?` edges dashed.
pub fn to_dot(m: &PatternMatrix, opts: &DotOptions) -> String {
    let g = graph_of(m);
    let n = g.node_count();
    let states = opts.states.unwrap_or(n).min(n);
    let mut out = String::from("digraph G {\n");
    for v in 0..n {
        let mut attrs = Vec::new();
        if v < states {
            attrs.push(format!("label=\"x{}\"", v + 1));
            attrs.push("shape=circle".to_string());
        } else {
            attrs.push(format!("label=\"y{}\"", v - states + 1));
            attrs.push("shape=star".to_string());
        }
        let cost = opts.costs.as_ref().and_then(|c| c.get(v)).copied();
        let black = opts.black.as_ref().and_then(|b| b.get(v)).copied().unwrap_or(false);
        match (cost, black) {
            (Some(c), b) => {
                attrs.push(format!("style=filled, fillcolor=\"{}\"", cost_fill(c)));
                if b {
                    attrs.push("penwidth=3".to_string());
                }
            }
            (None, true) => attrs.push("style=filled, fillcolor=black, fontcolor=white".to_string()),
            (None, false) => {}
        }
        let _ = writeln!(out, "  n{} [{}];", v + 1, attrs.join(", "));
    }
    for (from, to) in g.star_edges() {
        let _ = writeln!(out, "  n{} -> n{} [style=solid];", from + 1, to + 1);
    }
    for (from, to) in g.unknown_edges() {
        let _ = writeln!(out, "  n{} -> n{} [style=dashed];", from + 1, to + 1);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colorability::{color, combine_m, output_pattern};
    use crate::fixtures;

    fn count(dot: &str, needle: &str) -> usize {
        dot.lines().filter(|l| l.contains(needle)).count()
    }

    #[test]
    fn example_m_edge_counts() {
        let dot = to_dot(&fixtures::example_m(), &DotOptions::default());
        assert_eq!(count(&dot, "label="), 4);
        assert_eq!(count(&dot, "style=solid"), 8);
        assert_eq!(count(&dot, "style=dashed"), 1);
    }

    #[test]
    fn star_with_sensors() {
        let c = output_pattern(5, &fixtures::STAR_SENSORS).unwrap();
        let m = combine_m(&fixtures::star_a(), &c).unwrap();
        let coloring = color(&m);
        let black: Vec<bool> = (0..8).map(|v| coloring.state.is_black(v)).collect();
        let dot = to_dot(
            &m,
            &DotOptions {
                states: Some(5),
                black: Some(black),
                ..Default::default()
            },
        );
        assert_eq!(count(&dot, "label="), 8);
        assert_eq!(count(&dot, "shape=star"), 3);
        assert_eq!(count(&dot, "shape=circle"), 5);
        assert!(count(&dot, "fillcolor=black") >= 5);
    }

    #[test]
    fn cost_fill_range() {
        assert_eq!(cost_fill(0.0), "#ffffff");
        assert_eq!(cost_fill(1.0), "#ff0000");
        let dot = to_dot(
            &fixtures::star_a(),
            &DotOptions {
                costs: Some(vec![0.0, 0.25, 0.5, 0.75, 1.0]),
                ..Default::default()
            },
        );
        assert_eq!(count(&dot, "fillcolor"), 5);
    }

    #[test]
    fn empty_graph() {
        let dot = to_dot(&PatternMatrix::zeros(0, 0), &DotOptions::default());
        assert_eq!(dot, "digraph G {\n}\n");
    }
}
