//! Color-change rule and the two-graph strong structural observability test.
//!
//! For a structured pair `(A, C)` the combined matrices are
//! `M = [Aᵀ Cᵀ]` and `M̄ = [Āᵀ Cᵀ]`, where `Ā` replaces each diagonal entry
//! by `*` if it was `0` and by `?` otherwise. Both graphs must be colorable.
//!
//! In `G(M)` node `j` forces node `i` when `i` is the only white
//! out-neighbour of `j` and the edge `j → i` is a `*` edge. A white node
//! reached through a `?` edge counts as an out-neighbour but can never be
//! forced, so it blocks `j`. Self-loops count, so a node with a `*`
//! self-loop and no other white out-neighbour forces itself.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pattern::{PatternMatrix, PatternSymbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    White,
    Black,
}

/// One application of the color-change rule (0-based node indices).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForcingEvent {
    pub forcer: usize,
    pub forced: usize,
    pub round: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringState {
    /// Number of leading nodes that represent states.
    pub states: usize,
    pub colors: Vec<Color>,
    pub trace: Vec<ForcingEvent>,
}

impl ColoringState {
    pub fn black_nodes(&self) -> Vec<usize> {
        self.colors
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == Color::Black)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_black(&self, node: usize) -> bool {
        self.colors[node] == Color::Black
    }

    /// Forcing events as JSON lines with 1-based node numbers.
    pub fn trace_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.trace {
            out.push_str(&format!(
                "{{\"forcer\":{},\"forced\":{},\"round\":{}}}\n",
                e.forcer + 1,
                e.forced + 1,
                e.round + 1
            ));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    pub colorable: bool,
    pub state: ColoringState,
}

/// Which nodes may apply the color-change rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForcingRule {
    /// Every node forces whatever its own color.
    #[default]
    AnyNode,
    /// Propagation from the sensors. Sensor nodes start Black and only Black
    /// nodes force, except that a node whose single white out-neighbour is
    /// itself through a `*` self-loop turns Black. Every forcing step is also
    /// an any-node step, so this is a stricter, still sufficient test.
    Seeded,
}

impl std::str::FromStr for ForcingRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "seeded" => Ok(Self::Seeded),
            "any" => Ok(Self::AnyNode),
            _ => Err(Error::InvalidConfig(format!(
                "unknown forcing rule '{s}' (expected 'seeded' or 'any')"
            ))),
        }
    }
}

/// Which eligible forcing node to apply at each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForcingOrder {
    LowestIndex,
    /// Uniformly random eligible node, seeded.
    Random(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservabilityVerdict {
    pub colorable_m: bool,
    pub colorable_mbar: bool,
    pub observable: bool,
    pub trace_m: ColoringState,
    pub trace_mbar: ColoringState,
}

/// `Ā`: off-diagonal entries copied, diagonal `*` where `A(i,i) = 0`, `?` otherwise.
pub fn build_abar(a: &PatternMatrix) -> Result<PatternMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            context: "build_abar",
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let mut abar = a.clone();
    for i in 0..a.rows() {
        let d = match a.get(i, i) {
            PatternSymbol::Zero => PatternSymbol::Star,
            _ => PatternSymbol::Unknown,
        };
        abar.set(i, i, d);
    }
    Ok(abar)
}

/// `[Aᵀ | Cᵀ]`, of size `n_x × (n_x + n_y)`.
pub fn combine_m(a: &PatternMatrix, c: &PatternMatrix) -> Result<PatternMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            context: "combine_m",
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if c.cols() != a.rows() {
        return Err(Error::DimensionMismatch {
            context: "combine_m: output pattern columns",
            expected: (c.rows(), a.rows()),
            found: c.shape(),
        });
    }
    a.transpose().hcat(&c.transpose())
}

/// Runs the default color-change rule to its fixpoint, applying the
/// lowest-index eligible forcing node first.
pub fn color(m: &PatternMatrix) -> Coloring {
    color_with(m, ForcingRule::default(), ForcingOrder::LowestIndex)
}

pub fn color_with(m: &PatternMatrix, rule: ForcingRule, order: ForcingOrder) -> Coloring {
    let states = m.rows();
    let nodes = m.rows().max(m.cols());

    // out-neighbours over `*` and `?` edges, flagged by whether they can be forced
    let mut out: Vec<Vec<(usize, bool)>> = vec![Vec::new(); nodes];
    let mut into: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    for (i, j, s) in m.iter() {
        if s.is_nonzero() {
            out[j].push((i, s == PatternSymbol::Star));
            into[i].push(j);
        }
    }

    let mut colors = vec![Color::White; nodes];
    if rule == ForcingRule::Seeded {
        colors[states..].fill(Color::Black);
    }
    let mut white_out: Vec<usize> = out.iter().map(Vec::len).collect();
    let mut trace = Vec::new();
    let mut rng = match order {
        ForcingOrder::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        ForcingOrder::LowestIndex => None,
    };

    // the unique white out-neighbour `j` may force, if any
    let target = |j: usize, colors: &[Color], white_out: &[usize]| -> Option<usize> {
        if white_out[j] != 1 {
            return None;
        }
        let (i, star) = out[j]
            .iter()
            .copied()
            .find(|&(i, _)| colors[i] == Color::White)
            .expect("white_out counts the white out-neighbours");
        if !star {
            return None;
        }
        match rule {
            ForcingRule::AnyNode => Some(i),
            ForcingRule::Seeded => (colors[j] == Color::Black || i == j).then_some(i),
        }
    };

    loop {
        let step = match rng.as_mut() {
            None => (0..nodes).find_map(|j| target(j, &colors, &white_out).map(|i| (j, i))),
            Some(rng) => {
                let eligible: Vec<(usize, usize)> = (0..nodes)
                    .filter_map(|j| target(j, &colors, &white_out).map(|i| (j, i)))
                    .collect();
                if eligible.is_empty() {
                    None
                } else {
                    Some(eligible[rng.random_range(0..eligible.len())])
                }
            }
        };
        let Some((j, i)) = step else { break };
        colors[i] = Color::Black;
        for &p in &into[i] {
            white_out[p] -= 1;
        }
        trace.push(ForcingEvent {
            forcer: j,
            forced: i,
            round: trace.len(),
        });
    }

    let colorable = colors[..states].iter().all(|&c| c == Color::Black);
    Coloring {
        colorable,
        state: ColoringState {
            states,
            colors,
            trace,
        },
    }
}

/// Strong structural observability of `(A, C)`: both `G(M)` and `G(M̄)` colorable.
pub fn check_observability(a: &PatternMatrix, c: &PatternMatrix) -> Result<ObservabilityVerdict> {
    check_observability_with(a, c, ForcingRule::default())
}

pub fn check_observability_with(
    a: &PatternMatrix,
    c: &PatternMatrix,
    rule: ForcingRule,
) -> Result<ObservabilityVerdict> {
    let m = combine_m(a, c)?;
    let mbar = combine_m(&build_abar(a)?, c)?;
    let cm = color_with(&m, rule, ForcingOrder::LowestIndex);
    let cmbar = color_with(&mbar, rule, ForcingOrder::LowestIndex);
    Ok(ObservabilityVerdict {
        colorable_m: cm.colorable,
        colorable_mbar: cmbar.colorable,
        observable: cm.colorable && cmbar.colorable,
        trace_m: cm.state,
        trace_mbar: cmbar.state,
    })
}

/// Evaluates many pairs in parallel; results keep the input order.
pub fn check_batch(pairs: &[(PatternMatrix, PatternMatrix)]) -> Vec<Result<ObservabilityVerdict>> {
    pairs
        .par_iter()
        .map(|(a, c)| check_observability(a, c))
        .collect()
}

/// Output pattern with one `*` per sensor, sensor `k` measuring state `sensors[k]`.
pub fn output_pattern(states: usize, sensors: &[usize]) -> Result<PatternMatrix> {
    let mut c = PatternMatrix::zeros(sensors.len(), states);
    for (row, &s) in sensors.iter().enumerate() {
        if s >= states {
            return Err(Error::InvalidSensor(format!(
                "state {} out of range 1..={states}",
                s + 1
            )));
        }
        if sensors[..row].contains(&s) {
            return Err(Error::InvalidSensor(format!("state {} listed twice", s + 1)));
        }
        c.set(row, s, PatternSymbol::Star);
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use PatternSymbol::*;

    #[test]
    fn abar_of_example_matches_published() {
        let a = fixtures::example_a();
        assert_eq!(build_abar(&a).unwrap().transpose(), fixtures::example_abar_t());
    }

    #[test]
    fn abar_of_zero_is_star_diagonal() {
        let z = PatternMatrix::zeros(3, 3);
        assert_eq!(build_abar(&z).unwrap(), PatternMatrix::diag(3, Star));
        assert!(build_abar(&PatternMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn combine_reproduces_example_matrices() {
        let a = fixtures::example_a();
        assert_eq!(combine_m(&a, &fixtures::example_c()).unwrap(), fixtures::example_m());
        assert_eq!(
            combine_m(&build_abar(&a).unwrap(), &fixtures::example_c()).unwrap(),
            fixtures::example_mbar()
        );
        assert_eq!(
            combine_m(&a, &fixtures::example_c_adjusted()).unwrap(),
            fixtures::example_m_adjusted()
        );
    }

    #[test]
    fn combine_without_sensors_is_transpose() {
        let a = fixtures::example_a();
        let m = combine_m(&a, &PatternMatrix::zeros(0, 3)).unwrap();
        assert_eq!(m, a.transpose());
        assert!(combine_m(&a, &PatternMatrix::zeros(1, 2)).is_err());
    }

    #[test]
    fn example_colorability() {
        let c = color(&fixtures::example_m());
        assert!(!c.colorable);
        assert!(c.state.trace.is_empty());
        let c = color(&fixtures::example_m_adjusted());
        assert!(c.colorable);
        // sensor 5 forces state 3, state 1 forces 2, then state 2 forces 1
        let steps: Vec<(usize, usize)> = c.state.trace.iter().map(|e| (e.forcer, e.forced)).collect();
        assert_eq!(steps, vec![(4, 2), (0, 1), (1, 0)]);
        let seeded = color_with(&fixtures::example_m_adjusted(), ForcingRule::Seeded, ForcingOrder::LowestIndex);
        let steps: Vec<(usize, usize)> = seeded.state.trace.iter().map(|e| (e.forcer, e.forced)).collect();
        assert_eq!(steps, vec![(4, 2), (2, 0), (0, 1)]);
        assert!(!color_with(&fixtures::example_m(), ForcingRule::Seeded, ForcingOrder::LowestIndex).colorable);
    }

    #[test]
    fn self_loops_force_themselves() {
        let c = color(&PatternMatrix::diag(3, Star));
        assert!(c.colorable);
        let steps: Vec<(usize, usize)> = c.state.trace.iter().map(|e| (e.forcer, e.forced)).collect();
        assert_eq!(steps, vec![(0, 0), (1, 1), (2, 2)]);
    }

    #[test]
    fn rules_differ_on_white_forcers() {
        // state 1 is white with the hub as its only out-neighbour
        let a = fixtures::star_a();
        let c = output_pattern(5, &[1, 2]).unwrap();
        assert!(check_observability(&a, &c).unwrap().observable);
        assert!(!check_observability_with(&a, &c, ForcingRule::Seeded).unwrap().observable);
    }

    #[test]
    fn unknown_out_neighbours_block_forcing() {
        // states 3 and 4 are unmeasured and uncoupled; ignoring the `?`
        // self-loop of state 3 would let 3 and 4 force each other
        let a: PatternMatrix = "0000\n0000\n00?*\n00**".parse().unwrap();
        let c = output_pattern(4, &[0, 1]).unwrap();
        let v = check_observability(&a, &c).unwrap();
        assert!(!v.colorable_m && !v.colorable_mbar);
        // sensors on {4, 8} of the WDN stall on the `?` head diagonal of M̄
        let a = fixtures::triangular_wdn_pattern();
        let c = output_pattern(8, &[3, 7]).unwrap();
        for rule in [ForcingRule::AnyNode, ForcingRule::Seeded] {
            assert!(!check_observability_with(&a, &c, rule).unwrap().observable);
        }
    }

    #[test]
    fn rule_names() {
        assert_eq!("seeded".parse::<ForcingRule>().unwrap(), ForcingRule::Seeded);
        assert_eq!("any".parse::<ForcingRule>().unwrap(), ForcingRule::AnyNode);
        assert!("black".parse::<ForcingRule>().is_err());
    }

    #[test]
    fn unknown_edges_never_force() {
        let m: PatternMatrix = "?".parse().unwrap();
        assert!(!color(&m).colorable);
        // node 1 sees a `*` to 2 and a `?` to itself, both white
        let m: PatternMatrix = "?0\n*0".parse().unwrap();
        assert!(!color(&m).colorable);
    }

    #[test]
    fn star_fixture_verdicts() {
        let a = fixtures::star_a();
        let c = output_pattern(5, &[0, 1, 2]).unwrap();
        assert!(check_observability(&a, &c).unwrap().observable);
        let c = output_pattern(5, &[1]).unwrap();
        let v = check_observability(&a, &c).unwrap();
        assert!(!v.observable);
        assert_eq!(v.observable, v.colorable_m && v.colorable_mbar);
    }

    #[test]
    fn wdn_fixture_verdicts() {
        let a = fixtures::triangular_wdn_pattern();
        for sensors in [[3, 5], [3, 6]] {
            let c = output_pattern(8, &sensors).unwrap();
            assert!(check_observability(&a, &c).unwrap().observable, "{sensors:?}");
        }
        let c = output_pattern(8, &[7]).unwrap();
        assert!(!check_observability(&a, &c).unwrap().observable);
    }

    #[test]
    fn trace_json_lines_are_one_based() {
        let c = color(&PatternMatrix::diag(1, Star));
        assert_eq!(c.state.trace_jsonl(), "{\"forcer\":1,\"forced\":1,\"round\":1}\n");
    }

    #[test]
    fn output_pattern_validates_sensors() {
        assert!(output_pattern(3, &[3]).is_err());
        assert!(output_pattern(3, &[1, 1]).is_err());
        let c = output_pattern(3, &[2, 0]).unwrap();
        assert_eq!(c.to_string(), "00*\n*00\n");
    }

    #[test]
    fn batch_keeps_input_order() {
        let a = fixtures::star_a();
        let pairs: Vec<_> = [vec![0, 1, 2], vec![1], vec![1, 2, 3]]
            .into_iter()
            .map(|s| (a.clone(), output_pattern(5, &s).unwrap()))
            .collect();
        let got: Vec<bool> = check_batch(&pairs).into_iter().map(|r| r.unwrap().observable).collect();
        let want: Vec<bool> = pairs
            .iter()
            .map(|(a, c)| check_observability(a, c).unwrap().observable)
            .collect();
        assert_eq!(got, want);
    }
}
