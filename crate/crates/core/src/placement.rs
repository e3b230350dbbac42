//! Cost-grouped heuristic search for a minimal observable sensor set, and
//! the exhaustive search used to certify it.
//!
//! States are priced by four components (out-degree, in-degree, PageRank
//! cost, industrial cost), each min-max normalized to `[0, 1]` and averaged
//! into an aggregate `c_n`. States with equal aggregate cost form a group;
//! groups are visited cheapest first. At group `n` the candidate pool is the
//! union of groups `1..=n`, and for `k = 1, 2, ...` every `k`-subset of the
//! pool that touches group `n` is tested. The search stops at the first
//! `(n, k)` round that yields an observable configuration and returns every
//! observable subset of that round.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::centrality::{pagerank, pagerank_cost, state_adjacency, PageRankConfig, PageRankCost};
use crate::colorability::{check_observability_with, output_pattern, ForcingRule};
use crate::error::{Error, Result};
use crate::pattern::{degree_costs, PatternMatrix};

/// Default tolerance when grouping equal aggregate costs.
pub const DEFAULT_EPS: f64 = 1e-9;
/// Default state-count ceiling for [`brute_force_minimum`].
pub const DEFAULT_BRUTE_FORCE_LIMIT: usize = 20;

/// Min-max normalization to `[0, 1]`; a constant vector maps to zeros.
pub fn normalize(c: &[f64]) -> Vec<f64> {
    let min = c.iter().copied().fold(f64::INFINITY, f64::min);
    let max = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = max - min;
    if !(span > 0.0) {
        return vec![0.0; c.len()];
    }
    c.iter().map(|v| (v - min) / span).collect()
}

/// Partitions states into groups of (near-)equal cost, cheapest group first.
///
/// States are sorted by cost; a state joins the current group while its cost
/// is within `eps` of the group's first member. Members are listed in
/// ascending state order.
pub fn group_by_cost(c_n: &[f64], eps: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..c_n.len()).collect();
    order.sort_by(|&a, &b| c_n[a].total_cmp(&c_n[b]).then(a.cmp(&b)));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut anchor = f64::NAN;
    for i in order {
        match groups.last_mut() {
            Some(g) if c_n[i] - anchor <= eps => g.push(i),
            _ => {
                anchor = c_n[i];
                groups.push(vec![i]);
            }
        }
    }
    for g in &mut groups {
        g.sort_unstable();
    }
    groups
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Computed,
    Supplied,
}

/// One value per state for each cost component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostComponents {
    pub c_out: Vec<f64>,
    pub c_in: Vec<f64>,
    pub c_pr: Vec<f64>,
    pub c_ind: Vec<f64>,
}

impl CostComponents {
    fn len(&self) -> usize {
        self.c_out.len()
    }

    fn normalized(&self) -> Self {
        Self {
            c_out: normalize(&self.c_out),
            c_in: normalize(&self.c_in),
            c_pr: normalize(&self.c_pr),
            c_ind: normalize(&self.c_ind),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostWeights {
    pub out: f64,
    pub r#in: f64,
    pub pr: f64,
    pub ind: f64,
}

impl Default for CostWeights {
    fn default() -> Self {
        Self {
            out: 0.25,
            r#in: 0.25,
            pr: 0.25,
            ind: 0.25,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostProvenance {
    pub c_out: Provenance,
    pub c_in: Provenance,
    pub c_pr: Provenance,
    pub c_ind: Provenance,
    pub c_n: Provenance,
}

/// How computed cost components are derived from the state pattern.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostOptions {
    pub weights: CostWeights,
    pub pagerank: PageRankConfig,
    pub pr_cost: PageRankCost,
    /// Count `?` entries in the degree components.
    pub count_unknown: bool,
    /// Rank states on the undirected version of the state graph.
    pub undirected: bool,
}

impl Default for CostOptions {
    fn default() -> Self {
        Self {
            weights: CostWeights::default(),
            pagerank: PageRankConfig::default(),
            pr_cost: PageRankCost::default(),
            count_unknown: true,
            undirected: false,
        }
    }
}

/// Per-state sensor costs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostTable {
    pub raw: CostComponents,
    pub normalized: CostComponents,
    pub c_n: Vec<f64>,
    pub weights: CostWeights,
    pub provenance: CostProvenance,
}

impl CostTable {
    /// Builds the table from raw components, aggregating with `weights`.
    pub fn from_raw(raw: CostComponents, weights: CostWeights) -> Result<Self> {
        let n = raw.len();
        for (name, v) in [("c_in", &raw.c_in), ("c_pr", &raw.c_pr), ("c_ind", &raw.c_ind)] {
            if v.len() != n {
                return Err(Error::Costs(format!("{name} has {} entries, expected {n}", v.len())));
            }
        }
        if let Some(v) = [&raw.c_out, &raw.c_in, &raw.c_pr, &raw.c_ind]
            .into_iter()
            .flatten()
            .find(|v| !v.is_finite())
        {
            return Err(Error::Costs(format!("non-finite cost {v}")));
        }
        let normalized = raw.normalized();
        let c_n = aggregate(&normalized, &weights);
        Ok(Self {
            raw,
            normalized,
            c_n,
            weights,
            provenance: CostProvenance {
                c_out: Provenance::Computed,
                c_in: Provenance::Computed,
                c_pr: Provenance::Computed,
                c_ind: Provenance::Computed,
                c_n: Provenance::Computed,
            },
        })
    }

    /// Computes the degree and PageRank components from the state pattern `a`.
    /// Industrial costs default to zero when not given.
    pub fn compute(a: &PatternMatrix, opts: &CostOptions, c_ind: Option<&[f64]>) -> Result<Self> {
        let n = a.rows();
        // Degrees of G(Aᵀ): out-degree of state j counts the nonzeros in row j of A.
        let deg = degree_costs(&a.transpose(), opts.count_unknown)?;
        let pr = pagerank(&state_adjacency(a, opts.undirected)?, &opts.pagerank)?;
        let c_ind = match c_ind {
            Some(v) if v.len() != n => {
                return Err(Error::Costs(format!("c_ind has {} entries, expected {n}", v.len())))
            }
            Some(v) => v.to_vec(),
            None => vec![0.0; n],
        };
        let raw = CostComponents {
            c_out: deg.c_out.iter().map(|&d| d as f64).collect(),
            c_in: deg.c_in.iter().map(|&d| d as f64).collect(),
            c_pr: pagerank_cost(&pr, opts.pr_cost)?,
            c_ind,
        };
        Self::from_raw(raw, opts.weights)
    }

    /// Replaces components with externally supplied columns. A supplied `c_n`
    /// is used as-is instead of the weighted aggregate.
    pub fn with_supplied(mut self, s: &SuppliedCosts) -> Result<Self> {
        let n = self.len();
        if s.states != n {
            return Err(Error::Costs(format!("cost table covers {} states, expected {n}", s.states)));
        }
        let slots: [(&Option<Vec<f64>>, &mut Vec<f64>, &mut Provenance); 4] = [
            (&s.c_out, &mut self.raw.c_out, &mut self.provenance.c_out),
            (&s.c_in, &mut self.raw.c_in, &mut self.provenance.c_in),
            (&s.c_pr, &mut self.raw.c_pr, &mut self.provenance.c_pr),
            (&s.c_ind, &mut self.raw.c_ind, &mut self.provenance.c_ind),
        ];
        for (given, slot, prov) in slots {
            if let Some(v) = given {
                *slot = v.clone();
                *prov = Provenance::Supplied;
            }
        }
        self.normalized = self.raw.normalized();
        match &s.c_n {
            Some(c_n) => {
                self.c_n = c_n.clone();
                self.provenance.c_n = Provenance::Supplied;
            }
            None => {
                self.c_n = aggregate(&self.normalized, &self.weights);
                self.provenance.c_n = Provenance::Computed;
            }
        }
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.c_n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c_n.is_empty()
    }

    /// CSV `state,c_out,c_in,c_pr,c_ind,c_n` of the normalized components.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("state,c_out,c_in,c_pr,c_ind,c_n\n");
        let nz = &self.normalized;
        for i in 0..self.len() {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                i + 1,
                nz.c_out[i],
                nz.c_in[i],
                nz.c_pr[i],
                nz.c_ind[i],
                self.c_n[i]
            ));
        }
        out
    }
}

fn aggregate(nz: &CostComponents, w: &CostWeights) -> Vec<f64> {
    (0..nz.len())
        .map(|i| w.out * nz.c_out[i] + w.r#in * nz.c_in[i] + w.pr * nz.c_pr[i] + w.ind * nz.c_ind[i])
        .collect()
}

/// Cost columns read from a CSV file, indexed by 0-based state.
///
/// The header is `state,c_out,c_in,c_pr,c_ind[,c_n]` with 1-based states in
/// any order. A column left empty on every row is treated as not supplied.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SuppliedCosts {
    pub states: usize,
    pub c_out: Option<Vec<f64>>,
    pub c_in: Option<Vec<f64>>,
    pub c_pr: Option<Vec<f64>>,
    pub c_ind: Option<Vec<f64>>,
    pub c_n: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
struct CostRecord {
    state: usize,
    c_out: Option<f64>,
    c_in: Option<f64>,
    c_pr: Option<f64>,
    c_ind: Option<f64>,
    #[serde(default)]
    c_n: Option<f64>,
}

impl SuppliedCosts {
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = reader.headers()?.clone();
        for required in ["state", "c_out", "c_in", "c_pr", "c_ind"] {
            if !headers.iter().any(|h| h == required) {
                return Err(Error::Costs(format!("missing column {required}")));
            }
        }
        let records = reader
            .deserialize::<CostRecord>()
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let n = records.len();
        let mut seen = vec![false; n];
        for r in &records {
            if r.state == 0 || r.state > n {
                return Err(Error::Costs(format!("state {} outside 1..={n}", r.state)));
            }
            if std::mem::replace(&mut seen[r.state - 1], true) {
                return Err(Error::Costs(format!("state {} listed twice", r.state)));
            }
        }
        let column = |name: &str, get: fn(&CostRecord) -> Option<f64>| -> Result<Option<Vec<f64>>> {
            let present = records.iter().filter(|r| get(r).is_some()).count();
            if present == 0 {
                return Ok(None);
            }
            if present != n {
                return Err(Error::Costs(format!("column {name} is only partly filled")));
            }
            let mut v = vec![0.0; n];
            for r in &records {
                let x = get(r).expect("checked above");
                if !x.is_finite() {
                    return Err(Error::Costs(format!("non-finite {name} for state {}", r.state)));
                }
                v[r.state - 1] = x;
            }
            Ok(Some(v))
        };
        Ok(Self {
            states: n,
            c_out: column("c_out", |r| r.c_out)?,
            c_in: column("c_in", |r| r.c_in)?,
            c_pr: column("c_pr", |r| r.c_pr)?,
            c_ind: column("c_ind", |r| r.c_ind)?,
            c_n: column("c_n", |r| r.c_n)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlacementOptions {
    pub eps: f64,
    /// Evaluate the subsets of one round on the rayon pool.
    pub parallel: bool,
    /// Skip subsets already found unobservable in an earlier round.
    pub memo: bool,
    pub rule: ForcingRule,
}

impl Default for PlacementOptions {
    fn default() -> Self {
        Self {
            eps: DEFAULT_EPS,
            parallel: true,
            memo: false,
            rule: ForcingRule::default(),
        }
    }
}

/// Outcome of [`place_sensors`]. Indices are 0-based states.
#[derive(Debug, Clone, PartialEq)]
pub struct PlacementResult {
    /// Observable sensor sets of the terminating round, in lexicographic order.
    pub accepted: Vec<Vec<usize>>,
    pub groups: Vec<Vec<usize>>,
    /// 0-based index of the terminating group.
    pub terminating_group: usize,
    /// Sensor count of every accepted set.
    pub subset_size: usize,
    pub combinations_evaluated: usize,
    pub rejected_count: usize,
    pub memo_hits: usize,
    /// No round succeeded and every state carries a sensor.
    pub fallback: bool,
    pub wall_time: Duration,
}

impl PlacementResult {
    pub fn accepted_patterns(&self, states: usize) -> Vec<PatternMatrix> {
        self.accepted
            .iter()
            .map(|s| output_pattern(states, s).expect("accepted sets are valid sensor sets"))
            .collect()
    }

    /// Serializable view with 1-based states; the wall time is left out so
    /// that reports are reproducible.
    pub fn report(&self) -> PlacementReport {
        let one_based = |sets: &[Vec<usize>]| -> Vec<Vec<usize>> {
            sets.iter().map(|s| s.iter().map(|i| i + 1).collect()).collect()
        };
        PlacementReport {
            accepted: one_based(&self.accepted),
            groups: one_based(&self.groups),
            terminating_group: self.terminating_group + 1,
            subset_size: self.subset_size,
            combinations_evaluated: self.combinations_evaluated,
            rejected_count: self.rejected_count,
            memo_hits: self.memo_hits,
            fallback: self.fallback,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacementReport {
    pub accepted: Vec<Vec<usize>>,
    pub groups: Vec<Vec<usize>>,
    pub terminating_group: usize,
    pub subset_size: usize,
    pub combinations_evaluated: usize,
    pub rejected_count: usize,
    pub memo_hits: usize,
    pub fallback: bool,
}

fn observable_with(a: &PatternMatrix, sensors: &[usize], rule: ForcingRule) -> bool {
    let c = output_pattern(a.rows(), sensors).expect("candidate sensors are distinct states");
    check_observability_with(a, &c, rule).expect("shapes are consistent").observable
}

fn evaluate(a: &PatternMatrix, subsets: &[Vec<usize>], parallel: bool, rule: ForcingRule) -> Vec<bool> {
    if parallel {
        subsets.par_iter().map(|s| observable_with(a, s, rule)).collect()
    } else {
        subsets.iter().map(|s| observable_with(a, s, rule)).collect()
    }
}

/// Heuristic minimal sensor placement over cost groups.
pub fn place_sensors(a: &PatternMatrix, costs: &CostTable, opts: &PlacementOptions) -> Result<PlacementResult> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            context: "place_sensors",
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if costs.len() != n {
        return Err(Error::Costs(format!("{} costs for {n} states", costs.len())));
    }
    let start = Instant::now();
    let groups = group_by_cost(&costs.c_n, opts.eps);
    let mut unobservable: HashSet<Vec<usize>> = HashSet::new();
    let mut combinations_evaluated = 0;
    let mut rejected_count = 0;
    let mut memo_hits = 0;
    let mut pool: Vec<usize> = Vec::with_capacity(n);

    for (g, group) in groups.iter().enumerate() {
        pool.extend(group);
        pool.sort_unstable();
        for k in 1..=pool.len() {
            let mut subsets: Vec<Vec<usize>> = pool
                .iter()
                .copied()
                .combinations(k)
                .filter(|s| s.iter().any(|x| group.contains(x)))
                .collect();
            if opts.memo {
                let before = subsets.len();
                subsets.retain(|s| !unobservable.contains(s));
                memo_hits += before - subsets.len();
            }
            let verdicts = evaluate(a, &subsets, opts.parallel, opts.rule);
            combinations_evaluated += subsets.len();
            let mut accepted = Vec::new();
            for (s, ok) in subsets.into_iter().zip(verdicts) {
                if ok {
                    accepted.push(s);
                } else {
                    rejected_count += 1;
                    if opts.memo {
                        unobservable.insert(s);
                    }
                }
            }
            if !accepted.is_empty() {
                return Ok(PlacementResult {
                    accepted,
                    groups,
                    terminating_group: g,
                    subset_size: k,
                    combinations_evaluated,
                    rejected_count,
                    memo_hits,
                    fallback: false,
                    wall_time: start.elapsed(),
                });
            }
        }
    }

    Ok(PlacementResult {
        accepted: vec![(0..n).collect()],
        terminating_group: groups.len().saturating_sub(1),
        groups,
        subset_size: n,
        combinations_evaluated,
        rejected_count,
        memo_hits,
        fallback: true,
        wall_time: start.elapsed(),
    })
}

/// Smallest observable sensor count and every observable set of that size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruteForceMinimum {
    pub min_k: usize,
    /// 0-based sensor sets in lexicographic order.
    pub all_min_sets: Vec<Vec<usize>>,
}

/// Exhaustive search over non-empty sensor subsets by increasing size,
/// under the default forcing rule.
pub fn brute_force_minimum(a: &PatternMatrix, limit: usize) -> Result<BruteForceMinimum> {
    brute_force_minimum_with(a, limit, ForcingRule::default())
}

pub fn brute_force_minimum_with(a: &PatternMatrix, limit: usize, rule: ForcingRule) -> Result<BruteForceMinimum> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            context: "brute_force_minimum",
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if n > limit {
        return Err(Error::SizeLimit { n, limit });
    }
    for k in 1..=n {
        let subsets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
        let verdicts = evaluate(a, &subsets, true, rule);
        let all_min_sets: Vec<Vec<usize>> = subsets
            .into_iter()
            .zip(verdicts)
            .filter_map(|(s, ok)| ok.then_some(s))
            .collect();
        if !all_min_sets.is_empty() {
            return Ok(BruteForceMinimum { min_k: k, all_min_sets });
        }
    }
    // only reachable for n = 0
    Ok(BruteForceMinimum {
        min_k: 0,
        all_min_sets: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::pattern::PatternSymbol;

    fn supplied_table(a: &PatternMatrix, rows: &[fixtures::CostRow]) -> CostTable {
        let s = SuppliedCosts::from_csv(&fixtures::cost_csv(rows)).unwrap();
        CostTable::compute(a, &CostOptions::default(), None)
            .unwrap()
            .with_supplied(&s)
            .unwrap()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize(&[1.0, 3.0, 5.0]), vec![0.0, 0.5, 1.0]);
        assert_eq!(normalize(&[2.0; 3]), vec![0.0; 3]);
        assert!(normalize(&[]).is_empty());
    }

    #[test]
    fn star_table_hub_row_normalizes_to_one() {
        // raw out/in-degrees of G(Aᵀ) for the star network
        let out = normalize(&[1.0, 1.0, 1.0, 2.0, 4.0]);
        let inn = normalize(&[2.0, 1.0, 1.0, 1.0, 4.0]);
        assert_eq!((out[4], inn[4]), (1.0, 1.0));
    }

    #[test]
    fn published_groupings() {
        let star: Vec<f64> = sorted_c_n(&fixtures::STAR_COSTS);
        assert_eq!(group_by_cost(&star, DEFAULT_EPS), vec![vec![1, 2], vec![0], vec![3], vec![4]]);
        let wdn = sorted_c_n(&fixtures::WDN_COSTS);
        assert_eq!(
            group_by_cost(&wdn, DEFAULT_EPS),
            vec![vec![7], vec![5, 6], vec![0], vec![3], vec![4], vec![1, 2]]
        );
        assert_eq!(group_by_cost(&[0.3; 4], DEFAULT_EPS), vec![vec![0, 1, 2, 3]]);
    }

    fn sorted_c_n(rows: &[fixtures::CostRow]) -> Vec<f64> {
        let mut v = vec![0.0; rows.len()];
        for r in rows {
            v[r.state - 1] = r.c_n;
        }
        v
    }

    #[test]
    fn eps_merges_close_costs() {
        assert_eq!(group_by_cost(&[0.0, 0.05, 0.2], 0.1), vec![vec![0, 1], vec![2]]);
        assert_eq!(group_by_cost(&[0.0, 0.05, 0.2], 0.0), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn star_placement() {
        let a = fixtures::star_a();
        let costs = supplied_table(&a, &fixtures::STAR_COSTS);
        let r = place_sensors(&a, &costs, &PlacementOptions::default()).unwrap();
        // the two cheapest leaves already make the star observable
        assert_eq!(r.accepted, vec![vec![1, 2]]);
        assert_eq!((r.terminating_group, r.subset_size), (0, 2));
        assert!(!r.fallback);
    }

    #[test]
    fn wdn_golden_placement() {
        let a = fixtures::triangular_wdn_pattern();
        let costs = supplied_table(&a, &fixtures::WDN_COSTS);
        let r = place_sensors(&a, &costs, &PlacementOptions::default()).unwrap();
        assert_eq!(r.accepted, vec![vec![3, 5], vec![3, 6]]);
        assert_eq!((r.terminating_group, r.subset_size), (3, 2));
    }

    #[test]
    fn seeded_rule_reproduces_published_sets() {
        let opts = PlacementOptions {
            rule: ForcingRule::Seeded,
            ..Default::default()
        };
        let a = fixtures::star_a();
        let r = place_sensors(&a, &supplied_table(&a, &fixtures::STAR_COSTS), &opts).unwrap();
        assert_eq!(r.accepted, vec![vec![0, 1, 2]]);
        let a = fixtures::triangular_wdn_pattern();
        let r = place_sensors(&a, &supplied_table(&a, &fixtures::WDN_COSTS), &opts).unwrap();
        assert_eq!(r.accepted, vec![vec![3, 5], vec![3, 6]]);
    }

    #[test]
    fn star_diagonal_uniform_costs() {
        let a = PatternMatrix::diag(3, PatternSymbol::Star);
        let costs = CostTable::from_raw(
            CostComponents {
                c_out: vec![0.0; 3],
                c_in: vec![0.0; 3],
                c_pr: vec![0.0; 3],
                c_ind: vec![0.0; 3],
            },
            CostWeights::default(),
        )
        .unwrap();
        let r = place_sensors(&a, &costs, &PlacementOptions::default()).unwrap();
        assert_eq!(r.groups.len(), 1);
        // G(M) self-forces, but the diagonal of Ā is all `?`, so G(M̄) needs
        // a sensor on every state
        assert_eq!(r.accepted, vec![vec![0, 1, 2]]);
        assert!(!r.fallback);
        for rule in [ForcingRule::Seeded, ForcingRule::AnyNode] {
            assert_eq!(brute_force_minimum_with(&a, 20, rule).unwrap().min_k, 3);
        }
    }

    #[test]
    fn brute_force_on_fixtures() {
        // two leaves, or a leaf and state 4, already suffice for the star
        let star = brute_force_minimum(&fixtures::star_a(), DEFAULT_BRUTE_FORCE_LIMIT).unwrap();
        assert_eq!(star.min_k, 2);
        assert_eq!(star.all_min_sets, vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        let seeded = brute_force_minimum_with(&fixtures::star_a(), DEFAULT_BRUTE_FORCE_LIMIT, ForcingRule::Seeded).unwrap();
        assert_eq!(seeded.all_min_sets, vec![vec![1, 3], vec![2, 3]]);
        let wdn = brute_force_minimum(&fixtures::triangular_wdn_pattern(), DEFAULT_BRUTE_FORCE_LIMIT).unwrap();
        assert_eq!(wdn.min_k, 2);
        assert!(wdn.all_min_sets.contains(&vec![3, 5]));
        assert!(wdn.all_min_sets.contains(&vec![3, 6]));
    }

    #[test]
    fn brute_force_limit() {
        let a = PatternMatrix::diag(4, PatternSymbol::Star);
        assert_eq!(brute_force_minimum(&a, 3).unwrap_err().kind(), "size_limit");
    }

    #[test]
    fn memo_never_hits_with_group_filter() {
        let a = fixtures::triangular_wdn_pattern();
        let costs = supplied_table(&a, &fixtures::WDN_COSTS);
        let opts = PlacementOptions {
            memo: true,
            ..Default::default()
        };
        let with = place_sensors(&a, &costs, &opts).unwrap();
        let without = place_sensors(&a, &costs, &PlacementOptions::default()).unwrap();
        assert_eq!(with.memo_hits, 0);
        assert_eq!(with.report(), without.report());
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let a = fixtures::triangular_wdn_pattern();
        let costs = supplied_table(&a, &fixtures::WDN_COSTS);
        let seq = PlacementOptions {
            parallel: false,
            ..Default::default()
        };
        assert_eq!(
            place_sensors(&a, &costs, &seq).unwrap().report(),
            place_sensors(&a, &costs, &PlacementOptions::default()).unwrap().report()
        );
    }

    #[test]
    fn cost_csv_errors() {
        assert!(SuppliedCosts::from_csv("state,c_out,c_in,c_pr\n1,0,0,0\n").is_err());
        assert!(SuppliedCosts::from_csv("state,c_out,c_in,c_pr,c_ind\n1,0,0,0,0\n1,0,0,0,0\n").is_err());
        assert!(SuppliedCosts::from_csv("state,c_out,c_in,c_pr,c_ind\n1,0,0,0,0\n3,0,0,0,0\n").is_err());
        assert!(SuppliedCosts::from_csv("state,c_out,c_in,c_pr,c_ind\n1,0,,0,0\n2,0,1,0,0\n").is_err());
        assert!(SuppliedCosts::from_csv("state,c_out,c_in,c_pr,c_ind\n1,x,0,0,0\n").is_err());
    }

    #[test]
    fn empty_columns_keep_computed_values() {
        let a = fixtures::star_a();
        let s = SuppliedCosts::from_csv(
            "state,c_out,c_in,c_pr,c_ind\n1,,,,1\n2,,,,1\n3,,,,1\n4,,,,1\n5,,,,1\n",
        )
        .unwrap();
        let base = CostTable::compute(&a, &CostOptions::default(), None).unwrap();
        let t = base.clone().with_supplied(&s).unwrap();
        assert_eq!(t.provenance.c_ind, Provenance::Supplied);
        assert_eq!(t.provenance.c_out, Provenance::Computed);
        assert_eq!(t.c_n, base.c_n);
        assert!(base.clone().with_supplied(&SuppliedCosts { states: 3, ..Default::default() }).is_err());
    }

    #[test]
    fn report_is_one_based() {
        let a = fixtures::star_a();
        let costs = supplied_table(&a, &fixtures::STAR_COSTS);
        let rep = place_sensors(&a, &costs, &PlacementOptions::default()).unwrap().report();
        assert_eq!(rep.accepted, vec![vec![2, 3]]);
        assert_eq!(rep.terminating_group, 1);
        assert_eq!(rep.groups[0], vec![2, 3]);
    }
}
