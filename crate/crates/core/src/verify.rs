//! Numerical cross-checks of structural verdicts: realizations drawn from a
//! pattern class and a singular-value rank test of the observability matrix.
//!
//! A structural `true` is a universal claim, so any failing realization is a
//! bug. A structural `false` only says some realization is unobservable;
//! random sampling may or may not find one.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::colorability::check_observability;
use crate::error::Result;
use crate::pattern::{PatternMatrix, PatternSymbol, RealMatrix};

/// Default relative singular-value threshold of the rank test.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealizationSampler {
    pub seed: u64,
    /// Magnitude range for `*` entries, drawn log-uniformly with a random sign.
    pub star_range: (f64, f64),
    /// Probability that a `?` entry is exactly zero.
    pub unknown_zero_prob: f64,
}

impl Default for RealizationSampler {
    fn default() -> Self {
        Self {
            seed: 0,
            star_range: (0.1, 10.0),
            unknown_zero_prob: 0.3,
        }
    }
}

impl RealizationSampler {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn nonzero(&self, rng: &mut impl Rng) -> f64 {
        let (lo, hi) = self.star_range;
        let mag = (rng.random_range(lo.ln()..=hi.ln())).exp();
        if rng.random_bool(0.5) {
            mag
        } else {
            -mag
        }
    }

    /// Draws one member of `P(p)` from `rng`.
    pub fn draw(&self, p: &PatternMatrix, rng: &mut impl Rng) -> RealMatrix {
        let mut m = DMatrix::zeros(p.rows(), p.cols());
        for (i, j, s) in p.iter() {
            m[(i, j)] = match s {
                PatternSymbol::Zero => 0.0,
                PatternSymbol::Star => self.nonzero(rng),
                PatternSymbol::Unknown => {
                    if rng.random_bool(self.unknown_zero_prob) {
                        0.0
                    } else {
                        self.nonzero(rng)
                    }
                }
            };
        }
        RealMatrix::new(m).expect("sampled entries are finite")
    }
}

/// One realization of `p` drawn with the sampler's own seed.
pub fn sample_realization(p: &PatternMatrix, s: &RealizationSampler) -> RealMatrix {
    s.draw(p, &mut ChaCha8Rng::seed_from_u64(s.seed))
}

/// Orthonormal basis (as rows) of the observable subspace
/// `rowspace [C; CA; CA²; …]`.
///
/// Built block by block: each new block `W A` is orthogonalized against the
/// basis so far and its singular directions above the threshold are kept.
/// `A` is scaled to unit Frobenius norm first, and the threshold is `tol`
/// relative to `‖C‖₂` for the first block and to `‖A‖_F` afterwards. Unlike
/// the stacked matrix `[C; CA; …; CA^{n-1}]`, long chains of weak couplings
/// do not push the later blocks below the threshold.
pub fn observable_subspace(a: &RealMatrix, c: &RealMatrix, tol: f64) -> DMatrix<f64> {
    let n = a.rows();
    let a = a.as_dmatrix();
    let scale = a.norm();
    let a = if scale > 0.0 { a / scale } else { a.clone() };
    let mut basis = DMatrix::<f64>::zeros(0, n);
    let c = c.as_dmatrix();
    let c_norm = if c.nrows() == 0 { 0.0 } else { c.clone().singular_values().max() };
    let mut block = c.clone();
    let mut threshold = tol * c_norm;
    while block.nrows() > 0 && basis.nrows() < n {
        // two passes of block Gram-Schmidt against the basis
        for _ in 0..2 {
            let proj = &block * basis.transpose();
            block -= proj * &basis;
        }
        let svd = block.clone().svd(false, true);
        let v_t = svd.v_t.expect("requested right singular vectors");
        let keep: Vec<usize> = (0..svd.singular_values.len())
            .filter(|&k| svd.singular_values[k] > threshold)
            .take(n - basis.nrows())
            .collect();
        if keep.is_empty() {
            break;
        }
        let fresh = DMatrix::from_fn(keep.len(), n, |r, j| v_t[(keep[r], j)]);
        let mut grown = DMatrix::zeros(basis.nrows() + fresh.nrows(), n);
        grown.view_mut((0, 0), (basis.nrows(), n)).copy_from(&basis);
        grown.view_mut((basis.nrows(), 0), (fresh.nrows(), n)).copy_from(&fresh);
        basis = grown;
        block = &fresh * &a;
        threshold = tol;
    }
    basis
}

/// Kalman rank test: the observable subspace has dimension `n`, with
/// singular values below the threshold of [`observable_subspace`] treated
/// as zero.
pub fn kalman_rank_observable(a: &RealMatrix, c: &RealMatrix, tol: f64) -> bool {
    let n = a.rows();
    assert!(a.cols() == n && c.cols() == n, "inconsistent shapes for (A, C)");
    observable_subspace(a, c, tol).nrows() == n
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    /// Structurally observable and every realization passed.
    Consistent,
    /// Structurally observable but some realization failed the rank test.
    Violation,
    /// Not structurally observable; unobservable realizations were found.
    CounterexampleFound,
    /// Not structurally observable; sampling found no unobservable realization.
    /// Sampling cannot certify the necessity direction.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossValidationReport {
    pub structural: bool,
    pub trials: usize,
    pub passes: usize,
    pub failures: usize,
    /// Seeds of the failing trials, ascending.
    pub seeds_of_failures: Vec<u64>,
    pub conclusion: Conclusion,
}

/// Compares the structural verdict for `(a, c)` with the rank test on
/// `trials` realizations. Trial `t` uses seed `sampler.seed + t`.
pub fn cross_validate(
    a: &PatternMatrix,
    c: &PatternMatrix,
    trials: usize,
    sampler: &RealizationSampler,
) -> Result<CrossValidationReport> {
    let structural = check_observability(a, c)?.observable;
    let mut seeds_of_failures: Vec<u64> = (0..trials as u64)
        .into_par_iter()
        .filter_map(|t| {
            let seed = sampler.seed.wrapping_add(t);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ar = sampler.draw(a, &mut rng);
            let cr = sampler.draw(c, &mut rng);
            (!kalman_rank_observable(&ar, &cr, DEFAULT_RANK_TOL)).then_some(seed)
        })
        .collect();
    seeds_of_failures.sort_unstable();
    let failures = seeds_of_failures.len();
    let conclusion = match (structural, failures) {
        (true, 0) => Conclusion::Consistent,
        (true, _) => Conclusion::Violation,
        (false, 0) => Conclusion::Inconclusive,
        (false, _) => Conclusion::CounterexampleFound,
    };
    Ok(CrossValidationReport {
        structural,
        trials,
        passes: trials - failures,
        failures,
        seeds_of_failures,
        conclusion,
    })
}
