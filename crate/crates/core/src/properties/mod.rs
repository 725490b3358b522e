//! Norm-equality checkers and exact fixtures.
//!
//! Every check compares enclosures and reports one of three verdicts. A
//! sample fails only when the enclosures are separated by at least the
//! tolerance, and holds only when both are certified and within it. A
//! `holds` verdict is scoped to the probed family recorded under `scope`.

mod equalities;
mod fixtures;
mod geometry;
mod omega_group;
mod recompute;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{NelabError, Result};
use crate::opnorm::NormEnclosure;
use crate::rankone::{random_rankone, RankOne};
use crate::report::Verdict;
use crate::sampling::{derive_seed, rng_for, stream};
use crate::spaces::{real, Field, Scalar, SpaceDesc};

pub use equalities::{
    check_bad_projections, check_daugavet, check_dual_transfer, check_omega, check_tsquare, check_tsquare_with, Sign,
};
pub use fixtures::{
    check_spread, default_lemma43_grid, fixture_lemma43, fixture_prop_f_shape, scalar_cases, ScalarGrid, F_SHAPE_GRID,
};
pub use geometry::{
    check_denting, check_geometric_condition, check_hull, check_slice, default_directions, hull_gap,
    search_geometric_condition, slice_diameter, GeomSearch, DEFAULT_EPS_GRID,
};
pub use omega_group::{detect_omega_group, GroupClass, OmegaGroup};
pub use recompute::recompute_witness;

/// Sampling parameters shared by the randomized checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckOptions {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self { samples: 1000, seed: 42, tol: 1e-9 }
    }
}

/// Probes with basis indices beyond this dimension are restricted to the diagonal.
const BASIS_PROBE_DIM: usize = 8;

pub(crate) fn phases(field: Field) -> &'static [Scalar] {
    const REAL: [Scalar; 2] = [Scalar::new(1.0, 0.0), Scalar::new(-1.0, 0.0)];
    const COMPLEX: [Scalar; 4] =
        [Scalar::new(1.0, 0.0), Scalar::new(-1.0, 0.0), Scalar::new(0.0, 1.0), Scalar::new(0.0, -1.0)];
    match field {
        Field::Real => &REAL,
        Field::Complex => &COMPLEX,
    }
}

/// `c·e_j*⊗e_i` for unimodular phases `c`, ordered by `(j, i, c)`.
pub(crate) fn basis_probes(space: &SpaceDesc) -> Vec<RankOne> {
    let n = space.dim();
    let mut out = Vec::new();
    for j in 0..n {
        for i in 0..n {
            if n > BASIS_PROBE_DIM && i != j {
                continue;
            }
            for &c in phases(space.field()) {
                out.push(RankOne::basis(space, j, i, c).expect("indices in range"));
            }
        }
    }
    out
}

/// How random probes are scaled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum ProbeNorm {
    Unit,
    /// Uniform in `[0.25, 4]`.
    Varied,
}

pub(crate) fn random_probe(space: &SpaceDesc, seed: u64, index: usize, norm: ProbeNorm) -> Result<RankOne> {
    let target = match norm {
        ProbeNorm::Unit => 1.0,
        ProbeNorm::Varied => 0.25 + 3.75 * rng_for(seed, stream::NORM_TARGET, index as u64).random::<f64>(),
    };
    random_rankone(space, derive_seed(seed, stream::RANKONE, index as u64), target)
}

/// Enclosure of an exactly known value, padded for rounding.
pub(crate) fn exact_value(v: f64, n: usize) -> NormEnclosure {
    let pad = (n as f64 + 3.0) * f64::EPSILON * v.abs().max(f64::MIN_POSITIVE);
    NormEnclosure { lo: (v - pad).max(0.0), hi: v + pad, certified: true, method: "exact".into() }
}

/// Per-sample comparison of two enclosures that should coincide.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Compared {
    pub verdict: Verdict,
    pub violation: f64,
}

pub(crate) fn compare(l: &NormEnclosure, r: &NormEnclosure, tol: f64) -> Compared {
    let gap_lo = (l.lo - r.hi).max(r.lo - l.hi).max(0.0);
    let gap_hi = (l.hi - r.lo).max(r.hi - l.lo);
    let violation = (l.mid() - r.mid()).abs();
    let verdict = if gap_lo >= tol {
        Verdict::Fails
    } else if l.certified && r.certified && gap_hi <= tol {
        Verdict::Holds
    } else {
        Verdict::Undecided
    };
    Compared { verdict, violation }
}

/// Combined verdict, maximal violation and the index of the witness sample.
///
/// The witness is the failing sample of largest violation; near-ties go to
/// the lowest index so parallel and serial runs agree.
pub(crate) fn aggregate(results: &[Compared]) -> (Verdict, f64, Option<usize>) {
    let max_violation = results.iter().map(|c| c.violation).fold(0.0, f64::max);
    let worst_fail =
        results.iter().filter(|c| c.verdict == Verdict::Fails).map(|c| c.violation).fold(f64::NEG_INFINITY, f64::max);
    if worst_fail > f64::NEG_INFINITY {
        let cut = worst_fail - 1e-12 * worst_fail.abs().max(1.0);
        let idx = results.iter().position(|c| c.verdict == Verdict::Fails && c.violation >= cut);
        return (Verdict::Fails, max_violation, idx);
    }
    let verdict = if results.iter().all(|c| c.verdict == Verdict::Holds) { Verdict::Holds } else { Verdict::Undecided };
    (verdict, max_violation, None)
}

/// Ordered parallel map over sample indices.
pub(crate) fn sweep<T: Send>(n: usize, f: impl Fn(usize) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    (0..n).into_par_iter().map(f).collect()
}

pub(crate) fn check_unimodular(omega: Scalar) -> Result<()> {
    if (omega.norm() - 1.0).abs() > 1e-12 {
        return Err(NelabError::InvalidArgument(format!(
            "omega = {} is not unimodular (|omega| = {})",
            crate::scalar::format_scalar(omega),
            omega.norm()
        )));
    }
    Ok(())
}

pub(crate) fn one() -> Scalar {
    real(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn enc(lo: f64, hi: f64, certified: bool) -> NormEnclosure {
        NormEnclosure { lo, hi, certified, method: "test".into() }
    }

    #[test]
    fn comparison_is_three_valued() {
        let tol = 1e-9;
        assert_eq!(compare(&enc(1.0, 1.0, true), &enc(2.0, 2.0, true), tol).verdict, Verdict::Fails);
        assert_eq!(compare(&enc(1.0, 1.0, true), &enc(1.0, 1.0, true), tol).verdict, Verdict::Holds);
        assert_eq!(compare(&enc(0.5, 1.0, false), &enc(1.0, 1.0, true), tol).verdict, Verdict::Undecided);
        assert_eq!(compare(&enc(0.5, 1.0, true), &enc(1.0, 1.0, true), tol).verdict, Verdict::Undecided);
    }

    #[test]
    fn aggregate_prefers_lowest_index_on_ties() {
        let f = |v| Compared { verdict: Verdict::Fails, violation: v };
        let h = Compared { verdict: Verdict::Holds, violation: 0.0 };
        let (v, m, w) = aggregate(&[h, f(1.0), f(0.5), f(1.0)]);
        assert_eq!((v, m, w), (Verdict::Fails, 1.0, Some(1)));
        assert_eq!(aggregate(&[h, h]).0, Verdict::Holds);
        let u = Compared { verdict: Verdict::Undecided, violation: 0.1 };
        assert_eq!(aggregate(&[h, u]), (Verdict::Undecided, 0.1, None));
    }

    #[test]
    fn unimodular_guard() {
        assert!(check_unimodular(Scalar::new(0.6, 0.8)).is_ok());
        let e = check_unimodular(real(0.5)).unwrap_err().to_string();
        assert!(e.contains("not unimodular"));
    }
}
