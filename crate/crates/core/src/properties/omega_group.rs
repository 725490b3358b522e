//! Which unimodular ω leave `‖Id + ωT‖` invariant.

use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::rankone::RankOne;
use crate::report::{CheckReport, ReportBuilder, Verdict};
use crate::spaces::{real, Field, Scalar, SpaceDesc};

use super::equalities::omega_pair;
use super::{basis_probes, compare, random_probe, CheckOptions, ProbeNorm};

/// Roots of unity of order dividing this are tested exactly.
pub const ROOT_ORDER: usize = 360;
/// Size of the auxiliary uniform circle grid.
pub const CIRCLE_GRID: usize = 1024;
/// Probe budget per ω.
pub const SAMPLES_PER_OMEGA: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupClass {
    Trivial,
    NthRoots(u32),
    FullCircle,
    Undecided,
}

impl fmt::Display for GroupClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupClass::Trivial => f.write_str("trivial"),
            GroupClass::NthRoots(n) => write!(f, "nth_roots({n})"),
            GroupClass::FullCircle => f.write_str("full_circle"),
            GroupClass::Undecided => f.write_str("undecided"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaGroup {
    pub classification: GroupClass,
    /// Indices `k` of passing roots `e^{2πik/360}`.
    pub passing_roots: Vec<usize>,
    /// Indices `k` of passing circle points `e^{2πik/1024}`.
    pub passing_circle: Vec<usize>,
    pub undecided: usize,
    pub tested: usize,
    pub tolerance: f64,
}

fn root(k: usize, order: usize) -> Scalar {
    if k == 0 {
        return real(1.0);
    }
    Scalar::from_polar(1.0, TAU * k as f64 / order as f64)
}

/// Verdict for one ω, stopping at the first failing probe.
fn omega_status(space: &SpaceDesc, omega: Scalar, opts: &CheckOptions, fixed: &[RankOne]) -> Result<Verdict> {
    if omega == real(1.0) {
        return Ok(Verdict::Holds);
    }
    let mut all_hold = true;
    for k in 0..fixed.len() + opts.samples.min(SAMPLES_PER_OMEGA) {
        let t = match fixed.get(k) {
            Some(t) => t.clone(),
            None => random_probe(space, opts.seed, k - fixed.len(), ProbeNorm::Varied)?,
        };
        let (l, r) = omega_pair(space, omega, &t)?;
        match compare(&l, &r, opts.tol).verdict {
            Verdict::Fails => return Ok(Verdict::Fails),
            Verdict::Undecided => all_hold = false,
            Verdict::Holds => {}
        }
    }
    Ok(if all_hold { Verdict::Holds } else { Verdict::Undecided })
}

/// Classify the passing set: it must be the same group on both grids and
/// closed under products and conjugates.
fn classify(roots: &[Verdict], circle: &[Verdict]) -> GroupClass {
    if roots.iter().chain(circle).any(|v| *v == Verdict::Undecided) {
        return GroupClass::Undecided;
    }
    let pass: Vec<usize> = (0..ROOT_ORDER).filter(|&k| roots[k] == Verdict::Holds).collect();
    let closed = pass.iter().all(|&a| {
        roots[(ROOT_ORDER - a) % ROOT_ORDER] == Verdict::Holds
            && pass.iter().all(|&b| roots[(a + b) % ROOT_ORDER] == Verdict::Holds)
    });
    if !closed {
        return GroupClass::Undecided;
    }
    let n = pass.len();
    if n == ROOT_ORDER {
        return if circle.iter().all(|v| *v == Verdict::Holds) {
            GroupClass::FullCircle
        } else {
            GroupClass::Undecided
        };
    }
    // A closed subgroup of the 360th roots is the group of nth roots, n | 360.
    let expected_roots = (0..ROOT_ORDER).all(|k| (roots[k] == Verdict::Holds) == (k * n).is_multiple_of(ROOT_ORDER));
    let expected_circle =
        (0..CIRCLE_GRID).all(|k| (circle[k] == Verdict::Holds) == (k * n).is_multiple_of(CIRCLE_GRID));
    match (expected_roots && expected_circle, n) {
        (true, 1) => GroupClass::Trivial,
        (true, n) => GroupClass::NthRoots(n as u32),
        _ => GroupClass::Undecided,
    }
}

/// Estimate `{ω ∈ 𝕋 : ‖Id + ωT‖ = ‖Id + T‖ for all probed T}`.
///
/// Over ℝ only `ω = −1` is tested.
pub fn detect_omega_group(space: &SpaceDesc, opts: &CheckOptions) -> Result<(OmegaGroup, CheckReport)> {
    let fixed = basis_probes(space);
    let mut b = ReportBuilder::new("omega-group", space, opts.seed, opts.tol);
    let group = match space.field() {
        Field::Real => {
            let v = omega_status(space, real(-1.0), opts, &fixed)?;
            let classification = match v {
                Verdict::Holds => GroupClass::NthRoots(2),
                Verdict::Fails => GroupClass::Trivial,
                Verdict::Undecided => GroupClass::Undecided,
            };
            OmegaGroup {
                classification,
                passing_roots: if v == Verdict::Holds { vec![0, ROOT_ORDER / 2] } else { vec![0] },
                passing_circle: if v == Verdict::Holds { vec![0, CIRCLE_GRID / 2] } else { vec![0] },
                undecided: usize::from(v == Verdict::Undecided),
                tested: 2,
                tolerance: opts.tol,
            }
        }
        Field::Complex => {
            let statuses = super::sweep(ROOT_ORDER + CIRCLE_GRID, |k| {
                let omega = if k < ROOT_ORDER { root(k, ROOT_ORDER) } else { root(k - ROOT_ORDER, CIRCLE_GRID) };
                omega_status(space, omega, opts, &fixed)
            })?;
            let (roots, circle) = statuses.split_at(ROOT_ORDER);
            OmegaGroup {
                classification: classify(roots, circle),
                passing_roots: (0..ROOT_ORDER).filter(|&k| roots[k] == Verdict::Holds).collect(),
                passing_circle: (0..CIRCLE_GRID).filter(|&k| circle[k] == Verdict::Holds).collect(),
                undecided: statuses.iter().filter(|v| **v == Verdict::Undecided).count(),
                tested: statuses.len(),
                tolerance: opts.tol,
            }
        }
    };
    b.param("classification", group.classification.to_string());
    b.param("passing_roots", group.passing_roots.len());
    b.param("passing_circle", group.passing_circle.len());
    b.param("undecided_omegas", group.undecided);
    b.param("root_order", ROOT_ORDER);
    b.param("circle_grid", CIRCLE_GRID);
    b.param(
        "scope",
        format!(
            "omega grid of {} points, up to {} fixed and {} seeded probes per omega",
            group.tested,
            fixed.len(),
            opts.samples.min(SAMPLES_PER_OMEGA)
        ),
    );
    let verdict = if group.classification == GroupClass::Undecided { Verdict::Undecided } else { Verdict::Holds };
    let samples = group.tested;
    Ok((group, b.finish(verdict, 0.0, vec![], samples)))
}
