//! Slice, denting, hull and near-point geometry of real polytope balls.
//!
//! Every polytope computation reduces to maximizing over a polytope cut by
//! one half-space. The candidate set is the ball vertices on the kept side
//! plus the crossings of the cutting hyperplane with every segment between
//! two vertices. That set contains all vertices of the cut polytope and lies
//! inside it, so a maximum of a convex function over it is exact.

use std::f64::consts::PI;

use crate::error::{NelabError, Result};
use crate::opnorm::NormEnclosure;
use crate::report::{CheckReport, ReportBuilder, Verdict, Witness};
use crate::sampling::stream;
use crate::spaces::{pair, ExtremePoints, Field, Functional, SpaceDesc, Vector};

/// Feasibility slack for points produced by hyperplane crossings.
const CUT_SLACK: f64 = 1e-12;
/// Dimension cap for the exact near-point search and the denting check.
pub const GEOM_DIM_CAP: usize = 4;
/// Dimension cap for the hull checker.
pub const HULL_DIM_CAP: usize = 3;
/// Dimension cap for the exact slice diameter.
pub const SLICE_DIM_CAP: usize = 6;
/// Angular grid for two-dimensional Euclidean searches.
const CIRCLE_STEPS: usize = 1 << 16;
/// Samples used when no exact method applies.
const SLICE_SAMPLES: usize = 512;
/// Largest number of slice-width halvings tried per `eps`.
const MAX_HALVINGS: usize = 60;

/// Default `eps` values for the denting check.
pub const DEFAULT_EPS_GRID: [f64; 3] = [0.5, 0.1, 0.01];

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn real_coords(v: &[crate::spaces::Scalar], what: &str) -> Result<Vec<f64>> {
    if v.iter().any(|z| z.im != 0.0) {
        return Err(NelabError::FieldMismatch(format!("{what} must have real coordinates")));
    }
    Ok(v.iter().map(|z| z.re).collect())
}

/// Vertices and facet normals of a real polytope ball.
struct Polytope {
    vertices: Vec<Vec<f64>>,
    facets: Vec<Vec<f64>>,
}

impl Polytope {
    fn of(space: &SpaceDesc, cap: usize) -> Result<Self> {
        if space.field() != Field::Real {
            return Err(NelabError::FieldMismatch("polytope geometry needs a real space".into()));
        }
        let facets = space.facets_with_cap(cap)?.iter().map(|f| f.real_parts()).collect();
        let vertices = match space.extreme_points()? {
            ExtremePoints::Vertices(v) => v.iter().map(Vector::real_parts).collect(),
            ExtremePoints::ArcFamily { .. } => unreachable!("a polytope ball has finitely many vertices"),
        };
        Ok(Self { vertices, facets })
    }

    fn norm(&self, y: &[f64]) -> f64 {
        self.facets.iter().map(|p| dot(p, y)).fold(f64::NEG_INFINITY, f64::max)
    }

    fn dual_norm(&self, f: &[f64]) -> f64 {
        self.vertices.iter().map(|v| dot(f, v)).fold(f64::NEG_INFINITY, f64::max)
    }

    fn active(&self, x: &[f64]) -> Vec<&Vec<f64>> {
        self.facets.iter().filter(|p| (dot(p, x) - 1.0).abs() <= 1e-12).collect()
    }
}

/// Points of `conv(points) ∩ {h·y ≥ c}` that include all its vertices.
fn cut_candidates(points: &[Vec<f64>], h: &[f64], c: f64) -> Vec<Vec<f64>> {
    let vals: Vec<f64> = points.iter().map(|p| dot(h, p) - c).collect();
    let mut out: Vec<Vec<f64>> =
        points.iter().zip(&vals).filter(|(_, v)| **v >= -CUT_SLACK).map(|(p, _)| p.clone()).collect();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if (vals[i] < 0.0) != (vals[j] < 0.0) && vals[i] != vals[j] {
                let s = vals[i] / (vals[i] - vals[j]);
                out.push(points[i].iter().zip(&points[j]).map(|(a, b)| a + s * (b - a)).collect());
            }
        }
    }
    out
}

fn max_pairwise(points: &[Vec<f64>], norm: impl Fn(&[f64]) -> f64) -> f64 {
    let mut best = 0.0f64;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d: Vec<f64> = points[i].iter().zip(&points[j]).map(|(a, b)| a - b).collect();
            best = best.max(norm(&d));
        }
    }
    best
}

fn exact(v: f64, method: &str) -> NormEnclosure {
    let pad = 8.0 * f64::EPSILON * v.abs().max(1.0);
    NormEnclosure { lo: (v - pad).max(0.0), hi: v + pad, certified: true, method: method.into() }
}

/// Diameter of the closed slice `{y ∈ B_X : Re f(y) ≥ ‖f‖* − alpha}`.
///
/// Exact for real polytope balls of dimension at most 6 and for real
/// Euclidean balls; otherwise a sampled lower bound with upper bound 2.
pub fn slice_diameter(space: &SpaceDesc, f: &Functional, alpha: f64) -> Result<NormEnclosure> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(NelabError::InvalidArgument(format!("alpha = {alpha} out of range (need alpha > 0)")));
    }
    let sup = space.dual_norm(f)?;
    if sup == 0.0 {
        return Err(NelabError::ZeroVector);
    }
    let c = sup - alpha;
    if space.polytope_leaf().is_some() && space.dim() <= SLICE_DIM_CAP {
        let poly = Polytope::of(space, SLICE_DIM_CAP)?;
        let pts = cut_candidates(&poly.vertices, &f.real_parts(), c);
        return Ok(exact(max_pairwise(&pts, |d| poly.norm(d)), "slice-vertices"));
    }
    if space.is_real() && space.is_euclidean() && space.dim() >= 2 {
        let h = c / sup;
        let d = if h <= 0.0 { 2.0 } else { 2.0 * (1.0 - h * h).max(0.0).sqrt() };
        return Ok(exact(d, "slice-cap"));
    }
    let mut pts: Vec<Vector> = (0..SLICE_SAMPLES as u64)
        .map(|k| space.sample_sphere_at(0, stream::SEARCH, k))
        .filter(|y| pair(f, y).map(|v| v.re >= c).unwrap_or(false))
        .collect();
    if let Ok(peak) = space.dual().support_functional(&f.as_vector()) {
        pts.push(peak.as_vector());
    }
    let mut lo = 0.0f64;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            lo = lo.max(space.norm(&pts[i].sub(&pts[j]))?);
        }
    }
    Ok(NormEnclosure { lo, hi: 2.0, certified: false, method: "slice-sampled".into() })
}

/// Report form of [`slice_diameter`]. Without `eps` the verdict says whether
/// the enclosure is certified; with `eps` it tests `diameter ≤ eps`.
pub fn check_slice(space: &SpaceDesc, f: &Functional, alpha: f64, eps: Option<f64>, tol: f64) -> Result<CheckReport> {
    let d = slice_diameter(space, f, alpha)?;
    let mut b = ReportBuilder::new("slice", space, 0, tol);
    b.param("f", coords_json(f.coords())).param("alpha", alpha);
    b.param("diameter_lo", d.lo).param("diameter_hi", d.hi).param("method", d.method.clone());
    b.param("scope", "closed slice of the unit ball");
    let (verdict, violation) = match eps {
        None => (if d.certified { Verdict::Holds } else { Verdict::Undecided }, 0.0),
        Some(e) => {
            b.param("eps", e);
            let violation = (d.mid() - e).max(0.0);
            if d.lo - e >= tol {
                (Verdict::Fails, violation)
            } else if d.certified && d.hi <= e + tol {
                (Verdict::Holds, violation)
            } else {
                (Verdict::Undecided, violation)
            }
        }
    };
    let witnesses = match (verdict, eps) {
        (Verdict::Fails, Some(e)) => vec![Witness::new(f.coords().to_vec(), vec![])
            .with("alpha", alpha)
            .with("eps", e)
            .with_enclosure("diameter", &d)
            .with("violation", violation)],
        _ => vec![],
    };
    Ok(b.finish(verdict, violation, witnesses, 1))
}

/// Outcome of the search for `y ∈ S_X` with `‖x + y‖ > 2 − ε` and `Re f(y) > 1 − ε`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeomSearch {
    pub found: Option<Vector>,
    /// No candidate met both inequalities.
    pub exhausted: bool,
    /// The exhaustion is proven for the whole sphere, not only for the samples.
    pub certified: bool,
    /// Largest value of `min(‖x+y‖ − (2−ε), Re f(y) − (1−ε))` found.
    pub margin: f64,
    pub evaluated: usize,
    pub best: Vector,
}

fn check_unit(space: &SpaceDesc, x: &Vector, f: &Functional) -> Result<()> {
    let (nx, nf) = (space.norm(x)?, space.dual_norm(f)?);
    if (nx - 1.0).abs() > 1e-9 || (nf - 1.0).abs() > 1e-9 {
        return Err(NelabError::InvalidArgument(format!("x and f must have norm one (got {nx} and {nf})")));
    }
    Ok(())
}

/// Search the unit sphere for `y` meeting both strict inequalities.
///
/// Real polytope balls up to dimension 4 are searched exactly over every
/// facet face; real two-dimensional Euclidean balls on an angular grid with
/// a Lipschitz certificate; other spaces on `budget` seeded samples.
pub fn search_geometric_condition(
    space: &SpaceDesc,
    x: &Vector,
    f: &Functional,
    eps: f64,
    budget: usize,
    seed: u64,
) -> Result<GeomSearch> {
    check_unit(space, x, f)?;
    if !eps.is_finite() || eps < 0.0 {
        return Err(NelabError::InvalidArgument(format!("eps = {eps} out of range (need eps >= 0)")));
    }
    let margin_of =
        |y: &Vector| -> Result<f64> { Ok((space.norm(&x.add(y))? - (2.0 - eps)).min(pair(f, y)?.re - (1.0 - eps))) };
    let finish = |best: Vector, margin: f64, evaluated: usize, certified: bool| GeomSearch {
        found: (margin > 0.0).then(|| best.clone()),
        exhausted: margin <= 0.0,
        certified: margin > 0.0 || certified,
        margin,
        evaluated,
        best,
    };
    if space.polytope_leaf().is_some() && space.dim() <= GEOM_DIM_CAP && x.is_real() && f.is_real() {
        let poly = Polytope::of(space, GEOM_DIM_CAP)?;
        let (xr, fr) = (x.real_parts(), f.real_parts());
        let mut best = (f64::NEG_INFINITY, Vec::new());
        let mut evaluated = 0;
        for phi in &poly.facets {
            let face: Vec<Vec<f64>> =
                poly.vertices.iter().filter(|v| (dot(phi, v) - 1.0).abs() <= 1e-12).cloned().collect();
            for psi in &poly.facets {
                // crossings of ψ(x+y) − (2−ε) = f(y) − (1−ε) inside the face
                let h: Vec<f64> = psi.iter().zip(&fr).map(|(p, q)| p - q).collect();
                let c = 1.0 - dot(psi, &xr);
                let mut cands = cut_candidates(&face, &h, c);
                cands.extend(cut_candidates(&face, &h.iter().map(|v| -v).collect::<Vec<_>>(), -c));
                for y in cands {
                    evaluated += 1;
                    let sum: Vec<f64> = xr.iter().zip(&y).map(|(a, b)| a + b).collect();
                    let m = (poly.norm(&sum) - (2.0 - eps)).min(dot(&fr, &y) - (1.0 - eps));
                    if m > best.0 {
                        best = (m, y);
                    }
                }
            }
        }
        return Ok(finish(Vector::from_real(&best.1), best.0, evaluated, true));
    }
    if space.is_real() && space.is_euclidean() && space.dim() == 2 && x.is_real() && f.is_real() {
        // both terms are 1-Lipschitz in the angle, so the grid maximum is within h/2
        let h = 2.0 * PI / CIRCLE_STEPS as f64;
        let mut best = (f64::NEG_INFINITY, Vector::zeros(2));
        for k in 0..CIRCLE_STEPS {
            let th = k as f64 * h;
            let y = Vector::from_real(&[th.cos(), th.sin()]);
            let m = margin_of(&y)?;
            if m > best.0 {
                best = (m, y);
            }
        }
        let certified = best.0 + h / 2.0 + 1e-12 < 0.0;
        return Ok(finish(best.1, best.0, CIRCLE_STEPS, certified));
    }
    let mut best = (f64::NEG_INFINITY, x.clone());
    let mut starts = vec![x.clone(), space.dual().support_functional(&f.as_vector())?.as_vector()];
    starts.extend((0..budget as u64).map(|k| space.sample_sphere_at(seed, stream::SEARCH, k)));
    let evaluated = starts.len();
    for y in starts {
        let m = margin_of(&y)?;
        if m > best.0 {
            best = (m, y);
        }
    }
    Ok(finish(best.1, best.0, evaluated, false))
}

/// Report form of [`search_geometric_condition`]: holds when a point is found,
/// fails when exhaustion is certified with margin at most `−tol`.
#[allow(clippy::too_many_arguments)]
pub fn check_geometric_condition(
    space: &SpaceDesc,
    x: &Vector,
    f: &Functional,
    eps: f64,
    budget: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    let s = search_geometric_condition(space, x, f, eps, budget, seed)?;
    let violation = (-s.margin).max(0.0);
    let verdict = if s.found.is_some() {
        Verdict::Holds
    } else if s.certified && violation >= tol {
        Verdict::Fails
    } else {
        Verdict::Undecided
    };
    let mut b = ReportBuilder::new("geom", space, seed, tol);
    b.param("eps", eps).param("margin", s.margin).param("certified", s.certified);
    b.param("x", coords_json(x.coords())).param("f", coords_json(f.coords()));
    b.param("scope", if s.certified { "whole unit sphere" } else { "seeded sphere samples" });
    let witnesses = match verdict {
        Verdict::Fails => vec![Witness::new(f.coords().to_vec(), s.best.coords().to_vec())
            .with("eps", eps)
            .with("margin", s.margin)
            .with("violation", violation)],
        _ => vec![],
    };
    Ok(b.finish(verdict, violation, witnesses, s.evaluated))
}

pub(crate) fn coords_json(c: &[crate::spaces::Scalar]) -> String {
    c.iter().map(|z| crate::scalar::format_scalar(*z)).collect::<Vec<_>>().join(",")
}

/// Lower bound on the diameter of every closed slice containing a non-vertex `x0`.
///
/// For an interior point a ball of radius `1 − ‖x0‖` around it meets every
/// slice through it. On the sphere, for each vertex `v` of the minimal face
/// the segment from `x0` towards `v` extends backwards by `s⁻`, and any slice
/// through `x0` keeps one of the two endpoints.
fn denting_lower_bound(poly: &Polytope, x0: &[f64]) -> f64 {
    let n = poly.norm(x0);
    if n < 1.0 - 1e-12 {
        return 1.0 - n;
    }
    let active = poly.active(x0);
    let mut best = 0.0f64;
    for v in &poly.vertices {
        if !active.iter().all(|p| (dot(p, v) - 1.0).abs() <= 1e-12) {
            continue;
        }
        let d: Vec<f64> = v.iter().zip(x0).map(|(a, b)| a - b).collect();
        let back = poly
            .facets
            .iter()
            .filter(|p| dot(p, &d) < -1e-15)
            .map(|p| (1.0 - dot(p, x0)).max(0.0) / -dot(p, &d))
            .fold(f64::INFINITY, f64::min);
        best = best.max(back.min(1.0) * poly.norm(&d));
    }
    best
}

fn is_vertex(poly: &Polytope, x0: &[f64]) -> bool {
    poly.vertices.iter().any(|v| v.iter().zip(x0).all(|(a, b)| (a - b).abs() <= 1e-12))
}

/// Whether `x0` lies in closed slices of diameter at most each `eps`.
///
/// At a vertex the slice functional is the mean of the active facets and the
/// width is halved until the exact diameter is small enough. Elsewhere the
/// verdict rests on a certified lower bound for every slice through `x0`.
pub fn check_denting(space: &SpaceDesc, x0: &Vector, eps_grid: &[f64], tol: f64) -> Result<CheckReport> {
    if space.dim() > GEOM_DIM_CAP || space.polytope_leaf().is_none() {
        return Err(NelabError::UnsupportedSpace(format!(
            "denting needs a real polytope ball of dimension at most {GEOM_DIM_CAP}"
        )));
    }
    let poly = Polytope::of(space, GEOM_DIM_CAP)?;
    let xr = real_coords(x0.coords(), "x0")?;
    if poly.norm(&xr) > 1.0 + 1e-12 {
        return Err(NelabError::InvalidArgument("x0 lies outside the unit ball".into()));
    }
    if let Some(e) = eps_grid.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
        return Err(NelabError::InvalidArgument(format!("eps = {e} out of range (need eps > 0)")));
    }
    let mut b = ReportBuilder::new("denting", space, 0, tol);
    b.param("x0", coords_json(x0.coords())).param("eps_grid", eps_grid.to_vec());
    b.param("scope", "closed slices, exact vertex enumeration");
    if is_vertex(&poly, &xr) {
        let f = Functional::from_real(&facet_mean(&poly, &xr));
        let mut widths = Vec::new();
        let mut all = true;
        for &eps in eps_grid {
            let mut alpha = 1.0;
            let mut hit = None;
            for _ in 0..MAX_HALVINGS {
                let d = slice_diameter(space, &f, alpha)?;
                if d.hi <= eps {
                    hit = Some((alpha, d.hi));
                    break;
                }
                alpha /= 2.0;
            }
            match hit {
                Some((a, d)) => widths.push(serde_json::json!({"eps": eps, "alpha": a, "diameter": d})),
                None => all = false,
            }
        }
        b.param("kind", "vertex").param("functional", coords_json(f.coords())).param("slices", widths);
        let verdict = if all { Verdict::Holds } else { Verdict::Undecided };
        return Ok(b.finish(verdict, 0.0, vec![], eps_grid.len()));
    }
    let lower = denting_lower_bound(&poly, &xr);
    let kind = if poly.norm(&xr) < 1.0 - 1e-12 { "interior" } else { "non-vertex" };
    b.param("kind", kind).param("lower_bound", lower);
    let violations: Vec<f64> = eps_grid.iter().map(|e| lower - e).collect();
    let worst = violations.iter().copied().fold(0.0, f64::max);
    let (verdict, witnesses) = if violations.iter().any(|v| *v >= tol) {
        let k = violations.iter().position(|v| *v >= worst - 1e-12 * worst.max(1.0)).unwrap_or(0);
        let g = if kind == "interior" { vec![0.0; xr.len()] } else { facet_mean(&poly, &xr) };
        let w = Witness::new(Functional::from_real(&g).into_coords(), x0.coords().to_vec())
            .with("eps", eps_grid[k])
            .with("lower_bound", lower)
            .with("violation", violations[k]);
        (Verdict::Fails, vec![w])
    } else {
        (Verdict::Undecided, vec![])
    };
    Ok(b.finish(verdict, worst, witnesses, eps_grid.len()))
}

fn facet_mean(poly: &Polytope, x: &[f64]) -> Vec<f64> {
    let active = poly.active(x);
    let mut g = vec![0.0; x.len()];
    for p in &active {
        for (gi, pi) in g.iter_mut().zip(p.iter()) {
            *gi += pi / active.len() as f64;
        }
    }
    g
}

pub(crate) fn denting_bound(space: &SpaceDesc, x0: &Vector) -> Result<f64> {
    let poly = Polytope::of(space, GEOM_DIM_CAP)?;
    Ok(denting_lower_bound(&poly, &real_coords(x0.coords(), "x0")?))
}

/// `‖f‖* − sup{f(y) : y ∈ B_X, ‖y − x‖ ≥ 2 − eps}` and a maximizing `y`.
///
/// The constraint set is the union over facets `φ` of `B_X ∩ {φ(y − x) ≥ 2 − eps}`.
pub fn hull_gap(space: &SpaceDesc, x: &Vector, eps: f64, f: &Functional) -> Result<(f64, Vector)> {
    if space.dim() > HULL_DIM_CAP || space.polytope_leaf().is_none() {
        return Err(NelabError::UnsupportedSpace(format!(
            "the hull checker needs a real polytope ball of dimension at most {HULL_DIM_CAP}"
        )));
    }
    if !eps.is_finite() || eps < 0.0 {
        return Err(NelabError::InvalidArgument(format!("eps = {eps} out of range (need eps >= 0)")));
    }
    let poly = Polytope::of(space, HULL_DIM_CAP)?;
    let xr = real_coords(x.coords(), "x")?;
    let fr = real_coords(f.coords(), "f")?;
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for phi in &poly.facets {
        for y in cut_candidates(&poly.vertices, phi, 2.0 - eps + dot(phi, &xr)) {
            let v = dot(&fr, &y);
            if v > best.0 {
                best = (v, y);
            }
        }
    }
    if best.1.is_empty() {
        return Err(NelabError::InvalidArgument("no point of the ball is far enough from x".into()));
    }
    Ok((poly.dual_norm(&fr) - best.0, Vector::from_real(&best.1)))
}

/// Unit functionals along the nonzero directions of `{−1, 0, 1}ⁿ`.
pub fn default_directions(space: &SpaceDesc) -> Vec<Functional> {
    let n = space.dim();
    let dual = space.dual();
    let mut out = Vec::new();
    for code in 0..3usize.pow(n as u32) {
        let mut c = code;
        let v: Vec<f64> = (0..n)
            .map(|_| {
                let d = (c % 3) as f64 - 1.0;
                c /= 3;
                d
            })
            .collect();
        if v.iter().all(|d| *d == 0.0) {
            continue;
        }
        let f = Functional::from_real(&v);
        let m = dual.norm(&f.as_vector()).unwrap_or(1.0);
        out.push(f.scale(crate::spaces::real(1.0 / m)));
    }
    out
}

/// Whether the closed convex hull of `{y ∈ B_X : ‖y − x‖ ≥ 2 − eps}` is all
/// of `B_X`, tested through support gaps along `directions`.
pub fn check_hull(space: &SpaceDesc, x: &Vector, eps: f64, directions: &[Functional], tol: f64) -> Result<CheckReport> {
    let nx = space.norm(x)?;
    if (nx - 1.0).abs() > 1e-9 {
        return Err(NelabError::InvalidArgument(format!("x must have norm one (got {nx})")));
    }
    let gaps = super::sweep(directions.len(), |k| hull_gap(space, x, eps, &directions[k]))?;
    let max_gap = gaps.iter().map(|g| g.0).fold(0.0, f64::max);
    let mut b = ReportBuilder::new("hull", space, 0, tol);
    b.param("x", coords_json(x.coords())).param("eps", eps).param("directions", directions.len());
    b.param("gaps", gaps.iter().map(|g| g.0).collect::<Vec<_>>());
    b.param("scope", "listed directions, exact per direction");
    let (verdict, witnesses) = if max_gap <= tol {
        (Verdict::Holds, vec![])
    } else {
        let k = gaps.iter().position(|g| g.0 >= max_gap - 1e-12 * max_gap.max(1.0)).unwrap_or(0);
        let w = Witness::new(directions[k].coords().to_vec(), gaps[k].1.coords().to_vec())
            .with("eps", eps)
            .with("gap", gaps[k].0)
            .with("violation", gaps[k].0);
        (Verdict::Fails, vec![w])
    };
    Ok(b.finish(verdict, max_gap, witnesses, directions.len()))
}
