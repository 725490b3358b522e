//! Norms of `a·Id + b·T` for rank-one `T`, and a small dense-matrix oracle.

use serde::{Deserialize, Serialize};

use crate::calculus::{apply_calculus, EntireFunction};
use crate::error::{check_dim, NelabError, Result};
use crate::matrix::DenseMatrix;
use crate::rankone::RankOne;
use crate::sampling::stream;
use crate::spaces::{real, Exponent, ExtremePoints, Field, Leaf, Scalar, SpaceDesc, Vector};

/// An interval `[lo, hi]` containing an operator norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormEnclosure {
    pub lo: f64,
    pub hi: f64,
    /// Bounds are rigorous up to rounding and `hi − lo` met the requested tolerance.
    pub certified: bool,
    pub method: String,
}

impl NormEnclosure {
    fn new(lo: f64, hi: f64, certified: bool, method: &str) -> Self {
        let lo = lo.max(0.0);
        Self { lo: lo.min(hi), hi: hi.max(lo), certified, method: method.to_string() }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Overlap test with a small relative slack for rounding in either route.
    pub fn intersects(&self, other: &NormEnclosure) -> bool {
        let slack = 1e-12 * self.hi.max(other.hi).max(1.0);
        self.lo <= other.hi + slack && other.lo <= self.hi + slack
    }

    pub fn contains(&self, v: f64, slack: f64) -> bool {
        self.lo - slack <= v && v <= self.hi + slack
    }
}

/// Tuning for the enclosure engine.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormConfig {
    /// Width below which a sampled enclosure counts as certified.
    pub tol: f64,
    /// Random starts for the uncertified fallback.
    pub fallback_samples: usize,
    pub seed: u64,
}

impl Default for NormConfig {
    fn default() -> Self {
        Self { tol: 1e-11, fallback_samples: 256, seed: 0 }
    }
}

fn rounding_pad(n: usize, scale: f64) -> f64 {
    (n as f64 + 3.0) * f64::EPSILON * scale.max(f64::MIN_POSITIVE)
}

/// `a·Id + b·(x*⊗x)` as a cheap operator.
struct Affine<'a> {
    a: Scalar,
    b: Scalar,
    x: &'a [Scalar],
    f: &'a [Scalar],
}

impl Affine<'_> {
    fn apply(&self, y: &[Scalar]) -> Vec<Scalar> {
        let s = self.b * self.f.iter().zip(y).map(|(u, v)| u * v).sum::<Scalar>();
        y.iter().zip(self.x).map(|(yi, xi)| self.a * yi + s * xi).collect()
    }

    fn entry(&self, i: usize, j: usize) -> Scalar {
        let d = if i == j { self.a } else { Scalar::default() };
        d + self.b * self.x[i] * self.f[j]
    }

    /// `w ↦ w∘A`, the transpose action on functionals.
    fn apply_transpose(&self, w: &[Scalar]) -> Vec<Scalar> {
        let s = self.b * w.iter().zip(self.x).map(|(u, v)| u * v).sum::<Scalar>();
        w.iter().zip(self.f).map(|(wi, fi)| self.a * wi + s * fi).collect()
    }

    fn to_matrix(&self) -> DenseMatrix {
        let n = self.x.len();
        DenseMatrix::from_fn(n, n, |i, j| self.entry(i, j))
    }
}

/// `‖a·y + b·x*(y)·x‖` at a single point.
pub fn affine_norm_at(space: &SpaceDesc, a: Scalar, b: Scalar, t: &RankOne, y: &Vector) -> Result<f64> {
    check_dim(space.dim(), y.len())?;
    let op = Affine { a, b, x: t.vector().coords(), f: t.functional().coords() };
    Ok(space.norm_coords(&op.apply(y.coords())))
}

pub fn norm_affine_rankone(space: &SpaceDesc, a: Scalar, b: Scalar, t: &RankOne) -> Result<NormEnclosure> {
    norm_affine_rankone_with(space, a, b, t, &NormConfig::default())
}

/// Enclosure of `‖a·Id + b·T‖`.
///
/// Single ℓ∞/ℓ1 leaves use row/column sums of moduli; Euclidean spaces reduce
/// to the invariant subspace `span{x, x̄*}`; a real ℓ2-sum of two polytope
/// blocks maximizes over the extreme family at finitely many angles. Anything
/// else gets a sampled lower bound and the triangle-inequality upper bound.
pub fn norm_affine_rankone_with(
    space: &SpaceDesc,
    a: Scalar,
    b: Scalar,
    t: &RankOne,
    cfg: &NormConfig,
) -> Result<NormEnclosure> {
    check_dim(space.dim(), t.space().dim())?;
    let n = space.dim();
    let op = Affine { a, b, x: t.vector().coords(), f: t.functional().coords() };
    let xnorm = space.norm_coords(op.x);
    let cap = a.norm() + b.norm() * space.dual().norm_coords(op.f) * xnorm;
    let pad = rounding_pad(n, cap);

    let leaves = space.leaves();
    let mut enc = if let [leaf] = leaves {
        match leaf {
            Leaf { block_len: 1, p: Exponent::Inf, .. } if leaf.blocks > 1 => {
                let v = (0..n).map(|i| (0..n).map(|j| op.entry(i, j).norm()).sum::<f64>()).fold(0.0, f64::max);
                NormEnclosure::new(v - pad, v + pad, true, "linf-row-sums")
            }
            Leaf { block_len: 1, p: Exponent::One, .. } if leaf.blocks > 1 => {
                let v = (0..n).map(|j| (0..n).map(|i| op.entry(i, j).norm()).sum::<f64>()).fold(0.0, f64::max);
                NormEnclosure::new(v - pad, v + pad, true, "l1-column-sums")
            }
            _ if space.is_euclidean() => euclidean(&op, pad),
            _ => fallback(space, &op, cfg),
        }
    } else if space.is_euclidean() {
        euclidean(&op, pad)
    } else if is_real_polytope_pair(space, &op) {
        sum2_exact(space, &op, pad).unwrap_or_else(|| fallback(space, &op, cfg))
    } else {
        fallback(space, &op, cfg)
    };

    if xnorm > 0.0 {
        let xh: Vec<Scalar> = op.x.iter().map(|z| z / xnorm).collect();
        let at_x = space.norm_coords(&op.apply(&xh));
        enc.lo = enc.lo.max(at_x - pad);
    }
    enc.hi = enc.hi.min(cap + pad);
    enc.lo = enc.lo.max(0.0).min(enc.hi);
    if enc.method == "sampled-fallback" {
        enc.certified = enc.width() <= cfg.tol;
    }
    Ok(enc)
}

fn euclidean(op: &Affine<'_>, pad: f64) -> NormEnclosure {
    let n = op.x.len();
    let x = op.x;
    let r: Vec<Scalar> = op.f.iter().map(|z| z.conj()).collect();
    let dot = |u: &[Scalar], v: &[Scalar]| u.iter().zip(v).map(|(p, q)| p.conj() * q).sum::<Scalar>();
    let nrm = |u: &[Scalar]| u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    let xn = nrm(x);
    let rn = nrm(&r);
    if xn == 0.0 || rn == 0.0 {
        let v = op.a.norm();
        return NormEnclosure::new(v - pad, v + pad, true, "euclidean-reduced");
    }
    let u1: Vec<Scalar> = x.iter().map(|z| z / xn).collect();
    let c = dot(&u1, &r);
    let w: Vec<Scalar> = r.iter().zip(&u1).map(|(ri, ui)| ri - c * ui).collect();
    let wn = nrm(&w);
    let mut basis = vec![u1];
    if wn > 1e-14 * rn {
        basis.push(w.iter().map(|z| z / wn).collect());
    }
    let k = basis.len();
    // M_ij = u_i^H A u_j = a·δ_ij + b·(u_i^H x)(r^H u_j)
    let m = DenseMatrix::from_fn(k, k, |i, j| {
        let d = if i == j { op.a } else { Scalar::default() };
        d + op.b * dot(&basis[i], x) * dot(&r, &basis[j])
    });
    let sigma = if k == 1 {
        m[(0, 0)].norm()
    } else {
        let g11 = m[(0, 0)].norm_sqr() + m[(1, 0)].norm_sqr();
        let g22 = m[(0, 1)].norm_sqr() + m[(1, 1)].norm_sqr();
        let g12 = (m[(0, 0)].conj() * m[(0, 1)] + m[(1, 0)].conj() * m[(1, 1)]).norm();
        (0.5 * (g11 + g22) + (0.5 * (g11 - g22)).hypot(g12)).sqrt()
    };
    let v = if k < n { sigma.max(op.a.norm()) } else { sigma };
    NormEnclosure::new(v - pad, v + pad, true, "euclidean-reduced")
}

fn is_real_polytope_pair(space: &SpaceDesc, op: &Affine<'_>) -> bool {
    let real_op = op.a.im == 0.0 && op.b.im == 0.0 && op.x.iter().chain(op.f).all(|z| z.im == 0.0);
    match space.leaves() {
        [l, r] => space.field() == Field::Real && real_op && l.is_polytope() && r.is_polytope(),
        _ => false,
    }
}

/// Vertices `v` of a leaf with `−v` dropped.
fn half_vertices(all: &[Vec<f64>]) -> Vec<Vec<f64>> {
    all.iter()
        .enumerate()
        .filter(|(i, v)| {
            let neg: Vec<f64> = v.iter().map(|z| -z).collect();
            all.iter().position(|w| *w == neg).is_none_or(|j| j > *i)
        })
        .map(|(_, v)| v.clone())
        .collect()
}

type VertexLists = (Vec<Vec<f64>>, Vec<Vec<f64>>);

fn leaf_vertex_lists(space: &SpaceDesc) -> Option<VertexLists> {
    match space.extreme_points().ok()? {
        ExtremePoints::ArcFamily { left, right } => Some((left, right)),
        ExtremePoints::Vertices(_) => None,
    }
}

/// The two halves `p = A(σ_L, 0)` and `q = A(0, σ_R)` for every sign pair.
fn sum2_pairs(space: &SpaceDesc, op: &Affine<'_>) -> Option<Vec<(Vec<Scalar>, Vec<Scalar>)>> {
    let (left, right) = leaf_vertex_lists(space)?;
    let (nl, n) = (left[0].len(), space.dim());
    let embed = |v: &[f64], off: usize| {
        let mut y = vec![Scalar::default(); n];
        for (k, &c) in v.iter().enumerate() {
            y[off + k] = real(c);
        }
        op.apply(&y)
    };
    let ps: Vec<Vec<Scalar>> = half_vertices(&left).iter().map(|v| embed(v, 0)).collect();
    let qs: Vec<Vec<Scalar>> = right.iter().map(|v| embed(v, nl)).collect();
    Some(ps.iter().flat_map(|p| qs.iter().map(move |q| (p.clone(), q.clone()))).collect())
}

fn arc_value(space: &SpaceDesc, p: &[Scalar], q: &[Scalar], theta: f64) -> f64 {
    let (c, s) = (theta.cos(), theta.sin());
    let y: Vec<Scalar> = p.iter().zip(q).map(|(u, v)| u * c + v * s).collect();
    space.norm_coords(&y)
}

/// Angle of `(u0, u1)` folded into `[0, π)`.
fn folded_angle(u0: f64, u1: f64) -> f64 {
    let t = u1.atan2(u0);
    if t < 0.0 {
        t + std::f64::consts::PI
    } else {
        t
    }
}

fn real_dot(w: &[f64], v: &[Scalar]) -> f64 {
    w.iter().zip(v).map(|(a, b)| a * b.re).sum()
}

/// Exact maximum over the extreme family `(cos θ·σ_L, sin θ·σ_R)`.
///
/// On each arc a polytope leaf norm is `max_ψ (ψ(p)cos θ + ψ(q)sin θ)` over
/// its facets `ψ`, so `φ(θ)²` is the largest of the C¹ functions
/// `L_ψ(θ)₊² + R_χ(θ)₊²`. Each of those peaks on `[0, π/2]` at an end, at the
/// direction of `(ψ(p), ψ(q))` or `(χ(p), χ(q))`, or on the leading
/// eigenvector of the 2×2 form `uuᵀ + vvᵀ`; φ itself is evaluated at all of
/// these angles.
fn sum2_exact(space: &SpaceDesc, op: &Affine<'_>, pad: f64) -> Option<NormEnclosure> {
    let pairs = sum2_pairs(space, op)?;
    let [l, r] = space.leaves() else { return None };
    let facets = |leaf: &Leaf| SpaceDesc::leaf_facets(leaf).ok();
    let (fl, fr) = (facets(l)?, facets(r)?);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut best = 0.0f64;
    for (p, q) in &pairs {
        let project = |fs: &[Vec<f64>], leaf: &Leaf| -> Vec<(f64, f64)> {
            let (pl, ql) = (&p[leaf.range()], &q[leaf.range()]);
            fs.iter().map(|w| (real_dot(w, pl), real_dot(w, ql))).collect()
        };
        let (us, vs) = (project(&fl, l), project(&fr, r));
        let mut angles = vec![0.0, half_pi];
        angles.extend(us.iter().chain(&vs).map(|u| folded_angle(u.0, u.1)));
        for u in &us {
            for v in &vs {
                let (m00, m01, m11) = (u.0 * u.0 + v.0 * v.0, u.0 * u.1 + v.0 * v.1, u.1 * u.1 + v.1 * v.1);
                angles.push(folded_angle(m00 - m11, 2.0 * m01) / 2.0);
            }
        }
        for th in angles {
            if (0.0..=half_pi).contains(&th) {
                best = best.max(arc_value(space, p, q, th));
            }
        }
    }
    // stationary angles carry O(ε) error, which moves a smooth peak by O(ε²)
    Some(NormEnclosure::new(best - pad, best + pad, true, "sum2-stationary-angles"))
}

fn fallback(space: &SpaceDesc, op: &Affine<'_>, cfg: &NormConfig) -> NormEnclosure {
    let n = space.dim();
    let dual = space.dual();
    let value = |y: &[Scalar]| space.norm_coords(&op.apply(y));
    let unit = |y: Vec<Scalar>| -> Option<Vec<Scalar>> {
        let nu = space.norm_coords(&y);
        (nu > 0.0).then(|| y.into_iter().map(|z| z / nu).collect())
    };

    let mut starts: Vec<Vec<Scalar>> = Vec::new();
    let xh = unit(op.x.to_vec());
    let yf = dual.support_functional(&Vector::new(op.f.to_vec())).ok().map(|g| g.into_coords());
    starts.extend(xh.clone());
    starts.extend(yf.clone());
    if let (Some(x), Some(y)) = (&xh, &yf) {
        let phases: &[Scalar] = match space.field() {
            Field::Real => &[Scalar::new(1.0, 0.0), Scalar::new(-1.0, 0.0)],
            Field::Complex => {
                &[Scalar::new(1.0, 0.0), Scalar::new(-1.0, 0.0), Scalar::new(0.0, 1.0), Scalar::new(0.0, -1.0)]
            }
        };
        for &c in phases {
            starts.extend(unit(x.iter().zip(y).map(|(u, v)| u + c * v).collect()));
        }
    }
    for i in 0..n {
        starts.extend(unit(Vector::basis(n, i).into_coords()));
    }
    for k in 0..cfg.fallback_samples {
        starts.push(space.sample_sphere_at(cfg.seed, stream::FALLBACK, k as u64).into_coords());
    }

    // Keep the best starts and climb: y ↦ support of (w∘A) where w supports Ay.
    let mut scored: Vec<(f64, usize)> = starts.iter().enumerate().map(|(i, y)| (value(y), i)).collect();
    scored.sort_by(|p, q| q.0.total_cmp(&p.0).then(p.1.cmp(&q.1)));
    let mut lo = scored.first().map_or(0.0, |s| s.0);
    for &(_, i) in scored.iter().take(8) {
        let mut y = starts[i].clone();
        for _ in 0..40 {
            let ay = op.apply(&y);
            let Ok(w) = space.support_functional(&Vector::new(ay)) else { break };
            let g = op.apply_transpose(w.coords());
            let Ok(next) = dual.support_functional(&Vector::new(g)) else { break };
            let next = next.into_coords();
            let v = value(&next);
            if v <= lo * (1.0 + 1e-15) && v <= value(&y) {
                lo = lo.max(v);
                break;
            }
            lo = lo.max(v);
            y = next;
        }
    }
    let pad = rounding_pad(n, lo);
    NormEnclosure::new(lo - pad, f64::INFINITY, false, "sampled-fallback")
}

/// Dimension cap for vertex enumeration in the oracle.
pub const ORACLE_POLYTOPE_CAP: usize = 12;
/// Dimension cap for the Euclidean oracle.
pub const ORACLE_EUCLIDEAN_CAP: usize = 32;

/// Independent enclosure of `‖A‖` for a dense matrix.
///
/// Polytope balls: maximum of `‖Ae‖` over all vertices. Euclidean spaces:
/// power iteration on `AᴴA` for the lower bound and repeated squaring for the
/// upper bound. Real ℓ2-sums of two polytope blocks: uniform θ grid over the
/// extreme family with a Lipschitz bound between grid points.
pub fn matrix_norm_oracle(space: &SpaceDesc, a: &DenseMatrix) -> Result<NormEnclosure> {
    let n = space.dim();
    check_dim(n, a.rows())?;
    check_dim(n, a.cols())?;
    let apply = |y: &Vector| a.apply_coords(y.coords());
    if space.polytope_leaf().is_some() {
        if n > ORACLE_POLYTOPE_CAP {
            return Err(NelabError::CapExceeded { dim: n, cap: ORACLE_POLYTOPE_CAP });
        }
        if !a.is_real() {
            return Err(NelabError::FieldMismatch("complex matrix on a real space".into()));
        }
        let ExtremePoints::Vertices(vs) = space.extreme_points()? else { unreachable!() };
        let v = vs.iter().map(|e| space.norm(&apply(e)).unwrap_or(0.0)).fold(0.0, f64::max);
        let pad = rounding_pad(n, v);
        return Ok(NormEnclosure::new(v - pad, v + pad, true, "polytope-vertices"));
    }
    if space.is_euclidean() {
        if n > ORACLE_EUCLIDEAN_CAP {
            return Err(NelabError::CapExceeded { dim: n, cap: ORACLE_EUCLIDEAN_CAP });
        }
        return Ok(gram_oracle(a));
    }
    if space.is_real() && space.leaves().len() == 2 && space.leaves().iter().all(Leaf::is_polytope) {
        if n > ORACLE_POLYTOPE_CAP {
            return Err(NelabError::CapExceeded { dim: n, cap: ORACLE_POLYTOPE_CAP });
        }
        return Ok(theta_grid_oracle(space, a));
    }
    Err(NelabError::UnsupportedSpace(format!("no norm oracle for {} over the {} field", space.dsl(), space.field())))
}

fn gram_oracle(a: &DenseMatrix) -> NormEnclosure {
    let n = a.rows();
    let g = a.adjoint().mul(a).expect("square");
    let gf = g.frobenius();
    if gf == 0.0 {
        return NormEnclosure::new(0.0, 0.0, true, "gram-power");
    }
    let euclid = |v: &[Scalar]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let ratio = |v: &[Scalar]| {
        let nv = euclid(v);
        if nv == 0.0 {
            0.0
        } else {
            euclid(a.apply_coords(v).coords()) / nv
        }
    };

    // Upper bound: λmax(G) ≤ ‖G^m‖_F^{1/m}, with G^m tracked in log scale.
    let mut b = g.scale(real(1.0 / gf));
    let mut log_scale = gf.ln();
    let mut m = 1.0f64;
    for _ in 0..30 {
        b = b.mul(&b).expect("square");
        let f = b.frobenius();
        if f == 0.0 || !f.is_finite() {
            break;
        }
        b = b.scale(real(1.0 / f));
        log_scale = 2.0 * log_scale + f.ln();
        m *= 2.0;
    }
    let lam_hi = (log_scale / m).exp();
    let hi = lam_hi.sqrt() * (1.0 + 1e-12);

    // Lower bound: power iteration from deterministic starts, plus the columns of G^m.
    let mut lo = 0.0f64;
    let mut starts: Vec<Vec<Scalar>> = (0..n).map(|j| (0..n).map(|i| b[(i, j)]).collect()).collect();
    starts.push(vec![real(1.0); n]);
    starts.push((0..n).map(|i| Scalar::new(1.0 + i as f64, 0.5 - i as f64)).collect());
    for mut v in starts {
        for _ in 0..200 {
            let w = g.apply_coords(&v).into_coords();
            let nw = euclid(&w);
            if nw == 0.0 {
                break;
            }
            v = w.into_iter().map(|z| z / nw).collect();
        }
        lo = lo.max(ratio(&v));
    }
    let lo = lo * (1.0 - 1e-14);
    NormEnclosure::new(lo, hi.max(lo), hi - lo <= 1e-8, "gram-power")
}

fn theta_grid_oracle(space: &SpaceDesc, a: &DenseMatrix) -> NormEnclosure {
    const STEPS: usize = 4096;
    let ExtremePoints::ArcFamily { left, right } = space.extreme_points().expect("checked by caller") else {
        unreachable!()
    };
    let nl = left[0].len();
    let half = |v: &[f64], off: usize| -> Vec<Scalar> {
        let mut y = vec![Scalar::default(); space.dim()];
        for (k, &c) in v.iter().enumerate() {
            y[off + k] = real(c);
        }
        a.apply_coords(&y).into_coords()
    };
    let h = std::f64::consts::FRAC_PI_2 / STEPS as f64;
    let mut lo = 0.0f64;
    let mut hi = 0.0f64;
    for u in &left {
        let p = half(u, 0);
        for w in &right {
            let q = half(w, nl);
            let at = |k: usize| {
                let (c, s) = ((k as f64 * h).cos(), (k as f64 * h).sin());
                let y: Vec<Scalar> = p.iter().zip(&q).map(|(pi, qi)| pi * c + qi * s).collect();
                space.norm_coords(&y)
            };
            // |φ'(θ)| ≤ ‖A(σ_L,0)‖ + ‖A(0,σ_R)‖
            let lip = space.norm_coords(&p) + space.norm_coords(&q);
            let mut prev = at(0);
            lo = lo.max(prev);
            for k in 1..=STEPS {
                let cur = at(k);
                lo = lo.max(cur);
                hi = hi.max(0.5 * (prev + cur) + 0.5 * lip * h);
                prev = cur;
            }
        }
    }
    let pad = rounding_pad(space.dim(), hi);
    NormEnclosure::new(lo - pad, hi + pad, false, "sum2-theta-grid")
}

/// Extremes of `‖g(λT_α)‖` over a grid of `α` in the closed unit disc.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormSpread {
    pub min: f64,
    pub max: f64,
    pub argmin: Scalar,
    pub argmax: Scalar,
    pub spread: f64,
    pub certified: bool,
    pub grid_size: usize,
}

/// Grid of α values: 401 points of `[−1, 1]` over ℝ, a polar grid over ℂ.
pub fn alpha_grid(field: Field) -> Vec<Scalar> {
    match field {
        Field::Real => (0..=400).map(|k| real(-1.0 + k as f64 / 200.0)).collect(),
        Field::Complex => {
            let mut g = vec![Scalar::default()];
            for r in 1..=8 {
                for k in 0..64 {
                    g.push(Scalar::from_polar(r as f64 / 8.0, k as f64 * std::f64::consts::TAU / 64.0));
                }
            }
            g
        }
    }
}

/// `‖g(λT_α)‖` for every α of the grid, `T_α` the witness pair with `x*(x) = α`.
pub fn spread_enclosures(
    g: &EntireFunction,
    space: &SpaceDesc,
    lambda: Scalar,
) -> Result<Vec<(Scalar, NormEnclosure)>> {
    if space.dim() < 2 {
        return Err(NelabError::UnsupportedSpace("norm spread needs dimension at least 2".into()));
    }
    space.check_scalar(lambda)?;
    alpha_grid(space.field()).into_iter().map(|alpha| Ok((alpha, spread_point(g, space, lambda, alpha)?))).collect()
}

pub(crate) fn spread_point(
    g: &EntireFunction,
    space: &SpaceDesc,
    lambda: Scalar,
    alpha: Scalar,
) -> Result<NormEnclosure> {
    let (f, x) = space.witness_pair(alpha)?;
    let t = RankOne::new(space, f, x)?;
    let (c0, c1) = apply_calculus(g, lambda, &t);
    norm_affine_rankone(space, c0, c1, &t)
}

pub fn norm_spread(g: &EntireFunction, space: &SpaceDesc, lambda: Scalar) -> Result<NormSpread> {
    let points = spread_enclosures(g, space, lambda)?;
    let mut out = NormSpread {
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
        argmin: Scalar::default(),
        argmax: Scalar::default(),
        spread: 0.0,
        certified: true,
        grid_size: points.len(),
    };
    for (alpha, enc) in &points {
        out.certified &= enc.certified;
        let v = enc.mid();
        if v < out.min {
            out.min = v;
            out.argmin = *alpha;
        }
        if v > out.max {
            out.max = v;
            out.argmax = *alpha;
        }
    }
    out.spread = out.max - out.min;
    Ok(out)
}

/// `a·Id + b·T` as a dense matrix.
pub fn affine_matrix(a: Scalar, b: Scalar, t: &RankOne) -> DenseMatrix {
    Affine { a, b, x: t.vector().coords(), f: t.functional().coords() }.to_matrix()
}
