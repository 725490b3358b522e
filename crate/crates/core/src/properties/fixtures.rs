//! Exact norm identities on constructed operators, and scalar cases.

use crate::calculus::EntireFunction;
use crate::error::{NelabError, Result};
use crate::opnorm::{norm_affine_rankone, spread_enclosures, spread_point, NormEnclosure};
use crate::rankone::RankOne;
use crate::report::{CheckReport, ReportBuilder, Verdict, Witness};
use crate::scalar::format_scalar;
use crate::spaces::{real, Field, Scalar, SpaceDesc};

use super::{aggregate, compare, exact_value, sweep, Compared};

/// Default `t` values for the `|a| + |b|t` fixture.
pub const F_SHAPE_GRID: [f64; 5] = [0.0, 0.5, 1.0, 5.0, 50.0];

/// Unimodular `ω₀ = (b̄/|b|)(a/|a|)`, the value `x₀*(x₀)` that aligns `a` and `b·T`.
pub(crate) fn f_shape_omega(a: Scalar, b: Scalar) -> Scalar {
    (b.conj() / b.norm()) * (a / a.norm())
}

/// One evaluated identity: `‖a·Id + T‖` against an exact value.
struct Identity {
    label: u8,
    t: f64,
    a: Scalar,
    op: RankOne,
    expected: f64,
}

fn evaluate(space: &SpaceDesc, items: &[Identity], tol: f64) -> Result<Vec<(Compared, NormEnclosure)>> {
    sweep(items.len(), |k| {
        let it = &items[k];
        let lhs = norm_affine_rankone(space, it.a, real(1.0), &it.op)?;
        Ok((compare(&lhs, &exact_value(it.expected, space.dim()), tol), lhs))
    })
}

fn finish_identities(mut b: ReportBuilder, space: &SpaceDesc, items: &[Identity], tol: f64) -> Result<CheckReport> {
    let results = evaluate(space, items, tol)?;
    let compared: Vec<Compared> = results.iter().map(|r| r.0).collect();
    let (verdict, max_violation, worst) = aggregate(&compared);
    let max_width = results.iter().map(|r| r.1.width()).fold(0.0, f64::max);
    b.param("max_width", max_width);
    let witnesses = worst
        .map(|k| {
            let (it, (c, e)) = (&items[k], &results[k]);
            vec![Witness::new(it.op.functional().coords().to_vec(), it.op.vector().coords().to_vec())
                .with("identity", it.label as f64)
                .with("t", it.t)
                .with_enclosure("lhs", e)
                .with("expected", it.expected)
                .with("violation", c.violation)]
        })
        .unwrap_or_default();
    Ok(b.finish(verdict, max_violation, witnesses, items.len()))
}

/// `‖a·Id + b·T_t‖ = |a| + |b|t` for `T_t = t·x₀*⊗x₀` with `x₀*(x₀) = ω₀`.
pub fn fixture_prop_f_shape(space: &SpaceDesc, a: Scalar, b: Scalar, t_grid: &[f64], tol: f64) -> Result<CheckReport> {
    if a.norm() == 0.0 || b.norm() == 0.0 {
        return Err(NelabError::InvalidArgument("the fixture needs a and b both nonzero".into()));
    }
    space.check_scalar(a)?;
    space.check_scalar(b)?;
    if let Some(t) = t_grid.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(NelabError::InvalidArgument(format!("t = {t} out of range (need t >= 0)")));
    }
    let omega0 = f_shape_omega(a, b);
    let (f, x) = space.witness_pair(omega0)?;
    let items: Vec<Identity> = t_grid
        .iter()
        .map(|&t| {
            // b is folded into the operator so the identity reads ‖a·Id + T‖
            let op = RankOne::new(space, f.scale(b * t), x.clone())?;
            Ok(Identity { label: 0, t, a, op, expected: a.norm() + b.norm() * t })
        })
        .collect::<Result<_>>()?;
    let mut builder = ReportBuilder::new("f-shape", space, 0, tol);
    builder.scalar("a", a).scalar("b", b).scalar("omega0", omega0);
    builder.param("t_grid", t_grid.to_vec());
    builder.param("scope", "exact fixture, every t of the grid");
    finish_identities(builder, space, &items, tol)
}

/// Five `t` values per identity: `t ≥ 1` for the first, `t ≥ |g₀|` otherwise.
pub fn default_lemma43_grid(g0: Scalar) -> (Vec<f64>, Vec<f64>) {
    let m = g0.norm();
    (vec![1.0, 1.5, 2.0, 3.0, 10.0], [0.0, 0.5, 1.0, 2.5, 10.0].iter().map(|d| m + d).collect())
}

/// Three exact identities with `x*(x) = 1`:
/// 1. `‖−Id + (1−t)x*⊗x‖ = t` for `t ≥ 1`;
/// 2. `‖(1+g₀)Id + u(t−|g₀|)x*⊗x‖ = |1+g₀| + t − |g₀|`, `u = (1+g₀)/|1+g₀|`;
/// 3. `‖g₀Id + (g₀/|g₀|)(t−|g₀|)x*⊗x‖ = t`.
///
/// The second needs `g₀ ≠ −1` and the third `g₀ ≠ 0`; both need `t ≥ |g₀|`.
/// A supplied grid is used for every identity and must satisfy all ranges.
pub fn fixture_lemma43(space: &SpaceDesc, g0: Scalar, t_grid: Option<&[f64]>, tol: f64) -> Result<CheckReport> {
    space.check_scalar(g0)?;
    let m = g0.norm();
    let (grid1, grid23) = match t_grid {
        Some(g) => {
            let lower = m.max(1.0);
            if let Some(t) = g.iter().find(|t| !(t.is_finite() && **t >= lower)) {
                return Err(NelabError::InvalidArgument(format!("t = {t} out of range (need t >= {lower})")));
            }
            (g.to_vec(), g.to_vec())
        }
        None => default_lemma43_grid(g0),
    };
    let (f, x) = space.witness_pair(real(1.0))?;
    let op = |c: Scalar| RankOne::new(space, f.scale(c), x.clone());
    let one = real(1.0);
    let mut items = Vec::new();
    for &t in &grid1 {
        items.push(Identity { label: 1, t, a: -one, op: op(real(1.0 - t))?, expected: t });
    }
    let shifted = one + g0;
    if shifted.norm() > 0.0 {
        let u = shifted / shifted.norm();
        for &t in &grid23 {
            let expected = shifted.norm() + t - m;
            items.push(Identity { label: 2, t, a: shifted, op: op(u * (t - m))?, expected });
        }
    }
    if m > 0.0 {
        let u = g0 / m;
        for &t in &grid23 {
            items.push(Identity { label: 3, t, a: g0, op: op(u * (t - m))?, expected: t });
        }
    }
    let mut b = ReportBuilder::new("lemma43", space, 0, tol);
    b.scalar("g0", g0);
    b.param(
        "identities",
        items.iter().map(|i| i.label).collect::<std::collections::BTreeSet<_>>().into_iter().collect::<Vec<_>>(),
    );
    b.param("scope", "exact fixture, every t of the grid for each applicable identity");
    finish_identities(b, space, &items, tol)
}

/// Whether `‖g(λT_α)‖` is constant over the α grid.
pub fn check_spread(g: &EntireFunction, space: &SpaceDesc, lambda: Scalar, tol: f64) -> Result<CheckReport> {
    let points = spread_enclosures(g, space, lambda)?;
    let by_mid = |cmp: fn(f64, f64) -> bool| {
        let mut best = 0;
        for (k, (_, e)) in points.iter().enumerate() {
            if cmp(e.mid(), points[best].1.mid()) {
                best = k;
            }
        }
        best
    };
    let (kmax, kmin) = (by_mid(|a, b| a > b), by_mid(|a, b| a < b));
    let (amax, emax) = &points[kmax];
    let (amin, emin) = &points[kmin];
    let hi_all = points.iter().map(|p| p.1.hi).fold(0.0, f64::max);
    let lo_all = points.iter().map(|p| p.1.lo).fold(f64::INFINITY, f64::min);
    let certified = points.iter().all(|p| p.1.certified);
    let definite = emax.lo - emin.hi;
    let spread = emax.mid() - emin.mid();
    let verdict = if definite >= tol {
        Verdict::Fails
    } else if certified && hi_all - lo_all <= tol {
        Verdict::Holds
    } else {
        Verdict::Undecided
    };
    let mut witnesses = Vec::new();
    if verdict == Verdict::Fails {
        let (f, x) = space.witness_pair(*amax)?;
        witnesses.push(
            Witness::new(f.into_coords(), x.into_coords())
                .with("alpha_max_re", amax.re)
                .with("alpha_max_im", amax.im)
                .with("alpha_min_re", amin.re)
                .with("alpha_min_im", amin.im)
                .with("max", emax.mid())
                .with("min", emin.mid())
                .with("violation", spread),
        );
    }
    let mut b = ReportBuilder::new("spread", space, 0, tol);
    b.param("g", g.to_string()).scalar("lambda", lambda);
    b.param("spread", spread);
    b.scalar("argmax", *amax).scalar("argmin", *amin);
    b.param("scope", format!("alpha grid of {} points in the closed unit disc", points.len()));
    Ok(b.finish(verdict, spread, witnesses, points.len()))
}

pub(crate) fn spread_violation(
    g: &EntireFunction,
    space: &SpaceDesc,
    lambda: Scalar,
    amax: Scalar,
    amin: Scalar,
) -> Result<f64> {
    Ok(spread_point(g, space, lambda, amax)?.mid() - spread_point(g, space, lambda, amin)?.mid())
}

/// Grids for the one-dimensional cases.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarGrid {
    pub real: Vec<f64>,
    pub complex: Vec<Scalar>,
}

impl Default for ScalarGrid {
    fn default() -> Self {
        let real = (0..=24).map(|k| -3.0 + 0.25 * k as f64).collect();
        let complex = [0.5, 1.0, 2.0].iter().flat_map(|&r| (0..8).map(move |k| quarter_polar(r, k))).collect();
        Self { real, complex }
    }
}

/// `r·e^{ikπ/4}`, with exact coordinates on the axes.
fn quarter_polar(r: f64, k: usize) -> Scalar {
    match k % 8 {
        0 => Scalar::new(r, 0.0),
        2 => Scalar::new(0.0, r),
        4 => Scalar::new(-r, 0.0),
        6 => Scalar::new(0.0, -r),
        _ => Scalar::from_polar(r, k as f64 * std::f64::consts::FRAC_PI_4),
    }
}

/// One-dimensional cases: over ℝ the residuals of `|1 + g| = 1 + |g|` and
/// `|1 − g| = max(1 − |g|, |g| − 1)`; over ℂ a search for `ζ₁, ζ₂` with
/// `|g(ζ₁)| = |g(ζ₂)|` but `|1 + g(ζ₁)| ≠ |1 + g(ζ₂)|`. The verdict is
/// `fails` when such a pair exists, i.e. `|1 + g|` is not a function of `|g|`.
pub fn scalar_cases(g: &EntireFunction, grid: &ScalarGrid, tol: f64) -> Result<CheckReport> {
    let ev = |z: Scalar| g.eval_scalar(z).map(|v| v.0);
    let mut plus = 0.0f64;
    let mut minus = 0.0f64;
    for &t in &grid.real {
        let v = ev(real(t))?;
        let m = v.norm();
        plus = plus.max(((real(1.0) + v).norm() - (1.0 + m)).abs());
        minus = minus.max(((real(1.0) - v).norm() - (1.0 - m).max(m - 1.0)).abs());
    }
    let values: Vec<Scalar> = grid.complex.iter().map(|&z| ev(z)).collect::<Result<_>>()?;
    let mut best: Option<(usize, usize, f64)> = None;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            let (mi, mj) = (values[i].norm(), values[j].norm());
            if (mi - mj).abs() > 1e-12 * mi.max(mj).max(1.0) {
                continue;
            }
            let d = ((real(1.0) + values[i]).norm() - (real(1.0) + values[j]).norm()).abs();
            if best.is_none_or(|b| d > b.2 + 1e-12 * b.2.max(1.0)) {
                best = Some((i, j, d));
            }
        }
    }
    let mut b = ReportBuilder::raw("scalar", "scalar", Field::Complex, 0, tol);
    b.param("g", g.to_string());
    b.param("real_plus_residual", plus);
    b.param("real_minus_residual", minus);
    b.param("real_points", grid.real.len());
    b.param("complex_points", grid.complex.len());
    b.param("scope", "finite grids of real and complex arguments");
    let samples = grid.real.len() + grid.complex.len();
    match best {
        Some((i, j, d)) if d >= tol => {
            let (zi, zj) = (grid.complex[i], grid.complex[j]);
            let w = Witness::new(vec![zi], vec![zj])
                .with("abs_g", values[i].norm())
                .with("abs_one_plus_g_first", (real(1.0) + values[i]).norm())
                .with("abs_one_plus_g_second", (real(1.0) + values[j]).norm())
                .with("violation", d);
            b.param("pair", format!("{} / {}", format_scalar(zi), format_scalar(zj)));
            Ok(b.finish(Verdict::Fails, d, vec![w], samples))
        }
        other => Ok(b.finish(Verdict::Holds, other.map_or(0.0, |b| b.2), vec![], samples)),
    }
}

pub(crate) fn scalar_violation(g: &EntireFunction, z1: Scalar, z2: Scalar) -> Result<f64> {
    let (v1, v2) = (g.eval_scalar(z1)?.0, g.eval_scalar(z2)?.0);
    Ok(((real(1.0) + v1).norm() - (real(1.0) + v2).norm()).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{full_registry, registry};

    const TOL: f64 = 1e-9;

    #[test]
    fn f_shape_examples() {
        let s = SpaceDesc::linf(3, Field::Real).unwrap();
        let r = fixture_prop_f_shape(&s, real(2.0), real(-3.0), &[5.0], TOL).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.param_str("omega0"), Some("-1"));
        let r = fixture_prop_f_shape(&s, real(2.0), real(-3.0), &[0.0], TOL).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        let s = SpaceDesc::l2(4, Field::Complex).unwrap();
        let r = fixture_prop_f_shape(&s, real(1.0), Scalar::new(0.0, 1.0), &[2.0], TOL).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.param_str("omega0"), Some("-1i"));
        assert!(fixture_prop_f_shape(&s, real(0.0), real(1.0), &[2.0], TOL).is_err());
    }

    #[test]
    fn f_shape_on_registry() {
        for s in full_registry() {
            for (a, b) in [(real(2.0), real(-3.0)), (real(-1.0), real(5.0))] {
                let r = fixture_prop_f_shape(&s, a, b, &F_SHAPE_GRID, TOL).unwrap();
                assert_eq!(r.verdict, Verdict::Holds, "{}", s.dsl());
                assert!(r.param_f64("max_width").unwrap() <= 1e-12);
            }
        }
    }

    #[test]
    fn lemma43_examples() {
        let s = SpaceDesc::linf(2, Field::Real).unwrap();
        let r = fixture_lemma43(&s, real(-1.0), Some(&[3.0]), TOL).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.samples, 2);
        let r = fixture_lemma43(&s, real(0.0), None, TOL).unwrap();
        assert_eq!((r.verdict, r.samples), (Verdict::Holds, 10));
        let c = SpaceDesc::l2(2, Field::Complex).unwrap();
        let r = fixture_lemma43(&c, Scalar::new(-0.5, 0.5), Some(&[1.0]), TOL).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert!(fixture_lemma43(&s, real(0.3), Some(&[0.5]), TOL).is_err());
    }

    #[test]
    fn lemma43_on_registry() {
        for s in registry(Field::Real) {
            for g0 in [-1.0, 0.3, 2.0] {
                assert_eq!(fixture_lemma43(&s, real(g0), None, TOL).unwrap().verdict, Verdict::Holds, "{}", s.dsl());
            }
        }
        for s in registry(Field::Complex) {
            let r = fixture_lemma43(&s, Scalar::new(-0.5, 0.5), None, TOL).unwrap();
            assert_eq!(r.verdict, Verdict::Holds, "{}", s.dsl());
        }
    }

    #[test]
    fn spread_verdicts() {
        let s = SpaceDesc::linf(2, Field::Real).unwrap();
        let r = check_spread(&EntireFunction::poly(&[0.0, 0.0, 1.0]), &s, real(1.0), TOL).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert!(r.max_violation >= 0.9);
        let r = check_spread(&EntireFunction::poly(&[0.0, 3.0]), &s, real(1.0), TOL).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn scalar_examples() {
        let sq = EntireFunction::poly(&[0.0, 0.0, 1.0]);
        let r = scalar_cases(&sq, &ScalarGrid::default(), TOL).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert!(r.param_f64("real_plus_residual").unwrap() <= 1e-12);
        assert!(r.param_f64("real_minus_residual").unwrap() <= 1e-12);
        assert!((r.max_violation - 2.0).abs() < 1e-12);
        assert!((scalar_violation(&sq, real(1.0), Scalar::new(0.0, 1.0)).unwrap() - 2.0).abs() < 1e-15);
        let grid = ScalarGrid { real: vec![2.0, 0.0], complex: vec![] };
        let r = scalar_cases(&sq, &grid, TOL).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
    }
}
