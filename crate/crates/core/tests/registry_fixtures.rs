use nelab_core::properties::*;
use nelab_core::spaces::{full_registry, registry};
use nelab_core::*;
use proptest::prelude::*;

const TOL: f64 = 1e-9;

#[test]
fn f_shape_is_exact_on_every_registry_space() {
    for s in full_registry() {
        let mut pairs = vec![(real(2.0), real(-3.0)), (real(-1.0), real(5.0))];
        if !s.is_real() {
            pairs.push((real(1.0), Scalar::new(0.0, 1.0)));
        }
        for (a, b) in pairs {
            let r = fixture_prop_f_shape(&s, a, b, &F_SHAPE_GRID, TOL).unwrap();
            assert_eq!(r.verdict, Verdict::Holds, "{} ({})", s.dsl(), s.field());
            assert!(r.param_f64("max_width").unwrap() <= 1e-12, "{}", s.dsl());
            assert!(r.max_violation <= 1e-12);
        }
    }
}

#[test]
fn lemma43_identities_hold_on_every_registry_space() {
    for s in full_registry() {
        let mut g0s = vec![real(-1.0), real(0.3), real(0.0), real(2.5)];
        if !s.is_real() {
            g0s.push(Scalar::new(-0.5, 0.5));
        }
        for g0 in g0s {
            let r = fixture_lemma43(&s, g0, None, TOL).unwrap();
            assert_eq!(r.verdict, Verdict::Holds, "{} g0={g0}", s.dsl());
            assert!(r.param_f64("max_width").unwrap() <= 1e-12);
        }
    }
}

#[test]
fn identity_omega_always_holds() {
    let opts = CheckOptions { samples: 20, ..CheckOptions::default() };
    for s in full_registry() {
        let r = check_omega(&s, real(1.0), &opts).unwrap();
        assert_eq!((r.verdict, r.max_violation), (Verdict::Holds, 0.0));
    }
}

#[test]
fn adjoint_norms_agree_across_duality() {
    let opts = CheckOptions { samples: 100, ..CheckOptions::default() };
    for d in ["linf(2)", "l1(3)", "l2(3)"] {
        for field in [Field::Real, Field::Complex] {
            let s = SpaceDesc::parse(d, field).unwrap();
            let r = check_dual_transfer(&s, real(-1.0), &opts).unwrap();
            assert_eq!(r.verdict, Verdict::Holds, "{d} {field}");
            assert!(r.max_violation <= 1e-10);
        }
    }
}

#[test]
fn hull_gap_is_positive_on_polytope_registry_spaces() {
    for s in registry(Field::Real).into_iter().filter(|s| s.polytope_leaf().is_some() && s.dim() <= 3) {
        let x = s.sample_sphere(5);
        let x = match s.extreme_points().unwrap() {
            ExtremePoints::Vertices(v) => v[0].clone(),
            _ => x,
        };
        let r = check_hull(&s, &x, 0.1, &default_directions(&s), TOL).unwrap();
        assert_eq!(r.verdict, Verdict::Fails, "{}", s.dsl());
        assert!(r.max_violation > 0.0);
    }
}

fn polytope_spaces() -> Vec<SpaceDesc> {
    ["linf(2)", "linf(3)", "l1(2)", "l1(3)"].iter().map(|d| SpaceDesc::parse(d, Field::Real).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hull_gap_is_monotone_in_eps(k in 0..4usize, raw in prop::collection::vec(-1.0..1.0f64, 3), e in 0.0..2.0f64, de in 0.0..1.0f64, d in 0..26usize) {
        let s = polytope_spaces()[k].clone();
        let x = Vector::from_real(&raw[..s.dim()]);
        prop_assume!(s.norm(&x).unwrap() > 1e-3);
        let x = x.scale(real(1.0 / s.norm(&x).unwrap()));
        let dirs = default_directions(&s);
        let f = &dirs[d % dirs.len()];
        let (g1, _) = hull_gap(&s, &x, e, f).unwrap();
        let (g2, _) = hull_gap(&s, &x, (e + de).min(2.0), f).unwrap();
        prop_assert!(g2 <= g1 + 1e-12, "{} {} {}", s.dsl(), g1, g2);
        prop_assert!(g1 >= -1e-12);
        let (g_full, _) = hull_gap(&s, &x, 2.0, f).unwrap();
        prop_assert!(g_full.abs() <= 1e-12);
    }

    #[test]
    fn slice_diameter_grows_with_alpha(k in 0..4usize, raw in prop::collection::vec(-1.0..1.0f64, 3), a in 0.01..1.0f64, da in 0.0..1.0f64) {
        let s = polytope_spaces()[k].clone();
        let f = Functional::from_real(&raw[..s.dim()]);
        let nf = s.dual_norm(&f).unwrap();
        prop_assume!(nf > 1e-3);
        let f = f.scale(real(1.0 / nf));
        let d1 = slice_diameter(&s, &f, a).unwrap();
        let d2 = slice_diameter(&s, &f, a + da).unwrap();
        prop_assert!(d1.certified && d2.certified);
        prop_assert!(d1.lo <= d2.hi && d2.hi <= 2.0 + 1e-12);
    }
}
