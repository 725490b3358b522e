//! Acceptance battery: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::Command;
use std::time::Instant;

use nelab_core::opnorm::affine_matrix;
use nelab_core::properties::{
    check_daugavet, check_denting, check_omega, check_tsquare_with, default_directions, default_lemma43_grid,
    fixture_lemma43, fixture_prop_f_shape, hull_gap, recompute_witness, slice_diameter, Sign, F_SHAPE_GRID,
};
use nelab_core::spaces::registry;
use nelab_core::{
    apply_calculus, matrix_norm_oracle, norm_affine_rankone, norm_spread, oracle_truncated, random_rankone, real,
    CheckOptions, CheckReport, DenseMatrix, EntireFunction, Field, Functional, RankOne, Scalar, SpaceDesc, Vector,
    Verdict,
};

/// Deterministic value in `[-1, 1)` from an index and a salt.
fn unit(k: u64, salt: u64) -> f64 {
    let mut z = k.wrapping_add(salt.wrapping_mul(0x9E37_79B9_7F4A_7C15)).wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    2.0 * ((z >> 11) as f64 / (1u64 << 53) as f64) - 1.0
}

fn spaces(field: Field, extra: &[&str]) -> Vec<SpaceDesc> {
    let mut all = registry(field);
    all.extend(extra.iter().map(|d| SpaceDesc::parse(d, field).unwrap()));
    all
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn calculus_oracle() -> Outcome {
    let mut fns = vec![
        EntireFunction::parse("exp").unwrap(),
        EntireFunction::parse("sin").unwrap(),
        EntireFunction::parse("cosh").unwrap(),
    ];
    for p in 0..3u64 {
        let coeffs: Vec<f64> = (0..=2 + p).map(|j| 2.0 * unit(p, 100 + j)).collect();
        fns.push(EntireFunction::poly(&coeffs));
    }
    let all: Vec<SpaceDesc> = spaces(Field::Real, &["linf(6)", "sum2(l1(3),l2(3))"])
        .into_iter()
        .chain(spaces(Field::Complex, &["l2(6)", "sum2(linf(3),l1(3))"]))
        .collect();
    let mut worst = 0.0f64;
    for k in 0..100u64 {
        let g = &fns[k as usize % fns.len()];
        let s = &all[(k as usize / fns.len() + k as usize) % all.len()];
        let r = 2.0 * (unit(k, 1) + 1.0) / 2.0;
        let lambda = match s.field() {
            Field::Real => real(r * unit(k, 2).signum()),
            Field::Complex => Scalar::from_polar(r, std::f64::consts::PI * unit(k, 2)),
        };
        let t = random_rankone(s, k, 1.0).map_err(|e| e.to_string())?;
        let (c0, c1) = apply_calculus(g, lambda, &t);
        let closed = DenseMatrix::identity(s.dim()).scale(c0).add(&t.to_matrix().scale(c1)).unwrap();
        let series = oracle_truncated(g, lambda, &t, 64).map_err(|e| e.to_string())?;
        let d = closed.max_abs_diff(&series);
        worst = worst.max(d);
        ensure(d <= 1e-10, || format!("{g} on {s}, lambda {lambda}: difference {d:e}"))?;
    }
    Ok(format!("100 instances, max entrywise difference {worst:.2e}"))
}

fn power_identity() -> Outcome {
    let all: Vec<SpaceDesc> = spaces(Field::Real, &["linf(5)", "l2(5)"])
        .into_iter()
        .chain(spaces(Field::Complex, &["l1(5)"]))
        .filter(|s| s.dim() <= 5)
        .collect();
    let mut worst = 0.0f64;
    for (i, s) in all.iter().enumerate() {
        for j in 0..4u64 {
            let seed = 10 * i as u64 + j;
            let t = random_rankone(s, seed, 1.0 + unit(seed, 3).abs()).unwrap();
            let lambda = match s.field() {
                Field::Real => real(1.2 * unit(seed, 4)),
                Field::Complex => Scalar::new(unit(seed, 4), unit(seed, 5)),
            };
            let m = t.to_matrix().scale(lambda);
            let mut product = DenseMatrix::identity(s.dim());
            for k in 1..=6u32 {
                product = product.mul(&m).unwrap();
                let (c, base) = t.power_as_rankone(lambda, k).unwrap();
                let d = base.to_matrix().scale(c).max_abs_diff(&product);
                let scale = product.data().iter().map(|z| z.norm()).fold(1.0, f64::max);
                worst = worst.max(d / scale);
                ensure(d <= 1e-12 * scale, || format!("{s}, k = {k}: difference {d:e} at scale {scale}"))?;
            }
        }
    }
    Ok(format!("{} instances, k <= 6, max scaled difference {worst:.2e}", 4 * all.len()))
}

fn f_shape_fixture() -> Outcome {
    let mut count = 0;
    for field in [Field::Real, Field::Complex] {
        let mut pairs = vec![(real(2.0), real(-3.0)), (real(-1.0), real(5.0))];
        if field == Field::Complex {
            pairs.push((real(1.0), Scalar::new(0.0, 1.0)));
        }
        for s in registry(field) {
            for &(a, b) in &pairs {
                let r = fixture_prop_f_shape(&s, a, b, &F_SHAPE_GRID, 1e-12).map_err(|e| e.to_string())?;
                let w = r.param_f64("max_width").unwrap_or(f64::INFINITY);
                ensure(r.verdict == Verdict::Holds && w <= 1e-12, || {
                    format!("{s} a={a} b={b}: {} width {w:e}", r.verdict)
                })?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} (space, a, b) cases, every t certified with width <= 1e-12"))
}

fn lemma43_fixture() -> Outcome {
    let mut count = 0;
    for field in [Field::Real, Field::Complex] {
        let mut g0s = vec![real(-1.0), real(0.3)];
        if field == Field::Complex {
            g0s.push(Scalar::new(-0.5, 0.5));
        }
        for s in registry(field) {
            for &g0 in &g0s {
                let (lower, upper) = default_lemma43_grid(g0);
                ensure(lower.len() == 5 && upper.len() == 5, || "grid size".into())?;
                let r = fixture_lemma43(&s, g0, None, 1e-12).map_err(|e| e.to_string())?;
                let w = r.param_f64("max_width").unwrap_or(f64::INFINITY);
                ensure(r.verdict == Verdict::Holds && w <= 1e-12, || {
                    format!("{s} g0={g0}: {} width {w:e}", r.verdict)
                })?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} (space, g0) cases, all three identities certified exact"))
}

fn spread_dichotomy() -> Outcome {
    let mut worst = 0.0f64;
    for field in [Field::Real, Field::Complex] {
        for s in registry(field) {
            for g in ["poly:0,1", "poly:0,-2.5", "poly:3", "poly:0"] {
                let sp = norm_spread(&EntireFunction::parse(g).unwrap(), &s, real(1.3)).map_err(|e| e.to_string())?;
                worst = worst.max(sp.spread);
                ensure(sp.spread <= 1e-9 && sp.certified, || format!("{g} on {s}: spread {:e}", sp.spread))?;
            }
        }
    }
    let linf2 = SpaceDesc::linf(2, Field::Real).unwrap();
    let sq = norm_spread(&EntireFunction::poly(&[0.0, 0.0, 1.0]), &linf2, real(1.0)).map_err(|e| e.to_string())?;
    ensure(sq.spread >= 0.9, || format!("zeta^2 on linf(2): spread {}", sq.spread))?;
    let affine = norm_spread(&EntireFunction::poly(&[1.0, 1.0]), &linf2, real(1.0)).map_err(|e| e.to_string())?;
    Ok(format!(
        "degree <= 1 with g(0)g'(0) = 0: max spread {worst:.1e}; zeta^2 on linf(2): {:.3} (1 + zeta on linf(2) spreads {:.3}, not constant)",
        sq.spread, affine.spread
    ))
}

fn predicted_failures() -> Outcome {
    let opts = CheckOptions::default();
    let linf2 = SpaceDesc::linf(2, Field::Real).unwrap();
    let r = check_daugavet(&linf2, &opts).map_err(|e| e.to_string())?;
    ensure(r.verdict == Verdict::Fails && r.max_violation >= 1.0 - 1e-9, || format!("daugavet: {r:?}"))?;
    let daugavet_violation = r.max_violation;
    let w = &r.witnesses[0];
    let t = RankOne::new(&linf2, Functional::new(w.functional.clone()), Vector::new(w.vector.clone())).unwrap();
    let id_plus_t = affine_matrix(real(1.0), real(1.0), &t);
    ensure(id_plus_t.max_abs_diff(&DenseMatrix::diagonal(&[real(0.0), real(1.0)])) == 0.0, || {
        format!("witness {id_plus_t:?}")
    })?;
    let rv = recompute_witness(&r, w).map_err(|e| e.to_string())?;
    ensure((rv - w.value("violation").unwrap()).abs() <= 1e-9, || format!("daugavet recompute {rv}"))?;

    let l2 = SpaceDesc::l2(2, Field::Real).unwrap();
    let r = check_omega(&l2, real(-1.0), &opts).map_err(|e| e.to_string())?;
    ensure(r.verdict == Verdict::Fails && r.max_violation >= 1.0 - 1e-9, || format!("omega: {r:?}"))?;
    let rv = recompute_witness(&r, &r.witnesses[0]).map_err(|e| e.to_string())?;
    ensure(rv >= 1.0 - 1e-9, || format!("omega recompute {rv}"))?;

    let linf3 = SpaceDesc::linf(3, Field::Real).unwrap();
    let pinned =
        RankOne::new(&linf3, Functional::from_real(&[-0.2, 0.2, 0.6]), Vector::from_real(&[1.0, -1.0, 0.9])).unwrap();
    let r = check_tsquare_with(&linf3, Sign::Plus, &opts, std::slice::from_ref(&pinned)).map_err(|e| e.to_string())?;
    let w = r
        .witnesses
        .iter()
        .find(|w| w.vector == pinned.vector().coords() && w.functional == pinned.functional().coords())
        .ok_or("pinned witness missing from the report")?;
    let v = w.value("violation").unwrap();
    ensure(r.verdict == Verdict::Fails && (v - 0.1).abs() <= 1e-9, || format!("tsquare pinned violation {v}"))?;
    let rv = recompute_witness(&r, w).map_err(|e| e.to_string())?;
    ensure((rv - 0.1).abs() <= 1e-9, || format!("tsquare recompute {rv}"))?;
    Ok(format!(
        "daugavet on linf(2) violation {:.3}, omega=-1 on l2(2) fails, tsquare(+) pinned violation {v:.12}",
        daugavet_violation
    ))
}

fn hull_checker() -> Outcome {
    let linf2 = SpaceDesc::linf(2, Field::Real).unwrap();
    let x = Vector::from_real(&[1.0, 0.0]);
    let (gap, _) = hull_gap(&linf2, &x, 0.5, &Functional::from_real(&[1.0, 0.0])).map_err(|e| e.to_string())?;
    ensure((gap - 1.5).abs() <= 1e-9, || format!("gap {gap}"))?;
    let grid = [0.1, 0.5, 1.0, 1.5, 2.0];
    for f in default_directions(&linf2) {
        let gaps: Vec<f64> = grid
            .iter()
            .map(|&e| hull_gap(&linf2, &x, e, &f).map(|g| g.0))
            .collect::<nelab_core::Result<_>>()
            .map_err(|e| e.to_string())?;
        ensure(gaps.windows(2).all(|w| w[1] <= w[0] + 1e-12), || format!("not monotone along {f:?}: {gaps:?}"))?;
        ensure(gaps[4] <= 1e-9, || format!("gap {} at eps = 2 along {f:?}", gaps[4]))?;
    }
    Ok(format!(
        "gap {gap:.12} at eps 0.5 along e1*, monotone over {} directions, 0 at eps 2",
        default_directions(&linf2).len()
    ))
}

fn slice_and_denting() -> Outcome {
    let linf2 = SpaceDesc::linf(2, Field::Real).unwrap();
    let d = slice_diameter(&linf2, &Functional::from_real(&[1.0, 0.0]), 0.5).map_err(|e| e.to_string())?;
    ensure(d.certified && d.mid() == 2.0 && d.width() <= 1e-12, || format!("slice diameter {d:?}"))?;
    let vertex = check_denting(&linf2, &Vector::from_real(&[1.0, 1.0]), &[0.1], 1e-9).map_err(|e| e.to_string())?;
    ensure(vertex.verdict == Verdict::Holds, || format!("vertex: {}", vertex.verdict))?;
    let small = slice_diameter(&linf2, &Functional::from_real(&[0.5, 0.5]), 0.04).map_err(|e| e.to_string())?;
    ensure(small.certified && small.hi <= 0.1, || format!("vertex slice {small:?}"))?;
    let mid = check_denting(&linf2, &Vector::from_real(&[1.0, 0.0]), &[0.1], 1e-9).map_err(|e| e.to_string())?;
    ensure(mid.verdict == Verdict::Fails, || format!("midpoint: {}", mid.verdict))?;
    Ok(format!(
        "slice diameter {} (width {:.0e}), vertex slice diameter {:.3}, (1,0) not denting",
        d.mid(),
        d.width(),
        small.hi
    ))
}

fn engine_cross_validation() -> Outcome {
    let all = spaces(
        Field::Real,
        &["linf(1)", "linf(4)", "l1(4)", "l2(4)", "sum2(l1(2),l1(2))", "sum2(linf(1),linf(3))", "sum2(l2(1),linf(3))"],
    );
    let mut sum2_width = 0.0f64;
    for k in 0..500u64 {
        let s = &all[k as usize % all.len()];
        let t = random_rankone(s, 7000 + k, 0.25 + 2.0 * (unit(k, 6) + 1.0)).unwrap();
        let (a, b) = (real(2.0 * unit(k, 7)), real(2.0 * unit(k, 8)));
        let e = norm_affine_rankone(s, a, b, &t).map_err(|e| e.to_string())?;
        let o = matrix_norm_oracle(s, &affine_matrix(a, b, &t)).map_err(|e| e.to_string())?;
        ensure(e.intersects(&o), || format!("{s} #{k}: {e:?} vs {o:?}"))?;
        if s.dsl().starts_with("sum2") {
            sum2_width = sum2_width.max(e.width());
            ensure(e.width() <= 1e-6, || format!("{s} #{k}: width {:e}", e.width()))?;
        }
    }
    Ok(format!("500 instances on {} spaces intersect, max sum2 width {sum2_width:.1e}", all.len()))
}

fn suite_run(threads: &str) -> Result<Vec<CheckReport>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_nelab"))
        .args(["suite", "--seed", "42", "--parallelism", threads])
        .env_remove("NELAB_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(0), || {
        format!("suite exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
    })?;
    let reports: Vec<CheckReport> = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    Ok(reports.iter().map(CheckReport::without_timing).collect())
}

fn determinism() -> Outcome {
    let one = serde_json::to_vec(&suite_run("1")?).unwrap();
    let eight = serde_json::to_vec(&suite_run("8")?).unwrap();
    ensure(one == eight, || "suite reports differ between 1 and 8 workers".into())?;
    Ok(format!("suite output identical for 1 and 8 workers ({} bytes)", one.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("functional calculus vs truncated series", calculus_oracle),
        ("power identity", power_identity),
        ("affine fixture", f_shape_fixture),
        ("three-identity fixture", lemma43_fixture),
        ("norm spread dichotomy", spread_dichotomy),
        ("finite-dimensional failures", predicted_failures),
        ("hull checker", hull_checker),
        ("slices and denting points", slice_and_denting),
        ("engine cross-validation", engine_cross_validation),
        ("determinism across worker counts", determinism),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let ms = t.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail} [{ms} ms]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why} [{ms} ms]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} passed in {:.1} s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
