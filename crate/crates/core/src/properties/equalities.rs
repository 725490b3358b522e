//! Sampled norm equalities for rank-one operators.

use std::str::FromStr;

use crate::error::{NelabError, Result};
use crate::opnorm::{norm_affine_rankone, NormEnclosure};
use crate::rankone::RankOne;
use crate::report::{CheckReport, ReportBuilder, Verdict, Witness};
use crate::spaces::{pair, real, Field, Scalar, SpaceDesc};

use super::{
    aggregate, basis_probes, check_unimodular, compare, exact_value, one, random_probe, sweep, CheckOptions, Compared,
    ProbeNorm,
};

/// A probe family: fixed operators first, then seeded random ones.
struct Family<'a> {
    space: &'a SpaceDesc,
    fixed: Vec<RankOne>,
    random: usize,
    seed: u64,
    norm: ProbeNorm,
    adjust: &'a (dyn Fn(RankOne) -> RankOne + Sync),
}

impl Family<'_> {
    fn len(&self) -> usize {
        self.fixed.len() + self.random
    }

    fn get(&self, k: usize) -> Result<RankOne> {
        match self.fixed.get(k) {
            Some(t) => Ok(t.clone()),
            None => Ok((self.adjust)(random_probe(self.space, self.seed, k - self.fixed.len(), self.norm)?)),
        }
    }

    fn scope(&self, what: &str) -> String {
        let norm = match self.norm {
            ProbeNorm::Unit => "of norm 1",
            ProbeNorm::Varied => "of norm in [0.25, 4]",
        };
        format!("{what}: {} fixed probes and {} seeded operators {norm}", self.fixed.len(), self.random)
    }
}

fn identity_fn(t: RankOne) -> RankOne {
    t
}

type Pair = (NormEnclosure, NormEnclosure);

fn operator_witness(t: &RankOne, lhs: &NormEnclosure, rhs: &NormEnclosure, c: &Compared) -> Witness {
    Witness::new(t.functional().coords().to_vec(), t.vector().coords().to_vec())
        .with_enclosure("lhs", lhs)
        .with_enclosure("rhs", rhs)
        .with("violation", c.violation)
        .with("alpha_re", t.alpha().re)
        .with("alpha_im", t.alpha().im)
        .with("operator_norm", t.norm())
}

/// Run an equality over a family and assemble the report.
fn run_equality(
    mut builder: ReportBuilder,
    family: &Family<'_>,
    opts: &CheckOptions,
    pinned: usize,
    eval: impl Fn(&RankOne) -> Result<Pair> + Sync,
) -> Result<CheckReport> {
    let results = sweep(family.len(), |k| {
        let t = family.get(k)?;
        let (lhs, rhs) = eval(&t)?;
        let c = compare(&lhs, &rhs, opts.tol);
        Ok((c, lhs, rhs))
    })?;
    let compared: Vec<Compared> = results.iter().map(|r| r.0).collect();
    let (verdict, max_violation, worst) = aggregate(&compared);
    let mut witnesses = Vec::new();
    let mut push = |k: usize| -> Result<()> {
        let (c, lhs, rhs) = &results[k];
        witnesses.push(operator_witness(&family.get(k)?, lhs, rhs, c));
        Ok(())
    };
    if let Some(k) = worst {
        push(k)?;
    }
    for (k, r) in results.iter().enumerate().take(pinned) {
        if Some(k) != worst && r.0.verdict == Verdict::Fails {
            push(k)?;
        }
    }
    let undecided = compared.iter().filter(|c| c.verdict == Verdict::Undecided).count();
    builder.param("undecided_samples", undecided);
    Ok(builder.finish(verdict, max_violation, witnesses, family.len()))
}

/// `‖Id + T‖ = 1 + ‖T‖` over basis probes and seeded unit-norm operators.
pub fn check_daugavet(space: &SpaceDesc, opts: &CheckOptions) -> Result<CheckReport> {
    let family = Family {
        space,
        fixed: basis_probes(space),
        random: opts.samples,
        seed: opts.seed,
        norm: ProbeNorm::Unit,
        adjust: &identity_fn,
    };
    let mut b = ReportBuilder::new("daugavet", space, opts.seed, opts.tol);
    b.param("scope", family.scope("rank-one operators"));
    run_equality(b, &family, opts, 0, |t| daugavet_pair(space, t))
}

pub(crate) fn daugavet_pair(space: &SpaceDesc, t: &RankOne) -> Result<Pair> {
    let lhs = norm_affine_rankone(space, one(), one(), t)?;
    Ok((lhs, exact_value(1.0 + t.norm(), space.dim())))
}

/// `‖Id + ωT‖ = ‖Id + T‖`; `ω = 1` holds trivially.
pub fn check_omega(space: &SpaceDesc, omega: Scalar, opts: &CheckOptions) -> Result<CheckReport> {
    check_unimodular(omega)?;
    space.check_scalar(omega)?;
    let mut b = ReportBuilder::new("omega", space, opts.seed, opts.tol);
    b.scalar("omega", omega);
    if omega == one() {
        b.param("scope", "identity case omega = 1");
        return Ok(b.finish(Verdict::Holds, 0.0, vec![], 0));
    }
    let family = Family {
        space,
        fixed: basis_probes(space),
        random: opts.samples,
        seed: opts.seed,
        norm: ProbeNorm::Varied,
        adjust: &identity_fn,
    };
    b.param("scope", family.scope("rank-one operators"));
    run_equality(b, &family, opts, 0, |t| omega_pair(space, omega, t))
}

pub(crate) fn omega_pair(space: &SpaceDesc, omega: Scalar, t: &RankOne) -> Result<Pair> {
    Ok((norm_affine_rankone(space, one(), omega, t)?, norm_affine_rankone(space, one(), one(), t)?))
}

/// Sign constraint on `x*(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    fn admits(self, alpha: Scalar) -> bool {
        self.factor() * alpha.re >= 0.0
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

impl FromStr for Sign {
    type Err = NelabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            other => Err(NelabError::Parse(format!("unknown sign `{other}` (expected + or -)"))),
        }
    }
}

pub fn check_tsquare(space: &SpaceDesc, sign: Sign, opts: &CheckOptions) -> Result<CheckReport> {
    check_tsquare_with(space, sign, opts, &[])
}

/// Daugavet equation restricted to real `x*⊗x` with `±x*(x) ≥ 0`.
///
/// `pinned` operators are evaluated first and reported whenever they fail.
pub fn check_tsquare_with(
    space: &SpaceDesc,
    sign: Sign,
    opts: &CheckOptions,
    pinned: &[RankOne],
) -> Result<CheckReport> {
    if space.field() != Field::Real {
        return Err(NelabError::FieldMismatch("the sign-constrained check needs a real space".into()));
    }
    for t in pinned {
        if t.space() != space || !sign.admits(t.alpha()) {
            return Err(NelabError::InvalidArgument("pinned operator violates the sign constraint".into()));
        }
    }
    let mut fixed = pinned.to_vec();
    fixed.extend(basis_probes(space).into_iter().filter(|t| sign.admits(t.alpha())));
    let flip = move |t: RankOne| if sign.admits(t.alpha()) { t } else { t.scale(real(-1.0)) };
    let family = Family { space, fixed, random: opts.samples, seed: opts.seed, norm: ProbeNorm::Unit, adjust: &flip };
    let mut b = ReportBuilder::new("tsquare", space, opts.seed, opts.tol);
    b.param("sign", sign.symbol());
    b.param("scope", family.scope(&format!("rank-one operators with {}x*(x) >= 0", sign.symbol())));
    run_equality(b, &family, opts, pinned.len(), |t| daugavet_pair(space, t))
}

/// `‖Id + ωT‖` on the space against `‖Id + ωT*‖` on its dual.
pub fn check_dual_transfer(space: &SpaceDesc, omega: Scalar, opts: &CheckOptions) -> Result<CheckReport> {
    check_unimodular(omega)?;
    space.check_scalar(omega)?;
    let family = Family {
        space,
        fixed: basis_probes(space),
        random: opts.samples,
        seed: opts.seed,
        norm: ProbeNorm::Varied,
        adjust: &identity_fn,
    };
    let mut b = ReportBuilder::new("dual", space, opts.seed, opts.tol);
    b.scalar("omega", omega);
    b.param("dual_space", space.dual().dsl());
    b.param("scope", family.scope("rank-one operators and their adjoints"));
    run_equality(b, &family, opts, 0, |t| dual_pair(space, omega, t))
}

pub(crate) fn dual_pair(space: &SpaceDesc, omega: Scalar, t: &RankOne) -> Result<Pair> {
    let adj = t.adjoint();
    Ok((norm_affine_rankone(space, one(), omega, t)?, norm_affine_rankone(adj.space(), one(), omega, &adj)?))
}

/// Rank-one projection number `k` of the bad-projection family.
fn projection(space: &SpaceDesc, seed: u64, k: usize) -> Result<RankOne> {
    let n = space.dim();
    if k < n {
        return RankOne::basis(space, k, k, one());
    }
    let base = random_probe(space, seed, k - n, ProbeNorm::Varied)?;
    let x = base.vector();
    let s = space.support_functional(x)?;
    let h = base.functional();
    let hx = pair(h, x)?;
    let f = s.scale(one() - hx).add(h);
    RankOne::new(space, f, x.clone())
}

pub(crate) fn bad_projection_compare(space: &SpaceDesc, p: &RankOne, tol: f64) -> Result<(Compared, NormEnclosure)> {
    let e = norm_affine_rankone(space, one(), real(-1.0), p)?;
    let verdict = if 2.0 - e.hi >= tol {
        Verdict::Fails
    } else if e.certified && e.lo >= 2.0 - tol {
        Verdict::Holds
    } else {
        Verdict::Undecided
    };
    Ok((Compared { verdict, violation: (2.0 - e.mid()).max(0.0) }, e))
}

/// `‖Id − P‖ ≥ 2` for rank-one projections `P = x*⊗x`, `x*(x) = 1`, `‖x‖ = 1`.
pub fn check_bad_projections(space: &SpaceDesc, opts: &CheckOptions) -> Result<CheckReport> {
    if space.dim() < 2 {
        return Err(NelabError::UnsupportedSpace("bad projections need dimension at least 2".into()));
    }
    let total = space.dim() + opts.samples;
    let results = sweep(total, |k| {
        let p = projection(space, opts.seed, k)?;
        bad_projection_compare(space, &p, opts.tol)
    })?;
    let compared: Vec<Compared> = results.iter().map(|r| r.0).collect();
    let (verdict, max_violation, worst) = aggregate(&compared);
    let min_norm = results.iter().map(|r| r.1.mid()).fold(f64::INFINITY, f64::min);
    let max_idempotence = (0..total.min(64))
        .map(|k| projection(space, opts.seed, k).map(|p| (p.alpha() - one()).norm()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let mut witnesses = Vec::new();
    if let Some(k) = worst {
        let p = projection(space, opts.seed, k)?;
        let (c, e) = &results[k];
        witnesses.push(
            Witness::new(p.functional().coords().to_vec(), p.vector().coords().to_vec())
                .with_enclosure("norm", e)
                .with("violation", c.violation)
                .with("idempotence_residual", (p.alpha() - one()).norm()),
        );
    }
    let mut b = ReportBuilder::new("badproj", space, opts.seed, opts.tol);
    b.param("scope", format!("{} coordinate projections and {} seeded projections", space.dim(), opts.samples));
    b.param("min_norm", min_norm);
    b.param("max_idempotence_residual", max_idempotence);
    Ok(b.finish(verdict, max_violation, witnesses, total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{registry, Functional, Vector};

    fn sp(s: &str) -> SpaceDesc {
        SpaceDesc::parse(s, Field::Real).unwrap()
    }

    fn small() -> CheckOptions {
        CheckOptions { samples: 40, ..CheckOptions::default() }
    }

    #[test]
    fn daugavet_fails_on_linf2_with_coordinate_witness() {
        let r = check_daugavet(&sp("linf(2)"), &small()).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert!((r.max_violation - 1.0).abs() < 1e-9);
        let w = &r.witnesses[0];
        assert_eq!(w.functional, vec![real(-1.0), real(0.0)]);
        assert_eq!(w.vector, vec![real(1.0), real(0.0)]);
        assert!((w.value("lhs_lo").unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn daugavet_fails_on_l2_3() {
        let r = check_daugavet(&sp("l2(3)"), &small()).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert!(r.max_violation >= 1.0 - 1e-9);
    }

    #[test]
    fn daugavet_holds_on_aligned_slice() {
        for s in registry(Field::Real).iter().chain(&registry(Field::Complex)) {
            for seed in 0..5 {
                let x = s.sample_sphere(seed);
                let f = s.support_functional(&x).unwrap();
                let t = RankOne::new(s, f.scale(real(1.7)), x).unwrap();
                let (l, r) = daugavet_pair(s, &t).unwrap();
                assert_eq!(compare(&l, &r, 1e-9).verdict, Verdict::Holds, "{}", s.dsl());
            }
        }
    }

    #[test]
    fn omega_examples() {
        let r = check_omega(&sp("l2(2)"), real(-1.0), &small()).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert!(r.max_violation >= 1.0 - 1e-9);
        for s in registry(Field::Complex) {
            let r = check_omega(&s, one(), &small()).unwrap();
            assert_eq!((r.verdict, r.max_violation), (Verdict::Holds, 0.0));
        }
        assert!(check_omega(&sp("l2(2)"), real(0.5), &small()).is_err());
        assert!(check_omega(&sp("l2(2)"), Scalar::new(0.0, 1.0), &small()).is_err());
    }

    #[test]
    fn tsquare_examples() {
        let s = sp("linf(3)");
        let w =
            RankOne::new(&s, Functional::from_real(&[-0.2, 0.2, 0.6]), Vector::from_real(&[1.0, -1.0, 0.9])).unwrap();
        let r = check_tsquare_with(&s, Sign::Plus, &small(), &[w]).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        let pinned = r.witnesses.iter().find(|x| x.functional == vec![real(-0.2), real(0.2), real(0.6)]).unwrap();
        assert!((pinned.value("violation").unwrap() - 0.1).abs() < 1e-9);

        let r = check_tsquare(&sp("l2(2)"), Sign::Minus, &small()).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert!((r.max_violation - 1.0).abs() < 1e-9);
        assert!(check_tsquare(&SpaceDesc::l2(2, Field::Complex).unwrap(), Sign::Plus, &small()).is_err());
    }

    #[test]
    fn dual_transfer_agrees() {
        for d in ["linf(2)", "l1(3)", "l2(2)", "sum2(linf(2),l1(2))"] {
            let r = check_dual_transfer(&sp(d), real(-1.0), &small()).unwrap();
            assert_eq!(r.verdict, Verdict::Holds, "{d}");
        }
        let s = SpaceDesc::linf(2, Field::Complex).unwrap();
        let r = check_dual_transfer(&s, Scalar::new(0.0, 1.0), &small()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn bad_projection_examples() {
        for d in ["l2(2)", "linf(2)"] {
            let r = check_bad_projections(&sp(d), &small()).unwrap();
            assert_eq!(r.verdict, Verdict::Fails);
            assert!(r.param_f64("min_norm").unwrap() <= 1.0 + 1e-9);
            assert!(r.param_f64("max_idempotence_residual").unwrap() <= 1e-12);
        }
        assert!(check_bad_projections(&sp("l2(1)"), &small()).is_err());
    }
}
