//! A fixed battery of checks with known verdicts.

use nelab_core::{real, CheckReport, Field, Scalar, Verdict};

use crate::config::{CheckKind, CheckParams, Format, RunConfig, SuiteConfig};
use crate::emit::emit_reports;
use crate::run::{execute, with_pool};
use crate::CliError;

/// One battery entry: the check to run and the verdict it must reach.
#[derive(Clone, Debug)]
pub struct SuiteCase {
    pub check: CheckKind,
    pub space: Option<&'static str>,
    pub field: Field,
    pub params: CheckParams,
    pub expected: Verdict,
}

fn case(check: CheckKind, space: &'static str, field: Field, expected: Verdict) -> SuiteCase {
    SuiteCase { check, space: Some(space), field, params: CheckParams::default(), expected }
}

fn reals(v: &[f64]) -> Option<Vec<Scalar>> {
    Some(v.iter().map(|&r| Scalar::new(r, 0.0)).collect())
}

pub fn battery() -> Vec<SuiteCase> {
    use CheckKind::{
        Badproj, Daugavet, Denting, Dual, FShape, Geom, Hull, Lemma43, Omega, OmegaGroup, Slice, Spread, Tsquare,
    };
    use Field::{Complex, Real};
    use Verdict::{Fails, Holds};
    let with = |mut c: SuiteCase, f: &dyn Fn(&mut CheckParams)| {
        f(&mut c.params);
        c
    };
    vec![
        case(Daugavet, "linf(2)", Real, Fails),
        case(Daugavet, "sum2(l1(2),linf(2))", Real, Fails),
        with(case(Omega, "l2(2)", Real, Fails), &|p| p.omega = Some(real(-1.0))),
        with(case(Omega, "l2(2)", Complex, Holds), &|p| p.omega = Some(real(1.0))),
        case(OmegaGroup, "l2(2)", Complex, Holds),
        case(Dual, "linf(2)", Real, Holds),
        case(Tsquare, "linf(3)", Real, Fails),
        case(Badproj, "l2(2)", Real, Fails),
        case(FShape, "linf(3)", Real, Holds),
        case(FShape, "sum2(l1(2),l2(2))", Real, Holds),
        with(case(FShape, "l1(2)", Complex, Holds), &|p| {
            p.a = Some(Scalar::new(1.0, 0.0));
            p.b = Some(Scalar::new(0.0, 1.0));
        }),
        case(Lemma43, "l1(3)", Real, Holds),
        with(case(Lemma43, "linf(2)", Complex, Holds), &|p| p.g0 = Some(Scalar::new(-0.5, 0.5))),
        with(case(Spread, "linf(2)", Real, Holds), &|p| p.g = Some("poly:0,-2".into())),
        case(Spread, "linf(2)", Real, Fails),
        with(case(Hull, "linf(2)", Real, Fails), &|p| p.x = reals(&[1.0, 0.0])),
        with(case(Slice, "linf(2)", Real, Holds), &|p| p.f = reals(&[1.0, 0.0])),
        with(case(Denting, "linf(2)", Real, Holds), &|p| p.x = reals(&[1.0, 1.0])),
        with(case(Denting, "linf(2)", Real, Fails), &|p| p.x = reals(&[1.0, 0.0])),
        with(case(Geom, "l2(2)", Real, Fails), &|p| p.f = reals(&[0.0, 1.0])),
        with(case(Geom, "l1(3)", Real, Holds), &|p| p.f = reals(&[0.0, 1.0, 1.0])),
        SuiteCase {
            check: CheckKind::Scalar,
            space: None,
            field: Complex,
            params: CheckParams::default(),
            expected: Fails,
        },
    ]
}

impl SuiteCase {
    pub fn config(&self, suite: &SuiteConfig) -> RunConfig {
        RunConfig {
            check: self.check,
            space: self.space.map(str::to_string),
            field: self.field,
            params: self.params.clone(),
            samples: suite.samples,
            seed: suite.seed,
            tolerance: suite.tolerance,
            output: None,
            format: Format::Json,
            parallelism: suite.parallelism,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub reports: Vec<CheckReport>,
    pub expected: Vec<Verdict>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.reports.iter().zip(&self.expected).all(|(r, e)| r.verdict == *e)
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(!self.passed())
    }
}

/// Compute every battery report without emitting anything.
pub fn collect_suite(config: &SuiteConfig) -> Result<SuiteOutcome, CliError> {
    let cases = battery();
    let reports: Vec<CheckReport> =
        with_pool(config.parallelism, || cases.iter().map(|c| execute(&c.config(config))).collect::<Result<_, _>>())??;
    Ok(SuiteOutcome { reports, expected: cases.iter().map(|c| c.expected).collect() })
}

/// Run the battery, emit all reports and summarize on stderr.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteOutcome, CliError> {
    let outcome = collect_suite(config)?;
    for (r, e) in outcome.reports.iter().zip(&outcome.expected) {
        let mark = if r.verdict == *e { "PASS" } else { "FAIL" };
        eprintln!("{mark} {} {} ({}) expected {e}, got {}", r.check, r.space, r.field, r.verdict);
    }
    emit_reports(&outcome.reports, config.format, config.output.as_deref())?;
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_meets_expectations() {
        let cfg =
            SuiteConfig { samples: 50, seed: 42, tolerance: 1e-9, output: None, format: Format::Json, parallelism: 2 };
        let out = collect_suite(&cfg).unwrap();
        for (r, e) in out.reports.iter().zip(&out.expected) {
            assert_eq!(r.verdict, *e, "{} on {}", r.check, r.space);
        }
    }
}
