//! Dispatch a validated configuration to its check.

use nelab_core::properties::{
    check_bad_projections, check_daugavet, check_denting, check_dual_transfer, check_geometric_condition, check_hull,
    check_omega, check_slice, check_spread, check_tsquare, default_directions, detect_omega_group, fixture_lemma43,
    fixture_prop_f_shape, scalar_cases, ScalarGrid, Sign, DEFAULT_EPS_GRID, F_SHAPE_GRID,
};
use nelab_core::{real, CheckOptions, CheckReport, EntireFunction, Functional, Scalar, SpaceDesc, Vector};

use crate::config::{CheckKind, RunConfig};
use crate::emit::emit_report;
use crate::CliError;

pub const DEFAULT_G: &str = "poly:0,0,1";
pub const DEFAULT_G0: f64 = 0.3;
pub const DEFAULT_GEOM_EPS: f64 = 0.1;
pub const DEFAULT_SLICE_ALPHA: f64 = 0.5;
pub const DEFAULT_HULL_EPS: f64 = 0.5;

/// Run `f` on a pool of `threads` workers (0 = one per core).
pub fn with_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {threads} worker threads: {e}")))?;
    Ok(pool.install(f))
}

fn vector_arg(space: &SpaceDesc, x: &Option<Vec<Scalar>>) -> Vector {
    match x {
        Some(c) => Vector::new(c.clone()),
        None => Vector::basis(space.dim(), 0),
    }
}

fn functional_arg(space: &SpaceDesc, f: &Option<Vec<Scalar>>, x: &Vector) -> Result<Functional, CliError> {
    match f {
        Some(c) => Ok(Functional::new(c.clone())),
        None => Ok(space.support_functional(x)?),
    }
}

/// Produce the report for `config` on the current thread pool.
pub fn execute(config: &RunConfig) -> Result<CheckReport, CliError> {
    let p = &config.params;
    let opts = CheckOptions { samples: config.samples, seed: config.seed, tol: config.tolerance };
    let tol = config.tolerance;
    let g = || EntireFunction::parse(p.g.as_deref().unwrap_or(DEFAULT_G));
    if config.check == CheckKind::Scalar {
        return Ok(scalar_cases(&g()?, &ScalarGrid::default(), tol)?);
    }
    let dsl = config.space.as_deref().ok_or_else(|| CliError::Usage("missing --space".into()))?;
    let space = SpaceDesc::parse(dsl, config.field)?;
    let x = vector_arg(&space, &p.x);
    let report = match config.check {
        CheckKind::Daugavet => check_daugavet(&space, &opts)?,
        CheckKind::Omega => check_omega(&space, p.omega.unwrap_or(real(-1.0)), &opts)?,
        CheckKind::Dual => check_dual_transfer(&space, p.omega.unwrap_or(real(-1.0)), &opts)?,
        CheckKind::OmegaGroup => detect_omega_group(&space, &opts)?.1,
        CheckKind::FShape => fixture_prop_f_shape(
            &space,
            p.a.unwrap_or(real(2.0)),
            p.b.unwrap_or(real(-3.0)),
            p.t.as_deref().unwrap_or(&F_SHAPE_GRID),
            tol,
        )?,
        CheckKind::Lemma43 => fixture_lemma43(&space, p.g0.unwrap_or(real(DEFAULT_G0)), p.t.as_deref(), tol)?,
        CheckKind::Tsquare => check_tsquare(&space, p.sign.unwrap_or(Sign::Plus), &opts)?,
        CheckKind::Badproj => check_bad_projections(&space, &opts)?,
        CheckKind::Spread => check_spread(&g()?, &space, p.lambda.unwrap_or(real(1.0)), tol)?,
        CheckKind::Geom => {
            let f = functional_arg(&space, &p.f, &x)?;
            let eps = p.eps.unwrap_or(DEFAULT_GEOM_EPS);
            check_geometric_condition(&space, &x, &f, eps, config.samples, config.seed, tol)?
        }
        CheckKind::Slice => {
            let f = functional_arg(&space, &p.f, &x)?;
            check_slice(&space, &f, p.alpha.unwrap_or(DEFAULT_SLICE_ALPHA), p.eps, tol)?
        }
        CheckKind::Denting => check_denting(&space, &x, p.eps_grid.as_deref().unwrap_or(&DEFAULT_EPS_GRID), tol)?,
        CheckKind::Hull => {
            let dirs = match &p.f {
                Some(c) => vec![Functional::new(c.clone())],
                None => default_directions(&space),
            };
            check_hull(&space, &x, p.eps.unwrap_or(DEFAULT_HULL_EPS), &dirs, tol)?
        }
        CheckKind::Scalar => unreachable!("handled above"),
    };
    Ok(report)
}

/// Execute `config`, emit its report and return the verdict's exit code.
pub fn run(config: &RunConfig) -> Result<i32, CliError> {
    let report = with_pool(config.parallelism, || execute(config))??;
    emit_report(&report, config.format, config.output.as_deref())?;
    Ok(report.verdict.exit_code())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{parse_args, Invocation};
    use nelab_core::Verdict;

    fn config(args: &[&str]) -> RunConfig {
        match parse_args(std::iter::once("nelab").chain(args.iter().copied())).unwrap() {
            Invocation::Check(c) => c,
            other => panic!("{other:?}"),
        }
    }

    fn verdict(args: &[&str]) -> Verdict {
        execute(&config(args)).unwrap().verdict
    }

    #[test]
    fn defaults_reach_each_check() {
        assert_eq!(verdict(&["check", "daugavet", "--space", "linf(2)", "--samples", "20"]), Verdict::Fails);
        assert_eq!(verdict(&["check", "omega", "--space", "l2(2)", "--omega", "1", "--samples", "20"]), Verdict::Holds);
        assert_eq!(verdict(&["check", "f-shape", "--space", "l1(3)"]), Verdict::Holds);
        assert_eq!(verdict(&["check", "lemma43", "--space", "linf(2)"]), Verdict::Holds);
        assert_eq!(verdict(&["check", "spread", "--space", "linf(2)"]), Verdict::Fails);
        assert_eq!(verdict(&["check", "spread", "--space", "linf(2)", "--g", "poly:0,-2"]), Verdict::Holds);
        assert_eq!(verdict(&["check", "slice", "--space", "linf(2)"]), Verdict::Holds);
        assert_eq!(verdict(&["check", "hull", "--space", "linf(2)"]), Verdict::Fails);
        assert_eq!(verdict(&["check", "denting", "--space", "linf(2)", "--x", "1,1"]), Verdict::Holds);
        assert_eq!(verdict(&["check", "denting", "--space", "linf(2)"]), Verdict::Fails);
        assert_eq!(verdict(&["check", "scalar"]), Verdict::Fails);
    }

    #[test]
    fn bad_runtime_arguments_are_errors() {
        let c = config(&["check", "geom", "--space", "l2(2)", "--x", "0.5,0"]);
        assert_eq!(execute(&c).unwrap_err().exit_code(), crate::EXIT_USAGE);
        let c = config(&["check", "lemma43", "--space", "l2(2)", "--t", "0.1"]);
        assert!(execute(&c).unwrap_err().to_string().contains("out of range"));
    }
}
