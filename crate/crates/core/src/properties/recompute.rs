//! Recompute a witness violation from its serialized form alone.

use crate::calculus::EntireFunction;
use crate::error::{NelabError, Result};
use crate::opnorm::norm_affine_rankone;
use crate::rankone::RankOne;
use crate::report::{CheckReport, Witness};
use crate::scalar::parse_scalar;
use crate::spaces::{real, Functional, Scalar, SpaceDesc, Vector};

use super::equalities::{bad_projection_compare, daugavet_pair, dual_pair, omega_pair};
use super::fixtures::{scalar_violation, spread_violation};
use super::geometry::{denting_bound, hull_gap, search_geometric_condition, slice_diameter};
use super::{exact_value, Compared};

fn missing(what: &str) -> NelabError {
    NelabError::InvalidArgument(format!("report lacks `{what}`"))
}

fn scalar_param(r: &CheckReport, key: &str) -> Result<Scalar> {
    parse_scalar(r.param_str(key).ok_or_else(|| missing(key))?)
}

fn coords_param(r: &CheckReport, key: &str) -> Result<Vec<Scalar>> {
    r.param_str(key).ok_or_else(|| missing(key))?.split(',').map(parse_scalar).collect()
}

fn value(w: &Witness, key: &str) -> Result<f64> {
    w.value(key).ok_or_else(|| missing(key))
}

fn diff(pair: (crate::opnorm::NormEnclosure, crate::opnorm::NormEnclosure)) -> f64 {
    (pair.0.mid() - pair.1.mid()).abs()
}

/// Violation of `witness` recomputed from the space, the report parameters
/// and the witness coordinates; no cached enclosure is reused.
pub fn recompute_witness(report: &CheckReport, witness: &Witness) -> Result<f64> {
    if report.check == "scalar" {
        let g = EntireFunction::parse(report.param_str("g").ok_or_else(|| missing("g"))?)?;
        let (z1, z2) = match (witness.functional.first(), witness.vector.first()) {
            (Some(a), Some(b)) => (*a, *b),
            _ => return Err(missing("witness arguments")),
        };
        return scalar_violation(&g, z1, z2);
    }
    let space = SpaceDesc::parse(&report.space, report.field)?;
    let f = Functional::new(witness.functional.clone());
    let x = Vector::new(witness.vector.clone());
    let op = || RankOne::new(&space, f.clone(), x.clone());
    match report.check.as_str() {
        "daugavet" | "tsquare" => Ok(diff(daugavet_pair(&space, &op()?)?)),
        "omega" => Ok(diff(omega_pair(&space, scalar_param(report, "omega")?, &op()?)?)),
        "dual" => Ok(diff(dual_pair(&space, scalar_param(report, "omega")?, &op()?)?)),
        "badproj" => {
            let (c, _): (Compared, _) = bad_projection_compare(&space, &op()?, report.tolerance)?;
            Ok(c.violation)
        }
        "f-shape" => {
            let (a, b) = (scalar_param(report, "a")?, scalar_param(report, "b")?);
            let t = value(witness, "t")?;
            let lhs = norm_affine_rankone(&space, a, real(1.0), &op()?)?;
            Ok((lhs.mid() - exact_value(a.norm() + b.norm() * t, space.dim()).mid()).abs())
        }
        "lemma43" => {
            let g0 = scalar_param(report, "g0")?;
            let t = value(witness, "t")?;
            let (a, expected) = match value(witness, "identity")? as u8 {
                1 => (real(-1.0), t),
                2 => (real(1.0) + g0, (real(1.0) + g0).norm() + t - g0.norm()),
                3 => (g0, t),
                other => return Err(NelabError::InvalidArgument(format!("unknown identity {other}"))),
            };
            let lhs = norm_affine_rankone(&space, a, real(1.0), &op()?)?;
            Ok((lhs.mid() - expected).abs())
        }
        "spread" => {
            let g = EntireFunction::parse(report.param_str("g").ok_or_else(|| missing("g"))?)?;
            let lambda = scalar_param(report, "lambda")?;
            let amax = Scalar::new(value(witness, "alpha_max_re")?, value(witness, "alpha_max_im")?);
            let amin = Scalar::new(value(witness, "alpha_min_re")?, value(witness, "alpha_min_im")?);
            spread_violation(&g, &space, lambda, amax, amin)
        }
        "hull" => {
            let center = Vector::new(coords_param(report, "x")?);
            Ok(hull_gap(&space, &center, value(witness, "eps")?, &f)?.0)
        }
        "slice" => Ok(slice_diameter(&space, &f, value(witness, "alpha")?)?.mid() - value(witness, "eps")?),
        "denting" => Ok(denting_bound(&space, &x)? - value(witness, "eps")?),
        "geom" => {
            let center = Vector::new(coords_param(report, "x")?);
            let s = search_geometric_condition(&space, &center, &f, value(witness, "eps")?, 0, report.seed)?;
            Ok(-s.margin)
        }
        other => Err(NelabError::InvalidArgument(format!("no witnesses are defined for check `{other}`"))),
    }
}
