//! Entire functions of a scaled rank-one operator.
//!
//! Since `(λT)^k = α^{k−1}λ^k·T`, every entire `g` satisfies
//! `g(λT) = a₀·Id + c·T` with `c = (g(αλ) − a₀)/α`, or `c = a₁λ` when `α = 0`.

use std::fmt;
use std::sync::Arc;

use crate::error::{NelabError, Result};
use crate::matrix::DenseMatrix;
use crate::rankone::RankOne;
use crate::scalar::{format_scalar, parse_scalar};
use crate::spaces::{real, Scalar};

/// Below this `|αλ|` the ratio is summed from its Taylor series.
pub const SMALL_ARGUMENT: f64 = 1.0 / 1_048_576.0;

const SMALL_TERMS: usize = 10;

/// Dimension cap for the materialized oracle.
pub const ORACLE_CAP: usize = 32;

pub type CoeffFn = Arc<dyn Fn(usize) -> Scalar + Send + Sync>;

/// `(K, R) ↦` bound on `|Σ_{k>K} a_k ζ^k|` for `|ζ| ≤ R`.
pub type TailFn = Arc<dyn Fn(usize, f64) -> f64 + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Named {
    Exp,
    Sin,
    Cos,
    Sinh,
    Cosh,
}

impl Named {
    fn name(self) -> &'static str {
        match self {
            Named::Exp => "exp",
            Named::Sin => "sin",
            Named::Cos => "cos",
            Named::Sinh => "sinh",
            Named::Cosh => "cosh",
        }
    }
}

#[derive(Clone)]
pub enum EntireFunction {
    Poly(Vec<Scalar>),
    Named(Named),
    Series { coeff: CoeffFn, tail: Option<TailFn>, terms: usize },
}

impl fmt::Debug for EntireFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntireFunction::Series { terms, tail, .. } => {
                f.debug_struct("Series").field("terms", terms).field("tail", &tail.is_some()).finish()
            }
            other => write!(f, "{other}"),
        }
    }
}

impl fmt::Display for EntireFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntireFunction::Poly(c) => {
                let parts: Vec<String> = c.iter().map(|&z| format_scalar(z)).collect();
                write!(f, "poly:{}", parts.join(","))
            }
            EntireFunction::Named(n) => f.write_str(n.name()),
            EntireFunction::Series { terms, .. } => write!(f, "series[{terms}]"),
        }
    }
}

fn inv_factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc / j as f64)
}

impl EntireFunction {
    pub fn poly(coeffs: &[f64]) -> Self {
        EntireFunction::Poly(coeffs.iter().map(|&c| real(c)).collect())
    }

    pub fn series(coeff: CoeffFn, tail: Option<TailFn>, terms: usize) -> Self {
        EntireFunction::Series { coeff, tail, terms }
    }

    /// Parse `poly:1,2,3`, `exp`, `sin`, `cos`, `sinh` or `cosh`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if let Some(rest) = t.strip_prefix("poly:") {
            let coeffs = rest.split(',').map(parse_scalar).collect::<Result<Vec<_>>>()?;
            return Ok(EntireFunction::Poly(coeffs));
        }
        let n = match t {
            "exp" => Named::Exp,
            "sin" => Named::Sin,
            "cos" => Named::Cos,
            "sinh" => Named::Sinh,
            "cosh" => Named::Cosh,
            _ => {
                return Err(NelabError::Parse(format!(
                    "unknown function `{t}` (expected poly:a0,a1,..., exp, sin, cos, sinh or cosh)"
                )))
            }
        };
        Ok(EntireFunction::Named(n))
    }

    /// Taylor coefficient `a_k`.
    pub fn coeff(&self, k: usize) -> Scalar {
        match self {
            EntireFunction::Poly(c) => c.get(k).copied().unwrap_or_default(),
            EntireFunction::Named(n) => {
                let odd = k % 2 == 1;
                let alt = if (k / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
                real(match n {
                    Named::Exp => inv_factorial(k),
                    Named::Sinh if odd => inv_factorial(k),
                    Named::Cosh if !odd => inv_factorial(k),
                    Named::Sin if odd => alt * inv_factorial(k),
                    Named::Cos if !odd => alt * inv_factorial(k),
                    _ => 0.0,
                })
            }
            EntireFunction::Series { coeff, .. } => coeff(k),
        }
    }

    pub fn a0(&self) -> Scalar {
        self.coeff(0)
    }

    pub fn a1(&self) -> Scalar {
        self.coeff(1)
    }

    /// Degree of a polynomial (highest nonzero coefficient); `None` otherwise.
    pub fn degree(&self) -> Option<usize> {
        match self {
            EntireFunction::Poly(c) => Some(c.iter().rposition(|z| *z != Scalar::default()).unwrap_or(0)),
            _ => None,
        }
    }

    /// `g(ζ)` together with an error radius (zero except for series).
    pub fn eval_scalar(&self, z: Scalar) -> Result<(Scalar, f64)> {
        match self {
            EntireFunction::Poly(c) => Ok((horner(c, z), 0.0)),
            EntireFunction::Named(n) => Ok((
                match n {
                    Named::Exp => z.exp(),
                    Named::Sin => z.sin(),
                    Named::Cos => z.cos(),
                    Named::Sinh => z.sinh(),
                    Named::Cosh => z.cosh(),
                },
                0.0,
            )),
            EntireFunction::Series { coeff, tail, terms } => {
                let tail = tail
                    .as_ref()
                    .ok_or_else(|| NelabError::InvalidArgument("series evaluation needs a tail bound".into()))?;
                let coeffs: Vec<Scalar> = (0..=*terms).map(|k| coeff(k)).collect();
                Ok((horner(&coeffs, z), tail(*terms, z.norm())))
            }
        }
    }

    /// `g(ζ) − a₀` without cancellation for small `ζ`.
    fn gtilde_named(n: Named, z: Scalar) -> Scalar {
        let two = real(2.0);
        match n {
            Named::Exp => {
                let (x, y) = (z.re, z.im);
                let s = (0.5 * y).sin();
                Scalar::new(x.exp_m1() * y.cos() - 2.0 * s * s, x.exp() * y.sin())
            }
            Named::Sin => z.sin(),
            Named::Sinh => z.sinh(),
            Named::Cos => {
                let s = (z / two).sin();
                -two * s * s
            }
            Named::Cosh => {
                let s = (z / two).sinh();
                two * s * s
            }
        }
    }

    /// `λ·Σ_{k=1}^{K} a_k (αλ)^{k−1}`
    fn ratio_series(&self, z: Scalar, lambda: Scalar, terms: usize) -> Scalar {
        let coeffs: Vec<Scalar> = (1..=terms).map(|k| self.coeff(k)).collect();
        lambda * horner(&coeffs, z)
    }

    /// `g̃(αλ)/α` for `α ≠ 0`, and `a₁λ` for `α = 0`.
    pub fn gtilde_ratio(&self, alpha: Scalar, lambda: Scalar) -> Scalar {
        if alpha == Scalar::default() {
            return self.a1() * lambda;
        }
        let z = alpha * lambda;
        match self {
            EntireFunction::Poly(c) => self.ratio_series(z, lambda, c.len().saturating_sub(1)),
            EntireFunction::Series { terms, .. } => self.ratio_series(z, lambda, *terms),
            EntireFunction::Named(_) if z.norm() < SMALL_ARGUMENT => self.ratio_series(z, lambda, SMALL_TERMS),
            EntireFunction::Named(n) => Self::gtilde_named(*n, z) / alpha,
        }
    }
}

fn horner(coeffs: &[Scalar], z: Scalar) -> Scalar {
    coeffs.iter().rev().fold(Scalar::default(), |acc, &c| acc * z + c)
}

/// Coefficients `(c₀, c₁)` with `g(λT) = c₀·Id + c₁·T`.
pub fn apply_calculus(g: &EntireFunction, lambda: Scalar, t: &RankOne) -> (Scalar, Scalar) {
    (g.a0(), g.gtilde_ratio(t.alpha(), lambda))
}

/// Materialize `Σ_{k≤K} a_k (λT)^k` by repeated matrix products.
pub fn oracle_truncated(g: &EntireFunction, lambda: Scalar, t: &RankOne, terms: usize) -> Result<DenseMatrix> {
    let n = t.space().dim();
    if n > ORACLE_CAP {
        return Err(NelabError::CapExceeded { dim: n, cap: ORACLE_CAP });
    }
    if terms == 0 {
        return Err(NelabError::InvalidArgument("oracle needs at least one term".into()));
    }
    let m = t.to_matrix().scale(lambda);
    let mut sum = DenseMatrix::identity(n).scale(g.a0());
    let mut power = DenseMatrix::identity(n);
    for k in 1..=terms {
        power = power.mul(&m)?;
        let a = g.coeff(k);
        if a != Scalar::default() {
            sum = sum.add(&power.scale(a))?;
        }
    }
    Ok(sum)
}
