//! Rank-one operators `y ↦ x*(y)·x`.

use crate::error::{check_dim, NelabError, Result};
use crate::matrix::DenseMatrix;
use crate::sampling::stream;
use crate::spaces::{pair, Functional, Scalar, SpaceDesc, Vector};

/// The operator `x*⊗x` on a concrete space, with `α = x*(x)` cached.
#[derive(Clone, Debug, PartialEq)]
pub struct RankOne {
    space: SpaceDesc,
    functional: Functional,
    vector: Vector,
    alpha: Scalar,
}

impl RankOne {
    pub fn new(space: &SpaceDesc, functional: Functional, vector: Vector) -> Result<Self> {
        check_dim(space.dim(), functional.len())?;
        check_dim(space.dim(), vector.len())?;
        if space.is_real() && !(functional.is_real() && vector.is_real()) {
            return Err(NelabError::FieldMismatch("complex coordinates on a real space".into()));
        }
        let alpha = pair(&functional, &vector)?;
        Ok(Self { space: space.clone(), functional, vector, alpha })
    }

    /// `c·e_j*⊗e_i`, mapping `e_j` to `c·e_i`.
    pub fn basis(space: &SpaceDesc, j: usize, i: usize, c: Scalar) -> Result<Self> {
        let n = space.dim();
        if i >= n || j >= n {
            return Err(NelabError::InvalidArgument(format!("basis index out of range for dimension {n}")));
        }
        Self::new(space, Functional::basis(n, j).scale(c), Vector::basis(n, i))
    }

    pub fn space(&self) -> &SpaceDesc {
        &self.space
    }

    pub fn functional(&self) -> &Functional {
        &self.functional
    }

    pub fn vector(&self) -> &Vector {
        &self.vector
    }

    pub fn alpha(&self) -> Scalar {
        self.alpha
    }

    /// `‖x*‖·‖x‖`
    pub fn norm(&self) -> f64 {
        let d = self.space.dual().norm_coords(self.functional.coords());
        d * self.space.norm_coords(self.vector.coords())
    }

    pub fn apply(&self, y: &Vector) -> Result<Vector> {
        let s = pair(&self.functional, y)?;
        Ok(self.vector.scale(s))
    }

    /// `λ·T`, with λ absorbed into the functional.
    pub fn scale(&self, lambda: Scalar) -> RankOne {
        let functional = self.functional.scale(lambda);
        let alpha = pair(&functional, &self.vector).expect("dimensions already checked");
        RankOne { space: self.space.clone(), functional, vector: self.vector.clone(), alpha }
    }

    /// `(λT)^k = α^{k−1}λ^k·T`; returns the coefficient and `T` itself.
    pub fn power_as_rankone(&self, lambda: Scalar, k: u32) -> Result<(Scalar, RankOne)> {
        if k == 0 {
            return Err(NelabError::InvalidArgument("power 0 is the identity, which is not rank-one".into()));
        }
        let step = self.alpha * lambda;
        let mut c = lambda;
        for _ in 1..k {
            c *= step;
        }
        Ok((c, self.clone()))
    }

    /// `T* = x⊗x*` acting on the dual space.
    pub fn adjoint(&self) -> RankOne {
        RankOne {
            space: self.space.dual(),
            functional: self.vector.as_functional(),
            vector: self.functional.as_vector(),
            alpha: self.alpha,
        }
    }

    /// The real-linear operator `Re x*⊗x` on the realified space.
    pub fn realify_operator(&self) -> Result<RankOne> {
        let space = self.space.realify()?;
        let functional = self.space.realify_functional(&self.functional)?;
        let vector = self.space.realify_vector(&self.vector)?;
        RankOne::new(&space, functional, vector)
    }

    /// Matrix `x·fᵀ` in the standard basis.
    pub fn to_matrix(&self) -> DenseMatrix {
        let n = self.space.dim();
        let (x, f) = (self.vector.coords(), self.functional.coords());
        DenseMatrix::from_fn(n, n, |i, j| x[i] * f[j])
    }
}

/// Seeded rank-one operator with unit vector and functional of norm `target`.
pub fn random_rankone(space: &SpaceDesc, seed: u64, target: f64) -> Result<RankOne> {
    if !(target.is_finite() && target > 0.0) {
        return Err(NelabError::InvalidArgument(format!("norm target {target} must be positive")));
    }
    let x = space.sample_sphere_stream(seed, stream::RANKONE);
    let f = space.dual().sample_sphere_stream(seed, stream::DUAL_SPHERE).as_functional();
    RankOne::new(space, f.scale(Scalar::new(target, 0.0)), x)
}
