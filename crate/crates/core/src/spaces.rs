//! Concrete finite-dimensional normed spaces.
//!
//! A space is a tree whose leaves are `ℓ1(n)`, `ℓ2(n)` or `ℓ∞(n)` blocks and
//! whose inner nodes are ℓ2-sums. Because every inner node combines its
//! children with the Euclidean norm, the norm of a vector is the Euclidean
//! norm of its leaf norms, whatever the nesting. Vectors and functionals are
//! plain coordinate lists; a functional acts by the bilinear sum `Σ fⱼ vⱼ`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, NelabError, Result};
use crate::sampling::{rng_for, stream};

pub type Scalar = Complex64;

/// Default dimension cap for facet enumeration.
pub const FACET_CAP: usize = 6;

const VERTEX_CAP: usize = 20;

#[inline]
pub fn real(x: f64) -> Scalar {
    Scalar::new(x, 0.0)
}

/// The scalar field of a space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    pub fn check_scalar(self, z: Scalar) -> Result<()> {
        if self == Field::Real && z.im != 0.0 {
            return Err(NelabError::FieldMismatch(format!("complex scalar {z} used on a real space")));
        }
        Ok(())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Real => "real",
            Field::Complex => "complex",
        })
    }
}

impl FromStr for Field {
    type Err = NelabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(Field::Real),
            "complex" => Ok(Field::Complex),
            other => Err(NelabError::Parse(format!("unknown field `{other}` (expected `real` or `complex`)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exponent {
    One,
    Two,
    Inf,
}

impl Exponent {
    /// Conjugate exponent q with 1/p + 1/q = 1.
    pub fn dual(self) -> Self {
        match self {
            Exponent::One => Exponent::Inf,
            Exponent::Two => Exponent::Two,
            Exponent::Inf => Exponent::One,
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Exponent::One => "l1",
            Exponent::Two => "l2",
            Exponent::Inf => "linf",
        }
    }

    fn combine(self, moduli: impl Iterator<Item = f64>) -> f64 {
        match self {
            Exponent::One => moduli.sum(),
            Exponent::Two => moduli.map(|m| m * m).sum::<f64>().sqrt(),
            Exponent::Inf => moduli.fold(0.0, f64::max),
        }
    }
}

/// Node of the space descriptor tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Lp {
        dim: usize,
        p: Exponent,
    },
    /// A complex `ℓp(dim)` seen as a real space: `2·dim` real coordinates
    /// grouped in pairs, each pair contributing its Euclidean modulus.
    Realified {
        dim: usize,
        p: Exponent,
    },
    Sum2(Box<Node>, Box<Node>),
}

impl Node {
    fn dim(&self) -> usize {
        match self {
            Node::Lp { dim, .. } => *dim,
            Node::Realified { dim, .. } => 2 * dim,
            Node::Sum2(l, r) => l.dim() + r.dim(),
        }
    }

    fn dual(&self) -> Node {
        match self {
            Node::Lp { dim, p } => Node::Lp { dim: *dim, p: p.dual() },
            Node::Realified { dim, p } => Node::Realified { dim: *dim, p: p.dual() },
            Node::Sum2(l, r) => Node::Sum2(Box::new(l.dual()), Box::new(r.dual())),
        }
    }

    fn realified(&self) -> Node {
        match self {
            Node::Lp { dim: 1, .. } => Node::Lp { dim: 2, p: Exponent::Two },
            Node::Lp { dim, p: Exponent::Two } => Node::Lp { dim: 2 * dim, p: Exponent::Two },
            Node::Lp { dim, p } => Node::Realified { dim: *dim, p: *p },
            Node::Realified { .. } => self.clone(),
            Node::Sum2(l, r) => Node::Sum2(Box::new(l.realified()), Box::new(r.realified())),
        }
    }

    fn has_realified(&self) -> bool {
        match self {
            Node::Lp { .. } => false,
            Node::Realified { .. } => true,
            Node::Sum2(l, r) => l.has_realified() || r.has_realified(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Node::Lp { dim, .. } | Node::Realified { dim, .. } if *dim == 0 => {
                Err(NelabError::InvalidArgument("leaf dimension must be positive".into()))
            }
            Node::Sum2(l, r) => {
                l.validate()?;
                r.validate()
            }
            _ => Ok(()),
        }
    }

    fn collect_leaves(&self, offset: &mut usize, out: &mut Vec<Leaf>) {
        match self {
            Node::Lp { dim, p } => {
                out.push(Leaf { offset: *offset, blocks: *dim, block_len: 1, p: *p });
                *offset += dim;
            }
            Node::Realified { dim, p } => {
                out.push(Leaf { offset: *offset, blocks: *dim, block_len: 2, p: *p });
                *offset += 2 * dim;
            }
            Node::Sum2(l, r) => {
                l.collect_leaves(offset, out);
                r.collect_leaves(offset, out);
            }
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Lp { dim, p } => write!(f, "{}({dim})", p.tag()),
            Node::Realified { dim, p } => write!(f, "re({}({dim}))", p.tag()),
            Node::Sum2(l, r) => write!(f, "sum2({l},{r})"),
        }
    }
}

/// A leaf block of coordinates `offset .. offset + blocks·block_len`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Leaf {
    pub offset: usize,
    pub blocks: usize,
    pub block_len: usize,
    pub p: Exponent,
}

impl Leaf {
    pub fn len(&self) -> usize {
        self.blocks * self.block_len
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.len()
    }

    /// Behaves like a Euclidean block: ℓ2, or a single block.
    pub fn is_euclidean(&self) -> bool {
        self.p == Exponent::Two || self.blocks == 1
    }

    /// Unit ball is a polytope over the reals.
    pub fn is_polytope(&self) -> bool {
        self.block_len == 1 && (self.p != Exponent::Two || self.blocks == 1)
    }

    fn block_modulus(&self, c: &[Scalar], k: usize) -> f64 {
        let start = self.offset + k * self.block_len;
        if self.block_len == 1 {
            c[start].norm()
        } else {
            c[start..start + self.block_len].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
        }
    }

    pub fn norm(&self, c: &[Scalar]) -> f64 {
        self.p.combine((0..self.blocks).map(|k| self.block_modulus(c, k)))
    }

    /// Norm-one functional on this leaf attaining `leaf_norm(v)`; zero outside.
    fn support(&self, v: &[Scalar], out: &mut [Scalar]) {
        let nu = self.norm(v);
        if nu == 0.0 {
            return;
        }
        let unit_block = |k: usize, scale: f64, out: &mut [Scalar]| {
            let m = self.block_modulus(v, k);
            if m == 0.0 {
                return;
            }
            let start = self.offset + k * self.block_len;
            for j in start..start + self.block_len {
                out[j] = v[j].conj() * (scale / m);
            }
        };
        match self.p {
            Exponent::Inf => {
                // all dual mass on the lowest index attaining the maximum
                let k = (0..self.blocks).find(|&k| self.block_modulus(v, k) == nu).unwrap_or(0);
                unit_block(k, 1.0, out);
            }
            Exponent::One => {
                for k in 0..self.blocks {
                    unit_block(k, 1.0, out);
                }
            }
            Exponent::Two => {
                for j in self.range() {
                    out[j] = v[j].conj() / nu;
                }
            }
        }
    }
}

/// Coordinates of a vector in a space.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector(Vec<Scalar>);

/// Dual coordinates of a linear functional.
#[derive(Clone, Debug, PartialEq)]
pub struct Functional(Vec<Scalar>);

macro_rules! coord_type {
    ($t:ident) => {
        impl $t {
            pub fn new(coords: Vec<Scalar>) -> Self {
                Self(coords)
            }

            pub fn from_real(coords: &[f64]) -> Self {
                Self(coords.iter().map(|&x| real(x)).collect())
            }

            pub fn zeros(n: usize) -> Self {
                Self(vec![Scalar::new(0.0, 0.0); n])
            }

            pub fn basis(n: usize, i: usize) -> Self {
                let mut c = vec![Scalar::new(0.0, 0.0); n];
                c[i] = real(1.0);
                Self(c)
            }

            pub fn coords(&self) -> &[Scalar] {
                &self.0
            }

            pub fn into_coords(self) -> Vec<Scalar> {
                self.0
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn scale(&self, s: Scalar) -> Self {
                Self(self.0.iter().map(|z| z * s).collect())
            }

            pub fn is_real(&self) -> bool {
                self.0.iter().all(|z| z.im == 0.0)
            }

            pub fn real_parts(&self) -> Vec<f64> {
                self.0.iter().map(|z| z.re).collect()
            }
        }
    };
}

coord_type!(Vector);
coord_type!(Functional);

impl Vector {
    pub fn add(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// `self + s·other`
    pub fn axpy(&self, s: Scalar, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + s * b).collect())
    }

    /// Reinterpret as a functional on the dual space (finite-dimensional bidual).
    pub fn as_functional(&self) -> Functional {
        Functional(self.0.clone())
    }
}

impl Functional {
    pub fn add(&self, other: &Functional) -> Functional {
        Functional(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Reinterpret as a vector of the dual space.
    pub fn as_vector(&self) -> Vector {
        Vector(self.0.clone())
    }
}

/// Evaluate `f(v) = Σ fⱼ vⱼ`.
pub fn pair(f: &Functional, v: &Vector) -> Result<Scalar> {
    check_dim(f.len(), v.len())?;
    Ok(f.0.iter().zip(&v.0).map(|(a, b)| a * b).sum())
}

/// Extreme points of a real unit ball.
#[derive(Clone, Debug, PartialEq)]
pub enum ExtremePoints {
    Vertices(Vec<Vector>),
    /// Extreme points of an ℓ2-sum of two polytope balls:
    /// `(cos θ·u, sin θ·w)` with `u`, `w` block vertices and `θ ∈ [0, π/2]`.
    ArcFamily {
        left: Vec<Vec<f64>>,
        right: Vec<Vec<f64>>,
    },
}

impl ExtremePoints {
    /// Member of an arc family; for a vertex list `theta` is ignored.
    pub fn arc_point(&self, i: usize, j: usize, theta: f64) -> Option<Vector> {
        match self {
            ExtremePoints::Vertices(v) => v.get(i).cloned(),
            ExtremePoints::ArcFamily { left, right } => {
                let (c, s) = (theta.cos(), theta.sin());
                let u = left.get(i)?;
                let w = right.get(j)?;
                Some(Vector::from_real(&u.iter().map(|x| c * x).chain(w.iter().map(|x| s * x)).collect::<Vec<_>>()))
            }
        }
    }
}

/// Algebraic descriptor of a concrete normed space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceDesc {
    root: Node,
    field: Field,
    leaves: Vec<Leaf>,
    dim: usize,
}

impl SpaceDesc {
    pub fn new(root: Node, field: Field) -> Result<Self> {
        root.validate()?;
        if field == Field::Complex && root.has_realified() {
            return Err(NelabError::FieldMismatch("realified leaves only exist over the reals".into()));
        }
        let mut leaves = Vec::new();
        let mut offset = 0;
        root.collect_leaves(&mut offset, &mut leaves);
        Ok(Self { dim: root.dim(), root, field, leaves })
    }

    pub fn lp(dim: usize, p: Exponent, field: Field) -> Result<Self> {
        Self::new(Node::Lp { dim, p }, field)
    }

    pub fn l1(dim: usize, field: Field) -> Result<Self> {
        Self::lp(dim, Exponent::One, field)
    }

    pub fn l2(dim: usize, field: Field) -> Result<Self> {
        Self::lp(dim, Exponent::Two, field)
    }

    pub fn linf(dim: usize, field: Field) -> Result<Self> {
        Self::lp(dim, Exponent::Inf, field)
    }

    pub fn sum2(left: &SpaceDesc, right: &SpaceDesc) -> Result<Self> {
        if left.field != right.field {
            return Err(NelabError::FieldMismatch("ℓ2-sum of spaces over different fields".into()));
        }
        Self::new(Node::Sum2(Box::new(left.root.clone()), Box::new(right.root.clone())), left.field)
    }

    /// Parse the textual form, e.g. `sum2(linf(4),linf(4))`.
    pub fn parse(dsl: &str, field: Field) -> Result<Self> {
        let mut p = DslParser { s: dsl.as_bytes(), pos: 0 };
        let node = p.node()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.error("trailing input"));
        }
        Self::new(node, field)
    }

    pub fn dsl(&self) -> String {
        self.root.to_string()
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn leaves(&self) -> &[Leaf] {
        &self.leaves
    }

    pub fn is_real(&self) -> bool {
        self.field == Field::Real
    }

    /// Descriptor of the dual space: each leaf exponent replaced by its conjugate.
    pub fn dual(&self) -> SpaceDesc {
        SpaceDesc {
            root: self.root.dual(),
            field: self.field,
            leaves: self.leaves.iter().map(|l| Leaf { p: l.p.dual(), ..*l }).collect(),
            dim: self.dim,
        }
    }

    /// Whole space is isometric to a Euclidean space.
    pub fn is_euclidean(&self) -> bool {
        self.leaves.iter().all(Leaf::is_euclidean)
    }

    /// The single leaf of a real space whose unit ball is a polytope.
    pub fn polytope_leaf(&self) -> Option<Leaf> {
        match self.leaves.as_slice() {
            [leaf] if self.is_real() && leaf.is_polytope() => Some(*leaf),
            _ => None,
        }
    }

    pub fn check_scalar(&self, z: Scalar) -> Result<()> {
        self.field.check_scalar(z)
    }

    pub(crate) fn norm_coords(&self, c: &[Scalar]) -> f64 {
        match self.leaves.as_slice() {
            [leaf] => leaf.norm(c),
            leaves => leaves.iter().map(|l| l.norm(c).powi(2)).sum::<f64>().sqrt(),
        }
    }

    pub fn norm(&self, v: &Vector) -> Result<f64> {
        check_dim(self.dim, v.len())?;
        Ok(self.norm_coords(v.coords()))
    }

    pub fn dual_norm(&self, f: &Functional) -> Result<f64> {
        check_dim(self.dim, f.len())?;
        Ok(self.dual().norm_coords(f.coords()))
    }

    /// Norm-one functional `f` with `f(v) = ‖v‖`; ties on ℓ∞ peaks go to the
    /// lowest index.
    pub fn support_functional(&self, v: &Vector) -> Result<Functional> {
        check_dim(self.dim, v.len())?;
        let c = v.coords();
        let total = self.norm_coords(c);
        if total == 0.0 {
            return Err(NelabError::ZeroVector);
        }
        let mut out = vec![Scalar::new(0.0, 0.0); self.dim];
        for leaf in &self.leaves {
            leaf.support(c, &mut out);
        }
        if self.leaves.len() > 1 {
            for leaf in &self.leaves {
                let w = leaf.norm(c) / total;
                for j in leaf.range() {
                    out[j] *= w;
                }
            }
        }
        Ok(Functional(out))
    }

    /// Unit vector `x` and unit functional `x*` with `x*(x) = alpha`.
    ///
    /// Two coordinates of one leaf are used when a leaf has them; otherwise
    /// the pair is split across two leaves and the ℓ2 coupling is solved in
    /// closed form. A one-dimensional space only admits `|alpha| = 1`.
    pub fn witness_pair(&self, alpha: Scalar) -> Result<(Functional, Vector)> {
        self.check_scalar(alpha)?;
        let m = alpha.norm();
        if m > 1.0 + 1e-12 {
            return Err(NelabError::InvalidArgument(format!("|alpha| = {m} exceeds 1")));
        }
        let m = m.min(1.0);
        let zero = Scalar::new(0.0, 0.0);
        let mut x = vec![zero; self.dim];
        let mut f = vec![zero; self.dim];
        if let Some(leaf) = self.leaves.iter().find(|l| l.len() >= 2) {
            let i = leaf.offset;
            x[i] = real(1.0);
            f[i] = alpha;
            if leaf.blocks >= 2 {
                let j = leaf.offset + leaf.block_len;
                f[j] = real(match leaf.p.dual() {
                    Exponent::One => 1.0 - m,
                    Exponent::Two => (1.0 - m * m).sqrt(),
                    Exponent::Inf => 1.0,
                });
            } else {
                f[i + 1] = real((1.0 - m * m).sqrt());
            }
        } else if self.leaves.len() >= 2 {
            x[self.leaves[0].offset] = real(1.0);
            f[self.leaves[0].offset] = alpha;
            f[self.leaves[1].offset] = real((1.0 - m * m).sqrt());
        } else {
            if (m - 1.0).abs() > 1e-12 {
                return Err(NelabError::UnsupportedSpace(
                    "a one-dimensional space only has witness pairs with |alpha| = 1".into(),
                ));
            }
            x[0] = real(1.0);
            f[0] = alpha;
        }
        Ok((Functional(f), Vector(x)))
    }

    /// Facet functionals of a polytope leaf, indexed in full coordinates of the leaf.
    pub(crate) fn leaf_facets(leaf: &Leaf) -> Result<Vec<Vec<f64>>> {
        Self::leaf_vertices(&Leaf { p: leaf.p.dual(), ..*leaf })
    }

    fn leaf_vertices(leaf: &Leaf) -> Result<Vec<Vec<f64>>> {
        if !leaf.is_polytope() {
            return Err(NelabError::UnsupportedSpace("unit ball has a continuum of extreme points".into()));
        }
        let n = leaf.blocks;
        if n == 1 {
            return Ok(vec![vec![1.0], vec![-1.0]]);
        }
        Ok(match leaf.p {
            Exponent::Inf => {
                if n > VERTEX_CAP {
                    return Err(NelabError::CapExceeded { dim: n, cap: VERTEX_CAP });
                }
                (0..1usize << n)
                    .map(|mask| (0..n).map(|k| if mask >> k & 1 == 1 { -1.0 } else { 1.0 }).collect())
                    .collect()
            }
            _ => (0..n)
                .flat_map(|k| {
                    [1.0, -1.0].map(|s| {
                        let mut v = vec![0.0; n];
                        v[k] = s;
                        v
                    })
                })
                .collect(),
        })
    }

    /// Extreme points of the real unit ball: an exact vertex list for a
    /// polytope ball, the arc family for an ℓ2-sum of two polytope blocks.
    pub fn extreme_points(&self) -> Result<ExtremePoints> {
        if !self.is_real() {
            return Err(NelabError::FieldMismatch("extreme-point enumeration needs a real space".into()));
        }
        match self.leaves.as_slice() {
            [leaf] => {
                Ok(ExtremePoints::Vertices(Self::leaf_vertices(leaf)?.iter().map(|v| Vector::from_real(v)).collect()))
            }
            [l, r] => Ok(ExtremePoints::ArcFamily { left: Self::leaf_vertices(l)?, right: Self::leaf_vertices(r)? }),
            _ => Err(NelabError::UnsupportedSpace("extreme points of ℓ2-sums with more than two leaves".into())),
        }
    }

    pub fn facets(&self) -> Result<Vec<Functional>> {
        self.facets_with_cap(FACET_CAP)
    }

    /// Facet functionals `φ` with `‖y‖ = max φ(y)` for a real polytope ball.
    pub fn facets_with_cap(&self, cap: usize) -> Result<Vec<Functional>> {
        let leaf = self.polytope_leaf().ok_or_else(|| {
            NelabError::UnsupportedSpace(format!("{} ({}) is not a polytope ball", self.dsl(), self.field))
        })?;
        if self.dim > cap {
            return Err(NelabError::CapExceeded { dim: self.dim, cap });
        }
        let dual_leaf = Leaf { p: leaf.p.dual(), ..leaf };
        Ok(Self::leaf_vertices(&dual_leaf)?.iter().map(|v| Functional::from_real(v)).collect())
    }

    pub(crate) fn sample_sphere_stream(&self, seed: u64, stream_id: u64) -> Vector {
        self.sample_sphere_at(seed, stream_id, 0)
    }

    pub(crate) fn sample_sphere_at(&self, seed: u64, stream_id: u64, index: u64) -> Vector {
        let mut rng = rng_for(seed, stream_id, index);
        loop {
            let coords: Vec<Scalar> = (0..self.dim)
                .map(|_| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = match self.field {
                        Field::Real => 0.0,
                        Field::Complex => rng.sample(StandardNormal),
                    };
                    Scalar::new(re, im)
                })
                .collect();
            let nu = self.norm_coords(&coords);
            if nu > 1e-300 {
                return Vector(coords.into_iter().map(|z| z / nu).collect());
            }
        }
    }

    /// Deterministic pseudo-random point of the unit sphere.
    pub fn sample_sphere(&self, seed: u64) -> Vector {
        self.sample_sphere_stream(seed, stream::SPHERE)
    }

    /// The underlying real space of a complex space.
    pub fn realify(&self) -> Result<SpaceDesc> {
        if self.is_real() {
            return Err(NelabError::FieldMismatch("space is already real".into()));
        }
        SpaceDesc::new(self.root.realified(), Field::Real)
    }

    /// Coordinates `z ↦ (Re z, Im z)`, interleaved.
    pub fn realify_vector(&self, v: &Vector) -> Result<Vector> {
        if self.is_real() {
            return Err(NelabError::FieldMismatch("space is already real".into()));
        }
        check_dim(self.dim, v.len())?;
        Ok(Vector(v.0.iter().flat_map(|z| [real(z.re), real(z.im)]).collect()))
    }

    /// The real functional `Re x*` on the realified space.
    pub fn realify_functional(&self, f: &Functional) -> Result<Functional> {
        if self.is_real() {
            return Err(NelabError::FieldMismatch("space is already real".into()));
        }
        check_dim(self.dim, f.len())?;
        Ok(Functional(f.0.iter().flat_map(|z| [real(z.re), real(-z.im)]).collect()))
    }
}

impl fmt::Display for SpaceDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)
    }
}

struct DslParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl DslParser<'_> {
    fn error(&self, msg: &str) -> NelabError {
        NelabError::Parse(format!("{msg} at offset {} in `{}`", self.pos, String::from_utf8_lossy(self.s)))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn ident(&mut self) -> &str {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("")
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("");
        match text.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(self.error("expected a positive dimension")),
        }
    }

    fn exponent(&self, id: &str) -> Result<Exponent> {
        match id {
            "l1" => Ok(Exponent::One),
            "l2" => Ok(Exponent::Two),
            "linf" => Ok(Exponent::Inf),
            _ => Err(self.error(&format!("unsupported exponent in `{id}` (only l1, l2, linf are available)"))),
        }
    }

    fn node(&mut self) -> Result<Node> {
        let id = self.ident().to_string();
        match id.as_str() {
            "sum2" => {
                self.expect(b'(')?;
                let l = self.node()?;
                self.expect(b',')?;
                let r = self.node()?;
                self.expect(b')')?;
                Ok(Node::Sum2(Box::new(l), Box::new(r)))
            }
            "re" => {
                self.expect(b'(')?;
                let inner = self.ident().to_string();
                let p = self.exponent(&inner)?;
                self.expect(b'(')?;
                let dim = self.number()?;
                self.expect(b')')?;
                self.expect(b')')?;
                Ok(Node::Realified { dim, p })
            }
            "" => Err(self.error("expected a space")),
            other if other.starts_with('l') => {
                let p = self.exponent(other)?;
                self.expect(b'(')?;
                let dim = self.number()?;
                self.expect(b')')?;
                Ok(Node::Lp { dim, p })
            }
            other => Err(self.error(&format!("unknown space constructor `{other}`"))),
        }
    }
}

/// The spaces every fixture and invariant is exercised on.
pub fn registry(field: Field) -> Vec<SpaceDesc> {
    let dsl: &[&str] = match field {
        Field::Real => &[
            "linf(2)",
            "linf(3)",
            "l1(2)",
            "l1(3)",
            "l2(2)",
            "l2(3)",
            "sum2(linf(2),linf(2))",
            "sum2(l1(2),linf(2))",
            "sum2(l2(1),l1(2))",
        ],
        Field::Complex => {
            &["linf(2)", "linf(3)", "l1(2)", "l1(3)", "l2(2)", "l2(4)", "sum2(linf(2),linf(2))", "sum2(l2(2),l2(1))"]
        }
    };
    dsl.iter().map(|s| SpaceDesc::parse(s, field).expect("registry entries parse")).collect()
}

/// Both fields' registries.
pub fn full_registry() -> Vec<SpaceDesc> {
    let mut all = registry(Field::Real);
    all.extend(registry(Field::Complex));
    all
}
