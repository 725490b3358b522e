//! Test-side reference computations, written without the library's norm engine.

#![allow(dead_code)]

use nelab_core::spaces::Exponent;
use nelab_core::{DenseMatrix, Scalar, SpaceDesc};

/// Norm of real coordinates from the leaf layout alone.
pub fn norm(space: &SpaceDesc, v: &[f64]) -> f64 {
    let leaf_norm = |p: Exponent, c: &[f64]| match p {
        Exponent::One => c.iter().map(|x| x.abs()).sum::<f64>(),
        Exponent::Two => c.iter().map(|x| x * x).sum::<f64>().sqrt(),
        Exponent::Inf => c.iter().fold(0.0f64, |m, x| m.max(x.abs())),
    };
    let parts: Vec<f64> = space.leaves().iter().map(|l| leaf_norm(l.p, &v[l.range()])).collect();
    if parts.len() == 1 {
        parts[0]
    } else {
        parts.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

fn leaf_vertices(p: Exponent, n: usize) -> Vec<Vec<f64>> {
    match p {
        Exponent::Inf if n > 1 => {
            (0..1usize << n).map(|m| (0..n).map(|k| if m >> k & 1 == 1 { -1.0 } else { 1.0 }).collect()).collect()
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
    }
}

fn apply(a: &DenseMatrix, v: &[f64]) -> Vec<f64> {
    (0..a.rows()).map(|i| a.row(i).iter().zip(v).map(|(z, x)| z.re * x).sum()).collect()
}

/// Largest singular value of a real matrix by cyclic Jacobi on `AᵀA`.
#[allow(clippy::needless_range_loop)]
pub fn spectral_norm(a: &DenseMatrix) -> f64 {
    let n = a.cols();
    let mut g = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            g[i][j] = (0..a.rows()).map(|k| a[(k, i)].re * a[(k, j)].re).sum();
        }
    }
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |j| *j != i).map(move |j| (i, j)))
            .map(|(i, j)| g[i][j] * g[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if g[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = 0.5 * (2.0 * g[p][q]).atan2(g[q][q] - g[p][p]);
                let (c, s) = (theta.cos(), theta.sin());
                for k in 0..n {
                    let (gkp, gkq) = (g[k][p], g[k][q]);
                    g[k][p] = c * gkp - s * gkq;
                    g[k][q] = s * gkp + c * gkq;
                }
                for k in 0..n {
                    let (gpk, gqk) = (g[p][k], g[q][k]);
                    g[p][k] = c * gpk - s * gqk;
                    g[q][k] = s * gpk + c * gqk;
                }
            }
        }
    }
    (0..n).map(|i| g[i][i]).fold(0.0f64, f64::max).sqrt()
}

/// Reference operator norm of a real matrix with a bracket `[lo, hi]`.
///
/// Polytope balls enumerate vertices; Euclidean spaces use Jacobi; an
/// ℓ2-sum of two polytope leaves scans a fine θ grid and adds its
/// Lipschitz allowance.
pub fn reference_norm(space: &SpaceDesc, a: &DenseMatrix) -> (f64, f64) {
    let leaves = space.leaves();
    if space.is_euclidean() {
        let v = spectral_norm(a);
        return (v * (1.0 - 1e-12), v * (1.0 + 1e-12));
    }
    if let [l] = leaves {
        let v = leaf_vertices(l.p, l.blocks).iter().map(|x| norm(space, &apply(a, x))).fold(0.0, f64::max);
        return (v, v);
    }
    let [l, r] = leaves else { panic!("reference covers at most two leaves") };
    let steps = 2_048;
    let h = std::f64::consts::FRAC_PI_2 / steps as f64;
    let mut best = 0.0f64;
    for u in leaf_vertices(l.p, l.blocks) {
        for w in leaf_vertices(r.p, r.blocks) {
            for k in 0..=steps {
                let (c, s) = ((k as f64 * h).cos(), (k as f64 * h).sin());
                let y: Vec<f64> = u.iter().map(|x| c * x).chain(w.iter().map(|x| s * x)).collect();
                best = best.max(norm(space, &apply(a, &y)));
            }
        }
    }
    // |φ'| ≤ M on each arc and every θ is within h/2 of the grid, so M ≤ best + M·h/2
    (best, best / (1.0 - h) + 1e-12)
}

pub fn real_vec(v: &[Scalar]) -> Vec<f64> {
    v.iter().map(|z| z.re).collect()
}
