//! Dense verification path: full tridiagonal eigendecomposition, direct
//! site amplitudes and characteristic-polynomial residuals.
//!
//! Nothing here shares code with [`crate::spectral`]; the two routes are
//! compared against each other in tests and by `bqst verify`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::chain::{ChainSpec, Profile};
use crate::error::{Error, Result};

/// Default size guard for [`diagonalize`].
pub const DENSE_LIMIT: usize = 5000;

/// Eigenvalues (decreasing) and orthonormal eigenvectors of a chain's
/// coupling matrix `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    n: usize,
    /// `λ_1 ≥ λ_2 ≥ … ≥ λ_N`.
    pub eigenvalues: Vec<f64>,
    /// Row-major `N×N`; row `n` is the `n`-th eigenvector, normalized so its
    /// first component is positive.
    vectors: Vec<f64>,
}

impl EigenSystem {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `U_{n i}` with zero-based `n` (eigenvalue index) and `i` (site).
    pub fn component(&self, n: usize, i: usize) -> f64 {
        self.vectors[n * self.n + i]
    }

    pub fn eigenvector(&self, n: usize) -> &[f64] {
        &self.vectors[n * self.n..(n + 1) * self.n]
    }

    /// `ω_n = λ_n / 2`.
    pub fn frequency(&self, n: usize) -> f64 {
        0.5 * self.eigenvalues[n]
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|l| 0.5 * l).collect()
    }

    /// `U_{n1}²`, the weight of each eigenmode in the site-1 state.
    pub fn first_site_weights(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.component(k, 0).powi(2)).collect()
    }
}

/// Full eigendecomposition of the tridiagonal coupling matrix of `spec`,
/// with the default size guard.
pub fn diagonalize(spec: &ChainSpec) -> Result<EigenSystem> {
    diagonalize_with_limit(spec, DENSE_LIMIT)
}

pub fn diagonalize_with_limit(spec: &ChainSpec, limit: usize) -> Result<EigenSystem> {
    let n = spec.n();
    if n > limit {
        return Err(Error::TooLarge { n, limit });
    }
    let off = spec.couplings().into_vec();
    let (values, vectors) =
        tridiagonal_eigen(&off).map_err(|index| Error::EigenNoConvergence { n, index })?;
    Ok(EigenSystem {
        n,
        eigenvalues: values,
        vectors,
    })
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix with zero
/// diagonal and off-diagonal `off` (length `N−1`).
///
/// Returns eigenvalues in decreasing order and the matching eigenvectors as
/// rows, each with a positive first component. On failure returns the index
/// of the eigenvalue that did not converge.
fn tridiagonal_eigen(off: &[f64]) -> core::result::Result<(Vec<f64>, Vec<f64>), usize> {
    let n = off.len() + 1;
    let mut d = vec![0.0f64; n];
    // e[i] couples i and i+1; e[n−1] = 0 terminates the split search
    let mut e = vec![0.0f64; n];
    e[..n - 1].copy_from_slice(off);
    // z is stored transposed: row j holds the j-th eigenvector
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }

    let mut shift_acc = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > f64::EPSILON * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 60 {
                    return Err(l);
                }
                // Wilkinson-style shift from the leading 2×2 block
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                shift_acc += h;

                p = d[m];
                let (mut c, mut c2, mut c3) = (1.0, 1.0, 1.0);
                let el1 = e[l + 1];
                let (mut s, mut s2) = (0.0, 0.0);
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let (lo, hi) = z.split_at_mut((i + 1) * n);
                    let zi = &mut lo[i * n..(i + 1) * n];
                    let zi1 = &mut hi[..n];
                    for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let hb = *b;
                        *b = s * *a + c * hb;
                        *a = c * *a - s * hb;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= f64::EPSILON * tst1 {
                    break;
                }
            }
        }
        d[l] += shift_acc;
        e[l] = 0.0;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[b].total_cmp(&d[a]));
    let values = order.iter().map(|&k| d[k]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &k in &order {
        let row = &z[k * n..(k + 1) * n];
        let sign = if row[0] < 0.0 { -1.0 } else { 1.0 };
        vectors.extend(row.iter().map(|v| sign * v));
    }
    Ok((values, vectors))
}

/// `u_i(t) = Σ_n U_{ni} U_{n1} e^{−iω_n t}` for a one-based site `i`.
pub fn amplitude_direct(eig: &EigenSystem, i: usize, t: f64) -> Complex64 {
    assert!(i >= 1 && i <= eig.n, "site {i} outside 1..={}", eig.n);
    (0..eig.n)
        .map(|k| {
            let w = eig.component(k, i - 1) * eig.component(k, 0);
            Complex64::from_polar(w, -eig.frequency(k) * t)
        })
        .sum()
}

/// Relative residual of the characteristic polynomial `χ_N(λ) = det(λ − A)`
/// of a quasi-uniform chain.
///
/// `χ_N` is built from the uniform-chain polynomials `η_M` (the Chebyshev
/// recursion `η_M = λη_{M−1} − η_{M−2}`) through the boundary recursions
/// `ξ_M = (λ²−x²)η_{M−2} − λy²η_{M−3}` and
/// `χ_N = (λ²−x²)ξ_{N−2} − λy²ξ_{N−3}`. The returned value is `χ_N`
/// divided by `(|λ²−x²| + |λy²|)² · max(|η_{N−4}|, |η_{N−5}|, |η_{N−6}|)`,
/// the magnitude its expansion could reach without cancellation, so it is
/// scale free: near zero at eigenvalues and O(1) well away from them.
pub fn char_poly_residual(spec: &ChainSpec, lambda: f64) -> Result<f64> {
    let (x, y) = match spec.profile() {
        Profile::QuasiUniform { x, y } => (x, y),
        Profile::Uniform => (1.0, 1.0),
        Profile::PerfectTransfer => {
            return Err(Error::domain(
                "profile",
                "characteristic-polynomial recursion covers quasi-uniform chains",
            ))
        }
    };
    let n = spec.n();
    if n < 5 {
        return Err(Error::domain("n", "characteristic polynomial needs N >= 5"));
    }
    // η_{N−6}, η_{N−5}, η_{N−4} under a common (dropped) scale factor
    let [e6, e5, e4] = eta_tail(lambda, n - 4);
    let a = lambda * lambda - x * x;
    let b = lambda * y * y;
    let xi2 = a * e4 - b * e5;
    let xi3 = a * e5 - b * e6;
    let chi = a * xi2 - b * xi3;
    let eta_max = e4.abs().max(e5.abs()).max(e6.abs());
    let scale = (a.abs() + b.abs()).powi(2) * eta_max;
    Ok(if scale == 0.0 { 0.0 } else { chi / scale })
}

/// `[η_{M−2}, η_{M−1}, η_M]` up to a common positive factor, with
/// `η_{−1} = 0`, `η_0 = 1`. Rescaled every 64 steps to stay in range.
fn eta_tail(lambda: f64, m: usize) -> [f64; 3] {
    // window holds η_{j−2}, η_{j−1}, η_j
    let mut w = [-1.0, 0.0, 1.0]; // j = 0: η_{−2} = −1, η_{−1} = 0, η_0 = 1
    for j in 1..=m {
        let next = lambda * w[2] - w[1];
        w = [w[1], w[2], next];
        if j % 64 == 0 {
            let big = w.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            if big > 0.0 {
                for v in w.iter_mut() {
                    *v /= big;
                }
            }
        }
    }
    w
}
