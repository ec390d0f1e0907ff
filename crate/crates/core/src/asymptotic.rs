//! Infinite-chain limit of the optimal transfer amplitude.
//!
//! For large `N` with `x = 2 (6τ)^{1/3} N^{−1/3}` and `y` on the bimodal
//! threshold, the arrival amplitude tends to
//!
//! ```text
//! u∞(τ, σ) = (2√2/π) ∫_0^{π/2} cos²z / (cos⁴z + sin⁴z) · cos Φ(z) dz
//! Φ(z)     = τ tan³z − σ tan z + 2 atan(tan 2z / √2)
//! ```
//!
//! In `ξ = tan z` the weight is `1/(1 + ξ⁴)`. The integral is cut at a finite
//! `Ξ` chosen from an integration-by-parts bound on the tail, split into
//! panels of bounded phase increment, and each panel is integrated with an
//! adaptive Gauss–Kronrod rule.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

#[cfg(not(feature = "std"))]
use num_traits::Float;

use num_complex::Complex64;

use crate::quadrature::{adaptive, Estimate};
use crate::simplex::{minimize, SimplexOptions};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticParams {
    /// Rescaled arrival time.
    pub tau: f64,
    /// Rescaled delay.
    pub sigma: f64,
}

impl AsymptoticParams {
    pub fn new(tau: f64, sigma: f64) -> Self {
        AsymptoticParams { tau, sigma }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Target absolute error of the whole integral.
    pub tol: f64,
    /// Largest phase increment allowed across one panel.
    pub max_phase_step: f64,
}

impl QuadratureConfig {
    /// Used for final values and refinement.
    pub const TIGHT: QuadratureConfig = QuadratureConfig {
        tol: 1e-10,
        max_phase_step: FRAC_PI_2,
    };
    /// Used for grid scans.
    pub const COARSE: QuadratureConfig = QuadratureConfig {
        tol: 1e-6,
        max_phase_step: FRAC_PI_2,
    };
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self::TIGHT
    }
}

const PREFACTOR: f64 = 2.0 * SQRT_2 / PI;
const MAX_DEPTH: u32 = 24;
const MAX_PANEL: f64 = 0.05;
const MAX_CUTOFF: f64 = 1e7;

fn phase(p: AsymptoticParams, t: f64) -> f64 {
    // atan(tan 2z / √2) with tan 2z = 2t/(1−t²), kept on its own branch
    p.tau * t * t * t - p.sigma * t + 2.0 * (SQRT_2 * t / (1.0 - t * t)).atan()
}

/// `dΦ/dξ` at `ξ = t`.
fn phase_slope(p: AsymptoticParams, t: f64) -> f64 {
    let t2 = t * t;
    3.0 * p.tau * t2 - p.sigma + 2.0 * SQRT_2 * (1.0 + t2) / (1.0 + t2 * t2)
}

/// Integrand in `z`, prefactor excluded: `w(z) e^{iΦ(z)}`.
fn integrand(p: AsymptoticParams, z: f64) -> Complex64 {
    let t = z.tan();
    let t2 = t * t;
    let w = (1.0 + t2) / (1.0 + t2 * t2);
    Complex64::from_polar(w, phase(p, t))
}

/// Bound on `(2√2/π) |∫_Ξ^∞ e^{iΦ} / (1+ξ⁴) dξ|`.
fn tail_bound(p: AsymptoticParams, xi: f64) -> f64 {
    let x2 = xi * xi;
    let plain = 1.0 / (3.0 * x2 * xi);
    // the atan term's slope decays for ξ ≥ 1, so this bounds |Φ'| from below
    let bend = 2.0 * SQRT_2 * (1.0 + x2) / (1.0 + x2 * x2);
    let slope = if p.tau != 0.0 {
        3.0 * p.tau.abs() * x2 - p.sigma.abs() - bend
    } else {
        p.sigma.abs() - bend
    };
    let by_parts = if slope > 0.0 && xi >= 1.0 {
        2.0 / ((1.0 + x2 * x2) * slope)
    } else {
        f64::INFINITY
    };
    PREFACTOR * plain.min(by_parts)
}

/// Upper limit `Z = atan Ξ` of the truncated `z` integral.
fn cutoff(p: AsymptoticParams, tol: f64) -> f64 {
    let mut xi = 4.0;
    while tail_bound(p, xi) > 0.25 * tol && xi < MAX_CUTOFF {
        xi *= 1.25;
    }
    xi.atan()
}

/// Panel edges on `[a, b]` so that `Φ` moves by at most `step` across each.
fn panels(p: AsymptoticParams, a: f64, b: f64, step: f64) -> Vec<f64> {
    let dphi = |z: f64| {
        let t = z.tan();
        (phase_slope(p, t) * (1.0 + t * t)).abs()
    };
    let mut edges = alloc::vec![a];
    let mut z = a;
    while z < b {
        let mut h = MAX_PANEL.min(b - z);
        // shrink until the slope at both ends keeps the increment in bounds
        while h > 1e-12 && dphi(z).max(dphi(z + h)) * h > step {
            h *= 0.5;
        }
        z = if b - (z + h) < 1e-14 { b } else { z + h };
        edges.push(z);
    }
    edges
}

fn integrate(p: AsymptoticParams, cfg: QuadratureConfig, a: f64, b: f64) -> (Estimate, Estimate) {
    let edges = panels(p, a, b, cfg.max_phase_step);
    let count = (edges.len() - 1) as f64;
    let share = 0.25 * cfg.tol / PREFACTOR / count.max(1.0);
    let mut re = Estimate::default();
    let mut im = Estimate::default();
    for w in edges.windows(2) {
        re = re + adaptive(&|z| integrand(p, z).re, w[0], w[1], share, MAX_DEPTH);
        im = im + adaptive(&|z| integrand(p, z).im, w[0], w[1], share, MAX_DEPTH);
    }
    (re, im)
}

/// Prefactor times `∫ w e^{iΦ}` over consecutive intervals `[b_k, b_{k+1}]`.
fn over(p: AsymptoticParams, cfg: QuadratureConfig, breaks: &[f64]) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for w in breaks.windows(2) {
        let (re, im) = integrate(p, cfg, w[0], w[1]);
        sum += Complex64::new(re.value, im.value);
    }
    sum * PREFACTOR
}

/// `u∞(τ, σ)` with the tight quadrature.
pub fn u_infinity(p: AsymptoticParams) -> f64 {
    u_infinity_with(p, QuadratureConfig::TIGHT)
}

pub fn u_infinity_with(p: AsymptoticParams, cfg: QuadratureConfig) -> f64 {
    let z_max = cutoff(p, cfg.tol);
    over(p, cfg, &[0.0, FRAC_PI_4, z_max]).re
}

/// The same integral over the whole real `ξ` line, halved. `Φ` is odd in
/// `ξ`, so the imaginary part vanishes and the real part equals
/// [`u_infinity`].
pub fn u_infinity_unfolded(p: AsymptoticParams, cfg: QuadratureConfig) -> Complex64 {
    let z_max = cutoff(p, cfg.tol);
    over(p, cfg, &[-z_max, -FRAC_PI_4, 0.0, FRAC_PI_4, z_max]) * 0.5
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticOptimum {
    pub params: AsymptoticParams,
    pub u_infinity: f64,
    pub evaluations: usize,
    pub converged: bool,
}

pub const TAU_RANGE: (f64, f64) = (0.01, 1.0);
pub const SIGMA_RANGE: (f64, f64) = (0.0, 10.0);
const SCAN_STEPS: usize = 50;

/// Maximizes `u∞` by a 50×50 scan of `τ ∈ [0.01, 1]`, `σ ∈ [0, 10]`
/// followed by simplex refinement.
pub fn maximize_u_infinity() -> AsymptoticOptimum {
    let axis = |(lo, hi): (f64, f64)| -> Vec<f64> {
        (0..SCAN_STEPS)
            .map(|i| lo + (hi - lo) * i as f64 / (SCAN_STEPS - 1) as f64)
            .collect()
    };
    let taus = axis(TAU_RANGE);
    let sigmas = axis(SIGMA_RANGE);
    let nodes: Vec<AsymptoticParams> = taus
        .iter()
        .flat_map(|&t| sigmas.iter().map(move |&s| AsymptoticParams::new(t, s)))
        .collect();
    let values = crate::par::map(&nodes, |&p| u_infinity_with(p, QuadratureConfig::COARSE));
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    let seed = nodes[best];
    let opts = SimplexOptions {
        initial_step: alloc::vec![taus[1] - taus[0], sigmas[1] - sigmas[0]],
        diameter_tol: 1e-7,
        max_evaluations: 2000,
        keep_trace: false,
    };
    let found = minimize(
        |v| -u_infinity(AsymptoticParams::new(v[0], v[1])),
        &[seed.tau, seed.sigma],
        &opts,
    );
    AsymptoticOptimum {
        params: AsymptoticParams::new(found.point[0], found.point[1]),
        u_infinity: -found.value,
        evaluations: nodes.len() + found.evaluations,
        converged: found.converged,
    }
}

/// Prefactors of the large-`N` laws `x ≈ a N^{−1/3}`, `y ≈ b N^{−1/6}` and
/// delay `s ≈ c N^{1/3}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingConstants {
    pub x_coefficient: f64,
    pub y_coefficient: f64,
    pub delay_coefficient: f64,
}

pub fn scaling_constants(p: AsymptoticParams) -> ScalingConstants {
    let a = 2.0 * (6.0 * p.tau).cbrt();
    ScalingConstants {
        x_coefficient: a,
        y_coefficient: 2f64.powf(0.25) * a.sqrt(),
        delay_coefficient: 2.0 * p.sigma / a,
    }
}
