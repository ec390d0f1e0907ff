//! End-to-end transition amplitude, arrival-peak search and fidelities.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::chain::ChainSpec;
use crate::error::{Error, Result};
use crate::spectral::ModeSolution;

/// Grid step of the arrival scan.
pub const SCAN_STEP: f64 = 0.2;
/// Time resolution of the golden-section refinement.
pub const REFINE_TOL: f64 = 1e-6;
/// Grid samples per block of the scan. Each block restarts the phase
/// recurrence from exact exponentials, and the block layout does not depend
/// on the thread count.
const SCAN_BLOCK: usize = 64;
/// Number of grid maxima that get refined.
const REFINE_CANDIDATES: usize = 3;

/// `e^{iπm}` for `m = m2/2`, exact for integer and half-integer `m`.
fn parity_phase(m2: i64) -> Complex64 {
    match m2.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Weighted mode phases `P_m e^{iπm}` of a solution.
fn weights(modes: &ModeSolution) -> Vec<(Complex64, f64)> {
    modes
        .modes
        .iter()
        .map(|m| (parity_phase(m.m2) * m.density, m.omega))
        .collect()
}

/// Complex end-to-end amplitude `Σ_m P_m e^{i(πm − t ω_m)}`.
pub fn evaluate_complex(modes: &ModeSolution, t: f64) -> Complex64 {
    modes
        .modes
        .iter()
        .map(|m| parity_phase(m.m2) * m.density * Complex64::from_polar(1.0, -t * m.omega))
        .sum()
}

/// `u(t) = |Σ_m P_m e^{i(πm − t ω_m)}|`.
pub fn evaluate(modes: &ModeSolution, t: f64) -> f64 {
    evaluate_complex(modes, t).norm()
}

/// `|u|` on `t_k = start + k·step` for `k < count`, using one complex
/// multiply per mode and sample.
fn scan_block(w: &[(Complex64, f64)], start: f64, step: f64, count: usize) -> Vec<f64> {
    let mut phase: Vec<Complex64> = w
        .iter()
        .map(|&(c, om)| c * Complex64::from_polar(1.0, -start * om))
        .collect();
    let rot: Vec<Complex64> = w
        .iter()
        .map(|&(_, om)| Complex64::from_polar(1.0, -step * om))
        .collect();
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let s: Complex64 = phase.iter().sum();
        out.push(s.norm());
        if k + 1 < count {
            for (p, r) in phase.iter_mut().zip(&rot) {
                *p *= r;
            }
        }
    }
    out
}

/// `|u(t)|` on a uniform time grid.
pub fn scan(modes: &ModeSolution, start: f64, step: f64, count: usize) -> Vec<f64> {
    let w = weights(modes);
    let blocks: Vec<usize> = (0..count.div_ceil(SCAN_BLOCK)).collect();
    let parts = crate::par::map(&blocks, |&b| {
        let first = b * SCAN_BLOCK;
        let len = SCAN_BLOCK.min(count - first);
        scan_block(&w, start + first as f64 * step, step, len)
    });
    parts.into_iter().flatten().collect()
}

/// Arrival-time search result.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeResult {
    pub spec: ChainSpec,
    pub t_grid: Vec<f64>,
    pub u_values: Vec<f64>,
    pub arrival_time: f64,
    pub peak_amplitude: f64,
    /// `s = t* − (N+1)`.
    pub delay: f64,
}

/// Default arrival window `[N, N + 10 N^{1/3} + 50]`.
pub fn default_window(n: usize) -> (f64, f64) {
    let nf = n as f64;
    (nf, nf + 10.0 * nf.cbrt() + 50.0)
}

/// Locates the arrival peak of `u(t)`: grid scan at [`SCAN_STEP`], then
/// golden-section refinement of the best grid maxima to [`REFINE_TOL`].
pub fn find_arrival(modes: &ModeSolution, window: Option<(f64, f64)>) -> Result<AmplitudeResult> {
    let n = modes.n();
    let (a, b) = window.unwrap_or_else(|| default_window(n));
    if !(a.is_finite() && b.is_finite()) || b <= a {
        return Err(Error::domain(
            "window",
            format!("time window must be a non-empty finite range, got [{a}, {b}]"),
        ));
    }
    let count = ((b - a) / SCAN_STEP).floor() as usize + 1;
    let t_grid: Vec<f64> = (0..count).map(|k| a + k as f64 * SCAN_STEP).collect();
    let u_values = scan(modes, a, SCAN_STEP, count);

    // interior local maxima plus the window ends, best first
    let mut candidates: Vec<usize> = (0..count)
        .filter(|&k| {
            let left = k == 0 || u_values[k - 1] <= u_values[k];
            let right = k + 1 == count || u_values[k + 1] <= u_values[k];
            left && right
        })
        .collect();
    candidates.sort_by(|&i, &j| u_values[j].total_cmp(&u_values[i]).then(i.cmp(&j)));
    candidates.truncate(REFINE_CANDIDATES);

    let mut best = (t_grid[0], u_values[0]);
    let mut first = true;
    for k in candidates {
        let lo = if k == 0 { a } else { t_grid[k - 1] };
        let hi = if k + 1 == count {
            b.min(t_grid[k] + SCAN_STEP)
        } else {
            t_grid[k + 1]
        };
        let (t, u) = golden_max(|t| evaluate(modes, t), lo, hi, REFINE_TOL);
        // keep the grid sample if refinement went astray on a flat top
        let (t, u) = if u >= u_values[k] {
            (t, u)
        } else {
            (t_grid[k], u_values[k])
        };
        if first || u > best.1 || (u == best.1 && t < best.0) {
            best = (t, u);
            first = false;
        }
    }

    Ok(AmplitudeResult {
        spec: modes.spec,
        t_grid,
        u_values,
        arrival_time: best.0,
        peak_amplitude: best.1,
        delay: best.0 - (n as f64 + 1.0),
    })
}

/// Golden-section search for a maximum of `f` on `[lo, hi]`.
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > tol {
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
        }
    }
    let t = 0.5 * (lo + hi);
    let ft = f(t);
    [(t, ft), (c, fc), (d, fd)]
        .into_iter()
        .fold((t, ft), |acc, p| if p.1 > acc.1 { p } else { acc })
}

/// Average and entanglement fidelity for an arrival amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityPair {
    pub average: f64,
    pub entanglement: f64,
}

/// `F = 1/3 + (1+u)²/6`, `F_E = (1+u)²/4`.
pub fn fidelities(u: f64) -> Result<FidelityPair> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::domain(
            "u",
            format!("amplitude must lie in [0, 1], got {u}"),
        ));
    }
    let sq = (1.0 + u) * (1.0 + u);
    Ok(FidelityPair {
        average: 1.0 / 3.0 + sq / 6.0,
        entanglement: sq / 4.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::solve_modes;

    fn modes(n: usize, x: f64, y: f64) -> ModeSolution {
        solve_modes(&ChainSpec::quasi_uniform(n, x, y).unwrap()).unwrap()
    }

    #[test]
    fn zero_at_time_zero() {
        for &n in &[5, 6, 51, 52] {
            assert!(evaluate(&modes(n, 0.4, 0.7), 0.0) < 1e-13);
        }
    }

    #[test]
    fn scan_matches_direct_evaluation() {
        let m = modes(101, 0.3584, 0.6742);
        let u = scan(&m, 90.0, 0.2, 200);
        for (k, v) in u.iter().enumerate() {
            let t = 90.0 + k as f64 * 0.2;
            assert!((v - evaluate(&m, t)).abs() < 1e-12);
        }
    }

    #[test]
    fn reversed_mode_order_gives_same_modulus() {
        let m = modes(40, 0.35, 0.66);
        let mut rev = m.clone();
        for md in rev.modes.iter_mut() {
            md.m2 = -md.m2;
            md.q = -md.q;
            md.omega = -md.omega;
        }
        rev.modes.reverse();
        for k in 0..50 {
            let t = k as f64 * 1.7;
            assert_eq!(evaluate(&m, t), evaluate(&rev, t));
        }
    }

    #[test]
    fn empty_window_is_rejected() {
        let m = modes(11, 0.5, 0.5);
        assert!(matches!(
            find_arrival(&m, Some((20.0, 20.0))),
            Err(Error::Domain {
                field: "window",
                ..
            })
        ));
        assert!(find_arrival(&m, Some((20.0, 10.0))).is_err());
    }

    #[test]
    fn fidelity_values() {
        let f = fidelities(1.0).unwrap();
        assert_eq!((f.average, f.entanglement), (1.0, 1.0));
        let f = fidelities(0.0).unwrap();
        assert!((f.average - 0.5).abs() < 1e-15);
        assert!((f.entanglement - 0.25).abs() < 1e-15);
        let f = fidelities(0.98765).unwrap();
        assert!((f.average - 0.99179).abs() < 5e-6);
        assert!(fidelities(1.0001).is_err());
        assert!(fidelities(-0.1).is_err());
        assert!(fidelities(f64::NAN).is_err());
    }

    #[test]
    fn fidelity_first_order_loss() {
        for i in 1..=100 {
            let eps = i as f64 * 1e-5;
            let f = fidelities(1.0 - eps).unwrap();
            assert!((f.average - (1.0 - 2.0 * eps / 3.0)).abs() <= eps * eps);
            assert!((f.entanglement - (1.0 - eps)).abs() <= eps * eps);
        }
    }

    #[test]
    fn fidelities_strictly_increasing() {
        let mut prev = fidelities(0.0).unwrap();
        for i in 1..=1000 {
            let f = fidelities(i as f64 / 1000.0).unwrap();
            assert!(f.average > prev.average && f.entanglement > prev.entanglement);
            prev = f;
        }
    }
}
