//! O(N) spectral solution of the quasi-uniform chain.
//!
//! Eigenfrequencies are `ω = sin q` with momenta `q ∈ (−π/2, π/2)` fixed by
//! the secular equation `(N+1) q + 2 φ(q) = π m`, where `φ` is the phase
//! shift induced by the boundary couplings and `m` runs over
//! `−(N−1)/2, …, (N−1)/2` (half-integers for even `N`). The mode density
//! `P_q` is the squared first-site component of each eigenvector.
//!
//! The phase shift is the negative argument of
//! `u_k = 1 + (2−x²−y²) e^{−2ik} + (1−y²) e^{−4ik}` at `k = π/2 − q`.
//! Viewed as a polynomial in `e^{−2ik}`, `u_k` has both roots outside the
//! unit circle whenever `x > 0`, so it never winds around the origin and its
//! principal argument is already the continuous branch, with `φ(0) = 0`.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::chain::ChainSpec;
use crate::error::{Error, Result};

/// Phase shift `φ(q)` and its derivative for fixed boundary couplings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseShift {
    x: f64,
    y: f64,
    x2: f64,
    y2: f64,
}

impl PhaseShift {
    pub fn new(x: f64, y: f64) -> Self {
        PhaseShift {
            x,
            y,
            x2: x * x,
            y2: y * y,
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    /// `u_k` as a complex number, in the momentum variable `k = π/2 − q`.
    pub fn u_k(&self, k: f64) -> Complex64 {
        let e2 = Complex64::from_polar(1.0, -2.0 * k);
        let a = 2.0 - self.x2 - self.y2;
        let b = 1.0 - self.y2;
        Complex64::new(1.0, 0.0) + e2 * a + e2 * e2 * b
    }

    /// `u_k` written directly in `q`: with `w = e^{2iq}`,
    /// `u = 1 − (2−x²−y²) w + (1−y²) w²`.
    fn u_of_q(&self, q: f64) -> Complex64 {
        let (s, c) = (2.0 * q).sin_cos();
        let (s2, c2) = (4.0 * q).sin_cos();
        let a = 2.0 - self.x2 - self.y2;
        let b = 1.0 - self.y2;
        Complex64::new(1.0 - a * c + b * c2, -a * s + b * s2)
    }

    /// `(Im, Re)` of `e^{−2iq}·u` up to sign: `y² sin 2q` and
    /// `x² − 2(2−y²) sin²q`, the latter factored so it stays accurate where
    /// it nearly cancels.
    fn parts(&self, q: f64) -> (f64, f64) {
        let s = q.sin();
        let num = self.y2 * (2.0 * q).sin();
        let den = (self.x - 2.0 * s) * (self.x + 2.0 * s) + 2.0 * self.y2 * s * s;
        (num, den)
    }

    /// `φ(q) = atan[y² sin 2q / (x² − (2−y²)(1−cos 2q))] − 2q`, with the
    /// arctangent continued past `±π/2` where its denominator changes sign.
    pub fn value(&self, q: f64) -> f64 {
        // For q > 0 the numerator is positive, so atan2 lands in (0, π),
        // which is exactly the continued branch; likewise for q < 0.
        let (num, den) = self.parts(q);
        num.atan2(den) - 2.0 * q
    }

    /// `φ(q) = −arg u_k`, the complex-argument route.
    pub fn value_via_arg(&self, q: f64) -> f64 {
        -self.u_of_q(q).arg()
    }

    /// `|u_k|² = x⁴ + 4[y⁴ − x²(2−y²)] sin²q + 16(1−y²) sin⁴q`, summed as
    /// the squares of the two parts of the phase.
    pub fn abs_u_squared(&self, q: f64) -> f64 {
        let (num, den) = self.parts(q);
        num * num + den * den
    }

    /// Closed-form `dφ/dq`.
    pub fn derivative(&self, q: f64) -> f64 {
        let s2 = q.sin().powi(2);
        let (x2, y2) = (self.x2, self.y2);
        let num = 2.0 * y2 * (x2 + 2.0 * (2.0 - x2 - y2) * s2);
        -2.0 + num / self.abs_u_squared(q)
    }

    /// Mode density `P_q` for a chain of `n` sites, evaluated at any `q`
    /// (it is the squared first eigenvector component only at allowed `q`).
    pub fn density(&self, q: f64, n: usize) -> f64 {
        // x²y²/[x⁴ + (4−x²−2y²)² tan²q − 16(1−y²) sin²q] = x²y² cos²q / |u|²
        let c = q.cos();
        let weight = self.x2 * self.y2 * c * c / self.abs_u_squared(q);
        2.0 * weight / (n as f64 + 1.0 + 2.0 * self.derivative(q))
    }

    /// The explicit `k`-form of the mode density,
    /// `2x²y² sin²k / ((N−3){[x²−2(2−y²)cos²k]² + 4y⁴cos²k sin²k}
    ///  + 4y²[x² + 2(2−x²−y²)cos²k])`, evaluated at `k = π/2 − q`.
    pub fn density_explicit(&self, q: f64, n: usize) -> f64 {
        let k = FRAC_PI_2 - q;
        let (sk, ck) = k.sin_cos();
        let (x2, y2) = (self.x2, self.y2);
        let c2 = ck * ck;
        let bracket = (x2 - 2.0 * (2.0 - y2) * c2).powi(2) + 4.0 * y2 * y2 * c2 * sk * sk;
        let den = (n as f64 - 3.0) * bracket + 4.0 * y2 * (x2 + 2.0 * (2.0 - x2 - y2) * c2);
        2.0 * x2 * y2 * sk * sk / den
    }

    /// Group velocity `v_q = (N+1) cos q / (N+1+2φ'(q))`.
    pub fn velocity(&self, q: f64, n: usize) -> f64 {
        let np1 = n as f64 + 1.0;
        np1 * q.cos() / (np1 + 2.0 * self.derivative(q))
    }
}

/// Branch-continuous phase shift `φ(q)` for boundary couplings `x`, `y`.
pub fn phase_shift(x: f64, y: f64, q: f64) -> f64 {
    PhaseShift::new(x, y).value(q)
}

/// `φ'(q)` in closed form.
pub fn phase_shift_derivative(x: f64, y: f64, q: f64) -> f64 {
    PhaseShift::new(x, y).derivative(q)
}

/// Mode density `P_q` for an `n`-site chain.
pub fn mode_density(x: f64, y: f64, q: f64, n: usize) -> f64 {
    PhaseShift::new(x, y).density(q, n)
}

/// Threshold `Y(x) = sqrt(√2 x − x²/2)` below which the mode density turns
/// bimodal.
pub fn bimodal_threshold(x: f64) -> f64 {
    (SQRT_2 * x - 0.5 * x * x).sqrt()
}

/// One normal mode of the chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    /// Twice the mode index `m`; odd exactly when `N` is even.
    pub m2: i64,
    pub q: f64,
    pub omega: f64,
    pub density: f64,
    pub velocity: f64,
}

impl Mode {
    pub fn m(&self) -> f64 {
        self.m2 as f64 / 2.0
    }
}

/// All `N` modes of a quasi-uniform chain, ordered by increasing `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSolution {
    pub spec: ChainSpec,
    pub modes: Vec<Mode>,
}

impl ModeSolution {
    pub fn n(&self) -> usize {
        self.spec.n()
    }

    pub fn density_sum(&self) -> f64 {
        self.modes.iter().map(|m| m.density).sum()
    }
}

/// Solves the secular equation for every mode of a quasi-uniform (or
/// uniform) chain.
pub fn solve_modes(spec: &ChainSpec) -> Result<ModeSolution> {
    let (x, y) = spec.boundary().ok_or_else(|| {
        Error::domain(
            "profile",
            "the spectral solution covers quasi-uniform and uniform chains only",
        )
    })?;
    let n = spec.n();
    let shift = PhaseShift::new(x, y);
    let np1 = n as f64 + 1.0;

    // Positive half: m2 = N−1, N−3, … down to 1 (even N) or 2 (odd N).
    // Negative modes follow by q_{−m} = −q_m; m = 0 has q = 0 exactly.
    let mut positive: Vec<Mode> = Vec::with_capacity(n / 2);
    let mut guess = 0.0;
    let mut m2 = if n % 2 == 0 { 1 } else { 2 };
    while m2 < n as i64 {
        let target = PI * m2 as f64 / 2.0;
        let q = solve_secular(&shift, n, target, guess).ok_or(Error::RootNotBracketed {
            n,
            m: m2 as f64 / 2.0,
        })?;
        positive.push(make_mode(&shift, n, m2, q));
        guess = q + PI / (np1 + 2.0 * shift.derivative(q));
        m2 += 2;
    }

    let mut modes = Vec::with_capacity(n);
    for p in positive.iter().rev() {
        modes.push(Mode {
            m2: -p.m2,
            q: -p.q,
            omega: -p.omega,
            ..*p
        });
    }
    if n % 2 == 1 {
        modes.push(make_mode(&shift, n, 0, 0.0));
    }
    modes.extend(positive);
    Ok(ModeSolution { spec: *spec, modes })
}

fn make_mode(shift: &PhaseShift, n: usize, m2: i64, q: f64) -> Mode {
    Mode {
        m2,
        q,
        omega: q.sin(),
        density: shift.density(q, n),
        velocity: shift.velocity(q, n),
    }
}

/// Root of `g(q) = (N+1) q + 2 φ(q) − target` on `(−π/2, π/2)`.
///
/// `g' = N+1+2φ' ≥ N−3 > 0`, so the root is unique; `|φ| < π` bounds it
/// within `2π/(N+1)` of `target/(N+1)`. Newton steps are kept inside a
/// bisection bracket.
fn solve_secular(shift: &PhaseShift, n: usize, target: f64, guess: f64) -> Option<f64> {
    let np1 = n as f64 + 1.0;
    let g = |q: f64| np1 * q + 2.0 * shift.value(q) - target;

    let mut lo = ((target - 2.0 * PI) / np1).max(-FRAC_PI_2);
    let mut hi = ((target + 2.0 * PI) / np1).min(FRAC_PI_2);
    let (mut g_lo, mut g_hi) = (g(lo), g(hi));
    if g_lo > 0.0 || g_hi < 0.0 {
        // widen to the whole momentum range before giving up
        lo = -FRAC_PI_2;
        hi = FRAC_PI_2;
        g_lo = g(lo);
        g_hi = g(hi);
        if g_lo > 0.0 || g_hi < 0.0 {
            return None;
        }
    }
    if g_lo == 0.0 {
        return Some(lo);
    }
    if g_hi == 0.0 {
        return Some(hi);
    }

    // |g| cannot be resolved below the rounding of its largest term.
    let tol = 1e-13 * (1.0 + target.abs());
    let mut q = if guess > lo && guess < hi {
        guess
    } else {
        0.5 * (lo + hi)
    };
    for _ in 0..200 {
        let gq = g(q);
        if gq.abs() <= tol {
            return Some(q);
        }
        if gq < 0.0 {
            lo = q;
        } else {
            hi = q;
        }
        let step = gq / (np1 + 2.0 * shift.derivative(q));
        let mut next = q - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if next == q || hi - lo <= 4.0 * f64::EPSILON * q.abs().max(f64::MIN_POSITIVE) {
            return Some(q);
        }
        q = next;
    }
    Some(q)
}
