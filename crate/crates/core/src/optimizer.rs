//! Maximization of the arrival amplitude `ũ(x, y)` over the boundary
//! couplings, and fidelity maps over the `(x, y)` plane.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::amplitude::{fidelities, find_arrival, AmplitudeResult, FidelityPair};
use crate::chain::ChainSpec;
use crate::error::{Error, Result};
use crate::simplex::{minimize, SimplexOptions};
use crate::spectral::{bimodal_threshold, solve_modes};

/// Which boundary couplings are free.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SearchMode {
    /// Both `x` and `y` free in `(0, 1]`.
    TwoParam,
    /// `y` pinned to the given value, `x` free.
    FixedY(f64),
    /// `y = Y(x)`, the bimodal threshold; `x` free.
    ConstrainedY,
}

/// Chain length from which the simplex is seeded from the large-`N`
/// scaling laws instead of a grid scan.
pub const SCALING_SEED_MIN_N: usize = 25_001;

/// Rescaled arrival time at the infinite-chain optimum, used only to place
/// the scaling-law seed `x ≈ 2 (6τ/N)^{1/3}`.
const SEED_TAU: f64 = 0.155_45;
/// `x_opt ≈ 1.030 N^{−1/6}` for the `y = 1` family.
const SEED_FIXED_Y1_COEFF: f64 = 1.030;

const GRID_2D: usize = 21;
const GRID_1D: usize = 41;

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeOptions {
    /// Simplex diameter at convergence, in coupling units.
    pub diameter_tol: f64,
    pub max_evaluations: usize,
    pub keep_trace: bool,
    /// Force the scaling-law seed (`Some(true)`) or the grid seed
    /// (`Some(false)`); `None` picks by chain length.
    pub scaling_seed: Option<bool>,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        OptimizeOptions {
            diameter_tol: 1e-4,
            max_evaluations: 400,
            keep_trace: false,
            scaling_seed: None,
        }
    }
}

/// One point visited by the search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub x: f64,
    pub y: f64,
    pub u: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimumReport {
    pub n: usize,
    pub mode: SearchMode,
    pub x_opt: f64,
    pub y_opt: f64,
    pub u_opt: f64,
    pub fidelities: FidelityPair,
    pub arrival_time: f64,
    pub delay: f64,
    /// Objective evaluations, seed grid included.
    pub evaluations: usize,
    pub converged: bool,
    /// Set when the optimum sits on the edge of the feasible box, i.e. no
    /// interior maximum was found.
    pub on_boundary: bool,
    pub scaling_seeded: bool,
    pub trace: Vec<TracePoint>,
}

/// Arrival peak `ũ(x, y)` for an `n`-site quasi-uniform chain, searched in
/// the default window.
pub fn arrival_peak(n: usize, x: f64, y: f64) -> Result<AmplitudeResult> {
    let spec = ChainSpec::quasi_uniform(n, x, y)?;
    find_arrival(&solve_modes(&spec)?, None)
}

fn feasible(v: f64) -> bool {
    v > 0.0 && v <= 1.0
}

/// Maps the free parameters to `(x, y)`.
fn couplings_of(mode: SearchMode, p: &[f64]) -> (f64, f64) {
    match mode {
        SearchMode::TwoParam => (p[0], p[1]),
        SearchMode::FixedY(y) => (p[0], y),
        SearchMode::ConstrainedY => (p[0], bimodal_threshold(p[0])),
    }
}

fn peak_or_zero(n: usize, x: f64, y: f64) -> f64 {
    if !(feasible(x) && feasible(y)) {
        return f64::NEG_INFINITY;
    }
    arrival_peak(n, x, y).map_or(f64::NEG_INFINITY, |r| r.peak_amplitude)
}

/// Maximizes `ũ` with default options.
pub fn optimize(n: usize, mode: SearchMode) -> Result<OptimumReport> {
    optimize_with(n, mode, &OptimizeOptions::default())
}

pub fn optimize_with(n: usize, mode: SearchMode, opts: &OptimizeOptions) -> Result<OptimumReport> {
    if n < 5 {
        return Err(Error::domain(
            "n",
            format!("optimization needs N >= 5, got {n}"),
        ));
    }
    if let SearchMode::FixedY(y) = mode {
        if !(y.is_finite() && feasible(y)) {
            return Err(Error::domain(
                "y",
                format!("fixed y must lie in (0, 1], got {y}"),
            ));
        }
    }
    let dim = if mode == SearchMode::TwoParam { 2 } else { 1 };

    let use_scaling =
        opts.scaling_seed.unwrap_or(n >= SCALING_SEED_MIN_N) && scaling_seed(n, mode).is_some();
    let mut evaluations = 0;
    let mut trace = Vec::new();

    let (start, step) = if use_scaling {
        let seed = scaling_seed(n, mode).unwrap_or_default();
        let step = seed.iter().map(|v| 0.1 * v).collect();
        (seed, step)
    } else {
        let (best, cell) = grid_seed(n, mode, &mut evaluations);
        let step = best
            .iter()
            .map(|&v| if v + cell > 1.0 { -cell } else { cell })
            .collect();
        (best, step)
    };

    let simplex_opts = SimplexOptions {
        initial_step: step,
        diameter_tol: opts.diameter_tol,
        max_evaluations: opts.max_evaluations,
        keep_trace: false,
    };
    let keep = opts.keep_trace;
    let found = minimize(
        |p| {
            let (x, y) = couplings_of(mode, p);
            let u = peak_or_zero(n, x, y);
            if keep && u.is_finite() {
                trace.push(TracePoint { x, y, u });
            }
            -u
        },
        &start,
        &simplex_opts,
    );
    evaluations += found.evaluations;

    let (x_opt, y_opt) = couplings_of(mode, &found.point);
    let arrival = arrival_peak(n, x_opt, y_opt)?;
    let u_opt = arrival.peak_amplitude;
    let edge = 1e-3;
    let on_boundary = found.point.iter().any(|&v| v >= 1.0 - edge || v <= edge)
        || (dim == 2 && y_opt >= 1.0 - edge);

    Ok(OptimumReport {
        n,
        mode,
        x_opt,
        y_opt,
        u_opt,
        fidelities: fidelities(u_opt.min(1.0))?,
        arrival_time: arrival.arrival_time,
        delay: arrival.delay,
        evaluations,
        converged: found.converged,
        on_boundary,
        scaling_seeded: use_scaling,
        trace,
    })
}

/// Seed from the infinite-chain scaling laws, where one is known.
fn scaling_seed(n: usize, mode: SearchMode) -> Option<Vec<f64>> {
    let nf = n as f64;
    let x = 2.0 * (6.0 * SEED_TAU / nf).cbrt();
    match mode {
        SearchMode::TwoParam => Some(vec![x, bimodal_threshold(x)]),
        SearchMode::ConstrainedY => Some(vec![x]),
        SearchMode::FixedY(1.0) => Some(vec![SEED_FIXED_Y1_COEFF * nf.powf(-1.0 / 6.0)]),
        SearchMode::FixedY(_) => None,
    }
}

/// Best node of the seed grid and the grid spacing. Nodes are `k/K` for
/// `k = 1..=K`; ties go to smaller `x`, then smaller `y`.
fn grid_seed(n: usize, mode: SearchMode, evaluations: &mut usize) -> (Vec<f64>, f64) {
    let k = if mode == SearchMode::TwoParam {
        GRID_2D
    } else {
        GRID_1D
    };
    let axis: Vec<f64> = (1..=k).map(|i| i as f64 / k as f64).collect();
    let points: Vec<Vec<f64>> = if mode == SearchMode::TwoParam {
        axis.iter()
            .flat_map(|&x| axis.iter().map(move |&y| vec![x, y]))
            .collect()
    } else {
        axis.iter().map(|&x| vec![x]).collect()
    };
    let values = crate::par::map(&points, |p| {
        let (x, y) = couplings_of(mode, p);
        peak_or_zero(n, x, y)
    });
    *evaluations += points.len();
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    (points[best].clone(), 1.0 / k as f64)
}

/// Average fidelity at arrival over a rectangular `(x, y)` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityMap {
    pub n: usize,
    pub x_grid: Vec<f64>,
    pub y_grid: Vec<f64>,
    /// `u_values[i][j]` is `ũ(x_grid[i], y_grid[j])`.
    pub u_values: Vec<Vec<f64>>,
    /// `f_values[i][j]` is the average fidelity at `(x_grid[i], y_grid[j])`.
    pub f_values: Vec<Vec<f64>>,
}

impl FidelityMap {
    /// Grid node with the largest fidelity; ties go to smaller `x`, then
    /// smaller `y`.
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = (0, 0);
        for (i, row) in self.f_values.iter().enumerate() {
            for (j, &f) in row.iter().enumerate() {
                if f > self.f_values[best.0][best.1] {
                    best = (i, j);
                }
            }
        }
        best
    }
}

/// Axis specification `start:end:steps` for [`fidelity_map`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub start: f64,
    pub end: f64,
    pub steps: usize,
}

impl GridAxis {
    pub fn new(start: f64, end: f64, steps: usize) -> Self {
        GridAxis { start, end, steps }
    }

    fn nodes(&self, field: &'static str) -> Result<Vec<f64>> {
        let GridAxis { start, end, steps } = *self;
        if steps < 2 {
            return Err(Error::domain(
                field,
                format!("need at least 2 steps, got {steps}"),
            ));
        }
        if !(feasible(start) && feasible(end) && start < end) {
            return Err(Error::domain(
                field,
                format!("range must satisfy 0 < start < end <= 1, got {start}:{end}"),
            ));
        }
        let h = (end - start) / (steps - 1) as f64;
        Ok((0..steps)
            .map(|i| {
                if i + 1 == steps {
                    end
                } else {
                    start + i as f64 * h
                }
            })
            .collect())
    }
}

pub fn fidelity_map(n: usize, x_axis: GridAxis, y_axis: GridAxis) -> Result<FidelityMap> {
    if n < 5 {
        return Err(Error::domain(
            "n",
            format!("fidelity map needs N >= 5, got {n}"),
        ));
    }
    let x_grid = x_axis.nodes("x")?;
    let y_grid = y_axis.nodes("y")?;
    let nodes: Vec<(f64, f64)> = x_grid
        .iter()
        .flat_map(|&x| y_grid.iter().map(move |&y| (x, y)))
        .collect();
    let peaks = crate::par::map(&nodes, |&(x, y)| {
        arrival_peak(n, x, y).map(|r| r.peak_amplitude)
    });
    let mut u_values = Vec::with_capacity(x_grid.len());
    let mut f_values = Vec::with_capacity(x_grid.len());
    let mut it = peaks.into_iter();
    for _ in &x_grid {
        let mut u_row = Vec::with_capacity(y_grid.len());
        let mut f_row = Vec::with_capacity(y_grid.len());
        for _ in &y_grid {
            let u = it.next().expect("one peak per node")?;
            u_row.push(u);
            f_row.push(fidelities(u.min(1.0))?.average);
        }
        u_values.push(u_row);
        f_values.push(f_row);
    }
    Ok(FidelityMap {
        n,
        x_grid,
        y_grid,
        u_values,
        f_values,
    })
}
