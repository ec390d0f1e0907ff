//! Nelder–Mead downhill simplex.
//!
//! Vertices with equal objective values are ordered lexicographically by
//! coordinate, so runs are fully deterministic.

use alloc::vec::Vec;
use core::cmp::Ordering;

#[cfg(not(feature = "std"))]
use num_traits::Float;

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOptions {
    /// Offset of the initial vertices from the start point, per coordinate.
    pub initial_step: Vec<f64>,
    /// Converged once every vertex lies within this distance of the best.
    pub diameter_tol: f64,
    pub max_evaluations: usize,
    /// Record the best vertex after every iteration.
    pub keep_trace: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub point: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub iterations: usize,
    pub converged: bool,
    pub trace: Vec<(Vec<f64>, f64)>,
}

#[derive(Clone)]
struct Vertex {
    x: Vec<f64>,
    f: f64,
}

fn order(a: &Vertex, b: &Vertex) -> Ordering {
    a.f.total_cmp(&b.f).then_with(|| {
        a.x.iter()
            .zip(&b.x)
            .map(|(p, q)| p.total_cmp(q))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
    })
}

fn lerp(from: &[f64], to: &[f64], t: f64) -> Vec<f64> {
    from.iter().zip(to).map(|(a, b)| a + t * (b - a)).collect()
}

/// Minimizes `f` starting from `start`.
pub fn minimize(mut f: impl FnMut(&[f64]) -> f64, start: &[f64], opts: &SimplexOptions) -> Minimum {
    let dim = start.len();
    assert!(dim >= 1 && opts.initial_step.len() == dim);
    let mut evaluations = 0;
    let mut eval = |x: Vec<f64>, evaluations: &mut usize| {
        *evaluations += 1;
        let v = f(&x);
        Vertex {
            f: if v.is_nan() { f64::INFINITY } else { v },
            x,
        }
    };

    let mut simplex: Vec<Vertex> = Vec::with_capacity(dim + 1);
    simplex.push(eval(start.to_vec(), &mut evaluations));
    for i in 0..dim {
        let mut x = start.to_vec();
        x[i] += opts.initial_step[i];
        simplex.push(eval(x, &mut evaluations));
    }

    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut converged = false;
    loop {
        simplex.sort_by(order);
        if opts.keep_trace {
            trace.push((simplex[0].x.clone(), simplex[0].f));
        }
        let best = &simplex[0].x;
        let diameter = simplex[1..]
            .iter()
            .map(|v| {
                v.x.iter()
                    .zip(best)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        if diameter < opts.diameter_tol {
            converged = true;
            break;
        }
        if evaluations >= opts.max_evaluations {
            break;
        }
        iterations += 1;

        let worst = simplex[dim].clone();
        let mut centroid = alloc::vec![0.0; dim];
        for v in &simplex[..dim] {
            for (c, x) in centroid.iter_mut().zip(&v.x) {
                *c += x / dim as f64;
            }
        }

        // moves are accepted only on strict improvement in value
        let reflected = eval(lerp(&centroid, &worst.x, -REFLECT), &mut evaluations);
        if reflected.f < simplex[0].f {
            let expanded = eval(lerp(&centroid, &worst.x, -EXPAND), &mut evaluations);
            simplex[dim] = if expanded.f < reflected.f {
                expanded
            } else {
                reflected
            };
            continue;
        }
        if reflected.f < simplex[dim - 1].f {
            simplex[dim] = reflected;
            continue;
        }
        // contraction: outside if the reflection beat the worst vertex
        let contracted = if reflected.f < worst.f {
            let c = eval(lerp(&centroid, &reflected.x, CONTRACT), &mut evaluations);
            (c.f <= reflected.f).then_some(c)
        } else {
            let c = eval(lerp(&centroid, &worst.x, CONTRACT), &mut evaluations);
            (c.f < worst.f).then_some(c)
        };
        match contracted {
            Some(c) => simplex[dim] = c,
            None => {
                let best = simplex[0].x.clone();
                for v in simplex[1..].iter_mut() {
                    *v = eval(lerp(&best, &v.x, SHRINK), &mut evaluations);
                }
            }
        }
    }

    let best = simplex.swap_remove(0);
    Minimum {
        point: best.x,
        value: best.f,
        evaluations,
        iterations,
        converged,
        trace,
    }
}
