//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion, with
//! the measured values and tolerances underneath, and exits non-zero if any
//! criterion fails.

use std::time::{Duration, Instant};

use bqst_core::amplitude::{evaluate, fidelities};
use bqst_core::asymptotic::{maximize_u_infinity, scaling_constants};
use bqst_core::dynamics::{propagate, Propagator};
use bqst_core::optimizer::{optimize, OptimumReport, SearchMode};
use bqst_core::oracle::{amplitude_direct, diagonalize};
use bqst_core::spectral::{phase_shift, solve_modes};
use bqst_core::ChainSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Suite {
    failed: Vec<&'static str>,
}

impl Suite {
    fn criterion(&mut self, id: &'static str, title: &str, details: &[String], pass: bool) {
        println!("{} {id}: {title}", if pass { "PASS" } else { "FAIL" });
        for d in details {
            println!("       {d}");
        }
        if !pass {
            self.failed.push(id);
        }
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

// reference optima (N, x, y, u, F)
const TABLE: [(usize, f64, f64, f64, f64); 5] = [
    (51, 0.4322, 0.7338, 0.99270, 0.99514),
    (101, 0.3584, 0.6742, 0.99091, 0.99395),
    (251, 0.2760, 0.5982, 0.98932, 0.99290),
    (501, 0.2247, 0.5439, 0.98855, 0.99239),
    (1001, 0.1818, 0.4923, 0.98849, 0.99235),
];

fn main() {
    let mut suite = Suite { failed: Vec::new() };
    let mut density_sums: Vec<f64> = Vec::new();

    // 1. two-parameter optimum
    let mut two_param: Vec<OptimumReport> = Vec::new();
    let mut details = Vec::new();
    let mut pass = true;
    for &(n, x, y, u, f) in &TABLE {
        let (r, took) = timed(|| optimize(n, SearchMode::TwoParam).unwrap());
        let ok = (r.u_opt - u).abs() <= 5e-4
            && (r.fidelities.average - f).abs() <= 5e-4
            && (r.x_opt - x).abs() <= 0.01
            && (r.y_opt - y).abs() <= 0.01
            && took < Duration::from_secs(60);
        pass &= ok;
        details.push(format!(
            "N={n:<5} x={:.4} y={:.4} u={:.6} F={:.6} | ref x={x} y={y} u={u} F={f} | tol u,F 5e-4 x,y 0.01 | {:.1?} {}",
            r.x_opt, r.y_opt, r.u_opt, r.fidelities.average, took, if ok { "ok" } else { "MISS" }
        ));
        two_param.push(r);
    }
    suite.criterion(
        "C1",
        "two-parameter optima match the reference values",
        &details,
        pass,
    );

    // 2. y = 1 optimum
    let mut details = Vec::new();
    let mut pass = true;
    for (n, u) in [(51, 0.9493), (101, 0.9324), (501, 0.9003)] {
        let r = optimize(n, SearchMode::FixedY(1.0)).unwrap();
        let ok = (r.u_opt - u).abs() <= 5e-4;
        pass &= ok;
        details.push(format!(
            "N={n:<5} x={:.4} u={:.6} | ref u={u} tol 5e-4 {}",
            r.x_opt,
            r.u_opt,
            if ok { "ok" } else { "MISS" }
        ));
    }
    suite.criterion(
        "C2",
        "y = 1 optima match the reference values",
        &details,
        pass,
    );

    // 3. N = 100001, scaling-seeded
    let (big, took) = timed(|| optimize(100_001, SearchMode::TwoParam).unwrap());
    let pass = big.scaling_seeded
        && (big.u_opt - 0.98720).abs() <= 1e-3
        && took < Duration::from_secs(600);
    suite.criterion(
        "C3",
        "N = 100001 optimum from the scaling-law seed",
        &[format!(
            "x={:.5} y={:.5} u={:.6} | ref u=0.98720 tol 1e-3 | {} evaluations in {:.1?} (limit 600 s)",
            big.x_opt, big.y_opt, big.u_opt, big.evaluations, took
        )],
        pass,
    );

    // 4. asymptotic limit
    let (opt, took) = timed(maximize_u_infinity);
    let c = scaling_constants(opt.params);
    let f_inf = fidelities(opt.u_infinity).unwrap().average;
    let pass = (opt.u_infinity - 0.987153).abs() <= 1e-5
        && (opt.params.tau - 0.15545).abs() <= 1e-3
        && (opt.params.sigma - 3.1645).abs() <= 1e-3
        && (c.x_coefficient - 1.954).abs() <= 0.005
        && (c.y_coefficient - 1.662).abs() <= 0.005
        && (c.delay_coefficient - 3.239).abs() <= 0.005;
    suite.criterion(
        "C4",
        "infinite-chain optimum and scaling constants",
        &[
            format!(
                "tau={:.6} sigma={:.6} u_inf={:.7} F_inf={:.6} | ref (0.15545, 3.1645) tol 1e-3, u 0.987153 tol 1e-5 | {:.1?}",
                opt.params.tau, opt.params.sigma, opt.u_infinity, f_inf, took
            ),
            format!(
                "coefficients x={:.4} y={:.4} delay={:.4} | ref 1.954 1.662 3.239 tol 0.005",
                c.x_coefficient, c.y_coefficient, c.delay_coefficient
            ),
        ],
        pass,
    );

    // 5. spectral route against dense diagonalization
    let (worst, took) = timed(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(20_110);
        let (mut w_omega, mut w_density, mut w_trace) = (0.0f64, 0.0f64, 0.0f64);
        for _ in 0..50 {
            let n = rng.gen_range(5..=200);
            let x = rng.gen_range(0.01..=1.0);
            let y = rng.gen_range(0.01..=1.0);
            let spec = ChainSpec::quasi_uniform(n, x, y).unwrap();
            let sol = solve_modes(&spec).unwrap();
            density_sums.push(sol.density_sum());
            let eig = diagonalize(&spec).unwrap();
            for (j, m) in sol.modes.iter().enumerate() {
                let k = n - 1 - j;
                w_omega = w_omega.max((m.omega - eig.frequency(k)).abs());
                w_density = w_density.max((m.density - eig.component(k, 0).powi(2)).abs());
            }
            let t_end = 2.0 * n as f64 + 50.0;
            for s in 0..100 {
                let t = t_end * s as f64 / 99.0;
                let d = amplitude_direct(&eig, n, t).norm();
                w_trace = w_trace.max((evaluate(&sol, t) - d).abs());
            }
        }
        (w_omega, w_density, w_trace)
    });
    let pass =
        worst.0 <= 1e-10 && worst.1 <= 1e-9 && worst.2 <= 1e-9 && took < Duration::from_secs(60);
    suite.criterion(
        "C5",
        "spectral route agrees with dense diagonalization (50 random chains)",
        &[format!(
            "max |Δω|={:.2e} (tol 1e-10)  max |ΔP|={:.2e} (tol 1e-9)  max |Δu|={:.2e} (tol 1e-9) | {:.1?}",
            worst.0, worst.1, worst.2, took
        )],
        pass,
    );

    // 6. normalization and sum rule
    for &(n, ..) in &TABLE {
        for r in two_param.iter().filter(|r| r.n == n) {
            let spec = ChainSpec::quasi_uniform(n, r.x_opt, r.y_opt).unwrap();
            density_sums.push(solve_modes(&spec).unwrap().density_sum());
        }
    }
    let big_spec = ChainSpec::quasi_uniform(100_001, big.x_opt, big.y_opt).unwrap();
    density_sums.push(solve_modes(&big_spec).unwrap().density_sum());
    let worst_p = density_sums
        .iter()
        .map(|s| (s - 1.0).abs())
        .fold(0.0, f64::max);
    let mut worst_frame = 0.0f64;
    let mut frames = 0;
    for spec in [
        ChainSpec::quasi_uniform(251, 0.276, 0.598).unwrap(),
        ChainSpec::perfect_transfer(251).unwrap(),
        ChainSpec::uniform(251).unwrap(),
    ] {
        for f in propagate(&spec, 300.0, 1.0).unwrap().frames {
            worst_frame = worst_frame.max((f.norm_squared() - 1.0).abs());
            frames += 1;
        }
    }
    suite.criterion(
        "C6",
        "mode densities normalized, wavepacket sum rule",
        &[format!(
            "{} solves: max |ΣP−1|={:.2e}  {} frames: max |Σ|u_i|²−1|={:.2e} | tol 1e-10",
            density_sums.len(),
            worst_p,
            frames,
            worst_frame
        )],
        worst_p <= 1e-10 && worst_frame <= 1e-10,
    );

    // 7. perfect transfer
    let p = Propagator::new(&ChainSpec::perfect_transfer(251).unwrap()).unwrap();
    let u_end = p.frame(252.0).amplitudes[250];
    suite.criterion(
        "C7",
        "perfect-transfer chain, N = 251, reaches the far end at t = N+1",
        &[format!("|u_N(252)| = {u_end:.15} | need >= 1 - 1e-8")],
        u_end >= 1.0 - 1e-8,
    );

    // 8. fixed point
    let mut spread = 0.0f64;
    for x in [0.2, 0.6, 1.0] {
        let q = (x / 2.0f64).asin();
        let v: Vec<f64> = [0.3, 0.7, 1.0]
            .iter()
            .map(|&y| phase_shift(x, y, q))
            .collect();
        let hi = v.iter().cloned().fold(f64::MIN, f64::max);
        let lo = v.iter().cloned().fold(f64::MAX, f64::min);
        spread = spread.max(hi - lo);
    }
    suite.criterion(
        "C8",
        "phase shift at q = asin(x/2) independent of y",
        &[format!("max spread over y = {spread:.2e} | tol 1e-12")],
        spread <= 1e-12,
    );

    // 9. arrival delay scaling
    let r2501 = optimize(2501, SearchMode::TwoParam).unwrap();
    let mut details = Vec::new();
    let mut pass = true;
    for r in two_param
        .iter()
        .filter(|r| r.n == 501 || r.n == 1001)
        .chain([&r2501])
    {
        let expected = 3.239 * (r.n as f64).cbrt();
        let rel = r.delay / expected - 1.0;
        let ok = rel.abs() <= 0.10;
        pass &= ok;
        details.push(format!(
            "N={:<5} t*={:.3} s={:.3} 3.239·N^(1/3)={:.3} rel={:+.3} | tol 10% {}",
            r.n,
            r.arrival_time,
            r.delay,
            expected,
            rel,
            if ok { "ok" } else { "MISS" }
        ));
    }
    suite.criterion("C9", "arrival delay follows 3.239·N^(1/3)", &details, pass);

    // 10. scaling-law slopes
    let xs: Vec<(f64, f64)> = two_param
        .iter()
        .map(|r| ((r.n as f64).ln(), r.x_opt.ln()))
        .collect();
    let ys: Vec<(f64, f64)> = two_param
        .iter()
        .map(|r| ((r.n as f64).ln(), r.y_opt.ln()))
        .collect();
    let (sx, sy) = (fit_slope(&xs), fit_slope(&ys));
    suite.criterion(
        "C10",
        "log-log slopes of the optimal couplings",
        &[format!(
            "slope x={sx:.4} (ref -1/3 ± 0.05)  slope y={sy:.4} (ref -1/6 ± 0.05) over N=51..1001"
        )],
        (sx + 1.0 / 3.0).abs() <= 0.05 && (sy + 1.0 / 6.0).abs() <= 0.05,
    );

    // finite-N optimum approaching the infinite-chain value
    let r10k = optimize(10_001, SearchMode::TwoParam).unwrap();
    let r1k = two_param.iter().find(|r| r.n == 1001).unwrap();
    let seq = [r1k.u_opt, r10k.u_opt, big.u_opt];
    let gaps: Vec<f64> = seq.iter().map(|u| u - opt.u_infinity).collect();
    let pass =
        gaps.iter().all(|g| *g > 0.0) && gaps.windows(2).all(|w| w[1] < w[0]) && gaps[2] < 1e-4;
    suite.criterion(
        "C-conv",
        "finite-N optimum decreases toward the infinite-chain value",
        &[format!(
            "u_opt(1001, 10001, 100001) = {:.6} {:.6} {:.6}; gaps to u_inf {:.2e} {:.2e} {:.2e} | last gap < 1e-4",
            seq[0], seq[1], seq[2], gaps[0], gaps[1], gaps[2]
        )],
        pass,
    );

    println!();
    if suite.failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed {}", suite.failed.join(", "));
        std::process::exit(1);
    }
}
