use bqst_core::amplitude::{evaluate, find_arrival};
use bqst_core::dynamics::{front_speed, front_trajectory, propagate, Propagator};
use bqst_core::spectral::solve_modes;
use bqst_core::ChainSpec;

#[test]
fn perfect_transfer_arrives_exactly() {
    let p = Propagator::new(&ChainSpec::perfect_transfer(251).unwrap()).unwrap();
    let f = p.frame(252.0);
    assert!(f.amplitudes[250] >= 1.0 - 1e-8);
    assert_eq!(f.peak_site(), 251);
}

#[test]
fn quasi_uniform_arrival_concentrates_at_far_end() {
    let spec = ChainSpec::quasi_uniform(251, 0.276, 0.598).unwrap();
    let arrival = find_arrival(&solve_modes(&spec).unwrap(), None).unwrap();
    let f = Propagator::new(&spec).unwrap().frame(arrival.arrival_time);
    assert_eq!(f.peak_site(), 251);
    assert!((f.amplitudes[250] - 0.98932).abs() < 5e-5);
}

#[test]
fn sum_rule_every_frame() {
    for spec in [
        ChainSpec::quasi_uniform(251, 0.276, 0.598).unwrap(),
        ChainSpec::perfect_transfer(120).unwrap(),
        ChainSpec::uniform(77).unwrap(),
    ] {
        for f in propagate(&spec, 400.0, 2.5).unwrap().frames {
            assert!((f.norm_squared() - 1.0).abs() < 1e-10, "{spec:?} t={}", f.t);
        }
    }
}

#[test]
fn uniform_front_moves_at_unit_speed() {
    let field = propagate(&ChainSpec::uniform(251).unwrap(), 300.0, 1.0).unwrap();
    let v = front_speed(&front_trajectory(&field), (63, 188)).unwrap();
    assert!((v - 1.0).abs() < 0.05, "{v}");
}

#[test]
fn quasi_uniform_front_moves_at_unit_speed() {
    let field = propagate(
        &ChainSpec::quasi_uniform(251, 0.276, 0.598).unwrap(),
        300.0,
        1.0,
    )
    .unwrap();
    let v = front_speed(&front_trajectory(&field), (63, 188)).unwrap();
    assert!((v - 1.0).abs() < 0.05, "{v}");
}

#[test]
fn perfect_transfer_front_slows_near_ends() {
    let field = propagate(&ChainSpec::perfect_transfer(251).unwrap(), 252.0, 1.0).unwrap();
    let traj = front_trajectory(&field);
    let edge = front_speed(&traj, (1, 42)).unwrap();
    let middle = front_speed(&traj, (84, 168)).unwrap();
    assert!(middle > 1.5 * edge, "edge {edge}, middle {middle}");
}

#[test]
fn far_end_matches_spectral_amplitude() {
    for (n, x, y) in [
        (40, 0.5, 0.8),
        (101, 0.3584, 0.6742),
        (200, 0.25, 0.55),
        (57, 1.0, 1.0),
    ] {
        let spec = ChainSpec::quasi_uniform(n, x, y).unwrap();
        let modes = solve_modes(&spec).unwrap();
        let p = Propagator::new(&spec).unwrap();
        for k in 0..30 {
            let t = k as f64 * 0.07 * n as f64;
            let d = p.frame(t).amplitudes[n - 1];
            assert!((d - evaluate(&modes, t)).abs() < 1e-9);
        }
    }
}

#[test]
fn large_chain_points_to_spectral_path() {
    let err = propagate(&ChainSpec::uniform(2001).unwrap(), 1.0, 1.0).unwrap_err();
    assert!(err.to_string().contains("spectral"));
}
