//! Full wavepacket `|u_i(t)|` over every site, from the dense
//! eigendecomposition.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use num_complex::Complex64;

use crate::chain::ChainSpec;
use crate::error::{Error, Result};
use crate::oracle::{diagonalize_with_limit, EigenSystem};

/// Largest chain [`propagate`] accepts by default.
pub const DYNAMICS_LIMIT: usize = 2000;

#[derive(Debug, Clone, PartialEq)]
pub struct WavepacketFrame {
    pub t: f64,
    /// `|u_i(t)|` for sites `i = 1..=N`.
    pub amplitudes: Vec<f64>,
}

impl WavepacketFrame {
    /// `Σ_i |u_i|²`, equal to one for unitary evolution.
    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum()
    }

    /// One-based site of the largest amplitude; ties go to the smaller site.
    pub fn peak_site(&self) -> usize {
        let mut best = 0;
        for (i, a) in self.amplitudes.iter().enumerate() {
            if *a > self.amplitudes[best] {
                best = i;
            }
        }
        best + 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WavepacketField {
    pub spec: ChainSpec,
    pub frames: Vec<WavepacketFrame>,
}

/// Evolves the site-1 state of one chain.
#[derive(Debug, Clone)]
pub struct Propagator {
    spec: ChainSpec,
    eig: EigenSystem,
}

impl Propagator {
    pub fn new(spec: &ChainSpec) -> Result<Self> {
        Self::with_limit(spec, DYNAMICS_LIMIT)
    }

    pub fn with_limit(spec: &ChainSpec, limit: usize) -> Result<Self> {
        let n = spec.n();
        if n > limit {
            return Err(Error::domain(
                "n",
                format!(
                    "N = {n} exceeds the dense dynamics limit {limit}; \
                     use the end-to-end amplitude (spectral path) instead"
                ),
            ));
        }
        Ok(Propagator {
            spec: *spec,
            eig: diagonalize_with_limit(spec, limit)?,
        })
    }

    pub fn spec(&self) -> &ChainSpec {
        &self.spec
    }

    /// Complex amplitudes `u_i(t) = Σ_n U_{ni} U_{n1} e^{−iω_n t}`.
    pub fn amplitudes(&self, t: f64) -> Vec<Complex64> {
        let n = self.eig.n();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for k in 0..n {
            let c = Complex64::from_polar(self.eig.component(k, 0), -self.eig.frequency(k) * t);
            for (o, u) in out.iter_mut().zip(self.eig.eigenvector(k)) {
                *o += c * u;
            }
        }
        out
    }

    pub fn frame(&self, t: f64) -> WavepacketFrame {
        WavepacketFrame {
            t,
            amplitudes: self.amplitudes(t).iter().map(|u| u.norm()).collect(),
        }
    }
}

/// Frame times `0, dt, 2dt, …` up to `t_max`.
fn frame_times(t_max: f64, dt: f64) -> Result<Vec<f64>> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::domain(
            "dt",
            format!("time step must be positive, got {dt}"),
        ));
    }
    if !(t_max.is_finite() && t_max >= 0.0) {
        return Err(Error::domain(
            "t_max",
            format!("must be finite and non-negative, got {t_max}"),
        ));
    }
    let count = (t_max / dt + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| k as f64 * dt).collect())
}

pub fn propagate(spec: &ChainSpec, t_max: f64, dt: f64) -> Result<WavepacketField> {
    propagate_with_limit(spec, t_max, dt, DYNAMICS_LIMIT)
}

pub fn propagate_with_limit(
    spec: &ChainSpec,
    t_max: f64,
    dt: f64,
    limit: usize,
) -> Result<WavepacketField> {
    let times = frame_times(t_max, dt)?;
    let prop = Propagator::with_limit(spec, limit)?;
    let frames = crate::par::map(&times, |&t| prop.frame(t));
    Ok(WavepacketField {
        spec: *spec,
        frames,
    })
}

/// `(t, site of maximum amplitude)` for every frame.
pub fn front_trajectory(field: &WavepacketField) -> Vec<(f64, usize)> {
    field.frames.iter().map(|f| (f.t, f.peak_site())).collect()
}

/// Least-squares slope of site against time over the trajectory points
/// whose site lies in `sites` (inclusive). `None` with fewer than two
/// distinct times.
pub fn front_speed(trajectory: &[(f64, usize)], sites: (usize, usize)) -> Option<f64> {
    let pts: Vec<(f64, f64)> = trajectory
        .iter()
        .filter(|(_, s)| (sites.0..=sites.1).contains(s))
        .map(|&(t, s)| (t, s as f64))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let (mt, ms) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), (t, s)| (a + t / k, b + s / k));
    let (mut sts, mut stt) = (0.0, 0.0);
    for (t, s) in &pts {
        sts += (t - mt) * (s - ms);
        stt += (t - mt) * (t - mt);
    }
    (stt > 0.0).then(|| sts / stt)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_frame_is_site_one() {
        let spec = ChainSpec::quasi_uniform(31, 0.4, 0.7).unwrap();
        let f = propagate(&spec, 0.0, 1.0).unwrap();
        assert_eq!(f.frames.len(), 1);
        let a = &f.frames[0].amplitudes;
        assert!((a[0] - 1.0).abs() < 1e-12);
        assert!(a[1..].iter().all(|v| v.abs() < 1e-12));
        assert_eq!(front_trajectory(&f), vec![(0.0, 1)]);
    }

    #[test]
    fn frame_times_cover_t_max() {
        let spec = ChainSpec::uniform(8).unwrap();
        let f = propagate(&spec, 3.0, 0.5).unwrap();
        let t: Vec<f64> = f.frames.iter().map(|f| f.t).collect();
        assert_eq!(t, vec![0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0]);
    }

    #[test]
    fn sum_rule() {
        let spec = ChainSpec::quasi_uniform(60, 0.3, 0.6).unwrap();
        for f in propagate(&spec, 120.0, 7.0).unwrap().frames {
            assert!((f.norm_squared() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn guards() {
        let spec = ChainSpec::uniform(30).unwrap();
        assert!(propagate(&spec, 1.0, 0.0).is_err());
        assert!(propagate(&spec, -1.0, 1.0).is_err());
        match propagate_with_limit(&spec, 1.0, 1.0, 20) {
            Err(Error::Domain { field: "n", reason }) => assert!(reason.contains("spectral")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn speed_fit() {
        let traj: Vec<(f64, usize)> = (0..10).map(|k| (k as f64, 3 + 2 * k)).collect();
        assert!((front_speed(&traj, (1, 100)).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(front_speed(&traj, (1, 4)), None);
    }
}
