//! Chain specifications and their nearest-neighbour coupling profiles.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};

/// Coupling profile of a chain. The bulk coupling is the energy unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    /// Unit couplings except `x` on the first/last bond and `y` on the
    /// second/last-but-one bond.
    QuasiUniform { x: f64, y: f64 },
    /// Semicircle couplings `π/(N+1)·sqrt(i(N−i))`, which give a linear
    /// spectrum and unit arrival amplitude at `t = N+1`.
    PerfectTransfer,
    /// All couplings equal to one.
    Uniform,
}

/// A chain length together with its coupling profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec {
    n: usize,
    profile: Profile,
}

impl ChainSpec {
    pub fn new(n: usize, profile: Profile) -> Result<Self> {
        match profile {
            Profile::QuasiUniform { x, y } => {
                if n < 5 {
                    return Err(Error::domain(
                        "n",
                        format!("quasi-uniform chains need N >= 5, got {n}"),
                    ));
                }
                check_coupling("x", x)?;
                check_coupling("y", y)?;
            }
            Profile::PerfectTransfer | Profile::Uniform => {
                if n < 2 {
                    return Err(Error::domain("n", format!("chain needs N >= 2, got {n}")));
                }
            }
        }
        Ok(ChainSpec { n, profile })
    }

    pub fn quasi_uniform(n: usize, x: f64, y: f64) -> Result<Self> {
        Self::new(n, Profile::QuasiUniform { x, y })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(n, Profile::Uniform)
    }

    pub fn perfect_transfer(n: usize) -> Result<Self> {
        Self::new(n, Profile::PerfectTransfer)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn profile(&self) -> Profile {
        self.profile
    }

    /// Boundary couplings `(x, y)` when the chain belongs to the
    /// quasi-uniform family; the uniform chain is `(1, 1)`.
    pub fn boundary(&self) -> Option<(f64, f64)> {
        match self.profile {
            Profile::QuasiUniform { x, y } => Some((x, y)),
            Profile::Uniform => Some((1.0, 1.0)),
            Profile::PerfectTransfer => None,
        }
    }

    pub fn couplings(&self) -> CouplingSequence {
        couplings(self)
    }
}

fn check_coupling(field: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(
            field,
            format!("coupling must lie in (0, 1], got {v}"),
        ))
    }
}

/// The `N−1` couplings `A_{i,i+1}` of a chain, in site order.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingSequence(Vec<f64>);

impl CouplingSequence {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_mirror_symmetric(&self) -> bool {
        let v = &self.0;
        (0..v.len()).all(|i| v[i] == v[v.len() - 1 - i])
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// Materializes the coupling sequence of `spec`.
pub fn couplings(spec: &ChainSpec) -> CouplingSequence {
    let n = spec.n;
    let bonds = n - 1;
    let values = match spec.profile {
        Profile::Uniform => vec![1.0; bonds],
        Profile::QuasiUniform { x, y } => {
            let mut v = vec![1.0; bonds];
            v[0] = x;
            v[bonds - 1] = x;
            v[1] = y;
            v[bonds - 2] = y;
            v
        }
        Profile::PerfectTransfer => {
            let scale = PI / (n as f64 + 1.0);
            // i(N−i) is symmetric under i → N−i, so computing from the
            // smaller index keeps the mirror symmetry exact.
            (1..n)
                .map(|i| {
                    let j = i.min(n - i) as f64;
                    scale * (j * (n as f64 - j)).sqrt()
                })
                .collect()
        }
    };
    CouplingSequence(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quasi_uniform_five_sites_has_no_bulk_bond() {
        let spec = ChainSpec::quasi_uniform(5, 0.5, 0.8).unwrap();
        assert_eq!(spec.couplings().values(), &[0.5, 0.8, 0.8, 0.5]);
    }

    #[test]
    fn quasi_uniform_six_sites() {
        let spec = ChainSpec::quasi_uniform(6, 0.5, 0.8).unwrap();
        assert_eq!(spec.couplings().values(), &[0.5, 0.8, 1.0, 0.8, 0.5]);
    }

    #[test]
    fn uniform_six_sites() {
        let spec = ChainSpec::uniform(6).unwrap();
        assert_eq!(spec.couplings().values(), &[1.0; 5]);
    }

    #[test]
    fn perfect_transfer_three_sites() {
        let c = ChainSpec::perfect_transfer(3).unwrap().couplings();
        let expected = PI * 2f64.sqrt() / 4.0;
        assert_eq!(c.len(), 2);
        for v in c.values() {
            assert!((v - expected).abs() < 1e-15);
            assert!((v - 1.1107).abs() < 1e-4);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let field = |r: Result<ChainSpec>| match r {
            Err(Error::Domain { field, .. }) => field,
            other => panic!("expected domain error, got {other:?}"),
        };
        assert_eq!(field(ChainSpec::quasi_uniform(4, 0.5, 0.5)), "n");
        assert_eq!(field(ChainSpec::quasi_uniform(9, 0.0, 0.5)), "x");
        assert_eq!(field(ChainSpec::quasi_uniform(9, 1.2, 0.5)), "x");
        assert_eq!(field(ChainSpec::quasi_uniform(9, 0.5, f64::NAN)), "y");
        assert_eq!(field(ChainSpec::quasi_uniform(9, 0.5, -0.1)), "y");
        assert_eq!(field(ChainSpec::uniform(1)), "n");
        assert_eq!(field(ChainSpec::perfect_transfer(0)), "n");
        assert!(ChainSpec::uniform(2).is_ok());
        assert!(ChainSpec::quasi_uniform(5, 1.0, 1.0).is_ok());
    }

    #[test]
    fn all_profiles_mirror_symmetric() {
        for n in 2..=50 {
            let mut specs = vec![
                ChainSpec::uniform(n).unwrap(),
                ChainSpec::perfect_transfer(n).unwrap(),
            ];
            if n >= 5 {
                specs.push(ChainSpec::quasi_uniform(n, 0.3, 0.7).unwrap());
            }
            for s in specs {
                let c = s.couplings();
                assert_eq!(c.len(), n - 1);
                assert!(c.is_mirror_symmetric(), "{s:?}");
            }
        }
    }

    #[test]
    fn perfect_transfer_peak_at_middle() {
        for n in 2..=50 {
            let c = ChainSpec::perfect_transfer(n).unwrap().couplings();
            let v = c.values();
            let max = v.iter().cloned().fold(f64::MIN, f64::max);
            assert!(max <= PI / 2.0);
            let mid = (n - 1) / 2; // 0-based index of bond (N/2, N/2+1) or the middle one
            assert_eq!(v[mid], max, "N={n}");
        }
    }
}
