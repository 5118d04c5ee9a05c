//! Heat trace `sum_i exp(-t lambda_i)` from a finite-difference spectrum.
//!
//! One dimension is discretised on `[-R, R]`; three dimensions are split into
//! angular-momentum channels `-u'' + [l(l+1)/r^2 + V(r)] u` on `(0, R]`, each
//! weighted by `2l + 1`. Both use Dirichlet ends and spacing `h = R/m`.
//! Runs at `m` and `2m` points are combined by Richardson extrapolation.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::tridiag::Tridiagonal;
use crate::error::{Error, Result};
use crate::parametrix::PotentialSpec;

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralConfig {
    /// Domain radius; `None` picks the smallest `R` with `V(R) >= 50 / t_min`.
    pub radius: Option<f64>,
    /// Grid intervals `m` per radius on the coarse run.
    pub grid: usize,
    /// Highest angular momentum tried in three dimensions.
    pub l_max: usize,
    /// Eigenvalues with `exp(-t lambda) < eps_tail` are dropped.
    pub eps_tail: f64,
    /// Channel sum stops once a channel adds less than `eps_chan` of the running total.
    pub eps_chan: f64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self {
            radius: None,
            grid: 4096,
            l_max: 400,
            eps_tail: 1e-12,
            eps_chan: 1e-12,
        }
    }
}

impl SpectralConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(r) = self.radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidConfig(format!("radius must be positive, got {r}")));
            }
        }
        if self.grid < 16 {
            return Err(Error::InvalidConfig(format!(
                "grid must be at least 16, got {}",
                self.grid
            )));
        }
        for (name, v) in [("eps_tail", self.eps_tail), ("eps_chan", self.eps_chan)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must lie in (0, 1), got {v}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralTrace {
    pub t: f64,
    /// Richardson-extrapolated trace `(4 T_{2m} - T_m) / 3`.
    pub value: f64,
    /// `|T_{2m} - T_m| / 3`.
    pub error_estimate: f64,
    pub coarse: f64,
    pub fine: f64,
    /// Angular channels used (1 in one dimension).
    pub channels: usize,
    pub radius: f64,
}

const BISECTION_TOL: f64 = 1e-13;

struct Problem<'a> {
    potential: &'a PotentialSpec,
    radius: f64,
    cutoff: f64,
}

impl Problem<'_> {
    fn line_matrix(&self, m: usize) -> Tridiagonal {
        let h = self.radius / m as f64;
        let diag = (1..2 * m)
            .map(|i| 2.0 / (h * h) + self.potential.eval_f64(-self.radius + i as f64 * h))
            .collect();
        Tridiagonal {
            diag,
            off: -1.0 / (h * h),
        }
    }

    fn radial_matrix(&self, m: usize, l: usize) -> Tridiagonal {
        let h = self.radius / m as f64;
        let ll = (l * (l + 1)) as f64;
        let diag = (1..m)
            .map(|i| {
                let r = i as f64 * h;
                2.0 / (h * h) + ll / (r * r) + self.potential.eval_f64(r)
            })
            .collect();
        Tridiagonal {
            diag,
            off: -1.0 / (h * h),
        }
    }

    /// Eigenvalues below the cutoff on the coarse and fine grids.
    fn spectra(&self, m: usize, l: Option<usize>) -> (Vec<f64>, Vec<f64>) {
        let solve = |mm: usize| {
            let mat = match l {
                None => self.line_matrix(mm),
                Some(l) => self.radial_matrix(mm, l),
            };
            mat.eigenvalues_below(self.cutoff, BISECTION_TOL)
        };
        #[cfg(feature = "parallel")]
        {
            rayon::join(|| solve(m), || solve(2 * m))
        }
        #[cfg(not(feature = "parallel"))]
        {
            (solve(m), solve(2 * m))
        }
    }
}

fn boltzmann_sum(eig: &[f64], t: f64) -> f64 {
    eig.iter().map(|e| (-t * e).exp()).sum()
}

/// Traces at every `t` in `ts`, sharing one set of spectra.
pub fn spectral_traces(
    potential: &PotentialSpec,
    ts: &[f64],
    cfg: &SpectralConfig,
) -> Result<Vec<SpectralTrace>> {
    cfg.validate()?;
    let n = potential.dimension();
    if n != 1 && n != 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    if let Some(&t) = ts.iter().find(|t| !(**t > 0.0)) {
        return Err(Error::NonPositiveT(t));
    }
    if ts.is_empty() {
        return Ok(Vec::new());
    }
    let t_min = ts.iter().copied().fold(f64::INFINITY, f64::min);
    let radius = cfg
        .radius
        .unwrap_or_else(|| potential.radius_for_level(50.0 / t_min));
    let problem = Problem {
        potential,
        radius,
        cutoff: -cfg.eps_tail.ln() / t_min,
    };

    let check_ground = |eig: &[f64]| -> Result<()> {
        let v_edge = potential.eval_f64(radius);
        match eig.first() {
            Some(&ground) if v_edge < ground => Err(Error::DomainTooSmall {
                radius,
                v_edge,
                ground,
            }),
            _ => Ok(()),
        }
    };

    let mut coarse = vec![0.0; ts.len()];
    let mut fine = vec![0.0; ts.len()];
    let mut channels = 0;

    if n == 1 {
        let (c, f) = problem.spectra(cfg.grid, None);
        check_ground(&f)?;
        for (i, &t) in ts.iter().enumerate() {
            coarse[i] = boltzmann_sum(&c, t);
            fine[i] = boltzmann_sum(&f, t);
        }
        channels = 1;
    } else {
        #[cfg(feature = "parallel")]
        let batch = 2 * rayon::current_num_threads();
        #[cfg(not(feature = "parallel"))]
        let batch = 1;
        let mut l = 0;
        let mut done = false;
        while !done {
            if l > cfg.l_max {
                return Err(Error::NoConvergence(format!(
                    "channel sum not converged by l = {}",
                    cfg.l_max
                )));
            }
            let ls: Vec<usize> = (l..=(l + batch - 1).min(cfg.l_max)).collect();
            #[cfg(feature = "parallel")]
            let results: Vec<_> = ls
                .par_iter()
                .map(|&l| problem.spectra(cfg.grid, Some(l)))
                .collect();
            #[cfg(not(feature = "parallel"))]
            let results: Vec<_> = ls.iter().map(|&l| problem.spectra(cfg.grid, Some(l))).collect();
            for (&ll, (c, f)) in ls.iter().zip(results) {
                if ll == 0 {
                    check_ground(&f)?;
                }
                let weight = (2 * ll + 1) as f64;
                let mut small = true;
                for (i, &t) in ts.iter().enumerate() {
                    let (dc, df) = (weight * boltzmann_sum(&c, t), weight * boltzmann_sum(&f, t));
                    coarse[i] += dc;
                    fine[i] += df;
                    if df >= cfg.eps_chan * fine[i] || (fine[i] == 0.0 && ll == 0) {
                        small = false;
                    }
                }
                channels = ll + 1;
                // higher channels sit above a larger barrier, so their contribution only shrinks
                if small || (c.is_empty() && f.is_empty()) {
                    done = true;
                    break;
                }
            }
            l += batch;
        }
    }

    Ok(ts
        .iter()
        .enumerate()
        .map(|(i, &t)| SpectralTrace {
            t,
            value: (4.0 * fine[i] - coarse[i]) / 3.0,
            error_estimate: (fine[i] - coarse[i]).abs() / 3.0,
            coarse: coarse[i],
            fine: fine[i],
            channels,
            radius,
        })
        .collect())
}

pub fn spectral_trace(potential: &PotentialSpec, t: f64, cfg: &SpectralConfig) -> Result<SpectralTrace> {
    Ok(spectral_traces(potential, &[t], cfg)?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;
    use crate::oracles::harmonic_trace_eval;

    #[test]
    fn one_dimensional_oscillator() {
        let v = PotentialSpec::harmonic(1, int(1)).unwrap();
        let cfg = SpectralConfig {
            grid: 1024,
            ..SpectralConfig::default()
        };
        let s = spectral_trace(&v, 1.0, &cfg).unwrap();
        let exact = harmonic_trace_eval(1, 1.0, 1.0);
        assert!((s.value - exact).abs() < 1e-7 * exact, "{} vs {exact}", s.value);
        assert!(s.error_estimate < 1e-5);
    }

    #[test]
    fn three_dimensional_oscillator_coarse() {
        let v = PotentialSpec::harmonic(3, int(1)).unwrap();
        let cfg = SpectralConfig {
            grid: 512,
            ..SpectralConfig::default()
        };
        let s = spectral_trace(&v, 1.0, &cfg).unwrap();
        let exact = harmonic_trace_eval(3, 1.0, 1.0);
        assert!((s.value - exact).abs() < 1e-5 * exact, "{} vs {exact}", s.value);
        assert!(s.channels > 10);
    }

    #[test]
    fn rejects_bad_input() {
        let v = PotentialSpec::harmonic(2, int(1)).unwrap();
        let cfg = SpectralConfig::default();
        assert_eq!(
            spectral_trace(&v, 1.0, &cfg).unwrap_err(),
            Error::UnsupportedDimension(2)
        );
        let v = PotentialSpec::harmonic(1, int(1)).unwrap();
        assert!(spectral_trace(&v, 0.0, &cfg).is_err());
        let tiny = SpectralConfig {
            radius: Some(0.5),
            grid: 64,
            ..SpectralConfig::default()
        };
        assert!(matches!(
            spectral_trace(&v, 1.0, &tiny),
            Err(Error::DomainTooSmall { .. })
        ));
        let bad = SpectralConfig {
            grid: 8,
            ..SpectralConfig::default()
        };
        assert!(bad.validate().is_err());
        let capped = SpectralConfig {
            grid: 64,
            l_max: 2,
            ..SpectralConfig::default()
        };
        let v3 = PotentialSpec::harmonic(3, int(1)).unwrap();
        assert!(matches!(
            spectral_trace(&v3, 0.5, &capped),
            Err(Error::NoConvergence(_))
        ));
    }

    #[test]
    fn monotone_in_t() {
        let v = PotentialSpec::new(3, [(0, int(1)), (2, int(2)), (4, int(3))]).unwrap();
        let cfg = SpectralConfig {
            grid: 256,
            ..SpectralConfig::default()
        };
        let s = spectral_traces(&v, &[0.2, 0.1], &cfg).unwrap();
        assert!(s[1].value > s[0].value);
    }
}
