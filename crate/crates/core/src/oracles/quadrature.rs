use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::assembly::sphere_area;
use crate::error::{Error, Result};
use crate::exactalg::{to_f64, RadialPoly};
use crate::parametrix::PotentialSpec;

// Gauss-Kronrod 7/15 nodes on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadConfig {
    /// Target error relative to `int |f|`.
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
    /// Equal pieces the range is cut into before refinement starts.
    pub initial_pieces: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 0.0,
            max_intervals: 20_000,
            initial_pieces: 16,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    /// `int |f|`, the scale against which `rel_tol` is measured.
    pub magnitude: f64,
    pub intervals: usize,
}

#[derive(Clone, Copy, Debug)]
struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    magnitude: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Piece {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut magnitude = fc.abs() * WGK[7];
    for i in 0..7 {
        let x = half * XGK[i];
        let (f1, f2) = (f(center - x), f(center + x));
        kronrod += WGK[i] * (f1 + f2);
        magnitude += WGK[i] * (f1.abs() + f2.abs());
        if i % 2 == 1 {
            gauss += WG[i / 2] * (f1 + f2);
        }
    }
    Piece {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
        magnitude: magnitude * half.abs(),
    }
}

/// Globally adaptive G7K15 quadrature: bisect the piece with the largest error
/// estimate until the total error meets the tolerance.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<Quadrature> {
    let pieces = cfg.initial_pieces.max(1);
    let width = (b - a) / pieces as f64;
    let mut heap: BinaryHeap<Piece> = (0..pieces)
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == pieces { b } else { lo + width };
            gk15(&f, lo, hi)
        })
        .collect();
    loop {
        let (value, error, magnitude) = heap.iter().fold((0.0, 0.0, 0.0), |acc, p| {
            (acc.0 + p.value, acc.1 + p.error, acc.2 + p.magnitude)
        });
        if !value.is_finite() {
            return Err(Error::NoConvergence("integrand is not finite".into()));
        }
        let target = cfg.abs_tol.max(cfg.rel_tol * magnitude);
        if error <= target {
            let mut sorted: Vec<Piece> = heap.into_vec();
            // fixed summation order
            sorted.sort_by(|x, y| x.a.total_cmp(&y.a));
            return Ok(Quadrature {
                value: sorted.iter().map(|p| p.value).sum(),
                error,
                magnitude,
                intervals: sorted.len(),
            });
        }
        if heap.len() >= cfg.max_intervals {
            return Err(Error::NoConvergence(format!(
                "quadrature error {error:e} above {target:e} after {} intervals",
                heap.len()
            )));
        }
        let worst = heap.pop().expect("nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        heap.push(gk15(&f, worst.a, mid));
        heap.push(gk15(&f, mid, worst.b));
    }
}

/// Cutoff `R*` with `t V(R*) >= 700`.
pub fn truncation_radius(potential: &PotentialSpec, t: f64) -> f64 {
    potential.radius_for_level(700.0 / t)
}

/// `I(k, t) = S_n int_0^inf r^{n-1} A_k(r) e^{-t V(r)} dr`.
pub fn quadrature_i(potential: &PotentialSpec, diag_k: &RadialPoly, t: f64) -> Result<f64> {
    quadrature_i_with(potential, diag_k, t, &QuadConfig::default()).map(|q| q.value)
}

pub fn quadrature_i_with(
    potential: &PotentialSpec,
    diag_k: &RadialPoly,
    t: f64,
    cfg: &QuadConfig,
) -> Result<Quadrature> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveT(t));
    }
    let n = potential.dimension() as i32;
    let area = sphere_area(potential.dimension()).eval(to_f64(potential.leading()));
    if diag_k.is_zero() {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            magnitude: 0.0,
            intervals: 0,
        });
    }
    let r_max = truncation_radius(potential, t);
    let f = |r: f64| r.powi(n - 1) * diag_k.eval_f64(r) * (-t * potential.eval_f64(r)).exp();
    let q = integrate(f, 0.0, r_max, cfg)?;
    Ok(Quadrature {
        value: area * q.value,
        error: area * q.error,
        magnitude: area * q.magnitude,
        intervals: q.intervals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;

    #[test]
    fn polynomial_exact() {
        let cfg = QuadConfig::default();
        let q = integrate(|x| x.powi(5) - 3.0 * x, 0.0, 2.0, &cfg).unwrap();
        assert!((q.value - (64.0 / 6.0 - 6.0)).abs() < 1e-13);
    }

    #[test]
    fn gaussian_moment() {
        let h = PotentialSpec::harmonic(3, int(1)).unwrap();
        let v = quadrature_i(&h, &RadialPoly::one(), 1.0).unwrap();
        let expected = std::f64::consts::PI.powf(1.5);
        assert!((v - expected).abs() < 1e-10 * expected);
        assert_eq!(quadrature_i(&h, &RadialPoly::zero(), 1.0).unwrap(), 0.0);
        assert!(quadrature_i(&h, &RadialPoly::one(), -1.0).is_err());
    }

    #[test]
    fn budget_exhaustion() {
        let cfg = QuadConfig {
            rel_tol: 1e-15,
            max_intervals: 20,
            ..QuadConfig::default()
        };
        assert!(matches!(
            integrate(|x: f64| x.sqrt().sin() / x.sqrt().max(1e-300), 0.0, 1e4, &cfg),
            Err(Error::NoConvergence(_))
        ));
    }
}
