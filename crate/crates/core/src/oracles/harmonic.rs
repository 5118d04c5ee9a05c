use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::assembly::CoeffValue;
use crate::exactalg::{factorial, rat, rat_powi, to_f64, Rational};

/// Laurent series of `[2 sinh(sqrt(c) t)]^{-d}`; the coefficient of `t^p` is
/// `rational_p * c^{p/2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    dimension: usize,
    coupling: Rational,
    coeffs: BTreeMap<i64, Rational>,
    order: usize,
}

/// Truncated power series in `x^2`: `f[i]` multiplies `x^{2i}`.
fn series_mul(a: &[Rational], b: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn series_recip(a: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    out[0] = a[0].recip();
    for m in 1..len {
        let mut acc = Rational::zero();
        for i in 1..=m.min(a.len() - 1) {
            acc += &a[i] * &out[m - i];
        }
        out[m] = -acc * &out[0];
    }
    out
}

impl LaurentSeries {
    /// Terms `t^{-d}, t^{-d+2}, ..., t^{-d+2*order}`.
    pub fn new(dimension: usize, coupling: Rational, order: usize) -> Self {
        let len = order + 1;
        // sinh(x)/x = sum x^{2i} / (2i+1)!
        let sinhc: Vec<Rational> = (0..len as u64)
            .map(|i| Rational::from_integer(factorial(2 * i + 1)).recip())
            .collect();
        let inv = series_recip(&sinhc, len);
        let mut pow = vec![Rational::one()];
        pow.resize(len, Rational::zero());
        for _ in 0..dimension {
            pow = series_mul(&pow, &inv, len);
        }
        let scale = rat_powi(&rat(1, 2), dimension as i64);
        let coeffs = pow
            .into_iter()
            .enumerate()
            .map(|(m, e)| (2 * m as i64 - dimension as i64, e * &scale))
            .filter(|(_, e)| !e.is_zero())
            .collect();
        Self {
            dimension,
            coupling,
            coeffs,
            order,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Highest power of `t` retained.
    pub fn max_power(&self) -> i64 {
        2 * self.order as i64 - self.dimension as i64
    }

    /// The c-free rational multiplying `c^{p/2} t^p`.
    pub fn rational(&self, power: i64) -> Rational {
        self.coeffs.get(&power).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coeffs.iter().map(|(p, r)| (*p, r))
    }

    /// The coefficient of `t^p` as `rational * c^{p/2}`.
    pub fn coefficient(&self, power: i64) -> CoeffValue {
        CoeffValue::cq_pow(rat(power, 2)).scale(&self.rational(power))
    }

    pub fn eval(&self, t: f64) -> f64 {
        let c = to_f64(&self.coupling);
        self.coeffs
            .iter()
            .map(|(p, r)| to_f64(r) * c.powf(*p as f64 / 2.0) * t.powi(*p as i32))
            .sum()
    }
}

pub fn harmonic_trace_series(dimension: usize, coupling: Rational, order: usize) -> LaurentSeries {
    LaurentSeries::new(dimension, coupling, order)
}

/// Partition function of the `d`-dimensional oscillator `-Delta + c r^2`:
/// `[2 sinh(sqrt(c) t)]^{-d}`. Returns `+inf` below `t = 1e-12`.
pub fn harmonic_trace_eval(dimension: usize, coupling: f64, t: f64) -> f64 {
    if t < 1e-12 {
        return f64::INFINITY;
    }
    (2.0 * (coupling.sqrt() * t).sinh()).powi(-(dimension as i32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;

    #[test]
    fn three_dimensions() {
        let s = harmonic_trace_series(3, int(1), 2);
        assert_eq!(s.rational(-3), rat(1, 8));
        assert_eq!(s.rational(-1), rat(-1, 16));
        assert_eq!(s.rational(1), rat(17, 960));
        for p in [-2, 0, 2] {
            assert!(s.rational(p).is_zero());
        }
        assert_eq!(s.max_power(), 1);
    }

    #[test]
    fn one_dimension() {
        // 1/(2 sinh x) = 1/(2x) - x/12 + 7x^3/720
        let s = harmonic_trace_series(1, int(4), 2);
        assert_eq!(s.rational(-1), rat(1, 2));
        assert_eq!(s.rational(1), rat(-1, 12));
        assert_eq!(s.rational(3), rat(7, 720));
        assert_eq!(
            s.coefficient(-1).collapse_cq(&int(4)),
            CoeffValue::cq_pow(rat(1, 2)).scale(&rat(1, 8))
        );
    }

    #[test]
    fn closed_form_values() {
        assert!((harmonic_trace_eval(3, 1.0, 1.0) - 0.077_014_649).abs() < 1e-8);
        assert!((harmonic_trace_eval(1, 1.0, 1.0) - 0.425_459_064).abs() < 1e-8);
        let t: f64 = 30.0;
        assert!((harmonic_trace_eval(1, 1.0, t) / (-t).exp() - 1.0).abs() < 1e-12);
        assert!(harmonic_trace_eval(3, 1.0, 0.0).is_infinite());
        let s = harmonic_trace_series(3, int(1), 6);
        let t = 0.1;
        let exact = harmonic_trace_eval(3, 1.0, t);
        assert!((s.eval(t) - exact).abs() < 1e-6 * exact);
    }
}
