use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{to_f64, RadialPoly, Rational};

/// Radial polynomial potential `V(r) = sum_j c_j r^j` on `R^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PotentialSpec {
    dimension: usize,
    coeffs: BTreeMap<u32, Rational>,
    degree: u32,
}

impl PotentialSpec {
    /// Validates `c_q > 0`, `q >= 2`, `c_0 >= 0` and that only even powers occur.
    pub fn new<I>(dimension: usize, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, Rational)>,
    {
        if dimension == 0 {
            return Err(Error::InvalidPotential("dimension must be positive".into()));
        }
        let mut map: BTreeMap<u32, Rational> = BTreeMap::new();
        for (j, c) in coeffs {
            *map.entry(j).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        if let Some(&odd) = map.keys().find(|j| *j % 2 == 1) {
            return Err(Error::OddPower(odd));
        }
        let Some((&degree, leading)) = map.last_key_value() else {
            return Err(Error::InvalidPotential("potential is identically zero".into()));
        };
        if !leading.is_positive() {
            return Err(Error::NonPositiveLeading(leading.to_string()));
        }
        if degree < 2 {
            return Err(Error::InvalidPotential(
                "constant potential: degree must be at least 2".into(),
            ));
        }
        if map.get(&0).is_some_and(|c0| c0.is_negative()) {
            return Err(Error::InvalidPotential("c_0 must be nonnegative".into()));
        }
        Ok(Self {
            dimension,
            coeffs: map,
            degree,
        })
    }

    /// `V(r) = c r^2`.
    pub fn harmonic(dimension: usize, c: Rational) -> Result<Self> {
        Self::new(dimension, [(2, c)])
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// The growth degree `q`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeff(&self, j: u32) -> Rational {
        self.coeffs.get(&j).cloned().unwrap_or_else(Rational::zero)
    }

    /// `c_q`.
    pub fn leading(&self) -> &Rational {
        &self.coeffs[&self.degree]
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.coeffs.iter().map(|(j, c)| (*j, c))
    }

    pub fn with_dimension(&self, dimension: usize) -> Result<Self> {
        Self::new(dimension, self.coeffs.clone())
    }

    pub fn as_radial(&self) -> RadialPoly {
        RadialPoly::from_coeffs(self.coeffs.clone())
    }

    pub fn eval_f64(&self, r: f64) -> f64 {
        let r2 = r * r;
        let mut acc = 0.0;
        for d in (0..=self.degree / 2).rev() {
            acc = acc * r2 + self.coeffs.get(&(2 * d)).map(to_f64).unwrap_or(0.0);
        }
        acc
    }

    /// `Some(c)` when the potential is exactly `c r^2`.
    pub fn harmonic_coupling(&self) -> Option<&Rational> {
        (self.degree == 2 && self.coeffs.len() == 1).then(|| self.leading())
    }

    /// Sample `V` on `[0, r_max]` and return the minimum when it is negative.
    ///
    /// The expansion algebra itself does not need `V >= 0`; only the
    /// trace-class reading of the result does, so callers treat this as a warning.
    pub fn negative_minimum(&self, r_max: f64, samples: usize) -> Option<f64> {
        let samples = samples.max(2);
        let min = (0..samples)
            .map(|i| self.eval_f64(r_max * i as f64 / (samples - 1) as f64))
            .fold(f64::INFINITY, f64::min);
        (min < 0.0).then_some(min)
    }

    /// Smallest `r` with `V(r) >= level`, found by doubling then bisection.
    pub fn radius_for_level(&self, level: f64) -> f64 {
        let mut hi = 1.0;
        while self.eval_f64(hi) < level {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.eval_f64(mid) >= level {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}

impl fmt::Display for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, (j, c)) in self.coeffs.iter().enumerate() {
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            match j {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => write!(f, "r^{j}")?,
                _ => write!(f, "{mag}*r^{j}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, rat};

    #[test]
    fn validation() {
        let v = PotentialSpec::new(3, [(0, int(1)), (2, int(2)), (4, int(3))]).unwrap();
        assert_eq!(v.degree(), 4);
        assert_eq!(v.leading(), &int(3));
        assert_eq!(v.to_string(), "1 + 2*r^2 + 3*r^4");
        assert_eq!(PotentialSpec::new(3, [(3, int(1))]), Err(Error::OddPower(3)));
        assert!(matches!(
            PotentialSpec::new(3, [(4, int(-1)), (0, int(1))]),
            Err(Error::NonPositiveLeading(_))
        ));
        assert!(PotentialSpec::new(3, [(0, int(2))]).is_err());
        assert!(PotentialSpec::new(3, [(0, int(-2)), (2, int(1))]).is_err());
        assert!(PotentialSpec::new(0, [(2, int(1))]).is_err());
        assert!(
            PotentialSpec::new(1, [(2, int(1)), (4, int(0))])
                .unwrap()
                .degree()
                == 2
        );
    }

    #[test]
    fn numeric_helpers() {
        let v = PotentialSpec::new(1, [(0, int(1)), (2, rat(-3, 1)), (4, int(1))]).unwrap();
        assert!((v.eval_f64(2.0) - 5.0).abs() < 1e-12);
        assert!(v.negative_minimum(3.0, 301).is_some());
        let h = PotentialSpec::harmonic(3, int(1)).unwrap();
        assert!(h.negative_minimum(3.0, 301).is_none());
        assert!((h.radius_for_level(250.0) - 250f64.sqrt()).abs() < 1e-9);
        assert_eq!(h.harmonic_coupling(), Some(&int(1)));
        assert_eq!(v.harmonic_coupling(), None);
    }
}
