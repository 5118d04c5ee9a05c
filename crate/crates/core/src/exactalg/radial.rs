use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{int, rat_powi, to_f64, MPoly, Rational};

/// Exact univariate polynomial in the radial coordinate `r`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RadialPoly {
    coeffs: BTreeMap<u32, Rational>,
    degree: Option<u32>,
}

impl RadialPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(value: Rational) -> Self {
        Self::monomial(0, value)
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn monomial(degree: u32, value: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(degree, value);
        p
    }

    pub fn from_coeffs<I: IntoIterator<Item = (u32, Rational)>>(coeffs: I) -> Self {
        let mut p = Self::zero();
        for (d, c) in coeffs {
            p.add_term(d, c);
        }
        p
    }

    fn add_term(&mut self, degree: u32, value: Rational) {
        if value.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(degree).or_insert_with(Rational::zero);
        *slot += value;
        if slot.is_zero() {
            self.coeffs.remove(&degree);
        }
        self.degree = self.coeffs.keys().next_back().copied();
    }

    /// Highest power with a nonzero coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, degree: u32) -> Rational {
        self.coeffs.get(&degree).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.coeffs.iter().map(|(d, c)| (*d, c))
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.keys().all(|d| d % 2 == 0)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self::from_coeffs(self.terms().map(|(d, c)| (d, c * factor)))
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.terms()
                .filter(|(d, _)| *d > 0)
                .map(|(d, c)| (d - 1, c * int(i64::from(d)))),
        )
    }

    /// `u(lambda r)`.
    pub fn rescale_argument(&self, lambda: &Rational) -> Self {
        Self::from_coeffs(self.terms().map(|(d, c)| (d, c * rat_powi(lambda, i64::from(d)))))
    }

    pub fn eval(&self, r: &Rational) -> Rational {
        self.terms()
            .map(|(d, c)| c * rat_powi(r, i64::from(d)))
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Horner evaluation in floating point.
    pub fn eval_f64(&self, r: f64) -> f64 {
        let Some(top) = self.degree else {
            return 0.0;
        };
        let mut acc = 0.0;
        for d in (0..=top).rev() {
            acc = acc * r + self.coeffs.get(&d).map(to_f64).unwrap_or(0.0);
        }
        acc
    }

    /// Expand `u(|x|)` as a Cartesian polynomial in `x_1..x_n`. Only even powers are allowed.
    pub fn to_cartesian(&self, dim: usize) -> Option<MPoly> {
        if !self.is_even() {
            return None;
        }
        let rho = MPoly::rho_x(dim);
        let mut out = MPoly::zero(dim);
        for (d, c) in self.terms() {
            out = &out + &rho.pow(d / 2).scale(c);
        }
        Some(out)
    }
}

impl Add for &RadialPoly {
    type Output = RadialPoly;
    fn add(self, rhs: &RadialPoly) -> RadialPoly {
        let mut out = self.clone();
        for (d, c) in rhs.terms() {
            out.add_term(d, c.clone());
        }
        out
    }
}

impl Sub for &RadialPoly {
    type Output = RadialPoly;
    fn sub(self, rhs: &RadialPoly) -> RadialPoly {
        let mut out = self.clone();
        for (d, c) in rhs.terms() {
            out.add_term(d, -c);
        }
        out
    }
}

impl Mul for &RadialPoly {
    type Output = RadialPoly;
    fn mul(self, rhs: &RadialPoly) -> RadialPoly {
        let mut acc: BTreeMap<u32, Rational> = BTreeMap::new();
        for (da, ca) in self.terms() {
            for (db, cb) in rhs.terms() {
                *acc.entry(da + db).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        RadialPoly::from_coeffs(acc)
    }
}

impl Neg for &RadialPoly {
    type Output = RadialPoly;
    fn neg(self) -> RadialPoly {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for RadialPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (d, c)) in self.terms().enumerate() {
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
            match d {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => write!(f, "r^{d}")?,
                _ => write!(f, "{mag}*r^{d}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    #[test]
    fn degree_tracks_cancellation() {
        let p = RadialPoly::from_coeffs([(0, int(1)), (4, int(3))]);
        assert_eq!(p.degree(), Some(4));
        let q = &p - &RadialPoly::monomial(4, int(3));
        assert_eq!(q.degree(), Some(0));
        assert_eq!((&q - &q).degree(), None);
    }

    #[test]
    fn evaluation_and_display() {
        let p = RadialPoly::from_coeffs([(0, int(1)), (2, rat(-1, 2)), (4, int(3))]);
        assert_eq!(p.eval(&int(2)), int(1) - int(2) + int(48));
        assert!((p.eval_f64(2.0) - 47.0).abs() < 1e-12);
        assert_eq!(p.to_string(), "1 - 1/2*r^2 + 3*r^4");
        assert_eq!(
            p.derivative(),
            RadialPoly::from_coeffs([(1, int(-1)), (3, int(12))])
        );
    }

    #[test]
    fn cartesian_round_trip() {
        let u = RadialPoly::from_coeffs([(0, int(5)), (2, rat(2, 3)), (6, int(-1))]);
        let p = u.to_cartesian(3).unwrap();
        assert_eq!(p.radial_reduce().unwrap(), u);
        assert!(RadialPoly::monomial(3, int(1)).to_cartesian(2).is_none());
    }
}
