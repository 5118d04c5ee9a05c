use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{int, rat, rat_floor, rat_powi, to_f64, Rational};

/// Key of one atom: `pi^{h/2} * Gamma(rho) * c_q^e`.
///
/// `rho` lies in `(0, 1]`; `rho == 1` means no Gamma factor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomKey {
    pub pi_half_power: i64,
    pub gamma_residue: Rational,
    pub cq_exponent: Rational,
}

impl AtomKey {
    pub fn plain() -> Self {
        Self {
            pi_half_power: 0,
            gamma_residue: Rational::one(),
            cq_exponent: Rational::zero(),
        }
    }

    pub fn has_gamma(&self) -> bool {
        !self.gamma_residue.is_one()
    }
}

/// One term `rational * pi^{h/2} * Gamma(rho) * c_q^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub rational: Rational,
    pub key: AtomKey,
}

/// Exact finite sum of atoms in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CoeffValue {
    atoms: BTreeMap<AtomKey, Rational>,
}

impl CoeffValue {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rational(value: Rational) -> Self {
        let mut out = Self::zero();
        out.push(AtomKey::plain(), value);
        out
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    /// `pi^{h/2}`.
    pub fn pi_half(h: i64) -> Self {
        let mut out = Self::zero();
        out.push(
            AtomKey {
                pi_half_power: h,
                ..AtomKey::plain()
            },
            Rational::one(),
        );
        out
    }

    /// `c_q^e`.
    pub fn cq_pow(e: Rational) -> Self {
        let mut out = Self::zero();
        out.push(
            AtomKey {
                cq_exponent: e,
                ..AtomKey::plain()
            },
            Rational::one(),
        );
        out
    }

    /// `Gamma(z)` for rational `z > 0`, reduced to `rational * Gamma(rho)` with `rho` in `(0, 1]`.
    pub fn gamma(z: &Rational) -> Result<Self> {
        if !z.is_positive() {
            return Err(Error::NonPositiveGamma(z.to_string()));
        }
        let one = Rational::one();
        let mut factor = Rational::one();
        let mut rho = z.clone();
        while rho > one {
            rho -= &one;
            factor *= &rho;
        }
        let mut key = AtomKey::plain();
        if rho == rat(1, 2) {
            key.pi_half_power = 1;
        } else if !rho.is_one() {
            key.gamma_residue = rho;
        }
        let mut out = Self::zero();
        out.push(key, factor);
        Ok(out)
    }

    /// `1 / Gamma(n/2)`, always representable because `n/2` is an integer or half-integer.
    pub fn inv_gamma_half(n: usize) -> Self {
        let g = Self::gamma(&rat(n as i64, 2)).expect("n/2 is positive");
        let (key, value) = g.atoms.into_iter().next().expect("single atom");
        let mut out = Self::zero();
        out.push(
            AtomKey {
                pi_half_power: -key.pi_half_power,
                ..AtomKey::plain()
            },
            value.recip(),
        );
        out
    }

    fn push(&mut self, key: AtomKey, value: Rational) {
        if value.is_zero() {
            return;
        }
        let slot = self.atoms.entry(key.clone()).or_insert_with(Rational::zero);
        *slot += value;
        if slot.is_zero() {
            self.atoms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        self.atoms.iter().map(|(k, v)| Atom {
            rational: v.clone(),
            key: k.clone(),
        })
    }

    pub fn from_atoms<I: IntoIterator<Item = Atom>>(atoms: I) -> Result<Self> {
        let mut out = Self::zero();
        for a in atoms {
            let rho = &a.key.gamma_residue;
            if !rho.is_positive() || rho > &Rational::one() || rho == &rat(1, 2) {
                return Err(Error::OutOfRange(format!("gamma residue {rho}")));
            }
            out.push(a.key, a.rational);
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Self {
            atoms: self.atoms.iter().map(|(k, v)| (k.clone(), v * factor)).collect(),
        }
    }

    /// Product; fails when two Gamma factors would meet, since `Gamma(a) Gamma(b)` has no atom form.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero();
        for (ka, va) in &self.atoms {
            for (kb, vb) in &other.atoms {
                if ka.has_gamma() && kb.has_gamma() {
                    return Err(Error::GammaProduct);
                }
                let gamma_residue = if ka.has_gamma() {
                    ka.gamma_residue.clone()
                } else {
                    kb.gamma_residue.clone()
                };
                let key = AtomKey {
                    pi_half_power: ka.pi_half_power + kb.pi_half_power,
                    gamma_residue,
                    cq_exponent: &ka.cq_exponent + &kb.cq_exponent,
                };
                out.push(key, va * vb);
            }
        }
        Ok(out)
    }

    /// Fold the integer part of each `c_q` exponent into the rational using the value of `c_q`.
    /// When `c_q = 1` the power disappears.
    pub fn collapse_cq(&self, cq: &Rational) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.atoms {
            let whole = rat_floor(&k.cq_exponent);
            let mut key = k.clone();
            key.cq_exponent = &k.cq_exponent - int(whole);
            if cq.is_one() {
                key.cq_exponent = Rational::zero();
            }
            out.push(key, v * rat_powi(cq, whole));
        }
        out
    }

    /// Floating-point value at the given `c_q`, atoms summed in canonical order.
    pub fn eval(&self, cq: f64) -> f64 {
        let pi = std::f64::consts::PI;
        self.atoms
            .iter()
            .map(|(k, v)| {
                let mut x = to_f64(v);
                if k.pi_half_power != 0 {
                    x *= pi.powf(k.pi_half_power as f64 / 2.0);
                }
                if k.has_gamma() {
                    x *= statrs::function::gamma::gamma(to_f64(&k.gamma_residue));
                }
                if !k.cq_exponent.is_zero() {
                    x *= cq.powf(to_f64(&k.cq_exponent));
                }
                x
            })
            .sum::<f64>()
            // an empty sum is -0.0
            + 0.0
    }
}

impl Add for &CoeffValue {
    type Output = CoeffValue;
    fn add(self, rhs: &CoeffValue) -> CoeffValue {
        let mut out = self.clone();
        for (k, v) in &rhs.atoms {
            out.push(k.clone(), v.clone());
        }
        out
    }
}

impl Sub for &CoeffValue {
    type Output = CoeffValue;
    fn sub(self, rhs: &CoeffValue) -> CoeffValue {
        self + &(-rhs)
    }
}

impl Neg for &CoeffValue {
    type Output = CoeffValue;
    fn neg(self) -> CoeffValue {
        self.scale(&int(-1))
    }
}

/// Panics on a Gamma-Gamma product; use `checked_mul` when that can happen.
impl Mul for &CoeffValue {
    type Output = CoeffValue;
    fn mul(self, rhs: &CoeffValue) -> CoeffValue {
        self.checked_mul(rhs).expect("product of two Gamma atoms")
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rational)?;
        let k = &self.key;
        match k.pi_half_power {
            0 => {}
            2 => write!(f, "*pi")?,
            h if h % 2 == 0 => write!(f, "*pi^{}", h / 2)?,
            h => write!(f, "*pi^({h}/2)")?,
        }
        if k.has_gamma() {
            write!(f, "*Gamma({})", k.gamma_residue)?;
        }
        if !k.cq_exponent.is_zero() {
            if k.cq_exponent.is_integer() && k.cq_exponent.is_positive() {
                write!(f, "*cq^{}", k.cq_exponent)?;
            } else {
                write!(f, "*cq^({})", k.cq_exponent)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for CoeffValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, a) in self.atoms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_canonical_forms() {
        // Gamma(3/2) = pi^{1/2} / 2
        assert_eq!(
            CoeffValue::gamma(&rat(3, 2)).unwrap(),
            CoeffValue::pi_half(1).scale(&rat(1, 2))
        );
        assert_eq!(CoeffValue::gamma(&int(4)).unwrap(), CoeffValue::rational(int(6)));
        assert_eq!(CoeffValue::gamma(&int(1)).unwrap(), CoeffValue::one());
        let g = CoeffValue::gamma(&rat(9, 4)).unwrap();
        let atom = g.atoms().next().unwrap();
        assert_eq!(atom.rational, rat(5, 16));
        assert_eq!(atom.key.gamma_residue, rat(1, 4));
        assert!(CoeffValue::gamma(&int(0)).is_err());
        assert!(CoeffValue::gamma(&rat(-1, 2)).is_err());
    }

    #[test]
    fn gamma_recurrence_exhaustive() {
        // Gamma(z + 1) == z Gamma(z) for every z = a/d, d | q, q <= 8
        for d in 1..=8i64 {
            for a in 1..=4 * d {
                let z = rat(a, d);
                let lhs = CoeffValue::gamma(&(&z + int(1))).unwrap();
                let rhs = CoeffValue::gamma(&z).unwrap().scale(&z);
                assert_eq!(lhs, rhs, "z = {z}");
            }
        }
    }

    #[test]
    fn inverse_gamma_half() {
        assert_eq!(
            CoeffValue::inv_gamma_half(3),
            CoeffValue::pi_half(-1).scale(&int(2))
        );
        assert_eq!(CoeffValue::inv_gamma_half(1), CoeffValue::pi_half(-1));
        assert_eq!(CoeffValue::inv_gamma_half(6), CoeffValue::rational(rat(1, 2)));
        for n in 1..8 {
            let prod = &CoeffValue::inv_gamma_half(n) * &CoeffValue::gamma(&rat(n as i64, 2)).unwrap();
            assert_eq!(prod, CoeffValue::one());
        }
    }

    #[test]
    fn products_and_merging() {
        let g = CoeffValue::gamma(&rat(1, 4)).unwrap();
        assert_eq!(g.checked_mul(&g), Err(Error::GammaProduct));
        let x = &CoeffValue::cq_pow(rat(-1, 2)) * &g;
        let sum = &x + &x.scale(&int(3));
        assert_eq!(sum, x.scale(&int(4)));
        assert!((&sum - &sum).is_zero());
        let expected = 4.0 * statrs::function::gamma::gamma(0.25) / 3f64.sqrt();
        assert!((sum.eval(3.0) - expected).abs() < 1e-13 * expected);
        assert_eq!(x.to_string(), "1*Gamma(1/4)*cq^(-1/2)");
    }

    #[test]
    fn collapse() {
        let v = &CoeffValue::cq_pow(rat(-3, 2)).scale(&int(5)) + &CoeffValue::cq_pow(rat(1, 2));
        let c = v.collapse_cq(&int(4));
        // 5 c^{-2} c^{1/2} + c^{1/2}
        assert_eq!(c, CoeffValue::cq_pow(rat(1, 2)).scale(&rat(21, 16)));
        assert!((v.eval(4.0) - c.eval(4.0)).abs() < 1e-14);
        assert_eq!(v.collapse_cq(&int(1)), CoeffValue::rational(int(6)));
    }

    #[test]
    fn rejects_bad_atoms() {
        let bad = Atom {
            rational: int(1),
            key: AtomKey {
                gamma_residue: rat(3, 2),
                ..AtomKey::plain()
            },
        };
        assert!(CoeffValue::from_atoms([bad]).is_err());
    }
}
