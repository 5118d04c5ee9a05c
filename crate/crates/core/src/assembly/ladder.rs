//! The coefficient ladder `Omega -> D -> H -> T -> a_j`.
//!
//! Writing `V = c_q r^q + W(r)` and substituting `s = t c_q r^q`, the radial
//! integral of `r^{n-1} A_k(r) e^{-tV}` becomes a sum of Gamma functions:
//!
//! ```text
//! e^{-tW} = sum_j t^{j/q} H_j(s),
//! H_j(s)  = sum_{l=ceil(j/q)}^{j} (-1)^l / l! D^l_{lq-j} (s/c_q)^{(lq-j)/q},
//! T_p^{n,k} = (1/q) sum_j sum_l (-1)^l/l! Omega^k_{gamma_k-p+j} D^l_{lq-j}
//!             c_q^{(p-gamma_k-lq)/q} Gamma((n+gamma_k-p+lq)/q),
//! a_j = sum_v T^{n,v}_{j+gamma_v-vq}.
//! ```

use num_integer::Integer;
use num_traits::{One, Zero};

use super::CoeffValue;
use crate::error::{Error, Result};
use crate::exactalg::{factorial, int, rat, RadialPoly, Rational};
use crate::parametrix::{ParametrixSet, PotentialSpec};

/// Degree bound of `A_k(r)`: `floor(2k/3)(q+2) - 2k` for `k >= 2`, zero below.
pub fn gamma_k(k: usize, q: u32) -> u32 {
    if k < 2 {
        return 0;
    }
    let k = k as u32;
    (2 * k / 3) * (q + 2) - 2 * k
}

/// First t-step `vq - gamma_v` at which `A_v` can contribute.
pub fn first_step(v: usize, q: u32) -> u64 {
    v as u64 * q as u64 - gamma_k(v, q) as u64
}

/// Largest `v` with `vq - gamma_v <= j`.
pub fn v_max(j: usize, q: u32) -> usize {
    let mut v = 0;
    while first_step(v + 1, q) <= j as u64 {
        v += 1;
    }
    v
}

/// Parametrix depth needed for orders `0..=order`: `3 floor(J/(q+2)) + 2`.
pub fn depth_for_order(order: usize, q: u32) -> usize {
    3 * (order / (q as usize + 2)) + 2
}

/// Coefficient of `u^l` in `(c_0 + c_1 u + ... + c_{q-1} u^{q-1})^m`.
pub fn multinomial_d(m: usize, l: i64, potential: &PotentialSpec) -> Result<Rational> {
    Ladder::new(potential, m).d(m, l)
}

/// `H_j(s)` as `(coefficient, s-exponent)` pairs.
pub fn h_poly(j: usize, potential: &PotentialSpec) -> Vec<(CoeffValue, Rational)> {
    Ladder::new(potential, j).h_poly(j)
}

/// Coefficients `Omega_0..Omega_gamma` of `A_k(r)`, zero-padded.
pub fn omega(diag_k: &RadialPoly, gamma: u32) -> Result<Vec<Rational>> {
    if let Some(degree) = diag_k.degree() {
        if degree > gamma {
            return Err(Error::DegreeExceedsGamma {
                k: usize::MAX,
                degree,
                gamma,
            });
        }
    }
    Ok((0..=gamma).map(|l| diag_k.coeff(l)).collect())
}

/// Exact multinomial table for the sub-leading part of a potential.
#[derive(Clone, Debug)]
pub struct Ladder {
    n: usize,
    q: u32,
    /// `powers[m][l]` = `D^m_l`.
    powers: Vec<Vec<Rational>>,
    inv_factorials: Vec<Rational>,
}

impl Ladder {
    /// Table sized for `D^m` with `m <= m_max`.
    pub fn new(potential: &PotentialSpec, m_max: usize) -> Self {
        let q = potential.degree();
        let lower: Vec<Rational> = (0..q).map(|j| potential.coeff(j)).collect();
        let mut powers = vec![vec![Rational::one()]];
        for _ in 0..m_max {
            let prev = powers.last().expect("nonempty");
            let mut next = vec![Rational::zero(); prev.len() + lower.len() - 1];
            for (i, a) in prev.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in lower.iter().enumerate() {
                    if !b.is_zero() {
                        next[i + j] += a * b;
                    }
                }
            }
            powers.push(next);
        }
        let inv_factorials = (0..=m_max as u64)
            .map(|m| Rational::from_integer(factorial(m)).recip())
            .collect();
        Self {
            n: potential.dimension(),
            q,
            powers,
            inv_factorials,
        }
    }

    pub fn m_max(&self) -> usize {
        self.powers.len() - 1
    }

    pub fn d(&self, m: usize, l: i64) -> Result<Rational> {
        let row = self
            .powers
            .get(m)
            .ok_or_else(|| Error::OutOfRange(format!("D^{m} beyond table size {}", self.m_max())))?;
        let top = (self.q as i64 - 1) * m as i64;
        if l < 0 || l > top {
            return Err(Error::OutOfRange(format!("D^{m}_{l} needs 0 <= l <= {top}")));
        }
        Ok(row[l as usize].clone())
    }

    /// `(-1)^l / l! D^l_{lq-j}` for `ceil(j/q) <= l <= j`; the `j = 0` term is `l = 0`.
    fn h_terms(&self, j: usize) -> Result<Vec<(usize, Rational)>> {
        let q = self.q as usize;
        let mut out = Vec::new();
        for l in j.div_ceil(q)..=j {
            let d = self.d(l, (l * q - j) as i64)?;
            if d.is_zero() {
                continue;
            }
            let sign = if l % 2 == 0 { int(1) } else { int(-1) };
            out.push((l, sign * &self.inv_factorials[l] * d));
        }
        Ok(out)
    }

    pub fn h_poly(&self, j: usize) -> Vec<(CoeffValue, Rational)> {
        let q = self.q as i64;
        self.h_terms(j)
            .expect("table covers l <= j")
            .into_iter()
            .map(|(l, c)| {
                let e = rat(l as i64 * q - j as i64, q);
                let value = CoeffValue::cq_pow(-e.clone()).scale(&c);
                (value, e)
            })
            .collect()
    }

    /// `T_p^{n,k}` for the padded coefficient list `omegas` (length `gamma_k + 1`).
    pub fn t_coeff(&self, p: usize, omegas: &[Rational]) -> Result<CoeffValue> {
        let gamma = omegas.len() as i64 - 1;
        let (q, n, p) = (self.q as i64, self.n as i64, p as i64);
        let mut out = CoeffValue::zero();
        for j in (p - gamma).max(0)..=p {
            let omega = &omegas[(gamma - p + j) as usize];
            if omega.is_zero() {
                continue;
            }
            for (l, c) in self.h_terms(j as usize)? {
                let l = l as i64;
                let arg = rat(n + gamma - p + l * q, q);
                let g = CoeffValue::gamma(&arg)?;
                let cq = CoeffValue::cq_pow(rat(p - gamma - l * q, q));
                let factor = omega * c / int(q);
                out = &out + &(&g * &cq).scale(&factor);
            }
        }
        Ok(out)
    }
}

/// `T_p^{n,k}` with a fresh table.
pub fn t_coeff(p: usize, potential: &PotentialSpec, omegas: &[Rational]) -> Result<CoeffValue> {
    Ladder::new(potential, p).t_coeff(p, omegas)
}

pub(crate) fn padded_omegas(set: &ParametrixSet, k: usize) -> Result<Vec<Rational>> {
    let q = set.potential().degree();
    omega(&set.diag()[k], gamma_k(k, q)).map_err(|e| match e {
        Error::DegreeExceedsGamma { degree, gamma, .. } => Error::DegreeExceedsGamma { k, degree, gamma },
        other => other,
    })
}

/// `a_j` from a parametrix of sufficient depth.
pub fn a_coeff(j: usize, set: &ParametrixSet) -> Result<CoeffValue> {
    // every T index is j - first_step(v) <= j
    let ladder = Ladder::new(set.potential(), j);
    a_coeff_with(j, set, &ladder)
}

pub(crate) fn a_coeff_with(j: usize, set: &ParametrixSet, ladder: &Ladder) -> Result<CoeffValue> {
    let q = set.potential().degree();
    let top = v_max(j, q);
    if set.depth() < top {
        return Err(Error::InsufficientDepth {
            needed: top,
            available: set.depth(),
        });
    }
    let mut out = CoeffValue::zero();
    for v in 0..=top {
        let p = j as i64 + gamma_k(v, q) as i64 - (v as i64) * q as i64;
        if p < 0 {
            continue;
        }
        let omegas = padded_omegas(set, v)?;
        out = &out + &ladder.t_coeff(p as usize, &omegas)?;
    }
    if j.is_odd() && !out.is_zero() {
        return Err(Error::Internal(format!(
            "odd coefficient a_{j} = {out} is nonzero"
        )));
    }
    Ok(out)
}
