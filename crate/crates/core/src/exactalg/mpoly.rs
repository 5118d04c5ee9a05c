use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{int, RadialPoly, Rational};
use crate::error::{Error, Result};

/// A variable of the polynomial ring `Q[x_1..x_n, y_1..y_n, s]`. Indices are zero based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X(usize),
    Y(usize),
    S,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{}", i + 1),
            Var::Y(i) => write!(f, "y{}", i + 1),
            Var::S => write!(f, "s"),
        }
    }
}

/// Exact multivariate polynomial over the `2n + 1` variables `x, y, s`.
///
/// Exponent vectors are dense with layout `[x_1..x_n, y_1..y_n, s]`. The term
/// map never stores a zero coefficient, so structural equality is polynomial
/// equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    dim: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MPoly {
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, value: Rational) -> Self {
        let mut p = Self::zero(dim);
        let width = p.width();
        p.add_term(vec![0; width], value);
        p
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Rational::one())
    }

    pub fn var(dim: usize, var: Var) -> Result<Self> {
        let mut p = Self::zero(dim);
        let idx = p.index_of(var)?;
        let mut exps = vec![0; p.width()];
        exps[idx] = 1;
        p.add_term(exps, Rational::one());
        Ok(p)
    }

    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(dim);
        for (exps, c) in terms {
            if exps.len() != p.width() {
                return Err(Error::DimensionMismatch {
                    left: p.width(),
                    right: exps.len(),
                });
            }
            p.add_term(exps, c);
        }
        Ok(p)
    }

    /// `x_1^2 + ... + x_n^2`.
    pub fn rho_x(dim: usize) -> Self {
        let mut p = Self::zero(dim);
        for i in 0..dim {
            let mut exps = vec![0; p.width()];
            exps[i] = 2;
            p.add_term(exps, Rational::one());
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn width(&self) -> usize {
        2 * self.dim + 1
    }

    fn s_index(&self) -> usize {
        2 * self.dim
    }

    fn index_of(&self, var: Var) -> Result<usize> {
        match var {
            Var::X(i) if i < self.dim => Ok(i),
            Var::Y(i) if i < self.dim => Ok(self.dim + i),
            Var::S => Ok(self.s_index()),
            other => Err(Error::UnknownVariable(format!(
                "{other} in dimension {}",
                self.dim
            ))),
        }
    }

    pub(crate) fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn depends_on(&self, var: Var) -> bool {
        match self.index_of(var) {
            Ok(idx) => self.terms.keys().any(|e| e[idx] > 0),
            Err(_) => false,
        }
    }

    fn depends_on_index(&self, idx: usize) -> bool {
        self.terms.keys().any(|e| e[idx] > 0)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut acc: HashMap<Vec<u32>, Rational> = HashMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        let mut out = Self::zero(self.dim);
        out.terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(out)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero(self.dim);
        }
        Self {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * factor)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.dim);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Exact partial derivative.
    pub fn diff(&self, var: Var) -> Result<Self> {
        let idx = self.index_of(var)?;
        Ok(self.diff_index(idx))
    }

    fn diff_index(&self, idx: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            let k = e[idx];
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[idx] = k - 1;
            out.add_term(e2, c * int(i64::from(k)));
        }
        out
    }

    /// `sum_i d^2 p / dx_i^2`.
    pub fn laplacian_x(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for i in 0..self.dim {
            for (e, c) in &self.diff_index(i).diff_index(i).terms {
                out.add_term(e.clone(), c.clone());
            }
        }
        out
    }

    /// Replace every `x_i` by `y_i + s (x_i - y_i)`.
    pub fn substitute_line(&self) -> Result<Self> {
        if self.depends_on_index(self.s_index()) {
            return Err(Error::ContainsS);
        }
        let n = self.dim;
        let lines: Vec<Self> = (0..n)
            .map(|i| {
                let mut line = Self::zero(n);
                let w = line.width();
                let mut ey = vec![0; w];
                ey[n + i] = 1;
                line.add_term(ey.clone(), Rational::one());
                let mut exs = vec![0; w];
                exs[i] = 1;
                exs[2 * n] = 1;
                line.add_term(exs, Rational::one());
                let mut eys = ey;
                eys[2 * n] = 1;
                line.add_term(eys, -Rational::one());
                line
            })
            .collect();
        let mut powers: HashMap<(usize, u32), Self> = HashMap::new();
        let mut out = Self::zero(n);
        for (e, c) in &self.terms {
            let mut base = vec![0; self.width()];
            base[n..2 * n].copy_from_slice(&e[n..2 * n]);
            let mut term = Self::zero(n);
            term.add_term(base, c.clone());
            for (i, &k) in e[..n].iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let pw = powers.entry((i, k)).or_insert_with(|| lines[i].pow(k)).clone();
                term = &term * &pw;
            }
            for (te, tc) in term.terms {
                out.add_term(te, tc);
            }
        }
        Ok(out)
    }

    /// Definite integral over `s` in `[0, 1]`.
    pub fn integrate_s_unit(&self) -> Self {
        let si = self.s_index();
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            let k = e[si];
            let mut e2 = e.clone();
            e2[si] = 0;
            out.add_term(e2, c / int(i64::from(k) + 1));
        }
        out
    }

    /// Set `y = x`.
    pub fn coincidence_limit(&self) -> Result<Self> {
        if self.depends_on_index(self.s_index()) {
            return Err(Error::ResidualS);
        }
        let n = self.dim;
        let mut out = Self::zero(n);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            for i in 0..n {
                e2[i] += e2[n + i];
                e2[n + i] = 0;
            }
            out.add_term(e2, c.clone());
        }
        Ok(out)
    }

    /// Substitute a rational value for one variable.
    pub fn substitute_value(&self, var: Var, value: &Rational) -> Result<Self> {
        let idx = self.index_of(var)?;
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[idx];
            e2[idx] = 0;
            out.add_term(e2, c * super::rat_powi(value, i64::from(k)));
        }
        Ok(out)
    }

    /// Evaluate at a full point `[x_1..x_n, y_1..y_n, s]`.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.width() {
            return Err(Error::DimensionMismatch {
                left: self.width(),
                right: point.len(),
            });
        }
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (v, &k) in point.iter().zip(e) {
                if k > 0 {
                    term *= super::rat_powi(v, i64::from(k));
                }
            }
            total += term;
        }
        Ok(total)
    }

    fn homogeneous_part(&self, degree: u32) -> Self {
        Self {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == degree)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Exact division by `x_1^2 + ... + x_n^2`, or `None` when it does not divide.
    fn divide_by_rho(&self) -> Option<Self> {
        let rho = Self::rho_x(self.dim);
        let mut rest = self.clone();
        let mut quotient = Self::zero(self.dim);
        while let Some((lead, c)) = rest.terms.last_key_value() {
            if lead[0] < 2 {
                // lex-leading term not divisible by x_1^2: nonzero remainder
                return None;
            }
            let mut qe = lead.clone();
            qe[0] -= 2;
            let c = c.clone();
            let mut q_term = Self::zero(self.dim);
            q_term.add_term(qe, c);
            rest = &rest - &(&q_term * &rho);
            quotient = &quotient + &q_term;
        }
        Some(quotient)
    }

    /// Rewrite `p(x)` as `u(|x|)`, failing unless `p` is a polynomial in `|x|^2`.
    pub fn radial_reduce(&self) -> Result<RadialPoly> {
        let n = self.dim;
        if (n..self.width()).any(|idx| self.depends_on_index(idx)) {
            return Err(Error::NotRadial("depends on y or s".into()));
        }
        let mut rest = self.clone();
        let mut out = RadialPoly::zero();
        while let Some(d) = rest.total_degree() {
            if d % 2 == 1 {
                return Err(Error::NotRadial(format!("odd homogeneous degree {d}")));
            }
            let top = rest.homogeneous_part(d);
            let mut q = top.clone();
            for _ in 0..d / 2 {
                q = q
                    .divide_by_rho()
                    .ok_or_else(|| Error::NotRadial(format!("degree-{d} component not a power of |x|^2")))?;
            }
            let c = q.coeff(&vec![0; self.width()]);
            out = &out + &RadialPoly::monomial(d, c);
            rest = &rest - &top;
        }
        Ok(out)
    }
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        self.checked_add(rhs).expect("MPoly dimension mismatch")
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self.checked_sub(rhs).expect("MPoly dimension mismatch")
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.checked_mul(rhs).expect("MPoly dimension mismatch")
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let n = self.dim;
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.abs();
            let mut factors = Vec::new();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let name = if i < n {
                    format!("x{}", i + 1)
                } else if i < 2 * n {
                    format!("y{}", i - n + 1)
                } else {
                    "s".to_string()
                };
                factors.push(if k == 1 { name } else { format!("{name}^{k}") });
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    fn x(n: usize, i: usize) -> MPoly {
        MPoly::var(n, Var::X(i)).unwrap()
    }
    fn y(n: usize, i: usize) -> MPoly {
        MPoly::var(n, Var::Y(i)).unwrap()
    }
    fn s(n: usize) -> MPoly {
        MPoly::var(n, Var::S).unwrap()
    }

    #[test]
    fn cancellation_and_products() {
        let n = 2;
        let sum = &(&x(n, 0) + &y(n, 0)) + &(&x(n, 0) - &y(n, 0));
        assert_eq!(sum, x(n, 0).scale(&int(2)));
        assert_eq!(&x(n, 0) * &x(n, 0), x(n, 0).pow(2));
        assert_eq!(x(n, 0).pow(2).total_degree(), Some(2));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let err = x(1, 0).checked_add(&x(2, 0)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { left: 1, right: 2 });
        assert!(MPoly::var(2, Var::X(2)).is_err());
    }

    #[test]
    fn partial_derivatives() {
        let n = 2;
        let p = &x(n, 0).pow(2) * &y(n, 1);
        let d = p.diff(Var::X(0)).unwrap();
        assert_eq!(d, (&x(n, 0) * &y(n, 1)).scale(&int(2)));
        assert!(x(n, 0).pow(3).diff(Var::X(1)).unwrap().is_zero());
        assert!(matches!(p.diff(Var::Y(5)), Err(Error::UnknownVariable(_))));
    }

    #[test]
    fn laplacian_of_rho_and_rho_squared() {
        let rho = MPoly::rho_x(3);
        assert_eq!(rho.laplacian_x(), MPoly::constant(3, int(6)));
        // hand expansion: Delta (r^2)^2 = 4 r^2 + 2 n r^2 = 20 r^2 for n = 3
        assert_eq!(rho.pow(2).laplacian_x(), rho.scale(&int(20)));
        assert!(MPoly::constant(3, rat(7, 2)).laplacian_x().is_zero());
    }

    #[test]
    fn line_substitution() {
        let n = 1;
        let line = x(n, 0).substitute_line().unwrap();
        let expected = &y(n, 0) + &(&s(n) * &(&x(n, 0) - &y(n, 0)));
        assert_eq!(line, expected);

        let sq = x(n, 0).pow(2).substitute_line().unwrap();
        assert_eq!(sq.substitute_value(Var::S, &int(1)).unwrap(), x(n, 0).pow(2));
        assert_eq!(sq.substitute_value(Var::S, &int(0)).unwrap(), y(n, 0).pow(2));
        assert_eq!(line.substitute_line(), Err(Error::ContainsS));
    }

    #[test]
    fn unit_interval_integration() {
        let n = 1;
        assert_eq!(s(n).integrate_s_unit(), MPoly::constant(n, rat(1, 2)));
        let p = &s(n).pow(2) * &x(n, 0);
        assert_eq!(p.integrate_s_unit(), x(n, 0).scale(&rat(1, 3)));
        let line = x(n, 0).substitute_line().unwrap().integrate_s_unit();
        assert_eq!(line, (&x(n, 0) + &y(n, 0)).scale(&rat(1, 2)));
    }

    #[test]
    fn coincidence() {
        let n = 1;
        let diff = &x(n, 0) - &y(n, 0);
        assert!(diff.pow(2).coincidence_limit().unwrap().is_zero());
        assert_eq!((&x(n, 0) * &y(n, 0)).coincidence_limit().unwrap(), x(n, 0).pow(2));
        assert_eq!(s(n).coincidence_limit(), Err(Error::ResidualS));
        // V(x) - int_0^1 V(x(s)) ds vanishes on the diagonal
        let v = x(n, 0).pow(2);
        let a1 = &v - &v.substitute_line().unwrap().integrate_s_unit();
        assert!(a1.coincidence_limit().unwrap().is_zero());
    }

    #[test]
    fn radial_reduction() {
        let rho = MPoly::rho_x(3);
        assert_eq!(rho.radial_reduce().unwrap(), RadialPoly::monomial(2, int(1)));
        assert!(matches!(x(3, 0).radial_reduce(), Err(Error::NotRadial(_))));
        let p = &rho.pow(2) + &MPoly::constant(3, int(5));
        let expected = &RadialPoly::monomial(4, int(1)) + &RadialPoly::constant(int(5));
        assert_eq!(p.radial_reduce().unwrap(), expected);
        // x1^2 alone is even but not radial in dimension 2
        assert!(matches!(x(2, 0).pow(2).radial_reduce(), Err(Error::NotRadial(_))));
        assert!(matches!(y(2, 0).radial_reduce(), Err(Error::NotRadial(_))));
    }

    #[test]
    fn display_is_readable() {
        let p = &x(2, 0).pow(2).scale(&rat(-1, 3)) + &y(2, 1);
        assert_eq!(p.to_string(), "-1/3*x1^2 + y2");
    }
}
