//! Polynomials in the rotation invariants of the pair `(x, y)`.
//!
//! With `z = x - y` the invariants are `a = |y|^2`, `b = y.z` and `c = |z|^2`.
//! Every coefficient `A_k(x, y)` of a radial potential is a polynomial in
//! `(a, b, c)`, and the operators of the transport recursion (`grad_x`,
//! `Delta_x`, `(x - y).grad_x`) act on such polynomials through fixed
//! chain-rule formulas in which the dimension `n` is only a parameter. This
//! keeps coefficient sizes independent of `n` and far below the Cartesian
//! expansion.

use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

use crate::exactalg::{int, rat_powi, MPoly, RadialPoly, Rational, Var};

use super::PotentialSpec;

type Exp = [u32; 3];

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct InvariantPoly {
    terms: BTreeMap<Exp, Rational>,
}

impl InvariantPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(value: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term([0, 0, 0], value);
        p
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// Generator `0 -> a`, `1 -> b`, `2 -> c`.
    pub fn generator(which: usize) -> Self {
        let mut e = [0; 3];
        e[which] = 1;
        let mut p = Self::zero();
        p.add_term(e, Rational::one());
        p
    }

    fn add_term(&mut self, e: Exp, value: Rational) {
        if value.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(value);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += value;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Rational)> {
        self.terms.iter()
    }

    /// Total degree in `(x, y)`; each invariant is quadratic.
    pub fn xy_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| 2 * (e[0] + e[1] + e[2])).max()
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * factor)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Self::one(), |acc, _| &acc * self)
    }

    fn map_terms<F>(&self, mut f: F) -> Self
    where
        F: FnMut(&Exp, &Rational, &mut Self),
    {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            f(e, c, &mut out);
        }
        out
    }

    pub fn partial(&self, which: usize) -> Self {
        self.map_terms(|e, c, out| {
            if e[which] > 0 {
                let mut e2 = *e;
                e2[which] -= 1;
                out.add_term(e2, c * int(i64::from(e[which])));
            }
        })
    }

    /// `(x - y).grad_x`, i.e. the Euler operator in `z`: `b d_b + 2 c d_c`.
    pub fn euler(&self) -> Self {
        self.map_terms(|e, c, out| {
            out.add_term(*e, c * int(i64::from(e[1] + 2 * e[2])));
        })
    }

    /// `Delta_x = a d_bb + 4 b d_bc + 4 c d_cc + 2 n d_c`.
    pub fn laplacian(&self, dim: usize) -> Self {
        let n = dim as i64;
        self.map_terms(|e, c, out| {
            let [i, j, l] = *e;
            let (j64, l64) = (i64::from(j), i64::from(l));
            if j >= 2 {
                out.add_term([i + 1, j - 2, l], c * int(j64 * (j64 - 1)));
            }
            if l >= 1 {
                out.add_term([i, j, l - 1], c * int(l64 * (4 * j64 + 4 * (l64 - 1) + 2 * n)));
            }
        })
    }

    /// `grad_x f . grad_x g = a f_b g_b + 2 b (f_b g_c + f_c g_b) + 4 c f_c g_c`.
    pub fn grad_dot(&self, other: &Self) -> Self {
        let (fb, fc) = (self.partial(1), self.partial(2));
        let (gb, gc) = (other.partial(1), other.partial(2));
        let a = Self::generator(0);
        let b = Self::generator(1);
        let c = Self::generator(2);
        let bb = &(&fb * &gb) * &a;
        let mixed = &(&(&fb * &gc) + &(&fc * &gb)) * &b;
        let cc = &(&fc * &gc) * &c;
        &(&bb + &mixed.scale(&int(2))) + &cc.scale(&int(4))
    }

    /// Solve `[(x - y).grad + k + 1] A = rhs`, equivalently `int_0^1 s^k rhs(x(s), y) ds`.
    pub fn transport_solve(&self, k: usize) -> Self {
        let k = k as i64;
        self.map_terms(|e, c, out| {
            let weight = k + 1 + i64::from(e[1]) + 2 * i64::from(e[2]);
            out.add_term(*e, c / int(weight));
        })
    }

    /// Coincidence limit `y -> x`: `b = c = 0`, `a = r^2`.
    pub fn coincidence(&self) -> RadialPoly {
        RadialPoly::from_coeffs(
            self.terms
                .iter()
                .filter(|(e, _)| e[1] == 0 && e[2] == 0)
                .map(|(e, c)| (2 * e[0], c.clone())),
        )
    }

    /// Evaluate at Cartesian points `x, y`.
    pub fn eval_xy(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let z: Vec<Rational> = x.iter().zip(y).map(|(xi, yi)| xi - yi).collect();
        let dot = |u: &[Rational], v: &[Rational]| {
            u.iter().zip(v).fold(Rational::zero(), |acc, (p, q)| acc + p * q)
        };
        let vals = [dot(y, y), dot(y, &z), dot(&z, &z)];
        self.terms
            .iter()
            .map(|(e, c)| (0..3).fold(c.clone(), |acc, i| acc * rat_powi(&vals[i], i64::from(e[i]))))
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Expand into Cartesian coordinates `x_1..x_n, y_1..y_n`.
    pub fn to_mpoly(&self, dim: usize) -> MPoly {
        let xs: Vec<MPoly> = (0..dim).map(|i| MPoly::var(dim, Var::X(i)).unwrap()).collect();
        let ys: Vec<MPoly> = (0..dim).map(|i| MPoly::var(dim, Var::Y(i)).unwrap()).collect();
        let mut gens = [MPoly::zero(dim), MPoly::zero(dim), MPoly::zero(dim)];
        for i in 0..dim {
            let z = &xs[i] - &ys[i];
            gens[0] = &gens[0] + &(&ys[i] * &ys[i]);
            gens[1] = &gens[1] + &(&ys[i] * &z);
            gens[2] = &gens[2] + &(&z * &z);
        }
        let mut cache: HashMap<(usize, u32), MPoly> = HashMap::new();
        let mut power = |which: usize, k: u32| -> MPoly {
            cache
                .entry((which, k))
                .or_insert_with(|| gens[which].pow(k))
                .clone()
        };
        let mut out = MPoly::zero(dim);
        for (e, c) in &self.terms {
            let mut term = MPoly::constant(dim, c.clone());
            for (which, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = &term * &power(which, k);
                }
            }
            out = &out + &term;
        }
        out
    }

    /// `V(|x|)` with `|x|^2 = a + 2b + c`.
    pub fn potential(potential: &PotentialSpec) -> Self {
        let rho = &(&Self::generator(0) + &Self::generator(1).scale(&int(2))) + &Self::generator(2);
        let mut out = Self::zero();
        let mut rho_pow = Self::one();
        let mut current = 0;
        for (j, c) in potential.coeffs() {
            while current < j / 2 {
                rho_pow = &rho_pow * &rho;
                current += 1;
            }
            out = &out + &rho_pow.scale(c);
        }
        out
    }
}

impl Add for &InvariantPoly {
    type Output = InvariantPoly;
    fn add(self, rhs: &InvariantPoly) -> InvariantPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &InvariantPoly {
    type Output = InvariantPoly;
    fn sub(self, rhs: &InvariantPoly) -> InvariantPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Mul for &InvariantPoly {
    type Output = InvariantPoly;
    fn mul(self, rhs: &InvariantPoly) -> InvariantPoly {
        let mut acc: HashMap<Exp, Rational> = HashMap::with_capacity(self.term_count() * rhs.term_count());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                *acc.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        InvariantPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}
