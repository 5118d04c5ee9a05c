//! The transport recursion carried out directly on Cartesian polynomials in
//! `(x, y, s)`: line substitution `x(s) = y + s (x - y)`, multiplication by
//! `s^k` and integration over `[0, 1]`.
//!
//! Exponentially more expensive than the invariant route, so it serves as the
//! reference implementation for small dimensions and depths.

use crate::error::{Error, Result};
use crate::exactalg::{MPoly, RadialPoly, Rational, Var};

use super::{check_diagonal, PotentialSpec};

pub fn potential_mpoly(potential: &PotentialSpec) -> MPoly {
    let n = potential.dimension();
    potential
        .as_radial()
        .to_cartesian(n)
        .expect("validated potentials are even")
}

/// `(x - y).grad_x p`.
pub fn transport_operator(p: &MPoly) -> MPoly {
    let n = p.dim();
    let mut out = MPoly::zero(n);
    for i in 0..n {
        let z = &MPoly::var(n, Var::X(i)).unwrap() - &MPoly::var(n, Var::Y(i)).unwrap();
        out = &out + &(&z * &p.diff(Var::X(i)).unwrap());
    }
    out
}

/// `grad_x p . grad_x q`.
pub fn grad_dot_x(p: &MPoly, q: &MPoly) -> MPoly {
    let n = p.dim();
    let mut out = MPoly::zero(n);
    for i in 0..n {
        out = &out + &(&p.diff(Var::X(i)).unwrap() * &q.diff(Var::X(i)).unwrap());
    }
    out
}

/// Right-hand side `q_k` of the transport equation for `A_{k+1}`:
/// `A_k (x-y).grad V + Delta A_k - A_{k-1} Delta V - 2 grad V . grad A_{k-1} + A_{k-2} |grad V|^2`,
/// with coefficients of negative index taken as zero.
pub fn transport_rhs(k: usize, offdiag: &[MPoly], potential: &PotentialSpec) -> Result<MPoly> {
    if offdiag.len() <= k {
        return Err(Error::InsufficientDepth {
            needed: k,
            available: offdiag.len().saturating_sub(1),
        });
    }
    let n = potential.dimension();
    let v = potential_mpoly(potential);
    let a_k = &offdiag[k];
    let mut q = &(a_k * &transport_operator(&v)) + &a_k.laplacian_x();
    if k >= 1 {
        let a_km1 = &offdiag[k - 1];
        q = &q - &(a_km1 * &v.laplacian_x());
        q = &q - &grad_dot_x(&v, a_km1).scale(&Rational::from_integer(2.into()));
    }
    if k >= 2 {
        q = &q + &(&offdiag[k - 2] * &grad_dot_x(&v, &v));
    }
    debug_assert_eq!(q.dim(), n);
    Ok(q)
}

/// `A_{k+1} = int_0^1 s^k rhs(x(s), y) ds`.
pub fn transport_solve(k: usize, rhs: &MPoly) -> Result<MPoly> {
    let s = MPoly::var(rhs.dim(), Var::S)?;
    let along = rhs.substitute_line()?;
    Ok((&along * &s.pow(k as u32)).integrate_s_unit())
}

/// `[(x - y).grad + k + 1] A_{k+1} - q_k`.
pub fn transport_residual(k: usize, offdiag: &[MPoly], potential: &PotentialSpec) -> Result<MPoly> {
    let next = offdiag.get(k + 1).ok_or(Error::InsufficientDepth {
        needed: k + 1,
        available: offdiag.len().saturating_sub(1),
    })?;
    let lhs = &transport_operator(next) + &next.scale(&Rational::from_integer((k as i64 + 1).into()));
    Ok(&lhs - &transport_rhs(k, offdiag, potential)?)
}

#[derive(Clone, Debug)]
pub struct CartesianParametrix {
    pub potential: PotentialSpec,
    pub offdiag: Vec<MPoly>,
    pub diag: Vec<RadialPoly>,
}

pub fn build_parametrix_cartesian(potential: &PotentialSpec, depth: usize) -> Result<CartesianParametrix> {
    let n = potential.dimension();
    let mut offdiag = vec![MPoly::one(n)];
    for k in 0..depth {
        let rhs = transport_rhs(k, &offdiag, potential)?;
        offdiag.push(transport_solve(k, &rhs)?);
    }
    let diag = offdiag
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let d = a
                .coincidence_limit()?
                .radial_reduce()
                .map_err(|e| Error::Internal(format!("diagonal of A_{k} is not radial: {e}")))?;
            check_diagonal(k, &d, potential.degree())?;
            Ok(d)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CartesianParametrix {
        potential: potential.clone(),
        offdiag,
        diag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, rat};

    #[test]
    fn first_coefficient_one_dimension() {
        // V = x^2: A_1 = x^2 - (x^2 + x y + y^2)/3
        let v = PotentialSpec::harmonic(1, int(1)).unwrap();
        let rhs = transport_rhs(0, &[MPoly::one(1)], &v).unwrap();
        let a1 = transport_solve(0, &rhs).unwrap();
        let x = MPoly::var(1, Var::X(0)).unwrap();
        let y = MPoly::var(1, Var::Y(0)).unwrap();
        let mean = (&(&x.pow(2) + &(&x * &y)) + &y.pow(2)).scale(&rat(1, 3));
        assert_eq!(a1, &x.pow(2) - &mean);
        assert!(transport_solve(3, &MPoly::zero(1)).unwrap().is_zero());
    }

    #[test]
    fn harmonic_diagonals() {
        let c = rat(3, 2);
        let v = PotentialSpec::harmonic(3, c.clone()).unwrap();
        let set = build_parametrix_cartesian(&v, 3).unwrap();
        assert_eq!(set.diag[0], RadialPoly::one());
        assert!(set.diag[1].is_zero());
        assert_eq!(set.diag[2], RadialPoly::constant(-c.clone()));
        assert_eq!(set.diag[3], RadialPoly::monomial(2, &c * &c / int(3)));
        for k in 0..3 {
            assert!(transport_residual(k, &set.offdiag, &v).unwrap().is_zero());
        }
    }

    #[test]
    fn constant_part_drops_out() {
        // c_0 never reaches the coefficients: only derivatives of V enter
        let v = PotentialSpec::new(2, [(0, int(7)), (2, int(1))]).unwrap();
        let w = PotentialSpec::new(2, [(2, int(1))]).unwrap();
        let a = build_parametrix_cartesian(&v, 2).unwrap();
        let b = build_parametrix_cartesian(&w, 2).unwrap();
        assert_eq!(a.offdiag, b.offdiag);
    }

    #[test]
    fn rhs_needs_prior_coefficients() {
        let v = PotentialSpec::harmonic(1, int(1)).unwrap();
        assert!(matches!(
            transport_rhs(2, &[MPoly::one(1)], &v),
            Err(Error::InsufficientDepth { .. })
        ));
    }
}
