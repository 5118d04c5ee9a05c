use crate::error::Result;
use crate::exactalg::{rat, MPoly, RadialPoly, Var};

use super::cartesian::{grad_dot_x, potential_mpoly};
use super::PotentialSpec;

/// Diagonal coefficients `A_0..A_4` from the classical low-order formulas
///
/// ```text
/// A_0 = 1, A_1 = 0, A_2 = -Delta V / 6,
/// A_3 = -Delta^2 V / 60 + |grad V|^2 / 12,
/// A_4 = -Delta^3 V / 840 + (Delta V)^2 / 72 + |Hess V|^2 / 90 + grad V . grad Delta V / 30,
/// ```
///
/// evaluated with Cartesian derivatives, independently of the recursion.
pub fn diag_closed_forms(potential: &PotentialSpec) -> Result<Vec<RadialPoly>> {
    let n = potential.dimension();
    let v = potential_mpoly(potential);
    let lap1 = v.laplacian_x();
    let lap2 = lap1.laplacian_x();
    let lap3 = lap2.laplacian_x();
    let grad_sq = grad_dot_x(&v, &v);

    let mut hess_sq = MPoly::zero(n);
    for i in 0..n {
        let di = v.diff(Var::X(i))?;
        for j in 0..n {
            let dij = di.diff(Var::X(j))?;
            hess_sq = &hess_sq + &(&dij * &dij);
        }
    }

    let a2 = lap1.scale(&rat(-1, 6));
    let a3 = &lap2.scale(&rat(-1, 60)) + &grad_sq.scale(&rat(1, 12));
    let a4 = &(&(&lap3.scale(&rat(-1, 840)) + &(&lap1 * &lap1).scale(&rat(1, 72)))
        + &hess_sq.scale(&rat(1, 90)))
        + &grad_dot_x(&v, &lap1).scale(&rat(1, 30));

    let mut out = vec![RadialPoly::one(), RadialPoly::zero()];
    for a in [a2, a3, a4] {
        out.push(a.radial_reduce()?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;

    #[test]
    fn harmonic_fourth_coefficient() {
        // Hess V = 2c I, Delta V = 6c: A_4 = (6c)^2/72 + 3 (2c)^2/90 = c^2/2 + 2c^2/15
        let c = rat(5, 3);
        let v = PotentialSpec::harmonic(3, c.clone()).unwrap();
        let forms = diag_closed_forms(&v).unwrap();
        let c2 = &c * &c;
        assert_eq!(forms[4], RadialPoly::constant(&c2 / int(2) + &c2 * rat(2, 15)));
        assert_eq!(forms[2], RadialPoly::constant(-c));
    }

    #[test]
    fn sestic_second_coefficient() {
        // A_2 = -(6 c_2 + 20 c_4 r^2 + 42 c_6 r^4) / 6 in three dimensions
        let v = PotentialSpec::new(3, [(0, int(1)), (2, int(2)), (4, int(3)), (6, int(5))]).unwrap();
        let forms = diag_closed_forms(&v).unwrap();
        let expected = RadialPoly::from_coeffs([(0, int(-2)), (2, int(-10)), (4, int(-35))]);
        assert_eq!(forms[2], expected);
    }
}
