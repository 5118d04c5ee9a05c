use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::Zero;

use super::ladder::{a_coeff_with, depth_for_order, gamma_k, padded_omegas, Ladder};
use super::CoeffValue;
use crate::error::{Error, Result};
use crate::exactalg::{int, rat, to_f64, RadialPoly, Rational};
use crate::parametrix::{build_parametrix_capped, ParametrixSet, PotentialSpec, DEFAULT_MAX_DEPTH};

/// `K(t) ~ prefactor * t^{leading_power} * sum_j a_j t^{j/q}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceExpansion {
    potential: PotentialSpec,
    leading_power: Rational,
    prefactor: CoeffValue,
    coefficients: Vec<CoeffValue>,
    remainder_power: Rational,
    depth: usize,
}

impl TraceExpansion {
    pub fn potential(&self) -> &PotentialSpec {
        &self.potential
    }

    pub fn dimension(&self) -> usize {
        self.potential.dimension()
    }

    pub fn q(&self) -> u32 {
        self.potential.degree()
    }

    /// `J`.
    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// `-n/2 - n/q`.
    pub fn leading_power(&self) -> &Rational {
        &self.leading_power
    }

    /// `S_n / (c_q^{n/q} (4 pi)^{n/2})`.
    pub fn prefactor(&self) -> &CoeffValue {
        &self.prefactor
    }

    pub fn coefficients(&self) -> &[CoeffValue] {
        &self.coefficients
    }

    /// Exponent of the first omitted term, `leading_power + (J+1)/q`.
    pub fn remainder_power(&self) -> &Rational {
        &self.remainder_power
    }

    /// Parametrix depth used.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Power of `t` multiplying `a_j`.
    pub fn t_power(&self, j: usize) -> Rational {
        &self.leading_power + rat(j as i64, self.q() as i64)
    }

    /// `prefactor * a_j`: the full coefficient of `t^{t_power(j)}`.
    pub fn combined(&self, j: usize) -> CoeffValue {
        &self.prefactor * &self.coefficients[j]
    }

    pub fn cq_f64(&self) -> f64 {
        to_f64(self.potential.leading())
    }
}

fn leading_power(n: usize, q: u32) -> Rational {
    -rat(n as i64, 2) - rat(n as i64, q as i64)
}

/// `2^{1-n} / Gamma(n/2) * c_q^{-n/q}`.
fn prefactor(n: usize, q: u32) -> CoeffValue {
    let two = crate::exactalg::rat_powi(&int(2), 1 - n as i64);
    (&CoeffValue::inv_gamma_half(n) * &CoeffValue::cq_pow(-rat(n as i64, q as i64))).scale(&two)
}

/// Angular volume `S_n = 2 pi^{n/2} / Gamma(n/2)`.
pub fn sphere_area(n: usize) -> CoeffValue {
    (&CoeffValue::pi_half(n as i64) * &CoeffValue::inv_gamma_half(n)).scale(&int(2))
}

fn finish(set: &ParametrixSet, coefficients: Vec<CoeffValue>) -> TraceExpansion {
    let p = set.potential();
    let (n, q) = (p.dimension(), p.degree());
    let order = coefficients.len() - 1;
    let lead = leading_power(n, q);
    TraceExpansion {
        potential: p.clone(),
        remainder_power: &lead + rat(order as i64 + 1, q as i64),
        leading_power: lead,
        prefactor: prefactor(n, q),
        coefficients,
        depth: set.depth(),
    }
}

fn build_for(potential: &PotentialSpec, order: usize, cap: usize) -> Result<ParametrixSet> {
    build_parametrix_capped(potential, depth_for_order(order, potential.degree()), cap)
}

/// Expansion through `t^{leading + J/q}` with the default depth cap.
pub fn trace_expansion(potential: &PotentialSpec, order: usize) -> Result<TraceExpansion> {
    trace_expansion_capped(potential, order, DEFAULT_MAX_DEPTH)
}

pub fn trace_expansion_capped(potential: &PotentialSpec, order: usize, cap: usize) -> Result<TraceExpansion> {
    expansion_from_parametrix(&build_for(potential, order, cap)?, order)
}

/// `a_0..a_J` via the `T` ladder from an existing parametrix.
pub fn expansion_from_parametrix(set: &ParametrixSet, order: usize) -> Result<TraceExpansion> {
    let ladder = Ladder::new(set.potential(), order);
    let coefficients = (0..=order)
        .map(|j| a_coeff_with(j, set, &ladder))
        .collect::<Result<Vec<_>>>()?;
    Ok(finish(set, coefficients))
}

/// Independent assembly: form each `Lambda_p^k(s)` as an explicit polynomial in
/// `s^{1/q}` by multiplying the `Omega` series with the `H_j(s)` series, then
/// integrate termwise against `s^{n/q - 1} e^{-s}`.
pub fn series_assembly_direct(potential: &PotentialSpec, order: usize) -> Result<TraceExpansion> {
    series_assembly_from_parametrix(&build_for(potential, order, DEFAULT_MAX_DEPTH)?, order)
}

pub fn series_assembly_from_parametrix(set: &ParametrixSet, order: usize) -> Result<TraceExpansion> {
    let potential = set.potential();
    let (n, q) = (potential.dimension() as i64, potential.degree() as i64);
    let ladder = Ladder::new(potential, order);
    let h: Vec<_> = (0..=order).map(|j| ladder.h_poly(j)).collect();
    let mut coefficients = vec![CoeffValue::zero(); order + 1];

    for k in 0..=set.depth() {
        let omegas = padded_omegas(set, k)?;
        let gamma = gamma_k(k, q as u32) as i64;
        let shift = q * k as i64 - gamma;
        for p in 0..=(order as i64 - shift) {
            // Lambda_p^k(s) keyed by s-exponent
            let mut lambda: BTreeMap<Rational, CoeffValue> = BTreeMap::new();
            for j in (p - gamma).max(0)..=p {
                let idx = gamma - p + j;
                let om = &omegas[idx as usize];
                if om.is_zero() {
                    continue;
                }
                let r_pow = rat(idx, q);
                let r_part = CoeffValue::cq_pow(-r_pow.clone()).scale(om);
                for (c, e) in &h[j as usize] {
                    let slot = lambda.entry(&r_pow + e).or_default();
                    *slot = &*slot + &(&r_part * c);
                }
            }
            let mut total = CoeffValue::zero();
            for (alpha, c) in lambda {
                let g = CoeffValue::gamma(&(rat(n, q) + alpha))?;
                total = &total + &(&g * &c).scale(&rat(1, q));
            }
            // the t-index of this term relative to the leading power
            let slot = &mut coefficients[(p + shift) as usize];
            *slot = &*slot + &total;
        }
    }
    for (j, a) in coefficients.iter().enumerate() {
        if j.is_odd() && !a.is_zero() {
            return Err(Error::Internal(format!("odd coefficient a_{j} = {a} is nonzero")));
        }
    }
    Ok(finish(set, coefficients))
}

/// Floating-point value of the truncated series at `t`.
pub fn eval_expansion(exp: &TraceExpansion, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveT(t));
    }
    let cq = exp.cq_f64();
    let pre = exp.prefactor.eval(cq);
    let q = exp.q() as f64;
    let lead = to_f64(&exp.leading_power);
    let sum: f64 = exp
        .coefficients
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(j, a)| a.eval(cq) * t.powf(j as f64 / q))
        .sum();
    Ok(pre * t.powf(lead) * sum)
}

/// Truncated small-t series of `S_n int_0^inf r^{n-1} A_k(r) e^{-tV(r)} dr`:
/// `S_n c_q^{-n/q} t^{-n/q} sum_{p <= max_p} T_p^{n,k} t^{(p - gamma_k)/q}`.
pub fn radial_integral_series(
    potential: &PotentialSpec,
    k: usize,
    diag_k: &RadialPoly,
    t: f64,
    max_p: usize,
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveT(t));
    }
    let (n, q) = (potential.dimension(), potential.degree());
    let gamma = gamma_k(k, q);
    let omegas = super::ladder::omega(diag_k, gamma)?;
    let ladder = Ladder::new(potential, max_p);
    let cq = to_f64(potential.leading());
    let mut sum = 0.0;
    for p in 0..=max_p {
        let tp = ladder.t_coeff(p, &omegas)?;
        if !tp.is_zero() {
            sum += tp.eval(cq) * t.powf((p as f64 - gamma as f64) / q as f64);
        }
    }
    let nq = n as f64 / q as f64;
    Ok(sphere_area(n).eval(cq) * cq.powf(-nq) * t.powf(-nq) * sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quartic() -> PotentialSpec {
        PotentialSpec::new(3, [(0, int(1)), (2, int(2)), (4, int(3))]).unwrap()
    }

    #[test]
    fn leading_term() {
        // prefactor * a_0 = 2^{1-n} Gamma(n/q) / (q c_q^{n/q} Gamma(n/2))
        for (n, v) in [
            (3, quartic()),
            (1, PotentialSpec::new(1, [(2, rat(1, 2)), (6, int(5))]).unwrap()),
            (2, PotentialSpec::harmonic(2, int(3)).unwrap()),
        ] {
            let exp = trace_expansion(&v, 0).unwrap();
            assert_eq!(exp.order(), 0);
            let q = v.degree() as f64;
            let cq = exp.cq_f64();
            let nf = n as f64;
            let g = statrs::function::gamma::gamma;
            let expected = 2f64.powf(1.0 - nf) * g(nf / q) / (q * cq.powf(nf / q) * g(nf / 2.0));
            let got = exp.combined(0).eval(cq);
            assert!((got - expected).abs() < 1e-13 * expected, "n = {n}");
            assert_eq!(
                exp.t_power(0),
                -rat(n as i64, 2) - rat(n as i64, v.degree() as i64)
            );
        }
    }

    #[test]
    fn harmonic_d3() {
        let exp = trace_expansion(&PotentialSpec::harmonic(3, int(1)).unwrap(), 8).unwrap();
        assert_eq!(exp.depth(), 8);
        assert_eq!(exp.remainder_power(), &rat(3, 2));
        let expect = [(0, rat(1, 8)), (4, rat(-1, 16)), (8, rat(17, 960))];
        for j in 0..=8 {
            let c = exp.combined(j).collapse_cq(&int(1));
            match expect.iter().find(|(i, _)| *i == j) {
                Some((_, v)) => assert_eq!(c, CoeffValue::rational(v.clone()), "j = {j}"),
                None => assert!(c.is_zero(), "j = {j}"),
            }
        }
        let t: f64 = 0.1;
        let value = eval_expansion(&exp, t).unwrap();
        let three = 1.0 / (8.0 * t.powi(3)) - 1.0 / (16.0 * t) + 17.0 / 960.0 * t;
        assert!((value - three).abs() < 1e-12 * three);
        assert!((value - 124.37677).abs() < 1e-4);
        assert!(eval_expansion(&exp, 0.0).is_err());
    }

    #[test]
    fn paths_agree() {
        for (v, order) in [
            (quartic(), 10),
            (PotentialSpec::harmonic(3, rat(5, 2)).unwrap(), 8),
            (
                PotentialSpec::new(2, [(0, rat(1, 3)), (4, int(2)), (6, rat(7, 2))]).unwrap(),
                12,
            ),
            (PotentialSpec::new(1, [(2, int(1)), (4, rat(1, 5))]).unwrap(), 0),
        ] {
            let a = trace_expansion(&v, order).unwrap();
            let b = series_assembly_direct(&v, order).unwrap();
            assert_eq!(a, b, "{v}");
        }
    }

    #[test]
    fn scaling_of_single_term() {
        let exp = trace_expansion(&quartic(), 0).unwrap();
        let (a, b) = (
            eval_expansion(&exp, 0.1).unwrap(),
            eval_expansion(&exp, 0.2).unwrap(),
        );
        let ratio = 2f64.powf(to_f64(exp.leading_power()));
        assert!((b / a - ratio).abs() < 1e-13);
    }

    #[test]
    fn harmonic_radial_integral() {
        // k = 0, c = 1, n = 3: S_3 int r^2 e^{-t r^2} dr = pi^{3/2} t^{-3/2}
        let h = PotentialSpec::harmonic(3, int(1)).unwrap();
        let v = radial_integral_series(&h, 0, &RadialPoly::one(), 1.0, 0).unwrap();
        assert!((v - std::f64::consts::PI.powf(1.5)).abs() < 1e-13);
    }
}
