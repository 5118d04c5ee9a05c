//! Transport-equation recursion for the resummed heat-kernel coefficients.
//!
//! With the ansatz `(4 pi t)^{-n/2} exp(-|x-y|^2/4t - t V(x)) sum_k t^k A_k(x, y)`
//! the coefficients satisfy `A_0 = 1` and
//!
//! ```text
//! [(x - y).grad + k + 1] A_{k+1} = q_k
//! q_k = A_k (x-y).grad V + Delta A_k - A_{k-1} Delta V
//!       - 2 grad V . grad A_{k-1} + A_{k-2} |grad V|^2
//! ```
//!
//! solved along the ray `x(s) = y + s (x - y)` by `A_{k+1} = int_0^1 s^k q_k(x(s), y) ds`.

pub mod cartesian;
mod closed_form;
mod invariant;
mod potential;

pub use cartesian::{build_parametrix_cartesian, CartesianParametrix};
pub use closed_form::diag_closed_forms;
pub use invariant::InvariantPoly;
pub use potential::PotentialSpec;

use crate::assembly::gamma_k;
use crate::error::{Error, Result};
use crate::exactalg::{int, MPoly, RadialPoly};

/// Default cap on the parametrix depth; coefficient size grows combinatorially.
pub const DEFAULT_MAX_DEPTH: usize = 12;

/// Off-diagonal coefficients `A_0..A_K` and their diagonal reductions `A_k(r)`.
#[derive(Clone, Debug)]
pub struct ParametrixSet {
    potential: PotentialSpec,
    offdiag: Vec<InvariantPoly>,
    diag: Vec<RadialPoly>,
}

struct PotentialTerms {
    dim: usize,
    v: InvariantPoly,
    transport_v: InvariantPoly,
    laplacian_v: InvariantPoly,
    grad_v_sq: InvariantPoly,
}

impl PotentialTerms {
    fn new(potential: &PotentialSpec) -> Self {
        let dim = potential.dimension();
        let v = InvariantPoly::potential(potential);
        Self {
            dim,
            transport_v: v.euler(),
            laplacian_v: v.laplacian(dim),
            grad_v_sq: v.grad_dot(&v),
            v,
        }
    }

    fn rhs(&self, k: usize, offdiag: &[InvariantPoly]) -> InvariantPoly {
        let a_k = &offdiag[k];
        let mut q = &(a_k * &self.transport_v) + &a_k.laplacian(self.dim);
        if k >= 1 {
            let prev = &offdiag[k - 1];
            q = &q - &(prev * &self.laplacian_v);
            q = &q - &self.v.grad_dot(prev).scale(&int(2));
        }
        if k >= 2 {
            q = &q + &(&offdiag[k - 2] * &self.grad_v_sq);
        }
        q
    }
}

/// Checks `A_1(r) = 0`, evenness and `deg A_k(r) <= gamma_k`.
pub(crate) fn check_diagonal(k: usize, diag: &RadialPoly, q: u32) -> Result<()> {
    if k == 1 && !diag.is_zero() {
        return Err(Error::Internal(format!("A_1(r) = {diag} is not zero")));
    }
    if let Some((power, _)) = diag.terms().find(|(d, _)| d % 2 == 1) {
        return Err(Error::OddDiagonalPower { k, power });
    }
    let gamma = gamma_k(k, q);
    if let Some(degree) = diag.degree() {
        if degree > gamma {
            return Err(Error::DegreeExceedsGamma { k, degree, gamma });
        }
    }
    Ok(())
}

/// Build `A_0..A_depth` with the default depth cap.
pub fn build_parametrix(potential: &PotentialSpec, depth: usize) -> Result<ParametrixSet> {
    build_parametrix_capped(potential, depth, DEFAULT_MAX_DEPTH)
}

pub fn build_parametrix_capped(potential: &PotentialSpec, depth: usize, cap: usize) -> Result<ParametrixSet> {
    if depth > cap {
        return Err(Error::DepthExceeded {
            requested: depth,
            cap,
        });
    }
    let terms = PotentialTerms::new(potential);
    let mut offdiag = vec![InvariantPoly::one()];
    for k in 0..depth {
        let rhs = terms.rhs(k, &offdiag);
        offdiag.push(rhs.transport_solve(k));
    }
    let diag = offdiag
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let d = a.coincidence();
            check_diagonal(k, &d, potential.degree())?;
            Ok(d)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ParametrixSet {
        potential: potential.clone(),
        offdiag,
        diag,
    })
}

impl ParametrixSet {
    pub fn potential(&self) -> &PotentialSpec {
        &self.potential
    }

    /// Highest computed index `K`.
    pub fn depth(&self) -> usize {
        self.offdiag.len() - 1
    }

    pub fn diag(&self) -> &[RadialPoly] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[InvariantPoly] {
        &self.offdiag
    }

    /// `A_k(x, y)` expanded in Cartesian coordinates.
    pub fn offdiag_mpoly(&self, k: usize) -> Option<MPoly> {
        self.offdiag
            .get(k)
            .map(|a| a.to_mpoly(self.potential.dimension()))
    }

    /// `q_k` for `0 <= k <= K`.
    pub fn transport_rhs(&self, k: usize) -> Result<InvariantPoly> {
        if k > self.depth() {
            return Err(Error::InsufficientDepth {
                needed: k,
                available: self.depth(),
            });
        }
        Ok(PotentialTerms::new(&self.potential).rhs(k, &self.offdiag))
    }

    /// `[(x - y).grad + k + 1] A_{k+1} - q_k`, identically zero for a correct set.
    pub fn transport_residual(&self, k: usize) -> Result<InvariantPoly> {
        let next = self.offdiag.get(k + 1).ok_or(Error::InsufficientDepth {
            needed: k + 1,
            available: self.depth(),
        })?;
        let lhs = &next.euler() + &next.scale(&int(k as i64 + 1));
        Ok(&lhs - &self.transport_rhs(k)?)
    }
}
