//! Small-t heat-trace expansions `Tr e^{-tH}` for `H = -Delta + V(|x|)` on `R^n`
//! with even polynomial potentials.
//!
//! The pipeline is exact up to the final evaluation:
//!
//! 1. [`parametrix`] solves the transport recursion for the resummed
//!    coefficients `A_k(x, y)` and reduces them to `A_k(r)` on the diagonal.
//! 2. [`assembly`] integrates these against `e^{-tV}` symbolically, producing a
//!    Puiseux series in `t^{1/q}` whose coefficients are sums of
//!    `rational * pi^{h/2} * Gamma(rho) * c_q^e`.
//! 3. [`oracles`] gives independent numerical references.
//!
//! ```
//! use heattrace::{assembly, exactalg::int, parametrix::PotentialSpec};
//!
//! let v = PotentialSpec::new(3, [(0, int(1)), (2, int(2)), (4, int(3))]).unwrap();
//! let exp = assembly::trace_expansion(&v, 6).unwrap();
//! let k = assembly::eval_expansion(&exp, 0.05).unwrap();
//! assert!(k > 0.0);
//! ```

// `!(x > 0.0)` is how NaN gets rejected alongside the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assembly;
pub mod error;
pub mod exactalg;
pub mod oracles;
pub mod parametrix;

pub use error::{Error, Result};
