//! Assembly of the small-t heat-trace series from the diagonal coefficients.

mod coeff;
mod expansion;
mod ladder;

pub use coeff::{Atom, AtomKey, CoeffValue};
pub use expansion::{
    eval_expansion, expansion_from_parametrix, radial_integral_series, series_assembly_direct,
    series_assembly_from_parametrix, sphere_area, trace_expansion, trace_expansion_capped, TraceExpansion,
};
pub use ladder::{
    a_coeff, depth_for_order, first_step, gamma_k, h_poly, multinomial_d, omega, t_coeff, v_max, Ladder,
};
