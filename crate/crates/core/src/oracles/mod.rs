//! Independent references for the expansion: the closed-form oscillator trace,
//! direct quadrature of the radial integrals and a finite-difference spectrum.

mod harmonic;
mod probe;
mod quadrature;
mod spectral;
pub mod tridiag;

pub use harmonic::{harmonic_trace_eval, harmonic_trace_series, LaurentSeries};
pub use probe::{remainder_order_probe, ProbePair, ProbeReport};
pub use quadrature::{integrate, quadrature_i, quadrature_i_with, truncation_radius, QuadConfig, Quadrature};
pub use spectral::{spectral_trace, spectral_traces, SpectralConfig, SpectralTrace};
