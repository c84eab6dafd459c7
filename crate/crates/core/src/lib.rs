//! Numerical univalence criteria for analytic functions of the unit disk.
//!
//! The crate covers power-series evaluation, principal and continuously
//! tracked branches of complex powers, sampled univalence criteria, the
//! integral operator
//! `F(z) = [gamma int_0^z u^(gamma-1) (f')^alpha (g/phi)^beta du]^(1/gamma)`,
//! the Loewner chain built from it, its quasiconformal extension across the
//! unit circle, and criterion-free injectivity oracles.
//!
//! Everything is generic over the real scalar ([`Real`], implemented by
//! `f32` and `f64`); the aliases below fix `f64`, with `f32` variants for
//! the main value types.

// NaN-rejecting range checks are written as negated comparisons.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod branch;
pub mod catalog;
pub mod chain;
pub mod criterion;
pub mod error;
pub mod extension;
pub mod grid;
pub mod hypergeometric;
pub mod operator;
pub mod oracle;
pub mod params;
pub mod quadrature;
pub mod scalar;
pub mod series;
pub mod winding;

pub use num_complex::Complex;

pub use chain::{
    chain_eval, pde_residual, subordination_probe, transfer_functions, ChainEvaluation, ChainPoint, Transfer,
};
pub use criterion::{criterion_check, criterion_value, CriterionReport, Variant};
pub use error::{Error, Result};
pub use extension::{
    becker_extend, beltrami_estimate, disk_containment_check, extension_constants, BeltramiSample, Containment,
    ExtensionConstants,
};
pub use grid::DiskGrid;
pub use hypergeometric::{example31_closed_form, hyp2f1};
pub use operator::{operator_eval, OperatorResult};
pub use oracle::{argument_principle_check, injectivity_scan, Collision, SampleCloud};
pub use params::{FunctionSet, ParameterSet};
pub use quadrature::QuadratureConfig;
pub use scalar::Real;
pub use series::SeriesFunction;

pub type C64 = Complex<f64>;
pub type C32 = Complex<f32>;

pub type Series64 = SeriesFunction<f64>;
pub type Series32 = SeriesFunction<f32>;
pub type Params64 = ParameterSet<f64>;
pub type Params32 = ParameterSet<f32>;
pub type Functions64 = FunctionSet<f64>;
pub type Functions32 = FunctionSet<f32>;
pub type Grid64 = DiskGrid<f64>;
pub type Grid32 = DiskGrid<f32>;
pub type Quadrature64 = QuadratureConfig<f64>;
pub type Quadrature32 = QuadratureConfig<f32>;
pub type Report64 = CriterionReport<f64>;
pub type Constants64 = ExtensionConstants<f64>;
pub type Cloud64 = SampleCloud<f64>;
