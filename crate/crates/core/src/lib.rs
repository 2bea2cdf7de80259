//! Numerics for an idealized mono-energetic Bose gas.
//!
//! The crate evaluates the order-3/2 Bose and Fermi polylogarithms, the
//! occupation-number formulas, and the self-consistency relation linking the
//! reduced fugacity `z' = λ³/v = z·b` to the momentum `p0` of a gas whose
//! particles all share one energy. On top of that sits a regime classifier
//! (condensation, infinite dilution, anomalous Fermionic behaviour) and a
//! sweep/report layer used by the `qgas` command-line tool.
//!
//! All quantities are in natural units (`ħ = m = k = 1` unless overridden),
//! which is what makes the momentum thresholds pure numbers.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod gas_statistics;
pub mod quadrature;
pub mod regime;
pub mod special_functions;
pub mod sweep_report;

pub use error::{Error, Result};
pub use gas_statistics::{FugacityPair, MonoEnergeticState, NaturalUnits, NormalizationScenario};
pub use regime::{
    Branch, CouplingK, FermiSeries, RegimeFlag, RegimeLabel, RegimeReport, RootOutcome, RootSide,
};
pub use special_functions::{Fugacity, SeriesParams};
pub use sweep_report::{SweepMode, SweepRow, SweepSpec};
