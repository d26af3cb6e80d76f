//! Deterministic multi-agent simulator of an industrial potato commodity
//! market. Farmers (produsen), middlemen (distributor), and industries
//! (konsumen) trade under fuzzy-logic controllers loaded from scenario
//! files; the simulator emits per-agent yearly finance and commodity series
//! as CSV tables and SVG charts, each with a learned next-value prediction.

pub mod bench;
pub mod error;
pub mod market;
pub mod predict;
pub mod report;
pub mod runtime;
pub mod scenario;

pub use error::SimError;
