//! Correlation-space measurement engine.
//!
//! A plan is a list of single-site measurement intents. Each outcome selects
//! a rotated Kraus operator; the engine tracks the net virtual operator, the
//! byproduct word in the logical frame, and classifies every step.

mod byproduct;
mod census;
mod lift;
mod physical;
mod plan;
mod resource;

pub use byproduct::{ByproductWord, WordTable};
pub use census::{
    lie_closure_rank, projection_census, sp_commutation_census, success_census, universality_span_check, CensusReport,
    CensusRow, GeneratorCensus, ProjectionCensus, SpCensusEntry, SpCommutationTable, SpanReport, CENSUS_ANGLE,
};
pub use lift::{
    adjoint_lift, byproduct_pullthrough, elementary_gate_plan, elementary_gate_rotation, induced_operators,
    projection_basis, wire_rotation, PullClass, PullThrough,
};
pub use physical::{real_vs_virtual_check, PhysicalCheck};
pub use plan::{
    probability_defect, run_plan, run_prepared, BranchRecord, MeasurementPlan, ModeName, PlanStep, PreparedPlan,
    RunMode, StepClass,
};
pub use resource::{Resource, ResourceSpec};
