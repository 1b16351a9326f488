//! Hypothesis predicates, the explicit constant ledger and the four-step
//! point count over concrete height data.

mod ledger;
mod pipeline;
mod predicates;
mod synthetic;
mod value;

pub use ledger::{
    build_ledger, final_count, final_count_certificate, gap_exponent, height_x_removal_bound, hyp_pack_induction,
    large_point_bound, large_point_bound_from, merge_gap_claim_check, merge_gap_constants, ConstantLedger,
    DimConstants, FinalCount, FinalInputs, HeightXBound, InductionInputs, LedgerEntry, LedgerInputs,
};
pub use pipeline::{
    hyp_pack_count, minimal_radius_center, pipeline_report, run_pipeline, HypPackReading, PipelineOptions,
    PipelineReport, StepRecord, Verdict,
};
pub use predicates::{
    gap_sequence_audit, mumford_hypotheses, vojta_hypotheses, GapAudit, HeightedPointSet, IsolationEntry,
    IsolationOracle, PREDICATE_SLACK,
};
pub use synthetic::{gap_sequence, random_point_set, GapSequence, GapSequenceConfig};
pub use value::{int_root_ceil, LedgerValue, Num};
