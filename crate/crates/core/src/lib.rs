//! Decision procedures for positivity of line bundles on blow-ups of
//! Hirzebruch surfaces `𝔽_e` at `r` points.
//!
//! - [`lattice`]: exact intersection theory on `Pic 𝔽_{e,r}`.
//! - [`criteria`]: twelve sufficient criteria (ample, globally generated,
//!   very ample, k-very ample; three variants each).
//! - [`obstructions`]: candidate curve classes and the Reider /
//!   Beltrametti–Francia–Sommese obstruction windows used to cross-check
//!   verdicts.
//! - [`seshadri`]: lower bounds for multi-point Seshadri constants of ample
//!   classes on `𝔽_e`.

pub mod criteria;
pub mod error;
pub mod int_serde;
pub mod lattice;
pub mod obstructions;
pub mod seshadri;

pub use criteria::{
    all_criteria, check, check_ampleness, check_global_generation, check_k_very_ample, check_very_ample, lambda_of,
    topk_sum, Condition, CriterionId, CriterionReport, Family, Relation, ThresholdData, Transform, Variant, Verdict,
};
pub use error::{LatticeError, ObstructionError};
pub use lattice::{
    adjoint_shift, canonical_class, hzero_base, intersect, self_intersection, BaseDivisorClass, BlowupModel,
    DivisorClass, Position,
};
pub use obstructions::{
    bfs_window, candidate_classes, lemma_general_inequality, necessary_positivity, reider_window, scan_obstructions,
    CurveClass, ObstructionFinding, Provenance, ReiderMode, ScanMode, ScanReport, Window,
};
pub use seshadri::{bound_from_i, bound_from_ii, bound_from_iii, seshadri_bounds, BoundValue, ExactBound, SeshadriBoundReport};
