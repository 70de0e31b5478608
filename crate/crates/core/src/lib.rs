//! Multipartite entanglement quantities for qubit systems.
//!
//! The crate computes k-ME concurrence, global negativity, one-, two- and
//! three-tangles and the degree-2/degree-4 local-unitary invariants of three
//! and four qubit states, together with closed-form values for the GHZ, W and
//! four-qubit SLOCC family states. The [`verify`] module cross-checks every
//! closed-form relation between these quantities numerically.
//!
//! Site `0` is the leftmost tensor factor and the most significant bit of a
//! computational-basis index. Letter labels map as `A = 0`, `B = 1`, `C = 2`,
//! `D = 3`.

pub mod error;
pub mod families;
pub mod invariants;
pub mod measures;
pub mod partitions;
pub mod qstate;
pub mod verify;

pub use error::{Error, Result};
pub use families::{ClosedFormPrediction, FamilyParams, MinNegativityRelation, SloccFamily};
pub use invariants::{Invariants3, Invariants4};
pub use measures::{MeasureReport, NegativityProfile};
pub use partitions::Partition;
pub use qstate::{DensityMatrix, PureState, SchmidtSpectrum, SubsystemSet, C64};
pub use verify::{RelationCheckResult, RelationId, Verdict};
