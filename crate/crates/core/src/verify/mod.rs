//! Certification of frames, dual pairs and necessary conditions.

pub mod audit;
pub mod equations;
pub mod operator;
pub mod report;

pub use audit::{audit_necessary, independence_gate, GateReport};
pub use equations::{check_dual_pair, check_parseval, equation_frequencies, VerifyConfig};
pub use operator::{frame_operator, hermitian_defect, identity_deviation, optimal_bounds};
pub use report::{Audit, Bounds, EquationCheck, FrameReport, Outcome, Verdict, VerdictStatus};
