//! Outside options and comparative risk aversion.
//!
//! An agent with risk attitude `v` who can, after a lottery resolves, swap
//! the prize for a randomly drawn outside option with extended CDF `F`
//! behaves like an expected-utility maximizer with effective risk attitude
//! `u(x) = ∫ max{v(x), k} F(dk)`. This crate computes that map forwards,
//! identifies `F` from `(u, v)`, checks Pratt-style comparisons of risk
//! aversion, runs comparative statics in the reverse hazard rate order, and
//! decomposes lottery-replacement kernels into outside-option form.
//!
//! Alternatives are identified with their real positions, so a risk
//! attitude is a finite map from sorted reals to reals.

pub mod comparative_statics;
pub mod distributions;
mod error;
pub mod numeric;
pub mod outside_option;
pub mod preferences;
pub mod sampling;
pub mod transformations;

pub use comparative_statics::{
    cara_effective_rho, cara_numeric_check, induce_f, mcs_part_a_check, mcs_part_b_check, CaraGrid,
    CaraReport, CaraSpec, McsAReport, McsBReport, PhysicalOutsideOption,
};
pub use distributions::{ExtendedCdf, StepFn};
pub use error::{Error, Result};
pub use numeric::{Component, PiecewiseLinearFn, SetDescriptor, SlopeSegment};
pub use outside_option::{
    construct_v_prop2, effective_utility, identify_f, verify_representation, Identification,
    OoRepresentation, RepresentationCheck,
};
pub use preferences::{
    arrow_pratt_index, construct_phi_greatest, expected_utility, less_risk_averse_crossratio,
    less_risk_averse_oracle, CrossRatioReport, LotteryWitness, OracleReport, PrattViolation,
    RiskAttitude, SimpleLottery,
};
pub use transformations::{
    check_risk_reduction, decompose, decompose_withheld_top, directed_violation_search, synthesize,
    theorem3_agreement, DecomposeFailure, Decomposition, KernelWitness, LotteryKernel,
    RiskReductionReport, Theorem3Report,
};
