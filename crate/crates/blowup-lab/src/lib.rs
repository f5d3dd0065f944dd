//! Blow-up diagnostics for radial families of `(−Δ)³u = V e^{6u}`: rescaling
//! to the bubble, the polyharmonic coefficient `β`, the θ radii, curvature
//! quantization and its sharp excess, the neck, and the four-way case label.

pub mod beta;
pub mod classify;
pub mod error;
pub mod expansion;
pub mod family;
pub mod neck;
pub mod quant;
pub mod report;
pub mod rescale;
pub mod tabulated;
pub mod theta;
pub mod trend;

pub use beta::{estimate_beta, BetaFit, BetaOptions};
pub use classify::{classify_case, classify_family, CaseEvidence, CaseLabel, CaseReport, ClassifyOptions};
pub use error::LabError;
pub use expansion::{expansion_checks, ExpansionChecks};
pub use family::{
    example1a, example1b, example2, example3, hybrid_family, synthetic_excess_family,
    synthetic_family, BlowupFamily, Member, PerturbedBubble, Provenance, Psi0Profile,
};
pub use neck::{neck_analysis, neck_constant, NeckFlag, NeckReport};
pub use quant::{
    annulus_mass, curvature_excess_slope, delta_star, mass_between, quantization_check,
    ExcessFit, QuantRow, EXCESS_SLOPE,
};
pub use report::{analyze_family, analyze_member, AnalysisOptions, FamilyReport, MemberReport};
pub use rescale::{concentration_radius, distance_to_eta, eps_k, rescaled_jets, rescaled_profile};
pub use tabulated::TabulatedProfile;
pub use theta::{theta_ratios, ThetaRatios};
pub use trend::{trend_to, TrendCheck};

pub type Result<T> = std::result::Result<T, LabError>;
