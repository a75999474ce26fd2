//! Functionals of computed or injected fields: radiation operators, decay
//! probes, the multiplier identity, flux balance and resolvent ratios.

mod identity;
mod plane_fit;
mod radiation;
mod report;

pub use identity::{identity_residual, identity_residual_with, IdentityQuadrature, IdentityReport, WeightScaling};
pub use plane_fit::{plane_wave_fit, PlaneFit};
pub use radiation::{
    flux_conservation, radiation_term, radiation_term_with_gradient, rz_radiation_residual, surface_decay_probe,
    radiation_estimate_ratio, ProbeMode, RadiationField, RadiationVariant,
};
pub use report::{DiagnosticRow, DiagnosticsReport};
