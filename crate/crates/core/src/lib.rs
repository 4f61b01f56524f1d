//! Isometries of complex hyperbolic space `PU(1,n)`: classification, the
//! Jørgensen-type inequality as a certificate, and word searches over finitely
//! generated groups for evidence of non-discreteness.
//!
//! Elements are `(n+1)×(n+1)` complex matrices preserving the form
//! `Φ(z,w) = −z̄₀w₀ + Σ z̄ⱼwⱼ`, acting on the ball `{Σ|zⱼ/z₀|² < 1}`.

pub mod certificates;
pub mod config;
pub mod error;
pub mod explorer;
pub mod hermitian;
pub mod isometry;
mod linalg;
pub mod par;

pub use certificates::{
    discreteness_report, jorgensen_statistic, jorgensen_test, jorgensen_threshold, Certificate,
    CertificateKind, DiscretenessReport, JorgensenOutcome, Mode, Verdict,
};
pub use config::{Execution, NormKind, PowerSide, SearchConfig, ToleranceConfig};
pub use error::{Error, Result};
pub use explorer::{GroupInput, Word};
pub use hermitian::{BallPoint, Complexd};
pub use isometry::{classify_isometry, ClassTag, Isometry};
