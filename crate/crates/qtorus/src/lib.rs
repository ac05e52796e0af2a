//! Pseudo-spectral machinery for the prescribed Q-curvature problem on the
//! flat unit 4-torus: the bi-Laplacian (Paneitz) operator, constrained energy
//! minimization, the normalized curvature flow, and concentration analysis.

pub mod bubble;
pub mod config;
pub mod constraint;
pub mod flow;
pub mod io;
pub mod lattice;
pub mod minimize;
pub mod paneitz;
pub mod profile;
pub mod selftest;
pub mod svg;
pub mod sweep;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("solvability error: {0}")]
    Solvability(String),
    #[error("projection failure: {0}")]
    ProjectionFailure(String),
    #[error("resolution error: {0}")]
    Resolution(String),
    #[error("solver stall: {0}")]
    Stall(String),
    #[error("sign anomaly: {0}")]
    SignAnomaly(String),
    #[error("stiffness failure: {0}")]
    Stiffness(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("shooting failure: {0}")]
    Shooting(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code: 2 for configuration problems, 3 for numerical ones.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Io(_) => 2,
            _ => 3,
        }
    }
}
