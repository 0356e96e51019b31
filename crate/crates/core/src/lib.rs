//! Simulation and inference tools for telling social contagion apart from
//! latent homophily on networks.
//!
//! The crate is organised bottom-up:
//!
//! * [`network`] – directed binary adjacency with exposure and reciprocity queries.
//! * [`population`] – latent traits and the homophilous / control network generators.
//! * [`dynamics`] – outcome processes (latent trend, noisy voter model, linear contagion).
//! * [`inference`] – least squares, logistic IRLS, contrasts and the asymmetry design.
//! * [`causal_dag`] – d-separation and back-door path queries with latent nodes.
//! * [`experiments`] – the seeded Monte Carlo harness tying everything together.
//!
//! Numerical code is generic over [`Real`]; the aliases below fix the
//! scalar to `f64`, which is what the experiment harness uses.

pub mod causal_dag;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod inference;
pub mod network;
pub mod population;
pub mod scalar;
pub mod seed;

pub use error::{Error, Result};
pub use scalar::Real;

pub type TraitAssignment = population::TraitAssignment<f64>;
pub type OutcomePanel = dynamics::OutcomePanel<f64>;
pub type DesignMatrix = inference::DesignMatrix<f64>;
pub type RegressionFit = inference::RegressionFit<f64>;
pub type Contrast = inference::Contrast<f64>;

pub use causal_dag::CausalDag;
pub use experiments::ExperimentConfig;
pub use network::SocialNetwork;
