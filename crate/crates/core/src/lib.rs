//! Modeling and forecasting of multivariate processes supported on the
//! vertices of a weighted undirected graph.
//!
//! The library treats an `N x T` matrix as a time-varying graph signal:
//! each column is a snapshot over the `N` vertices, columns are unit-spaced
//! in time. Stationarity with respect to both the graph and the time axis
//! lets a vector ARMA model whose matrix coefficients are functions of the
//! graph Laplacian be rotated by the graph Fourier basis into `N`
//! independent scalar ARMA models, which are cheap to estimate and to run
//! forward for forecasting. The crate provides:
//!
//! - graph construction (k-nearest-neighbour, random geometric) and the
//!   combinatorial Laplacian ([`graph`]),
//! - the graph / joint (time-vertex) Fourier transforms and joint
//!   spectral filtering ([`spectral`]),
//! - scalar ARMA estimation and recursive prediction ([`arma`]),
//! - the graph-frequency-decoupled causal model with optional low-rank
//!   truncation ([`joint_causal`]),
//! - per-node causal and conditional-Gaussian non-causal baseline
//!   predictors ([`baselines`]),
//! - synthetic process generators ([`simulate`]),
//! - a rolling-origin forecast evaluation harness ([`eval`]),
//! - CSV/JSON readers and writers for all artifacts ([`io`]).
//!
//! ```
//! use timevertex::graph::{laplacian, random_geometric_graph};
//! use timevertex::joint_causal::{self, SelectionCriterion};
//! use timevertex::spectral::{eigendecompose, DEFAULT_EIGEN_TOL};
//! use timevertex::{eval, simulate};
//!
//! // A wave process on a random geometric graph...
//! let g = random_geometric_graph(8, 3.0, 1)?;
//! let basis = eigendecompose(&laplacian(&g), DEFAULT_EIGEN_TOL)?;
//! let c = simulate::default_wave_speed(&g)?;
//! let x = simulate::generate_wave(&g, 120, c, 1.0, 50, 7)?;
//!
//! // ...is fitted per graph frequency on the first half...
//! let (train, _) = eval::split_train_test(&x);
//! let model = joint_causal::fit(&train, &basis, 2, 0, SelectionCriterion::VarianceFraction(1.0))?;
//!
//! // ...and forecast three steps past the end of the observed data.
//! let forecast = model.predict(&x, 3)?;
//! assert_eq!(forecast.dim(), (8, 3));
//! # Ok::<(), timevertex::Error>(())
//! ```

pub mod arma;
pub mod baselines;
mod error;
pub mod eval;
pub mod graph;
pub mod io;
pub mod joint_causal;
pub mod linalg;
pub mod simulate;
pub mod spectral;

pub use arma::ArmaModel;
pub use baselines::{DisjointModel, Jpsd, NoncausalPredictor};
pub use error::{Error, Result};
pub use eval::{ForecastReport, Forecaster};
pub use graph::{Graph, OperatorMatrix};
pub use joint_causal::{EnergySpectrum, JointCausalModel, SelectionCriterion};
pub use spectral::{EigenBasis, JointSpectrum, TimeVertexSignal};
