//! Planted dense cycles: samplers, signed subgraph statistics, the
//! self-avoiding-walk recovery estimator and numerical low-degree diagnostics.
//!
//! A planted-cycle graph is an Erdős–Rényi graph `G(n, q)` in which every pair
//! of vertices whose latent circular positions lie within `τ/2` of each other
//! is instead connected with the elevated probability `p`. The degree-matched
//! null is `G(n, r)` with `r = τp + (1 − τ)q`.
//!
//! Module map:
//!
//! - [`geometry`]: circle distance, latent positions, the geometric graph `X`.
//! - [`models`]: [`ModelParams`] and the planted/null samplers.
//! - [`statistics`]: standardized adjacency, signed subgraph products, signed
//!   triangle/clique counts and the signed self-avoiding-walk count `T`.
//! - [`irwin_hall`]: Irwin–Hall density, CDF and window integrals.
//! - [`recovery`]: the conditional mean of `T`, the threshold `κ`, the pairwise
//!   estimator and full geometric-graph reconstruction.
//! - [`lowdeg`]: shape enumeration, `E_P[φ_α]`, truncated advantage, `P_αβ`,
//!   the `ρ_α` recursion and the correlation bound.
//! - [`harness`]: experiment drivers, config files and CSV output.

pub mod error;
pub mod geometry;
pub mod graph;
pub mod harness;
pub mod irwin_hall;
pub mod lowdeg;
pub mod models;
pub mod numeric;
pub mod recovery;
pub mod rng;
pub mod statistics;

mod par;

pub use error::{Error, Result};
pub use geometry::{circle_dist, geometric_graph, sample_latents, CirclePosition, LatentAssignment};
pub use graph::Graph;
pub use models::{sample_null, sample_planted, ModelParams};
pub use rng::{derive_stream, Label, RandomStream};
