//! Relay-assisted physical-layer security: optimal source power and relay
//! weights for decode-and-forward and cooperative-jamming schemes, plus a
//! Monte-Carlo experiment harness over line-of-sight channel geometries.
//!
//! The solvers cover four problems for a network of one source, N relays,
//! one destination and J eavesdroppers with full channel knowledge:
//!
//! * [`df_opt::df_max_secrecy_j1`]: DF secrecy-rate maximization under a
//!   total power budget, one eavesdropper (closed form);
//! * [`cj_opt::cj_max_secrecy`]: CJ secrecy-rate maximization, one
//!   eavesdropper (alternating power/overlap optimization);
//! * [`df_multi::df_multi_max`]: DF rate maximization against multiple
//!   eavesdroppers (vertex search over a polygonal envelope alternating
//!   with a semidefinite-relaxation weight step);
//! * [`df_opt::df_min_power`] / [`cj_opt::cj_min_power`]: total-power
//!   minimization under a secrecy-rate equality constraint.
//!
//! Suboptimal baselines (eavesdropper nulling for DF, destination-nulled
//! jamming for CJ) and a direct-transmission reference are included for
//! comparison, as is a self-contained interior-point solver ([`sdp`]) for
//! the small dense Hermitian SDP behind the multi-eavesdropper weight step.

// `!(x > 0.0)` is used for preconditions on purpose: NaN must fail them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cj_opt;
pub mod df_multi;
pub mod df_opt;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod model;
pub mod sdp;

pub use error::{Error, Result};
