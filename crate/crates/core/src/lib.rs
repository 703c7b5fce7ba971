//! Quantum Fisher information for the stationary state of two uniformly
//! accelerated Unruh-DeWitt detectors.
//!
//! The pipeline is `state -> channel -> tangents -> QFIM -> Cramér-Rao bounds`:
//!
//! ```
//! use udw_qfim::{model::{Axis, ModelPoint}, pipeline::evaluate, channels::ChannelSpec};
//!
//! let p = ModelPoint::new(1.0, 1.0, 0.0).unwrap();
//! let ev = evaluate(&p, &ChannelSpec::Identity, &[Axis::Temperature, Axis::Delta0]).unwrap();
//! assert!((ev.bounds.gamma.unwrap() - 0.5).abs() < 1e-10);
//! ```

pub mod error;
pub mod matops;
pub mod model;
pub mod channels;
pub mod qfim;
pub mod bounds;
pub mod pipeline;
pub mod fixtures;
pub mod sweep;
pub mod verify;
pub mod report;

pub use error::{Error, Result};
