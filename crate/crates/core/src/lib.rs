//! Two two-level emitters coupled through a lens that images each one onto
//! the other, so that part of each emitter's field returns to its partner
//! after a propagation delay τ.
//!
//! The crate provides
//! - series solutions for the free decay and the emitted spectrum ([`free`]),
//! - weakly driven dynamics, scattering rates and fringe visibilities ([`driven`]),
//! - photon-photon correlations ([`correlations`]),
//! - a direct delay-equation integrator used as an independent reference ([`oracle`]),
//! - and the acceptance checks run by `lensdimer verify` ([`verify`]).
//!
//! ```
//! use lensdimer::{free, InitialState, SystemParams};
//!
//! let p = SystemParams::free(1.0, 10.0, 0.4, std::f64::consts::PI);
//! let tr = free::evolve_free(&p, &InitialState::atom1(), &[0.0, 5.0, 12.0]).unwrap();
//! assert!(tr.b2[1].norm() == 0.0 && tr.b2[2].norm() > 0.0);
//! ```

// Reference digits and Kronrod nodes are kept as published; negated float
// comparisons are deliberate so that NaN inputs fail validation.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod correlations;
pub mod driven;
pub mod error;
pub mod free;
pub mod model;
pub mod oracle;
pub mod par;
pub mod quadrature;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use model::{coupling_k, Atom, InitialState, LensGeometry, SystemParams, Time};
pub use num_complex::Complex64;
pub use par::Execution;

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
