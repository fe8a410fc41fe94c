//! Exact computational machinery for anomalous symmetries of finite groups.
//!
//! Everything here is integer or rational arithmetic; there is no floating
//! point anywhere. The crate provides:
//!
//! * [`exactmath`] — phases in Q/Z, cyclotomic fields Q(zeta_N), integer
//!   Smith normal form, and linear solving over Z/n;
//! * [`fingroup`] — multiplication-table groups, homomorphisms, finite
//!   G-modules, coinduced modules, and twisted extensions;
//! * [`cochain`] — normalized cochain complexes, the bar differential,
//!   cocycle/coboundary decision procedures, and cohomology groups;
//! * [`resolve`] — the anomaly-resolution pipeline: from a group `Q` and a
//!   3-cocycle it builds a finite extension `G -> Q` together with a
//!   2-cochain trivializing the pulled-back cocycle, as a machine-checkable
//!   certificate;
//! * [`twisted`] — desk-scale models of twisted crossed products carrying
//!   the resulting anomalous action, and a verifier for the defining
//!   identities (intertwiner law and the pentagon);
//! * [`torus`] — symbolic verification of the explicit rotation-action
//!   cocycle trivializations on the 2-torus, as Laurent monomial identities;
//! * [`coarse`] — finite truncations of wedge metric spaces with band
//!   operators, checking commutator support and the pentagon defect.

pub mod coarse;
pub mod cochain;
pub mod error;
pub mod exactmath;
pub mod fingroup;
mod par;
pub mod report;
pub mod resolve;
pub mod torus;
pub mod twisted;

pub use error::{Error, Result};
pub use report::{Check, Report};
