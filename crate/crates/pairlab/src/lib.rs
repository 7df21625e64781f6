//! Operation-counting laboratory for squared Weil and Tate pairings on
//! elliptic curves and genus-2 hyperelliptic Jacobians.
//!
//! The crate implements four elliptic-curve pairing engines (Miller's Weil
//! and Tate pairings plus their deterministic squared variants), Cantor
//! arithmetic on genus-2 Jacobians in Mumford representation, the squared
//! Tate pairing on those Jacobians with its Frey-Rueck-style baseline, and a
//! harness that reproduces the per-step field-operation budgets of each
//! algorithm with instrumented counters.

pub mod bench;
pub mod chain;
pub mod config;
pub mod counter;
pub mod ec;
pub mod ec_pairings;
pub mod error;
pub mod field;
pub mod golden;
pub mod hec_pairings;
pub mod jacobian;
pub mod poly;
pub mod report;
pub mod testkit;
pub mod verify;

pub use counter::{Counter, OpCount};
pub use error::{Error, Result};
pub use field::{Field, FieldElement, FieldParams};
