//! Field-operation tallies.
//!
//! Every multiplication, division/inversion and addition performed through a
//! [`crate::field::Field`] context ticks the counter attached to that context.
//! Squarings count as multiplications and a fused divide counts as one
//! division, which is the accounting convention used throughout the cost
//! contracts in this crate.

use std::ops::{Add, AddAssign, Sub};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::Serialize;

/// Immutable snapshot of a counter, also used for deltas between snapshots.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OpCount {
    /// Field multiplications (squarings included).
    pub mul: u64,
    /// Field divisions and inversions.
    pub div: u64,
    /// Field additions, subtractions and negations (informational).
    pub add: u64,
}

impl OpCount {
    /// Weighted cost in multiplication-equivalents; additions are free.
    pub fn weighted(&self, div_weight: f64) -> f64 {
        self.mul as f64 + div_weight * self.div as f64
    }
}

impl Add for OpCount {
    type Output = OpCount;
    fn add(self, rhs: OpCount) -> OpCount {
        OpCount {
            mul: self.mul + rhs.mul,
            div: self.div + rhs.div,
            add: self.add + rhs.add,
        }
    }
}

impl AddAssign for OpCount {
    fn add_assign(&mut self, rhs: OpCount) {
        *self = *self + rhs;
    }
}

impl Sub for OpCount {
    type Output = OpCount;
    fn sub(self, rhs: OpCount) -> OpCount {
        OpCount {
            mul: self.mul - rhs.mul,
            div: self.div - rhs.div,
            add: self.add - rhs.add,
        }
    }
}

/// Mutable tally shared by every clone of a field context.
///
/// Counts grow monotonically; measurements are taken as deltas between two
/// [`Counter::snapshot`] calls, so nested measurement scopes sum to their
/// parent scope. Counters from parallel runs merge by adding snapshots.
#[derive(Debug, Default)]
pub struct Counter {
    mul: AtomicU64,
    div: AtomicU64,
    add: AtomicU64,
}

impl Counter {
    pub fn new() -> Arc<Self> {
        Arc::new(Counter::default())
    }

    #[inline]
    pub fn tick_mul(&self) {
        self.mul.fetch_add(1, Ordering::Relaxed);
    }

    #[inline]
    pub fn tick_div(&self) {
        self.div.fetch_add(1, Ordering::Relaxed);
    }

    #[inline]
    pub fn tick_add(&self) {
        self.add.fetch_add(1, Ordering::Relaxed);
    }

    pub fn snapshot(&self) -> OpCount {
        OpCount {
            mul: self.mul.load(Ordering::Relaxed),
            div: self.div.load(Ordering::Relaxed),
            add: self.add.load(Ordering::Relaxed),
        }
    }
}
