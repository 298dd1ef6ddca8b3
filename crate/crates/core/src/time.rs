//! Integer nanosecond durations and instants.
//!
//! All simulation time is kept in whole nanoseconds. Synchronization slot
//! durations such as 63 µs and 125 µs are not multiples of the 9 µs backoff
//! slot, so fractional slot counts are never stored; they are derived from
//! exact nanosecond values only for display.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Sub};

use serde::{Deserialize, Serialize};

/// A duration (or an absolute instant measured from `t = 0`) in nanoseconds.
#[derive(
    Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Ns(pub u64);

impl Ns {
    pub const ZERO: Ns = Ns(0);

    pub const fn from_us(us: u64) -> Ns {
        Ns(us * 1_000)
    }

    pub const fn from_ms(ms: u64) -> Ns {
        Ns(ms * 1_000_000)
    }

    /// Converts a microsecond value, rejecting values that are not a whole
    /// number of nanoseconds (or are negative / non-finite).
    pub fn try_from_us_f64(us: f64) -> Option<Ns> {
        if !us.is_finite() || us < 0.0 {
            return None;
        }
        let ns = us * 1_000.0;
        let rounded = ns.round();
        if (ns - rounded).abs() > 1e-6 || rounded > u64::MAX as f64 {
            return None;
        }
        Some(Ns(rounded as u64))
    }

    pub const fn as_nanos(self) -> u64 {
        self.0
    }

    pub fn as_us_f64(self) -> f64 {
        self.0 as f64 / 1_000.0
    }

    pub fn as_secs_f64(self) -> f64 {
        self.0 as f64 / 1e9
    }

    /// This duration expressed in (possibly fractional) backoff slots.
    pub fn in_slots(self, slot: Ns) -> f64 {
        self.0 as f64 / slot.0 as f64
    }

    pub fn saturating_sub(self, rhs: Ns) -> Ns {
        Ns(self.0.saturating_sub(rhs.0))
    }
}

impl Add for Ns {
    type Output = Ns;
    fn add(self, rhs: Ns) -> Ns {
        Ns(self.0 + rhs.0)
    }
}

impl AddAssign for Ns {
    fn add_assign(&mut self, rhs: Ns) {
        self.0 += rhs.0;
    }
}

impl Sub for Ns {
    type Output = Ns;
    fn sub(self, rhs: Ns) -> Ns {
        Ns(self.0 - rhs.0)
    }
}

impl Mul<u64> for Ns {
    type Output = Ns;
    fn mul(self, rhs: u64) -> Ns {
        Ns(self.0 * rhs)
    }
}

impl Sum for Ns {
    fn sum<I: Iterator<Item = Ns>>(iter: I) -> Ns {
        Ns(iter.map(|d| d.0).sum())
    }
}

impl fmt::Display for Ns {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(1_000) {
            write!(f, "{}us", self.0 / 1_000)
        } else {
            write!(f, "{}ns", self.0)
        }
    }
}
