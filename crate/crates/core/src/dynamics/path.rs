//! Affine target paths `A(t) = start + t·delta` on `[0, 1]`.

use serde::{Deserialize, Serialize};

use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetPath {
    pub start: C64,
    pub delta: C64,
}

impl TargetPath {
    pub fn new(start: C64, delta: C64) -> Self {
        TargetPath { start, delta }
    }

    /// The path from `start` to `end`.
    pub fn between(start: C64, end: C64) -> Self {
        TargetPath {
            start,
            delta: end - start,
        }
    }

    pub fn constant(value: C64) -> Self {
        TargetPath {
            start: value,
            delta: C64::new(0.0, 0.0),
        }
    }

    pub fn at(&self, t: f64) -> C64 {
        self.start + self.delta * t
    }

    pub fn end(&self) -> C64 {
        self.start + self.delta
    }

    /// `dA/dt`, constant along the path.
    pub fn derivative(&self) -> C64 {
        self.delta
    }

    /// The same segment traversed backwards.
    pub fn reversed(&self) -> Self {
        TargetPath {
            start: self.end(),
            delta: -self.delta,
        }
    }
}
