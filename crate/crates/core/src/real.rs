//! Scalar abstraction for the probability arithmetic.
//!
//! All message-passing math is generic over a floating-point scalar so the
//! same engine runs in `f32` or `f64`. Concrete aliases live at the crate
//! root; `f64` is what the harness and CLI use.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar usable for messages, priors and marginals.
pub trait Real: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {
    /// Default clamp floor for renormalized messages, chosen so that
    /// `1 - clamp` is still representable away from one.
    fn default_clamp() -> Self;

    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("f64 conversion")
    }

    fn half() -> Self {
        Self::from_f64_lossy(0.5)
    }
}

impl Real for f64 {
    fn default_clamp() -> Self {
        1e-12
    }
}

impl Real for f32 {
    fn default_clamp() -> Self {
        1e-6
    }
}
