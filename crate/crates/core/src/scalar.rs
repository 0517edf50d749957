use std::fmt::Debug;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Synaptic weight scalar: `f32` or `f64`.
pub trait Weight: Float + FromPrimitive + ToPrimitive + Debug + Default + Send + Sync + 'static {
    fn from_f64_lossy(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).unwrap_or_else(Self::nan)
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Weight for f32 {}
impl Weight for f64 {}
