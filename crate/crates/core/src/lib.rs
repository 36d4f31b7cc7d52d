//! Generalized Choi maps on 3×3 complex matrices.
//!
//! A map is fixed by six gauge-fixed reals `(a, b, c, d, e, f)`. The crate
//! decides positivity from closed-form conditions (checked against a
//! principal-minor oracle), certifies optimality through the spanning
//! property, and describes the parameter-space regions where optimal maps
//! live.

pub mod error;
pub mod geometry;
pub mod map;
pub mod matrix;
pub mod optimality;
pub mod positivity;
pub mod tolerance;

pub use error::{Error, Result};
pub use map::{gauge_fix, GeneralizedMap, MapParams};
pub use matrix::{kron3, CMatrix3, CMatrix9, CVector3, CVector9, Hermitian3, Hermitian9};
pub use tolerance::ToleranceConfig;
