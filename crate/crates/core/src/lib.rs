//! Point-interaction models, their boundary symbols on the compactified
//! spectral square, winding numbers, and a Levinson-type check relating the
//! total winding to the number of bound states.

pub mod boundary;
pub mod error;
pub mod golden;
pub mod levinson;
pub mod models;
pub mod symbols;
pub mod waveop;
pub mod winding;

pub use error::{Error, Result};
pub use models::{ExtendedReal, Model, ModelKind};
pub use symbols::{Direction, C64};
