//! Exact divisor-class arithmetic on the moduli space of stable pointed curves.
//!
//! The crate evaluates closed-form pullbacks of the universal theta divisor
//! (degree 0 and degree g-1) to `M̄_{g,n}`, re-derives them from test-curve
//! intersection numbers by exact linear algebra, and expands the double
//! ramification cycle formally on compact type.
//!
//! All coefficients are [`Rational`]s; no floating point is used anywhere.

pub mod basis;
pub mod cli;
pub mod curves;
pub mod dr;
pub mod error;
pub mod linalg;
pub mod rational;
pub mod solver;
pub mod sweep;
pub mod theta;

pub use basis::{Basis, BoundaryIndex, DivGenerator, DivisorClass, Moduli, Permutation, PointSet};
pub use curves::{IntersectionMatrix, TestCurve};
pub use dr::{FormalCycle, FormalMonomial};
pub use error::{Error, Result};
pub use rational::Rational;
pub use theta::{CorrectionLedger, PlusConvention, ThetaKind, WeightVector};
