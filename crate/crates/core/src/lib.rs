//! Noncommutative sigma-model toolkit.
//!
//! * [`symbolic`]: the quantum torus `A_θ` as an algebra of normal-ordered
//!   Laurent words, with trace, derivations and the Polyakov-type action.
//! * [`matrix_rep`]: clock and shift matrices realizing the torus relation in
//!   `M_n(ℂ)`, and the action of an inner automorphism `Ad W`.
//! * [`su2`]: Euler angles, Haar quadrature and the closed-form action on `M_2(ℂ)`.
//! * [`thermo`]: partition function and thermodynamic observables over SU(2).
//! * [`existence`]: the GL(2,ℤ) Möbius action and integer relation search.

pub mod error;
pub mod existence;
pub mod fit;
pub mod matrix_rep;
pub mod optimize;
pub mod quadrature;
pub mod su2;
pub mod sum;
pub mod symbolic;
pub mod thermo;

pub use error::{Error, Result};
