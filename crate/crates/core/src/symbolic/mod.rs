//! Exact arithmetic on the smooth quantum torus `A_θ`.
//!
//! Elements are finite sums of normal-ordered words `U^m V^n`. The module
//! provides the product, the involution, the canonical trace, the two
//! derivations, and the Polyakov-type action of a morphism between tori.

mod coeff;
mod morphism;
mod poly;

pub use coeff::{unit_phase, Coefficient, QPhase};
pub use morphism::{action, validate_sl2_morphism, TorusMorphism, ACTION_IMAG_TOL};
pub use poly::{Derivation, ExactPoly, NCPoly, PolyRecord, TermRecord};
