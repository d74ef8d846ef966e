use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt::Debug;

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `e^{2πiθk}`, with the argument reduced mod 1 before scaling by 2π.
pub fn unit_phase(theta: f64, k: i64) -> Complex64 {
    let turns = (theta * k as f64).rem_euclid(1.0);
    Complex64::from_polar(1.0, TAU * turns)
}

/// Coefficient ring for [`NCPoly`](super::NCPoly) terms.
///
/// Reordering a word produces a phase `e^{2πiθk}`. A coefficient type decides
/// how that phase is held: [`Complex64`] multiplies it in immediately, while
/// [`QPhase`] keeps `k` as an exact exponent of `q = e^{2πiθ}`.
pub trait Coefficient: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn from_complex(c: Complex64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn conj(&self) -> Self;
    fn scale(&self, c: Complex64) -> Self;
    /// Multiply by `e^{2πiθk}`.
    fn twist(&self, k: i64, theta: f64) -> Self;
    /// Numeric value at the given deformation parameter.
    fn evaluate(&self, theta: f64) -> Complex64;
}

impl Coefficient for Complex64 {
    fn zero() -> Self {
        ZERO
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn from_complex(c: Complex64) -> Self {
        c
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn scale(&self, c: Complex64) -> Self {
        self * c
    }

    fn twist(&self, k: i64, theta: f64) -> Self {
        if k == 0 {
            return *self;
        }
        self * unit_phase(theta, k)
    }

    fn evaluate(&self, _theta: f64) -> Complex64 {
        *self
    }
}

/// Laurent polynomial in `q = e^{2πiθ}` with complex coefficients.
///
/// Phases produced by reordering are kept as integer exponents, so identities
/// such as `e^{2πiθpq}·e^{-2πiθpq} = 1` hold exactly for any θ.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct QPhase {
    powers: BTreeMap<i64, Complex64>,
}

impl QPhase {
    /// `c·q^k`.
    pub fn term(c: Complex64, k: i64) -> Self {
        let mut powers = BTreeMap::new();
        if !c.is_zero() {
            powers.insert(k, c);
        }
        Self { powers }
    }

    /// Iterate over `(exponent, coefficient)` pairs in increasing exponent.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.powers.iter().map(|(&k, &c)| (k, c))
    }

    /// The coefficient of `q^0` if no other power is present.
    pub fn as_constant(&self) -> Option<Complex64> {
        match self.powers.len() {
            0 => Some(ZERO),
            1 => self.powers.get(&0).copied(),
            _ => None,
        }
    }

    fn accumulate(&mut self, k: i64, c: Complex64) {
        let entry = self.powers.entry(k).or_insert(ZERO);
        *entry += c;
        if entry.is_zero() {
            self.powers.remove(&k);
        }
    }
}

impl Coefficient for QPhase {
    fn zero() -> Self {
        Self::default()
    }

    fn is_zero(&self) -> bool {
        self.powers.is_empty()
    }

    fn from_complex(c: Complex64) -> Self {
        Self::term(c, 0)
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.iter() {
            out.accumulate(k, c);
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (ka, ca) in self.iter() {
            for (kb, cb) in other.iter() {
                out.accumulate(ka + kb, ca * cb);
            }
        }
        out
    }

    // conj(q) = q^{-1} since |q| = 1.
    fn conj(&self) -> Self {
        let mut out = Self::default();
        for (k, c) in self.iter() {
            out.accumulate(-k, c.conj());
        }
        out
    }

    fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::default();
        for (k, a) in self.iter() {
            out.accumulate(k, a * c);
        }
        out
    }

    fn twist(&self, k: i64, _theta: f64) -> Self {
        Self {
            powers: self.powers.iter().map(|(&e, &c)| (e + k, c)).collect(),
        }
    }

    fn evaluate(&self, theta: f64) -> Complex64 {
        self.iter().map(|(k, c)| c * unit_phase(theta, k)).sum()
    }
}
