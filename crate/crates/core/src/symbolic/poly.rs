use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::coeff::{Coefficient, QPhase};
use crate::error::{Error, Result};

/// One of the two canonical derivations of the quantum torus.
///
/// `First` differentiates along the `U` direction, `Second` along `V`:
/// `δ₁(U^mV^n) = 2πi·m·U^mV^n`, `δ₂(U^mV^n) = 2πi·n·U^mV^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Derivation {
    First,
    Second,
}

impl Derivation {
    pub const ALL: [Derivation; 2] = [Derivation::First, Derivation::Second];
}

impl TryFrom<u8> for Derivation {
    type Error = Error;

    fn try_from(j: u8) -> Result<Self> {
        match j {
            1 => Ok(Derivation::First),
            2 => Ok(Derivation::Second),
            _ => Err(Error::InvalidArgument(format!(
                "derivation index must be 1 or 2, got {j}"
            ))),
        }
    }
}

/// A finite sum `Σ c_{m,n} U^m V^n` of normal-ordered words on the quantum
/// torus `A_θ`, where `UV = e^{2πiθ}VU`.
///
/// Terms are kept in a sparse map with no zero coefficients, so structural
/// equality is algebraic equality.
#[derive(Clone, Debug, PartialEq)]
pub struct NCPoly<C = Complex64> {
    theta: f64,
    terms: BTreeMap<(i64, i64), C>,
}

/// Polynomial whose reordering phases are tracked as exact powers of `e^{2πiθ}`.
pub type ExactPoly = NCPoly<QPhase>;

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if theta.is_finite() && theta > 0.0 && theta < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "deformation parameter must lie in (0, 1), got {theta}"
        )))
    }
}

impl<C: Coefficient> NCPoly<C> {
    pub fn zero(theta: f64) -> Result<Self> {
        check_theta(theta)?;
        Ok(Self {
            theta,
            terms: BTreeMap::new(),
        })
    }

    /// `c·U^m V^n`.
    pub fn monomial(theta: f64, m: i64, n: i64, c: C) -> Result<Self> {
        let mut out = Self::zero(theta)?;
        out.accumulate((m, n), c);
        Ok(out)
    }

    pub fn scalar(theta: f64, c: Complex64) -> Result<Self> {
        Self::monomial(theta, 0, 0, C::from_complex(c))
    }

    pub fn one(theta: f64) -> Result<Self> {
        Self::scalar(theta, Complex64::new(1.0, 0.0))
    }

    /// The generator `U`.
    pub fn u(theta: f64) -> Result<Self> {
        Self::word(theta, 1, 0)
    }

    /// The generator `V`.
    pub fn v(theta: f64) -> Result<Self> {
        Self::word(theta, 0, 1)
    }

    /// `U^m V^n` with unit coefficient.
    pub fn word(theta: f64, m: i64, n: i64) -> Result<Self> {
        Self::monomial(theta, m, n, C::from_complex(Complex64::new(1.0, 0.0)))
    }

    pub fn from_terms<I>(theta: f64, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((i64, i64), C)>,
    {
        let mut out = Self::zero(theta)?;
        for (key, c) in terms {
            out.accumulate(key, c);
        }
        Ok(out)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as `((m, n), coefficient)` in lexicographic order of `(m, n)`.
    pub fn terms(&self) -> impl Iterator<Item = ((i64, i64), &C)> + '_ {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn coefficient(&self, m: i64, n: i64) -> Option<&C> {
        self.terms.get(&(m, n))
    }

    /// The single term, if this is a monomial.
    pub fn as_monomial(&self) -> Option<((i64, i64), &C)> {
        if self.terms.len() == 1 {
            self.terms().next()
        } else {
            None
        }
    }

    fn accumulate(&mut self, key: (i64, i64), c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(existing) => {
                let sum = existing.add(&c);
                if sum.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    fn check_same_algebra(&self, other: &Self) -> Result<()> {
        if self.theta == other.theta {
            Ok(())
        } else {
            Err(Error::ParameterMismatch {
                left: self.theta,
                right: other.theta,
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_algebra(other)?;
        let mut out = self.clone();
        for (&key, c) in &other.terms {
            out.accumulate(key, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self {
            theta: self.theta,
            terms: BTreeMap::new(),
        };
        for (&key, c) in &self.terms {
            out.accumulate(key, c.scale(s));
        }
        out
    }

    /// Product in normal form.
    ///
    /// Uses `(U^a V^b)(U^c V^d) = e^{-2πiθ·bc} U^{a+c} V^{b+d}` on every pair of terms.
    pub fn normal_product(&self, other: &Self) -> Result<Self> {
        self.check_same_algebra(other)?;
        let mut out = Self {
            theta: self.theta,
            terms: BTreeMap::new(),
        };
        for (&(m1, n1), c1) in &self.terms {
            for (&(m2, n2), c2) in &other.terms {
                let c = c1.mul(c2).twist(-n1 * m2, self.theta);
                out.accumulate((m1 + m2, n1 + n2), c);
            }
        }
        Ok(out)
    }

    /// Involution: `(c·U^m V^n)* = conj(c)·e^{-2πiθ·mn}·U^{-m}V^{-n}`.
    pub fn adjoint(&self) -> Self {
        let mut out = Self {
            theta: self.theta,
            terms: BTreeMap::new(),
        };
        for (&(m, n), c) in &self.terms {
            out.accumulate((-m, -n), c.conj().twist(-m * n, self.theta));
        }
        out
    }

    /// Canonical normalized trace: the coefficient of the identity word.
    pub fn trace(&self) -> C {
        self.terms.get(&(0, 0)).cloned().unwrap_or_else(C::zero)
    }

    pub fn derivation(&self, which: Derivation) -> Self {
        let mut out = Self {
            theta: self.theta,
            terms: BTreeMap::new(),
        };
        for (&(m, n), c) in &self.terms {
            let weight = match which {
                Derivation::First => m,
                Derivation::Second => n,
            };
            out.accumulate((m, n), c.scale(Complex64::new(0.0, TAU * weight as f64)));
        }
        out
    }

    /// Numeric polynomial obtained by evaluating every coefficient at θ.
    pub fn to_numeric(&self) -> NCPoly<Complex64> {
        let mut out = NCPoly {
            theta: self.theta,
            terms: BTreeMap::new(),
        };
        for (&key, c) in &self.terms {
            out.accumulate(key, c.evaluate(self.theta));
        }
        out
    }

    /// Whether every coefficient of `self - other` is below `tol` in modulus
    /// once evaluated numerically.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.theta != other.theta {
            return false;
        }
        match self.sub(other) {
            Ok(diff) => diff
                .terms
                .values()
                .all(|c| c.evaluate(self.theta).norm() <= tol),
            Err(_) => false,
        }
    }
}

impl NCPoly<Complex64> {
    /// Lift to phase-exact coefficients (every coefficient becomes `c·q⁰`).
    pub fn to_exact(&self) -> ExactPoly {
        NCPoly {
            theta: self.theta,
            terms: self
                .terms
                .iter()
                .map(|(&k, &c)| (k, QPhase::from_complex(c)))
                .collect(),
        }
    }
}

/// A single term of the JSON wire format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub m: i64,
    pub n: i64,
    pub re: f64,
    pub im: f64,
}

/// JSON wire format: `{"theta": real, "terms": [{"m", "n", "re", "im"}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyRecord {
    pub theta: f64,
    pub terms: Vec<TermRecord>,
}

impl From<&NCPoly<Complex64>> for PolyRecord {
    fn from(p: &NCPoly<Complex64>) -> Self {
        PolyRecord {
            theta: p.theta,
            terms: p
                .terms
                .iter()
                .map(|(&(m, n), c)| TermRecord {
                    m,
                    n,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<PolyRecord> for NCPoly<Complex64> {
    type Error = Error;

    fn try_from(rec: PolyRecord) -> Result<Self> {
        NCPoly::from_terms(
            rec.theta,
            rec.terms
                .into_iter()
                .map(|t| ((t.m, t.n), Complex64::new(t.re, t.im))),
        )
    }
}

impl Serialize for NCPoly<Complex64> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRecord::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for NCPoly<Complex64> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = PolyRecord::deserialize(d)?;
        NCPoly::try_from(rec).map_err(serde::de::Error::custom)
    }
}
