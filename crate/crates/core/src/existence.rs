//! Möbius action of GL(2,ℤ) and the integer relation `nΘ = cθ + d`.
//!
//! A unital *-homomorphism `A_Θ → M_n(A_θ)` exists iff `nΘ = cθ + d` for
//! some integers `c, d`; for `n = 1` it is an isomorphism iff `c = ±1`.
//! With θ known only in floating point the search below reports candidates
//! within a tolerance, never proofs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default residual tolerance for [`relation_search`]. Random reals hit it
/// with probability about `2·tol` per enumerated `(n, c)` pair and `d`.
pub const DEFAULT_TOL: f64 = 1e-9;

/// An element of GL(2,ℤ): `[[a, b], [c, d]]` with `ad − bc = ±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntegerMatrix2 {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl IntegerMatrix2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a * d - b * c;
        if det.abs() != 1 {
            return Err(Error::InvalidMatrix { det });
        }
        Ok(Self { a, b, c, d })
    }

    pub fn identity() -> Self {
        Self {
            a: 1,
            b: 0,
            c: 0,
            d: 1,
        }
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    /// `gθ = (aθ + b)/(cθ + d)`.
    pub fn act(&self, theta: f64) -> Result<f64> {
        let denom = self.c as f64 * theta + self.d as f64;
        if denom == 0.0 {
            return Err(Error::InvalidArgument(format!(
                "cθ + d vanishes at θ = {theta}"
            )));
        }
        Ok((self.a as f64 * theta + self.b as f64) / denom)
    }
}

impl std::ops::Mul for IntegerMatrix2 {
    type Output = IntegerMatrix2;

    fn mul(self, rhs: Self) -> Self {
        self.compose(&rhs)
    }
}

pub fn mobius_act(g: &IntegerMatrix2, theta: f64) -> Result<f64> {
    g.act(theta)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationHit {
    pub n: i64,
    pub c: i64,
    pub d: i64,
    pub residual: f64,
    /// `n = 1` and `c = ±1`: the relation then describes an isomorphism.
    pub isomorphism_candidate: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub n_max: i64,
    pub c_max: i64,
    pub d_max: i64,
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} must lie in (0, 1), got {x}"
        )))
    }
}

/// All `(n, c, d)` with `1 ≤ n ≤ n_max`, `0 < |c| ≤ c_max`, `|d| ≤ d_max` and
/// `|nΘ − cθ − d| < tol`, sorted by residual (ties by `(n, c, d)`).
///
/// For each `(n, c)` only the integers `d` within `tol` of `nΘ − cθ` are
/// tested, which visits the same set as the full cube.
pub fn relation_search(
    big_theta: f64,
    theta: f64,
    bounds: SearchBounds,
    tol: f64,
) -> Result<Vec<RelationHit>> {
    check_unit("Theta", big_theta)?;
    check_unit("theta", theta)?;
    if bounds.n_max < 1 || bounds.c_max < 1 || bounds.d_max < 0 {
        return Err(Error::InvalidArgument(format!(
            "search bounds must be positive, got {bounds:?}"
        )));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }

    let mut hits = Vec::new();
    for n in 1..=bounds.n_max {
        for c in (-bounds.c_max..=bounds.c_max).filter(|&c| c != 0) {
            let target = n as f64 * big_theta - c as f64 * theta;
            let lo = ((target - tol).ceil() as i64).max(-bounds.d_max);
            let hi = ((target + tol).floor() as i64).min(bounds.d_max);
            for d in lo..=hi {
                let residual = (n as f64 * big_theta - c as f64 * theta - d as f64).abs();
                if residual < tol {
                    hits.push(RelationHit {
                        n,
                        c,
                        d,
                        residual,
                        isomorphism_candidate: n == 1 && c.abs() == 1,
                    });
                }
            }
        }
    }
    hits.sort_by(|a, b| {
        a.residual
            .total_cmp(&b.residual)
            .then((a.n, a.c, a.d).cmp(&(b.n, b.c, b.d)))
    });
    Ok(hits)
}
