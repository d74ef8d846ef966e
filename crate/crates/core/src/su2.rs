//! SU(2) in Euler angles, its normalized Haar measure, and the closed-form
//! Polyakov action of `Ad g` on the 2×2 clock/shift representation.
//!
//! `g(φ, θ, ψ) = [[cos(θ/2)e^{i(φ+ψ)/2}, i·sin(θ/2)e^{i(φ−ψ)/2}],
//!               [i·sin(θ/2)e^{−i(φ−ψ)/2}, cos(θ/2)e^{−i(φ+ψ)/2}]]`
//! with `0 ≤ θ ≤ π`, `0 ≤ φ ≤ 2π`, `0 ≤ ψ ≤ 4π` and
//! `dμ = sinθ dθ dφ dψ / 16π²`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix_rep::CMatrix;
use crate::quadrature::gauss_legendre_on;
use crate::sum::pairwise_sum;

pub const PHI_MAX: f64 = 2.0 * PI;
pub const THETA_MAX: f64 = PI;
pub const PSI_MAX: f64 = 4.0 * PI;

/// Largest imaginary residue of the closed-form action, relative to `max(1, |S|)`.
pub const CLOSED_FORM_IMAG_TOL: f64 = 1e-9;

/// A point of SU(2) in Euler angles with a quadrature weight.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EulerPoint {
    pub phi: f64,
    pub theta: f64,
    pub psi: f64,
    pub weight: f64,
}

impl EulerPoint {
    /// Point with zero weight; fails if an angle is outside its range.
    pub fn new(phi: f64, theta: f64, psi: f64) -> Result<Self> {
        Self::weighted(phi, theta, psi, 0.0)
    }

    pub fn weighted(phi: f64, theta: f64, psi: f64, weight: f64) -> Result<Self> {
        check_range("phi", phi, PHI_MAX)?;
        check_range("theta", theta, THETA_MAX)?;
        check_range("psi", psi, PSI_MAX)?;
        if !(weight.is_finite() && weight >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "weight must be nonnegative, got {weight}"
            )));
        }
        Ok(Self {
            phi,
            theta,
            psi,
            weight,
        })
    }

    /// Map arbitrary real angles onto the canonical ranges without changing the
    /// action value: the action has period π in φ and ψ and is even and
    /// 2π-periodic in θ.
    pub fn canonical(phi: f64, theta: f64, psi: f64) -> Self {
        let mut t = theta.rem_euclid(2.0 * PI);
        if t > PI {
            t = 2.0 * PI - t;
        }
        Self {
            phi: phi.rem_euclid(PHI_MAX),
            theta: t,
            psi: psi.rem_euclid(PSI_MAX),
            weight: 0.0,
        }
    }

    /// The SU(2) matrix `g(φ, θ, ψ)`.
    pub fn matrix(&self) -> CMatrix {
        let (half_sum, half_diff) = (0.5 * (self.phi + self.psi), 0.5 * (self.phi - self.psi));
        let c = (0.5 * self.theta).cos();
        let s = (0.5 * self.theta).sin();
        let i = Complex64::new(0.0, 1.0);
        CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::from_polar(c, half_sum),
                i * Complex64::from_polar(s, half_diff),
                i * Complex64::from_polar(s, -half_diff),
                Complex64::from_polar(c, -half_sum),
            ],
        )
    }
}

fn check_range(name: &str, value: f64, max: f64) -> Result<()> {
    if value.is_finite() && (0.0..=max).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} = {value} outside [0, {max}]"
        )))
    }
}

pub fn euler_matrix(p: &EulerPoint) -> CMatrix {
    p.matrix()
}

/// Closed-form action as a complex number, for any real angles.
///
/// `(1/16r²)e^{−2i(φ+ψ)}[−4(−1+e^{4iφ})(−1+e^{4iψ})cosθ
///   − (1+e^{2iφ})²(1+e^{2iψ})²cos2θ
///   + 4e^{2i(φ+ψ)}(21 + cos2φ(1−3cos2ψ) + cos2ψ)]`
pub fn closed_form_complex(phi: f64, theta: f64, psi: f64, r: f64) -> Complex64 {
    let e = |a: f64| Complex64::from_polar(1.0, a);
    let one = Complex64::new(1.0, 0.0);
    let first = (e(4.0 * phi) - one) * (e(4.0 * psi) - one) * (-4.0 * theta.cos());
    let second = (one + e(2.0 * phi)).powi(2) * (one + e(2.0 * psi)).powi(2) * (2.0 * theta).cos();
    let bracket = 21.0 + (2.0 * phi).cos() * (1.0 - 3.0 * (2.0 * psi).cos()) + (2.0 * psi).cos();
    let third = e(2.0 * (phi + psi)) * (4.0 * bracket);
    e(-2.0 * (phi + psi)) * (first - second + third) / (16.0 * r * r)
}

/// Real part of [`closed_form_complex`] without range or residue checks.
/// Used on hot paths (quadrature, optimization).
pub fn closed_form_unchecked(phi: f64, theta: f64, psi: f64, r: f64) -> f64 {
    closed_form_complex(phi, theta, psi, r).re
}

/// Closed-form action `S_P(g)` of `Ad g` on the 2×2 representation at scale `r`.
pub fn closed_form_action(p: &EulerPoint, r: f64) -> Result<f64> {
    EulerPoint::new(p.phi, p.theta, p.psi)?;
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "r must be positive, got {r}"
        )));
    }
    let value = closed_form_complex(p.phi, p.theta, p.psi, r);
    if value.im.abs() > CLOSED_FORM_IMAG_TOL * value.re.abs().max(1.0) {
        return Err(Error::Consistency(format!(
            "closed-form action has imaginary part {:e} at ({}, {}, {})",
            value.im, p.phi, p.theta, p.psi
        )));
    }
    Ok(value.re)
}

/// Tensor-product Haar quadrature on SU(2).
///
/// Gauss–Legendre in θ with the `sinθ` density folded into the weights and
/// equally spaced nodes in the periodic angles φ and ψ.
#[derive(Clone, Debug, PartialEq)]
pub struct HaarGrid {
    dims: (usize, usize, usize),
    points: Vec<EulerPoint>,
}

impl HaarGrid {
    pub fn new(n_theta: usize, n_phi: usize, n_psi: usize) -> Result<Self> {
        if n_theta < 2 || n_phi < 2 || n_psi < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid sizes must be at least 2, got ({n_theta}, {n_phi}, {n_psi})"
            )));
        }
        let (thetas, theta_w) = gauss_legendre_on(n_theta, 0.0, PI);
        let d_phi = PHI_MAX / n_phi as f64;
        let d_psi = PSI_MAX / n_psi as f64;
        let norm = d_phi * d_psi / (16.0 * PI * PI);
        let mut points = Vec::with_capacity(n_theta * n_phi * n_psi);
        for (&theta, &wt) in thetas.iter().zip(&theta_w) {
            let w = wt * theta.sin() * norm;
            for i in 0..n_phi {
                for j in 0..n_psi {
                    points.push(EulerPoint {
                        phi: d_phi * i as f64,
                        theta,
                        psi: d_psi * j as f64,
                        weight: w,
                    });
                }
            }
        }
        Ok(Self {
            dims: (n_theta, n_phi, n_psi),
            points,
        })
    }

    pub fn cube(n: usize) -> Result<Self> {
        Self::new(n, n, n)
    }

    /// `(n_theta, n_phi, n_psi)`.
    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    pub fn points(&self) -> &[EulerPoint] {
        &self.points
    }

    pub fn total_weight(&self) -> f64 {
        let w: Vec<f64> = self.points.iter().map(|p| p.weight).collect();
        pairwise_sum(&w)
    }

    /// `∫ f dμ` approximated on the grid; evaluation runs in parallel and the
    /// reduction order is fixed.
    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(&EulerPoint) -> f64 + Sync,
    {
        let terms: Vec<f64> = self.points.par_iter().map(|p| p.weight * f(p)).collect();
        pairwise_sum(&terms)
    }
}

pub fn haar_grid(n_theta: usize, n_phi: usize, n_psi: usize) -> Result<HaarGrid> {
    HaarGrid::new(n_theta, n_phi, n_psi)
}
