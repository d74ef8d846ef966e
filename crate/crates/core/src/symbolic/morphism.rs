use num_complex::Complex64;

use super::coeff::{unit_phase, Coefficient};
use super::poly::{check_theta, Derivation, NCPoly};
use crate::error::{Error, Result};

/// Largest imaginary residue tolerated in a floating-point action value,
/// relative to `max(1, |S|)`.
pub const ACTION_IMAG_TOL: f64 = 1e-12;

/// A *-morphism `A_Θ → A_θ` given by the images of the two generators.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusMorphism<C = Complex64> {
    theta_source: f64,
    image_u: NCPoly<C>,
    image_v: NCPoly<C>,
}

/// Whether `U ↦ U^pV^q, V ↦ U^rV^s` preserves `UV = e^{2πiθ}VU` for the same θ,
/// i.e. whether `ps − qr = 1`.
pub fn validate_sl2_morphism(p: i64, q: i64, r: i64, s: i64) -> bool {
    p * s - q * r == 1
}

impl<C: Coefficient> TorusMorphism<C> {
    pub fn new(theta_source: f64, image_u: NCPoly<C>, image_v: NCPoly<C>) -> Result<Self> {
        check_theta(theta_source)?;
        if image_u.theta() != image_v.theta() {
            return Err(Error::ParameterMismatch {
                left: image_u.theta(),
                right: image_v.theta(),
            });
        }
        Ok(Self {
            theta_source,
            image_u,
            image_v,
        })
    }

    pub fn identity(theta: f64) -> Result<Self> {
        Self::new(theta, NCPoly::u(theta)?, NCPoly::v(theta)?)
    }

    /// `φ_A : U ↦ U^pV^q, V ↦ U^rV^s` on a single torus.
    ///
    /// Any integer matrix is accepted; use [`validate_sl2_morphism`] or
    /// [`TorusMorphism::is_well_defined`] to check the relation.
    pub fn from_matrix(theta: f64, p: i64, q: i64, r: i64, s: i64) -> Result<Self> {
        Self::new(
            theta,
            NCPoly::word(theta, p, q)?,
            NCPoly::word(theta, r, s)?,
        )
    }

    pub fn theta_source(&self) -> f64 {
        self.theta_source
    }

    pub fn theta_target(&self) -> f64 {
        self.image_u.theta()
    }

    pub fn image_u(&self) -> &NCPoly<C> {
        &self.image_u
    }

    pub fn image_v(&self) -> &NCPoly<C> {
        &self.image_v
    }

    /// Checks `φ(U)φ(V) = e^{2πiΘ}φ(V)φ(U)` when both images are unit-modulus
    /// monomials. Returns `None` for any other shape of image.
    ///
    /// For monomials `U^pV^q`, `U^rV^s` this reduces to `θ(ps − qr) − Θ ∈ ℤ`,
    /// tested numerically to `tol`.
    pub fn is_well_defined(&self, tol: f64) -> Option<bool> {
        let theta = self.theta_target();
        let ((p, q), a) = self.image_u.as_monomial()?;
        let ((r, s), b) = self.image_v.as_monomial()?;
        let unit = |c: &C| (c.evaluate(theta).norm() - 1.0).abs() <= tol;
        if !unit(a) || !unit(b) {
            return None;
        }
        let lhs = unit_phase(theta, p * s - q * r);
        let rhs = Complex64::from_polar(1.0, std::f64::consts::TAU * self.theta_source);
        Some((lhs - rhs).norm() <= tol)
    }

    /// Polyakov-type action `Σ_{k,l} τ[δ_k(φ(U_l))* δ_k(φ(U_l))]` in the
    /// coefficient ring, before collapsing to a number.
    pub fn action_coefficient(&self) -> Result<C> {
        let mut total = C::zero();
        for image in [&self.image_u, &self.image_v] {
            for k in Derivation::ALL {
                let d = image.derivation(k);
                let density = d.adjoint().normal_product(&d)?;
                total = total.add(&density.trace());
            }
        }
        Ok(total)
    }

    /// Numeric action value. Fails if the imaginary residue exceeds
    /// [`ACTION_IMAG_TOL`] relative to `max(1, |S|)`.
    pub fn action(&self) -> Result<f64> {
        let value = self.action_coefficient()?.evaluate(self.theta_target());
        let scale = value.re.abs().max(1.0);
        if value.im.abs() > ACTION_IMAG_TOL * scale {
            return Err(Error::Consistency(format!(
                "action has imaginary part {:e}",
                value.im
            )));
        }
        Ok(value.re)
    }
}

/// Free-function form of [`TorusMorphism::action`].
pub fn action<C: Coefficient>(phi: &TorusMorphism<C>) -> Result<f64> {
    phi.action()
}
