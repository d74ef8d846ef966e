//! Finite-dimensional clock/shift representation of the quantum torus.
//!
//! On `ℂ^n` with basis `|j⟩₁`, `u|j⟩₁ = q^j|j⟩₁` and `v|j⟩₁ = |j+1⟩₁`
//! (indices mod n), with `q = e^{2πi/n}`, so that `uv = qvu` and
//! `u^n = v^n = 1`. The position-like hermitian matrices `x`, `y` are
//! diagonal in `|j⟩₁` and in the Fourier basis `|l⟩₂` respectively, both with
//! spectrum `(k/r)·{0, …, n−1}` where `n = 2πr²/k`.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::symbolic::{Derivation, NCPoly};

pub type CMatrix = DMatrix<Complex64>;

/// Unitarity tolerance for [`ClockShiftRep::conj_action`] (Frobenius norm of `WW* − 1`).
pub const UNITARITY_TOL: f64 = 1e-10;
/// Largest imaginary residue tolerated in [`ClockShiftRep::conj_action`].
pub const CONJ_ACTION_IMAG_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug)]
pub struct ClockShiftRep {
    n: usize,
    r: f64,
    k: f64,
    u: CMatrix,
    v: CMatrix,
    x: CMatrix,
    y: CMatrix,
    p: CMatrix,
    q_proj: CMatrix,
    fourier: CMatrix,
}

/// `e^{2πi·j/n}` with `j` reduced mod n first.
fn root_of_unity(n: usize, j: i64) -> Complex64 {
    let j = j.rem_euclid(n as i64);
    Complex64::from_polar(1.0, TAU * j as f64 / n as f64)
}

impl ClockShiftRep {
    /// Build the representation of dimension `n ≥ 2` at length scale `r > 0`,
    /// fixing `k = 2πr²/n`.
    pub fn new(n: usize, r: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "dimension must be at least 2, got {n}"
            )));
        }
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "length scale must be positive, got {r}"
            )));
        }
        let nf = n as f64;
        let k = TAU * r * r / nf;
        let step = k / r;

        let u = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                root_of_unity(n, i as i64)
            } else {
                ZERO
            }
        });
        let v = CMatrix::from_fn(n, n, |i, j| if i == (j + 1) % n { ONE } else { ZERO });
        let spectrum = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(step * i as f64, 0.0)
            } else {
                ZERO
            }
        });
        let x = spectrum.clone();

        // Column l holds |l⟩₂ = n^{-1/2} Σ_j q^{-jl} |j⟩₁.
        let norm = 1.0 / nf.sqrt();
        let fourier = CMatrix::from_fn(n, n, |j, l| root_of_unity(n, -((j * l) as i64)) * norm);
        let y = &fourier * &spectrum * fourier.adjoint();

        let p = CMatrix::from_fn(
            n,
            n,
            |i, j| if i == n - 1 && j == n - 1 { ONE } else { ZERO },
        );
        let zero_mode = fourier.column(0).into_owned();
        let q_proj = &zero_mode * zero_mode.adjoint();

        Ok(Self {
            n,
            r,
            k,
            u,
            v,
            x,
            y,
            p,
            q_proj,
            fourier,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// `q = e^{2πi/n} = e^{ik/r²}`.
    pub fn q(&self) -> Complex64 {
        root_of_unity(self.n, 1)
    }

    pub fn u(&self) -> &CMatrix {
        &self.u
    }

    pub fn v(&self) -> &CMatrix {
        &self.v
    }

    pub fn x(&self) -> &CMatrix {
        &self.x
    }

    pub fn y(&self) -> &CMatrix {
        &self.y
    }

    /// `P = |n−1⟩₁⟨n−1|`.
    pub fn proj_p(&self) -> &CMatrix {
        &self.p
    }

    /// `Q = |0⟩₂⟨0|`.
    pub fn proj_q(&self) -> &CMatrix {
        &self.q_proj
    }

    /// Change of basis whose columns are the `|l⟩₂` vectors; `F* v F` is diagonal.
    pub fn fourier(&self) -> &CMatrix {
        &self.fourier
    }

    pub fn identity(&self) -> CMatrix {
        CMatrix::identity(self.n, self.n)
    }

    fn check_dim(&self, a: &CMatrix) -> Result<()> {
        if a.nrows() == self.n && a.ncols() == self.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n,
                rows: a.nrows(),
                cols: a.ncols(),
            })
        }
    }

    /// `δ₁ = −(1/ik)·ad y`, `δ₂ = −(1/ik)·ad x`.
    pub fn derivation(&self, which: Derivation, a: &CMatrix) -> Result<CMatrix> {
        self.check_dim(a)?;
        let h = match which {
            Derivation::First => &self.y,
            Derivation::Second => &self.x,
        };
        let commutator = h * a - a * h;
        // −1/(ik) = i/k
        Ok(commutator * Complex64::new(0.0, 1.0 / self.k))
    }

    /// `S(W) = Σ_{k,l} Tr[δ_k(W u_l W*)* δ_k(W u_l W*)]` with `u₁ = u`, `u₂ = v`.
    pub fn conj_action(&self, w: &CMatrix) -> Result<f64> {
        self.check_dim(w)?;
        let deviation = (w * w.adjoint() - self.identity()).norm();
        if deviation > UNITARITY_TOL {
            return Err(Error::NotUnitary {
                deviation,
                tolerance: UNITARITY_TOL,
            });
        }
        let w_adj = w.adjoint();
        let mut total = ZERO;
        for generator in [&self.u, &self.v] {
            let image = w * generator * &w_adj;
            for k in Derivation::ALL {
                let d = self.derivation(k, &image)?;
                total += (d.adjoint() * &d).trace();
            }
        }
        if total.im.abs() > CONJ_ACTION_IMAG_TOL * total.re.abs().max(1.0) {
            return Err(Error::Consistency(format!(
                "conjugation action has imaginary part {:e}",
                total.im
            )));
        }
        Ok(total.re)
    }

    /// `u^a v^b` built directly from the basis action.
    pub fn word(&self, a: i64, b: i64) -> CMatrix {
        let n = self.n;
        let shift = b.rem_euclid(n as i64) as usize;
        // (u^a v^b)|j⟩ = q^{a(j+b)} |j+b⟩
        CMatrix::from_fn(n, n, |i, j| {
            if i == (j + shift) % n {
                root_of_unity(n, a * i as i64)
            } else {
                ZERO
            }
        })
    }

    /// Image of a torus element under `U ↦ u^p, V ↦ v`, valid when `θ = p/n`.
    ///
    /// Then `u^p v = q^p v u^p = e^{2πiθ} v u^p`, matching the torus relation.
    pub fn represent(&self, poly: &NCPoly<Complex64>) -> Result<CMatrix> {
        let scaled = poly.theta() * self.n as f64;
        let p = scaled.round();
        if (scaled - p).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "theta = {} is not a multiple of 1/{}",
                poly.theta(),
                self.n
            )));
        }
        let p = p as i64;
        let mut out = CMatrix::zeros(self.n, self.n);
        for ((m, n), c) in poly.terms() {
            out += self.word(p * m, n) * *c;
        }
        Ok(out)
    }

    /// Normalized matrix trace `(1/n)·Tr`.
    pub fn normalized_trace(&self, a: &CMatrix) -> Complex64 {
        a.trace() / self.n as f64
    }
}

/// Largest entry modulus, for tolerance checks on matrix identities.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
