//! Partition function and thermodynamic observables of the 2×2 model.
//!
//! `Z(r) = ∫_{SU(2)} e^{−S_P(g; r)} dμ(g)` with the scale `r` standing in for
//! the inverse temperature `β`. Because `S_P(g; r) = s(g)/r²`, the reduced
//! action `s = S_P(g; 1)` is tabulated once per grid and every `r` reuses it.
//!
//! Sums run in log space so that `Z` can be handled far below the f64
//! underflow threshold (`ln Z ≈ −4/r²` for small `r`).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{powerlaw_fit, PowerLaw};
use crate::optimize::{nelder_mead, NelderMeadOptions};
use crate::su2::{
    closed_form_action, closed_form_unchecked, EulerPoint, HaarGrid, PHI_MAX, PSI_MAX, THETA_MAX,
};
use crate::sum::{log_sum_exp, pairwise_sum};

/// Default finite-difference step relative to `r`.
pub const DEFAULT_STEP_REL: f64 = 1e-3;

/// Reduced action `s(g) = r²·S_P(g; r)` tabulated on a Haar grid.
#[derive(Clone, Debug)]
pub struct ActionTable {
    dims: (usize, usize, usize),
    weights: Vec<f64>,
    log_weights: Vec<f64>,
    reduced: Vec<f64>,
}

/// A signed observable together with its magnitude (fits act on magnitudes).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub magnitude: f64,
}

impl From<f64> for Estimate {
    fn from(value: f64) -> Self {
        Self {
            value,
            magnitude: value.abs(),
        }
    }
}

fn check_scale(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "r must be positive, got {r}"
        )))
    }
}

fn check_step(r: f64, h: f64) -> Result<()> {
    check_scale(r)?;
    if h.is_finite() && h > 0.0 && h < r {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "step must satisfy 0 < h < r, got h = {h}, r = {r}"
        )))
    }
}

impl ActionTable {
    /// Evaluate the closed-form action at every node (in parallel, checked).
    pub fn new(grid: &HaarGrid) -> Result<Self> {
        let reduced: Vec<f64> = grid
            .points()
            .par_iter()
            .map(|p| closed_form_action(p, 1.0))
            .collect::<Result<_>>()?;
        let weights: Vec<f64> = grid.points().iter().map(|p| p.weight).collect();
        let log_weights = weights.iter().map(|w| w.ln()).collect();
        Ok(Self {
            dims: grid.dims(),
            weights,
            log_weights,
            reduced,
        })
    }

    pub fn cube(n: usize) -> Result<Self> {
        Self::new(&HaarGrid::cube(n)?)
    }

    /// Table from explicit quadrature weights and reduced actions.
    pub fn from_reduced(weights: Vec<f64>, reduced: Vec<f64>) -> Result<Self> {
        if weights.len() != reduced.len() || weights.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "need matching nonempty weights and actions, got {} and {}",
                weights.len(),
                reduced.len()
            )));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidArgument("weights must be positive".into()));
        }
        let log_weights = weights.iter().map(|w| w.ln()).collect();
        Ok(Self {
            dims: (weights.len(), 1, 1),
            weights,
            log_weights,
            reduced,
        })
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `s = r²·S_P` at each node, in grid order.
    pub fn reduced_actions(&self) -> &[f64] {
        &self.reduced
    }

    /// Haar mean of the reduced action, `⟨s⟩`.
    pub fn mean_reduced_action(&self) -> f64 {
        let terms: Vec<f64> = self
            .weights
            .iter()
            .zip(&self.reduced)
            .map(|(w, s)| w * s)
            .collect();
        pairwise_sum(&terms)
    }

    pub fn log_partition(&self, r: f64) -> Result<f64> {
        check_scale(r)?;
        let inv = 1.0 / (r * r);
        let exps: Vec<f64> = self
            .log_weights
            .iter()
            .zip(&self.reduced)
            .map(|(lw, s)| lw - s * inv)
            .collect();
        Ok(log_sum_exp(&exps))
    }

    /// `Z(r)`; underflows to 0 for `r ≲ 0.075`, use [`Self::log_partition`] there.
    pub fn partition(&self, r: f64) -> Result<f64> {
        Ok(self.log_partition(r)?.exp())
    }

    /// `⟨E⟩ = −∂ ln Z/∂β` at `β = r` by central difference with step `h`.
    pub fn energy(&self, r: f64, h: f64) -> Result<Estimate> {
        check_step(r, h)?;
        let up = self.log_partition(r + h)?;
        let down = self.log_partition(r - h)?;
        Ok(Estimate::from(-(up - down) / (2.0 * h)))
    }

    /// `(1/Z²)·∂²Z/∂β²` at `β = r` by second central difference, evaluated
    /// literally. Grows like `1/Z` as `r → 0` and overflows to `+∞` once
    /// `ln Z < −709`.
    pub fn energy_variance(&self, r: f64, h: f64) -> Result<Estimate> {
        check_step(r, h)?;
        let centre = self.log_partition(r)?;
        let up = (self.log_partition(r + h)? - centre).exp();
        let down = (self.log_partition(r - h)? - centre).exp();
        let second_over_z = (up - 2.0 + down) / (h * h);
        Ok(Estimate::from(second_over_z * (-centre).exp()))
    }

    /// Fluctuation identity `∂² ln Z/∂β²` at `β = r` by second central difference.
    pub fn energy_variance_std(&self, r: f64, h: f64) -> Result<Estimate> {
        check_step(r, h)?;
        let centre = self.log_partition(r)?;
        let up = self.log_partition(r + h)?;
        let down = self.log_partition(r - h)?;
        Ok(Estimate::from((up - 2.0 * centre + down) / (h * h)))
    }

    /// `C_v = ⟨(ΔE)²⟩/T²` with `β = 1/T` and `k_B = 1`, using [`Self::energy_variance`].
    pub fn specific_heat(&self, t: f64, h: f64) -> Result<f64> {
        check_scale(t)?;
        let beta = 1.0 / t;
        Ok(self.energy_variance(beta, h)?.value / (t * t))
    }

    /// As [`Self::specific_heat`] but from [`Self::energy_variance_std`].
    pub fn specific_heat_std(&self, t: f64, h: f64) -> Result<f64> {
        check_scale(t)?;
        let beta = 1.0 / t;
        Ok(self.energy_variance_std(beta, h)?.value / (t * t))
    }

    /// `S = ln Z + β⟨E⟩` with `β = 1/T` and `k_B = 1`.
    pub fn entropy(&self, t: f64, h: f64) -> Result<f64> {
        check_scale(t)?;
        let beta = 1.0 / t;
        Ok(self.log_partition(beta)? + beta * self.energy(beta, h)?.value)
    }

    /// All observables at one scale, with step `step_rel·r`.
    pub fn row(&self, r: f64, step_rel: f64) -> Result<ThermoRow> {
        check_scale(r)?;
        let h = step_rel * r;
        let log_z = self.log_partition(r)?;
        let energy = self.energy(r, h)?;
        let var_literal = self.energy_variance(r, h)?;
        let var_std = self.energy_variance_std(r, h)?;
        let t = 1.0 / r;
        Ok(ThermoRow {
            r,
            z: log_z.exp(),
            e: energy.value,
            e_abs: energy.magnitude,
            var_e_literal: var_literal.value,
            var_e_std: var_std.value,
            cv: var_literal.value / (t * t),
            entropy: log_z + r * energy.value,
        })
    }

    /// [`Self::row`] over several scales, evaluated in parallel, returned in input order.
    pub fn sweep(&self, rs: &[f64], step_rel: f64) -> Result<Vec<ThermoRow>> {
        rs.par_iter().map(|&r| self.row(r, step_rel)).collect()
    }
}

/// One line of a thermodynamic sweep; the CSV column order is the field order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThermoRow {
    pub r: f64,
    #[serde(rename = "Z")]
    pub z: f64,
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "E_abs")]
    pub e_abs: f64,
    #[serde(rename = "varE_paper")]
    pub var_e_literal: f64,
    #[serde(rename = "varE_std")]
    pub var_e_std: f64,
    #[serde(rename = "Cv")]
    pub cv: f64,
    pub entropy: f64,
}

/// `Z(r)` on a grid; builds the action table on each call.
pub fn partition(r: f64, grid: &HaarGrid) -> Result<f64> {
    ActionTable::new(grid)?.partition(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Abscissa {
    R,
    T,
}

/// Sampled observable curve with an optional log-log fit of its magnitude.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThermoCurve {
    pub abscissa: Abscissa,
    pub points: Vec<(f64, f64)>,
    pub fit: Option<PowerLaw>,
}

impl ThermoCurve {
    /// Builds the curve and fits `|value|` when there are at least three
    /// points and none is zero.
    pub fn new(abscissa: Abscissa, points: Vec<(f64, f64)>) -> Result<Self> {
        if points
            .windows(2)
            .any(|w| w[0].0.partial_cmp(&w[1].0) != Some(std::cmp::Ordering::Less))
        {
            return Err(Error::InvalidArgument(
                "curve abscissae must be strictly increasing".into(),
            ));
        }
        let magnitudes: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x, y.abs())).collect();
        let fit = if magnitudes.len() >= 3 && magnitudes.iter().all(|&(x, y)| x > 0.0 && y > 0.0) {
            powerlaw_fit(&magnitudes).ok()
        } else {
            None
        };
        Ok(Self {
            abscissa,
            points,
            fit,
        })
    }
}

/// `count` equally spaced values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count)
            .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremizeOptions {
    /// Coarse scan resolution per angle.
    pub scan: usize,
    /// Number of best coarse cells refined for each of min and max.
    pub seeds: usize,
    pub shrink_tol: f64,
    pub max_iter: usize,
}

impl Default for ExtremizeOptions {
    fn default() -> Self {
        Self {
            scan: 16,
            seeds: 8,
            shrink_tol: 1e-10,
            max_iter: 20_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extrema {
    pub min: f64,
    pub argmin: EulerPoint,
    pub max: f64,
    pub argmax: EulerPoint,
    /// Whether both winning refinements met the shrink tolerance.
    pub converged: bool,
}

/// Global minimum and maximum of the closed-form action at scale `r`:
/// coarse scan, then simplex refinement from the best cells.
pub fn extremize(r: f64, opts: &ExtremizeOptions) -> Result<Extrema> {
    check_scale(r)?;
    if opts.scan < 2 || opts.seeds == 0 {
        return Err(Error::InvalidArgument(
            "scan must be at least 2 and seeds at least 1".into(),
        ));
    }
    let n = opts.scan;
    let steps = (
        PHI_MAX / n as f64,
        THETA_MAX / (n - 1) as f64,
        PSI_MAX / n as f64,
    );
    let mut cells: Vec<([f64; 3], f64)> = (0..n * n * n)
        .into_par_iter()
        .map(|idx| {
            let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
            let x = [steps.0 * i as f64, steps.1 * j as f64, steps.2 * k as f64];
            (x, closed_form_unchecked(x[0], x[1], x[2], r))
        })
        .collect();
    cells.sort_by(|a, b| a.1.total_cmp(&b.1));

    let nm = NelderMeadOptions {
        initial_step: 0.5 * steps.0.min(steps.1),
        shrink_tol: opts.shrink_tol,
        max_iter: opts.max_iter,
    };
    let seeds = opts.seeds.min(cells.len());
    let refine = |starts: &[([f64; 3], f64)], sign: f64| {
        starts
            .par_iter()
            .map(|(x, _)| {
                nelder_mead(
                    |v: &[f64]| sign * closed_form_unchecked(v[0], v[1], v[2], r),
                    x,
                    &nm,
                )
            })
            .collect::<Vec<_>>()
            .into_iter()
            .min_by(|a, b| a.value.total_cmp(&b.value))
            .expect("at least one seed")
    };
    let low = refine(&cells[..seeds], 1.0);
    let high = refine(&cells[cells.len() - seeds..], -1.0);

    let argmin = EulerPoint::canonical(low.x[0], low.x[1], low.x[2]);
    let argmax = EulerPoint::canonical(high.x[0], high.x[1], high.x[2]);
    Ok(Extrema {
        min: closed_form_action(&argmin, r)?,
        argmin,
        max: closed_form_action(&argmax, r)?,
        argmax,
        converged: low.converged && high.converged,
    })
}
