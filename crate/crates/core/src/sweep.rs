//! Temperature-time grid sweeps behind the phase diagrams, plus the overlay
//! curves (decoherence time, sudden death) and the critical-temperature
//! query.
//!
//! Grid points are independent, so with the `parallel` feature enabled
//! [`sweep_grid`] fans the rows out over rayon; [`sweep_grid_seq`] always
//! runs the plain sequential loop and is kept available for benchmarking
//! the two side by side. Row order (theta-major, then tau) and row values
//! are identical either way.

use serde::{Deserialize, Serialize};

use crate::criteria::{classify, Verdict};
use crate::dynamics::{decoherence_time, sudden_death_time};
use crate::error::{Error, Result};
use crate::kernels::{critical_temperature, BathModel, THETA_MAX, THETA_MIN};
use crate::xstate::XState;

/// An inclusive, uniformly spaced (theta, tau) grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub theta_min: f64,
    pub theta_max: f64,
    pub theta_steps: usize,
    pub tau_min: f64,
    pub tau_max: f64,
    pub tau_steps: usize,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.theta_steps < 2 || self.tau_steps < 2 {
            return Err(Error::Range(format!(
                "grids need at least 2 steps per axis, got {} x {}",
                self.theta_steps, self.tau_steps
            )));
        }
        let ordered = self.theta_min < self.theta_max && self.tau_min < self.tau_max;
        if !ordered {
            return Err(Error::Range(
                "grid ranges must be ordered min < max".into(),
            ));
        }
        if self.theta_min < THETA_MIN || self.theta_max > THETA_MAX {
            return Err(Error::Range(format!(
                "theta range [{}, {}] outside supported [{THETA_MIN}, {THETA_MAX}]",
                self.theta_min, self.theta_max
            )));
        }
        if self.tau_min < 0.0 {
            return Err(Error::Range("tau range must be nonnegative".into()));
        }
        Ok(())
    }

    pub fn thetas(&self) -> Vec<f64> {
        linspace(self.theta_min, self.theta_max, self.theta_steps)
    }

    pub fn taus(&self) -> Vec<f64> {
        linspace(self.tau_min, self.tau_max, self.tau_steps)
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let d = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + i as f64 * d })
        .collect()
}

/// One grid row of a phase-diagram sweep.
#[derive(Debug, Clone, Copy)]
pub struct GridRow {
    pub theta: f64,
    pub tau: f64,
    pub s_value: f64,
    pub e_value: f64,
    pub s_threshold: f64,
    pub e_threshold: f64,
    pub verdict: Verdict,
}

fn classify_row(x0: &XState, bath: &BathModel, theta: f64, tau: f64) -> Result<GridRow> {
    let cl = classify(x0, bath, theta, tau).map_err(|e| e.at_grid_point(theta, tau))?;
    Ok(GridRow {
        theta,
        tau,
        s_value: cl.s_value.value(),
        e_value: cl.e_value.value(),
        s_threshold: cl.s_threshold,
        e_threshold: cl.e_threshold,
        verdict: cl.verdict,
    })
}

/// Classifies every (theta, tau) grid point. Rows come back theta-major
/// then tau, deterministically across runs and thread counts.
pub fn sweep_grid(x0: &XState, bath: &BathModel, grid: &GridSpec) -> Result<Vec<GridRow>> {
    grid.validate()?;
    let thetas = grid.thetas();
    let taus = grid.taus();
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..thetas.len() * taus.len())
            .into_par_iter()
            .map(|idx| {
                classify_row(
                    x0,
                    bath,
                    thetas[idx / taus.len()],
                    taus[idx % taus.len()],
                )
            })
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        sweep_grid_seq(x0, bath, grid)
    }
}

/// Sequential fallback of [`sweep_grid`]; always compiled, identical output.
pub fn sweep_grid_seq(x0: &XState, bath: &BathModel, grid: &GridSpec) -> Result<Vec<GridRow>> {
    grid.validate()?;
    let taus = grid.taus();
    let mut rows = Vec::with_capacity(grid.theta_steps * grid.tau_steps);
    for theta in grid.thetas() {
        for &tau in &taus {
            rows.push(classify_row(x0, bath, theta, tau)?);
        }
    }
    Ok(rows)
}

/// One sample of the overlay curves: decoherence time and (when it exists)
/// sudden-death time at a given temperature.
#[derive(Debug, Clone, Copy)]
pub struct CurvePoint {
    pub theta: f64,
    pub tau_dec: f64,
    pub tau_sd: Option<f64>,
}

/// Samples the decoherence-time and sudden-death curves over the theta
/// grid. A missing sudden death (state never entangled, or no crossing in
/// the scan window) is `None`, not an error.
pub fn overlay_curves(x0: &XState, bath: &BathModel, thetas: &[f64]) -> Result<Vec<CurvePoint>> {
    let eval = |&theta: &f64| -> Result<CurvePoint> {
        Ok(CurvePoint {
            theta,
            tau_dec: decoherence_time(bath, theta)?,
            tau_sd: sudden_death_time(x0, bath, theta)?,
        })
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        thetas.par_iter().map(eval).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        thetas.iter().map(eval).collect()
    }
}

/// Critical temperature of a Werner state: the root of
/// `8 kappa Shi(1/theta) = ln((1+c)/(2c))`.
pub fn tcrit_query(kappa: f64, c: f64) -> Result<f64> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::Range(format!(
            "Werner purity parameter must lie in (0, 1], got {c}"
        )));
    }
    critical_temperature(kappa, ((1.0 + c) / (2.0 * c)).ln())
}
