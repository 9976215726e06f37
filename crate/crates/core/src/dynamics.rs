//! Exact reduced dynamics of the dephasing two-qubit model: decoherence
//! factor, trajectory generation, a master-equation integrator used as a
//! cross-check, and crossing-time searches (decoherence and sudden death).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::{decoherence_exponent, dephasing_rate, BathModel};
use crate::matrix::DenseHermitian;
use crate::quad;
use crate::xstate::XState;

/// sigma3 eigenvalue of qubit A per system basis state |00>,|01>,|10>,|11>.
const SIGN_A: [f64; 4] = [1.0, 1.0, -1.0, -1.0];
/// Free energies (E_1..E_4)/(Omega scale): e_i = (s_A Omega_A + s_B Omega_B)/2.
fn level_energy(i: usize, omega_a: f64, omega_b: f64) -> f64 {
    let sb = [1.0, -1.0, 1.0, -1.0][i];
    0.5 * (SIGN_A[i] * omega_a + sb * omega_b)
}

/// Magnitude and free phases multiplying the two coherences at time tau.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceFactor {
    /// exp(-Gamma(theta, tau)), in (0, 1].
    pub magnitude: f64,
    /// Phase on rho14: -(Omega_A + Omega_B) tau.
    pub phase_plus: f64,
    /// Phase on rho23: -(Omega_A - Omega_B) tau.
    pub phase_minus: f64,
}

pub fn decoherence_factor(
    bath: &BathModel,
    theta: f64,
    tau: f64,
    omega_a: f64,
    omega_b: f64,
) -> Result<DecoherenceFactor> {
    let gamma = decoherence_exponent(bath, theta, tau)?;
    Ok(DecoherenceFactor {
        magnitude: (-gamma).exp(),
        phase_plus: -(omega_a + omega_b) * tau,
        phase_minus: -(omega_a - omega_b) * tau,
    })
}

/// Exact reduced state at time tau: populations frozen, coherences scaled
/// by the decoherence factor.
pub fn reduced_state(
    x0: &XState,
    bath: &BathModel,
    theta: f64,
    tau: f64,
    omega_a: f64,
    omega_b: f64,
) -> Result<DenseHermitian> {
    let d = decoherence_factor(bath, theta, tau, omega_a, omega_b)?;
    let mut m = DMatrix::zeros(4, 4);
    m[(0, 0)] = x0.rho11().into();
    m[(1, 1)] = x0.rho22().into();
    m[(2, 2)] = x0.rho33().into();
    m[(3, 3)] = x0.rho44().into();
    let c14 = x0.rho14() * Complex64::from_polar(d.magnitude, d.phase_plus);
    let c23 = x0.rho23() * Complex64::from_polar(d.magnitude, d.phase_minus);
    m[(0, 3)] = c14;
    m[(3, 0)] = c14.conj();
    m[(1, 2)] = c23;
    m[(2, 1)] = c23.conj();
    DenseHermitian::new(m)
}

/// Integrates the Lindblad-type master equation with time-dependent rate
/// gamma(tau)/2 on the sigma3^A dephasing dissipator, plus the two free
/// commutator terms, by classical fourth-order Runge-Kutta.
///
/// Serves as an independent cross-check of [`reduced_state`]: the global
/// error contracts as O(step^4).
pub fn evolve_master(
    x0: &XState,
    bath: &BathModel,
    theta: f64,
    tau_end: f64,
    steps: usize,
    omega_a: f64,
    omega_b: f64,
) -> Result<DenseHermitian> {
    if steps == 0 {
        return Err(Error::Range("steps must be at least 1".into()));
    }
    let h = tau_end / steps as f64;
    let mut rho = x0.to_matrix();
    let mut gamma_lo = dephasing_rate(bath, theta, 0.0)?;
    for n in 0..steps {
        let t0 = n as f64 * h;
        let gamma_mid = dephasing_rate(bath, theta, t0 + 0.5 * h)?;
        let gamma_hi = dephasing_rate(bath, theta, t0 + h)?;
        let k1 = master_rhs(&rho, gamma_lo, omega_a, omega_b);
        let k2 = master_rhs(&(&rho + &k1 * Complex64::from(0.5 * h)), gamma_mid, omega_a, omega_b);
        let k3 = master_rhs(&(&rho + &k2 * Complex64::from(0.5 * h)), gamma_mid, omega_a, omega_b);
        let k4 = master_rhs(&(&rho + &k3 * Complex64::from(h)), gamma_hi, omega_a, omega_b);
        rho += (k1 + k2 * Complex64::from(2.0) + k3 * Complex64::from(2.0) + k4)
            * Complex64::from(h / 6.0);
        gamma_lo = gamma_hi;
    }
    Ok(DenseHermitian::symmetrize(rho))
}

fn master_rhs(
    rho: &DMatrix<Complex64>,
    gamma: f64,
    omega_a: f64,
    omega_b: f64,
) -> DMatrix<Complex64> {
    let mut out = DMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            let de = level_energy(i, omega_a, omega_b) - level_energy(j, omega_a, omega_b);
            let dephase = 0.5 * gamma * (1.0 - SIGN_A[i] * SIGN_A[j]);
            out[(i, j)] = (Complex64::new(-dephase, -de)) * rho[(i, j)];
        }
    }
    out
}

/// Concurrence of the evolved state at time tau.
pub fn concurrence_at(x0: &XState, bath: &BathModel, theta: f64, tau: f64) -> Result<f64> {
    let gamma = decoherence_exponent(bath, theta, tau)?;
    x0.concurrence((-gamma).exp())
}

/// One sample of a reduced trajectory.
#[derive(Debug, Clone)]
pub struct ReducedTrajectoryPoint {
    pub tau: f64,
    pub density: DenseHermitian,
    pub concurrence: f64,
    pub decoherence_mag: f64,
}

/// Evaluates the reduced trajectory on a tau grid. Grid points are
/// independent; with the `parallel` feature they are computed concurrently
/// and returned in input order.
pub fn trajectory(
    x0: &XState,
    bath: &BathModel,
    theta: f64,
    taus: &[f64],
    omega_a: f64,
    omega_b: f64,
) -> Result<Vec<ReducedTrajectoryPoint>> {
    let eval = |&tau: &f64| -> Result<ReducedTrajectoryPoint> {
        let gamma = decoherence_exponent(bath, theta, tau)?;
        let mag = (-gamma).exp();
        let density = reduced_state(x0, bath, theta, tau, omega_a, omega_b)?;
        Ok(ReducedTrajectoryPoint {
            tau,
            density,
            concurrence: x0.concurrence(mag)?,
            decoherence_mag: mag,
        })
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        taus.par_iter().map(eval).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        taus.iter().map(eval).collect()
    }
}

/// Scan step of the crossing searches.
pub const SCAN_STEP: f64 = 0.01;
/// Upper end of the scan window.
pub const SCAN_WINDOW: f64 = 1e4;
const BISECT_TOL: f64 = 1e-8;

/// First tau at which the decoherence exponent reaches 1 (coherences down
/// to 1/e), located by a 0.01-step scan and bisection.
pub fn decoherence_time(bath: &BathModel, theta: f64) -> Result<f64> {
    first_exponent_crossing(bath, theta, 1.0)?.ok_or(Error::NotReached {
        level: 1.0,
        window: SCAN_WINDOW,
    })
}

/// First tau at which the concurrence of the evolved state hits zero, or
/// `None` when the state starts unentangled or the crossing lies beyond the
/// scan window. Absence is a value, not an error.
pub fn sudden_death_time(x0: &XState, bath: &BathModel, theta: f64) -> Result<Option<f64>> {
    // Concurrence vanishes once Gamma >= ln(max of the two coherence ratios).
    let ratio = |coh: Complex64, pops: f64| -> f64 {
        if coh.norm_sqr() == 0.0 {
            0.0
        } else {
            coh.norm() / pops.sqrt()
        }
    };
    let r_inner = ratio(x0.rho23(), x0.rho11() * x0.rho44());
    let r_outer = ratio(x0.rho14(), x0.rho22() * x0.rho33());
    let r = r_inner.max(r_outer);
    if r <= 1.0 {
        return Ok(None); // unentangled already at tau = 0
    }
    if r.is_infinite() {
        return Ok(None); // concurrence decays but never reaches zero
    }
    first_exponent_crossing(bath, theta, r.ln())
}

/// Scans Gamma(theta, tau) for its first upward crossing of `level`, then
/// polishes the root by bisection on the adaptive quadrature.
fn first_exponent_crossing(bath: &BathModel, theta: f64, level: f64) -> Result<Option<f64>> {
    debug_assert!(level > 0.0);
    let mut scan = ExponentScan::new(bath, theta)?;
    let steps = (SCAN_WINDOW / SCAN_STEP).round() as usize;
    let mut prev_tau = 0.0;
    for i in 1..=steps {
        let tau = i as f64 * SCAN_STEP;
        let value = scan.advance_to(i);
        if value >= level {
            return Ok(Some(bisect_crossing(bath, theta, level, prev_tau, tau)?));
        }
        prev_tau = tau;
    }
    Ok(None)
}

fn bisect_crossing(bath: &BathModel, theta: f64, level: f64, lo0: f64, hi0: f64) -> Result<f64> {
    let mut lo = lo0;
    let mut hi = hi0;
    // The scan evaluator and the adaptive quadrature agree far better than
    // the bracket width, but re-anchor the endpoints defensively.
    if decoherence_exponent(bath, theta, lo)? >= level {
        return Ok(lo);
    }
    if decoherence_exponent(bath, theta, hi)? < level {
        return Ok(hi);
    }
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        if decoherence_exponent(bath, theta, mid)? < level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Incremental evaluator of Gamma(theta, tau) on the scan lattice
/// tau = i * SCAN_STEP.
///
/// Gamma is a weighted sum of (1 - cos(omega_j tau)) over fixed nodes: the
/// modes themselves for a discrete bath, composite Gauss-Kronrod nodes for
/// the continuum. Each step applies the phase rotation
/// (cos, sin) -> (cos c - sin s, sin c + cos s) per node instead of fresh
/// trig calls; trig is re-synchronized periodically to cancel drift. The
/// continuum node set covers oscillations up to the current cap and is
/// rebuilt (doubling the cap) as the scan proceeds.
struct ExponentScan {
    nodes: Vec<ScanNode>,
    kappa_theta: Option<(f64, f64)>,
    cap: f64,
    step_index: usize,
}

struct ScanNode {
    coeff: f64,
    omega: f64,
    cos_t: f64,
    sin_t: f64,
    rot_c: f64,
    rot_s: f64,
}

const SCAN_INITIAL_CAP: f64 = 16.0;
const SCAN_RESYNC: usize = 8192;

impl ExponentScan {
    fn new(bath: &BathModel, theta: f64) -> Result<Self> {
        // Validate the (theta, tau) domain once up front.
        decoherence_exponent(bath, theta, 0.0)?;
        match bath {
            BathModel::Continuum { kappa } => {
                let mut scan = ExponentScan {
                    nodes: Vec::new(),
                    kappa_theta: Some((*kappa, theta)),
                    cap: SCAN_INITIAL_CAP,
                    step_index: 0,
                };
                scan.rebuild_continuum_nodes();
                Ok(scan)
            }
            BathModel::Discrete { modes } => {
                let nodes = modes
                    .iter()
                    .map(|m| {
                        let coth = if 0.5 * m.omega / theta < 1e-4 {
                            2.0 * theta / m.omega + m.omega / (6.0 * theta)
                        } else {
                            1.0 / (0.5 * m.omega / theta).tanh()
                        };
                        ScanNode::new(4.0 * m.g2 * coth / (m.omega * m.omega), m.omega)
                    })
                    .collect();
                Ok(ExponentScan {
                    nodes,
                    kappa_theta: None,
                    cap: f64::INFINITY,
                    step_index: 0,
                })
            }
        }
    }

    fn rebuild_continuum_nodes(&mut self) {
        let (kappa, theta) = self.kappa_theta.expect("continuum scan");
        let panel = std::f64::consts::PI / self.cap;
        let mut edges = Vec::new();
        let mut x = 0.0;
        while x < 1.0 {
            edges.push(x);
            x += panel;
        }
        edges.push(1.0);
        self.nodes.clear();
        for w in edges.windows(2) {
            let center = 0.5 * (w[0] + w[1]);
            let half = 0.5 * (w[1] - w[0]);
            for (abscissa, weight) in gk15_nodes() {
                let omega = center + half * abscissa;
                let x = 0.5 * omega / theta;
                let coth = if x < 1e-4 {
                    1.0 / x + x / 3.0
                } else {
                    1.0 / x.tanh()
                };
                let coeff = weight * half * 4.0 * kappa * coth / omega;
                self.nodes.push(ScanNode::new(coeff, omega));
            }
        }
        self.resync();
    }

    fn resync(&mut self) {
        let tau = self.step_index as f64 * SCAN_STEP;
        for n in &mut self.nodes {
            let (s, c) = (n.omega * tau).sin_cos();
            n.cos_t = c;
            n.sin_t = s;
        }
    }

    /// Advances to scan index `i` (must be the successor of the previous
    /// call) and returns Gamma at tau = i * SCAN_STEP.
    fn advance_to(&mut self, i: usize) -> f64 {
        debug_assert_eq!(i, self.step_index + 1);
        self.step_index = i;
        let tau = i as f64 * SCAN_STEP;
        if tau > self.cap && self.kappa_theta.is_some() {
            while self.cap < tau {
                self.cap *= 2.0;
            }
            self.rebuild_continuum_nodes();
        } else if self.step_index.is_multiple_of(SCAN_RESYNC) {
            self.resync();
        } else {
            for n in &mut self.nodes {
                let c = n.cos_t * n.rot_c - n.sin_t * n.rot_s;
                let s = n.sin_t * n.rot_c + n.cos_t * n.rot_s;
                n.cos_t = c;
                n.sin_t = s;
            }
        }
        self.nodes.iter().map(|n| n.coeff * (1.0 - n.cos_t)).sum()
    }
}

impl ScanNode {
    fn new(coeff: f64, omega: f64) -> Self {
        let (rot_s, rot_c) = (omega * SCAN_STEP).sin_cos();
        ScanNode {
            coeff,
            omega,
            cos_t: 1.0,
            sin_t: 0.0,
            rot_c,
            rot_s,
        }
    }
}

/// The 15 Kronrod (abscissa, weight) pairs on [-1, 1].
fn gk15_nodes() -> [(f64, f64); 15] {
    let (xgk, wgk) = quad::gk15_table();
    let mut out = [(0.0, 0.0); 15];
    for j in 0..7 {
        out[2 * j] = (-xgk[j], wgk[j]);
        out[2 * j + 1] = (xgk[j], wgk[j]);
    }
    out[14] = (0.0, wgk[7]);
    out
}
