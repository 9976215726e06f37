//! Brute-force evolution of the two-qubit (x) truncated-Fock total state for
//! a discrete bath, used to verify the reduced dynamics and the
//! separability/entanglement verdicts independently of the kernel formulas.
//!
//! The coupling commutes with sigma3 of qubit A, so the total state stays
//! block-X over the system index: block(i,j)(tau) =
//! `x0_ij exp(-i phi_ij tau) U_{s(i)} rho_therm U_{s(j)}^dagger`, with
//! U_(+/-) = exp(-i tau [H_env +/- sum_m g_m (a_m^dag + a_m)]) computed per
//! mode by Hermitian eigendecomposition (modes factorize).
//!
//! The oracle can only certify entanglement (negative partial transpose);
//! a nonnegative spectrum is reported as is and stays inconclusive.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{kron, partial_transpose, DenseHermitian};
use crate::xstate::XState;

/// Thermal tail mass that must remain beyond the Fock truncation.
pub const TRUNCATION_TAIL_BOUND: f64 = 1e-10;
/// Default cap on the total Hilbert-space dimension 4 * n_fock^M.
pub const DEFAULT_DIMENSION_BUDGET: usize = 4 * 32 * 32;
/// Accepted unitarity defect of the per-mode propagators.
const UNITARITY_TOL: f64 = 1e-12;

/// Configuration of one oracle run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Discrete bath modes (omega, g2).
    pub modes: Vec<crate::kernels::BathMode>,
    /// Fock truncation per mode (>= 2).
    pub n_fock: usize,
    /// Bath temperature.
    pub theta: f64,
    /// Initial two-qubit state.
    pub x0: XState,
    #[serde(default)]
    pub omega_a: f64,
    #[serde(default)]
    pub omega_b: f64,
    /// Cap on the total dimension 4 * n_fock^M.
    #[serde(default = "default_budget")]
    pub dimension_budget: usize,
}

fn default_budget() -> usize {
    DEFAULT_DIMENSION_BUDGET
}

impl OracleConfig {
    /// Validates mode data, the truncation tail bound, and the dimension
    /// budget; returns the environment dimension n_fock^M.
    pub fn validate(&self) -> Result<usize> {
        crate::kernels::BathModel::discrete(self.modes.clone())?;
        if self.n_fock < 2 {
            return Err(Error::Range(format!(
                "n_fock must be at least 2, got {}",
                self.n_fock
            )));
        }
        if self.theta.is_nan() || self.theta <= 0.0 {
            return Err(Error::Range(format!(
                "theta must be positive, got {}",
                self.theta
            )));
        }
        for m in &self.modes {
            check_truncation(m.omega, self.theta, self.n_fock)?;
        }
        let mut env_dim = 1usize;
        for _ in &self.modes {
            env_dim = env_dim.checked_mul(self.n_fock).ok_or_else(|| {
                Error::Dimension("environment dimension overflows usize".into())
            })?;
        }
        let total = 4 * env_dim;
        if total > self.dimension_budget {
            return Err(Error::Dimension(format!(
                "total dimension {total} exceeds the budget {}",
                self.dimension_budget
            )));
        }
        Ok(env_dim)
    }
}

fn check_truncation(omega: f64, theta: f64, n_fock: usize) -> Result<()> {
    // Mean occupation nbar = 1/(e^{omega/theta} - 1); the truncated tail is
    // (nbar/(nbar+1))^n = e^{-n omega/theta}.
    let tail = (-(n_fock as f64) * omega / theta).exp();
    if tail >= TRUNCATION_TAIL_BOUND {
        return Err(Error::Truncation {
            omega,
            theta,
            n_fock,
            tail,
            bound: TRUNCATION_TAIL_BOUND,
        });
    }
    Ok(())
}

/// Truncated thermal state of one mode: Boltzmann weights renormalized over
/// the kept levels.
pub fn thermal_mode_state(omega: f64, theta: f64, n_fock: usize) -> Result<DMatrix<Complex64>> {
    if omega.is_nan() || omega <= 0.0 || theta.is_nan() || theta <= 0.0 {
        return Err(Error::Range(format!(
            "omega and theta must be positive, got ({omega}, {theta})"
        )));
    }
    check_truncation(omega, theta, n_fock)?;
    let weights: Vec<f64> = (0..n_fock)
        .map(|n| (-(n as f64) * omega / theta).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    let diag = DVector::from_iterator(n_fock, weights.iter().map(|w| Complex64::from(w / z)));
    Ok(DMatrix::from_diagonal(&diag))
}

/// Exact total state at time tau, stored as the 4x4 map of system blocks.
#[derive(Debug, Clone)]
pub struct TotalState {
    blocks: [[Option<DMatrix<Complex64>>; 4]; 4],
    env_dim: usize,
    n_fock: usize,
    n_modes: usize,
}

impl TotalState {
    pub fn env_dim(&self) -> usize {
        self.env_dim
    }

    pub fn block(&self, i: usize, j: usize) -> Option<&DMatrix<Complex64>> {
        self.blocks[i][j].as_ref()
    }

    /// Assembles the dense (4 env_dim) x (4 env_dim) matrix.
    pub fn to_dense(&self) -> DenseHermitian {
        let n = self.env_dim;
        let mut m = DMatrix::zeros(4 * n, 4 * n);
        for i in 0..4 {
            for j in 0..4 {
                if let Some(b) = &self.blocks[i][j] {
                    m.view_mut((i * n, j * n), (n, n)).copy_from(b);
                }
            }
        }
        DenseHermitian::symmetrize(m)
    }
}

/// Which bipartition to test with the partial transpose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Bipartition {
    /// Both qubits versus the whole environment.
    SystemVsEnv,
    /// Qubit A versus its environment, after tracing out the spectator B.
    AVsRest,
    /// Qubit B versus the environment of A, after tracing out A.
    BVsRest,
}

/// Evolves the product initial state x0 (x) rho_therm to time tau.
pub fn evolve_total(cfg: &OracleConfig, tau: f64) -> Result<TotalState> {
    let env_dim = cfg.validate()?;
    if !tau.is_finite() || tau < 0.0 {
        return Err(Error::Range(format!("tau must be nonnegative, got {tau}")));
    }

    // Per-mode propagators for both interaction signs, then tensored.
    let mut u_plus = DMatrix::identity(1, 1);
    let mut u_minus = DMatrix::identity(1, 1);
    let mut rho_env = DMatrix::identity(1, 1);
    for m in &cfg.modes {
        let up = mode_propagator(m.omega, m.g2.sqrt(), cfg.n_fock, tau, 1.0)?;
        let um = mode_propagator(m.omega, m.g2.sqrt(), cfg.n_fock, tau, -1.0)?;
        u_plus = kron(&u_plus, &up);
        u_minus = kron(&u_minus, &um);
        rho_env = kron(&rho_env, &thermal_mode_state(m.omega, cfg.theta, cfg.n_fock)?);
    }

    let u = |sign: f64| if sign > 0.0 { &u_plus } else { &u_minus };
    let x = cfg.x0.to_matrix();
    let signs = [1.0, 1.0, -1.0, -1.0];
    let energies: Vec<f64> = (0..4)
        .map(|i| {
            let sb = [1.0, -1.0, 1.0, -1.0][i];
            0.5 * (signs[i] * cfg.omega_a + sb * cfg.omega_b)
        })
        .collect();

    let mut blocks: [[Option<DMatrix<Complex64>>; 4]; 4] = Default::default();
    for i in 0..4 {
        for j in 0..4 {
            if x[(i, j)] == Complex64::ZERO {
                continue;
            }
            let phase = Complex64::from_polar(1.0, -(energies[i] - energies[j]) * tau);
            let b = u(signs[i]) * &rho_env * u(signs[j]).adjoint() * (x[(i, j)] * phase);
            blocks[i][j] = Some(b);
        }
    }
    Ok(TotalState {
        blocks,
        env_dim,
        n_fock: cfg.n_fock,
        n_modes: cfg.modes.len(),
    })
}

/// exp(-i tau (omega a^dag a + sign * g (a^dag + a))) on the truncated mode.
fn mode_propagator(
    omega: f64,
    g: f64,
    n_fock: usize,
    tau: f64,
    sign: f64,
) -> Result<DMatrix<Complex64>> {
    let mut h = DMatrix::<Complex64>::zeros(n_fock, n_fock);
    for n in 0..n_fock {
        h[(n, n)] = Complex64::from(omega * n as f64);
        if n + 1 < n_fock {
            let c = Complex64::from(sign * g * ((n + 1) as f64).sqrt());
            h[(n, n + 1)] = c;
            h[(n + 1, n)] = c;
        }
    }
    let eig = nalgebra::SymmetricEigen::new(h);
    let phases = DVector::from_iterator(
        n_fock,
        eig.eigenvalues
            .iter()
            .map(|&e| Complex64::from_polar(1.0, -e * tau)),
    );
    let u = &eig.eigenvectors * DMatrix::from_diagonal(&phases) * eig.eigenvectors.adjoint();
    let defect = (&u * u.adjoint() - DMatrix::identity(n_fock, n_fock)).norm();
    if defect > UNITARITY_TOL * (n_fock as f64) {
        return Err(Error::Internal(format!(
            "mode propagator lost unitarity (defect {defect:e})"
        )));
    }
    Ok(u)
}

/// Reduced two-qubit state: the trace of each block.
pub fn reduced_from_total(t: &TotalState) -> DenseHermitian {
    let mut m = DMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            if let Some(b) = &t.blocks[i][j] {
                m[(i, j)] = b.trace();
            }
        }
    }
    DenseHermitian::symmetrize(m)
}

/// Minimum eigenvalue of the partial transpose across the chosen cut.
///
/// A negative value certifies entanglement across that cut; a nonnegative
/// one is inconclusive. `AVsRest` and `BVsRest` first trace out the
/// spectator qubit, matching the reduced bipartitions the model makes
/// claims about.
pub fn pt_min_eigenvalue(t: &TotalState, cut: Bipartition) -> Result<f64> {
    let n = t.env_dim;
    let state = match cut {
        Bipartition::SystemVsEnv => t.to_dense(),
        Bipartition::AVsRest => reduce_spectator(t, Spectator::QubitB),
        Bipartition::BVsRest => reduce_spectator(t, Spectator::QubitA),
    };
    let dim_first = match cut {
        Bipartition::SystemVsEnv => 4,
        _ => 2,
    };
    let pt = partial_transpose(&state, dim_first, n)?;
    Ok(pt.min_eigenvalue())
}

enum Spectator {
    QubitA,
    QubitB,
}

/// Traces one qubit out of the total state, leaving (kept qubit) (x) env.
/// System index i = 2a + b over qubits (a, b).
fn reduce_spectator(t: &TotalState, spectator: Spectator) -> DenseHermitian {
    let n = t.env_dim;
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for kept in 0..2 {
        for kept2 in 0..2 {
            let mut acc = DMatrix::<Complex64>::zeros(n, n);
            for sp in 0..2 {
                let (i, j) = match spectator {
                    Spectator::QubitB => (2 * kept + sp, 2 * kept2 + sp),
                    Spectator::QubitA => (2 * sp + kept, 2 * sp + kept2),
                };
                if let Some(b) = &t.blocks[i][j] {
                    acc += b;
                }
            }
            m.view_mut((kept * n, kept2 * n), (n, n)).copy_from(&acc);
        }
    }
    DenseHermitian::symmetrize(m)
}

/// PT minimum eigenvalue of the reduced state of a pair of environment
/// modes (the system is traced out). Requires at least two modes.
pub fn env_pair_pt_min(t: &TotalState, mode_pair: (usize, usize)) -> Result<f64> {
    if t.n_modes < 2 {
        return Err(Error::Dimension(
            "environment pair check needs at least two modes".into(),
        ));
    }
    let (ma, mb) = mode_pair;
    if ma == mb || ma >= t.n_modes || mb >= t.n_modes {
        return Err(Error::Dimension(format!(
            "invalid mode pair ({ma}, {mb}) of {} modes",
            t.n_modes
        )));
    }
    // Environment state: sum of the diagonal blocks.
    let mut env = DMatrix::<Complex64>::zeros(t.env_dim, t.env_dim);
    for i in 0..4 {
        if let Some(b) = &t.blocks[i][i] {
            env += b;
        }
    }
    let pair = reduce_env_to_pair(&env, t.n_fock, t.n_modes, ma, mb);
    let pt = partial_transpose(&DenseHermitian::symmetrize(pair), t.n_fock, t.n_fock)?;
    Ok(pt.min_eigenvalue())
}

/// Traces the environment down to modes (ma, mb), in that tensor order.
fn reduce_env_to_pair(
    env: &DMatrix<Complex64>,
    n_fock: usize,
    n_modes: usize,
    ma: usize,
    mb: usize,
) -> DMatrix<Complex64> {
    let dim = n_fock * n_fock;
    let mut out = DMatrix::zeros(dim, dim);
    // Mode occupation digits of an environment index, most significant first.
    let digits = |idx: usize| -> Vec<usize> {
        let mut d = vec![0usize; n_modes];
        let mut rest = idx;
        for k in (0..n_modes).rev() {
            d[k] = rest % n_fock;
            rest /= n_fock;
        }
        d
    };
    let env_dim = env.nrows();
    for r in 0..env_dim {
        let dr = digits(r);
        for c in 0..env_dim {
            let dc = digits(c);
            // Kronecker delta on every traced mode.
            let mut keep = true;
            for k in 0..n_modes {
                if k != ma && k != mb && dr[k] != dc[k] {
                    keep = false;
                    break;
                }
            }
            if keep {
                out[(dr[ma] * n_fock + dr[mb], dc[ma] * n_fock + dc[mb])] += env[(r, c)];
            }
        }
    }
    out
}
