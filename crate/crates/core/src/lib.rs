//! Exact dephasing dynamics of two-qubit X states coupled to a thermal
//! oscillator bath.
//!
//! The crate covers the reduced two-qubit evolution (analytically and by a
//! master-equation integrator), the concurrence decay with its sudden-death
//! and decoherence time scales, separability and entanglement criteria for
//! the system-environment split with their critical temperatures, the
//! temperature-time phase-diagram sweeps behind the `dephase` CLI, two
//! contrasting dilations of the single-qubit dephasing channel, and a
//! brute-force truncated-Fock oracle that verifies all of the above on
//! discrete baths.
//!
//! Everything works in reduced units hbar = k_B = omega_c = 1: time is
//! `tau = omega_c t`, temperature is `theta = k_B T / (hbar omega_c)`, and
//! the Ohmic coupling `kappa` is dimensionless.

pub mod criteria;
pub mod dilation;
pub mod dynamics;
pub mod error;
pub mod kernels;
pub mod matrix;
pub mod oracle;
pub mod quad;
pub mod sweep;
pub mod xstate;

pub use criteria::{
    classify, entanglement_threshold, optimal_test_vector, pt_expectation_sign,
    separability_threshold, PtSign, SEClassification, TestVector, Verdict,
};
pub use dilation::{
    dephase_channel, mixed_dilation_total, pure_dilation_pt_determinant, pure_dilation_total,
    Qubit,
};
pub use dynamics::{
    concurrence_at, decoherence_factor, decoherence_time, evolve_master, reduced_state,
    sudden_death_time, trajectory, DecoherenceFactor, ReducedTrajectoryPoint,
};
pub use error::{Error, Result};
pub use kernels::{
    critical_temperature, decoherence_exponent, dephasing_rate, e_kernel_asymptotic, ln_shi,
    se_kernel, shi, BathMode, BathModel, KernelKind, KernelValue, THETA_MAX, THETA_MIN,
};
pub use matrix::{partial_transpose, DenseHermitian};
pub use oracle::{
    env_pair_pt_min, evolve_total, pt_min_eigenvalue, reduced_from_total, thermal_mode_state,
    Bipartition, OracleConfig, TotalState,
};
pub use sweep::{
    overlay_curves, sweep_grid, sweep_grid_seq, tcrit_query, CurvePoint, GridRow, GridSpec,
};
pub use xstate::{WernerParams, XState};
