//! Single-qubit dephasing channel and two contrasting environment dilations:
//! a pure environmental state that entangles with the system whenever any
//! coherence dephases, and a mixed-state dilation that stays separable for
//! every dephasing strength. Tensor layout is system (x) environment.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{kron, DenseHermitian};
use crate::xstate::VALIDATION_TOL;

/// A validated single-qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Qubit {
    rho00: f64,
    rho11: f64,
    rho01: Complex64,
}

impl Qubit {
    pub fn new(rho00: f64, rho11: f64, rho01: Complex64) -> Result<Self> {
        if !rho00.is_finite() || !rho11.is_finite() || rho00 < 0.0 || rho11 < 0.0 {
            return Err(Error::Range(format!(
                "populations must be finite and nonnegative, got ({rho00}, {rho11})"
            )));
        }
        let trace = rho00 + rho11;
        if (trace - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::Trace { trace });
        }
        if rho01.norm_sqr() > rho00 * rho11 + VALIDATION_TOL {
            return Err(Error::Negativity {
                block: "qubit",
                product: rho00 * rho11,
                coherence_sq: rho01.norm_sqr(),
            });
        }
        Ok(Self {
            rho00,
            rho11,
            rho01,
        })
    }

    /// The +1 eigenstate of sigma1, (|0> + |1>)/sqrt(2).
    pub fn plus() -> Self {
        Qubit::new(0.5, 0.5, Complex64::from(0.5)).expect("|+> is a valid state")
    }

    pub fn rho00(&self) -> f64 {
        self.rho00
    }
    pub fn rho11(&self) -> f64 {
        self.rho11
    }
    pub fn rho01(&self) -> Complex64 {
        self.rho01
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 0)] = self.rho00.into();
        m[(1, 1)] = self.rho11.into();
        m[(0, 1)] = self.rho01;
        m[(1, 0)] = self.rho01.conj();
        m
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Range(format!(
            "dephasing parameter p must lie in [0, 1], got {p}"
        )));
    }
    Ok(())
}

/// Dephasing channel in the computational basis: off-diagonals scaled by
/// sqrt(p), populations fixed. p = 1 is the identity, p = 0 removes all
/// coherence.
pub fn dephase_channel(q: &Qubit, p: f64) -> Result<Qubit> {
    check_p(p)?;
    Qubit::new(q.rho00, q.rho11, q.rho01 * p.sqrt())
}

fn projector(k: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(2, 2);
    m[(k, k)] = Complex64::ONE;
    m
}

fn sigma3() -> DMatrix<Complex64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        Complex64::ONE,
        -Complex64::ONE,
    ]))
}

/// Total state of the pure-environment dilation: the environment starts in
/// |0><0| and evolves under U_E = sqrt(p) sigma3 + sqrt(1-p) sigma1,
/// conditioned on the system being in |1>. Entangles for every p < 1 with a
/// nonzero initial coherence.
pub fn pure_dilation_total(q: &Qubit, p: f64) -> Result<DenseHermitian> {
    check_p(p)?;
    // U_tot = |0><0| (x) 1 + |1><1| (x) U_E
    let mut u_env = DMatrix::zeros(2, 2);
    u_env[(0, 0)] = Complex64::from(p.sqrt());
    u_env[(1, 1)] = Complex64::from(-p.sqrt());
    u_env[(0, 1)] = Complex64::from((1.0 - p).sqrt());
    u_env[(1, 0)] = Complex64::from((1.0 - p).sqrt());
    let eye = DMatrix::identity(2, 2);
    let u_tot = kron(&projector(0), &eye) + kron(&projector(1), &u_env);
    let init = kron(&q.to_matrix(), &projector(0));
    let total = &u_tot * init * u_tot.adjoint();
    Ok(DenseHermitian::symmetrize(total))
}

/// Total state of the mixed-environment dilation: the explicit convex
/// combination `(1+sqrt(p))/2 rho (x) |0><0| + (1-sqrt(p))/2 sigma3 rho
/// sigma3 (x) |1><1|`, separable for every p.
pub fn mixed_dilation_total(q: &Qubit, p: f64) -> Result<DenseHermitian> {
    check_p(p)?;
    let sp = p.sqrt();
    let rho = q.to_matrix();
    let s3 = sigma3();
    let flipped = &s3 * &rho * &s3;
    let total = kron(&rho, &projector(0)) * Complex64::from(0.5 * (1.0 + sp))
        + kron(&flipped, &projector(1)) * Complex64::from(0.5 * (1.0 - sp));
    Ok(DenseHermitian::symmetrize(total))
}

/// Closed form for the determinant of the partially transposed
/// pure-dilation state: `-(1-p)^2 rho00 rho11 |rho01|^2`.
pub fn pure_dilation_pt_determinant(q: &Qubit, p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(-(1.0 - p) * (1.0 - p) * q.rho00 * q.rho11 * q.rho01.norm_sqr())
}
