//! Small dense Hermitian matrices: validation, partial transpose, and
//! eigenvalue helpers used by the dilation demos and the Fock-space oracle.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance on the Hermiticity defect accepted at construction.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// A dense complex Hermitian matrix of small dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseHermitian {
    m: DMatrix<Complex64>,
}

impl DenseHermitian {
    /// Wraps a matrix after checking squareness and Hermiticity.
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Dimension(format!(
                "expected square matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let defect = hermiticity_defect(&m);
        if defect > HERMITICITY_TOL {
            return Err(Error::Internal(format!(
                "matrix is not Hermitian (defect {defect:e})"
            )));
        }
        Ok(Self { m })
    }

    /// Wraps a matrix known to be Hermitian by construction, symmetrizing
    /// away rounding noise.
    pub fn symmetrize(mut m: DMatrix<Complex64>) -> Self {
        let n = m.nrows();
        assert_eq!(n, m.ncols(), "symmetrize requires a square matrix");
        for i in 0..n {
            m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let v = 0.5 * (m[(i, j)] + m[(j, i)].conj());
                m[(i, j)] = v;
                m[(j, i)] = v.conj();
            }
        }
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.m[(i, j)]
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.m.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()
            .first()
            .copied()
            .expect("nonempty matrix")
    }

    /// Determinant via LU decomposition.
    pub fn determinant(&self) -> Complex64 {
        self.m.clone().lu().determinant()
    }

    /// Traces out the second factor of a `dim_a x dim_b` tensor product.
    pub fn trace_out_second(&self, dim_a: usize, dim_b: usize) -> Result<DenseHermitian> {
        check_factors(self.dim(), dim_a, dim_b)?;
        let mut out = DMatrix::zeros(dim_a, dim_a);
        for a in 0..dim_a {
            for a2 in 0..dim_a {
                let mut s = Complex64::ZERO;
                for b in 0..dim_b {
                    s += self.m[(a * dim_b + b, a2 * dim_b + b)];
                }
                out[(a, a2)] = s;
            }
        }
        Ok(DenseHermitian::symmetrize(out))
    }
}

fn hermiticity_defect(m: &DMatrix<Complex64>) -> f64 {
    let mut defect = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            defect = defect.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    defect
}

fn check_factors(dim: usize, dim_a: usize, dim_b: usize) -> Result<()> {
    if dim_a == 0 || dim_b == 0 || dim_a * dim_b != dim {
        return Err(Error::Dimension(format!(
            "cannot split dimension {dim} as {dim_a} x {dim_b}"
        )));
    }
    Ok(())
}

/// Partial transpose over the second factor of a `dim_a x dim_b` bipartition.
///
/// The spectrum of the partial transpose over the first factor is identical
/// (the two operations differ by a full transpose), so this single routine
/// serves every Peres test in the crate.
pub fn partial_transpose(
    m: &DenseHermitian,
    dim_a: usize,
    dim_b: usize,
) -> Result<DenseHermitian> {
    check_factors(m.dim(), dim_a, dim_b)?;
    let src = m.matrix();
    let mut out = DMatrix::zeros(m.dim(), m.dim());
    for a1 in 0..dim_a {
        for b1 in 0..dim_b {
            for a2 in 0..dim_a {
                for b2 in 0..dim_b {
                    // <a1 b1| out |a2 b2> = <a1 b2| src |a2 b1>
                    out[(a1 * dim_b + b1, a2 * dim_b + b2)] =
                        src[(a1 * dim_b + b2, a2 * dim_b + b1)];
                }
            }
        }
    }
    DenseHermitian::new(out)
}

/// Kronecker product of two complex matrices.
pub(crate) fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}
