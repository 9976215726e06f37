//! Two-qubit X states: validation, concurrence, transposition, and the
//! analytic eigendecomposition of the two 2x2 blocks.
//!
//! Basis ordering is |1> = |00>, |2> = |01>, |3> = |10>, |4> = |11> with
//! qubit A first. An X-state density matrix carries populations on the
//! diagonal and coherences on the anti-diagonal only:
//!
//! ```text
//!     [ rho11    .      .     rho14 ]
//!     [   .    rho22  rho23     .   ]
//!     [   .    rho23* rho33     .   ]
//!     [ rho14*   .      .     rho44 ]
//! ```

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DenseHermitian;

/// Absolute tolerance on the unit-trace and block-positivity checks.
pub const VALIDATION_TOL: f64 = 1e-12;

/// A validated two-qubit X state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XState {
    rho11: f64,
    rho22: f64,
    rho33: f64,
    rho44: f64,
    rho14: Complex64,
    rho23: Complex64,
}

/// Serde representation: coherences as `[re, im]` pairs.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct RawXState {
    rho11: f64,
    rho22: f64,
    rho33: f64,
    rho44: f64,
    rho14: [f64; 2],
    rho23: [f64; 2],
}

impl Serialize for XState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawXState {
            rho11: self.rho11,
            rho22: self.rho22,
            rho33: self.rho33,
            rho44: self.rho44,
            rho14: [self.rho14.re, self.rho14.im],
            rho23: [self.rho23.re, self.rho23.im],
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for XState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawXState::deserialize(d)?;
        XState::new(
            raw.rho11,
            raw.rho22,
            raw.rho33,
            raw.rho44,
            Complex64::new(raw.rho14[0], raw.rho14[1]),
            Complex64::new(raw.rho23[0], raw.rho23[1]),
        )
        .map_err(serde::de::Error::custom)
    }
}

impl XState {
    /// Validates the six independent parameters of an X state.
    pub fn new(
        rho11: f64,
        rho22: f64,
        rho33: f64,
        rho44: f64,
        rho14: Complex64,
        rho23: Complex64,
    ) -> Result<Self> {
        let pops = [rho11, rho22, rho33, rho44];
        if pops.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::Range(format!(
                "populations must be finite and nonnegative, got {pops:?}"
            )));
        }
        let trace = rho11 + rho22 + rho33 + rho44;
        if (trace - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::Trace { trace });
        }
        let outer = rho11 * rho44;
        if rho14.norm_sqr() > outer + VALIDATION_TOL {
            return Err(Error::Negativity {
                block: "{1,4}",
                product: outer,
                coherence_sq: rho14.norm_sqr(),
            });
        }
        let inner = rho22 * rho33;
        if rho23.norm_sqr() > inner + VALIDATION_TOL {
            return Err(Error::Negativity {
                block: "{2,3}",
                product: inner,
                coherence_sq: rho23.norm_sqr(),
            });
        }
        Ok(Self {
            rho11,
            rho22,
            rho33,
            rho44,
            rho14,
            rho23,
        })
    }

    pub fn rho11(&self) -> f64 {
        self.rho11
    }
    pub fn rho22(&self) -> f64 {
        self.rho22
    }
    pub fn rho33(&self) -> f64 {
        self.rho33
    }
    pub fn rho44(&self) -> f64 {
        self.rho44
    }
    pub fn rho14(&self) -> Complex64 {
        self.rho14
    }
    pub fn rho23(&self) -> Complex64 {
        self.rho23
    }

    pub fn is_diagonal(&self) -> bool {
        self.rho14 == Complex64::ZERO && self.rho23 == Complex64::ZERO
    }

    /// Concurrence of the state with both coherences scaled by the
    /// decoherence magnitude `d`.
    ///
    /// `2 max{0, |rho23| d - sqrt(rho11 rho44), |rho14| d - sqrt(rho22 rho33)}`
    pub fn concurrence(&self, d: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&d) {
            return Err(Error::Range(format!(
                "decoherence magnitude must lie in [0, 1], got {d}"
            )));
        }
        let inner = self.rho23.norm() * d - (self.rho11 * self.rho44).sqrt();
        let outer = self.rho14.norm() * d - (self.rho22 * self.rho33).sqrt();
        Ok(2.0 * inner.max(outer).max(0.0))
    }

    /// Transpose in the computational basis: conjugates both coherences.
    pub fn transpose(&self) -> XState {
        XState {
            rho14: self.rho14.conj(),
            rho23: self.rho23.conj(),
            ..*self
        }
    }

    /// Smallest eigenvalue of the X matrix together with a unit-norm
    /// eigenvector.
    ///
    /// The X structure splits into the {1,4} and {2,3} 2x2 blocks, solved in
    /// closed form. Ties (within 1e-12, so exactly degenerate families like
    /// the Werner states land here despite rounding) prefer the {2,3} block;
    /// within a degenerate block the basis vector with the smaller index is
    /// returned, and the global phase is fixed so the first nonzero
    /// amplitude has positive real part.
    pub fn min_eigenpair(&self) -> (f64, [Complex64; 4]) {
        const TIE_TOL: f64 = 1e-12;
        let (lam_outer, v_outer) = block_min_eigenpair(self.rho11, self.rho44, self.rho14);
        let (lam_inner, v_inner) = block_min_eigenpair(self.rho22, self.rho33, self.rho23);
        let mut vec = [Complex64::ZERO; 4];
        let lambda = if lam_inner <= lam_outer + TIE_TOL {
            vec[1] = v_inner[0];
            vec[2] = v_inner[1];
            lam_inner
        } else {
            vec[0] = v_outer[0];
            vec[3] = v_outer[1];
            lam_outer
        };
        fix_phase(&mut vec);
        (lambda, vec)
    }

    /// Dense 4x4 matrix form.
    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(4, 4);
        m[(0, 0)] = self.rho11.into();
        m[(1, 1)] = self.rho22.into();
        m[(2, 2)] = self.rho33.into();
        m[(3, 3)] = self.rho44.into();
        m[(0, 3)] = self.rho14;
        m[(3, 0)] = self.rho14.conj();
        m[(1, 2)] = self.rho23;
        m[(2, 1)] = self.rho23.conj();
        m
    }

    pub fn to_hermitian(&self) -> DenseHermitian {
        DenseHermitian::new(self.to_matrix()).expect("X state matrix is Hermitian")
    }
}

/// Werner family `(1-c)/4 * I + c |phi-><phi-|`, entangled iff c > 1/3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WernerParams {
    pub c: f64,
}

impl WernerParams {
    pub fn new(c: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&c) {
            return Err(Error::Range(format!(
                "Werner purity parameter must lie in [0, 1], got {c}"
            )));
        }
        Ok(Self { c })
    }

    pub fn to_x_state(self) -> XState {
        let c = self.c;
        XState::new(
            (1.0 - c) / 4.0,
            (1.0 + c) / 4.0,
            (1.0 + c) / 4.0,
            (1.0 - c) / 4.0,
            Complex64::ZERO,
            Complex64::new(-c / 2.0, 0.0),
        )
        .expect("Werner parameters always give a valid X state")
    }
}

/// Min eigenpair of the Hermitian block [[a, c], [c*, b]].
fn block_min_eigenpair(a: f64, b: f64, c: Complex64) -> (f64, [Complex64; 2]) {
    let mean = 0.5 * (a + b);
    let half_gap = 0.5 * (a - b);
    let r = (half_gap * half_gap + c.norm_sqr()).sqrt();
    let lambda = mean - r;
    if c.norm_sqr() == 0.0 {
        // Diagonal block: basis vector of the smaller entry, lower index on ties.
        return if a <= b {
            (a, [Complex64::ONE, Complex64::ZERO])
        } else {
            (b, [Complex64::ZERO, Complex64::ONE])
        };
    }
    // Eigenvector (c, lambda - a); switch to the numerically larger
    // representation when lambda is close to a.
    let v = if (lambda - a).abs() >= (lambda - b).abs() {
        [c, Complex64::from(lambda - a)]
    } else {
        [Complex64::from(lambda - b), c.conj()]
    };
    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    (lambda, [v[0] / norm, v[1] / norm])
}

/// Rotates the global phase so the first nonzero amplitude is real positive.
fn fix_phase(v: &mut [Complex64; 4]) {
    if let Some(first) = v.iter().find(|z| z.norm_sqr() > 0.0) {
        let phase = first / first.norm();
        for z in v.iter_mut() {
            *z /= phase;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn werner_half_is_valid() {
        let x = WernerParams::new(0.5).unwrap().to_x_state();
        assert!((x.rho11() - 0.125).abs() < 1e-15);
        assert!((x.rho23().re + 0.25).abs() < 1e-15);
    }

    #[test]
    fn pure_ground_state_is_valid() {
        let x = XState::new(1.0, 0.0, 0.0, 0.0, Complex64::ZERO, Complex64::ZERO).unwrap();
        assert!(x.is_diagonal());
    }

    #[test]
    fn block_positivity_violation_is_rejected() {
        let err = XState::new(
            0.0,
            0.5,
            0.5,
            0.0,
            Complex64::ZERO,
            Complex64::new(0.6, 0.0),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Negativity { .. }), "{err}");
    }

    #[test]
    fn trace_violation_is_rejected() {
        let err = XState::new(0.5, 0.5, 0.1, 0.0, Complex64::ZERO, Complex64::ZERO).unwrap_err();
        assert!(matches!(err, Error::Trace { .. }), "{err}");
    }

    #[test]
    fn concurrence_of_werner_states() {
        // c = 0.9 at full coherence: (3c - 1)/2.
        let x = WernerParams::new(0.9).unwrap().to_x_state();
        assert!((x.concurrence(1.0).unwrap() - 0.85).abs() < 1e-15);
        // c = 0.2 is never entangled.
        let x = WernerParams::new(0.2).unwrap().to_x_state();
        assert_eq!(x.concurrence(1.0).unwrap(), 0.0);
        // c = 0.5 at d = 0.5 sits exactly at the sudden-death point.
        let x = WernerParams::new(0.5).unwrap().to_x_state();
        assert_eq!(x.concurrence(0.5).unwrap(), 0.0);
    }

    #[test]
    fn concurrence_rejects_bad_magnitude() {
        let x = WernerParams::new(0.5).unwrap().to_x_state();
        assert!(x.concurrence(1.5).is_err());
        assert!(x.concurrence(-0.1).is_err());
    }

    #[test]
    fn transpose_conjugates_coherences() {
        let x = XState::new(
            0.3,
            0.3,
            0.2,
            0.2,
            Complex64::new(0.1, 0.2),
            Complex64::new(0.05, -0.1),
        )
        .unwrap();
        let t = x.transpose();
        assert_eq!(t.rho14(), Complex64::new(0.1, -0.2));
        assert_eq!(t.rho23(), Complex64::new(0.05, 0.1));
        // Involution.
        assert_eq!(t.transpose(), x);
        // Werner states are invariant (real coherences).
        let w = WernerParams::new(0.7).unwrap().to_x_state();
        assert_eq!(w.transpose(), w);
    }

    #[test]
    fn min_eigenpair_of_transposed_werner() {
        let w = WernerParams::new(0.5).unwrap().to_x_state().transpose();
        let (lambda, v) = w.min_eigenpair();
        assert!((lambda - 0.125).abs() < 1e-15);
        assert!(v[0].norm() < 1e-15 && v[3].norm() < 1e-15);
        assert!((v[1].re - SQRT_HALF).abs() < 1e-12 && v[1].im.abs() < 1e-15);
        assert!((v[2].re - SQRT_HALF).abs() < 1e-12 && v[2].im.abs() < 1e-15);
    }

    #[test]
    fn min_eigenpair_tie_breaks() {
        // Maximally mixed: degenerate; {2,3} block preferred, lower index.
        let mm = XState::new(0.25, 0.25, 0.25, 0.25, Complex64::ZERO, Complex64::ZERO).unwrap();
        let (lambda, v) = mm.min_eigenpair();
        assert_eq!(lambda, 0.25);
        assert_eq!(v[1], Complex64::ONE);
        assert!(v[0].norm() + v[2].norm() + v[3].norm() == 0.0);

        // Pure |00>: eigenvalue 0 with support outside |00>.
        let g = XState::new(1.0, 0.0, 0.0, 0.0, Complex64::ZERO, Complex64::ZERO).unwrap();
        let (lambda, v) = g.min_eigenpair();
        assert_eq!(lambda, 0.0);
        assert_eq!(v[0], Complex64::ZERO);
        assert_eq!(v[1], Complex64::ONE);
    }

    #[test]
    fn min_eigenpair_satisfies_eigen_equation() {
        let x = XState::new(
            0.35,
            0.25,
            0.22,
            0.18,
            Complex64::new(0.12, -0.17),
            Complex64::new(-0.05, 0.2),
        )
        .unwrap();
        let (lambda, v) = x.min_eigenpair();
        let m = x.to_matrix();
        let vv = nalgebra::DVector::from_row_slice(&v);
        let residual = &m * &vv - vv.scale(lambda);
        assert!(residual.norm() <= 1e-12);
        assert!((vv.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn xstate_json_round_trip() {
        let x = XState::new(
            0.3,
            0.3,
            0.2,
            0.2,
            Complex64::new(0.1, 0.2),
            Complex64::new(0.05, -0.1),
        )
        .unwrap();
        let json = serde_json::to_string(&x).unwrap();
        let back: XState = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
        // Schema shape: coherences as [re, im] arrays.
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["rho14"][1], serde_json::json!(0.2));
    }

    #[test]
    fn xstate_json_rejects_invalid() {
        let bad = r#"{"rho11":0.0,"rho22":0.5,"rho33":0.5,"rho44":0.0,"rho14":[0,0],"rho23":[0.6,0]}"#;
        assert!(serde_json::from_str::<XState>(bad).is_err());
    }
}
