//! Separability and entanglement verdicts for the system-environment split.
//!
//! The partial-P weight of the total state stays positive (hence the state
//! stays trivially separable) while the S kernel is at or below
//! `min( ln(rho22 rho33 / |rho23|^2), ln(rho11 rho44 / |rho14|^2) ) / 2`.
//! Conversely a negative expectation of the partially transposed total
//! state in a test vector certifies entanglement once the E kernel exceeds
//! `ln(-num/den)`, where `num` is the population overlap of the test vector
//! and `den` its coherence overlap. The two criteria are sufficient but not
//! necessary, leaving an undetermined band where neither fires.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::{se_kernel, BathModel, KernelKind, KernelValue};
use crate::xstate::XState;

/// Unit-norm two-qubit test vector (amplitudes on |00>,|01>,|10>,|11>).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestVector {
    pub r: Complex64,
    pub s: Complex64,
    pub t: Complex64,
    pub u: Complex64,
}

impl TestVector {
    pub fn new(r: Complex64, s: Complex64, t: Complex64, u: Complex64) -> Result<Self> {
        let norm_sq = r.norm_sqr() + s.norm_sqr() + t.norm_sqr() + u.norm_sqr();
        if (norm_sq - 1.0).abs() > 1e-12 {
            return Err(Error::Range(format!(
                "test vector must have unit norm, got |v|^2 = {norm_sq}"
            )));
        }
        Ok(Self { r, s, t, u })
    }

    pub fn amplitudes(&self) -> [Complex64; 4] {
        [self.r, self.s, self.t, self.u]
    }
}

/// Three-valued verdict for one (theta, tau) point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Separable,
    Entangled,
    Undetermined,
}

impl Verdict {
    /// Stable CSV encoding: Separable 0, Entangled 1, Undetermined 2.
    pub fn code(&self) -> u8 {
        match self {
            Verdict::Separable => 0,
            Verdict::Entangled => 1,
            Verdict::Undetermined => 2,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Separable => "separable",
            Verdict::Entangled => "entangled",
            Verdict::Undetermined => "undetermined",
        }
    }
}

/// Verdict together with the kernel values and thresholds that produced it.
#[derive(Debug, Clone, Copy)]
pub struct SEClassification {
    pub verdict: Verdict,
    pub s_value: KernelValue,
    pub e_value: KernelValue,
    pub s_threshold: f64,
    pub e_threshold: f64,
}

/// Sign of the partial-transpose expectation value in a test vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtSign {
    NonNegative,
    Negative,
}

/// Threshold on the S kernel below which the partial-P weight stays
/// positive. A vanishing coherence disables its branch (+inf); a diagonal
/// state is never flagged.
pub fn separability_threshold(x0: &XState) -> f64 {
    let branch = |pops: f64, coh: Complex64| -> f64 {
        if coh.norm_sqr() == 0.0 {
            f64::INFINITY
        } else {
            0.5 * (pops / coh.norm_sqr()).ln()
        }
    };
    branch(x0.rho22() * x0.rho33(), x0.rho23())
        .min(branch(x0.rho11() * x0.rho44(), x0.rho14()))
}

/// The pure state with the smallest overlap with the transpose of `x0`,
/// i.e. the minimum eigenvector of the transposed X matrix. This is the
/// test vector driving the entanglement witness.
pub fn optimal_test_vector(x0: &XState) -> TestVector {
    let (_, v) = x0.transpose().min_eigenpair();
    TestVector::new(v[0], v[1], v[2], v[3]).expect("eigenvector is unit norm")
}

/// Threshold on the E kernel above which the witness certifies
/// entanglement. +inf when the coherence overlap `den` is nonnegative (the
/// criterion is then vacuous for this test vector).
///
/// The witness state alternates signs on its middle components,
/// (r, -s, -t, u); those signs cancel pairwise in the expectation value, so
/// `den` below is the plain coherence overlap and the sign pattern is
/// absorbed into the threshold. Block positivity bounds |den| <= num for
/// any unit vector (AM-GM on each coherence term), hence the threshold is
/// never negative and at tau = 0, where every kernel vanishes, the witness
/// can never fire.
pub fn entanglement_threshold(x0: &XState, v: &TestVector) -> f64 {
    let num = x0.rho11() * v.r.norm_sqr()
        + x0.rho22() * v.s.norm_sqr()
        + x0.rho33() * v.t.norm_sqr()
        + x0.rho44() * v.u.norm_sqr();
    let den = 2.0 * (x0.rho23() * v.s * v.t.conj()).re + 2.0 * (x0.rho14() * v.r * v.u.conj()).re;
    if den < 0.0 {
        (-num / den).ln()
    } else {
        f64::INFINITY
    }
}

/// Sign of the partially transposed total state's expectation value in the
/// test vector. After dividing out positive prefactors the expectation is
/// negative exactly when E exceeds [`entanglement_threshold`]; this routine
/// is the auditable bridge between the integral expression and the
/// threshold comparison used by [`classify`].
pub fn pt_expectation_sign(
    x0: &XState,
    v: &TestVector,
    bath: &BathModel,
    theta: f64,
    tau: f64,
) -> Result<PtSign> {
    let threshold = entanglement_threshold(x0, v);
    let e = se_kernel(KernelKind::Entanglement, bath, theta, tau)?;
    Ok(if e.exceeds(threshold) {
        PtSign::Negative
    } else {
        PtSign::NonNegative
    })
}

/// Classifies the system-environment state at one (theta, tau) point.
///
/// Both kernels are always evaluated; the criteria firing together would
/// certify a state both separable and entangled, which is impossible, so
/// that case reports an internal error instead of picking a side.
pub fn classify(x0: &XState, bath: &BathModel, theta: f64, tau: f64) -> Result<SEClassification> {
    let s_threshold = separability_threshold(x0);
    let e_threshold = entanglement_threshold(x0, &optimal_test_vector(x0));
    let s_value = se_kernel(KernelKind::Separability, bath, theta, tau)?;
    let e_value = se_kernel(KernelKind::Entanglement, bath, theta, tau)?;
    let separable = s_value.at_most(s_threshold);
    let entangled = e_value.exceeds(e_threshold);
    let verdict = match (separable, entangled) {
        (true, true) => {
            return Err(Error::Internal(format!(
                "separability and entanglement criteria both fired at theta={theta}, tau={tau} \
                 (S={:e} <= {:e}, E={:e} > {:e})",
                s_value.value(),
                s_threshold,
                e_value.value(),
                e_threshold
            )))
        }
        (true, false) => Verdict::Separable,
        (false, true) => Verdict::Entangled,
        (false, false) => Verdict::Undetermined,
    };
    Ok(SEClassification {
        verdict,
        s_value,
        e_value,
        s_threshold,
        e_threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xstate::WernerParams;

    const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn werner(c: f64) -> XState {
        WernerParams::new(c).unwrap().to_x_state()
    }

    fn ohmic(kappa: f64) -> BathModel {
        BathModel::continuum(kappa).unwrap()
    }

    #[test]
    fn werner_thresholds_share_the_closed_form() {
        for c in [0.2, 0.5, 0.9] {
            let x = werner(c);
            let want = ((1.0 + c) / (2.0 * c)).ln();
            assert!((separability_threshold(&x) - want).abs() < 1e-14);
            let v = optimal_test_vector(&x);
            assert!((entanglement_threshold(&x, &v) - want).abs() < 1e-14);
        }
        assert!((separability_threshold(&werner(0.2)) - 3.0f64.ln()).abs() < 1e-14);
        assert!((separability_threshold(&werner(0.5)) - 1.5f64.ln()).abs() < 1e-14);
        assert!((entanglement_threshold(&werner(0.9), &optimal_test_vector(&werner(0.9)))
            - (1.9f64 / 1.8).ln())
        .abs()
            < 1e-14);
    }

    #[test]
    fn diagonal_state_thresholds_are_infinite() {
        let x = XState::new(0.4, 0.3, 0.2, 0.1, Complex64::ZERO, Complex64::ZERO).unwrap();
        assert_eq!(separability_threshold(&x), f64::INFINITY);
        let v = optimal_test_vector(&x);
        assert_eq!(entanglement_threshold(&x, &v), f64::INFINITY);
    }

    #[test]
    fn maximally_mixed_state_gets_a_tie_break_vector_and_vacuous_witness() {
        let mm = XState::new(0.25, 0.25, 0.25, 0.25, Complex64::ZERO, Complex64::ZERO).unwrap();
        let v = optimal_test_vector(&mm);
        assert_eq!(v.s, Complex64::ONE);
        assert_eq!(entanglement_threshold(&mm, &v), f64::INFINITY);
    }

    #[test]
    fn werner_test_vector_is_the_inner_bell_state() {
        for c in [0.1, 0.5, 1.0] {
            let v = optimal_test_vector(&werner(c));
            assert!(v.r.norm() < 1e-14 && v.u.norm() < 1e-14);
            assert!((v.s.re - SQRT_HALF).abs() < 1e-12);
            assert!((v.t.re - SQRT_HALF).abs() < 1e-12);
        }
    }

    #[test]
    fn everything_is_separable_at_tau_zero() {
        for c in [0.2, 0.5, 0.9] {
            let cl = classify(&werner(c), &ohmic(1.0), 0.7, 0.0).unwrap();
            assert_eq!(cl.verdict, Verdict::Separable);
        }
    }

    #[test]
    fn pt_sign_flips_across_the_critical_temperature() {
        let x = werner(0.2);
        let v = optimal_test_vector(&x);
        let bath = ohmic(1e-3);
        assert_eq!(
            pt_expectation_sign(&x, &v, &bath, 0.05, 30.0).unwrap(),
            PtSign::Negative
        );
        assert_eq!(
            pt_expectation_sign(&x, &v, &bath, 0.3, 30.0).unwrap(),
            PtSign::NonNegative
        );
        assert_eq!(
            pt_expectation_sign(&x, &v, &bath, 0.05, 0.0).unwrap(),
            PtSign::NonNegative
        );
    }

    #[test]
    fn verdicts_match_kernel_comparisons_on_a_grid() {
        // Exclusivity for Werner inputs: E <= S with equal thresholds means
        // the two criteria can never fire together.
        let x = werner(0.5);
        let bath = ohmic(1e-3);
        for i in 0..20 {
            for j in 0..20 {
                let theta = 0.05 + 0.25 * i as f64 / 19.0;
                let tau = 50.0 * j as f64 / 19.0;
                let cl = classify(&x, &bath, theta, tau).unwrap();
                assert!(cl.e_value.log_value() <= cl.s_value.log_value() + 1e-12);
            }
        }
    }

    #[test]
    fn strong_coupling_produces_an_undetermined_band() {
        let x = werner(0.2);
        let bath = ohmic(1.0);
        let early = classify(&x, &bath, 2.0, 0.3).unwrap();
        assert_eq!(early.verdict, Verdict::Separable);
        let later = classify(&x, &bath, 2.0, 1.0).unwrap();
        assert_eq!(later.verdict, Verdict::Undetermined);
    }

    #[test]
    fn verdict_oscillates_near_the_critical_temperature() {
        let x = werner(0.2);
        let bath = ohmic(1e-3);
        let mut flips = 0;
        let mut prev: Option<Verdict> = None;
        for j in 0..=110 {
            let tau = 5.0 + 55.0 * j as f64 / 110.0;
            let v = classify(&x, &bath, 0.1345, tau).unwrap().verdict;
            if let Some(p) = prev {
                if p != v {
                    flips += 1;
                }
            }
            prev = Some(v);
        }
        assert!(flips >= 2, "only {flips} flips");
    }
}
