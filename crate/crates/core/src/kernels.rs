//! Bath integrals for the dephasing model in reduced units
//! (hbar = k_B = omega_c = 1).
//!
//! For the Ohmic density J(omega) = kappa * omega supported on [0, 1] the
//! kernels are
//!
//! ```text
//! dephasing rate        4 kappa int_0^1 coth(w/2 theta) sin(w tau) dw
//! decoherence exponent  4 kappa int_0^1 coth(w/2 theta) (1 - cos(w tau)) / w dw
//! S  kernel             4 kappa int_0^1 exp( w/theta)   (1 - cos(w tau)) / w dw
//! S' kernel             4 kappa int_0^1 exp(-w/theta)   (1 - cos(w tau)) / w dw
//! E  kernel             4 kappa int_0^1 2 sinh(w/theta) (1 - cos(w tau)) / w dw
//! ```
//!
//! with E = S - S' identically. A discrete bath replaces `int J(w) dw` by a
//! sum over modes with squared couplings g2. The S and E kernels grow like
//! exp(1/theta) at low temperature, so they are accumulated against the
//! scale exp((w - 1)/theta) and carried as log-domain [`KernelValue`]s.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{self, ABS_FLOOR, REL_TOL};

/// Supported dimensionless temperature range.
pub const THETA_MIN: f64 = 0.002;
pub const THETA_MAX: f64 = 1e4;

/// One bath mode: frequency and squared coupling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathMode {
    pub omega: f64,
    pub g2: f64,
}

/// Bath model: continuum Ohmic density with hard cutoff at omega = 1, or an
/// explicit list of discrete modes.
///
/// Note the hard cutoff keeps the support on [0, 1]; only that support gives
/// finite kernels and the closed-form critical temperature.
#[derive(Debug, Clone, PartialEq)]
pub enum BathModel {
    Continuum { kappa: f64 },
    Discrete { modes: Vec<BathMode> },
}

impl BathModel {
    pub fn continuum(kappa: f64) -> Result<Self> {
        if !kappa.is_finite() || kappa <= 0.0 {
            return Err(Error::Range(format!(
                "coupling strength kappa must be positive and finite, got {kappa}"
            )));
        }
        Ok(BathModel::Continuum { kappa })
    }

    pub fn discrete(modes: Vec<BathMode>) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::Range("discrete bath needs at least one mode".into()));
        }
        for m in &modes {
            if !m.omega.is_finite() || m.omega <= 0.0 {
                return Err(Error::Range(format!(
                    "mode frequency must be positive, got {}",
                    m.omega
                )));
            }
            if !m.g2.is_finite() || m.g2 < 0.0 {
                return Err(Error::Range(format!(
                    "squared coupling must be nonnegative, got {}",
                    m.g2
                )));
            }
        }
        Ok(BathModel::Discrete { modes })
    }

    /// Continuum bath discretized into `m` equally spaced midpoint modes
    /// with g2 = kappa * omega * d_omega. Used by refinement checks and to
    /// match the oracle against continuum results.
    pub fn discretized(kappa: f64, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Range("discretization needs at least one mode".into()));
        }
        let dw = 1.0 / m as f64;
        let modes = (0..m)
            .map(|k| {
                let omega = (k as f64 + 0.5) * dw;
                BathMode {
                    omega,
                    g2: kappa * omega * dw,
                }
            })
            .collect();
        BathModel::discrete(modes)
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if !(THETA_MIN..=THETA_MAX).contains(&theta) {
        return Err(Error::Range(format!(
            "temperature theta must lie in [{THETA_MIN}, {THETA_MAX}], got {theta}"
        )));
    }
    Ok(())
}

fn check_tau(tau: f64) -> Result<()> {
    if !tau.is_finite() || tau < 0.0 {
        return Err(Error::Range(format!(
            "time tau must be nonnegative and finite, got {tau}"
        )));
    }
    Ok(())
}

/// coth(x) for x > 0, series-expanded near zero.
fn coth(x: f64) -> f64 {
    if x < 1e-4 {
        1.0 / x + x / 3.0
    } else {
        1.0 / x.tanh()
    }
}

/// (1 - cos(t x)) evaluated without cancellation.
#[inline]
fn one_minus_cos(y: f64) -> f64 {
    let s = (0.5 * y).sin();
    2.0 * s * s
}

/// Dephasing rate gamma(theta, tau). Oscillates and may be negative.
pub fn dephasing_rate(bath: &BathModel, theta: f64, tau: f64) -> Result<f64> {
    check_theta(theta)?;
    check_tau(tau)?;
    if tau == 0.0 {
        return Ok(0.0);
    }
    match bath {
        BathModel::Continuum { kappa } => {
            let pts = quad::oscillation_breakpoints(tau, 1.0);
            let k = *kappa;
            quad::integrate(
                |w| 4.0 * k * coth(0.5 * w / theta) * (w * tau).sin(),
                0.0,
                1.0,
                &pts,
                REL_TOL,
                ABS_FLOOR,
            )
        }
        BathModel::Discrete { modes } => Ok(modes
            .iter()
            .map(|m| 4.0 * m.g2 * coth(0.5 * m.omega / theta) * (m.omega * tau).sin() / m.omega)
            .sum()),
    }
}

/// Decoherence exponent Gamma(theta, tau) = int_0^tau gamma ds >= 0.
/// The coherence magnitude is exp(-Gamma).
pub fn decoherence_exponent(bath: &BathModel, theta: f64, tau: f64) -> Result<f64> {
    check_theta(theta)?;
    check_tau(tau)?;
    if tau == 0.0 {
        return Ok(0.0);
    }
    match bath {
        BathModel::Continuum { kappa } => {
            let pts = quad::oscillation_breakpoints(tau, 1.0);
            let k = *kappa;
            quad::integrate(
                |w| 4.0 * k * coth(0.5 * w / theta) * one_minus_cos(w * tau) / w,
                0.0,
                1.0,
                &pts,
                REL_TOL,
                ABS_FLOOR,
            )
        }
        BathModel::Discrete { modes } => Ok(modes
            .iter()
            .map(|m| {
                4.0 * m.g2 * coth(0.5 * m.omega / theta) * one_minus_cos(m.omega * tau)
                    / (m.omega * m.omega)
            })
            .sum()),
    }
}

/// Which separability/entanglement kernel to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    /// Weight exp(omega/theta); bounds the positivity of the partial-P matrix.
    Separability,
    /// Weight exp(-omega/theta); the conjugate companion of `Separability`.
    Conjugate,
    /// Weight 2 sinh(omega/theta) = difference of the two above; drives the
    /// partial-transpose entanglement witness.
    Entanglement,
}

/// A nonnegative kernel value carried in the log domain so temperatures down
/// to theta = 0.002 (values of order exp(500)) stay representable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    log_value: f64,
    value: f64,
}

impl KernelValue {
    pub fn zero() -> Self {
        KernelValue {
            log_value: f64::NEG_INFINITY,
            value: 0.0,
        }
    }

    pub fn from_log(log_value: f64) -> Self {
        KernelValue {
            log_value,
            value: log_value.exp(),
        }
    }

    /// Natural log of the kernel; -inf encodes an exact zero.
    pub fn log_value(&self) -> f64 {
        self.log_value
    }

    /// Linear value; +inf when the log exceeds the f64 range.
    pub fn value(&self) -> f64 {
        self.value
    }

    /// `self <= threshold`, compared in the log domain. Thresholds may be 0
    /// (only an exact zero satisfies them) or +inf (always satisfied).
    pub fn at_most(&self, threshold: f64) -> bool {
        self.log_value <= threshold.ln()
    }

    /// `self > threshold`, the strict complement of [`Self::at_most`].
    pub fn exceeds(&self, threshold: f64) -> bool {
        self.log_value > threshold.ln()
    }
}

/// Evaluates the S, S', or E kernel as a log-domain [`KernelValue`].
pub fn se_kernel(kind: KernelKind, bath: &BathModel, theta: f64, tau: f64) -> Result<KernelValue> {
    check_theta(theta)?;
    check_tau(tau)?;
    if tau == 0.0 {
        return Ok(KernelValue::zero());
    }
    // The integrand is scaled by exp(-offset) so the quadrature sees numbers
    // of order one even when exp(omega/theta) overflows the linear range;
    // the offset is restored on the log value.
    let (offset, weight): (f64, Box<dyn Fn(f64) -> f64>) = match kind {
        KernelKind::Separability => (1.0 / theta, Box::new(move |w: f64| ((w - 1.0) / theta).exp())),
        KernelKind::Conjugate => (0.0, Box::new(move |w: f64| (-w / theta).exp())),
        KernelKind::Entanglement => (
            1.0 / theta,
            Box::new(move |w: f64| ((w - 1.0) / theta).exp() * (-(-2.0 * w / theta).exp_m1())),
        ),
    };
    let scaled = match bath {
        BathModel::Continuum { kappa } => {
            let pts = quad::oscillation_breakpoints(tau, 1.0);
            let k = *kappa;
            quad::integrate(
                |w| 4.0 * k * weight(w) * one_minus_cos(w * tau) / w,
                0.0,
                1.0,
                &pts,
                REL_TOL,
                ABS_FLOOR,
            )?
        }
        BathModel::Discrete { modes } => {
            let scale = match kind {
                KernelKind::Conjugate => 0.0,
                _ => modes
                    .iter()
                    .map(|m| m.omega)
                    .fold(f64::NEG_INFINITY, f64::max)
                    / theta,
            };
            let mut sum = 0.0;
            for m in modes {
                let w_scaled = match kind {
                    KernelKind::Separability => (m.omega / theta - scale).exp(),
                    KernelKind::Conjugate => (-m.omega / theta).exp(),
                    KernelKind::Entanglement => {
                        (m.omega / theta - scale).exp() * (-(-2.0 * m.omega / theta).exp_m1())
                    }
                };
                sum += 4.0 * m.g2 * w_scaled * one_minus_cos(m.omega * tau) / (m.omega * m.omega);
            }
            return Ok(if sum == 0.0 {
                KernelValue::zero()
            } else {
                KernelValue::from_log(scale + sum.ln())
            });
        }
    };
    Ok(if scaled == 0.0 {
        KernelValue::zero()
    } else {
        KernelValue::from_log(offset + scaled.ln())
    })
}

/// Hyperbolic sine integral Shi(x) = int_0^x sinh(u)/u du for x >= 0.
///
/// Power series below `SHI_SERIES_CUTOFF` (all terms positive, no
/// cancellation), asymptotic expansion e^x/(2x) sum_k k!/x^k truncated at
/// its smallest term above it. Relative error <= 1e-10 throughout; the
/// series/asymptotic crossover sits where the asymptotic truncation error
/// has dropped below that bound.
pub fn shi(x: f64) -> f64 {
    ln_shi_impl(x).1
}

/// ln(Shi(x)); stays finite where Shi itself overflows (x > ~709).
pub fn ln_shi(x: f64) -> f64 {
    ln_shi_impl(x).0
}

const SHI_SERIES_CUTOFF: f64 = 30.0;

fn ln_shi_impl(x: f64) -> (f64, f64) {
    assert!(x >= 0.0, "Shi requires a nonnegative argument");
    if x == 0.0 {
        return (f64::NEG_INFINITY, 0.0);
    }
    if x <= SHI_SERIES_CUTOFF {
        let mut sum = x;
        let mut term = x;
        let mut k = 1u32;
        loop {
            let kk = 2.0 * k as f64;
            term *= x * x * (kk - 1.0) / ((kk + 1.0) * (kk + 1.0) * kk);
            sum += term;
            if term < sum * f64::EPSILON {
                break;
            }
            k += 1;
        }
        (sum.ln(), sum)
    } else {
        // Shi(x) = (Ei(x) - Ei(-x))/2; Ei(-x) is smaller by exp(-2x) and is
        // dropped. Ei(x) ~ e^x/x sum_k k!/x^k truncated at the smallest term.
        let mut sum = 1.0;
        let mut term = 1.0;
        let mut k = 1.0f64;
        loop {
            let next = term * k / x;
            if next >= term || next < sum * f64::EPSILON {
                break;
            }
            term = next;
            sum += term;
            k += 1.0;
        }
        let ln = x - (2.0 * x).ln() + sum.ln();
        (ln, ln.exp())
    }
}

/// Long-time expansion of the E kernel for the continuum bath:
/// `8 kappa Shi(1/theta) - 2 kappa tau / (tau^2 + theta^-2) e^{1/theta} sin(tau)`.
pub fn e_kernel_asymptotic(kappa: f64, theta: f64, tau: f64) -> Result<f64> {
    check_theta(theta)?;
    if tau < 10.0 {
        return Err(Error::Domain(format!(
            "long-time expansion requires tau >= 10, got {tau}"
        )));
    }
    let base = 8.0 * kappa * shi(1.0 / theta);
    let osc = 2.0 * kappa * tau / (tau * tau + theta.powi(-2)) * (1.0 / theta).exp() * tau.sin();
    Ok(base - osc)
}

/// Bisection bounds for [`critical_temperature`], on theta.
const TCRIT_THETA_LO: f64 = 1e-4;
const TCRIT_THETA_HI: f64 = 1e4;

/// Solves `8 kappa Shi(1/theta) = threshold` for theta.
///
/// Shi(1/theta) is strictly decreasing in theta, so the root is unique;
/// bisection runs on ln(theta) over [ln 1e-4, ln 1e4] to 1e-10 relative.
/// Comparisons happen in the log domain because Shi(1/theta) overflows
/// near the lower bracket end.
pub fn critical_temperature(kappa: f64, threshold: f64) -> Result<f64> {
    if !kappa.is_finite() || kappa <= 0.0 {
        return Err(Error::Range(format!("kappa must be positive, got {kappa}")));
    }
    if !threshold.is_finite() || threshold <= 0.0 {
        return Err(Error::Range(format!(
            "threshold must be positive and finite, got {threshold}"
        )));
    }
    let ln_target = threshold.ln() - (8.0 * kappa).ln();
    // f(ln theta) = ln Shi(e^{-ln theta}) - ln_target, strictly decreasing.
    let f = |ln_theta: f64| ln_shi((-ln_theta).exp()) - ln_target;
    let mut lo = TCRIT_THETA_LO.ln();
    let mut hi = TCRIT_THETA_HI.ln();
    if f(lo) < 0.0 || f(hi) > 0.0 {
        return Err(Error::Bracket {
            threshold,
            theta_lo: TCRIT_THETA_LO,
            theta_hi: TCRIT_THETA_HI,
        });
    }
    // 80 halvings of an 18.4-wide interval reach well below 1e-10.
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ohmic(kappa: f64) -> BathModel {
        BathModel::continuum(kappa).unwrap()
    }

    #[test]
    fn rates_vanish_at_tau_zero() {
        let b = ohmic(1e-3);
        assert_eq!(dephasing_rate(&b, 0.2, 0.0).unwrap(), 0.0);
        assert_eq!(decoherence_exponent(&b, 0.2, 0.0).unwrap(), 0.0);
        for kind in [
            KernelKind::Separability,
            KernelKind::Conjugate,
            KernelKind::Entanglement,
        ] {
            let v = se_kernel(kind, &b, 0.2, 0.0).unwrap();
            assert_eq!(v.value(), 0.0);
            assert_eq!(v.log_value(), f64::NEG_INFINITY);
        }
    }

    #[test]
    fn theta_domain_is_enforced()  {
        let b = ohmic(1.0);
        assert!(dephasing_rate(&b, 1e-3, 1.0).is_err());
        assert!(decoherence_exponent(&b, 2e4, 1.0).is_err());
    }

    #[test]
    fn exponent_is_nonnegative_where_rate_oscillates() {
        // Single discrete mode: the rate is a pure sinusoid, negative on
        // half its period, while the exponent never drops below zero.
        let b = BathModel::discrete(vec![BathMode {
            omega: 0.7,
            g2: 1e-3,
        }])
        .unwrap();
        let mut saw_negative_rate = false;
        for i in 0..200 {
            let tau = 0.1 * i as f64;
            let g = dephasing_rate(&b, 0.3, tau).unwrap();
            saw_negative_rate |= g < 0.0;
            assert!(decoherence_exponent(&b, 0.3, tau).unwrap() >= 0.0);
        }
        assert!(saw_negative_rate);
    }

    #[test]
    fn kernel_identity_e_equals_s_minus_sbar() {
        let b = ohmic(1.0);
        let s = se_kernel(KernelKind::Separability, &b, 1.0, 3.0).unwrap();
        let sb = se_kernel(KernelKind::Conjugate, &b, 1.0, 3.0).unwrap();
        let e = se_kernel(KernelKind::Entanglement, &b, 1.0, 3.0).unwrap();
        assert!(((s.value() - sb.value()) - e.value()).abs() / e.value() < 1e-10);
    }

    #[test]
    fn low_temperature_kernel_stays_representable_in_log_domain() {
        let b = ohmic(1.0);
        let s = se_kernel(KernelKind::Separability, &b, THETA_MIN, 5.0).unwrap();
        assert!(s.log_value().is_finite());
        assert!(s.log_value() > 400.0 && s.log_value() < 700.0);
        let e = se_kernel(KernelKind::Entanglement, &b, THETA_MIN, 5.0).unwrap();
        // At theta = 0.002 the conjugate weight is utterly negligible.
        assert!((e.log_value() - s.log_value()).abs() < 1e-9);
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn shi_small_and_reference_values() {
        assert_eq!(shi(0.0), 0.0);
        // Reference values from a 30-digit arbitrary-precision evaluation.
        let cases = [
            (0.1372, 0.13734356054254942),
            (1.0, 1.0572508753757285),
            (3.0, 4.9734404758598068),
            (10.0, 1246.1144901994233),
            (20.0, 1.2807826332028294e7),
            (29.5, 1.1386530322689184e11),
            (30.5, 2.9899813561071574e11),
            (50.0, 5.2928184485658455e19),
            (300.0, 3.2482412540443329e127),
            (500.0, 1.4064106989431472e214),
        ];
        for (x, want) in cases {
            let got = shi(x);
            assert!(
                (got - want).abs() / want <= 1e-10,
                "shi({x}) = {got}, want {want}"
            );
        }
        assert!((ln_shi(500.0) - 493.094_250_755_971_52).abs() < 1e-8);
        assert!((ln_shi(9000.0) - 8990.2019840927573).abs() < 1e-8);
    }

    #[test]
    fn shi_matches_low_order_series_near_zero() {
        // The x^5/600 remainder is ~8e-8 at this argument.
        let x = 0.1372f64;
        let two_terms = x + x.powi(3) / 18.0;
        assert!((shi(x) - two_terms).abs() < 1e-7);
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn critical_temperature_reproduces_werner_value() {
        // 8e-3 Shi(1/theta) = ln 3 has its root near theta = 0.1345.
        let t = critical_temperature(1e-3, 3.0f64.ln()).unwrap();
        assert!((t - 0.13445924486094777).abs() < 1e-9, "{t}");
        let t = critical_temperature(1.0, 3.0f64.ln()).unwrap();
        assert!((t - 7.2895314277673608).abs() < 1e-8, "{t}");
        let t = critical_temperature(1.0, (1.9f64 / 1.8).ln()).unwrap();
        assert!((t - 147.96433240726298).abs() < 1e-6, "{t}");
    }

    #[test]
    fn critical_temperature_monotonicity() {
        let thr = 3.0f64.ln();
        let t1 = critical_temperature(1e-3, thr).unwrap();
        let t2 = critical_temperature(2e-3, thr).unwrap();
        assert!(t2 > t1);
        let t3 = critical_temperature(1e-3, 2.0 * thr).unwrap();
        assert!(t3 < t1);
    }

    #[test]
    fn critical_temperature_unbracketed_threshold() {
        // Below 8 kappa Shi(1/1e4) the root lies outside the bracket.
        let r = critical_temperature(1e-3, 1e-8);
        assert!(matches!(r, Err(Error::Bracket { .. })));
    }

    #[test]
    fn asymptotic_requires_long_times() {
        assert!(e_kernel_asymptotic(1e-3, 0.13, 5.0).is_err());
        // At multiples of pi the oscillatory term vanishes exactly.
        let tau = 5.0 * std::f64::consts::PI;
        let v = e_kernel_asymptotic(1e-3, 0.13, tau).unwrap();
        assert!((v - 8.0 * 1e-3 * shi(1.0 / 0.13)).abs() < 1e-15);
    }

    #[test]
    fn discrete_bath_validation() {
        assert!(BathModel::discrete(vec![]).is_err());
        assert!(BathModel::discrete(vec![BathMode { omega: 0.0, g2: 0.1 }]).is_err());
        assert!(BathModel::discrete(vec![BathMode {
            omega: 0.5,
            g2: -0.1
        }])
        .is_err());
        assert!(BathModel::continuum(0.0).is_err());
    }
}
