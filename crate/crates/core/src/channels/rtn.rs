//! Random-telegraph decoherence function `phi(nu)` and its derivatives.
//!
//! `phi(nu) = e^{-nu} [cos(u nu) + sin(u nu)/u]` with `u = sqrt((4 tau)^2 - 1)`
//! and `nu = t / (2 tau)`. For `4 tau < 1` the frequency is imaginary and the
//! trigonometric pair continues to `cosh`/`sinh` with `u' = sqrt(1 - (4 tau)^2)`.

use crate::error::{Error, Result};

use super::jet::Jet;

/// Largest `tau` inside the regime plotted for the sweeps.
pub const PLOTTED_TAU_MAX: f64 = 0.25;

const SMALL_FREQUENCY: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RtnParams {
    tau: f64,
    t: f64,
}

impl RtnParams {
    pub fn new(tau: f64, t: f64) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::param("tau", tau, "must be positive and finite"));
        }
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::param("t", t, "must be nonnegative and finite"));
        }
        Ok(Self { tau, t })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Scaled time `t / (2 tau)`.
    pub fn nu(&self) -> f64 {
        self.t / (2.0 * self.tau)
    }

    pub fn with_time(&self, t: f64) -> Result<Self> {
        Self::new(self.tau, t)
    }

    /// False when `tau` lies above the plotted maximum of 1/4.
    pub fn in_plotted_regime(&self) -> bool {
        self.tau <= PLOTTED_TAU_MAX
    }

    fn kernel(&self) -> Kernel {
        Kernel::evaluate(self.tau, self.nu())
    }

    pub fn phi(&self) -> f64 {
        phi(self)
    }

    /// `phi` with its first and second derivatives in physical time `t`.
    pub fn phi_jet(&self) -> Jet {
        let k = self.kernel();
        let s = 1.0 / (2.0 * self.tau);
        Jet::new(
            k.phi(),
            k.dphi_dnu(self.tau) * s,
            k.d2phi_dnu2(self.tau) * s * s,
        )
    }
}

/// Damped pieces `e^{-nu} C(nu)` and `e^{-nu} S(nu)`, where `C` is the
/// (continued) cosine and `S` the (continued) `sin(u nu)/u`.
struct Kernel {
    damped_c: f64,
    damped_s: f64,
}

impl Kernel {
    fn evaluate(tau: f64, nu: f64) -> Self {
        let u_sq = 16.0 * tau * tau - 1.0;
        if u_sq.abs() * nu * nu < SMALL_FREQUENCY * SMALL_FREQUENCY {
            // critical point: C -> 1, S -> nu, with the u^2 correction terms
            let e = (-nu).exp();
            let damped_c = e * (1.0 - u_sq * nu * nu / 2.0);
            let damped_s = e * nu * (1.0 - u_sq * nu * nu / 6.0);
            return Self { damped_c, damped_s };
        }
        if u_sq > 0.0 {
            let u = u_sq.sqrt();
            let e = (-nu).exp();
            Self {
                damped_c: e * (u * nu).cos(),
                damped_s: e * (u * nu).sin() / u,
            }
        } else {
            // e^{-nu} cosh(u' nu) = (e^{-(1-u')nu} + e^{-(1+u')nu}) / 2, with
            // 1 - u' written as 16 tau^2 / (1 + u') to avoid cancellation
            let u = (-u_sq).sqrt();
            let slow = (-(16.0 * tau * tau / (1.0 + u)) * nu).exp();
            let fast = (-(1.0 + u) * nu).exp();
            Self {
                damped_c: 0.5 * (slow + fast),
                damped_s: 0.5 * (slow - fast) / u,
            }
        }
    }

    fn phi(&self) -> f64 {
        self.damped_c + self.damped_s
    }

    // d/dnu [e^{-nu}(C + S)] = -(1 + u^2) e^{-nu} S and 1 + u^2 = 16 tau^2
    fn dphi_dnu(&self, tau: f64) -> f64 {
        -16.0 * tau * tau * self.damped_s
    }

    // S' = C
    fn d2phi_dnu2(&self, tau: f64) -> f64 {
        -16.0 * tau * tau * (self.damped_c - self.damped_s)
    }
}

/// Decoherence function; `phi(0) = 1` for every `tau`.
pub fn phi(params: &RtnParams) -> f64 {
    params.kernel().phi()
}

/// Closed-form `d phi / d nu = -e^{-nu} sin(u nu) (1 + u^2) / u`, continued
/// through `u = 0`.
pub fn dphi_dnu(params: &RtnParams) -> f64 {
    params.kernel().dphi_dnu(params.tau)
}

pub fn d2phi_dnu2(params: &RtnParams) -> f64 {
    params.kernel().d2phi_dnu2(params.tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn at(tau: f64, nu: f64) -> RtnParams {
        RtnParams::new(tau, 2.0 * tau * nu).unwrap()
    }

    /// The printed formula in complex arithmetic; for 4 tau < 1 `u` is imaginary.
    fn phi_complex(tau: f64, nu: f64) -> f64 {
        let u = Complex64::new(16.0 * tau * tau - 1.0, 0.0).sqrt();
        let z = (-nu).exp() * ((u * nu).cos() + (u * nu).sin() / u);
        assert!(z.im.abs() < 1e-14);
        z.re
    }

    #[test]
    fn phi_at_zero_time_is_one() {
        for tau in [0.01, 0.1, 0.25, 0.3, 2.0] {
            assert_eq!(RtnParams::new(tau, 0.0).unwrap().phi(), 1.0);
        }
    }

    #[test]
    fn phi_critical_point() {
        let got = at(0.25, 1.0).phi();
        assert!((got - 2.0 * (-1.0f64).exp()).abs() < 1e-15);
        assert!((got - 0.735759).abs() < 1e-6);
        // near-critical general formula with a tiny real frequency
        let near = phi_complex(0.25 + 1e-9, 1.0);
        assert!((got - near).abs() < 1e-7);
    }

    #[test]
    fn phi_overdamped_matches_complex_formula() {
        let got = at(0.1, 1.0).phi();
        let up = (1.0f64 - 0.16).sqrt();
        assert!((up - 0.916515).abs() < 1e-6);
        let closed = (-1.0f64).exp() * (up.cosh() + up.sinh() / up);
        assert!((got - closed).abs() < 1e-15);
        assert!((got - phi_complex(0.1, 1.0)).abs() < 1e-14);
        for tau in [0.01, 0.05, 0.2, 0.26, 0.5, 1.5] {
            for nu in [0.1, 0.7, 2.0, 5.0] {
                assert!((at(tau, nu).phi() - phi_complex(tau, nu)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn phi_is_continuous_through_critical_tau() {
        for t in [0.1, 0.5, 1.0] {
            let lo = RtnParams::new(0.25 - 1e-9, t).unwrap().phi();
            let hi = RtnParams::new(0.25 + 1e-9, t).unwrap().phi();
            assert!((lo - hi).abs() <= 1e-6);
        }
    }

    #[test]
    fn large_nu_does_not_overflow() {
        let p = RtnParams::new(1e-4, 5.0).unwrap();
        let v = p.phi();
        assert!(v.is_finite() && v > 0.0 && v <= 1.0);
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(dphi_dnu(&at(0.1, 0.0)), 0.0);
        assert!((dphi_dnu(&at(0.25, 1.0)) + (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let h = 1e-6;
        for tau in [0.01, 0.1, 0.2, 0.25, 0.3, 0.8] {
            for nu in [0.3, 1.0, 2.5] {
                let fd = (at(tau, nu + h).phi() - at(tau, nu - h).phi()) / (2.0 * h);
                assert!(
                    (dphi_dnu(&at(tau, nu)) - fd).abs() < 1e-8,
                    "tau={tau} nu={nu}"
                );
                let fd2 = (dphi_dnu(&at(tau, nu + h)) - dphi_dnu(&at(tau, nu - h))) / (2.0 * h);
                assert!((d2phi_dnu2(&at(tau, nu)) - fd2).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert!(RtnParams::new(0.0, 1.0).is_err());
        assert!(RtnParams::new(0.1, -1.0).is_err());
        assert!(RtnParams::new(f64::NAN, 1.0).is_err());
        assert!(!RtnParams::new(0.3, 1.0).unwrap().in_plotted_regime());
    }
}
