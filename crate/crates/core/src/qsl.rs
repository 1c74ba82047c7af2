//! Quantum speed limit bounds and correlated/uncorrelated ratios.
//!
//! Units: `hbar = 1`. Norms are Hilbert-Schmidt throughout.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use crate::channels::{ChannelFamily, KrausSet, MemoryMix, RtnParams};
use crate::error::{Error, Result};
use crate::matops::{ComplexMatrix, DensityMatrix};

/// Numerator constant of the Kraus-channel bound, `2 theta^2 / pi^2`.
pub const KRAUS_PREFACTOR: f64 = 2.0;
/// Numerator constant of the Lindbladian bound, `4 theta^2 / pi^2`.
pub const LINDBLAD_PREFACTOR: f64 = 4.0;

/// Relative size below which an energy variance counts as zero.
const VARIANCE_FLOOR: f64 = 1e-24;

/// A nonnegative quantity that may be unbounded (e.g. a speed limit for a
/// state that does not move).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bound {
    Finite(f64),
    Infinite,
}

impl Bound {
    pub fn finite(self) -> Option<f64> {
        match self {
            Bound::Finite(v) => Some(v),
            Bound::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Bound::Infinite)
    }

    /// `f64::INFINITY` for the unbounded case.
    pub fn as_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }

    /// `numerator / denominator`, unbounded when the denominator vanishes.
    pub fn quotient(numerator: f64, denominator: f64) -> Bound {
        if denominator == 0.0 {
            Bound::Infinite
        } else {
            Bound::Finite(numerator / denominator)
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(v) => write!(f, "{v}"),
            Bound::Infinite => f.write_str("inf"),
        }
    }
}

/// Target angle and initial state for a speed-limit evaluation.
#[derive(Clone, Debug)]
pub struct QslInput {
    theta: f64,
    rho0: DensityMatrix,
}

impl QslInput {
    /// `theta` must lie in `(0, pi/2]`, where `|cos theta - 1| >= 4 theta^2/pi^2` holds.
    pub fn new(theta: f64, rho0: DensityMatrix) -> Result<Self> {
        if !(theta > 0.0 && theta <= FRAC_PI_2) {
            return Err(Error::param("theta", theta, "must lie in (0, pi/2]"));
        }
        Ok(Self { theta, rho0 })
    }

    /// `theta = pi/2` on the Bell state `(|00> + |11>)/sqrt(2)`.
    pub fn bell_default() -> Self {
        Self {
            theta: FRAC_PI_2,
            rho0: DensityMatrix::bell_phi_plus(),
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn rho0(&self) -> &DensityMatrix {
        &self.rho0
    }
}

/// Mandelstam-Tamm time `pi / (2 Delta H)`.
pub fn mandelstam_tamm(hamiltonian: &ComplexMatrix, state: &DensityMatrix) -> Result<Bound> {
    let deviation = hamiltonian.hermiticity_defect();
    if deviation > crate::matops::EIGEN_SYMMETRY_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    if hamiltonian.dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            found: hamiltonian.dim(),
        });
    }
    let rho = state.matrix();
    let mean = rho.matmul(hamiltonian).trace().re;
    let mean_sq = rho.matmul(&hamiltonian.matmul(hamiltonian)).trace().re;
    let variance = mean_sq - mean * mean;
    let scale = hamiltonian.hs_norm().powi(2).max(1.0);
    if variance <= VARIANCE_FLOOR * scale {
        return Ok(Bound::Infinite);
    }
    Ok(Bound::Finite(PI / (2.0 * variance.sqrt())))
}

/// `f(t) = tr[rho0 rhot] / tr[rho0^2]`.
pub fn fidelity_f(rho0: &DensityMatrix, rhot: &DensityMatrix) -> Result<f64> {
    if rho0.dim() != rhot.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho0.dim(),
            found: rhot.dim(),
        });
    }
    Ok(rho0.matrix().matmul(rhot.matrix()).trace().re / rho0.purity())
}

/// `sum_a || K_a rho0 dK_a^dagger ||`.
pub fn kraus_qsl_denominator(k: &KrausSet, rho0: &DensityMatrix) -> Result<f64> {
    let derivs = k.derivatives().ok_or_else(|| Error::MissingDerivatives {
        label: k.label().to_string(),
    })?;
    if k.dim() != rho0.dim() {
        return Err(Error::DimensionMismatch {
            expected: k.dim(),
            found: rho0.dim(),
        });
    }
    Ok(k.operators()
        .iter()
        .zip(derivs)
        .map(|(op, d)| op.sandwich(rho0.matrix(), d).hs_norm())
        .sum())
}

/// `(2 theta^2 / pi^2) sqrt(tr rho0^2) / denominator`.
pub fn kraus_qsl_time(input: &QslInput, denominator: f64) -> Bound {
    let numerator =
        KRAUS_PREFACTOR * input.theta * input.theta / (PI * PI) * input.rho0.purity().sqrt();
    Bound::quotient(numerator, denominator)
}

/// `(4 theta^2 / pi^2) tr(rho0^2) / || L(rho0) ||`.
pub fn lindblad_qsl_time(input: &QslInput, l_rho0: &ComplexMatrix) -> Bound {
    let numerator =
        LINDBLAD_PREFACTOR * input.theta * input.theta / (PI * PI) * input.rho0.purity();
    Bound::quotient(numerator, l_rho0.hs_norm())
}

/// Triangle-inequality sandwich `1/(1 + x) <= tau_cor/tau_un <= 1/|1 - x|`.
pub fn ratio_bounds(x: f64) -> Result<(f64, Bound)> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::param("x", x, "must be nonnegative and finite"));
    }
    Ok((1.0 / (1.0 + x), Bound::quotient(1.0, (1.0 - x).abs())))
}

/// One sweep sample: the ratio `R = tau_cor / tau_un` at a swept parameter,
/// with the sandwich bounds where they apply.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioPoint {
    pub tau_or_a: f64,
    pub t_eval: f64,
    pub ratio: Bound,
    pub lower: Option<f64>,
    pub upper: Option<Bound>,
}

impl RatioPoint {
    /// `lower <= ratio <= upper` within `tol`; vacuous without bounds.
    pub fn within_bounds(&self, tol: f64) -> bool {
        let r = self.ratio.as_f64();
        let lo_ok = self.lower.is_none_or(|lo| lo <= r + tol);
        let hi_ok = match self.upper {
            None | Some(Bound::Infinite) => true,
            Some(Bound::Finite(hi)) => r <= hi + tol,
        };
        lo_ok && hi_ok
    }
}

/// Ratio from the two Kraus denominators. The theta and purity factors
/// cancel, so `tau_cor / tau_un = denom_un / denom_cor`; two vanishing
/// denominators (both bounds unbounded) give 1.
pub fn ratio_from_denominators(denom_uncorrelated: f64, denom_correlated: f64) -> Bound {
    if denom_uncorrelated == 0.0 && denom_correlated == 0.0 {
        Bound::Finite(1.0)
    } else {
        Bound::quotient(denom_uncorrelated, denom_correlated)
    }
}

/// Denominators and ratio for one channel family at one `(tau, t)` point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelRatio {
    pub denom_uncorrelated: f64,
    pub denom_correlated: f64,
    pub point: RatioPoint,
}

/// Ratio of the correlated (`mix.1`) to the uncorrelated (`mix.0`) speed
/// limit for `family` at `params`, starting from `rho0`.
pub fn qsl_ratio_channels(
    family: ChannelFamily,
    params: &RtnParams,
    mix: (MemoryMix, MemoryMix),
    rho0: &DensityMatrix,
) -> Result<ChannelRatio> {
    let un = family.build(params, mix.0)?;
    let co = family.build(params, mix.1)?;
    let denom_uncorrelated = kraus_qsl_denominator(&un, rho0)?;
    let denom_correlated = kraus_qsl_denominator(&co, rho0)?;
    Ok(ChannelRatio {
        denom_uncorrelated,
        denom_correlated,
        point: RatioPoint {
            tau_or_a: params.tau(),
            t_eval: params.t(),
            ratio: ratio_from_denominators(denom_uncorrelated, denom_correlated),
            lower: None,
            upper: None,
        },
    })
}

/// Ratio `||L_un(rho0)|| / ||L_un(rho0) + L_cor(rho0)||` with its sandwich,
/// where `x = ||L_cor(rho0)|| / ||L_un(rho0)||`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SandwichPoint {
    pub x: f64,
    pub point: RatioPoint,
}

pub fn lindblad_sandwich(
    a: f64,
    l_un: &ComplexMatrix,
    l_cor: &ComplexMatrix,
) -> Result<SandwichPoint> {
    let un = l_un.hs_norm();
    if un == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    let x = l_cor.hs_norm() / un;
    let total = (l_un + l_cor).hs_norm();
    let (lower, upper) = ratio_bounds(x)?;
    Ok(SandwichPoint {
        x,
        point: RatioPoint {
            tau_or_a: a,
            t_eval: 0.0,
            ratio: Bound::quotient(un, total),
            lower: Some(lower),
            upper: Some(upper),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{phase_damping_two_qubit, PhaseDampingParams};
    use crate::matops::{pauli, re};

    fn ket0() -> DensityMatrix {
        // |0> is index 1
        DensityMatrix::pure(&[re(0.0), re(1.0)]).unwrap()
    }

    #[test]
    fn mandelstam_tamm_examples() {
        assert_eq!(
            mandelstam_tamm(&pauli::sigma_z(), &ket0()).unwrap(),
            Bound::Infinite
        );
        let b = mandelstam_tamm(&pauli::sigma_x(), &ket0())
            .unwrap()
            .as_f64();
        assert!((b - FRAC_PI_2).abs() < 1e-15);
        let b2 = mandelstam_tamm(&pauli::sigma_x().scale_real(2.0), &ket0())
            .unwrap()
            .as_f64();
        assert!((b2 - b / 2.0).abs() < 1e-15);
        assert!(matches!(
            mandelstam_tamm(&pauli::sigma_minus(), &ket0()),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn fidelity_examples() {
        let bell = DensityMatrix::bell_phi_plus();
        assert!((fidelity_f(&bell, &bell).unwrap() - 1.0).abs() < 1e-15);
        let dephased =
            DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.5, 0.0, 0.0, 0.5])).unwrap();
        assert!((fidelity_f(&bell, &dephased).unwrap() - 0.5).abs() < 1e-15);
        let mixed = DensityMatrix::maximally_mixed(4);
        assert!((fidelity_f(&bell, &mixed).unwrap() - 0.25).abs() < 1e-15);
        assert!(fidelity_f(&bell, &ket0()).is_err());
    }

    #[test]
    fn kraus_time_arithmetic() {
        let input = QslInput::bell_default();
        assert_eq!(kraus_qsl_time(&input, 0.0), Bound::Infinite);
        assert!((kraus_qsl_time(&input, 1.0).as_f64() - 0.5).abs() < 1e-15);
        let quarter = QslInput::new(FRAC_PI_2 / 2.0, DensityMatrix::bell_phi_plus()).unwrap();
        let r = kraus_qsl_time(&input, 1.0).as_f64() / kraus_qsl_time(&quarter, 1.0).as_f64();
        assert!((r - 4.0).abs() < 1e-14);
        assert!(QslInput::new(2.0, DensityMatrix::bell_phi_plus()).is_err());
        assert!(QslInput::new(0.0, DensityMatrix::bell_phi_plus()).is_err());
    }

    #[test]
    fn lindblad_time_arithmetic() {
        let input = QslInput::bell_default();
        assert_eq!(
            lindblad_qsl_time(&input, &ComplexMatrix::zeros(4)),
            Bound::Infinite
        );
        let unit = ComplexMatrix::unit(4, 0, 0);
        assert!((lindblad_qsl_time(&input, &unit).as_f64() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn static_channel_denominator() {
        let d = kraus_qsl_denominator(&KrausSet::identity(4), &DensityMatrix::bell_phi_plus());
        assert_eq!(d.unwrap(), 0.0);
        let bare = KrausSet::from_operators("bare", vec![ComplexMatrix::identity(4)]).unwrap();
        assert!(matches!(
            kraus_qsl_denominator(&bare, &DensityMatrix::bell_phi_plus()),
            Err(Error::MissingDerivatives { .. })
        ));
    }

    #[test]
    fn phase_damping_denominators_match_closed_form() {
        let rtn = RtnParams::new(0.15, 0.4).unwrap();
        let params = PhaseDampingParams::from_rtn(&rtn).unwrap();
        let (p, pdot) = (params.p(), params.jet().rate);
        let bell = DensityMatrix::bell_phi_plus();
        let co = phase_damping_two_qubit(&params, MemoryMix::correlated());
        let un = phase_damping_two_qubit(&params, MemoryMix::uncorrelated());
        let dco = kraus_qsl_denominator(&co, &bell).unwrap();
        let dun = kraus_qsl_denominator(&un, &bell).unwrap();
        assert!((dco - pdot.abs()).abs() < 1e-14);
        assert!((dun - pdot.abs() * (1.0 + (1.0 - 2.0 * p).abs())).abs() < 1e-14);
    }

    #[test]
    fn ratio_bound_examples() {
        assert_eq!(ratio_bounds(0.0).unwrap(), (1.0, Bound::Finite(1.0)));
        assert_eq!(ratio_bounds(1.0).unwrap(), (0.5, Bound::Infinite));
        let x = 1.5 * 2f64.sqrt() / 14f64.sqrt();
        let (lo, hi) = ratio_bounds(x).unwrap();
        assert!((lo - 0.638184).abs() < 1e-6);
        assert!((hi.as_f64() - 2.309185).abs() < 1e-6);
        assert!(ratio_bounds(-0.1).is_err());
    }

    #[test]
    fn ratio_point_bound_check() {
        let p = RatioPoint {
            tau_or_a: 0.0,
            t_eval: 0.0,
            ratio: Bound::Finite(0.9),
            lower: Some(0.8),
            upper: Some(Bound::Infinite),
        };
        assert!(p.within_bounds(0.0));
        let q = RatioPoint {
            lower: Some(0.95),
            ..p
        };
        assert!(!q.within_bounds(1e-9));
    }
}
