//! Kraus-operator constructors for every channel family.
//!
//! Each family is assembled from [`WeightedOperator`]s so the time
//! derivatives follow from the weight jets. Uncorrelated two-qubit sets are
//! tensor products of single-qubit operators; correlated sets apply the same
//! error to both qubits. A memory parameter `mu` mixes the two as one set
//! `{sqrt(1 - mu) E_ij} u {sqrt(mu) E_kk}`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matops::{kron, pauli, ComplexMatrix};

use super::jet::Jet;
use super::kraus::{KrausSet, WeightedOperator};
use super::rtn::RtnParams;

const PROBABILITY_SLACK: f64 = 1e-12;

pub const LITERAL_WARNING: &str =
    "the literal amplitude variant has operators proportional to the identity; the channel is the identity map";

/// Probability that both qubits see the same error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MemoryMix(f64);

impl MemoryMix {
    pub fn new(mu: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&mu) {
            return Err(Error::param("mu", mu, "must lie in [0, 1]"));
        }
        Ok(Self(mu))
    }

    pub const fn uncorrelated() -> Self {
        Self(0.0)
    }

    pub const fn correlated() -> Self {
        Self(1.0)
    }

    pub fn mu(&self) -> f64 {
        self.0
    }
}

fn probability(name: &'static str, jet: Jet) -> Result<Jet> {
    if !(jet.value >= -PROBABILITY_SLACK && jet.value <= 1.0 + PROBABILITY_SLACK) {
        return Err(Error::param(name, jet.value, "must lie in [0, 1]"));
    }
    Ok(Jet::new(jet.value.clamp(0.0, 1.0), jet.rate, jet.accel))
}

/// Phase-damping weight `p` on `sigma_3`; `P0 = 1 - p`, `P3 = p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseDampingParams {
    p: Jet,
}

impl PhaseDampingParams {
    pub fn constant(p: f64) -> Result<Self> {
        Ok(Self {
            p: probability("p", Jet::constant(p))?,
        })
    }

    /// `p = phi(nu)`; fails where `phi` goes negative (only possible for
    /// `tau > 1/4`).
    pub fn from_rtn(params: &RtnParams) -> Result<Self> {
        Ok(Self {
            p: probability("p", params.phi_jet())?,
        })
    }

    pub fn p(&self) -> f64 {
        self.p.value
    }

    pub fn p0(&self) -> f64 {
        1.0 - self.p.value
    }

    pub fn p3(&self) -> f64 {
        self.p.value
    }

    pub fn jet(&self) -> Jet {
        self.p
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum AmplitudeVariant {
    /// Product amplitude damping with the fully correlated `|11> -> |00>` pair.
    #[default]
    Standard,
    /// The two printed operators `sqrt((1 +- phi)/2) I`, taken as the
    /// two-qubit Kraus set for both the correlated and uncorrelated channel.
    Literal,
}

impl AmplitudeVariant {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Standard => "standard",
            Self::Literal => "paper-literal",
        }
    }
}

impl FromStr for AmplitudeVariant {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "standard" => Ok(Self::Standard),
            "paper-literal" => Ok(Self::Literal),
            _ => Err(format!(
                "unknown variant `{s}` (expected standard | paper-literal)"
            )),
        }
    }
}

/// Damping probability `p` together with the decoherence value it derives
/// from (`p = 1 - phi^2`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmplitudeDampingParams {
    p: Jet,
    phi: Jet,
}

impl AmplitudeDampingParams {
    pub fn constant(p: f64) -> Result<Self> {
        let p = probability("p", Jet::constant(p))?;
        Ok(Self {
            p,
            phi: Jet::constant((1.0 - p.value).sqrt()),
        })
    }

    pub fn from_rtn(params: &RtnParams) -> Result<Self> {
        let phi = params.phi_jet();
        Ok(Self {
            p: probability("p", (phi * phi).one_minus())?,
            phi,
        })
    }

    pub fn p(&self) -> f64 {
        self.p.value
    }
}

fn rtn_weights(phi: Jet) -> Result<(Jet, Jet)> {
    if phi.value.abs() > 1.0 + PROBABILITY_SLACK {
        return Err(Error::param(
            "phi",
            phi.value,
            "decoherence function must lie in [-1, 1]",
        ));
    }
    let phi = Jet::new(phi.value.clamp(-1.0, 1.0), phi.rate, phi.accel);
    let plus = (phi + Jet::constant(1.0)).scale(0.5);
    let minus = phi.one_minus().scale(0.5);
    Ok((plus, minus))
}

/// `K1 = sqrt((1 + phi)/2) I`, `K2 = sqrt((1 - phi)/2) sigma_3`.
pub fn rtn_components(params: &RtnParams) -> Result<[WeightedOperator; 2]> {
    let (plus, minus) = rtn_weights(params.phi_jet())?;
    Ok([
        WeightedOperator::single(plus, pauli::identity()),
        WeightedOperator::single(minus, pauli::sigma_z()),
    ])
}

pub fn rtn_single_qubit(params: &RtnParams) -> Result<KrausSet> {
    Ok(KrausSet::from_weighted("rtn", &rtn_components(params)?))
}

fn product_pairs(single: &[WeightedOperator]) -> Vec<WeightedOperator> {
    single
        .iter()
        .flat_map(|a| single.iter().map(move |b| a.kron(b)))
        .collect()
}

/// `sqrt(w) U (x) U` for each single-term component `sqrt(w) U`.
fn correlated_pairs(components: &[(Jet, ComplexMatrix)]) -> Vec<WeightedOperator> {
    components
        .iter()
        .map(|(w, u)| WeightedOperator::single(*w, kron(u, u)))
        .collect()
}

fn mixed(
    uncorrelated: Vec<WeightedOperator>,
    correlated: Vec<WeightedOperator>,
    mix: MemoryMix,
) -> Vec<WeightedOperator> {
    let mu = mix.mu();
    if mu == 0.0 {
        return uncorrelated;
    }
    if mu == 1.0 {
        return correlated;
    }
    uncorrelated
        .iter()
        .map(|k| k.scale_weight(1.0 - mu))
        .chain(correlated.iter().map(|k| k.scale_weight(mu)))
        .collect()
}

/// Two-qubit RTN dephasing: products `K_i (x) K_j` mixed with the correlated
/// pair `sqrt(w_k) U_k (x) U_k`.
pub fn rtn_two_qubit(params: &RtnParams, mix: MemoryMix) -> Result<KrausSet> {
    let (plus, minus) = rtn_weights(params.phi_jet())?;
    let single = rtn_components(params)?;
    let correlated = correlated_pairs(&[(plus, pauli::identity()), (minus, pauli::sigma_z())]);
    let ops = mixed(product_pairs(&single), correlated, mix);
    Ok(KrausSet::from_weighted(
        format!("rtn-product mu={}", mix.mu()),
        &ops,
    ))
}

/// `E_ij = sqrt(P_i P_j) sigma_i (x) sigma_j` and `E_kk = sqrt(P_k) sigma_k (x) sigma_k`
/// for `i, j, k in {0, 3}`.
pub fn phase_damping_two_qubit(params: &PhaseDampingParams, mix: MemoryMix) -> KrausSet {
    let components = [
        (params.jet().one_minus(), pauli::identity()),
        (params.jet(), pauli::sigma_z()),
    ];
    let single: Vec<_> = components
        .iter()
        .map(|(w, u)| WeightedOperator::single(*w, u.clone()))
        .collect();
    let ops = mixed(product_pairs(&single), correlated_pairs(&components), mix);
    KrausSet::from_weighted(format!("phase-damping mu={}", mix.mu()), &ops)
}

pub fn amplitude_damping_two_qubit(
    params: &AmplitudeDampingParams,
    mix: MemoryMix,
    variant: AmplitudeVariant,
) -> Result<KrausSet> {
    match variant {
        AmplitudeVariant::Standard => Ok(amplitude_standard(params, mix)),
        AmplitudeVariant::Literal => amplitude_literal(params),
    }
}

fn amplitude_standard(params: &AmplitudeDampingParams, mix: MemoryMix) -> KrausSet {
    let p = params.p;
    let keep = p.one_minus();
    let one = Jet::constant(1.0);
    // basis |1>, |0>: the excited state is index 0
    let k0 = WeightedOperator::from_terms(vec![
        (keep, ComplexMatrix::unit(2, 0, 0)),
        (one, ComplexMatrix::unit(2, 1, 1)),
    ]);
    let k1 = WeightedOperator::single(p, pauli::sigma_minus());
    let uncorrelated = product_pairs(&[k0, k1]);

    let excited = ComplexMatrix::unit(4, 0, 0);
    let rest = &ComplexMatrix::identity(4) - &excited;
    let correlated = vec![
        WeightedOperator::from_terms(vec![(keep, excited), (one, rest)]),
        // |00><11|
        WeightedOperator::single(p, ComplexMatrix::unit(4, 3, 0)),
    ];
    let ops = mixed(uncorrelated, correlated, mix);
    KrausSet::from_weighted(format!("amplitude-damping mu={}", mix.mu()), &ops)
}

fn amplitude_literal(params: &AmplitudeDampingParams) -> Result<KrausSet> {
    let (plus, minus) = rtn_weights(params.phi)?;
    let id = ComplexMatrix::identity(4);
    let ops = [
        WeightedOperator::single(plus, id.clone()),
        WeightedOperator::single(minus, id),
    ];
    Ok(
        KrausSet::from_weighted("amplitude-damping paper-literal", &ops)
            .with_warning(LITERAL_WARNING),
    )
}

/// Channel families available to sweeps and validation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChannelFamily {
    RtnProduct,
    PhaseDamping,
    AmplitudeDamping(AmplitudeVariant),
}

impl ChannelFamily {
    pub fn name(&self) -> &'static str {
        match self {
            Self::RtnProduct => "rtn-product",
            Self::PhaseDamping => "phase-damping",
            Self::AmplitudeDamping(_) => "amplitude-damping",
        }
    }

    /// Two-qubit set at one `(tau, t)` point with memory `mix`.
    pub fn build(&self, rtn: &RtnParams, mix: MemoryMix) -> Result<KrausSet> {
        match self {
            Self::RtnProduct => rtn_two_qubit(rtn, mix),
            Self::PhaseDamping => Ok(phase_damping_two_qubit(
                &PhaseDampingParams::from_rtn(rtn)?,
                mix,
            )),
            Self::AmplitudeDamping(v) => {
                amplitude_damping_two_qubit(&AmplitudeDampingParams::from_rtn(rtn)?, mix, *v)
            }
        }
    }

    /// The family's error weight at `rtn`: `(1 - phi)/2` for the RTN-type
    /// sets, `phi` for phase damping, `1 - phi^2` for amplitude damping.
    pub fn probability(&self, rtn: &RtnParams) -> Result<f64> {
        let phi = rtn.phi();
        Ok(match self {
            Self::RtnProduct | Self::AmplitudeDamping(AmplitudeVariant::Literal) => {
                (1.0 - phi) / 2.0
            }
            Self::PhaseDamping => PhaseDampingParams::from_rtn(rtn)?.p(),
            Self::AmplitudeDamping(AmplitudeVariant::Standard) => {
                AmplitudeDampingParams::from_rtn(rtn)?.p()
            }
        })
    }
}

impl fmt::Display for ChannelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::AmplitudeDamping(v) => write!(f, "amplitude-damping ({})", v.name()),
            other => f.write_str(other.name()),
        }
    }
}
