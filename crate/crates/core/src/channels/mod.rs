//! Kraus-operator channel families with closed-form time derivatives.

mod families;
mod jet;
mod kraus;
mod rtn;

pub use families::{
    amplitude_damping_two_qubit, phase_damping_two_qubit, rtn_components, rtn_single_qubit,
    rtn_two_qubit, AmplitudeDampingParams, AmplitudeVariant, ChannelFamily, MemoryMix,
    PhaseDampingParams, LITERAL_WARNING,
};
pub use jet::Jet;
pub use kraus::{
    apply_channel, product_two_qubit, validate_cptp, CptpReport, KrausSet, WeightedOperator,
    CPTP_TOL, DEGENERATE_WEIGHT,
};
pub use rtn::{d2phi_dnu2, dphi_dnu, phi, RtnParams, PLOTTED_TAU_MAX};
