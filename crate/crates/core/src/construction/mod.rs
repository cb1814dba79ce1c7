pub mod design;
pub mod ga;
pub mod reliability;
pub mod sim_design;

pub use design::{
    cc_binary_design, ir_binary_design, is_unimodal, nc_binary_design, retransmission_design,
    sort_channels, DesignResult, FerCurve, IrDesign,
};
pub use ga::{
    ga_ber, ga_ber_from_channel_means, ga_means, ln_phi, ln_q, phi, phi_inv, phi_inv_ln, q_function,
};
pub use reliability::ReliabilityVector;
pub use sim_design::{design_from_log, sim_based_design, simulate_first_errors, FirstErrorLog};
