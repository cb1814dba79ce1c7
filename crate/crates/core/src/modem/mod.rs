pub mod avg;
pub mod constellation;
pub mod llr;
pub mod mapping;

pub use avg::{avg_pam_llr, avg_pam_llrs, equivalent_snr_db, level_mean_llrs, qam_avg_llrs};
pub use constellation::{db_to_linear, ConstellationSpec, Modulation};
pub use llr::{
    boxplus, cc_combine_dependent, cc_combine_independent, exact_msd_llr, level_llr, pam_exact_llr,
    pam_piecewise_llr, qam_level_llrs, Demapper, LevelContext, LevelLlrs, LlrMode,
};
pub use mapping::{map_symbols, pam_map, precode, qam_map, qam_points, unprecode, verify_spm};
