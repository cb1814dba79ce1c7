//! HARQ link simulation over AWGN with multistage decoding.

pub mod capacity;
pub mod channel;
pub mod dependent;
pub mod independent;
pub mod link;
pub mod record;

pub use capacity::{capacity, pam_capacity};
pub use channel::awgn;
pub use dependent::{run_cc_d, run_nc_d};
pub use independent::{
    run_cc_i, run_nc_i, DecodeEvent, LevelBackend, Scheduler, Sent, SlotTrace, Verdict,
};
pub use link::{DecoderKind, SimConfig};
pub use record::{ThroughputRecord, WallClock};

use crate::error::Result;
use crate::mlpcm::{MlpcmSpec, Protocol};

/// Runs the protocol a code was designed for.
pub fn run(spec: &MlpcmSpec, protocol: Protocol, cfg: &SimConfig) -> Result<ThroughputRecord> {
    match protocol {
        Protocol::NcD => run_nc_d(spec, cfg),
        Protocol::CcD => run_cc_d(spec, cfg),
        Protocol::NcI => run_nc_i(spec, cfg),
        Protocol::CcI => run_cc_i(spec, cfg),
        Protocol::Ir => Err(crate::Error::InvalidParameter(
            "IR is design-only; it has no simulator".into(),
        )),
    }
}
