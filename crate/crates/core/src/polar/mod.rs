//! Binary polar codes: encoding, SC, CRC-aided SC list and genie-aided SC.

pub mod code;
pub mod crc;
pub mod kernel;
pub mod sc;
pub mod scl;

pub use code::{encode, polar_transform_in_place, PolarCodeSpec};
pub use crc::{crc_append, crc_check, Crc};
pub use kernel::{CheckNode, LLR_CLIP};
pub use sc::{genie_scd_decode, scd_decode, ScDecoder};
pub use scl::{scld_decode, ListCandidate, SclDecoder};
