//! Shared pieces of the multistage link: configuration, level decoders and
//! payload handling.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::modem::llr::LlrMode;
use crate::par::Execution;
use crate::polar::{CheckNode, Crc, PolarCodeSpec, ScDecoder, SclDecoder};
use crate::rng::{substream, Purpose, TrialRng};

pub const DEFAULT_MAX_TRANSMISSIONS: usize = 64;
pub const DEFAULT_QUEUE_CAP: usize = 1024;
/// Level-independent runs split their frames over this many independent
/// sessions; fixed so results do not depend on the thread count.
pub const DEFAULT_SESSIONS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecoderKind {
    Sc,
    Scl(usize),
}

impl DecoderKind {
    pub fn name(self) -> &'static str {
        match self {
            DecoderKind::Sc => "SCD",
            DecoderKind::Scl(_) => "SCLD",
        }
    }

    pub fn list_size(self) -> usize {
        match self {
            DecoderKind::Sc => 1,
            DecoderKind::Scl(l) => l,
        }
    }
}

/// Parameters of one simulation run.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub snr_db: f64,
    /// Messages (level-dependent) or level-1 codewords (level-independent)
    /// to complete.
    pub frames: usize,
    pub decoder: DecoderKind,
    pub kernel: CheckNode,
    pub llr_mode: LlrMode,
    pub crc: Crc,
    pub seed: u64,
    pub exec: Execution,
    pub max_transmissions: usize,
    pub queue_cap: usize,
    pub sessions: usize,
    /// The receiver withholds its ACK until at least this many transmissions
    /// have been combined. 1 is normal operation; larger values force
    /// retransmissions for diagnostics.
    pub min_transmissions: usize,
}

impl SimConfig {
    pub fn new(snr_db: f64, frames: usize) -> Self {
        Self {
            snr_db,
            frames,
            decoder: DecoderKind::Sc,
            kernel: CheckNode::Exact,
            llr_mode: LlrMode::default(),
            crc: Crc::ccitt16(),
            seed: 0,
            exec: Execution::default(),
            max_transmissions: DEFAULT_MAX_TRANSMISSIONS,
            queue_cap: DEFAULT_QUEUE_CAP,
            sessions: DEFAULT_SESSIONS,
            min_transmissions: 1,
        }
    }

    pub fn decoder(mut self, d: DecoderKind) -> Self {
        self.decoder = d;
        self
    }

    pub fn seed(mut self, s: u64) -> Self {
        self.seed = s;
        self
    }

    pub fn exec(mut self, e: Execution) -> Self {
        self.exec = e;
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if let DecoderKind::Scl(0) = self.decoder {
            return Err(Error::ZeroListSize);
        }
        if self.max_transmissions == 0
            || self.max_transmissions > 64
            || self.sessions == 0
            || self.min_transmissions == 0
        {
            return Err(Error::InvalidParameter(
                "max_transmissions must be in 1..=64; sessions and min_transmissions positive"
                    .into(),
            ));
        }
        if self.snr_db.is_nan() {
            return Err(Error::Domain {
                name: "snr_db",
                value: self.snr_db,
                domain: "not NaN",
            });
        }
        Ok(())
    }

    /// Session and index within it of global frame `i`.
    pub(crate) fn session_of(&self, i: usize) -> (u64, u64) {
        ((i % self.sessions) as u64, (i / self.sessions) as u64)
    }

    pub(crate) fn data_rng(&self, session: u64, level: usize, id: u64) -> TrialRng {
        substream(self.seed, Purpose::Data, &[session, level as u64, id])
    }

    pub(crate) fn noise_rng(&self, session: u64, id: u64, attempt: usize) -> TrialRng {
        substream(self.seed, Purpose::Noise, &[session, id, attempt as u64])
    }
}

pub(crate) fn random_bits(rng: &mut TrialRng, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.random::<bool>() as u8).collect()
}

/// One decoded level: message bits, re-encoded codeword, and whether the
/// acceptance test (CRC) passed.
pub(crate) struct LevelDecision {
    pub message: Vec<u8>,
    pub codeword: Vec<u8>,
    pub accepted: bool,
}

pub(crate) enum LevelDecoder {
    Sc(ScDecoder),
    Scl(SclDecoder),
}

impl LevelDecoder {
    pub fn new(n: usize, kind: DecoderKind, kernel: CheckNode) -> Result<Self> {
        Ok(match kind {
            DecoderKind::Sc => LevelDecoder::Sc(ScDecoder::with_kernel(n, kernel)?),
            DecoderKind::Scl(l) => LevelDecoder::Scl(SclDecoder::with_kernel(n, l, kernel)?),
        })
    }

    /// SC checks `accept` on its single estimate; SCL returns the best
    /// surviving path that `accept`s, else the best path.
    pub fn decode<F>(
        &mut self,
        code: &PolarCodeSpec,
        llr: &[f64],
        mut accept: F,
    ) -> Result<LevelDecision>
    where
        F: FnMut(&[u8]) -> bool,
    {
        match self {
            LevelDecoder::Sc(d) => {
                let (u, cw) = d.run(code, llr)?;
                let codeword = cw.to_vec();
                let message = code.extract(u);
                let accepted = accept(&message);
                Ok(LevelDecision {
                    message,
                    codeword,
                    accepted,
                })
            }
            LevelDecoder::Scl(d) => {
                if let Some(c) = d.decode_with(code, llr, &mut accept)? {
                    return Ok(LevelDecision {
                        message: c.message,
                        codeword: c.codeword,
                        accepted: true,
                    });
                }
                let c = d.candidate(code, d.ranked()[0]);
                Ok(LevelDecision {
                    message: c.message,
                    codeword: c.codeword,
                    accepted: false,
                })
            }
        }
    }
}

pub(crate) fn zero_symbols(n: usize) -> Vec<Complex64> {
    vec![Complex64::new(0.0, 0.0); n]
}
