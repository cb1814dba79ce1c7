//! Level-dependent HARQ: one CRC over the whole multilevel payload, and the
//! whole multilevel codeword is repeated on a NACK.

use std::time::Instant;

use num_complex::Complex64;

use super::channel::awgn;
use super::link::{random_bits, zero_symbols, LevelDecoder, SimConfig};
use super::record::ThroughputRecord;
use crate::error::{Error, Result};
use crate::mlpcm::MlpcmSpec;
use crate::modem::constellation::ConstellationSpec;
use crate::modem::llr::Demapper;
use crate::modem::mapping::map_symbols;
use crate::par::map_trials;

/// Outcome of one message.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Frame {
    transmissions: usize,
    correct: bool,
    // bit l set: the decode after l + 1 transmissions failed its CRC
    failed: u64,
}

struct Worker {
    dec: LevelDecoder,
    x: Vec<Complex64>,
    y: Vec<Complex64>,
    sum: Vec<Complex64>,
    llr: Vec<f64>,
}

pub fn run_nc_d(spec: &MlpcmSpec, cfg: &SimConfig) -> Result<ThroughputRecord> {
    run_dependent(spec, cfg, false)
}

/// Chase combining of whole multilevel transmissions. Demapping the average
/// of `l` receptions with noise `N0/l` gives exactly the LLR of the full
/// reception history, for both the exact and the piecewise demapper.
pub fn run_cc_d(spec: &MlpcmSpec, cfg: &SimConfig) -> Result<ThroughputRecord> {
    run_dependent(spec, cfg, true)
}

fn run_dependent(spec: &MlpcmSpec, cfg: &SimConfig, combine: bool) -> Result<ThroughputRecord> {
    cfg.validate()?;
    let b = spec.bits_per_symbol();
    let n = spec.n;
    if spec.levels.len() != b || spec.levels.iter().any(|c| c.n() != n) {
        return Err(Error::InvalidParameter(
            "level codes do not match the constellation".into(),
        ));
    }
    let k_total = spec.total_k();
    if k_total < cfg.crc.len() {
        return Err(Error::CrcLongerThanMessage {
            k: k_total,
            crc: cfg.crc.len(),
        });
    }
    let data_len = k_total - cfg.crc.len();
    // last level carrying payload bits: its list is pruned by the CRC
    let crc_level = spec.levels.iter().rposition(|c| c.k() > 0);
    let demapper = Demapper::new(
        &ConstellationSpec::at_snr_db(spec.modulation, cfg.snr_db),
        cfg.llr_mode,
    );
    let start = Instant::now();

    let frames = map_trials(
        cfg.exec,
        cfg.frames,
        || -> Result<Worker> {
            Ok(Worker {
                dec: LevelDecoder::new(n, cfg.decoder, cfg.kernel)?,
                x: zero_symbols(n),
                y: zero_symbols(n),
                sum: zero_symbols(n),
                llr: vec![0.0; n],
            })
        },
        |w, i| -> Result<Frame> {
            let w = w.as_mut().map_err(|e| e.clone())?;
            let (session, id) = cfg.session_of(i);
            let data = random_bits(&mut cfg.data_rng(session, 0, id), data_len);
            let payload = cfg.crc.append(&data);
            let mut codewords = Vec::with_capacity(b);
            let mut off = 0;
            for code in &spec.levels {
                codewords.push(code.encode_message(&payload[off..off + code.k()])?);
                off += code.k();
            }
            let refs: Vec<&[u8]> = codewords.iter().map(|c| c.as_slice()).collect();
            map_symbols(spec.modulation, &refs, &mut w.x);
            w.sum.iter_mut().for_each(|s| *s = Complex64::new(0.0, 0.0));
            let mut failed = 0u64;

            for t in 1..=cfg.max_transmissions {
                awgn(
                    &w.x,
                    demapper.n0,
                    &mut cfg.noise_rng(session, id, t),
                    &mut w.y,
                );
                let dm = if combine {
                    for (s, &y) in w.sum.iter_mut().zip(&w.y) {
                        *s += y;
                    }
                    let inv = 1.0 / t as f64;
                    for (y, &s) in w.y.iter_mut().zip(&w.sum) {
                        *y = s * inv;
                    }
                    demapper.combined(t)
                } else {
                    demapper
                };
                let mut decided: Vec<Vec<u8>> = Vec::with_capacity(b);
                let mut estimate: Vec<u8> = Vec::with_capacity(k_total);
                let mut accepted = false;
                for (level, code) in spec.levels.iter().enumerate() {
                    let refs: Vec<&[u8]> = decided.iter().map(|c| c.as_slice()).collect();
                    dm.level_llrs(&w.y, level, &refs, &mut w.llr);
                    let d = if Some(level) == crc_level {
                        let prefix = estimate.clone();
                        let crc = cfg.crc;
                        w.dec.decode(code, &w.llr, |m| {
                            let mut full = prefix.clone();
                            full.extend_from_slice(m);
                            crc.check(&full)
                        })?
                    } else {
                        w.dec.decode(code, &w.llr, |_| true)?
                    };
                    estimate.extend_from_slice(&d.message);
                    if Some(level) == crc_level {
                        accepted = d.accepted;
                    }
                    decided.push(d.codeword);
                }
                if crc_level.is_none() {
                    accepted = cfg.crc.check(&estimate);
                }
                if !accepted {
                    failed |= 1 << (t - 1);
                } else if t >= cfg.min_transmissions {
                    return Ok(Frame {
                        transmissions: t,
                        correct: estimate == payload,
                        failed,
                    });
                }
            }
            Err(Error::RetransmissionCap {
                level: 0,
                cap: cfg.max_transmissions,
            })
        },
    );

    let mut rec = ThroughputRecord::new(b, n);
    for f in frames {
        let f = f?;
        rec.transmissions += (f.transmissions * b) as u64;
        rec.channel_uses += (f.transmissions * n) as u64;
        for l in 0..f.transmissions {
            rec.attempt(l, f.failed >> l & 1 == 1);
        }
        rec.acknowledge(data_len as u64, f.transmissions as u64, f.correct);
        for l in 0..b {
            rec.acknowledge_level(l);
        }
    }
    rec.wall.0 = start.elapsed();
    Ok(rec)
}
