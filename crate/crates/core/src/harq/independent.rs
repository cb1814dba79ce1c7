//! Level-independent HARQ: every level has its own CRC and retransmits on its
//! own, while fresh codewords keep flowing on the other levels.
//!
//! Multistage demapping still needs the upper-level bits of every symbol, so
//! a level-`n` reception can only be decoded once the level-`n−1` codeword
//! sent in the same slot has been acknowledged. Until then the reception
//! waits in a per-level queue.

use std::collections::{BTreeMap, HashMap, VecDeque};
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
use crate::polar::PolarCodeSpec;

/// A codeword transmission within a slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sent {
    pub level: usize,
    pub id: u64,
    /// 1 for the first transmission.
    pub attempt: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Ack { data_bits: u64, correct: bool },
    Nack,
}

/// Physical layer behind the scheduler.
pub trait LevelBackend {
    fn levels(&self) -> usize;
    /// Puts one slot on the air; `sent[n]` is what level `n` carries.
    fn transmit(&mut self, slot: u64, sent: &[Sent]) -> Result<()>;
    /// Decodes the latest transmission (made in `slot`) of a codeword. The
    /// scheduler guarantees every upper-level codeword of every slot this
    /// codeword occupied is already acknowledged.
    fn decode(&mut self, level: usize, id: u64, attempt: usize, slot: u64) -> Result<Verdict>;
    /// Every level of `slot` is resolved.
    fn release_slot(&mut self, slot: u64);
}

/// One decode performed by the scheduler.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecodeEvent {
    pub sent: Sent,
    pub slot: u64,
    pub verdict: Verdict,
}

/// What happened in one slot: the transmissions, then the decodes that
/// became possible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotTrace {
    pub sent: Vec<Sent>,
    pub decoded: Vec<DecodeEvent>,
}

#[derive(Debug, Clone, Copy)]
struct Waiting {
    id: u64,
    attempt: usize,
    slot: u64,
}

/// Schedules transmissions and decodes of a level-independent session.
#[derive(Debug)]
pub struct Scheduler {
    levels: usize,
    max_transmissions: usize,
    queue_cap: usize,
    next_id: Vec<u64>,
    retx: Vec<VecDeque<(u64, usize)>>,
    waiting: Vec<Vec<Waiting>>,
    slots_of: Vec<HashMap<u64, Vec<u64>>>,
    resolved: BTreeMap<u64, Vec<bool>>,
    slot: u64,
    trace: Option<Vec<SlotTrace>>,
}

impl Scheduler {
    pub fn new(levels: usize, max_transmissions: usize, queue_cap: usize) -> Self {
        Self {
            levels,
            max_transmissions,
            queue_cap,
            next_id: vec![0; levels],
            retx: vec![VecDeque::new(); levels],
            waiting: vec![Vec::new(); levels],
            slots_of: vec![HashMap::new(); levels],
            resolved: BTreeMap::new(),
            slot: 0,
            trace: None,
        }
    }

    pub fn with_trace(mut self) -> Self {
        self.trace = Some(Vec::new());
        self
    }

    pub fn trace(&self) -> &[SlotTrace] {
        self.trace.as_deref().unwrap_or(&[])
    }

    pub fn slots(&self) -> u64 {
        self.slot
    }

    /// Runs one slot; acknowledged codewords are reported to `on_ack`.
    pub fn step<B: LevelBackend>(
        &mut self,
        backend: &mut B,
        mut on_ack: impl FnMut(usize, u64, usize, u64, bool),
        rec: &mut ThroughputRecord,
    ) -> Result<()> {
        let s = self.slot;
        self.slot += 1;
        let mut sent = Vec::with_capacity(self.levels);
        for n in 0..self.levels {
            let (id, attempt) = match self.retx[n].pop_front() {
                Some((id, a)) => (id, a + 1),
                None => {
                    let id = self.next_id[n];
                    self.next_id[n] += 1;
                    (id, 1)
                }
            };
            if attempt > self.max_transmissions {
                return Err(Error::RetransmissionCap {
                    level: n,
                    cap: self.max_transmissions,
                });
            }
            sent.push(Sent {
                level: n,
                id,
                attempt,
            });
            self.waiting[n].push(Waiting {
                id,
                attempt,
                slot: s,
            });
            self.slots_of[n].entry(id).or_default().push(s);
            if self.waiting[n].len() + self.retx[n].len() > self.queue_cap {
                return Err(Error::QueueOverflow {
                    level: n,
                    cap: self.queue_cap,
                });
            }
        }
        backend.transmit(s, &sent)?;
        self.resolved.insert(s, vec![false; self.levels]);
        let mut decoded = Vec::new();

        // an acknowledgement on level n can only unblock levels above n, so
        // one pass in level order reaches a fixed point
        for n in 0..self.levels {
            let mut i = 0;
            while i < self.waiting[n].len() {
                let w = self.waiting[n][i];
                let ready = n == 0 || self.resolved[&w.slot][..n].iter().all(|&r| r);
                if !ready {
                    i += 1;
                    continue;
                }
                self.waiting[n].remove(i);
                let verdict = backend.decode(n, w.id, w.attempt, w.slot)?;
                let failed = verdict == Verdict::Nack;
                rec.attempt(w.attempt - 1, failed);
                match verdict {
                    Verdict::Ack { data_bits, correct } => {
                        for slot in self.slots_of[n].remove(&w.id).unwrap_or_default() {
                            if let Some(r) = self.resolved.get_mut(&slot) {
                                r[n] = true;
                            }
                        }
                        on_ack(n, w.id, w.attempt, data_bits, correct);
                    }
                    Verdict::Nack => self.retx[n].push_back((w.id, w.attempt)),
                }
                decoded.push(DecodeEvent {
                    sent: Sent {
                        level: n,
                        id: w.id,
                        attempt: w.attempt,
                    },
                    slot: w.slot,
                    verdict,
                });
            }
        }
        let done: Vec<u64> = self
            .resolved
            .iter()
            .filter(|(_, r)| r.iter().all(|&x| x))
            .map(|(&k, _)| k)
            .collect();
        for slot in done {
            self.resolved.remove(&slot);
            backend.release_slot(slot);
        }
        if let Some(t) = self.trace.as_mut() {
            t.push(SlotTrace { sent, decoded });
        }
        Ok(())
    }

    /// Runs slots until `target` level-1 codewords are acknowledged.
    pub fn run<B: LevelBackend>(
        &mut self,
        backend: &mut B,
        target: u64,
        block_length: usize,
        bits_per_symbol: usize,
    ) -> Result<ThroughputRecord> {
        let mut rec = ThroughputRecord::new(bits_per_symbol, block_length);
        rec.per_level_codewords = bits_per_symbol > 1;
        let mut first_level_done = 0u64;
        while first_level_done < target {
            let mut acks = Vec::new();
            self.step(
                backend,
                |level, _, attempt, bits, correct| acks.push((level, attempt, bits, correct)),
                &mut rec,
            )?;
            for (level, attempt, bits, correct) in acks {
                rec.acknowledge(bits, attempt as u64, correct);
                rec.acknowledge_level(level);
                first_level_done += u64::from(level == 0);
            }
            rec.channel_uses += block_length as u64;
            rec.transmissions += self.levels as u64;
        }
        Ok(rec)
    }
}

struct Live {
    payload: Vec<u8>,
    codeword: Vec<u8>,
    acc: Vec<f64>,
    slots: Vec<u64>,
}

struct SlotState {
    y: Vec<Complex64>,
    decided: Vec<Option<std::rc::Rc<Vec<u8>>>>,
}

/// Monte-Carlo backend: per-level polar codes over the multistage demapper.
struct MsdBackend<'a> {
    spec: &'a MlpcmSpec,
    cfg: &'a SimConfig,
    codes: Vec<PolarCodeSpec>,
    combine: bool,
    session: u64,
    demapper: Demapper,
    dec: LevelDecoder,
    live: Vec<HashMap<u64, Live>>,
    slots: HashMap<u64, SlotState>,
    x: Vec<Complex64>,
    llr: Vec<f64>,
}

impl MsdBackend<'_> {
    fn data_len(&self, level: usize) -> usize {
        self.codes[level].k().saturating_sub(self.cfg.crc.len())
    }
}

impl LevelBackend for MsdBackend<'_> {
    fn levels(&self) -> usize {
        self.codes.len()
    }

    fn transmit(&mut self, slot: u64, sent: &[Sent]) -> Result<()> {
        let n = self.spec.n;
        for s in sent {
            let code = &self.codes[s.level];
            let k = code.k();
            let data_len = self.data_len(s.level);
            let cfg = self.cfg;
            let session = self.session;
            let entry = self.live[s.level].entry(s.id);
            let live = match entry {
                std::collections::hash_map::Entry::Occupied(o) => o.into_mut(),
                std::collections::hash_map::Entry::Vacant(v) => {
                    let payload = if k == 0 {
                        Vec::new()
                    } else {
                        let data = random_bits(&mut cfg.data_rng(session, s.level, s.id), data_len);
                        cfg.crc.append(&data)
                    };
                    let codeword = code.encode_message(&payload)?;
                    v.insert(Live {
                        payload,
                        codeword,
                        acc: vec![0.0; n],
                        slots: Vec::new(),
                    })
                }
            };
            live.slots.push(slot);
        }
        let refs: Vec<&[u8]> = sent
            .iter()
            .map(|s| self.live[s.level][&s.id].codeword.as_slice())
            .collect();
        map_symbols(self.spec.modulation, &refs, &mut self.x);
        let mut y = zero_symbols(n);
        let lead = sent[0];
        awgn(
            &self.x,
            self.demapper.n0,
            &mut self.cfg.noise_rng(self.session, lead.id, lead.attempt),
            &mut y,
        );
        self.slots.insert(
            slot,
            SlotState {
                y,
                decided: vec![None; sent.len()],
            },
        );
        Ok(())
    }

    fn decode(&mut self, level: usize, id: u64, attempt: usize, slot: u64) -> Result<Verdict> {
        let code = &self.codes[level];
        let live = self.live[level].get_mut(&id).ok_or_else(|| {
            Error::ProtocolViolation(format!("unknown codeword {id} on level {level}"))
        })?;
        let st = &self.slots[&slot];
        let decided: Vec<&[u8]> = st.decided[..level]
            .iter()
            .map(|d| d.as_deref().map(|v| v.as_slice()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| {
                Error::ProtocolViolation(format!("level {level} decoded before the levels above"))
            })?;
        let (verdict, codeword) = if code.k() == 0 {
            (
                Verdict::Ack {
                    data_bits: 0,
                    correct: true,
                },
                live.codeword.clone(),
            )
        } else {
            self.demapper
                .level_llrs(&st.y, level, &decided, &mut self.llr);
            let llr = if self.combine {
                for (a, &l) in live.acc.iter_mut().zip(&self.llr) {
                    *a += l;
                }
                &live.acc
            } else {
                &self.llr
            };
            let crc = self.cfg.crc;
            let d = self.dec.decode(code, llr, |m| crc.check(m))?;
            if !d.accepted || attempt < self.cfg.min_transmissions {
                return Ok(Verdict::Nack);
            }
            (
                Verdict::Ack {
                    data_bits: (code.k() - crc.len()) as u64,
                    correct: d.message == live.payload,
                },
                d.codeword,
            )
        };
        let live = self.live[level].remove(&id).unwrap();
        let cw = std::rc::Rc::new(codeword);
        for s in live.slots {
            if let Some(st) = self.slots.get_mut(&s) {
                st.decided[level] = Some(cw.clone());
            }
        }
        Ok(verdict)
    }

    fn release_slot(&mut self, slot: u64) {
        self.slots.remove(&slot);
    }
}

pub fn run_nc_i(spec: &MlpcmSpec, cfg: &SimConfig) -> Result<ThroughputRecord> {
    run_independent(spec, cfg, false)
}

/// Chase combining per level: the LLRs of every reception of a codeword are
/// summed, each computed with the upper-level decisions of its own slot.
pub fn run_cc_i(spec: &MlpcmSpec, cfg: &SimConfig) -> Result<ThroughputRecord> {
    run_independent(spec, cfg, true)
}

fn run_independent(spec: &MlpcmSpec, cfg: &SimConfig, combine: bool) -> Result<ThroughputRecord> {
    cfg.validate()?;
    let b = spec.bits_per_symbol();
    let n = spec.n;
    if spec.levels.len() != b || spec.levels.iter().any(|c| c.n() != n) {
        return Err(Error::InvalidParameter(
            "level codes do not match the constellation".into(),
        ));
    }
    // a level too short to hold its CRC carries no data and is frozen
    let codes = spec
        .levels
        .iter()
        .map(|c| {
            if c.k() <= cfg.crc.len() {
                c.with_k(0)
            } else {
                Ok(c.clone())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let demapper = Demapper::new(
        &ConstellationSpec::at_snr_db(spec.modulation, cfg.snr_db),
        cfg.llr_mode,
    );
    let start = Instant::now();
    let sessions = cfg.sessions.min(cfg.frames.max(1));
    let results = map_trials(
        cfg.exec,
        sessions,
        || (),
        |_, s| -> Result<ThroughputRecord> {
            let target =
                (cfg.frames / cfg.sessions + usize::from(s < cfg.frames % cfg.sessions)) as u64;
            let mut backend = MsdBackend {
                spec,
                cfg,
                codes: codes.clone(),
                combine,
                session: s as u64,
                demapper,
                dec: LevelDecoder::new(n, cfg.decoder, cfg.kernel)?,
                live: (0..b).map(|_| HashMap::new()).collect(),
                slots: HashMap::new(),
                x: zero_symbols(n),
                llr: vec![0.0; n],
            };
            Scheduler::new(b, cfg.max_transmissions, cfg.queue_cap).run(&mut backend, target, n, b)
        },
    );
    let mut rec = ThroughputRecord::new(b, n);
    rec.per_level_codewords = b > 1;
    for r in results {
        rec.merge(&r?);
    }
    rec.wall.0 = start.elapsed();
    Ok(rec)
}
