use std::collections::{HashMap, HashSet};

use num_complex::Complex64;
use polarthru::harq::*;
use polarthru::mlpcm::{design, design_nc_d_qam, MlpcmSpec, Protocol};
use polarthru::modem::{ConstellationSpec, Modulation};
use polarthru::polar::{Crc, PolarCodeSpec};
use polarthru::rng::{substream, Purpose};
use polarthru::{Error, Execution};
use proptest::prelude::*;

#[test]
fn awgn_without_noise_is_identity() {
    let x: Vec<Complex64> = (0..8).map(|i| Complex64::new(i as f64, -(i as f64))).collect();
    let mut y = vec![Complex64::default(); 8];
    awgn(&x, 0.0, &mut substream(1, Purpose::Noise, &[0]), &mut y);
    assert_eq!(x, y);
}

#[test]
fn awgn_variance_per_dimension() {
    let n = 1_000_000;
    let n0 = 0.8;
    let x = vec![Complex64::default(); n];
    let mut y = vec![Complex64::default(); n];
    awgn(&x, n0, &mut substream(2, Purpose::Noise, &[0]), &mut y);
    let vr = y.iter().map(|v| v.re * v.re).sum::<f64>() / n as f64;
    let vi = y.iter().map(|v| v.im * v.im).sum::<f64>() / n as f64;
    assert!((vr / (n0 / 2.0) - 1.0).abs() < 0.01, "{vr}");
    assert!((vi / (n0 / 2.0) - 1.0).abs() < 0.01, "{vi}");
}

#[test]
fn awgn_snr_bookkeeping() {
    let spec = ConstellationSpec::at_snr_db(Modulation::Qam(4), 7.0);
    let pts = polarthru::modem::qam_points(4).unwrap();
    let n = 400_000;
    let x: Vec<Complex64> = (0..n).map(|i| pts[i % 16].1).collect();
    let mut y = vec![Complex64::default(); n];
    awgn(&x, spec.n0, &mut substream(3, Purpose::Noise, &[0]), &mut y);
    let es = x.iter().map(|v| v.norm_sqr()).sum::<f64>() / n as f64;
    let ew = x.iter().zip(&y).map(|(a, b)| (b - a).norm_sqr()).sum::<f64>() / n as f64;
    assert!((es / ew / 10f64.powf(0.7) - 1.0).abs() < 0.01);
}

fn small_qam(snr: f64) -> MlpcmSpec {
    design_nc_d_qam(snr, 64, 4).unwrap()
}

#[test]
fn noiseless_level_dependent_delivers_every_frame_once() {
    let spec = small_qam(12.0);
    let k = spec.total_k();
    assert!(k > 16);
    for run in [run_nc_d, run_cc_d] {
        let cfg = SimConfig::new(f64::INFINITY, 50).seed(4);
        let r = run(&spec, &cfg).unwrap();
        assert_eq!(r.retx_mean(), 1.0);
        assert_eq!(r.throughput_per_level(), (k - 16) as f64 / (64.0 * 4.0));
        assert_eq!(r.undetected_errors, 0);
        assert!(r.audit());
    }
}

#[test]
fn noiseless_level_independent_delivers_every_level() {
    let spec = design(Modulation::Qam(4), Protocol::NcI, 12.0, 64).unwrap();
    let data: usize = spec.level_k().iter().map(|&k| if k > 16 { k - 16 } else { 0 }).sum();
    let cfg = SimConfig::new(f64::INFINITY, 40).seed(5);
    let r = run_nc_i(&spec, &cfg).unwrap();
    assert_eq!(r.throughput(), data as f64 / 64.0);
    assert_eq!(r.retx_mean(), 1.0);
    assert!(r.audit());
}

#[test]
fn bpsk_chase_combining_is_the_same_with_or_without_levels() {
    let code = polarthru::construction::cc_binary_design(-1.0, 128).unwrap().code().unwrap();
    let spec = MlpcmSpec::binary(code, -1.0, Protocol::CcD);
    let mut cfg = SimConfig::new(-1.0, 600).seed(6);
    cfg.sessions = 4;
    let d = run_cc_d(&spec, &cfg).unwrap();
    let i = run_cc_i(&spec, &cfg).unwrap();
    assert!(d.retx_mean() > 1.0);
    assert_eq!(d, i);
}

#[test]
fn deterministic_and_thread_independent() {
    let spec = small_qam(6.0);
    let cfg = SimConfig::new(6.0, 300).seed(7);
    let a = run_nc_d(&spec, &cfg).unwrap();
    let b = run_nc_d(&spec, &cfg.clone().exec(Execution::Sequential)).unwrap();
    assert_eq!(a, b);
    let ispec = design(Modulation::Qam(4), Protocol::CcI, 6.0, 64).unwrap();
    let a = run_cc_i(&ispec, &cfg).unwrap();
    let b = run_cc_i(&ispec, &cfg.clone().exec(Execution::Sequential)).unwrap();
    assert_eq!(a, b);
    assert!(a.audit());
    let c = run_cc_i(&ispec, &cfg.clone().seed(8)).unwrap();
    assert_ne!(a, c);
}

#[test]
fn first_transmission_matches_between_nc_and_cc() {
    let spec = small_qam(4.0);
    let cfg = SimConfig::new(4.0, 400).seed(9);
    let nc = run_nc_d(&spec, &cfg).unwrap();
    let cc = run_cc_d(&spec, &cfg).unwrap();
    assert_eq!(nc.attempts[0], cc.attempts[0]);
    assert_eq!(nc.failures[0], cc.failures[0]);
    assert!(nc.failures[0] > 0);
}

#[test]
fn combining_lowers_the_fer_of_forced_retransmissions() {
    let spec = small_qam(2.0);
    let mut cfg = SimConfig::new(2.0, 2000).seed(10);
    cfg.min_transmissions = 2;
    let cc = run_cc_d(&spec, &cfg).unwrap();
    assert_eq!(cc.attempts[0], cc.attempts[1]);
    assert!(cc.fer(0) > 0.05, "{}", cc.fer(0));
    assert!(cc.fer(1) < 0.5 * cc.fer(0), "{} vs {}", cc.fer(1), cc.fer(0));
    // without combining the second attempt is just another single shot
    let nc = run_nc_d(&spec, &cfg).unwrap();
    assert!((nc.fer(1) - nc.fer(0)).abs() < 0.05);
}

#[test]
fn throughput_matches_fer_bookkeeping() {
    let spec = small_qam(5.0);
    let cfg = SimConfig::new(5.0, 2000).seed(11);
    let r = run_nc_d(&spec, &cfg).unwrap();
    let p: f64 = r.failures.iter().sum::<u64>() as f64 / r.attempts.iter().sum::<u64>() as f64;
    let predicted = (spec.total_k() - 16) as f64 / 64.0 * (1.0 - p);
    assert!((r.throughput() - predicted).abs() <= 3.0 * r.std_error(), "{} {}", r.throughput(), predicted);
}

#[test]
fn configuration_errors() {
    let spec = small_qam(6.0);
    let mut cfg = SimConfig::new(6.0, 10).decoder(DecoderKind::Scl(0));
    assert_eq!(run_nc_d(&spec, &cfg).unwrap_err(), Error::ZeroListSize);
    cfg.decoder = DecoderKind::Sc;
    let short = spec.with_total_k(10).unwrap();
    assert!(matches!(run_nc_d(&short, &cfg), Err(Error::CrcLongerThanMessage { .. })));
    cfg.max_transmissions = 65;
    assert!(run_nc_d(&spec, &cfg).is_err());
    let mut cfg = SimConfig::new(-20.0, 4);
    cfg.max_transmissions = 3;
    assert_eq!(
        run_nc_d(&spec, &cfg).unwrap_err(),
        Error::RetransmissionCap { level: 0, cap: 3 }
    );
    let bpsk = MlpcmSpec::binary(PolarCodeSpec::new(4, vec![3, 2, 1, 0], 2).unwrap(), 0.0, Protocol::NcD);
    assert!(run_nc_d(&bpsk, &SimConfig::new(0.0, 1)).is_err());
    let mut tiny = SimConfig::new(f64::INFINITY, 1);
    tiny.crc = Crc::none();
    assert_eq!(run_nc_d(&bpsk, &tiny).unwrap().data_bits_delivered, 2);
}

/// Scheduler backend driven by a fixed verdict table; checks that no level
/// is decoded before the levels above it in every slot it occupied.
struct Scripted {
    levels: usize,
    verdicts: HashMap<(usize, u64, usize), Verdict>,
    slot_ids: HashMap<u64, Vec<u64>>,
    slots_of: HashMap<(usize, u64), Vec<u64>>,
    acked: HashSet<(usize, u64)>,
    released: Vec<u64>,
}

impl Scripted {
    fn new(levels: usize, nacks: &[(usize, u64, usize)]) -> Self {
        Self {
            levels,
            verdicts: nacks.iter().map(|&k| (k, Verdict::Nack)).collect(),
            slot_ids: HashMap::new(),
            slots_of: HashMap::new(),
            acked: HashSet::new(),
            released: Vec::new(),
        }
    }
}

impl LevelBackend for Scripted {
    fn levels(&self) -> usize {
        self.levels
    }

    fn transmit(&mut self, slot: u64, sent: &[Sent]) -> polarthru::Result<()> {
        assert_eq!(sent.len(), self.levels);
        self.slot_ids.insert(slot, sent.iter().map(|s| s.id).collect());
        for s in sent {
            self.slots_of.entry((s.level, s.id)).or_default().push(slot);
        }
        Ok(())
    }

    fn decode(&mut self, level: usize, id: u64, attempt: usize, _slot: u64) -> polarthru::Result<Verdict> {
        for s in &self.slots_of[&(level, id)] {
            for upper in 0..level {
                let uid = self.slot_ids[s][upper];
                assert!(self.acked.contains(&(upper, uid)), "level {level} decoded before level {upper}");
            }
        }
        let v = self.verdicts.get(&(level, id, attempt)).copied().unwrap_or(Verdict::Ack {
            data_bits: 10,
            correct: true,
        });
        if v != Verdict::Nack {
            self.acked.insert((level, id));
        }
        Ok(v)
    }

    fn release_slot(&mut self, slot: u64) {
        self.released.push(slot);
    }
}

fn sent(level: usize, id: u64, attempt: usize) -> Sent {
    Sent { level, id, attempt }
}

#[test]
fn two_level_schedule_with_one_failure() {
    // A = level 1, B = level 2; A₁ fails on its first transmission
    let mut be = Scripted::new(2, &[(0, 0, 1)]);
    let mut sch = Scheduler::new(2, 64, 1024).with_trace();
    let mut rec = ThroughputRecord::new(2, 8);
    for _ in 0..3 {
        sch.step(&mut be, |_, _, _, _, _| {}, &mut rec).unwrap();
    }
    let t = sch.trace();
    assert_eq!(t[0].sent, vec![sent(0, 0, 1), sent(1, 0, 1)]);
    assert_eq!(t[1].sent, vec![sent(0, 0, 2), sent(1, 1, 1)]);
    assert_eq!(t[2].sent, vec![sent(0, 1, 1), sent(1, 2, 1)]);
    // slot 1: only A₁ is tried; B₁ waits for it
    assert_eq!(t[0].decoded.len(), 1);
    assert_eq!(t[0].decoded[0].verdict, Verdict::Nack);
    // slot 2: A₁ succeeds, then B₁ from the stored reception, then B₂
    let order: Vec<(Sent, u64)> = t[1].decoded.iter().map(|d| (d.sent, d.slot)).collect();
    assert_eq!(order, vec![(sent(0, 0, 2), 1), (sent(1, 0, 1), 0), (sent(1, 1, 1), 1)]);
    assert_eq!(be.released, vec![0, 1, 2]);
    assert_eq!(rec.attempts, vec![5, 1]);
    assert_eq!(rec.failures, vec![1, 0]);
}

#[test]
fn scheduler_enforces_caps() {
    let nacks: Vec<_> = (1..=10).map(|a| (0usize, 0u64, a)).collect();
    let mut be = Scripted::new(2, &nacks);
    let err = Scheduler::new(2, 4, 1024).run(&mut be, 1, 8, 2).unwrap_err();
    assert_eq!(err, Error::RetransmissionCap { level: 0, cap: 4 });
    let mut be = Scripted::new(2, &nacks);
    let err = Scheduler::new(2, 64, 3).run(&mut be, 1, 8, 2).unwrap_err();
    assert_eq!(err, Error::QueueOverflow { level: 1, cap: 3 });
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn scheduler_respects_level_order(
        nacks in proptest::collection::vec((0usize..3, 0u64..12, 1usize..3), 0..20)
    ) {
        let mut be = Scripted::new(3, &nacks);
        let mut sch = Scheduler::new(3, 64, 1024);
        let rec = sch.run(&mut be, 10, 16, 3).unwrap();
        prop_assert!(rec.audit());
        prop_assert_eq!(rec.channel_uses, 16 * sch.slots());
        let nack_count = rec.failures.iter().sum::<u64>();
        prop_assert_eq!(rec.attempts.iter().sum::<u64>(), rec.codewords + nack_count);
    }
}

#[test]
fn capacity_reference_points() {
    assert!((capacity(Modulation::Bpsk, 0.0) - 0.7215).abs() < 5e-4);
    assert!((capacity(Modulation::Qam(4), 40.0) - 4.0).abs() < 1e-6);
    assert!(capacity(Modulation::Qam(4), -40.0) < 1e-3);
}
