//! Golden-section rate matching for list decoding.
//!
//! Codes designed for SC decoding are used unchanged with a list decoder,
//! but the list decoder tolerates a higher rate. Starting from the SC
//! design's length, a golden-section search over the message length finds
//! the rate that maximizes the simulated list-decoder throughput.
//!
//! The objective is a Monte-Carlo estimate. Every probe reuses the same seed,
//! so the data and noise draws are common to all lengths and the objective is
//! a deterministic function of `K`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::harq::{run_nc_d, SimConfig};
use crate::mlpcm::{MlpcmSpec, Protocol};
use crate::modem::avg::equivalent_snr_db;
use crate::polar::PolarCodeSpec;

/// `(√5 − 1) / 2`.
pub const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// One objective evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probe {
    pub k: usize,
    pub f: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateMatchResult {
    /// The search's answer: the last lower probe point.
    pub k_opt: usize,
    pub f_opt: f64,
    /// The best length seen among all probes; can differ from `k_opt` by a
    /// step when the final comparison is not re-run.
    pub best: Probe,
    /// Distinct evaluations in the order they were made.
    pub probes: Vec<Probe>,
    pub iterations: usize,
    pub warnings: Vec<String>,
}

impl RateMatchResult {
    pub fn evaluations(&self) -> usize {
        self.probes.len()
    }
}

/// Initial search interval `[a, min(a + total/10, total)]`.
pub fn initial_interval(k_start: usize, total: usize) -> (usize, usize) {
    (k_start, (k_start + total / 10).min(total))
}

/// How the integer search places its probes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchRule {
    /// Golden section with probes on Fibonacci offsets, the exact integer
    /// form of the golden ratio. Ends on a bracket of three points and
    /// returns its best probe.
    #[default]
    Fibonacci,
    /// Golden section with floored probe points, returning the lower probe
    /// at exit. The floors can stall the interval, so it is forced to shrink
    /// by at least one step per iteration.
    FlooredGolden,
}

/// Golden-section search for the maximizer of `f` on
/// `[k_start, min(k_start + total/10, total)]`. Evaluations are memoized and
/// never leave the interval.
pub fn golden_section<F>(
    k_start: usize,
    total: usize,
    rule: SearchRule,
    mut f: F,
) -> Result<RateMatchResult>
where
    F: FnMut(usize) -> Result<f64>,
{
    if k_start > total {
        return Err(Error::InfoLengthTooLarge {
            k: k_start,
            n: total,
        });
    }
    let (a, b) = initial_interval(k_start, total);
    let mut obj = Objective {
        f: &mut f,
        b,
        memo: BTreeMap::new(),
        probes: Vec::new(),
    };
    let (k_opt, f_opt, iterations) = match rule {
        SearchRule::Fibonacci => fibonacci(a, b, &mut obj)?,
        SearchRule::FlooredGolden => floored_golden(a, b, &mut obj)?,
    };
    let probes = obj.probes;
    let best = probes
        .iter()
        .copied()
        .fold(None::<Probe>, |acc, p| match acc {
            Some(q) if q.f > p.f || (q.f == p.f && q.k <= p.k) => Some(q),
            _ => Some(p),
        })
        .expect("at least one probe");
    Ok(RateMatchResult {
        k_opt,
        f_opt,
        best,
        probes,
        iterations,
        warnings: Vec::new(),
    })
}

/// Memoized objective; lengths past the interval score −∞ unevaluated.
struct Objective<'a, F> {
    f: &'a mut F,
    b: usize,
    memo: BTreeMap<usize, f64>,
    probes: Vec<Probe>,
}

impl<F: FnMut(usize) -> Result<f64>> Objective<'_, F> {
    fn eval(&mut self, k: usize) -> Result<f64> {
        if k > self.b {
            return Ok(f64::NEG_INFINITY);
        }
        if let Some(&v) = self.memo.get(&k) {
            return Ok(v);
        }
        let v = (self.f)(k)?;
        self.memo.insert(k, v);
        self.probes.push(Probe { k, f: v });
        Ok(v)
    }
}

fn fibonacci<F: FnMut(usize) -> Result<f64>>(
    a: usize,
    b: usize,
    obj: &mut Objective<F>,
) -> Result<(usize, f64, usize)> {
    if b - a <= 2 {
        let mut best = (a, obj.eval(a)?);
        for k in a + 1..=b {
            let v = obj.eval(k)?;
            if v > best.1 {
                best = (k, v);
            }
        }
        return Ok((best.0, best.1, 0));
    }
    let mut fib = vec![0usize, 1];
    while *fib.last().unwrap() < b - a {
        let n = fib.len();
        fib.push(fib[n - 1] + fib[n - 2]);
    }
    let mut k = fib.len() - 1;
    let mut lo = a;
    let mut iterations = 0;
    // invariant: the maximizer lies in [lo, lo + fib[k]]
    while k > 3 {
        iterations += 1;
        let x1 = lo + fib[k - 2];
        let x2 = lo + fib[k - 1];
        if obj.eval(x1)? < obj.eval(x2)? {
            lo = x1;
        }
        k -= 1;
    }
    // [lo, lo + 2]: the middle was probed, the ends count only if known
    let mut best = (lo + 1, obj.eval(lo + 1)?);
    for x in [lo, lo + 2] {
        if let Some(&v) = obj.memo.get(&x) {
            if v > best.1 || (v == best.1 && x < best.0) {
                best = (x, v);
            }
        }
    }
    Ok((best.0, best.1, iterations))
}

fn floored_golden<F: FnMut(usize) -> Result<f64>>(
    a0: usize,
    b0: usize,
    obj: &mut Objective<F>,
) -> Result<(usize, f64, usize)> {
    let lower =
        |a: usize, b: usize| (GOLDEN * a as f64 + (1.0 - GOLDEN) * b as f64).floor() as usize;
    let upper =
        |a: usize, b: usize| ((1.0 - GOLDEN) * a as f64 + GOLDEN * b as f64).floor() as usize;
    let (mut a, mut b) = (a0, b0);
    let mut k1 = lower(a, b);
    let mut k2 = upper(a, b);
    if k2 <= k1 && k1 < b {
        k2 = k1 + 1;
    }
    let mut f1 = obj.eval(k1)?;
    let mut f2 = obj.eval(k2)?;
    let mut iterations = 0;
    while b - a > 1 {
        iterations += 1;
        if f1 > f2 {
            let old = b;
            b = if k2 == old { old - 1 } else { k2 };
            k2 = k1;
            f2 = f1;
            k1 = lower(a, b);
            if k1 >= k2 {
                k1 = k2.saturating_sub(1).max(a);
            }
            f1 = obj.eval(k1)?;
        } else {
            let old = a;
            a = if k1 == old { old + 1 } else { k1 };
            k1 = k2;
            f1 = f2;
            k2 = upper(a, b);
            if k2 <= k1 {
                k2 = (k1 + 1).min(b);
            }
            f2 = obj.eval(k2)?;
        }
    }
    Ok((k1, f1, iterations))
}

/// Iteration bound of the search on an interval of width `w`.
pub fn iteration_bound(w: usize) -> usize {
    if w <= 1 {
        return 0;
    }
    ((w as f64).ln() / (1.0 / GOLDEN).ln()).ceil() as usize + 2
}

const MIN_BUDGET: usize = 200;

fn simulated_throughput(
    spec: &MlpcmSpec,
    cfg: &SimConfig,
    warnings: &mut Vec<String>,
) -> Result<f64> {
    match run_nc_d(spec, cfg) {
        Ok(r) => Ok(r.throughput()),
        // a length so far above capacity that a frame exhausts the cap
        // delivers nothing in practice
        Err(Error::RetransmissionCap { .. }) => {
            warnings.push(format!(
                "K = {} hit the retransmission cap; scored 0",
                spec.total_k()
            ));
            Ok(0.0)
        }
        Err(e) => Err(e),
    }
}

/// Rate matching of a level-dependent (or binary) code along its joint
/// channel order. `cfg.frames` is the per-probe budget and `cfg.decoder` the
/// list decoder.
pub fn scld_rate_match(spec: &MlpcmSpec, cfg: &SimConfig) -> Result<RateMatchResult> {
    if spec.joint_order.is_none() {
        return Err(Error::InvalidParameter(
            "rate matching needs a joint channel order".into(),
        ));
    }
    let total = spec.n * spec.bits_per_symbol();
    let mut warnings = Vec::new();
    if cfg.frames < MIN_BUDGET {
        warnings.push(format!(
            "budget of {} frames per probe is too small to resolve throughput differences",
            cfg.frames
        ));
    }
    let k_scd = spec.total_k();
    let mut res = golden_section(
        k_scd.max(cfg.crc.len()),
        total,
        SearchRule::default(),
        |k| simulated_throughput(&spec.with_total_k(k)?, cfg, &mut warnings),
    )?;
    res.warnings = warnings;
    Ok(res)
}

/// Rate matching of a single binary code at `gamma_db`.
pub fn scld_rate_match_binary(
    code: &PolarCodeSpec,
    gamma_db: f64,
    cfg: &SimConfig,
) -> Result<RateMatchResult> {
    let spec = MlpcmSpec::binary(code.clone(), gamma_db, Protocol::NcD);
    let mut cfg = cfg.clone();
    cfg.snr_db = gamma_db;
    scld_rate_match(&spec, &cfg)
}

/// Level-by-level rate matching of a level-independent code: each level is
/// matched as a binary code at its equivalent SNR `10 log10(λ̄_n / 4)`.
/// Levels whose SC length cannot even hold the CRC stay as designed.
pub fn scld_rate_match_levels(
    spec: &MlpcmSpec,
    cfg: &SimConfig,
) -> Result<(MlpcmSpec, Vec<Option<RateMatchResult>>)> {
    let mut out = spec.clone();
    let mut results = Vec::with_capacity(spec.levels.len());
    for (n, (code, &mean)) in spec.levels.iter().zip(&spec.level_means).enumerate() {
        if code.k() <= cfg.crc.len() {
            results.push(None);
            continue;
        }
        let r = scld_rate_match_binary(code, equivalent_snr_db(mean), cfg)?;
        out = out.with_level_k(n, r.k_opt)?;
        results.push(Some(r));
    }
    Ok((out, results))
}
