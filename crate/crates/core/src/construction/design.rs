//! Throughput-maximizing information-set selection.

use serde::{Deserialize, Serialize};

use crate::construction::ga::{ga_ber, ga_ber_from_channel_means};
use crate::construction::reliability::ReliabilityVector;
use crate::error::{Error, Result};
use crate::modem::constellation::db_to_linear;
use crate::polar::PolarCodeSpec;

/// Relative change of the peak throughput below which the retransmission
/// loop is considered converged.
pub const CONVERGENCE: f64 = 1e-9;
pub const MAX_ITERATIONS: usize = 64;

/// Channel indices by ascending BER, ties by index.
pub fn sort_channels(v: &ReliabilityVector) -> Vec<usize> {
    let ln = v.ln_ber();
    let mut idx: Vec<usize> = (0..ln.len()).collect();
    idx.sort_by(|&a, &b| ln[a].total_cmp(&ln[b]));
    idx
}

/// FER of the nested codes `K = 0..=len`, held as both `ln P_K` and
/// `ln(1 − P_K)` so that neither end of the curve loses resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FerCurve {
    ln_fer: Vec<f64>,
    ln_success: Vec<f64>,
}

impl FerCurve {
    /// The product bound `P_K = 1 − ∏_{i≤K}(1 − v_i)` over the given order.
    pub fn product_bound(ln_v: impl IntoIterator<Item = f64>) -> Self {
        let mut ln_fer = vec![f64::NEG_INFINITY];
        let mut ln_success = vec![0.0];
        let (mut s, mut union) = (0.0f64, f64::NEG_INFINITY);
        for lv in ln_v {
            s += (-lv.exp()).ln_1p();
            union = log_add(union, lv);
            ln_success.push(s);
            // for tiny P the union sum is exact to within P itself
            ln_fer.push(if s > -1e-12 {
                union
            } else {
                (-s.exp_m1()).ln()
            });
        }
        Self { ln_fer, ln_success }
    }

    /// From measured frame error rates.
    pub fn from_fer(fer: &[f64]) -> Self {
        Self {
            ln_fer: fer.iter().map(|p| p.ln()).collect(),
            ln_success: fer.iter().map(|p| (-p).ln_1p()).collect(),
        }
    }

    /// Largest `K` covered.
    pub fn max_k(&self) -> usize {
        self.ln_fer.len() - 1
    }

    pub fn fer(&self, k: usize) -> f64 {
        self.ln_fer[k].exp()
    }

    pub fn ln_fer(&self, k: usize) -> f64 {
        self.ln_fer[k]
    }

    pub fn ln_success(&self, k: usize) -> f64 {
        self.ln_success[k]
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.ln_fer.iter().map(|x| x.exp()).collect()
    }

    fn truncate(&mut self, k: usize) {
        self.ln_fer.truncate(k + 1);
        self.ln_success.truncate(k + 1);
    }

    /// Every step up in `K` raises the FER, as seen in at least one of the
    /// two representations.
    pub fn is_strictly_increasing(&self) -> bool {
        (1..self.ln_fer.len()).all(|k| {
            self.ln_fer[k] > self.ln_fer[k - 1] || self.ln_success[k] < self.ln_success[k - 1]
        })
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.ln_fer.windows(2).all(|w| w[1] >= w[0])
    }
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Rises (weakly) to a single contiguous maximum and falls (weakly) after it.
pub fn is_unimodal(seq: &[f64]) -> bool {
    let Some(max) = seq.iter().copied().reduce(f64::max) else {
        return true;
    };
    let first = seq.iter().position(|&x| x == max).unwrap();
    let last = seq.iter().rposition(|&x| x == max).unwrap();
    seq[..=first].windows(2).all(|w| w[0] <= w[1])
        && seq[first..=last].iter().all(|&x| x == max)
        && seq[last..].windows(2).all(|w| w[0] >= w[1])
}

/// Outcome of one design run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignResult {
    /// 0-based channel indices, most reliable first.
    pub sorted_channels: Vec<usize>,
    /// Message-plus-CRC length of the best code.
    pub k_opt: usize,
    /// Predicted throughput at `k_opt`, per channel use per level.
    pub predicted_throughput: f64,
    /// First-transmission FER of every nested code.
    pub fer: FerCurve,
    /// `ln η_K` for `K = 0..=max`.
    pub ln_throughput: Vec<f64>,
    /// Transmissions the design loop ran through.
    pub iterations: usize,
}

impl DesignResult {
    pub fn throughput(&self, k: usize) -> f64 {
        self.ln_throughput[k].exp()
    }

    pub fn throughput_curve(&self) -> Vec<f64> {
        self.ln_throughput.iter().map(|x| x.exp()).collect()
    }

    pub fn predicted_fer(&self, k: usize) -> f64 {
        self.fer.fer(k)
    }

    /// The designed code at `k_opt`; needs a power-of-two channel count.
    pub fn code(&self) -> Result<PolarCodeSpec> {
        PolarCodeSpec::new(
            self.sorted_channels.len(),
            self.sorted_channels.clone(),
            self.k_opt,
        )
    }

    pub(crate) fn from_parts(
        sorted_channels: Vec<usize>,
        fer: FerCurve,
        ln_throughput: Vec<f64>,
        iterations: usize,
    ) -> Self {
        let (mut k_opt, mut best) = (0, f64::NEG_INFINITY);
        for (k, &v) in ln_throughput.iter().enumerate() {
            if v > best {
                best = v;
                k_opt = k;
            }
        }
        Self {
            sorted_channels,
            k_opt,
            predicted_throughput: best.exp(),
            fer,
            ln_throughput,
            iterations,
        }
    }
}

fn sorted_ln(v: &ReliabilityVector, idx: &[usize]) -> Vec<f64> {
    idx.iter().map(|&i| v.ln_ber()[i]).collect()
}

/// Best single-transmission code: `η_K = (K/N)(1 − P_K)`.
pub fn nc_binary_design(v: &ReliabilityVector) -> DesignResult {
    let n = v.len() as f64;
    let idx = sort_channels(v);
    let fer = FerCurve::product_bound(sorted_ln(v, &idx));
    let ln_eta = (0..=v.len())
        .map(|k| (k as f64 / n).ln() + fer.ln_success(k))
        .collect();
    DesignResult::from_parts(idx, fer, ln_eta, 1)
}

/// Shared loop of the retransmission designers.
///
/// `reliability(l)` gives the bit-channel BERs after `l` transmissions. Each
/// transmission costs `uses` channel uses; message lengths run up to `k_max`.
/// With `resort`, every transmission picks its own best channels; otherwise
/// the first ordering is kept. Returns one result per transmission.
pub fn retransmission_design(
    uses: usize,
    k_max: usize,
    mut reliability: impl FnMut(usize) -> Result<ReliabilityVector>,
    resort: bool,
    max_tx: usize,
) -> Result<Vec<DesignResult>> {
    if max_tx == 0 {
        return Err(Error::InvalidParameter(
            "at least one transmission is required".into(),
        ));
    }
    let uses = uses as f64;
    let mut effective = vec![0.0f64; k_max + 1];
    let mut ln_all_failed = vec![0.0f64; k_max + 1];
    let mut order: Option<Vec<usize>> = None;
    let mut stages: Vec<DesignResult> = Vec::new();
    for l in 1..=max_tx {
        let v = reliability(l)?;
        if v.len() < k_max {
            return Err(Error::LengthMismatch {
                expected: k_max,
                actual: v.len(),
            });
        }
        if resort || order.is_none() {
            order = Some(sort_channels(&v));
        }
        let idx = order.clone().unwrap();
        let mut fer = FerCurve::product_bound(sorted_ln(&v, &idx));
        fer.truncate(k_max);
        let mut ln_eta = Vec::with_capacity(k_max + 1);
        for k in 0..=k_max {
            effective[k] += uses * ln_all_failed[k].exp();
            ln_all_failed[k] += fer.ln_fer(k);
            ln_eta.push((k as f64).ln() + fer.ln_success(k) - effective[k].ln());
        }
        let stage = DesignResult::from_parts(idx, fer, ln_eta, l);
        let converged = stages.last().is_some_and(|prev| {
            (stage.predicted_throughput - prev.predicted_throughput).abs()
                <= CONVERGENCE * prev.predicted_throughput
        });
        stages.push(stage);
        if converged {
            break;
        }
    }
    Ok(stages)
}

/// Chase-combining design: the mean LLR grows linearly with the number of
/// combined receptions, the channel order is fixed by the first one.
pub fn cc_binary_design(gamma_db: f64, n: usize) -> Result<DesignResult> {
    let g = db_to_linear(gamma_db);
    let mut stages = retransmission_design(
        n,
        n,
        |l| ga_ber(4.0 * l as f64 * g, n),
        false,
        MAX_ITERATIONS,
    )?;
    let mut last = stages.pop().unwrap();
    // report the first-transmission FER, as the other designers do
    let first = stages.into_iter().next();
    if let Some(first) = first {
        last.fer = first.fer;
    }
    Ok(last)
}

/// Incremental-redundancy design at transmission `l`: a code of length `lN`
/// embedded in the enclosing power of two, the surplus coded bits punctured
/// from the front.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrDesign {
    pub stages: Vec<DesignResult>,
    /// Whether a stage's length `lN` needed puncturing.
    pub approximate: Vec<bool>,
}

impl IrDesign {
    pub fn peak_throughput(&self) -> f64 {
        self.stages.last().unwrap().predicted_throughput
    }

    pub fn k_opt(&self) -> usize {
        self.stages.last().unwrap().k_opt
    }
}

pub fn ir_reliability(mean_llr: f64, n: usize, l: usize) -> Result<ReliabilityVector> {
    let len = l * n;
    let total = len.next_power_of_two();
    let mut means = vec![mean_llr; total];
    means[..total - len].fill(0.0);
    ga_ber_from_channel_means(&means)
}

pub fn ir_binary_design(gamma_db: f64, n: usize, max_tx: usize) -> Result<IrDesign> {
    crate::polar::code::check_power_of_two(n)?;
    let mean = 4.0 * db_to_linear(gamma_db);
    let stages = retransmission_design(n, n, |l| ir_reliability(mean, n, l), true, max_tx)?;
    let approximate = (1..=stages.len())
        .map(|l| !(l * n).is_power_of_two())
        .collect();
    Ok(IrDesign {
        stages,
        approximate,
    })
}
