//! Construction from genie-aided SC decoding of simulated BPSK codewords.

use rand::Rng;

use crate::construction::design::{DesignResult, FerCurve};
use crate::error::{Error, Result};
use crate::modem::constellation::db_to_linear;
use crate::par::{map_trials, Execution};
use crate::polar::{encode, ScDecoder};
use crate::rng::{gaussian, substream, Purpose};

/// First-error events of each simulated codeword (0-based channel indices).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FirstErrorLog {
    pub n: usize,
    pub events: Vec<Vec<usize>>,
}

impl FirstErrorLog {
    /// `Z_κ`: how many codewords had a first error on channel κ.
    pub fn counts(&self) -> Vec<u64> {
        let mut z = vec![0u64; self.n];
        for row in &self.events {
            for &k in row {
                z[k] += 1;
            }
        }
        z
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}

/// Runs `n_sim` genie-aided decodes of random codewords over BPSK-AWGN at
/// `snr_db` (`+∞` for a noiseless channel).
pub fn simulate_first_errors(
    snr_db: f64,
    n: usize,
    n_sim: usize,
    seed: u64,
    exec: Execution,
) -> Result<FirstErrorLog> {
    let n0 = 1.0 / db_to_linear(snr_db);
    let sigma = (n0 / 2.0).sqrt();
    let dec = ScDecoder::new(n)?;
    let rows = map_trials(
        exec,
        n_sim,
        || (dec.clone(), vec![0.0f64; n]),
        |(dec, llr), m| {
            let mut data = substream(seed, Purpose::Design, &[m as u64, 0]);
            let mut noise = substream(seed, Purpose::Design, &[m as u64, 1]);
            let u: Vec<u8> = (0..n).map(|_| data.random_range(0..2u8)).collect();
            let x = encode(&u).expect("power of two");
            for (l, &b) in llr.iter_mut().zip(&x) {
                let s = if b == 0 { -1.0 } else { 1.0 };
                let y = s + sigma * gaussian(&mut noise);
                *l = -4.0 * y / n0;
            }
            dec.genie(llr, &u).expect("lengths match")
        },
    );
    Ok(FirstErrorLog { n, events: rows })
}

/// Orders channels by ascending `Z_κ` (ties by index) and picks the `K`
/// maximizing `(K/N)(1 − FER_K)` with FER estimated from the same codewords.
pub fn design_from_log(log: &FirstErrorLog) -> Result<DesignResult> {
    if log.is_empty() {
        return Err(Error::InvalidParameter(
            "need at least one simulated codeword".into(),
        ));
    }
    let n = log.n;
    let z = log.counts();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by_key(|&i| z[i]);
    let mut rank = vec![0usize; n];
    for (r, &c) in idx.iter().enumerate() {
        rank[c] = r;
    }
    // codeword m fails at rate K iff its earliest-ranked event is below K
    let mut first_fail = vec![0u64; n + 1];
    for row in &log.events {
        if let Some(r) = row.iter().map(|&k| rank[k]).min() {
            first_fail[r + 1] += 1;
        }
    }
    let total = log.len() as f64;
    let mut fer = Vec::with_capacity(n + 1);
    let mut acc = 0u64;
    for c in first_fail {
        acc += c;
        fer.push(acc as f64 / total);
    }
    let curve = FerCurve::from_fer(&fer);
    let ln_eta = (0..=n)
        .map(|k| (k as f64 / n as f64).ln() + curve.ln_success(k))
        .collect();
    Ok(DesignResult::from_parts(idx, curve, ln_eta, 1))
}

pub fn sim_based_design(
    snr_db: f64,
    n: usize,
    n_sim: usize,
    seed: u64,
    exec: Execution,
) -> Result<DesignResult> {
    if n_sim == 0 {
        return Err(Error::InvalidParameter("n_sim must be at least 1".into()));
    }
    design_from_log(&simulate_first_errors(snr_db, n, n_sim, seed, exec)?)
}
