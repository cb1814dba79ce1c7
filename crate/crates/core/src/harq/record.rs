//! Empirical throughput bookkeeping.

use std::time::Duration;

/// Wall-clock metadata; never affects equality.
#[derive(Debug, Clone, Copy, Default)]
pub struct WallClock(pub Duration);

impl PartialEq for WallClock {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

/// Counts accumulated by a simulation run. All fields are integer sums, so
/// merging is exact and order-independent.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ThroughputRecord {
    pub bits_per_symbol: usize,
    pub block_length: usize,
    /// Data bits (CRC excluded) of correctly delivered messages.
    pub data_bits_delivered: u64,
    /// Symbols transmitted.
    pub channel_uses: u64,
    /// Level-codeword transmissions; `B` per multilevel transmission.
    pub transmissions: u64,
    /// Acknowledged codewords (whole messages in level-dependent runs).
    pub codewords: u64,
    /// Transmissions spent on the acknowledged codewords.
    pub codeword_transmissions: u64,
    /// Acknowledged codewords whose data was wrong.
    pub undetected_errors: u64,
    /// `attempts[l]` decodes made after `l + 1` transmissions, `failures[l]`
    /// of them failed.
    pub attempts: Vec<u64>,
    pub failures: Vec<u64>,
    /// Acknowledged level codewords per level. A level-dependent message
    /// acknowledges every level at once.
    pub level_acks: Vec<u64>,
    /// Acknowledged codewords occupy one level (`N/B` channel uses per
    /// transmission) rather than the whole constellation (`N`).
    pub per_level_codewords: bool,
    // per acknowledged codeword: d = delivered bits, t = transmissions
    sum_d2: u128,
    sum_t2: u128,
    sum_dt: u128,
    pub wall: WallClock,
}

impl ThroughputRecord {
    pub fn new(bits_per_symbol: usize, block_length: usize) -> Self {
        Self {
            bits_per_symbol,
            block_length,
            ..Self::default()
        }
    }

    pub(crate) fn attempt(&mut self, l: usize, failed: bool) {
        if self.attempts.len() <= l {
            self.attempts.resize(l + 1, 0);
            self.failures.resize(l + 1, 0);
        }
        self.attempts[l] += 1;
        self.failures[l] += u64::from(failed);
    }

    pub(crate) fn acknowledge(&mut self, delivered: u64, transmissions: u64, correct: bool) {
        let d = if correct { delivered } else { 0 };
        self.data_bits_delivered += d;
        self.codewords += 1;
        self.codeword_transmissions += transmissions;
        self.undetected_errors += u64::from(!correct);
        self.sum_d2 += u128::from(d) * u128::from(d);
        self.sum_t2 += u128::from(transmissions) * u128::from(transmissions);
        self.sum_dt += u128::from(d) * u128::from(transmissions);
    }

    pub(crate) fn acknowledge_level(&mut self, level: usize) {
        if self.level_acks.len() <= level {
            self.level_acks.resize(level + 1, 0);
        }
        self.level_acks[level] += 1;
    }

    pub fn merge(&mut self, other: &Self) {
        if self.block_length == 0 {
            self.bits_per_symbol = other.bits_per_symbol;
            self.block_length = other.block_length;
            self.per_level_codewords = other.per_level_codewords;
        }
        self.data_bits_delivered += other.data_bits_delivered;
        self.channel_uses += other.channel_uses;
        self.transmissions += other.transmissions;
        self.codewords += other.codewords;
        self.codeword_transmissions += other.codeword_transmissions;
        self.undetected_errors += other.undetected_errors;
        for (l, (&a, &f)) in other.attempts.iter().zip(&other.failures).enumerate() {
            if self.attempts.len() <= l {
                self.attempts.resize(l + 1, 0);
                self.failures.resize(l + 1, 0);
            }
            self.attempts[l] += a;
            self.failures[l] += f;
        }
        if self.level_acks.len() < other.level_acks.len() {
            self.level_acks.resize(other.level_acks.len(), 0);
        }
        for (a, &b) in self.level_acks.iter_mut().zip(&other.level_acks) {
            *a += b;
        }
        self.sum_d2 += other.sum_d2;
        self.sum_t2 += other.sum_t2;
        self.sum_dt += other.sum_dt;
        self.wall.0 += other.wall.0;
    }

    /// Delivered data bits per channel use.
    pub fn throughput(&self) -> f64 {
        if self.channel_uses == 0 {
            return 0.0;
        }
        self.data_bits_delivered as f64 / self.channel_uses as f64
    }

    /// Throughput normalized by the bits per symbol, comparable to a binary
    /// code rate.
    pub fn throughput_per_level(&self) -> f64 {
        self.throughput() / self.bits_per_symbol.max(1) as f64
    }

    /// Mean transmissions per acknowledged codeword.
    pub fn retx_mean(&self) -> f64 {
        if self.codewords == 0 {
            return f64::NAN;
        }
        self.codeword_transmissions as f64 / self.codewords as f64
    }

    /// Empirical FER of decodes after `l + 1` transmissions.
    pub fn fer(&self, l: usize) -> f64 {
        match self.attempts.get(l) {
            Some(&a) if a > 0 => self.failures[l] as f64 / a as f64,
            _ => f64::NAN,
        }
    }

    /// Standard error of [`Self::throughput`] by the delta method for a
    /// ratio of sums over acknowledged codewords.
    pub fn std_error(&self) -> f64 {
        let n = self.codewords as f64;
        if n < 2.0 || self.block_length == 0 {
            return f64::NAN;
        }
        // channel uses attributed to a codeword per transmission
        let mut c = self.block_length as f64;
        if self.per_level_codewords {
            c /= self.bits_per_symbol.max(1) as f64;
        }
        let sum_t = self.codeword_transmissions as f64;
        let r = self.data_bits_delivered as f64 / (c * sum_t);
        let ss = self.sum_d2 as f64 - 2.0 * r * c * self.sum_dt as f64
            + r * r * c * c * self.sum_t2 as f64;
        (ss.max(0.0) * n / (n - 1.0)).sqrt() / (c * sum_t)
    }

    /// Normal-approximation 95% interval of the throughput.
    pub fn ci95(&self) -> (f64, f64) {
        let t = self.throughput();
        let h = 1.96 * self.std_error();
        (t - h, t + h)
    }

    /// The exact channel-use identity `uses · B = N · transmissions`.
    pub fn audit(&self) -> bool {
        self.channel_uses * self.bits_per_symbol as u64
            == self.block_length as u64 * self.transmissions
    }
}
