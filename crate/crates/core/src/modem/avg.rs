//! Average level LLRs, the inputs of Gaussian-approximation code design.
//!
//! The PAM average integrates the piecewise-linear LLR against the Gaussian
//! density of each 0-labelled point; every piece is a linear × Gaussian
//! integral with a closed form.

use std::f64::consts::{PI, SQRT_2};

use crate::construction::ga::{ln_phi, phi_inv_ln};
use crate::error::{Error, Result};
use crate::modem::constellation::{ConstellationSpec, Modulation};

/// `Pr(lo < Y ≤ hi)` for `Y ~ N(0, 1)`, without cancellation in the tails.
fn normal_mass(lo: f64, hi: f64) -> f64 {
    if lo >= 0.0 {
        0.5 * (libm::erfc(lo / SQRT_2) - libm::erfc(hi / SQRT_2))
    } else if hi <= 0.0 {
        0.5 * (libm::erfc(-hi / SQRT_2) - libm::erfc(-lo / SQRT_2))
    } else {
        1.0 - 0.5 * libm::erfc(-lo / SQRT_2) - 0.5 * libm::erfc(hi / SQRT_2)
    }
}

fn std_pdf(z: f64) -> f64 {
    if z.is_infinite() {
        0.0
    } else {
        (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
    }
}

/// Mean of the max-log LLR of PAM level `level` (1-based) when a 0 is sent.
pub fn avg_pam_llr(level: usize, pam_order: usize, n0: f64) -> Result<f64> {
    if pam_order < 2 || !pam_order.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(pam_order));
    }
    let levels = pam_order.trailing_zeros() as usize;
    if level == 0 || level > levels {
        return Err(Error::InvalidParameter(format!(
            "level {level} out of range for {pam_order}-PAM"
        )));
    }
    if !(n0 > 0.0) {
        return Err(Error::Domain {
            name: "n0",
            value: n0,
            domain: "(0, inf)",
        });
    }
    // by regularity every subset at this level behaves like the one with all
    // lower bits zero
    let step = (1usize << level) as f64;
    let count = pam_order >> (level - 1);
    let x = |t: usize| -(pam_order as f64 - 1.0) + step * t as f64;
    let sigma = (n0 / 2.0).sqrt();

    let mut total = 0.0;
    let mut senders = 0usize;
    for s in (0..count).step_by(2) {
        senders += 1;
        let xs = x(s);
        for d in 0..count - 1 {
            let (xd, xd1) = (x(d), x(d + 1));
            let lo = if d == 0 { f64::NEG_INFINITY } else { xd };
            let hi = if d == count - 2 { f64::INFINITY } else { xd1 };
            let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
            let c = sign * (xd1 - xd) / n0;
            let (zl, zh) = ((lo - xs) / sigma, (hi - xs) / sigma);
            // ∫ (A − 2y) N(y; xs, σ²) dy over (lo, hi]
            let mass = normal_mass(zl, zh);
            let tail = 2.0 * sigma * (std_pdf(zh) - std_pdf(zl));
            total += c * ((xd1 + xd - 2.0 * xs) * mass + tail);
        }
    }
    Ok(total / senders as f64)
}

/// All PAM level means, least reliable first.
pub fn avg_pam_llrs(pam_order: usize, n0: f64) -> Result<Vec<f64>> {
    let levels = pam_order.trailing_zeros() as usize;
    (1..=levels)
        .map(|l| avg_pam_llr(l, pam_order, n0))
        .collect()
}

/// Lifts PAM level means to the `2·len` QAM levels.
pub fn qam_avg_llrs(pam_means: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * pam_means.len());
    for &m in pam_means {
        // 1 − (1 − φ)² = φ(2 − φ)
        let lp = ln_phi(m);
        let t = lp + (2.0 - lp.exp()).ln();
        out.push(phi_inv_ln(t));
        out.push(2.0 * m);
    }
    out
}

/// Per-level mean LLRs of a constellation at its operating noise level.
pub fn level_mean_llrs(spec: &ConstellationSpec) -> Result<Vec<f64>> {
    match spec.modulation {
        Modulation::Bpsk => Ok(vec![avg_pam_llr(1, 2, spec.n0)?]),
        Modulation::Qam(_) => Ok(qam_avg_llrs(&avg_pam_llrs(
            spec.modulation.pam_order(),
            spec.n0,
        )?)),
    }
}

/// Equivalent BPSK SNR of a level with mean LLR `mean`: `10·log10(mean/4)`.
pub fn equivalent_snr_db(mean: f64) -> f64 {
    10.0 * (mean / 4.0).log10()
}
