//! Set-partitioned QAM built from two naturally mapped PAMs and a linear
//! precoder.
//!
//! Label `c = [c1 .. cB]` with `c1` the least reliable bit. The precoder
//! forms `b_k = c_k ⊕ c_{k+1}` for odd `k` and `b_k = c_k` for even `k`; odd
//! positions drive the I-channel PAM, even positions the Q-channel PAM, each
//! with `d1` as its least significant bit.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::modem::constellation::Modulation;

pub fn precode(c: &[u8]) -> Result<Vec<u8>> {
    if c.is_empty() || c.len() % 2 == 1 {
        return Err(Error::OddBitsPerSymbol(c.len()));
    }
    let mut b = c.to_vec();
    for k in (0..c.len()).step_by(2) {
        b[k] = (c[k] ^ c[k + 1]) & 1;
    }
    Ok(b)
}

/// Inverse of [`precode`].
pub fn unprecode(b: &[u8]) -> Result<Vec<u8>> {
    // the map is an involution
    precode(b)
}

/// Natural PAM mapping of `d = [d1, d2, ...]` (LSB first): `2d − (M − 1)`.
pub fn pam_map(d_bits: &[u8]) -> i32 {
    let m = 1i32 << d_bits.len();
    let d: i32 = d_bits
        .iter()
        .enumerate()
        .map(|(k, &b)| i32::from(b & 1) << k)
        .sum();
    2 * d - (m - 1)
}

/// Splits a label into its I and Q PAM bit vectors.
pub fn split_iq(c: &[u8]) -> Result<(Vec<u8>, Vec<u8>)> {
    let b = precode(c)?;
    let bi = b.iter().step_by(2).copied().collect();
    let bq = b.iter().skip(1).step_by(2).copied().collect();
    Ok((bi, bq))
}

pub fn qam_map(c: &[u8]) -> Result<Complex64> {
    let (bi, bq) = split_iq(c)?;
    Ok(Complex64::new(
        f64::from(pam_map(&bi)),
        f64::from(pam_map(&bq)),
    ))
}

/// Every point of 2^B-QAM with its label, label bit `k` taken from bit `k`
/// of the point index.
pub fn qam_points(bits: usize) -> Result<Vec<(Vec<u8>, Complex64)>> {
    if bits == 0 || bits % 2 == 1 {
        return Err(Error::OddBitsPerSymbol(bits));
    }
    (0..1usize << bits)
        .map(|v| {
            let c: Vec<u8> = (0..bits).map(|k| ((v >> k) & 1) as u8).collect();
            let x = qam_map(&c)?;
            Ok((c, x))
        })
        .collect()
}

/// Maps one codeword per level onto symbols: symbol `j` carries bit `j` of
/// every level. BPSK is 2-PAM: `2c − 1`.
pub fn map_symbols(modulation: Modulation, levels: &[&[u8]], out: &mut [Complex64]) {
    assert_eq!(levels.len(), modulation.bits_per_symbol());
    match modulation {
        Modulation::Bpsk => {
            for (o, &c) in out.iter_mut().zip(levels[0]) {
                *o = Complex64::new(2.0 * f64::from(c & 1) - 1.0, 0.0);
            }
        }
        Modulation::Qam(_) => {
            let m = f64::from(1u32 << (levels.len() / 2));
            for (j, o) in out.iter_mut().enumerate() {
                let (mut di, mut dq) = (0u32, 0u32);
                for (k, pair) in levels.chunks(2).enumerate() {
                    let (a, b) = (pair[0][j] & 1, pair[1][j] & 1);
                    di |= u32::from(a ^ b) << k;
                    dq |= u32::from(b) << k;
                }
                *o = Complex64::new(
                    2.0 * f64::from(di) - (m - 1.0),
                    2.0 * f64::from(dq) - (m - 1.0),
                );
            }
        }
    }
}

/// Minimum intra-subset distance after fixing the first `p` label bits, for
/// `p = 0..B` (the minimum over all subsets with that prefix length).
pub fn verify_spm(bits: usize) -> Result<Vec<f64>> {
    if bits > 8 {
        return Err(Error::InvalidParameter(format!(
            "exhaustive partition check limited to B <= 8, got {bits}"
        )));
    }
    let pts = qam_points(bits)?;
    let mut out = Vec::with_capacity(bits);
    for p in 0..bits {
        let mut best = f64::INFINITY;
        for (i, (ci, xi)) in pts.iter().enumerate() {
            for (cj, xj) in &pts[i + 1..] {
                if ci[..p] == cj[..p] {
                    best = best.min((xi - xj).norm());
                }
            }
        }
        out.push(best);
    }
    Ok(out)
}
