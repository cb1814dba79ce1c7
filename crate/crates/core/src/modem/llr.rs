//! Soft demapping for multistage decoding.
//!
//! LLRs are natural-log and positive when bit 0 is more likely. A QAM level is
//! computed from two PAM levels: odd levels are the boxplus of the matching I
//! and Q PAM LLRs, even levels their sign-adjusted sum.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::modem::constellation::{ConstellationSpec, Modulation};
use crate::polar::LLR_CLIP;

/// Noise floor used when demapping a noiseless channel.
pub const MIN_N0: f64 = 1e-12;

/// How PAM-level LLRs are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum LlrMode {
    /// Log-sum-exp over the surviving subset.
    #[default]
    Exact,
    /// Max-log, evaluated piecewise-linearly between neighbouring subset points.
    Piecewise,
}

/// Which level is being demapped and what the upper levels decided.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelContext {
    /// 1-based level index.
    pub level: usize,
    /// Decisions `ĉ1 .. ĉ(level-1)`.
    pub decided: Vec<u8>,
}

impl LevelContext {
    pub fn new(level: usize, decided: &[u8]) -> Result<Self> {
        if level == 0 || decided.len() + 1 != level {
            return Err(Error::InvalidParameter(format!(
                "level {level} needs {} decided bits, got {}",
                level.saturating_sub(1),
                decided.len()
            )));
        }
        Ok(Self {
            level,
            decided: decided.to_vec(),
        })
    }

    pub fn first() -> Self {
        Self {
            level: 1,
            decided: Vec::new(),
        }
    }

    fn check(&self, modulation: Modulation) -> Result<()> {
        let b = modulation.bits_per_symbol();
        if self.level == 0 || self.level > b || self.decided.len() + 1 != self.level {
            return Err(Error::InvalidParameter(format!(
                "level {} with {} decided bits is invalid for {} bits/symbol",
                self.level,
                self.decided.len(),
                b
            )));
        }
        Ok(())
    }
}

/// LLR of `a ⊕ b` for independent bits with LLRs `a` and `b`.
pub fn boxplus(a: f64, b: f64) -> f64 {
    if a.is_infinite() && b.is_infinite() {
        return a.signum() * b.signum() * f64::INFINITY;
    }
    let (x, y) = (a.abs(), b.abs());
    let (m, big) = if x < y { (x, y) } else { (y, x) };
    let s = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    // ln(1 + e^-(M+m)) - ln(1 + e^-(M-m)) = ln1p(-u(1 - v)/(1 + u))
    // with u = e^-(M-m), v = e^-2m
    let gap = big - m;
    if gap > 40.0 {
        return s * m;
    }
    let u = (-gap).exp();
    let v = (-2.0 * m).exp();
    s * (m + (-u * (1.0 - v) / (1.0 + u)).ln_1p())
}

/// `ln(e^a + e^b)`.
fn lse(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + (-(a - b).abs()).exp().ln_1p()
}

fn sanitize(x: f64) -> f64 {
    if x.is_nan() {
        0.0
    } else {
        x.clamp(-LLR_CLIP, LLR_CLIP)
    }
}

/// The subset of M-PAM selected by `lower` at 1-based `level`: first point
/// and spacing; the point count is `M >> (level-1)`, labels alternate from 0.
#[inline]
fn pam_subset(level: usize, lower: usize, pam_order: usize) -> (f64, f64, usize) {
    let x0 = 2.0 * lower as f64 - (pam_order as f64 - 1.0);
    let step = (1usize << level) as f64;
    (x0, step, pam_order >> (level - 1))
}

#[inline]
pub(crate) fn pam_exact_fast(y: f64, level: usize, lower: usize, pam_order: usize, n0: f64) -> f64 {
    let (x0, step, count) = pam_subset(level, lower, pam_order);
    let (mut l0, mut l1) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for t in 0..count {
        let x = x0 + step * t as f64;
        let m = -(y - x) * (y - x) / n0;
        if t & 1 == 0 {
            l0 = lse(l0, m);
        } else {
            l1 = lse(l1, m);
        }
    }
    l0 - l1
}

#[inline]
pub(crate) fn pam_piecewise_fast(
    y: f64,
    level: usize,
    lower: usize,
    pam_order: usize,
    n0: f64,
) -> f64 {
    let (x0, step, count) = pam_subset(level, lower, pam_order);
    // Ω_d = (x_d, x_{d+1}], first and last intervals open-ended
    let d = if count == 2 {
        0
    } else {
        let raw = ((y - x0) / step).ceil() - 1.0;
        raw.clamp(0.0, (count - 2) as f64) as usize
    };
    let xd = x0 + step * d as f64;
    let xd1 = xd + step;
    let sign = if d & 1 == 0 { 1.0 } else { -1.0 };
    sign * (xd1 - xd) * (xd1 + xd - 2.0 * y) / n0
}

fn lower_value(bits: &[u8]) -> usize {
    bits.iter()
        .enumerate()
        .map(|(k, &b)| usize::from(b & 1) << k)
        .sum()
}

/// Exact LLR of PAM bit `d_level` given `d_1 .. d_(level-1)` (`lower`).
pub fn pam_exact_llr(y: f64, level: usize, lower: &[u8], pam_order: usize, n0: f64) -> Result<f64> {
    check_pam(level, lower, pam_order)?;
    Ok(pam_exact_fast(
        y,
        level,
        lower_value(lower),
        pam_order,
        n0.max(MIN_N0),
    ))
}

/// Max-log PAM LLR, linear in `y` on each interval between subset points.
pub fn pam_piecewise_llr(
    y: f64,
    level: usize,
    lower: &[u8],
    pam_order: usize,
    n0: f64,
) -> Result<f64> {
    check_pam(level, lower, pam_order)?;
    Ok(pam_piecewise_fast(
        y,
        level,
        lower_value(lower),
        pam_order,
        n0.max(MIN_N0),
    ))
}

fn check_pam(level: usize, lower: &[u8], pam_order: usize) -> Result<()> {
    if pam_order < 2 || !pam_order.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(pam_order));
    }
    let levels = pam_order.trailing_zeros() as usize;
    if level == 0 || level > levels || lower.len() + 1 != level {
        return Err(Error::InvalidParameter(format!(
            "PAM level {level} with {} lower bits for {pam_order}-PAM",
            lower.len()
        )));
    }
    Ok(())
}

fn point(modulation: Modulation, label: usize) -> Complex64 {
    match modulation {
        Modulation::Bpsk => Complex64::new(if label & 1 == 0 { -1.0 } else { 1.0 }, 0.0),
        Modulation::Qam(b) => {
            let c: Vec<u8> = (0..b).map(|k| ((label >> k) & 1) as u8).collect();
            crate::modem::mapping::qam_map(&c).expect("even B")
        }
    }
}

fn distance2(modulation: Modulation, y: Complex64, x: Complex64) -> f64 {
    match modulation {
        Modulation::Bpsk => (y.re - x.re) * (y.re - x.re),
        Modulation::Qam(_) => (y - x).norm_sqr(),
    }
}

/// Reference LLR by log-sum-exp over the whole surviving subset, with the
/// likelihood multiplied across all receptions of the same symbol.
pub fn cc_combine_dependent(
    history: &[Complex64],
    ctx: &LevelContext,
    spec: &ConstellationSpec,
) -> Result<f64> {
    ctx.check(spec.modulation)?;
    if history.is_empty() {
        return Err(Error::InvalidParameter("empty reception history".into()));
    }
    let b = spec.bits_per_symbol();
    let n0 = spec.n0.max(MIN_N0);
    let prefix = lower_value(&ctx.decided);
    let mask = (1usize << (ctx.level - 1)) - 1;
    let (mut l0, mut l1) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for label in 0..1usize << b {
        if label & mask != prefix {
            continue;
        }
        let x = point(spec.modulation, label);
        let m: f64 = history
            .iter()
            .map(|&y| -distance2(spec.modulation, y, x) / n0)
            .sum();
        if (label >> (ctx.level - 1)) & 1 == 0 {
            l0 = lse(l0, m);
        } else {
            l1 = lse(l1, m);
        }
    }
    Ok(l0 - l1)
}

/// Reference multistage LLR of one reception (log-sum-exp over the subset).
pub fn exact_msd_llr(y: Complex64, ctx: &LevelContext, spec: &ConstellationSpec) -> Result<f64> {
    cc_combine_dependent(&[y], ctx, spec)
}

/// Chase combining in the level-independent protocols: the subset LLR of the
/// newest reception plus everything accumulated so far.
pub fn cc_combine_independent(new_llr: f64, prev_llr: f64) -> f64 {
    new_llr + prev_llr
}

/// The LLR pair produced by one I/Q PAM level `k`: the odd QAM level `2k-1`,
/// and the even level `2k` for each possible decision on the odd one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelLlrs {
    pub odd: f64,
    pub even_given: [f64; 2],
}

/// PAM LLRs for the next pair of QAM levels; `decided` holds an even number
/// of upper-level decisions.
pub fn qam_level_llrs(
    y: Complex64,
    decided: &[u8],
    spec: &ConstellationSpec,
    mode: LlrMode,
) -> Result<LevelLlrs> {
    let Modulation::Qam(b) = spec.modulation else {
        return Err(Error::InvalidParameter(
            "QAM demapping on a BPSK signal".into(),
        ));
    };
    if decided.len() % 2 == 1 || decided.len() >= b {
        return Err(Error::InvalidParameter(format!(
            "{} decided bits do not start a level pair of a {b}-bit label",
            decided.len()
        )));
    }
    let (li, lq) = iq_pair(y, decided, spec.modulation, spec.n0.max(MIN_N0), mode);
    Ok(LevelLlrs {
        odd: boxplus(li, lq),
        even_given: [li + lq, lq - li],
    })
}

fn iq_pair(
    y: Complex64,
    decided: &[u8],
    modulation: Modulation,
    n0: f64,
    mode: LlrMode,
) -> (f64, f64) {
    let k = decided.len() / 2 + 1;
    let (mut lo_i, mut lo_q) = (0usize, 0usize);
    for j in 0..k - 1 {
        let (c1, c2) = (decided[2 * j] & 1, decided[2 * j + 1] & 1);
        lo_i |= usize::from(c1 ^ c2) << j;
        lo_q |= usize::from(c2) << j;
    }
    let m = modulation.pam_order();
    let pam = match mode {
        LlrMode::Exact => pam_exact_fast,
        LlrMode::Piecewise => pam_piecewise_fast,
    };
    (pam(y.re, k, lo_i, m, n0), pam(y.im, k, lo_q, m, n0))
}

/// Level LLR of one reception through the decomposed pipeline.
pub fn level_llr(
    y: Complex64,
    ctx: &LevelContext,
    spec: &ConstellationSpec,
    mode: LlrMode,
) -> Result<f64> {
    ctx.check(spec.modulation)?;
    let n0 = spec.n0.max(MIN_N0);
    Ok(match spec.modulation {
        Modulation::Bpsk => match mode {
            LlrMode::Exact => pam_exact_fast(y.re, 1, 0, 2, n0),
            LlrMode::Piecewise => pam_piecewise_fast(y.re, 1, 0, 2, n0),
        },
        Modulation::Qam(_) => {
            let n = ctx.level;
            let pair_start = (n - 1) & !1;
            let p = qam_level_llrs(y, &ctx.decided[..pair_start], spec, mode)?;
            if n % 2 == 1 {
                p.odd
            } else {
                p.even_given[usize::from(ctx.decided[n - 2] & 1)]
            }
        }
    })
}

/// Frame-level demapper for multistage decoding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Demapper {
    pub modulation: Modulation,
    pub n0: f64,
    pub mode: LlrMode,
}

impl Demapper {
    pub fn new(spec: &ConstellationSpec, mode: LlrMode) -> Self {
        Self {
            modulation: spec.modulation,
            n0: spec.n0,
            mode,
        }
    }

    /// The same demapper after averaging `l` receptions of each symbol.
    pub fn combined(&self, l: usize) -> Self {
        Self {
            n0: self.n0 / l as f64,
            ..*self
        }
    }

    /// LLRs of 0-based `level` for every symbol of `y`, given the codewords
    /// already decided on the upper levels. Outputs are clipped.
    pub fn level_llrs(&self, y: &[Complex64], level: usize, decided: &[&[u8]], out: &mut [f64]) {
        assert_eq!(decided.len(), level);
        assert_eq!(y.len(), out.len());
        let n0 = self.n0.max(MIN_N0);
        match self.modulation {
            Modulation::Bpsk => {
                let pam = match self.mode {
                    LlrMode::Exact => pam_exact_fast,
                    LlrMode::Piecewise => pam_piecewise_fast,
                };
                for (o, s) in out.iter_mut().zip(y) {
                    *o = sanitize(pam(s.re, 1, 0, 2, n0));
                }
            }
            Modulation::Qam(_) => {
                let pair_start = level & !1;
                let mut ctx = vec![0u8; level];
                for (i, (o, &s)) in out.iter_mut().zip(y).enumerate() {
                    for (c, d) in ctx.iter_mut().zip(decided) {
                        *c = d[i];
                    }
                    let (li, lq) = iq_pair(s, &ctx[..pair_start], self.modulation, n0, self.mode);
                    let v = if level % 2 == 0 {
                        boxplus(li, lq)
                    } else if ctx[level - 1] & 1 == 0 {
                        li + lq
                    } else {
                        lq - li
                    };
                    *o = sanitize(v);
                }
            }
        }
    }
}
