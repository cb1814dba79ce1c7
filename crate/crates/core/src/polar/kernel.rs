use crate::modem::llr::boxplus;

/// Decoder input magnitudes are clipped here; beyond it hard decisions do
/// not change and the tanh-domain check node stays finite.
pub const LLR_CLIP: f64 = 300.0;

/// Check-node (f) update used by the SC family.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum CheckNode {
    /// `2 atanh(tanh(a/2) tanh(b/2))`.
    #[default]
    Exact,
    /// `sign(a) sign(b) min(|a|, |b|)`.
    MinSum,
}

impl CheckNode {
    #[inline]
    pub fn f(self, a: f64, b: f64) -> f64 {
        match self {
            CheckNode::Exact => boxplus(a, b),
            CheckNode::MinSum => {
                let m = a.abs().min(b.abs());
                if (a < 0.0) != (b < 0.0) {
                    -m
                } else {
                    m
                }
            }
        }
    }
}

/// Variable-node (g) update given the partial-sum bit of the left branch.
#[inline]
pub fn g(a: f64, b: f64, left_bit: u8) -> f64 {
    if left_bit & 1 == 0 {
        b + a
    } else {
        b - a
    }
}

#[inline]
pub fn clip(l: f64) -> f64 {
    l.clamp(-LLR_CLIP, LLR_CLIP)
}

/// `ln(1 + e^x)` without overflow.
#[inline]
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}
