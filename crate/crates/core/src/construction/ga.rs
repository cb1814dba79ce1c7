//! Gaussian approximation of polar bit-channel reliabilities.
//!
//! Means are tracked in the natural decode order: the first split of the
//! recursion is the most significant bit of a channel index, 0 being the
//! degraded (check-node) branch. Small probabilities are carried in the log
//! domain so that sorting stays strict far below `f64` underflow.

use std::f64::consts::{PI, SQRT_2};

use crate::construction::reliability::ReliabilityVector;
use crate::error::{Error, Result};
use crate::polar::code::check_power_of_two;

const A: f64 = 0.4527;
const B: f64 = 0.86;
const C: f64 = 0.0218;
const BRANCH: f64 = 10.0;

/// `ln φ(h)` for `h ≥ 0`.
///
/// Below the branch point the fitted exponential is used, capped at 1 (the
/// fit exceeds 1 for `h < 0.03`). Above it, the asymptotic form
/// `√(π/h)·(1 − 10/(7h))·e^(−h/4)`.
pub fn ln_phi(h: f64) -> f64 {
    if h <= 0.0 {
        0.0
    } else if h <= BRANCH {
        (-A * h.powf(B) + C).min(0.0)
    } else {
        0.5 * (PI / h).ln() + (-10.0 / (7.0 * h)).ln_1p() - h / 4.0
    }
}

pub fn phi(h: f64) -> Result<f64> {
    if !(h >= 0.0) {
        return Err(Error::Domain {
            name: "h",
            value: h,
            domain: "[0, inf)",
        });
    }
    Ok(ln_phi(h).exp())
}

/// Inverse of [`ln_phi`]: the `h` with `ln φ(h) = ln_t`, by bisection. The
/// bracket starts at `[0, 1000]` and is doubled until it encloses the root.
pub fn phi_inv_ln(ln_t: f64) -> f64 {
    if ln_t >= 0.0 {
        return 0.0;
    }
    let mut lo = 0.0;
    let mut hi = 1000.0;
    while ln_phi(hi) > ln_t {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ln_phi(mid) > ln_t {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

pub fn phi_inv(t: f64) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::Domain {
            name: "t",
            value: t,
            domain: "(0, 1]",
        });
    }
    Ok(phi_inv_ln(t.ln()))
}

/// Gaussian tail `Q(x) = P(Z > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// `ln Q(x)`, accurate where `Q(x)` itself underflows.
pub fn ln_q(x: f64) -> f64 {
    if x < 35.0 {
        q_function(x).ln()
    } else {
        let r = 1.0 / (x * x);
        let series = 1.0 - r + 3.0 * r * r - 15.0 * r.powi(3) + 105.0 * r.powi(4);
        -0.5 * x * x - x.ln() - 0.5 * (2.0 * PI).ln() + series.ln()
    }
}

/// Mean LLR of the check-node combination of two channels with means `a`, `b`:
/// `φ⁻¹(1 − (1 − φ(a))(1 − φ(b)))`.
pub fn check_mean(a: f64, b: f64) -> f64 {
    let (la, lb) = (ln_phi(a), ln_phi(b));
    let (hi, lo) = if la >= lb { (la, lb) } else { (lb, la) };
    // t = φh(1 + φl/φh − φl)
    let r = (lo - hi).exp();
    phi_inv_ln(hi + (r - lo.exp()).ln_1p())
}

/// Terminal mean LLRs of all `n` bit-channels for a uniform channel mean.
pub fn ga_means(mean_llr: f64, n: usize) -> Result<Vec<f64>> {
    check_power_of_two(n)?;
    if !(mean_llr > 0.0) {
        return Err(Error::Domain {
            name: "mean_llr",
            value: mean_llr,
            domain: "(0, inf)",
        });
    }
    let mut stage = vec![mean_llr];
    while stage.len() < n {
        let mut next = Vec::with_capacity(2 * stage.len());
        for &m in &stage {
            next.push(check_mean(m, m));
            next.push(2.0 * m);
        }
        stage = next;
    }
    Ok(stage)
}

/// Genie-aided BERs `Q(√(λ/2))` of every bit-channel.
pub fn ga_ber(mean_llr: f64, n: usize) -> Result<ReliabilityVector> {
    Ok(from_means(ga_means(mean_llr, n)?))
}

/// GA over a code whose coded bits have individual means, e.g. zero for
/// punctured positions. Uniform input reproduces [`ga_ber`].
pub fn ga_ber_from_channel_means(channel_means: &[f64]) -> Result<ReliabilityVector> {
    check_power_of_two(channel_means.len())?;
    if let Some(&bad) = channel_means.iter().find(|m| !(**m >= 0.0)) {
        return Err(Error::Domain {
            name: "channel mean",
            value: bad,
            domain: "[0, inf)",
        });
    }
    let mut out = Vec::with_capacity(channel_means.len());
    split_means(channel_means, &mut out);
    Ok(from_means(out))
}

fn split_means(m: &[f64], out: &mut Vec<f64>) {
    if m.len() == 1 {
        out.push(m[0]);
        return;
    }
    let h = m.len() / 2;
    let (a, b) = m.split_at(h);
    let mut cache: Option<(f64, f64, f64)> = None;
    let left: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| match cache {
            Some((cx, cy, v)) if cx == x && cy == y => v,
            _ => {
                let v = check_mean(x, y);
                cache = Some((x, y, v));
                v
            }
        })
        .collect();
    let right: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
    split_means(&left, out);
    split_means(&right, out);
}

fn from_means(means: Vec<f64>) -> ReliabilityVector {
    let ln_v = means.iter().map(|&m| ln_q((m / 2.0).sqrt())).collect();
    ReliabilityVector::from_ln_with_means(ln_v, means)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn phi_values() {
        assert_eq!(phi(0.0).unwrap(), 1.0);
        let at10 = (-0.4527 * 10f64.powf(0.86) + 0.0218).exp();
        assert!((phi(10.0).unwrap() - at10).abs() < 1e-15);
        assert!((at10 - 0.0385).abs() < 1e-4);
        let at20 = (PI / 20.0).sqrt() * (1.0 - 10.0 / 140.0) * (-5.0f64).exp();
        assert!((phi(20.0).unwrap() - at20).abs() < 1e-15);
        assert!(phi(-1.0).is_err());
        assert!(phi(f64::NAN).is_err());
    }

    #[test]
    fn phi_branch_gap_is_small() {
        let below = phi(10.0).unwrap();
        let above = phi(10.0 + 1e-12).unwrap();
        assert!((above - below).abs() < 3e-2);
    }

    #[test]
    fn phi_decreasing_within_branches() {
        let grid: Vec<f64> = (1..=4000).map(|i| 0.03 + i as f64 * 0.0025).collect();
        for w in grid.windows(2) {
            if w[0] <= 10.0 && w[1] <= 10.0 || w[0] > 10.0 {
                assert!(ln_phi(w[1]) < ln_phi(w[0]), "at {}", w[0]);
            }
        }
        for h in [11.0, 50.0, 400.0, 5000.0, 1e6] {
            assert!(ln_phi(h * 1.001) < ln_phi(h));
        }
    }

    #[test]
    fn phi_inv_values() {
        assert_eq!(phi_inv(1.0).unwrap(), 0.0);
        assert!((phi_inv(phi(4.0).unwrap()).unwrap() - 4.0).abs() < 1e-6);
        assert!((phi_inv(0.4069).unwrap() - 2.28).abs() < 0.01);
        assert!(phi_inv(0.0).is_err());
        assert!(phi_inv(1.5).is_err());
        let h = phi_inv(0.4069).unwrap();
        assert!((phi(h).unwrap() - 0.4069).abs() <= 1e-10);
    }

    #[test]
    fn phi_inv_far_tail() {
        for h in [2000.0, 3.0e4, 7.7e5] {
            let back = phi_inv_ln(ln_phi(h));
            assert!((back - h).abs() <= 1e-8 * h);
        }
    }

    #[test]
    fn q_tail() {
        assert!((q_function(0.0) - 0.5).abs() < 1e-15);
        assert!((q_function(1.0) - 0.158_655_253_931_457).abs() < 1e-13);
        // the asymptotic branch meets erfc smoothly
        let a = q_function(34.999_999).ln();
        let b = ln_q(35.0);
        assert!((a - b).abs() < 1e-4);
        assert!(ln_q(100.0).is_finite() && ln_q(1000.0) < ln_q(100.0));
    }

    #[test]
    fn single_channel() {
        let v = ga_ber(3.0, 1).unwrap();
        assert!((v.ber(0) - q_function((1.5f64).sqrt())).abs() < 1e-15);
    }

    #[test]
    fn two_channels_by_hand() {
        let m = ga_means(4.0, 2).unwrap();
        assert_eq!(m[1], 8.0);
        let p = phi(4.0).unwrap();
        let upper = phi_inv(1.0 - (1.0 - p) * (1.0 - p)).unwrap();
        assert!((m[0] - upper).abs() < 1e-9);
        assert!((m[0] - 2.28).abs() < 0.01);
        let v = ga_ber(4.0, 2).unwrap();
        assert!((v.ber(0) - q_function((m[0] / 2.0).sqrt())).abs() < 1e-15);
        assert!((v.ber(1) - q_function(2.0)).abs() < 1e-15);
    }

    #[test]
    fn lower_branch_doubles() {
        let m4 = ga_means(1.7, 4).unwrap();
        let m2 = ga_means(1.7, 2).unwrap();
        assert_eq!(m4[1], 2.0 * m2[0]);
        assert_eq!(m4[3], 2.0 * m2[1]);
    }

    #[test]
    fn vector_form_matches_uniform() {
        for n in [1usize, 2, 16, 256] {
            let a = ga_means(2.5, n).unwrap();
            let b = ga_ber_from_channel_means(&vec![2.5; n]).unwrap();
            for (x, y) in a.iter().zip(b.means().unwrap()) {
                assert!((x - y).abs() <= 1e-9 * x.max(1.0));
            }
        }
    }

    #[test]
    fn punctured_positions_give_useless_channels() {
        let mut means = vec![3.0; 16];
        means[..4].fill(0.0);
        let v = ga_ber_from_channel_means(&means).unwrap();
        let useless = v.means().unwrap().iter().filter(|&&m| m == 0.0).count();
        assert_eq!(useless, 4);
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert_eq!(ga_ber(1.0, 12).unwrap_err(), Error::NotPowerOfTwo(12));
        assert!(ga_ber(0.0, 4).is_err());
    }

    proptest! {
        #[test]
        fn phi_round_trip(h in 0.05f64..5000.0) {
            prop_assume!(!(9.9..10.3).contains(&h));
            let back = phi_inv_ln(ln_phi(h));
            prop_assert!((back - h).abs() <= 1e-8 * h);
        }

        #[test]
        fn check_mean_is_degraded(a in 0.01f64..500.0, b in 0.01f64..500.0) {
            let m = check_mean(a, b);
            let lo = a.min(b);
            // φ is not injective across its branch gap, so inversion can land
            // anywhere in the window the round trip excludes
            let bound = if (9.9..10.3).contains(&lo) { 10.35 } else { lo * (1.0 + 1e-9) + 0.05 };
            prop_assert!(m <= bound);
        }
    }
}
