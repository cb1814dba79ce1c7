//! Complex AWGN.

use num_complex::Complex64;

use crate::rng::{gaussian, TrialRng};

/// `out = x + w` with circular Gaussian `w`, variance `n0/2` per dimension.
/// `n0 = 0` passes `x` through unchanged.
pub fn awgn(x: &[Complex64], n0: f64, rng: &mut TrialRng, out: &mut [Complex64]) {
    assert_eq!(x.len(), out.len());
    if n0 == 0.0 {
        out.copy_from_slice(x);
        return;
    }
    let s = (n0 / 2.0).sqrt();
    for (o, &xi) in out.iter_mut().zip(x) {
        let re = gaussian(rng);
        let im = gaussian(rng);
        *o = xi + Complex64::new(s * re, s * im);
    }
}
