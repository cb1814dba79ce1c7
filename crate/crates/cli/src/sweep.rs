use anyhow::{bail, Context, Result};

/// Parses `x`, `a:step:b` (inclusive of `b` up to rounding) or `inf`.
pub fn parse_snr_sweep(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| -> Result<f64> {
        let v: f64 = t
            .trim()
            .parse()
            .with_context(|| format!("{t:?} is not a number"))?;
        if v.is_nan() {
            bail!("SNR must not be NaN");
        }
        Ok(v)
    };
    match parts.as_slice() {
        [x] => Ok(vec![num(x)?]),
        [a, step, b] => {
            let (a, step, b) = (num(a)?, num(step)?, num(b)?);
            if !(a.is_finite() && b.is_finite() && step.is_finite()) {
                bail!("sweep bounds and step must be finite");
            }
            if step <= 0.0 || b < a {
                bail!("sweep {s:?} needs a positive step and a <= b");
            }
            let count = ((b - a) / step + 1e-9).floor() as usize + 1;
            if count > 100_000 {
                bail!("sweep {s:?} has too many points");
            }
            // computed from the index so no rounding accumulates
            Ok((0..count).map(|i| a + i as f64 * step).collect())
        }
        _ => bail!("expected an SNR value or a:step:b, got {s:?}"),
    }
}
