use crate::error::{Error, Result};

/// Genie-aided bit-channel error probabilities, stored as natural logs.
#[derive(Debug, Clone, PartialEq)]
pub struct ReliabilityVector {
    ln_v: Vec<f64>,
    means: Option<Vec<f64>>,
}

impl ReliabilityVector {
    /// From plain probabilities; each must lie in `(0, 1)`.
    pub fn from_ber(v: &[f64]) -> Result<Self> {
        if let Some(&bad) = v.iter().find(|&&x| !(x > 0.0 && x < 1.0)) {
            return Err(Error::Domain {
                name: "bit-channel BER",
                value: bad,
                domain: "(0, 1)",
            });
        }
        Ok(Self {
            ln_v: v.iter().map(|x| x.ln()).collect(),
            means: None,
        })
    }

    pub fn from_ln(ln_v: Vec<f64>) -> Self {
        Self { ln_v, means: None }
    }

    pub(crate) fn from_ln_with_means(ln_v: Vec<f64>, means: Vec<f64>) -> Self {
        Self {
            ln_v,
            means: Some(means),
        }
    }

    /// Joins several vectors; channel `i` of part `p` lands at `offset(p) + i`.
    pub fn concat(parts: &[ReliabilityVector]) -> Self {
        let ln_v = parts.iter().flat_map(|p| p.ln_v.iter().copied()).collect();
        let means = parts
            .iter()
            .map(|p| p.means.clone())
            .collect::<Option<Vec<_>>>()
            .map(|m| m.concat());
        Self { ln_v, means }
    }

    pub fn len(&self) -> usize {
        self.ln_v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ln_v.is_empty()
    }

    pub fn ber(&self, i: usize) -> f64 {
        self.ln_v[i].exp()
    }

    pub fn ln_ber(&self) -> &[f64] {
        &self.ln_v
    }

    pub fn to_ber(&self) -> Vec<f64> {
        self.ln_v.iter().map(|x| x.exp()).collect()
    }

    /// Mean LLRs the probabilities were derived from, when known.
    pub fn means(&self) -> Option<&[f64]> {
        self.means.as_deref()
    }
}
