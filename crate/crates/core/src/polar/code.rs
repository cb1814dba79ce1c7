use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One binary polar code of length `N`.
///
/// Bit-channels are indexed `0..N` in successive-cancellation decode order
/// with the natural (non bit-reversed) transform `x = u · F^{⊗n}`,
/// `F = [[1,0],[1,1]]`. In this convention the most significant bit of a
/// channel index selects the first polarization split (0 = degraded), which
/// is the same indexing the Gaussian-approximation recursion produces.
///
/// `sorted_channels` lists every channel from most to least reliable; the
/// information set is its first `k` entries, so codes built from one ordering
/// are nested in `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct PolarCodeSpec {
    n: usize,
    sorted_channels: Vec<usize>,
    k: usize,
    frozen: Vec<bool>,
    info_positions: Vec<usize>,
    // info_prefix[i] = number of information channels among 0..i
    info_prefix: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    n_block: usize,
    sorted_channels: Vec<usize>,
    k_info: usize,
}

impl TryFrom<RawSpec> for PolarCodeSpec {
    type Error = Error;
    fn try_from(r: RawSpec) -> Result<Self> {
        PolarCodeSpec::new(r.n_block, r.sorted_channels, r.k_info)
    }
}

impl From<PolarCodeSpec> for RawSpec {
    fn from(s: PolarCodeSpec) -> Self {
        RawSpec {
            n_block: s.n,
            sorted_channels: s.sorted_channels,
            k_info: s.k,
        }
    }
}

pub(crate) fn check_power_of_two(n: usize) -> Result<()> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    Ok(())
}

impl PolarCodeSpec {
    pub fn new(n: usize, sorted_channels: Vec<usize>, k: usize) -> Result<Self> {
        check_power_of_two(n)?;
        if sorted_channels.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: sorted_channels.len(),
            });
        }
        let mut seen = vec![false; n];
        for &c in &sorted_channels {
            if c >= n || seen[c] {
                return Err(Error::NotAPermutation(n));
            }
            seen[c] = true;
        }
        if k > n {
            return Err(Error::InfoLengthTooLarge { k, n });
        }
        let mut frozen = vec![true; n];
        for &c in &sorted_channels[..k] {
            frozen[c] = false;
        }
        let info_positions: Vec<usize> = (0..n).filter(|&i| !frozen[i]).collect();
        let mut info_prefix = Vec::with_capacity(n + 1);
        let mut acc = 0u32;
        info_prefix.push(0);
        for &f in &frozen {
            acc += u32::from(!f);
            info_prefix.push(acc);
        }
        Ok(Self {
            n,
            sorted_channels,
            k,
            frozen,
            info_positions,
            info_prefix,
        })
    }

    /// Same channel ordering with a different information length.
    pub fn with_k(&self, k: usize) -> Result<Self> {
        Self::new(self.n, self.sorted_channels.clone(), k)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn sorted_channels(&self) -> &[usize] {
        &self.sorted_channels
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen[i]
    }

    pub fn frozen_mask(&self) -> &[bool] {
        &self.frozen
    }

    /// Information channels in ascending (decode) order. Message bit `j` is
    /// carried by `info_positions()[j]`.
    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    pub(crate) fn info_count(&self, start: usize, len: usize) -> u32 {
        self.info_prefix[start + len] - self.info_prefix[start]
    }

    /// Places `message` on the information channels; frozen channels are 0.
    pub fn embed(&self, message: &[u8]) -> Result<Vec<u8>> {
        if message.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                actual: message.len(),
            });
        }
        let mut u = vec![0u8; self.n];
        for (&p, &b) in self.info_positions.iter().zip(message) {
            u[p] = b & 1;
        }
        Ok(u)
    }

    /// Reads the information channels back out of a full-length `u`.
    pub fn extract(&self, u: &[u8]) -> Vec<u8> {
        self.info_positions.iter().map(|&p| u[p]).collect()
    }

    pub fn encode_message(&self, message: &[u8]) -> Result<Vec<u8>> {
        let mut x = self.embed(message)?;
        polar_transform_in_place(&mut x);
        Ok(x)
    }
}

/// `x = u · F^{⊗n}` over GF(2).
///
/// Requires zeros on frozen positions only in the sense that the caller
/// decides what `u` is; the transform itself is defined for any input.
pub fn encode(u: &[u8]) -> Result<Vec<u8>> {
    check_power_of_two(u.len())?;
    let mut x = u.to_vec();
    polar_transform_in_place(&mut x);
    Ok(x)
}

/// In-place butterfly. The transform is an involution, so applying it to a
/// codeword recovers `u`.
pub fn polar_transform_in_place(x: &mut [u8]) {
    let n = x.len();
    debug_assert!(n.is_power_of_two());
    let mut half = 1;
    while half < n {
        for block in x.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= *b;
            }
        }
        half *= 2;
    }
}
