//! CRC-aided successive-cancellation list decoding.
//!
//! Paths are never copied. Each tree node reports, for every path slot that
//! leaves it, the slot it entered from (`origin`). Parents read their own
//! per-path state through that map, so forking costs nothing beyond the
//! normal `L · N log N` LLR work.

use super::code::{check_power_of_two, polar_transform_in_place, PolarCodeSpec};
use super::crc::Crc;
use super::kernel::{clip, g, softplus, CheckNode};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct SclDecoder {
    n: usize,
    list: usize,
    kernel: CheckNode,
    chan: Vec<f64>,
    // node size s, path j: alpha[s*L + j*s ..][..s], for s < n
    alpha: Vec<f64>,
    // node size s, path j: beta[s*L + j*s ..][..s], for s <= n
    beta: Vec<u8>,
    // left-child partial sums held by the node of size s (first s/2 of each row)
    left: Vec<u8>,
    // per depth d: origin[d*L..][..L]
    origin: Vec<usize>,
    scratch: Vec<usize>,
    pm: Vec<f64>,
    active: usize,
    cand: Vec<(f64, usize, u8)>,
}

/// A surviving path after decoding.
#[derive(Debug, Clone, PartialEq)]
pub struct ListCandidate {
    pub metric: f64,
    pub message: Vec<u8>,
    pub codeword: Vec<u8>,
}

impl SclDecoder {
    pub fn new(n: usize, list: usize) -> Result<Self> {
        Self::with_kernel(n, list, CheckNode::Exact)
    }

    pub fn with_kernel(n: usize, list: usize, kernel: CheckNode) -> Result<Self> {
        check_power_of_two(n)?;
        if list == 0 {
            return Err(Error::ZeroListSize);
        }
        let depth = n.trailing_zeros() as usize + 1;
        Ok(Self {
            n,
            list,
            kernel,
            chan: vec![0.0; n],
            alpha: vec![0.0; n * list],
            beta: vec![0; 2 * n * list],
            left: vec![0; 2 * n * list],
            origin: vec![0; depth * list],
            scratch: vec![0; list],
            pm: vec![0.0; list],
            active: 0,
            cand: Vec::with_capacity(2 * list),
        })
    }

    pub fn list_size(&self) -> usize {
        self.list
    }

    /// Runs the list search; survivors are then read with [`Self::ranked`]
    /// and [`Self::codeword`].
    pub fn run(&mut self, code: &PolarCodeSpec, llr: &[f64]) -> Result<()> {
        if code.n() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: code.n(),
            });
        }
        if llr.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: llr.len(),
            });
        }
        for (c, &l) in self.chan.iter_mut().zip(llr) {
            *c = clip(l);
        }
        self.active = 1;
        self.pm[0] = 0.0;
        self.node(self.n, 0, code);
        Ok(())
    }

    /// Surviving path slots, best (lowest metric) first; ties go to the lower
    /// slot.
    pub fn ranked(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.active).collect();
        idx.sort_by(|&a, &b| self.pm[a].total_cmp(&self.pm[b]).then(a.cmp(&b)));
        idx
    }

    pub fn metric(&self, slot: usize) -> f64 {
        self.pm[slot]
    }

    pub fn codeword(&self, slot: usize) -> &[u8] {
        let off = self.n * self.list + slot * self.n;
        &self.beta[off..off + self.n]
    }

    pub fn candidate(&self, code: &PolarCodeSpec, slot: usize) -> ListCandidate {
        let codeword = self.codeword(slot).to_vec();
        let mut u = codeword.clone();
        polar_transform_in_place(&mut u);
        ListCandidate {
            metric: self.pm[slot],
            message: code.extract(&u),
            codeword,
        }
    }

    /// Best surviving path accepted by `accept` (called on the message bits
    /// in rank order), or `None` when every survivor is rejected.
    pub fn decode_with<F>(
        &mut self,
        code: &PolarCodeSpec,
        llr: &[f64],
        mut accept: F,
    ) -> Result<Option<ListCandidate>>
    where
        F: FnMut(&[u8]) -> bool,
    {
        self.run(code, llr)?;
        for slot in self.ranked() {
            let c = self.candidate(code, slot);
            if accept(&c.message) {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }

    /// Most likely path whose CRC checks; `None` is a detected failure. With
    /// an empty CRC the most likely path is returned.
    pub fn decode(
        &mut self,
        code: &PolarCodeSpec,
        llr: &[f64],
        crc: &Crc,
    ) -> Result<Option<Vec<u8>>> {
        if code.k() < crc.len() {
            return Err(Error::CrcLongerThanMessage {
                k: code.k(),
                crc: crc.len(),
            });
        }
        Ok(self
            .decode_with(code, llr, |m| crc.check(m))?
            .map(|c| c.message))
    }

    fn leaf(&mut self, i: usize, code: &PolarCodeSpec) {
        let l = self.list;
        let a = self.active;
        let read = |me: &Self, j: usize| -> f64 {
            if me.n == 1 {
                me.chan[0]
            } else {
                me.alpha[l + j]
            }
        };
        if code.is_frozen(i) {
            for j in 0..a {
                let llr = read(self, j);
                self.pm[j] += softplus(-llr);
                self.beta[l + j] = 0;
                self.origin[j] = j;
            }
            return;
        }
        self.cand.clear();
        for j in 0..a {
            let llr = read(self, j);
            self.cand.push((self.pm[j] + softplus(-llr), j, 0));
            self.cand.push((self.pm[j] + softplus(llr), j, 1));
        }
        self.cand
            .sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
        let keep = self.cand.len().min(l);
        for t in 0..keep {
            let (m, j, b) = self.cand[t];
            self.pm[t] = m;
            self.beta[l + t] = b;
            self.origin[t] = j;
        }
        self.active = keep;
    }

    fn node(&mut self, s: usize, start: usize, code: &PolarCodeSpec) {
        if s == 1 {
            self.leaf(start, code);
            return;
        }
        let n = self.n;
        let l = self.list;
        let h = s / 2;
        let d = s.trailing_zeros() as usize;
        let kernel = self.kernel;

        // f for every entering path
        {
            let a = self.active;
            let (lo, hi) = self.alpha.split_at_mut(s.min(n) * l);
            for j in 0..a {
                let parent: &[f64] = if s == n {
                    &self.chan
                } else {
                    &hi[j * s..(j + 1) * s]
                };
                let child = &mut lo[h * l + j * h..h * l + (j + 1) * h];
                for i in 0..h {
                    child[i] = kernel.f(parent[i], parent[i + h]);
                }
            }
        }
        self.node(h, start, code);
        // origin of the left child now sits at depth d-1; keep it at depth d
        let a1 = self.active;
        self.origin
            .copy_within((d - 1) * l..(d - 1) * l + a1, d * l);

        // g for every path leaving the left child, reading the parent row it
        // came from; stash the left partial sums
        {
            let (lo, hi) = self.alpha.split_at_mut(s.min(n) * l);
            for j in 0..a1 {
                let p = self.origin[d * l + j];
                let parent: &[f64] = if s == n {
                    &self.chan
                } else {
                    &hi[p * s..(p + 1) * s]
                };
                let left_bits = &self.beta[h * l + j * h..h * l + (j + 1) * h];
                let child = &mut lo[h * l + j * h..h * l + (j + 1) * h];
                for i in 0..h {
                    child[i] = g(parent[i], parent[i + h], left_bits[i]);
                }
                self.left[s * l + j * s..s * l + j * s + h].copy_from_slice(left_bits);
            }
        }
        self.node(h, start + h, code);
        let a2 = self.active;

        // combine partial sums and compose the origin maps
        {
            let (blo, bhi) = self.beta.split_at_mut(s * l);
            for j in 0..a2 {
                let q = self.origin[(d - 1) * l + j];
                let right = &blo[h * l + j * h..h * l + (j + 1) * h];
                let stash = &self.left[s * l + q * s..s * l + q * s + h];
                let row = &mut bhi[j * s..(j + 1) * s];
                let (first, second) = row.split_at_mut(h);
                for i in 0..h {
                    first[i] = stash[i] ^ right[i];
                    second[i] = right[i];
                }
            }
        }
        for j in 0..a2 {
            let q = self.origin[(d - 1) * l + j];
            self.scratch[j] = self.origin[d * l + q];
        }
        self.origin[d * l..d * l + a2].copy_from_slice(&self.scratch[..a2]);
    }
}

/// One-shot CRC-aided list decode.
pub fn scld_decode(
    llr: &[f64],
    code: &PolarCodeSpec,
    list_size: usize,
    crc: &Crc,
) -> Result<Option<Vec<u8>>> {
    SclDecoder::new(code.n(), list_size)?.decode(code, llr, crc)
}
