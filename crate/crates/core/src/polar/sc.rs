use super::code::{check_power_of_two, PolarCodeSpec};
use super::kernel::{clip, g, CheckNode};
use crate::error::{Error, Result};

/// Leaf policy for the shared SC recursion.
trait Leaf {
    fn decide(&mut self, i: usize, llr: f64) -> u8;
    /// Whole subtree frozen: its partial sums are zero and nothing needs
    /// computing below it.
    fn skip(&self, start: usize, len: usize) -> bool;
}

struct CodeLeaf<'a> {
    code: &'a PolarCodeSpec,
}

impl Leaf for CodeLeaf<'_> {
    #[inline]
    fn decide(&mut self, i: usize, llr: f64) -> u8 {
        if self.code.is_frozen(i) {
            0
        } else {
            u8::from(llr < 0.0)
        }
    }
    fn skip(&self, start: usize, len: usize) -> bool {
        self.code.info_count(start, len) == 0
    }
}

struct GenieLeaf<'a> {
    truth: &'a [u8],
    events: Vec<usize>,
}

impl Leaf for GenieLeaf<'_> {
    #[inline]
    fn decide(&mut self, i: usize, llr: f64) -> u8 {
        let hard = u8::from(llr < 0.0);
        let t = self.truth[i] & 1;
        if hard != t {
            self.events.push(i);
        }
        t
    }
    fn skip(&self, _: usize, _: usize) -> bool {
        false
    }
}

/// Successive-cancellation decoder with reusable scratch buffers.
///
/// One instance per worker; the code itself is passed per call.
#[derive(Debug, Clone)]
pub struct ScDecoder {
    n: usize,
    kernel: CheckNode,
    chan: Vec<f64>,
    // LLRs of the node of size s live in alpha[s..2s] (s < n)
    alpha: Vec<f64>,
    // partial sums of the node of size s live in beta[s..2s] (s <= n)
    beta: Vec<u8>,
    u: Vec<u8>,
}

impl ScDecoder {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_kernel(n, CheckNode::Exact)
    }

    pub fn with_kernel(n: usize, kernel: CheckNode) -> Result<Self> {
        check_power_of_two(n)?;
        Ok(Self {
            n,
            kernel,
            chan: vec![0.0; n],
            alpha: vec![0.0; n],
            beta: vec![0; 2 * n],
            u: vec![0; n],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn load(&mut self, llr: &[f64]) -> Result<()> {
        if llr.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: llr.len(),
            });
        }
        for (c, &l) in self.chan.iter_mut().zip(llr) {
            *c = clip(l);
        }
        self.u.iter_mut().for_each(|b| *b = 0);
        Ok(())
    }

    /// Decodes and returns the message (information bits in ascending
    /// channel order).
    pub fn decode(&mut self, code: &PolarCodeSpec, llr: &[f64]) -> Result<Vec<u8>> {
        self.run(code, llr)?;
        Ok(code.extract(&self.u))
    }

    /// Decodes and returns the full estimated `u` and the re-encoded codeword.
    pub fn run(&mut self, code: &PolarCodeSpec, llr: &[f64]) -> Result<(&[u8], &[u8])> {
        if code.n() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: code.n(),
            });
        }
        self.load(llr)?;
        let mut leaf = CodeLeaf { code };
        self.node(self.n, 0, &mut leaf);
        Ok((&self.u, &self.beta[self.n..]))
    }

    /// Genie-aided pass over all `N` channels: every wrong hard decision is
    /// recorded and replaced by the true bit before decoding continues.
    /// Returns the first-error channel indices in ascending order.
    pub fn genie(&mut self, llr: &[f64], true_u: &[u8]) -> Result<Vec<usize>> {
        if true_u.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: true_u.len(),
            });
        }
        self.load(llr)?;
        let mut leaf = GenieLeaf {
            truth: true_u,
            events: Vec::new(),
        };
        self.node(self.n, 0, &mut leaf);
        Ok(leaf.events)
    }

    fn node<L: Leaf>(&mut self, s: usize, start: usize, leaf: &mut L) {
        let n = self.n;
        if s == 1 {
            let l = if n == 1 { self.chan[0] } else { self.alpha[1] };
            let b = leaf.decide(start, l);
            self.u[start] = b;
            self.beta[1] = b;
            return;
        }
        if leaf.skip(start, s) {
            self.beta[s..2 * s].iter_mut().for_each(|b| *b = 0);
            return;
        }
        let h = s / 2;
        let kernel = self.kernel;
        {
            let (lo, hi) = self.alpha.split_at_mut(s.min(n));
            let parent: &[f64] = if s == n { &self.chan } else { &hi[..s] };
            let child = &mut lo[h..s];
            for i in 0..h {
                child[i] = kernel.f(parent[i], parent[i + h]);
            }
        }
        self.node(h, start, leaf);
        {
            let (blo, bhi) = self.beta.split_at_mut(s);
            let left = &blo[h..s];
            bhi[..h].copy_from_slice(left);
            let (lo, hi) = self.alpha.split_at_mut(s.min(n));
            let parent: &[f64] = if s == n { &self.chan } else { &hi[..s] };
            let child = &mut lo[h..s];
            for i in 0..h {
                child[i] = g(parent[i], parent[i + h], left[i]);
            }
        }
        self.node(h, start + h, leaf);
        let (blo, bhi) = self.beta.split_at_mut(s);
        let right = &blo[h..s];
        let (first, second) = bhi[..s].split_at_mut(h);
        for i in 0..h {
            first[i] ^= right[i];
            second[i] = right[i];
        }
    }
}

/// One-shot SC decode.
pub fn scd_decode(llr: &[f64], code: &PolarCodeSpec) -> Result<Vec<u8>> {
    ScDecoder::new(code.n())?.decode(code, llr)
}

/// One-shot genie-aided SC pass.
pub fn genie_scd_decode(llr: &[f64], true_u: &[u8]) -> Result<Vec<usize>> {
    ScDecoder::new(llr.len())?.genie(llr, true_u)
}
