//! CRC-16-CCITT over bit sequences.
//!
//! Polynomial 0x1021, register initialised to 0xFFFF, MSB-first, no
//! reflection and no final XOR (the "CCITT-FALSE" parameter set). The 16
//! check bits are appended MSB first.

pub const CRC16_POLY: u16 = 0x1021;
pub const CRC16_INIT: u16 = 0xFFFF;

/// A CRC over bit vectors. Width 0 disables checking.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crc {
    width: u32,
    poly: u32,
    init: u32,
}

impl Default for Crc {
    fn default() -> Self {
        Self::ccitt16()
    }
}

impl Crc {
    pub const fn ccitt16() -> Self {
        Self {
            width: 16,
            poly: CRC16_POLY as u32,
            init: CRC16_INIT as u32,
        }
    }

    /// Short CRC for small-block tests: CRC-8 with polynomial 0x07, init 0xFF.
    pub const fn crc8() -> Self {
        Self {
            width: 8,
            poly: 0x07,
            init: 0xFF,
        }
    }

    pub const fn none() -> Self {
        Self {
            width: 0,
            poly: 0,
            init: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.width as usize
    }

    pub fn is_empty(&self) -> bool {
        self.width == 0
    }

    fn mask(&self) -> u32 {
        if self.width == 0 {
            0
        } else {
            (1u32 << self.width) - 1
        }
    }

    /// Register value after shifting in `bits` (MSB-first).
    pub fn checksum_bits(&self, bits: &[u8]) -> u32 {
        if self.width == 0 {
            return 0;
        }
        let top = 1u32 << (self.width - 1);
        let mask = self.mask();
        let mut reg = self.init;
        for &b in bits {
            let fb = ((reg & top) != 0) ^ (b & 1 == 1);
            reg = (reg << 1) & mask;
            if fb {
                reg ^= self.poly;
            }
        }
        reg
    }

    pub fn checksum_bytes(&self, bytes: &[u8]) -> u32 {
        let bits: Vec<u8> = bytes
            .iter()
            .flat_map(|&byte| (0..8).rev().map(move |s| (byte >> s) & 1))
            .collect();
        self.checksum_bits(&bits)
    }

    pub fn append(&self, data: &[u8]) -> Vec<u8> {
        let c = self.checksum_bits(data);
        let mut out = Vec::with_capacity(data.len() + self.len());
        out.extend_from_slice(data);
        out.extend((0..self.width).rev().map(|s| ((c >> s) & 1) as u8));
        out
    }

    /// True if the trailing `len()` bits are the CRC of the rest.
    pub fn check(&self, word: &[u8]) -> bool {
        if self.width == 0 {
            return true;
        }
        if word.len() < self.len() {
            return false;
        }
        let (data, tail) = word.split_at(word.len() - self.len());
        let c = self.checksum_bits(data);
        tail.iter()
            .zip((0..self.width).rev())
            .all(|(&b, s)| u32::from(b & 1) == (c >> s) & 1)
    }
}

pub fn crc_append(data: &[u8]) -> Vec<u8> {
    Crc::ccitt16().append(data)
}

pub fn crc_check(word: &[u8]) -> bool {
    Crc::ccitt16().check(word)
}
