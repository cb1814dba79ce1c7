use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Signal set. Points sit on the odd-integer lattice; SNR is applied through
/// the noise density, never by scaling the points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Modulation {
    /// Real ±1, one bit per channel use.
    Bpsk,
    /// Square 2^B-QAM with set-partitioned labels, B even.
    Qam(usize),
}

impl Modulation {
    pub fn qam(bits: usize) -> Result<Self> {
        if bits == 0 || bits % 2 == 1 {
            return Err(Error::OddBitsPerSymbol(bits));
        }
        Ok(Modulation::Qam(bits))
    }

    pub fn bits_per_symbol(self) -> usize {
        match self {
            Modulation::Bpsk => 1,
            Modulation::Qam(b) => b,
        }
    }

    /// Points per real dimension.
    pub fn pam_order(self) -> usize {
        match self {
            Modulation::Bpsk => 2,
            Modulation::Qam(b) => 1 << (b / 2),
        }
    }

    /// PAM levels per dimension.
    pub fn pam_levels(self) -> usize {
        match self {
            Modulation::Bpsk => 1,
            Modulation::Qam(b) => b / 2,
        }
    }

    /// Average symbol energy `E|x|²`.
    pub fn es(self) -> f64 {
        let m = self.pam_order() as f64;
        let per_dim = (m * m - 1.0) / 3.0;
        match self {
            Modulation::Bpsk => per_dim,
            Modulation::Qam(_) => 2.0 * per_dim,
        }
    }

    pub fn is_complex(self) -> bool {
        matches!(self, Modulation::Qam(_))
    }

    pub fn name(self) -> String {
        match self {
            Modulation::Bpsk => "bpsk".into(),
            Modulation::Qam(b) => format!("qam{}", 1usize << b),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bpsk" => Ok(Modulation::Bpsk),
            "qpsk" | "qam4" => Ok(Modulation::Qam(2)),
            "qam16" => Ok(Modulation::Qam(4)),
            "qam64" => Ok(Modulation::Qam(6)),
            "qam256" => Ok(Modulation::Qam(8)),
            other => Err(Error::InvalidParameter(format!(
                "unknown modulation {other:?}"
            ))),
        }
    }
}

/// A modulation together with its operating noise level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstellationSpec {
    pub modulation: Modulation,
    /// Noise spectral density; the noise variance is `n0 / 2` per dimension.
    pub n0: f64,
}

impl ConstellationSpec {
    /// `γ = Es/N0` in dB. `+∞` gives a noiseless channel.
    pub fn at_snr_db(modulation: Modulation, gamma_db: f64) -> Self {
        Self {
            modulation,
            n0: n0_for_snr(modulation.es(), gamma_db),
        }
    }

    pub fn snr_db(&self) -> f64 {
        10.0 * (self.modulation.es() / self.n0).log10()
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.modulation.bits_per_symbol()
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn n0_for_snr(es: f64, gamma_db: f64) -> f64 {
    es / db_to_linear(gamma_db)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energies_match_enumeration() {
        use crate::modem::mapping::qam_map;
        for b in [2usize, 4, 6, 8] {
            let m = Modulation::Qam(b);
            let mean = (0..1usize << b)
                .map(|v| {
                    let c: Vec<u8> = (0..b).map(|k| ((v >> k) & 1) as u8).collect();
                    qam_map(&c).unwrap().norm_sqr()
                })
                .sum::<f64>()
                / (1u64 << b) as f64;
            assert!((mean - m.es()).abs() < 1e-12, "B={b}");
        }
        assert_eq!(Modulation::Bpsk.es(), 1.0);
        assert_eq!(Modulation::Qam(4).es(), 10.0);
    }

    #[test]
    fn odd_bits_rejected() {
        assert_eq!(Modulation::qam(3), Err(Error::OddBitsPerSymbol(3)));
        assert_eq!(Modulation::qam(0), Err(Error::OddBitsPerSymbol(0)));
    }

    #[test]
    fn snr_round_trip() {
        let c = ConstellationSpec::at_snr_db(Modulation::Qam(4), 4.0);
        assert!((c.snr_db() - 4.0).abs() < 1e-12);
        assert_eq!(
            ConstellationSpec::at_snr_db(Modulation::Bpsk, f64::INFINITY).n0,
            0.0
        );
    }

    #[test]
    fn names_parse_back() {
        for m in [
            Modulation::Bpsk,
            Modulation::Qam(2),
            Modulation::Qam(4),
            Modulation::Qam(6),
        ] {
            assert_eq!(Modulation::parse(&m.name()).unwrap(), m);
        }
    }
}
