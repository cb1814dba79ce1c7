//! The versioned JSON code file.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, ensure, Context, Result};
use polarthru::mlpcm::{MlpcmSpec, Protocol};
use polarthru::modem::Modulation;
use polarthru::polar::PolarCodeSpec;
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum DesignMethod {
    #[serde(rename = "GA")]
    #[value(name = "ga")]
    Ga,
    #[serde(rename = "SIM")]
    #[value(name = "sim")]
    Sim,
}

/// Channel order: one joint order over all `B·N` channels for
/// level-dependent codes, or one order per level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SortedChannels {
    Joint(Vec<usize>),
    PerLevel(Vec<Vec<usize>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KField {
    pub per_level: Vec<usize>,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeFile {
    pub format_version: u32,
    /// `BPSK` or `QAM-<M>`.
    pub modulation: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "B")]
    pub b: usize,
    pub snr_db: f64,
    pub protocol: Protocol,
    pub design_method: DesignMethod,
    /// Optional only so that a missing order is reported clearly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sorted_channels: Option<SortedChannels>,
    #[serde(rename = "K")]
    pub k: KField,
    /// Bits per channel use per level.
    pub predicted_throughput: f64,
    /// First-transmission FER of each level.
    pub predicted_fer: Vec<f64>,
    pub level_mean_llr: Vec<f64>,
    /// List size the lengths were rate-matched for, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate_matched_list: Option<usize>,
}

pub fn modulation_label(m: Modulation) -> String {
    match m {
        Modulation::Bpsk => "BPSK".into(),
        Modulation::Qam(b) => format!("QAM-{}", 1usize << b),
    }
}

pub fn parse_modulation_label(s: &str) -> Result<Modulation> {
    if s == "BPSK" {
        return Ok(Modulation::Bpsk);
    }
    let m: usize = s
        .strip_prefix("QAM-")
        .and_then(|m| m.parse().ok())
        .ok_or_else(|| anyhow!("unknown modulation {s:?} in code file"))?;
    ensure!(
        m >= 4 && m.is_power_of_two(),
        "QAM order {m} is not a power of two"
    );
    Ok(Modulation::qam(m.trailing_zeros() as usize)?)
}

impl CodeFile {
    pub fn from_spec(spec: &MlpcmSpec, method: DesignMethod) -> Self {
        let sorted = match &spec.joint_order {
            Some(j) => SortedChannels::Joint(j.clone()),
            None => SortedChannels::PerLevel(
                spec.levels
                    .iter()
                    .map(|c| c.sorted_channels().to_vec())
                    .collect(),
            ),
        };
        Self {
            format_version: FORMAT_VERSION,
            modulation: modulation_label(spec.modulation),
            n: spec.n,
            b: spec.bits_per_symbol(),
            snr_db: spec.design_snr_db,
            protocol: spec.protocol,
            design_method: method,
            sorted_channels: Some(sorted),
            k: KField {
                per_level: spec.level_k(),
                total: spec.total_k(),
            },
            predicted_throughput: spec.predicted_throughput,
            predicted_fer: spec.level_fer.clone(),
            level_mean_llr: spec.level_means.clone(),
            rate_matched_list: None,
        }
    }

    pub fn to_spec(&self) -> Result<MlpcmSpec> {
        ensure!(
            self.format_version == FORMAT_VERSION,
            "unsupported code file version {} (expected {FORMAT_VERSION})",
            self.format_version
        );
        let modulation = parse_modulation_label(&self.modulation)?;
        ensure!(
            modulation.bits_per_symbol() == self.b,
            "B = {} disagrees with {}",
            self.b,
            self.modulation
        );
        ensure!(
            self.n >= 2 && self.n.is_power_of_two(),
            "N = {} is not a power of two",
            self.n
        );
        ensure!(
            self.k.per_level.len() == self.b
                && self.predicted_fer.len() == self.b
                && self.level_mean_llr.len() == self.b,
            "per-level fields must have B = {} entries",
            self.b
        );
        ensure!(
            self.k.per_level.iter().sum::<usize>() == self.k.total,
            "per-level K {:?} does not sum to {}",
            self.k.per_level,
            self.k.total
        );
        let sorted = self
            .sorted_channels
            .as_ref()
            .ok_or_else(|| anyhow!("code file lacks sorted_channels"))?;
        let (levels, joint_order) = match sorted {
            SortedChannels::Joint(order) => {
                let n = self.n;
                let mut per: Vec<Vec<usize>> = vec![Vec::with_capacity(n); self.b];
                for &c in order {
                    ensure!(c < n * self.b, "joint channel {c} out of range");
                    per[c / n].push(c % n);
                }
                let levels = per
                    .into_iter()
                    .zip(&self.k.per_level)
                    .map(|(idx, &k)| PolarCodeSpec::new(n, idx, k))
                    .collect::<polarthru::Result<Vec<_>>>()?;
                (levels, Some(order.clone()))
            }
            SortedChannels::PerLevel(orders) => {
                ensure!(orders.len() == self.b, "expected {} channel orders", self.b);
                let levels = orders
                    .iter()
                    .zip(&self.k.per_level)
                    .map(|(o, &k)| PolarCodeSpec::new(self.n, o.clone(), k))
                    .collect::<polarthru::Result<Vec<_>>>()?;
                (levels, None)
            }
        };
        let spec = MlpcmSpec {
            modulation,
            n: self.n,
            design_snr_db: self.snr_db,
            protocol: self.protocol,
            levels,
            joint_order,
            level_means: self.level_mean_llr.clone(),
            predicted_throughput: self.predicted_throughput,
            level_fer: self.predicted_fer.clone(),
        };
        if spec.joint_order.is_some() {
            // the per-level lengths must be a prefix cut of the joint order
            let recut = spec.with_total_k(self.k.total)?;
            ensure!(
                recut.level_k() == self.k.per_level,
                "per-level K {:?} is not a prefix cut of the joint order",
                self.k.per_level
            );
        }
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?).with_context(|| format!("writing {}", path.display()))
    }

    pub fn to_json(&self) -> Result<String> {
        if !self.predicted_throughput.is_finite() || self.predicted_fer.iter().any(|f| !f.is_finite())
        {
            bail!("predictions must be finite to be stored");
        }
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}
