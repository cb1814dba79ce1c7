//! Multilevel polar coded modulation: one polar code per label bit.
//!
//! Level-dependent designs sort all `B·N` bit-channels jointly and let the
//! per-level rates fall out of the joint information set; level-independent
//! designs run the binary designer on each level separately.

use serde::{Deserialize, Serialize};

use crate::construction::design::ir_reliability;
use crate::construction::design::{
    nc_binary_design, retransmission_design, sort_channels, DesignResult, FerCurve, IrDesign,
    MAX_ITERATIONS,
};
use crate::construction::ga::ga_ber;
use crate::construction::reliability::ReliabilityVector;
use crate::error::{Error, Result};
use crate::modem::avg::level_mean_llrs;
use crate::modem::constellation::{ConstellationSpec, Modulation};
use crate::polar::code::check_power_of_two;
use crate::polar::PolarCodeSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Protocol {
    #[serde(rename = "NC-D")]
    NcD,
    #[serde(rename = "CC-D")]
    CcD,
    #[serde(rename = "NC-I")]
    NcI,
    #[serde(rename = "CC-I")]
    CcI,
    #[serde(rename = "IR")]
    Ir,
}

impl Protocol {
    pub fn is_level_dependent(self) -> bool {
        matches!(self, Protocol::NcD | Protocol::CcD)
    }

    pub fn is_chase(self) -> bool {
        matches!(self, Protocol::CcD | Protocol::CcI)
    }

    pub fn name(self) -> &'static str {
        match self {
            Protocol::NcD => "NC-D",
            Protocol::CcD => "CC-D",
            Protocol::NcI => "NC-I",
            Protocol::CcI => "CC-I",
            Protocol::Ir => "IR",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().replace('_', "-").as_str() {
            "NC-D" | "NCD" => Ok(Protocol::NcD),
            "CC-D" | "CCD" => Ok(Protocol::CcD),
            "NC-I" | "NCI" => Ok(Protocol::NcI),
            "CC-I" | "CCI" => Ok(Protocol::CcI),
            "IR" | "IR-I" => Ok(Protocol::Ir),
            other => Err(Error::InvalidParameter(format!(
                "unknown protocol {other:?}"
            ))),
        }
    }
}

/// A designed multilevel code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpcmSpec {
    pub modulation: Modulation,
    /// Block length of every level.
    pub n: usize,
    pub design_snr_db: f64,
    pub protocol: Protocol,
    /// Level codes, least reliable level first.
    pub levels: Vec<PolarCodeSpec>,
    /// Joint order over all `B·N` channels (`level·N + channel`), for
    /// level-dependent codes.
    pub joint_order: Option<Vec<usize>>,
    /// Average LLR of each level at the design point.
    pub level_means: Vec<f64>,
    /// Predicted throughput per channel use per level.
    pub predicted_throughput: f64,
    /// Predicted first-transmission FER of each level code.
    pub level_fer: Vec<f64>,
}

impl MlpcmSpec {
    pub fn bits_per_symbol(&self) -> usize {
        self.modulation.bits_per_symbol()
    }

    pub fn total_k(&self) -> usize {
        self.levels.iter().map(|c| c.k()).sum()
    }

    pub fn level_k(&self) -> Vec<usize> {
        self.levels.iter().map(|c| c.k()).collect()
    }

    pub fn rate(&self) -> f64 {
        self.total_k() as f64 / (self.n * self.bits_per_symbol()) as f64
    }

    pub fn constellation(&self, snr_db: f64) -> ConstellationSpec {
        ConstellationSpec::at_snr_db(self.modulation, snr_db)
    }

    /// Re-cuts a level-dependent code at a new total length `k` along the
    /// joint order.
    pub fn with_total_k(&self, k: usize) -> Result<Self> {
        let order = self
            .joint_order
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter("code has no joint channel order".into()))?;
        if k > order.len() {
            return Err(Error::InfoLengthTooLarge { k, n: order.len() });
        }
        let mut out = self.clone();
        out.levels = split_joint(order, self.n, self.bits_per_symbol(), k)?;
        Ok(out)
    }

    /// Replaces the length of one level code.
    pub fn with_level_k(&self, level: usize, k: usize) -> Result<Self> {
        let mut out = self.clone();
        let code = out
            .levels
            .get_mut(level)
            .ok_or_else(|| Error::InvalidParameter(format!("no level {level}")))?;
        *code = code.with_k(k)?;
        Ok(out)
    }

    /// A single-level code on BPSK, e.g. for per-level simulation.
    pub fn binary(code: PolarCodeSpec, design_snr_db: f64, protocol: Protocol) -> Self {
        let n = code.n();
        Self {
            modulation: Modulation::Bpsk,
            n,
            design_snr_db,
            protocol,
            joint_order: Some(code.sorted_channels().to_vec()),
            levels: vec![code],
            level_means: vec![4.0 * crate::modem::db_to_linear(design_snr_db)],
            predicted_throughput: f64::NAN,
            level_fer: vec![f64::NAN],
        }
    }
}

fn split_joint(order: &[usize], n: usize, b: usize, k: usize) -> Result<Vec<PolarCodeSpec>> {
    let mut per_level: Vec<Vec<usize>> = vec![Vec::with_capacity(n); b];
    let mut k_level = vec![0usize; b];
    for (rank, &c) in order.iter().enumerate() {
        per_level[c / n].push(c % n);
        if rank < k {
            k_level[c / n] += 1;
        }
    }
    per_level
        .into_iter()
        .zip(k_level)
        .map(|(idx, kn)| PolarCodeSpec::new(n, idx, kn))
        .collect()
}

fn level_fer_of(rv: &ReliabilityVector, code: &PolarCodeSpec) -> f64 {
    FerCurve::product_bound(code.info_positions().iter().map(|&i| rv.ln_ber()[i])).fer(code.k())
}

/// GA reliabilities of every level at the design point.
pub fn level_reliabilities(
    modulation: Modulation,
    snr_db: f64,
    n: usize,
) -> Result<(Vec<f64>, Vec<ReliabilityVector>)> {
    check_power_of_two(n)?;
    let means = level_mean_llrs(&ConstellationSpec::at_snr_db(modulation, snr_db))?;
    let rvs = means
        .iter()
        .map(|&m| ga_ber(m, n))
        .collect::<Result<Vec<_>>>()?;
    Ok((means, rvs))
}

fn dependent_spec(
    modulation: Modulation,
    snr_db: f64,
    n: usize,
    protocol: Protocol,
    means: Vec<f64>,
    rvs: &[ReliabilityVector],
    d: DesignResult,
) -> Result<MlpcmSpec> {
    let levels = split_joint(&d.sorted_channels, n, rvs.len(), d.k_opt)?;
    let level_fer = levels
        .iter()
        .zip(rvs)
        .map(|(c, rv)| level_fer_of(rv, c))
        .collect();
    Ok(MlpcmSpec {
        modulation,
        n,
        design_snr_db: snr_db,
        protocol,
        levels,
        joint_order: Some(d.sorted_channels),
        level_means: means,
        predicted_throughput: d.predicted_throughput,
        level_fer,
    })
}

/// Level-dependent, non-combining: one joint sort over all `B·N` channels.
pub fn design_nc_d(modulation: Modulation, snr_db: f64, n: usize) -> Result<MlpcmSpec> {
    let (means, rvs) = level_reliabilities(modulation, snr_db, n)?;
    let d = nc_binary_design(&ReliabilityVector::concat(&rvs));
    dependent_spec(modulation, snr_db, n, Protocol::NcD, means, &rvs, d)
}

/// Level-dependent with Chase combining: joint order from one reception,
/// per-level means scaled by the number of combined receptions.
pub fn design_cc_d(modulation: Modulation, snr_db: f64, n: usize) -> Result<MlpcmSpec> {
    let (means, rvs) = level_reliabilities(modulation, snr_db, n)?;
    let total = n * rvs.len();
    let mut stages = retransmission_design(
        total,
        total,
        |l| {
            let parts = means
                .iter()
                .map(|&m| ga_ber(l as f64 * m, n))
                .collect::<Result<Vec<_>>>()?;
            Ok(ReliabilityVector::concat(&parts))
        },
        false,
        MAX_ITERATIONS,
    )?;
    let d = stages.pop().unwrap();
    dependent_spec(modulation, snr_db, n, Protocol::CcD, means, &rvs, d)
}

fn independent_spec(
    modulation: Modulation,
    snr_db: f64,
    n: usize,
    protocol: Protocol,
    means: Vec<f64>,
    rvs: &[ReliabilityVector],
    designs: Vec<DesignResult>,
) -> Result<MlpcmSpec> {
    let b = designs.len() as f64;
    let predicted_throughput = designs.iter().map(|d| d.predicted_throughput).sum::<f64>() / b;
    let levels = designs
        .iter()
        .map(|d| d.code())
        .collect::<Result<Vec<_>>>()?;
    let level_fer = levels
        .iter()
        .zip(rvs)
        .map(|(c, rv)| level_fer_of(rv, c))
        .collect();
    Ok(MlpcmSpec {
        modulation,
        n,
        design_snr_db: snr_db,
        protocol,
        levels,
        joint_order: None,
        level_means: means,
        predicted_throughput,
        level_fer,
    })
}

/// Level-independent, non-combining: each level designed on its own.
pub fn design_nc_i(modulation: Modulation, snr_db: f64, n: usize) -> Result<MlpcmSpec> {
    let (means, rvs) = level_reliabilities(modulation, snr_db, n)?;
    let designs = rvs.iter().map(nc_binary_design).collect();
    independent_spec(modulation, snr_db, n, Protocol::NcI, means, &rvs, designs)
}

fn chase_level(mean: f64, n: usize) -> Result<DesignResult> {
    let mut stages =
        retransmission_design(n, n, |l| ga_ber(l as f64 * mean, n), false, MAX_ITERATIONS)?;
    let mut last = stages.pop().unwrap();
    if let Some(first) = stages.into_iter().next() {
        last.fer = first.fer;
    }
    Ok(last)
}

pub fn design_cc_i(modulation: Modulation, snr_db: f64, n: usize) -> Result<MlpcmSpec> {
    let (means, rvs) = level_reliabilities(modulation, snr_db, n)?;
    let designs = means
        .iter()
        .map(|&m| chase_level(m, n))
        .collect::<Result<Vec<_>>>()?;
    independent_spec(modulation, snr_db, n, Protocol::CcI, means, &rvs, designs)
}

/// Level-independent incremental redundancy; prediction only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrMlpcmDesign {
    pub modulation: Modulation,
    pub n: usize,
    pub design_snr_db: f64,
    pub level_means: Vec<f64>,
    pub levels: Vec<IrDesign>,
    /// Per channel use per level.
    pub predicted_throughput: f64,
}

pub fn design_ir_i(
    modulation: Modulation,
    snr_db: f64,
    n: usize,
    max_tx: usize,
) -> Result<IrMlpcmDesign> {
    check_power_of_two(n)?;
    let means = level_mean_llrs(&ConstellationSpec::at_snr_db(modulation, snr_db))?;
    let levels = means
        .iter()
        .map(|&m| {
            let stages = retransmission_design(n, n, |l| ir_reliability(m, n, l), true, max_tx)?;
            let approximate = (1..=stages.len())
                .map(|l| !(l * n).is_power_of_two())
                .collect();
            Ok(IrDesign {
                stages,
                approximate,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let predicted_throughput =
        levels.iter().map(|d| d.peak_throughput()).sum::<f64>() / levels.len() as f64;
    Ok(IrMlpcmDesign {
        modulation,
        n,
        design_snr_db: snr_db,
        level_means: means,
        levels,
        predicted_throughput,
    })
}

fn qam(b: usize) -> Result<Modulation> {
    Modulation::qam(b)
}

pub fn design_nc_d_qam(snr_db: f64, n: usize, b: usize) -> Result<MlpcmSpec> {
    design_nc_d(qam(b)?, snr_db, n)
}

pub fn design_nc_i_qam(snr_db: f64, n: usize, b: usize) -> Result<MlpcmSpec> {
    design_nc_i(qam(b)?, snr_db, n)
}

pub fn design_cc_d_qam(snr_db: f64, n: usize, b: usize) -> Result<MlpcmSpec> {
    design_cc_d(qam(b)?, snr_db, n)
}

pub fn design_cc_i_qam(snr_db: f64, n: usize, b: usize) -> Result<MlpcmSpec> {
    design_cc_i(qam(b)?, snr_db, n)
}

pub fn design_ir_i_qam(snr_db: f64, n: usize, b: usize, max_tx: usize) -> Result<IrMlpcmDesign> {
    design_ir_i(qam(b)?, snr_db, n, max_tx)
}

/// Designs a code for any protocol except IR.
pub fn design(
    modulation: Modulation,
    protocol: Protocol,
    snr_db: f64,
    n: usize,
) -> Result<MlpcmSpec> {
    match protocol {
        Protocol::NcD => design_nc_d(modulation, snr_db, n),
        Protocol::CcD => design_cc_d(modulation, snr_db, n),
        Protocol::NcI => design_nc_i(modulation, snr_db, n),
        Protocol::CcI => design_cc_i(modulation, snr_db, n),
        Protocol::Ir => Err(Error::InvalidParameter(
            "IR designs are prediction-only; use design_ir_i".into(),
        )),
    }
}

/// Joint-sort helper over arbitrary per-level reliabilities.
pub fn joint_design(rvs: &[ReliabilityVector]) -> Result<Vec<PolarCodeSpec>> {
    let n = rvs.first().map_or(0, |r| r.len());
    let d = nc_binary_design(&ReliabilityVector::concat(rvs));
    split_joint(&d.sorted_channels, n, rvs.len(), d.k_opt)
}

/// Channel order of each level on its own.
pub fn level_orders(rvs: &[ReliabilityVector]) -> Vec<Vec<usize>> {
    rvs.iter().map(sort_channels).collect()
}
