//! Command-line front end: design, simulation sweeps, rate matching, LLR
//! accuracy traces and the capacity reference.
//!
//! Every command is a plain function from parsed arguments to its output so
//! that it can be driven from tests without spawning the binary.

pub mod codefile;
pub mod sweep;

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use polarthru::construction::sim_based_design;
use polarthru::harq::{self, capacity, DecoderKind, SimConfig, ThroughputRecord};
use polarthru::mlpcm::{self, MlpcmSpec, Protocol};
use polarthru::modem::constellation::n0_for_snr;
use polarthru::modem::{
    level_llr, level_mean_llrs, pam_exact_llr, pam_map, pam_piecewise_llr, qam_map,
    ConstellationSpec, LevelContext, LlrMode, Modulation,
};
use polarthru::polar::Crc;
use polarthru::ratematch::{scld_rate_match, scld_rate_match_levels, RateMatchResult};
use polarthru::rng::{gaussian, substream, Purpose};
use polarthru::Execution;
use rand::Rng;
use serde::Serialize;

pub use codefile::{CodeFile, DesignMethod, SortedChannels, FORMAT_VERSION};
pub use sweep::parse_snr_sweep;

#[derive(Debug, Parser)]
#[command(name = "polarthru", version, about = "Throughput-optimized polar coded modulation")]
pub struct Cli {
    /// Worker threads for Monte-Carlo loops (1 runs sequentially).
    #[arg(long, global = true, env = "POLARTHRU_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Design a code and write the code file.
    Design(DesignArgs),
    /// Simulate HARQ throughput over an SNR sweep; writes CSV.
    Simulate(SimulateArgs),
    /// Rate-match a code for list decoding; writes the updated code file and
    /// the probe trace.
    Ratematch(RatematchArgs),
    /// Exact vs piecewise PAM LLRs as a function of the received value.
    LlrCheck(LlrCheckArgs),
    /// Constellation-constrained AWGN capacity.
    Capacity(CapacityArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModArg {
    Bpsk,
    Qam4,
    Qam16,
    Qam64,
}

impl ModArg {
    pub fn modulation(self) -> Modulation {
        match self {
            ModArg::Bpsk => Modulation::Bpsk,
            ModArg::Qam4 => Modulation::Qam(2),
            ModArg::Qam16 => Modulation::Qam(4),
            ModArg::Qam64 => Modulation::Qam(6),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DecoderArg {
    Scd,
    Scld,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LlrArg {
    Exact,
    Piecewise,
}

impl From<LlrArg> for LlrMode {
    fn from(a: LlrArg) -> Self {
        match a {
            LlrArg::Exact => LlrMode::Exact,
            LlrArg::Piecewise => LlrMode::Piecewise,
        }
    }
}

fn parse_protocol(s: &str) -> std::result::Result<Protocol, String> {
    Protocol::parse(s).map_err(|e| e.to_string())
}

fn parse_crc(s: &str) -> std::result::Result<usize, String> {
    match s {
        "16" => Ok(16),
        "8" => Ok(8),
        "0" => Ok(0),
        _ => Err(format!("CRC length must be 16, 8 or 0, got {s}")),
    }
}

fn crc_of(len: usize) -> Crc {
    match len {
        16 => Crc::ccitt16(),
        8 => Crc::crc8(),
        _ => Crc::none(),
    }
}

/// Sequential when capped to one thread, otherwise the rayon pool.
pub fn execution(threads: Option<usize>) -> Execution {
    match threads {
        Some(1) => Execution::Sequential,
        _ => Execution::Parallel,
    }
}

#[derive(Debug, Clone, Args)]
pub struct DesignArgs {
    #[arg(long = "mod", value_enum)]
    pub modulation: ModArg,
    /// Block length of each level code.
    #[arg(long)]
    pub n: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: f64,
    #[arg(long, default_value = "NC-D", value_parser = parse_protocol)]
    pub protocol: Protocol,
    #[arg(long, value_enum, default_value = "ga")]
    pub method: DesignMethod,
    /// Codewords simulated by the SIM method.
    #[arg(long, default_value_t = 10_000)]
    pub sim_frames: usize,
    /// Transmissions considered by the IR predictor.
    #[arg(long, default_value_t = 16)]
    pub max_tx: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// IR designs are predictions only and are written in their own shape.
#[derive(Debug, Clone, Serialize)]
pub struct IrPrediction {
    pub format_version: u32,
    pub modulation: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "B")]
    pub b: usize,
    pub snr_db: f64,
    pub protocol: Protocol,
    pub design_method: DesignMethod,
    pub level_mean_llr: Vec<f64>,
    /// Per level, the best `K` and throughput when stopping after `l`
    /// transmissions, `l = 1, 2, ...`.
    pub stages: Vec<Vec<IrStage>>,
    pub predicted_throughput: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct IrStage {
    #[serde(rename = "K")]
    pub k: usize,
    pub predicted_throughput: f64,
    pub punctured: bool,
}

pub enum Designed {
    Code(Box<CodeFile>),
    Ir(IrPrediction),
}

impl Designed {
    pub fn to_json(&self) -> Result<String> {
        match self {
            Designed::Code(c) => c.to_json(),
            Designed::Ir(p) => Ok(serde_json::to_string_pretty(p)? + "\n"),
        }
    }
}

pub fn cmd_design(args: &DesignArgs, exec: Execution) -> Result<Designed> {
    let m = args.modulation.modulation();
    ensure!(
        args.snr_db.is_finite(),
        "design SNR must be finite, got {}",
        args.snr_db
    );
    ensure!(
        args.n >= 2 && args.n.is_power_of_two(),
        "--n {} is not a power of two",
        args.n
    );
    if args.protocol == Protocol::Ir {
        ensure!(
            args.method == DesignMethod::Ga,
            "IR designs use the Gaussian approximation only"
        );
        let d = mlpcm::design_ir_i(m, args.snr_db, args.n, args.max_tx)?;
        return Ok(Designed::Ir(IrPrediction {
            format_version: FORMAT_VERSION,
            modulation: codefile::modulation_label(m),
            n: args.n,
            b: m.bits_per_symbol(),
            snr_db: args.snr_db,
            protocol: Protocol::Ir,
            design_method: DesignMethod::Ga,
            level_mean_llr: d.level_means.clone(),
            stages: d
                .levels
                .iter()
                .map(|l| {
                    l.stages
                        .iter()
                        .zip(&l.approximate)
                        .map(|(s, &p)| IrStage {
                            k: s.k_opt,
                            predicted_throughput: s.predicted_throughput,
                            punctured: p,
                        })
                        .collect()
                })
                .collect(),
            predicted_throughput: d.predicted_throughput,
        }));
    }
    let spec = match args.method {
        DesignMethod::Ga => mlpcm::design(m, args.protocol, args.snr_db, args.n)?,
        DesignMethod::Sim => {
            ensure!(
                m == Modulation::Bpsk && !args.protocol.is_chase(),
                "simulation-based design is available for BPSK without combining only"
            );
            let d = sim_based_design(args.snr_db, args.n, args.sim_frames, args.seed, exec)?;
            let mut spec = MlpcmSpec::binary(d.code()?, args.snr_db, args.protocol);
            spec.predicted_throughput = d.predicted_throughput;
            spec.level_fer = vec![d.predicted_fer(d.k_opt)];
            if !args.protocol.is_level_dependent() {
                spec.joint_order = None;
            }
            spec
        }
    };
    Ok(Designed::Code(Box::new(CodeFile::from_spec(
        &spec,
        args.method,
    ))))
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Code file; without it a GA code is designed at every SNR point.
    #[arg(long)]
    pub code: Option<PathBuf>,
    /// Required without --code; otherwise must agree with the file.
    #[arg(long = "mod", value_enum)]
    pub modulation: Option<ModArg>,
    #[arg(long)]
    pub n: Option<usize>,
    /// SNR point or sweep `a:step:b` in dB; defaults to the design SNR.
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: Option<String>,
    /// One or more protocols, comma separated; defaults to the file's.
    #[arg(long, value_parser = parse_protocol, value_delimiter = ',')]
    pub protocol: Vec<Protocol>,
    /// One or more decoders, comma separated.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub decoder: Vec<DecoderArg>,
    #[arg(long)]
    pub list: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub frames: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "exact")]
    pub llr: LlrArg,
    #[arg(long, default_value = "16", value_parser = parse_crc)]
    pub crc: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimRow {
    pub snr_db: f64,
    pub protocol: Protocol,
    pub decoder: &'static str,
    pub list_size: usize,
    pub n: usize,
    pub b: usize,
    pub k_data: usize,
    pub throughput: f64,
    pub capacity: f64,
    pub ratio: f64,
    pub frames: usize,
    pub retx_mean: f64,
    pub std_error: f64,
}

pub const SIM_CSV_HEADER: &str =
    "snr_db,protocol,decoder,list_size,N,B,K_data,throughput,capacity,ratio,frames,retx_mean,std_error";

impl SimRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.snr_db,
            self.protocol.name(),
            self.decoder,
            self.list_size,
            self.n,
            self.b,
            self.k_data,
            self.throughput,
            self.capacity,
            self.ratio,
            self.frames,
            self.retx_mean,
            self.std_error
        )
    }
}

pub fn sim_csv(rows: &[SimRow]) -> String {
    let mut s = String::from(SIM_CSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.csv_line());
        s.push('\n');
    }
    s
}

/// Data bits per acknowledged frame, CRC excluded.
pub fn data_bits(spec: &MlpcmSpec, protocol: Protocol, crc: usize) -> usize {
    if protocol.is_level_dependent() {
        spec.total_k().saturating_sub(crc)
    } else {
        spec.levels
            .iter()
            .map(|c| c.k())
            .filter(|&k| k > crc)
            .map(|k| k - crc)
            .sum()
    }
}

fn capacity_at(m: Modulation, snr_db: f64) -> f64 {
    if snr_db == f64::INFINITY {
        m.bits_per_symbol() as f64
    } else {
        capacity(m, snr_db)
    }
}

pub fn cmd_simulate(args: &SimulateArgs, exec: Execution) -> Result<Vec<SimRow>> {
    let file = args.code.as_ref().map(|p| CodeFile::load(p)).transpose()?;
    let fixed = file.as_ref().map(|f| f.to_spec()).transpose()?;
    let (m, n) = match &fixed {
        Some(spec) => {
            if let Some(req) = args.modulation {
                ensure!(
                    req.modulation() == spec.modulation,
                    "code file is for {} (B = {}) but --mod {} was requested",
                    codefile::modulation_label(spec.modulation),
                    spec.bits_per_symbol(),
                    req.modulation().name()
                );
            }
            if let Some(req) = args.n {
                ensure!(
                    req == spec.n,
                    "code file has N = {} but --n {req} was requested",
                    spec.n
                );
            }
            (spec.modulation, spec.n)
        }
        None => {
            let (Some(m), Some(n)) = (args.modulation, args.n) else {
                bail!("without --code both --mod and --n are required");
            };
            (m.modulation(), n)
        }
    };
    let snrs = match (&args.snr_db, &fixed) {
        (Some(s), _) => parse_snr_sweep(s)?,
        (None, Some(spec)) => vec![spec.design_snr_db],
        (None, None) => bail!("--snr-db is required without --code"),
    };
    let protocols = if !args.protocol.is_empty() {
        args.protocol.clone()
    } else if let Some(spec) = &fixed {
        vec![spec.protocol]
    } else {
        vec![Protocol::NcD]
    };
    ensure!(
        !protocols.contains(&Protocol::Ir),
        "IR is prediction-only and cannot be simulated"
    );
    let matched_list = file.as_ref().and_then(|f| f.rate_matched_list);
    let decoders = if !args.decoder.is_empty() {
        args.decoder.clone()
    } else if matched_list.is_some() {
        vec![DecoderArg::Scld]
    } else {
        vec![DecoderArg::Scd]
    };
    let list = args.list.or(matched_list).unwrap_or(32);
    ensure!(list >= 1, "--list must be at least 1");
    ensure!(args.frames >= 1, "--frames must be at least 1");

    let mut rows = Vec::new();
    for &snr in &snrs {
        for &protocol in &protocols {
            let spec = match &fixed {
                Some(s) => s.clone(),
                None => {
                    ensure!(snr.is_finite(), "cannot design a code at {snr} dB");
                    mlpcm::design(m, protocol, snr, n)?
                }
            };
            for &dec in &decoders {
                let kind = match dec {
                    DecoderArg::Scd => DecoderKind::Sc,
                    DecoderArg::Scld => DecoderKind::Scl(list),
                };
                let mut cfg = SimConfig::new(snr, args.frames)
                    .decoder(kind)
                    .seed(args.seed)
                    .exec(exec);
                cfg.llr_mode = args.llr.into();
                cfg.crc = crc_of(args.crc);
                let rec = harq::run(&spec, protocol, &cfg)
                    .with_context(|| format!("{} at {snr} dB", protocol.name()))?;
                check_record(&rec)?;
                let cap = capacity_at(m, snr);
                let t = rec.throughput();
                rows.push(SimRow {
                    snr_db: snr,
                    protocol,
                    decoder: kind.name(),
                    list_size: kind.list_size(),
                    n,
                    b: m.bits_per_symbol(),
                    k_data: data_bits(&spec, protocol, args.crc),
                    throughput: t,
                    capacity: cap,
                    ratio: if cap > 0.0 { t / cap } else { 0.0 },
                    frames: args.frames,
                    retx_mean: rec.retx_mean(),
                    std_error: rec.std_error(),
                });
            }
        }
    }
    Ok(rows)
}

fn check_record(rec: &ThroughputRecord) -> Result<()> {
    ensure!(
        rec.audit(),
        "protocol violation: channel-use accounting does not balance"
    );
    Ok(())
}

#[derive(Debug, Clone, Args)]
pub struct RatematchArgs {
    #[arg(long)]
    pub code: PathBuf,
    /// Defaults to the design SNR.
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: Option<f64>,
    #[arg(long, default_value_t = 32)]
    pub list: usize,
    /// Frames simulated per probe.
    #[arg(long, default_value_t = 1000)]
    pub frames: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "exact")]
    pub llr: LlrArg,
    #[arg(long, default_value = "16", value_parser = parse_crc)]
    pub crc: usize,
    /// Updated code file.
    #[arg(long)]
    pub out: PathBuf,
    /// Probe trace CSV; stdout if omitted.
    #[arg(long)]
    pub probes: Option<PathBuf>,
}

pub struct RateMatchOutput {
    pub code: CodeFile,
    /// `None` for levels left as designed.
    pub results: Vec<Option<RateMatchResult>>,
    pub joint: bool,
}

pub const PROBE_CSV_HEADER: &str = "level,K,throughput";

impl RateMatchOutput {
    pub fn probe_csv(&self) -> String {
        let mut s = String::from(PROBE_CSV_HEADER);
        s.push('\n');
        for (l, r) in self.results.iter().enumerate() {
            let Some(r) = r else { continue };
            let level = if self.joint {
                "all".to_string()
            } else {
                l.to_string()
            };
            for p in &r.probes {
                let _ = writeln!(s, "{level},{},{}", p.k, p.f);
            }
        }
        s
    }

    pub fn evaluations(&self) -> usize {
        self.results.iter().flatten().map(|r| r.evaluations()).sum()
    }

    pub fn warnings(&self) -> Vec<String> {
        self.results
            .iter()
            .flatten()
            .flat_map(|r| r.warnings.iter().cloned())
            .collect()
    }
}

pub fn cmd_ratematch(args: &RatematchArgs, exec: Execution) -> Result<RateMatchOutput> {
    let file = CodeFile::load(&args.code)?;
    let spec = file.to_spec()?;
    ensure!(
        !spec.protocol.is_chase() && spec.protocol != Protocol::Ir,
        "rate matching applies to non-combining codes, not {}",
        spec.protocol.name()
    );
    ensure!(args.list >= 1, "--list must be at least 1");
    let snr = args.snr_db.unwrap_or(spec.design_snr_db);
    ensure!(snr.is_finite(), "rate matching needs a finite SNR");
    let mut cfg = SimConfig::new(snr, args.frames)
        .decoder(DecoderKind::Scl(args.list))
        .seed(args.seed)
        .exec(exec);
    cfg.llr_mode = args.llr.into();
    cfg.crc = crc_of(args.crc);
    let (matched, results, joint) = if spec.joint_order.is_some() {
        let r = scld_rate_match(&spec, &cfg)?;
        (spec.with_total_k(r.k_opt)?, vec![Some(r)], true)
    } else {
        let mut at_snr = spec.clone();
        at_snr.level_means = level_mean_llrs(&ConstellationSpec::at_snr_db(spec.modulation, snr))?;
        let (mut out, results) = scld_rate_match_levels(&at_snr, &cfg)?;
        out.level_means = spec.level_means.clone();
        (out, results, false)
    };
    let mut code = CodeFile::from_spec(&matched, file.design_method);
    code.rate_matched_list = Some(args.list);
    Ok(RateMatchOutput {
        code,
        results,
        joint,
    })
}

#[derive(Debug, Clone, Args)]
#[command(group(clap::ArgGroup::new("target").required(true).args(["modulation", "pam"])))]
pub struct LlrCheckArgs {
    /// QAM or BPSK; the trace shows its PAM component at this SNR.
    #[arg(long = "mod", value_enum)]
    pub modulation: Option<ModArg>,
    /// A bare M-PAM, with the SNR taken relative to its own symbol energy.
    #[arg(long)]
    pub pam: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: f64,
    /// Grid points of the received value.
    #[arg(long, default_value_t = 401)]
    pub points: usize,
    /// Half-width of the grid; defaults to the PAM order.
    #[arg(long)]
    pub range: Option<f64>,
    /// Random receptions for the sign-agreement statistic (0 skips it).
    #[arg(long, default_value_t = 0)]
    pub mc: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// What an LLR check runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LlrTarget {
    Constellation(Modulation),
    Pam(usize),
}

impl LlrTarget {
    pub fn from_args(a: &LlrCheckArgs) -> Result<Self> {
        match (a.modulation, a.pam) {
            (Some(m), None) => Ok(LlrTarget::Constellation(m.modulation())),
            (None, Some(p)) => {
                ensure!(p >= 2 && p.is_power_of_two(), "--pam {p} is not a power of two");
                Ok(LlrTarget::Pam(p))
            }
            _ => bail!("give exactly one of --mod and --pam"),
        }
    }

    pub fn pam_order(self) -> usize {
        match self {
            LlrTarget::Constellation(m) => m.pam_order(),
            LlrTarget::Pam(p) => p,
        }
    }

    pub fn n0(self, snr_db: f64) -> f64 {
        match self {
            LlrTarget::Constellation(m) => ConstellationSpec::at_snr_db(m, snr_db).n0,
            LlrTarget::Pam(p) => n0_for_snr(((p * p - 1) as f64) / 3.0, snr_db),
        }
    }
}

pub const LLR_CSV_HEADER: &str = "y,level,exact,approx";

/// PAM-level LLRs on a grid of received values, lower levels decided as 0.
pub fn llr_trace(
    target: LlrTarget,
    snr_db: f64,
    points: usize,
    range: Option<f64>,
) -> Result<String> {
    ensure!(points >= 2, "need at least two grid points");
    let order = target.pam_order();
    let n0 = target.n0(snr_db);
    let half = range.unwrap_or(order as f64);
    ensure!(half > 0.0 && half.is_finite(), "--range must be positive");
    let mut s = String::from(LLR_CSV_HEADER);
    s.push('\n');
    for level in 1..=order.trailing_zeros() as usize {
        let lower = vec![0u8; level - 1];
        for i in 0..points {
            let y = -half + 2.0 * half * i as f64 / (points - 1) as f64;
            let e = pam_exact_llr(y, level, &lower, order, n0)?;
            let a = pam_piecewise_llr(y, level, &lower, order, n0)?;
            let _ = writeln!(s, "{y},{level},{e},{a}");
        }
    }
    Ok(s)
}

/// Fraction of multistage-decoding LLRs whose sign is the same under exact
/// and piecewise demapping, lower levels set to the transmitted bits.
pub fn sign_agreement(target: LlrTarget, snr_db: f64, draws: usize, seed: u64) -> Result<f64> {
    ensure!(draws > 0, "need at least one draw");
    let same = |e: f64, a: f64| (e >= 0.0) == (a >= 0.0);
    let mut agree = 0usize;
    let mut total = 0usize;
    match target {
        LlrTarget::Pam(order) => {
            let n0 = target.n0(snr_db);
            let sigma = (n0 / 2.0).sqrt();
            let levels = order.trailing_zeros() as usize;
            for t in 0..draws {
                let mut rng = substream(seed, Purpose::Data, &[t as u64]);
                let d: Vec<u8> = (0..levels).map(|_| rng.random::<bool>() as u8).collect();
                let y = f64::from(pam_map(&d)) + sigma * gaussian(&mut rng);
                for level in 1..=levels {
                    let lower = &d[..level - 1];
                    let e = pam_exact_llr(y, level, lower, order, n0)?;
                    let a = pam_piecewise_llr(y, level, lower, order, n0)?;
                    agree += usize::from(same(e, a));
                    total += 1;
                }
            }
        }
        LlrTarget::Constellation(m) => {
            let spec = ConstellationSpec::at_snr_db(m, snr_db);
            let sigma = (spec.n0 / 2.0).sqrt();
            let b = m.bits_per_symbol();
            for t in 0..draws {
                let mut rng = substream(seed, Purpose::Data, &[t as u64]);
                let bits: Vec<u8> = (0..b).map(|_| rng.random::<bool>() as u8).collect();
                let x = match m {
                    Modulation::Bpsk => Complex64::new(2.0 * f64::from(bits[0]) - 1.0, 0.0),
                    Modulation::Qam(_) => qam_map(&bits)?,
                };
                let mut y = x + Complex64::new(sigma * gaussian(&mut rng), 0.0);
                if m.is_complex() {
                    y.im += sigma * gaussian(&mut rng);
                }
                for level in 1..=b {
                    let ctx = LevelContext::new(level, &bits[..level - 1])?;
                    let e = level_llr(y, &ctx, &spec, LlrMode::Exact)?;
                    let a = level_llr(y, &ctx, &spec, LlrMode::Piecewise)?;
                    agree += usize::from(same(e, a));
                    total += 1;
                }
            }
        }
    }
    Ok(agree as f64 / total as f64)
}

#[derive(Debug, Clone, Args)]
pub struct CapacityArgs {
    #[arg(long = "mod", value_enum)]
    pub modulation: ModArg,
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn cmd_capacity(args: &CapacityArgs) -> Result<String> {
    let m = args.modulation.modulation();
    let mut s = String::from("snr_db,modulation,capacity\n");
    for snr in parse_snr_sweep(&args.snr_db)? {
        let _ = writeln!(s, "{snr},{},{}", m.name(), capacity_at(m, snr));
    }
    Ok(s)
}
