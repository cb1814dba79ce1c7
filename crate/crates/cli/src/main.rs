use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use polarthru_cli::{
    cmd_capacity, cmd_design, cmd_ratematch, cmd_simulate, execution, llr_trace, sign_agreement,
    sim_csv, Cli, Command, LlrTarget,
};

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    #[cfg(feature = "parallel")]
    if let Some(n) = cli.threads {
        anyhow::ensure!(n >= 1, "--threads must be at least 1");
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let exec = execution(cli.threads);
    match &cli.command {
        Command::Design(a) => emit(a.out.as_deref(), &cmd_design(a, exec)?.to_json()?),
        Command::Simulate(a) => emit(a.out.as_deref(), &sim_csv(&cmd_simulate(a, exec)?)),
        Command::Ratematch(a) => {
            let r = cmd_ratematch(a, exec)?;
            for w in r.warnings() {
                eprintln!("warning: {w}");
            }
            r.code.save(&a.out)?;
            eprintln!(
                "K = {:?} after {} evaluations",
                r.code.k.per_level,
                r.evaluations()
            );
            emit(a.probes.as_deref(), &r.probe_csv())
        }
        Command::LlrCheck(a) => {
            let target = LlrTarget::from_args(a)?;
            emit(a.out.as_deref(), &llr_trace(target, a.snr_db, a.points, a.range)?)?;
            if a.mc > 0 {
                let s = sign_agreement(target, a.snr_db, a.mc, a.seed)?;
                eprintln!("sign agreement: {s:.6} over {} receptions", a.mc);
            }
            Ok(())
        }
        Command::Capacity(a) => emit(a.out.as_deref(), &cmd_capacity(a)?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
