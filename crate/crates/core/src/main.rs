use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use drinfeld_heights::lab::schema::SchemaError;
use drinfeld_heights::lab::{
    enumerate_modules, family_experiment, height_report, parse_family, parse_height_instance, scan_jplaces,
    scan_zimmer, torsion_report, EnumerateConfig, JplacesConfig, LabError, ZimmerConfig,
};
use drinfeld_heights::rational::{parse_rat, Rat};

#[derive(Parser)]
#[command(name = "drinfeld-lab", about = "Height experiments for Drinfeld modules over F_q(T)")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Heights of the points of an instance file, by both methods, per place.
    Height {
        #[arg(long)]
        instance: PathBuf,
        /// Overrides the instance tolerance.
        #[arg(long, value_parser = rat_arg)]
        tol: Option<Rat>,
    },
    /// Random modules and points; checks the height difference bounds and the
    /// local inequalities on each.
    ScanZimmer {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: usize,
        /// Degree bound on numerators and denominators of the samples.
        #[arg(long)]
        bound: usize,
        #[arg(long, value_parser = rat_arg, default_value = "1/4")]
        tol: Rat,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
    },
    /// Ratio h_hat(x) / max{h(j), deg D} over all modules of bounded
    /// coefficient height with 1..=s persistently bad places.
    ScanJplaces {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        q: u64,
        /// Ranks to enumerate; repeat the flag for several.
        #[arg(long, required = true)]
        r: Vec<usize>,
        #[arg(long)]
        s: usize,
        /// Coefficient height bound.
        #[arg(long)]
        bound: usize,
        /// Height bound for the points.
        #[arg(long)]
        point_bound: usize,
        /// Local iteration cap; non-escaping orbits grow by a factor q^r in
        /// degree per step, so the scan keeps this small.
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[arg(long, default_value_t = 1 << 16)]
        max_modules: u64,
    },
    /// Torsion submodule of the instance's module.
    Torsion {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 1 << 22)]
        max_candidates: u128,
        #[arg(long, default_value_t = 8)]
        max_annihilator_degree: usize,
    },
    /// Specializations of a family over F_q(T)(u) against the generic fibre.
    Family {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_parser = rat_arg)]
        tol: Option<Rat>,
    },
    /// Modules with h(phi) <= bound up to isomorphism.
    Enumerate {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: usize,
        #[arg(long, value_parser = rat_arg)]
        bound: Rat,
        #[arg(long, default_value_t = 1 << 20)]
        max_tuples: u64,
    },
}

fn rat_arg(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

fn read_json(path: &Path) -> Result<Value, LabError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SchemaError { path: "$".into(), msg: format!("cannot read {}: {e}", path.display()) })?;
    let v = serde_json::from_str(&text).map_err(|e| SchemaError { path: "$".into(), msg: format!("invalid JSON: {e}") })?;
    Ok(v)
}

/// Report plus whether any check failed.
fn run(cmd: Cmd) -> Result<(Value, bool), LabError> {
    match cmd {
        Cmd::Height { instance, tol } => {
            let mut inst = parse_height_instance(&read_json(&instance)?)?;
            if let Some(t) = tol {
                inst.tol = t;
            }
            Ok((height_report(&inst)?, false))
        }
        Cmd::ScanZimmer { seed, count, q, r, bound, tol, n_max } => {
            let res = scan_zimmer(&ZimmerConfig { seed, count, q, r, bound, tol, n_max })?;
            Ok((res.report, res.violations > 0))
        }
        Cmd::ScanJplaces { seed, q, r, s, bound, point_bound, n_max, max_modules } => {
            let cfg = JplacesConfig {
                seed,
                q,
                ranks: r,
                s,
                coeff_bound: bound,
                point_bound,
                n_max,
                max_ann_degree: 8,
                max_modules,
            };
            let res = scan_jplaces(&cfg)?;
            Ok((res.report, res.violations > 0))
        }
        Cmd::Torsion { instance, max_candidates, max_annihilator_degree } => {
            let inst = parse_height_instance(&read_json(&instance)?)?;
            Ok((torsion_report(&inst.module, max_candidates, max_annihilator_degree)?, false))
        }
        Cmd::Family { instance, tol } => {
            let mut cfg = parse_family(&read_json(&instance)?)?;
            if let Some(t) = tol {
                cfg.tol = t;
            }
            let res = family_experiment(&cfg)?;
            Ok((res.report, res.violations > 0))
        }
        Cmd::Enumerate { q, r, bound, max_tuples } => {
            let res = enumerate_modules(&EnumerateConfig { q, r, bound, max_tuples })?;
            Ok((res.report, res.violations > 0))
        }
    }
}

fn emit(report: &Value, out: Option<&Path>) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(report).expect("reports are plain JSON");
    match out {
        Some(p) => std::fs::write(p, text + "\n"),
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}") {
                // a closed pipe (e.g. `| head`) is not an error
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => r,
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.as_deref();
    let (report, code) = match run(cli.cmd) {
        Ok((r, failed)) => {
            if failed {
                eprintln!("inequality violated; see counterexamples in the report");
            }
            (Some(r), if failed { 2 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = e.exit_code();
            match e {
                LabError::Violation { report, .. } => (Some(report), code),
                _ => (None, code),
            }
        }
    };
    if let Some(r) = report {
        if let Err(e) = emit(&r, out) {
            eprintln!("error: cannot write report: {e}");
            return ExitCode::from(1);
        }
    }
    ExitCode::from(code as u8)
}
