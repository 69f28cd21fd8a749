use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use herr_cli::{emit_report, gen, run_suite, Format, Instance, Report, SuiteConfig, UsageError};

#[derive(Parser)]
#[command(name = "herr", version, about = "Seeded exact checks for Koszul and Herr complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a suite and write its report.
    Verify {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, default_value = "text")]
        format: Format,
        /// Report file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Instance files written by `gen`, evaluated instead of generated ones.
        #[arg(long, num_args = 1..)]
        input: Vec<PathBuf>,
    },
    /// Write the generated instances of a suite as JSON files.
    Gen {
        #[command(flatten)]
        config: ConfigArgs,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-emit a saved JSON report in another format.
    Report {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ConfigArgs {
    #[arg(long)]
    suite: String,
    /// `q`, `gf:p` or `gf:p^n`.
    #[arg(long, default_value = "q")]
    field: String,
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long, default_value_t = 3)]
    dim_max: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    count: usize,
    #[arg(long, default_value_t = 20)]
    n_max: usize,
    #[arg(long, default_value_t = 2)]
    ext_degree: usize,
    #[arg(long)]
    include_counterexample: bool,
}

impl ConfigArgs {
    fn config(self, format: Format) -> SuiteConfig {
        SuiteConfig {
            suite: self.suite,
            field: self.field,
            d: self.d,
            dim_max: self.dim_max,
            seed: self.seed,
            count: self.count,
            format,
            n_max: self.n_max,
            ext_degree: self.ext_degree,
            include_counterexample: self.include_counterexample,
        }
    }
}

fn write_out(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(p: &Path) -> Result<T> {
    let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
    serde_json::from_str(&text).map_err(|e| UsageError(format!("{}: {e}", p.display())).into())
}

/// `Ok(true)` when everything passed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Verify { config, format, out, input } => {
            let cfg = config.config(format);
            let loaded = if input.is_empty() {
                None
            } else {
                Some(input.iter().map(|p| read_json::<Instance>(p)).collect::<Result<Vec<_>>>()?)
            };
            let report = run_suite(&cfg, loaded)?;
            write_out(out.as_deref(), &emit_report(&report, format)?)?;
            Ok(report.passed())
        }
        Command::Gen { config, out } => {
            let instances = gen(&config.config(Format::Json))?;
            std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            for (i, inst) in instances.iter().enumerate() {
                let mut bytes = serde_json::to_vec_pretty(inst)?;
                bytes.push(b'\n');
                write_out(Some(&out.join(format!("instance-{i:05}.json"))), &bytes)?;
            }
            Ok(true)
        }
        Command::Report { input, format, out } => {
            let report: Report = read_json(&input)?;
            write_out(out.as_deref(), &emit_report(&report, format)?)?;
            Ok(report.passed())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
