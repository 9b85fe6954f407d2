use clap::{Parser, Subcommand};
use shimura_core::pipeline::config::JobConfig;
use shimura_core::pipeline::run;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "shimura", version, about = "Hecke eigenvalues of quaternionic modular forms on Shimura curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the job described by a configuration file.
    Run {
        config: PathBuf,
        /// Compute Hecke operators for all primes of norm at most N.
        #[arg(long, value_name = "N")]
        primes_up_to: Option<u64>,
        /// Write the fundamental domain of the trivial component as SVG.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        /// Directory for cached geometry and operators.
        #[arg(long, value_name = "PATH")]
        cache_dir: Option<PathBuf>,
        /// Precision of the real embeddings.
        #[arg(long, value_name = "B")]
        precision_bits: Option<u32>,
        /// Ignore the cache directory.
        #[arg(long)]
        no_cache: bool,
        /// Emit the result document as JSON.
        #[arg(long)]
        json: bool,
    },
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Run { config, primes_up_to, svg, cache_dir, precision_bits, no_cache, json } = cli.command;
    let text = match std::fs::read_to_string(&config) {
        Ok(t) => t,
        Err(e) => return fail(2, format!("{}: {e}", config.display())),
    };
    let mut cfg = match JobConfig::parse(&text) {
        Ok(c) => c,
        Err(e) => return fail(2, e),
    };
    if let Some(n) = primes_up_to {
        cfg.norm_bound = Some(n);
    }
    if let Some(b) = precision_bits {
        cfg.precision_bits = b;
    }
    if let Some(p) = &svg {
        cfg.svg_path = Some(p.display().to_string());
    }
    let cache = if no_cache { None } else { cache_dir };
    let out = match std::panic::catch_unwind(|| run(&cfg, cache.as_deref())) {
        Ok(Ok(o)) => o,
        Ok(Err(e)) => return fail(e.exit_code() as u8, e),
        Err(_) => return fail(4, "internal assertion failed"),
    };
    let rendered = if json {
        match out.document.to_json() {
            Ok(s) => s,
            Err(e) => return fail(4, e),
        }
    } else {
        out.document.to_text()
    };
    if let Some(p) = &cfg.svg_path {
        if let Err(e) = std::fs::write(p, &out.svg) {
            return fail(4, format!("{p}: {e}"));
        }
    }
    match &cfg.output_path {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &rendered) {
                return fail(4, format!("{p}: {e}"));
            }
        }
        None => print!("{rendered}"),
    }
    ExitCode::SUCCESS
}
