use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gl3_verify::{emit_report, run_suite, CheckName, SuiteConfig, SuiteReport, ALL_CHECKS, THREADS_ENV};
use gl3_voronoi::characters::enumerate_characters;

const USAGE_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "gl3v", version, about = "Verification suite for GL(3) Voronoi identity kernels")]
struct Cli {
    /// Flat `key = value` configuration file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Report format: json or text.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Shift one coefficient of every model by 1e-3; checks that see it must fail.
    #[arg(long, global = true)]
    inject_fault: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dirichlet character utilities.
    Chars {
        #[command(subcommand)]
        action: CharsAction,
    },
    /// Run one check (or `all`).
    Verify {
        check: String,
        #[command(flatten)]
        flags: CheckFlags,
    },
    /// Run the registered checks, all of them unless `--checks` narrows the list.
    Suite {
        /// Comma-separated check names.
        #[arg(long)]
        checks: Option<String>,
        #[command(flatten)]
        flags: CheckFlags,
    },
    /// List the registered checks.
    List,
}

#[derive(Subcommand)]
enum CharsAction {
    /// Print exponent vector, conductor, order and parity of every character.
    List {
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        primitive_only: bool,
    },
}

/// Sweep flags; each maps to the configuration key of the same name.
#[derive(Args, Default)]
struct CheckFlags {
    #[arg(long)]
    c_max: Option<String>,
    /// Comma-separated m values (both signs are swept).
    #[arg(long, allow_hyphen_values = true)]
    m_set: Option<String>,
    #[arg(long)]
    m2_max: Option<String>,
    #[arg(long)]
    m_max: Option<String>,
    #[arg(long)]
    ell_max: Option<String>,
    #[arg(long)]
    n_max: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    /// Comma-separated levels.
    #[arg(long)]
    level: Option<String>,
    #[arg(long)]
    prime_bound: Option<String>,
    #[arg(long)]
    power_bound: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    /// Comma-separated first indices.
    #[arg(long)]
    q: Option<String>,
    /// Comma-separated moduli of the primitive characters.
    #[arg(long)]
    cstar: Option<String>,
    /// Series window `X:P:Q`.
    #[arg(long)]
    window: Option<String>,
    /// Fourier–Bessel grid: default or extended.
    #[arg(long)]
    grid: Option<String>,
    /// Complex spectral parameter, e.g. `0.3333+1.2i`.
    #[arg(long, allow_hyphen_values = true)]
    nu1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    nu2: Option<String>,
}

impl CheckFlags {
    fn pairs(&self) -> Vec<(&'static str, &String)> {
        let all = [
            ("c-max", &self.c_max),
            ("m-set", &self.m_set),
            ("m2-max", &self.m2_max),
            ("m-max", &self.m_max),
            ("ell-max", &self.ell_max),
            ("n-max", &self.n_max),
            ("tol", &self.tol),
            ("level", &self.level),
            ("prime-bound", &self.prime_bound),
            ("power-bound", &self.power_bound),
            ("trials", &self.trials),
            ("q", &self.q),
            ("cstar", &self.cstar),
            ("window", &self.window),
            ("grid", &self.grid),
            ("nu1", &self.nu1),
            ("nu2", &self.nu2),
        ];
        all.into_iter().filter_map(|(k, v)| v.as_ref().map(|v| (k, v))).collect()
    }
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(USAGE_ERROR)
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| format!("{THREADS_ENV}={v} is not a thread count"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn build_config(
    cli: &Cli,
    checks: Option<Vec<CheckName>>,
    flags: &CheckFlags,
    suite_checks: Option<&String>,
) -> Result<SuiteConfig, String> {
    let mut config = SuiteConfig::default();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))?;
        config.apply_file_text(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    if let Some(s) = cli.seed {
        config.seed = s;
    }
    if let Some(f) = &cli.format {
        config.set("format", f).map_err(|e| e.to_string())?;
    }
    if let Some(o) = &cli.output {
        config.output = Some(o.clone());
    }
    if cli.inject_fault {
        config.inject_fault = true;
    }
    for (k, v) in flags.pairs() {
        config.set(k, v).map_err(|e| e.to_string())?;
    }
    if let Some(list) = suite_checks {
        config.set("checks", list).map_err(|e| e.to_string())?;
    }
    if let Some(c) = checks {
        config.checks = c;
    }
    config.validate().map_err(|e| e.to_string())?;
    Ok(config)
}

fn chars_list(modulus: u64, primitive_only: bool) -> ExitCode {
    let chars = match enumerate_characters(modulus) {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    let gens: Vec<String> = chars
        .first()
        .map(|c| c.generators().iter().map(|(g, o)| format!("{g} (order {o})")).collect())
        .unwrap_or_default();
    println!("modulus {modulus} generators [{}]", gens.join(", "));
    for (i, chi) in chars.iter().enumerate() {
        if primitive_only && !chi.is_primitive() {
            continue;
        }
        println!(
            "{i:>4} exponents {:?} conductor {} order {} parity {}{}",
            chi.exponents(),
            chi.conductor(),
            chi.order(),
            if chi.parity() > 0 { "even" } else { "odd" },
            if chi.is_primitive() { " primitive" } else { "" }
        );
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = configure_threads() {
        return usage(e);
    }
    let config = match &cli.command {
        Command::Chars { action: CharsAction::List { modulus, primitive_only } } => {
            if *modulus == 0 {
                return usage("modulus must be positive");
            }
            return chars_list(*modulus, *primitive_only);
        }
        Command::List => {
            for c in ALL_CHECKS {
                println!("{:<24} {}", c.as_str(), c.summary());
            }
            return ExitCode::SUCCESS;
        }
        Command::Verify { check, flags } => {
            let checks = if check == "all" {
                ALL_CHECKS.to_vec()
            } else {
                match check.parse::<CheckName>() {
                    Ok(c) => vec![c],
                    Err(e) => return usage(e),
                }
            };
            build_config(&cli, Some(checks), flags, None)
        }
        Command::Suite { checks, flags } => build_config(&cli, None, flags, checks.as_ref()),
    };
    let config = match config {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    let report = SuiteReport::new(config.seed, run_suite(&config));
    if let Err(e) = emit_report(&report, config.format, config.output.as_deref()) {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
