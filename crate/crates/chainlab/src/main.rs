use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use chainlab::parser::parse_gamma;
use chainlab::render::{to_json, to_table};
use chainlab::scenario::{generate_text, Scenario, ScenarioName};
use chainlab::{compile, has_errors, run, DslError};

#[derive(Parser)]
#[command(name = "valkey", version, about = "Build valuation chains on K[x] and query them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(multiple = false)]
struct Format {
    /// JSON array, one object per query (default)
    #[arg(long)]
    json: bool,
    /// One line per query
    #[arg(long)]
    table: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run a script file (`-` reads standard input)
    Run {
        script: PathBuf,
        #[command(flatten)]
        format: Format,
    },
    /// Generate and run one of the worked examples
    Scenario {
        /// section6_first, section6_second or section3_example
        name: String,
        #[arg(long)]
        p: u32,
        /// Number of first-chain partial sums (and second-chain steps)
        #[arg(long, default_value_t = 5)]
        n: u32,
        /// Value of phi_omega under nu_(omega+1), a rational or `inf`
        #[arg(long)]
        gamma: Option<String>,
        /// Value of phi_(2omega) under nu_(2omega+1)
        #[arg(long)]
        gamma_prime: Option<String>,
        /// Highest approximation level for series valuations
        #[arg(long)]
        precision: Option<u32>,
        /// Root configuration of section3_example (1 or 2)
        #[arg(long, default_value_t = 1)]
        variant: u32,
        /// Generator cap used for limits
        #[arg(long)]
        nmax: Option<u32>,
        /// Print the generated script instead of running it
        #[arg(long)]
        emit_script: bool,
        #[command(flatten)]
        format: Format,
    },
}

const EXIT_RUNTIME: u8 = 1;
const EXIT_INPUT: u8 = 2;

fn fail(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("valkey: {e}");
    ExitCode::from(EXIT_INPUT)
}

fn execute(src: &str, format: &Format) -> ExitCode {
    let script = match compile(src) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let results = run(&script);
    let text = if format.table { to_table(&results) } else { to_json(&results) };
    print!("{text}");
    if has_errors(&results) {
        ExitCode::from(EXIT_RUNTIME)
    } else {
        ExitCode::SUCCESS
    }
}

fn scenario_from_flags(
    name: &str,
    p: u32,
    n: u32,
    gamma: Option<&str>,
    gamma_prime: Option<&str>,
    precision: Option<u32>,
    variant: u32,
    nmax: Option<u32>,
) -> Result<Scenario, DslError> {
    let which = ScenarioName::from_name(name)
        .ok_or_else(|| DslError::InvalidParameters(format!("unknown scenario `{name}`")))?;
    let mut sc = Scenario::new(which, p);
    sc.n = n;
    sc.variant = variant;
    sc.precision = precision;
    if let Some(g) = gamma {
        sc.gamma = parse_gamma(g)?;
    }
    if let Some(g) = gamma_prime {
        sc.gamma_prime = Some(parse_gamma(g)?);
    }
    if let Some(m) = nmax {
        sc.nmax = m;
    }
    sc.validate()?;
    Ok(sc)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { script, format } => {
            let src = if script.as_os_str() == "-" {
                std::io::read_to_string(std::io::stdin())
            } else {
                std::fs::read_to_string(&script)
            };
            match src {
                Ok(src) => execute(&src, &format),
                Err(e) => fail(format!("{}: {e}", script.display())),
            }
        }
        Command::Scenario { name, p, n, gamma, gamma_prime, precision, variant, nmax, emit_script, format } => {
            let sc = match scenario_from_flags(
                &name,
                p,
                n,
                gamma.as_deref(),
                gamma_prime.as_deref(),
                precision,
                variant,
                nmax,
            ) {
                Ok(sc) => sc,
                Err(e) => return fail(e),
            };
            let src = generate_text(&sc);
            if emit_script {
                print!("{src}");
                return ExitCode::SUCCESS;
            }
            execute(&src, &format)
        }
    }
}
