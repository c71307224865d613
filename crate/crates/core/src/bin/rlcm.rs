//! `rlcm`: command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid parameters,
//! 3 budget exceeded. Output goes to `--out`, else to `$RLCM_OUT_DIR/<name>`
//! when that variable is set, else to stdout.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rlc_moments::arith::rat_to_f64;
use rlc_moments::error::Error;
use rlc_moments::exponents::{exponent_grid, grid_csv};
use rlc_moments::krawtchouk::{KrawtchoukTable, TableJson};
use rlc_moments::limits::Limits;
use rlc_moments::moments::{central_moment_exact, EnsembleParams, Method};
use rlc_moments::montecarlo::{estimate, McConfig};
use rlc_moments::report::{Envelope, Format, MomentRecord, RationalJson, RunManifest};
use rlc_moments::verify::{all_passed, render_table, run_all, Fault, Level, VerifyOptions};

const OUT_DIR_VAR: &str = "RLCM_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "rlcm",
    version,
    about = "Moments of weight distributions of random binary linear codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Largest m*n for exhaustive matrix enumeration.
    #[arg(long, global = true)]
    max_matrix_bits: Option<u32>,

    /// Largest number of tuples any enumeration may visit.
    #[arg(long, global = true)]
    max_tuple_work: Option<u64>,

    /// Output file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    ExactEnsemble,
    ExactSum,
    Auto,
    Mc,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    TamperedRecurrence,
}

#[derive(Subcommand)]
enum Command {
    /// Krawtchouk table K_i(0..=n), plus norms up to order k.
    Kraw {
        n: u32,
        i: u32,
        #[arg(long)]
        k: Option<u32>,
    },
    /// k-th central moment of the weight-i count.
    Moments {
        n: u32,
        i: u32,
        m: u32,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exponent grid for k = 2..=kmax, with k0 and diagnostics.
    Exponents {
        n: u32,
        i: u32,
        m: u32,
        #[arg(long, default_value_t = 10)]
        kmax: u32,
    },
    /// Run the acceptance checks and print one line per check.
    Verify {
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
}

enum Failure {
    Engine(Error),
    Io(String),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

#[derive(Serialize)]
struct KrawResult {
    table: TableJson,
    norms: BTreeMap<String, RationalJson>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Engine(e)) => {
            eprintln!("rlcm: {e}");
            match e {
                Error::BudgetExceeded { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
        Err(Failure::Io(msg)) => {
            eprintln!("rlcm: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let mut limits = Limits::default();
    if let Some(b) = cli.max_matrix_bits {
        limits.max_matrix_bits = b;
    }
    if let Some(w) = cli.max_tuple_work {
        limits.max_tuple_work = w;
    }
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(Error::InvalidParams("--workers must be positive".into()).into());
        }
        // a second call only fails if the pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
    }
    let format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    let workers = cli.workers.unwrap_or_else(rayon::current_num_threads);

    match cli.command {
        Command::Kraw { n, i, k } => {
            let table = KrawtchoukTable::build(n, i, &limits)?;
            let name = format!("kraw-{n}-{i}");
            let manifest = manifest(cli, "kraw", &name, format, limits)
                .param("n", n)
                .param("i", i)
                .param("k", k);
            let body = match format {
                Format::Csv => match k {
                    Some(k) => {
                        let mut s = String::from("k,abs_norm,signed_moment\n");
                        for j in 1..=k {
                            s += &format!("{j},{},{}\n", table.abs_norm_k(j), table.signed_moment_k(j));
                        }
                        s
                    }
                    None => table.to_csv(),
                },
                Format::Json => {
                    let mut norms = BTreeMap::new();
                    norms.insert("k2".to_string(), RationalJson::from(&table.abs_norm_k(2)));
                    if let Some(k) = k {
                        norms.insert(format!("k{k}_abs"), RationalJson::from(&table.abs_norm_k(k)));
                        norms.insert(format!("k{k}_signed"), RationalJson::from(&table.signed_moment_k(k)));
                    }
                    Envelope::new(
                        manifest.clone(),
                        KrawResult {
                            table: table.to_json(),
                            norms,
                        },
                    )
                    .to_json()
                }
            };
            emit(cli, &name, &body)
        }
        Command::Moments {
            n,
            i,
            m,
            k,
            method,
            samples,
            seed,
        } => {
            let params = EnsembleParams::new(n, i, m)?;
            let name = format!("moments-{n}-{i}-{m}-{k}");
            let manifest = manifest(cli, "moments", &name, format, limits)
                .param("n", n)
                .param("i", i)
                .param("m", m)
                .param("k", k);
            let exact = match method {
                MethodArg::ExactEnsemble => Method::Ensemble,
                MethodArg::ExactSum => Method::TupleSum,
                MethodArg::Auto => Method::Auto,
                MethodArg::Mc => {
                    let mut manifest = manifest.param("method", "mc").param("samples", samples);
                    manifest.seed = Some(seed);
                    let cfg = McConfig {
                        params,
                        k_max: k,
                        samples,
                        seed,
                        workers,
                    };
                    let report = estimate(&cfg, &limits)?;
                    let body = match format {
                        Format::Json => Envelope::new(manifest.clone(), report).to_json(),
                        Format::Csv => report.to_csv(),
                    };
                    return emit(cli, &name, &body);
                }
            };
            let start = Instant::now();
            let (value, used) = central_moment_exact(&params, k, exact, &limits)?;
            let manifest = manifest.param("method", used.label());
            let var = rat_to_f64(&params.variance());
            let record = MomentRecord {
                params,
                k,
                method: used.label().to_string(),
                value: RationalJson::from(&value),
                value_f64: rat_to_f64(&value),
                normalized: rat_to_f64(&value) / var.powf(f64::from(k) / 2.0),
                wall_time_ms: start.elapsed().as_millis() as u64,
            };
            let body = match format {
                Format::Json => Envelope::new(manifest.clone(), record).to_json(),
                Format::Csv => format!(
                    "n,i,m,k,method,num,den,value,normalized\n{n},{i},{m},{k},{},{},{},{:e},{:e}\n",
                    record.method, record.value.num, record.value.den, record.value_f64, record.normalized
                ),
            };
            emit(cli, &name, &body)
        }
        Command::Exponents { n, i, m, kmax } => {
            let params = EnsembleParams::new(n, i, m)?;
            let rows = exponent_grid(&params, kmax, &limits)?;
            let name = format!("exponents-{n}-{i}-{m}");
            let manifest = manifest(cli, "exponents", &name, format, limits)
                .param("n", n)
                .param("i", i)
                .param("m", m)
                .param("kmax", kmax);
            let body = match format {
                Format::Json => Envelope::new(manifest.clone(), rows).to_json(),
                Format::Csv => grid_csv(&rows),
            };
            emit(cli, &name, &body)
        }
        Command::Verify {
            level,
            seed,
            inject_fault,
        } => {
            let level = match level {
                LevelArg::Quick => Level::Quick,
                LevelArg::Full => Level::Full,
            };
            let opts = VerifyOptions {
                level,
                seed,
                limits,
                fault: match inject_fault {
                    Some(FaultArg::TamperedRecurrence) => Fault::TamperedRecurrence,
                    None => Fault::None,
                },
            };
            let results = run_all(&opts);
            let mut manifest = manifest(cli, "verify", "verify", format, limits).param("level", level);
            manifest.seed = Some(seed);
            let body = match format {
                Format::Json => Envelope::new(manifest.clone(), &results).to_json(),
                Format::Csv => render_table(&results),
            };
            if matches!(format, Format::Json) {
                eprint!("{}", render_table(&results));
            }
            emit(cli, "verify", &body)?;
            if all_passed(&results) {
                Ok(())
            } else {
                Err(Failure::Verify)
            }
        }
    }
}

fn target_path(cli: &Cli, name: &str) -> Option<PathBuf> {
    let ext = match cli.format {
        FormatArg::Json => "json",
        FormatArg::Csv => "csv",
    };
    match (&cli.out, std::env::var_os(OUT_DIR_VAR)) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(dir)) => Some(PathBuf::from(dir).join(format!("{name}.{ext}"))),
        (None, None) => None,
    }
}

fn manifest(cli: &Cli, subcommand: &str, name: &str, format: Format, limits: Limits) -> RunManifest {
    let mut m = RunManifest::new(subcommand, format, limits);
    m.workers = cli.workers;
    m.output = target_path(cli, name).map(|p| p.display().to_string());
    m
}

fn emit(cli: &Cli, name: &str, body: &str) -> Result<(), Failure> {
    match target_path(cli, name) {
        Some(path) => {
            let mut text = body.to_string();
            if !text.ends_with('\n') {
                text.push('\n');
            }
            std::fs::write(&path, text).map_err(|e| Failure::Io(format!("writing {}: {e}", path.display())))
        }
        None => {
            println!("{}", body.trim_end());
            Ok(())
        }
    }
}
