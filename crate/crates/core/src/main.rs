use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use parabraid::constraints::Sign;
use parabraid::error::Error;
use parabraid::report::{self, Check, GeneratorSet, ReportOptions, RunReport};
use parabraid::solver::{SolverConfig, DEFAULT_RESTARTS, DEFAULT_SEED};

#[derive(Parser)]
#[command(name = "parabraid", version, about = "Parafermion braiding verification suites")]
struct Cli {
    /// Worker threads for the parallel stages.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Record wall time in the report.
    #[arg(long, global = true)]
    timings: bool,
    /// Print the JSON report instead of the text summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parafermion and parity-operator relations.
    Algebra {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        d: u64,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        pairs: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Random-restart search for braid coefficient solutions.
    Solve {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=6))]
        d: u64,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Also rerun with doubled restarts and compare cluster counts.
        #[arg(long)]
        stability: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Identify the logical gate of a braid word.
    Gates {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        d: u64,
        #[arg(long, default_value_t = 0)]
        r: i64,
        #[arg(long, default_value = "+", allow_hyphen_values = true)]
        sign: Sign,
        /// Braid word ("1 2 -1", time-ordered) or a shortcut F, S, T, V, W with optional ^k.
        #[arg(long, allow_hyphen_values = true)]
        braid: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Clifford closure of braid-derived or reference generators.
    Clifford {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        d: u64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=2))]
        n: u64,
        #[arg(long, value_enum, default_value_t = Generators::Braid)]
        generators: Generators,
        #[arg(long, default_value_t = parabraid::clifford::DEFAULT_CLOSURE_LIMIT)]
        limit: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run every suite and write `<out>.json` and `<out>.md`.
    ReportAll {
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(2..=7))]
        d_max: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long, default_value = "parabraid-report")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct OutArgs {
    /// Also write the JSON report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Generators {
    Braid,
    Reference,
}

fn usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidDimension(_)
            | Error::SizeBound { .. }
            | Error::IndexOutOfRange { .. }
            | Error::BraidParse(_)
            | Error::InvalidArgument(_)
            | Error::EmptySystem { .. }
    )
}

fn render_text(r: &RunReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}: {}", r.command, if r.passed { "PASS" } else { "FAIL" });
    for c in &r.checks {
        let status = match (c.asserted, c.passed) {
            (true, true) => "pass",
            (true, false) => "FAIL",
            (false, _) => "info",
        };
        let bound = match (c.tolerance, c.expected) {
            (Some(t), _) => format!("<= {t:e}"),
            (None, Some(e)) => format!("expected {e}"),
            _ => String::new(),
        };
        let value = if c.tolerance.is_some() { format!("{:.3e}", c.value) } else { c.value.to_string() };
        let _ = writeln!(s, "  [{status}] {}: {value} {bound}", c.name);
    }
    if let Some(id) = r.data.get("identification") {
        let _ = writeln!(s, "  gate: {}", id["gate"].as_str().unwrap_or("?"));
        if let Some(p) = id["phase_exponent_mod_8d"].as_i64() {
            let _ = writeln!(s, "  phase: exp(2πi·{p}/(8d))");
        }
        for p in r.data["pauli_action"].as_array().into_iter().flatten() {
            let _ = writeln!(s, "  {}", p.as_str().unwrap_or("?"));
        }
    }
    if let Some(ms) = r.elapsed_ms {
        let _ = writeln!(s, "  elapsed {ms} ms");
    }
    s
}

/// Write to stdout; a closed pipe (`| head`) is not an error.
fn print_out(text: &str) -> Result<(), String> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(format!("cannot write to stdout: {e}")),
        _ => Ok(()),
    }
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), String> {
    std::fs::write(path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn emit(cli: &Cli, r: &RunReport, out: &OutArgs) -> Result<(), String> {
    let text = serde_json::to_string_pretty(r).map_err(|e| e.to_string())?;
    if let Some(p) = &out.out {
        write_file(p, &(text.clone() + "\n"))?;
    }
    if cli.json {
        print_out(&(text + "\n"))
    } else {
        print_out(&render_text(r))
    }
}

fn run(cli: &Cli) -> Result<bool, (u8, String)> {
    let lib = |e: Error| (if usage_error(&e) { 2 } else { 1 }, e.to_string());
    let io = |e: String| (1, e);
    let t = cli.timings;
    match &cli.command {
        Command::Algebra { d, pairs, out } => {
            let r = report::timed(t, || report::algebra_suite(*d as usize, *pairs as usize)).map_err(lib)?;
            emit(cli, &r, out).map_err(io)?;
            Ok(r.passed)
        }
        Command::Solve { d, restarts, seed, stability, out } => {
            let cfg = SolverConfig::new(*d as usize).with_restarts(*restarts).with_seed(*seed);
            let mut r = report::timed(t, || report::solve_suite(&cfg)).map_err(lib)?;
            if *stability {
                r.checks.push(report::solver_stability_check(&cfg).map_err(lib)?);
                r.passed = r.checks.iter().filter(|c| c.asserted).all(|c| c.passed);
            }
            emit(cli, &r, out).map_err(io)?;
            Ok(r.passed)
        }
        Command::Gates { d, r, sign, braid, out } => {
            let rep = report::timed(t, || report::gates_suite(*d as usize, *r, *sign, braid)).map_err(lib)?;
            emit(cli, &rep, out).map_err(io)?;
            Ok(rep.passed)
        }
        Command::Clifford { d, n, generators, limit, out } => {
            let set = match generators {
                Generators::Braid => GeneratorSet::Braid,
                Generators::Reference => GeneratorSet::Reference,
            };
            let (d, n) = (*d as usize, *n as usize);
            match report::timed(t, || report::clifford_suite(d, n, set, *limit, t)) {
                Ok(r) => {
                    emit(cli, &r, out).map_err(io)?;
                    Ok(r.passed)
                }
                Err(Error::LimitExceeded { limit }) => {
                    let r = RunReport {
                        command: "clifford".into(),
                        parameters: json!({"d": d, "n": n, "generator_set": set.as_str(), "limit": limit})
                            .as_object()
                            .cloned()
                            .unwrap_or_default(),
                        seed: None,
                        checks: vec![Check::flag("closure finished within limit", "closure limit", false)],
                        passed: false,
                        data: Value::Null,
                        elapsed_ms: None,
                    };
                    emit(cli, &r, out).map_err(io)?;
                    Ok(false)
                }
                Err(e) => Err(lib(e)),
            }
        }
        Command::ReportAll { d_max, seed, restarts, out } => {
            let mut opts = ReportOptions::new(*d_max as usize, *seed);
            opts.restarts = *restarts;
            opts.timings = t;
            let agg = report::report_all(&opts);
            let value = serde_json::to_value(&agg).map_err(|e| (1, e.to_string()))?;
            let text = serde_json::to_string_pretty(&value).map_err(|e| (1, e.to_string()))?;
            write_file(&out.with_extension("json"), &(text.clone() + "\n")).map_err(io)?;
            write_file(&out.with_extension("md"), &report::render_markdown(&value)).map_err(io)?;
            let mut s = String::new();
            if cli.json {
                s = text + "\n";
            } else {
                for suite in &agg.suites {
                    let _ = writeln!(s, "{} {}: {}", suite.command, compact(&suite.parameters), if suite.passed { "PASS" } else { "FAIL" });
                    for c in suite.failed_checks() {
                        let _ = writeln!(s, "  FAIL {}: {}", c.name, c.value);
                    }
                }
                for e in &agg.errors {
                    let _ = writeln!(s, "error: {e}");
                }
                let _ = writeln!(s, "overall: {}", if agg.passed { "PASS" } else { "FAIL" });
            }
            print_out(&s).map_err(io)?;
            Ok(agg.passed)
        }
    }
}

fn compact(params: &serde_json::Map<String, Value>) -> String {
    params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs == 0 {
        eprintln!("error: --jobs must be at least 1");
        return ExitCode::from(2);
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
