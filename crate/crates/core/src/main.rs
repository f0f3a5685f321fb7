use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use galois_points::constants::DEFAULT_EXT_CAP;
use galois_points::suite::{parse_grid, run, sweep, RunConfig, Selector};

/// Verifies the Galois-point constructions for one parameter tuple or a grid.
#[derive(Parser, Debug)]
#[command(name = "galois-points", version)]
struct Cli {
    #[arg(long)]
    p: Option<u64>,
    /// q = p^n
    #[arg(long, default_value_t = 1)]
    n: u32,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    r: Option<u32>,
    /// thm1a, thm1b, thm2, lemma1, prop1 or all
    #[arg(long, default_value = "all")]
    check: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest degree over F_p allowed for the constant field
    #[arg(long, default_value_t = DEFAULT_EXT_CAP)]
    ext_cap: u32,
    /// Initial number of branch terms
    #[arg(long)]
    precision: Option<usize>,
    /// Write the JSON report here (`-` for stdout)
    #[arg(long)]
    json: Option<PathBuf>,
    /// File of `p n m|r selector` lines
    #[arg(long)]
    grid: Option<PathBuf>,
    /// Record wall-clock times in the report
    #[arg(long)]
    timings: bool,
}

fn write_json(path: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match path {
        None => Ok(()),
        Some(p) if p.as_os_str() == "-" => {
            println!("{text}");
            Ok(())
        }
        Some(p) => {
            std::fs::write(p, format!("{text}\n")).map_err(|e| format!("{}: {e}", p.display()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let check: Selector = match cli.check.parse() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let base = RunConfig {
        p: cli.p.unwrap_or(0),
        n: cli.n,
        m: cli.m,
        r: cli.r,
        check,
        seed: cli.seed,
        ext_cap: cli.ext_cap,
        precision: cli.precision,
        timings: cli.timings,
    };
    let to_stdout = cli.json.as_ref().is_some_and(|p| p.as_os_str() == "-");

    if let Some(path) = &cli.grid {
        let grid = match std::fs::read_to_string(path)
            .map_err(|e| format!("{}: {e}", path.display()))
            .and_then(|t| parse_grid(&t, &base).map_err(|e| e.to_string()))
        {
            Ok(g) => g,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        };
        let rep = sweep(&grid);
        if !to_stdout {
            for e in &rep.entries {
                let c = &e.config;
                let param =
                    c.m.map(|m| format!("m={m}"))
                        .or(c.r.map(|r| format!("r={r}")))
                        .unwrap_or_default();
                println!("{:8}  p={} n={} {param} {:?}", e.outcome, c.p, c.n, c.check);
            }
        }
        if let Err(e) = write_json(&cli.json, &rep.to_json()) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        return if rep.entries.iter().all(|e| e.outcome == "pass") {
            ExitCode::SUCCESS
        } else if rep.entries.iter().any(|e| e.outcome == "fail") {
            ExitCode::from(1)
        } else {
            ExitCode::from(2)
        };
    }

    if cli.p.is_none() {
        eprintln!("error: --p is required without --grid");
        return ExitCode::from(2);
    }
    let report = match run(&base) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if !to_stdout {
        print!("{}", report.to_text());
    }
    if let Err(e) = write_json(&cli.json, &report.to_json()) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
