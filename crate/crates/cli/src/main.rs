use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use torus_partition::bounds::{best_bounds, reported_sat_geometry_uppers, stripe_partition, Method, UpperRecord};
use torus_partition::globopt::{log_csv, optimize, OptimizerConfig};
use torus_partition::hex::{hex_partition, minimize_hex, search_hex, solve_hex_system, hex_csv_row, HEX_CSV_HEADER};
use torus_partition::json::{partition_from_json, partition_to_json, partition_to_json_with};
use torus_partition::render::render_svg;
use torus_partition::sat::{
    append_result, coloring_to_partition, decode_coloring, emit_cnf_with, parse_model_text, parse_results,
    published_unsat_records, solve_grid, CnfOptions, GridGraphSpec, SatBoundRecord, SatStatus, SolverConfig,
    SOLVER_ENV,
};
use torus_partition::scalar::decimal_string;
use torus_partition::table::{format_csv, format_text, hex_upper_records, parse_upper_records, table1, upper_record_line};
use torus_partition::verify::{verify_partition_with, VerifyOptions};
use torus_partition::{ExactHexOptimum, Partition64, Rational};

#[derive(Parser)]
#[command(name = "toruspart", version, about = "Bounds and certified partitions of the flat torus into parts of small diameter")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the best known bounds on d_m.
    Bounds {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
        #[command(flatten)]
        records: RecordFiles,
    },
    /// Write the m-stripe partition.
    Stripes {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the DIMACS encoding of the grid coloring problem.
    SatCnf {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Solve a grid coloring instance with an external SAT solver.
    SatRun {
        #[command(flatten)]
        grid: GridArgs,
        /// Solver command line; the CNF path is appended.
        #[arg(long, env = SOLVER_ENV)]
        solver: Option<String>,
        /// Results store to append to.
        #[arg(long)]
        results: Option<PathBuf>,
        /// Where to write the coloring (SAT) or the CNF (no solver).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Partition JSON for a SAT verdict.
        #[arg(long)]
        partition: Option<PathBuf>,
    },
    /// Turn a solver model into a coloring and a partition.
    SatDecode {
        model: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        coloring: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Optimal hexagonal tiling for a given or searched (a, b).
    Hex {
        #[arg(long, value_parser = clap::value_parser!(u32).range(7..))]
        m: u32,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "b")]
        a: Option<Vec<i64>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "a")]
        b: Option<Vec<i64>>,
        /// Coefficient bound for the search.
        #[arg(long, default_value_t = 5)]
        bound: i64,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Print a CSV row (coefficients, f_min, x*, y*, tau) instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Multi-restart descent from Voronoi seeds.
    Optimize {
        #[arg(long, value_parser = clap::value_parser!(u32).range(5..))]
        m: u32,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = 5000)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long, default_value_t = 0.0)]
        temperature: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Convergence log CSV (restart, iteration, phi).
        #[arg(long)]
        log: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        log_every: usize,
        /// Append the achieved bound to an upper-bound record file.
        #[arg(long)]
        record: Option<PathBuf>,
    },
    /// Certify a partition file; exits 1 on failure.
    Verify {
        file: PathBuf,
        /// Claimed bound; defaults to the file's tau.
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long, default_value_t = 512, value_parser = clap::value_parser!(u32).range(512..))]
        grid: u32,
    },
    /// Draw a partition file as SVG.
    Render {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Regenerate the table of bounds.
    Table {
        #[arg(long, default_value_t = 25, value_parser = clap::value_parser!(u32).range(1..))]
        m_max: u32,
        #[arg(long)]
        csv: bool,
        #[arg(long, default_value_t = 5)]
        hex_bound: i64,
        #[command(flatten)]
        records: RecordFiles,
    },
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    s: u32,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    m: u32,
    /// Pin the colors of a clique through cell 0.
    #[arg(long)]
    symmetry_breaking: bool,
}

impl GridArgs {
    fn spec(&self) -> Result<GridGraphSpec> {
        Ok(GridGraphSpec::new(self.s, self.k, self.m)?)
    }
}

#[derive(Args)]
struct RecordFiles {
    /// SAT results store (m,s,k,status,wall_time_seconds); the bundled UNSAT records are always included.
    #[arg(long)]
    sat_results: Option<PathBuf>,
    /// Upper-bound records (m,tau,method).
    #[arg(long)]
    uppers: Option<PathBuf>,
}

impl RecordFiles {
    fn load(&self) -> Result<(Vec<SatBoundRecord>, Vec<UpperRecord>)> {
        let mut sat = published_unsat_records();
        if let Some(p) = &self.sat_results {
            sat.extend(parse_results(&read(p)?)?);
        }
        let mut uppers = reported_sat_geometry_uppers();
        if let Some(p) = &self.uppers {
            uppers.extend(parse_upper_records(&read(p)?).map_err(anyhow::Error::msg)?);
        }
        Ok((sat, uppers))
    }
}

fn read(p: &Path) -> Result<String> {
    fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                out.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

fn hex_metadata(o: &ExactHexOptimum) -> serde_json::Value {
    serde_json::json!({
        "a": o.spec.a,
        "b": o.spec.b,
        "f_min": o.f_min.to_string(),
        "x_star": o.x_star.to_string(),
        "y_star": o.y_star.to_string(),
        "tau": decimal_string(o.tau),
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Bounds { m, records } => {
            let (sat, uppers) = records.load()?;
            let mut uppers = uppers;
            uppers.extend(hex_upper_records([m], 5));
            let r = best_bounds(m, &sat, &uppers);
            println!(
                "m={} lower={:.12} ({}) upper={:.12} ({}) gap={:.6}",
                r.m, r.lower, r.lower_method, r.upper, r.upper_method, r.gap()
            );
        }
        Command::Stripes { m, output } => {
            let p = stripe_partition::<f64>(m);
            emit(output.as_deref(), &partition_to_json(&p))?;
        }
        Command::SatCnf { grid, output } => {
            let cnf = emit_cnf_with(&grid.spec()?, CnfOptions { symmetry_breaking: grid.symmetry_breaking });
            emit(output.as_deref(), &cnf)?;
        }
        Command::SatRun { grid, solver, results, output, partition } => {
            let spec = grid.spec()?;
            let opts = CnfOptions { symmetry_breaking: grid.symmetry_breaking };
            let Some(config) = solver.as_deref().and_then(SolverConfig::from_command_line) else {
                eprintln!("warning: no SAT solver configured (--solver or {SOLVER_ENV}); writing CNF only");
                emit(output.as_deref(), &emit_cnf_with(&spec, opts))?;
                return Ok(ExitCode::SUCCESS);
            };
            let record = solve_grid(&spec, &config, opts)?;
            println!(
                "m={} s={} k={} tau={:.12} status={} time={:.3}s",
                record.m,
                record.s,
                record.k,
                record.tau(),
                record.status.as_str(),
                record.wall_time_seconds
            );
            if let Some(path) = &results {
                append_result(path, &record)?;
            }
            if let (SatStatus::SatWithColoring, Some(c)) = (record.status, &record.coloring) {
                if let Some(path) = &output {
                    fs::write(path, c.to_text())?;
                }
                if let Some(path) = &partition {
                    fs::write(path, partition_to_json(&coloring_to_partition(c)))?;
                }
            }
        }
        Command::SatDecode { model, grid, coloring, output } => {
            let spec = grid.spec()?;
            let lits = parse_model_text(&read(&model)?)?;
            let c = decode_coloring(&lits, &spec)?;
            if let Some(path) = &coloring {
                fs::write(path, c.to_text())?;
            }
            emit(output.as_deref(), &partition_to_json(&coloring_to_partition(&c)))?;
        }
        Command::Hex { m, a, b, bound, output, csv } => {
            let opt: ExactHexOptimum = match (a, b) {
                (Some(a), Some(b)) => {
                    let (Ok(a), Ok(b)) = (<[i64; 3]>::try_from(a), <[i64; 3]>::try_from(b)) else {
                        bail!("--a and --b take exactly three integers each");
                    };
                    minimize_hex(&solve_hex_system::<Rational>(a, b, m)?)
                }
                _ => search_hex::<Rational>(m, bound)
                    .with_context(|| format!("no convex hexagonal tiling for m={m} with |coefficients| ≤ {bound}"))?,
            };
            if csv {
                emit(output.as_deref(), &format!("{HEX_CSV_HEADER}\n{}", hex_csv_row(&opt)))?;
            } else {
                let p: Partition64 = hex_partition(&opt)?;
                emit(output.as_deref(), &partition_to_json_with(&p, Some(hex_metadata(&opt))))?;
            }
            eprintln!("m={m} a={:?} b={:?} f_min={} x*={} y*={} tau={:.12}", opt.spec.a, opt.spec.b, opt.f_min, opt.x_star, opt.y_star, opt.tau);
        }
        Command::Optimize { m, restarts, iters, seed, step, temperature, output, log, log_every, record } => {
            let cfg = OptimizerConfig {
                restarts,
                iterations: iters,
                step_size: step,
                seed,
                softmax_temperature: temperature,
                log_every: if log.is_some() { log_every.max(1) } else { 0 },
                ..OptimizerConfig::default()
            };
            let res = optimize::<f64>(m as usize, &cfg)?;
            eprintln!("m={m} tau={:.12} best_restart={}", res.tau, res.best_restart);
            emit(output.as_deref(), &partition_to_json(&res.partition))?;
            if let Some(path) = &log {
                fs::write(path, log_csv(&res.log))?;
            }
            if let Some(path) = &record {
                let line = upper_record_line(&UpperRecord { m, tau: res.tau, method: Method::Globopt, certified: true });
                let mut f = fs::OpenOptions::new().create(true).append(true).open(path)?;
                writeln!(f, "{line}")?;
            }
        }
        Command::Verify { file, tau, grid } => {
            let mut p: Partition64 = partition_from_json(&read(&file)?)?;
            if let Some(t) = tau {
                p.tau = t;
            }
            let opts = VerifyOptions { grid: grid as usize, ..VerifyOptions::default() };
            let report = verify_partition_with(&p, &opts);
            println!("{}", report.summary());
            for f in report.failures() {
                println!("  {f}");
            }
            if !report.passed {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Render { file, output } => {
            let p: Partition64 = partition_from_json(&read(&file)?)?;
            emit(output.as_deref(), &render_svg(&p))?;
        }
        Command::Table { m_max, csv, hex_bound, records } => {
            let (sat, mut uppers) = records.load()?;
            uppers.extend(hex_upper_records(7..=m_max, hex_bound));
            let rows = table1(m_max, &sat, &uppers);
            print!("{}", if csv { format_csv(&rows) } else { format_text(&rows) });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
