use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use bilin::analysis::{estimate, optimal_hybrid, twit_bound, Algorithm, Backend, EstimateOptions};
use bilin::harness::{parse_instance, run_experiment, write_csv, ExperimentConfig, Statistic, TableRow};
use bilin::polyring::{random_planted, random_sequence, Params};
use bilin::solvers::{brute_force, y_hxl, y_mxl, y_xl, HybridConfig, SolveReport, Status};
use bilin::Error;

#[derive(Parser)]
#[command(name = "bilin", version, about = "Solve and analyse bilinear systems over prime fields")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    q: Option<u32>,
    #[arg(long, global = true)]
    nx: Option<usize>,
    #[arg(long, global = true)]
    ny: Option<usize>,
    #[arg(long, global = true)]
    m: Option<usize>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, env = "BILIN_THREADS")]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Alg {
    Yxl,
    Ymxl,
    Yhxl,
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Gaussian,
    Wiedemann,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a random instance as JSON.
    Gen {
        #[arg(long)]
        planted: bool,
        #[arg(long)]
        homogeneous: bool,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Solve an instance and print the report.
    Solve {
        /// Instance file; `-` or absent reads stdin.
        #[arg(long, short)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "ymxl")]
        alg: Alg,
        /// Degree for y-XL, degree bound for y-MXL (default: witness bound).
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long, default_value_t = 0)]
        ax: usize,
        #[arg(long, default_value_t = 0)]
        ay: usize,
        #[arg(long, value_enum, default_value = "gaussian")]
        backend: BackendArg,
    },
    /// Semiregularity campaign (default grid: n_x = 4, n_y = 4..8, q = 13).
    Semireg {
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Cost estimates (default: the n_x = 20 sweep over q = 5, 13, 31).
    Estimate {
        #[arg(long, default_value_t = 2.8)]
        omega: f64,
    },
    /// Full reproduction run.
    Tables {
        /// Which tables to run.
        #[arg(long, value_delimiter = ',', default_values_t = vec![1u8, 2, 3, 4])]
        which: Vec<u8>,
        /// Trials per cell (default 100 for table 1, 50 for tables 2 and 3).
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 2.8)]
        omega: f64,
        /// Directory for per-table CSV files; stdout when absent.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Budget(s) => Failure::Budget(s),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn params(g: &Global) -> Result<Option<Params>, Failure> {
    match (g.nx, g.ny, g.m) {
        (Some(nx), Some(ny), Some(m)) => Ok(Some(Params::new(nx, ny, m, g.q.unwrap_or(13))?)),
        (None, None, None) => Ok(None),
        _ => Err(Failure::Usage("--nx, --ny and --m must be given together".into())),
    }
}

fn emit_rows(rows: &[TableRow], format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    match format {
        Format::Csv => write_csv(rows, out)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, rows).map_err(Error::from)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let g = &cli.global;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match &cli.cmd {
        Cmd::Gen { planted, homogeneous, out: path } => {
            let p = params(g)?.ok_or_else(|| Failure::Usage("gen needs --nx, --ny and --m".into()))?;
            if *planted && *homogeneous {
                return Err(Failure::Usage("--planted and --homogeneous are exclusive".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            let b = if *planted { random_planted(p, &mut rng).0 } else { random_sequence(p, *homogeneous, &mut rng) };
            let text = serde_json::to_string_pretty(&b.to_json()).map_err(Error::from)? + "\n";
            match path {
                Some(p) => std::fs::write(p, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(0)
        }
        Cmd::Solve { input, alg, degree, ax, ay, backend } => {
            let text = match input {
                Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)?,
                _ => {
                    let mut s = String::new();
                    std::io::stdin().read_to_string(&mut s)?;
                    s
                }
            };
            let b = parse_instance(&text)?;
            let witness = || {
                twit_bound(b.nx(), b.ny(), b.m())
                    .map_err(|_| Failure::Usage("no witness degree for these parameters; pass --degree".into()))
            };
            let mut report: SolveReport = match alg {
                Alg::Yxl => y_xl(&b, match degree {
                    Some(d) => *d,
                    None => witness()?,
                })?,
                Alg::Ymxl => y_mxl(&b, match degree {
                    Some(d) => *d,
                    None => witness()?.max(3),
                })?,
                Alg::Yhxl => {
                    let backend = match backend {
                        BackendArg::Gaussian => Backend::Gaussian,
                        BackendArg::Wiedemann => Backend::Wiedemann,
                    };
                    y_hxl(&b, &HybridConfig { seed: g.seed, ..HybridConfig::new(*ax, *ay, backend) })?
                }
                Alg::Brute => {
                    let start = std::time::Instant::now();
                    let sols = brute_force(&b)?;
                    let mut r = SolveReport::new("brute-force");
                    r.status = Status::NoSolution;
                    if let Some((u, v)) = sols.into_iter().next() {
                        r.status = Status::SolutionFound { u, v };
                    }
                    r.wall_time_secs = start.elapsed().as_secs_f64();
                    r
                }
            };
            if let Status::SolutionFound { u, v } = &report.status {
                if !b.is_zero_at(u, v) {
                    report.status = Status::Undetermined;
                }
            }
            report.seed.get_or_insert(g.seed);
            match g.format.unwrap_or(Format::Json) {
                Format::Json => {
                    serde_json::to_writer_pretty(&mut out, &report).map_err(Error::from)?;
                    writeln!(out)?;
                }
                Format::Csv => {
                    let fmt = |x: &[u32]| x.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
                    let (status, u, v) = match &report.status {
                        Status::SolutionFound { u, v } => ("solution_found", fmt(u), fmt(v)),
                        Status::NoSolution => ("no_solution", String::new(), String::new()),
                        Status::Undetermined => ("undetermined", String::new(), String::new()),
                    };
                    writeln!(out, "algorithm,status,u,v,solving_degree,linear_polys,wall_time_secs")?;
                    writeln!(
                        out,
                        "{},{status},{u},{v},{},{},{:.6}",
                        report.algorithm,
                        report.solving_degree.map_or(String::new(), |d| d.to_string()),
                        report.linear_polys.len(),
                        report.wall_time_secs
                    )?;
                }
            }
            Ok(match report.status {
                Status::SolutionFound { .. } => 0,
                Status::NoSolution => 1,
                Status::Undetermined => 3,
            })
        }
        Cmd::Semireg { trials } => {
            let mut cfg = ExperimentConfig::table1(*trials, g.seed);
            if let Some(p) = params(g)? {
                cfg = ExperimentConfig::custom(&[p.nx], &[p.ny], &[p.m], &[p.q], cfg.stats, *trials, g.seed)?;
            } else if let Some(q) = g.q {
                cfg.grid.iter_mut().for_each(|p| p.q = q);
            }
            let rows = run_experiment(&cfg)?;
            emit_rows(&rows, g.format.unwrap_or(Format::Csv), &mut out)?;
            Ok(0)
        }
        Cmd::Estimate { omega } => {
            let grid = match params(g)? {
                Some(p) => vec![p],
                None => ExperimentConfig::table4(*omega).grid,
            };
            let mut records = Vec::new();
            for p in grid {
                let o = EstimateOptions { omega: *omega, ..Default::default() };
                let cost = |alg| estimate(alg, p, o).map(|e| format!("{:.2}", e.log2_mults)).unwrap_or_default();
                let h = optimal_hybrid(p, *omega)?;
                let mxl = estimate(Algorithm::Ymxl, p, o)?;
                records.push(serde_json::json!({
                    "q": p.q, "nx": p.nx, "ny": p.ny, "m": p.m,
                    "mxl": mxl.log2_mults.round() as u32,
                    "hxl": h.cost.log2_mults.round() as u32,
                    "a_x": h.a_x, "a_y": h.a_y,
                    "alg": if h.backend == Backend::Gaussian { "S" } else { "W" },
                    "mxl_log2": format!("{:.2}", mxl.log2_mults),
                    "hxl_log2": format!("{:.2}", h.cost.log2_mults),
                    "xl_log2": cost(Algorithm::Yxl),
                    "f4_log2": cost(Algorithm::F4),
                    "exhaustive_log2": cost(Algorithm::Exhaustive),
                }));
            }
            match g.format.unwrap_or(Format::Csv) {
                Format::Json => {
                    serde_json::to_writer_pretty(&mut out, &records).map_err(Error::from)?;
                    writeln!(out)?;
                }
                Format::Csv => {
                    let keys = ["q", "nx", "ny", "m", "mxl", "hxl", "a_x", "a_y", "alg", "mxl_log2", "hxl_log2", "xl_log2", "f4_log2", "exhaustive_log2"];
                    writeln!(out, "{}", keys.join(","))?;
                    for r in &records {
                        let cells: Vec<String> = keys
                            .iter()
                            .map(|k| match &r[*k] {
                                serde_json::Value::String(s) => s.clone(),
                                v => v.to_string(),
                            })
                            .collect();
                        writeln!(out, "{}", cells.join(","))?;
                    }
                }
            }
            Ok(0)
        }
        Cmd::Tables { which, trials, omega, out_dir } => {
            let format = g.format.unwrap_or(Format::Csv);
            for &t in which {
                let cfg = match t {
                    1 => ExperimentConfig::table1(trials.unwrap_or(100), g.seed),
                    2 => ExperimentConfig::table2(trials.unwrap_or(50), g.seed),
                    3 => ExperimentConfig::table3(trials.unwrap_or(50), g.seed),
                    4 => ExperimentConfig::table4(*omega),
                    other => return Err(Failure::Usage(format!("unknown table {other}"))),
                };
                let mut cfg = cfg;
                if t == 2 || t == 3 {
                    // theoretical and empirical columns side by side
                    cfg.stats.insert(0, Statistic::Dreg);
                }
                let rows = run_experiment(&cfg)?;
                match out_dir {
                    Some(dir) => {
                        std::fs::create_dir_all(dir)?;
                        let ext = if format == Format::Csv { "csv" } else { "json" };
                        let mut f = std::fs::File::create(dir.join(format!("table{t}.{ext}")))?;
                        emit_rows(&rows, format, &mut f)?;
                    }
                    None => emit_rows(&rows, format, &mut out)?,
                }
            }
            Ok(0)
        }
    }
}
