//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run all criteria with `cargo test -p bilin --test acceptance`, or a
//! subset with `-- 3 7`. The process exits 0 after reporting unless
//! `BILIN_ACCEPTANCE_STRICT` is set, in which case any FAIL exits 1.

mod common;

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use bilin::analysis::{dreg_formula, estimate, optimal_hybrid, tff_formula, twit_bound, Algorithm, Backend, EstimateOptions};
use bilin::field::FieldCtx;
use bilin::harness::{run_experiment, ExperimentConfig, ExperimentKind, Statistic, TableRow};
use bilin::linalg::{rank, solve_left, wiedemann_consistent, wiedemann_trials_for, CsrMatrix};
use bilin::macaulay::build_y_macaulay;
use bilin::polyring::{random_planted, random_sequence, BilinearPoly, BilinearSequence, Params};
use bilin::solvers::{brute_force, witness_consistency_test, y_hxl, y_mxl, y_xl_default, HybridConfig, SolveReport, Status};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20240601;
const SEMIREG_TRIALS: usize = 100;
const SEMIREG_MIN_NONDIVISIBLE: f64 = 0.97;
const SEMIREG_DIVISIBLE_TOL: f64 = 0.10;
const SOLVING_TRIALS: usize = 50;
const SOLVING_MIN_FREQ: f64 = 0.85;
const FIRST_FALL_TRIALS: usize = 50;
const ORACLE_INSTANCES: usize = 100;
const ORACLE_MIN_AGREEMENT: f64 = 0.95;
const WITNESS_TRIALS: usize = 200;
const WITNESS_MIN_RATE: f64 = 0.95;
const COST_TOL: f64 = 1.0;
const OMEGA: f64 = 2.8;
const BACKEND_SYSTEMS: usize = 200;
const WIEDEMANN_BITS: f64 = 20.0;
const DOMINANCE_INSTANCES: usize = 100;

/// (n_y, m, d̃, % semiregular), n_x = 4, q = 13.
const TABLE1: [(usize, usize, u32, u32); 54] = [
    (4, 8, 4, 88), (4, 9, 4, 100), (4, 10, 3, 93), (4, 11, 3, 100), (4, 12, 3, 100), (4, 13, 3, 100),
    (4, 14, 3, 100), (4, 15, 3, 99), (4, 16, 2, 93),
    (5, 9, 5, 99), (5, 10, 4, 100), (5, 11, 4, 100), (5, 12, 3, 90), (5, 13, 3, 100), (5, 14, 3, 100),
    (5, 15, 3, 100), (5, 16, 3, 100), (5, 17, 3, 100), (5, 18, 3, 100),
    (6, 10, 5, 99), (6, 11, 4, 100), (6, 12, 4, 100), (6, 13, 4, 100), (6, 14, 3, 92), (6, 15, 3, 100),
    (6, 16, 3, 100), (6, 17, 3, 100), (6, 18, 3, 100), (6, 19, 3, 100), (6, 20, 3, 100),
    (7, 11, 5, 100), (7, 12, 4, 86), (7, 13, 4, 100), (7, 14, 4, 100), (7, 15, 4, 100), (7, 16, 3, 88),
    (7, 17, 3, 100), (7, 18, 3, 100), (7, 19, 3, 100), (7, 20, 3, 100), (7, 21, 3, 100), (7, 22, 3, 100),
    (8, 12, 5, 98), (8, 13, 5, 100), (8, 14, 4, 100), (8, 15, 4, 100), (8, 16, 4, 100), (8, 17, 4, 100),
    (8, 18, 3, 92), (8, 19, 3, 100), (8, 20, 3, 100), (8, 21, 3, 100), (8, 22, 3, 100), (8, 23, 3, 100),
];

/// Printed modal value and its frequency.
type Cell = (u32, f64);

struct SolvingRow {
    ny: usize,
    m: usize,
    tff: u32,
    twit: u32,
    first_fall: Cell,
    xl: Cell,
    mxl: Cell,
}

const fn row(ny: usize, m: usize, tff: u32, twit: u32, first_fall: Cell, xl: Cell, mxl: Cell) -> SolvingRow {
    SolvingRow { ny, m, tff, twit, first_fall, xl, mxl }
}

/// Solving-degree tables, n_x = 4, q = 13. The first 24 rows cover n_y ≤ 6.
const SOLVING: [SolvingRow; 45] = [
    row(4, 10, 4, 5, (4, 0.93), (5, 0.89), (4, 1.0)),
    row(4, 11, 3, 5, (3, 1.0), (5, 1.0), (4, 1.0)),
    row(4, 12, 3, 4, (3, 1.0), (4, 1.0), (3, 1.0)),
    row(4, 13, 3, 4, (3, 1.0), (4, 1.0), (3, 1.0)),
    row(4, 14, 3, 4, (3, 1.0), (4, 1.0), (3, 1.0)),
    row(4, 15, 3, 3, (3, 1.0), (3, 0.89), (3, 1.0)),
    row(4, 16, 3, 3, (3, 1.0), (3, 1.0), (3, 1.0)),
    row(5, 11, 4, 6, (4, 1.0), (6, 0.98), (4, 0.98)),
    row(5, 12, 4, 5, (4, 0.95), (5, 1.0), (4, 1.0)),
    row(5, 13, 3, 5, (3, 1.0), (5, 1.0), (4, 1.0)),
    row(5, 14, 3, 4, (3, 1.0), (4, 1.0), (3, 1.0)),
    row(5, 15, 3, 4, (3, 1.0), (4, 1.0), (3, 1.0)),
    row(5, 16, 3, 4, (3, 1.0), (4, 1.0), (3, 1.0)),
    row(5, 17, 3, 4, (3, 1.0), (4, 1.0), (3, 1.0)),
    row(5, 18, 3, 3, (3, 1.0), (3, 1.0), (3, 1.0)),
    row(6, 12, 4, 6, (4, 1.0), (6, 0.99), (4, 0.99)),
    row(6, 13, 4, 5, (4, 1.0), (5, 1.0), (4, 1.0)),
    row(6, 14, 4, 5, (4, 0.94), (5, 1.0), (4, 1.0)),
    row(6, 15, 3, 4, (3, 1.0), (4, 0.95), (4, 1.0)),
    row(6, 16, 3, 4, (3, 1.0), (4, 1.0), (3, 1.0)),
    row(6, 17, 3, 4, (3, 1.0), (4, 1.0), (3, 1.0)),
    row(6, 18, 3, 4, (3, 1.0), (4, 1.0), (3, 1.0)),
    row(6, 19, 3, 4, (3, 1.0), (4, 1.0), (3, 1.0)),
    row(6, 20, 3, 3, (3, 1.0), (3, 0.95), (3, 1.0)),
    row(7, 13, 4, 6, (4, 1.0), (6, 1.0), (5, 1.0)),
    row(7, 14, 4, 5, (4, 1.0), (5, 1.0), (4, 1.0)),
    row(7, 15, 4, 5, (4, 1.0), (5, 1.0), (4, 1.0)),
    row(7, 16, 4, 5, (4, 0.94), (5, 1.0), (4, 1.0)),
    row(7, 17, 3, 4, (3, 1.0), (4, 1.0), (4, 1.0)),
    row(7, 18, 3, 4, (3, 1.0), (4, 1.0), (3, 1.0)),
    row(7, 19, 3, 4, (3, 1.0), (4, 1.0), (3, 1.0)),
    row(7, 20, 3, 4, (3, 1.0), (4, 1.0), (3, 1.0)),
    row(7, 21, 3, 4, (3, 1.0), (4, 1.0), (3, 1.0)),
    row(7, 22, 3, 4, (3, 1.0), (4, 1.0), (3, 1.0)),
    row(8, 14, 4, 6, (4, 1.0), (6, 1.0), (5, 1.0)),
    row(8, 15, 4, 5, (4, 1.0), (5, 0.9), (4, 1.0)),
    row(8, 16, 4, 5, (4, 1.0), (5, 1.0), (4, 1.0)),
    row(8, 17, 4, 5, (4, 1.0), (5, 1.0), (4, 1.0)),
    row(8, 18, 4, 5, (4, 0.91), (5, 1.0), (4, 1.0)),
    row(8, 19, 3, 4, (3, 1.0), (4, 1.0), (4, 1.0)),
    row(8, 20, 3, 4, (3, 1.0), (4, 1.0), (3, 1.0)),
    row(8, 21, 3, 4, (3, 1.0), (4, 1.0), (3, 1.0)),
    row(8, 22, 3, 4, (3, 1.0), (4, 1.0), (3, 1.0)),
    row(8, 23, 3, 4, (3, 1.0), (4, 1.0), (3, 1.0)),
    row(8, 24, 3, 4, (3, 1.0), (4, 1.0), (3, 1.0)),
];

/// Cells of the solving tables run in criterion 3.
const SOLVING_SUBSET: [(usize, usize); 9] = [(4, 10), (4, 11), (4, 12), (4, 13), (5, 13), (5, 14), (6, 16), (7, 13), (8, 14)];

/// (q, n_y, m, MXL, a_x, a_y, HXL, alg), n_x = 20.
const TABLE4: [(u32, usize, usize, u32, usize, usize, u32, char); 36] = [
    (5, 20, 42, 110, 19, 0, 59, 'S'), (5, 20, 46, 101, 19, 0, 59, 'S'), (5, 20, 50, 94, 19, 0, 60, 'S'),
    (5, 20, 54, 90, 20, 0, 60, 'W'), (5, 20, 58, 86, 20, 0, 60, 'W'), (5, 20, 62, 82, 20, 0, 60, 'W'),
    (5, 30, 52, 136, 20, 0, 61, 'S'), (5, 30, 56, 128, 20, 0, 61, 'S'), (5, 30, 60, 119, 20, 0, 61, 'S'),
    (5, 30, 64, 115, 19, 0, 61, 'S'), (5, 30, 68, 110, 19, 0, 61, 'S'), (5, 30, 72, 106, 19, 0, 61, 'S'),
    (13, 20, 42, 110, 19, 0, 85, 'S'), (13, 20, 46, 101, 19, 0, 86, 'S'), (13, 20, 50, 94, 2, 1, 86, 'W'),
    (13, 20, 54, 90, 3, 0, 80, 'W'), (13, 20, 58, 86, 3, 0, 77, 'W'), (13, 20, 62, 82, 2, 0, 74, 'W'),
    (13, 30, 52, 136, 20, 0, 89, 'S'), (13, 30, 56, 128, 20, 0, 89, 'S'), (13, 30, 60, 119, 20, 0, 89, 'S'),
    (13, 30, 64, 115, 19, 0, 87, 'S'), (13, 30, 68, 110, 19, 0, 87, 'S'), (13, 30, 72, 106, 19, 0, 87, 'S'),
    (31, 20, 42, 110, 3, 0, 98, 'W'), (31, 20, 46, 101, 1, 0, 92, 'W'), (31, 20, 50, 94, 1, 0, 87, 'W'),
    (31, 20, 54, 90, 1, 0, 82, 'W'), (31, 20, 58, 86, 1, 0, 79, 'W'), (31, 20, 62, 82, 1, 0, 76, 'W'),
    (31, 30, 52, 136, 20, 0, 114, 'S'), (31, 30, 56, 128, 1, 0, 110, 'W'), (31, 30, 60, 119, 1, 0, 104, 'W'),
    (31, 30, 64, 115, 1, 0, 101, 'W'), (31, 30, 68, 110, 0, 1, 97, 'W'), (31, 30, 72, 106, 0, 1, 94, 'W'),
];

struct Outcome {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>, details: Vec<String>) -> Self {
        Outcome { pass, summary: summary.into(), details }
    }
}

fn p(nx: usize, ny: usize, m: usize, q: u32) -> Params {
    Params::new(nx, ny, m, q).unwrap()
}

fn divisible(nx: usize, ny: usize, m: usize) -> bool {
    (nx * (ny - 1)) % (m - nx) == 0
}

fn find<'a>(rows: &'a [TableRow], params: Params, stat: Statistic) -> &'a TableRow {
    rows.iter().find(|r| r.params == params && r.statistic == stat.name()).expect("row present")
}

fn share(r: &TableRow, v: u32) -> f64 {
    *r.histogram.get(&v).unwrap_or(&0) as f64 / r.trials as f64
}

fn degree_formulas() -> Outcome {
    let mut bad = Vec::new();
    for &(ny, m, d, _) in &TABLE1 {
        let got = dreg_formula(4, ny, m).unwrap();
        if got != d {
            bad.push(format!("d_reg(4,{ny},{m}) = {got}, table {d}"));
        }
    }
    for r in &SOLVING {
        let (tff, twit) = (tff_formula(4, r.ny, r.m).unwrap(), twit_bound(4, r.ny, r.m).unwrap());
        if (tff, twit) != (r.tff, r.twit) {
            bad.push(format!("(4,{},{}): T_ff {tff} T_wit {twit}, table {} {}", r.ny, r.m, r.tff, r.twit));
        }
    }
    let n = TABLE1.len() + SOLVING.len();
    Outcome::new(bad.is_empty(), format!("{}/{n} rows reproduced", n - bad.len()), bad)
}

fn semiregularity() -> Outcome {
    let rows = run_experiment(&ExperimentConfig::table1(SEMIREG_TRIALS, SEED)).unwrap();
    let mut bad = Vec::new();
    let mut details = Vec::new();
    for &(ny, m, _, pct) in &TABLE1 {
        let r = find(&rows, p(4, ny, m, 13), Statistic::Semiregular);
        let obs = share(r, 1);
        let ok = if divisible(4, ny, m) {
            (obs - pct as f64 / 100.0).abs() <= SEMIREG_DIVISIBLE_TOL
        } else {
            obs >= SEMIREG_MIN_NONDIVISIBLE
        };
        let line = format!(
            "(4,{ny},{m}) {}: observed {obs:.2}, table {:.2}",
            if divisible(4, ny, m) { "divisible" } else { "non-divisible" },
            pct as f64 / 100.0
        );
        if !ok {
            bad.push(line.clone());
        }
        if divisible(4, ny, m) || !ok {
            details.push(line);
        }
    }
    let summary = format!("{}/{} cells within tolerance ({SEMIREG_TRIALS} trials)", TABLE1.len() - bad.len(), TABLE1.len());
    Outcome::new(bad.is_empty(), summary, details)
}

fn solving_row(ny: usize, m: usize) -> &'static SolvingRow {
    SOLVING.iter().find(|r| r.ny == ny && r.m == m).unwrap()
}

fn check_cell(label: &str, r: &TableRow, printed: Cell, min_freq: f64) -> Result<String, String> {
    let line = format!("{label}: modal {:?} ({:.2}), table {} ({:.2})", r.value, r.frequency, printed.0, printed.1);
    let freq_ok = printed.1 < 1.0 || r.frequency >= min_freq;
    if r.value == Some(printed.0) && freq_ok {
        Ok(line)
    } else {
        Err(line)
    }
}

fn solving_degrees() -> Outcome {
    let grid: Vec<Params> = SOLVING_SUBSET.iter().map(|&(ny, m)| p(4, ny, m, 13)).collect();
    let cfg = ExperimentConfig {
        experiment: ExperimentKind::Custom,
        grid: grid.clone(),
        trials: SOLVING_TRIALS,
        seed: SEED,
        stats: vec![Statistic::XlSol, Statistic::MxlSol],
        ..ExperimentConfig::table2(SOLVING_TRIALS, SEED)
    };
    let rows = run_experiment(&cfg).unwrap();
    let (mut details, mut failed) = (Vec::new(), 0);
    for (&(ny, m), &params) in SOLVING_SUBSET.iter().zip(&grid) {
        let t = solving_row(ny, m);
        for (name, stat, printed) in [("XL", Statistic::XlSol, t.xl), ("MXL", Statistic::MxlSol, t.mxl)] {
            match check_cell(&format!("(4,{ny},{m}) {name}"), find(&rows, params, stat), printed, SOLVING_MIN_FREQ) {
                Ok(line) => details.push(line),
                Err(line) => {
                    failed += 1;
                    details.push(format!("{line}  <-- mismatch"));
                }
            }
        }
    }
    let n = 2 * SOLVING_SUBSET.len();
    Outcome::new(failed == 0, format!("{}/{n} cells match ({SOLVING_TRIALS} planted trials)", n - failed), details)
}

fn first_fall() -> Outcome {
    let mut cfg = ExperimentConfig::table2(FIRST_FALL_TRIALS, SEED);
    cfg.stats = vec![Statistic::FirstFall];
    let rows = run_experiment(&cfg).unwrap();
    let (mut details, mut checked, mut failed) = (Vec::new(), 0, 0);
    for t in SOLVING.iter().filter(|t| t.ny <= 6 && t.first_fall.1 >= 0.9) {
        checked += 1;
        let r = find(&rows, p(4, t.ny, t.m, 13), Statistic::FirstFall);
        let ok = r.value == Some(t.tff) && r.frequency >= SOLVING_MIN_FREQ;
        let line = format!("(4,{},{}): modal {:?} ({:.2}), T_ff {}", t.ny, t.m, r.value, r.frequency, t.tff);
        if !ok {
            failed += 1;
            details.push(format!("{line}  <-- mismatch"));
        } else if t.first_fall.1 < 1.0 {
            details.push(line);
        }
    }
    Outcome::new(failed == 0, format!("{}/{checked} cells at T_ff ({FIRST_FALL_TRIALS} trials)", checked - failed), details)
}

#[derive(Default)]
struct Tally {
    runs: usize,
    agree: usize,
    undetermined: usize,
    found: usize,
    bad_points: usize,
}

impl Tally {
    fn record(&mut self, report: &SolveReport, oracle: &[(Vec<u32>, Vec<u32>)]) {
        self.runs += 1;
        match &report.status {
            Status::SolutionFound { u, v } => {
                self.found += 1;
                if oracle.iter().any(|(a, b)| a == u && b == v) {
                    self.agree += 1;
                } else {
                    self.bad_points += 1;
                }
            }
            Status::NoSolution => self.agree += oracle.is_empty() as usize,
            Status::Undetermined => self.undetermined += 1,
        }
    }

    fn rate(&self) -> f64 {
        self.agree as f64 / self.runs.max(1) as f64
    }
}

fn oracle_grid() -> Vec<Params> {
    let mut grid = Vec::new();
    for q in [2u32, 3] {
        for nx in 1..=3 {
            for ny in 1..=3 {
                for m in nx + ny + 2..=10 {
                    grid.push(p(nx, ny, m, q));
                }
            }
        }
    }
    grid
}

fn hybrid_configs(nx: usize, ny: usize) -> Vec<HybridConfig> {
    let mut v = Vec::new();
    for (ax, ay, backend) in [(0, 0, Backend::Gaussian), (1, 0, Backend::Gaussian), (0, 1, Backend::Gaussian), (1, 1, Backend::Gaussian), (1, 0, Backend::Wiedemann)] {
        if ax <= nx && ay < ny {
            v.push(HybridConfig { seed: SEED, ..HybridConfig::new(ax, ay, backend) });
        }
    }
    v
}

fn oracle_equivalence() -> Outcome {
    let grid = oracle_grid();
    let (mut xl, mut mxl, mut hxl) = (Tally::default(), Tally::default(), Tally::default());
    let mut solvable = 0;
    for (c, &params) in grid.iter().enumerate() {
        for i in 0..ORACLE_INSTANCES {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ ((c as u64) << 32 | i as u64));
            let b = if i % 2 == 0 { random_planted(params, &mut rng).0 } else { random_sequence(params, false, &mut rng) };
            let oracle = brute_force(&b).unwrap();
            solvable += !oracle.is_empty() as usize;
            xl.record(&y_xl_default(&b).unwrap(), &oracle);
            let d = twit_bound(params.nx, params.ny, params.m).unwrap().max(3);
            mxl.record(&y_mxl(&b, d).unwrap(), &oracle);
            for cfg in hybrid_configs(params.nx, params.ny) {
                hxl.record(&y_hxl(&b, &cfg).unwrap(), &oracle);
            }
        }
    }
    let mut pass = true;
    let mut details = vec![format!("{} cells, {} instances, {solvable} solvable", grid.len(), grid.len() * ORACLE_INSTANCES)];
    for (name, t) in [("y-XL", &xl), ("y-MXL", &mxl), ("y-HXL", &hxl)] {
        pass &= t.rate() >= ORACLE_MIN_AGREEMENT && t.bad_points == 0;
        details.push(format!(
            "{name}: agreement {:.4} over {} runs, undetermined {}, solutions {} ({} not in oracle)",
            t.rate(),
            t.runs,
            t.undetermined,
            t.found,
            t.bad_points
        ));
    }
    let summary = format!("agreement XL {:.3}, MXL {:.3}, HXL {:.3}", xl.rate(), mxl.rate(), hxl.rate());
    Outcome::new(pass, summary, details)
}

const WITNESS_CELL: (usize, usize, usize, u32) = (3, 3, 9, 3);

fn witness_behavior() -> Outcome {
    let (nx, ny, m, q) = WITNESS_CELL;
    let params = p(nx, ny, m, q);
    let d = twit_bound(nx, ny, m).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut planted_ok = 0;
    for _ in 0..WITNESS_TRIALS {
        let b = random_planted(params, &mut rng).0;
        planted_ok += !witness_consistency_test(&b, d).unwrap() as usize;
    }
    let (mut unsolvable, mut unsolvable_ok, mut sampled) = (0, 0, 0);
    while unsolvable < WITNESS_TRIALS {
        sampled += 1;
        let b = random_sequence(params, false, &mut rng);
        if !brute_force(&b).unwrap().is_empty() {
            continue;
        }
        unsolvable += 1;
        unsolvable_ok += witness_consistency_test(&b, d).unwrap() as usize;
    }
    let (a, b) = (planted_ok as f64 / WITNESS_TRIALS as f64, unsolvable_ok as f64 / WITNESS_TRIALS as f64);
    let details = vec![format!("cell ({nx},{ny},{m}) q={q} at d={d}; {sampled} samples to collect {WITNESS_TRIALS} unsolvable")];
    Outcome::new(
        a >= WITNESS_MIN_RATE && b >= WITNESS_MIN_RATE,
        format!("planted → consistent {a:.3}, unsolvable → 1 ∈ J {b:.3}"),
        details,
    )
}

fn random_sparse(rows: usize, cols: usize, density: f64, f: &FieldCtx, rng: &mut ChaCha8Rng) -> CsrMatrix {
    let mut t = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            if rng.gen_bool(density) {
                t.push((i, j, f.rand_nonzero(rng)));
            }
        }
    }
    CsrMatrix::from_triplets(rows, cols, t, f)
}

fn backend_agreement() -> Outcome {
    let f = FieldCtx::new(13).unwrap();
    let trials = wiedemann_trials_for(13, WIEDEMANN_BITS);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut agree, mut false_consistent, mut solvable, mut worst_bound) = (0, 0, 0, f64::NEG_INFINITY);
    for k in 0..BACKEND_SYSTEMS {
        let rows = rng.gen_range(4..40);
        let cols = rng.gen_range(4..40);
        let a = random_sparse(rows, cols, rng.gen_range(0.05..0.3), &f, &mut rng);
        let b: Vec<u32> = if k % 2 == 0 {
            let z: Vec<u32> = (0..rows).map(|_| f.rand_elem(&mut rng)).collect();
            a.mul_left(&z, &f)
        } else {
            (0..cols).map(|_| f.rand_elem(&mut rng)).collect()
        };
        let exact = solve_left(&a.to_dense(), &b, &f).unwrap().is_some();
        solvable += exact as usize;
        let v = wiedemann_consistent(&a, &b, trials, &f, &mut rng).unwrap();
        if v.is_consistent() == exact {
            agree += 1;
        }
        if v.is_consistent() && !exact {
            false_consistent += 1;
        }
        if !v.is_consistent() {
            worst_bound = f64::max(worst_bound, v.failure_bound);
        }
    }
    let pass = agree == BACKEND_SYSTEMS && false_consistent == 0 && worst_bound <= -WIEDEMANN_BITS;
    Outcome::new(
        pass,
        format!("{agree}/{BACKEND_SYSTEMS} verdicts agree, {false_consistent} false Consistent, worst bound 2^{worst_bound:.1}"),
        vec![format!("{solvable} solvable systems, {trials} attempts each")],
    )
}

fn macaulay_fixture() -> Outcome {
    let params = p(2, 2, 2, 13);
    let mut f1 = BilinearPoly::zero(2, 2);
    f1.a = vec![1, 1, 1, 0];
    let mut f2 = BilinearPoly::zero(2, 2);
    f2.a = vec![0, 0, 1, 1];
    let b = BilinearSequence::new(params, vec![f1, f2]).unwrap();
    let mac = build_y_macaulay(&b, 3).unwrap();
    let labels: Vec<String> = mac.columns.iter().map(|c| c.to_string()).collect();
    let want_labels = ["x1*y1^2", "x1*y1*y2", "x1*y2^2", "x2*y1^2", "x2*y1*y2", "x2*y2^2", "x1*y1", "x1*y2", "x2*y1", "x2*y2"];
    // y1·f1 as corrected; the remaining rows are as printed
    let want_rows: [[u32; 10]; 6] = [
        [0, 0, 0, 1, 1, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 1, 0, 0, 0, 0],
        [1, 1, 0, 1, 0, 0, 0, 0, 0, 0],
        [0, 1, 1, 0, 1, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 1, 1],
        [0, 0, 0, 0, 0, 0, 1, 1, 1, 0],
    ];
    let dense = mac.dense();
    let multiset = |rows: Vec<Vec<u32>>| {
        let mut h: HashMap<Vec<u32>, usize> = HashMap::new();
        for r in rows {
            *h.entry(r).or_default() += 1;
        }
        h
    };
    let got = multiset((0..dense.rows).map(|i| dense.row(i).to_vec()).collect());
    let want = multiset(want_rows.iter().map(|r| r.to_vec()).collect());
    let r = rank(&dense, &b.field());
    let mut details = Vec::new();
    if labels != want_labels {
        details.push(format!("columns {labels:?}"));
    }
    if got != want {
        details.push("row multiset differs".into());
    }
    let pass = labels == want_labels && got == want && r == 6;
    Outcome::new(pass, format!("{}×{} matrix, rank {r}", dense.rows, dense.cols), details)
}

fn estimator_table() -> Outcome {
    let (mut details, mut mxl_ok, mut hxl_ok) = (Vec::new(), 0, 0);
    for &(q, ny, m, mxl, ax, ay, hxl, alg) in &TABLE4 {
        let params = p(20, ny, m, q);
        let e = estimate(Algorithm::Ymxl, params, EstimateOptions { omega: OMEGA, ..Default::default() }).unwrap();
        let h = optimal_hybrid(params, OMEGA).unwrap();
        let m_ok = (e.log2_mults.round() - mxl as f64).abs() <= COST_TOL;
        let h_ok = (h.cost.log2_mults.round() - hxl as f64).abs() <= COST_TOL;
        mxl_ok += m_ok as usize;
        hxl_ok += h_ok as usize;
        if !(m_ok && h_ok) {
            let got_alg = if h.backend == Backend::Gaussian { 'S' } else { 'W' };
            details.push(format!(
                "q={q} (20,{ny},{m}): MXL {:.2} vs {mxl}, HXL {:.2} ({},{},{got_alg}) vs {hxl} ({ax},{ay},{alg})",
                e.log2_mults, h.cost.log2_mults, h.a_x, h.a_y
            ));
        }
    }
    let anchor = {
        let params = p(20, 20, 42, 5);
        let e = estimate(Algorithm::Ymxl, params, EstimateOptions { omega: OMEGA, ..Default::default() }).unwrap();
        let h = optimal_hybrid(params, OMEGA).unwrap();
        e.log2_mults.round() == 110.0 && h.cost.log2_mults.round() == 59.0
    };
    let n = TABLE4.len();
    Outcome::new(
        mxl_ok == n && hxl_ok == n && anchor,
        format!("MXL {mxl_ok}/{n}, HXL {hxl_ok}/{n} within ±{COST_TOL}, anchor (20,20,42,q=5) {}", if anchor { "ok" } else { "off" }),
        details,
    )
}

fn property_suites() -> Outcome {
    let suites: [(&str, Box<dyn Fn() -> common::Sweep>); 4] = [
        ("hockey-stick", Box::new(common::hockey_stick)),
        ("dreg ≤ n_x+1", Box::new(common::dreg_bounded)),
        ("cramer subsets (2,2,4)", Box::new(common::cramer_all_subsets)),
        ("MXL ≤ XL", Box::new(|| common::mxl_dominates_xl(DOMINANCE_INSTANCES))),
    ];
    let mut pass = true;
    let mut details = Vec::new();
    for (name, run) in suites {
        match run() {
            Ok(n) => details.push(format!("{name}: {n} cases")),
            Err(e) => {
                pass = false;
                details.push(format!("{name}: {e}"));
            }
        }
    }
    Outcome::new(pass, "hockey-stick, dreg bound, cramer subsets, MXL dominance", details)
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 10] = [
        (1, "degree formulas", degree_formulas),
        (2, "semiregularity frequencies", semiregularity),
        (3, "solving degrees", solving_degrees),
        (4, "empirical first fall", first_fall),
        (5, "oracle equivalence", oracle_equivalence),
        (6, "witness behavior", witness_behavior),
        (7, "cost table", estimator_table),
        (8, "backend agreement", backend_agreement),
        (9, "Macaulay fixture", macaulay_fixture),
        (10, "property suites", property_suites),
    ];
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut results: BTreeMap<u32, bool> = BTreeMap::new();
    for (id, name, run) in criteria {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        let secs = start.elapsed().as_secs_f64();
        println!("criterion {id:>2} {}: {name}: {} [{secs:.1}s]", if o.pass { "PASS" } else { "FAIL" }, o.summary);
        for d in &o.details {
            println!("    {d}");
        }
        results.insert(id, o.pass);
    }
    let failed: Vec<String> = results.iter().filter(|(_, &ok)| !ok).map(|(id, _)| id.to_string()).collect();
    println!("acceptance: {}/{} PASS{}", results.len() - failed.len(), results.len(), if failed.is_empty() { String::new() } else { format!(", FAIL: {}", failed.join(", ")) });
    if !failed.is_empty() && std::env::var_os("BILIN_ACCEPTANCE_STRICT").is_some() {
        std::process::exit(1);
    }
}
