//! Seeded experiment campaigns, table rows and instance files.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    dreg_formula, empirical_first_fall, estimate, is_y_semiregular, optimal_hybrid, tff_formula, twit_bound, Algorithm,
    Backend, EstimateOptions,
};
use crate::error::{Error, Result};
use crate::macaulay::binomial;
use crate::polyring::{random_planted, random_sequence, BilinearSequence, InstanceJson, Params};
use crate::solvers::{xl_solving_degree, y_mxl_with, SolveOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Table1,
    Table2,
    Table3,
    Table4,
    Custom,
}

impl ExperimentKind {
    pub fn tag(self) -> &'static str {
        match self {
            ExperimentKind::Table1 => "table1",
            ExperimentKind::Table2 => "table2",
            ExperimentKind::Table3 => "table3",
            ExperimentKind::Table4 => "table4",
            ExperimentKind::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    /// `dreg_formula`, no trials.
    Dreg,
    /// `tff_formula`, no trials.
    Tff,
    /// `twit_bound`, no trials.
    Twit,
    /// 1 if a random homogeneous sequence passes the rank test, else 0.
    Semiregular,
    /// `empirical_first_fall` of a planted instance.
    FirstFall,
    XlSol,
    MxlSol,
    /// F4 columns are not reproduced; always reported as absent.
    F4Ff,
    F4Sol,
    /// Rounded log2 cost of y-MXL.
    MxlCost,
    /// Rounded log2 cost of the best y-HXL choice.
    HxlCost,
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Statistic::Dreg => "d_reg",
            Statistic::Tff => "t_ff",
            Statistic::Twit => "t_wit",
            Statistic::Semiregular => "semiregular",
            Statistic::FirstFall => "d_yff",
            Statistic::XlSol => "yxl_sol",
            Statistic::MxlSol => "ymxl_sol",
            Statistic::F4Ff => "f4_ff",
            Statistic::F4Sol => "f4_sol",
            Statistic::MxlCost => "mxl_cost",
            Statistic::HxlCost => "hxl_cost",
        }
    }

    fn is_random(self) -> bool {
        matches!(self, Statistic::Semiregular | Statistic::FirstFall | Statistic::XlSol | Statistic::MxlSol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub grid: Vec<Params>,
    pub trials: usize,
    pub seed: u64,
    pub stats: Vec<Statistic>,
    pub omega: f64,
    /// Added to `T_wit` (solving degrees) or `T_ff` (first fall) to bound
    /// the degree of the random statistics.
    pub degree_slack: u32,
    /// Cap on the entries of any single Macaulay matrix.
    pub max_matrix_entries: u128,
}

const DEFAULT_MAX_ENTRIES: u128 = 1 << 28;

fn table_grid(nx: usize, q: u32, ranges: &[(usize, std::ops::RangeInclusive<usize>)]) -> Vec<Params> {
    ranges
        .iter()
        .flat_map(|(ny, ms)| ms.clone().map(move |m| Params { nx, ny: *ny, m, q }))
        .collect()
}

impl ExperimentConfig {
    /// Semiregularity campaign over `n_x = 4`, `n_y = 4..8`.
    pub fn table1(trials: usize, seed: u64) -> Self {
        let grid = table_grid(4, 13, &[(4, 8..=16), (5, 9..=18), (6, 10..=20), (7, 11..=22), (8, 12..=23)]);
        ExperimentConfig {
            experiment: ExperimentKind::Table1,
            grid,
            trials,
            seed,
            stats: vec![Statistic::Dreg, Statistic::Semiregular],
            omega: 2.8,
            degree_slack: 1,
            max_matrix_entries: DEFAULT_MAX_ENTRIES,
        }
    }

    fn solving(kind: ExperimentKind, ranges: &[(usize, std::ops::RangeInclusive<usize>)], trials: usize, seed: u64) -> Self {
        ExperimentConfig {
            experiment: kind,
            grid: table_grid(4, 13, ranges),
            trials,
            seed,
            stats: vec![
                Statistic::Tff,
                Statistic::Twit,
                Statistic::FirstFall,
                Statistic::XlSol,
                Statistic::MxlSol,
                Statistic::F4Ff,
                Statistic::F4Sol,
            ],
            omega: 2.8,
            degree_slack: 0,
            max_matrix_entries: DEFAULT_MAX_ENTRIES,
        }
    }

    /// Solving degrees for `n_y = 4, 5, 6`.
    pub fn table2(trials: usize, seed: u64) -> Self {
        Self::solving(ExperimentKind::Table2, &[(4, 10..=16), (5, 11..=18), (6, 12..=20)], trials, seed)
    }

    /// Solving degrees for `n_y = 7, 8`.
    pub fn table3(trials: usize, seed: u64) -> Self {
        Self::solving(ExperimentKind::Table3, &[(7, 13..=22), (8, 14..=24)], trials, seed)
    }

    /// Cost estimates for `n_x = 20`, `q ∈ {5, 13, 31}`.
    pub fn table4(omega: f64) -> Self {
        let mut grid = Vec::new();
        for q in [5u32, 13, 31] {
            for (ny, m0) in [(20usize, 42usize), (30, 52)] {
                for k in 0..6 {
                    grid.push(Params { nx: 20, ny, m: m0 + 4 * k, q });
                }
            }
        }
        ExperimentConfig {
            experiment: ExperimentKind::Table4,
            grid,
            trials: 1,
            seed: 0,
            stats: vec![Statistic::MxlCost, Statistic::HxlCost],
            omega,
            degree_slack: 0,
            max_matrix_entries: DEFAULT_MAX_ENTRIES,
        }
    }

    /// Cartesian product of the lists, keeping cells with `n_x + n_y ≤ m`.
    pub fn custom(nx: &[usize], ny: &[usize], m: &[usize], q: &[u32], stats: Vec<Statistic>, trials: usize, seed: u64) -> Result<Self> {
        let mut grid = Vec::new();
        for &qq in q {
            for &a in nx {
                for &b in ny {
                    for &c in m {
                        if a + b <= c {
                            grid.push(Params::new(a, b, c, qq)?);
                        }
                    }
                }
            }
        }
        Ok(ExperimentConfig {
            experiment: ExperimentKind::Custom,
            grid,
            trials,
            seed,
            stats,
            omega: 2.8,
            degree_slack: 1,
            max_matrix_entries: DEFAULT_MAX_ENTRIES,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParams("trials must be at least 1".into()));
        }
        if self.grid.is_empty() {
            return Err(Error::InvalidParams("parameter grid is empty".into()));
        }
        if self.stats.is_empty() {
            return Err(Error::InvalidParams("no statistic requested".into()));
        }
        for p in &self.grid {
            Params::new(p.nx, p.ny, p.m, p.q)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub experiment: String,
    pub params: Params,
    pub statistic: String,
    /// `None` when the statistic is absent or undefined for every trial.
    pub value: Option<u32>,
    pub frequency: f64,
    pub trials: usize,
    pub histogram: BTreeMap<u32, usize>,
    pub detail: String,
}

/// Most common value, ties going to the smaller one, and its share of
/// `trials`.
pub fn modal(histogram: &BTreeMap<u32, usize>, trials: usize) -> (Option<u32>, f64) {
    let mut best: Option<(u32, usize)> = None;
    for (&v, &c) in histogram {
        if best.is_none_or(|(_, bc)| c > bc) {
            best = Some((v, c));
        }
    }
    match best {
        Some((v, c)) if trials > 0 => (Some(v), c as f64 / trials as f64),
        _ => (None, 0.0),
    }
}

fn check_size(p: &Params, d: u32, cap: u128) -> Result<()> {
    let (ny, di) = (p.ny as i64, d as i64);
    let rows = p.m as u128 * binomial(ny + di - 2, di - 2);
    let cols = (p.nx as u128 + 1) * binomial(ny + di - 1, di - 1);
    if rows * cols > cap {
        return Err(Error::Budget(format!("Macaulay matrix {rows}×{cols} at degree {d} exceeds the entry cap {cap}")));
    }
    Ok(())
}

/// Largest degree a statistic may build a Macaulay matrix at.
fn degree_bound(p: &Params, stat: Statistic, slack: u32) -> Result<u32> {
    Ok(match stat {
        Statistic::Semiregular => dreg_formula(p.nx, p.ny, p.m)?.max(2),
        Statistic::FirstFall => tff_formula(p.nx, p.ny, p.m)? + slack,
        _ => twit_bound(p.nx, p.ny, p.m).map(|t| t + slack).unwrap_or(3 + slack).max(3),
    })
}

/// Values of the random statistics of one trial, in `stats` order.
fn run_trial(p: Params, stats: &[Statistic], seed: u64, slack: u32) -> Result<Vec<Option<u32>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let needs_planted = stats.iter().any(|s| matches!(s, Statistic::FirstFall | Statistic::XlSol | Statistic::MxlSol));
    let planted: Option<BilinearSequence> = needs_planted.then(|| random_planted(p, &mut rng).0);
    let mut out = Vec::new();
    for s in stats.iter().filter(|s| s.is_random()) {
        out.push(match s {
            Statistic::Semiregular => {
                let h = random_sequence(p, true, &mut rng);
                Some(is_y_semiregular(&h)? as u32)
            }
            Statistic::FirstFall => empirical_first_fall(planted.as_ref().unwrap(), degree_bound(&p, *s, slack)?)?,
            Statistic::XlSol => xl_solving_degree(planted.as_ref().unwrap(), degree_bound(&p, *s, slack)?)?,
            Statistic::MxlSol => {
                let opts = SolveOptions { extract: false, ..Default::default() };
                y_mxl_with(planted.as_ref().unwrap(), degree_bound(&p, *s, slack)?, &opts)?.solving_degree
            }
            _ => unreachable!(),
        });
    }
    Ok(out)
}

fn deterministic_row(exp: &str, p: Params, stat: Statistic, value: Option<u32>, detail: String) -> TableRow {
    let mut histogram = BTreeMap::new();
    if let Some(v) = value {
        histogram.insert(v, 1);
    }
    TableRow {
        experiment: exp.to_string(),
        params: p,
        statistic: stat.name().to_string(),
        value,
        frequency: if value.is_some() { 1.0 } else { 0.0 },
        trials: 0,
        histogram,
        detail,
    }
}

/// Runs every trial of every cell (in parallel) and reduces the results in
/// (cell, trial) order. Trial `t` of every cell uses seed `seed + t`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<TableRow>> {
    cfg.validate()?;
    let exp = cfg.experiment.tag();
    let random: Vec<Statistic> = cfg.stats.iter().copied().filter(|s| s.is_random()).collect();
    if !random.is_empty() {
        for p in &cfg.grid {
            for &stat in &random {
                check_size(p, degree_bound(p, stat, cfg.degree_slack)?, cfg.max_matrix_entries)?;
            }
        }
    }
    let jobs: Vec<(usize, usize)> =
        if random.is_empty() { Vec::new() } else { (0..cfg.grid.len()).flat_map(|c| (0..cfg.trials).map(move |t| (c, t))).collect() };
    let results: Vec<Result<Vec<Option<u32>>>> = jobs
        .par_iter()
        .map(|&(c, t)| run_trial(cfg.grid[c], &cfg.stats, cfg.seed.wrapping_add(t as u64), cfg.degree_slack))
        .collect();
    let mut per_cell: Vec<Vec<Vec<Option<u32>>>> = vec![Vec::new(); cfg.grid.len()];
    for (&(c, _), r) in jobs.iter().zip(results) {
        per_cell[c].push(r?);
    }
    let mut rows = Vec::new();
    for (c, &p) in cfg.grid.iter().enumerate() {
        let mut k = 0;
        for &stat in &cfg.stats {
            if stat.is_random() {
                let mut histogram = BTreeMap::new();
                for trial in &per_cell[c] {
                    if let Some(v) = trial[k] {
                        *histogram.entry(v).or_insert(0) += 1;
                    }
                }
                k += 1;
                let (value, frequency) = modal(&histogram, cfg.trials);
                rows.push(TableRow {
                    experiment: exp.to_string(),
                    params: p,
                    statistic: stat.name().to_string(),
                    value,
                    frequency,
                    trials: cfg.trials,
                    histogram,
                    detail: String::new(),
                });
                continue;
            }
            let row = match stat {
                Statistic::Dreg => deterministic_row(exp, p, stat, dreg_formula(p.nx, p.ny, p.m).ok(), String::new()),
                Statistic::Tff => deterministic_row(exp, p, stat, tff_formula(p.nx, p.ny, p.m).ok(), String::new()),
                Statistic::Twit => deterministic_row(exp, p, stat, twit_bound(p.nx, p.ny, p.m).ok(), String::new()),
                Statistic::F4Ff | Statistic::F4Sol => deterministic_row(exp, p, stat, None, "absent".into()),
                Statistic::MxlCost => {
                    let e = estimate(Algorithm::Ymxl, p, EstimateOptions { omega: cfg.omega, ..Default::default() })?;
                    deterministic_row(exp, p, stat, Some(e.log2_mults.round() as u32), format!("log2={:.3}", e.log2_mults))
                }
                Statistic::HxlCost => {
                    let h = optimal_hybrid(p, cfg.omega)?;
                    let alg = match h.backend {
                        Backend::Gaussian => "S",
                        Backend::Wiedemann => "W",
                    };
                    let detail = format!("a_x={} a_y={} alg={alg} log2={:.3}", h.a_x, h.a_y, h.cost.log2_mults);
                    deterministic_row(exp, p, stat, Some(h.cost.log2_mults.round() as u32), detail)
                }
                _ => unreachable!(),
            };
            rows.push(row);
        }
    }
    Ok(rows)
}

pub const CSV_HEADER: [&str; 11] =
    ["experiment", "q", "nx", "ny", "m", "statistic", "value", "frequency", "trials", "histogram", "detail"];

/// Writes rows with the stable header [`CSV_HEADER`]. Absent values are
/// written as `absent`; histograms as `value:count` pairs joined by `;`.
pub fn write_csv<W: Write>(rows: &[TableRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in rows {
        let hist: Vec<String> = r.histogram.iter().map(|(v, c)| format!("{v}:{c}")).collect();
        w.write_record([
            r.experiment.clone(),
            r.params.q.to_string(),
            r.params.nx.to_string(),
            r.params.ny.to_string(),
            r.params.m.to_string(),
            r.statistic.clone(),
            r.value.map_or_else(|| "absent".to_string(), |v| v.to_string()),
            format!("{:.2}", r.frequency),
            r.trials.to_string(),
            hist.join(";"),
            r.detail.clone(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_instance(b: &BilinearSequence, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(&b.to_json())?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

pub fn load_instance(path: &Path) -> Result<BilinearSequence> {
    parse_instance(&std::fs::read_to_string(path)?)
}

pub fn parse_instance(text: &str) -> Result<BilinearSequence> {
    let j: InstanceJson = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    BilinearSequence::from_json(&j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::tests::example_sequence;

    const EXAMPLE_JSON: &str = r#"{"q":13,"nx":2,"ny":2,"m":2,"polys":[{"A":[[1,1],[1,0]],"b":[0,0],"c":[0,0],"d":0},{"A":[[0,0],[1,1]],"b":[0,0],"c":[0,0],"d":0}]}"#;

    #[test]
    fn modal_prefers_smaller_on_ties() {
        let h: BTreeMap<u32, usize> = [(3, 5), (4, 5), (5, 1)].into_iter().collect();
        assert_eq!(modal(&h, 11), (Some(3), 5.0 / 11.0));
        assert_eq!(modal(&BTreeMap::new(), 4), (None, 0.0));
    }

    #[test]
    fn instance_round_trip() {
        let dir = std::env::temp_dir().join(format!("bilin-harness-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("inst.json");
        let b = random_sequence(Params::new(3, 2, 6, 31).unwrap(), false, &mut ChaCha8Rng::seed_from_u64(1));
        save_instance(&b, &path).unwrap();
        assert_eq!(load_instance(&path).unwrap(), b);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn fixture_loads_and_bad_files_fail() {
        assert_eq!(parse_instance(EXAMPLE_JSON).unwrap(), example_sequence());
        assert!(parse_instance(&EXAMPLE_JSON.replace("\"q\":13", "\"q\":4")).is_err());
        assert!(parse_instance(&EXAMPLE_JSON.replace("[[0,0],[1,1]]", "[[0,0]]")).is_err());
        assert!(matches!(parse_instance("{not json"), Err(Error::Malformed(_))));
    }

    #[test]
    fn config_validation() {
        let mut cfg = ExperimentConfig::table1(0, 1);
        assert!(run_experiment(&cfg).is_err());
        cfg.trials = 1;
        cfg.grid.clear();
        assert!(run_experiment(&cfg).is_err());
        let big = ExperimentConfig::custom(&[20], &[20], &[42], &[13], vec![Statistic::XlSol], 1, 0).unwrap();
        assert!(matches!(run_experiment(&big), Err(Error::Budget(_))));
    }

    #[test]
    fn seeded_runs_are_byte_identical() {
        let cfg = ExperimentConfig::custom(
            &[2, 3],
            &[3],
            &[7, 8],
            &[13],
            vec![Statistic::Tff, Statistic::Twit, Statistic::Semiregular, Statistic::XlSol, Statistic::MxlSol],
            6,
            42,
        )
        .unwrap();
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_csv(&run_experiment(&cfg).unwrap(), &mut a).unwrap();
        write_csv(&run_experiment(&cfg).unwrap(), &mut b).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("experiment,q,nx,ny,m,statistic,value,frequency,trials,histogram,detail\n"));
    }

    #[test]
    fn table2_cell_4_4_12() {
        let mut cfg = ExperimentConfig::table2(10, 0);
        cfg.grid = vec![Params::new(4, 4, 12, 13).unwrap()];
        let rows = run_experiment(&cfg).unwrap();
        let get = |s: &str| rows.iter().find(|r| r.statistic == s).unwrap().clone();
        assert_eq!((get("yxl_sol").value, get("yxl_sol").frequency), (Some(4), 1.0));
        assert_eq!((get("ymxl_sol").value, get("ymxl_sol").frequency), (Some(3), 1.0));
        assert_eq!(get("t_wit").value, Some(4));
        assert_eq!(get("f4_sol").value, None);
        assert_eq!(get("f4_sol").detail, "absent");
    }

    #[test]
    fn table4_anchor_row() {
        let rows = run_experiment(&ExperimentConfig::table4(2.8)).unwrap();
        assert_eq!(rows.len(), 72);
        assert_eq!(rows[0].value, Some(110));
        assert_eq!(rows[1].value, Some(59));
        assert!(rows[1].detail.starts_with("a_x=19 a_y=0 alg=S"));
    }
}
