//! Degree bounds, semiregularity tests, syzygies and cost estimates.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::linalg::rank;
use crate::macaulay::{binomial, build_y_macaulay_with, degree_part, ColumnLayout, MacaulayOptions};
use crate::polyring::{random_sequence, BilinearSequence, Params, YMonomial, YPoly, YPolyVector};

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

/// y-degree of regularity of a y-semiregular sequence:
/// `⌈n_x(n_y−1)/(m−n_x)⌉ + 1`.
pub fn dreg_formula(nx: usize, ny: usize, m: usize) -> Result<u32> {
    if m <= nx {
        return Err(Error::InvalidParams(format!("need m > n_x (got m={m}, n_x={nx})")));
    }
    if nx + ny > m {
        return Err(Error::InvalidParams(format!("need n_x + n_y <= m (got {nx}+{ny} > {m})")));
    }
    Ok(ceil_div((nx * (ny - 1)) as u64, (m - nx) as u64) as u32 + 1)
}

/// Smallest integer strictly greater than `n_x(n_y−1)/(m−n_x) + 1`.
pub fn tff_formula(nx: usize, ny: usize, m: usize) -> Result<u32> {
    if m <= nx {
        return Err(Error::InvalidParams(format!("need m > n_x (got m={m}, n_x={nx})")));
    }
    Ok(((nx * (ny.saturating_sub(1))) / (m - nx)) as u32 + 2)
}

/// Witness degree bound `⌈n_y(n_x+1)/(m−n_x−1)⌉ + 1`.
pub fn twit_bound(nx: usize, ny: usize, m: usize) -> Result<u32> {
    if nx + ny + 2 > m {
        return Err(Error::InvalidParams(format!("need n_x + n_y <= m - 2 (got {nx}+{ny}, m={m})")));
    }
    Ok(ceil_div((ny * (nx + 1)) as u64, (m - nx - 1) as u64) as u32 + 1)
}

/// Degree used by the hybrid solver after guessing `a_x` x- and `a_y`
/// y-variables.
pub fn hxl_degree(nx: usize, ny: usize, m: usize, ax: usize, ay: usize) -> Result<u32> {
    if ax > nx || ay > ny || m + ax <= nx + 1 {
        return Err(Error::InvalidParams(format!(
            "need a_x <= n_x, a_y <= n_y and m - n_x + a_x - 1 > 0 (got n_x={nx}, n_y={ny}, m={m}, a_x={ax}, a_y={ay})"
        )));
    }
    Ok(ceil_div(((ny - ay) * (nx - ax + 1)) as u64, (m + ax - nx - 1) as u64) as u32 + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub d_reg: u32,
    pub d_ff: u32,
    /// Only defined when `n_x + n_y <= m − 2`.
    pub d_wit: Option<u32>,
    /// `(m − n_x)` divides `n_x(n_y − 1)`.
    pub divisible: bool,
}

impl DegreeProfile {
    pub fn new(nx: usize, ny: usize, m: usize) -> Result<Self> {
        Ok(DegreeProfile {
            d_reg: dreg_formula(nx, ny, m)?,
            d_ff: tff_formula(nx, ny, m)?,
            d_wit: twit_bound(nx, ny, m).ok(),
            divisible: (nx * (ny - 1)) % (m - nx) == 0,
        })
    }
}

/// Rank target of the full `M_{y,≤d}` for a y-semiregular sequence:
/// full row rank below `d`, full column rank at `d`.
pub fn semiregular_rank_target(nx: usize, ny: usize, m: usize, d: u32) -> u128 {
    let (ny, d) = (ny as i64, d as i64);
    m as u128 * binomial(ny + d - 3, d - 3) + nx as u128 * binomial(ny + d - 2, d - 1)
}

fn check_semiregular_input(b: &BilinearSequence) -> Result<u32> {
    if !b.is_homogeneous() {
        return Err(Error::InvalidParams("semiregularity is defined for homogeneous sequences".into()));
    }
    dreg_formula(b.nx(), b.ny(), b.m())
}

/// Single rank computation on `M_{y,≤d̃}` with `d̃ = dreg_formula`.
pub fn is_y_semiregular(b: &BilinearSequence) -> Result<bool> {
    let d = check_semiregular_input(b)?;
    let opts = MacaulayOptions { layout: ColumnLayout::Homogeneous, ..Default::default() };
    let m = build_y_macaulay_with(b, d, &opts)?.into_dense();
    let r = rank(&m, &b.field()) as u128;
    Ok(r == semiregular_rank_target(b.nx(), b.ny(), b.m(), d))
}

/// The same test, one degree part at a time.
pub fn is_y_semiregular_by_degree(b: &BilinearSequence) -> Result<bool> {
    let d = check_semiregular_input(b)?;
    let (nx, ny, m) = (b.nx() as i64, b.ny() as i64, b.m() as u128);
    let f = b.field();
    for j in 2..=d {
        let r = rank(&degree_part(b, j)?.into_dense(), &f) as u128;
        let ji = j as i64;
        let want = if j < d { m * binomial(ny + ji - 3, ji - 2) } else { nx as u128 * binomial(ny + ji - 2, ji - 1) };
        if r != want {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Draws a uniformly random homogeneous sequence and tests it.
pub fn semiregularity_trial<R: Rng + ?Sized>(p: Params, rng: &mut R) -> Result<bool> {
    dreg_formula(p.nx, p.ny, p.m)?;
    is_y_semiregular(&random_sequence(p, true, rng))
}

/// Smallest `d ≤ d_max` at which the degree part of the quadratic part has
/// rank below its row count.
pub fn empirical_first_fall(b: &BilinearSequence, d_max: u32) -> Result<Option<u32>> {
    let h = b.quadratic_part();
    let f = b.field();
    let (ny, m) = (b.ny() as i64, b.m() as u128);
    for d in 2..=d_max {
        let di = d as i64;
        let rows = m * binomial(ny + di - 3, di - 2);
        let r = rank(&degree_part(&h, d)?.into_dense(), &f) as u128;
        if r < rows {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// Smallest `d ≤ d_max` at which the degree part spans every x-linear
/// monomial of degree `d`.
pub fn empirical_dreg(b: &BilinearSequence, d_max: u32) -> Result<Option<u32>> {
    if !b.is_homogeneous() {
        return Err(Error::InvalidParams("empirical_dreg needs a homogeneous sequence".into()));
    }
    let f = b.field();
    let (nx, ny) = (b.nx() as u128, b.ny() as i64);
    for d in 2..=d_max {
        let di = d as i64;
        let r = rank(&degree_part(b, d)?.into_dense(), &f) as u128;
        if r == nx * binomial(ny + di - 2, di - 1) {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

fn ypoly_mul(a: &YPoly, b: &YPoly, f: &FieldCtx) -> YPoly {
    let mut out = YPoly::new();
    for (ma, &ca) in a {
        for (mb, &cb) in b {
            let e = out.entry(ma.mul(mb)).or_insert(0);
            *e = f.mul_add(*e, ca, cb);
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn ypoly_axpy(acc: &mut YPoly, s: u32, x: &YPoly, f: &FieldCtx) {
    for (m, &c) in x {
        let e = acc.entry(m.clone()).or_insert(0);
        *e = f.mul_add(*e, s, c);
    }
    acc.retain(|_, c| *c != 0);
}

/// Syzygy of degree `n_x` built from the maximal minors of the Jacobian
/// rows indexed by `rows` (0-based, `n_x + 1` distinct indices).
pub fn cramer_syzygy(b: &BilinearSequence, rows: &[usize]) -> Result<YPolyVector> {
    let (nx, ny, m) = (b.nx(), b.ny(), b.m());
    if m <= nx || rows.len() != nx + 1 {
        return Err(Error::InvalidParams(format!("need {} rows out of m = {m} > n_x", nx + 1)));
    }
    let mut sorted = rows.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != rows.len() || sorted.iter().any(|&r| r >= m) {
        return Err(Error::InvalidParams("row indices must be distinct and below m".into()));
    }
    if !b.is_homogeneous() {
        return Err(Error::InvalidParams("cramer_syzygy needs a homogeneous sequence".into()));
    }
    let f = b.field();
    let jac: Vec<Vec<YPoly>> = b
        .jacobian_x()
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|lin| {
                    let mut p = YPoly::new();
                    for (k, &c) in lin.coef.iter().enumerate() {
                        if c != 0 {
                            p.insert(YMonomial::var(ny, k), c);
                        }
                    }
                    if lin.c != 0 {
                        p.insert(YMonomial::one(ny), lin.c);
                    }
                    p
                })
                .collect()
        })
        .collect();
    let mut g = YPolyVector::zero(m);
    for (pos, &i) in rows.iter().enumerate() {
        let minor_rows: Vec<usize> = rows.iter().copied().filter(|&r| r != i).collect();
        let mut memo = HashMap::new();
        let det = det_rec(&jac, &minor_rows, 0, (1u64 << nx) - 1, nx, &f, &mut memo);
        g.entries[i] = if pos % 2 == 0 {
            det
        } else {
            det.into_iter().map(|(mo, c)| (mo, f.neg(c))).collect()
        };
    }
    Ok(g)
}

/// Laplace expansion along rows, memoized on the remaining column set.
fn det_rec(
    jac: &[Vec<YPoly>],
    rows: &[usize],
    depth: usize,
    cols: u64,
    nx: usize,
    f: &FieldCtx,
    memo: &mut HashMap<u64, YPoly>,
) -> YPoly {
    if depth == rows.len() {
        let ny = jac.iter().flatten().flat_map(|p| p.keys()).map(|m| m.nvars()).next().unwrap_or(0);
        let mut one = YPoly::new();
        one.insert(YMonomial::one(ny), 1);
        return one;
    }
    if let Some(p) = memo.get(&cols) {
        return p.clone();
    }
    let mut acc = YPoly::new();
    let mut sign_pos = 0;
    for c in 0..nx {
        if cols & (1 << c) == 0 {
            continue;
        }
        let entry = &jac[rows[depth]][c];
        if !entry.is_empty() {
            let sub = det_rec(jac, rows, depth + 1, cols & !(1 << c), nx, f, memo);
            let term = ypoly_mul(entry, &sub, f);
            let s = if sign_pos % 2 == 0 { 1 } else { f.neg(1) };
            ypoly_axpy(&mut acc, s, &term, f);
        }
        sign_pos += 1;
    }
    memo.insert(cols, acc.clone());
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Yxl,
    Ymxl,
    YhxlGaussian,
    YhxlWiedemann,
    F4,
    Exhaustive,
}

impl std::str::FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "yxl" => Algorithm::Yxl,
            "ymxl" => Algorithm::Ymxl,
            "yhxl-gaussian" | "yhxl-ge" => Algorithm::YhxlGaussian,
            "yhxl-wiedemann" | "yhxl-w" => Algorithm::YhxlWiedemann,
            "f4" => Algorithm::F4,
            "exhaustive" => Algorithm::Exhaustive,
            other => return Err(Error::InvalidParams(format!("unknown algorithm tag {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateOptions {
    pub a_x: usize,
    pub a_y: usize,
    pub omega: f64,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions { a_x: 0, a_y: 0, omega: 2.8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostEstimate {
    pub algorithm: Algorithm,
    pub log2_mults: f64,
    pub q: u32,
    pub nx: usize,
    pub ny: usize,
    pub m: usize,
    pub a_x: usize,
    pub a_y: usize,
    pub omega: f64,
    /// Degree that enters the formula.
    pub degree: u32,
}

fn log2_binomial(n: i64, k: i64) -> f64 {
    if k < 0 || n < 0 || k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    (0..k).map(|i| ((n - i) as f64 / (i + 1) as f64).log2()).sum()
}

/// `m·C(n_y+d−2, d−2)·[n_x·C(n_y+d−1, d−1)]^(ω−1)`, in log2.
fn log2_xl_shape(nx: usize, ny: usize, m: usize, d: u32, omega: f64) -> f64 {
    let (ny, d) = (ny as i64, d as i64);
    (m as f64).log2() + log2_binomial(ny + d - 2, d - 2) + (omega - 1.0) * ((nx as f64).log2() + log2_binomial(ny + d - 1, d - 1))
}

/// log2 of the multiplication count predicted by the complexity formula of
/// `alg`.
pub fn estimate(alg: Algorithm, p: Params, opts: EstimateOptions) -> Result<CostEstimate> {
    let (nx, ny, m, q) = (p.nx, p.ny, p.m, p.q);
    let omega = opts.omega;
    if !(2.0..=3.0).contains(&omega) {
        return Err(Error::InvalidParams(format!("omega {omega} outside [2, 3]")));
    }
    let (ax, ay) = (opts.a_x, opts.a_y);
    let lq = (q as f64).log2();
    let (degree, log2) = match alg {
        Algorithm::Yxl => {
            let d = twit_bound(nx, ny, m)?;
            (d, log2_xl_shape(nx, ny, m, d, omega))
        }
        Algorithm::Ymxl => {
            let d = tff_formula(nx, ny, m)?;
            (d, log2_xl_shape(nx, ny, m, d, omega))
        }
        Algorithm::YhxlGaussian | Algorithm::YhxlWiedemann => {
            if ay >= ny {
                return Err(Error::InvalidParams(format!("need a_y < n_y (got {ay})")));
            }
            let d = hxl_degree(nx, ny, m, ax, ay)?;
            let guesses = (ax + ay) as f64 * lq;
            let (nxr, nyr, di) = ((nx - ax + 1) as f64, (ny - ay) as i64, d as i64);
            let body = if alg == Algorithm::YhxlGaussian {
                (m as f64).log2() + log2_binomial(nyr + di - 2, di - 2) + (omega - 1.0) * (nxr.log2() + log2_binomial(nyr + di - 1, di - 1))
            } else {
                ((nyr + 1) as f64).log2() + 3.0 * nxr.log2() + 2.0 * log2_binomial(nyr + di - 1, di - 1)
            };
            (d, guesses + body)
        }
        Algorithm::F4 => {
            let d = tff_formula(nx, ny, m)?;
            (d, omega * log2_binomial((nx + ny) as i64 + d as i64, d as i64))
        }
        Algorithm::Exhaustive => (1, nx as f64 * lq + (m as f64).log2() + (omega - 1.0) * (ny as f64).log2()),
    };
    if !log2.is_finite() || log2 < 0.0 {
        return Err(Error::InvalidParams(format!("formula undefined for {p:?} with {opts:?}")));
    }
    Ok(CostEstimate { algorithm: alg, log2_mults: log2, q, nx, ny, m, a_x: ax, a_y: ay, omega, degree })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Gaussian,
    Wiedemann,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HybridChoice {
    pub a_x: usize,
    pub a_y: usize,
    pub backend: Backend,
    pub cost: CostEstimate,
}

/// Scans every `(a_x, a_y, backend)` and returns the cheapest. Ties go to
/// the smaller `a_x + a_y`, then to Gaussian elimination, then to guessing
/// x-variables rather than y-variables.
pub fn optimal_hybrid(p: Params, omega: f64) -> Result<HybridChoice> {
    let mut best: Option<HybridChoice> = None;
    for ax in 0..=p.nx {
        if p.m + ax <= p.nx + 1 {
            continue;
        }
        for ay in 0..p.ny {
            for backend in [Backend::Gaussian, Backend::Wiedemann] {
                let alg = match backend {
                    Backend::Gaussian => Algorithm::YhxlGaussian,
                    Backend::Wiedemann => Algorithm::YhxlWiedemann,
                };
                let Ok(cost) = estimate(alg, p, EstimateOptions { a_x: ax, a_y: ay, omega }) else {
                    continue;
                };
                let cand = HybridChoice { a_x: ax, a_y: ay, backend, cost };
                let better = match &best {
                    None => true,
                    Some(b) => {
                        let (c, o) = (cand.cost.log2_mults, b.cost.log2_mults);
                        if (c - o).abs() > 1e-9 {
                            c < o
                        } else {
                            (cand.a_x + cand.a_y, cand.backend != Backend::Gaussian, cand.a_y)
                                < (b.a_x + b.a_y, b.backend != Backend::Gaussian, b.a_y)
                        }
                    }
                };
                if better {
                    best = Some(cand);
                }
            }
        }
    }
    best.ok_or_else(|| Error::InvalidParams(format!("no admissible hybrid parameters for {p:?}")))
}
