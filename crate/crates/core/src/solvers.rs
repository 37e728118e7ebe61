//! y-XL, y-MXL and y-HXL, solution extraction and a brute-force oracle.

use std::collections::{BTreeMap, HashSet};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{hxl_degree, twit_bound, Backend};
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::linalg::{echelonize, reduce_echelon, wiedemann_consistent, wiedemann_trials_for, Matrix};
use crate::macaulay::{
    assemble, build_y_macaulay_with, columns_for, multiplier_rows, ColumnLayout, MacaulayOptions, Storage,
};
use crate::polyring::{BilinearSequence, ColumnMonomial, MonomialOrder, XLinearPoly};

/// Default cap on `q^(n_x+n_y)` for [`brute_force`].
pub const BRUTE_FORCE_BUDGET: u64 = 1 << 24;
/// Default cap on search nodes visited by [`extract_solution`].
pub const EXTRACT_BUDGET: usize = 4096;
/// Largest guess space `y_hxl` will enumerate.
pub const GUESS_BUDGET: u64 = 1 << 32;

/// `Σ x_i·x[i] + Σ y_j·y[j] + c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearPoly {
    pub x: Vec<u32>,
    pub y: Vec<u32>,
    pub c: u32,
}

impl LinearPoly {
    pub fn is_constant(&self) -> bool {
        self.x.iter().chain(&self.y).all(|&a| a == 0)
    }

    pub fn evaluate(&self, f: &FieldCtx, u: &[u32], v: &[u32]) -> u32 {
        let mut acc = self.c;
        for (a, &ui) in self.x.iter().zip(u) {
            acc = f.mul_add(acc, *a, ui);
        }
        for (a, &vj) in self.y.iter().zip(v) {
            acc = f.mul_add(acc, *a, vj);
        }
        acc
    }

    fn substitute(&self, xs: &[Option<u32>], ys: &[Option<u32>], f: &FieldCtx) -> LinearPoly {
        let mut out = LinearPoly { x: Vec::new(), y: Vec::new(), c: self.c };
        for (a, s) in self.x.iter().zip(xs) {
            match s {
                Some(val) => out.c = f.mul_add(out.c, *a, *val),
                None => out.x.push(*a),
            }
        }
        for (a, s) in self.y.iter().zip(ys) {
            match s {
                Some(val) => out.c = f.mul_add(out.c, *a, *val),
                None => out.y.push(*a),
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Status {
    SolutionFound { u: Vec<u32>, v: Vec<u32> },
    NoSolution,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub algorithm: String,
    pub status: Status,
    pub solving_degree: Option<u32>,
    pub per_degree_ranks: BTreeMap<u32, usize>,
    /// For y-HXL these belong to the evaluated system of the reported
    /// guess, with zero coefficients on the guessed variables.
    pub linear_polys: Vec<LinearPoly>,
    pub mutant_count: Vec<usize>,
    pub guesses_tried: Option<u64>,
    pub seed: Option<u64>,
    pub wall_time_secs: f64,
}

impl SolveReport {
    pub fn new(algorithm: &str) -> Self {
        SolveReport {
            algorithm: algorithm.to_string(),
            status: Status::Undetermined,
            solving_degree: None,
            per_degree_ranks: BTreeMap::new(),
            linear_polys: Vec::new(),
            mutant_count: Vec::new(),
            guesses_tried: None,
            seed: None,
            wall_time_secs: 0.0,
        }
    }

    pub fn solution(&self) -> Option<(&[u32], &[u32])> {
        match &self.status {
            Status::SolutionFound { u, v } => Some((u, v)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HybridConfig {
    pub a_x: usize,
    pub a_y: usize,
    pub backend: Backend,
    /// Visit guesses in lexicographic order; otherwise in a permutation
    /// drawn from `seed`.
    pub lexicographic: bool,
    /// Seeds the Wiedemann projections and the shuffled guess order.
    pub seed: u64,
}

impl HybridConfig {
    pub fn new(a_x: usize, a_y: usize, backend: Backend) -> Self {
        HybridConfig { a_x, a_y, backend, lexicographic: true, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Run [`extract_solution`] once linear polynomials show up. Without
    /// it the status stays `Undetermined` unless `1` is in the ideal.
    pub extract: bool,
    pub extract_budget: usize,
    pub order: MonomialOrder,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { extract: true, extract_budget: EXTRACT_BUDGET, order: MonomialOrder::default() }
    }
}

struct LinearPart {
    rank: usize,
    linear: Vec<LinearPoly>,
    one_in_ideal: bool,
}

fn linear_poly_of(row: &[u32], cols: &[ColumnMonomial], nx: usize, ny: usize) -> LinearPoly {
    let mut p = LinearPoly { x: vec![0; nx], y: vec![0; ny], c: 0 };
    for (&v, col) in row.iter().zip(cols) {
        if v == 0 {
            continue;
        }
        match (col.x, col.y.degree()) {
            (Some(i), 0) => p.x[i] = v,
            (None, 1) => p.y[col.y.exponents().iter().position(|&e| e == 1).unwrap()] = v,
            (None, 0) => p.c = v,
            _ => unreachable!("row has a term of degree above 1"),
        }
    }
    p
}

/// Linear polynomials of an echelon form whose columns are graded, so that
/// degree ≤ 1 columns form a suffix.
fn linear_rows(m: &Matrix, pivots: &[usize], cols: &[ColumnMonomial], nx: usize, ny: usize) -> LinearPart {
    let mut linear = Vec::new();
    for (t, &p) in pivots.iter().enumerate() {
        if cols[p].degree() <= 1 {
            linear.push(linear_poly_of(&m.row(t)[p..], &cols[p..], nx, ny));
        }
    }
    let one_in_ideal = linear.iter().any(LinearPoly::is_constant);
    LinearPart { rank: pivots.len(), linear, one_in_ideal }
}

fn affine_linear_part(b: &BilinearSequence, d: u32, order: MonomialOrder) -> Result<LinearPart> {
    let opts = MacaulayOptions { order, layout: ColumnLayout::Affine, storage: Storage::Dense };
    let mac = build_y_macaulay_with(b, d, &opts)?;
    let cols = mac.columns.clone();
    let mut m = mac.into_dense();
    let f = b.field();
    let pivots = echelonize(&mut m, &f);
    Ok(linear_rows(&m, &pivots, &cols, b.nx(), b.ny()))
}

fn check_degree(d: u32) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidParams(format!("degree bound {d} below 2")));
    }
    Ok(())
}

fn finish(report: &mut SolveReport, b: &BilinearSequence, d: u32, part: LinearPart, opts: &SolveOptions) {
    report.per_degree_ranks.insert(d, part.rank);
    if part.linear.is_empty() {
        return;
    }
    report.solving_degree = Some(d);
    report.status = if part.one_in_ideal {
        Status::NoSolution
    } else if opts.extract {
        match search(b, &part.linear, d, opts.extract_budget) {
            Search::Found(u, v) => Status::SolutionFound { u, v },
            Search::Empty => Status::NoSolution,
            Search::OutOfBudget => Status::Undetermined,
        }
    } else {
        Status::Undetermined
    };
    report.linear_polys = part.linear;
}

/// y-XL at degree `d`.
pub fn y_xl(b: &BilinearSequence, d: u32) -> Result<SolveReport> {
    y_xl_with(b, d, &SolveOptions::default())
}

/// y-XL at the witness degree.
pub fn y_xl_default(b: &BilinearSequence) -> Result<SolveReport> {
    y_xl(b, twit_bound(b.nx(), b.ny(), b.m())?)
}

pub fn y_xl_with(b: &BilinearSequence, d: u32, opts: &SolveOptions) -> Result<SolveReport> {
    check_degree(d)?;
    let start = Instant::now();
    let mut report = SolveReport::new("yxl");
    let part = affine_linear_part(b, d, opts.order)?;
    finish(&mut report, b, d, part, opts);
    report.wall_time_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Smallest `d ≤ d_max` at which y-XL finds a polynomial of degree ≤ 1.
pub fn xl_solving_degree(b: &BilinearSequence, d_max: u32) -> Result<Option<u32>> {
    for d in 2..=d_max {
        if !affine_linear_part(b, d, MonomialOrder::default())?.linear.is_empty() {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// y-MXL with degree bound `d_max`.
pub fn y_mxl(b: &BilinearSequence, d_max: u32) -> Result<SolveReport> {
    y_mxl_with(b, d_max, &SolveOptions::default())
}

pub fn y_mxl_with(b: &BilinearSequence, d_max: u32, opts: &SolveOptions) -> Result<SolveReport> {
    if d_max < 3 {
        return Err(Error::InvalidParams(format!("degree bound {d_max} below 3")));
    }
    let start = Instant::now();
    let mut report = SolveReport::new("ymxl");
    let f = b.field();
    let (nx, ny) = (b.nx(), b.ny());
    let mut gens: Vec<XLinearPoly> = b.polys().iter().map(XLinearPoly::from).collect();
    let mut gen_deg = vec![2u32; gens.len()];
    for d in 2..=d_max {
        loop {
            let rows = multiplier_rows(ny, &gen_deg, d);
            let cols = columns_for(&gens, &rows, opts.order);
            let low: Vec<_> = rows.iter().filter(|r| gen_deg[r.generator] + r.multiplier.degree() < d).cloned().collect();
            let mac = assemble(&gens, rows, cols.clone(), d, &f, Storage::Dense)?;
            let mut m = mac.into_dense();
            let pivots = echelonize(&mut m, &f);
            let part = linear_rows(&m, &pivots, &cols, nx, ny);
            if !part.linear.is_empty() {
                finish(&mut report, b, d, part, opts);
                report.wall_time_secs = start.elapsed().as_secs_f64();
                return Ok(report);
            }
            report.per_degree_ranks.insert(d, part.rank);
            let low_leads: HashSet<usize> = if low.is_empty() {
                HashSet::new()
            } else {
                let mut lm = assemble(&gens, low, cols.clone(), d, &f, Storage::Dense)?.into_dense();
                echelonize(&mut lm, &f).into_iter().collect()
            };
            let mut mutants = Vec::new();
            for (t, &p) in pivots.iter().enumerate() {
                if cols[p].degree() < d && !low_leads.contains(&p) {
                    let terms = m.row(t)[p..]
                        .iter()
                        .zip(&cols[p..])
                        .filter(|(v, _)| **v != 0)
                        .map(|(v, c)| (c.clone(), *v))
                        .collect();
                    mutants.push((XLinearPoly { terms }, cols[p].degree()));
                }
            }
            if mutants.is_empty() {
                break;
            }
            report.mutant_count.push(mutants.len());
            for (g, deg) in mutants {
                gens.push(g);
                gen_deg.push(deg);
            }
        }
    }
    report.wall_time_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

/// True iff `1 ∈ J_{y,≤d}(B)`, i.e. `z·M_{y,≤d}(B) = e` is solvable for the
/// indicator `e` of the constant column.
pub fn witness_consistency_test(b: &BilinearSequence, d: u32) -> Result<bool> {
    check_degree(d)?;
    Ok(affine_linear_part(b, d, MonomialOrder::default())?.one_in_ideal)
}

/// Same decision with the sparse randomized backend. A `true` answer is
/// certified; `false` may be wrong with probability at most `2^-20`.
pub fn witness_consistency_test_wiedemann(b: &BilinearSequence, d: u32, rng: &mut ChaCha8Rng) -> Result<bool> {
    check_degree(d)?;
    let opts = MacaulayOptions { layout: ColumnLayout::Affine, storage: Storage::Sparse, ..Default::default() };
    let mac = build_y_macaulay_with(b, d, &opts)?;
    let f = b.field();
    let mut e = vec![0u32; mac.ncols()];
    *e.last_mut().expect("affine layout has a constant column") = 1;
    let trials = wiedemann_trials_for(f.q(), 20.0);
    Ok(wiedemann_consistent(&mac.sparse(), &e, trials, &f, rng)?.is_consistent())
}

/// Completes linear information to a verified common zero, using the
/// witness degree for recursive y-XL calls.
pub fn extract_solution(b: &BilinearSequence, linear_polys: &[LinearPoly]) -> Option<(Vec<u32>, Vec<u32>)> {
    let d = twit_bound(b.nx(), b.ny(), b.m()).unwrap_or(3);
    extract_solution_at(b, linear_polys, d, EXTRACT_BUDGET)
}

/// Solves the linear system; fixes every determined variable, re-runs
/// y-XL at degree `d` on the smaller system and, when no variable is
/// determined, branches on a free one. At most `budget` branches are
/// tried. Any returned point is a verified zero of `b`.
pub fn extract_solution_at(
    b: &BilinearSequence,
    linear_polys: &[LinearPoly],
    d: u32,
    budget: usize,
) -> Option<(Vec<u32>, Vec<u32>)> {
    match search(b, linear_polys, d, budget) {
        Search::Found(u, v) => Some((u, v)),
        _ => None,
    }
}

/// Outcome of the completion search. `Empty` means the search finished
/// and proved that no common zero exists.
enum Search {
    Found(Vec<u32>, Vec<u32>),
    Empty,
    OutOfBudget,
}

fn search(b: &BilinearSequence, linear_polys: &[LinearPoly], d: u32, budget: usize) -> Search {
    if linear_polys.iter().any(|l| l.x.len() != b.nx() || l.y.len() != b.ny()) {
        return Search::OutOfBudget;
    }
    let mut left = budget;
    match extract_rec(b, linear_polys.to_vec(), d, &mut left) {
        Search::Found(u, v) if !b.is_zero_at(&u, &v) => Search::OutOfBudget,
        other => other,
    }
}

fn found_if_zero(b: &BilinearSequence, u: Vec<u32>, v: Vec<u32>) -> Search {
    if b.is_zero_at(&u, &v) {
        Search::Found(u, v)
    } else {
        Search::Empty
    }
}

fn extract_rec(b: &BilinearSequence, lin: Vec<LinearPoly>, d: u32, left: &mut usize) -> Search {
    let f = b.field();
    let (nx, ny) = (b.nx(), b.ny());
    let n = nx + ny;
    if n == 0 {
        return found_if_zero(b, Vec::new(), Vec::new());
    }
    let mut m = Matrix::zeros(lin.len(), n + 1);
    for (r, l) in lin.iter().enumerate() {
        let row = m.row_mut(r);
        row[..nx].copy_from_slice(&l.x);
        row[nx..n].copy_from_slice(&l.y);
        row[n] = l.c;
    }
    let pivots = echelonize(&mut m, &f);
    if pivots.last() == Some(&n) {
        return Search::Empty;
    }
    reduce_echelon(&mut m, &pivots, &f);
    let mut fixed: Vec<Option<u32>> = vec![None; n];
    for (t, &p) in pivots.iter().enumerate() {
        let row = m.row(t);
        if row[p + 1..n].iter().all(|&v| v == 0) {
            fixed[p] = Some(f.neg(row[n]));
        }
    }
    if fixed.iter().all(Option::is_some) {
        let pt: Vec<u32> = fixed.into_iter().map(Option::unwrap).collect();
        let (u, v) = pt.split_at(nx);
        return found_if_zero(b, u.to_vec(), v.to_vec());
    }
    if fixed.iter().any(Option::is_some) {
        return descend(b, &lin, &fixed, d, left);
    }
    let pivot_set: HashSet<usize> = pivots.iter().copied().collect();
    let branch = (0..n)
        .find(|&k| !pivot_set.contains(&k) && lin.iter().any(|l| (if k < nx { l.x[k] } else { l.y[k - nx] }) != 0))
        .unwrap_or_else(|| (0..n).find(|k| !pivot_set.contains(k)).expect("some variable is free"));
    for val in 0..f.q() {
        if *left == 0 {
            return Search::OutOfBudget;
        }
        *left -= 1;
        let mut fx = vec![None; n];
        fx[branch] = Some(val);
        match descend(b, &lin, &fx, d, left) {
            Search::Empty => {}
            other => return other,
        }
    }
    Search::Empty
}

/// Substitutes the fixed variables, gathers new linear information on the
/// smaller system and recurses.
fn descend(
    b: &BilinearSequence,
    lin: &[LinearPoly],
    fixed: &[Option<u32>],
    d: u32,
    left: &mut usize,
) -> Search {
    let f = b.field();
    let nx = b.nx();
    let (xs, ys) = fixed.split_at(nx);
    let Ok(sub) = b.substitute(xs, ys) else {
        return Search::OutOfBudget;
    };
    let mut next: Vec<LinearPoly> = lin.iter().map(|l| l.substitute(xs, ys, &f)).collect();
    if sub.nx() + sub.ny() > 0 {
        let Ok(part) = affine_linear_part(&sub, d, MonomialOrder::default()) else {
            return Search::OutOfBudget;
        };
        if part.one_in_ideal {
            return Search::Empty;
        }
        next.extend(part.linear);
    }
    next.retain(|l| !(l.is_constant() && l.c == 0));
    let (su, sv) = match extract_rec(&sub, next, d, left) {
        Search::Found(su, sv) => (su, sv),
        other => return other,
    };
    let (mut it_u, mut it_v) = (su.into_iter(), sv.into_iter());
    let u: Vec<u32> = xs.iter().map(|s| s.unwrap_or_else(|| it_u.next().unwrap())).collect();
    let v: Vec<u32> = ys.iter().map(|s| s.unwrap_or_else(|| it_v.next().unwrap())).collect();
    found_if_zero(b, u, v)
}

enum GuessOutcome {
    Solved(Vec<u32>, Vec<u32>, Vec<LinearPoly>, u32),
    Inconsistent,
    Incomplete,
}

/// Hybrid y-XL: guess the first `a_x` x- and `a_y` y-variables, then decide
/// each evaluated system with the witness test.
pub fn y_hxl(b: &BilinearSequence, cfg: &HybridConfig) -> Result<SolveReport> {
    let (nx, ny, m) = (b.nx(), b.ny(), b.m());
    let (ax, ay) = (cfg.a_x, cfg.a_y);
    if ax > nx || ay >= ny {
        return Err(Error::InvalidParams(format!("need a_x <= n_x and a_y < n_y (got a_x={ax}, a_y={ay})")));
    }
    if (nx - ax) + (ny - ay) + 2 > m {
        return Err(Error::InvalidParams(format!(
            "evaluated system needs (n_x-a_x)+(n_y-a_y) <= m-2 (got {}+{} with m={m})",
            nx - ax,
            ny - ay
        )));
    }
    let d = hxl_degree(nx, ny, m, ax, ay)?.max(2);
    let f = b.field();
    let k = (ax + ay) as u32;
    let total = (f.q() as u64).checked_pow(k).filter(|&t| t <= GUESS_BUDGET).ok_or_else(|| {
        Error::Budget(format!("q^{k} guesses exceed the budget of {GUESS_BUDGET}"))
    })?;
    let start = Instant::now();
    let mut report = SolveReport::new(match cfg.backend {
        Backend::Gaussian => "yhxl-gaussian",
        Backend::Wiedemann => "yhxl-wiedemann",
    });
    report.seed = Some(cfg.seed);
    let order: Option<Vec<u64>> = if cfg.lexicographic {
        None
    } else {
        if total > BRUTE_FORCE_BUDGET {
            return Err(Error::Budget("shuffled guess order needs q^(a_x+a_y) <= 2^24".into()));
        }
        let mut idx: Vec<u64> = (0..total).collect();
        idx.shuffle(&mut ChaCha8Rng::seed_from_u64(cfg.seed));
        Some(idx)
    };
    let guess_at = |pos: u64| -> (u64, Vec<u32>, Vec<u32>) {
        let index = order.as_ref().map_or(pos, |o| o[pos as usize]);
        let mut digits = vec![0u32; ax + ay];
        let mut r = index;
        for slot in digits.iter_mut().rev() {
            *slot = (r % f.q() as u64) as u32;
            r /= f.q() as u64;
        }
        let v = digits.split_off(ax);
        (index, digits, v)
    };
    let try_guess = |pos: u64| -> Result<GuessOutcome> {
        let (index, gu, gv) = guess_at(pos);
        let xs: Vec<Option<u32>> = (0..nx).map(|i| gu.get(i).copied()).collect();
        let ys: Vec<Option<u32>> = (0..ny).map(|j| gv.get(j).copied()).collect();
        let sub = b.substitute(&xs, &ys)?;
        if cfg.backend == Backend::Wiedemann {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
            if witness_consistency_test_wiedemann(&sub, d, &mut rng)? {
                return Ok(GuessOutcome::Inconsistent);
            }
        }
        let part = affine_linear_part(&sub, d, MonomialOrder::default())?;
        if part.one_in_ideal {
            return Ok(GuessOutcome::Inconsistent);
        }
        let (su, sv) = match search(&sub, &part.linear, d, EXTRACT_BUDGET) {
            Search::Found(su, sv) => (su, sv),
            Search::Empty => return Ok(GuessOutcome::Inconsistent),
            Search::OutOfBudget => return Ok(GuessOutcome::Incomplete),
        };
        let u: Vec<u32> = gu.iter().copied().chain(su).collect();
        let v: Vec<u32> = gv.iter().copied().chain(sv).collect();
        if !b.is_zero_at(&u, &v) {
            return Ok(GuessOutcome::Incomplete);
        }
        let lift = |l: LinearPoly| LinearPoly {
            x: std::iter::repeat(0).take(ax).chain(l.x).collect(),
            y: std::iter::repeat(0).take(ay).chain(l.y).collect(),
            c: l.c,
        };
        Ok(GuessOutcome::Solved(u, v, part.linear.into_iter().map(lift).collect(), d))
    };
    let chunk = (rayon::current_num_threads() as u64 * 4).max(16);
    let mut incomplete = false;
    let mut lo = 0u64;
    while lo < total {
        let hi = (lo + chunk).min(total);
        let outcomes: Vec<Result<GuessOutcome>> = (lo..hi).into_par_iter().map(try_guess).collect();
        for (off, out) in outcomes.into_iter().enumerate() {
            match out? {
                GuessOutcome::Solved(u, v, lin, deg) => {
                    report.guesses_tried = Some(lo + off as u64 + 1);
                    report.solving_degree = (!lin.is_empty()).then_some(deg);
                    report.linear_polys = lin;
                    report.status = Status::SolutionFound { u, v };
                    report.wall_time_secs = start.elapsed().as_secs_f64();
                    return Ok(report);
                }
                GuessOutcome::Incomplete => incomplete = true,
                GuessOutcome::Inconsistent => {}
            }
        }
        lo = hi;
    }
    report.guesses_tried = Some(total);
    report.status = if incomplete { Status::Undetermined } else { Status::NoSolution };
    report.wall_time_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Every common zero, in lexicographic order of `(u, v)`.
pub fn brute_force(b: &BilinearSequence) -> Result<Vec<(Vec<u32>, Vec<u32>)>> {
    brute_force_with_budget(b, BRUTE_FORCE_BUDGET)
}

pub fn brute_force_with_budget(b: &BilinearSequence, budget: u64) -> Result<Vec<(Vec<u32>, Vec<u32>)>> {
    let f = b.field();
    let q = f.q() as u64;
    let (nx, ny) = (b.nx(), b.ny());
    let count = q.checked_pow((nx + ny) as u32).filter(|&c| c <= budget);
    if count.is_none() {
        return Err(Error::Budget(format!("q^(n_x+n_y) = {q}^{} exceeds the budget of {budget}", nx + ny)));
    }
    let mut out = Vec::new();
    let mut u = vec![0u32; nx];
    let mut v = vec![0u32; ny];
    // per polynomial: y-coefficients and constant after fixing u
    let mut forms: Vec<(Vec<u32>, u32)> = vec![(vec![0; ny], 0); b.m()];
    loop {
        for (form, p) in forms.iter_mut().zip(b.polys()) {
            for j in 0..ny {
                let mut c = p.c[j];
                for i in 0..nx {
                    c = f.mul_add(c, p.a_at(i, j), u[i]);
                }
                form.0[j] = c;
            }
            let mut d = p.d;
            for i in 0..nx {
                d = f.mul_add(d, p.b[i], u[i]);
            }
            form.1 = d;
        }
        v.iter_mut().for_each(|x| *x = 0);
        loop {
            if forms.iter().all(|(c, d)| c.iter().zip(&v).fold(*d, |acc, (&a, &vj)| f.mul_add(acc, a, vj)) == 0) {
                out.push((u.clone(), v.clone()));
            }
            if !increment(&mut v, f.q()) {
                break;
            }
        }
        if !increment(&mut u, f.q()) {
            break;
        }
    }
    Ok(out)
}

/// Lexicographic successor with the first coordinate most significant.
fn increment(x: &mut [u32], q: u32) -> bool {
    for k in (0..x.len()).rev() {
        x[k] += 1;
        if x[k] < q {
            return true;
        }
        x[k] = 0;
    }
    false
}
