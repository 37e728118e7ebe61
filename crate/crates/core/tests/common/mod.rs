//! Property sweeps shared by the `properties` and `acceptance` targets.
//! Each returns the number of cases checked or a description of the first
//! counterexample.

#![allow(dead_code)]

use bilin::analysis::{cramer_syzygy, dreg_formula, twit_bound};
use bilin::macaulay::binomial;
use bilin::polyring::{random_planted, random_sequence, verify_syzygy, Params};
use bilin::solvers::{xl_solving_degree, y_mxl_with, y_xl_with, SolveOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Sweep = Result<usize, String>;

/// Σ_{j=2}^{d−1} m·C(n_y+j−3, j−2) = m·C(n_y+d−3, d−3) for d ≤ 12, n_y ≤ 32.
pub fn hockey_stick() -> Sweep {
    let mut n = 0;
    for m in 1..=4u128 {
        for ny in 1..=32i64 {
            for d in 3..=12i64 {
                let lhs: u128 = (2..d).map(|j| m * binomial(ny + j - 3, j - 2)).sum();
                let rhs = m * binomial(ny + d - 3, d - 3);
                if lhs != rhs {
                    return Err(format!("m={m} ny={ny} d={d}: {lhs} != {rhs}"));
                }
                n += 1;
            }
        }
    }
    Ok(n)
}

/// n_x + n_y ≤ m iff n_x(n_y−1)/(m−n_x) + 1 < n_x + 1, and the formula stays
/// at or below n_x + 1 on its domain.
pub fn dreg_bounded() -> Sweep {
    let mut n = 0;
    for nx in 1..=30usize {
        for ny in 1..=30usize {
            for m in nx + 1..=nx + ny + 40 {
                let lhs = nx + ny <= m;
                let rhs = (nx * (ny - 1)) < nx * (m - nx);
                if lhs != rhs {
                    return Err(format!("({nx},{ny},{m}): equivalence broken"));
                }
                if lhs {
                    let d = dreg_formula(nx, ny, m).map_err(|e| e.to_string())?;
                    if d as usize > nx + 1 {
                        return Err(format!("({nx},{ny},{m}): dreg {d} > nx+1"));
                    }
                    n += 1;
                }
            }
        }
    }
    Ok(n)
}

/// Every (n_x+1)-subset of rows gives a valid syzygy at (2,2,4).
pub fn cramer_all_subsets() -> Sweep {
    let mut n = 0;
    for q in [2u32, 3, 13, 31] {
        for seed in 0..5u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let b = random_sequence(Params::new(2, 2, 4, q).unwrap(), true, &mut rng);
            for skip in 0..4usize {
                let rows: Vec<usize> = (0..4).filter(|&r| r != skip).collect();
                let g = cramer_syzygy(&b, &rows).map_err(|e| e.to_string())?;
                if !verify_syzygy(&b, &g).map_err(|e| e.to_string())? {
                    return Err(format!("q={q} seed={seed} rows={rows:?}: not a syzygy"));
                }
                if g.max_degree().is_some_and(|d| d > 2) {
                    return Err(format!("q={q} seed={seed} rows={rows:?}: degree above n_x"));
                }
                if g.entries.iter().enumerate().any(|(i, e)| i == skip && !e.is_empty()) {
                    return Err(format!("q={q} seed={seed}: support outside the chosen rows"));
                }
                n += 1;
            }
        }
    }
    Ok(n)
}

const DOMINANCE_CELLS: [(usize, usize, usize, u32); 5] = [(2, 3, 7, 13), (3, 3, 8, 13), (3, 4, 10, 7), (4, 4, 11, 13), (2, 4, 9, 31)];

/// y-MXL never needs a larger degree than y-XL, on `count` planted instances.
pub fn mxl_dominates_xl(count: usize) -> Sweep {
    let opts = SolveOptions { extract: false, ..Default::default() };
    let mut checked = 0;
    for i in 0..count {
        let (nx, ny, m, q) = DOMINANCE_CELLS[i % DOMINANCE_CELLS.len()];
        let p = Params::new(nx, ny, m, q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + i as u64);
        let b = random_planted(p, &mut rng).0;
        let d_max = twit_bound(nx, ny, m).unwrap().max(3) + 1;
        let xl = xl_solving_degree(&b, d_max).map_err(|e| e.to_string())?;
        let mxl = y_mxl_with(&b, d_max, &opts).map_err(|e| e.to_string())?.solving_degree;
        if let (Some(x), Some(y)) = (xl, mxl) {
            if y > x {
                return Err(format!("instance {i} ({nx},{ny},{m}) q={q}: MXL {y} > XL {x}"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Once y-XL sees a linear polynomial at degree d it keeps seeing one above.
pub fn xl_degree_monotone(count: usize) -> Sweep {
    let opts = SolveOptions { extract: false, ..Default::default() };
    for i in 0..count {
        let (nx, ny, m, q) = DOMINANCE_CELLS[i % DOMINANCE_CELLS.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(2000 + i as u64);
        let b = random_planted(Params::new(nx, ny, m, q).unwrap(), &mut rng).0;
        let top = twit_bound(nx, ny, m).unwrap().max(3) + 1;
        let mut seen = false;
        for d in 2..=top {
            let found = !y_xl_with(&b, d, &opts).map_err(|e| e.to_string())?.linear_polys.is_empty();
            if seen && !found {
                return Err(format!("instance {i}: linear polynomials lost at d={d}"));
            }
            seen |= found;
        }
    }
    Ok(count)
}
