//! Exact linear algebra over GF(q).
//!
//! Dense elimination has two routes. A plain row-by-row elimination handles
//! small inputs and large moduli; bigger matrices go through a recursive
//! column-split elimination whose trailing updates are floating-point GEMM
//! calls, exact because every partial sum stays below the mantissa limit.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldCtx;

/// Dense row-major matrix with entries in `[0, q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix { rows: rows.len(), cols, data: rows.concat() }
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, f: &FieldCtx, rng: &mut R) -> Self {
        Matrix { rows, cols, data: (0..rows * cols).map(|_| f.rand_elem(rng)).collect() }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [u32] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::Dimension(format!("{} vs {} columns", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// `x·M` for a row vector `x`.
    pub fn mul_left(&self, x: &[u32], f: &FieldCtx) -> Vec<u32> {
        let q = f.q() as u64;
        let mut acc = vec![0u64; self.cols];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (a, &m) in acc.iter_mut().zip(self.row(i)) {
                *a = (*a + xi as u64 * m as u64) % q;
            }
        }
        acc.into_iter().map(|v| v as u32).collect()
    }

    pub fn to_csr(&self) -> CsrMatrix {
        let mut indptr = vec![0usize];
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for i in 0..self.rows {
            for (j, &v) in self.row(i).iter().enumerate() {
                if v != 0 {
                    indices.push(j);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        CsrMatrix { rows: self.rows, cols: self.cols, indptr, indices, values }
    }
}

/// Compressed sparse rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsrMatrix {
    pub rows: usize,
    pub cols: usize,
    pub indptr: Vec<usize>,
    pub indices: Vec<usize>,
    pub values: Vec<u32>,
}

impl CsrMatrix {
    /// Builds from unsorted triplets; duplicates are summed.
    pub fn from_triplets(rows: usize, cols: usize, mut t: Vec<(usize, usize, u32)>, f: &FieldCtx) -> Self {
        t.sort_unstable_by_key(|&(i, j, _)| (i, j));
        let mut indptr = vec![0usize; rows + 1];
        let mut indices: Vec<usize> = Vec::with_capacity(t.len());
        let mut values: Vec<u32> = Vec::with_capacity(t.len());
        let mut row_of: Vec<usize> = Vec::with_capacity(t.len());
        for (i, j, v) in t {
            if let (Some(&lj), Some(&li)) = (indices.last(), row_of.last()) {
                if li == i && lj == j {
                    let last = values.last_mut().unwrap();
                    *last = f.add(*last, v);
                    continue;
                }
            }
            indices.push(j);
            values.push(v);
            row_of.push(i);
        }
        let mut keep_i = Vec::with_capacity(indices.len());
        let mut keep_v = Vec::with_capacity(values.len());
        for ((j, v), i) in indices.into_iter().zip(values).zip(row_of) {
            if v != 0 {
                keep_i.push(j);
                keep_v.push(v);
                indptr[i + 1] += 1;
            }
        }
        for i in 0..rows {
            indptr[i + 1] += indptr[i];
        }
        CsrMatrix { rows, cols, indptr, indices: keep_i, values: keep_v }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for p in self.indptr[i]..self.indptr[i + 1] {
                m.data[i * self.cols + self.indices[p]] = self.values[p];
            }
        }
        m
    }

    /// `x·M` for a row vector `x` of length `rows`.
    pub fn mul_left(&self, x: &[u32], f: &FieldCtx) -> Vec<u32> {
        let q = f.q() as u64;
        let mut acc = vec![0u64; self.cols];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for p in self.indptr[i]..self.indptr[i + 1] {
                let a = &mut acc[self.indices[p]];
                *a = (*a + xi as u64 * self.values[p] as u64) % q;
            }
        }
        acc.into_iter().map(|v| v as u32).collect()
    }

    /// `M·y` for a column vector `y` of length `cols`.
    pub fn mul_right(&self, y: &[u32], f: &FieldCtx) -> Vec<u32> {
        let q = f.q() as u64;
        (0..self.rows)
            .map(|i| {
                let mut s = 0u64;
                for p in self.indptr[i]..self.indptr[i + 1] {
                    s = (s + self.values[p] as u64 * y[self.indices[p]] as u64) % q;
                }
                s as u32
            })
            .collect()
    }
}

/// Reduced row echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EchelonResult {
    pub reduced: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Brings `m` to (non-reduced) row echelon form in place and returns the
/// pivot columns. Rows `0..rank` carry the pivots in increasing column
/// order; every entry left of a row's pivot is zero; rows from `rank` on
/// are zero.
pub fn echelonize(m: &mut Matrix, f: &FieldCtx) -> Vec<usize> {
    let q = f.q() as u64;
    let big = m.rows.min(m.cols) >= BLOCKED_MIN_DIM;
    if big && (q - 1) * (q - 1) * 64 + q < F32_EXACT {
        let kmax = ((F32_EXACT - q) / ((q - 1) * (q - 1))) as usize;
        Blocked::<f32>::new(m, *f, kmax).run()
    } else if big && (q - 1) * (q - 1) * 64 + q < F64_EXACT {
        let kmax = ((F64_EXACT - q) / ((q - 1) * (q - 1))) as usize;
        Blocked::<f64>::new(m, *f, kmax).run()
    } else {
        echelonize_scalar(m, f)
    }
}

const F32_EXACT: u64 = 1 << 24;
const F64_EXACT: u64 = 1 << 53;
const BLOCKED_MIN_DIM: usize = 48;
const BASE_WIDTH: usize = 16;
const TRSM_BASE: usize = 16;
const SCALAR_UPDATE_K: usize = 4;
const ROW_CHUNK: usize = 512;

/// Row-by-row elimination. Reference route for the blocked version.
pub fn echelonize_scalar(m: &mut Matrix, f: &FieldCtx) -> Vec<usize> {
    let red = Reducer::new(f.q());
    let cols = m.cols;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| m.data[i * cols + c] != 0) else {
            continue;
        };
        swap_rows(&mut m.data, cols, r, p);
        let inv = f.inv(m.data[r * cols + c]).unwrap();
        let (top, rest) = m.data.split_at_mut((r + 1) * cols);
        let prow = &top[r * cols..];
        for row in rest.chunks_exact_mut(cols) {
            let v = row[c];
            if v == 0 {
                continue;
            }
            let factor = f.neg(f.mul(v, inv));
            red.axpy(&mut row[c..], factor, &prow[c..]);
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn swap_rows(data: &mut [u32], cols: usize, a: usize, b: usize) {
    if a == b {
        return;
    }
    let (lo, hi) = (a.min(b), a.max(b));
    let (x, y) = data.split_at_mut(hi * cols);
    x[lo * cols..(lo + 1) * cols].swap_with_slice(&mut y[..cols]);
}

/// Fast `a mod q` for values below 2^64 via a precomputed reciprocal.
#[derive(Clone, Copy)]
struct Reducer {
    q: u64,
    small: bool,
}

impl Reducer {
    fn new(q: u32) -> Self {
        Reducer { q: q as u64, small: (q as u64) < (1 << 16) }
    }

    /// `dst[j] = dst[j] + s·src[j]`
    #[inline]
    fn axpy(&self, dst: &mut [u32], s: u32, src: &[u32]) {
        if s == 0 {
            return;
        }
        if self.small {
            // a + s·b < 2^32, so 32-bit remainder suffices
            let q = self.q as u32;
            for (d, &b) in dst.iter_mut().zip(src) {
                *d = (*d + s * b) % q;
            }
        } else {
            let q = self.q;
            for (d, &b) in dst.iter_mut().zip(src) {
                *d = ((*d as u64 + s as u64 * b as u64) % q) as u32;
            }
        }
    }
}

trait GemmScalar: Copy + Default + Send + Sync {
    fn from_u32(v: u32) -> Self;
    fn to_i64(self) -> i64;
    /// `c = c - a·b` on row-major buffers.
    fn gemm_sub(m: usize, k: usize, n: usize, a: &[Self], b: &[Self], c: &mut [Self]);
}

impl GemmScalar for f32 {
    fn from_u32(v: u32) -> Self {
        v as f32
    }
    fn to_i64(self) -> i64 {
        self as i64
    }
    fn gemm_sub(m: usize, k: usize, n: usize, a: &[f32], b: &[f32], c: &mut [f32]) {
        assert!(a.len() >= m * k && b.len() >= k * n && c.len() >= m * n);
        // SAFETY: the buffers are row-major with the asserted sizes.
        unsafe {
            matrixmultiply::sgemm(
                m, k, n, -1.0, a.as_ptr(), k as isize, 1, b.as_ptr(), n as isize, 1, 1.0, c.as_mut_ptr(), n as isize, 1,
            );
        }
    }
}

impl GemmScalar for f64 {
    fn from_u32(v: u32) -> Self {
        v as f64
    }
    fn to_i64(self) -> i64 {
        self as i64
    }
    fn gemm_sub(m: usize, k: usize, n: usize, a: &[f64], b: &[f64], c: &mut [f64]) {
        assert!(a.len() >= m * k && b.len() >= k * n && c.len() >= m * n);
        // SAFETY: the buffers are row-major with the asserted sizes.
        unsafe {
            matrixmultiply::dgemm(
                m, k, n, -1.0, a.as_ptr(), k as isize, 1, b.as_ptr(), n as isize, 1, 1.0, c.as_mut_ptr(), n as isize, 1,
            );
        }
    }
}

/// Recursive elimination. Multipliers are stored in place at the pivot
/// columns of eliminated rows (they travel with row swaps) and are cleared
/// at the end.
struct Blocked<'a, T> {
    a: &'a mut Matrix,
    f: FieldCtx,
    red: Reducer,
    kmax: usize,
    _t: std::marker::PhantomData<T>,
}

impl<'a, T: GemmScalar> Blocked<'a, T> {
    fn new(a: &'a mut Matrix, f: FieldCtx, kmax: usize) -> Self {
        Blocked { a, f, red: Reducer::new(f.q()), kmax: kmax.max(1), _t: std::marker::PhantomData }
    }

    fn run(mut self) -> Vec<usize> {
        let cols = self.a.cols;
        let pivots = self.rec(0, 0, cols);
        let rank = pivots.len();
        for t in 0..rank {
            let row = &mut self.a.data[t * cols..(t + 1) * cols];
            for &p in &pivots[..t] {
                row[p] = 0;
            }
        }
        self.a.data[rank * cols..].fill(0);
        pivots
    }

    fn rec(&mut self, r0: usize, c0: usize, c1: usize) -> Vec<usize> {
        if r0 >= self.a.rows || c0 >= c1 {
            return Vec::new();
        }
        if c1 - c0 <= BASE_WIDTH {
            return self.base(r0, c0, c1);
        }
        let mid = c0 + (c1 - c0) / 2;
        let mut p1 = self.rec(r0, c0, mid);
        let k1 = p1.len();
        if k1 > 0 {
            self.trsm(r0, &p1, 0, k1, mid, c1);
            let rows = self.a.rows;
            self.update(r0 + k1, rows, r0, &p1, mid, c1);
        }
        let p2 = self.rec(r0 + k1, mid, c1);
        p1.extend(p2);
        p1
    }

    fn base(&mut self, r0: usize, c0: usize, c1: usize) -> Vec<usize> {
        let cols = self.a.cols;
        let rows = self.a.rows;
        let f = self.f;
        let mut pivots = Vec::new();
        let mut r = r0;
        for c in c0..c1 {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| self.a.data[i * cols + c] != 0) else {
                continue;
            };
            swap_rows(&mut self.a.data, cols, r, p);
            let inv = f.inv(self.a.data[r * cols + c]).unwrap();
            let (top, rest) = self.a.data.split_at_mut((r + 1) * cols);
            let prow = &top[r * cols + c + 1..r * cols + c1];
            for row in rest.chunks_exact_mut(cols) {
                let v = row[c];
                if v == 0 {
                    continue;
                }
                let l = f.mul(v, inv);
                row[c] = l;
                self.red.axpy(&mut row[c + 1..c1], f.neg(l), prow);
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Rows `r0+t0..r0+t1` (pivot rows), columns `c0..c1`: apply the inverse
    /// of the unit lower triangle formed by the stored multipliers.
    fn trsm(&mut self, r0: usize, piv: &[usize], t0: usize, t1: usize, c0: usize, c1: usize) {
        if t1 - t0 <= TRSM_BASE {
            let cols = self.a.cols;
            let f = self.f;
            for t in t0 + 1..t1 {
                for s in t0..t {
                    let l = self.a.data[(r0 + t) * cols + piv[s]];
                    if l == 0 {
                        continue;
                    }
                    let (top, rest) = self.a.data.split_at_mut((r0 + t) * cols);
                    let src = &top[(r0 + s) * cols + c0..(r0 + s) * cols + c1];
                    self.red.axpy(&mut rest[c0..c1], f.neg(l), src);
                }
            }
            return;
        }
        let tm = t0 + (t1 - t0) / 2;
        self.trsm(r0, piv, t0, tm, c0, c1);
        self.update(r0 + tm, r0 + t1, r0 + t0, &piv[t0..tm], c0, c1);
        self.trsm(r0, piv, tm, t1, c0, c1);
    }

    /// `A[i][c0..c1] -= Σ_s A[i][piv[s]]·A[src+s][c0..c1]` for `i` in `d0..d1`.
    fn update(&mut self, d0: usize, d1: usize, src: usize, piv: &[usize], c0: usize, c1: usize) {
        if d0 >= d1 || piv.is_empty() || c0 >= c1 {
            return;
        }
        let cols = self.a.cols;
        let k = piv.len();
        let w = c1 - c0;
        let f = self.f;
        if k <= SCALAR_UPDATE_K {
            for i in d0..d1 {
                for (s, &p) in piv.iter().enumerate() {
                    let l = self.a.data[i * cols + p];
                    if l == 0 {
                        continue;
                    }
                    let (lo, hi) = if i < src + s { (i, src + s) } else { (src + s, i) };
                    let (x, y) = self.a.data.split_at_mut(hi * cols);
                    let (dst, srow) = if i == lo {
                        (&mut x[lo * cols + c0..lo * cols + c1], &y[c0..c1])
                    } else {
                        (&mut y[c0..c1], &x[lo * cols + c0..lo * cols + c1])
                    };
                    self.red.axpy(dst, f.neg(l), srow);
                }
            }
            return;
        }
        let q = f.q() as i64;
        // B = source rows, split into k-chunks that keep sums exact
        let ub: Vec<T> = (0..k)
            .flat_map(|s| self.a.data[(src + s) * cols + c0..(src + s) * cols + c1].iter().map(|&v| T::from_u32(v)))
            .collect();
        let mut lbuf: Vec<T> = Vec::new();
        let mut cbuf: Vec<T> = Vec::new();
        let mut i0 = d0;
        while i0 < d1 {
            let i1 = (i0 + ROW_CHUNK).min(d1);
            let h = i1 - i0;
            cbuf.clear();
            cbuf.extend(
                (i0..i1).flat_map(|i| self.a.data[i * cols + c0..i * cols + c1].iter().map(|&v| T::from_u32(v))),
            );
            let mut s0 = 0;
            while s0 < k {
                let s1 = (s0 + self.kmax).min(k);
                let kk = s1 - s0;
                lbuf.clear();
                let mut any = false;
                for i in i0..i1 {
                    for &p in &piv[s0..s1] {
                        let v = self.a.data[i * cols + p];
                        any |= v != 0;
                        lbuf.push(T::from_u32(v));
                    }
                }
                if any {
                    T::gemm_sub(h, kk, w, &lbuf, &ub[s0 * w..s1 * w], &mut cbuf);
                    if s1 < k {
                        for v in cbuf.iter_mut() {
                            *v = T::from_u32(v.to_i64().rem_euclid(q) as u32);
                        }
                    }
                }
                s0 = s1;
            }
            for (r, i) in (i0..i1).enumerate() {
                let dst = &mut self.a.data[i * cols + c0..i * cols + c1];
                for (d, v) in dst.iter_mut().zip(&cbuf[r * w..(r + 1) * w]) {
                    *d = v.to_i64().rem_euclid(q) as u32;
                }
            }
            i0 = i1;
        }
    }
}

/// Reduced row echelon form.
pub fn row_echelon(m: &Matrix, f: &FieldCtx) -> EchelonResult {
    let mut a = m.clone();
    let pivots = echelonize(&mut a, f);
    reduce_echelon(&mut a, &pivots, f);
    EchelonResult { rank: pivots.len(), reduced: a, pivots }
}

/// Turns a row echelon form into the reduced one.
pub fn reduce_echelon(a: &mut Matrix, pivots: &[usize], f: &FieldCtx) {
    let cols = a.cols;
    let red = Reducer::new(f.q());
    for (t, &c) in pivots.iter().enumerate() {
        let inv = f.inv(a.data[t * cols + c]).unwrap();
        for v in &mut a.data[t * cols + c..(t + 1) * cols] {
            *v = f.mul(*v, inv);
        }
    }
    for t in (0..pivots.len()).rev() {
        let c = pivots[t];
        let (top, rest) = a.data.split_at_mut(t * cols);
        let prow = &rest[c..cols];
        for s in 0..t {
            let v = top[s * cols + c];
            if v != 0 {
                red.axpy(&mut top[s * cols + c..(s + 1) * cols], f.neg(v), prow);
            }
        }
    }
}

pub fn rank(m: &Matrix, f: &FieldCtx) -> usize {
    let mut a = m.clone();
    echelonize(&mut a, f).len()
}

/// Reduces `v` against the first `pivots.len()` rows of an echelon form.
pub fn reduce_against(echelon: &Matrix, pivots: &[usize], v: &mut [u32], f: &FieldCtx) {
    let red = Reducer::new(f.q());
    for (t, &c) in pivots.iter().enumerate() {
        if v[c] != 0 {
            let row = echelon.row(t);
            let s = f.neg(f.mul(v[c], f.inv(row[c]).unwrap()));
            red.axpy(&mut v[c..], s, &row[c..]);
        }
    }
}

/// Finds some `z` with `z·M = b`, or `None` if `b` is outside the row space.
pub fn solve_left(m: &Matrix, b: &[u32], f: &FieldCtx) -> Result<Option<Vec<u32>>> {
    if b.len() != m.cols {
        return Err(Error::Dimension(format!("right-hand side has length {}, expected {}", b.len(), m.cols)));
    }
    // Mᵀ z = b, as an augmented system
    let (r, c) = (m.rows, m.cols);
    let mut t = Matrix::zeros(c, r + 1);
    for i in 0..r {
        for j in 0..c {
            t.data[j * (r + 1) + i] = m.data[i * c + j];
        }
    }
    for j in 0..c {
        t.data[j * (r + 1) + r] = b[j];
    }
    let pivots = echelonize(&mut t, f);
    if pivots.last() == Some(&r) {
        return Ok(None);
    }
    reduce_echelon(&mut t, &pivots, f);
    let mut z = vec![0u32; r];
    for (k, &p) in pivots.iter().enumerate() {
        z[p] = t.data[k * (r + 1) + r];
    }
    debug_assert_eq!(m.mul_left(&z, f), b);
    Ok(Some(z))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Consistent { certificate: Vec<u32> },
    ProbablyInconsistent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyVerdict {
    pub verdict: Verdict,
    /// log2 of the probability that a solvable system was reported as
    /// unsolvable; 0 for certified verdicts.
    pub failure_bound: f64,
}

impl ConsistencyVerdict {
    pub fn is_consistent(&self) -> bool {
        matches!(self.verdict, Verdict::Consistent { .. })
    }
}

/// log2 of the modeled chance that one randomized attempt misses a
/// certificate for a solvable system.
pub fn wiedemann_trial_log2(q: u32) -> f64 {
    (2.0 / q as f64).min(0.75).log2()
}

/// Attempts needed to push the failure bound below `2^-bits`.
pub fn wiedemann_trials_for(q: u32, bits: f64) -> usize {
    (bits / -wiedemann_trial_log2(q)).ceil().max(1.0) as usize
}

/// Coefficients `c_0 = 1, c_1, ..., c_L` of the shortest linear recurrence
/// `Σ_j c_j s_{i-j} = 0` (i ≥ L) generating `s`.
pub fn berlekamp_massey(s: &[u32], f: &FieldCtx) -> Vec<u32> {
    let mut c = vec![1u32];
    let mut b = vec![1u32];
    let mut l = 0usize;
    let mut shift = 1usize;
    let mut bd = 1u32;
    for n in 0..s.len() {
        let mut d = s[n];
        for j in 1..=l.min(c.len() - 1) {
            d = f.mul_add(d, c[j], s[n - j]);
        }
        if d == 0 {
            shift += 1;
            continue;
        }
        let coef = f.mul(d, f.inv(bd).unwrap());
        let prev = c.clone();
        if c.len() < b.len() + shift {
            c.resize(b.len() + shift, 0);
        }
        for (j, &bj) in b.iter().enumerate() {
            c[j + shift] = f.sub(c[j + shift], f.mul(coef, bj));
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = prev;
            bd = d;
            shift = 1;
        } else {
            shift += 1;
        }
    }
    c.resize(l + 1, 0);
    c
}

/// Sparse random matrix given as (row, col, value) entries.
struct Projection {
    entries: Vec<(usize, usize, u32)>,
    rows: usize,
}

impl Projection {
    /// `rows × cols` with about `per_col` nonzeros per column (dense when
    /// that covers every row).
    fn random<R: Rng + ?Sized>(rows: usize, cols: usize, per_col: usize, f: &FieldCtx, rng: &mut R) -> Self {
        let mut entries = Vec::new();
        for j in 0..cols {
            if per_col >= rows {
                for i in 0..rows {
                    entries.push((i, j, f.rand_elem(rng)));
                }
            } else {
                for _ in 0..per_col {
                    entries.push((rng.gen_range(0..rows), j, f.rand_nonzero(rng)));
                }
            }
        }
        Projection { entries, rows }
    }

    fn apply(&self, y: &[u32], f: &FieldCtx) -> Vec<u32> {
        let q = f.q() as u64;
        let mut out = vec![0u64; self.rows];
        for &(i, j, v) in &self.entries {
            out[i] = (out[i] + v as u64 * y[j] as u64) % q;
        }
        out.into_iter().map(|v| v as u32).collect()
    }
}

/// Probabilistic test of whether `z·M = b` has a solution.
///
/// Each attempt squares the system with a random projection, computes the
/// minimal polynomial of a random scalar Krylov sequence by Berlekamp–Massey
/// and assembles a candidate solution from it. Candidates are checked by
/// multiplication, so a `Consistent` verdict is always correct.
pub fn wiedemann_consistent<R: Rng + ?Sized>(
    m: &CsrMatrix,
    b: &[u32],
    trials: usize,
    f: &FieldCtx,
    rng: &mut R,
) -> Result<ConsistencyVerdict> {
    if b.len() != m.cols {
        return Err(Error::Dimension(format!("right-hand side has length {}, expected {}", b.len(), m.cols)));
    }
    let certified = |z: Vec<u32>| ConsistencyVerdict { verdict: Verdict::Consistent { certificate: z }, failure_bound: 0.0 };
    if b.iter().all(|&v| v == 0) {
        return Ok(certified(vec![0; m.rows]));
    }
    if m.rows > 0 {
        for _ in 0..trials.max(1) {
            if let Some(z) = wiedemann_attempt(m, b, f, rng) {
                if m.mul_left(&z, f) == b {
                    return Ok(certified(z));
                }
            }
        }
    }
    Ok(ConsistencyVerdict {
        verdict: Verdict::ProbablyInconsistent,
        failure_bound: trials.max(1) as f64 * wiedemann_trial_log2(f.q()),
    })
}

fn wiedemann_attempt<R: Rng + ?Sized>(m: &CsrMatrix, b: &[u32], f: &FieldCtx, rng: &mut R) -> Option<Vec<u32>> {
    let (r, c) = (m.rows, m.cols);
    let n = r.min(c);
    let per_col = |dim: usize| (2.0 * (dim.max(2) as f64).log2()).ceil() as usize + 4;
    // square operator B of size n, right-hand side bt, and the map back to z
    #[allow(clippy::type_complexity)]
    let (op, bt, back): (Box<dyn Fn(&[u32]) -> Vec<u32> + '_>, Vec<u32>, Box<dyn Fn(&[u32]) -> Vec<u32>>) = if r >= c {
        // z = R·w, B = Mᵀ·R
        let rp = std::rc::Rc::new(Projection::random(r, c, per_col(r), f, rng));
        let (rp1, rp2) = (rp.clone(), rp);
        let f1 = *f;
        let f2 = *f;
        (
            Box::new(move |w: &[u32]| m.mul_left(&rp1.apply(w, &f1), &f1)),
            b.to_vec(),
            Box::new(move |w: &[u32]| rp2.apply(w, &f2)),
        )
    } else {
        // B = P·Mᵀ, solve B·z = P·b
        let pp = Projection::random(r, c, per_col(r), f, rng);
        let bt = pp.apply(b, f);
        let f1 = *f;
        (Box::new(move |x: &[u32]| pp.apply(&m.mul_left(x, &f1), &f1)), bt, Box::new(|x: &[u32]| x.to_vec()))
    };
    if bt.iter().all(|&v| v == 0) {
        return None;
    }
    let u: Vec<u32> = (0..n).map(|_| f.rand_elem(rng)).collect();
    let dot = |a: &[u32], b: &[u32]| {
        let q = f.q() as u64;
        a.iter().zip(b).fold(0u64, |s, (&x, &y)| (s + x as u64 * y as u64) % q) as u32
    };
    let mut seq = Vec::with_capacity(2 * n);
    let mut v = bt.clone();
    for i in 0..2 * n {
        seq.push(dot(&u, &v));
        if i + 1 < 2 * n {
            v = op(&v);
        }
    }
    let conn = berlekamp_massey(&seq, f);
    let l = conn.len() - 1;
    if l == 0 {
        return None;
    }
    // minimal polynomial coefficients a_k = conn[L-k]
    let a0 = conn[l];
    if a0 == 0 {
        return None;
    }
    let q = f.q() as u64;
    let mut acc = vec![0u64; n];
    let mut v = bt;
    for k in 1..=l {
        let ak = conn[l - k] as u64;
        if ak != 0 {
            for (s, &x) in acc.iter_mut().zip(&v) {
                *s = (*s + ak * x as u64) % q;
            }
        }
        if k < l {
            v = op(&v);
        }
    }
    let scale = f.neg(f.inv(a0).unwrap()) as u64;
    let w: Vec<u32> = acc.into_iter().map(|s| (s * scale % q) as u32).collect();
    Some(back(&w))
}
