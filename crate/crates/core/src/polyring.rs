//! Monomials, bilinear polynomials and bilinear sequences.
//!
//! Variables are split into an x-block `x1..x_nx` and a y-block `y1..y_ny`.
//! Indices are 0-based in code and 1-based when printed.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldCtx;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    pub nx: usize,
    pub ny: usize,
    pub m: usize,
    pub q: u32,
}

impl Params {
    pub fn new(nx: usize, ny: usize, m: usize, q: u32) -> Result<Self> {
        if nx == 0 || ny == 0 || m == 0 {
            return Err(Error::InvalidParams(format!(
                "need nx, ny, m >= 1 (got {nx}, {ny}, {m})"
            )));
        }
        FieldCtx::new(q as u64)?;
        Ok(Params { nx, ny, m, q })
    }

    /// Like [`Params::new`] but allows an empty variable block. Used for
    /// sequences produced by substituting every variable of one block.
    pub fn reduced(nx: usize, ny: usize, m: usize, q: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParams("need m >= 1".into()));
        }
        FieldCtx::new(q as u64)?;
        Ok(Params { nx, ny, m, q })
    }

    pub fn field(&self) -> FieldCtx {
        FieldCtx::new(self.q as u64).expect("validated at construction")
    }
}

/// A monomial in the y-variables only.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YMonomial {
    exps: Vec<u8>,
    degree: u32,
}

impl YMonomial {
    pub fn one(ny: usize) -> Self {
        YMonomial { exps: vec![0; ny], degree: 0 }
    }

    pub fn var(ny: usize, j: usize) -> Self {
        let mut m = Self::one(ny);
        m.exps[j] = 1;
        m.degree = 1;
        m
    }

    pub fn from_exponents(exps: Vec<u8>) -> Self {
        let degree = exps.iter().map(|&e| e as u32).sum();
        YMonomial { exps, degree }
    }

    pub fn exponents(&self) -> &[u8] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn mul(&self, other: &YMonomial) -> YMonomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        YMonomial { exps, degree: self.degree + other.degree }
    }

    pub fn mul_var(&self, j: usize) -> YMonomial {
        let mut m = self.clone();
        m.exps[j] += 1;
        m.degree += 1;
        m
    }

    /// All monomials of exactly degree `deg` in `ny` variables, in
    /// decreasing lexicographic order (y1 > y2 > ...).
    pub fn of_degree(ny: usize, deg: u32) -> Vec<YMonomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u8; ny];
        fn rec(pos: usize, left: u32, cur: &mut Vec<u8>, out: &mut Vec<YMonomial>, total: u32) {
            if pos + 1 >= cur.len() {
                if let Some(last) = cur.last_mut() {
                    *last = left as u8;
                    out.push(YMonomial { exps: cur.clone(), degree: total });
                } else if left == 0 {
                    out.push(YMonomial { exps: Vec::new(), degree: 0 });
                }
                return;
            }
            for e in (0..=left).rev() {
                cur[pos] = e as u8;
                rec(pos + 1, left - e, cur, out, total);
            }
            cur[pos] = 0;
        }
        rec(0, deg, &mut cur, &mut out, deg);
        out
    }

    /// All monomials with degree at most `deg`, highest degree first.
    pub fn up_to_degree(ny: usize, deg: u32) -> Vec<YMonomial> {
        (0..=deg).rev().flat_map(|k| Self::of_degree(ny, k)).collect()
    }
}

impl fmt::Display for YMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for (j, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "y{}", j + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// A monomial that is at most linear in the x-block.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColumnMonomial {
    /// 0-based x index, `None` for a pure-y monomial.
    pub x: Option<usize>,
    pub y: YMonomial,
}

impl ColumnMonomial {
    pub fn new(x: Option<usize>, y: YMonomial) -> Self {
        ColumnMonomial { x, y }
    }

    pub fn degree(&self) -> u32 {
        self.y.degree + self.x.is_some() as u32
    }

    pub fn mul_y(&self, m: &YMonomial) -> Self {
        ColumnMonomial { x: self.x, y: self.y.mul(m) }
    }
}

impl fmt::Display for ColumnMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.x, self.y.degree) {
            (None, _) => write!(f, "{}", self.y),
            (Some(i), 0) => write!(f, "x{}", i + 1),
            (Some(i), _) => write!(f, "x{}*{}", i + 1, self.y),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    #[default]
    Grlex,
    Grevlex,
}

/// Compares two column monomials. Both orders are graded and put the
/// x-block above the y-block.
pub fn cmp_monomials(a: &ColumnMonomial, b: &ColumnMonomial, order: MonomialOrder) -> Result<Ordering> {
    if a.y.nvars() != b.y.nvars() {
        return Err(Error::Dimension(format!(
            "monomials over {} and {} y-variables",
            a.y.nvars(),
            b.y.nvars()
        )));
    }
    Ok(cmp_unchecked(a, b, order))
}

pub(crate) fn cmp_unchecked(a: &ColumnMonomial, b: &ColumnMonomial, order: MonomialOrder) -> Ordering {
    let by_degree = a.degree().cmp(&b.degree());
    if by_degree != Ordering::Equal {
        return by_degree;
    }
    // x-part: a smaller x index means a larger monomial in both orders
    let x_cmp = |a: Option<usize>, b: Option<usize>| match (a, b) {
        (Some(i), Some(j)) => j.cmp(&i),
        (Some(_), None) => Ordering::Greater,
        (None, Some(_)) => Ordering::Less,
        (None, None) => Ordering::Equal,
    };
    match order {
        MonomialOrder::Grlex => x_cmp(a.x, b.x).then_with(|| a.y.exps.cmp(&b.y.exps)),
        MonomialOrder::Grevlex => {
            for (ea, eb) in a.y.exps.iter().zip(&b.y.exps).rev() {
                if ea != eb {
                    return eb.cmp(ea);
                }
            }
            x_cmp(a.x, b.x)
        }
    }
}

/// Polynomial that is at most linear in the x-block, stored sparsely.
/// This is the ambient space of every row of a y-Macaulay matrix.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct XLinearPoly {
    pub terms: Vec<(ColumnMonomial, u32)>,
}

impl XLinearPoly {
    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.iter().filter(|(_, c)| *c != 0).map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(_, c)| *c == 0)
    }

    pub fn mul_y(&self, m: &YMonomial) -> XLinearPoly {
        XLinearPoly { terms: self.terms.iter().map(|(t, c)| (t.mul_y(m), *c)).collect() }
    }
}

impl From<&BilinearPoly> for XLinearPoly {
    fn from(p: &BilinearPoly) -> Self {
        XLinearPoly { terms: p.terms() }
    }
}

/// Affine-linear polynomial in the y-variables: `Σ y_k·coef[k] + c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YLinear {
    pub coef: Vec<u32>,
    pub c: u32,
}

/// `f = x·A·yᵀ + b·xᵀ + c·yᵀ + d`, with `A` stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearPoly {
    pub nx: usize,
    pub ny: usize,
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub c: Vec<u32>,
    pub d: u32,
}

impl BilinearPoly {
    pub fn zero(nx: usize, ny: usize) -> Self {
        BilinearPoly { nx, ny, a: vec![0; nx * ny], b: vec![0; nx], c: vec![0; ny], d: 0 }
    }

    #[inline]
    pub fn a_at(&self, i: usize, j: usize) -> u32 {
        self.a[i * self.ny + j]
    }

    pub fn is_homogeneous(&self) -> bool {
        self.b.iter().all(|&v| v == 0) && self.c.iter().all(|&v| v == 0) && self.d == 0
    }

    pub fn evaluate(&self, f: &FieldCtx, u: &[u32], v: &[u32]) -> u32 {
        let q = f.q() as u64;
        let mut acc = self.d as u64;
        for i in 0..self.nx {
            let row = &self.a[i * self.ny..(i + 1) * self.ny];
            let mut s = self.b[i] as u64;
            for j in 0..self.ny {
                s = (s + row[j] as u64 * v[j] as u64) % q;
            }
            acc = (acc + s * u[i] as u64) % q;
        }
        for j in 0..self.ny {
            acc = (acc + self.c[j] as u64 * v[j] as u64) % q;
        }
        acc as u32
    }

    /// Nonzero terms as (monomial, coefficient) pairs.
    pub fn terms(&self) -> Vec<(ColumnMonomial, u32)> {
        let mut t = Vec::new();
        for i in 0..self.nx {
            for j in 0..self.ny {
                let v = self.a_at(i, j);
                if v != 0 {
                    t.push((ColumnMonomial::new(Some(i), YMonomial::var(self.ny, j)), v));
                }
            }
            if self.b[i] != 0 {
                t.push((ColumnMonomial::new(Some(i), YMonomial::one(self.ny)), self.b[i]));
            }
        }
        for j in 0..self.ny {
            if self.c[j] != 0 {
                t.push((ColumnMonomial::new(None, YMonomial::var(self.ny, j)), self.c[j]));
            }
        }
        if self.d != 0 {
            t.push((ColumnMonomial::new(None, YMonomial::one(self.ny)), self.d));
        }
        t
    }

    /// Total degree (0 for constants, also for the zero polynomial).
    pub fn degree(&self) -> u32 {
        if self.a.iter().any(|&v| v != 0) {
            2
        } else if self.b.iter().chain(&self.c).any(|&v| v != 0) {
            1
        } else {
            0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearSequence {
    params: Params,
    field: FieldCtx,
    polys: Vec<BilinearPoly>,
}

impl BilinearSequence {
    pub fn new(params: Params, polys: Vec<BilinearPoly>) -> Result<Self> {
        if polys.len() != params.m {
            return Err(Error::Dimension(format!("expected {} polynomials, got {}", params.m, polys.len())));
        }
        let field = params.field();
        for p in &polys {
            if p.nx != params.nx
                || p.ny != params.ny
                || p.a.len() != params.nx * params.ny
                || p.b.len() != params.nx
                || p.c.len() != params.ny
            {
                return Err(Error::Dimension("polynomial shape does not match params".into()));
            }
            if p.a.iter().chain(&p.b).chain(&p.c).chain(std::iter::once(&p.d)).any(|&v| v >= params.q) {
                return Err(Error::Malformed("coefficient not reduced mod q".into()));
            }
        }
        Ok(BilinearSequence { params, field, polys })
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn field(&self) -> FieldCtx {
        self.field
    }

    pub fn polys(&self) -> &[BilinearPoly] {
        &self.polys
    }

    pub fn nx(&self) -> usize {
        self.params.nx
    }

    pub fn ny(&self) -> usize {
        self.params.ny
    }

    pub fn m(&self) -> usize {
        self.params.m
    }

    pub fn is_homogeneous(&self) -> bool {
        self.polys.iter().all(BilinearPoly::is_homogeneous)
    }

    pub fn evaluate(&self, u: &[u32], v: &[u32]) -> Result<Vec<u32>> {
        if u.len() != self.nx() || v.len() != self.ny() {
            return Err(Error::Dimension(format!(
                "point has ({}, {}) coordinates, expected ({}, {})",
                u.len(),
                v.len(),
                self.nx(),
                self.ny()
            )));
        }
        if u.iter().chain(v).any(|&c| c >= self.params.q) {
            return Err(Error::Domain("point coordinate not reduced mod q".into()));
        }
        Ok(self.polys.iter().map(|p| p.evaluate(&self.field, u, v)).collect())
    }

    /// True when `(u, v)` is a common zero.
    pub fn is_zero_at(&self, u: &[u32], v: &[u32]) -> bool {
        self.evaluate(u, v).map(|e| e.iter().all(|&x| x == 0)).unwrap_or(false)
    }

    /// Substitutes `x_1..x_ax = u` and `y_1..y_ay = v`. Requires
    /// `ax < nx` and `ay < ny`.
    pub fn partial_evaluate(&self, u: &[u32], v: &[u32]) -> Result<Self> {
        if u.len() >= self.nx() || v.len() >= self.ny() {
            return Err(Error::InvalidParams(format!(
                "prefix lengths ({}, {}) must be below ({}, {})",
                u.len(),
                v.len(),
                self.nx(),
                self.ny()
            )));
        }
        let xs: Vec<Option<u32>> = (0..self.nx()).map(|i| u.get(i).copied()).collect();
        let ys: Vec<Option<u32>> = (0..self.ny()).map(|j| v.get(j).copied()).collect();
        self.substitute(&xs, &ys)
    }

    /// Substitutes an arbitrary subset of variables. The remaining variables
    /// keep their relative order. Either block may become empty.
    pub fn substitute(&self, xs: &[Option<u32>], ys: &[Option<u32>]) -> Result<Self> {
        if xs.len() != self.nx() || ys.len() != self.ny() {
            return Err(Error::Dimension("substitution length mismatch".into()));
        }
        let f = self.field;
        let keep_x: Vec<usize> = (0..self.nx()).filter(|&i| xs[i].is_none()).collect();
        let keep_y: Vec<usize> = (0..self.ny()).filter(|&j| ys[j].is_none()).collect();
        let (nx2, ny2) = (keep_x.len(), keep_y.len());
        let params = Params::reduced(nx2, ny2, self.m(), self.params.q)?;
        let polys = self
            .polys
            .iter()
            .map(|p| {
                let mut out = BilinearPoly::zero(nx2, ny2);
                let mut d = p.d;
                // x_i y_j terms
                for i in 0..self.nx() {
                    for j in 0..self.ny() {
                        let a = p.a_at(i, j);
                        if a == 0 {
                            continue;
                        }
                        match (xs[i], ys[j]) {
                            (None, None) => {
                                let (ii, jj) = (pos(&keep_x, i), pos(&keep_y, j));
                                out.a[ii * ny2 + jj] = a;
                            }
                            (None, Some(vj)) => {
                                let ii = pos(&keep_x, i);
                                out.b[ii] = f.mul_add(out.b[ii], a, vj);
                            }
                            (Some(ui), None) => {
                                let jj = pos(&keep_y, j);
                                out.c[jj] = f.mul_add(out.c[jj], a, ui);
                            }
                            (Some(ui), Some(vj)) => d = f.mul_add(d, f.mul(a, ui), vj),
                        }
                    }
                }
                for i in 0..self.nx() {
                    match xs[i] {
                        None => {
                            let ii = pos(&keep_x, i);
                            out.b[ii] = f.add(out.b[ii], p.b[i]);
                        }
                        Some(ui) => d = f.mul_add(d, p.b[i], ui),
                    }
                }
                for j in 0..self.ny() {
                    match ys[j] {
                        None => {
                            let jj = pos(&keep_y, j);
                            out.c[jj] = f.add(out.c[jj], p.c[j]);
                        }
                        Some(vj) => d = f.mul_add(d, p.c[j], vj),
                    }
                }
                out.d = d;
                out
            })
            .collect();
        BilinearSequence::new(params, polys)
    }

    /// Homogenizes with new variables x0 and y0 placed at index 0.
    pub fn homogenize(&self) -> Self {
        let (nx, ny) = (self.nx(), self.ny());
        let params = Params { nx: nx + 1, ny: ny + 1, ..self.params };
        let polys = self
            .polys
            .iter()
            .map(|p| {
                let mut h = BilinearPoly::zero(nx + 1, ny + 1);
                h.a[0] = p.d;
                for j in 0..ny {
                    h.a[j + 1] = p.c[j];
                }
                for i in 0..nx {
                    h.a[(i + 1) * (ny + 1)] = p.b[i];
                    for j in 0..ny {
                        h.a[(i + 1) * (ny + 1) + j + 1] = p.a_at(i, j);
                    }
                }
                h
            })
            .collect();
        BilinearSequence { params, field: self.field, polys }
    }

    /// Sets x0 = y0 = 1 and drops those variables.
    pub fn dehomogenize(&self) -> Result<Self> {
        if self.nx() < 1 || self.ny() < 1 {
            return Err(Error::Dimension("need at least one variable in each block".into()));
        }
        let mut xs = vec![None; self.nx()];
        let mut ys = vec![None; self.ny()];
        xs[0] = Some(1);
        ys[0] = Some(1);
        self.substitute(&xs, &ys)
    }

    /// Entry `(i, j)` is `∂f_i/∂x_j`.
    pub fn jacobian_x(&self) -> Vec<Vec<YLinear>> {
        self.polys
            .iter()
            .map(|p| {
                (0..p.nx)
                    .map(|j| YLinear { coef: p.a[j * p.ny..(j + 1) * p.ny].to_vec(), c: p.b[j] })
                    .collect()
            })
            .collect()
    }

    /// The sequence with linear and constant parts dropped.
    pub fn quadratic_part(&self) -> Self {
        let polys = self
            .polys
            .iter()
            .map(|p| BilinearPoly { b: vec![0; p.nx], c: vec![0; p.ny], d: 0, ..p.clone() })
            .collect();
        BilinearSequence { params: self.params, field: self.field, polys }
    }

    /// Adjusts constant terms so that `(u, v)` becomes a common zero.
    pub fn plant_solution(&self, u: &[u32], v: &[u32]) -> Result<Self> {
        let vals = self.evaluate(u, v)?;
        let mut out = self.clone();
        for (p, val) in out.polys.iter_mut().zip(vals) {
            p.d = self.field.sub(p.d, val);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> InstanceJson {
        InstanceJson {
            q: self.params.q as u64,
            nx: self.nx(),
            ny: self.ny(),
            m: self.m(),
            polys: self
                .polys
                .iter()
                .map(|p| PolyJson {
                    a: (0..p.nx).map(|i| p.a[i * p.ny..(i + 1) * p.ny].iter().map(|&v| v as i64).collect()).collect(),
                    b: p.b.iter().map(|&v| v as i64).collect(),
                    c: p.c.iter().map(|&v| v as i64).collect(),
                    d: p.d as i64,
                })
                .collect(),
        }
    }

    pub fn from_json(j: &InstanceJson) -> Result<Self> {
        if j.q > u32::MAX as u64 {
            return Err(Error::Domain(format!("modulus {} too large", j.q)));
        }
        let params = Params::new(j.nx, j.ny, j.m, j.q as u32)?;
        if j.polys.len() != j.m {
            return Err(Error::Dimension(format!("expected {} polys, found {}", j.m, j.polys.len())));
        }
        let conv = |v: i64| -> Result<u32> {
            if v < 0 || v as u64 >= j.q {
                Err(Error::Malformed(format!("coefficient {v} not reduced mod {}", j.q)))
            } else {
                Ok(v as u32)
            }
        };
        let mut polys = Vec::with_capacity(j.m);
        for p in &j.polys {
            if p.a.len() != j.nx || p.a.iter().any(|r| r.len() != j.ny) || p.b.len() != j.nx || p.c.len() != j.ny {
                return Err(Error::Dimension("polynomial shape does not match nx, ny".into()));
            }
            polys.push(BilinearPoly {
                nx: j.nx,
                ny: j.ny,
                a: p.a.iter().flatten().map(|&v| conv(v)).collect::<Result<_>>()?,
                b: p.b.iter().map(|&v| conv(v)).collect::<Result<_>>()?,
                c: p.c.iter().map(|&v| conv(v)).collect::<Result<_>>()?,
                d: conv(p.d)?,
            });
        }
        BilinearSequence::new(params, polys)
    }
}

fn pos(keep: &[usize], idx: usize) -> usize {
    keep.binary_search(&idx).expect("index is kept")
}

/// Samples a sequence with i.i.d. uniform coefficients.
pub fn random_sequence<R: Rng + ?Sized>(p: Params, homogeneous: bool, rng: &mut R) -> BilinearSequence {
    let f = p.field();
    let polys = (0..p.m)
        .map(|_| {
            let mut poly = BilinearPoly::zero(p.nx, p.ny);
            for v in poly.a.iter_mut() {
                *v = f.rand_elem(rng);
            }
            if !homogeneous {
                for v in poly.b.iter_mut().chain(poly.c.iter_mut()) {
                    *v = f.rand_elem(rng);
                }
                poly.d = f.rand_elem(rng);
            }
            poly
        })
        .collect();
    BilinearSequence { params: p, field: f, polys }
}

/// Samples an affine sequence together with a planted common zero.
pub fn random_planted<R: Rng + ?Sized>(p: Params, rng: &mut R) -> (BilinearSequence, Vec<u32>, Vec<u32>) {
    let f = p.field();
    let b = random_sequence(p, false, rng);
    let u: Vec<u32> = (0..p.nx).map(|_| f.rand_elem(rng)).collect();
    let v: Vec<u32> = (0..p.ny).map(|_| f.rand_elem(rng)).collect();
    let b = b.plant_solution(&u, &v).expect("dimensions match");
    (b, u, v)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    #[serde(rename = "A")]
    pub a: Vec<Vec<i64>>,
    pub b: Vec<i64>,
    pub c: Vec<i64>,
    pub d: i64,
}

/// On-disk instance format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub q: u64,
    pub nx: usize,
    pub ny: usize,
    pub m: usize,
    pub polys: Vec<PolyJson>,
}

/// Polynomial in the y-variables, as a sparse monomial map.
pub type YPoly = BTreeMap<YMonomial, u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YPolyVector {
    pub entries: Vec<YPoly>,
}

impl YPolyVector {
    pub fn zero(m: usize) -> Self {
        YPolyVector { entries: vec![YPoly::new(); m] }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.values().all(|&c| c == 0))
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.entries.iter().flat_map(|e| e.iter().filter(|(_, &c)| c != 0).map(|(m, _)| m.degree)).max()
    }
}

/// True iff `Σ G_i f_i` expands to the zero polynomial.
pub fn verify_syzygy(b: &BilinearSequence, g: &YPolyVector) -> Result<bool> {
    if g.entries.len() != b.m() {
        return Err(Error::Dimension(format!("syzygy has {} entries, sequence has {}", g.entries.len(), b.m())));
    }
    let f = b.field();
    let mut acc: std::collections::HashMap<ColumnMonomial, u32> = std::collections::HashMap::new();
    for (gi, p) in g.entries.iter().zip(b.polys()) {
        let terms = p.terms();
        for (mono, &c) in gi {
            if c == 0 {
                continue;
            }
            if mono.nvars() != b.ny() {
                return Err(Error::Dimension("syzygy monomial has wrong variable count".into()));
            }
            for (t, tc) in &terms {
                let e = acc.entry(t.mul_y(mono)).or_insert(0);
                *e = f.mul_add(*e, c, *tc);
            }
        }
    }
    Ok(acc.values().all(|&v| v == 0))
}

/// `Gᵀ·jac_x(B)` as a vector of `n_x` polynomials in y.
pub fn syzygy_times_jacobian(b: &BilinearSequence, g: &YPolyVector) -> Vec<YPoly> {
    let f = b.field();
    let jac = b.jacobian_x();
    let mut out = vec![YPoly::new(); b.nx()];
    for (gi, row) in g.entries.iter().zip(&jac) {
        for (mono, &c) in gi {
            for (j, lin) in row.iter().enumerate() {
                for (k, &a) in lin.coef.iter().enumerate() {
                    if a != 0 {
                        let e = out[j].entry(mono.mul_var(k)).or_insert(0);
                        *e = f.mul_add(*e, c, a);
                    }
                }
                if lin.c != 0 {
                    let e = out[j].entry(mono.clone()).or_insert(0);
                    *e = f.mul_add(*e, c, lin.c);
                }
            }
        }
    }
    for p in out.iter_mut() {
        p.retain(|_, c| *c != 0);
    }
    out
}
