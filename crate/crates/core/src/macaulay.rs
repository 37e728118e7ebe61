//! y-Macaulay matrices: coefficient matrices of all products `𝔪·f_k` with
//! `𝔪` a y-monomial.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::linalg::{CsrMatrix, Matrix};
use crate::polyring::{cmp_unchecked, BilinearSequence, ColumnMonomial, MonomialOrder, Params, XLinearPoly, YMonomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Storage {
    #[default]
    Dense,
    Sparse,
}

/// Which column set to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ColumnLayout {
    /// Homogeneous columns for homogeneous input, affine otherwise.
    #[default]
    Auto,
    Affine,
    Homogeneous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MacaulayOptions {
    pub order: MonomialOrder,
    pub layout: ColumnLayout,
    pub storage: Storage,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entries {
    Dense(Matrix),
    Sparse(CsrMatrix),
}

/// Row provenance: the row holds `multiplier · generator`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RowLabel {
    pub generator: usize,
    pub multiplier: YMonomial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YMacaulayMatrix {
    pub entries: Entries,
    pub columns: Vec<ColumnMonomial>,
    pub rows: Vec<RowLabel>,
    pub degree_bound: u32,
    pub q: u32,
}

impl YMacaulayMatrix {
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    pub fn dense(&self) -> Matrix {
        match &self.entries {
            Entries::Dense(m) => m.clone(),
            Entries::Sparse(s) => s.to_dense(),
        }
    }

    pub fn into_dense(self) -> Matrix {
        match self.entries {
            Entries::Dense(m) => m,
            Entries::Sparse(s) => s.to_dense(),
        }
    }

    pub fn sparse(&self) -> CsrMatrix {
        match &self.entries {
            Entries::Dense(m) => m.to_csr(),
            Entries::Sparse(s) => s.clone(),
        }
    }

    /// Nonzero entries of row `i` as polynomial terms.
    pub fn row_poly(&self, i: usize) -> XLinearPoly {
        let terms = match &self.entries {
            Entries::Dense(m) => m
                .row(i)
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(j, &v)| (self.columns[j].clone(), v))
                .collect(),
            Entries::Sparse(s) => (s.indptr[i]..s.indptr[i + 1])
                .map(|p| (self.columns[s.indices[p]].clone(), s.values[p]))
                .collect(),
        };
        XLinearPoly { terms }
    }

    /// SMS triplet dump: header `rows cols q`, 1-based `i j v` lines, `0 0 0`.
    pub fn to_sms(&self) -> String {
        let s = self.sparse();
        let mut out = String::new();
        writeln!(out, "{} {} {}", s.rows, s.cols, self.q).unwrap();
        for i in 0..s.rows {
            for p in s.indptr[i]..s.indptr[i + 1] {
                writeln!(out, "{} {} {}", i + 1, s.indices[p] + 1, s.values[p]).unwrap();
            }
        }
        out.push_str("0 0 0\n");
        out
    }
}

fn sort_desc(cols: &mut [ColumnMonomial], order: MonomialOrder) {
    cols.sort_by(|a, b| cmp_unchecked(b, a, order));
}

/// Column labels of `M_{y,≤d}`, strictly decreasing.
pub fn column_monomials(p: &Params, d: u32, homogeneous: bool, order: MonomialOrder) -> Result<Vec<ColumnMonomial>> {
    if d < 2 {
        return Err(Error::InvalidParams(format!("degree bound {d} below 2")));
    }
    let mut cols = Vec::new();
    let lo = if homogeneous { 1 } else { 0 };
    for k in lo..d {
        for mu in YMonomial::of_degree(p.ny, k) {
            for i in 0..p.nx {
                cols.push(ColumnMonomial::new(Some(i), mu.clone()));
            }
            if !homogeneous {
                cols.push(ColumnMonomial::new(None, mu));
            }
        }
    }
    sort_desc(&mut cols, order);
    Ok(cols)
}

/// x-linear monomials of total degree exactly `j`.
pub fn degree_columns(nx: usize, ny: usize, j: u32, order: MonomialOrder) -> Vec<ColumnMonomial> {
    if j == 0 {
        return Vec::new();
    }
    let mut cols: Vec<ColumnMonomial> = YMonomial::of_degree(ny, j - 1)
        .into_iter()
        .flat_map(|mu| (0..nx).map(move |i| ColumnMonomial::new(Some(i), mu.clone())))
        .collect();
    sort_desc(&mut cols, order);
    cols
}

pub fn build_y_macaulay(b: &BilinearSequence, d: u32) -> Result<YMacaulayMatrix> {
    build_y_macaulay_with(b, d, &MacaulayOptions::default())
}

pub fn build_y_macaulay_with(b: &BilinearSequence, d: u32, opts: &MacaulayOptions) -> Result<YMacaulayMatrix> {
    let homogeneous = match opts.layout {
        ColumnLayout::Auto => b.is_homogeneous(),
        ColumnLayout::Affine => false,
        ColumnLayout::Homogeneous => {
            if !b.is_homogeneous() {
                return Err(Error::InvalidParams("homogeneous layout needs a homogeneous sequence".into()));
            }
            true
        }
    };
    let columns = column_monomials(&b.params(), d, homogeneous, opts.order)?;
    let gens: Vec<XLinearPoly> = b.polys().iter().map(XLinearPoly::from).collect();
    let rows = multiplier_rows(b.ny(), &vec![2; gens.len()], d);
    assemble(&gens, rows, columns, d, &b.field(), opts.storage)
}

/// Degree-`j` part: products `𝔪·f_k` with `deg 𝔪 = j−2` over the
/// x-linear monomials of degree `j`.
pub fn degree_part(b: &BilinearSequence, j: u32) -> Result<YMacaulayMatrix> {
    degree_part_with(b, j, MonomialOrder::default())
}

pub fn degree_part_with(b: &BilinearSequence, j: u32, order: MonomialOrder) -> Result<YMacaulayMatrix> {
    if j < 2 {
        return Err(Error::InvalidParams(format!("degree {j} below 2")));
    }
    if !b.is_homogeneous() {
        return Err(Error::InvalidParams("degree part needs a homogeneous sequence".into()));
    }
    let columns = degree_columns(b.nx(), b.ny(), j, order);
    let gens: Vec<XLinearPoly> = b.polys().iter().map(XLinearPoly::from).collect();
    let mut rows = Vec::new();
    for g in (0..gens.len()).rev() {
        for mu in YMonomial::of_degree(b.ny(), j - 2) {
            rows.push(RowLabel { generator: g, multiplier: mu });
        }
    }
    assemble(&gens, rows, columns, j, &b.field(), Storage::Dense)
}

/// Row labels for generators of the given degrees: every multiplier with
/// `deg 𝔪 ≤ d − deg g`, highest multiplier degree first, then generators
/// in reverse order, then multipliers in decreasing order.
pub fn multiplier_rows(ny: usize, gen_degrees: &[u32], d: u32) -> Vec<RowLabel> {
    let top = gen_degrees.iter().map(|&g| d.saturating_sub(g)).max().unwrap_or(0);
    let mut rows = Vec::new();
    for k in (0..=top).rev() {
        let mus = YMonomial::of_degree(ny, k);
        for g in (0..gen_degrees.len()).rev() {
            if gen_degrees[g] + k > d {
                continue;
            }
            for mu in &mus {
                rows.push(RowLabel { generator: g, multiplier: mu.clone() });
            }
        }
    }
    rows
}

/// Fills a matrix with the coefficient vectors of `multiplier·generator`
/// over the given column labels.
pub fn assemble(
    gens: &[XLinearPoly],
    rows: Vec<RowLabel>,
    columns: Vec<ColumnMonomial>,
    d: u32,
    f: &FieldCtx,
    storage: Storage,
) -> Result<YMacaulayMatrix> {
    let index: HashMap<&ColumnMonomial, usize> = columns.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut triplets = Vec::new();
    for (r, label) in rows.iter().enumerate() {
        for (t, c) in &gens[label.generator].terms {
            if *c == 0 {
                continue;
            }
            let mono = t.mul_y(&label.multiplier);
            let Some(&j) = index.get(&mono) else {
                return Err(Error::Dimension(format!("monomial {mono} has no column")));
            };
            triplets.push((r, j, *c));
        }
    }
    let (nr, nc) = (rows.len(), columns.len());
    let entries = match storage {
        Storage::Sparse => Entries::Sparse(CsrMatrix::from_triplets(nr, nc, triplets, f)),
        Storage::Dense => {
            let mut m = Matrix::zeros(nr, nc);
            for (i, j, v) in triplets {
                let e = &mut m.data[i * nc + j];
                *e = f.add(*e, v);
            }
            Entries::Dense(m)
        }
    };
    Ok(YMacaulayMatrix { entries, columns, rows, degree_bound: d, q: f.q() })
}

/// Columns covering every monomial that occurs in the given rows.
pub fn columns_for(gens: &[XLinearPoly], rows: &[RowLabel], order: MonomialOrder) -> Vec<ColumnMonomial> {
    let mut seen: std::collections::HashSet<ColumnMonomial> = std::collections::HashSet::new();
    for label in rows {
        for (t, c) in &gens[label.generator].terms {
            if *c != 0 {
                seen.insert(t.mul_y(&label.multiplier));
            }
        }
    }
    let mut cols: Vec<ColumnMonomial> = seen.into_iter().collect();
    sort_desc(&mut cols, order);
    cols
}

pub fn binomial(n: i64, k: i64) -> u128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}
