//! Dense linear algebra over `F_p`: row reduction, ranks, kernels and
//! subspaces kept in reduced echelon form.

use crate::field::Fp;

/// Row-major dense matrix over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Fp,
    cols: usize,
    rows: Vec<Vec<u64>>,
}

impl Matrix {
    pub fn zero(field: Fp, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            cols,
            rows: vec![vec![0; cols]; rows],
        }
    }

    pub fn from_rows(field: Fp, cols: usize, rows: Vec<Vec<u64>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        Matrix { field, cols, rows }
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.rows[i]
    }

    pub fn set(&mut self, i: usize, j: usize, value: u64) {
        self.rows[i][j] = value % self.field.prime();
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.rows[i][j]
    }

    /// In-place reduced row echelon form; returns pivot columns in row order.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows.len() {
                break;
            }
            let Some(src) = (r..self.rows.len()).find(|&i| self.rows[i][c] != 0) else {
                continue;
            };
            self.rows.swap(r, src);
            let inv = f.inv(self.rows[r][c]);
            for x in self.rows[r].iter_mut() {
                *x = f.mul(*x, inv);
            }
            let pivot_row = self.rows[r].clone();
            for (i, row) in self.rows.iter_mut().enumerate() {
                if i != r && row[c] != 0 {
                    let factor = row[c];
                    for (x, &y) in row.iter_mut().zip(&pivot_row).skip(c) {
                        *x = f.sub(*x, f.mul(factor, y));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        self.rows.truncate(r);
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right null space `{x : M x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let f = self.field;
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0; self.cols];
                v[fc] = 1;
                for (row, &pc) in m.rows.iter().zip(&pivots) {
                    v[pc] = f.neg(row[fc]);
                }
                v
            })
            .collect()
    }
}

/// A subspace of `F_p^n` stored as a reduced echelon basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    field: Fp,
    ambient: usize,
    basis: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(field: Fp, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn spanned_by<I: IntoIterator<Item = Vec<u64>>>(field: Fp, ambient: usize, vectors: I) -> Self {
        let mut s = Subspace::new(field, ambient);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn whole(field: Fp, ambient: usize) -> Self {
        Subspace::spanned_by(
            field,
            ambient,
            (0..ambient).map(|i| {
                let mut v = vec![0; ambient];
                v[i] = 1;
                v
            }),
        )
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Remainder of `v` after eliminating every pivot column.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let f = self.field;
        let mut out = v.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            let c = out[pc];
            if c != 0 {
                for (x, &y) in out.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coordinates of a vector known to lie in the subspace.
    pub fn coordinates(&self, v: &[u64]) -> Vec<u64> {
        self.pivots.iter().map(|&pc| v[pc]).collect()
    }

    /// Adds `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: Vec<u64>) -> bool {
        debug_assert_eq!(v.len(), self.ambient);
        let f = self.field;
        let mut r = self.reduce(&v);
        let Some(pc) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(r[pc]);
        for x in r.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for row in self.basis.iter_mut() {
            let c = row[pc];
            if c != 0 {
                for (x, &y) in row.iter_mut().zip(&r) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        let at = self.pivots.partition_point(|&p| p < pc);
        self.pivots.insert(at, pc);
        self.basis.insert(at, r);
        true
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for v in other.basis() {
            s.insert(v.clone());
        }
        s
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }
}

/// Sparse vector: `(column, nonzero value)` pairs sorted by column.
pub type SparseVec = Vec<(usize, u64)>;

/// Echelon basis of sparse rows. Each row starts at its own pivot column with
/// coefficient 1; `reduce` eliminates every pivot column, giving normal forms
/// whose support lies on non-pivot columns.
#[derive(Debug, Clone)]
pub struct SparseEchelon {
    field: Fp,
    rows: std::collections::HashMap<usize, SparseVec>,
}

impl SparseEchelon {
    pub fn new(field: Fp) -> Self {
        SparseEchelon {
            field,
            rows: Default::default(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    pub fn reduce(&self, v: &[(usize, u64)]) -> SparseVec {
        let f = self.field;
        let mut acc: std::collections::BTreeMap<usize, u64> = std::collections::BTreeMap::new();
        for &(c, x) in v {
            let e = acc.entry(c).or_insert(0);
            *e = f.add(*e, x % f.prime());
        }
        acc.retain(|_, x| *x != 0);
        let mut cursor = 0;
        while let Some((&c, &val)) = acc.range(cursor..).next() {
            match self.rows.get(&c) {
                Some(row) => {
                    for &(rc, rx) in row {
                        let e = acc.entry(rc).or_insert(0);
                        *e = f.sub(*e, f.mul(val, rx));
                        if *e == 0 {
                            acc.remove(&rc);
                        }
                    }
                }
                None => cursor = c + 1,
            }
        }
        acc.into_iter().collect()
    }

    pub fn insert(&mut self, v: &[(usize, u64)]) -> bool {
        let f = self.field;
        let r = self.reduce(v);
        let Some(&(pc, lead)) = r.first() else {
            return false;
        };
        let inv = f.inv(lead);
        let row = r.into_iter().map(|(c, x)| (c, f.mul(x, inv))).collect();
        self.rows.insert(pc, row);
        true
    }
}

/// Expresses vectors in terms of a fixed independent family.
#[derive(Debug, Clone)]
pub struct Coordinates {
    field: Fp,
    len: usize,
    /// Reduced rows with pivot 1 and zeros in the other pivot columns,
    /// each paired with its combination of the input family.
    rows: Vec<(usize, Vec<u64>, Vec<u64>)>,
}

impl Coordinates {
    /// `None` if the family is linearly dependent.
    pub fn new(field: Fp, ambient: usize, family: &[Vec<u64>]) -> Option<Self> {
        let len = family.len();
        let mut rows: Vec<(usize, Vec<u64>, Vec<u64>)> = Vec::with_capacity(len);
        for (i, v) in family.iter().enumerate() {
            debug_assert_eq!(v.len(), ambient);
            let mut vec = v.clone();
            let mut combo = vec![0; len];
            combo[i] = 1;
            for (p, row, rc) in &rows {
                let c = vec[*p];
                if c != 0 {
                    axpy(field, &mut vec, row, field.neg(c));
                    axpy(field, &mut combo, rc, field.neg(c));
                }
            }
            let pivot = vec.iter().position(|&x| x != 0)?;
            let inv = field.inv(vec[pivot]);
            vec.iter_mut().for_each(|x| *x = field.mul(*x, inv));
            combo.iter_mut().for_each(|x| *x = field.mul(*x, inv));
            for (_, row, rc) in rows.iter_mut() {
                let c = row[pivot];
                if c != 0 {
                    axpy(field, row, &vec, field.neg(c));
                    axpy(field, rc, &combo, field.neg(c));
                }
            }
            rows.push((pivot, vec, combo));
        }
        Some(Coordinates { field, len, rows })
    }

    /// Coefficients `c` with `v = sum c_i family_i`, or `None` outside the span.
    pub fn solve(&self, v: &[u64]) -> Option<Vec<u64>> {
        let f = self.field;
        let mut residual = v.to_vec();
        let mut out = vec![0; self.len];
        for (p, row, combo) in &self.rows {
            let c = residual[*p];
            if c != 0 {
                axpy(f, &mut residual, row, f.neg(c));
                axpy(f, &mut out, combo, c);
            }
        }
        residual.iter().all(|&x| x == 0).then_some(out)
    }
}

/// `y += a x`.
pub fn axpy(field: Fp, y: &mut [u64], x: &[u64], a: u64) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = field.add(*yi, field.mul(a, xi));
    }
}
