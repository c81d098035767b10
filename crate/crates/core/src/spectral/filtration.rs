//! Nilpotency of the filtration ideal on an associated graded algebra.
//!
//! Basis elements carry a column `i >= 0` (filtration index `-i`). Products
//! must add columns, so with columns bounded by `n` every product of `n + 1`
//! elements of positive column vanishes. The check verifies column
//! additivity and computes the powers of the positive-column ideal directly.

use std::collections::HashMap;

use serde::Serialize;

use crate::field::{Fp, Prime};
use crate::linalg::{SparseEchelon, SparseVec};

/// Structure constants on a basis: `products[(i, j)]` lists `(k, c)` with
/// `e_i e_j = sum c e_k`; missing pairs multiply to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductTable {
    pub prime: Prime,
    pub columns: Vec<u32>,
    pub labels: Vec<String>,
    pub products: HashMap<(usize, usize), Vec<(usize, u64)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiltrationReport {
    pub dimension: u32,
    /// First product found whose terms do not sit in the sum of the columns.
    pub additivity_violation: Option<(usize, usize, usize)>,
    /// Some basis element sits beyond column `n`.
    pub support_violation: Option<usize>,
    /// Largest `k` with a nonzero product of `k` positive-column elements.
    pub nilpotency_order: usize,
    /// Basis indices whose product in this order is nonzero.
    pub witness: Vec<usize>,
    pub holds: bool,
}

pub fn filtration_nilpotency_check(table: &ProductTable, n: u32) -> FiltrationReport {
    let field = Fp::new(table.prime);
    let mut additivity_violation = None;
    let mut keys: Vec<&(usize, usize)> = table.products.keys().collect();
    keys.sort();
    'outer: for &&(i, j) in &keys {
        for &(k, c) in &table.products[&(i, j)] {
            if c % field.prime() != 0 && table.columns[k] != table.columns[i] + table.columns[j] {
                additivity_violation = Some((i, j, k));
                break 'outer;
            }
        }
    }
    let support_violation = table.columns.iter().position(|&c| c > n);

    let ideal: Vec<usize> = (0..table.columns.len()).filter(|&i| table.columns[i] >= 1).collect();
    // words whose products span the k-th power
    let mut level: Vec<(Vec<usize>, SparseVec)> = ideal.iter().map(|&i| (vec![i], vec![(i, 1)])).collect();
    let mut order = 0;
    let mut witness = Vec::new();
    let bound = n as usize + 1;
    while !level.is_empty() {
        order += 1;
        witness = level[0].0.clone();
        if order > bound {
            break;
        }
        let mut span = SparseEchelon::new(field);
        let mut next = Vec::new();
        for (word, v) in &level {
            for &j in &ideal {
                let prod = right_multiply(table, field, v, j);
                if !prod.is_empty() && span.insert(&prod) {
                    let mut w = word.clone();
                    w.push(j);
                    next.push((w, prod));
                }
            }
        }
        level = next;
    }
    FiltrationReport {
        dimension: n,
        additivity_violation,
        support_violation,
        nilpotency_order: order,
        witness,
        holds: additivity_violation.is_none() && support_violation.is_none() && order <= n as usize,
    }
}

fn right_multiply(table: &ProductTable, field: Fp, v: &SparseVec, j: usize) -> SparseVec {
    let mut acc: HashMap<usize, u64> = HashMap::new();
    for &(i, c) in v {
        if let Some(terms) = table.products.get(&(i, j)) {
            for &(k, x) in terms {
                let e = acc.entry(k).or_insert(0);
                *e = field.add(*e, field.mul(c, x));
            }
        }
    }
    let mut out: SparseVec = acc.into_iter().filter(|&(_, x)| x != 0).collect();
    out.sort_unstable();
    out
}
