//! Graded center and effective center of a finite presentation.

use serde::Serialize;

use super::finite::{Elem, FinitePresentation};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};

/// Degreewise graded center `{z : z g = (-1)^{|z||g|} g z for every generator g}`.
#[derive(Debug, Clone)]
pub struct GradedCenter {
    /// Basis of `Z_d` for `d = 0..=certified_through`.
    pub basis: Vec<Vec<Elem>>,
    /// Algebra generators of the center (center modulo products of lower
    /// central elements), through `certified_through`.
    pub generators: Vec<Elem>,
    /// Largest degree where the sign condition was checked against every
    /// generator inside the cutoff.
    pub certified_through: u32,
}

impl GradedCenter {
    pub fn dims(&self) -> Vec<usize> {
        self.basis.iter().map(Vec::len).collect()
    }
}

/// Whether `z` graded-commutes with every generator. `None` when a product
/// leaves the cutoff.
pub fn is_graded_central(f: &FinitePresentation, z: &Elem) -> Option<bool> {
    for i in 0..f.generators().len() {
        let g = f.generator_elem(i)?;
        if !f.commutator(z, &g)?.is_zero() {
            return Some(false);
        }
    }
    Some(true)
}

pub fn graded_center(f: &FinitePresentation) -> GradedCenter {
    let field = f.field();
    let top = f.cutoff().saturating_sub(f.max_generator_degree());
    let mut basis: Vec<Vec<Elem>> = Vec::new();
    for d in 0..=top {
        let n = f.dim(d).unwrap_or(0);
        let elems = f.basis_elems(d);
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for (i, g) in f.generators().iter().enumerate() {
            let Some(gen) = f.generator_elem(i) else { continue };
            let out = f.dim(d + g.degree).unwrap_or(0);
            let images: Vec<Elem> = elems
                .iter()
                .map(|z| f.commutator(z, &gen).expect("degree within cutoff"))
                .collect();
            for r in 0..out {
                rows.push(images.iter().map(|e| e.coords[r]).collect());
            }
        }
        let kernel = if rows.is_empty() {
            (0..n)
                .map(|i| {
                    let mut v = vec![0; n];
                    v[i] = 1;
                    v
                })
                .collect()
        } else {
            Matrix::from_rows(field, n, rows).kernel()
        };
        basis.push(kernel.into_iter().map(|coords| Elem { degree: d, coords }).collect());
    }

    let mut generators = Vec::new();
    for d in 1..=top {
        let n = f.dim(d).unwrap_or(0);
        let mut decomposable = Subspace::new(field, n);
        for a in 1..d {
            for x in &basis[a as usize] {
                for y in &basis[(d - a) as usize] {
                    let xy = f.multiply(x, y).expect("degree within cutoff");
                    decomposable.insert(xy.coords);
                }
            }
        }
        for z in &basis[d as usize] {
            if decomposable.insert(z.coords.clone()) {
                generators.push(z.clone());
            }
        }
    }
    GradedCenter {
        basis,
        generators,
        certified_through: top,
    }
}

/// A central element used by the spectral-sequence argument: a generator
/// raised to a power.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CentralPower {
    pub generator: String,
    pub power: u32,
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EffectiveCenter {
    /// Chosen elements; monomials in them are independent through the cutoff.
    pub elements: Vec<CentralPower>,
    /// Candidates that could not be checked inside the cutoff.
    pub unchecked: Vec<CentralPower>,
}

impl EffectiveCenter {
    pub fn polynomial_rank(&self) -> usize {
        self.elements.len()
    }
}

/// Even-degree generators and squares of odd-degree generators that are
/// graded-central and whose monomials stay linearly independent through the
/// cutoff. The square of an odd element is the `p`-th power when `p = 2`;
/// at odd `p` it is the only nonzero power available to the Leibniz argument.
pub fn effective_center(f: &FinitePresentation) -> EffectiveCenter {
    let mut elements: Vec<(CentralPower, Elem)> = Vec::new();
    let mut unchecked = Vec::new();
    for (i, g) in f.generators().iter().enumerate() {
        let power = if g.degree % 2 == 0 { 1 } else { 2 };
        let cand = CentralPower {
            generator: g.name.clone(),
            power,
            degree: g.degree * power,
        };
        let Some(x) = f.generator_elem(i).and_then(|e| f.power(&e, power)) else {
            unchecked.push(cand);
            continue;
        };
        if x.is_zero() {
            continue;
        }
        match is_graded_central(f, &x) {
            None => unchecked.push(cand),
            Some(false) => {}
            Some(true) => {
                let mut trial: Vec<Elem> = elements.iter().map(|(_, e)| e.clone()).collect();
                trial.push(x.clone());
                if monomials_independent(f, &trial) {
                    elements.push((cand, x));
                }
            }
        }
    }
    EffectiveCenter {
        elements: elements.into_iter().map(|(c, _)| c).collect(),
        unchecked,
    }
}

/// Whether the monomials in `xs` are linearly independent in every degree
/// through the cutoff, so the `xs` generate a polynomial algebra there.
pub fn monomials_independent(f: &FinitePresentation, xs: &[Elem]) -> bool {
    let field = f.field();
    let cutoff = f.cutoff();
    // products[d] = images of all monomials of degree d in the xs
    let mut products: Vec<Vec<Elem>> = vec![Vec::new(); cutoff as usize + 1];
    products[0].push(f.unit_elem());
    // Build monomials with nondecreasing index to avoid repeats.
    let mut frontier: Vec<(usize, Elem)> = vec![(0, f.unit_elem())];
    while let Some((start, m)) = frontier.pop() {
        for (i, x) in xs.iter().enumerate().skip(start) {
            let d = m.degree + x.degree;
            if d > cutoff {
                continue;
            }
            let next = f.multiply(&m, x).expect("degree within cutoff");
            products[d as usize].push(next.clone());
            frontier.push((i, next));
        }
    }
    products.iter().enumerate().all(|(d, ps)| {
        let n = f.dim(d as u32).unwrap_or(0);
        let span = Subspace::spanned_by(field, n, ps.iter().map(|e| e.coords.clone()));
        span.dim() == ps.len()
    })
}

/// Checks that an expression names a graded-central element, failing when
/// the cutoff is too small to decide.
pub fn certify_central(f: &FinitePresentation, src: &str) -> Result<bool> {
    let z = f.parse_elem(src)?;
    is_graded_central(f, &z).ok_or_else(|| {
        Error::OutOfRange(format!(
            "cutoff {} is too small to certify '{src}' as central (need {})",
            f.cutoff(),
            z.degree + f.max_generator_degree()
        ))
    })
}
