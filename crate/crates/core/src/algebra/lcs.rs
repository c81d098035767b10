//! Lower central series `C_0 = A+`, `C_{i+1} = [A+, C_i]` with graded
//! commutators, computed degreewise through the cutoff.

use serde::Serialize;

use super::finite::{Elem, FinitePresentation, MultiplicationRule};
use crate::linalg::Subspace;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "stage")]
pub enum Nilpotency {
    /// `C_s = 0` in every degree.
    Nilpotent(usize),
    /// Every computed stage is nonzero somewhere below the cutoff.
    NotNilpotentBelowCutoff,
    /// Some stage vanishes below the cutoff but the vanishing above it is not certified.
    Unknown,
}

impl Nilpotency {
    pub fn truth(&self) -> crate::logic::Truth {
        match self {
            Nilpotency::Nilpotent(_) => crate::logic::Truth::True,
            _ => crate::logic::Truth::Unknown,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LowerCentralSeries {
    /// `dims[i][d] = dim (C_i)_d` for `d <= max_degree`.
    pub dims: Vec<Vec<usize>>,
    pub status: Nilpotency,
}

pub fn lower_central_series(f: &FinitePresentation, max_stage: usize, max_degree: u32) -> LowerCentralSeries {
    let field = f.field();
    let top = max_degree.min(f.cutoff());
    let whole: Vec<Vec<Elem>> = (0..=top)
        .map(|d| if d == 0 { Vec::new() } else { f.basis_elems(d) })
        .collect();
    let mut stage = whole.clone();
    let mut dims = vec![stage.iter().map(Vec::len).collect::<Vec<_>>()];
    let mut vanished = None;
    for s in 1..=max_stage {
        let mut next: Vec<Vec<Elem>> = Vec::with_capacity(stage.len());
        for d in 0..=top {
            let n = f.dim(d).unwrap_or(0);
            let mut span = Subspace::new(field, n);
            for a in 1..d {
                for x in &whole[a as usize] {
                    for c in &stage[(d - a) as usize] {
                        let br = f.commutator(x, c).expect("degree within cutoff");
                        span.insert(br.coords);
                    }
                }
            }
            next.push(
                span.basis()
                    .iter()
                    .map(|v| Elem {
                        degree: d,
                        coords: v.clone(),
                    })
                    .collect(),
            );
        }
        stage = next;
        dims.push(stage.iter().map(Vec::len).collect());
        if stage.iter().all(Vec::is_empty) {
            vanished = Some(s);
            break;
        }
    }
    let status = match vanished {
        None => Nilpotency::NotNilpotentBelowCutoff,
        Some(s) if certified(f, s, top) => Nilpotency::Nilpotent(s),
        Some(_) => Nilpotency::Unknown,
    };
    LowerCentralSeries { dims, status }
}

/// Vanishing of `C_s` through `top` extends to all degrees when the algebra
/// is graded commutative, when it is commutative without signs (brackets are
/// then even-degree multiples of products, hence central), or when the
/// algebra itself vanishes above `top`.
fn certified(f: &FinitePresentation, s: usize, top: u32) -> bool {
    let maxgen = f.max_generator_degree();
    match f.rule() {
        MultiplicationRule::Graded => return true,
        MultiplicationRule::Commutative if s >= 2 => return true,
        MultiplicationRule::Commutative if 2 * maxgen <= top => return true,
        _ => {}
    }
    // Generated in degrees <= maxgen: a gap of maxgen zero degrees kills everything above.
    maxgen >= 1
        && top >= 2 * maxgen
        && ((top + 1 - maxgen)..=top).all(|d| f.dim(d) == Some(0))
}
