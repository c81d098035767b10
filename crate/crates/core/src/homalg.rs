//! Depth, `Ext_A(F, A)`, the Gorenstein property and ellipticity for
//! Borel-form algebras.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::{lower_central_series, AlgebraPresentation, FactorKind, Nilpotency};
use crate::error::{Error, Result};
use crate::field::Prime;
use crate::linalg::Matrix;
use crate::logic::Truth;

/// `Ext^{s,t}_A(F, A)` as a map from bidegree to dimension. Internal degrees
/// keep their sign: truncated algebras have their class at negative `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtTable {
    pub entries: BTreeMap<(u32, i64), u64>,
}

impl ExtTable {
    pub fn unit() -> Self {
        ExtTable {
            entries: BTreeMap::from([((0, 0), 1)]),
        }
    }

    pub fn empty() -> Self {
        ExtTable {
            entries: BTreeMap::new(),
        }
    }

    pub fn single(s: u32, t: i64) -> Self {
        ExtTable {
            entries: BTreeMap::from([((s, t), 1)]),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, s: u32, t: i64) -> u64 {
        self.entries.get(&(s, t)).copied().unwrap_or(0)
    }

    /// Künneth product.
    pub fn convolve(&self, other: &ExtTable) -> ExtTable {
        let mut entries = BTreeMap::new();
        for (&(s1, t1), &a) in &self.entries {
            for (&(s2, t2), &b) in &other.entries {
                *entries.entry((s1 + s2, t1 + t2)).or_insert(0) += a * b;
            }
        }
        ExtTable { entries }
    }

    pub fn total_dimension(&self) -> u64 {
        self.entries.values().sum()
    }
}

impl fmt::Display for ExtTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("{}");
        }
        let parts: Vec<String> = self.entries.iter().map(|((s, t), d)| format!("({s},{t}) -> {d}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DepthResult {
    Finite(u32),
    Infinite,
}

impl fmt::Display for DepthResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DepthResult::Finite(n) => write!(f, "{n}"),
            DepthResult::Infinite => f.write_str("infinite"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GorensteinResult {
    pub is_gorenstein: bool,
    pub socle_bidegree: Option<(u32, i64)>,
}

/// Per-factor closed forms combined by the Künneth formula. An exterior
/// factor behaves as a height-two truncation.
pub fn ext_table(a: &AlgebraPresentation) -> ExtTable {
    if a.is_infinite_tensor() {
        return ExtTable::empty();
    }
    a.factors().iter().fold(ExtTable::unit(), |acc, f| {
        let k = i64::from(f.degree);
        let factor = match f.kind {
            FactorKind::Polynomial => ExtTable::single(1, k),
            FactorKind::Exterior => ExtTable::single(0, -k),
            FactorKind::Truncated { height } => ExtTable::single(0, -k * (i64::from(height) - 1)),
        };
        acc.convolve(&factor)
    })
}

/// Smallest `s` with a nonzero `Ext^{s,*}`.
pub fn depth(a: &AlgebraPresentation) -> DepthResult {
    let table = ext_table(a);
    match table.entries.keys().map(|&(s, _)| s).min() {
        Some(s) => DepthResult::Finite(s),
        None => DepthResult::Infinite,
    }
}

pub fn is_gorenstein(a: &AlgebraPresentation) -> GorensteinResult {
    let table = ext_table(a);
    let mut nonzero = table.entries.iter().filter(|(_, &d)| d > 0);
    match (nonzero.next(), nonzero.next()) {
        (Some((&bideg, &1)), None) => GorensteinResult {
            is_gorenstein: true,
            socle_bidegree: Some(bideg),
        },
        _ => GorensteinResult {
            is_gorenstein: false,
            socle_bidegree: None,
        },
    }
}

/// The four equivalent conditions for a cocommutative Hopf algebra of finite
/// depth, each computed by its own route.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EllipticityReport {
    /// Hypothesis of the equivalence; false for infinite tensor products.
    pub finite_depth: bool,
    /// Finitely generated and nilpotent (the definition), from the factor
    /// count and the lower central series of the oracle.
    pub elliptic_by_definition: bool,
    /// Nilpotent, from the lower central series.
    pub nilpotent: bool,
    /// Polynomial growth, from the partial-sum witness of the Poincaré series.
    pub polynomial_growth: bool,
    /// Gorenstein, from the Ext table.
    pub gorenstein: bool,
    /// Lower central series verdict before the finite-depth gate.
    pub lower_central_series: Truth,
    pub elliptic: bool,
}

impl EllipticityReport {
    pub fn conditions_agree(&self) -> bool {
        let v = [self.elliptic_by_definition, self.nilpotent, self.polynomial_growth, self.gorenstein];
        v.iter().all(|&x| x == v[0])
    }
}

/// Prime standing in for characteristic zero when running the commutator
/// computation: structure constants of Borel-form algebras are `0, ±1`.
const RATIONAL_PROXY_PRIME: u64 = 1_000_003;

pub fn is_elliptic(a: &AlgebraPresentation) -> Result<EllipticityReport> {
    if !a.is_hopf() {
        return Err(Error::NotHopf);
    }
    let finite_depth = !a.is_infinite_tensor();
    let lcs = literal_nilpotency(a)?;
    let nilpotent = finite_depth && lcs.is_true();
    let finitely_generated = finite_depth;

    let series = a.poincare_series();
    let polynomial_growth = finite_depth
        && match series.partial_sums_exponent_witness(64) {
            Ok(w) => w.holds(),
            Err(Error::FiniteDimensional) => true,
            Err(e) => return Err(e),
        };
    let gorenstein = finite_depth && is_gorenstein(a).is_gorenstein;
    let elliptic_by_definition = finitely_generated && nilpotent;
    Ok(EllipticityReport {
        finite_depth,
        elliptic_by_definition,
        nilpotent,
        polynomial_growth,
        gorenstein,
        lower_central_series: lcs,
        elliptic: elliptic_by_definition,
    })
}

fn literal_nilpotency(a: &AlgebraPresentation) -> Result<Truth> {
    let proxy = match a.prime() {
        Some(_) => a.clone(),
        None => AlgebraPresentation::build(
            crate::field::Characteristic::Prime(Prime::new(RATIONAL_PROXY_PRIME)?),
            a.factors().to_vec(),
            a.sign_rule(),
            false,
            a.is_infinite_tensor(),
        )?,
    };
    let maxdeg = a.factors().iter().map(|f| f.degree).max().unwrap_or(1);
    let cutoff = (2 * maxdeg + 2).max(8);
    let f = proxy.to_finite(cutoff)?;
    Ok(match lower_central_series(&f, 4, cutoff).status {
        Nilpotency::Nilpotent(_) => Truth::True,
        Nilpotency::NotNilpotentBelowCutoff => Truth::False,
        Nilpotency::Unknown => Truth::Unknown,
    })
}

/// `Ext^{s,t}_A(F, A)` for a single monogenic factor computed from its
/// minimal resolution, for `s <= max_s` and the internal degrees in
/// `t_window` (inclusive), with `A` truncated at `cutoff`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionExt {
    pub table: ExtTable,
    pub max_s: u32,
    pub t_window: (i64, i64),
}

impl ResolutionExt {
    /// Whether `closed` agrees with this computation inside its window.
    pub fn agrees_with(&self, closed: &ExtTable) -> bool {
        let restricted: BTreeMap<(u32, i64), u64> = closed
            .entries
            .iter()
            .filter(|(&(s, t), _)| s <= self.max_s && t >= self.t_window.0 && t <= self.t_window.1)
            .map(|(&k, &v)| (k, v))
            .collect();
        restricted == self.table.entries
    }
}

/// Minimal resolution of `F` over `F[x]` or `F[x]/(x^n)`: free modules of
/// rank one with generators `e_s`, differentials multiplication by `x`
/// (and by `x^{n-1}` in the periodic truncated case). A hom `e_s -> A_j` has
/// internal degree `t = |e_s| - j`.
pub fn resolution_ext(a: &AlgebraPresentation, max_s: u32, cutoff: u32) -> Result<ResolutionExt> {
    let [factor] = a.factors() else {
        return Err(Error::Unsupported("resolution cross-check needs a single factor".into()));
    };
    let prime = a
        .prime()
        .ok_or_else(|| Error::Unsupported("resolution cross-check runs over a prime field".into()))?;
    let f = a.to_finite(cutoff)?;
    let k = factor.degree;
    let height = factor.height();
    // multiplier exponent of d(e_s): x for odd s, x^{h-1} for even s >= 2
    let multiplier = |s: u32| -> u32 {
        match height {
            None => 1,
            Some(h) if s % 2 == 0 => h - 1,
            Some(_) => 1,
        }
    };
    // F[x] has a resolution of length one; F[x]/(x^n) a periodic one.
    let length = if height.is_none() { 1 } else { max_s + 1 };
    let mut gen_degree = vec![0u32];
    for s in 1..=length {
        gen_degree.push(gen_degree[s as usize - 1] + k * multiplier(s));
    }
    let max_shift = k * height.map_or(1, |h| h - 1);
    let top_j = cutoff.checked_sub(max_shift).ok_or_else(|| Error::OutOfRange("cutoff below the multiplier degree".into()))?;
    let field = crate::field::Fp::new(prime);
    let x = f.generator_elem(0).expect("generator inside cutoff");
    // rank of multiplication by x^m from A_j
    let rank_from = |j: i64, m: u32| -> usize {
        if j < 0 || j as u32 > cutoff || j as u32 + m * k > cutoff {
            return 0;
        }
        let xm = f.power(&x, m).expect("power inside cutoff");
        let basis = f.basis_elems(j as u32);
        if basis.is_empty() {
            return 0;
        }
        let out = f.dim(j as u32 + m * k).unwrap_or(0);
        let images: Vec<Vec<u64>> = basis.iter().map(|b| f.multiply(b, &xm).expect("inside cutoff").coords).collect();
        let rows: Vec<Vec<u64>> = (0..out).map(|r| images.iter().map(|v| v[r]).collect()).collect();
        Matrix::from_rows(field, basis.len(), rows).rank()
    };
    let dim_at = |j: i64| -> usize {
        if j < 0 || j as u32 > cutoff {
            0
        } else {
            f.dim(j as u32).unwrap_or(0)
        }
    };
    let t_lo = -(top_j as i64);
    let t_hi = gen_degree[max_s.min(length) as usize] as i64;
    let mut entries = BTreeMap::new();
    for s in 0..=max_s.min(length) {
        for t in t_lo..=t_hi {
            let j = gen_degree[s as usize] as i64 - t;
            if j > top_j as i64 {
                continue;
            }
            // delta_s: Hom(P_s) -> Hom(P_{s+1}) is multiplication by the multiplier of d(e_{s+1})
            let kernel = if s < length {
                dim_at(j) - rank_from(j, multiplier(s + 1))
            } else {
                dim_at(j)
            };
            // image of delta_{s-1}: from Hom(P_{s-1}) at the same t
            let image = if s == 0 {
                0
            } else {
                let jp = gen_degree[s as usize - 1] as i64 - t;
                rank_from(jp, multiplier(s))
            };
            let d = (kernel - image) as u64;
            if d > 0 {
                entries.insert((s, t), d);
            }
        }
    }
    Ok(ResolutionExt {
        table: ExtTable { entries },
        max_s,
        t_window: (t_lo, t_hi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::MonogenicFactor;
    use crate::field::Characteristic;

    fn alg(p: u64, fs: Vec<MonogenicFactor>) -> AlgebraPresentation {
        AlgebraPresentation::over(Prime::new(p).unwrap(), fs).unwrap()
    }

    #[test]
    fn closed_forms() {
        assert_eq!(ext_table(&alg(2, vec![MonogenicFactor::polynomial("x", 3)])), ExtTable::single(1, 3));
        assert_eq!(ext_table(&alg(3, vec![MonogenicFactor::truncated("x", 2, 5)])), ExtTable::single(0, -8));
        let t = alg(3, vec![MonogenicFactor::polynomial("x", 2), MonogenicFactor::truncated("y", 2, 4)]);
        assert_eq!(ext_table(&t), ExtTable::single(1, -4));
    }

    #[test]
    fn depth_values() {
        assert_eq!(depth(&AlgebraPresentation::unit(Characteristic::Zero)), DepthResult::Finite(0));
        let a = alg(
            3,
            vec![
                MonogenicFactor::polynomial("u", 2),
                MonogenicFactor::polynomial("v", 4),
                MonogenicFactor::exterior("w", 3),
            ],
        );
        assert_eq!(depth(&a), DepthResult::Finite(2));
        let inf = a.with_infinite_tensor(true).unwrap();
        assert_eq!(depth(&inf), DepthResult::Infinite);
        assert!(!is_gorenstein(&inf).is_gorenstein);
    }

    #[test]
    fn exterior_socle() {
        let g = is_gorenstein(&alg(5, vec![MonogenicFactor::exterior("a", 3)]));
        assert_eq!(g.socle_bidegree, Some((0, -3)));
    }

    #[test]
    fn ellipticity_requires_hopf() {
        let a = alg(2, vec![MonogenicFactor::polynomial("x", 2)]);
        assert_eq!(is_elliptic(&a), Err(Error::NotHopf));
    }

    #[test]
    fn resolutions_match_closed_forms() {
        for p in [2u64, 3] {
            for k in 1..=4u32 {
                for n in 2..=4u32 {
                    let factor = if p == 2 || k % 2 == 0 {
                        MonogenicFactor::truncated("x", k, n)
                    } else if n == 2 {
                        MonogenicFactor::exterior("x", k)
                    } else {
                        continue;
                    };
                    let a = alg(p, vec![factor]);
                    let r = resolution_ext(&a, 4, 6 * k * n).unwrap();
                    assert_eq!(r.table.total_dimension(), 1);
                    assert!(r.agrees_with(&ext_table(&a)), "p={p} k={k} n={n}: {}", r.table);
                }
                if p == 2 || k % 2 == 0 {
                    let a = alg(p, vec![MonogenicFactor::polynomial("x", k)]);
                    let r = resolution_ext(&a, 4, 8 * k).unwrap();
                    assert!(r.agrees_with(&ext_table(&a)), "p={p} k={k} polynomial: {}", r.table);
                }
            }
        }
    }
}
