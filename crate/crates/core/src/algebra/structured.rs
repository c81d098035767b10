//! Borel-form presentations: tensor products of monogenic factors.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::finite::{FiniteGenerator, FinitePresentation, MultiplicationRule};
use crate::error::{Error, Result};
use crate::field::{Characteristic, Prime};
use crate::series::PoincareSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FactorKind {
    Exterior,
    Polynomial,
    Truncated { height: u32 },
}

/// One tensor factor generated by a single element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonogenicFactor {
    pub name: String,
    pub degree: u32,
    pub kind: FactorKind,
}

impl MonogenicFactor {
    pub fn exterior(name: impl Into<String>, degree: u32) -> Self {
        MonogenicFactor {
            name: name.into(),
            degree,
            kind: FactorKind::Exterior,
        }
    }

    pub fn polynomial(name: impl Into<String>, degree: u32) -> Self {
        MonogenicFactor {
            name: name.into(),
            degree,
            kind: FactorKind::Polynomial,
        }
    }

    pub fn truncated(name: impl Into<String>, degree: u32, height: u32) -> Self {
        MonogenicFactor {
            name: name.into(),
            degree,
            kind: FactorKind::Truncated { height },
        }
    }

    /// Nilpotency height: `x^h = 0`. `None` for polynomial factors.
    pub fn height(&self) -> Option<u32> {
        match self.kind {
            FactorKind::Exterior => Some(2),
            FactorKind::Polynomial => None,
            FactorKind::Truncated { height } => Some(height),
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.kind == FactorKind::Polynomial
    }

    pub fn series(&self) -> PoincareSeries {
        let s = match self.kind {
            FactorKind::Exterior => PoincareSeries::exterior(self.degree),
            FactorKind::Polynomial => PoincareSeries::polynomial(self.degree),
            FactorKind::Truncated { height } => PoincareSeries::truncated(self.degree, height),
        };
        s.expect("factor validated at construction")
    }
}

impl fmt::Display for MonogenicFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FactorKind::Exterior => write!(f, "E({}_{})", self.name, self.degree),
            FactorKind::Polynomial => write!(f, "P[{}_{}]", self.name, self.degree),
            FactorKind::Truncated { height } => {
                write!(f, "P[{n}_{d}]/({n}^{height})", n = self.name, d = self.degree)
            }
        }
    }
}

/// How generators of a presentation commute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignRule {
    /// `xy = (-1)^{|x||y|} yx`.
    #[default]
    Graded,
    /// `xy = yx` with no signs; odd generators may have nonzero squares.
    /// Loop-space homology such as `P[u_{2n-2}, v_{2n-1}]` has this shape.
    Commutative,
}

/// Connected graded algebra presented as a tensor product of monogenic factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraPresentation {
    characteristic: Characteristic,
    factors: Vec<MonogenicFactor>,
    sign_rule: SignRule,
    hopf: bool,
    infinite_tensor: bool,
}

impl AlgebraPresentation {
    pub fn new(characteristic: Characteristic, factors: Vec<MonogenicFactor>) -> Result<Self> {
        Self::build(characteristic, factors, SignRule::Graded, false, false)
    }

    pub fn over(p: Prime, factors: Vec<MonogenicFactor>) -> Result<Self> {
        Self::new(Characteristic::Prime(p), factors)
    }

    pub fn unit(characteristic: Characteristic) -> Self {
        AlgebraPresentation {
            characteristic,
            factors: Vec::new(),
            sign_rule: SignRule::Graded,
            hopf: false,
            infinite_tensor: false,
        }
    }

    pub fn build(
        characteristic: Characteristic,
        factors: Vec<MonogenicFactor>,
        sign_rule: SignRule,
        hopf: bool,
        infinite_tensor: bool,
    ) -> Result<Self> {
        // Signs are invisible in characteristic two.
        let sign_rule = if characteristic.is_two() { SignRule::Graded } else { sign_rule };
        let a = AlgebraPresentation {
            characteristic,
            factors,
            sign_rule,
            hopf,
            infinite_tensor,
        };
        a.validate()?;
        Ok(a)
    }

    pub fn with_hopf(self, hopf: bool) -> Result<Self> {
        Self::build(self.characteristic, self.factors, self.sign_rule, hopf, self.infinite_tensor)
    }

    pub fn with_sign_rule(self, rule: SignRule) -> Result<Self> {
        Self::build(self.characteristic, self.factors, rule, self.hopf, self.infinite_tensor)
    }

    /// Marks the factor list as the visible prefix of an infinite tensor product.
    pub fn with_infinite_tensor(self, infinite: bool) -> Result<Self> {
        Self::build(self.characteristic, self.factors, self.sign_rule, self.hopf, infinite)
    }

    fn validate(&self) -> Result<()> {
        let mut names = HashSet::new();
        let char_two = self.characteristic.is_two();
        for f in &self.factors {
            let bad = |msg: String| Err(Error::InvalidFactor(format!("{f}: {msg}")));
            if f.name.is_empty() {
                return bad("empty generator name".into());
            }
            if !names.insert(f.name.as_str()) {
                return bad("duplicate generator name".into());
            }
            if f.degree == 0 {
                return bad("degree must be positive".into());
            }
            let odd = f.degree % 2 == 1;
            if let Some(h) = f.height() {
                if h < 2 {
                    return bad("height must be at least 2".into());
                }
            }
            if self.sign_rule == SignRule::Graded && !char_two {
                match f.kind {
                    FactorKind::Exterior if !odd => {
                        return bad("exterior generators have odd degree away from characteristic 2".into())
                    }
                    FactorKind::Polynomial if odd => {
                        return bad("polynomial generators have even degree away from characteristic 2".into())
                    }
                    FactorKind::Truncated { height } if odd && height > 2 => {
                        return bad("odd generators square to zero away from characteristic 2".into())
                    }
                    _ => {}
                }
            }
            if self.hopf {
                match (self.characteristic, f.height()) {
                    (_, None) => {}
                    (Characteristic::Zero, Some(_)) if !odd || f.kind != FactorKind::Exterior => {
                        return bad("a commutative Hopf algebra over Q has no truncations".into())
                    }
                    (Characteristic::Prime(p), Some(h)) if !(odd && h == 2 && !char_two) && !is_power_of(h, p.get()) => {
                        return bad(format!("Hopf truncation heights are powers of {p}"));
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    pub fn characteristic(&self) -> Characteristic {
        self.characteristic
    }

    pub fn prime(&self) -> Option<Prime> {
        self.characteristic.prime()
    }

    pub fn factors(&self) -> &[MonogenicFactor] {
        &self.factors
    }

    pub fn sign_rule(&self) -> SignRule {
        self.sign_rule
    }

    pub fn is_hopf(&self) -> bool {
        self.hopf
    }

    pub fn is_infinite_tensor(&self) -> bool {
        self.infinite_tensor
    }

    /// Tensor product; duplicate generator names on the right get a suffix.
    pub fn tensor(&self, other: &AlgebraPresentation) -> Result<AlgebraPresentation> {
        if self.characteristic != other.characteristic {
            return Err(Error::PrimeMismatch(
                self.characteristic.to_string(),
                other.characteristic.to_string(),
            ));
        }
        let rule = match (self.sign_rule, other.sign_rule) {
            (a, b) if a == b => a,
            _ if self.factors.is_empty() => other.sign_rule,
            _ if other.factors.is_empty() => self.sign_rule,
            _ => {
                return Err(Error::Unsupported(
                    "tensor of graded and plainly commutative presentations".into(),
                ))
            }
        };
        let mut names: HashSet<String> = self.factors.iter().map(|f| f.name.clone()).collect();
        let mut factors = self.factors.clone();
        for f in &other.factors {
            let mut f = f.clone();
            let mut k = 2;
            while names.contains(&f.name) {
                f.name = format!("{}_{k}", f.name.trim_end_matches(|c: char| c.is_ascii_digit() || c == '_'));
                k += 1;
            }
            names.insert(f.name.clone());
            factors.push(f);
        }
        Self::build(
            self.characteristic,
            factors,
            rule,
            self.hopf && other.hopf,
            self.infinite_tensor || other.infinite_tensor,
        )
    }

    pub fn poincare_series(&self) -> PoincareSeries {
        self.factors
            .iter()
            .fold(PoincareSeries::unit(), |acc, f| acc.multiply(&f.series()))
    }

    pub fn polynomial_factor_count(&self) -> usize {
        self.factors.iter().filter(|f| f.is_polynomial()).count()
    }

    /// Graded dimensions of `A+ / (A+ . A+)` through `max_degree`: one class
    /// in each factor's generator degree.
    pub fn indecomposables(&self, max_degree: usize) -> Vec<usize> {
        let mut dims = vec![0; max_degree + 1];
        for f in &self.factors {
            if let Some(d) = dims.get_mut(f.degree as usize) {
                *d += 1;
            }
        }
        dims
    }

    /// Minimal number of algebra generators.
    pub fn generator_count(&self) -> usize {
        self.factors.len()
    }

    pub fn one_generated(&self) -> bool {
        !self.infinite_tensor && self.generator_count() <= 1
    }

    /// Replaces height-two truncations by exterior factors where the degree
    /// allows it; the algebra is unchanged.
    pub fn canonicalize(&self) -> AlgebraPresentation {
        let mut a = self.clone();
        for f in a.factors.iter_mut() {
            if f.kind == (FactorKind::Truncated { height: 2 })
                && (f.degree % 2 == 1 || self.characteristic.is_two() || self.sign_rule == SignRule::Commutative)
            {
                f.kind = FactorKind::Exterior;
            }
        }
        a
    }

    /// Effective-central elements `(factor index, power)` that generate a
    /// polynomial subalgebra: even polynomial generators, and squares of odd
    /// polynomial generators (the `p`-th power when `p = 2`).
    pub fn effective_center(&self) -> Vec<(usize, u32)> {
        self.factors
            .iter()
            .enumerate()
            .filter(|(_, f)| f.is_polynomial())
            .map(|(i, f)| (i, if f.degree % 2 == 0 { 1 } else { 2 }))
            .collect()
    }

    /// Generators-and-relations form with factor heights as exponent bounds.
    pub fn to_finite(&self, cutoff: u32) -> Result<FinitePresentation> {
        let p = self.require_prime()?;
        let gens = self
            .factors
            .iter()
            .map(|f| FiniteGenerator::new(&f.name, f.degree).with_bound(f.height().map(|h| h - 1)))
            .collect();
        FinitePresentation::new(p, gens, self.multiplication_rule(), cutoff)
    }

    /// Same algebra, but every truncation is an explicit relation `x^h`
    /// on a polynomial generator, so the quotient is found by row reduction.
    pub fn to_finite_with_relations(&self, cutoff: u32) -> Result<FinitePresentation> {
        let p = self.require_prime()?;
        let gens = self
            .factors
            .iter()
            .map(|f| FiniteGenerator::new(&f.name, f.degree))
            .collect();
        let mut fp = FinitePresentation::new(p, gens, self.multiplication_rule(), cutoff)?;
        for f in &self.factors {
            if let Some(h) = f.height() {
                fp.add_relation_str(&format!("{}^{}", f.name, h))?;
            }
        }
        Ok(fp)
    }

    fn multiplication_rule(&self) -> MultiplicationRule {
        match self.sign_rule {
            SignRule::Graded => MultiplicationRule::Graded,
            SignRule::Commutative => MultiplicationRule::Commutative,
        }
    }

    fn require_prime(&self) -> Result<Prime> {
        self.prime()
            .ok_or_else(|| Error::Unsupported("monomial computations need a prime field".into()))
    }
}

fn is_power_of(h: u32, p: u64) -> bool {
    let mut x = h as u64;
    while x % p == 0 && x > 1 {
        x /= p;
    }
    x == 1
}

impl fmt::Display for AlgebraPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            write!(f, "{}", self.characteristic)?;
        } else {
            let parts: Vec<String> = self.factors.iter().map(ToString::to_string).collect();
            write!(f, "{}", parts.join(" ⊗ "))?;
        }
        if self.infinite_tensor {
            write!(f, " ⊗ …")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn parity_invariants() {
        assert!(AlgebraPresentation::over(p(3), vec![MonogenicFactor::exterior("a", 2)]).is_err());
        assert!(AlgebraPresentation::over(p(2), vec![MonogenicFactor::exterior("a", 2)]).is_ok());
        assert!(AlgebraPresentation::over(p(3), vec![MonogenicFactor::polynomial("v", 3)]).is_err());
        let commutative = AlgebraPresentation::build(
            Characteristic::Prime(p(3)),
            vec![MonogenicFactor::polynomial("u", 2), MonogenicFactor::polynomial("v", 3)],
            SignRule::Commutative,
            true,
            false,
        );
        assert!(commutative.is_ok());
    }

    #[test]
    fn hopf_heights_are_prime_powers() {
        let a = AlgebraPresentation::over(p(3), vec![MonogenicFactor::truncated("x", 2, 4)]).unwrap();
        assert!(a.clone().with_hopf(true).is_err());
        let b = AlgebraPresentation::over(p(3), vec![MonogenicFactor::truncated("x", 2, 9)]).unwrap();
        assert!(b.with_hopf(true).is_ok());
    }

    #[test]
    fn tensor_unit_and_mismatch() {
        let e = AlgebraPresentation::over(p(5), vec![MonogenicFactor::exterior("a", 3)]).unwrap();
        let unit = AlgebraPresentation::unit(Characteristic::Prime(p(5)));
        assert_eq!(e.tensor(&unit).unwrap(), e);
        let other = AlgebraPresentation::unit(Characteristic::Prime(p(7)));
        assert!(matches!(e.tensor(&other), Err(Error::PrimeMismatch(..))));
    }

    #[test]
    fn tensor_renames_clashing_generators() {
        let e = AlgebraPresentation::over(p(2), vec![MonogenicFactor::exterior("a", 3)]).unwrap();
        let t = e.tensor(&e).unwrap();
        assert_eq!(t.factors()[1].name, "a_2");
    }

    #[test]
    fn grassmannian_mod_two_needs_two_generators() {
        let n = 3;
        let x = AlgebraPresentation::over(p(2), vec![MonogenicFactor::truncated("x", 2, n)]).unwrap();
        let y = AlgebraPresentation::over(p(2), vec![MonogenicFactor::exterior("y", 2 * n)]).unwrap();
        let h = x.tensor(&y).unwrap();
        assert_eq!(h.indecomposables(10).iter().sum::<usize>(), 2);
        assert!(!h.one_generated());
        assert!(x.one_generated());
        assert!(AlgebraPresentation::unit(Characteristic::Prime(p(2))).one_generated());
    }
}
