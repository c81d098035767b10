//! Generators-and-relations presentations evaluated degree by degree.
//!
//! For each degree `d <= cutoff` the quotient `A_d` is computed as the span of
//! ambient monomials of degree `d` modulo the degree-`d` slice of the relation
//! ideal. The slice is spanned by all monomial multiples of the relations and
//! is row-reduced over `F_p`. Standard monomials (non-pivot columns) form the
//! basis. Columns are ordered largest monomial first, so pivots land on large
//! monomials and the basis consists of the smallest ones.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use super::expr;
use super::monomial::{Mono, MonomialSpace};
use crate::error::{Error, Result};
use crate::field::{Fp, Prime};
use crate::linalg::{SparseEchelon, SparseVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MultiplicationRule {
    /// Graded commutative: `xy = (-1)^{|x||y|} yx`, odd squares vanish for odd `p`.
    Graded,
    /// Commutative with no signs.
    Commutative,
    /// Free associative (tensor) algebra modulo the relations.
    Free,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGenerator {
    pub name: String,
    pub degree: u32,
    /// Largest nonzero exponent (`x^{bound+1} = 0`); ignored for free algebras.
    pub bound: Option<u32>,
}

impl FiniteGenerator {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        FiniteGenerator {
            name: name.into(),
            degree,
            bound: None,
        }
    }

    pub fn with_bound(mut self, bound: Option<u32>) -> Self {
        self.bound = bound;
        self
    }
}

/// Homogeneous element of the quotient: coordinates on the degree's basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Elem {
    pub degree: u32,
    pub coords: Vec<u64>,
}

impl Elem {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

#[derive(Debug, Clone)]
struct Slice {
    monos: Vec<Mono>,
    index: HashMap<Mono, usize>,
    ideal: SparseEchelon,
    /// Column of each basis element.
    basis_cols: Vec<usize>,
    /// Basis position of each non-pivot column.
    basis_pos: HashMap<usize, usize>,
}

#[derive(Debug, Clone)]
pub struct FinitePresentation {
    prime: Prime,
    generators: Vec<FiniteGenerator>,
    rule: MultiplicationRule,
    space: MonomialSpace,
    relations: Vec<(u32, SparseTerms)>,
    relation_sources: Vec<String>,
    cutoff: u32,
    slices: OnceLock<Vec<Slice>>,
}

type SparseTerms = Vec<(Mono, u64)>;

impl FinitePresentation {
    pub fn new(prime: Prime, generators: Vec<FiniteGenerator>, rule: MultiplicationRule, cutoff: u32) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for g in &generators {
            if g.degree == 0 {
                return Err(Error::InvalidPresentation(format!("generator {} has degree 0", g.name)));
            }
            if g.name.is_empty() || !seen.insert(g.name.clone()) {
                return Err(Error::InvalidPresentation(format!("duplicate or empty generator name '{}'", g.name)));
            }
        }
        let degrees: Vec<u32> = generators.iter().map(|g| g.degree).collect();
        let bounds: Vec<Option<u32>> = generators.iter().map(|g| g.bound).collect();
        let space = match rule {
            MultiplicationRule::Free => MonomialSpace::free(degrees),
            MultiplicationRule::Graded => {
                let signs = MonomialSpace::graded_signs(&degrees);
                MonomialSpace::commuting(degrees, bounds, signs, prime.is_two())
            }
            MultiplicationRule::Commutative => {
                let n = degrees.len();
                MonomialSpace::commuting(degrees, bounds, vec![vec![false; n]; n], prime.is_two())
            }
        };
        let mut fp = FinitePresentation {
            prime,
            generators,
            rule,
            space,
            relations: Vec::new(),
            relation_sources: Vec::new(),
            cutoff,
            slices: OnceLock::new(),
        };
        if rule == MultiplicationRule::Free {
            // Bounds become explicit relations in the tensor algebra.
            let bounded: Vec<(String, u32)> = fp
                .generators
                .iter()
                .filter_map(|g| g.bound.map(|b| (g.name.clone(), b + 1)))
                .collect();
            for (name, h) in bounded {
                fp.add_relation_str(&format!("{name}^{h}"))?;
            }
        }
        Ok(fp)
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn field(&self) -> Fp {
        Fp::new(self.prime)
    }

    pub fn generators(&self) -> &[FiniteGenerator] {
        &self.generators
    }

    pub fn rule(&self) -> MultiplicationRule {
        self.rule
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn relation_sources(&self) -> &[String] {
        &self.relation_sources
    }

    pub fn space(&self) -> &MonomialSpace {
        &self.space
    }

    pub fn max_generator_degree(&self) -> u32 {
        self.generators.iter().map(|g| g.degree).max().unwrap_or(0)
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Parses and adds a homogeneous relation.
    pub fn add_relation_str(&mut self, src: &str) -> Result<()> {
        let terms = self.parse_terms(src).map_err(|e| Error::InvalidPresentation(format!("relation '{src}': {e}")))?;
        self.push_relation(terms, src.to_string())
    }

    pub fn add_relation(&mut self, terms: SparseTerms) -> Result<()> {
        let label = self.format_terms(&terms);
        self.push_relation(terms, label)
    }

    fn push_relation(&mut self, terms: SparseTerms, label: String) -> Result<()> {
        let f = self.field();
        let terms: SparseTerms = terms.into_iter().filter(|(_, c)| c % f.prime() != 0).collect();
        let mut degree = None;
        for (m, _) in &terms {
            let d = self.space.degree(m);
            if degree.is_some_and(|x| x != d) {
                return Err(Error::InvalidPresentation(format!("relation '{label}' is not homogeneous")));
            }
            degree = Some(d);
        }
        if let Some(d) = degree {
            if d == 0 {
                return Err(Error::InvalidPresentation(format!(
                    "relation '{label}' has a nonzero constant term"
                )));
            }
            self.relations.push((d, terms));
            self.relation_sources.push(label);
            self.slices = OnceLock::new();
        }
        Ok(())
    }

    /// Parses an expression into ambient terms (products multiplied out).
    pub fn parse_terms(&self, src: &str) -> std::result::Result<SparseTerms, expr::ExprError> {
        let f = self.field();
        let parsed = expr::parse(src)?;
        let mut acc: HashMap<Mono, u64> = HashMap::new();
        for t in parsed {
            let mut mono = self.space.unit();
            let mut coef = f.from_i64(t.coefficient);
            let mut zero = false;
            for (name, e) in &t.factors {
                let Some(i) = self.generator_index(name) else {
                    return Err(expr::ExprError {
                        column: expr::name_column(src, name).unwrap_or(1),
                        message: format!("unknown generator '{name}'"),
                    });
                };
                for _ in 0..*e {
                    match self.space.multiply(&mono, &self.space.generator(i)) {
                        Some((m, neg)) => {
                            mono = m;
                            if neg {
                                coef = f.neg(coef);
                            }
                        }
                        None => zero = true,
                    }
                    if zero {
                        break;
                    }
                }
            }
            if !zero && coef != 0 {
                let e = acc.entry(mono).or_insert(0);
                *e = f.add(*e, coef);
            }
        }
        let mut terms: SparseTerms = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.sort_by(|a, b| self.space.compare(&a.0, &b.0));
        Ok(terms)
    }

    fn slices(&self) -> &[Slice] {
        self.slices.get_or_init(|| (0..=self.cutoff).map(|d| self.build_slice(d)).collect())
    }

    fn build_slice(&self, d: u32) -> Slice {
        let f = self.field();
        let mut monos = self.space.enumerate(d);
        monos.sort_by(|a, b| self.space.compare(a, b));
        let index: HashMap<Mono, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut ideal = SparseEchelon::new(f);
        for (rd, terms) in &self.relations {
            if *rd > d {
                continue;
            }
            let rest = d - rd;
            if self.space.is_free() {
                for a in 0..=rest {
                    let lefts = self.space.enumerate(a);
                    let rights = self.space.enumerate(rest - a);
                    for l in &lefts {
                        for r in &rights {
                            let row = self.sandwich(l, terms, r, &index);
                            if !row.is_empty() {
                                ideal.insert(&row);
                            }
                        }
                    }
                }
            } else {
                for m in self.space.enumerate(rest) {
                    let row = self.sandwich(&m, terms, &self.space.unit(), &index);
                    if !row.is_empty() {
                        ideal.insert(&row);
                    }
                }
            }
        }
        let basis_cols: Vec<usize> = (0..monos.len()).filter(|&c| !ideal.is_pivot(c)).collect();
        let basis_pos = basis_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        Slice {
            monos,
            index,
            ideal,
            basis_cols,
            basis_pos,
        }
    }

    /// `left * terms * right` as a sparse row over the slice columns.
    fn sandwich(&self, left: &[u16], terms: &SparseTerms, right: &[u16], index: &HashMap<Mono, usize>) -> SparseVec {
        let f = self.field();
        let mut row: SparseVec = Vec::new();
        for (m, c) in terms {
            let Some((lm, n1)) = self.space.multiply(left, m) else { continue };
            let Some((full, n2)) = self.space.multiply(&lm, right) else { continue };
            let coef = if n1 ^ n2 { f.neg(*c) } else { *c };
            row.push((index[&full], coef));
        }
        row.sort_unstable();
        row
    }

    /// `dim A_d`, or `None` above the cutoff.
    pub fn dim(&self, d: u32) -> Option<usize> {
        self.slices().get(d as usize).map(|s| s.basis_cols.len())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.slices().iter().map(|s| s.basis_cols.len()).collect()
    }

    /// Standard monomials spanning `A_d`.
    pub fn monomial_basis(&self, d: u32) -> Result<Vec<Mono>> {
        let s = self.slice(d)?;
        Ok(s.basis_cols.iter().map(|&c| s.monos[c].clone()).collect())
    }

    fn slice(&self, d: u32) -> Result<&Slice> {
        self.slices()
            .get(d as usize)
            .ok_or_else(|| Error::OutOfRange(format!("degree {d} exceeds cutoff {}", self.cutoff)))
    }

    /// Normal form of a signed ambient monomial, `None` above the cutoff.
    pub fn mono_elem(&self, m: &[u16], negative: bool) -> Option<Elem> {
        let d = self.space.degree(m);
        let s = self.slices().get(d as usize)?;
        let f = self.field();
        let mut coords = vec![0; s.basis_cols.len()];
        if let Some(&col) = s.index.get(m) {
            for (c, x) in s.ideal.reduce(&[(col, f.sign(negative))]) {
                coords[s.basis_pos[&c]] = x;
            }
        }
        Some(Elem { degree: d, coords })
    }

    pub fn unit_elem(&self) -> Elem {
        self.mono_elem(&self.space.unit(), false).expect("degree 0 is below every cutoff")
    }

    pub fn generator_elem(&self, i: usize) -> Option<Elem> {
        self.mono_elem(&self.space.generator(i), false)
    }

    /// Element given by an expression in the generators.
    pub fn parse_elem(&self, src: &str) -> Result<Elem> {
        let terms = self
            .parse_terms(src)
            .map_err(|e| Error::InvalidPresentation(format!("'{src}': {e}")))?;
        let degree = terms.first().map_or(0, |(m, _)| self.space.degree(m));
        if terms.iter().any(|(m, _)| self.space.degree(m) != degree) {
            return Err(Error::InvalidPresentation(format!("'{src}' is not homogeneous")));
        }
        self.terms_elem(degree, &terms)
            .ok_or_else(|| Error::OutOfRange(format!("'{src}' lies above the cutoff")))
    }

    fn terms_elem(&self, degree: u32, terms: &SparseTerms) -> Option<Elem> {
        let s = self.slices().get(degree as usize)?;
        let f = self.field();
        let row: SparseVec = terms.iter().filter_map(|(m, c)| s.index.get(m).map(|&i| (i, *c))).collect();
        let mut coords = vec![0; s.basis_cols.len()];
        let mut row = row;
        row.sort_unstable();
        for (c, x) in s.ideal.reduce(&row) {
            coords[s.basis_pos[&c]] = f.add(coords[s.basis_pos[&c]], x);
        }
        Some(Elem { degree, coords })
    }

    pub fn zero(&self, degree: u32) -> Option<Elem> {
        self.dim(degree).map(|n| Elem {
            degree,
            coords: vec![0; n],
        })
    }

    pub fn add_scaled(&self, a: &Elem, b: &Elem, scale: u64) -> Elem {
        debug_assert_eq!(a.degree, b.degree);
        let f = self.field();
        Elem {
            degree: a.degree,
            coords: a.coords.iter().zip(&b.coords).map(|(&x, &y)| f.add(x, f.mul(scale, y))).collect(),
        }
    }

    /// Product, `None` when the result lies above the cutoff.
    pub fn multiply(&self, a: &Elem, b: &Elem) -> Option<Elem> {
        let degree = a.degree + b.degree;
        let s = self.slices().get(degree as usize)?;
        let f = self.field();
        let sa = &self.slices()[a.degree as usize];
        let sb = &self.slices()[b.degree as usize];
        let mut row: HashMap<usize, u64> = HashMap::new();
        for (i, &x) in a.coords.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let ma = &sa.monos[sa.basis_cols[i]];
            for (j, &y) in b.coords.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let mb = &sb.monos[sb.basis_cols[j]];
                if let Some((m, neg)) = self.space.multiply(ma, mb) {
                    let c = f.mul(x, y);
                    let e = row.entry(s.index[&m]).or_insert(0);
                    *e = f.add(*e, if neg { f.neg(c) } else { c });
                }
            }
        }
        let mut row: SparseVec = row.into_iter().filter(|&(_, c)| c != 0).collect();
        row.sort_unstable();
        let mut coords = vec![0; s.basis_cols.len()];
        for (c, x) in s.ideal.reduce(&row) {
            coords[s.basis_pos[&c]] = x;
        }
        Some(Elem { degree, coords })
    }

    pub fn power(&self, a: &Elem, k: u32) -> Option<Elem> {
        let mut acc = self.unit_elem();
        for _ in 0..k {
            acc = self.multiply(&acc, a)?;
        }
        Some(acc)
    }

    /// Graded commutator `ab - (-1)^{|a||b|} ba`.
    pub fn commutator(&self, a: &Elem, b: &Elem) -> Option<Elem> {
        let ab = self.multiply(a, b)?;
        let ba = self.multiply(b, a)?;
        let f = self.field();
        let sign = f.sign(a.degree % 2 == 1 && b.degree % 2 == 1);
        Some(self.add_scaled(&ab, &ba, f.neg(sign)))
    }

    /// Basis of `A_d` as elements.
    pub fn basis_elems(&self, d: u32) -> Vec<Elem> {
        let n = self.dim(d).unwrap_or(0);
        (0..n)
            .map(|i| {
                let mut coords = vec![0; n];
                coords[i] = 1;
                Elem { degree: d, coords }
            })
            .collect()
    }

    pub fn format_mono(&self, m: &[u16]) -> String {
        let mut parts = Vec::new();
        if self.space.is_free() {
            let mut i = 0;
            while i < m.len() {
                let g = m[i];
                let mut e = 1;
                while i + e < m.len() && m[i + e] == g {
                    e += 1;
                }
                parts.push(power_str(&self.generators[g as usize].name, e as u32));
                i += e;
            }
        } else {
            for (g, &e) in m.iter().enumerate() {
                if e > 0 {
                    parts.push(power_str(&self.generators[g].name, e as u32));
                }
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    fn format_terms(&self, terms: &SparseTerms) -> String {
        let parts: Vec<String> = terms
            .iter()
            .map(|(m, c)| format!("{c}*{}", self.format_mono(m)))
            .collect();
        parts.join(" + ")
    }

    pub fn format_elem(&self, e: &Elem) -> String {
        let Ok(basis) = self.monomial_basis(e.degree) else {
            return "?".into();
        };
        let parts: Vec<String> = e
            .coords
            .iter()
            .zip(&basis)
            .filter(|(&c, _)| c != 0)
            .map(|(&c, m)| {
                if c == 1 {
                    self.format_mono(m)
                } else {
                    format!("{c}*{}", self.format_mono(m))
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// Graded dimensions of the indecomposables `A+/(A+ . A+)` through
    /// `min(max_degree, cutoff)`, and whether they are complete: every
    /// generator lies at or below the cutoff.
    pub fn indecomposables(&self, max_degree: u32) -> (Vec<usize>, bool) {
        let top = max_degree.min(self.cutoff);
        let f = self.field();
        let dims = (0..=top)
            .map(|d| {
                if d == 0 {
                    return 0;
                }
                let s = &self.slices()[d as usize];
                let mut decomposable = SparseEchelon::new(f);
                for (col, m) in s.monos.iter().enumerate() {
                    if self.space.length(m) >= 2 {
                        decomposable.insert(&s.ideal.reduce(&[(col, 1)]));
                    }
                }
                s.basis_cols.len() - decomposable.rank()
            })
            .collect();
        let complete = self.generators.iter().all(|g| g.degree <= self.cutoff) && max_degree >= self.max_generator_degree();
        (dims, complete)
    }

    /// `dim Q(A) <= 1`, Unknown when a generator lies above the cutoff.
    pub fn one_generated(&self) -> crate::logic::Truth {
        let (dims, complete) = self.indecomposables(self.cutoff);
        let total: usize = dims.iter().sum();
        if total > 1 {
            crate::logic::Truth::False
        } else if complete {
            crate::logic::Truth::True
        } else {
            crate::logic::Truth::Unknown
        }
    }
}

fn power_str(name: &str, e: u32) -> String {
    if e == 1 {
        name.to_string()
    } else {
        format!("{name}^{e}")
    }
}

impl fmt::Display for FinitePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| format!("{}_{}", g.name, g.degree)).collect();
        write!(f, "F_{}<{}>", self.prime, gens.join(", "))?;
        if !self.relation_sources.is_empty() {
            write!(f, " / ({})", self.relation_sources.join(", "))?;
        }
        Ok(())
    }
}
