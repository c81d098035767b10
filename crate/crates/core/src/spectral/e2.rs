//! The bigraded algebra `E_2^{s,t} = H^{-s}(M) ⊗ H_t(ΩM)`, truncated at total
//! degree `s + t <= T`. Differentials lower the total degree, so the truncated
//! range is closed under them.
//!
//! Bidegrees are stored as `(col, t)` with `col = -s >= 0`. A class of
//! cohomological degree `k` sits at `(k, 0)` and has total degree `-k`.
//! Products follow the Koszul rule for the tensor product:
//! `(c ⊗ l)(c' ⊗ l') = (-1)^{|l||c'|} cc' ⊗ ll'`.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::expr;
use crate::algebra::monomial::{Mono, MonomialSpace};
use crate::algebra::{AlgebraPresentation, SignRule};
use crate::error::{Error, Result};
use crate::field::{Fp, Prime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Bideg {
    /// Column `-s`.
    pub col: u32,
    pub t: u32,
}

impl Bideg {
    pub fn new(col: u32, t: u32) -> Self {
        Bideg { col, t }
    }

    pub fn s(self) -> i64 {
        -i64::from(self.col)
    }

    /// `s + t`.
    pub fn total(self) -> i64 {
        i64::from(self.t) - i64::from(self.col)
    }

    pub fn is_odd(self) -> bool {
        self.total().rem_euclid(2) == 1
    }

    pub fn plus(self, other: Bideg) -> Bideg {
        Bideg::new(self.col + other.col, self.t + other.t)
    }

    /// Target of `d_r`: `(s - r, t + r - 1)`.
    pub fn shifted(self, r: u32) -> Bideg {
        Bideg::new(self.col + r, self.t + r - 1)
    }

    /// Source of `d_r` landing here, if inside the quadrant.
    pub fn source(self, r: u32) -> Option<Bideg> {
        let col = self.col.checked_sub(r)?;
        let t = (self.t + 1).checked_sub(r)?;
        Some(Bideg::new(col, t))
    }
}

impl fmt::Display for Bideg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.s(), self.t)
    }
}

/// A homogeneous element: coordinates on the `E_2` monomial basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BiElem {
    pub bideg: Bideg,
    pub coords: Vec<u64>,
}

impl BiElem {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

#[derive(Debug, Clone)]
struct Slot {
    monos: Vec<(Mono, Mono)>,
    index: HashMap<(Mono, Mono), usize>,
}

#[derive(Debug, Clone)]
pub struct E2Algebra {
    prime: Prime,
    dimension: u32,
    truncation: u32,
    cohomology: AlgebraPresentation,
    loop_homology: AlgebraPresentation,
    coh: MonomialSpace,
    lp: MonomialSpace,
    /// slots[col][t]
    slots: Vec<Vec<Slot>>,
}

fn space_for(a: &AlgebraPresentation, char_two: bool) -> MonomialSpace {
    let degrees: Vec<u32> = a.factors().iter().map(|f| f.degree).collect();
    let bounds: Vec<Option<u32>> = a.factors().iter().map(|f| f.height().map(|h| h - 1)).collect();
    let negative = match a.sign_rule() {
        SignRule::Graded => MonomialSpace::graded_signs(&degrees),
        SignRule::Commutative => vec![vec![false; degrees.len()]; degrees.len()],
    };
    MonomialSpace::commuting(degrees, bounds, negative, char_two)
}

impl E2Algebra {
    /// Builds `E_2` for a manifold of dimension `n`, checking that the
    /// cohomology vanishes above `n` and, for simply connected manifolds,
    /// in degrees `1` and `n - 1`.
    pub fn new(
        cohomology: &AlgebraPresentation,
        loop_homology: &AlgebraPresentation,
        dimension: u32,
        truncation: u32,
        simply_connected: bool,
    ) -> Result<Self> {
        let prime = cohomology
            .prime()
            .ok_or_else(|| Error::Unsupported("the spectral sequence runs over a prime field".into()))?;
        if loop_homology.prime() != Some(prime) {
            return Err(Error::PrimeMismatch(
                cohomology.characteristic().to_string(),
                loop_homology.characteristic().to_string(),
            ));
        }
        let series = cohomology.poincare_series();
        match series.top_degree() {
            Some(top) if top <= u64::from(dimension) => {}
            Some(top) => {
                return Err(Error::InconsistentPage(format!(
                    "cohomology is nonzero in degree {top}, above the dimension {dimension}"
                )))
            }
            None => return Err(Error::InconsistentPage("cohomology is infinite-dimensional".into())),
        }
        let dims = series.coefficients_u64(dimension as usize);
        if simply_connected {
            for d in [1, dimension.saturating_sub(1)] {
                if d >= 1 && dims[d as usize] != 0 {
                    return Err(Error::InconsistentPage(format!(
                        "H^{d} is nonzero but the manifold is declared simply connected"
                    )));
                }
            }
        }
        let mut names = std::collections::HashSet::new();
        for f in cohomology.factors().iter().chain(loop_homology.factors()) {
            if !names.insert(f.name.clone()) {
                return Err(Error::InvalidPresentation(format!(
                    "generator name '{}' is used by both algebras",
                    f.name
                )));
            }
        }
        let coh = space_for(cohomology, prime.is_two());
        let lp = space_for(loop_homology, prime.is_two());
        let loop_monos: Vec<Vec<Mono>> =
            (0..=truncation + dimension).map(|t| sorted(&lp, lp.enumerate(t))).collect();
        let slots = (0..=dimension)
            .map(|col| {
                let cm = sorted(&coh, coh.enumerate(col));
                loop_monos[..=(truncation + col) as usize]
                    .iter()
                    .map(|lms| {
                        let monos: Vec<(Mono, Mono)> = cm
                            .iter()
                            .flat_map(|c| lms.iter().map(move |l| (c.clone(), l.clone())))
                            .collect();
                        let index = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
                        Slot { monos, index }
                    })
                    .collect()
            })
            .collect();
        Ok(E2Algebra {
            prime,
            dimension,
            truncation,
            cohomology: cohomology.clone(),
            loop_homology: loop_homology.clone(),
            coh,
            lp,
            slots,
        })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn field(&self) -> Fp {
        Fp::new(self.prime)
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn cohomology(&self) -> &AlgebraPresentation {
        &self.cohomology
    }

    pub fn loop_homology(&self) -> &AlgebraPresentation {
        &self.loop_homology
    }

    /// Whether the bidegree is stored (inside the columns and the truncation).
    pub fn contains(&self, b: Bideg) -> bool {
        b.col <= self.dimension && b.total() <= i64::from(self.truncation)
    }

    /// `dim E_2` at `b`; zero outside the columns, `None` above the truncation.
    pub fn dim(&self, b: Bideg) -> Option<usize> {
        if b.col > self.dimension {
            Some(0)
        } else if b.total() > i64::from(self.truncation) {
            None
        } else {
            Some(self.slots[b.col as usize][b.t as usize].monos.len())
        }
    }

    /// `dim E_2` at `b` from the Poincaré series, valid past the truncation.
    pub fn dim_untruncated(&self, b: Bideg) -> u64 {
        if b.col > self.dimension {
            return 0;
        }
        let c = self.cohomology.poincare_series().coefficients_u64(b.col as usize)[b.col as usize];
        let l = self.loop_homology.poincare_series().coefficients_u64(b.t as usize)[b.t as usize];
        c * l
    }

    /// Stored bidegrees ordered by `col + t`, then by column.
    pub fn bidegrees(&self) -> Vec<Bideg> {
        let mut out: Vec<Bideg> = (0..=self.dimension)
            .flat_map(|c| (0..=self.truncation + c).map(move |t| Bideg::new(c, t)))
            .collect();
        out.sort_by_key(|b| (b.col + b.t, b.col));
        out
    }

    pub fn zero(&self, b: Bideg) -> Option<BiElem> {
        self.dim(b).map(|n| BiElem {
            bideg: b,
            coords: vec![0; n],
        })
    }

    pub fn unit(&self) -> BiElem {
        let mut e = self.zero(Bideg::new(0, 0)).expect("origin is stored");
        e.coords[0] = 1;
        e
    }

    pub fn basis_monomial(&self, b: Bideg, i: usize) -> (&Mono, &Mono) {
        let (c, l) = &self.slots[b.col as usize][b.t as usize].monos[i];
        (c, l)
    }

    /// Product; `None` above the truncation.
    pub fn multiply(&self, x: &BiElem, y: &BiElem) -> Option<BiElem> {
        let b = x.bideg.plus(y.bideg);
        let mut out = self.zero(b)?;
        if out.coords.is_empty() {
            return Some(out);
        }
        let f = self.field();
        let slot = &self.slots[b.col as usize][b.t as usize];
        let sx = &self.slots[x.bideg.col as usize][x.bideg.t as usize];
        let sy = &self.slots[y.bideg.col as usize][y.bideg.t as usize];
        for (i, &a) in x.coords.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let (c1, l1) = &sx.monos[i];
            for (j, &bb) in y.coords.iter().enumerate() {
                if bb == 0 {
                    continue;
                }
                let (c2, l2) = &sy.monos[j];
                let Some((c, n1)) = self.coh.multiply(c1, c2) else { continue };
                let Some((l, n2)) = self.lp.multiply(l1, l2) else { continue };
                let cross = self.lp.degree(l1) % 2 == 1 && self.coh.degree(c2) % 2 == 1;
                let neg = n1 ^ n2 ^ cross;
                let k = slot.index[&(c, l)];
                let v = f.mul(a, bb);
                out.coords[k] = f.add(out.coords[k], if neg { f.neg(v) } else { v });
            }
        }
        Some(out)
    }

    pub fn power(&self, x: &BiElem, k: u64) -> Option<BiElem> {
        let mut acc = self.unit();
        for _ in 0..k {
            acc = self.multiply(&acc, x)?;
        }
        Some(acc)
    }

    pub fn add_scaled(&self, x: &BiElem, y: &BiElem, scale: u64) -> BiElem {
        debug_assert_eq!(x.bideg, y.bideg);
        let f = self.field();
        BiElem {
            bideg: x.bideg,
            coords: x.coords.iter().zip(&y.coords).map(|(&a, &b)| f.add(a, f.mul(scale, b))).collect(),
        }
    }

    pub fn scale(&self, x: &BiElem, c: u64) -> BiElem {
        let f = self.field();
        BiElem {
            bideg: x.bideg,
            coords: x.coords.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    /// Parses an expression in the cohomology and loop generators.
    pub fn parse(&self, src: &str) -> Result<BiElem> {
        let invalid = |msg: String| Error::InvalidPresentation(format!("'{src}': {msg}"));
        let terms = expr::parse(src).map_err(|e| invalid(e.to_string()))?;
        let f = self.field();
        let mut acc: Option<BiElem> = None;
        for term in terms {
            let mut cur = self.unit();
            for (name, e) in &term.factors {
                let g = self.generator(name).ok_or_else(|| invalid(format!("unknown generator '{name}'")))?;
                for _ in 0..*e {
                    cur = self
                        .multiply(&cur, &g)
                        .ok_or_else(|| invalid("lies above the truncation".into()))?;
                }
            }
            cur = self.scale(&cur, f.from_i64(term.coefficient));
            acc = Some(match acc {
                None => cur,
                Some(a) if a.bideg == cur.bideg => self.add_scaled(&a, &cur, 1),
                Some(a) => {
                    return Err(invalid(format!("mixes bidegrees {} and {}", a.bideg, cur.bideg)));
                }
            });
        }
        acc.ok_or_else(|| invalid("empty expression".into()))
    }

    /// The generator with this name as an element of `E_2`.
    pub fn generator(&self, name: &str) -> Option<BiElem> {
        if let Some(i) = self.cohomology.factors().iter().position(|f| f.name == name) {
            let m = self.coh.generator(i);
            let b = Bideg::new(self.coh.degree(&m), 0);
            return self.mono_elem(b, (m, self.lp.unit()));
        }
        if let Some(i) = self.loop_homology.factors().iter().position(|f| f.name == name) {
            let m = self.lp.generator(i);
            let b = Bideg::new(0, self.lp.degree(&m));
            return self.mono_elem(b, (self.coh.unit(), m));
        }
        None
    }

    fn mono_elem(&self, b: Bideg, m: (Mono, Mono)) -> Option<BiElem> {
        let mut e = self.zero(b)?;
        let slot = self.slots.get(b.col as usize)?.get(b.t as usize)?;
        e.coords[*slot.index.get(&m)?] = 1;
        Some(e)
    }

    pub fn format(&self, x: &BiElem) -> String {
        if !self.contains(x.bideg) {
            return "0".into();
        }
        let names = |a: &AlgebraPresentation, m: &Mono| -> Vec<String> {
            m.iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let n = &a.factors()[i].name;
                    if e == 1 {
                        n.clone()
                    } else {
                        format!("{n}^{e}")
                    }
                })
                .collect()
        };
        let parts: Vec<String> = x
            .coords
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let (cm, lm) = self.basis_monomial(x.bideg, i);
                let mut factors = names(&self.cohomology, cm);
                factors.extend(names(&self.loop_homology, lm));
                let mono = if factors.is_empty() { "1".to_string() } else { factors.join("*") };
                if c == 1 {
                    mono
                } else {
                    format!("{c}*{mono}")
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn sorted(space: &MonomialSpace, mut v: Vec<Mono>) -> Vec<Mono> {
    v.sort_by(|a, b| space.compare(a, b));
    v
}
