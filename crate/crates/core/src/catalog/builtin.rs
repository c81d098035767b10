//! Built-in records: spheres, projective spaces, sphere bundles over spheres,
//! Stiefel manifolds, oriented Grassmannians, and homogeneous-space stubs.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{PrimeData, SpaceRecord};
use crate::algebra::{AlgebraPresentation, MonogenicFactor, SignRule};
use crate::field::{Characteristic, Prime};

/// How far parametrized families are instantiated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogBounds {
    /// Largest family parameter `n`.
    pub family: u32,
    /// Records carry mod-p data for every prime up to this bound.
    pub prime: u64,
}

impl Default for CatalogBounds {
    fn default() -> Self {
        CatalogBounds { family: 10, prime: 13 }
    }
}

/// Euler classes instantiated eagerly for the sphere-bundle family.
const EULER_CLASSES: [i64; 8] = [0, 1, 2, 3, 4, 5, 6, 7];

const STUBS: [(&str, Option<u32>, &str); 7] = [
    (
        "SU(2)/SO(3)",
        None,
        "label kept as listed; SO(3) is not a proper subgroup of SU(2), so SU(3)/SO(3) is likely meant",
    ),
    ("Sp(2)/SU(2)", Some(7), "no presentation supplied; cohomology data may be added by a record file"),
    ("G2/K-1", None, "homogeneous space of G2; subgroup and data not supplied"),
    ("G2/K-2", None, "homogeneous space of G2; subgroup and data not supplied"),
    ("G2/K-3", None, "homogeneous space of G2; subgroup and data not supplied"),
    ("G2/K-4", None, "homogeneous space of G2; subgroup and data not supplied"),
    ("G2/K-5", None, "homogeneous space of G2; subgroup and data not supplied"),
];

fn algebra(ch: Characteristic, factors: Vec<MonogenicFactor>, rule: SignRule, hopf: bool) -> AlgebraPresentation {
    AlgebraPresentation::build(ch, factors, rule, hopf, false).expect("built-in presentation")
}

/// A class with zero square: exterior when odd or in characteristic two.
fn square_zero(ch: Characteristic, name: &str, degree: u32) -> MonogenicFactor {
    if degree % 2 == 1 || ch.is_two() {
        MonogenicFactor::exterior(name, degree)
    } else {
        MonogenicFactor::truncated(name, degree, 2)
    }
}

fn cohomology(ch: Characteristic, factors: Vec<MonogenicFactor>) -> AlgebraPresentation {
    algebra(ch, factors, SignRule::Graded, false)
}

/// Pontryagin algebra of a loop space. Odd polynomial generators commute
/// without signs.
fn loop_homology(p: Prime, factors: Vec<MonogenicFactor>) -> AlgebraPresentation {
    let odd_poly = factors.iter().any(|f| f.is_polynomial() && f.degree % 2 == 1);
    let rule = if odd_poly { SignRule::Commutative } else { SignRule::Graded };
    algebra(Characteristic::Prime(p), factors, rule, true)
}

fn per_prime(bound: u64, mut data: impl FnMut(Prime) -> PrimeData) -> BTreeMap<Prime, PrimeData> {
    Prime::up_to(bound).into_iter().map(|p| (p, data(p))).collect()
}

pub fn sphere(n: u32, bounds: CatalogBounds) -> SpaceRecord {
    let mut r = SpaceRecord::new(format!("S^{n}"), Some(n));
    r.simply_connected = n >= 2;
    r.homogeneous = n >= 2;
    r.rational_cohomology = Some(cohomology(Characteristic::Zero, vec![square_zero(Characteristic::Zero, "x", n)]));
    r.mod_p = per_prime(bounds.prime, |p| {
        let ch = Characteristic::Prime(p);
        PrimeData {
            cohomology: Some(cohomology(ch, vec![square_zero(ch, "x", n)])),
            loop_homology: (n >= 2).then(|| loop_homology(p, vec![MonogenicFactor::polynomial("y", n - 1)])),
        }
    });
    r
}

pub fn projective(n: u32, bounds: CatalogBounds) -> SpaceRecord {
    let mut r = SpaceRecord::new(format!("CP^{n}"), Some(2 * n));
    r.homogeneous = true;
    let h = |ch| cohomology(ch, vec![MonogenicFactor::truncated("x", 2, n + 1)]);
    r.rational_cohomology = Some(h(Characteristic::Zero));
    r.mod_p = per_prime(bounds.prime, |p| PrimeData {
        cohomology: Some(h(Characteristic::Prime(p))),
        loop_homology: Some(loop_homology(
            p,
            vec![MonogenicFactor::exterior("u", 1), MonogenicFactor::polynomial("y", 2 * n)],
        )),
    });
    r
}

/// `S^{2n-1}`-bundle over `S^{2n}` with Euler class `e`, dimension `4n - 1`.
pub fn sphere_bundle(n: u32, e: i64, bounds: CatalogBounds) -> SpaceRecord {
    let mut r = SpaceRecord::new(format!("Q({},{e})", 2 * n), Some(4 * n - 1));
    r.notes.push(format!("S^{}-bundle over S^{} with Euler class {e}", 2 * n - 1, 2 * n));
    let split = |ch| cohomology(ch, vec![square_zero(ch, "a", 2 * n - 1), square_zero(ch, "b", 2 * n)]);
    let homology_sphere = |ch| cohomology(ch, vec![MonogenicFactor::exterior("x", 4 * n - 1)]);
    r.rational_cohomology = Some(if e == 0 {
        split(Characteristic::Zero)
    } else {
        homology_sphere(Characteristic::Zero)
    });
    r.mod_p = per_prime(bounds.prime, |p| {
        let ch = Characteristic::Prime(p);
        if e.unsigned_abs() % p.get() == 0 {
            PrimeData {
                cohomology: Some(split(ch)),
                loop_homology: Some(loop_homology(
                    p,
                    vec![
                        MonogenicFactor::polynomial("u", 2 * n - 2),
                        MonogenicFactor::polynomial("v", 2 * n - 1),
                    ],
                )),
            }
        } else {
            PrimeData {
                cohomology: Some(homology_sphere(ch)),
                loop_homology: Some(loop_homology(p, vec![MonogenicFactor::polynomial("y", 4 * n - 2)])),
            }
        }
    });
    r
}

/// Two-frames in `R^{2n+1}`: the sphere bundle with Euler class 2.
pub fn stiefel(n: u32, bounds: CatalogBounds) -> SpaceRecord {
    let mut r = sphere_bundle(n, 2, bounds);
    r.name = format!("V2(R^{})", 2 * n + 1);
    r.homogeneous = true;
    r.notes = vec![format!(
        "S^{}-bundle over S^{} with Euler class 2; Spin({})/Spin({})",
        2 * n - 1,
        2 * n,
        2 * n + 1,
        2 * n - 1
    )];
    r
}

/// Oriented two-planes in `R^{2n+1}`, dimension `4n - 2`.
pub fn grassmannian(n: u32, bounds: CatalogBounds) -> SpaceRecord {
    let mut r = SpaceRecord::new(format!("G2+(R^{})", 2 * n + 1), Some(4 * n - 2));
    r.homogeneous = true;
    r.notes.push(format!(
        "SO({})/(SO(2) x SO({})); mod-2 loop homology agrees with that of CP^{} x S^{}",
        2 * n + 1,
        2 * n - 1,
        n - 1,
        2 * n
    ));
    let odd = |ch| cohomology(ch, vec![MonogenicFactor::truncated("x", 2, 2 * n)]);
    r.rational_cohomology = Some(odd(Characteristic::Zero));
    r.mod_p = per_prime(bounds.prime, |p| {
        let ch = Characteristic::Prime(p);
        if p.is_two() {
            PrimeData {
                cohomology: Some(cohomology(
                    ch,
                    vec![MonogenicFactor::truncated("x", 2, n), MonogenicFactor::exterior("y", 2 * n)],
                )),
                loop_homology: Some(loop_homology(
                    p,
                    vec![
                        MonogenicFactor::exterior("u", 1),
                        MonogenicFactor::polynomial("v", 2 * n - 2),
                        MonogenicFactor::polynomial("w", 2 * n - 1),
                    ],
                )),
            }
        } else {
            PrimeData {
                cohomology: Some(odd(ch)),
                loop_homology: None,
            }
        }
    });
    r
}

fn stub(name: &str, dimension: Option<u32>, note: &str) -> SpaceRecord {
    let mut r = SpaceRecord::new(name, dimension);
    r.homogeneous = true;
    r.notes.push(note.to_string());
    r.notes
        .push("some prime makes the cohomology need two generators; no presentation is recorded".into());
    r
}

pub fn builtin_catalog() -> Vec<SpaceRecord> {
    builtin_catalog_with(CatalogBounds::default())
}

/// All records, sorted by name.
pub fn builtin_catalog_with(bounds: CatalogBounds) -> Vec<SpaceRecord> {
    let mut out = Vec::new();
    for n in 2..=bounds.family.max(2) {
        out.push(sphere(n, bounds));
        out.push(projective(n, bounds));
        out.push(stiefel(n, bounds));
        out.push(grassmannian(n, bounds));
        for e in EULER_CLASSES {
            out.push(sphere_bundle(n, e, bounds));
        }
    }
    for (name, dim, note) in STUBS {
        out.push(stub(name, dim, note));
    }
    out.sort_by(|a, b| a.name.cmp(&b.name));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LookupError {
    #[error("unknown space {name:?}{}", suggest(.suggestions))]
    Unknown { name: String, suggestions: Vec<String> },
    #[error("{name} is outside the family bound n <= {bound}")]
    OutsideBound { name: String, bound: u32 },
    #[error("{0}")]
    Invalid(String),
}

fn suggest(s: &[String]) -> String {
    if s.is_empty() {
        String::new()
    } else {
        format!("; did you mean {}?", s.join(", "))
    }
}

enum Family {
    Sphere(u32),
    Projective(u32),
    Bundle(u32, i64),
    Stiefel(u32),
    Grassmannian(u32),
}

fn parse_family(name: &str) -> Result<Option<Family>, LookupError> {
    let invalid = |m: String| LookupError::Invalid(format!("{name}: {m}"));
    let int = |s: &str| s.parse::<u32>().map_err(|_| invalid(format!("{s:?} is not a non-negative integer")));
    let odd_half = |s: &str| -> Result<u32, LookupError> {
        let m = int(s)?;
        if m % 2 == 0 || m < 5 {
            return Err(invalid("expected R^(2n+1) with n >= 2".into()));
        }
        Ok((m - 1) / 2)
    };
    if let Some(rest) = name.strip_prefix("CP^") {
        let n = int(rest)?;
        return if n >= 2 { Ok(Some(Family::Projective(n))) } else { Err(invalid("n >= 2".into())) };
    }
    if let Some(rest) = name.strip_prefix("S^") {
        let n = int(rest)?;
        return if n >= 2 { Ok(Some(Family::Sphere(n))) } else { Err(invalid("n >= 2".into())) };
    }
    if let Some(inner) = name.strip_prefix("Q(").and_then(|s| s.strip_suffix(')')) {
        let Some((m, e)) = inner.split_once(',') else {
            return Err(invalid("expected Q(2n,e)".into()));
        };
        let m = int(m)?;
        let e: i64 = e.parse().map_err(|_| invalid(format!("{e:?} is not an integer")))?;
        if m % 2 == 1 || m < 4 {
            return Err(invalid("expected Q(2n,e) with n >= 2".into()));
        }
        return Ok(Some(Family::Bundle(m / 2, e)));
    }
    if let Some(inner) = name.strip_prefix("V2(R^").and_then(|s| s.strip_suffix(')')) {
        return Ok(Some(Family::Stiefel(odd_half(inner)?)));
    }
    if let Some(inner) = name.strip_prefix("G2+(R^").and_then(|s| s.strip_suffix(')')) {
        return Ok(Some(Family::Grassmannian(odd_half(inner)?)));
    }
    Ok(None)
}

/// Finds a record by name. Family members are instantiated on demand within
/// the family bound, so any Euler class may be looked up.
pub fn lookup(name: &str, bounds: CatalogBounds) -> Result<SpaceRecord, LookupError> {
    let key: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some((n, d, note)) = STUBS.iter().find(|s| s.0 == key) {
        return Ok(stub(n, *d, note));
    }
    let family = parse_family(&key)?;
    let n = match &family {
        None => None,
        Some(Family::Sphere(n) | Family::Projective(n) | Family::Bundle(n, _) | Family::Stiefel(n) | Family::Grassmannian(n)) => Some(*n),
    };
    if let Some(n) = n {
        if n > bounds.family {
            return Err(LookupError::OutsideBound {
                name: key,
                bound: bounds.family,
            });
        }
    }
    match family {
        Some(Family::Sphere(n)) => Ok(sphere(n, bounds)),
        Some(Family::Projective(n)) => Ok(projective(n, bounds)),
        Some(Family::Bundle(n, e)) => Ok(sphere_bundle(n, e, bounds)),
        Some(Family::Stiefel(n)) => Ok(stiefel(n, bounds)),
        Some(Family::Grassmannian(n)) => Ok(grassmannian(n, bounds)),
        None => {
            let mut scored: Vec<(usize, String)> = builtin_catalog_with(bounds)
                .into_iter()
                .map(|r| (strsim::levenshtein(&key.to_lowercase(), &r.name.to_lowercase()), r.name))
                .filter(|(d, _)| *d <= 3)
                .collect();
            scored.sort();
            Err(LookupError::Unknown {
                name: key,
                suggestions: scored.into_iter().take(3).map(|(_, s)| s).collect(),
            })
        }
    }
}
