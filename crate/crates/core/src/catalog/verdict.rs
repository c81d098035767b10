//! Rule-based derivation of geodesic verdicts.
//!
//! Rules, in order:
//! - R1: not simply connected, so no criterion applies.
//! - R2: rational cohomology needs two generators.
//! - R3: at a prime, loop homology is elliptic and mod-p cohomology needs two
//!   generators.
//! - R4: at a prime, the effective centre of loop homology contains a
//!   polynomial algebra on at least two generators.
//! - R5: nothing fired.
//!
//! Every computed fact is obtained from the algebra, homalg and spectral
//! modules. Theorems whose proofs are not computations are tagged as axioms.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{PrimeData, SpaceRecord};
use crate::algebra::{effective_center, AlgebraPresentation, MonogenicFactor};
use crate::error::{Error, Result};
use crate::field::Prime;
use crate::homalg::{depth, is_elliptic, is_gorenstein, DepthResult};
use crate::series::PoincareSeries;
use crate::spectral::acting_pages;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    R1,
    R2,
    R3,
    R4,
    R5,
}

impl Rule {
    pub fn summary(self) -> &'static str {
        match self {
            Rule::R1 => "not simply connected",
            Rule::R2 => "rational cohomology is not one-generated",
            Rule::R3 => "elliptic at p and mod-p cohomology is not one-generated",
            Rule::R4 => "effective centre of loop homology has polynomial rank at least 2",
            Rule::R5 => "no rule applies",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Theorems and computations a step may rest on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Citation {
    FundamentalGroupScope,
    SullivanViguePoirrier,
    #[serde(rename = "mccleary")]
    McCleary,
    HomogeneousEllipticity,
    EllipticEquivalences,
    EllipticStructure,
    EffectiveCentre,
    CentralPowerSurvival,
    CentreTransfer,
    GromollMeyer,
    NoRuleApplies,
}

impl Citation {
    /// Statements taken on trust: their proofs are not computations.
    pub fn is_axiom(self) -> bool {
        matches!(
            self,
            Citation::SullivanViguePoirrier
                | Citation::McCleary
                | Citation::HomogeneousEllipticity
                | Citation::EllipticStructure
                | Citation::GromollMeyer
        )
    }

    /// Short name: the statement up to its first colon.
    pub fn title(self) -> &'static str {
        self.text().split(':').next().unwrap_or_default()
    }

    pub fn text(self) -> &'static str {
        match self {
            Citation::FundamentalGroupScope => {
                "scope: the criteria need a simply connected closed manifold; a finite fundamental group \
                 is handled by passing to the universal cover, which is a different record"
            }
            Citation::SullivanViguePoirrier => {
                "Sullivan-Vigue-Poirrier theorem: if H^*(M;Q) is not generated by one element, \
                 then H_*(LM;Q) is doubly infinite"
            }
            Citation::McCleary => {
                "McCleary's theorem: if H^*(X;F_p) is not generated by one element and X is simply connected, \
                 then H_*(Omega X;F_p) is doubly infinite"
            }
            Citation::HomogeneousEllipticity => {
                "Felix-Halperin-Thomas: G/K with G simply connected compact and K connected closed \
                 is F_p-elliptic for every prime p"
            }
            Citation::EllipticEquivalences => {
                "Felix-Halperin-Thomas equivalences: a connected cocommutative Hopf algebra of finite type \
                 and finite depth is elliptic iff nilpotent iff of polynomial growth iff Gorenstein"
            }
            Citation::EllipticStructure => {
                "structure of elliptic Hopf algebras: an elliptic Hopf algebra over F_p is a finitely generated \
                 free module over a central polynomial subalgebra, so it is doubly infinite exactly when its \
                 centre contains a polynomial algebra on two generators"
            }
            Citation::EffectiveCentre => {
                "effective centre: even polynomial generators and squares of odd polynomial generators that are \
                 graded-central, with independent monomials"
            }
            Citation::CentralPowerSurvival => {
                "central power survival: a central x in H_*(Omega M;F_p) = E_2^{0,*} has x^(p^m) an infinite cycle, \
                 m counting the pages r in [2, n] with H^r(M;F_p) nonzero"
            }
            Citation::CentreTransfer => {
                "centre transfer: HL_*(M;F_p) contains a polynomial algebra on k generators iff the centre of \
                 H_*(Omega M;F_p) does"
            }
            Citation::GromollMeyer => {
                "Gromoll-Meyer theorem: if H_*(LM;F) is doubly infinite for some field F, every metric on the \
                 simply connected closed manifold M has infinitely many geometrically distinct closed geodesics"
            }
            Citation::NoRuleApplies => "no rule applies to the available data",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fact {
    pub key: String,
    pub value: String,
}

fn fact(key: impl Into<String>, value: impl fmt::Display) -> Fact {
    Fact {
        key: key.into(),
        value: value.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub rule: Rule,
    pub prime: Option<u64>,
    pub citation: Citation,
    pub axiom: bool,
    pub claim: String,
    pub facts: Vec<Fact>,
}

impl Step {
    fn new(rule: Rule, prime: Option<Prime>, citation: Citation, claim: impl Into<String>) -> Self {
        Step {
            rule,
            prime: prime.map(Prime::get),
            citation,
            axiom: citation.is_axiom(),
            claim: claim.into(),
            facts: Vec::new(),
        }
    }

    fn with(mut self, facts: Vec<Fact>) -> Self {
        self.facts = facts;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    InfinitelyManyGeodesics,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnknownReason {
    /// The data is there but no criterion decides the question.
    MathematicallyOpen,
    /// A criterion might apply but the record lacks the (co)homology it needs.
    DataMissing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub space: String,
    pub conclusion: Conclusion,
    pub unknown_reason: Option<UnknownReason>,
    pub justification: Vec<Step>,
}

impl Verdict {
    pub fn rules_fired(&self) -> BTreeSet<Rule> {
        self.justification.iter().map(|s| s.rule).collect()
    }

    /// Every route of a positive verdict ends with the Gromoll-Meyer theorem.
    pub fn chain_is_complete(&self) -> bool {
        match self.conclusion {
            Conclusion::Unknown => true,
            Conclusion::InfinitelyManyGeodesics => {
                let mut last: Option<&Step> = None;
                for s in &self.justification {
                    if let Some(prev) = last {
                        if (prev.rule, prev.prime) != (s.rule, s.prime) && prev.citation != Citation::GromollMeyer {
                            return false;
                        }
                    }
                    last = Some(s);
                }
                last.is_some_and(|s| s.citation == Citation::GromollMeyer)
            }
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "space: {}", self.space)?;
        match (self.conclusion, self.unknown_reason) {
            (Conclusion::InfinitelyManyGeodesics, _) => writeln!(f, "conclusion: infinitely many closed geodesics")?,
            (Conclusion::Unknown, Some(UnknownReason::DataMissing)) => writeln!(f, "conclusion: unknown (data missing)")?,
            (Conclusion::Unknown, _) => writeln!(f, "conclusion: unknown (open for this data)")?,
        }
        for s in &self.justification {
            match s.prime {
                Some(p) => write!(f, "[{} p={}] ", s.rule, p)?,
                None => write!(f, "[{}] ", s.rule)?,
            }
            writeln!(f, "{}", s.claim)?;
            writeln!(f, "    by: {}{}", if s.axiom { "AXIOM " } else { "" }, s.citation.title())?;
            for fa in &s.facts {
                writeln!(f, "    {} = {}", fa.key, fa.value)?;
            }
        }
        let mut cited = Vec::new();
        for s in &self.justification {
            if !cited.contains(&s.citation) {
                cited.push(s.citation);
            }
        }
        writeln!(f, "statements:")?;
        for c in cited {
            writeln!(f, "  {}{}", if c.is_axiom() { "AXIOM " } else { "" }, c.text())?;
        }
        Ok(())
    }
}

/// Generators sorted by degree then name, so reports ignore factor order.
fn generator_list(a: &AlgebraPresentation) -> String {
    let mut gens: Vec<&MonogenicFactor> = a.factors().iter().collect();
    gens.sort_by(|x, y| (x.degree, &x.name).cmp(&(y.degree, &y.name)));
    let list: Vec<String> = gens.iter().map(|g| format!("{}_{}", g.name, g.degree)).collect();
    if list.is_empty() {
        "none".into()
    } else {
        list.join(", ")
    }
}

fn sorted_factors(a: &AlgebraPresentation) -> String {
    let mut parts: Vec<(u32, String, String)> =
        a.factors().iter().map(|f| (f.degree, f.name.clone(), f.to_string())).collect();
    parts.sort();
    let parts: Vec<String> = parts.into_iter().map(|(_, _, s)| s).collect();
    if parts.is_empty() {
        "F".into()
    } else {
        parts.join(" (x) ")
    }
}

/// One-generation decided twice: structurally, and on the truncated oracle.
fn one_generated_checked(h: &AlgebraPresentation, top: u32) -> Result<(bool, Vec<Fact>)> {
    let structural = h.one_generated();
    let mut facts = vec![
        fact("generators", generator_list(h)),
        fact("minimal generator count", h.generator_count()),
    ];
    if h.prime().is_some() {
        let oracle = h.to_finite(top.max(1))?.one_generated();
        facts.push(fact("one-generated (monomial oracle)", oracle));
        if oracle.known() != Some(structural) {
            return Err(Error::InvalidRecord(format!(
                "generator count of {} disagrees with the monomial oracle",
                sorted_factors(h)
            )));
        }
    }
    Ok((structural, facts))
}

fn rational_route(s: &SpaceRecord, n: u32) -> Result<Option<Vec<Step>>> {
    let Some(h) = &s.rational_cohomology else { return Ok(None) };
    let (one, mut facts) = one_generated_checked(h, n)?;
    if one {
        return Ok(None);
    }
    facts.insert(0, fact("H^*(M;Q)", sorted_factors(h)));
    Ok(Some(vec![
        Step::new(Rule::R2, None, Citation::SullivanViguePoirrier, "H_*(LM;Q) is doubly infinite").with(facts),
        Step::new(Rule::R2, None, Citation::GromollMeyer, "infinitely many closed geodesics for every metric"),
    ]))
}

fn ellipticity_step(s: &SpaceRecord, p: Prime, data: &PrimeData) -> Result<Option<Step>> {
    if let Some(l) = data.loop_homology.as_ref().filter(|l| l.is_hopf()) {
        let report = is_elliptic(l)?;
        if report.elliptic {
            let k0 = l.poincare_series().growth_class().k0;
            let depth = match depth(l) {
                DepthResult::Finite(d) => d.to_string(),
                DepthResult::Infinite => "infinite".into(),
            };
            let g = is_gorenstein(l);
            let socle = g.socle_bidegree.map(|(a, b)| format!("({a}, {b})")).unwrap_or_else(|| "none".into());
            let facts = vec![
                fact("H_*(Omega M;F_p)", sorted_factors(l)),
                fact("finite depth", report.finite_depth),
                fact("depth", depth),
                fact("polynomial growth exponent K0", k0),
                fact("Gorenstein", g.is_gorenstein),
                fact("Gorenstein socle", socle),
                fact("nilpotent", report.nilpotent),
                fact("elliptic", report.elliptic),
            ];
            return Ok(Some(
                Step::new(Rule::R3, Some(p), Citation::EllipticEquivalences, "H_*(Omega M;F_p) is elliptic").with(facts),
            ));
        }
    }
    if s.homogeneous {
        return Ok(Some(Step::new(
            Rule::R3,
            Some(p),
            Citation::HomogeneousEllipticity,
            "H_*(Omega M;F_p) is elliptic",
        )));
    }
    Ok(None)
}

fn growth_route(s: &SpaceRecord, n: u32, p: Prime, data: &PrimeData) -> Result<Option<Vec<Step>>> {
    let Some(h) = &data.cohomology else { return Ok(None) };
    let (one, mut facts) = one_generated_checked(h, n)?;
    if one {
        return Ok(None);
    }
    let Some(elliptic) = ellipticity_step(s, p, data)? else { return Ok(None) };
    facts.insert(0, fact("H^*(M;F_p)", sorted_factors(h)));
    if let Some(l) = &data.loop_homology {
        let growth = l.poincare_series().growth_class();
        if l.is_infinite_tensor() || growth.k0 < 2 {
            return Err(Error::InvalidRecord(format!(
                "{}: loop homology at p = {p} has growth exponent {} but the cohomology needs two generators",
                s.name, growth.k0
            )));
        }
        facts.push(fact("loop homology growth exponent K0 (cross-check)", growth.k0));
    }
    Ok(Some(vec![
        elliptic,
        Step::new(Rule::R3, Some(p), Citation::McCleary, "H_*(Omega M;F_p) is doubly infinite").with(facts),
        Step::new(
            Rule::R3,
            Some(p),
            Citation::EllipticStructure,
            "the centre of H_*(Omega M;F_p) contains a polynomial algebra on two generators",
        ),
        Step::new(
            Rule::R3,
            Some(p),
            Citation::CentreTransfer,
            "HL_*(M;F_p) contains a polynomial algebra on two generators, so H_*(LM;F_p) is doubly infinite",
        ),
        Step::new(Rule::R3, Some(p), Citation::GromollMeyer, "infinitely many closed geodesics for every metric"),
    ]))
}

fn centre_route(n: u32, p: Prime, data: &PrimeData) -> Result<Option<Vec<Step>>> {
    let Some(l) = &data.loop_homology else { return Ok(None) };
    if l.is_infinite_tensor() {
        return Ok(None);
    }
    let maxdeg = l.factors().iter().map(|f| f.degree).max().unwrap_or(1);
    let cutoff = (4 * maxdeg).max(8);
    let ec = effective_center(&l.to_finite(cutoff)?);
    let rank = ec.polynomial_rank();
    if rank < 2 {
        return Ok(None);
    }
    let mut elems = ec.elements.clone();
    elems.sort_by(|a, b| (a.degree, &a.generator).cmp(&(b.degree, &b.generator)));
    let label = |g: &str, power: u32| if power == 1 { g.to_string() } else { format!("{g}^{power}") };
    let listed: Vec<String> = elems.iter().map(|c| format!("{} ({})", label(&c.generator, c.power), c.degree)).collect();
    let structural = l.effective_center().len();
    let centre_facts = vec![
        fact("H_*(Omega M;F_p)", sorted_factors(l)),
        fact("central polynomial generators (degree)", listed.join(", ")),
        fact("polynomial rank", rank),
        fact("checked through degree", cutoff),
        fact("structural count (cross-check)", structural),
    ];

    let (m_source, nonzero): (&str, BTreeSet<u32>) = match &data.cohomology {
        Some(h) => {
            let dims = h.poincare_series().coefficients_u64(n as usize);
            ("H^*(M;F_p)", (0..=n).filter(|&d| dims[d as usize] != 0).collect())
        }
        // Without cohomology every page in [2, n - 2] and n may act.
        None => ("simply connected bound", (2..=n.saturating_sub(2)).chain([n]).collect()),
    };
    let m = acting_pages(n, &nonzero);
    let bound = n.saturating_sub(2);
    let exponent = BigUint::from(p.get()).pow(m);
    let degrees: Vec<String> = nonzero.iter().filter(|&&d| (2..=n).contains(&d)).map(u32::to_string).collect();
    let surviving: Vec<String> = elems
        .iter()
        .map(|c| format!("({})^({p}^{m}) ({})", label(&c.generator, c.power), &exponent * c.degree))
        .collect();
    let survival_facts = vec![
        fact("pages that can act", format!("[{}] from {m_source}", degrees.join(", "))),
        fact("survival exponent", format!("{p}^{m}")),
        fact("bound", format!("{p}^{bound}")),
        fact("infinite cycles", surviving.join(", ")),
    ];

    // K0 of a polynomial algebra does not depend on the generator degrees.
    let poly_degs: Vec<u32> = elems.iter().map(|c| c.degree).collect();
    let growth = PoincareSeries::new(vec![], poly_degs, vec![])?.growth_class();
    let transfer_facts = vec![
        fact("polynomial subalgebra of HL_*(M;F_p), growth exponent K0", growth.k0),
        fact("doubly infinite", growth.is_doubly_infinite()),
    ];
    if !growth.is_doubly_infinite() || m > bound {
        return Err(Error::InvalidRecord(format!(
            "centre route at p = {p} produced exponent {p}^{m} (bound {p}^{bound}) and growth {}",
            growth.k0
        )));
    }
    Ok(Some(vec![
        Step::new(
            Rule::R4,
            Some(p),
            Citation::EffectiveCentre,
            format!("the centre of H_*(Omega M;F_p) contains a polynomial algebra on {rank} generators"),
        )
        .with(centre_facts),
        Step::new(
            Rule::R4,
            Some(p),
            Citation::CentralPowerSurvival,
            "powers of the central generators survive to E_infinity",
        )
        .with(survival_facts),
        Step::new(
            Rule::R4,
            Some(p),
            Citation::CentreTransfer,
            format!("HL_*(M;F_p) contains a polynomial algebra on {rank} generators, so H_*(LM;F_p) is doubly infinite"),
        )
        .with(transfer_facts),
        Step::new(Rule::R4, Some(p), Citation::GromollMeyer, "infinitely many closed geodesics for every metric"),
    ]))
}

/// Applies R1 to R5. Every route that fires contributes its full chain.
pub fn verdict(s: &SpaceRecord) -> Result<Verdict> {
    s.validate()?;
    let unknown = |reason, steps| Verdict {
        space: s.name.clone(),
        conclusion: Conclusion::Unknown,
        unknown_reason: Some(reason),
        justification: steps,
    };
    if !s.simply_connected {
        let step = Step::new(Rule::R1, None, Citation::FundamentalGroupScope, "not simply connected");
        return Ok(unknown(UnknownReason::MathematicallyOpen, vec![step]));
    }
    let Some(n) = s.dimension else {
        let step = Step::new(Rule::R5, None, Citation::NoRuleApplies, "no dimension or (co)homology data recorded")
            .with(vec![fact("homogeneous", s.homogeneous)]);
        return Ok(unknown(UnknownReason::DataMissing, vec![step]));
    };

    let mut steps = Vec::new();
    if let Some(r2) = rational_route(s, n)? {
        steps.extend(r2);
    }
    for (&p, data) in &s.mod_p {
        if let Some(r3) = growth_route(s, n, p, data)? {
            steps.extend(r3);
        }
    }
    for (&p, data) in &s.mod_p {
        if let Some(r4) = centre_route(n, p, data)? {
            steps.extend(r4);
        }
    }
    if !steps.is_empty() {
        return Ok(Verdict {
            space: s.name.clone(),
            conclusion: Conclusion::InfinitelyManyGeodesics,
            unknown_reason: None,
            justification: steps,
        });
    }

    let mut facts = Vec::new();
    let rational_trivial = match &s.rational_cohomology {
        None => {
            facts.push(fact("rational cohomology", "not recorded"));
            true
        }
        Some(h) => {
            facts.push(fact("rational cohomology generators", generator_list(h)));
            h.one_generated()
        }
    };
    for (p, data) in &s.mod_p {
        if let Some(h) = &data.cohomology {
            facts.push(fact(format!("p={p} cohomology generators"), generator_list(h)));
        }
        if let Some(l) = &data.loop_homology {
            let maxdeg = l.factors().iter().map(|f| f.degree).max().unwrap_or(1);
            let rank = effective_center(&l.to_finite((4 * maxdeg).max(8))?).polynomial_rank();
            facts.push(fact(format!("p={p} effective centre polynomial rank"), rank));
        }
    }
    let reason = if !s.has_mod_p_data() && rational_trivial {
        UnknownReason::DataMissing
    } else {
        UnknownReason::MathematicallyOpen
    };
    let step = Step::new(Rule::R5, None, Citation::NoRuleApplies, "no rule applies").with(facts);
    Ok(unknown(reason, vec![step]))
}

/// Verdicts for many records, computed in parallel and returned sorted by name.
pub fn verdicts(records: &[SpaceRecord]) -> Vec<(String, Result<Verdict>)> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(records.len().max(1));
    let chunk = records.len().div_ceil(threads).max(1);
    let mut out: Vec<(String, Result<Verdict>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = records
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(|r| (r.name.clone(), verdict(r))).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("verdict worker panicked"))
            .collect()
    });
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}
