//! Report types shared by the text and JSON outputs.

use std::fmt::{self, Write as _};

use closedgeo::catalog::{Citation, Conclusion, UnknownReason, Verdict};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    /// The arguments after the program name.
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub results: Results,
    pub exit_code: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Results {
    Series(SeriesReport),
    Depth(DepthReport),
    Elliptic(EllipticReport),
    SpectralSequence(SpectralReport),
    Verdicts { verdicts: Vec<VerdictEntry> },
    /// Same content as `verdicts`; the text form prints one line per space.
    Catalog { verdicts: Vec<VerdictEntry> },
    Selfcheck(SelfcheckReport),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Growth {
    pub tag: String,
    pub k0: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub presentation: String,
    pub characteristic: u64,
    /// `series` for tensor products, `monomial_basis` for presentations with
    /// relations.
    pub method: String,
    pub max_degree: u32,
    /// Dimensions in degrees `0..=max_degree`.
    pub coefficients: Vec<u64>,
    pub growth: Option<Growth>,
    pub top_degree: Option<u64>,
    pub total_dimension: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtEntry {
    pub s: u32,
    pub t: i64,
    pub dim: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthReport {
    pub presentation: String,
    /// `None` when Ext vanishes identically.
    pub depth: Option<u32>,
    pub ext: Vec<ExtEntry>,
    pub gorenstein: bool,
    pub socle: Option<(u32, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticReport {
    pub presentation: String,
    pub finite_depth: bool,
    pub elliptic_by_definition: bool,
    pub nilpotent: bool,
    pub polynomial_growth: bool,
    pub gorenstein: bool,
    pub lower_central_series: String,
    pub elliptic: bool,
    pub conditions_agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageSummary {
    pub r: u32,
    pub nonzero_differential: bool,
    /// Generator images of the differential, as `(source, image)`.
    pub images: Vec<(String, String)>,
    pub total_dimension: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BidegreeDim {
    pub col: u32,
    pub t: u32,
    pub dim: u64,
    /// False when differentials from above the truncation could still
    /// change the entry.
    pub known: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub element: String,
    /// `certified`, `indeterminate` or `not_central`.
    pub status: String,
    pub exponent: Option<u64>,
    pub bound: Option<u64>,
    /// Pages on which the element was raised to its `p`-th power.
    pub raised_on: Vec<u32>,
    pub required_truncation: Option<u32>,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationSummary {
    pub holds: bool,
    pub nilpotency_order: usize,
    pub witness: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub prime: u64,
    pub dimension: u32,
    pub truncation: u32,
    pub cohomology: String,
    pub loop_homology: String,
    pub pages: Vec<PageSummary>,
    pub e_infinity: Vec<BidegreeDim>,
    pub certificates: Vec<CertificateReport>,
    pub filtration: FiltrationSummary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Statement {
    pub citation: Citation,
    pub axiom: bool,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictEntry {
    pub verdict: Verdict,
    /// Each cited statement once, in order of first use.
    pub statements: Vec<Statement>,
}

impl VerdictEntry {
    pub fn new(verdict: Verdict) -> Self {
        let mut statements: Vec<Statement> = Vec::new();
        for s in &verdict.justification {
            if !statements.iter().any(|x| x.citation == s.citation) {
                statements.push(Statement {
                    citation: s.citation,
                    axiom: s.citation.is_axiom(),
                    text: s.citation.text().to_string(),
                });
            }
        }
        VerdictEntry { verdict, statements }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub cases: u32,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfcheckReport {
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl SelfcheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// 1 when the space is Unknown for lack of data.
pub fn verdict_exit_code(v: &Verdict) -> i32 {
    match (v.conclusion, v.unknown_reason) {
        (Conclusion::Unknown, Some(UnknownReason::DataMissing)) => 1,
        _ => 0,
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "command: closedgeo {}", self.command.join(" "))?;
        for i in &self.inputs {
            writeln!(f, "input: {} (sha256 {})", i.path, i.sha256)?;
        }
        match &self.results {
            Results::Series(s) => write_series(f, s),
            Results::Depth(d) => write_depth(f, d),
            Results::Elliptic(e) => write_elliptic(f, e),
            Results::SpectralSequence(s) => write_spectral(f, s),
            Results::Verdicts { verdicts } => {
                for (i, v) in verdicts.iter().enumerate() {
                    if i > 0 {
                        writeln!(f)?;
                    }
                    write!(f, "{}", v.verdict)?;
                }
                Ok(())
            }
            Results::Catalog { verdicts } => {
                for v in verdicts {
                    writeln!(f, "{}", summary_line(&v.verdict))?;
                }
                Ok(())
            }
            Results::Selfcheck(s) => write_selfcheck(f, s),
        }
    }
}

fn summary_line(v: &Verdict) -> String {
    let conclusion = match (v.conclusion, v.unknown_reason) {
        (Conclusion::InfinitelyManyGeodesics, _) => "infinitely many closed geodesics",
        (Conclusion::Unknown, Some(UnknownReason::DataMissing)) => "unknown (data missing)",
        (Conclusion::Unknown, _) => "unknown (open for this data)",
    };
    let mut routes: Vec<String> = Vec::new();
    for s in &v.justification {
        let r = match s.prime {
            Some(p) => format!("{} p={p}", s.rule),
            None => s.rule.to_string(),
        };
        if !routes.contains(&r) {
            routes.push(r);
        }
    }
    format!("{}: {conclusion} [{}]", v.space, routes.join(", "))
}

fn write_series(f: &mut fmt::Formatter<'_>, s: &SeriesReport) -> fmt::Result {
    writeln!(f, "presentation: {}", s.presentation)?;
    writeln!(f, "characteristic: {}", s.characteristic)?;
    writeln!(f, "method: {}", s.method)?;
    let coeffs: Vec<String> = s.coefficients.iter().map(u64::to_string).collect();
    writeln!(f, "dimensions 0..={}: [{}]", s.max_degree, coeffs.join(", "))?;
    match &s.growth {
        Some(g) => writeln!(f, "growth: {} (K0 = {})", g.tag, g.k0)?,
        None => writeln!(f, "growth: not computed for presentations with relations")?,
    }
    if let Some(top) = s.top_degree {
        writeln!(f, "top degree: {top}")?;
    }
    if let Some(total) = &s.total_dimension {
        writeln!(f, "total dimension: {total}")?;
    }
    Ok(())
}

fn write_depth(f: &mut fmt::Formatter<'_>, d: &DepthReport) -> fmt::Result {
    writeln!(f, "presentation: {}", d.presentation)?;
    match d.depth {
        Some(n) => writeln!(f, "depth: {n}")?,
        None => writeln!(f, "depth: infinite")?,
    }
    let mut ext = String::new();
    for (i, e) in d.ext.iter().enumerate() {
        if i > 0 {
            ext.push_str(", ");
        }
        let _ = write!(ext, "({},{}) -> {}", e.s, e.t, e.dim);
    }
    writeln!(f, "Ext(F, A): {{{ext}}}")?;
    writeln!(f, "Gorenstein: {}", yes_no(d.gorenstein))?;
    if let Some((s, t)) = d.socle {
        writeln!(f, "socle bidegree: ({s}, {t})")?;
    }
    Ok(())
}

fn write_elliptic(f: &mut fmt::Formatter<'_>, e: &EllipticReport) -> fmt::Result {
    writeln!(f, "presentation: {}", e.presentation)?;
    writeln!(f, "finite depth: {}", yes_no(e.finite_depth))?;
    writeln!(f, "finitely generated and nilpotent: {}", yes_no(e.elliptic_by_definition))?;
    writeln!(f, "nilpotent: {} (lower central series: {})", yes_no(e.nilpotent), e.lower_central_series)?;
    writeln!(f, "polynomial growth: {}", yes_no(e.polynomial_growth))?;
    writeln!(f, "Gorenstein: {}", yes_no(e.gorenstein))?;
    writeln!(f, "elliptic: {}", yes_no(e.elliptic))?;
    writeln!(f, "conditions agree: {}", yes_no(e.conditions_agree))
}

fn write_spectral(f: &mut fmt::Formatter<'_>, s: &SpectralReport) -> fmt::Result {
    writeln!(f, "E_2 = H^*(M;F_{p}) (x) H_*(Omega M;F_{p}), n = {}, s + t <= {}", s.dimension, s.truncation, p = s.prime)?;
    writeln!(f, "cohomology: {}", s.cohomology)?;
    writeln!(f, "loop homology: {}", s.loop_homology)?;
    for page in &s.pages {
        write!(f, "E_{}: total dimension {}", page.r, page.total_dimension)?;
        if page.nonzero_differential {
            let images: Vec<String> = page.images.iter().map(|(a, b)| format!("d({a}) = {b}")).collect();
            write!(f, "; {}", images.join(", "))?;
        }
        writeln!(f)?;
    }
    writeln!(f, "E_infinity:")?;
    for e in &s.e_infinity {
        write!(f, "    E^{{{},{}}} = {}", -i64::from(e.col), e.t, e.dim)?;
        if !e.known {
            write!(f, " (affected by the truncation)")?;
        }
        writeln!(f)?;
    }
    for c in &s.certificates {
        write!(f, "certificate {}: {}", c.element, c.status)?;
        if let (Some(e), Some(b)) = (c.exponent, c.bound) {
            write!(f, ", exponent {e} <= {b}")?;
        }
        if !c.raised_on.is_empty() {
            let pages: Vec<String> = c.raised_on.iter().map(u32::to_string).collect();
            write!(f, ", raised on pages {}", pages.join(", "))?;
        }
        if let Some(t) = c.required_truncation {
            write!(f, ", needs --truncate {t}")?;
        }
        if let Some(d) = &c.detail {
            write!(f, " ({d})")?;
        }
        writeln!(f)?;
    }
    writeln!(
        f,
        "filtration check: {}, longest nonzero product of positive-column classes: {}",
        if s.filtration.holds { "holds" } else { "fails" },
        s.filtration.nilpotency_order
    )?;
    if !s.filtration.witness.is_empty() {
        writeln!(f, "    witness: {}", s.filtration.witness.join(" * "))?;
    }
    Ok(())
}

fn write_selfcheck(f: &mut fmt::Formatter<'_>, s: &SelfcheckReport) -> fmt::Result {
    writeln!(f, "seed: {}", s.seed)?;
    for c in &s.checks {
        writeln!(
            f,
            "{} {} ({} cases): {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.cases,
            c.detail
        )?;
    }
    Ok(())
}
