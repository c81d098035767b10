//! TOML documents for presentations, space records and differentials.
//!
//! Unknown keys are rejected. Every error carries the file path and a
//! 1-based line and column.

use std::collections::BTreeMap;
use std::ops::Range;

use serde::Deserialize;
use toml::Spanned;

use crate::algebra::{AlgebraPresentation, FiniteGenerator, FinitePresentation, MonogenicFactor, MultiplicationRule, SignRule};
use crate::catalog::{PrimeData, SpaceRecord};
use crate::error::{Error, Result};
use crate::field::{Characteristic, Prime};
use crate::spectral::DifferentialInput;

/// Default degree cutoff for presentations with relations.
pub const DEFAULT_CUTOFF: u32 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
enum KindDoc {
    Exterior,
    Polynomial,
    Truncated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RuleDoc {
    Graded,
    Commutative,
    Free,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorDoc {
    name: String,
    degree: u32,
    kind: KindDoc,
    height: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresentationDoc {
    prime: Option<Spanned<u64>>,
    sign_rule: Option<Spanned<RuleDoc>>,
    #[serde(default)]
    hopf: bool,
    #[serde(default)]
    infinite_tensor: bool,
    cutoff: Option<Spanned<u32>>,
    #[serde(default)]
    generators: Vec<Spanned<GeneratorDoc>>,
    #[serde(default)]
    relations: Vec<Spanned<String>>,
}

/// A parsed presentation file.
#[derive(Debug, Clone)]
pub enum Presentation {
    /// Tensor product of monogenic factors.
    Structured(AlgebraPresentation),
    /// Generators and relations, evaluated below a cutoff.
    Generic(FinitePresentation),
}

impl Presentation {
    pub fn structured(&self) -> Option<&AlgebraPresentation> {
        match self {
            Presentation::Structured(a) => Some(a),
            Presentation::Generic(_) => None,
        }
    }
}

struct Source<'a> {
    path: &'a str,
    text: &'a str,
}

impl Source<'_> {
    fn position(&self, offset: usize) -> (usize, usize) {
        let offset = offset.min(self.text.len());
        let before = &self.text[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, column)
    }

    fn error(&self, offset: usize, message: impl Into<String>) -> Error {
        let (line, column) = self.position(offset);
        Error::Parse {
            path: self.path.to_string(),
            line,
            column,
            message: message.into(),
        }
    }

    fn at(&self, span: Range<usize>, message: impl Into<String>) -> Error {
        self.error(span.start, message)
    }

    fn parse<T: for<'de> Deserialize<'de>>(&self) -> Result<T> {
        toml::from_str(self.text).map_err(|e| {
            let offset = e.span().map_or(0, |s| s.start);
            self.error(offset, e.message().trim().to_string())
        })
    }
}

fn factor(src: &Source, g: &Spanned<GeneratorDoc>) -> Result<MonogenicFactor> {
    let doc = g.get_ref();
    match (doc.kind, doc.height) {
        (KindDoc::Exterior, None) => Ok(MonogenicFactor::exterior(&doc.name, doc.degree)),
        (KindDoc::Polynomial, None) => Ok(MonogenicFactor::polynomial(&doc.name, doc.degree)),
        (KindDoc::Truncated, Some(h)) => Ok(MonogenicFactor::truncated(&doc.name, doc.degree, h)),
        (KindDoc::Truncated, None) => Err(src.at(g.span(), format!("generator {}: truncated needs a height", doc.name))),
        (_, Some(_)) => Err(src.at(g.span(), format!("generator {}: only truncated generators take a height", doc.name))),
    }
}

fn characteristic(src: &Source, doc: &PresentationDoc, inherited: Option<Characteristic>) -> Result<Characteristic> {
    match (&doc.prime, inherited) {
        (None, Some(c)) => Ok(c),
        (None, None) => Err(src.error(0, "missing key `prime`")),
        (Some(p), inherited) => {
            let c = match *p.get_ref() {
                0 => Characteristic::Zero,
                v => Characteristic::Prime(Prime::new(v).map_err(|e| src.at(p.span(), e.to_string()))?),
            };
            if inherited.is_some_and(|i| i != c) {
                return Err(src.at(p.span(), "prime differs from the enclosing section"));
            }
            Ok(c)
        }
    }
}

fn build(src: &Source, doc: PresentationDoc, inherited: Option<Characteristic>) -> Result<Presentation> {
    let ch = characteristic(src, &doc, inherited)?;
    let factors = doc.generators.iter().map(|g| factor(src, g)).collect::<Result<Vec<_>>>()?;
    let first_span = doc.generators.first().map_or(0..0, |g| g.span());
    let rule = doc.sign_rule.as_ref().map(|r| *r.get_ref());
    let generic = !doc.relations.is_empty() || rule == Some(RuleDoc::Free);
    if !generic {
        if let Some(c) = &doc.cutoff {
            return Err(src.at(c.span(), "`cutoff` only applies to presentations with relations"));
        }
        let sign_rule = match rule {
            Some(RuleDoc::Commutative) => SignRule::Commutative,
            _ => SignRule::Graded,
        };
        return AlgebraPresentation::build(ch, factors, sign_rule, doc.hopf, doc.infinite_tensor)
            .map(Presentation::Structured)
            .map_err(|e| src.at(first_span, e.to_string()));
    }
    let Some(p) = ch.prime() else {
        return Err(src.error(0, "presentations with relations need a prime"));
    };
    if doc.hopf || doc.infinite_tensor {
        return Err(src.error(0, "`hopf` and `infinite_tensor` only apply to tensor-product presentations"));
    }
    let mult = match rule {
        Some(RuleDoc::Free) => MultiplicationRule::Free,
        Some(RuleDoc::Commutative) => MultiplicationRule::Commutative,
        _ => MultiplicationRule::Graded,
    };
    let gens = factors
        .iter()
        .map(|f| FiniteGenerator::new(&f.name, f.degree).with_bound(f.height().map(|h| h - 1)))
        .collect();
    let cutoff = doc.cutoff.as_ref().map_or(DEFAULT_CUTOFF, |c| *c.get_ref());
    let mut fp = FinitePresentation::new(p, gens, mult, cutoff).map_err(|e| src.at(first_span, e.to_string()))?;
    for rel in &doc.relations {
        // One past the opening quote.
        let start = rel.span().start + 1;
        match fp.parse_terms(rel.get_ref()) {
            Err(e) => return Err(src.error(start + e.column - 1, e.message)),
            Ok(terms) => fp.add_relation(terms).map_err(|e| src.at(rel.span(), e.to_string()))?,
        }
    }
    Ok(Presentation::Generic(fp))
}

/// Parses a presentation document.
pub fn parse_presentation(path: &str, text: &str) -> Result<Presentation> {
    let src = Source { path, text };
    let doc: PresentationDoc = src.parse()?;
    build(&src, doc, None)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PrimeDoc {
    prime: Spanned<u64>,
    cohomology: Option<Spanned<PresentationDoc>>,
    loop_homology: Option<Spanned<PresentationDoc>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordDoc {
    name: String,
    dimension: Option<u32>,
    #[serde(default = "yes")]
    simply_connected: bool,
    #[serde(default = "yes")]
    closed_manifold: bool,
    #[serde(default)]
    homogeneous: bool,
    #[serde(default)]
    notes: Vec<String>,
    rational: Option<Spanned<PresentationDoc>>,
    #[serde(default)]
    mod_p: Vec<PrimeDoc>,
}

fn yes() -> bool {
    true
}

fn structured_section(src: &Source, doc: Spanned<PresentationDoc>, ch: Characteristic) -> Result<AlgebraPresentation> {
    let span = doc.span();
    match build(src, doc.into_inner(), Some(ch))? {
        Presentation::Structured(a) => Ok(a),
        Presentation::Generic(_) => Err(src.at(span, "record sections must be tensor products of monogenic factors")),
    }
}

/// Parses a space record document and validates it.
pub fn parse_record(path: &str, text: &str) -> Result<SpaceRecord> {
    let src = Source { path, text };
    let doc: RecordDoc = src.parse()?;
    let mut r = SpaceRecord::new(doc.name, doc.dimension);
    r.simply_connected = doc.simply_connected;
    r.closed_manifold = doc.closed_manifold;
    r.homogeneous = doc.homogeneous;
    r.notes = doc.notes;
    if let Some(h) = doc.rational {
        r.rational_cohomology = Some(structured_section(&src, h, Characteristic::Zero)?);
    }
    let mut mod_p = BTreeMap::new();
    for pd in doc.mod_p {
        let span = pd.prime.span();
        let p = Prime::new(*pd.prime.get_ref()).map_err(|e| src.at(span.clone(), e.to_string()))?;
        let ch = Characteristic::Prime(p);
        let data = PrimeData {
            cohomology: pd.cohomology.map(|d| structured_section(&src, d, ch)).transpose()?,
            loop_homology: pd.loop_homology.map(|d| structured_section(&src, d, ch)).transpose()?,
        };
        if mod_p.insert(p, data).is_some() {
            return Err(src.at(span, format!("prime {p} listed twice")));
        }
    }
    r.mod_p = mod_p;
    r.validate().map_err(|e| src.error(0, e.to_string()))?;
    Ok(r)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PageDoc {
    r: u32,
    images: Spanned<BTreeMap<String, String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DifferentialsDoc {
    #[serde(default)]
    page: Vec<Spanned<PageDoc>>,
}

/// A value with the position it was read from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Located<T> {
    pub value: T,
    pub line: usize,
    pub column: usize,
}

/// Parses a differentials document: one `[[page]]` per page with generator
/// images.
pub fn parse_differentials(path: &str, text: &str) -> Result<Vec<Located<DifferentialInput>>> {
    let src = Source { path, text };
    let doc: DifferentialsDoc = src.parse()?;
    Ok(doc
        .page
        .into_iter()
        .map(|p| {
            let (line, column) = src.position(p.span().start);
            let p = p.into_inner();
            Located {
                value: DifferentialInput {
                    r: p.r,
                    images: p.images.into_inner().into_iter().collect(),
                },
                line,
                column,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(text: &str) -> (usize, usize, String) {
        match parse_presentation("t.toml", text).unwrap_err() {
            Error::Parse {
                line, column, message, ..
            } => (line, column, message),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn structured_presentation() {
        let p = parse_presentation(
            "t.toml",
            r#"
prime = 3
hopf = true
generators = [
  { name = "x", degree = 2, kind = "polynomial" },
  { name = "y", degree = 3, kind = "exterior" },
]
"#,
        )
        .unwrap();
        let a = p.structured().unwrap();
        assert_eq!(a.factors().len(), 2);
        assert!(a.is_hopf());
    }

    #[test]
    fn relations_make_a_generic_presentation() {
        let p = parse_presentation(
            "t.toml",
            r#"
prime = 2
cutoff = 12
generators = [{ name = "x", degree = 2, kind = "polynomial" }, { name = "y", degree = 2, kind = "polynomial" }]
relations = ["x^2 + y^2"]
"#,
        )
        .unwrap();
        let Presentation::Generic(f) = p else { panic!() };
        assert_eq!(f.dims(), vec![1, 0, 2, 0, 2, 0, 2, 0, 2, 0, 2, 0, 2]);
    }

    #[test]
    fn unknown_keys_are_rejected_with_position() {
        let (line, column, msg) = err("prime = 2\ncolour = 3\n");
        assert_eq!((line, column), (2, 1));
        assert!(msg.contains("unknown field"), "{msg}");
    }

    #[test]
    fn relation_errors_point_into_the_string() {
        let text = "prime = 2\ngenerators = [{ name = \"x\", degree = 2, kind = \"polynomial\" }]\nrelations = [\"x^2 + q\"]\n";
        let (line, column, msg) = err(text);
        assert_eq!(line, 3);
        assert_eq!(column, 21);
        assert!(msg.contains('q'), "{msg}");
    }

    #[test]
    fn factor_errors_point_at_the_generator() {
        let text = "prime = 3\ngenerators = [\n  { name = \"x\", degree = 3, kind = \"polynomial\" },\n]\n";
        let (line, column, _) = err(text);
        assert_eq!((line, column), (3, 3));
        let (line, _, msg) = err("prime = 2\ngenerators = [{ name = \"x\", degree = 2, kind = \"truncated\" }]\n");
        assert_eq!(line, 2);
        assert!(msg.contains("height"));
        let (_, _, msg) = err("prime = 4\n");
        assert!(msg.contains("not prime"));
    }

    #[test]
    fn record_round_trip() {
        let text = r#"
name = "demo"
dimension = 7
homogeneous = true

[rational]
generators = [{ name = "x", degree = 7, kind = "exterior" }]

[[mod_p]]
prime = 2
[mod_p.cohomology]
generators = [{ name = "a", degree = 3, kind = "exterior" }, { name = "b", degree = 4, kind = "exterior" }]
[mod_p.loop_homology]
hopf = true
generators = [{ name = "u", degree = 2, kind = "polynomial" }, { name = "v", degree = 3, kind = "polynomial" }]
"#;
        let r = parse_record("r.toml", text).unwrap();
        assert_eq!(r.dimension, Some(7));
        assert_eq!(r.mod_p.len(), 1);
        assert!(r.mod_p[&Prime::TWO].loop_homology.as_ref().unwrap().is_hopf());
    }

    #[test]
    fn record_sections_check_the_prime() {
        let text = "name = \"x\"\ndimension = 3\n[[mod_p]]\nprime = 2\n[mod_p.cohomology]\nprime = 3\ngenerators = []\n";
        let e = parse_record("r.toml", text).unwrap_err();
        assert!(e.to_string().contains("r.toml:6:9"), "{e}");
    }

    #[test]
    fn differentials_document() {
        let text = "[[page]]\nr = 3\nimages = { u = \"a*u^2\" }\n\n[[page]]\nr = 4\nimages = { v = \"b*v^2\" }\n";
        let d = parse_differentials("d.toml", text).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d[1].value.r, 4);
        assert_eq!(d[1].value.images, vec![("v".to_string(), "b*v^2".to_string())]);
        assert_eq!(d[1].line, 5);
    }
}
