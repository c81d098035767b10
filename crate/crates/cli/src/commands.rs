use std::fmt;
use std::path::Path;

use closedgeo::algebra::AlgebraPresentation;
use closedgeo::catalog::{builtin_catalog_with, lookup, verdict, verdicts, CatalogBounds, SpaceRecord};
use closedgeo::format::{parse_differentials, parse_presentation, parse_record, Located, Presentation};
use closedgeo::homalg::{depth, ext_table, is_elliptic, is_gorenstein, DepthResult};
use closedgeo::spectral::{
    certify_central_power, filtration_nilpotency_check, CertificateOutcome, DifferentialInput, E2Algebra, EntryStatus,
    SpectralSequence,
};
use closedgeo::{Error, GrowthTag, Prime};
use num_traits::ToPrimitive;
use sha2::{Digest, Sha256};

use crate::report::*;
use crate::{selfcheck, Cli, Command, EXIT_INPUT, EXIT_OK, EXIT_SELFCHECK};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::input(e.to_string())
    }
}

struct Inputs(Vec<InputDigest>);

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<(String, String), CliError> {
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{shown}: {e}")))?;
        self.0.push(InputDigest {
            path: shown.clone(),
            sha256: format!("{:x}", Sha256::digest(text.as_bytes())),
        });
        Ok((shown, text))
    }

    fn presentation(&mut self, path: &Path) -> Result<Presentation, CliError> {
        let (shown, text) = self.read(path)?;
        Ok(parse_presentation(&shown, &text)?)
    }

    fn structured(&mut self, path: &Path, what: &str) -> Result<AlgebraPresentation, CliError> {
        match self.presentation(path)? {
            Presentation::Structured(a) => Ok(a),
            Presentation::Generic(_) => Err(CliError::input(format!(
                "{}: {what} needs a tensor product of monogenic factors, not generators with relations",
                path.display()
            ))),
        }
    }
}

/// Runs a parsed command line. `argv` is echoed into the report.
pub fn run(cli: &Cli, argv: Vec<String>) -> Result<Report, CliError> {
    let mut inputs = Inputs(Vec::new());
    let (results, exit_code) = match &cli.command {
        Command::Series { file, max_degree } => (series(&mut inputs, file, *max_degree)?, EXIT_OK),
        Command::Depth { file } => (depth_report(&mut inputs, file)?, EXIT_OK),
        Command::Elliptic { file } => (elliptic(&mut inputs, file)?, EXIT_OK),
        Command::Ss {
            cohomology,
            loop_homology,
            dim,
            prime,
            truncate,
            differentials,
            not_simply_connected,
        } => {
            let options = SsOptions {
                dim: *dim,
                prime: *prime,
                truncate: *truncate,
                simply_connected: !not_simply_connected,
            };
            (
                spectral(&mut inputs, cohomology, loop_homology, differentials.as_deref(), options)?,
                EXIT_OK,
            )
        }
        Command::Verdict {
            space,
            prime_bound,
            family_bound,
        } => {
            let bounds = CatalogBounds {
                family: *family_bound,
                prime: *prime_bound,
            };
            let record = space_record(&mut inputs, space, bounds)?;
            let v = verdict(&record)?;
            let code = verdict_exit_code(&v);
            (
                Results::Verdicts {
                    verdicts: vec![VerdictEntry::new(v)],
                },
                code,
            )
        }
        Command::Catalog {
            prime_bound,
            family_bound,
        } => {
            let bounds = CatalogBounds {
                family: *family_bound,
                prime: *prime_bound,
            };
            let mut entries = Vec::new();
            for (name, v) in verdicts(&builtin_catalog_with(bounds)) {
                let v = v.map_err(|e| CliError::input(format!("{name}: {e}")))?;
                entries.push(VerdictEntry::new(v));
            }
            (Results::Catalog { verdicts: entries }, EXIT_OK)
        }
        Command::Selfcheck { seed, cases } => {
            let report = selfcheck::run(*seed, *cases);
            let code = if report.passed() { EXIT_OK } else { EXIT_SELFCHECK };
            (Results::Selfcheck(report), code)
        }
    };
    Ok(Report {
        command: argv,
        inputs: inputs.0,
        results,
        exit_code,
    })
}

fn growth_tag(tag: GrowthTag) -> &'static str {
    match tag {
        GrowthTag::FiniteDimension => "finite_dimension",
        GrowthTag::InfiniteBounded => "infinite_bounded",
        GrowthTag::DoublyInfinite => "doubly_infinite",
    }
}

fn series(inputs: &mut Inputs, file: &Path, max_degree: u32) -> Result<Results, CliError> {
    let report = match inputs.presentation(file)? {
        Presentation::Structured(a) => {
            let s = a.poincare_series();
            let coefficients = s
                .coefficients(max_degree as usize)
                .iter()
                .enumerate()
                .map(|(d, c)| {
                    c.to_u64().ok_or_else(|| {
                        CliError::input(format!("the dimension in degree {d} exceeds 2^64; lower --max-degree"))
                    })
                })
                .collect::<Result<Vec<u64>, _>>()?;
            let g = s.growth_class();
            SeriesReport {
                presentation: a.to_string(),
                characteristic: a.characteristic().prime().map_or(0, Prime::get),
                method: "series".into(),
                max_degree,
                coefficients,
                growth: Some(Growth {
                    tag: growth_tag(g.tag).into(),
                    k0: g.k0,
                }),
                top_degree: s.top_degree(),
                total_dimension: s.total_dimension().map(|t| t.to_string()),
            }
        }
        Presentation::Generic(fp) => {
            if max_degree > fp.cutoff() {
                return Err(CliError::input(format!(
                    "{}: --max-degree {max_degree} is above the presentation cutoff {}",
                    file.display(),
                    fp.cutoff()
                )));
            }
            let names: Vec<String> = fp.generators().iter().map(|g| format!("{}_{}", g.name, g.degree)).collect();
            let mut presentation = format!("F_{}<{}>", fp.prime(), names.join(", "));
            if !fp.relation_sources().is_empty() {
                presentation.push_str(&format!(" / ({})", fp.relation_sources().join(", ")));
            }
            SeriesReport {
                presentation,
                characteristic: fp.prime().get(),
                method: "monomial_basis".into(),
                max_degree,
                coefficients: fp.dims()[..=max_degree as usize].iter().map(|&d| d as u64).collect(),
                growth: None,
                top_degree: None,
                total_dimension: None,
            }
        }
    };
    Ok(Results::Series(report))
}

fn depth_report(inputs: &mut Inputs, file: &Path) -> Result<Results, CliError> {
    let a = inputs.structured(file, "depth")?;
    let table = ext_table(&a);
    let g = is_gorenstein(&a);
    Ok(Results::Depth(DepthReport {
        presentation: a.to_string(),
        depth: match depth(&a) {
            DepthResult::Finite(n) => Some(n),
            DepthResult::Infinite => None,
        },
        ext: table
            .entries
            .iter()
            .map(|(&(s, t), &dim)| ExtEntry { s, t, dim })
            .collect(),
        gorenstein: g.is_gorenstein,
        socle: g.socle_bidegree,
    }))
}

fn elliptic(inputs: &mut Inputs, file: &Path) -> Result<Results, CliError> {
    let a = inputs.structured(file, "ellipticity")?;
    let r = is_elliptic(&a)?;
    Ok(Results::Elliptic(EllipticReport {
        presentation: a.to_string(),
        finite_depth: r.finite_depth,
        elliptic_by_definition: r.elliptic_by_definition,
        nilpotent: r.nilpotent,
        polynomial_growth: r.polynomial_growth,
        gorenstein: r.gorenstein,
        lower_central_series: r.lower_central_series.to_string(),
        elliptic: r.elliptic,
        conditions_agree: r.conditions_agree(),
    }))
}

#[derive(Debug, Clone, Copy)]
struct SsOptions {
    dim: u32,
    prime: Option<u64>,
    truncate: u32,
    simply_connected: bool,
}

fn spectral(
    inputs: &mut Inputs,
    cohomology: &Path,
    loop_homology: &Path,
    differentials: Option<&Path>,
    opts: SsOptions,
) -> Result<Results, CliError> {
    let h = inputs.structured(cohomology, "the spectral sequence")?;
    let l = inputs.structured(loop_homology, "the spectral sequence")?;
    if let Some(p) = opts.prime {
        let p = Prime::new(p)?;
        for (a, path) in [(&h, cohomology), (&l, loop_homology)] {
            if a.prime() != Some(p) {
                return Err(CliError::input(format!(
                    "{}: presentation is over {}, but --prime is {p}",
                    path.display(),
                    a.characteristic()
                )));
            }
        }
    }
    let located: Vec<Located<DifferentialInput>> = match differentials {
        Some(path) => {
            let (shown, text) = inputs.read(path)?;
            parse_differentials(&shown, &text)?
        }
        None => Vec::new(),
    };
    let e2 = E2Algebra::new(&h, &l, opts.dim, opts.truncate, opts.simply_connected)?;
    let given: Vec<DifferentialInput> = located.iter().map(|l| l.value.clone()).collect();
    let ss = SpectralSequence::run(e2, &given).map_err(|e| locate(e, differentials, &located))?;
    let e2 = ss.e2();

    let pages = ss
        .pages()
        .iter()
        .zip(ss.differentials())
        .map(|(page, d)| PageSummary {
            r: page.r(),
            nonzero_differential: !d.is_zero_on(page),
            images: d.describe(page),
            total_dimension: page.dims().values().map(|&d| d as u64).sum(),
        })
        .collect();
    let last = ss.e_infinity();
    let e_infinity = last
        .dims()
        .into_iter()
        .filter(|&(_, d)| d > 0)
        .map(|(b, d)| BidegreeDim {
            col: b.col,
            t: b.t,
            dim: d as u64,
            known: last.status(b) == EntryStatus::Known,
        })
        .collect();

    let mut certificates = Vec::new();
    for (i, power) in l.effective_center() {
        let name = &l.factors()[i].name;
        let element = if power == 1 { name.clone() } else { format!("{name}^{power}") };
        let x = e2.parse(&element)?;
        let report = match certify_central_power(&ss, &x) {
            Ok(CertificateOutcome::Certified(c)) => CertificateReport {
                element,
                status: "certified".into(),
                exponent: Some(c.exponent),
                bound: Some(c.bound),
                raised_on: c.pages.iter().filter(|w| w.raised).map(|w| w.page).collect(),
                required_truncation: None,
                detail: None,
            },
            Ok(CertificateOutcome::Indeterminate {
                page,
                required_truncation,
                ..
            }) => CertificateReport {
                element,
                status: "indeterminate".into(),
                exponent: None,
                bound: None,
                raised_on: Vec::new(),
                required_truncation: Some(required_truncation),
                detail: Some(format!("the truncation is too low on page {page}")),
            },
            Err(Error::NotEffectiveCentral(why)) => CertificateReport {
                element,
                status: "not_central".into(),
                exponent: None,
                bound: None,
                raised_on: Vec::new(),
                required_truncation: None,
                detail: Some(why),
            },
            Err(e) => return Err(e.into()),
        };
        certificates.push(report);
    }

    let table = ss.e_infinity().product_table();
    let f = filtration_nilpotency_check(&table, opts.dim);
    Ok(Results::SpectralSequence(SpectralReport {
        prime: e2.prime().get(),
        dimension: opts.dim,
        truncation: opts.truncate,
        cohomology: h.to_string(),
        loop_homology: l.to_string(),
        pages,
        e_infinity,
        certificates,
        filtration: FiltrationSummary {
            holds: f.holds,
            nilpotency_order: f.nilpotency_order,
            witness: f.witness.iter().map(|&i| table.labels[i].clone()).collect(),
        },
    }))
}

/// Points a differential error at the `[[page]]` table it came from.
fn locate(e: Error, path: Option<&Path>, located: &[Located<DifferentialInput>]) -> CliError {
    if let (Error::InvalidDifferential { page, .. }, Some(path)) = (&e, path) {
        if let Some(l) = located.iter().find(|l| l.value.r == *page) {
            return CliError::input(format!("{}:{}:{}: {e}", path.display(), l.line, l.column));
        }
    }
    e.into()
}

fn space_record(inputs: &mut Inputs, space: &str, bounds: CatalogBounds) -> Result<SpaceRecord, CliError> {
    let path = Path::new(space);
    if path.is_file() {
        let (shown, text) = inputs.read(path)?;
        let mut r = parse_record(&shown, &text)?;
        r.mod_p.retain(|p, _| p.get() <= bounds.prime);
        return Ok(r);
    }
    lookup(space, bounds).map_err(|e| CliError::input(e.to_string()))
}
