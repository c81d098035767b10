//! Seeded randomized checks of the engine; every check is reproducible from
//! the seed.

use closedgeo::algebra::random::{random_pair, random_presentation, random_prime, RandomOptions};
use closedgeo::catalog::{builtin_catalog, verdicts, Rule};
use closedgeo::homalg::{depth, is_elliptic, is_gorenstein, DepthResult};
use closedgeo::spectral::random::{mutate, sample_valid_differential};
use closedgeo::spectral::{certify_central_power, filtration_nilpotency_check, CertificateOutcome, E2Algebra, SpectralSequence};
use closedgeo::catalog::lookup;
use closedgeo::Prime;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::report::{CheckResult, SelfcheckReport};

type Check = fn(&mut ChaCha8Rng, u32) -> Result<String, String>;

pub fn run(seed: u64, cases: u32) -> SelfcheckReport {
    let checks: [(&str, Check, u32); 5] = [
        ("series equals monomial basis", series_oracle, cases),
        ("depth additivity and Gorenstein closure", depth_additivity, cases),
        ("four-way ellipticity equivalence", ellipticity, cases),
        ("spectral sequence validation", spectral, (cases / 20).max(2)),
        ("catalog justification chains", catalog, 1),
    ];
    let checks = checks
        .iter()
        .enumerate()
        .map(|(i, (name, check, n))| {
            // independent streams, so one check's draws do not shift another's
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let (passed, detail) = match check(&mut rng, *n) {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckResult {
                name: name.to_string(),
                passed,
                cases: *n,
                detail,
            }
        })
        .collect();
    SelfcheckReport { seed, checks }
}

fn series_oracle(rng: &mut ChaCha8Rng, cases: u32) -> Result<String, String> {
    let opts = RandomOptions {
        commutative_probability: 0.25,
        ..RandomOptions::default()
    };
    const TOP: u32 = 32;
    for i in 0..cases {
        let p = random_prime(rng, &[2, 3, 5]);
        let a = random_presentation(rng, p, &opts);
        let series = a.poincare_series().coefficients_u64(TOP as usize);
        let basis: Vec<u64> = a
            .to_finite(TOP)
            .map_err(|e| e.to_string())?
            .dims()
            .iter()
            .map(|&d| d as u64)
            .collect();
        if basis != series {
            return Err(format!("case {i}: {a}: basis {basis:?}, series {series:?}"));
        }
    }
    Ok(format!("dimensions agree through degree {TOP}"))
}

fn depth_value(d: DepthResult) -> u32 {
    match d {
        DepthResult::Finite(n) => n,
        DepthResult::Infinite => u32::MAX,
    }
}

fn depth_additivity(rng: &mut ChaCha8Rng, cases: u32) -> Result<String, String> {
    let opts = RandomOptions::default();
    for i in 0..cases {
        let p = random_prime(rng, &[2, 3, 5, 7]);
        let (a, b) = random_pair(rng, p, &opts);
        let ab = a.tensor(&b).map_err(|e| e.to_string())?;
        let (da, db, dab) = (depth_value(depth(&a)), depth_value(depth(&b)), depth_value(depth(&ab)));
        if dab != da + db || dab as usize != ab.polynomial_factor_count() {
            return Err(format!("case {i}: depth {dab} for {a} and {b}"));
        }
        if is_gorenstein(&ab).is_gorenstein != (is_gorenstein(&a).is_gorenstein && is_gorenstein(&b).is_gorenstein) {
            return Err(format!("case {i}: Gorenstein property of {a} and {b}"));
        }
    }
    Ok("depth adds and the Gorenstein property is closed under tensor products".into())
}

fn ellipticity(rng: &mut ChaCha8Rng, cases: u32) -> Result<String, String> {
    let opts = RandomOptions {
        hopf: true,
        infinite_probability: 0.2,
        commutative_probability: 0.3,
        ..RandomOptions::default()
    };
    let mut elliptic = 0;
    for i in 0..cases {
        let p = random_prime(rng, &[2, 3, 5]);
        let a = random_presentation(rng, p, &opts);
        let r = is_elliptic(&a).map_err(|e| e.to_string())?;
        if !r.conditions_agree() {
            return Err(format!("case {i}: {a}: {r:?}"));
        }
        elliptic += u32::from(r.elliptic);
    }
    Ok(format!("conditions agree; {elliptic} elliptic"))
}

fn spectral(rng: &mut ChaCha8Rng, cases: u32) -> Result<String, String> {
    let record = lookup("Q(4,2)", Default::default()).map_err(|e| e.to_string())?;
    let data = &record.mod_p[&Prime::TWO];
    let (h, l) = (data.cohomology.clone().unwrap(), data.loop_homology.clone().unwrap());
    let mut mutants = 0;
    for i in 0..cases {
        let e2 = E2Algebra::new(&h, &l, 7, 24, true).map_err(|e| e.to_string())?;
        let mut accepted_mutant = None;
        let ss = SpectralSequence::run_with(e2, |page| {
            let (d, _) = sample_valid_differential(page, rng, 20);
            if let Some((bad, _)) = mutate(page, &d, rng) {
                mutants += 1;
                if bad.validate(page).is_ok() {
                    accepted_mutant = Some(page.r());
                }
            }
            Ok((page.clone(), d))
        })
        .map_err(|e| format!("case {i}: {e}"))?;
        if let Some(r) = accepted_mutant {
            return Err(format!("case {i}: an invalid differential on page {r} was accepted"));
        }
        for x in ["u", "v^2"] {
            let elem = ss.e2().parse(x).map_err(|e| e.to_string())?;
            match certify_central_power(&ss, &elem).map_err(|e| format!("case {i}: {e}"))? {
                CertificateOutcome::Certified(c) if c.exponent <= c.bound => {}
                other => return Err(format!("case {i}: {x}: {other:?}")),
            }
        }
        if !filtration_nilpotency_check(&ss.e_infinity().product_table(), 7).holds {
            return Err(format!("case {i}: filtration check failed"));
        }
    }
    Ok(format!("{mutants} invalid differentials rejected"))
}

fn catalog(_: &mut ChaCha8Rng, _: u32) -> Result<String, String> {
    let records = builtin_catalog();
    let mut proved = 0;
    for (name, v) in verdicts(&records) {
        let v = v.map_err(|e| format!("{name}: {e}"))?;
        if !v.chain_is_complete() {
            return Err(format!("{name}: incomplete justification chain"));
        }
        if v.justification.iter().any(|s| s.axiom != s.citation.is_axiom()) {
            return Err(format!("{name}: axiom tag mismatch"));
        }
        let rules = v.rules_fired();
        if rules.contains(&Rule::R5) && rules.len() > 1 {
            return Err(format!("{name}: the fallback rule fired alongside a route"));
        }
        proved += usize::from(!rules.contains(&Rule::R5) && !rules.contains(&Rule::R1));
    }
    Ok(format!("{} records, {proved} proved", records.len()))
}
