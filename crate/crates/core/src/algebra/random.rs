//! Seeded random Borel-form presentations for property checks.

use rand::seq::SliceRandom;
use rand::Rng;

use super::structured::{AlgebraPresentation, MonogenicFactor, SignRule};
use crate::field::{Characteristic, Prime};

#[derive(Debug, Clone, Copy)]
pub struct RandomOptions {
    pub max_factors: usize,
    /// Generator degrees are drawn from `1..=max_degree`.
    pub max_degree: u32,
    /// Largest height for non-Hopf truncations.
    pub max_height: u32,
    /// Heights become powers of `p` and the Hopf flag is set.
    pub hopf: bool,
    /// Probability of the infinite-tensor flag (Hopf only).
    pub infinite_probability: f64,
    /// Probability of unsigned commutation, allowing odd polynomial generators.
    pub commutative_probability: f64,
}

impl Default for RandomOptions {
    fn default() -> Self {
        RandomOptions {
            max_factors: 4,
            max_degree: 8,
            max_height: 5,
            hopf: false,
            infinite_probability: 0.0,
            commutative_probability: 0.0,
        }
    }
}

pub fn random_prime<R: Rng + ?Sized>(rng: &mut R, primes: &[u64]) -> Prime {
    Prime::new(*primes.choose(rng).expect("nonempty prime list")).expect("listed primes are prime")
}

fn draw<R: Rng + ?Sized>(
    rng: &mut R,
    p: Prime,
    opts: &RandomOptions,
    first_index: usize,
    commutative: bool,
) -> AlgebraPresentation {
    let two = p.is_two();
    let count = rng.gen_range(0..=opts.max_factors);
    let mut factors = Vec::with_capacity(count);
    for i in 0..count {
        let name = format!("g{}", first_index + i);
        let degree = rng.gen_range(1..=opts.max_degree.max(1));
        let odd = degree % 2 == 1;
        let height = if opts.hopf {
            let e = rng.gen_range(1..=2);
            p.get().pow(e) as u32
        } else {
            rng.gen_range(2..=opts.max_height.max(2))
        };
        let f = match rng.gen_range(0..3) {
            0 if odd || two => MonogenicFactor::exterior(name, degree),
            // Odd polynomial generators need unsigned commutation.
            1 if !odd || two || commutative => MonogenicFactor::polynomial(name, degree),
            _ if odd && !two => MonogenicFactor::exterior(name, degree),
            _ => MonogenicFactor::truncated(name, degree, height),
        };
        factors.push(f);
    }
    let rule = if commutative { SignRule::Commutative } else { SignRule::Graded };
    let infinite = opts.hopf && rng.gen_bool(opts.infinite_probability);
    AlgebraPresentation::build(Characteristic::Prime(p), factors, rule, opts.hopf, infinite)
        .expect("random factors respect the validity rules")
}

fn draw_rule<R: Rng + ?Sized>(rng: &mut R, p: Prime, opts: &RandomOptions) -> bool {
    !p.is_two() && rng.gen_bool(opts.commutative_probability)
}

/// Draws a valid presentation over `F_p` with generators `g0, g1, ...`.
pub fn random_presentation<R: Rng + ?Sized>(rng: &mut R, p: Prime, opts: &RandomOptions) -> AlgebraPresentation {
    let commutative = draw_rule(rng, p, opts);
    draw(rng, p, opts, 0, commutative)
}

/// Two presentations over the same prime and sign rule with disjoint
/// generator names.
pub fn random_pair<R: Rng + ?Sized>(
    rng: &mut R,
    p: Prime,
    opts: &RandomOptions,
) -> (AlgebraPresentation, AlgebraPresentation) {
    let commutative = draw_rule(rng, p, opts);
    let a = draw(rng, p, opts, 0, commutative);
    let b = draw(rng, p, opts, opts.max_factors, commutative);
    (a, b)
}
