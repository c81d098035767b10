//! Poincaré series of finite-type graded vector spaces, kept in product form.
//!
//! A series is a product of three kinds of factors:
//!
//! ```text
//!   exterior  a      :  1 + q^a
//!   polynomial b     :  1 / (1 - q^b)
//!   truncated (c, h) :  (1 - q^{ch}) / (1 - q^c)
//! ```
//!
//! Coefficients are extracted by iterated convolution with arbitrary-precision
//! integers, so no rational-function division ever happens.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PoincareSeries {
    exterior_degs: Vec<u32>,
    poly_degs: Vec<u32>,
    trunc_pairs: Vec<(u32, u32)>,
}

impl PoincareSeries {
    /// The series of the ground field: `1`.
    pub fn unit() -> Self {
        Self::default()
    }

    pub fn new(exterior_degs: Vec<u32>, poly_degs: Vec<u32>, trunc_pairs: Vec<(u32, u32)>) -> Result<Self> {
        if exterior_degs.iter().chain(&poly_degs).any(|&d| d == 0)
            || trunc_pairs.iter().any(|&(c, _)| c == 0)
        {
            return Err(Error::InvalidFactor("degrees must be positive".into()));
        }
        if trunc_pairs.iter().any(|&(_, h)| h < 2) {
            return Err(Error::InvalidFactor("truncation height must be at least 2".into()));
        }
        let mut s = PoincareSeries {
            exterior_degs,
            poly_degs,
            trunc_pairs,
        };
        s.exterior_degs.sort_unstable();
        s.poly_degs.sort_unstable();
        s.trunc_pairs.sort_unstable();
        Ok(s)
    }

    pub fn exterior(deg: u32) -> Result<Self> {
        Self::new(vec![deg], vec![], vec![])
    }

    pub fn polynomial(deg: u32) -> Result<Self> {
        Self::new(vec![], vec![deg], vec![])
    }

    pub fn truncated(deg: u32, height: u32) -> Result<Self> {
        Self::new(vec![], vec![], vec![(deg, height)])
    }

    pub fn exterior_degs(&self) -> &[u32] {
        &self.exterior_degs
    }

    pub fn poly_degs(&self) -> &[u32] {
        &self.poly_degs
    }

    pub fn trunc_pairs(&self) -> &[(u32, u32)] {
        &self.trunc_pairs
    }

    /// Series of a tensor product.
    pub fn multiply(&self, other: &PoincareSeries) -> PoincareSeries {
        let mut s = self.clone();
        s.exterior_degs.extend_from_slice(&other.exterior_degs);
        s.poly_degs.extend_from_slice(&other.poly_degs);
        s.trunc_pairs.extend_from_slice(&other.trunc_pairs);
        s.exterior_degs.sort_unstable();
        s.poly_degs.sort_unstable();
        s.trunc_pairs.sort_unstable();
        s
    }

    /// `dim V_i` for `i = 0..=max_degree`.
    pub fn coefficients(&self, max_degree: usize) -> Vec<BigUint> {
        let len = max_degree + 1;
        let mut c = vec![BigUint::zero(); len];
        c[0] = BigUint::one();
        for &a in &self.exterior_degs {
            let a = a as usize;
            for i in (a..len).rev() {
                let lower = c[i - a].clone();
                c[i] += lower;
            }
        }
        for &b in &self.poly_degs {
            let b = b as usize;
            for i in b..len {
                let lower = c[i - b].clone();
                c[i] += lower;
            }
        }
        for &(deg, h) in &self.trunc_pairs {
            let step = deg as usize;
            let span = step * h as usize;
            let old = c.clone();
            for i in step..len {
                let mut v = &c[i] + &c[i - step];
                if i >= span {
                    v -= &old[i - span];
                }
                c[i] = v;
            }
        }
        c
    }

    /// Coefficients as machine integers; panics if any exceeds `u64`.
    pub fn coefficients_u64(&self, max_degree: usize) -> Vec<u64> {
        self.coefficients(max_degree)
            .iter()
            .map(|c| c.to_u64().expect("coefficient exceeds u64"))
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.poly_degs.is_empty()
    }

    /// Highest nonzero degree when finite.
    pub fn top_degree(&self) -> Option<u64> {
        self.is_finite().then(|| {
            self.exterior_degs.iter().map(|&a| a as u64).sum::<u64>()
                + self
                    .trunc_pairs
                    .iter()
                    .map(|&(c, h)| c as u64 * (h as u64 - 1))
                    .sum::<u64>()
        })
    }

    /// Total dimension when finite: `2^{#exterior} * prod h`.
    pub fn total_dimension(&self) -> Option<BigUint> {
        self.is_finite().then(|| {
            let mut d = BigUint::one() << self.exterior_degs.len();
            for &(_, h) in &self.trunc_pairs {
                d *= h;
            }
            d
        })
    }

    /// Canonical form in which `(c, 2)` truncations become exterior factors;
    /// two series with the same canonical form have identical coefficients.
    pub fn canonical(&self) -> PoincareSeries {
        let mut s = self.clone();
        let (twos, rest): (Vec<_>, Vec<_>) = s.trunc_pairs.iter().partition(|&&(_, h)| h == 2);
        s.exterior_degs.extend(twos.iter().map(|&(c, _)| c));
        s.exterior_degs.sort_unstable();
        s.trunc_pairs = rest;
        s
    }

    /// Series equality: same canonical form and same coefficients through `cutoff`.
    pub fn equivalent(&self, other: &PoincareSeries, cutoff: usize) -> bool {
        self.canonical() == other.canonical() && self.coefficients(cutoff) == other.coefficients(cutoff)
    }

    pub fn growth_class(&self) -> GrowthClass {
        let k0 = self.poly_degs.len() as u32;
        let tag = match k0 {
            0 => GrowthTag::FiniteDimension,
            1 => GrowthTag::InfiniteBounded,
            _ => GrowthTag::DoublyInfinite,
        };
        GrowthClass { tag, k0 }
    }

    /// Exact sandwich `c_lower * n^K0 <= sum_{i<=n} dim V_i <= c_upper * n^K0`
    /// on `2 <= n <= max_n`, with the tightest rational constants.
    pub fn partial_sums_exponent_witness(&self, max_n: usize) -> Result<ExponentWitness> {
        if max_n < 4 {
            return Err(Error::OutOfRange(format!("N must be at least 4, got {max_n}")));
        }
        let k0 = self.growth_class().k0;
        if k0 == 0 {
            return Err(Error::FiniteDimensional);
        }
        let sums = partial_sums(&self.coefficients(max_n));
        let ratio = |n: usize, k: u32| -> BigRational {
            BigRational::new(
                BigInt::from(sums[n].clone()),
                BigInt::from(BigUint::from(n).pow(k)),
            )
        };
        let mut lower = ratio(2, k0);
        let mut upper = lower.clone();
        for n in 3..=max_n {
            let r = ratio(n, k0);
            if r < lower {
                lower = r.clone();
            }
            if r > upper {
                upper = r;
            }
        }
        // With exponent K0 - 1 the normalised partial sums keep growing;
        // doubling n roughly doubles them.
        let half = max_n / 2;
        let below_exponent_growth = ratio(max_n, k0 - 1) / ratio(half, k0 - 1);
        Ok(ExponentWitness {
            k0,
            c_lower: lower,
            c_upper: upper,
            max_n,
            partial_sums: sums,
            below_exponent_growth,
        })
    }
}

fn partial_sums(coeffs: &[BigUint]) -> Vec<BigUint> {
    let mut acc = BigUint::zero();
    coeffs
        .iter()
        .map(|c| {
            acc += c;
            acc.clone()
        })
        .collect()
}

impl fmt::Display for PoincareSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        parts.extend(self.exterior_degs.iter().map(|a| format!("(1+q^{a})")));
        parts.extend(self.trunc_pairs.iter().map(|(c, h)| format!("(1-q^{})/(1-q^{c})", c * h)));
        parts.extend(self.poly_degs.iter().map(|b| format!("1/(1-q^{b})")));
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" * "))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GrowthTag {
    FiniteDimension,
    InfiniteBounded,
    DoublyInfinite,
}

/// Growth of a product-form series. Every such series has polynomial growth,
/// with minimal exponent `k0` equal to the number of polynomial factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GrowthClass {
    pub tag: GrowthTag,
    pub k0: u32,
}

impl GrowthClass {
    pub fn is_doubly_infinite(&self) -> bool {
        self.tag == GrowthTag::DoublyInfinite
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentWitness {
    pub k0: u32,
    pub c_lower: BigRational,
    pub c_upper: BigRational,
    pub max_n: usize,
    /// `sum_{i<=n} dim V_i` for `n = 0..=max_n`.
    pub partial_sums: Vec<BigUint>,
    /// `(S(N)/N^{K0-1}) / (S(N/2)/(N/2)^{K0-1})`.
    pub below_exponent_growth: BigRational,
}

impl ExponentWitness {
    /// `(floor(c_lower), ceil(c_upper))`.
    pub fn integer_bounds(&self) -> (BigInt, BigInt) {
        (self.c_lower.floor().to_integer(), self.c_upper.ceil().to_integer())
    }

    /// Re-checks the sandwich against the stored partial sums.
    pub fn holds(&self) -> bool {
        self.c_lower > BigRational::zero()
            && (2..=self.max_n).all(|n| {
                let s = BigRational::from_integer(BigInt::from(self.partial_sums[n].clone()));
                let scale = BigRational::from_integer(BigInt::from(n).pow(self.k0));
                &self.c_lower * &scale <= s && s <= &self.c_upper * &scale
            })
    }
}
