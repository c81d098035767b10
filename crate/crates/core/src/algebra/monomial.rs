//! Monomials of free and color-commutative algebras.
//!
//! In the commuting case a monomial is an exponent vector in declaration
//! order, and swapping generators `i` and `j` costs the sign `eps(i, j)`.
//! Graded commutativity is `eps(i, j) = (-1)^{|i||j|}`; a plain commutative
//! algebra has `eps = +1` everywhere. In the free case a monomial is a word of
//! generator indices.

use std::cmp::Ordering;

/// Exponent vector (commuting) or word (free).
pub type Mono = Vec<u16>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ambient {
    /// `negative[i][j]` is true when `x_i x_j = -x_j x_i`.
    Commuting { negative: Vec<Vec<bool>> },
    Free,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialSpace {
    degrees: Vec<u32>,
    bounds: Vec<Option<u32>>,
    ambient: Ambient,
}

impl MonomialSpace {
    /// Commuting monomials with the given swap signs. Generators whose self
    /// swap is negative are bounded to exponent 1 unless `char_two`.
    pub fn commuting(degrees: Vec<u32>, mut bounds: Vec<Option<u32>>, negative: Vec<Vec<bool>>, char_two: bool) -> Self {
        let n = degrees.len();
        debug_assert_eq!(bounds.len(), n);
        debug_assert!(negative.len() == n && negative.iter().all(|r| r.len() == n));
        if !char_two {
            for i in 0..n {
                if negative[i][i] {
                    bounds[i] = Some(bounds[i].map_or(1, |b| b.min(1)));
                }
            }
        }
        MonomialSpace {
            degrees,
            bounds,
            ambient: Ambient::Commuting { negative },
        }
    }

    /// Graded-commutative signs from degree parities.
    pub fn graded_signs(degrees: &[u32]) -> Vec<Vec<bool>> {
        degrees
            .iter()
            .map(|&a| degrees.iter().map(|&b| a % 2 == 1 && b % 2 == 1).collect())
            .collect()
    }

    pub fn free(degrees: Vec<u32>) -> Self {
        let n = degrees.len();
        MonomialSpace {
            degrees,
            bounds: vec![None; n],
            ambient: Ambient::Free,
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self.ambient, Ambient::Free)
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn generator_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn generator_degree(&self, i: usize) -> u32 {
        self.degrees[i]
    }

    pub fn bound(&self, i: usize) -> Option<u32> {
        self.bounds[i]
    }

    pub fn unit(&self) -> Mono {
        match self.ambient {
            Ambient::Commuting { .. } => vec![0; self.degrees.len()],
            Ambient::Free => Vec::new(),
        }
    }

    pub fn generator(&self, i: usize) -> Mono {
        self.power(i, 1)
    }

    pub fn power(&self, i: usize, e: u16) -> Mono {
        match self.ambient {
            Ambient::Commuting { .. } => {
                let mut m = vec![0; self.degrees.len()];
                m[i] = e;
                m
            }
            Ambient::Free => vec![i as u16; e as usize],
        }
    }

    pub fn degree(&self, m: &[u16]) -> u32 {
        match self.ambient {
            Ambient::Commuting { .. } => m.iter().zip(&self.degrees).map(|(&e, &d)| e as u32 * d).sum(),
            Ambient::Free => m.iter().map(|&g| self.degrees[g as usize]).sum(),
        }
    }

    /// Number of generator factors.
    pub fn length(&self, m: &[u16]) -> u32 {
        match self.ambient {
            Ambient::Commuting { .. } => m.iter().map(|&e| e as u32).sum(),
            Ambient::Free => m.len() as u32,
        }
    }

    /// True if the exponent vector respects every generator bound.
    pub fn admissible(&self, m: &[u16]) -> bool {
        match self.ambient {
            Ambient::Commuting { .. } => m
                .iter()
                .zip(&self.bounds)
                .all(|(&e, b)| b.map_or(true, |b| e as u32 <= b)),
            Ambient::Free => true,
        }
    }

    /// Product of two monomials: `None` if it vanishes by a bound, otherwise
    /// the monomial and whether the reordering sign is negative.
    pub fn multiply(&self, a: &[u16], b: &[u16]) -> Option<(Mono, bool)> {
        match &self.ambient {
            Ambient::Free => {
                let mut w = a.to_vec();
                w.extend_from_slice(b);
                Some((w, false))
            }
            Ambient::Commuting { negative } => {
                let n = a.len();
                let mut out = Vec::with_capacity(n);
                for i in 0..n {
                    let e = a[i] as u32 + b[i] as u32;
                    if self.bounds[i].map_or(false, |bd| e > bd) {
                        return None;
                    }
                    out.push(e as u16);
                }
                // Each occurrence of x_i in b moves left past every x_j (j > i) in a.
                let mut neg = false;
                for i in 0..n {
                    if b[i] % 2 == 0 {
                        continue;
                    }
                    for j in (i + 1)..n {
                        if a[j] % 2 == 1 && negative[i][j] {
                            neg = !neg;
                        }
                    }
                }
                Some((out, neg))
            }
        }
    }

    /// Every admissible monomial of the given degree, in a fixed order
    /// (largest first: lexicographically larger exponent vectors, or
    /// lexicographically smaller words).
    pub fn enumerate(&self, degree: u32) -> Vec<Mono> {
        let mut out = Vec::new();
        match self.ambient {
            Ambient::Commuting { .. } => {
                let mut cur = vec![0u16; self.degrees.len()];
                self.fill_commuting(0, degree, &mut cur, &mut out);
            }
            Ambient::Free => {
                let mut cur = Vec::new();
                self.fill_free(degree, &mut cur, &mut out);
            }
        }
        out
    }

    fn fill_commuting(&self, i: usize, remaining: u32, cur: &mut Mono, out: &mut Vec<Mono>) {
        if i == self.degrees.len() {
            if remaining == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let d = self.degrees[i];
        let mut top = remaining / d;
        if let Some(b) = self.bounds[i] {
            top = top.min(b);
        }
        for e in (0..=top).rev() {
            cur[i] = e as u16;
            self.fill_commuting(i + 1, remaining - e * d, cur, out);
        }
        cur[i] = 0;
    }

    fn fill_free(&self, remaining: u32, cur: &mut Mono, out: &mut Vec<Mono>) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        for g in 0..self.degrees.len() {
            let d = self.degrees[g];
            if d <= remaining {
                cur.push(g as u16);
                self.fill_free(remaining - d, cur, out);
                cur.pop();
            }
        }
    }

    /// Order used for columns: `Less` means `a` is the larger monomial.
    pub fn compare(&self, a: &[u16], b: &[u16]) -> Ordering {
        match self.ambient {
            Ambient::Commuting { .. } => b.cmp(a),
            Ambient::Free => a.cmp(b),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_signs_anticommute_odd_generators() {
        let degs = vec![1, 3, 2];
        let space = MonomialSpace::commuting(degs.clone(), vec![None; 3], MonomialSpace::graded_signs(&degs), false);
        // x1 * x0 = - x0 x1
        let (m, neg) = space.multiply(&[0, 1, 0], &[1, 0, 0]).unwrap();
        assert_eq!(m, vec![1, 1, 0]);
        assert!(neg);
        // even generator commutes
        let (_, neg) = space.multiply(&[0, 0, 1], &[1, 0, 0]).unwrap();
        assert!(!neg);
        // odd squares vanish away from characteristic two
        assert!(space.multiply(&[1, 0, 0], &[1, 0, 0]).is_none());
    }

    #[test]
    fn characteristic_two_keeps_odd_squares() {
        let degs = vec![1];
        let space = MonomialSpace::commuting(degs.clone(), vec![None], MonomialSpace::graded_signs(&degs), true);
        assert_eq!(space.multiply(&[1], &[1]).unwrap().0, vec![2]);
    }

    #[test]
    fn enumeration_counts() {
        let degs = vec![2, 3];
        let space = MonomialSpace::commuting(degs, vec![None, None], vec![vec![false; 2]; 2], false);
        assert_eq!(space.enumerate(12).len(), 3);
        let free = MonomialSpace::free(vec![1, 1]);
        assert_eq!(free.enumerate(5).len(), 32);
        assert_eq!(free.multiply(&[0, 1], &[1]).unwrap().0, vec![0, 1, 1]);
    }
}
