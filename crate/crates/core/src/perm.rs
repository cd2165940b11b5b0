//! Permutations of the individual set I = {1, ..., 2n}, where the women are
//! W = {1, ..., n} and the men are M = {n+1, ..., 2n}.
//!
//! Composition is right-to-left throughout: `a.compose(&b)` maps z to a(b(z)).
//! Conjugation is `k^h = h k h^-1`.

use std::fmt;

use crate::error::{Error, Result};

/// A permutation of I = {1, ..., 2n}, stored as a dense image array.
///
/// `images[i]` is the image of individual `i + 1`; all individuals are 1-based.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

/// Membership flags of a permutation relative to the subgroups named in the model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Membership {
    /// Preserves the partition {W, M}.
    pub in_gstar: bool,
    /// Maps W to W and M to M.
    pub in_g: bool,
    /// Fixes every man.
    pub in_gw: bool,
    /// Fixes every woman.
    pub in_gm: bool,
    /// Fixed-point-free involution swapping W and M.
    pub is_matching: bool,
}

impl Permutation {
    /// The identity on 2n points.
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=2 * n).collect(),
        }
    }

    /// Builds a permutation from its image sequence (1-based values).
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let d = images.len();
        if d == 0 || !d.is_multiple_of(2) {
            return Err(Error::InvalidPermutation(format!(
                "degree must be positive and even, got {d}"
            )));
        }
        let mut seen = vec![false; d];
        for &v in &images {
            if v == 0 || v > d || seen[v - 1] {
                return Err(Error::InvalidPermutation(format!(
                    "images are not a bijection of {{1..{d}}}"
                )));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation on 2n points from disjoint cycles (1-based).
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let d = 2 * n;
        let mut images: Vec<usize> = (1..=d).collect();
        let mut touched = vec![false; d];
        for cycle in cycles {
            if cycle.len() < 2 {
                return Err(Error::InvalidPermutation(
                    "cycles must have length >= 2".into(),
                ));
            }
            for &z in cycle {
                if z == 0 || z > d {
                    return Err(Error::SizeMismatch {
                        expected: d,
                        found: z,
                    });
                }
                if touched[z - 1] {
                    return Err(Error::InvalidPermutation(format!(
                        "point {z} appears in two cycles"
                    )));
                }
                touched[z - 1] = true;
            }
            for i in 0..cycle.len() {
                images[cycle[i] - 1] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    /// Half-population size n (the degree is 2n).
    pub fn n(&self) -> usize {
        self.images.len() / 2
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of individual z.
    pub fn apply(&self, z: usize) -> usize {
        self.images[z - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// Right-to-left composition: the result maps z to self(other(z)).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::SizeMismatch {
                expected: self.degree(),
                found: other.degree(),
            });
        }
        Ok(Permutation {
            images: (1..=self.degree())
                .map(|z| self.apply(other.apply(z)))
                .collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v - 1] = i + 1;
        }
        Permutation { images }
    }

    /// The conjugate of `self` by `h`, that is `h self h^-1`.
    pub fn conjugate_by(&self, h: &Self) -> Result<Self> {
        if self.degree() != h.degree() {
            return Err(Error::SizeMismatch {
                expected: self.degree(),
                found: h.degree(),
            });
        }
        // h k h^-1 relabels every point of k through h.
        let mut images = vec![0; self.degree()];
        for z in 1..=self.degree() {
            images[h.apply(z) - 1] = h.apply(self.apply(z));
        }
        Ok(Permutation { images })
    }

    /// True when `self` and `other` commute.
    pub fn commutes_with(&self, other: &Self) -> bool {
        self.degree() == other.degree()
            && (1..=self.degree()).all(|z| self.apply(other.apply(z)) == other.apply(self.apply(z)))
    }

    pub fn order(&self) -> usize {
        self.cycle_type().order()
    }

    /// Nontrivial cycles, sorted by minimal element, each rotated to start at
    /// its minimal element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut cycles = Vec::new();
        for start in 1..=self.degree() {
            if seen[start - 1] || self.apply(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start - 1] = true;
            let mut z = self.apply(start);
            while z != start {
                seen[z - 1] = true;
                cycle.push(z);
                z = self.apply(z);
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// Cycle type including fixed points as parts of size 1.
    pub fn cycle_type(&self) -> CycleType {
        let mut seen = vec![false; self.degree()];
        let mut parts = Vec::new();
        for start in 1..=self.degree() {
            if seen[start - 1] {
                continue;
            }
            let mut len = 1;
            seen[start - 1] = true;
            let mut z = self.apply(start);
            while z != start {
                seen[z - 1] = true;
                len += 1;
                z = self.apply(z);
            }
            parts.push(len);
        }
        parts.sort_unstable();
        CycleType { parts }
    }

    fn maps_w_to_w(&self) -> bool {
        let n = self.n();
        (1..=n).all(|x| self.apply(x) <= n)
    }

    fn maps_w_to_m(&self) -> bool {
        let n = self.n();
        (1..=n).all(|x| self.apply(x) > n)
    }

    /// Membership in G (maps W to W and M to M).
    pub fn is_in_g(&self) -> bool {
        // A bijection sending W into W automatically sends M into M.
        self.maps_w_to_w()
    }

    /// Membership in G* (preserves the partition {W, M}).
    pub fn is_in_gstar(&self) -> bool {
        self.maps_w_to_w() || self.maps_w_to_m()
    }

    pub fn is_involution(&self) -> bool {
        !self.is_identity() && (1..=self.degree()).all(|z| self.apply(self.apply(z)) == z)
    }

    /// Fixed-point-free involution swapping W and M.
    pub fn is_matching_perm(&self) -> bool {
        self.maps_w_to_m() && self.is_involution()
    }

    pub fn classify(&self) -> Membership {
        let n = self.n();
        let in_g = self.is_in_g();
        let swaps = self.maps_w_to_m();
        Membership {
            in_gstar: in_g || swaps,
            in_g,
            in_gw: (n + 1..=2 * n).all(|y| self.apply(y) == y),
            in_gm: (1..=n).all(|x| self.apply(x) == x),
            is_matching: swaps && self.is_involution(),
        }
    }

    /// Parses cycle notation such as `"(1 3 2 4)(5 6)"`, or `"id"` for the identity.
    pub fn parse(n: usize, input: &str) -> Result<Self> {
        let s = input.trim();
        if s == "id" {
            return Ok(Permutation::identity(n));
        }
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            rest = rest.trim_start();
            if rest.is_empty() {
                break;
            }
            if !rest.starts_with('(') {
                return Err(Error::InvalidPermutation(format!(
                    "expected '(' in cycle notation, found {rest:?}"
                )));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| Error::InvalidPermutation(format!("unclosed cycle in {input:?}")))?;
            let body = &rest[1..close];
            let mut cycle = Vec::new();
            for tok in body.split_whitespace() {
                let z: usize = tok.parse().map_err(|_| {
                    Error::InvalidPermutation(format!("bad point {tok:?} in {input:?}"))
                })?;
                cycle.push(z);
            }
            if cycle.len() < 2 {
                return Err(Error::InvalidPermutation(format!(
                    "cycle ({body}) has fewer than two points"
                )));
            }
            cycles.push(cycle);
            rest = &rest[close + 1..];
        }
        Permutation::from_cycles(n, &cycles)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "id");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (i, z) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{z}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Multiset of cycle lengths of a permutation on 2n points, fixed points included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleType {
    parts: Vec<usize>,
}

impl CycleType {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.sort_unstable();
        CycleType { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Order of any permutation with this type: the lcm of the parts.
    pub fn order(&self) -> usize {
        self.parts.iter().fold(1, |acc, &p| lcm(acc, p))
    }

    /// True when all parts are equal (the stabilizer types of the model).
    pub fn is_uniform(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] == w[1])
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}
