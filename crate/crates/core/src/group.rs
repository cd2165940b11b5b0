//! Finite permutation groups handled extensionally: subgroup generation,
//! orbits, semiregularity, centralizers in G*, and the commuting-involution
//! construction used by the odd-n possibility result.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A finite set of permutations of {1..2n} closed under composition.
///
/// Elements are kept sorted by image sequence, so iteration order is the
/// canonical order used for deterministic tie-breaking everywhere.
#[derive(Clone, PartialEq, Eq)]
pub struct PermGroup {
    n: usize,
    elements: BTreeSet<Permutation>,
    within_gstar: bool,
    within_g: bool,
}

impl PermGroup {
    fn from_elements(n: usize, elements: BTreeSet<Permutation>) -> Self {
        let within_g = elements.iter().all(|p| p.is_in_g());
        let within_gstar = within_g || elements.iter().all(|p| p.is_in_gstar());
        PermGroup {
            n,
            elements,
            within_gstar,
            within_g,
        }
    }

    /// The trivial group {id}.
    pub fn trivial(n: usize) -> Self {
        let mut elements = BTreeSet::new();
        elements.insert(Permutation::identity(n));
        PermGroup::from_elements(n, elements)
    }

    /// Smallest group containing `gens`; `generate(n, &[])` is {id}.
    pub fn generate(n: usize, gens: &[Permutation]) -> Result<Self> {
        for g in gens {
            if g.n() != n {
                return Err(Error::SizeMismatch {
                    expected: 2 * n,
                    found: g.degree(),
                });
            }
        }
        let mut elements = BTreeSet::new();
        elements.insert(Permutation::identity(n));
        let mut queue: Vec<Permutation> = gens.to_vec();
        while let Some(next) = queue.pop() {
            if !elements.insert(next.clone()) {
                continue;
            }
            for e in &elements {
                for p in [e.compose(&next).unwrap(), next.compose(e).unwrap()] {
                    if !elements.contains(&p) {
                        queue.push(p);
                    }
                }
            }
        }
        Ok(PermGroup::from_elements(n, elements))
    }

    /// The cyclic group generated by one permutation.
    pub fn cyclic(g: &Permutation) -> Self {
        let mut elements = BTreeSet::new();
        let mut power = Permutation::identity(g.n());
        loop {
            let inserted = elements.insert(power.clone());
            if !inserted {
                break;
            }
            power = g.compose(&power).unwrap();
        }
        PermGroup::from_elements(g.n(), elements)
    }

    /// G* = permutations preserving the partition {W, M}; |G*| = 2(n!)^2.
    pub fn gstar(n: usize) -> Self {
        let w: Vec<usize> = (1..=n).collect();
        let m: Vec<usize> = (n + 1..=2 * n).collect();
        let perms_w = permutations_of(&w);
        let perms_m = permutations_of(&m);
        let mut elements = BTreeSet::new();
        for pw in &perms_w {
            for pm in &perms_m {
                // sigma in G: images of W from pw, images of M from pm.
                let mut images = Vec::with_capacity(2 * n);
                images.extend_from_slice(pw);
                images.extend_from_slice(pm);
                elements.insert(Permutation::from_images(images.clone()).unwrap());
                // The coset G*\G: compose with the swap x <-> n+x.
                let mut swapped = vec![0; 2 * n];
                for (i, &v) in images.iter().enumerate() {
                    swapped[i] = if v <= n { v + n } else { v - n };
                }
                elements.insert(Permutation::from_images(swapped).unwrap());
            }
        }
        PermGroup::from_elements(n, elements)
    }

    /// G = permutations with phi(W) = W and phi(M) = M; |G| = (n!)^2.
    pub fn whole_g(n: usize) -> Self {
        let w: Vec<usize> = (1..=n).collect();
        let m: Vec<usize> = (n + 1..=2 * n).collect();
        let mut elements = BTreeSet::new();
        for pw in &permutations_of(&w) {
            for pm in &permutations_of(&m) {
                let mut images = Vec::with_capacity(2 * n);
                images.extend_from_slice(pw);
                images.extend_from_slice(pm);
                elements.insert(Permutation::from_images(images).unwrap());
            }
        }
        PermGroup::from_elements(n, elements)
    }

    /// G_W = permutations fixing every man.
    pub fn g_w(n: usize) -> Self {
        let w: Vec<usize> = (1..=n).collect();
        let mut elements = BTreeSet::new();
        for pw in &permutations_of(&w) {
            let mut images = Vec::with_capacity(2 * n);
            images.extend_from_slice(pw);
            images.extend((n + 1..=2 * n).collect::<Vec<_>>());
            elements.insert(Permutation::from_images(images).unwrap());
        }
        PermGroup::from_elements(n, elements)
    }

    /// G_M = permutations fixing every woman.
    pub fn g_m(n: usize) -> Self {
        let m: Vec<usize> = (n + 1..=2 * n).collect();
        let mut elements = BTreeSet::new();
        for pm in &permutations_of(&m) {
            let mut images: Vec<usize> = (1..=n).collect();
            images.extend_from_slice(pm);
            elements.insert(Permutation::from_images(images).unwrap());
        }
        PermGroup::from_elements(n, elements)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.contains(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Permutation> {
        self.elements.iter()
    }

    pub fn elements(&self) -> &BTreeSet<Permutation> {
        &self.elements
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.n == other.n && self.elements.is_subset(&other.elements)
    }

    /// True when every element preserves the partition {W, M}.
    pub fn within_gstar(&self) -> bool {
        self.within_gstar
    }

    /// True when every element maps W to W.
    pub fn within_g(&self) -> bool {
        self.within_g
    }

    /// Elementwise conjugate S^h = {h s h^-1 : s in S}.
    pub fn conjugate_by(&self, h: &Permutation) -> Result<PermGroup> {
        let elements = self
            .elements
            .iter()
            .map(|s| s.conjugate_by(h))
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(PermGroup::from_elements(self.n, elements))
    }

    /// True when only the identity fixes a point.
    pub fn is_semiregular(&self) -> bool {
        self.elements
            .iter()
            .all(|p| p.is_identity() || (1..=2 * self.n).all(|z| p.apply(z) != z))
    }

    /// Orbit partition of {1..2n}; blocks sorted ascending and listed by
    /// minimal element. For a semiregular group every block has size |S|.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; 2 * self.n];
        let mut orbits = Vec::new();
        for start in 1..=2 * self.n {
            if seen[start - 1] {
                continue;
            }
            let mut orbit: BTreeSet<usize> = BTreeSet::new();
            for p in &self.elements {
                orbit.insert(p.apply(start));
            }
            for &z in &orbit {
                seen[z - 1] = true;
            }
            orbits.push(orbit.into_iter().collect());
        }
        orbits
    }

    /// C_{G*}(S) = {h in G* : hs = sh for all s in S}, computed by scanning G*.
    pub fn centralizer_in_gstar(&self) -> Result<PermGroup> {
        if !self.within_gstar {
            return Err(Error::GroupOutsideGstar);
        }
        let ambient = PermGroup::gstar(self.n);
        let elements = ambient
            .elements
            .into_iter()
            .filter(|h| self.elements.iter().all(|s| h.commutes_with(s)))
            .collect();
        Ok(PermGroup::from_elements(self.n, elements))
    }

    /// For n odd and S <= G* semiregular, builds an order-2 element of
    /// C_{G*}(S) outside G, i.e. a matching commuting with all of S.
    ///
    /// When S <= G the W-orbits are paired with the M-orbits in order of
    /// their minimal elements; otherwise the first involution of S in
    /// canonical order transports the orbit representatives. Any valid
    /// choice would do; these make the output reproducible.
    pub fn commuting_involution(&self) -> Result<Permutation> {
        let n = self.n;
        if n.is_multiple_of(2) {
            return Err(Error::EvenSize(n));
        }
        if !self.within_gstar {
            return Err(Error::GroupOutsideGstar);
        }
        if !self.is_semiregular() {
            let culprit = self
                .elements
                .iter()
                .find(|p| !p.is_identity() && (1..=2 * n).any(|z| p.apply(z) == z))
                .unwrap();
            return Err(Error::NotSemiregular(culprit.to_string()));
        }
        let mut images = vec![0usize; 2 * n];
        if self.within_g {
            let orbits = self.orbits();
            let w_orbits: Vec<&Vec<usize>> = orbits.iter().filter(|o| o[0] <= n).collect();
            let m_orbits: Vec<&Vec<usize>> = orbits.iter().filter(|o| o[0] > n).collect();
            debug_assert_eq!(w_orbits.len(), m_orbits.len());
            for (ow, om) in w_orbits.iter().zip(m_orbits.iter()) {
                let xj = ow[0];
                let yj = om[0];
                for t in &self.elements {
                    images[t.apply(xj) - 1] = t.apply(yj);
                    images[t.apply(yj) - 1] = t.apply(xj);
                }
            }
        } else {
            let s_star = self
                .elements
                .iter()
                .find(|t| t.is_involution())
                .expect("even-order semiregular subgroup has an involution");
            for orbit in self.orbits() {
                let xj = *orbit.iter().find(|&&z| z <= n).unwrap();
                let yj = s_star.apply(xj);
                for t in &self.elements {
                    images[t.apply(xj) - 1] = t.apply(yj);
                }
            }
        }
        Permutation::from_images(images)
    }

    /// A small generating set, chosen greedily in canonical order.
    pub fn generating_set(&self) -> Vec<Permutation> {
        let mut gens: Vec<Permutation> = Vec::new();
        let mut span = PermGroup::trivial(self.n);
        for p in &self.elements {
            if span.order() == self.order() {
                break;
            }
            if !span.contains(p) {
                gens.push(p.clone());
                span = PermGroup::generate(self.n, &gens).unwrap();
            }
        }
        gens
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermGroup(n={}, order={})", self.n, self.order())?;
        if self.order() <= 12 {
            write!(f, " {{")?;
            for (i, p) in self.elements.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

/// All permutations of `items`, in lexicographic order.
fn permutations_of(items: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(items.len());
    let mut used = vec![false; items.len()];
    fn rec(
        items: &[usize],
        used: &mut Vec<bool>,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == items.len() {
            out.push(current.clone());
            return;
        }
        for i in 0..items.len() {
            if !used[i] {
                used[i] = true;
                current.push(items[i]);
                rec(items, used, current, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    rec(items, &mut used, &mut current, &mut out);
    out
}

/// Every subgroup of `ambient`, found by closing one generator at a time.
/// Provided for n <= 3 only; larger ambients are out of desk scale.
pub fn all_subgroups(ambient: &PermGroup) -> Result<Vec<PermGroup>> {
    if ambient.n() > 3 {
        return Err(Error::ExhaustiveTooLarge {
            n: ambient.n(),
            count: ambient.order() as u128,
            limit: 3,
        });
    }
    let mut found: BTreeSet<Vec<Permutation>> = BTreeSet::new();
    let trivial = PermGroup::trivial(ambient.n());
    let mut queue: Vec<PermGroup> = vec![trivial.clone()];
    found.insert(trivial.elements.iter().cloned().collect());
    while let Some(sub) = queue.pop() {
        for g in ambient.iter() {
            if sub.contains(g) {
                continue;
            }
            let mut gens: Vec<Permutation> = sub.generating_set();
            gens.push(g.clone());
            let bigger = PermGroup::generate(ambient.n(), &gens)?;
            let key: Vec<Permutation> = bigger.elements.iter().cloned().collect();
            if found.insert(key) {
                queue.push(bigger);
            }
        }
    }
    Ok(found
        .into_iter()
        .map(|elements| PermGroup::from_elements(ambient.n(), elements.into_iter().collect()))
        .collect())
}
