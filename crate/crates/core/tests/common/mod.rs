//! Shared helpers for the integration suites: seeded random generators for
//! permutations, matchings and profiles, plus independent oracles that avoid
//! the library code paths they are meant to check.

#![allow(dead_code)]

use matchsym::profile::{sample_profile, PreferenceProfile, ProfileSpace};
use matchsym::{Matching, PermGroup, Permutation};
use rand::seq::SliceRandom;
use rand::{Rng, RngExt};

/// Uniformly random element of G: independent shuffles of W and M.
pub fn random_g_element<R: Rng>(n: usize, rng: &mut R) -> Permutation {
    let mut w: Vec<usize> = (1..=n).collect();
    let mut m: Vec<usize> = (n + 1..=2 * n).collect();
    w.shuffle(rng);
    m.shuffle(rng);
    let mut images = w;
    images.extend(m);
    Permutation::from_images(images).unwrap()
}

/// Uniformly random element of G*: a G-element, optionally composed with the
/// side swap x <-> n+x.
pub fn random_gstar_element<R: Rng>(n: usize, rng: &mut R) -> Permutation {
    let g = random_g_element(n, rng);
    if rng.random_bool(0.5) {
        let swap: Vec<usize> = (1..=2 * n)
            .map(|z| if z <= n { z + n } else { z - n })
            .collect();
        let swap = Permutation::from_images(swap).unwrap();
        swap.compose(&g).unwrap()
    } else {
        g
    }
}

/// Uniformly random permutation of the whole individual set.
pub fn random_permutation<R: Rng>(n: usize, rng: &mut R) -> Permutation {
    let mut images: Vec<usize> = (1..=2 * n).collect();
    images.shuffle(rng);
    Permutation::from_images(images).unwrap()
}

/// Uniformly random matching.
pub fn random_matching<R: Rng>(n: usize, rng: &mut R) -> Matching {
    let mut men: Vec<usize> = (n + 1..=2 * n).collect();
    men.shuffle(rng);
    let pairs: Vec<(usize, usize)> = men.iter().enumerate().map(|(i, &y)| (i + 1, y)).collect();
    Matching::from_pairs(n, &pairs).unwrap()
}

pub fn random_profile<R: Rng>(n: usize, rng: &mut R) -> PreferenceProfile {
    sample_profile(n, rng)
}

/// Independent fixed-profile check: compares p(phi(z)) with phi applied to
/// p(z) entry by entry, without going through the library action.
pub fn fixed_by_oracle(p: &PreferenceProfile, phi: &Permutation) -> bool {
    let n = p.n();
    (1..=2 * n).all(|z| {
        let source = p.order_of(z).entries();
        let target = p.order_of(phi.apply(z)).entries();
        source
            .iter()
            .zip(target.iter())
            .all(|(&s, &t)| phi.apply(s) == t)
    })
}

/// Burnside orbit count: sum of fixed-profile counts over the group divided
/// by the group order, with the fixed check done by the oracle above.
pub fn burnside_orbit_count(u: &PermGroup, n: usize) -> u64 {
    let space = ProfileSpace::new(n).unwrap();
    let total: u64 = u
        .iter()
        .map(|phi| space.iter().filter(|p| fixed_by_oracle(p, phi)).count() as u64)
        .sum();
    assert_eq!(
        total % u.order() as u64,
        0,
        "Burnside sum must divide evenly"
    );
    total / u.order() as u64
}
