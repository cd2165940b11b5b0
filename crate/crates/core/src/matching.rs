//! Matchings, optimality predicates, deferred acceptance for both sides, the
//! envy measures, and the named mechanism correspondences.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::profile::PreferenceProfile;

/// A fixed-point-free involution pairing each woman with a man.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matching(Permutation);

impl Matching {
    pub fn from_permutation(p: Permutation) -> Result<Self> {
        if !p.is_matching_perm() {
            let reason = if !p.is_in_gstar() {
                "does not preserve the partition {W, M}"
            } else if p.is_in_g() {
                "maps W to W instead of swapping the sides"
            } else {
                "is not an involution"
            };
            return Err(Error::NotAMatching(p.to_string(), reason.into()));
        }
        Ok(Matching(p))
    }

    /// Builds a matching from woman/man pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let cycles: Vec<Vec<usize>> = pairs.iter().map(|&(x, y)| vec![x, y]).collect();
        Matching::from_permutation(Permutation::from_cycles(n, &cycles)?)
    }

    /// The canonical least matching (1 n+1)(2 n+2)...(n 2n).
    pub fn canonical_least(n: usize) -> Self {
        let pairs: Vec<(usize, usize)> = (1..=n).map(|x| (x, x + n)).collect();
        Matching::from_pairs(n, &pairs).unwrap()
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn partner(&self, z: usize) -> usize {
        self.0.apply(z)
    }

    pub fn as_permutation(&self) -> &Permutation {
        &self.0
    }

    /// mu^phi; still a matching whenever phi is in G*.
    pub fn conjugate_by(&self, phi: &Permutation) -> Result<Matching> {
        Matching::from_permutation(self.0.conjugate_by(phi)?)
    }

    pub fn commutes_with(&self, phi: &Permutation) -> bool {
        self.0.commutes_with(phi)
    }

    pub fn parse(n: usize, s: &str) -> Result<Self> {
        Matching::from_permutation(Permutation::parse(n, s)?)
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// All n! matchings, in image-sequence order.
pub fn all_matchings(n: usize) -> BTreeSet<Matching> {
    let men: Vec<usize> = (n + 1..=2 * n).collect();
    let mut out = BTreeSet::new();
    let mut assignment = Vec::with_capacity(n);
    fn rec(
        n: usize,
        men: &[usize],
        used: &mut Vec<bool>,
        assignment: &mut Vec<usize>,
        out: &mut BTreeSet<Matching>,
    ) {
        if assignment.len() == n {
            let pairs: Vec<(usize, usize)> = assignment
                .iter()
                .enumerate()
                .map(|(i, &y)| (i + 1, y))
                .collect();
            out.insert(Matching::from_pairs(n, &pairs).unwrap());
            return;
        }
        for i in 0..men.len() {
            if !used[i] {
                used[i] = true;
                assignment.push(men[i]);
                rec(n, men, used, assignment, out);
                assignment.pop();
                used[i] = false;
            }
        }
    }
    let mut used = vec![false; n];
    rec(n, &men, &mut used, &mut assignment, &mut out);
    out
}

/// Flat rank lookup table: rank_of(z, partner) in O(1).
pub(crate) struct RankTable {
    n: usize,
    rank: Vec<u8>,
}

impl RankTable {
    pub(crate) fn new(p: &PreferenceProfile) -> Self {
        let n = p.n();
        let mut rank = vec![0u8; 2 * n * n];
        for z in 1..=2 * n {
            for (i, &e) in p.order_of(z).entries().iter().enumerate() {
                let local = if z <= n { e - n - 1 } else { e - 1 };
                rank[(z - 1) * n + local] = (i + 1) as u8;
            }
        }
        RankTable { n, rank }
    }

    pub(crate) fn rank_of(&self, z: usize, partner: usize) -> usize {
        let local = if z <= self.n {
            partner - self.n - 1
        } else {
            partner - 1
        };
        self.rank[(z - 1) * self.n + local] as usize
    }
}

/// Exact set of blocking pairs (x, y) in W x M, sorted.
pub fn blocking_pairs(p: &PreferenceProfile, m: &Matching) -> Vec<(usize, usize)> {
    assert_eq!(p.n(), m.n(), "profile and matching sizes differ");
    let n = p.n();
    let rank = RankTable::new(p);
    let mut pairs = Vec::new();
    for x in 1..=n {
        for y in n + 1..=2 * n {
            if rank.rank_of(x, y) < rank.rank_of(x, m.partner(x))
                && rank.rank_of(y, x) < rank.rank_of(y, m.partner(y))
            {
                pairs.push((x, y));
            }
        }
    }
    pairs
}

pub fn is_stable(p: &PreferenceProfile, m: &Matching) -> bool {
    let n = p.n();
    let rank = RankTable::new(p);
    is_stable_with(&rank, n, m)
}

fn is_stable_with(rank: &RankTable, n: usize, m: &Matching) -> bool {
    for x in 1..=n {
        let rx = rank.rank_of(x, m.partner(x));
        for y in n + 1..=2 * n {
            if rank.rank_of(x, y) < rx && rank.rank_of(y, x) < rank.rank_of(y, m.partner(y)) {
                return false;
            }
        }
    }
    true
}

fn dominates(rank: &RankTable, n: usize, better: &Matching, worse: &Matching) -> bool {
    let mut strict = false;
    for z in 1..=2 * n {
        let rb = rank.rank_of(z, better.partner(z));
        let rw = rank.rank_of(z, worse.partner(z));
        if rb > rw {
            return false;
        }
        if rb < rw {
            strict = true;
        }
    }
    strict
}

fn strictly_dominates(rank: &RankTable, n: usize, better: &Matching, worse: &Matching) -> bool {
    (1..=2 * n).all(|z| rank.rank_of(z, better.partner(z)) < rank.rank_of(z, worse.partner(z)))
}

/// No other matching makes someone better off and nobody worse off.
/// Decided by exhaustive dominance scan over all n! matchings.
pub fn is_pareto(p: &PreferenceProfile, m: &Matching) -> bool {
    let rank = RankTable::new(p);
    let n = p.n();
    !all_matchings(n)
        .iter()
        .any(|other| dominates(&rank, n, other, m))
}

/// No other matching makes every individual strictly better off.
pub fn is_weak_pareto(p: &PreferenceProfile, m: &Matching) -> bool {
    let rank = RankTable::new(p);
    let n = p.n();
    !all_matchings(n)
        .iter()
        .any(|other| strictly_dominates(&rank, n, other, m))
}

/// Someone is matched above their worst choice.
pub fn is_min_optimal(p: &PreferenceProfile, m: &Matching) -> bool {
    let rank = RankTable::new(p);
    let n = p.n();
    (1..=2 * n).any(|z| rank.rank_of(z, m.partner(z)) < n)
}

/// The worst-choice map sigma_p(z) = Rank^{-1}_{p(z)}(n), when it happens to
/// be a matching. MO(p) = all matchings minus sigma_p when present.
pub fn sigma_p(p: &PreferenceProfile) -> Option<Matching> {
    let images: Vec<usize> = (1..=2 * p.n()).map(|z| p.order_of(z).worst()).collect();
    let perm = Permutation::from_images(images).ok()?;
    Matching::from_permutation(perm).ok()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Women,
    Men,
}

impl FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "women" | "w" => Ok(Side::Women),
            "men" | "m" => Ok(Side::Men),
            other => Err(Error::InvalidProfile(format!("unknown side {other:?}"))),
        }
    }
}

/// Deferred acceptance with the given side proposing. Proposers are processed
/// in ascending individual order within each round; the result is the
/// proposer-optimal stable matching either way.
pub fn gale_shapley(p: &PreferenceProfile, side: Side) -> Matching {
    let n = p.n();
    let rank = RankTable::new(p);
    let proposers: Vec<usize> = match side {
        Side::Women => (1..=n).collect(),
        Side::Men => (n + 1..=2 * n).collect(),
    };
    let mut next_choice = vec![0usize; 2 * n + 1];
    let mut partner = vec![0usize; 2 * n + 1];
    loop {
        let mut progressed = false;
        for &w in &proposers {
            if partner[w] != 0 || next_choice[w] >= n {
                continue;
            }
            let target = p.order_of(w).ranked(next_choice[w] + 1);
            next_choice[w] += 1;
            progressed = true;
            let holder = partner[target];
            if holder == 0 {
                partner[target] = w;
                partner[w] = target;
            } else if rank.rank_of(target, w) < rank.rank_of(target, holder) {
                partner[holder] = 0;
                partner[target] = w;
                partner[w] = target;
            }
        }
        if !progressed {
            break;
        }
    }
    let pairs: Vec<(usize, usize)> = (1..=n).map(|x| (x, partner[x])).collect();
    Matching::from_pairs(n, &pairs).expect("deferred acceptance pairs everyone")
}

/// |sum of women's ranks - sum of men's ranks|: the sex-equality score.
pub fn delta(p: &PreferenceProfile, m: &Matching) -> usize {
    let n = p.n();
    let rank = RankTable::new(p);
    let women: usize = (1..=n).map(|x| rank.rank_of(x, m.partner(x))).sum();
    let men: usize = (n + 1..=2 * n).map(|y| rank.rank_of(y, m.partner(y))).sum();
    women.abs_diff(men)
}

/// Total rank sum: the overall level of envy, between 2n and 2n*n.
pub fn envy_total(p: &PreferenceProfile, m: &Matching) -> usize {
    let n = p.n();
    let rank = RankTable::new(p);
    (1..=2 * n).map(|z| rank.rank_of(z, m.partner(z))).sum()
}

/// The named mechanism correspondences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MechanismId {
    To,
    St,
    Po,
    Wpo,
    Mo,
    Gs,
    GsW,
    GsM,
    Se,
    Es,
}

impl MechanismId {
    pub const ALL: [MechanismId; 10] = [
        MechanismId::To,
        MechanismId::St,
        MechanismId::Po,
        MechanismId::Wpo,
        MechanismId::Mo,
        MechanismId::Gs,
        MechanismId::GsW,
        MechanismId::GsM,
        MechanismId::Se,
        MechanismId::Es,
    ];

    /// Evaluates the correspondence; always a nonempty subset of the matchings.
    pub fn evaluate(&self, p: &PreferenceProfile) -> BTreeSet<Matching> {
        let n = p.n();
        let rank = RankTable::new(p);
        let everything = all_matchings(n);
        match self {
            MechanismId::To => everything,
            MechanismId::St => everything
                .into_iter()
                .filter(|m| is_stable_with(&rank, n, m))
                .collect(),
            MechanismId::Po => {
                let all: Vec<Matching> = everything.iter().cloned().collect();
                everything
                    .into_iter()
                    .filter(|m| !all.iter().any(|other| dominates(&rank, n, other, m)))
                    .collect()
            }
            MechanismId::Wpo => {
                let all: Vec<Matching> = everything.iter().cloned().collect();
                everything
                    .into_iter()
                    .filter(|m| {
                        !all.iter()
                            .any(|other| strictly_dominates(&rank, n, other, m))
                    })
                    .collect()
            }
            MechanismId::Mo => everything
                .into_iter()
                .filter(|m| (1..=2 * n).any(|z| rank.rank_of(z, m.partner(z)) < n))
                .collect(),
            MechanismId::Gs => [gale_shapley(p, Side::Women), gale_shapley(p, Side::Men)]
                .into_iter()
                .collect(),
            MechanismId::GsW => [gale_shapley(p, Side::Women)].into_iter().collect(),
            MechanismId::GsM => [gale_shapley(p, Side::Men)].into_iter().collect(),
            MechanismId::Se => argmin_over_stable(p, &rank, delta),
            MechanismId::Es => argmin_over_stable(p, &rank, envy_total),
        }
    }

    /// The symmetry level guaranteed by the roster results: GS_w and GS_m are
    /// anonymous only; everything else is fully symmetric.
    pub fn guaranteed_symmetric_under_g_only(&self) -> bool {
        matches!(self, MechanismId::GsW | MechanismId::GsM)
    }
}

fn argmin_over_stable<F>(p: &PreferenceProfile, rank: &RankTable, score: F) -> BTreeSet<Matching>
where
    F: Fn(&PreferenceProfile, &Matching) -> usize,
{
    let n = p.n();
    let stable: Vec<Matching> = all_matchings(n)
        .into_iter()
        .filter(|m| is_stable_with(rank, n, m))
        .collect();
    let best = stable
        .iter()
        .map(|m| score(p, m))
        .min()
        .expect("ST is nonempty");
    stable.into_iter().filter(|m| score(p, m) == best).collect()
}

impl fmt::Display for MechanismId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MechanismId::To => "TO",
            MechanismId::St => "ST",
            MechanismId::Po => "PO",
            MechanismId::Wpo => "WPO",
            MechanismId::Mo => "MO",
            MechanismId::Gs => "GS",
            MechanismId::GsW => "GS_w",
            MechanismId::GsM => "GS_m",
            MechanismId::Se => "SE",
            MechanismId::Es => "ES",
        };
        write!(f, "{s}")
    }
}

impl FromStr for MechanismId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "TO" => Ok(MechanismId::To),
            "ST" => Ok(MechanismId::St),
            "PO" => Ok(MechanismId::Po),
            "WPO" => Ok(MechanismId::Wpo),
            "MO" => Ok(MechanismId::Mo),
            "GS" => Ok(MechanismId::Gs),
            "GS_W" => Ok(MechanismId::GsW),
            "GS_M" => Ok(MechanismId::GsM),
            "SE" => Ok(MechanismId::Se),
            "ES" => Ok(MechanismId::Es),
            other => Err(Error::InvalidProfile(format!(
                "unknown mechanism {other:?}"
            ))),
        }
    }
}

/// Conjugates every matching in a set.
pub fn conjugate_set(set: &BTreeSet<Matching>, phi: &Permutation) -> Result<BTreeSet<Matching>> {
    set.iter().map(|m| m.conjugate_by(phi)).collect()
}
