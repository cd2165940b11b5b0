//! The outside-option model: generalized profiles ranking one's own name,
//! generalized matchings with fixed points, their G*-action, stability and
//! Pareto optimality, and the embedding of the ordinary model.

use std::collections::BTreeSet;
use std::fmt;

use crate::action::{self, SymmetryPoint};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;
use crate::profile::{LinearOrder, PreferenceProfile};

/// A profile where woman x ranks M and staying single (her own name), and
/// symmetrically for men.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneralizedProfile {
    n: usize,
    orders: Vec<LinearOrder>,
}

impl GeneralizedProfile {
    pub fn new(n: usize, orders: Vec<LinearOrder>) -> Result<Self> {
        if orders.len() != 2 * n {
            return Err(Error::InvalidProfile(format!(
                "expected {} orders, found {}",
                2 * n,
                orders.len()
            )));
        }
        for (i, order) in orders.iter().enumerate() {
            let z = i + 1;
            let mut expect: Vec<usize> = if z <= n {
                (n + 1..=2 * n).collect()
            } else {
                (1..=n).collect()
            };
            expect.push(z);
            expect.sort_unstable();
            if order.ground() != expect {
                return Err(Error::InvalidProfile(format!(
                    "individual {z} must rank exactly {expect:?}, found {:?}",
                    order.entries()
                )));
            }
        }
        Ok(GeneralizedProfile { n, orders })
    }

    pub fn from_rows(n: usize, rows: &[Vec<usize>]) -> Result<Self> {
        let orders = rows
            .iter()
            .map(|r| LinearOrder::new(r.clone()))
            .collect::<Result<Vec<_>>>()?;
        GeneralizedProfile::new(n, orders)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order_of(&self, z: usize) -> &LinearOrder {
        &self.orders[z - 1]
    }

    pub fn act(&self, phi: &Permutation) -> Result<Self> {
        if phi.n() != self.n {
            return Err(Error::SizeMismatch {
                expected: 2 * self.n,
                found: phi.degree(),
            });
        }
        if !phi.is_in_gstar() {
            return Err(Error::OutsideGstar(phi.to_string()));
        }
        Ok(self.act_unchecked(phi))
    }

    fn act_unchecked(&self, phi: &Permutation) -> Self {
        let inv = phi.inverse();
        let orders = (1..=2 * self.n)
            .map(|z| self.orders[inv.apply(z) - 1].permuted(phi))
            .collect();
        GeneralizedProfile { n: self.n, orders }
    }

    pub fn stabilizer(&self, u: &PermGroup) -> Result<PermGroup> {
        action::stabilizer_of(self, u)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for z in 1..=2 * self.n {
            out.push_str(&format!("{z}:"));
            for e in self.orders[z - 1].entries() {
                out.push_str(&format!(" {e}"));
            }
            out.push('\n');
        }
        out
    }

    /// Same line format as ordinary profiles, each ranking carrying n+1
    /// entries including the individual's own name.
    pub fn parse(input: &str) -> Result<Self> {
        // The ordinary parser does the line handling; re-validate as generalized.
        let mut n: Option<usize> = None;
        let mut rows: Vec<Option<Vec<usize>>> = Vec::new();
        for (idx, raw) in input.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if n.is_none() {
                let rest = line.strip_prefix("n=").ok_or(Error::Parse {
                    line: line_no,
                    msg: format!("expected 'n=<k>', found {line:?}"),
                })?;
                let k: usize = rest.trim().parse().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("bad population size {rest:?}"),
                })?;
                n = Some(k);
                rows = vec![None; 2 * k];
                continue;
            }
            let k = n.unwrap();
            let (who, ranking) = line.split_once(':').ok_or(Error::Parse {
                line: line_no,
                msg: format!("expected '<individual>: <ranking>', found {line:?}"),
            })?;
            let z: usize = who.trim().parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad individual {who:?}"),
            })?;
            if z == 0 || z > 2 * k {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("individual {z} outside 1..{}", 2 * k),
                });
            }
            let entries = ranking
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| Error::Parse {
                        line: line_no,
                        msg: format!("bad ranking entry {t:?}"),
                    })
                })
                .collect::<Result<Vec<usize>>>()?;
            rows[z - 1] = Some(entries);
        }
        let n = n.ok_or(Error::Parse {
            line: 0,
            msg: "missing 'n=<k>' header".into(),
        })?;
        let mut ordered = Vec::with_capacity(2 * n);
        for (i, row) in rows.into_iter().enumerate() {
            ordered.push(row.ok_or(Error::Parse {
                line: 0,
                msg: format!("individual {} missing", i + 1),
            })?);
        }
        GeneralizedProfile::from_rows(n, &ordered)
    }
}

impl fmt::Debug for GeneralizedProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GenProfile[")?;
        for (i, o) in self.orders.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            for (j, e) in o.entries().iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
        }
        write!(f, "]")
    }
}

impl SymmetryPoint for GeneralizedProfile {
    fn half_size(&self) -> usize {
        self.n
    }

    fn act_within_gstar(&self, phi: &Permutation) -> Self {
        self.act_unchecked(phi)
    }
}

/// An involution that pairs across gender or leaves individuals single.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneralizedMatching(Permutation);

impl GeneralizedMatching {
    pub fn from_permutation(p: Permutation) -> Result<Self> {
        let n = p.n();
        let involution_or_id = (1..=2 * n).all(|z| p.apply(p.apply(z)) == z);
        let crossings_ok = (1..=n).all(|x| p.apply(x) == x || p.apply(x) > n);
        if !involution_or_id || !crossings_ok {
            return Err(Error::NotAMatching(
                p.to_string(),
                "generalized matchings are involutions pairing across gender".into(),
            ));
        }
        Ok(GeneralizedMatching(p))
    }

    pub fn identity(n: usize) -> Self {
        GeneralizedMatching(Permutation::identity(n))
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

    pub fn fixed_points(&self) -> Vec<usize> {
        (1..=2 * self.n())
            .filter(|&z| self.0.apply(z) == z)
            .collect()
    }

    pub fn has_fixed_point(&self) -> bool {
        (1..=2 * self.n()).any(|z| self.0.apply(z) == z)
    }

    pub fn conjugate_by(&self, phi: &Permutation) -> Result<Self> {
        GeneralizedMatching::from_permutation(self.0.conjugate_by(phi)?)
    }

    pub fn parse(n: usize, s: &str) -> Result<Self> {
        GeneralizedMatching::from_permutation(Permutation::parse(n, s)?)
    }
}

impl fmt::Display for GeneralizedMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for GeneralizedMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// All generalized matchings: sum over k of C(n,k)^2 k! involutions.
/// Enumerated by choosing matched women, matched men, and a bijection.
pub fn all_generalized_matchings(n: usize) -> BTreeSet<GeneralizedMatching> {
    let mut out = BTreeSet::new();
    let mut images: Vec<usize> = (1..=2 * n).collect();
    fn rec(n: usize, x: usize, images: &mut Vec<usize>, out: &mut BTreeSet<GeneralizedMatching>) {
        if x > n {
            out.insert(
                GeneralizedMatching::from_permutation(
                    Permutation::from_images(images.clone()).unwrap(),
                )
                .unwrap(),
            );
            return;
        }
        // Woman x stays single.
        rec(n, x + 1, images, out);
        // Woman x pairs with a still-single man.
        for y in n + 1..=2 * n {
            if images[y - 1] == y {
                images[x - 1] = y;
                images[y - 1] = x;
                rec(n, x + 1, images, out);
                images[x - 1] = x;
                images[y - 1] = y;
            }
        }
    }
    rec(n, 1, &mut images, &mut out);
    out
}

pub(crate) struct GenRankTable {
    n: usize,
    rank: Vec<u8>,
}

impl GenRankTable {
    pub(crate) fn new(p: &GeneralizedProfile) -> Self {
        let n = p.n();
        let width = n + 1;
        let mut rank = vec![0u8; 2 * n * width];
        for z in 1..=2 * n {
            for (i, &e) in p.order_of(z).entries().iter().enumerate() {
                let local = if e == z {
                    n
                } else if z <= n {
                    e - n - 1
                } else {
                    e - 1
                };
                rank[(z - 1) * width + local] = (i + 1) as u8;
            }
        }
        GenRankTable { n, rank }
    }

    pub(crate) fn rank_of(&self, z: usize, partner: usize) -> usize {
        let local = if partner == z {
            self.n
        } else if z <= self.n {
            partner - self.n - 1
        } else {
            partner - 1
        };
        self.rank[(z - 1) * (self.n + 1) + local] as usize
    }
}

/// Individually rational and free of blocking pairs.
pub fn is_stable_gen(p: &GeneralizedProfile, m: &GeneralizedMatching) -> bool {
    let n = p.n();
    let rank = GenRankTable::new(p);
    // No one prefers staying single to their assigned partner.
    if (1..=2 * n).any(|z| rank.rank_of(z, z) < rank.rank_of(z, m.partner(z))) {
        return false;
    }
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

pub(crate) fn dominates_gen(
    rank: &GenRankTable,
    n: usize,
    better: &GeneralizedMatching,
    worse: &GeneralizedMatching,
) -> bool {
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

/// No generalized matching makes someone better off and nobody worse off.
pub fn is_pareto_gen(p: &GeneralizedProfile, m: &GeneralizedMatching) -> bool {
    let rank = GenRankTable::new(p);
    let n = p.n();
    !all_generalized_matchings(n)
        .iter()
        .any(|other| dominates_gen(&rank, n, other, m))
}

/// The embedding of the ordinary model: appends each individual's own name
/// at the bottom of their column, landing in the profiles where staying
/// single is everyone's worst option.
pub fn embed_phi(p: &PreferenceProfile) -> GeneralizedProfile {
    let n = p.n();
    let orders = (1..=2 * n)
        .map(|z| {
            let mut ranking = p.order_of(z).entries().to_vec();
            ranking.push(z);
            LinearOrder::new(ranking).unwrap()
        })
        .collect();
    GeneralizedProfile { n, orders }
}

/// True when staying single is ranked last by every individual.
pub fn in_pbar_star(p: &GeneralizedProfile) -> bool {
    (1..=2 * p.n()).all(|z| p.order_of(z).worst() == z)
}

/// The generalized container: matchings commuting with the whole stabilizer.
/// Always contains the identity, so it is never empty; the suite reports it
/// without drawing conclusions for the open existence question.
pub fn container_gen(
    p: &GeneralizedProfile,
    u: &PermGroup,
) -> Result<BTreeSet<GeneralizedMatching>> {
    let stab = p.stabilizer(u)?;
    let nontrivial: Vec<&Permutation> = stab.iter().filter(|phi| !phi.is_identity()).collect();
    Ok(all_generalized_matchings(p.n())
        .into_iter()
        .filter(|m| {
            nontrivial
                .iter()
                .all(|phi| m.as_permutation().commutes_with(phi))
        })
        .collect())
}

/// Exhaustive generalized profile space; only n = 2 is desk scale
/// (((n+1)!)^(2n) profiles).
pub struct GeneralizedSpace {
    n: usize,
    rankings: Vec<Vec<Vec<usize>>>,
    count: u64,
}

impl GeneralizedSpace {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooSmall { n, min: 2 });
        }
        if n > 2 {
            let fact: u128 = (1..=(n as u128 + 1)).product();
            return Err(Error::ExhaustiveTooLarge {
                n,
                count: fact.pow(2 * n as u32),
                limit: 2,
            });
        }
        let mut rankings = Vec::with_capacity(2 * n);
        for z in 1..=2 * n {
            let mut ground: Vec<usize> = if z <= n {
                (n + 1..=2 * n).collect()
            } else {
                (1..=n).collect()
            };
            ground.push(z);
            ground.sort_unstable();
            rankings.push(permutations_sorted(&ground));
        }
        let per: u64 = rankings[0].len() as u64;
        let count = per.pow(2 * n as u32);
        Ok(GeneralizedSpace { n, rankings, count })
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn get(&self, idx: u64) -> GeneralizedProfile {
        let base = self.rankings[0].len() as u64;
        let mut digits = vec![0u64; 2 * self.n];
        let mut rem = idx;
        for slot in (0..2 * self.n).rev() {
            digits[slot] = rem % base;
            rem /= base;
        }
        let orders = digits
            .iter()
            .enumerate()
            .map(|(slot, &d)| LinearOrder::new(self.rankings[slot][d as usize].clone()).unwrap())
            .collect();
        GeneralizedProfile { n: self.n, orders }
    }

    pub fn iter(&self) -> impl Iterator<Item = GeneralizedProfile> + '_ {
        (0..self.count).map(move |i| self.get(i))
    }
}

fn permutations_sorted(items: &[usize]) -> Vec<Vec<usize>> {
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::tablep;

    fn tablepgen() -> GeneralizedProfile {
        GeneralizedProfile::from_rows(
            3,
            &[
                vec![4, 1, 6, 5],
                vec![4, 6, 2, 5],
                vec![6, 5, 3, 4],
                vec![2, 1, 3, 4],
                vec![3, 5, 2, 1],
                vec![6, 2, 1, 3],
            ],
        )
        .unwrap()
    }

    #[test]
    fn generalized_matchings_n2_list() {
        let all = all_generalized_matchings(2);
        let expect: BTreeSet<GeneralizedMatching> = [
            "id",
            "(1 3)",
            "(1 4)",
            "(2 3)",
            "(2 4)",
            "(1 3)(2 4)",
            "(1 4)(2 3)",
        ]
        .iter()
        .map(|s| GeneralizedMatching::parse(2, s).unwrap())
        .collect();
        assert_eq!(all, expect);
        assert!(all.contains(&GeneralizedMatching::identity(2)));
        assert_eq!(all_generalized_matchings(3).len(), 34);
    }

    #[test]
    fn generalized_matching_validation() {
        // Within-side pairing is rejected.
        assert!(GeneralizedMatching::parse(2, "(1 2)").is_err());
        // Non-involutions are rejected.
        assert!(GeneralizedMatching::parse(2, "(1 3 2 4)").is_err());
    }

    #[test]
    fn act_gen_first_worked_example() {
        let p = tablepgen();
        let phi = Permutation::parse(3, "(1 2 3)(4 6)").unwrap();
        let expect = GeneralizedProfile::from_rows(
            3,
            &[
                vec![4, 5, 1, 6],
                vec![6, 2, 4, 5],
                vec![6, 4, 3, 5],
                vec![4, 3, 2, 1],
                vec![1, 5, 3, 2],
                vec![3, 2, 1, 6],
            ],
        )
        .unwrap();
        assert_eq!(p.act(&phi).unwrap(), expect);
    }

    #[test]
    fn act_gen_second_worked_example() {
        let p = tablepgen();
        let phi = Permutation::parse(3, "(1 4 2 6)(3 5)").unwrap();
        // Derived by applying the definition column by column.
        let expect = GeneralizedProfile::from_rows(
            3,
            &[
                vec![1, 6, 4, 5],
                vec![6, 4, 5, 2],
                vec![5, 3, 6, 4],
                vec![2, 4, 1, 3],
                vec![1, 3, 5, 2],
                vec![2, 1, 6, 3],
            ],
        )
        .unwrap();
        assert_eq!(p.act(&phi).unwrap(), expect);
    }

    #[test]
    fn act_gen_identity() {
        let p = tablepgen();
        assert_eq!(p.act(&Permutation::identity(3)).unwrap(), p);
    }

    #[test]
    fn conjugating_generalized_matchings() {
        let m = GeneralizedMatching::parse(3, "(1 5)(2 6)").unwrap();
        let phi = Permutation::parse(3, "(1 4 2 6)(3 5)").unwrap();
        assert_eq!(
            m.conjugate_by(&phi).unwrap(),
            GeneralizedMatching::parse(3, "(3 4)(1 6)").unwrap()
        );
    }

    #[test]
    fn embedding_examples() {
        let p = tablep();
        let pbar = embed_phi(&p);
        assert_eq!(pbar.order_of(1).entries(), &[4, 5, 6, 1]);
        assert_eq!(pbar.order_of(6).entries(), &[3, 2, 1, 6]);
        assert!(in_pbar_star(&pbar));
        assert!(!in_pbar_star(&tablepgen()));
    }

    #[test]
    fn stability_examples() {
        // Everyone's top choice pairing is stable.
        let pbar = embed_phi(
            &crate::profile::PreferenceProfile::from_rows(
                2,
                &[vec![3, 4], vec![4, 3], vec![1, 2], vec![2, 1]],
            )
            .unwrap(),
        );
        let mu = GeneralizedMatching::parse(2, "(1 3)(2 4)").unwrap();
        assert!(is_stable_gen(&pbar, &mu));
        assert!(is_pareto_gen(&pbar, &mu));

        // On embedded profiles the identity leaves everyone single: never
        // Pareto optimal.
        assert!(!is_pareto_gen(&pbar, &GeneralizedMatching::identity(2)));
        assert!(!is_stable_gen(&pbar, &GeneralizedMatching::identity(2)));
    }

    #[test]
    fn generalized_space_count() {
        let space = GeneralizedSpace::new(2).unwrap();
        assert_eq!(space.count(), 1296);
        assert!(GeneralizedSpace::new(3).is_err());
    }

    #[test]
    fn gen_parse_round_trip() {
        let p = tablepgen();
        assert_eq!(GeneralizedProfile::parse(&p.to_text()).unwrap(), p);
    }
}
