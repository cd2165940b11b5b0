//! Linear orders, preference profiles, the action p^phi of G* on the profile
//! space, stabilizers, and orbit-transversal enumeration.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;

use crate::action::SymmetryPoint;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

/// A strict linear order written as a list from best to worst.
///
/// The ground set is implicit: it is exactly the set of entries.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearOrder {
    ranking: Vec<usize>,
}

impl LinearOrder {
    pub fn new(ranking: Vec<usize>) -> Result<Self> {
        if ranking.is_empty() {
            return Err(Error::InvalidOrder("empty ranking".into()));
        }
        let mut sorted = ranking.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidOrder(format!(
                "ranking {ranking:?} repeats an entry"
            )));
        }
        Ok(LinearOrder { ranking })
    }

    /// 1-based position of `x`, i.e. |{y : y weakly preferred to x}|.
    pub fn rank(&self, x: usize) -> Result<usize> {
        self.ranking
            .iter()
            .position(|&y| y == x)
            .map(|i| i + 1)
            .ok_or(Error::RankDomain(x))
    }

    /// The entry at 1-based position `k`.
    pub fn ranked(&self, k: usize) -> usize {
        self.ranking[k - 1]
    }

    pub fn top(&self) -> usize {
        self.ranking[0]
    }

    pub fn worst(&self) -> usize {
        *self.ranking.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.ranking.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranking.is_empty()
    }

    pub fn entries(&self) -> &[usize] {
        &self.ranking
    }

    /// phi R = [phi(x1), ..., phi(xm)]: maps every entry through `phi`.
    pub fn permuted(&self, phi: &Permutation) -> LinearOrder {
        LinearOrder {
            ranking: self.ranking.iter().map(|&x| phi.apply(x)).collect(),
        }
    }

    /// Ground set, sorted ascending.
    pub fn ground(&self) -> Vec<usize> {
        let mut g = self.ranking.clone();
        g.sort_unstable();
        g
    }
}

impl fmt::Debug for LinearOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.ranking)
    }
}

/// One linear order per individual: women rank M, men rank W.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PreferenceProfile {
    n: usize,
    orders: Vec<LinearOrder>,
}

impl PreferenceProfile {
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
            let expect: Vec<usize> = if z <= n {
                (n + 1..=2 * n).collect()
            } else {
                (1..=n).collect()
            };
            if order.ground() != expect {
                return Err(Error::InvalidProfile(format!(
                    "individual {z} must rank exactly {expect:?}, found {:?}",
                    order.entries()
                )));
            }
        }
        Ok(PreferenceProfile { n, orders })
    }

    /// Convenience constructor from plain ranking rows, row z first.
    pub fn from_rows(n: usize, rows: &[Vec<usize>]) -> Result<Self> {
        let orders = rows
            .iter()
            .map(|r| LinearOrder::new(r.clone()))
            .collect::<Result<Vec<_>>>()?;
        PreferenceProfile::new(n, orders)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order_of(&self, z: usize) -> &LinearOrder {
        &self.orders[z - 1]
    }

    /// The acted profile p^phi with p^phi(z) = phi p(phi^-1(z)).
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

    pub(crate) fn act_unchecked(&self, phi: &Permutation) -> Self {
        let inv = phi.inverse();
        let orders = (1..=2 * self.n)
            .map(|z| self.orders[inv.apply(z) - 1].permuted(phi))
            .collect();
        PreferenceProfile { n: self.n, orders }
    }

    /// Whether p^phi = p, checked without materializing p^phi.
    pub fn fixed_by_perm(&self, phi: &Permutation) -> bool {
        // p^phi = p  iff  p(phi(z)) = phi p(z) for every z.
        (1..=2 * self.n).all(|z| {
            let source = &self.orders[z - 1].ranking;
            let target = &self.orders[phi.apply(z) - 1].ranking;
            source
                .iter()
                .zip(target.iter())
                .all(|(&s, &t)| phi.apply(s) == t)
        })
    }

    /// Compares p^phi with `other` lexicographically without materializing.
    fn acted_cmp(&self, phi: &Permutation, inv: &Permutation, other: &Self) -> Ordering {
        for z in 1..=2 * self.n {
            let source = &self.orders[inv.apply(z) - 1].ranking;
            let target = &other.orders[z - 1].ranking;
            for (s, t) in source.iter().zip(target.iter()) {
                match phi.apply(*s).cmp(t) {
                    Ordering::Equal => {}
                    ord => return ord,
                }
            }
        }
        Ordering::Equal
    }

    /// Whether rep^psi = self, checked without materializing.
    fn is_acted_from(&self, rep: &Self, psi: &Permutation) -> bool {
        (1..=2 * self.n).all(|z| {
            let source = &rep.orders[z - 1].ranking;
            let target = &self.orders[psi.apply(z) - 1].ranking;
            source
                .iter()
                .zip(target.iter())
                .all(|(&s, &t)| psi.apply(s) == t)
        })
    }

    /// Stab_U(p) = {phi in U : p^phi = p}.
    pub fn stabilizer(&self, u: &PermGroup) -> Result<PermGroup> {
        if u.n() != self.n {
            return Err(Error::SizeMismatch {
                expected: 2 * self.n,
                found: 2 * u.n(),
            });
        }
        if !u.within_gstar() {
            return Err(Error::GroupOutsideGstar);
        }
        let fixing: Vec<Permutation> = u
            .iter()
            .filter(|phi| self.fixed_by_perm(phi))
            .cloned()
            .collect();
        PermGroup::generate(self.n, &fixing)
    }

    /// True when p is the lexicographic minimum of its U-orbit.
    pub fn is_canonical_under(&self, u: &PermGroup) -> Result<bool> {
        if !u.within_gstar() {
            return Err(Error::GroupOutsideGstar);
        }
        for phi in u.iter() {
            let inv = phi.inverse();
            if self.acted_cmp(phi, &inv, self) == Ordering::Less {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The least profile in the orbit p^U and the least transporter phi with
    /// rep^phi = p.
    pub fn canonical_representative(&self, u: &PermGroup) -> Result<(Self, Permutation)> {
        if u.n() != self.n {
            return Err(Error::SizeMismatch {
                expected: 2 * self.n,
                found: 2 * u.n(),
            });
        }
        if !u.within_gstar() {
            return Err(Error::GroupOutsideGstar);
        }
        let mut rep = self.clone();
        for phi in u.iter() {
            let inv = phi.inverse();
            if self.acted_cmp(phi, &inv, &rep) == Ordering::Less {
                rep = self.act_unchecked(phi);
            }
        }
        for psi in u.iter() {
            if self.is_acted_from(&rep, psi) {
                return Ok((rep, psi.clone()));
            }
        }
        unreachable!("orbit minimum must reach p through some group element")
    }

    /// Canonical multi-line text form.
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

    /// Parses the text form; individuals may appear in any order.
    pub fn parse(input: &str) -> Result<Self> {
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
                if k < 2 {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "n must be at least 2".into(),
                    });
                }
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
            if rows[z - 1].is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("individual {z} listed twice"),
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
            let row = row.ok_or(Error::Parse {
                line: 0,
                msg: format!("individual {} missing", i + 1),
            })?;
            ordered.push(row);
        }
        PreferenceProfile::from_rows(n, &ordered)
    }

    /// Single-line form used inside mechanism table files:
    /// rankings in individual order, entries comma-separated, rows
    /// semicolon-separated.
    pub fn inline(&self) -> String {
        self.orders
            .iter()
            .map(|o| {
                o.entries()
                    .iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn parse_inline(n: usize, s: &str) -> Result<Self> {
        let rows = s
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|t| {
                        t.trim().parse::<usize>().map_err(|_| Error::Parse {
                            line: 0,
                            msg: format!("bad inline entry {t:?}"),
                        })
                    })
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<Vec<Vec<usize>>>>()?;
        PreferenceProfile::from_rows(n, &rows)
    }

    /// Stable 64-bit FNV-1a fingerprint of the canonical encoding.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |b: u8| {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        };
        eat(self.n as u8);
        for o in &self.orders {
            for &e in o.entries() {
                eat(e as u8);
            }
            eat(0xff);
        }
        h
    }
}

impl fmt::Debug for PreferenceProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Profile[{}]", self.inline())
    }
}

impl SymmetryPoint for PreferenceProfile {
    fn half_size(&self) -> usize {
        self.n
    }

    fn act_within_gstar(&self, phi: &Permutation) -> Self {
        self.act_unchecked(phi)
    }

    fn fixed_by(&self, phi: &Permutation) -> bool {
        self.fixed_by_perm(phi)
    }
}

/// Number of preference profiles (n!)^(2n).
pub fn profile_count(n: usize) -> u128 {
    let fact: u128 = (1..=n as u128).product();
    fact.pow(2 * n as u32)
}

/// Exhaustive, lexicographically ordered profile space; desk scale caps it at
/// n <= 3 ((3!)^6 = 46656 profiles).
pub struct ProfileSpace {
    n: usize,
    women_orders: Vec<Vec<usize>>,
    men_orders: Vec<Vec<usize>>,
    count: u64,
}

pub const EXHAUSTIVE_LIMIT: usize = 3;

impl ProfileSpace {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooSmall { n, min: 2 });
        }
        if n > EXHAUSTIVE_LIMIT {
            return Err(Error::ExhaustiveTooLarge {
                n,
                count: profile_count(n),
                limit: EXHAUSTIVE_LIMIT,
            });
        }
        let women_orders = all_rankings(&(n + 1..=2 * n).collect::<Vec<_>>());
        let men_orders = all_rankings(&(1..=n).collect::<Vec<_>>());
        let count = profile_count(n) as u64;
        Ok(ProfileSpace {
            n,
            women_orders,
            men_orders,
            count,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// The idx-th profile in lexicographic order (individual 1's ranking is
    /// the most significant digit).
    pub fn get(&self, idx: u64) -> PreferenceProfile {
        let base = self.women_orders.len() as u64;
        let mut orders = Vec::with_capacity(2 * self.n);
        let mut rem = idx;
        let mut digits = vec![0u64; 2 * self.n];
        for slot in (0..2 * self.n).rev() {
            digits[slot] = rem % base;
            rem /= base;
        }
        for (slot, &d) in digits.iter().enumerate() {
            let pool = if slot < self.n {
                &self.women_orders
            } else {
                &self.men_orders
            };
            orders.push(LinearOrder {
                ranking: pool[d as usize].clone(),
            });
        }
        PreferenceProfile { n: self.n, orders }
    }

    pub fn iter(&self) -> impl Iterator<Item = PreferenceProfile> + '_ {
        (0..self.count).map(move |i| self.get(i))
    }

    pub fn par_iter(&self) -> impl IndexedParallelIterator<Item = PreferenceProfile> + '_ {
        (0..self.count as usize)
            .into_par_iter()
            .map(move |i| self.get(i as u64))
    }
}

/// All rankings of `items`, in lexicographic order.
fn all_rankings(items: &[usize]) -> Vec<Vec<usize>> {
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

/// Draws a uniformly random profile; every individual's ranking is an
/// independent uniform shuffle.
pub fn sample_profile<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> PreferenceProfile {
    use rand::seq::SliceRandom;
    let mut orders = Vec::with_capacity(2 * n);
    for z in 1..=2 * n {
        let mut ranking: Vec<usize> = if z <= n {
            (n + 1..=2 * n).collect()
        } else {
            (1..=n).collect()
        };
        ranking.shuffle(rng);
        orders.push(LinearOrder { ranking });
    }
    PreferenceProfile { n, orders }
}

/// One canonical representative per U-orbit, covering the whole space.
pub fn orbit_transversal(u: &PermGroup, n: usize) -> Result<Vec<PreferenceProfile>> {
    if u.n() != n {
        return Err(Error::SizeMismatch {
            expected: 2 * n,
            found: 2 * u.n(),
        });
    }
    if !u.within_gstar() {
        return Err(Error::GroupOutsideGstar);
    }
    let space = ProfileSpace::new(n)?;
    Ok(space
        .par_iter()
        .filter(|p| p.is_canonical_under(u).unwrap())
        .collect())
}

/// Generic stabilizer, shared with the generalized model.
pub use crate::action::stabilizer_of;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{pspeciale, tablep};

    #[test]
    fn rank_examples() {
        let p = tablep();
        assert_eq!(p.order_of(1).rank(4).unwrap(), 1);
        assert_eq!(p.order_of(1).rank(6).unwrap(), 3);
        assert_eq!(p.order_of(3).rank(5).unwrap(), 2);
        assert!(matches!(p.order_of(1).rank(1), Err(Error::RankDomain(1))));
    }

    #[test]
    fn permute_order_examples() {
        let id = Permutation::identity(3);
        let r = LinearOrder::new(vec![4, 5, 6]).unwrap();
        assert_eq!(r.permuted(&id), r);

        let phi = Permutation::parse(3, "(1 2 3)(4 6)").unwrap();
        assert_eq!(r.permuted(&phi).entries(), &[6, 5, 4]);

        // Mapped through (1 4 2 6)(3 5); cross-checked against the acted
        // profile table for the same permutation.
        let phi = Permutation::parse(3, "(1 4 2 6)(3 5)").unwrap();
        let r = LinearOrder::new(vec![2, 1, 3]).unwrap();
        assert_eq!(r.permuted(&phi).entries(), &[6, 4, 5]);
    }

    #[test]
    fn act_first_worked_example() {
        let p = tablep();
        let phi = Permutation::parse(3, "(1 2 3)(4 6)").unwrap();
        let expect = PreferenceProfile::from_rows(
            3,
            &[
                vec![4, 5, 6],
                vec![6, 5, 4],
                vec![6, 4, 5],
                vec![1, 3, 2],
                vec![1, 2, 3],
                vec![3, 2, 1],
            ],
        )
        .unwrap();
        assert_eq!(p.act(&phi).unwrap(), expect);
    }

    #[test]
    fn act_second_worked_example() {
        let p = tablep();
        let phi = Permutation::parse(3, "(1 4 2 6)(3 5)").unwrap();
        let expect = PreferenceProfile::from_rows(
            3,
            &[
                vec![5, 6, 4],
                vec![6, 4, 5],
                vec![5, 4, 6],
                vec![2, 3, 1],
                vec![1, 3, 2],
                vec![2, 1, 3],
            ],
        )
        .unwrap();
        assert_eq!(p.act(&phi).unwrap(), expect);
    }

    #[test]
    fn act_identity_and_domain() {
        let p = tablep();
        assert_eq!(p.act(&Permutation::identity(3)).unwrap(), p);
        // (12)(45) is fine, but a partition-crossing non-G* permutation is not.
        let bad = Permutation::from_images(vec![3, 4, 1, 6, 5, 2]).unwrap();
        assert!(matches!(p.act(&bad), Err(Error::OutsideGstar(_))));
    }

    #[test]
    fn stabilizer_of_pspeciale() {
        let p = pspeciale();
        let stab = p.stabilizer(&PermGroup::gstar(2)).unwrap();
        let expect: Vec<&str> = vec!["id", "(1 2)(3 4)", "(1 3 2 4)", "(1 4 2 3)"];
        let got: Vec<String> = stab.iter().map(|g| g.to_string()).collect();
        let mut expect_sorted: Vec<String> = expect.iter().map(|s| s.to_string()).collect();
        expect_sorted.sort();
        let mut got_sorted = got.clone();
        got_sorted.sort();
        assert_eq!(got_sorted, expect_sorted);

        // Restricting U shrinks the stabilizer accordingly.
        let u = PermGroup::generate(2, &[Permutation::parse(2, "(1 2)(3 4)").unwrap()]).unwrap();
        assert_eq!(p.stabilizer(&u).unwrap().order(), 2);
        let u = PermGroup::generate(2, &[Permutation::parse(2, "(1 2)").unwrap()]).unwrap();
        assert_eq!(p.stabilizer(&u).unwrap().order(), 1);
    }

    #[test]
    fn stabilizer_landscape_examples_n3() {
        let gstar = PermGroup::gstar(3);
        let cases: Vec<(Vec<Vec<usize>>, Vec<&str>)> = vec![
            (
                vec![
                    vec![4, 5, 6],
                    vec![4, 5, 6],
                    vec![4, 5, 6],
                    vec![1, 2, 3],
                    vec![1, 2, 3],
                    vec![1, 3, 2],
                ],
                vec!["id"],
            ),
            (
                vec![
                    vec![4, 5, 6],
                    vec![4, 5, 6],
                    vec![4, 5, 6],
                    vec![1, 2, 3],
                    vec![1, 2, 3],
                    vec![1, 2, 3],
                ],
                vec!["id", "(1 4)(2 5)(3 6)"],
            ),
            (
                vec![
                    vec![4, 5, 6],
                    vec![5, 6, 4],
                    vec![6, 4, 5],
                    vec![2, 1, 3],
                    vec![3, 2, 1],
                    vec![1, 3, 2],
                ],
                vec!["id", "(1 2 3)(4 5 6)", "(1 3 2)(4 6 5)"],
            ),
        ];
        for (rows, expect) in cases {
            let p = PreferenceProfile::from_rows(3, &rows).unwrap();
            let stab = p.stabilizer(&gstar).unwrap();
            let mut got: Vec<String> = stab.iter().map(|g| g.to_string()).collect();
            got.sort();
            let mut want: Vec<String> = expect.iter().map(|s| s.to_string()).collect();
            want.sort();
            assert_eq!(got, want);
        }

        // p4 has a cyclic stabilizer of order six generated by a 6-cycle,
        // and p5 a nonabelian one of order six.
        let p4 = PreferenceProfile::from_rows(
            3,
            &[
                vec![4, 5, 6],
                vec![5, 6, 4],
                vec![6, 4, 5],
                vec![1, 2, 3],
                vec![2, 3, 1],
                vec![3, 1, 2],
            ],
        )
        .unwrap();
        let stab4 = p4.stabilizer(&gstar).unwrap();
        assert_eq!(stab4.order(), 6);
        assert!(stab4.contains(&Permutation::parse(3, "(1 5 3 4 2 6)").unwrap()));

        let p5 = PreferenceProfile::from_rows(
            3,
            &[
                vec![4, 5, 6],
                vec![5, 6, 4],
                vec![6, 4, 5],
                vec![1, 3, 2],
                vec![2, 1, 3],
                vec![3, 2, 1],
            ],
        )
        .unwrap();
        let stab5 = p5.stabilizer(&gstar).unwrap();
        assert_eq!(stab5.order(), 6);
        for s in [
            "id",
            "(1 2 3)(4 5 6)",
            "(1 3 2)(4 6 5)",
            "(1 4)(2 6)(3 5)",
            "(1 5)(2 4)(3 6)",
            "(1 6)(2 5)(3 4)",
        ] {
            assert!(stab5.contains(&Permutation::parse(3, s).unwrap()));
        }
    }

    #[test]
    fn profile_space_counts() {
        assert_eq!(ProfileSpace::new(2).unwrap().count(), 16);
        assert_eq!(ProfileSpace::new(3).unwrap().count(), 46656);
        assert_eq!(profile_count(4), 24u128.pow(8));
        assert!(matches!(
            ProfileSpace::new(4),
            Err(Error::ExhaustiveTooLarge { .. })
        ));
    }

    #[test]
    fn profile_space_is_lexicographic() {
        let space = ProfileSpace::new(2).unwrap();
        let first = space.get(0);
        // Everyone ranks the other side ascending.
        assert_eq!(first.order_of(1).entries(), &[3, 4]);
        assert_eq!(first.order_of(4).entries(), &[1, 2]);
        let mut prev = first;
        for i in 1..space.count() {
            let next = space.get(i);
            assert!(prev < next);
            prev = next;
        }
    }

    #[test]
    fn canonical_representative_basics() {
        let gstar = PermGroup::gstar(2);
        let space = ProfileSpace::new(2).unwrap();
        let minimal = space.get(0);
        let (rep, phi) = minimal.canonical_representative(&gstar).unwrap();
        assert_eq!(rep, minimal);
        assert!(phi.is_identity());

        // Orbit size of the special profile is |G*| / |Stab| = 8 / 4 = 2.
        let p = pspeciale();
        let orbit: std::collections::BTreeSet<PreferenceProfile> =
            gstar.iter().map(|g| p.act_unchecked(g)).collect();
        assert_eq!(orbit.len(), 2);
    }

    #[test]
    fn transversal_n2_has_four_orbits() {
        let gstar = PermGroup::gstar(2);
        let reps = orbit_transversal(&gstar, 2).unwrap();
        assert_eq!(reps.len(), 4);
        // Orbit sizes sum to the size of the space.
        let total: usize = reps
            .iter()
            .map(|p| gstar.order() / p.stabilizer(&gstar).unwrap().order())
            .sum();
        assert_eq!(total, 16);
    }

    #[test]
    fn text_round_trip() {
        let p = tablep();
        let text = p.to_text();
        assert_eq!(PreferenceProfile::parse(&text).unwrap(), p);
        // Reordered individuals normalize.
        let shuffled = "n=3\n4: 2 1 3\n1: 4 5 6\n2: 4 6 5\n6: 3 2 1\n3: 6 5 4\n5: 3 1 2\n";
        assert_eq!(PreferenceProfile::parse(shuffled).unwrap(), p);
        let inline = p.inline();
        assert_eq!(PreferenceProfile::parse_inline(3, &inline).unwrap(), p);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = "n=3\n1: 4 5 6\n1: 4 5 6\n";
        match PreferenceProfile::parse(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(PreferenceProfile::parse("n=3\n1: 4 5\n").is_err());
        assert!(PreferenceProfile::parse("hello").is_err());
    }

    #[test]
    fn sampler_is_seeded() {
        use rand::SeedableRng;
        let mut a = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut b = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..32 {
            assert_eq!(sample_profile(4, &mut a), sample_profile(4, &mut b));
        }
    }
}
