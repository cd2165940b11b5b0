//! The container mechanism C^U, symmetry checking, the refinement
//! feasibility criterion, and constructive synthesis of resolute symmetric
//! mechanisms over an orbit transversal.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::matching::{all_matchings, conjugate_set, envy_total, Matching, MechanismId};
use crate::perm::Permutation;
use crate::profile::{
    orbit_transversal, profile_count, sample_profile, PreferenceProfile, ProfileSpace,
};
use crate::witness::wpo_symmetric_choice;

/// Anything that maps profiles to sets of matchings: the named
/// correspondences and synthesized tables.
pub trait MechanismFn: Sync {
    fn select(&self, p: &PreferenceProfile) -> Result<BTreeSet<Matching>>;

    /// Whether U-symmetry is already guaranteed for this mechanism without a
    /// scan (roster results for the named mechanisms, the construction
    /// contract for tables).
    fn guaranteed_symmetric_under(&self, u: &PermGroup) -> bool;

    fn describe(&self) -> String;
}

impl MechanismFn for MechanismId {
    fn select(&self, p: &PreferenceProfile) -> Result<BTreeSet<Matching>> {
        Ok(self.evaluate(p))
    }

    fn guaranteed_symmetric_under(&self, u: &PermGroup) -> bool {
        if self.guaranteed_symmetric_under_g_only() {
            u.within_g()
        } else {
            u.within_gstar()
        }
    }

    fn describe(&self) -> String {
        self.to_string()
    }
}

/// C^U(p): the matchings commuting with every element of Stab_U(p).
/// Every resolute U-symmetric mechanism must select inside it.
pub fn c_u(p: &PreferenceProfile, u: &PermGroup) -> Result<BTreeSet<Matching>> {
    let stab = p.stabilizer(u)?;
    let nontrivial: Vec<&Permutation> = stab.iter().filter(|phi| !phi.is_identity()).collect();
    Ok(all_matchings(p.n())
        .into_iter()
        .filter(|mu| nontrivial.iter().all(|phi| mu.commutes_with(phi)))
        .collect())
}

/// How far a symmetry or refinement check should scan.
#[derive(Clone, Copy, Debug)]
pub enum Scope {
    /// Every profile of the space (n <= 3).
    Exhaustive,
    /// Seeded random profiles.
    Sample { cases: u64, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct SymmetryWitness {
    pub profile: PreferenceProfile,
    pub phi: Permutation,
    pub expected: BTreeSet<Matching>,
    pub actual: BTreeSet<Matching>,
}

/// Outcome of a symmetry check; a false verdict always carries a
/// re-checkable witness.
#[derive(Clone, Debug)]
pub struct SymmetryReport {
    pub holds: bool,
    pub witness: Option<SymmetryWitness>,
    pub checks: u64,
}

fn symmetry_offense(
    f: &dyn MechanismFn,
    p: &PreferenceProfile,
    phi: &Permutation,
) -> Result<Option<SymmetryWitness>> {
    let expected = conjugate_set(&f.select(p)?, phi)?;
    let actual = f.select(&p.act(phi)?)?;
    if expected == actual {
        Ok(None)
    } else {
        Ok(Some(SymmetryWitness {
            profile: p.clone(),
            phi: phi.clone(),
            expected,
            actual,
        }))
    }
}

/// Checks F(p^phi) = F(p)^phi for every profile in scope and every generator.
/// Checking generators only is sufficient: symmetry for a set is equivalent
/// to symmetry for the group it generates.
pub fn is_u_symmetric(
    f: &dyn MechanismFn,
    gens: &[Permutation],
    n: usize,
    scope: Scope,
) -> Result<SymmetryReport> {
    for g in gens {
        if g.n() != n {
            return Err(Error::SizeMismatch {
                expected: 2 * n,
                found: g.degree(),
            });
        }
        if !g.is_in_gstar() {
            return Err(Error::OutsideGstar(g.to_string()));
        }
    }
    match scope {
        Scope::Exhaustive => {
            let space = ProfileSpace::new(n)?;
            let checks = space.count() * gens.len() as u64;
            let witness = space
                .par_iter()
                .map(|p| {
                    for phi in gens {
                        if let Some(w) = symmetry_offense(f, &p, phi)? {
                            return Ok(Some(w));
                        }
                    }
                    Ok(None)
                })
                .find_map_first(|r: Result<Option<SymmetryWitness>>| r.transpose())
                .transpose()?;
            Ok(SymmetryReport {
                holds: witness.is_none(),
                witness,
                checks,
            })
        }
        Scope::Sample { cases, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut checks = 0;
            for _ in 0..cases {
                let p = sample_profile(n, &mut rng);
                for phi in gens {
                    checks += 1;
                    if let Some(w) = symmetry_offense(f, &p, phi)? {
                        return Ok(SymmetryReport {
                            holds: false,
                            witness: Some(w),
                            checks,
                        });
                    }
                }
            }
            Ok(SymmetryReport {
                holds: true,
                witness: None,
                checks,
            })
        }
    }
}

fn ensure_u_symmetric(f: &dyn MechanismFn, u: &PermGroup, n: usize) -> Result<()> {
    if f.guaranteed_symmetric_under(u) {
        return Ok(());
    }
    let report = is_u_symmetric(f, &u.generating_set(), n, Scope::Exhaustive)?;
    if report.holds {
        return Ok(());
    }
    let w = report.witness.unwrap();
    Err(Error::NotUSymmetric {
        mechanism: f.describe(),
        group: format!("U of order {}", u.order()),
        witness: format!("p = {:?} with phi = {}", w.profile, w.phi),
    })
}

/// Outcome of the refinement feasibility criterion: a U-symmetric mechanism
/// admits a resolute U-symmetric refinement iff F(p) meets C^U(p) everywhere.
#[derive(Clone, Debug)]
pub enum Feasibility {
    Feasible { orbits_checked: u64 },
    Infeasible { witness: PreferenceProfile },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible { .. })
    }
}

/// Scans one canonical representative per orbit; both F and C^U are
/// U-equivariant, so emptiness of the intersection is orbit-invariant
/// (re-verified by full scan at n=2 in the test suite).
pub fn feasibility(f: &dyn MechanismFn, u: &PermGroup, n: usize) -> Result<Feasibility> {
    ensure_u_symmetric(f, u, n)?;
    let reps = orbit_transversal(u, n)?;
    let orbits_checked = reps.len() as u64;
    let witness = reps
        .into_par_iter()
        .map(|p| {
            let candidates = f.select(&p)?;
            let container = c_u(&p, u)?;
            if candidates.intersection(&container).next().is_none() {
                Ok(Some(p))
            } else {
                Ok(None)
            }
        })
        .find_map_first(|r: Result<Option<PreferenceProfile>>| r.transpose())
        .transpose()?;
    Ok(match witness {
        Some(p) => Feasibility::Infeasible { witness: p },
        None => Feasibility::Feasible { orbits_checked },
    })
}

/// Picks the matching stored for each orbit representative.
#[derive(Clone, Debug)]
pub enum Selector {
    /// Least matching by image sequence (the default).
    LexMin,
    /// Least total envy, ties broken lexicographically.
    MinEnvy,
    /// The explicit weakly-Pareto-optimal commuting choice for single-matching symmetry.
    WpoSymmetric(Matching),
}

impl Selector {
    fn pick(
        &self,
        p: &PreferenceProfile,
        candidates: &BTreeSet<Matching>,
    ) -> Result<Option<Matching>> {
        if candidates.is_empty() {
            return Ok(None);
        }
        match self {
            Selector::LexMin => Ok(candidates.first().cloned()),
            Selector::MinEnvy => {
                let best = candidates
                    .iter()
                    .map(|m| envy_total(p, m))
                    .min()
                    .expect("nonempty");
                Ok(candidates
                    .iter()
                    .find(|m| envy_total(p, m) == best)
                    .cloned())
            }
            Selector::WpoSymmetric(phi) => {
                let mu = wpo_symmetric_choice(p, phi)?;
                if !candidates.contains(&mu) {
                    return Err(Error::Refuted(format!(
                        "wpo_symmetric_choice produced {mu} outside the candidate set at {p:?}"
                    )));
                }
                Ok(Some(mu))
            }
        }
    }
}

/// An extensional resolute mechanism: one selected matching per canonical
/// orbit representative, evaluated anywhere by transporting along the orbit.
#[derive(Clone)]
pub struct MechanismTable {
    n: usize,
    group: PermGroup,
    gens: Vec<Permutation>,
    entries: BTreeMap<PreferenceProfile, Matching>,
}

/// Result of a synthesis attempt.
pub enum Synthesis {
    Table(MechanismTable),
    Infeasible { witness: PreferenceProfile },
}

/// Builds the unique resolute U-symmetric mechanism selecting, on each orbit
/// representative, the matching the selector picks inside
/// constraint(p) meet C^U(p). Fails with a witness when some intersection is
/// empty.
pub fn synthesize(
    u: &PermGroup,
    constraint: &dyn MechanismFn,
    selector: &Selector,
    n: usize,
) -> Result<Synthesis> {
    ensure_u_symmetric(constraint, u, n)?;
    let reps = orbit_transversal(u, n)?;
    let picks = reps
        .into_par_iter()
        .map(|p| {
            let candidates: BTreeSet<Matching> = constraint
                .select(&p)?
                .intersection(&c_u(&p, u)?)
                .cloned()
                .collect();
            let choice = selector.pick(&p, &candidates)?;
            Ok((p, choice))
        })
        .collect::<Result<Vec<(PreferenceProfile, Option<Matching>)>>>()?;
    let mut entries = BTreeMap::new();
    for (p, choice) in picks {
        match choice {
            Some(mu) => {
                entries.insert(p, mu);
            }
            None => return Ok(Synthesis::Infeasible { witness: p }),
        }
    }
    Ok(Synthesis::Table(MechanismTable {
        n,
        group: u.clone(),
        gens: u.generating_set(),
        entries,
    }))
}

/// On-demand evaluation of the synthesized mechanism at a single profile,
/// with the orbit data computed lazily: canonicalize p within its own orbit,
/// select inside constraint meet container at the representative, transport
/// back. Agrees with a full synthesis under the same selector wherever both
/// exist, and works for n >= 4 where the transversal is out of reach (no
/// global feasibility certificate is implied). Returns None when the
/// intersection is empty on this orbit.
pub fn resolve_at(
    u: &PermGroup,
    constraint: &dyn MechanismFn,
    selector: &Selector,
    p: &PreferenceProfile,
) -> Result<Option<Matching>> {
    if !constraint.guaranteed_symmetric_under(u) {
        ensure_u_symmetric(constraint, u, p.n())?;
    }
    let (rep, phi) = p.canonical_representative(u)?;
    let candidates: BTreeSet<Matching> = constraint
        .select(&rep)?
        .intersection(&c_u(&rep, u)?)
        .cloned()
        .collect();
    match selector.pick(&rep, &candidates)? {
        Some(mu) => Ok(Some(mu.conjugate_by(&phi)?)),
        None => Ok(None),
    }
}

impl MechanismTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &BTreeMap<PreferenceProfile, Matching> {
        &self.entries
    }

    /// Locates p's canonical representative and transports the stored
    /// matching back along the orbit. Well-defined regardless of which
    /// transporter is found because the stored matching commutes with the
    /// representative's stabilizer.
    pub fn evaluate(&self, p: &PreferenceProfile) -> Result<Matching> {
        if p.n() != self.n {
            return Err(Error::SizeMismatch {
                expected: 2 * self.n,
                found: 2 * p.n(),
            });
        }
        let (rep, phi) = p.canonical_representative(&self.group)?;
        let mu = self.entries.get(&rep).ok_or(Error::ProfileNotInTable)?;
        mu.conjugate_by(&phi)
    }

    /// Serializes to the table file format:
    /// a header, one generator per line, then one entry per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("matchsym-mech v1 n={} |U|={}\n", self.n, self.group.order());
        for g in &self.gens {
            out.push_str(&format!("gen {g}\n"));
        }
        for (p, mu) in &self.entries {
            out.push_str(&format!(
                "{:016x} {} -> {}\n",
                p.fingerprint(),
                p.inline(),
                mu
            ));
        }
        out
    }

    /// Parses and re-verifies every invariant: representatives canonical and
    /// sorted, selections inside the container, orbit sizes covering the
    /// whole profile space.
    pub fn load(input: &str) -> Result<Self> {
        let mut lines = input.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::TableInvalid("empty file".into()))?;
        let mut parts = header.split_whitespace();
        if parts.next() != Some("matchsym-mech") || parts.next() != Some("v1") {
            return Err(Error::TableInvalid(format!(
                "bad header {header:?}; expected 'matchsym-mech v1 ...'"
            )));
        }
        let n: usize = parts
            .next()
            .and_then(|t| t.strip_prefix("n="))
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::TableInvalid("missing n=<k> in header".into()))?;
        let order: usize = parts
            .next()
            .and_then(|t| t.strip_prefix("|U|="))
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::TableInvalid("missing |U|=<m> in header".into()))?;

        let mut gens = Vec::new();
        let mut entries = BTreeMap::new();
        let mut last: Option<PreferenceProfile> = None;
        for (idx, raw) in lines {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(g) = line.strip_prefix("gen ") {
                if !entries.is_empty() {
                    return Err(Error::TableInvalid(format!(
                        "line {line_no}: generator after entries"
                    )));
                }
                gens.push(Permutation::parse(n, g)?);
                continue;
            }
            let (head, matching) = line.split_once("->").ok_or_else(|| {
                Error::TableInvalid(format!(
                    "line {line_no}: expected '<hash> <profile> -> <matching>'"
                ))
            })?;
            let mut head_parts = head.split_whitespace();
            let hash_text = head_parts.next().ok_or_else(|| {
                Error::TableInvalid(format!("line {line_no}: missing fingerprint"))
            })?;
            let inline = head_parts
                .next()
                .ok_or_else(|| Error::TableInvalid(format!("line {line_no}: missing profile")))?;
            let fp = u64::from_str_radix(hash_text, 16).map_err(|_| {
                Error::TableInvalid(format!("line {line_no}: bad fingerprint {hash_text:?}"))
            })?;
            let p = PreferenceProfile::parse_inline(n, inline)?;
            if p.fingerprint() != fp {
                return Err(Error::TableInvalid(format!(
                    "line {line_no}: fingerprint mismatch"
                )));
            }
            if let Some(prev) = &last {
                if prev >= &p {
                    return Err(Error::TableInvalid(format!(
                        "line {line_no}: entries out of order or duplicated"
                    )));
                }
            }
            last = Some(p.clone());
            let mu = Matching::parse(n, matching.trim())?;
            entries.insert(p, mu);
        }
        let group = PermGroup::generate(n, &gens)?;
        if group.order() != order {
            return Err(Error::TableInvalid(format!(
                "generators span a group of order {}, header says {}",
                group.order(),
                order
            )));
        }
        let table = MechanismTable {
            n,
            group,
            gens,
            entries,
        };
        table.verify()?;
        Ok(table)
    }

    /// Re-checks the construction invariants from scratch.
    pub fn verify(&self) -> Result<()> {
        if !self.group.within_gstar() {
            return Err(Error::TableInvalid("group is not inside G*".into()));
        }
        let mut covered: u128 = 0;
        for (p, mu) in &self.entries {
            if !p.is_canonical_under(&self.group)? {
                return Err(Error::TableInvalid(format!(
                    "{p:?} is not the least profile of its orbit"
                )));
            }
            let stab = p.stabilizer(&self.group)?;
            if !stab.iter().all(|phi| mu.commutes_with(phi)) {
                return Err(Error::TableInvalid(format!(
                    "selected matching {mu} escapes the container at {p:?}"
                )));
            }
            covered += (self.group.order() / stab.order()) as u128;
        }
        let expected = profile_count(self.n);
        if covered != expected {
            return Err(Error::TableInvalid(format!(
                "orbit sizes cover {covered} profiles, the space holds {expected}"
            )));
        }
        Ok(())
    }
}

impl MechanismFn for MechanismTable {
    fn select(&self, p: &PreferenceProfile) -> Result<BTreeSet<Matching>> {
        Ok([self.evaluate(p)?].into())
    }

    fn guaranteed_symmetric_under(&self, u: &PermGroup) -> bool {
        u.is_subgroup_of(&self.group)
    }

    fn describe(&self) -> String {
        format!(
            "table[n={}, |U|={}, R={}]",
            self.n,
            self.group.order(),
            self.len()
        )
    }
}

impl fmt::Debug for MechanismTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "MechanismTable(n={}, |U|={}, entries={})",
            self.n,
            self.group.order(),
            self.entries.len()
        )
    }
}

/// Outcome of a refinement containment check.
#[derive(Clone, Debug)]
pub struct RefinementReport {
    pub holds: bool,
    pub witness: Option<(PreferenceProfile, Matching)>,
    pub checks: u64,
}

/// Checks F1(p) subset of F2(p) over the scope.
pub fn is_refinement(
    f1: &dyn MechanismFn,
    f2: &dyn MechanismFn,
    n: usize,
    scope: Scope,
) -> Result<RefinementReport> {
    let offend = |p: &PreferenceProfile| -> Result<Option<(PreferenceProfile, Matching)>> {
        let small = f1.select(p)?;
        let big = f2.select(p)?;
        Ok(small
            .difference(&big)
            .next()
            .map(|m| (p.clone(), m.clone())))
    };
    match scope {
        Scope::Exhaustive => {
            let space = ProfileSpace::new(n)?;
            let checks = space.count();
            let witness = space
                .par_iter()
                .map(|p| offend(&p))
                .find_map_first(|r| r.transpose())
                .transpose()?;
            Ok(RefinementReport {
                holds: witness.is_none(),
                witness,
                checks,
            })
        }
        Scope::Sample { cases, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in 0..cases {
                let p = sample_profile(n, &mut rng);
                if let Some(w) = offend(&p)? {
                    return Ok(RefinementReport {
                        holds: false,
                        witness: Some(w),
                        checks: i + 1,
                    });
                }
            }
            Ok(RefinementReport {
                holds: true,
                witness: None,
                checks: cases,
            })
        }
    }
}
