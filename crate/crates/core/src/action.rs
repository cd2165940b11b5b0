//! The conjugation-style action of subgroups of G* on preference-like values,
//! shared between ordinary and generalized profiles.

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

/// A value carrying an action of G*: renaming individuals through a
/// partition-preserving permutation yields another value of the same kind.
pub trait SymmetryPoint: Ord + Clone {
    fn half_size(&self) -> usize;

    /// The acted value; callers guarantee `phi` preserves {W, M}.
    fn act_within_gstar(&self, phi: &Permutation) -> Self;

    /// Whether acting by `phi` returns the value unchanged.
    fn fixed_by(&self, phi: &Permutation) -> bool {
        self.act_within_gstar(phi) == *self
    }
}

fn check_group<T: SymmetryPoint>(x: &T, u: &PermGroup) -> Result<()> {
    if u.n() != x.half_size() {
        return Err(Error::SizeMismatch {
            expected: 2 * x.half_size(),
            found: 2 * u.n(),
        });
    }
    if !u.within_gstar() {
        return Err(Error::GroupOutsideGstar);
    }
    Ok(())
}

/// Stab_U(x) = {phi in U : x^phi = x}; a subgroup of U.
pub fn stabilizer_of<T: SymmetryPoint>(x: &T, u: &PermGroup) -> Result<PermGroup> {
    check_group(x, u)?;
    let gens: Vec<Permutation> = u.iter().filter(|phi| x.fixed_by(phi)).cloned().collect();
    // The fixing elements already form a group; generate() just rebuilds the
    // PermGroup wrapper without adding anything.
    let stab = PermGroup::generate(u.n(), &gens)?;
    debug_assert_eq!(stab.order(), gens.len().max(1));
    Ok(stab)
}

/// The least element of the orbit x^U together with the least transporter:
/// returns (rep, phi) with rep minimal and rep^phi = x.
pub fn canonical_representative_of<T: SymmetryPoint>(
    x: &T,
    u: &PermGroup,
) -> Result<(T, Permutation)> {
    check_group(x, u)?;
    let mut rep = x.clone();
    for phi in u.iter() {
        let acted = x.act_within_gstar(phi);
        if acted < rep {
            rep = acted;
        }
    }
    for phi in u.iter() {
        if rep.act_within_gstar(phi) == *x {
            return Ok((rep, phi.clone()));
        }
    }
    unreachable!("orbit minimum is reachable from x by some group element")
}
