//! Shared profiles for unit tests, taken from the worked examples.

use crate::profile::PreferenceProfile;

/// The running n=3 example profile.
pub(crate) fn tablep() -> PreferenceProfile {
    PreferenceProfile::from_rows(
        3,
        &[
            vec![4, 5, 6],
            vec![4, 6, 5],
            vec![6, 5, 4],
            vec![2, 1, 3],
            vec![3, 1, 2],
            vec![3, 2, 1],
        ],
    )
    .unwrap()
}

/// The n=2 profile whose G*-stabilizer is generated by a 4-cycle.
pub(crate) fn pspeciale() -> PreferenceProfile {
    PreferenceProfile::from_rows(2, &[vec![3, 4], vec![4, 3], vec![2, 1], vec![1, 2]]).unwrap()
}
