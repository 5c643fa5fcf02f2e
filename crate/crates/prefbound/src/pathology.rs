//! Circulant sub-profile machinery: the rotated sub-preferences that
//! jointly block a Euclidean representation, a detector for them inside a
//! profile, and the positional "banned preference" test used by the
//! representable-count bound.

use std::collections::HashMap;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::perm::{Preference, Profile, SubPreference};

/// Detector capacity guards: the subset search is meant for desk-scale
/// inputs and rejects anything larger rather than running forever.
pub const DETECTOR_MAX_ALTERNATIVES: usize = 12;
pub const DETECTOR_MAX_INDIVIDUALS: usize = 12;

/// An ordering of k ≥ 3 alternatives on a circle, canonicalized so the
/// minimum index comes first; two sequences equal up to rotation compare
/// equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CircularPermutation {
    alternatives: Vec<usize>,
}

impl CircularPermutation {
    pub fn new(alternatives: Vec<usize>) -> Result<Self> {
        if alternatives.len() < 3 {
            return Err(Error::InvalidArgument(
                "a circular permutation needs at least 3 alternatives".into(),
            ));
        }
        let mut sorted = alternatives.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(
                "circular permutation indices must be distinct".into(),
            ));
        }
        Ok(CircularPermutation {
            alternatives: canonical_rotation(&alternatives),
        })
    }

    pub fn len(&self) -> usize {
        self.alternatives.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Canonical reading order, minimum index first.
    pub fn alternatives(&self) -> &[usize] {
        &self.alternatives
    }

    /// The k rotations read as linear orders, pairwise distinct. A profile
    /// must realize all of them (as restrictions) for the circulant
    /// sub-profile on these alternatives to be present.
    pub fn rotations(&self) -> Vec<SubPreference> {
        let k = self.alternatives.len();
        (0..k)
            .map(|start| {
                let ordered = (0..k)
                    .map(|t| self.alternatives[(start + t) % k])
                    .collect();
                SubPreference::new(ordered).expect("rotation of distinct indices is distinct")
            })
            .collect()
    }

    /// Of the k rotations, the one that ranks the minimum-index alternative
    /// highest; the representable-count argument bans exactly this one.
    pub fn banned_rotation(&self) -> SubPreference {
        SubPreference::new(self.alternatives.clone()).expect("canonical order is distinct")
    }
}

/// Rotate so the minimum element comes first.
fn canonical_rotation(alternatives: &[usize]) -> Vec<usize> {
    let min_pos = alternatives
        .iter()
        .enumerate()
        .min_by_key(|(_, &alt)| alt)
        .map(|(i, _)| i)
        .expect("nonempty by construction");
    let k = alternatives.len();
    (0..k).map(|t| alternatives[(min_pos + t) % k]).collect()
}

/// The k rotated sub-preferences demanded by a circulant sub-profile on
/// `c`'s alternatives.
pub fn necessary_subpreferences(c: &CircularPermutation) -> Vec<SubPreference> {
    c.rotations()
}

/// Evidence that a profile contains a circulant sub-profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CirculantWitness {
    /// The k alternatives involved, ascending.
    pub alternatives: Vec<usize>,
    /// The rotation class realized on them.
    pub rotation: CircularPermutation,
    /// `assignment[j]` is an individual whose restriction equals
    /// `rotation.rotations()[j]`.
    pub assignment: Vec<usize>,
}

/// Search for a size-k circulant sub-profile: k alternatives and a circular
/// permutation of them such that every one of the k rotations appears as
/// some individual's restriction. Returns a witness on success.
///
/// Each individual restricts to a single order per subset, so covering all
/// k pairwise-distinct rotations automatically involves k distinct
/// individuals.
pub fn find_circulant(profile: &Profile, k: usize) -> Result<Option<CirculantWitness>> {
    let a = profile.num_alternatives();
    let i = profile.individuals();
    if k < 3 || k > a.min(i) {
        return Err(Error::InvalidArgument(format!(
            "circulant size k = {k} out of range 3..=min(I = {i}, A = {a})"
        )));
    }
    if a > DETECTOR_MAX_ALTERNATIVES || i > DETECTOR_MAX_INDIVIDUALS {
        return Err(Error::CapacityExceeded(format!(
            "circulant detector accepts A ≤ {DETECTOR_MAX_ALTERNATIVES}, I ≤ {DETECTOR_MAX_INDIVIDUALS}; got A = {a}, I = {i}"
        )));
    }
    for subset in (0..a).combinations(k) {
        // Group individuals by rotation class of their restriction; a class
        // is viable only once every rotation offset is covered.
        let mut classes: HashMap<Vec<usize>, Vec<Option<usize>>> = HashMap::new();
        for (individual, pref) in profile.preferences().iter().enumerate() {
            let restriction = pref
                .restrict(&subset)
                .expect("subset indices are in range");
            let canonical = canonical_rotation(restriction.ordered());
            let slots = classes.entry(canonical.clone()).or_insert_with(|| vec![None; k]);
            // Which rotation of the canonical order this restriction is.
            let offset = rotation_offset(&canonical, restriction.ordered());
            if slots[offset].is_none() {
                slots[offset] = Some(individual);
            }
        }
        for (canonical, slots) in classes {
            if slots.iter().all(|s| s.is_some()) {
                let rotation = CircularPermutation::new(canonical)?;
                return Ok(Some(CirculantWitness {
                    alternatives: subset,
                    rotation,
                    assignment: slots.into_iter().map(|s| s.expect("checked")).collect(),
                }));
            }
        }
    }
    Ok(None)
}

/// True iff the profile contains a size-k circulant sub-profile.
pub fn contains_circulant(profile: &Profile, k: usize) -> Result<bool> {
    find_circulant(profile, k).map(|w| w.is_some())
}

/// Index j such that `linear` equals `canonical` started at position j.
fn rotation_offset(canonical: &[usize], linear: &[usize]) -> usize {
    let k = canonical.len();
    let start = canonical
        .iter()
        .position(|&alt| alt == linear[0])
        .expect("same alternative set");
    debug_assert!((0..k).all(|t| canonical[(start + t) % k] == linear[t]));
    start
}

/// The positional event behind the representable-count bound: does this
/// preference place some low-index alternative high enough to induce a
/// banned rotation on a (d+2)-subset?
///
/// Holds iff alternative n−1 (0-based) sits within the first A−d−n
/// positions for some n in 1..=A−d−1. For d ≥ A−1 the union is empty and
/// the answer is false for every preference; callers that need to surface
/// that degenerate case get it from the bound's metadata.
pub fn is_banned(p: &Preference, d: usize) -> bool {
    let a = p.num_alternatives();
    if d + 1 >= a {
        return false;
    }
    let positions = p.positions();
    for n in 1..=(a - d - 1) {
        // 0-based: one of the first A−d−n positions is a rank < A−d−n.
        if positions[n - 1] < a - d - n {
            return true;
        }
    }
    false
}
