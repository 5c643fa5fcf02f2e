//! Preferences as permutations: strict rankings over a common alternative
//! set, the adjacent-swap (Kendall tau) metric, restriction to subsets, and
//! seeded uniform sampling.
//!
//! Alternatives are 0-indexed everywhere: a slate of `A` alternatives is
//! the index set {0, …, A−1}.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// A strict ranking (no ties) of all `A` alternatives, stored as a
/// permutation of {0, …, A−1}. Position 0 is the most preferred.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Preference {
    ranking: Vec<usize>,
}

impl Preference {
    pub fn new(ranking: Vec<usize>) -> Result<Self> {
        if ranking.is_empty() {
            return Err(Error::InvalidArgument(
                "a preference needs at least one alternative".into(),
            ));
        }
        let mut seen = vec![false; ranking.len()];
        for &alt in &ranking {
            if alt >= ranking.len() || seen[alt] {
                return Err(Error::InvalidArgument(format!(
                    "ranking must be a permutation of 0..{}",
                    ranking.len()
                )));
            }
            seen[alt] = true;
        }
        Ok(Preference { ranking })
    }

    /// The ranking 0 > 1 > … > A−1.
    pub fn identity(num_alternatives: usize) -> Result<Self> {
        Self::new((0..num_alternatives).collect())
    }

    pub fn num_alternatives(&self) -> usize {
        self.ranking.len()
    }

    pub fn ranking(&self) -> &[usize] {
        &self.ranking
    }

    /// Inverse view: `positions()[alt]` is the rank of `alt`, 0 being the
    /// most preferred.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.ranking.len()];
        for (rank, &alt) in self.ranking.iter().enumerate() {
            pos[alt] = rank;
        }
        pos
    }

    /// The alternatives of `subset` in the relative order they appear here.
    ///
    /// `subset` is treated as a set: duplicates collapse, order is ignored.
    pub fn restrict(&self, subset: &[usize]) -> Result<SubPreference> {
        if subset.is_empty() {
            return Err(Error::InvalidArgument(
                "restriction subset must be nonempty".into(),
            ));
        }
        let mut member = vec![false; self.ranking.len()];
        for &alt in subset {
            if alt >= self.ranking.len() {
                return Err(Error::InvalidArgument(format!(
                    "alternative {alt} out of range 0..{}",
                    self.ranking.len()
                )));
            }
            member[alt] = true;
        }
        let ordered: Vec<usize> = self
            .ranking
            .iter()
            .copied()
            .filter(|&alt| member[alt])
            .collect();
        Ok(SubPreference { ordered })
    }
}

impl fmt::Display for Preference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ranking.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join(">"))
    }
}

/// A strict order over a subset of the alternatives, as produced by
/// [`Preference::restrict`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubPreference {
    ordered: Vec<usize>,
}

impl SubPreference {
    pub fn new(ordered: Vec<usize>) -> Result<Self> {
        let distinct: BTreeSet<usize> = ordered.iter().copied().collect();
        if distinct.len() != ordered.len() {
            return Err(Error::InvalidArgument(
                "sub-preference indices must be distinct".into(),
            ));
        }
        Ok(SubPreference { ordered })
    }

    pub fn ordered(&self) -> &[usize] {
        &self.ordered
    }

    pub fn len(&self) -> usize {
        self.ordered.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordered.is_empty()
    }
}

impl fmt::Display for SubPreference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ordered.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join(">"))
    }
}

/// An ordered collection of `I` preferences over a common alternative set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    num_alternatives: usize,
    preferences: Vec<Preference>,
}

impl Profile {
    pub fn new(preferences: Vec<Preference>) -> Result<Self> {
        let first = preferences.first().ok_or_else(|| {
            Error::InvalidArgument("a profile needs at least one individual".into())
        })?;
        let num_alternatives = first.num_alternatives();
        if preferences
            .iter()
            .any(|p| p.num_alternatives() != num_alternatives)
        {
            return Err(Error::InvalidArgument(
                "all preferences in a profile must rank the same alternatives".into(),
            ));
        }
        Ok(Profile {
            num_alternatives,
            preferences,
        })
    }

    pub fn num_alternatives(&self) -> usize {
        self.num_alternatives
    }

    /// Number of individuals I.
    pub fn individuals(&self) -> usize {
        self.preferences.len()
    }

    pub fn preferences(&self) -> &[Preference] {
        &self.preferences
    }

    /// Number of distinct rankings present.
    pub fn unique_preferences(&self) -> usize {
        self.preferences
            .iter()
            .map(|p| p.ranking())
            .collect::<BTreeSet<_>>()
            .len()
    }
}

/// Minimum number of adjacent transpositions transforming `p` into `q`;
/// equals the number of discordant pairs. Symmetric, bounded by A(A−1)/2.
pub fn kendall_distance(p: &Preference, q: &Preference) -> Result<u64> {
    if p.num_alternatives() != q.num_alternatives() {
        return Err(Error::InvalidArgument(format!(
            "preferences rank different slates: {} vs {} alternatives",
            p.num_alternatives(),
            q.num_alternatives()
        )));
    }
    // Discordant pairs = inversions of p's ranking read in q's coordinates.
    let pos_q = q.positions();
    let mut relative: Vec<usize> = p.ranking().iter().map(|&alt| pos_q[alt]).collect();
    Ok(count_inversions(&mut relative))
}

/// Merge-sort inversion count, O(A log A).
fn count_inversions(values: &mut [usize]) -> u64 {
    let n = values.len();
    if n < 2 {
        return 0;
    }
    let mut scratch = vec![0usize; n];
    let mut inversions = 0u64;
    let mut width = 1;
    while width < n {
        let mut start = 0;
        while start + width < n {
            let mid = start + width;
            let end = (start + 2 * width).min(n);
            let (mut i, mut j, mut k) = (start, mid, start);
            while i < mid && j < end {
                if values[i] <= values[j] {
                    scratch[k] = values[i];
                    i += 1;
                } else {
                    scratch[k] = values[j];
                    j += 1;
                    inversions += (mid - i) as u64;
                }
                k += 1;
            }
            scratch[k..end].copy_from_slice(if i < mid {
                &values[i..mid]
            } else {
                &values[j..end]
            });
            values[start..end].copy_from_slice(&scratch[start..end]);
            start += 2 * width;
        }
        width *= 2;
    }
    inversions
}

/// One preference drawn uniformly from all A! rankings (Fisher–Yates), so
/// each permutation has probability 1/A!. Deterministic given the
/// generator state.
pub fn sample_preference<R: Rng + ?Sized>(
    rng: &mut R,
    num_alternatives: usize,
) -> Result<Preference> {
    if num_alternatives == 0 {
        return Err(Error::InvalidArgument(
            "cannot sample a preference over zero alternatives".into(),
        ));
    }
    let mut ranking: Vec<usize> = (0..num_alternatives).collect();
    ranking.shuffle(rng);
    Preference::new(ranking)
}

/// I independent uniform preferences.
pub fn sample_profile<R: Rng + ?Sized>(
    rng: &mut R,
    num_alternatives: usize,
    individuals: usize,
) -> Result<Profile> {
    if individuals == 0 {
        return Err(Error::InvalidArgument(
            "a profile needs at least one individual".into(),
        ));
    }
    let preferences = (0..individuals)
        .map(|_| sample_preference(rng, num_alternatives))
        .collect::<Result<Vec<_>>>()?;
    Profile::new(preferences)
}
