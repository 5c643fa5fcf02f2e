//! The adjacent-swap graph on permutations: neighbor enumeration, exact
//! ball sizes by breadth-first search at small A, and the inversion-number
//! (Mahonian) distribution whose cumulative sums give exact ball sizes at
//! any A.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::logspace::{factorial_exact, ln_biguint, log_sum_exp2, Magnitude};
use crate::perm::Preference;

/// BFS enumerates all A! vertices; 7! = 5040 keeps it instant.
pub const BFS_MAX_ALTERNATIVES: usize = 7;

/// Default crossover from exact big-integer counts to the log-space lane:
/// above this, A! exceeds the f64 range anyway.
pub const MAHONIAN_EXACT_LIMIT: usize = 170;

/// Guard for the log-space lane, whose windowed log-sum-exp recurrence is
/// O(A²·maxd).
pub const MAHONIAN_MAX_ALTERNATIVES: usize = 250;

/// All preferences one adjacent swap away: exactly A−1 of them, each at
/// Kendall distance 1 (an empty list for A = 1).
pub fn adjacent_neighbors(p: &Preference) -> Vec<Preference> {
    let ranking = p.ranking();
    let mut out = Vec::with_capacity(ranking.len().saturating_sub(1));
    for i in 0..ranking.len().saturating_sub(1) {
        let mut next = ranking.to_vec();
        next.swap(i, i + 1);
        out.push(Preference::new(next).expect("swap of a permutation is a permutation"));
    }
    out
}

/// Cumulative ball sizes of the adjacent-swap graph around the identity:
/// entry k counts the permutations reachable in at most k swaps. Entry 0 is
/// 1 and the final entry is A!. Vertex-transitivity makes the center
/// irrelevant.
pub fn ball_sizes_bfs(num_alternatives: usize) -> Result<Vec<u64>> {
    if num_alternatives == 0 {
        return Err(Error::InvalidArgument(
            "need at least one alternative".into(),
        ));
    }
    if num_alternatives > BFS_MAX_ALTERNATIVES {
        return Err(Error::CapacityExceeded(format!(
            "BFS ball sizes enumerate all A! permutations; A = {num_alternatives} exceeds the cap of {BFS_MAX_ALTERNATIVES}"
        )));
    }
    let a = num_alternatives;
    let total: usize = (1..=a).product();
    let mut distance: Vec<Option<u32>> = vec![None; total];
    let start = Preference::identity(a)?;
    distance[perm_index(start.ranking())] = Some(0);
    let mut frontier = vec![start];
    let mut per_radius = vec![1u64];
    let mut radius = 0u32;
    while !frontier.is_empty() {
        radius += 1;
        let mut next_frontier = Vec::new();
        let mut found = 0u64;
        for p in &frontier {
            for q in adjacent_neighbors(p) {
                let idx = perm_index(q.ranking());
                if distance[idx].is_none() {
                    distance[idx] = Some(radius);
                    next_frontier.push(q);
                    found += 1;
                }
            }
        }
        if found > 0 {
            per_radius.push(found);
        }
        frontier = next_frontier;
    }
    let mut cumulative = Vec::with_capacity(per_radius.len());
    let mut acc = 0u64;
    for c in per_radius {
        acc += c;
        cumulative.push(acc);
    }
    debug_assert_eq!(acc, total as u64);
    Ok(cumulative)
}

/// Rank of a permutation in the factorial number system; a perfect index
/// into 0..A! used for the BFS visited table.
fn perm_index(ranking: &[usize]) -> usize {
    let n = ranking.len();
    let mut index = 0usize;
    for i in 0..n {
        let smaller = ranking[i + 1..].iter().filter(|&&x| x < ranking[i]).count();
        index = index * (n - i) + smaller;
    }
    index
}

/// The inversion-number distribution for permutations of A elements:
/// `counts[j]` permutations lie at Kendall distance exactly j from any
/// fixed reference. Totals A!, symmetric about its midpoint.
#[derive(Clone, Debug)]
pub struct MahonianTable {
    num_alternatives: usize,
    counts: MahonianCounts,
}

/// Exact big-integer counts, or natural logs once the exact table would be
/// pointless to convert (A! past the f64 range).
#[derive(Clone, Debug)]
pub enum MahonianCounts {
    Exact(Vec<BigUint>),
    Log(Vec<f64>),
}

impl MahonianTable {
    pub fn num_alternatives(&self) -> usize {
        self.num_alternatives
    }

    /// Largest possible Kendall distance, A(A−1)/2.
    pub fn max_distance(&self) -> usize {
        match &self.counts {
            MahonianCounts::Exact(c) => c.len() - 1,
            MahonianCounts::Log(c) => c.len() - 1,
        }
    }

    pub fn counts(&self) -> &MahonianCounts {
        &self.counts
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.counts, MahonianCounts::Exact(_))
    }

    pub fn count_exact(&self, distance: usize) -> Option<&BigUint> {
        match &self.counts {
            MahonianCounts::Exact(c) => c.get(distance),
            MahonianCounts::Log(_) => None,
        }
    }

    pub fn ln_count(&self, distance: usize) -> f64 {
        match &self.counts {
            MahonianCounts::Exact(c) => ln_biguint(&c[distance]),
            MahonianCounts::Log(c) => c[distance],
        }
    }

    /// Exact cumulative ball sizes, when the exact lane is active.
    pub fn cumulative_exact(&self) -> Option<Vec<BigUint>> {
        match &self.counts {
            MahonianCounts::Exact(c) => {
                let mut acc = BigUint::zero();
                Some(
                    c.iter()
                        .map(|x| {
                            acc += x;
                            acc.clone()
                        })
                        .collect(),
                )
            }
            MahonianCounts::Log(_) => None,
        }
    }

    /// ln of the cumulative ball size at each radius, on either lane.
    pub fn ln_cumulative(&self) -> Vec<f64> {
        match &self.counts {
            MahonianCounts::Exact(c) => {
                let mut acc = BigUint::zero();
                c.iter()
                    .map(|x| {
                        acc += x;
                        ln_biguint(&acc)
                    })
                    .collect()
            }
            MahonianCounts::Log(c) => {
                let mut acc = f64::NEG_INFINITY;
                c.iter()
                    .map(|&x| {
                        acc = log_sum_exp2(acc, x);
                        acc
                    })
                    .collect()
            }
        }
    }

    /// Ball size at radius k as a [`Magnitude`] plus a saturation flag
    /// (true once the ball is the whole graph).
    pub fn ball_magnitude(&self, k: usize) -> (Magnitude, bool) {
        let k = k.min(self.max_distance());
        let saturated = k == self.max_distance();
        match &self.counts {
            MahonianCounts::Exact(c) => {
                let mut acc = BigUint::zero();
                for x in &c[..=k] {
                    acc += x;
                }
                (Magnitude::from_biguint(&acc), saturated)
            }
            MahonianCounts::Log(c) => {
                let mut acc = f64::NEG_INFINITY;
                for &x in &c[..=k] {
                    acc = log_sum_exp2(acc, x);
                }
                (Magnitude::from_ln(acc), saturated)
            }
        }
    }
}

/// Mahonian table with the default exact/log crossover.
pub fn mahonian_counts(num_alternatives: usize) -> Result<MahonianTable> {
    mahonian_counts_with_limit(num_alternatives, MAHONIAN_EXACT_LIMIT)
}

/// Mahonian table with a configurable exact/log crossover.
pub fn mahonian_counts_with_limit(
    num_alternatives: usize,
    exact_limit: usize,
) -> Result<MahonianTable> {
    if num_alternatives == 0 {
        return Err(Error::InvalidArgument(
            "need at least one alternative".into(),
        ));
    }
    if num_alternatives > MAHONIAN_MAX_ALTERNATIVES {
        return Err(Error::CapacityExceeded(format!(
            "Mahonian table for A = {num_alternatives} exceeds the cap of {MAHONIAN_MAX_ALTERNATIVES}"
        )));
    }
    let counts = if num_alternatives <= exact_limit {
        MahonianCounts::Exact(mahonian_exact(num_alternatives))
    } else {
        MahonianCounts::Log(mahonian_log(num_alternatives))
    };
    Ok(MahonianTable {
        num_alternatives,
        counts,
    })
}

/// Rows of the recurrence T(A, j) = Σ_{i ≤ min(j, A−1)} T(A−1, j−i), run
/// with prefix sums so each row costs O(maxd) big-integer operations.
fn mahonian_exact(a: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for n in 2..=a {
        let prev = row;
        let max_d = prev.len() - 1 + (n - 1);
        let mut prefix = Vec::with_capacity(prev.len());
        let mut acc = BigUint::zero();
        for x in &prev {
            acc += x;
            prefix.push(acc.clone());
        }
        let mut cur = Vec::with_capacity(max_d + 1);
        for j in 0..=max_d {
            let hi = j.min(prev.len() - 1);
            let mut val = prefix[hi].clone();
            if j >= n {
                val -= &prefix[j - n];
            }
            cur.push(val);
        }
        row = cur;
    }
    row
}

/// The same recurrence in log space, windowed log-sum-exp per entry.
/// Contributions more than 45 nats under the window maximum are dropped
/// (relative loss below 1e-17 for windows this narrow).
fn mahonian_log(a: usize) -> Vec<f64> {
    let mut row = vec![0.0f64];
    for n in 2..=a {
        let prev = row;
        let max_d = prev.len() - 1 + (n - 1);
        let mut cur = Vec::with_capacity(max_d + 1);
        for j in 0..=max_d {
            let hi = j.min(prev.len() - 1);
            let lo = j.saturating_sub(n - 1);
            let window = &prev[lo..=hi];
            let peak = window.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mut sum = 0.0;
            for &x in window {
                let delta = x - peak;
                if delta > -45.0 {
                    sum += delta.exp();
                }
            }
            cur.push(peak + sum.ln());
        }
        row = cur;
    }
    row
}

/// The closed-form ball-size surrogate min((A−1)^k, A!): each extra swap
/// multiplies the reachable set by at most A−1, saturating at the number
/// of vertices. Note it undercounts the closed ball at k = 1 (A−1 versus
/// the true 1 + (A−1)); see [`mahonian_counts`] for exact sizes.
pub fn loose_ball_size(k: usize, num_alternatives: usize) -> BigUint {
    let factorial = factorial_exact(num_alternatives);
    if num_alternatives <= 1 {
        return factorial; // single vertex
    }
    let base = BigUint::from(num_alternatives - 1);
    let mut power = BigUint::one();
    for _ in 0..k {
        power *= &base;
        if power >= factorial {
            return factorial;
        }
    }
    power
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::kendall_distance;
    use approx::assert_abs_diff_eq;
    use itertools::Itertools;
    use num_traits::ToPrimitive;

    fn pref(ranking: &[usize]) -> Preference {
        Preference::new(ranking.to_vec()).unwrap()
    }

    #[test]
    fn neighbors_of_identity_order_four() {
        let p = pref(&[0, 1, 2, 3]);
        let got: std::collections::BTreeSet<_> = adjacent_neighbors(&p).into_iter().collect();
        let want: std::collections::BTreeSet<_> = [
            pref(&[1, 0, 2, 3]),
            pref(&[0, 2, 1, 3]),
            pref(&[0, 1, 3, 2]),
        ]
        .into_iter()
        .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn neighbors_count_and_symmetry() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for a in 2..=8 {
            let p = crate::perm::sample_preference(&mut rng, a).unwrap();
            let neighbors = adjacent_neighbors(&p);
            assert_eq!(neighbors.len(), a - 1);
            let distinct: std::collections::BTreeSet<_> = neighbors.iter().cloned().collect();
            assert_eq!(distinct.len(), a - 1);
            for q in &neighbors {
                assert_eq!(kendall_distance(&p, q).unwrap(), 1);
                assert!(adjacent_neighbors(q).contains(&p));
            }
        }
        assert!(adjacent_neighbors(&pref(&[0])).is_empty());
    }

    /// Inversion-count histogram by brute force over all A! permutations.
    fn mahonian_brute(a: usize) -> Vec<u64> {
        let reference = Preference::identity(a).unwrap();
        let mut counts = vec![0u64; a * (a - 1) / 2 + 1];
        for perm in (0..a).permutations(a) {
            let p = Preference::new(perm).unwrap();
            counts[kendall_distance(&p, &reference).unwrap() as usize] += 1;
        }
        counts
    }

    #[test]
    fn bfs_spot_values() {
        assert_eq!(ball_sizes_bfs(2).unwrap(), vec![1, 2]);
        assert_eq!(ball_sizes_bfs(3).unwrap(), vec![1, 3, 5, 6]);
        assert_eq!(ball_sizes_bfs(4).unwrap(), vec![1, 4, 9, 15, 20, 23, 24]);
        assert_eq!(ball_sizes_bfs(1).unwrap(), vec![1]);
        assert!(ball_sizes_bfs(8).is_err());
        assert!(ball_sizes_bfs(0).is_err());
    }

    #[test]
    fn bfs_matches_brute_force_inversion_histogram() {
        for a in 1..=6 {
            let cumulative = ball_sizes_bfs(a).unwrap();
            let brute = mahonian_brute(a);
            let mut acc = 0u64;
            let brute_cumulative: Vec<u64> = brute
                .iter()
                .map(|&c| {
                    acc += c;
                    acc
                })
                .collect();
            assert_eq!(cumulative, brute_cumulative, "A = {a}");
        }
    }

    #[test]
    fn mahonian_spot_values() {
        let t4 = mahonian_counts(4).unwrap();
        let counts: Vec<u64> = match t4.counts() {
            MahonianCounts::Exact(c) => c.iter().map(|x| x.to_u64().unwrap()).collect(),
            _ => panic!("expected exact lane"),
        };
        assert_eq!(counts, vec![1, 3, 5, 6, 5, 3, 1]);

        let t1 = mahonian_counts(1).unwrap();
        assert_eq!(t1.max_distance(), 0);
        assert_eq!(t1.count_exact(0).unwrap().to_u64().unwrap(), 1);

        let t5 = mahonian_counts(5).unwrap();
        let last = t5.cumulative_exact().unwrap().pop().unwrap();
        assert_eq!(last.to_u64().unwrap(), 120);
    }

    #[test]
    fn mahonian_invariants_and_symmetry() {
        for a in 1..=9 {
            let table = mahonian_counts(a).unwrap();
            let counts = match table.counts() {
                MahonianCounts::Exact(c) => c.clone(),
                _ => panic!("expected exact lane"),
            };
            let max_d = a * (a - 1) / 2;
            assert_eq!(counts.len(), max_d + 1);
            assert_eq!(counts[0], BigUint::one());
            let total: BigUint = counts.iter().sum();
            assert_eq!(total, factorial_exact(a));
            for j in 0..counts.len() {
                assert_eq!(counts[j], counts[max_d - j], "A = {a}, j = {j}");
            }
        }
    }

    #[test]
    fn mahonian_cumulative_equals_bfs_ball_sizes() {
        for a in 1..=7 {
            let table = mahonian_counts(a).unwrap();
            let cumulative: Vec<u64> = table
                .cumulative_exact()
                .unwrap()
                .iter()
                .map(|x| x.to_u64().unwrap())
                .collect();
            assert_eq!(cumulative, ball_sizes_bfs(a).unwrap(), "A = {a}");
        }
    }

    #[test]
    fn mahonian_log_lane_matches_exact_lane() {
        for a in [2usize, 5, 9, 14, 20] {
            let exact = mahonian_counts(a).unwrap();
            let logged = mahonian_counts_with_limit(a, 1).unwrap();
            assert!(!logged.is_exact());
            for j in 0..=exact.max_distance() {
                assert_abs_diff_eq!(
                    exact.ln_count(j),
                    logged.ln_count(j),
                    epsilon = 1e-9
                );
            }
            let lc_exact = exact.ln_cumulative();
            let lc_log = logged.ln_cumulative();
            for j in 0..lc_exact.len() {
                assert_abs_diff_eq!(lc_exact[j], lc_log[j], epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn loose_ball_size_spot_values() {
        assert_eq!(loose_ball_size(0, 4), BigUint::from(1u32));
        assert_eq!(loose_ball_size(1, 4), BigUint::from(3u32));
        assert_eq!(loose_ball_size(10, 4), BigUint::from(24u32));
        // Regression: at k = 1 the surrogate undercounts the exact closed
        // ball (3 < 4 for A = 4).
        let exact_ball_1 = ball_sizes_bfs(4).unwrap()[1];
        assert!(BigUint::from(exact_ball_1) > loose_ball_size(1, 4));
    }

    #[test]
    fn ball_magnitude_reports_saturation() {
        let table = mahonian_counts(4).unwrap();
        let (m0, s0) = table.ball_magnitude(0);
        assert_eq!(m0.value(), 1.0);
        assert!(!s0);
        let (m6, s6) = table.ball_magnitude(6);
        assert_eq!(m6.value(), 24.0);
        assert!(s6);
        let (m9, s9) = table.ball_magnitude(9);
        assert_eq!(m9.value(), 24.0);
        assert!(s9);
    }
}
