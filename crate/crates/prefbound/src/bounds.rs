//! The three expressiveness bounds, evaluated in log space:
//!
//! * a lower bound on the probability that a uniformly random profile
//!   contains a circulant sub-profile (and so is not d-Euclidean),
//! * an upper bound on how many of the A! preferences can be
//!   simultaneously representable, via the banned-preference probability,
//! * a lower bound on the expected adjacent-swap distance between a random
//!   preference and its nearest representable approximation.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::logspace::{
    factorial_exact, ln_binomial, ln_factorial, ln_falling_factorial_ratio, ln_stirling2_column,
    log_sum_exp, LogProb, Magnitude,
};
use crate::permutohedron::{mahonian_counts, MahonianCounts, MahonianTable};

pub use crate::logspace::ln_stirling2;

/// Which ball sizes feed the information-loss bound: `paper` uses the
/// closed-form surrogate min((A−1)^k, A!), `exact` the true cumulative
/// inversion-count ball sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BallMode {
    Paper,
    Exact,
}

impl fmt::Display for BallMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BallMode::Paper => write!(f, "paper"),
            BallMode::Exact => write!(f, "exact"),
        }
    }
}

impl FromStr for BallMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(BallMode::Paper),
            "exact" => Ok(BallMode::Exact),
            other => Err(Error::InvalidArgument(format!(
                "ball mode must be 'paper' or 'exact', got '{other}'"
            ))),
        }
    }
}

/// The expectation sum walks O(A²) terms with big-integer ball sizes; this
/// guard keeps a single evaluation comfortably interactive.
pub const INFO_LOSS_MAX_ALTERNATIVES: usize = 1000;

/// Validated parameter tuple for bound evaluation.
#[derive(Clone, Debug)]
pub struct BoundParams {
    /// Number of alternatives A.
    pub num_alternatives: usize,
    /// Number of individuals I.
    pub individuals: usize,
    /// Dimensionality d of the Euclidean model.
    pub dimension: usize,
    /// Truncation K of the information-loss sum; `None` means the maximum
    /// allowed, A(A−1)/2.
    pub swap_cap: Option<usize>,
    pub ball_mode: BallMode,
    /// Standing assumption of the representable-count and information-loss
    /// bounds: the profile already carries at least as many unique
    /// preferences as could be representable. Must be true for those
    /// outputs to be labelled valid.
    pub assume_unique_exceeds_representable: bool,
}

impl BoundParams {
    pub fn new(num_alternatives: usize, individuals: usize, dimension: usize) -> Self {
        BoundParams {
            num_alternatives,
            individuals,
            dimension,
            swap_cap: None,
            ball_mode: BallMode::Paper,
            assume_unique_exceeds_representable: true,
        }
    }

    pub fn with_ball_mode(mut self, mode: BallMode) -> Self {
        self.ball_mode = mode;
        self
    }

    pub fn with_swap_cap(mut self, cap: usize) -> Self {
        self.swap_cap = Some(cap);
        self
    }

    /// A(A−1)/2, the diameter of the adjacent-swap graph.
    pub fn max_swaps(&self) -> usize {
        self.num_alternatives * (self.num_alternatives - 1) / 2
    }

    pub fn resolved_swap_cap(&self) -> usize {
        self.swap_cap.unwrap_or_else(|| self.max_swaps())
    }

    fn validate_common(&self) -> Result<()> {
        if self.num_alternatives == 0 {
            return Err(Error::InvalidArgument("requires A ≥ 1".into()));
        }
        if self.individuals == 0 {
            return Err(Error::InvalidArgument("requires I ≥ 1".into()));
        }
        if self.dimension == 0 {
            return Err(Error::InvalidArgument("requires d ≥ 1".into()));
        }
        Ok(())
    }

    /// Preconditions of the pathology-probability bound: d < min(I, A−1).
    pub fn validate_for_pathology_bound(&self) -> Result<()> {
        self.validate_common()?;
        if self.dimension >= self.individuals {
            return Err(Error::InvalidArgument(format!(
                "pathology probability bound requires d < I (got d = {}, I = {})",
                self.dimension, self.individuals
            )));
        }
        if self.dimension + 1 >= self.num_alternatives {
            return Err(Error::InvalidArgument(format!(
                "pathology probability bound requires d < A − 1 (got d = {}, A = {})",
                self.dimension, self.num_alternatives
            )));
        }
        Ok(())
    }

    /// Preconditions of the information-loss bound. d ≥ A−1 is allowed and
    /// yields the degenerate bound 0 (every preference representable).
    pub fn validate_for_info_loss(&self) -> Result<()> {
        self.validate_common()?;
        if self.num_alternatives > INFO_LOSS_MAX_ALTERNATIVES {
            return Err(Error::CapacityExceeded(format!(
                "information-loss bound accepts A ≤ {INFO_LOSS_MAX_ALTERNATIVES}, got {}",
                self.num_alternatives
            )));
        }
        if let Some(cap) = self.swap_cap {
            if cap > self.max_swaps() {
                return Err(Error::InvalidArgument(format!(
                    "information-loss bound requires K ≤ A(A−1)/2 (got K = {cap}, A(A−1)/2 = {})",
                    self.max_swaps()
                )));
            }
        }
        if !self.assume_unique_exceeds_representable {
            return Err(Error::InvalidArgument(
                "information-loss bound requires assume_unique_exceeds_representable; without \
                 unique preferences ≥ representable count the bound is not proven"
                    .into(),
            ));
        }
        Ok(())
    }
}

/// Lower bound on the probability that a uniformly random profile of I
/// preferences over A alternatives contains a circulant sub-profile of
/// size ≥ d+2 (and therefore is not d-Euclidean):
///
///   1 − (1 − Σ_{k=d+2}^{I} B_k)^⌊A/(d+2)⌋
///
/// where B_k combines the ways to choose and assign k individuals to the
/// d+2 rotated sub-preferences with the probability the remaining I−k
/// individuals avoid all of them. Evaluated entirely in log space.
pub fn pathology_probability_lower_bound(params: &BoundParams) -> Result<f64> {
    params.validate_for_pathology_bound()?;
    let a = params.num_alternatives;
    let i = params.individuals;
    let m = params.dimension + 2; // smallest circulant size that matters
    if i < m {
        return Ok(0.0); // not enough individuals for m distinct rotations
    }
    let ln_m_factorial = ln_factorial(m as u64);
    // P(one individual holds any of the m rotated sub-preferences) is
    // m/m! = 1/(m−1)!; the rotations are mutually exclusive.
    let miss_one = (-ln_factorial(m as u64 - 1)).exp();
    let ln_avoid_all = (-miss_one).ln_1p();
    let stirling = ln_stirling2_column(m, i);
    let mut ln_terms = Vec::with_capacity(i - m + 1);
    for (k, ln_s2) in stirling.iter().enumerate().skip(m) {
        let ln_bk = ln_binomial(i as u64, k as u64) + ln_s2 + ln_m_factorial
            - (k as f64) * ln_m_factorial
            + ((i - k) as f64) * ln_avoid_all;
        ln_terms.push(ln_bk);
    }
    let ln_sum = log_sum_exp(&ln_terms);
    let disjoint_slates = (a / m) as f64;
    let bound = if ln_sum >= 0.0 {
        1.0
    } else {
        -(disjoint_slates * (-ln_sum.exp()).ln_1p()).exp_m1()
    };
    Ok(bound.clamp(0.0, 1.0))
}

/// The banned-preference probability: the share of all A! preferences that
/// place some low-index alternative high enough to induce a banned rotated
/// sub-preference (see [`crate::pathology::is_banned`]).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BannedProbability {
    pub probability: f64,
    /// The complement in log space, exact even where it underflows
    /// linearly.
    pub complement: LogProb,
    /// True when d ≥ A−1: the union of positional events is empty and the
    /// probability is 0 by convention.
    pub degenerate: bool,
}

/// Probability that a uniform preference is banned, by the total-probability
/// recursion over the positional events: walk n = 1, 2, … and at each step
/// either alternative n−1 lands within the first A−d−n positions, or the
/// recursion continues conditioned on every earlier miss. The conditional
/// miss probability is the ratio of counts of alternatives available to
/// populate each position,
///
///   P(miss n | missed < n) = Π_{k=d+n+1}^{A} (k−n) / Π_{k=d+n+1}^{A} (k−n+1),
///
/// computed as a product of single ratios so nothing overflows.
pub fn banned_preference_probability(
    num_alternatives: usize,
    dimension: usize,
) -> BannedProbability {
    let (a, d) = (num_alternatives, dimension);
    if d + 1 >= a {
        return BannedProbability {
            probability: 0.0,
            complement: LogProb::certain(),
            degenerate: true,
        };
    }
    let mut banned = 0.0f64;
    let mut survive = 1.0f64;
    let mut ln_survive = 0.0f64;
    for n in 1..=(a - d - 1) {
        let mut q = 1.0f64;
        for k in (d + n + 1)..=a {
            q *= (k - n) as f64 / (k - n + 1) as f64;
        }
        banned += survive * (1.0 - q);
        survive *= q;
        ln_survive += q.ln();
    }
    BannedProbability {
        probability: banned.min(1.0),
        complement: LogProb::from_ln(ln_survive),
        degenerate: false,
    }
}

/// Upper bound on the number of preferences simultaneously representable in
/// d dimensions: (1 − P(banned))·A!.
#[derive(Clone, Debug)]
pub struct RepresentableBound {
    /// The count itself. The banned-preference probability has denominator
    /// A!, so the bound is an exact integer: the number of never-banned
    /// preferences, (d+1)^{A−d−1}·(d+1)!. Rounding it up is a no-op.
    pub count: BigUint,
    /// The same count in linear/log form for downstream arithmetic.
    pub magnitude: Magnitude,
    /// count / A!: the representable share of all rankings.
    pub fraction_of_all: f64,
    pub banned: BannedProbability,
}

pub fn representable_count_bound(
    num_alternatives: usize,
    dimension: usize,
) -> RepresentableBound {
    let (a, d) = (num_alternatives, dimension);
    let banned = banned_preference_probability(a, d);
    let count = if banned.degenerate {
        factorial_exact(a)
    } else {
        // (1 − P(banned))·A!: the survivor product telescopes to
        // (d+1)/(A−n+1) per step, so the count collapses to this product.
        BigUint::from(d + 1).pow((a - d - 1) as u32) * factorial_exact(d + 1)
    };
    let magnitude = Magnitude::from_biguint(&count);
    RepresentableBound {
        count,
        magnitude,
        fraction_of_all: banned.complement.probability(),
        banned,
    }
}

/// Lower bound on the expected information loss.
#[derive(Clone, Debug)]
pub struct InfoLossBound {
    /// Lower bound on the expected adjacent-swap distance from a uniform
    /// preference to the nearest representable one.
    pub expectation_lb: f64,
    /// expectation_lb / (A(A−1)/2): share of the maximum possible distance.
    pub scaled_lb: f64,
    /// Per-k contributions 1 − F(k) for k = 0..=K, each in [0, 1].
    pub terms: Vec<f64>,
    /// The representable-count bound in effect (linear value; ∞ once past
    /// the f64 range).
    pub rhat_used: f64,
    pub ball_mode: BallMode,
}

/// One ball size with everything the indicator needs.
struct Ball {
    magnitude: Magnitude,
    exact: Option<BigUint>,
    saturated: bool,
}

/// Ball sizes per radius k = 0, 1, 2, … for either mode.
enum BallStream {
    Loose {
        factorial: BigUint,
        base: BigUint,
        current: BigUint,
        saturated: bool,
        started: bool,
    },
    Exact {
        cumulative: Vec<BigUint>,
        next: usize,
    },
    Log {
        ln_cumulative: Vec<f64>,
        next: usize,
    },
}

impl BallStream {
    fn new(params: &BoundParams, table: Option<&MahonianTable>) -> Result<BallStream> {
        let a = params.num_alternatives;
        match params.ball_mode {
            BallMode::Paper => Ok(BallStream::Loose {
                factorial: factorial_exact(a),
                base: BigUint::from(a.saturating_sub(1).max(1)),
                current: BigUint::from(1u32),
                saturated: a <= 1,
                started: false,
            }),
            BallMode::Exact => {
                let owned;
                let table = match table {
                    Some(t) if t.num_alternatives() == a => t,
                    Some(t) => {
                        return Err(Error::InvalidArgument(format!(
                            "ball-size table is for A = {}, bound asks for A = {a}",
                            t.num_alternatives()
                        )))
                    }
                    None => {
                        owned = mahonian_counts(a)?;
                        &owned
                    }
                };
                match table.counts() {
                    MahonianCounts::Exact(_) => Ok(BallStream::Exact {
                        cumulative: table.cumulative_exact().expect("exact lane"),
                        next: 0,
                    }),
                    MahonianCounts::Log(_) => Ok(BallStream::Log {
                        ln_cumulative: table.ln_cumulative(),
                        next: 0,
                    }),
                }
            }
        }
    }

    fn next_ball(&mut self) -> Ball {
        match self {
            BallStream::Loose {
                factorial,
                base,
                current,
                saturated,
                started,
            } => {
                if !*started {
                    *started = true;
                } else if !*saturated {
                    *current *= &*base;
                    if &*current >= factorial {
                        *current = factorial.clone();
                        *saturated = true;
                    }
                }
                Ball {
                    magnitude: Magnitude::from_biguint(current),
                    exact: Some(current.clone()),
                    saturated: *saturated,
                }
            }
            BallStream::Exact { cumulative, next } => {
                let k = (*next).min(cumulative.len() - 1);
                *next += 1;
                Ball {
                    magnitude: Magnitude::from_biguint(&cumulative[k]),
                    exact: Some(cumulative[k].clone()),
                    saturated: k == cumulative.len() - 1,
                }
            }
            BallStream::Log { ln_cumulative, next } => {
                let k = (*next).min(ln_cumulative.len() - 1);
                *next += 1;
                Ball {
                    magnitude: Magnitude::from_ln(ln_cumulative[k]),
                    exact: None,
                    saturated: k == ln_cumulative.len() - 1,
                }
            }
        }
    }
}

/// 1 − F(k): the probability that none of the r̂ uniformly placed
/// representable preferences land within the radius-k ball,
/// (A!−n)_r̂/(A!)_r̂ under the indicator r̂ < A!−n. The indicator is decided
/// with exact integers whenever both sides have them; otherwise the log
/// comparison errs toward dropping the term, which only lowers the bound.
fn survival_term(
    total: &Magnitude,
    total_exact: &BigUint,
    rhat: &RepresentableBound,
    ball: &Ball,
) -> f64 {
    if ball.saturated {
        return 0.0;
    }
    let include = match &ball.exact {
        Some(n_ball) => &(&rhat.count + n_ball) < total_exact,
        None => {
            let frac = (ball.magnitude.ln() - total.ln()).exp();
            frac < 1.0 && rhat.magnitude.ln() < total.ln() + (-frac).ln_1p()
        }
    };
    if !include {
        return 0.0;
    }
    ln_falling_factorial_ratio(*total, ball.magnitude, rhat.magnitude).exp()
}

/// F(k): upper bound on the distribution function of the swap distance to
/// the nearest representable preference. Non-decreasing in k, in [0, 1].
pub fn info_loss_cdf_bound(k: usize, params: &BoundParams) -> Result<f64> {
    params.validate_for_info_loss()?;
    let rhat = representable_count_bound(params.num_alternatives, params.dimension);
    let total_exact = factorial_exact(params.num_alternatives);
    let total = Magnitude::from_biguint(&total_exact);
    let mut stream = BallStream::new(params, None)?;
    let mut ball = stream.next_ball();
    for _ in 0..k {
        ball = stream.next_ball();
    }
    let term = survival_term(&total, &total_exact, &rhat, &ball);
    Ok((1.0 - term).clamp(0.0, 1.0))
}

/// Lower bound on the expected swap distance: Σ_{k=0}^{K} (1 − F(k)).
///
/// For d ≥ A−1 every preference is representable and the bound is 0.
pub fn info_loss_lower_bound(params: &BoundParams) -> Result<InfoLossBound> {
    info_loss_lower_bound_with_table(params, None)
}

/// Same, reusing a prebuilt ball-size table (exact mode sweeps share one
/// table per A).
pub fn info_loss_lower_bound_with_table(
    params: &BoundParams,
    table: Option<&MahonianTable>,
) -> Result<InfoLossBound> {
    params.validate_for_info_loss()?;
    let a = params.num_alternatives;
    let cap = params.resolved_swap_cap();
    let rhat = representable_count_bound(a, params.dimension);
    let total_exact = factorial_exact(a);
    let total = Magnitude::from_biguint(&total_exact);
    let mut stream = BallStream::new(params, table)?;
    let mut terms = Vec::with_capacity(cap + 1);
    for _ in 0..=cap {
        let ball = stream.next_ball();
        terms.push(survival_term(&total, &total_exact, &rhat, &ball));
    }
    let expectation_lb: f64 = terms.iter().sum();
    let max_swaps = params.max_swaps() as f64;
    let scaled_lb = if max_swaps > 0.0 {
        expectation_lb / max_swaps
    } else {
        0.0
    };
    Ok(InfoLossBound {
        expectation_lb,
        scaled_lb,
        terms,
        rhat_used: rhat.magnitude.value(),
        ball_mode: params.ball_mode,
    })
}

/// The dimensionality above which every profile of I preferences over A
/// alternatives is representable: the conservative threshold
/// min(I−1, A−1).
pub fn sufficiency_threshold(num_alternatives: usize, individuals: usize) -> usize {
    individuals
        .saturating_sub(1)
        .min(num_alternatives.saturating_sub(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pathology::is_banned;
    use crate::perm::Preference;
    use approx::assert_abs_diff_eq;
    use itertools::Itertools;

    #[test]
    fn pathology_bound_exact_value_three_three_one() {
        let bound =
            pathology_probability_lower_bound(&BoundParams::new(3, 3, 1)).unwrap();
        assert_abs_diff_eq!(bound, 1.0 / 36.0, epsilon = 1e-12);
    }

    #[test]
    fn pathology_bound_empty_sum_when_too_few_individuals() {
        // I = d+1 satisfies d < I but leaves no room for d+2 rotations.
        let bound =
            pathology_probability_lower_bound(&BoundParams::new(5, 2, 1)).unwrap();
        assert_eq!(bound, 0.0);
    }

    #[test]
    fn pathology_bound_validation_names_the_inequality() {
        let err = pathology_probability_lower_bound(&BoundParams::new(5, 1, 1)).unwrap_err();
        assert!(err.to_string().contains("d < I"), "{err}");
        let err = pathology_probability_lower_bound(&BoundParams::new(3, 5, 2)).unwrap_err();
        assert!(err.to_string().contains("d < A − 1"), "{err}");
        let err = pathology_probability_lower_bound(&BoundParams::new(3, 5, 0)).unwrap_err();
        assert!(err.to_string().contains("d ≥ 1"), "{err}");
    }

    /// Independent inclusion–exclusion form of the inner sum: the chance
    /// that all d+2 rotation classes (each hit with probability 1/(d+2)!)
    /// are collected within I draws.
    fn collected_probability(i: usize, d: usize) -> f64 {
        let m = d + 2;
        let mut m_factorial = 1.0f64;
        for k in 2..=m {
            m_factorial *= k as f64;
        }
        let mut binom = 1.0f64;
        let mut total = 0.0f64;
        for j in 0..=m {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            total += sign * binom * (1.0 - j as f64 / m_factorial).powi(i as i32);
            binom = binom * ((m - j) as f64) / ((j + 1) as f64);
        }
        total
    }

    #[test]
    fn pathology_inner_sum_matches_inclusion_exclusion() {
        // With A = d+2 the outer exponent is 1, so the bound equals the
        // inner sum exactly.
        for d in 1..=3usize {
            let a = d + 2;
            for i in (d + 2)..=40 {
                let bound =
                    pathology_probability_lower_bound(&BoundParams::new(a, i, d)).unwrap();
                let expected = collected_probability(i, d);
                assert_abs_diff_eq!(bound, expected, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn pathology_bound_is_monotone_and_approaches_one() {
        // Monotone up to the 1e-12 probability noise floor: once the bound
        // sits within eps of 1, the complement is below what 1 − exp(·)
        // can resolve.
        let mut previous = 0.0;
        for i in 3..=200usize {
            let bound =
                pathology_probability_lower_bound(&BoundParams::new(3, i, 1)).unwrap();
            assert!(
                bound + 1e-12 >= previous,
                "bound decreased at I = {i}: {bound} < {previous}"
            );
            assert!((0.0..=1.0).contains(&bound));
            previous = bound;
        }
        assert!(previous > 0.99, "bound at I = 200 is {previous}");
    }

    #[test]
    fn banned_probability_spot_values() {
        let p31 = banned_preference_probability(3, 1);
        assert_abs_diff_eq!(p31.probability, 1.0 / 3.0, epsilon = 1e-15);
        assert!(!p31.degenerate);
        let p41 = banned_preference_probability(4, 1);
        assert_abs_diff_eq!(p41.probability, 2.0 / 3.0, epsilon = 1e-15);
        let degenerate = banned_preference_probability(4, 3);
        assert_eq!(degenerate.probability, 0.0);
        assert!(degenerate.degenerate);
        assert_eq!(degenerate.complement.probability(), 1.0);
    }

    #[test]
    fn banned_probability_matches_enumeration() {
        for a in 3..=7usize {
            for d in 1..(a - 1) {
                let total: usize = (1..=a).product();
                let hits = (0..a)
                    .permutations(a)
                    .filter(|perm| is_banned(&Preference::new(perm.clone()).unwrap(), d))
                    .count();
                let expected = hits as f64 / total as f64;
                let got = banned_preference_probability(a, d);
                assert_abs_diff_eq!(got.probability, expected, epsilon = 1e-12);
                assert_abs_diff_eq!(
                    got.complement.probability(),
                    1.0 - expected,
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn representable_count_spot_values() {
        assert_eq!(
            representable_count_bound(3, 1).count,
            BigUint::from(4u32)
        );
        assert_eq!(
            representable_count_bound(4, 1).count,
            BigUint::from(8u32)
        );
        // d = A−1: nothing is banned, the count is A! exactly.
        assert_eq!(
            representable_count_bound(4, 3).count,
            BigUint::from(24u32)
        );
        let r = representable_count_bound(3, 1);
        assert_abs_diff_eq!(r.fraction_of_all, 2.0 / 3.0, epsilon = 1e-14);
        assert_eq!(r.magnitude.value(), 4.0);
    }

    #[test]
    fn representable_count_equals_non_banned_enumeration() {
        use num_traits::ToPrimitive;
        for a in 3..=7usize {
            for d in 1..a {
                let survivors = (0..a)
                    .permutations(a)
                    .filter(|perm| !is_banned(&Preference::new(perm.clone()).unwrap(), d))
                    .count() as u64;
                let bound = representable_count_bound(a, d);
                assert_eq!(
                    bound.count.to_u64().unwrap(),
                    survivors,
                    "A = {a}, d = {d}"
                );
            }
        }
    }

    #[test]
    fn info_loss_cdf_spot_values() {
        let params = BoundParams::new(3, 1, 1);
        // r̂ = 4, ball(0) = 1: F(0) = 1 − (5·4·3·2)/(6·5·4·3) = 2/3.
        assert_abs_diff_eq!(
            info_loss_cdf_bound(0, &params).unwrap(),
            2.0 / 3.0,
            epsilon = 1e-12
        );
        // ball(1) = 2 in paper mode: the indicator fails (4 ≥ 6−2), F = 1.
        assert_abs_diff_eq!(
            info_loss_cdf_bound(1, &params).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        // d ≥ A−1: r̂ = A! and F(k) = 1 for every k.
        let degenerate = BoundParams::new(3, 1, 2);
        for k in 0..5 {
            assert_eq!(info_loss_cdf_bound(k, &degenerate).unwrap(), 1.0);
        }
    }

    #[test]
    fn info_loss_expectation_spot_values() {
        let bound = info_loss_lower_bound(&BoundParams::new(3, 1, 1).with_swap_cap(3)).unwrap();
        assert_abs_diff_eq!(bound.expectation_lb, 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(bound.scaled_lb, 1.0 / 9.0, epsilon = 1e-12);
        assert_eq!(bound.rhat_used, 4.0);
        assert_eq!(bound.terms.len(), 4);

        // Same value on the exact ball sizes at this scale.
        let exact = info_loss_lower_bound(
            &BoundParams::new(3, 1, 1).with_ball_mode(BallMode::Exact),
        )
        .unwrap();
        assert_abs_diff_eq!(exact.expectation_lb, 1.0 / 3.0, epsilon = 1e-12);

        // Degenerate d: all representable, zero loss.
        for mode in [BallMode::Paper, BallMode::Exact] {
            let zero =
                info_loss_lower_bound(&BoundParams::new(4, 1, 3).with_ball_mode(mode)).unwrap();
            assert_eq!(zero.expectation_lb, 0.0);
            assert_eq!(zero.scaled_lb, 0.0);
        }
    }

    #[test]
    fn info_loss_validation() {
        let err = info_loss_lower_bound(&BoundParams::new(4, 1, 1).with_swap_cap(7)).unwrap_err();
        assert!(err.to_string().contains("K ≤ A(A−1)/2"), "{err}");
        let mut params = BoundParams::new(4, 1, 1);
        params.assume_unique_exceeds_representable = false;
        assert!(info_loss_lower_bound(&params).is_err());
    }

    #[test]
    fn info_loss_terms_shape() {
        for a in [3usize, 4, 5, 8, 12] {
            for d in 1..(a - 1).max(2) {
                for mode in [BallMode::Paper, BallMode::Exact] {
                    let params = BoundParams::new(a, 1, d).with_ball_mode(mode);
                    let bound = info_loss_lower_bound(&params).unwrap();
                    let mut prev = f64::INFINITY;
                    for (k, &t) in bound.terms.iter().enumerate() {
                        assert!((0.0..=1.0).contains(&t), "term {t} at k = {k}");
                        assert!(
                            t <= prev + 1e-12,
                            "terms must be non-increasing (F non-decreasing), A={a} d={d} k={k}"
                        );
                        prev = t;
                    }
                    assert_eq!(*bound.terms.last().unwrap(), 0.0);
                    assert!(bound.expectation_lb <= a as f64 * (a as f64 - 1.0) / 2.0);
                }
            }
        }
    }

    #[test]
    fn info_loss_non_increasing_in_dimension() {
        // More dimensions mean more representable preferences, never more
        // expected loss.
        for a in [5usize, 8, 12, 20] {
            let mut previous = f64::INFINITY;
            for d in 1..a {
                let bound = info_loss_lower_bound(&BoundParams::new(a, 1, d))
                    .unwrap()
                    .expectation_lb;
                assert!(
                    bound <= previous + 1e-9,
                    "A={a}: bound rose from {previous} to {bound} at d={d}"
                );
                previous = bound;
            }
        }
    }

    #[test]
    fn info_loss_monotone_in_swap_cap() {
        let small = info_loss_lower_bound(&BoundParams::new(6, 1, 1).with_swap_cap(4)).unwrap();
        let large = info_loss_lower_bound(&BoundParams::new(6, 1, 1).with_swap_cap(12)).unwrap();
        assert!(small.expectation_lb <= large.expectation_lb + 1e-15);
    }

    #[test]
    fn exact_mode_no_higher_where_exact_ball_dominates() {
        use crate::permutohedron::loose_ball_size;
        for a in [4usize, 5, 6, 8] {
            for d in 1..(a - 1) {
                let paper = info_loss_lower_bound(&BoundParams::new(a, 1, d)).unwrap();
                let exact = info_loss_lower_bound(
                    &BoundParams::new(a, 1, d).with_ball_mode(BallMode::Exact),
                )
                .unwrap();
                let table = mahonian_counts(a).unwrap();
                let cumulative = table.cumulative_exact().unwrap();
                for k in 0..paper.terms.len() {
                    let exact_ball = &cumulative[k.min(cumulative.len() - 1)];
                    if exact_ball >= &loose_ball_size(k, a) {
                        assert!(
                            exact.terms[k] <= paper.terms[k] + 1e-12,
                            "A={a} d={d} k={k}"
                        );
                    }
                }
            }
        }
    }

    /// Direct-space evaluation of one survival term: plain f64 falling
    /// factorial quotients, no logs anywhere.
    fn survival_term_direct(a: usize, d: usize, k: usize) -> f64 {
        use num_traits::ToPrimitive;
        let total: f64 = (1..=a).product::<usize>() as f64;
        let rhat = representable_count_bound(a, d).count.to_u64().unwrap() as f64;
        let ball = loose_ball_f64(k, a);
        if rhat >= total - ball {
            return 0.0;
        }
        let mut ratio = 1.0f64;
        let mut i = 0.0;
        while i < rhat {
            ratio *= (total - ball - i) / (total - i);
            i += 1.0;
        }
        ratio
    }

    fn loose_ball_f64(k: usize, a: usize) -> f64 {
        use num_traits::ToPrimitive;
        crate::permutohedron::loose_ball_size(k, a).to_f64().unwrap()
    }

    #[test]
    fn log_space_terms_agree_with_direct_space() {
        for a in 3..=8usize {
            for d in 1..(a - 1) {
                let bound = info_loss_lower_bound(&BoundParams::new(a, 1, d)).unwrap();
                for (k, &term) in bound.terms.iter().enumerate() {
                    let direct = survival_term_direct(a, d, k);
                    assert_abs_diff_eq!(term, direct, epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn headline_scaled_bound_exceeds_seven_percent_somewhere() {
        let bound = info_loss_lower_bound(&BoundParams::new(5, 1, 1)).unwrap();
        assert!(
            bound.scaled_lb >= 0.07,
            "scaled bound at A=5, d=1 is {}",
            bound.scaled_lb
        );
    }

    #[test]
    fn sufficiency_threshold_spot_values() {
        assert_eq!(sufficiency_threshold(5, 3), 2);
        assert_eq!(sufficiency_threshold(2, 100), 1);
        assert_eq!(sufficiency_threshold(4, 4), 3);
    }

    #[test]
    fn ball_mode_round_trips_through_strings() {
        assert_eq!("paper".parse::<BallMode>().unwrap(), BallMode::Paper);
        assert_eq!("exact".parse::<BallMode>().unwrap(), BallMode::Exact);
        assert!("fuzzy".parse::<BallMode>().is_err());
        assert_eq!(BallMode::Paper.to_string(), "paper");
        assert_eq!(BallMode::Exact.to_string(), "exact");
    }
}
