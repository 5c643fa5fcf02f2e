//! Independent brute-force and Monte Carlo ground truth for every bound,
//! plus a harness that cross-checks the bounds against their oracles at
//! desk scale and collects the outcomes instead of panicking.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{
    banned_preference_probability, info_loss_lower_bound, pathology_probability_lower_bound,
    representable_count_bound, BallMode, BoundParams, INFO_LOSS_MAX_ALTERNATIVES,
};
use crate::error::{Error, Result};
use crate::logspace::ln_factorial;
use crate::pathology::{
    contains_circulant, is_banned, DETECTOR_MAX_ALTERNATIVES, DETECTOR_MAX_INDIVIDUALS,
};
use crate::perm::{sample_profile, Preference, Profile};
use crate::permutohedron::{ball_sizes_bfs, mahonian_counts, BFS_MAX_ALTERNATIVES};

/// Default ceiling on (A!)^I for exhaustive profile enumeration.
pub const DEFAULT_PROFILE_CAP: u64 = 10_000_000;

/// Full-permutation enumeration stays instant through 10! = 3.6M.
pub const BANNED_ENUM_MAX_ALTERNATIVES: usize = 10;

/// The 1-D representability oracle is only asked for small slates.
pub const LINE_ORACLE_MAX_ALTERNATIVES: usize = 8;

/// An exact probability as a reduced fraction of counted outcomes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactProbability {
    pub hits: u64,
    pub total: u64,
}

impl ExactProbability {
    pub fn value(&self) -> f64 {
        self.hits as f64 / self.total as f64
    }

    pub fn ratio(&self) -> Ratio<u64> {
        Ratio::new(self.hits, self.total)
    }
}

/// A Monte Carlo frequency estimate with its binomial standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
}

impl McEstimate {
    fn from_counts(hits: u64, trials: u64, seed: u64) -> Self {
        let estimate = hits as f64 / trials as f64;
        McEstimate {
            estimate,
            std_error: (estimate * (1.0 - estimate) / trials as f64).sqrt(),
            trials,
            seed,
        }
    }
}

/// Exact probability that a uniformly random ordered profile of I
/// preferences over A alternatives contains a size-k circulant
/// sub-profile, by enumerating all (A!)^I profiles. Profiles are ordered
/// tuples: individuals draw independently and uniformly.
pub fn exact_pathology_probability(
    num_alternatives: usize,
    individuals: usize,
    k: usize,
    profile_cap: u64,
) -> Result<ExactProbability> {
    if num_alternatives == 0 || individuals == 0 {
        return Err(Error::InvalidArgument(
            "need A ≥ 1 and I ≥ 1".into(),
        ));
    }
    if k < 3 {
        return Err(Error::InvalidArgument(format!(
            "circulant size k must be at least 3, got {k}"
        )));
    }
    let ln_total = individuals as f64 * ln_factorial(num_alternatives as u64);
    if ln_total > (profile_cap as f64).ln() + 1e-9 {
        return Err(Error::CapacityExceeded(format!(
            "(A!)^I exceeds the enumeration cap of {profile_cap} profiles \
             (A = {num_alternatives}, I = {individuals})"
        )));
    }
    let perms: Vec<Preference> = (0..num_alternatives)
        .permutations(num_alternatives)
        .map(|p| Preference::new(p).expect("permutation"))
        .collect();
    let total = (perms.len() as u64).pow(individuals as u32);
    if k > num_alternatives.min(individuals) {
        // Pigeonhole: k distinct rotations need k alternatives and k
        // individuals.
        return Ok(ExactProbability { hits: 0, total });
    }
    let mut hits = 0u64;
    let mut digits = vec![0usize; individuals];
    loop {
        let profile = Profile::new(digits.iter().map(|&d| perms[d].clone()).collect())?;
        if contains_circulant(&profile, k)? {
            hits += 1;
        }
        let mut pos = 0;
        loop {
            if pos == individuals {
                return Ok(ExactProbability { hits, total });
            }
            digits[pos] += 1;
            if digits[pos] < perms.len() {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

/// Monte Carlo estimate of the same probability; deterministic given the
/// seed. For k past min(I, A) the event is impossible and the estimate is
/// an exact zero without sampling.
pub fn mc_pathology_probability(
    num_alternatives: usize,
    individuals: usize,
    k: usize,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    if k < 3 {
        return Err(Error::InvalidArgument(format!(
            "circulant size k must be at least 3, got {k}"
        )));
    }
    if k > num_alternatives.min(individuals) {
        return Ok(McEstimate::from_counts(0, trials, seed));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    for _ in 0..trials {
        let profile = sample_profile(&mut rng, num_alternatives, individuals)?;
        if contains_circulant(&profile, k)? {
            hits += 1;
        }
    }
    Ok(McEstimate::from_counts(hits, trials, seed))
}

/// Exact banned-preference fraction by iterating all A! permutations.
pub fn banned_fraction_exact(num_alternatives: usize, dimension: usize) -> Result<ExactProbability> {
    if num_alternatives == 0 {
        return Err(Error::InvalidArgument("need A ≥ 1".into()));
    }
    if num_alternatives > BANNED_ENUM_MAX_ALTERNATIVES {
        return Err(Error::CapacityExceeded(format!(
            "banned-preference enumeration accepts A ≤ {BANNED_ENUM_MAX_ALTERNATIVES}, got {num_alternatives}"
        )));
    }
    let total: u64 = (1..=num_alternatives as u64).product();
    let hits = (0..num_alternatives)
        .permutations(num_alternatives)
        .filter(|perm| is_banned(&Preference::new(perm.clone()).expect("permutation"), dimension))
        .count() as u64;
    Ok(ExactProbability { hits, total })
}

/// Number of distinct strict orders induced on a line: alternatives sit at
/// the given locations, an ideal point sweeps ℝ, and each midpoint crossing
/// flips one adjacent pair. For locations in generic position (all
/// midpoints distinct) the count is C(A,2)+1.
pub fn one_dim_distinct_orders(locations: &[f64]) -> Result<usize> {
    if locations.is_empty() {
        return Err(Error::InvalidArgument(
            "need at least one alternative location".into(),
        ));
    }
    if locations.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument(
            "alternative locations must be finite".into(),
        ));
    }
    let a = locations.len();
    for i in 0..a {
        for j in (i + 1)..a {
            if locations[i] == locations[j] {
                return Err(Error::DegenerateInput(format!(
                    "alternatives {i} and {j} share a location; perturb the locations"
                )));
            }
        }
    }
    if a == 1 {
        return Ok(1);
    }
    let mut midpoints = Vec::with_capacity(a * (a - 1) / 2);
    for i in 0..a {
        for j in (i + 1)..a {
            midpoints.push((locations[i] + locations[j]) / 2.0);
        }
    }
    for i in 0..midpoints.len() {
        for j in (i + 1)..midpoints.len() {
            if midpoints[i] == midpoints[j] {
                return Err(Error::DegenerateInput(
                    "coincident pair midpoints; perturb the locations".into(),
                ));
            }
        }
    }
    midpoints.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    let mut ideals = Vec::with_capacity(midpoints.len() + 1);
    ideals.push(midpoints[0] - 1.0);
    for w in midpoints.windows(2) {
        let mid = (w[0] + w[1]) / 2.0;
        if mid == w[0] || mid == w[1] {
            return Err(Error::DegenerateInput(
                "midpoints too close to separate in f64; perturb the locations".into(),
            ));
        }
        ideals.push(mid);
    }
    ideals.push(midpoints[midpoints.len() - 1] + 1.0);
    let mut orders: BTreeSet<Vec<usize>> = BTreeSet::new();
    for ideal in ideals {
        let mut by_distance: Vec<usize> = (0..a).collect();
        by_distance.sort_by(|&x, &y| {
            (locations[x] - ideal)
                .abs()
                .partial_cmp(&(locations[y] - ideal).abs())
                .expect("finite")
        });
        for pair in by_distance.windows(2) {
            if (locations[pair[0]] - ideal).abs() == (locations[pair[1]] - ideal).abs() {
                return Err(Error::DegenerateInput(
                    "an ideal point ties two alternatives; perturb the locations".into(),
                ));
            }
        }
        orders.insert(by_distance);
    }
    Ok(orders.len())
}

/// Locations guaranteed to be in generic position: powers of two, whose
/// pairwise midpoints 2^{i−1} + 2^{j−1} are all distinct.
pub fn generic_line_locations(num_alternatives: usize) -> Vec<f64> {
    (0..num_alternatives).map(|j| 2f64.powi(j as i32)).collect()
}

// ---------------------------------------------------------------------------
// The bound-vs-oracle harness
// ---------------------------------------------------------------------------

/// Budget and reproducibility knobs for [`verify_all`].
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Monte Carlo trials per grid point that exceeds the exhaustive cap.
    pub trials: u64,
    /// Root seed; per-point seeds derive from it by index, so concurrency
    /// and grid order cannot change the outcome.
    pub seed: u64,
    /// Ceiling on (A!)^I for the exhaustive oracle.
    pub profile_cap: u64,
    /// Multiplier applied to every computed bound before comparison: 1.0
    /// verifies, anything larger is a negative control that must fail.
    pub bound_scale: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            trials: 20_000,
            seed: 1729,
            profile_cap: DEFAULT_PROFILE_CAP,
            bound_scale: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass,
    Fail,
    Skipped(String),
}

/// One bound-vs-oracle comparison.
#[derive(Clone, Debug)]
pub struct VerifyCheck {
    pub kind: &'static str,
    pub num_alternatives: usize,
    pub individuals: Option<usize>,
    pub dimension: Option<usize>,
    pub bound: Option<f64>,
    pub oracle: Option<f64>,
    /// Margin in the direction that must be non-negative for a pass.
    pub slack: Option<f64>,
    pub outcome: CheckOutcome,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub checks: Vec<VerifyCheck>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        !self
            .checks
            .iter()
            .any(|c| matches!(c.outcome, CheckOutcome::Fail))
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        let mut pass = 0;
        let mut fail = 0;
        let mut skipped = 0;
        for c in &self.checks {
            match c.outcome {
                CheckOutcome::Pass => pass += 1,
                CheckOutcome::Fail => fail += 1,
                CheckOutcome::Skipped(_) => skipped += 1,
            }
        }
        (pass, fail, skipped)
    }

    pub fn summary(&self) -> String {
        let (pass, fail, skipped) = self.counts();
        let mut out = format!(
            "{} checks: {pass} passed, {fail} failed, {skipped} skipped\n",
            self.checks.len()
        );
        for c in &self.checks {
            if let CheckOutcome::Fail = c.outcome {
                out.push_str(&format!(
                    "FAIL {} A={} I={:?} d={:?} bound={:?} oracle={:?} slack={:?}\n",
                    c.kind, c.num_alternatives, c.individuals, c.dimension, c.bound, c.oracle,
                    c.slack
                ));
            }
        }
        out
    }
}

/// One splitmix64 step: derives stable per-point seeds from the root seed.
fn derive_seed(root: u64, index: u64) -> u64 {
    let mut z = root
        .wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const SLACK_TOLERANCE: f64 = 1e-12;

/// One planned comparison; planning is sequential (it deduplicates the
/// per-(A, d) and per-A checks) and execution is embarrassingly parallel.
enum CheckPlan {
    Pathology { params: BoundParams, index: u64 },
    Banned { params: BoundParams },
    InfoLossShape { params: BoundParams },
    RhatLine { a: usize },
    BallSizes { a: usize },
}

/// Cross-check every bound against its oracle over the grid, within the
/// capacity caps. Individual failures are collected, never panicked; grid
/// points whose parameters do not satisfy a bound's preconditions come
/// back as skipped with the reason.
///
/// Checks run in parallel on the ambient rayon pool. Monte Carlo seeds
/// derive from the root seed by grid index, so neither thread count nor
/// scheduling affects the report.
pub fn verify_all(grid: &[BoundParams], options: &VerifyOptions) -> VerifyReport {
    let mut plans = Vec::new();
    let mut seen_ad: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut seen_a: BTreeSet<usize> = BTreeSet::new();
    for (index, params) in grid.iter().enumerate() {
        let a = params.num_alternatives;
        let d = params.dimension;
        plans.push(CheckPlan::Pathology {
            params: params.clone(),
            index: index as u64,
        });
        if params.validate_for_pathology_bound().is_err() {
            continue;
        }
        if seen_ad.insert((a, d)) {
            plans.push(CheckPlan::Banned {
                params: params.clone(),
            });
            plans.push(CheckPlan::InfoLossShape {
                params: params.clone(),
            });
        }
        if seen_a.insert(a) {
            plans.push(CheckPlan::RhatLine { a });
            plans.push(CheckPlan::BallSizes { a });
        }
    }
    let checks = plans
        .into_par_iter()
        .map(|plan| match plan {
            CheckPlan::Pathology { params, index } => {
                check_pathology_dominance(&params, options, index)
            }
            CheckPlan::Banned { params } => check_banned_probability(&params, options),
            CheckPlan::InfoLossShape { params } => check_info_loss_shape(&params, options),
            CheckPlan::RhatLine { a } => check_representable_vs_line(a, options),
            CheckPlan::BallSizes { a } => check_ball_sizes(a),
        })
        .collect();
    VerifyReport { checks }
}

fn check_pathology_dominance(
    params: &BoundParams,
    options: &VerifyOptions,
    index: u64,
) -> VerifyCheck {
    let (a, i, d) = (
        params.num_alternatives,
        params.individuals,
        params.dimension,
    );
    let mut check = VerifyCheck {
        kind: "bound_c_dominance",
        num_alternatives: a,
        individuals: Some(i),
        dimension: Some(d),
        bound: None,
        oracle: None,
        slack: None,
        outcome: CheckOutcome::Pass,
    };
    if let Err(e) = params.validate_for_pathology_bound() {
        check.outcome = CheckOutcome::Skipped(e.to_string());
        return check;
    }
    let bound = match pathology_probability_lower_bound(params) {
        Ok(b) => b * options.bound_scale,
        Err(e) => {
            check.outcome = CheckOutcome::Skipped(e.to_string());
            return check;
        }
    };
    check.bound = Some(bound);
    let k = d + 2;
    if i < k {
        // Bound is an empty sum and the pathology is impossible.
        check.oracle = Some(0.0);
        check.slack = Some(-bound);
        check.outcome = if bound <= SLACK_TOLERANCE {
            CheckOutcome::Pass
        } else {
            CheckOutcome::Fail
        };
        return check;
    }
    if a > DETECTOR_MAX_ALTERNATIVES || i > DETECTOR_MAX_INDIVIDUALS {
        check.outcome = CheckOutcome::Skipped(format!(
            "detector capacity (A ≤ {DETECTOR_MAX_ALTERNATIVES}, I ≤ {DETECTOR_MAX_INDIVIDUALS})"
        ));
        return check;
    }
    let exhaustive_fits =
        i as f64 * ln_factorial(a as u64) <= (options.profile_cap as f64).ln() + 1e-9;
    let (oracle_value, allowance) = if exhaustive_fits {
        match exact_pathology_probability(a, i, k, options.profile_cap) {
            Ok(exact) => (exact.value(), 0.0),
            Err(e) => {
                check.outcome = CheckOutcome::Skipped(e.to_string());
                return check;
            }
        }
    } else {
        match mc_pathology_probability(a, i, k, options.trials, derive_seed(options.seed, index)) {
            // 4 standard errors, plus a small-count floor: the estimated
            // binomial σ vanishes at zero observed hits, where the true
            // rate can still be up to ~10/trials at any useful confidence.
            Ok(mc) => (mc.estimate, 4.0 * mc.std_error + 10.0 / options.trials as f64),
            Err(e) => {
                check.outcome = CheckOutcome::Skipped(e.to_string());
                return check;
            }
        }
    };
    check.oracle = Some(oracle_value);
    let slack = oracle_value + allowance - bound;
    check.slack = Some(slack);
    check.outcome = if slack >= -SLACK_TOLERANCE {
        CheckOutcome::Pass
    } else {
        CheckOutcome::Fail
    };
    check
}

fn check_banned_probability(params: &BoundParams, options: &VerifyOptions) -> VerifyCheck {
    let (a, d) = (params.num_alternatives, params.dimension);
    let mut check = VerifyCheck {
        kind: "banned_fraction_exact",
        num_alternatives: a,
        individuals: None,
        dimension: Some(d),
        bound: None,
        oracle: None,
        slack: None,
        outcome: CheckOutcome::Pass,
    };
    if a > BANNED_ENUM_MAX_ALTERNATIVES {
        check.outcome = CheckOutcome::Skipped(format!(
            "enumeration capacity (A ≤ {BANNED_ENUM_MAX_ALTERNATIVES})"
        ));
        return check;
    }
    let formula = banned_preference_probability(a, d).probability * options.bound_scale;
    let enumerated = match banned_fraction_exact(a, d) {
        Ok(frac) => frac.value(),
        Err(e) => {
            check.outcome = CheckOutcome::Skipped(e.to_string());
            return check;
        }
    };
    check.bound = Some(formula);
    check.oracle = Some(enumerated);
    let gap = (formula - enumerated).abs();
    check.slack = Some(1e-9 - gap);
    check.outcome = if gap <= 1e-9 {
        CheckOutcome::Pass
    } else {
        CheckOutcome::Fail
    };
    check
}

fn check_representable_vs_line(a: usize, options: &VerifyOptions) -> VerifyCheck {
    let mut check = VerifyCheck {
        kind: "rhat_vs_line_orders",
        num_alternatives: a,
        individuals: None,
        dimension: Some(1),
        bound: None,
        oracle: None,
        slack: None,
        outcome: CheckOutcome::Pass,
    };
    if !(2..=LINE_ORACLE_MAX_ALTERNATIVES).contains(&a) {
        check.outcome = CheckOutcome::Skipped(format!(
            "line oracle capacity (2 ≤ A ≤ {LINE_ORACLE_MAX_ALTERNATIVES})"
        ));
        return check;
    }
    let bound = representable_count_bound(a, 1)
        .count
        .to_f64()
        .unwrap_or(f64::INFINITY)
        * options.bound_scale;
    let oracle = match one_dim_distinct_orders(&generic_line_locations(a)) {
        Ok(n) => n as f64,
        Err(e) => {
            check.outcome = CheckOutcome::Skipped(e.to_string());
            return check;
        }
    };
    check.bound = Some(bound);
    check.oracle = Some(oracle);
    // Upper bound: the representable count must dominate the realized one.
    let slack = bound - oracle;
    check.slack = Some(slack);
    check.outcome = if slack >= -SLACK_TOLERANCE {
        CheckOutcome::Pass
    } else {
        CheckOutcome::Fail
    };
    check
}

fn check_ball_sizes(a: usize) -> VerifyCheck {
    let mut check = VerifyCheck {
        kind: "mahonian_vs_bfs",
        num_alternatives: a,
        individuals: None,
        dimension: None,
        bound: None,
        oracle: None,
        slack: None,
        outcome: CheckOutcome::Pass,
    };
    if a > BFS_MAX_ALTERNATIVES {
        check.outcome =
            CheckOutcome::Skipped(format!("BFS capacity (A ≤ {BFS_MAX_ALTERNATIVES})"));
        return check;
    }
    let bfs = match ball_sizes_bfs(a) {
        Ok(b) => b,
        Err(e) => {
            check.outcome = CheckOutcome::Skipped(e.to_string());
            return check;
        }
    };
    let table = match mahonian_counts(a) {
        Ok(t) => t,
        Err(e) => {
            check.outcome = CheckOutcome::Skipped(e.to_string());
            return check;
        }
    };
    let cumulative: Vec<u64> = table
        .cumulative_exact()
        .expect("exact lane at this size")
        .iter()
        .map(|x| x.to_u64().expect("fits u64 at this size"))
        .collect();
    check.bound = Some(*cumulative.last().unwrap() as f64);
    check.oracle = Some(*bfs.last().unwrap() as f64);
    check.outcome = if cumulative == bfs {
        CheckOutcome::Pass
    } else {
        CheckOutcome::Fail
    };
    check
}

fn check_info_loss_shape(params: &BoundParams, _options: &VerifyOptions) -> VerifyCheck {
    let (a, d) = (params.num_alternatives, params.dimension);
    let mut check = VerifyCheck {
        kind: "info_loss_shape",
        num_alternatives: a,
        individuals: None,
        dimension: Some(d),
        bound: None,
        oracle: None,
        slack: None,
        outcome: CheckOutcome::Pass,
    };
    if a > INFO_LOSS_MAX_ALTERNATIVES {
        check.outcome = CheckOutcome::Skipped(format!(
            "information-loss capacity (A ≤ {INFO_LOSS_MAX_ALTERNATIVES})"
        ));
        return check;
    }
    let bound = match info_loss_lower_bound(&params.clone().with_ball_mode(BallMode::Paper)) {
        Ok(b) => b,
        Err(e) => {
            check.outcome = CheckOutcome::Skipped(e.to_string());
            return check;
        }
    };
    check.bound = Some(bound.expectation_lb);
    let max_swaps = (a * (a - 1) / 2) as f64;
    let shape_ok = bound
        .terms
        .windows(2)
        .all(|w| w[1] <= w[0] + 1e-12)
        && bound.terms.iter().all(|&t| (0.0..=1.0 + 1e-12).contains(&t))
        && bound.expectation_lb <= max_swaps + 1e-9
        && (0.0..=1.0 + 1e-12).contains(&bound.scaled_lb);
    check.outcome = if shape_ok {
        CheckOutcome::Pass
    } else {
        CheckOutcome::Fail
    };
    check
}
