//! Log-space combinatorial kernel.
//!
//! Factorials, binomial coefficients and Stirling numbers are carried as
//! natural logarithms so bound evaluation stays finite far past the range
//! where raw counts overflow. The falling-factorial ratio behind the
//! information-loss bound gets a dedicated routine built from exact
//! pairwise ratios and a cancellation-free series: naive log-gamma
//! differences lose every significant digit once the population is of
//! order A! for moderate A.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// ln(2π)/2, the constant term of the Stirling series.
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// Natural log of `n!`. Exact products for n ≤ 20, Stirling series with
/// three correction terms beyond (absolute error below 1e-12).
pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    if n <= 20 {
        let mut f = 1u64;
        for k in 2..=n {
            f *= k;
        }
        return (f as f64).ln();
    }
    let x = n as f64;
    let x2 = x * x;
    (x + 0.5) * x.ln() - x + HALF_LN_TWO_PI + 1.0 / (12.0 * x) - 1.0 / (360.0 * x * x2)
        + 1.0 / (1260.0 * x2 * x2 * x)
}

/// `n!` as an exact big integer.
pub fn factorial_exact(n: usize) -> BigUint {
    let mut f = BigUint::one();
    for k in 2..=n {
        f *= BigUint::from(k);
    }
    f
}

/// Natural log of the binomial coefficient C(n, k); −∞ when k > n.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// log(exp(a) + exp(b)) evaluated without leaving log space.
pub fn log_sum_exp2(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// log Σ exp(xᵢ); −∞ for an empty slice.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = xs.iter().map(|&x| (x - hi).exp()).sum();
    hi + sum.ln()
}

/// Natural log of the Stirling number of the second kind S(n, m): the
/// number of ways to partition an n-set into m nonempty parts.
///
/// S(0, 0) = 1 and S(n, 0) = 0 for n > 0; m > n yields −∞ (log of zero).
/// Computed by the standard recurrence S(n, m) = m·S(n−1, m) + S(n−1, m−1)
/// entirely in log space.
pub fn ln_stirling2(n: usize, m: usize) -> f64 {
    if m > n {
        return f64::NEG_INFINITY;
    }
    *ln_stirling2_column(m, n).last().expect("column is nonempty")
}

/// ln S(n, m) for every n in 0..=n_max at a fixed m.
pub fn ln_stirling2_column(m: usize, n_max: usize) -> Vec<f64> {
    // row[j] = ln S(n, j) for the current n, rolled upward in n.
    let mut row = vec![f64::NEG_INFINITY; m + 1];
    row[0] = 0.0; // S(0, 0) = 1
    let mut column = Vec::with_capacity(n_max + 1);
    column.push(row[m]);
    for n in 1..=n_max {
        for j in (1..=m.min(n)).rev() {
            row[j] = log_sum_exp2((j as f64).ln() + row[j], row[j - 1]);
        }
        row[0] = f64::NEG_INFINITY; // S(n, 0) = 0 once n ≥ 1
        column.push(row[m]);
    }
    column
}

/// Natural log of a big integer, usable far past the f64 range.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 53 {
        return (x.to_u64().expect("fits in u64") as f64).ln();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_u64().expect("53 bits fit in u64") as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// A probability carried in log space. Zero is represented by a log value
/// of −∞, which doubles as the is-zero flag; conversion back to linear
/// space clamps into [0, 1].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogProb(f64);

impl LogProb {
    pub fn zero() -> Self {
        LogProb(f64::NEG_INFINITY)
    }

    pub fn certain() -> Self {
        LogProb(0.0)
    }

    /// From a natural log. Values above ln 1 = 0 are rejected beyond a
    /// 1e-12 rounding allowance and clamped within it.
    pub fn from_ln(ln: f64) -> Self {
        debug_assert!(ln <= 1e-12, "log-probability {ln} is above ln 1");
        LogProb(ln.min(0.0))
    }

    pub fn from_probability(p: f64) -> Self {
        debug_assert!(
            (-1e-12..=1.0 + 1e-12).contains(&p),
            "probability {p} outside [0, 1]"
        );
        LogProb(p.clamp(0.0, 1.0).ln())
    }

    pub fn ln(&self) -> f64 {
        self.0
    }

    pub fn probability(&self) -> f64 {
        self.0.exp().clamp(0.0, 1.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0 == f64::NEG_INFINITY
    }
}

/// A non-negative count tracked in linear and log space at once.
///
/// `value` may round to ∞ for counts past the f64 range; `ln` stays finite
/// and is the authoritative representation there.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Magnitude {
    value: f64,
    ln: f64,
}

impl Magnitude {
    pub fn zero() -> Self {
        Magnitude {
            value: 0.0,
            ln: f64::NEG_INFINITY,
        }
    }

    /// From a finite non-negative linear value.
    pub fn from_value(value: f64) -> Self {
        debug_assert!(value >= 0.0 && value.is_finite());
        Magnitude {
            value,
            ln: value.ln(),
        }
    }

    /// From a natural log; the linear value may overflow to ∞.
    pub fn from_ln(ln: f64) -> Self {
        Magnitude { value: ln.exp(), ln }
    }

    pub fn from_u64(value: u64) -> Self {
        Self::from_value(value as f64)
    }

    pub fn from_biguint(x: &BigUint) -> Self {
        let ln = ln_biguint(x);
        let value = x.to_f64().unwrap_or(f64::INFINITY);
        Magnitude { value, ln }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn ln(&self) -> f64 {
        self.ln
    }

    pub fn is_zero(&self) -> bool {
        self.ln == f64::NEG_INFINITY
    }
}

/// Largest min(n, r) for which the pairwise product path is used; above it
/// the series takes over (valid there because any term that survives the
/// underflow cutoff then has max(n, r)/N ≤ RATIO_KILL / RATIO_ITER_CAP).
const RATIO_ITER_CAP: f64 = 10_000.0;

/// Ratios whose log is certainly below −RATIO_KILL are flushed to zero;
/// e^-700 is already denormal territory.
const RATIO_KILL: f64 = 700.0;

/// ln of the without-replacement miss ratio (N−n)_r / (N)_r: the probability
/// that r uniform draws without replacement from a population of N avoid a
/// marked set of n. Requires n + r ≤ N; symmetric in n ↔ r; equals
/// Σ_{i < min(n,r)} ln(1 − max(n,r)/(N−i)).
pub fn ln_falling_factorial_ratio(total: Magnitude, marked: Magnitude, draws: Magnitude) -> f64 {
    if marked.is_zero() || draws.is_zero() {
        return 0.0;
    }
    let (small, large) = if marked.ln() <= draws.ln() {
        (marked, draws)
    } else {
        (draws, marked)
    };
    // Each of the min(n, r) log factors is at most −max(n, r)/N.
    if small.ln() + large.ln() - total.ln() > RATIO_KILL.ln() {
        return f64::NEG_INFINITY;
    }
    if total.value().is_finite() {
        if small.value() <= RATIO_ITER_CAP {
            ratio_product(total.value(), large.value(), small.value() as u64)
        } else {
            let u = (marked.value() / total.value()).min(1.0);
            let w = (draws.value() / total.value()).min(1.0);
            let nr_over_total = u * draws.value();
            ratio_series(u, w, nr_over_total, Some(total.value()))
        }
    } else {
        let u = (marked.ln() - total.ln()).exp();
        let w = (draws.ln() - total.ln()).exp();
        let small_value = if small.value().is_finite() {
            small.value()
        } else {
            small.ln().exp()
        };
        if small_value <= RATIO_ITER_CAP {
            // N dwarfs the iteration range, so every factor is identical
            // to f64 precision.
            small_value * (-(large.ln() - total.ln()).exp()).ln_1p()
        } else {
            let nr_over_total = (marked.ln() + draws.ln() - total.ln()).exp();
            ratio_series(u, w, nr_over_total, None)
        }
    }
}

/// Σ_{i < count} ln(1 − large/(total − i)) by compensated summation.
fn ratio_product(total: f64, large: f64, count: u64) -> f64 {
    // When the marked set covers most of the population, 1 − large/(total−i)
    // must come from the exact head total − large (Sterbenz: exact once
    // large > total/2) or the subtraction inside ln_1p loses the result.
    let use_head = large > 0.5 * total;
    let head = total - large;
    let mut sum = 0.0;
    let mut comp = 0.0;
    for i in 0..count {
        let fi = i as f64;
        let term = if use_head {
            ((head - fi) / (total - fi)).ln()
        } else {
            (-large / (total - fi)).ln_1p()
        };
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// The same sum through the Stirling series of ln x!, with the cancellation
/// between the entropy-like terms done symbolically:
///
///   Σ_{i<n} ln(1 − r/(N−i))
///     = −(nr/N)·Σ_{j≥2} T_j/(j(j−1)) + (uw/2)·Σ_{j≥2} T_j/j + Δ₁₂ + Δ₃₆₀
///
/// where u = n/N, w = r/N, T_j = ((u+w)^j − u^j − w^j)/(uw) expanded as an
/// all-positive binomial sum, and Δ are the 1/(12x), 1/(360x³) second
/// differences. Valid for u + w ≲ 0.2, which the dispatcher guarantees.
fn ratio_series(u: f64, w: f64, nr_over_total: f64, linear_total: Option<f64>) -> f64 {
    debug_assert!(u + w <= 0.5, "series called outside its domain");
    let mut s1 = 0.0; // Σ T_j / (j(j−1))
    let mut s2 = 0.0; // Σ T_j / j
    let mut u_pows = vec![1.0f64]; // u^t
    let mut w_pows = vec![1.0f64]; // w^t
    let mut j = 2usize;
    loop {
        u_pows.push(u_pows.last().unwrap() * u);
        w_pows.push(w_pows.last().unwrap() * w);
        // T_j = Σ_{t=1}^{j−1} C(j, t) u^{t−1} w^{j−1−t}, all terms positive.
        let mut t_j = 0.0;
        let mut binom = j as f64; // C(j, 1)
        for t in 1..j {
            t_j += binom * u_pows[t - 1] * w_pows[j - 1 - t];
            binom = binom * ((j - t) as f64) / ((t + 1) as f64);
        }
        let contribution = t_j / ((j * (j - 1)) as f64);
        s1 += contribution;
        s2 += t_j / j as f64;
        if nr_over_total * contribution < 1e-17 * (1.0 + nr_over_total * s1) || j >= 200 {
            break;
        }
        j += 1;
    }
    let mut result = -nr_over_total * s1 + 0.5 * (u * w) * s2;
    if let Some(n) = linear_total {
        let x0 = n;
        let x1 = n * (1.0 - u);
        let x2 = n * (1.0 - w);
        let x3 = n * (1.0 - u - w);
        let inv12 = |x: f64| 1.0 / (12.0 * x);
        let inv360 = |x: f64| 1.0 / (360.0 * x * x * x);
        result += inv12(x1) + inv12(x2) - inv12(x0) - inv12(x3);
        result -= inv360(x1) + inv360(x2) - inv360(x0) - inv360(x3);
    }
    result
}
