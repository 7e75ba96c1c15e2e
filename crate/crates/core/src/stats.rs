//! Observables computed from run records: computational cost, ensemble
//! means, exponential fits and the correct-hint selection probability.
//!
//! Everything here is generic over the scalar. Sampled statistics take any
//! [`Float`]; the closed-form null model also accepts exact rationals.

use num_traits::{Float, FromPrimitive, Num};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hints::HINT_COUNT;
use crate::puzzle::STATE_COUNT;

/// Number of correct hints in the catalog.
pub const CORRECT_HINTS: usize = 6;

/// `C = M t* / 10!`.
pub fn computational_cost<T: Num + FromPrimitive>(t_star: T, agents: usize) -> T {
    let m = T::from_usize(agents).expect("group size fits the scalar");
    let states = T::from_u64(STATE_COUNT).expect("10! fits the scalar");
    m * t_star / states
}

/// Computational costs of a batch of runs; censored runs are only counted.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CostSample<T> {
    pub values: Vec<T>,
    pub censored: usize,
}

impl<T: Float> CostSample<T> {
    pub fn new(values: Vec<T>) -> Self {
        CostSample {
            values,
            censored: 0,
        }
    }

    /// Splits `(cost, solved)` pairs into uncensored values and a censored count.
    pub fn from_runs(runs: impl IntoIterator<Item = (T, bool)>) -> Self {
        let mut sample = CostSample::new(Vec::new());
        for (c, solved) in runs {
            if solved {
                sample.values.push(c);
            } else {
                sample.censored += 1;
            }
        }
        sample
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn check(&self, needed: usize) -> Result<()> {
        if let Some(bad) = self
            .values
            .iter()
            .find(|&&v| v.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater))
        {
            return Err(Error::NonPositiveCost(bad.to_f64().unwrap_or(f64::NAN)));
        }
        if self.values.len() < needed {
            return Err(Error::InsufficientData {
                needed,
                got: self.values.len(),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CostSummary<T> {
    pub n: usize,
    pub mean: T,
    /// Sample standard deviation over `sqrt(n)`.
    pub stderr: T,
    pub censored: usize,
}

impl<T> CostSummary<T> {
    /// With censored runs left out, the mean underestimates the true one.
    pub fn is_lower_bound(&self) -> bool {
        self.censored > 0
    }
}

/// Mean and standard error of the uncensored costs.
pub fn summarize<T: Float>(sample: &CostSample<T>) -> Result<CostSummary<T>> {
    sample.check(2)?;
    let (mean, sd) = mean_and_sd(&sample.values);
    let n = T::from(sample.values.len()).unwrap();
    Ok(CostSummary {
        n: sample.values.len(),
        mean,
        stderr: sd / n.sqrt(),
        censored: sample.censored,
    })
}

/// Mean over every run, censored runs taken at the cost where they stopped.
/// A lower bound on the true mean whenever anything was censored.
pub fn mean_including_censored<T: Float>(costs: &[T]) -> Option<T> {
    (!costs.is_empty()).then(|| mean_and_sd(costs).0)
}

/// Mean and sample standard deviation, accumulated in sorted order so the
/// result does not depend on the order of the input.
fn mean_and_sd<T: Float>(values: &[T]) -> (T, T) {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("no NaN costs"));
    let n = T::from(sorted.len()).unwrap();
    let mean = sorted.iter().fold(T::zero(), |s, &v| s + v) / n;
    if sorted.len() < 2 {
        return (mean, T::zero());
    }
    let ss = sorted
        .iter()
        .fold(T::zero(), |s, &v| s + (v - mean) * (v - mean));
    (mean, (ss / (n - T::one())).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExponentialFit<T> {
    pub rate: T,
    pub mean: T,
    /// Kolmogorov-Smirnov distance to Exponential(rate).
    pub ks_statistic: T,
    pub n: usize,
}

/// Maximum-likelihood exponential fit, `rate = 1 / mean`, plus the KS distance.
pub fn fit_exponential<T: Float>(sample: &CostSample<T>) -> Result<ExponentialFit<T>> {
    sample.check(100)?;
    let mut sorted = sample.values.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("no NaN costs"));
    let n = T::from(sorted.len()).unwrap();
    let mean = sorted.iter().fold(T::zero(), |s, &v| s + v) / n;
    let rate = mean.recip();
    let mut d = T::zero();
    for (i, &x) in sorted.iter().enumerate() {
        let cdf = T::one() - (-rate * x).exp();
        let below = T::from(i).unwrap() / n;
        let above = T::from(i + 1).unwrap() / n;
        d = d.max((cdf - below).abs()).max((above - cdf).abs());
    }
    Ok(ExponentialFit {
        rate,
        mean,
        ks_statistic: d,
        n: sorted.len(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhiEstimate<T> {
    /// Mean over runs of each run's correct/selected ratio.
    pub phi: T,
    /// Standard error of `phi` across runs.
    pub stderr: T,
    /// Runs that made at least one selection.
    pub runs: usize,
    pub selections: u64,
    pub correct: u64,
    /// Pooled ratio `correct / selections`.
    pub pooled: T,
}

/// Correct-hint selection probability from `(selections, correct)` per run.
///
/// Runs without selections are skipped.
pub fn phi_from_records<T: Float>(
    runs: impl IntoIterator<Item = (u64, u64)>,
) -> Result<PhiEstimate<T>> {
    let mut ratios = Vec::new();
    let (mut selections, mut correct) = (0u64, 0u64);
    for (s, c) in runs {
        if s == 0 {
            continue;
        }
        ratios.push(T::from(c).unwrap() / T::from(s).unwrap());
        selections += s;
        correct += c;
    }
    if ratios.is_empty() {
        return Err(Error::UndefinedPhi);
    }
    let (phi, sd) = mean_and_sd(&ratios);
    Ok(PhiEstimate {
        phi,
        stderr: sd / T::from(ratios.len()).unwrap().sqrt(),
        runs: ratios.len(),
        selections,
        correct,
        pooled: T::from(correct).unwrap() / T::from(selections).unwrap(),
    })
}

/// Chance of selecting a correct hint from a board of `B` hints drawn
/// without replacement from the catalog:
/// `sum_k P(k correct on board) * k / B` with `k` hypergeometric.
pub fn null_model_phi<T: Num + FromPrimitive>(board_size: usize) -> Result<T> {
    if !(1..=HINT_COUNT).contains(&board_size) {
        return Err(Error::BoardSizeOutOfRange(board_size));
    }
    let c = |v: usize| T::from_usize(v).expect("small integers fit the scalar");
    let mut phi = T::zero();
    for k in 1..=CORRECT_HINTS.min(board_size) {
        let pk = hypergeometric_pmf::<T>(HINT_COUNT, CORRECT_HINTS, board_size, k);
        phi = phi + pk * c(k) / c(board_size);
    }
    Ok(phi)
}

/// `C(good, k) C(total - good, n - k) / C(total, n)`, evaluated as
/// `C(n, k) * prod (good - i) / (total - i) * prod (bad - j) / (total - k - j)`
/// so that only `C(n, k)` can exceed one.
fn hypergeometric_pmf<T: Num + FromPrimitive>(total: usize, good: usize, n: usize, k: usize) -> T {
    let c = |v: usize| T::from_usize(v).expect("small integers fit the scalar");
    let bad = total - good;
    if k > good || k > n || n - k > bad {
        return T::zero();
    }
    let mut p = T::one();
    for i in 0..k {
        p = p * c(n - i) / c(i + 1);
    }
    for i in 0..k {
        p = p * c(good - i) / c(total - i);
    }
    for j in 0..(n - k) {
        p = p * c(bad - j) / c(total - k - j);
    }
    p
}
