use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ne_summary, DimInterval, LineBundleDegreePair, PeelOrder};
use crate::divisor::DivisorSolution;
use crate::error::{Error, Result};
use crate::plumbing::PlumbingConfig;

/// `h^1` of `T_Z(nE)|_{nE}` over a range of `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub n_values: Vec<u64>,
    pub h1_lo: Vec<u128>,
    pub h1_hi: Vec<u128>,
    /// Centered second differences of `h1_lo`; entry `i` belongs to
    /// `n_values[i + 1]`.
    pub second_differences: Vec<i128>,
    /// Exact least-squares coefficient of `n^2` in a fit of `h1_lo` on
    /// `(n^2, n, 1)`.
    pub quadratic_leading_coefficient: BigRational,
    pub quadratic_leading_coefficient_f64: f64,
    /// First `n` from which every second difference in range is positive.
    pub threshold_n: Option<u64>,
}

impl GrowthReport {
    pub fn from_series(n_values: Vec<u64>, h1_lo: Vec<u128>, h1_hi: Vec<u128>) -> Self {
        let second_differences = second_differences(&h1_lo);
        let coefficient = fit_quadratic_leading(&n_values, &h1_lo);
        let threshold_n = positivity_threshold(&second_differences).map(|i| n_values[i + 1]);
        GrowthReport {
            quadratic_leading_coefficient_f64: coefficient.to_f64().unwrap_or(f64::NAN),
            quadratic_leading_coefficient: coefficient,
            n_values,
            h1_lo,
            h1_hi,
            second_differences,
            threshold_n,
        }
    }
}

pub fn second_differences(values: &[u128]) -> Vec<i128> {
    values
        .windows(3)
        .map(|w| w[2] as i128 - 2 * w[1] as i128 + w[0] as i128)
        .collect()
}

/// Index of the start of the trailing run of positive entries, if the last
/// entry is positive.
pub fn positivity_threshold(diffs: &[i128]) -> Option<usize> {
    if diffs.last().is_none_or(|&d| d <= 0) {
        return None;
    }
    let run = diffs.iter().rev().take_while(|&&d| d > 0).count();
    Some(diffs.len() - run)
}

/// Leading coefficient of the least-squares quadratic through `(n, y)`,
/// solved exactly from the normal equations. Zero when fewer than three
/// distinct abscissae make the fit degenerate.
pub fn fit_quadratic_leading(ns: &[u64], ys: &[u128]) -> BigRational {
    let r = |v: BigInt| BigRational::from_integer(v);
    // moments S_k = sum n^k, T_k = sum n^k y
    let mut s = vec![BigInt::zero(); 5];
    let mut t = vec![BigInt::zero(); 3];
    for (&n, &y) in ns.iter().zip(ys) {
        let n = BigInt::from(n);
        let y = BigInt::from(y);
        let mut p = BigInt::from(1);
        for k in 0..5 {
            s[k] += &p;
            if k < 3 {
                t[k] += &p * &y;
            }
            p *= &n;
        }
    }
    // unknowns (c2, c1, c0)
    let a = [
        [r(s[4].clone()), r(s[3].clone()), r(s[2].clone())],
        [r(s[3].clone()), r(s[2].clone()), r(s[1].clone())],
        [r(s[2].clone()), r(s[1].clone()), r(s[0].clone())],
    ];
    let rhs = [r(t[2].clone()), r(t[1].clone()), r(t[0].clone())];
    let det3 = |m: &[[BigRational; 3]; 3]| {
        &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
            + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
    };
    let d = det3(&a);
    if d.is_zero() {
        return BigRational::zero();
    }
    let mut a2 = a.clone();
    for i in 0..3 {
        a2[i][0] = rhs[i].clone();
    }
    det3(&a2) / d
}

/// Sweeps `n` over `n_lo..=n_hi`, peeling `nE` under the twist `nE`. At
/// least three values are needed for one second difference.
pub fn growth_analysis(
    config: &PlumbingConfig,
    sol: &DivisorSolution,
    n_lo: u64,
    n_hi: u64,
    order: PeelOrder,
) -> Result<GrowthReport> {
    let count = if n_hi >= n_lo { (n_hi - n_lo + 1) as usize } else { 0 };
    if count < 3 {
        return Err(Error::RangeTooShort {
            lo: n_lo,
            hi: n_hi,
            count,
            needed: 3,
        });
    }
    if n_lo == 0 {
        return Err(Error::InvalidTwist(0));
    }
    let ns: Vec<u64> = (n_lo..=n_hi).collect();
    let summaries = ns
        .par_iter()
        .map(|&n| ne_summary(config, sol, n, order))
        .collect::<Result<Vec<_>>>()?;
    let h1_lo = summaries.iter().map(|s| s.h1.lo).collect();
    let h1_hi = summaries.iter().map(|s| s.h1.hi).collect();
    Ok(GrowthReport::from_series(ns, h1_lo, h1_hi))
}

/// `floor((n a1 x0 + 2) / b1)`.
pub fn alpha_bound(n: u64, a1: u64, x0: u64, b1: u64) -> u128 {
    (n as u128 * a1 as u128 * x0 as u128 + 2) / b1 as u128
}

/// `sum_{l=0}^{nx-1} (2nx - 2lb + b)`, the single-curve formula, evaluated
/// in closed form.
pub fn paper_closed_form_m1(n: u64, x: u64, b: u64) -> i128 {
    let nx = n as i128 * x as i128;
    let b = b as i128;
    // nx terms of (2nx + b) minus 2b * (0 + 1 + ... + (nx - 1))
    nx * (2 * nx + b) - b * nx * (nx - 1)
}

/// The single-curve formula's value for step `l`.
pub fn paper_step_m1(n: u64, x: u64, b: u64, l: u64) -> i128 {
    2 * n as i128 * x as i128 - 2 * l as i128 * b as i128 + b as i128
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepMismatch {
    pub l: u64,
    pub paper: i128,
    pub engine: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscrepancyRow {
    pub n: u64,
    pub engine_h1: DimInterval,
    pub paper_value: i128,
    /// `engine_h1.lo - paper_value`.
    pub difference: i128,
    pub step_mismatches: Vec<StepMismatch>,
}

/// Engine `h^1(T_Z(nE)|_{nE})` against the single-curve sum formula for
/// every `n` in range. Empty unless the configuration is one chain of one
/// curve.
pub fn discrepancy_report(
    config: &PlumbingConfig,
    sol: &DivisorSolution,
    n_lo: u64,
    n_hi: u64,
) -> Result<Vec<DiscrepancyRow>> {
    if config.chain_count() != 1 || config.chains()[0].len() != 1 {
        return Ok(Vec::new());
    }
    let b = config.chains()[0].b()[0];
    let x = sol.x[0][0].to_u64().ok_or(Error::Overflow("x"))?;
    (n_lo.max(1)..=n_hi)
        .map(|n| {
            let summary = ne_summary(config, sol, n, PeelOrder::Canonical)?;
            let paper_value = paper_closed_form_m1(n, x, b);
            let nx = n.checked_mul(x).ok_or(Error::Overflow("nx"))?;
            let step_mismatches = (0..nx)
                .filter_map(|l| {
                    // twist nE - lC has intersection -(nx - l) b with C
                    let dot = -((nx - l) as i128) * b as i128;
                    let engine = LineBundleDegreePair::from_intersection(b, dot).h1();
                    let paper = paper_step_m1(n, x, b, l);
                    (engine as i128 != paper).then_some(StepMismatch { l, paper, engine })
                })
                .collect();
            Ok(DiscrepancyRow {
                n,
                engine_h1: summary.h1,
                paper_value,
                difference: summary.h1.lo as i128 - paper_value,
                step_mismatches,
            })
        })
        .collect()
}
