//! Dimension bookkeeping for `T_Z(M)` restricted to effective cycles on the
//! chains.
//!
//! A cycle `F` is peeled one reduced curve at a time. Removing a copy of `C`
//! from `F` under the twist `M` gives
//!
//! ```text
//! 0 -> T_Z(M - C)|_{F - C} -> T_Z(M)|_F -> T_Z(M)|_C -> 0
//! ```
//!
//! and the quotient splits as `T_C(M) + N_{C,Z}(M)`, line bundles of degrees
//! `2 + M.C` and `-b + M.C` on `P^1`. Accumulating from the innermost step
//! outwards, the connecting map `H^0(quotient) -> H^1(sub)` has unknown rank
//! `r <= min(h0(quotient), h1(sub))`, so `h^0` and `h^1` are tracked as
//! intervals. The Euler characteristic is additive and therefore exact.

mod growth;

pub use growth::{
    alpha_bound, discrepancy_report, fit_quadratic_leading, growth_analysis, paper_closed_form_m1,
    positivity_threshold, second_differences, DiscrepancyRow, GrowthReport, StepMismatch,
};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::divisor::DivisorSolution;
use crate::error::{Error, Result};
use crate::plumbing::{CurveId, Cycle, PlumbingConfig};

/// `(h^0, h^1)` of `O(d)` on `P^1`.
pub fn p1_cohomology(d: i128) -> (u128, u128) {
    let h0 = if d >= -1 { (d + 1) as u128 } else { 0 };
    let h1 = if d <= -1 { (-d - 1) as u128 } else { 0 };
    (h0, h1)
}

/// Degrees of the tangent and normal summands of `T_Z(M)|_C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineBundleDegreePair {
    pub d_t: i128,
    pub d_n: i128,
}

impl LineBundleDegreePair {
    /// Degrees for a curve with `C^2 = -b` and twist intersection `M.C`.
    pub fn from_intersection(b: u64, twist_dot: i128) -> Self {
        LineBundleDegreePair {
            d_t: 2 + twist_dot,
            d_n: twist_dot - b as i128,
        }
    }

    pub fn h0(&self) -> u128 {
        p1_cohomology(self.d_t).0 + p1_cohomology(self.d_n).0
    }

    pub fn h1(&self) -> u128 {
        p1_cohomology(self.d_t).1 + p1_cohomology(self.d_n).1
    }

    pub fn euler(&self) -> i128 {
        self.d_t + 1 + self.d_n + 1
    }
}

pub fn twist_degrees(config: &PlumbingConfig, twist: &Cycle, component: CurveId) -> Result<LineBundleDegreePair> {
    if !config.contains(component) {
        return Err(Error::UnknownCurve(component.to_string()));
    }
    check_shape(config, twist)?;
    Ok(LineBundleDegreePair::from_intersection(
        config.b(component),
        config.intersect(twist, component),
    ))
}

/// Closed interval of nonnegative integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DimInterval {
    pub lo: u128,
    pub hi: u128,
}

impl DimInterval {
    pub fn point(v: u128) -> Self {
        DimInterval { lo: v, hi: v }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: u128) -> bool {
        self.lo <= v && v <= self.hi
    }
}

impl std::fmt::Display for DimInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// Order in which curves are exhausted while peeling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PeelOrder {
    /// `C_11` first, then `C_12`, ..., then the next chain.
    #[default]
    Canonical,
    /// Last curve of the last chain first.
    Reverse,
}

impl PeelOrder {
    /// One copy per entry, in peeling order.
    pub fn sequence(&self, config: &PlumbingConfig, target: &Cycle) -> Vec<CurveId> {
        self.runs(config, target)
            .into_iter()
            .flat_map(|(c, k)| std::iter::repeat_n(c, k as usize))
            .collect()
    }

    fn runs(&self, config: &PlumbingConfig, target: &Cycle) -> Vec<(CurveId, u64)> {
        let mut curves: Vec<CurveId> = config.curves().collect();
        if *self == PeelOrder::Reverse {
            curves.reverse();
        }
        curves
            .into_iter()
            .map(|c| (c, target.get(c)))
            .filter(|&(_, k)| k > 0)
            .collect()
    }
}

impl std::str::FromStr for PeelOrder {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "canonical" => Ok(PeelOrder::Canonical),
            "reverse" => Ok(PeelOrder::Reverse),
            other => Err(format!("unknown peel order `{other}`")),
        }
    }
}

/// One peeling step: the copy of `component` removed from `remaining`
/// under the twist `twist_base - (target - remaining)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeelStep {
    pub component: CurveId,
    pub remaining: Cycle,
    /// Signed multiplicities of the twisting divisor.
    pub twist: Vec<Vec<i128>>,
    pub degrees: LineBundleDegreePair,
    pub h0_step: u128,
    pub h1_step: u128,
    /// No possible connecting map into the sub-cycle's `H^1`.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyLedger {
    pub steps: Vec<PeelStep>,
    pub h0_total: DimInterval,
    pub h1_total: DimInterval,
    pub euler_total: i128,
}

impl CohomologyLedger {
    pub fn summary(&self) -> LedgerSummary {
        LedgerSummary {
            h0: self.h0_total,
            h1: self.h1_total,
            euler: self.euler_total,
            steps: self.steps.len() as u128,
            inexact_steps: self.steps.iter().filter(|s| !s.exact).count() as u128,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.steps.iter().all(|s| s.exact)
    }
}

/// Totals of a ledger without the per-step records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerSummary {
    pub h0: DimInterval,
    pub h1: DimInterval,
    pub euler: i128,
    pub steps: u128,
    pub inexact_steps: u128,
}

impl LedgerSummary {
    pub fn is_exact(&self) -> bool {
        self.inexact_steps == 0
    }

    /// `h0.lo - h1.hi <= euler <= h0.hi - h1.lo`.
    pub fn euler_consistent(&self) -> bool {
        let lo = self.h0.lo as i128 - self.h1.hi as i128;
        let hi = self.h0.hi as i128 - self.h1.lo as i128;
        lo <= self.euler && self.euler <= hi
    }
}

/// Running totals for the cycle peeled so far, innermost first.
#[derive(Debug, Clone, Copy, Default)]
struct Accumulator {
    h0: DimInterval,
    h1: DimInterval,
    euler: i128,
    steps: u128,
    inexact: u128,
}

impl Accumulator {
    /// Extends by one quotient; returns whether the step was exact.
    fn absorb(&mut self, q: LineBundleDegreePair) -> bool {
        let (h0q, h1q) = (q.h0(), q.h1());
        let bound = h0q.min(self.h1.hi);
        self.h0 = DimInterval {
            lo: self.h0.lo + h0q.saturating_sub(self.h1.hi),
            hi: self.h0.hi + h0q,
        };
        self.h1 = DimInterval {
            lo: h1q + self.h1.lo.saturating_sub(h0q),
            hi: self.h1.hi + h1q,
        };
        self.euler += q.euler();
        self.steps += 1;
        if bound > 0 {
            self.inexact += 1;
        }
        bound == 0
    }

    /// Absorbs the steps `t = count-1, ..., 0` of a run of one curve with
    /// `C^2 = -b`, where step `t` has twist intersection `s0 + t*b`.
    fn absorb_run(&mut self, b: u64, s0: i128, count: u64) {
        if count == 0 {
            return;
        }
        let b = b as i128;
        let last = count as i128 - 1;
        // s >= b - 1: both summands have h^1 = 0 and h^0 = 2s + 4 - b.
        let loud_from = Integer::div_ceil(&(b - 1 - s0), &b).max(0);
        // s <= -3: both summands have h^0 = 0 and h^1 = b - 4 - 2s.
        let quiet_to = if s0 > -3 {
            -1
        } else {
            Integer::div_floor(&(-3 - s0), &b).min(last)
        };

        if loud_from <= last {
            let n = last - loud_from + 1;
            // h0q(t) = alpha + beta t
            let alpha = 2 * s0 + 4 - b;
            let beta = 2 * b;
            let total = arith_sum(alpha, beta, loud_from, last);
            let total_u = total as u128;
            let c = self.h1.hi as i128;
            // steps with h0q(t) > c
            let first_over = Integer::div_ceil(&(c - alpha + 1), &beta).max(loud_from);
            let excess = if first_over <= last {
                arith_sum(alpha - c, beta, first_over, last) as u128
            } else {
                0
            };
            self.h0.lo += excess;
            self.h0.hi += total_u;
            self.h1.lo = self.h1.lo.saturating_sub(total_u);
            self.euler += total;
            self.steps += n as u128;
            if self.h1.hi > 0 {
                self.inexact += n as u128;
            }
        }
        let mixed_hi = loud_from.min(last + 1) - 1;
        let mixed_lo = quiet_to + 1;
        for t in (mixed_lo..=mixed_hi).rev() {
            self.absorb(LineBundleDegreePair::from_intersection(b as u64, s0 + t * b));
        }
        if quiet_to >= 0 {
            let total = arith_sum(b - 4 - 2 * s0, -2 * b, 0, quiet_to);
            self.h1.lo += total as u128;
            self.h1.hi += total as u128;
            self.euler -= total;
            self.steps += quiet_to as u128 + 1;
        }
    }

    fn finish(self) -> LedgerSummary {
        LedgerSummary {
            h0: self.h0,
            h1: self.h1,
            euler: self.euler,
            steps: self.steps,
            inexact_steps: self.inexact,
        }
    }
}

/// `sum_{t=lo}^{hi} (alpha + beta t)`.
fn arith_sum(alpha: i128, beta: i128, lo: i128, hi: i128) -> i128 {
    if hi < lo {
        return 0;
    }
    let n = hi - lo + 1;
    n * alpha + beta * (lo + hi) * n / 2
}

fn check_shape(config: &PlumbingConfig, cycle: &Cycle) -> Result<()> {
    if cycle.fits(config) {
        Ok(())
    } else {
        Err(Error::CycleShape("cycle is not supported on the configuration".into()))
    }
}

fn check_inputs(config: &PlumbingConfig, target: &Cycle, twist_base: &Cycle) -> Result<()> {
    check_shape(config, target)?;
    check_shape(config, twist_base)?;
    if target.is_zero() {
        return Err(Error::EmptyTarget);
    }
    Ok(())
}

/// Full per-step ledger for peeling `target` under `twist_base` in `order`.
pub fn peel_ledger(
    config: &PlumbingConfig,
    target: &Cycle,
    twist_base: &Cycle,
    order: PeelOrder,
) -> Result<CohomologyLedger> {
    check_inputs(config, target, twist_base)?;
    peel_ledger_in_sequence(config, target, twist_base, &order.sequence(config, target))
}

/// Per-step ledger for an explicit peeling sequence (one entry per copy);
/// the sequence must use each curve exactly as often as `target` does.
pub fn peel_ledger_in_sequence(
    config: &PlumbingConfig,
    target: &Cycle,
    twist_base: &Cycle,
    sequence: &[CurveId],
) -> Result<CohomologyLedger> {
    check_inputs(config, target, twist_base)?;
    let mut counts = Cycle::zero(config);
    for &c in sequence {
        if !config.contains(c) {
            return Err(Error::UnknownCurve(c.to_string()));
        }
        counts.set(c, counts.get(c) + 1);
    }
    if counts != *target {
        return Err(Error::PeelOrderMismatch(format!(
            "sequence peels {counts}, target is {target}"
        )));
    }

    let mut remaining = target.clone();
    let mut twist: Vec<Vec<i128>> = twist_base
        .multiplicities()
        .iter()
        .map(|r| r.iter().map(|&m| m as i128).collect())
        .collect();
    let mut pending = Vec::with_capacity(sequence.len());
    for &c in sequence {
        let dot = signed_intersect(config, &twist, c);
        let degrees = LineBundleDegreePair::from_intersection(config.b(c), dot);
        pending.push((c, remaining.clone(), twist.clone(), degrees));
        remaining.set(c, remaining.get(c) - 1);
        twist[c.chain][c.index] -= 1;
    }

    let mut acc = Accumulator::default();
    let mut exact = vec![false; pending.len()];
    for (i, p) in pending.iter().enumerate().rev() {
        exact[i] = acc.absorb(p.3);
    }
    let steps = pending
        .into_iter()
        .zip(exact)
        .map(|((component, remaining, twist, degrees), exact)| PeelStep {
            component,
            remaining,
            twist,
            degrees,
            h0_step: degrees.h0(),
            h1_step: degrees.h1(),
            exact,
        })
        .collect();
    Ok(CohomologyLedger {
        steps,
        h0_total: acc.h0,
        h1_total: acc.h1,
        euler_total: acc.euler,
    })
}

fn signed_intersect(config: &PlumbingConfig, twist: &[Vec<i128>], curve: CurveId) -> i128 {
    let row = &twist[curve.chain];
    let j = curve.index;
    let mut v = -(config.b(curve) as i128) * row[j];
    if j > 0 {
        v += row[j - 1];
    }
    if j + 1 < row.len() {
        v += row[j + 1];
    }
    v
}

/// Ledger totals computed run by run without materializing the steps.
/// Agrees exactly with [`peel_ledger`].
pub fn peel_summary(
    config: &PlumbingConfig,
    target: &Cycle,
    twist_base: &Cycle,
    order: PeelOrder,
) -> Result<LedgerSummary> {
    check_inputs(config, target, twist_base)?;
    let runs = order.runs(config, target);
    let mut twist: Vec<Vec<i128>> = twist_base
        .multiplicities()
        .iter()
        .map(|r| r.iter().map(|&m| m as i128).collect())
        .collect();
    let mut starts = Vec::with_capacity(runs.len());
    for &(c, k) in &runs {
        starts.push(signed_intersect(config, &twist, c));
        twist[c.chain][c.index] -= k as i128;
    }
    let mut acc = Accumulator::default();
    for (&(c, k), &s0) in runs.iter().zip(&starts).rev() {
        acc.absorb_run(config.b(c), s0, k);
    }
    Ok(acc.finish())
}

fn twist_multiple(config: &PlumbingConfig, sol: &DivisorSolution, n: u64) -> Result<(Cycle, Cycle)> {
    if n == 0 {
        return Err(Error::InvalidTwist(n));
    }
    let e = sol.e_cycle(config)?;
    let ne = e.scaled(n)?;
    Ok((e, ne))
}

/// For every curve, whether `H^0(T_Z(nE)|_{x_ij C_ij}) = 0`.
pub fn check_component_h0_vanishing(
    config: &PlumbingConfig,
    sol: &DivisorSolution,
    n: u64,
    order: PeelOrder,
) -> Result<Vec<Vec<bool>>> {
    let (e, ne) = twist_multiple(config, sol, n)?;
    config
        .chains()
        .iter()
        .enumerate()
        .map(|(i, chain)| {
            (0..chain.len())
                .map(|j| {
                    let c = CurveId::new(i, j);
                    let target = Cycle::single(config, c, e.get(c))?;
                    Ok(peel_summary(config, &target, &ne, order)?.h0.hi == 0)
                })
                .collect()
        })
        .collect()
}

/// Whether `H^0(T_Z(nE)|_E) = 0`.
pub fn check_h0_reduced_e_vanishing(
    config: &PlumbingConfig,
    sol: &DivisorSolution,
    n: u64,
    order: PeelOrder,
) -> Result<bool> {
    let (e, ne) = twist_multiple(config, sol, n)?;
    Ok(peel_summary(config, &e, &ne, order)?.h0.hi == 0)
}

/// Totals for `T_Z(nE)|_{nE}`.
pub fn ne_summary(config: &PlumbingConfig, sol: &DivisorSolution, n: u64, order: PeelOrder) -> Result<LedgerSummary> {
    let (_, ne) = twist_multiple(config, sol, n)?;
    peel_summary(config, &ne, &ne, order)
}

/// Full ledger for `T_Z(nE)|_{nE}`.
pub fn ne_ledger(config: &PlumbingConfig, sol: &DivisorSolution, n: u64, order: PeelOrder) -> Result<CohomologyLedger> {
    let (_, ne) = twist_multiple(config, sol, n)?;
    peel_ledger(config, &ne, &ne, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::primitive_positive_solution;

    fn cfg(b: &[u64], a: &[u64]) -> PlumbingConfig {
        PlumbingConfig::single(b.to_vec(), a.to_vec()).unwrap()
    }

    fn c11() -> CurveId {
        CurveId::new(0, 0)
    }

    #[test]
    fn p1_values() {
        assert_eq!(p1_cohomology(-1), (0, 0));
        assert_eq!(p1_cohomology(2), (3, 0));
        assert_eq!(p1_cohomology(-6), (0, 5));
        assert_eq!(p1_cohomology(0), (1, 0));
    }

    #[test]
    fn degrees() {
        let c = cfg(&[2], &[1]);
        let t = Cycle::single(&c, c11(), 2).unwrap();
        assert_eq!(
            twist_degrees(&c, &t, c11()).unwrap(),
            LineBundleDegreePair { d_t: -2, d_n: -6 }
        );

        let c = cfg(&[2, 2], &[1, 1]);
        let t = Cycle::reduced(&c);
        assert_eq!(
            twist_degrees(&c, &t, c11()).unwrap(),
            LineBundleDegreePair { d_t: 1, d_n: -3 }
        );

        let c = cfg(&[3], &[1]);
        let t = Cycle::zero(&c);
        assert_eq!(
            twist_degrees(&c, &t, c11()).unwrap(),
            LineBundleDegreePair { d_t: 2, d_n: -3 }
        );
        assert!(twist_degrees(&c, &t, CurveId::new(0, 1)).is_err());
    }

    #[test]
    fn fixture_two_c1() {
        // b=[2], target = twist = 2C1. Steps: twist 2C1 -> degrees (-2,-6),
        // h0 0, h1 6; twist C1 -> (0,-4), h0 1, h1 3 with empty sub-cycle.
        let c = cfg(&[2], &[1]);
        let two = Cycle::single(&c, c11(), 2).unwrap();
        let l = peel_ledger(&c, &two, &two, PeelOrder::Canonical).unwrap();
        assert_eq!(l.steps.len(), 2);
        assert_eq!(l.steps[0].degrees, LineBundleDegreePair { d_t: -2, d_n: -6 });
        assert_eq!((l.steps[0].h0_step, l.steps[0].h1_step), (0, 6));
        assert_eq!(l.steps[1].degrees, LineBundleDegreePair { d_t: 0, d_n: -4 });
        assert_eq!((l.steps[1].h0_step, l.steps[1].h1_step), (1, 3));
        assert_eq!(l.h0_total, DimInterval::point(1));
        assert_eq!(l.h1_total, DimInterval::point(9));
        assert_eq!(l.euler_total, -8);
        assert!(l.is_exact());
    }

    #[test]
    fn single_curve_is_one_step() {
        let c = cfg(&[3, 2], &[1, 1]);
        let t = Cycle::single(&c, c11(), 1).unwrap();
        let m = Cycle::from_multiplicities(&c, vec![vec![4, 1]]).unwrap();
        let l = peel_ledger(&c, &t, &m, PeelOrder::Canonical).unwrap();
        let d = twist_degrees(&c, &m, c11()).unwrap();
        assert_eq!(l.steps.len(), 1);
        assert_eq!(l.h0_total, DimInterval::point(d.h0()));
        assert_eq!(l.h1_total, DimInterval::point(d.h1()));
    }

    #[test]
    fn a2_fixture_widens() {
        // b=[2,2], a=[1,1], x0=1, E=C1+C2, n=2; hand computation:
        // steps (h0,h1) = (1,3), (3,1), (0,6), (1,3) outermost first.
        // innermost (1,3) exact; then (0,6): [1,1],[9,9]; then (3,1) with
        // r <= 3: h0 [1,4], h1 [7,10]; then (1,3) with r <= 1: h0 [1,5],
        // h1 [9,13]. Euler 1-3+3-1-1-5+1-3 = -8.
        let c = cfg(&[2, 2], &[1, 1]);
        let sol = primitive_positive_solution(&c).unwrap();
        let l = ne_ledger(&c, &sol, 2, PeelOrder::Canonical).unwrap();
        let hs: Vec<(u128, u128)> = l.steps.iter().map(|s| (s.h0_step, s.h1_step)).collect();
        assert_eq!(hs, vec![(1, 3), (3, 1), (0, 6), (1, 3)]);
        assert_eq!(l.h0_total, DimInterval { lo: 1, hi: 5 });
        assert_eq!(l.h1_total, DimInterval { lo: 9, hi: 13 });
        assert_eq!(l.euler_total, -8);
        let exact: Vec<bool> = l.steps.iter().map(|s| s.exact).collect();
        assert_eq!(exact, vec![false, false, true, true]);
        assert_eq!(
            l.summary(),
            peel_summary(
                &c,
                &Cycle::reduced(&c).scaled(2).unwrap(),
                &Cycle::reduced(&c).scaled(2).unwrap(),
                PeelOrder::Canonical
            )
            .unwrap()
        );
    }

    #[test]
    fn rejects_bad_targets() {
        let c = cfg(&[2], &[1]);
        let z = Cycle::zero(&c);
        assert_eq!(
            peel_ledger(&c, &z, &z, PeelOrder::Canonical).unwrap_err(),
            Error::EmptyTarget
        );
        let other = cfg(&[2, 2], &[1, 1]);
        let wrong = Cycle::reduced(&other);
        assert!(matches!(
            peel_ledger(&c, &wrong, &z, PeelOrder::Canonical),
            Err(Error::CycleShape(_))
        ));
        let one = Cycle::reduced(&c);
        assert!(matches!(
            peel_ledger_in_sequence(&c, &one, &z, &[c11(), c11()]),
            Err(Error::PeelOrderMismatch(_))
        ));
    }

    #[test]
    fn vanishing_fixtures() {
        let c = cfg(&[2], &[1]);
        let sol = primitive_positive_solution(&c).unwrap();
        assert_eq!(
            check_component_h0_vanishing(&c, &sol, 2, PeelOrder::Canonical).unwrap(),
            vec![vec![true]]
        );
        assert_eq!(
            check_component_h0_vanishing(&c, &sol, 1, PeelOrder::Canonical).unwrap(),
            vec![vec![false]]
        );
        assert!(check_h0_reduced_e_vanishing(&c, &sol, 2, PeelOrder::Canonical).unwrap());
        assert!(!check_h0_reduced_e_vanishing(&c, &sol, 1, PeelOrder::Canonical).unwrap());

        let c = cfg(&[3], &[1]);
        let sol = primitive_positive_solution(&c).unwrap();
        assert_eq!(sol.as_vector(), vec![1.into(), 3.into()]);
        assert_eq!(
            check_component_h0_vanishing(&c, &sol, 1, PeelOrder::Canonical).unwrap(),
            vec![vec![true]]
        );
        assert_eq!(
            check_h0_reduced_e_vanishing(&c, &sol, 0, PeelOrder::Canonical),
            Err(Error::InvalidTwist(0))
        );
    }

    #[test]
    fn a2_e_vanishing_threshold() {
        // b=[2,2], a=[1,1], E = C1 + C2: peeling C1 under nE has degree
        // 2 - n, then C2 under nE - C1 has degree 2 - n - 1.
        let c = cfg(&[2, 2], &[1, 1]);
        let sol = primitive_positive_solution(&c).unwrap();
        let first = (1..20)
            .find(|&n| check_h0_reduced_e_vanishing(&c, &sol, n, PeelOrder::Canonical).unwrap())
            .unwrap();
        assert_eq!(first, 3);
    }
}
