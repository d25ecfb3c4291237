//! Odd-cycle separation for 𝒬-feasible points over cactus graphs.
//!
//! For a cycle edge e = {i, j} write z_e = x_i + x_j − 2y_e; 𝒬-feasibility
//! puts z_e ∈ [0, 1]. For odd A ⊆ E(C) the inequality OC(A) is violated by
//! exactly (1 − Σ_cut(A))/2 where
//!
//!   Σ_cut(A) = Σ_{e∈A}(1 − z_e) + Σ_{e∉A} z_e ≥ 0,
//!
//! and flipping one edge's membership changes Σ_cut by ±(1 − 2z_e). The
//! per-edge minimizer F′ = {e : z_e > 1/2} therefore dominates: any odd A
//! pays Σ_cut(F′) plus |1 − 2z_e| per edge in A Δ F′. If |F′| is odd it is
//! the unique best candidate; otherwise the best odd set is a single toggle
//! of F′. The sweep checks only these candidates yet agrees with exhaustive
//! enumeration of all 2^{len−1} odd subsets, including tie-breaks (minimal
//! Σ_cut, then minimal edge bitmask; zero-cost toggles only ever add edges,
//! which grows the mask).

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::{cycle_edges, enumerate_cycles_cactus, Graph};
use crate::numbers::ExactRational;
use crate::polytope::{build_q, odd_cycle_inequality, Membership, Row};

/// One violated odd-cycle inequality.
#[derive(Debug, Clone)]
pub struct OcViolation {
    pub cycle: Vec<usize>,
    pub a: Vec<(usize, usize)>,
    /// lhs − rhs > 0, exact.
    pub violation: ExactRational,
    pub row: Row,
}

/// Which violated cut a query reports when several cycles yield one.
///
/// Within a single cycle the violated odd subset is unique whenever it
/// exists (two strictly violated candidates would need toggle costs
/// c_i < c_j and c_j < c_i simultaneously), so the modes only differ in
/// which cycle's cut is surfaced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScanMode {
    /// First violated cut in canonical cycle order (deterministic default).
    #[default]
    FirstViolated,
    /// Largest violation across cycles (earliest cycle on exact ties).
    MostViolated,
}

#[derive(Debug, Clone)]
pub struct SeparationResult {
    pub cycles_checked: usize,
    /// At most one violation per cycle, cycles in canonical order.
    pub findings: Vec<OcViolation>,
    /// Index into `findings` of the largest violation (earliest cycle on
    /// ties); None when every inequality is satisfied.
    pub most_violated: Option<usize>,
}

impl SeparationResult {
    pub fn found(&self) -> bool {
        !self.findings.is_empty()
    }

    /// The reported cut under `mode`; None when no inequality is violated.
    pub fn outcome(&self, mode: ScanMode) -> Option<&OcViolation> {
        match mode {
            ScanMode::FirstViolated => self.findings.first(),
            ScanMode::MostViolated => self.most_violated.map(|i| &self.findings[i]),
        }
    }
}

/// Separation by the F′ sweep (candidates from single toggles).
pub fn separate(g: &Graph, point: &[ExactRational]) -> Result<SeparationResult> {
    separate_impl(g, point, false)
}

/// Reference oracle: exhaustive enumeration of all odd subsets per cycle,
/// identical tie-breaking. Intended for cross-validation.
pub fn separate_exhaustive(g: &Graph, point: &[ExactRational]) -> Result<SeparationResult> {
    separate_impl(g, point, true)
}

fn separate_impl(g: &Graph, point: &[ExactRational], exhaustive: bool) -> Result<SeparationResult> {
    if point.len() != g.dim() {
        return Err(Error::domain(format!(
            "point has {} coordinates, expected d = {}",
            point.len(),
            g.dim()
        )));
    }
    // Precondition: the point must satisfy the 𝒬 rows (the sweep's geometry
    // needs z ∈ [0,1]).
    if let Membership::Outside { violated } = build_q(g).membership(point)? {
        let tag = &build_q(g).rows[violated[0]].tag;
        return Err(Error::domain(format!(
            "point is not 𝒬-feasible: violates {tag}"
        )));
    }
    let cycles = enumerate_cycles_cactus(g)?;
    let mut findings = Vec::new();
    for cycle in &cycles {
        let ce = cycle_edges(cycle);
        // z_e per cycle edge, exact.
        let z: Vec<ExactRational> = ce
            .iter()
            .map(|&(i, j)| {
                let k = g.edge_index(i, j).expect("cycle edge in graph");
                &point[i - 1] + &point[j - 1]
                    - &point[g.n() + k] - &point[g.n() + k]
            })
            .collect();
        let best = if exhaustive {
            best_odd_subset_exhaustive(&z)
        } else {
            best_odd_subset_sweep(&z)
        };
        let (mask, sum_cut) = best;
        if sum_cut < ExactRational::one() {
            let a: Vec<(usize, usize)> = ce
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1u32 << k) != 0)
                .map(|(_, &e)| e)
                .collect();
            let row = odd_cycle_inequality(g, cycle, &a)?;
            // Authoritative violation via the actual inequality row.
            let violation = row.violation(point);
            debug_assert_eq!(violation, (ExactRational::one() - &sum_cut) / rat2());
            findings.push(OcViolation { cycle: cycle.clone(), a, violation, row });
        }
    }
    let most_violated = findings
        .iter()
        .enumerate()
        .max_by(|(ia, a), (ib, b)| {
            a.violation
                .cmp(&b.violation)
                .then(ib.cmp(ia)) // earlier cycle wins ties
        })
        .map(|(i, _)| i);
    Ok(SeparationResult { cycles_checked: cycles.len(), findings, most_violated })
}

fn rat2() -> ExactRational {
    ExactRational::from_integer(2.into())
}

/// Sweep candidates: F′ if odd, else every single toggle of F′.
/// Returns (edge bitmask, Σ_cut) minimal under (Σ_cut, mask).
fn best_odd_subset_sweep(z: &[ExactRational]) -> (u32, ExactRational) {
    let len = z.len();
    let half = ExactRational::new(BigInt::one(), 2.into());
    let mut fprime = 0u32;
    let mut base_sum = ExactRational::zero();
    // Σ_cut(F′) = Σ min(z, 1−z); toggling e adds |1 − 2z_e|.
    let mut toggle_cost = Vec::with_capacity(len);
    for (k, ze) in z.iter().enumerate() {
        let one_minus = ExactRational::one() - ze;
        if *ze > half {
            fprime |= 1 << k;
            base_sum += &one_minus;
        } else {
            base_sum += ze;
        }
        toggle_cost.push((ze - &one_minus).abs());
    }
    if fprime.count_ones() % 2 == 1 {
        return (fprime, base_sum);
    }
    let mut best: Option<(ExactRational, u32)> = None;
    for k in 0..len {
        let sum = &base_sum + &toggle_cost[k];
        let mask = fprime ^ (1 << k);
        if best.as_ref().is_none_or(|(bs, bm)| (&sum, mask) < (bs, *bm)) {
            best = Some((sum, mask));
        }
    }
    let (sum, mask) = best.expect("cycle has at least three edges");
    (mask, sum)
}

/// Exhaustive reference: Gray-code walk over all subsets, tracking Σ_cut
/// incrementally; among odd subsets picks minimal (Σ_cut, mask). Uses i128
/// fixed-point when the coordinates are dyadic, exact rationals otherwise.
fn best_odd_subset_exhaustive(z: &[ExactRational]) -> (u32, ExactRational) {
    if let Some((scaled, s)) = dyadic_scale(z) {
        let scale_one: i128 = 1i128 << s;
        let w: Vec<i128> = scaled.iter().map(|&v| scale_one - 2 * v).collect();
        let mut sum: i128 = scaled.iter().sum();
        let mut mask = 0u32;
        let mut best: Option<(i128, u32)> = None;
        for i in 1u32..(1 << z.len()) {
            let bit = i.trailing_zeros();
            mask ^= 1 << bit;
            sum += if mask & (1 << bit) != 0 { w[bit as usize] } else { -w[bit as usize] };
            if mask.count_ones() % 2 == 1
                && best.is_none_or(|(bs, bm)| (sum, mask) < (bs, bm))
            {
                best = Some((sum, mask));
            }
        }
        let (sum, mask) = best.expect("nonempty cycle");
        return (mask, ExactRational::new(sum.into(), BigInt::one() << s));
    }
    // Rational fallback, same walk.
    let w: Vec<ExactRational> =
        z.iter().map(|ze| ExactRational::one() - ze - ze).collect();
    let mut sum: ExactRational = z.iter().sum();
    let mut mask = 0u32;
    let mut best: Option<(ExactRational, u32)> = None;
    for i in 1u32..(1 << z.len()) {
        let bit = i.trailing_zeros() as usize;
        mask ^= 1 << bit;
        if mask & (1 << bit as u32) != 0 {
            sum += &w[bit];
        } else {
            sum -= &w[bit];
        }
        if mask.count_ones() % 2 == 1
            && best.as_ref().is_none_or(|(bs, bm)| (&sum, mask) < (bs, *bm))
        {
            best = Some((sum.clone(), mask));
        }
    }
    let (sum, mask) = best.expect("nonempty cycle");
    (mask, sum)
}

/// Common power-of-two denominator rescaling: v_k = scaled_k / 2^s.
/// None if any denominator is not a power of two or exceeds 2^100.
fn dyadic_scale(values: &[ExactRational]) -> Option<(Vec<i128>, u32)> {
    let mut s: u64 = 0;
    let mut shifts = Vec::with_capacity(values.len());
    for v in values {
        let den = v.denom().magnitude();
        if den.count_ones() != 1 {
            return None;
        }
        let k = den.trailing_zeros().unwrap_or(0);
        if k > 100 {
            return None;
        }
        shifts.push(k);
        s = s.max(k);
    }
    let mut out = Vec::with_capacity(values.len());
    for (v, k) in values.iter().zip(shifts) {
        let num = v.numer().to_i128()?;
        out.push(num << (s - k));
    }
    Some((out, s as u32))
}
