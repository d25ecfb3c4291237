//! Seeded Monte-Carlo volume estimation.
//!
//! Two estimators live here:
//!
//! * [`estimate_volume`] — plain rejection sampling of a [`HalfspaceSystem`]
//!   inside the unit box; float fast path with an exact-rational recheck for
//!   points within 1e−9 of any boundary.
//! * [`necklace_experiment`] — conditional estimator for the necklace
//!   refinements: exact uniform points of 𝒬(N_n) are drawn via the
//!   linear-extension sampler and the measure-preserving 𝒪 → 𝒬 map, and each
//!   refinement's volume is vol 𝒬 (exact) times its conditional hit rate.
//!   Plain rejection cannot resolve these volumes (≈ 10⁻¹⁰ of the box at
//!   n = 4); conditioning on 𝒬 leaves acceptance rates of 10⁻⁴ or better.
//!
//! Determinism: work is split into fixed chunks of [`CHUNK`] samples; chunk
//! `c` draws from `ChaCha8Rng::seed_from_u64(seed)` with stream `c`, so
//! (seed, samples, system) fully determine every hit count regardless of
//! thread scheduling. Hit merging is an integer sum.

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{cycle_edges, enumerate_cycles_cactus, Graph};
use crate::numbers::{factorial, rational_to_f64, ExactRational};
use crate::polytope::HalfspaceSystem;
use crate::poset::{IncidencePoset, SamplerTable, DEFAULT_IDEAL_CAP};

/// Default seed for every CLI entry point (fixed, never time-based).
pub const DEFAULT_SEED: u64 = 0x5EED_0001;

/// Samples per RNG stream; chunk index = stream index.
pub const CHUNK: u64 = 65_536;

/// Boundary band (per row, in lhs−rhs units) inside which the float
/// membership verdict is re-derived with exact rationals.
const BOUNDARY_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct MCEstimate {
    pub dimension: usize,
    pub hits: u64,
    pub samples: u64,
    /// hits / samples (box volume is 1).
    pub estimate: f64,
    /// Binomial standard error √(p̂(1−p̂)/samples).
    pub std_error: f64,
    /// estimate^(1/d).
    pub dth_root: f64,
    /// Delta method: std_error/(d·estimate)·dth_root (0 when hits = 0).
    pub dth_root_std_error: f64,
    pub seed: u64,
}

impl MCEstimate {
    fn from_hits(dimension: usize, hits: u64, samples: u64, seed: u64) -> Self {
        let p = hits as f64 / samples as f64;
        let std_error = (p * (1.0 - p) / samples as f64).sqrt();
        let d = dimension.max(1) as f64;
        let dth_root = if hits == 0 { 0.0 } else { p.powf(1.0 / d) };
        let dth_root_std_error = if hits == 0 {
            0.0
        } else {
            std_error / (d * p) * dth_root
        };
        MCEstimate {
            dimension,
            hits,
            samples,
            estimate: p,
            std_error,
            dth_root,
            dth_root_std_error,
            seed,
        }
    }
}

/// Dense float mirror of a halfspace system for the membership fast path.
struct F64Rows {
    dim: usize,
    /// One dense row per inequality: coefficients then rhs.
    rows: Vec<(Vec<f64>, f64)>,
}

impl F64Rows {
    fn new(system: &HalfspaceSystem) -> Self {
        let rows = system
            .rows
            .iter()
            .map(|row| {
                let mut dense = vec![0.0; system.dimension];
                for (j, c) in &row.coeffs {
                    dense[*j] = rational_to_f64(c);
                }
                (dense, rational_to_f64(&row.rhs))
            })
            .collect();
        F64Rows { dim: system.dimension, rows }
    }

    /// Membership with the near-boundary exact recheck.
    fn contains(&self, system: &HalfspaceSystem, point: &[f64]) -> bool {
        let mut near: Vec<usize> = Vec::new();
        for (ri, (coeffs, rhs)) in self.rows.iter().enumerate() {
            let mut s = -rhs;
            for (c, x) in coeffs.iter().zip(point) {
                s += c * x;
            }
            if s > BOUNDARY_EPS {
                return false;
            }
            if s > -BOUNDARY_EPS {
                near.push(ri);
            }
        }
        if near.is_empty() {
            return true;
        }
        // f64 coordinates are dyadic rationals; the conversion is exact.
        let exact: Vec<ExactRational> = point
            .iter()
            .map(|&x| ExactRational::from_float(x).expect("finite coordinate"))
            .collect();
        near.iter().all(|&ri| {
            system.rows[ri].violation(&exact) <= ExactRational::from_integer(0.into())
        })
    }
}

/// Uniform rejection sampling of `system` inside [0,1]^d.
pub fn estimate_volume(system: &HalfspaceSystem, samples: u64, seed: u64) -> Result<MCEstimate> {
    if samples == 0 {
        return Err(Error::domain("samples must be positive"));
    }
    let fast = F64Rows::new(system);
    let chunks = samples.div_ceil(CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let count = CHUNK.min(samples - c * CHUNK);
            let mut point = vec![0.0f64; fast.dim];
            let mut h = 0u64;
            for _ in 0..count {
                for x in point.iter_mut() {
                    *x = rng.random::<f64>();
                }
                if fast.contains(system, &point) {
                    h += 1;
                }
            }
            h
        })
        .sum();
    Ok(MCEstimate::from_hits(system.dimension, hits, samples, seed))
}

/// Numerator scale of sampled 𝒬 points: coordinates are `numer / 2^COORD_SHIFT`.
pub const COORD_SHIFT: u32 = 65;

/// Exact uniform sampler of 𝒬(G) points.
///
/// A uniform point of the order polytope 𝒪(G) is drawn Stanley-style: a
/// uniform linear extension (by exact rank via [`SamplerTable`]) assigns the
/// order statistics of d iid uniforms (64-bit dyadics) to the coordinates.
/// A uniform vertex-flip vector a ∈ {0,1}^n then maps 𝒪 onto 𝒬 by the
/// measure-preserving shear
///
///   x̂_i = a_i + (a_i ? 1 − x'_i : x'_i),
///   ŷ_e = y'_e + max(0, x̂_i + x̂_j − 2),   point = (x̂, ŷ)/2.
///
/// All coordinates are exact dyadic rationals with denominator 2^65.
pub struct QSampler {
    n: usize,
    d: usize,
    edges: Vec<(usize, usize)>,
    table: SamplerTable,
    total: u128,
    rank_mask: u128,
}

/// Per-thread scratch for [`QSampler::sample_into`].
pub struct QScratch {
    le: Vec<u16>,
    sorted: Vec<u64>,
    o_numer: Vec<u64>,
}

impl QSampler {
    pub fn new(g: &Graph, ideal_cap: u64) -> Result<Self> {
        if g.n() > 64 {
            return Err(Error::size("sampler flip vector limited to 64 vertices", g.n() as u64));
        }
        let poset = IncidencePoset::new(g);
        let table = SamplerTable::build(&poset, ideal_cap)?;
        let total = table.total();
        let rank_mask = (u128::MAX >> total.leading_zeros()).max(1);
        Ok(QSampler {
            n: g.n(),
            d: g.dim(),
            edges: g.edges().to_vec(),
            table,
            total,
            rank_mask,
        })
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    /// e(G), the number of linear extensions driving the sampler.
    pub fn extension_count(&self) -> u128 {
        self.total
    }

    pub fn scratch(&self) -> QScratch {
        QScratch {
            le: vec![0; self.d],
            sorted: vec![0; self.d],
            o_numer: vec![0; self.d],
        }
    }

    /// Draw one exact 𝒬 point; `out` receives d numerators over 2^65.
    pub fn sample_into<R: Rng>(&self, rng: &mut R, scratch: &mut QScratch, out: &mut [u128]) {
        assert_eq!(out.len(), self.d);
        // Exact uniform rank in [0, e(G)) by masked rejection.
        let rank = loop {
            let r = rng.random::<u128>() & self.rank_mask;
            if r < self.total {
                break r;
            }
        };
        self.table.sample_le_into(rank, &mut scratch.le);
        // Order statistics of d iid 64-bit uniforms along the extension:
        // the element at position s (bottom-up) takes the (s+1)-th smallest.
        for v in scratch.sorted.iter_mut() {
            *v = rng.random::<u64>();
        }
        scratch.sorted.sort_unstable();
        for (pos, &el) in scratch.le.iter().enumerate() {
            scratch.o_numer[el as usize] = scratch.sorted[pos];
        }
        let flips = rng.random::<u64>();
        const TWO65: u128 = 1u128 << COORD_SHIFT;
        for i in 0..self.n {
            let v = scratch.o_numer[i] as u128;
            out[i] = if flips & (1 << i) != 0 { TWO65 - v } else { v };
        }
        for (k, &(i, j)) in self.edges.iter().enumerate() {
            let w = scratch.o_numer[self.n + k] as u128;
            let s = out[i - 1] + out[j - 1];
            out[self.n + k] = w + s.saturating_sub(TWO65);
        }
    }

    /// Convenience: one sample as exact rational coordinates.
    pub fn sample_point<R: Rng>(&self, rng: &mut R) -> Vec<ExactRational> {
        let mut scratch = self.scratch();
        let mut out = vec![0u128; self.d];
        self.sample_into(rng, &mut scratch, &mut out);
        out.iter()
            .map(|&v| ExactRational::new(BigInt::from(v), BigInt::one() << COORD_SHIFT))
            .collect()
    }
}

/// Minimum of Σ_cut over odd edge subsets of one cycle, in numerator units
/// (coordinates and `one` share the same power-of-two scale). The point is
/// inside every OC row of the cycle iff the returned value ≥ `one`.
///
/// Σ_cut(F) = Σ_{e∈F}(1−z_e) + Σ_{e∉F}z_e with z_e = x_i + x_j − 2y_e; the
/// per-edge minimizer F′ = {z > 1/2} realizes the minimum when |F′| is odd,
/// and otherwise the minimum pays the single cheapest toggle |1 − 2z_e|.
pub fn min_odd_cut(zs: &[i128], one: i128) -> i128 {
    let mut base = 0i128;
    let mut odd = false;
    let mut min_toggle = i128::MAX;
    for &z in zs {
        let c = one - 2 * z;
        if c < 0 {
            odd = !odd;
            base += one - z;
            min_toggle = min_toggle.min(-c);
        } else {
            base += z;
            min_toggle = min_toggle.min(c);
        }
    }
    if odd {
        base
    } else {
        base + min_toggle
    }
}

/// Coordinate index triples (i, j, y) of one cycle's edges (0-based positions
/// into a point vector laid out as x_1..x_n, y_(canonical edge order)).
pub fn cycle_coord_triples(g: &Graph, cycle: &[usize]) -> Vec<(usize, usize, usize)> {
    cycle_edges(cycle)
        .iter()
        .map(|&(u, v)| {
            let k = g.edge_index(u, v).expect("cycle edge");
            (u - 1, v - 1, g.n() + k)
        })
        .collect()
}

pub fn cycle_zs(point: &[u128], triples: &[(usize, usize, usize)], zs: &mut Vec<i128>) {
    zs.clear();
    for &(i, j, y) in triples {
        zs.push(point[i] as i128 + point[j] as i128 - 2 * point[y] as i128);
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NecklaceRow {
    pub polytope: String,
    pub hits: u64,
    pub estimate: f64,
    pub std_error: f64,
    pub dth_root: f64,
    pub dth_root_std_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NecklaceReport {
    pub n: usize,
    pub dimension: usize,
    pub samples: u64,
    pub seed: u64,
    /// vol 𝒬(N_n), exact (ideal-DP linear-extension count).
    pub exact_q_volume: String,
    pub exact_q_root: f64,
    /// d-th root of e(G)/(2^n·d!), i.e. of 2^{|V|}·vol 𝒬: the normalization
    /// used by the reference necklace table this experiment reproduces (its
    /// 𝒬 column halves only the n ring edges). Kept alongside the true root
    /// for cross-checking against that table.
    pub table_q_root: f64,
    /// Rows for 𝒬, ℛ, 𝒯, 𝒫 (in that order), all on the same point stream.
    pub rows: Vec<NecklaceRow>,
}

/// Shared-stream conditional MC over the necklace refinements.
///
/// Exact uniform 𝒬(N_n) points are drawn; each point is tested against the
/// odd-cycle rows of the big cycle (ℛ), of every triangle (𝒯), and of all
/// cycles (𝒫). vol X = vol 𝒬 · hits_X / samples. A hit for a tighter system
/// is by construction a hit for every looser one, so the hit ordering
/// 𝒫 ≤ 𝒯 ≤ 𝒬 and 𝒫 ≤ ℛ ≤ 𝒬 holds exactly.
pub fn necklace_experiment(n: usize, samples: u64, seed: u64) -> Result<NecklaceReport> {
    if !(3..=6).contains(&n) {
        return Err(Error::domain(format!(
            "necklace experiment supports 3 ≤ n ≤ 6, got {n}"
        )));
    }
    if samples == 0 {
        return Err(Error::domain("samples must be positive"));
    }
    let g = Graph::necklace(n)?;
    let d = g.dim();
    let sampler = QSampler::new(&g, DEFAULT_IDEAL_CAP)?;
    // vol 𝒬 = e(G)/(2^m d!) with e(G) already counted by the sampler build.
    let e_count: num_bigint::BigUint = sampler.extension_count().into();
    let den = factorial(d as u64) << g.m();
    let exact_q = ExactRational::new(e_count.clone().into(), den.into());
    let exact_q_volume = exact_q.to_string();
    let q_f64 = rational_to_f64(&exact_q);
    let exact_q_root = crate::numbers::dth_root_f64(&exact_q, d as u64)?;
    let table_norm = ExactRational::new(e_count.into(), (factorial(d as u64) << n).into());
    let table_q_root = crate::numbers::dth_root_f64(&table_norm, d as u64)?;

    // Ring cycle = the one using only ring vertices 1..n; the rest are the
    // pendant triangles.
    let cycles = enumerate_cycles_cactus(&g)?;
    let mut big: Vec<Vec<(usize, usize, usize)>> = Vec::new();
    let mut tris: Vec<Vec<(usize, usize, usize)>> = Vec::new();
    for c in &cycles {
        let triples = cycle_coord_triples(&g, c);
        if c.iter().all(|&v| v <= n) {
            big.push(triples);
        } else {
            tris.push(triples);
        }
    }
    if big.len() != 1 || tris.len() != n {
        return Err(Error::domain("necklace cycle structure not recognized"));
    }

    const ONE: i128 = 1i128 << COORD_SHIFT;
    let chunks = samples.div_ceil(CHUNK);
    let hit_vec: [u64; 4] = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let count = CHUNK.min(samples - c * CHUNK);
            let mut scratch = sampler.scratch();
            let mut point = vec![0u128; d];
            let mut zs: Vec<i128> = Vec::with_capacity(d);
            let mut acc = [0u64; 4];
            for _ in 0..count {
                sampler.sample_into(&mut rng, &mut scratch, &mut point);
                cycle_zs(&point, &big[0], &mut zs);
                let in_r = min_odd_cut(&zs, ONE) >= ONE;
                let mut in_t = true;
                for tri in &tris {
                    cycle_zs(&point, tri, &mut zs);
                    if min_odd_cut(&zs, ONE) < ONE {
                        in_t = false;
                        break;
                    }
                }
                acc[0] += 1;
                acc[1] += in_r as u64;
                acc[2] += in_t as u64;
                acc[3] += (in_r && in_t) as u64;
            }
            acc
        })
        .reduce(
            || [0u64; 4],
            |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]],
        );

    let rows = ["Q", "R", "T", "P"]
        .iter()
        .zip(hit_vec)
        .map(|(name, hits)| {
            // Conditional estimate: vol 𝒬 · p̂ with binomial error on p̂.
            let base = MCEstimate::from_hits(d, hits, samples, seed);
            let estimate = q_f64 * base.estimate;
            let std_error = q_f64 * base.std_error;
            let d_f = d as f64;
            let dth_root = if hits == 0 { 0.0 } else { estimate.powf(1.0 / d_f) };
            let dth_root_std_error = if hits == 0 {
                0.0
            } else {
                std_error / (d_f * estimate) * dth_root
            };
            NecklaceRow {
                polytope: name.to_string(),
                hits,
                estimate,
                std_error,
                dth_root,
                dth_root_std_error,
            }
        })
        .collect();

    Ok(NecklaceReport {
        n,
        dimension: d,
        samples,
        seed,
        exact_q_volume,
        exact_q_root,
        table_q_root,
        rows,
    })
}

/// Run `f` on a dedicated rayon pool with `threads` workers (determinism
/// checks across worker counts).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
        .install(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::{vol_closed_form, volume, PolytopeKind};
    use crate::polytope::{build_q, build_refinement, Membership, RefinementKind};
    use crate::poset::{CountCaps, Engine};

    #[test]
    fn box_estimate_is_exact_on_trivial_system() {
        let sys = HalfspaceSystem { dimension: 3, rows: vec![] };
        let est = estimate_volume(&sys, 10_000, 7).unwrap();
        assert_eq!(est.hits, 10_000);
        assert_eq!(est.estimate, 1.0);
        assert_eq!(est.std_error, 0.0);
        assert_eq!(est.dth_root, 1.0);
    }

    #[test]
    fn rejects_zero_samples() {
        let g = Graph::cycle(3).unwrap();
        assert!(estimate_volume(&build_q(&g), 0, 1).is_err());
        assert!(necklace_experiment(4, 0, 1).is_err());
        assert!(necklace_experiment(2, 100, 1).is_err());
        assert!(necklace_experiment(7, 100, 1).is_err());
    }

    #[test]
    fn box_estimate_matches_exact_q_c3() {
        let g = Graph::cycle(3).unwrap();
        let exact = rational_to_f64(&vol_closed_form(&g, PolytopeKind::Q).unwrap());
        let est = estimate_volume(&build_q(&g), 1_000_000, DEFAULT_SEED).unwrap();
        assert!(
            (est.estimate - exact).abs() < 4.0 * est.std_error,
            "estimate {} exact {} σ {}",
            est.estimate,
            exact,
            est.std_error
        );
    }

    #[test]
    fn box_estimates_are_deterministic_across_thread_counts() {
        let g = Graph::cycle(3).unwrap();
        let sys = build_q(&g);
        let h1 = with_threads(1, || estimate_volume(&sys, 200_000, 42).unwrap().hits);
        let h2 = with_threads(2, || estimate_volume(&sys, 200_000, 42).unwrap().hits);
        let h4 = with_threads(4, || estimate_volume(&sys, 200_000, 42).unwrap().hits);
        assert_eq!(h1, h2);
        assert_eq!(h1, h4);
    }

    #[test]
    fn sampled_q_points_are_feasible_and_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for spec in ["cycle:3", "path:2", "star:3"] {
            let g = Graph::from_spec_str(spec).unwrap();
            let sampler = QSampler::new(&g, DEFAULT_IDEAL_CAP).unwrap();
            let sys = build_q(&g);
            for _ in 0..500 {
                let p = sampler.sample_point(&mut rng);
                if let Membership::Outside { violated } = sys.membership(&p).unwrap() {
                    panic!("sampled point outside 𝒬({spec}): rows {violated:?}")
                }
            }
        }
    }

    #[test]
    fn conditional_hits_reproduce_p_of_c3() {
        // vol 𝒫(C_3) = 1/180 = vol 𝒬(C_3) · Pr[point survives all OC rows].
        let g = Graph::cycle(3).unwrap();
        let sampler = QSampler::new(&g, DEFAULT_IDEAL_CAP).unwrap();
        let vol_q = rational_to_f64(&vol_closed_form(&g, PolytopeKind::Q).unwrap());
        let vol_p = rational_to_f64(&vol_closed_form(&g, PolytopeKind::P).unwrap());
        let triples = cycle_coord_triples(&g, &enumerate_cycles_cactus(&g).unwrap()[0]);
        const ONE: i128 = 1i128 << COORD_SHIFT;
        let samples = 200_000u64;
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
        let mut scratch = sampler.scratch();
        let mut point = vec![0u128; g.dim()];
        let mut zs = Vec::new();
        let mut hits = 0u64;
        for _ in 0..samples {
            sampler.sample_into(&mut rng, &mut scratch, &mut point);
            cycle_zs(&point, &triples, &mut zs);
            if min_odd_cut(&zs, ONE) >= ONE {
                hits += 1;
            }
        }
        let p_hat = hits as f64 / samples as f64;
        let sigma = vol_q * (p_hat * (1.0 - p_hat) / samples as f64).sqrt();
        assert!(
            (vol_q * p_hat - vol_p).abs() < 4.0 * sigma,
            "estimate {} exact {} σ {}",
            vol_q * p_hat,
            vol_p,
            sigma
        );
    }

    #[test]
    fn min_odd_cut_agrees_with_refinement_membership() {
        // Cross-check the sweep against exact OC row evaluation on 𝒬 points.
        let g = Graph::cycle(5).unwrap();
        let sampler = QSampler::new(&g, DEFAULT_IDEAL_CAP).unwrap();
        let refined = build_refinement(&g, RefinementKind::AllCycles).unwrap();
        let triples = cycle_coord_triples(&g, &enumerate_cycles_cactus(&g).unwrap()[0]);
        const ONE: i128 = 1i128 << COORD_SHIFT;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut scratch = sampler.scratch();
        let mut point = vec![0u128; g.dim()];
        let mut zs = Vec::new();
        for _ in 0..400 {
            sampler.sample_into(&mut rng, &mut scratch, &mut point);
            cycle_zs(&point, &triples, &mut zs);
            let fast = min_odd_cut(&zs, ONE) >= ONE;
            let exact_point: Vec<ExactRational> = point
                .iter()
                .map(|&v| ExactRational::new(BigInt::from(v), BigInt::one() << COORD_SHIFT))
                .collect();
            let slow = !matches!(
                refined.membership(&exact_point).unwrap(),
                Membership::Outside { .. }
            );
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn necklace_experiment_small_run() {
        let rep = necklace_experiment(3, 50_000, DEFAULT_SEED).unwrap();
        assert_eq!(rep.dimension, 21);
        assert_eq!(rep.rows.len(), 4);
        // 𝒬 row: every conditional sample is a hit.
        assert_eq!(rep.rows[0].hits, rep.samples);
        let (q, r, t, p) = (
            rep.rows[0].hits,
            rep.rows[1].hits,
            rep.rows[2].hits,
            rep.rows[3].hits,
        );
        assert!(p <= t && t <= q, "ordering P≤T≤Q: {p} {t} {q}");
        assert!(p <= r && r <= q, "ordering P≤R≤Q: {p} {r} {q}");
        // Exact 𝒬 root agrees with the closed route via count inversion.
        let g = Graph::necklace(3).unwrap();
        let vres = volume(&g, PolytopeKind::Q, Engine::IdealDp, CountCaps::default()).unwrap();
        assert!((rep.exact_q_root - vres.dth_root.unwrap()).abs() < 1e-12);
        // Determinism across worker counts, at small scale.
        let h1 = with_threads(1, || necklace_experiment(3, 50_000, DEFAULT_SEED).unwrap());
        let hits1: Vec<u64> = h1.rows.iter().map(|r| r.hits).collect();
        let hits: Vec<u64> = rep.rows.iter().map(|r| r.hits).collect();
        assert_eq!(hits1, hits);
    }
}
