//! Incidence posets and linear-extension counting.
//!
//! For a graph G with n vertices and m edges, the incidence poset has one
//! element per vertex (x_i) and one per edge (y_e), with y_e < x_i and
//! y_e < x_j for e = {i, j}. Its linear-extension count e(G) gives
//! vol 𝒪(G) = e(G)/d! and vol 𝒬(G) = e(G)/(2^m d!), d = n + m.
//!
//! Element numbering: 0..n are vertices (element i = vertex i+1), n..n+m are
//! edges in canonical order. A linear extension lists elements from bottom to
//! top, so every y_e precedes both endpoint x's.
//!
//! Three engines:
//! - brute force: literal enumeration of all d! permutations (oracle, d ≤ 12);
//! - ideal DP: dynamic program over the lattice of order ideals, states
//!   ranked perfectly by (vertex set, free-edge subset) so counts live in a
//!   flat array, iterated in a topological order;
//! - forest profiles: for forest G the Hasse diagram is a tree per component;
//!   Atkinson-style position profiles merge children in O(size²) per merge.
//!
//! The ideal DP doubles as an exact uniform sampler of linear extensions:
//! a single integer r ∈ [0, e(G)) is pushed down the lattice, splitting at
//! each state according to the children's counts.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{classify, Graph};
use crate::numbers::binomial;

/// Largest d for the brute-force engine (12! ≈ 4.8·10⁸ permutations).
pub const DEFAULT_BRUTE_CAP: usize = 12;
/// Default bound on the number of order ideals the DP may enumerate.
pub const DEFAULT_IDEAL_CAP: u64 = 50_000_000;
/// The exact-count fallback with big-integer states keeps memory in check.
const BIGINT_IDEAL_CAP: u64 = 16_000_000;
/// Vertex-mask tables are dense in 2^n, so the ideal DP requires n ≤ 22.
const IDEAL_MAX_VERTICES: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    /// Forest engine for forests, otherwise the ideal DP.
    Auto,
    BruteForce,
    IdealDp,
    Forest,
}

impl std::str::FromStr for Engine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Engine::Auto),
            "brute" | "bruteforce" | "brute-force" => Ok(Engine::BruteForce),
            "ideal" | "ideal-dp" => Ok(Engine::IdealDp),
            "forest" => Ok(Engine::Forest),
            other => Err(Error::parse(format!(
                "unknown engine '{other}' (known: auto, brute, ideal, forest)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CountCaps {
    pub brute_cap: usize,
    pub ideal_cap: u64,
}

impl Default for CountCaps {
    fn default() -> Self {
        CountCaps { brute_cap: DEFAULT_BRUTE_CAP, ideal_cap: DEFAULT_IDEAL_CAP }
    }
}

#[derive(Debug, Clone)]
pub struct IncidencePoset {
    n: usize,
    m: usize,
    /// Edge endpoints as 0-based vertex indices, canonical order.
    ends: Vec<(usize, usize)>,
    is_forest: bool,
}

impl IncidencePoset {
    pub fn new(g: &Graph) -> Self {
        let ends = g.edges().iter().map(|&(a, b)| (a - 1, b - 1)).collect();
        IncidencePoset { n: g.n(), m: g.m(), ends, is_forest: classify(g).is_forest }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d(&self) -> usize {
        self.n + self.m
    }

    pub fn is_forest(&self) -> bool {
        self.is_forest
    }

    pub fn element_name(&self, e: usize) -> String {
        if e < self.n {
            format!("x{}", e + 1)
        } else {
            let (a, b) = self.ends[e - self.n];
            format!("y{{{},{}}}", a + 1, b + 1)
        }
    }

    /// True iff `le` lists all d elements with every y_e before both
    /// endpoint x's.
    pub fn linear_extension_is_valid(&self, le: &[u16]) -> bool {
        let d = self.d();
        if le.len() != d {
            return false;
        }
        let mut pos = vec![usize::MAX; d];
        for (p, &e) in le.iter().enumerate() {
            if (e as usize) >= d || pos[e as usize] != usize::MAX {
                return false;
            }
            pos[e as usize] = p;
        }
        self.ends
            .iter()
            .enumerate()
            .all(|(k, &(a, b))| pos[self.n + k] < pos[a] && pos[self.n + k] < pos[b])
    }

    // ---- engine: brute force ------------------------------------------------

    /// Literal filter over all d! permutations via Heap's algorithm.
    pub fn count_le_bruteforce(&self, cap: usize) -> Result<BigUint> {
        let d = self.d();
        if d > cap {
            return Err(Error::size(
                format!("brute-force engine capped at d = {cap} (graph has d = {d})"),
                d as u64,
            ));
        }
        let check = |pos: &[u8]| -> bool {
            self.ends
                .iter()
                .enumerate()
                .all(|(k, &(a, b))| pos[self.n + k] < pos[a] && pos[self.n + k] < pos[b])
        };
        // perm[p] = element at position p; pos = inverse permutation.
        let mut perm: Vec<u8> = (0..d as u8).collect();
        let mut pos: Vec<u8> = (0..d as u8).collect();
        let mut count: u64 = check(&pos) as u64;
        let mut c = vec![0usize; d];
        let mut i = 1usize;
        while i < d {
            if c[i] < i {
                let j = if i % 2 == 0 { 0 } else { c[i] };
                perm.swap(j, i);
                pos[perm[j] as usize] = j as u8;
                pos[perm[i] as usize] = i as u8;
                count += check(&pos) as u64;
                c[i] += 1;
                i = 1;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        Ok(BigUint::from(count))
    }

    // ---- engine: ideal DP ----------------------------------------------------

    /// Exact count via the ideal-lattice DP; u128 state counts with a
    /// big-integer fallback if the total overflows.
    pub fn count_le_ideal_dp(&self, cap_ideals: u64) -> Result<BigUint> {
        let enumeration = IdealEnumeration::new(self, cap_ideals)?;
        match enumeration.counts_u128() {
            Ok(counts) => Ok(BigUint::from(counts[enumeration.full_id()])),
            Err(_) => {
                if enumeration.total > BIGINT_IDEAL_CAP {
                    return Err(Error::size(
                        format!(
                            "extension count exceeds u128 and the big-integer DP is capped \
                             at {BIGINT_IDEAL_CAP} ideals ({} needed)",
                            enumeration.total
                        ),
                        enumeration.total,
                    ));
                }
                let counts = enumeration.counts_biguint();
                Ok(counts[enumeration.full_id()].clone())
            }
        }
    }

    // ---- engine: forest profiles ----------------------------------------------

    /// Atkinson-style profile merge; requires G to be a forest (the Hasse
    /// diagram is then a forest of subdivided trees).
    pub fn count_le_forest(&self) -> Result<BigUint> {
        if !self.is_forest {
            return Err(Error::domain(
                "forest engine requires an acyclic graph".to_string(),
            ));
        }
        let d = self.d();
        // Hasse adjacency: y_{n+k} ~ its endpoint x's.
        let mut adj = vec![Vec::new(); d];
        for (k, &(a, b)) in self.ends.iter().enumerate() {
            adj[self.n + k].push(a);
            adj[self.n + k].push(b);
            adj[a].push(self.n + k);
            adj[b].push(self.n + k);
        }

        let mut seen = vec![false; d];
        let mut result = BigUint::one();
        let mut placed = 0u64;
        for root in 0..d {
            if seen[root] {
                continue;
            }
            // BFS order with parents; processing in reverse is post-order
            // enough: every child is processed before its parent.
            let mut order = vec![root];
            let mut parent = vec![usize::MAX; d];
            seen[root] = true;
            let mut head = 0;
            while head < order.len() {
                let v = order[head];
                head += 1;
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = v;
                        order.push(w);
                    }
                }
            }
            let mut profiles: Vec<Option<Vec<BigUint>>> = vec![None; d];
            for &v in order.iter().rev() {
                let mut prof = vec![BigUint::one()];
                for &c in &adj[v] {
                    if c != parent[v] {
                        let child = profiles[c].take().expect("child processed first");
                        // x's sit above y's: the child is above v when the
                        // child element is a vertex.
                        let child_above = c < self.n;
                        prof = merge_child(&prof, &child, child_above);
                    }
                }
                profiles[v] = Some(prof);
            }
            let prof = profiles[root].take().unwrap();
            let size = prof.len() as u64;
            let total: BigUint = prof.iter().sum();
            result *= total * binomial(placed + size, size);
            placed += size;
        }
        Ok(result)
    }

    /// Count with the chosen engine.
    pub fn count_le(&self, engine: Engine, caps: CountCaps) -> Result<BigUint> {
        match engine {
            Engine::Auto => {
                if self.is_forest {
                    self.count_le_forest()
                } else {
                    self.count_le_ideal_dp(caps.ideal_cap)
                }
            }
            Engine::BruteForce => self.count_le_bruteforce(caps.brute_cap),
            Engine::IdealDp => self.count_le_ideal_dp(caps.ideal_cap),
            Engine::Forest => self.count_le_forest(),
        }
    }
}

/// Count linear extensions of the incidence poset of `g`.
pub fn count_linear_extensions(g: &Graph, engine: Engine, caps: CountCaps) -> Result<BigUint> {
    IncidencePoset::new(g).count_le(engine, caps)
}

/// Merge a child profile into a parent-side profile (Atkinson).
///
/// `f[i-1]` counts subtree orders with the focal element at position i among
/// s elements; the child contributes t more. Positions before the focal
/// element take i−1 old and k−i child elements; the Hasse edge forces the
/// child's own element before (child below) or after (child above) the focal
/// element, counted by a prefix or suffix of the child's profile.
fn merge_child(f: &[BigUint], child: &[BigUint], child_above: bool) -> Vec<BigUint> {
    let s = f.len();
    let t = child.len();
    let mut pref = vec![BigUint::zero(); t + 1];
    for q in 1..=t {
        pref[q] = &pref[q - 1] + &child[q - 1];
    }
    let total = pref[t].clone();
    let mut out = vec![BigUint::zero(); s + t];
    for (i, fi) in f.iter().enumerate().map(|(i0, v)| (i0 + 1, v)) {
        if fi.is_zero() {
            continue;
        }
        for k in i..=i + t {
            let before = k - i; // child elements placed before the focal one
            let h = if child_above { &total - &pref[before] } else { pref[before].clone() };
            if h.is_zero() {
                continue;
            }
            out[k - 1] += fi
                * binomial((k - 1) as u64, (i - 1) as u64)
                * binomial((s + t - k) as u64, (s - i) as u64)
                * h;
        }
    }
    out
}

// ---- ideal enumeration and sampler ------------------------------------------

/// Perfect ranking of the order ideals of an incidence poset.
///
/// An ideal is (V', E') with every edge incident to V' forced into E'; it is
/// keyed by the vertex mask and the subset of "free" edges (both endpoints
/// outside V'). Ids are assigned v-mask-major, free-subset-minor, which is a
/// topological order: removing a maximal element always decreases the id.
pub struct IdealEnumeration {
    n: usize,
    all_edges: u64,
    /// Per vertex mask: edges with both endpoints outside the mask.
    free: Vec<u64>,
    /// Per vertex mask: first id of its group; base[2^n] = total.
    base: Vec<u64>,
    total: u64,
}

#[inline]
fn pext64(x: u64, mask: u64) -> u64 {
    #[cfg(target_arch = "x86_64")]
    if std::arch::is_x86_feature_detected!("bmi2") {
        // SAFETY: BMI2 presence checked at runtime.
        return unsafe { core::arch::x86_64::_pext_u64(x, mask) };
    }
    pext64_portable(x, mask)
}

#[inline]
fn pdep64(x: u64, mask: u64) -> u64 {
    #[cfg(target_arch = "x86_64")]
    if std::arch::is_x86_feature_detected!("bmi2") {
        // SAFETY: BMI2 presence checked at runtime.
        return unsafe { core::arch::x86_64::_pdep_u64(x, mask) };
    }
    pdep64_portable(x, mask)
}

fn pext64_portable(x: u64, mut mask: u64) -> u64 {
    let mut out = 0u64;
    let mut bit = 0u32;
    while mask != 0 {
        let low = mask & mask.wrapping_neg();
        if x & low != 0 {
            out |= 1 << bit;
        }
        mask ^= low;
        bit += 1;
    }
    out
}

fn pdep64_portable(x: u64, mut mask: u64) -> u64 {
    let mut out = 0u64;
    let mut bit = 0u32;
    while mask != 0 {
        let low = mask & mask.wrapping_neg();
        if x & (1 << bit) != 0 {
            out |= low;
        }
        mask ^= low;
        bit += 1;
    }
    out
}

impl IdealEnumeration {
    pub fn new(poset: &IncidencePoset, cap_ideals: u64) -> Result<Self> {
        let (n, m) = (poset.n, poset.m);
        if n > IDEAL_MAX_VERTICES {
            return Err(Error::size(
                format!("ideal DP supports at most {IDEAL_MAX_VERTICES} vertices (graph has {n})"),
                n as u64,
            ));
        }
        if m > 63 {
            return Err(Error::size(
                format!("ideal DP supports at most 63 edges (graph has {m})"),
                m as u64,
            ));
        }
        let all_edges = if m == 0 { 0 } else { (1u64 << m) - 1 };
        let mut inc = vec![0u64; n];
        for (k, &(a, b)) in poset.ends.iter().enumerate() {
            inc[a] |= 1 << k;
            inc[b] |= 1 << k;
        }
        let groups = 1usize << n;
        let mut free = vec![0u64; groups];
        let mut base = vec![0u64; groups + 1];
        free[0] = all_edges;
        for v in 0..groups {
            if v > 0 {
                let low = v.trailing_zeros() as usize;
                free[v] = free[v & (v - 1)] & !inc[low];
            }
            let group = 1u64 << free[v].count_ones();
            let next = base[v].checked_add(group).filter(|&t| t <= cap_ideals);
            base[v + 1] = next.ok_or_else(|| {
                Error::size(
                    format!("ideal DP needs more than the cap of {cap_ideals} states"),
                    cap_ideals,
                )
            })?;
        }
        let total = base[groups];
        Ok(IdealEnumeration { n, all_edges, free, base, total })
    }

    pub fn ideal_count(&self) -> u64 {
        self.total
    }

    fn full_vmask(&self) -> usize {
        (1usize << self.n) - 1
    }

    /// Id of the full ideal (everything present).
    fn full_id(&self) -> usize {
        // free[full] has no removable edges below a full vertex set only if
        // every edge is incident to something; isolated edges cannot exist,
        // so the full group is a singleton: its free mask is empty.
        let v = self.full_vmask();
        (self.base[v] + pext64(self.all_edges, self.free[v])) as usize
    }

    /// DP over ids in ascending (= topological) order, u128 counts.
    /// Errors if any count overflows u128.
    fn counts_u128(&self) -> Result<Vec<u128>> {
        let mut counts = vec![0u128; self.total as usize];
        let overflow = || {
            Error::size(
                "extension count exceeds u128 in the ideal DP".to_string(),
                u64::MAX,
            )
        };
        let mut id = 0usize;
        for v in 0..(1usize << self.n) {
            let fm = self.free[v];
            let nf = fm.count_ones();
            let forced = self.all_edges & !fm;
            for p in 0..(1u64 << nf) {
                if id == 0 {
                    counts[0] = 1; // empty ideal
                    id = 1;
                    continue;
                }
                let present = pdep64(p, fm) | forced;
                let mut acc: u128 = 0;
                let mut vbits = v;
                while vbits != 0 {
                    let i = vbits.trailing_zeros() as usize;
                    vbits &= vbits - 1;
                    let v2 = v & !(1usize << i);
                    let p2 = pext64(present, self.free[v2]);
                    let child = (self.base[v2] + p2) as usize;
                    acc = acc.checked_add(counts[child]).ok_or_else(overflow)?;
                }
                let mut ebits = present & fm;
                while ebits != 0 {
                    let k = ebits.trailing_zeros();
                    ebits &= ebits - 1;
                    let rank = (fm & ((1u64 << k) - 1)).count_ones();
                    let child = (self.base[v] + (p & !(1u64 << rank))) as usize;
                    acc = acc.checked_add(counts[child]).ok_or_else(overflow)?;
                }
                counts[id] = acc;
                id += 1;
            }
        }
        Ok(counts)
    }

    /// Same DP with arbitrary-precision counts.
    fn counts_biguint(&self) -> Vec<BigUint> {
        let mut counts = vec![BigUint::zero(); self.total as usize];
        let mut id = 0usize;
        for v in 0..(1usize << self.n) {
            let fm = self.free[v];
            let nf = fm.count_ones();
            let forced = self.all_edges & !fm;
            for p in 0..(1u64 << nf) {
                if id == 0 {
                    counts[0] = BigUint::one();
                    id = 1;
                    continue;
                }
                let present = pdep64(p, fm) | forced;
                let mut acc = BigUint::zero();
                let mut vbits = v;
                while vbits != 0 {
                    let i = vbits.trailing_zeros() as usize;
                    vbits &= vbits - 1;
                    let v2 = v & !(1usize << i);
                    let p2 = pext64(present, self.free[v2]);
                    acc += &counts[(self.base[v2] + p2) as usize];
                }
                let mut ebits = present & fm;
                while ebits != 0 {
                    let k = ebits.trailing_zeros();
                    ebits &= ebits - 1;
                    let rank = (fm & ((1u64 << k) - 1)).count_ones();
                    acc += &counts[(self.base[v] + (p & !(1u64 << rank))) as usize];
                }
                counts[id] = acc;
                id += 1;
            }
        }
        counts
    }
}

/// Exact uniform linear-extension sampler.
///
/// Holds the full ideal-DP count table; `sample_le` maps any r ∈ [0, e(G))
/// to a distinct linear extension, partitioning the range exactly, so a
/// uniform r yields a uniform extension.
pub struct SamplerTable {
    n: usize,
    d: usize,
    enumeration: IdealEnumeration,
    counts: Vec<u128>,
}

impl SamplerTable {
    pub fn build(poset: &IncidencePoset, cap_ideals: u64) -> Result<Self> {
        let enumeration = IdealEnumeration::new(poset, cap_ideals)?;
        let counts = enumeration.counts_u128().map_err(|_| {
            Error::size(
                "extension count exceeds u128; exact sampling unavailable for this graph"
                    .to_string(),
                u64::MAX,
            )
        })?;
        Ok(SamplerTable { n: poset.n, d: poset.d(), enumeration, counts })
    }

    /// e(G) as u128.
    pub fn total(&self) -> u128 {
        self.counts[self.enumeration.full_id()]
    }

    pub fn le_count(&self) -> BigUint {
        BigUint::from(self.total())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn ideal_count(&self) -> u64 {
        self.enumeration.ideal_count()
    }

    /// The r-th linear extension (bottom to top), r ∈ [0, e(G)).
    pub fn sample_le(&self, r: u128) -> Vec<u16> {
        let mut out = vec![0u16; self.d];
        self.sample_le_into(r, &mut out);
        out
    }

    /// Allocation-free variant; `out` must have length d.
    pub fn sample_le_into(&self, mut r: u128, out: &mut [u16]) {
        assert_eq!(out.len(), self.d);
        assert!(r < self.total(), "rank out of range");
        let en = &self.enumeration;
        let mut vmask = en.full_vmask();
        let mut present = en.all_edges;
        // Remove maximal elements one at a time; the element removed when s
        // remain is at position s (1-based) of the extension.
        for s in (1..=self.d).rev() {
            let mut chosen: Option<u16> = None;
            let mut vbits = vmask;
            while vbits != 0 {
                let i = vbits.trailing_zeros() as usize;
                vbits &= vbits - 1;
                let v2 = vmask & !(1usize << i);
                let p2 = pext64(present, en.free[v2]);
                let c = self.counts[(en.base[v2] + p2) as usize];
                if r < c {
                    chosen = Some(i as u16);
                    vmask = v2;
                    break;
                }
                r -= c;
            }
            if chosen.is_none() {
                let fm = en.free[vmask];
                let p = pext64(present, fm);
                let mut ebits = present & fm;
                while ebits != 0 {
                    let k = ebits.trailing_zeros();
                    ebits &= ebits - 1;
                    let rank = (fm & ((1u64 << k) - 1)).count_ones();
                    let c = self.counts[(en.base[vmask] + (p & !(1u64 << rank))) as usize];
                    if r < c {
                        chosen = Some((self.n + k as usize) as u16);
                        present &= !(1u64 << k);
                        break;
                    }
                    r -= c;
                }
            }
            out[s - 1] = chosen.expect("rank decomposition exhausted");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn count(g: &Graph, engine: Engine) -> BigUint {
        IncidencePoset::new(g).count_le(engine, CountCaps::default()).unwrap()
    }

    /// Known counts, cross-checkable from the closed forms:
    /// e = vol𝒬 · 2^m · d!.
    fn oracle_cases() -> Vec<(Graph, u64)> {
        vec![
            (Graph::path(1).unwrap(), 2),
            (Graph::path(2).unwrap(), 16),
            (Graph::path(3).unwrap(), 272),
            (Graph::star(3).unwrap(), 288),
            (Graph::star(4).unwrap(), 9216),
            (Graph::matching(2).unwrap(), 80),
            (Graph::cycle(3).unwrap(), 48),
            (Graph::cycle(4).unwrap(), 1088),
        ]
    }

    #[test]
    fn bruteforce_matches_oracles() {
        for (g, e) in oracle_cases() {
            assert_eq!(count(&g, Engine::BruteForce), BigUint::from(e), "{g}");
        }
        // Brute force refuses d > cap.
        let big = Graph::path(7).unwrap(); // d = 15
        assert!(IncidencePoset::new(&big)
            .count_le(Engine::BruteForce, CountCaps::default())
            .is_err());
    }

    #[test]
    fn ideal_dp_matches_oracles() {
        for (g, e) in oracle_cases() {
            assert_eq!(count(&g, Engine::IdealDp), BigUint::from(e), "{g}");
        }
    }

    #[test]
    fn forest_engine_matches_oracles() {
        for (g, e) in oracle_cases() {
            if classify(&g).is_forest {
                assert_eq!(count(&g, Engine::Forest), BigUint::from(e), "{g}");
            }
        }
        // Spider tree (not a path or star); d = 13, so check against the DP.
        let spider = Graph::new(7, [(1, 2), (2, 3), (1, 4), (4, 5), (1, 6), (6, 7)]).unwrap();
        assert_eq!(count(&spider, Engine::Forest), count(&spider, Engine::IdealDp));
        // Non-forest input is a domain error.
        assert!(IncidencePoset::new(&Graph::cycle(3).unwrap())
            .count_le(Engine::Forest, CountCaps::default())
            .is_err());
    }

    #[test]
    fn trivial_posets() {
        // Two isolated vertices: no relations, 2! orders.
        let g = Graph::new(2, []).unwrap();
        assert_eq!(count(&g, Engine::BruteForce), BigUint::from(2u32));
        assert_eq!(count(&g, Engine::IdealDp), BigUint::from(2u32));
        assert_eq!(count(&g, Engine::Forest), BigUint::from(2u32));
        // Empty graph: the empty extension.
        let g0 = Graph::new(0, []).unwrap();
        assert_eq!(count(&g0, Engine::Auto), BigUint::one());
        assert_eq!(count(&g0, Engine::BruteForce), BigUint::one());
    }

    #[test]
    fn auto_dispatch() {
        assert_eq!(count(&Graph::path(4).unwrap(), Engine::Auto), BigUint::from(7936u32));
        assert_eq!(count(&Graph::cycle(4).unwrap(), Engine::Auto), BigUint::from(1088u32));
    }

    #[test]
    fn sampler_partitions_rank_space() {
        for g in [Graph::path(2).unwrap(), Graph::cycle(3).unwrap(), Graph::matching(2).unwrap()] {
            let poset = IncidencePoset::new(&g);
            let table = SamplerTable::build(&poset, DEFAULT_IDEAL_CAP).unwrap();
            let total = table.total();
            assert_eq!(BigUint::from(total), count(&g, Engine::IdealDp), "{g}");
            let mut seen = HashSet::new();
            for r in 0..total {
                let le = table.sample_le(r);
                assert!(poset.linear_extension_is_valid(&le), "{g} r={r}");
                assert!(seen.insert(le), "{g} duplicate at r={r}");
            }
            assert_eq!(seen.len() as u128, total);
        }
    }

    #[test]
    fn sampler_rejects_oversize() {
        // Necklace(6) exceeds u128 extension counts.
        let poset = IncidencePoset::new(&Graph::necklace(6).unwrap());
        assert!(SamplerTable::build(&poset, DEFAULT_IDEAL_CAP).is_err());
    }

    #[test]
    fn bit_scatter_gather_paths_agree() {
        let mut s = 0x9e3779b97f4a7c15u64;
        for _ in 0..2000 {
            s = s.wrapping_mul(0xd1342543de82ef95).wrapping_add(1);
            let x = s;
            s = s.wrapping_mul(0xd1342543de82ef95).wrapping_add(1);
            let mask = s;
            assert_eq!(pext64(x, mask), pext64_portable(x, mask));
            assert_eq!(pdep64(x, mask), pdep64_portable(x, mask));
            assert_eq!(pdep64(pext64(x, mask), mask), x & mask);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn engines_agree_on_random_small_graphs(n in 1usize..=5, mask in 0u16..1024) {
            let pairs: Vec<(usize, usize)> =
                (1..=n).flat_map(|i| ((i + 1)..=n).map(move |j| (i, j))).collect();
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, &e)| e)
                .collect();
            let g = Graph::new(n, edges).unwrap();
            prop_assume!(g.dim() <= 9);
            let brute = count(&g, Engine::BruteForce);
            prop_assert_eq!(&brute, &count(&g, Engine::IdealDp));
            if classify(&g).is_forest {
                prop_assert_eq!(&brute, &count(&g, Engine::Forest));
            }
        }
    }
}
