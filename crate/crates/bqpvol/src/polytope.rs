//! H-representations of 𝒪(G) and 𝒬(G), odd-cycle inequalities, refinements,
//! exact membership tests, and the simplex W cut off by an odd-cycle row.
//!
//! Coordinates: x_1..x_n then y_e in canonical edge order (d = n + m).
//! Rows are sparse `Σ a_c z_c ≤ b` with exact rational data.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{classify, cycle_edges, enumerate_cycles_cactus, Graph, GraphTag};
use crate::numbers::{factorial, rat, ExactRational};

/// Longest cycle the refinement builders expand into odd-subset rows
/// (2^{len−1} rows per cycle).
pub const MAX_OC_CYCLE_LEN: usize = 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowTag {
    /// −y_e ≤ 0
    F0 { edge: (usize, usize) },
    /// y_e − x_i ≤ 0 (i the smaller endpoint)
    F1 { edge: (usize, usize) },
    /// y_e − x_j ≤ 0 (j the larger endpoint)
    F2 { edge: (usize, usize) },
    /// x_i + x_j − y_e ≤ 1
    F3 { edge: (usize, usize) },
    /// −z_c ≤ 0
    BoxLo { coord: usize },
    /// z_c ≤ 1
    BoxHi { coord: usize },
    /// Odd-cycle inequality OC(A) on a cycle (F4 class).
    OddCycle { cycle: Vec<usize>, a: Vec<(usize, usize)> },
}

impl std::fmt::Display for RowTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RowTag::F0 { edge } => write!(f, "F0({},{})", edge.0, edge.1),
            RowTag::F1 { edge } => write!(f, "F1({},{})", edge.0, edge.1),
            RowTag::F2 { edge } => write!(f, "F2({},{})", edge.0, edge.1),
            RowTag::F3 { edge } => write!(f, "F3({},{})", edge.0, edge.1),
            RowTag::BoxLo { coord } => write!(f, "lo(z{})", coord + 1),
            RowTag::BoxHi { coord } => write!(f, "hi(z{})", coord + 1),
            RowTag::OddCycle { cycle, a } => {
                let edges: Vec<String> = a.iter().map(|(u, v)| format!("({u},{v})")).collect();
                write!(f, "OC[cycle {:?}, A = {{{}}}]", cycle, edges.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Row {
    /// Sparse coefficients (coordinate index, value), sorted by coordinate.
    pub coeffs: Vec<(usize, ExactRational)>,
    pub rhs: ExactRational,
    pub tag: RowTag,
}

impl Row {
    fn new(mut coeffs: Vec<(usize, ExactRational)>, rhs: ExactRational, tag: RowTag) -> Self {
        coeffs.retain(|(_, a)| !a.is_zero());
        coeffs.sort_by_key(|&(c, _)| c);
        Row { coeffs, rhs, tag }
    }

    /// Left-hand side Σ a_c z_c at a point.
    pub fn eval(&self, point: &[ExactRational]) -> ExactRational {
        let mut acc = ExactRational::zero();
        for (c, a) in &self.coeffs {
            acc += a * &point[*c];
        }
        acc
    }

    /// lhs − rhs; positive means violated.
    pub fn violation(&self, point: &[ExactRational]) -> ExactRational {
        self.eval(point) - &self.rhs
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// Strictly inside every row.
    Inside,
    /// On the boundary: the listed rows are tight, none violated.
    Boundary { tight: Vec<usize> },
    /// The listed rows are violated.
    Outside { violated: Vec<usize> },
}

#[derive(Debug, Clone)]
pub struct HalfspaceSystem {
    pub dimension: usize,
    pub rows: Vec<Row>,
}

impl HalfspaceSystem {
    /// Exact membership with the offending/tight row indices.
    pub fn membership(&self, point: &[ExactRational]) -> Result<Membership> {
        if point.len() != self.dimension {
            return Err(Error::domain(format!(
                "point has {} coordinates, system has dimension {}",
                point.len(),
                self.dimension
            )));
        }
        let mut tight = Vec::new();
        let mut violated = Vec::new();
        for (idx, row) in self.rows.iter().enumerate() {
            let v = row.violation(point);
            if v.is_zero() {
                tight.push(idx);
            } else if v.is_positive() {
                violated.push(idx);
            }
        }
        Ok(if !violated.is_empty() {
            Membership::Outside { violated }
        } else if !tight.is_empty() {
            Membership::Boundary { tight }
        } else {
            Membership::Inside
        })
    }

    pub fn contains(&self, point: &[ExactRational]) -> Result<bool> {
        Ok(!matches!(self.membership(point)?, Membership::Outside { .. }))
    }

    /// Plain-text rows: "a_1 a_2 ... a_d <= b", one per line, dense exact
    /// rationals, preceded by a "dimension rows" header line.
    pub fn to_hrep_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{} {}\n", self.dimension, self.rows.len()));
        for row in &self.rows {
            out.push_str(&hrep_row_line(row, self.dimension));
            out.push('\n');
        }
        out
    }
}

/// One dense text row "a_1 … a_d <= b" with exact rationals.
pub fn hrep_row_line(row: &Row, dimension: usize) -> String {
    let mut dense = vec![ExactRational::zero(); dimension];
    for (c, a) in &row.coeffs {
        dense[*c] = a.clone();
    }
    let cells: Vec<String> = dense.iter().map(|v| v.to_string()).collect();
    format!("{} <= {}", cells.join(" "), row.rhs)
}

fn one() -> ExactRational {
    ExactRational::one()
}

fn edge_rows(g: &Graph, with_f3: bool) -> Vec<Row> {
    let n = g.n();
    let mut rows = Vec::new();
    for (k, &(i, j)) in g.edges().iter().enumerate() {
        let (xi, xj, ye) = (i - 1, j - 1, n + k);
        rows.push(Row::new(
            vec![(ye, -one())],
            ExactRational::zero(),
            RowTag::F0 { edge: (i, j) },
        ));
        rows.push(Row::new(
            vec![(ye, one()), (xi, -one())],
            ExactRational::zero(),
            RowTag::F1 { edge: (i, j) },
        ));
        rows.push(Row::new(
            vec![(ye, one()), (xj, -one())],
            ExactRational::zero(),
            RowTag::F2 { edge: (i, j) },
        ));
        if with_f3 {
            rows.push(Row::new(
                vec![(xi, one()), (xj, one()), (ye, -one())],
                one(),
                RowTag::F3 { edge: (i, j) },
            ));
        }
    }
    rows
}

fn box_rows(coords: std::ops::Range<usize>) -> Vec<Row> {
    coords
        .flat_map(|c| {
            [
                Row::new(vec![(c, -one())], ExactRational::zero(), RowTag::BoxLo { coord: c }),
                Row::new(vec![(c, one())], one(), RowTag::BoxHi { coord: c }),
            ]
        })
        .collect()
}

/// 𝒬(G): F0–F3 per edge plus the x-box; 4m + 2n rows.
pub fn build_q(g: &Graph) -> HalfspaceSystem {
    let mut rows = edge_rows(g, true);
    rows.extend(box_rows(0..g.n()));
    HalfspaceSystem { dimension: g.dim(), rows }
}

/// 𝒪(G): F0–F2 per edge plus the full box; 3m + 2d rows.
pub fn build_o(g: &Graph) -> HalfspaceSystem {
    let mut rows = edge_rows(g, false);
    rows.extend(box_rows(0..g.dim()));
    HalfspaceSystem { dimension: g.dim(), rows }
}

/// The odd-cycle inequality OC(A) for a cycle (vertex list, cyclic order)
/// and odd A ⊆ E(C):
///
///   Σ_{v: both cycle edges in A} x_v − Σ_{v: neither in A} x_v
///     + Σ_{E(C)∖A} y − Σ_A y ≤ (|A|−1)/2.
///
/// Support is restricted to the cycle's own coordinates.
pub fn odd_cycle_inequality(g: &Graph, cycle: &[usize], a: &[(usize, usize)]) -> Result<Row> {
    let ce = cycle_edges(cycle);
    let a_norm: Vec<(usize, usize)> = a.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    for e in &a_norm {
        if !ce.contains(e) {
            return Err(Error::domain(format!(
                "A-edge ({},{}) is not on the cycle {:?}",
                e.0, e.1, cycle
            )));
        }
    }
    if a_norm.len() % 2 == 0 {
        return Err(Error::domain(format!(
            "odd-cycle inequality needs |A| odd (got {})",
            a_norm.len()
        )));
    }
    let n = g.n();
    let mut coeffs: Vec<(usize, ExactRational)> = Vec::new();
    for &v in cycle {
        let k = ce
            .iter()
            .filter(|e| (e.0 == v || e.1 == v) && a_norm.contains(e))
            .count();
        match k {
            2 => coeffs.push((v - 1, one())),
            0 => coeffs.push((v - 1, -one())),
            _ => {}
        }
    }
    for e in &ce {
        let idx = g
            .edge_index(e.0, e.1)
            .ok_or_else(|| Error::domain(format!("cycle edge ({},{}) not in graph", e.0, e.1)))?;
        let sign = if a_norm.contains(e) { -one() } else { one() };
        coeffs.push((n + idx, sign));
    }
    let rhs = rat((a_norm.len() as i64 - 1) / 2, 1);
    Ok(Row::new(coeffs, rhs, RowTag::OddCycle { cycle: cycle.to_vec(), a: a_norm }))
}

/// The fractional vertex v⁰ of 𝒬(G) cut off by OC(A): all x at 1/2, y at 1/2
/// on E(C)∖A, y = 0 on A and off the cycle. Violates OC(A) by exactly 1/2.
pub fn cut_vertex_v0(g: &Graph, cycle: &[usize], a: &[(usize, usize)]) -> Result<Vec<ExactRational>> {
    let ce = cycle_edges(cycle);
    let a_norm: Vec<(usize, usize)> = a.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    let half = rat(1, 2);
    let mut point = vec![ExactRational::zero(); g.dim()];
    for i in 0..g.n() {
        point[i] = half.clone();
    }
    for (k, e) in g.edges().iter().enumerate() {
        point[g.n() + k] = if a_norm.contains(e) {
            ExactRational::zero()
        } else if ce.contains(e) {
            half.clone()
        } else {
            // Off-cycle edges take the neutral value: z_e = 1/2, so no
            // inequality on any other cycle is disturbed.
            rat(1, 4)
        };
    }
    Ok(point)
}

/// All odd-cardinality subsets of `edges`, ascending by bitmask value.
pub fn odd_subsets(edges: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    let m = edges.len();
    let mut out = Vec::with_capacity(1 << (m.saturating_sub(1)));
    for mask in 0u32..(1 << m) {
        if mask.count_ones() % 2 == 1 {
            out.push(
                (0..m)
                    .filter(|k| mask & (1 << k) != 0)
                    .map(|k| edges[k])
                    .collect(),
            );
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RefinementKind {
    /// 𝒬 plus the odd-cycle rows of the longest cycle (ℛ).
    BigCycle,
    /// 𝒬 plus the odd-cycle rows of every triangle (𝒯).
    Triangles,
    /// 𝒬 plus the odd-cycle rows of every cycle; for a cactus this is 𝒫.
    AllCycles,
}

impl std::str::FromStr for RefinementKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" | "r" | "big-cycle" => Ok(RefinementKind::BigCycle),
            "T" | "t" | "triangles" => Ok(RefinementKind::Triangles),
            "P" | "p" | "all-cycles" => Ok(RefinementKind::AllCycles),
            other => Err(Error::parse(format!(
                "unknown refinement '{other}' (known: R, T, P)"
            ))),
        }
    }
}

/// 𝒬(G) plus odd-cycle rows for the selected cycles of a cactus graph.
pub fn build_refinement(g: &Graph, kind: RefinementKind) -> Result<HalfspaceSystem> {
    let cycles = enumerate_cycles_cactus(g)?;
    let selected: Vec<&Vec<usize>> = match kind {
        RefinementKind::BigCycle => {
            // Longest cycle; ties resolved by the canonical cycle order.
            cycles.iter().max_by_key(|c| c.len()).into_iter().collect()
        }
        RefinementKind::Triangles => cycles.iter().filter(|c| c.len() == 3).collect(),
        RefinementKind::AllCycles => cycles.iter().collect(),
    };
    let mut sys = build_q(g);
    for cycle in selected {
        if cycle.len() > MAX_OC_CYCLE_LEN {
            return Err(Error::size(
                format!(
                    "cycle of length {} exceeds the odd-subset expansion cap {MAX_OC_CYCLE_LEN}",
                    cycle.len()
                ),
                cycle.len() as u64,
            ));
        }
        for a in odd_subsets(&cycle_edges(cycle)) {
            sys.rows.push(odd_cycle_inequality(g, cycle, &a)?);
        }
    }
    Ok(sys)
}

// ---- exact linear algebra -----------------------------------------------------

/// Solve A·x = b by exact Gaussian elimination (A square, nonsingular).
pub fn solve_linear(
    mut a: Vec<Vec<ExactRational>>,
    mut b: Vec<ExactRational>,
) -> Result<Vec<ExactRational>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::domain("singular linear system".to_string()))?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = &a[r][col] / &a[col][col];
                for c in col..n {
                    let t = &factor * &a[col][c];
                    a[r][c] -= t;
                }
                let t = &factor * &b[col];
                b[r] -= t;
            }
        }
    }
    Ok((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Exact determinant by fraction-preserving Gaussian elimination.
pub fn determinant(mut a: Vec<Vec<ExactRational>>) -> ExactRational {
    let n = a.len();
    let mut det = ExactRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return ExactRational::zero();
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det *= a[col][col].clone();
        for r in (col + 1)..n {
            if !a[r][col].is_zero() {
                let factor = &a[r][col] / &a[col][col];
                for c in col..n {
                    let t = &factor * &a[col][c];
                    a[r][c] -= t;
                }
            }
        }
    }
    det
}

// ---- the simplex W -----------------------------------------------------------

/// The region OC(A) cuts off 𝒬(C_m): a 2m-simplex (Lemma on the cut-off
/// simplex). Vertices: v⁰ plus, per cycle edge, the two 0/1 points obtained
/// by relaxing one of the edge's two tight facet rows and tightening OC(A).
#[derive(Debug, Clone, Serialize)]
pub struct SimplexW {
    pub a: Vec<(usize, usize)>,
    /// v⁰ first, then the pair (relax first row, relax second row) per edge
    /// in canonical order. Coordinates are exact rationals.
    #[serde(skip)]
    pub vertices: Vec<Vec<ExactRational>>,
    /// |det M| with rows v − v⁰ (expected 1/2).
    pub det_abs: String,
    /// vol W = |det M|/(2m)!.
    pub volume: String,
    #[serde(skip)]
    pub det_abs_exact: ExactRational,
    #[serde(skip)]
    pub volume_exact: ExactRational,
}

/// Build W for the cycle graph `g` (which must be a cycle) and odd A.
pub fn simplex_w(g: &Graph, a: &[(usize, usize)]) -> Result<SimplexW> {
    let class = classify(g);
    let m = match class.tag {
        GraphTag::Cycle(m) => m,
        ref t => return Err(Error::domain(format!("simplex W needs a cycle graph, got {t}"))),
    };
    let cycles = enumerate_cycles_cactus(g)?;
    let cycle = &cycles[0];
    let ce = cycle_edges(cycle);
    let a_norm: Vec<(usize, usize)> = a.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    if a_norm.len() % 2 == 0 || !a_norm.iter().all(|e| ce.contains(e)) {
        return Err(Error::domain("A must be an odd subset of the cycle's edges".to_string()));
    }
    let d = g.dim();
    let oc = odd_cycle_inequality(g, cycle, &a_norm)?;
    let v0 = cut_vertex_v0(g, cycle, &a_norm)?;

    // Tight rows per edge: (F0, F3) on A, (F1, F2) off A.
    let q = build_q(g);
    let tight_pair = |edge: (usize, usize)| -> (usize, usize) {
        let in_a = a_norm.contains(&edge);
        let mut found = (usize::MAX, usize::MAX);
        for (idx, row) in q.rows.iter().enumerate() {
            match row.tag {
                RowTag::F0 { edge: e } if in_a && e == edge => found.0 = idx,
                RowTag::F3 { edge: e } if in_a && e == edge => found.1 = idx,
                RowTag::F1 { edge: e } if !in_a && e == edge => found.0 = idx,
                RowTag::F2 { edge: e } if !in_a && e == edge => found.1 = idx,
                _ => {}
            }
        }
        found
    };

    let dense = |row: &Row| -> Vec<ExactRational> {
        let mut out = vec![ExactRational::zero(); d];
        for (c, v) in &row.coeffs {
            out[*c] = v.clone();
        }
        out
    };

    let mut vertices = vec![v0.clone()];
    for &edge in g.edges() {
        let (r_first, r_second) = tight_pair(edge);
        for relax in [r_first, r_second] {
            let mut mat = Vec::with_capacity(d);
            let mut rhs = Vec::with_capacity(d);
            for &other in g.edges() {
                let (p, q2) = tight_pair(other);
                for keep in [p, q2] {
                    if other == edge && keep == relax {
                        continue;
                    }
                    mat.push(dense(&q.rows[keep]));
                    rhs.push(q.rows[keep].rhs.clone());
                }
            }
            mat.push(dense(&oc));
            rhs.push(oc.rhs.clone());
            vertices.push(solve_linear(mat, rhs)?);
        }
    }

    // M rows: v − v⁰ for the 2m non-v⁰ vertices.
    let mat: Vec<Vec<ExactRational>> = vertices[1..]
        .iter()
        .map(|v| (0..d).map(|c| &v[c] - &v0[c]).collect())
        .collect();
    let det = determinant(mat);
    let det_abs = det.abs();
    let volume = &det_abs / ExactRational::from_integer(factorial(2 * m as u64).into());
    Ok(SimplexW {
        a: a_norm,
        vertices,
        det_abs: det_abs.to_string(),
        volume: volume.to_string(),
        det_abs_exact: det_abs,
        volume_exact: volume,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::rat_int;

    fn pt(vals: &[(i64, i64)]) -> Vec<ExactRational> {
        vals.iter().map(|&(n, d)| rat(n, d)).collect()
    }

    #[test]
    fn row_counts_and_membership() {
        let g = Graph::cycle(3).unwrap();
        let q = build_q(&g);
        assert_eq!(q.rows.len(), 4 * 3 + 2 * 3);
        let o = build_o(&g);
        assert_eq!(o.rows.len(), 3 * 3 + 2 * 6);

        // Strict interior point of 𝒬(C_3).
        let inside = pt(&[(1, 2), (1, 2), (1, 2), (1, 4), (1, 4), (1, 4)]);
        assert_eq!(q.membership(&inside).unwrap(), Membership::Inside);
        // Integral vertex: on the boundary.
        let vert = pt(&[(1, 1), (1, 1), (1, 1), (1, 1), (1, 1), (1, 1)]);
        assert!(matches!(q.membership(&vert).unwrap(), Membership::Boundary { .. }));
        // x = (1,1,1), y = 0 violates all three F3 rows.
        let out = pt(&[(1, 1), (1, 1), (1, 1), (0, 1), (0, 1), (0, 1)]);
        match q.membership(&out).unwrap() {
            Membership::Outside { violated } => {
                let tags: Vec<&RowTag> = violated.iter().map(|&i| &q.rows[i].tag).collect();
                assert_eq!(tags.len(), 3);
                assert!(tags.iter().all(|t| matches!(t, RowTag::F3 { .. })));
            }
            other => panic!("expected Outside, got {other:?}"),
        }
        // Dimension mismatch is an error.
        assert!(q.membership(&pt(&[(1, 2)])).is_err());
    }

    #[test]
    fn odd_cycle_inequality_shapes() {
        let g = Graph::cycle(3).unwrap();
        let cycle = vec![1, 2, 3];
        // A = all three edges: x_1+x_2+x_3 − y_{12} − y_{13} − y_{23} ≤ 1.
        let all = vec![(1, 2), (1, 3), (2, 3)];
        let row = odd_cycle_inequality(&g, &cycle, &all).unwrap();
        assert_eq!(row.rhs, rat_int(1));
        let lhs = row.eval(&pt(&[(1, 1), (1, 1), (1, 1), (1, 1), (1, 1), (1, 1)]));
        assert_eq!(lhs, rat_int(0)); // 3 − 3
        // A = {(1,2)}: y_{13} + y_{23} − x_3 − y_{12} ≤ 0.
        let row = odd_cycle_inequality(&g, &cycle, &[(1, 2)]).unwrap();
        assert_eq!(row.rhs, rat_int(0));
        assert_eq!(
            row.coeffs,
            vec![
                (2, -rat_int(1)), // x_3
                (3, -rat_int(1)), // y_{12}
                (4, rat_int(1)),  // y_{13}
                (5, rat_int(1)),  // y_{23}
            ]
        );
        // Even |A| rejected; off-cycle A rejected.
        assert!(odd_cycle_inequality(&g, &cycle, &[(1, 2), (1, 3)]).is_err());
        let g4 = Graph::cycle(4).unwrap();
        assert!(odd_cycle_inequality(&g4, &[1, 2, 3, 4], &[(1, 3)]).is_err());
    }

    #[test]
    fn v0_is_q_feasible_and_violates_oc_by_half() {
        for m in 3..=6usize {
            let g = Graph::cycle(m).unwrap();
            let cycles = enumerate_cycles_cactus(&g).unwrap();
            let q = build_q(&g);
            for a in odd_subsets(&cycle_edges(&cycles[0])) {
                let v0 = cut_vertex_v0(&g, &cycles[0], &a).unwrap();
                assert!(q.contains(&v0).unwrap(), "m={m} A={a:?}");
                let oc = odd_cycle_inequality(&g, &cycles[0], &a).unwrap();
                assert_eq!(oc.violation(&v0), rat(1, 2), "m={m} A={a:?}");
                // All other odd subsets are satisfied at v⁰ (disjointness).
                for b in odd_subsets(&cycle_edges(&cycles[0])) {
                    if b != a {
                        let other = odd_cycle_inequality(&g, &cycles[0], &b).unwrap();
                        assert!(other.violation(&v0).is_negative(), "m={m} A={a:?} B={b:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn refinement_row_counts() {
        let g = Graph::necklace(4).unwrap();
        let base = build_q(&g).rows.len();
        assert_eq!(base, 4 * 16 + 2 * 12);
        let r = build_refinement(&g, RefinementKind::BigCycle).unwrap();
        assert_eq!(r.rows.len() - base, 8); // odd subsets of the 4-ring
        let t = build_refinement(&g, RefinementKind::Triangles).unwrap();
        assert_eq!(t.rows.len() - base, 16); // 4 triangles × 4
        let p = build_refinement(&g, RefinementKind::AllCycles).unwrap();
        assert_eq!(p.rows.len() - base, 24);

        let g12 = Graph::necklace(12).unwrap();
        let q12 = build_q(&g12).rows.len();
        let p12 = build_refinement(&g12, RefinementKind::AllCycles).unwrap();
        assert_eq!(p12.rows.len() - q12, 2048 + 48); // 2^11 ring rows + 12×4

        // Refinements require a cactus.
        assert!(build_refinement(&Graph::complete(4).unwrap(), RefinementKind::AllCycles).is_err());
    }

    #[test]
    fn exact_gaussian_helpers() {
        let a = vec![
            vec![rat_int(2), rat_int(1)],
            vec![rat_int(1), rat_int(3)],
        ];
        let x = solve_linear(a.clone(), vec![rat_int(5), rat_int(10)]).unwrap();
        assert_eq!(x, vec![rat_int(1), rat_int(3)]);
        assert_eq!(determinant(a), rat_int(5));
        let singular = vec![
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(2), rat_int(4)],
        ];
        assert_eq!(determinant(singular.clone()), rat_int(0));
        assert!(solve_linear(singular, vec![rat_int(1), rat_int(1)]).is_err());
    }

    #[test]
    fn simplex_w_matches_lemma() {
        // Every odd A of C_3 and C_4: |det| = 1/2, volume = 1/(2(2m)!),
        // non-v⁰ vertices are 0/1 and 𝒬-feasible, and the local patterns at
        // each relaxed edge match the published vertex tables.
        for m in [3usize, 4] {
            let g = Graph::cycle(m).unwrap();
            let q = build_q(&g);
            let cycles = enumerate_cycles_cactus(&g).unwrap();
            for a in odd_subsets(&cycle_edges(&cycles[0])) {
                let w = simplex_w(&g, &a).unwrap();
                assert_eq!(w.det_abs_exact, rat(1, 2), "m={m} A={a:?}");
                assert_eq!(
                    w.volume_exact,
                    ExactRational::new(1.into(), (factorial(2 * m as u64) * 2u32).into()),
                );
                assert_eq!(w.vertices.len(), 2 * m + 1);
                for (vi, v) in w.vertices.iter().enumerate().skip(1) {
                    assert!(
                        v.iter().all(|c| c.is_zero() || c.is_one()),
                        "m={m} A={a:?} vertex {vi} = {v:?}"
                    );
                    assert!(q.contains(v).unwrap());
                    // Vertex pairs per edge: local triple (x_i, y_e, x_j)
                    // ∈ {(1,1,1),(0,0,0)} on A, {(1,0,0),(0,0,1)} off A.
                    let edge = g.edges()[(vi - 1) / 2];
                    let k = g.edge_index(edge.0, edge.1).unwrap();
                    let triple = (
                        v[edge.0 - 1].clone(),
                        v[g.n() + k].clone(),
                        v[edge.1 - 1].clone(),
                    );
                    let t = (
                        triple.0 == rat_int(1),
                        triple.1 == rat_int(1),
                        triple.2 == rat_int(1),
                    );
                    if a.contains(&edge) {
                        assert!(t == (true, true, true) || t == (false, false, false));
                    } else {
                        assert!(t == (true, false, false) || t == (false, false, true));
                    }
                }
                // The two vertices of each pair differ (they relax different
                // rows), and all non-v⁰ vertices are OC(A)-tight.
                let oc = odd_cycle_inequality(&g, &cycles[0], &a).unwrap();
                for v in &w.vertices[1..] {
                    assert_eq!(oc.violation(v), rat_int(0));
                }
            }
        }
    }

    #[test]
    fn hrep_text_roundtrippable_shape() {
        let g = Graph::path(1).unwrap();
        let text = build_q(&g).to_hrep_text();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("3 8")); // 4m + 2n = 8 rows
        // F0 of the single edge: 0 0 -1 <= 0.
        assert_eq!(lines.next(), Some("0 0 -1 <= 0"));
        assert_eq!(text.lines().count(), 9);
    }
}
