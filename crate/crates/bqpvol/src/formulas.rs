//! Exact volumes of 𝒪(G), 𝒬(G), 𝒫(G) and asymptotic root sequences.
//!
//! Routes:
//! - linear-extension route (any graph): vol 𝒪 = e(G)/d!, vol 𝒬 = e(G)/(2^m d!);
//! - closed forms per connected component for the catalogued families
//!   (paths, stars, cycles, complete graphs; matchings are unions of K_2);
//! - 𝒫(G): equals 𝒬(G) on forests; on a cycle C_m it is
//!   vol 𝒬(C_m) − 2^{m−2}/(2m)!; multiplicative over components.
//!
//! All volumes are exact rationals; d-th roots are reported as f64.

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{classify, Graph, GraphTag};
use crate::numbers::{
    dth_root_f64, euler_numbers, factorial, rat, rational_to_f64, ExactRational,
};
use crate::poset::{count_linear_extensions, CountCaps, Engine};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolytopeKind {
    /// Relaxation without the x_i + x_j ≤ 1 + y_e facets.
    O,
    /// The boolean-quadric relaxation.
    Q,
    /// Integer hull.
    P,
    /// Set difference 𝒬 ∖ 𝒫 (volume only).
    QMinusP,
}

impl std::fmt::Display for PolytopeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PolytopeKind::O => write!(f, "O"),
            PolytopeKind::Q => write!(f, "Q"),
            PolytopeKind::P => write!(f, "P"),
            PolytopeKind::QMinusP => write!(f, "Q-minus-P"),
        }
    }
}

impl std::str::FromStr for PolytopeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "O" | "o" => Ok(PolytopeKind::O),
            "Q" | "q" => Ok(PolytopeKind::Q),
            "P" | "p" => Ok(PolytopeKind::P),
            "Q-minus-P" | "q-minus-p" | "QminusP" => Ok(PolytopeKind::QMinusP),
            other => Err(Error::parse(format!(
                "unknown polytope '{other}' (known: O, Q, P, Q-minus-P)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VolumeResult {
    pub polytope: PolytopeKind,
    pub dimension: usize,
    /// Exact value as a "numerator/denominator" string in lowest terms.
    pub value: String,
    #[serde(skip)]
    pub exact: ExactRational,
    pub value_f64: f64,
    /// d-th root of the volume (None in dimension 0).
    pub dth_root: Option<f64>,
    pub method: String,
}

impl VolumeResult {
    fn new(kind: PolytopeKind, d: usize, value: ExactRational, method: String) -> Result<Self> {
        let root = if d == 0 { None } else { Some(dth_root_f64(&value, d as u64)?) };
        Ok(VolumeResult {
            polytope: kind,
            dimension: d,
            value: value.to_string(),
            value_f64: rational_to_f64(&value),
            exact: value,
            dth_root: root,
            method,
        })
    }
}

// ---- linear-extension route --------------------------------------------------

/// vol 𝒪(G) = e(G)/d!.
pub fn vol_o_from_lecount(g: &Graph, engine: Engine, caps: CountCaps) -> Result<ExactRational> {
    let e = count_linear_extensions(g, engine, caps)?;
    let d = g.dim() as u64;
    Ok(ExactRational::new(e.into(), factorial(d).into()))
}

/// vol 𝒬(G) = vol 𝒪(G)/2^m = e(G)/(2^m d!).
pub fn vol_q_from_lecount(g: &Graph, engine: Engine, caps: CountCaps) -> Result<ExactRational> {
    let e = count_linear_extensions(g, engine, caps)?;
    let den = factorial(g.dim() as u64) << g.m();
    Ok(ExactRational::new(e.into(), den.into()))
}

// ---- closed forms --------------------------------------------------------------

/// vol 𝒬 for one catalogued connected component, by tag.
fn component_q_closed_form(tag: &GraphTag) -> Option<ExactRational> {
    let a = euler_number_table();
    match *tag {
        GraphTag::Empty => Some(ExactRational::one()),
        GraphTag::Path(m) => {
            // A_{2m+1} / (2^m (2m+1)!)
            let num = a(2 * m as u64 + 1);
            let den = factorial(2 * m as u64 + 1) << m;
            Some(ExactRational::new(num.into(), den.into()))
        }
        GraphTag::Star(m) => {
            // (m!)² / (2m+1)!
            let f = factorial(m as u64);
            Some(ExactRational::new((&f * &f).into(), factorial(2 * m as u64 + 1).into()))
        }
        GraphTag::Cycle(m) => {
            // m·A_{2m−1} / (2^m (2m)!)
            let num = a(2 * m as u64 - 1) * BigUint::from(m);
            let den = factorial(2 * m as u64) << m;
            Some(ExactRational::new(num.into(), den.into()))
        }
        GraphTag::CompleteGraph(n) => {
            // 2^{2n−d} n!/(2n)!, d = n + n(n−1)/2; here d > 2n for n ≥ 4,
            // so this is n!/(2^{d−2n} (2n)!).
            let d = n + n * (n - 1) / 2;
            let num = factorial(n as u64);
            let den = factorial(2 * n as u64) << (d - 2 * n);
            Some(ExactRational::new(num.into(), den.into()))
        }
        _ => None,
    }
}

/// Euler numbers on demand (the table is cheap to rebuild at these sizes).
fn euler_number_table() -> impl Fn(u64) -> BigUint {
    |k: u64| euler_numbers(k as usize).a(k as usize).clone()
}

/// vol 𝒫 for one connected component, if exactly representable:
/// forests give 𝒫 = 𝒬; a cycle loses 2^{m−2}/(2m)!.
fn component_p_closed_form(tag: &GraphTag, q_value: &ExactRational) -> Result<ExactRational> {
    match *tag {
        GraphTag::Empty | GraphTag::Path(_) | GraphTag::Star(_) | GraphTag::Forest => {
            Ok(q_value.clone())
        }
        GraphTag::Cycle(m) => {
            let cut = ExactRational::new(
                (BigUint::one() << (m - 2)).into(),
                factorial(2 * m as u64).into(),
            );
            Ok(q_value - cut)
        }
        ref other => Err(Error::capability(format!(
            "no exact integer-hull volume for a {other} component; use Monte Carlo"
        ))),
    }
}

/// Per-component tags of a graph (connected pieces classified individually).
fn component_tags(g: &Graph) -> Result<Vec<(Graph, GraphTag)>> {
    classify(g)
        .components
        .iter()
        .map(|c| {
            let sub = g.induced(c)?;
            let tag = classify(&sub).tag;
            Ok((sub, tag))
        })
        .collect()
}

/// Closed-form volume, available when every component is catalogued
/// (and, for 𝒫/𝒬∖𝒫, exactly representable).
pub fn vol_closed_form(g: &Graph, kind: PolytopeKind) -> Result<ExactRational> {
    let comps = component_tags(g)?;
    match kind {
        PolytopeKind::O | PolytopeKind::Q => {
            let mut v = ExactRational::one();
            for (sub, tag) in &comps {
                let q = component_q_closed_form(tag).ok_or_else(|| {
                    Error::capability(format!("no closed form for a {tag} component"))
                })?;
                v *= if kind == PolytopeKind::O {
                    q * ExactRational::from_integer((BigUint::one() << sub.m()).into())
                } else {
                    q
                };
            }
            Ok(v)
        }
        PolytopeKind::P => {
            let mut v = ExactRational::one();
            for (sub, tag) in &comps {
                let q = component_q_closed_form(tag).ok_or_else(|| {
                    Error::capability(format!("no closed form for a {tag} component"))
                })?;
                v *= component_p_closed_form(tag, &q)?;
                let _ = sub;
            }
            Ok(v)
        }
        PolytopeKind::QMinusP => {
            Ok(vol_closed_form(g, PolytopeKind::Q)? - vol_closed_form(g, PolytopeKind::P)?)
        }
    }
}

/// Exact volume by the best available route: closed form when catalogued,
/// otherwise linear extensions (𝒫 additionally needs forest/cycle pieces).
pub fn volume(g: &Graph, kind: PolytopeKind, engine: Engine, caps: CountCaps) -> Result<VolumeResult> {
    let d = g.dim();
    if let Ok(v) = vol_closed_form(g, kind) {
        return VolumeResult::new(kind, d, v, "closed-form".to_string());
    }
    match kind {
        PolytopeKind::O => {
            let v = vol_o_from_lecount(g, engine, caps)?;
            VolumeResult::new(kind, d, v, "linear-extensions".to_string())
        }
        PolytopeKind::Q => {
            let v = vol_q_from_lecount(g, engine, caps)?;
            VolumeResult::new(kind, d, v, "linear-extensions".to_string())
        }
        PolytopeKind::P | PolytopeKind::QMinusP => {
            // Per component: forests via extensions, cycles via the closed
            // form; anything else has no exact hull volume here.
            let comps = component_tags(g)?;
            let mut q = ExactRational::one();
            let mut p = ExactRational::one();
            for (sub, tag) in &comps {
                let cq = match component_q_closed_form(tag) {
                    Some(v) => v,
                    None if classify(sub).is_forest => vol_q_from_lecount(sub, engine, caps)?,
                    None => {
                        return Err(Error::capability(format!(
                            "no exact integer-hull volume for a {tag} component; use Monte Carlo"
                        )))
                    }
                };
                p *= component_p_closed_form(tag, &cq)?;
                q *= cq;
            }
            let v = if kind == PolytopeKind::P { p } else { q - p };
            VolumeResult::new(kind, d, v, "closed-form/extensions per component".to_string())
        }
    }
}

// ---- asymptotics ----------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AsymptoticFamily {
    Star,
    Path,
    Cycle,
    Complete,
    /// p disjoint triangles.
    TriangleCollection,
}

impl std::str::FromStr for AsymptoticFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "star" => Ok(AsymptoticFamily::Star),
            "path" => Ok(AsymptoticFamily::Path),
            "cycle" => Ok(AsymptoticFamily::Cycle),
            "complete" => Ok(AsymptoticFamily::Complete),
            "triangles" | "triangle-collection" => Ok(AsymptoticFamily::TriangleCollection),
            other => Err(Error::parse(format!(
                "unknown family '{other}' (known: star, path, cycle, complete, triangles)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticRow {
    pub index: u64,
    pub dimension: u64,
    pub dth_root: f64,
    /// dth_root, scaled by the index for vanishing-root sequences.
    pub normalized: f64,
    pub gap_to_limit: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticReport {
    pub family: AsymptoticFamily,
    pub polytope: PolytopeKind,
    /// Limit of the (normalized) root sequence.
    pub limit: f64,
    pub limit_description: String,
    pub scaled_by_index: bool,
    pub rows: Vec<AsymptoticRow>,
}

/// √2/π, the path/cycle root limit.
pub fn limit_sqrt2_over_pi() -> f64 {
    std::f64::consts::SQRT_2 / std::f64::consts::PI
}

/// e/√2, the limit of m·root(vol(𝒬∖𝒫)(C_m)).
pub fn limit_e_over_sqrt2() -> f64 {
    std::f64::consts::E / std::f64::consts::SQRT_2
}

fn family_graph(family: AsymptoticFamily, k: u64) -> Result<Graph> {
    match family {
        AsymptoticFamily::Star => Graph::star(k as usize),
        AsymptoticFamily::Path => Graph::path(k as usize),
        AsymptoticFamily::Cycle => Graph::cycle(k as usize),
        AsymptoticFamily::Complete => Graph::complete(k as usize),
        AsymptoticFamily::TriangleCollection => {
            let tri: Vec<Graph> = (0..k).map(|_| Graph::cycle(3).unwrap()).collect();
            Graph::disjoint_union(&tri)
        }
    }
}

/// Root sequence vs. its limit for a catalogued family.
pub fn asymptotic_report(
    family: AsymptoticFamily,
    kind: PolytopeKind,
    indices: &[u64],
) -> Result<AsymptoticReport> {
    use AsymptoticFamily as F;
    use PolytopeKind as K;
    let (limit, desc, scaled) = match (family, kind) {
        (F::Star, K::Q) | (F::Complete, K::Q) => (0.5, "1/2".to_string(), false),
        (F::Path, K::Q) | (F::Cycle, K::Q) | (F::Cycle, K::P) => {
            (limit_sqrt2_over_pi(), "sqrt(2)/pi".to_string(), false)
        }
        (F::Cycle, K::QMinusP) => (limit_e_over_sqrt2(), "e/sqrt(2)".to_string(), true),
        (F::TriangleCollection, K::Q) | (F::TriangleCollection, K::QMinusP) => (
            dth_root_f64(&rat(1, 120), 6)?,
            "(1/120)^(1/6)".to_string(),
            false,
        ),
        (F::TriangleCollection, K::P) => {
            (dth_root_f64(&rat(1, 180), 6)?, "(1/180)^(1/6)".to_string(), false)
        }
        _ => {
            return Err(Error::capability(format!(
                "no tracked limit for family {family:?} with polytope {kind}"
            )))
        }
    };
    let mut rows = Vec::with_capacity(indices.len());
    for &k in indices {
        let g = family_graph(family, k)?;
        let v = vol_closed_form(&g, kind)?;
        let d = g.dim() as u64;
        let root = dth_root_f64(&v, d)?;
        let normalized = if scaled { k as f64 * root } else { root };
        rows.push(AsymptoticRow {
            index: k,
            dimension: d,
            dth_root: root,
            normalized,
            gap_to_limit: (normalized - limit).abs(),
        });
    }
    Ok(AsymptoticReport {
        family,
        polytope: kind,
        limit,
        limit_description: desc,
        scaled_by_index: scaled,
        rows,
    })
}

/// Number of linear extensions implied by a closed-form 𝒬 volume:
/// e = vol𝒬 · 2^m · d! (must be integral; used for cross-checks).
pub fn implied_extension_count(g: &Graph, q_volume: &ExactRational) -> Result<BigUint> {
    let scale = ExactRational::from_integer((factorial(g.dim() as u64) << g.m()).into());
    let e = q_volume * scale;
    if !e.is_integer() {
        return Err(Error::domain("volume · 2^m · d! is not an integer".to_string()));
    }
    e.to_integer()
        .to_biguint()
        .ok_or_else(|| Error::domain("negative extension count".to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::rat;

    fn q(g: &Graph) -> ExactRational {
        vol_closed_form(g, PolytopeKind::Q).unwrap()
    }

    #[test]
    fn closed_form_catalogue() {
        // K_2 (= S_1 = P_1) and the small coincidences.
        assert_eq!(q(&Graph::path(1).unwrap()), rat(1, 6));
        assert_eq!(q(&Graph::star(2).unwrap()), rat(1, 30));
        assert_eq!(q(&Graph::path(2).unwrap()), rat(1, 30));
        // Stars (m!)²/(2m+1)!.
        assert_eq!(q(&Graph::star(3).unwrap()), rat(36, 5040));
        assert_eq!(q(&Graph::star(4).unwrap()), rat(576, 362880));
        // Paths via tangent numbers: P_3 = 272/(8·5040).
        assert_eq!(q(&Graph::path(3).unwrap()), rat(272, 40320));
        // Cycles: C_3 = 1/120, C_4 = 4·A_7/(16·8!) = 1088/645120.
        assert_eq!(q(&Graph::cycle(3).unwrap()), rat(1, 120));
        assert_eq!(q(&Graph::cycle(4).unwrap()), rat(1088, 645120));
        // Complete: K_3 matches C_3; K_4 = 2^{8−10}·24/8!.
        assert_eq!(q(&Graph::complete(3).unwrap()), rat(1, 120));
        assert_eq!(q(&Graph::complete(4).unwrap()), rat(24, 4 * 40320));
        // Matchings multiply: (1/6)^m.
        assert_eq!(q(&Graph::matching(3).unwrap()), rat(1, 216));
        // O = 2^m Q.
        assert_eq!(
            vol_closed_form(&Graph::cycle(3).unwrap(), PolytopeKind::O).unwrap(),
            rat(8, 120)
        );
    }

    #[test]
    fn cycle_equals_quarter_of_path() {
        // vol 𝒬(C_m) = vol 𝒬(P_{m−1})/4.
        for m in 3..=10usize {
            assert_eq!(
                q(&Graph::cycle(m).unwrap()),
                q(&Graph::path(m - 1).unwrap()) / rat(4, 1),
                "m={m}"
            );
        }
    }

    #[test]
    fn integer_hull_volumes() {
        // Forests: P = Q.
        let t = Graph::star(4).unwrap();
        assert_eq!(vol_closed_form(&t, PolytopeKind::P).unwrap(), q(&t));
        // C_3: P = 1/120 − 2/720 = 1/180; Q∖P = 1/360.
        let c3 = Graph::cycle(3).unwrap();
        assert_eq!(vol_closed_form(&c3, PolytopeKind::P).unwrap(), rat(1, 180));
        assert_eq!(vol_closed_form(&c3, PolytopeKind::QMinusP).unwrap(), rat(1, 360));
        // Unions multiply for P but not for Q∖P.
        let two = Graph::disjoint_union(&[c3.clone(), c3.clone()]).unwrap();
        assert_eq!(vol_closed_form(&two, PolytopeKind::P).unwrap(), rat(1, 180 * 180));
        assert_eq!(
            vol_closed_form(&two, PolytopeKind::QMinusP).unwrap(),
            rat(1, 120 * 120) - rat(1, 180 * 180)
        );
        // No closed hull volume for K_4.
        assert!(vol_closed_form(&Graph::complete(4).unwrap(), PolytopeKind::P).is_err());
    }

    #[test]
    fn volume_dispatch_and_le_agreement() {
        let caps = CountCaps::default();
        // Closed forms match the extension route on mixed instances.
        for spec in ["path:4", "star:5", "cycle:5", "matching:3", "union:cycle:3,path:2"] {
            let g = Graph::from_spec_str(spec).unwrap();
            let cf = q(&g);
            let le = vol_q_from_lecount(&g, Engine::Auto, caps).unwrap();
            assert_eq!(cf, le, "{spec}");
        }
        // A spider tree has no closed form but an exact extension route.
        let spider = Graph::new(7, [(1, 2), (2, 3), (1, 4), (4, 5), (1, 6), (6, 7)]).unwrap();
        assert!(vol_closed_form(&spider, PolytopeKind::Q).is_err());
        let r = volume(&spider, PolytopeKind::Q, Engine::Auto, caps).unwrap();
        assert_eq!(r.method, "linear-extensions");
        // P = Q on that tree through the per-component route.
        let rp = volume(&spider, PolytopeKind::P, Engine::Auto, caps).unwrap();
        assert_eq!(rp.exact, r.exact);
        // Necklace hull volume is a capability error (no exact route).
        assert!(volume(&Graph::necklace(3).unwrap(), PolytopeKind::P, Engine::Auto, caps).is_err());
    }

    #[test]
    fn implied_counts_are_integral() {
        for spec in ["path:3", "star:4", "cycle:4", "matching:2"] {
            let g = Graph::from_spec_str(spec).unwrap();
            let e = implied_extension_count(&g, &q(&g)).unwrap();
            let direct = count_linear_extensions(&g, Engine::Auto, CountCaps::default()).unwrap();
            assert_eq!(e, direct, "{spec}");
        }
    }

    #[test]
    fn asymptotic_reports() {
        // Path roots approach √2/π from above, monotonically for m ≥ 10.
        let idx: Vec<u64> = (10..=30).collect();
        let rep = asymptotic_report(AsymptoticFamily::Path, PolytopeKind::Q, &idx).unwrap();
        for w in rep.rows.windows(2) {
            assert!(w[1].dth_root < w[0].dth_root);
            assert!(w[1].dth_root > rep.limit);
        }
        // Triangle collections: the 𝒬 root is exactly (1/120)^{1/6} for all p.
        let rep =
            asymptotic_report(AsymptoticFamily::TriangleCollection, PolytopeKind::Q, &[1, 2, 5])
                .unwrap();
        for row in &rep.rows {
            assert!((row.dth_root - rep.limit).abs() < 1e-14, "p={}", row.index);
        }
        // Scaled 𝒬∖𝒫 cycle roots: value at m=8 is 8·(2^6/16!)^{1/16}.
        let rep =
            asymptotic_report(AsymptoticFamily::Cycle, PolytopeKind::QMinusP, &[8]).unwrap();
        assert!(rep.scaled_by_index);
        let expect = 8.0 * (64.0 / 2.0922789888e13f64).powf(1.0 / 16.0);
        assert!((rep.rows[0].normalized - expect).abs() < 1e-9);
    }

    #[test]
    fn star_and_complete_limits() {
        let rep = asymptotic_report(AsymptoticFamily::Star, PolytopeKind::Q, &[40]).unwrap();
        assert!((rep.rows[0].dth_root - 0.5).abs() < 0.02);
        // Complete-graph roots converge like log n/n: still ~0.1 off at
        // n = 15 and non-monotone below n = 9; check the eventual approach.
        let rep =
            asymptotic_report(AsymptoticFamily::Complete, PolytopeKind::Q, &[9, 12, 15, 20])
                .unwrap();
        for w in rep.rows.windows(2) {
            assert!(w[1].gap_to_limit < w[0].gap_to_limit);
        }
        assert!(rep.rows[3].gap_to_limit < 0.09);
    }
}
