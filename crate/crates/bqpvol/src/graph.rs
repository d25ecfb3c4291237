//! Simple undirected graphs with 1-based vertices and canonically ordered
//! edges, family generators, structural classification, and simple-cycle
//! enumeration for cactus graphs.
//!
//! Canonical edge order (lexicographic on (i, j) with i < j) fixes the global
//! coordinate order used by every other module: x_1..x_n, then y_e per edge.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Build a graph on vertices 1..=n; edges are normalized to (min, max),
    /// sorted lexicographically, and must be distinct loops-free pairs in
    /// range.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut es: Vec<(usize, usize)> = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::domain(format!("loop edge ({a},{b})")));
            }
            if a < 1 || b < 1 || a > n || b > n {
                return Err(Error::domain(format!("edge ({a},{b}) out of range 1..={n}")));
            }
            es.push((a.min(b), a.max(b)));
        }
        es.sort_unstable();
        if es.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::domain("duplicate edge".to_string()));
        }
        Ok(Graph { n, edges: es })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Dimension of the associated polytopes: d = n + m.
    pub fn dim(&self) -> usize {
        self.n + self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Index of an edge in canonical order (endpoints in either order).
    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        let e = (a.min(b), a.max(b));
        self.edges.binary_search(&e).ok()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Adjacency lists (1-based; index 0 unused).
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n + 1];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for l in adj.iter_mut() {
            l.sort_unstable();
        }
        adj
    }

    /// Incident edge indices per vertex (1-based vertex index).
    pub fn incident_edges(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n + 1];
        for (idx, &(a, b)) in self.edges.iter().enumerate() {
            inc[a].push(idx);
            inc[b].push(idx);
        }
        inc
    }

    // ---- family generators -------------------------------------------------

    /// Complete graph K_n, n >= 1.
    pub fn complete(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::domain("complete graph needs n >= 1"));
        }
        let mut edges = Vec::new();
        for i in 1..=n {
            for j in (i + 1)..=n {
                edges.push((i, j));
            }
        }
        Graph::new(n, edges)
    }

    /// Star S_m with m >= 1 edges: center 1, leaves 2..=m+1.
    pub fn star(m: usize) -> Result<Self> {
        if m < 1 {
            return Err(Error::domain("star needs m >= 1 edges"));
        }
        Graph::new(m + 1, (2..=m + 1).map(|l| (1, l)))
    }

    /// Path P_m with m >= 1 edges on vertices 1..=m+1.
    pub fn path(m: usize) -> Result<Self> {
        if m < 1 {
            return Err(Error::domain("path needs m >= 1 edges"));
        }
        Graph::new(m + 1, (1..=m).map(|i| (i, i + 1)))
    }

    /// Cycle C_m, m >= 3.
    pub fn cycle(m: usize) -> Result<Self> {
        if m < 3 {
            return Err(Error::domain("cycle needs m >= 3"));
        }
        let mut edges: Vec<(usize, usize)> = (1..m).map(|i| (i, i + 1)).collect();
        edges.push((1, m));
        Graph::new(m, edges)
    }

    /// Perfect matching with m >= 1 edges on 2m vertices.
    pub fn matching(m: usize) -> Result<Self> {
        if m < 1 {
            return Err(Error::domain("matching needs m >= 1 edges"));
        }
        Graph::new(2 * m, (1..=m).map(|i| (2 * i - 1, 2 * i)))
    }

    /// Necklace N_n, n >= 3: cycle on 1..=n plus one triangle per cycle
    /// vertex; the triangle at cycle vertex i uses fresh vertices n+2i-1 and
    /// n+2i. 3n vertices, 4n edges.
    pub fn necklace(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::domain("necklace needs n >= 3"));
        }
        let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (i, i + 1)).collect();
        edges.push((1, n));
        for i in 1..=n {
            let a = n + 2 * i - 1;
            let b = n + 2 * i;
            edges.push((i, a));
            edges.push((i, b));
            edges.push((a, b));
        }
        Graph::new(3 * n, edges)
    }

    /// Disjoint union; vertex labels of later parts are shifted up.
    pub fn disjoint_union(parts: &[Graph]) -> Result<Self> {
        let n: usize = parts.iter().map(|g| g.n).sum();
        let mut edges = Vec::new();
        let mut off = 0usize;
        for g in parts {
            edges.extend(g.edges.iter().map(|&(a, b)| (a + off, b + off)));
            off += g.n;
        }
        Graph::new(n, edges)
    }

    // ---- parsing / serialization -------------------------------------------

    /// Parse a family spec string: "complete:4", "star:3", "path:5",
    /// "cycle:8", "matching:2", "necklace:4", or
    /// "union:cycle:3,cycle:3,path:2".
    pub fn from_spec_str(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if let Some(rest) = spec.strip_prefix("union:") {
            if rest.is_empty() {
                return Err(Error::parse("union: needs at least one part"));
            }
            let parts: Vec<Graph> = rest
                .split(',')
                .map(Graph::from_spec_str)
                .collect::<Result<_>>()?;
            return Graph::disjoint_union(&parts);
        }
        let (family, param) = spec
            .split_once(':')
            .ok_or_else(|| Error::parse(format!("bad graph spec '{spec}' (expected family:param)")))?;
        let k: usize = param
            .trim()
            .parse()
            .map_err(|_| Error::parse(format!("bad parameter in graph spec '{spec}'")))?;
        match family {
            "complete" => Graph::complete(k),
            "star" => Graph::star(k),
            "path" => Graph::path(k),
            "cycle" => Graph::cycle(k),
            "matching" => Graph::matching(k),
            "necklace" => Graph::necklace(k),
            other => Err(Error::parse(format!(
                "unknown family '{other}' (known: complete, star, path, cycle, matching, necklace, union)"
            ))),
        }
    }

    /// JSON form: {"n": 3, "edges": [[1,2],[2,3]]}.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: GraphJson =
            serde_json::from_str(s).map_err(|e| Error::parse(format!("graph json: {e}")))?;
        Graph::new(j.n, j.edges)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&GraphJson { n: self.n, edges: self.edges.clone() }).unwrap()
    }

    /// Connected components as sorted vertex lists (singletons included).
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n + 1];
        let mut comps = Vec::new();
        for s in 1..=self.n {
            if seen[s] {
                continue;
            }
            let mut stack = vec![s];
            let mut comp = Vec::new();
            seen[s] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Subgraph induced on a vertex subset, relabeled 1..=k preserving order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Graph> {
        let mut remap = HashMap::new();
        for (i, &v) in vertices.iter().enumerate() {
            remap.insert(v, i + 1);
        }
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| Some((*remap.get(&a)?, *remap.get(&b)?)))
            .collect();
        Graph::new(vertices.len(), edges)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph(n={}, m={})", self.n, self.m())
    }
}

// ---- classification --------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphTag {
    /// No edges at all (any number of isolated vertices).
    Empty,
    /// Disconnected graph whose components are all single edges (m of them).
    Matching(usize),
    /// Path with m edges. Path(1) and Path(2) are also stars.
    Path(usize),
    /// Star with m >= 3 edges.
    Star(usize),
    /// Cycle of length m (Cycle(3) is also K_3).
    Cycle(usize),
    /// Complete graph, n >= 4.
    CompleteGraph(usize),
    /// Acyclic, but not one of the named tree families.
    Forest,
    /// Necklace N_n.
    Necklace(usize),
    /// Every edge lies in at most one simple cycle; not a more specific tag.
    Cactus,
    General,
}

impl fmt::Display for GraphTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphTag::Empty => write!(f, "Empty"),
            GraphTag::Matching(m) => write!(f, "Matching({m})"),
            GraphTag::Path(m) => write!(f, "Path({m})"),
            GraphTag::Star(m) => write!(f, "Star({m})"),
            GraphTag::Cycle(m) => write!(f, "Cycle({m})"),
            GraphTag::CompleteGraph(n) => write!(f, "CompleteGraph({n})"),
            GraphTag::Forest => write!(f, "Forest"),
            GraphTag::Necklace(n) => write!(f, "Necklace({n})"),
            GraphTag::Cactus => write!(f, "Cactus"),
            GraphTag::General => write!(f, "General"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GraphClass {
    pub tag: GraphTag,
    /// Set when the tag hides a coincidence: P_1 = S_1 (= K_2) and P_2 = S_2.
    pub star_equivalent: bool,
    pub is_forest: bool,
    pub is_cactus: bool,
    pub components: Vec<Vec<usize>>,
}

/// Most specific applicable family tag, plus the forest/cactus booleans and
/// the component decomposition.
pub fn classify(g: &Graph) -> GraphClass {
    let components = g.components();
    let cycles = enumerate_cycles_cactus(g);
    let is_cactus = cycles.is_ok();
    let is_forest = matches!(&cycles, Ok(cs) if cs.is_empty());
    let mut star_equivalent = false;

    let tag = if g.m() == 0 {
        GraphTag::Empty
    } else if components.len() == 1 {
        let (t, se) = classify_connected(g);
        star_equivalent = se;
        t
    } else if components.iter().all(|c| c.len() == 2) {
        GraphTag::Matching(g.m())
    } else if is_forest {
        GraphTag::Forest
    } else if is_cactus {
        GraphTag::Cactus
    } else {
        GraphTag::General
    };

    GraphClass { tag, star_equivalent, is_forest, is_cactus, components }
}

fn classify_connected(g: &Graph) -> (GraphTag, bool) {
    let n = g.n();
    let m = g.m();
    let degs: Vec<usize> = (1..=n).map(|v| g.degree(v)).collect();
    let max_deg = *degs.iter().max().unwrap();
    let acyclic = m == n - 1;

    if acyclic {
        let leaves = degs.iter().filter(|&&d| d == 1).count();
        if max_deg <= 2 {
            // Path(m); P_1 and P_2 coincide with S_1, S_2.
            return (GraphTag::Path(m), m <= 2);
        }
        if leaves == n - 1 && degs.iter().filter(|&&d| d == max_deg).count() == 1 {
            return (GraphTag::Star(m), false);
        }
        return (GraphTag::Forest, false);
    }
    if max_deg == 2 && m == n {
        return (GraphTag::Cycle(m), false);
    }
    if m == n * (n - 1) / 2 && n >= 4 && degs.iter().all(|&d| d == n - 1) {
        return (GraphTag::CompleteGraph(n), false);
    }
    if let Some(k) = necklace_order(g, &degs) {
        return (GraphTag::Necklace(k), false);
    }
    if enumerate_cycles_cactus(g).is_ok() {
        return (GraphTag::Cactus, false);
    }
    (GraphTag::General, false)
}

/// Detect a necklace: n cycle vertices of degree 4 forming one cycle, each
/// carrying a pendant triangle of two degree-2 vertices.
fn necklace_order(g: &Graph, degs: &[usize]) -> Option<usize> {
    let n3 = g.n();
    if n3 % 3 != 0 || g.m() != 4 * (n3 / 3) || n3 / 3 < 3 {
        return None;
    }
    let k = n3 / 3;
    let adj = g.adjacency();
    let ring: Vec<usize> = (1..=n3).filter(|&v| degs[v - 1] == 4).collect();
    if ring.len() != k || (1..=n3).any(|v| degs[v - 1] != 4 && degs[v - 1] != 2) {
        return None;
    }
    let on_ring = |v: usize| degs[v - 1] == 4;
    for &v in &ring {
        let ring_nb: Vec<usize> = adj[v].iter().copied().filter(|&w| on_ring(w)).collect();
        let pend: Vec<usize> = adj[v].iter().copied().filter(|&w| !on_ring(w)).collect();
        if ring_nb.len() != 2 || pend.len() != 2 {
            return None;
        }
        // Pendant pair forms a triangle with v and touches nothing else.
        if g.edge_index(pend[0], pend[1]).is_none()
            || adj[pend[0]].len() != 2
            || adj[pend[1]].len() != 2
        {
            return None;
        }
    }
    // Degree-4 vertices must form a single cycle.
    let mut seen = 1usize;
    let (mut prev, mut cur) = (ring[0], *adj[ring[0]].iter().find(|&&w| on_ring(w)).unwrap());
    while cur != ring[0] {
        let next = adj[cur].iter().copied().find(|&w| on_ring(w) && w != prev)?;
        prev = cur;
        cur = next;
        seen += 1;
        if seen > k {
            return None;
        }
    }
    (seen == k).then_some(k)
}

// ---- cactus cycle enumeration ----------------------------------------------

/// All simple cycles of a cactus, each as a vertex list in cyclic order,
/// canonicalized (minimum vertex first, smaller neighbor second) and sorted
/// by (length, vertex list). Errors with a diamond-minor witness (an edge
/// lying on two simple cycles plus the second cycle's closing edge) if the
/// graph is not a cactus.
///
/// DFS: every back edge closes exactly one cycle through tree edges; in a
/// cactus no tree edge is used by two back-edge cycles.
pub fn enumerate_cycles_cactus(g: &Graph) -> Result<Vec<Vec<usize>>> {
    let adj = g.adjacency();
    let n = g.n();
    let mut parent = vec![0usize; n + 1];
    let mut depth = vec![0usize; n + 1];
    let mut state = vec![0u8; n + 1]; // 0 unseen, 1 on stack, 2 done
    let mut on_cycle = vec![false; g.m()];
    let mut cycles: Vec<Vec<usize>> = Vec::new();

    for root in 1..=n {
        if state[root] != 0 {
            continue;
        }
        // Iterative DFS; each frame tracks its adjacency cursor.
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        state[root] = 1;
        parent[root] = 0;
        depth[root] = 0;
        while let Some(&mut (v, ref mut cursor)) = stack.last_mut() {
            if *cursor >= adj[v].len() {
                state[v] = 2;
                stack.pop();
                continue;
            }
            let w = adj[v][*cursor];
            *cursor += 1;
            if w == parent[v] && parent[v] != 0 {
                continue;
            }
            match state[w] {
                0 => {
                    state[w] = 1;
                    parent[w] = v;
                    depth[w] = depth[v] + 1;
                    stack.push((w, 0));
                }
                1 => {
                    if depth[w] < depth[v] {
                        // Back edge (v, w): cycle w ... v along tree edges.
                        let mut path = vec![v];
                        let mut u = v;
                        while u != w {
                            let p = parent[u];
                            let ei = g.edge_index(u, p).unwrap();
                            if on_cycle[ei] {
                                return Err(Error::domain(format!(
                                    "not a cactus: edge ({},{}) lies on two simple cycles \
                                     (diamond-minor witness with back edge ({},{}))",
                                    u.min(p),
                                    u.max(p),
                                    v.min(w),
                                    v.max(w)
                                )));
                            }
                            on_cycle[ei] = true;
                            u = p;
                            path.push(u);
                        }
                        let ei = g.edge_index(v, w).unwrap();
                        if on_cycle[ei] {
                            return Err(Error::domain(format!(
                                "not a cactus: edge ({},{}) lies on two simple cycles",
                                v.min(w),
                                v.max(w)
                            )));
                        }
                        on_cycle[ei] = true;
                        cycles.push(canonical_cycle(&path));
                    }
                }
                _ => {}
            }
        }
    }
    cycles.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    Ok(cycles)
}

/// Rotate/reflect a cyclic vertex list so the minimum vertex comes first and
/// its smaller neighbor second.
fn canonical_cycle(cycle: &[usize]) -> Vec<usize> {
    let k = cycle.len();
    let (pos, _) = cycle.iter().enumerate().min_by_key(|&(_, v)| v).unwrap();
    let fwd = cycle[(pos + 1) % k];
    let bwd = cycle[(pos + k - 1) % k];
    let mut out = Vec::with_capacity(k);
    if fwd <= bwd {
        for i in 0..k {
            out.push(cycle[(pos + i) % k]);
        }
    } else {
        for i in 0..k {
            out.push(cycle[(pos + k - i) % k]);
        }
    }
    out
}

/// Edges of a cycle given as a cyclic vertex list, endpoints normalized.
pub fn cycle_edges(cycle: &[usize]) -> Vec<(usize, usize)> {
    (0..cycle.len())
        .map(|i| {
            let a = cycle[i];
            let b = cycle[(i + 1) % cycle.len()];
            (a.min(b), a.max(b))
        })
        .collect()
}
