//! Uniform hypergraph representation: validation, structural predicates,
//! the rank-raising extension operation, and the JSON interchange format.
//!
//! An r-graph is a pair (V, E) where every edge is a set of exactly r
//! distinct vertices. Vertices are dense integer ids starting at 0; edges
//! keep their list position (certificates refer to edges by index) while
//! the vertices inside each edge are stored sorted ascending.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One failed type invariant, naming the offending edge or vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    RankTooSmall {
        r: usize,
    },
    NoVertices,
    WrongEdgeSize {
        edge: usize,
        size: usize,
        r: usize,
    },
    RepeatedVertex {
        edge: usize,
        vertex: usize,
    },
    VertexOutOfRange {
        edge: usize,
        vertex: usize,
        num_vertices: usize,
    },
    DuplicateEdge {
        edge: usize,
        earlier: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RankTooSmall { r } => write!(f, "rank {r} is below 2"),
            Violation::NoVertices => write!(f, "hypergraph must have at least one vertex"),
            Violation::WrongEdgeSize { edge, size, r } => {
                write!(f, "edge {edge} has {size} vertices, expected {r}")
            }
            Violation::RepeatedVertex { edge, vertex } => {
                write!(f, "edge {edge} repeats vertex {vertex}")
            }
            Violation::VertexOutOfRange {
                edge,
                vertex,
                num_vertices,
            } => write!(
                f,
                "edge {edge} references vertex {vertex} outside 0..{num_vertices}"
            ),
            Violation::DuplicateEdge { edge, earlier } => {
                write!(f, "edge {edge} duplicates edge {earlier}")
            }
        }
    }
}

/// Checks the r-uniformity, vertex-range, and duplicate-edge invariants on
/// raw parts, returning every violation found instead of failing early.
pub fn validate_parts(r: usize, num_vertices: usize, edges: &[Vec<usize>]) -> Vec<Violation> {
    let mut out = Vec::new();
    if r < 2 {
        out.push(Violation::RankTooSmall { r });
    }
    if num_vertices == 0 {
        out.push(Violation::NoVertices);
    }
    let mut seen: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for (idx, e) in edges.iter().enumerate() {
        if e.len() != r {
            out.push(Violation::WrongEdgeSize {
                edge: idx,
                size: e.len(),
                r,
            });
        }
        let mut sorted = e.clone();
        sorted.sort_unstable();
        let mut reported = None;
        for w in sorted.windows(2) {
            if w[0] == w[1] && reported != Some(w[0]) {
                out.push(Violation::RepeatedVertex {
                    edge: idx,
                    vertex: w[0],
                });
                reported = Some(w[0]);
            }
        }
        for &v in e {
            if v >= num_vertices {
                out.push(Violation::VertexOutOfRange {
                    edge: idx,
                    vertex: v,
                    num_vertices,
                });
            }
        }
        if let Some(&earlier) = seen.get(&sorted) {
            out.push(Violation::DuplicateEdge { edge: idx, earlier });
        } else {
            seen.insert(sorted, idx);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniformHypergraph {
    r: usize,
    num_vertices: usize,
    edges: Vec<Vec<usize>>,
    labels: BTreeMap<usize, String>,
}

impl UniformHypergraph {
    /// Builds a hypergraph after checking all type invariants.
    pub fn new(r: usize, num_vertices: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let violations = validate_parts(r, num_vertices, &edges);
        if !violations.is_empty() {
            return Err(Error::Validation(violations));
        }
        let edges = edges
            .into_iter()
            .map(|mut e| {
                e.sort_unstable();
                e
            })
            .collect();
        Ok(UniformHypergraph {
            r,
            num_vertices,
            edges,
            labels: BTreeMap::new(),
        })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> Option<&[usize]> {
        self.edges.get(idx).map(|e| e.as_slice())
    }

    /// Re-checks the invariants; empty for any value built through `new`.
    pub fn validate(&self) -> Vec<Violation> {
        validate_parts(self.r, self.num_vertices, &self.edges)
    }

    pub fn set_label(&mut self, vertex: usize, name: impl Into<String>) {
        self.labels.insert(vertex, name.into());
    }

    pub fn label(&self, vertex: usize) -> Option<&str> {
        self.labels.get(&vertex).map(|s| s.as_str())
    }

    pub fn labels(&self) -> &BTreeMap<usize, String> {
        &self.labels
    }

    pub fn find_label(&self, name: &str) -> Option<usize> {
        self.labels
            .iter()
            .find(|(_, l)| l.as_str() == name)
            .map(|(&v, _)| v)
    }

    /// Edge indices incident to each vertex.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.num_vertices];
        for (idx, e) in self.edges.iter().enumerate() {
            for &v in e {
                inc[v].push(idx);
            }
        }
        inc
    }

    pub fn degree(&self, vertex: usize) -> usize {
        self.edges.iter().filter(|e| e.contains(&vertex)).count()
    }

    /// Degree of every vertex, indexed by vertex id.
    pub fn vertex_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.num_vertices];
        for e in &self.edges {
            for &v in e {
                deg[v] += 1;
            }
        }
        deg
    }

    /// A leaf vertex has degree one.
    pub fn is_leaf(&self, vertex: usize) -> bool {
        self.degree(vertex) == 1
    }

    /// True iff the bipartite vertex-edge incidence graph is connected
    /// (isolated vertices count as separate components).
    pub fn is_connected(&self) -> bool {
        if self.num_vertices == 0 {
            return false;
        }
        let inc = self.incidence();
        let mut seen_v = vec![false; self.num_vertices];
        let mut seen_e = vec![false; self.edges.len()];
        let mut stack = vec![0usize];
        seen_v[0] = true;
        while let Some(v) = stack.pop() {
            for &ei in &inc[v] {
                if seen_e[ei] {
                    continue;
                }
                seen_e[ei] = true;
                for &u in &self.edges[ei] {
                    if !seen_v[u] {
                        seen_v[u] = true;
                        stack.push(u);
                    }
                }
            }
        }
        seen_v.iter().all(|&s| s)
    }

    /// True iff every pair of edges shares at most one vertex.
    pub fn is_simple(&self) -> bool {
        for i in 0..self.edges.len() {
            for j in (i + 1)..self.edges.len() {
                if intersection_size(&self.edges[i], &self.edges[j]) > 1 {
                    return false;
                }
            }
        }
        true
    }

    /// True iff the incidence structure is acyclic, i.e. the bipartite
    /// incidence graph is a tree. For a connected r-graph this is exactly
    /// `num_vertices == n(r-1) + 1`.
    pub fn is_incidence_tree(&self) -> bool {
        self.is_connected() && self.num_vertices == self.edges.len() * (self.r - 1) + 1
    }

    /// Adds one fresh vertex to every edge, raising the rank from r to r+1.
    /// New vertices are appended in edge order; labels are preserved.
    pub fn extend(&self) -> Self {
        let mut edges = self.edges.clone();
        let mut nv = self.num_vertices;
        for e in &mut edges {
            e.push(nv);
            nv += 1;
        }
        UniformHypergraph {
            r: self.r + 1,
            num_vertices: nv,
            edges,
            labels: self.labels.clone(),
        }
    }

    /// Attaches a simple path of `len` edges at `at`: each new edge shares one
    /// chain vertex with its predecessor and carries r-2 fresh leaves.
    pub fn attach_path(&self, at: usize, len: usize) -> Result<Self> {
        if at >= self.num_vertices {
            return Err(Error::InvalidParams(format!(
                "attachment vertex {at} out of range"
            )));
        }
        let mut h = self.clone();
        let mut prev = at;
        for _ in 0..len {
            let mut e = vec![prev, h.num_vertices];
            prev = h.num_vertices;
            h.num_vertices += 1;
            for _ in 0..(self.r - 2) {
                e.push(h.num_vertices);
                h.num_vertices += 1;
            }
            e.sort_unstable();
            h.edges.push(e);
        }
        Ok(h)
    }
}

fn intersection_size(a: &[usize], b: &[usize]) -> usize {
    // both sorted
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

// ---------------------------------------------------------------------------
// JSON interchange
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct FileRepr {
    r: usize,
    vertices: usize,
    edges: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    labels: BTreeMap<String, String>,
}

impl UniformHypergraph {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let repr: FileRepr = serde_json::from_str(s).map_err(|e| Error::Parse {
            context: "hypergraph json".into(),
            message: e.to_string(),
        })?;
        let mut h = UniformHypergraph::new(repr.r, repr.vertices, repr.edges)?;
        for (key, name) in repr.labels {
            let v: usize = key.parse().map_err(|_| Error::Parse {
                context: "hypergraph json labels".into(),
                message: format!("label key {key:?} is not a vertex id"),
            })?;
            if v >= h.num_vertices {
                return Err(Error::Parse {
                    context: "hypergraph json labels".into(),
                    message: format!("label key {v} outside 0..{}", h.num_vertices),
                });
            }
            h.labels.insert(v, name);
        }
        Ok(h)
    }

    pub fn to_json_string(&self) -> String {
        let repr = FileRepr {
            r: self.r,
            vertices: self.num_vertices,
            edges: self.edges.clone(),
            labels: self
                .labels
                .iter()
                .map(|(v, l)| (v.to_string(), l.clone()))
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&repr).expect("hypergraph serializes");
        s.push('\n');
        s
    }
}

pub fn read_hypergraph(path: impl AsRef<Path>) -> Result<UniformHypergraph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    UniformHypergraph::from_json_str(&text).map_err(|e| match e {
        Error::Parse { context, message } => Error::Parse {
            context: format!("{} ({context})", path.display()),
            message,
        },
        other => other,
    })
}

pub fn write_hypergraph(h: &UniformHypergraph, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, h.to_json_string())?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Isomorphism heuristic
// ---------------------------------------------------------------------------

/// Degree-sequence plus iterated color-refinement check, conclusive for the
/// tree-like families produced by the generators. Not a general hypergraph
/// isomorphism test.
pub fn heuristic_isomorphic(a: &UniformHypergraph, b: &UniformHypergraph) -> bool {
    if a.r != b.r || a.num_vertices != b.num_vertices || a.edges.len() != b.edges.len() {
        return false;
    }
    let mut deg_a = a.vertex_degrees();
    let mut deg_b = b.vertex_degrees();
    deg_a.sort_unstable();
    deg_b.sort_unstable();
    if deg_a != deg_b {
        return false;
    }

    let inc_a = a.incidence();
    let inc_b = b.incidence();
    let mut vcol_a: Vec<u64> = a.vertex_degrees().iter().map(|&d| d as u64).collect();
    let mut vcol_b: Vec<u64> = b.vertex_degrees().iter().map(|&d| d as u64).collect();
    let mut ecol_a = vec![0u64; a.edges.len()];
    let mut ecol_b = vec![0u64; b.edges.len()];

    let rounds = a.num_vertices + a.edges.len() + 1;
    let mut classes = 0usize;
    for _ in 0..rounds {
        // shared palette so colors are comparable between the two graphs
        let mut epal: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
        refine_edges(&a.edges, &vcol_a, &mut ecol_a, &mut epal);
        refine_edges(&b.edges, &vcol_b, &mut ecol_b, &mut epal);

        let mut vpal: BTreeMap<(u64, Vec<u64>), u64> = BTreeMap::new();
        refine_vertices(&inc_a, &ecol_a, &mut vcol_a, &mut vpal);
        refine_vertices(&inc_b, &ecol_b, &mut vcol_b, &mut vpal);

        let now = epal.len() + vpal.len();
        if now == classes {
            break;
        }
        classes = now;
    }

    let mut sa = vcol_a.clone();
    let mut sb = vcol_b.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return false;
    }
    let mut ea = ecol_a;
    let mut eb = ecol_b;
    ea.sort_unstable();
    eb.sort_unstable();
    ea == eb
}

fn refine_edges(
    edges: &[Vec<usize>],
    vcol: &[u64],
    ecol: &mut [u64],
    palette: &mut BTreeMap<Vec<u64>, u64>,
) {
    for (idx, e) in edges.iter().enumerate() {
        let mut sig: Vec<u64> = e.iter().map(|&v| vcol[v]).collect();
        sig.sort_unstable();
        let next = palette.len() as u64;
        ecol[idx] = *palette.entry(sig).or_insert(next);
    }
}

fn refine_vertices(
    inc: &[Vec<usize>],
    ecol: &[u64],
    vcol: &mut [u64],
    palette: &mut BTreeMap<(u64, Vec<u64>), u64>,
) {
    for (v, edges) in inc.iter().enumerate() {
        let mut sig: Vec<u64> = edges.iter().map(|&e| ecol[e]).collect();
        sig.sort_unstable();
        let next = palette.len() as u64;
        vcol[v] = *palette.entry((vcol[v], sig)).or_insert(next);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(r: usize, nv: usize, edges: &[&[usize]]) -> UniformHypergraph {
        UniformHypergraph::new(r, nv, edges.iter().map(|e| e.to_vec()).collect()).unwrap()
    }

    #[test]
    fn single_edge_is_valid() {
        assert!(validate_parts(3, 3, &[vec![0, 1, 2]]).is_empty());
    }

    #[test]
    fn repeated_vertex_is_reported() {
        let v = validate_parts(3, 3, &[vec![0, 1, 1]]);
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::RepeatedVertex { edge: 0, vertex: 1 })));
    }

    #[test]
    fn duplicate_edge_is_reported() {
        let v = validate_parts(3, 3, &[vec![0, 1, 2], vec![2, 1, 0]]);
        assert!(v.iter().any(|x| matches!(
            x,
            Violation::DuplicateEdge {
                edge: 1,
                earlier: 0
            }
        )));
    }

    #[test]
    fn wrong_size_and_range() {
        let v = validate_parts(3, 2, &[vec![0, 1]]);
        assert!(v.iter().any(|x| matches!(
            x,
            Violation::WrongEdgeSize {
                edge: 0,
                size: 2,
                r: 3
            }
        )));
        let v = validate_parts(2, 2, &[vec![0, 5]]);
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::VertexOutOfRange { vertex: 5, .. })));
    }

    #[test]
    fn predicates_on_small_path() {
        // A_2^(3): {0,1,2}, {2,3,4}
        let g = h(3, 5, &[&[0, 1, 2], &[2, 3, 4]]);
        assert!(g.is_connected());
        assert!(g.is_simple());
        assert_eq!(g.degree(2), 2);
        for v in [0, 1, 3, 4] {
            assert_eq!(g.degree(v), 1);
            assert!(g.is_leaf(v));
        }
    }

    #[test]
    fn disjoint_edges_not_connected() {
        let g = h(3, 6, &[&[0, 1, 2], &[3, 4, 5]]);
        assert!(!g.is_connected());
    }

    #[test]
    fn two_edges_sharing_two_vertices_not_simple() {
        let g = h(3, 4, &[&[0, 1, 2], &[0, 1, 3]]);
        assert!(g.is_connected());
        assert!(!g.is_simple());
    }

    #[test]
    fn extend_adds_leaf_per_edge() {
        let single = h(2, 2, &[&[0, 1]]);
        let ext = single.extend();
        assert_eq!(ext.r(), 3);
        assert_eq!(ext.num_vertices(), 3);
        assert_eq!(ext.edges(), &[vec![0, 1, 2]]);

        // extend(extend(A_2^(2))): rank 4, 2 edges, 3 + 2 + 2 = 7 vertices
        let a2 = h(2, 3, &[&[0, 1], &[1, 2]]);
        let twice = a2.extend().extend();
        assert_eq!(twice.r(), 4);
        assert_eq!(twice.num_edges(), 2);
        assert_eq!(twice.num_vertices(), 7);
        let deg = twice.vertex_degrees();
        assert_eq!(deg.iter().filter(|&&d| d == 1).count(), 6);
    }

    #[test]
    fn json_round_trip() {
        let mut g = h(3, 5, &[&[0, 1, 2], &[2, 3, 4]]);
        g.set_label(2, "c");
        let s = g.to_json_string();
        let back = UniformHypergraph::from_json_str(&s).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn json_rejects_wrong_edge_size() {
        let err = UniformHypergraph::from_json_str(r#"{"r":3,"vertices":3,"edges":[[0,1]]}"#);
        assert!(matches!(err, Err(Error::Validation(_))));
    }

    #[test]
    fn json_rejects_trailing_data() {
        let err = UniformHypergraph::from_json_str(
            "{\"r\":3,\"vertices\":3,\"edges\":[[0,1,2]]} trailing",
        );
        assert!(matches!(err, Err(Error::Parse { .. })));
    }

    #[test]
    fn iso_heuristic_accepts_relabeling() {
        let g1 = h(3, 5, &[&[0, 1, 2], &[2, 3, 4]]);
        let g2 = h(3, 5, &[&[4, 3, 2], &[2, 1, 0]]);
        assert!(heuristic_isomorphic(&g1, &g2));
    }

    #[test]
    fn iso_heuristic_rejects_different_shape() {
        // path of 3 edges vs star of 3 edges (2-graphs)
        let path = h(2, 4, &[&[0, 1], &[1, 2], &[2, 3]]);
        let star = h(2, 4, &[&[0, 1], &[0, 2], &[0, 3]]);
        assert!(!heuristic_isomorphic(&path, &star));
    }

    #[test]
    fn attach_path_grows_chain() {
        let single = h(3, 3, &[&[0, 1, 2]]);
        let grown = single.attach_path(0, 2).unwrap();
        assert_eq!(grown.num_edges(), 3);
        assert_eq!(grown.num_vertices(), 3 + 2 * 2);
        assert!(grown.is_connected());
        assert!(grown.is_simple());
    }
}
