//! Weighted incidence matrices and the alpha-normal calculus: verdict
//! checking against the normal/subnormal/supernormal conditions, cycle
//! consistency, and the leaf-to-root propagation that solves for the
//! consistent alpha on incidence trees.
//!
//! A weighted incidence matrix assigns a positive weight to every
//! (vertex, edge) incidence. It is alpha-normal when every vertex's
//! weights sum to 1 and every edge's weights multiply to alpha; the
//! sub/supernormal relaxations turn those equalities into inequalities and
//! bound the spectral radius from the respective side. Entries on leaf
//! incidences default to 1 and may be omitted from inputs.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::UniformHypergraph;
use crate::spectral::{rank_factorial, SpectralResult};

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedIncidenceMatrix {
    weights: BTreeMap<(usize, usize), f64>,
}

impl WeightedIncidenceMatrix {
    /// Builds a matrix from explicit (vertex, edge, weight) entries. Entries
    /// must sit on incidences of `h` and be positive; missing leaf
    /// incidences default to weight 1, any other gap is an error.
    pub fn from_entries(
        h: &UniformHypergraph,
        entries: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let degrees = h.vertex_degrees();
        let mut weights = BTreeMap::new();
        for (v, e, w) in entries {
            let edge = h
                .edge(e)
                .ok_or_else(|| Error::Domain(format!("edge index {e} out of range")))?;
            if !edge.contains(&v) {
                return Err(Error::Domain(format!(
                    "entry on non-incident pair (vertex {v}, edge {e})"
                )));
            }
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::Domain(format!(
                    "weight {w} at (vertex {v}, edge {e}) must be positive"
                )));
            }
            if weights.insert((v, e), w).is_some() {
                return Err(Error::Domain(format!(
                    "duplicate entry for (vertex {v}, edge {e})"
                )));
            }
        }
        for (ei, edge) in h.edges().iter().enumerate() {
            for &v in edge {
                if weights.contains_key(&(v, ei)) {
                    continue;
                }
                if degrees[v] == 1 {
                    weights.insert((v, ei), 1.0);
                } else {
                    return Err(Error::CoverageGap {
                        vertex: v,
                        edge: ei,
                    });
                }
            }
        }
        Ok(WeightedIncidenceMatrix { weights })
    }

    pub(crate) fn from_map(weights: BTreeMap<(usize, usize), f64>) -> Self {
        WeightedIncidenceMatrix { weights }
    }

    pub fn get(&self, vertex: usize, edge: usize) -> Option<f64> {
        self.weights.get(&(vertex, edge)).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.weights.iter().map(|(&(v, e), &w)| (v, e, w))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    fn require(&self, v: usize, e: usize) -> Result<f64> {
        self.get(v, e)
            .ok_or(Error::CoverageGap { vertex: v, edge: e })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictKind {
    Normal,
    Subnormal,
    Supernormal,
    Invalid,
}

/// Location of a failed condition: a vertex sum or an edge product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Site {
    #[serde(rename = "vertex_sum")]
    VertexSum(usize),
    #[serde(rename = "edge_product")]
    EdgeProduct(usize),
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConditionViolation {
    pub site: Site,
    /// Computed value at the site.
    pub lhs: f64,
    /// Target value: 1 for vertex sums, alpha for edge products.
    pub rhs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateVerdict {
    pub kind: VerdictKind,
    /// For sub/supernormal: the matrix is not alpha-normal, so the bound it
    /// certifies is strict.
    pub strict: bool,
    pub alpha: f64,
    /// Every site outside the `tol` band around the normal equalities.
    pub violations: Vec<ConditionViolation>,
    /// Cycle-product consistency; evaluated for normal and supernormal
    /// verdicts (the supernormal bound needs it), `None` otherwise.
    pub consistent: Option<bool>,
}

/// Classifies `b` against the alpha-normal, alpha-subnormal, and
/// alpha-supernormal conditions with equality band `tol`.
pub fn check_certificate(
    h: &UniformHypergraph,
    b: &WeightedIncidenceMatrix,
    alpha: f64,
    tol: f64,
) -> Result<CertificateVerdict> {
    let mut sums = vec![0.0f64; h.num_vertices()];
    let mut prods = vec![1.0f64; h.num_edges()];
    for (ei, edge) in h.edges().iter().enumerate() {
        for &v in edge {
            let w = b.require(v, ei)?;
            sums[v] += w;
            prods[ei] *= w;
        }
    }

    let mut violations = Vec::new();
    let mut sums_le = true;
    let mut sums_ge = true;
    let mut prods_le = true;
    let mut prods_ge = true;
    for (v, &s) in sums.iter().enumerate() {
        if h.degree(v) == 0 {
            continue; // isolated vertices carry no condition
        }
        if (s - 1.0).abs() > tol {
            violations.push(ConditionViolation {
                site: Site::VertexSum(v),
                lhs: s,
                rhs: 1.0,
            });
            if s > 1.0 {
                sums_le = false;
            } else {
                sums_ge = false;
            }
        }
    }
    for (e, &p) in prods.iter().enumerate() {
        if (p - alpha).abs() > tol {
            violations.push(ConditionViolation {
                site: Site::EdgeProduct(e),
                lhs: p,
                rhs: alpha,
            });
            if p > alpha {
                prods_le = false;
            } else {
                prods_ge = false;
            }
        }
    }

    let normal = violations.is_empty();
    let subnormal = sums_le && prods_ge;
    let supernormal = sums_ge && prods_le;
    let (kind, strict) = if normal {
        (VerdictKind::Normal, false)
    } else if subnormal {
        (VerdictKind::Subnormal, true)
    } else if supernormal {
        (VerdictKind::Supernormal, true)
    } else {
        (VerdictKind::Invalid, false)
    };

    let consistent = match kind {
        VerdictKind::Normal | VerdictKind::Supernormal => {
            Some(check_consistency(h, b, tol)?.consistent)
        }
        _ => None,
    };

    Ok(CertificateVerdict {
        kind,
        strict,
        alpha,
        violations,
        consistent,
    })
}

/// A cycle v_0 e_1 v_1 ... e_l v_l (v_l = v_0) whose weight-ratio product
/// differs from 1.
#[derive(Debug, Clone, Serialize)]
pub struct CycleWitness {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub product: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyReport {
    pub consistent: bool,
    pub witness: Option<CycleWitness>,
}

/// Checks the cycle-product condition prod B(v_i, e_i) / B(v_{i-1}, e_i) = 1
/// over a fundamental cycle basis of the bipartite incidence graph; trees
/// are vacuously consistent.
pub fn check_consistency(
    h: &UniformHypergraph,
    b: &WeightedIncidenceMatrix,
    tol: f64,
) -> Result<ConsistencyReport> {
    let nv = h.num_vertices();
    let ne = h.num_edges();
    let total = nv + ne;
    let inc = h.incidence();

    // bipartite spanning forest; nodes 0..nv are vertices, nv.. are edges
    let mut parent: Vec<Option<usize>> = vec![None; total];
    let mut visited = vec![false; total];
    let mut in_tree: Vec<(usize, usize)> = Vec::new();
    let mut chords: Vec<(usize, usize)> = Vec::new();

    for start in 0..nv {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(node) = queue.pop_front() {
            if node < nv {
                for &e in &inc[node] {
                    let en = nv + e;
                    if visited[en] {
                        continue; // incidence (node, e) classified when e was reached
                    }
                    visited[en] = true;
                    parent[en] = Some(node);
                    in_tree.push((node, e));
                    queue.push_back(en);
                }
            } else {
                let e = node - nv;
                for &v in &h.edges()[e] {
                    if visited[v] {
                        if parent[node] != Some(v) {
                            chords.push((v, e));
                        }
                        continue;
                    }
                    visited[v] = true;
                    parent[v] = Some(node);
                    in_tree.push((v, e));
                    queue.push_back(v);
                }
            }
        }
    }

    for (v, e) in chords {
        let witness = cycle_product(b, &parent, nv, v, e)?;
        if (witness.product - 1.0).abs() > tol {
            return Ok(ConsistencyReport {
                consistent: false,
                witness: Some(witness),
            });
        }
    }
    Ok(ConsistencyReport {
        consistent: true,
        witness: None,
    })
}

fn path_to_root(parent: &[Option<usize>], mut node: usize) -> Vec<usize> {
    let mut path = vec![node];
    while let Some(p) = parent[node] {
        path.push(p);
        node = p;
    }
    path
}

/// Builds the fundamental cycle through the chord incidence (v, e) and
/// evaluates its ratio product.
fn cycle_product(
    b: &WeightedIncidenceMatrix,
    parent: &[Option<usize>],
    nv: usize,
    v: usize,
    e: usize,
) -> Result<CycleWitness> {
    let pv = path_to_root(parent, v);
    let pe = path_to_root(parent, nv + e);
    let on_pv: BTreeMap<usize, usize> = pv.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let (mut j, mut lca_i) = (0usize, 0usize);
    for (idx, &n) in pe.iter().enumerate() {
        if let Some(&i) = on_pv.get(&n) {
            j = idx;
            lca_i = i;
            break;
        }
    }
    // loop nodes: v .. lca (up the vertex side), then back down to e
    let mut nodes: Vec<usize> = pv[..=lca_i].to_vec();
    nodes.extend(pe[..j].iter().rev());
    debug_assert_eq!(nodes.len() % 2, 0);

    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for (idx, &n) in nodes.iter().enumerate() {
        if idx % 2 == 0 {
            vertices.push(n);
        } else {
            edges.push(n - nv);
        }
    }
    vertices.push(v); // close the walk

    let mut product = 1.0f64;
    for i in 0..edges.len() {
        let e_i = edges[i];
        let v_prev = vertices[i];
        let v_next = vertices[i + 1];
        product *= b.require(v_next, e_i)? / b.require(v_prev, e_i)?;
    }
    Ok(CycleWitness {
        vertices,
        edges,
        product,
    })
}

// ---------------------------------------------------------------------------
// Tree propagation
// ---------------------------------------------------------------------------

struct Orientation {
    /// Edge indices in BFS discovery order.
    order: Vec<usize>,
    /// For each edge, the vertex on its root side; usize::MAX for a root edge.
    parent_vertex: Vec<usize>,
}

const NO_PARENT: usize = usize::MAX;

fn orient(
    h: &UniformHypergraph,
    root_vertex: Option<usize>,
    root_edge: Option<usize>,
) -> Result<Orientation> {
    let inc = h.incidence();
    let mut visited_v = vec![false; h.num_vertices()];
    let mut visited_e = vec![false; h.num_edges()];
    let mut parent_vertex = vec![NO_PARENT; h.num_edges()];
    let mut order = Vec::with_capacity(h.num_edges());
    let mut queue = std::collections::VecDeque::new();

    if let Some(re) = root_edge {
        visited_e[re] = true;
        order.push(re);
        for &u in &h.edges()[re] {
            visited_v[u] = true;
            queue.push_back(u);
        }
    } else {
        let rv = root_vertex.expect("either root vertex or root edge");
        visited_v[rv] = true;
        queue.push_back(rv);
    }

    while let Some(v) = queue.pop_front() {
        for &e in &inc[v] {
            if visited_e[e] {
                continue;
            }
            visited_e[e] = true;
            parent_vertex[e] = v;
            order.push(e);
            for &u in &h.edges()[e] {
                if u == v {
                    continue;
                }
                if visited_v[u] {
                    return Err(Error::CyclicInput);
                }
                visited_v[u] = true;
                queue.push_back(u);
            }
        }
    }
    if visited_e.iter().any(|&s| !s) || visited_v.iter().any(|&s| !s) {
        return Err(Error::Disconnected);
    }
    Ok(Orientation {
        order,
        parent_vertex,
    })
}

/// Leaf-to-root weight propagation at a fixed alpha. Every non-root vertex
/// sum and every non-root edge product comes out exact by construction; the
/// defect collects at the root. `Ok(None)` means some intermediate weight
/// went nonpositive, i.e. alpha is too large for this shape.
fn propagate(
    h: &UniformHypergraph,
    alpha: f64,
    orientation: &Orientation,
) -> Option<(WeightedIncidenceMatrix, f64)> {
    let mut child_sum = vec![0.0f64; h.num_vertices()];
    let mut weights = BTreeMap::new();
    let mut root_product = 1.0f64;
    for &e in orientation.order.iter().rev() {
        let pv = orientation.parent_vertex[e];
        let mut prod = 1.0f64;
        for &u in &h.edges()[e] {
            if u == pv {
                continue;
            }
            let w = 1.0 - child_sum[u];
            if w <= 0.0 {
                return None;
            }
            weights.insert((u, e), w);
            prod *= w;
        }
        if pv == NO_PARENT {
            root_product = prod;
        } else {
            let upward = alpha / prod;
            weights.insert((pv, e), upward);
            child_sum[pv] += upward;
        }
    }
    Some((WeightedIncidenceMatrix::from_map(weights), root_product))
}

/// Propagation rooted at a vertex: returns the matrix and the root's vertex
/// sum (equal to 1 exactly when alpha is the consistent value).
pub(crate) fn propagate_at_vertex(
    h: &UniformHypergraph,
    alpha: f64,
    root: usize,
) -> Result<Option<(WeightedIncidenceMatrix, f64)>> {
    let orientation = orient(h, Some(root), None)?;
    Ok(propagate_with_root_sum(h, alpha, &orientation, root))
}

fn propagate_with_root_sum(
    h: &UniformHypergraph,
    alpha: f64,
    orientation: &Orientation,
    root: usize,
) -> Option<(WeightedIncidenceMatrix, f64)> {
    let (matrix, _) = propagate(h, alpha, orientation)?;
    let inc = h.incidence();
    let sum: f64 = inc[root]
        .iter()
        .map(|&e| matrix.get(root, e).expect("root incidences are filled"))
        .sum();
    Some((matrix, sum))
}

/// Propagation rooted at an edge: returns the matrix and the root edge's
/// weight product (equal to alpha exactly at the consistent value).
pub(crate) fn propagate_at_edge(
    h: &UniformHypergraph,
    alpha: f64,
    edge: usize,
) -> Result<Option<(WeightedIncidenceMatrix, f64)>> {
    if edge >= h.num_edges() {
        return Err(Error::InvalidParams(format!(
            "edge index {edge} out of range"
        )));
    }
    let orientation = orient(h, None, Some(edge))?;
    Ok(propagate(h, alpha, &orientation))
}

/// The consistent alpha of an incidence tree together with its normal
/// certificate.
#[derive(Debug, Clone)]
pub struct TreeCertificate {
    pub alpha: f64,
    pub matrix: WeightedIncidenceMatrix,
}

/// Solves for the alpha making the tree consistently alpha-normal: roots the
/// tree at a maximum-degree vertex and bisects the root-sum defect, which is
/// monotone increasing in alpha (a nonpositive intermediate weight counts as
/// "alpha too large").
///
/// ```
/// use hyperrho::{make_path, rho_from_alpha, solve_tree_alpha};
///
/// let a2 = make_path(2, 3).unwrap();
/// let cert = solve_tree_alpha(&a2, 1e-12).unwrap();
/// assert!((cert.alpha - 0.5).abs() < 1e-10);
/// assert!((rho_from_alpha(cert.alpha, 3).unwrap() - 2f64 * 2f64.powf(1.0 / 3.0)).abs() < 1e-9);
/// ```
pub fn solve_tree_alpha(h: &UniformHypergraph, tol: f64) -> Result<TreeCertificate> {
    if tol <= 0.0 {
        return Err(Error::InvalidParams(format!("tolerance {tol} must be > 0")));
    }
    if !h.is_connected() {
        return Err(Error::Disconnected);
    }
    if !h.is_incidence_tree() {
        return Err(Error::CyclicInput);
    }
    let degrees = h.vertex_degrees();
    let root = (0..h.num_vertices())
        .max_by_key(|&v| (degrees[v], usize::MAX - v))
        .expect("at least one vertex");
    let orientation = orient(h, Some(root), None)?;

    let phi = |alpha: f64| -> Option<f64> {
        propagate_with_root_sum(h, alpha, &orientation, root).map(|(_, s)| s - 1.0)
    };

    let mut lo = 1e-6;
    let mut hi = 1.0;
    match phi(lo) {
        Some(v) if v < 0.0 => {}
        _ => {
            return Err(Error::NotBracketed(format!(
                "root sum already exceeds 1 at alpha = {lo}"
            )))
        }
    }
    let mut best = lo;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match phi(mid) {
            Some(v) if v.abs() <= tol => {
                best = mid;
                lo = mid;
                hi = mid;
                break;
            }
            Some(v) if v < 0.0 => {
                lo = mid;
                best = mid;
            }
            _ => hi = mid,
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    let alpha = if lo == hi { best } else { lo };
    let (matrix, _) = propagate_with_root_sum(h, alpha, &orientation, root)
        .expect("alpha on the feasible side of the bracket");
    Ok(TreeCertificate { alpha, matrix })
}

// ---------------------------------------------------------------------------
// Perron cross-checks
// ---------------------------------------------------------------------------

/// Per-edge spread of { B(v,e)^{1/r} x(v) : v in e } divided by its mean,
/// maximized over edges. Zero for an exact consistent certificate and its
/// Perron vector.
pub fn perron_consistency_check(
    h: &UniformHypergraph,
    b: &WeightedIncidenceMatrix,
    x: &[f64],
) -> Result<f64> {
    if x.len() != h.num_vertices() {
        return Err(Error::DimensionMismatch {
            expected: h.num_vertices(),
            actual: x.len(),
        });
    }
    let inv_r = 1.0 / h.r() as f64;
    let mut worst = 0.0f64;
    for (ei, edge) in h.edges().iter().enumerate() {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        let mut mean = 0.0f64;
        for &v in edge {
            let t = b.require(v, ei)?.powf(inv_r) * x[v];
            lo = lo.min(t);
            hi = hi.max(t);
            mean += t;
        }
        mean /= edge.len() as f64;
        if mean > 0.0 {
            worst = worst.max((hi - lo) / mean);
        }
    }
    Ok(worst)
}

/// The canonical consistent certificate induced by a Perron vector:
/// B(v,e) = (r-1)! * prod_{u in e} x(u) / (rho * x(v)^r), which is exactly
/// alpha-normal and consistent at alpha = ((r-1)!/rho)^r.
pub fn certificate_from_perron(
    h: &UniformHypergraph,
    spectral: &SpectralResult,
) -> Result<(f64, WeightedIncidenceMatrix)> {
    let x = &spectral.perron;
    if x.len() != h.num_vertices() {
        return Err(Error::DimensionMismatch {
            expected: h.num_vertices(),
            actual: x.len(),
        });
    }
    let r = h.r();
    let fact = rank_factorial(r);
    let rho = spectral.rho;
    let mut weights = BTreeMap::new();
    for (ei, edge) in h.edges().iter().enumerate() {
        let mut prod = 1.0f64;
        for &u in edge {
            prod *= x[u];
        }
        for &v in edge {
            let w = fact * prod / (rho * x[v].powi(r as i32));
            weights.insert((v, ei), w);
        }
    }
    Ok((
        (fact / rho).powi(r as i32),
        WeightedIncidenceMatrix::from_map(weights),
    ))
}

// ---------------------------------------------------------------------------
// Certificate files
// ---------------------------------------------------------------------------

/// One certificate entry: (vertex, edge, weight).
pub type CertificateEntry = (usize, usize, f64);

#[derive(Serialize, Deserialize)]
struct CertificateFile {
    alpha: f64,
    entries: Vec<CertificateEntry>,
}

/// Reads {"alpha": .., "entries": [[vertex, edge, weight], ..]}.
pub fn read_certificate(path: impl AsRef<Path>) -> Result<(f64, Vec<CertificateEntry>)> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let file: CertificateFile = serde_json::from_str(&text).map_err(|e| Error::Parse {
        context: format!("{} (certificate json)", path.display()),
        message: e.to_string(),
    })?;
    Ok((file.alpha, file.entries))
}

pub fn write_certificate(
    path: impl AsRef<Path>,
    alpha: f64,
    matrix: &WeightedIncidenceMatrix,
) -> Result<()> {
    let file = CertificateFile {
        alpha,
        entries: matrix.entries().collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("certificate serializes");
    s.push('\n');
    std::fs::write(path, s)?;
    Ok(())
}
