//! Generators for the parametric families, each behind the `FamilyGenerator`
//! trait and registered by name so the CLI and the ordering harness can
//! select them at runtime.
//!
//! All generators emit a deterministic layout: core/chain vertices first
//! (labeled), then one block of fresh leaves per edge in edge order. The
//! branched families are built at rank 3 and raised by `extend`, matching
//! their definition as extensions of the rank-3 shapes.

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::hypergraph::UniformHypergraph;

/// One parametric family: arity, parameter validation, edge-count formula,
/// and the builder itself.
pub trait FamilyGenerator: Sync {
    fn name(&self) -> &'static str;
    fn param_names(&self) -> &'static [&'static str];
    fn min_rank(&self) -> usize;
    fn check_params(&self, params: &[usize]) -> Result<()>;
    fn edge_count(&self, params: &[usize]) -> usize;
    fn build(&self, params: &[usize], r: usize) -> Result<UniformHypergraph>;

    fn arity(&self) -> usize {
        self.param_names().len()
    }
}

fn check_arity(gen: &dyn FamilyGenerator, params: &[usize]) -> Result<()> {
    if params.len() != gen.arity() {
        return Err(Error::InvalidParams(format!(
            "family {} takes {} parameters ({}), got {}",
            gen.name(),
            gen.arity(),
            gen.param_names().join(","),
            params.len()
        )));
    }
    Ok(())
}

fn check_rank(gen: &dyn FamilyGenerator, r: usize) -> Result<()> {
    if r < gen.min_rank() {
        return Err(Error::InvalidParams(format!(
            "family {} requires rank >= {}, got {r}",
            gen.name(),
            gen.min_rank()
        )));
    }
    Ok(())
}

struct PathFamily;
struct CycleFamily;
struct EFamily;
struct FFamily;
struct GFamily;
struct BdFamily;

static PATH: PathFamily = PathFamily;
static CYCLE: CycleFamily = CycleFamily;
static E_FAMILY: EFamily = EFamily;
static F_FAMILY: FFamily = FFamily;
static G_FAMILY: GFamily = GFamily;
static BD_FAMILY: BdFamily = BdFamily;

static REGISTRY: [&dyn FamilyGenerator; 6] =
    [&PATH, &E_FAMILY, &F_FAMILY, &G_FAMILY, &CYCLE, &BD_FAMILY];

/// All registered generators.
pub fn registry() -> &'static [&'static dyn FamilyGenerator] {
    &REGISTRY
}

/// Case-insensitive lookup by registered name.
pub fn lookup(name: &str) -> Result<&'static dyn FamilyGenerator> {
    registry()
        .iter()
        .copied()
        .find(|g| g.name().eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownFamily(name.to_string()))
}

impl FamilyGenerator for PathFamily {
    fn name(&self) -> &'static str {
        "path"
    }
    fn param_names(&self) -> &'static [&'static str] {
        &["n"]
    }
    fn min_rank(&self) -> usize {
        2
    }
    fn check_params(&self, params: &[usize]) -> Result<()> {
        check_arity(self, params)?;
        if params[0] < 1 {
            return Err(Error::InvalidParams("path requires n >= 1".into()));
        }
        Ok(())
    }
    fn edge_count(&self, params: &[usize]) -> usize {
        params[0]
    }
    fn build(&self, params: &[usize], r: usize) -> Result<UniformHypergraph> {
        self.check_params(params)?;
        check_rank(self, r)?;
        let n = params[0];
        let mut b = CoreBuilder::new(r, n + 1);
        for v in 0..=n {
            b.label(v, format!("v{v}"));
        }
        for i in 1..=n {
            b.edge(&[i - 1, i]);
        }
        b.finish()
    }
}

impl FamilyGenerator for CycleFamily {
    fn name(&self) -> &'static str {
        "cycle"
    }
    fn param_names(&self) -> &'static [&'static str] {
        &["n"]
    }
    fn min_rank(&self) -> usize {
        2
    }
    fn check_params(&self, params: &[usize]) -> Result<()> {
        check_arity(self, params)?;
        if params[0] < 2 {
            return Err(Error::InvalidParams("cycle requires n >= 2".into()));
        }
        Ok(())
    }
    fn edge_count(&self, params: &[usize]) -> usize {
        params[0]
    }
    fn build(&self, params: &[usize], r: usize) -> Result<UniformHypergraph> {
        self.check_params(params)?;
        check_rank(self, r)?;
        let n = params[0];
        if n == 2 && r == 2 {
            return Err(Error::InvalidParams(
                "the 2-edge cycle needs rank >= 3".into(),
            ));
        }
        let mut b = CoreBuilder::new(r, n);
        for v in 0..n {
            b.label(v, format!("v{v}"));
        }
        for i in 0..n {
            b.edge(&[i, (i + 1) % n]);
        }
        b.finish()
    }
}

impl FamilyGenerator for EFamily {
    fn name(&self) -> &'static str {
        "E"
    }
    fn param_names(&self) -> &'static [&'static str] {
        &["i", "j", "k"]
    }
    fn min_rank(&self) -> usize {
        3
    }
    fn check_params(&self, params: &[usize]) -> Result<()> {
        check_arity(self, params)?;
        if params.iter().any(|&p| p < 1) {
            return Err(Error::InvalidParams(
                "E requires path lengths i,j,k >= 1".into(),
            ));
        }
        Ok(())
    }
    fn edge_count(&self, params: &[usize]) -> usize {
        params.iter().sum()
    }
    fn build(&self, params: &[usize], r: usize) -> Result<UniformHypergraph> {
        self.check_params(params)?;
        check_rank(self, r)?;
        let (i, j, k) = (params[0], params[1], params[2]);
        let mut b = CoreBuilder::new(3, 1 + i + j + k);
        b.label(0, "c");
        let mut next = 1;
        for (len, tag) in [(i, "x"), (j, "y"), (k, "z")] {
            let mut prev = 0;
            for step in 1..=len {
                b.label(next, format!("{tag}{step}"));
                b.edge(&[prev, next]);
                prev = next;
                next += 1;
            }
        }
        Ok(raise_rank(b.finish()?, r))
    }
}

impl FamilyGenerator for FFamily {
    fn name(&self) -> &'static str {
        "F"
    }
    fn param_names(&self) -> &'static [&'static str] {
        &["i", "j", "k"]
    }
    fn min_rank(&self) -> usize {
        3
    }
    fn check_params(&self, params: &[usize]) -> Result<()> {
        check_arity(self, params)?;
        if params.iter().any(|&p| p < 1) {
            return Err(Error::InvalidParams(
                "F requires path lengths i,j,k >= 1".into(),
            ));
        }
        Ok(())
    }
    fn edge_count(&self, params: &[usize]) -> usize {
        params.iter().sum::<usize>() + 1
    }
    fn build(&self, params: &[usize], r: usize) -> Result<UniformHypergraph> {
        self.check_params(params)?;
        check_rank(self, r)?;
        let (i, j, k) = (params[0], params[1], params[2]);
        let mut b = CoreBuilder::new(3, 3 + i + j + k);
        b.label(0, "a");
        b.label(1, "b");
        b.label(2, "c");
        b.edge(&[0, 1, 2]);
        let mut next = 3;
        for (root, len, tag) in [(0, i, "a"), (1, j, "b"), (2, k, "c")] {
            let mut prev = root;
            for step in 1..=len {
                b.label(next, format!("{tag}{step}"));
                b.edge(&[prev, next]);
                prev = next;
                next += 1;
            }
        }
        Ok(raise_rank(b.finish()?, r))
    }
}

impl FamilyGenerator for GFamily {
    fn name(&self) -> &'static str {
        "G"
    }
    fn param_names(&self) -> &'static [&'static str] {
        &["i", "j", "k", "l", "m"]
    }
    fn min_rank(&self) -> usize {
        3
    }
    fn check_params(&self, params: &[usize]) -> Result<()> {
        check_arity(self, params)?;
        let (i, j, _k, l, m) = (params[0], params[1], params[2], params[3], params[4]);
        if i < 1 || j < 1 || l < 1 || m < 1 {
            return Err(Error::InvalidParams(
                "G requires end path lengths i,j,l,m >= 1".into(),
            ));
        }
        Ok(())
    }
    fn edge_count(&self, params: &[usize]) -> usize {
        params.iter().sum::<usize>() + 2
    }
    fn build(&self, params: &[usize], r: usize) -> Result<UniformHypergraph> {
        self.check_params(params)?;
        check_rank(self, r)?;
        let (i, j, k, l, m) = (params[0], params[1], params[2], params[3], params[4]);
        // ending vertices a1,a2 (paths i,j) and b1,b2 (paths l,m) of a
        // central path with k+2 edges through chain vertices w1..w_{k+1}
        let mut b = CoreBuilder::new(3, 5 + k + i + j + l + m);
        b.label(0, "a1");
        b.label(1, "a2");
        b.label(2, "b1");
        b.label(3, "b2");
        let w0 = 4;
        for t in 0..=k {
            b.label(w0 + t, format!("w{}", t + 1));
        }
        b.edge(&[0, 1, w0]);
        for t in 0..k {
            b.edge(&[w0 + t, w0 + t + 1]);
        }
        b.edge(&[w0 + k, 2, 3]);
        let mut next = 5 + k;
        for (root, len, tag) in [(0, i, "p"), (1, j, "q"), (2, l, "s"), (3, m, "t")] {
            let mut prev = root;
            for step in 1..=len {
                b.label(next, format!("{tag}{step}"));
                b.edge(&[prev, next]);
                prev = next;
                next += 1;
            }
        }
        Ok(raise_rank(b.finish()?, r))
    }
}

impl FamilyGenerator for BdFamily {
    fn name(&self) -> &'static str {
        "BD"
    }
    fn param_names(&self) -> &'static [&'static str] {
        &["n"]
    }
    fn min_rank(&self) -> usize {
        3
    }
    fn check_params(&self, params: &[usize]) -> Result<()> {
        check_arity(self, params)?;
        if params[0] < 8 {
            return Err(Error::InvalidParams("BD requires n >= 8".into()));
        }
        Ok(())
    }
    fn edge_count(&self, params: &[usize]) -> usize {
        params[0]
    }
    fn build(&self, params: &[usize], r: usize) -> Result<UniformHypergraph> {
        self.check_params(params)?;
        check_rank(self, r)?;
        let n = params[0];
        // one end like the G families (pendants at both ending vertices of
        // the first path edge), the other a degree-3 fork of two pendant
        // edges at the last chain vertex
        let chain = n - 4;
        let mut b = CoreBuilder::new(3, 2 + chain);
        b.label(0, "a1");
        b.label(1, "a2");
        let w0 = 2;
        for t in 0..chain {
            b.label(w0 + t, format!("w{}", t + 1));
        }
        b.edge(&[0, 1, w0]);
        for t in 0..chain - 1 {
            b.edge(&[w0 + t, w0 + t + 1]);
        }
        let fork = w0 + chain - 1;
        b.pendant(0);
        b.pendant(1);
        b.pendant(fork);
        b.pendant(fork);
        Ok(raise_rank(b.finish()?, r))
    }
}

/// Collects core vertices and edges, then pads every edge with fresh leaf
/// vertices up to the rank, allocated edge-by-edge.
struct CoreBuilder {
    r: usize,
    num_core: usize,
    edges: Vec<Vec<usize>>,
    labels: Vec<(usize, String)>,
}

impl CoreBuilder {
    fn new(r: usize, num_core: usize) -> Self {
        CoreBuilder {
            r,
            num_core,
            edges: Vec::new(),
            labels: Vec::new(),
        }
    }

    fn label(&mut self, v: usize, name: impl Into<String>) {
        self.labels.push((v, name.into()));
    }

    fn edge(&mut self, core: &[usize]) {
        self.edges.push(core.to_vec());
    }

    /// An edge whose only core vertex is `at`; the rest are leaves.
    fn pendant(&mut self, at: usize) {
        self.edges.push(vec![at]);
    }

    fn finish(self) -> Result<UniformHypergraph> {
        let mut nv = self.num_core;
        let mut edges = self.edges;
        for e in &mut edges {
            while e.len() < self.r {
                e.push(nv);
                nv += 1;
            }
        }
        let mut h = UniformHypergraph::new(self.r, nv, edges)?;
        for (v, name) in self.labels {
            h.set_label(v, name);
        }
        Ok(h)
    }
}

fn raise_rank(mut h: UniformHypergraph, r: usize) -> UniformHypergraph {
    while h.r() < r {
        h = h.extend();
    }
    h
}

// ---------------------------------------------------------------------------
// Named entry points
// ---------------------------------------------------------------------------

/// A_n^(r): the simple path with n edges.
pub fn make_path(n: usize, r: usize) -> Result<UniformHypergraph> {
    PATH.build(&[n], r)
}

/// C_n^(r): the cycle with n edges; n = 2 gives the two edges sharing two
/// vertices.
pub fn make_cycle(n: usize, r: usize) -> Result<UniformHypergraph> {
    CYCLE.build(&[n], r)
}

/// E^(r)_{i,j,k}: three paths of lengths i, j, k attached to one vertex.
pub fn make_e(i: usize, j: usize, k: usize, r: usize) -> Result<UniformHypergraph> {
    E_FAMILY.build(&[i, j, k], r)
}

/// F^(r)_{i,j,k}: paths of lengths i, j, k attached to the three core
/// vertices of one edge.
pub fn make_f(i: usize, j: usize, k: usize, r: usize) -> Result<UniformHypergraph> {
    F_FAMILY.build(&[i, j, k], r)
}

/// G^(r)_{i,j:k:l,m}: paths of lengths i, j, l, m attached to the four
/// ending vertices of a path of length k+2.
pub fn make_g(
    i: usize,
    j: usize,
    k: usize,
    l: usize,
    m: usize,
    r: usize,
) -> Result<UniformHypergraph> {
    G_FAMILY.build(&[i, j, k, l, m], r)
}

/// BD^(r)_n: reconstructed by regrafting one end of G^(r)_{1,2:n-7:1,1}
/// into a two-pendant fork, the same move that turns F_{1,2,n-4} into
/// E_{1,1,n-2}.
pub fn make_bd(n: usize, r: usize) -> Result<UniformHypergraph> {
    BD_FAMILY.build(&[n], r)
}

// ---------------------------------------------------------------------------
// FamilySpec
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Path,
    E,
    F,
    G,
    Cycle,
    Bd,
    FromFile,
}

impl Family {
    pub fn generator(&self) -> Option<&'static dyn FamilyGenerator> {
        match self {
            Family::Path => Some(&PATH),
            Family::E => Some(&E_FAMILY),
            Family::F => Some(&F_FAMILY),
            Family::G => Some(&G_FAMILY),
            Family::Cycle => Some(&CYCLE),
            Family::Bd => Some(&BD_FAMILY),
            Family::FromFile => None,
        }
    }

    pub fn parse(name: &str) -> Result<Family> {
        match name.to_ascii_lowercase().as_str() {
            "path" | "a" => Ok(Family::Path),
            "e" => Ok(Family::E),
            "f" => Ok(Family::F),
            "g" => Ok(Family::G),
            "cycle" | "c" => Ok(Family::Cycle),
            "bd" => Ok(Family::Bd),
            "fromfile" | "file" => Ok(Family::FromFile),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }
}

/// A family name with its parameters and rank; the uniform handle used by
/// the CLI and the ordering harness.
#[derive(Debug, Clone)]
pub struct FamilySpec {
    pub family: Family,
    pub params: Vec<usize>,
    pub r: usize,
    pub source: Option<PathBuf>,
}

impl FamilySpec {
    pub fn generated(family: Family, params: Vec<usize>, r: usize) -> Result<Self> {
        let gen = family
            .generator()
            .ok_or_else(|| Error::InvalidParams("FromFile spec needs a path".into()))?;
        gen.check_params(&params)?;
        Ok(FamilySpec {
            family,
            params,
            r,
            source: None,
        })
    }

    pub fn from_file(path: PathBuf) -> Self {
        FamilySpec {
            family: Family::FromFile,
            params: Vec::new(),
            r: 0,
            source: Some(path),
        }
    }

    /// Derived edge count; `None` for file-backed specs.
    pub fn edge_count(&self) -> Option<usize> {
        self.family.generator().map(|g| g.edge_count(&self.params))
    }

    pub fn build(&self) -> Result<UniformHypergraph> {
        match self.family.generator() {
            Some(gen) => gen.build(&self.params, self.r),
            None => {
                let path = self
                    .source
                    .as_ref()
                    .ok_or_else(|| Error::InvalidParams("FromFile spec needs a path".into()))?;
                crate::hypergraph::read_hypergraph(path)
            }
        }
    }
}
