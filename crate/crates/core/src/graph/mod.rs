//! Admissible graphs with ordered edges.
//!
//! Vertices are numbered from zero: externals `0..n_ext`, internals
//! `n_ext..n_ext + n_int`. The text and JSON formats use the one-based
//! numbering `1..=n` for externals and `n+1..=n+m` for internals.

pub(crate) mod canon;
mod differential;
mod enumerate;
mod vector;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use canon::permutation_sign;
pub use differential::{
    cg_split_matrix, contract_matrix, contraction_index, d_contract, d_contract_vector, d_split, lbracket,
    lbracket_vectors, ContractionIndex, SplitView,
};
pub use enumerate::{enumerate_admissible, enumerate_internally_connected, enumerate_with_internal, EnumLimits};
pub use vector::GraphVector;

/// First violated admissibility condition.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("double edge between {0} and {1}")]
    DoubleEdge(usize, usize),
    #[error("simple loop at vertex {0}")]
    SimpleLoop(usize),
    #[error("internal vertex {vertex} has valence {valence} < 3")]
    LowValence { vertex: usize, valence: usize },
    #[error("internal vertex {0} is not connected to any external vertex")]
    Unanchored(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("malformed graph: {0}")]
    Malformed(String),
    #[error("inadmissible graph: {0}")]
    Inadmissible(#[from] Violation),
    #[error("graphs have different external counts ({0} vs {1})")]
    ExternalMismatch(usize, usize),
    #[error("gluing creates a double edge between externals {0} and {1}")]
    GluedDoubleEdge(usize, usize),
    #[error("enumeration limit of {limit} graphs exceeded at n={n}, weight={weight}")]
    ResourceLimit { n: usize, weight: usize, limit: usize },
}

/// A graph as given, with edge order = sequence order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RawGraph {
    pub n_ext: usize,
    pub n_int: usize,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Grading {
    pub star_degree: i64,
    pub cg_degree: i64,
    pub weight: i64,
}

impl Grading {
    pub fn of(n_int: usize, n_edges: usize) -> Self {
        let (e, m) = (n_edges as i64, n_int as i64);
        Self {
            star_degree: e - 2 * m,
            cg_degree: 1 - e + 2 * m,
            weight: e - m,
        }
    }
}

impl RawGraph {
    pub fn new(n_ext: usize, n_int: usize, edges: Vec<(usize, usize)>) -> Self {
        Self { n_ext, n_int, edges }
    }

    pub fn n_vertices(&self) -> usize {
        self.n_ext + self.n_int
    }

    pub fn check_labels(&self) -> Result<(), GraphError> {
        let nv = self.n_vertices();
        if nv > 32 {
            return Err(GraphError::Malformed(format!("{nv} vertices exceed the limit of 32")));
        }
        if let Some(&(a, b)) = self.edges.iter().find(|&&(a, b)| a >= nv || b >= nv) {
            return Err(GraphError::Malformed(format!(
                "edge ({a}, {b}) refers to a vertex outside 0..{nv}"
            )));
        }
        Ok(())
    }

    /// Checks labels, then the four admissibility conditions in order.
    pub fn validate(&self) -> Result<(), GraphError> {
        self.check_labels()?;
        let mut seen = std::collections::HashSet::new();
        for &(a, b) in &self.edges {
            if a != b && !seen.insert((a.min(b), a.max(b))) {
                return Err(Violation::DoubleEdge(a.min(b), a.max(b)).into());
            }
        }
        if let Some(&(a, _)) = self.edges.iter().find(|&&(a, b)| a == b) {
            return Err(Violation::SimpleLoop(a).into());
        }
        let val = self.valences();
        for v in self.n_ext..self.n_vertices() {
            if val[v] < 3 {
                return Err(Violation::LowValence {
                    vertex: v,
                    valence: val[v],
                }
                .into());
            }
        }
        let reach = self.anchored();
        if let Some(v) = (self.n_ext..self.n_vertices()).find(|&v| !reach[v]) {
            return Err(Violation::Unanchored(v).into());
        }
        Ok(())
    }

    pub fn valences(&self) -> Vec<usize> {
        let mut val = vec![0; self.n_vertices()];
        for &(a, b) in &self.edges {
            val[a] += 1;
            val[b] += 1;
        }
        val
    }

    fn anchored(&self) -> Vec<bool> {
        let nv = self.n_vertices();
        let mut reach = vec![false; nv];
        let mut stack: Vec<usize> = (0..self.n_ext).collect();
        for &v in &stack {
            reach[v] = true;
        }
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && !reach[y] {
                        reach[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        reach
    }

    pub fn grading(&self) -> Grading {
        Grading::of(self.n_int, self.edges.len())
    }

    /// Canonical form and the sign `s` with `self = s * canonical`.
    pub fn canonicalize(&self) -> Result<(CanonicalGraph, i8), GraphError> {
        self.validate()?;
        Ok(self.canonicalize_unchecked())
    }

    pub(crate) fn canonicalize_unchecked(&self) -> (CanonicalGraph, i8) {
        let l = canon::canonical_labeling(self.n_ext, self.n_int, &self.edges, true);
        let g = CanonicalGraph {
            n_ext: self.n_ext as u8,
            n_int: self.n_int as u8,
            edges: l.edges,
            is_zero: l.odd_automorphism,
        };
        let sign = if g.is_zero { 1 } else { l.sign };
        (g, sign)
    }

    /// Graph text format, one-based: `n=3; m=1; edges=[(1,4),(2,4),(3,4)]`.
    pub fn to_text(&self) -> String {
        let edges: Vec<String> = self
            .edges
            .iter()
            .map(|(a, b)| format!("({},{})", a + 1, b + 1))
            .collect();
        format!("n={}; m={}; edges=[{}]", self.n_ext, self.n_int, edges.join(","))
    }
}

impl FromStr for RawGraph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, GraphError> {
        let bad = |msg: &str| GraphError::Malformed(format!("{msg} in {s:?}"));
        let mut n = None;
        let mut m = None;
        let mut edges = None;
        for part in s.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (key, val) = part.split_once('=').ok_or_else(|| bad("missing '='"))?;
            match key.trim() {
                "n" => n = Some(val.trim().parse::<usize>().map_err(|_| bad("bad n"))?),
                "m" => m = Some(val.trim().parse::<usize>().map_err(|_| bad("bad m"))?),
                "edges" => edges = Some(parse_edge_list(val).ok_or_else(|| bad("bad edge list"))?),
                other => return Err(bad(&format!("unknown key {other:?}"))),
            }
        }
        let (n, m, edges) = (
            n.ok_or_else(|| bad("missing n"))?,
            m.ok_or_else(|| bad("missing m"))?,
            edges.ok_or_else(|| bad("missing edges"))?,
        );
        one_based(n, m, edges)
    }
}

fn parse_edge_list(s: &str) -> Option<Vec<(usize, usize)>> {
    let s = s.trim().strip_prefix('[')?.strip_suffix(']')?.trim();
    if s.is_empty() {
        return Some(Vec::new());
    }
    let mut out = Vec::new();
    let mut rest = s;
    loop {
        rest = rest.trim_start().strip_prefix('(')?;
        let (inner, tail) = rest.split_once(')')?;
        let (a, b) = inner.split_once(',')?;
        out.push((a.trim().parse().ok()?, b.trim().parse().ok()?));
        rest = tail.trim_start();
        if rest.is_empty() {
            return Some(out);
        }
        rest = rest.strip_prefix(',')?;
    }
}

fn one_based(n: usize, m: usize, edges: Vec<(usize, usize)>) -> Result<RawGraph, GraphError> {
    let nv = n + m;
    let edges = edges
        .into_iter()
        .map(|(a, b)| {
            if a == 0 || b == 0 || a > nv || b > nv {
                Err(GraphError::Malformed(format!("edge ({a},{b}) outside labels 1..={nv}")))
            } else {
                Ok((a - 1, b - 1))
            }
        })
        .collect::<Result<_, _>>()?;
    Ok(RawGraph::new(n, m, edges))
}

/// JSON mirror of the text format (one-based labels).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n_ext: usize,
    pub n_int: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&RawGraph> for GraphJson {
    fn from(g: &RawGraph) -> Self {
        Self {
            n_ext: g.n_ext,
            n_int: g.n_int,
            edges: g.edges.iter().map(|&(a, b)| [a + 1, b + 1]).collect(),
        }
    }
}

impl TryFrom<GraphJson> for RawGraph {
    type Error = GraphError;

    fn try_from(j: GraphJson) -> Result<Self, GraphError> {
        one_based(j.n_ext, j.n_int, j.edges.into_iter().map(|[a, b]| (a, b)).collect())
    }
}

/// An admissible graph in canonical form: the lexicographically least sorted
/// edge list over all relabelings of the internal vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalGraph {
    n_ext: u8,
    n_int: u8,
    edges: Vec<(u8, u8)>,
    is_zero: bool,
}

impl CanonicalGraph {
    /// The graph with a single edge between externals `a` and `b` (zero-based).
    pub fn edge(n_ext: usize, a: usize, b: usize) -> Self {
        assert!(a != b && a < n_ext && b < n_ext);
        Self {
            n_ext: n_ext as u8,
            n_int: 0,
            edges: vec![(a.min(b) as u8, a.max(b) as u8)],
            is_zero: false,
        }
    }

    /// The graph with no edges and no internal vertices (unit of the product).
    pub fn empty(n_ext: usize) -> Self {
        Self {
            n_ext: n_ext as u8,
            n_int: 0,
            edges: Vec::new(),
            is_zero: false,
        }
    }

    pub fn n_ext(&self) -> usize {
        self.n_ext as usize
    }

    pub fn n_int(&self) -> usize {
        self.n_int as usize
    }

    pub fn n_vertices(&self) -> usize {
        self.n_ext() + self.n_int()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_zero(&self) -> bool {
        self.is_zero
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|&(a, b)| (a as usize, b as usize))
    }

    pub fn edge_at(&self, i: usize) -> (usize, usize) {
        let (a, b) = self.edges[i];
        (a as usize, b as usize)
    }

    pub fn is_external(&self, v: usize) -> bool {
        v < self.n_ext()
    }

    pub fn grading(&self) -> Grading {
        Grading::of(self.n_int(), self.n_edges())
    }

    pub fn weight(&self) -> usize {
        self.n_edges() - self.n_int()
    }

    pub fn to_raw(&self) -> RawGraph {
        RawGraph::new(self.n_ext(), self.n_int(), self.edges().collect())
    }

    pub fn valences(&self) -> Vec<usize> {
        let mut val = vec![0; self.n_vertices()];
        for (a, b) in self.edges() {
            val[a] += 1;
            val[b] += 1;
        }
        val
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges().filter_map(move |(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }

    /// Connected after deleting the external vertices (a lone external edge counts).
    pub fn is_internally_connected(&self) -> bool {
        if self.n_int() == 0 {
            return self.n_edges() == 1;
        }
        internal_components(self).len() == 1 && self.edges().all(|(a, b)| !(self.is_external(a) && self.is_external(b)))
    }

    /// Externals with at least one incident edge.
    pub fn touched_externals(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self
            .edges()
            .flat_map(|(a, b)| [a, b])
            .filter(|&v| self.is_external(v))
            .collect();
        t.sort_unstable();
        t.dedup();
        t
    }

    /// Disjoint union with externals identified, edges of `self` first.
    /// Returns the canonical product and `s` with `self * other = s * product`.
    pub fn product(&self, other: &Self) -> Result<(CanonicalGraph, i8), GraphError> {
        if self.n_ext != other.n_ext {
            return Err(GraphError::ExternalMismatch(self.n_ext(), other.n_ext()));
        }
        let raw = glue(&[self, other])?;
        Ok(raw.canonicalize_unchecked())
    }

    /// Splits into internally connected factors (components after deleting the
    /// externals, plus lone external edges). Returns the factors in sorted order
    /// and the sign `s` with `self = s * (f_1 * ... * f_k)`.
    pub fn factorize(&self) -> (Vec<CanonicalGraph>, i8) {
        let comps = internal_components(self);
        let mut comp_of = vec![usize::MAX; self.n_vertices()];
        for (c, vs) in comps.iter().enumerate() {
            for &v in vs {
                comp_of[v] = c;
            }
        }
        // group edges by factor, remembering original positions
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); comps.len()];
        let mut lone: Vec<usize> = Vec::new();
        for (i, (a, b)) in self.edges().enumerate() {
            let v = if self.is_external(a) { b } else { a };
            if self.is_external(v) {
                lone.push(i);
            } else {
                groups[comp_of[v]].push(i);
            }
        }
        groups.extend(lone.into_iter().map(|i| vec![i]));
        let mut parts: Vec<(CanonicalGraph, i8, Vec<usize>)> = groups
            .into_iter()
            .map(|idx| {
                let mut verts: Vec<usize> = idx
                    .iter()
                    .flat_map(|&i| {
                        let (a, b) = self.edge_at(i);
                        [a, b]
                    })
                    .filter(|&v| !self.is_external(v))
                    .collect();
                verts.sort_unstable();
                verts.dedup();
                let relabel = |v: usize| {
                    if self.is_external(v) {
                        v
                    } else {
                        self.n_ext() + verts.binary_search(&v).unwrap()
                    }
                };
                let raw = RawGraph::new(
                    self.n_ext(),
                    verts.len(),
                    idx.iter()
                        .map(|&i| {
                            let (a, b) = self.edge_at(i);
                            (relabel(a), relabel(b))
                        })
                        .collect(),
                );
                let (g, s) = raw.canonicalize_unchecked();
                (g, s, idx)
            })
            .collect();
        parts.sort_by(|x, y| x.0.cmp(&y.0));
        let order: Vec<usize> = parts.iter().flat_map(|p| p.2.iter().copied()).collect();
        let sign = parts.iter().fold(permutation_sign(order.into_iter()), |s, p| s * p.1);
        (parts.into_iter().map(|p| p.0).collect(), sign)
    }
}

/// Product of several canonical graphs as a raw graph (edges in factor order).
pub(crate) fn glue(factors: &[&CanonicalGraph]) -> Result<RawGraph, GraphError> {
    let n = factors.first().map_or(0, |g| g.n_ext());
    let mut edges = Vec::new();
    let mut shift = n;
    let mut ext_pairs = std::collections::HashSet::new();
    for g in factors {
        if g.n_ext() != n {
            return Err(GraphError::ExternalMismatch(n, g.n_ext()));
        }
        for (a, b) in g.edges() {
            let map = |v: usize| if v < n { v } else { v - n + shift };
            if a < n && b < n && !ext_pairs.insert((a, b)) {
                return Err(GraphError::GluedDoubleEdge(a, b));
            }
            edges.push((map(a), map(b)));
        }
        shift += g.n_int();
    }
    Ok(RawGraph::new(n, shift - n, edges))
}

/// Connected components of the internal vertices (externals deleted).
fn internal_components(g: &CanonicalGraph) -> Vec<Vec<usize>> {
    let n = g.n_ext();
    let m = g.n_int();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for (a, b) in g.edges() {
        if a >= n && b >= n {
            let (ra, rb) = (find(&mut parent, a - n), find(&mut parent, b - n));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut index = vec![usize::MAX; m];
    for v in 0..m {
        let r = find(&mut parent, v);
        if index[r] == usize::MAX {
            index[r] = comps.len();
            comps.push(Vec::new());
        }
        comps[index[r]].push(v + n);
    }
    comps
}

impl fmt::Display for CanonicalGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_raw().to_text())
    }
}
