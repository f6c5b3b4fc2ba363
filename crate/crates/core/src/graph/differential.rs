//! Edge contraction, its transpose (vertex splitting) and the L-infinity brackets.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;
use rayon::prelude::*;

use super::enumerate::{enumerate_admissible, enumerate_with_internal, EnumLimits};
use super::{glue, CanonicalGraph, GraphError, GraphVector, RawGraph};
use crate::linalg::{Rational, SparseRationalMatrix};

/// Contracting edge `i` of `g`, or `None` when the result is inadmissible
/// (edge between externals, or edge on a triangle).
fn contract_edge(g: &CanonicalGraph, i: usize) -> Option<RawGraph> {
    let (a, b) = g.edge_at(i);
    if g.is_external(a) && g.is_external(b) {
        return None;
    }
    let mut adj = vec![0u32; g.n_vertices()];
    for (x, y) in g.edges() {
        adj[x] |= 1 << y;
        adj[y] |= 1 << x;
    }
    if adj[a] & adj[b] != 0 {
        return None;
    }
    // edges are stored with a < b and externals first, so `b` is internal and disappears
    let relabel = |v: usize| match v.cmp(&b) {
        std::cmp::Ordering::Less => v,
        std::cmp::Ordering::Equal => a,
        std::cmp::Ordering::Greater => v - 1,
    };
    let edges = g
        .edges()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, (x, y))| (relabel(x), relabel(y)))
        .collect();
    Some(RawGraph::new(g.n_ext(), g.n_int() - 1, edges))
}

/// `d(g) = sum_e (-1)^(ord(e) - 1) g/e` over admissible contractions.
pub fn d_contract(g: &CanonicalGraph) -> GraphVector {
    let mut out = GraphVector::zero(g.n_ext());
    if g.is_zero() {
        return out;
    }
    for i in 0..g.n_edges() {
        if let Some(raw) = contract_edge(g, i) {
            let (c, s) = raw.canonicalize_unchecked();
            let sign = if i % 2 == 0 { s } else { -s };
            out.add_term(c, Rational::from_integer(sign.into()));
        }
    }
    out
}

pub fn d_contract_vector(v: &GraphVector) -> GraphVector {
    let mut out = GraphVector::zero(v.n_ext());
    for (g, c) in v.iter() {
        out.add_scaled(&d_contract(g), c);
    }
    out
}

/// Matrix of `d_contract` with columns indexed by `src` and rows by `tgt`.
/// Terms outside `tgt` are dropped.
pub fn contract_matrix(src: &[CanonicalGraph], tgt: &[CanonicalGraph]) -> SparseRationalMatrix {
    let index: HashMap<&CanonicalGraph, usize> = tgt.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let cols: Vec<Vec<(usize, usize, Rational)>> = src
        .par_iter()
        .enumerate()
        .map(|(j, g)| {
            d_contract(g)
                .iter()
                .filter_map(|(h, c)| index.get(h).map(|&i| (i, j, c.clone())))
                .collect()
        })
        .collect();
    SparseRationalMatrix::from_triplets(tgt.len(), src.len(), cols.into_iter().flatten())
        .expect("indices come from the bases")
}

/// Matrix of vertex splitting from `src` (cg degree `d`) to `tgt` (cg degree
/// `d + 1`): the transpose of contraction from `tgt` to `src`.
pub fn cg_split_matrix(src: &[CanonicalGraph], tgt: &[CanonicalGraph]) -> SparseRationalMatrix {
    contract_matrix(tgt, src).transpose()
}

/// Inverse of `d_contract` over a fixed set of sources: for every graph `x`,
/// the sources `y` whose contraction contains `x`, with that coefficient.
pub struct ContractionIndex {
    sources: Arc<Vec<CanonicalGraph>>,
    preimages: HashMap<CanonicalGraph, Vec<(usize, Rational)>>,
}

impl ContractionIndex {
    pub fn new(sources: Arc<Vec<CanonicalGraph>>) -> Self {
        let images: Vec<GraphVector> = sources.par_iter().map(d_contract).collect();
        let mut preimages: HashMap<CanonicalGraph, Vec<(usize, Rational)>> = HashMap::new();
        for (j, img) in images.into_iter().enumerate() {
            for (x, c) in img.iter() {
                preimages.entry(x.clone()).or_default().push((j, c.clone()));
            }
        }
        Self { sources, preimages }
    }

    pub fn sources(&self) -> &[CanonicalGraph] {
        &self.sources
    }

    pub fn preimages(&self, x: &CanonicalGraph) -> &[(usize, Rational)] {
        self.preimages.get(x).map_or(&[], Vec::as_slice)
    }

    /// `sum_y <x, d_contract y> y`.
    pub fn split(&self, x: &CanonicalGraph, n_ext: usize) -> GraphVector {
        let mut out = GraphVector::zero(n_ext);
        for (j, c) in self.preimages(x) {
            out.add_term(self.sources[*j].clone(), c.clone());
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SplitView {
    /// Internally connected graphs only (the complex CG(n)).
    Connected,
    /// All admissible graphs (the coalgebra graphs(n)).
    All,
}

type IndexCache = Mutex<HashMap<(SplitView, usize, usize, usize), Arc<ContractionIndex>>>;

/// Cached index over graphs with `n` externals, weight `w` and `m` internals.
pub fn contraction_index(
    view: SplitView,
    n: usize,
    w: usize,
    m: usize,
    limits: EnumLimits,
) -> Result<Arc<ContractionIndex>, GraphError> {
    static C: OnceLock<IndexCache> = OnceLock::new();
    let cache = C.get_or_init(Default::default);
    let key = (view, n, w, m);
    if let Some(ix) = cache.lock().unwrap().get(&key).cloned() {
        return Ok(ix);
    }
    let sources = match view {
        SplitView::Connected => enumerate_with_internal(n, w, m, limits)?,
        SplitView::All => Arc::new(
            enumerate_admissible(n, w, limits)?
                .iter()
                .filter(|g| g.n_int() == m)
                .cloned()
                .collect(),
        ),
    };
    let ix = Arc::new(ContractionIndex::new(sources));
    cache.lock().unwrap().insert(key, ix.clone());
    Ok(ix)
}

/// Vertex-splitting differential, defined as the transpose of `d_contract`
/// on canonical bases of the chosen view.
pub fn d_split(v: &GraphVector, view: SplitView, limits: EnumLimits) -> Result<GraphVector, GraphError> {
    let mut out = GraphVector::zero(v.n_ext());
    for (x, c) in v.iter() {
        let ix = contraction_index(view, v.n_ext(), x.weight(), x.n_int() + 1, limits)?;
        out.add_scaled(&ix.split(x, v.n_ext()), c);
    }
    Ok(out)
}

/// `[g_1, ..., g_k]`: glue the factors at their externals, split, and keep the
/// internally connected terms.
pub fn lbracket(gs: &[CanonicalGraph], limits: EnumLimits) -> Result<GraphVector, GraphError> {
    assert!(gs.len() >= 2, "brackets take at least two arguments");
    let n = gs[0].n_ext();
    for g in gs {
        if g.n_ext() != n {
            return Err(GraphError::ExternalMismatch(n, g.n_ext()));
        }
        if !g.is_internally_connected() {
            return Err(GraphError::Malformed(format!("{g} is not internally connected")));
        }
    }
    let refs: Vec<&CanonicalGraph> = gs.iter().collect();
    let raw = match glue(&refs) {
        Ok(r) => r,
        Err(GraphError::GluedDoubleEdge(..)) => return Ok(GraphVector::zero(n)),
        Err(e) => return Err(e),
    };
    let (p, s) = raw.canonicalize_unchecked();
    if p.is_zero() {
        return Ok(GraphVector::zero(n));
    }
    let ix = contraction_index(SplitView::Connected, n, p.weight(), p.n_int() + 1, limits)?;
    Ok(ix.split(&p, n).scaled(&Rational::from_integer(s.into())))
}

/// Multilinear extension of [`lbracket`].
pub fn lbracket_vectors(vs: &[GraphVector], limits: EnumLimits) -> Result<GraphVector, GraphError> {
    let n = vs.first().map_or(0, GraphVector::n_ext);
    let mut out = GraphVector::zero(n);
    let mut stack: Vec<(CanonicalGraph, Rational)> = Vec::new();
    fn rec(
        k: usize,
        vs: &[GraphVector],
        stack: &mut Vec<(CanonicalGraph, Rational)>,
        out: &mut GraphVector,
        limits: EnumLimits,
    ) -> Result<(), GraphError> {
        if k == vs.len() {
            let gs: Vec<CanonicalGraph> = stack.iter().map(|(g, _)| g.clone()).collect();
            let c = stack.iter().fold(Rational::from_integer(1.into()), |a, (_, x)| a * x);
            if !c.is_zero() {
                out.add_scaled(&lbracket(&gs, limits)?, &c);
            }
            return Ok(());
        }
        for (g, c) in vs[k].iter() {
            stack.push((g.clone(), c.clone()));
            rec(k + 1, vs, stack, out, limits)?;
            stack.pop();
        }
        Ok(())
    }
    rec(0, vs, &mut stack, &mut out, limits)?;
    Ok(out)
}
