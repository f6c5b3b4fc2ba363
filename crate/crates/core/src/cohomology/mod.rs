//! Cohomology of the graph complexes, the map from `t_n` and its inverse,
//! the tree quotient and the one-loop trace.

mod oneloop;
mod tree;

#[cfg(test)]
mod tests;

pub use oneloop::{
    d1, div_factorization_check, is_wheel, one_loop_graphs, one_loop_trace, wheel_trace, DivFactorization,
    OneLoopQuotient,
};
pub use tree::{tree_block, tree_h0, tree_to_sder_matrix, TreeH0};

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{
    cg_split_matrix, contract_matrix, d_split, enumerate_admissible, enumerate_internally_connected, lbracket_vectors,
    CanonicalGraph, EnumLimits, GraphError, GraphVector, SplitView,
};
use crate::lie::free::{standard_factorization, Word};
use crate::lie::tn::{tn_basis, tn_dimension, TnElement};
use crate::lie::trees::tree_to_lie_word;
use crate::linalg::{cohomology_dim, ColumnSolver, LinAlgError, Rational, SparseRationalMatrix, SparseVec};

#[derive(Debug, Error)]
pub enum CohomologyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error("vector is not closed under the splitting differential")]
    NotClosed,
    #[error("vector is not homogeneous of cg degree 0 and a single weight")]
    NotHomogeneous,
    #[error("graph {0} is not in the basis of the complex")]
    OutsideBasis(String),
    #[error("graph {0} does not have the required shape")]
    Shape(String),
}

/// A finite graded piece of a graph complex with the splitting differential.
#[derive(Clone, Debug)]
pub struct GradedComplex {
    pub n: usize,
    pub weight: usize,
    bases: BTreeMap<i64, Vec<CanonicalGraph>>,
    index: HashMap<CanonicalGraph, (i64, usize)>,
    diffs: BTreeMap<i64, SparseRationalMatrix>,
}

impl GradedComplex {
    /// Complex spanned by `graphs` (all of the same weight); the differential is
    /// splitting followed by projection onto the span. Fails if `d² != 0`.
    pub fn from_graphs(
        n: usize,
        weight: usize,
        graphs: impl IntoIterator<Item = CanonicalGraph>,
    ) -> Result<Self, CohomologyError> {
        let mut bases: BTreeMap<i64, Vec<CanonicalGraph>> = BTreeMap::new();
        for g in graphs {
            bases.entry(g.grading().cg_degree).or_default().push(g);
        }
        let index = bases
            .iter()
            .flat_map(|(&d, gs)| gs.iter().enumerate().map(move |(i, g)| (g.clone(), (d, i))))
            .collect();
        let mut diffs = BTreeMap::new();
        for (&d, src) in &bases {
            if let Some(tgt) = bases.get(&(d + 1)) {
                diffs.insert(d, cg_split_matrix(src, tgt));
            }
        }
        let c = Self {
            n,
            weight,
            bases,
            index,
            diffs,
        };
        for &d in c.bases.keys() {
            cohomology_dim(&c.differential(d - 1), &c.differential(d))?;
        }
        Ok(c)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.bases.keys().copied()
    }

    pub fn basis(&self, d: i64) -> &[CanonicalGraph] {
        self.bases.get(&d).map_or(&[], Vec::as_slice)
    }

    pub fn dim(&self, d: i64) -> usize {
        self.basis(d).len()
    }

    /// The differential from degree `d` to `d + 1` (possibly empty).
    pub fn differential(&self, d: i64) -> SparseRationalMatrix {
        self.diffs
            .get(&d)
            .cloned()
            .unwrap_or_else(|| SparseRationalMatrix::zeros(self.dim(d + 1), self.dim(d)))
    }

    pub fn cohomology_dim(&self, d: i64) -> usize {
        cohomology_dim(&self.differential(d - 1), &self.differential(d)).expect("checked at construction")
    }

    /// Cohomology dimension in every degree carrying graphs.
    pub fn cohomology_dims(&self) -> BTreeMap<i64, usize> {
        self.degrees().map(|d| (d, self.cohomology_dim(d))).collect()
    }

    /// Coordinates of `v` over the degree-`d` basis.
    pub fn coords(&self, v: &GraphVector, d: i64) -> Result<SparseVec, CohomologyError> {
        let mut out: Vec<(usize, Rational)> = Vec::with_capacity(v.len());
        for (g, c) in v.iter() {
            match self.index.get(g) {
                Some(&(e, i)) if e == d => out.push((i, c.clone())),
                _ => return Err(CohomologyError::OutsideBasis(g.to_string())),
            }
        }
        out.sort_by_key(|(i, _)| *i);
        Ok(out)
    }

    pub fn vector(&self, d: i64, coords: &[(usize, Rational)]) -> GraphVector {
        let mut v = GraphVector::zero(self.n);
        for (i, c) in coords {
            v.add_term(self.basis(d)[*i].clone(), c.clone());
        }
        v
    }

    /// Is `v` (degree `d`) in the image of the differential from degree `d - 1`?
    pub fn is_exact(&self, v: &GraphVector, d: i64) -> Result<bool, CohomologyError> {
        if v.is_zero() {
            return Ok(true);
        }
        let x = self.coords(v, d)?;
        Ok(ColumnSolver::new(&self.differential(d - 1)).contains(&x))
    }
}

type BlockCache = Mutex<HashMap<(usize, usize), Arc<OnceLock<Arc<GradedComplex>>>>>;

/// `d² = 0` for contraction on all admissible graphs and for splitting on
/// the internally connected ones, in one `(n, w)` block.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SquareCheck {
    pub n: usize,
    pub weight: usize,
    pub admissible: usize,
    pub internally_connected: usize,
    /// Internal counts `m` where contracting twice from `m + 2` is nonzero.
    pub contract_failures: Vec<usize>,
    /// CG degrees `d` where splitting twice from `d` is nonzero.
    pub split_failures: Vec<i64>,
}

impl SquareCheck {
    pub fn passed(&self) -> bool {
        self.contract_failures.is_empty() && self.split_failures.is_empty()
    }
}

pub fn differential_squares(n: usize, w: usize, limits: EnumLimits) -> Result<SquareCheck, CohomologyError> {
    let all = enumerate_admissible(n, w, limits)?;
    let mut by_m: BTreeMap<usize, Vec<CanonicalGraph>> = BTreeMap::new();
    for g in all.iter() {
        by_m.entry(g.n_int()).or_default().push(g.clone());
    }
    let mut report = SquareCheck {
        n,
        weight: w,
        admissible: all.len(),
        ..Default::default()
    };
    for (&m, src) in &by_m {
        let (Some(mid), Some(tgt)) = (by_m.get(&(m + 1)), by_m.get(&(m + 2))) else {
            continue;
        };
        let first = contract_matrix(mid, src).transpose();
        let second = contract_matrix(tgt, mid).transpose();
        if !second.mul(&first)?.is_zero() {
            report.contract_failures.push(m);
        }
    }
    let block = build_block(n, w, limits)?;
    report.internally_connected = block.degrees().map(|d| block.dim(d)).sum();
    for d in block.degrees().collect::<Vec<_>>() {
        if !block.differential(d + 1).mul(&block.differential(d))?.is_zero() {
            report.split_failures.push(d);
        }
    }
    Ok(report)
}

/// The block of `CG(n)` of weight `w`: all internally connected graphs.
pub fn build_block(n: usize, w: usize, limits: EnumLimits) -> Result<Arc<GradedComplex>, CohomologyError> {
    static CACHE: OnceLock<BlockCache> = OnceLock::new();
    let cell = CACHE
        .get_or_init(Default::default)
        .lock()
        .unwrap()
        .entry((n, w))
        .or_default()
        .clone();
    if let Some(b) = cell.get() {
        return Ok(b.clone());
    }
    let graphs = enumerate_internally_connected(n, w, limits)?;
    let block = Arc::new(GradedComplex::from_graphs(n, w, graphs)?);
    Ok(cell.get_or_init(|| block).clone())
}

/// `dim H^d(CG(n))^{(w)}` for every degree present.
pub fn h_cg_dimensions(n: usize, w: usize, limits: EnumLimits) -> Result<BTreeMap<i64, usize>, CohomologyError> {
    Ok(build_block(n, w, limits)?.cohomology_dims())
}

/// The subcomplex of graphs touching the last external vertex.
pub fn last_vertex_subcomplex(n: usize, w: usize, limits: EnumLimits) -> Result<GradedComplex, CohomologyError> {
    let block = build_block(n, w, limits)?;
    let graphs: Vec<CanonicalGraph> = block
        .degrees()
        .flat_map(|d| block.basis(d).iter())
        .filter(|g| g.touched_externals().contains(&(n - 1)))
        .cloned()
        .collect();
    GradedComplex::from_graphs(n, w, graphs)
}

fn mu_basis(n: usize, k: usize, l: &[u8], limits: EnumLimits) -> Result<Arc<GraphVector>, CohomologyError> {
    type Cache = Mutex<HashMap<(usize, usize, Word), Arc<GraphVector>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let key = (n, k, l.to_vec());
    if let Some(v) = CACHE.get_or_init(Default::default).lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let v = if l.len() == 1 {
        GraphVector::basis(CanonicalGraph::edge(n, l[0] as usize, k))
    } else {
        let (u, w) = standard_factorization(l);
        let (a, b) = (mu_basis(n, k, u, limits)?, mu_basis(n, k, w, limits)?);
        lbracket_vectors(&[(*a).clone(), (*b).clone()], limits)?
    };
    let v = Arc::new(v);
    CACHE
        .get_or_init(Default::default)
        .lock()
        .unwrap()
        .insert(key, v.clone());
    Ok(v)
}

/// The Lie morphism `t_n → H^0(CG(n))` on representatives: `t_ab ↦` the edge
/// `ab`, Lyndon brackets ↦ graph brackets.
pub fn mu(x: &TnElement, limits: EnumLimits) -> Result<GraphVector, CohomologyError> {
    let n = x.n();
    let mut out = GraphVector::zero(n);
    for k in 1..n {
        for (l, c) in x.layer(k).iter() {
            out.add_scaled(&*mu_basis(n, k, l, limits)?, c);
        }
    }
    Ok(out)
}

/// Inverse of [`mu`] on cohomology. Terms whose largest touched external is
/// `k` form a closed element of the subcomplex of graphs touching `k` (in the
/// quotient by higher externals); they are read as Lie trees rooted at `k`,
/// giving the layer-`k` component.
pub fn class_in_t(v: &GraphVector, limits: EnumLimits) -> Result<TnElement, CohomologyError> {
    let n = v.n_ext();
    let mut weights = v.iter().map(|(g, _)| (g.weight(), g.grading().cg_degree));
    let first = weights.next();
    if weights.any(|x| Some(x) != first) || first.is_some_and(|(_, d)| d != 0) {
        return Err(CohomologyError::NotHomogeneous);
    }
    if !d_split(v, SplitView::Connected, limits)?.is_zero() {
        return Err(CohomologyError::NotClosed);
    }
    let mut out = TnElement::zero(n);
    for (g, c) in v.iter() {
        let Some(&k) = g.touched_externals().iter().max() else {
            continue;
        };
        let word = tree_to_lie_word(g, k).expect("root is an external vertex");
        out.add_scaled(&TnElement::from_layer(n, k, word), c);
    }
    Ok(out)
}

/// Outcome of checking that [`mu`] respects the relations of `t_n`.
#[derive(Clone, Debug, Default, Serialize)]
pub struct MuReport {
    pub generators_closed: bool,
    /// Relation label and whether its graph image is a coboundary.
    pub relations: Vec<(String, bool)>,
    /// Basis pairs `(x, y)` and whether `[μx, μy] - μ[x, y]` is a coboundary.
    pub brackets: Vec<(String, bool)>,
}

impl MuReport {
    pub fn passed(&self) -> bool {
        self.generators_closed && self.relations.iter().chain(&self.brackets).all(|(_, ok)| *ok)
    }
}

pub fn mu_check(n: usize, w_max: usize, limits: EnumLimits) -> Result<MuReport, CohomologyError> {
    let mut report = MuReport {
        generators_closed: true,
        ..Default::default()
    };
    let edge = |a: usize, b: usize| GraphVector::basis(CanonicalGraph::edge(n, a, b));
    for a in 0..n {
        for b in a + 1..n {
            if !d_split(&edge(a, b), SplitView::Connected, limits)?.is_zero() {
                report.generators_closed = false;
            }
        }
    }
    if w_max >= 2 {
        let block = build_block(n, 2, limits)?;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if i == j || j == k || i == k {
                        continue;
                    }
                    let v = lbracket_vectors(&[edge(i, j), &edge(i, k) + &edge(j, k)], limits)?;
                    let label = format!("[t{0}{1}, t{0}{2} + t{1}{2}]", i + 1, j + 1, k + 1);
                    report.relations.push((label, block.is_exact(&v, 0)?));
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                for c in 0..n {
                    for d in c + 1..n {
                        if [a, b].iter().any(|x| *x == c || *x == d) || (a, b) > (c, d) {
                            continue;
                        }
                        let v = lbracket_vectors(&[edge(a, b), edge(c, d)], limits)?;
                        let label = format!("[t{}{}, t{}{}]", a + 1, b + 1, c + 1, d + 1);
                        report.relations.push((label, block.is_exact(&v, 0)?));
                    }
                }
            }
        }
    }
    let basis = |w: usize| -> Vec<TnElement> {
        (0..tn_dimension(n, w))
            .map(|i| TnElement::basis_element(n, w, i))
            .collect()
    };
    for wx in 1..w_max {
        for wy in 1..=w_max - wx {
            if wx > wy {
                continue;
            }
            let block = build_block(n, wx + wy, limits)?;
            for x in basis(wx) {
                for y in basis(wy) {
                    let lhs = lbracket_vectors(&[mu(&x, limits)?, mu(&y, limits)?], limits)?;
                    let rhs = mu(&x.bracket(&y), limits)?;
                    let label = format!("[{}, {}]", x.display(), y.display());
                    report.brackets.push((label, block.is_exact(&(&lhs - &rhs), 0)?));
                }
            }
        }
    }
    Ok(report)
}

/// Rank of `μ` on `t_n^{(w)}` in cohomology: the number of independent
/// classes among the images of the basis.
pub fn mu_rank(n: usize, w: usize, limits: EnumLimits) -> Result<usize, CohomologyError> {
    let block = build_block(n, w, limits)?;
    let d_in = block.differential(-1);
    let mut ech = crate::linalg::Echelon::new(false);
    for c in d_in.columns() {
        ech.insert(c, None);
    }
    let base = ech.rank();
    for (k, l) in tn_basis(n, w) {
        let v = mu_basis(n, k, &l, limits)?;
        ech.insert(block.coords(&v, 0)?, None);
    }
    Ok(ech.rank() - base)
}

/// Number of independent cycles among internal edges of an internally connected graph.
pub fn internal_loops(g: &CanonicalGraph) -> usize {
    let n = g.n_ext();
    let internal = g.edges().filter(|&(a, b)| a >= n && b >= n).count();
    (internal + 1).saturating_sub(g.n_int().max(1))
}
