//! The tree quotient: internally connected graphs without internal loops,
//! with splitting of internal vertices as differential.

use super::{build_block, internal_loops, CohomologyError, GradedComplex};
use crate::graph::{CanonicalGraph, EnumLimits};
use crate::lie::free::witt_dimension;
use crate::lie::trees::tree_to_sder;
use crate::linalg::{dense_to_sparse, SparseRationalMatrix};

pub fn tree_block(n: usize, w: usize, limits: EnumLimits) -> Result<GradedComplex, CohomologyError> {
    let block = build_block(n, w, limits)?;
    let trees: Vec<CanonicalGraph> = block
        .degrees()
        .flat_map(|d| block.basis(d).iter())
        .filter(|g| internal_loops(g) == 0)
        .cloned()
        .collect();
    GradedComplex::from_graphs(n, w, trees)
}

/// `H^0` of the tree quotient: trivalent trees modulo IHX.
#[derive(Clone, Debug)]
pub struct TreeH0 {
    pub dim: usize,
    pub trivalent_trees: usize,
    pub ihx_rank: usize,
}

pub fn tree_h0(n: usize, w: usize, limits: EnumLimits) -> Result<TreeH0, CohomologyError> {
    let c = tree_block(n, w, limits)?;
    let ihx_rank = c.differential(-1).rank();
    Ok(TreeH0 {
        dim: c.cohomology_dim(0),
        trivalent_trees: c.dim(0),
        ihx_rank,
    })
}

/// Columns: the special derivations of the degree-0 trees of `c`, in
/// concatenated Lyndon coordinates.
pub fn tree_to_sder_matrix(c: &GradedComplex) -> SparseRationalMatrix {
    let rows = c.n * witt_dimension(c.n, c.weight);
    let cols: Vec<_> = c
        .basis(0)
        .iter()
        .map(|g| dense_to_sparse(&tree_to_sder(g).expect("degree-0 trees are trivalent").coords()))
        .collect();
    SparseRationalMatrix::from_columns(rows, &cols)
}
