//! Exact simplicial algebra: shuffles, the Alexander–Whitney and shuffle
//! maps between diagonal and bigraded chains, and the maps from flat
//! connections on simplices into bar constructions, on polynomial data with
//! nilpotent values so that every integral and holonomy is a finite sum.

mod connection;
mod forms;
mod shuffle;
mod simplicial;

use thiserror::Error;

pub use connection::{
    bar_degeneracy, bar_differential, bar_face, k_boundary_check, k_map, level_signed_d, normalize_bar, psi,
    psi_boundary_check, t_map, t_simplicial_check, KBoundaryCheck, PolyConnection, PsiCheck, TSimplicialCheck,
};
pub use forms::{AffineMap, Form, FormKey, Tensor};
pub use shuffle::{check_decomposition, shuffles_with_signs, DecompositionCheck, Shuffle, ShuffleTable};
pub use simplicial::{
    aw_map, boundary, diagonal_boundary, homology_check, monoidal_aw_check, normalize, normalize_bigraded,
    normalize_diagonal, random_diagonal_chain, shuffle_map, total_boundary, BiChain, HomologyCheck, LinComb,
    MonoidalCheck, Poset, Simplex, SimplicialChain, SimplicialModule, SimplicialSet, LEVEL_CAP,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransportError {
    #[error("level {level} exceeds the cap {cap}")]
    LevelOverflow { level: usize, cap: usize },
    #[error("diagonal chain expected, found bidegree ({horizontal}, {vertical})")]
    NotDiagonal { horizontal: usize, vertical: usize },
    #[error("simplicial identity fails: {0}")]
    Identity(String),
    #[error("form lives on R^{found}, expected R^{expected}")]
    Dimension { expected: usize, found: usize },
    #[error("connection must be an algebra-valued one-form")]
    NotOneForm,
    #[error("values have a constant part, so holonomies are not finite sums")]
    NotNilpotent,
    #[error("connection is not flat ({terms} curvature terms)")]
    NotFlat { terms: usize },
    #[error("index {index} out of range at level {level}")]
    Index { index: usize, level: usize },
    #[error("unsupported number of parameters: {0}")]
    Parameters(usize),
}

#[cfg(test)]
mod tests;
