//! Reading internally trivalent trees as Lie words.
//!
//! A leg (edge at an external vertex) is chosen as root; each other leg
//! becomes the letter of its external vertex and each internal vertex the
//! bracket of its two subtrees, taken in increasing edge order. The edges
//! listed in preorder (root edge first, each subtree after its edge) form a
//! permutation of the edge list, whose sign multiplies the word. Swapping two
//! sibling subtrees swaps two blocks of odd length, so the result does not
//! depend on the sibling order.

use std::collections::BTreeMap;

use num_traits::One;
use thiserror::Error;

use super::free::LieWord;
use super::sder::SderElement;
use crate::graph::canon::permutation_sign;
use crate::graph::{CanonicalGraph, GraphVector};
use crate::linalg::Rational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("root {root} is not an external vertex (n = {n})")]
    RootOutOfRange { root: usize, n: usize },
}

/// All internal vertices trivalent and the internal edges forming a spanning tree.
pub fn is_trivalent_tree(g: &CanonicalGraph) -> bool {
    let n = g.n_ext();
    let m = g.n_int();
    let val = g.valences();
    if (n..n + m).any(|v| val[v] != 3) {
        return false;
    }
    let internal_edges = g.edges().filter(|&(a, b)| a >= n && b >= n).count();
    if m == 0 {
        return g.n_edges() == 1;
    }
    internal_edges + 1 == m && g.is_internally_connected()
}

fn other_end(e: (usize, usize), v: usize) -> usize {
    if e.0 == v {
        e.1
    } else {
        e.0
    }
}

fn read(g: &CanonicalGraph, edge: usize, from: usize, order: &mut Vec<usize>) -> LieWord {
    order.push(edge);
    let v = other_end(g.edge_at(edge), from);
    if g.is_external(v) {
        return LieWord::generator(v as u8);
    }
    let children: Vec<usize> = (0..g.n_edges())
        .filter(|&i| {
            i != edge && {
                let (a, b) = g.edge_at(i);
                a == v || b == v
            }
        })
        .collect();
    debug_assert_eq!(children.len(), 2);
    let left = read(g, children[0], v, order);
    let right = read(g, children[1], v, order);
    left.bracket(&right)
}

/// Reading of a trivalent tree rooted at the end `root` of the leg `edge`.
/// Letters are external vertex indices.
pub fn read_tree(g: &CanonicalGraph, edge: usize, root: usize) -> LieWord {
    let mut order = Vec::with_capacity(g.n_edges());
    let word = read(g, edge, root, &mut order);
    let sign = permutation_sign(order.into_iter());
    word.scaled(&Rational::from_integer(sign.into()))
}

/// The Lie word of `g` rooted at the external vertex `root`: nonzero only for
/// trivalent trees with exactly one edge at `root`.
pub fn tree_to_lie_word(g: &CanonicalGraph, root: usize) -> Result<LieWord, TreeError> {
    if root >= g.n_ext() {
        return Err(TreeError::RootOutOfRange { root, n: g.n_ext() });
    }
    let at_root: Vec<usize> = (0..g.n_edges())
        .filter(|&i| {
            let (a, b) = g.edge_at(i);
            a == root || b == root
        })
        .collect();
    if at_root.len() != 1 || !is_trivalent_tree(g) {
        return Ok(LieWord::zero());
    }
    Ok(read_tree(g, at_root[0], root))
}

/// Linear extension of [`tree_to_lie_word`].
pub fn tree_vector_to_lie_word(v: &GraphVector, root: usize) -> Result<LieWord, TreeError> {
    let mut out = LieWord::zero();
    for (g, c) in v.iter() {
        out.add_scaled(&tree_to_lie_word(g, root)?, c);
    }
    Ok(out)
}

/// The special derivation of a trivalent tree: `a_k` is the sum of the
/// readings rooted at each leg ending at external `k`.
pub fn tree_to_sder(g: &CanonicalGraph) -> Option<SderElement> {
    if !is_trivalent_tree(g) {
        return None;
    }
    let n = g.n_ext();
    let mut tuple = vec![LieWord::zero(); n];
    for i in 0..g.n_edges() {
        let (a, b) = g.edge_at(i);
        for r in [a, b] {
            if g.is_external(r) {
                tuple[r].add_scaled(&read_tree(g, i, r), &Rational::one());
            }
        }
    }
    Some(SderElement::unchecked(n, g.weight(), tuple))
}

/// Linear extension of [`tree_to_sder`] over trees, grouped by weight.
pub fn tree_vector_to_sder(v: &GraphVector) -> BTreeMap<usize, SderElement> {
    let mut out: BTreeMap<usize, SderElement> = BTreeMap::new();
    for (g, c) in v.iter() {
        if let Some(s) = tree_to_sder(g) {
            let e = out
                .entry(s.weight())
                .or_insert_with(|| SderElement::zero(v.n_ext(), s.weight()));
            *e = e.add_scaled(&s, c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::RawGraph;

    fn class(n: usize, m: usize, edges: &[(usize, usize)]) -> GraphVector {
        GraphVector::from_raw(&RawGraph::new(n, m, edges.to_vec())).unwrap()
    }

    fn single(v: &GraphVector) -> (CanonicalGraph, Rational) {
        let (g, c) = v.iter().next().unwrap();
        (g.clone(), c.clone())
    }

    fn br(a: LieWord, b: LieWord) -> LieWord {
        a.bracket(&b)
    }

    #[test]
    fn tripod_reads_as_commutator() {
        let v = class(3, 1, &[(0, 3), (1, 3), (2, 3)]);
        let w = tree_vector_to_lie_word(&v, 2).unwrap();
        let expected = br(LieWord::generator(0), LieWord::generator(1));
        assert!(w == expected || w == expected.scaled(&Rational::from_integer((-1).into())));
        // relabelled input edges change the reading by the permutation sign
        let u = class(3, 1, &[(1, 3), (0, 3), (2, 3)]);
        assert_eq!(
            tree_vector_to_lie_word(&u, 2).unwrap(),
            w.scaled(&Rational::from_integer((-1).into()))
        );
    }

    #[test]
    fn two_vertex_tree() {
        // externals 0,1,2; internals 3,4: 0-3, 3-4, 4-0, 4-2, 3-1
        let v = class(3, 2, &[(0, 3), (3, 4), (4, 0), (4, 2), (3, 1)]);
        let w = tree_vector_to_lie_word(&v, 2).unwrap();
        let x = |k| LieWord::generator(k);
        let expected = br(x(0), br(x(0), x(1)));
        assert!(
            w == expected || w == expected.scaled(&Rational::from_integer((-1).into())),
            "{w:?}"
        );
    }

    #[test]
    fn non_trees_vanish() {
        // four-valent internal vertex
        let v = class(4, 1, &[(0, 4), (1, 4), (2, 4), (3, 4)]);
        assert!(tree_vector_to_lie_word(&v, 3).unwrap().is_zero());
        // two legs at the root
        let v = class(3, 2, &[(0, 3), (3, 4), (4, 2), (3, 2), (4, 1)]);
        let (g, _) = single(&v);
        assert!(is_trivalent_tree(&g));
        assert!(tree_to_lie_word(&g, 2).unwrap().is_zero());
        assert_eq!(
            tree_to_lie_word(&g, 3),
            Err(TreeError::RootOutOfRange { root: 3, n: 3 })
        );
    }

    #[test]
    fn tree_derivations_are_special() {
        for n in 2..=4 {
            for w in 1..=3 {
                for g in crate::graph::enumerate_internally_connected(n, w, Default::default()).unwrap() {
                    if let Some(s) = tree_to_sder(&g) {
                        assert!(s.constraint().is_zero(), "{g}");
                    }
                }
            }
        }
    }

    #[test]
    fn edge_gives_generator_image() {
        let g = CanonicalGraph::edge(2, 0, 1);
        let s = tree_to_sder(&g).unwrap();
        assert_eq!(s.components(), &[LieWord::generator(1), LieWord::generator(0)]);
    }
}
