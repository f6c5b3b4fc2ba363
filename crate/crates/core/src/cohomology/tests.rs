use super::*;
use crate::graph::RawGraph;
use crate::lie::sder::sder_dimension;
use crate::linalg::rat;

fn lim() -> EnumLimits {
    EnumLimits::default()
}

fn class(n: usize, m: usize, edges: &[(usize, usize)]) -> GraphVector {
    GraphVector::from_raw(&RawGraph::new(n, m, edges.to_vec())).unwrap()
}

#[test]
fn smallest_block() {
    let b = build_block(2, 1, lim()).unwrap();
    assert_eq!(b.basis(0), &[CanonicalGraph::edge(2, 0, 1)]);
    assert!(b.differential(0).is_zero() && b.differential(-1).is_zero());
}

#[test]
fn cohomology_matches_tn_for_small_n() {
    for (n, top) in [(2, 4), (3, 3)] {
        for w in 1..=top {
            let dims = h_cg_dimensions(n, w, lim()).unwrap();
            for (d, h) in dims {
                let expected = if d == 0 { tn_dimension(n, w) } else { 0 };
                assert_eq!(h, expected, "n={n} w={w} degree {d}");
            }
        }
    }
}

#[test]
fn tripod_is_closed_and_reads_as_commutator() {
    let tripod = class(3, 1, &[(0, 3), (1, 3), (2, 3)]);
    assert!(d_split(&tripod, SplitView::Connected, lim()).unwrap().is_zero());
    let block = build_block(3, 2, lim()).unwrap();
    assert!(!block.is_exact(&tripod, 0).unwrap());
    let x = class_in_t(&tripod, lim()).unwrap();
    let c = TnElement::generator(3, 0, 2).bracket(&TnElement::generator(3, 1, 2));
    assert!(x == c || x == c.scaled(&rat(-1)));
}

#[test]
fn edge_maps_to_generator() {
    let e = GraphVector::basis(CanonicalGraph::edge(2, 0, 1));
    assert_eq!(class_in_t(&e, lim()).unwrap(), TnElement::generator(2, 0, 1));
}

#[test]
fn class_in_t_inverts_mu() {
    for w in 1..=3 {
        for i in 0..tn_dimension(3, w) {
            let x = TnElement::basis_element(3, w, i);
            let v = mu(&x, lim()).unwrap();
            assert_eq!(class_in_t(&v, lim()).unwrap(), x, "{}", x.display());
        }
    }
}

#[test]
fn class_in_t_ignores_coboundaries() {
    let block = build_block(3, 3, lim()).unwrap();
    let d = block.differential(-1);
    for (j, col) in d.columns().into_iter().enumerate().take(12) {
        let v = block.vector(0, &col);
        assert!(class_in_t(&v, lim()).unwrap().is_zero(), "coboundary of column {j}");
    }
}

#[test]
fn class_in_t_rejects_bad_input() {
    let g = class(3, 1, &[(0, 3), (1, 3), (2, 3)]);
    let e = GraphVector::basis(CanonicalGraph::edge(3, 0, 1));
    assert!(matches!(
        class_in_t(&(&g + &e), lim()),
        Err(CohomologyError::NotHomogeneous)
    ));
    let block = build_block(3, 3, lim()).unwrap();
    let open = block
        .basis(0)
        .iter()
        .find(|g| {
            !d_split(&GraphVector::basis((*g).clone()), SplitView::Connected, lim())
                .unwrap()
                .is_zero()
        })
        .unwrap();
    assert!(matches!(
        class_in_t(&GraphVector::basis(open.clone()), lim()),
        Err(CohomologyError::NotClosed)
    ));
}

#[test]
fn mu_respects_relations() {
    let r = mu_check(3, 3, lim()).unwrap();
    assert!(r.passed(), "{r:?}");
    assert_eq!(r.relations.len(), 6);
    for w in 1..=3 {
        assert_eq!(mu_rank(3, w, lim()).unwrap(), tn_dimension(3, w));
    }
}

#[test]
fn disjoint_edges_bracket_to_zero() {
    let e = |a, b| GraphVector::basis(CanonicalGraph::edge(4, a, b));
    assert!(lbracket_vectors(&[e(0, 1), e(2, 3)], lim()).unwrap().is_zero());
    let r = mu_check(4, 2, lim()).unwrap();
    assert!(r.passed());
}

#[test]
fn last_vertex_subcomplex_is_free() {
    for w in 1..=3 {
        let f = last_vertex_subcomplex(3, w, lim()).unwrap();
        for (d, h) in f.cohomology_dims() {
            let expected = if d == 0 {
                crate::lie::free::witt_dimension(2, w)
            } else {
                0
            };
            assert_eq!(h, expected, "w={w} degree {d}");
        }
    }
}

#[test]
fn tree_quotient_is_sder() {
    for n in 2..=3 {
        for w in 1..=3 {
            let h = tree_h0(n, w, lim()).unwrap();
            assert_eq!(h.dim, sder_dimension(n, w), "n={n} w={w}");
            let c = tree_block(n, w, lim()).unwrap();
            let m = tree_to_sder_matrix(&c);
            assert_eq!(m.rank(), h.dim);
            assert!(
                m.mul(&c.differential(-1)).unwrap().is_zero(),
                "IHX compatibility n={n} w={w}"
            );
        }
    }
}

#[test]
fn square_wheel_with_pictured_order() {
    // externals 0..4, internals 4..8; edges in the pictured order
    let edges = [(0, 4), (4, 5), (1, 5), (5, 6), (2, 6), (6, 7), (3, 7), (7, 4)];
    let v = class(4, 4, &edges);
    let t = one_loop_trace(&v, lim()).unwrap();
    let mut expected = TraceElement::zero();
    expected.add_word(&[0, 1, 2, 3], rat(1));
    expected.add_word(&[3, 2, 1, 0], rat(-1));
    assert_eq!(t, expected);
}

#[test]
fn wheel_trace_is_independent_of_labels() {
    let edges = [(0, 3), (3, 4), (1, 4), (4, 5), (2, 5), (5, 6), (0, 6), (6, 3)];
    let a = class(3, 4, &edges);
    let (g, c) = a.iter().next().unwrap();
    let direct = wheel_trace(g).unwrap().scaled(c);
    let mut rotated = edges;
    rotated.rotate_left(2);
    let b = class(3, 4, &rotated);
    let (h, d) = b.iter().next().unwrap();
    assert_eq!(direct, wheel_trace(h).unwrap().scaled(d));
}

#[test]
fn trace_is_well_defined_modulo_ihx() {
    for (n, w) in [(2, 3), (3, 3), (4, 3)] {
        let q = OneLoopQuotient::new(n, w, lim()).unwrap();
        assert!(q.wheels_span(), "n={n} w={w}");
        assert!(q.trace_well_defined(), "n={n} w={w}");
    }
}

#[test]
fn divergence_factors_through_one_loop_trace() {
    let mut sign = None;
    let mut nontrivial = 0;
    for (n, w) in [(3, 2), (3, 3), (4, 2), (4, 3)] {
        let r = div_factorization_check(n, w, lim()).unwrap();
        assert!(r.consistent && r.trace_well_defined, "{r:?}");
        nontrivial += r.nontrivial;
        if let Some(s) = r.sign {
            assert!(sign.is_none() || sign == Some(s));
            sign = Some(s);
        }
    }
    assert!(nontrivial >= 5);
    assert_eq!(sign, Some(1));
}

#[test]
fn internal_loop_counts() {
    let tripod = class(3, 1, &[(0, 3), (1, 3), (2, 3)]);
    let (g, _) = tripod.iter().next().unwrap();
    assert_eq!(internal_loops(g), 0);
    assert_eq!(internal_loops(&CanonicalGraph::edge(2, 0, 1)), 0);
}

use crate::lie::sder::TraceElement;
