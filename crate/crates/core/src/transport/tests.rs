use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::linalg::{rat, ratio, Rational};

fn simplex(chains: &[&[u8]]) -> Simplex {
    Simplex::new(chains.iter().map(|c| c.to_vec()).collect())
}

fn interval() -> SimplicialSet {
    SimplicialSet::new(vec![Poset::chain(2)])
}

fn random_sets(seed: u64) -> (SimplicialSet, SimplicialSet, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = SimplicialSet::random(2, 4, &mut rng);
    let y = SimplicialSet::random(1, 4, &mut rng);
    (x, y, rng)
}

#[test]
fn simplicial_identities_hold_to_the_cap() {
    let (x, y, _) = random_sets(1);
    for set in [x, y, SimplicialSet::new(vec![Poset::circle(), Poset::chain(3)])] {
        let m = SimplicialModule::new(set, LEVEL_CAP).unwrap();
        m.check_identities().unwrap();
        assert!(m.dim(LEVEL_CAP) > m.dim(0));
    }
    assert!(matches!(
        SimplicialModule::new(interval(), LEVEL_CAP + 1),
        Err(TransportError::LevelOverflow { .. })
    ));
}

#[test]
fn aw_at_level_zero_and_one() {
    let pt = (simplex(&[&[1]]), simplex(&[&[0]]));
    let a = LinComb::basis(pt.clone());
    assert_eq!(aw_map(&a).unwrap(), a);
    // the diagonal edge of the square splits into two Künneth terms
    let e = LinComb::basis((simplex(&[&[0, 1]]), simplex(&[&[0, 1]])));
    let mut expected = LinComb::zero();
    expected.add((simplex(&[&[0]]), simplex(&[&[0, 1]])), rat(1));
    expected.add((simplex(&[&[0, 1]]), simplex(&[&[1]])), rat(1));
    assert_eq!(aw_map(&e).unwrap(), expected);
    let bad = LinComb::basis((simplex(&[&[0, 1]]), simplex(&[&[0]])));
    assert!(matches!(aw_map(&bad), Err(TransportError::NotDiagonal { .. })));
}

#[test]
fn shuffle_of_two_edges_is_the_triangulated_square() {
    let a = LinComb::basis((simplex(&[&[0, 1]]), simplex(&[&[0, 1]])));
    let s = shuffle_map(&a).unwrap();
    let mut expected = LinComb::zero();
    expected.add((simplex(&[&[0, 1, 1]]), simplex(&[&[0, 0, 1]])), rat(1));
    expected.add((simplex(&[&[0, 0, 1]]), simplex(&[&[0, 1, 1]])), rat(-1));
    assert_eq!(s, expected);
    let pt = LinComb::basis((simplex(&[&[0]]), simplex(&[&[1]])));
    assert_eq!(shuffle_map(&pt).unwrap(), pt);
}

fn random_bichain(x: &SimplicialSet, y: &SimplicialSet, p: usize, q: usize, rng: &mut ChaCha8Rng) -> BiChain {
    let mut c = LinComb::zero();
    for _ in 0..3 {
        let s = (x.random_simplex(p, rng), y.random_simplex(q, rng));
        c.add(s, Rational::from_integer(rand::Rng::gen_range(rng, -2i64..=2).into()));
    }
    c
}

#[test]
fn aw_after_shuffle_is_the_identity_on_normalized_chains() {
    let (x, y, mut rng) = random_sets(2);
    for p in 0..=2 {
        for q in 0..=2 {
            for _ in 0..4 {
                let c = normalize_bigraded(&random_bichain(&x, &y, p, q, &mut rng));
                let back = normalize_bigraded(&aw_map(&shuffle_map(&c).unwrap()).unwrap());
                assert_eq!(back, c, "bidegree ({p}, {q})");
            }
        }
    }
}

#[test]
fn shuffle_after_aw_is_the_identity_on_homology() {
    let torus = SimplicialSet::new(vec![Poset::circle()]);
    let mut differs = 0;
    for (level, rank) in [(0, 1), (1, 2), (2, 1)] {
        let h = homology_check(&torus, &torus, level).unwrap();
        assert_eq!(h.failures, 0, "{h:?}");
        assert_eq!(h.homology_rank, rank, "{h:?}");
        differs += h.chain_level_differences;
    }
    assert!(differs > 0);
}

#[test]
fn monoidal_compatibility_small_cases() {
    let (x, y, mut rng) = random_sets(3);
    let (x2, y2) = (interval(), SimplicialSet::new(vec![Poset::circle()]));
    for (m, n) in [(0, 0), (1, 1), (2, 1), (1, 2), (2, 2), (3, 1)] {
        let a = random_diagonal_chain(&x, &y, m, 3, &mut rng);
        let b = random_diagonal_chain(&x2, &y2, n, 3, &mut rng);
        let c = monoidal_aw_check(&a, &b).unwrap();
        assert!(c.passed(), "({m}, {n})");
        if m + n > 0 && !normalize_diagonal(&a).is_zero() && !normalize_diagonal(&b).is_zero() {
            assert!(!c.left.is_zero() || m + n > 2, "({m}, {n}) vacuous");
        }
    }
    // a totally degenerate b
    let a = random_diagonal_chain(&x, &y, 1, 2, &mut rng);
    let b = LinComb::basis((simplex(&[&[1, 1]]), simplex(&[&[2, 2]])));
    let c = monoidal_aw_check(&a, &b).unwrap();
    assert!(c.left.is_zero() && c.right.is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn aw_and_shuffle_are_chain_maps(seed in 0u64..1000, level in 1usize..=3) {
        let (x, y, mut rng) = random_sets(seed);
        let a = random_diagonal_chain(&x, &y, level, 3, &mut rng);
        prop_assert_eq!(aw_map(&diagonal_boundary(&a)).unwrap(), total_boundary(&aw_map(&a).unwrap()));
        let p = rand::Rng::gen_range(&mut rng, 0..=level);
        let c = random_bichain(&x, &y, p, level - p, &mut rng);
        prop_assert_eq!(shuffle_map(&total_boundary(&c)).unwrap(), diagonal_boundary(&shuffle_map(&c).unwrap()));
    }

    #[test]
    fn monoidal_compatibility_random(seed in 0u64..1000, m in 0usize..=2, n in 0usize..=2) {
        let (x, y, mut rng) = random_sets(seed);
        let (x2, y2, _) = random_sets(seed + 7);
        let a = random_diagonal_chain(&x, &y, m, 2, &mut rng);
        let b = random_diagonal_chain(&x2, &y2, n, 2, &mut rng);
        prop_assert!(monoidal_aw_check(&a, &b).unwrap().passed());
    }

    #[test]
    fn boundary_squares_to_zero(seed in 0u64..1000, level in 2usize..=4) {
        let (x, _, mut rng) = random_sets(seed);
        let c = x.random_chain(level, 4, &mut rng);
        prop_assert!(boundary(&boundary(&c)).is_zero());
    }
}

fn word(dim: usize, trunc: usize, w: &[u8]) -> Form {
    Form::word(dim, trunc, w.to_vec())
}

fn bar(trunc: usize, entries: &[(&[&[u8]], Rational)]) -> Form {
    let mut f = Form::zero(0, trunc);
    for (t, c) in entries {
        f.add_term(
            FormKey {
                mask: 0,
                exps: Vec::new(),
                tensor: t.iter().map(|w| w.to_vec()).collect(),
            },
            c.clone(),
        );
    }
    f
}

#[test]
fn k_map_on_intervals() {
    let a = PolyConnection::new(1, 0, Form::dx(1, 4, 0).wedge(&word(1, 4, &[0]))).unwrap();
    assert_eq!(k_map(&a).unwrap(), bar(4, &[(&[&[0]], rat(1))]));
    let two_t = Form::coordinate(1, 4, 0)
        .scaled(&rat(2))
        .wedge(&Form::dx(1, 4, 0))
        .wedge(&word(1, 4, &[0]));
    let a = PolyConnection::new(1, 0, two_t).unwrap();
    assert_eq!(k_map(&a).unwrap(), bar(4, &[(&[&[0]], rat(1))]));
}

#[test]
fn k_map_vanishes_for_abelian_triangles() {
    let f = Form::coordinate(2, 3, 0)
        .wedge(&Form::coordinate(2, 3, 1))
        .add(&Form::coordinate(2, 3, 1).wedge(&Form::coordinate(2, 3, 1)));
    let a = PolyConnection::new(2, 0, f.d().wedge(&word(2, 3, &[1]))).unwrap();
    assert!(k_map(&a).unwrap().is_zero());
}

#[test]
fn k_map_commutes_with_differentials() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut nonzero = 0;
    for n in 1..=2 {
        for _ in 0..3 {
            let a = PolyConnection::random_gauge(n, 0, 2, 3, &mut rng).unwrap();
            let c = k_boundary_check(&a).unwrap();
            assert!(c.passed(), "{c:?}");
            nonzero += usize::from(c.boundary_terms > 0);
        }
    }
    assert!(nonzero > 0);
}

#[test]
fn rejects_curved_and_unipotent_input() {
    let curved = Form::coordinate(2, 2, 0)
        .wedge(&Form::dx(2, 2, 1))
        .wedge(&word(2, 2, &[0]));
    assert!(matches!(
        PolyConnection::new(2, 0, curved),
        Err(TransportError::NotFlat { .. })
    ));
    assert_eq!(
        PolyConnection::new(1, 0, Form::dx(1, 2, 0)),
        Err(TransportError::NotNilpotent)
    );
    assert_eq!(
        PolyConnection::new(1, 0, word(1, 2, &[0])),
        Err(TransportError::NotOneForm)
    );
}

#[test]
fn t_map_examples() {
    let zero = PolyConnection::new(2, 0, Form::zero(2, 3)).unwrap();
    let t = t_map(&zero);
    assert_eq!(t, bar(3, &[(&[&[], &[]], rat(1))]));
    assert!(normalize_bar(&t).is_zero());
    let a = PolyConnection::new(1, 0, Form::dx(1, 3, 0).wedge(&word(1, 3, &[0]))).unwrap();
    let expected = bar(
        3,
        &[
            (&[&[]], rat(1)),
            (&[&[0]], rat(1)),
            (&[&[0, 0]], ratio(1, 2)),
            (&[&[0, 0, 0]], ratio(1, 6)),
        ],
    );
    assert_eq!(t_map(&a), expected);
}

#[test]
fn holonomy_is_path_independent_on_triangles() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..3 {
        let a = PolyConnection::random_gauge(2, 0, 2, 3, &mut rng).unwrap();
        let direct = a.edge_holonomy(0, 2);
        let two_step = a.edge_holonomy(0, 1).wedge(&a.edge_holonomy(1, 2));
        assert_eq!(direct, two_step);
        assert_ne!(direct, Form::one(0, 3));
    }
}

#[test]
fn t_map_is_simplicial() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for n in 0..=2 {
        let a = PolyConnection::random_gauge(n, 0, 2, 3, &mut rng).unwrap();
        let c = t_simplicial_check(&a).unwrap();
        assert!(c.passed(), "{c:?}");
    }
}

fn psi_passes(a: &PolyConnection) {
    let c = psi_boundary_check(a).unwrap();
    assert!(c.holonomy_failures.is_empty(), "{c:?}");
    assert_eq!(c.lhs, c.rhs, "n = {}", c.simplex_dim);
    if c.simplex_dim > 0 {
        assert!(!c.rhs.is_zero(), "vacuous at n = {}", c.simplex_dim);
    }
}

#[test]
fn psi_constant_family() {
    // g depends on the simplex coordinates only
    let g = Form::coordinate(3, 3, 0).wedge(&word(3, 3, &[0])).add(
        &Form::coordinate(3, 3, 1)
            .wedge(&Form::coordinate(3, 3, 0))
            .wedge(&word(3, 3, &[1])),
    );
    let a = PolyConnection::gauge(2, 1, &g).unwrap();
    assert!(a.at_vertex(1).is_zero());
    psi_passes(&a);
}

#[test]
fn psi_abelian_family() {
    let f = Form::coordinate(3, 3, 0).wedge(&Form::coordinate(3, 3, 2)).add(
        &Form::coordinate(3, 3, 1)
            .wedge(&Form::coordinate(3, 3, 2))
            .wedge(&Form::coordinate(3, 3, 2)),
    );
    let a = PolyConnection::new(2, 1, f.d().wedge(&word(3, 3, &[0]))).unwrap();
    psi_passes(&a);
}

#[test]
fn psi_two_step_nilpotent_on_an_interval() {
    let (s, l) = (Form::coordinate(2, 2, 0), Form::coordinate(2, 2, 1));
    let g = s
        .wedge(&l)
        .wedge(&word(2, 2, &[0]))
        .add(&s.wedge(&s).wedge(&word(2, 2, &[1])));
    let a = PolyConnection::gauge(1, 1, &g).unwrap();
    assert!(!a.form().wedge(a.form()).is_zero());
    psi_passes(&a);
}

#[test]
fn psi_random_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 0..=2 {
        for _ in 0..2 {
            let a = PolyConnection::random_gauge(n, 1, 2, 3, &mut rng).unwrap();
            psi_passes(&a);
        }
    }
}
