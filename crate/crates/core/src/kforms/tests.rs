use std::f64::consts::PI;

use super::*;
use crate::graph::{CanonicalGraph, GraphVector, RawGraph};
use crate::lie::env::EnvSeries;
use crate::lie::numeric::NumSeries;

fn graph(n: usize, m: usize, edges: &[(usize, usize)]) -> CanonicalGraph {
    let v = GraphVector::from_raw(&RawGraph::new(n, m, edges.to_vec())).unwrap();
    let g = v.iter().next().unwrap().0.clone();
    g
}

fn triangle() -> Configuration {
    Configuration::new(vec![[0.0, 0.0], [0.7, 0.2], [0.1, 0.8]]).unwrap()
}

#[test]
fn angle_form_basics() {
    let c = Configuration::new(vec![[0.0, 0.0], [2.0, 0.0]]).unwrap();
    // the second point moving perpendicular at unit angular speed
    let rot = Tangent::new(vec![[0.0, 0.0], [0.0, 2.0]]);
    assert!((angle_form_eval(&c, 0, 1, &rot).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-15);
    assert_eq!(
        angle_form_eval(&c, 1, 0, &rot).unwrap(),
        angle_form_eval(&c, 0, 1, &rot).unwrap()
    );
    let translate = Tangent::new(vec![[0.3, -1.0], [0.3, -1.0]]);
    assert_eq!(angle_form_eval(&c, 0, 1, &translate).unwrap(), 0.0);
    let dilate = Tangent::new(vec![[0.0, 0.0], [2.0, 0.0]]);
    assert_eq!(angle_form_eval(&c, 0, 1, &dilate).unwrap(), 0.0);
    assert!(matches!(angle_form_eval(&c, 0, 2, &rot), Err(FormError::Vertex { .. })));
    assert!(matches!(
        Configuration::new(vec![[1.0, 1.0], [1.0, 1.0]]),
        Err(FormError::Collision(0, 1))
    ));
}

#[test]
fn arnold_relation_fails_pointwise() {
    let r = arnold_numeric_check(200, 3);
    assert!(!r.holds_pointwise(1e-10), "{r:?}");
    assert!(r.max_residual > 1e-3 * r.max_term);
}

#[test]
fn gauss_legendre_is_exact_on_polynomials() {
    for k in 1..=24 {
        let (x, w) = gauss_legendre(k);
        for d in 0..2 * k {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(d as i32)).sum();
            assert!((q - 1.0 / (d as f64 + 1.0)).abs() < 1e-13, "k={k} d={d}");
        }
    }
}

#[test]
fn determinant_of_small_matrices() {
    let a = vec![vec![2.0, 1.0, 0.0], vec![1.0, 3.0, 1.0], vec![0.0, 1.0, 4.0]];
    assert!((mc::determinant(a) - 18.0).abs() < 1e-12);
    assert_eq!(mc::determinant(vec![vec![0.0, 1.0], vec![1.0, 0.0]]), -1.0);
}

#[test]
fn estimates_are_reproducible_across_thread_counts() {
    let g = graph(3, 1, &[(0, 3), (1, 3), (2, 3)]);
    let v = Tangent::coordinate(3, 1, 0);
    let mc = McConfig::new(100_000, 5);
    let a = graph_form_eval(&g, &triangle(), std::slice::from_ref(&v), &mc).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = pool.install(|| graph_form_eval(&g, &triangle(), std::slice::from_ref(&v), &mc).unwrap());
    assert_eq!(a, b);
    let c = graph_form_eval(&g, &triangle(), std::slice::from_ref(&v), &mc.reseeded(1)).unwrap();
    assert_ne!(a.value, c.value);
    assert!((a.value - c.value).abs() < 5.0 * (a.stderr + c.stderr));
}

#[test]
fn wrong_degree_is_exactly_zero() {
    let g = graph(3, 1, &[(0, 3), (1, 3), (2, 3)]);
    let e = graph_form_eval(&g, &triangle(), &[], &McConfig::default()).unwrap();
    assert_eq!(e, McEstimate::exact(0.0));
    assert!(matches!(
        graph_form_eval(
            &g,
            &Configuration::new(vec![[0.0, 0.0]]).unwrap(),
            &[],
            &McConfig::default()
        ),
        Err(FormError::Arity { .. })
    ));
}

#[test]
fn two_point_connection_is_the_angle_form() {
    let c = Configuration::new(vec![[0.1, -0.2], [0.9, 0.4]]).unwrap();
    let v = Tangent::new(vec![[0.3, 0.5], [-0.2, 0.7]]);
    let a = connection_eval(&c, &v, 3, &McConfig::new(10_000, 0)).unwrap();
    let expected = angle_form_eval(&c, 0, 1, &v).unwrap();
    assert_eq!(a.coords[1].len(), 1);
    assert!((a.coords[1][0].value - expected).abs() < 1e-15);
    assert!(a.coords[2..].iter().flatten().all(|e| e.value == 0.0));
}

#[test]
fn loop_holonomy_is_exp_t12() {
    let p = Path::loop_around([0.2, 0.1], 0.7);
    let h = holonomy(&p, 3, Quadrature::new(8, 6), &McConfig::new(1000, 0)).unwrap();
    let expected = NumSeries::from_exact(&EnvSeries::generator(2, 3, 0, 1).exp().unwrap());
    assert!(h.value.distance(&expected).unwrap().iter().all(|d| *d < 1e-12));
}

#[test]
fn holonomy_composes_along_split_paths() {
    let a = triangle();
    let b = Configuration::new(vec![[0.3, -0.4], [1.0, 0.5], [-0.6, 0.9]]).unwrap();
    let path = Path::linear(&a, &b);
    let q = Quadrature::new(16, 4);
    let mc = McConfig::new(1000, 0);
    let full = holonomy_truncated(&path, 1, 3, q, &mc).unwrap().value;
    let first = holonomy_truncated(&path.restrict(0.0, 0.4), 1, 3, q, &mc)
        .unwrap()
        .value;
    let second = holonomy_truncated(&path.restrict(0.4, 1.0), 1, 3, q, &mc)
        .unwrap()
        .value;
    let glued = holonomy_truncated(&path.restrict(0.0, 0.4).then(&path.restrict(0.4, 1.0)), 1, 3, q, &mc)
        .unwrap()
        .value;
    let product = first.mul(&second).unwrap();
    assert!(full.distance(&product).unwrap().iter().all(|d| *d < 1e-6));
    assert!(glued.distance(&product).unwrap().iter().all(|d| *d < 1e-6));
    let log = full.log().unwrap();
    for w in 1..=3 {
        assert!(log.lie_coords(w).1 < 1e-9, "weight {w}");
    }
}

#[test]
fn vanishing_lemma_for_triangles() {
    // three internal vertices in a triangle, each with one leg
    let one = graph(1, 3, &[(1, 2), (2, 3), (1, 3), (0, 1), (0, 2), (0, 3)]);
    let c1 = Configuration::new(vec![[0.0, 0.0]]).unwrap();
    let e = graph_form_eval(&one, &c1, &[], &McConfig::new(200_000, 1)).unwrap();
    assert!(e.value.abs() <= 3.0 * e.stderr + 1e-12, "{e:?}");
    let two = graph(2, 3, &[(2, 3), (3, 4), (2, 4), (0, 2), (0, 3), (1, 4)]);
    let c2 = Configuration::new(vec![[0.0, 0.0], [1.0, 0.3]]).unwrap();
    let e = graph_form_eval(&two, &c2, &[], &McConfig::new(400_000, 2)).unwrap();
    assert!(e.stderr < 1e-2 && e.value.abs() < 4.0 * e.stderr, "{e:?}");
}

#[test]
fn connection_is_flat_in_weight_two() {
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(11);
    for _ in 0..2 {
        let c = Configuration::random(3, 0.2, &mut rng);
        let x = Tangent::coordinate(3, 1, 0);
        let y = Tangent::coordinate(3, 2, 1);
        let h = 1e-4 * c.radius();
        let r = flatness_residual(&c, &x, &y, h, &McConfig::new(400_000, 3)).unwrap();
        assert!(r.passed(4.0, 5e-2), "{r:?}");
        // the two sides are individually far from zero
        assert!(r.bracket[0].abs() > 10.0 * r.error_budget, "{r:?}");
    }
}

#[test]
fn associator_coefficient() {
    let est = at_associator(12, &McConfig::new(400_000, 1)).unwrap();
    assert!((est.coefficient.value.abs() - 1.0 / 24.0).abs() < 5e-3, "{est:?}");
    assert_eq!(est.orientation(), "inverse");
    assert!(est.best_hexagon_residual() < 1e-2);
    assert!(est.lie_residual < 1e-12);
    assert!(est.quadrature_gap() < 5e-3);
}
