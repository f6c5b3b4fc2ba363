//! Angle forms on planar configuration spaces, graph forms obtained by
//! integrating products of angle forms over internal vertices, the resulting
//! flat connection with values in `t_n`, and its holonomy.
//!
//! A configuration is a list of pairwise distinct points of the plane and a
//! tangent vector is one velocity per point. All forms are evaluated on
//! tangent vectors in these raw coordinates; they are invariant under
//! translations and dilations, so they descend to the compactified spaces.

mod connection;
mod holonomy;
mod mc;

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::lie::tn::SeriesError;

pub use connection::{
    connection_eval, connection_graphs, flatness_residual, ConnectionTerm, ConnectionValue, FlatnessReport,
};
pub use holonomy::{
    at_associator, gauss_legendre, holonomy, holonomy_truncated, AssociatorEstimate, Holonomy, Path, Quadrature,
};
pub use mc::{graph_form_eval, graph_integrand, McConfig, McEstimate};

pub type Point = [f64; 2];

#[derive(Debug, Error)]
pub enum FormError {
    #[error("expected {expected} points, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("points {0} and {1} coincide")]
    Collision(usize, usize),
    #[error("vertex {vertex} out of range for {n} points")]
    Vertex { vertex: usize, n: usize },
    #[error("sample count must be positive")]
    NoSamples,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("graph: {0}")]
    Graph(String),
}

/// Pairwise distinct points of the plane.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Configuration(Vec<Point>);

impl Configuration {
    pub fn new(points: Vec<Point>) -> Result<Self, FormError> {
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(FormError::Collision(i, j));
                }
            }
        }
        Ok(Self(points))
    }

    pub fn points(&self) -> &[Point] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The configuration moved by `t` along `v`.
    pub fn moved(&self, v: &Tangent, t: f64) -> Result<Self, FormError> {
        self.require(v.0.len())?;
        Self::new(
            self.0
                .iter()
                .zip(&v.0)
                .map(|(p, d)| [p[0] + t * d[0], p[1] + t * d[1]])
                .collect(),
        )
    }

    pub fn centroid(&self) -> Point {
        let k = self.0.len().max(1) as f64;
        let s = self.0.iter().fold([0.0, 0.0], |a, p| [a[0] + p[0], a[1] + p[1]]);
        [s[0] / k, s[1] / k]
    }

    /// Largest distance from the centroid, or one for a single point.
    pub fn radius(&self) -> f64 {
        let c = self.centroid();
        let r = self.0.iter().map(|p| dist(*p, c)).fold(0.0, f64::max);
        if r > 0.0 {
            r
        } else {
            1.0
        }
    }

    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.0.len() {
            for j in i + 1..self.0.len() {
                best = best.min(dist(self.0[i], self.0[j]));
            }
        }
        best
    }

    fn require(&self, n: usize) -> Result<(), FormError> {
        if self.0.len() != n {
            return Err(FormError::Arity {
                expected: self.0.len(),
                found: n,
            });
        }
        Ok(())
    }

    /// `k` points uniform in the unit disc with separation at least `min_sep`.
    pub fn random(k: usize, min_sep: f64, rng: &mut impl Rng) -> Self {
        loop {
            let pts: Vec<Point> = (0..k)
                .map(|_| loop {
                    let p = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
                    if p[0] * p[0] + p[1] * p[1] <= 1.0 {
                        break p;
                    }
                })
                .collect();
            let c = Self(pts);
            if c.min_separation() >= min_sep {
                return c;
            }
        }
    }
}

/// One velocity per point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tangent(Vec<Point>);

impl Tangent {
    pub fn new(v: Vec<Point>) -> Self {
        Self(v)
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![[0.0, 0.0]; n])
    }

    /// Unit velocity of point `i` in coordinate direction `axis`.
    pub fn coordinate(n: usize, i: usize, axis: usize) -> Self {
        let mut v = Self::zero(n);
        v.0[i][axis] = 1.0;
        v
    }

    pub fn velocities(&self) -> &[Point] {
        &self.0
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self(self.0.iter().map(|p| [c * p[0], c * p[1]]).collect())
    }

    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        Self(
            (0..n)
                .map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
                .collect(),
        )
    }
}

pub(crate) fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// `dArg(z_b - z_a) / 2π` at points `(za, zb)` on velocities `(va, vb)`.
pub(crate) fn angle_value(za: Point, zb: Point, va: Point, vb: Point) -> f64 {
    let w = [zb[0] - za[0], zb[1] - za[1]];
    let dw = [vb[0] - va[0], vb[1] - va[1]];
    (w[0] * dw[1] - w[1] * dw[0]) / (2.0 * PI * (w[0] * w[0] + w[1] * w[1]))
}

/// The angle form `ω_ab = dArg(z_b - z_a) / 2π` evaluated on `v`.
pub fn angle_form_eval(config: &Configuration, a: usize, b: usize, v: &Tangent) -> Result<f64, FormError> {
    config.require(v.0.len())?;
    let n = config.len();
    for x in [a, b] {
        if x >= n {
            return Err(FormError::Vertex { vertex: x, n });
        }
    }
    if a == b {
        return Err(FormError::Collision(a, b));
    }
    let p = config.points();
    Ok(angle_value(p[a], p[b], v.0[a], v.0[b]))
}

/// Result of evaluating `ω_12∧ω_23 + ω_23∧ω_31 + ω_31∧ω_12` at random
/// configurations of three points on random pairs of tangent vectors.
#[derive(Clone, Debug, Serialize)]
pub struct ArnoldCheck {
    pub samples: usize,
    pub max_residual: f64,
    /// Largest single term, for scale.
    pub max_term: f64,
}

impl ArnoldCheck {
    pub fn holds_pointwise(&self, tol: f64) -> bool {
        self.max_residual < tol
    }
}

pub fn arnold_numeric_check(samples: usize, seed: u64) -> ArnoldCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = ArnoldCheck {
        samples,
        max_residual: 0.0,
        max_term: 0.0,
    };
    for _ in 0..samples {
        let c = Configuration::random(3, 0.05, &mut rng);
        let (x, y) = (Tangent::random(3, &mut rng), Tangent::random(3, &mut rng));
        let om = |a, b, v: &Tangent| angle_form_eval(&c, a, b, v).expect("valid input");
        let wedge =
            |(a, b): (usize, usize), (p, q): (usize, usize)| om(a, b, &x) * om(p, q, &y) - om(a, b, &y) * om(p, q, &x);
        let terms = [wedge((0, 1), (1, 2)), wedge((1, 2), (2, 0)), wedge((2, 0), (0, 1))];
        let r: f64 = terms.iter().sum();
        out.max_residual = out.max_residual.max(r.abs());
        out.max_term = terms.iter().fold(out.max_term, |m, t| m.max(t.abs()));
    }
    out
}

#[cfg(test)]
mod tests;
