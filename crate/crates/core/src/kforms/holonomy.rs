//! Holonomy of the connection along paths of configurations, and the
//! associator obtained from the path where the first two points start together
//! and the last two end together.

use std::f64::consts::PI;
use std::sync::Arc;

use num_rational::BigRational;
use serde::Serialize;

use super::connection::connection_eval;
use super::mc::{McConfig, McEstimate};
use super::{Configuration, FormError, Point, Tangent};
use crate::lie::assoc::{solve_weight_two_hexagons, weight_two_candidate, AssociatorResiduals};
use crate::lie::numeric::NumSeries;
use crate::linalg::{rational_to_f64, Rational};

/// Gauss–Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(k: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(k);
    let mut weights = Vec::with_capacity(k);
    for i in 0..k {
        let mut x = (PI * (i as f64 + 0.75) / (k as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=k {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = k as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes.push((1.0 - x) / 2.0);
        weights.push(1.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

type Curve = Arc<dyn Fn(f64) -> Vec<Point> + Send + Sync>;

/// A smooth path of configurations parametrized by `[0, 1]`, with its velocity.
#[derive(Clone)]
pub struct Path {
    n: usize,
    point: Curve,
    velocity: Curve,
}

impl Path {
    pub fn new(
        n: usize,
        point: impl Fn(f64) -> Vec<Point> + Send + Sync + 'static,
        velocity: impl Fn(f64) -> Vec<Point> + Send + Sync + 'static,
    ) -> Self {
        Self {
            n,
            point: Arc::new(point),
            velocity: Arc::new(velocity),
        }
    }

    /// Straight line between two configurations.
    pub fn linear(from: &Configuration, to: &Configuration) -> Self {
        let a = from.points().to_vec();
        let b = to.points().to_vec();
        let d: Vec<Point> = a.iter().zip(&b).map(|(p, q)| [q[0] - p[0], q[1] - p[1]]).collect();
        let d2 = d.clone();
        Self::new(
            a.len(),
            move |s| {
                a.iter()
                    .zip(&d)
                    .map(|(p, v)| [p[0] + s * v[0], p[1] + s * v[1]])
                    .collect()
            },
            move |_| d2.clone(),
        )
    }

    /// The second of two points turning once around the first, counterclockwise.
    pub fn loop_around(center: Point, radius: f64) -> Self {
        Self::new(
            2,
            move |s| {
                let t = 2.0 * PI * s;
                vec![center, [center[0] + radius * t.cos(), center[1] + radius * t.sin()]]
            },
            move |s| {
                let t = 2.0 * PI * s;
                vec![[0.0, 0.0], [-2.0 * PI * radius * t.sin(), 2.0 * PI * radius * t.cos()]]
            },
        )
    }

    /// `z = (0, x, 1)` with `x = (1 - cos πs) / 2`: the middle point moves from
    /// the first to the last, slowly near both ends.
    pub fn associator() -> Self {
        Self::new(
            3,
            |s| vec![[0.0, 0.0], [(1.0 - (PI * s).cos()) / 2.0, 0.0], [1.0, 0.0]],
            |s| vec![[0.0, 0.0], [PI * (PI * s).sin() / 2.0, 0.0], [0.0, 0.0]],
        )
    }

    /// The part of the path over `[a, b]`, reparametrized by `[0, 1]`.
    pub fn restrict(&self, a: f64, b: f64) -> Self {
        let (p, v) = (self.point.clone(), self.velocity.clone());
        Self::new(
            self.n,
            move |s| p(a + s * (b - a)),
            move |s| {
                v(a + s * (b - a))
                    .into_iter()
                    .map(|x| [x[0] * (b - a), x[1] * (b - a)])
                    .collect()
            },
        )
    }

    /// This path followed by `other`.
    pub fn then(&self, other: &Path) -> Self {
        let (p, v, q, w) = (
            self.point.clone(),
            self.velocity.clone(),
            other.point.clone(),
            other.velocity.clone(),
        );
        Self::new(
            self.n,
            move |s| if s < 0.5 { p(2.0 * s) } else { q(2.0 * s - 1.0) },
            move |s| {
                let x = if s < 0.5 { v(2.0 * s) } else { w(2.0 * s - 1.0) };
                x.into_iter().map(|d| [2.0 * d[0], 2.0 * d[1]]).collect()
            },
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn at(&self, s: f64) -> Result<(Configuration, Tangent), FormError> {
        Ok((Configuration::new((self.point)(s))?, Tangent::new((self.velocity)(s))))
    }
}

/// Composite Gauss–Legendre rule: `panels` equal panels of `nodes` nodes.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Quadrature {
    pub panels: usize,
    pub nodes: usize,
}

impl Quadrature {
    pub fn new(panels: usize, nodes: usize) -> Self {
        Self { panels, nodes }
    }
}

/// `c[j][k] = ∫∫_{0<s<t<1} ℓ_j(s) ℓ_k(t)` for the Lagrange basis on the nodes.
fn ordered_weights(nodes: &[f64]) -> Vec<Vec<f64>> {
    let q = nodes.len();
    let lagrange = |j: usize, s: f64| -> f64 {
        (0..q)
            .filter(|&i| i != j)
            .map(|i| (s - nodes[i]) / (nodes[j] - nodes[i]))
            .product()
    };
    let (xs, ws) = gauss_legendre(q + 2);
    let mut c = vec![vec![0.0; q]; q];
    for (t, wt) in xs.iter().zip(&ws) {
        for (j, row) in c.iter_mut().enumerate() {
            let inner: f64 = xs.iter().zip(&ws).map(|(s, w)| w * t * lagrange(j, t * s)).sum();
            for (k, x) in row.iter_mut().enumerate() {
                *x += wt * inner * lagrange(k, *t);
            }
        }
    }
    c
}

#[derive(Clone, Debug)]
pub struct Holonomy {
    pub value: NumSeries,
    /// Standard errors of the linear part of the exponent, per weight and
    /// `t_n` basis element.
    pub stderr: Vec<Vec<f64>>,
}

/// Path-ordered exponential `P` with `dP/ds = P A(γ'(s))`, so that
/// `P = 1 + ∫A + ∫∫_{s1<s2} A(s1) A(s2) + ...`. On each panel the exponent is
/// the two-term Magnus expansion with the connection interpolated through the
/// quadrature nodes; the connection is truncated at weight `trunc`.
pub fn holonomy(path: &Path, trunc: usize, quad: Quadrature, mc: &McConfig) -> Result<Holonomy, FormError> {
    holonomy_truncated(path, trunc, trunc, quad, mc)
}

/// [`holonomy`] with the connection truncated at `connection_weight` and the
/// series at `trunc`.
pub fn holonomy_truncated(
    path: &Path,
    connection_weight: usize,
    trunc: usize,
    quad: Quadrature,
    mc: &McConfig,
) -> Result<Holonomy, FormError> {
    let (xs, ws) = gauss_legendre(quad.nodes);
    let c = ordered_weights(&xs);
    let h = 1.0 / quad.panels as f64;
    let n = path.n();
    let mut value = NumSeries::one(n, trunc);
    let mut var: Vec<Vec<f64>> = Vec::new();
    for p in 0..quad.panels {
        let mut values = Vec::with_capacity(xs.len());
        for (k, x) in xs.iter().enumerate() {
            let (config, v) = path.at(h * (p as f64 + x))?;
            let a = connection_eval(
                &config,
                &v,
                connection_weight,
                &mc.reseeded((p * xs.len() + k) as u64 + 1),
            )?;
            if var.is_empty() {
                var = a.coords.iter().map(|c| vec![0.0; c.len()]).collect();
            }
            for (vw, cw) in var.iter_mut().zip(&a.coords) {
                for (s, e) in vw.iter_mut().zip(cw) {
                    *s += (h * ws[k] * e.stderr).powi(2);
                }
            }
            values.push(a.to_series(trunc));
        }
        let mut omega = NumSeries::zero(n, trunc);
        for (a, w) in values.iter().zip(&ws) {
            omega = omega.add_scaled(a, h * w)?;
        }
        for j in 0..values.len() {
            for k in j + 1..values.len() {
                let coeff = 0.5 * h * h * (c[j][k] - c[k][j]);
                omega = omega.add_scaled(&values[j].commutator(&values[k])?, coeff)?;
            }
        }
        value = value.mul(&omega.exp()?)?;
    }
    let stderr = var
        .into_iter()
        .map(|v| v.into_iter().map(f64::sqrt).collect())
        .collect();
    Ok(Holonomy { value, stderr })
}

/// The weight-two coefficient `c` of `Φ = 1 + c [t_13, t_23] + ...` computed
/// as a holonomy, compared with the exact hexagon solution.
#[derive(Clone, Debug, Serialize)]
pub struct AssociatorEstimate {
    /// Coefficients of `t_12, t_13, t_23` in `log Φ`.
    pub weight_one: Vec<McEstimate>,
    /// Coefficient of `[t_13, t_23]` in `log Φ`, with the finer quadrature.
    pub coefficient: McEstimate,
    /// With half as many nodes, as a quadrature check.
    pub coarse: McEstimate,
    /// The value solving both hexagons exactly.
    pub hexagon_solution: f64,
    /// Largest weight-two hexagon residual of `1 + c [t_13, t_23]`.
    pub hexagon_residual: f64,
    /// The same for the inverse, `1 - c [t_13, t_23]`.
    pub inverse_hexagon_residual: f64,
    /// Part of `log Φ` in weights one and two outside the Lie span.
    pub lie_residual: f64,
}

impl AssociatorEstimate {
    /// Whether the holonomy or its inverse is the one solving the hexagons.
    pub fn orientation(&self) -> &'static str {
        if self.hexagon_residual <= self.inverse_hexagon_residual {
            "holonomy"
        } else {
            "inverse"
        }
    }

    /// The smaller of the two hexagon residuals.
    pub fn best_hexagon_residual(&self) -> f64 {
        self.hexagon_residual.min(self.inverse_hexagon_residual)
    }

    pub fn quadrature_gap(&self) -> f64 {
        (self.coefficient.value - self.coarse.value).abs()
    }
}

fn weight_two_coefficient(nodes: usize, mc: &McConfig) -> Result<(McEstimate, Vec<McEstimate>, f64), FormError> {
    let per_node = McConfig {
        samples: (mc.samples / nodes).max(1),
        ..*mc
    };
    let hol = holonomy(&Path::associator(), 2, Quadrature::new(1, nodes), &per_node)?;
    let log = hol.value.log()?;
    let (coords, residual) = log.lie_coords(2);
    let (first, first_residual) = log.lie_coords(1);
    let samples = per_node.samples * nodes;
    let first = first
        .into_iter()
        .zip(&hol.stderr[1])
        .map(|(value, &stderr)| McEstimate { value, stderr, samples })
        .collect();
    Ok((
        McEstimate {
            value: coords[0],
            stderr: hol.stderr[2][0],
            samples,
        },
        first,
        residual.max(first_residual),
    ))
}

fn max_hexagon(c: f64) -> Result<f64, FormError> {
    let q: Rational = BigRational::from_float(c).expect("finite coefficient");
    Ok(AssociatorResiduals::evaluate(&weight_two_candidate(&q, 2))?.max_hexagon(2))
}

/// Estimates the weight-two part of the associator with `nodes` and
/// `nodes / 2` quadrature nodes, splitting `mc.samples` evenly over nodes.
pub fn at_associator(nodes: usize, mc: &McConfig) -> Result<AssociatorEstimate, FormError> {
    let (fine, weight_one, lie_residual) = weight_two_coefficient(nodes, mc)?;
    let (coarse, _, _) = weight_two_coefficient((nodes / 2).max(1), &mc.reseeded(0xC0A5))?;
    let exact = solve_weight_two_hexagons().expect("the weight-two hexagons have a unique solution");
    Ok(AssociatorEstimate {
        hexagon_residual: max_hexagon(fine.value)?,
        inverse_hexagon_residual: max_hexagon(-fine.value)?,
        coefficient: fine,
        weight_one,
        coarse,
        hexagon_solution: rational_to_f64(&exact),
        lie_residual,
    })
}
