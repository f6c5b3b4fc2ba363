//! Monte Carlo integration of graph forms over the positions of internal vertices.
//!
//! Each internal vertex is drawn from a mixture of a planar Cauchy density
//! around the centroid of the external points, which controls the tails, and
//! log-radial densities around each external point, which absorb the `1/r`
//! singularities of the angle forms. Samples come in fixed-size chunks, each
//! from its own ChaCha stream, so estimates do not depend on the thread count.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{angle_value, dist, Configuration, FormError, Point, Tangent};
use crate::graph::CanonicalGraph;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
    /// Samples per independent random stream.
    pub chunk: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            samples: 1 << 20,
            seed: 0,
            chunk: 1 << 14,
        }
    }
}

impl McConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            ..Self::default()
        }
    }

    /// The same stream layout with a different seed, for independent estimates.
    pub fn reseeded(&self, salt: u64) -> Self {
        Self {
            seed: self.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15),
            ..*self
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct McEstimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl McEstimate {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            stderr: 0.0,
            samples: 0,
        }
    }

    /// `Σ c_i X_i` for independent estimates `X_i`.
    pub fn combine<'a>(terms: impl IntoIterator<Item = (f64, &'a McEstimate)>) -> Self {
        let mut out = Self::default();
        let mut var = 0.0;
        for (c, e) in terms {
            out.value += c * e.value;
            var += c * c * e.stderr * e.stderr;
            out.samples += e.samples;
        }
        out.stderr = var.sqrt();
        out
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            value: c * self.value,
            stderr: c.abs() * self.stderr,
            samples: self.samples,
        }
    }

    /// Is the value within `k` standard errors of `x`?
    pub fn consistent_with(&self, x: f64, k: f64) -> bool {
        (self.value - x).abs() <= k * self.stderr
    }
}

/// Running mean and sum of squared deviations.
#[derive(Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, o: Self) -> Self {
        if self.n == 0.0 {
            return o;
        }
        if o.n == 0.0 {
            return self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Self {
            n,
            mean: self.mean + d * o.n / n,
            m2: self.m2 + o.m2 + d * d * self.n * o.n / n,
        }
    }
}

/// Mean of `f` over `mc.samples` points of `[0,1)^draws`.
pub(crate) fn integrate<F>(draws: usize, mc: &McConfig, f: F) -> Result<McEstimate, FormError>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if mc.samples == 0 || mc.chunk == 0 {
        return Err(FormError::NoSamples);
    }
    let chunks = mc.samples.div_ceil(mc.chunk);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(mc.seed);
            rng.set_stream(c as u64);
            let len = mc.chunk.min(mc.samples - c * mc.chunk);
            let mut u = vec![0.0; draws];
            let mut m = Moments::default();
            for _ in 0..len {
                u.iter_mut().for_each(|x| *x = rng.gen::<f64>());
                m.push(f(&u));
            }
            m
        })
        .collect();
    let m = parts.into_iter().fold(Moments::default(), Moments::merge);
    let var = if m.n > 1.0 { m.m2 / (m.n - 1.0) } else { 0.0 };
    Ok(McEstimate {
        value: m.mean,
        stderr: (var / m.n).sqrt(),
        samples: mc.samples,
    })
}

const CAUCHY_SHARE: f64 = 0.4;

/// Importance density for one internal vertex around a configuration.
pub(crate) struct Sampler {
    centers: Vec<Point>,
    centroid: Point,
    scale: f64,
    r_lo: f64,
    r_hi: f64,
}

impl Sampler {
    pub(crate) fn new(config: &Configuration) -> Self {
        let scale = config.radius();
        Self {
            centers: config.points().to_vec(),
            centroid: config.centroid(),
            scale,
            r_lo: 1e-9 * scale,
            r_hi: 2.0 * scale,
        }
    }

    fn log_span(&self) -> f64 {
        (self.r_hi / self.r_lo).ln()
    }

    pub(crate) fn density(&self, x: Point) -> f64 {
        let d = dist(x, self.centroid);
        let s = self.scale;
        let mut p = CAUCHY_SHARE * s / (2.0 * PI * (d * d + s * s).powf(1.5));
        let local = (1.0 - CAUCHY_SHARE) / self.centers.len() as f64;
        for c in &self.centers {
            let r = dist(x, *c);
            if r >= self.r_lo && r <= self.r_hi {
                p += local / (2.0 * PI * r * r * self.log_span());
            }
        }
        p
    }

    /// A point from three uniform draws, with the mixture density there.
    pub(crate) fn place(&self, u: &[f64]) -> (Point, f64) {
        let theta = 2.0 * PI * u[2];
        let (center, r) = if u[0] < CAUCHY_SHARE {
            let q = 1.0 - u[1];
            (self.centroid, self.scale * (1.0 / (q * q) - 1.0).sqrt())
        } else {
            let k = ((u[0] - CAUCHY_SHARE) / (1.0 - CAUCHY_SHARE) * self.centers.len() as f64) as usize;
            let k = k.min(self.centers.len() - 1);
            (self.centers[k], self.r_lo * (self.r_hi / self.r_lo).powf(u[1]))
        };
        let x = [center[0] + r * theta.cos(), center[1] + r * theta.sin()];
        (x, self.density(x))
    }
}

/// Determinant by Gaussian elimination with partial pivoting.
pub(crate) fn determinant(mut a: Vec<Vec<f64>>) -> f64 {
    let k = a.len();
    let mut det = 1.0;
    for col in 0..k {
        let piv = (col..k)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("nonempty");
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..k {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..k {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    det
}

/// The integrand of a graph form: the product of the edge angle forms,
/// evaluated on the coordinate directions of the internal vertices (x then y,
/// vertex by vertex) followed by the tangent vectors.
pub fn graph_integrand(g: &CanonicalGraph, externals: &[Point], internals: &[Point], tangents: &[Tangent]) -> f64 {
    let n = g.n_ext();
    let m = g.n_int();
    let cols = 2 * m + tangents.len();
    let pos = |v: usize| if v < n { externals[v] } else { internals[v - n] };
    let vel = |v: usize, col: usize| -> Point {
        if col < 2 * m {
            let mut p = [0.0, 0.0];
            if v == n + col / 2 {
                p[col % 2] = 1.0;
            }
            p
        } else if v < n {
            tangents[col - 2 * m].velocities()[v]
        } else {
            [0.0, 0.0]
        }
    };
    let rows: Vec<Vec<f64>> = g
        .edges()
        .map(|(a, b)| {
            (0..cols)
                .map(|c| angle_value(pos(a), pos(b), vel(a, c), vel(b, c)))
                .collect()
        })
        .collect();
    determinant(rows)
}

/// Monte Carlo estimate of the graph form of `g` at `config` on `tangents`.
/// The form has degree `E - 2m`; on any other number of tangent vectors it is
/// identically zero and the exact zero is returned.
pub fn graph_form_eval(
    g: &CanonicalGraph,
    config: &Configuration,
    tangents: &[Tangent],
    mc: &McConfig,
) -> Result<McEstimate, FormError> {
    let n = g.n_ext();
    if config.len() != n {
        return Err(FormError::Arity {
            expected: n,
            found: config.len(),
        });
    }
    if let Some(t) = tangents.iter().find(|t| t.velocities().len() != n) {
        return Err(FormError::Arity {
            expected: n,
            found: t.velocities().len(),
        });
    }
    let m = g.n_int();
    if g.n_edges() != 2 * m + tangents.len() {
        return Ok(McEstimate::exact(0.0));
    }
    if m == 0 {
        return Ok(McEstimate::exact(graph_integrand(g, config.points(), &[], tangents)));
    }
    let sampler = Sampler::new(config);
    integrate(3 * m, mc, |u| {
        let mut pts = Vec::with_capacity(m);
        let mut density = 1.0;
        for d in u.chunks_exact(3) {
            let (x, p) = sampler.place(d);
            pts.push(x);
            density *= p;
        }
        graph_integrand(g, config.points(), &pts, tangents) / density
    })
}
