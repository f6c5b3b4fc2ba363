//! The connection one-form: a sum over degree-zero internally connected graphs
//! of the graph form times the Lie element read off the graph.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use super::mc::{graph_integrand, integrate, McConfig, McEstimate, Sampler};
use super::{Configuration, FormError, Tangent};
use crate::graph::{enumerate_internally_connected, CanonicalGraph, EnumLimits};
use crate::lie::numeric::NumSeries;
use crate::lie::tn::{tn_dimension, TnElement};
use crate::lie::trees::tree_to_lie_word;
use crate::linalg::{rational_to_f64, Rational};

/// A graph contributing to the connection with its Lie reading.
#[derive(Clone, Debug)]
pub struct ConnectionTerm {
    pub graph: CanonicalGraph,
    pub lie: TnElement,
    /// Coordinates of `lie` over the `t_n` basis of its weight.
    pub coords: Vec<f64>,
}

impl ConnectionTerm {
    pub fn weight(&self) -> usize {
        self.graph.weight()
    }
}

/// Graphs whose forms are one-forms (`E = 2m + 1`) of weight at most
/// `max_weight` with nonzero reading, rooted at their largest external vertex.
/// A graph of weight `w` contributes its tree reading times `(-1)^(w-1)`: the
/// graph bracket matches the opposite bracket of `t_n`, and with this sign the
/// connection satisfies `dA + [A, A]/2 = 0` for the bracket of `t_n`.
pub fn connection_graphs(n: usize, max_weight: usize) -> Result<Arc<Vec<ConnectionTerm>>, FormError> {
    type Cache = Mutex<HashMap<(usize, usize), Arc<Vec<ConnectionTerm>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&(n, max_weight)) {
        return Ok(v.clone());
    }
    let mut out = Vec::new();
    for w in 1..=max_weight {
        let graphs =
            enumerate_internally_connected(n, w, EnumLimits::default()).map_err(|e| FormError::Graph(e.to_string()))?;
        for g in graphs {
            if g.grading().star_degree != 1 {
                continue;
            }
            let Some(&k) = g.touched_externals().iter().max() else {
                continue;
            };
            let word = tree_to_lie_word(&g, k).map_err(|e| FormError::Graph(e.to_string()))?;
            if word.is_zero() {
                continue;
            }
            let sign = if w % 2 == 1 { 1 } else { -1 };
            let lie = TnElement::from_layer(n, k, word).scaled(&Rational::from_integer(sign.into()));
            let coords = lie.coords(w).iter().map(rational_to_f64).collect();
            out.push(ConnectionTerm { graph: g, lie, coords });
        }
    }
    let v = Arc::new(out);
    cache.lock().unwrap().insert((n, max_weight), v.clone());
    Ok(v)
}

/// A `t_n`-valued number: coordinates over the `t_n` basis, weight by weight,
/// each with a Monte Carlo error.
#[derive(Clone, Debug, Serialize)]
pub struct ConnectionValue {
    pub n: usize,
    /// `coords[w][i]`, index 0 unused.
    pub coords: Vec<Vec<McEstimate>>,
}

impl ConnectionValue {
    pub fn values(&self, w: usize) -> Vec<f64> {
        self.coords[w].iter().map(|e| e.value).collect()
    }

    pub fn max_weight(&self) -> usize {
        self.coords.len() - 1
    }

    /// The image in the enveloping algebra truncated at `trunc`.
    pub fn to_series(&self, trunc: usize) -> NumSeries {
        let coords: Vec<Vec<f64>> = (0..=self.max_weight()).map(|w| self.values(w)).collect();
        NumSeries::from_lie_coords(self.n, trunc, &coords)
    }
}

fn accumulate(n: usize, max_weight: usize, parts: &[(&ConnectionTerm, McEstimate)]) -> ConnectionValue {
    let coords = (0..=max_weight)
        .map(|w| {
            (0..if w == 0 { 0 } else { tn_dimension(n, w) })
                .map(|i| {
                    McEstimate::combine(
                        parts
                            .iter()
                            .filter(|(t, _)| t.weight() == w)
                            .map(|(t, e)| (t.coords[i], e)),
                    )
                })
                .collect()
        })
        .collect();
    ConnectionValue { n, coords }
}

/// The connection at `config` evaluated on `v`, up to weight `max_weight`.
/// Weight one is exact; each higher-weight graph gets its own random stream.
pub fn connection_eval(
    config: &Configuration,
    v: &Tangent,
    max_weight: usize,
    mc: &McConfig,
) -> Result<ConnectionValue, FormError> {
    let n = config.len();
    let terms = connection_graphs(n, max_weight)?;
    let parts = terms
        .iter()
        .enumerate()
        .map(|(i, t)| {
            super::graph_form_eval(&t.graph, config, std::slice::from_ref(v), &mc.reseeded(i as u64)).map(|e| (t, e))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(accumulate(n, max_weight, &parts))
}

/// Weight-two part of `dA + [A, A]/2` on the bivector `x ∧ y`.
#[derive(Clone, Debug, Serialize)]
pub struct FlatnessReport {
    /// `d(A_2)(x, y)` per basis element, by central differences.
    pub derivative: Vec<McEstimate>,
    /// `[A_1(x), A_1(y)]` per basis element, exact.
    pub bracket: Vec<f64>,
    pub residual: Vec<f64>,
    /// Difference between step sizes `h` and `2h`, per basis element.
    pub truncation: Vec<f64>,
    pub max_residual: f64,
    /// Largest `stderr + truncation` over basis elements.
    pub error_budget: f64,
}

impl FlatnessReport {
    pub fn passed(&self, k: f64, max_budget: f64) -> bool {
        self.error_budget <= max_budget && self.max_residual <= k * self.error_budget
    }
}

/// Finite-difference flatness test in weight two. Both step sizes and all
/// displaced configurations share the same samples, so the difference
/// quotients have small variance.
pub fn flatness_residual(
    config: &Configuration,
    x: &Tangent,
    y: &Tangent,
    h: f64,
    mc: &McConfig,
) -> Result<FlatnessReport, FormError> {
    let n = config.len();
    let terms = connection_graphs(n, 2)?;
    let shifted = |v: &Tangent, t: f64| -> Result<(Configuration, Sampler), FormError> {
        let c = config.moved(v, t)?;
        let s = Sampler::new(&c);
        Ok((c, s))
    };
    let mut stencil = Vec::new();
    for (dir, on, sign) in [(x, y, 1.0), (y, x, -1.0)] {
        for (t, fine) in [(h, true), (-h, true), (2.0 * h, false), (-2.0 * h, false)] {
            let (c, s) = shifted(dir, t)?;
            stencil.push((c, s, on.clone(), sign / (2.0 * t), fine));
        }
    }
    let mut derivative_parts = Vec::new();
    let mut coarse_parts = Vec::new();
    for (i, term) in terms.iter().enumerate().filter(|(_, t)| t.weight() == 2) {
        let g = &term.graph;
        let m = g.n_int();
        let eval = |u: &[f64], level: bool| -> f64 {
            let mut total = 0.0;
            for (c, s, on, factor, fine) in &stencil {
                if *fine != level {
                    continue;
                }
                let mut pts = Vec::with_capacity(m);
                let mut density = 1.0;
                for d in u.chunks_exact(3) {
                    let (p, q) = s.place(d);
                    pts.push(p);
                    density *= q;
                }
                let f = graph_integrand(g, c.points(), &pts, std::slice::from_ref(on)) / density;
                total += factor * f;
            }
            total
        };
        let stream = mc.reseeded(i as u64);
        derivative_parts.push((term, integrate(3 * m, &stream, |u| eval(u, true))?));
        coarse_parts.push((term, integrate(3 * m, &stream, |u| eval(u, false))?));
    }
    let fine = accumulate(n, 2, &derivative_parts).coords.swap_remove(2);
    let coarse = accumulate(n, 2, &coarse_parts).coords.swap_remove(2);
    let ax = connection_eval(config, x, 1, mc)?.to_series(2);
    let ay = connection_eval(config, y, 1, mc)?.to_series(2);
    let (bracket, _) = ax.commutator(&ay)?.lie_coords(2);
    let residual: Vec<f64> = fine.iter().zip(&bracket).map(|(d, b)| d.value + b).collect();
    let truncation: Vec<f64> = fine
        .iter()
        .zip(&coarse)
        .map(|(f, c)| (f.value - c.value).abs() / 3.0)
        .collect();
    let error_budget = fine
        .iter()
        .zip(&truncation)
        .map(|(f, t)| f.stderr + t)
        .fold(0.0, f64::max);
    Ok(FlatnessReport {
        max_residual: residual.iter().fold(0.0_f64, |m, r| m.max(r.abs())),
        derivative: fine,
        bracket,
        residual,
        truncation,
        error_budget,
    })
}
