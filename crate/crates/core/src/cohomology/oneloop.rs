//! One-loop graphs: the first page term spanned by trivalent one-loop graphs
//! modulo IHX, the differential from trees, and the trace map.

use num_traits::One;
use serde::Serialize;

use super::{build_block, internal_loops, tree_block, CohomologyError, GradedComplex};
use crate::graph::canon::permutation_sign;
use crate::graph::{d_split, CanonicalGraph, EnumLimits, GraphVector, SplitView};
use crate::lie::sder::{div, TraceElement};
use crate::lie::trees::tree_to_sder;
use crate::linalg::{Echelon, Insertion, Rational, SparseVec};

/// Internally connected graphs of weight `w` with exactly one internal loop.
pub fn one_loop_graphs(n: usize, w: usize, limits: EnumLimits) -> Result<Vec<CanonicalGraph>, CohomologyError> {
    let block = build_block(n, w, limits)?;
    Ok(block
        .degrees()
        .flat_map(|d| block.basis(d).iter())
        .filter(|g| internal_loops(g) == 1)
        .cloned()
        .collect())
}

/// The internal vertices in loop order if `g` is a wheel: the internal edges
/// form one cycle through every internal vertex, and each internal vertex has
/// exactly one leg.
fn wheel_cycle(g: &CanonicalGraph) -> Option<Vec<usize>> {
    let n = g.n_ext();
    let m = g.n_int();
    if m < 3 || g.valences()[n..].iter().any(|&v| v != 3) {
        return None;
    }
    let internal_nbrs = |v: usize| -> Vec<usize> { g.neighbours(v).filter(|&u| u >= n).collect() };
    if (n..n + m).any(|v| internal_nbrs(v).len() != 2) {
        return None;
    }
    let mut cycle = vec![n];
    let mut prev = n;
    let mut cur = internal_nbrs(n)[0];
    while cur != n {
        cycle.push(cur);
        let next = internal_nbrs(cur).into_iter().find(|&u| u != prev)?;
        prev = cur;
        cur = next;
    }
    (cycle.len() == m).then_some(cycle)
}

pub fn is_wheel(g: &CanonicalGraph) -> bool {
    wheel_cycle(g).is_some()
}

fn edge_index(g: &CanonicalGraph, a: usize, b: usize) -> usize {
    let e = (a.min(b), a.max(b));
    (0..g.n_edges()).find(|&i| g.edge_at(i) == e).expect("edge present")
}

/// `±(tr(x_{m_1}...x_{m_k}) - (-1)^k tr(x_{m_k}...x_{m_1}))` for a wheel with
/// legs `m_j`; the sign is `+` when the edges are ordered leg of `v_1`, loop
/// edge `v_1 v_2`, leg of `v_2`, loop edge `v_2 v_3`, and so on.
pub fn wheel_trace(g: &CanonicalGraph) -> Option<TraceElement> {
    let cycle = wheel_cycle(g)?;
    let n = g.n_ext();
    let k = cycle.len();
    let legs: Vec<usize> = cycle
        .iter()
        .map(|&v| g.neighbours(v).find(|&u| u < n).expect("one leg"))
        .collect();
    let mut order = Vec::with_capacity(2 * k);
    for j in 0..k {
        order.push(edge_index(g, cycle[j], legs[j]));
        order.push(edge_index(g, cycle[j], cycle[(j + 1) % k]));
    }
    let sign = Rational::from_integer(permutation_sign(order.into_iter()).into());
    let forward: Vec<u8> = legs.iter().map(|&l| l as u8).collect();
    let backward: Vec<u8> = forward.iter().rev().copied().collect();
    let mut t = TraceElement::zero();
    t.add_word(&forward, sign.clone());
    let parity = if k % 2 == 0 { -Rational::one() } else { Rational::one() };
    t.add_word(&backward, sign * parity);
    Some(t)
}

/// Trivalent one-loop graphs of one weight modulo the image of the splitting
/// differential from one-loop graphs with a four-valent vertex.
pub struct OneLoopQuotient {
    complex: GradedComplex,
    /// Echelon basis of the IHX image followed by wheels, tagged by wheel.
    ech: Echelon,
    wheel_traces: Vec<TraceElement>,
    /// Combinations of wheels lying in the IHX image.
    dependencies: Vec<SparseVec>,
}

impl OneLoopQuotient {
    pub fn new(n: usize, w: usize, limits: EnumLimits) -> Result<Self, CohomologyError> {
        let complex = GradedComplex::from_graphs(n, w, one_loop_graphs(n, w, limits)?)?;
        let mut ech = Echelon::new(true);
        for col in complex.differential(0).columns() {
            ech.insert(col, Some(Vec::new()));
        }
        let mut wheel_traces = Vec::new();
        let mut dependencies = Vec::new();
        for (i, g) in complex.basis(1).iter().enumerate() {
            if let Some(t) = wheel_trace(g) {
                let tag = vec![(wheel_traces.len(), Rational::one())];
                if let Insertion::Dependent(combo) = ech.insert(vec![(i, Rational::one())], Some(tag)) {
                    dependencies.push(combo);
                }
                wheel_traces.push(t);
            }
        }
        Ok(Self {
            complex,
            ech,
            wheel_traces,
            dependencies,
        })
    }

    pub fn dim(&self) -> usize {
        self.complex.cohomology_dim(1)
    }

    pub fn wheel_count(&self) -> usize {
        self.wheel_traces.len()
    }

    /// Do wheels span the quotient?
    pub fn wheels_span(&self) -> bool {
        self.ech.rank() == self.complex.dim(1)
    }

    /// The trace vanishes on every combination of wheels that is zero modulo IHX.
    pub fn trace_well_defined(&self) -> bool {
        self.dependencies.iter().all(|combo| self.combine(combo).is_zero())
    }

    fn combine(&self, combo: &SparseVec) -> TraceElement {
        let mut t = TraceElement::zero();
        for (i, c) in combo {
            t.add_scaled(&self.wheel_traces[*i], c);
        }
        t
    }

    /// Trace of a combination of trivalent one-loop graphs.
    pub fn trace(&self, v: &GraphVector) -> Result<TraceElement, CohomologyError> {
        let x = self.complex.coords(v, 1)?;
        let (res, combo) = self.ech.reduce(x);
        if !res.is_empty() {
            return Err(CohomologyError::Shape(v.to_string()));
        }
        // v = Σ α_i wheel_i + image, combo = -Σ α_i
        Ok(self.combine(&combo).scaled(&-Rational::one()))
    }
}

/// Trace of a combination of trivalent one-loop graphs of weight `w`.
pub fn one_loop_trace(v: &GraphVector, limits: EnumLimits) -> Result<TraceElement, CohomologyError> {
    let Some((g, _)) = v.iter().next() else {
        return Ok(TraceElement::zero());
    };
    OneLoopQuotient::new(v.n_ext(), g.weight(), limits)?.trace(v)
}

/// The differential from trivalent trees to one-loop graphs: splitting
/// followed by projection onto graphs with one internal loop.
pub fn d1(x: &GraphVector, limits: EnumLimits) -> Result<GraphVector, CohomologyError> {
    Ok(d_split(x, SplitView::Connected, limits)?.filtered(|g| internal_loops(g) == 1))
}

/// Comparison of `trace ∘ d1` with `div` on trivalent trees.
#[derive(Clone, Debug, Default, Serialize)]
pub struct DivFactorization {
    pub n: usize,
    pub weight: usize,
    pub samples: usize,
    /// Samples where `div` is nonzero.
    pub nontrivial: usize,
    /// The common sign `s` with `trace(d1 x) = s div(x)`, if one exists.
    pub sign: Option<i8>,
    pub consistent: bool,
    pub trace_well_defined: bool,
}

pub fn div_factorization_check(n: usize, w: usize, limits: EnumLimits) -> Result<DivFactorization, CohomologyError> {
    let trees = tree_block(n, w, limits)?;
    let quotient = OneLoopQuotient::new(n, w, limits)?;
    let mut report = DivFactorization {
        n,
        weight: w,
        consistent: true,
        trace_well_defined: quotient.trace_well_defined(),
        ..Default::default()
    };
    for g in trees.basis(0) {
        let x = GraphVector::basis(g.clone());
        let lhs = quotient.trace(&d1(&x, limits)?)?;
        let rhs = div(&tree_to_sder(g).expect("trivalent tree")).map_err(|e| CohomologyError::Shape(e.to_string()))?;
        report.samples += 1;
        if rhs.is_zero() && lhs.is_zero() {
            continue;
        }
        report.nontrivial += 1;
        let s = if lhs == rhs {
            1
        } else if lhs == rhs.scaled(&-Rational::one()) {
            -1
        } else {
            report.consistent = false;
            continue;
        };
        match report.sign {
            None => report.sign = Some(s),
            Some(t) if t != s => report.consistent = false,
            _ => {}
        }
    }
    Ok(report)
}
