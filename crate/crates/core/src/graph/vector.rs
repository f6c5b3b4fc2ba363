use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{CanonicalGraph, GraphError, RawGraph};
use crate::linalg::{format_rational, Rational};

/// Finite rational combination of nonzero canonical graphs on a fixed number of externals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphVector {
    n_ext: usize,
    terms: BTreeMap<CanonicalGraph, Rational>,
}

impl GraphVector {
    pub fn zero(n_ext: usize) -> Self {
        Self {
            n_ext,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(g: CanonicalGraph) -> Self {
        let mut v = Self::zero(g.n_ext());
        v.add_term(g, Rational::one());
        v
    }

    /// The class of a raw graph, i.e. `sign * canonical` (zero for odd symmetry).
    pub fn from_raw(g: &RawGraph) -> Result<Self, GraphError> {
        let (c, s) = g.canonicalize()?;
        let mut v = Self::zero(g.n_ext);
        v.add_term(c, Rational::from_integer(s.into()));
        Ok(v)
    }

    pub fn n_ext(&self) -> usize {
        self.n_ext
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CanonicalGraph, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, g: &CanonicalGraph) -> Rational {
        self.terms.get(g).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `c * g`; zero graphs and zero coefficients are dropped.
    pub fn add_term(&mut self, g: CanonicalGraph, c: Rational) {
        assert_eq!(g.n_ext(), self.n_ext, "external count mismatch");
        if g.is_zero() || c.is_zero() {
            return;
        }
        let e = self.terms.entry(g);
        match e {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        for (g, x) in &other.terms {
            self.add_term(g.clone(), x * c);
        }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut v = Self::zero(self.n_ext);
        v.add_scaled(self, c);
        v
    }

    /// Keeps only the terms satisfying `keep`.
    pub fn filtered(&self, keep: impl Fn(&CanonicalGraph) -> bool) -> Self {
        Self {
            n_ext: self.n_ext,
            terms: self
                .terms
                .iter()
                .filter(|(g, _)| keep(g))
                .map(|(g, c)| (g.clone(), c.clone()))
                .collect(),
        }
    }

    /// Bilinear extension of the graph product. Terms gluing two equal
    /// external edges vanish (an odd edge squares to zero).
    pub fn product(&self, other: &Self) -> Result<Self, GraphError> {
        let mut out = Self::zero(self.n_ext);
        for (g, a) in &self.terms {
            for (h, b) in &other.terms {
                let (p, s) = match g.product(h) {
                    Err(GraphError::GluedDoubleEdge(..)) => continue,
                    r => r?,
                };
                out.add_term(p, a * b * Rational::from_integer(s.into()));
            }
        }
        Ok(out)
    }
}

impl std::ops::Add for &GraphVector {
    type Output = GraphVector;
    fn add(self, rhs: &GraphVector) -> GraphVector {
        let mut v = self.clone();
        v.add_scaled(rhs, &Rational::one());
        v
    }
}

impl std::ops::Sub for &GraphVector {
    type Output = GraphVector;
    fn sub(self, rhs: &GraphVector) -> GraphVector {
        let mut v = self.clone();
        v.add_scaled(rhs, &-Rational::one());
        v
    }
}

impl fmt::Display for GraphVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (g, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({}) [{}]", format_rational(c), g)?;
        }
        Ok(())
    }
}
