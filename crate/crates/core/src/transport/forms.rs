//! Polynomial differential forms on `R^dim` with coefficients in tensor
//! powers of a truncated free associative algebra.
//!
//! The coefficient algebra is spanned by words in letters `0..g` of length at
//! most `trunc`; longer products vanish, so every exponential series is a
//! finite sum. A term is a monomial `x^α dx_I` times a tensor of words. One
//! tensor factor is an algebra-valued form; several factors are bar-valued.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::simplicial::LinComb;
use super::TransportError;
use crate::lie::free::Word;
use crate::linalg::{format_rational, Rational};

pub type Tensor = Vec<Word>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormKey {
    /// Bit `i` set when `dx_i` is present, wedged in increasing order.
    pub mask: u32,
    pub exps: Vec<u32>,
    pub tensor: Tensor,
}

impl FormKey {
    pub fn degree(&self) -> usize {
        self.mask.count_ones() as usize
    }
}

/// A polynomial form on `R^dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    dim: usize,
    trunc: usize,
    terms: LinComb<FormKey>,
}

/// Sign of `dx_a ∧ dx_b` relative to sorted order, or zero on overlap.
fn merge_sign(a: u32, b: u32) -> i64 {
    if a & b != 0 {
        return 0;
    }
    let mut inversions = 0;
    for i in 0..32 {
        if b & (1 << i) != 0 {
            inversions += a.checked_shr(i + 1).unwrap_or(0).count_ones();
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn factorial(n: u32) -> Rational {
    (1..=n).fold(Rational::one(), |acc, k| acc * Rational::from_integer(k.into()))
}

impl Form {
    pub fn zero(dim: usize, trunc: usize) -> Self {
        Self {
            dim,
            trunc,
            terms: LinComb::zero(),
        }
    }

    /// `c x^exps dx_mask ⊗ tensor`.
    pub fn term(dim: usize, trunc: usize, mask: u32, exps: Vec<u32>, tensor: Tensor, c: Rational) -> Self {
        let mut f = Self::zero(dim, trunc);
        f.add_term(FormKey { mask, exps, tensor }, c);
        f
    }

    /// The unit of the coefficient algebra as a constant function.
    pub fn one(dim: usize, trunc: usize) -> Self {
        Self::term(dim, trunc, 0, vec![0; dim], vec![Vec::new()], Rational::one())
    }

    /// The empty tensor, the unit for [`Form::tensor`].
    pub fn empty_tensor(dim: usize, trunc: usize) -> Self {
        Self::term(dim, trunc, 0, vec![0; dim], Vec::new(), Rational::one())
    }

    /// The constant function with value the word `w`.
    pub fn word(dim: usize, trunc: usize, w: Word) -> Self {
        Self::term(dim, trunc, 0, vec![0; dim], vec![w], Rational::one())
    }

    /// The coordinate function `x_i`.
    pub fn coordinate(dim: usize, trunc: usize, i: usize) -> Self {
        let mut exps = vec![0; dim];
        exps[i] = 1;
        Self::term(dim, trunc, 0, exps, vec![Vec::new()], Rational::one())
    }

    /// The one-form `dx_i`.
    pub fn dx(dim: usize, trunc: usize, i: usize) -> Self {
        Self::term(dim, trunc, 1 << i, vec![0; dim], vec![Vec::new()], Rational::one())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FormKey, &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, key: FormKey, c: Rational) {
        if key.tensor.iter().any(|w| w.len() > self.trunc) {
            return;
        }
        self.terms.add(key, c);
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.terms.add_scaled(&other.terms, &Rational::one());
        s
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.terms.add_scaled(&other.terms, &-Rational::one());
        s
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut s = Self::zero(self.dim, self.trunc);
        s.terms.add_scaled(&self.terms, c);
        s
    }

    /// Terms satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&FormKey) -> bool) -> Self {
        Self {
            terms: self.terms.filter(keep),
            ..self.clone()
        }
    }

    /// Applies `f` to every key, dropping those mapped to `None`.
    pub fn map_keys(&self, dim: usize, f: impl Fn(&FormKey) -> Option<(FormKey, Rational)>) -> Self {
        let mut out = Self::zero(dim, self.trunc);
        for (k, c) in self.iter() {
            if let Some((k2, s)) = f(k) {
                out.add_term(k2, c * s);
            }
        }
        out
    }

    /// Largest form degree present.
    pub fn degree(&self) -> Option<usize> {
        self.iter().map(|(k, _)| k.degree()).max()
    }

    fn combine(&self, other: &Self, glue: impl Fn(&Tensor, &Tensor) -> Tensor) -> Self {
        assert_eq!(self.dim, other.dim, "forms on different spaces");
        let mut out = Self::zero(self.dim, self.trunc.min(other.trunc));
        for (a, ca) in self.iter() {
            for (b, cb) in other.iter() {
                let s = merge_sign(a.mask, b.mask);
                if s == 0 {
                    continue;
                }
                let key = FormKey {
                    mask: a.mask | b.mask,
                    exps: a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect(),
                    tensor: glue(&a.tensor, &b.tensor),
                };
                out.add_term(key, ca * cb * Rational::from_integer(s.into()));
            }
        }
        out
    }

    /// Wedge product multiplying the last tensor factor of `self` with the
    /// first of `other`; on algebra-valued forms this is the algebra product.
    pub fn wedge(&self, other: &Self) -> Self {
        self.combine(other, |a, b| match (a.split_last(), b.split_first()) {
            (Some((la, ra)), Some((fb, rb))) => {
                let mut t = ra.to_vec();
                t.push(la.iter().chain(fb).copied().collect());
                t.extend_from_slice(rb);
                t
            }
            _ => a.iter().chain(b).cloned().collect(),
        })
    }

    /// Wedge product concatenating tensors.
    pub fn tensor(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a.iter().chain(b).cloned().collect())
    }

    /// `[a, b] = a ∧ b - (-1)^(|a||b|) b ∧ a` for homogeneous forms.
    pub fn commutator(&self, other: &Self) -> Self {
        let (p, q) = (self.degree().unwrap_or(0), other.degree().unwrap_or(0));
        let ba = other.wedge(self);
        let ba = if (p * q) % 2 == 0 {
            ba
        } else {
            ba.scaled(&-Rational::one())
        };
        self.wedge(other).sub(&ba)
    }

    /// Exterior derivative, `d(f dx_I) = Σ_k ∂_k f dx_k ∧ dx_I`.
    pub fn d(&self) -> Self {
        let mut out = Self::zero(self.dim, self.trunc);
        for (k, c) in self.iter() {
            for v in 0..self.dim {
                if k.exps[v] == 0 || k.mask & (1 << v) != 0 {
                    continue;
                }
                let s = merge_sign(1 << v, k.mask);
                let mut exps = k.exps.clone();
                exps[v] -= 1;
                let key = FormKey {
                    mask: k.mask | (1 << v),
                    exps,
                    tensor: k.tensor.clone(),
                };
                out.add_term(key, c * Rational::from_integer((s * i64::from(k.exps[v])).into()));
            }
        }
        out
    }

    /// `Σ g^k / k!` for a function whose values have no constant term.
    pub fn exp(&self) -> Result<Self, TransportError> {
        self.require_augmentation_free()?;
        let mut out = Self::one(self.dim, self.trunc);
        let mut power = Self::one(self.dim, self.trunc);
        for k in 1..=self.trunc {
            power = power.wedge(self).scaled(&Rational::new(1.into(), (k as i64).into()));
            out = out.add(&power);
        }
        Ok(out)
    }

    /// Rejects values with a component along the unit of the algebra; for
    /// those the exponential series does not terminate.
    pub fn require_augmentation_free(&self) -> Result<(), TransportError> {
        if self.iter().any(|(k, _)| k.tensor.iter().any(Vec::is_empty)) {
            return Err(TransportError::NotNilpotent);
        }
        Ok(())
    }

    /// Pullback along an affine map.
    pub fn pullback(&self, map: &AffineMap) -> Self {
        assert_eq!(map.target_dim(), self.dim, "pullback along a map to the wrong space");
        let source = map.source_dim();
        let mut out = Self::zero(source, self.trunc);
        let mut powers: BTreeMap<(usize, u32), ScalarPoly> = BTreeMap::new();
        for (k, c) in self.iter() {
            let mut poly = ScalarPoly::constant(source, Rational::one());
            for (i, &e) in k.exps.iter().enumerate() {
                if e > 0 {
                    let p = powers
                        .entry((i, e))
                        .or_insert_with(|| map.component(i).pow(source, e))
                        .clone();
                    poly = poly.mul(&p);
                }
            }
            let mut diff: BTreeMap<u32, Rational> = BTreeMap::from([(0, Rational::one())]);
            for i in (0..self.dim).filter(|i| k.mask & (1 << i) != 0) {
                let mut next = BTreeMap::new();
                for (m, x) in &diff {
                    for (j, a) in map.linear[i].iter().enumerate() {
                        let s = merge_sign(*m, 1 << j);
                        if s == 0 || a.is_zero() {
                            continue;
                        }
                        *next.entry(m | (1 << j)).or_insert_with(Rational::zero) +=
                            x * a * Rational::from_integer(s.into());
                    }
                }
                diff = next;
            }
            for (exps, p) in &poly.0 {
                for (m, x) in &diff {
                    let key = FormKey {
                        mask: *m,
                        exps: exps.clone(),
                        tensor: k.tensor.clone(),
                    };
                    out.add_term(key, c * p * x);
                }
            }
        }
        out
    }

    /// Integral over the standard simplex `{x_i >= 0, Σ x_i <= 1}` in the
    /// first `n` coordinates, leaving a form in the remaining ones. Only
    /// terms containing `dx_0 ∧ .. ∧ dx_{n-1}` contribute.
    pub fn integrate_simplex(&self, n: usize) -> Self {
        let full = (1u32 << n) - 1;
        self.map_keys(self.dim - n, |k| {
            if k.mask & full != full {
                return None;
            }
            let head: u32 = k.exps[..n].iter().sum();
            let num = k.exps[..n].iter().fold(Rational::one(), |acc, &a| acc * factorial(a));
            let value = num / factorial(head + n as u32);
            Some((
                FormKey {
                    mask: k.mask >> n,
                    exps: k.exps[n..].to_vec(),
                    tensor: k.tensor.clone(),
                },
                value,
            ))
        })
    }

    /// `x ↦ ∫_0^{x_v} f dx_v` on functions.
    pub fn antiderivative(&self, v: usize) -> Self {
        self.map_keys(self.dim, |k| {
            let mut exps = k.exps.clone();
            exps[v] += 1;
            let c = Rational::new(1.into(), i64::from(exps[v]).into());
            Some((
                FormKey {
                    mask: k.mask,
                    exps,
                    tensor: k.tensor.clone(),
                },
                c,
            ))
        })
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", format_rational(c))?;
            for (v, e) in k.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, " x{v}")?,
                    _ => write!(f, " x{v}^{e}")?,
                }
            }
            for v in (0..self.dim).filter(|v| k.mask & (1 << v) != 0) {
                write!(f, " dx{v}")?;
            }
            let words: Vec<String> = k
                .tensor
                .iter()
                .map(|w| {
                    if w.is_empty() {
                        "1".to_string()
                    } else {
                        w.iter().map(|l| format!("e{l}")).collect()
                    }
                })
                .collect();
            write!(f, " [{}]", words.join("|"))?;
        }
        Ok(())
    }
}

/// Scalar polynomial, keyed by exponent vectors.
#[derive(Clone, Debug)]
struct ScalarPoly(BTreeMap<Vec<u32>, Rational>);

impl ScalarPoly {
    fn constant(dim: usize, c: Rational) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(vec![0; dim], c);
        }
        Self(m)
    }

    fn mul(&self, other: &Self) -> Self {
        let mut m: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (a, x) in &self.0 {
            for (b, y) in &other.0 {
                let e: Vec<u32> = a.iter().zip(b).map(|(p, q)| p + q).collect();
                *m.entry(e).or_insert_with(Rational::zero) += x * y;
            }
        }
        m.retain(|_, v| !v.is_zero());
        Self(m)
    }

    fn pow(&self, dim: usize, e: u32) -> Self {
        (0..e).fold(Self::constant(dim, Rational::one()), |acc, _| acc.mul(self))
    }
}

/// `x = L y + c` from `R^source` to `R^target`.
#[derive(Clone, Debug)]
pub struct AffineMap {
    source: usize,
    /// `target` rows of length `source`.
    linear: Vec<Vec<Rational>>,
    offset: Vec<Rational>,
}

impl AffineMap {
    pub fn new(source: usize, linear: Vec<Vec<Rational>>, offset: Vec<Rational>) -> Self {
        assert_eq!(linear.len(), offset.len());
        assert!(linear.iter().all(|r| r.len() == source));
        Self { source, linear, offset }
    }

    /// The affine map with `e_0 = 0, e_1, .., e_m` (origin and unit vectors
    /// of the source) sent to the given points.
    pub fn from_vertices(images: &[Vec<Rational>]) -> Self {
        let origin = images[0].clone();
        let linear = (0..origin.len())
            .map(|i| images[1..].iter().map(|p| &p[i] - &origin[i]).collect())
            .collect();
        Self::new(images.len() - 1, linear, origin)
    }

    /// `self × id_extra`: the extra coordinates are appended unchanged.
    pub fn extended(&self, extra: usize) -> Self {
        let s = self.source_dim();
        let mut linear: Vec<Vec<Rational>> = self
            .linear
            .iter()
            .map(|r| {
                r.iter()
                    .cloned()
                    .chain(std::iter::repeat_n(Rational::zero(), extra))
                    .collect()
            })
            .collect();
        let mut offset = self.offset.clone();
        for j in 0..extra {
            linear.push(
                (0..s + extra)
                    .map(|c| if c == s + j { Rational::one() } else { Rational::zero() })
                    .collect(),
            );
            offset.push(Rational::zero());
        }
        Self::new(s + extra, linear, offset)
    }

    pub fn source_dim(&self) -> usize {
        self.source
    }

    pub fn target_dim(&self) -> usize {
        self.linear.len()
    }

    fn component(&self, i: usize) -> ScalarPoly {
        let s = self.source_dim();
        let mut p = ScalarPoly::constant(s, self.offset[i].clone());
        for (j, a) in self.linear[i].iter().enumerate() {
            if !a.is_zero() {
                let mut e = vec![0; s];
                e[j] = 1;
                p.0.insert(e, a.clone());
            }
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};

    #[test]
    fn d_squares_to_zero_and_is_a_derivation() {
        let (x, y, z) = (
            Form::coordinate(3, 2, 0),
            Form::coordinate(3, 2, 1),
            Form::coordinate(3, 2, 2),
        );
        let a = Form::word(3, 2, vec![0]);
        let f = x.wedge(&y).wedge(&y).wedge(&a).add(&z.wedge(&x));
        let g = f.d().wedge(&Form::word(3, 2, vec![1])).add(&x.wedge(&z).d());
        assert!(f.d().d().is_zero());
        assert!(g.d().d().is_zero());
        // Leibniz with the sign of the degree-one factor
        let lhs = f.d().wedge(&g).add(&f.wedge(&g.d()));
        assert_eq!(f.wedge(&g).d(), lhs);
        let lhs = g.d().wedge(&f).sub(&g.wedge(&f.d()));
        assert_eq!(g.wedge(&f).d(), lhs);
    }

    #[test]
    fn wedge_is_graded() {
        let dx = Form::dx(2, 1, 0);
        let dy = Form::dx(2, 1, 1);
        assert_eq!(dx.wedge(&dy), dy.wedge(&dx).scaled(&rat(-1)));
        assert!(dx.wedge(&dx).is_zero());
    }

    #[test]
    fn simplex_integrals() {
        let top = Form::dx(2, 1, 0).wedge(&Form::dx(2, 1, 1));
        assert_eq!(top.integrate_simplex(2), Form::one(0, 1).scaled(&ratio(1, 2)));
        let xy = Form::coordinate(2, 1, 0).wedge(&Form::coordinate(2, 1, 1)).wedge(&top);
        assert_eq!(xy.integrate_simplex(2), Form::one(0, 1).scaled(&ratio(1, 24)));
    }

    #[test]
    fn pullback_commutes_with_d() {
        let f = Form::coordinate(2, 2, 0)
            .wedge(&Form::coordinate(2, 2, 1))
            .wedge(&Form::coordinate(2, 2, 1))
            .wedge(&Form::word(2, 2, vec![0, 1]));
        let map = AffineMap::new(
            3,
            vec![vec![rat(2), rat(-1), ratio(1, 3)], vec![rat(1), rat(1), rat(0)]],
            vec![rat(1), ratio(1, 2)],
        );
        assert_eq!(f.pullback(&map).d(), f.d().pullback(&map));
        assert_eq!(f.d().pullback(&map).d(), Form::zero(3, 2));
        // a coordinate sent to zero
        let edge = AffineMap::new(1, vec![vec![rat(1)], vec![rat(0)]], vec![rat(0), rat(0)]);
        assert!(f.pullback(&edge).is_zero());
        let g = Form::coordinate(2, 2, 0).wedge(&Form::dx(2, 2, 0));
        assert_eq!(g.pullback(&edge), Form::coordinate(1, 2, 0).wedge(&Form::dx(1, 2, 0)));
    }

    #[test]
    fn truncation_kills_long_words() {
        let a = Form::word(1, 2, vec![0]);
        assert!(a.wedge(&a).wedge(&a).is_zero());
        assert!(Form::one(1, 2).exp().is_err());
        let e = a.exp().unwrap();
        assert_eq!(e, Form::one(1, 2).add(&a).add(&a.wedge(&a).scaled(&ratio(1, 2))));
    }
}
