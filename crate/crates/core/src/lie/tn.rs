//! The Drinfeld-Kohno Lie algebra `t_n` in the layered semidirect model.
//!
//! `t_n = t_{n-1} ⋉ free(t_{1n}, ..., t_{n-1,n})`, recursively. Layer `k`
//! (zero-based external `k >= 1`) is a free Lie algebra whose letter `j < k`
//! stands for `t_{jk}`. A lower layer acts on a higher one by derivations
//! determined on generators by
//! `[t_ab, t_cl] = 0` for `c ∉ {a, b}`, `[t_ab, t_al] = [t_al, t_bl]`,
//! `[t_ab, t_bl] = [t_bl, t_al]`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::free::{lyndon_words, standard_factorization, witt_dimension, AssocPoly, LieWord};
use crate::linalg::{format_rational, parse_rational, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("mismatched series: n {0} vs {1}, truncation {2} vs {3}")]
    Mismatch(usize, usize, usize, usize),
    #[error("malformed series: {0}")]
    Malformed(String),
    #[error("expected a series over t_{expected}, found t_{found}")]
    Arity { expected: usize, found: usize },
    #[error("augmentation must be {expected}, found {found}")]
    Augmentation { expected: String, found: String },
}

/// Index of the generator `t_ab` (`a < b`, zero-based) among all generators,
/// ordered by `b` then `a`.
pub fn pair_index(a: usize, b: usize) -> usize {
    let (a, b) = (a.min(b), a.max(b));
    b * (b - 1) / 2 + a
}

pub fn pair_of_index(i: usize) -> (usize, usize) {
    let mut b = 1;
    while (b + 1) * b / 2 <= i {
        b += 1;
    }
    (i - b * (b - 1) / 2, b)
}

pub fn generator_name(a: usize, b: usize) -> String {
    format!("t{}{}", a.min(b) + 1, a.max(b) + 1)
}

pub fn tn_dimension(n: usize, w: usize) -> usize {
    (1..n).map(|k| witt_dimension(k, w)).sum()
}

/// Basis labels of `t_n^{(w)}`: `(layer, Lyndon word)` in basis order.
pub fn tn_basis(n: usize, w: usize) -> Vec<(usize, Vec<u8>)> {
    (1..n)
        .flat_map(|k| lyndon_words(k, w).into_iter().map(move |l| (k, l)))
        .collect()
}

/// Element of `t_n` (no truncation attached).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TnElement {
    n: usize,
    layers: Vec<LieWord>,
}

impl TnElement {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            layers: vec![LieWord::zero(); n],
        }
    }

    pub fn generator(n: usize, a: usize, b: usize) -> Self {
        assert!(a != b && a < n && b < n);
        let mut x = Self::zero(n);
        x.layers[a.max(b)] = LieWord::generator(a.min(b) as u8);
        x
    }

    pub fn from_layer(n: usize, k: usize, word: LieWord) -> Self {
        let mut x = Self::zero(n);
        x.layers[k] = word;
        x
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn layer(&self, k: usize) -> &LieWord {
        &self.layers[k]
    }

    pub fn is_zero(&self) -> bool {
        self.layers.iter().all(LieWord::is_zero)
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        assert_eq!(self.n, other.n);
        for (x, y) in self.layers.iter_mut().zip(&other.layers) {
            x.add_scaled(y, c);
        }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut x = Self::zero(self.n);
        x.add_scaled(self, c);
        x
    }

    pub fn homogeneous(&self, w: usize) -> Self {
        Self {
            n: self.n,
            layers: self.layers.iter().map(|l| l.homogeneous(w)).collect(),
        }
    }

    pub fn max_weight(&self) -> usize {
        self.layers.iter().map(LieWord::max_weight).max().unwrap_or(0)
    }

    /// Coordinates of the weight-`w` part in the basis [`tn_basis`].
    pub fn coords(&self, w: usize) -> Vec<Rational> {
        (1..self.n).flat_map(|k| self.layers[k].coords(k, w)).collect()
    }

    pub fn from_coords(n: usize, w: usize, c: &[Rational]) -> Self {
        let mut x = Self::zero(n);
        let mut off = 0;
        for k in 1..n {
            let d = witt_dimension(k, w);
            x.layers[k] = LieWord::from_coords(k, w, &c[off..off + d]);
            off += d;
        }
        x
    }

    pub fn basis_element(n: usize, w: usize, i: usize) -> Self {
        let (k, l) = tn_basis(n, w).swap_remove(i);
        Self::from_layer(n, k, LieWord::basis(l))
    }

    pub fn bracket(&self, other: &Self) -> Self {
        self.bracket_trunc(other, usize::MAX)
    }

    /// Bracket in the semidirect model, dropping weights above `trunc`.
    pub fn bracket_trunc(&self, other: &Self, trunc: usize) -> Self {
        assert_eq!(self.n, other.n, "t_n brackets need equal n");
        let mut out = Self::zero(self.n);
        for k in 1..self.n {
            for l in 1..self.n {
                let (x, y) = (&self.layers[k], &other.layers[l]);
                if x.is_zero() || y.is_zero() {
                    continue;
                }
                match k.cmp(&l) {
                    std::cmp::Ordering::Equal => {
                        let b = x.bracket_trunc(y, trunc);
                        out.layers[k].add_scaled(&b, &Rational::from_integer(1.into()));
                    }
                    std::cmp::Ordering::Less => {
                        let b = act(k, x, l, y, trunc);
                        out.layers[l].add_scaled(&b, &Rational::from_integer(1.into()));
                    }
                    std::cmp::Ordering::Greater => {
                        let b = act(l, y, k, x, trunc);
                        out.layers[k].add_scaled(&b, &Rational::from_integer((-1).into()));
                    }
                }
            }
        }
        out
    }

    /// Images of the layers in the free associative algebra on all generators
    /// (letter = [`pair_index`]).
    pub fn expand(&self) -> AssocPoly {
        let mut p = AssocPoly::zero();
        for k in 1..self.n {
            let img = |j: u8| AssocPoly::word(vec![pair_index(j as usize, k) as u8]);
            p.add_scaled(
                &self.layers[k].expand().substitute(&img),
                &Rational::from_integer(1.into()),
            );
        }
        p
    }

    pub fn display(&self) -> String {
        let parts: Vec<String> = (1..self.n)
            .filter(|&k| !self.layers[k].is_zero())
            .map(|k| self.layers[k].display_with(&|j| generator_name(j as usize, k)))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Action of the layer-`k` element `x` on the layer-`l` element `y`, `k < l`.
fn act(k: usize, x: &LieWord, _l: usize, y: &LieWord, trunc: usize) -> LieWord {
    let mut out = LieWord::zero();
    for (word, c) in x.iter() {
        let mut z = act_basis(k, word, y, trunc);
        z = z.scaled(c);
        out.add_scaled(&z, &Rational::from_integer(1.into()));
    }
    out
}

fn act_basis(k: usize, word: &[u8], y: &LieWord, trunc: usize) -> LieWord {
    if y.is_zero() {
        return LieWord::zero();
    }
    if word.len() == 1 {
        return act_generator(word[0] as usize, k, y, trunc);
    }
    let (u, v) = standard_factorization(word);
    let mut a = act_basis(k, u, &act_basis(k, v, y, trunc), trunc);
    let b = act_basis(k, v, &act_basis(k, u, y, trunc), trunc);
    a.add_scaled(&b, &Rational::from_integer((-1).into()));
    a
}

/// `[t_ab, y]` for `y` in layer `l > b`.
fn act_generator(a: usize, b: usize, y: &LieWord, trunc: usize) -> LieWord {
    let (ua, ub) = (a as u8, b as u8);
    let image = |c: u8| -> AssocPoly {
        let (p, q) = if c == ua {
            (ua, ub)
        } else if c == ub {
            (ub, ua)
        } else {
            return AssocPoly::zero();
        };
        AssocPoly::word(vec![p]).commutator(&AssocPoly::word(vec![q]))
    };
    let mut trimmed = LieWord::zero();
    for (w, c) in y.iter() {
        if w.len() < trunc {
            trimmed.add_term(w.clone(), c.clone());
        }
    }
    LieWord::from_assoc(&trimmed.expand().derive(&image)).expect("derivations preserve Lie elements")
}

/// Weight-truncated element of the completion of `t_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieSeries {
    pub n: usize,
    pub trunc: usize,
    elem: TnElement,
}

impl LieSeries {
    pub fn new(n: usize, trunc: usize, elem: TnElement) -> Self {
        assert_eq!(elem.n(), n);
        let mut e = TnElement::zero(n);
        for w in 1..=trunc {
            e.add_scaled(&elem.homogeneous(w), &Rational::from_integer(1.into()));
        }
        Self { n, trunc, elem: e }
    }

    pub fn zero(n: usize, trunc: usize) -> Self {
        Self::new(n, trunc, TnElement::zero(n))
    }

    pub fn element(&self) -> &TnElement {
        &self.elem
    }

    pub fn bracket(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        Ok(Self::new(
            self.n,
            self.trunc,
            self.elem.bracket_trunc(&other.elem, self.trunc),
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let mut e = self.elem.clone();
        e.add_scaled(&other.elem, &Rational::from_integer(1.into()));
        Ok(Self::new(self.n, self.trunc, e))
    }

    fn check(&self, other: &Self) -> Result<(), SeriesError> {
        if self.n != other.n || self.trunc != other.trunc {
            return Err(SeriesError::Mismatch(self.n, other.n, self.trunc, other.trunc));
        }
        Ok(())
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            n: self.n,
            trunc: self.trunc,
            terms: (1..=self.trunc)
                .map(|w| SeriesTerm {
                    weight: w,
                    basis: format!("t{}", self.n),
                    coeffs: self.elem.coords(w).iter().map(format_rational).collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &SeriesJson) -> Result<Self, SeriesError> {
        let mut e = TnElement::zero(j.n);
        for t in &j.terms {
            let c: Vec<Rational> = t
                .coeffs
                .iter()
                .map(|s| parse_rational(s).ok_or_else(|| SeriesError::Malformed(s.clone())))
                .collect::<Result<_, _>>()?;
            if c.len() != tn_dimension(j.n, t.weight) {
                return Err(SeriesError::Malformed(format!(
                    "weight {} needs {} coefficients",
                    t.weight,
                    tn_dimension(j.n, t.weight)
                )));
            }
            e.add_scaled(
                &TnElement::from_coords(j.n, t.weight, &c),
                &Rational::from_integer(1.into()),
            );
        }
        Ok(Self::new(j.n, j.trunc, e))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub n: usize,
    pub trunc: usize,
    pub terms: Vec<SeriesTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTerm {
    pub weight: usize,
    pub basis: String,
    pub coeffs: Vec<String>,
}

/// Weight-`w` coordinates of a family of elements, one column each.
pub fn coordinate_columns(xs: &[TnElement], w: usize) -> BTreeMap<usize, Vec<Rational>> {
    xs.iter().enumerate().map(|(i, x)| (i, x.coords(w))).collect()
}
