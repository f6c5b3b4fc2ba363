//! Special derivations of the free Lie algebra on `x_0, ..., x_{n-1}`,
//! cyclic words, and the divergence.
//!
//! A tuple `(a_0, ..., a_{n-1})` acts by `x_k ↦ [a_k, x_k]`; it is special
//! when `Σ_k [a_k, x_k] = 0`. In weight one `a_k` is defined up to multiples
//! of `x_k`, so the `x_k` term of `a_k` is dropped.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};
use thiserror::Error;

use super::free::{lyndon_words, standard_factorization, witt_dimension, AssocPoly, LieWord, Word};
use super::tn::{tn_basis, TnElement};
use crate::linalg::{format_rational, Rational, SparseRationalMatrix};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SderError {
    #[error("tuple has {found} components, expected {expected}")]
    Arity { expected: usize, found: usize },
    #[error("component {component} is not homogeneous of weight {weight}")]
    Inhomogeneous { component: usize, weight: usize },
    #[error("tuple violates the special condition: sum of [a_k, x_k] = {0}")]
    Constraint(String),
}

fn x(k: usize) -> LieWord {
    LieWord::generator(k as u8)
}

fn letter_name(l: u8) -> String {
    format!("x{}", l + 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SderElement {
    n: usize,
    weight: usize,
    tuple: Vec<LieWord>,
}

impl SderElement {
    /// Validated constructor: homogeneous components satisfying the special condition.
    pub fn new(n: usize, weight: usize, tuple: Vec<LieWord>) -> Result<Self, SderError> {
        if tuple.len() != n {
            return Err(SderError::Arity {
                expected: n,
                found: tuple.len(),
            });
        }
        for (k, a) in tuple.iter().enumerate() {
            if a.homogeneous(weight) != *a {
                return Err(SderError::Inhomogeneous { component: k, weight });
            }
        }
        let s = Self::unchecked(n, weight, tuple);
        let c = s.constraint();
        if !c.is_zero() {
            return Err(SderError::Constraint(c.display_with(&letter_name)));
        }
        Ok(s)
    }

    /// Tuple without the special condition checked (still normalized).
    pub fn unchecked(n: usize, weight: usize, mut tuple: Vec<LieWord>) -> Self {
        if weight == 1 {
            for (k, a) in tuple.iter_mut().enumerate() {
                let c = a.coeff(&[k as u8]);
                a.add_term(vec![k as u8], -c);
            }
        }
        Self { n, weight, tuple }
    }

    pub fn zero(n: usize, weight: usize) -> Self {
        Self::unchecked(n, weight, vec![LieWord::zero(); n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn components(&self) -> &[LieWord] {
        &self.tuple
    }

    pub fn is_zero(&self) -> bool {
        self.tuple.iter().all(LieWord::is_zero)
    }

    /// `Σ_k [a_k, x_k]`.
    pub fn constraint(&self) -> LieWord {
        let mut c = LieWord::zero();
        for (k, a) in self.tuple.iter().enumerate() {
            c.add_scaled(&a.bracket(&x(k)), &Rational::one());
        }
        c
    }

    pub fn add_scaled(&self, other: &Self, c: &Rational) -> Self {
        assert_eq!((self.n, self.weight), (other.n, other.weight));
        let tuple = self
            .tuple
            .iter()
            .zip(&other.tuple)
            .map(|(a, b)| {
                let mut s = a.clone();
                s.add_scaled(b, c);
                s
            })
            .collect();
        Self { tuple, ..self.clone() }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        Self::zero(self.n, self.weight).add_scaled(self, c)
    }

    /// The derivation applied to a Lie element.
    pub fn apply(&self, f: &LieWord) -> LieWord {
        let images: Vec<AssocPoly> = self
            .tuple
            .iter()
            .enumerate()
            .map(|(k, a)| a.bracket(&x(k)).expand())
            .collect();
        let img = |l: u8| images[l as usize].clone();
        LieWord::from_assoc(&f.expand().derive(&img)).expect("derivations preserve Lie elements")
    }

    /// Commutator of derivations: `c_k = u(b_k) - v(a_k) - [a_k, b_k]`.
    pub fn bracket(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let tuple = self
            .tuple
            .iter()
            .zip(&other.tuple)
            .map(|(a, b)| {
                let mut c = self.apply(b);
                c.add_scaled(&other.apply(a), &-Rational::one());
                c.add_scaled(&a.bracket(b), &-Rational::one());
                c
            })
            .collect();
        Self::unchecked(self.n, self.weight + other.weight, tuple)
    }

    /// Concatenated Lyndon coordinates of the components.
    pub fn coords(&self) -> Vec<Rational> {
        self.tuple.iter().flat_map(|a| a.coords(self.n, self.weight)).collect()
    }
}

impl fmt::Display for SderElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.tuple.iter().map(|a| a.display_with(&letter_name)).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Matrix of `(a_k) ↦ Σ [a_k, x_k]` from weight-`w` tuples to weight `w + 1`.
pub fn constraint_matrix(n: usize, w: usize) -> SparseRationalMatrix {
    let rows = witt_dimension(n, w + 1);
    let mut cols = Vec::new();
    for k in 0..n {
        for l in lyndon_words(n, w) {
            let c = LieWord::basis(l).bracket(&x(k)).coords(n, w + 1);
            cols.push(crate::linalg::dense_to_sparse(&c));
        }
    }
    SparseRationalMatrix::from_columns(rows, &cols)
}

/// `dim sder_n^{(w)}`: tuples modulo the weight-one ambiguity, cut out by the
/// special condition.
pub fn sder_dimension(n: usize, w: usize) -> usize {
    let per = witt_dimension(n, w) - usize::from(w == 1);
    let m = constraint_matrix(n, w);
    // x_k in slot k lies in the kernel, so the rank is unaffected by the ambiguity
    n * per - m.rank()
}

/// Image of a layer basis element `ℓ` (letters `j < k` standing for `t_jk`).
fn embed_basis(n: usize, k: usize, l: &[u8]) -> Arc<SderElement> {
    type Cache = Mutex<HashMap<(usize, usize, Word), Arc<SderElement>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let key = (n, k, l.to_vec());
    if let Some(s) = CACHE.get_or_init(Default::default).lock().unwrap().get(&key) {
        return s.clone();
    }
    let s = if l.len() == 1 {
        let j = l[0] as usize;
        let mut tuple = vec![LieWord::zero(); n];
        tuple[j] = x(k);
        tuple[k] = x(j);
        SderElement::unchecked(n, 1, tuple)
    } else {
        let (u, v) = standard_factorization(l);
        embed_basis(n, k, u).bracket(&embed_basis(n, k, v))
    };
    let s = Arc::new(s);
    CACHE
        .get_or_init(Default::default)
        .lock()
        .unwrap()
        .insert(key, s.clone());
    s
}

/// The Lie morphism `t_n → sder_n`, `t_ab ↦ (a_a = x_b, a_b = x_a)`, on the
/// weight-`w` part of `x`.
pub fn sder_embed(x: &TnElement, w: usize) -> SderElement {
    let n = x.n();
    let mut out = SderElement::zero(n, w);
    for k in 1..n {
        for (l, c) in x.layer(k).iter() {
            if l.len() == w {
                out = out.add_scaled(&embed_basis(n, k, l), c);
            }
        }
    }
    out
}

/// Matrix whose columns are the images of the `t_n^{(w)}` basis in tuple coordinates.
pub fn embedding_matrix(n: usize, w: usize) -> SparseRationalMatrix {
    let rows = n * witt_dimension(n, w);
    let cols: Vec<_> = tn_basis(n, w)
        .into_iter()
        .map(|(k, l)| crate::linalg::dense_to_sparse(&embed_basis(n, k, &l).coords()))
        .collect();
    SparseRationalMatrix::from_columns(rows, &cols)
}

/// Lexicographically least rotation.
pub fn least_rotation(w: &[u8]) -> Word {
    (0..w.len())
        .map(|i| [&w[i..], &w[..i]].concat())
        .min()
        .unwrap_or_default()
}

/// Element of the space of cyclic words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TraceElement {
    terms: BTreeMap<Word, Rational>,
}

impl TraceElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &[u8]) -> Rational {
        self.terms
            .get(&least_rotation(w))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn add_word(&mut self, w: &[u8], c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = least_rotation(w);
        let e = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        for (w, x) in &other.terms {
            self.add_word(w, x * c);
        }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut t = Self::zero();
        t.add_scaled(self, c);
        t
    }
}

impl fmt::Display for TraceElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let word: Vec<String> = w.iter().map(|&l| letter_name(l)).collect();
                format!("({}) tr({})", format_rational(c), word.join(""))
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Projection of the free associative algebra onto cyclic words.
pub fn trace_project(p: &AssocPoly) -> TraceElement {
    let mut t = TraceElement::zero();
    for (w, c) in p.iter() {
        t.add_word(w, c.clone());
    }
    t
}

/// `div(u) = Σ_k tr(x_k ∂_k a_k)` where `f = f_0 + Σ_k (∂_k f) x_k`.
/// Since `tr(x_k g) = tr(g x_k)`, this is the trace of the words of each
/// `a_k` ending in `x_k`.
pub fn div(u: &SderElement) -> Result<TraceElement, SderError> {
    let c = u.constraint();
    if !c.is_zero() {
        return Err(SderError::Constraint(c.display_with(&letter_name)));
    }
    let mut t = TraceElement::zero();
    for (k, a) in u.tuple.iter().enumerate() {
        for (w, c) in a.expand().iter() {
            if w.last() == Some(&(k as u8)) {
                t.add_word(w, c.clone());
            }
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::tn::tn_dimension;
    use crate::linalg::rat;
    use proptest::prelude::*;

    fn gen(n: usize, a: usize, b: usize) -> TnElement {
        TnElement::generator(n, a, b)
    }

    #[test]
    fn generator_image() {
        let s = sder_embed(&gen(2, 0, 1), 1);
        assert_eq!(s.components(), &[x(1), x(0)]);
        assert!(s.constraint().is_zero());
        assert!(div(&s).unwrap().is_zero());
    }

    #[test]
    fn embedding_is_a_morphism() {
        let (a, b) = (gen(3, 0, 1), gen(3, 0, 2));
        let lhs = sder_embed(&a.bracket(&b), 2);
        let rhs = sder_embed(&a, 1).bracket(&sder_embed(&b, 1));
        assert_eq!(lhs, rhs);
        assert!(lhs.constraint().is_zero());
    }

    #[test]
    fn embedding_is_injective() {
        for w in 1..=4 {
            assert_eq!(embedding_matrix(3, w).rank(), tn_dimension(3, w), "w={w}");
        }
        for w in 1..=3 {
            assert_eq!(embedding_matrix(4, w).rank(), tn_dimension(4, w), "w={w}");
        }
    }

    #[test]
    fn small_sder_dimensions() {
        // weight one: t_n maps onto sder_n
        assert_eq!(sder_dimension(2, 1), 1);
        assert_eq!(sder_dimension(3, 1), 3);
        assert_eq!(sder_dimension(2, 2), 0);
        for w in 1..=3 {
            assert!(sder_dimension(3, w) >= tn_dimension(3, w));
        }
    }

    #[test]
    fn div_vanishes_on_image_of_tn() {
        for n in 2..=4 {
            for w in 1..=3 {
                for (k, l) in tn_basis(n, w) {
                    let s = embed_basis(n, k, &l);
                    assert!(div(&s).unwrap().is_zero(), "n={n} w={w} {l:?}");
                }
            }
        }
    }

    #[test]
    fn div_rejects_non_special_tuples() {
        let bad = SderElement::unchecked(2, 1, vec![x(1), LieWord::zero()]);
        assert!(matches!(div(&bad), Err(SderError::Constraint(_))));
        assert!(SderElement::new(2, 1, vec![x(1), LieWord::zero()]).is_err());
    }

    #[test]
    fn constraint_preserved_by_brackets() {
        let mut elems = Vec::new();
        for w in 1..=2 {
            for (k, l) in tn_basis(3, w) {
                elems.push((*embed_basis(3, k, &l)).clone());
            }
        }
        for a in &elems {
            for b in &elems {
                assert!(a.bracket(b).constraint().is_zero());
            }
        }
    }

    #[test]
    fn div_is_linear() {
        let a = sder_embed(&gen(3, 0, 1).bracket(&gen(3, 0, 2)), 2);
        let u = SderElement::new(3, 2, vec![LieWord::basis(vec![0, 1]), LieWord::zero(), LieWord::zero()]);
        assert!(u.is_err());
        let b = sder_embed(&gen(3, 1, 2).bracket(&gen(3, 0, 2)), 2);
        let lhs = div(&a.scaled(&rat(2)).add_scaled(&b, &rat(1))).unwrap();
        let mut rhs = div(&a).unwrap().scaled(&rat(2));
        rhs.add_scaled(&div(&b).unwrap(), &rat(1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn cyclic_keys() {
        let mut t = TraceElement::zero();
        t.add_word(&[0, 1], rat(1));
        t.add_word(&[1, 0], rat(-1));
        assert!(t.is_zero());
        assert_eq!(least_rotation(&[1, 2, 0]), vec![0, 1, 2]);
        assert_eq!(least_rotation(&[2, 0, 1]), least_rotation(&[0, 1, 2]));
    }

    fn arb_poly() -> impl Strategy<Value = AssocPoly> {
        proptest::collection::vec((proptest::collection::vec(0u8..3, 1..4), -4i64..=4), 0..5).prop_map(|t| {
            let mut p = AssocPoly::zero();
            for (w, c) in t {
                p.add_term(w, rat(c));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn trace_kills_commutators(u in arb_poly(), v in arb_poly()) {
            prop_assert!(trace_project(&u.commutator(&v)).is_zero());
        }
    }
}
