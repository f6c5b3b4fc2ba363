//! Free associative and free Lie algebras on letters `0..g`.
//!
//! Lie elements are stored in the Lyndon basis (standard bracketing of
//! Lyndon words). Brackets are computed by expanding into the free
//! associative algebra and decomposing back, using that the bracketing of a
//! Lyndon word `l` equals `l` plus lexicographically larger words.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{format_rational, Rational};

pub type Word = Vec<u8>;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("polynomial is not a Lie element (leading word {0:?} is not Lyndon)")]
pub struct NotLie(pub Word);

/// Element of the free associative algebra.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AssocPoly {
    terms: BTreeMap<Word, Rational>,
}

impl AssocPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn word(w: Word) -> Self {
        Self::monomial(w, Rational::one())
    }

    pub fn monomial(w: Word, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &[u8]) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, w: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        for (w, x) in &other.terms {
            self.add_term(w.clone(), x * c);
        }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut p = Self::zero();
        p.add_scaled(self, c);
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add_term(w, a * b);
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        let mut p = self.mul(other);
        p.add_scaled(&other.mul(self), &-Rational::one());
        p
    }

    /// Applies a letter substitution, each letter going to a polynomial.
    pub fn substitute(&self, image: &dyn Fn(u8) -> AssocPoly) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let mut acc = AssocPoly::monomial(Vec::new(), c.clone());
            for &l in w {
                acc = acc.mul(&image(l));
            }
            out.add_scaled(&acc, &Rational::one());
        }
        out
    }

    /// Extends a letter map `letter -> polynomial` to a derivation.
    pub fn derive(&self, image: &dyn Fn(u8) -> AssocPoly) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            for i in 0..w.len() {
                let d = image(w[i]);
                if d.is_zero() {
                    continue;
                }
                let left = AssocPoly::monomial(w[..i].to_vec(), c.clone());
                let right = AssocPoly::word(w[i + 1..].to_vec());
                out.add_scaled(&left.mul(&d).mul(&right), &Rational::one());
            }
        }
        out
    }
}

impl fmt::Display for AssocPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({}){:?}", format_rational(c), w)?;
        }
        Ok(())
    }
}

pub fn is_lyndon(w: &[u8]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// Lyndon words of length `w` over `g` letters in lexicographic order (Duval).
pub fn lyndon_words(g: usize, w: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if g == 0 || w == 0 {
        return out;
    }
    let mut word: Vec<u8> = vec![0];
    loop {
        if word.len() == w {
            out.push(word.clone());
        }
        // next word of length <= w in the Duval sequence
        let base = word.clone();
        while word.len() < w {
            word.push(base[word.len() % base.len()]);
        }
        while let Some(&last) = word.last() {
            if last as usize == g - 1 {
                word.pop();
            } else {
                break;
            }
        }
        match word.last_mut() {
            Some(l) => *l += 1,
            None => return out,
        }
    }
}

fn mobius(mut n: usize) -> i64 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Dimension of the weight-`w` part of the free Lie algebra on `g` generators.
pub fn witt_dimension(g: usize, w: usize) -> usize {
    if w == 0 {
        return 0;
    }
    let s: i128 = (1..=w)
        .filter(|d| w.is_multiple_of(*d))
        .map(|d| mobius(d) as i128 * (g as i128).pow((w / d) as u32))
        .sum();
    (s / w as i128) as usize
}

/// `l = u v` with `v` the longest proper suffix that is Lyndon.
pub fn standard_factorization(l: &[u8]) -> (&[u8], &[u8]) {
    let i = (1..l.len()).find(|&i| is_lyndon(&l[i..])).expect("length >= 2");
    (&l[..i], &l[i..])
}

type ExpansionCache = Mutex<HashMap<Word, Arc<AssocPoly>>>;

/// Associative expansion of the standard bracketing of a Lyndon word.
pub fn lyndon_expansion(l: &[u8]) -> Arc<AssocPoly> {
    static C: OnceLock<ExpansionCache> = OnceLock::new();
    let cache = C.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(l) {
        return p.clone();
    }
    let p = if l.len() == 1 {
        AssocPoly::word(l.to_vec())
    } else {
        let (u, v) = standard_factorization(l);
        lyndon_expansion(u).commutator(&lyndon_expansion(v))
    };
    let p = Arc::new(p);
    cache.lock().unwrap().insert(l.to_vec(), p.clone());
    p
}

/// Element of a free Lie algebra, in the Lyndon basis.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LieWord {
    terms: BTreeMap<Word, Rational>,
}

impl LieWord {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn generator(letter: u8) -> Self {
        Self::basis(vec![letter])
    }

    /// The standard bracketing of a Lyndon word.
    pub fn basis(l: Word) -> Self {
        debug_assert!(is_lyndon(&l));
        let mut t = BTreeMap::new();
        t.insert(l, Rational::one());
        Self { terms: t }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, l: &[u8]) -> Rational {
        self.terms.get(l).cloned().unwrap_or_else(Rational::zero)
    }

    /// Restriction to one weight.
    pub fn homogeneous(&self, w: usize) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(l, _)| l.len() == w)
                .map(|(l, c)| (l.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_weight(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, l: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(l) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        for (l, x) in &other.terms {
            self.add_term(l.clone(), x * c);
        }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut v = Self::zero();
        v.add_scaled(self, c);
        v
    }

    pub fn expand(&self) -> AssocPoly {
        let mut p = AssocPoly::zero();
        for (l, c) in &self.terms {
            p.add_scaled(&lyndon_expansion(l), c);
        }
        p
    }

    /// Inverse of [`LieWord::expand`]; fails if `p` is not a Lie polynomial.
    pub fn from_assoc(p: &AssocPoly) -> Result<Self, NotLie> {
        let mut rest = p.clone();
        let mut out = Self::zero();
        while let Some((w, c)) = rest.terms.iter().next().map(|(w, c)| (w.clone(), c.clone())) {
            if !is_lyndon(&w) {
                return Err(NotLie(w));
            }
            rest.add_scaled(&lyndon_expansion(&w), &-c.clone());
            out.add_term(w, c);
        }
        Ok(out)
    }

    pub fn bracket(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::from_assoc(&self.expand().commutator(&other.expand()))
            .expect("commutators of Lie polynomials are Lie polynomials")
    }

    /// Truncated bracket dropping weights above `trunc`.
    pub fn bracket_trunc(&self, other: &Self, trunc: usize) -> Self {
        let mut out = Self::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                if u.len() + v.len() > trunc {
                    continue;
                }
                let p = lyndon_expansion(u).commutator(&lyndon_expansion(v));
                let l = Self::from_assoc(&p).expect("commutator of Lie polynomials");
                out.add_scaled(&l, &(a * b));
            }
        }
        out
    }

    /// Coordinates in the Lyndon basis of weight `w` on `g` letters.
    pub fn coords(&self, g: usize, w: usize) -> Vec<Rational> {
        lyndon_words(g, w).iter().map(|l| self.coeff(l)).collect()
    }

    pub fn from_coords(g: usize, w: usize, c: &[Rational]) -> Self {
        let mut v = Self::zero();
        for (l, x) in lyndon_words(g, w).into_iter().zip(c) {
            v.add_term(l, x.clone());
        }
        v
    }

    /// Applies a letter map `letter -> LieWord` as a Lie algebra morphism.
    pub fn map_letters(&self, image: &dyn Fn(u8) -> LieWord) -> LieWord {
        let img = |l: u8| image(l).expand();
        LieWord::from_assoc(&self.expand().substitute(&img)).expect("morphic image of a Lie element")
    }

    /// Formats with the given letter names, e.g. `[x1,[x1,x2]]`.
    pub fn display_with(&self, name: &dyn Fn(u8) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        fn br(l: &[u8], name: &dyn Fn(u8) -> String) -> String {
            if l.len() == 1 {
                name(l[0])
            } else {
                let (u, v) = standard_factorization(l);
                format!("[{},{}]", br(u, name), br(v, name))
            }
        }
        self.terms
            .iter()
            .map(|(l, c)| format!("({}){}", format_rational(c), br(l, name)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use proptest::prelude::*;

    #[test]
    fn lyndon_examples() {
        assert_eq!(lyndon_words(2, 1), vec![vec![0], vec![1]]);
        assert_eq!(lyndon_words(2, 3), vec![vec![0, 0, 1], vec![0, 1, 1]]);
        assert_eq!(lyndon_words(3, 2).len(), 3);
        let l = LieWord::basis(vec![0, 0, 1]);
        assert_eq!(l.display_with(&|c| ["x", "y"][c as usize].into()), "(1)[x,[x,y]]");
        let r = LieWord::basis(vec![0, 1, 1]);
        assert_eq!(r.display_with(&|c| ["x", "y"][c as usize].into()), "(1)[[x,y],y]");
    }

    #[test]
    fn witt_dimensions_match_lyndon_counts() {
        for g in 1..=3 {
            for w in 1..=6 {
                let words = lyndon_words(g, w);
                assert_eq!(words.len(), witt_dimension(g, w), "g={g} w={w}");
                assert!(words.iter().all(|l| is_lyndon(l)));
                assert!(words.windows(2).all(|p| p[0] < p[1]));
            }
        }
    }

    #[test]
    fn basic_brackets() {
        let x = LieWord::generator(0);
        let y = LieWord::generator(1);
        assert!(x.bracket(&x).is_zero());
        assert_eq!(x.bracket(&y), LieWord::basis(vec![0, 1]));
        assert_eq!(y.bracket(&x), LieWord::basis(vec![0, 1]).scaled(&rat(-1)));
        let xy = x.bracket(&y);
        let big = xy.bracket(&x.bracket(&xy));
        assert!(big.iter().all(|(l, _)| l.len() == 5 && is_lyndon(l)));
        assert!(!big.is_zero());
    }

    #[test]
    fn non_lie_polynomial_is_rejected() {
        let p = AssocPoly::word(vec![0, 1]);
        assert!(LieWord::from_assoc(&p).is_err());
    }

    fn arb_lie() -> impl Strategy<Value = LieWord> {
        proptest::collection::vec((0usize..20, -3i64..=3), 1..4).prop_map(|v| {
            let mut pool = Vec::new();
            for w in 1..=3 {
                pool.extend(lyndon_words(3, w));
            }
            let mut l = LieWord::zero();
            for (i, c) in v {
                l.add_term(pool[i % pool.len()].clone(), rat(c));
            }
            l
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn jacobi_and_antisymmetry(a in arb_lie(), b in arb_lie(), c in arb_lie()) {
            let s = a.bracket(&b);
            let mut t = b.bracket(&a);
            t.add_scaled(&s, &rat(1));
            prop_assert!(t.is_zero());
            let mut j = a.bracket(&b.bracket(&c));
            j.add_scaled(&b.bracket(&c.bracket(&a)), &rat(1));
            j.add_scaled(&c.bracket(&a.bracket(&b)), &rat(1));
            prop_assert!(j.is_zero());
        }
    }
}
