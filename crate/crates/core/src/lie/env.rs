//! Truncated completed enveloping algebra `U(t̂_n)`.
//!
//! The weight-`w` component is the span of words of length `w` in the
//! generators `t_ab` (letter = [`pair_index`]) modulo the weight-`w` part of
//! the two-sided ideal generated by the infinitesimal braid relations. A word
//! is encoded as its base-`N` integer (`N` generators), so numeric order is
//! lexicographic order. Elements are kept in normal form: reduced against an
//! echelon basis of the ideal, which leaves them supported on the non-pivot
//! words. Those words are the monomial basis of the quotient.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Signed, Zero};

use super::free::AssocPoly;
use super::free::LieWord;
use super::tn::{generator_name, pair_index, pair_of_index, tn_basis, LieSeries, SeriesError, TnElement};
use crate::linalg::{format_rational, rational_to_f64, Echelon, Rational, SparseVec};

pub fn generator_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Quadratic relations of `U(t_n)` on word indices of length 2.
fn relations(n: usize) -> Vec<SparseVec> {
    let g = generator_count(n);
    let one = Rational::one();
    let mut rels = Vec::new();
    let commutator = |p: usize, q: usize, rels: &mut Vec<SparseVec>| {
        let mut r: BTreeMap<usize, Rational> = BTreeMap::new();
        *r.entry(p * g + q).or_insert_with(Rational::zero) += &one;
        *r.entry(q * g + p).or_insert_with(Rational::zero) -= &one;
        let v: SparseVec = r.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if !v.is_empty() {
            rels.push(v);
        }
    };
    for p in 0..g {
        for q in p + 1..g {
            let (a, b) = pair_of_index(p);
            let (c, d) = pair_of_index(q);
            if a != c && a != d && b != c && b != d {
                commutator(p, q, &mut rels);
            }
        }
    }
    // [t_ij, t_ik + t_jk] for distinct i, j, k
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                let x = pair_index(i, j);
                let mut r: BTreeMap<usize, Rational> = BTreeMap::new();
                for y in [pair_index(i, k), pair_index(j, k)] {
                    *r.entry(x * g + y).or_insert_with(Rational::zero) += &one;
                    *r.entry(y * g + x).or_insert_with(Rational::zero) -= &one;
                }
                let v: SparseVec = r.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                if !v.is_empty() {
                    rels.push(v);
                }
            }
        }
    }
    rels
}

/// Echelon basis of the relation ideal in one weight, with the quotient basis.
pub struct WeightBasis {
    g: usize,
    w: usize,
    ideal: Echelon,
    normal: Vec<usize>,
}

impl WeightBasis {
    fn build(n: usize, w: usize) -> Self {
        let g = generator_count(n);
        let mut ideal = Echelon::new(false);
        if w >= 2 {
            let rels = relations(n);
            for p in 0..=w - 2 {
                let right = g.pow((w - 2 - p) as u32);
                for u in 0..g.pow(p as u32) {
                    for r in &rels {
                        for v in 0..right {
                            let vec: SparseVec = r
                                .iter()
                                .map(|(i, c)| ((u * g * g + i) * right + v, c.clone()))
                                .collect();
                            ideal.insert(vec, None);
                        }
                    }
                }
            }
        }
        let total = g.pow(w as u32);
        let normal = (0..total)
            .filter(|&i| ideal.reduce(vec![(i, Rational::one())]).0 == [(i, Rational::one())])
            .collect();
        Self { g, w, ideal, normal }
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// Quotient basis as word indices.
    pub fn words(&self) -> &[usize] {
        &self.normal
    }

    pub fn reduce(&self, v: SparseVec) -> SparseVec {
        self.ideal.reduce(v).0
    }

    pub fn letters(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.w];
        for slot in out.iter_mut().rev() {
            *slot = idx % self.g;
            idx /= self.g;
        }
        out
    }
}

type BasisCache = Mutex<HashMap<(usize, usize), Arc<OnceLock<Arc<WeightBasis>>>>>;

pub fn weight_basis(n: usize, w: usize) -> Arc<WeightBasis> {
    static CACHE: OnceLock<BasisCache> = OnceLock::new();
    let cell = CACHE
        .get_or_init(Default::default)
        .lock()
        .unwrap()
        .entry((n, w))
        .or_default()
        .clone();
    cell.get_or_init(|| Arc::new(WeightBasis::build(n, w))).clone()
}

pub fn env_dimension(n: usize, w: usize) -> usize {
    weight_basis(n, w).dim()
}

/// Weight-truncated element of `U(t̂_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvSeries {
    n: usize,
    trunc: usize,
    comps: Vec<SparseVec>,
}

fn merge(map: BTreeMap<usize, Rational>) -> SparseVec {
    map.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

impl EnvSeries {
    pub fn zero(n: usize, trunc: usize) -> Self {
        Self {
            n,
            trunc,
            comps: vec![Vec::new(); trunc + 1],
        }
    }

    pub fn scalar(n: usize, trunc: usize, c: Rational) -> Self {
        let mut s = Self::zero(n, trunc);
        if !c.is_zero() {
            s.comps[0] = vec![(0, c)];
        }
        s
    }

    pub fn one(n: usize, trunc: usize) -> Self {
        Self::scalar(n, trunc, Rational::one())
    }

    pub fn generator(n: usize, trunc: usize, a: usize, b: usize) -> Self {
        let mut p = AssocPoly::zero();
        p.add_term(vec![pair_index(a, b) as u8], Rational::one());
        Self::from_poly(n, trunc, &p)
    }

    /// Class of a polynomial in the generators (letter = [`pair_index`]).
    pub fn from_poly(n: usize, trunc: usize, p: &AssocPoly) -> Self {
        let g = generator_count(n);
        let mut by_weight: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); trunc + 1];
        for (word, c) in p.iter() {
            if word.len() > trunc {
                continue;
            }
            let idx = word.iter().fold(0, |acc, &l| acc * g + l as usize);
            *by_weight[word.len()].entry(idx).or_insert_with(Rational::zero) += c;
        }
        let mut s = Self::zero(n, trunc);
        for (w, m) in by_weight.into_iter().enumerate() {
            s.comps[w] = weight_basis(n, w).reduce(merge(m));
        }
        s
    }

    /// The embedding of `t̂_n`.
    pub fn from_lie(x: &LieSeries) -> Self {
        Self::from_poly(x.n, x.trunc, &x.element().expand())
    }

    pub fn from_tn(x: &TnElement, trunc: usize) -> Self {
        Self::from_poly(x.n(), trunc, &x.expand())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Vec::is_empty)
    }

    pub fn augmentation(&self) -> Rational {
        self.comps[0]
            .first()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Normal-form component of weight `w`, keyed by word index.
    pub fn component(&self, w: usize) -> &SparseVec {
        &self.comps[w]
    }

    /// Coordinates of the weight-`w` component over the quotient basis.
    pub fn coords(&self, w: usize) -> Vec<Rational> {
        let m: HashMap<usize, &Rational> = self.comps[w].iter().map(|(i, c)| (*i, c)).collect();
        weight_basis(self.n, w)
            .words()
            .iter()
            .map(|i| m.get(i).map(|c| (*c).clone()).unwrap_or_else(Rational::zero))
            .collect()
    }

    pub fn homogeneous(&self, w: usize) -> Self {
        let mut s = Self::zero(self.n, self.trunc);
        s.comps[w] = self.comps[w].clone();
        s
    }

    fn check(&self, other: &Self) -> Result<(), SeriesError> {
        if self.n != other.n || self.trunc != other.trunc {
            return Err(SeriesError::Mismatch(self.n, other.n, self.trunc, other.trunc));
        }
        Ok(())
    }

    pub fn add_scaled(&self, other: &Self, c: &Rational) -> Result<Self, SeriesError> {
        self.check(other)?;
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(x, y)| crate::linalg::axpy(x, c, y))
            .collect();
        Ok(Self { comps, ..self.clone() })
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add_scaled(other, &Rational::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add_scaled(other, &-Rational::one())
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        Self {
            comps: self
                .comps
                .iter()
                .map(|v| {
                    if c.is_zero() {
                        Vec::new()
                    } else {
                        v.iter().map(|(i, x)| (*i, x * c)).collect()
                    }
                })
                .collect(),
            ..self.clone()
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let g = generator_count(self.n);
        let mut out = Self::zero(self.n, self.trunc);
        for w in 0..=self.trunc {
            let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
            for p in 0..=w {
                let q = w - p;
                let shift = g.pow(q as u32);
                for (i, a) in &self.comps[p] {
                    for (j, b) in &other.comps[q] {
                        *acc.entry(i * shift + j).or_insert_with(Rational::zero) += a * b;
                    }
                }
            }
            out.comps[w] = weight_basis(self.n, w).reduce(merge(acc));
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self, SeriesError> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// `exp(x)` for `x` with zero augmentation.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        self.require_augmentation(Rational::zero())?;
        let mut out = Self::one(self.n, self.trunc);
        let mut power = Self::one(self.n, self.trunc);
        for k in 1..=self.trunc {
            power = power.mul(self)?.scaled(&Rational::new(1.into(), (k as i64).into()));
            out = out.add(&power)?;
        }
        Ok(out)
    }

    /// `log(x)` for `x` with augmentation one.
    pub fn log(&self) -> Result<Self, SeriesError> {
        self.require_augmentation(Rational::one())?;
        let y = self.sub(&Self::one(self.n, self.trunc))?;
        let mut out = Self::zero(self.n, self.trunc);
        let mut power = Self::one(self.n, self.trunc);
        for k in 1..=self.trunc {
            power = power.mul(&y)?;
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out = out.add_scaled(&power, &Rational::new(sign.into(), (k as i64).into()))?;
        }
        Ok(out)
    }

    /// Inverse of an element with augmentation one.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        self.require_augmentation(Rational::one())?;
        let y = Self::one(self.n, self.trunc).sub(self)?;
        let mut out = Self::one(self.n, self.trunc);
        let mut power = Self::one(self.n, self.trunc);
        for _ in 1..=self.trunc {
            power = power.mul(&y)?;
            out = out.add(&power)?;
        }
        Ok(out)
    }

    fn require_augmentation(&self, expected: Rational) -> Result<(), SeriesError> {
        let found = self.augmentation();
        if found != expected {
            return Err(SeriesError::Augmentation {
                expected: format_rational(&expected),
                found: format_rational(&found),
            });
        }
        Ok(())
    }

    /// Image under the algebra morphism sending generator `t_ab` to `image(a, b)`,
    /// an element of `U(t̂_m)` with the same truncation.
    pub fn map_generators(&self, m: usize, image: &dyn Fn(usize, usize) -> EnvSeries) -> Self {
        let g = generator_count(self.n);
        let imgs: Vec<EnvSeries> = (0..g)
            .map(|i| {
                let (a, b) = pair_of_index(i);
                let e = image(a, b);
                assert!(e.n == m && e.trunc == self.trunc, "generator image has wrong shape");
                e
            })
            .collect();
        let mut out = Self::zero(m, self.trunc);
        for w in 0..=self.trunc {
            let basis = weight_basis(self.n, w);
            for (idx, c) in &self.comps[w] {
                let mut term = Self::scalar(m, self.trunc, c.clone());
                for l in basis.letters(*idx) {
                    term = term.mul(&imgs[l]).expect("same shape");
                }
                out = out.add(&term).expect("same shape");
            }
        }
        out
    }

    /// `Φ^{s(1) s(2) ...}`: relabels `t_ab` as `t_{s(a) s(b)}`.
    pub fn permuted(&self, s: &[usize]) -> Self {
        assert_eq!(s.len(), self.n);
        let (n, trunc) = (self.n, self.trunc);
        self.map_generators(n, &|a, b| EnvSeries::generator(n, trunc, s[a], s[b]))
    }

    /// Index doubling into `U(t̂_m)`: strand `i` becomes the block `blocks[i]`
    /// and `t_ab` goes to the sum of `t_cd` over `c` in block `a`, `d` in block `b`.
    pub fn cabled(&self, m: usize, blocks: &[Vec<usize>]) -> Self {
        assert_eq!(blocks.len(), self.n);
        let trunc = self.trunc;
        self.map_generators(m, &|a, b| {
            let mut p = AssocPoly::zero();
            for &c in &blocks[a] {
                for &d in &blocks[b] {
                    p.add_term(vec![pair_index(c, d) as u8], Rational::one());
                }
            }
            EnvSeries::from_poly(m, trunc, &p)
        })
    }

    /// Largest absolute coefficient per weight.
    pub fn max_abs_by_weight(&self) -> Vec<f64> {
        self.comps
            .iter()
            .map(|v| v.iter().map(|(_, c)| rational_to_f64(&c.abs())).fold(0.0, f64::max))
            .collect()
    }

    pub fn word_name(&self, w: usize, idx: usize) -> String {
        let basis = weight_basis(self.n, w);
        basis
            .letters(idx)
            .into_iter()
            .map(|l| {
                let (a, b) = pair_of_index(l);
                generator_name(a, b)
            })
            .collect::<Vec<_>>()
            .join("·")
    }
}

impl fmt::Display for EnvSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for w in 0..=self.trunc {
            for (idx, c) in &self.comps[w] {
                if !first {
                    f.write_str(" + ")?;
                }
                first = false;
                if w == 0 {
                    write!(f, "{}", format_rational(c))?;
                } else {
                    write!(f, "({}) {}", format_rational(c), self.word_name(w, *idx))?;
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Span of the embedded `t_n^{(w)}` inside `U(t_n)^{(w)}`.
fn lie_span(n: usize, w: usize) -> Arc<Echelon> {
    type SpanCache = Mutex<HashMap<(usize, usize), Arc<Echelon>>>;
    static CACHE: OnceLock<SpanCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(e) = cache.lock().unwrap().get(&(n, w)) {
        return e.clone();
    }
    let mut ech = Echelon::new(false);
    for (k, l) in tn_basis(n, w) {
        let x = TnElement::from_layer(n, k, LieWord::basis(l));
        ech.insert(EnvSeries::from_tn(&x, w).comps[w].clone(), None);
    }
    let e = Arc::new(ech);
    cache.lock().unwrap().insert((n, w), e.clone());
    e
}

/// Per-weight outcome of a group-likeness test.
#[derive(Clone, Debug, PartialEq)]
pub struct GrouplikeReport {
    /// `in_lie[w]`: the weight-`w` part of `log Φ` lies in `t_n^{(w)}` (index 0 unused).
    pub in_lie: Vec<bool>,
    /// Size of the component of `log Φ` outside the Lie span, per weight.
    pub residual: Vec<f64>,
}

impl GrouplikeReport {
    pub fn passed(&self) -> bool {
        self.in_lie.iter().all(|&b| b)
    }
}

/// Checks that `log Φ` is a Lie series, weight by weight.
pub fn grouplike_check(phi: &EnvSeries) -> Result<GrouplikeReport, SeriesError> {
    let l = phi.log()?;
    let mut in_lie = vec![true];
    let mut residual = vec![0.0];
    for w in 1..=phi.trunc {
        let span = lie_span(phi.n, w);
        let (res, _) = span.reduce(l.comps[w].clone());
        in_lie.push(res.is_empty());
        residual.push(res.iter().map(|(_, c)| rational_to_f64(&c.abs())).fold(0.0, f64::max));
    }
    Ok(GrouplikeReport { in_lie, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};
    use proptest::prelude::*;

    fn t(n: usize, trunc: usize, a: usize, b: usize) -> EnvSeries {
        EnvSeries::generator(n, trunc, a - 1, b - 1)
    }

    #[test]
    fn quotient_dimensions() {
        assert_eq!(env_dimension(3, 0), 1);
        assert_eq!(env_dimension(3, 1), 3);
        assert_eq!(env_dimension(3, 2), 7);
        assert_eq!(env_dimension(2, 3), 1);
    }

    /// Poincaré-Birkhoff-Witt: the Hilbert series of `U(t_n)` is the product
    /// over weights of `(1 - x^w)^{-dim t_n^{(w)}}`.
    #[test]
    fn pbw_dimensions() {
        for (n, top) in [(3, 5), (4, 4)] {
            let mut series = vec![Rational::zero(); top + 1];
            series[0] = Rational::one();
            for w in 1..=top {
                for _ in 0..super::super::tn::tn_dimension(n, w) {
                    for k in w..=top {
                        let prev = series[k - w].clone();
                        series[k] += prev;
                    }
                }
            }
            for (w, d) in series.iter().enumerate() {
                assert_eq!(rat(env_dimension(n, w) as i64), *d, "n={n} w={w}");
            }
        }
    }

    #[test]
    fn disjoint_generators_commute() {
        let (a, b) = (t(4, 2, 1, 2), t(4, 2, 3, 4));
        assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        assert!(!a.mul(&b).unwrap().is_zero());
    }

    #[test]
    fn embedding_respects_brackets() {
        for n in 3..=4 {
            let trunc = 3;
            let basis: Vec<TnElement> = (1..=2)
                .flat_map(|w| (0..super::super::tn::tn_dimension(n, w)).map(move |i| TnElement::basis_element(n, w, i)))
                .collect();
            for x in &basis {
                for y in &basis {
                    let lhs = EnvSeries::from_tn(&x.bracket_trunc(y, trunc), trunc);
                    let rhs = EnvSeries::from_tn(x, trunc)
                        .commutator(&EnvSeries::from_tn(y, trunc))
                        .unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn embedding_is_injective() {
        for (n, top) in [(3, 4), (4, 3)] {
            for w in 1..=top {
                assert_eq!(lie_span(n, w).rank(), super::super::tn::tn_dimension(n, w));
            }
        }
    }

    #[test]
    fn nested_commutator_with_t12_is_nonzero() {
        let x = TnElement::generator(3, 0, 1)
            .bracket(&TnElement::generator(3, 0, 2).bracket(&TnElement::generator(3, 1, 2)));
        assert!(!x.is_zero());
        assert!(!EnvSeries::from_tn(&x, 3).is_zero());
    }

    #[test]
    fn grouplike_examples() {
        let trunc = 3;
        let e = t(3, trunc, 1, 2).exp().unwrap();
        assert!(grouplike_check(&e).unwrap().passed());
        let c = t(3, trunc, 1, 3).commutator(&t(3, trunc, 2, 3)).unwrap();
        assert!(grouplike_check(&c.scaled(&ratio(1, 4)).exp().unwrap())
            .unwrap()
            .passed());
        let bad = EnvSeries::one(3, trunc)
            .add(&t(3, trunc, 1, 2).mul(&t(3, trunc, 1, 3)).unwrap())
            .unwrap();
        let r = grouplike_check(&bad).unwrap();
        assert!(r.in_lie[1]);
        assert!(!r.in_lie[2]);
        assert!(grouplike_check(&t(3, trunc, 1, 2)).is_err());
    }

    #[test]
    fn exp_log_round_trip() {
        let trunc = 4;
        let x = t(3, trunc, 1, 2)
            .add(
                &t(3, trunc, 1, 3)
                    .commutator(&t(3, trunc, 2, 3))
                    .unwrap()
                    .scaled(&ratio(-1, 24)),
            )
            .unwrap();
        let e = x.exp().unwrap();
        assert_eq!(e.log().unwrap(), x);
        assert_eq!(e.log().unwrap().exp().unwrap(), e);
        assert_eq!(e.mul(&e.inverse().unwrap()).unwrap(), EnvSeries::one(3, trunc));
    }

    #[test]
    fn cabling_and_permutation() {
        let trunc = 2;
        // t_12 under 1 -> {1,2}, 2 -> {3}
        let x = t(2, trunc, 1, 2).cabled(3, &[vec![0, 1], vec![2]]);
        assert_eq!(x, t(3, trunc, 1, 3).add(&t(3, trunc, 2, 3)).unwrap());
        let y = t(3, trunc, 1, 2).permuted(&[2, 0, 1]);
        assert_eq!(y, t(3, trunc, 1, 3));
    }

    fn arb_env() -> impl Strategy<Value = EnvSeries> {
        proptest::collection::vec((0usize..3, 1usize..=3, -3i64..=3), 0..5).prop_map(|terms| {
            let mut p = AssocPoly::zero();
            for (k, len, c) in terms {
                let word: Vec<u8> = (0..len).map(|i| ((k + i * 2) % 3) as u8).collect();
                p.add_term(word, rat(c));
            }
            EnvSeries::from_poly(3, 3, &p)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn multiplication_is_associative(a in arb_env(), b in arb_env(), c in arb_env()) {
            let l = a.mul(&b).unwrap().mul(&c).unwrap();
            let r = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(l, r);
        }
    }
}
