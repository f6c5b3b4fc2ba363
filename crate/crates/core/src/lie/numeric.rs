//! Floating-point elements of the truncated enveloping algebra, for values
//! produced by numerical integration. Coefficients live on the same normal-form
//! words as [`EnvSeries`]; products are reduced with the exact normal-form map.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::env::{generator_count, weight_basis, EnvSeries};
use super::tn::{tn_basis, SeriesError, TnElement};
use crate::linalg::{rational_to_f64, Rational};

type Normal = Arc<Vec<(usize, f64)>>;

/// Normal form of a single word, cached.
fn normal_form(n: usize, w: usize, idx: usize) -> Normal {
    static CACHE: OnceLock<Mutex<BTreeMap<(usize, usize, usize), Normal>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&(n, w, idx)) {
        return v.clone();
    }
    let reduced = weight_basis(n, w).reduce(vec![(idx, num_traits::One::one())]);
    let v: Normal = Arc::new(reduced.iter().map(|(i, c)| (*i, rational_to_f64(c))).collect());
    cache.lock().unwrap().insert((n, w, idx), v.clone());
    v
}

/// Images of the `t_n^{(w)}` basis elements, as numeric weight-`w` components.
fn lie_images(n: usize, w: usize) -> Arc<Vec<BTreeMap<usize, f64>>> {
    type Cache = Mutex<BTreeMap<(usize, usize), Arc<Vec<BTreeMap<usize, f64>>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&(n, w)) {
        return v.clone();
    }
    let imgs: Vec<BTreeMap<usize, f64>> = tn_basis(n, w)
        .into_iter()
        .map(|(k, l)| {
            let x = TnElement::from_layer(n, k, super::free::LieWord::basis(l));
            EnvSeries::from_tn(&x, w)
                .component(w)
                .iter()
                .map(|(i, c)| (*i, rational_to_f64(c)))
                .collect()
        })
        .collect();
    let v = Arc::new(imgs);
    cache.lock().unwrap().insert((n, w), v.clone());
    v
}

#[derive(Clone, Debug, PartialEq)]
pub struct NumSeries {
    n: usize,
    trunc: usize,
    comps: Vec<BTreeMap<usize, f64>>,
}

impl NumSeries {
    pub fn zero(n: usize, trunc: usize) -> Self {
        Self {
            n,
            trunc,
            comps: vec![BTreeMap::new(); trunc + 1],
        }
    }

    pub fn one(n: usize, trunc: usize) -> Self {
        let mut s = Self::zero(n, trunc);
        s.comps[0].insert(0, 1.0);
        s
    }

    pub fn from_exact(x: &EnvSeries) -> Self {
        let mut s = Self::zero(x.n(), x.trunc());
        for w in 0..=x.trunc() {
            s.comps[w] = x.component(w).iter().map(|(i, c)| (*i, rational_to_f64(c))).collect();
        }
        s
    }

    /// The image of the Lie element with coordinates `coords[w]` over the
    /// `t_n^{(w)}` basis (index 0 ignored).
    pub fn from_lie_coords(n: usize, trunc: usize, coords: &[Vec<f64>]) -> Self {
        let mut s = Self::zero(n, trunc);
        for (w, cs) in coords.iter().enumerate().skip(1).take(trunc) {
            let imgs = lie_images(n, w);
            for (img, c) in imgs.iter().zip(cs) {
                for (i, x) in img {
                    *s.comps[w].entry(*i).or_insert(0.0) += c * x;
                }
            }
        }
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn augmentation(&self) -> f64 {
        self.comps[0].get(&0).copied().unwrap_or(0.0)
    }

    /// Coordinates of the weight-`w` component over the quotient basis.
    pub fn coords(&self, w: usize) -> Vec<f64> {
        weight_basis(self.n, w)
            .words()
            .iter()
            .map(|i| self.comps[w].get(i).copied().unwrap_or(0.0))
            .collect()
    }

    fn check(&self, other: &Self) -> Result<(), SeriesError> {
        if self.n != other.n || self.trunc != other.trunc {
            return Err(SeriesError::Mismatch(self.n, other.n, self.trunc, other.trunc));
        }
        Ok(())
    }

    pub fn add_scaled(&self, other: &Self, c: f64) -> Result<Self, SeriesError> {
        self.check(other)?;
        let mut out = self.clone();
        for (dst, src) in out.comps.iter_mut().zip(&other.comps) {
            for (i, x) in src {
                *dst.entry(*i).or_insert(0.0) += c * x;
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add_scaled(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add_scaled(other, -1.0)
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        for comp in &mut out.comps {
            comp.values_mut().for_each(|x| *x *= c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let g = generator_count(self.n);
        let mut out = Self::zero(self.n, self.trunc);
        for w in 0..=self.trunc {
            let mut raw: BTreeMap<usize, f64> = BTreeMap::new();
            for p in 0..=w {
                let shift = g.pow((w - p) as u32);
                for (i, a) in &self.comps[p] {
                    for (j, b) in &other.comps[w - p] {
                        *raw.entry(i * shift + j).or_insert(0.0) += a * b;
                    }
                }
            }
            let comp = &mut out.comps[w];
            for (idx, c) in raw {
                if c == 0.0 {
                    continue;
                }
                for (i, x) in normal_form(self.n, w, idx).iter() {
                    *comp.entry(*i).or_insert(0.0) += c * x;
                }
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self, SeriesError> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn exp(&self) -> Result<Self, SeriesError> {
        let mut out = Self::one(self.n, self.trunc);
        let mut power = Self::one(self.n, self.trunc);
        for k in 1..=self.trunc {
            power = power.mul(self)?.scaled(1.0 / k as f64);
            out = out.add(&power)?;
        }
        Ok(out)
    }

    /// `log(x)`; the augmentation must be one.
    pub fn log(&self) -> Result<Self, SeriesError> {
        let a = self.augmentation();
        if (a - 1.0).abs() > 1e-12 {
            return Err(SeriesError::Augmentation {
                expected: "1".into(),
                found: a.to_string(),
            });
        }
        let y = self.sub(&Self::one(self.n, self.trunc))?;
        let mut out = Self::zero(self.n, self.trunc);
        let mut power = Self::one(self.n, self.trunc);
        for k in 1..=self.trunc {
            power = power.mul(&y)?;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            out = out.add_scaled(&power, sign / k as f64)?;
        }
        Ok(out)
    }

    /// Largest absolute coefficient per weight.
    pub fn max_abs_by_weight(&self) -> Vec<f64> {
        self.comps
            .iter()
            .map(|c| c.values().fold(0.0_f64, |m, x| m.max(x.abs())))
            .collect()
    }

    /// Least-squares coordinates of the weight-`w` component over the
    /// `t_n^{(w)}` basis, with the Euclidean norm of what is left over.
    pub fn lie_coords(&self, w: usize) -> (Vec<f64>, f64) {
        let words = weight_basis(self.n, w).words().to_vec();
        let pos: BTreeMap<usize, usize> = words.iter().enumerate().map(|(k, i)| (*i, k)).collect();
        let dense = |m: &BTreeMap<usize, f64>| {
            let mut v = vec![0.0; words.len()];
            for (i, x) in m {
                v[pos[i]] += x;
            }
            v
        };
        let cols: Vec<Vec<f64>> = lie_images(self.n, w).iter().map(dense).collect();
        let target = dense(&self.comps[w]);
        let (coords, residual) = least_squares(&cols, &target);
        (coords, residual)
    }

    /// Approximate equality, per weight, with absolute tolerance.
    pub fn distance(&self, other: &Self) -> Result<Vec<f64>, SeriesError> {
        Ok(self.sub(other)?.max_abs_by_weight())
    }
}

/// Least squares over linearly independent columns by modified Gram–Schmidt.
fn least_squares(cols: &[Vec<f64>], target: &[f64]) -> (Vec<f64>, f64) {
    let k = cols.len();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut r = vec![vec![0.0; k]; k];
    for (j, c) in cols.iter().enumerate() {
        let mut v = c.clone();
        for (i, qi) in q.iter().enumerate() {
            let p = dot(qi, &v);
            r[i][j] = p;
            v.iter_mut().zip(qi).for_each(|(x, y)| *x -= p * y);
        }
        let norm = dot(&v, &v).sqrt();
        r[j][j] = norm;
        q.push(v.into_iter().map(|x| x / norm).collect());
    }
    let mut rhs: Vec<f64> = q.iter().map(|qi| dot(qi, target)).collect();
    let mut rest = target.to_vec();
    for (qi, p) in q.iter().zip(&rhs) {
        rest.iter_mut().zip(qi).for_each(|(x, y)| *x -= p * y);
    }
    for j in (0..k).rev() {
        for i in j + 1..k {
            rhs[j] -= r[j][i] * rhs[i];
        }
        rhs[j] /= r[j][j];
    }
    (rhs, dot(&rest, &rest).sqrt())
}

/// Nearest rational with denominator at most `max_den`, for reporting.
pub fn rationalize(x: f64, max_den: i64) -> Rational {
    let mut best = Rational::from_integer((x.round() as i64).into());
    let mut err = (x - x.round()).abs();
    for d in 2..=max_den {
        let num = (x * d as f64).round() as i64;
        let e = (x - num as f64 / d as f64).abs();
        if e < err - 1e-15 {
            err = e;
            best = Rational::new(num.into(), d.into());
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ratio;

    #[test]
    fn matches_exact_arithmetic() {
        let a = EnvSeries::generator(3, 3, 0, 1)
            .add(&EnvSeries::generator(3, 3, 1, 2).scaled(&ratio(1, 3)))
            .unwrap();
        let b = EnvSeries::generator(3, 3, 0, 2).scaled(&ratio(-2, 5));
        let exact = NumSeries::from_exact(&a.mul(&b).unwrap().exp().unwrap());
        let num = NumSeries::from_exact(&a)
            .mul(&NumSeries::from_exact(&b))
            .unwrap()
            .exp()
            .unwrap();
        assert!(num.distance(&exact).unwrap().iter().all(|d| *d < 1e-14));
    }

    #[test]
    fn lie_coordinates_round_trip() {
        let coords = vec![vec![], vec![0.5, -1.0, 2.0], vec![0.25]];
        let s = NumSeries::from_lie_coords(3, 2, &coords);
        let (c, res) = s.lie_coords(2);
        assert!((c[0] - 0.25).abs() < 1e-14 && res < 1e-14);
        let one = NumSeries::one(3, 2);
        let (_, res) = s.mul(&s).unwrap().add(&one).unwrap().lie_coords(2);
        assert!(res > 0.1);
        assert!(s
            .exp()
            .unwrap()
            .log()
            .unwrap()
            .distance(&s)
            .unwrap()
            .iter()
            .all(|d| *d < 1e-14));
    }

    #[test]
    fn rationalize_small_fractions() {
        assert_eq!(rationalize(-0.041_67, 30), ratio(-1, 24));
    }
}
