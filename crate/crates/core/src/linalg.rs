//! Exact sparse linear algebra over the rationals.
//!
//! Every differential, relation quotient and membership problem in the crate
//! goes through [`SparseRationalMatrix`]. Ranks of large blocks use
//! fraction-free integer elimination (machine integers first, arbitrary
//! precision on overflow); kernels, images and linear solves use an
//! incremental rational echelon form that records how each basis vector was
//! built from the input columns.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational scalar used throughout the crate.
pub type Rational = BigRational;

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec = Vec<(usize, Rational)>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("entry ({row}, {col}) outside a {n_rows}x{n_cols} matrix")]
    OutOfBounds {
        row: usize,
        col: usize,
        n_rows: usize,
        n_cols: usize,
    },
    #[error("composition of consecutive differentials is nonzero ({nonzero} entries)")]
    NonzeroComposition { nonzero: usize },
    #[error("malformed matrix text: {0}")]
    Parse(String),
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p/q` or `p`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

/// Formats as `p/q`, or `p` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}

/// `y += a * x` on sorted sparse vectors.
pub fn axpy(y: &SparseVec, a: &Rational, x: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() || j < x.len() {
        let take_y = j >= x.len() || (i < y.len() && y[i].0 < x[j].0);
        let take_x = i >= y.len() || (j < x.len() && x[j].0 < y[i].0);
        if take_y {
            out.push(y[i].clone());
            i += 1;
        } else if take_x {
            out.push((x[j].0, a * &x[j].1));
            j += 1;
        } else {
            let v = &y[i].1 + a * &x[j].1;
            if !v.is_zero() {
                out.push((y[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn dense_to_sparse(v: &[Rational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn sparse_to_dense(v: &SparseVec, len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// Exact sparse matrix stored by rows.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseRationalMatrix {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<SparseVec>,
}

impl SparseRationalMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            rows: vec![Vec::new(); n_rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for (i, row) in m.rows.iter_mut().enumerate() {
            row.push((i, Rational::one()));
        }
        m
    }

    /// Builds a matrix from `(row, col, value)` triples; repeated positions are summed
    /// and zeros dropped.
    pub fn from_triplets<I>(n_rows: usize, n_cols: usize, triplets: I) -> Result<Self, LinAlgError>
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut acc: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); n_rows];
        for (r, c, v) in triplets {
            if r >= n_rows || c >= n_cols {
                return Err(LinAlgError::OutOfBounds {
                    row: r,
                    col: c,
                    n_rows,
                    n_cols,
                });
            }
            *acc[r].entry(c).or_insert_with(Rational::zero) += v;
        }
        let rows = acc
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        Ok(Self { n_rows, n_cols, rows })
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Self {
        let n_cols = rows.first().map_or(0, |r| r.len());
        Self {
            n_rows: rows.len(),
            n_cols,
            rows: rows.iter().map(|r| dense_to_sparse(r)).collect(),
        }
    }

    /// Matrix whose columns are the given sparse vectors.
    pub fn from_columns(n_rows: usize, cols: &[SparseVec]) -> Self {
        let mut rows = vec![Vec::new(); n_rows];
        for (c, col) in cols.iter().enumerate() {
            for (r, v) in col {
                rows[*r].push((c, v.clone()));
            }
        }
        Self {
            n_rows,
            n_cols: cols.len(),
            rows,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn row(&self, r: usize) -> &SparseVec {
        &self.rows[r]
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.rows[r]
            .binary_search_by_key(&c, |(i, _)| *i)
            .map(|k| self.rows[r][k].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut rows = vec![Vec::new(); self.n_cols];
        for (r, c, v) in self.triplets() {
            rows[c].push((r, v.clone()));
        }
        Self {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            rows,
        }
    }

    pub fn columns(&self) -> Vec<SparseVec> {
        self.transpose().rows
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, LinAlgError> {
        if v.len() != self.n_cols {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.n_cols,
                got: v.len(),
            });
        }
        Ok(self
            .rows
            .iter()
            .map(|row| row.iter().map(|(c, x)| x * &v[*c]).sum())
            .collect())
    }

    pub fn mul_sparse(&self, v: &SparseVec) -> SparseVec {
        let mut out = Vec::new();
        for (r, row) in self.rows.iter().enumerate() {
            let (mut i, mut j) = (0, 0);
            let mut acc = Rational::zero();
            while i < row.len() && j < v.len() {
                match row[i].0.cmp(&v[j].0) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        acc += &row[i].1 * &v[j].1;
                        i += 1;
                        j += 1;
                    }
                }
            }
            if !acc.is_zero() {
                out.push((r, acc));
            }
        }
        out
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &Self) -> Result<Self, LinAlgError> {
        if self.n_cols != rhs.n_rows {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.n_cols,
                got: rhs.n_rows,
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
                for (k, a) in row {
                    for (c, b) in &rhs.rows[*k] {
                        *acc.entry(*c).or_insert_with(Rational::zero) += a * b;
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        Ok(Self {
            n_rows: self.n_rows,
            n_cols: rhs.n_cols,
            rows,
        })
    }

    pub fn rank(&self) -> usize {
        integer_rank(&self.rows)
    }

    pub fn rank_kernel_image(&self) -> KernelImage {
        let mut ech = Echelon::new(true);
        let mut kernel = Vec::new();
        let mut image = Vec::new();
        for (j, col) in self.columns().into_iter().enumerate() {
            match ech.insert(col.clone(), Some(vec![(j, Rational::one())])) {
                Insertion::Independent => image.push(sparse_to_dense(&col, self.n_rows)),
                Insertion::Dependent(combo) => kernel.push(sparse_to_dense(&combo, self.n_cols)),
            }
        }
        KernelImage {
            rank: image.len(),
            kernel,
            image,
        }
    }

    /// Finds `x` with `self * x = v`, or `None` when `v` is outside the column span.
    pub fn solve(&self, v: &[Rational]) -> Result<Option<Vec<Rational>>, LinAlgError> {
        if v.len() != self.n_rows {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.n_rows,
                got: v.len(),
            });
        }
        Ok(ColumnSolver::new(self)
            .solve_sparse(&dense_to_sparse(v))
            .map(|x| sparse_to_dense(&x, self.n_cols)))
    }

    /// Debug dump: header `rows cols nnz`, then one `r c num/den` line per entry.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.n_rows, self.n_cols, self.nnz());
        for (r, c, v) in self.triplets() {
            let _ = writeln!(s, "{} {} {}", r, c, format_rational(v));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, LinAlgError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| LinAlgError::Parse("missing header".into()))?;
        let h: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| LinAlgError::Parse(header.into())))
            .collect::<Result<_, _>>()?;
        if h.len() != 3 {
            return Err(LinAlgError::Parse(header.into()));
        }
        let mut trip = Vec::with_capacity(h[2]);
        for line in lines {
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() != 3 {
                return Err(LinAlgError::Parse(line.into()));
            }
            let r = t[0].parse().map_err(|_| LinAlgError::Parse(line.into()))?;
            let c = t[1].parse().map_err(|_| LinAlgError::Parse(line.into()))?;
            let v = parse_rational(t[2]).ok_or_else(|| LinAlgError::Parse(line.into()))?;
            trip.push((r, c, v));
        }
        if trip.len() != h[2] {
            return Err(LinAlgError::Parse(format!(
                "header announces {} entries, found {}",
                h[2],
                trip.len()
            )));
        }
        Self::from_triplets(h[0], h[1], trip)
    }
}

#[derive(Clone, Debug)]
pub struct KernelImage {
    pub rank: usize,
    /// Basis of `{x : Mx = 0}` as dense vectors of length `n_cols`.
    pub kernel: Vec<Vec<Rational>>,
    /// A maximal independent set of columns of `M`, as dense vectors of length `n_rows`.
    pub image: Vec<Vec<Rational>>,
}

/// `dim ker(d_out) - rank(d_in)` for `d_in: C^{k-1} -> C^k` and `d_out: C^k -> C^{k+1}`.
pub fn cohomology_dim(d_in: &SparseRationalMatrix, d_out: &SparseRationalMatrix) -> Result<usize, LinAlgError> {
    if d_in.n_rows() != d_out.n_cols() {
        return Err(LinAlgError::DimensionMismatch {
            expected: d_out.n_cols(),
            got: d_in.n_rows(),
        });
    }
    let comp = d_out.mul(d_in)?;
    if !comp.is_zero() {
        return Err(LinAlgError::NonzeroComposition { nonzero: comp.nnz() });
    }
    Ok(d_out.n_cols() - d_out.rank() - d_in.rank())
}

pub enum Insertion {
    Independent,
    /// The inserted vector reduced to zero; payload is the recorded combination
    /// `tag - sum(alpha_i * tag_i)` (empty when tags are not tracked).
    Dependent(SparseVec),
}

/// Incremental echelon basis over the rationals. Each stored vector has its
/// leading entry normalized to one and no two stored vectors share a leading index.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    track: bool,
    lead: BTreeMap<usize, usize>,
    vecs: Vec<SparseVec>,
    tags: Vec<SparseVec>,
}

impl Echelon {
    pub fn new(track: bool) -> Self {
        Self {
            track,
            ..Default::default()
        }
    }

    pub fn rank(&self) -> usize {
        self.vecs.len()
    }

    /// Reduces `v` against the basis. Returns the residual and, if tracked,
    /// `-sum(alpha_i * tag_i)` where `v = residual + sum(alpha_i * basis_i)`.
    pub fn reduce(&self, mut v: SparseVec) -> (SparseVec, SparseVec) {
        let mut combo: SparseVec = Vec::new();
        let mut pos = 0;
        while pos < v.len() {
            let (idx, coef) = (v[pos].0, v[pos].1.clone());
            match self.lead.get(&idx) {
                Some(&k) => {
                    let neg = -coef;
                    v = axpy(&v, &neg, &self.vecs[k]);
                    if self.track {
                        combo = axpy(&combo, &neg, &self.tags[k]);
                    }
                }
                None => pos += 1,
            }
        }
        (v, combo)
    }

    pub fn insert(&mut self, v: SparseVec, tag: Option<SparseVec>) -> Insertion {
        let (res, combo) = self.reduce(v);
        let tag = match (self.track, tag) {
            (true, Some(t)) => axpy(&combo, &Rational::one(), &t),
            _ => Vec::new(),
        };
        if res.is_empty() {
            return Insertion::Dependent(tag);
        }
        let inv = res[0].1.recip();
        let lead = res[0].0;
        let res: SparseVec = res.into_iter().map(|(i, x)| (i, x * &inv)).collect();
        let tag: SparseVec = tag.into_iter().map(|(i, x)| (i, x * &inv)).collect();
        self.lead.insert(lead, self.vecs.len());
        self.vecs.push(res);
        self.tags.push(tag);
        Insertion::Independent
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce(v).0.is_empty()
    }
}

/// Reusable solver for `M x = v` against a fixed matrix.
pub struct ColumnSolver {
    ech: Echelon,
}

impl ColumnSolver {
    pub fn new(m: &SparseRationalMatrix) -> Self {
        let mut ech = Echelon::new(true);
        for (j, col) in m.columns().into_iter().enumerate() {
            ech.insert(col, Some(vec![(j, Rational::one())]));
        }
        Self { ech }
    }

    pub fn rank(&self) -> usize {
        self.ech.rank()
    }

    pub fn solve_sparse(&self, v: &SparseVec) -> Option<SparseVec> {
        let (res, combo) = self.ech.reduce(v.clone());
        if !res.is_empty() {
            return None;
        }
        Some(combo.into_iter().map(|(i, x)| (i, -x)).collect())
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.ech.contains(v.clone())
    }
}

/// Scalar usable by the fraction-free elimination; `None` signals overflow.
trait ElimScalar: Clone + PartialEq {
    fn nil() -> Self;
    fn is_nil(&self) -> bool;
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
    fn gcd(&self, other: &Self) -> Self;
    fn div_exact(&self, d: &Self) -> Self;
    fn is_unit(&self) -> bool;
}

impl ElimScalar for i128 {
    fn nil() -> Self {
        0
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        a.checked_mul(*x)?.checked_sub(b.checked_mul(*y)?)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn is_unit(&self) -> bool {
        self.abs() == 1
    }
}

impl ElimScalar for BigInt {
    fn nil() -> Self {
        Zero::zero()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        Some(a * x - b * y)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
}

fn make_primitive<T: ElimScalar>(row: &mut [(usize, T)]) {
    let mut g = T::nil();
    for (_, x) in row.iter() {
        g = g.gcd(x);
        if g.is_unit() {
            return;
        }
    }
    if !g.is_nil() && !g.is_unit() {
        for (_, x) in row.iter_mut() {
            *x = x.div_exact(&g);
        }
    }
}

/// `a*x - b*y` on sorted integer rows.
fn combine<T: ElimScalar>(a: &T, x: &[(usize, T)], b: &T, y: &[(usize, T)]) -> Option<Vec<(usize, T)>> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let zero = T::nil();
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let (idx, v) = if j >= y.len() || (i < x.len() && x[i].0 < y[j].0) {
            let r = (x[i].0, T::mul_sub(a, &x[i].1, &zero, &zero)?);
            i += 1;
            r
        } else if i >= x.len() || y[j].0 < x[i].0 {
            let r = (y[j].0, T::mul_sub(&zero, &zero, b, &y[j].1)?);
            j += 1;
            r
        } else {
            let r = (x[i].0, T::mul_sub(a, &x[i].1, b, &y[j].1)?);
            i += 1;
            j += 1;
            r
        };
        if !v.is_nil() {
            out.push((idx, v));
        }
    }
    Some(out)
}

fn rank_fraction_free<T: ElimScalar>(mut rows: Vec<Vec<(usize, T)>>) -> Option<usize> {
    rows.retain(|r| !r.is_empty());
    rows.sort_by_key(|r| r.len());
    let mut pivots: BTreeMap<usize, Vec<(usize, T)>> = BTreeMap::new();
    for mut row in rows {
        make_primitive(&mut row);
        loop {
            let Some((lead, lead_val)) = row.first().cloned() else {
                break;
            };
            match pivots.get(&lead) {
                None => {
                    pivots.insert(lead, row);
                    break;
                }
                Some(p) => {
                    let pv = &p[0].1;
                    let g = pv.gcd(&lead_val);
                    let a = pv.div_exact(&g);
                    let b = lead_val.div_exact(&g);
                    let mut next = combine(&a, &row, &b, p)?;
                    make_primitive(&mut next);
                    row = next;
                }
            }
        }
    }
    Some(pivots.len())
}

fn integer_rows(rows: &[SparseVec]) -> Vec<Vec<(usize, BigInt)>> {
    rows.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, (_, x)| acc.lcm(x.denom()));
            row.iter().map(|(c, x)| (*c, x.numer() * (&l / x.denom()))).collect()
        })
        .collect()
}

fn integer_rank(rows: &[SparseVec]) -> usize {
    let big = integer_rows(rows);
    let small: Option<Vec<Vec<(usize, i128)>>> = big
        .iter()
        .map(|r| r.iter().map(|(c, x)| x.to_i128().map(|v| (*c, v))).collect())
        .collect();
    if let Some(small) = small {
        if let Some(r) = rank_fraction_free(small) {
            return r;
        }
    }
    rank_fraction_free(big).expect("arbitrary precision elimination cannot overflow")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> SparseRationalMatrix {
        SparseRationalMatrix::from_dense(
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn identity_has_full_rank_and_trivial_kernel() {
        let ki = SparseRationalMatrix::identity(3).rank_kernel_image();
        assert_eq!(ki.rank, 3);
        assert!(ki.kernel.is_empty());
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let ki = SparseRationalMatrix::zeros(2, 5).rank_kernel_image();
        assert_eq!(ki.rank, 0);
        assert_eq!(ki.kernel.len(), 5);
    }

    #[test]
    fn rank_one_kernel_is_spanned_by_two_minus_one() {
        let a = m(&[&[1, 2], &[2, 4]]);
        let ki = a.rank_kernel_image();
        assert_eq!(ki.rank, 1);
        assert_eq!(ki.kernel.len(), 1);
        let k = &ki.kernel[0];
        // proportional to (2, -1)
        assert_eq!(&k[0] * rat(-1), &k[1] * rat(2));
        assert!(a.mul_vec(k).unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn membership_cases() {
        let a = m(&[&[1, 2], &[2, 4]]);
        let x = a.solve(&[rat(0), rat(0)]).unwrap().unwrap();
        assert!(x.iter().all(Zero::is_zero));
        let x = a.solve(&[rat(1), rat(2)]).unwrap().unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), vec![rat(1), rat(2)]);
        assert_eq!(a.solve(&[rat(1), rat(0)]).unwrap(), None);
        assert!(matches!(a.solve(&[rat(1)]), Err(LinAlgError::DimensionMismatch { .. })));
    }

    #[test]
    fn cohomology_dims_small_cases() {
        let z = SparseRationalMatrix::zeros(5, 5);
        assert_eq!(cohomology_dim(&z, &z).unwrap(), 5);
        // 0 -> Q --id--> Q -> 0 : exact at the middle
        let id = SparseRationalMatrix::identity(1);
        let zero_out = SparseRationalMatrix::zeros(0, 1);
        assert_eq!(cohomology_dim(&id, &zero_out).unwrap(), 0);
        let bad = cohomology_dim(&id, &id);
        assert!(matches!(bad, Err(LinAlgError::NonzeroComposition { .. })));
    }

    #[test]
    fn text_dump_round_trips() {
        let a =
            SparseRationalMatrix::from_triplets(2, 3, vec![(0, 1, ratio(-3, 4)), (1, 2, rat(5)), (1, 0, ratio(1, 7))])
                .unwrap();
        let t = a.to_text();
        assert!(t.starts_with("2 3 3\n"));
        assert_eq!(SparseRationalMatrix::from_text(&t).unwrap(), a);
    }

    proptest::proptest! {
        #[test]
        fn rank_is_transpose_invariant_and_matches_echelon(
            entries in proptest::collection::vec(-3i64..=3, 0..=42),
            n_cols in 1usize..=7,
        ) {
            let n_rows = entries.len() / n_cols;
            let trip = (0..n_rows * n_cols)
                .map(|k| (k / n_cols, k % n_cols, rat(entries[k])));
            let a = SparseRationalMatrix::from_triplets(n_rows, n_cols, trip).unwrap();
            let r = a.rank();
            proptest::prop_assert_eq!(r, a.transpose().rank());
            let ki = a.rank_kernel_image();
            proptest::prop_assert_eq!(r, ki.rank);
            proptest::prop_assert_eq!(ki.kernel.len() + r, n_cols);
            for k in &ki.kernel {
                proptest::prop_assert!(a.mul_vec(k).unwrap().iter().all(Zero::is_zero));
            }
        }
    }

    #[test]
    fn overflowing_entries_fall_back_to_big_integers() {
        let big = 1i64 << 62;
        let a = m(&[&[big, big - 1, 3], &[big - 3, big, 5], &[1, 1, 1]]);
        let q = a.rank_kernel_image().rank;
        assert_eq!(a.rank(), q);
    }
}
