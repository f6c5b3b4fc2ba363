//! Simplicial modules freely generated by products of nerves of finite
//! posets, their chain complexes, and the Alexander–Whitney and shuffle maps.
//!
//! A simplex of a product of nerves at level `k` is one weakly increasing
//! chain of length `k + 1` per factor. Face `d_i` deletes entry `i` of every
//! chain and degeneracy `s_i` repeats it. A bisimplicial module is an
//! external product `X ⊠ Y` of two such simplicial sets, with horizontal
//! operators acting on `X` and vertical ones on `Y`; its diagonal is `X × Y`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use super::shuffle::shuffles_with_signs;
use super::TransportError;
use crate::linalg::{ColumnSolver, Rational, SparseRationalMatrix, SparseVec};

/// Levels beyond this are rejected.
pub const LEVEL_CAP: usize = 4;

/// A finite poset on `0..size`, stored as its order relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Poset {
    le: Vec<Vec<bool>>,
}

impl Poset {
    /// The total order `0 < 1 < .. < size-1`; its nerve is the standard simplex.
    pub fn chain(size: usize) -> Self {
        Self {
            le: (0..size).map(|a| (0..size).map(|b| a <= b).collect()).collect(),
        }
    }

    /// Two minima below two maxima; its nerve is a circle.
    pub fn circle() -> Self {
        let le = (0..4)
            .map(|a| (0..4).map(|b| a == b || (a < 2 && b >= 2)).collect())
            .collect();
        Self { le }
    }

    /// The transitive closure of a random relation compatible with `0..size`.
    pub fn random(size: usize, density: f64, rng: &mut impl Rng) -> Self {
        let mut le: Vec<Vec<bool>> = (0..size).map(|a| (0..size).map(|b| a == b).collect()).collect();
        for a in 0..size {
            for b in a + 1..size {
                le[a][b] = rng.gen_bool(density);
            }
        }
        for k in 0..size {
            for a in 0..size {
                for b in 0..size {
                    if le[a][k] && le[k][b] {
                        le[a][b] = true;
                    }
                }
            }
        }
        Self { le }
    }

    pub fn size(&self) -> usize {
        self.le.len()
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.le[a][b]
    }

    /// Weakly increasing chains of length `len`.
    fn chains(&self, len: usize) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        let mut acc = Vec::with_capacity(len);
        self.extend(len, &mut acc, &mut out);
        out
    }

    fn extend(&self, len: usize, acc: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if acc.len() == len {
            out.push(acc.clone());
            return;
        }
        for x in 0..self.size() {
            if acc.last().is_none_or(|&p| self.le(p as usize, x)) {
                acc.push(x as u8);
                self.extend(len, acc, out);
                acc.pop();
            }
        }
    }
}

/// A simplex of a product of nerves: one chain per factor, all of equal length.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Simplex(Vec<Vec<u8>>);

impl Simplex {
    pub fn new(chains: Vec<Vec<u8>>) -> Self {
        debug_assert!(chains.windows(2).all(|w| w[0].len() == w[1].len()));
        Self(chains)
    }

    pub fn chains(&self) -> &[Vec<u8>] {
        &self.0
    }

    pub fn level(&self) -> usize {
        self.0.first().map_or(0, |c| c.len() - 1)
    }

    pub fn face(&self, i: usize) -> Self {
        Self(
            self.0
                .iter()
                .map(|c| c.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| *x).collect())
                .collect(),
        )
    }

    pub fn degeneracy(&self, i: usize) -> Self {
        Self(
            self.0
                .iter()
                .map(|c| {
                    let mut c = c.clone();
                    c.insert(i, c[i]);
                    c
                })
                .collect(),
        )
    }

    /// The first `p + 1` vertices.
    pub fn front(&self, p: usize) -> Self {
        Self(self.0.iter().map(|c| c[..=p].to_vec()).collect())
    }

    /// The last `q + 1` vertices.
    pub fn back(&self, q: usize) -> Self {
        Self(self.0.iter().map(|c| c[c.len() - 1 - q..].to_vec()).collect())
    }

    pub fn is_degenerate(&self) -> bool {
        (0..self.level()).any(|i| self.0.iter().all(|c| c[i] == c[i + 1]))
    }

    /// The simplex of the product with factors of `self` followed by those of `other`.
    pub fn product(&self, other: &Self) -> Self {
        Self(self.0.iter().chain(&other.0).cloned().collect())
    }
}

/// Finite formal linear combination with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinComb<T: Ord>(BTreeMap<T, Rational>);

impl<T: Ord> Default for LinComb<T> {
    fn default() -> Self {
        Self(BTreeMap::new())
    }
}

impl<T: Ord + Clone> LinComb<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(t: T) -> Self {
        let mut s = Self::zero();
        s.add(t, Rational::one());
        s
    }

    pub fn add(&mut self, t: T, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.0.entry(t) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        for (t, x) in &other.0 {
            self.add(t.clone(), x * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, &Rational)> {
        self.0.iter()
    }

    pub fn coeff(&self, t: &T) -> Rational {
        self.0.get(t).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.add_scaled(other, &-Rational::one());
        s
    }

    /// Linear extension of `f`.
    pub fn map<U: Ord + Clone>(&self, f: impl Fn(&T) -> LinComb<U>) -> LinComb<U> {
        let mut out = LinComb::zero();
        for (t, c) in &self.0 {
            out.add_scaled(&f(t), c);
        }
        out
    }

    pub fn filter(&self, keep: impl Fn(&T) -> bool) -> Self {
        Self(
            self.0
                .iter()
                .filter(|(t, _)| keep(t))
                .map(|(t, c)| (t.clone(), c.clone()))
                .collect(),
        )
    }
}

/// Chains on a simplicial set.
pub type SimplicialChain = LinComb<Simplex>;
/// Chains on a bisimplicial set `X ⊠ Y`, equivalently on `X ⊗ Y`; a diagonal
/// chain has both entries at the same level.
pub type BiChain = LinComb<(Simplex, Simplex)>;

fn sign(k: usize) -> Rational {
    if k.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

fn check_level(level: usize) -> Result<(), TransportError> {
    if level > LEVEL_CAP {
        return Err(TransportError::LevelOverflow { level, cap: LEVEL_CAP });
    }
    Ok(())
}

/// `Σ (-1)^i d_i`.
pub fn boundary(c: &SimplicialChain) -> SimplicialChain {
    c.map(|s| {
        let mut out = LinComb::zero();
        if s.level() > 0 {
            for i in 0..=s.level() {
                out.add(s.face(i), sign(i));
            }
        }
        out
    })
}

/// Boundary of the diagonal: `Σ (-1)^i (d_i x, d_i y)`.
pub fn diagonal_boundary(c: &BiChain) -> BiChain {
    c.map(|(x, y)| {
        let mut out = LinComb::zero();
        if x.level() > 0 {
            for i in 0..=x.level() {
                out.add((x.face(i), y.face(i)), sign(i));
            }
        }
        out
    })
}

/// Total differential `∂_h + (-1)^p ∂_v` at bidegree `(p, q)`.
pub fn total_boundary(c: &BiChain) -> BiChain {
    c.map(|(x, y)| {
        let mut out = LinComb::zero();
        for (bx, c) in boundary(&LinComb::basis(x.clone())).iter() {
            out.add((bx.clone(), y.clone()), c.clone());
        }
        for (by, c) in boundary(&LinComb::basis(y.clone())).iter() {
            out.add((x.clone(), by.clone()), c * sign(x.level()));
        }
        out
    })
}

/// Projection onto normalized chains: degenerate simplices are dropped.
pub fn normalize(c: &SimplicialChain) -> SimplicialChain {
    c.filter(|s| !s.is_degenerate())
}

/// Projection onto normalized diagonal chains.
pub fn normalize_diagonal(c: &BiChain) -> BiChain {
    c.filter(|(x, y)| !x.product(y).is_degenerate())
}

/// Projection onto normalized bigraded chains: degenerate in either direction.
pub fn normalize_bigraded(c: &BiChain) -> BiChain {
    c.filter(|(x, y)| !x.is_degenerate() && !y.is_degenerate())
}

/// `AW(x, y) = Σ_{p+q=n} d̄^q x ⊗ d_0^p y`: the horizontal part keeps the
/// first `p + 1` vertices and the vertical part the last `q + 1`.
pub fn aw_map(a: &BiChain) -> Result<BiChain, TransportError> {
    let mut out = LinComb::zero();
    for ((x, y), c) in a.iter() {
        let n = x.level();
        if y.level() != n {
            return Err(TransportError::NotDiagonal {
                horizontal: n,
                vertical: y.level(),
            });
        }
        check_level(n)?;
        for p in 0..=n {
            out.add((x.front(p), y.back(n - p)), c.clone());
        }
    }
    Ok(out)
}

/// `sh(x ⊗ y) = Σ sgn(μ, ν) (s_ν x, s_μ y)`, summed over `(p, q)`-shuffles
/// `(μ, ν)` of `{0, .., p+q-1}`, degeneracies applied in increasing order.
pub fn shuffle_map(a: &BiChain) -> Result<BiChain, TransportError> {
    let mut out = LinComb::zero();
    for ((x, y), c) in a.iter() {
        let (p, q) = (x.level(), y.level());
        check_level(p + q)?;
        for (s, sg) in shuffles_with_signs(p, q).entries {
            let xs = s.second.iter().fold(x.clone(), |acc, &i| acc.degeneracy(i));
            let ys = s.first.iter().fold(y.clone(), |acc, &i| acc.degeneracy(i));
            out.add((xs, ys), c * Rational::from_integer(sg.into()));
        }
    }
    Ok(out)
}

/// A product of poset nerves as a simplicial set.
#[derive(Clone, Debug, Serialize)]
pub struct SimplicialSet {
    pub factors: Vec<Poset>,
}

impl SimplicialSet {
    pub fn new(factors: Vec<Poset>) -> Self {
        Self { factors }
    }

    pub fn random(factors: usize, max_size: usize, rng: &mut impl Rng) -> Self {
        Self::new(
            (0..factors)
                .map(|_| {
                    let size = rng.gen_range(2..=max_size);
                    Poset::random(size, 0.6, rng)
                })
                .collect(),
        )
    }

    pub fn product(&self, other: &Self) -> Self {
        Self::new(self.factors.iter().chain(&other.factors).cloned().collect())
    }

    pub fn simplices(&self, level: usize) -> Vec<Simplex> {
        let mut out = vec![Vec::new()];
        for f in &self.factors {
            let chains = f.chains(level + 1);
            out = out
                .into_iter()
                .flat_map(|acc: Vec<Vec<u8>>| {
                    chains.iter().map(move |c| {
                        let mut acc = acc.clone();
                        acc.push(c.clone());
                        acc
                    })
                })
                .collect();
        }
        out.into_iter().map(Simplex::new).collect()
    }

    pub fn random_simplex(&self, level: usize, rng: &mut impl Rng) -> Simplex {
        let s = self.simplices(level);
        s[rng.gen_range(0..s.len())].clone()
    }

    /// A random chain at `level` with small integer coefficients.
    pub fn random_chain(&self, level: usize, terms: usize, rng: &mut impl Rng) -> SimplicialChain {
        let s = self.simplices(level);
        let mut c = LinComb::zero();
        for _ in 0..terms {
            c.add(
                s[rng.gen_range(0..s.len())].clone(),
                Rational::from_integer(rng.gen_range(-3..=3).into()),
            );
        }
        c
    }
}

/// The free module on a simplicial set up to a level cap, with face and
/// degeneracy operators as explicit matrices over the simplex bases.
#[derive(Clone, Debug)]
pub struct SimplicialModule {
    pub set: SimplicialSet,
    pub cap: usize,
    bases: Vec<Vec<Simplex>>,
    /// `faces[k][i]`: `d_i` from level `k` to `k - 1`.
    faces: Vec<Vec<SparseRationalMatrix>>,
    /// `degeneracies[k][i]`: `s_i` from level `k` to `k + 1`.
    degeneracies: Vec<Vec<SparseRationalMatrix>>,
}

impl SimplicialModule {
    pub fn new(set: SimplicialSet, cap: usize) -> Result<Self, TransportError> {
        check_level(cap)?;
        let bases: Vec<Vec<Simplex>> = (0..=cap).map(|k| set.simplices(k)).collect();
        let index: Vec<HashMap<&Simplex, usize>> = bases
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, s)| (s, i)).collect())
            .collect();
        let matrix = |from: usize, to: usize, op: &dyn Fn(&Simplex) -> Simplex| {
            let trip = bases[from]
                .iter()
                .enumerate()
                .map(|(j, s)| (index[to][&op(s)], j, Rational::one()));
            SparseRationalMatrix::from_triplets(bases[to].len(), bases[from].len(), trip).expect("indices in range")
        };
        let faces = (0..=cap)
            .map(|k| {
                if k == 0 {
                    Vec::new()
                } else {
                    (0..=k).map(|i| matrix(k, k - 1, &|s| s.face(i))).collect()
                }
            })
            .collect();
        let degeneracies = (0..cap)
            .map(|k| (0..=k).map(|i| matrix(k, k + 1, &|s| s.degeneracy(i))).collect())
            .collect();
        Ok(Self {
            set,
            cap,
            bases,
            faces,
            degeneracies,
        })
    }

    pub fn dim(&self, level: usize) -> usize {
        self.bases[level].len()
    }

    pub fn basis(&self, level: usize) -> &[Simplex] {
        &self.bases[level]
    }

    pub fn face(&self, level: usize, i: usize) -> &SparseRationalMatrix {
        &self.faces[level][i]
    }

    pub fn degeneracy(&self, level: usize, i: usize) -> &SparseRationalMatrix {
        &self.degeneracies[level][i]
    }

    /// Checks all simplicial identities between the stored matrices.
    pub fn check_identities(&self) -> Result<(), TransportError> {
        let fail = |what: String| Err(TransportError::Identity(what));
        let eq = |a: &SparseRationalMatrix, b: &SparseRationalMatrix| a == b;
        let comp = |a: &SparseRationalMatrix, b: &SparseRationalMatrix| a.mul(b).expect("composable");
        for k in 2..=self.cap {
            for j in 0..=k {
                for i in 0..j {
                    // d_i d_j = d_{j-1} d_i
                    if !eq(
                        &comp(self.face(k - 1, i), self.face(k, j)),
                        &comp(self.face(k - 1, j - 1), self.face(k, i)),
                    ) {
                        return fail(format!("d_{i} d_{j} at level {k}"));
                    }
                }
            }
        }
        for k in 0..self.cap {
            for j in 0..=k {
                let s = self.degeneracy(k, j);
                for i in 0..=k + 1 {
                    let lhs = comp(self.face(k + 1, i), s);
                    let ok = if i < j {
                        eq(&lhs, &comp(self.degeneracy(k - 1, j - 1), self.face(k, i)))
                    } else if i == j || i == j + 1 {
                        eq(&lhs, &SparseRationalMatrix::identity(self.dim(k)))
                    } else {
                        eq(&lhs, &comp(self.degeneracy(k - 1, j), self.face(k, i - 1)))
                    };
                    if !ok {
                        return fail(format!("d_{i} s_{j} at level {k}"));
                    }
                }
                if k + 1 < self.cap {
                    for i in 0..=j {
                        // s_i s_j = s_{j+1} s_i
                        if !eq(
                            &comp(self.degeneracy(k + 1, i), s),
                            &comp(self.degeneracy(k + 1, j + 1), self.degeneracy(k, i)),
                        ) {
                            return fail(format!("s_{i} s_{j} at level {k}"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Normalized simplices of a product `X × Y` at one level, as diagonal pairs.
fn normalized_diagonal_basis(x: &SimplicialSet, y: &SimplicialSet, level: usize) -> Vec<(Simplex, Simplex)> {
    let xs = x.simplices(level);
    let ys = y.simplices(level);
    xs.iter()
        .flat_map(|a| ys.iter().map(move |b| (a.clone(), b.clone())))
        .filter(|(a, b)| !a.product(b).is_degenerate())
        .collect()
}

fn to_sparse(c: &BiChain, index: &HashMap<(Simplex, Simplex), usize>) -> SparseVec {
    let mut v: SparseVec = c
        .iter()
        .filter_map(|(k, x)| index.get(k).map(|&i| (i, x.clone())))
        .collect();
    v.sort_by_key(|e| e.0);
    v
}

/// Homology comparison of `sh ∘ AW` with the identity on normalized diagonal
/// chains of `X ⊠ Y` at one level.
#[derive(Clone, Debug, Serialize)]
pub struct HomologyCheck {
    pub level: usize,
    pub cycles: usize,
    pub homology_rank: usize,
    /// Cycles `z` with `sh(AW(z)) - z` not a boundary.
    pub failures: usize,
    /// Cycles with `sh(AW(z)) != z` on the nose.
    pub chain_level_differences: usize,
}

pub fn homology_check(x: &SimplicialSet, y: &SimplicialSet, level: usize) -> Result<HomologyCheck, TransportError> {
    check_level(level + 1)?;
    let basis = normalized_diagonal_basis(x, y, level);
    let above = normalized_diagonal_basis(x, y, level + 1);
    let index: HashMap<(Simplex, Simplex), usize> = basis.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let below: HashMap<(Simplex, Simplex), usize> = if level == 0 {
        HashMap::new()
    } else {
        normalized_diagonal_basis(x, y, level - 1)
            .into_iter()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect()
    };
    let d_out = SparseRationalMatrix::from_columns(
        below.len(),
        &basis
            .iter()
            .map(|s| {
                to_sparse(
                    &normalize_diagonal(&diagonal_boundary(&LinComb::basis(s.clone()))),
                    &below,
                )
            })
            .collect::<Vec<_>>(),
    );
    let d_in = SparseRationalMatrix::from_columns(
        basis.len(),
        &above
            .iter()
            .map(|s| {
                to_sparse(
                    &normalize_diagonal(&diagonal_boundary(&LinComb::basis(s.clone()))),
                    &index,
                )
            })
            .collect::<Vec<_>>(),
    );
    let boundaries = ColumnSolver::new(&d_in);
    let ki = d_out.rank_kernel_image();
    let mut out = HomologyCheck {
        level,
        cycles: ki.kernel.len(),
        homology_rank: ki.kernel.len() - boundaries.rank(),
        failures: 0,
        chain_level_differences: 0,
    };
    for z in &ki.kernel {
        let mut chain = LinComb::zero();
        for (i, c) in z.iter().enumerate() {
            chain.add(basis[i].clone(), c.clone());
        }
        let image = normalize_diagonal(&shuffle_map(&aw_map(&chain)?)?);
        let diff = image.sub(&chain);
        if !diff.is_zero() {
            out.chain_level_differences += 1;
        }
        if !boundaries.contains(&to_sparse(&diff, &index)) {
            out.failures += 1;
        }
    }
    Ok(out)
}

/// Both sides of the monoidal compatibility of AW for diagonal chains
/// `a` of `A = X ⊠ Y` and `b` of `B = X' ⊠ Y'`. Chains of `A ×_bi B` are
/// pairs whose horizontal simplex lies in `X × X'` and vertical one in `Y × Y'`.
#[derive(Clone, Debug)]
pub struct MonoidalCheck {
    /// `AW(sh(a ⊗ b))`, normalized.
    pub left: BiChain,
    /// `bi-sh(AW(a) ⊗ AW(b))`, normalized.
    pub right: BiChain,
}

impl MonoidalCheck {
    pub fn passed(&self) -> bool {
        self.left == self.right
    }
}

pub fn monoidal_aw_check(a: &BiChain, b: &BiChain) -> Result<MonoidalCheck, TransportError> {
    // sh on the diagonals, landing in diag(A ×_bi B).
    let mut sh = LinComb::zero();
    for ((x, y), c) in a.iter() {
        for ((x2, y2), c2) in b.iter() {
            let (m, n) = (x.level(), x2.level());
            check_level(m + n)?;
            for (s, sg) in shuffles_with_signs(m, n).entries {
                let lift = |u: &Simplex, idx: &[usize]| idx.iter().fold(u.clone(), |acc, &i| acc.degeneracy(i));
                let h = lift(x, &s.second).product(&lift(x2, &s.first));
                let v = lift(y, &s.second).product(&lift(y2, &s.first));
                sh.add((h, v), c * c2 * Rational::from_integer(sg.into()));
            }
        }
    }
    let left = normalize_bigraded(&aw_map(&sh)?);
    let (aa, ab) = (aw_map(a)?, aw_map(b)?);
    let mut right = LinComb::zero();
    for ((xa, ya), ca) in aa.iter() {
        for ((xb, yb), cb) in ab.iter() {
            let (pa, qa, pb, qb) = (xa.level(), ya.level(), xb.level(), yb.level());
            let koszul = sign(qa * pb);
            for (hs, hsg) in shuffles_with_signs(pa, pb).entries {
                let h = hs
                    .second
                    .iter()
                    .fold(xa.clone(), |acc, &i| acc.degeneracy(i))
                    .product(&hs.first.iter().fold(xb.clone(), |acc, &i| acc.degeneracy(i)));
                for (vs, vsg) in shuffles_with_signs(qa, qb).entries {
                    let v = vs
                        .second
                        .iter()
                        .fold(ya.clone(), |acc, &i| acc.degeneracy(i))
                        .product(&vs.first.iter().fold(yb.clone(), |acc, &i| acc.degeneracy(i)));
                    let c = ca * cb * &koszul * Rational::from_integer((hsg * vsg).into());
                    right.add((h.clone(), v), c);
                }
            }
        }
    }
    Ok(MonoidalCheck {
        left,
        right: normalize_bigraded(&right),
    })
}

/// A random diagonal chain of `X ⊠ Y` at `level`.
pub fn random_diagonal_chain(
    x: &SimplicialSet,
    y: &SimplicialSet,
    level: usize,
    terms: usize,
    rng: &mut impl Rng,
) -> BiChain {
    let mut c = LinComb::zero();
    for _ in 0..terms {
        c.add(
            (x.random_simplex(level, rng), y.random_simplex(level, rng)),
            Rational::from_integer(rng.gen_range(-3..=3).into()),
        );
    }
    c
}
