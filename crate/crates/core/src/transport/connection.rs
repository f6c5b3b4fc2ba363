//! Flat connections on simplices with polynomial coefficients and nilpotent
//! values, their holonomies, and the maps `K`, `T` and `Ψ` into bar
//! constructions.
//!
//! The simplex `▲^n` sits in `R^n` with vertices `y_0 = 0` and `y_k = e_k`;
//! its coordinates are the barycentric coordinates of `y_1, .., y_n`. A
//! connection may depend on extra parameter coordinates appended after
//! these. Holonomies solve `dP = P A` and bar elements are tensors of words,
//! so `(U^{⊗k})` is spanned by tensors of words of length at most `trunc`.

use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use super::forms::{AffineMap, Form, FormKey};
use super::TransportError;
use crate::linalg::Rational;

fn sign(k: usize) -> Rational {
    if k.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Vertex `k` of `▲^n` in coordinates.
fn vertex(n: usize, k: usize) -> Vec<Rational> {
    (1..=n)
        .map(|j| if j == k { Rational::one() } else { Rational::zero() })
        .collect()
}

/// The affine map `▲^m → ▲^n` sending vertex `k` to vertex `image[k]`.
fn simplicial_map(n: usize, image: &[usize]) -> AffineMap {
    AffineMap::from_vertices(&image.iter().map(|&k| vertex(n, k)).collect::<Vec<_>>())
}

/// A flat connection one-form on `▲^n × R^params`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyConnection {
    simplex_dim: usize,
    params: usize,
    form: Form,
}

impl PolyConnection {
    /// Checks that `form` is an algebra-valued one-form without constant
    /// part satisfying `dA + A ∧ A = 0`.
    pub fn new(simplex_dim: usize, params: usize, form: Form) -> Result<Self, TransportError> {
        if form.dim() != simplex_dim + params {
            return Err(TransportError::Dimension {
                expected: simplex_dim + params,
                found: form.dim(),
            });
        }
        if form.iter().any(|(k, _)| k.degree() != 1 || k.tensor.len() != 1) {
            return Err(TransportError::NotOneForm);
        }
        form.require_augmentation_free()?;
        let c = Self {
            simplex_dim,
            params,
            form,
        };
        let curvature = c.curvature();
        if !curvature.is_zero() {
            return Err(TransportError::NotFlat { terms: curvature.len() });
        }
        Ok(c)
    }

    /// `A = G^{-1} dG` for `G = exp(g)`; flat by construction.
    pub fn gauge(simplex_dim: usize, params: usize, g: &Form) -> Result<Self, TransportError> {
        let big = g.exp()?;
        let inverse = g.scaled(&-Rational::one()).exp()?;
        Self::new(simplex_dim, params, inverse.wedge(&big.d()))
    }

    /// Gauge transform of zero by a random polynomial function with values
    /// spanned by words of length one and two in `letters` letters, with a
    /// linear term in every coordinate.
    pub fn random_gauge(
        simplex_dim: usize,
        params: usize,
        letters: u8,
        trunc: usize,
        rng: &mut impl Rng,
    ) -> Result<Self, TransportError> {
        let dim = simplex_dim + params;
        let mut g = Form::zero(dim, trunc);
        for i in 0..dim {
            let mut exps = vec![0; dim];
            exps[i] = 1;
            let c = Rational::from_integer(rng.gen_range(1i64..=3).into());
            g.add_term(
                FormKey {
                    mask: 0,
                    exps,
                    tensor: vec![vec![rng.gen_range(0..letters)]],
                },
                c,
            );
        }
        for _ in 0..4 {
            let exps: Vec<u32> = (0..dim)
                .map(|_| if rng.gen_bool(0.5) { 0 } else { rng.gen_range(1..=2) })
                .collect();
            let len = rng.gen_range(1..=2.min(trunc));
            let word = (0..len).map(|_| rng.gen_range(0..letters)).collect();
            let c = Rational::from_integer(rng.gen_range(-3i64..=3).into());
            g.add_term(
                FormKey {
                    mask: 0,
                    exps,
                    tensor: vec![word],
                },
                c,
            );
        }
        Self::gauge(simplex_dim, params, &g)
    }

    pub fn simplex_dim(&self) -> usize {
        self.simplex_dim
    }

    pub fn params(&self) -> usize {
        self.params
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn trunc(&self) -> usize {
        self.form.trunc()
    }

    /// `dA + A ∧ A`, which is `dA + [A, A]/2`.
    pub fn curvature(&self) -> Form {
        self.form.d().add(&self.form.wedge(&self.form))
    }

    fn pulled_back(&self, simplex_dim: usize, map: &AffineMap) -> Result<Self, TransportError> {
        Self::new(simplex_dim, self.params, self.form.pullback(&map.extended(self.params)))
    }

    /// Restriction to the face opposite vertex `i`.
    pub fn face(&self, i: usize) -> Result<Self, TransportError> {
        let n = self.simplex_dim;
        if n == 0 || i > n {
            return Err(TransportError::Index { index: i, level: n });
        }
        let image: Vec<usize> = (0..n).map(|k| if k < i { k } else { k + 1 }).collect();
        self.pulled_back(n - 1, &simplicial_map(n, &image))
    }

    /// Pullback along the codegeneracy `▲^{n+1} → ▲^n` collapsing edge `(i, i+1)`.
    pub fn degeneracy(&self, i: usize) -> Result<Self, TransportError> {
        let n = self.simplex_dim;
        if i > n {
            return Err(TransportError::Index { index: i, level: n });
        }
        let image: Vec<usize> = (0..n + 2).map(|k| if k <= i { k } else { k - 1 }).collect();
        self.pulled_back(n + 1, &simplicial_map(n, &image))
    }

    /// `Σ (-1)^i` faces, as signed connections.
    pub fn boundary(&self) -> Result<Vec<(Rational, Self)>, TransportError> {
        if self.simplex_dim == 0 {
            return Ok(Vec::new());
        }
        (0..=self.simplex_dim).map(|i| Ok((sign(i), self.face(i)?))).collect()
    }

    /// Holonomy along the straight edge from vertex `a` to vertex `b`, as a
    /// function of the parameters.
    pub fn edge_holonomy(&self, a: usize, b: usize) -> Form {
        let path = simplicial_map(self.simplex_dim, &[a, b]).extended(self.params);
        line_holonomy(&self.form.pullback(&path))
    }

    /// Restriction to `{y_i} × R^params`.
    pub fn at_vertex(&self, i: usize) -> Form {
        self.form
            .pullback(&simplicial_map(self.simplex_dim, &[i]).extended(self.params))
    }
}

/// Solves `P' = P a` with `P(0) = 1` on `[0, 1]` for a one-form `a ds` on
/// `R × R^r` and returns `P(1)` as a function on `R^r`. Picard iteration is
/// exact after `trunc + 1` steps since `a` raises word length.
fn line_holonomy(pulled: &Form) -> Form {
    let dim = pulled.dim();
    let trunc = pulled.trunc();
    let a = pulled.map_keys(dim, |k| {
        (k.mask == 1).then(|| (FormKey { mask: 0, ..k.clone() }, Rational::one()))
    });
    let one = Form::one(dim, trunc);
    let mut p = one.clone();
    for _ in 0..=trunc {
        let next = one.add(&p.wedge(&a).antiderivative(0));
        if next == p {
            break;
        }
        p = next;
    }
    let mut linear = vec![vec![Rational::zero(); dim - 1]];
    let mut offset = vec![Rational::one()];
    for j in 0..dim - 1 {
        linear.push(
            (0..dim - 1)
                .map(|c| if c == j { Rational::one() } else { Rational::zero() })
                .collect(),
        );
        offset.push(Rational::zero());
    }
    p.pullback(&AffineMap::new(dim - 1, linear, offset))
}

/// Face `d_i` of the simplicial bar construction on each tensor of length
/// `k`: the augmentation on the first or last factor, otherwise the product
/// of factors `i` and `i + 1` (1-based).
pub fn bar_face(f: &Form, i: usize) -> Form {
    f.map_keys(f.dim(), |key| {
        let t = &key.tensor;
        let k = t.len();
        if k == 0 || i > k {
            return None;
        }
        let tensor = if i == 0 || i == k {
            let end = if i == 0 { 0 } else { k - 1 };
            if !t[end].is_empty() {
                return None;
            }
            let mut t = t.clone();
            t.remove(end);
            t
        } else {
            let mut t = t.clone();
            let right = t.remove(i);
            t[i - 1].extend(right);
            t
        };
        Some((FormKey { tensor, ..key.clone() }, Rational::one()))
    })
}

/// Degeneracy `s_i`: inserts the unit as factor `i` (0-based).
pub fn bar_degeneracy(f: &Form, i: usize) -> Form {
    f.map_keys(f.dim(), |key| {
        let mut tensor = key.tensor.clone();
        if i > tensor.len() {
            return None;
        }
        tensor.insert(i, Vec::new());
        Some((FormKey { tensor, ..key.clone() }, Rational::one()))
    })
}

/// `b = Σ_{i=0}^{k} (-1)^i d_i` on tensors of length `k`.
pub fn bar_differential(f: &Form) -> Form {
    let mut out = Form::zero(f.dim(), f.trunc());
    let max = f.iter().map(|(k, _)| k.tensor.len()).max().unwrap_or(0);
    for k in 1..=max {
        let level = f.filter(|key| key.tensor.len() == k);
        for i in 0..=k {
            out = out.add(&bar_face(&level, i).scaled(&sign(i)));
        }
    }
    out
}

/// Projection onto normalized chains: tensors with a unit factor are dropped.
pub fn normalize_bar(f: &Form) -> Form {
    f.filter(|k| k.tensor.iter().all(|w| !w.is_empty()))
}

/// Internal differential with the level sign, `(-1)^k d` on tensors of length `k`.
pub fn level_signed_d(f: &Form) -> Form {
    f.d().map_keys(f.dim(), |k| Some((k.clone(), sign(k.tensor.len()))))
}

/// `K(A) = ∫_▲ A ⊗ .. ⊗ A` with `n` factors on `▲^n`.
pub fn k_map(a: &PolyConnection) -> Result<Form, TransportError> {
    if a.params != 0 {
        return Err(TransportError::Parameters(a.params));
    }
    let n = a.simplex_dim;
    let mut power = Form::empty_tensor(n, a.trunc());
    for _ in 0..n {
        power = power.tensor(&a.form);
    }
    Ok(power.integrate_simplex(n))
}

/// `T(A) = P(γ_1) ⊗ .. ⊗ P(γ_n)` over the edges `γ_j = (y_{j-1}, y_j)`,
/// as a function of the parameters.
pub fn t_map(a: &PolyConnection) -> Form {
    (1..=a.simplex_dim).fold(Form::empty_tensor(a.params, a.trunc()), |acc, j| {
        acc.tensor(&a.edge_holonomy(j - 1, j))
    })
}

/// `K(∂A)` against `b K(A)`.
#[derive(Clone, Debug, Serialize)]
pub struct KBoundaryCheck {
    pub simplex_dim: usize,
    /// Terms of `K(A)`.
    pub image_terms: usize,
    /// Terms of `K(∂A)`.
    pub boundary_terms: usize,
    /// Terms of `K(∂A) - b K(A)`.
    pub residual_terms: usize,
}

impl KBoundaryCheck {
    pub fn passed(&self) -> bool {
        self.residual_terms == 0
    }
}

pub fn k_boundary_check(a: &PolyConnection) -> Result<KBoundaryCheck, TransportError> {
    let k = k_map(a)?;
    let mut lhs = Form::zero(0, a.trunc());
    for (s, f) in a.boundary()? {
        lhs = lhs.add(&k_map(&f)?.scaled(&s));
    }
    let residual = lhs.sub(&bar_differential(&k));
    Ok(KBoundaryCheck {
        simplex_dim: a.simplex_dim,
        image_terms: k.len(),
        boundary_terms: lhs.len(),
        residual_terms: residual.len(),
    })
}

/// `T` against faces and degeneracies of the bar construction.
#[derive(Clone, Debug, Serialize)]
pub struct TSimplicialCheck {
    pub simplex_dim: usize,
    /// Indices `i` with `T(d_i A) != d_i T(A)`.
    pub face_failures: Vec<usize>,
    /// Indices `i` with `T(s_i A) != s_i T(A)`.
    pub degeneracy_failures: Vec<usize>,
}

impl TSimplicialCheck {
    pub fn passed(&self) -> bool {
        self.face_failures.is_empty() && self.degeneracy_failures.is_empty()
    }
}

pub fn t_simplicial_check(a: &PolyConnection) -> Result<TSimplicialCheck, TransportError> {
    let n = a.simplex_dim;
    let t = t_map(a);
    let mut out = TSimplicialCheck {
        simplex_dim: n,
        face_failures: Vec::new(),
        degeneracy_failures: Vec::new(),
    };
    if n > 0 {
        for i in 0..=n {
            if t_map(&a.face(i)?) != bar_face(&t, i) {
                out.face_failures.push(i);
            }
        }
    }
    for i in 0..=n {
        if t_map(&a.degeneracy(i)?) != bar_degeneracy(&t, i) {
            out.degeneracy_failures.push(i);
        }
    }
    Ok(out)
}

/// `Ψ(A)` for a connection on `▲^n × I`: the sum over insertions of the
/// restrictions `A_i` to `{y_i} × I` between the edge holonomies `P_j`, each
/// with the sign of moving the `A`'s past the later `P`'s. Forms on an
/// interval have degree at most one, so at most one `A_i` survives.
pub fn psi(a: &PolyConnection) -> Result<Form, TransportError> {
    if a.params != 1 {
        return Err(TransportError::Parameters(a.params));
    }
    let n = a.simplex_dim;
    let holonomies: Vec<Form> = (1..=n).map(|j| a.edge_holonomy(j - 1, j)).collect();
    let empty = Form::empty_tensor(1, a.trunc());
    let product = |from: usize, to: usize| holonomies[from..to].iter().fold(empty.clone(), |acc, p| acc.tensor(p));
    let mut out = product(0, n);
    for i in 0..=n {
        let inserted = product(0, i).tensor(&a.at_vertex(i)).tensor(&product(i, n));
        out = out.add(&inserted.scaled(&sign(n - i)));
    }
    Ok(out)
}

/// Both sides of `-dΨ(A) + bΨ(A) = Ψ(∂A)` in normalized chains, and the
/// holonomy equations `dP_j = P_j A_j - A_{j-1} P_j`.
#[derive(Clone, Debug)]
pub struct PsiCheck {
    pub simplex_dim: usize,
    /// Edges `j` where the holonomy equation fails.
    pub holonomy_failures: Vec<usize>,
    pub lhs: Form,
    pub rhs: Form,
}

impl PsiCheck {
    pub fn passed(&self) -> bool {
        self.holonomy_failures.is_empty() && self.lhs == self.rhs
    }
}

pub fn psi_boundary_check(a: &PolyConnection) -> Result<PsiCheck, TransportError> {
    if a.simplex_dim > 2 {
        return Err(TransportError::LevelOverflow {
            level: a.simplex_dim,
            cap: 2,
        });
    }
    let n = a.simplex_dim;
    let mut holonomy_failures = Vec::new();
    for j in 1..=n {
        let p = a.edge_holonomy(j - 1, j);
        let expected = p.wedge(&a.at_vertex(j)).sub(&a.at_vertex(j - 1).wedge(&p));
        if p.d() != expected {
            holonomy_failures.push(j);
        }
    }
    let ps = psi(a)?;
    let lhs = normalize_bar(&bar_differential(&ps).sub(&level_signed_d(&ps)));
    let mut rhs = Form::zero(1, a.trunc());
    for (s, f) in a.boundary()? {
        rhs = rhs.add(&psi(&f)?.scaled(&s));
    }
    Ok(PsiCheck {
        simplex_dim: n,
        holonomy_failures,
        lhs,
        rhs: normalize_bar(&rhs),
    })
}
