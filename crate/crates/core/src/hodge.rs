//! Hermitian metrics, the complex-linear Hodge star, adjoints, Laplacians and
//! harmonic `(p,q)`-forms on invariant forms.
//!
//! Metric data lives in two coordinate systems. The real Gram matrices and the star
//! tables use the real coframe; adjoints and Laplacians use theta coordinates, where
//! the Hermitian Gram matrix is block diagonal by bidegree.

use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};

use crate::bigraded::{Bigrading, DPart};
use crate::error::{Error, Result};
use crate::exterior::{permutation_sign, Form, MultiIndex};
use crate::lie::binom;
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::subspace::Subspace;

/// Which harmonic theory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HarmonicKind {
    D,
    Dbar,
}

impl HarmonicKind {
    pub fn name(self) -> &'static str {
        match self {
            HarmonicKind::D => "d",
            HarmonicKind::Dbar => "dbar",
        }
    }
}

#[derive(Clone, Debug)]
pub struct HarmonicSpace {
    pub kind: HarmonicKind,
    pub p: usize,
    pub q: usize,
    pub space: Subspace,
    pub number: usize,
}

/// Operators available through [`Hermitian::operator_matrix`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operator {
    Part(DPart),
    Adjoint(DPart),
    Laplacian(DPart),
    Lefschetz,
    DualLefschetz,
}

/// Tables of `h^{p,q}_d` and `h^{p,q}_dbar`, indexed `[p][q]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberTable {
    pub h_d: Vec<Vec<usize>>,
    pub h_dbar: Vec<Vec<usize>>,
}

#[derive(Debug)]
pub struct Hermitian {
    b: Bigrading,
    omega: Form,
    almost_kahler: bool,
    unimodular: bool,
    metric_vectors: Matrix,
    vol: Form,
    gram: Vec<Matrix>,
    star: Vec<Matrix>,
    star_theta: Vec<Matrix>,
    herm: Vec<Matrix>,
    herm_inv: Vec<Matrix>,
    lap_d: Vec<OnceLock<Matrix>>,
}

fn factorial(n: usize) -> Scalar {
    Scalar::from_int((1..=n as i64).product())
}

fn leading_minors_positive(m: &Matrix) -> bool {
    (1..=m.rows()).all(|k| {
        let idx: Vec<usize> = (0..k).collect();
        let det = m.select(&idx, &idx).determinant();
        det.is_real() && det.re.is_positive()
    })
}

impl Hermitian {
    /// Installs the metric `g(X, Y) = omega(X, J Y)` given by a fundamental form.
    pub fn install(b: Bigrading, omega: Form) -> Result<Self> {
        let dim = b.dim();
        let n = b.n();
        if omega.dim() != dim {
            return Err(Error::DimensionMismatch { left: dim, right: omega.dim() });
        }
        if omega.is_zero() {
            return Err(Error::MetricNotPositive);
        }
        if omega.degree() != 2 {
            return Err(Error::DegreeMismatch { expected: 2, found: omega.degree() });
        }
        if !omega.is_real() {
            return Err(Error::MetricNotReal);
        }
        if b.project(&omega, 1, 1)? != omega {
            return Err(Error::MetricNotType11);
        }
        let mut big_omega = Matrix::zeros(dim, dim);
        for (m, c) in omega.terms() {
            let ij: Vec<usize> = m.indices().collect();
            big_omega[(ij[0], ij[1])] = c.clone();
            big_omega[(ij[1], ij[0])] = -c;
        }
        let f = b.frame();
        let mut diag = Matrix::zeros(dim, dim);
        for a in 0..dim {
            diag[(a, a)] = if a < n { Scalar::i() } else { -Scalar::i() };
        }
        // Columns of `frame` are the vectors dual to theta.
        let frame = f.to_theta_matrix(1).transpose();
        let j_vec = frame.mul(&diag).mul(&frame.inverse().ok_or(Error::CoframeNotBasis)?);
        let g = big_omega.mul(&j_vec);
        if g != g.transpose() || !(0..dim).all(|i| g.row(i).iter().all(Scalar::is_real)) {
            return Err(Error::Internal("metric from a (1,1)-form is not real symmetric".into()));
        }
        if !leading_minors_positive(&g) {
            return Err(Error::MetricNotPositive);
        }

        let mut vol = Form::constant(dim, Scalar::one());
        for _ in 0..n {
            vol = &vol ^ &omega;
        }
        let vol = vol.scale(&factorial(n).inv().unwrap());
        let c = vol.top_coefficient();

        let g_inv = g.inverse().ok_or(Error::MetricNotPositive)?;
        let gram: Vec<Matrix> = (0..=dim).map(|k| g_inv.compound(k)).collect();
        let gram_inv: Vec<Matrix> = (0..=dim).map(|k| g.compound(k)).collect();

        let star: Vec<Matrix> = (0..=dim)
            .map(|k| {
                let src = MultiIndex::all(dim, k);
                let tgt = MultiIndex::all(dim, dim - k);
                let pos = |m: MultiIndex| tgt.iter().position(|t| *t == m).unwrap();
                let mut s = Matrix::zeros(tgt.len(), src.len());
                for (ji, jm) in src.iter().enumerate() {
                    let comp = jm.complement(dim);
                    let seq: Vec<usize> = jm.indices().chain(comp.indices()).collect();
                    let eps = Scalar::from_int(permutation_sign(&seq));
                    let row = pos(comp);
                    for (ii, _) in src.iter().enumerate() {
                        let gji = &gram[k][(ji, ii)];
                        if !gji.is_zero() {
                            s[(row, ii)] += &(&(&c * &eps) * gji);
                        }
                    }
                }
                s
            })
            .collect();
        let star_theta = (0..=dim)
            .map(|k| f.to_theta_matrix(dim - k).mul(&star[k]).mul(f.to_real_matrix(k)))
            .collect();
        let herm: Vec<Matrix> = (0..=dim)
            .map(|k| {
                let t = f.to_real_matrix(k);
                t.adjoint().mul(&gram[k]).mul(t)
            })
            .collect();
        let herm_inv = (0..=dim)
            .map(|k| {
                let ti = f.to_theta_matrix(k);
                ti.mul(&gram_inv[k]).mul(&ti.adjoint())
            })
            .collect();
        let almost_kahler = b.lie().differential(&omega)?.is_zero();
        let unimodular = b.lie().validate().unimodular;
        let h = Hermitian {
            b,
            omega,
            almost_kahler,
            unimodular,
            metric_vectors: g,
            vol,
            gram,
            star,
            star_theta,
            herm,
            herm_inv,
            lap_d: (0..=dim).map(|_| OnceLock::new()).collect(),
        };
        h.check_bidegree_orthogonality()?;
        Ok(h)
    }

    fn check_bidegree_orthogonality(&self) -> Result<()> {
        let f = self.b.frame();
        for k in 0..=self.dim() {
            let ms = MultiIndex::all(self.dim(), k);
            for (i, a) in ms.iter().enumerate() {
                for (j, c) in ms.iter().enumerate() {
                    if f.bidegree(*a) != f.bidegree(*c) && !self.herm[k][(i, j)].is_zero() {
                        return Err(Error::Internal("bidegree spaces are not orthogonal".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn bigrading(&self) -> &Bigrading {
        &self.b
    }

    pub fn omega(&self) -> &Form {
        &self.omega
    }

    pub fn dim(&self) -> usize {
        self.b.dim()
    }

    pub fn n(&self) -> usize {
        self.b.n()
    }

    pub fn is_almost_kahler(&self) -> bool {
        self.almost_kahler
    }

    /// The metric on tangent vectors in the real frame.
    pub fn metric_on_vectors(&self) -> &Matrix {
        &self.metric_vectors
    }

    pub fn volume_form(&self) -> &Form {
        &self.vol
    }

    /// Bilinear Gram matrix on real-coframe `k`-forms.
    pub fn gram(&self, k: usize) -> &Matrix {
        &self.gram[k]
    }

    /// Hermitian Gram matrix in theta coordinates on the `(p,q)` block.
    pub fn gram_block(&self, p: usize, q: usize) -> Matrix {
        let pos = self.b.frame().positions(p, q);
        self.herm[p + q].select(&pos, &pos)
    }

    fn gram_block_inv(&self, p: usize, q: usize) -> Matrix {
        let pos = self.b.frame().positions(p, q);
        self.herm_inv[p + q].select(&pos, &pos)
    }

    /// `<a, b> = g(a, conj b)` integrated with unit volume.
    pub fn inner(&self, a: &Form, b: &Form) -> Result<Scalar> {
        if a.is_zero() || b.is_zero() {
            return Ok(Scalar::zero());
        }
        if a.degree() != b.degree() {
            return Err(Error::DegreeMismatch { expected: a.degree(), found: b.degree() });
        }
        let k = a.degree();
        let x = self.gram[k].mul_vec(&a.to_vector());
        Ok(b.to_vector().iter().zip(&x).fold(Scalar::zero(), |acc, (y, gx)| &acc + &(&y.conj() * gx)))
    }

    pub fn star(&self, a: &Form) -> Form {
        let k = a.degree();
        let dim = self.dim();
        if a.is_zero() {
            return Form::zero(dim, dim - k.min(dim));
        }
        Form::from_vector(dim, dim - k, &self.star[k].mul_vec(&a.to_vector()))
    }

    /// Star table on real coordinates of degree `k`.
    pub fn star_matrix(&self, k: usize) -> &Matrix {
        &self.star[k]
    }

    /// Star table in theta coordinates of degree `k`.
    pub fn star_theta(&self, k: usize) -> &Matrix {
        &self.star_theta[k]
    }

    pub fn lefschetz(&self, a: &Form) -> Form {
        &self.omega ^ a
    }

    pub fn require_unimodular(&self) -> Result<()> {
        if self.unimodular {
            Ok(())
        } else {
            Err(Error::NonUnimodular)
        }
    }

    /// Hermitian adjoint `A* = H_src^{-1} A^H H_tgt` for a theta-coordinate block.
    fn adjoint_block(&self, a: &Matrix, src: (usize, usize), tgt: (usize, usize)) -> Matrix {
        self.gram_block_inv(src.0, src.1).mul(&a.adjoint()).mul(&self.gram_block(tgt.0, tgt.1))
    }

    fn target(&self, part: DPart, p: usize, q: usize) -> Option<(usize, usize)> {
        let (dp, dq) = part.shift()?;
        let (tp, tq) = (p as i32 + dp, q as i32 + dq);
        let n = self.n() as i32;
        (tp >= 0 && tq >= 0 && tp <= n && tq <= n).then_some((tp as usize, tq as usize))
    }

    fn source(&self, part: DPart, p: usize, q: usize) -> Option<(usize, usize)> {
        let (dp, dq) = part.shift()?;
        let (sp, sq) = (p as i32 - dp, q as i32 - dq);
        let n = self.n() as i32;
        (sp >= 0 && sq >= 0 && sp <= n && sq <= n).then_some((sp as usize, sq as usize))
    }

    fn block_size(&self, p: usize, q: usize) -> usize {
        binom(self.n(), p) * binom(self.n(), q)
    }

    /// Laplacian `D D* + D* D` of a bidegree component on the `(p,q)` block.
    fn component_laplacian(&self, part: DPart, p: usize, q: usize) -> Matrix {
        let sz = self.block_size(p, q);
        let mut lap = Matrix::zeros(sz, sz);
        if let Some(t) = self.target(part, p, q) {
            let d1 = self.b.operator_theta(part, p, q);
            let d1s = self.adjoint_block(&d1, (p, q), t);
            lap = lap.add(&d1s.mul(&d1));
        }
        if let Some(s) = self.source(part, p, q) {
            let d0 = self.b.operator_theta(part, s.0, s.1);
            let d0s = self.adjoint_block(&d0, s, (p, q));
            lap = lap.add(&d0.mul(&d0s));
        }
        lap
    }

    fn d_adjoint_theta(&self, k: usize) -> Matrix {
        // d*: A^{k+1} -> A^k
        self.herm_inv[k].mul(&self.b.d_theta(k).adjoint()).mul(&self.herm[k + 1])
    }

    /// `Delta_d` on all of degree `k`, theta coordinates.
    pub fn laplacian_d(&self, k: usize) -> &Matrix {
        self.lap_d[k].get_or_init(|| {
            let dim = self.dim();
            let size = binom(dim, k);
            let mut lap = Matrix::zeros(size, size);
            if k < dim {
                let d = self.b.d_theta(k);
                lap = lap.add(&self.d_adjoint_theta(k).mul(d));
            }
            if k > 0 {
                let d = self.b.d_theta(k - 1);
                lap = lap.add(&d.mul(&self.d_adjoint_theta(k - 1)));
            }
            lap
        })
    }

    /// Exact matrix of an operator starting at `A^{p,q}`, in theta coordinates.
    ///
    /// Columns index the `(p,q)` monomials. Rows index the target block, except for
    /// the full `d`, `d*` and `Delta_d`, whose rows index all of the target degree.
    pub fn operator_matrix(&self, op: Operator, p: usize, q: usize) -> Result<Matrix> {
        self.require_unimodular()?;
        let n = self.n();
        if p > n || q > n {
            return Err(Error::DegreeMismatch { expected: n, found: p.max(q) });
        }
        let k = p + q;
        let pos = self.b.frame().positions(p, q);
        Ok(match op {
            Operator::Part(part) => self.b.operator_theta(part, p, q),
            Operator::Adjoint(DPart::D) => {
                if k == 0 {
                    Matrix::zeros(0, pos.len())
                } else {
                    self.d_adjoint_theta(k - 1).select_columns(&pos)
                }
            }
            Operator::Adjoint(part) => match self.source(part, p, q) {
                Some(s) => self.adjoint_block(&self.b.operator_theta(part, s.0, s.1), s, (p, q)),
                None => Matrix::zeros(0, pos.len()),
            },
            Operator::Laplacian(DPart::D) => self.laplacian_d(k).select_columns(&pos),
            Operator::Laplacian(part) => self.component_laplacian(part, p, q),
            Operator::Lefschetz => {
                if p == n || q == n {
                    return Ok(Matrix::zeros(0, pos.len()));
                }
                self.lefschetz_theta(p, q)
            }
            Operator::DualLefschetz => {
                if p == 0 || q == 0 {
                    return Ok(Matrix::zeros(0, pos.len()));
                }
                let l = self.lefschetz_theta(p - 1, q - 1);
                self.adjoint_block(&l, (p - 1, q - 1), (p, q))
            }
        })
    }

    fn lefschetz_theta(&self, p: usize, q: usize) -> Matrix {
        let f = self.b.frame();
        let cols: Vec<Vec<Scalar>> = MultiIndex::all(self.dim(), p + q)
            .into_iter()
            .filter(|m| f.bidegree(*m) == (p, q))
            .map(|m| {
                let a = f.from_theta(&Form::monomial(self.dim(), m, Scalar::one()));
                let t = f.to_theta(&self.lefschetz(&a));
                let tv = if t.is_zero() { vec![Scalar::zero(); binom(self.dim(), p + q + 2)] } else { t.to_vector() };
                let rows = f.positions(p + 1, q + 1);
                rows.iter().map(|&r| tv[r].clone()).collect()
            })
            .collect();
        Matrix::from_columns(self.block_size(p + 1, q + 1), &cols)
    }

    fn theta_vectors_to_subspace(&self, k: usize, pos: &[usize], vecs: Vec<Vec<Scalar>>) -> Subspace {
        let full = binom(self.dim(), k);
        let t = self.b.frame().to_real_matrix(k);
        let real = vecs
            .into_iter()
            .map(|v| {
                let mut x = vec![Scalar::zero(); full];
                for (&p, c) in pos.iter().zip(v) {
                    x[p] = c;
                }
                t.mul_vec(&x)
            })
            .collect();
        Subspace::from_vectors(self.dim(), k, real)
    }

    /// Harmonic `(p,q)`-forms, computed as a kernel intersection and cross-checked
    /// against the kernel of the Laplacian.
    pub fn harmonic_space(&self, kind: HarmonicKind, p: usize, q: usize) -> Result<HarmonicSpace> {
        self.require_unimodular()?;
        let n = self.n();
        let dim = self.dim();
        if p > n || q > n {
            return Err(Error::DegreeMismatch { expected: n, found: p.max(q) });
        }
        let k = p + q;
        let pos = self.b.frame().positions(p, q);
        let (closed, coclosed, lap) = match kind {
            HarmonicKind::D => {
                let closed = if k < dim { self.b.d_theta(k).select_columns(&pos) } else { Matrix::zeros(0, pos.len()) };
                let coclosed = if dim - k < dim {
                    self.b.d_theta(dim - k).mul(&self.star_theta[k]).select_columns(&pos)
                } else {
                    Matrix::zeros(0, pos.len())
                };
                (closed, coclosed, self.laplacian_d(k).select_columns(&pos))
            }
            HarmonicKind::Dbar => {
                let closed = self.b.operator_theta(DPart::Delbar, p, q);
                let (sp, sq) = (n - q, n - p);
                let spos = self.b.frame().positions(sp, sq);
                let star_block = self.star_theta[k].select(&spos, &pos);
                let coclosed = self.b.operator_theta(DPart::Del, sp, sq).mul(&star_block);
                (closed, coclosed, self.component_laplacian(DPart::Delbar, p, q))
            }
        };
        let direct = self.theta_vectors_to_subspace(k, &pos, closed.vstack(&coclosed).nullspace());
        let via_laplacian = self.theta_vectors_to_subspace(k, &pos, lap.nullspace());
        if direct != via_laplacian {
            return Err(Error::Internal(format!(
                "{}-harmonic ({p},{q})-forms disagree with the Laplacian kernel",
                kind.name()
            )));
        }
        let number = direct.dimension();
        Ok(HarmonicSpace { kind, p, q, space: direct, number })
    }

    pub fn number_table(&self) -> Result<NumberTable> {
        let n = self.n();
        let mut h_d = vec![vec![0; n + 1]; n + 1];
        let mut h_dbar = vec![vec![0; n + 1]; n + 1];
        for p in 0..=n {
            for q in 0..=n {
                h_d[p][q] = self.harmonic_space(HarmonicKind::D, p, q)?.number;
                h_dbar[p][q] = self.harmonic_space(HarmonicKind::Dbar, p, q)?.number;
            }
        }
        for p in 0..=n {
            for q in 0..=n {
                let v = h_d[p][q];
                if v != h_d[q][p] || v != h_d[n - p][n - q] || v != h_d[n - q][n - p] {
                    return Err(Error::Internal(format!("h_d symmetry fails at ({p},{q})")));
                }
            }
        }
        Ok(NumberTable { h_d, h_dbar })
    }

    pub fn is_primitive(&self, a: &Form) -> bool {
        if a.is_zero() {
            return true;
        }
        let k = a.degree();
        let n = self.n();
        if k > n {
            return false;
        }
        let mut x = a.clone();
        for _ in 0..=(n - k) {
            x = self.lefschetz(&x);
            if x.is_zero() {
                return true;
            }
        }
        x.is_zero()
    }

    /// `A^{p,q} ∩ ker L^{n-p-q+1}`.
    pub fn primitive_space(&self, p: usize, q: usize) -> Subspace {
        let k = p + q;
        let n = self.n();
        let basis = self.b.frame().bidegree_basis(p, q);
        if k > n {
            return Subspace::zero(self.dim(), k);
        }
        let images: Vec<Vec<Scalar>> = basis
            .iter()
            .map(|a| {
                let mut x = a.clone();
                for _ in 0..=(n - k) {
                    x = self.lefschetz(&x);
                }
                if x.is_zero() {
                    vec![Scalar::zero(); binom(self.dim(), (2 * n - k + 2).min(self.dim()))]
                } else {
                    x.to_vector()
                }
            })
            .collect();
        let rows = images.first().map(|v| v.len()).unwrap_or(0);
        let m = Matrix::from_columns(rows, &images);
        let forms: Vec<Form> = m
            .nullspace()
            .into_iter()
            .map(|c| {
                basis.iter().zip(&c).fold(Form::zero(self.dim(), k), |acc, (b, x)| &acc + &b.scale(x))
            })
            .collect();
        Subspace::reduce(self.dim(), k, &forms).expect("primitive space")
    }

    /// `H^{p,q}_d = sum_r L^r (H^{p-r,q-r}_d ∩ P^{p-r,q-r})`, verified as a direct sum.
    pub fn primitive_harmonic_decomposition(&self, p: usize, q: usize) -> Result<Vec<Subspace>> {
        if !self.almost_kahler {
            return Err(Error::NotAlmostKahler);
        }
        let total = self.harmonic_space(HarmonicKind::D, p, q)?;
        let mut pieces = Vec::new();
        let mut sum = Subspace::zero(self.dim(), p + q);
        for r in 0..=p.min(q) {
            let (pp, qq) = (p - r, q - r);
            let prim = self.primitive_space(pp, qq);
            let harm = self.harmonic_space(HarmonicKind::D, pp, qq)?.space;
            let hp = harm.intersect(&prim)?;
            let closed_prim = self.b.lie().cocycles(pp + qq).intersect(&prim)?;
            if hp != closed_prim {
                return Err(Error::Internal(format!("closed primitive ({pp},{qq})-forms are not all harmonic")));
            }
            let mut lifted = hp.clone();
            for _ in 0..r {
                lifted = lifted.map(lifted.degree() + 2, |a| self.lefschetz(a))?;
            }
            let lifted = if lifted.degree() != p + q { Subspace::zero(self.dim(), p + q) } else { lifted };
            sum = sum.add(&lifted)?;
            pieces.push(lifted);
        }
        let dims: usize = pieces.iter().map(Subspace::dimension).sum();
        if dims != sum.dimension() || sum != total.space {
            return Err(Error::Internal(format!("primitive decomposition of harmonic ({p},{q})-forms fails")));
        }
        Ok(pieces)
    }

    /// The closed formula for the star of a primitive pure-type form.
    pub fn primitive_star(&self, psi: &Form) -> Result<Form> {
        let n = self.n();
        if psi.is_zero() {
            return Ok(Form::zero(self.dim(), self.dim() - psi.degree()));
        }
        let (p, q) = self.b.frame().pure_bidegree(psi).ok_or(Error::MixedBidegree)?;
        if !self.is_primitive(psi) {
            return Err(Error::NotPrimitive);
        }
        let k = p + q;
        let sign = if (k * (k + 1) / 2) % 2 == 0 { Scalar::one() } else { -Scalar::one() };
        let c = &(&sign * &factorial(n - k).inv().unwrap()) * &(&Scalar::i_pow(p as i64) * &Scalar::i_pow(-(q as i64)));
        let mut x = psi.scale(&c);
        for _ in 0..(n - k) {
            x = self.lefschetz(&x);
        }
        Ok(x)
    }
}
