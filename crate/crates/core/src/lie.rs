//! Lie algebra presentations and the Chevalley-Eilenberg complex of invariant forms.
//!
//! A presentation stores `d e^k` for each covector of a real basis. Brackets follow
//! from `d a(X, Y) = -a([X, Y])`, so `[e_i, e_j] = -sum_k c^k_ij e_k`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exterior::{Form, MultiIndex};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::subspace::Subspace;

#[derive(Clone, Debug, PartialEq)]
pub struct LiePresentation {
    name: String,
    dim: usize,
    params: BTreeMap<String, BigRational>,
    diffs: Vec<Form>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub jacobi_ok: bool,
    pub nilpotent: bool,
    pub solvable: bool,
    pub completely_solvable: bool,
    pub unimodular: bool,
    /// Generators (0-based) with `d d e^k != 0`.
    pub jacobi_failures: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CohomologyReport {
    pub degree: usize,
    pub betti: usize,
    pub representatives: Vec<Form>,
    pub cocycles: Subspace,
    pub boundaries: Subspace,
}

impl LiePresentation {
    /// `diffs[k]` is `d e^{k+1}` written in the real coframe.
    pub fn new(name: impl Into<String>, diffs: Vec<Form>) -> Result<Self> {
        let dim = diffs.len();
        if dim == 0 || dim > 16 {
            return Err(Error::InvalidPresentation(format!("unsupported dimension {dim}")));
        }
        for (k, f) in diffs.iter().enumerate() {
            if f.dim() != dim {
                return Err(Error::DimensionMismatch { left: dim, right: f.dim() });
            }
            if !f.is_zero() && f.degree() != 2 {
                return Err(Error::DegreeMismatch { expected: 2, found: f.degree() });
            }
            if !f.is_real() {
                return Err(Error::ComplexStructureConstant(format!("d e{} = {}", k + 1, f)));
            }
        }
        let diffs = diffs
            .into_iter()
            .map(|f| if f.is_zero() { Form::zero(dim, 2) } else { f })
            .collect();
        Ok(LiePresentation { name: name.into(), dim, params: BTreeMap::new(), diffs })
    }

    /// Presentation from structure constants `(k, i, j, c)` meaning `d e^k += c e^i ^ e^j`, 1-based.
    pub fn from_constants(name: impl Into<String>, dim: usize, consts: &[(usize, usize, usize, i64, i64)]) -> Result<Self> {
        let mut diffs = vec![Form::zero(dim, 2); dim];
        for &(k, i, j, n, den) in consts {
            let t = Form::basis(dim, &[i - 1, j - 1]).scale(&Scalar::from_ratio(n, den));
            diffs[k - 1] = &diffs[k - 1] + &t;
        }
        LiePresentation::new(name, diffs)
    }

    pub fn abelian(name: impl Into<String>, dim: usize) -> Self {
        LiePresentation::new(name, vec![Form::zero(dim, 2); dim]).expect("abelian presentation")
    }

    pub fn with_params(mut self, params: BTreeMap<String, BigRational>) -> Self {
        self.params = params;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> &BTreeMap<String, BigRational> {
        &self.params
    }

    pub fn structure_forms(&self) -> &[Form] {
        &self.diffs
    }

    /// `c^k_ij` with the antisymmetric convention, 0-based.
    pub fn structure_constant(&self, k: usize, i: usize, j: usize) -> Scalar {
        if i == j {
            return Scalar::zero();
        }
        let (a, b, s) = if i < j { (i, j, Scalar::one()) } else { (j, i, -Scalar::one()) };
        &self.diffs[k].coeff(MultiIndex::from_indices(&[a, b]).unwrap()) * &s
    }

    /// Exterior derivative of an invariant form, extended by the graded Leibniz rule.
    pub fn differential(&self, a: &Form) -> Result<Form> {
        if a.dim() != self.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: a.dim() });
        }
        let mut out = Form::zero(self.dim, a.degree() + 1);
        for (idx, c) in a.terms() {
            let gens: Vec<usize> = idx.indices().collect();
            for (s, &g) in gens.iter().enumerate() {
                if self.diffs[g].is_zero() {
                    continue;
                }
                let pre = Form::basis(self.dim, &gens[..s]);
                let post = Form::basis(self.dim, &gens[s + 1..]);
                let mut t = &(&pre ^ &self.diffs[g]) ^ &post;
                if s % 2 == 1 {
                    t = -&t;
                }
                out = &out + &t.scale(c);
            }
        }
        Ok(out)
    }

    /// Matrix of `d : A^k -> A^{k+1}` in lexicographic monomial coordinates.
    pub fn d_matrix(&self, k: usize) -> Matrix {
        let cols: Vec<Vec<Scalar>> = MultiIndex::all(self.dim, k)
            .into_iter()
            .map(|m| {
                let f = Form::monomial(self.dim, m, Scalar::one());
                let df = self.differential(&f).unwrap();
                if df.is_zero() {
                    Form::<Scalar>::zero(self.dim, k + 1).to_vector()
                } else {
                    df.to_vector()
                }
            })
            .collect();
        Matrix::from_columns(binom(self.dim, k + 1), &cols)
    }

    /// `[e_i, e_j]` as a coordinate vector in the frame dual to `e^k`.
    pub fn bracket(&self, i: usize, j: usize) -> Vec<Scalar> {
        (0..self.dim).map(|k| -self.structure_constant(k, i, j)).collect()
    }

    fn bracket_vectors(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let c = xi * yj;
                for (o, b) in out.iter_mut().zip(self.bracket(i, j)) {
                    *o += &(&c * &b);
                }
            }
        }
        out
    }

    /// Matrix of `ad(e_i)` acting on the frame.
    pub fn ad_matrix(&self, i: usize) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim).map(|j| self.bracket(i, j)).collect();
        Matrix::from_columns(self.dim, &cols)
    }

    fn bracket_span(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut vecs = Vec::new();
        for x in a.vectors() {
            for y in b.vectors() {
                vecs.push(self.bracket_vectors(x, y));
            }
        }
        Subspace::from_vectors(self.dim, 1, vecs)
    }

    fn series_terminates(&self, lower_central: bool) -> bool {
        let g = Subspace::full(self.dim, 1);
        let mut cur = g.clone();
        loop {
            if cur.is_zero() {
                return true;
            }
            let next = if lower_central { self.bracket_span(&g, &cur) } else { self.bracket_span(&cur, &cur) };
            if next.dimension() == cur.dimension() {
                return false;
            }
            cur = next;
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let jacobi_failures: Vec<usize> = (0..self.dim)
            .filter(|&k| !self.differential(&self.diffs[k]).map(|f| f.is_zero()).unwrap_or(false))
            .collect();
        let unimodular = (0..self.dim).all(|i| {
            let ad = self.ad_matrix(i);
            (0..self.dim).fold(Scalar::zero(), |acc, k| &acc + &ad[(k, k)]).is_zero()
        });
        let nilpotent = self.series_terminates(true);
        let solvable = self.series_terminates(false);
        let completely_solvable = solvable && (0..self.dim).all(|i| real_rooted(&char_poly(&self.ad_matrix(i))));
        ValidationReport {
            jacobi_ok: jacobi_failures.is_empty(),
            nilpotent,
            solvable,
            completely_solvable,
            unimodular,
            jacobi_failures,
        }
    }

    pub fn require_valid(&self) -> Result<()> {
        let r = self.validate();
        if r.jacobi_ok {
            Ok(())
        } else {
            let gens: Vec<String> = r.jacobi_failures.iter().map(|k| format!("e{}", k + 1)).collect();
            Err(Error::InvalidPresentation(format!("d^2 != 0 on {}", gens.join(", "))))
        }
    }

    pub fn cocycles(&self, k: usize) -> Subspace {
        Subspace::from_vectors(self.dim, k, self.d_matrix(k).nullspace())
    }

    pub fn boundaries(&self, k: usize) -> Subspace {
        if k == 0 {
            return Subspace::zero(self.dim, 0);
        }
        let m = self.d_matrix(k - 1);
        Subspace::from_vectors(self.dim, k, (0..m.cols()).map(|j| m.column(j)).collect())
    }

    pub fn cohomology(&self, k: usize) -> Result<CohomologyReport> {
        self.require_valid()?;
        if k > self.dim {
            return Err(Error::DegreeMismatch { expected: self.dim, found: k });
        }
        let cocycles = self.cocycles(k);
        let boundaries = self.boundaries(k);
        let betti = cocycles.quotient_dim(&boundaries)?;
        let representatives = cocycles.representatives_modulo(&boundaries)?;
        Ok(CohomologyReport { degree: k, betti, representatives, cocycles, boundaries })
    }

    pub fn betti_numbers(&self) -> Result<Vec<usize>> {
        (0..=self.dim).map(|k| self.cohomology(k).map(|c| c.betti)).collect()
    }

    /// Some `b` with `d b = a`, when `a` is exact.
    pub fn exact_preimage(&self, a: &Form) -> Option<Form> {
        let k = a.degree();
        if a.is_zero() {
            return Some(Form::zero(self.dim, k.saturating_sub(1)));
        }
        if k == 0 {
            return None;
        }
        let x = self.d_matrix(k - 1).solve(&a.to_vector())?;
        Some(Form::from_vector(self.dim, k - 1, &x))
    }

    /// Integral over the quotient with unit volume: the top coefficient.
    pub fn integrate(&self, top: &Form) -> Scalar {
        if top.is_zero() {
            Scalar::zero()
        } else {
            top.top_coefficient()
        }
    }
}

pub(crate) fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

// Polynomials over Q, lowest degree first.
type Poly = Vec<BigRational>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Characteristic polynomial `det(x I - A)` of a real matrix (Faddeev-LeVerrier).
fn char_poly(a: &Matrix) -> Poly {
    let n = a.rows();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut m = Matrix::zeros(n, n);
    for k in 1..=n {
        let ident = Matrix::identity(n).scale(&Scalar::real(coeffs[n - k + 1].clone()));
        m = a.mul(&m).add(&ident);
        let am = a.mul(&m);
        let tr = (0..n).fold(Scalar::zero(), |acc, i| &acc + &am[(i, i)]);
        coeffs[n - k] = -(tr.re / BigRational::from_integer(k.into()));
    }
    coeffs
}

fn derivative(p: &Poly) -> Poly {
    trim(p.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(i.into())).collect())
}

fn rem(a: &Poly, b: &Poly) -> Poly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lead = b[db].clone();
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let f = &r[dr] / &lead;
        for i in 0..=db {
            let t = &f * &b[i];
            r[dr - db + i] -= t;
        }
        r = trim(r);
        if r.len() > dr {
            break;
        }
    }
    r
}

fn sign_changes(vals: &[i8]) -> usize {
    let nz: Vec<i8> = vals.iter().copied().filter(|&s| s != 0).collect();
    nz.windows(2).filter(|w| w[0] != w[1]).count()
}

/// True when every complex root of `p` is real (Sturm count against squarefree degree).
fn real_rooted(p: &Poly) -> bool {
    let p = trim(p.clone());
    if p.len() <= 2 {
        return true;
    }
    let mut chain = vec![p.clone(), derivative(&p)];
    loop {
        let n = chain.len();
        let r = rem(&chain[n - 2], &chain[n - 1]);
        if r.is_empty() {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    let gcd_deg = chain.last().unwrap().len() - 1;
    let sgn = |c: &BigRational| if c.is_positive() { 1i8 } else if c.is_negative() { -1 } else { 0 };
    let at_pos: Vec<i8> = chain.iter().map(|q| sgn(q.last().unwrap())).collect();
    let at_neg: Vec<i8> = chain
        .iter()
        .map(|q| {
            let s = sgn(q.last().unwrap());
            if (q.len() - 1) % 2 == 1 { -s } else { s }
        })
        .collect();
    let distinct_real = sign_changes(&at_neg) - sign_changes(&at_pos);
    distinct_real == (p.len() - 1) - gcd_deg
}
