//! Subspaces of homogeneous forms, kept in canonical reduced echelon form.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exterior::{Form, MultiIndex};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// A subspace of the degree-`k` forms on `dim` generators.
///
/// The basis is the nonzero rows of the reduced row echelon form with columns in
/// lexicographic multi-index order, so two equal subspaces compare equal.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    dim: usize,
    degree: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

impl Subspace {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Subspace { dim, degree, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(dim: usize, degree: usize) -> Self {
        let n = binomial(dim, degree);
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
            .collect();
        Subspace { dim, degree, rows, pivots: (0..n).collect() }
    }

    /// Span of coordinate vectors (lexicographic monomial coordinates).
    pub fn from_vectors(dim: usize, degree: usize, vecs: Vec<Vec<Scalar>>) -> Self {
        let n = binomial(dim, degree);
        if vecs.is_empty() {
            return Subspace::zero(dim, degree);
        }
        for v in &vecs {
            assert_eq!(v.len(), n, "coordinate vector has the wrong length");
        }
        let (r, pivots) = Matrix::from_rows(vecs).rref();
        let rows = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace { dim, degree, rows, pivots }
    }

    /// Span of the given forms.
    pub fn reduce(dim: usize, degree: usize, forms: &[Form]) -> Result<Self> {
        let mut vecs = Vec::with_capacity(forms.len());
        for f in forms {
            if f.dim() != dim {
                return Err(Error::DimensionMismatch { left: dim, right: f.dim() });
            }
            if f.is_zero() {
                continue;
            }
            if f.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: f.degree() });
            }
            vecs.push(f.to_vector());
        }
        Ok(Subspace::from_vectors(dim, degree, vecs))
    }

    pub fn span(forms: &[Form]) -> Result<Self> {
        let f = forms.first().ok_or_else(|| Error::Internal("span of an empty list".into()))?;
        Subspace::reduce(f.dim(), f.degree(), forms)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn ambient_dimension(&self) -> usize {
        binomial(self.dim, self.degree)
    }

    pub fn vectors(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn basis(&self) -> Vec<Form> {
        self.rows.iter().map(|r| Form::from_vector(self.dim, self.degree, r)).collect()
    }

    fn check(&self, o: &Subspace) -> Result<()> {
        if self.dim != o.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: o.dim });
        }
        if self.degree != o.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: o.degree });
        }
        Ok(())
    }

    /// Remainder of `v` after elimination against the echelon basis.
    pub fn reduce_vector(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &(&f * r);
                }
            }
        }
        v
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        self.reduce_vector(v).iter().all(Zero::is_zero)
    }

    pub fn contains(&self, f: &Form) -> bool {
        if f.is_zero() {
            return true;
        }
        if f.dim() != self.dim || f.degree() != self.degree {
            return false;
        }
        self.contains_vector(&f.to_vector())
    }

    /// The form `f` reduced modulo this subspace.
    pub fn reduce_form(&self, f: &Form) -> Form {
        if f.is_zero() {
            return f.clone();
        }
        Form::from_vector(self.dim, self.degree, &self.reduce_vector(&f.to_vector()))
    }

    pub fn add(&self, o: &Subspace) -> Result<Subspace> {
        self.check(o)?;
        let mut vecs = self.rows.clone();
        vecs.extend(o.rows.iter().cloned());
        Ok(Subspace::from_vectors(self.dim, self.degree, vecs))
    }

    pub fn intersect(&self, o: &Subspace) -> Result<Subspace> {
        self.check(o)?;
        if self.is_zero() || o.is_zero() {
            return Ok(Subspace::zero(self.dim, self.degree));
        }
        let n = self.ambient_dimension();
        let mut cols: Vec<Vec<Scalar>> = self.rows.clone();
        cols.extend(o.rows.iter().map(|r| r.iter().map(|x| -x).collect()));
        let m = Matrix::from_columns(n, &cols);
        let a = self.rows.len();
        let vecs = m
            .nullspace()
            .into_iter()
            .map(|coef| {
                let mut v = vec![Scalar::zero(); n];
                for (c, row) in coef[..a].iter().zip(&self.rows) {
                    if c.is_zero() {
                        continue;
                    }
                    for (x, r) in v.iter_mut().zip(row) {
                        *x += &(c * r);
                    }
                }
                v
            })
            .collect();
        Ok(Subspace::from_vectors(self.dim, self.degree, vecs))
    }

    pub fn is_subspace_of(&self, o: &Subspace) -> bool {
        self.check(o).is_ok() && self.rows.iter().all(|r| o.contains_vector(r))
    }

    /// `dim(self) - dim(sub)`; errors unless `sub` is contained in `self`.
    pub fn quotient_dim(&self, sub: &Subspace) -> Result<usize> {
        self.check(sub)?;
        if !sub.is_subspace_of(self) {
            return Err(Error::NotASubspace);
        }
        Ok(self.dimension() - sub.dimension())
    }

    /// Canonical complement representatives: a subset of this echelon basis whose
    /// classes form a basis of `self / (self ∩ modulo)`.
    pub fn representatives_modulo(&self, modulo: &Subspace) -> Result<Vec<Form>> {
        self.check(modulo)?;
        let mut acc = modulo.clone();
        let mut out = Vec::new();
        for row in &self.rows {
            if !acc.contains_vector(row) {
                out.push(Form::from_vector(self.dim, self.degree, row));
                let mut vecs = acc.rows.clone();
                vecs.push(row.clone());
                acc = Subspace::from_vectors(self.dim, self.degree, vecs);
            }
        }
        Ok(out)
    }

    pub fn conjugate(&self) -> Subspace {
        let vecs = self.rows.iter().map(|r| r.iter().map(Scalar::conj).collect()).collect();
        Subspace::from_vectors(self.dim, self.degree, vecs)
    }

    /// Image under a linear map on forms landing in degree `degree`.
    pub fn map(&self, degree: usize, f: impl Fn(&Form) -> Form) -> Result<Subspace> {
        let imgs: Vec<Form> = self.basis().iter().map(f).collect();
        Subspace::reduce(self.dim, degree, &imgs)
    }

    /// Subspace spanned by the monomials accepted by `keep`.
    pub fn coordinate(dim: usize, degree: usize, keep: impl Fn(MultiIndex) -> bool) -> Subspace {
        let forms: Vec<Form> = MultiIndex::all(dim, degree)
            .into_iter()
            .filter(|m| keep(*m))
            .map(|m| Form::monomial(dim, m, Scalar::one()))
            .collect();
        Subspace::reduce(dim, degree, &forms).expect("coordinate subspace")
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {}, degree {}) <", self.dimension(), self.degree)?;
        let b: Vec<String> = self.basis().iter().map(|x| x.to_string()).collect();
        write!(f, "{}>", b.join("; "))
    }
}
