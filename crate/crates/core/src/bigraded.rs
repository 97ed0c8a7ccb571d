//! Invariant almost complex structures and the (p,q)-splitting of forms.
//!
//! An almost complex structure is given by a (1,0)-coframe `phi^1..phi^n` written in
//! the real coframe. Internally every form also has coordinates in the complex
//! coframe `theta = (phi^1..phi^n, phibar^1..phibar^n)`, where bidegree is read off
//! a monomial directly.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exterior::{Form, MultiIndex};
use crate::lie::{binom, LiePresentation};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::subspace::Subspace;

/// Change of basis between the real coframe and a complex coframe `phi, phibar`.
#[derive(Clone, Debug)]
pub struct ComplexCoframe {
    dim: usize,
    coframe: Vec<Form>,
    /// Row `a` holds the real coordinates of `theta^a`.
    rows: Matrix,
    /// `to_real[k]` maps theta-coordinates of k-forms to real coordinates.
    to_real: Vec<Matrix>,
    to_theta: Vec<Matrix>,
}

impl ComplexCoframe {
    pub fn new(dim: usize, coframe: Vec<Form>) -> Result<Self> {
        if dim % 2 == 1 || dim == 0 {
            return Err(Error::Unsupported(format!("almost complex structure on odd dimension {dim}")));
        }
        let n = dim / 2;
        if coframe.len() != n {
            return Err(Error::DimensionMismatch { left: n, right: coframe.len() });
        }
        for (a, f) in coframe.iter().enumerate() {
            if f.dim() != dim || f.is_zero() || f.degree() != 1 {
                return Err(Error::BadCoframe(a + 1));
            }
        }
        let mut rows: Vec<Vec<Scalar>> = coframe.iter().map(Form::to_vector).collect();
        rows.extend(coframe.iter().map(|f| f.conjugate().to_vector()));
        let rows = Matrix::from_rows(rows);
        let t1 = rows.transpose();
        let t1_inv = t1.inverse().ok_or(Error::CoframeNotBasis)?;
        let to_real = (0..=dim).map(|k| t1.compound(k)).collect();
        let to_theta = (0..=dim).map(|k| t1_inv.compound(k)).collect();
        Ok(ComplexCoframe { dim, coframe, rows, to_real, to_theta })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.dim / 2
    }

    pub fn coframe(&self) -> &[Form] {
        &self.coframe
    }

    /// `theta^a` (0-based over `phi` then `phibar`) in the real coframe.
    pub fn theta(&self, a: usize) -> Form {
        Form::from_vector(self.dim, 1, self.rows.row(a))
    }

    /// Real coordinates of the frame vector dual to `theta^a`.
    pub fn frame_vector(&self, a: usize) -> Vec<Scalar> {
        self.to_theta[1].row(a).to_vec()
    }

    pub fn to_real_matrix(&self, k: usize) -> &Matrix {
        &self.to_real[k]
    }

    pub fn to_theta_matrix(&self, k: usize) -> &Matrix {
        &self.to_theta[k]
    }

    /// Coordinates of a real-coframe form in the theta coframe, as a form over `theta`.
    pub fn to_theta(&self, a: &Form) -> Form {
        if a.is_zero() {
            return Form::zero(self.dim, a.degree());
        }
        let k = a.degree();
        Form::from_vector(self.dim, k, &self.to_theta[k].mul_vec(&a.to_vector()))
    }

    pub fn from_theta(&self, a: &Form) -> Form {
        if a.is_zero() {
            return Form::zero(self.dim, a.degree());
        }
        let k = a.degree();
        Form::from_vector(self.dim, k, &self.to_real[k].mul_vec(&a.to_vector()))
    }

    /// Bidegree of a theta monomial.
    pub fn bidegree(&self, m: MultiIndex) -> (usize, usize) {
        let low = (1u32 << self.n()) - 1;
        ((m.0 & low).count_ones() as usize, (m.0 >> self.n()).count_ones() as usize)
    }

    /// Positions of bidegree `(p,q)` theta monomials among the lexicographic degree-`p+q` monomials.
    pub fn positions(&self, p: usize, q: usize) -> Vec<usize> {
        MultiIndex::all(self.dim, p + q)
            .into_iter()
            .enumerate()
            .filter(|(_, m)| self.bidegree(*m) == (p, q))
            .map(|(i, _)| i)
            .collect()
    }

    /// Theta-coordinate monomials of bidegree `(p,q)` converted to the real coframe.
    pub fn bidegree_basis(&self, p: usize, q: usize) -> Vec<Form> {
        MultiIndex::all(self.dim, p + q)
            .into_iter()
            .filter(|m| self.bidegree(*m) == (p, q))
            .map(|m| self.from_theta(&Form::monomial(self.dim, m, Scalar::one())))
            .collect()
    }

    pub fn bidegree_space(&self, p: usize, q: usize) -> Subspace {
        Subspace::reduce(self.dim, p + q, &self.bidegree_basis(p, q)).expect("bidegree basis")
    }

    pub fn project(&self, a: &Form, p: usize, q: usize) -> Result<Form> {
        if a.is_zero() {
            return Ok(Form::zero(self.dim, p + q));
        }
        if a.degree() != p + q {
            return Err(Error::DegreeMismatch { expected: p + q, found: a.degree() });
        }
        let t = self.to_theta(a).filter(|m| self.bidegree(m) == (p, q));
        Ok(self.from_theta(&t))
    }

    /// The bidegree of a nonzero form when it is pure.
    pub fn pure_bidegree(&self, a: &Form) -> Option<(usize, usize)> {
        let t = self.to_theta(a);
        let mut it = t.terms().map(|(m, _)| self.bidegree(*m));
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    /// `J` on forms: multiplication by `i^(p-q)` on the `(p,q)` component.
    pub fn apply_j(&self, a: &Form) -> Form {
        let t = self.to_theta(a);
        let mut out = Form::zero(self.dim, a.degree());
        for (m, c) in t.terms() {
            let (p, q) = self.bidegree(*m);
            out.add_term(*m, c * &Scalar::i_pow(p as i64 - q as i64));
        }
        self.from_theta(&out)
    }

    /// Renders a form in the complex coframe, e.g. `(1/2 i) phi1^phibar1`.
    pub fn render_theta(&self, a: &Form) -> String {
        let n = self.n();
        self.to_theta(a).render(|i| if i < n { format!("phi{}", i + 1) } else { format!("phibar{}", i - n + 1) })
    }

    /// Builds a real-coframe form from theta coordinates given as `(phi indices, phibar indices, coeff)`.
    pub fn theta_form(&self, terms: &[(&[usize], &[usize], Scalar)]) -> Form {
        let n = self.n();
        let mut out: Option<Form> = None;
        for (ps, qs, c) in terms {
            let mut idx: Vec<usize> = ps.iter().map(|a| a - 1).collect();
            idx.extend(qs.iter().map(|b| b - 1 + n));
            let t = Form::basis(self.dim, &idx).scale(c);
            out = Some(match out {
                None => t,
                Some(o) => &o + &t,
            });
        }
        self.from_theta(&out.expect("nonempty term list"))
    }
}

/// An invariant almost complex structure on a Lie algebra.
#[derive(Clone, Debug)]
pub struct Bigrading {
    lie: LiePresentation,
    frame: ComplexCoframe,
    /// `d` in theta coordinates, per degree.
    d_theta: Vec<Matrix>,
}

/// The four bidegree components of `d` applied to a pure-type form.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitD {
    pub mu: Form,
    pub del: Form,
    pub delbar: Form,
    pub mubar: Form,
}

/// The operators `d`, `mu`, `del`, `delbar`, `mubar` as bidegree shifts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DPart {
    D,
    Mu,
    Del,
    Delbar,
    Mubar,
}

impl DPart {
    pub const COMPONENTS: [DPart; 4] = [DPart::Mu, DPart::Del, DPart::Delbar, DPart::Mubar];

    /// Shift `(dp, dq)` of bidegree, `None` for the full `d`.
    pub fn shift(self) -> Option<(i32, i32)> {
        match self {
            DPart::D => None,
            DPart::Mu => Some((2, -1)),
            DPart::Del => Some((1, 0)),
            DPart::Delbar => Some((0, 1)),
            DPart::Mubar => Some((-1, 2)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DPart::D => "d",
            DPart::Mu => "mu",
            DPart::Del => "del",
            DPart::Delbar => "delbar",
            DPart::Mubar => "mubar",
        }
    }
}

impl Bigrading {
    pub fn install(lie: LiePresentation, coframe10: Vec<Form>) -> Result<Self> {
        let frame = ComplexCoframe::new(lie.dim(), coframe10)?;
        let dim = lie.dim();
        let d_theta = (0..dim)
            .map(|k| frame.to_theta_matrix(k + 1).mul(&lie.d_matrix(k)).mul(frame.to_real_matrix(k)))
            .collect();
        Ok(Bigrading { lie, frame, d_theta })
    }

    pub fn lie(&self) -> &LiePresentation {
        &self.lie
    }

    pub fn frame(&self) -> &ComplexCoframe {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.lie.dim()
    }

    pub fn n(&self) -> usize {
        self.dim() / 2
    }

    pub fn project(&self, a: &Form, p: usize, q: usize) -> Result<Form> {
        self.frame.project(a, p, q)
    }

    pub fn bidegree_space(&self, p: usize, q: usize) -> Subspace {
        self.frame.bidegree_space(p, q)
    }

    pub fn split_d(&self, a: &Form) -> Result<SplitD> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: a.dim() });
        }
        if a.is_zero() {
            let z = Form::zero(self.dim(), a.degree() + 1);
            return Ok(SplitD { mu: z.clone(), del: z.clone(), delbar: z.clone(), mubar: z });
        }
        let (p, q) = self.frame.pure_bidegree(a).ok_or(Error::MixedBidegree)?;
        let da = self.frame.to_theta(&self.lie.differential(a)?);
        let part = |dp: i32, dq: i32| {
            let target = ((p as i32 + dp) as usize, (q as i32 + dq) as usize);
            let ok = p as i32 + dp >= 0 && q as i32 + dq >= 0;
            self.frame.from_theta(&da.filter(|m| ok && self.frame.bidegree(m) == target))
        };
        Ok(SplitD { mu: part(2, -1), del: part(1, 0), delbar: part(0, 1), mubar: part(-1, 2) })
    }

    /// True when the `(0,2)` part of every `d phi^a` vanishes.
    pub fn is_integrable(&self) -> bool {
        self.frame
            .coframe()
            .iter()
            .all(|phi| self.split_d(phi).map(|s| s.mubar.is_zero()).unwrap_or(false))
    }

    /// Theta-coordinate matrix of `part` from bidegree `(p,q)` to its target bidegree
    /// (for `D`, to all of degree `p+q+1`).
    pub fn operator_theta(&self, part: DPart, p: usize, q: usize) -> Matrix {
        let k = p + q;
        let cols = self.frame.positions(p, q);
        let rows: Vec<usize> = match part.shift() {
            None => (0..self.d_theta[k].rows()).collect(),
            Some((dp, dq)) => {
                let (tp, tq) = (p as i32 + dp, q as i32 + dq);
                if tp < 0 || tq < 0 || tp as usize > self.n() || tq as usize > self.n() {
                    Vec::new()
                } else {
                    self.frame.positions(tp as usize, tq as usize)
                }
            }
        };
        if k >= self.dim() {
            return Matrix::zeros(rows.len(), cols.len());
        }
        self.d_theta[k].select(&rows, &cols)
    }

    /// Theta-coordinate matrix of `d` on all of degree `k`.
    pub fn d_theta(&self, k: usize) -> &Matrix {
        &self.d_theta[k]
    }

    /// `[V_a, V_b]` in the complex frame (0-based over `V` then `Vbar`), from
    /// `d theta(X, Y) = -theta([X, Y])`.
    pub fn frame_bracket(&self, a: usize, b: usize) -> Vec<Scalar> {
        let dim = self.dim();
        (0..dim)
            .map(|c| {
                if a == b {
                    return Scalar::zero();
                }
                let dt = self.frame.to_theta(&self.lie.differential(&self.frame.theta(c)).unwrap());
                let (lo, hi, s) = if a < b { (a, b, Scalar::one()) } else { (b, a, -Scalar::one()) };
                -(&dt.coeff(MultiIndex::from_indices(&[lo, hi]).unwrap()) * &s)
            })
            .collect()
    }

    /// `d theta^c` in theta coordinates.
    pub fn theta_structure(&self, c: usize) -> Form {
        self.frame.to_theta(&self.lie.differential(&self.frame.theta(c)).unwrap())
    }

    /// `J` as a matrix on real coordinates of degree `k` forms.
    pub fn j_matrix(&self, k: usize) -> Matrix {
        let mut diag = Matrix::zeros(binom(self.dim(), k), binom(self.dim(), k));
        for (i, m) in MultiIndex::all(self.dim(), k).into_iter().enumerate() {
            let (p, q) = self.frame.bidegree(m);
            diag[(i, i)] = Scalar::i_pow(p as i64 - q as i64);
        }
        self.frame.to_real_matrix(k).mul(&diag).mul(self.frame.to_theta_matrix(k))
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    fn kodaira() -> Bigrading {
        // d e4 = e2^e3, everything else closed
        let l = LiePresentation::from_constants("kodaira", 4, &[(4, 2, 3, 1, 1)]).unwrap();
        let phi1 = &Form::generator(4, 1) + &Form::generator(4, 2).scale(&Scalar::i());
        let phi2 = &Form::generator(4, 3) + &Form::generator(4, 0).scale(&Scalar::i());
        Bigrading::install(l, vec![phi1, phi2]).unwrap()
    }

    #[test]
    fn bidegree_dimensions() {
        let b = kodaira();
        assert_eq!(b.bidegree_space(1, 1).dimension(), 4);
        assert_eq!(b.bidegree_space(2, 0).dimension(), 1);
    }

    #[test]
    fn degenerate_coframe() {
        let l = LiePresentation::abelian("t", 4);
        let phi = &Form::generator(4, 0) + &Form::generator(4, 1).scale(&Scalar::i());
        assert_eq!(Bigrading::install(l, vec![phi.clone(), phi]).err(), Some(Error::CoframeNotBasis));
    }

    #[test]
    fn kodaira_structure() {
        let b = kodaira();
        let f = b.frame();
        let phi2 = f.coframe()[1].clone();
        let s = b.split_d(&phi2).unwrap();
        let expected = f.theta_form(&[(&[1], &[1], qi(1, 2))]);
        assert_eq!(s.delbar, expected);
        assert!(s.mu.is_zero() && s.del.is_zero() && s.mubar.is_zero());
        assert_eq!(expected, Form::basis(4, &[1, 2]));
        assert!(b.is_integrable());
        assert_eq!(b.project(&Form::basis(4, &[1, 2]), 1, 1).unwrap(), Form::basis(4, &[1, 2]));
    }

    #[test]
    fn kodaira_bracket() {
        // [V1, V1bar] = -(i/2)(V2 + V2bar)
        let b = kodaira();
        let br = b.frame_bracket(0, 2);
        assert_eq!(br, vec![Scalar::zero(), qi(-1, 2), Scalar::zero(), qi(-1, 2)]);
    }

    #[test]
    fn j_squares() {
        let b = kodaira();
        for k in 0..=4 {
            let j = b.j_matrix(k);
            let sign = if k % 2 == 0 { q(1, 1) } else { q(-1, 1) };
            assert_eq!(j.mul(&j), Matrix::identity(j.rows()).scale(&sign));
        }
    }
}
