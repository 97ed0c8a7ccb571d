//! Exterior algebra over a fixed coframe of rank `2n`.
//!
//! A [`Form`] is a finite sum of basis monomials `x^{i1} ^ ... ^ x^{ik}` with
//! `i1 < ... < ik`. The generators are whatever coframe the caller has in mind:
//! the real invariant coframe `e^1..e^{2n}` or the complex frame
//! `phi^1..phi^n, phibar^1..phibar^n`. The algebra is the same in both cases.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, BitXor, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A strictly increasing multi-index, stored as a bit set (bit `i` = generator `i`, 0-based).
///
/// Ordered first by length, then lexicographically on the increasing sequence.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(pub u32);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    pub fn from_indices(idx: &[usize]) -> Option<Self> {
        let mut mask = 0u32;
        for w in idx.windows(2) {
            if w[0] >= w[1] {
                return None;
            }
        }
        for &i in idx {
            mask |= 1 << i;
        }
        Some(MultiIndex(mask))
    }

    pub fn single(i: usize) -> Self {
        MultiIndex(1 << i)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(i)
            }
        })
    }

    /// Sign and product of `self ^ other`; `None` when they share an index.
    pub fn wedge(self, other: MultiIndex) -> Option<(bool, MultiIndex)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut inversions = 0u32;
        for j in other.indices() {
            inversions += (self.0 >> (j + 1)).count_ones();
        }
        Some((inversions % 2 == 1, MultiIndex(self.0 | other.0)))
    }

    /// All multi-indices of length `k` in `0..dim`, in lexicographic order.
    pub fn all(dim: usize, k: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        fn rec(start: usize, dim: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
            if cur.len() == k {
                out.push(MultiIndex::from_indices(cur).unwrap());
                return;
            }
            for i in start..dim {
                if dim - i < k - cur.len() {
                    break;
                }
                cur.push(i);
                rec(i + 1, dim, k, cur, out);
                cur.pop();
            }
        }
        rec(0, dim, k, &mut cur, &mut out);
        out
    }

    pub fn full(dim: usize) -> MultiIndex {
        MultiIndex(((1u64 << dim) - 1) as u32)
    }

    pub fn complement(self, dim: usize) -> MultiIndex {
        MultiIndex(!self.0 & MultiIndex::full(dim).0)
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.len().cmp(&other.len()) {
            Ordering::Equal => {}
            o => return o,
        }
        let x = self.0 ^ other.0;
        if x == 0 {
            return Ordering::Equal;
        }
        let low = x & x.wrapping_neg();
        if self.0 & low != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.indices().map(|i| (i + 1).to_string()).collect();
        write!(f, "[{}]", v.join(","))
    }
}

/// Ring operations a form coefficient needs.
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign_ref(&mut self, o: &Self);
    fn mul_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn scale(&self, s: &Scalar) -> Self;
}

impl Coefficient for Scalar {
    fn zero() -> Self {
        <Scalar as Zero>::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign_ref(&mut self, o: &Self) {
        *self += o;
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn scale(&self, s: &Scalar) -> Self {
        self * s
    }
}

/// A homogeneous element of the exterior algebra on `dim` generators.
#[derive(Clone, PartialEq)]
pub struct Form<C = Scalar> {
    dim: usize,
    degree: usize,
    terms: BTreeMap<MultiIndex, C>,
}

impl<C: Coefficient> Form<C> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Form { dim, degree, terms: BTreeMap::new() }
    }

    /// The monomial `x^I` with coefficient `c`.
    pub fn monomial(dim: usize, idx: MultiIndex, c: C) -> Self {
        let mut f = Form::zero(dim, idx.len());
        f.add_term(idx, c);
        f
    }

    pub fn from_terms(dim: usize, degree: usize, terms: impl IntoIterator<Item = (MultiIndex, C)>) -> Self {
        let mut f = Form::zero(dim, degree);
        for (i, c) in terms {
            f.add_term(i, c);
        }
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, idx: MultiIndex) -> C {
        self.terms.get(&idx).cloned().unwrap_or_else(C::zero)
    }

    /// Adds `c * x^idx`, keeping the map free of zero entries.
    pub fn add_term(&mut self, idx: MultiIndex, c: C) {
        assert_eq!(idx.len(), self.degree, "monomial length must equal the form degree");
        assert!(idx.0 >> self.dim == 0, "index out of range for dimension {}", self.dim);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&idx) {
            Some(v) => {
                v.add_assign_ref(&c);
                if v.is_zero() {
                    self.terms.remove(&idx);
                }
            }
            None => {
                self.terms.insert(idx, c);
            }
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Form::from_terms(self.dim, self.degree, self.terms.iter().map(|(i, c)| (*i, c.scale(s))))
    }

    pub fn mul_coeff(&self, c: &C) -> Self {
        Form::from_terms(self.dim, self.degree, self.terms.iter().map(|(i, v)| (*i, c.mul_ref(v))))
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Form<D> {
        Form::from_terms(self.dim, self.degree, self.terms.iter().map(|(i, c)| (*i, f(c))))
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        if self.is_zero() && self.degree != o.degree {
            return Ok(o.clone());
        }
        let mut out = self.clone();
        for (i, c) in &o.terms {
            out.add_term(*i, c.clone());
        }
        Ok(out)
    }

    fn check_compatible(&self, o: &Self) -> Result<()> {
        if self.dim != o.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: o.dim });
        }
        if self.degree != o.degree && !self.is_zero() && !o.is_zero() {
            return Err(Error::DegreeMismatch { expected: self.degree, found: o.degree });
        }
        Ok(())
    }

    /// Exterior product; graded commutative, associative, bilinear.
    pub fn wedge(&self, o: &Self) -> Result<Self> {
        if self.dim != o.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: o.dim });
        }
        let mut out = Form::zero(self.dim, self.degree + o.degree);
        if out.degree > self.dim {
            return Ok(out);
        }
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                if let Some((neg, m)) = a.wedge(*b) {
                    let c = ca.mul_ref(cb);
                    out.add_term(m, if neg { c.neg_ref() } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Algebra morphism sending generator `x^i` to the 1-form `images[i]`.
    pub fn substitute(&self, images: &[Form<C>]) -> Self {
        assert_eq!(images.len(), self.dim);
        let target_dim = images.first().map(|f| f.dim).unwrap_or(self.dim);
        let mut out = Form::zero(target_dim, self.degree);
        for (idx, c) in &self.terms {
            let mut prod = Form::monomial(target_dim, MultiIndex::EMPTY, c.clone());
            for i in idx.indices() {
                prod = &prod ^ &images[i];
            }
            for (m, v) in prod.terms {
                out.add_term(m, v);
            }
        }
        out
    }

    /// Splits off the terms accepted by `keep`.
    pub fn filter(&self, keep: impl Fn(MultiIndex) -> bool) -> Self {
        Form::from_terms(
            self.dim,
            self.degree,
            self.terms.iter().filter(|(i, _)| keep(**i)).map(|(i, c)| (*i, c.clone())),
        )
    }

    /// Coefficient vector in the lexicographic monomial basis of this degree.
    pub fn to_vector(&self) -> Vec<C> {
        MultiIndex::all(self.dim, self.degree).into_iter().map(|i| self.coeff(i)).collect()
    }

    pub fn from_vector(dim: usize, degree: usize, v: &[C]) -> Self {
        let basis = MultiIndex::all(dim, degree);
        assert_eq!(basis.len(), v.len());
        Form::from_terms(dim, degree, basis.into_iter().zip(v.iter().cloned()))
    }
}

impl Form<Scalar> {
    /// The basis 1-form `x^i` (0-based).
    pub fn generator(dim: usize, i: usize) -> Self {
        Form::monomial(dim, MultiIndex::single(i), Scalar::one())
    }

    /// The basis monomial over 0-based `indices`, which need not be sorted.
    pub fn basis(dim: usize, indices: &[usize]) -> Self {
        let mut f = Form::monomial(dim, MultiIndex::EMPTY, Scalar::one());
        for &i in indices {
            f = &f ^ &Form::generator(dim, i);
        }
        f
    }

    pub fn constant(dim: usize, c: Scalar) -> Self {
        Form::monomial(dim, MultiIndex::EMPTY, c)
    }

    /// Coefficient-wise complex conjugation of the coefficients.
    pub fn conjugate(&self) -> Self {
        self.map_coeffs(|c| c.conj())
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.is_real())
    }

    /// Coefficient of the top monomial `x^{1...dim}`.
    pub fn top_coefficient(&self) -> Scalar {
        self.coeff(MultiIndex::full(self.dim))
    }

    /// Renders the form with 1-based generator names, e.g. `e1^e2 - (1/2 i) e3^e4`.
    pub fn render(&self, name: impl Fn(usize) -> String) -> String {
        render_terms(self.terms.iter().map(|(i, c)| (*i, c)), &name)
    }
}

pub(crate) fn render_terms<'a>(
    terms: impl Iterator<Item = (MultiIndex, &'a Scalar)>,
    name: &dyn Fn(usize) -> String,
) -> String {
    let mut s = String::new();
    for (k, (idx, c)) in terms.enumerate() {
        let (neg, mag) = c.sign_split();
        if k == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let mono = if idx.is_empty() {
            String::new()
        } else {
            idx.indices().map(name).collect::<Vec<_>>().join("^")
        };
        if mono.is_empty() {
            s.push_str(&mag.to_literal());
        } else if mag.is_one() {
            s.push_str(&mono);
        } else {
            s.push_str(&mag.to_literal());
            s.push(' ');
            s.push_str(&mono);
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

impl fmt::Display for Form<Scalar> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(|i| format!("e{}", i + 1)))
    }
}

impl<C: Coefficient> Add for &Form<C> {
    type Output = Form<C>;
    fn add(self, o: &Form<C>) -> Form<C> {
        self.try_add(o).expect("incompatible forms in addition")
    }
}

impl<C: Coefficient> Sub for &Form<C> {
    type Output = Form<C>;
    fn sub(self, o: &Form<C>) -> Form<C> {
        self.try_add(&-o).expect("incompatible forms in subtraction")
    }
}

impl<C: Coefficient> Neg for &Form<C> {
    type Output = Form<C>;
    fn neg(self) -> Form<C> {
        Form::from_terms(self.dim, self.degree, self.terms.iter().map(|(i, c)| (*i, c.neg_ref())))
    }
}

/// `a ^ b` is the wedge product; panics on a dimension mismatch.
impl<C: Coefficient> BitXor for &Form<C> {
    type Output = Form<C>;
    fn bitxor(self, o: &Form<C>) -> Form<C> {
        self.wedge(o).expect("wedge of forms of different dimension")
    }
}

impl<C: Coefficient> fmt::Debug for Form<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (i, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c:?}) x{i:?}")?;
        }
        Ok(())
    }
}

/// Sign of the permutation sorting `seq` (distinct entries), by counting inversions.
pub fn permutation_sign(seq: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 { 1 } else { -1 }
}
