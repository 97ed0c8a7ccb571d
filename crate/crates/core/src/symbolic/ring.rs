//! Commutative polynomials in derived function symbols.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};


use crate::scalar::Scalar;

/// A declared function symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionSymbol {
    pub name: String,
    pub real: bool,
    /// Bit `c` set when the frame derivation `c` annihilates the symbol.
    pub kills: u32,
    /// Index of the conjugate symbol (itself when real).
    pub conjugate: usize,
    /// Set for symbols created as the conjugate of a declared one.
    pub conjugate_of: Option<usize>,
}

impl FunctionSymbol {
    pub fn kills(&self, c: usize) -> bool {
        self.kills & (1 << c) != 0
    }
}

/// `V_{w_1} V_{w_2} ... V_{w_m} (f)`, outermost derivation first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DerivedSymbol {
    pub symbol: usize,
    pub word: Vec<u8>,
}

impl DerivedSymbol {
    pub fn plain(symbol: usize) -> Self {
        DerivedSymbol { symbol, word: Vec::new() }
    }
}

impl Ord for DerivedSymbol {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.word.len(), self.symbol, &self.word).cmp(&(o.word.len(), o.symbol, &o.word))
    }
}

impl PartialOrd for DerivedSymbol {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// A sorted multiset of derived symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub Vec<DerivedSymbol>);

impl Monomial {
    pub fn degree(&self) -> usize {
        self.0.len()
    }

    fn mul(&self, o: &Monomial) -> Monomial {
        let mut v = self.0.clone();
        v.extend(o.0.iter().cloned());
        v.sort();
        Monomial(v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.len().cmp(&o.0.len()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// A `Q(i)`-linear combination of monomials in derived symbols.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct DiffPoly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl DiffPoly {
    pub fn constant(c: Scalar) -> Self {
        let mut p = DiffPoly::default();
        p.add_term(Monomial::default(), c);
        p
    }

    pub fn derived(d: DerivedSymbol) -> Self {
        let mut p = DiffPoly::default();
        p.add_term(Monomial(vec![d]), Scalar::one());
        p
    }

    pub fn var(symbol: usize) -> Self {
        DiffPoly::derived(DerivedSymbol::plain(symbol))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Scalar::zero);
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, o: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &DiffPoly) -> DiffPoly {
        self.add(&o.scale(&-Scalar::one()))
    }

    pub fn mul(&self, o: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::default();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> DiffPoly {
        let mut out = DiffPoly::default();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * s);
        }
        out
    }

    /// The constant term when the polynomial has no symbols.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&Monomial::default()).cloned(),
            _ => None,
        }
    }

    /// Substitutes each derived symbol by a polynomial.
    pub fn substitute(&self, f: &mut impl FnMut(&DerivedSymbol) -> DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::default();
        for (m, c) in &self.terms {
            let mut prod = DiffPoly::constant(c.clone());
            for d in &m.0 {
                prod = prod.mul(&f(d));
            }
            out = out.add(&prod);
        }
        out
    }

    /// Text rendering such as `−(i/2)·f·Vbar2(ubar) + f·s·Vbar1(s)`.
    pub fn render(&self, symbols: &[FunctionSymbol], n: usize) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = c.sign_split();
            match (k, neg) {
                (0, true) => s.push('−'),
                (0, false) => {}
                (_, true) => s.push_str(" − "),
                (_, false) => s.push_str(" + "),
            }
            let mut parts = Vec::new();
            if m.0.is_empty() {
                parts.push(mag.to_string());
            } else if !mag.is_one() {
                if mag.is_real() && mag.re.is_integer() {
                    parts.push(mag.to_string());
                } else {
                    parts.push(format!("({mag})"));
                }
            }
            parts.extend(m.0.iter().map(|d| render_derived(d, symbols, n)));
            s.push_str(&parts.join("·"));
        }
        s
    }
}

pub fn derivation_name(c: usize, n: usize) -> String {
    if c < n {
        format!("V{}", c + 1)
    } else {
        format!("Vbar{}", c - n + 1)
    }
}

pub fn render_derived(d: &DerivedSymbol, symbols: &[FunctionSymbol], n: usize) -> String {
    let mut s = symbols[d.symbol].name.clone();
    for &c in d.word.iter().rev() {
        s = format!("{}({s})", derivation_name(c as usize, n));
    }
    s
}

impl crate::exterior::Coefficient for DiffPoly {
    fn zero() -> Self {
        DiffPoly::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_assign_ref(&mut self, o: &Self) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn neg_ref(&self) -> Self {
        self.scale(&-Scalar::one())
    }
    fn scale(&self, s: &Scalar) -> Self {
        DiffPoly::scale(self, s)
    }
}

impl fmt::Debug for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let syms: Vec<String> = m.0.iter().map(|d| format!("s{}{:?}", d.symbol, d.word)).collect();
                format!("({c}){}", syms.join("*"))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    fn table() -> Vec<FunctionSymbol> {
        let mk = |name: &str, i: usize| FunctionSymbol { name: name.into(), real: true, kills: 0, conjugate: i, conjugate_of: None };
        vec![mk("f", 0), mk("s", 1), mk("ubar", 2)]
    }

    #[test]
    fn render_orders_by_degree() {
        let f = DiffPoly::var(0);
        let s = DiffPoly::var(1);
        let v1s = DiffPoly::derived(DerivedSymbol { symbol: 1, word: vec![2] });
        let v2u = DiffPoly::derived(DerivedSymbol { symbol: 2, word: vec![3] });
        let p = f.mul(&s).mul(&v1s).add(&f.mul(&v2u).scale(&qi(-1, 2)));
        assert_eq!(p.render(&table(), 2), "−(i/2)·f·Vbar2(ubar) + f·s·Vbar1(s)");
    }

    #[test]
    fn ring_identities() {
        let f = DiffPoly::var(0);
        let s = DiffPoly::var(1);
        let a = f.add(&s);
        let sq = a.mul(&a);
        let expected = f.mul(&f).add(&f.mul(&s).scale(&Scalar::from_int(2))).add(&s.mul(&s));
        assert_eq!(sq, expected);
        assert!(a.sub(&a).terms.is_empty());
    }
}
