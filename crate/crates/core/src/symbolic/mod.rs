//! Forms whose coefficients are functions, handled symbolically.
//!
//! Function symbols are acted on by the complex frame derivations `V_a`, `Vbar_a`
//! dual to `phi^a`, `phibar^a`. Derivation words are normal ordered with the
//! commutators of the frame, so two expressions are equal exactly when their
//! normal forms agree. Forms are stored in theta coordinates.

mod ring;

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_traits::{One, Zero};

pub use ring::{derivation_name, render_derived, DerivedSymbol, DiffPoly, FunctionSymbol, Monomial};

use crate::bigraded::Bigrading;
use crate::error::{Error, Result};
use crate::exterior::{Form, MultiIndex};
use crate::scalar::Scalar;

pub type FunctionForm = Form<DiffPoly>;

/// Which symbols fill the metric pattern
/// `2 omega = i a^2 phi^{1 1bar} + i b^2 phi^{2 2bar} + u phi^{1 2bar} - ubar phi^{2 1bar}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricPattern {
    pub name: String,
    pub a: String,
    pub b: String,
    pub u: String,
}

#[derive(Debug)]
pub struct SymbolicFrame {
    b: Bigrading,
    n: usize,
    /// `brackets[x][y]` = `[V_x, V_y]` in frame coordinates.
    brackets: Vec<Vec<Vec<Scalar>>>,
    symbols: Vec<FunctionSymbol>,
    memo: Mutex<HashMap<(usize, Vec<u8>), DiffPoly>>,
}

fn conj_letter(c: usize, n: usize) -> usize {
    if c < n {
        c + n
    } else {
        c - n
    }
}

impl SymbolicFrame {
    pub fn new(b: &Bigrading) -> Self {
        let dim = b.dim();
        let brackets = (0..dim).map(|x| (0..dim).map(|y| b.frame_bracket(x, y)).collect()).collect();
        SymbolicFrame { b: b.clone(), n: b.n(), brackets, symbols: Vec::new(), memo: Mutex::new(HashMap::new()) }
    }

    pub fn bigrading(&self) -> &Bigrading {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.b.dim()
    }

    pub fn symbols(&self) -> &[FunctionSymbol] {
        &self.symbols
    }

    pub fn symbol(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn var(&self, name: &str) -> Result<DiffPoly> {
        self.symbol(name).map(DiffPoly::var).ok_or_else(|| Error::Usage(format!("undeclared function `{name}`")))
    }

    /// Frame derivation index of a name like `V1` or `Vbar2`.
    pub fn derivation(&self, name: &str) -> Option<usize> {
        (0..self.dim()).find(|&c| derivation_name(c, self.n) == name)
    }

    /// Declares a function symbol annihilated by the derivations in `kills`.
    ///
    /// A complex symbol also declares its conjugate `<name>bar`.
    pub fn declare(&mut self, name: &str, real: bool, kills: &[usize]) -> Result<usize> {
        let dim = self.dim();
        if self.symbol(name).is_some() {
            return Err(Error::BadFunction(format!("`{name}` declared twice")));
        }
        let mut mask = 0u32;
        for &c in kills {
            if c >= dim {
                return Err(Error::BadFunction(format!("derivation index {c} out of range")));
            }
            mask |= 1 << c;
        }
        let conj_mask = (0..dim).filter(|&c| mask & (1 << c) != 0).fold(0u32, |m, c| m | 1 << conj_letter(c, self.n));
        if real && conj_mask != mask {
            return Err(Error::BadFunction(format!("real function `{name}` needs a conjugation-closed kill set")));
        }
        for x in 0..dim {
            for y in 0..dim {
                if mask & (1 << x) == 0 || mask & (1 << y) == 0 {
                    continue;
                }
                if self.brackets[x][y].iter().enumerate().any(|(c, v)| !v.is_zero() && mask & (1 << c) == 0) {
                    return Err(Error::BadFunction(format!(
                        "kill set of `{name}` is not closed under brackets: [{}, {}]",
                        derivation_name(x, self.n),
                        derivation_name(y, self.n)
                    )));
                }
            }
        }
        let id = self.symbols.len();
        if real {
            self.symbols.push(FunctionSymbol { name: name.into(), real, kills: mask, conjugate: id, conjugate_of: None });
        } else {
            let bar = format!("{name}bar");
            if self.symbol(&bar).is_some() {
                return Err(Error::BadFunction(format!("`{bar}` declared twice")));
            }
            self.symbols.push(FunctionSymbol { name: name.into(), real, kills: mask, conjugate: id + 1, conjugate_of: None });
            self.symbols.push(FunctionSymbol { name: bar, real, kills: conj_mask, conjugate: id, conjugate_of: Some(id) });
        }
        Ok(id)
    }

    fn rank(&self, symbol: usize, c: u8) -> (bool, u8) {
        (self.symbols[symbol].kills(c as usize), c)
    }

    /// Normal form of `V_{w_1} ... V_{w_m} (symbol)`.
    pub fn apply_word(&self, symbol: usize, word: &[u8]) -> DiffPoly {
        if word.is_empty() {
            return DiffPoly::var(symbol);
        }
        if self.symbols[symbol].kills(*word.last().unwrap() as usize) {
            return DiffPoly::default();
        }
        let key = (symbol, word.to_vec());
        if let Some(p) = self.memo.lock().unwrap().get(&key) {
            return p.clone();
        }
        let out = match (0..word.len() - 1).find(|&i| self.rank(symbol, word[i]) > self.rank(symbol, word[i + 1])) {
            None => DiffPoly::derived(DerivedSymbol { symbol, word: word.to_vec() }),
            Some(i) => {
                let (x, y) = (word[i] as usize, word[i + 1] as usize);
                let mut swapped = word.to_vec();
                swapped.swap(i, i + 1);
                let mut acc = self.apply_word(symbol, &swapped);
                for (c, k) in self.brackets[x][y].iter().enumerate() {
                    if k.is_zero() {
                        continue;
                    }
                    let mut w = word[..i].to_vec();
                    w.push(c as u8);
                    w.extend_from_slice(&word[i + 2..]);
                    acc = acc.add(&self.apply_word(symbol, &w).scale(k));
                }
                acc
            }
        };
        self.memo.lock().unwrap().insert(key, out.clone());
        out
    }

    /// `V_c` applied to a polynomial, by the Leibniz rule.
    pub fn derive(&self, c: usize, p: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::default();
        for (m, coef) in p.terms() {
            for (i, d) in m.0.iter().enumerate() {
                let mut word = vec![c as u8];
                word.extend_from_slice(&d.word);
                let dd = self.apply_word(d.symbol, &word);
                if dd.is_zero() {
                    continue;
                }
                let rest: Vec<DerivedSymbol> = m.0.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| x.clone()).collect();
                let mut rest_poly = DiffPoly::constant(coef.clone());
                for r in rest {
                    rest_poly = rest_poly.mul(&DiffPoly::derived(r));
                }
                out = out.add(&rest_poly.mul(&dd));
            }
        }
        out
    }

    pub fn conjugate_poly(&self, p: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::default();
        for (m, c) in p.terms() {
            let mut prod = DiffPoly::constant(c.conj());
            for d in &m.0 {
                let word: Vec<u8> = d.word.iter().map(|&l| conj_letter(l as usize, self.n) as u8).collect();
                prod = prod.mul(&self.apply_word(self.symbols[d.symbol].conjugate, &word));
            }
            out = out.add(&prod);
        }
        out
    }

    /// Theta-coordinate form with constant coefficients.
    pub fn lift(&self, a: &Form) -> FunctionForm {
        self.b.frame().to_theta(a).map_coeffs(|c| DiffPoly::constant(c.clone()))
    }

    /// `h theta^I` for 1-based `phi` indices and `phibar` indices.
    pub fn monomial(&self, phis: &[usize], phibars: &[usize], h: DiffPoly) -> FunctionForm {
        let mut idx: Vec<usize> = phis.iter().map(|a| a - 1).collect();
        idx.extend(phibars.iter().map(|a| a - 1 + self.n));
        let basis = Form::basis(self.dim(), &idx);
        basis.map_coeffs(|c| h.scale(c))
    }

    pub fn conjugate(&self, a: &FunctionForm) -> FunctionForm {
        let mut out = Form::zero(self.dim(), a.degree());
        for (m, c) in a.terms() {
            let idx: Vec<usize> = m.indices().map(|i| conj_letter(i, self.n)).collect();
            let mono = Form::basis(self.dim(), &idx);
            let cc = self.conjugate_poly(c);
            for (mm, s) in mono.terms() {
                out.add_term(*mm, cc.scale(s));
            }
        }
        out
    }

    /// `d(h theta^I) = sum_c V_c(h) theta^c ^ theta^I + h d theta^I`.
    pub fn d(&self, a: &FunctionForm) -> FunctionForm {
        let dim = self.dim();
        let f = self.b.frame();
        let lie = self.b.lie();
        let mut out = Form::zero(dim, a.degree() + 1);
        if a.degree() >= dim {
            return out;
        }
        for (m, h) in a.terms() {
            for c in 0..dim {
                let vh = self.derive(c, h);
                if vh.is_zero() {
                    continue;
                }
                if let Some((neg, mm)) = MultiIndex::single(c).wedge(*m) {
                    out.add_term(mm, if neg { vh.scale(&-Scalar::one()) } else { vh });
                }
            }
            let dm = f.to_theta(&lie.differential(&f.from_theta(&Form::monomial(dim, *m, Scalar::one()))).unwrap());
            for (mm, s) in dm.terms() {
                out.add_term(*mm, h.scale(s));
            }
        }
        out
    }

    /// The `(p, q)` component.
    pub fn project(&self, a: &FunctionForm, p: usize, q: usize) -> FunctionForm {
        let f = self.b.frame();
        a.filter(|m| f.bidegree(m) == (p, q))
    }

    /// `dbar` of a form of pure type.
    pub fn dbar(&self, a: &FunctionForm) -> Result<FunctionForm> {
        if a.is_zero() {
            return Ok(Form::zero(self.dim(), a.degree() + 1));
        }
        let (p, q) = self.pure_bidegree(a).ok_or(Error::MixedBidegree)?;
        Ok(self.project(&self.d(a), p, q + 1))
    }

    /// Evaluates at constant functions: plain symbols take the given values, every
    /// derivative vanishes. Returns a real-coframe form.
    pub fn instantiate(&self, a: &FunctionForm, values: &BTreeMap<String, Scalar>) -> Result<Form> {
        let mut t = Form::zero(self.dim(), a.degree());
        for (m, h) in a.terms() {
            t.add_term(*m, self.instantiate_poly(h, values)?);
        }
        Ok(self.b.frame().from_theta(&t))
    }

    pub fn instantiate_poly(&self, p: &DiffPoly, values: &BTreeMap<String, Scalar>) -> Result<Scalar> {
        let mut err = None;
        let v = p.substitute(&mut |d: &DerivedSymbol| {
            if !d.word.is_empty() {
                return DiffPoly::default();
            }
            let sym = &self.symbols[d.symbol];
            let (base, conj) = match sym.conjugate_of {
                Some(b) => (&self.symbols[b], true),
                None => (sym, false),
            };
            match values.get(&base.name) {
                Some(x) if sym.real && !x.is_real() => {
                    err = Some(Error::Usage(format!("real function `{}` given a complex value", base.name)));
                    DiffPoly::default()
                }
                Some(x) => DiffPoly::constant(if conj { x.conj() } else { x.clone() }),
                None => {
                    err = Some(Error::Usage(format!("no value for `{}`", base.name)));
                    DiffPoly::default()
                }
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        v.as_constant().ok_or_else(|| Error::Internal("instantiation left free symbols".into()))
    }

    /// The fundamental form of a metric pattern, in theta coordinates (complex dimension 2).
    pub fn pattern_omega(&self, pat: &MetricPattern) -> Result<FunctionForm> {
        if self.n != 2 {
            return Err(Error::Unsupported("metric patterns are defined in complex dimension 2".into()));
        }
        let a = self.var(&pat.a)?;
        let b = self.var(&pat.b)?;
        let u = self.var(&pat.u)?;
        let ubar = self.conjugate_poly(&u);
        let half = Scalar::from_ratio(1, 2);
        let i_half = Scalar::gaussian(0, 1, 1, 2);
        let mut w = self.monomial(&[1], &[1], a.mul(&a).scale(&i_half));
        w = &w + &self.monomial(&[2], &[2], b.mul(&b).scale(&i_half));
        w = &w + &self.monomial(&[1], &[2], u.scale(&half));
        w = &w - &self.monomial(&[2], &[1], ubar.scale(&half));
        Ok(w)
    }

    fn pure_bidegree(&self, a: &FunctionForm) -> Option<(usize, usize)> {
        let mut it = a.terms().map(|(m, _)| self.b.frame().bidegree(*m));
        let first = it.next()?;
        it.all(|x| x == first).then_some(first)
    }

    /// Star of a primitive pure-type form from the closed formula
    /// `* psi = (-1)^{k(k+1)/2} / (n-k)! i^p (-i)^q omega^{n-k} ^ psi`.
    pub fn primitive_star(&self, omega: &FunctionForm, psi: &FunctionForm) -> Result<FunctionForm> {
        let dim = self.dim();
        if psi.is_zero() {
            return Ok(Form::zero(dim, dim - psi.degree()));
        }
        let (p, q) = self.pure_bidegree(psi).ok_or(Error::MixedBidegree)?;
        let k = p + q;
        if k > self.n {
            return Err(Error::NotPrimitive);
        }
        let mut test = psi.clone();
        for _ in 0..=(self.n - k) {
            test = omega.wedge(&test)?;
        }
        if !test.is_zero() {
            return Err(Error::NotPrimitive);
        }
        let sign = if (k * (k + 1) / 2) % 2 == 0 { 1 } else { -1 };
        let fact: i64 = (1..=(self.n - k) as i64).product();
        let c = &Scalar::from_ratio(sign, fact) * &(&Scalar::i_pow(p as i64) * &Scalar::i_pow(-(q as i64)));
        let mut x = psi.scale(&c);
        for _ in 0..(self.n - k) {
            x = omega.wedge(&x)?;
        }
        Ok(x)
    }

    /// Renders a theta-coordinate function form, e.g. `(−V2(f))·phi1^phi2 + ...`.
    pub fn render_form(&self, a: &FunctionForm) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let n = self.n;
        let parts: Vec<String> = a
            .terms()
            .map(|(m, h)| {
                let mono: Vec<String> = m
                    .indices()
                    .map(|i| if i < n { format!("phi{}", i + 1) } else { format!("phibar{}", i - n + 1) })
                    .collect();
                format!("({})·{}", h.render(&self.symbols, n), mono.join("^"))
            })
            .collect();
        parts.join(" + ")
    }

    pub fn render(&self, p: &DiffPoly) -> String {
        p.render(&self.symbols, self.n)
    }
}

/// Top coefficient of `d * sigma` for `sigma = f phi^1` with `f` constant.
#[derive(Clone, Debug)]
pub struct DstarSigma {
    pub star_sigma: FunctionForm,
    pub coefficient: DiffPoly,
    pub text: String,
}

/// Computes `d * (f phi^1)` under a metric pattern, with `f` declared as a constant.
pub fn dstar_sigma(frame: &SymbolicFrame, pat: &MetricPattern, f: &str) -> Result<DstarSigma> {
    let fid = frame.symbol(f).ok_or_else(|| Error::Usage(format!("undeclared function `{f}`")))?;
    if frame.symbols()[fid].kills != (1u32 << frame.dim()) - 1 {
        return Err(Error::Usage(format!("`{f}` must be declared constant (kills all)")));
    }
    let omega = frame.pattern_omega(pat)?;
    let sigma = frame.monomial(&[1], &[], DiffPoly::var(fid));
    let star_sigma = frame.primitive_star(&omega, &sigma)?;
    let top = frame.d(&star_sigma);
    let coefficient = top.coeff(MultiIndex::full(frame.dim()));
    let text = frame.render(&coefficient);
    Ok(DstarSigma { star_sigma, coefficient, text })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LiePresentation;
    use crate::scalar::{q, qi};

    fn kodaira() -> Bigrading {
        let l = LiePresentation::from_constants("kodaira", 4, &[(4, 2, 3, 1, 1)]).unwrap();
        let phi1 = &Form::generator(4, 1) + &Form::generator(4, 2).scale(&Scalar::i());
        let phi2 = &Form::generator(4, 3) + &Form::generator(4, 0).scale(&Scalar::i());
        Bigrading::install(l, vec![phi1, phi2]).unwrap()
    }

    #[test]
    fn kodaira_commutator() {
        let mut fr = SymbolicFrame::new(&kodaira());
        let f = fr.declare("f", false, &[]).unwrap();
        let lhs = fr.apply_word(f, &[2, 0]);
        let expected = fr
            .apply_word(f, &[0, 2])
            .add(&fr.apply_word(f, &[1]).scale(&qi(1, 2)))
            .add(&fr.apply_word(f, &[3]).scale(&qi(1, 2)));
        assert_eq!(lhs, expected);
    }

    #[test]
    fn constants_are_killed() {
        let mut fr = SymbolicFrame::new(&kodaira());
        let u = fr.declare("u", false, &[0, 1, 2, 3]).unwrap();
        assert!(fr.apply_word(u, &[3]).is_zero());
        assert!(fr.apply_word(u + 1, &[0]).is_zero());
    }

    #[test]
    fn kills_must_be_bracket_closed() {
        let mut fr = SymbolicFrame::new(&kodaira());
        assert!(fr.declare("g", false, &[0, 2]).is_err());
        assert!(fr.declare("h", false, &[1, 3]).is_ok());
    }

    fn nil4() -> Bigrading {
        let l = LiePresentation::from_constants("nil4", 4, &[(3, 1, 2, -1, 1), (4, 1, 3, -1, 1)]).unwrap();
        let phi1 = &Form::generator(4, 0) + &Form::generator(4, 1).scale(&Scalar::i());
        let phi2 = &Form::generator(4, 2) + &Form::generator(4, 3).scale(&Scalar::i());
        Bigrading::install(l, vec![phi1, phi2]).unwrap()
    }

    fn rxsol3() -> Bigrading {
        let l = LiePresentation::from_constants("rxsol3", 4, &[(3, 1, 3, -1, 1), (4, 1, 4, 1, 1)]).unwrap();
        let phi1 = &Form::generator(4, 0) + &Form::generator(4, 1).scale(&Scalar::i());
        let phi2 = &Form::generator(4, 2) + &Form::generator(4, 3).scale(&Scalar::i());
        Bigrading::install(l, vec![phi1, phi2]).unwrap()
    }

    // Same algebra with the signs that reproduce `d Phi^2 = (Phi^{1 2bar} + Phi^{1bar 2bar}) / 2`.
    fn rxsol3_flipped() -> Bigrading {
        let l = LiePresentation::from_constants("rxsol3", 4, &[(3, 1, 3, 1, 1), (4, 1, 4, -1, 1)]).unwrap();
        let phi1 = &Form::generator(4, 0) + &Form::generator(4, 1).scale(&Scalar::i());
        let phi2 = &Form::generator(4, 2) + &Form::generator(4, 3).scale(&Scalar::i());
        Bigrading::install(l, vec![phi1, phi2]).unwrap()
    }

    fn generic(b: &Bigrading) -> SymbolicFrame {
        let mut fr = SymbolicFrame::new(b);
        fr.declare("f", false, &[]).unwrap();
        fr.declare("g", false, &[]).unwrap();
        fr
    }

    fn pattern(a: &str, b: &str) -> MetricPattern {
        MetricPattern { name: "p".into(), a: a.into(), b: b.into(), u: "u".into() }
    }

    fn metric_frame(b: &Bigrading) -> SymbolicFrame {
        let mut fr = SymbolicFrame::new(b);
        fr.declare("f", false, &[0, 1, 2, 3]).unwrap();
        fr.declare("r", true, &[]).unwrap();
        fr.declare("s", true, &[]).unwrap();
        fr.declare("u", false, &[]).unwrap();
        fr
    }

    #[test]
    fn d_squared_vanishes() {
        for b in [kodaira(), nil4(), rxsol3()] {
            let fr = generic(&b);
            let f = fr.var("f").unwrap();
            let g = fr.var("g").unwrap();
            let x = fr.monomial(&[], &[], f.mul(&g));
            assert!(fr.d(&fr.d(&x)).is_zero());
            let y = &fr.monomial(&[1], &[], f.clone()) + &fr.monomial(&[2], &[], g.clone());
            assert!(fr.d(&fr.d(&y)).is_zero());
            let z = fr.monomial(&[1], &[2], fr.derive(1, &f));
            assert!(fr.d(&fr.d(&z)).is_zero());
        }
    }

    // An independent rewriting order: resolve the last inversion first, no memo.
    fn slow_order(fr: &SymbolicFrame, sym: usize, word: &[u8]) -> DiffPoly {
        if word.is_empty() {
            return DiffPoly::var(sym);
        }
        if fr.symbols[sym].kills(*word.last().unwrap() as usize) {
            return DiffPoly::default();
        }
        match (0..word.len() - 1).rev().find(|&i| fr.rank(sym, word[i]) > fr.rank(sym, word[i + 1])) {
            None => DiffPoly::derived(DerivedSymbol { symbol: sym, word: word.to_vec() }),
            Some(i) => {
                let mut sw = word.to_vec();
                sw.swap(i, i + 1);
                let mut acc = slow_order(fr, sym, &sw);
                for (c, k) in fr.brackets[word[i] as usize][word[i + 1] as usize].iter().enumerate() {
                    let mut w = word[..i].to_vec();
                    w.push(c as u8);
                    w.extend_from_slice(&word[i + 2..]);
                    acc = acc.add(&slow_order(fr, sym, &w).scale(k));
                }
                acc
            }
        }
    }

    #[test]
    fn normal_form_is_confluent() {
        for b in [kodaira(), nil4(), rxsol3()] {
            let mut fr = SymbolicFrame::new(&b);
            fr.declare("f", false, &[]).unwrap();
            fr.declare("h", true, &[1, 3]).ok();
            for sym in 0..fr.symbols.len() {
                for len in 1..=3u32 {
                    for code in 0..4usize.pow(len) {
                        let word: Vec<u8> = (0..len).map(|j| ((code >> (2 * j)) & 3) as u8).collect();
                        assert_eq!(fr.apply_word(sym, &word), slow_order(&fr, sym, &word), "{word:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn kodaira_d_sigma() {
        let fr = generic(&kodaira());
        let f = fr.var("f").unwrap();
        let g = fr.var("g").unwrap();
        let sigma = &fr.monomial(&[1], &[], f.clone()) + &fr.monomial(&[2], &[], g.clone());
        let v = |c: usize, p: &DiffPoly| fr.derive(c, p);
        let m = |a: &[usize], b: &[usize], h: DiffPoly| fr.monomial(a, b, h);
        let one = -Scalar::one();
        let terms = [
            m(&[1, 2], &[], v(1, &f).scale(&one)),
            m(&[1], &[1], v(2, &f).scale(&one)),
            m(&[1], &[2], v(3, &f).scale(&one)),
            m(&[1, 2], &[], v(0, &g)),
            m(&[2], &[1], v(2, &g).scale(&one)),
            m(&[2], &[2], v(3, &g).scale(&one)),
            m(&[1], &[1], g.scale(&qi(1, 2))),
        ];
        let expected = terms.iter().fold(Form::zero(4, 2), |acc, t| &acc + t);
        assert_eq!(fr.d(&sigma), expected);
    }

    #[test]
    fn dbar_systems() {
        let one = -Scalar::one();
        for (b, extra) in [
            (nil4(), vec![(1usize, 1usize, true, qi(-1, 2)), (1, 2, true, qi(-1, 4)), (2, 1, true, qi(1, 4))]),
            (rxsol3(), vec![(1, 2, true, q(-1, 2))]),
            (rxsol3_flipped(), vec![(1, 2, true, q(1, 2))]),
        ] {
            let fr = generic(&b);
            let f = fr.var("f").unwrap();
            let g = fr.var("g").unwrap();
            let sigma = &fr.monomial(&[1], &[], f.clone()) + &fr.monomial(&[2], &[], g.clone());
            let mut expected = Form::zero(4, 2);
            for (a, h) in [(1, &f), (2, &g)] {
                for c in 1..=2 {
                    expected = &expected + &fr.monomial(&[a], &[c], fr.derive(c + 1, h).scale(&one));
                }
            }
            for (a, c, _, k) in extra {
                expected = &expected + &fr.monomial(&[a], &[c], g.scale(&k));
            }
            assert_eq!(fr.dbar(&sigma).unwrap(), expected);
        }
    }

    #[test]
    fn dstar_sigma_display() {
        for b in [nil4(), rxsol3()] {
            let fr = metric_frame(&b);
            let r = dstar_sigma(&fr, &pattern("r", "s"), "f").unwrap();
            assert_eq!(r.text, "−(i/2)·f·Vbar2(ubar) + f·s·Vbar1(s)");
        }
        let fr = metric_frame(&kodaira());
        let r = dstar_sigma(&fr, &pattern("s", "r"), "f").unwrap();
        assert_eq!(r.text, "−(i/2)·f·Vbar2(ubar) + f·r·Vbar1(r)");
    }

    #[test]
    fn reduced_criterion() {
        let mut fr = SymbolicFrame::new(&nil4());
        fr.declare("f", false, &[0, 1, 2, 3]).unwrap();
        fr.declare("r", true, &[0, 1, 2, 3]).unwrap();
        fr.declare("s", true, &[1, 3]).unwrap();
        fr.declare("u", false, &[0, 1, 2, 3]).unwrap();
        let r = dstar_sigma(&fr, &pattern("r", "s"), "f").unwrap();
        assert_eq!(r.text, "f·s·Vbar1(s)");
    }

    #[test]
    fn instantiation_matches_star() {
        use crate::hodge::Hermitian;
        for (b, pat) in [(kodaira(), pattern("s", "r")), (nil4(), pattern("r", "s")), (rxsol3(), pattern("r", "s"))] {
            let fr = metric_frame(&b);
            let vals: BTreeMap<String, Scalar> = [
                ("f", Scalar::gaussian(2, 1, -1, 3)),
                ("r", q(3, 2)),
                ("s", q(2, 1)),
                ("u", Scalar::gaussian(1, 2, 1, 3)),
            ]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
            let omega = fr.pattern_omega(&pat).unwrap();
            let h = Hermitian::install(b.clone(), fr.instantiate(&omega, &vals).unwrap()).unwrap();
            let sigma = fr.monomial(&[1], &[], fr.var("f").unwrap());
            let star = fr.primitive_star(&omega, &sigma).unwrap();
            let lhs = fr.instantiate(&star, &vals).unwrap();
            let rhs = h.star(&fr.instantiate(&sigma, &vals).unwrap());
            assert_eq!(lhs, rhs);
        }
    }
}
