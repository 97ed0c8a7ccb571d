//! Line-oriented manifold description files.
//!
//! ```text
//! # header comments are kept
//! manifold kodaira_primary
//! dim 4
//! param alpha = 1
//! d e4 = e2^e3
//! acs phi1 = e2 + (1 i) e3
//! metric std : 2omega = (1 i) phi1^phibar1 + (1 i) phi2^phibar2
//! function f kills V1 V2 Vbar1 Vbar2
//! function s real
//! pattern kod = s r u
//! ```
//!
//! Structure equations are given either for the real coframe (`d e<i> = ...`) or for
//! the (1,0)-coframe (`d phi<a> = ...`), never both.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bigraded::{Bigrading, ComplexCoframe};
use crate::error::{Error, Result};
use crate::exterior::{Form, MultiIndex};
use crate::hodge::Hermitian;
use crate::lie::{LiePresentation, ValidationReport};
use crate::scalar::Scalar;
use crate::symbolic::{MetricPattern, SymbolicFrame};

/// Which coframe a combination is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    Real,
    Complex,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricDecl {
    pub name: String,
    pub basis: Basis,
    /// `2 omega`, in the basis it was written in.
    pub two_omega: Form,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionDecl {
    pub name: String,
    pub real: bool,
    /// 0-based derivation indices: `V_a` is `a`, `Vbar_a` is `n + a`.
    pub kills: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ManifoldFile {
    pub header: Vec<String>,
    pub name: String,
    pub dim: usize,
    pub params: Vec<(String, BigRational)>,
    /// One 2-form per generator, in the basis given by `structure_basis`.
    pub structure: Vec<Form>,
    pub structure_basis: Basis,
    /// `phi^a` in the real coframe.
    pub acs: Vec<Form>,
    pub metrics: Vec<MetricDecl>,
    pub functions: Vec<FunctionDecl>,
    pub patterns: Vec<MetricPattern>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
}

struct Line<'a> {
    no: usize,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    _src: &'a str,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

fn lex(no: usize, src: &str) -> Result<Line<'_>> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && (chars[i] == '.' || chars[i] == 'e' && chars.get(i + 1).is_some_and(|x| x.is_ascii_digit() || *x == '-')) {
                return Err(err(no, i + 1, "non-rational literal; write numbers as p/q"));
            }
            let digits: String = chars[start..i].iter().collect();
            toks.push((Tok::Int(digits.parse().expect("digits")), col));
        } else if "/+-()^=:".contains(c) {
            toks.push((Tok::Sym(c), col));
            i += 1;
        } else {
            return Err(err(no, col, format!("unexpected character `{c}`")));
        }
    }
    Ok(Line { no, toks, pos: 0, end: chars.len() + 1, _src: src })
}

/// A generator in a monomial: `e<i>`, `phi<a>`, `phibar<a>` (0-based index).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Gen {
    E(usize),
    Phi(usize),
    PhiBar(usize),
}

fn split_indexed<'s>(s: &'s str, prefix: &str) -> Option<usize> {
    let rest = s.strip_prefix(prefix)?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) || rest.starts_with('0') {
        return None;
    }
    rest.parse().ok()
}

fn parse_gen(s: &str) -> Option<Gen> {
    if let Some(a) = split_indexed(s, "phibar") {
        Some(Gen::PhiBar(a - 1))
    } else if let Some(a) = split_indexed(s, "phi") {
        Some(Gen::Phi(a - 1))
    } else {
        split_indexed(s, "e").map(|i| Gen::E(i - 1))
    }
}

fn derivation_index(s: &str, n: usize) -> Option<usize> {
    if let Some(a) = split_indexed(s, "Vbar") {
        (a <= n).then(|| n + a - 1)
    } else {
        split_indexed(s, "V").and_then(|a| (a <= n).then(|| a - 1))
    }
}

fn is_identifier(s: &str) -> bool {
    !matches!(s, "i" | "real" | "kills" | "omega") && parse_gen(s).is_none()
}

impl Line<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        err(self.no, self.col(), msg)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn expect_end(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err("unexpected trailing input"))
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize)> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let out = (s.clone(), self.col());
                self.pos += 1;
                Ok(out)
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = v.clone();
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.err("expected a number")),
        }
    }

    fn usize_value(&mut self) -> Result<usize> {
        let col = self.col();
        let v = self.int()?;
        usize::try_from(v).map_err(|_| err(self.no, col, "number too large"))
    }

    fn rational(&mut self) -> Result<BigRational> {
        let num = self.int()?;
        if self.eat_sym('/') {
            let col = self.col();
            let den = self.int()?;
            if den.is_zero() {
                return Err(err(self.no, col, "zero denominator"));
            }
            Ok(BigRational::new(num, den))
        } else {
            Ok(BigRational::from_integer(num))
        }
    }

    fn signed_rational(&mut self) -> Result<BigRational> {
        let neg = self.eat_sym('-');
        let r = self.rational()?;
        Ok(if neg { -r } else { r })
    }

    /// `rat`, `rat i` or `i`.
    fn real_or_imag(&mut self) -> Result<Scalar> {
        if self.keyword("i") {
            return Ok(Scalar::i());
        }
        let r = self.rational()?;
        if self.keyword("i") {
            Ok(Scalar::new(BigRational::zero(), r))
        } else {
            Ok(Scalar::real(r))
        }
    }

    /// `(a+b i)` with either part optional.
    fn paren_scalar(&mut self) -> Result<Scalar> {
        self.expect_sym('(')?;
        let neg = self.eat_sym('-');
        let mut v = self.real_or_imag()?;
        if neg {
            v = -v;
        }
        while !self.eat_sym(')') {
            let neg = if self.eat_sym('+') {
                false
            } else if self.eat_sym('-') {
                true
            } else {
                return Err(self.err("expected `+`, `-` or `)`"));
            };
            let w = self.real_or_imag()?;
            v = if neg { &v - &w } else { &v + &w };
        }
        Ok(v)
    }

    fn coefficient(&mut self) -> Result<Option<Scalar>> {
        match self.peek() {
            Some(Tok::Sym('(')) => self.paren_scalar().map(Some),
            Some(Tok::Int(_)) => self.real_or_imag().map(Some),
            Some(Tok::Ident(s)) if s == "i" => self.real_or_imag().map(Some),
            _ => Ok(None),
        }
    }

    fn monomial(&mut self) -> Result<Vec<(Gen, usize)>> {
        let mut out = Vec::new();
        loop {
            let (name, col) = self.ident("a generator such as e1 or phi1")?;
            let g = parse_gen(&name).ok_or_else(|| err(self.no, col, format!("`{name}` is not a generator")))?;
            out.push((g, col));
            if !self.eat_sym('^') {
                return Ok(out);
            }
        }
    }

    /// A signed sum of `coefficient monomial` terms, or a lone `0`.
    fn combination(&mut self) -> Result<Vec<(Scalar, Vec<(Gen, usize)>, usize)>> {
        if self.peek() == Some(&Tok::Int(BigInt::zero())) && self.toks.len() == self.pos + 1 {
            self.pos += 1;
            return Ok(Vec::new());
        }
        let mut terms = Vec::new();
        let mut first = true;
        while !self.at_end() {
            let col = self.col();
            let neg = if self.eat_sym('-') {
                true
            } else if self.eat_sym('+') {
                false
            } else if first {
                false
            } else {
                return Err(self.err("expected `+` or `-`"));
            };
            first = false;
            let c = self.coefficient()?.unwrap_or_else(Scalar::one);
            let m = self.monomial()?;
            terms.push((if neg { -c } else { c }, m, col));
        }
        if terms.is_empty() {
            return Err(self.err("expected an expression"));
        }
        Ok(terms)
    }
}

struct Ctx {
    no: usize,
    dim: usize,
}

impl Ctx {
    fn n(&self) -> usize {
        self.dim / 2
    }

    fn real_form(&self, degree: usize, terms: Vec<(Scalar, Vec<(Gen, usize)>, usize)>) -> Result<Form> {
        let mut f: Form = Form::zero(self.dim, degree);
        for (c, m, col) in terms {
            if m.len() != degree {
                return Err(err(self.no, col, format!("expected a {degree}-form term")));
            }
            let mut idx = Vec::new();
            for (g, gcol) in m {
                match g {
                    Gen::E(i) if i < self.dim => {
                        if idx.last().is_some_and(|&p| p >= i) {
                            return Err(err(self.no, gcol, "indices must be strictly increasing"));
                        }
                        idx.push(i);
                    }
                    Gen::E(i) => return Err(err(self.no, gcol, format!("index e{} out of range 1..{}", i + 1, self.dim))),
                    _ => return Err(err(self.no, gcol, "expected a real generator e<i>")),
                }
            }
            let mi = MultiIndex::from_indices(&idx).expect("distinct");
            if !f.coeff(mi).is_zero() {
                return Err(err(self.no, col, "duplicate term"));
            }
            f.add_term(mi, c);
        }
        Ok(f)
    }

    /// Theta coordinates: `phi^a` is `a`, `phibar^a` is `n + a`.
    fn complex_form(&self, degree: usize, terms: Vec<(Scalar, Vec<(Gen, usize)>, usize)>, type11: bool) -> Result<Form> {
        let n = self.n();
        let mut f: Form = Form::zero(self.dim, degree);
        for (c, m, col) in terms {
            if m.len() != degree {
                return Err(err(self.no, col, format!("expected a {degree}-form term")));
            }
            let mut idx = Vec::new();
            for (g, gcol) in m {
                let i = match g {
                    Gen::Phi(a) if a < n => a,
                    Gen::PhiBar(a) if a < n => n + a,
                    Gen::Phi(a) | Gen::PhiBar(a) => {
                        return Err(err(self.no, gcol, format!("index {} out of range 1..{n}", a + 1)))
                    }
                    Gen::E(_) => return Err(err(self.no, gcol, "cannot mix e<i> with phi<a>")),
                };
                if idx.last().is_some_and(|&p| p >= i) {
                    return Err(err(self.no, gcol, "write phi before phibar, each with increasing index"));
                }
                idx.push(i);
            }
            if type11 && !(idx.len() == 2 && idx[0] < n && idx[1] >= n) {
                return Err(err(self.no, col, "expected phi<a>^phibar<b>"));
            }
            let mi = MultiIndex::from_indices(&idx).expect("distinct");
            if !f.coeff(mi).is_zero() {
                return Err(err(self.no, col, "duplicate term"));
            }
            f.add_term(mi, c);
        }
        Ok(f)
    }
}

fn is_complex_combo(terms: &[(Scalar, Vec<(Gen, usize)>, usize)]) -> bool {
    terms.first().is_some_and(|t| t.1.first().is_some_and(|g| !matches!(g.0, Gen::E(_))))
}

/// Parses a manifold description.
pub fn parse(text: &str) -> Result<ManifoldFile> {
    let mut header = Vec::new();
    let mut name: Option<String> = None;
    let mut dim: Option<usize> = None;
    let mut params: Vec<(String, BigRational)> = Vec::new();
    let mut structure: BTreeMap<usize, Form> = BTreeMap::new();
    let mut structure_basis: Option<Basis> = None;
    let mut acs: BTreeMap<usize, Form> = BTreeMap::new();
    let mut metrics: Vec<MetricDecl> = Vec::new();
    let mut functions: Vec<FunctionDecl> = Vec::new();
    let mut patterns: Vec<MetricPattern> = Vec::new();
    let mut last_line = 0;

    for (k, raw) in text.lines().enumerate() {
        let no = k + 1;
        last_line = no;
        let trimmed = raw.trim();
        if name.is_none() && trimmed.starts_with('#') {
            header.push(raw.trim_end().to_string());
            continue;
        }
        let mut line = lex(no, raw)?;
        if line.at_end() {
            continue;
        }
        let (kw, _) = line.ident("a directive")?;
        if kw != "manifold" && name.is_none() {
            return Err(err(no, 1, "the first directive must be `manifold <id>`"));
        }
        if !matches!(kw.as_str(), "manifold" | "dim") && dim.is_none() {
            return Err(err(no, 1, "`dim` must precede this directive"));
        }
        let ctx = Ctx { no, dim: dim.unwrap_or(0) };
        match kw.as_str() {
            "manifold" => {
                if name.is_some() {
                    return Err(err(no, 1, "duplicate `manifold` directive"));
                }
                let (id, col) = line.ident("a manifold name")?;
                if !is_identifier(&id) {
                    return Err(err(no, col, format!("`{id}` is reserved")));
                }
                name = Some(id);
            }
            "dim" => {
                if dim.is_some() {
                    return Err(err(no, 1, "duplicate `dim` directive"));
                }
                let col = line.col();
                let v = line.usize_value()?;
                if v == 0 || v % 2 != 0 || v > 16 {
                    return Err(err(no, col, "dimension must be even, between 2 and 16"));
                }
                dim = Some(v);
            }
            "param" => {
                let (id, col) = line.ident("a parameter name")?;
                if params.iter().any(|p| p.0 == id) {
                    return Err(err(no, col, format!("duplicate parameter `{id}`")));
                }
                line.expect_sym('=')?;
                let v = line.signed_rational()?;
                params.push((id, v));
            }
            "d" => {
                let (g, col) = line.ident("e<i> or phi<a>")?;
                let (basis, idx) = match parse_gen(&g) {
                    Some(Gen::E(i)) if i < ctx.dim => (Basis::Real, i),
                    Some(Gen::Phi(a)) if a < ctx.n() => (Basis::Complex, a),
                    Some(Gen::E(_)) | Some(Gen::Phi(_)) => return Err(err(no, col, format!("index of `{g}` out of range"))),
                    _ => return Err(err(no, col, "expected e<i> or phi<a>")),
                };
                if structure_basis.is_some_and(|b| b != basis) {
                    return Err(err(no, col, "cannot mix `d e` and `d phi` equations"));
                }
                structure_basis = Some(basis);
                if structure.contains_key(&idx) {
                    return Err(err(no, col, format!("duplicate equation for `{g}`")));
                }
                line.expect_sym('=')?;
                let terms = line.combination()?;
                let f = match basis {
                    Basis::Real => ctx.real_form(2, terms)?,
                    Basis::Complex => ctx.complex_form(2, terms, false)?,
                };
                structure.insert(idx, f);
            }
            "acs" => {
                let (g, col) = line.ident("phi<a>")?;
                let a = match parse_gen(&g) {
                    Some(Gen::Phi(a)) if a < ctx.n() => a,
                    _ => return Err(err(no, col, format!("expected phi1..phi{}", ctx.n()))),
                };
                if acs.contains_key(&a) {
                    return Err(err(no, col, format!("duplicate definition of `{g}`")));
                }
                line.expect_sym('=')?;
                let terms = line.combination()?;
                acs.insert(a, ctx.real_form(1, terms)?);
            }
            "metric" => {
                let (id, col) = line.ident("a metric name")?;
                if !is_identifier(&id) {
                    return Err(err(no, col, format!("`{id}` is reserved")));
                }
                if metrics.iter().any(|m| m.name == id) {
                    return Err(err(no, col, format!("duplicate metric `{id}`")));
                }
                line.expect_sym(':')?;
                let col = line.col();
                if line.int().ok() != Some(BigInt::from(2)) || !line.keyword("omega") {
                    return Err(err(no, col, "expected `2omega`"));
                }
                line.expect_sym('=')?;
                let terms = line.combination()?;
                let (basis, two_omega) = if is_complex_combo(&terms) {
                    (Basis::Complex, ctx.complex_form(2, terms, true)?)
                } else {
                    (Basis::Real, ctx.real_form(2, terms)?)
                };
                metrics.push(MetricDecl { name: id, basis, two_omega });
            }
            "function" => {
                let (id, col) = line.ident("a function name")?;
                if !is_identifier(&id) || derivation_index(&id, usize::MAX / 2).is_some() {
                    return Err(err(no, col, format!("`{id}` is reserved")));
                }
                if functions.iter().any(|f| f.name == id) {
                    return Err(err(no, col, format!("duplicate function `{id}`")));
                }
                let real = line.keyword("real");
                let mut kills = Vec::new();
                if line.keyword("kills") {
                    while !line.at_end() {
                        let (v, vcol) = line.ident("a derivation V<a> or Vbar<a>")?;
                        let c = derivation_index(&v, ctx.n())
                            .ok_or_else(|| err(no, vcol, format!("`{v}` is not a derivation V1..V{0}, Vbar1..Vbar{0}", ctx.n())))?;
                        if kills.contains(&c) {
                            return Err(err(no, vcol, format!("`{v}` listed twice")));
                        }
                        kills.push(c);
                    }
                    if kills.is_empty() {
                        return Err(line.err("expected at least one derivation after `kills`"));
                    }
                }
                kills.sort_unstable();
                functions.push(FunctionDecl { name: id, real, kills });
            }
            "pattern" => {
                let (id, col) = line.ident("a pattern name")?;
                if patterns.iter().any(|p| p.name == id) {
                    return Err(err(no, col, format!("duplicate pattern `{id}`")));
                }
                line.expect_sym('=')?;
                let mut slots = Vec::new();
                for what in ["a real function", "a real function", "a complex function"] {
                    let (f, fcol) = line.ident(what)?;
                    let decl = functions.iter().find(|d| d.name == f).ok_or_else(|| err(no, fcol, format!("undeclared function `{f}`")))?;
                    if decl.real != what.contains("real") {
                        return Err(err(no, fcol, format!("`{f}` should be {what}")));
                    }
                    slots.push(f);
                }
                let [a, b, u]: [String; 3] = slots.try_into().expect("three slots");
                patterns.push(MetricPattern { name: id, a, b, u });
            }
            other => return Err(err(no, 1, format!("unknown directive `{other}`"))),
        }
        line.expect_end()?;
    }

    let end = last_line + 1;
    let name = name.ok_or_else(|| err(end, 1, "missing `manifold` directive"))?;
    let dim = dim.ok_or_else(|| err(end, 1, "missing `dim` directive"))?;
    let n = dim / 2;
    let structure_basis = structure_basis.unwrap_or(Basis::Real);
    let count = if structure_basis == Basis::Real { dim } else { n };
    let structure = (0..count).map(|i| structure.remove(&i).unwrap_or_else(|| Form::zero(dim, 2))).collect();
    if let Some(a) = (0..n).find(|a| !acs.contains_key(a)) {
        return Err(err(end, 1, format!("missing `acs phi{}`", a + 1)));
    }
    Ok(ManifoldFile {
        header,
        name,
        dim,
        params,
        structure,
        structure_basis,
        acs: acs.into_values().collect(),
        metrics,
        functions,
        patterns,
    })
}

fn fmt_rat(r: &BigRational) -> String {
    Scalar::real(r.clone()).to_literal()
}

fn real_name(i: usize) -> String {
    format!("e{}", i + 1)
}

impl ManifoldFile {
    pub fn n(&self) -> usize {
        self.dim / 2
    }

    fn theta_name(&self) -> impl Fn(usize) -> String {
        let n = self.n();
        move |i| if i < n { format!("phi{}", i + 1) } else { format!("phibar{}", i - n + 1) }
    }

    /// Canonical text. Parsing the output gives back an equal value, and serializing
    /// a parsed canonical file reproduces it byte for byte.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let mut push = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        for h in &self.header {
            push(h.clone());
        }
        push(format!("manifold {}", self.name));
        push(format!("dim {}", self.dim));
        for (p, v) in &self.params {
            push(format!("param {p} = {}", fmt_rat(v)));
        }
        let theta = self.theta_name();
        for (i, f) in self.structure.iter().enumerate() {
            match self.structure_basis {
                Basis::Real => push(format!("d e{} = {}", i + 1, f.render(real_name))),
                Basis::Complex => push(format!("d phi{} = {}", i + 1, f.render(&theta))),
            }
        }
        for (a, f) in self.acs.iter().enumerate() {
            push(format!("acs phi{} = {}", a + 1, f.render(real_name)));
        }
        for m in &self.metrics {
            let body = match m.basis {
                Basis::Real => m.two_omega.render(real_name),
                Basis::Complex => m.two_omega.render(&theta),
            };
            push(format!("metric {} : 2omega = {body}", m.name));
        }
        let n = self.n();
        for f in &self.functions {
            let mut s = format!("function {}", f.name);
            if f.real {
                s.push_str(" real");
            }
            if !f.kills.is_empty() {
                s.push_str(" kills");
                for &c in &f.kills {
                    s.push(' ');
                    s.push_str(&crate::symbolic::derivation_name(c, n));
                }
            }
            push(s);
        }
        for p in &self.patterns {
            push(format!("pattern {} = {} {} {}", p.name, p.a, p.b, p.u));
        }
        out
    }

    /// The real structure equations `d e^i`.
    fn real_structure(&self) -> Result<Vec<Form>> {
        if self.structure_basis == Basis::Real {
            return Ok(self.structure.clone());
        }
        let frame = ComplexCoframe::new(self.dim, self.acs.clone())?;
        let n = self.n();
        let mut d_theta = self.structure.clone();
        d_theta.extend(self.structure.iter().map(|f| conjugate_theta(f, n)));
        (0..self.dim)
            .map(|i| {
                let e = frame.to_theta(&Form::generator(self.dim, i));
                let mut out = Form::zero(self.dim, 2);
                for (m, c) in e.terms() {
                    let a = m.indices().next().expect("1-form");
                    out = &out + &d_theta[a].scale(c);
                }
                Ok(frame.from_theta(&out))
            })
            .collect()
    }

    pub fn presentation(&self) -> Result<LiePresentation> {
        let params = self.params.iter().cloned().collect();
        Ok(LiePresentation::new(self.name.clone(), self.real_structure()?)?.with_params(params))
    }

    /// Builds and validates the Lie algebra and the almost complex structure.
    pub fn build(&self) -> Result<Model> {
        let lie = self.presentation()?;
        lie.require_valid()?;
        let validation = lie.validate();
        let bigrading = Bigrading::install(lie, self.acs.clone())?;
        Ok(Model { file: self.clone(), bigrading, validation })
    }
}

/// Complex conjugate of a theta-coordinate form.
pub fn conjugate_theta(f: &Form, n: usize) -> Form {
    let dim = f.dim();
    let mut out = Form::zero(dim, f.degree());
    for (m, c) in f.terms() {
        let idx: Vec<usize> = m.indices().map(|i| if i < n { i + n } else { i - n }).collect();
        out = &out + &Form::basis(dim, &idx).scale(&c.conj());
    }
    out
}

/// A parsed file together with its validated structures.
#[derive(Clone, Debug)]
pub struct Model {
    pub file: ManifoldFile,
    pub bigrading: Bigrading,
    pub validation: ValidationReport,
}

impl Model {
    pub fn name(&self) -> &str {
        &self.file.name
    }

    pub fn metric_names(&self) -> Vec<&str> {
        self.file.metrics.iter().map(|m| m.name.as_str()).collect()
    }

    /// The fundamental form of a named metric, in the real coframe.
    pub fn omega(&self, name: &str) -> Result<Form> {
        let m = self.file.metrics.iter().find(|m| m.name == name).ok_or_else(|| Error::UnknownMetric(name.into()))?;
        let two = match m.basis {
            Basis::Real => m.two_omega.clone(),
            Basis::Complex => self.bigrading.frame().from_theta(&m.two_omega),
        };
        Ok(two.scale(&Scalar::from_ratio(1, 2)))
    }

    /// Installs a named metric, or the first one when `name` is `None`.
    pub fn hermitian(&self, name: Option<&str>) -> Result<Hermitian> {
        let name = match name {
            Some(n) => n,
            None => self.file.metrics.first().map(|m| m.name.as_str()).ok_or_else(|| Error::UnknownMetric("<default>".into()))?,
        };
        Hermitian::install(self.bigrading.clone(), self.omega(name)?)
    }

    pub fn symbolic_frame(&self) -> Result<SymbolicFrame> {
        let mut fr = SymbolicFrame::new(&self.bigrading);
        for f in &self.file.functions {
            fr.declare(&f.name, f.real, &f.kills)?;
        }
        Ok(fr)
    }

    pub fn pattern(&self, name: Option<&str>) -> Result<&MetricPattern> {
        match name {
            Some(n) => self.file.patterns.iter().find(|p| p.name == n).ok_or_else(|| Error::UnknownMetric(n.into())),
            None => self.file.patterns.first().ok_or_else(|| Error::Unsupported(format!("`{}` declares no metric pattern", self.file.name))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TORUS: &str = "manifold torus4\ndim 4\nacs phi1 = e1 + (1 i) e2\nacs phi2 = e3 + (1 i) e4\nmetric std : 2omega = 2 e1^e2 + 2 e3^e4\n";

    fn parse_err(text: &str) -> (usize, usize, String) {
        match parse(text) {
            Err(Error::Parse { line, col, msg }) => (line, col, msg),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn torus_parses_and_validates() {
        let f = parse(TORUS).unwrap();
        assert_eq!(f.dim, 4);
        assert!(f.structure.iter().all(|d| d.is_zero()));
        let m = f.build().unwrap();
        assert!(m.validation.nilpotent);
        assert!(m.hermitian(None).unwrap().is_almost_kahler());
    }

    #[test]
    fn canonical_round_trip() {
        let f = parse(TORUS).unwrap();
        let s = f.serialize();
        assert_eq!(parse(&s).unwrap(), f);
        assert_eq!(parse(&s).unwrap().serialize(), s);
    }

    #[test]
    fn literals() {
        let f = parse("manifold x\ndim 2\nacs phi1 = (1/2+3/4 i) e1 - i e2 + 0 e1\n");
        assert!(f.is_err());
        let f = parse("manifold x\ndim 2\nacs phi1 = (1/2+3/4 i) e1 - 2/3 i e2\n").unwrap();
        assert_eq!(f.acs[0].coeff(MultiIndex::single(0)), Scalar::gaussian(1, 2, 3, 4));
        assert_eq!(f.acs[0].coeff(MultiIndex::single(1)), Scalar::gaussian(0, 1, -2, 3));
    }

    #[test]
    fn errors_are_positioned() {
        let (l, c, m) = parse_err("manifold ft8\ndim 8\nd e5 = e1^e9\n");
        assert_eq!((l, c), (3, 11));
        assert!(m.contains("out of range"), "{m}");
        let (l, c, _) = parse_err("manifold x\ndim 4\nd e3 = e2^e1\n");
        assert_eq!((l, c), (3, 11));
        let (l, _, m) = parse_err("manifold x\ndim 4\nd e3 = 1.5 e1^e2\n");
        assert_eq!(l, 3);
        assert!(m.contains("non-rational"));
        let (l, _, m) = parse_err("manifold x\ndim 4\nd e3 = e1^e2\nd e3 = 0\n");
        assert_eq!(l, 4);
        assert!(m.contains("duplicate"));
        let (l, c, _) = parse_err("manifold x\ndim 4\nd e3 = 1/0 e1^e2\n");
        assert_eq!((l, c), (3, 10));
        let (l, _, m) = parse_err("manifold x\ndim 4\nacs phi1 = e1 + (1 i) e2\n");
        assert_eq!(l, 4);
        assert!(m.contains("phi2"));
    }

    #[test]
    fn complex_structure_equations() {
        let text = "manifold k\ndim 4\nd phi1 = 0\nd phi2 = (1/2 i) phi1^phibar1\nacs phi1 = e2 + (1 i) e3\nacs phi2 = (1 i) e1 + e4\n";
        let f = parse(text).unwrap();
        let real = f.presentation().unwrap();
        let mut expected = vec![Form::zero(4, 2); 4];
        expected[3] = Form::basis(4, &[1, 2]);
        assert_eq!(real.structure_forms(), &expected[..]);
        assert_eq!(f.serialize(), text);
    }
}
