//! Acceptance gate: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command as Proc, Output};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use hodge_invariants::bigraded::DPart;
use hodge_invariants::corpus::{self, CORPUS};
use hodge_invariants::hodge::{HarmonicKind, Hermitian, Operator};
use hodge_invariants::invariants::{cup_pair, gpm_report, j_cohomology, stage_report};
use hodge_invariants::manifold::{parse, Model};
use hodge_invariants::report::{self, sigma_form, Check, Command};
use hodge_invariants::scalar::{q, qi};
use hodge_invariants::symbolic::{dstar_sigma, DiffPoly, FunctionForm, SymbolicFrame};
use hodge_invariants::{Form, Matrix, MultiIndex, Scalar, Subspace};

type Outcome = Result<(), Box<dyn std::error::Error>>;

macro_rules! check {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+).into());
        }
    };
}

fn model(name: &str) -> Model {
    corpus::entry(name).expect("corpus entry").model()
}

fn same(a: &Subspace, b: &Subspace) -> bool {
    a.is_subspace_of(b) && b.is_subspace_of(a)
}

fn metrics(m: &Model) -> Vec<(String, Hermitian)> {
    m.metric_names().into_iter().map(|n| (n.to_string(), m.hermitian(Some(n)).expect("metric installs"))).collect()
}

fn e(dim: usize, idx: &[usize]) -> Form {
    Form::basis(dim, &idx.iter().map(|i| i - 1).collect::<Vec<_>>())
}

fn wedge_all(forms: &[Form]) -> Form {
    forms[1..].iter().fold(forms[0].clone(), |acc, f| &acc ^ f)
}

fn h_d(h: &Hermitian, p: usize, q: usize) -> hodge_invariants::hodge::HarmonicSpace {
    h.harmonic_space(HarmonicKind::D, p, q).expect("harmonic space")
}

// Kodaira: the holomorphic 1-form, harmonic theory in degree (1,0), and b1.
fn c1() -> Outcome {
    let m = model("kodaira_primary");
    let b = &m.bigrading;
    let fr = b.frame();
    let lie = b.lie();
    let phi1 = &e(4, &[2]) + &e(4, &[3]).scale(&Scalar::i());
    check!(fr.theta(0) == phi1, "phi1 is not e2 + i e3");
    let target = Subspace::span(&[phi1.clone()])?;
    for (name, h) in metrics(&m) {
        let two = fr.to_theta(&m.omega(&name)?.scale(&Scalar::from_int(2)));
        let c = |a: usize, b: usize| two.coeff(MultiIndex::from_indices(&[a, b]).unwrap());
        let (c11, c22, c12, c21) = (c(0, 2), c(1, 3), c(0, 3), c(1, 2));
        let pos_imag = |s: &Scalar| s.re.is_zero() && s.im.is_positive();
        check!(pos_imag(&c11) && pos_imag(&c22), "{name}: diagonal is not i times a positive number");
        check!(c21 == -c12.conj(), "{name}: off-diagonal is not of the form u, -ubar");
        check!(two.num_terms() <= 4, "{name}: extra terms in 2 omega");
        let hs = h_d(&h, 1, 0);
        check!(hs.number == 1, "{name}: h^(1,0)_d = {}", hs.number);
        check!(same(&hs.space, &target), "{name}: H^(1,0)_d is not spanned by e2 + i e3");
    }
    check!(j_cohomology(b, 1, 0)?.number == 1, "h^(1,0)_J != 1");
    check!(lie.betti_numbers()?[1] == 3, "b1 != 3");
    let reps = [fr.theta(0), fr.theta(2), &fr.theta(1) + &(-&fr.theta(3))];
    for r in &reps {
        check!(lie.differential(r)?.is_zero(), "representative {r} is not closed");
    }
    let bd = lie.boundaries(1);
    check!(Subspace::span(&reps)?.add(&bd)?.quotient_dim(&bd)? == 3, "representatives are dependent in cohomology");
    Ok(())
}

// Non-integrable structures: the top (n,0) form is not closed, so nothing harmonic lives there.
fn c2() -> Outcome {
    for name in ["nil4", "rxsol3", "kodaira_thurston_ak", "ft8"] {
        let m = model(name);
        let b = &m.bigrading;
        let n = b.n();
        check!(!b.is_integrable(), "{name} is integrable");
        let top = wedge_all(&(0..n).map(|a| b.frame().theta(a)).collect::<Vec<_>>());
        check!(!b.lie().differential(&top)?.is_zero(), "{name}: top (n,0) form is closed");
        check!(j_cohomology(b, n, 0)?.number == 0, "{name}: h^(n,0)_J != 0");
        for (metric, h) in metrics(&m) {
            check!(h_d(&h, n, 0).number == 0, "{name} {metric}: h^(n,0)_d != 0");
        }
    }
    Ok(())
}

// Almost Kahler metrics: harmonic (p,0)-forms are exactly the closed ones.
fn c3() -> Outcome {
    for name in ["torus4", "torus8", "kodaira_thurston_ak"] {
        let m = model(name);
        let b = &m.bigrading;
        let all = metrics(&m);
        let ak: Vec<_> = all.iter().filter(|(_, h)| h.is_almost_kahler()).collect();
        check!(ak.len() >= 2, "{name}: fewer than two almost Kahler metrics");
        let others: Vec<&str> = all.iter().filter(|(_, h)| !h.is_almost_kahler()).map(|(n, _)| n.as_str()).collect();
        if name == "kodaira_thurston_ak" {
            check!(others == ["h1", "h2"], "{name}: non almost Kahler metrics are {others:?}");
        } else {
            check!(others.is_empty(), "{name}: {others:?} not almost Kahler");
        }
        for p in 1..=b.n() {
            let closed = b.lie().cocycles(p).intersect(&b.bidegree_space(p, 0))?;
            for (metric, h) in &all {
                let hs = h_d(h, p, 0);
                if h.is_almost_kahler() {
                    check!(same(&hs.space, &closed), "{name} {metric}: H^({p},0)_d != closed (p,0)-forms");
                } else {
                    check!(hs.space.is_subspace_of(&closed), "{name} {metric}: harmonic (p,0)-form not closed");
                    check!(hs.number <= closed.dimension(), "{name} {metric}: h^({p},0)_d too large");
                }
            }
        }
    }
    Ok(())
}

fn shifted(p: usize, q: usize, s: (i32, i32), sign: i32) -> Option<(usize, usize)> {
    let (a, b) = (p as i32 + sign * s.0, q as i32 + sign * s.1);
    (a >= 0 && b >= 0).then_some((a as usize, b as usize))
}

// Sum of squared norms of P sigma and P* sigma over the given parts, as a form on A^{p,q}.
fn norm_form(h: &Hermitian, parts: &[DPart], p: usize, q: usize) -> Result<Matrix, Box<dyn std::error::Error>> {
    let size = h.gram_block(p, q).rows();
    let mut acc = Matrix::zeros(size, size);
    for &part in parts {
        let s = part.shift().unwrap();
        for (op, sign) in [(Operator::Part(part), 1), (Operator::Adjoint(part), -1)] {
            let a = h.operator_matrix(op, p, q)?;
            if a.rows() == 0 {
                continue;
            }
            let (tp, tq) = shifted(p, q, s, sign).ok_or("operator leaves the bigraded range")?;
            acc = acc.add(&a.adjoint().mul(&h.gram_block(tp, tq)).mul(&a));
        }
    }
    Ok(acc)
}

// Almost Kahler identity between component Laplacians.
fn c4() -> Outcome {
    let m = model("kodaira_thurston_ak");
    let mut seen = 0;
    for (metric, h) in metrics(&m) {
        if !h.is_almost_kahler() {
            continue;
        }
        seen += 1;
        let n = h.n();
        for p in 0..=n {
            for q in 0..=n {
                let lap = |x| h.operator_matrix(Operator::Laplacian(x), p, q);
                let lhs = lap(DPart::Delbar)?.add(&lap(DPart::Mu)?);
                let rhs = lap(DPart::Del)?.add(&lap(DPart::Mubar)?);
                check!(lhs == rhs, "{metric}: Laplacian identity fails on ({p},{q})");
            }
        }
        let lhs = norm_form(&h, &[DPart::Delbar, DPart::Mu], 1, 0)?;
        let rhs = norm_form(&h, &[DPart::Del, DPart::Mubar], 1, 0)?;
        check!(lhs == rhs, "{metric}: norm identity fails on A^(1,0)");
        check!(!lhs.is_zero(), "{metric}: norm form vanishes identically");
    }
    check!(seen == 3, "expected three almost Kahler metrics, saw {seen}");
    Ok(())
}

fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::gaussian(rng.gen_range(-5..=5), rng.gen_range(1..=4), rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

// Symmetries of harmonic spaces, inequalities between numbers, and the star.
fn c5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for entry in CORPUS {
        let m = entry.model();
        let b = &m.bigrading;
        let lie = b.lie();
        let (dim, n) = (b.dim(), b.n());
        let betti = lie.betti_numbers()?;
        for k in 0..dim.saturating_sub(1) {
            check!(lie.d_matrix(k + 1).mul(&lie.d_matrix(k)).is_zero(), "{}: d^2 != 0 in degree {k}", entry.name);
        }
        let mut hj = vec![vec![0; n + 1]; n + 1];
        for p in 0..=n {
            for q in 0..=n {
                hj[p][q] = j_cohomology(b, p, q)?.number;
            }
        }
        let hs = metrics(&m);
        for (metric, h) in &hs {
            let spaces: Vec<Vec<_>> = (0..=n).map(|p| (0..=n).map(|q| h_d(h, p, q)).collect()).collect();
            for p in 0..=n {
                for q in 0..=n {
                    let s = &spaces[p][q];
                    let tag = format!("{} {metric} ({p},{q})", entry.name);
                    check!(s.number == s.space.dimension(), "{tag}: number is not the dimension");
                    check!(same(&s.space.conjugate(), &spaces[q][p].space), "{tag}: conjugation");
                    let starred = s.space.map(dim - p - q, |f| h.star(f))?;
                    check!(same(&starred, &spaces[n - q][n - p].space), "{tag}: star");
                    let chain = [spaces[q][p].number, spaces[n - q][n - p].number, spaces[n - p][n - q].number];
                    check!(chain.iter().all(|&x| x == s.number), "{tag}: number chain {chain:?} vs {}", s.number);
                    check!(s.number <= hj[p][q] && hj[p][q] <= betti[p + q], "{tag}: h_d <= h_J <= b fails");
                    check!(hj[p][q] == hj[q][p], "{tag}: h_J not symmetric");
                }
            }
            for k in 0..=dim {
                let sq = h.star_matrix(dim - k).mul(h.star_matrix(k));
                let sign = if (k * (dim - k)) % 2 == 0 { Scalar::one() } else { -Scalar::one() };
                check!(sq == Matrix::identity(sq.rows()).scale(&sign), "{} {metric}: star^2 wrong in degree {k}", entry.name);
            }
        }
        let mut tested = 0;
        for t in 0..100 {
            let h = &hs[t % hs.len()].1;
            let k = rng.gen_range(0..=n);
            let p = rng.gen_range(0..=k);
            let basis = h.primitive_space(p, k - p).basis();
            if basis.is_empty() {
                continue;
            }
            let psi = basis.iter().fold(Form::zero(dim, k), |acc, f| &acc + &f.scale(&random_scalar(&mut rng)));
            check!(h.primitive_star(&psi)? == h.star(&psi), "{}: closed-form star differs on {psi}", entry.name);
            tested += 1;
        }
        check!(tested >= 50, "{}: only {tested} primitive samples", entry.name);
    }
    Ok(())
}

// ft8: a class with representatives of both parities, and a class outside H+ + H-.
fn c6() -> Outcome {
    let m = model("ft8");
    let b = &m.bigrading;
    let lie = b.lie();
    let fr = b.frame();
    let t = |a: usize| fr.theta(a);
    let (e1378, e2478) = (e(8, &[1, 3, 7, 8]), e(8, &[2, 4, 7, 8]));
    let plus = &e2478 + &e1378;
    let minus = &e2478 + &(-&e1378);
    for a in [&plus, &minus] {
        check!(lie.differential(a)?.is_zero(), "witness {a} is not closed");
    }
    check!(b.project(&plus, 2, 2)? == plus, "alpha+ is not of type (2,2)");
    check!(&b.project(&minus, 3, 1)? + &b.project(&minus, 1, 3)? == minus, "alpha- is not of type (3,1)+(1,3)");
    let t44 = &t(3) ^ &t(7);
    let mixed = &(&t(0) ^ &t(5)) + &(&t(4) ^ &t(1));
    let pure = &(&t(0) ^ &t(1)) + &(&t(4) ^ &t(5));
    check!((&mixed ^ &t44).scale(&qi(1, 4)) == plus, "alpha+ differs from its eta expression");
    check!((&pure ^ &t44).scale(&qi(-1, 4)) == minus, "alpha- differs from its eta expression");
    check!(lie.differential(&e(8, &[6, 7, 8]))? == e1378, "d e678 != e1378");
    check!(lie.exact_preimage(&plus).is_none(), "alpha+ is exact");
    let eta = (&(&mixed + &(-&pure)) ^ &t44).scale(&qi(1, 8));
    check!(eta == e2478, "e2478 differs from its eta expression");
    check!(lie.differential(&e2478)?.is_zero() && lie.exact_preimage(&e2478).is_none(), "e2478 is not a nonzero class");
    let z = lie.cocycles(4);
    let plus_space = b.bidegree_space(2, 2).add(&b.bidegree_space(4, 0))?.add(&b.bidegree_space(0, 4))?;
    let minus_space = b.bidegree_space(3, 1).add(&b.bidegree_space(1, 3))?;
    for w in [plus_space, minus_space] {
        for f in w.intersect(&z)?.basis() {
            check!(cup_pair(lie, &e2478, &f)?.is_zero(), "e2478 pairs with {f}");
        }
    }
    check!(cup_pair(lie, &e2478, &e(8, &[1, 3, 5, 6]))? == -Scalar::one(), "e2478 . e1356 != -1");
    let st = stage_report(b, 4)?;
    check!(!st.pure && !st.full, "stage 4 report: pure={} full={}", st.pure, st.full);
    for (metric, h) in metrics(&m) {
        let g = gpm_report(&h)?;
        check!(g.intersections == [0, 0], "{metric}: intersections {:?}", g.intersections);
        check!(g.dim_refined_sum < g.betti, "{metric}: refined sum {} not below b4 {}", g.dim_refined_sum, g.betti);
        check!(g.dim_g_plus + g.dim_g_minus == g.betti, "{metric}: g+ + g- != b4");
    }
    Ok(())
}

fn generic_sigma(fr: &SymbolicFrame) -> Result<FunctionForm, Box<dyn std::error::Error>> {
    Ok(&fr.monomial(&[1], &[], fr.var("f")?) + &fr.monomial(&[2], &[], fr.var("g")?))
}

fn sum(forms: Vec<FunctionForm>) -> FunctionForm {
    forms.into_iter().reduce(|a, b| &a + &b).expect("nonempty")
}

// dbar(f phi1 + g phi2) for a structure with the given extra g-terms on phi_a ^ phibar_c.
fn expected_dbar(fr: &SymbolicFrame, extra: &[(usize, usize, Scalar)]) -> Result<FunctionForm, Box<dyn std::error::Error>> {
    let (f, g) = (fr.var("f")?, fr.var("g")?);
    let minus = -Scalar::one();
    let mut terms = Vec::new();
    for (a, h) in [(1, &f), (2, &g)] {
        for c in 1..=2 {
            terms.push(fr.monomial(&[a], &[c], fr.derive(c + 1, h).scale(&minus)));
        }
    }
    for (a, c, k) in extra {
        terms.push(fr.monomial(&[*a], &[*c], g.scale(k)));
    }
    Ok(sum(terms))
}

fn sample_values() -> BTreeMap<String, Scalar> {
    [("f", Scalar::gaussian(2, 1, -1, 3)), ("r", q(3, 2)), ("s", q(2, 1)), ("u", Scalar::gaussian(1, 2, 1, 3))]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}

// Computations with function coefficients.
fn c7() -> Outcome {
    let minus = -Scalar::one();

    let kod = model("kodaira_primary");
    let (fr, dsigma) = sigma_form(&kod, Check::DSigma)?;
    let (f, g) = (fr.var("f")?, fr.var("g")?);
    let v = |c: usize, p: &DiffPoly| fr.derive(c, p);
    let expected = sum(vec![
        fr.monomial(&[1, 2], &[], v(1, &f).scale(&minus)),
        fr.monomial(&[1], &[1], v(2, &f).scale(&minus)),
        fr.monomial(&[1], &[2], v(3, &f).scale(&minus)),
        fr.monomial(&[1, 2], &[], v(0, &g)),
        fr.monomial(&[2], &[1], v(2, &g).scale(&minus)),
        fr.monomial(&[2], &[2], v(3, &g).scale(&minus)),
        fr.monomial(&[1], &[1], g.scale(&qi(1, 2))),
    ]);
    check!(dsigma == expected, "Kodaira d sigma: {}", fr.render_form(&dsigma));

    let (fr, dbar) = sigma_form(&model("nil4"), Check::DbarSigma)?;
    let want = expected_dbar(&fr, &[(1, 1, qi(-1, 2)), (1, 2, qi(-1, 4)), (2, 1, qi(1, 4))])?;
    check!(dbar == want, "nil4 dbar sigma: {}", fr.render_form(&dbar));

    let sol = model("rxsol3");
    let (fr, dbar) = sigma_form(&sol, Check::DbarSigma)?;
    check!(dbar == expected_dbar(&fr, &[(1, 2, q(-1, 2))])?, "rxsol3 dbar sigma: {}", fr.render_form(&dbar));
    let flipped_text = corpus::entry("rxsol3")?.text.replace("d e3 = -e1^e3\nd e4 = e1^e4", "d e3 = e1^e3\nd e4 = -e1^e4");
    check!(flipped_text != corpus::entry("rxsol3")?.text, "flip did not apply");
    let flipped = parse(&flipped_text)?.build()?;
    let (fr, dbar) = sigma_form(&flipped, Check::DbarSigma)?;
    check!(dbar == expected_dbar(&fr, &[(1, 2, q(1, 2))])?, "flipped rxsol3 dbar sigma: {}", fr.render_form(&dbar));

    for name in ["nil4", "rxsol3"] {
        let m = model(name);
        let fr = m.symbolic_frame()?;
        let r = dstar_sigma(&fr, m.pattern(None)?, "f")?;
        check!(r.text == "−(i/2)·f·Vbar2(ubar) + f·s·Vbar1(s)", "{name}: {}", r.text);
        let (f, s, ubar) = (fr.var("f")?, fr.var("s")?, fr.var("ubar")?);
        let poly = f.mul(&fr.derive(3, &ubar)).scale(&qi(-1, 2)).add(&f.mul(&s).mul(&fr.derive(2, &s)));
        check!(r.coefficient == poly, "{name}: coefficient polynomial differs");
        let rep = report::run(&report::load(name)?, &Command::Symbolic { check: Check::DstarSigma }, None)?;
        let sj = rep.symbolic.ok_or("no symbolic section")?;
        check!(sj.star_matches_gram == Some(true) && sj.note.is_none(), "{name}: report {sj:?}");
    }
    let rep = report::run(&report::load("kodaira")?, &Command::Symbolic { check: Check::DstarSigma }, None)?;
    let sj = rep.symbolic.ok_or("no symbolic section")?;
    check!(sj.result == "−(i/2)·f·Vbar2(ubar) + f·r·Vbar1(r)", "Kodaira: {}", sj.result);
    check!(sj.note.is_some() && sj.star_matches_gram == Some(true), "Kodaira report {sj:?}");

    for name in ["kodaira_primary", "nil4", "rxsol3"] {
        let m = model(name);
        let fr = m.symbolic_frame()?;
        let vals = sample_values();
        let omega = fr.pattern_omega(m.pattern(None)?)?;
        let h = Hermitian::install(m.bigrading.clone(), fr.instantiate(&omega, &vals)?)?;
        let sigma = fr.monomial(&[1], &[], fr.var("f")?);
        let star = fr.primitive_star(&omega, &sigma)?;
        check!(
            fr.instantiate(&star, &vals)? == h.star(&fr.instantiate(&sigma, &vals)?),
            "{name}: instantiated star differs from the Gram star"
        );

        let (fr, _) = sigma_form(&m, Check::DSigma)?;
        let sigma = generic_sigma(&fr)?;
        check!(fr.d(&fr.d(&sigma)).is_zero(), "{name}: d^2 sigma != 0");
        let fg = fr.monomial(&[], &[], fr.var("f")?.mul(&fr.var("g")?));
        check!(fr.d(&fr.d(&fg)).is_zero(), "{name}: d^2 (fg) != 0");
    }
    Ok(())
}

// Inoue surfaces: b1 = 1 and no harmonic (1,0)-forms.
fn c8() -> Outcome {
    for name in ["inoue_SM", "inoue_Spm"] {
        let m = model(name);
        let b = &m.bigrading;
        check!(b.lie().betti_numbers()?[1] == 1, "{name}: b1 != 1");
        let closed = b.lie().cocycles(1).intersect(&b.bidegree_space(1, 0))?;
        for (metric, h) in metrics(&m) {
            let hs = h_d(&h, 1, 0);
            check!(hs.number == 0, "{name} {metric}: h^(1,0)_d = {}", hs.number);
            check!(hs.space.is_subspace_of(&closed), "{name} {metric}: harmonic form not closed");
        }
    }
    Ok(())
}

fn c9() -> Outcome {
    let m = model("kodaira_primary");
    let st = stage_report(&m.bigrading, 2)?;
    check!(st.pure && st.full, "Kodaira stage 2: pure={} full={}", st.pure, st.full);
    check!(st.dim_sum == st.betti && st.betti == 4, "Kodaira stage 2: sum {} of b2 {}", st.dim_sum, st.betti);
    check!(st.purity_witness.is_none() && st.fullness_witness.is_none(), "Kodaira stage 2 has witnesses");
    Ok(())
}

// Minimal JSON Schema check: type, enum, required, properties, additionalProperties, items, minimum, $ref.
fn conforms(root: &Value, schema: &Value, v: &Value, path: &str) -> Result<(), String> {
    if let Some(r) = schema.get("$ref").and_then(Value::as_str) {
        let key = r.strip_prefix("#/definitions/").ok_or(format!("unsupported $ref {r}"))?;
        return conforms(root, &root["definitions"][key], v, path);
    }
    if let Some(t) = schema.get("type") {
        let types: Vec<&str> = match t {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(Value::as_str).collect(),
            _ => return Err(format!("{path}: bad type in schema")),
        };
        let ok = types.iter().any(|t| match *t {
            "object" => v.is_object(),
            "array" => v.is_array(),
            "string" => v.is_string(),
            "boolean" => v.is_boolean(),
            "integer" => v.is_i64() || v.is_u64(),
            "number" => v.is_number(),
            "null" => v.is_null(),
            _ => false,
        });
        if !ok {
            return Err(format!("{path}: {v} is not {types:?}"));
        }
    }
    if let Some(options) = schema.get("enum").and_then(Value::as_array) {
        if !options.contains(v) {
            return Err(format!("{path}: {v} not in {options:?}"));
        }
    }
    if let (Some(min), Some(x)) = (schema.get("minimum").and_then(Value::as_f64), v.as_f64()) {
        if x < min {
            return Err(format!("{path}: {x} < {min}"));
        }
    }
    if let Some(obj) = v.as_object() {
        let props = schema.get("properties").and_then(Value::as_object);
        for key in schema.get("required").and_then(Value::as_array).into_iter().flatten() {
            let key = key.as_str().unwrap_or_default();
            if !obj.contains_key(key) {
                return Err(format!("{path}: missing `{key}`"));
            }
        }
        for (key, val) in obj {
            match props.and_then(|p| p.get(key)) {
                Some(s) => conforms(root, s, val, &format!("{path}.{key}"))?,
                None if schema.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    return Err(format!("{path}: unexpected `{key}`"))
                }
                None => {}
            }
        }
    }
    if let (Some(items), Some(arr)) = (schema.get("items"), v.as_array()) {
        for (i, x) in arr.iter().enumerate() {
            conforms(root, items, x, &format!("{path}[{i}]"))?;
        }
    }
    Ok(())
}

fn hodgecalc(args: &[&str]) -> Output {
    Proc::new(env!("CARGO_BIN_EXE_hodgecalc")).args(args).output().expect("hodgecalc runs")
}

fn scratch(name: &str, text: &str) -> String {
    let dir: PathBuf = std::env::temp_dir().join(format!("hodgecalc-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("scratch dir");
    let path = dir.join(name);
    std::fs::write(&path, text).expect("scratch file");
    path.to_string_lossy().into_owned()
}

fn expect_error(args: &[&str], code: i32, needle: &str, error_schema: &Value) -> Outcome {
    let out = hodgecalc(args);
    check!(out.status.code() == Some(code), "{args:?}: exit {:?}, expected {code}", out.status.code());
    let err: Value = serde_json::from_slice(&out.stderr).map_err(|e| format!("{args:?}: stderr is not JSON: {e}"))?;
    conforms(error_schema, error_schema, &err, "$").map_err(|e| format!("{args:?}: {e}"))?;
    check!(err["error"]["code"] == code, "{args:?}: error code field {}", err["error"]["code"]);
    let msg = err["error"]["message"].as_str().unwrap_or_default();
    check!(msg.contains(needle), "{args:?}: message `{msg}` lacks `{needle}`");
    Ok(())
}

// The command-line tool: JSON schema, canonical text, exit codes.
fn c10() -> Outcome {
    let schema: Value = serde_json::from_str(include_str!("../schema/report.schema.json"))?;
    let error_schema: Value = serde_json::from_str(include_str!("../schema/error.schema.json"))?;
    for entry in CORPUS {
        let dim = entry.model().bigrading.dim();
        let mut runs: Vec<Vec<&str>> = vec![
            vec!["numbers", entry.name, "--json"],
            vec!["purefull", entry.name, "--stage", "2", "--json"],
            vec!["gpm", entry.name, "--json"],
            vec!["validate", entry.name, "--json"],
        ];
        if !entry.model().file.patterns.is_empty() {
            runs.push(vec!["symbolic", entry.name, "--json"]);
        } else if dim == 4 {
            runs.push(vec!["symbolic", entry.name, "--check", "d-sigma", "--json"]);
        } else {
            expect_error(&["symbolic", entry.name, "--check", "d-sigma", "--json"], 4, "complex dimension 2", &error_schema)?;
        }
        for args in runs {
            let out = hodgecalc(&args);
            check!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
            let v: Value = serde_json::from_slice(&out.stdout)?;
            conforms(&schema, &schema, &v, "$").map_err(|e| format!("{args:?}: {e}"))?;
            check!(v["manifold"] == entry.name, "{args:?}: manifold field {}", v["manifold"]);
        }

        let out = hodgecalc(&["canon", entry.name]);
        check!(out.status.success() && out.stdout == entry.text.as_bytes(), "{}: canon differs from bundled text", entry.name);
    }

    // Reordered, commented and spaced-out input settles in one pass.
    let kod = corpus::entry("kodaira_primary")?.text;
    let body: Vec<&str> = kod.lines().filter(|l| !l.starts_with('#')).collect();
    let mut messy = vec![body[0].to_string(), format!("  {}   # four real dimensions", body[1])];
    let of = |kw: &'static str| body.iter().filter(move |l| l.starts_with(kw)).map(|l| format!("{l}  ")).collect::<Vec<_>>();
    // Metric order is meaningful (the first is the default), everything else may move.
    messy.extend(of("metric"));
    messy.extend(of("acs").into_iter().rev());
    messy.push(String::new());
    messy.extend(of("d ").into_iter().filter(|l| !l.trim_end().ends_with("= 0")));
    messy.push("# symbols".into());
    messy.extend(of("function").into_iter().chain(of("pattern")));
    let path = scratch("messy.hodge", &(messy.join("\n") + "\n"));
    let once = hodgecalc(&["canon", &path]);
    check!(once.status.success(), "messy canon failed: {}", String::from_utf8_lossy(&once.stderr));
    let canonical: String = body.iter().map(|l| format!("{l}\n")).collect();
    check!(once.stdout == canonical.as_bytes(), "messy canon:\n{}", String::from_utf8_lossy(&once.stdout));
    let path2 = scratch("once.hodge", &String::from_utf8_lossy(&once.stdout));
    check!(hodgecalc(&["canon", &path2]).stdout == once.stdout, "canon is not idempotent");

    expect_error(&["numbers", "no_such_manifold"], 1, "unknown manifold", &error_schema)?;
    expect_error(&["numbers", "torus4", "--bogus"], 1, "--bogus", &error_schema)?;
    expect_error(&["numbers", "torus4", "--metric", "nope"], 1, "unknown metric", &error_schema)?;

    let bad_index = scratch("bad_index.hodge", "manifold broken\ndim 8\nd e5 = e1^e9\n");
    expect_error(&["numbers", &bad_index], 2, "out of range", &error_schema)?;
    let err: Value = serde_json::from_slice(&hodgecalc(&["numbers", &bad_index]).stderr)?;
    check!(err["error"]["line"] == 3 && err["error"]["col"].is_u64(), "parse error position {}", err["error"]);
    let decimal = scratch("decimal.hodge", "manifold t\ndim 2\nacs phi1 = e1 + 0.5 e2\n");
    expect_error(&["numbers", &decimal], 2, "non-rational", &error_schema)?;

    let nil4 = corpus::entry("nil4")?.text;
    let jacobi = scratch("jacobi.hodge", &nil4.replace("d e1 = 0", "d e1 = e3^e4"));
    expect_error(&["validate", &jacobi], 3, "d^2 != 0", &error_schema)?;
    let torus = corpus::entry("torus4")?.text;
    let negative = scratch("negative.hodge", &torus.replace("metric std : 2omega = (1 i) phi1^phibar1", "metric std : 2omega = (-1 i) phi1^phibar1"));
    expect_error(&["numbers", &negative], 3, "positive definite", &error_schema)?;
    let not11 = scratch("not11.hodge", &torus.replace("metric std : 2omega = (1 i) phi1^phibar1 + (1 i) phi2^phibar2", "metric std : 2omega = e1^e3 - e2^e4"));
    expect_error(&["numbers", &not11], 3, "type (1,1)", &error_schema)?;
    let complex = scratch("complex.hodge", &torus.replace("metric std : 2omega = (1 i) phi1^phibar1 + (1 i) phi2^phibar2", "metric std : 2omega = (2 i) e1^e2 + 2 e3^e4"));
    expect_error(&["numbers", &complex], 3, "not real", &error_schema)?;
    let kills = scratch("kills.hodge", &kod.replace("function u\n", "function u\nfunction w kills V1 Vbar1\n"));
    expect_error(&["symbolic", &kills], 3, "not closed under brackets", &error_schema)?;

    expect_error(&["purefull", "kodaira", "--stage", "3"], 4, "odd", &error_schema)?;
    let nonuni = scratch(
        "nonunimodular.hodge",
        "manifold nonuni\ndim 4\nd e2 = e1^e2\nacs phi1 = e1 + (1 i) e2\nacs phi2 = e3 + (1 i) e4\nmetric std : 2omega = 2 e1^e2 + 2 e3^e4\n",
    );
    expect_error(&["gpm", &nonuni], 4, "not unimodular", &error_schema)?;
    let _ = std::fs::remove_dir_all(PathBuf::from(&nonuni).parent().expect("scratch dir"));
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Kodaira (1,0) harmonic forms and b1", c1),
        ("(n,0) harmonic forms vanish without integrability", c2),
        ("almost Kahler (p,0) harmonic forms are the closed ones", c3),
        ("almost Kahler Laplacian identity", c4),
        ("harmonic symmetries, number inequalities, star", c5),
        ("ft8 neither pure nor full in degree 4", c6),
        ("function-coefficient computations", c7),
        ("Inoue surfaces have no harmonic (1,0)-forms", c8),
        ("Kodaira pure and full in degree 2", c9),
        ("command line: schema, canonical text, exit codes", c10),
    ];
    let mut failed = 0;
    for (i, (label, run)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()).into())
        });
        match result {
            Ok(()) => println!("PASS {:>2}  {label}", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2}  {label}: {e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
