use hodge_invariants::corpus::CORPUS;
use hodge_invariants::hodge::HarmonicKind;
use hodge_invariants::Form;

// When J is not integrable the top (n,0)-form is not closed, and no metric has
// a harmonic (n,0)-form.
fn main() {
    for e in CORPUS.iter().filter(|e| !e.integrable) {
        let m = e.model();
        let b = &m.bigrading;
        let n = b.n();
        let top = (1..n).fold(b.frame().theta(0), |acc: Form, a| &acc ^ &b.frame().theta(a));
        let d = b.lie().differential(&top).unwrap();
        let numbers: Vec<usize> = m
            .metric_names()
            .into_iter()
            .map(|name| m.hermitian(Some(name)).unwrap().harmonic_space(HarmonicKind::D, n, 0).unwrap().number)
            .collect();
        println!("{:<20} d(top) = {}   h^({n},0)_d per metric: {numbers:?}", e.name, b.frame().render_theta(&d));
    }
}
