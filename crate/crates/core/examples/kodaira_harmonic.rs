//! Harmonic (1,0)-forms on the primary Kodaira surface for each bundled metric.
//!
//! Every invariant Hermitian metric gives the same one-dimensional space,
//! spanned by the holomorphic form phi1 = e2 + i e3.

use hodge_invariants::corpus;
use hodge_invariants::hodge::HarmonicKind;

fn main() {
    let m = corpus::entry("kodaira").unwrap().model();
    for name in m.metric_names() {
        let h = m.hermitian(Some(name)).unwrap();
        let s = h.harmonic_space(HarmonicKind::D, 1, 0).unwrap();
        let basis: Vec<String> = s.space.basis().iter().map(|f| f.to_string()).collect();
        println!("{name:<4} h^(1,0)_d = {}  [{}]", s.number, basis.join(", "));
    }
    let t = m.hermitian(None).unwrap().number_table().unwrap();
    println!("h_d    = {:?}", t.h_d);
    println!("h_dbar = {:?}", t.h_dbar);
}
