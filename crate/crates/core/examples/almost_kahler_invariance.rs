//! On the Kodaira-Thurston manifold the harmonic (1,0)-forms are the same for every
//! almost Kahler metric, and the Laplacian identity
//! `Delta_delbar + Delta_mu = Delta_del + Delta_mubar` holds exactly.

use hodge_invariants::bigraded::DPart;
use hodge_invariants::corpus;
use hodge_invariants::hodge::{HarmonicKind, Operator};

fn main() {
    let m = corpus::entry("kodaira_thurston_ak").unwrap().model();
    let mut first = None;
    for name in m.metric_names() {
        let h = m.hermitian(Some(name)).unwrap();
        let s = h.harmonic_space(HarmonicKind::D, 1, 0).unwrap().space;
        let same = first.get_or_insert_with(|| s.clone()) == &s;
        let mut identity = true;
        for p in 0..=2 {
            for q in 0..=2 {
                let lap = |x| h.operator_matrix(Operator::Laplacian(x), p, q).unwrap();
                identity &= lap(DPart::Delbar).add(&lap(DPart::Mu)) == lap(DPart::Del).add(&lap(DPart::Mubar));
            }
        }
        println!(
            "{name:<4} almost Kahler {:<5}  h^(1,0)_d = {}  same space as first: {same:<5}  Laplacian identity: {identity}",
            h.is_almost_kahler(),
            s.dimension()
        );
    }
}
