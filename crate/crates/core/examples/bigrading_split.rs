//! The four components of d on a non-integrable structure.

use hodge_invariants::bigraded::DPart;
use hodge_invariants::corpus;

fn main() {
    let m = corpus::entry("nil4").unwrap().model();
    let b = &m.bigrading;
    println!("integrable: {}", b.is_integrable());
    for a in 0..b.n() {
        let phi = b.frame().theta(a);
        let s = b.split_d(&phi).unwrap();
        println!("d phi{}:", a + 1);
        for (part, piece) in [(DPart::Mu, &s.mu), (DPart::Del, &s.del), (DPart::Delbar, &s.delbar), (DPart::Mubar, &s.mubar)] {
            if !piece.is_zero() {
                println!("  {:<7} {}", part.name(), b.frame().render_theta(piece));
            }
        }
    }
}
