//! `d * (f phi1)` for constant `f` under a metric with function coefficients.

use hodge_invariants::corpus;
use hodge_invariants::report::{sigma_form, Check};
use hodge_invariants::symbolic::dstar_sigma;

fn main() {
    for name in ["kodaira", "nil4", "rxsol3"] {
        let m = corpus::entry(name).unwrap().model();
        let fr = m.symbolic_frame().unwrap();
        let r = dstar_sigma(&fr, m.pattern(None).unwrap(), "f").unwrap();
        println!("{name:<8} *sigma   = {}", fr.render_form(&r.star_sigma));
        println!("{name:<8} d*sigma  = ({}) top", r.text);
    }

    let m = corpus::entry("kodaira").unwrap().model();
    let (fr, d) = sigma_form(&m, Check::DSigma).unwrap();
    println!("\nKodaira, d(f phi1 + g phi2) = {}", fr.render_form(&d));
}
