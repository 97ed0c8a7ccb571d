use hodge_invariants::corpus;
use hodge_invariants::invariants::{gpm_report, stage_report};

fn main() {
    let m = corpus::entry("ft8").unwrap().model();
    for stage in [2, 4] {
        let r = stage_report(&m.bigrading, stage).unwrap();
        println!(
            "stage {stage}: b = {}, J+ {}, J- {}, meet {}, sum {}  pure {} full {}",
            r.betti, r.dim_plus, r.dim_minus, r.dim_intersection, r.dim_sum, r.pure, r.full
        );
        if let Some(w) = r.purity_witness {
            println!("  same class: {}  and  {}", w.plus, w.minus);
        }
        if let Some(w) = r.fullness_witness {
            println!("  {} kills H+ and H-, pairs {} with {}", w.annihilator, w.pairing, w.outside);
        }
    }

    // Refining by the star instead.
    let g = gpm_report(&m.hermitian(None).unwrap()).unwrap();
    println!("g+/g- refinement {:?}, intersections {:?}, {} of {}", g.refined, g.intersections, g.dim_refined_sum, g.betti);
}
