use hodge_invariants::corpus::CORPUS;

// Betti numbers of every bundled Lie algebra, with its class.
fn main() {
    println!("{:<22} {:<20} betti", "manifold", "class");
    for e in CORPUS {
        let m = e.model();
        let b = m.bigrading.lie().betti_numbers().expect("valid presentation");
        let b: Vec<String> = b.iter().map(|x| x.to_string()).collect();
        println!("{:<22} {:<20} {}", e.name, e.class.name(), b.join(" "));
    }

    let kod = hodge_invariants::corpus::entry("kodaira").unwrap().model();
    let h1 = kod.bigrading.lie().cohomology(1).unwrap();
    println!("\nKodaira H^1 representatives:");
    for r in h1.representatives {
        println!("  {r}");
    }
}
