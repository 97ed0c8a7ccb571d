use hodge_invariants::manifold::parse;

const TEXT: &str = "
manifold heisenberg_x_r
dim 4
d e3 = -e1^e2      # the only bracket
acs phi1 = e1 + i e2
acs phi2 = e3 + i e4
metric flat : 2omega = 2 e1^e2 + 2 e3^e4
";

fn main() {
    let file = match parse(TEXT) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    print!("{}", file.serialize());
    let m = file.build().unwrap();
    println!("# betti {:?}, integrable {}", m.bigrading.lie().betti_numbers().unwrap(), m.bigrading.is_integrable());

    match parse("manifold bad\ndim 4\nd e3 = 0.5 e1^e2\n") {
        Ok(_) => unreachable!(),
        Err(e) => println!("# rejected: {e}"),
    }
}
