//! Random search for small grids with prescribed classical invariants and
//! Alexander polynomial, reporting the `η` verdict of each hit.
//!
//! `cargo run --release --example corpus_search -- <n> <tb> <r> <coeffs> [seed] [tries]`
//! where `coeffs` lists the Alexander coefficients from the lowest degree,
//! e.g. `2,-3,2`.

use gridcable::invariants::{alexander_polynomial, eta_vanishes, tau};
use gridcable::{GridDiagram, Limits};
use rand::seq::SliceRandom;
use rand::{rngs::StdRng, SeedableRng};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args[0].parse().expect("n");
    let tb: i64 = args[1].parse().expect("tb");
    let r: i64 = args[2].parse().expect("r");
    let coeffs: Vec<i64> = args[3].split(',').map(|c| c.parse().expect("coefficient")).collect();
    let seed: u64 = args.get(4).map_or(1, |s| s.parse().expect("seed"));
    let tries: u64 = args.get(5).map_or(20_000_000, |s| s.parse().expect("tries"));
    let limits = Limits::default();
    let mut rng = StdRng::seed_from_u64(seed);
    let (mut x, mut o): (Vec<usize>, Vec<usize>) = ((0..n).collect(), (0..n).collect());
    let mut seen = std::collections::HashSet::new();
    let mut verdicts = [false; 2];
    for _ in 0..tries {
        x.shuffle(&mut rng);
        o.shuffle(&mut rng);
        let Ok(d) = GridDiagram::new(x.clone(), o.clone()) else { continue };
        let ci = d.classical_invariants();
        if ci.tb != tb || ci.r != r || d.components().count != 1 {
            continue;
        }
        let alex = alexander_polynomial(&d, &limits).expect("knot");
        if alex.coefficients != coeffs || !seen.insert(d.clone()) {
            continue;
        }
        let eta = eta_vanishes(&d, &limits).expect("materializable").vanishes;
        println!("eta_vanishes={eta} tau={} X={:?} O={:?}", tau(&d, &limits).expect("knot"), d.x_cols(), d.o_cols());
        verdicts[eta as usize] = true;
        if verdicts == [true, true] {
            break;
        }
    }
}
