//! Colored Jones polynomials from the Kauffman bracket, compared with the
//! graded Euler characteristic of the cube.

use std::error::Error;

use coloredkh::diagram::{cable, CableSpec, KnotTable};
use coloredkh::jonesoracle::{colored_jones_reduced, jones, ConventionMap, LinkDiagram, DEFAULT_ORACLE_BOUND};
use coloredkh::khcomplex::{sliced_homology, AssembleOptions};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let table = KnotTable::bundled();
    let map = ConventionMap::FROZEN;
    println!("convention: {}", map.describe());

    for id in ["3_1", "4_1", "5_1"] {
        let d = table.get(id)?.diagram()?;
        println!(
            "{id}: V(q) = {}",
            jones(&LinkDiagram::from_knot(&d), DEFAULT_ORACLE_BOUND)?
        );
        for n in 1..=2 {
            let j = colored_jones_reduced(&d, n, DEFAULT_ORACLE_BOUND)?;
            let expected = map.apply(&j, d.writhe(), n);
            let t = cable(&d.cut_at_marked(), &CableSpec::parallel(n))?;
            let chi = sliced_homology(&t, &AssembleOptions::default())?.chain_euler_characteristic();
            println!("  n={n}: J = {j}");
            println!("       chi = {chi}  (matches: {})", chi == expected);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
