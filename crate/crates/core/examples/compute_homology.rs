//! Reduced colored Khovanov homology of the trefoil and figure-eight for n = 1, 2.

use std::error::Error;

use coloredkh::diagram::{cable, CableSpec, KnotTable};
use coloredkh::khcomplex::{homology, sliced_homology, AssembleOptions, KhComplex};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let table = KnotTable::bundled();
    for id in ["3_1", "4_1"] {
        let d = table.get(id)?.diagram()?;

        let c = KhComplex::for_knot(&d, &CableSpec::parallel(1), &AssembleOptions::default())?;
        let h = homology(&c)?;
        println!("{id} n=1: {} generators, homology {}", c.total_dim(), h.poincare());
        println!("      rank {}, delta-gradings {:?}", h.total_rank(), h.delta_support());

        // The sliced path builds one quantum grading at a time and never holds
        // the whole complex, which is what larger cables need.
        let t = cable(&d.cut_at_marked(), &CableSpec::parallel(2))?;
        let r = sliced_homology(&t, &AssembleOptions::default())?;
        println!(
            "{id} n=2: {} chain groups, rank {}, width {}",
            r.chain_dims.len(),
            r.homology.total_rank(),
            r.homology.width()
        );
        println!("      {}", r.homology.poincare());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
