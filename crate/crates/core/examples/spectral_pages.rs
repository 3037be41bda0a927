//! Pages of a filtered complex: a small hand-made one, then the trefoil cube
//! filtered by homological degree.

use std::error::Error;

use coloredkh::diagram::{CableSpec, KnotTable};
use coloredkh::gf2::SparseGF2Matrix;
use coloredkh::khcomplex::{homology, AssembleOptions, KhComplex};
use coloredkh::spectral::{pages, FilteredComplex};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // a -> b jumps two filtration levels, so d_2 is the first page
    // differential to see it. c -> d stays inside level 0 and d_0 kills it.
    let d = SparseGF2Matrix::from_rows(4, vec![vec![1], vec![], vec![3], vec![]])?;
    let f = FilteredComplex::new(vec![0, 2, 0, 0], vec![0, 0, 1, 1], d)?;
    let ss = pages(&f, 3)?;
    for p in &ss.pages {
        println!("E_{}: total {} {:?}", p.r, p.total_dim(), p.dims);
    }
    println!("stabilizes at E_{}, E_inf = {:?}", ss.stabilized_at, ss.e_infinity);

    let knot = KnotTable::bundled().get("3_1")?.diagram()?;
    let c = KhComplex::for_knot(&knot, &CableSpec::parallel(1), &AssembleOptions::default())?;
    let ss = pages(&FilteredComplex::from_kh_cube(&c), 3)?;
    let kh = homology(&c)?;
    for p in &ss.pages {
        println!("trefoil E_{}: total {}", p.r, p.total_dim());
    }
    println!(
        "Kh rank {}, E_inf total {}",
        kh.total_rank(),
        ss.e_infinity.values().sum::<usize>()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
