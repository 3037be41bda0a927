//! Rank, kernels and homology over GF(2), sparse and dense.

use std::error::Error;

use coloredkh::gf2::{homology_dim, BitMatrix, BitVec, SparseGF2Matrix};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // Boundary of a triangle. Matrices act on columns: the edge e0 = v0v1
    // is column 0 and has ones in rows 0 and 1.
    let d1 = SparseGF2Matrix::from_rows(3, vec![vec![0, 2], vec![0, 1], vec![1, 2]])?;
    println!(
        "d1: {}x{}, {} entries, rank {}",
        d1.row_count(),
        d1.col_count(),
        d1.nnz(),
        d1.rank()
    );
    println!("kernel dimension {}", d1.kernel_dim());

    let d2 = SparseGF2Matrix::from_rows(1, vec![vec![0], vec![0], vec![0]])?;
    println!("d1 * d2 = 0: {}", d1.mul(&d2)?.is_zero());
    println!("H_1 of the filled triangle: {}", homology_dim(&d2, &d1)?);
    let none = SparseGF2Matrix::zeros(3, 0);
    println!("H_1 of the hollow triangle: {}", homology_dim(&none, &d1)?);

    let dense: BitMatrix = d1.to_dense();
    for v in dense.transpose().kernel_basis() {
        println!("left kernel vector: {:?}", v.ones().collect::<Vec<_>>());
    }
    let mut v = BitVec::from_indices(3, [0, 2]);
    v.xor_assign(&BitVec::from_indices(3, [2]));
    println!("{:?} has {} ones", v.ones().collect::<Vec<_>>(), v.count_ones());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
