//! Ranks over diagrams of the unknot and a few small knots. Unknot diagrams
//! should give rank 1; knotted ones more.

use std::error::Error;

use coloredkh::jobs::{self, to_csv, JobConfig};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let subjects = jobs::select_knots(&["0_1,0_1/k1,0_1/k2,3_1,4_1".to_string()])?;
    let table = jobs::sweep(&subjects, &[1, 2], &JobConfig::default());
    print!("{}", to_csv(&table.rows)?);
    println!("exit code {}", table.exit_code());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
