//! Homological widths of the 2-colored homology next to the genus.

use std::error::Error;

use coloredkh::jobs::{self, to_csv, JobConfig};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let subjects = jobs::select_knots(&["3_1,4_1,5_1".to_string()])?;
    let rows = jobs::width_table(&subjects, &[1, 2], &JobConfig::default());
    print!("{}", to_csv(&rows)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
