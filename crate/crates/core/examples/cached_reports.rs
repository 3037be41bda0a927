//! Computing through an on-disk cache and writing JSON and CSV reports.

use std::error::Error;

use coloredkh::jobs::{self, to_csv, to_json, Cache, DimRow, JobConfig, Subject};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let dir = std::env::temp_dir().join(format!("coloredkh-example-{}", std::process::id()));
    let cfg = JobConfig {
        cache: Some(Cache::new(&dir)),
        ..JobConfig::default()
    };
    let s = Subject::from_table("3_1")?;
    let (report, first) = jobs::compute(&s, 2, &cfg)?;
    let (_, second) = jobs::compute(&s, 2, &cfg)?;
    println!("first call {first:?}, second call {second:?}");
    print!("{}", to_json(&report)?);
    print!("{}", to_csv(&DimRow::from_reports(std::slice::from_ref(&report)))?);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
