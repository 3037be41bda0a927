//! The consistency checks behind `coloredkh verify`, first clean, then with a
//! corrupted differential.

use std::error::Error;

use coloredkh::jobs::{self, Faults, JobConfig, VerifyOptions, VerifyRecord, VerifyStatus};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let subjects = jobs::select_knots(&["3_1,4_1".to_string()])?;
    let cfg = JobConfig::default();
    let records = jobs::verify(&subjects, &[1, 2], &cfg, &VerifyOptions::default());
    for r in &records {
        println!("{:?} {} {} n={}: {}", r.status, r.check, r.subject, r.n, r.detail);
    }
    println!("exit code {}", VerifyRecord::exit_code(&records));

    let faulty = VerifyOptions {
        faults: Faults {
            corrupt_edge: true,
            ..Faults::default()
        },
        ..VerifyOptions::default()
    };
    let records = jobs::verify(&subjects[..1], &[1], &cfg, &faulty);
    for r in records.iter().filter(|r| r.status == VerifyStatus::Fail) {
        println!("caught: {} {}", r.check, r.detail);
    }
    println!("exit code with a corrupted edge {}", VerifyRecord::exit_code(&records));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
