//! Walking the cube of resolutions of the 2-cable of the trefoil: which states
//! backtrack, how many circles the rest carry, and what each edge does.

use std::collections::BTreeMap;
use std::error::Error;

use coloredkh::diagram::{cable, CableSpec, KnotTable};
use coloredkh::khcomplex::{check_state_locally, grading, rank_predictor};
use coloredkh::resolve::{enumerate_cube, saddle_classify, ResolutionState, SaddleKind, DEFAULT_CUBE_BOUND};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let knot = KnotTable::bundled().get("3_1")?.diagram()?;
    let t = cable(&knot.cut_at_marked(), &CableSpec::parallel(2))?;
    let l = t.crossing_count();
    println!("2-cable of 3_1 cut open: {l} crossings, {} states", 1u64 << l);

    let mut live = 0usize;
    let mut by_circles: BTreeMap<usize, usize> = BTreeMap::new();
    let mut chain_rank = 0u64;
    for (_, rt) in enumerate_cube(&t, DEFAULT_CUBE_BOUND)? {
        let r = rank_predictor(&rt);
        chain_rank += r;
        if r > 0 {
            live += 1;
            *by_circles.entry(rt.circle_count()).or_default() += 1;
        }
    }
    println!("{live} states survive; by circle count {by_circles:?}; total rank {chain_rank}");

    // The all-zero state and its outgoing saddles.
    let s = ResolutionState::new(0, l);
    let (mut merges, mut splits, mut zeros) = (0, 0, 0);
    for c in 0..l {
        match saddle_classify(&t, s, c)? {
            SaddleKind::Merge { .. } => merges += 1,
            SaddleKind::Split { .. } => splits += 1,
            SaddleKind::Zero => zeros += 1,
        }
    }
    println!("edges out of state 0: {merges} merges, {splits} splits, {zeros} zero maps");

    let (i, j) = grading(t.n_plus(), t.n_minus(), 0, 0, 0);
    println!("lowest generator of state 0 sits at (i, j) = ({i}, {j})");

    let check = check_state_locally(&t, 0)?;
    println!(
        "local check at state 0: {} edges, {} squares, passed = {}",
        check.edges,
        check.squares,
        check.passed()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
