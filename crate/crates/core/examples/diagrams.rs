//! Parsing PD codes, reading the bundled table, mirroring, cutting and cabling.

use std::error::Error;

use coloredkh::diagram::{cable, parse_pd, CableSpec, CrossingSign, KnotDiagram, KnotTable};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let trefoil = parse_pd("X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]")?.with_name("trefoil");
    println!(
        "{}: {} crossings, writhe {}, marked edge {}",
        trefoil.name().unwrap_or("?"),
        trefoil.crossing_count(),
        trefoil.writhe(),
        trefoil.marked_edge()
    );
    let mirror = trefoil.mirror();
    println!("mirror: writhe {}, PD {}", mirror.writhe(), mirror.to_pd_string());

    let kinked = trefoil.add_kink(1, CrossingSign::Positive)?;
    println!(
        "with a positive kink: {} crossings, writhe {}",
        kinked.crossing_count(),
        kinked.writhe()
    );

    let braid = KnotDiagram::from_braid(2, &[1, 1, 1])?;
    println!(
        "closure of s1^3: {} crossings, writhe {}",
        braid.crossing_count(),
        braid.writhe()
    );

    let table = KnotTable::bundled();
    for e in table.knots().take(6) {
        let d = e.diagram()?;
        let variants: Vec<&str> = table.variants_of(&e.id).map(|v| v.id.as_str()).collect();
        println!(
            "{:>4}  l={:<2} w={:<3} variants {:?}",
            e.id,
            d.crossing_count(),
            d.writhe(),
            variants
        );
    }

    let tangle = trefoil.cut_at_marked();
    for spec in [
        CableSpec::parallel(2),
        CableSpec::alternating(2),
        CableSpec::parallel(3),
    ] {
        let c = cable(&tangle, &spec)?;
        println!(
            "{} cable: {} crossings, {} segments, n+ = {}, n- = {}",
            spec.pattern_tag(),
            c.crossing_count(),
            c.segment_count(),
            c.n_plus(),
            c.n_minus()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
