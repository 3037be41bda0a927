//! The verification suite: structural checks on the cube, Euler
//! characteristics against the oracle, and invariance under mirroring,
//! basepoint moves and alternative diagrams.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{chi_check, exit, grid, Check, JobConfig, JobError, Subject};
use crate::diagram::{CableSpec, KnotTable};
use crate::jonesoracle::ConventionMap;
use crate::khcomplex::{
    assemble_with, check_state_locally, grading, rank_predictor, sliced_homology, vertex_space, KhHomology, LocalCheck,
};
use crate::resolve::enumerate_cube;

/// Deliberate faults, to show the checks can fail.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Faults {
    /// Toggle one entry of the differential before checking `d∘d`.
    pub corrupt_edge: bool,
    /// Compare Euler characteristics through the convention map with its
    /// `q -> q^-1` inversion toggled.
    pub flip_convention: bool,
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Largest cable crossing count whose whole complex is assembled for
    /// the `d∘d` and dimension checks.
    pub exhaustive_bound: usize,
    /// Largest cable crossing count for checks that compute several
    /// homologies (mirror, basepoint, alternative diagrams).
    pub pair_bound: usize,
    /// Random states checked locally; every state when the cube is smaller.
    pub samples: usize,
    pub seed: u64,
    pub faults: Faults,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            exhaustive_bound: 12,
            pair_bound: 12,
            samples: 100,
            seed: 0,
            faults: Faults::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyRecord {
    pub check: String,
    pub subject: String,
    pub n: usize,
    pub status: VerifyStatus,
    pub detail: String,
}

impl VerifyRecord {
    pub fn exit_code(records: &[VerifyRecord]) -> i32 {
        if records.iter().any(|r| r.status == VerifyStatus::Fail) {
            exit::INVARIANT_VIOLATION
        } else {
            exit::SUCCESS
        }
    }
}

struct Recorder<'a> {
    subject: &'a str,
    n: usize,
    out: Vec<VerifyRecord>,
}

impl Recorder<'_> {
    fn push(&mut self, check: &str, status: VerifyStatus, detail: impl Into<String>) {
        self.out.push(VerifyRecord {
            check: check.into(),
            subject: self.subject.into(),
            n: self.n,
            status,
            detail: detail.into(),
        });
    }

    fn pass_if(&mut self, check: &str, ok: bool, detail: impl Into<String>) {
        let status = if ok { VerifyStatus::Pass } else { VerifyStatus::Fail };
        self.push(check, status, detail);
    }

    fn error(&mut self, check: &str, e: &JobError) {
        let status = if e.is_resource_bound() {
            VerifyStatus::Skipped
        } else {
            VerifyStatus::Fail
        };
        self.push(check, status, e.to_string());
    }
}

/// Runs every check on every `(subject, n)`; records come back in a fixed
/// order whatever the thread count.
pub fn verify(subjects: &[Subject], ns: &[usize], cfg: &JobConfig, opts: &VerifyOptions) -> Vec<VerifyRecord> {
    grid(subjects, ns)
        .into_par_iter()
        .map(|(k, n)| {
            let s = &subjects[k];
            let mut rec = Recorder {
                subject: &s.id,
                n,
                out: Vec::new(),
            };
            verify_one(s, n, cfg, opts, &mut rec);
            rec.out
        })
        .flatten()
        .collect()
}

fn verify_one(s: &Subject, n: usize, cfg: &JobConfig, opts: &VerifyOptions, rec: &mut Recorder) {
    let l = n * n * s.diagram.crossing_count();
    if let Err(e) = structural(s, n, cfg, opts, rec) {
        rec.error("structure", &e);
    }
    if l > cfg.cube_bound {
        rec.push(
            "homology",
            VerifyStatus::Skipped,
            format!("{l} cable crossings above the cube bound"),
        );
        return;
    }
    let h = match euler(s, n, cfg, opts, rec) {
        Ok(h) => h,
        Err(e) => return rec.error("chi", &e),
    };
    if l > opts.pair_bound {
        let why = format!("{l} cable crossings above the pair bound {}", opts.pair_bound);
        for check in ["mirror", "basepoint", "diagram_invariance"] {
            rec.push(check, VerifyStatus::Skipped, why.clone());
        }
        return;
    }
    if let Err(e) = mirror(s, n, cfg, &h, rec) {
        rec.error("mirror", &e);
    }
    if let Err(e) = basepoint(s, n, cfg, &h, rec) {
        rec.error("basepoint", &e);
    }
    if let Err(e) = diagrams(s, n, cfg, opts, &h, rec) {
        rec.error("diagram_invariance", &e);
    }
}

fn seed_for(s: &Subject, n: usize, seed: u64) -> u64 {
    let h = Sha256::digest(format!("{}/{n}/{seed}", s.id).as_bytes());
    u64::from_le_bytes(h[..8].try_into().expect("8 bytes"))
}

/// `d∘d`, grading homogeneity and the rank predictor.
fn structural(
    s: &Subject,
    n: usize,
    cfg: &JobConfig,
    opts: &VerifyOptions,
    rec: &mut Recorder,
) -> Result<(), JobError> {
    let t = cfg.cable(s, n)?;
    let l = t.crossing_count();

    let states: Vec<u64> = if l < 64 && (1u64 << l) <= opts.samples as u64 {
        (0..1u64 << l).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed_for(s, n, opts.seed));
        let mask = if l >= 64 { u64::MAX } else { (1u64 << l) - 1 };
        (0..opts.samples).map(|_| rng.gen::<u64>() & mask).collect()
    };
    let local = states
        .par_iter()
        .map(|&b| check_state_locally(&t, b).map(|c| (b, c)))
        .collect::<Result<Vec<(u64, LocalCheck)>, _>>()?;
    let scope = if states.len() as u128 == 1u128 << l {
        format!("all {} states", states.len())
    } else {
        format!("{} random states", states.len())
    };
    let bad_grading: Vec<_> = local
        .iter()
        .filter(|(_, c)| !c.inhomogeneous_edges.is_empty())
        .collect();
    let edges: usize = local.iter().map(|(_, c)| c.edges).sum();
    rec.pass_if(
        "grading",
        bad_grading.is_empty(),
        match bad_grading.first() {
            None => format!("{edges} edge maps out of {scope}"),
            Some((b, c)) => format!("state {b:#x}, crossings {:?}", c.inhomogeneous_edges),
        },
    );

    let exhaustive = l <= opts.exhaustive_bound || (opts.faults.corrupt_edge && l <= cfg.cube_bound);
    if exhaustive {
        let mut c = assemble_with(&t, &cfg.assemble_options())?;
        let mut note = format!("assembled complex, {} generators", c.total_dim());
        if opts.faults.corrupt_edge {
            match c.inject_fault() {
                Some(((i, j), src, dst)) => {
                    note.push_str(&format!("; injected fault at block ({i}, {j}), entry {src} -> {dst}"))
                }
                None => note.push_str("; no two consecutive nonzero maps to corrupt"),
            }
        }
        match c.check_d_squared() {
            Ok(()) => rec.push("d_squared", VerifyStatus::Pass, note),
            Err(e) => rec.push("d_squared", VerifyStatus::Fail, format!("{e} ({note})")),
        }
        rank_predictor_exhaustive(&t, cfg, &c.block_dims(), rec)?;
    } else {
        let bad: Vec<_> = local
            .iter()
            .filter(|(_, c)| !c.noncommuting_squares.is_empty())
            .collect();
        let squares: usize = local.iter().map(|(_, c)| c.squares).sum();
        rec.pass_if(
            "d_squared",
            bad.is_empty(),
            match bad.first() {
                None => format!("{squares} squares at {scope}"),
                Some((b, c)) => format!("state {b:#x}, squares {:?}", c.noncommuting_squares),
            },
        );
        let mut resolver = crate::resolve::Resolver::new(&t);
        let mut mismatches = 0;
        for &b in &states {
            let st = crate::resolve::ResolutionState::new(b, l);
            let rt = resolver.resolve(st)?;
            let predicted = rank_predictor(&rt);
            if predicted != vertex_space(st, rt).dim() as u64 {
                mismatches += 1;
            }
        }
        rec.pass_if(
            "rank_predictor",
            mismatches == 0,
            format!("{} of {scope} disagree", mismatches),
        );
    }
    Ok(())
}

/// Per-state ranks against vertex spaces, and their graded sum against the
/// block dimensions of the assembled complex.
fn rank_predictor_exhaustive(
    t: &crate::diagram::TangleDiagram,
    cfg: &JobConfig,
    blocks: &BTreeMap<(i32, i32), usize>,
    rec: &mut Recorder,
) -> Result<(), JobError> {
    let (np, nm) = (t.n_plus(), t.n_minus());
    let mut counted: BTreeMap<(i32, i32), usize> = BTreeMap::new();
    let mut mismatches = 0usize;
    let mut states = 0usize;
    for (st, rt) in enumerate_cube(t, cfg.cube_bound)? {
        states += 1;
        let predicted = rank_predictor(&rt);
        let k = rt.circle_count() as u32;
        if predicted != vertex_space(st, rt).dim() as u64 {
            mismatches += 1;
        }
        for m in 0..predicted as u32 {
            *counted
                .entry(grading(np, nm, st.weight(), k, m.count_ones()))
                .or_default() += 1;
        }
    }
    let graded_ok = counted == *blocks;
    rec.pass_if(
        "rank_predictor",
        mismatches == 0 && graded_ok,
        format!(
            "{mismatches} of {states} states disagree; graded sum {} block dimensions",
            if graded_ok { "matches" } else { "differs from" }
        ),
    );
    Ok(())
}

/// Chain and homology Euler characteristics, and the oracle.
fn euler(
    s: &Subject,
    n: usize,
    cfg: &JobConfig,
    opts: &VerifyOptions,
    rec: &mut Recorder,
) -> Result<KhHomology, JobError> {
    let t = cfg.cable(s, n)?;
    let r = sliced_homology(&t, &cfg.assemble_options())?;
    let (chain, hom) = (r.chain_euler_characteristic(), r.homology.euler_characteristic());
    rec.pass_if(
        "chi_rank_nullity",
        chain == hom,
        if chain == hom {
            format!("chi = {hom}")
        } else {
            format!("chain {chain}, homology {hom}")
        },
    );
    let map = if opts.faults.flip_convention {
        ConventionMap::FROZEN.flipped()
    } else {
        ConventionMap::FROZEN
    };
    let (check, detail) = chi_check(s, n, &r.homology, cfg, &map)?;
    let status = match check {
        Check::Pass => VerifyStatus::Pass,
        Check::Fail => VerifyStatus::Fail,
        Check::Skipped | Check::NotApplicable => VerifyStatus::Skipped,
    };
    rec.push("chi_oracle", status, detail);
    Ok(r.homology)
}

fn homology_of(d: &crate::diagram::KnotDiagram, n: usize, cfg: &JobConfig) -> Result<KhHomology, JobError> {
    let spec = cfg.orientation.spec(n)?;
    let t = crate::diagram::cable(&d.cut_at_marked(), &spec)?;
    Ok(sliced_homology(&t, &cfg.assemble_options())?.homology)
}

fn mirror(s: &Subject, n: usize, cfg: &JobConfig, h: &KhHomology, rec: &mut Recorder) -> Result<(), JobError> {
    let m = homology_of(&cfg.diagram(s).mirror(), n, cfg)?;
    rec.pass_if(
        "mirror",
        *m.dims() == h.reflected(),
        format!(
            "mirror has rank {}, {} has rank {}",
            m.total_rank(),
            s.id,
            h.total_rank()
        ),
    );
    Ok(())
}

fn basepoint(s: &Subject, n: usize, cfg: &JobConfig, h: &KhHomology, rec: &mut Recorder) -> Result<(), JobError> {
    let d = cfg.diagram(s);
    let mut differing = Vec::new();
    let edges = d.edge_labels();
    for &e in &edges {
        if e == d.marked_edge() {
            continue;
        }
        if homology_of(&d.clone().with_marked_edge(e)?, n, cfg)?.dims() != h.dims() {
            differing.push(e);
        }
    }
    rec.pass_if(
        "basepoint",
        differing.is_empty(),
        if differing.is_empty() {
            format!("{} marked edges agree", edges.len())
        } else {
            format!("marked edges {differing:?} differ")
        },
    );
    Ok(())
}

/// Translation taking `a` onto `b`, if the two agree up to one.
fn translation(a: &BTreeMap<(i32, i32), usize>, b: &BTreeMap<(i32, i32), usize>) -> Option<(i32, i32)> {
    let (&(ia, ja), _) = a.iter().next()?;
    let (&(ib, jb), _) = b.iter().next()?;
    let (di, dj) = (ib - ia, jb - ja);
    let moved: BTreeMap<_, _> = a.iter().map(|(&(i, j), &d)| ((i + di, j + dj), d)).collect();
    (moved == *b).then_some((di, dj))
}

/// Alternative table diagrams of the same knot agree up to a bigrading
/// translation, which for parallel cables must be `(0, shift)` with the
/// shift predicted from the writhe difference.
fn diagrams(
    s: &Subject,
    n: usize,
    cfg: &JobConfig,
    opts: &VerifyOptions,
    h: &KhHomology,
    rec: &mut Recorder,
) -> Result<(), JobError> {
    let Some(entry) = s.entry.filter(|e| !e.is_variant()) else {
        rec.push("diagram_invariance", VerifyStatus::Skipped, "no alternative diagrams");
        return Ok(());
    };
    let parallel = cfg.orientation.spec(n)? == CableSpec::parallel(n);
    let w = cfg.diagram(s).writhe();
    let mut any = false;
    for v in KnotTable::bundled().variants_of(&entry.knot) {
        let vs = Subject::from_table(&v.id)?;
        let l = n * n * v.crossing_count();
        let check = format!("diagram_invariance:{}", v.id);
        if l > opts.pair_bound {
            rec.push(
                &check,
                VerifyStatus::Skipped,
                format!("{l} cable crossings above the pair bound"),
            );
            continue;
        }
        any = true;
        let vd = cfg.diagram(&vs);
        let hv = homology_of(&vd, n, cfg)?;
        let predicted = (0, ConventionMap::FROZEN.q_shift(vd.writhe() - w, n));
        match translation(h.dims(), hv.dims()) {
            None => rec.push(&check, VerifyStatus::Fail, "not related by a translation"),
            Some(shift) if !parallel => rec.push(&check, VerifyStatus::Pass, format!("translated by {shift:?}")),
            Some(shift) => rec.pass_if(
                &check,
                shift == predicted,
                format!("translated by {shift:?}, predicted {predicted:?}"),
            ),
        }
    }
    if !any {
        rec.push(
            "diagram_invariance",
            VerifyStatus::Skipped,
            "no alternative diagram within the pair bound",
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jobs::select_knots;

    fn statuses(r: &[VerifyRecord], check: &str) -> Vec<VerifyStatus> {
        r.iter()
            .filter(|x| x.check.starts_with(check))
            .map(|x| x.status)
            .collect()
    }

    #[test]
    fn default_suite_passes_on_small_knots() {
        let s = select_knots(&["0_1,3_1,4_1".into()]).unwrap();
        let r = verify(&s, &[1], &JobConfig::default(), &VerifyOptions::default());
        assert_eq!(VerifyRecord::exit_code(&r), exit::SUCCESS, "{r:#?}");
        assert_eq!(statuses(&r, "diagram_invariance:3_1"), [VerifyStatus::Pass; 3]);
        assert_eq!(statuses(&r, "basepoint"), [VerifyStatus::Pass; 3]);
    }

    #[test]
    fn corrupt_edge_is_detected() {
        let s = select_knots(&["3_1".into()]).unwrap();
        let opts = VerifyOptions {
            faults: Faults {
                corrupt_edge: true,
                ..Faults::default()
            },
            ..VerifyOptions::default()
        };
        let r = verify(&s, &[1], &JobConfig::default(), &opts);
        assert_eq!(statuses(&r, "d_squared"), [VerifyStatus::Fail]);
        assert_eq!(VerifyRecord::exit_code(&r), exit::INVARIANT_VIOLATION);
    }

    #[test]
    fn flipped_convention_fails_on_chiral_knots() {
        let s = select_knots(&["3_1,4_1".into()]).unwrap();
        let opts = VerifyOptions {
            faults: Faults {
                flip_convention: true,
                ..Faults::default()
            },
            ..VerifyOptions::default()
        };
        let r = verify(&s, &[1], &JobConfig::default(), &opts);
        // the figure-eight is amphichiral, so only the trefoil notices
        assert_eq!(statuses(&r, "chi_oracle"), [VerifyStatus::Fail, VerifyStatus::Pass]);
    }

    #[test]
    fn sampled_checks_on_larger_cables() {
        let s = select_knots(&["5_2".into()]).unwrap();
        let opts = VerifyOptions {
            samples: 10,
            pair_bound: 0,
            ..VerifyOptions::default()
        };
        let cfg = JobConfig {
            cube_bound: 12,
            ..JobConfig::default()
        };
        let r = verify(&s, &[2], &cfg, &opts);
        assert_eq!(statuses(&r, "d_squared"), [VerifyStatus::Pass]);
        assert!(r
            .iter()
            .any(|x| x.check == "d_squared" && x.detail.contains("10 random states")));
        assert_eq!(statuses(&r, "homology"), [VerifyStatus::Skipped]);
        assert_eq!(VerifyRecord::exit_code(&r), exit::SUCCESS);
    }

    #[test]
    fn translations() {
        let a = BTreeMap::from([((0, 1), 1), ((2, 5), 1)]);
        let b = BTreeMap::from([((0, -1), 1), ((2, 3), 1)]);
        assert_eq!(translation(&a, &b), Some((0, -2)));
        assert_eq!(translation(&a, &BTreeMap::from([((0, 0), 2)])), None);
    }
}
