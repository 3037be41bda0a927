//! Batch computations behind the command-line tool: knot selection,
//! cached single computations, table sweeps, width tables, verification
//! suites, spectral-sequence pages and per-state dumps.
//!
//! Every job produces plain serializable rows in a deterministic order, so
//! the same job gives byte-identical output at any thread count and with
//! or without a warm cache.

mod cache;
mod output;
mod verify;

pub use cache::{cache_dir_from, cache_key, Cache, CacheStatus, CACHE_ENV};
pub use output::{to_csv, to_json, to_jsonl, DimRow, Format, PageRow};
pub use verify::{verify, Faults, VerifyOptions, VerifyRecord, VerifyStatus};

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{
    cable, parse_pd_line, CableSpec, DiagramError, KnotDiagram, KnotTable, TableEntry, TangleDiagram,
};
use crate::jonesoracle::{colored_jones_reduced, ConventionMap, OracleError, DEFAULT_ORACLE_BOUND};
use crate::khcomplex::{
    assemble_with, sliced_homology, AssembleOptions, ComplexMeta, KhError, KhHomology, KhReport, SCHEMA_VERSION,
};
use crate::resolve::{enumerate_cube, ResolveError, DEFAULT_CUBE_BOUND};
use crate::spectral::{pages, FilteredComplex, PageReport, SpectralError};

/// Version stamp mixed into cache keys; bump when results could change.
pub const CODE_VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "/cube-1");

#[derive(Debug, Error)]
pub enum JobError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Kh(#[from] KhError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Output(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
}

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const INVARIANT_VIOLATION: i32 = 2;
    pub const RESOURCE_BOUND: i32 = 3;
    pub const INPUT_ERROR: i32 = 4;
}

impl JobError {
    pub fn exit_code(&self) -> i32 {
        if self.is_resource_bound() {
            return exit::RESOURCE_BOUND;
        }
        match self {
            JobError::Diagram(_) | JobError::Input(_) | JobError::Io { .. } => exit::INPUT_ERROR,
            JobError::Kh(KhError::Diagram(_)) => exit::INPUT_ERROR,
            JobError::Oracle(OracleError::Diagram(_)) => exit::INPUT_ERROR,
            JobError::Output(_) => exit::INPUT_ERROR,
            _ => exit::INVARIANT_VIOLATION,
        }
    }

    pub fn is_resource_bound(&self) -> bool {
        matches!(
            self,
            JobError::Kh(KhError::Resolve(ResolveError::CubeTooLarge { .. }))
                | JobError::Kh(KhError::TooManyCircles(_))
                | JobError::Oracle(OracleError::TooManyCrossings { .. })
        )
    }
}

impl From<ResolveError> for JobError {
    fn from(e: ResolveError) -> Self {
        JobError::Kh(e.into())
    }
}

/// A diagram to compute on, with table metadata when it came from the table.
#[derive(Debug, Clone)]
pub struct Subject {
    pub id: String,
    pub diagram: KnotDiagram,
    pub entry: Option<&'static TableEntry>,
}

impl Subject {
    pub fn from_table(id: &str) -> Result<Subject, JobError> {
        let entry = KnotTable::bundled().get(id)?;
        Ok(Subject {
            id: entry.id.clone(),
            diagram: entry.diagram()?,
            entry: Some(entry),
        })
    }

    pub fn from_diagram(id: impl Into<String>, diagram: KnotDiagram) -> Subject {
        Subject {
            id: id.into(),
            diagram,
            entry: None,
        }
    }

    /// Known to be the unknot, knotted, or unknown (diagrams from files).
    pub fn is_unknot(&self) -> Option<bool> {
        self.entry.map(TableEntry::is_unknot)
    }
}

/// Resolves knot selectors against the bundled table. A selector is a table
/// id (`3_1`, `3_1/r1`), a comma-separated list of them, `table` (standard
/// diagrams only) or `all` (including the alternative diagrams).
pub fn select_knots(selectors: &[String]) -> Result<Vec<Subject>, JobError> {
    let table = KnotTable::bundled();
    let mut out = Vec::new();
    for sel in selectors.iter().flat_map(|s| s.split(',')) {
        let sel = sel.trim();
        match sel {
            "" => {}
            "table" => out.extend(
                table
                    .knots()
                    .map(|e| Subject::from_table(&e.id))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            "all" => out.extend(
                table
                    .entries()
                    .iter()
                    .map(|e| Subject::from_table(&e.id))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            id => out.push(Subject::from_table(id)?),
        }
    }
    Ok(out)
}

/// Reads a PD file: one diagram per line, as `name: X(...) X(...)` or as a
/// JSON object `{"name": ..., "pd": [...], "marked_edge": ...}`. Blank lines
/// and `#` comments are skipped; unnamed diagrams are named after the file
/// and line.
pub fn read_pd_file(path: &Path) -> Result<Vec<Subject>, JobError> {
    let text = std::fs::read_to_string(path).map_err(|source| JobError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let stem = path
        .file_stem()
        .map_or("pd".into(), |s| s.to_string_lossy().into_owned());
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let d = parse_pd_line(line).map_err(|e| JobError::Input(format!("{}:{}: {e}", path.display(), no + 1)))?;
        let id = d.name().map_or_else(|| format!("{stem}:{}", no + 1), str::to_string);
        out.push(Subject::from_diagram(id, d));
    }
    Ok(out)
}

/// Orientation of the cable strands.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Orientation {
    #[default]
    Parallel,
    Alternating,
    /// Explicit pattern such as `+-+`; its length must equal `n`.
    Pattern(String),
}

impl Orientation {
    pub fn parse(s: &str) -> Result<Orientation, JobError> {
        match s {
            "parallel" => Ok(Orientation::Parallel),
            "alternating" => Ok(Orientation::Alternating),
            tag if !tag.is_empty() && tag.chars().all(|c| c == '+' || c == '-') => Ok(Orientation::Pattern(tag.into())),
            other => Err(JobError::Input(format!(
                "orientation pattern {other:?}: expected parallel, alternating or a +/- string"
            ))),
        }
    }

    pub fn spec(&self, n: usize) -> Result<CableSpec, JobError> {
        if n == 0 {
            return Err(JobError::Input("n must be at least 1".into()));
        }
        match self {
            Orientation::Parallel => Ok(CableSpec::parallel(n)),
            Orientation::Alternating => Ok(CableSpec::alternating(n)),
            Orientation::Pattern(tag) if tag.len() == n => Ok(CableSpec::from_tag(tag)?),
            Orientation::Pattern(tag) => Err(JobError::Input(format!(
                "orientation pattern {tag:?} has {} strands but n = {n}",
                tag.len()
            ))),
        }
    }
}

/// Settings shared by all jobs.
#[derive(Debug, Clone)]
pub struct JobConfig {
    /// Mirror every input diagram first, so reports name Kh of the input
    /// knot rather than of its mirror.
    pub as_mirror: bool,
    pub orientation: Orientation,
    pub cube_bound: usize,
    pub oracle_bound: usize,
    pub cache: Option<Cache>,
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig {
            as_mirror: false,
            orientation: Orientation::Parallel,
            cube_bound: DEFAULT_CUBE_BOUND,
            oracle_bound: DEFAULT_ORACLE_BOUND,
            cache: None,
        }
    }
}

impl JobConfig {
    pub fn diagram(&self, s: &Subject) -> KnotDiagram {
        if self.as_mirror {
            s.diagram.mirror()
        } else {
            s.diagram.clone()
        }
    }

    pub fn cable(&self, s: &Subject, n: usize) -> Result<TangleDiagram, JobError> {
        let spec = self.orientation.spec(n)?;
        Ok(cable(&self.diagram(s).cut_at_marked(), &spec)?)
    }

    fn meta(&self, s: &Subject, n: usize) -> Result<ComplexMeta, JobError> {
        Ok(ComplexMeta {
            knot: Some(s.id.clone()),
            n,
            orientation_pattern: self.orientation.spec(n)?.pattern_tag(),
            mirror_flag: self.as_mirror,
            absolute_gradings: true,
        })
    }

    fn assemble_options(&self) -> AssembleOptions {
        AssembleOptions {
            cube_bound: self.cube_bound,
            j_slice: None,
            check_d_squared: false,
        }
    }

    fn check_cube(&self, s: &Subject, n: usize) -> Result<(), JobError> {
        let l = n * n * s.diagram.crossing_count();
        if l > self.cube_bound {
            return Err(KhError::from(ResolveError::CubeTooLarge {
                crossings: l,
                bound: self.cube_bound,
            })
            .into());
        }
        Ok(())
    }
}

/// Runs `f` on a pool of `jobs` threads, or on the global pool.
pub fn with_threads<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, JobError> {
    match jobs {
        None => Ok(f()),
        Some(0) => Err(JobError::Input("--jobs must be at least 1".into())),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| JobError::Input(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Homology of the `n`-cable, without the cache.
pub fn compute_homology(s: &Subject, n: usize, cfg: &JobConfig) -> Result<KhHomology, JobError> {
    cfg.check_cube(s, n)?;
    let t = cfg.cable(s, n)?;
    let r = sliced_homology(&t, &cfg.assemble_options())?;
    Ok(KhHomology::from_dims(cfg.meta(s, n)?, r.homology.dims().clone()))
}

/// Report for `(s, n)`, read from the cache when possible. A corrupt
/// entry is recomputed and overwritten.
pub fn compute(s: &Subject, n: usize, cfg: &JobConfig) -> Result<(KhReport, CacheStatus), JobError> {
    let Some(cache) = &cfg.cache else {
        return Ok((compute_homology(s, n, cfg)?.report(), CacheStatus::Disabled));
    };
    let spec = cfg.orientation.spec(n)?;
    let key = cache_key(&s.id, &cfg.diagram(s), n, &spec, cfg.as_mirror);
    let status = match cache.load(&key) {
        Ok(Some(report)) => return Ok((report, CacheStatus::Hit)),
        Ok(None) => CacheStatus::Miss,
        Err(why) => CacheStatus::Corrupt(why),
    };
    let report = compute_homology(s, n, cfg)?.report();
    cache.store(&key, &report)?;
    Ok((report, status))
}

/// Every `(subject, n)` pair in subject-major order.
pub fn grid(subjects: &[Subject], ns: &[usize]) -> Vec<(usize, usize)> {
    (0..subjects.len())
        .flat_map(|k| ns.iter().map(move |&n| (k, n)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Ok,
    Skipped,
    Error,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Pass,
    Fail,
    Skipped,
    /// Nothing to check, e.g. the rank of a diagram of unknown knot type.
    #[serde(rename = "n/a")]
    NotApplicable,
}

/// One row of a sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub knot: String,
    pub n: usize,
    pub crossings: usize,
    pub cable_crossings: usize,
    pub status: RowStatus,
    pub total_rank: Option<usize>,
    pub width: Option<u32>,
    /// Unknot: rank 1. Knotted: rank above 1. Always: rank odd.
    pub rank_check: Check,
    /// Euler characteristic of the homology against the colored Jones oracle.
    pub chi_check: Check,
    pub detail: String,
}

impl SweepRow {
    pub fn violates(&self) -> bool {
        self.status == RowStatus::Error || self.rank_check == Check::Fail || self.chi_check == Check::Fail
    }
}

pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn exit_code(&self) -> i32 {
        if self.rows.iter().any(SweepRow::violates) {
            exit::INVARIANT_VIOLATION
        } else {
            exit::SUCCESS
        }
    }
}

/// Checks an oracle value against a homology Euler characteristic, or
/// reports why the check does not apply.
pub fn chi_check(
    s: &Subject,
    n: usize,
    h: &KhHomology,
    cfg: &JobConfig,
    map: &ConventionMap,
) -> Result<(Check, String), JobError> {
    if cfg.orientation.spec(n)? != CableSpec::parallel(n) {
        return Ok((Check::Skipped, "oracle map holds for parallel strands only".into()));
    }
    let d = cfg.diagram(s);
    match colored_jones_reduced(&d, n, cfg.oracle_bound) {
        Ok(j) => {
            let want = map.apply(&j, d.writhe(), n);
            let got = h.euler_characteristic();
            if want == got {
                Ok((Check::Pass, String::new()))
            } else {
                Ok((Check::Fail, format!("chi = {got}, oracle gives {want}")))
            }
        }
        Err(OracleError::TooManyCrossings { crossings, bound }) => Ok((
            Check::Skipped,
            format!("oracle needs {crossings} crossings, bound {bound}"),
        )),
        Err(e) => Err(e.into()),
    }
}

fn rank_check(s: &Subject, rank: usize) -> (Check, String) {
    if rank.is_multiple_of(2) {
        return (Check::Fail, format!("even rank {rank}"));
    }
    match s.is_unknot() {
        None => (Check::NotApplicable, String::new()),
        Some(true) if rank == 1 => (Check::Pass, String::new()),
        Some(true) => (Check::Fail, format!("unknot has rank {rank}")),
        Some(false) if rank > 1 => (Check::Pass, String::new()),
        Some(false) => (Check::Fail, "knotted diagram has rank 1".into()),
    }
}

fn sweep_row(s: &Subject, n: usize, cfg: &JobConfig) -> SweepRow {
    let mut row = SweepRow {
        knot: s.id.clone(),
        n,
        crossings: s.diagram.crossing_count(),
        cable_crossings: n * n * s.diagram.crossing_count(),
        status: RowStatus::Ok,
        total_rank: None,
        width: None,
        rank_check: Check::Skipped,
        chi_check: Check::Skipped,
        detail: String::new(),
    };
    let result = compute(s, n, cfg).and_then(|(report, _)| {
        let h = KhHomology::from_dims(cfg.meta(s, n)?, report_dims(&report));
        let chi = chi_check(s, n, &h, cfg, &ConventionMap::FROZEN)?;
        Ok((h, chi))
    });
    match result {
        Ok((h, (chi, chi_detail))) => {
            let rank = h.total_rank();
            let (rc, rank_detail) = rank_check(s, rank);
            row.total_rank = Some(rank);
            row.width = Some(h.width());
            row.rank_check = rc;
            row.chi_check = chi;
            row.detail = [rank_detail, chi_detail]
                .into_iter()
                .filter(|d| !d.is_empty())
                .collect::<Vec<_>>()
                .join("; ");
        }
        Err(e) if e.is_resource_bound() => {
            row.status = RowStatus::Skipped;
            row.detail = e.to_string();
        }
        Err(e) => {
            row.status = RowStatus::Error;
            row.detail = e.to_string();
        }
    }
    row
}

pub(crate) fn report_dims(r: &KhReport) -> std::collections::BTreeMap<(i32, i32), usize> {
    r.dims
        .iter()
        .map(|&[i, j, d]| ((i as i32, j as i32), d as usize))
        .collect()
}

/// One row per `(knot, n)`: rank, width, rank and Euler characteristic
/// checks. Row failures are recorded and the sweep continues.
pub fn sweep(subjects: &[Subject], ns: &[usize], cfg: &JobConfig) -> SweepTable {
    let rows = grid(subjects, ns)
        .into_par_iter()
        .map(|(k, n)| sweep_row(&subjects[k], n, cfg))
        .collect();
    SweepTable { rows }
}

/// One row of the width table. Ratios are `hw / (2(n-1))` and
/// `hw / (2(n-2))`, left empty where the denominator vanishes; the genus
/// is table metadata shown for comparison only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidthRow {
    pub knot: String,
    pub n: usize,
    pub status: RowStatus,
    pub total_rank: Option<usize>,
    pub width: Option<u32>,
    pub ratio_n_minus_1: Option<f64>,
    pub ratio_n_minus_2: Option<f64>,
    pub genus: Option<u32>,
    pub detail: String,
}

fn ratio(width: u32, denom: i64) -> Option<f64> {
    (denom > 0).then(|| width as f64 / (2 * denom) as f64)
}

pub fn width_table(subjects: &[Subject], ns: &[usize], cfg: &JobConfig) -> Vec<WidthRow> {
    grid(subjects, ns)
        .into_par_iter()
        .map(|(k, n)| {
            let s = &subjects[k];
            let mut row = WidthRow {
                knot: s.id.clone(),
                n,
                status: RowStatus::Ok,
                total_rank: None,
                width: None,
                ratio_n_minus_1: None,
                ratio_n_minus_2: None,
                genus: s.entry.map(|e| e.genus),
                detail: String::new(),
            };
            match compute(s, n, cfg) {
                Ok((r, _)) => {
                    row.total_rank = Some(r.total_rank);
                    row.width = Some(r.width);
                    row.ratio_n_minus_1 = ratio(r.width, n as i64 - 1);
                    row.ratio_n_minus_2 = ratio(r.width, n as i64 - 2);
                }
                Err(e) => {
                    row.status = if e.is_resource_bound() {
                        RowStatus::Skipped
                    } else {
                        RowStatus::Error
                    };
                    row.detail = e.to_string();
                }
            }
            row
        })
        .collect()
}

/// Pages of the spectral sequence of the cube filtered by `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SsReport {
    pub schema_version: u32,
    pub knot: String,
    pub n: usize,
    pub pages: Vec<PageReport>,
}

pub fn ss_pages(s: &Subject, n: usize, r_max: usize, cfg: &JobConfig) -> Result<SsReport, JobError> {
    cfg.check_cube(s, n)?;
    let t = cfg.cable(s, n)?;
    let c = assemble_with(&t, &cfg.assemble_options())?;
    let f = FilteredComplex::from_kh_cube(&c);
    let seq = pages(&f, r_max)?;
    Ok(SsReport {
        schema_version: SCHEMA_VERSION,
        knot: s.id.clone(),
        n,
        pages: seq.report().into_iter().filter(|p| p.r <= r_max).collect(),
    })
}

/// Resolution data of one cube state, for debugging.
#[derive(Debug, Clone, Serialize)]
pub struct StateDump {
    pub state: u64,
    pub bits: String,
    pub weight: u32,
    pub circles: usize,
    pub arcs: Vec<crate::resolve::ArcKind>,
    pub backtracks: bool,
    pub rank: u64,
    /// Segment to component index.
    pub components: Vec<u32>,
}

/// Every state of the cube of `(s, n)` in increasing order of its bits.
pub fn dump(s: &Subject, n: usize, cfg: &JobConfig) -> Result<Vec<StateDump>, JobError> {
    let t = cfg.cable(s, n)?;
    let l = t.crossing_count();
    let states = enumerate_cube(&t, cfg.cube_bound)?
        .map(|(st, rt)| StateDump {
            state: st.bits(),
            bits: (0..l).map(|c| if st.bit(c) { '1' } else { '0' }).collect(),
            weight: st.weight(),
            circles: rt.circle_count(),
            arcs: rt.arcs().map(|(_, k)| k).collect(),
            backtracks: rt.backtracks(),
            rank: crate::khcomplex::rank_predictor(&rt),
            components: rt.component_map().to_vec(),
        })
        .collect();
    Ok(states)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selectors() {
        let s = select_knots(&["3_1,4_1".into(), "0_1/k1".into()]).unwrap();
        let ids: Vec<_> = s.iter().map(|s| s.id.as_str()).collect();
        assert_eq!(ids, ["3_1", "4_1", "0_1/k1"]);
        assert_eq!(select_knots(&["table".into()]).unwrap().len(), 15);
        assert!(select_knots(&["all".into()]).unwrap().len() > 15);
        let e = select_knots(&["8_19".into()]).unwrap_err();
        assert_eq!(e.exit_code(), exit::INPUT_ERROR);
    }

    #[test]
    fn orientation_flag() {
        assert_eq!(
            Orientation::parse("parallel").unwrap().spec(2).unwrap(),
            CableSpec::parallel(2)
        );
        assert_eq!(
            Orientation::parse("+-").unwrap().spec(2).unwrap(),
            CableSpec::alternating(2)
        );
        assert!(Orientation::parse("+-").unwrap().spec(3).is_err());
        assert!(Orientation::parse("up").is_err());
    }

    #[test]
    fn compute_trefoil() {
        let s = Subject::from_table("3_1").unwrap();
        let (r, status) = compute(&s, 1, &JobConfig::default()).unwrap();
        assert_eq!((r.total_rank, r.width), (3, 1));
        assert_eq!(status, CacheStatus::Disabled);
        assert_eq!(r.knot.as_deref(), Some("3_1"));
    }

    #[test]
    fn cube_bound_is_a_resource_error() {
        let s = Subject::from_table("7_1").unwrap();
        let cfg = JobConfig {
            cube_bound: 10,
            ..JobConfig::default()
        };
        let e = compute(&s, 2, &cfg).unwrap_err();
        assert_eq!(e.exit_code(), exit::RESOURCE_BOUND);
        let rows = sweep(&[s], &[2], &cfg).rows;
        assert_eq!(rows[0].status, RowStatus::Skipped);
        assert!(!rows[0].violates());
    }

    #[test]
    fn sweep_small() {
        let subjects = select_knots(&["0_1,0_1/k1,3_1,4_1".into()]).unwrap();
        let t = sweep(&subjects, &[1], &JobConfig::default());
        assert_eq!(t.exit_code(), exit::SUCCESS);
        let ranks: Vec<_> = t.rows.iter().map(|r| r.total_rank.unwrap()).collect();
        assert_eq!(ranks, [1, 1, 3, 5]);
        assert!(t
            .rows
            .iter()
            .all(|r| r.chi_check == Check::Pass && r.rank_check == Check::Pass));
    }

    #[test]
    fn width_ratios() {
        let s = select_knots(&["0_1".into()]).unwrap();
        let rows = width_table(&s, &[1, 2, 3], &JobConfig::default());
        let r: Vec<_> = rows.iter().map(|r| (r.ratio_n_minus_1, r.ratio_n_minus_2)).collect();
        assert_eq!(r, [(None, None), (Some(0.5), None), (Some(0.25), Some(0.5))]);
        assert_eq!(rows[0].genus, Some(0));
    }

    #[test]
    fn dump_lists_every_state() {
        let s = Subject::from_table("3_1").unwrap();
        let d = dump(&s, 1, &JobConfig::default()).unwrap();
        assert_eq!(d.len(), 8);
        assert!(d
            .iter()
            .all(|x| x.arcs.len() == 1 && !x.backtracks && x.rank == 1 << x.circles));
    }

    #[test]
    fn pd_file_lines() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("in.txt");
        std::fs::write(
            &p,
            "# comment\ntref: X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)\n{\"pd\": [[2,2,1,1]]}\n",
        )
        .unwrap();
        let s = read_pd_file(&p).unwrap();
        assert_eq!(s[0].id, "tref");
        assert_eq!(s[1].id, "in:3");
        assert_eq!(s[1].is_unknot(), None);
        std::fs::write(&p, "X(1,2)\n").unwrap();
        assert_eq!(read_pd_file(&p).unwrap_err().exit_code(), exit::INPUT_ERROR);
    }
}
