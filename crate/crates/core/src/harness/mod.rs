//! Deterministic random-matrix generation and the fuzz runner that checks
//! the bound catalog on every sample.
//!
//! Work is split into units, one per `(class, dim)` cell. Each unit draws
//! its matrices from a ChaCha stream keyed by `(seed, class, dim)`, evaluates
//! every norm on them, and returns partial statistics. Units are merged in a
//! fixed order, so the report does not depend on how many threads ran.

mod generate;
mod report;

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundId, BoundReport, Evaluator, NormedProfile, OperatorProfile, Partner};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, MatrixFile};
use crate::norms::NormSpec;
use crate::radii::brute_force_w;

pub use generate::{gen_matrix, parse_class_list, MatrixClass};
pub use report::{
    CellReport, ChainStats, EqualityStats, FuzzReport, LinkStats, OracleStats, RangeReport,
    SharpnessWitness,
};

/// Margins below this (in absolute value) mark a sharpness witness.
pub const SHARPNESS_THRESHOLD: f64 = 1e-3;
/// Witnesses kept per report cell, with full matrices.
pub const WITNESSES_PER_CELL: usize = 10;
/// Largest dimension the oracle cross-check runs on.
pub const ORACLE_MAX_DIM: usize = 3;
/// Allowed gap between the angle search and the sampling oracle for `w`.
pub const ORACLE_TOL: f64 = 5e-3;
/// Fraction of failed samples that aborts a run.
pub const ABORT_FRACTION: f64 = 0.01;
/// Environment variable selecting the worker count (0 or unset: automatic).
pub const THREADS_ENV: &str = "DWRADIUS_THREADS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub seed: u64,
    pub dims: Vec<usize>,
    pub classes: Vec<MatrixClass>,
    pub norms: Vec<NormSpec>,
    pub count_per_cell: usize,
    /// Overrides the default violation slack of the bound catalog.
    pub tolerance: Option<f64>,
    /// Samples for the `w` oracle on small dimensions; 0 disables it.
    pub oracle_samples: usize,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            dims: vec![2, 3, 5],
            classes: MatrixClass::ALL.to_vec(),
            norms: vec![
                NormSpec::operator(),
                NormSpec::frobenius(),
                NormSpec::trace(),
                NormSpec::schatten(3.0).expect("valid p"),
                NormSpec::numerical_radius(),
            ],
            count_per_cell: 200,
            tolerance: None,
            oracle_samples: 100_000,
        }
    }
}

impl FuzzConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() || self.classes.is_empty() || self.norms.is_empty() {
            return Err(Error::InvalidConfig("dims, classes and norms must be non-empty".into()));
        }
        if let Some(&d) = self.dims.iter().find(|&&d| d == 0 || d > 64) {
            return Err(Error::InvalidConfig(format!("dimension {d} outside 1..=64")));
        }
        if self.count_per_cell == 0 {
            return Err(Error::InvalidConfig("count per cell must be at least 1".into()));
        }
        if let Some(tol) = self.tolerance {
            if !(tol.is_finite() && tol >= 0.0) {
                return Err(Error::InvalidConfig(format!("tolerance {tol} must be finite and >= 0")));
            }
        }
        Ok(())
    }

    fn total_samples(&self) -> usize {
        self.dims.len() * self.classes.len() * self.count_per_cell
    }
}

/// Worker count from [`THREADS_ENV`]; 0 lets rayon decide.
pub fn worker_threads() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(0)
}

/// Hex SHA-256 of the matrix in the JSON file format.
pub fn matrix_digest(m: &ComplexMatrix) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(MatrixFile::to_json(m).as_bytes()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct CellKey {
    bound: usize,
    class: MatrixClass,
    norm: usize,
}

/// Witness before it is attached to a report cell.
#[derive(Debug, Clone)]
struct RawWitness {
    margin: f64,
    dim: usize,
    sample: usize,
    matrix: ComplexMatrix,
}

/// Every cell's witnesses, in catalog order.
type RawWitnesses = Vec<(CellKey, Vec<RawWitness>)>;

impl RawWitness {
    fn order(a: &Self, b: &Self) -> std::cmp::Ordering {
        a.margin
            .total_cmp(&b.margin)
            .then(a.dim.cmp(&b.dim))
            .then(a.sample.cmp(&b.sample))
    }
}

#[derive(Debug, Clone, Default)]
struct CellAcc {
    checked: u64,
    violations: u64,
    min_margin: Option<f64>,
    links: BTreeMap<String, LinkStats>,
    witness_count: u64,
    witnesses: Vec<RawWitness>,
}

impl CellAcc {
    fn record(&mut self, report: &BoundReport, dim: usize, sample: usize, matrix: &ComplexMatrix, keep_all: bool) {
        self.checked += 1;
        if !report.satisfied {
            self.violations += 1;
        }
        self.min_margin = Some(self.min_margin.map_or(report.margin, |m| m.min(report.margin)));
        for link in &report.links {
            let entry = self.links.entry(link.label.clone()).or_insert_with(|| LinkStats {
                label: link.label.clone(),
                min_margin: link.margin,
                max_margin: link.margin,
                violations: 0,
            });
            entry.min_margin = entry.min_margin.min(link.margin);
            entry.max_margin = entry.max_margin.max(link.margin);
            if !link.satisfied {
                entry.violations += 1;
            }
        }
        if report.margin.abs() < SHARPNESS_THRESHOLD {
            self.witness_count += 1;
            self.witnesses.push(RawWitness {
                margin: report.margin,
                dim,
                sample,
                matrix: matrix.clone(),
            });
            if !keep_all {
                self.trim();
            }
        }
    }

    fn trim(&mut self) {
        if self.witnesses.len() > 4 * WITNESSES_PER_CELL {
            self.witnesses.sort_by(RawWitness::order);
            self.witnesses.truncate(WITNESSES_PER_CELL);
        }
    }

    fn merge(&mut self, other: CellAcc, keep_all: bool) {
        self.checked += other.checked;
        self.violations += other.violations;
        self.min_margin = match (self.min_margin, other.min_margin) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        for (label, l) in other.links {
            match self.links.get_mut(&label) {
                Some(e) => {
                    e.min_margin = e.min_margin.min(l.min_margin);
                    e.max_margin = e.max_margin.max(l.max_margin);
                    e.violations += l.violations;
                }
                None => {
                    self.links.insert(label, l);
                }
            }
        }
        self.witness_count += other.witness_count;
        self.witnesses.extend(other.witnesses);
        if !keep_all {
            self.trim();
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Range {
    w_n: (f64, f64),
    dw_n: (f64, f64),
}

impl Range {
    fn new(w: f64, dw: f64) -> Self {
        Self {
            w_n: (w, w),
            dw_n: (dw, dw),
        }
    }

    fn merge(&mut self, o: &Range) {
        self.w_n = (self.w_n.0.min(o.w_n.0), self.w_n.1.max(o.w_n.1));
        self.dw_n = (self.dw_n.0.min(o.dw_n.0), self.dw_n.1.max(o.dw_n.1));
    }
}

/// Statistics of one sample (or one pair, for the triangle bounds).
#[derive(Default)]
struct SampleAcc {
    cells: BTreeMap<CellKey, CellAcc>,
    ranges: BTreeMap<(MatrixClass, usize), Range>,
    dominance: ChainStats,
    oracle: OracleStats,
    equality: EqualityStats,
}

impl SampleAcc {
    fn merge(&mut self, other: SampleAcc, keep_all: bool) {
        for (k, c) in other.cells {
            self.cells.entry(k).or_default().merge(c, keep_all);
        }
        for (k, r) in other.ranges {
            self.ranges.entry(k).and_modify(|e| e.merge(&r)).or_insert(r);
        }
        self.dominance.merge(&other.dominance);
        self.oracle.merge(&other.oracle);
        self.equality.merge(&other.equality);
    }
}

struct UnitOutcome {
    acc: SampleAcc,
    samples: usize,
    failures: usize,
    first_failure: Option<String>,
}

struct Runner<'a> {
    cfg: &'a FuzzConfig,
    keep_all: bool,
}

impl Runner<'_> {
    fn tolerance(&self) -> f64 {
        self.cfg.tolerance.unwrap_or(bounds::VIOLATION_TOL)
    }

    fn evaluator<'p>(&self, p: &'p NormedProfile<'p>) -> Evaluator<'p> {
        Evaluator::new(p).with_tolerance(self.tolerance())
    }

    /// Evaluates the non-triangle catalog for one sample, and the triangle
    /// bounds too when `partner` is given.
    fn sample(
        &self,
        class: MatrixClass,
        dim: usize,
        index: usize,
        t: &OperatorProfile,
        partner: Option<(&OperatorProfile, &OperatorProfile)>,
        oracle_seed: u64,
    ) -> Result<SampleAcc> {
        let mut acc = SampleAcc::default();
        let matrix = t.matrix();
        for (ni, &norm) in self.cfg.norms.iter().enumerate() {
            let p = t.normed(norm);
            let partner_profiles = partner.map(|(s, sum)| (s.normed(norm), sum.normed(norm)));
            let mut ev = self.evaluator(&p);
            if let Some((s, sum)) = &partner_profiles {
                ev = ev.with_partner(Partner { other: s, sum });
            }
            let mut values = BTreeMap::new();
            for id in BoundId::ALL {
                if id.needs_partner() && partner.is_none() {
                    continue;
                }
                let report = ev.evaluate(id)?;
                if !report.applicable {
                    continue;
                }
                values.insert(id, report.bound_value());
                let key = CellKey {
                    bound: id as usize,
                    class,
                    norm: ni,
                };
                acc.cells.entry(key).or_default().record(&report, dim, index, matrix, self.keep_all);
            }
            self.check_dominance(&values, &mut acc.dominance);

            let diag = bounds::diagnose(&p)?;
            acc.equality.checked += 1;
            acc.equality.radius_equalities += u64::from(diag.radius_equality.is_some());
            acc.equality.abs_equalities += u64::from(diag.anti_hermitian_residual.is_some());

            let range = Range::new(p.w_n()?.value, p.dw_n()?.value);
            acc.ranges.entry((class, ni)).and_modify(|r| r.merge(&range)).or_insert(range);
        }

        if dim <= ORACLE_MAX_DIM && self.cfg.oracle_samples > 0 {
            let w = t.numerical_radius()?.value;
            let bf = brute_force_w(matrix, self.cfg.oracle_samples, oracle_seed);
            acc.oracle.record((w - bf).abs(), ORACLE_TOL);
        }
        Ok(acc)
    }

    fn check_dominance(&self, values: &BTreeMap<BoundId, f64>, stats: &mut ChainStats) {
        let (Some(&a), Some(&b), Some(&c)) = (
            values.get(&BoundId::Thm22),
            values.get(&BoundId::CorEquac1),
            values.get(&BoundId::Low),
        ) else {
            return;
        };
        let tol = |v: f64| self.tolerance().max(self.tolerance() * v.abs());
        stats.checked += 1;
        if a + tol(a) < b || b + tol(b) < c {
            stats.failures += 1;
        }
    }

    fn unit(&self, class: MatrixClass, dim: usize) -> Result<UnitOutcome> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        rng.set_stream((class.ordinal() << 32) | dim as u64);
        let count = self.cfg.count_per_cell;
        let draws: Vec<(ComplexMatrix, u64)> = (0..count)
            .map(|_| {
                let m = gen_matrix(class, dim, &mut rng);
                (m, rng.random::<u64>())
            })
            .collect();

        let mut out = UnitOutcome {
            acc: SampleAcc::default(),
            samples: 0,
            failures: 0,
            first_failure: None,
        };
        let absorb = |out: &mut UnitOutcome, result: Result<SampleAcc>| -> Result<()> {
            out.samples += 1;
            match result {
                Ok(acc) => out.acc.merge(acc, self.keep_all),
                Err(e) if e.is_numerical() => {
                    out.failures += 1;
                    out.first_failure.get_or_insert_with(|| format!("{class} dim {dim}: {e}"));
                }
                Err(e) => return Err(e),
            }
            Ok(())
        };

        let mut k = 0;
        while k < count {
            let (a, seed_a) = &draws[k];
            if k + 1 < count {
                let (b, seed_b) = &draws[k + 1];
                let pa = OperatorProfile::new(a.clone());
                let pb = OperatorProfile::new(b.clone());
                let psum = OperatorProfile::new(a + b);
                match (pa, pb, psum) {
                    (Ok(pa), Ok(pb), Ok(psum)) => {
                        let ra = self.sample(class, dim, k, &pa, Some((&pb, &psum)), *seed_a);
                        absorb(&mut out, ra)?;
                        let rb = self.sample(class, dim, k + 1, &pb, None, *seed_b);
                        absorb(&mut out, rb)?;
                    }
                    (pa, pb, psum) => {
                        let e = pa.err().or(pb.err()).or(psum.err()).expect("one failed");
                        absorb(&mut out, Err(e.clone()))?;
                        absorb(&mut out, Err(e))?;
                    }
                }
                k += 2;
            } else {
                let r = OperatorProfile::new(a.clone())
                    .and_then(|pa| self.sample(class, dim, k, &pa, None, *seed_a));
                absorb(&mut out, r)?;
                k += 1;
            }
        }
        Ok(out)
    }

    fn run(&self) -> Result<(FuzzReport, RawWitnesses)> {
        self.cfg.validate()?;
        let start = Instant::now();
        let units: Vec<(MatrixClass, usize)> = self
            .cfg
            .classes
            .iter()
            .flat_map(|&c| self.cfg.dims.iter().map(move |&d| (c, d)))
            .collect();

        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(worker_threads())
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
        let outcomes: Vec<Result<UnitOutcome>> =
            pool.install(|| units.par_iter().map(|&(c, d)| self.unit(c, d)).collect());

        let total = self.cfg.total_samples();
        let mut acc = SampleAcc::default();
        let (mut samples, mut failures) = (0, 0);
        let mut aborted = false;
        let mut failure_note = None;
        for outcome in outcomes {
            let o = outcome?;
            samples += o.samples;
            failures += o.failures;
            if failure_note.is_none() {
                failure_note = o.first_failure;
            }
            acc.merge(o.acc, self.keep_all);
            if failures as f64 > ABORT_FRACTION * total as f64 {
                aborted = true;
                break;
            }
        }
        let elapsed = start.elapsed().as_secs_f64();
        Ok(report::assemble(self.cfg, acc, samples, failures, failure_note, aborted, elapsed))
    }
}

/// Runs the fuzz campaign described by `cfg`.
///
/// Numerical failures on individual samples are counted and skipped; if they
/// exceed 1% of the planned samples the run stops early and the partial
/// report has `aborted` set.
pub fn run_fuzz(cfg: &FuzzConfig) -> Result<FuzzReport> {
    Ok(Runner { cfg, keep_all: false }.run()?.0)
}

/// Every `(bound, matrix)` pair of the campaign with `|margin| < 1e-3`,
/// sorted by margin.
pub fn sharpness_scan(cfg: &FuzzConfig) -> Result<Vec<SharpnessWitness>> {
    let (_, raw) = Runner { cfg, keep_all: true }.run()?;
    let mut out: Vec<SharpnessWitness> = raw
        .into_iter()
        .flat_map(|(key, ws)| {
            ws.into_iter()
                .map(move |w| report::witness(BoundId::ALL[key.bound], key.class, &cfg.norms[key.norm], w, true))
        })
        .collect();
    out.sort_by(|a, b| {
        a.margin
            .total_cmp(&b.margin)
            .then(a.bound.cmp(&b.bound))
            .then(a.class.cmp(&b.class))
            .then(a.norm.cmp(&b.norm))
            .then(a.dim.cmp(&b.dim))
            .then(a.sample.cmp(&b.sample))
    });
    Ok(out)
}
