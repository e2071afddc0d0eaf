use serde::{Deserialize, Serialize};

use super::{CellKey, FuzzConfig, MatrixClass, RawWitness, RawWitnesses, SampleAcc, ORACLE_TOL, WITNESSES_PER_CELL};
use crate::bounds::BoundId;
use crate::error::{Error, Result};
use crate::linalg::MatrixFile;
use crate::norms::NormSpec;

/// Extremes of one link (`lhs <= rhs` step) of a bound over a cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkStats {
    pub label: String,
    pub min_margin: f64,
    pub max_margin: f64,
    pub violations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessWitness {
    pub bound: BoundId,
    pub class: MatrixClass,
    pub norm: String,
    pub dim: usize,
    /// Index of the sample within its `(class, dim)` cell.
    pub sample: usize,
    pub margin: f64,
    pub digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub bound: BoundId,
    pub class: MatrixClass,
    pub norm: String,
    pub applicable: bool,
    pub checked: u64,
    pub violations: u64,
    /// `None` when nothing was checked.
    pub min_margin: Option<f64>,
    pub links: Vec<LinkStats>,
    /// Samples with `|margin| < 1e-3`; only the smallest are listed.
    pub witness_count: u64,
    pub sharpness_witnesses: Vec<SharpnessWitness>,
}

/// `B_THM22 >= B_COR_EQUAC1 >= B_LOW` on every sample.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ChainStats {
    pub checked: u64,
    pub failures: u64,
}

impl ChainStats {
    pub(super) fn merge(&mut self, o: &ChainStats) {
        self.checked += o.checked;
        self.failures += o.failures;
    }
}

/// Angle-search `w(T)` against the sampling oracle.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OracleStats {
    pub checked: u64,
    pub failures: u64,
    pub max_abs_diff: f64,
    pub tolerance: f64,
}

impl OracleStats {
    pub(super) fn record(&mut self, diff: f64, tol: f64) {
        self.checked += 1;
        self.tolerance = tol;
        self.max_abs_diff = self.max_abs_diff.max(diff);
        if diff.is_nan() || diff > tol {
            self.failures += 1;
        }
    }

    pub(super) fn merge(&mut self, o: &OracleStats) {
        self.checked += o.checked;
        self.failures += o.failures;
        self.max_abs_diff = self.max_abs_diff.max(o.max_abs_diff);
        self.tolerance = self.tolerance.max(o.tolerance);
    }
}

/// How often the equality cases `dw_N = w_N` and `dw_N = N^2(|T|)` occurred.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EqualityStats {
    pub checked: u64,
    pub radius_equalities: u64,
    pub abs_equalities: u64,
}

impl EqualityStats {
    pub(super) fn merge(&mut self, o: &EqualityStats) {
        self.checked += o.checked;
        self.radius_equalities += o.radius_equalities;
        self.abs_equalities += o.abs_equalities;
    }
}

/// Observed range of `w_N` and `dw_N` per `(class, norm)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeReport {
    pub class: MatrixClass,
    pub norm: String,
    pub w_n_min: f64,
    pub w_n_max: f64,
    pub dw_n_min: f64,
    pub dw_n_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub dims: Vec<usize>,
    pub classes: Vec<MatrixClass>,
    pub norms: Vec<String>,
    pub count_per_cell: usize,
    pub tolerance: Option<f64>,
    pub planned_samples: usize,
    pub samples: usize,
    pub numerical_failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
    pub aborted: bool,
    pub cells: Vec<CellReport>,
    pub dominance: ChainStats,
    pub oracle: OracleStats,
    pub equality: EqualityStats,
    pub ranges: Vec<RangeReport>,
    /// Wall-clock seconds; left out of the JSON so reports are reproducible.
    #[serde(skip)]
    pub elapsed: f64,
}

impl FuzzReport {
    /// Violations of every bound except the refuted one.
    pub fn unexpected_violations(&self) -> u64 {
        self.cells
            .iter()
            .filter(|c| c.bound != BoundId::RefutedUp)
            .map(|c| c.violations)
            .sum()
    }

    pub fn violations_of(&self, bound: BoundId) -> u64 {
        self.cells.iter().filter(|c| c.bound == bound).map(|c| c.violations).sum()
    }

    pub fn cell(&self, bound: BoundId, class: MatrixClass, norm: &str) -> Option<&CellReport> {
        self.cells
            .iter()
            .find(|c| c.bound == bound && c.class == class && c.norm == norm)
    }

    pub fn range(&self, class: MatrixClass, norm: &str) -> Option<&RangeReport> {
        self.ranges.iter().find(|r| r.class == class && r.norm == norm)
    }

    /// No unexpected violations, no broken chains, no oracle disagreement,
    /// and the run completed.
    pub fn is_clean(&self) -> bool {
        !self.aborted
            && self.unexpected_violations() == 0
            && self.dominance.failures == 0
            && self.oracle.failures == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per `(bound, class, norm)` cell.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidConfig(format!("csv: {e}"));
        w.write_record([
            "bound",
            "class",
            "norm",
            "applicable",
            "checked",
            "violations",
            "min_margin",
            "witness_count",
        ])
        .map_err(io)?;
        for c in &self.cells {
            w.write_record([
                c.bound.as_str().to_string(),
                c.class.as_str().to_string(),
                c.norm.clone(),
                c.applicable.to_string(),
                c.checked.to_string(),
                c.violations.to_string(),
                c.min_margin.map(|m| format!("{m:e}")).unwrap_or_default(),
                c.witness_count.to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidConfig(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }
}

pub(super) fn witness(
    bound: BoundId,
    class: MatrixClass,
    norm: &NormSpec,
    raw: RawWitness,
    with_matrix: bool,
) -> SharpnessWitness {
    SharpnessWitness {
        bound,
        class,
        norm: norm.to_string(),
        dim: raw.dim,
        sample: raw.sample,
        margin: raw.margin,
        digest: super::matrix_digest(&raw.matrix),
        matrix: with_matrix.then(|| MatrixFile::from_matrix(&raw.matrix)),
    }
}

fn applicable(bound: BoundId, norm: &NormSpec, cfg: &FuzzConfig) -> bool {
    !(bound.requires_algebra() && !norm.is_algebra()
        || bound.requires_self_adjoint() && !norm.is_self_adjoint()
        || bound.needs_partner() && cfg.count_per_cell < 2)
}

pub(super) fn assemble(
    cfg: &FuzzConfig,
    mut acc: SampleAcc,
    samples: usize,
    failures: usize,
    first_failure: Option<String>,
    aborted: bool,
    elapsed: f64,
) -> (FuzzReport, RawWitnesses) {
    let mut cells = Vec::new();
    let mut raw = Vec::new();
    for (bi, &bound) in BoundId::ALL.iter().enumerate() {
        for &class in &cfg.classes {
            for (ni, norm) in cfg.norms.iter().enumerate() {
                let key = CellKey { bound: bi, class, norm: ni };
                let mut cell = acc.cells.remove(&key).unwrap_or_default();
                cell.witnesses.sort_by(RawWitness::order);
                let listed: Vec<SharpnessWitness> = cell
                    .witnesses
                    .iter()
                    .take(WITNESSES_PER_CELL)
                    .map(|w| witness(bound, class, norm, w.clone(), true))
                    .collect();
                cells.push(CellReport {
                    bound,
                    class,
                    norm: norm.to_string(),
                    applicable: applicable(bound, norm, cfg),
                    checked: cell.checked,
                    violations: cell.violations,
                    min_margin: cell.min_margin,
                    links: cell.links.into_values().collect(),
                    witness_count: cell.witness_count,
                    sharpness_witnesses: listed,
                });
                raw.push((key, cell.witnesses));
            }
        }
    }

    let mut ranges = Vec::new();
    for &class in &cfg.classes {
        for (ni, norm) in cfg.norms.iter().enumerate() {
            if let Some(r) = acc.ranges.get(&(class, ni)) {
                ranges.push(RangeReport {
                    class,
                    norm: norm.to_string(),
                    w_n_min: r.w_n.0,
                    w_n_max: r.w_n.1,
                    dw_n_min: r.dw_n.0,
                    dw_n_max: r.dw_n.1,
                });
            }
        }
    }

    let mut oracle = acc.oracle;
    if oracle.checked == 0 {
        oracle.tolerance = ORACLE_TOL;
    }

    let report = FuzzReport {
        seed: cfg.seed,
        dims: cfg.dims.clone(),
        classes: cfg.classes.clone(),
        norms: cfg.norms.iter().map(|n| n.to_string()).collect(),
        count_per_cell: cfg.count_per_cell,
        tolerance: cfg.tolerance,
        planned_samples: cfg.total_samples(),
        samples,
        numerical_failures: failures,
        first_failure,
        aborted,
        cells,
        dominance: acc.dominance,
        oracle,
        equality: acc.equality,
        ranges,
        elapsed,
    };
    (report, raw)
}
