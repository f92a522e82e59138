//! Prime sweeps: reduce an integer model modulo every prime in a range,
//! classify each reduction, and summarize the evidence.
//!
//! A singularity is "of F-nilpotent type" when its reductions are
//! F-nilpotent for all primes in a dense open set, and "of dense type" when
//! they are for a dense set of primes. A finite sweep can only approximate
//! either, so every aggregate carries [`CAVEAT`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fields::{FieldError, FiniteField};
use crate::lochom::{HypersurfaceData, IsolatedCheck, LochomError};
use crate::polynomials::{IntegerPoly, IntegerTerm, PolyError, WeightSystem};

pub const MAX_SWEEP_PRIME: u64 = 1_000_000;

pub const CAVEAT: &str =
    "finite evidence only: the verdict summarizes the primes swept and cannot certify \
behaviour on a dense open set (or a dense set) of primes";

/// Version of the report JSON layout; bumped on incompatible changes.
pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_HEADER: [&str; 7] = [
    "prime",
    "status",
    "basis_dim",
    "ss_dim",
    "nil_dim",
    "isolated",
    "runtime_ms",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SweepError {
    #[error("invalid model: {0}")]
    Model(String),
    #[error("invalid model JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Hypersurface(#[from] LochomError),
    #[error("invalid prime range [{lo}, {hi}]")]
    InvalidRange { lo: u64, hi: u64 },
    #[error("prime range upper bound {0} exceeds 10^6")]
    RangeTooLarge(u64),
    #[error("no unskipped primes above the threshold {0}")]
    EmptyEvidence(u64),
    #[error("residue modulus must be at least 2")]
    InvalidModulus,
    #[error("unknown export format {0:?}")]
    UnknownFormat(String),
    #[error("reports cover different models or non-adjacent ranges")]
    IncompatibleReports,
    #[error("export failed: {0}")]
    Export(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelJson {
    variables: Vec<String>,
    weights: Vec<u32>,
    terms: Vec<IntegerTerm>,
}

/// A quasi-homogeneous polynomial with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ModelJson", into = "ModelJson")]
pub struct IntegerModel {
    variables: Vec<String>,
    weights: WeightSystem,
    poly: IntegerPoly,
    degree: u64,
}

impl TryFrom<ModelJson> for IntegerModel {
    type Error = SweepError;

    fn try_from(raw: ModelJson) -> Result<Self, SweepError> {
        IntegerModel::new(raw.variables, raw.weights, &raw.terms)
    }
}

impl From<IntegerModel> for ModelJson {
    fn from(m: IntegerModel) -> ModelJson {
        ModelJson {
            variables: m.variables,
            weights: m.weights.weights().to_vec(),
            terms: m.poly.to_terms(),
        }
    }
}

impl IntegerModel {
    pub fn new(
        variables: Vec<String>,
        weights: Vec<u32>,
        terms: &[IntegerTerm],
    ) -> Result<Self, SweepError> {
        if variables.len() < 2 {
            return Err(SweepError::Model(format!(
                "need at least two variables, got {}",
                variables.len()
            )));
        }
        if weights.len() != variables.len() {
            return Err(SweepError::Model(format!(
                "{} weights given for {} variables",
                weights.len(),
                variables.len()
            )));
        }
        let distinct: BTreeSet<&String> = variables.iter().collect();
        if distinct.len() != variables.len() {
            return Err(SweepError::Model("variable names must be distinct".into()));
        }
        let weights = WeightSystem::new(weights)?;
        let poly = IntegerPoly::new(variables.len(), terms)?;
        let degree = poly.is_quasi_homogeneous(&weights)?.ok_or_else(|| {
            SweepError::Model("polynomial is not quasi-homogeneous for the given weights".into())
        })?;
        Ok(IntegerModel {
            variables,
            weights,
            poly,
            degree,
        })
    }

    pub fn from_json(input: &str) -> Result<Self, SweepError> {
        let raw: ModelJson =
            serde_json::from_str(input).map_err(|e| SweepError::Json(e.to_string()))?;
        IntegerModel::try_from(raw)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ModelJson::from(self.clone())).expect("model serializes")
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn weights(&self) -> &WeightSystem {
        &self.weights
    }

    pub fn poly(&self) -> &IntegerPoly {
        &self.poly
    }

    /// Weighted degree `d`.
    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// The reduction modulo `p` as a graded hypersurface.
    pub fn reduce(&self, p: u64) -> Result<HypersurfaceData, SweepError> {
        let k = FiniteField::prime(p)?;
        Ok(HypersurfaceData::new(
            self.poly.reduce_mod_p(&k),
            self.weights.clone(),
        )?)
    }
}

/// Which primes a sweep skips.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkipPolicy {
    /// Skip every `p <= bound`.
    pub at_most: Option<u64>,
    /// Skip primes dividing some coefficient of the model.
    pub coefficient_divisors: bool,
    pub explicit: BTreeSet<u64>,
}

impl SkipPolicy {
    /// Skips `p <= max(max weight, d)` and primes dividing a coefficient.
    pub fn default_for(model: &IntegerModel) -> Self {
        SkipPolicy {
            at_most: Some((model.weights.max() as u64).max(model.degree)),
            coefficient_divisors: true,
            explicit: BTreeSet::new(),
        }
    }

    /// Skips exactly the listed primes, plus primes dividing a coefficient.
    pub fn explicit(primes: impl IntoIterator<Item = u64>) -> Self {
        SkipPolicy {
            at_most: None,
            coefficient_divisors: true,
            explicit: primes.into_iter().collect(),
        }
    }

    pub fn reason(&self, model: &IntegerModel, p: u64) -> Option<String> {
        if self.explicit.contains(&p) {
            return Some("listed".into());
        }
        if let Some(bound) = self.at_most {
            if p <= bound {
                return Some(format!("p<={bound}"));
            }
        }
        if self.coefficient_divisors {
            if let Some((_, c)) = model.poly.terms().find(|&(_, c)| c % p as i128 == 0) {
                return Some(format!("divides coefficient {c}"));
            }
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub skip: SkipPolicy,
    /// Primes at or below this are excluded from the aggregate; defaults to
    /// the skip bound (or 0).
    pub threshold: Option<u64>,
    /// Extension degrees searched by the singular-point check; 0 disables it.
    pub isolated_depth: u32,
    /// Worker threads; 0 lets the pool choose.
    pub threads: usize,
    /// Record wall-clock time per prime. Off by default so that exports are
    /// reproducible byte for byte.
    pub timings: bool,
}

impl SweepOptions {
    pub fn new(skip: SkipPolicy) -> Self {
        SweepOptions {
            skip,
            threshold: None,
            isolated_depth: 1,
            threads: 0,
            timings: false,
        }
    }

    pub fn default_for(model: &IntegerModel) -> Self {
        Self::new(SkipPolicy::default_for(model))
    }

    fn effective_threshold(&self) -> u64 {
        self.threshold.or(self.skip.at_most).unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PrimeStatus {
    Nilpotent,
    NonNilpotent,
    Skipped { reason: String },
}

impl PrimeStatus {
    pub fn is_skipped(&self) -> bool {
        matches!(self, PrimeStatus::Skipped { .. })
    }
}

impl fmt::Display for PrimeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeStatus::Nilpotent => f.write_str("NILPOTENT"),
            PrimeStatus::NonNilpotent => f.write_str("NON_NILPOTENT"),
            PrimeStatus::Skipped { reason } => write!(f, "SKIPPED:{reason}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeVerdict {
    pub prime: u64,
    pub status: PrimeStatus,
    pub basis_dim: Option<usize>,
    pub ss_dim: Option<usize>,
    pub nil_dim: Option<usize>,
    pub isolated: Option<IsolatedCheck>,
    pub runtime_ms: Option<u64>,
}

impl PrimeVerdict {
    fn skipped(prime: u64, reason: String) -> Self {
        PrimeVerdict {
            prime,
            status: PrimeStatus::Skipped { reason },
            basis_dim: None,
            ss_dim: None,
            nil_dim: None,
            isolated: None,
            runtime_ms: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Aggregate {
    EmpiricallyFNilpotentType,
    EmpiricallyDenseType { fraction: f64 },
    EmpiricallyNot { fraction: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateSummary {
    pub verdict: Aggregate,
    pub threshold: u64,
    /// Unskipped primes above the threshold.
    pub evidence: usize,
    pub nilpotent: usize,
    pub caveat: String,
}

impl AggregateSummary {
    pub fn fraction(&self) -> f64 {
        self.nilpotent as f64 / self.evidence as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepReport {
    pub schema_version: u32,
    pub model: IntegerModel,
    pub lo: u64,
    pub hi: u64,
    pub threshold: u64,
    /// Ascending by prime.
    pub verdicts: Vec<PrimeVerdict>,
    pub aggregate: Option<AggregateSummary>,
}

impl SweepReport {
    pub fn from_json(input: &[u8]) -> Result<Self, SweepError> {
        let report: SweepReport =
            serde_json::from_slice(input).map_err(|e| SweepError::Json(e.to_string()))?;
        if report.schema_version != SCHEMA_VERSION {
            return Err(SweepError::Json(format!(
                "unsupported schema_version {}",
                report.schema_version
            )));
        }
        if report.verdicts.windows(2).any(|w| w[0].prime >= w[1].prime) {
            return Err(SweepError::Json(
                "verdicts must be strictly ascending by prime".into(),
            ));
        }
        Ok(report)
    }

    /// Joins a sweep over `[a, b]` with one over `(b, c]` of the same model.
    pub fn merge(self, other: SweepReport) -> Result<SweepReport, SweepError> {
        if self.model != other.model || self.threshold != other.threshold || other.lo != self.hi + 1
        {
            return Err(SweepError::IncompatibleReports);
        }
        let mut verdicts = self.verdicts;
        verdicts.extend(other.verdicts);
        let mut merged = SweepReport {
            schema_version: SCHEMA_VERSION,
            model: self.model,
            lo: self.lo,
            hi: other.hi,
            threshold: self.threshold,
            verdicts,
            aggregate: None,
        };
        merged.aggregate = aggregate_verdict(&merged).ok();
        Ok(merged)
    }
}

/// All primes in `[lo, hi]`, ascending.
pub fn enumerate_primes(lo: u64, hi: u64) -> Result<Vec<u64>, SweepError> {
    if lo < 2 || lo > hi {
        return Err(SweepError::InvalidRange { lo, hi });
    }
    if hi > MAX_SWEEP_PRIME {
        return Err(SweepError::RangeTooLarge(hi));
    }
    let n = hi as usize;
    let mut composite = vec![false; n + 1];
    let mut i = 2;
    while i * i <= n {
        if !composite[i] {
            for j in (i * i..=n).step_by(i) {
                composite[j] = true;
            }
        }
        i += 1;
    }
    Ok((lo as usize..=n)
        .filter(|&k| !composite[k])
        .map(|k| k as u64)
        .collect())
}

fn classify_prime(model: &IntegerModel, p: u64, options: &SweepOptions) -> PrimeVerdict {
    if let Some(reason) = options.skip.reason(model, p) {
        return PrimeVerdict::skipped(p, reason);
    }
    let start = options.timings.then(Instant::now);
    let outcome = model.reduce(p).and_then(|h| {
        let v = h.classify_graded()?;
        let isolated = (options.isolated_depth > 0).then(|| {
            h.isolated_check(options.isolated_depth)
                .unwrap_or(IsolatedCheck::Inconclusive { searched_degree: 0 })
        });
        Ok((v, isolated))
    });
    match outcome {
        Ok((v, isolated)) => PrimeVerdict {
            prime: p,
            status: if v.verdict.is_nilpotent() {
                PrimeStatus::Nilpotent
            } else {
                PrimeStatus::NonNilpotent
            },
            basis_dim: Some(v.basis_dim),
            ss_dim: Some(v.ss_dim),
            nil_dim: Some(v.nil_dim),
            isolated,
            runtime_ms: start.map(|s| s.elapsed().as_millis() as u64),
        },
        Err(e) => PrimeVerdict::skipped(p, format!("error: {e}")),
    }
}

pub fn sweep_hypersurface(
    model: &IntegerModel,
    lo: u64,
    hi: u64,
    options: &SweepOptions,
) -> Result<SweepReport, SweepError> {
    let primes = enumerate_primes(lo, hi)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.threads)
        .build()
        .map_err(|e| SweepError::Export(e.to_string()))?;
    let verdicts: Vec<PrimeVerdict> = pool.install(|| {
        primes
            .par_iter()
            .map(|&p| classify_prime(model, p, options))
            .collect()
    });
    let mut report = SweepReport {
        schema_version: SCHEMA_VERSION,
        model: model.clone(),
        lo,
        hi,
        threshold: options.effective_threshold(),
        verdicts,
        aggregate: None,
    };
    report.aggregate = aggregate_verdict(&report).ok();
    Ok(report)
}

pub fn aggregate_verdict(r: &SweepReport) -> Result<AggregateSummary, SweepError> {
    let evidence: Vec<&PrimeVerdict> = r
        .verdicts
        .iter()
        .filter(|v| !v.status.is_skipped() && v.prime > r.threshold)
        .collect();
    if evidence.is_empty() {
        return Err(SweepError::EmptyEvidence(r.threshold));
    }
    let nilpotent = evidence
        .iter()
        .filter(|v| v.status == PrimeStatus::Nilpotent)
        .count();
    let fraction = nilpotent as f64 / evidence.len() as f64;
    let verdict = if nilpotent == evidence.len() {
        Aggregate::EmpiricallyFNilpotentType
    } else if nilpotent == 0 {
        Aggregate::EmpiricallyNot { fraction }
    } else {
        Aggregate::EmpiricallyDenseType { fraction }
    };
    Ok(AggregateSummary {
        verdict,
        threshold: r.threshold,
        evidence: evidence.len(),
        nilpotent,
        caveat: CAVEAT.into(),
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueCounts {
    pub nilpotent: usize,
    pub non_nilpotent: usize,
}

/// Verdict counts per residue class modulo `m`, for classes coprime to `m`.
pub fn residue_breakdown(
    r: &SweepReport,
    m: u64,
) -> Result<BTreeMap<u64, ResidueCounts>, SweepError> {
    if m < 2 {
        return Err(SweepError::InvalidModulus);
    }
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    let mut table: BTreeMap<u64, ResidueCounts> = (1..m)
        .filter(|&c| gcd(c, m) == 1)
        .map(|c| (c, ResidueCounts::default()))
        .collect();
    for v in &r.verdicts {
        let Some(slot) = table.get_mut(&(v.prime % m)) else {
            continue;
        };
        match v.status {
            PrimeStatus::Nilpotent => slot.nilpotent += 1,
            PrimeStatus::NonNilpotent => slot.non_nilpotent += 1,
            PrimeStatus::Skipped { .. } => {}
        }
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

impl FromStr for ExportFormat {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, SweepError> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            _ => Err(SweepError::UnknownFormat(s.to_string())),
        }
    }
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(ToString::to_string).unwrap_or_default()
}

pub fn export(r: &SweepReport, format: ExportFormat) -> Result<Vec<u8>, SweepError> {
    match format {
        ExportFormat::Json => {
            let mut out =
                serde_json::to_vec_pretty(r).map_err(|e| SweepError::Export(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
        ExportFormat::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            let err = |e: csv::Error| SweepError::Export(e.to_string());
            w.write_record(CSV_HEADER).map_err(err)?;
            for v in &r.verdicts {
                w.write_record([
                    v.prime.to_string(),
                    v.status.to_string(),
                    opt(&v.basis_dim),
                    opt(&v.ss_dim),
                    opt(&v.nil_dim),
                    v.isolated
                        .as_ref()
                        .map(|c| c.label().to_string())
                        .unwrap_or_default(),
                    opt(&v.runtime_ms),
                ])
                .map_err(err)?;
            }
            w.into_inner()
                .map_err(|e| SweepError::Export(e.to_string()))
        }
    }
}

pub fn export_format(r: &SweepReport, format: &str) -> Result<Vec<u8>, SweepError> {
    export(r, format.parse()?)
}
