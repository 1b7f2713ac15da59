//! Ring-spec files, per-ring verification records and corpus runs.

use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construct::{build_ring, ConstructionSpec};
use crate::criteria::{gelfand_report, pm_localization_chain, pm_report, pm_stability_check, CriteriaReport};
use crate::degree::GradingGroup;
use crate::error::{Error, Result};
use crate::ring::{GradedRing, HeightBound};
use crate::spectrum::SpectrumRecord;
use crate::verdict::Verdict;

pub const SCHEMA_VERSION: u32 = 1;

/// A ring-spec document: either a bare construction or this wrapper.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<u32>,
    pub ring: ConstructionSpec,
}

fn parse_error(location: &str, e: serde_json::Error) -> Error {
    let loc = if e.line() > 0 {
        format!("{location}:{}:{}", e.line(), e.column())
    } else {
        location.to_string()
    };
    Error::parse(loc, e.to_string())
}

/// Parses a document; `location` prefixes error positions.
pub fn parse_spec(text: &str, location: &str) -> Result<RingSpecFile> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| parse_error(location, e))?;
    let wrapped = v.as_object().is_some_and(|o| o.contains_key("ring"));
    if wrapped {
        serde_json::from_value(v).map_err(|e| parse_error(location, e))
    } else {
        let ring = serde_json::from_value(v).map_err(|e| parse_error(location, e))?;
        Ok(RingSpecFile {
            label: None,
            bound: None,
            ring,
        })
    }
}

pub fn read_spec(path: &Path) -> Result<RingSpecFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_spec(&text, &path.display().to_string())
}

/// Everything checked for one ring.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RingRecord {
    pub label: String,
    pub description: String,
    pub grading: GradingGroup,
    pub cardinality: Option<u64>,
    pub bound: u32,
    pub spectrum: SpectrumRecord,
    pub gelfand: CriteriaReport,
    pub pm: CriteriaReport,
    pub localization_chain: CriteriaReport,
    pub stability: CriteriaReport,
    pub violations: Vec<String>,
}

impl RingRecord {
    pub fn reports(&self) -> [&CriteriaReport; 4] {
        [&self.gelfand, &self.pm, &self.localization_chain, &self.stability]
    }

    pub fn is_violation(&self) -> bool {
        !self.violations.is_empty() || self.reports().iter().any(|r| r.consistency.is_violation())
    }
}

/// Result of running one corpus entry.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Entry {
    Checked(Box<RingRecord>),
    /// The ring could not be built or validated.
    SpecError { label: String, error: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub bound: u32,
    pub seed: u64,
    pub entries: Vec<Entry>,
    pub inconclusive: Vec<String>,
    pub violations: Vec<String>,
    pub spec_errors: Vec<String>,
    /// No theorem violations.
    pub pass: bool,
}

impl RunReport {
    /// 0 pass, 1 theorem violation, 2 spec errors.
    pub fn exit_code(&self) -> i32 {
        if !self.violations.is_empty() {
            1
        } else if !self.spec_errors.is_empty() {
            2
        } else {
            0
        }
    }
}

/// Builds the ring and validates its axioms.
pub fn load_ring(spec: &RingSpecFile, bound: HeightBound, seed: u64) -> Result<GradedRing> {
    let ring = guard(|| build_ring(&spec.ring))?;
    guard(|| ring.check_axioms(bound, seed))?;
    Ok(ring)
}

/// Turns arithmetic-overflow panics into errors.
pub fn guard<T>(f: impl FnOnce() -> Result<T>) -> Result<T> {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(r) => r,
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            if msg.starts_with(crate::ambient::OVERFLOW) {
                Err(Error::OverflowRisk(msg))
            } else {
                std::panic::resume_unwind(p)
            }
        }
    }
}

/// Runs every report on a built ring.
pub fn check_ring(ring: &GradedRing, label: &str, bound: HeightBound, seed: u64) -> Result<RingRecord> {
    guard(|| {
        let spec = ring.spectrum()?;
        let mut violations = vec![];
        if ring.is_finite() && !spec.poset.is_discrete() {
            violations.push("finite ring with a non-discrete spectrum".to_string());
        }
        Ok(RingRecord {
            label: label.to_string(),
            description: ring.description().to_string(),
            grading: ring.grading().clone(),
            cardinality: ring.cardinality(),
            bound: bound.0,
            spectrum: spec.record(),
            gelfand: gelfand_report(ring, bound)?,
            pm: pm_report(ring, bound)?,
            localization_chain: pm_localization_chain(ring, bound)?,
            stability: pm_stability_check(ring, bound, seed)?,
            violations,
        })
    })
}

/// Checks one spec file's ring. Theorem violations raised as errors become record
/// violations; other errors are spec errors.
pub fn run_entry(spec: &RingSpecFile, label: &str, default_bound: HeightBound, seed: u64) -> Entry {
    let bound = spec.bound.map(HeightBound).unwrap_or(default_bound);
    let ring = match load_ring(spec, bound, seed) {
        Ok(r) => r,
        Err(e) => {
            return Entry::SpecError {
                label: label.to_string(),
                error: e.to_string(),
            }
        }
    };
    match check_ring(&ring, label, bound, seed) {
        Ok(rec) => Entry::Checked(Box::new(rec)),
        Err(Error::TheoremViolation(msg)) => Entry::Checked(Box::new(violation_record(&ring, label, bound, msg))),
        Err(e) => Entry::SpecError {
            label: label.to_string(),
            error: e.to_string(),
        },
    }
}

fn violation_record(ring: &GradedRing, label: &str, bound: HeightBound, msg: String) -> RingRecord {
    let empty = CriteriaReport {
        ring: ring.description().to_string(),
        criteria: vec![],
        consistency: crate::criteria::Consistency::Consistent,
    };
    RingRecord {
        label: label.to_string(),
        description: ring.description().to_string(),
        grading: ring.grading().clone(),
        cardinality: ring.cardinality(),
        bound: bound.0,
        spectrum: SpectrumRecord {
            points: vec![],
            covers: vec![],
            maximal: vec![],
            height: 0,
            route: crate::spectrum::Route::Enumerated,
        },
        gelfand: empty.clone(),
        pm: empty.clone(),
        localization_chain: empty.clone(),
        stability: empty,
        violations: vec![msg],
    }
}

/// The `.json` files of a corpus directory, sorted by name.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let rd = std::fs::read_dir(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = rd
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

/// Verifies every ring in `dir` concurrently and assembles a canonical report.
pub fn verify_corpus(dir: &Path, bound: HeightBound, seed: u64) -> Result<RunReport> {
    let files = corpus_files(dir)?;
    let mut entries: Vec<(String, Entry)> = files
        .par_iter()
        .map(|path| {
            let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            match read_spec(path) {
                Ok(spec) => {
                    let label = spec.label.clone().unwrap_or(stem);
                    let e = run_entry(&spec, &label, bound, seed);
                    (label, e)
                }
                Err(e) => (
                    stem.clone(),
                    Entry::SpecError {
                        label: stem,
                        error: e.to_string(),
                    },
                ),
            }
        })
        .collect();
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(assemble(entries.into_iter().map(|(_, e)| e).collect(), bound, seed))
}

pub fn assemble(entries: Vec<Entry>, bound: HeightBound, seed: u64) -> RunReport {
    let mut inconclusive = vec![];
    let mut violations = vec![];
    let mut spec_errors = vec![];
    for e in &entries {
        match e {
            Entry::SpecError { label, error } => spec_errors.push(format!("{label}: {error}")),
            Entry::Checked(r) => {
                for v in &r.violations {
                    violations.push(format!("{}: {v}", r.label));
                }
                for (kind, rep) in ["gelfand", "pm", "localization_chain", "stability"].iter().zip(r.reports()) {
                    match &rep.consistency {
                        crate::criteria::Consistency::TheoremViolation { details } => {
                            for d in details {
                                violations.push(format!("{} [{kind}]: {d}", r.label));
                            }
                        }
                        crate::criteria::Consistency::Inconclusive { unknown } => {
                            inconclusive.push(format!("{} [{kind}]: {}", r.label, unknown.join(", ")));
                        }
                        crate::criteria::Consistency::Consistent => {}
                    }
                }
            }
        }
    }
    RunReport {
        schema_version: SCHEMA_VERSION,
        bound: bound.0,
        seed,
        pass: violations.is_empty(),
        entries,
        inconclusive,
        violations,
        spec_errors,
    }
}

fn verdict_cell(v: &Verdict) -> String {
    match v {
        Verdict::True { authority, .. } => format!("true ({authority:?})").to_lowercase(),
        Verdict::False { authority, .. } => format!("false ({authority:?})").to_lowercase(),
        Verdict::Unknown { bound } => format!("unknown (bound {bound})"),
    }
}

fn witness_cell(v: &Verdict) -> String {
    v.witness()
        .map(|w| serde_json::to_string(w).unwrap_or_default())
        .unwrap_or_default()
}

/// Fixed-width table: criterion, verdict, witness.
pub fn report_table(rep: &CriteriaReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}", rep.ring);
    for (name, v) in &rep.criteria {
        let _ = writeln!(s, "  {:<24} {:<20} {}", name, verdict_cell(v), witness_cell(v));
    }
    let status = match &rep.consistency {
        crate::criteria::Consistency::Consistent => "consistent".to_string(),
        crate::criteria::Consistency::Inconclusive { unknown } => format!("inconclusive: {}", unknown.join(", ")),
        crate::criteria::Consistency::TheoremViolation { details } => format!("THEOREM VIOLATION: {}", details.join("; ")),
    };
    let _ = writeln!(s, "  {:<24} {}", "consistency", status);
    s
}

/// One summary line per corpus entry.
pub fn run_table(run: &RunReport) -> String {
    let mut s = String::new();
    for e in &run.entries {
        match e {
            Entry::Checked(r) => {
                let cell = |rep: &CriteriaReport, name: &str| rep.get(name).map(verdict_cell).unwrap_or_default();
                let status = if r.is_violation() {
                    "VIOLATION"
                } else if r.reports().iter().any(|x| matches!(x.consistency, crate::criteria::Consistency::Inconclusive { .. })) {
                    "inconclusive"
                } else {
                    "ok"
                };
                let _ = writeln!(
                    s,
                    "{:<28} {:>3} pts  gelfand {:<16} pm+ {:<16} {}",
                    r.label,
                    r.spectrum.points.len(),
                    cell(&r.gelfand, "definition"),
                    cell(&r.pm, "definition"),
                    status
                );
            }
            Entry::SpecError { label, error } => {
                let _ = writeln!(s, "{label:<28} spec error: {error}");
            }
        }
    }
    let _ = writeln!(
        s,
        "{} entries, {} violations, {} inconclusive, {} spec errors: {}",
        run.entries.len(),
        run.violations.len(),
        run.inconclusive.len(),
        run.spec_errors.len(),
        if run.pass { "PASS" } else { "FAIL" }
    );
    s
}
