//! Report records, JSON and CSV emission.

use crate::catalog::{CheckSpec, Measurement, Rule};
use crate::config::{Suite, SuiteConfig};
use serde::Serialize;
use std::io;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    PaperMismatchFlag,
    AccuracyWarning,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::PaperMismatchFlag => "paper-mismatch-flag",
            Status::AccuracyWarning => "accuracy-warning",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub suite: Suite,
    pub tag: String,
    pub measured: Option<f64>,
    pub tolerance: f64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckRecord {
    /// Judges a measurement against the check's rule.
    pub fn judge(spec: &CheckSpec, meas: &Measurement) -> Self {
        let v = meas.value;
        let within = v.is_finite()
            && match spec.rule {
                Rule::AtMost | Rule::Flag => v <= spec.tolerance,
                Rule::Near(target) => (v - target).abs() <= spec.tolerance,
            };
        let status = match (within, spec.rule, &meas.warning) {
            (true, _, None) => Status::Pass,
            (true, _, Some(_)) => Status::AccuracyWarning,
            (false, Rule::Flag, _) => Status::PaperMismatchFlag,
            (false, _, _) => Status::Fail,
        };
        let detail = match (&meas.detail, &meas.warning) {
            (Some(d), Some(w)) => Some(format!("{d}; {w}")),
            (d, w) => d.clone().or_else(|| w.clone()),
        };
        CheckRecord {
            name: spec.name.clone(),
            suite: spec.suite,
            tag: spec.tag.into(),
            measured: Some(v).filter(|x| x.is_finite()),
            tolerance: spec.tolerance,
            status,
            detail,
        }
    }

    pub fn failed(spec: &CheckSpec, message: impl Into<String>) -> Self {
        CheckRecord {
            name: spec.name.clone(),
            suite: spec.suite,
            tag: spec.tag.into(),
            measured: None,
            tolerance: spec.tolerance,
            status: Status::Fail,
            detail: Some(message.into()),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub paper_mismatch_flags: usize,
    pub accuracy_warnings: usize,
}

impl Summary {
    pub fn of(records: &[CheckRecord]) -> Self {
        let count = |s: Status| records.iter().filter(|r| r.status == s).count();
        Summary {
            total: records.len(),
            pass: count(Status::Pass),
            fail: count(Status::Fail),
            paper_mismatch_flags: count(Status::PaperMismatchFlag),
            accuracy_warnings: count(Status::AccuracyWarning),
        }
    }
}

/// Everything that must be identical between runs with the same config.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportBody {
    pub tool: &'static str,
    pub version: &'static str,
    pub parameters: SuiteConfig,
    pub summary: Summary,
    pub records: Vec<CheckRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaskTiming {
    pub task: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Runtime {
    pub jobs: usize,
    pub total_seconds: f64,
    pub tasks: Vec<TaskTiming>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    #[serde(flatten)]
    pub body: ReportBody,
    pub runtime: Runtime,
}

impl SuiteReport {
    pub fn records(&self) -> &[CheckRecord] {
        &self.body.records
    }

    pub fn any_fail(&self) -> bool {
        self.body.summary.fail > 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON of the report without the runtime section.
    pub fn body_json(&self) -> String {
        serde_json::to_string_pretty(&self.body).expect("report serializes")
    }

    pub fn write_json(&self, path: &Path) -> io::Result<()> {
        std::fs::write(path, self.to_json() + "\n")
    }

    pub fn write_csv(&self, path: &Path) -> io::Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["name", "suite", "tag", "measured", "tolerance", "status"])?;
        for r in self.records() {
            let measured = r.measured.map(|v| format!("{v:e}")).unwrap_or_default();
            w.write_record([&r.name, r.suite.name(), &r.tag, &measured, &format!("{:e}", r.tolerance), r.status.label()])?;
        }
        w.flush()
    }

    /// One line per record that did not pass, failures first.
    pub fn findings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for status in [Status::Fail, Status::PaperMismatchFlag, Status::AccuracyWarning] {
            for r in self.records().iter().filter(|r| r.status == status) {
                let v = r.measured.map(|v| format!("{v:.3e}")).unwrap_or_else(|| "-".into());
                let detail = r.detail.as_deref().unwrap_or("");
                out.push(format!("{:<20} {:<40} {v:>10} (tol {:.1e}) {detail}", status.label().to_uppercase(), r.name, r.tolerance));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;

    fn spec_named(name: &str) -> CheckSpec {
        catalog().into_iter().find(|c| c.name == name).unwrap()
    }

    #[test]
    fn judging_rules() {
        let s = spec_named("fock.pair_commutator");
        assert_eq!(CheckRecord::judge(&s, &Measurement::value(0.0)).status, Status::Pass);
        assert_eq!(CheckRecord::judge(&s, &Measurement::value(1.0)).status, Status::Fail);
        assert_eq!(CheckRecord::judge(&s, &Measurement::value(f64::NAN)).status, Status::Fail);
        let halving = spec_named("states.resolution_halving.eta");
        assert_eq!(CheckRecord::judge(&halving, &Measurement::value(0.55)).status, Status::Pass);
        assert_eq!(CheckRecord::judge(&halving, &Measurement::value(1.0)).status, Status::Fail);
        let paper = spec_named("ordering.paper.n0m0.dagger_first");
        assert_eq!(CheckRecord::judge(&paper, &Measurement::value(2.0)).status, Status::PaperMismatchFlag);
        let warned = Measurement { value: 0.0, warning: Some("edge".into()), detail: None };
        let r = CheckRecord::judge(&s, &warned);
        assert_eq!(r.status, Status::AccuracyWarning);
        assert_eq!(r.detail.as_deref(), Some("edge"));
    }

    #[test]
    fn status_labels_match_serialization() {
        for s in [Status::Pass, Status::Fail, Status::PaperMismatchFlag, Status::AccuracyWarning] {
            assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{}\"", s.label()));
        }
    }
}
