use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::commands::{CaseRecord, MonotonicityCheck};
use super::config::SCHEMA_VERSION;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub errors: usize,
    pub all_pass: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub monotonicity: Vec<MonotonicityCheck>,
}

/// Timing and environment data, excluded from determinism comparisons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub threads: usize,
    pub wall_time_s: f64,
    pub case_wall_time_s: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub command: String,
    pub cases: Vec<CaseRecord>,
    pub summary: Summary,
    pub meta: Meta,
}

impl Report {
    /// A sweep succeeds when every case ran and every axis converges; the
    /// coarse end of an axis is not expected to meet the tolerance.
    pub fn new(command: &str, cases: Vec<CaseRecord>, monotonicity: Vec<MonotonicityCheck>, meta: Meta) -> Self {
        let passed = cases.iter().filter(|c| c.pass).count();
        let errors = cases.iter().filter(|c| c.error.is_some()).count();
        let monotone = monotonicity.iter().all(|m| m.non_increasing);
        let all_pass = if command == "sweep" {
            errors == 0 && monotone
        } else {
            passed == cases.len() && monotone
        };
        Report {
            schema_version: SCHEMA_VERSION.into(),
            command: command.into(),
            summary: Summary {
                total: cases.len(),
                passed,
                errors,
                all_pass,
                monotonicity,
            },
            cases,
            meta,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports contain only finite numbers and strings")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "q,zeta_re,zeta_im,k,lhs_re,lhs_im,rhs_re,rhs_im,oracle_re,oracle_im,rel_err,pass\n",
        );
        let opt = |x: Option<f64>| x.map(|v| format!("{v:e}")).unwrap_or_default();
        for c in &self.cases {
            let parts = |z: Option<num_complex::Complex64>| (opt(z.map(|z| z.re)), opt(z.map(|z| z.im)));
            let (lr, li) = parts(c.lhs);
            let (rr, ri) = parts(c.rhs);
            let (or, oi) = parts(c.oracle);
            let _ = writeln!(
                out,
                "{},{:e},{:e},{},{lr},{li},{rr},{ri},{or},{oi},{},{}",
                c.q.map(|q| q.to_string()).unwrap_or_default(),
                c.zeta.re,
                c.zeta.im,
                c.k.map(|k| k.to_string()).unwrap_or_default(),
                opt(c.rel_err),
                c.pass
            );
        }
        out
    }

    /// Writes `<command>.json` and `<command>.csv` into `dir`.
    pub fn write(&self, dir: &Path) -> std::io::Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir)?;
        let json = dir.join(format!("{}.json", self.command));
        let csv = dir.join(format!("{}.csv", self.command));
        std::fs::write(&json, self.to_json())?;
        std::fs::write(&csv, self.to_csv())?;
        Ok((json, csv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta() -> Meta {
        Meta {
            threads: 1,
            wall_time_s: 0.0,
            case_wall_time_s: vec![],
        }
    }

    #[test]
    fn empty_report() {
        let r = Report::new("verify-theorem", vec![], vec![], meta());
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["cases"], serde_json::json!([]));
        assert_eq!(v["schema_version"], "1");
        assert_eq!(r.to_csv().lines().count(), 1);
        assert!(r.summary.all_pass);
    }
}
