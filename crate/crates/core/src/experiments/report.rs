use std::collections::BTreeMap;

use serde::Serialize;

use crate::certificate::Certificate;
use crate::error::{Error, Result};

/// Only identity failures change the exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckClass {
    Identity,
    Genericity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub check_name: String,
    pub class: CheckClass,
    pub p: u64,
    pub k: usize,
    pub d: usize,
    pub m: usize,
    pub trial: usize,
    pub pass: bool,
    pub detail: String,
}

/// Grid coordinates shared by the checks of one trial.
#[derive(Clone, Copy, Debug)]
pub(crate) struct TrialKey {
    pub p: u64,
    pub k: usize,
    pub d: usize,
    pub m: usize,
    pub trial: usize,
}

impl TrialKey {
    pub fn result(&self, name: &str, class: CheckClass, pass: bool, detail: impl Into<String>) -> CheckResult {
        CheckResult {
            check_name: name.to_string(),
            class,
            p: self.p,
            k: self.k,
            d: self.d,
            m: self.m,
            trial: self.trial,
            pass,
            detail: detail.into(),
        }
    }

    pub fn identity(&self, name: &str, outcome: Result<Certificate>) -> CheckResult {
        match outcome {
            Ok(cert) => self.result(name, CheckClass::Identity, true, cert.detail),
            Err(e) => self.result(name, CheckClass::Identity, false, format!("{}: {}", e.kind(), e)),
        }
    }

    pub fn genericity(&self, name: &str, pass: bool, detail: impl Into<String>) -> CheckResult {
        self.result(name, CheckClass::Genericity, pass, detail)
    }

    pub fn error(&self, name: &str, class: CheckClass, e: &Error) -> CheckResult {
        self.result(name, class, false, format!("{}: {}", e.kind(), e))
    }
}

/// One sampled fiber; `None` marks a row whose sampling was exhausted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub p: u64,
    pub k: usize,
    pub d: usize,
    pub m: usize,
    pub seed: u64,
    pub pi_nonzero: Option<bool>,
    pub cusp_count: Option<usize>,
    pub expected: usize,
    pub tangent_cone_ordinary: Option<bool>,
    pub total_space_smooth_at_cusps: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Rate {
    pub check_name: String,
    pub p: u64,
    pub d: usize,
    pub m: usize,
    pub agree: usize,
    pub total: usize,
    pub rate: f64,
}

/// Distinct roots of `P` over sampled boundaries, against `p - 2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryRate {
    pub p: u64,
    pub k: usize,
    pub expected: usize,
    pub counts: Vec<usize>,
    pub agree: usize,
    pub total: usize,
    pub rate: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub identity_failures: usize,
    pub genericity_failures: usize,
    pub rates: Vec<Rate>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub boundary: Vec<BoundaryRate>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub config: serde_json::Value,
    pub results: Vec<CheckResult>,
    pub census: Vec<CensusRow>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

fn ratio(agree: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        agree as f64 / total as f64
    }
}

impl Report {
    /// Sorts results by `(check_name, p, d, m, trial)` and tallies them.
    pub fn new(
        config: serde_json::Value,
        mut results: Vec<CheckResult>,
        census: Vec<CensusRow>,
        boundary: Vec<BoundaryRate>,
    ) -> Self {
        results.sort_by(|a, b| {
            (&a.check_name, a.p, a.d, a.m, a.trial, a.k).cmp(&(&b.check_name, b.p, b.d, b.m, b.trial, b.k))
        });
        let mut summary = Summary {
            total: results.len(),
            boundary,
            ..Summary::default()
        };
        let mut groups: BTreeMap<(String, u64, usize, usize), (usize, usize)> = BTreeMap::new();
        for r in &results {
            if r.pass {
                summary.passed += 1;
            } else {
                summary.failed += 1;
                match r.class {
                    CheckClass::Identity => summary.identity_failures += 1,
                    CheckClass::Genericity => summary.genericity_failures += 1,
                }
            }
            if r.class == CheckClass::Genericity {
                let g = groups.entry((r.check_name.clone(), r.p, r.d, r.m)).or_default();
                g.0 += usize::from(r.pass);
                g.1 += 1;
            }
        }
        for row in &census {
            let g = groups.entry(("cusp_count".into(), row.p, row.d, row.m)).or_default();
            g.0 += usize::from(row.cusp_count == Some(row.expected));
            g.1 += 1;
        }
        summary.rates = groups
            .into_iter()
            .map(|((check_name, p, d, m), (agree, total))| Rate {
                check_name,
                p,
                d,
                m,
                agree,
                total,
                rate: ratio(agree, total),
            })
            .collect();
        Report {
            config,
            results,
            census,
            summary,
            timestamp: None,
        }
    }

    pub fn with_timestamp(mut self, stamp: String) -> Self {
        self.timestamp = Some(stamp);
        self
    }

    pub fn identity_ok(&self) -> bool {
        self.summary.identity_failures == 0
    }

    pub fn rate(&self, check: &str, p: u64, d: usize, m: usize) -> Option<&Rate> {
        self.summary
            .rates
            .iter()
            .find(|r| r.check_name == check && r.p == p && r.d == d && r.m == m)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Census rows when present, otherwise the check results.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidInput(format!("csv: {}", e));
        if self.census.is_empty() {
            for r in &self.results {
                w.serialize(r).map_err(io)?;
            }
            if self.results.is_empty() {
                w.write_record(["check_name", "class", "p", "k", "d", "m", "trial", "pass", "detail"])
                    .map_err(io)?;
            }
        } else {
            for r in &self.census {
                w.serialize(r).map_err(io)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidInput(format!("csv: {}", e)))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

impl BoundaryRate {
    pub fn new(p: u64, k: usize, counts: Vec<usize>) -> Self {
        let expected = p as usize - 2;
        let agree = counts.iter().filter(|&&c| c == expected).count();
        let total = counts.len();
        BoundaryRate {
            p,
            k,
            expected,
            counts,
            agree,
            total,
            rate: ratio(agree, total),
        }
    }
}
