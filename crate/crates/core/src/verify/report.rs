use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::analysis::UcpStatus;
use crate::exact::format_f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum VerdictStatus {
    Pass,
    Fail,
    /// The equations hold but no UCP license backs the conclusion.
    NotCertified,
    NotApplicable,
}

impl VerdictStatus {
    pub fn name(self) -> &'static str {
        match self {
            VerdictStatus::Pass => "pass",
            VerdictStatus::Fail => "fail",
            VerdictStatus::NotCertified => "not_certified",
            VerdictStatus::NotApplicable => "not_applicable",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub witness: Option<String>,
    pub detail: String,
}

impl Verdict {
    pub fn pass(detail: impl Into<String>) -> Self {
        Verdict { status: VerdictStatus::Pass, witness: None, detail: detail.into() }
    }

    pub fn fail(witness: impl Into<String>, detail: impl Into<String>) -> Self {
        Verdict { status: VerdictStatus::Fail, witness: Some(witness.into()), detail: detail.into() }
    }

    pub fn not_applicable(detail: impl Into<String>) -> Self {
        Verdict { status: VerdictStatus::NotApplicable, witness: None, detail: detail.into() }
    }

    pub fn to_json(&self) -> Value {
        json!({"status": self.status.name(), "witness": self.witness, "detail": self.detail})
    }
}

/// One instantiated inequality of a necessary condition.
#[derive(Debug, Clone, PartialEq)]
pub struct Audit {
    pub name: String,
    pub instance: String,
    /// `None` when the inputs needed for the inequality are unavailable.
    pub pass: Option<bool>,
}

impl Audit {
    pub fn to_json(&self) -> Value {
        json!({"name": self.name, "instance": self.instance, "pass": self.pass})
    }
}

/// Extreme eigenvalues of the frame operator with error radii.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
    pub lower_radius: f64,
    pub upper_radius: f64,
    pub method: String,
}

impl Bounds {
    pub fn to_json(&self) -> Value {
        json!({
            "A": format_f64(self.lower),
            "B": format_f64(self.upper),
            "A_radius": format_f64(self.lower_radius),
            "B_radius": format_f64(self.upper_radius),
            "method": self.method,
        })
    }
}

/// Result of an equation check for one frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct EquationCheck {
    pub alpha: String,
    pub deviation: f64,
    pub exact_zero: bool,
    pub witness: Option<String>,
}

impl EquationCheck {
    pub fn to_json(&self) -> Value {
        json!({
            "alpha": self.alpha,
            "deviation": format_f64(self.deviation),
            "exact": self.exact_zero,
            "witness": self.witness,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    NotCertifiable,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 2,
            Outcome::NotCertifiable => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameReport {
    pub label: String,
    pub verdicts: BTreeMap<String, Verdict>,
    pub bounds: Option<Bounds>,
    pub audits: Vec<Audit>,
    pub equations: Vec<EquationCheck>,
    /// How the checked frequencies were chosen.
    pub alpha_coverage: Option<String>,
    pub ucp: UcpStatus,
    /// Which result licensed each verdict.
    pub provenance: Vec<String>,
    pub notes: Vec<String>,
}

impl FrameReport {
    pub fn new(label: impl Into<String>, ucp: UcpStatus) -> Self {
        FrameReport {
            label: label.into(),
            verdicts: BTreeMap::new(),
            bounds: None,
            audits: Vec::new(),
            equations: Vec::new(),
            alpha_coverage: None,
            ucp,
            provenance: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn verdict(&self, name: &str) -> Option<VerdictStatus> {
        self.verdicts.get(name).map(|v| v.status)
    }

    /// Worst verdict over everything requested: any fail, else any uncertified
    /// conclusion, else pass. Failed audits count as failures.
    pub fn outcome(&self) -> Outcome {
        let statuses: Vec<VerdictStatus> = self.verdicts.values().map(|v| v.status).collect();
        if statuses.contains(&VerdictStatus::Fail) || self.audits.iter().any(|a| a.pass == Some(false)) {
            Outcome::Fail
        } else if statuses.contains(&VerdictStatus::NotCertified) {
            Outcome::NotCertifiable
        } else {
            Outcome::Pass
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "label": self.label,
            "verdicts": self.verdicts.iter().map(|(k, v)| (k.clone(), v.to_json())).collect::<serde_json::Map<_, _>>(),
            "bounds": self.bounds.as_ref().map(Bounds::to_json),
            "audits": self.audits.iter().map(Audit::to_json).collect::<Vec<_>>(),
            "equations": self.equations.iter().map(EquationCheck::to_json).collect::<Vec<_>>(),
            "alpha_coverage": self.alpha_coverage,
            "ucp": self.ucp.to_json(),
            "provenance": self.provenance,
            "notes": self.notes,
            "outcome": match self.outcome() {
                Outcome::Pass => "pass",
                Outcome::Fail => "fail",
                Outcome::NotCertifiable => "not_certifiable",
            },
        })
    }

    /// Plain-text table for terminals.
    pub fn table(&self) -> String {
        let mut out = format!("{}\n", self.label);
        for (k, v) in &self.verdicts {
            out.push_str(&format!("  {:<14} {:<15} {}\n", k, v.status.name(), v.witness.as_deref().unwrap_or(&v.detail)));
        }
        if let Some(b) = &self.bounds {
            out.push_str(&format!("  bounds         A = {}  B = {}\n", format_f64(b.lower), format_f64(b.upper)));
        }
        for a in &self.audits {
            let s = match a.pass {
                Some(true) => "pass",
                Some(false) => "FAIL",
                None => "n/a",
            };
            out.push_str(&format!("  audit {:<8} {:<5} {}\n", a.name, s, a.instance));
        }
        out.push_str(&format!("  ucp            {}\n", self.ucp.name()));
        out
    }
}
