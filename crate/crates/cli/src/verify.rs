use gsi_core::verify::{audit_necessary, check_dual_pair, check_parseval, independence_gate, FrameReport, VerifyConfig};

use crate::io::{region_of, system_of, CliError, CliResult, RunConfig};
use crate::VerifyCmd;

fn parse_bounds(s: &str) -> CliResult<(f64, f64)> {
    let parts: Vec<&str> = s.split(',').collect();
    let [a, b] = parts.as_slice() else {
        return Err(CliError::Usage(format!("--bounds expects A,B, got {s}")));
    };
    let num = |x: &str| x.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("not a number: {x}")));
    let (a, b) = (num(a)?, num(b)?);
    if !(0.0..=b).contains(&a) {
        return Err(CliError::Usage(format!("bounds need 0 <= A <= B, got {a}, {b}")));
    }
    Ok((a, b))
}

pub fn run(cmd: &VerifyCmd, cfg: &RunConfig) -> CliResult<i32> {
    let v = cfg.read_input()?;
    let system = system_of(&v)?;
    let vc = VerifyConfig { tolerance: cfg.tolerance, region: region_of(&v)?, ..VerifyConfig::default() };
    let (report, extra): (FrameReport, Option<serde_json::Value>) = match cmd {
        VerifyCmd::Parseval => (check_parseval(&system, &vc)?, None),
        VerifyCmd::Dual => (check_dual_pair(&system, &vc)?, None),
        VerifyCmd::Audit { bounds } => (audit_necessary(&system, bounds.as_deref().map(parse_bounds).transpose()?)?, None),
        VerifyCmd::Independence { onb } => {
            let gate = independence_gate(&system, *onb)?;
            let mut r = FrameReport::new(system.label.clone(), system.ucp.clone());
            gate.apply(&mut r);
            (r, Some(gate.to_json()))
        }
    };
    let mut out = report.to_json();
    if let Some(g) = extra {
        out["gate"] = g;
    }
    if cfg.table {
        eprint!("{}", report.table());
    }
    cfg.emit_json(&out)?;
    Ok(report.outcome().exit_code())
}
