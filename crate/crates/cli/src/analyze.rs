use gsi_core::analysis::{
    bandwidth, calderon, geometric_bandwidth, lic_layer_totals, mean_exact, mean_windowed, prefix_truncations, t_alpha,
    ucp_residual, w_layer, w_total, SpectralSum, Target,
};
use gsi_core::exact::{format_f64, format_rational, parse_rational};
use serde_json::{json, Value};

use crate::io::{rational_arg, rationals_arg, region_of, system_of, test_function_of, CliError, CliResult, RunConfig};
use crate::AnalyzeCmd;

pub fn run(cmd: &AnalyzeCmd, cfg: &RunConfig) -> CliResult<i32> {
    match cmd {
        AnalyzeCmd::Calderon { csv } => {
            let v = cfg.read_input()?;
            let s = calderon(&system_of(&v)?, region_of(&v)?.as_ref())?;
            spectral_out(cfg, &s, *csv)?;
        }
        AnalyzeCmd::Talpha { alpha, csv } => {
            let v = cfg.read_input()?;
            let s = t_alpha(&system_of(&v)?, &rationals_arg(alpha)?, region_of(&v)?.as_ref())?;
            spectral_out(cfg, &s, *csv)?;
        }
        AnalyzeCmd::Bandwidth { family, ratio, base, first } => {
            let out = match family.as_deref() {
                Some("geometric") => {
                    let ratio = ratio.as_deref().ok_or_else(|| CliError::Usage("--ratio is required".into()))?;
                    geometric_bandwidth(&rational_arg(base)?, &rational_arg(ratio)?, *first).to_json()
                }
                Some(other) => return Err(CliError::Usage(format!("unknown family `{other}`"))),
                None => bandwidth(&system_of(&cfg.read_input()?)?).to_json(),
            };
            cfg.emit_json(&out)?;
        }
        AnalyzeCmd::Mean { layer } => {
            let v = cfg.read_input()?;
            let system = system_of(&v)?;
            let f = test_function_of(&v, &system)?;
            let p = match layer {
                Some(j) => w_layer(&system, &f, *j)?,
                None => w_total(&system, &f, None)?,
            };
            // --exact wins over --window
            let est = match cfg.window {
                Some(max) if !cfg.exact => {
                    let schedule: Vec<u64> = gsi_core::analysis::window_schedule().into_iter().filter(|&n| n <= max).collect();
                    mean_windowed(&system.model, &|x| p.evaluate_f64(x), &schedule)?
                }
                _ => mean_exact(&p),
            };
            cfg.emit_json(&est.to_json())?;
        }
        AnalyzeCmd::Ucp => {
            let v = cfg.read_input()?;
            let system = system_of(&v)?;
            let f = test_function_of(&v, &system)?;
            let target = match v.get("target") {
                Some(t) => Target::Constant(parse_rational(&t.as_str().map(str::to_string).unwrap_or_else(|| t.to_string()))?),
                None if system.tail.is_some() => Target::Constant(gsi_core::analysis::coeffs::norm_sq_exact(&f)?),
                None => Target::Computed,
            };
            let r = ucp_residual(&system, &f, &prefix_truncations(system.layers.len()), &target)?;
            cfg.emit_json(&r.to_json())?;
        }
        AnalyzeCmd::Lic { count } => {
            let v = cfg.read_input()?;
            let system = system_of(&v)?;
            let f = test_function_of(&v, &system)?;
            cfg.emit_json(&lic_sums(&system, &f, count.unwrap_or(system.layers.len()))?)?;
        }
    }
    Ok(0)
}

/// Per-layer LIC totals `Σ_α c_{j,α}`, `Σ_α c̃_{j,α}` and their running sums.
pub(crate) fn lic_sums(
    system: &gsi_core::analysis::GsiSystem,
    f: &gsi_core::group::TestFunction,
    count: usize,
) -> CliResult<Value> {
    let mut rows = Vec::new();
    let (mut sc, mut st) = (0.0, 0.0);
    for j in 0..count.min(system.layers.len()) {
        let (c, ct) = lic_layer_totals(system, f, j)?;
        sc += c;
        st += ct;
        rows.push(json!({
            "layer": j,
            "c": format_f64(c),
            "c_tilde": format_f64(ct),
            "partial_c": format_f64(sc),
            "partial_c_tilde": format_f64(st),
        }));
    }
    Ok(json!({"layers": rows}))
}

fn spectral_out(cfg: &RunConfig, s: &SpectralSum, csv: bool) -> CliResult<()> {
    if csv {
        let mut text = String::from("omega,value\n");
        for (w, y) in s.samples() {
            text.push_str(&format!("{w},{}\n", format_f64(y)));
        }
        return cfg.emit(&text);
    }
    let mut v = s.to_json();
    let r = s.real_range();
    v["range"] = json!({
        "min": r.exact_min.as_ref().map_or_else(|| format_f64(r.min), format_rational),
        "max": r.exact_max.as_ref().map_or_else(|| format_f64(r.max), format_rational),
        "sampled": r.sampled,
    });
    if let Some(c) = s.exact_constant() {
        v["exact_constant"] = json!([format_rational(&c.re), format_rational(&c.im)]);
    }
    cfg.emit_json(&v)
}
