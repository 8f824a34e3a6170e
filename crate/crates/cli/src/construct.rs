use gsi_core::analysis::greedy_shift_two;
use gsi_core::construct::{
    br_partition, build_refined_system, coset_refinement, cube_cover, near_iso_tiles, shannon_generators,
    small_bandwidth_onb, CoverageRegion, FrequencyTiling, Refinement,
};
use gsi_core::exact::{format_rational, int, parse_rational, Rational};
use gsi_core::group::{GroupModel, RatBox};
use gsi_core::lattice::Lattice;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::io::{lattices_of, system_of, CliError, CliResult, RunConfig};
use crate::ConstructCmd;

/// Default coverage window for ℤ-model certificates.
const DEFAULT_WINDOW: u64 = 4096;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Core(gsi_core::error::GsiError::InvalidInput(msg.into()))
}

pub fn run(cmd: &ConstructCmd, cfg: &RunConfig) -> CliResult<i32> {
    let out = match cmd {
        ConstructCmd::Shannon => shannon(cfg)?,
        ConstructCmd::Br { n, count } => br(*n, *count)?,
        ConstructCmd::Refine { count } => refine(cfg, *count)?,
        ConstructCmd::Cubes => cubes(cfg)?,
        ConstructCmd::SmallBwOnb { modulus, ratio, count } => small_bw_onb(cfg, *modulus, *ratio, *count)?,
        ConstructCmd::NearIso { ratio } => near_iso(cfg, *ratio)?,
    };
    cfg.emit_json(&out)?;
    Ok(0)
}

fn shannon(cfg: &RunConfig) -> CliResult<Value> {
    let v = cfg.read_input()?;
    let model = GroupModel::from_json(v.get("group").ok_or_else(|| invalid("missing `group`"))?)?;
    let lattices = lattices_of(&v, "lattices")?;
    let tiling = FrequencyTiling::from_json(v.get("tiling").ok_or_else(|| invalid("missing `tiling`"))?)?;
    let region = match v.get("region") {
        Some(b) => CoverageRegion::Window(RatBox::from_json(b)?),
        None => CoverageRegion::Full,
    };
    let s = shannon_generators(&model, &lattices, &tiling, &region)?;
    Ok(json!({"system": s.system.to_json(), "tiling": s.tiling.to_json(), "onb": s.onb}))
}

/// `−(1/3)(−2)ʲ + 1/3`, the closed form that matches the greedy shifts one index later.
fn closed_form(j: u32) -> Rational {
    let p = num_traits::pow(int(-2), j as usize);
    (Rational::one() - p) / int(3)
}

pub(crate) fn br(n: u64, count: usize) -> CliResult<Value> {
    if count == 0 {
        return Err(CliError::Usage("--count must be positive".into()));
    }
    let p = br_partition(n, count)?;
    let mut v = p.to_json();
    if n == 2 {
        let check: Vec<Value> = (1..count as u32)
            .map(|j| {
                let c = closed_form(j);
                json!({"j": j, "closed_form": format_rational(&c), "greedy_next": p.taus[j as usize], "match": c == int(p.taus[j as usize])})
            })
            .collect();
        let all = (1..=count as u32).all(|j| greedy_shift_two(j) == int(p.taus[j as usize - 1]));
        v["closed_form"] = json!({"index_offset": 1, "entries": check, "greedy_formula_matches": all});
    }
    v["system"] = p.system()?.to_json();
    Ok(v)
}

fn refine(cfg: &RunConfig, count: Option<usize>) -> CliResult<Value> {
    let v = cfg.read_input()?;
    if let Some(r) = v.get("refinement") {
        let system = system_of(&v)?;
        let refined = build_refined_system(&system, &Refinement::from_json(r)?)?;
        return Ok(json!({"system": refined.to_json()}));
    }
    let h = Lattice::from_json(v.get("lattice").ok_or_else(|| invalid("need `refinement` or `lattice` + `chain`"))?)?;
    let mut chain = lattices_of(&v, "chain")?;
    if let Some(c) = count {
        chain.truncate(c);
    }
    Ok(coset_refinement(&h, &chain)?.to_json())
}

fn rationals(v: &Value) -> CliResult<Vec<Rational>> {
    v.as_array()
        .ok_or_else(|| invalid("expected an array of rationals"))?
        .iter()
        .map(|x| Ok(parse_rational(&x.as_str().map(str::to_string).unwrap_or_else(|| x.to_string()))?))
        .collect()
}

fn cubes(cfg: &RunConfig) -> CliResult<Value> {
    let v = cfg.read_input()?;
    let sides = rationals(v.get("sides").ok_or_else(|| invalid("missing `sides`"))?)?;
    let target = match v.get("target") {
        Some(b) => RatBox::from_json(b)?,
        None => RatBox::unit(v.get("dimension").and_then(Value::as_u64).unwrap_or(1) as usize),
    };
    Ok(cube_cover(&sides, &target)?.to_json())
}

fn geometric_chain(modulus: Option<u64>, ratio: u64, count: Option<usize>) -> CliResult<(GroupModel, Vec<Lattice>)> {
    if ratio < 2 {
        return Err(CliError::Usage("--ratio must be at least 2".into()));
    }
    match modulus {
        Some(m) => {
            let mut chain = Vec::new();
            let mut step = 1u64;
            while m % step == 0 && count.is_none_or(|c| chain.len() <= c) {
                chain.push(Lattice::cyclic(m, step)?);
                match step.checked_mul(ratio) {
                    Some(s) => step = s,
                    None => break,
                }
            }
            Ok((GroupModel::cyclic(m), chain))
        }
        None => {
            let count = count.ok_or_else(|| CliError::Usage("--count is required on ℤ".into()))?;
            let chain = (0..=count as u32)
                .map(|n| {
                    let c = (ratio as i64).checked_pow(n).ok_or_else(|| invalid(format!("{ratio}^{n} overflows")))?;
                    Ok(Lattice::integer_multiples(c)?)
                })
                .collect::<CliResult<Vec<_>>>()?;
            Ok((GroupModel::Integer, chain))
        }
    }
}

fn small_bw_onb(cfg: &RunConfig, modulus: Option<u64>, ratio: u64, count: Option<usize>) -> CliResult<Value> {
    let (model, chain) = if cfg.input.is_some() {
        let v = cfg.read_input()?;
        let model = GroupModel::from_json(v.get("group").ok_or_else(|| invalid("missing `group`"))?)?;
        (model, lattices_of(&v, "chain")?)
    } else {
        geometric_chain(modulus, ratio, count)?
    };
    let m = count.unwrap_or(chain.len().saturating_sub(1));
    let window = cfg.window.unwrap_or(DEFAULT_WINDOW) as i64;
    let onb = small_bandwidth_onb(&model, &chain, m, window)?;
    let mut v = onb.to_json();
    v["bandwidth_within_bound"] = json!(onb.bandwidth <= onb.bound);
    Ok(v)
}

fn near_iso(cfg: &RunConfig, ratio: Option<f64>) -> CliResult<Value> {
    let v = cfg.read_input()?;
    let matrices = v
        .get("matrices")
        .and_then(Value::as_array)
        .ok_or_else(|| invalid("missing `matrices`"))?
        .iter()
        .map(|m| {
            m.as_array().ok_or_else(|| invalid("matrices are arrays of rows"))?.iter().map(rationals).collect::<CliResult<Vec<_>>>()
        })
        .collect::<CliResult<Vec<_>>>()?;
    let bound = ratio.or_else(|| v.get("bound").and_then(Value::as_f64)).ok_or_else(|| invalid("missing `bound`"))?;
    let tiles = near_iso_tiles(&matrices, bound)?;
    let total = tiles.iter().fold(Rational::zero(), |acc, t| acc + t.cube.volume());
    Ok(json!({
        "tiles": tiles.iter().map(|t| t.to_json()).collect::<Vec<_>>(),
        "total_volume": format_rational(&total),
    }))
}
