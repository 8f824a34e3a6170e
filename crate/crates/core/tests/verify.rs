use gsi_core::analysis::{GsiSystem, Layer, UcpStatus};
use gsi_core::construct::{br_partition, shannon_generators, CoverageRegion, FrequencyTiling, TileSet};
use gsi_core::exact::{int, rat};
use gsi_core::group::{BoxSet, BoxSpectrum, Generator, GroupModel, RatBox};
use gsi_core::lattice::Lattice;
use gsi_core::verify::*;
use num_complex::Complex64;

fn shannon_z(m: u64, step: u64, tiles: Vec<Vec<u64>>) -> GsiSystem {
    let l = Lattice::cyclic(m, step).unwrap();
    let t = FrequencyTiling::new(tiles.into_iter().map(TileSet::points).collect());
    let lattices = vec![l; t.tiles.len()];
    shannon_generators(&GroupModel::cyclic(m), &lattices, &t, &CoverageRegion::Full).unwrap().system
}

fn shannon_z8() -> GsiSystem {
    shannon_z(8, 2, vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]])
}

fn box_layer(c: i64, lo: (i64, i64), hi: (i64, i64)) -> Layer {
    let set = BoxSet::from_box(RatBox::interval(rat(lo.0, lo.1), rat(hi.0, hi.1)));
    let g = BoxSpectrum::indicator(1, &set, Complex64::new((c as f64).sqrt(), 0.0));
    Layer::new(Lattice::integer_multiples(c).unwrap(), Generator::Boxes(g))
}

fn coprime_system(last_hi: (i64, i64)) -> GsiSystem {
    let layers = vec![box_layer(2, (0, 1), (1, 2)), box_layer(3, (1, 2), (5, 6)), box_layer(5, (5, 6), last_hi)];
    GsiSystem::new(GroupModel::Integer, layers, "coprime").unwrap()
}

#[test]
fn shannon_z8_is_identity() {
    let s = frame_operator(&shannon_z8()).unwrap();
    assert!(identity_deviation(&s) < 1e-12);
    assert!(hermitian_defect(&s) < 1e-11);
}

#[test]
fn shannon_z12_parseval() {
    let sys = shannon_z(12, 3, vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7], vec![8, 9, 10, 11]]);
    let r = check_parseval(&sys, &VerifyConfig::default()).unwrap();
    assert_eq!(r.verdict("parseval"), Some(VerdictStatus::Pass));
    assert_eq!(r.outcome(), Outcome::Pass);
    let b = optimal_bounds(&sys).unwrap();
    assert!((b.lower - 1.0).abs() < 1e-10 && (b.upper - 1.0).abs() < 1e-10);
}

#[test]
fn dyadic_greedy_system_passes() {
    let sys = br_partition(2, 6).unwrap().system().unwrap();
    let r = check_parseval(&sys, &VerifyConfig::default()).unwrap();
    assert_eq!(r.verdict("parseval"), Some(VerdictStatus::Pass), "{}", r.table());
    let zero = r.equations.iter().find(|e| e.alpha == "0").unwrap();
    assert!(zero.deviation < 1e-12);
}

#[test]
fn triadic_greedy_system_fails_at_zero() {
    let sys = br_partition(3, 5).unwrap().system().unwrap();
    let r = check_parseval(&sys, &VerifyConfig::default()).unwrap();
    assert_eq!(r.verdict("parseval"), Some(VerdictStatus::Fail));
    let w = r.verdicts["parseval"].witness.clone().unwrap();
    assert!(w.starts_with("alpha=0,"), "{w}");
    assert_eq!(r.outcome().exit_code(), 2);
}

#[test]
fn unknown_ucp_is_not_certified() {
    // an unlicensed finite system whose equations hold
    let sys = shannon_z8().with_ucp(UcpStatus::Unknown);
    let r = check_parseval(&sys, &VerifyConfig::default()).unwrap();
    assert_eq!(r.verdict("parseval"), Some(VerdictStatus::NotCertified));
    assert_eq!(r.outcome().exit_code(), 3);
}

#[test]
fn audits_on_shannon_z8_pass() {
    let r = audit_necessary(&shannon_z8(), None).unwrap();
    assert!(r.audits.iter().all(|a| a.pass != Some(false)), "{}", r.table());
    assert!(r.audits.iter().any(|a| a.name == "bandwidth" && a.instance.starts_with("BW = 1 ")));
    assert_eq!(r.verdict("audit"), Some(VerdictStatus::Pass));
}

#[test]
fn triadic_audit_flags_ucp_violation() {
    let sys = br_partition(3, 5).unwrap().system().unwrap();
    let r = audit_necessary(&sys, Some((1.0, 1.0))).unwrap();
    let failed: Vec<&str> = r.audits.iter().filter(|a| a.pass == Some(false)).map(|a| a.name.as_str()).collect();
    assert!(failed.contains(&"calderon") && failed.contains(&"bandwidth"), "{failed:?}");
    assert!(matches!(r.ucp, UcpStatus::Violated(_)));
}

#[test]
fn dyadic_audit_passes() {
    let sys = br_partition(2, 5).unwrap().system().unwrap();
    let r = audit_necessary(&sys, Some((1.0, 1.0))).unwrap();
    assert_eq!(r.verdict("audit"), Some(VerdictStatus::Pass), "{}", r.table());
}

#[test]
fn coprime_boxes_are_parseval_with_license() {
    let sys = coprime_system((1, 1));
    let r = check_parseval(&sys, &VerifyConfig::default()).unwrap();
    assert_eq!(r.verdict("parseval"), Some(VerdictStatus::Pass), "{}", r.table());
    let gate = independence_gate(&sys, false).unwrap();
    assert!(gate.applicable && gate.independent);
    assert!(matches!(gate.license, Some(UcpStatus::Evidenced(_))));
}

#[test]
fn coprime_perturbation_fails_with_cell() {
    let sys = coprime_system((11, 12));
    let r = check_parseval(&sys, &VerifyConfig::default()).unwrap();
    assert_eq!(r.verdict("parseval"), Some(VerdictStatus::Fail));
    assert!(r.verdicts["parseval"].witness.as_ref().unwrap().contains("11/12"));
}

#[test]
fn onb_shape_check() {
    // 1/2 + 1/3 + 1/6: the last tile is shorter than 1/5
    let gate = independence_gate(&coprime_system((1, 1)), true).unwrap();
    assert_eq!(gate.shape.unwrap().status, VerdictStatus::Fail);

    // two distinct nonzero moduli on a 2ℤ, 3ℤ family
    let two_level = BoxSpectrum::new(
        1,
        vec![
            (RatBox::interval(int(0), rat(1, 4)), Complex64::new(2f64.sqrt(), 0.0)),
            (RatBox::interval(rat(1, 4), rat(1, 2)), Complex64::new(1.0, 0.0)),
        ],
    )
    .unwrap();
    let sys = GsiSystem::new(
        GroupModel::Integer,
        vec![
            Layer::new(Lattice::integer_multiples(2).unwrap(), Generator::Boxes(two_level)),
            box_layer(3, (1, 2), (5, 6)),
        ],
        "two-level",
    )
    .unwrap();
    let gate = independence_gate(&sys, true).unwrap();
    let shape = gate.shape.unwrap();
    assert_eq!(shape.status, VerdictStatus::Fail);
    assert!(shape.detail.contains("not an orthonormal basis"));
}

#[test]
fn onb_shape_on_finite_group() {
    let sys = shannon_z(6, 1, vec![vec![0, 1, 2, 3, 4, 5]]);
    let gate = independence_gate(&sys, true).unwrap();
    assert_eq!(gate.shape.unwrap().status, VerdictStatus::Pass);
}

#[test]
fn non_coprime_gate_not_applicable() {
    let sys = GsiSystem::new(
        GroupModel::Integer,
        vec![box_layer(2, (0, 1), (1, 2)), box_layer(4, (1, 2), (3, 4))],
        "2,4",
    )
    .unwrap();
    let gate = independence_gate(&sys, false).unwrap();
    assert!(!gate.applicable && gate.license.is_none());
}

#[test]
fn dual_pair_examples() {
    let g = shannon_z8();
    let r = check_dual_pair(&g, &VerifyConfig::default()).unwrap();
    assert_eq!(r.verdict("dual_pair"), Some(VerdictStatus::Pass));

    let zero = Generator::Dense(vec![Complex64::new(0.0, 0.0); 8]);
    let layers = g.layers.iter().map(|l| Layer::dual(l.lattice.clone(), l.analysis.clone(), zero.clone())).collect();
    let h0 = GsiSystem::new(GroupModel::cyclic(8), layers, "h=0").unwrap();
    let r = check_dual_pair(&h0, &VerifyConfig::default()).unwrap();
    assert_eq!(r.verdict("dual_pair"), Some(VerdictStatus::Fail));
    assert!(r.verdicts["dual_pair"].witness.as_ref().unwrap().starts_with("alpha=0"));
}

#[test]
fn scaled_dual_pair() {
    // two copies of the Shannon ℤ_8 system: h = 2g on the first, h = -g on the second copy
    let g = shannon_z8();
    let scale = |gen: &Generator, s: f64| match gen {
        Generator::Dense(v) => Generator::Dense(v.iter().map(|z| z * s).collect()),
        _ => unreachable!(),
    };
    let mut layers = Vec::new();
    for l in &g.layers {
        layers.push(Layer::dual(l.lattice.clone(), l.analysis.clone(), scale(&l.analysis, 2.0)));
    }
    for l in &g.layers {
        layers.push(Layer::dual(l.lattice.clone(), l.analysis.clone(), scale(&l.analysis, -1.0)));
    }
    let sys = GsiSystem::new(GroupModel::cyclic(8), layers, "scaled").unwrap();
    let r = check_dual_pair(&sys, &VerifyConfig::default()).unwrap();
    assert_eq!(r.verdict("dual_pair"), Some(VerdictStatus::Pass));
    assert!(identity_deviation(&frame_operator(&sys).unwrap()) < 1e-12);
}
