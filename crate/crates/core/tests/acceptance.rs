//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::time::{Duration, Instant};

use gsi_core::analysis::coeffs::d_zero_exact;
use gsi_core::analysis::{bandwidth, calderon, prefix_truncations, t_alpha, ucp_residual, GsiSystem, Layer, Target, UcpStatus};
use gsi_core::construct::{
    br_partition, build_refined_system, cube_cover, shannon_generators, small_bandwidth_onb, CoverageRegion,
    FrequencyTiling, RefinedPart, Refinement, TileSet,
};
use gsi_core::exact::{from_f64, int, rat, Rational};
use gsi_core::group::{BoxSet, BoxSpectrum, Generator, GroupModel, RatBox, TestFunction};
use gsi_core::lattice::Lattice;
use gsi_core::verify::{
    audit_necessary, check_dual_pair, check_parseval, frame_operator, identity_deviation, independence_gate,
    optimal_bounds, VerdictStatus, VerifyConfig,
};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn divisors(m: u64) -> Vec<u64> {
    (1..=m).filter(|d| m.is_multiple_of(*d)).collect()
}

fn random_dense(rng: &mut ChaCha8Rng, m: usize) -> Vec<Complex64> {
    (0..m).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

fn dense(g: &Generator) -> Vec<Complex64> {
    match g {
        Generator::Dense(v) => v.clone(),
        _ => unreachable!("finite systems use dense generators"),
    }
}

/// A random system on ℤ_M: each layer gets a random step and random values.
fn random_finite_system(rng: &mut ChaCha8Rng) -> GsiSystem {
    let m = *[6u64, 8, 9, 10, 12, 16].choose(rng).unwrap();
    let steps: Vec<u64> = divisors(m).into_iter().filter(|&d| d < m).collect();
    let count = rng.gen_range(1..=4);
    let layers = (0..count)
        .map(|_| {
            let step = *steps.choose(rng).unwrap();
            Layer::new(Lattice::cyclic(m, step).unwrap(), Generator::Dense(random_dense(rng, m as usize)))
        })
        .collect();
    GsiSystem::new(GroupModel::cyclic(m), layers, "random").unwrap()
}

/// Tilings of `ℤ_M` admissible for Shannon generators, with their lattices.
fn tilings(m: u64, rng: &mut ChaCha8Rng) -> Vec<(Vec<Lattice>, FrequencyTiling)> {
    let cyc = |s: u64| Lattice::cyclic(m, s).unwrap();
    let mut out = Vec::new();
    // consecutive halves over 2ℤ_M
    let w = m / 2;
    out.push((vec![cyc(2); 2], FrequencyTiling::new((0..2).map(|a| TileSet::points(a * w..(a + 1) * w)).collect())));
    // random transversals of the cosets of (M/s)ℤ_M, one tile per lattice copy
    let s = if m.is_multiple_of(4) { 4 } else { 3 };
    let width = m / s;
    let mut tiles: Vec<Vec<u64>> = vec![Vec::new(); s as usize];
    for r in 0..width {
        let mut coset: Vec<u64> = (0..s).map(|k| r + k * width).collect();
        coset.shuffle(rng);
        for (t, x) in tiles.iter_mut().zip(coset) {
            t.push(x);
        }
    }
    out.push((vec![cyc(s); s as usize], FrequencyTiling::new(tiles.into_iter().map(TileSet::points).collect())));
    // mixed: one block over 2ℤ_M, the rest as points over the trivial lattice
    let mut lattices = vec![cyc(2)];
    let mut tiles = vec![TileSet::points(0..w)];
    for x in w..m {
        lattices.push(cyc(m));
        tiles.push(TileSet::points([x]));
    }
    out.push((lattices, FrequencyTiling::new(tiles)));
    out
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut cases = 0;
    for m in [8u64, 12, 16, 24] {
        for (lattices, tiling) in tilings(m, &mut rng) {
            let s = shannon_generators(&GroupModel::cyclic(m), &lattices, &tiling, &CoverageRegion::Full).map_err(e)?;
            let dev = identity_deviation(&frame_operator(&s.system).map_err(e)?);
            ensure(dev < 1e-10, || format!("Z_{m}: |S - I| = {dev:e}"))?;
            let r = check_parseval(&s.system, &VerifyConfig::default()).map_err(e)?;
            ensure(r.verdict("parseval") == Some(VerdictStatus::Pass), || format!("Z_{m}: {}", r.table()))?;
            cases += 1;
        }
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!("{cases} tilings exact and Parseval in {:.2?}", start.elapsed()))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let m = 20;
    let p = br_partition(2, m).map_err(e)?;
    let oracle: Vec<i64> = (1..=m as u32).map(|j| (1 - (-2i64).pow(j - 1)) / 3).collect();
    ensure(p.taus == oracle, || format!("taus {:?}", p.taus))?;
    ensure(p.taus[..6] == [0, 1, -1, 3, -5, 11], || "prefix".into())?;
    ensure(p.certificate.disjointness, || "cosets overlap".into())?;
    let sys = p.system().map_err(e)?;
    let f = TestFunction::new(Generator::delta(0));
    for j in 0..m {
        let d = d_zero_exact(&sys, &f, j).map_err(e)?;
        let want = rat(1, 1 << (j + 1));
        ensure(d.re == want && d.im.is_zero(), || format!("d_{},0 = {}", j + 1, d.re))?;
    }
    let r = ucp_residual(&sys, &f, &prefix_truncations(m), &Target::Constant(int(1))).map_err(e)?;
    for (k, entry) in r.entries.iter().enumerate() {
        let want = rat(1, 1 << (k + 1));
        ensure(entry.exact.as_ref() == Some(&want), || format!("residual after {} layers: {:?}", k + 1, entry.exact))?;
    }
    ensure(r.limit == Some(Rational::zero()), || format!("limit {:?}", r.limit))?;
    let t0 = t_alpha(&sys, &[Rational::zero()], None).map_err(e)?;
    let c = t0.exact_constant().ok_or("t_0 is not an exact constant")?;
    ensure(c.re == Rational::one() && c.im.is_zero(), || format!("t_0 = {}", c.re))?;
    within(start, Duration::from_secs(10))?;
    Ok(format!("m = {m}: shifts, d_j0 = 2^-j, residuals 2^-m, t_0 = 1 in {:.2?}", start.elapsed()))
}

fn criterion_3() -> Check {
    let sys = br_partition(3, 20).map_err(e)?.system().map_err(e)?;
    let t0 = t_alpha(&sys, &[Rational::zero()], None).map_err(e)?;
    let c = t0.exact_constant().ok_or("t_0 is not an exact constant")?;
    ensure(c.re == rat(1, 2), || format!("t_0 = {}", c.re))?;
    let f = TestFunction::new(Generator::delta(0));
    let r = ucp_residual(&sys, &f, &prefix_truncations(20), &Target::Constant(int(1))).map_err(e)?;
    ensure(r.limit == Some(rat(1, 2)), || format!("residual limit {:?}", r.limit))?;
    let a = audit_necessary(&sys, Some((1.0, 1.0))).map_err(e)?;
    let failed: Vec<&str> = a.audits.iter().filter(|x| x.pass == Some(false)).map(|x| x.name.as_str()).collect();
    ensure(failed.contains(&"calderon") && failed.contains(&"bandwidth"), || format!("failed audits {failed:?}"))?;
    ensure(matches!(a.ucp, UcpStatus::Violated(_)), || format!("ucp {:?}", a.ucp))?;
    Ok("t_0 = 1/2, residuals -> 1/2, Calderon and bandwidth audits fail, UCP violated".into())
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..30 {
        let sys = random_finite_system(&mut rng);
        let b = optimal_bounds(&sys).map_err(e)?;
        let r = calderon(&sys, None).map_err(e)?.real_range();
        ensure(!r.sampled, || format!("case {i}: Calderon range was sampled"))?;
        ensure(b.lower - 1e-8 <= r.min && r.max <= b.upper + 1e-8, || {
            format!("case {i}: [{}, {}] outside [{}, {}]", r.min, r.max, b.lower, b.upper)
        })?;
    }
    Ok("30 random systems: A <= Calderon <= B everywhere".into())
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut frames = 0;
    for i in 0..30 {
        let sys = random_finite_system(&mut rng);
        let b = optimal_bounds(&sys).map_err(e)?;
        // the eigenvalues are only known to within their radii
        let lower = b.lower - b.lower_radius;
        if lower <= 0.0 {
            continue;
        }
        frames += 1;
        let ratio = from_f64(lower).map_err(e)? / from_f64(b.upper + b.upper_radius).map_err(e)?;
        let bw = bandwidth(&sys);
        let bw = bw.total.finite().ok_or("infinite bandwidth")?;
        let mu = sys.model.dual_total_mass().ok_or("infinite dual mass")?;
        ensure(*bw >= ratio.clone() * mu, || format!("case {i}: BW = {bw} < {ratio}"))?;
    }
    ensure(frames > 0, || "no frames in the random suite".into())?;
    Ok(format!("{frames} random frames: BW >= (A/B) mu exactly"))
}

fn criterion_6() -> Check {
    let chain: Vec<Lattice> = (0..=6).map(|n| Lattice::cyclic(64, 1 << n).unwrap()).collect();
    let onb = small_bandwidth_onb(&GroupModel::cyclic(64), &chain, 6, 0).map_err(e)?;
    let dev = identity_deviation(&frame_operator(&onb.system).map_err(e)?);
    ensure(dev < 1e-12, || format!("|S - I| = {dev:e}"))?;
    ensure(onb.bound == chain[0].covolume().recip(), || "bound is not 1/covol(Gamma_0)".into())?;
    ensure(onb.bandwidth <= onb.bound, || format!("BW = {} > {}", onb.bandwidth, onb.bound))?;
    ensure(onb.certificate.disjointness && onb.certificate.coverage, || "finite partition not certified".into())?;

    let chain: Vec<Lattice> = (0..=14).map(|n| Lattice::integer_multiples(1 << n).unwrap()).collect();
    let onb = small_bandwidth_onb(&GroupModel::Integer, &chain, 14, 4096).map_err(e)?;
    let c = &onb.certificate;
    ensure(c.disjointness && c.coverage && c.uncovered.is_empty(), || format!("window certificate {:?}", c))?;
    ensure(onb.bandwidth <= onb.bound, || format!("BW = {} > {}", onb.bandwidth, onb.bound))?;
    Ok(format!("Z_64 ONB with |S - I| = {dev:.1e}; Z window |n| <= 4096 certified"))
}

/// Splits every layer `sℤ_M` into `k` cosets of `skℤ_M`, and splits the first
/// coset once more where possible.
fn random_refinement(sys: &GsiSystem, rng: &mut ChaCha8Rng) -> Refinement {
    let m = sys.model.order().unwrap();
    let mut parts = Vec::new();
    for (j, layer) in sys.layers.iter().enumerate() {
        let Lattice::Cyclic(c) = &layer.lattice else { unreachable!() };
        let ks: Vec<u64> = divisors(m / c.step);
        let k = *ks.choose(rng).unwrap();
        let fine = c.step * k;
        let further: Vec<u64> = divisors(m / fine).into_iter().filter(|&d| d > 1).collect();
        for r in 0..k {
            match further.choose(rng) {
                Some(&k2) if r == 0 => {
                    for r2 in 0..k2 {
                        parts.push(RefinedPart {
                            parent: j,
                            gamma: vec![int((r2 * fine) as i64)],
                            lattice: Lattice::cyclic(m, fine * k2).unwrap(),
                        });
                    }
                }
                _ => parts.push(RefinedPart {
                    parent: j,
                    gamma: vec![int((r * c.step) as i64)],
                    lattice: Lattice::cyclic(m, fine).unwrap(),
                }),
            }
        }
    }
    Refinement { parts }
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for i in 0..10 {
        let sys = random_finite_system(&mut rng);
        let refined = build_refined_system(&sys, &random_refinement(&sys, &mut rng)).map_err(e)?;
        let a = frame_operator(&sys).map_err(e)?;
        let b = frame_operator(&refined).map_err(e)?;
        let diff = (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max);
        ensure(diff < 1e-12, || format!("case {i}: operators differ by {diff:e}"))?;
        worst = worst.max(diff);
    }
    Ok(format!("10 refinements, max entry change {worst:.1e}"))
}

fn criterion_8() -> Check {
    let start = Instant::now();
    let sides: Vec<(usize, Vec<Rational>)> = vec![
        (1, vec![rat(1, 2); 3]),
        (1, vec![rat(3, 4), rat(5, 8), rat(1, 3), rat(1, 3), rat(1, 5), rat(1, 5)]),
        (1, (1..=12).map(|j| rat(1, j + 1)).collect()),
        (2, vec![rat(1, 2); 6]),
        (2, [vec![rat(3, 5); 4], vec![rat(3, 10); 8]].concat()),
    ];
    for (n, s) in &sides {
        let target = RatBox::unit(*n);
        let vol: Rational = s.iter().map(|k| num_traits::pow(k.clone(), *n)).sum();
        ensure(vol >= rat(3, 2) * target.volume(), || format!("sides of total volume {vol} lack 1.5x slack"))?;
        let cover = cube_cover(s, &target).map_err(e)?;
        ensure(cover.certificate.coverage && cover.certificate.uncovered.is_empty(), || format!("remainder {:?}", cover.certificate.uncovered))?;
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!("5 side sequences cover [0,1)^n exactly in {:.2?}", start.elapsed()))
}

fn box_layer(c: i64, lo: Rational, hi: Rational) -> Layer {
    let set = BoxSet::from_box(RatBox::interval(lo, hi));
    let g = BoxSpectrum::indicator(1, &set, Complex64::new((c as f64).sqrt(), 0.0));
    Layer::new(Lattice::integer_multiples(c).unwrap(), Generator::Boxes(g))
}

fn coprime_system(last: Rational) -> GsiSystem {
    let layers = vec![
        box_layer(2, int(0), rat(1, 2)),
        box_layer(3, rat(1, 2), rat(5, 6)),
        box_layer(5, rat(5, 6), last),
    ];
    GsiSystem::new(GroupModel::Integer, layers, "coprime").unwrap()
}

fn criterion_9() -> Check {
    let sys = coprime_system(int(1));
    let r = check_parseval(&sys, &VerifyConfig::default()).map_err(e)?;
    ensure(r.verdict("parseval") == Some(VerdictStatus::Pass), || r.table())?;
    let gate = independence_gate(&sys, false).map_err(e)?;
    ensure(gate.applicable && gate.independent, || gate.detail.clone())?;
    ensure(matches!(&gate.license, Some(UcpStatus::Evidenced(s)) if s.contains("infinity")), || format!("{:?}", gate.license))?;
    let bad = check_parseval(&coprime_system(rat(11, 12)), &VerifyConfig::default()).map_err(e)?;
    ensure(bad.verdict("parseval") == Some(VerdictStatus::Fail), || bad.table())?;
    let w = bad.verdicts["parseval"].witness.clone().unwrap_or_default();
    ensure(w.contains("11/12"), || format!("witness {w}"))?;
    Ok(format!("Parseval with infinity-UCP license; perturbed tile fails at {w}"))
}

fn to_vector(v: &[Complex64]) -> DVector<Complex64> {
    DVector::from_column_slice(v)
}

/// Canonical duals of a shift-invariant system: `h_j = S⁻¹g_j` with one
/// lattice shared by all layers, so `S` commutes with its translations.
fn canonical_pair(rng: &mut ChaCha8Rng) -> GsiSystem {
    let m = *[8u64, 12].choose(rng).unwrap();
    let step = *[2u64, 4].choose(rng).unwrap();
    let gs: Vec<Vec<Complex64>> = (0..step + 1).map(|_| random_dense(rng, m as usize)).collect();
    let layers: Vec<Layer> = gs.iter().map(|g| Layer::new(Lattice::cyclic(m, step).unwrap(), Generator::Dense(g.clone()))).collect();
    let s = frame_operator(&GsiSystem::new(GroupModel::cyclic(m), layers, "frame").unwrap()).unwrap();
    let inv: DMatrix<Complex64> = s.try_inverse().unwrap();
    let layers = gs
        .iter()
        .map(|g| {
            let h = &inv * to_vector(g);
            Layer::dual(Lattice::cyclic(m, step).unwrap(), Generator::Dense(g.clone()), Generator::Dense(h.as_slice().to_vec()))
        })
        .collect();
    GsiSystem::new(GroupModel::cyclic(m), layers, "canonical dual").unwrap()
}

/// A Shannon system with layer `j` scaled by `a_j` on one side and `1/ā_j` on
/// the other.
fn scaled_pair(rng: &mut ChaCha8Rng) -> GsiSystem {
    let m = *[8u64, 12, 16].choose(rng).unwrap();
    let (lattices, tiling) = tilings(m, rng).swap_remove(rng.gen_range(0..3));
    let base = shannon_generators(&GroupModel::cyclic(m), &lattices, &tiling, &CoverageRegion::Full).unwrap().system;
    let layers = base
        .layers
        .iter()
        .map(|l| {
            let a = Complex64::new(rng.gen_range(0.5..2.0), rng.gen_range(-1.0..1.0));
            let g = dense(&l.analysis);
            let scaled: Vec<Complex64> = g.iter().map(|z| z * a).collect();
            let h: Vec<Complex64> = g.iter().map(|z| z / a.conj()).collect();
            Layer::dual(l.lattice.clone(), Generator::Dense(scaled), Generator::Dense(h))
        })
        .collect();
    GsiSystem::new(base.model.clone(), layers, "scaled pair").unwrap()
}

fn corrupt(sys: &GsiSystem, rng: &mut ChaCha8Rng) -> GsiSystem {
    let mut layers = sys.layers.clone();
    let j = rng.gen_range(0..layers.len());
    let mut h = dense(layers[j].synthesis());
    let i = rng.gen_range(0..h.len());
    h[i] += Complex64::new(rng.gen_range(0.01..0.2), 0.0);
    layers[j] = Layer::dual(layers[j].lattice.clone(), layers[j].analysis.clone(), Generator::Dense(h));
    GsiSystem::new(sys.model.clone(), layers, "corrupted").unwrap()
}

fn criterion_10() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut passes = 0;
    for i in 0..20 {
        let good = if i % 4 < 2 { canonical_pair(&mut rng) } else { scaled_pair(&mut rng) };
        let sys = if i % 2 == 1 { corrupt(&good, &mut rng) } else { good };
        let oracle = identity_deviation(&frame_operator(&sys).map_err(e)?) < 1e-8;
        let r = check_dual_pair(&sys, &VerifyConfig::default()).map_err(e)?;
        let verdict = r.verdict("dual_pair") == Some(VerdictStatus::Pass);
        ensure(verdict == oracle, || format!("case {i}: verdict {verdict}, operator says {oracle}\n{}", r.table()))?;
        passes += verdict as usize;
    }
    ensure(passes == 10, || format!("{passes} of 20 pairs passed, expected the 10 uncorrupted ones"))?;
    Ok("20 pairs: t_alpha verdict agrees with |S - I| < 1e-8".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("Shannon construction exactness", criterion_1),
        ("greedy partition N=2", criterion_2),
        ("greedy partition N=3", criterion_3),
        ("Calderon sandwich", criterion_4),
        ("bandwidth necessity", criterion_5),
        ("small-bandwidth ONB", criterion_6),
        ("refinement invariance", criterion_7),
        ("cube covering", criterion_8),
        ("independence gate", criterion_9),
        ("dual-pair oracle equivalence", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
