use gsi_core::analysis::{bandwidth, calderon, w_total, GsiSystem, Layer};
use gsi_core::construct::{
    br_partition, build_refined_system, coset_refinement, cube_cover, disjointify_tiles, shannon_generators,
    CoverageRegion, FrequencyTiling, RefinedPart, Refinement, TileSet,
};
use gsi_core::exact::{int, rat, Rational};
use gsi_core::group::{BoxSet, Generator, GroupModel, RatBox, TestFunction};
use gsi_core::lattice::Lattice;
use gsi_core::verify::{audit_necessary, check_parseval, frame_operator, identity_deviation, optimal_bounds, VerdictStatus, VerifyConfig};
use num_complex::Complex64;
use proptest::prelude::*;

fn dense_vec(m: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b)), m)
}

/// Random system on ℤ_M with layers `(step, generator)`.
fn finite_system() -> impl Strategy<Value = GsiSystem> {
    prop::sample::select(vec![4u64, 6, 8, 9, 12]).prop_flat_map(|m| {
        let steps: Vec<u64> = (1..m).filter(|d| m % d == 0).collect();
        prop::collection::vec((prop::sample::select(steps), dense_vec(m as usize)), 1..4).prop_map(move |layers| {
            let layers = layers
                .into_iter()
                .map(|(s, g)| Layer::new(Lattice::cyclic(m, s).unwrap(), Generator::Dense(g)))
                .collect();
            GsiSystem::new(GroupModel::cyclic(m), layers, "random").unwrap()
        })
    })
}

/// A random admissible tiling of ℤ_M by transversals of `(M/s)ℤ_M`.
fn shannon_case() -> impl Strategy<Value = (u64, u64, Vec<usize>)> {
    prop::sample::select(vec![(8u64, 2u64), (8, 4), (12, 3), (12, 4), (16, 4)])
        .prop_flat_map(|(m, s)| (Just(m), Just(s), prop::collection::vec(0..s as usize, m as usize)))
}

fn transversal_tiling(m: u64, s: u64, picks: &[usize]) -> FrequencyTiling {
    // coset r of (M/s)ℤ_M is {r + k·M/s}; tile t takes its element number (picks[r] + t) mod s
    let width = m / s;
    let mut tiles = vec![Vec::new(); s as usize];
    for r in 0..width {
        for (t, tile) in tiles.iter_mut().enumerate() {
            let k = (picks[r as usize] + t) as u64 % s;
            tile.push(r + k * width);
        }
    }
    FrequencyTiling::new(tiles.into_iter().map(TileSet::points).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn greedy_cosets_are_disjoint(m in 1usize..=60) {
        let p = br_partition(2, m).unwrap();
        prop_assert!(p.certificate.disjointness);
        // τ_i + 2^iℤ and τ_j + 2^jℤ (i < j) meet iff τ_j ≡ τ_i mod 2^i
        for j in 0..m {
            for i in 0..j {
                let d = (p.taus[j] as i128 - p.taus[i] as i128).rem_euclid(1i128 << (i + 1));
                prop_assert_ne!(d, 0, "tau_{} in coset {}", j + 1, i + 1);
            }
        }
    }

    #[test]
    fn greedy_cosets_cover_dyadic_window(m in 3usize..=60) {
        let p = br_partition(2, m).unwrap();
        prop_assert!(p.covered_radius >= 1u64 << (m - 2));
    }

    #[test]
    fn greedy_coverage_matches_brute_force(m in 3usize..=14) {
        let p = br_partition(2, m).unwrap();
        let r = 1i64 << (m - 2);
        for t in -r..=r {
            let hits = p.taus.iter().enumerate().filter(|(j, &tau)| (t - tau).rem_euclid(1 << (j + 1)) == 0).count();
            prop_assert_eq!(hits, 1, "{} lies in {} cosets", t, hits);
        }
    }

    #[test]
    fn coset_prefix_claim_holds(base in 2i64..4, m in 1usize..8) {
        let chain: Vec<Lattice> = (1..=m as u32).map(|j| Lattice::integer_multiples(base.pow(j)).unwrap()).collect();
        let d = coset_refinement(&Lattice::integer_multiples(1).unwrap(), &chain).unwrap();
        prop_assert!(d.prefix_claim);
        // each enumerated h_k lies in one of the first k cosets
        for (k, h) in d.enumerated.iter().enumerate() {
            let hit = d.gammas[..=k].iter().zip(&chain).any(|(g, l)| l.contains(&[&h[0] - &g[0]]));
            prop_assert!(hit, "h_{} = {} uncovered", k + 1, h[0]);
        }
    }

    #[test]
    fn cube_cover_with_dyadic_slack(n in 1usize..=2, exps in prop::collection::vec(1u32..4, 1..6)) {
        // enough copies of each side that each rounded size alone fills the unit box
        let mut sides = Vec::new();
        for e in exps {
            let k = rat(1, 1 << e);
            sides.extend(std::iter::repeat_n(k, 1 << (e as usize * n)));
        }
        let cover = cube_cover(&sides, &RatBox::unit(n)).unwrap();
        prop_assert!(cover.certificate.coverage);
        let rest = BoxSet::from_box(RatBox::unit(n)).subtract(&BoxSet::from_boxes(cover.cubes().iter()));
        prop_assert!(rest.is_empty());
    }

    #[test]
    fn disjointify_partitions_union(tiles in prop::collection::vec(prop::collection::btree_set(0u64..16, 0..8), 1..5)) {
        let t = FrequencyTiling::new(tiles.iter().cloned().map(TileSet::points).collect());
        let d = disjointify_tiles(&t);
        let mut seen = std::collections::BTreeSet::new();
        for (orig, out) in tiles.iter().zip(&d.tiles) {
            let TileSet::Points(out) = out else { unreachable!() };
            prop_assert!(out.is_subset(orig));
            prop_assert!(out.is_disjoint(&seen));
            seen.extend(orig.iter().copied());
        }
        let union: std::collections::BTreeSet<u64> = tiles.iter().flatten().copied().collect();
        prop_assert_eq!(seen, union);
    }

    #[test]
    fn parseval_verdict_matches_operator((m, s, picks) in shannon_case(), drop in prop::option::of(0usize..4)) {
        let tiling = transversal_tiling(m, s, &picks);
        let lattices = vec![Lattice::cyclic(m, s).unwrap(); s as usize];
        let mut sys = shannon_generators(&GroupModel::cyclic(m), &lattices, &tiling, &CoverageRegion::Full).unwrap().system;
        if let Some(j) = drop {
            // losing a tile breaks coverage
            sys.layers.remove(j % sys.layers.len());
        }
        let oracle = identity_deviation(&frame_operator(&sys).unwrap()) < 1e-9;
        prop_assert_eq!(oracle, drop.is_none());
        let r = check_parseval(&sys, &VerifyConfig::default()).unwrap();
        prop_assert_eq!(r.verdict("parseval") == Some(VerdictStatus::Pass), oracle);
    }

    #[test]
    fn bounds_bracket_energy(sys in finite_system(), f in dense_vec(12)) {
        let m = sys.model.order().unwrap() as usize;
        let f: Vec<Complex64> = f.into_iter().take(m).collect();
        let norm: f64 = f.iter().map(|z| z.norm_sqr()).sum();
        prop_assume!(norm > 1e-6);
        let b = optimal_bounds(&sys).unwrap();
        // Σ|⟨f, T_γ g_j⟩|² = w_total(f)(0)
        let energy = w_total(&sys, &TestFunction::new(Generator::Dense(f)), None).unwrap().evaluate_f64(&[0.0]).re;
        let tol = 1e-9 * norm.max(1.0) * b.upper.max(1.0);
        prop_assert!(energy >= (b.lower - b.lower_radius) * norm - tol);
        prop_assert!(energy <= (b.upper + b.upper_radius) * norm + tol);
    }

    #[test]
    fn audits_accept_true_bounds(sys in finite_system()) {
        let b = optimal_bounds(&sys).unwrap();
        prop_assume!(b.lower > 1e-6);
        // slightly loosened optimal bounds are valid frame bounds
        let r = audit_necessary(&sys, Some((b.lower * (1.0 - 1e-9), b.upper * (1.0 + 1e-9)))).unwrap();
        prop_assert!(r.audits.iter().all(|a| a.pass != Some(false)), "{}", r.table());
        let c = calderon(&sys, None).unwrap().real_range();
        prop_assert!(c.min >= b.lower - 1e-8 && c.max <= b.upper + 1e-8);
        let bw = bandwidth(&sys);
        prop_assert!(bw.total.finite().is_some());
    }

    #[test]
    fn refinement_preserves_operator(sys in finite_system(), choice in prop::collection::vec(0usize..8, 4)) {
        let m = sys.model.order().unwrap();
        let mut parts = Vec::new();
        for (j, layer) in sys.layers.iter().enumerate() {
            let Lattice::Cyclic(c) = &layer.lattice else { unreachable!() };
            let ks: Vec<u64> = (1..=m / c.step).filter(|k| (m / c.step) % k == 0).collect();
            let k = ks[choice[j] % ks.len()];
            for r in 0..k {
                parts.push(RefinedPart {
                    parent: j,
                    gamma: vec![Rational::from_integer(((r * c.step) as i64).into())],
                    lattice: Lattice::cyclic(m, c.step * k).unwrap(),
                });
            }
        }
        let refined = build_refined_system(&sys, &Refinement { parts }).unwrap();
        let a = frame_operator(&sys).unwrap();
        let b = frame_operator(&refined).unwrap();
        let diff = (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(diff < 1e-12);
    }
}

#[test]
fn refinement_rejects_overlap() {
    let sys = GsiSystem::new(
        GroupModel::cyclic(8),
        vec![Layer::new(Lattice::cyclic(8, 2).unwrap(), Generator::dense_delta(8, 0))],
        "delta",
    )
    .unwrap();
    // 2ℤ_8 is not 0 + 4ℤ_8 ⊔ 4 + 4ℤ_8
    let parts = [0, 4]
        .iter()
        .map(|&g| RefinedPart { parent: 0, gamma: vec![int(g)], lattice: Lattice::cyclic(8, 4).unwrap() })
        .collect();
    assert!(build_refined_system(&sys, &Refinement { parts }).is_err());
}
