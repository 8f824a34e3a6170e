//! Disjoint coset decompositions of a lattice along a strictly decreasing
//! subgroup chain, and the reindexing of GSI systems they induce.

use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::tiling::{shannon_generators, CoverageRegion, FrequencyTiling, TileSet};
use super::PartitionCertificate;
use crate::analysis::{bandwidth_of, GsiSystem, Layer, Tail};
use crate::error::{GsiError, Result};
use crate::exact::{format_rational, int, rat, Rational};
use crate::group::{Generator, GroupModel};
use crate::lattice::{matrix, Lattice};

/// Candidates scanned before a greedy step gives up.
const MAX_SCAN: u64 = 1 << 26;

/// Largest window checked point by point in a partition certificate.
const MAX_WINDOW: i64 = 1 << 20;

/// Spiral rank to integer: 0, 1, −1, 2, −2, …
fn spiral(r: u64) -> i64 {
    if r % 2 == 1 {
        (r / 2 + 1) as i64
    } else {
        -((r / 2) as i64)
    }
}

/// Coefficient vectors in `ℤⁿ` ordered by max-norm shell, then by the spiral
/// order 0, 1, −1, 2, −2, … in each coordinate with the first coordinate fastest.
struct SpiralCoefficients {
    n: usize,
    shell: u64,
    ranks: Vec<u64>,
    done_zero: bool,
}

impl SpiralCoefficients {
    fn new(n: usize) -> Self {
        SpiralCoefficients { n, shell: 0, ranks: vec![0; n], done_zero: false }
    }
}

impl Iterator for SpiralCoefficients {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if !self.done_zero {
            self.done_zero = true;
            self.shell = 1;
            self.ranks = vec![0; self.n];
            return Some(vec![0; self.n]);
        }
        loop {
            // ranks range over 0..=2·shell; keep those touching the shell boundary
            let top = 2 * self.shell;
            let current = self.ranks.clone();
            let mut carry = true;
            for r in self.ranks.iter_mut() {
                *r += 1;
                if *r <= top {
                    carry = false;
                    break;
                }
                *r = 0;
            }
            if carry {
                self.shell += 1;
                self.ranks = vec![0; self.n];
            }
            if current.iter().any(|&r| r + 1 >= top) {
                return Some(current.iter().map(|&r| spiral(r)).collect());
            }
        }
    }
}

/// Enumeration `h_1, h_2, …` of a lattice: spiral coefficients times the basis,
/// or the multiples `0, s, −s, 2s, …` reduced mod `M` for a cyclic subgroup.
pub fn spiral_enumeration(h: &Lattice) -> Box<dyn Iterator<Item = Vec<Rational>> + '_> {
    match h {
        Lattice::Cyclic(c) | Lattice::DualCyclic(c) => {
            let order = c.order();
            Box::new((0..order).map(move |r| {
                let k = spiral(r).rem_euclid(order as i64) as u64;
                vec![int((k * c.step) as i64)]
            }))
        }
        _ => {
            let basis = h.basis_rows();
            Box::new(SpiralCoefficients::new(h.dimension()).map(move |k| {
                let kr: Vec<Rational> = k.iter().map(|&x| int(x)).collect();
                matrix::vec_mul(&kr, &basis)
            }))
        }
    }
}

fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn fmt_point(x: &[Rational]) -> String {
    x.iter().map(format_rational).collect::<Vec<_>>().join(",")
}

/// `H = ⊔ γ_j + H_j` truncated after the stored chain.
#[derive(Debug, Clone, PartialEq)]
pub struct CosetDecomposition {
    pub ambient: Lattice,
    pub chain: Vec<Lattice>,
    pub gammas: Vec<Vec<Rational>>,
    /// `h_1, …, h_m` of the enumeration.
    pub enumerated: Vec<Vec<Rational>>,
    /// Every `h_k` lies in `⋃_{j≤k} γ_j + H_j`.
    pub prefix_claim: bool,
    pub certificate: PartitionCertificate,
}

impl CosetDecomposition {
    pub fn to_json(&self) -> Value {
        json!({
            "ambient": self.ambient.to_json(),
            "cosets": self.gammas.iter().zip(&self.chain).map(|(g, l)| json!({
                "gamma": g.iter().map(format_rational).collect::<Vec<_>>(),
                "lattice": l.to_json(),
            })).collect::<Vec<_>>(),
            "enumerated": self.enumerated.iter().map(|h| fmt_point(h)).collect::<Vec<_>>(),
            "prefix_claim": self.prefix_claim,
            "certificate": self.certificate.to_json(),
        })
    }

    /// Cosets of the last chain element left uncovered, when the chain has finite
    /// index in the ambient lattice.
    pub fn remainder(&self) -> Result<Vec<Vec<Rational>>> {
        let Some(last) = self.chain.last() else {
            return Ok(vec![vec![Rational::zero(); self.ambient.dimension()]]);
        };
        let (_, reps) = last.index_and_cosets(&self.ambient)?;
        Ok(reps
            .into_iter()
            .filter(|r| !self.gammas.iter().zip(&self.chain).any(|(g, l)| l.contains(&sub(r, g))))
            .collect())
    }

    /// The exact partition obtained by closing the decomposition with its
    /// remainder cosets, as parts of layer `parent`.
    pub fn closed_parts(&self, parent: usize) -> Result<Vec<RefinedPart>> {
        let mut parts: Vec<RefinedPart> = self
            .gammas
            .iter()
            .zip(&self.chain)
            .map(|(g, l)| RefinedPart { parent, gamma: g.clone(), lattice: l.clone() })
            .collect();
        let last = self.chain.last().cloned().unwrap_or_else(|| self.ambient.clone());
        for r in self.remainder()? {
            parts.push(RefinedPart { parent, gamma: r, lattice: last.clone() });
        }
        Ok(parts)
    }
}

fn check_chain(h: &Lattice, chain: &[Lattice]) -> Result<()> {
    let mut prev = h;
    for (j, l) in chain.iter().enumerate() {
        match l.index_in(prev, false) {
            Ok((1, _)) => return Err(GsiError::ChainNotStrict(j)),
            Ok(_) => {}
            Err(GsiError::NotASublattice(_)) if j == 0 => return Err(GsiError::NotFiniteIndex(0)),
            Err(GsiError::NotASublattice(_)) => return Err(GsiError::ChainNotStrict(j)),
            Err(GsiError::SingularMatrix) => return Err(GsiError::NotFiniteIndex(j)),
            Err(e) => return Err(e),
        }
        prev = l;
    }
    Ok(())
}

/// Greedy choice of `γ_j` along the chain: `γ_1 = h_1`, and `γ_{j+1}` is the
/// earliest enumerated element not yet covered. All `H_j` must have finite
/// index in `H`, and the chain must be strictly decreasing.
pub fn coset_refinement(h: &Lattice, chain: &[Lattice]) -> Result<CosetDecomposition> {
    check_chain(h, chain)?;
    let mut gammas: Vec<Vec<Rational>> = Vec::with_capacity(chain.len());
    let mut seen: Vec<Vec<Rational>> = Vec::new();
    let mut it = spiral_enumeration(h);
    let covered = |x: &[Rational], gammas: &[Vec<Rational>]| gammas.iter().zip(chain).any(|(g, l)| l.contains(&sub(x, g)));
    // the earliest uncovered element only moves forward, so one cursor suffices
    let mut cursor = 0usize;
    let mut scanned = 0u64;
    for _ in 0..chain.len() {
        let next = loop {
            while cursor >= seen.len() {
                match it.next() {
                    Some(x) => seen.push(x),
                    None => break,
                }
                scanned += 1;
                if scanned > MAX_SCAN {
                    return Err(GsiError::ModelTooLarge(format!("no uncovered element among {MAX_SCAN} candidates")));
                }
            }
            let Some(x) = seen.get(cursor) else { break None };
            if !covered(x, &gammas) {
                break Some(x.clone());
            }
            cursor += 1;
        };
        match next {
            Some(x) => gammas.push(x),
            // finite ambient group exhausted before the chain
            None => break,
        }
    }
    let m = gammas.len();
    let chain: Vec<Lattice> = chain[..m].to_vec();
    while seen.len() < m {
        match it.next() {
            Some(x) => seen.push(x),
            None => break,
        }
    }
    let enumerated: Vec<Vec<Rational>> = seen.iter().take(m).cloned().collect();
    let prefix_claim = enumerated
        .iter()
        .enumerate()
        .all(|(k, x)| gammas[..=k.min(m - 1)].iter().zip(&chain).any(|(g, l)| l.contains(&sub(x, g))));
    let mut witnesses = Vec::new();
    for j in 0..m {
        for i in 0..j {
            if chain[i].contains(&sub(&gammas[j], &gammas[i])) {
                witnesses.push(format!("cosets {i} and {j} share {}", fmt_point(&gammas[j])));
            }
        }
    }
    let certificate = PartitionCertificate {
        window: format!("first {m} enumerated elements"),
        disjointness: witnesses.is_empty(),
        coverage: prefix_claim,
        uncovered: witnesses,
    };
    Ok(CosetDecomposition { ambient: h.clone(), chain, gammas, enumerated, prefix_claim, certificate })
}

/// Greedy partition of ℤ into cosets `τ_j + Nʲℤ`.
#[derive(Debug, Clone, PartialEq)]
pub struct BrPartition {
    pub n: u64,
    pub taus: Vec<i64>,
    /// `τ_{m+1}`, the smallest-magnitude integer outside the emitted cosets.
    pub next_uncovered: i64,
    /// Every integer of absolute value at most this lies in an emitted coset.
    pub covered_radius: u64,
    pub certificate: PartitionCertificate,
}

impl BrPartition {
    pub fn to_json(&self) -> Value {
        json!({
            "N": self.n,
            "taus": self.taus,
            "next_uncovered": self.next_uncovered,
            "covered_radius": self.covered_radius,
            "certificate": self.certificate.to_json(),
        })
    }

    /// The system `g_j = δ_{τ_j}` on `Nʲℤ`, continued by the greedy tail.
    pub fn system(&self) -> Result<GsiSystem> {
        let mut layers = Vec::with_capacity(self.taus.len());
        for (j, &tau) in self.taus.iter().enumerate() {
            let c = (self.n as i64)
                .checked_pow(j as u32 + 1)
                .ok_or_else(|| GsiError::ModelTooLarge(format!("{}^{} overflows", self.n, j + 1)))?;
            layers.push(Layer::new(Lattice::integer_multiples(c)?, Generator::delta(tau)));
        }
        GsiSystem::new(GroupModel::Integer, layers, format!("greedy partition N={}", self.n))?
            .with_tail(Tail::greedy_delta(self.n, self.taus.len() as u32 + 1))
    }
}

/// `t ∈ τ + Nʲℤ` without overflow: when `Nʲ` exceeds every magnitude in play the
/// coset meets the scan range only in `τ`.
fn in_coset(t: i64, tau: i64, modulus: Option<i128>) -> bool {
    match modulus {
        Some(m) => (t as i128 - tau as i128).rem_euclid(m) == 0,
        None => t == tau,
    }
}

fn power(n: u64, j: u32) -> Option<i128> {
    (n as i128).checked_pow(j).filter(|&p| p < (1i128 << 100))
}

/// Smallest-magnitude integer (positive first on ties) outside the cosets.
fn first_uncovered(n: u64, taus: &[i64]) -> Result<i64> {
    if n == 2 {
        // uncovered set after m cosets is a single class mod 2^m
        let m = taus.len() as u32;
        let mut class = 0i128;
        for (j, &t) in taus.iter().enumerate() {
            // class mod 2^{j+1} avoiding t mod 2^{j+1}
            let p = 1i128 << (j + 1);
            let c0 = class.rem_euclid(p);
            class = if (t as i128).rem_euclid(p) == c0 { c0 + (p >> 1) } else { c0 };
        }
        let p = 1i128 << m;
        let r = class.rem_euclid(p);
        let cand = if r == 0 { 0 } else if r <= p - r { r } else { r - p };
        return i64::try_from(cand).map_err(|_| GsiError::ModelTooLarge(format!("shift {cand}")));
    }
    let mods: Vec<Option<i128>> = (1..=taus.len() as u32).map(|j| power(n, j)).collect();
    for r in 0..MAX_SCAN {
        let t = spiral(r);
        if !taus.iter().zip(&mods).any(|(&tau, &m)| in_coset(t, tau, m)) {
            return Ok(t);
        }
    }
    Err(GsiError::ModelTooLarge(format!("no uncovered integer among {MAX_SCAN} candidates")))
}

/// Greedy shifts `τ_1 = 0, τ_2, …, τ_m` so that the cosets `τ_j + Nʲℤ` are
/// pairwise disjoint, with `τ_j` of smallest magnitude and positive on ties.
pub fn br_partition(n: u64, m: usize) -> Result<BrPartition> {
    if n < 2 {
        return Err(GsiError::InvalidInput(format!("N = {n} must be at least 2")));
    }
    let mut taus = Vec::with_capacity(m);
    for _ in 0..m {
        taus.push(first_uncovered(n, &taus)?);
    }
    let next_uncovered = first_uncovered(n, &taus)?;
    let covered_radius = next_uncovered.unsigned_abs().saturating_sub(1);
    let mods: Vec<Option<i128>> = (1..=m as u32).map(|j| power(n, j)).collect();
    let mut witnesses = Vec::new();
    for j in 0..m {
        for i in 0..j {
            if in_coset(taus[j], taus[i], mods[i]) {
                witnesses.push(format!("tau_{} = {} lies in tau_{} + {}^{}ℤ", j + 1, taus[j], i + 1, n, i + 1));
            }
        }
    }
    let window = (covered_radius as i64).min(MAX_WINDOW);
    let coverage = (-window..=window).all(|t| taus.iter().zip(&mods).any(|(&tau, &md)| in_coset(t, tau, md)));
    let mut uncovered: Vec<String> = witnesses.clone();
    uncovered.push(format!("{next_uncovered} is the first uncovered integer"));
    let certificate = PartitionCertificate {
        window: format!("[{}, {window}]", -window),
        disjointness: witnesses.is_empty(),
        coverage,
        uncovered,
    };
    Ok(BrPartition { n, taus, next_uncovered, covered_radius, certificate })
}

/// One part `γ + Λ` of a refined layer.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinedPart {
    pub parent: usize,
    pub gamma: Vec<Rational>,
    pub lattice: Lattice,
}

impl RefinedPart {
    pub fn to_json(&self) -> Value {
        json!({
            "parent": self.parent,
            "gamma": self.gamma.iter().map(format_rational).collect::<Vec<_>>(),
            "lattice": self.lattice.to_json(),
        })
    }

    pub fn from_json(v: &Value) -> Result<RefinedPart> {
        let parent = v
            .get("parent")
            .and_then(Value::as_u64)
            .ok_or_else(|| GsiError::InvalidInput("part needs \"parent\"".into()))? as usize;
        let gamma = v
            .get("gamma")
            .and_then(Value::as_array)
            .ok_or_else(|| GsiError::InvalidInput("part needs \"gamma\"".into()))?
            .iter()
            .map(|x| crate::exact::parse_rational(x.as_str().map(str::to_string).unwrap_or_else(|| x.to_string()).as_str()))
            .collect::<Result<Vec<_>>>()?;
        let lattice = Lattice::from_json(v.get("lattice").ok_or_else(|| GsiError::InvalidInput("part needs \"lattice\"".into()))?)?;
        Ok(RefinedPart { parent, gamma, lattice })
    }
}

/// A proposed refinement `Γ_j = ⊔_{i∈I_j} γ_i + Λ_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Refinement {
    pub parts: Vec<RefinedPart>,
}

impl Refinement {
    pub fn to_json(&self) -> Value {
        json!({"parts": self.parts.iter().map(RefinedPart::to_json).collect::<Vec<_>>()})
    }

    pub fn from_json(v: &Value) -> Result<Refinement> {
        let parts = v
            .get("parts")
            .and_then(Value::as_array)
            .ok_or_else(|| GsiError::InvalidInput("refinement needs \"parts\"".into()))?
            .iter()
            .map(RefinedPart::from_json)
            .collect::<Result<_>>()?;
        Ok(Refinement { parts })
    }
}

/// Checks that the parts of `layer` tile `gamma` exactly: every coset of the
/// common sublattice lies in exactly one part.
fn check_partition(layer: usize, gamma: &Lattice, parts: &[&RefinedPart]) -> Result<()> {
    let witness = |w: String| GsiError::NotARefinement { layer, witness: w };
    if parts.is_empty() {
        return Err(witness("layer has no parts".into()));
    }
    let mut common = gamma.clone();
    for p in parts {
        match p.lattice.index_in(gamma, false) {
            Ok(_) => {}
            Err(GsiError::NotASublattice(_)) => return Err(witness(format!("{} is not contained in the layer lattice", p.lattice))),
            Err(e) => return Err(e),
        }
        if !gamma.contains(&p.gamma) {
            return Err(witness(format!("gamma={} is not in the layer lattice", fmt_point(&p.gamma))));
        }
        common = common.intersect(&p.lattice)?;
    }
    let (_, reps) = common.index_and_cosets(gamma)?;
    for r in reps {
        let hits = parts.iter().filter(|p| p.lattice.contains(&sub(&r, &p.gamma))).count();
        if hits != 1 {
            return Err(witness(format!("x={} lies in {hits} parts", fmt_point(&r))));
        }
    }
    Ok(())
}

/// Reindexes `system` along an exact refinement: `h_i = T_{γ_i} g_j`.
pub fn build_refined_system(system: &GsiSystem, refinement: &Refinement) -> Result<GsiSystem> {
    if system.tail.is_some() {
        return Err(GsiError::UnsupportedModel("refining systems with a tail".into()));
    }
    for p in &refinement.parts {
        if p.parent >= system.layers.len() {
            return Err(GsiError::NotARefinement { layer: p.parent, witness: "parent layer does not exist".into() });
        }
    }
    for (j, layer) in system.layers.iter().enumerate() {
        let parts: Vec<&RefinedPart> = refinement.parts.iter().filter(|p| p.parent == j).collect();
        check_partition(j, &layer.lattice, &parts)?;
    }
    let mut layers = Vec::with_capacity(refinement.parts.len());
    for j in 0..system.layers.len() {
        let parent = &system.layers[j];
        for p in refinement.parts.iter().filter(|p| p.parent == j) {
            let g = parent.analysis.translate(&p.gamma)?;
            layers.push(match &parent.synthesis {
                Some(h) => Layer::dual(p.lattice.clone(), g, h.translate(&p.gamma)?),
                None => Layer::new(p.lattice.clone(), g),
            });
        }
    }
    let out = GsiSystem::new(system.model.clone(), layers, format!("{} (refined)", system.label))?;
    Ok(out.with_ucp(system.ucp.clone()))
}

/// Output of the small-bandwidth orthonormal basis construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallBandwidthOnb {
    /// Constant system over `Γ_0` with Shannon generators on `α + K`.
    pub base: GsiSystem,
    pub refinement: Refinement,
    pub system: GsiSystem,
    /// Chain index `φ(α, k)` used for each non-remainder part.
    pub chain_index: Vec<Option<usize>>,
    pub bandwidth: Rational,
    /// `1/covol(Γ_0)`.
    pub bound: Rational,
    /// `Σ_{1≤n≤m} 1/covol(Γ_n)`.
    pub chain_sum: Rational,
    /// Exact partition of the full group (finite models), or a window check on ℤ.
    pub certificate: PartitionCertificate,
}

impl SmallBandwidthOnb {
    pub fn to_json(&self) -> Value {
        json!({
            "system": self.system.to_json(),
            "refinement": self.refinement.to_json(),
            "chain_index": self.chain_index,
            "bandwidth": format_rational(&self.bandwidth),
            "bound": format_rational(&self.bound),
            "chain_sum": format_rational(&self.chain_sum),
            "certificate": self.certificate.to_json(),
        })
    }
}

/// Dual-lattice points `α ∈ Γ_0⊥` and a fundamental domain `K` of `Γ_0⊥`.
fn fundamental_tiles(model: &GroupModel, gamma0: &Lattice) -> Result<Vec<TileSet>> {
    match (model, gamma0) {
        (GroupModel::Finite { .. }, Lattice::Cyclic(c)) => {
            let m = c.modulus;
            let width = m / c.step;
            Ok((0..c.step).map(|a| TileSet::points((0..width).map(|k| a * width + k))).collect())
        }
        (GroupModel::Integer, Lattice::Integer(_)) => {
            let c = gamma0.covolume().to_integer().to_u64().unwrap_or(0);
            if c == 0 || c > 1 << 16 {
                return Err(GsiError::ModelTooLarge(format!("{c} dual points")));
            }
            Ok((0..c as i64)
                .map(|a| TileSet::interval(rat(a, c as i64), rat(a + 1, c as i64)))
                .collect())
        }
        _ => Err(GsiError::UnsupportedModel(format!(
            "small-bandwidth bases need ℤ or ℤ_M, got {} with a {} lattice",
            model.name(),
            gamma0.model_name()
        ))),
    }
}

/// Orthonormal basis with bandwidth at most `1/covol(Γ_0)`: the constant system
/// over `Γ_0` with Shannon generators, each copy refined along its own
/// subsequence of the chain `Γ_1 ⊋ Γ_2 ⊋ …`, handed out round robin.
///
/// `chain[0]` is `Γ_0`; parts use `Γ_1, …, Γ_m`. On finite groups the
/// remainder cosets close each refinement exactly. On ℤ the output is the
/// prefix and the certificate checks disjointness plus coverage of `[−W, W]`.
pub fn small_bandwidth_onb(model: &GroupModel, chain: &[Lattice], m: usize, window: i64) -> Result<SmallBandwidthOnb> {
    let Some(gamma0) = chain.first() else {
        return Err(GsiError::InvalidInput("chain needs Γ_0".into()));
    };
    if m + 1 > chain.len() {
        return Err(GsiError::InvalidInput(format!("prefix {m} needs {} chain members, got {}", m + 1, chain.len())));
    }
    check_chain(gamma0, &chain[1..=m])?;
    let tiles = fundamental_tiles(model, gamma0)?;
    let r = tiles.len();
    let lattices = vec![gamma0.clone(); r];
    let region = CoverageRegion::Full;
    let shannon = shannon_generators(model, &lattices, &FrequencyTiling::new(tiles), &region)?;
    let finite = matches!(model, GroupModel::Finite { .. });

    let mut parts = Vec::new();
    let mut chain_index = Vec::new();
    for a in 0..r {
        // φ(α_a, k) = (k−1)·r + a + 1
        let idx: Vec<usize> = (0..).map(|k| k * r + a + 1).take_while(|&n| n <= m).collect();
        let sub_chain: Vec<Lattice> = idx.iter().map(|&n| chain[n].clone()).collect();
        let dec = coset_refinement(gamma0, &sub_chain)?;
        let own: Vec<RefinedPart> = if finite {
            dec.closed_parts(a)?
        } else {
            dec.gammas
                .iter()
                .zip(&dec.chain)
                .map(|(g, l)| RefinedPart { parent: a, gamma: g.clone(), lattice: l.clone() })
                .collect()
        };
        for (i, _) in own.iter().enumerate() {
            chain_index.push(idx.get(i).copied());
        }
        parts.extend(own);
    }
    let refinement = Refinement { parts };
    let (system, certificate) = if finite {
        let s = build_refined_system(&shannon.system, &refinement)?;
        let cert = PartitionCertificate {
            window: "whole group".into(),
            disjointness: true,
            coverage: true,
            uncovered: Vec::new(),
        };
        (s, cert)
    } else {
        let layers = refinement
            .parts
            .iter()
            .map(|p| Ok(Layer::new(p.lattice.clone(), shannon.system.layers[p.parent].analysis.translate(&p.gamma)?)))
            .collect::<Result<Vec<_>>>()?;
        let s = GsiSystem::new(model.clone(), layers, "small-bandwidth onb (prefix)")?;
        (s, window_certificate(gamma0, &refinement, r, window.min(MAX_WINDOW)))
    };
    let part_lattices: Vec<Lattice> = refinement.parts.iter().map(|p| p.lattice.clone()).collect();
    let bandwidth = bandwidth_of(&part_lattices);
    let chain_sum = bandwidth_of(&chain[1..=m]);
    let bound = Rational::one() / gamma0.covolume();
    Ok(SmallBandwidthOnb {
        base: shannon.system,
        refinement,
        system,
        chain_index,
        bandwidth,
        bound,
        chain_sum,
        certificate,
    })
}

/// Per parent layer: every point of `Γ_0 ∩ [−W, W]` lies in exactly one part.
fn window_certificate(gamma0: &Lattice, refinement: &Refinement, r: usize, window: i64) -> PartitionCertificate {
    let mut uncovered = Vec::new();
    let mut disjoint = true;
    let mut covered = true;
    for a in 0..r {
        let parts: Vec<&RefinedPart> = refinement.parts.iter().filter(|p| p.parent == a).collect();
        for t in -window..=window {
            let x = vec![int(t)];
            if !gamma0.contains(&x) {
                continue;
            }
            let hits = parts.iter().filter(|p| p.lattice.contains(&sub(&x, &p.gamma))).count();
            if hits > 1 {
                disjoint = false;
                uncovered.push(format!("copy {a}: {t} lies in {hits} parts"));
            } else if hits == 0 {
                covered = false;
                if uncovered.len() < 8 {
                    uncovered.push(format!("copy {a}: {t} is uncovered"));
                }
            }
        }
    }
    PartitionCertificate { window: format!("[-{window}, {window}]"), disjointness: disjoint, coverage: covered, uncovered }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(base: i64, ratio: i64, m: u32) -> Vec<Lattice> {
        (1..=m).map(|j| Lattice::integer_multiples(base * ratio.pow(j)).unwrap()).collect()
    }

    #[test]
    fn dyadic_refinement_of_integers() {
        let z = Lattice::integer_multiples(1).unwrap();
        let d = coset_refinement(&z, &chain(1, 2, 5)).unwrap();
        let g: Vec<Rational> = d.gammas.iter().map(|x| x[0].clone()).collect();
        assert_eq!(g, [0, 1, -1, 3, -5].map(int));
        assert!(d.certificate.holds());
    }

    #[test]
    fn triadic_refinement_of_integers() {
        let z = Lattice::integer_multiples(1).unwrap();
        let d = coset_refinement(&z, &chain(1, 3, 3)).unwrap();
        let g: Vec<Rational> = d.gammas.iter().map(|x| x[0].clone()).collect();
        assert_eq!(g, [0, 1, -1].map(int));
    }

    #[test]
    fn repeated_chain_member() {
        let z = Lattice::integer_multiples(1).unwrap();
        let two = Lattice::integer_multiples(2).unwrap();
        assert_eq!(coset_refinement(&z, &[two.clone(), two]), Err(GsiError::ChainNotStrict(1)));
    }

    #[test]
    fn br_dyadic_and_triadic() {
        let p = br_partition(2, 6).unwrap();
        assert_eq!(p.taus, [0, 1, -1, 3, -5, 11]);
        assert_eq!(p.next_uncovered, -21);
        assert!(p.certificate.holds());
        let q = br_partition(3, 3).unwrap();
        assert_eq!(q.taus, [0, 1, -1]);
    }

    #[test]
    fn spiral_in_two_dimensions() {
        let z2 = Lattice::integer(&[&[1, 0], &[0, 1]]).unwrap();
        let first: Vec<Vec<Rational>> = spiral_enumeration(&z2).take(9).collect();
        assert_eq!(first[0], vec![int(0), int(0)]);
        assert_eq!(first[1], vec![int(1), int(0)]);
        let mut sorted = first.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 9);
        assert!(first.iter().all(|p| p.iter().all(|x| x.clone() * x.clone() <= int(1))));
    }

    #[test]
    fn missing_coset_is_rejected() {
        let model = GroupModel::cyclic(8);
        let full = Lattice::cyclic(8, 1).unwrap();
        let sys = GsiSystem::new(model, vec![Layer::new(full, crate::group::Generator::dense_delta(8, 0))], "t").unwrap();
        let two = Lattice::cyclic(8, 2).unwrap();
        let r = Refinement { parts: vec![RefinedPart { parent: 0, gamma: vec![int(0)], lattice: two }] };
        assert!(matches!(build_refined_system(&sys, &r), Err(GsiError::NotARefinement { layer: 0, .. })));
    }
}
