//! Bandwidth `BW = Σ_j 1/covol(Γ_j)`.

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::system::GsiSystem;
use crate::exact::{format_rational, Rational};
use crate::lattice::Lattice;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BandwidthValue {
    Finite(Rational),
    Infinite,
}

impl BandwidthValue {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            BandwidthValue::Finite(r) => Some(r),
            BandwidthValue::Infinite => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            BandwidthValue::Finite(r) => json!(format_rational(r)),
            BandwidthValue::Infinite => json!("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bandwidth {
    /// Contribution of the stored layers.
    pub prefix: Rational,
    pub tail: Option<BandwidthValue>,
    pub total: BandwidthValue,
}

impl Bandwidth {
    pub fn to_json(&self) -> Value {
        json!({
            "prefix": format_rational(&self.prefix),
            "tail": self.tail.as_ref().map(BandwidthValue::to_json),
            "total": self.total.to_json(),
        })
    }
}

pub fn bandwidth_of(lattices: &[Lattice]) -> Rational {
    lattices.iter().map(|l| Rational::one() / l.covolume()).sum()
}

/// `Σ_{j ≥ first} 1/(base·ratioʲ)`.
pub fn geometric_bandwidth(base: &Rational, ratio: &Rational, first: u32) -> BandwidthValue {
    if *ratio <= Rational::one() || base.is_zero() {
        return BandwidthValue::Infinite;
    }
    let lead = Rational::one() / (base * num_traits::pow(ratio.clone(), first as usize));
    BandwidthValue::Finite(lead * ratio / (ratio - Rational::one()))
}

pub fn bandwidth(system: &GsiSystem) -> Bandwidth {
    let lattices: Vec<Lattice> = system.layers.iter().map(|l| l.lattice.clone()).collect();
    let prefix = bandwidth_of(&lattices);
    let tail = system.tail.as_ref().map(|t| geometric_bandwidth(&t.base, &t.ratio, t.first_index));
    let total = match &tail {
        None => BandwidthValue::Finite(prefix.clone()),
        Some(BandwidthValue::Finite(t)) => BandwidthValue::Finite(&prefix + t),
        Some(BandwidthValue::Infinite) => BandwidthValue::Infinite,
    };
    Bandwidth { prefix, tail, total }
}
