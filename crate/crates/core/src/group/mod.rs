//! The three concrete group models and their Haar normalizations.
//!
//! | model        | Haar on G          | dual group | Haar on Ĝ                  |
//! |--------------|--------------------|------------|-----------------------------|
//! | ℤ_{M₁}×…     | counting           | ℤ_{M₁}×…   | point mass `1/∏M_i`        |
//! | ℤ            | counting           | 𝕋 = [0,1)  | Lebesgue, total mass 1     |
//! | ℝⁿ           | Lebesgue           | ℝⁿ         | Lebesgue                    |
//!
//! With these choices the Fourier transform is unitary and
//! `covol(Γ)·covol(Γ⊥) = 1` for every lattice.

pub mod boxes;
pub mod dft;
pub mod generator;

use num_complex::Complex64;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use crate::error::{GsiError, Result};
use crate::exact::{int, parse_rational, rat, unit_phase, Rational};
use crate::lattice::CyclicSublattice;

pub use boxes::{BoxSet, RatBox};
pub use dft::Direction;
pub use generator::{fourier, BoxSpectrum, Generator, Signal, TestFunction};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupModel {
    /// ℤ_{M₁} × … × ℤ_{M_k} with counting measure.
    Finite { moduli: Vec<u64> },
    /// ℤ with counting measure; dual 𝕋 = [0,1).
    Integer,
    /// ℝⁿ with Lebesgue measure.
    Real { dim: usize },
}

/// Human-readable record of the measure normalization of a model.
#[derive(Debug, Clone, PartialEq)]
pub struct HaarConvention {
    pub group_measure: &'static str,
    pub dual_measure: &'static str,
    /// Mass of a single dual point (discrete duals only).
    pub dual_point_mass: Option<Rational>,
    /// `μ(Ĝ)`, or `None` when infinite.
    pub dual_total_mass: Option<Rational>,
}

impl GroupModel {
    pub fn cyclic(m: u64) -> GroupModel {
        GroupModel::Finite { moduli: vec![m] }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GroupModel::Finite { .. } => "finite",
            GroupModel::Integer => "integer",
            GroupModel::Real { .. } => "real",
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            GroupModel::Finite { moduli } => moduli.len(),
            GroupModel::Integer => 1,
            GroupModel::Real { dim } => *dim,
        }
    }

    /// Group order for finite models.
    pub fn order(&self) -> Option<u64> {
        match self {
            GroupModel::Finite { moduli } => Some(moduli.iter().product()),
            _ => None,
        }
    }

    /// The modulus of a single cyclic group.
    pub fn cyclic_modulus(&self) -> Result<u64> {
        match self {
            GroupModel::Finite { moduli } if moduli.len() == 1 => Ok(moduli[0]),
            other => Err(GsiError::UnsupportedModel(format!(
                "operation needs a single cyclic group, got {}",
                other.describe()
            ))),
        }
    }

    pub fn is_discrete(&self) -> bool {
        !matches!(self, GroupModel::Real { .. })
    }

    pub fn haar(&self) -> HaarConvention {
        match self {
            GroupModel::Finite { moduli } => {
                let order: u64 = moduli.iter().product();
                HaarConvention {
                    group_measure: "counting",
                    dual_measure: "uniform point mass 1/|G|",
                    dual_point_mass: Some(rat(1, order as i64)),
                    dual_total_mass: Some(Rational::one()),
                }
            }
            GroupModel::Integer => HaarConvention {
                group_measure: "counting",
                dual_measure: "Lebesgue on [0,1)",
                dual_point_mass: None,
                dual_total_mass: Some(Rational::one()),
            },
            GroupModel::Real { .. } => HaarConvention {
                group_measure: "Lebesgue",
                dual_measure: "Lebesgue",
                dual_point_mass: None,
                dual_total_mass: None,
            },
        }
    }

    /// `μ(Ĝ)`, `None` meaning +∞.
    pub fn dual_total_mass(&self) -> Option<Rational> {
        self.haar().dual_total_mass
    }

    pub fn describe(&self) -> String {
        match self {
            GroupModel::Finite { moduli } => {
                moduli.iter().map(|m| format!("ℤ_{m}")).collect::<Vec<_>>().join("×")
            }
            GroupModel::Integer => "ℤ".into(),
            GroupModel::Real { dim } => format!("ℝ^{dim}"),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            GroupModel::Finite { moduli } => {
                json!({"model": "finite", "moduli": moduli.iter().map(|m| m.to_string()).collect::<Vec<_>>()})
            }
            GroupModel::Integer => json!({"model": "integer"}),
            GroupModel::Real { dim } => json!({"model": "real", "dimension": dim}),
        }
    }

    pub fn from_json(v: &Value) -> Result<GroupModel> {
        let bad = |m: &str| GsiError::InvalidInput(format!("group model JSON: {m}"));
        match v.get("model").and_then(Value::as_str) {
            Some("finite") => {
                let moduli = v
                    .get("moduli")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("missing moduli"))?
                    .iter()
                    .map(|m| {
                        let s = m.as_str().map(str::to_string).unwrap_or_else(|| m.to_string());
                        parse_rational(&s)?
                            .to_integer()
                            .to_u64()
                            .filter(|&x| x > 0)
                            .ok_or_else(|| bad("moduli must be positive integers"))
                    })
                    .collect::<Result<Vec<u64>>>()?;
                if moduli.is_empty() {
                    return Err(bad("empty moduli"));
                }
                Ok(GroupModel::Finite { moduli })
            }
            Some("integer") => Ok(GroupModel::Integer),
            Some("real") => {
                let dim = v.get("dimension").and_then(Value::as_u64).ok_or_else(|| bad("missing dimension"))?;
                if dim == 0 {
                    return Err(bad("dimension must be positive"));
                }
                Ok(GroupModel::Real { dim: dim as usize })
            }
            Some(other) => Err(GsiError::UnsupportedModel(other.to_string())),
            None => Err(bad("missing model")),
        }
    }
}

/// `dℤ_M` for a divisor `d` of `M`.
pub fn subgroup_for_divisor(m: u64, d: u64) -> Result<CyclicSublattice> {
    CyclicSublattice::new(m, d)
}

/// `⟨x, ω⟩` for the model: `e^{2πi Σ x_iω_i/M_i}` on finite groups and
/// `e^{2πi⟨x,ω⟩}` on ℤ and ℝⁿ. The phase is reduced exactly before rounding.
pub fn character_value(model: &GroupModel, x: &[Rational], omega: &[Rational]) -> Complex64 {
    let phase: Rational = match model {
        GroupModel::Finite { moduli } => x
            .iter()
            .zip(omega)
            .zip(moduli)
            .map(|((a, b), &m)| a * b / int(m as i64))
            .sum(),
        _ => x.iter().zip(omega).map(|(a, b)| a * b).sum(),
    };
    unit_phase(&phase)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characters() {
        let c = character_value(&GroupModel::cyclic(8), &[int(2)], &[int(2)]);
        assert_eq!(c, Complex64::new(-1.0, 0.0));
        let c = character_value(&GroupModel::Integer, &[int(3)], &[rat(1, 3)]);
        assert_eq!(c, Complex64::new(1.0, 0.0));
        let c = character_value(&GroupModel::Real { dim: 1 }, &[rat(1, 2)], &[rat(1, 2)]);
        assert_eq!(c, Complex64::new(0.0, 1.0));
    }

    #[test]
    fn divisor_subgroups() {
        let s = subgroup_for_divisor(8, 2).unwrap();
        assert_eq!(s.elements(), vec![0, 2, 4, 6]);
        assert_eq!(crate::lattice::Lattice::Cyclic(s).covolume(), int(2));
        assert_eq!(subgroup_for_divisor(12, 12).unwrap().elements(), vec![0]);
        assert_eq!(subgroup_for_divisor(12, 5), Err(GsiError::NotADivisor { modulus: 12, divisor: 5 }));
    }

    #[test]
    fn model_json() {
        for m in [GroupModel::cyclic(12), GroupModel::Integer, GroupModel::Real { dim: 2 }] {
            assert_eq!(GroupModel::from_json(&m.to_json()).unwrap(), m);
        }
    }
}
