//! Constructive procedures: Shannon-type generators from frequency tilings,
//! cube coverings, near-isotropic tiles, coset refinements of subgroup chains
//! and the greedy integer partition by cosets of `Nʲℤ`.

pub mod cosets;
pub mod cubes;
pub mod tiling;

use serde_json::{json, Value};

pub use cosets::{
    br_partition, build_refined_system, coset_refinement, small_bandwidth_onb, spiral_enumeration, BrPartition,
    CosetDecomposition, RefinedPart, Refinement, SmallBandwidthOnb,
};
pub use cubes::{cube_cover, near_iso_tiles, CubeCover, NearIsoTile};
pub use tiling::{
    check_coverage, check_injective, disjointify_tiles, shannon_generators, CoverageRegion, FrequencyTiling,
    ShannonSystem, TileSet,
};

/// Exhaustive verdicts of a construction on a finite verification window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionCertificate {
    pub window: String,
    pub disjointness: bool,
    pub coverage: bool,
    pub uncovered: Vec<String>,
}

impl PartitionCertificate {
    pub fn holds(&self) -> bool {
        self.disjointness && self.coverage
    }

    pub fn to_json(&self) -> Value {
        json!({
            "window": self.window,
            "disjointness": self.disjointness,
            "coverage": self.coverage,
            "uncovered": self.uncovered,
        })
    }
}
