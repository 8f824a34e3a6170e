pub mod analysis;
pub mod construct;
pub mod error;
pub mod exact;
pub mod group;
pub mod lattice;
pub mod trig;
pub mod verify;
