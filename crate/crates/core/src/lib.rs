//! Search, verification and fingerprinting of thin Lie algebras over GF(2).

pub mod canon;
pub mod families;
pub mod fixtures;
pub mod gf2;
pub mod invariants;
pub mod liealg;
pub mod meataxe;
pub mod quad;
pub mod report;
pub mod search;

pub use gf2::{Gf2Error, Gf2Matrix, Gf2Vector, SubspaceBasis};
pub use liealg::{LieElement, LieError, RootIndex, ThinTable};
