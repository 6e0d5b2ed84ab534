//! Tribrackets, tribracket modules and the region-coloring
//! invariants they define on oriented link diagrams.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is pure
//! computation: exact linear algebra over `Z_N`, validation and search of
//! finite tribrackets and their modules, planar-diagram topology from PD
//! codes, and the counting invariant together with its module enhancement.
//! File formats, the knot/link atlas and the command line live in the
//! companion `tribracket` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod diagram;
pub mod enumerate;
pub mod invariant;
pub mod linalg;
pub mod module;
pub mod moves;
pub mod pd;
pub mod polynomial;
pub mod ring;
pub mod tensor;
pub mod tribracket;

pub use diagram::{Diagram, DiagramError, RoleConvention, Roles, Sign, DEFAULT_CONVENTION};
pub use enumerate::enumerate_tribrackets;
pub use invariant::{
    alexander_counting, alexander_image_enhancement, counting_invariant, enumerate_colorings, module_enhancement,
    sticker_matrix, Coloring, Enhancement, InvariantError,
};
pub use linalg::{KernelBackend, ModMatrix};
pub use module::{constant_module, search_modules, ModuleError, ModuleSearch, XModule};
pub use moves::{KinkKind, MoveError};
pub use pd::{parse_pd, PdCode, PdError};
pub use polynomial::Polynomial;
pub use ring::{is_unit, RingError};
pub use tensor::Cube;
pub use tribracket::{Group, GroupError, Tribracket, TribracketError};
