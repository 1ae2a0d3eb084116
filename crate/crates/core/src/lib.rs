//! Modular data, minimal modular extensions and their stacking group.

pub mod cli;
pub mod cohomology;
pub mod condensation;
pub mod constructors;
pub mod data;
pub mod equivalence;
pub mod error;
pub mod extensions;
pub mod group;
pub mod io;
pub mod phase;
pub mod ring;
pub mod symmetric;

pub use data::{central_charge, conjugate, deligne_product, is_modular, CentralCharge, PreModularData};
pub use error::{Error, Result};
pub use extensions::{stack, validate_extension, ExtensionWitness};
pub use phase::Phase;
