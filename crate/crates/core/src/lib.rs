//! Exact computations with locally nilpotent derivations on polynomial rings
//! over ℚ and with module derivations over them.
//!
//! The crate covers derivation arithmetic (`φ_t`, δ-degrees, slices), graded
//! truncations of kernels and of module kernels, Gröbner-basis based ideal and
//! submodule checks, Kähler differentials and symmetric-algebra extensions,
//! and exact feasibility of Kuroda's linear systems.
//!
//! Graded pieces are processed in parallel with rayon when the `parallel`
//! feature is enabled (the default); results never depend on scheduling.

pub mod catalog;
pub mod derivation;
pub mod dmodule;
pub mod error;
pub mod groebner;
pub mod input;
pub mod kernel;
pub mod kuroda;
pub mod linalg;
pub mod par;
pub mod ring;
mod syntax;

pub use derivation::{DeltaDegree, Derivation, LocalizedElement, DEFAULT_CAP};
pub use dmodule::{DeltaModule, ModuleElement, ModuleGrading};
pub use error::{Error, ParseErrorKind, Result};
pub use input::{parse_document, Document};
pub use kernel::{infer_weights, KernelOptions, WeightSystem};
pub use ring::{parse_poly, Monomial, Polynomial, Rational, Ring, RingDescriptor};
