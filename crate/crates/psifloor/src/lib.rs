//! Exact computation of rational plane descendant Gromov-Witten invariants.
//!
//! Two independent computation paths are provided and cross-validated:
//!
//! * enumeration of Psi-floor diagrams with edge choices and markings
//!   ([`engine::n_floor_absolute`], [`engine::n_floor_relative`]), and
//! * a Caporaso-Harris style recursion ([`recursion::Evaluator`]).
//!
//! All arithmetic is exact: invariants are arbitrary-precision rationals,
//! combinatorial counts are big integers. The crate is `no_std` (alloc only);
//! IO, caching and the command line live in the companion `psifloor-cli`
//! crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(any(test, feature = "std"))]
extern crate std;

pub mod arith;
pub mod choices;
pub mod diagram;
pub mod engine;
pub mod marking;
pub mod recursion;
pub mod relative;

pub use arith::{IntSeq, Rational, SeqBase};
pub use diagram::PsiFloorDiagram;
