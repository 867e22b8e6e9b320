//! IO, caching, verification fixtures and output formats around the
//! `psifloor` core.

pub mod cache;
pub mod runner;
pub mod trace;
pub mod verify;
