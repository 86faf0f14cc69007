//! Brauer diagrams, circuit algebras, graph substitution and Segal checks.
//!
//! The crate is organised bottom-up:
//!
//! - [`pairing`]: perfect matchings and their stacking composition.
//! - [`brauer`]: the monochrome Brauer category.
//! - [`brauer_algebra`]: Brauer categories enriched in free modules over a ring.
//! - [`coloured`]: palettes, coloured and oriented Brauer diagrams.
//! - [`wiring`]: the wiring-diagram operad and finite circuit algebras.
//! - [`graph`]: graphs with ports, étale morphisms and gluing.
//! - [`substitution`]: graphs of graphs, colimits and vertex deletion.
//! - [`species`]: graphical species, circuit-operad structure and the Segal check.
//! - [`cli`]: the command-line front end.

pub mod brauer;
pub mod brauer_algebra;
pub mod cli;
pub mod coloured;
pub mod error;
pub mod graph;
pub mod pairing;
pub mod perm;
pub mod species;
pub mod substitution;
pub mod util;
pub mod wiring;

pub use error::{Error, Result};
