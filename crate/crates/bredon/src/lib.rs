//! Exact-arithmetic Bredon cohomology of finite G-CW complexes.
//!
//! The crate computes Bredon cohomology from the cellular cochain complex
//! over the orbit category, filters it by isotropy length, and runs the two
//! resulting spectral sequences: the main one converging to H*_G(X; M) and
//! the fixed-point-set one converging to H*_{W H}(X^H; ĥM). Everything is
//! integer linear algebra through Smith normal form; there is no floating
//! point anywhere.
//!
//! Entry points:
//! - [`fgroup`]: finite groups, subgroup lattices, Weyl groups, the length
//!   filtration.
//! - [`orbitcat`]: the orbit category, slice skeleta, twisted categories.
//! - [`abgrp`]: presentations of finitely generated abelian groups, Smith
//!   normal form, cochain complexes, Hom over group rings.
//! - [`gcw`]: combinatorial G-CW complexes and (modified) fixed points.
//! - [`coeff`]: coefficient systems on the orbit category.
//! - [`cohom`]: the Bredon cochain complex and reduced local cohomology.
//! - [`specseq`]: filtered complexes, pages, E₁ identification, convergence.
//! - [`cli`]: the command-line front end used by the `bredon` binary.
//!
//! The `examples/` directory has one runnable example per capability; start
//! with `cargo run --example bredon_cohomology`.

pub mod abgrp;
pub mod cli;
pub mod coeff;
pub mod cohom;
pub mod error;
pub mod fgroup;
pub mod fixtures;
pub mod gcw;
pub mod orbitcat;
pub mod specseq;

pub use error::Error;
