//! Drawing outerplanar graphs with at most thirteen distinct edge lengths.
//!
//! Every outerplanar graph embeds in the infinite triangle tree, whose
//! vertices carry exact polynomial coordinates over twelve unit-torus
//! variables. Evaluating those polynomials at a sampled torus point yields a
//! straight-line drawing whose edge lengths all come from a set of at most
//! thirteen values, and whose vertices avoid every non-incident edge.
//!
//! The crate is split along that pipeline:
//!
//! * [`encoding`] — names for triangle-tree vertices and rhombus-tree nodes,
//!   the covering map between them, and the forward/turn run-length codes.
//! * [`symbolic`] — sparse monomial algebra over the twelve variables, the
//!   vertex polynomial formula, palindromicity predicates, and the exact
//!   vertex/edge incidence classifier.
//! * [`embedder`] — validation and triangulation of user graphs, the map
//!   into the triangle tree, torus sampling, and drawing production.
//! * [`validator`] — numeric certification of drawings, the independent
//!   geometric oracle, and the symbolic incidence certificate.
//! * [`truncation`] — bounded-depth enumeration of the trees.
//!
//! The core is `no_std` (with `alloc`); IO, file formats and the command
//! line live in the companion `td13` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod embedder;
pub mod encoding;
pub mod symbolic;
pub mod torus;
pub mod truncation;
pub mod validator;

pub use num_complex::Complex64;
