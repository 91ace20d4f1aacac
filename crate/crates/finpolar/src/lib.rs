//! Exact-arithmetic engine for finite classical polar spaces.
//!
//! Everything is computed over explicit finite fields with integer indices —
//! no floating point anywhere. The crate provides: finite fields `gf`,
//! projective spaces `projspace`, the six families of finite classical polar
//! spaces `polar`, combinatorial constructions with independent verifiers
//! `constructions`, dense bit-matrix graphs with exact spectral certification
//! `graphs`, graph switching `switching`, association schemes with exact
//! rational idempotents `schemes`, linear codes `codes`, and JSON
//! certificates `cert`.

pub mod constructions;
pub mod gf;
pub mod graphs;
pub mod linalg;
pub mod polar;
pub mod projspace;
pub mod schemes;
