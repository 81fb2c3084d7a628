//! Exact-arithmetic toolkit for studying the mod-p dimension subgroup
//! filtration of free groups and the subgroup growth questions attached
//! to it.
//!
//! Everything here computes with exact integers or with coefficients in a
//! prime field; there is no floating point anywhere near a mathematical
//! claim.  The crate is organised in layers:
//!
//! * [`arith`] - Moebius function, necklace (Witt) numbers, dimension
//!   counts for the filtration layers, and an exact inequality scanner.
//! * [`fp`] - dense linear algebra over a prime field F_p.
//! * [`ncpoly`] - truncated polynomials in noncommuting variables over
//!   F_p, the associative envelope everything embeds into.
//! * [`liegraded`] - Lyndon words, standard bracketings, graded layer
//!   bases with their p-power decorations, and the matrix group action
//!   on each layer.
//! * [`magnus`] - free group words, the embedding `x_i -> 1 + X_i` into
//!   the truncated envelope, valuation tests, and checkers for the
//!   filtration identities.
//! * [`modlat`] - invariant subspace lattices of finite F_p-modules and
//!   the census of characteristic subgroups cut out by them.
//! * [`permw`] - small permutation groups, wreath products, exhaustive
//!   normal subgroup enumeration, and normal subgroup counts of iterated
//!   wreath towers.

pub mod arith;
pub mod fp;
pub mod liegraded;
pub mod magnus;
pub mod modlat;
pub mod ncpoly;
pub mod permw;
pub mod stats;
