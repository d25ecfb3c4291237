//! Exact-arithmetic toolkit for boolean quadric polytope relaxations of
//! sparse graphs.
//!
//! For a simple graph G with n vertices and m edges, the relaxation Q(G) is
//! the solution set of the McCormick rows F0-F3 in the unit box of dimension
//! d = n + m (coordinates x_1..x_n, then y_e per edge in canonical order),
//! O(G) is the order polytope keeping only F1-F2, and P(G) is the integer
//! hull (the boolean quadric polytope itself). The crate computes:
//!
//! * exact volumes of O/Q/P via linear-extension counting of the incidence
//!   poset and via closed forms for stars, paths, cycles, matchings and
//!   complete graphs ([`formulas`], [`poset`], [`numbers`]);
//! * facet geometry of the odd-cycle inequalities: the cut-off simplex W per
//!   odd edge subset A, with exact determinant volumes ([`polytope`]);
//! * an exact odd-cycle separation oracle for cactus graphs ([`separation`]);
//! * d-th-root asymptotics ([`formulas::asymptotic_report`]);
//! * seeded, worker-count-independent Monte-Carlo volume estimates and the
//!   necklace refinement experiment ([`mc`]).

pub mod cli;
pub mod error;
pub mod formulas;
pub mod graph;
pub mod mc;
pub mod numbers;
pub mod polytope;
pub mod poset;
pub mod separation;

pub use error::{Error, Result};
