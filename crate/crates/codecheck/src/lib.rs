//! Randomized codeword membership testing for linear codes.
//!
//! Checking whether a received vector x lies in an [n,k] linear code C by
//! computing the syndrome Hxᵀ costs O(n²) field operations. This crate
//! implements the alternative: precompute a *test set* S ⊂ F_{q^u}^n such
//! that x ∈ C iff x is orthogonal to every row of S, and any x ∉ C fails
//! orthogonality on at least a (1−p) fraction of S. Verification then samples
//! R rows at random, costing exactly R·u·n base-field multiplications with
//! one-sided error probability at most p^R.
//!
//! Test sets are built as the rows of ḠᵀH, where Ḡ generates an outer
//! [n̄, n−k, d̄] code over an extension field; the designed probability is
//! exactly 1 − d̄/n̄. MDS (Reed–Solomon) outer codes realize any target
//! probability above (n−k−1)/(q^u−1).
//!
//! Start with the runnable examples (one per capability):
//!
//! ```bash
//! cargo run --example field_arithmetic
//! cargo run --example build_codes
//! cargo run --example test_sets
//! cargo run --example verify_membership
//! cargo run --example operation_counts
//! cargo run --example monte_carlo
//! cargo run --example rm_list_decoding
//! cargo run --example artifacts
//! ```
//!
//! The same functionality is scriptable through the thin `codecheck` binary
//! (subcommands `build`, `testset`, `verify`, `bench`, `mc`).

pub mod cli;
pub mod code;
pub mod error;
pub mod field;
pub mod linalg;
pub mod rmlist;
mod rng;
pub mod testset;
pub mod verify;

pub use code::{Distance, LinearCode};
pub use error::{Error, Result};
pub use field::{Fe, Field};
pub use linalg::{Matrix, Vector};
pub use testset::TestSet;
pub use verify::{determine_codeword, OpCounter, Verdict, VerifierConfig, VerifierReport};
