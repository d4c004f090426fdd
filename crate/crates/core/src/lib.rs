//! A reflective toy computability workbench.
//!
//! A minimal self-applicable programming system — a total Gödel numbering of
//! a WHILE-style register language with reflective primitives, a fuel-bounded
//! universal evaluator, and an s-m-n specializer — on which the classical
//! fixed-point constructions run as executable code: both recursion theorems
//! in constructive form, the dovetailing least fixed point, the standard-form
//! transformer and its minimality guarantee, the non-minimal fixed point
//! counterexample, oracle-machine functionals, and the Futamura projections.

pub mod nat;
pub mod objlang;
pub mod builder;
pub mod text;
pub mod evaluator;
pub mod specializer;
pub mod recursion;
pub mod functionals;
pub mod futamura;
pub mod corpus;

pub use evaluator::{check_equiv, run, run_oracle, universal_index, Fuel, Oracle, Outcome};
pub use nat::{pair_nat, unpair_nat, Nat};
pub use objlang::{compose_codes, decode, div_index, encode, Index, OracleProgram, Program};
pub use specializer::{smn, smn_opt, subst_const, Template};
