//! # qphase
//!
//! A workbench for a non-commutative, non-associative variant of linear
//! logic, built around three pieces:
//!
//! * finite phase-style models ([`phase`], [`model`]): carriers with a
//!   composition table and a garbage set, biorthogonally closed *facts*,
//!   and the multiplicative/additive connectives computed exactly;
//! * an exact rational subspace engine ([`linalg`]): the quantum-flavored
//!   ground model where composition is orthogonal projection of one
//!   subspace onto another;
//! * formula/sequent syntax and a proof kernel ([`syntax`], [`proof`]):
//!   parsing, evaluation against a model, validity, right-sided
//!   normalization, countermodel search, a checker for the twelve-rule
//!   sequent calculus plus the projective-mode weakening rule, bounded
//!   proof search, and randomized soundness harnesses.
//!
//! All arithmetic is exact (bitsets and rationals), so every law in the
//! test suite is an equality with zero tolerance.
//!
//! ```
//! use qphase::model::ray_model;
//! use qphase::parse_vector;
//! use qphase::syntax::{parse_sequent, sequent_valid, Assignment};
//!
//! // the plane model on four rays
//! let rays: Vec<_> = ["1,0", "0,1", "1,1", "1,-1"]
//!     .iter().map(|s| parse_vector(s).unwrap()).collect();
//! let q = ray_model(&rays, 2).unwrap();
//! assert!(q.validate().is_valid());
//!
//! // composition of facts does not commute: a*b |- b*a fails here
//! let facts = q.all_facts();
//! let mut asg = Assignment::new(&q);
//! asg.bind_fact("a", &facts[1]).unwrap();
//! asg.bind_fact("b", &facts[3]).unwrap();
//! let swap = parse_sequent("a*b |- b*a").unwrap();
//! assert!(!sequent_valid(&asg, &swap).unwrap());
//!
//! // while the logical axiom holds under any assignment
//! let axiom = parse_sequent("|- ~a, a").unwrap();
//! assert!(sequent_valid(&asg, &axiom).unwrap());
//! ```

pub mod linalg;
pub mod model;
pub mod phase;
pub mod proof;
pub mod set;
pub mod syntax;

pub use linalg::{parse_vector, parse_vector_list, ratio, LinalgError, Scalar};
pub use phase::{Fact, QStructure, StructureError, ValidationReport, Violation};
pub use set::ElemSet;
pub use syntax::{
    parse_formula, parse_sequent, Assignment, Formula, ParseError, Sequent,
};

/// The exact scalar the workbench instantiates the subspace engine with.
pub type Rational = num_rational::BigRational;

/// Rational vector in `Q^d`.
pub type QVector = linalg::Vector<Rational>;

/// Canonical rational subspace of `Q^d`.
pub type QSubspace = linalg::Subspace<Rational>;
