//! Exact clique numbers of Paley graphs and mechanical checks of the
//! character-sum upper bounds built on them.
//!
//! The layers build on each other: [`ffield`] gives arithmetic in F_q and the
//! quadratic character, [`paley`] the graph P_q, [`clique`] the exact clique
//! number s(q), [`phi`] the profile of a maximum clique and its identities,
//! and [`bounds`] the parity bounds and prime classification. [`batch`] and
//! [`suite`] tie them together for the command-line front end.

pub mod batch;
pub mod bitset;
pub mod bounds;
pub mod check;
pub mod clique;
pub mod error;
pub mod ffield;
pub mod paley;
pub mod phi;
pub mod primes;
pub mod suite;

pub use bitset::BitSet;
pub use bounds::{BoundReport, Classification, Parity, PolyReport};
pub use check::Check;
pub use clique::{CliqueResult, Method};
pub use error::{Error, Result};
pub use ffield::{CharacterTable, FieldElement, FieldSpec};
pub use paley::PaleyGraph;
pub use phi::{DSet, PhiProfile};

pub use batch::{Analysis, ResultRow};
