//! Exact character theory for finite π-separable permutation groups.
//!
//! The crate builds character tables with Dixon's method over exact
//! cyclotomic numbers, computes π-special and π-factored characters, normal
//! nuclei and Navarro vertices, the irreducible π-partial characters `Iπ(G)`
//! and their vertices, and checks the bijection `Irr(G|Q,δ) → Iπ(G|Q)` and
//! related statements instance by instance.
//!
//! ```
//! use vertexlab::{library, irreducibles, navarro_vertex, PiSet};
//!
//! let s3 = library::s3();
//! let chi = &irreducibles(&s3)[2];
//! let v = navarro_vertex(chi, &"2".parse::<PiSet>().unwrap()).unwrap();
//! assert_eq!(v.q.order(), 3);
//! assert!(v.delta.is_linear() && !v.delta.is_trivial());
//! ```

pub mod arith;
pub mod chartab;
pub mod cyclotomic;
pub mod error;
pub mod group;
pub mod io;
pub mod lattice;
pub mod library;
pub mod partial;
pub mod perm;
pub mod pi;
pub mod pistructure;
pub mod verify;

pub use chartab::{inertia_group, irreducibles, linear_characters, Character, CharacterTable};
pub use cyclotomic::{Cyclotomic, Rational};
pub use error::{Error, Result};
pub use group::{Caps, ConjugacyClass, Group, Subgroup};
pub use io::{load_group, CorpusEntry, GroupFile, Manifest, TableCache};
pub use lattice::{HallSubgroups, Lattice, NormalStructure};
pub use partial::{
    ipi, ipi_cone, ipi_via_vertices, lifts_of, max_pi_degree_normal, partial_constituents, restrict_to_pi,
    vertex_of_partial, IpiSet, PartialCharacter,
};
pub use perm::Permutation;
pub use pi::PiSet;
pub use pistructure::{
    clifford_correspondent, extend_stable_linear, irr_with_vertex, is_pi_special, is_stable, max_factored_normal,
    navarro_vertex, normal_nucleus, pi_factorization, Factorization, NavarroVertex, Nucleus, NucleusStep,
};
pub use verify::{corpus_run, run_checks, Check, CheckResult, CorpusOptions, CorpusReport, Status};
