//! Built-in small groups: the default verification corpus plus a few
//! auxiliary groups used in tests and negative controls.

use std::sync::Arc;

use crate::group::{Caps, Group};
use crate::perm::Permutation;

fn build(name: &str, degree: usize, gens: &[&[u32]]) -> Arc<Group> {
    let gens = gens.iter().map(|g| Permutation::from_images(g.to_vec()).expect("library generator")).collect();
    Group::from_generators(name, degree, gens, Caps::default()).expect("library group")
}

pub fn trivial() -> Arc<Group> {
    build("1", 1, &[])
}

pub fn cyclic(n: u32) -> Arc<Group> {
    let images: Vec<u32> = (0..n).map(|i| (i + 1) % n).collect();
    build(&format!("C{n}"), n as usize, &[&images])
}

pub fn s3() -> Arc<Group> {
    build("S3", 3, &[&[1, 0, 2], &[1, 2, 0]])
}

pub fn c6() -> Arc<Group> {
    build("C6", 6, &[&[1, 2, 3, 4, 5, 0]])
}

pub fn d8() -> Arc<Group> {
    build("D8", 4, &[&[1, 2, 3, 0], &[0, 3, 2, 1]])
}

/// Regular representation of the quaternion group.
pub fn q8() -> Arc<Group> {
    build("Q8", 8, &[&[1, 2, 3, 0, 5, 6, 7, 4], &[4, 7, 6, 5, 2, 1, 0, 3]])
}

pub fn a4() -> Arc<Group> {
    build("A4", 4, &[&[1, 2, 0, 3], &[1, 0, 3, 2]])
}

pub fn s4() -> Arc<Group> {
    build("S4", 4, &[&[1, 2, 3, 0], &[1, 0, 2, 3]])
}

/// SL(2,3) acting on the eight nonzero vectors of F_3².
pub fn sl23() -> Arc<Group> {
    build("SL(2,3)", 8, &[&[3, 7, 2, 6, 1, 5, 0, 4], &[0, 1, 3, 4, 2, 7, 5, 6]])
}

/// The dicyclic group C3 ⋊ C4 = ⟨(0 1 2), (1 2)(3 4 5 6)⟩.
pub fn c3_c4() -> Arc<Group> {
    build("C3:C4", 7, &[&[1, 2, 0, 3, 4, 5, 6], &[0, 2, 1, 4, 5, 6, 3]])
}

/// Dihedral group of order 12 acting on a hexagon.
pub fn d12() -> Arc<Group> {
    build("D12", 6, &[&[1, 2, 3, 4, 5, 0], &[0, 5, 4, 3, 2, 1]])
}

/// Frobenius group of order 20, `x ↦ ax + b` over F_5.
pub fn f20() -> Arc<Group> {
    build("F20", 5, &[&[1, 2, 3, 4, 0], &[0, 2, 4, 1, 3]])
}

pub fn c3_wr_c2() -> Arc<Group> {
    build("C3wrC2", 6, &[&[1, 2, 0, 3, 4, 5], &[3, 4, 5, 0, 1, 2]])
}

pub fn s3_x_c3() -> Arc<Group> {
    build("S3xC3", 6, &[&[1, 2, 0, 3, 4, 5], &[1, 0, 2, 3, 4, 5], &[0, 1, 2, 4, 5, 3]])
}

/// GL(2,3) acting on the eight nonzero vectors of F_3².
pub fn gl23() -> Arc<Group> {
    build("GL(2,3)", 8, &[&[3, 7, 2, 6, 1, 5, 0, 4], &[0, 1, 3, 4, 2, 7, 5, 6], &[0, 1, 5, 6, 7, 2, 3, 4]])
}

pub fn s4_x_c2() -> Arc<Group> {
    build("S4xC2", 6, &[&[1, 2, 3, 0, 4, 5], &[1, 0, 2, 3, 4, 5], &[0, 1, 2, 3, 5, 4]])
}

pub fn a5() -> Arc<Group> {
    build("A5", 5, &[&[1, 2, 3, 4, 0], &[1, 2, 0, 3, 4]])
}

/// The default corpus: fourteen solvable groups of order at most 48.
pub fn default_corpus() -> Vec<Arc<Group>> {
    vec![s3(), c6(), d8(), q8(), a4(), s4(), sl23(), c3_c4(), d12(), f20(), c3_wr_c2(), s3_x_c3(), gl23(), s4_x_c2()]
}
