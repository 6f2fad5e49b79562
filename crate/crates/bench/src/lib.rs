//! Helpers shared by the benchmarks in `benches/`.

use std::sync::Arc;

use vertexlab::{Caps, Group, GroupFile};

/// Rebuilds `g` from its generators so that no table or lattice is cached yet.
pub fn fresh(g: &Group) -> Arc<Group> {
    GroupFile::from_group(g).build(Caps::default()).expect("library groups rebuild")
}
