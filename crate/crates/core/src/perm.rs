use std::fmt;

use crate::error::{Error, Result};

/// A permutation of `{0, …, d-1}` stored as its image array.
///
/// Products compose left to right: `a.then(b)` maps `i` to `b(a(i))`, and
/// conjugation is `x^g = g⁻¹ x g`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Box<[u32]>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &i in &images {
            let slot = seen
                .get_mut(i as usize)
                .ok_or_else(|| Error::InvalidPermutation(format!("image {i} out of range 0..{d}")))?;
            if *slot {
                return Err(Error::InvalidPermutation(format!("image {i} repeated")));
            }
            *slot = true;
        }
        Ok(Permutation(images.into_boxed_slice()))
    }

    /// Builds a permutation from disjoint cycles on `degree` points.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                let b = cycle[(k + 1) % cycle.len()];
                if a as usize >= degree || b as usize >= degree {
                    return Err(Error::InvalidPermutation(format!("point out of range in {cycle:?}")));
                }
                images[a as usize] = b;
            }
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn apply(&self, point: u32) -> u32 {
        self.0[point as usize]
    }

    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation(inv.into_boxed_slice())
    }

    /// `g⁻¹ self g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        g.inverse().then(self).then(g)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.0.len()];
        let mut acc = 1u64;
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i] as usize;
                len += 1;
            }
            acc = crate::arith::lcm(acc, len);
        }
        acc
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut wrote = false;
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{i}")?;
                first = false;
                i = self.0[i] as usize;
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}
