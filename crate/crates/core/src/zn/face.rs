use std::fmt;

use crate::error::{Error, Result};

/// A face of the orthant N^n, identified with a subset of the axes.
///
/// Axes are 0-based internally; text and JSON forms use 1-based axes.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    n: usize,
    mask: u32,
}

impl Face {
    pub fn from_axes(n: usize, axes: &[usize]) -> Result<Face> {
        if n > 31 {
            return Err(Error::InvalidFace(format!(
                "ambient dimension {n} too large"
            )));
        }
        let mut mask = 0u32;
        for &a in axes {
            if a >= n {
                return Err(Error::InvalidFace(format!(
                    "axis {} outside 1..{}",
                    a + 1,
                    n
                )));
            }
            mask |= 1 << a;
        }
        Ok(Face { n, mask })
    }

    /// Face from 1-based axis labels.
    pub fn from_one_based(n: usize, axes: &[usize]) -> Result<Face> {
        if axes.contains(&0) {
            return Err(Error::InvalidFace("axes are numbered from 1".into()));
        }
        let zero: Vec<usize> = axes.iter().map(|a| a - 1).collect();
        Face::from_axes(n, &zero)
    }

    pub fn from_mask(n: usize, mask: u32) -> Face {
        debug_assert!(n >= 32 || mask < (1u32 << n));
        Face { n, mask }
    }

    pub fn empty(n: usize) -> Face {
        Face { n, mask: 0 }
    }

    pub fn full(n: usize) -> Face {
        Face {
            n,
            mask: if n == 0 { 0 } else { (1u32 << n) - 1 },
        }
    }

    /// All 2^n faces in increasing bitmask order.
    pub fn all(n: usize) -> impl Iterator<Item = Face> {
        (0u32..(1u32 << n)).map(move |mask| Face { n, mask })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn contains(&self, axis: usize) -> bool {
        self.mask & (1 << axis) != 0
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn is_subset(&self, other: &Face) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn union(&self, other: &Face) -> Face {
        Face {
            n: self.n,
            mask: self.mask | other.mask,
        }
    }

    pub fn with_axis(&self, axis: usize) -> Face {
        Face {
            n: self.n,
            mask: self.mask | (1 << axis),
        }
    }

    /// Axes in the face, ascending, 0-based.
    pub fn axes(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.contains(i)).collect()
    }

    /// Axes outside the face, ascending, 0-based.
    pub fn complement_axes(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| !self.contains(i)).collect()
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.axes().into_iter().map(|a| a + 1).collect()
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, a) in self.one_based().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}
