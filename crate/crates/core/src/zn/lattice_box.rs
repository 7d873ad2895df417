use crate::error::{Error, Result};

use super::Face;

/// A point of Z^n.
pub type Point = Vec<i64>;

/// The closed interval `[lo, hi]` of Z^n.
///
/// Points are indexed in lexicographic order with the last axis varying
/// fastest, so `p - e_i` always has a smaller index than `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeBox {
    lo: Point,
    hi: Point,
    strides: Vec<usize>,
    len: usize,
}

impl LatticeBox {
    pub fn new(lo: Point, hi: Point) -> Result<LatticeBox> {
        if lo.len() != hi.len() {
            return Err(Error::InvalidBox(format!(
                "corners of dimensions {} and {}",
                lo.len(),
                hi.len()
            )));
        }
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(Error::InvalidBox(format!("lo {lo:?} exceeds hi {hi:?}")));
        }
        let n = lo.len();
        let mut strides = vec![1usize; n];
        let mut len = 1usize;
        for i in (0..n).rev() {
            strides[i] = len;
            len *= (hi[i] - lo[i] + 1) as usize;
        }
        Ok(LatticeBox {
            lo,
            hi,
            strides,
            len,
        })
    }

    /// The one-point box of Z^0.
    pub fn point_box() -> LatticeBox {
        LatticeBox::new(vec![], vec![]).expect("empty corners")
    }

    pub fn n(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    /// Number of lattice points.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn side(&self, axis: usize) -> usize {
        (self.hi[axis] - self.lo[axis] + 1) as usize
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        p.len() == self.n()
            && p.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(x, (l, h))| l <= x && x <= h)
    }

    pub fn index(&self, p: &[i64]) -> Option<usize> {
        if !self.contains(p) {
            return None;
        }
        Some(
            (0..self.n())
                .map(|i| (p[i] - self.lo[i]) as usize * self.strides[i])
                .sum(),
        )
    }

    pub fn point(&self, mut idx: usize) -> Point {
        let mut p = vec![0; self.n()];
        for i in 0..self.n() {
            p[i] = self.lo[i] + (idx / self.strides[i]) as i64;
            idx %= self.strides[i];
        }
        p
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.len).map(move |i| self.point(i))
    }

    /// Index of `p + e_axis` when it stays in the box.
    pub fn step_index(&self, idx: usize, axis: usize) -> Option<usize> {
        let coord = self.lo[axis] + ((idx / self.strides[axis]) % self.side(axis)) as i64;
        (coord < self.hi[axis]).then(|| idx + self.strides[axis])
    }

    /// Index of `p - e_axis` when it stays in the box.
    pub fn back_index(&self, idx: usize, axis: usize) -> Option<usize> {
        let coord = self.lo[axis] + ((idx / self.strides[axis]) % self.side(axis)) as i64;
        (coord > self.lo[axis]).then(|| idx - self.strides[axis])
    }

    /// Convex projection: clamp every coordinate into `[lo_i, hi_i]`.
    pub fn project(&self, x: &[i64]) -> Point {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(&v, (&l, &h))| v.clamp(l, h))
            .collect()
    }

    pub fn project_index(&self, x: &[i64]) -> usize {
        self.index(&self.project(x))
            .expect("projection lies in the box")
    }

    pub fn negated(&self) -> LatticeBox {
        let lo = self.hi.iter().map(|v| -v).collect();
        let hi = self.lo.iter().map(|v| -v).collect();
        LatticeBox::new(lo, hi).expect("negation preserves order")
    }

    /// Grow by `below` under `lo` and `above` over `hi` on every axis.
    pub fn expanded(&self, below: i64, above: i64) -> LatticeBox {
        let lo = self.lo.iter().map(|v| v - below).collect();
        let hi = self.hi.iter().map(|v| v + above).collect();
        LatticeBox::new(lo, hi).expect("expansion preserves order")
    }

    /// Smallest box containing both.
    pub fn hull(&self, other: &LatticeBox) -> Result<LatticeBox> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch(format!(
                "boxes in Z^{} and Z^{}",
                self.n(),
                other.n()
            )));
        }
        let lo = self
            .lo
            .iter()
            .zip(&other.lo)
            .map(|(a, b)| *a.min(b))
            .collect();
        let hi = self
            .hi
            .iter()
            .zip(&other.hi)
            .map(|(a, b)| *a.max(b))
            .collect();
        LatticeBox::new(lo, hi)
    }

    /// Restriction to the complementary axes of `face`.
    pub fn slice_box(&self, face: &Face) -> LatticeBox {
        let comp = face.complement_axes();
        let lo = comp.iter().map(|&i| self.lo[i]).collect();
        let hi = comp.iter().map(|&i| self.hi[i]).collect();
        LatticeBox::new(lo, hi).expect("sub-box of a valid box")
    }

    /// Parses `"l1,l2:h1,h2"`.
    pub fn parse(s: &str) -> Result<LatticeBox> {
        let (l, h) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidBox(format!("expected lo:hi, got {s:?}")))?;
        LatticeBox::new(parse_point(l)?, parse_point(h)?)
    }
}

/// Parses a comma-separated integer point; the empty string is the point of Z^0.
pub fn parse_point(s: &str) -> Result<Point> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::InvalidBox(format!("bad coordinate {t:?}")))
        })
        .collect()
}

pub fn leq(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Fills a full point from coordinates on the complement of `face` and a
/// fixed value per face axis taken from `fill`.
pub fn embed(face: &Face, comp_coords: &[i64], fill: &[i64]) -> Point {
    let mut p = fill.to_vec();
    for (k, &i) in face.complement_axes().iter().enumerate() {
        p[i] = comp_coords[k];
    }
    p
}

/// Coordinates of `p` on the complement of `face`.
pub fn restrict(face: &Face, p: &[i64]) -> Point {
    face.complement_axes().iter().map(|&i| p[i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_round_trips() {
        let b = LatticeBox::new(vec![-1, 0, 2], vec![1, 2, 3]).unwrap();
        assert_eq!(b.len(), 3 * 3 * 2);
        for (i, p) in b.points().enumerate() {
            assert_eq!(b.index(&p), Some(i));
        }
        let idx = b.index(&[0, 2, 2]).unwrap();
        assert_eq!(b.step_index(idx, 1), None);
        assert_eq!(b.step_index(idx, 2), b.index(&[0, 2, 3]));
        assert_eq!(b.back_index(idx, 0), b.index(&[-1, 2, 2]));
    }

    #[test]
    fn projection_and_negation() {
        let b = LatticeBox::new(vec![-1, 0], vec![1, 2]).unwrap();
        assert_eq!(b.project(&[-5, 7]), vec![-1, 2]);
        assert_eq!(
            b.negated(),
            LatticeBox::new(vec![-1, -2], vec![1, 0]).unwrap()
        );
        assert_eq!(LatticeBox::parse("-1,0:1,2").unwrap(), b);
    }

    #[test]
    fn zero_dimensional_box_has_one_point() {
        let b = LatticeBox::point_box();
        assert_eq!(b.len(), 1);
        assert_eq!(b.point(0), Vec::<i64>::new());
        assert_eq!(b.index(&[]), Some(0));
    }
}
