use crate::error::{Error, Result};
use crate::zn::{Face, FdModule, LatticeBox, Point};

/// A face-translate: `corner + Z·face ± N^n`, sign fixed by the owner.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Piece {
    pub corner: Point,
    pub face: Face,
}

impl Piece {
    /// Normalizes corner coordinates on face axes to 0.
    pub fn new(corner: Point, face: Face) -> Piece {
        let mut corner = corner;
        for i in face.axes() {
            corner[i] = 0;
        }
        Piece { corner, face }
    }

    /// `x` lies in `corner + Zρ + N^n`.
    pub fn up_contains(&self, x: &[i64]) -> bool {
        self.face
            .complement_axes()
            .iter()
            .all(|&i| x[i] >= self.corner[i])
    }

    /// `x` lies in `corner + Zτ − N^n`.
    pub fn down_contains(&self, x: &[i64]) -> bool {
        self.face
            .complement_axes()
            .iter()
            .all(|&i| x[i] <= self.corner[i])
    }

    /// `other + Zρ' + N^n ⊆ self + Zρ + N^n`.
    pub fn up_contains_piece(&self, other: &Piece) -> bool {
        other.face.is_subset(&self.face) && self.up_contains(&other.corner)
    }

    /// `other + Zτ' − N^n ⊆ self + Zτ − N^n`.
    pub fn down_contains_piece(&self, other: &Piece) -> bool {
        other.face.is_subset(&self.face) && self.down_contains(&other.corner)
    }
}

/// Drops pieces contained in others (keeping the first of equal pieces)
/// and sorts the rest.
fn canonical_pieces(
    mut pieces: Vec<Piece>,
    contains: impl Fn(&Piece, &Piece) -> bool,
) -> Vec<Piece> {
    pieces.sort();
    pieces.dedup();
    let keep: Vec<bool> = (0..pieces.len())
        .map(|i| !(0..pieces.len()).any(|j| j != i && contains(&pieces[j], &pieces[i])))
        .collect();
    pieces
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect()
}

fn check_dims(n: usize, pieces: &[Piece]) -> Result<()> {
    for p in pieces {
        if p.corner.len() != n || p.face.n() != n {
            return Err(Error::DimensionMismatch(format!(
                "piece {:?} in Z^{n}",
                p.corner
            )));
        }
    }
    Ok(())
}

/// Corners expanded by one on every side; `[-1, 1]^n` when there are no pieces.
fn determining_box_of(n: usize, pieces: &[Piece]) -> LatticeBox {
    let mut lo = vec![0i64; n];
    let mut hi = vec![0i64; n];
    for (k, p) in pieces.iter().enumerate() {
        for i in 0..n {
            if k == 0 {
                lo[i] = p.corner[i];
                hi[i] = p.corner[i];
            } else {
                lo[i] = lo[i].min(p.corner[i]);
                hi[i] = hi[i].max(p.corner[i]);
            }
        }
    }
    LatticeBox::new(lo, hi).expect("lo ≤ hi").expanded(1, 1)
}

/// A finite union of pieces `b + Zρ + N^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UpsetZn {
    n: usize,
    pieces: Vec<Piece>,
}

impl UpsetZn {
    pub fn new(n: usize, pieces: Vec<Piece>) -> Result<UpsetZn> {
        check_dims(n, &pieces)?;
        let pieces = pieces
            .into_iter()
            .map(|p| Piece::new(p.corner, p.face))
            .collect();
        Ok(UpsetZn {
            n,
            pieces: canonical_pieces(pieces, Piece::up_contains_piece),
        })
    }

    pub fn empty(n: usize) -> UpsetZn {
        UpsetZn { n, pieces: vec![] }
    }

    pub fn single(corner: Point, face: Face) -> UpsetZn {
        let n = corner.len();
        UpsetZn {
            n,
            pieces: vec![Piece::new(corner, face)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn contains(&self, x: &[i64]) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "point {x:?} against an upset in Z^{}",
                self.n
            )));
        }
        Ok(self.pieces.iter().any(|p| p.up_contains(x)))
    }

    pub fn determining_box(&self) -> LatticeBox {
        determining_box_of(self.n, &self.pieces)
    }

    /// `bx` determines membership: off-face corner coordinates lie in `(lo, hi]`.
    pub fn is_determined_by(&self, bx: &LatticeBox) -> bool {
        bx.n() == self.n
            && self.pieces.iter().all(|p| {
                p.face
                    .complement_axes()
                    .iter()
                    .all(|&i| bx.lo()[i] < p.corner[i] && p.corner[i] <= bx.hi()[i])
            })
    }

    pub fn indicator(&self, bx: &LatticeBox) -> FdModule {
        FdModule::indicator(bx.clone(), |x| self.pieces.iter().any(|p| p.up_contains(x)))
    }
}

/// A finite union of pieces `a + Zτ − N^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DownsetZn {
    n: usize,
    pieces: Vec<Piece>,
}

impl DownsetZn {
    pub fn new(n: usize, pieces: Vec<Piece>) -> Result<DownsetZn> {
        check_dims(n, &pieces)?;
        let pieces = pieces
            .into_iter()
            .map(|p| Piece::new(p.corner, p.face))
            .collect();
        Ok(DownsetZn {
            n,
            pieces: canonical_pieces(pieces, Piece::down_contains_piece),
        })
    }

    pub fn empty(n: usize) -> DownsetZn {
        DownsetZn { n, pieces: vec![] }
    }

    pub fn single(corner: Point, face: Face) -> DownsetZn {
        let n = corner.len();
        DownsetZn {
            n,
            pieces: vec![Piece::new(corner, face)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn contains(&self, x: &[i64]) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "point {x:?} against a downset in Z^{}",
                self.n
            )));
        }
        Ok(self.pieces.iter().any(|p| p.down_contains(x)))
    }

    pub fn determining_box(&self) -> LatticeBox {
        determining_box_of(self.n, &self.pieces)
    }

    /// `bx` determines membership: off-face corner coordinates lie in `[lo, hi)`.
    pub fn is_determined_by(&self, bx: &LatticeBox) -> bool {
        bx.n() == self.n
            && self.pieces.iter().all(|p| {
                p.face
                    .complement_axes()
                    .iter()
                    .all(|&i| bx.lo()[i] <= p.corner[i] && p.corner[i] < bx.hi()[i])
            })
    }

    pub fn indicator(&self, bx: &LatticeBox) -> FdModule {
        FdModule::indicator(bx.clone(), |x| {
            self.pieces.iter().any(|p| p.down_contains(x))
        })
    }

    /// Union of two downsets.
    pub fn union(&self, other: &DownsetZn) -> Result<DownsetZn> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(
                "union of downsets in different dimensions".into(),
            ));
        }
        DownsetZn::new(
            self.n,
            self.pieces.iter().chain(&other.pieces).cloned().collect(),
        )
    }
}

pub fn upset_contains(u: &UpsetZn, x: &[i64]) -> Result<bool> {
    u.contains(x)
}

pub fn downset_contains(d: &DownsetZn, x: &[i64]) -> Result<bool> {
    d.contains(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn face(n: usize, axes: &[usize]) -> Face {
        Face::from_one_based(n, axes).unwrap()
    }

    #[test]
    fn upset_membership_cases() {
        let u = UpsetZn::single(vec![0, 0], Face::empty(2));
        assert!(u.contains(&[1, 1]).unwrap());
        assert!(!u.contains(&[-1, 0]).unwrap());
        let strip = UpsetZn::single(vec![0, 0], face(2, &[1]));
        let bx = LatticeBox::new(vec![-6, -6], vec![2, 2]).unwrap();
        for p in bx.points() {
            assert_eq!(strip.contains(&p).unwrap(), p[1] >= 0);
        }
        assert!(strip.contains(&[-5, 0]).unwrap());
        assert!(u.contains(&[1]).is_err());
    }

    #[test]
    fn downset_membership_cases() {
        let d = DownsetZn::single(vec![0, 0], Face::empty(2));
        assert!(d.contains(&[-3, -3]).unwrap());
        assert!(!d.contains(&[1, 0]).unwrap());
        let strip = DownsetZn::single(vec![0, 0], face(2, &[2]));
        let bx = LatticeBox::new(vec![-4, -4], vec![8, 8]).unwrap();
        for p in bx.points() {
            assert_eq!(strip.contains(&p).unwrap(), p[0] <= 0);
        }
        assert!(strip.contains(&[0, 7]).unwrap());
    }

    #[test]
    fn canonical_form_drops_contained_pieces_and_normalizes() {
        let d = DownsetZn::new(
            2,
            vec![
                Piece {
                    corner: vec![0, 5],
                    face: face(2, &[2]),
                },
                Piece {
                    corner: vec![-1, 3],
                    face: Face::empty(2),
                },
            ],
        )
        .unwrap();
        assert_eq!(
            d.pieces(),
            &[Piece {
                corner: vec![0, 0],
                face: face(2, &[2])
            }]
        );
    }

    fn arb_piece(n: usize) -> impl Strategy<Value = Piece> {
        (proptest::collection::vec(-2i64..=2, n), 0u32..(1 << n))
            .prop_map(move |(c, mask)| Piece::new(c, Face::from_mask(n, mask)))
    }

    proptest! {
        #[test]
        fn piece_containment_matches_membership(a in arb_piece(2), b in arb_piece(2)) {
            let bx = LatticeBox::new(vec![-5, -5], vec![5, 5]).unwrap();
            let up_brute = bx.points().all(|x| !b.up_contains(&x) || a.up_contains(&x));
            prop_assert_eq!(a.up_contains_piece(&b), up_brute);
            let down_brute = bx.points().all(|x| !b.down_contains(&x) || a.down_contains(&x));
            prop_assert_eq!(a.down_contains_piece(&b), down_brute);
        }

        #[test]
        fn canonicalization_preserves_membership(ps in proptest::collection::vec(arb_piece(2), 0..5)) {
            let d = DownsetZn::new(2, ps.clone()).unwrap();
            let u = UpsetZn::new(2, ps.clone()).unwrap();
            let bx = LatticeBox::new(vec![-4, -4], vec![4, 4]).unwrap();
            for x in bx.points() {
                prop_assert_eq!(d.contains(&x).unwrap(), ps.iter().any(|p| p.down_contains(&x)));
                prop_assert_eq!(u.contains(&x).unwrap(), ps.iter().any(|p| p.up_contains(&x)));
            }
        }
    }
}
