//! Dense exact linear algebra over the rationals.
//!
//! Elimination always pivots on the first nonzero entry in column order, so
//! every basis returned here is a deterministic function of the input.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational scalar.
pub type Rat = BigRational;

/// Rational from a machine integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`; the denominator must be nonzero.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rat::new(p, q))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rat::from_integer),
    }
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rat(r: &Rat) -> String {
    r.to_string()
}

/// Row-major dense matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

/// Reduced row echelon form together with its pivot columns.
struct Rref {
    m: RatMatrix,
    pivots: Vec<usize>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rat>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {}x{} matrix",
                entries.len(),
                rows,
                cols
            )));
        }
        Ok(RatMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            entries: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Rat::one();
        }
        m
    }

    /// Builds a matrix from integer rows; all rows must share a length.
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged integer rows");
            entries.extend(row.iter().map(|&x| rat(x)));
        }
        RatMatrix {
            rows: r,
            cols: c,
            entries,
        }
    }

    /// Builds a matrix from rows of rationals with an explicit column count
    /// (needed when there are no rows).
    pub fn from_rows(rows: Vec<Vec<Rat>>, cols: usize) -> Result<Self> {
        let r = rows.len();
        let mut entries = Vec::with_capacity(r * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "row of length {} in a matrix with {} columns",
                    row.len(),
                    cols
                )));
            }
            entries.extend(row);
        }
        Ok(RatMatrix {
            rows: r,
            cols,
            entries,
        })
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rat>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column of wrong length");
            for (i, x) in col.iter().enumerate() {
                m.entries[i * m.cols + j] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    /// Exact product `self · b`.
    pub fn compose(&self, b: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != b.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, b.rows, b.cols
            )));
        }
        let mut out = Self::zeros(self.rows, b.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..b.cols {
                    let bk = b.get(k, j);
                    if !bk.is_zero() {
                        let cell = &mut out.entries[i * b.cols + j];
                        *cell += a * bk;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Product for callers that have already matched shapes.
    pub fn mul(&self, b: &RatMatrix) -> RatMatrix {
        self.compose(b).expect("matrix shapes checked by caller")
    }

    pub fn add(&self, b: &RatMatrix) -> Result<RatMatrix> {
        if self.rows != b.rows || self.cols != b.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, b.rows, b.cols
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| x + y)
            .collect();
        Ok(RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn sub(&self, b: &RatMatrix) -> Result<RatMatrix> {
        if self.rows != b.rows || self.cols != b.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot subtract {}x{} and {}x{}",
                self.rows, self.cols, b.rows, b.cols
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| x - y)
            .collect();
        Ok(RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn scale(&self, s: &Rat) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * s).collect(),
        }
    }

    /// Side-by-side concatenation `[self | b]`.
    pub fn hstack(&self, b: &RatMatrix) -> Result<RatMatrix> {
        if self.rows != b.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack of {} and {} rows",
                self.rows, b.rows
            )));
        }
        let cols = self.cols + b.cols;
        let mut entries = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            entries.extend_from_slice(self.row(i));
            entries.extend_from_slice(b.row(i));
        }
        Ok(RatMatrix {
            rows: self.rows,
            cols,
            entries,
        })
    }

    /// Vertical concatenation of `self` over `b`.
    pub fn vstack(&self, b: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != b.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack of {} and {} columns",
                self.cols, b.cols
            )));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&b.entries);
        Ok(RatMatrix {
            rows: self.rows + b.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Vertical concatenation of blocks that all have `cols` columns.
    pub fn vstack_all(blocks: &[RatMatrix], cols: usize) -> Result<RatMatrix> {
        let mut out = RatMatrix::zeros(0, cols);
        for b in blocks {
            out = out.vstack(b)?;
        }
        Ok(out)
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, b: &RatMatrix) -> RatMatrix {
        let mut out = Self::zeros(self.rows + b.rows, self.cols + b.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                out.set(self.rows + i, self.cols + j, b.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_columns(&self, cols: &[usize]) -> RatMatrix {
        let mut out = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> RatMatrix {
        let mut entries = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            entries.extend_from_slice(self.row(i));
        }
        RatMatrix {
            rows: rows.len(),
            cols: self.cols,
            entries,
        }
    }

    fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.entries.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = &m.entries[r * m.cols + j] * &inv;
                m.entries[r * m.cols + j] = v;
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let delta = &f * m.get(r, j);
                    if !delta.is_zero() {
                        m.entries[i * m.cols + j] -= delta;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Columns form a basis of the null space; one column per free variable.
    pub fn kernel_basis(&self) -> RatMatrix {
        let Rref { m, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Self::zeros(self.cols, free.len());
        for (jj, &f) in free.iter().enumerate() {
            k.set(f, jj, Rat::one());
            for (r, &p) in pivots.iter().enumerate() {
                let v = m.get(r, f);
                if !v.is_zero() {
                    k.set(p, jj, -v.clone());
                }
            }
        }
        k
    }

    /// Reduced column echelon basis of the column space; independent of the
    /// spanning set chosen.
    pub fn canonical_basis(&self) -> RatMatrix {
        let Rref { m, pivots } = self.transpose().rref();
        m.select_rows(&(0..pivots.len()).collect::<Vec<_>>())
            .transpose()
    }

    /// The columns of `self` at the pivot positions.
    pub fn image_basis(&self) -> RatMatrix {
        self.select_columns(&self.rref().pivots)
    }

    /// Some `x` with `self · x = target`, or `None` when the columns of
    /// `target` leave the column space. Free variables are set to zero.
    pub fn solve(&self, target: &RatMatrix) -> Result<Option<RatMatrix>> {
        if self.rows != target.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve with {} rows against {} rows",
                self.rows, target.rows
            )));
        }
        let aug = self.hstack(target)?;
        let Rref { m, pivots } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Self::zeros(self.cols, target.cols);
        for (r, &p) in pivots.iter().enumerate() {
            for j in 0..target.cols {
                x.set(p, j, m.get(r, self.cols + j).clone());
            }
        }
        Ok(Some(x))
    }

    /// Like [`RatMatrix::solve`] but treats "no solution" as an error.
    pub fn solve_exact(&self, target: &RatMatrix) -> Result<RatMatrix> {
        self.solve(target)?
            .ok_or_else(|| Error::InvariantViolated("target lies outside the column space".into()))
    }

    /// Standard basis vectors that extend the (independent) columns of
    /// `self` to a basis of the ambient space, chosen greedily in order.
    pub fn complement_basis(&self) -> RatMatrix {
        let n = self.rows;
        let mut current = self.clone();
        let mut chosen = Vec::new();
        let mut rank = current.rank();
        for i in 0..n {
            if rank == n {
                break;
            }
            let mut e = Self::zeros(n, 1);
            e.set(i, 0, Rat::one());
            let trial = current.hstack(&e).expect("same row count");
            let r = trial.rank();
            if r > rank {
                current = trial;
                rank = r;
                chosen.push(i);
            }
        }
        let mut c = Self::zeros(n, chosen.len());
        for (jj, &i) in chosen.iter().enumerate() {
            c.set(i, jj, Rat::one());
        }
        c
    }

    /// For independent columns `self` (a subspace basis), the linear
    /// functional matrix that reads off coordinates along `self` and
    /// vanishes on [`RatMatrix::complement_basis`].
    pub fn retraction(&self) -> RatMatrix {
        let comp = self.complement_basis();
        let full = self.hstack(&comp).expect("same row count");
        let inv = full
            .solve(&Self::identity(self.rows))
            .expect("square")
            .expect("basis extension is invertible");
        inv.select_rows(&(0..self.cols).collect::<Vec<_>>())
    }

    /// Coordinates of a vector space quotient `k^rows / span(self)`:
    /// returns `(projection, lift)` where `projection` kills `self` and
    /// `projection · lift = I`.
    pub fn quotient_maps(&self) -> (RatMatrix, RatMatrix) {
        let basis = self.image_basis();
        let comp = basis.complement_basis();
        let full = basis.hstack(&comp).expect("same row count");
        let inv = full
            .solve(&Self::identity(self.rows))
            .expect("square")
            .expect("basis extension is invertible");
        let rows: Vec<usize> = (basis.cols..self.rows).collect();
        (inv.select_rows(&rows), comp)
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    /// Largest absolute numerator or denominator, for diagnostics.
    pub fn height(&self) -> BigInt {
        self.entries
            .iter()
            .map(|x| x.numer().abs().max(x.denom().abs()))
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(format_rat).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Free-function forms of the core operations.
pub fn rank(m: &RatMatrix) -> usize {
    m.rank()
}

pub fn kernel_basis(m: &RatMatrix) -> RatMatrix {
    m.kernel_basis()
}

pub fn image_basis(m: &RatMatrix) -> RatMatrix {
    m.image_basis()
}

pub fn compose(a: &RatMatrix, b: &RatMatrix) -> Result<RatMatrix> {
    a.compose(b)
}

pub fn solve(m: &RatMatrix, target: &RatMatrix) -> Result<Option<RatMatrix>> {
    m.solve(target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[Vec<i64>]) -> RatMatrix {
        RatMatrix::from_i64_rows(rows)
    }

    #[test]
    fn rank_small_cases() {
        assert_eq!(RatMatrix::identity(2).rank(), 2);
        assert_eq!(RatMatrix::zeros(2, 2).rank(), 0);
        assert_eq!(m(&[vec![1, 2], vec![2, 4]]).rank(), 1);
    }

    #[test]
    fn kernel_small_cases() {
        assert_eq!(RatMatrix::identity(3).kernel_basis().cols(), 0);
        assert_eq!(RatMatrix::identity(3).kernel_basis().rows(), 3);
        let k = m(&[vec![1, 1]]).kernel_basis();
        assert_eq!(k, m(&[vec![-1], vec![1]]));
        let a = m(&[vec![1, 2], vec![2, 4]]);
        let k = a.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!(a.mul(&k).is_zero());
    }

    #[test]
    fn image_small_cases() {
        assert_eq!(RatMatrix::identity(2).image_basis(), RatMatrix::identity(2));
        assert_eq!(RatMatrix::zeros(2, 3).image_basis().cols(), 0);
        let a = m(&[vec![1, 2], vec![2, 4]]);
        let im = a.image_basis();
        assert_eq!(im.cols(), 1);
        assert!(im.solve(&m(&[vec![1], vec![2]])).unwrap().is_some());
    }

    #[test]
    fn compose_small_cases() {
        let a = m(&[vec![1, 2], vec![3, 4]]);
        assert_eq!(RatMatrix::identity(2).compose(&a).unwrap(), a);
        assert!(RatMatrix::zeros(2, 2).compose(&a).unwrap().is_zero());
        let swap = m(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(
            swap.compose(&m(&[vec![1], vec![2]])).unwrap(),
            m(&[vec![2], vec![1]])
        );
        assert!(matches!(
            RatMatrix::zeros(2, 3).compose(&a),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn solve_small_cases() {
        let v = m(&[vec![3], vec![-1]]);
        assert_eq!(RatMatrix::identity(2).solve(&v).unwrap(), Some(v.clone()));
        assert_eq!(RatMatrix::zeros(2, 2).solve(&v).unwrap(), None);
        let a = m(&[vec![1, 1]]);
        let x = a.solve(&m(&[vec![3]])).unwrap().unwrap();
        assert_eq!(a.mul(&x), m(&[vec![3]]));
        assert!(matches!(a.solve(&v), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn rational_text_round_trip() {
        let r = Rat::new(BigInt::from(-3), BigInt::from(6));
        assert_eq!(format_rat(&r), "-1/2");
        assert_eq!(parse_rat("-1/2"), Some(r));
        assert_eq!(parse_rat("4"), Some(rat(4)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(parse_rat("x"), None);
    }

    #[test]
    fn retraction_and_quotient() {
        let s = m(&[vec![1], vec![1], vec![0]]);
        let r = s.retraction();
        assert_eq!(r.mul(&s), RatMatrix::identity(1));
        let (p, l) = s.quotient_maps();
        assert!(p.mul(&s).is_zero());
        assert_eq!(p.mul(&l), RatMatrix::identity(2));
    }

    fn small_matrix() -> impl Strategy<Value = RatMatrix> {
        (0usize..5, 0usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..=3, r * c).prop_map(move |v| {
                let rows: Vec<Vec<i64>> = v.chunks(c.max(1)).map(|ch| ch.to_vec()).collect();
                if c == 0 {
                    RatMatrix::zeros(r, 0)
                } else {
                    RatMatrix::from_i64_rows(&rows)
                }
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(a in small_matrix()) {
            prop_assert_eq!(a.rank() + a.kernel_basis().cols(), a.cols());
        }

        #[test]
        fn kernel_is_annihilated(a in small_matrix()) {
            prop_assert!(a.mul(&a.kernel_basis()).is_zero());
        }

        #[test]
        fn solve_reproduces_target(a in small_matrix(), seed in proptest::collection::vec(-2i64..=2, 5)) {
            let x0 = RatMatrix::from_columns(a.cols(), &[seed.iter().take(a.cols()).map(|&v| rat(v)).chain(std::iter::repeat(rat(0))).take(a.cols()).collect()]);
            let target = a.mul(&x0);
            let x = a.solve(&target).unwrap();
            prop_assert!(x.is_some());
            prop_assert_eq!(a.mul(&x.unwrap()), target);
        }

        #[test]
        fn image_rank_matches(a in small_matrix()) {
            prop_assert_eq!(a.image_basis().cols(), a.rank());
            prop_assert_eq!(a.transpose().rank(), a.rank());
        }
    }
}
