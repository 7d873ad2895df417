use crate::error::{Error, Result};
use crate::linalg::RatMatrix;

use super::{leq, Face, LatticeBox, Point};

/// A finitely determined Z^n-module stored on a box.
///
/// The value at any `x` in Z^n is the value at the convex projection of `x`
/// into the box, and steps leaving the box are identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FdModule {
    bx: LatticeBox,
    dims: Vec<usize>,
    /// `steps[idx][axis]` is the map to `p + e_axis`, present iff that point is in the box.
    steps: Vec<Vec<Option<RatMatrix>>>,
}

impl FdModule {
    /// Checks matrix shapes; commutativity is checked by [`FdModule::validate`].
    pub fn new(
        bx: LatticeBox,
        dims: Vec<usize>,
        steps: Vec<Vec<Option<RatMatrix>>>,
    ) -> Result<FdModule> {
        if dims.len() != bx.len() || steps.len() != bx.len() {
            return Err(Error::ShapeMismatch(format!(
                "box has {} points but {} dims and {} step lists",
                bx.len(),
                dims.len(),
                steps.len()
            )));
        }
        for idx in 0..bx.len() {
            if steps[idx].len() != bx.n() {
                return Err(Error::ShapeMismatch(format!(
                    "point {:?} has {} step slots",
                    bx.point(idx),
                    steps[idx].len()
                )));
            }
            for axis in 0..bx.n() {
                match (bx.step_index(idx, axis), &steps[idx][axis]) {
                    (Some(j), Some(s)) => {
                        if s.rows() != dims[j] || s.cols() != dims[idx] {
                            return Err(Error::ShapeMismatch(format!(
                                "step at {:?} along axis {} is {}x{}, expected {}x{}",
                                bx.point(idx),
                                axis + 1,
                                s.rows(),
                                s.cols(),
                                dims[j],
                                dims[idx]
                            )));
                        }
                    }
                    (None, None) => {}
                    (Some(_), None) => {
                        return Err(Error::ShapeMismatch(format!(
                            "missing step at {:?} along axis {}",
                            bx.point(idx),
                            axis + 1
                        )))
                    }
                    (None, Some(_)) => {
                        return Err(Error::ShapeMismatch(format!(
                            "step at {:?} along axis {} leaves the box",
                            bx.point(idx),
                            axis + 1
                        )))
                    }
                }
            }
        }
        Ok(FdModule { bx, dims, steps })
    }

    /// Builds a module from a dimension function and a step function; the
    /// step function receives the source point and the axis.
    pub fn from_fn(
        bx: LatticeBox,
        mut dim: impl FnMut(&[i64]) -> usize,
        mut step: impl FnMut(&[i64], usize) -> RatMatrix,
    ) -> Result<FdModule> {
        let dims: Vec<usize> = bx.points().map(|p| dim(&p)).collect();
        let mut steps = Vec::with_capacity(bx.len());
        for idx in 0..bx.len() {
            let p = bx.point(idx);
            let row = (0..bx.n())
                .map(|axis| bx.step_index(idx, axis).map(|_| step(&p, axis)))
                .collect();
            steps.push(row);
        }
        FdModule::new(bx, dims, steps)
    }

    pub fn zero(bx: LatticeBox) -> FdModule {
        FdModule::from_fn(bx, |_| 0, |_, _| RatMatrix::zeros(0, 0)).expect("zero shapes match")
    }

    /// Indicator module k[S] of a set given by its membership test. The set
    /// must be convex for the result to be a module; `validate` checks it.
    pub fn indicator(bx: LatticeBox, member: impl Fn(&[i64]) -> bool) -> FdModule {
        let dims: Vec<usize> = bx.points().map(|p| usize::from(member(&p))).collect();
        let mut steps = Vec::with_capacity(bx.len());
        for idx in 0..bx.len() {
            let row = (0..bx.n())
                .map(|axis| {
                    bx.step_index(idx, axis).map(|j| {
                        if dims[idx] == 1 && dims[j] == 1 {
                            RatMatrix::identity(1)
                        } else {
                            RatMatrix::zeros(dims[j], dims[idx])
                        }
                    })
                })
                .collect();
            steps.push(row);
        }
        FdModule { bx, dims, steps }
    }

    pub fn n(&self) -> usize {
        self.bx.n()
    }

    pub fn lattice_box(&self) -> &LatticeBox {
        &self.bx
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim_at_index(&self, idx: usize) -> usize {
        self.dims[idx]
    }

    /// Dimension at any point of Z^n.
    pub fn hilbert(&self, x: &[i64]) -> usize {
        self.dims[self.bx.project_index(x)]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// Step out of box index `idx` along `axis`; identity when leaving the box.
    pub fn step(&self, idx: usize, axis: usize) -> RatMatrix {
        match &self.steps[idx][axis] {
            Some(s) => s.clone(),
            None => RatMatrix::identity(self.dims[idx]),
        }
    }

    pub fn step_ref(&self, idx: usize, axis: usize) -> Option<&RatMatrix> {
        self.steps[idx][axis].as_ref()
    }

    /// Checks that every elementary square commutes.
    pub fn validate(&self) -> Result<()> {
        let bx = &self.bx;
        for idx in 0..bx.len() {
            for i in 0..bx.n() {
                let Some(pi) = bx.step_index(idx, i) else {
                    continue;
                };
                for j in (i + 1)..bx.n() {
                    let Some(pj) = bx.step_index(idx, j) else {
                        continue;
                    };
                    let via_i = self.step(pi, j).mul(&self.step(idx, i));
                    let via_j = self.step(pj, i).mul(&self.step(idx, j));
                    if via_i != via_j {
                        return Err(Error::NonCommuting {
                            point: bx.point(idx),
                            i: i + 1,
                            j: j + 1,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Structure map between box indices `a ≤ b`, along the path that
    /// exhausts axis 0 first.
    pub fn map_between_indices(&self, a: usize, b: usize) -> RatMatrix {
        let pa = self.bx.point(a);
        let pb = self.bx.point(b);
        let mut cur = a;
        let mut acc = RatMatrix::identity(self.dims[a]);
        for axis in 0..self.n() {
            for _ in pa[axis]..pb[axis] {
                let next = self
                    .bx
                    .step_index(cur, axis)
                    .expect("path stays in the box");
                acc = self.step(cur, axis).mul(&acc);
                cur = next;
            }
        }
        debug_assert_eq!(cur, b);
        acc
    }

    /// The structure map M_a → M_b for `a ≤ b` anywhere in Z^n.
    pub fn structure_map(&self, a: &[i64], b: &[i64]) -> Result<RatMatrix> {
        if a.len() != self.n() || b.len() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "points {a:?}, {b:?} in a module over Z^{}",
                self.n()
            )));
        }
        if !leq(a, b) {
            return Err(Error::NotComparable(a.to_vec(), b.to_vec()));
        }
        let ia = self.bx.project_index(a);
        let ib = self.bx.project_index(b);
        Ok(self.map_between_indices(ia, ib))
    }

    pub fn rank_function(&self, a: &[i64], b: &[i64]) -> Result<usize> {
        Ok(self.structure_map(a, b)?.rank())
    }

    /// Structure maps from box index `a` to every box index, `None` where
    /// not comparable. Computed by dynamic programming in index order.
    pub fn maps_from(&self, a: usize) -> Vec<Option<RatMatrix>> {
        let bx = &self.bx;
        let pa = bx.point(a);
        let mut out: Vec<Option<RatMatrix>> = vec![None; bx.len()];
        out[a] = Some(RatMatrix::identity(self.dims[a]));
        for idx in (a + 1)..bx.len() {
            let p = bx.point(idx);
            if !leq(&pa, &p) {
                continue;
            }
            let axis = (0..self.n())
                .find(|&i| p[i] > pa[i])
                .expect("p differs from pa");
            let prev = bx
                .back_index(idx, axis)
                .expect("p - e_axis ≥ pa lies in the box");
            let m = self
                .step(prev, axis)
                .mul(out[prev].as_ref().expect("processed earlier"));
            out[idx] = Some(m);
        }
        out
    }

    /// Re-expresses the module on another box by convex projection.
    pub fn rebox(&self, target: &LatticeBox) -> Result<FdModule> {
        if target.n() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "rebox from Z^{} to Z^{}",
                self.n(),
                target.n()
            )));
        }
        let dims = target.points().map(|p| self.hilbert(&p)).collect();
        let mut steps = Vec::with_capacity(target.len());
        for idx in 0..target.len() {
            let p = target.point(idx);
            let row = (0..target.n())
                .map(|axis| {
                    target.step_index(idx, axis).map(|_| {
                        let mut q = p.clone();
                        q[axis] += 1;
                        self.structure_map(&p, &q).expect("p ≤ p + e_axis")
                    })
                })
                .collect();
            steps.push(row);
        }
        FdModule::new(target.clone(), dims, steps)
    }

    /// Direct sum of modules on the same box.
    pub fn direct_sum(&self, other: &FdModule) -> Result<FdModule> {
        if self.bx != other.bx {
            return Err(Error::DimensionMismatch(
                "direct sum needs a common box".into(),
            ));
        }
        let dims = self
            .dims
            .iter()
            .zip(&other.dims)
            .map(|(a, b)| a + b)
            .collect();
        let steps = (0..self.bx.len())
            .map(|idx| {
                (0..self.n())
                    .map(|axis| {
                        self.steps[idx][axis].as_ref().map(|s| {
                            s.direct_sum(other.steps[idx][axis].as_ref().expect("same box"))
                        })
                    })
                    .collect()
            })
            .collect();
        FdModule::new(self.bx.clone(), dims, steps)
    }

    /// Submodule spanned pointwise by the columns of `bases` (independent
    /// columns in the ambient coordinates). Fails if the family is not
    /// closed under the steps.
    pub fn submodule(&self, bases: &[RatMatrix]) -> Result<FdModule> {
        let bx = &self.bx;
        let dims: Vec<usize> = bases.iter().map(|b| b.cols()).collect();
        let mut steps = Vec::with_capacity(bx.len());
        for idx in 0..bx.len() {
            let mut row = Vec::with_capacity(self.n());
            for axis in 0..self.n() {
                row.push(match bx.step_index(idx, axis) {
                    Some(j) => {
                        let pushed = self.step(idx, axis).mul(&bases[idx]);
                        Some(bases[j].solve(&pushed)?.ok_or_else(|| {
                            Error::InvariantViolated(format!(
                                "subspace family not closed under the step at {:?} along axis {}",
                                bx.point(idx),
                                axis + 1
                            ))
                        })?)
                    }
                    None => None,
                });
            }
            steps.push(row);
        }
        FdModule::new(bx.clone(), dims, steps)
    }

    /// Quotient by the submodule spanned pointwise by `bases`; also returns
    /// the pointwise projections onto quotient coordinates.
    pub fn quotient(&self, bases: &[RatMatrix]) -> Result<(FdModule, Vec<RatMatrix>)> {
        let bx = &self.bx;
        let maps: Vec<(RatMatrix, RatMatrix)> = bases.iter().map(|b| b.quotient_maps()).collect();
        let dims: Vec<usize> = maps.iter().map(|(p, _)| p.rows()).collect();
        let mut steps = Vec::with_capacity(bx.len());
        for idx in 0..bx.len() {
            let row = (0..self.n())
                .map(|axis| {
                    bx.step_index(idx, axis)
                        .map(|j| maps[j].0.mul(&self.step(idx, axis)).mul(&maps[idx].1))
                })
                .collect();
            steps.push(row);
        }
        let q = FdModule::new(bx.clone(), dims, steps)?;
        Ok((q, maps.into_iter().map(|(p, _)| p).collect()))
    }

    /// `big / small` for nested pointwise subspace families `small ⊆ big`.
    pub fn subquotient(
        &self,
        big: &[RatMatrix],
        small: &[RatMatrix],
    ) -> Result<(FdModule, Vec<RatMatrix>)> {
        let sub = self.submodule(big)?;
        let inner: Vec<RatMatrix> = big
            .iter()
            .zip(small)
            .map(|(b, s)| b.solve_exact(s))
            .collect::<Result<_>>()?;
        sub.quotient(&inner)
    }

    /// Matlis dual: the negated box, dims read at `-x`, steps transposed.
    pub fn matlis_dual(&self) -> FdModule {
        let dual_box = self.bx.negated();
        let n = self.n();
        let dims: Vec<usize> = dual_box
            .points()
            .map(|q| {
                let neg: Point = q.iter().map(|v| -v).collect();
                self.hilbert(&neg)
            })
            .collect();
        let mut steps = Vec::with_capacity(dual_box.len());
        for idx in 0..dual_box.len() {
            let q = dual_box.point(idx);
            let row = (0..n)
                .map(|axis| {
                    dual_box.step_index(idx, axis).map(|_| {
                        let mut src: Point = q.iter().map(|v| -v).collect();
                        src[axis] -= 1;
                        let s = self.bx.index(&src).expect("negated step lies in the box");
                        self.step(s, axis).transpose()
                    })
                })
                .collect();
            steps.push(row);
        }
        FdModule::new(dual_box, dims, steps).expect("transposed shapes match")
    }

    fn raise(&self, p: &[i64], face: &Face) -> Point {
        let mut q = p.to_vec();
        for i in face.axes() {
            q[i] = self.bx.hi()[i];
        }
        q
    }

    /// Localization along `tau`: the value at `p` is read at `p` with its
    /// τ-coordinates raised to the box top.
    pub fn localize(&self, tau: &Face) -> FdModule {
        let bx = self.bx.clone();
        let dims: Vec<usize> = bx
            .points()
            .map(|p| self.hilbert(&self.raise(&p, tau)))
            .collect();
        let mut steps = Vec::with_capacity(bx.len());
        for idx in 0..bx.len() {
            let p = bx.point(idx);
            let r = self
                .bx
                .index(&self.raise(&p, tau))
                .expect("raised point in box");
            let row = (0..self.n())
                .map(|axis| {
                    bx.step_index(idx, axis).map(|_| {
                        if tau.contains(axis) {
                            RatMatrix::identity(self.dims[r])
                        } else {
                            self.step(r, axis)
                        }
                    })
                })
                .collect();
            steps.push(row);
        }
        FdModule::new(bx, dims, steps).expect("shapes inherited")
    }

    /// Point of the box lying over degree `q` of the quotient-restriction along `tau`.
    pub fn slice_point(&self, tau: &Face, q: &[i64]) -> Point {
        super::embed(tau, q, self.bx.hi())
    }

    /// Quotient-restriction M/τ over Z^{n-|τ|}: the slice where the
    /// τ-coordinates equal the box top, indexed by the complementary axes.
    pub fn quotient_restriction(&self, tau: &Face) -> FdModule {
        let slice = self.bx.slice_box(tau);
        let comp = tau.complement_axes();
        let dims: Vec<usize> = slice
            .points()
            .map(|q| self.hilbert(&self.slice_point(tau, &q)))
            .collect();
        let mut steps = Vec::with_capacity(slice.len());
        for idx in 0..slice.len() {
            let q = slice.point(idx);
            let p = self
                .bx
                .index(&self.slice_point(tau, &q))
                .expect("slice inside box");
            let row = (0..comp.len())
                .map(|k| slice.step_index(idx, k).map(|_| self.step(p, comp[k])))
                .collect();
            steps.push(row);
        }
        FdModule::new(slice, dims, steps).expect("shapes inherited")
    }

    /// Γ_τ M: at each point, the elements killed by localizing along every
    /// single axis outside `tau`.
    pub fn global_support(&self, tau: &Face) -> Result<FdModule> {
        let bases: Vec<RatMatrix> = (0..self.bx.len())
            .map(|idx| {
                let p = self.bx.point(idx);
                let mut stacked = RatMatrix::zeros(0, self.dims[idx]);
                for i in tau.complement_axes() {
                    let far = self.raise(&p, &Face::from_mask(self.n(), 1 << i));
                    let m = self.structure_map(&p, &far).expect("raising is monotone");
                    stacked = stacked.vstack(&m).expect("same source");
                }
                stacked.kernel_basis()
            })
            .collect();
        self.submodule(&bases)
    }

    /// True when both modules have the same Hilbert function and the same
    /// rank for every comparable pair, compared on the hull of their boxes.
    pub fn same_rank_invariant(&self, other: &FdModule) -> Result<bool> {
        let hull = self.bx.hull(&other.bx)?;
        let a = self.rebox(&hull)?;
        let b = other.rebox(&hull)?;
        if a.dims != b.dims {
            return Ok(false);
        }
        for idx in 0..hull.len() {
            let ma = a.maps_from(idx);
            let mb = b.maps_from(idx);
            for (x, y) in ma.iter().zip(&mb) {
                if let (Some(x), Some(y)) = (x, y) {
                    if x.rank() != y.rank() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

pub fn structure_map(m: &FdModule, a: &[i64], b: &[i64]) -> Result<RatMatrix> {
    m.structure_map(a, b)
}

pub fn hilbert(m: &FdModule, x: &[i64]) -> usize {
    m.hilbert(x)
}

pub fn rank_function(m: &FdModule, a: &[i64], b: &[i64]) -> Result<usize> {
    m.rank_function(a, b)
}

pub fn matlis_dual(m: &FdModule) -> FdModule {
    m.matlis_dual()
}

pub fn localize(m: &FdModule, tau: &Face) -> FdModule {
    m.localize(tau)
}

pub fn quotient_restriction(m: &FdModule, tau: &Face) -> FdModule {
    m.quotient_restriction(tau)
}

pub fn global_support(m: &FdModule, tau: &Face) -> Result<FdModule> {
    m.global_support(tau)
}

pub fn validate(m: &FdModule) -> Result<()> {
    m.validate()
}
