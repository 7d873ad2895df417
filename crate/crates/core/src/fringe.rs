//! Indicator modules, monomial matrices and fringe presentations.

use std::collections::BTreeMap;

use num_traits::Zero;
use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::linalg::{Rat, RatMatrix};
use crate::poset::{
    Domain, DownsetZn, FinitePoset, Piece, PosetModule, PosetMorphism, Pullback, UpsetZn,
};
use crate::zn::socle::{socle_point, top_point};
use crate::zn::{socle_pieces, top_pieces, Face, FdModule, LatticeBox, ModuleHom, Point};

fn pieces_meet(b: &Piece, a: &Piece) -> bool {
    (0..b.corner.len())
        .all(|i| b.face.contains(i) || a.face.contains(i) || b.corner[i] <= a.corner[i])
}

/// Whether `u ∩ d` is nonempty.
pub fn meets(u: &UpsetZn, d: &DownsetZn) -> Result<bool> {
    if u.n() != d.n() {
        return Err(Error::DimensionMismatch(format!(
            "upset in Z^{} against downset in Z^{}",
            u.n(),
            d.n()
        )));
    }
    Ok(u.pieces()
        .iter()
        .any(|b| d.pieces().iter().any(|a| pieces_meet(b, a))))
}

/// Number of connected components of `u ∩ d`, the dimension of Hom(k[u], k[d]).
/// `u ∩ d` is convex, so components under comparability are components
/// under unit steps.
pub fn hom_dim(u: &UpsetZn, d: &DownsetZn, bx: &LatticeBox) -> Result<usize> {
    if !meets(u, d)? {
        return Ok(0);
    }
    if !u.is_determined_by(bx) || !d.is_determined_by(bx) {
        return Err(Error::BoxNotDetermining(format!(
            "box {:?}..{:?}",
            bx.lo(),
            bx.hi()
        )));
    }
    let member: Vec<bool> = bx
        .points()
        .map(|p| u.contains(&p).unwrap_or(false) && d.contains(&p).unwrap_or(false))
        .collect();
    let mut uf = UnionFind::<usize>::new(bx.len());
    for idx in (0..bx.len()).filter(|&i| member[i]) {
        for axis in 0..bx.n() {
            if let Some(j) = bx.step_index(idx, axis) {
                if member[j] {
                    uf.union(idx, j);
                }
            }
        }
    }
    let mut roots: Vec<usize> = (0..bx.len())
        .filter(|&i| member[i])
        .map(|i| uf.find(i))
        .collect();
    roots.sort_unstable();
    roots.dedup();
    Ok(roots.len())
}

/// A monomial matrix: rows labelled by upsets (sources), columns by
/// downsets (targets), entry `phi[p][q]` scaling k[U_p] → k[D_q].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMatrix {
    n: usize,
    rows: Vec<UpsetZn>,
    cols: Vec<DownsetZn>,
    phi: RatMatrix,
}

impl MonomialMatrix {
    /// Checks shapes; the meeting condition is checked by [`validate_fringe`].
    pub fn new(
        n: usize,
        rows: Vec<UpsetZn>,
        cols: Vec<DownsetZn>,
        phi: RatMatrix,
    ) -> Result<MonomialMatrix> {
        if phi.rows() != rows.len() || phi.cols() != cols.len() {
            return Err(Error::InvalidFringe(format!(
                "{}x{} scalars for {} rows and {} columns",
                phi.rows(),
                phi.cols(),
                rows.len(),
                cols.len()
            )));
        }
        if rows.iter().any(|u| u.n() != n) || cols.iter().any(|d| d.n() != n) {
            return Err(Error::DimensionMismatch(format!(
                "labels of a monomial matrix over Z^{n}"
            )));
        }
        Ok(MonomialMatrix { n, rows, cols, phi })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[UpsetZn] {
        &self.rows
    }

    pub fn cols(&self) -> &[DownsetZn] {
        &self.cols
    }

    pub fn phi(&self) -> &RatMatrix {
        &self.phi
    }

    /// All label corners expanded by one on every side.
    pub fn determining_box(&self) -> LatticeBox {
        let corners: Vec<&Point> = self
            .rows
            .iter()
            .flat_map(|u| u.pieces())
            .chain(self.cols.iter().flat_map(|d| d.pieces()))
            .map(|p| &p.corner)
            .collect();
        if corners.is_empty() {
            return LatticeBox::new(vec![-1; self.n], vec![1; self.n]).expect("lo ≤ hi");
        }
        let lo = (0..self.n)
            .map(|i| corners.iter().map(|c| c[i]).min().expect("nonempty"))
            .collect();
        let hi = (0..self.n)
            .map(|i| corners.iter().map(|c| c[i]).max().expect("nonempty"))
            .collect();
        LatticeBox::new(lo, hi).expect("lo ≤ hi").expanded(1, 1)
    }

    pub fn is_determined_by(&self, bx: &LatticeBox) -> bool {
        self.rows.iter().all(|u| u.is_determined_by(bx))
            && self.cols.iter().all(|d| d.is_determined_by(bx))
    }
}

pub fn validate_fringe(mm: &MonomialMatrix) -> Result<()> {
    for (row, u) in mm.rows.iter().enumerate() {
        for (col, d) in mm.cols.iter().enumerate() {
            if !mm.phi.get(row, col).is_zero() && !meets(u, d)? {
                return Err(Error::IllegalNonzeroEntry { row, col });
            }
        }
    }
    Ok(())
}

/// ⊕ k[S_j] on a box, given memberships `member[j][idx]`; coordinates at a
/// point are the labels containing it, in label order.
pub fn indicator_sum(bx: &LatticeBox, member: &[Vec<bool>]) -> FdModule {
    let present =
        |idx: usize| -> Vec<usize> { (0..member.len()).filter(|&j| member[j][idx]).collect() };
    FdModule::from_fn(
        bx.clone(),
        |p| present(bx.index(p).expect("in box")).len(),
        |p, axis| {
            let a = bx.index(p).expect("in box");
            let b = bx.step_index(a, axis).expect("step inside box");
            coordinate_map(&present(a), &present(b))
        },
    )
    .expect("indicator steps have matching shapes")
}

/// Keeps shared labels, drops labels missing from `to`.
fn coordinate_map(from: &[usize], to: &[usize]) -> RatMatrix {
    let mut m = RatMatrix::zeros(to.len(), from.len());
    for (c, j) in from.iter().enumerate() {
        if let Some(r) = to.iter().position(|k| k == j) {
            m.set(r, c, Rat::from_integer(1.into()));
        }
    }
    m
}

/// The map ⊕k[rows] → ⊕k[cols] at a point, in present-label coordinates.
fn fringe_map_at(phi: &RatMatrix, rows_here: &[usize], cols_here: &[usize]) -> RatMatrix {
    let mut m = RatMatrix::zeros(cols_here.len(), rows_here.len());
    for (c, &p) in rows_here.iter().enumerate() {
        for (r, &q) in cols_here.iter().enumerate() {
            m.set(r, c, phi.get(p, q).clone());
        }
    }
    m
}

/// Image of the indicator map with scalars `phi` between label families
/// given by memberships over the box.
fn grid_fringe_image(
    bx: &LatticeBox,
    rows: &[Vec<bool>],
    cols: &[Vec<bool>],
    phi: &RatMatrix,
) -> Result<FdModule> {
    let e = indicator_sum(bx, cols);
    let bases: Vec<RatMatrix> = (0..bx.len())
        .map(|idx| {
            let r: Vec<usize> = (0..rows.len()).filter(|&p| rows[p][idx]).collect();
            let c: Vec<usize> = (0..cols.len()).filter(|&q| cols[q][idx]).collect();
            fringe_map_at(phi, &r, &c).image_basis()
        })
        .collect();
    e.submodule(&bases)
        .map_err(|err| Error::InvalidFringe(format!("image is not a submodule: {err}")))
}

/// The image of F = ⊕k[U_p] → E = ⊕k[D_q] on `bx`.
pub fn fringe_to_module(mm: &MonomialMatrix, bx: &LatticeBox) -> Result<FdModule> {
    if bx.n() != mm.n {
        return Err(Error::DimensionMismatch(format!(
            "box in Z^{} for labels in Z^{}",
            bx.n(),
            mm.n
        )));
    }
    if !mm.is_determined_by(bx) {
        return Err(Error::BoxNotDetermining(format!(
            "box {:?}..{:?} misses a label corner",
            bx.lo(),
            bx.hi()
        )));
    }
    validate_fringe(mm)?;
    let rows: Vec<Vec<bool>> = mm
        .rows
        .iter()
        .map(|u| {
            bx.points()
                .map(|p| u.contains(&p).expect("same n"))
                .collect()
        })
        .collect();
    let cols: Vec<Vec<bool>> = mm
        .cols
        .iter()
        .map(|d| {
            bx.points()
                .map(|p| d.contains(&p).expect("same n"))
                .collect()
        })
        .collect();
    grid_fringe_image(bx, &rows, &cols, &mm.phi)
}

/// The homomorphism F = ⊕k[U_p] → E = ⊕k[D_q] with scalars φ on `bx`.
pub fn fringe_hom(mm: &MonomialMatrix, bx: &LatticeBox) -> Result<ModuleHom> {
    if !mm.is_determined_by(bx) {
        return Err(Error::BoxNotDetermining(format!(
            "box {:?}..{:?} misses a label corner",
            bx.lo(),
            bx.hi()
        )));
    }
    validate_fringe(mm)?;
    let member = |contains: &dyn Fn(&[i64]) -> bool| -> Vec<bool> {
        bx.points().map(|p| contains(&p)).collect()
    };
    let rows: Vec<Vec<bool>> = mm
        .rows
        .iter()
        .map(|u| member(&|p| u.contains(p).expect("same n")))
        .collect();
    let cols: Vec<Vec<bool>> = mm
        .cols
        .iter()
        .map(|d| member(&|p| d.contains(p).expect("same n")))
        .collect();
    let maps = (0..bx.len())
        .map(|idx| {
            let r: Vec<usize> = (0..rows.len()).filter(|&p| rows[p][idx]).collect();
            let c: Vec<usize> = (0..cols.len()).filter(|&q| cols[q][idx]).collect();
            fringe_map_at(&mm.phi, &r, &c)
        })
        .collect();
    ModuleHom::new(indicator_sum(bx, &rows), indicator_sum(bx, &cols), maps)
}

/// A flat cover F = ⊕ k[U_p] ↠ M by top generators.
#[derive(Clone, Debug)]
pub struct FlatCover {
    /// One upset `g + Zρ + N^n` per generator.
    pub rows: Vec<UpsetZn>,
    /// Generator points in the box and generator vectors in M there.
    pub generators: Vec<(usize, Vec<Rat>)>,
    pub map: ModuleHom,
}

/// An injective hull M ↪ E = ⊕ k[D_q] by socle cogenerators.
#[derive(Clone, Debug)]
pub struct InjectiveHull {
    /// One downset `h + Zτ − N^n` per cogenerator.
    pub cols: Vec<DownsetZn>,
    pub faces: Vec<Face>,
    /// Cogenerator points in the box and reading functionals on M there.
    pub cogenerators: Vec<(usize, Vec<Rat>)>,
    pub map: ModuleHom,
}

/// Generators along every face ρ: for each top piece, the columns of a
/// lift of its projection.
pub fn flat_cover(m: &FdModule) -> Result<FlatCover> {
    let bx = m.lattice_box();
    let mut rows = Vec::new();
    let mut generators = Vec::new();
    for rho in Face::all(m.n()) {
        for piece in top_pieces(m, &rho) {
            let g = top_point(m, &rho, &piece.degree);
            let gi = bx.index(&g).expect("top point lies in the box");
            // Columns ℓ with P ℓ = e_k.
            let lift = piece
                .projection
                .solve_exact(&RatMatrix::identity(piece.projection.rows()))?;
            for k in 0..lift.cols() {
                rows.push(UpsetZn::single(g.clone(), rho.clone()));
                generators.push((gi, lift.column(k)));
            }
        }
    }
    let member: Vec<Vec<bool>> = rows
        .iter()
        .map(|u| {
            bx.points()
                .map(|p| u.contains(&p).expect("same n"))
                .collect()
        })
        .collect();
    let f = indicator_sum(bx, &member);
    let reach: Vec<Vec<Option<RatMatrix>>> =
        generators.iter().map(|(gi, _)| m.maps_from(*gi)).collect();
    let maps: Vec<RatMatrix> = (0..bx.len())
        .map(|idx| {
            let cols: Vec<Vec<Rat>> = (0..rows.len())
                .filter(|&p| member[p][idx])
                .map(|p| {
                    let to = reach[p][idx]
                        .as_ref()
                        .expect("generator lies below its upset");
                    to.mul(&RatMatrix::from_columns(
                        to.cols(),
                        &[generators[p].1.clone()],
                    ))
                    .column(0)
                })
                .collect();
            RatMatrix::from_columns(m.dim_at_index(idx), &cols)
        })
        .collect();
    let map = ModuleHom::new(f, m.clone(), maps).map_err(|e| {
        Error::HullConstructionFailed(format!("flat cover is not a homomorphism: {e}"))
    })?;
    if !map.is_surjective_degreewise() {
        return Err(Error::HullConstructionFailed(
            "top generators do not generate the module".into(),
        ));
    }
    Ok(FlatCover {
        rows,
        generators,
        map,
    })
}

/// Cogenerators along every face τ: for each socle piece, the rows of the
/// retraction onto its basis.
pub fn injective_hull(m: &FdModule) -> Result<InjectiveHull> {
    let bx = m.lattice_box();
    let mut cols = Vec::new();
    let mut faces = Vec::new();
    let mut cogenerators = Vec::new();
    for tau in Face::all(m.n()) {
        for piece in socle_pieces(m, &tau) {
            let h = socle_point(m, &tau, &piece.degree);
            let hi = bx.index(&h).expect("socle point lies in the box");
            let lambda = piece.basis.retraction();
            for k in 0..lambda.rows() {
                cols.push(DownsetZn::single(h.clone(), tau.clone()));
                faces.push(tau.clone());
                cogenerators.push((hi, lambda.row(k).to_vec()));
            }
        }
    }
    let member: Vec<Vec<bool>> = cols
        .iter()
        .map(|d| {
            bx.points()
                .map(|p| d.contains(&p).expect("same n"))
                .collect()
        })
        .collect();
    let e = indicator_sum(bx, &member);
    let maps: Vec<RatMatrix> = (0..bx.len())
        .map(|idx| {
            let reach = m.maps_from(idx);
            let rows: Vec<Vec<Rat>> = (0..cols.len())
                .filter(|&q| member[q][idx])
                .map(|q| {
                    let (hi, functional) = &cogenerators[q];
                    let to = reach[*hi]
                        .as_ref()
                        .expect("point lies below its cogenerator");
                    RatMatrix::from_rows(vec![functional.clone()], to.rows())
                        .expect("row")
                        .mul(to)
                        .row(0)
                        .to_vec()
                })
                .collect();
            RatMatrix::from_rows(rows, m.dim_at_index(idx)).expect("rows have the source width")
        })
        .collect();
    let map = ModuleHom::new(m.clone(), e, maps).map_err(|e| {
        Error::HullConstructionFailed(format!("hull map is not a homomorphism: {e}"))
    })?;
    if !map.is_injective_degreewise() {
        return Err(Error::HullConstructionFailed(
            "socle cogenerators do not detect every element".into(),
        ));
    }
    Ok(InjectiveHull {
        cols,
        faces,
        cogenerators,
        map,
    })
}

/// A fringe presentation of `m`: the composite of a flat cover by top
/// generators and an injective hull by socle cogenerators.
pub fn module_to_fringe(m: &FdModule) -> Result<MonomialMatrix> {
    let cover = flat_cover(m)?;
    let hull = injective_hull(m)?;
    let mut phi = RatMatrix::zeros(cover.rows.len(), hull.cols.len());
    for (p, (gi, ell)) in cover.generators.iter().enumerate() {
        let reach = m.maps_from(*gi);
        for (q, (hi, lambda)) in hull.cogenerators.iter().enumerate() {
            if let Some(to) = &reach[*hi] {
                let v = to.mul(&RatMatrix::from_columns(to.cols(), &[ell.clone()]));
                let s = lambda
                    .iter()
                    .zip(v.column(0))
                    .fold(Rat::zero(), |acc, (a, b)| acc + a * b);
                phi.set(p, q, s);
            }
        }
    }
    let mm = MonomialMatrix::new(m.n(), cover.rows, hull.cols, phi)?;
    validate_fringe(&mm)
        .map_err(|e| Error::HullConstructionFailed(format!("composite violates labels: {e}")))?;
    Ok(mm)
}

/// A monomial matrix over a finite poset with explicit label sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetMonomialMatrix {
    pub rows: Vec<Vec<bool>>,
    pub cols: Vec<Vec<bool>>,
    pub phi: RatMatrix,
}

impl PosetMonomialMatrix {
    /// Checks that rows are upsets, columns downsets and nonzero entries
    /// sit on meeting labels.
    pub fn validate(&self, domain: &Domain) -> Result<()> {
        let size = domain.size();
        if self.phi.rows() != self.rows.len() || self.phi.cols() != self.cols.len() {
            return Err(Error::InvalidFringe(
                "scalar matrix shape differs from label counts".into(),
            ));
        }
        let pairs = domain.generating_pairs();
        for (k, u) in self.rows.iter().enumerate() {
            if u.len() != size {
                return Err(Error::TargetMismatch(format!(
                    "row label {k} has {} entries for {size}",
                    u.len()
                )));
            }
            if pairs.iter().any(|&(a, b)| u[a] && !u[b]) {
                return Err(Error::NotAnUpset(format!("row label {k}")));
            }
        }
        for (k, d) in self.cols.iter().enumerate() {
            if d.len() != size {
                return Err(Error::TargetMismatch(format!(
                    "column label {k} has {} entries for {size}",
                    d.len()
                )));
            }
            if pairs.iter().any(|&(a, b)| d[b] && !d[a]) {
                return Err(Error::NotADownset(format!("column label {k}")));
            }
        }
        for (row, u) in self.rows.iter().enumerate() {
            for (col, d) in self.cols.iter().enumerate() {
                if !self.phi.get(row, col).is_zero() && !u.iter().zip(d).any(|(x, y)| *x && *y) {
                    return Err(Error::IllegalNonzeroEntry { row, col });
                }
            }
        }
        Ok(())
    }

    /// The image of ⊕k[U_p] → ⊕k[D_q] over the domain.
    pub fn evaluate(&self, domain: &Domain) -> Result<Pullback> {
        self.validate(domain)?;
        match domain {
            Domain::Grid(bx) => Ok(Pullback::Grid(grid_fringe_image(
                bx, &self.rows, &self.cols, &self.phi,
            )?)),
            Domain::Poset(p) => Ok(Pullback::Poset(self.poset_image(p)?)),
        }
    }

    fn poset_image(&self, p: &FinitePoset) -> Result<PosetModule> {
        let present = |labels: &[Vec<bool>], a: usize| -> Vec<usize> {
            (0..labels.len()).filter(|&j| labels[j][a]).collect()
        };
        let bases: Vec<RatMatrix> = (0..p.size())
            .map(|a| {
                fringe_map_at(&self.phi, &present(&self.rows, a), &present(&self.cols, a))
                    .image_basis()
            })
            .collect();
        let mut maps = BTreeMap::new();
        for (a, b) in p.covers() {
            let e = coordinate_map(&present(&self.cols, a), &present(&self.cols, b));
            let pushed = e.mul(&bases[a]);
            let m = bases[b]
                .solve(&pushed)?
                .ok_or_else(|| Error::InvalidFringe(format!("image not closed along {a} ⋖ {b}")))?;
            maps.insert((a, b), m);
        }
        PosetModule::new(p.clone(), bases.iter().map(|b| b.cols()).collect(), maps)
    }
}

/// Pulls labels back to preimages along `pi`; scalars are unchanged.
pub fn pullback_fringe(
    pi: &PosetMorphism,
    mm: &PosetMonomialMatrix,
) -> Result<PosetMonomialMatrix> {
    mm.validate(&Domain::Poset(pi.target().clone()))?;
    let pull = |labels: &[Vec<bool>]| -> Vec<Vec<bool>> {
        labels
            .iter()
            .map(|l| pi.map().iter().map(|&t| l[t]).collect())
            .collect()
    };
    let out = PosetMonomialMatrix {
        rows: pull(&mm.rows),
        cols: pull(&mm.cols),
        phi: mm.phi.clone(),
    };
    out.validate(pi.source())?;
    Ok(out)
}
