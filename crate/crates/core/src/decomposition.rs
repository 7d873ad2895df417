//! Primary decomposition of downsets and of modules over Z^n.

use crate::error::{Error, Result};
use crate::fringe::injective_hull;
use crate::linalg::RatMatrix;
use crate::poset::{DownsetZn, Piece};
use crate::zn::{
    closed_socle_along, embed, leq, restrict, socle_pieces, Face, FdModule, LatticeBox, Point,
};

/// A τ-coprimary downset appearing in a decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimaryComponent {
    pub face: Face,
    pub downset: DownsetZn,
}

fn check_dim(d: &DownsetZn, tau: &Face) -> Result<()> {
    if tau.n() != d.n() {
        return Err(Error::DimensionMismatch(format!(
            "face in Z^{} for a downset in Z^{}",
            tau.n(),
            d.n()
        )));
    }
    Ok(())
}

/// D_τ = {q : q + Zτ ⊆ D}: the pieces whose face contains τ. For large t
/// the point q + t·Σ_{i∈τ} e_i only lies in pieces free along all of τ, and
/// such a piece then contains all of q + Zτ.
pub fn localize_downset(d: &DownsetZn, tau: &Face) -> Result<DownsetZn> {
    check_dim(d, tau)?;
    DownsetZn::new(
        d.n(),
        d.pieces()
            .iter()
            .filter(|p| tau.is_subset(&p.face))
            .cloned()
            .collect(),
    )
}

/// Γ_τ D on the box: points of D outside D_{i} for every axis i ∉ τ.
pub fn global_support_downset(d: &DownsetZn, tau: &Face, bx: &LatticeBox) -> Result<Vec<bool>> {
    check_dim(d, tau)?;
    if !d.is_determined_by(bx) {
        return Err(Error::BoxNotDetermining(format!(
            "box {:?}..{:?}",
            bx.lo(),
            bx.hi()
        )));
    }
    let rays: Vec<DownsetZn> = tau
        .complement_axes()
        .into_iter()
        .map(|i| localize_downset(d, &Face::from_axes(d.n(), &[i]).expect("axis below n")))
        .collect::<Result<_>>()?;
    Ok(bx
        .points()
        .map(|q| {
            d.contains(&q).expect("same n") && rays.iter().all(|r| !r.contains(&q).expect("same n"))
        })
        .collect())
}

/// Maximal elements, compared on the axes outside τ, of a set of box points.
fn maximal_mod_face(points: &[Point], tau: &Face) -> Vec<Point> {
    let reduced: Vec<Point> = points.iter().map(|p| restrict(tau, p)).collect();
    let mut out: Vec<Point> = reduced
        .iter()
        .filter(|a| !reduced.iter().any(|b| b != *a && leq(a, b)))
        .cloned()
        .collect();
    out.sort();
    out.dedup();
    out
}

fn pieces_at(n: usize, tau: &Face, degrees: &[Point]) -> Result<DownsetZn> {
    let zeros = vec![0; n];
    DownsetZn::new(
        n,
        degrees
            .iter()
            .map(|a| Piece::new(embed(tau, a, &zeros), tau.clone()))
            .collect(),
    )
}

/// P_τ(D) = Γ_τ(D_τ) − N^n, cogenerated by the maximal points of Γ_τ(D_τ) mod Zτ.
pub fn primary_component(d: &DownsetZn, tau: &Face) -> Result<DownsetZn> {
    let bx = d.determining_box();
    let local = localize_downset(d, tau)?;
    let support = global_support_downset(&local, tau, &bx)?;
    let points: Vec<Point> = bx
        .points()
        .zip(support)
        .filter_map(|(p, s)| s.then_some(p))
        .collect();
    pieces_at(d.n(), tau, &maximal_mod_face(&points, tau))
}

/// D = ⋃_τ P_τ(D) over faces with nonempty local support, in face order.
pub fn canonical_decomposition(d: &DownsetZn) -> Result<Vec<PrimaryComponent>> {
    let mut out = Vec::new();
    for tau in Face::all(d.n()) {
        let component = primary_component(d, &tau)?;
        if !component.pieces().is_empty() {
            out.push(PrimaryComponent {
                face: tau,
                downset: component,
            });
        }
    }
    Ok(out)
}

/// Socle degrees of k[D] along each face with a nonzero socle.
fn socle_degrees(d: &DownsetZn) -> Vec<(Face, Vec<Point>)> {
    let m = d.indicator(&d.determining_box());
    Face::all(d.n())
        .filter_map(|tau| {
            let degrees: Vec<Point> = socle_pieces(&m, &tau)
                .into_iter()
                .map(|p| p.degree)
                .collect();
            (!degrees.is_empty()).then_some((tau, degrees))
        })
        .collect()
}

/// Faces τ with soc_τ k[D] ≠ 0.
pub fn associated_faces(d: &DownsetZn) -> Vec<Face> {
    socle_degrees(d).into_iter().map(|(tau, _)| tau).collect()
}

fn same_membership(a: &DownsetZn, b: &DownsetZn, bx: &LatticeBox) -> bool {
    bx.points()
        .all(|p| a.contains(&p).expect("same n") == b.contains(&p).expect("same n"))
}

/// D = ⋃_τ D^τ with D^τ cogenerated by the socle degrees of k[D] along τ.
/// Checks that the union is D and that socles of k[D] match the socles of
/// the components degree by degree.
pub fn minimal_decomposition(d: &DownsetZn) -> Result<Vec<PrimaryComponent>> {
    let bx = d.determining_box();
    let mut out = Vec::new();
    for (tau, degrees) in socle_degrees(d) {
        out.push(PrimaryComponent {
            downset: pieces_at(d.n(), &tau, &degrees)?,
            face: tau,
        });
    }
    let union = out
        .iter()
        .try_fold(DownsetZn::empty(d.n()), |acc, c| acc.union(&c.downset))?;
    if !same_membership(&union, d, &bx) {
        return Err(Error::InvariantViolated(
            "components do not cover the downset".into(),
        ));
    }
    let whole = d.indicator(&bx);
    for tau in Face::all(d.n()) {
        let mut expected = closed_socle_along(&whole, &tau).dims().to_vec();
        expected.iter_mut().for_each(|v| *v = 0);
        for c in &out {
            let s = closed_socle_along(&c.downset.indicator(&bx), &tau);
            for (e, v) in expected.iter_mut().zip(s.dims()) {
                *e += v;
            }
        }
        if expected != closed_socle_along(&whole, &tau).dims() {
            return Err(Error::InvariantViolated(format!(
                "socle along {tau:?} is not preserved"
            )));
        }
    }
    Ok(out)
}

/// The irredundant coprincipal pieces, one per socle degree.
pub fn irreducible_decomposition(d: &DownsetZn) -> Result<Vec<Piece>> {
    let pieces: Vec<Piece> = minimal_decomposition(d)?
        .into_iter()
        .flat_map(|c| c.downset.pieces().to_vec())
        .collect();
    let bx = d.determining_box();
    for k in 0..pieces.len() {
        let rest: Vec<Piece> = pieces
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, p)| p.clone())
            .collect();
        if same_membership(&DownsetZn::new(d.n(), rest)?, d, &bx) {
            return Err(Error::InvariantViolated(format!(
                "piece {:?} is redundant",
                pieces[k]
            )));
        }
    }
    Ok(pieces)
}

/// One τ-primary quotient M/M^τ with the projections M → M/M^τ.
#[derive(Clone, Debug)]
pub struct ModuleComponent {
    pub face: Face,
    pub quotient: FdModule,
    pub projections: Vec<RatMatrix>,
}

/// M^τ = ker(M → E^τ) for the hull columns along τ; returns the quotients
/// M/M^τ. Certifies that M → ⊕ M/M^τ is injective and that each quotient
/// has soc_τ equal to soc_τ M and no socle along other faces.
pub fn primary_decomposition_module(m: &FdModule) -> Result<Vec<ModuleComponent>> {
    let hull = injective_hull(m)?;
    let bx = m.lattice_box();
    let target = hull.map.target();
    let mut out = Vec::new();
    for tau in Face::all(m.n()) {
        let chosen: Vec<usize> = (0..hull.faces.len())
            .filter(|&q| hull.faces[q] == tau)
            .collect();
        if chosen.is_empty() {
            continue;
        }
        let kernels: Vec<RatMatrix> = (0..bx.len())
            .map(|idx| {
                // Rows of the hull map at idx are the columns present there, in column order.
                let present: Vec<usize> = (0..hull.cols.len())
                    .filter(|&q| hull.cols[q].contains(&bx.point(idx)).expect("same n"))
                    .collect();
                let rows: Vec<usize> = present
                    .iter()
                    .enumerate()
                    .filter(|(_, q)| chosen.contains(q))
                    .map(|(r, _)| r)
                    .collect();
                hull.map.maps()[idx].select_rows(&rows).kernel_basis()
            })
            .collect();
        let (quotient, projections) = m.quotient(&kernels)?;
        out.push(ModuleComponent {
            face: tau,
            quotient,
            projections,
        });
    }
    debug_assert_eq!(target.lattice_box(), bx);
    for idx in 0..bx.len() {
        let stacked = RatMatrix::vstack_all(
            &out.iter()
                .map(|c| c.projections[idx].clone())
                .collect::<Vec<_>>(),
            m.dim_at_index(idx),
        )?;
        if stacked.rank() != m.dim_at_index(idx) {
            return Err(Error::HullConstructionFailed(format!(
                "diagonal map is not injective at {:?}",
                bx.point(idx)
            )));
        }
    }
    for c in &out {
        for tau in Face::all(m.n()) {
            let q = closed_socle_along(&c.quotient, &tau);
            let ok = if tau == c.face {
                q.dims() == closed_socle_along(m, &tau).dims()
            } else {
                q.is_zero()
            };
            if !ok {
                return Err(Error::HullConstructionFailed(format!(
                    "component along {:?} has the wrong socle along {tau:?}",
                    c.face
                )));
            }
        }
    }
    Ok(out)
}
