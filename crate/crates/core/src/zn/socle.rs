//! Closed socles and tops along faces.

use crate::linalg::RatMatrix;

use super::{embed, Face, FdModule, LatticeBox, Point};

/// One nonzero graded piece of soc_τ M.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoclePiece {
    /// Degree in Z^{n-|τ|}, indexed by the axes outside τ.
    pub degree: Point,
    /// Columns span the socle inside (M/τ) at `degree`, i.e. inside M at
    /// the slice point with τ-coordinates at the box top.
    pub basis: RatMatrix,
}

/// One nonzero graded piece of top_ρ M.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopPiece {
    /// Degree in Z^{n-|ρ|}, indexed by the axes outside ρ.
    pub degree: Point,
    /// Surjection from M at the point with ρ-coordinates at the box bottom
    /// onto the top; rows are top coordinates.
    pub projection: RatMatrix,
}

/// Socle pieces of a module over Z^k: at each box degree, the kernel of
/// the assembled map into all successors. Steps leaving the box are
/// identities, so degrees on the upper boundary carry no socle.
fn socle_of(q: &FdModule) -> Vec<SoclePiece> {
    let bx = q.lattice_box();
    let k = bx.n();
    let mut out = Vec::new();
    for idx in 0..bx.len() {
        let d = q.dim_at_index(idx);
        if d == 0 {
            continue;
        }
        if (0..k).any(|axis| bx.step_index(idx, axis).is_none()) {
            continue;
        }
        let mut assembled = RatMatrix::zeros(0, d);
        for axis in 0..k {
            assembled = assembled
                .vstack(q.step_ref(idx, axis).expect("inside box"))
                .expect("same source");
        }
        let kernel = assembled.kernel_basis();
        if kernel.cols() > 0 {
            out.push(SoclePiece {
                degree: bx.point(idx),
                basis: kernel,
            });
        }
    }
    out
}

/// Nonzero pieces of soc_τ M in increasing degree order.
pub fn socle_pieces(m: &FdModule, tau: &Face) -> Vec<SoclePiece> {
    socle_of(&m.quotient_restriction(tau))
}

/// Graded vector space with zero structure maps, stored on `bx` expanded
/// by one cell below so that the pieces stay isolated under projection.
fn skyscraper_module(bx: &LatticeBox, pieces: &[(Point, usize)]) -> FdModule {
    let grown = bx.expanded(1, 0);
    let dims: Vec<usize> = grown
        .points()
        .map(|p| pieces.iter().find(|(d, _)| *d == p).map_or(0, |(_, k)| *k))
        .collect();
    FdModule::from_fn(
        grown.clone(),
        |p| dims[grown.index(p).expect("point of the grown box")],
        |p, axis| {
            let mut q = p.to_vec();
            q[axis] += 1;
            RatMatrix::zeros(
                dims[grown.index(&q).expect("successor in box")],
                dims[grown.index(p).expect("point of the grown box")],
            )
        },
    )
    .expect("zero steps have matching shapes")
}

/// soc_τ M as a module over Z^{n-|τ|} with zero structure maps.
pub fn closed_socle_along(m: &FdModule, tau: &Face) -> FdModule {
    let q = m.quotient_restriction(tau);
    let pieces: Vec<(Point, usize)> = socle_of(&q)
        .into_iter()
        .map(|p| (p.degree, p.basis.cols()))
        .collect();
    skyscraper_module(q.lattice_box(), &pieces)
}

/// Nonzero pieces of top_ρ M, computed from the socle of the Matlis dual.
pub fn top_pieces(m: &FdModule, rho: &Face) -> Vec<TopPiece> {
    let dual = m.matlis_dual();
    let mut out: Vec<TopPiece> = socle_pieces(&dual, rho)
        .into_iter()
        .map(|p| TopPiece {
            degree: p.degree.iter().map(|v| -v).collect(),
            projection: p.basis.transpose(),
        })
        .collect();
    out.sort_by(|a, b| a.degree.cmp(&b.degree));
    out
}

/// top_ρ M = (soc_ρ(M^∨))^∨ as a module over Z^{n-|ρ|} with zero maps.
pub fn top_along(m: &FdModule, rho: &Face) -> FdModule {
    closed_socle_along(&m.matlis_dual(), rho).matlis_dual()
}

/// Point of M over which top degree `degree` along ρ is read: the
/// ρ-coordinates sit at the box bottom.
pub fn top_point(m: &FdModule, rho: &Face, degree: &[i64]) -> Point {
    embed(rho, degree, m.lattice_box().lo())
}

/// Point of M over which socle degree `degree` along τ is read.
pub fn socle_point(m: &FdModule, tau: &Face, degree: &[i64]) -> Point {
    embed(tau, degree, m.lattice_box().hi())
}
