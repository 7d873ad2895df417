//! Independent brute-force computations used to cross-check the algorithms.

use std::collections::BTreeMap;

use crate::barcode1d::RModule1D;
use crate::linalg::{Rat, RatMatrix};
use crate::poset::DownsetZn;
use crate::zn::{Face, FdModule, LatticeBox, Point};

/// Dimension of the space of degreewise maps `a → b` on a common box that
/// commute with every step, by solving the linear system directly.
pub fn hom_space_dim(a: &FdModule, b: &FdModule) -> usize {
    let bx = a.lattice_box();
    assert_eq!(bx, b.lattice_box(), "modules share a box");
    // Unknown block for point p starts at offset[p], row-major dB_p × dA_p.
    let mut offset = Vec::with_capacity(bx.len());
    let mut total = 0;
    for idx in 0..bx.len() {
        offset.push(total);
        total += a.dim_at_index(idx) * b.dim_at_index(idx);
    }
    let mut equations: Vec<Vec<Rat>> = Vec::new();
    for p in 0..bx.len() {
        for axis in 0..bx.n() {
            let Some(q) = bx.step_index(p, axis) else {
                continue;
            };
            let (sa, sb) = (a.step(p, axis), b.step(p, axis));
            let (da_p, db_p, da_q, db_q) = (
                a.dim_at_index(p),
                b.dim_at_index(p),
                a.dim_at_index(q),
                b.dim_at_index(q),
            );
            // (sb · φ_p − φ_q · sa)[r][c] = 0 for r < db_q, c < da_p.
            for r in 0..db_q {
                for c in 0..da_p {
                    let mut row = vec![Rat::from_integer(0.into()); total];
                    for k in 0..db_p {
                        row[offset[p] + k * da_p + c] += sb.get(r, k);
                    }
                    for k in 0..da_q {
                        row[offset[q] + r * da_q + k] -= sa.get(k, c);
                    }
                    equations.push(row);
                }
            }
        }
    }
    let system = RatMatrix::from_rows(equations, total).expect("rows have the unknown count");
    total - system.rank()
}

/// Points `q` of the box with `q + Zτ ⊆ D`. D is a downset, so this holds
/// iff the point with τ-coordinates pushed past the box lies in D.
pub fn localized_membership(d: &DownsetZn, tau: &Face, bx: &LatticeBox) -> Vec<bool> {
    bx.points()
        .map(|q| {
            let mut x = q.clone();
            for i in tau.axes() {
                x[i] = bx.hi()[i] + 1;
            }
            d.contains(&x).expect("same n")
        })
        .collect()
}

/// Socle degrees of k[D] along τ from membership alone: points q of the box,
/// with τ-coordinates at the box bottom, such that q + Zτ ⊆ D but
/// q + e_i + Zτ ⊄ D for every axis i outside τ. Degrees are the coordinates
/// outside τ. Every socle degree is a piece corner, so a determining box
/// sees all of them.
pub fn downset_socle_degrees(d: &DownsetZn, tau: &Face, bx: &LatticeBox) -> Vec<Point> {
    let line_in = |x: &[i64]| {
        let mut y = x.to_vec();
        for i in tau.axes() {
            y[i] = i64::MAX / 4;
        }
        d.contains(&y).expect("same n")
    };
    bx.points()
        .filter(|q| tau.axes().iter().all(|&i| q[i] == bx.lo()[i]))
        .filter(|q| {
            line_in(q)
                && tau.complement_axes().iter().all(|&i| {
                    let mut x = q.clone();
                    x[i] += 1;
                    !line_in(&x)
                })
        })
        .map(|q| tau.complement_axes().iter().map(|&i| q[i]).collect())
        .collect()
}

/// Dimensions of top_ρ M by cokernels: on the slice with ρ-coordinates at
/// the box bottom, M at q modulo the images of the steps arriving along the
/// axes outside ρ. Steps entering the box are identities, so degrees on the
/// lower boundary carry no top. Keys are the coordinates outside ρ.
pub fn top_dims_by_cokernels(m: &FdModule, rho: &Face) -> BTreeMap<Point, usize> {
    let bx = m.lattice_box();
    let comp = rho.complement_axes();
    let mut out = BTreeMap::new();
    for idx in 0..bx.len() {
        let q = bx.point(idx);
        if rho.axes().iter().any(|&i| q[i] != bx.lo()[i]) {
            continue;
        }
        let dim = m.dim_at_index(idx);
        let top = if comp.iter().any(|&i| q[i] == bx.lo()[i]) {
            0
        } else {
            let incoming = comp.iter().fold(RatMatrix::zeros(dim, 0), |acc, &i| {
                let prev = bx.back_index(idx, i).expect("q is above the bottom");
                acc.hstack(&m.step(prev, i)).expect("same target")
            });
            dim - incoming.rank()
        };
        if top > 0 {
            out.insert(comp.iter().map(|&i| q[i]).collect(), top);
        }
    }
    out
}

/// Interval multiplicities of a chain module by rank inclusion-exclusion:
/// bars over cells s..=t number r(s,t) − r(s−1,t) − r(s,t+1) + r(s−1,t+1).
pub fn interval_multiplicities(m: &RModule1D) -> Vec<(usize, usize, usize)> {
    let cells = m.cells() as i64;
    let r = |s: i64, t: i64| -> i64 {
        if s < 0 || t >= cells || s > t {
            0
        } else {
            m.rank_between(s as usize, t as usize) as i64
        }
    };
    let mut out = Vec::new();
    for s in 0..cells {
        for t in s..cells {
            let k = r(s, t) - r(s - 1, t) - r(s, t + 1) + r(s - 1, t + 1);
            assert!(k >= 0, "negative multiplicity at {s}..{t}");
            if k > 0 {
                out.push((s as usize, t as usize, k as usize));
            }
        }
    }
    out
}
