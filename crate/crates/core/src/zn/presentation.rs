use crate::error::{Error, Result};
use crate::linalg::{Rat, RatMatrix};

use super::{leq, FdModule, LatticeBox, Point};

/// A relation of degree `degree`: the element Σ c_g · x^{degree − deg g} e_g.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub degree: Point,
    pub coefficients: Vec<Rat>,
}

/// The finitely generated module with the given generator degrees and
/// relations, evaluated on `bx`. The box must sit strictly below every
/// generator on its lower side and reach every degree on its upper side.
pub fn from_presentation(
    bx: &LatticeBox,
    generators: &[Point],
    relations: &[Relation],
) -> Result<FdModule> {
    for g in generators {
        if g.len() != bx.n() || !leq(g, bx.hi()) || g.iter().zip(bx.lo()).any(|(a, l)| a <= l) {
            return Err(Error::BoxNotDetermining(format!("generator degree {g:?}")));
        }
    }
    for r in relations {
        if r.coefficients.len() != generators.len() {
            return Err(Error::ShapeMismatch(
                "relation length differs from generator count".into(),
            ));
        }
        if !leq(&r.degree, bx.hi()) {
            return Err(Error::BoxNotDetermining(format!(
                "relation degree {:?}",
                r.degree
            )));
        }
        for (g, c) in generators.iter().zip(&r.coefficients) {
            if !num_traits::Zero::is_zero(c) && !leq(g, &r.degree) {
                return Err(Error::InvalidModule(format!(
                    "relation at {:?} uses generator of degree {g:?}",
                    r.degree
                )));
            }
        }
    }
    // Free part at x: generators of degree ≤ x. Quotient by relations of degree ≤ x.
    let quotient_at = |x: &[i64]| -> (Vec<usize>, RatMatrix, RatMatrix) {
        let gens: Vec<usize> = (0..generators.len())
            .filter(|&g| leq(&generators[g], x))
            .collect();
        let rels: Vec<Vec<Rat>> = relations
            .iter()
            .filter(|r| leq(&r.degree, x))
            .map(|r| gens.iter().map(|&g| r.coefficients[g].clone()).collect())
            .collect();
        let span = RatMatrix::from_columns(gens.len(), &rels);
        let (proj, lift) = span.quotient_maps();
        (gens, proj, lift)
    };
    let data: Vec<(Vec<usize>, RatMatrix, RatMatrix)> =
        bx.points().map(|p| quotient_at(&p)).collect();
    FdModule::from_fn(
        bx.clone(),
        |p| data[bx.index(p).expect("in box")].1.rows(),
        |p, axis| {
            let mut q = p.to_vec();
            q[axis] += 1;
            let (src_gens, _, src_lift) = &data[bx.index(p).expect("in box")];
            let (dst_gens, dst_proj, _) = &data[bx.index(&q).expect("in box")];
            let mut inclusion = RatMatrix::zeros(dst_gens.len(), src_gens.len());
            for (j, g) in src_gens.iter().enumerate() {
                let i = dst_gens
                    .iter()
                    .position(|h| h == g)
                    .expect("generators persist");
                inclusion.set(i, j, Rat::from_integer(1.into()));
            }
            dst_proj.mul(&inclusion).mul(src_lift)
        },
    )
}
