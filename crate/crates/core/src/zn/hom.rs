use crate::error::{Error, Result};
use crate::linalg::RatMatrix;

use super::socle::{socle_pieces, socle_point, top_pieces, top_point};
use super::{Face, FdModule};

/// A homomorphism of finitely determined modules stored on a common box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleHom {
    source: FdModule,
    target: FdModule,
    maps: Vec<RatMatrix>,
}

impl ModuleHom {
    /// Checks shapes and that the maps commute with every step.
    pub fn new(source: FdModule, target: FdModule, maps: Vec<RatMatrix>) -> Result<ModuleHom> {
        let bx = source.lattice_box().clone();
        if target.lattice_box() != &bx {
            return Err(Error::NotAHomomorphism(
                "source and target live on different boxes".into(),
            ));
        }
        if maps.len() != bx.len() {
            return Err(Error::NotAHomomorphism(format!(
                "{} maps for {} box points",
                maps.len(),
                bx.len()
            )));
        }
        for idx in 0..bx.len() {
            let f = &maps[idx];
            if f.rows() != target.dim_at_index(idx) || f.cols() != source.dim_at_index(idx) {
                return Err(Error::NotAHomomorphism(format!(
                    "map at {:?} is {}x{}, expected {}x{}",
                    bx.point(idx),
                    f.rows(),
                    f.cols(),
                    target.dim_at_index(idx),
                    source.dim_at_index(idx)
                )));
            }
        }
        for idx in 0..bx.len() {
            for axis in 0..bx.n() {
                if let Some(j) = bx.step_index(idx, axis) {
                    let lhs = maps[j].mul(&source.step(idx, axis));
                    let rhs = target.step(idx, axis).mul(&maps[idx]);
                    if lhs != rhs {
                        return Err(Error::NotAHomomorphism(format!(
                            "square at {:?} along axis {} does not commute",
                            bx.point(idx),
                            axis + 1
                        )));
                    }
                }
            }
        }
        Ok(ModuleHom {
            source,
            target,
            maps,
        })
    }

    pub fn source(&self) -> &FdModule {
        &self.source
    }

    pub fn target(&self) -> &FdModule {
        &self.target
    }

    pub fn maps(&self) -> &[RatMatrix] {
        &self.maps
    }

    pub fn identity(m: &FdModule) -> ModuleHom {
        let maps = m.dims().iter().map(|&d| RatMatrix::identity(d)).collect();
        ModuleHom {
            source: m.clone(),
            target: m.clone(),
            maps,
        }
    }

    /// Degreewise: every map has full column rank.
    pub fn is_injective_degreewise(&self) -> bool {
        self.maps.iter().all(|f| f.rank() == f.cols())
    }

    /// Degreewise: every map has full row rank.
    pub fn is_surjective_degreewise(&self) -> bool {
        self.maps.iter().all(|f| f.rank() == f.rows())
    }

    /// soc_τ φ is injective for every face τ.
    pub fn socle_criterion(&self) -> bool {
        let bx = self.source.lattice_box();
        Face::all(self.source.n()).all(|tau| {
            socle_pieces(&self.source, &tau).iter().all(|piece| {
                let p = socle_point(&self.source, &tau, &piece.degree);
                let f = &self.maps[bx.index(&p).expect("socle point in box")];
                f.mul(&piece.basis).rank() == piece.basis.cols()
            })
        })
    }

    /// top_ρ φ is surjective for every face ρ.
    pub fn top_criterion(&self) -> bool {
        let bx = self.target.lattice_box();
        Face::all(self.target.n()).all(|rho| {
            top_pieces(&self.target, &rho).iter().all(|piece| {
                let g = top_point(&self.target, &rho, &piece.degree);
                let f = &self.maps[bx.index(&g).expect("top point in box")];
                piece.projection.mul(f).rank() == piece.projection.rows()
            })
        })
    }

    /// Image as a submodule of the target.
    pub fn image(&self) -> Result<FdModule> {
        let bases: Vec<RatMatrix> = self.maps.iter().map(|f| f.image_basis()).collect();
        self.target.submodule(&bases)
    }

    /// Kernel as a submodule of the source.
    pub fn kernel(&self) -> Result<FdModule> {
        let bases: Vec<RatMatrix> = self.maps.iter().map(|f| f.kernel_basis()).collect();
        self.source.submodule(&bases)
    }
}

/// Injectivity, cross-checked against the socle criterion.
pub fn is_injective_hom(phi: &ModuleHom) -> Result<bool> {
    let degreewise = phi.is_injective_degreewise();
    if degreewise != phi.socle_criterion() {
        return Err(Error::InvariantViolated(
            "degreewise injectivity disagrees with the socle criterion".into(),
        ));
    }
    Ok(degreewise)
}

/// Surjectivity, cross-checked against the top criterion.
pub fn is_surjective_hom(phi: &ModuleHom) -> Result<bool> {
    let degreewise = phi.is_surjective_degreewise();
    if degreewise != phi.top_criterion() {
        return Err(Error::InvariantViolated(
            "degreewise surjectivity disagrees with the top criterion".into(),
        ));
    }
    Ok(degreewise)
}
