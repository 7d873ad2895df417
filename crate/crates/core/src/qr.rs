//! Birth and death posets, QR codes, module recovery and elder morphisms.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::fringe::{fringe_to_module, MonomialMatrix};
use crate::linalg::{Rat, RatMatrix};
use crate::poset::{DownsetZn, UpsetZn};
use crate::zn::{embed, restrict, socle_pieces, top_pieces, Face, FdModule, LatticeBox, Point};

/// b_ρ = b + Zρ, stored with ρ-coordinates normalized to 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BirthDegree {
    pub face: Face,
    pub coset: Point,
}

/// a_τ = a + Zτ, stored with τ-coordinates normalized to 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeathDegree {
    pub face: Face,
    pub coset: Point,
}

fn normalized(face: &Face, p: &[i64]) -> Point {
    let mut q = p.to_vec();
    for i in face.axes() {
        q[i] = 0;
    }
    q
}

fn outside_both(a: &Face, b: &Face) -> Vec<usize> {
    a.union(b).complement_axes()
}

impl BirthDegree {
    pub fn new(face: Face, coset: &[i64]) -> BirthDegree {
        let coset = normalized(&face, coset);
        BirthDegree { face, coset }
    }

    /// b_ρ + Q_+ ⊇ b'_ρ' + Q_+.
    pub fn precedes(&self, other: &BirthDegree) -> bool {
        other.face.is_subset(&self.face)
            && self
                .face
                .complement_axes()
                .iter()
                .all(|&i| self.coset[i] <= other.coset[i])
    }

    /// (b_ρ + Q_+) ∩ (a_τ − Q_+) ≠ ∅.
    pub fn meets(&self, alpha: &DeathDegree) -> bool {
        outside_both(&self.face, &alpha.face)
            .iter()
            .all(|&i| self.coset[i] <= alpha.coset[i])
    }

    /// The point over which Gen_β is read: ρ-coordinates at the box bottom,
    /// projected into the box.
    pub fn point(&self, bx: &LatticeBox) -> Point {
        bx.project(&embed(
            &self.face,
            &restrict(&self.face, &self.coset),
            bx.lo(),
        ))
    }

    fn key(&self) -> (u32, &Point) {
        (self.face.mask(), &self.coset)
    }
}

impl DeathDegree {
    pub fn new(face: Face, coset: &[i64]) -> DeathDegree {
        let coset = normalized(&face, coset);
        DeathDegree { face, coset }
    }

    /// a_τ − Q_+ ⊆ a'_τ' − Q_+.
    pub fn precedes(&self, other: &DeathDegree) -> bool {
        self.face.is_subset(&other.face)
            && other
                .face
                .complement_axes()
                .iter()
                .all(|&i| self.coset[i] <= other.coset[i])
    }

    /// The point over which Soc_α is read: τ-coordinates at the box top.
    pub fn point(&self, bx: &LatticeBox) -> Point {
        bx.project(&embed(
            &self.face,
            &restrict(&self.face, &self.coset),
            bx.hi(),
        ))
    }

    fn key(&self) -> (u32, &Point) {
        (self.face.mask(), &self.coset)
    }
}

impl PartialOrd for BirthDegree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BirthDegree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for DeathDegree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DeathDegree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

/// Births (ρ, b_ρ) with top_ρ M nonzero, ordered by (face bitmask, coset).
pub fn birth_poset(m: &FdModule) -> Vec<BirthDegree> {
    let zeros = vec![0; m.n()];
    let mut out: Vec<BirthDegree> = Face::all(m.n())
        .flat_map(|rho| {
            top_pieces(m, &rho)
                .into_iter()
                .map(|p| BirthDegree::new(rho.clone(), &embed(&rho, &p.degree, &zeros)))
                .collect::<Vec<_>>()
        })
        .collect();
    out.sort();
    out
}

/// Deaths (τ, a_τ) with soc_τ M nonzero, ordered by (face bitmask, coset).
pub fn death_poset(m: &FdModule) -> Vec<DeathDegree> {
    let zeros = vec![0; m.n()];
    let mut out: Vec<DeathDegree> = Face::all(m.n())
        .flat_map(|tau| {
            socle_pieces(m, &tau)
                .into_iter()
                .map(|p| DeathDegree::new(tau.clone(), &embed(&tau, &p.degree, &zeros)))
                .collect::<Vec<_>>()
        })
        .collect();
    out.sort();
    out
}

/// Gen_β M = (M^ρ/ρ)_{b_ρ}, the value of M with ρ-coordinates at the box
/// bottom, with its surjection onto (top_ρ M)_{b_ρ}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSpace {
    pub point: Point,
    pub dim: usize,
    /// Rows are top coordinates; zero rows when the top vanishes at β.
    pub top_projection: RatMatrix,
}

pub fn gen_space(m: &FdModule, beta: &BirthDegree) -> GenSpace {
    let point = beta.point(m.lattice_box());
    let dim = m.hilbert(&point);
    let degree = restrict(&beta.face, &point);
    let top_projection = top_pieces(m, &beta.face)
        .into_iter()
        .find(|p| {
            p.degree == degree
                && beta
                    .face
                    .complement_axes()
                    .iter()
                    .all(|&i| point[i] == beta.coset[i])
        })
        .map_or_else(|| RatMatrix::zeros(0, dim), |p| p.projection);
    GenSpace {
        point,
        dim,
        top_projection,
    }
}

/// Soc_α M: a basis of the socle inside M at the α point (columns) and the
/// retraction reading socle coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SocSpace {
    pub point: Point,
    pub basis: RatMatrix,
    pub retraction: RatMatrix,
}

pub fn soc_space(m: &FdModule, alpha: &DeathDegree) -> SocSpace {
    let bx = m.lattice_box();
    let point = alpha.point(bx);
    let degree = restrict(&alpha.face, &point);
    let on_coset = alpha
        .face
        .complement_axes()
        .iter()
        .all(|&i| point[i] == alpha.coset[i]);
    let basis = socle_pieces(m, &alpha.face)
        .into_iter()
        .find(|p| on_coset && p.degree == degree)
        .map_or_else(|| RatMatrix::zeros(m.hilbert(&point), 0), |p| p.basis);
    let retraction = basis.retraction();
    SocSpace {
        point,
        basis,
        retraction,
    }
}

/// The two-case death functor on one element φ ∈ Gen_β: the image of φ at
/// the α point when it is a nonzero socle element there (the cogenerator of
/// im φ in the coset α), and 0 otherwise.
pub fn death_functor(
    m: &FdModule,
    beta: &BirthDegree,
    phi: &[Rat],
    alpha: &DeathDegree,
) -> Result<Vec<Rat>> {
    let gen = gen_space(m, beta);
    if phi.len() != gen.dim {
        return Err(Error::NotInGenSpace(format!(
            "expected {} coordinates, got {}",
            gen.dim,
            phi.len()
        )));
    }
    let soc = soc_space(m, alpha);
    let zero = vec![Rat::from_integer(0.into()); soc.basis.cols()];
    if !beta.meets(alpha) {
        return Ok(zero);
    }
    let bx = m.lattice_box();
    let (g, h) = (
        bx.index(&gen.point).expect("in box"),
        bx.index(&soc.point).expect("in box"),
    );
    let v = m
        .map_between_indices(g, h)
        .mul(&RatMatrix::from_columns(gen.dim, &[phi.to_vec()]));
    if v.is_zero() || soc.basis.hstack(&v).expect("same rows").rank() != soc.basis.cols() {
        return Ok(zero);
    }
    Ok(soc.retraction.mul(&v).column(0))
}

/// Functorial QR code: births with Gen dimensions, deaths with socle
/// dimensions, and blocks[b][a]: Gen_b → Soc_a.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QrCode {
    pub n: usize,
    pub births: Vec<(BirthDegree, usize)>,
    pub deaths: Vec<(DeathDegree, usize)>,
    pub blocks: Vec<Vec<RatMatrix>>,
}

/// Blocks are λ_α ∘ M(g_β → h_α): the death functor made linear by reading
/// the image at the α point through the socle retraction.
pub fn qr_code(m: &FdModule) -> QrCode {
    let bx = m.lattice_box();
    let births: Vec<(BirthDegree, GenSpace)> = birth_poset(m)
        .into_iter()
        .map(|b| {
            let g = gen_space(m, &b);
            (b, g)
        })
        .collect();
    let deaths: Vec<(DeathDegree, SocSpace)> = death_poset(m)
        .into_iter()
        .map(|a| {
            let s = soc_space(m, &a);
            (a, s)
        })
        .collect();
    let blocks = births
        .iter()
        .map(|(b, g)| {
            deaths
                .iter()
                .map(|(a, s)| {
                    if b.meets(a) {
                        let (gi, hi) = (
                            bx.index(&g.point).expect("in box"),
                            bx.index(&s.point).expect("in box"),
                        );
                        s.retraction.mul(&m.map_between_indices(gi, hi))
                    } else {
                        RatMatrix::zeros(s.basis.cols(), g.dim)
                    }
                })
                .collect()
        })
        .collect();
    QrCode {
        n: m.n(),
        births: births.into_iter().map(|(b, g)| (b, g.dim)).collect(),
        deaths: deaths
            .into_iter()
            .map(|(a, s)| (a, s.basis.cols()))
            .collect(),
        blocks,
    }
}

impl QrCode {
    /// The QR map as a monomial matrix: one row per Gen basis vector
    /// labeled b + Zρ + N^n, one column per Soc basis vector labeled
    /// a + Zτ − N^n.
    pub fn to_monomial_matrix(&self) -> Result<MonomialMatrix> {
        let mut rows = Vec::new();
        for (b, d) in &self.births {
            rows.extend(
                std::iter::repeat(UpsetZn::single(b.coset.clone(), b.face.clone())).take(*d),
            );
        }
        let mut cols = Vec::new();
        for (a, d) in &self.deaths {
            cols.extend(
                std::iter::repeat(DownsetZn::single(a.coset.clone(), a.face.clone())).take(*d),
            );
        }
        let mut phi = RatMatrix::zeros(rows.len(), cols.len());
        let mut r0 = 0;
        for (bi, (_, gd)) in self.births.iter().enumerate() {
            let mut c0 = 0;
            for (ai, (_, sd)) in self.deaths.iter().enumerate() {
                let block = &self.blocks[bi][ai];
                if block.rows() != *sd || block.cols() != *gd {
                    return Err(Error::ShapeMismatch(format!(
                        "block ({bi},{ai}) is {}x{}",
                        block.rows(),
                        block.cols()
                    )));
                }
                for r in 0..*gd {
                    for c in 0..*sd {
                        phi.set(r0 + r, c0 + c, block.get(c, r).clone());
                    }
                }
                c0 += sd;
            }
            r0 += gd;
        }
        MonomialMatrix::new(self.n, rows, cols, phi)
    }
}

/// The image of ⊕ k[b_ρ+Q_+]⊗Gen_β → ∏ k[a_τ−Q_+]⊗Soc_α on the box.
pub fn recover(qr: &QrCode, bx: &LatticeBox) -> Result<FdModule> {
    fringe_to_module(&qr.to_monomial_matrix()?, bx)
}

/// Image in M of ⊕ k[β'+Q_+]⊗Gen_β' over births β' selected by `keep`.
fn life_submodule(
    m: &FdModule,
    keep: impl Fn(&BirthDegree) -> bool,
) -> Result<(Vec<RatMatrix>, FdModule)> {
    let bx = m.lattice_box();
    let gens: Vec<usize> = birth_poset(m)
        .into_iter()
        .filter(|b| keep(b))
        .map(|b| bx.index(&b.point(bx)).expect("in box"))
        .collect();
    let bases: Vec<RatMatrix> = (0..bx.len())
        .map(|idx| {
            let p = bx.point(idx);
            let mut span = RatMatrix::zeros(m.dim_at_index(idx), 0);
            for &g in &gens {
                if crate::zn::leq(&bx.point(g), &p) {
                    span = span
                        .hstack(&m.map_between_indices(g, idx))
                        .expect("same rows");
                }
            }
            span.image_basis()
        })
        .collect();
    let sub = m.submodule(&bases)?;
    Ok((bases, sub))
}

/// M_{≺β}: generated by the births strictly older than β.
pub fn elder_submodule(m: &FdModule, beta: &BirthDegree) -> Result<FdModule> {
    Ok(life_submodule(m, |b| b != beta && b.precedes(beta))?.1)
}

/// M_{⪯β}: generated by the births up to and including β.
pub fn extant_submodule(m: &FdModule, beta: &BirthDegree) -> Result<FdModule> {
    Ok(life_submodule(m, |b| b.precedes(beta))?.1)
}

/// M_{⪯β}/M_{≺β} with the degreewise projections from M_{⪯β} coordinates.
pub fn elder_quotient(m: &FdModule, beta: &BirthDegree) -> Result<(FdModule, Vec<RatMatrix>)> {
    let (big, _) = life_submodule(m, |b| b.precedes(beta))?;
    let (small, _) = life_submodule(m, |b| b != beta && b.precedes(beta))?;
    m.subquotient(&big, &small)
}

/// Elder morphism top_β M → ∏_α Soc_α(M_{⪯β}/M_{≺β}): rows are stacked
/// over the deaths of the quotient, columns are coordinates of
/// Gen_β(quotient) = top_β M.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElderMorphism {
    pub quotient: FdModule,
    pub deaths: Vec<(DeathDegree, usize)>,
    pub matrix: RatMatrix,
}

pub fn elder_morphism(m: &FdModule, beta: &BirthDegree) -> Result<ElderMorphism> {
    let (quotient, _) = elder_quotient(m, beta)?;
    let qr = qr_code(&quotient);
    let others: Vec<&BirthDegree> = qr
        .births
        .iter()
        .map(|(b, _)| b)
        .filter(|b| *b != beta)
        .collect();
    if !others.is_empty() {
        return Err(Error::InvariantViolated(format!(
            "elder quotient has tops at {others:?}"
        )));
    }
    let top_dim = gen_space(m, beta).top_projection.rows();
    let gen_dim = gen_space(&quotient, beta).dim;
    if gen_dim != top_dim {
        return Err(Error::InvariantViolated(format!(
            "Gen of the elder quotient has dim {gen_dim}, top has {top_dim}"
        )));
    }
    let matrix = match qr.births.first() {
        Some(_) => RatMatrix::vstack_all(&qr.blocks[0], gen_dim)?,
        None => RatMatrix::zeros(0, gen_dim),
    };
    Ok(ElderMorphism {
        quotient,
        deaths: qr.deaths,
        matrix,
    })
}

#[cfg(test)]
mod tests;
