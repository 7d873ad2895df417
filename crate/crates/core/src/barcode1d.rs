//! One-parameter constructible modules over R: functorial tops, graded
//! socles, elder projections and functorial bar codes.
//!
//! Cells are indexed 0..=2m for critical values c_1 < … < c_m: cell 2i is
//! the open interval left of c_{i+1} (cell 2m is (c_m, ∞)) and cell 2i+1 is
//! the point {c_{i+1}}.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{format_rat, Rat, RatMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RModule1D {
    crit: Vec<Rat>,
    dims: Vec<usize>,
    maps: Vec<RatMatrix>,
}

/// −∞ < b_• < b_∘ < b′_• for b < b′.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BirthDegreeR {
    NegInf,
    Closed(Rat),
    Open(Rat),
}

/// a′_• < a_∘ < a_• < ∞ for a′ < a.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DeathDegreeR {
    Open(Rat),
    Closed(Rat),
    PosInf,
}

impl BirthDegreeR {
    fn key(&self) -> (u8, Option<&Rat>, u8) {
        match self {
            BirthDegreeR::NegInf => (0, None, 0),
            BirthDegreeR::Closed(v) => (1, Some(v), 0),
            BirthDegreeR::Open(v) => (1, Some(v), 1),
        }
    }
}

impl PartialOrd for BirthDegreeR {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BirthDegreeR {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl DeathDegreeR {
    fn key(&self) -> (u8, Option<&Rat>, u8) {
        match self {
            DeathDegreeR::Open(v) => (0, Some(v), 0),
            DeathDegreeR::Closed(v) => (0, Some(v), 1),
            DeathDegreeR::PosInf => (1, None, 0),
        }
    }
}

impl PartialOrd for DeathDegreeR {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DeathDegreeR {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bar {
    pub birth: BirthDegreeR,
    pub death: DeathDegreeR,
    pub multiplicity: usize,
}

impl fmt::Display for Bar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let left = match &self.birth {
            BirthDegreeR::NegInf => "(-inf".to_string(),
            BirthDegreeR::Closed(v) => format!("[{}", format_rat(v)),
            BirthDegreeR::Open(v) => format!("({}", format_rat(v)),
        };
        let right = match &self.death {
            DeathDegreeR::PosInf => "inf)".to_string(),
            DeathDegreeR::Closed(v) => format!("{}]", format_rat(v)),
            DeathDegreeR::Open(v) => format!("{})", format_rat(v)),
        };
        write!(f, "{left}, {right}")
    }
}

impl RModule1D {
    pub fn new(crit: Vec<Rat>, dims: Vec<usize>, maps: Vec<RatMatrix>) -> Result<RModule1D> {
        if crit.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidModule(
                "critical values must be strictly increasing".into(),
            ));
        }
        if dims.len() != 2 * crit.len() + 1 {
            return Err(Error::InvalidModule(format!(
                "{} cells for {} critical values",
                dims.len(),
                crit.len()
            )));
        }
        if maps.len() != 2 * crit.len() {
            return Err(Error::InvalidModule(format!(
                "{} maps for {} cells",
                maps.len(),
                dims.len()
            )));
        }
        for (k, f) in maps.iter().enumerate() {
            if f.rows() != dims[k + 1] || f.cols() != dims[k] {
                return Err(Error::ShapeMismatch(format!(
                    "map {k} is {}x{}, expected {}x{}",
                    f.rows(),
                    f.cols(),
                    dims[k + 1],
                    dims[k]
                )));
            }
        }
        Ok(RModule1D { crit, dims, maps })
    }

    pub fn zero(crit: Vec<Rat>) -> Result<RModule1D> {
        let cells = 2 * crit.len() + 1;
        RModule1D::new(
            crit,
            vec![0; cells],
            vec![RatMatrix::zeros(0, 0); cells - 1],
        )
    }

    pub fn crit(&self) -> &[Rat] {
        &self.crit
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[RatMatrix] {
        &self.maps
    }

    pub fn cells(&self) -> usize {
        self.dims.len()
    }

    /// M(s → t) for cells s ≤ t.
    pub fn map_between(&self, s: usize, t: usize) -> RatMatrix {
        (s..t).fold(RatMatrix::identity(self.dims[s]), |acc, k| {
            self.maps[k].mul(&acc)
        })
    }

    /// Rank of M(s → t), or 0 when s > t.
    pub fn rank_between(&self, s: usize, t: usize) -> usize {
        if s > t {
            0
        } else {
            self.map_between(s, t).rank()
        }
    }

    pub fn direct_sum(&self, other: &RModule1D) -> Result<RModule1D> {
        if self.crit != other.crit {
            return Err(Error::ShapeMismatch(
                "direct sum needs the same critical values".into(),
            ));
        }
        RModule1D::new(
            self.crit.clone(),
            self.dims
                .iter()
                .zip(&other.dims)
                .map(|(a, b)| a + b)
                .collect(),
            self.maps
                .iter()
                .zip(&other.maps)
                .map(|(a, b)| a.direct_sum(b))
                .collect(),
        )
    }

    fn crit_index(&self, v: &Rat) -> Result<usize> {
        self.crit.iter().position(|c| c == v).ok_or_else(|| {
            Error::InvalidModule(format!("{} is not a critical value", format_rat(v)))
        })
    }

    pub fn birth_cell(&self, b: &BirthDegreeR) -> Result<usize> {
        Ok(match b {
            BirthDegreeR::NegInf => 0,
            BirthDegreeR::Closed(v) => 2 * self.crit_index(v)? + 1,
            BirthDegreeR::Open(v) => 2 * self.crit_index(v)? + 2,
        })
    }

    pub fn death_cell(&self, a: &DeathDegreeR) -> Result<usize> {
        Ok(match a {
            DeathDegreeR::Open(v) => 2 * self.crit_index(v)?,
            DeathDegreeR::Closed(v) => 2 * self.crit_index(v)? + 1,
            DeathDegreeR::PosInf => 2 * self.crit.len(),
        })
    }

    pub fn birth_at(&self, cell: usize) -> BirthDegreeR {
        match cell {
            0 => BirthDegreeR::NegInf,
            c if c % 2 == 1 => BirthDegreeR::Closed(self.crit[c / 2].clone()),
            c => BirthDegreeR::Open(self.crit[c / 2 - 1].clone()),
        }
    }

    pub fn death_at(&self, cell: usize) -> DeathDegreeR {
        match cell {
            c if c == 2 * self.crit.len() => DeathDegreeR::PosInf,
            c if c % 2 == 1 => DeathDegreeR::Closed(self.crit[c / 2].clone()),
            c => DeathDegreeR::Open(self.crit[c / 2].clone()),
        }
    }

    /// Kernel of the step out of cell t; everything on the last cell.
    fn socle_basis(&self, t: usize) -> RatMatrix {
        if t + 1 == self.cells() {
            RatMatrix::identity(self.dims[t])
        } else {
            self.maps[t].kernel_basis()
        }
    }

    /// Classes at cell t born at or before cell s: im M(s → t) for s ≤ t,
    /// all of M_t for s > t, nothing when s is before cell 0.
    fn image_from(&self, s: Option<usize>, t: usize) -> RatMatrix {
        match s {
            Some(s) if s <= t => self.map_between(s, t).image_basis(),
            Some(_) => RatMatrix::identity(self.dims[t]),
            None => RatMatrix::zeros(self.dims[t], 0),
        }
    }
}

fn previous(cell: usize) -> Option<usize> {
    cell.checked_sub(1)
}

/// Indicator module of a bar on the given critical values.
pub fn interval_module_on(bar: &Bar, crit: Vec<Rat>) -> Result<RModule1D> {
    let shape = RModule1D::zero(crit)?;
    let s = shape.birth_cell(&bar.birth)?;
    let t = shape.death_cell(&bar.death)?;
    if s > t {
        return Err(Error::EmptyInterval(bar.to_string()));
    }
    let dims: Vec<usize> = (0..shape.cells())
        .map(|k| usize::from(s <= k && k <= t))
        .collect();
    let maps = (0..shape.cells() - 1)
        .map(|k| {
            if dims[k] == 1 && dims[k + 1] == 1 {
                RatMatrix::identity(1)
            } else {
                RatMatrix::zeros(dims[k + 1], dims[k])
            }
        })
        .collect();
    RModule1D::new(shape.crit, dims, maps)
}

/// Indicator module of a bar whose finite endpoints are the critical values.
pub fn interval_module(bar: &Bar) -> Result<RModule1D> {
    let mut crit: Vec<Rat> = Vec::new();
    if let BirthDegreeR::Closed(v) | BirthDegreeR::Open(v) = &bar.birth {
        crit.push(v.clone());
    }
    if let DeathDegreeR::Closed(v) | DeathDegreeR::Open(v) = &bar.death {
        crit.push(v.clone());
    }
    crit.sort();
    crit.dedup();
    interval_module_on(bar, crit)
}

/// top_β M: classes at the birth cell not hit from the previous cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopSpace {
    pub birth: BirthDegreeR,
    pub cell: usize,
    /// Surjection from M at the cell onto the top.
    pub projection: RatMatrix,
}

pub fn top_spaces(m: &RModule1D) -> Vec<TopSpace> {
    (0..m.cells())
        .filter_map(|s| {
            let (projection, _) = m.image_from(previous(s), s).quotient_maps();
            (projection.rows() > 0).then(|| TopSpace {
                birth: m.birth_at(s),
                cell: s,
                projection,
            })
        })
        .collect()
}

/// gr_β soc_α M = soc_α(M_{⪯β}) / soc_α(M_{≺β}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSocle {
    pub death: DeathDegreeR,
    pub birth: BirthDegreeR,
    pub dim: usize,
}

/// soc_α(M_{⪯β}) at the death cell, for the birth cell s (None before cell 0).
fn extant_socle(m: &RModule1D, s: Option<usize>, t: usize) -> RatMatrix {
    intersect(&m.socle_basis(t), &m.image_from(s, t))
}

/// Basis of the intersection of two column spaces.
fn intersect(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let k = a.hstack(b).expect("same ambient space").kernel_basis();
    a.mul(&k.select_rows(&(0..a.cols()).collect::<Vec<_>>()))
        .canonical_basis()
}

pub fn gr_soc_spaces(m: &RModule1D) -> Vec<GradedSocle> {
    let mut out = Vec::new();
    for t in 0..m.cells() {
        for s in 0..=t {
            let dim = extant_socle(m, Some(s), t).cols() - extant_socle(m, previous(s), t).cols();
            if dim > 0 {
                out.push(GradedSocle {
                    death: m.death_at(t),
                    birth: m.birth_at(s),
                    dim,
                });
            }
        }
    }
    out
}

/// M_{⪯β}/M_{≺β} on the same cells, the bases of M_{⪯β} and M_{≺β} inside
/// M, and lifts from quotient coordinates into M_{⪯β} coordinates.
struct ElderQuotient {
    module: RModule1D,
    big: Vec<RatMatrix>,
    small: Vec<RatMatrix>,
    lifts: Vec<RatMatrix>,
}

fn elder_quotient_at(m: &RModule1D, s: usize) -> ElderQuotient {
    let big: Vec<RatMatrix> = (0..m.cells()).map(|t| m.image_from(Some(s), t)).collect();
    let small: Vec<RatMatrix> = (0..m.cells())
        .map(|t| m.image_from(previous(s), t))
        .collect();
    let mut projections = Vec::new();
    let mut lifts = Vec::new();
    for t in 0..m.cells() {
        let inner = big[t]
            .solve_exact(&small[t])
            .expect("elder classes lie in the extant span");
        let (p, l) = inner.quotient_maps();
        projections.push(p);
        lifts.push(l);
    }
    let maps = (0..m.cells() - 1)
        .map(|t| {
            let step = m.maps[t].mul(&big[t]).mul(&lifts[t]);
            projections[t + 1].mul(
                &big[t + 1]
                    .solve_exact(&step)
                    .expect("extant span is closed"),
            )
        })
        .collect();
    let dims = projections.iter().map(|p| p.rows()).collect();
    let module =
        RModule1D::new(m.crit.clone(), dims, maps).expect("shapes come from the quotient maps");
    ElderQuotient {
        module,
        big,
        small,
        lifts,
    }
}

/// The elder quotient at β as a module on the same cells.
pub fn elder_quotient(m: &RModule1D, beta: &BirthDegreeR) -> Result<RModule1D> {
    Ok(elder_quotient_at(m, m.birth_cell(beta)?).module)
}

/// ω_α: soc_α(M_{⪯β}/M_{≺β}) → gr_β soc_α M, s ↦ s̃ − ψ_α^{-1}φ_α(s̃).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElderProjection {
    /// Columns: basis of soc_α of the elder quotient. Rows: coordinates
    /// in gr_β soc_α M.
    pub matrix: RatMatrix,
}

fn elder_projection_cells(
    m: &RModule1D,
    q: &ElderQuotient,
    s: usize,
    t: usize,
) -> Result<RatMatrix> {
    if t < s {
        return Ok(RatMatrix::zeros(0, 0));
    }
    // Source: soc_α Q in Q coordinates.
    let soc_q = q.module.socle_basis(t);
    // Target: (S ∩ E) / (S ∩ E') in coordinates of a basis of S ∩ E.
    let upper = extant_socle(m, Some(s), t);
    let lower = extant_socle(m, previous(s), t);
    let (gr_projection, _) = upper.solve_exact(&lower)?.quotient_maps();
    if soc_q.cols() != gr_projection.rows() {
        return Err(Error::InvariantViolated(format!(
            "soc of the elder quotient has dim {}, graded socle has {}",
            soc_q.cols(),
            gr_projection.rows()
        )));
    }
    let mut columns = Vec::new();
    for c in 0..soc_q.cols() {
        // Lift into M_{⪯β} at t, then into M.
        let lifted = q.big[t].mul(&q.lifts[t]).mul(&soc_q.select_columns(&[c]));
        let corrected = if t + 1 == m.cells() {
            lifted
        } else {
            let pushed = m.maps[t].mul(&lifted);
            // ψ_α: M_{≺β} at t → M_{≺β} at t+1, solved in small coordinates.
            let psi = m.maps[t].mul(&q.small[t]);
            let e = psi.solve(&pushed)?.ok_or_else(|| {
                Error::InvariantViolated("φ_α(s̃) is not in the elder image".into())
            })?;
            lifted.sub(&q.small[t].mul(&e))?
        };
        let in_upper = upper.solve_exact(&corrected)?;
        columns.push(gr_projection.mul(&in_upper).column(0));
    }
    let matrix = RatMatrix::from_columns(gr_projection.rows(), &columns);
    if matrix.rank() != matrix.rows() {
        return Err(Error::InvariantViolated(
            "elder projection is not an isomorphism".into(),
        ));
    }
    Ok(matrix)
}

pub fn elder_projection(
    m: &RModule1D,
    beta: &BirthDegreeR,
    alpha: &DeathDegreeR,
) -> Result<ElderProjection> {
    let s = m.birth_cell(beta)?;
    let t = m.death_cell(alpha)?;
    let q = elder_quotient_at(m, s);
    Ok(ElderProjection {
        matrix: elder_projection_cells(m, &q, s, t)?,
    })
}

/// Functorial bar code: per (β, α), the composite of the elder morphism
/// top_β M → soc_α(elder quotient) with the elder projection, and the bars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorialBarcode {
    pub tops: Vec<(BirthDegreeR, usize)>,
    pub blocks: Vec<(BirthDegreeR, DeathDegreeR, RatMatrix)>,
    pub bars: Vec<Bar>,
}

pub fn functorial_barcode(m: &RModule1D) -> Result<FunctorialBarcode> {
    let mut tops = Vec::new();
    let mut blocks = Vec::new();
    let mut bars = Vec::new();
    for top in top_spaces(m) {
        let s = top.cell;
        let q = elder_quotient_at(m, s);
        // Gen_β of the quotient is Q at s, which equals top_β M.
        let gen_dim = q.module.dims[s];
        if gen_dim != top.projection.rows() {
            return Err(Error::InvariantViolated(format!(
                "elder quotient at cell {s} differs from the top"
            )));
        }
        tops.push((top.birth.clone(), gen_dim));
        let mut total = 0;
        for t in s..m.cells() {
            let soc = q.module.socle_basis(t);
            if soc.cols() == 0 {
                continue;
            }
            // Elder morphism: read Q(s → t) through a retraction onto soc_α Q.
            let morphism = soc.retraction().mul(&q.module.map_between(s, t));
            let omega = elder_projection_cells(m, &q, s, t)?;
            blocks.push((top.birth.clone(), m.death_at(t), omega.mul(&morphism)));
            bars.push(Bar {
                birth: top.birth.clone(),
                death: m.death_at(t),
                multiplicity: soc.cols(),
            });
            total += soc.cols();
        }
        if total != gen_dim {
            return Err(Error::InvariantViolated(format!(
                "bars from cell {s} do not account for the top"
            )));
        }
    }
    bars.sort();
    Ok(FunctorialBarcode { tops, blocks, bars })
}

#[cfg(test)]
mod tests;
