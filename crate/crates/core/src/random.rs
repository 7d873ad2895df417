//! Seeded random instances for property tests, the acceptance suite and benches.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::barcode1d::RModule1D;
use crate::fringe::{fringe_hom, fringe_to_module, meets, MonomialMatrix};
use crate::linalg::{rat, Rat, RatMatrix};
use crate::poset::{DownsetZn, FinitePoset, Piece, UpsetZn};
use crate::zn::{Face, FdModule, LatticeBox, ModuleHom};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_face(rng: &mut impl Rng, n: usize, face_prob: f64) -> Face {
    let axes: Vec<usize> = (0..n).filter(|_| rng.gen_bool(face_prob)).collect();
    Face::from_axes(n, &axes).expect("axes below n")
}

/// A corner strictly above `lo` (upset) or strictly below `hi` (downset) on
/// every axis, so the box determines the piece.
fn random_corner(rng: &mut impl Rng, bx: &LatticeBox, up: bool) -> Vec<i64> {
    (0..bx.n())
        .map(|i| {
            let (lo, hi) = (bx.lo()[i], bx.hi()[i]);
            if up {
                rng.gen_range(lo + 1..=hi)
            } else {
                rng.gen_range(lo..hi)
            }
        })
        .collect()
}

pub fn random_upset(
    rng: &mut impl Rng,
    bx: &LatticeBox,
    max_pieces: usize,
    face_prob: f64,
) -> UpsetZn {
    let k = rng.gen_range(1..=max_pieces);
    let pieces = (0..k)
        .map(|_| {
            Piece::new(
                random_corner(rng, bx, true),
                random_face(rng, bx.n(), face_prob),
            )
        })
        .collect();
    UpsetZn::new(bx.n(), pieces).expect("pieces in Z^n")
}

pub fn random_downset(
    rng: &mut impl Rng,
    bx: &LatticeBox,
    max_pieces: usize,
    face_prob: f64,
) -> DownsetZn {
    let k = rng.gen_range(1..=max_pieces);
    let pieces = (0..k)
        .map(|_| {
            Piece::new(
                random_corner(rng, bx, false),
                random_face(rng, bx.n(), face_prob),
            )
        })
        .collect();
    DownsetZn::new(bx.n(), pieces).expect("pieces in Z^n")
}

/// A downset in Z^n with up to `max_pieces` pieces and corners in `[-r, r]^n`.
pub fn random_downset_in(rng: &mut impl Rng, n: usize, r: i64, max_pieces: usize) -> DownsetZn {
    let k = rng.gen_range(1..=max_pieces);
    let pieces = (0..k)
        .map(|_| {
            Piece::new(
                (0..n).map(|_| rng.gen_range(-r..=r)).collect(),
                random_face(rng, n, 0.3),
            )
        })
        .collect();
    DownsetZn::new(n, pieces).expect("pieces in Z^n")
}

/// A valid monomial matrix with single-piece labels determined by `bx` and
/// small integer scalars on meeting pairs.
pub fn random_monomial_matrix(
    rng: &mut impl Rng,
    bx: &LatticeBox,
    rows: usize,
    cols: usize,
) -> MonomialMatrix {
    let us: Vec<UpsetZn> = (0..rows).map(|_| random_upset(rng, bx, 1, 0.2)).collect();
    let ds: Vec<DownsetZn> = (0..cols).map(|_| random_downset(rng, bx, 1, 0.2)).collect();
    let mut phi = RatMatrix::zeros(rows, cols);
    for (p, u) in us.iter().enumerate() {
        for (q, d) in ds.iter().enumerate() {
            if meets(u, d).expect("same n") {
                phi.set(p, q, rat(rng.gen_range(-2..=2)));
            }
        }
    }
    MonomialMatrix::new(bx.n(), us, ds, phi).expect("shapes match")
}

/// The image of a random fringe presentation with at most `max_dim` rows,
/// so every value has dimension at most `max_dim`.
pub fn random_module(rng: &mut impl Rng, bx: &LatticeBox, max_dim: usize) -> FdModule {
    let rows = rng.gen_range(1..=max_dim);
    let cols = rng.gen_range(1..=max_dim + 1);
    let mm = random_monomial_matrix(rng, bx, rows, cols);
    fringe_to_module(&mm, bx).expect("labels are determined by the box")
}

/// A homomorphism from a random fringe presentation F → E: the map itself,
/// its corestriction F ↠ im, or the inclusion im ↪ E, chosen uniformly.
pub fn random_hom(rng: &mut impl Rng, bx: &LatticeBox, max_dim: usize) -> ModuleHom {
    let rows = rng.gen_range(1..=max_dim);
    let cols = rng.gen_range(1..=max_dim + 1);
    let mm = random_monomial_matrix(rng, bx, rows, cols);
    let h = fringe_hom(&mm, bx).expect("labels are determined by the box");
    let bases: Vec<RatMatrix> = h.maps().iter().map(|f| f.image_basis()).collect();
    match rng.gen_range(0..3) {
        0 => h,
        1 => {
            let image = h
                .target()
                .submodule(&bases)
                .expect("images form a submodule");
            let maps = h
                .maps()
                .iter()
                .zip(&bases)
                .map(|(f, b)| b.solve_exact(f).expect("f lands in its image"))
                .collect();
            ModuleHom::new(h.source().clone(), image, maps).expect("corestriction commutes")
        }
        _ => {
            let image = h
                .target()
                .submodule(&bases)
                .expect("images form a submodule");
            ModuleHom::new(image, h.target().clone(), bases).expect("inclusion commutes")
        }
    }
}

/// A random box in Z^n with sides between 2 and `max_side` points.
pub fn random_box(rng: &mut impl Rng, n: usize, max_side: i64) -> LatticeBox {
    let lo: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=0)).collect();
    let hi: Vec<i64> = lo.iter().map(|&l| l + rng.gen_range(1..max_side)).collect();
    LatticeBox::new(lo, hi).expect("lo ≤ hi")
}

/// A random poset on `size` elements: pairs `a < b` with `a < b` as
/// integers, kept with probability `p`, then closed transitively.
pub fn random_poset(rng: &mut impl Rng, size: usize, p: f64) -> FinitePoset {
    let mut pairs = Vec::new();
    for a in 0..size {
        for b in (a + 1)..size {
            if rng.gen_bool(p) {
                pairs.push((a, b));
            }
        }
    }
    FinitePoset::from_relation(size, &pairs).expect("an order-compatible relation is antisymmetric")
}

/// The upset generated by a random subset of elements.
pub fn random_poset_upset(rng: &mut impl Rng, poset: &FinitePoset) -> Vec<bool> {
    let gens: Vec<usize> = (0..poset.size()).filter(|_| rng.gen_bool(0.3)).collect();
    (0..poset.size())
        .map(|b| gens.iter().any(|&a| poset.leq(a, b)))
        .collect()
}

/// A chain module with up to `max_crit` critical values among the halves
/// in [-3, 3], cell dims at most `max_dim` and maps with entries in {-1,0,1}.
pub fn random_rmodule(rng: &mut impl Rng, max_crit: usize, max_dim: usize) -> RModule1D {
    let k = rng.gen_range(0..=max_crit);
    let mut halves: Vec<i64> = (-6..=6).collect();
    halves.shuffle(rng);
    let mut chosen: Vec<i64> = halves.into_iter().take(k).collect();
    chosen.sort();
    let crit: Vec<Rat> = chosen
        .into_iter()
        .map(|h| Rat::new(h.into(), 2.into()))
        .collect();
    let dims: Vec<usize> = (0..2 * k + 1).map(|_| rng.gen_range(0..=max_dim)).collect();
    let maps = (0..2 * k)
        .map(|c| {
            let rows: Vec<Vec<Rat>> = (0..dims[c + 1])
                .map(|_| (0..dims[c]).map(|_| rat(rng.gen_range(-1..=1))).collect())
                .collect();
            RatMatrix::from_rows(rows, dims[c]).expect("rows have the source dim")
        })
        .collect();
    RModule1D::new(crit, dims, maps).expect("shapes match")
}
