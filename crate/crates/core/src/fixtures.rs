//! Small named modules used in examples, tests and CLI fixtures.

use crate::linalg::rat;
use crate::zn::{from_presentation, FdModule, LatticeBox, Relation};

fn square_box(lo: i64, hi: i64, n: usize) -> LatticeBox {
    LatticeBox::new(vec![lo; n], vec![hi; n]).expect("lo ≤ hi")
}

/// Generators e_x, e_y, e_xy in degrees (1,0), (0,1), (1,1) with relations
/// xy·e_x = x·e_xy and xy·e_y = y·e_xy, on the box [-1,3]^2.
pub fn elder_module() -> FdModule {
    let bx = square_box(-1, 3, 2);
    let gens = vec![vec![1, 0], vec![0, 1], vec![1, 1]];
    let rels = vec![
        Relation {
            degree: vec![2, 1],
            coefficients: vec![rat(1), rat(0), rat(-1)],
        },
        Relation {
            degree: vec![1, 2],
            coefficients: vec![rat(0), rat(1), rat(-1)],
        },
    ];
    from_presentation(&bx, &gens, &rels).expect("presentation fits the box")
}

/// k[N^n] on [-1,1]^n.
pub fn free_module(n: usize) -> FdModule {
    FdModule::indicator(square_box(-1, 1, n), |p| p.iter().all(|&v| v >= 0))
}

/// k[-N^n] on [-1,1]^n.
pub fn cofree_module(n: usize) -> FdModule {
    FdModule::indicator(square_box(-1, 1, n), |p| p.iter().all(|&v| v <= 0))
}

/// Skyscraper k_0 on [-1,1]^n.
pub fn skyscraper(n: usize) -> FdModule {
    FdModule::indicator(square_box(-1, 1, n), |p| p.iter().all(|&v| v == 0))
}

/// The constant module k[Z^n] on [-1,1]^n.
pub fn constant_module(n: usize) -> FdModule {
    FdModule::indicator(square_box(-1, 1, n), |_| true)
}

/// k_0 ⊕ k[Z^2] on the box [-r,r]^2.
pub fn skyscraper_plus_constant(r: i64) -> FdModule {
    let bx = square_box(-r, r, 2);
    let a = FdModule::indicator(bx.clone(), |p| p == [0, 0]);
    let b = FdModule::indicator(bx, |_| true);
    a.direct_sum(&b).expect("same box")
}
