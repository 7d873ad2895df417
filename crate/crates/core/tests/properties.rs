//! Structural invariants as property tests. Each case draws a seed and builds
//! its instance with the seeded generators.

use std::collections::BTreeMap;

use persistence_kernel_core::barcode1d::{
    gr_soc_spaces, interval_module_on, top_spaces, Bar, RModule1D,
};
use persistence_kernel_core::decomposition::primary_decomposition_module;
use persistence_kernel_core::fringe::fringe_hom;
use persistence_kernel_core::json::{
    module_from_json, module_to_json, qr_from_json, qr_to_json, rmodule_from_json, rmodule_to_json,
};
use persistence_kernel_core::linalg::RatMatrix;
use persistence_kernel_core::oracle::top_dims_by_cokernels;
use persistence_kernel_core::poset::{
    encode, isotypic_regions, pullback_module, uptight_poset, Domain, Pullback,
};
use persistence_kernel_core::qr::qr_code;
use persistence_kernel_core::random::{
    random_box, random_hom, random_module, random_monomial_matrix, random_poset,
    random_poset_upset, random_rmodule, rng,
};
use persistence_kernel_core::zn::socle::socle_point;
use persistence_kernel_core::zn::{socle_pieces, top_pieces};
use persistence_kernel_core::{Face, FdModule, ModuleHom, Point};
use proptest::prelude::*;
use rand::Rng;

fn small_module(seed: u64, max_n: usize, max_side: i64) -> FdModule {
    let mut r = rng(seed);
    let n = r.gen_range(1..=max_n);
    let bx = random_box(&mut r, n, max_side);
    random_module(&mut r, &bx, 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn uptight_relation_is_a_partial_order(seed in any::<u64>()) {
        let mut r = rng(seed);
        let size = r.gen_range(1..=8);
        let poset = random_poset(&mut r, size, 0.3);
        let upsets: Vec<Vec<bool>> = (0..r.gen_range(0..=3)).map(|_| random_poset_upset(&mut r, &poset)).collect();
        let (p, pi) = uptight_poset(&Domain::Poset(poset.clone()), &upsets).unwrap();
        let k = p.size();
        for a in 0..k {
            prop_assert!(p.leq(a, a));
            for b in 0..k {
                prop_assert!(a == b || !(p.leq(a, b) && p.leq(b, a)));
                for c in 0..k {
                    prop_assert!(!(p.leq(a, b) && p.leq(b, c)) || p.leq(a, c));
                }
            }
        }
        for x in 0..size {
            for y in 0..size {
                if poset.leq(x, y) {
                    prop_assert!(p.leq(pi.apply(x), pi.apply(y)));
                }
            }
            // Elements of one class share their membership fingerprint.
            for y in 0..size {
                if pi.apply(x) == pi.apply(y) {
                    prop_assert!(upsets.iter().all(|u| u[x] == u[y]));
                }
            }
        }
    }

    #[test]
    fn encoding_pulls_back_and_refines_isotypic_regions(seed in any::<u64>()) {
        let m = small_module(seed, 2, 4);
        let (pi, h) = encode(&m).unwrap();
        match pullback_module(&pi, &h).unwrap() {
            Pullback::Grid(back) => prop_assert!(back.same_rank_invariant(&m).unwrap()),
            Pullback::Poset(_) => prop_assert!(false, "a box source pulls back to a box"),
        }
        let mut region_of = BTreeMap::new();
        for (k, members) in isotypic_regions(&m).iter().enumerate() {
            for &i in members {
                region_of.insert(i, k);
            }
        }
        for fiber in pi.fibers() {
            let regions: Vec<usize> = fiber.iter().map(|i| region_of[i]).collect();
            prop_assert!(regions.windows(2).all(|w| w[0] == w[1]));
        }
    }

    #[test]
    fn support_commutes_with_localization(seed in any::<u64>()) {
        let m = small_module(seed, 2, 4);
        let n = m.n();
        for tau in Face::all(n) {
            for sigma in Face::all(n) {
                let a = m.localize(&tau).global_support(&sigma).unwrap();
                let b = m.global_support(&sigma).unwrap().localize(&tau);
                prop_assert_eq!(a.dims(), b.dims());
                if !tau.is_subset(&sigma) {
                    prop_assert!(a.is_zero());
                }
            }
        }
    }

    #[test]
    fn socle_is_left_exact(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=2);
        let bx = random_box(&mut r, n, 4);
        let mm = random_monomial_matrix(&mut r, &bx, 2, 3);
        let h = fringe_hom(&mm, &bx).unwrap();
        // A = im h ↪ B = E ↠ C = E / A.
        let b = h.target().clone();
        let bases: Vec<RatMatrix> = h.maps().iter().map(|f| f.image_basis()).collect();
        let a = b.submodule(&bases).unwrap();
        for tau in Face::all(n) {
            let soc_a: BTreeMap<Point, usize> =
                socle_pieces(&a, &tau).into_iter().map(|p| (p.degree, p.basis.cols())).collect();
            let mut kernel = BTreeMap::new();
            for piece in socle_pieces(&b, &tau) {
                let idx = bx.index(&socle_point(&b, &tau, &piece.degree)).unwrap();
                let sub = &bases[idx];
                let meet = piece.basis.rank() + sub.rank() - piece.basis.hstack(sub).unwrap().rank();
                if meet > 0 {
                    kernel.insert(piece.degree, meet);
                }
            }
            prop_assert_eq!(soc_a, kernel);
        }
    }

    #[test]
    fn injection_and_surjection_criteria(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=2);
        let bx = random_box(&mut r, n, 4);
        let h = random_hom(&mut r, &bx, 2);
        prop_assert_eq!(h.is_injective_degreewise(), h.socle_criterion());
        prop_assert_eq!(h.is_surjective_degreewise(), h.top_criterion());
    }

    #[test]
    fn tops_from_duals_match_cokernels(seed in any::<u64>()) {
        let m = small_module(seed, 3, 3);
        for rho in Face::all(m.n()) {
            let via_dual: BTreeMap<Point, usize> =
                top_pieces(&m, &rho).into_iter().map(|p| (p.degree, p.projection.rows())).collect();
            prop_assert_eq!(via_dual, top_dims_by_cokernels(&m, &rho));
        }
    }

    #[test]
    fn module_decomposition_is_primary_and_injective(seed in any::<u64>()) {
        let m = small_module(seed, 2, 3);
        let comps = primary_decomposition_module(&m).unwrap();
        let bx = m.lattice_box();
        for c in &comps {
            for sigma in Face::all(m.n()) {
                prop_assert_eq!(socle_pieces(&c.quotient, &sigma).is_empty(), sigma != c.face);
            }
        }
        if !comps.is_empty() {
            let target = comps[1..]
                .iter()
                .try_fold(comps[0].quotient.clone(), |acc, c| acc.direct_sum(&c.quotient))
                .unwrap();
            let maps: Vec<RatMatrix> = (0..bx.len())
                .map(|idx| {
                    let blocks: Vec<RatMatrix> = comps.iter().map(|c| c.projections[idx].clone()).collect();
                    RatMatrix::vstack_all(&blocks, m.dim_at_index(idx)).unwrap()
                })
                .collect();
            let diag = ModuleHom::new(m.clone(), target, maps).unwrap();
            prop_assert!(diag.is_injective_degreewise());
        } else {
            prop_assert!(m.is_zero());
        }
    }

    #[test]
    fn interval_sums_have_endpoint_bases(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = r.gen_range(1..=4);
        let crit = random_rmodule(&mut r, 0, 0).crit().to_vec();
        let crit: Vec<_> = if crit.is_empty() {
            (0..k as i64).map(|v| persistence_kernel_core::linalg::rat(v)).collect()
        } else {
            crit
        };
        let zero = RModule1D::zero(crit.clone()).unwrap();
        let cells = zero.cells();
        let mut bars = Vec::new();
        for _ in 0..r.gen_range(1..=4) {
            let s = r.gen_range(0..cells);
            let t = r.gen_range(s..cells);
            bars.push(Bar { birth: zero.birth_at(s), death: zero.death_at(t), multiplicity: 1 });
        }
        let m = bars.iter().fold(zero.clone(), |acc, b| acc.direct_sum(&interval_module_on(b, crit.clone()).unwrap()).unwrap());
        for top in top_spaces(&m) {
            prop_assert_eq!(top.projection.rows(), bars.iter().filter(|b| b.birth == top.birth).count());
        }
        prop_assert_eq!(
            top_spaces(&m).iter().map(|t| t.projection.rows()).sum::<usize>(),
            bars.len()
        );
        for g in gr_soc_spaces(&m) {
            prop_assert_eq!(g.dim, bars.iter().filter(|b| b.birth == g.birth && b.death == g.death).count());
        }
        prop_assert_eq!(gr_soc_spaces(&m).iter().map(|g| g.dim).sum::<usize>(), bars.len());
    }

    #[test]
    fn json_round_trips(seed in any::<u64>()) {
        let m = small_module(seed, 3, 3);
        prop_assert_eq!(&module_from_json(&module_to_json(&m)).unwrap(), &m);
        let qr = qr_code(&m);
        prop_assert_eq!(qr_from_json(&qr_to_json(&qr)).unwrap(), qr);
        let mut r = rng(seed);
        let x = random_rmodule(&mut r, 4, 3);
        prop_assert_eq!(rmodule_from_json(&rmodule_to_json(&x)).unwrap(), x);
    }
}
