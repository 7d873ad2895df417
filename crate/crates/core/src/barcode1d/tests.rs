use super::*;
use crate::linalg::rat;
use crate::oracle::interval_multiplicities;
use crate::random::{random_rmodule, rng};

fn closed_b(v: i64) -> BirthDegreeR {
    BirthDegreeR::Closed(rat(v))
}

fn open_b(v: i64) -> BirthDegreeR {
    BirthDegreeR::Open(rat(v))
}

fn closed_d(v: i64) -> DeathDegreeR {
    DeathDegreeR::Closed(rat(v))
}

fn open_d(v: i64) -> DeathDegreeR {
    DeathDegreeR::Open(rat(v))
}

fn bar(birth: BirthDegreeR, death: DeathDegreeR) -> Bar {
    Bar {
        birth,
        death,
        multiplicity: 1,
    }
}

fn sum_on(bars: &[Bar], crit: Vec<Rat>) -> RModule1D {
    bars.iter()
        .fold(RModule1D::zero(crit.clone()).unwrap(), |acc, b| {
            acc.direct_sum(&interval_module_on(b, crit.clone()).unwrap())
                .unwrap()
        })
}

/// Bars from the rank inclusion-exclusion oracle, with decorations.
fn oracle_bars(m: &RModule1D) -> Vec<Bar> {
    let mut out: Vec<Bar> = interval_multiplicities(m)
        .into_iter()
        .map(|(s, t, k)| Bar {
            birth: m.birth_at(s),
            death: m.death_at(t),
            multiplicity: k,
        })
        .collect();
    out.sort();
    out
}

#[test]
fn degree_orders() {
    assert!(BirthDegreeR::NegInf < closed_b(0));
    assert!(closed_b(0) < open_b(0));
    assert!(open_b(0) < closed_b(1));
    assert!(closed_d(0) < open_d(1));
    assert!(open_d(1) < closed_d(1));
    assert!(closed_d(1) < DeathDegreeR::PosInf);
}

#[test]
fn interval_module_cases() {
    let m = interval_module(&bar(closed_b(0), open_d(1))).unwrap();
    assert_eq!(m.dims(), &[0, 1, 1, 0, 0]);
    let all = interval_module(&bar(BirthDegreeR::NegInf, DeathDegreeR::PosInf)).unwrap();
    assert_eq!(all.dims(), &[1]);
    let point = interval_module(&bar(closed_b(0), closed_d(0))).unwrap();
    assert_eq!(point.dims(), &[0, 1, 0]);
    assert!(matches!(
        interval_module(&bar(open_b(0), closed_d(0))),
        Err(Error::EmptyInterval(_))
    ));
    assert_eq!(bar(open_b(0), closed_d(1)).to_string(), "(0, 1]");
    assert_eq!(
        bar(BirthDegreeR::NegInf, DeathDegreeR::PosInf).to_string(),
        "(-inf, inf)"
    );
}

#[test]
fn top_space_cases() {
    let tops = |b: Bar| -> Vec<(BirthDegreeR, usize)> {
        top_spaces(&interval_module(&b).unwrap())
            .into_iter()
            .map(|t| (t.birth, t.projection.rows()))
            .collect()
    };
    assert_eq!(tops(bar(closed_b(0), open_d(1))), vec![(closed_b(0), 1)]);
    assert_eq!(tops(bar(open_b(0), closed_d(1))), vec![(open_b(0), 1)]);
    assert_eq!(
        tops(bar(BirthDegreeR::NegInf, closed_d(1))),
        vec![(BirthDegreeR::NegInf, 1)]
    );
}

#[test]
fn graded_socle_cases() {
    let single = interval_module(&bar(closed_b(0), open_d(1))).unwrap();
    assert_eq!(
        gr_soc_spaces(&single),
        vec![GradedSocle {
            death: open_d(1),
            birth: closed_b(0),
            dim: 1
        }]
    );
    let crit = vec![rat(0), rat(1), rat(2)];
    let two = sum_on(
        &[bar(closed_b(0), open_d(2)), bar(closed_b(1), open_d(2))],
        crit,
    );
    assert_eq!(
        gr_soc_spaces(&two),
        vec![
            GradedSocle {
                death: open_d(2),
                birth: closed_b(0),
                dim: 1
            },
            GradedSocle {
                death: open_d(2),
                birth: closed_b(1),
                dim: 1
            },
        ]
    );
    let t = two.death_cell(&open_d(2)).unwrap();
    let filtration: Vec<usize> = (0..=t)
        .map(|s| extant_socle(&two, Some(s), t).cols())
        .collect();
    assert_eq!(filtration, vec![0, 1, 1, 2, 2]);
    let infinite = interval_module(&bar(closed_b(0), DeathDegreeR::PosInf)).unwrap();
    let deaths: Vec<DeathDegreeR> = gr_soc_spaces(&infinite)
        .into_iter()
        .map(|g| g.death)
        .collect();
    assert_eq!(deaths, vec![DeathDegreeR::PosInf]);
}

#[test]
fn elder_projection_cases() {
    let single = interval_module(&bar(closed_b(0), open_d(1))).unwrap();
    assert_eq!(
        elder_projection(&single, &closed_b(0), &open_d(1))
            .unwrap()
            .matrix,
        RatMatrix::identity(1)
    );
    let crit = vec![rat(0), rat(1), rat(2)];
    let two = sum_on(
        &[bar(closed_b(0), open_d(2)), bar(closed_b(1), open_d(2))],
        crit,
    );
    let p = elder_projection(&two, &closed_b(1), &open_d(2)).unwrap();
    assert_eq!((p.matrix.rows(), p.matrix.cols()), (1, 1));
    assert_eq!(p.matrix.rank(), 1);
    let none = elder_projection(&two, &open_b(0), &open_d(2)).unwrap();
    assert_eq!((none.matrix.rows(), none.matrix.cols()), (0, 0));
}

#[test]
fn elder_rule_on_merging_bars() {
    // Two classes born at 0 and 1 merge at 2: the younger one dies at 2.
    let crit = vec![rat(0), rat(1), rat(2)];
    let dims = vec![0, 1, 1, 2, 2, 1, 1];
    let id = RatMatrix::identity(1);
    let incl = RatMatrix::from_i64_rows(&[vec![1], vec![0]]);
    let merge = RatMatrix::from_i64_rows(&[vec![1, 1]]);
    let maps = vec![
        RatMatrix::zeros(1, 0),
        id.clone(),
        incl,
        RatMatrix::identity(2),
        merge,
        id,
    ];
    let m = RModule1D::new(crit, dims, maps).unwrap();
    let code = functorial_barcode(&m).unwrap();
    assert_eq!(
        code.bars,
        vec![
            bar(closed_b(0), DeathDegreeR::PosInf),
            bar(closed_b(1), open_d(2))
        ]
    );
    assert_eq!(code.bars, oracle_bars(&m));
}

#[test]
fn functorial_barcode_cases() {
    let crit = vec![rat(-1), rat(0), rat(1), rat(2)];
    let bars = vec![
        bar(BirthDegreeR::NegInf, closed_d(0)),
        bar(closed_b(0), open_d(1)),
        bar(open_b(1), closed_d(2)),
    ];
    let m = sum_on(&bars, crit.clone());
    let mut expected = bars.clone();
    expected.sort();
    assert_eq!(functorial_barcode(&m).unwrap().bars, expected);
    assert!(functorial_barcode(&RModule1D::zero(crit).unwrap())
        .unwrap()
        .bars
        .is_empty());
}

fn conservation(m: &RModule1D, code: &FunctorialBarcode) {
    for top in top_spaces(m) {
        let total: usize = code
            .bars
            .iter()
            .filter(|b| b.birth == top.birth)
            .map(|b| b.multiplicity)
            .sum();
        assert_eq!(total, top.projection.rows());
    }
    for t in 0..m.cells() {
        let death = m.death_at(t);
        let total: usize = code
            .bars
            .iter()
            .filter(|b| b.death == death)
            .map(|b| b.multiplicity)
            .sum();
        assert_eq!(total, m.socle_basis(t).cols());
    }
    let gr = gr_soc_spaces(m);
    for b in &code.bars {
        let g = gr
            .iter()
            .find(|g| g.birth == b.birth && g.death == b.death)
            .expect("bar has a graded socle");
        assert_eq!(g.dim, b.multiplicity);
    }
}

#[test]
fn random_modules_match_oracle() {
    let mut r = rng(19);
    for _ in 0..200 {
        let m = random_rmodule(&mut r, 5, 3);
        let code = functorial_barcode(&m).unwrap();
        assert_eq!(code.bars, oracle_bars(&m), "module {m:?}");
        conservation(&m, &code);
        for (beta, alpha, block) in &code.blocks {
            let rows = gr_soc_spaces(&m)
                .into_iter()
                .find(|g| &g.birth == beta && &g.death == alpha)
                .unwrap()
                .dim;
            assert_eq!(block.rank(), rows);
        }
    }
}
