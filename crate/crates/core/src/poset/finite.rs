use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::zn::{FdModule, LatticeBox};

/// A finite poset on `0..size` given by its full order relation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinitePoset {
    size: usize,
    leq: Vec<Vec<bool>>,
}

impl FinitePoset {
    /// Checks reflexivity, antisymmetry and transitivity.
    pub fn new(leq: Vec<Vec<bool>>) -> Result<FinitePoset> {
        let size = leq.len();
        if leq.iter().any(|row| row.len() != size) {
            return Err(Error::InvalidPoset("relation matrix is not square".into()));
        }
        for a in 0..size {
            if !leq[a][a] {
                return Err(Error::InvalidPoset(format!("{a} ≤ {a} fails")));
            }
            for b in 0..size {
                if a != b && leq[a][b] && leq[b][a] {
                    return Err(Error::InvalidPoset(format!(
                        "{a} and {b} violate antisymmetry"
                    )));
                }
                for c in 0..size {
                    if leq[a][b] && leq[b][c] && !leq[a][c] {
                        return Err(Error::InvalidPoset(format!(
                            "{a} ≤ {b} ≤ {c} but not {a} ≤ {c}"
                        )));
                    }
                }
            }
        }
        Ok(FinitePoset { size, leq })
    }

    /// The reflexive transitive closure of `pairs`, checked for antisymmetry.
    pub fn from_relation(size: usize, pairs: &[(usize, usize)]) -> Result<FinitePoset> {
        let mut leq = vec![vec![false; size]; size];
        for (a, row) in leq.iter_mut().enumerate() {
            row[a] = true;
        }
        for &(a, b) in pairs {
            if a >= size || b >= size {
                return Err(Error::InvalidPoset(format!(
                    "pair ({a}, {b}) outside 0..{size}"
                )));
            }
            leq[a][b] = true;
        }
        for k in 0..size {
            for a in 0..size {
                if leq[a][k] {
                    for b in 0..size {
                        if leq[k][b] {
                            leq[a][b] = true;
                        }
                    }
                }
            }
        }
        FinitePoset::new(leq)
    }

    pub fn chain(size: usize) -> FinitePoset {
        FinitePoset {
            size,
            leq: (0..size)
                .map(|a| (0..size).map(|b| a <= b).collect())
                .collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn relation(&self) -> &[Vec<bool>] {
        &self.leq
    }

    /// Covering pairs `a ⋖ b`, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.size {
            for b in 0..self.size {
                if a != b
                    && self.leq[a][b]
                    && !(0..self.size).any(|c| c != a && c != b && self.leq[a][c] && self.leq[c][b])
                {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// A linear extension: elements sorted by the size of their principal downset.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.size).collect();
        order.sort_by_key(|&b| ((0..self.size).filter(|&a| self.leq[a][b]).count(), b));
        order
    }
}

/// The source of a poset morphism: a finite poset or the points of a box in Z^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    Poset(FinitePoset),
    Grid(LatticeBox),
}

impl Domain {
    pub fn size(&self) -> usize {
        match self {
            Domain::Poset(p) => p.size(),
            Domain::Grid(bx) => bx.len(),
        }
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        match self {
            Domain::Poset(p) => p.leq(a, b),
            Domain::Grid(bx) => crate::zn::leq(&bx.point(a), &bx.point(b)),
        }
    }

    /// Pairs whose reflexive transitive closure is the order: covers of a
    /// poset, unit steps of a box.
    pub fn generating_pairs(&self) -> Vec<(usize, usize)> {
        match self {
            Domain::Poset(p) => p.covers(),
            Domain::Grid(bx) => (0..bx.len())
                .flat_map(|idx| {
                    (0..bx.n()).filter_map(move |axis| bx.step_index(idx, axis).map(|j| (idx, j)))
                })
                .collect(),
        }
    }

    fn describe(&self, a: usize) -> String {
        match self {
            Domain::Poset(_) => a.to_string(),
            Domain::Grid(bx) => format!("{:?}", bx.point(a)),
        }
    }
}

/// An order-preserving map from a domain to a finite poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetMorphism {
    source: Domain,
    target: FinitePoset,
    map: Vec<usize>,
}

impl PosetMorphism {
    pub fn new(source: Domain, target: FinitePoset, map: Vec<usize>) -> Result<PosetMorphism> {
        if map.len() != source.size() {
            return Err(Error::ShapeMismatch(format!(
                "{} images for {} elements",
                map.len(),
                source.size()
            )));
        }
        if let Some(&t) = map.iter().find(|&&t| t >= target.size()) {
            return Err(Error::ShapeMismatch(format!(
                "image {t} outside a target of size {}",
                target.size()
            )));
        }
        for (a, b) in source.generating_pairs() {
            if !target.leq(map[a], map[b]) {
                return Err(Error::NotOrderPreserving(format!(
                    "{} ≤ {} but {} ≰ {}",
                    source.describe(a),
                    source.describe(b),
                    map[a],
                    map[b]
                )));
            }
        }
        Ok(PosetMorphism {
            source,
            target,
            map,
        })
    }

    pub fn identity(p: &FinitePoset) -> PosetMorphism {
        PosetMorphism {
            source: Domain::Poset(p.clone()),
            target: p.clone(),
            map: (0..p.size()).collect(),
        }
    }

    pub fn source(&self) -> &Domain {
        &self.source
    }

    pub fn target(&self) -> &FinitePoset {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    /// Fibers of the morphism, indexed by target element.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.target.size()];
        for (a, &t) in self.map.iter().enumerate() {
            out[t].push(a);
        }
        out
    }
}

/// A module over a finite poset, stored by its maps on covering pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetModule {
    poset: FinitePoset,
    dims: Vec<usize>,
    maps: BTreeMap<(usize, usize), RatMatrix>,
}

impl PosetModule {
    /// Checks that every cover carries a map of the right shape and that all
    /// composites of cover maps between comparable elements agree.
    pub fn new(
        poset: FinitePoset,
        dims: Vec<usize>,
        maps: BTreeMap<(usize, usize), RatMatrix>,
    ) -> Result<PosetModule> {
        if dims.len() != poset.size() {
            return Err(Error::ShapeMismatch(format!(
                "{} dims for {} elements",
                dims.len(),
                poset.size()
            )));
        }
        let covers = poset.covers();
        if maps.len() != covers.len() || covers.iter().any(|c| !maps.contains_key(c)) {
            return Err(Error::ShapeMismatch(
                "maps must be given exactly on covering pairs".into(),
            ));
        }
        for (&(a, b), m) in &maps {
            if m.rows() != dims[b] || m.cols() != dims[a] {
                return Err(Error::ShapeMismatch(format!(
                    "map {a} ⋖ {b} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    dims[b],
                    dims[a]
                )));
            }
        }
        let module = PosetModule { poset, dims, maps };
        match module.first_conflict() {
            Some((a, b)) => Err(Error::InvalidModule(format!(
                "paths from {a} to {b} give different maps"
            ))),
            None => Ok(module),
        }
    }

    /// Shape-checked by the caller; commutativity is left to [`PosetModule::first_conflict`].
    pub(crate) fn unchecked(
        poset: FinitePoset,
        dims: Vec<usize>,
        maps: BTreeMap<(usize, usize), RatMatrix>,
    ) -> Self {
        PosetModule { poset, dims, maps }
    }

    /// A pair `a ≤ b` joined by two paths of cover maps with different composites.
    pub(crate) fn first_conflict(&self) -> Option<(usize, usize)> {
        (0..self.poset.size()).find_map(|a| self.maps_from(a).err().map(|b| (a, b)))
    }

    /// The constant module of dimension `dim` with identity maps.
    pub fn constant(poset: &FinitePoset, dim: usize) -> PosetModule {
        let maps = poset
            .covers()
            .into_iter()
            .map(|c| (c, RatMatrix::identity(dim)))
            .collect();
        PosetModule {
            poset: poset.clone(),
            dims: vec![dim; poset.size()],
            maps,
        }
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn cover_maps(&self) -> &BTreeMap<(usize, usize), RatMatrix> {
        &self.maps
    }

    /// Maps from `a` to every element above it, every path checked to agree;
    /// on conflict, the first element reached by disagreeing paths.
    fn maps_from(&self, a: usize) -> std::result::Result<Vec<Option<RatMatrix>>, usize> {
        let p = &self.poset;
        let mut out: Vec<Option<RatMatrix>> = vec![None; p.size()];
        out[a] = Some(RatMatrix::identity(self.dims[a]));
        for b in p.linear_extension() {
            if b == a || !p.leq(a, b) {
                continue;
            }
            let mut value: Option<RatMatrix> = None;
            for (&(r, q), m) in &self.maps {
                if q != b || !p.leq(a, r) {
                    continue;
                }
                let via = m.mul(
                    out[r]
                        .as_ref()
                        .expect("r precedes b in the linear extension"),
                );
                match &value {
                    None => value = Some(via),
                    Some(v) if *v == via => {}
                    Some(_) => return Err(b),
                }
            }
            out[b] = value;
        }
        Ok(out)
    }

    /// The map H_a → H_b for `a ≤ b`.
    pub fn map_between(&self, a: usize, b: usize) -> Result<RatMatrix> {
        if !self.poset.leq(a, b) {
            return Err(Error::NotComparable(vec![a as i64], vec![b as i64]));
        }
        // Walk down from b through covers that stay above a.
        let mut acc = RatMatrix::identity(self.dims[b]);
        let mut cur = b;
        while cur != a {
            let (&(r, _), m) = self
                .maps
                .iter()
                .find(|(&(r, q), _)| q == cur && self.poset.leq(a, r))
                .expect("a < cur has a cover below cur above a");
            acc = acc.mul(m);
            cur = r;
        }
        Ok(acc)
    }
}

/// The pullback of a poset module along a morphism from a poset or a box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pullback {
    Poset(PosetModule),
    Grid(FdModule),
}

pub fn pullback_module(pi: &PosetMorphism, h: &PosetModule) -> Result<Pullback> {
    if pi.target() != h.poset() {
        return Err(Error::TargetMismatch(
            "morphism target differs from the module's poset".into(),
        ));
    }
    let between = |a: usize, b: usize| {
        h.map_between(pi.apply(a), pi.apply(b))
            .expect("order preserving")
    };
    match pi.source() {
        Domain::Poset(p) => {
            let dims = (0..p.size()).map(|a| h.dims()[pi.apply(a)]).collect();
            let maps = p
                .covers()
                .into_iter()
                .map(|(a, b)| ((a, b), between(a, b)))
                .collect();
            Ok(Pullback::Poset(PosetModule::new(p.clone(), dims, maps)?))
        }
        Domain::Grid(bx) => {
            let m = FdModule::from_fn(
                bx.clone(),
                |x| h.dims()[pi.apply(bx.index(x).expect("in box"))],
                |x, axis| {
                    let a = bx.index(x).expect("in box");
                    between(a, bx.step_index(a, axis).expect("step inside the box"))
                },
            )?;
            Ok(Pullback::Grid(m))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn diamond() -> FinitePoset {
        FinitePoset::from_relation(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn poset_axioms_are_checked() {
        assert!(FinitePoset::new(vec![vec![true, true], vec![true, true]]).is_err());
        assert!(FinitePoset::new(vec![vec![false]]).is_err());
        assert!(FinitePoset::new(vec![
            vec![true, true, false],
            vec![false, true, true],
            vec![false, false, true]
        ])
        .is_err());
        assert!(FinitePoset::from_relation(2, &[(0, 1), (1, 0)]).is_err());
        let d = diamond();
        assert!(d.leq(0, 3));
        assert_eq!(d.covers(), vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn morphism_must_preserve_order() {
        let c = FinitePoset::chain(2);
        assert!(matches!(
            PosetMorphism::new(Domain::Poset(c.clone()), c.clone(), vec![1, 0]),
            Err(Error::NotOrderPreserving(_))
        ));
        let bx = LatticeBox::new(vec![0], vec![1]).unwrap();
        assert!(PosetMorphism::new(Domain::Grid(bx), c, vec![0, 1]).is_ok());
    }

    #[test]
    fn non_commuting_diamond_is_rejected() {
        let d = diamond();
        let mut maps: BTreeMap<_, _> = d
            .covers()
            .into_iter()
            .map(|c| (c, RatMatrix::identity(1)))
            .collect();
        assert!(PosetModule::new(d.clone(), vec![1; 4], maps.clone()).is_ok());
        maps.insert((2, 3), RatMatrix::from_i64_rows(&[vec![2]]));
        assert!(matches!(
            PosetModule::new(d, vec![1; 4], maps),
            Err(Error::InvalidModule(_))
        ));
    }

    #[test]
    fn map_between_composes_covers() {
        let c = FinitePoset::chain(3);
        let maps = [((0, 1), 2), ((1, 2), 3)]
            .into_iter()
            .map(|(k, v)| (k, RatMatrix::from_i64_rows(&[vec![v]])))
            .collect();
        let h = PosetModule::new(c, vec![1; 3], maps).unwrap();
        assert_eq!(h.map_between(0, 2).unwrap().get(0, 0), &rat(6));
        assert!(h.map_between(2, 0).is_err());
    }

    #[test]
    fn pullback_along_identity_is_the_module() {
        let d = diamond();
        let h = PosetModule::constant(&d, 2);
        let pulled = pullback_module(&PosetMorphism::identity(&d), &h).unwrap();
        assert_eq!(pulled, Pullback::Poset(h));
    }

    #[test]
    fn pullback_of_one_point_module_is_constant() {
        let one = FinitePoset::chain(1);
        let bx = LatticeBox::new(vec![-1, -1], vec![1, 1]).unwrap();
        let pi =
            PosetMorphism::new(Domain::Grid(bx.clone()), one.clone(), vec![0; bx.len()]).unwrap();
        let pulled = pullback_module(&pi, &PosetModule::constant(&one, 1)).unwrap();
        assert_eq!(pulled, Pullback::Grid(FdModule::indicator(bx, |_| true)));
        let other = FinitePoset::chain(2);
        assert!(matches!(
            pullback_module(&pi, &PosetModule::constant(&other, 1)),
            Err(Error::TargetMismatch(_))
        ));
    }
}
