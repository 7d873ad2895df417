//! JSON reading and writing for every input and output type. Rationals are
//! "p/q" strings, faces are 1-based axis lists, box points are keyed "x,y"
//! and steps "x,y:i" with a 1-based axis. Objects serialize with sorted keys.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::barcode1d::{Bar, BirthDegreeR, DeathDegreeR, RModule1D};
use crate::error::Error;
use crate::fringe::{MonomialMatrix, PosetMonomialMatrix};
use crate::linalg::{format_rat, parse_rat, Rat, RatMatrix};
use crate::poset::{Domain, DownsetZn, FinitePoset, Piece, PosetModule, PosetMorphism, UpsetZn};
use crate::qr::{BirthDegree, DeathDegree, QrCode};
use crate::zn::{Face, FdModule, LatticeBox, ModuleHom, Point};

/// Schema errors are malformed input; math errors come from the library
/// constructors once the input is well formed.
#[derive(Debug, Error)]
pub enum JsonError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Math(#[from] Error),
}

pub type JsonResult<T> = std::result::Result<T, JsonError>;

fn schema<T>(msg: impl Into<String>) -> JsonResult<T> {
    Err(JsonError::Schema(msg.into()))
}

pub fn field<'a>(v: &'a Value, key: &str) -> JsonResult<&'a Value> {
    v.get(key)
        .ok_or_else(|| JsonError::Schema(format!("missing field \"{key}\"")))
}

fn array<'a>(v: &'a Value, what: &str) -> JsonResult<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| JsonError::Schema(format!("{what} must be an array")))
}

fn object<'a>(v: &'a Value, what: &str) -> JsonResult<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| JsonError::Schema(format!("{what} must be an object")))
}

fn int(v: &Value, what: &str) -> JsonResult<i64> {
    v.as_i64()
        .ok_or_else(|| JsonError::Schema(format!("{what} must be an integer")))
}

fn count(v: &Value, what: &str) -> JsonResult<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| JsonError::Schema(format!("{what} must be a nonnegative integer")))
}

pub fn rat_to_json(r: &Rat) -> Value {
    Value::String(format_rat(r))
}

/// Accepts "p/q" strings and integers.
pub fn rat_from_json(v: &Value) -> JsonResult<Rat> {
    match v {
        Value::String(s) => {
            parse_rat(s).ok_or_else(|| JsonError::Schema(format!("bad rational \"{s}\"")))
        }
        Value::Number(n) => match n.as_i64() {
            Some(k) => Ok(Rat::from_integer(k.into())),
            None => schema(format!(
                "rational {n} must be an integer or a \"p/q\" string"
            )),
        },
        _ => schema("rationals are \"p/q\" strings"),
    }
}

pub fn matrix_to_json(m: &RatMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(rat_to_json).collect()))
            .collect(),
    )
}

/// Reads a list of rows, checking the expected shape.
/// `[]` stands for any matrix without entries.
pub fn matrix_from_json(v: &Value, rows: usize, cols: usize) -> JsonResult<RatMatrix> {
    if (rows == 0 || cols == 0) && v.as_array().is_some_and(|a| a.is_empty()) {
        return Ok(RatMatrix::zeros(rows, cols));
    }
    let m = matrix_any(v, Some(cols))?;
    if m.rows() != rows || m.cols() != cols {
        return Err(Error::ShapeMismatch(format!(
            "matrix is {}x{}, expected {rows}x{cols}",
            m.rows(),
            m.cols()
        ))
        .into());
    }
    Ok(m)
}

/// Reads a list of rows; `cols` fixes the width of a matrix with no rows.
pub fn matrix_any(v: &Value, cols: Option<usize>) -> JsonResult<RatMatrix> {
    let rows = array(v, "matrix")?;
    let mut out: Vec<Vec<Rat>> = Vec::with_capacity(rows.len());
    for r in rows {
        out.push(
            array(r, "matrix row")?
                .iter()
                .map(rat_from_json)
                .collect::<JsonResult<_>>()?,
        );
    }
    let width = out.first().map(|r| r.len()).or(cols).unwrap_or(0);
    if out.iter().any(|r| r.len() != width) {
        return schema("matrix rows have different lengths");
    }
    Ok(RatMatrix::from_rows(out, width)?)
}

pub fn point_to_json(p: &[i64]) -> Value {
    json!(p)
}

pub fn point_from_json(v: &Value) -> JsonResult<Point> {
    array(v, "point")?
        .iter()
        .map(|x| int(x, "coordinate"))
        .collect()
}

pub fn point_key(p: &[i64]) -> String {
    p.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_key_point(s: &str) -> JsonResult<Point> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| JsonError::Schema(format!("bad point key \"{s}\"")))
        })
        .collect()
}

pub fn face_to_json(f: &Face) -> Value {
    json!(f.one_based())
}

pub fn face_from_json(v: &Value, n: usize) -> JsonResult<Face> {
    let axes: Vec<usize> = array(v, "face")?
        .iter()
        .map(|x| count(x, "face axis"))
        .collect::<JsonResult<_>>()?;
    Ok(Face::from_one_based(n, &axes)?)
}

pub fn box_to_json(bx: &LatticeBox) -> Value {
    json!({"lo": bx.lo(), "hi": bx.hi()})
}

pub fn box_from_json(v: &Value) -> JsonResult<LatticeBox> {
    let lo = point_from_json(field(v, "lo")?)?;
    let hi = point_from_json(field(v, "hi")?)?;
    Ok(LatticeBox::new(lo, hi)?)
}

/// {"n", "box", "dims": {"x,y": d}, "steps": {"x,y:i": rows}}; zero dims
/// and steps between nonzero spaces are the only entries written.
pub fn module_to_json(m: &FdModule) -> Value {
    let bx = m.lattice_box();
    let mut dims = Map::new();
    let mut steps = Map::new();
    for idx in 0..bx.len() {
        let p = bx.point(idx);
        let d = m.dim_at_index(idx);
        if d == 0 {
            continue;
        }
        dims.insert(point_key(&p), json!(d));
        for axis in 0..bx.n() {
            if let Some(j) = bx.step_index(idx, axis) {
                if m.dim_at_index(j) > 0 {
                    steps.insert(
                        format!("{}:{}", point_key(&p), axis + 1),
                        matrix_to_json(&m.step(idx, axis)),
                    );
                }
            }
        }
    }
    json!({"n": m.n(), "box": box_to_json(bx), "dims": dims, "steps": steps})
}

/// Missing dims are 0; missing steps are zero maps. Checks commutativity.
pub fn module_from_json(v: &Value) -> JsonResult<FdModule> {
    let bx = box_from_json(field(v, "box")?)?;
    if let Some(n) = v.get("n") {
        if count(n, "n")? != bx.n() {
            return Err(Error::DimensionMismatch(format!(
                "n = {n} but the box lives in Z^{}",
                bx.n()
            ))
            .into());
        }
    }
    let mut dims = vec![0; bx.len()];
    if let Some(d) = v.get("dims") {
        for (k, x) in object(d, "dims")? {
            let p = parse_key_point(k)?;
            let idx = bx
                .index(&p)
                .ok_or_else(|| JsonError::Schema(format!("dims key \"{k}\" is outside the box")))?;
            dims[idx] = count(x, "dimension")?;
        }
    }
    let mut given: BTreeMap<(usize, usize), &Value> = BTreeMap::new();
    if let Some(s) = v.get("steps") {
        for (k, x) in object(s, "steps")? {
            let (pk, ak) = k
                .split_once(':')
                .ok_or_else(|| JsonError::Schema(format!("step key \"{k}\" needs \":axis\"")))?;
            let p = parse_key_point(pk)?;
            let axis: usize = ak
                .trim()
                .parse()
                .map_err(|_| JsonError::Schema(format!("bad axis in \"{k}\"")))?;
            if axis == 0 || axis > bx.n() {
                return schema(format!("axis in \"{k}\" must be between 1 and {}", bx.n()));
            }
            let idx = bx
                .index(&p)
                .ok_or_else(|| JsonError::Schema(format!("step key \"{k}\" is outside the box")))?;
            if bx.step_index(idx, axis - 1).is_none() {
                return schema(format!("step \"{k}\" leaves the box"));
            }
            given.insert((idx, axis - 1), x);
        }
    }
    let mut steps = Vec::with_capacity(bx.len());
    for idx in 0..bx.len() {
        let mut row = Vec::with_capacity(bx.n());
        for axis in 0..bx.n() {
            row.push(match bx.step_index(idx, axis) {
                None => None,
                Some(j) => Some(match given.get(&(idx, axis)) {
                    Some(x) => matrix_from_json(x, dims[j], dims[idx])?,
                    None => RatMatrix::zeros(dims[j], dims[idx]),
                }),
            });
        }
        steps.push(row);
    }
    let m = FdModule::new(bx, dims, steps)?;
    m.validate()?;
    Ok(m)
}

/// {"source": module, "target": module, "maps": {"x,y": rows}} on a common box.
pub fn hom_to_json(h: &ModuleHom) -> Value {
    let bx = h.source().lattice_box();
    let mut maps = Map::new();
    for (idx, f) in h.maps().iter().enumerate() {
        if f.rows() > 0 && f.cols() > 0 {
            maps.insert(point_key(&bx.point(idx)), matrix_to_json(f));
        }
    }
    json!({"source": module_to_json(h.source()), "target": module_to_json(h.target()), "maps": maps})
}

pub fn hom_from_json(v: &Value) -> JsonResult<ModuleHom> {
    let source = module_from_json(field(v, "source")?)?;
    let target = module_from_json(field(v, "target")?)?;
    let bx = source.lattice_box().clone();
    if &bx != target.lattice_box() {
        return Err(Error::ShapeMismatch("source and target need the same box".into()).into());
    }
    let mut maps: Vec<RatMatrix> = (0..bx.len())
        .map(|i| RatMatrix::zeros(target.dim_at_index(i), source.dim_at_index(i)))
        .collect();
    if let Some(ms) = v.get("maps") {
        for (k, x) in object(ms, "maps")? {
            let idx = bx
                .index(&parse_key_point(k)?)
                .ok_or_else(|| JsonError::Schema(format!("map key \"{k}\" is outside the box")))?;
            maps[idx] = matrix_from_json(x, target.dim_at_index(idx), source.dim_at_index(idx))?;
        }
    }
    Ok(ModuleHom::new(source, target, maps)?)
}

pub fn piece_to_json(p: &Piece) -> Value {
    json!({"corner": p.corner, "face": face_to_json(&p.face)})
}

fn pieces_from_json(v: &Value, n: usize) -> JsonResult<Vec<Piece>> {
    array(v, "pieces")?
        .iter()
        .map(|p| {
            let corner = point_from_json(field(p, "corner")?)?;
            if corner.len() != n {
                return Err(
                    Error::DimensionMismatch(format!("corner {corner:?} is not in Z^{n}")).into(),
                );
            }
            let face = match p.get("face") {
                Some(f) => face_from_json(f, n)?,
                None => Face::empty(n),
            };
            Ok(Piece::new(corner, face))
        })
        .collect()
}

pub fn pieces_to_json(pieces: &[Piece]) -> Value {
    Value::Array(pieces.iter().map(piece_to_json).collect())
}

pub fn upset_to_json(u: &UpsetZn) -> Value {
    json!({"n": u.n(), "pieces": pieces_to_json(u.pieces())})
}

pub fn downset_to_json(d: &DownsetZn) -> Value {
    json!({"n": d.n(), "pieces": pieces_to_json(d.pieces())})
}

/// `n` may come from the enclosing object.
fn set_dimension(v: &Value, outer: Option<usize>) -> JsonResult<usize> {
    match (v.get("n"), outer) {
        (Some(n), Some(o)) if count(n, "n")? != o => Err(Error::DimensionMismatch(format!(
            "label in Z^{n} inside a matrix over Z^{o}"
        ))
        .into()),
        (Some(n), _) => count(n, "n"),
        (None, Some(o)) => Ok(o),
        (None, None) => match field(v, "pieces")?.get(0) {
            Some(p) => Ok(array(field(p, "corner")?, "corner")?.len()),
            None => schema("an empty set needs \"n\""),
        },
    }
}

pub fn upset_from_json(v: &Value, outer: Option<usize>) -> JsonResult<UpsetZn> {
    let n = set_dimension(v, outer)?;
    Ok(UpsetZn::new(n, pieces_from_json(field(v, "pieces")?, n)?)?)
}

pub fn downset_from_json(v: &Value, outer: Option<usize>) -> JsonResult<DownsetZn> {
    let n = set_dimension(v, outer)?;
    Ok(DownsetZn::new(
        n,
        pieces_from_json(field(v, "pieces")?, n)?,
    )?)
}

pub fn fringe_to_json(mm: &MonomialMatrix) -> Value {
    json!({
        "n": mm.n(),
        "rows": mm.rows().iter().map(upset_to_json).collect::<Vec<_>>(),
        "cols": mm.cols().iter().map(downset_to_json).collect::<Vec<_>>(),
        "phi": matrix_to_json(mm.phi()),
    })
}

pub fn fringe_from_json(v: &Value) -> JsonResult<MonomialMatrix> {
    let rows_v = array(field(v, "rows")?, "rows")?;
    let cols_v = array(field(v, "cols")?, "cols")?;
    let n = match v.get("n") {
        Some(n) => count(n, "n")?,
        None => match rows_v.first().or(cols_v.first()) {
            Some(l) => set_dimension(l, None)?,
            None => 0,
        },
    };
    let rows = rows_v
        .iter()
        .map(|u| upset_from_json(u, Some(n)))
        .collect::<JsonResult<Vec<_>>>()?;
    let cols = cols_v
        .iter()
        .map(|d| downset_from_json(d, Some(n)))
        .collect::<JsonResult<Vec<_>>>()?;
    let phi = matrix_from_json(field(v, "phi")?, rows.len(), cols.len())?;
    Ok(MonomialMatrix::new(n, rows, cols, phi)?)
}

/// {"size", "leq": covering pairs}; reading accepts any generating pairs.
pub fn poset_to_json(p: &FinitePoset) -> Value {
    json!({"size": p.size(), "leq": p.covers().iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>()})
}

pub fn poset_from_json(v: &Value) -> JsonResult<FinitePoset> {
    let size = count(field(v, "size")?, "size")?;
    let mut pairs = Vec::new();
    for pr in array(field(v, "leq")?, "leq")? {
        let pr = array(pr, "leq pair")?;
        if pr.len() != 2 {
            return schema("leq pairs have two entries");
        }
        let (a, b) = (count(&pr[0], "element")?, count(&pr[1], "element")?);
        if a >= size || b >= size {
            return Err(Error::InvalidPoset(format!("pair ({a}, {b}) leaves 0..{size}")).into());
        }
        pairs.push((a, b));
    }
    Ok(FinitePoset::from_relation(size, &pairs)?)
}

fn cover_maps_to_json(h: &PosetModule) -> Value {
    let mut maps = Map::new();
    for (&(a, b), f) in h.cover_maps() {
        maps.insert(format!("{a},{b}"), matrix_to_json(f));
    }
    Value::Object(maps)
}

pub fn poset_module_to_json(h: &PosetModule) -> Value {
    json!({"poset": poset_to_json(h.poset()), "dims": h.dims(), "maps": cover_maps_to_json(h)})
}

fn poset_module_parts(v: &Value, poset: FinitePoset) -> JsonResult<PosetModule> {
    let dims: Vec<usize> = array(field(v, "dims")?, "dims")?
        .iter()
        .map(|d| count(d, "dimension"))
        .collect::<JsonResult<_>>()?;
    if dims.len() != poset.size() {
        return Err(Error::ShapeMismatch(format!(
            "{} dims for {} elements",
            dims.len(),
            poset.size()
        ))
        .into());
    }
    let given = match v.get("maps") {
        Some(m) => object(m, "maps")?.clone(),
        None => Map::new(),
    };
    let mut maps = BTreeMap::new();
    for (a, b) in poset.covers() {
        let f = match given.get(&format!("{a},{b}")) {
            Some(x) => matrix_from_json(x, dims[b], dims[a])?,
            None => RatMatrix::zeros(dims[b], dims[a]),
        };
        maps.insert((a, b), f);
    }
    for k in given.keys() {
        let pr = parse_key_point(k)?;
        if pr.len() != 2
            || pr[0] < 0
            || pr[1] < 0
            || !maps.contains_key(&(pr[0] as usize, pr[1] as usize))
        {
            return schema(format!("map key \"{k}\" is not a covering pair"));
        }
    }
    Ok(PosetModule::new(poset, dims, maps)?)
}

pub fn poset_module_from_json(v: &Value) -> JsonResult<PosetModule> {
    let poset = poset_from_json(field(v, "poset")?)?;
    poset_module_parts(v, poset)
}

fn domain_to_json(d: &Domain) -> Value {
    match d {
        Domain::Grid(bx) => json!({"box": box_to_json(bx)}),
        Domain::Poset(p) => json!({"poset": poset_to_json(p)}),
    }
}

fn domain_from_json(v: &Value) -> JsonResult<Domain> {
    if let Some(b) = v.get("box") {
        Ok(Domain::Grid(box_from_json(b)?))
    } else if let Some(p) = v.get("poset") {
        Ok(Domain::Poset(poset_from_json(p)?))
    } else {
        schema("a domain is {\"box\": ...} or {\"poset\": ...}")
    }
}

/// Grid sources key the map by "x,y"; poset sources list targets in order.
pub fn morphism_to_json(pi: &PosetMorphism) -> Value {
    let map = match pi.source() {
        Domain::Grid(bx) => {
            let mut m = Map::new();
            for (idx, &t) in pi.map().iter().enumerate() {
                m.insert(point_key(&bx.point(idx)), json!(t));
            }
            Value::Object(m)
        }
        Domain::Poset(_) => json!(pi.map()),
    };
    json!({"source": domain_to_json(pi.source()), "target": poset_to_json(pi.target()), "map": map})
}

pub fn morphism_from_json(v: &Value) -> JsonResult<PosetMorphism> {
    let source = domain_from_json(field(v, "source")?)?;
    let target = poset_from_json(field(v, "target")?)?;
    let mv = field(v, "map")?;
    let map: Vec<usize> = match &source {
        Domain::Grid(bx) => {
            let obj = object(mv, "map")?;
            let mut out = vec![None; bx.len()];
            for (k, x) in obj {
                let idx = bx.index(&parse_key_point(k)?).ok_or_else(|| {
                    JsonError::Schema(format!("map key \"{k}\" is outside the box"))
                })?;
                out[idx] = Some(count(x, "target element")?);
            }
            out.into_iter()
                .enumerate()
                .map(|(i, t)| {
                    t.ok_or_else(|| JsonError::Schema(format!("map misses {:?}", bx.point(i))))
                })
                .collect::<JsonResult<_>>()?
        }
        Domain::Poset(_) => array(mv, "map")?
            .iter()
            .map(|x| count(x, "target element"))
            .collect::<JsonResult<_>>()?,
    };
    Ok(PosetMorphism::new(source, target, map)?)
}

/// An encoding: {"morphism": ..., "module": {"dims", "maps"}} over the target poset.
pub fn encoding_to_json(pi: &PosetMorphism, h: &PosetModule) -> Value {
    json!({"morphism": morphism_to_json(pi), "module": {"dims": h.dims(), "maps": cover_maps_to_json(h)}})
}

pub fn encoding_from_json(v: &Value) -> JsonResult<(PosetMorphism, PosetModule)> {
    let pi = morphism_from_json(field(v, "morphism")?)?;
    let h = poset_module_parts(field(v, "module")?, pi.target().clone())?;
    Ok((pi, h))
}

fn members_to_json(m: &[bool]) -> Value {
    json!(m
        .iter()
        .enumerate()
        .filter(|(_, b)| **b)
        .map(|(i, _)| i)
        .collect::<Vec<_>>())
}

fn members_from_json(v: &Value, size: usize) -> JsonResult<Vec<bool>> {
    let mut out = vec![false; size];
    for x in array(v, "element list")? {
        let i = count(x, "element")?;
        if i >= size {
            return Err(Error::ShapeMismatch(format!("element {i} is outside 0..{size}")).into());
        }
        out[i] = true;
    }
    Ok(out)
}

/// Upsets and downsets of a finite poset are listed by their elements.
pub fn poset_fringe_to_json(mm: &PosetMonomialMatrix) -> Value {
    json!({
        "rows": mm.rows.iter().map(|r| members_to_json(r)).collect::<Vec<_>>(),
        "cols": mm.cols.iter().map(|c| members_to_json(c)).collect::<Vec<_>>(),
        "phi": matrix_to_json(&mm.phi),
    })
}

pub fn poset_fringe_from_json(v: &Value, size: usize) -> JsonResult<PosetMonomialMatrix> {
    let rows: Vec<Vec<bool>> = array(field(v, "rows")?, "rows")?
        .iter()
        .map(|r| members_from_json(r, size))
        .collect::<JsonResult<_>>()?;
    let cols: Vec<Vec<bool>> = array(field(v, "cols")?, "cols")?
        .iter()
        .map(|c| members_from_json(c, size))
        .collect::<JsonResult<_>>()?;
    let phi = matrix_from_json(field(v, "phi")?, rows.len(), cols.len())?;
    Ok(PosetMonomialMatrix { rows, cols, phi })
}

pub fn birth_to_json(b: &BirthDegree) -> Value {
    json!({"face": face_to_json(&b.face), "coset": b.coset})
}

pub fn death_to_json(a: &DeathDegree) -> Value {
    json!({"face": face_to_json(&a.face), "coset": a.coset})
}

fn degree_parts(v: &Value, n: usize) -> JsonResult<(Face, Point)> {
    let face = face_from_json(field(v, "face")?, n)?;
    let coset = point_from_json(field(v, "coset")?)?;
    if coset.len() != n {
        return Err(Error::DimensionMismatch(format!("coset {coset:?} is not in Z^{n}")).into());
    }
    Ok((face, coset))
}

/// Births and deaths in (face bitmask, coset) order; only nonzero blocks
/// are written, indexed into those lists.
pub fn qr_to_json(qr: &QrCode) -> Value {
    let births: Vec<Value> = qr
        .births
        .iter()
        .map(|(b, d)| {
            let mut v = birth_to_json(b);
            v["dim"] = json!(d);
            v
        })
        .collect();
    let deaths: Vec<Value> = qr
        .deaths
        .iter()
        .map(|(a, d)| {
            let mut v = death_to_json(a);
            v["dim"] = json!(d);
            v
        })
        .collect();
    let mut blocks = Vec::new();
    for (bi, row) in qr.blocks.iter().enumerate() {
        for (ai, block) in row.iter().enumerate() {
            if !block.is_zero() {
                blocks.push(json!({"birth": bi, "death": ai, "matrix": matrix_to_json(block)}));
            }
        }
    }
    json!({"n": qr.n, "births": births, "deaths": deaths, "blocks": blocks})
}

pub fn qr_from_json(v: &Value) -> JsonResult<QrCode> {
    let n = count(field(v, "n")?, "n")?;
    let mut births = Vec::new();
    for b in array(field(v, "births")?, "births")? {
        let (face, coset) = degree_parts(b, n)?;
        births.push((
            BirthDegree::new(face, &coset),
            count(field(b, "dim")?, "dim")?,
        ));
    }
    let mut deaths = Vec::new();
    for a in array(field(v, "deaths")?, "deaths")? {
        let (face, coset) = degree_parts(a, n)?;
        deaths.push((
            DeathDegree::new(face, &coset),
            count(field(a, "dim")?, "dim")?,
        ));
    }
    let mut blocks: Vec<Vec<RatMatrix>> = births
        .iter()
        .map(|(_, g)| {
            deaths
                .iter()
                .map(|(_, s)| RatMatrix::zeros(*s, *g))
                .collect()
        })
        .collect();
    if let Some(bs) = v.get("blocks") {
        for blk in array(bs, "blocks")? {
            let bi = count(field(blk, "birth")?, "birth index")?;
            let ai = count(field(blk, "death")?, "death index")?;
            if bi >= births.len() || ai >= deaths.len() {
                return schema(format!("block ({bi}, {ai}) is out of range"));
            }
            blocks[bi][ai] = matrix_from_json(field(blk, "matrix")?, deaths[ai].1, births[bi].1)?;
        }
    }
    Ok(QrCode {
        n,
        births,
        deaths,
        blocks,
    })
}

pub fn rmodule_to_json(m: &RModule1D) -> Value {
    json!({
        "crit": m.crit().iter().map(rat_to_json).collect::<Vec<_>>(),
        "dims": m.dims(),
        "maps": m.maps().iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

/// Missing maps are zero.
pub fn rmodule_from_json(v: &Value) -> JsonResult<RModule1D> {
    let crit: Vec<Rat> = array(field(v, "crit")?, "crit")?
        .iter()
        .map(rat_from_json)
        .collect::<JsonResult<_>>()?;
    let dims: Vec<usize> = array(field(v, "dims")?, "dims")?
        .iter()
        .map(|d| count(d, "dimension"))
        .collect::<JsonResult<_>>()?;
    if dims.len() != 2 * crit.len() + 1 {
        return Err(Error::InvalidModule(format!(
            "{} cells for {} critical values",
            dims.len(),
            crit.len()
        ))
        .into());
    }
    let maps = match v.get("maps") {
        Some(ms) => {
            let ms = array(ms, "maps")?;
            if ms.len() != dims.len() - 1 {
                return Err(Error::InvalidModule(format!(
                    "{} maps for {} cells",
                    ms.len(),
                    dims.len()
                ))
                .into());
            }
            ms.iter()
                .enumerate()
                .map(|(k, x)| matrix_from_json(x, dims[k + 1], dims[k]))
                .collect::<JsonResult<_>>()?
        }
        None => (0..dims.len() - 1)
            .map(|k| RatMatrix::zeros(dims[k + 1], dims[k]))
            .collect(),
    };
    Ok(RModule1D::new(crit, dims, maps)?)
}

pub fn birth_r_to_json(b: &BirthDegreeR) -> Value {
    match b {
        BirthDegreeR::NegInf => json!({"v": "-inf", "k": "open"}),
        BirthDegreeR::Closed(v) => json!({"v": format_rat(v), "k": "closed"}),
        BirthDegreeR::Open(v) => json!({"v": format_rat(v), "k": "open"}),
    }
}

pub fn death_r_to_json(a: &DeathDegreeR) -> Value {
    match a {
        DeathDegreeR::PosInf => json!({"v": "inf", "k": "open"}),
        DeathDegreeR::Closed(v) => json!({"v": format_rat(v), "k": "closed"}),
        DeathDegreeR::Open(v) => json!({"v": format_rat(v), "k": "open"}),
    }
}

fn endpoint(v: &Value) -> JsonResult<(String, bool)> {
    let value = field(v, "v")?
        .as_str()
        .ok_or_else(|| JsonError::Schema("endpoint \"v\" is a string".into()))?;
    let closed = match field(v, "k")?.as_str() {
        Some("closed") => true,
        Some("open") => false,
        _ => return schema("endpoint \"k\" is \"closed\" or \"open\""),
    };
    Ok((value.to_string(), closed))
}

pub fn birth_r_from_json(v: &Value) -> JsonResult<BirthDegreeR> {
    match endpoint(v)? {
        (s, false) if s == "-inf" => Ok(BirthDegreeR::NegInf),
        (s, closed) => {
            let r = parse_rat(&s)
                .ok_or_else(|| JsonError::Schema(format!("bad birth value \"{s}\"")))?;
            Ok(if closed {
                BirthDegreeR::Closed(r)
            } else {
                BirthDegreeR::Open(r)
            })
        }
    }
}

pub fn death_r_from_json(v: &Value) -> JsonResult<DeathDegreeR> {
    match endpoint(v)? {
        (s, false) if s == "inf" => Ok(DeathDegreeR::PosInf),
        (s, closed) => {
            let r = parse_rat(&s)
                .ok_or_else(|| JsonError::Schema(format!("bad death value \"{s}\"")))?;
            Ok(if closed {
                DeathDegreeR::Closed(r)
            } else {
                DeathDegreeR::Open(r)
            })
        }
    }
}

pub fn bar_to_json(b: &Bar) -> Value {
    json!({"birth": birth_r_to_json(&b.birth), "death": death_r_to_json(&b.death), "mult": b.multiplicity})
}

pub fn bar_from_json(v: &Value) -> JsonResult<Bar> {
    let multiplicity = match v.get("mult") {
        Some(m) => count(m, "mult")?,
        None => 1,
    };
    Ok(Bar {
        birth: birth_r_from_json(field(v, "birth")?)?,
        death: death_r_from_json(field(v, "death")?)?,
        multiplicity,
    })
}

/// Parses a decorated interval such as "[0, 1)", "(-inf, 1/2]" or "(0, inf)".
pub fn parse_interval(s: &str) -> JsonResult<Bar> {
    let t = s.trim();
    let bad = || JsonError::Schema(format!("bad interval \"{s}\""));
    let (open_left, rest) = match t.chars().next() {
        Some('[') => (false, &t[1..]),
        Some('(') => (true, &t[1..]),
        _ => return Err(bad()),
    };
    let (closed_right, body) = match rest.chars().last() {
        Some(']') => (true, &rest[..rest.len() - 1]),
        Some(')') => (false, &rest[..rest.len() - 1]),
        _ => return Err(bad()),
    };
    let (l, r) = body.split_once(',').ok_or_else(bad)?;
    let (l, r) = (l.trim(), r.trim());
    let birth = match (l, open_left) {
        ("-inf", true) => BirthDegreeR::NegInf,
        (v, open) => {
            let x = parse_rat(v).ok_or_else(bad)?;
            if open {
                BirthDegreeR::Open(x)
            } else {
                BirthDegreeR::Closed(x)
            }
        }
    };
    let death = match (r, closed_right) {
        ("inf", false) => DeathDegreeR::PosInf,
        (v, closed) => {
            let x = parse_rat(v).ok_or_else(bad)?;
            if closed {
                DeathDegreeR::Closed(x)
            } else {
                DeathDegreeR::Open(x)
            }
        }
    };
    Ok(Bar {
        birth,
        death,
        multiplicity: 1,
    })
}

fn object_schema(required: &[&str], properties: Value) -> Value {
    json!({"type": "object", "required": required, "properties": properties})
}

/// JSON Schema documents for every input type.
pub fn schema_for(kind: &str) -> Option<Value> {
    let rat = json!({"type": ["string", "integer"], "description": "rational as \"p/q\""});
    let matrix = json!({"type": "array", "items": {"type": "array", "items": rat}});
    let point = json!({"type": "array", "items": {"type": "integer"}});
    let face = json!({"type": "array", "items": {"type": "integer", "minimum": 1}, "description": "1-based axes"});
    let lattice_box = object_schema(&["lo", "hi"], json!({"lo": point, "hi": point}));
    let set = object_schema(
        &["pieces"],
        json!({"n": {"type": "integer"}, "pieces": {"type": "array", "items": object_schema(&["corner"], json!({"corner": point, "face": face}))}}),
    );
    let poset = object_schema(
        &["size", "leq"],
        json!({"size": {"type": "integer"}, "leq": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}}}),
    );
    let module = object_schema(
        &["box"],
        json!({
            "n": {"type": "integer"},
            "box": lattice_box,
            "dims": {"type": "object", "additionalProperties": {"type": "integer"}, "description": "keys \"x,y\""},
            "steps": {"type": "object", "additionalProperties": matrix, "description": "keys \"x,y:axis\", axis 1-based, rows = target"},
        }),
    );
    let degree = object_schema(
        &["face", "coset"],
        json!({"face": face, "coset": point, "dim": {"type": "integer"}}),
    );
    let endpoint = object_schema(
        &["v", "k"],
        json!({"v": {"type": "string"}, "k": {"enum": ["open", "closed"]}}),
    );
    let doc = match kind {
        "module" => module,
        "upset" | "downset" => set,
        "fringe" => object_schema(
            &["rows", "cols", "phi"],
            json!({"n": {"type": "integer"}, "rows": {"type": "array", "items": set}, "cols": {"type": "array", "items": set}, "phi": matrix}),
        ),
        "poset" => poset,
        "encoding" => object_schema(
            &["morphism", "module"],
            json!({
                "morphism": object_schema(&["source", "target", "map"], json!({
                    "source": {"type": "object", "description": "{\"box\": ...} or {\"poset\": ...}"},
                    "target": poset,
                    "map": {"type": ["object", "array"], "description": "\"x,y\" -> element for boxes, list for posets"},
                })),
                "module": object_schema(&["dims"], json!({"dims": {"type": "array", "items": {"type": "integer"}}, "maps": {"type": "object", "additionalProperties": matrix, "description": "keys \"a,b\" for covers a < b"}})),
            }),
        ),
        "poset-fringe" => object_schema(
            &["morphism", "fringe"],
            json!({"morphism": {"type": "object"}, "fringe": object_schema(&["rows", "cols", "phi"], json!({"rows": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}}, "cols": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}}, "phi": matrix}))}),
        ),
        "homomorphism" => object_schema(
            &["source", "target"],
            json!({"source": module, "target": module, "maps": {"type": "object", "additionalProperties": matrix}}),
        ),
        "hom-labels" => object_schema(&["upset", "downset"], json!({"upset": set, "downset": set})),
        "qr" => object_schema(
            &["n", "births", "deaths"],
            json!({
                "n": {"type": "integer"},
                "births": {"type": "array", "items": degree},
                "deaths": {"type": "array", "items": degree},
                "blocks": {"type": "array", "items": object_schema(&["birth", "death", "matrix"], json!({"birth": {"type": "integer"}, "death": {"type": "integer"}, "matrix": matrix}))},
            }),
        ),
        "rmodule" => object_schema(
            &["crit", "dims"],
            json!({"crit": {"type": "array", "items": rat}, "dims": {"type": "array", "items": {"type": "integer"}}, "maps": {"type": "array", "items": matrix}}),
        ),
        "bar" => object_schema(
            &["birth", "death"],
            json!({"birth": endpoint, "death": endpoint, "mult": {"type": "integer"}}),
        ),
        _ => return None,
    };
    let mut doc = doc;
    doc["$schema"] = json!("http://json-schema.org/draft-07/schema#");
    doc["title"] = json!(kind);
    Some(doc)
}

pub const SCHEMA_KINDS: &[&str] = &[
    "bar",
    "downset",
    "encoding",
    "fringe",
    "hom-labels",
    "homomorphism",
    "module",
    "poset",
    "poset-fringe",
    "qr",
    "rmodule",
    "upset",
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{elder_module, skyscraper_plus_constant};
    use crate::fringe::module_to_fringe;
    use crate::linalg::rat;
    use crate::poset::encode;
    use crate::qr::qr_code;

    #[test]
    fn rationals_round_trip() {
        for s in ["0", "-3", "1/2", "-7/3"] {
            assert_eq!(rat_to_json(&rat_from_json(&json!(s)).unwrap()), json!(s));
        }
        assert_eq!(rat_from_json(&json!(4)).unwrap(), rat(4));
        assert_eq!(
            rat_to_json(&rat_from_json(&json!("2/4")).unwrap()),
            json!("1/2")
        );
        assert!(matches!(
            rat_from_json(&json!("1/0")),
            Err(JsonError::Schema(_))
        ));
        assert!(matches!(
            rat_from_json(&json!(0.5)),
            Err(JsonError::Schema(_))
        ));
    }

    #[test]
    fn module_round_trip() {
        for m in [elder_module(), skyscraper_plus_constant(1)] {
            let v = module_to_json(&m);
            assert_eq!(module_from_json(&v).unwrap(), m);
        }
    }

    #[test]
    fn module_errors() {
        let bad_shape = json!({"box": {"lo": [0], "hi": [1]}, "dims": {"0": 1, "1": 1}, "steps": {"0:1": [["1", "0"]]}});
        assert!(matches!(
            module_from_json(&bad_shape),
            Err(JsonError::Math(Error::ShapeMismatch(_)))
        ));
        let missing = json!({"dims": {}});
        assert!(matches!(
            module_from_json(&missing),
            Err(JsonError::Schema(_))
        ));
        let noncommuting = json!({
            "box": {"lo": [0, 0], "hi": [1, 1]},
            "dims": {"0,0": 1, "1,0": 1, "0,1": 1, "1,1": 1},
            "steps": {"0,0:1": [["1"]], "0,0:2": [["1"]], "1,0:2": [["1"]], "0,1:1": [["2"]]}
        });
        assert!(matches!(
            module_from_json(&noncommuting),
            Err(JsonError::Math(Error::NonCommuting { .. }))
        ));
    }

    #[test]
    fn fringe_round_trip() {
        let mm = module_to_fringe(&elder_module()).unwrap();
        assert_eq!(fringe_from_json(&fringe_to_json(&mm)).unwrap(), mm);
    }

    #[test]
    fn encoding_round_trip() {
        let (pi, h) = encode(&skyscraper_plus_constant(2)).unwrap();
        let (pi2, h2) = encoding_from_json(&encoding_to_json(&pi, &h)).unwrap();
        assert_eq!(pi2.map(), pi.map());
        assert_eq!(h2.dims(), h.dims());
        assert_eq!(h2.cover_maps(), h.cover_maps());
    }

    #[test]
    fn qr_round_trip() {
        let qr = qr_code(&elder_module());
        assert_eq!(qr_from_json(&qr_to_json(&qr)).unwrap(), qr);
    }

    #[test]
    fn intervals_and_bars() {
        let b = parse_interval("[0, 1)").unwrap();
        assert_eq!(b.to_string(), "[0, 1)");
        assert_eq!(
            bar_to_json(&b),
            json!({"birth": {"v": "0", "k": "closed"}, "death": {"v": "1", "k": "open"}, "mult": 1})
        );
        assert_eq!(bar_from_json(&bar_to_json(&b)).unwrap(), b);
        let inf = parse_interval("(-inf, inf)").unwrap();
        assert_eq!(bar_from_json(&bar_to_json(&inf)).unwrap(), inf);
        assert_eq!(parse_interval("(1/2, 3]").unwrap().to_string(), "(1/2, 3]");
        assert!(parse_interval("0, 1").is_err());
    }

    #[test]
    fn every_schema_kind_resolves() {
        for k in SCHEMA_KINDS {
            assert!(schema_for(k).is_some(), "{k}");
        }
        assert!(schema_for("nope").is_none());
    }
}
