use persistence_kernel_core::barcode1d::{
    elder_projection, functorial_barcode, gr_soc_spaces, interval_module, top_spaces, BirthDegreeR,
    DeathDegreeR,
};
use persistence_kernel_core::decomposition::{
    associated_faces, canonical_decomposition, global_support_downset, irreducible_decomposition,
    localize_downset, minimal_decomposition, primary_component, primary_decomposition_module,
    PrimaryComponent,
};
use persistence_kernel_core::fringe::{
    fringe_to_module, hom_dim, meets, module_to_fringe, pullback_fringe, validate_fringe,
};
use persistence_kernel_core::json::*;
use persistence_kernel_core::linalg::parse_rat;
use persistence_kernel_core::poset::{
    encode, isotypic_regions, pullback_module, uptight_poset, Domain, DownsetZn, Pullback,
};
use persistence_kernel_core::qr::{
    death_functor, elder_morphism, elder_quotient, elder_submodule, extant_submodule, gen_space,
    qr_code, recover, BirthDegree, DeathDegree,
};
use persistence_kernel_core::zn::{
    closed_socle_along, is_injective_hom, is_surjective_hom, top_along,
};
use persistence_kernel_core::{Face, FdModule, LatticeBox, Point};
use serde_json::{json, Value};

use crate::{Command, SetKind};

pub enum Output {
    Json(Value),
    Text(String),
}

#[derive(Debug, PartialEq, Eq)]
enum Kind {
    Module,
    Homomorphism,
    Morphism,
    Encoding,
    PosetFringe,
    Fringe,
    Pieces,
    Poset,
    PosetModule,
    Qr,
    RModule,
    HomLabels,
    Uptight,
}

fn has(v: &Value, keys: &[&str]) -> bool {
    keys.iter().all(|k| v.get(k).is_some())
}

fn detect(v: &Value) -> JsonResult<Kind> {
    let kind = if !v.is_object() {
        None
    } else if has(v, &["morphism", "module"]) {
        Some(Kind::Encoding)
    } else if has(v, &["morphism", "fringe"]) {
        Some(Kind::PosetFringe)
    } else if has(v, &["source", "target", "map"]) {
        Some(Kind::Morphism)
    } else if has(v, &["source", "target"]) {
        Some(Kind::Homomorphism)
    } else if has(v, &["domain", "upsets"]) {
        Some(Kind::Uptight)
    } else if has(v, &["upset", "downset"]) {
        Some(Kind::HomLabels)
    } else if has(v, &["poset", "dims"]) {
        Some(Kind::PosetModule)
    } else if has(v, &["box"]) {
        Some(Kind::Module)
    } else if has(v, &["rows", "cols"]) {
        Some(Kind::Fringe)
    } else if has(v, &["pieces"]) {
        Some(Kind::Pieces)
    } else if has(v, &["size", "leq"]) {
        Some(Kind::Poset)
    } else if has(v, &["births", "deaths"]) {
        Some(Kind::Qr)
    } else if has(v, &["crit"]) {
        Some(Kind::RModule)
    } else {
        None
    };
    kind.ok_or_else(|| JsonError::Schema("unrecognized input; see --schema".into()))
}

fn expect_kind(v: &Value, allowed: &[Kind], what: &str) -> JsonResult<Kind> {
    let k = detect(v)?;
    if allowed.contains(&k) {
        Ok(k)
    } else {
        Err(JsonError::Schema(format!("expected {what}")))
    }
}

fn parse_coords(s: &str) -> JsonResult<Point> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| JsonError::Schema(format!("bad point \"{s}\"")))
        })
        .collect()
}

fn parse_face(s: &str, n: usize) -> JsonResult<Face> {
    let s = s.trim();
    let axes: Vec<usize> = if s.is_empty() {
        vec![]
    } else {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| JsonError::Schema(format!("bad face \"{s}\"")))
            })
            .collect::<JsonResult<_>>()?
    };
    Ok(Face::from_one_based(n, &axes)?)
}

fn parse_box(s: &str) -> JsonResult<LatticeBox> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| JsonError::Schema(format!("box \"{s}\" is not \"l1,l2:h1,h2\"")))?;
    Ok(LatticeBox::new(parse_coords(lo)?, parse_coords(hi)?)?)
}

fn parse_box_opt(s: &Option<String>) -> JsonResult<Option<LatticeBox>> {
    s.as_deref().map(parse_box).transpose()
}

fn parse_rats(s: &str) -> JsonResult<Vec<persistence_kernel_core::Rat>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|t| {
            parse_rat(t.trim()).ok_or_else(|| JsonError::Schema(format!("bad rational \"{t}\"")))
        })
        .collect()
}

fn parse_birth_r(s: &str) -> JsonResult<BirthDegreeR> {
    let s = s.trim();
    if s == "-inf" {
        return Ok(BirthDegreeR::NegInf);
    }
    let bad = || JsonError::Schema(format!("birth \"{s}\" is not closed:v, open:v or -inf"));
    let (k, v) = s.split_once(':').ok_or_else(bad)?;
    let r = parse_rat(v.trim()).ok_or_else(bad)?;
    match k.trim() {
        "closed" => Ok(BirthDegreeR::Closed(r)),
        "open" => Ok(BirthDegreeR::Open(r)),
        _ => Err(bad()),
    }
}

fn parse_death_r(s: &str) -> JsonResult<DeathDegreeR> {
    let s = s.trim();
    if s == "inf" {
        return Ok(DeathDegreeR::PosInf);
    }
    let bad = || JsonError::Schema(format!("death \"{s}\" is not closed:v, open:v or inf"));
    let (k, v) = s.split_once(':').ok_or_else(bad)?;
    let r = parse_rat(v.trim()).ok_or_else(bad)?;
    match k.trim() {
        "closed" => Ok(DeathDegreeR::Closed(r)),
        "open" => Ok(DeathDegreeR::Open(r)),
        _ => Err(bad()),
    }
}

/// Reads a module, re-expressed on `--box` when given.
fn module(v: &Value, bx: &Option<String>) -> JsonResult<FdModule> {
    let m = module_from_json(v)?;
    match parse_box_opt(bx)? {
        Some(b) => Ok(m.rebox(&b)?),
        None => Ok(m),
    }
}

fn downset(v: &Value) -> JsonResult<DownsetZn> {
    expect_kind(v, &[Kind::Pieces], "a downset {\"n\", \"pieces\"}")?;
    downset_from_json(v, None)
}

fn check_point(p: &[i64], n: usize) -> JsonResult<()> {
    if p.len() != n {
        return Err(persistence_kernel_core::Error::DimensionMismatch(format!(
            "point {p:?} is not in Z^{n}"
        ))
        .into());
    }
    Ok(())
}

fn component_json(c: &PrimaryComponent) -> Value {
    json!({"face": face_to_json(&c.face), "pieces": pieces_to_json(c.downset.pieces())})
}

fn set_kind(kind: Option<SetKind>) -> JsonResult<SetKind> {
    kind.ok_or_else(|| {
        JsonError::Schema("a {\"pieces\"} input needs --as upset or --as downset".into())
    })
}

/// Domain elements of an uptight input: element lists, or upsets in Z^n for boxes.
fn uptight_input(v: &Value) -> JsonResult<Value> {
    let d = field(v, "domain")?;
    let domain = if let Some(b) = d.get("box") {
        Domain::Grid(box_from_json(b)?)
    } else if let Some(p) = d.get("poset") {
        Domain::Poset(poset_from_json(p)?)
    } else {
        return Err(JsonError::Schema(
            "domain is {\"box\": ...} or {\"poset\": ...}".into(),
        ));
    };
    let size = domain.size();
    let mut upsets = Vec::new();
    for u in field(v, "upsets")?
        .as_array()
        .ok_or_else(|| JsonError::Schema("upsets must be an array".into()))?
    {
        if u.is_object() {
            let Domain::Grid(bx) = &domain else {
                return Err(JsonError::Schema("upsets in Z^n need a box domain".into()));
            };
            let up = upset_from_json(u, Some(bx.n()))?;
            upsets.push(
                bx.points()
                    .map(|p| up.contains(&p))
                    .collect::<persistence_kernel_core::Result<Vec<bool>>>()?,
            );
        } else {
            let mut member = vec![false; size];
            for x in u.as_array().ok_or_else(|| {
                JsonError::Schema("an upset is an element list or an object".into())
            })? {
                let i = x
                    .as_u64()
                    .ok_or_else(|| JsonError::Schema("elements are nonnegative integers".into()))?
                    as usize;
                if i >= size {
                    return Err(persistence_kernel_core::Error::ShapeMismatch(format!(
                        "element {i} is outside 0..{size}"
                    ))
                    .into());
                }
                member[i] = true;
            }
            upsets.push(member);
        }
    }
    let (_, pi) = uptight_poset(&domain, &upsets)?;
    Ok(morphism_to_json(&pi))
}

pub fn run(cmd: Command) -> JsonResult<Output> {
    Ok(Output::Json(match cmd {
        Command::Validate { input, kind } => {
            let v = input.read()?;
            match detect(&v)? {
                Kind::Module => drop(module_from_json(&v)?),
                Kind::Homomorphism => drop(hom_from_json(&v)?),
                Kind::Morphism => drop(morphism_from_json(&v)?),
                Kind::Encoding => drop(encoding_from_json(&v)?),
                Kind::Poset => drop(poset_from_json(&v)?),
                Kind::PosetModule => drop(poset_module_from_json(&v)?),
                Kind::Qr => drop(qr_from_json(&v)?),
                Kind::RModule => drop(rmodule_from_json(&v)?),
                Kind::Pieces => match set_kind(kind)? {
                    SetKind::Upset => drop(upset_from_json(&v, None)?),
                    SetKind::Downset => drop(downset_from_json(&v, None)?),
                },
                Kind::Fringe | Kind::PosetFringe => {
                    return Err(JsonError::Schema(
                        "monomial matrices are checked by fringe-check".into(),
                    ))
                }
                Kind::HomLabels | Kind::Uptight => {
                    return Err(JsonError::Schema(
                        "this input is read by hom or encode".into(),
                    ))
                }
            }
            json!({"ok": true})
        }
        Command::Encode { input } => {
            let v = input.read()?;
            match expect_kind(
                &v,
                &[Kind::Module, Kind::Uptight],
                "a module or {\"domain\", \"upsets\"}",
            )? {
                Kind::Module => {
                    let m = module_from_json(&v)?;
                    let (pi, h) = encode(&m)?;
                    let bx = m.lattice_box();
                    let regions: Vec<Vec<Point>> = isotypic_regions(&m)
                        .into_iter()
                        .map(|r| r.into_iter().map(|i| bx.point(i)).collect())
                        .collect();
                    let mut out = encoding_to_json(&pi, &h);
                    out["regions"] = json!(regions);
                    out
                }
                _ => uptight_input(&v)?,
            }
        }
        Command::Hilbert { input, at, kind } => {
            let v = input.read()?;
            let p = parse_coords(&at)?;
            match expect_kind(&v, &[Kind::Module, Kind::Pieces], "a module or a set")? {
                Kind::Module => {
                    let m = module_from_json(&v)?;
                    check_point(&p, m.n())?;
                    json!({"dim": m.hilbert(&p)})
                }
                _ => {
                    let contains = match set_kind(kind)? {
                        SetKind::Upset => upset_from_json(&v, None)?.contains(&p)?,
                        SetKind::Downset => downset_from_json(&v, None)?.contains(&p)?,
                    };
                    json!({"contains": contains})
                }
            }
        }
        Command::Rank {
            input,
            from,
            to,
            map,
            bx,
        } => {
            let m = module(&input.read()?, &bx)?;
            let (a, b) = (parse_coords(&from)?, parse_coords(&to)?);
            check_point(&a, m.n())?;
            check_point(&b, m.n())?;
            let mut out = json!({"rank": m.rank_function(&a, &b)?});
            if map {
                out["map"] = matrix_to_json(&m.structure_map(&a, &b)?);
            }
            out
        }
        Command::Dual { input, bx } => module_to_json(&module(&input.read()?, &bx)?.matlis_dual()),
        Command::Localize {
            input,
            face,
            support,
            restrict,
            bx,
        } => {
            let v = input.read()?;
            match expect_kind(&v, &[Kind::Module, Kind::Pieces], "a module or a downset")? {
                Kind::Module => {
                    let m = module(&v, &bx)?;
                    let tau = parse_face(&face, m.n())?;
                    let out = if support {
                        m.global_support(&tau)?
                    } else if restrict {
                        m.quotient_restriction(&tau)
                    } else {
                        m.localize(&tau)
                    };
                    module_to_json(&out)
                }
                _ => {
                    let d = downset_from_json(&v, None)?;
                    let tau = parse_face(&face, d.n())?;
                    if restrict {
                        return Err(JsonError::Schema("--restrict applies to modules".into()));
                    }
                    if support {
                        let b = parse_box_opt(&bx)?.unwrap_or_else(|| d.determining_box());
                        let member = global_support_downset(&d, &tau, &b)?;
                        let points: Vec<Point> = b
                            .points()
                            .zip(member)
                            .filter(|(_, x)| *x)
                            .map(|(p, _)| p)
                            .collect();
                        json!({"box": box_to_json(&b), "points": points})
                    } else {
                        downset_to_json(&localize_downset(&d, &tau)?)
                    }
                }
            }
        }
        Command::Socle { input, face, bx } => {
            let m = module(&input.read()?, &bx)?;
            let tau = parse_face(&face, m.n())?;
            module_to_json(&closed_socle_along(&m, &tau))
        }
        Command::Top { input, face, bx } => {
            let m = module(&input.read()?, &bx)?;
            let rho = parse_face(&face, m.n())?;
            module_to_json(&top_along(&m, &rho))
        }
        Command::Hom { input, bx } => {
            let v = input.read()?;
            match expect_kind(
                &v,
                &[Kind::HomLabels, Kind::Homomorphism],
                "{\"upset\", \"downset\"} or a homomorphism",
            )? {
                Kind::HomLabels => {
                    let u = upset_from_json(field(&v, "upset")?, None)?;
                    let d = downset_from_json(field(&v, "downset")?, Some(u.n()))?;
                    let b = match parse_box_opt(&bx)? {
                        Some(b) => b,
                        None => u.determining_box().hull(&d.determining_box())?,
                    };
                    json!({"meets": meets(&u, &d)?, "dim": hom_dim(&u, &d, &b)?})
                }
                _ => {
                    let h = hom_from_json(&v)?;
                    json!({"injective": is_injective_hom(&h)?, "surjective": is_surjective_hom(&h)?})
                }
            }
        }
        Command::FringeCheck { input } => {
            let mm = fringe_from_json(&input.read()?)?;
            validate_fringe(&mm)?;
            json!({"ok": true, "determining_box": box_to_json(&mm.determining_box())})
        }
        Command::FringeEval { input, bx } => {
            let mm = fringe_from_json(&input.read()?)?;
            let b = parse_box_opt(&bx)?.unwrap_or_else(|| mm.determining_box());
            module_to_json(&fringe_to_module(&mm, &b)?)
        }
        Command::FringeOf { input, bx } => {
            fringe_to_json(&module_to_fringe(&module(&input.read()?, &bx)?)?)
        }
        Command::Pullback { input } => {
            let v = input.read()?;
            match expect_kind(
                &v,
                &[Kind::Encoding, Kind::PosetFringe],
                "an encoding or {\"morphism\", \"fringe\"}",
            )? {
                Kind::Encoding => {
                    let (pi, h) = encoding_from_json(&v)?;
                    match pullback_module(&pi, &h)? {
                        Pullback::Grid(m) => module_to_json(&m),
                        Pullback::Poset(p) => poset_module_to_json(&p),
                    }
                }
                _ => {
                    let pi = morphism_from_json(field(&v, "morphism")?)?;
                    let mm = poset_fringe_from_json(field(&v, "fringe")?, pi.target().size())?;
                    poset_fringe_to_json(&pullback_fringe(&pi, &mm)?)
                }
            }
        }
        Command::Decompose { input, face, bx } => {
            let v = input.read()?;
            match expect_kind(&v, &[Kind::Module, Kind::Pieces], "a module or a downset")? {
                Kind::Module => {
                    if face.is_some() {
                        return Err(JsonError::Schema("--face applies to downsets".into()));
                    }
                    let m = module(&v, &bx)?;
                    let comps: Vec<Value> = primary_decomposition_module(&m)?
                        .into_iter()
                        .map(|c| json!({"face": face_to_json(&c.face), "quotient": module_to_json(&c.quotient)}))
                        .collect();
                    json!({"components": comps})
                }
                _ => {
                    if bx.is_some() {
                        return Err(JsonError::Schema("--box applies to modules".into()));
                    }
                    let d = downset_from_json(&v, None)?;
                    match face {
                        Some(f) => {
                            let tau = parse_face(&f, d.n())?;
                            json!({"face": face_to_json(&tau), "pieces": pieces_to_json(primary_component(&d, &tau)?.pieces())})
                        }
                        None => json!({
                            "components": canonical_decomposition(&d)?.iter().map(component_json).collect::<Vec<_>>(),
                            "associated_faces": associated_faces(&d).iter().map(face_to_json).collect::<Vec<_>>(),
                        }),
                    }
                }
            }
        }
        Command::DecomposeMin { input } => {
            let d = downset(&input.read()?)?;
            json!({"components": minimal_decomposition(&d)?.iter().map(component_json).collect::<Vec<_>>()})
        }
        Command::Irreducible { input } => {
            let d = downset(&input.read()?)?;
            json!({"pieces": pieces_to_json(&irreducible_decomposition(&d)?)})
        }
        Command::Qr {
            input,
            face,
            at,
            phi,
            death_face,
            death_at,
            bx,
        } => {
            let m = module(&input.read()?, &bx)?;
            let n = m.n();
            match at {
                None => qr_to_json(&qr_code(&m)),
                Some(at) => {
                    let coset = parse_coords(&at)?;
                    check_point(&coset, n)?;
                    let beta =
                        BirthDegree::new(parse_face(face.as_deref().unwrap_or(""), n)?, &coset);
                    match (phi, death_at) {
                        (Some(phi), Some(death_at)) => {
                            let dc = parse_coords(&death_at)?;
                            check_point(&dc, n)?;
                            let alpha = DeathDegree::new(
                                parse_face(death_face.as_deref().unwrap_or(""), n)?,
                                &dc,
                            );
                            let value = death_functor(&m, &beta, &parse_rats(&phi)?, &alpha)?;
                            json!({"value": value.iter().map(|r| rat_to_json(r)).collect::<Vec<_>>()})
                        }
                        _ => {
                            let g = gen_space(&m, &beta);
                            json!({"point": g.point, "dim": g.dim, "top_projection": matrix_to_json(&g.top_projection)})
                        }
                    }
                }
            }
        }
        Command::Recover { input, bx } => {
            let qr = qr_from_json(&input.read()?)?;
            let b = match parse_box_opt(&bx)? {
                Some(b) => b,
                None => qr.to_monomial_matrix()?.determining_box(),
            };
            module_to_json(&recover(&qr, &b)?)
        }
        Command::Elder {
            input,
            face,
            at,
            bx,
        } => {
            let m = module(&input.read()?, &bx)?;
            let coset = parse_coords(&at)?;
            check_point(&coset, m.n())?;
            let beta = BirthDegree::new(parse_face(&face, m.n())?, &coset);
            let (quotient, _) = elder_quotient(&m, &beta)?;
            let em = elder_morphism(&m, &beta)?;
            let deaths: Vec<Value> = em
                .deaths
                .iter()
                .map(|(a, d)| {
                    let mut x = death_to_json(a);
                    x["dim"] = json!(d);
                    x
                })
                .collect();
            json!({
                "birth": birth_to_json(&beta),
                "elder": module_to_json(&elder_submodule(&m, &beta)?),
                "extant": module_to_json(&extant_submodule(&m, &beta)?),
                "quotient": module_to_json(&quotient),
                "morphism": {"deaths": deaths, "matrix": matrix_to_json(&em.matrix)},
            })
        }
        Command::Barcode {
            input,
            ascii,
            interval,
            birth,
            death,
        } => {
            if let Some(s) = interval {
                return Ok(Output::Json(rmodule_to_json(&interval_module(
                    &parse_interval(&s)?,
                )?)));
            }
            let m = rmodule_from_json(&input.read()?)?;
            if let (Some(b), Some(d)) = (birth, death) {
                let p = elder_projection(&m, &parse_birth_r(&b)?, &parse_death_r(&d)?)?;
                return Ok(Output::Json(json!({"matrix": matrix_to_json(&p.matrix)})));
            }
            let code = functorial_barcode(&m)?;
            if ascii {
                let mut s = String::new();
                for b in &code.bars {
                    for _ in 0..b.multiplicity {
                        s.push_str(&format!("{b}\n"));
                    }
                }
                return Ok(Output::Text(s));
            }
            json!({
                "bars": code.bars.iter().map(bar_to_json).collect::<Vec<_>>(),
                "tops": top_spaces(&m).iter().map(|t| json!({"birth": birth_r_to_json(&t.birth), "dim": t.projection.rows()})).collect::<Vec<_>>(),
                "graded_socles": gr_soc_spaces(&m).iter().map(|g| json!({"birth": birth_r_to_json(&g.birth), "death": death_r_to_json(&g.death), "dim": g.dim})).collect::<Vec<_>>(),
                "blocks": code.blocks.iter().map(|(b, a, f)| json!({"birth": birth_r_to_json(b), "death": death_r_to_json(a), "matrix": matrix_to_json(f)})).collect::<Vec<_>>(),
            })
        }
    }))
}
