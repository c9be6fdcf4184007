//! `tenv`: exact structure constants for twisted relation categories.
//!
//! Every command prints one deterministic document (JSON by default) and
//! exits 0 on success.  Validation problems exit 2, capability violations 3,
//! size-guard refusals 4, internal invariant failures 1.

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};

use tensor_envelope::backend::{
    obj, subobject_lattice, BackendKind, DegreeFn, Obj, Sub,
};
use tensor_envelope::maltsev::{corel_set, malcev_compose, pull_push, CoRel};
use tensor_envelope::poly::{parse_rational, rational_to_string, Poly};
use tensor_envelope::projector::{omega, subobject_decomposition};
use tensor_envelope::rel::{Rel, TMor};
use tensor_envelope::star::{
    basis_convert, compose_curly, compose_round, r_set, star_hom_dim, tensor_curly,
    tensor_round, BlockMap, Flavor, StarMor,
};
use tensor_envelope::{verify, Error};

const SCHEMA: &str = "tensor-envelope/1";

#[derive(Parser)]
#[command(name = "tenv", version, about = "exact relation-category calculator")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Backend category: `finset` or `opset`.
    #[arg(long, default_value = "opset")]
    backend: String,
    /// Degree function: `one`, `zero-noniso`, or `t-power` (opset only).
    #[arg(long, default_value = "one")]
    degree: String,
    /// Output format: `json` or `text`.
    #[arg(long, default_value = "json")]
    format: String,
    /// Evaluate all polynomial coefficients at an exact rational, e.g. `5/2`.
    #[arg(long)]
    eval_at: Option<String>,
    /// Write the output document to a file instead of stdout.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dimension of the hom space between two top summands.
    Homdim {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x: usize,
        #[arg(long)]
        y: usize,
    },
    /// Compose two basis morphisms `f : x -> y` and `g : y -> z` (g after f).
    Compose {
        #[command(flatten)]
        common: Common,
        /// Basis of the inputs: `rel`, `round`, `curly`, or `gluing`.
        #[arg(long)]
        basis: String,
        #[arg(long)]
        x: usize,
        #[arg(long)]
        y: usize,
        #[arg(long)]
        z: usize,
        /// First factor, canonical text form.
        #[arg(long)]
        f: String,
        /// Second factor, canonical text form.
        #[arg(long)]
        g: String,
    },
    /// Tensor two basis morphisms `f : x -> y` and `g : x2 -> y2`.
    Tensor {
        #[command(flatten)]
        common: Common,
        /// Basis of the inputs: `rel`, `round`, or `curly`.
        #[arg(long)]
        basis: String,
        #[arg(long)]
        x: usize,
        #[arg(long)]
        y: usize,
        #[arg(long)]
        x2: usize,
        #[arg(long)]
        y2: usize,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Convert a summand-basis element to the other basis.
    Convert {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x: usize,
        #[arg(long)]
        y: usize,
        /// Flavor of the input: `round` or `curly`.
        #[arg(long)]
        from: String,
        /// Basis label in canonical text form.
        #[arg(long)]
        rel: String,
    },
    /// The omega weight of a surjection given by its table.
    Omega {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x: usize,
        #[arg(long)]
        y: usize,
        #[arg(long)]
        table: String,
    },
    /// Dump the subobject poset of an object, optionally with Möbius data.
    Mobius {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x: usize,
        /// Lower subobject for a single Möbius value.
        #[arg(long)]
        u: Option<String>,
        /// Upper subobject for a single Möbius value.
        #[arg(long)]
        w: Option<String>,
        /// Include the full Möbius table in the dump.
        #[arg(long)]
        with_mobius: bool,
    },
    /// Subobject decomposition of `[x]`, or of a tensor pair with `--y`.
    Decompose {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x: usize,
        #[arg(long)]
        y: Option<usize>,
    },
    /// Multiplication table of the endomorphisms of a top summand.
    Table {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x: usize,
        /// Basis: `round`, `curly`, or `gluing`.
        #[arg(long)]
        basis: String,
    },
    /// Run verification suites.
    Verify {
        #[command(flatten)]
        common: Common,
        /// A single suite name.
        #[arg(long)]
        suite: Option<String>,
        /// Run every suite.
        #[arg(long)]
        all: bool,
        /// Carrier bound for the axiom suites.
        #[arg(long)]
        max_size: Option<usize>,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Capability(_) => 3,
        Error::SizeGuard(_) => 4,
        Error::Internal(_) | Error::NoTop(_) => 1,
        _ => 2,
    }
}

struct Render {
    format: String,
    eval: Option<BigRational>,
    out: Option<String>,
}

impl Render {
    fn new(common: &Common) -> Result<Render, Error> {
        if common.format != "json" && common.format != "text" {
            return Err(Error::Invalid(format!("unknown format `{}`", common.format)));
        }
        Ok(Render {
            format: common.format.clone(),
            eval: common.eval_at.as_deref().map(parse_rational).transpose()?,
            out: common.out.clone(),
        })
    }

    fn poly_value(&self, p: &Poly) -> Value {
        match &self.eval {
            Some(v) => Value::String(rational_to_string(&p.eval(v))),
            None => p.to_json(),
        }
    }

    fn poly_text(&self, p: &Poly) -> String {
        match &self.eval {
            Some(v) => rational_to_string(&p.eval(v)),
            None => p.to_string(),
        }
    }

    fn emit(&self, doc: Value, text: String) -> Result<(), Error> {
        let rendered = if self.format == "json" {
            doc.to_string()
        } else {
            text
        };
        match &self.out {
            Some(path) => std::fs::write(path, rendered + "\n")
                .map_err(|e| Error::Invalid(format!("cannot write `{path}`: {e}"))),
            None => {
                println!("{rendered}");
                Ok(())
            }
        }
    }
}

fn parse_backend_degree(common: &Common) -> Result<(BackendKind, DegreeFn), Error> {
    let kind = BackendKind::parse(&common.backend)?;
    let degree = DegreeFn::parse(&common.degree)?;
    if !degree.applicable_to(kind) {
        return Err(Error::Capability(format!(
            "degree `{}` is not available on backend `{}`",
            degree.name(),
            kind.name()
        )));
    }
    Ok((kind, degree))
}

fn term_marker(flavor: &str, rel: &str) -> String {
    match flavor {
        "round" => format!("({rel})"),
        "curly" => format!("{{{rel}}}"),
        _ => format!("<{rel}>"),
    }
}

fn tmor_doc(r: &Render, m: &TMor) -> (Value, String) {
    let terms: Vec<Value> = m
        .terms()
        .map(|(s, c)| json!({ "rel": s.to_json(), "poly": r.poly_value(c) }))
        .collect();
    let doc = json!({
        "dom": { "backend": m.dom.kind.name(), "size": m.dom.size },
        "cod": { "backend": m.cod.kind.name(), "size": m.cod.size },
        "terms": terms,
    });
    let text = if m.is_zero() {
        "0".to_string()
    } else {
        m.terms()
            .map(|(s, c)| format!("({}) * {}", r.poly_text(c), term_marker("rel", &s.to_text())))
            .collect::<Vec<_>>()
            .join("  +  ")
    };
    (doc, text)
}

fn starmor_doc(r: &Render, m: &StarMor) -> (Value, String) {
    let terms: Vec<Value> = m
        .terms()
        .map(|(s, c)| json!({ "rel": s.to_json(), "poly": r.poly_value(c) }))
        .collect();
    let doc = json!({
        "x": { "backend": m.x.kind.name(), "size": m.x.size },
        "y": { "backend": m.y.kind.name(), "size": m.y.size },
        "flavor": m.flavor.name(),
        "terms": terms,
    });
    let text = if m.is_zero() {
        "0".to_string()
    } else {
        m.terms()
            .map(|(s, c)| {
                format!(
                    "({}) * {}",
                    r.poly_text(c),
                    term_marker(m.flavor.name(), &s.to_text())
                )
            })
            .collect::<Vec<_>>()
            .join("  +  ")
    };
    (doc, text)
}

fn blockmap_doc(r: &Render, m: &BlockMap) -> (Value, String) {
    let blocks: Vec<Value> = m
        .blocks
        .iter()
        .map(|row| {
            Value::Array(row.iter().map(|b| starmor_doc(r, b).0).collect())
        })
        .collect();
    let doc = json!({
        "summands_src": m.src.iter().map(Sub::to_json).collect::<Vec<_>>(),
        "summands_dst": m.dst.iter().map(Sub::to_json).collect::<Vec<_>>(),
        "flavor": m.flavor.name(),
        "blocks": blocks,
        "degenerate": m.degenerate.iter().map(|(i, j)| json!([i, j])).collect::<Vec<_>>(),
    });
    let mut text = String::new();
    for (i, u) in m.src.iter().enumerate() {
        for (j, v) in m.dst.iter().enumerate() {
            if !m.blocks[i][j].is_zero() {
                text.push_str(&format!(
                    "{} -> {} : {}\n",
                    u.to_text(),
                    v.to_text(),
                    starmor_doc(r, &m.blocks[i][j]).1
                ));
            }
        }
    }
    if text.is_empty() {
        text = "0".into();
    }
    (doc, text.trim_end().to_string())
}

fn parse_star(kind: BackendKind, x: Obj, y: Obj, flavor: Flavor, s: &str) -> Result<StarMor, Error> {
    StarMor::basis(x, y, Sub::parse(kind, s)?, flavor)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.cmd {
        Cmd::Homdim { common, x, y } => {
            let (kind, _) = parse_backend_degree(&common)?;
            let r = Render::new(&common)?;
            let dim = star_hom_dim(obj(kind, x)?, obj(kind, y)?)?;
            r.emit(
                json!({ "schema": SCHEMA, "command": "homdim", "dim": dim }),
                format!("dim = {dim}"),
            )
        }
        Cmd::Compose { common, basis, x, y, z, f, g } => {
            let (kind, d) = parse_backend_degree(&common)?;
            let r = Render::new(&common)?;
            let (ox, oy, oz) = (obj(kind, x)?, obj(kind, y)?, obj(kind, z)?);
            let (doc, text) = match basis.as_str() {
                "rel" => {
                    let rf = Rel::new(ox, oy, Sub::parse(kind, &f)?)?;
                    let rg = Rel::new(oy, oz, Sub::parse(kind, &g)?)?;
                    let result = TMor::from_rel(&rg, Poly::one())
                        .compose(d, &TMor::from_rel(&rf, Poly::one()))?;
                    tmor_doc(&r, &result)
                }
                "round" => {
                    let mf = parse_star(kind, ox, oy, Flavor::Round, &f)?;
                    let mg = parse_star(kind, oy, oz, Flavor::Round, &g)?;
                    starmor_doc(&r, &compose_round(d, &mg, &mf)?)
                }
                "curly" => {
                    let mf = parse_star(kind, ox, oy, Flavor::Curly, &f)?;
                    let mg = parse_star(kind, oy, oz, Flavor::Curly, &g)?;
                    starmor_doc(&r, &compose_curly(d, &mg, &mf)?)
                }
                "gluing" => {
                    let u = CoRel::parse(ox, oy, &f)?;
                    let v = CoRel::parse(oy, oz, &g)?;
                    starmor_doc(&r, &malcev_compose(d, &v, &u)?)
                }
                other => return Err(Error::Invalid(format!("unknown basis `{other}`"))),
            };
            let mut doc = doc;
            attach_envelope(&mut doc, "compose");
            r.emit(doc, text)
        }
        Cmd::Tensor { common, basis, x, y, x2, y2, f, g } => {
            let (kind, d) = parse_backend_degree(&common)?;
            let r = Render::new(&common)?;
            let (ox, oy) = (obj(kind, x)?, obj(kind, y)?);
            let (ox2, oy2) = (obj(kind, x2)?, obj(kind, y2)?);
            let (doc, text) = match basis.as_str() {
                "rel" => {
                    let rf = Rel::new(ox, oy, Sub::parse(kind, &f)?)?;
                    let rg = Rel::new(ox2, oy2, Sub::parse(kind, &g)?)?;
                    let result = TMor::from_rel(&rf, Poly::one())
                        .tensor(&TMor::from_rel(&rg, Poly::one()))?;
                    tmor_doc(&r, &result)
                }
                "round" => {
                    let mf = parse_star(kind, ox, oy, Flavor::Round, &f)?;
                    let mg = parse_star(kind, ox2, oy2, Flavor::Round, &g)?;
                    blockmap_doc(&r, &tensor_round(&mf, &mg)?)
                }
                "curly" => {
                    let mf = parse_star(kind, ox, oy, Flavor::Curly, &f)?;
                    let mg = parse_star(kind, ox2, oy2, Flavor::Curly, &g)?;
                    blockmap_doc(&r, &tensor_curly(d, &mf, &mg)?)
                }
                other => return Err(Error::Invalid(format!("unknown tensor basis `{other}`"))),
            };
            let mut doc = doc;
            attach_envelope(&mut doc, "tensor");
            r.emit(doc, text)
        }
        Cmd::Convert { common, x, y, from, rel } => {
            let (kind, _) = parse_backend_degree(&common)?;
            let r = Render::new(&common)?;
            let from = Flavor::parse(&from)?;
            let to = match from {
                Flavor::Round => Flavor::Curly,
                Flavor::Curly => Flavor::Round,
            };
            let m = parse_star(kind, obj(kind, x)?, obj(kind, y)?, from, &rel)?;
            let (mut doc, text) = starmor_doc(&r, &basis_convert(&m, to)?);
            attach_envelope(&mut doc, "convert");
            r.emit(doc, text)
        }
        Cmd::Omega { common, x, y, table } => {
            let (kind, d) = parse_backend_degree(&common)?;
            let r = Render::new(&common)?;
            let e = tensor_envelope::backend::parse_table(obj(kind, x)?, obj(kind, y)?, &table)?;
            let w = omega(d, &e)?;
            r.emit(
                json!({ "schema": SCHEMA, "command": "omega", "omega": r.poly_value(&w) }),
                format!("omega = {}", r.poly_text(&w)),
            )
        }
        Cmd::Mobius { common, x, u, w, with_mobius } => {
            let (kind, _) = parse_backend_degree(&common)?;
            let r = Render::new(&common)?;
            let ox = obj(kind, x)?;
            let lattice = subobject_lattice(&ox)?;
            if let (Some(u), Some(w)) = (&u, &w) {
                let mu = lattice.mobius(&Sub::parse(kind, u)?, &Sub::parse(kind, w)?)?;
                return r.emit(
                    json!({ "schema": SCHEMA, "command": "mobius", "mu": mu.to_string() }),
                    format!("mu = {mu}"),
                );
            }
            // cover relations are cubic in the element count, so dumps stay
            // small; single Möbius queries above are unrestricted
            if lattice.len() > 300 {
                return Err(Error::SizeGuard(format!(
                    "lattice dump with {} elements; query single values with --u/--w",
                    lattice.len()
                )));
            }
            let mut doc = lattice.to_json(Sub::to_json, with_mobius)?;
            attach_envelope(&mut doc, "mobius");
            let text = lattice
                .elems()
                .iter()
                .enumerate()
                .map(|(i, s)| format!("{i}: {}", s.to_text()))
                .collect::<Vec<_>>()
                .join("\n");
            r.emit(doc, text)
        }
        Cmd::Decompose { common, x, y } => {
            let (kind, _) = parse_backend_degree(&common)?;
            let r = Render::new(&common)?;
            let ox = obj(kind, x)?;
            match y {
                None => {
                    let fam = subobject_decomposition(&ox)?;
                    let mut doc = fam.to_json();
                    attach_envelope(&mut doc, "decompose");
                    let text = fam
                        .lattice
                        .elems()
                        .iter()
                        .map(|s| s.to_text())
                        .collect::<Vec<_>>()
                        .join("\n");
                    r.emit(doc, text)
                }
                Some(y) => {
                    let oy = obj(kind, y)?;
                    let parts = tensor_envelope::star::tensor_decompose(ox, oy)?;
                    let summands: Vec<Value> = parts
                        .iter()
                        .map(|(rel, q)| json!({ "rel": rel.sub.to_json(), "projector": tmor_doc(&r, q).0 }))
                        .collect();
                    let text = parts
                        .iter()
                        .map(|(rel, _)| rel.sub.to_text())
                        .collect::<Vec<_>>()
                        .join("\n");
                    r.emit(
                        json!({ "schema": SCHEMA, "command": "decompose", "summands": summands }),
                        text,
                    )
                }
            }
        }
        Cmd::Table { common, x, basis } => {
            let (kind, d) = parse_backend_degree(&common)?;
            let r = Render::new(&common)?;
            let ox = obj(kind, x)?;
            let (labels, cells): (Vec<String>, Vec<Vec<(Value, String)>>) = match basis.as_str() {
                "round" | "curly" => {
                    let flavor = Flavor::parse(&basis)?;
                    let rels = r_set(ox, ox)?;
                    let basis_mors: Vec<StarMor> = rels
                        .iter()
                        .map(|rel| StarMor::basis(ox, ox, rel.sub.clone(), flavor))
                        .collect::<Result<_, _>>()?;
                    let labels = rels.iter().map(|rel| rel.sub.to_text()).collect();
                    let mut cells = Vec::new();
                    for ei in &basis_mors {
                        let mut row = Vec::new();
                        for ej in &basis_mors {
                            let prod = match flavor {
                                Flavor::Round => compose_round(d, ei, ej)?,
                                Flavor::Curly => compose_curly(d, ei, ej)?,
                            };
                            row.push(starmor_doc(&r, &prod));
                        }
                        cells.push(row);
                    }
                    (labels, cells)
                }
                "gluing" => {
                    let corels = corel_set(ox, ox)?;
                    let labels = corels.iter().map(|u| u.to_json().to_string()).collect();
                    let mut cells = Vec::new();
                    for u in &corels {
                        let mut row = Vec::new();
                        for v in &corels {
                            let prod = malcev_compose(d, u, v)?;
                            // re-index the curly result by gluings
                            let as_gluings: Vec<Value> = prod
                                .terms()
                                .map(|(s, c)| {
                                    let rel = Rel::new(ox, ox, s.clone())?;
                                    Ok(json!({
                                        "gluing": pull_push(&rel)?.to_json(),
                                        "poly": r.poly_value(c),
                                    }))
                                })
                                .collect::<Result<_, Error>>()?;
                            let text = starmor_doc(&r, &prod).1;
                            row.push((Value::Array(as_gluings), text));
                        }
                        cells.push(row);
                    }
                    (labels, cells)
                }
                other => return Err(Error::Invalid(format!("unknown table basis `{other}`"))),
            };
            let doc = json!({
                "schema": SCHEMA,
                "command": "table",
                "basis": basis,
                "labels": labels,
                "cells": cells
                    .iter()
                    .map(|row| Value::Array(row.iter().map(|(v, _)| v.clone()).collect()))
                    .collect::<Vec<_>>(),
            });
            let mut text = String::new();
            for (i, row) in cells.iter().enumerate() {
                for (j, (_, t)) in row.iter().enumerate() {
                    text.push_str(&format!("[{}] . [{}] = {}\n", labels[i], labels[j], t));
                }
            }
            r.emit(doc, text.trim_end().to_string())
        }
        Cmd::Verify { common, suite, all, max_size } => {
            let r = Render::new(&common)?;
            let names: Vec<&str> = match (&suite, all) {
                (Some(_), true) => {
                    return Err(Error::Invalid("pass either --suite or --all, not both".into()))
                }
                (Some(s), false) => vec![
                    verify::SUITE_NAMES
                        .iter()
                        .find(|n| **n == s.as_str())
                        .copied()
                        .ok_or_else(|| Error::Invalid(format!("unknown suite `{s}`")))?,
                ],
                (None, true) => verify::SUITE_NAMES.to_vec(),
                (None, false) => {
                    return Err(Error::Invalid("pass --suite NAME or --all".into()))
                }
            };
            let mut reports = Vec::new();
            for name in names {
                reports.push(verify::run_suite(name, max_size)?);
            }
            let ok = reports.iter().all(|rep| rep.ok());
            let doc = json!({
                "schema": SCHEMA,
                "command": "verify",
                "ok": ok,
                "suites": reports.iter().map(|rep| rep.to_json()).collect::<Vec<_>>(),
            });
            let text = reports
                .iter()
                .map(|rep| rep.summary())
                .collect::<Vec<_>>()
                .join("\n");
            r.emit(doc, text)?;
            if !ok {
                std::process::exit(1);
            }
            Ok(())
        }
    }
}

fn attach_envelope(doc: &mut Value, command: &str) {
    if let Some(map) = doc.as_object_mut() {
        map.insert("schema".into(), Value::String(SCHEMA.into()));
        map.insert("command".into(), Value::String(command.into()));
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}
