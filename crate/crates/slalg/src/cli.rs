//! Command-line interface: instance files, dispatch, verification suites,
//! and the result cache.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_traits::Zero;
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::algebras::{
    dual_bimodule, regular_bimodule, semigroup_algebra,
    symmetric_bimodule_check, validate_algebra, validate_hom, Algebra,
};
use crate::diagrams::{
    build_convolution, clifford_algebra_diagram, diagram_from_decomposition, evaluation_hom,
    pullback, transfer_hom, unit_check, ConvolutionAlgebra, SemilatticeDiagram, SemilatticeHom,
};
use crate::homology::{
    betti, boundary, check_diagonal, cohomology_betti, combine_homotopy, dd_zero_check,
    direct_sigma_family, disintegration_check, find_diagonal, l1l_kaction,
    mu_checks, mu_projection, normalized_subspace, pi_projection, rect_band_homotopy,
    sigma_family, solve_homotopy, transfer_chain, transfer_checks, ChainIndex,
    DEFAULT_RESOURCE_LIMIT,
};
use crate::linalg::{fmt_rat, parse_rat, unit_vec, Echelon, Rat, SparseMatrix, SparseVec};
use crate::report::{CheckResult, Report};
use crate::semigroups::{
    as_semilattice, assemble_strong_semilattice, band_class, decompose_strong_semilattice,
    free_semilattice, validate_semigroup, BandClass, DecompositionData, FiniteSemigroup,
    FiniteSemilattice,
};

pub const CACHE_ENV_VAR: &str = "SLALG_CACHE_DIR";

pub const SUITES: [&str; 8] = [
    "mu-chain-map",
    "disintegration",
    "sigma",
    "rect-band",
    "unit",
    "relative",
    "transfer",
    "normalised",
];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("io error: {0}")]
    Io(String),
}

fn schema_err(path: &str, message: impl Into<String>) -> CliError {
    CliError::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

// ---------------------------------------------------------------------------
// Instance files
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub enum Instance {
    Semigroup(FiniteSemigroup),
    Diagram(SemilatticeDiagram),
}

#[derive(Debug, Clone)]
pub struct InstanceFile {
    pub name: String,
    pub kind: String,
    pub instance: Instance,
    /// present for clifford instances: the raw decomposition data
    pub decomposition: Option<DecompositionData>,
}

fn get_str<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a str, CliError> {
    v.get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| schema_err(&format!("{path}.{key}"), "expected a string"))
}

fn get_array<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Vec<Value>, CliError> {
    v.get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| schema_err(&format!("{path}.{key}"), "expected an array"))
}

fn get_object<'a>(
    v: &'a Value,
    key: &str,
    path: &str,
) -> Result<&'a serde_json::Map<String, Value>, CliError> {
    v.get(key)
        .and_then(Value::as_object)
        .ok_or_else(|| schema_err(&format!("{path}.{key}"), "expected an object"))
}

fn parse_labels(v: &Value, path: &str) -> Result<Vec<String>, CliError> {
    let arr = get_array(v, "elements", path)?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| {
            x.as_str()
                .map(str::to_string)
                .ok_or_else(|| schema_err(&format!("{path}.elements[{i}]"), "expected a string"))
        })
        .collect()
}

fn parse_table(v: &Value, key: &str, path: &str) -> Result<Vec<Vec<usize>>, CliError> {
    let arr = get_array(v, key, path)?;
    arr.iter()
        .enumerate()
        .map(|(i, row)| {
            row.as_array()
                .ok_or_else(|| schema_err(&format!("{path}.{key}[{i}]"), "expected an array"))?
                .iter()
                .enumerate()
                .map(|(j, x)| {
                    x.as_u64().map(|u| u as usize).ok_or_else(|| {
                        schema_err(&format!("{path}.{key}[{i}][{j}]"), "expected an index")
                    })
                })
                .collect()
        })
        .collect()
}

fn parse_semigroup(v: &Value, path: &str) -> Result<FiniteSemigroup, CliError> {
    let labels = parse_labels(v, path)?;
    let table = parse_table(v, "table", path)?;
    validate_semigroup(labels, table).map_err(|e| CliError::Validation(e.to_string()))
}

fn parse_shape(v: &Value, path: &str) -> Result<FiniteSemilattice, CliError> {
    let p = format!("{path}.semilattice");
    let obj = v
        .get("semilattice")
        .ok_or_else(|| schema_err(&p, "missing"))?;
    let s = parse_semigroup(obj, &p)?;
    as_semilattice(&s).map_err(|w| CliError::Validation(format!("not a semilattice: {w:?}")))
}

fn label_index(labels: &[String], l: &str, path: &str) -> Result<usize, CliError> {
    labels
        .iter()
        .position(|x| x == l)
        .ok_or_else(|| schema_err(path, format!("unknown element label `{l}`")))
}

/// Transition keys are written "f<e": from the fibre over e down to f.
fn parse_pair_key(key: &str, labels: &[String], path: &str) -> Result<(usize, usize), CliError> {
    let Some((f, e)) = key.split_once('<') else {
        return Err(schema_err(path, format!("malformed transition key `{key}`")));
    };
    let e = label_index(labels, e, path)?;
    let f = label_index(labels, f, path)?;
    Ok((e, f))
}

fn parse_rational(v: &Value, path: &str) -> Result<Rat, CliError> {
    v.as_str()
        .and_then(parse_rat)
        .ok_or_else(|| schema_err(path, "expected a rational string \"num/den\""))
}

fn parse_matrix(v: &Value, rows: usize, cols: usize, path: &str) -> Result<SparseMatrix, CliError> {
    let arr = v
        .as_array()
        .ok_or_else(|| schema_err(path, "expected an array of rows"))?;
    if arr.len() != rows {
        return Err(schema_err(path, format!("expected {rows} rows")));
    }
    let mut m = SparseMatrix::zero(rows, cols);
    for (i, row) in arr.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| schema_err(&format!("{path}[{i}]"), "expected an array"))?;
        if row.len() != cols {
            return Err(schema_err(&format!("{path}[{i}]"), format!("expected {cols} entries")));
        }
        for (j, x) in row.iter().enumerate() {
            let c = parse_rational(x, &format!("{path}[{i}][{j}]"))?;
            if !c.is_zero() {
                m.set(i, j, c);
            }
        }
    }
    Ok(m)
}

fn parse_algebra(v: &Value, path: &str) -> Result<Algebra, CliError> {
    let dim = v
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| schema_err(&format!("{path}.dim"), "expected a natural number"))?
        as usize;
    let basis = get_array(v, "basis", path)?
        .iter()
        .enumerate()
        .map(|(i, x)| {
            x.as_str()
                .map(str::to_string)
                .ok_or_else(|| schema_err(&format!("{path}.basis[{i}]"), "expected a string"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if basis.len() != dim {
        return Err(schema_err(&format!("{path}.basis"), "length differs from dim"));
    }
    let mut product = vec![vec![SparseVec::new(); dim]; dim];
    for (t, entry) in get_array(v, "structure_constants", path)?.iter().enumerate() {
        let p = format!("{path}.structure_constants[{t}]");
        let quad = entry
            .as_array()
            .filter(|a| a.len() == 4)
            .ok_or_else(|| schema_err(&p, "expected [i, j, k, \"num/den\"]"))?;
        let idx = |slot: usize| -> Result<usize, CliError> {
            quad[slot]
                .as_u64()
                .map(|u| u as usize)
                .filter(|&u| u < dim)
                .ok_or_else(|| schema_err(&p, "index out of range"))
        };
        let (i, j, k) = (idx(0)?, idx(1)?, idx(2)?);
        let c = parse_rational(&quad[3], &p)?;
        if !c.is_zero() {
            product[i][j].insert(k, c);
        }
    }
    let unit = match v.get("unit") {
        None | Some(Value::Null) => None,
        Some(u) => {
            let arr = u
                .as_array()
                .filter(|a| a.len() == dim)
                .ok_or_else(|| schema_err(&format!("{path}.unit"), "expected dim rationals"))?;
            let mut vec = SparseVec::new();
            for (k, x) in arr.iter().enumerate() {
                let c = parse_rational(x, &format!("{path}.unit[{k}]"))?;
                if !c.is_zero() {
                    vec.insert(k, c);
                }
            }
            Some(vec)
        }
    };
    validate_algebra(basis, product, unit).map_err(|e| CliError::Validation(e.to_string()))
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, CliError> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| schema_err("$", format!("invalid JSON: {e}")))?;
    let kind = get_str(&v, "kind", "$")?.to_string();
    let name = v
        .get("name")
        .and_then(Value::as_str)
        .unwrap_or("unnamed")
        .to_string();
    let (instance, decomposition) = match kind.as_str() {
        "semigroup" | "band" => (Instance::Semigroup(parse_semigroup(&v, "$")?), None),
        "clifford" => {
            let shape = parse_shape(&v, "$")?;
            let labels = shape.semigroup().labels().to_vec();
            let groups = get_object(&v, "groups", "$")?;
            let mut components = Vec::with_capacity(shape.size());
            for (e, l) in labels.iter().enumerate() {
                let g = groups
                    .get(l)
                    .ok_or_else(|| schema_err("$.groups", format!("missing group for `{l}`")))?;
                let table = g
                    .as_array()
                    .ok_or_else(|| schema_err(&format!("$.groups.{l}"), "expected a table"))?;
                let table: Vec<Vec<usize>> = table
                    .iter()
                    .map(|row| {
                        row.as_array()
                            .ok_or_else(|| schema_err(&format!("$.groups.{l}"), "bad row"))?
                            .iter()
                            .map(|x| {
                                x.as_u64().map(|u| u as usize).ok_or_else(|| {
                                    schema_err(&format!("$.groups.{l}"), "bad index")
                                })
                            })
                            .collect()
                    })
                    .collect::<Result<_, _>>()?;
                let glabels = (0..table.len()).map(|i| format!("{l}:{i}")).collect();
                let s = validate_semigroup(glabels, table)
                    .map_err(|err| CliError::Validation(format!("group over `{l}`: {err}")))?;
                let _ = e;
                components.push(s);
            }
            let mut transitions = BTreeMap::new();
            for e in 0..shape.size() {
                transitions.insert((e, e), (0..components[e].size()).collect::<Vec<_>>());
            }
            for (key, hom) in get_object(&v, "homs", "$")? {
                let (e, f) = parse_pair_key(key, &labels, "$.homs")?;
                let map: Vec<usize> = hom
                    .as_array()
                    .ok_or_else(|| schema_err(&format!("$.homs.{key}"), "expected an array"))?
                    .iter()
                    .map(|x| {
                        x.as_u64()
                            .map(|u| u as usize)
                            .ok_or_else(|| schema_err(&format!("$.homs.{key}"), "bad index"))
                    })
                    .collect::<Result<_, _>>()?;
                transitions.insert((e, f), map);
            }
            let data = DecompositionData {
                shape,
                components,
                transitions,
            };
            data.validate()
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let diagram = clifford_algebra_diagram(&data)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            (Instance::Diagram(diagram), Some(data))
        }
        "semilattice-diagram" => {
            let shape = parse_shape(&v, "$")?;
            let labels = shape.semigroup().labels().to_vec();
            let algebras_obj = get_object(&v, "algebras", "$")?;
            let mut algebras = Vec::with_capacity(shape.size());
            for l in &labels {
                let a = algebras_obj
                    .get(l)
                    .ok_or_else(|| schema_err("$.algebras", format!("missing algebra for `{l}`")))?;
                algebras.push(parse_algebra(a, &format!("$.algebras.{l}"))?);
            }
            let mut transitions = BTreeMap::new();
            for e in 0..shape.size() {
                transitions.insert((e, e), SparseMatrix::identity(algebras[e].dim()));
            }
            for (key, m) in get_object(&v, "transitions", "$")? {
                let (e, f) = parse_pair_key(key, &labels, "$.transitions")?;
                let mat = parse_matrix(
                    m,
                    algebras[f].dim(),
                    algebras[e].dim(),
                    &format!("$.transitions.{key}"),
                )?;
                transitions.insert((e, f), mat);
            }
            let diagram = SemilatticeDiagram {
                shape,
                algebras,
                transitions,
            };
            diagram
                .validate()
                .map_err(|e| CliError::Validation(e.to_string()))?;
            (Instance::Diagram(diagram), None)
        }
        other => return Err(schema_err("$.kind", format!("unknown kind `{other}`"))),
    };
    Ok(InstanceFile {
        name,
        kind,
        instance,
        decomposition,
    })
}

// ---------------------------------------------------------------------------
// Instance serialization (inverse of parse_instance; used for fixtures)
// ---------------------------------------------------------------------------

fn table_value(table: &[Vec<usize>]) -> Value {
    Value::Array(
        table
            .iter()
            .map(|r| Value::Array(r.iter().map(|&x| Value::from(x as u64)).collect()))
            .collect(),
    )
}

fn semilattice_value(l: &FiniteSemilattice) -> Value {
    serde_json::json!({
        "elements": l.semigroup().labels(),
        "table": table_value(l.semigroup().table()),
    })
}

pub fn semigroup_instance_json(name: &str, kind: &str, s: &FiniteSemigroup) -> String {
    let v = serde_json::json!({
        "kind": kind,
        "name": name,
        "elements": s.labels(),
        "table": table_value(s.table()),
    });
    format!("{}\n", serde_json::to_string_pretty(&v).unwrap())
}

pub fn clifford_instance_json(name: &str, d: &DecompositionData) -> String {
    let labels = d.shape.semigroup().labels();
    let mut groups = serde_json::Map::new();
    for (e, c) in d.components.iter().enumerate() {
        groups.insert(labels[e].clone(), table_value(c.table()));
    }
    let mut homs = serde_json::Map::new();
    for (&(e, f), map) in &d.transitions {
        if e == f {
            continue;
        }
        homs.insert(
            format!("{}<{}", labels[f], labels[e]),
            Value::Array(map.iter().map(|&x| Value::from(x as u64)).collect()),
        );
    }
    let v = serde_json::json!({
        "kind": "clifford",
        "name": name,
        "semilattice": semilattice_value(&d.shape),
        "groups": groups,
        "homs": homs,
    });
    format!("{}\n", serde_json::to_string_pretty(&v).unwrap())
}

fn algebra_value(a: &Algebra) -> Value {
    let mut sc = Vec::new();
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            for (&k, c) in a.basis_product(i, j) {
                sc.push(serde_json::json!([i, j, k, fmt_rat(c)]));
            }
        }
    }
    let zero = Rat::zero();
    let unit = a.unit().map(|u| {
        (0..a.dim())
            .map(|k| fmt_rat(u.get(&k).unwrap_or(&zero)))
            .collect::<Vec<_>>()
    });
    serde_json::json!({
        "dim": a.dim(),
        "basis": a.basis_labels(),
        "structure_constants": sc,
        "unit": unit,
    })
}

pub fn diagram_instance_json(name: &str, d: &SemilatticeDiagram) -> String {
    let labels = d.shape.semigroup().labels();
    let mut algebras = serde_json::Map::new();
    for (e, a) in d.algebras.iter().enumerate() {
        algebras.insert(labels[e].clone(), algebra_value(a));
    }
    let mut transitions = serde_json::Map::new();
    for (&(e, f), m) in &d.transitions {
        if e == f {
            continue;
        }
        let rows: Vec<Value> = (0..m.rows())
            .map(|i| {
                Value::Array((0..m.cols()).map(|j| Value::from(fmt_rat(&m.get(i, j)))).collect())
            })
            .collect();
        transitions.insert(format!("{}<{}", labels[f], labels[e]), Value::Array(rows));
    }
    let v = serde_json::json!({
        "kind": "semilattice-diagram",
        "name": name,
        "semilattice": semilattice_value(&d.shape),
        "algebras": algebras,
        "transitions": transitions,
    });
    format!("{}\n", serde_json::to_string_pretty(&v).unwrap())
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub max_degree: usize,
    pub resource_limit: usize,
    pub direct_solve: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            max_degree: 2,
            resource_limit: DEFAULT_RESOURCE_LIMIT,
            direct_solve: false,
        }
    }
}

fn instance_algebra(inst: &InstanceFile) -> Result<(Algebra, Option<ConvolutionAlgebra>), CliError> {
    match &inst.instance {
        Instance::Semigroup(s) => Ok((semigroup_algebra(s), None)),
        Instance::Diagram(d) => {
            let ca = build_convolution(d).map_err(|e| CliError::Validation(e.to_string()))?;
            Ok((ca.algebra.clone(), Some(ca)))
        }
    }
}

/// The convolution-algebra view of an instance, decomposing semigroups
/// when possible.
fn instance_convolution(inst: &InstanceFile) -> Result<Option<ConvolutionAlgebra>, CliError> {
    match &inst.instance {
        Instance::Diagram(d) => Ok(Some(
            build_convolution(d).map_err(|e| CliError::Validation(e.to_string()))?,
        )),
        Instance::Semigroup(s) => match decompose_strong_semilattice(s) {
            Some(dec) => {
                let diagram = diagram_from_decomposition(&dec.data);
                Ok(Some(
                    build_convolution(&diagram).map_err(|e| CliError::Validation(e.to_string()))?,
                ))
            }
            None => Ok(None),
        },
    }
}

fn err_check(name: &str, e: &dyn std::fmt::Display) -> CheckResult {
    CheckResult::fail(name, &e.to_string())
}

pub fn run_validate(inst: &InstanceFile, cfg: &RunConfig, rep: &mut Report) {
    rep.record_op("parse_instance");
    match &inst.instance {
        Instance::Semigroup(s) => {
            rep.record_op("validate_semigroup");
            rep.record_op("band_class");
            rep.checks.push(
                CheckResult::pass("semigroup-associativity")
                    .with_detail("size", &s.size().to_string()),
            );
            rep.checks.push(
                CheckResult::pass("band-classification")
                    .with_detail("class", &format!("{:?}", band_class(s))),
            );
            rep.record_op("as_semilattice");
            if let Ok(l) = as_semilattice(s) {
                rep.notes.push(format!("semilattice of size {}", l.size()));
            }
        }
        Instance::Diagram(d) => {
            rep.checks.push(match d.validate() {
                Ok(()) => CheckResult::pass("diagram-transitions"),
                Err(e) => err_check("diagram-transitions", &e),
            });
            rep.record_op("build_convolution");
            match build_convolution(d) {
                Ok(ca) => {
                    rep.checks.push(
                        CheckResult::pass("convolution-associativity")
                            .with_detail("dim", &ca.dim().to_string()),
                    );
                }
                Err(e) => rep.checks.push(err_check("convolution-associativity", &e)),
            }
        }
    }
    let _ = cfg;
}

pub fn run_homology(inst: &InstanceFile, cfg: &RunConfig, rep: &mut Report) -> Result<(), CliError> {
    let (a, _) = instance_algebra(inst)?;
    let reg = regular_bimodule(&a);
    rep.record_op("semigroup_algebra");
    rep.record_op("regular_bimodule");
    rep.record_op("face_map");
    rep.record_op("boundary");
    rep.record_op("betti");
    let hom = betti(&a, &reg, cfg.max_degree, cfg.resource_limit)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    rep.push_homology(&hom);
    rep.checks.push(if dd_zero_check(&a, &reg, cfg.max_degree) {
        CheckResult::pass("dd-zero")
    } else {
        CheckResult::fail("dd-zero", "d·d != 0")
    });
    Ok(())
}

pub fn run_cohomology(
    inst: &InstanceFile,
    cfg: &RunConfig,
    rep: &mut Report,
) -> Result<(), CliError> {
    let (a, _) = instance_algebra(inst)?;
    let reg = regular_bimodule(&a);
    rep.record_op("dual_bimodule");
    rep.record_op("symmetric_bimodule_check");
    rep.record_op("cohomology_betti");
    let dual = dual_bimodule(&a, &reg);
    rep.notes.push(format!(
        "regular bimodule symmetric: {}",
        symmetric_bimodule_check(&reg)
    ));
    let co = cohomology_betti(&a, &dual, cfg.max_degree, cfg.resource_limit)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    rep.betti = co;
    Ok(())
}

pub fn run_decompose(inst: &InstanceFile, cfg: &RunConfig, rep: &mut Report) -> Result<(), CliError> {
    let _ = cfg;
    match &inst.instance {
        Instance::Semigroup(s) => {
            rep.record_op("decompose_strong_semilattice");
            match decompose_strong_semilattice(s) {
                Some(dec) => {
                    rep.record_op("assemble_strong_semilattice");
                    let re = assemble_strong_semilattice(&dec.data)
                        .map_err(|e| CliError::Validation(e.to_string()))?;
                    let same = (0..re.size()).all(|gi| {
                        (0..re.size()).all(|gj| {
                            dec.original_of[re.product(gi, gj)]
                                == s.product(dec.original_of[gi], dec.original_of[gj])
                        })
                    });
                    rep.checks.push(if same {
                        CheckResult::pass("reassembly-roundtrip")
                            .with_detail("shape_size", &dec.data.shape.size().to_string())
                    } else {
                        CheckResult::fail("reassembly-roundtrip", "tables differ")
                    });
                }
                None => {
                    rep.checks.push(CheckResult::fail(
                        "decomposition",
                        "not a strong semilattice of groups or rectangular bands",
                    ));
                }
            }
        }
        Instance::Diagram(_) => {
            if let Some(data) = &inst.decomposition {
                rep.record_op("assemble_strong_semilattice");
                rep.record_op("clifford_algebra_diagram");
                let s = assemble_strong_semilattice(data)
                    .map_err(|e| CliError::Validation(e.to_string()))?;
                rep.checks.push(
                    CheckResult::pass("clifford-assembly")
                        .with_detail("assembled_size", &s.size().to_string()),
                );
            } else {
                rep.checks
                    .push(CheckResult::skipped("decomposition", "already a diagram"));
            }
        }
    }
    Ok(())
}

pub fn run_diagonal(inst: &InstanceFile, cfg: &RunConfig, rep: &mut Report) -> Result<(), CliError> {
    let _ = cfg;
    let (a, _) = instance_algebra(inst)?;
    rep.record_op("find_diagonal");
    match find_diagonal(&a) {
        Some(delta) => {
            let ok = check_diagonal(&a, &delta);
            let entries: Vec<String> = delta
                .iter()
                .map(|(&i, c)| format!("({},{})={}", i / a.dim(), i % a.dim(), fmt_rat(c)))
                .collect();
            rep.checks.push(if ok {
                CheckResult::pass("diagonal-conditions").with_detail("delta", &entries.join(" "))
            } else {
                CheckResult::fail("diagonal-conditions", "solver output fails verification")
            });
        }
        None => {
            rep.checks.push(
                CheckResult::pass("diagonal-search")
                    .with_detail("result", "no diagonal (algebra not contractible)"),
            );
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Verification suites
// ---------------------------------------------------------------------------

fn suite_mu_chain_map(ca: &ConvolutionAlgebra, cfg: &RunConfig, rep: &mut Report) {
    rep.record_op("mu_projection");
    rep.record_op("face_map");
    rep.record_op("boundary");
    for n in 0..=cfg.max_degree {
        rep.checks.push(match mu_checks(ca, n) {
            Ok(()) => CheckResult::pass(&format!("mu-chain-map/degree-{n}")),
            Err(e) => err_check(&format!("mu-chain-map/degree-{n}"), &e),
        });
    }
}

fn suite_disintegration(ca: &ConvolutionAlgebra, cfg: &RunConfig, rep: &mut Report) {
    rep.record_op("betti");
    rep.record_op("diag_subcomplex_betti");
    rep.record_op("disintegration_check");
    match disintegration_check(ca, cfg.max_degree, cfg.resource_limit) {
        Ok(v) => {
            let c = CheckResult {
                name: "disintegration".to_string(),
                pass: v.pass,
                details: BTreeMap::from([
                    ("full".to_string(), format!("{:?}", v.full)),
                    ("diagonal".to_string(), format!("{:?}", v.diagonal)),
                ]),
            };
            rep.checks.push(c);
        }
        Err(e) => rep.checks.push(err_check("disintegration", &e)),
    }
}

fn suite_sigma(ca: &ConvolutionAlgebra, cfg: &RunConfig, rep: &mut Report) {
    rep.record_op("sigma_family");
    rep.record_op("free_semilattice");
    rep.record_op("evaluation_hom");
    rep.record_op("pullback");
    let deg = cfg.max_degree.min(2);
    let fam = match sigma_family(ca, deg, cfg.resource_limit) {
        Ok(f) => {
            rep.checks.push(CheckResult::pass("sigma-splitting-identity"));
            for nrm in &f.norms {
                rep.push_norm(nrm);
            }
            Some(f)
        }
        Err(e) => {
            rep.checks.push(err_check("sigma-splitting-identity", &e));
            None
        }
    };
    if cfg.direct_solve {
        rep.record_op("solve_homotopy");
        rep.checks.push(match direct_sigma_family(ca, deg, cfg.resource_limit) {
            Ok(_) => CheckResult::pass("sigma-direct-solve-oracle"),
            Err(e) => err_check("sigma-direct-solve-oracle", &e),
        });
    }
    // exercise the homotopy combinator: with λ = α = μ and t = σ the
    // combined homotopy splits π again
    if let Some(f) = fam {
        rep.record_op("combine_homotopy");
        rep.record_op("solve_homotopy");
        let reg = regular_bimodule(&ca.algebra);
        let top = f.sigmas.len() - 1;
        let d: Vec<SparseMatrix> = (0..top).map(|n| boundary(&ca.algebra, &reg, n)).collect();
        let mu: Vec<SparseMatrix> = (0..=top).map(|n| mu_projection(ca, n)).collect();
        let t = &f.sigmas[..top];
        rep.checks.push(match combine_homotopy(&d, &mu, &mu, t) {
            Ok(_) => CheckResult::pass("sigma-combine-homotopy"),
            Err(e) => err_check("sigma-combine-homotopy", &e),
        });
        // trivial solve: the zero target is always consistent
        if !d.is_empty() {
            let ech = Echelon::new(&d[0]);
            let zero = SparseMatrix::zero(d[0].rows(), 1);
            rep.checks.push(match solve_homotopy(&ech, &zero) {
                Some(_) => CheckResult::pass("solve-homotopy-zero-target"),
                None => CheckResult::fail("solve-homotopy-zero-target", "inconsistent"),
            });
        }
    }
}

fn suite_rect_band(inst: &InstanceFile, cfg: &RunConfig, rep: &mut Report) {
    let Instance::Semigroup(s) = &inst.instance else {
        rep.checks
            .push(CheckResult::skipped("rect-band", "not a semigroup instance"));
        return;
    };
    rep.record_op("band_class");
    if band_class(s) != BandClass::RectangularBand && s.size() != 1 {
        rep.checks
            .push(CheckResult::skipped("rect-band", "not a rectangular band"));
        return;
    }
    rep.record_op("rect_band_homotopy");
    rep.record_op("semigroup_algebra");
    let a = semigroup_algebra(s);
    let reg = regular_bimodule(&a);
    let max_n = cfg.max_degree.max(1).min(3);
    let mut prev = match rect_band_homotopy(s, 0, 0) {
        Ok(m) => m,
        Err(e) => {
            rep.checks.push(err_check("rect-band", &e));
            return;
        }
    };
    for n in 1..=max_n {
        let sn = rect_band_homotopy(s, 0, n).expect("band verified above");
        let lhs = boundary(&a, &reg, n)
            .mul(&sn)
            .add(&prev.mul(&boundary(&a, &reg, n - 1)));
        let dim = ChainIndex::new(s.size(), s.size(), n).dim();
        rep.checks.push(if lhs == SparseMatrix::identity(dim) {
            CheckResult::pass(&format!("rect-band/degree-{n}"))
        } else {
            CheckResult::fail(&format!("rect-band/degree-{n}"), "homotopy identity fails")
        });
        prev = sn;
    }
    rep.notes
        .push("degree-0 identity omitted: d0·s0 maps e_x to e_x − e_z".to_string());
}

fn suite_unit(ca: &ConvolutionAlgebra, rep: &mut Report) {
    rep.record_op("unit_check");
    rep.record_op("l1L_action");
    let u = unit_check(ca);
    match (&u.unit, u.block_checks_pass, u.coefficient_identity_pass) {
        (Some(vec), Some(b), Some(c)) => {
            let coeffs: Vec<String> = vec.iter().map(|(&e, l)| format!("{e}:{}", fmt_rat(l))).collect();
            rep.checks.push(CheckResult {
                name: "unit".to_string(),
                pass: b && c,
                details: BTreeMap::from([
                    ("shape_unit".to_string(), coeffs.join(" ")),
                    ("block_action".to_string(), b.to_string()),
                    ("coefficient_identity".to_string(), c.to_string()),
                ]),
            });
        }
        _ => {
            rep.checks
                .push(CheckResult::skipped("unit", "shape algebra has no unit"));
        }
    }
}

fn suite_relative(ca: &ConvolutionAlgebra, cfg: &RunConfig, rep: &mut Report) {
    rep.record_op("normalized_subspace");
    rep.record_op("relative_betti");
    rep.record_op("find_diagonal");
    rep.record_op("l1L_action");
    let act = l1l_kaction(ca);
    let reg = regular_bimodule(&ca.algebra);
    let rel = match crate::homology::relative_betti(
        &ca.algebra,
        &reg,
        &act,
        cfg.max_degree,
        cfg.resource_limit,
    ) {
        Ok(r) => r,
        Err(e) => {
            rep.checks.push(err_check("relative-betti", &e));
            return;
        }
    };
    let full = match betti(&ca.algebra, &reg, cfg.max_degree, cfg.resource_limit) {
        Ok(r) => r.betti_vector(),
        Err(e) => {
            rep.checks.push(err_check("relative-betti", &e));
            return;
        }
    };
    let shape_alg = semigroup_algebra(ca.diagram.shape.semigroup());
    let contractible = find_diagonal(&shape_alg)
        .map(|d| check_diagonal(&shape_alg, &d))
        .unwrap_or(false);
    let mut c = CheckResult {
        name: "relative-betti".to_string(),
        pass: true,
        details: BTreeMap::from([
            ("relative".to_string(), format!("{rel:?}")),
            ("full".to_string(), format!("{full:?}")),
            ("shape_algebra_contractible".to_string(), contractible.to_string()),
        ]),
    };
    if contractible && rel != full {
        c.pass = false;
        c.details.insert(
            "reason".to_string(),
            "contractible shape but relative homology differs".to_string(),
        );
    }
    rep.checks.push(c);
}

fn suite_transfer(ca: &ConvolutionAlgebra, cfg: &RunConfig, rep: &mut Report) {
    rep.record_op("evaluation_hom");
    rep.record_op("pullback");
    rep.record_op("transfer_hom");
    rep.record_op("transfer_chain");
    rep.record_op("validate_hom");
    rep.record_op("free_semilattice");
    let l = &ca.diagram.shape;
    let deg = cfg.max_degree.min(2);
    // identity transfer
    let id = SemilatticeHom::identity(l);
    rep.checks.push(match transfer_checks(&id, ca, ca, deg) {
        Ok(()) => CheckResult::pass("transfer/identity"),
        Err(e) => err_check("transfer/identity", &e),
    });
    // evaluation homs from the free semilattice on two generators
    let mut count = 0usize;
    'outer: for e in 0..l.size() {
        for f in 0..l.size() {
            if e == f && l.size() > 1 {
                continue;
            }
            let alpha = evaluation_hom(l, &[e, f]);
            let source = match build_convolution(&pullback(&alpha, &ca.diagram)) {
                Ok(c) => c,
                Err(err) => {
                    rep.checks.push(err_check("transfer/pullback", &err));
                    continue;
                }
            };
            let name = format!("transfer/eval-{e}-{f}");
            let hom = transfer_hom(&alpha, &source, ca);
            let mult_ok = validate_hom(&hom)
                .map(|v| v.multiplicative_failure.is_none())
                .unwrap_or(false);
            let chain_ok = transfer_checks(&alpha, &source, ca, deg).is_ok();
            // functoriality through a second evaluation
            let f2 = free_semilattice(2).expect("small free semilattice");
            let beta = evaluation_hom(&f2, &[0, 2]);
            let composed = alpha.compose(&beta);
            let mid = build_convolution(&pullback(&beta, &source.diagram)).expect("pullback");
            let tau_ab = transfer_hom(&composed, &mid, ca).matrix;
            let tau_a = transfer_hom(&alpha, &source, ca).matrix;
            let tau_b = transfer_hom(&beta, &mid, &source).matrix;
            let functorial =
                transfer_chain(&tau_ab, 1) == transfer_chain(&tau_a, 1).mul(&transfer_chain(&tau_b, 1));
            rep.checks.push(if mult_ok && chain_ok && functorial {
                CheckResult::pass(&name)
            } else {
                CheckResult::fail(
                    &name,
                    &format!(
                        "multiplicative={mult_ok} chain_and_natural={chain_ok} functorial={functorial}"
                    ),
                )
            });
            count += 1;
            if count >= 4 {
                break 'outer;
            }
        }
    }
}

fn suite_normalised(ca: &ConvolutionAlgebra, cfg: &RunConfig, rep: &mut Report) {
    rep.record_op("normalized_subspace");
    rep.record_op("mu_projection");
    let act = l1l_kaction(ca);
    let reg = regular_bimodule(&ca.algebra);
    let deg = cfg.max_degree.min(2);
    let subs: Vec<_> = (0..=deg + 1)
        .map(|n| normalized_subspace(ca.dim(), ca.dim(), &act, n))
        .collect();
    for n in 1..=deg {
        let pi = pi_projection(ca, n);
        let dim = ChainIndex::new(ca.dim(), ca.dim(), n).dim();
        let member = (0..dim).all(|j| subs[n].contains(&pi.apply(&unit_vec(j))));
        rep.checks.push(if member {
            CheckResult::pass(&format!("normalised/pi-image-degree-{n}"))
        } else {
            CheckResult::fail(
                &format!("normalised/pi-image-degree-{n}"),
                "pi image escapes the normalised subspace",
            )
        });
    }
    for n in 0..=deg {
        let d = boundary(&ca.algebra, &reg, n);
        let sub_ok = subs[n + 1].vectors().iter().all(|w| subs[n].contains(&d.apply(w)));
        rep.checks.push(if sub_ok {
            CheckResult::pass(&format!("normalised/subcomplex-degree-{}", n + 1))
        } else {
            CheckResult::fail(
                &format!("normalised/subcomplex-degree-{}", n + 1),
                "boundary leaves the normalised subspace",
            )
        });
    }
}

pub fn run_verify(
    inst: &InstanceFile,
    cfg: &RunConfig,
    suites: &[&str],
    rep: &mut Report,
) -> Result<(), CliError> {
    let all = suites.contains(&"all");
    let want = |s: &str| all || suites.contains(&s);
    let conv = instance_convolution(inst)?;
    let conv_or_skip = |rep: &mut Report, suite: &str| -> bool {
        if conv.is_none() {
            rep.checks.push(CheckResult::skipped(
                suite,
                "instance has no strong-semilattice structure",
            ));
        }
        conv.is_some()
    };
    if want("mu-chain-map") && conv_or_skip(rep, "mu-chain-map") {
        suite_mu_chain_map(conv.as_ref().unwrap(), cfg, rep);
    }
    if want("disintegration") && conv_or_skip(rep, "disintegration") {
        suite_disintegration(conv.as_ref().unwrap(), cfg, rep);
    }
    if want("sigma") && conv_or_skip(rep, "sigma") {
        suite_sigma(conv.as_ref().unwrap(), cfg, rep);
    }
    if want("rect-band") {
        suite_rect_band(inst, cfg, rep);
    }
    if want("unit") && conv_or_skip(rep, "unit") {
        suite_unit(conv.as_ref().unwrap(), rep);
    }
    if want("relative") && conv_or_skip(rep, "relative") {
        suite_relative(conv.as_ref().unwrap(), cfg, rep);
    }
    if want("transfer") && conv_or_skip(rep, "transfer") {
        suite_transfer(conv.as_ref().unwrap(), cfg, rep);
    }
    if want("normalised") && conv_or_skip(rep, "normalised") {
        suite_normalised(conv.as_ref().unwrap(), cfg, rep);
    }
    if all {
        // the core computations also run under `verify all`
        run_validate(inst, cfg, rep);
        run_homology(inst, cfg, rep)?;
        run_cohomology(inst, cfg, rep)?;
        run_decompose(inst, cfg, rep)?;
        run_diagonal(inst, cfg, rep)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Entry point, cache, and flags
// ---------------------------------------------------------------------------

#[derive(Debug, Args, Clone)]
pub struct CommonOpts {
    /// Highest homological degree to compute
    #[arg(long, default_value_t = 2)]
    pub max_degree: usize,
    /// Write the JSON report to this path
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Cache directory for reports (also settable via SLALG_CACHE_DIR)
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Refuse chain spaces with more basis tensors than this
    #[arg(long, default_value_t = DEFAULT_RESOURCE_LIMIT)]
    pub resource_limit: usize,
    /// Cross-check the splitting family against a direct linear solve
    #[arg(long, default_value_t = false)]
    pub direct_solve: bool,
}

#[derive(Debug, Parser)]
#[command(name = "slalg", about = "Exact homology of semilattice convolution algebras")]
pub struct CliArgs {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Validate an instance file
    Validate {
        instance: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Betti numbers of the instance's algebra with regular coefficients
    Homology {
        instance: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Cohomology Betti numbers with dual regular coefficients
    Cohomology {
        instance: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Decompose a semigroup as a strong semilattice, or assemble a
    /// clifford instance, and verify the round trip
    Decompose {
        instance: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Search for a diagonal witnessing contractibility
    Diagonal {
        instance: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Run verification suites (a suite name or "all")
    Verify {
        instance: PathBuf,
        #[arg(default_value = "all")]
        suite: String,
        /// Alternative way to select a suite
        #[arg(long)]
        suite_flag: Option<String>,
        #[command(flatten)]
        opts: CommonOpts,
    },
}

fn cache_dir(opts: &CommonOpts) -> Option<PathBuf> {
    opts.cache
        .clone()
        .or_else(|| std::env::var(CACHE_ENV_VAR).ok().map(PathBuf::from))
}

fn cache_key(instance_text: &str, command: &str, cfg: &RunConfig) -> String {
    let mut h = Sha256::new();
    h.update(instance_text.as_bytes());
    h.update(command.as_bytes());
    h.update(format!("{}|{}|{}", cfg.max_degree, cfg.resource_limit, cfg.direct_solve).as_bytes());
    format!("{:x}", h.finalize())
}

/// Execute a parsed command against instance text. Returns the report.
pub fn execute(
    command_name: &str,
    suites: &[&str],
    instance_text: &str,
    cfg: &RunConfig,
    cache: Option<&Path>,
) -> Result<Report, CliError> {
    let key = cache_key(instance_text, &format!("{command_name}:{}", suites.join(",")), cfg);
    if let Some(dir) = cache {
        let path = dir.join(format!("{key}.json"));
        if let Ok(text) = std::fs::read_to_string(&path) {
            if let Ok(rep) = Report::from_json(&text) {
                return Ok(rep);
            }
        }
    }
    let start = Instant::now();
    let inst = parse_instance(instance_text)?;
    let mut rep = Report::new(
        command_name,
        &inst.name,
        &inst.kind,
        cfg.max_degree,
        cfg.resource_limit,
    );
    match command_name {
        "validate" => run_validate(&inst, cfg, &mut rep),
        "homology" => run_homology(&inst, cfg, &mut rep)?,
        "cohomology" => run_cohomology(&inst, cfg, &mut rep)?,
        "decompose" => run_decompose(&inst, cfg, &mut rep)?,
        "diagonal" => run_diagonal(&inst, cfg, &mut rep)?,
        "verify" => run_verify(&inst, cfg, suites, &mut rep)?,
        other => return Err(CliError::Validation(format!("unknown command `{other}`"))),
    }
    rep.timings.total_ms = start.elapsed().as_millis();
    if let Some(dir) = cache {
        if std::fs::create_dir_all(dir).is_ok() {
            let _ = std::fs::write(dir.join(format!("{key}.json")), rep.to_json());
        }
    }
    Ok(rep)
}

/// Parse argv, run, print, and return the process exit code.
pub fn main_entry<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match CliArgs::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            // clap handles --help/--version with success exit codes
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (name, instance, opts, suites) = match &args.command {
        CliCommand::Validate { instance, opts } => ("validate", instance, opts, vec![]),
        CliCommand::Homology { instance, opts } => ("homology", instance, opts, vec![]),
        CliCommand::Cohomology { instance, opts } => ("cohomology", instance, opts, vec![]),
        CliCommand::Decompose { instance, opts } => ("decompose", instance, opts, vec![]),
        CliCommand::Diagonal { instance, opts } => ("diagonal", instance, opts, vec![]),
        CliCommand::Verify {
            instance,
            suite,
            suite_flag,
            opts,
        } => {
            let chosen = suite_flag.clone().unwrap_or_else(|| suite.clone());
            if chosen != "all" && !SUITES.contains(&chosen.as_str()) {
                eprintln!("unknown suite `{chosen}`; available: all, {}", SUITES.join(", "));
                return 2;
            }
            ("verify", instance, opts, vec![chosen])
        }
    };
    let text = match std::fs::read_to_string(instance) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", instance.display());
            return 2;
        }
    };
    let cfg = RunConfig {
        max_degree: opts.max_degree,
        resource_limit: opts.resource_limit,
        direct_solve: opts.direct_solve,
    };
    let suite_refs: Vec<&str> = suites.iter().map(String::as_str).collect();
    let cache = cache_dir(opts);
    match execute(name, &suite_refs, &text, &cfg, cache.as_deref()) {
        Ok(rep) => {
            print!("{}", rep.render());
            if let Some(out) = &opts.out {
                if let Err(e) = std::fs::write(out, rep.to_json()) {
                    eprintln!("cannot write {}: {e}", out.display());
                    return 2;
                }
            }
            if rep.all_pass() {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("{e}");
            2
        }
    }
}

/// The operations from the computational modules that `verify all` over the
/// fixture set must exercise; enforced by the coverage test.
pub const COVERAGE_MANIFEST: [&str; 33] = [
    "validate_semigroup",
    "as_semilattice",
    "free_semilattice",
    "band_class",
    "assemble_strong_semilattice",
    "decompose_strong_semilattice",
    "semigroup_algebra",
    "validate_hom",
    "regular_bimodule",
    "dual_bimodule",
    "symmetric_bimodule_check",
    "build_convolution",
    "clifford_algebra_diagram",
    "l1L_action",
    "unit_check",
    "pullback",
    "transfer_hom",
    "evaluation_hom",
    "face_map",
    "boundary",
    "betti",
    "mu_projection",
    "diag_subcomplex_betti",
    "disintegration_check",
    "normalized_subspace",
    "relative_betti",
    "find_diagonal",
    "solve_homotopy",
    "combine_homotopy",
    "sigma_family",
    "transfer_chain",
    "rect_band_homotopy",
    "cohomology_betti",
];
