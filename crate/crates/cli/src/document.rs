//! JSON documents: the system document (shift, group, `psi`, optional
//! cocycle) and the solution document.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use livsic_core::abelian::{Alpha, CohomologySolution};
use livsic_core::cocycle::{LocallyConstantCocycle, RationalCocycle};
use livsic_core::group::{parse_cycles, FiniteGroup, Group, GroupElement, GroupSpec};
use livsic_core::matrix::Mat;
use livsic_core::nonabelian::{MatrixCocycle, MatrixResiduals, MatrixSolution};
use livsic_core::sft::SftSpec;
use livsic_core::skew::SkewSystem;
use livsic_core::{Limits, Rational, Word};

use crate::error::CliError;

/// Tolerance used when checking declared algebras read from documents.
pub const ALGEBRA_TOL: f64 = 1e-9;

fn at(ptr: &str, key: impl std::fmt::Display) -> String {
    format!("{ptr}/{key}")
}

fn get<'a>(v: &'a Value, key: &str, ptr: &str) -> Result<&'a Value, CliError> {
    v.get(key).ok_or_else(|| CliError::parse(format!("missing field {key:?}"), ptr))
}

fn as_object<'a>(v: &'a Value, ptr: &str) -> Result<&'a Map<String, Value>, CliError> {
    v.as_object().ok_or_else(|| CliError::parse("expected an object", ptr))
}

fn as_array<'a>(v: &'a Value, ptr: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| CliError::parse("expected an array", ptr))
}

fn as_str<'a>(v: &'a Value, ptr: &str) -> Result<&'a str, CliError> {
    v.as_str().ok_or_else(|| CliError::parse("expected a string", ptr))
}

fn as_usize(v: &Value, ptr: &str) -> Result<usize, CliError> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| CliError::parse("expected a non-negative integer", ptr))
}

pub fn parse_rational(v: &Value, ptr: &str) -> Result<Rational, CliError> {
    match v {
        Value::String(s) => s.trim().parse::<Rational>().map_err(|_| CliError::parse(format!("bad rational {s:?}"), ptr)),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap().into())),
        _ => Err(CliError::parse("expected a rational string such as \"3/4\"", ptr)),
    }
}

pub fn rational_value(r: &Rational) -> Value {
    Value::String(r.to_string())
}

fn parse_real(v: &Value, ptr: &str) -> Result<f64, CliError> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| CliError::parse("bad number", ptr)),
        Value::String(_) => {
            let r = parse_rational(v, ptr)?;
            Ok(ratio_to_f64(&r))
        }
        _ => Err(CliError::parse("expected a number", ptr)),
    }
}

fn ratio_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn parse_matrix(v: &Value, ptr: &str) -> Result<Mat, CliError> {
    let rows = as_array(v, ptr)?;
    let n = rows.len();
    let mut out = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        let p = at(ptr, i);
        let entries = as_array(row, &p)?;
        if entries.len() != n {
            return Err(CliError::parse(format!("matrix must be square: row has {} entries, expected {n}", entries.len()), &p));
        }
        out.push(entries.iter().enumerate().map(|(j, x)| parse_real(x, &at(&p, j))).collect::<Result<Vec<f64>, _>>()?);
    }
    if n == 0 {
        return Err(CliError::parse("empty matrix", ptr));
    }
    Ok(Mat::from_rows(&out))
}

pub fn matrix_value(m: &Mat) -> Value {
    Value::Array(m.rows().into_iter().map(|r| Value::Array(r.into_iter().map(float_value).collect())).collect())
}

pub fn float_value(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or_else(|| Value::String(format!("{x}")))
}

pub fn word_key(w: &Word) -> String {
    w.to_string()
}

fn parse_word(text: &str, k: usize, ptr: &str) -> Result<Word, CliError> {
    Word::parse(text, k).map_err(|e| CliError::core(&e).at(ptr))
}

/// A parsed cocycle of either kind.
#[derive(Debug, Clone)]
pub enum Cocycle {
    Rational(RationalCocycle),
    Matrix(MatrixCocycle),
}

#[derive(Debug, Clone)]
pub struct SystemDocument {
    pub raw: Value,
    pub system: SkewSystem,
    pub cocycle: Option<Cocycle>,
}

impl SystemDocument {
    pub fn parse(text: &str, limits: &Limits) -> Result<Self, CliError> {
        let raw: Value = serde_json::from_str(text).map_err(|e| CliError::parse(format!("invalid JSON: {e}"), ""))?;
        let sft = parse_sft(get(&raw, "sft", "")?, "/sft")?;
        livsic_core::sft::validate_sft(&sft).map_err(|e| CliError::core(&e).at("/sft/transition"))?;
        let group = parse_group(get(&raw, "group", "")?, "/group", limits)?;
        let psi_raw = as_array(get(&raw, "psi", "")?, "/psi")?;
        if psi_raw.len() != sft.alphabet_size() {
            return Err(CliError::parse(format!("psi needs {} entries, found {}", sft.alphabet_size(), psi_raw.len()), "/psi"));
        }
        let psi = psi_raw.iter().enumerate().map(|(i, v)| parse_element(&group, v, &at("/psi", i))).collect::<Result<Vec<_>, _>>()?;
        let system = SkewSystem::new(sft, group, psi).map_err(|e| CliError::core(&e).at("/psi"))?;
        let cocycle = match raw.get("cocycle") {
            None | Some(Value::Null) => None,
            Some(c) => Some(parse_cocycle(c, "/cocycle", system.sft())?),
        };
        Ok(SystemDocument { raw, system, cocycle })
    }

    /// The same document with its cocycle replaced.
    pub fn with_cocycle(&self, cocycle: &Cocycle) -> Value {
        let mut raw = self.raw.clone();
        raw.as_object_mut().expect("parsed as an object").insert("cocycle".into(), cocycle_value(cocycle));
        raw
    }
}

fn parse_sft(v: &Value, ptr: &str) -> Result<SftSpec, CliError> {
    let k = as_usize(get(v, "k", ptr)?, &at(ptr, "k"))?;
    let tp = at(ptr, "transition");
    let rows = as_array(get(v, "transition", ptr)?, &tp)?;
    let mut matrix = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let rp = at(&tp, i);
        let entries = as_array(row, &rp)?;
        let parsed = entries
            .iter()
            .enumerate()
            .map(|(j, x)| match x.as_u64() {
                Some(b @ (0 | 1)) => Ok(b as u8),
                _ => Err(CliError::parse("transition entries must be 0 or 1", &at(&rp, j))),
            })
            .collect::<Result<Vec<u8>, _>>()?;
        matrix.push(parsed);
    }
    if matrix.len() != k {
        return Err(CliError::parse(format!("k = {k} but the transition matrix has {} rows", matrix.len()), &tp));
    }
    SftSpec::new(&matrix).map_err(|e| CliError::core(&e).at(&tp))
}

fn parse_group(v: &Value, ptr: &str, limits: &Limits) -> Result<Group, CliError> {
    let kind = as_str(get(v, "type", ptr)?, &at(ptr, "type"))?;
    let spec = match kind {
        "cyclic" => GroupSpec::Cyclic { order: as_usize(get(v, "order", ptr)?, &at(ptr, "order"))? },
        "free_abelian" => GroupSpec::FreeAbelian { rank: as_usize(get(v, "rank", ptr)?, &at(ptr, "rank"))? },
        "table" => {
            let np = at(ptr, "names");
            let names = as_array(get(v, "names", ptr)?, &np)?
                .iter()
                .enumerate()
                .map(|(i, n)| as_str(n, &at(&np, i)).map(str::to_string))
                .collect::<Result<Vec<String>, _>>()?;
            let tp = at(ptr, "table");
            let rows = as_array(get(v, "table", ptr)?, &tp)?;
            let mut table = Vec::with_capacity(rows.len());
            for (i, row) in rows.iter().enumerate() {
                let rp = at(&tp, i);
                let entries = as_array(row, &rp)?;
                let parsed = entries
                    .iter()
                    .enumerate()
                    .map(|(j, x)| {
                        let p = at(&rp, j);
                        match x {
                            Value::String(s) => names.iter().position(|n| n == s).ok_or_else(|| CliError::parse(format!("unknown element {s:?}"), &p)),
                            _ => as_usize(x, &p),
                        }
                    })
                    .collect::<Result<Vec<usize>, _>>()?;
                table.push(parsed);
            }
            GroupSpec::Table { names, table }
        }
        "permutation" => {
            let degree = as_usize(get(v, "degree", ptr)?, &at(ptr, "degree"))?;
            let gp = at(ptr, "generators");
            let generators = as_array(get(v, "generators", ptr)?, &gp)?
                .iter()
                .enumerate()
                .map(|(i, g)| {
                    let p = at(&gp, i);
                    match g {
                        Value::String(s) => parse_cycles(s, degree).map_err(|e| CliError::core(&e).at(&p)),
                        _ => as_array(g, &p)?.iter().enumerate().map(|(j, x)| as_usize(x, &at(&p, j))).collect(),
                    }
                })
                .collect::<Result<Vec<Vec<usize>>, _>>()?;
            GroupSpec::Permutation { degree, generators }
        }
        other => return Err(CliError::parse(format!("unknown group type {other:?}"), &at(ptr, "type"))),
    };
    Group::build(&spec, limits).map_err(|e| CliError::core(&e).at(ptr))
}

fn parse_element(group: &Group, v: &Value, ptr: &str) -> Result<GroupElement, CliError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() => n.to_string(),
        Value::Array(xs) => {
            let parts = xs.iter().enumerate().map(|(i, x)| x.as_i64().map(|n| n.to_string()).ok_or_else(|| CliError::parse("expected an integer", &at(ptr, i)))).collect::<Result<Vec<_>, _>>()?;
            format!("({})", parts.join(","))
        }
        _ => return Err(CliError::parse("expected a group element", ptr)),
    };
    group.parse(&text).map_err(|e| CliError::core(&e).at(ptr))
}

pub fn parse_cocycle(v: &Value, ptr: &str, sft: &SftSpec) -> Result<Cocycle, CliError> {
    let kind = as_str(get(v, "kind", ptr)?, &at(ptr, "kind"))?;
    let range = as_usize(get(v, "range", ptr)?, &at(ptr, "range"))?;
    let vp = at(ptr, "values");
    let values = as_object(get(v, "values", ptr)?, &vp)?;
    match kind {
        "rational" => {
            let mut map = BTreeMap::new();
            for (key, x) in values {
                let p = at(&vp, key);
                map.insert(parse_word(key, sft.alphabet_size(), &p)?, parse_rational(x, &p)?);
            }
            let c = LocallyConstantCocycle::new(sft.clone(), range, map).map_err(|e| CliError::core(&e).at(&vp))?;
            Ok(Cocycle::Rational(c))
        }
        "matrix" => {
            let mut map = BTreeMap::new();
            for (key, x) in values {
                let p = at(&vp, key);
                map.insert(parse_word(key, sft.alphabet_size(), &p)?, parse_matrix(x, &p)?);
            }
            let c = LocallyConstantCocycle::new(sft.clone(), range, map).map_err(|e| CliError::core(&e).at(&vp))?;
            let algebra = match v.get("algebra") {
                None | Some(Value::Null) => None,
                Some(a) => Some(parse_algebra(a, &at(ptr, "algebra"))?),
            };
            let m = MatrixCocycle::new(c, algebra, ALGEBRA_TOL).map_err(|e| CliError::core(&e).at(ptr))?;
            Ok(Cocycle::Matrix(m))
        }
        other => Err(CliError::parse(format!("unknown cocycle kind {other:?}"), &at(ptr, "kind"))),
    }
}

pub fn parse_algebra(v: &Value, ptr: &str) -> Result<Vec<Mat>, CliError> {
    as_array(v, ptr)?.iter().enumerate().map(|(i, m)| parse_matrix(m, &at(ptr, i))).collect()
}

pub fn cocycle_value(c: &Cocycle) -> Value {
    match c {
        Cocycle::Rational(f) => json!({
            "kind": "rational",
            "range": f.range(),
            "values": f.values().iter().map(|(w, r)| (word_key(w), rational_value(r))).collect::<Map<_, _>>(),
        }),
        Cocycle::Matrix(f) => {
            let mut v = json!({
                "kind": "matrix",
                "range": f.values().range(),
                "values": f.values().values().iter().map(|(w, m)| (word_key(w), matrix_value(m))).collect::<Map<_, _>>(),
            });
            if let Some(a) = f.algebra() {
                v["algebra"] = Value::Array(a.iter().map(matrix_value).collect());
            }
            v
        }
    }
}

/// Map of block words to values, as read from `--u` files and solution
/// documents. All keys must have one length, which is returned.
pub fn parse_block_map<T>(
    v: &Value,
    ptr: &str,
    k: usize,
    mut value: impl FnMut(&Value, &str) -> Result<T, CliError>,
) -> Result<(usize, BTreeMap<Word, T>), CliError> {
    let obj = as_object(v, ptr)?;
    let mut out = BTreeMap::new();
    let mut len = None;
    for (key, x) in obj {
        let p = at(ptr, key);
        let w = parse_word(key, k, &p)?;
        if *len.get_or_insert(w.len()) != w.len() {
            return Err(CliError::parse("all blocks must have the same length", &p));
        }
        out.insert(w, value(x, &p)?);
    }
    let len = len.ok_or_else(|| CliError::parse("no blocks given", ptr))?;
    Ok((len, out))
}

/// Solution of either kind.
#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    Rational(CohomologySolution),
    Matrix(MatrixSolution),
}

/// A solution with its certification and provenance blocks. Those two
/// blocks, and any other top-level fields, are carried through verbatim.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionDocument {
    pub solution: Solution,
    pub extra: Map<String, Value>,
}

fn alpha_keys(group: &Group) -> Vec<String> {
    match group {
        Group::Finite(g) => g.names().to_vec(),
        Group::FreeAbelian { rank } => (1..=*rank).map(|i| format!("e{i}")).collect(),
    }
}

impl SolutionDocument {
    pub fn to_value(&self, group: &Group) -> Value {
        let mut obj = self.extra.clone();
        let keys = alpha_keys(group);
        match &self.solution {
            Solution::Rational(s) => {
                let alpha: Map<String, Value> = match &s.alpha {
                    Alpha::Finite(v) | Alpha::Linear(v) => keys.iter().cloned().zip(v.iter().map(rational_value)).collect(),
                };
                obj.insert("kind".into(), json!("rational"));
                obj.insert("block_length".into(), json!(s.block_length));
                obj.insert("u".into(), Value::Object(s.u.iter().map(|(w, r)| (word_key(w), rational_value(r))).collect()));
                obj.insert("alpha".into(), Value::Object(alpha));
                obj.insert("alpha_is_zero".into(), json!(s.alpha.is_zero()));
            }
            Solution::Matrix(s) => {
                let identity = Mat::identity(s.alpha.first().map_or(0, Mat::dim));
                obj.insert("kind".into(), json!("matrix"));
                obj.insert("block_length".into(), json!(s.block_length));
                obj.insert("u".into(), Value::Object(s.u.iter().map(|(w, m)| (word_key(w), matrix_value(m))).collect()));
                obj.insert("alpha".into(), Value::Object(keys.iter().cloned().zip(s.alpha.iter().map(matrix_value)).collect()));
                obj.insert("alpha_is_zero".into(), json!(s.alpha.iter().all(|a| *a == identity)));
            }
        }
        Value::Object(obj)
    }

    pub fn parse(text: &str, system: &SkewSystem) -> Result<Self, CliError> {
        let raw: Value = serde_json::from_str(text).map_err(|e| CliError::parse(format!("invalid JSON: {e}"), ""))?;
        let obj = as_object(&raw, "")?;
        let kind = as_str(get(&raw, "kind", "")?, "/kind")?;
        let block_length = as_usize(get(&raw, "block_length", "")?, "/block_length")?;
        let k = system.sft().alphabet_size();
        let keys = alpha_keys(system.group());
        let alpha_obj = as_object(get(&raw, "alpha", "")?, "/alpha")?;
        if alpha_obj.len() != keys.len() || keys.iter().any(|key| !alpha_obj.contains_key(key)) {
            return Err(CliError::parse(format!("alpha must have exactly the keys {keys:?}"), "/alpha"));
        }
        let solution = match kind {
            "rational" => {
                let (len, u) = parse_block_map(get(&raw, "u", "")?, "/u", k, parse_rational)?;
                check_block_length(len, block_length)?;
                let values = keys.iter().map(|key| parse_rational(&alpha_obj[key], &at("/alpha", key))).collect::<Result<Vec<_>, _>>()?;
                let alpha = if system.group().is_finite() { Alpha::Finite(values) } else { Alpha::Linear(values) };
                Solution::Rational(CohomologySolution { block_length, u, alpha })
            }
            "matrix" => {
                let (len, u) = parse_block_map(get(&raw, "u", "")?, "/u", k, parse_matrix)?;
                check_block_length(len, block_length)?;
                let alpha = keys.iter().map(|key| parse_matrix(&alpha_obj[key], &at("/alpha", key))).collect::<Result<Vec<_>, _>>()?;
                let tolerance = raw.pointer("/certification/tolerance").and_then(Value::as_f64).unwrap_or(livsic_core::nonabelian::SOLUTION_TOL);
                Solution::Matrix(MatrixSolution { block_length, u, alpha, residuals: MatrixResiduals::default(), tolerance })
            }
            other => return Err(CliError::parse(format!("unknown solution kind {other:?}"), "/kind")),
        };
        let extra = obj
            .iter()
            .filter(|(key, _)| !matches!(key.as_str(), "kind" | "block_length" | "u" | "alpha" | "alpha_is_zero"))
            .map(|(key, v)| (key.clone(), v.clone()))
            .collect();
        Ok(SolutionDocument { solution, extra })
    }
}

fn check_block_length(found: usize, declared: usize) -> Result<(), CliError> {
    if found != declared {
        return Err(CliError::parse(format!("blocks have length {found} but block_length is {declared}"), "/u"));
    }
    Ok(())
}

/// `(symbol-or-block, element)` as JSON.
pub fn vertex_value(words: &[Word], group: &FiniteGroup, vertex: (usize, usize)) -> Value {
    json!({ "block": word_key(&words[vertex.0]), "element": group.name(vertex.1) })
}

/// Pretty JSON with a trailing newline. Keys come out sorted.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
