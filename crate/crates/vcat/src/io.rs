//! JSON descriptions of quantales, spaces, machines, Kripke frames and
//! preorders, and rendering of results.
//!
//! A quantale is either a builtin name (`boolean-2`, `lawvere`,
//! `ultrametric`, `chain-N-eK`) or an object
//!
//! ```json
//! {"kind": "table", "elements": ["bot", "a", "b", "top"],
//!  "order_pairs": [["bot", "a"], ["bot", "b"], ["a", "top"], ["b", "top"]],
//!  "tensor": {"a,b": "bot", "a,a": "a"}, "unit": "top"}
//! ```
//!
//! Tensor entries may be given for one orientation only. Where a file expects
//! a quantale or a space, a string that is not a builtin name is read as a
//! path relative to the referring file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::coalgebra::{KripkeCoalgebra, MachineCoalgebra};
use crate::error::{Error, Result};
use crate::quantale::{Monoid, QElem, Quantale, QuantaleKind};
use crate::relation::Relation;
use crate::space::{Preorder, VCat};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| parse_err(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| parse_err(format!("{}: {e}", path.display())))
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn from_value<T: for<'de> Deserialize<'de>>(value: Value, what: &str) -> Result<T> {
    serde_json::from_value(value).map_err(|e| parse_err(format!("malformed {what}: {e}")))
}

/// Looks up a builtin quantale by name.
pub fn builtin_quantale(name: &str) -> Option<Quantale> {
    match name {
        "boolean" | "boolean-2" | "2" => Some(Quantale::boolean()),
        "lawvere" => Some(Quantale::lawvere()),
        "ultrametric" => Some(Quantale::ultrametric()),
        _ => {
            let rest = name.strip_prefix("chain-")?;
            let (n, unit) = match rest.split_once("-e") {
                Some((n, u)) => (n.parse().ok()?, Some(u.parse().ok()?)),
                None => (rest.parse().ok()?, None),
            };
            let n: usize = n;
            Quantale::chain(n, unit.unwrap_or(n.max(1) - 1)).ok()
        }
    }
}

/// The builtin name of a quantale, if it has one.
pub fn builtin_name(q: &Quantale) -> Option<String> {
    match q.kind() {
        QuantaleKind::Boolean => Some("boolean-2".into()),
        QuantaleKind::Chain { n, unit } => Some(format!("chain-{n}-e{unit}")),
        QuantaleKind::Lawvere => Some("lawvere".into()),
        QuantaleKind::Ultrametric => Some("ultrametric".into()),
        QuantaleKind::Table | QuantaleKind::FreeCommutativeMonoid => None,
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableFile {
    #[serde(default)]
    #[allow(dead_code)]
    kind: Option<String>,
    elements: Vec<String>,
    #[serde(default)]
    order_pairs: Vec<(String, String)>,
    tensor: BTreeMap<String, String>,
    unit: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MonoidFile {
    elements: Vec<String>,
    op: BTreeMap<String, String>,
    unit: String,
}

fn index_of(names: &[String], name: &str, what: &str) -> Result<usize> {
    names.iter().position(|n| n == name).ok_or_else(|| parse_err(format!("unknown {what} {name:?}")))
}

/// A full binary operation table from `"a,b": "c"` entries, filling in the
/// mirrored entry where only one orientation is given.
fn operation_table(names: &[String], entries: &BTreeMap<String, String>, what: &str) -> Result<Vec<Vec<usize>>> {
    let n = names.len();
    let mut table = vec![vec![None; n]; n];
    for (key, value) in entries {
        let (a, b) = key.split_once(',').ok_or_else(|| parse_err(format!("{what} key {key:?} is not of the form \"a,b\"")))?;
        let (a, b) = (index_of(names, a.trim(), "element")?, index_of(names, b.trim(), "element")?);
        table[a][b] = Some(index_of(names, value, "element")?);
    }
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    table[a][b]
                        .or(table[b][a])
                        .ok_or_else(|| parse_err(format!("{what} has no entry for {},{}", names[a], names[b])))
                })
                .collect()
        })
        .collect()
}

pub fn quantale_from_value(value: Value, dir: &Path) -> Result<Quantale> {
    match value {
        Value::String(name) => match builtin_quantale(&name) {
            Some(q) => Ok(q),
            None if name.ends_with(".json") => load_quantale(&dir.join(name)),
            None => Err(parse_err(format!("unknown quantale {name:?}"))),
        },
        Value::Object(map) => {
            let kind = map.get("kind").and_then(Value::as_str).unwrap_or("table").to_string();
            match kind.as_str() {
                "table" => {
                    let file: TableFile = from_value(Value::Object(map), "quantale table")?;
                    let names = file.elements;
                    let order = file
                        .order_pairs
                        .iter()
                        .map(|(a, b)| Ok((index_of(&names, a, "element")?, index_of(&names, b, "element")?)))
                        .collect::<Result<Vec<_>>>()?;
                    let tensor = operation_table(&names, &file.tensor, "tensor")?;
                    let unit = index_of(&names, &file.unit, "element")?;
                    Quantale::from_table(names, &order, tensor, unit)
                }
                "free-commutative-monoid" => {
                    let monoid = map.get("monoid").cloned().ok_or_else(|| parse_err("missing \"monoid\""))?;
                    let file: MonoidFile = from_value(monoid, "monoid")?;
                    let op = operation_table(&file.elements, &file.op, "monoid operation")?;
                    let unit = index_of(&file.elements, &file.unit, "monoid element")?;
                    Quantale::free_commutative_monoid(Monoid { names: file.elements, op, unit })
                }
                "chain" => {
                    let size = map.get("size").and_then(Value::as_u64).ok_or_else(|| parse_err("chain needs \"size\""))?;
                    let unit = map.get("unit").and_then(Value::as_u64).unwrap_or(size.saturating_sub(1));
                    Quantale::chain(size as usize, unit as usize)
                }
                other => builtin_quantale(other).ok_or_else(|| parse_err(format!("unknown quantale kind {other:?}"))),
            }
        }
        other => Err(parse_err(format!("expected a quantale name or object, found {other}"))),
    }
}

pub fn load_quantale(path: &Path) -> Result<Quantale> {
    quantale_from_value(read_json(path)?, &base_dir(path))
}

/// The quantale by builtin name or, failing that, as a file.
pub fn quantale_by_name_or_path(spec: &str) -> Result<Quantale> {
    match builtin_quantale(spec) {
        Some(q) => Ok(q),
        None => load_quantale(Path::new(spec)),
    }
}

pub fn quantale_to_value(q: &Quantale) -> Value {
    if let Some(name) = builtin_name(q) {
        return Value::String(name);
    }
    let names = q.element_names().expect("finite quantale").to_vec();
    let elements = q.elements().expect("finite quantale");
    let name = |r: QElem| q.format_elem(r);
    if let Some(m) = q.monoid() {
        let mut op = Map::new();
        for a in 0..m.names.len() {
            for b in a..m.names.len() {
                op.insert(format!("{},{}", m.names[a], m.names[b]), Value::String(m.names[m.op[a][b]].clone()));
            }
        }
        return json!({
            "kind": "free-commutative-monoid",
            "monoid": {"elements": m.names, "op": op, "unit": m.names[m.unit]},
        });
    }
    let mut order = Vec::new();
    let mut tensor = Map::new();
    for (i, &a) in elements.iter().enumerate() {
        for &b in &elements[i..] {
            tensor.insert(format!("{},{}", name(a), name(b)), Value::String(name(q.mul(a, b))));
        }
        for &b in &elements {
            if a != b && q.le(a, b) {
                order.push(json!([name(a), name(b)]));
            }
        }
    }
    json!({
        "kind": "table",
        "elements": names,
        "order_pairs": order,
        "tensor": tensor,
        "unit": name(q.unit()),
    })
}

pub fn elem_from_value(q: &Quantale, value: &Value) -> Result<QElem> {
    let parsed = match value {
        Value::String(s) => q.parse_elem(s),
        Value::Number(n) => match (q.is_finite(), n.as_f64()) {
            (false, Some(x)) => q.check(QElem::Real(x)),
            _ => q.parse_elem(&n.to_string()),
        },
        other => return Err(parse_err(format!("expected a quantale element, found {other}"))),
    };
    parsed.map_err(|e| match e {
        Error::Parse(m) => Error::Parse(m),
        other => parse_err(other.to_string()),
    })
}

pub fn elem_to_value(q: &Quantale, r: QElem) -> Value {
    Value::String(q.format_elem(r))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceFile {
    quantale: Value,
    objects: Vec<String>,
    dist: Vec<Vec<Value>>,
    #[serde(default)]
    #[allow(dead_code)]
    meta: Option<Value>,
}

/// Parses a space without checking the category axioms.
pub fn space_from_value(value: Value, dir: &Path) -> Result<VCat> {
    let value = match value {
        Value::String(path) => return load_space(&dir.join(path)),
        v => v,
    };
    let file: SpaceFile = from_value(value, "space")?;
    let q = Arc::new(quantale_from_value(file.quantale, dir)?);
    let n = file.objects.len();
    if file.dist.len() != n || file.dist.iter().any(|row| row.len() != n) {
        return Err(parse_err(format!("\"dist\" must be a {n}x{n} matrix")));
    }
    let dist = file
        .dist
        .iter()
        .map(|row| row.iter().map(|v| elem_from_value(&q, v)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    VCat::new(q, file.objects, dist)
}

pub fn load_space(path: &Path) -> Result<VCat> {
    space_from_value(read_json(path)?, &base_dir(path))
}

pub fn matrix_to_value(q: &Quantale, dist: &[Vec<QElem>]) -> Value {
    Value::Array(dist.iter().map(|row| Value::Array(row.iter().map(|&r| elem_to_value(q, r)).collect())).collect())
}

/// A space file; `meta`, when given, is attached under `"meta"`.
pub fn space_to_value(x: &VCat, meta: Option<Value>) -> Value {
    let q = x.quantale();
    let mut map = Map::new();
    map.insert("quantale".into(), quantale_to_value(q));
    map.insert("objects".into(), json!(x.objects()));
    map.insert("dist".into(), matrix_to_value(q, &x.matrix()));
    if let Some(meta) = meta {
        map.insert("meta".into(), meta);
    }
    Value::Object(map)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AutomatonFile {
    inputs: Vec<String>,
    states: Vec<String>,
    delta: BTreeMap<String, BTreeMap<String, String>>,
    out: BTreeMap<String, String>,
    output_space: Value,
}

pub fn automaton_from_value(value: Value, dir: &Path) -> Result<MachineCoalgebra> {
    let file: AutomatonFile = from_value(value, "automaton")?;
    let output = space_from_value(file.output_space, dir)?;
    let mut delta = Vec::with_capacity(file.states.len());
    let mut out = Vec::with_capacity(file.states.len());
    for s in &file.states {
        let row = file.delta.get(s).ok_or_else(|| parse_err(format!("no transitions for state {s:?}")))?;
        let succ = file
            .inputs
            .iter()
            .map(|a| {
                let t = row.get(a).ok_or_else(|| parse_err(format!("no transition for state {s:?} on input {a:?}")))?;
                index_of(&file.states, t, "state")
            })
            .collect::<Result<Vec<_>>>()?;
        delta.push(succ);
        let o = file.out.get(s).ok_or_else(|| parse_err(format!("no output for state {s:?}")))?;
        out.push(output.position(o).ok_or_else(|| parse_err(format!("unknown output object {o:?}")))?);
    }
    for s in file.delta.keys().chain(file.out.keys()) {
        index_of(&file.states, s, "state")?;
    }
    MachineCoalgebra::new(file.inputs, file.states, delta, out, output)
}

pub fn load_automaton(path: &Path) -> Result<MachineCoalgebra> {
    automaton_from_value(read_json(path)?, &base_dir(path))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KripkeFile {
    states: Vec<String>,
    successors: BTreeMap<String, Vec<String>>,
}

pub fn kripke_from_value(value: Value) -> Result<KripkeCoalgebra> {
    let file: KripkeFile = from_value(value, "Kripke frame")?;
    for s in file.successors.keys() {
        index_of(&file.states, s, "state")?;
    }
    let successors = file
        .states
        .iter()
        .map(|s| {
            file.successors
                .get(s)
                .map(|list| list.iter().map(|t| index_of(&file.states, t, "state")).collect::<Result<Vec<_>>>())
                .unwrap_or(Ok(Vec::new()))
        })
        .collect::<Result<Vec<_>>>()?;
    KripkeCoalgebra::new(file.states, successors)
}

pub fn load_kripke(path: &Path) -> Result<KripkeCoalgebra> {
    kripke_from_value(read_json(path)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PreorderFile {
    elements: Vec<String>,
    #[serde(default)]
    order_pairs: Vec<(String, String)>,
}

/// A preorder given by generating pairs; the reflexive-transitive closure is taken.
pub fn preorder_from_value(value: Value) -> Result<Preorder> {
    let file: PreorderFile = from_value(value, "preorder")?;
    let pairs = file
        .order_pairs
        .iter()
        .map(|(a, b)| Ok((index_of(&file.elements, a, "element")?, index_of(&file.elements, b, "element")?)))
        .collect::<Result<Vec<_>>>()?;
    Preorder::generated(file.elements, &pairs)
}

pub fn load_preorder(path: &Path) -> Result<Preorder> {
    preorder_from_value(read_json(path)?)
}

pub fn preorder_to_value(p: &Preorder) -> Value {
    let names = p.elements();
    let pairs: Vec<Value> = p.relation().pairs().into_iter().map(|(a, b)| json!([names[a], names[b]])).collect();
    json!({"elements": names, "order_pairs": pairs})
}

pub fn relation_pairs(labels: &[String], rel: &Relation) -> Vec<(String, String)> {
    rel.pairs().into_iter().map(|(a, b)| (labels[a].clone(), labels[b].clone())).collect()
}

/// Rows and columns labelled, columns right-aligned to a common width.
pub fn render_table(q: &Quantale, labels: &[String], dist: &[Vec<QElem>]) -> String {
    let cells: Vec<Vec<String>> = dist.iter().map(|row| row.iter().map(|&r| q.format_elem(r)).collect()).collect();
    let width = cells.iter().flatten().chain(labels).map(|s| s.chars().count()).max().unwrap_or(0);
    let label_width = labels.iter().map(|s| s.chars().count()).max().unwrap_or(0);
    let pad = |s: &str, w: usize| format!("{}{s}", " ".repeat(w.saturating_sub(s.chars().count())));
    let mut out = String::new();
    out.push_str(&" ".repeat(label_width));
    for l in labels {
        out.push_str("  ");
        out.push_str(&pad(l, width));
    }
    out.push('\n');
    for (l, row) in labels.iter().zip(&cells) {
        out.push_str(&pad(l, label_width));
        for c in row {
            out.push_str("  ");
            out.push_str(&pad(c, width));
        }
        out.push('\n');
    }
    out
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialise");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_names_round_trip() {
        for name in ["boolean-2", "lawvere", "ultrametric", "chain-3-e1", "chain-4-e3"] {
            let q = builtin_quantale(name).unwrap();
            assert_eq!(builtin_name(&q).unwrap(), name);
        }
        assert_eq!(builtin_quantale("chain-3").unwrap(), Quantale::chain(3, 2).unwrap());
        assert!(builtin_quantale("chain-3-e7").is_none());
        assert!(builtin_quantale("reals").is_none());
    }

    #[test]
    fn table_quantales_round_trip() {
        let text = r#"{"kind": "table", "elements": ["bot", "a", "b", "top"],
            "order_pairs": [["bot", "a"], ["bot", "b"], ["a", "top"], ["b", "top"]],
            "tensor": {"bot,bot": "bot", "bot,a": "bot", "bot,b": "bot", "bot,top": "bot",
                       "a,a": "a", "a,b": "bot", "a,top": "a", "b,b": "b", "b,top": "b", "top,top": "top"},
            "unit": "top"}"#;
        let q = quantale_from_value(serde_json::from_str(text).unwrap(), Path::new(".")).unwrap();
        assert!(q.check_laws().all_pass());
        let back = quantale_from_value(quantale_to_value(&q), Path::new(".")).unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn missing_tensor_entries_are_parse_errors() {
        let text = r#"{"kind": "table", "elements": ["0", "1"], "order_pairs": [["0", "1"]],
            "tensor": {"0,0": "0", "1,1": "1"}, "unit": "1"}"#;
        let err = quantale_from_value(serde_json::from_str(text).unwrap(), Path::new(".")).unwrap_err();
        assert!(matches!(err, Error::Parse(_)), "{err}");
    }

    #[test]
    fn spaces_round_trip() {
        let text = r#"{"quantale": "lawvere", "objects": ["a", "b"], "dist": [["0", 1.5], ["inf", 0]]}"#;
        let x = space_from_value(serde_json::from_str(text).unwrap(), Path::new(".")).unwrap();
        assert_eq!(x.d(0, 1), QElem::Real(1.5));
        assert_eq!(x.d(1, 0), QElem::Real(f64::INFINITY));
        let v = space_to_value(&x, None);
        assert_eq!(v["dist"], json!([["0.000000000", "1.500000000"], ["inf", "0.000000000"]]));
        let back = space_from_value(v, Path::new(".")).unwrap();
        assert!(back.same_as(&x));
    }

    #[test]
    fn bad_spaces() {
        let unknown = r#"{"quantale": "reals", "objects": ["a"], "dist": [["0"]]}"#;
        assert!(matches!(space_from_value(serde_json::from_str(unknown).unwrap(), Path::new(".")), Err(Error::Parse(_))));
        let shape = r#"{"quantale": "lawvere", "objects": ["a", "b"], "dist": [["0"]]}"#;
        assert!(matches!(space_from_value(serde_json::from_str(shape).unwrap(), Path::new(".")), Err(Error::Parse(_))));
        let elem = r#"{"quantale": "boolean-2", "objects": ["a"], "dist": [["7"]]}"#;
        assert!(matches!(space_from_value(serde_json::from_str(elem).unwrap(), Path::new(".")), Err(Error::Parse(_))));
    }

    #[test]
    fn automata_and_frames() {
        let text = r#"{"inputs": ["a"], "states": ["s0", "s1"],
            "delta": {"s0": {"a": "s1"}, "s1": {"a": "s1"}}, "out": {"s0": "0", "s1": "1"},
            "output_space": {"quantale": "boolean-2", "objects": ["0", "1"], "dist": [["1", "1"], ["0", "1"]]}}"#;
        let m = automaton_from_value(serde_json::from_str(text).unwrap(), Path::new(".")).unwrap();
        assert_eq!(m.next(0, 0), 1);
        assert_eq!(m.out(1), 1);
        let k = kripke_from_value(json!({"states": ["p", "q"], "successors": {"p": ["q", "p"]}})).unwrap();
        assert_eq!(k.successors(0), &[0, 1]);
        assert!(k.successors(1).is_empty());
        assert!(kripke_from_value(json!({"states": ["p"], "successors": {"p": ["z"]}})).is_err());
    }

    #[test]
    fn tables_are_aligned() {
        let q = Quantale::lawvere();
        let t = render_table(&q, &["a".into(), "b".into()], &[vec![QElem::Real(0.0), QElem::Real(f64::INFINITY)], vec![QElem::Real(1.0), QElem::Real(0.0)]]);
        assert_eq!(
            t,
            "             a            b\na  0.000000000          inf\nb  1.000000000  0.000000000\n"
        );
    }
}
