//! Canonical text artifacts.
//!
//! An artifact is a JSON object `{digest, kind, payload, version}` with keys
//! in sorted order. Scalars are `"p/q"` strings, diagrams are `[x-words,
//! y-words]` integer arrays in canonical tag order, and the digest is the
//! SHA-256 of the compact payload text.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::associator::Associator;
use crate::chord::{normalize_word, Chord, ChordElement, ChordSeries, ChordWord};
use crate::error::{Error, Result};
use crate::kernel::Scalar;
use crate::specialize::{HSeries, LieBialgebra, Mono};
use crate::twist::{DegreeLog, RMatrix, Twist};
use crate::ualg::{Diagram, UElement, USeries};

pub const VERSION: u64 = 1;

/// Orders and slot counts above these are rejected on input.
pub const MAX_ORDER: usize = 8;
pub const MAX_SLOTS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    ChordSeries,
    USeries,
    Associator,
    Twist,
    RMatrix,
    Bialgebra,
    Report,
}

impl Kind {
    pub const ALL: [Kind; 7] = [Kind::ChordSeries, Kind::USeries, Kind::Associator, Kind::Twist, Kind::RMatrix, Kind::Bialgebra, Kind::Report];

    pub fn name(self) -> &'static str {
        match self {
            Kind::ChordSeries => "chord-series",
            Kind::USeries => "u-series",
            Kind::Associator => "associator",
            Kind::Twist => "twist",
            Kind::RMatrix => "rmatrix",
            Kind::Bialgebra => "bialgebra",
            Kind::Report => "report",
        }
    }

    pub fn from_name(s: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Artifact {
    pub kind: Kind,
    pub payload: Value,
}

fn bad(path: &str, msg: impl Into<String>) -> Error {
    Error::Decode { path: path.to_string(), msg: msg.into() }
}

impl Artifact {
    pub fn new(kind: Kind, payload: Value) -> Self {
        Artifact { kind, payload }
    }

    pub fn digest(&self) -> String {
        digest_of(&self.payload)
    }

    /// Canonical text, ending in a newline.
    pub fn to_text(&self) -> String {
        let top = json!({
            "digest": self.digest(),
            "kind": self.kind.name(),
            "payload": self.payload,
            "version": VERSION,
        });
        let mut out = String::new();
        write_canonical(&top, 0, &mut out);
        out.push('\n');
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), column: e.column(), msg: e.to_string() })?;
        let obj = v.as_object().ok_or_else(|| bad("$", "expected an object"))?;
        for k in obj.keys() {
            if !matches!(k.as_str(), "digest" | "kind" | "payload" | "version") {
                return Err(bad("$", format!("unknown field {k:?}")));
            }
        }
        let kind = obj.get("kind").and_then(Value::as_str).ok_or_else(|| bad("$.kind", "missing or not a string"))?;
        let kind = Kind::from_name(kind).ok_or_else(|| bad("$.kind", format!("unknown kind {kind:?}")))?;
        let version = obj.get("version").and_then(Value::as_u64).ok_or_else(|| bad("$.version", "missing or not an integer"))?;
        if version != VERSION {
            return Err(bad("$.version", format!("unsupported version {version}")));
        }
        let payload = obj.get("payload").cloned().ok_or_else(|| bad("$.payload", "missing"))?;
        let digest = obj.get("digest").and_then(Value::as_str).ok_or_else(|| bad("$.digest", "missing or not a string"))?;
        let art = Artifact { kind, payload };
        if art.digest() != digest {
            return Err(bad("$.digest", "does not match the payload"));
        }
        Ok(art)
    }

    /// Parse and require a specific kind.
    pub fn parse_kind(text: &str, kind: Kind) -> Result<Self> {
        let a = Self::parse(text)?;
        if a.kind != kind {
            return Err(bad("$.kind", format!("expected {}, found {}", kind.name(), a.kind.name())));
        }
        Ok(a)
    }
}

pub fn digest_of(payload: &Value) -> String {
    let text = serde_json::to_string(payload).expect("JSON values serialize");
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Object(_) => false,
        Value::Array(a) => a.iter().all(is_flat),
        _ => true,
    }
}

/// Pretty-print with sorted keys; arrays without objects stay on one line
/// when short.
fn write_canonical(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Object(m) if !m.is_empty() => {
            out.push_str("{\n");
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            for (i, k) in keys.iter().enumerate() {
                let _ = write!(out, "{}{}: ", pad(indent + 1), Value::String((*k).clone()));
                write_canonical(&m[*k], indent + 1, out);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(a) if !a.is_empty() => {
            let compact = serde_json::to_string(v).expect("JSON values serialize");
            if is_flat(v) && compact.len() <= 100 {
                out.push_str(&compact);
                return;
            }
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_canonical(x, indent + 1, out);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        _ => out.push_str(&serde_json::to_string(v).expect("JSON values serialize")),
    }
}

fn field<'a>(v: &'a Value, path: &str, key: &str) -> Result<&'a Value> {
    v.as_object().ok_or_else(|| bad(path, "expected an object"))?.get(key).ok_or_else(|| bad(path, format!("missing field {key:?}")))
}

fn only_fields(v: &Value, path: &str, keys: &[&str]) -> Result<()> {
    let m = v.as_object().ok_or_else(|| bad(path, "expected an object"))?;
    for k in m.keys() {
        if !keys.contains(&k.as_str()) {
            return Err(bad(path, format!("unknown field {k:?}")));
        }
    }
    Ok(())
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(path, "expected an array"))
}

fn uint(v: &Value, path: &str, max: usize) -> Result<usize> {
    let n = v.as_u64().ok_or_else(|| bad(path, "expected a nonnegative integer"))?;
    if n > max as u64 {
        return Err(bad(path, format!("{n} exceeds the limit {max}")));
    }
    Ok(n as usize)
}

fn boolean(v: &Value, path: &str) -> Result<bool> {
    v.as_bool().ok_or_else(|| bad(path, "expected a boolean"))
}

pub fn encode_scalar(c: &Scalar) -> Value {
    Value::String(c.to_string())
}

pub fn decode_scalar(v: &Value, path: &str) -> Result<Scalar> {
    let s = v.as_str().ok_or_else(|| bad(path, "expected a \"p/q\" string"))?;
    s.parse().map_err(|_| bad(path, format!("malformed rational {s:?}")))
}

fn encode_words(w: &[Vec<u8>]) -> Value {
    Value::Array(w.iter().map(|x| json!(x)).collect())
}

fn decode_words(v: &Value, path: &str) -> Result<Vec<Vec<u8>>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let p = format!("{path}[{i}]");
            array(w, &p)?.iter().enumerate().map(|(j, t)| uint(t, &format!("{p}[{j}]"), 255).map(|t| t as u8)).collect()
        })
        .collect()
}

pub fn encode_diagram(d: &Diagram) -> Value {
    json!([encode_words(&d.x_words()), encode_words(&d.y_words())])
}

pub fn decode_diagram(v: &Value, path: &str) -> Result<Diagram> {
    let a = array(v, path)?;
    if a.len() != 2 {
        return Err(bad(path, "a diagram is [x-words, y-words]"));
    }
    let x = decode_words(&a[0], &format!("{path}[0]"))?;
    let y = decode_words(&a[1], &format!("{path}[1]"))?;
    if x.len() > MAX_SLOTS || x.iter().chain(&y).map(Vec::len).sum::<usize>() > 4 * MAX_ORDER {
        return Err(bad(path, "diagram is too large"));
    }
    let d = Diagram::new(&x, &y).map_err(|e| bad(path, e.to_string()))?;
    if d.x_words() != x || d.y_words() != y {
        return Err(bad(path, "diagram is not in canonical tag order"));
    }
    Ok(d)
}

fn encode_terms(e: &UElement) -> Value {
    Value::Array(e.terms().iter().map(|(d, c)| json!([encode_diagram(d), encode_scalar(c)])).collect())
}

fn decode_terms(v: &Value, path: &str, slots: usize, degree: Option<usize>) -> Result<UElement> {
    let mut out = UElement::zero(slots);
    let mut last: Option<Diagram> = None;
    for (i, t) in array(v, path)?.iter().enumerate() {
        let p = format!("{path}[{i}]");
        let pair = array(t, &p)?;
        if pair.len() != 2 {
            return Err(bad(&p, "a term is [diagram, coefficient]"));
        }
        let d = decode_diagram(&pair[0], &format!("{p}[0]"))?;
        let c = decode_scalar(&pair[1], &format!("{p}[1]"))?;
        if d.slots() != slots {
            return Err(bad(&p, format!("diagram has {} slots, expected {slots}", d.slots())));
        }
        if let Some(n) = degree {
            if d.degree() != n {
                return Err(bad(&p, format!("diagram of degree {} in the degree-{n} component", d.degree())));
            }
        }
        if c.is_zero() {
            return Err(bad(&p, "zero coefficient"));
        }
        if last.as_ref().is_some_and(|l| *l >= d) {
            return Err(bad(&p, "terms are not strictly increasing"));
        }
        out.add_scaled(&UElement::basis(d.clone()), &c);
        last = Some(d);
    }
    Ok(out)
}

pub fn encode_uelement(e: &UElement) -> Value {
    json!({"slots": e.slots(), "terms": encode_terms(e)})
}

pub fn decode_uelement(v: &Value, path: &str) -> Result<UElement> {
    only_fields(v, path, &["slots", "terms"])?;
    let slots = uint(field(v, path, "slots")?, &format!("{path}.slots"), MAX_SLOTS)?;
    decode_terms(field(v, path, "terms")?, &format!("{path}.terms"), slots, None)
}

pub fn encode_useries(s: &USeries) -> Value {
    json!({
        "comps": s.comps().iter().map(encode_terms).collect::<Vec<_>>(),
        "order": s.order(),
        "slots": s.slots(),
    })
}

pub fn decode_useries(v: &Value, path: &str) -> Result<USeries> {
    only_fields(v, path, &["comps", "order", "slots"])?;
    let slots = uint(field(v, path, "slots")?, &format!("{path}.slots"), MAX_SLOTS)?;
    let order = uint(field(v, path, "order")?, &format!("{path}.order"), MAX_ORDER)?;
    let comps = array(field(v, path, "comps")?, &format!("{path}.comps"))?;
    if comps.len() != order + 1 {
        return Err(bad(&format!("{path}.comps"), format!("expected {} components", order + 1)));
    }
    let mut s = USeries::zero(slots, order);
    for (d, c) in comps.iter().enumerate() {
        s.set_comp(d, decode_terms(c, &format!("{path}.comps[{d}]"), slots, Some(d))?);
    }
    Ok(s)
}

fn encode_chord_word(w: &[Chord]) -> Value {
    Value::Array(w.iter().map(|c| json!([c.0, c.1])).collect())
}

pub fn encode_chord_series(s: &ChordSeries) -> Value {
    let comps: Vec<Value> =
        (0..=s.order()).map(|d| Value::Array(s.comp(d).terms().iter().map(|(w, c)| json!([encode_chord_word(w), encode_scalar(c)])).collect())).collect();
    json!({"comps": comps, "order": s.order(), "strands": s.strands()})
}

fn decode_chord_word(v: &Value, path: &str, strands: usize) -> Result<ChordWord> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let p = format!("{path}[{i}]");
            let pair = array(c, &p)?;
            if pair.len() != 2 {
                return Err(bad(&p, "a chord is [i, j]"));
            }
            let i = uint(&pair[0], &p, strands)?;
            let j = uint(&pair[1], &p, strands)?;
            if i == 0 || i >= j {
                return Err(bad(&p, format!("chord [{i}, {j}] needs 1 <= i < j <= {strands}")));
            }
            Ok(Chord::new(i as u8, j as u8))
        })
        .collect()
}

pub fn decode_chord_series(v: &Value, path: &str) -> Result<ChordSeries> {
    only_fields(v, path, &["comps", "order", "strands"])?;
    let strands = uint(field(v, path, "strands")?, &format!("{path}.strands"), MAX_SLOTS)?;
    let order = uint(field(v, path, "order")?, &format!("{path}.order"), MAX_ORDER)?;
    let comps = array(field(v, path, "comps")?, &format!("{path}.comps"))?;
    if comps.len() != order + 1 {
        return Err(bad(&format!("{path}.comps"), format!("expected {} components", order + 1)));
    }
    let mut s = ChordSeries::zero(strands, order);
    for (d, comp) in comps.iter().enumerate() {
        let cp = format!("{path}.comps[{d}]");
        let mut words = Vec::new();
        let mut last: Option<ChordWord> = None;
        for (i, t) in array(comp, &cp)?.iter().enumerate() {
            let p = format!("{cp}[{i}]");
            let pair = array(t, &p)?;
            if pair.len() != 2 {
                return Err(bad(&p, "a term is [word, coefficient]"));
            }
            let w = decode_chord_word(&pair[0], &format!("{p}[0]"), strands)?;
            let c = decode_scalar(&pair[1], &format!("{p}[1]"))?;
            if w.len() != d {
                return Err(bad(&p, format!("word of length {} in the degree-{d} component", w.len())));
            }
            if c.is_zero() {
                return Err(bad(&p, "zero coefficient"));
            }
            if normalize_word(&w).as_slice() != [(w.clone(), 1)] {
                return Err(bad(&p, "word is not in normal form"));
            }
            if last.as_ref().is_some_and(|l| *l >= w) {
                return Err(bad(&p, "terms are not strictly increasing"));
            }
            last = Some(w.clone());
            words.push((w, c));
        }
        s.set_comp(d, ChordElement::from_words(strands, words));
    }
    Ok(s)
}

pub fn encode_associator(a: &Associator) -> Value {
    json!({"order": a.order, "phi": encode_chord_series(&a.phi)})
}

pub fn decode_associator(v: &Value, path: &str) -> Result<Associator> {
    only_fields(v, path, &["order", "phi"])?;
    let order = uint(field(v, path, "order")?, &format!("{path}.order"), MAX_ORDER)?;
    let phi = decode_chord_series(field(v, path, "phi")?, &format!("{path}.phi"))?;
    if phi.strands() != 3 || phi.order() != order {
        return Err(bad(path, "associator must be a 3-strand series of the stated order"));
    }
    Ok(Associator { order, phi })
}

fn encode_log(l: &DegreeLog) -> Value {
    json!({
        "degree": l.degree,
        "lambda_nonzero": l.lambda_nonzero,
        "mu_zero": l.mu_zero,
        "solution_space_dim": l.solution_space_dim,
        "z_terms": l.z_terms,
    })
}

fn decode_log(v: &Value, path: &str) -> Result<DegreeLog> {
    only_fields(v, path, &["degree", "lambda_nonzero", "mu_zero", "solution_space_dim", "z_terms"])?;
    let u = |k: &str| uint(field(v, path, k)?, &format!("{path}.{k}"), usize::MAX);
    let b = |k: &str| boolean(field(v, path, k)?, &format!("{path}.{k}"));
    Ok(DegreeLog {
        degree: u("degree")?,
        z_terms: u("z_terms")?,
        mu_zero: b("mu_zero")?,
        lambda_nonzero: b("lambda_nonzero")?,
        solution_space_dim: u("solution_space_dim")?,
    })
}

/// A twist together with the associator it solves for.
pub fn encode_twist(t: &Twist, phi: &Associator) -> Value {
    json!({
        "associator": encode_associator(phi),
        "j": encode_useries(&t.j),
        "log": t.log.iter().map(encode_log).collect::<Vec<_>>(),
        "order": t.order,
    })
}

pub fn decode_twist(v: &Value, path: &str) -> Result<(Twist, Associator)> {
    only_fields(v, path, &["associator", "j", "log", "order"])?;
    let order = uint(field(v, path, "order")?, &format!("{path}.order"), MAX_ORDER)?;
    let phi = decode_associator(field(v, path, "associator")?, &format!("{path}.associator"))?;
    let j = decode_useries(field(v, path, "j")?, &format!("{path}.j"))?;
    if j.slots() != 2 || j.order() != order {
        return Err(bad(&format!("{path}.j"), "twist must be a 2-slot series of the stated order"));
    }
    let log = array(field(v, path, "log")?, &format!("{path}.log"))?
        .iter()
        .enumerate()
        .map(|(i, l)| decode_log(l, &format!("{path}.log[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    Ok((Twist { order, j, log }, phi))
}

pub fn encode_rmatrix(r: &RMatrix) -> Value {
    json!({"order": r.order, "r": encode_useries(&r.r)})
}

pub fn decode_rmatrix(v: &Value, path: &str) -> Result<RMatrix> {
    only_fields(v, path, &["order", "r"])?;
    let order = uint(field(v, path, "order")?, &format!("{path}.order"), MAX_ORDER)?;
    let r = decode_useries(field(v, path, "r")?, &format!("{path}.r"))?;
    if r.slots() != 2 || r.order() != order {
        return Err(bad(&format!("{path}.r"), "R-matrix must be a 2-slot series of the stated order"));
    }
    Ok(RMatrix { order, r })
}

pub fn encode_bialgebra(b: &LieBialgebra) -> Value {
    let d = b.dim();
    let mut br = Vec::new();
    let mut cob = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                if !b.bracket(i, j, k).is_zero() {
                    br.push(json!([i, j, k, encode_scalar(b.bracket(i, j, k))]));
                }
                if !b.cobracket(i, j, k).is_zero() {
                    cob.push(json!([i, j, k, encode_scalar(b.cobracket(i, j, k))]));
                }
            }
        }
    }
    json!({"bracket": br, "cobracket": cob, "names": b.names()})
}

fn decode_entries(v: &Value, path: &str, d: usize) -> Result<Vec<(usize, usize, usize, Scalar)>> {
    let mut out: Vec<(usize, usize, usize, Scalar)> = Vec::new();
    for (n, e) in array(v, path)?.iter().enumerate() {
        let p = format!("{path}[{n}]");
        let a = array(e, &p)?;
        if a.len() != 4 {
            return Err(bad(&p, "an entry is [i, j, k, coefficient]"));
        }
        let i = uint(&a[0], &format!("{p}[0]"), d.saturating_sub(1))?;
        let j = uint(&a[1], &format!("{p}[1]"), d.saturating_sub(1))?;
        let k = uint(&a[2], &format!("{p}[2]"), d.saturating_sub(1))?;
        let c = decode_scalar(&a[3], &format!("{p}[3]"))?;
        if c.is_zero() {
            return Err(bad(&p, "zero coefficient"));
        }
        if out.last().is_some_and(|l| (l.0, l.1, l.2) >= (i, j, k)) {
            return Err(bad(&p, "entries are not strictly increasing"));
        }
        out.push((i, j, k, c));
    }
    Ok(out)
}

pub fn decode_bialgebra(v: &Value, path: &str) -> Result<LieBialgebra> {
    only_fields(v, path, &["bracket", "cobracket", "names"])?;
    let names: Vec<String> = array(field(v, path, "names")?, &format!("{path}.names"))?
        .iter()
        .enumerate()
        .map(|(i, n)| n.as_str().map(str::to_string).ok_or_else(|| bad(&format!("{path}.names[{i}]"), "expected a string")))
        .collect::<Result<_>>()?;
    let d = names.len();
    if d == 0 || d > 64 {
        return Err(bad(&format!("{path}.names"), "dimension must be in 1..=64"));
    }
    let br = decode_entries(field(v, path, "bracket")?, &format!("{path}.bracket"), d)?;
    let cob = decode_entries(field(v, path, "cobracket")?, &format!("{path}.cobracket"), d)?;
    LieBialgebra::from_entries(names, &br, &cob).map_err(|e| bad(path, e.to_string()))
}

/// Generator names `a…` then the dual names with a trailing `*`.
pub fn encode_hseries(h: &HSeries, generators: &[String]) -> Value {
    let comps: Vec<Value> =
        (0..=h.order()).map(|k| Value::Array(h.comp(k).iter().map(|(m, c)| json!([encode_words(m), encode_scalar(c)])).collect())).collect();
    json!({"arity": h.arity(), "comps": comps, "generators": generators, "order": h.order()})
}

pub fn decode_hseries(v: &Value, path: &str) -> Result<(HSeries, Vec<String>)> {
    only_fields(v, path, &["arity", "comps", "generators", "order"])?;
    let arity = uint(field(v, path, "arity")?, &format!("{path}.arity"), MAX_SLOTS)?;
    let order = uint(field(v, path, "order")?, &format!("{path}.order"), MAX_ORDER)?;
    let gens: Vec<String> = array(field(v, path, "generators")?, &format!("{path}.generators"))?
        .iter()
        .enumerate()
        .map(|(i, n)| n.as_str().map(str::to_string).ok_or_else(|| bad(&format!("{path}.generators[{i}]"), "expected a string")))
        .collect::<Result<_>>()?;
    if gens.len() > 128 {
        return Err(bad(&format!("{path}.generators"), "too many generators"));
    }
    let comps = array(field(v, path, "comps")?, &format!("{path}.comps"))?;
    if comps.len() != order + 1 {
        return Err(bad(&format!("{path}.comps"), format!("expected {} components", order + 1)));
    }
    let mut h = HSeries::zero(arity, order);
    for (k, comp) in comps.iter().enumerate() {
        let cp = format!("{path}.comps[{k}]");
        let mut last: Option<Vec<Mono>> = None;
        for (i, t) in array(comp, &cp)?.iter().enumerate() {
            let p = format!("{cp}[{i}]");
            let pair = array(t, &p)?;
            if pair.len() != 2 {
                return Err(bad(&p, "a term is [monomials, coefficient]"));
            }
            let monos = decode_words(&pair[0], &format!("{p}[0]"))?;
            let c = decode_scalar(&pair[1], &format!("{p}[1]"))?;
            if monos.len() != arity {
                return Err(bad(&p, format!("{} tensor factors, expected {arity}", monos.len())));
            }
            if monos.iter().flatten().any(|&g| g as usize >= gens.len()) {
                return Err(bad(&p, "generator index out of range"));
            }
            if monos.iter().any(|m| m.windows(2).any(|w| w[0] > w[1])) {
                return Err(bad(&p, "monomial is not in PBW order"));
            }
            if c.is_zero() {
                return Err(bad(&p, "zero coefficient"));
            }
            if last.as_ref().is_some_and(|l| *l >= monos) {
                return Err(bad(&p, "terms are not strictly increasing"));
            }
            last = Some(monos.clone());
            h.add_term(k, monos, &c);
        }
    }
    Ok((h, gens))
}

/// A report payload: the property certified, the verdict, and details.
pub fn report_payload(anchor: &str, ok: bool, checks: Value) -> Value {
    json!({"anchor": anchor, "checks": checks, "ok": ok})
}

pub fn decode_report(v: &Value, path: &str) -> Result<(String, bool, Value)> {
    only_fields(v, path, &["anchor", "checks", "ok"])?;
    let anchor = field(v, path, "anchor")?.as_str().ok_or_else(|| bad(&format!("{path}.anchor"), "expected a string"))?;
    let ok = boolean(field(v, path, "ok")?, &format!("{path}.ok"))?;
    Ok((anchor.to_string(), ok, field(v, path, "checks")?.clone()))
}

/// Decode any artifact's payload according to its kind, returning a short summary.
pub fn decode_any(a: &Artifact) -> Result<String> {
    let p = "$.payload";
    Ok(match a.kind {
        Kind::ChordSeries => {
            let s = decode_chord_series(&a.payload, p)?;
            format!("chord series on {} strands, order {}", s.strands(), s.order())
        }
        Kind::USeries => {
            let s = decode_useries(&a.payload, p)?;
            format!("series on {} slots, order {}", s.slots(), s.order())
        }
        Kind::Associator => format!("associator, order {}", decode_associator(&a.payload, p)?.order),
        Kind::Twist => format!("twist, order {}", decode_twist(&a.payload, p)?.0.order),
        Kind::RMatrix => format!("R-matrix, order {}", decode_rmatrix(&a.payload, p)?.order),
        Kind::Bialgebra => format!("Lie bialgebra of dimension {}", decode_bialgebra(&a.payload, p)?.dim()),
        Kind::Report => {
            let (anchor, ok, _) = decode_report(&a.payload, p)?;
            format!("report {anchor}: {}", if ok { "ok" } else { "FAILED" })
        }
    })
}

/// An object from sorted `(key, value)` pairs.
pub fn object(pairs: impl IntoIterator<Item = (String, Value)>) -> Value {
    Value::Object(pairs.into_iter().collect::<Map<String, Value>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ualg::make_r;

    #[test]
    fn round_trip_and_digest() {
        let r = USeries::from_element(&UElement::one(2).add(&make_r()), 2);
        let a = Artifact::new(Kind::USeries, encode_useries(&r));
        let text = a.to_text();
        let back = Artifact::parse(&text).unwrap();
        assert_eq!(back, a);
        assert_eq!(decode_useries(&back.payload, "$").unwrap(), r);
        assert_eq!(back.to_text(), text);
        let tampered = text.replace("\"1/1\"", "\"2/1\"");
        assert!(matches!(Artifact::parse(&tampered), Err(Error::Decode { .. })));
    }

    #[test]
    fn parse_errors_carry_locations() {
        match Artifact::parse("{\n  \"kind\": \n}") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let payload = json!({"slots": 2, "terms": [[[[[1],[]],[[],[1]]], "0/1"]]});
        match decode_uelement(&payload, "$") {
            Err(Error::Decode { path, .. }) => assert_eq!(path, "$.terms[0]"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bialgebra_round_trip() {
        let b = LieBialgebra::borel();
        assert_eq!(decode_bialgebra(&encode_bialgebra(&b), "$").unwrap(), b);
    }
}
