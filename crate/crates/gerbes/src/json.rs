//! JSON documents for complexes, cochains, cocycles, gerbe and line data,
//! morphisms and reports.
//!
//! Every document carries `"schema": "v1"` and a `"kind"`. Data documents
//! embed their complex under `"complex"`, either inline or as the name of a
//! built-in fixture. Fractions are strings `"a/b"`. Keys are emitted in
//! sorted order, so serialization is deterministic.

use std::collections::BTreeMap;
use std::fmt;

use gerbes_core::cohomology::{ClassCoordinates, GroupPresentation};
use gerbes_core::deligne::{DiffCohomologyReport, DifferentialCocycle, HomotopyGroup, Trivialization, Violation};
use gerbes_core::gerbe::Datum;
use gerbes_core::monomial::{CycloMatrix, MonomialMatrix};
use gerbes_core::morphism::{Intertwiner, MorphismReport, TwistedBundleMorphism};
use gerbes_core::product::ProductComplex;
use gerbes_core::reduction::{ReducedSection, ReductionReport};
use gerbes_core::sections::{HilbertAxiomReport, InnerProductValue, SectionSpaceReport};
use gerbes_core::{fixtures, Cochain, Cyclo, Error, Ring, Simplex, SimplicialComplex, Q};
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "v1";

/// Malformed input, located by a JSON pointer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IoError {
    pub pointer: String,
    pub message: String,
}

impl fmt::Display for IoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = if self.pointer.is_empty() { "document root" } else { &self.pointer };
        write!(f, "{} (at {at})", self.message)
    }
}

impl std::error::Error for IoError {}

/// Either the JSON does not match the schema, or it does but the data is
/// rejected by a domain constructor.
#[derive(Clone, Debug, PartialEq)]
pub enum ReadError {
    Io(IoError),
    Domain { pointer: String, error: Error },
}

impl fmt::Display for ReadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReadError::Io(e) => e.fmt(f),
            ReadError::Domain { pointer, error } => write!(f, "{error} (at {pointer})"),
        }
    }
}

impl From<IoError> for ReadError {
    fn from(e: IoError) -> Self {
        ReadError::Io(e)
    }
}

pub type ReadResult<T> = Result<T, ReadError>;

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

/// A value together with its location in the document.
#[derive(Clone)]
pub struct Node<'a> {
    value: &'a Value,
    path: String,
}

impl<'a> Node<'a> {
    pub fn root(value: &'a Value) -> Self {
        Node { value, path: String::new() }
    }

    pub fn node(&self) -> Node<'a> {
        self.clone()
    }

    pub fn pointer(&self) -> &str {
        &self.path
    }

    pub fn value(&self) -> &'a Value {
        self.value
    }

    pub fn fail<T>(&self, message: impl Into<String>) -> Result<T, IoError> {
        Err(IoError { pointer: self.path.clone(), message: message.into() })
    }

    fn domain<T>(&self, r: gerbes_core::Result<T>) -> ReadResult<T> {
        r.map_err(|error| ReadError::Domain { pointer: self.path.clone(), error })
    }

    pub fn get(&self, key: &str) -> Option<Node<'a>> {
        let v = self.value.as_object()?.get(key)?;
        Some(Node { value: v, path: format!("{}/{}", self.path, escape(key)) })
    }

    pub fn key(&self, key: &str) -> Result<Node<'a>, IoError> {
        if !self.value.is_object() {
            return self.fail("expected an object");
        }
        match self.get(key) {
            Some(l) => Ok(l),
            None => self.fail(format!("missing key \"{key}\"")),
        }
    }

    pub fn items(&self) -> Result<Vec<Node<'a>>, IoError> {
        let Some(a) = self.value.as_array() else { return self.fail("expected an array") };
        Ok(a.iter().enumerate().map(|(i, v)| Node { value: v, path: format!("{}/{i}", self.path) }).collect())
    }

    /// A two-element array `[key, value]`.
    pub fn pair(&self) -> Result<(Node<'a>, Node<'a>), IoError> {
        let items = self.items()?;
        if items.len() != 2 {
            return self.fail("expected a pair [key, value]");
        }
        let mut it = items.into_iter();
        Ok((it.next().expect("two"), it.next().expect("two")))
    }

    pub fn str(&self) -> Result<&'a str, IoError> {
        match self.value.as_str() {
            Some(s) => Ok(s),
            None => self.fail("expected a string"),
        }
    }

    pub fn int(&self) -> Result<i128, IoError> {
        match self.value.as_i64() {
            Some(n) => Ok(n as i128),
            None => self.fail("expected an integer"),
        }
    }

    pub fn count(&self) -> Result<usize, IoError> {
        match self.value.as_u64() {
            Some(n) => Ok(n as usize),
            None => self.fail("expected a nonnegative integer"),
        }
    }

    pub fn vertex(&self) -> Result<u32, IoError> {
        match self.value.as_u64().and_then(|n| u32::try_from(n).ok()) {
            Some(n) => Ok(n),
            None => self.fail("expected a vertex id"),
        }
    }

    /// A strictly increasing vertex list.
    pub fn simplex(&self) -> Result<Simplex, IoError> {
        let s = self.items()?.iter().map(|l| l.node().vertex()).collect::<Result<Vec<_>, _>>()?;
        if s.is_empty() || s.windows(2).any(|w| w[0] >= w[1]) {
            return self.fail("simplex must be a nonempty strictly increasing vertex list");
        }
        Ok(s)
    }

    pub fn fraction(&self) -> Result<Q, IoError> {
        let s = self.str()?;
        let (num, den) = s.split_once('/').unwrap_or((s, "1"));
        let (Ok(n), Ok(d)) = (num.trim().parse::<i128>(), den.trim().parse::<i128>()) else {
            return self.fail(format!("malformed fraction \"{s}\""));
        };
        if d == 0 {
            return self.fail(format!("zero denominator in \"{s}\""));
        }
        Ok(Q::new(n, d))
    }
}

pub fn fraction(x: &Q) -> Value {
    Value::String(format!("{}/{}", x.numer(), x.denom()))
}

fn int(n: i128) -> Value {
    match i64::try_from(n) {
        Ok(v) => json!(v),
        Err(_) => Value::String(n.to_string()),
    }
}

fn ints(v: &[i128]) -> Value {
    Value::Array(v.iter().map(|n| int(*n)).collect())
}

/// `{"schema": "v1", "kind": kind, ..body}`.
pub fn document(kind: &str, body: Value) -> Value {
    let mut m = match body {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("value".into(), other);
            m
        }
    };
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("kind".into(), json!(kind));
    Value::Object(m)
}

fn with_complex(kind: &str, k: &SimplicialComplex, body: Value) -> Value {
    let mut doc = document(kind, body);
    doc.as_object_mut().expect("object").insert("complex".into(), complex_body(k));
    doc
}

/// Checks `schema` and, when given, `kind`; returns the document kind.
pub fn check_header<'a>(node: &Node<'a>, kinds: &[&str]) -> Result<&'a str, IoError> {
    let schema = node.key("schema")?;
    if schema.node().str()? != SCHEMA {
        return schema.node().fail(format!("unsupported schema, expected \"{SCHEMA}\""));
    }
    let kind = node.key("kind")?;
    let k = kind.node().str()?;
    if !kinds.is_empty() && !kinds.contains(&k) {
        return kind.node().fail(format!("expected kind {}, found \"{k}\"", kinds.join(" or ")));
    }
    Ok(k)
}

// ---------------------------------------------------------------- complexes

/// Built-in complexes by name: `circle:M`, `sphere2`, `sphere3`, `torus9`,
/// `rp2_6`, `rp2xs1`, `lens:P`.
pub fn fixture(name: &str) -> Option<SimplicialComplex> {
    if let Some(m) = name.strip_prefix("circle:") {
        return fixtures::circle(m.parse().ok()?).ok();
    }
    if let Some(p) = name.strip_prefix("lens:") {
        return fixtures::lens_space(p.parse().ok()?).ok();
    }
    Some(match name {
        "sphere2" => fixtures::sphere2(),
        "sphere3" => fixtures::sphere3(),
        "torus9" => fixtures::torus9().total,
        "rp2_6" => fixtures::rp2_6(),
        "rp2xs1" => fixtures::rp2xs1().total,
        _ => return None,
    })
}

pub fn complex_body(k: &SimplicialComplex) -> Value {
    json!({ "maximal_simplices": k.maximal_simplices() })
}

pub fn complex_doc(k: &SimplicialComplex) -> Value {
    document("complex", complex_body(k))
}

/// An inline complex or a fixture name.
pub fn read_complex(node: Node) -> ReadResult<SimplicialComplex> {
    if let Some(name) = node.value().as_str() {
        return match fixture(name) {
            Some(k) => Ok(k),
            None => Err(node.fail(format!("unknown fixture \"{name}\""))?),
        };
    }
    let list = node.key("maximal_simplices")?;
    let raw = list
        .node()
        .items()?
        .iter()
        .map(|l| l.node().simplex())
        .collect::<Result<Vec<_>, _>>()?;
    list.node().domain(SimplicialComplex::build(&raw))
}

/// A complex document, or any data document through its `complex` field.
pub fn read_complex_doc(node: Node) -> ReadResult<SimplicialComplex> {
    let kind = check_header(&node, &[])?;
    if kind == "complex" {
        read_complex(node)
    } else {
        read_complex(node.key("complex")?.node())
    }
}

// ----------------------------------------------------------------- cochains

fn ring_name(r: Ring) -> &'static str {
    match r {
        Ring::Int => "Z",
        Ring::Rat => "Q",
        Ring::RatMod1 => "QmodZ",
    }
}

pub fn cochain_body(c: &Cochain) -> Value {
    let values: Vec<Value> = c.values().map(|(s, v)| json!([s, fraction(v)])).collect();
    json!({ "degree": c.degree(), "ring": ring_name(c.ring()), "values": values })
}

pub fn read_cochain(node: Node, k: &SimplicialComplex) -> ReadResult<Cochain> {
    let degree = node.key("degree")?.node().count()?;
    let ring_node = node.key("ring")?;
    let ring = match ring_node.node().str()? {
        "Z" => Ring::Int,
        "Q" => Ring::Rat,
        "QmodZ" => Ring::RatMod1,
        other => return Err(ring_node.node().fail(format!("unknown ring \"{other}\""))?),
    };
    let mut values = Vec::new();
    for item in node.key("values")?.node().items()? {
        let (s, v) = item.node().pair()?;
        values.push((s.node().simplex()?, v.node().fraction()?));
    }
    node.domain(Cochain::new(k, degree, ring, values))
}

pub fn cochain_doc(k: &SimplicialComplex, c: &Cochain) -> Value {
    with_complex("cochain", k, cochain_body(c))
}

pub fn read_cochain_doc(node: Node) -> ReadResult<(SimplicialComplex, Cochain)> {
    check_header(&node, &["cochain"])?;
    let k = read_complex(node.key("complex")?.node())?;
    let c = read_cochain(node, &k)?;
    Ok((k, c))
}

// ------------------------------------------------- differential cocycles

pub fn cocycle_body(x: &DifferentialCocycle) -> Value {
    json!({ "n": x.n, "c": cochain_body(&x.c), "h": cochain_body(&x.h), "omega": cochain_body(&x.omega) })
}

pub fn cocycle_doc(k: &SimplicialComplex, x: &DifferentialCocycle) -> Value {
    with_complex("cocycle", k, cocycle_body(x))
}

/// A cocycle document, or a line or gerbe datum, collated.
pub fn read_cocycle_doc(node: Node) -> ReadResult<(SimplicialComplex, DifferentialCocycle)> {
    let kind = check_header(&node, &["cocycle", "line", "gerbe"])?;
    let k = read_complex(node.key("complex")?.node())?;
    let x = match kind {
        "line" => node.domain(read_datum::<2>(node.clone(), &k)?.collate(&k))?,
        "gerbe" => node.domain(read_datum::<3>(node.clone(), &k)?.collate(&k))?,
        _ => {
            let n = node.key("n")?.node().count()?;
            let c = read_cochain(node.key("c")?.node(), &k)?;
            let h = read_cochain(node.key("h")?.node(), &k)?;
            let omega = read_cochain(node.key("omega")?.node(), &k)?;
            node.domain(DifferentialCocycle::new(n, c, h, omega))?
        }
    };
    Ok((k, x))
}

// ---------------------------------------------------- gerbe and line data

/// Keys of the form levels, then of the integer level.
fn datum_keys<const N: usize>() -> (&'static [&'static str], &'static str) {
    match N {
        3 => (&["B", "A", "f"], "m"),
        2 => (&["A", "f"], "m"),
        _ => (&["f"], "m"),
    }
}

fn simplex_key(s: &Simplex) -> Value {
    if s.len() == 1 {
        json!(s[0])
    } else {
        json!(s)
    }
}

pub fn datum_body<const N: usize>(d: &Datum<N>) -> Value {
    let (levels, top) = datum_keys::<N>();
    let mut m = Map::new();
    for (p, name) in levels.iter().enumerate() {
        let entries: Vec<Value> = d.forms(p).map(|(s, c)| json!([simplex_key(s), cochain_body(c)])).collect();
        m.insert((*name).into(), Value::Array(entries));
    }
    let windings: Vec<Value> = d.windings().map(|(s, n)| json!([s, int(*n)])).collect();
    m.insert(top.into(), Value::Array(windings));
    Value::Object(m)
}

pub fn read_datum<const N: usize>(node: Node, k: &SimplicialComplex) -> ReadResult<Datum<N>> {
    let (levels, top) = datum_keys::<N>();
    let mut forms = vec![BTreeMap::new(); N];
    for (p, name) in levels.iter().enumerate() {
        let Some(list) = node.get(name) else { continue };
        for item in list.node().items()? {
            let (s, c) = item.node().pair()?;
            let s = if p == 0 && s.node().value().is_u64() { vec![s.node().vertex()?] } else { s.node().simplex()? };
            if forms[p].insert(s, read_cochain(c.node(), k)?).is_some() {
                return Err(item.node().fail("duplicate simplex")?);
            }
        }
    }
    let mut winding = BTreeMap::new();
    if let Some(list) = node.get(top) {
        for item in list.node().items()? {
            let (s, n) = item.node().pair()?;
            if winding.insert(s.node().simplex()?, n.node().int()?).is_some() {
                return Err(item.node().fail("duplicate simplex")?);
            }
        }
    }
    node.domain(Datum::new(k, forms, winding))
}

fn datum_kind<const N: usize>() -> &'static str {
    if N == 3 {
        "gerbe"
    } else {
        "line"
    }
}

pub fn datum_doc<const N: usize>(k: &SimplicialComplex, d: &Datum<N>) -> Value {
    with_complex(datum_kind::<N>(), k, datum_body(d))
}

pub fn read_datum_doc<const N: usize>(node: Node) -> ReadResult<(SimplicialComplex, Datum<N>)> {
    check_header(&node, &[datum_kind::<N>()])?;
    let k = read_complex(node.key("complex")?.node())?;
    let d = read_datum::<N>(node, &k)?;
    Ok((k, d))
}

// ---------------------------------------------------------------- products

pub fn product_doc(p: &ProductComplex) -> Value {
    let table = |m: &BTreeMap<u32, u32>| -> Value { m.iter().map(|(v, x)| json!([v, x])).collect() };
    document(
        "product",
        json!({
            "base": complex_body(&p.base),
            "circle": p.circle_size,
            "total": complex_body(&p.total),
            "proj_base": table(&p.proj_base),
            "proj_circle": table(&p.proj_circle),
        }),
    )
}

/// Only `base` and `circle` are read; the total space is rebuilt.
pub fn read_product_doc(node: Node) -> ReadResult<ProductComplex> {
    check_header(&node, &["product"])?;
    let base = read_complex(node.key("base")?.node())?;
    let m = node.key("circle")?;
    let size = m.node().count()?;
    m.node().domain(ProductComplex::new(&base, size))
}

// ---------------------------------------------------------------- morphisms

pub fn monomial_body(m: &MonomialMatrix) -> Value {
    json!({ "perm": m.perm(), "phases": m.phases().iter().map(fraction).collect::<Vec<_>>() })
}

pub fn read_monomial(node: Node) -> ReadResult<MonomialMatrix> {
    let perm = node.key("perm")?.node().items()?.iter().map(|l| l.node().count()).collect::<Result<Vec<_>, _>>()?;
    let phases = node.key("phases")?.node().items()?.iter().map(|l| l.node().fraction()).collect::<Result<Vec<_>, _>>()?;
    node.domain(MonomialMatrix::new(perm, phases))
}

pub fn morphism_body(e: &TwistedBundleMorphism) -> Value {
    let connection: Vec<Value> = e
        .connections()
        .map(|(v, list)| json!([v, list.iter().map(cochain_body).collect::<Vec<_>>()]))
        .collect();
    let transition: Vec<Value> = e.transitions().map(|(s, m)| json!([s, monomial_body(m)])).collect();
    json!({
        "source": datum_body(e.source()),
        "target": datum_body(e.target()),
        "rank": e.rank(),
        "connection": connection,
        "transition": transition,
    })
}

pub fn morphism_doc(k: &SimplicialComplex, e: &TwistedBundleMorphism) -> Value {
    with_complex("morphism", k, morphism_body(e))
}

pub fn read_morphism(node: Node, k: &SimplicialComplex) -> ReadResult<TwistedBundleMorphism> {
    let source = read_datum::<3>(node.key("source")?.node(), k)?;
    let target = read_datum::<3>(node.key("target")?.node(), k)?;
    let rank = node.key("rank")?.node().count()?;
    let mut connection = BTreeMap::new();
    if let Some(list) = node.get("connection") {
        for item in list.node().items()? {
            let (v, cs) = item.node().pair()?;
            let cs = cs.node().items()?.iter().map(|c| read_cochain(c.node(), k)).collect::<ReadResult<Vec<_>>>()?;
            connection.insert(v.node().vertex()?, cs);
        }
    }
    let mut transition = BTreeMap::new();
    for item in node.key("transition")?.node().items()? {
        let (e, m) = item.node().pair()?;
        transition.insert(e.node().simplex()?, read_monomial(m.node())?);
    }
    node.domain(TwistedBundleMorphism::new(k, source, target, rank, connection, transition))
}

pub fn read_morphism_doc(node: Node) -> ReadResult<(SimplicialComplex, TwistedBundleMorphism)> {
    check_header(&node, &["morphism"])?;
    let k = read_complex(node.key("complex")?.node())?;
    let e = read_morphism(node, &k)?;
    Ok((k, e))
}

// ----------------------------------------------------------------- reports

pub fn cyclo(c: &Cyclo) -> Value {
    let (conductor, coeffs) = c.reduced();
    json!({
        "conductor": int(conductor),
        "coefficients": coeffs.iter().map(fraction).collect::<Vec<_>>(),
        "rational": c.as_rational().map(|q| fraction(&q)),
        "scaled_root": c.as_scaled_root().map(|(r, phi)| json!([fraction(&r), fraction(&phi)])),
    })
}

fn matrix(m: &CycloMatrix) -> Value {
    let mut entries = Vec::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let v = m.get(i, j);
            if !v.is_zero() {
                entries.push(json!([i, j, cyclo(v)]));
            }
        }
    }
    json!({ "rows": m.rows(), "cols": m.cols(), "entries": entries })
}

pub fn intertwiner(psi: &Intertwiner) -> Value {
    psi.components().map(|(v, m)| json!([v, matrix(m)])).collect()
}

pub fn class_coordinates(c: &ClassCoordinates) -> Value {
    json!({
        "torsion": c.torsion.iter().map(|(d, y)| json!([int(*d), int(*y)])).collect::<Vec<_>>(),
        "free": ints(&c.free),
        "order": c.order().map(int),
    })
}

pub fn group(g: &GroupPresentation) -> Value {
    json!({ "free_rank": g.free_rank, "torsion": ints(&g.torsion), "display": g.to_string() })
}

pub fn violations(v: &[Violation]) -> Value {
    v.iter()
        .map(|x| json!({ "equation": x.equation, "location": x.location, "detail": x.detail }))
        .collect()
}

pub fn obstruction(coords: &ClassCoordinates, reason: &str) -> Value {
    document("obstruction", json!({ "reason": reason, "class": class_coordinates(coords) }))
}

pub fn diff_cohomology(r: &DiffCohomologyReport) -> Value {
    let homotopy: Vec<Value> = r
        .homotopy
        .iter()
        .map(|(k, g)| match g {
            HomotopyGroup::DifferentialCohomology => json!({ "k": k, "group": "differential cohomology" }),
            HomotopyGroup::Flat { degree, group: gr } => {
                json!({ "k": k, "group": "flat", "degree": degree, "value": group(gr) })
            }
            HomotopyGroup::Zero => json!({ "k": k, "group": "zero" }),
        })
        .collect();
    let witnesses: Vec<Value> = r
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "label": w.label,
                "expected_order": w.expected_order.map(int),
                "membership_ok": w.membership_ok,
                "order_ok": w.order_ok,
            })
        })
        .collect();
    document(
        "diff_cohomology",
        json!({
            "n": r.n,
            "characteristic_classes": group(&r.char_class_group),
            "flat_torus_dim": r.flat_torus_dim,
            "flat_torsion": ints(&r.flat_torsion),
            "curvature_lattice_rank": r.curvature_lattice_rank,
            "homotopy": homotopy,
            "pi_n_vanishes": r.pi_n_vanishes,
            "witnesses": witnesses,
            "all_verified": r.all_verified(),
        }),
    )
}

pub fn trivialization(t: &Trivialization) -> Value {
    document(
        "trivialization",
        json!({ "b": cochain_body(&t.b), "k": t.k.as_ref().map(cochain_body), "rho": cochain_body(&t.rho) }),
    )
}

pub fn morphism_report(r: &MorphismReport) -> Value {
    document(
        "morphism_report",
        json!({
            "valid": r.is_valid(),
            "violations": violations(&r.violations),
            "trace_condition": r.trace_condition,
            "fake_curvature": r.fake_curvature,
        }),
    )
}

pub fn section_space(r: &SectionSpaceReport) -> Value {
    document(
        "section_space",
        json!({
            "dd_class": class_coordinates(&r.dd_class),
            "rational_image": ints(&r.rational_image),
            "order": r.order.map(int),
            "rank_step": r.rank_step.map(int),
            "certified_empty": r.certified_empty,
            "known_sections": r.known_sections.iter().map(morphism_body).collect::<Vec<_>>(),
            "notes": r.notes,
        }),
    )
}

pub fn inner_product(v: &InnerProductValue) -> Value {
    document(
        "inner_product",
        json!({
            "dimension": v.dimension,
            "basis": v.basis.iter().map(intertwiner).collect::<Vec<_>>(),
            "nonflat": v.nonflat.iter().map(|(x, r, j)| json!([x, r, j])).collect::<Vec<_>>(),
        }),
    )
}

pub fn axioms(r: &HilbertAxiomReport) -> Value {
    let pairs: Vec<Value> = r
        .pairs
        .iter()
        .map(|p| {
            json!({
                "first": p.first,
                "second": p.second,
                "dimension": p.dimension,
                "matches_intertwiners": p.matches_intertwiners,
                "symmetric": p.symmetric,
            })
        })
        .collect();
    document(
        "hilbert_axioms",
        json!({
            "pairs": pairs,
            "nondegenerate": r.nondegenerate,
            "additive": r.additive,
            "failures": r.failures,
            "all_passed": r.all_passed(),
        }),
    )
}

pub fn reduced_section_body(r: &ReducedSection) -> Value {
    json!({
        "values": r.values.iter().map(|(x, w)| json!([x, cyclo(w)])).collect::<Vec<_>>(),
        "transitions": cochain_body(&r.transitions),
        "failures": r.failures,
        "conjugation_failures": r.conjugation_failures,
        "warning": r.warning,
        "is_zero": r.is_zero(),
        "relations_hold": r.relations_hold(),
    })
}

pub fn reduced_section(r: &ReducedSection) -> Value {
    document("reduced_section", reduced_section_body(r))
}

pub fn reduction_report(r: &ReductionReport) -> Value {
    document(
        "reduction_report",
        json!({
            "order": r.order,
            "base": complex_body(&r.base),
            "checks": r.checks.iter().map(|(n, ok)| json!({ "name": n, "passed": ok })).collect::<Vec<_>>(),
            "dd_class": class_coordinates(&r.dd_class),
            "dd_order": r.dd_order.map(int),
            "gerbe": datum_body(&r.gerbe),
            "reduced": datum_body(&r.reduced),
            "line": datum_body(&r.line),
            "section": r.section.as_ref().map(morphism_body),
            "reduced_section": r.reduced_section.as_ref().map(reduced_section_body),
            "determinant_section": r.determinant_section.as_ref().map(reduced_section_body),
            "all_passed": r.all_passed(),
        }),
    )
}

// -------------------------------------------------------------- vertex maps

pub fn vertex_map_doc(map: &BTreeMap<u32, u32>) -> Value {
    document("vertex_map", json!({ "map": map.iter().map(|(v, w)| json!([v, w])).collect::<Vec<_>>() }))
}

pub fn read_vertex_map_doc(node: Node) -> ReadResult<BTreeMap<u32, u32>> {
    check_header(&node, &["vertex_map"])?;
    let mut map = BTreeMap::new();
    for item in node.key("map")?.node().items()? {
        let (a, b) = item.node().pair()?;
        if map.insert(a.node().vertex()?, b.node().vertex()?).is_some() {
            return Err(item.node().fail("vertex mapped twice")?);
        }
    }
    Ok(map)
}

/// Reads an input document of any kind and writes it back out.
pub fn reencode(node: Node) -> ReadResult<Value> {
    Ok(match check_header(&node, &[])? {
        "complex" => complex_doc(&read_complex_doc(node)?),
        "cochain" => {
            let (k, c) = read_cochain_doc(node)?;
            cochain_doc(&k, &c)
        }
        "cocycle" => {
            let (k, x) = read_cocycle_doc(node)?;
            cocycle_doc(&k, &x)
        }
        "gerbe" => {
            let (k, g) = read_datum_doc::<3>(node)?;
            datum_doc(&k, &g)
        }
        "line" => {
            let (k, l) = read_datum_doc::<2>(node)?;
            datum_doc(&k, &l)
        }
        "product" => product_doc(&read_product_doc(node)?),
        "morphism" => {
            let (k, e) = read_morphism_doc(node)?;
            morphism_doc(&k, &e)
        }
        "vertex_map" => vertex_map_doc(&read_vertex_map_doc(node)?),
        other => return Err(node.key("kind")?.fail(format!("\"{other}\" is not an input document"))?),
    })
}

/// Pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Parses text, reporting syntax errors at the document root.
pub fn parse(text: &str) -> Result<Value, IoError> {
    serde_json::from_str(text)
        .map_err(|e| IoError { pointer: String::new(), message: format!("invalid JSON: {e}") })
}
