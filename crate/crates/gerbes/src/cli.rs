//! The `gerbes` command line: subcommands read JSON documents, print one
//! JSON document on stdout and report diagnostics on stderr.
//!
//! Exit codes: 0 success, 1 validation failure or bad usage, 2 mathematical
//! obstruction, 3 input/output error.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use gerbes_core::cohomology::cohomology;
use gerbes_core::deligne::{self, DeligneCochain, DifferentialCocycle, Entry};
use gerbes_core::gerbe::{ClosedDomain, GerbeDatum, LineDatum};
use gerbes_core::morphism::{self, direct_sum_structure, TwistedBundleMorphism};
use gerbes_core::product::ProductComplex;
use gerbes_core::{reduction, sections, Cochain, Error, Ring, SimplicialComplex, Q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::json::{self, IoError, Node, ReadError};

#[derive(Parser, Debug)]
#[command(name = "gerbes", version, about = "Bundle gerbes with connection on finite simplicial complexes")]
pub struct Cli {
    /// Seed for randomized subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Complexes and ordinary cohomology.
    #[command(subcommand)]
    Complex(ComplexCmd),
    /// Differential cocycles and Deligne cohomology.
    #[command(subcommand)]
    Deligne(DeligneCmd),
    /// Gerbe data.
    #[command(subcommand)]
    Gerbe(GerbeCmd),
    /// Twisted vector bundles between gerbes and their intertwiners.
    #[command(subcommand)]
    Morphism(MorphismCmd),
    /// Sections of a gerbe as a 2-Hilbert space.
    #[command(subcommand)]
    Sections(SectionsCmd),
    /// Triangulate `X × S¹`.
    Product {
        /// Base complex: a file or a fixture name.
        #[arg(long)]
        base: String,
        /// Number of circle vertices.
        #[arg(long)]
        circle: usize,
    },
    /// Dimensional reduction along the circle factor.
    #[command(subcommand)]
    Reduce(ReduceCmd),
    /// Validate an input document and print it in canonical form.
    Fmt { document: PathBuf },
    /// End-to-end pipelines.
    #[command(subcommand)]
    Demo(DemoCmd),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RingArg {
    #[value(name = "Z")]
    Z,
    #[value(name = "Q")]
    Q,
    #[value(name = "QmodZ")]
    QmodZ,
}

#[derive(Subcommand, Debug)]
pub enum ComplexCmd {
    /// Print a built-in complex (circle:M, sphere2, sphere3, torus9, rp2_6, rp2xs1, lens:P).
    Fixture { name: String },
    /// f-vector, Euler characteristic and integral cohomology.
    Info { complex: String },
    /// Cohomology groups in every degree.
    Cohomology {
        complex: String,
        #[arg(long, value_enum, default_value = "Z")]
        ring: RingArg,
    },
    /// Coboundary of a cochain document.
    Coboundary { cochain: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum DeligneCmd {
    /// Structure of differential cohomology in degree n.
    Cohomology {
        #[arg(long)]
        n: usize,
        complex: String,
    },
    /// Check the cocycle equations.
    Check { cocycle: PathBuf },
    /// Write a cocycle as a coboundary plus a flat form.
    Trivialize { cocycle: PathBuf },
    /// Local data of a cocycle of degree 2 or 3.
    Localize { cocycle: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum GerbeCmd {
    Check { gerbe: PathBuf },
    /// Dixmier–Douady class.
    Class { gerbe: PathBuf },
    Curvature { gerbe: PathBuf },
    /// Surface holonomy along a vertex map from a closed oriented surface.
    Holonomy {
        gerbe: PathBuf,
        #[arg(long)]
        surface: String,
        #[arg(long)]
        map: PathBuf,
    },
    Tensor { first: PathBuf, second: PathBuf },
    Dual { gerbe: PathBuf },
    /// Pullback along a vertex map from another complex.
    Pullback {
        gerbe: PathBuf,
        #[arg(long)]
        source: String,
        #[arg(long)]
        map: PathBuf,
    },
    /// Gauge to constant transition lifts.
    Normalize { gerbe: PathBuf },
    /// Cup product of a flat torsion line on the base with the circle angle.
    Cup {
        #[arg(long)]
        product: PathBuf,
        #[arg(long, default_value_t = 2)]
        p: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum MorphismCmd {
    Check { morphism: PathBuf },
    /// `outer ∘ inner`.
    Compose { outer: PathBuf, inner: PathBuf },
    Sum { first: PathBuf, second: PathBuf },
    /// Riesz dual between the dual gerbes.
    Dual { morphism: PathBuf },
    Adjoint { morphism: PathBuf },
    /// The bundle `Hom(E, F)` over the base.
    Pair { first: PathBuf, second: PathBuf },
    /// Determinant line.
    Det { morphism: PathBuf },
    /// Intertwiners `first ⇒ second`; parallel ones unless `--all`.
    Intertwiners {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        all: bool,
    },
    /// Identity morphism of a gerbe.
    Identity { gerbe: PathBuf },
    /// Rank-p clock-shift section of a gerbe with combinatorial data.
    ClockShift {
        gerbe: PathBuf,
        #[arg(long)]
        p: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum SectionsCmd {
    /// Rank obstruction and a known section when one is found.
    Obstruction { gerbe: PathBuf },
    /// Inner product `⟨s, t⟩`.
    Inner { first: PathBuf, second: PathBuf },
    /// 2-Hilbert space axioms on sample sections.
    Axioms {
        gerbe: PathBuf,
        /// Directory of morphism documents; defaults to the known section and its double.
        #[arg(long)]
        samples: Option<PathBuf>,
    },
    /// `s ⊗ ℂ^d`.
    Act {
        section: PathBuf,
        #[arg(long)]
        dim: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum ReduceCmd {
    /// Fiber integral of a gerbe on `X × S¹`: a line datum on `X`.
    Gerbe {
        #[arg(long)]
        product: PathBuf,
        gerbe: PathBuf,
    },
    /// Wilson line datum with the reduced transitions.
    Wilson {
        #[arg(long)]
        product: PathBuf,
        gerbe: PathBuf,
    },
    /// Fiber traces of a section of a gerbe on `X × S¹`.
    Section {
        #[arg(long)]
        product: PathBuf,
        section: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum DemoCmd {
    /// Reduction of the order-p cup gerbe on `X × S¹`.
    Decomposable {
        #[arg(long)]
        p: usize,
        /// Base complex replacing the default ℝP².
        #[arg(long)]
        lens: Option<String>,
        /// Also reduce the square of the gerbe.
        #[arg(long)]
        square: bool,
    },
    /// Randomized identities on the built-in complexes.
    Selftest {
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

/// Why a command did not produce its result.
#[derive(Debug)]
pub enum Failure {
    Io(IoError),
    Domain { pointer: Option<String>, error: Error },
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Io(e)
    }
}

impl From<ReadError> for Failure {
    fn from(e: ReadError) -> Self {
        match e {
            ReadError::Io(e) => Failure::Io(e),
            ReadError::Domain { pointer, error } => Failure::Domain { pointer: Some(pointer), error },
        }
    }
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure::Domain { pointer: None, error }
    }
}

/// A result document; `ok = false` means a check failed (exit 1).
pub struct Output {
    pub value: Value,
    pub ok: bool,
}

impl From<Value> for Output {
    fn from(value: Value) -> Self {
        Output { value, ok: true }
    }
}

type Run = Result<Output, Failure>;

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Domain { pointer: None, error: Error::Validation(msg.into()) }
}

fn read(path: &Path) -> Result<Value, IoError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| IoError { pointer: String::new(), message: format!("{}: {e}", path.display()) })?;
    json::parse(&text).map_err(|e| IoError { pointer: e.pointer, message: format!("{}: {}", path.display(), e.message) })
}

/// A complex from a file, or a fixture name when no such file exists.
fn complex_arg(arg: &str) -> Result<SimplicialComplex, Failure> {
    let path = Path::new(arg);
    if !path.exists() {
        if let Some(k) = json::fixture(arg) {
            return Ok(k);
        }
    }
    let v = read(path)?;
    Ok(json::read_complex_doc(Node::root(&v))?)
}

fn gerbe(path: &Path) -> Result<(SimplicialComplex, GerbeDatum), Failure> {
    let v = read(path)?;
    Ok(json::read_datum_doc::<3>(Node::root(&v))?)
}

fn bundle(path: &Path) -> Result<(SimplicialComplex, TwistedBundleMorphism), Failure> {
    let v = read(path)?;
    Ok(json::read_morphism_doc(Node::root(&v))?)
}

fn product(path: &Path) -> Result<ProductComplex, Failure> {
    let v = read(path)?;
    Ok(json::read_product_doc(Node::root(&v))?)
}

fn vertex_map(path: &Path) -> Result<BTreeMap<u32, u32>, Failure> {
    let v = read(path)?;
    Ok(json::read_vertex_map_doc(Node::root(&v))?)
}

fn same_complex(a: &SimplicialComplex, b: &SimplicialComplex) -> Result<(), Failure> {
    if a != b {
        return Err(invalid("documents live on different complexes"));
    }
    Ok(())
}

fn ring(r: RingArg) -> Ring {
    match r {
        RingArg::Z => Ring::Int,
        RingArg::Q => Ring::Rat,
        RingArg::QmodZ => Ring::RatMod1,
    }
}

/// `free_rank` counts copies of the coefficient ring itself.
fn display(g: &gerbes_core::cohomology::GroupPresentation, r: RingArg) -> String {
    let unit = match r {
        RingArg::Z => return g.to_string(),
        RingArg::Q => "Q",
        RingArg::QmodZ => "(Q/Z)",
    };
    let mut parts: Vec<String> = Vec::new();
    if g.free_rank > 0 {
        parts.push(format!("{unit}^{}", g.free_rank));
    }
    parts.extend(g.torsion.iter().map(|d| format!("Z/{d}")));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn complex_cmd(cmd: &ComplexCmd) -> Run {
    match cmd {
        ComplexCmd::Fixture { name } => {
            let k = json::fixture(name).ok_or_else(|| invalid(format!("unknown fixture \"{name}\"")))?;
            Ok(json::complex_doc(&k).into())
        }
        ComplexCmd::Info { complex } => {
            let k = complex_arg(complex)?;
            let groups = (0..=k.dim())
                .map(|q| Ok(json::group(&cohomology(&k, q, Ring::Int)?)))
                .collect::<gerbes_core::Result<Vec<_>>>()?;
            Ok(json::document(
                "complex_info",
                json!({
                    "dimension": k.dim(),
                    "f_vector": k.f_vector(),
                    "euler_characteristic": k.euler_characteristic(),
                    "integral_cohomology": groups,
                }),
            )
            .into())
        }
        ComplexCmd::Cohomology { complex, ring: r } => {
            let k = complex_arg(complex)?;
            let groups = (0..=k.dim())
                .map(|q| {
                    let g = cohomology(&k, q, ring(*r))?;
                    let mut v = json::group(&g);
                    v["display"] = Value::from(display(&g, *r));
                    Ok(v)
                })
                .collect::<gerbes_core::Result<Vec<_>>>()?;
            Ok(json::document("cohomology", json!({ "ring": format!("{r:?}"), "groups": groups })).into())
        }
        ComplexCmd::Coboundary { cochain } => {
            let v = read(cochain)?;
            let (k, c) = json::read_cochain_doc(Node::root(&v))?;
            Ok(json::cochain_doc(&k, &c.coboundary(&k)).into())
        }
    }
}

fn deligne_cmd(cmd: &DeligneCmd) -> Run {
    let cocycle = |path: &Path| -> Result<(SimplicialComplex, DifferentialCocycle), Failure> {
        let v = read(path)?;
        Ok(json::read_cocycle_doc(Node::root(&v))?)
    };
    match cmd {
        DeligneCmd::Cohomology { n, complex } => {
            let k = complex_arg(complex)?;
            let rep = deligne::diff_cohomology(*n, &k)?;
            let ok = rep.all_verified();
            Ok(Output { value: json::diff_cohomology(&rep), ok })
        }
        DeligneCmd::Check { cocycle: path } => {
            let (k, x) = cocycle(path)?;
            let v = x.violations(&k);
            let value = json::document("cocycle_check", json!({ "valid": v.is_empty(), "violations": json::violations(&v) }));
            Ok(Output { value, ok: v.is_empty() })
        }
        DeligneCmd::Trivialize { cocycle: path } => {
            let (k, x) = cocycle(path)?;
            Ok(json::trivialization(&deligne::solve_trivialization(&k, &x)?).into())
        }
        DeligneCmd::Localize { cocycle: path } => {
            let (k, x) = cocycle(path)?;
            match x.n {
                2 => Ok(json::datum_doc(&k, &LineDatum::localize(&k, &x)?).into()),
                3 => Ok(json::datum_doc(&k, &GerbeDatum::localize(&k, &x)?).into()),
                n => Err(Error::Degree(format!("local data documents exist for n = 2 and 3, got {n}")).into()),
            }
        }
    }
}

fn gerbe_cmd(cmd: &GerbeCmd) -> Run {
    match cmd {
        GerbeCmd::Check { gerbe: path } => {
            let (k, g) = gerbe(path)?;
            let v = g.violations(&k);
            let value = json::document(
                "gerbe_check",
                json!({
                    "cocycle": v.is_empty(),
                    "combinatorial": g.is_combinatorial(&k),
                    "violations": json::violations(&v),
                }),
            );
            Ok(Output { value, ok: v.is_empty() })
        }
        GerbeCmd::Class { gerbe: path } => {
            let (k, g) = gerbe(path)?;
            Ok(json::document("dd_class", json::class_coordinates(&g.dd_class(&k)?)).into())
        }
        GerbeCmd::Curvature { gerbe: path } => {
            let (k, g) = gerbe(path)?;
            Ok(json::cochain_doc(&k, &g.curvature(&k)?).into())
        }
        GerbeCmd::Holonomy { gerbe: path, surface, map } => {
            let (k, g) = gerbe(path)?;
            let domain = ClosedDomain::new(complex_arg(surface)?)?;
            let hol = g.surface_holonomy(&k, &domain, &vertex_map(map)?, None)?;
            Ok(json::document("holonomy", json!({ "holonomy": json::fraction(&hol) })).into())
        }
        GerbeCmd::Tensor { first, second } => {
            let (k, a) = gerbe(first)?;
            let (k2, b) = gerbe(second)?;
            same_complex(&k, &k2)?;
            Ok(json::datum_doc(&k, &a.tensor(&b)).into())
        }
        GerbeCmd::Dual { gerbe: path } => {
            let (k, g) = gerbe(path)?;
            Ok(json::datum_doc(&k, &g.dual()).into())
        }
        GerbeCmd::Pullback { gerbe: path, source, map } => {
            let (k, g) = gerbe(path)?;
            let src = complex_arg(source)?;
            Ok(json::datum_doc(&src, &g.pullback(&src, &k, &vertex_map(map)?)?).into())
        }
        GerbeCmd::Normalize { gerbe: path } => {
            let (k, g) = gerbe(path)?;
            Ok(json::datum_doc(&k, &g.normalize(&k)?.0).into())
        }
        GerbeCmd::Cup { product: path, p } => {
            let prod = product(path)?;
            let line = reduction::torsion_line(&prod.base, *p)?;
            Ok(json::datum_doc(&prod.total, &reduction::cup_product_gerbe(&line, &prod)?).into())
        }
    }
}

fn morphism_cmd(cmd: &MorphismCmd) -> Run {
    let pair = |a: &Path, b: &Path| -> Result<(SimplicialComplex, TwistedBundleMorphism, TwistedBundleMorphism), Failure> {
        let (k, e) = bundle(a)?;
        let (k2, f) = bundle(b)?;
        same_complex(&k, &k2)?;
        Ok((k, e, f))
    };
    match cmd {
        MorphismCmd::Check { morphism } => {
            let (k, e) = bundle(morphism)?;
            let rep = e.check(&k);
            let ok = rep.is_valid();
            Ok(Output { value: json::morphism_report(&rep), ok })
        }
        MorphismCmd::Compose { outer, inner } => {
            let (k, e, f) = pair(outer, inner)?;
            Ok(json::morphism_doc(&k, &e.compose(&f)?).into())
        }
        MorphismCmd::Sum { first, second } => {
            let (k, e, f) = pair(first, second)?;
            Ok(json::morphism_doc(&k, &e.direct_sum(&f)?).into())
        }
        MorphismCmd::Dual { morphism } => {
            let (k, e) = bundle(morphism)?;
            Ok(json::morphism_doc(&k, &e.riesz_dual()).into())
        }
        MorphismCmd::Adjoint { morphism } => {
            let (k, e) = bundle(morphism)?;
            Ok(json::morphism_doc(&k, &e.adjoint()).into())
        }
        MorphismCmd::Pair { first, second } => {
            let (k, e, f) = pair(first, second)?;
            Ok(json::morphism_doc(&k, &TwistedBundleMorphism::pairing(&e, &f)?).into())
        }
        MorphismCmd::Det { morphism } => {
            let (k, e) = bundle(morphism)?;
            Ok(json::morphism_doc(&k, &e.determinant()).into())
        }
        MorphismCmd::Intertwiners { first, second, all } => {
            let (k, e, f) = pair(first, second)?;
            let space = morphism::intertwiner_space(&k, &e, &f, !*all)?;
            let basis: Vec<Value> = space.basis.iter().map(json::intertwiner).collect();
            Ok(json::document("intertwiners", json!({ "dimension": space.dimension, "parallel": !*all, "basis": basis })).into())
        }
        MorphismCmd::Identity { gerbe: path } => {
            let (k, g) = gerbe(path)?;
            Ok(json::morphism_doc(&k, &TwistedBundleMorphism::identity(&k, &g)).into())
        }
        MorphismCmd::ClockShift { gerbe: path, p } => {
            let (k, g) = gerbe(path)?;
            Ok(json::morphism_doc(&k, &morphism::clock_shift_section(&k, &g, *p)?).into())
        }
    }
}

fn sample_sections(dir: &Path, k: &SimplicialComplex) -> Result<Vec<TwistedBundleMorphism>, Failure> {
    let entries = std::fs::read_dir(dir)
        .map_err(|e| IoError { pointer: String::new(), message: format!("{}: {e}", dir.display()) })?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut out = Vec::new();
    for p in paths {
        let (k2, e) = bundle(&p)?;
        same_complex(k, &k2)?;
        out.push(e);
    }
    Ok(out)
}

fn sections_cmd(cmd: &SectionsCmd) -> Run {
    match cmd {
        SectionsCmd::Obstruction { gerbe: path } => {
            let (k, g) = gerbe(path)?;
            Ok(json::section_space(&sections::sections_obstruction(&k, &g)?).into())
        }
        SectionsCmd::Inner { first, second } => {
            let (k, s) = bundle(first)?;
            let (k2, t) = bundle(second)?;
            same_complex(&k, &k2)?;
            Ok(json::inner_product(&sections::inner_product(&k, &s, &t)?).into())
        }
        SectionsCmd::Axioms { gerbe: path, samples } => {
            let (k, g) = gerbe(path)?;
            let list = match samples {
                Some(dir) => sample_sections(dir, &k)?,
                None => {
                    let rep = sections::sections_obstruction(&k, &g)?;
                    let Some(s) = rep.known_sections.into_iter().next() else {
                        return Err(Error::Obstruction { coords: rep.dd_class, reason: "no section known".into() }.into());
                    };
                    let double = direct_sum_structure(&s, &s)?.sum;
                    vec![s, double]
                }
            };
            if let Some(bad) = list.iter().position(|s| s.target() != &g && s.source() != &g) {
                return Err(invalid(format!("sample {bad} is not a morphism into or out of the gerbe")));
            }
            let rep = sections::check_2hilbert_axioms(&k, &list)?;
            let ok = rep.all_passed();
            Ok(Output { value: json::axioms(&rep), ok })
        }
        SectionsCmd::Act { section, dim } => {
            let (k, s) = bundle(section)?;
            Ok(json::morphism_doc(&k, &sections::hilbert_action(&k, &s, *dim)?).into())
        }
    }
}

fn reduce_cmd(cmd: &ReduceCmd) -> Run {
    match cmd {
        ReduceCmd::Gerbe { product: p, gerbe: path } => {
            let prod = product(p)?;
            let (k, g) = gerbe(path)?;
            Ok(json::datum_doc(&prod.base, &reduction::reduce_gerbe(&k, &g, &prod)?).into())
        }
        ReduceCmd::Wilson { product: p, gerbe: path } => {
            let prod = product(p)?;
            let (k, g) = gerbe(path)?;
            Ok(json::datum_doc(&prod.base, &reduction::wilson_line_datum(&k, &g, &prod)?).into())
        }
        ReduceCmd::Section { product: p, section } => {
            let prod = product(p)?;
            let (k, s) = bundle(section)?;
            let red = reduction::reduce_section(&k, &s, &prod)?;
            let ok = red.relations_hold();
            Ok(Output { value: json::reduced_section(&red), ok })
        }
    }
}

fn demo_cmd(cmd: &DemoCmd, seed: u64) -> Run {
    match cmd {
        DemoCmd::Decomposable { p, lens, square } => {
            let base = lens.as_deref().map(complex_arg).transpose()?;
            let rep = reduction::verify_decomposable_demo(*p, base.as_ref(), *square)?;
            let ok = rep.all_passed();
            Ok(Output { value: json::reduction_report(&rep), ok })
        }
        DemoCmd::Selftest { samples } => selftest(seed, *samples),
    }
}

fn small_q(r: &mut ChaCha8Rng) -> Q {
    Q::new(r.gen_range(-6..=6), r.gen_range(1..=4))
}

fn random_cochain(r: &mut ChaCha8Rng, k: &SimplicialComplex, q: usize, ring: Ring) -> Cochain {
    let mut c = Cochain::zero(q, ring);
    for s in k.simplices(q) {
        let v = if ring == Ring::Int { Q::from_integer(r.gen_range(-3..=3)) } else { small_q(r) };
        c.set(s.clone(), v);
    }
    c
}

fn random_deligne(r: &mut ChaCha8Rng, k: &SimplicialComplex, n: usize, t: usize) -> gerbes_core::Result<DeligneCochain> {
    let mut entries = Vec::new();
    for p in 0..=t.min(k.dim()) {
        let level = t as isize - 1 - p as isize;
        for s in k.simplices(p) {
            if level == -1 {
                entries.push((s.clone(), Entry::Const(r.gen_range(-3..=3))));
            } else if level < n as isize {
                let mut c = Cochain::zero(level as usize, Ring::Rat);
                for tau in k.star_simplices(s, level as usize) {
                    if r.gen_bool(0.4) {
                        c.set(tau, small_q(r));
                    }
                }
                entries.push((s.clone(), Entry::Form(c)));
            }
        }
    }
    DeligneCochain::new(k, n, t, entries)
}

/// Seeded checks of `D² = 0`, `collate ∘ localize = id` and gauge
/// invariance of the class on the built-in complexes.
fn selftest(seed: u64, samples: usize) -> Run {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let complexes = [
        ("sphere2", gerbes_core::fixtures::sphere2()),
        ("rp2_6", gerbes_core::fixtures::rp2_6()),
        ("sphere3", gerbes_core::fixtures::sphere3()),
    ];
    let mut failures = Vec::new();
    for i in 0..samples {
        let (name, k) = &complexes[i % complexes.len()];
        let n = 1 + i % 3;
        let t = r.gen_range(0..=n);
        let x = random_deligne(&mut r, k, n, t)?;
        if !deligne::total_differential(k, &deligne::total_differential(k, &x)).is_zero() {
            failures.push(format!("sample {i} on {name}: D² ≠ 0"));
        }
        let b = random_cochain(&mut r, k, n - 1, Ring::Int);
        let h = random_cochain(&mut r, k, n - 1, Ring::Rat);
        let c = b.coboundary(k);
        let y = DifferentialCocycle::new(n, c.clone(), h.clone(), c.add(&h.coboundary(k)))?;
        let local = deligne::localize(k, &y)?;
        if deligne::collate(k, &local)? != y {
            failures.push(format!("sample {i} on {name}: collate ∘ localize ≠ id"));
        }
        let shift = DifferentialCocycle::coboundary(k, &random_cochain(&mut r, k, n - 1, Ring::Int), None);
        if !deligne::class_equal(k, &y, &y.add(&shift))? {
            failures.push(format!("sample {i} on {name}: class changed by a coboundary"));
        }
    }
    let ok = failures.is_empty();
    let value = json::document("selftest", json!({ "seed": seed, "samples": samples, "failures": failures, "passed": ok }));
    Ok(Output { value, ok })
}

pub fn execute(cli: &Cli) -> Run {
    match &cli.command {
        Command::Complex(c) => complex_cmd(c),
        Command::Deligne(c) => deligne_cmd(c),
        Command::Gerbe(c) => gerbe_cmd(c),
        Command::Morphism(c) => morphism_cmd(c),
        Command::Sections(c) => sections_cmd(c),
        Command::Product { base, circle } => {
            let k = complex_arg(base)?;
            Ok(json::product_doc(&ProductComplex::new(&k, *circle)?).into())
        }
        Command::Reduce(c) => reduce_cmd(c),
        Command::Fmt { document } => {
            let v = read(document)?;
            Ok(json::reencode(Node::root(&v))?.into())
        }
        Command::Demo(c) => demo_cmd(c, cli.seed),
    }
}

fn error_doc(kind: &str, message: &str, pointer: Option<&str>) -> Value {
    json::document("error", json!({ "error": kind, "message": message, "pointer": pointer }))
}

/// Runs one invocation and returns the exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    let (value, code) = match execute(&cli) {
        Ok(o) => {
            if !o.ok {
                let _ = writeln!(err, "check failed");
            }
            (o.value, if o.ok { 0 } else { 1 })
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "input error: {e}");
            (error_doc("io", &e.message, Some(&e.pointer)), 3)
        }
        Err(Failure::Domain { error: Error::Obstruction { coords, reason }, .. }) => {
            let _ = writeln!(err, "obstruction: {reason}");
            (json::obstruction(&coords, &reason), 2)
        }
        Err(Failure::Domain { pointer, error }) => {
            let _ = writeln!(err, "{error}");
            (error_doc("validation", &error.to_string(), pointer.as_deref()), 1)
        }
    };
    let _ = out.write_all(json::render(&value).as_bytes());
    code
}
