use affine_tl::algebra::{check_relations as check_relations_report, multiply, Algebra, AlgebraElement, AlgebraSpec};
use affine_tl::cellular::{verify_cell_axiom, CellDatum};
use affine_tl::claims;
use affine_tl::diagrams::{AffineDiagram, Generator};
use affine_tl::involutions::enumerate_annular;
use affine_tl::homext::ext_table;
use affine_tl::repmod::{block_decompose, classify_simples, gram_matrix, self_extension_module, standard_module_at, uniserial_module, Module};
use affine_tl::scalars::expr::{parse_poly, parse_scalar};
use affine_tl::scalars::Field;
use affine_tl::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "atl", version, about = "Exact computations in affine Temperley-Lieb algebras and their quotients")]
struct Cli {
    /// worker threads for table commands (output order does not depend on it)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Debug)]
enum FamilyArg {
    /// D_n itself (infinite dimensional; usable for multiply)
    Dn,
    /// D_n(q)
    Dnq,
    /// the q-Jones quotient J_q(n)
    Jq,
    /// O_n(q)
    On,
    /// the Temperley-Lieb quotient Gamma_n(q)
    Gamma,
    /// D_n[J] for J = (f), n even
    #[value(name = "dnJ", alias = "dnj")]
    DnJ,
    /// the truncation D_n^+ / I_n^+(c)
    Dnplus,
}

#[derive(Args, Clone)]
struct AlgArgs {
    #[arg(long, value_enum, default_value = "jq")]
    family: FamilyArg,
    #[arg(long)]
    n: Option<usize>,
    /// q as an expression in the field, e.g. 1, 2/3, zeta^2, v^2
    #[arg(long, default_value = "1")]
    q: String,
    #[arg(long, default_value_t = 0)]
    c: usize,
    /// f for dnJ, e.g. "X^2" or "(X-1)^2"
    #[arg(long)]
    f: Option<String>,
    /// Q, Q(zeta N), GF(p^k), Q(v); defaults to Q(zeta 2n)
    #[arg(long)]
    field: Option<String>,
    /// the unit v as an expression (default 1, or the generator of Q(v))
    #[arg(long)]
    v: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// basis sizes per sector and weight, and the total dimension
    Enumerate {
        #[command(flatten)]
        alg: AlgArgs,
        /// list the annular involutions with t fixed points instead
        #[arg(long)]
        t: Option<usize>,
    },
    /// a word in the generators E1..En, u, U (= u^-1) as an element file, e.g. "E1 u E2"
    Element {
        #[command(flatten)]
        alg: AlgArgs,
        word: String,
    },
    /// product of two element files
    Multiply {
        #[command(flatten)]
        alg: AlgArgs,
        a: PathBuf,
        b: PathBuf,
    },
    /// relations, triple bijection, positivity closure and cell axioms, or the acceptance checks
    Verify {
        #[command(flatten)]
        alg: AlgArgs,
        /// run the acceptance criteria instead
        #[arg(long)]
        claims: bool,
        #[arg(long)]
        criterion: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// sample this many product pairs in the cell-axiom check instead of all
        #[arg(long)]
        samples: Option<usize>,
    },
    /// cell datum export (weights, M sizes, C expansion lengths) and the cell axiom check
    CellVerify {
        #[command(flatten)]
        alg: AlgArgs,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Gram determinant, rank and radical per layer
    Gram {
        #[command(flatten)]
        alg: AlgArgs,
        #[arg(long)]
        weight: Option<String>,
    },
    /// the simple modules L(lambda) and their dimensions
    Simples {
        #[command(flatten)]
        alg: AlgArgs,
    },
    /// Ext^1 between all standard modules by both methods
    ExtTable {
        #[command(flatten)]
        alg: AlgArgs,
    },
    /// generalized eigenspaces of u^n on a module file
    Blocks {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// write a module file
    Module {
        #[command(subcommand)]
        kind: ModuleKind,
    },
}

#[derive(Subcommand)]
enum ModuleKind {
    /// the standard module of a layer
    Standard {
        #[command(flatten)]
        alg: AlgArgs,
        #[arg(long)]
        weight: String,
    },
    /// the uniserial D_n-module with k layers W(t, alpha) (k = 2 is I_M(S))
    Uniserial {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value = "Q(v)")]
        field: String,
        #[arg(long)]
        v: Option<String>,
    },
}

enum Failure {
    Check(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let dbg = format!("{e:?}");
        let name = dbg.split('(').next().unwrap_or_default();
        Failure::Usage(format!("[{name}] {e}"))
    }
}

type Out = Result<(), Failure>;

impl AlgArgs {
    /// checked in run() for every command that needs it
    fn n(&self) -> usize {
        self.n.unwrap_or(0)
    }
}

fn field_of(a: &AlgArgs) -> Result<Field, Failure> {
    let name = a.field.clone().unwrap_or_else(|| format!("Q(zeta {})", 2 * a.n()));
    Ok(Field::parse(&name, a.v.as_deref())?)
}

fn spec_of(a: &AlgArgs) -> Result<AlgebraSpec, Failure> {
    let f = field_of(a)?;
    let q = parse_scalar(&f, &a.q)?;
    let spec = match a.family {
        FamilyArg::Dn => AlgebraSpec::dn(&f, a.n())?,
        FamilyArg::Dnq => AlgebraSpec::dn_q(&f, a.n(), q)?,
        FamilyArg::Jq => AlgebraSpec::jones(&f, a.n(), q)?,
        FamilyArg::On => AlgebraSpec::on_q(&f, a.n(), q)?,
        FamilyArg::Gamma => AlgebraSpec::gamma(&f, a.n(), q)?,
        FamilyArg::DnJ => {
            let fp = a.f.as_deref().ok_or_else(|| Failure::Usage("dnJ needs --f".into()))?;
            AlgebraSpec::dn_j(&f, a.n(), parse_poly(&f, fp)?)?
        }
        FamilyArg::Dnplus => AlgebraSpec::dn_plus(&f, a.n(), a.c, q)?,
    };
    Ok(spec)
}

fn algebra(a: &AlgArgs) -> Result<Arc<Algebra>, Failure> {
    Ok(Arc::new(Algebra::new(&spec_of(a)?)?))
}

fn family_name(a: &AlgArgs) -> String {
    a.family.to_possible_value().unwrap().get_name().to_string()
}

/// q for the table column: the polynomial f for dnJ.
fn q_label(a: &AlgArgs) -> String {
    match a.family {
        FamilyArg::DnJ => a.f.clone().unwrap_or_default(),
        FamilyArg::Dnplus => format!("{};c={}", a.q, a.c),
        _ => a.q.clone(),
    }
}

fn read_json(p: &Path) -> Result<serde_json::Value, Failure> {
    let s = std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
    serde_json::from_str(&s).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).unwrap());
}

fn csv_out(header: &[&str], rows: Vec<Vec<String>>) -> Out {
    let mut w = csv::Writer::from_writer(std::io::stdout());
    let io = |e: csv::Error| Failure::Usage(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    w.flush().map_err(|e| Failure::Usage(e.to_string()))
}

fn enumerate(a: &AlgArgs, t: Option<usize>, fmt: Format) -> Out {
    if let Some(t) = t {
        let invs = enumerate_annular(a.n(), t)?;
        let rows: Vec<Vec<usize>> = invs.iter().map(|s| s.partners1()).collect();
        if fmt == Format::Json {
            print_json(&json!({"n": a.n(), "t": t, "count": rows.len(), "involutions": rows}));
        } else {
            for r in &rows {
                println!("{r:?}");
            }
            println!("{} involutions", rows.len());
        }
        return Ok(());
    }
    let spec = spec_of(a)?;
    let layout = spec.layout()?;
    if !layout.finite {
        return Err(Error::InfiniteDimensional.into());
    }
    let alg = Arc::new(Algebra::new(&spec)?);
    let cd = CellDatum::build_lenient(alg.clone())?;
    let sectors: Vec<_> = layout
        .sectors
        .iter()
        .map(|s| json!({"t": s.t, "halves": s.h(), "window": s.len(), "size": s.size()}))
        .collect();
    let weights: Vec<_> = cd
        .layers
        .iter()
        .enumerate()
        .map(|(li, l)| {
            let h = cd.m_size(li);
            json!({"weight": l.weight.to_string(), "root": l.root.as_ref().map(|r| cd.field().fmt(r)), "cells": h * h})
        })
        .collect();
    if fmt == Format::Json {
        print_json(&json!({"spec": spec.key(), "sectors": sectors, "weights": weights, "dimension": layout.dim}));
        return Ok(());
    }
    println!("{}", spec.key());
    for s in &sectors {
        println!("sector t={}: {} halves, window {}, size {}", s["t"], s["halves"], s["window"], s["size"]);
    }
    for w in &weights {
        let root = w["root"].as_str().map(|r| format!(" root {r}")).unwrap_or_default();
        println!("weight {}{root}: {} basis elements", w["weight"].as_str().unwrap(), w["cells"]);
    }
    println!("dimension {}", layout.dim);
    Ok(())
}

fn multiply_cmd(a: &AlgArgs, pa: &Path, pb: &Path) -> Out {
    let spec = spec_of(a)?;
    let mut elems = vec![];
    for p in [pa, pb] {
        let v = read_json(p)?;
        if let Some(terms) = v.get("terms").and_then(|t| t.as_array()) {
            for t in terms {
                let d = AffineDiagram::from_json(t.get("diagram").unwrap_or(&json!(null)))?;
                if d.n() != a.n() {
                    return Err(Error::SizeMismatch(format!("{}: diagram on {} points, algebra has n = {}", p.display(), d.n(), a.n())).into());
                }
            }
        }
        if let Some(s) = v.get("spec").and_then(|s| s.as_str()) {
            if s != spec.key() {
                return Err(Error::SpecMismatch(format!("{}: element of {s}, expected {}", p.display(), spec.key())).into());
            }
        }
        elems.push(AlgebraElement::from_json(&spec, &v)?);
    }
    print_json(&multiply(&elems[0], &elems[1])?.to_json());
    Ok(())
}

fn element(a: &AlgArgs, word: &str) -> Out {
    let spec = spec_of(a)?;
    let mut e = AlgebraElement::diagram(&spec, AffineDiagram::identity(a.n()))?;
    for tok in word.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
        let g = match tok {
            "1" => Generator::Identity,
            "u" => Generator::U,
            "U" | "u^-1" => Generator::UInverse,
            _ => match tok.strip_prefix('E').and_then(|i| i.parse::<usize>().ok()) {
                Some(i) if (1..=a.n()).contains(&i) => Generator::E(i),
                _ => return Err(Failure::Usage(format!("bad generator {tok:?}"))),
            },
        };
        e = multiply(&e, &AlgebraElement::diagram(&spec, AffineDiagram::generator(a.n(), g)?)?)?;
    }
    print_json(&e.to_json());
    Ok(())
}

fn verify(a: &AlgArgs, claims_only: bool, criterion: Option<usize>, seed: u64, samples: Option<usize>, fmt: Format) -> Out {
    let mut lines = vec![];
    let mut ok = true;
    if claims_only || criterion.is_some() {
        let ids: Vec<usize> = match criterion {
            Some(i) => vec![i],
            None => (1..=11).collect(),
        };
        for id in ids {
            let c = claims::run(id, seed)?;
            ok &= c.passed;
            lines.push((c.line(), c.details));
        }
    } else {
        let n = a.n();
        let r = check_relations_report(n)?;
        let rel_ok = r.passed();
        lines.push((format!("relations n={n}: {} ({} identities)", pass(rel_ok), r.checked), r.failures.clone()));
        let (count, distinct, rt) = claims::triple_round_trip(n)?;
        let (w1, wn) = claims::winding_calibration(n)?;
        let tri_ok = rt && count == distinct && w1 == 1 && wn == n as i64;
        lines.push((format!("triples n={n}: {} ({count} triples, w(u) = {w1}, w(u^n) = {wn})", pass(tri_ok)), vec![]));
        let (bad, zero) = claims::positivity_closure(&[n.max(2)], 500, seed)?;
        lines.push((format!("positivity n={n}: {} (500 products, {bad} not positive, {zero} in I_0)", pass(bad == 0)), vec![]));
        let alg = algebra(a)?;
        let cd = CellDatum::build(alg.clone())?;
        // exhaustive up to n = 4, seeded sample beyond
        let samples = samples.or((n >= 5).then_some(500));
        let rep = verify_cell_axiom(&cd, samples.map(|k| (k, seed)))?;
        lines.push((
            format!("cell axioms {}: {} (dim {}, basis rank {})", alg.spec.key(), pass(rep.passed()), rep.dim, rep.basis_rank),
            rep.failures.iter().take(10).cloned().collect(),
        ));
        ok &= rel_ok && tri_ok && bad == 0 && rep.passed();
    }
    if fmt == Format::Json {
        let v: Vec<_> = lines.iter().map(|(l, d)| json!({"line": l, "details": d})).collect();
        print_json(&json!({"passed": ok, "checks": v}));
    } else {
        for (l, d) in &lines {
            println!("{l}");
            for x in d {
                println!("    {x}");
            }
        }
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Check("some checks failed".into()))
    }
}

fn cell_verify(a: &AlgArgs, samples: Option<usize>, seed: u64, fmt: Format) -> Out {
    let cd = CellDatum::build(algebra(a)?)?;
    let rep = verify_cell_axiom(&cd, samples.map(|k| (k, seed)))?;
    if fmt == Format::Json {
        print_json(&json!({"datum": cd.to_json(), "passed": rep.passed(), "basis_rank": rep.basis_rank, "failures": rep.failures}));
    } else {
        println!("{}", cd.alg.spec.key());
        for (li, l) in cd.layers.iter().enumerate() {
            println!("weight {}: M size {}", l.weight, cd.m_size(li));
        }
        println!("cell axioms: {} (dim {}, basis rank {})", pass(rep.passed()), rep.dim, rep.basis_rank);
        for x in rep.failures.iter().take(10) {
            println!("    {x}");
        }
    }
    if rep.passed() {
        Ok(())
    } else {
        Err(Failure::Check("cell axioms fail".into()))
    }
}

fn pass(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

fn gram(a: &AlgArgs, weight: Option<&str>, fmt: Format) -> Out {
    let cd = CellDatum::build_lenient(algebra(a)?)?;
    let f = cd.field().clone();
    let mut rows = vec![];
    for (li, l) in cd.layers.iter().enumerate() {
        if weight.is_some_and(|w| w != l.weight.to_string()) || l.opaque {
            continue;
        }
        let g = gram_matrix(&cd, li)?;
        let root = l.root.as_ref().map(|r| f.fmt(r)).unwrap_or_default();
        rows.push(vec![l.weight.to_string(), root, g.matrix.rows.to_string(), g.rank.to_string(), g.radical_dim.to_string(), f.fmt(&g.det)]);
    }
    if rows.is_empty() {
        return Err(Error::WeightNotFound(weight.unwrap_or("any split layer").to_string()).into());
    }
    table(&["weight", "root", "dim", "rank", "radical", "det"], rows, fmt)
}

fn table(header: &[&str], rows: Vec<Vec<String>>, fmt: Format) -> Out {
    match fmt {
        Format::Json => {
            let v: Vec<serde_json::Map<String, serde_json::Value>> =
                rows.iter().map(|r| header.iter().zip(r).map(|(h, x)| (h.to_string(), json!(x))).collect()).collect();
            print_json(&json!(v));
            Ok(())
        }
        _ => csv_out(header, rows),
    }
}

fn simples(a: &AlgArgs, fmt: Format) -> Out {
    let cd = CellDatum::build_lenient(algebra(a)?)?;
    let f = cd.field().clone();
    let rows = classify_simples(&cd)?
        .into_iter()
        .map(|s| vec![s.weight.to_string(), s.root.map(|r| f.fmt(&r)).unwrap_or_default(), s.dim.to_string()])
        .collect();
    table(&["weight", "root", "dim"], rows, fmt)
}

fn ext(a: &AlgArgs, fmt: Format) -> Out {
    let cd = CellDatum::build_lenient(algebra(a)?)?;
    let rows = ext_table(&cd)?;
    let mut ok = true;
    let field = cd.field().label().to_string();
    let out = rows
        .iter()
        .map(|r| {
            let agreement = match r.standard {
                None => "cocycle-only",
                Some(_) if r.agree() && r.witness_ok => "yes",
                Some(_) => "no",
            };
            ok &= r.agree() && r.witness_ok;
            vec![family_name(a), a.n().to_string(), field.clone(), q_label(a), r.lambda.clone(), r.mu.clone(), r.cocycle.to_string(), agreement.to_string()]
        })
        .collect();
    table(&["family", "n", "field", "q", "lambda", "mu", "dim_ext", "method_agreement"], out, fmt)?;
    if ok {
        Ok(())
    } else {
        Err(Failure::Check("the two Ext methods disagree".into()))
    }
}

fn blocks(path: &Path, n: usize, fmt: Format) -> Out {
    let m = Module::from_json(&read_json(path)?)?;
    let bad = m.check_relations(n);
    if !bad.is_empty() {
        return Err(Failure::Check(format!("not a D_{n}-module: {bad:?}")));
    }
    let f = m.field.clone();
    let bs = block_decompose(&m, n)?;
    let rows: Vec<Vec<String>> = bs.iter().map(|b| vec![f.fmt(&b.eigenvalue), b.basis.len().to_string(), b.nilpotency.to_string()]).collect();
    if fmt == Format::Text {
        for r in &rows {
            println!("eigenvalue {}: dim {}, nilpotency {}", r[0], r[1], r[2]);
        }
        return Ok(());
    }
    table(&["eigenvalue", "dim", "nilpotency"], rows, fmt)
}

fn module_cmd(kind: &ModuleKind) -> Out {
    let m = match kind {
        ModuleKind::Standard { alg, weight } => {
            let cd = CellDatum::build_lenient(algebra(alg)?)?;
            let li = cd
                .layers
                .iter()
                .position(|l| l.weight.to_string() == *weight)
                .ok_or_else(|| Failure::from(Error::WeightNotFound(weight.clone())))?;
            standard_module_at(&cd, li, 0)?.module
        }
        ModuleKind::Uniserial { n, t, alpha, k, field, v } => {
            let f = Field::parse(field, v.as_deref())?;
            let a = parse_scalar(&f, alpha)?;
            if *k == 2 {
                self_extension_module(&f, *n, *t, &a, 0)?.module
            } else {
                uniserial_module(&f, *n, *t, &a, 0, *k)?.module
            }
        }
    };
    print_json(&m.to_json());
    Ok(())
}

fn run(cli: Cli) -> Out {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global().map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let fmt = cli.format;
    let alg = match &cli.cmd {
        Cmd::Verify { claims, criterion, .. } if *claims || criterion.is_some() => None,
        Cmd::Enumerate { alg, .. } | Cmd::Element { alg, .. } | Cmd::Multiply { alg, .. } | Cmd::Verify { alg, .. } => Some(alg),
        Cmd::CellVerify { alg, .. } | Cmd::Gram { alg, .. } | Cmd::Simples { alg } | Cmd::ExtTable { alg } => Some(alg),
        Cmd::Module { kind: ModuleKind::Standard { alg, .. } } => Some(alg),
        Cmd::Blocks { .. } | Cmd::Module { .. } => None,
    };
    if alg.is_some_and(|a| a.n.is_none_or(|n| n == 0)) {
        return Err(Failure::Usage("--n is required (n >= 1)".into()));
    }
    match &cli.cmd {
        Cmd::Enumerate { alg, t } => enumerate(alg, *t, fmt.unwrap_or(Format::Text)),
        Cmd::Element { alg, word } => element(alg, word),
        Cmd::Multiply { alg, a, b } => multiply_cmd(alg, a, b),
        Cmd::Verify { alg, claims, criterion, seed, samples } => verify(alg, *claims, *criterion, *seed, *samples, fmt.unwrap_or(Format::Text)),
        Cmd::CellVerify { alg, samples, seed } => cell_verify(alg, *samples, *seed, fmt.unwrap_or(Format::Text)),
        Cmd::Gram { alg, weight } => gram(alg, weight.as_deref(), fmt.unwrap_or(Format::Csv)),
        Cmd::Simples { alg } => simples(alg, fmt.unwrap_or(Format::Csv)),
        Cmd::ExtTable { alg } => ext(alg, fmt.unwrap_or(Format::Csv)),
        Cmd::Blocks { module, n } => blocks(module, *n, fmt.unwrap_or(Format::Text)),
        Cmd::Module { kind } => module_cmd(kind),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(m)) => {
            let _ = std::io::stdout().flush();
            eprintln!("check failed: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
