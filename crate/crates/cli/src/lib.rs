//! Command implementations behind the `lcontract` binary.
//!
//! Every command writes plain text to the given writer and returns a
//! [`Failure`] carrying the exit status on error.

use std::fmt::Display;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use lcontract_core::complement::{min_complement, search_complement, ComplementFailure, Curve, INDICES};
use lcontract_core::fiber::degeneration_sequence;
use lcontract_core::logdisc::pair_pullback;
use lcontract_core::{
    classify, decode_canonical, enumerate_fibers, expected_complement_index, verify_complement, verify_shape,
    BoundaryConfig, ClassTag, ComplementCertificate, CyclicQuot, DualGraph, EnumeratedFiber, Error, FiberGraph, GraphDocument,
    PairStatus, PullbackAssignment, Role,
};
use num_bigint::BigInt;
use rayon::prelude::*;

pub const EXIT_DOMAIN: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_VERIFICATION: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "lcontract", version, about = "Exact calculator for fiber graphs of surface contractions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Hirzebruch-Jung chain of 1/n(1,q) and of its dual.
    Hj { quotient: String },
    /// Class T tests for 1/n(1,q).
    ClassT { quotient: String },
    /// Class, shape data, complement and template checks of a fiber graph.
    Classify { file: PathBuf },
    /// All log terminal fiber graphs up to a number of blow-ups.
    Enumerate {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        max_blowups: u32,
        /// Keep one class only (A*, D*, A**, D**, E6*).
        #[arg(long = "class")]
        class: Option<ClassTag>,
        #[arg(long, value_enum, default_value_t = Emit::Lines)]
        emit: Emit,
        /// Worker threads; defaults to all cores.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        jobs: Option<u32>,
    },
    /// Verify the boundary in the file, or search for a complement when the
    /// file has none.
    Complement {
        file: PathBuf,
        #[arg(long)]
        index: Option<u32>,
        /// Give the bullet coefficient 1.
        #[arg(long)]
        reduced: bool,
    },
    /// A sequence of contractions down to a 0-curve.
    Blowdown { file: PathBuf },
    /// Coefficients and discrepancies of the exceptional curves.
    Discrepancy { file: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Lines,
    Summary,
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn new(code: u8, message: impl Display) -> Self {
        Failure { code, message: message.to_string() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::new(EXIT_DOMAIN, e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::new(EXIT_DOMAIN, e)
    }
}

pub type Outcome = Result<(), Failure>;

pub fn run(cli: Cli, out: &mut dyn Write) -> Outcome {
    match cli.command {
        Command::Hj { quotient } => cmd_hj(&quotient, out),
        Command::ClassT { quotient } => cmd_class_t(&quotient, out),
        Command::Classify { file } => cmd_classify(&load(&file)?, out),
        Command::Enumerate { max_blowups, class, emit, jobs } => {
            cmd_enumerate(max_blowups as usize, class, emit, jobs.map(|k| k as usize), out)
        }
        Command::Complement { file, index, reduced } => cmd_complement(&load(&file)?, index, reduced, out),
        Command::Blowdown { file } => cmd_blowdown(&load(&file)?, out),
        Command::Discrepancy { file } => cmd_discrepancy(&load(&file)?, out),
    }
}

/// Parses `n/q`.
pub fn parse_quotient(s: &str) -> Result<CyclicQuot, Failure> {
    let usage = || Failure::new(EXIT_USAGE, format!("expected n/q, got {s:?}"));
    let (n, q) = s.split_once('/').ok_or_else(usage)?;
    let n: BigInt = n.trim().parse().map_err(|_| usage())?;
    let q: BigInt = q.trim().parse().map_err(|_| usage())?;
    Ok(CyclicQuot::new(n, q)?)
}

fn load(path: &Path) -> Result<GraphDocument, Failure> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::new(EXIT_DOMAIN, format!("{}: {e}", path.display())))?
    };
    parse_input(&text)
}

/// A graph document, or a single canonical encoding as printed by
/// `enumerate`.
pub fn parse_input(text: &str) -> Result<GraphDocument, Failure> {
    let first = text.lines().map(|l| l.split('#').next().unwrap().trim()).find(|l| !l.is_empty());
    match first {
        Some(line) if !["v ", "e ", "c "].iter().any(|p| line.starts_with(p)) => {
            let code = line.split_whitespace().last().unwrap();
            Ok(GraphDocument::from_graph(decode_canonical(code.as_bytes())?))
        }
        _ => Ok(GraphDocument::parse(text)?),
    }
}

fn fiber_of(doc: &GraphDocument) -> Result<(FiberGraph, BoundaryConfig), Failure> {
    let (compact, config) = BoundaryConfig::from_graph(&doc.graph)?;
    Ok((FiberGraph::new(compact)?, config))
}

fn names(doc: &GraphDocument, ids: &[lcontract_core::VertexId]) -> String {
    if ids.is_empty() {
        return "-".into();
    }
    ids.iter().map(|&id| doc.name(id)).collect::<Vec<_>>().join(" ")
}

fn status_name(s: PairStatus) -> &'static str {
    match s {
        PairStatus::Plt => "plt",
        PairStatus::LcNotPlt => "lc-not-plt",
        PairStatus::NotLc => "not-lc",
    }
}

pub fn cmd_hj(quotient: &str, out: &mut dyn Write) -> Outcome {
    let x = parse_quotient(quotient)?;
    writeln!(out, "{}  dual {}", x.hj_expand(), x.dual().hj_expand())?;
    Ok(())
}

pub fn cmd_class_t(quotient: &str, out: &mut dyn Write) -> Outcome {
    let x = parse_quotient(quotient)?;
    let chain = x.hj_expand();
    writeln!(out, "{x} {chain}")?;
    if chain.is_duval() {
        writeln!(out, "du val: yes")?;
    }
    let closed = x.class_t();
    match &closed {
        Some(w) => writeln!(out, "closed form: T with (m,s,m')=({},{},{})", w.m, w.s, w.m_prime)?,
        None => writeln!(out, "closed form: not T")?,
    }
    let recursive = chain.is_class_t_recursive();
    writeln!(out, "recursion: {}", if recursive { "T" } else { "not T" })?;
    let necessary = x.class_t_necessary();
    writeln!(out, "divisibility: {}", if necessary { "holds" } else { "fails" })?;
    if closed.is_some() {
        let symmetric = chain.is_symmetric_class_t()?;
        writeln!(out, "symmetric: {}", if symmetric { "yes" } else { "no" })?;
    }
    if closed.is_some() != recursive || (closed.is_some() && !necessary) {
        return Err(Failure::new(EXIT_VERIFICATION, "class T tests disagree"));
    }
    Ok(())
}

fn write_certificate(doc: &GraphDocument, g: &FiberGraph, cert: &ComplementCertificate, out: &mut dyn Write) -> io::Result<()> {
    let drawn = cert.boundary.to_graph(g.graph(), Some(&cert.exceptional_coeffs));
    for line in doc.with_graph(drawn).to_string().lines() {
        writeln!(out, "  {line}")?;
    }
    Ok(())
}

fn pair_name(reduced: bool) -> &'static str {
    if reduced {
        "K+C"
    } else {
        "K"
    }
}

pub fn cmd_classify(doc: &GraphDocument, out: &mut dyn Write) -> Outcome {
    let (g, _) = fiber_of(doc)?;
    let class = match classify(&g) {
        Ok(c) => c,
        Err(e @ Error::Unclassifiable(_)) => return Err(Failure::new(EXIT_VERIFICATION, e)),
        Err(e) => return Err(e.into()),
    };
    writeln!(out, "class {}", class.tag)?;
    writeln!(out, "status {}", status_name(class.status))?;
    match &class.params {
        Some(p) => writeln!(out, "params {p}")?,
        None => writeln!(out, "params none")?,
    }
    writeln!(out, "P {}", names(doc, &class.p_component))?;
    writeln!(out, "theta {}", names(doc, &class.theta_component))?;
    let mut failed = Vec::new();
    let (reduced, n) = expected_complement_index(&class);
    match min_complement(&g, reduced)? {
        Some(cert) => {
            writeln!(out, "complement {} of {}", cert.n, pair_name(reduced))?;
            write_certificate(doc, &g, &cert, out)?;
            if cert.n != n {
                failed.push(format!("expected index {n}, found {}", cert.n));
            }
        }
        None => {
            writeln!(out, "complement none of {}", pair_name(reduced))?;
            failed.push(format!("expected index {n}, found none"));
        }
    }
    for check in verify_shape(&g, &class) {
        let mark = if check.holds { "ok" } else { "FAIL" };
        writeln!(out, "check {mark} {}: {}", check.name, check.detail)?;
        if !check.holds {
            failed.push(check.name.to_string());
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::new(EXIT_VERIFICATION, format!("class {} violated: {}", class.tag, failed.join("; "))))
    }
}

type Records = (Vec<EnumeratedFiber>, Vec<Result<ClassTag, String>>);

fn classified_fibers(max_blowups: usize) -> Result<Records, Error> {
    let fibers = enumerate_fibers(max_blowups, true)?;
    let tags = fibers
        .par_iter()
        .map(|f| match classify(&f.fiber) {
            Ok(c) => Ok(c.tag),
            Err(e) => Err(e.to_string()),
        })
        .collect();
    Ok((fibers, tags))
}

pub fn cmd_enumerate(
    max_blowups: usize,
    class: Option<ClassTag>,
    emit: Emit,
    jobs: Option<usize>,
    out: &mut dyn Write,
) -> Outcome {
    let (fibers, tags) = match jobs {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Failure::new(EXIT_DOMAIN, e))?
            .install(|| classified_fibers(max_blowups))?,
        None => classified_fibers(max_blowups)?,
    };
    let mut counts = [0usize; 5];
    let mut unclassifiable = 0;
    for (f, tag) in fibers.iter().zip(&tags) {
        match tag {
            Ok(t) if class.is_none_or(|c| c == *t) => {
                counts[ClassTag::ALL.iter().position(|x| x == t).unwrap()] += 1;
                if emit == Emit::Lines {
                    writeln!(out, "{t} {}", f.encoding)?;
                }
            }
            Ok(_) => {}
            Err(e) => {
                unclassifiable += 1;
                if emit == Emit::Lines {
                    writeln!(out, "unclassifiable {} # {e}", f.encoding)?;
                }
            }
        }
    }
    if emit == Emit::Summary {
        for (t, k) in ClassTag::ALL.iter().zip(counts) {
            if class.is_none_or(|c| c == *t) {
                writeln!(out, "{t} {k}")?;
            }
        }
        writeln!(out, "unclassifiable {unclassifiable}")?;
        writeln!(out, "total {}", counts.iter().sum::<usize>() + unclassifiable)?;
    }
    if unclassifiable > 0 {
        return Err(Failure::new(EXIT_VERIFICATION, format!("{unclassifiable} unclassifiable fiber graphs")));
    }
    Ok(())
}

fn has_boundary(config: &BoundaryConfig) -> bool {
    !config.coefficients.is_empty() || !config.incompletes.is_empty()
}

fn curve_name(doc: &GraphDocument, c: &Curve) -> String {
    match c {
        Curve::Compact(v) => doc.name(*v),
        Curve::Incomplete(i) => format!("incomplete #{i}"),
    }
}

/// [`ComplementFailure`] with vertex names from the document.
fn describe_failure(doc: &GraphDocument, f: &ComplementFailure) -> String {
    match f {
        ComplementFailure::Crepancy { vertex, defect } => format!("(K+B).{} = {defect}, not 0", doc.name(*vertex)),
        ComplementFailure::Integrality { curve, coeff } => {
            format!("coefficient {coeff} of {} is not in (1/n)Z", curve_name(doc, curve))
        }
        ComplementFailure::NotLogCanonical { curve, coeff } => {
            format!("coefficient {coeff} of {} exceeds 1", curve_name(doc, curve))
        }
        other => other.to_string(),
    }
}

pub fn cmd_complement(doc: &GraphDocument, index: Option<u32>, reduced: bool, out: &mut dyn Write) -> Outcome {
    let (g, config) = fiber_of(doc)?;
    if let Some(n) = index {
        if !INDICES.contains(&n) {
            return Err(Failure::new(EXIT_USAGE, format!("index must be one of {INDICES:?}")));
        }
    }
    if has_boundary(&config) {
        let n = index.ok_or_else(|| Failure::new(EXIT_USAGE, "verifying a boundary needs --index"))?;
        return match verify_complement(&g, &config, n) {
            Ok(cert) => {
                writeln!(out, "verified {n}-complement")?;
                write_certificate(doc, &g, &cert, out)?;
                Ok(())
            }
            Err(f) => {
                let f = describe_failure(doc, &f);
                writeln!(out, "rejected: {f}")?;
                Err(Failure::new(EXIT_DOMAIN, format!("not a {n}-complement: {f}")))
            }
        };
    }
    let found = match index {
        Some(n) => search_complement(&g, reduced, n, 2 * n as usize)?,
        None => min_complement(&g, reduced)?,
    };
    match found {
        Some(cert) => {
            writeln!(out, "complement {} of {}", cert.n, pair_name(reduced))?;
            write_certificate(doc, &g, &cert, out)?;
            Ok(())
        }
        None => {
            let what = index.map_or("of index 1, 2, 3, 4 or 6".to_string(), |n| format!("of index {n}"));
            writeln!(out, "no complement {what} of {}", pair_name(reduced))?;
            Err(Failure::new(EXIT_DOMAIN, format!("no complement {what}")))
        }
    }
}

pub fn cmd_blowdown(doc: &GraphDocument, out: &mut dyn Write) -> Outcome {
    let compact: DualGraph = doc.graph.compact_part();
    let Some(seq) = degeneration_sequence(&compact) else {
        writeln!(out, "no contraction sequence reaches a 0-curve")?;
        return Err(Failure::new(EXIT_DOMAIN, "not a degenerate fiber"));
    };
    for id in &seq {
        writeln!(out, "contract {}", doc.name(*id))?;
    }
    let last = compact.vertices().find(|v| !seq.contains(&v.id)).map(|v| doc.name(v.id)).unwrap_or_default();
    writeln!(out, "0-curve {last} after {} contractions", seq.len())?;
    Ok(())
}

pub fn cmd_discrepancy(doc: &GraphDocument, out: &mut dyn Write) -> Outcome {
    let g = &doc.graph;
    let boundary = PullbackAssignment(
        g.vertices()
            .filter(|v| v.role != Role::Exceptional)
            .filter_map(|v| v.coeff.clone().map(|c| (v.id, c)))
            .collect(),
    );
    if let Some(v) = g.vertices().find(|v| v.role == Role::Exceptional && v.coeff.is_some()) {
        return Err(Failure::new(EXIT_DOMAIN, format!("coefficient given on exceptional curve {}", doc.name(v.id))));
    }
    let coeffs = pair_pullback(g, &boundary)?;
    for (id, c) in coeffs.iter() {
        writeln!(out, "{} {} coeff {c} discrepancy {}", doc.name(id), g.vertex(id).unwrap().self_int, -c)?;
    }
    writeln!(out, "status {}", status_name(PairStatus::of(&coeffs)))?;
    Ok(())
}
