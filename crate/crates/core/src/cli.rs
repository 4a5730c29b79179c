//! Command-line front end. Exit codes: 0 success, 1 verification failure,
//! 2 input error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::braiding::{BraidingMatrix, RootDatum};
use crate::closedsets::{compatible_by_decompositions, graded_lie_check, BitSet, SumGround, DEFAULT_CAP};
use crate::envalg::{z1234_fixture, PbwAlgebra};
use crate::error::{Error, Result};
use crate::hilbert::{default_max_degree, pbw_count_oracle, prenichols_series};
use crate::lattice::DegreeVector;
use crate::prenichols::{build_ground, full_poset_with_cap};
use crate::rootsys::RootSystem;

/// Largest ground for the exhaustive subset checks of `verify duality`.
const MAX_SUBSET_GROUND: usize = 20;

#[derive(Parser, Debug)]
#[command(name = "prenichols", version, about = "Posets of pre-Nichols algebras of diagonal type")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Largest ground set accepted by closed-set enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the positive roots of a Cartan type.
    Roots {
        #[arg(long = "type")]
        cartan_type: String,
    },
    /// Show the root datum of a braiding.
    Datum(DatumArgs),
    /// Enumerate subsets of Ô₊ closed by sums.
    ClosedSets {
        #[arg(long)]
        datum: PathBuf,
        #[arg(long, conflicts_with = "list")]
        count: bool,
        #[arg(long)]
        list: bool,
    },
    /// The poset of pre-Nichols algebras, as text or DOT.
    Poset {
        #[arg(long)]
        datum: PathBuf,
        /// Write a Graphviz file instead of the text listing.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        max_degree: Option<i64>,
    },
    /// Hilbert series of 𝓑(q, B).
    Hilbert {
        #[arg(long)]
        datum: PathBuf,
        /// Comma-separated degrees of Ô₊, e.g. "1^3 2^3,2^6"; "all" for Ô₊.
        #[arg(long, default_value = "")]
        set: String,
        #[arg(long)]
        max_degree: Option<i64>,
        #[arg(long, value_enum, default_value_t = SeriesFormat::Text)]
        format: SeriesFormat,
    },
    /// Split a datum into connected components and count closed sets per piece.
    Decompose {
        #[arg(long)]
        datum: PathBuf,
    },
    /// Numerical checks of the structural results; exit 1 on a counterexample
    #[command(subcommand)]
    Verify(Verify),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct DatumSource {
    /// Braiding or root-datum JSON file.
    #[arg(long)]
    datum: Option<PathBuf>,
    /// Braiding JSON file, optionally with `--roots-file`.
    #[arg(long)]
    braiding_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DatumArgs {
    #[command(flatten)]
    source: DatumSource,
    /// JSON list of positive roots, e.g. [[1,0],[0,1],[1,1]].
    #[arg(long, requires = "braiding_file")]
    roots_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = TextJson::Text)]
    format: TextJson,
}

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// Every decomposition of a root into 3..=max-parts roots has two parts summing to a root.
    LemmaSums {
        #[arg(long = "type")]
        cartan_type: String,
        #[arg(long, default_value_t = 6)]
        max_parts: usize,
    },
    /// Compatible ⇔ complement closed, and ⇔ the decomposition criterion, on all subsets.
    Duality {
        #[arg(long = "type", conflicts_with = "datum", required_unless_present = "datum")]
        cartan_type: Option<String>,
        #[arg(long)]
        datum: Option<PathBuf>,
    },
    /// Closed by sums ⇔ spans a Lie subalgebra, on all subsets of Δ₊.
    LieBijection {
        #[arg(long = "type")]
        cartan_type: String,
    },
    /// Primitive elements of the graded dual of U(𝔫₊) number exactly the rank.
    Primitives {
        #[arg(long = "type")]
        cartan_type: String,
        #[arg(long)]
        max_degree: Option<i64>,
    },
    /// I(B) is a Hopf ideal for a closed B (all closed B when --set is omitted).
    HopfIdeal {
        #[arg(long = "type")]
        cartan_type: String,
        /// Comma-separated roots, e.g. "1,12".
        #[arg(long)]
        set: Option<String>,
        #[arg(long)]
        max_degree: Option<i64>,
    },
    /// Reduced coproduct of z_1234 in Z(B) for sl(5).
    Z1234 {
        #[arg(long, default_value_t = 4)]
        max_degree: i64,
    },
    /// PBW monomial count equals the product formula for every closed B.
    SeriesOracle {
        #[arg(long)]
        datum: PathBuf,
        #[arg(long)]
        max_degree: Option<i64>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesFormat {
    Text,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TextJson {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    fn label(self) -> &'static str {
        match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
        }
    }
}

/// Parses arguments, runs the command on a sized worker pool, and returns
/// the process exit code.
pub fn main_with_args(args: impl IntoIterator<Item = std::ffi::OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = execute(cli, &mut out);
    let _ = out.flush();
    if let Err(e) = &result {
        eprintln!("error: {e}");
    }
    exit_code(&result)
}

fn exit_code(result: &Result<Outcome>) -> i32 {
    match result {
        Ok(Outcome::Pass) => 0,
        Ok(Outcome::Fail) => 1,
        Err(_) => 2,
    }
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<Outcome> {
    if cli.cap > DEFAULT_CAP {
        return Err(Error::Invalid(format!("--cap {} exceeds {DEFAULT_CAP}", cli.cap)));
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(Error::Invalid("--workers must be at least 1".into()));
        }
        pool = pool.num_threads(w);
    }
    let pool = pool
        .build()
        .map_err(|e| Error::Internal(format!("worker pool: {e}")))?;
    let cap = cli.cap;
    let mut buf: Vec<u8> = Vec::new();
    let result = pool.install(|| dispatch(&cli.command, cap, &mut buf));
    out.write_all(&buf).map_err(io)?;
    result
}

fn io(e: std::io::Error) -> Error {
    Error::Internal(format!("writing output: {e}"))
}

macro_rules! emit {
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).map_err(io)?
    };
}

fn dispatch(cmd: &Command, cap: usize, out: &mut dyn Write) -> Result<Outcome> {
    match cmd {
        Command::Roots { cartan_type } => {
            let rs = RootSystem::from_type(cartan_type)?;
            for r in rs.roots() {
                emit!(out, "{}", r.format_ascii()?);
            }
            Ok(Outcome::Pass)
        }
        Command::Datum(args) => {
            let datum = load_datum_args(args)?;
            match args.format {
                TextJson::Text => write_datum(&datum, out)?,
                TextJson::Json => {
                    let text = serde_json::to_string_pretty(&datum_json(&datum))
                        .map_err(|e| Error::Internal(e.to_string()))?;
                    emit!(out, "{text}");
                }
            }
            Ok(Outcome::Pass)
        }
        Command::ClosedSets { datum, count: _, list } => {
            let d = RootDatum::load(datum)?;
            let g = build_ground(&d)?;
            let sets = g.enumerate_closed(cap)?;
            if *list {
                for s in &sets {
                    emit!(out, "{}\t{}", s.len(), format_set(g.elements(), *s)?);
                }
            } else {
                emit!(out, "{}", sets.len());
            }
            Ok(Outcome::Pass)
        }
        Command::Poset { datum, dot, max_degree } => {
            let d = RootDatum::load(datum)?;
            let degree = resolve_degree(&d, *max_degree)?;
            let poset = full_poset_with_cap(&d, cap)?;
            for w in &poset.warnings {
                eprintln!("warning: {w}");
            }
            match dot {
                Some(path) => {
                    std::fs::write(path, poset.to_dot()).map_err(|source| Error::Io {
                        path: path.clone(),
                        source,
                    })?;
                    emit!(out, "{} nodes, {} edges written to {}", poset.len(), poset.edges.len(), path.display());
                }
                None => {
                    emit!(out, "{} pre-Nichols algebras of finite GKdim", poset.len());
                    let profile: Vec<String> =
                        poset.gkdim_profile().iter().map(|(g, c)| format!("{g}:{c}")).collect();
                    emit!(out, "GKdim profile: {}", profile.join(" "));
                    for i in 0..poset.len() {
                        emit!(out, "[{i}] {}", poset.describe(i, degree)?);
                    }
                    for &(a, b) in &poset.edges {
                        emit!(out, "[{a}] ->> [{b}]");
                    }
                }
            }
            Ok(Outcome::Pass)
        }
        Command::Hilbert { datum, set, max_degree, format } => {
            let d = RootDatum::load(datum)?;
            let degree = resolve_degree(&d, *max_degree)?;
            let b = parse_subset(set, &d.hoc_degrees(), d.rank())?;
            let s = prenichols_series(&d, b, degree)?;
            match format {
                SeriesFormat::Text => emit!(out, "{s}"),
                SeriesFormat::Csv => write!(out, "{}", s.to_csv()).map_err(io)?,
            }
            Ok(Outcome::Pass)
        }
        Command::Decompose { datum } => {
            let d = RootDatum::load(datum)?;
            write_decomposition(&d, cap, out)?;
            Ok(Outcome::Pass)
        }
        Command::Verify(v) => verify(v, cap, out),
    }
}

fn verify(v: &Verify, cap: usize, out: &mut dyn Write) -> Result<Outcome> {
    match v {
        Verify::LemmaSums { cartan_type, max_parts } => {
            if *max_parts < 3 {
                return Err(Error::Invalid("--max-parts must be at least 3".into()));
            }
            let report = RootSystem::from_type(cartan_type)?.verify_sum_lemma(*max_parts);
            emit!(out, "{report}");
            Ok(Outcome::from_bool(report.passed()))
        }
        Verify::Duality { cartan_type, datum } => {
            let ground = match (cartan_type, datum) {
                (Some(t), _) => SumGround::from_roots(&RootSystem::from_type(t)?)?,
                (None, Some(p)) => build_ground(&RootDatum::load(p)?)?,
                (None, None) => return Err(Error::Invalid("need --type or --datum".into())),
            };
            if ground.len() > MAX_SUBSET_GROUND {
                return Err(Error::CapExceeded {
                    size: ground.len(),
                    cap: MAX_SUBSET_GROUND,
                });
            }
            let decomps = ground.decompositions();
            let n = ground.len();
            let mut witnesses = Vec::new();
            for bits in 0..1u64 << n {
                let s = BitSet::from_bits(bits);
                let c = ground.is_compatible(s);
                if c != ground.is_closed_by_sums(s.complement(n)) || c != compatible_by_decompositions(&decomps, s) {
                    witnesses.push(s);
                }
            }
            let outcome = Outcome::from_bool(witnesses.is_empty());
            emit!(out, "{}: {} subsets, {} mismatches", outcome.label(), 1u64 << n, witnesses.len());
            for s in witnesses.iter().take(10) {
                emit!(out, "  mismatch at {}", format_set(ground.elements(), *s)?);
            }
            Ok(outcome)
        }
        Verify::LieBijection { cartan_type } => {
            let rs = RootSystem::from_type(cartan_type)?;
            let ground = SumGround::from_roots(&rs)?;
            if ground.len() > MAX_SUBSET_GROUND {
                return Err(Error::CapExceeded {
                    size: ground.len(),
                    cap: MAX_SUBSET_GROUND,
                });
            }
            let mut witnesses = Vec::new();
            for bits in 0..1u64 << ground.len() {
                let s = BitSet::from_bits(bits);
                if graded_lie_check(&rs, s) != ground.is_closed_by_sums(s) {
                    witnesses.push(s);
                }
            }
            let outcome = Outcome::from_bool(witnesses.is_empty());
            emit!(out, "{}: {} subsets, {} mismatches", outcome.label(), 1u64 << ground.len(), witnesses.len());
            for s in witnesses.iter().take(10) {
                emit!(out, "  mismatch at {}", format_set(ground.elements(), *s)?);
            }
            Ok(outcome)
        }
        Verify::Primitives { cartan_type, max_degree } => {
            let rs = RootSystem::from_type(cartan_type)?;
            let degree = max_degree.unwrap_or(2 * rs.highest_root().height());
            let rank = rs.rank();
            let alg = PbwAlgebra::new(rs, degree)?;
            let degrees = alg.primitive_degrees();
            for (d, n) in &degrees {
                emit!(out, "  {}: {n}", d.format_ascii()?);
            }
            let total: usize = degrees.iter().map(|(_, n)| n).sum();
            let outcome = Outcome::from_bool(total == rank);
            emit!(out, "{}: primitive total {total}, rank {rank}, D = {degree}", outcome.label());
            Ok(outcome)
        }
        Verify::HopfIdeal { cartan_type, set, max_degree } => {
            let rs = RootSystem::from_type(cartan_type)?;
            let degree = max_degree.unwrap_or(2 * rs.highest_root().height());
            let ground = SumGround::from_roots(&rs)?;
            let subsets = match set {
                Some(s) => vec![parse_subset(s, rs.roots(), rs.rank())?],
                None => ground.enumerate_closed(cap)?,
            };
            let alg = PbwAlgebra::new(rs, degree)?;
            let mut ok = true;
            for b in subsets {
                let report = alg.verify_hopf_ideal(b)?;
                let shown = format_set(ground.elements(), b)?;
                emit!(out, "{}: B = {shown}, {} monomials of I(B)", if report.passed() { "PASS" } else { "FAIL" }, report.monomials_checked);
                for (m, t) in report.violations.iter().take(5) {
                    emit!(
                        out,
                        "  witness: ({})* has term {} ({})* (x) ({})*",
                        alg.format_monomial(m),
                        t.coefficient,
                        alg.format_monomial(&t.left),
                        alg.format_monomial(&t.right)
                    );
                }
                ok &= report.passed();
            }
            Ok(Outcome::from_bool(ok))
        }
        Verify::Z1234 { max_degree } => {
            let report = z1234_fixture(*max_degree)?;
            emit!(out, "{report}");
            Ok(Outcome::from_bool(report.passed()))
        }
        Verify::SeriesOracle { datum, max_degree } => {
            let d = RootDatum::load(datum)?;
            let degree = resolve_degree(&d, *max_degree)?;
            let ground = build_ground(&d)?;
            let mut ok = true;
            for b in ground.enumerate_closed(cap)? {
                let formula = prenichols_series(&d, b, degree)?;
                let counted = pbw_count_oracle(&d, b, degree)?;
                let diffs = formula.differences(&counted)?;
                if !diffs.is_empty() {
                    ok = false;
                    let (v, a, c) = &diffs[0];
                    emit!(
                        out,
                        "FAIL: B = {}: at {} product gives {a}, count gives {c}",
                        format_set(ground.elements(), b)?,
                        v.format_ascii()?
                    );
                }
            }
            let outcome = Outcome::from_bool(ok);
            emit!(out, "{}: series oracle at D = {degree}", outcome.label());
            Ok(outcome)
        }
    }
}

fn resolve_degree(d: &RootDatum, given: Option<i64>) -> Result<i64> {
    match given {
        Some(v) if v < 1 => Err(Error::Invalid(format!("--max-degree {v} must be at least 1"))),
        Some(v) => Ok(v),
        None => default_max_degree(d),
    }
}

fn load_datum_args(args: &DatumArgs) -> Result<RootDatum> {
    match (&args.source.datum, &args.source.braiding_file) {
        (Some(p), _) => RootDatum::load(p),
        (None, Some(b)) => {
            let braiding = read_json(b)?;
            let braiding = BraidingMatrix::from_file_form(braiding)?;
            match &args.roots_file {
                Some(r) => {
                    let raw: Vec<Vec<i64>> = read_json(r)?;
                    let roots: Vec<DegreeVector> = raw.into_iter().map(DegreeVector::new).collect();
                    RootDatum::build(&braiding, Some(&roots))
                }
                None => RootDatum::build(&braiding, None),
            }
        }
        (None, None) => Err(Error::Invalid("need --datum or --braiding-file".into())),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// Comma-separated compact degrees, looked up in `elements`.
fn parse_subset(input: &str, elements: &[DegreeVector], rank: usize) -> Result<BitSet> {
    if input.trim() == "all" {
        return Ok(BitSet::full(elements.len()));
    }
    let mut b = BitSet::EMPTY;
    for part in input.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let v = DegreeVector::parse_compact(part, rank)?;
        let i = elements
            .iter()
            .position(|e| *e == v)
            .ok_or_else(|| Error::parse("subset element", part, "not in the ground set"))?;
        b = b.with(i);
    }
    Ok(b)
}

fn format_set(elements: &[DegreeVector], s: BitSet) -> Result<String> {
    let items = s
        .iter()
        .map(|i| elements[i].format_ascii())
        .collect::<Result<Vec<_>>>()?;
    Ok(format!("{{{}}}", items.join(", ")))
}

fn write_datum(d: &RootDatum, out: &mut dyn Write) -> Result<()> {
    emit!(out, "rank {}", d.rank());
    emit!(out, "diagram: {}", d.braiding().diagram());
    for (ci, c) in d.components().iter().enumerate() {
        let verts: Vec<String> = c.vertices.iter().map(|v| (v + 1).to_string()).collect();
        let mut line = format!("component {}: vertices {{{}}}, family {}", ci + 1, verts.join(","), c.family);
        if let Some(t) = &c.cartan_type {
            line.push_str(&format!(", Cartan type {t}"));
        }
        if let Some(p) = &c.parameter {
            line.push_str(&format!(", parameter {p}"));
        }
        if c.supplied_roots {
            line.push_str(", roots supplied");
        }
        emit!(out, "{line}");
    }
    emit!(out, "positive roots ({}):", d.roots().len());
    for r in d.roots() {
        emit!(out, "  {}  N={}{}", r.degree.format_ascii()?, r.order, if r.cartan { "  cartan" } else { "" });
    }
    emit!(out, "hOc ({}):", d.hoc().len());
    for h in d.hoc() {
        emit!(out, "  {}{}", h.degree.format_ascii()?, if h.bold { "  bold" } else { "" });
    }
    emit!(out, "dim of Nichols algebra: {}", d.nichols_dimension());
    emit!(out, "GKdim of eminent pre-Nichols algebra: {}", d.hoc().len());
    Ok(())
}

#[derive(Serialize)]
struct DatumJson<'a> {
    datum: crate::braiding::DatumFile,
    components: &'a [crate::braiding::ComponentInfo],
    hoc: &'a [crate::braiding::HocEntry],
    nichols_dimension: String,
}

fn datum_json(d: &RootDatum) -> DatumJson<'_> {
    DatumJson {
        datum: d.to_datum_file(),
        components: d.components(),
        hoc: d.hoc(),
        nichols_dimension: d.nichols_dimension().to_string(),
    }
}

fn write_decomposition(d: &RootDatum, cap: usize, out: &mut dyn Write) -> Result<()> {
    let elements = d.hoc_degrees();
    let owners = d.hoc_components();
    let mut product = num_bigint::BigUint::from(1u32);
    for (ci, c) in d.components().iter().enumerate() {
        let part: Vec<DegreeVector> = elements
            .iter()
            .zip(&owners)
            .filter(|(_, &o)| o == ci)
            .map(|(e, _)| e.clone())
            .collect();
        let count = SumGround::new(part.clone())?.enumerate_closed(cap)?.len();
        product *= count as u64;
        let verts: Vec<String> = c.vertices.iter().map(|v| (v + 1).to_string()).collect();
        emit!(
            out,
            "component {}: vertices {{{}}}, family {}, |hOc| = {}, closed sets {count}",
            ci + 1,
            verts.join(","),
            c.family,
            part.len()
        );
    }
    let total = build_ground(d)?.enumerate_closed(cap)?.len();
    emit!(out, "product {product}, whole datum {total}");
    if product != num_bigint::BigUint::from(total) {
        return Err(Error::Internal("closed-set count is not the product of the component counts".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Ok(Outcome::from_bool(true))), 0);
        assert_eq!(exit_code(&Ok(Outcome::from_bool(false))), 1);
        assert_eq!(Outcome::from_bool(false).label(), "FAIL");
        let err = Cli::try_parse_from(["prenichols", "--cap", "40", "roots", "--type", "A2"])
            .map_err(|_| ())
            .and_then(|c| execute(c, &mut Vec::new()).map_err(|_| ()));
        assert!(err.is_err());
    }
}
