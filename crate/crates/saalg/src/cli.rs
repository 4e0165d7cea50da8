//! Command-line front end. Every report is a JSON object carrying the tool
//! version and a digest of its input; `--format text` gives a readable
//! rendering in the `(x_i y_j, y_k) = v` notation instead.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::catalog::{catalog_over_field, entry};
use crate::classify::{
    enumerate_with_progress, fingerprint, is_isomorphic, orbit_oracle_dim4, CatalogIndex, CensusMode, Verdict,
};
use crate::engel::{check_group_laws, group_from_saa};
use crate::error::Error;
use crate::field::{AnyField, Field, FieldSpec, Gf};
use crate::saa_core::{Presentation, SAAlgebra};

#[derive(Parser, Debug)]
#[command(name = "saalg", version, about = "Symplectic alternating algebras: analysis, classification and groups")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Axioms, central series, center and fingerprint of one algebra.
    Analyze { file: PathBuf },
    /// Name a nilpotent algebra of dimension at most 10 over a finite field.
    Classify {
        file: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Decide whether two algebras are isomorphic.
    Iso {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// List the catalog algebras of one dimension over a finite field.
    Catalog {
        #[arg(long, value_parser = parse_field)]
        field: FieldSpec,
        #[arg(long)]
        dim: usize,
    },
    /// Classify every (or a sample of) nilpotent presentation of dimension 2n.
    Census(CensusArgs),
    /// Power-commutator presentation and law check of G(L), over GF(3).
    Group {
        file: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sp_4 orbits on alternating trilinear forms, by brute force.
    #[command(name = "oracle-dim4")]
    OracleDim4 {
        #[arg(long, value_parser = parse_field)]
        field: FieldSpec,
    },
}

#[derive(Args, Debug)]
pub struct CensusArgs {
    #[arg(long, value_parser = parse_field)]
    pub field: FieldSpec,
    #[arg(long)]
    pub n: usize,
    #[arg(long, conflicts_with_all = ["samples", "seed"], required_unless_present = "samples")]
    pub exhaustive: bool,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Suppress partial tallies on standard error.
    #[arg(long)]
    pub quiet: bool,
}

fn parse_field(s: &str) -> std::result::Result<FieldSpec, String> {
    FieldSpec::parse_flag(s).map_err(|e| e.to_string())
}

/// What a run produced: the exit code and the text for standard output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Domain(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// A finished report: JSON body plus its text rendering.
struct Report {
    json: Map<String, Value>,
    text: String,
}

fn digest(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn read(path: &Path) -> CliResult<(Vec<u8>, Presentation)> {
    let bytes = std::fs::read(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Error::Parse(format!("{} is not UTF-8", path.display())))?;
    Ok((bytes, Presentation::parse(&text)?))
}

macro_rules! with_field {
    ($spec:expr, |$f:ident| $body:expr) => {
        match AnyField::new($spec)? {
            AnyField::Finite($f) => $body,
            AnyField::Rational($f) => $body,
        }
    };
}

fn analyze<F: Field>(f: &F, p: &Presentation) -> CliResult<Report> {
    let l = SAAlgebra::from_presentation(f, p)?;
    let axioms = l.check_axioms();
    let s = l.central_series();
    let c = l.center_rank();
    let fp = if s.is_nilpotent() { Some(fingerprint(&l)?) } else { None };
    let json = json!({
        "field": f.spec().name(),
        "dim": l.dim(),
        "axioms": axioms,
        "lower_dims": s.lower_dims(),
        "upper_dims": s.upper_dims(),
        "nilpotent": s.is_nilpotent(),
        "class": s.class,
        "center_dim": c.center.dim(),
        "center_isotropic": c.isotropic,
        "rank": c.rank,
        "fingerprint": fp,
    });
    let mut text = String::new();
    writeln!(text, "{} algebra of dimension {}", f.spec().name(), l.dim()).unwrap();
    text.push_str(&l.to_presentation().to_text());
    writeln!(text, "axioms: {}", if axioms.all_pass() { "pass" } else { "FAIL" }).unwrap();
    writeln!(text, "lower central dims: {:?}", s.lower_dims()).unwrap();
    writeln!(text, "upper central dims: {:?}", s.upper_dims()).unwrap();
    match s.class {
        Some(k) => writeln!(text, "nilpotent of class {k}").unwrap(),
        None => writeln!(text, "not nilpotent").unwrap(),
    }
    writeln!(
        text,
        "center: dim {} ({}), rank {}",
        c.center.dim(),
        if c.isotropic { "isotropic" } else { "not isotropic" },
        c.rank
    )
    .unwrap();
    if let Some(fp) = &fp {
        writeln!(text, "branch: {}", fp.branch).unwrap();
        if let Some(d) = &fp.discriminant {
            writeln!(text, "discriminant: {d}").unwrap();
        }
    }
    Ok(Report { json: into_map(json), text })
}

fn classify_file(f: &Gf, p: &Presentation, budget: Option<u64>) -> CliResult<Report> {
    let l = SAAlgebra::from_presentation(f, p)?;
    let c = CatalogIndex::new(f, l.dim())?.with_budget(budget).classify(&l)?;
    let names = entry(&c.label)?.params.clone();
    let params: Map<String, Value> = names.iter().cloned().zip(c.params.iter().map(|v| json!(v))).collect();
    let json = json!({
        "label": c.label,
        "params": params,
        "key": c.key,
        "branch": c.branch,
        "nodes": c.nodes,
    });
    let text = format!("{}\n", c.key);
    Ok(Report { json: into_map(json), text })
}

fn iso_files<F: Field>(f: &F, pa: &Presentation, pb: &Presentation, budget: Option<u64>) -> CliResult<Report> {
    let a = SAAlgebra::from_presentation(f, pa)?;
    let b = SAAlgebra::from_presentation(f, pb)?;
    let rep = is_isomorphic(&a, &b, budget)?;
    let (verdict, witness) = match &rep.verdict {
        Verdict::Isomorphic(w) => {
            let m: Vec<Vec<String>> = w.matrix.iter().map(|r| r.iter().map(|e| f.format_elem(e)).collect()).collect();
            ("isomorphic", Some(m))
        }
        Verdict::NotIsomorphic => ("none (exhaustive)", None),
        Verdict::Unknown => ("unknown (budget)", None),
    };
    let json = json!({
        "verdict": verdict,
        "witness": witness,
        "nodes": rep.nodes,
        "leaves": rep.leaves,
        "by_invariants": rep.by_invariants,
    });
    let mut text = format!("{verdict}\n");
    if let Some(m) = &witness {
        text.push_str("witness (column m is the image of basis vector m):\n");
        for row in m {
            writeln!(text, "  {}", row.join(" ")).unwrap();
        }
    }
    Ok(Report { json: into_map(json), text })
}

fn catalog_list(spec: FieldSpec, dim: usize) -> CliResult<Report> {
    let f = match AnyField::new(spec)? {
        AnyField::Finite(g) => g,
        AnyField::Rational(_) => return Err(Error::UnsupportedField.into()),
    };
    let members = catalog_over_field(&f, dim)?;
    let mut text = String::new();
    let list: Vec<Value> = members
        .iter()
        .map(|m| {
            writeln!(text, "{:<16} {}", m.key(), m.branch).unwrap();
            json!({"label": m.label, "params": m.param_strings(), "key": m.key(), "branch": m.branch})
        })
        .collect();
    let non_abelian = members.iter().filter(|m| !m.is_abelian()).count();
    writeln!(text, "non-abelian total: {non_abelian}").unwrap();
    let json = json!({
        "field": f.spec().name(),
        "dim": dim,
        "members": list,
        "non_abelian_total": non_abelian,
    });
    Ok(Report { json: into_map(json), text })
}

fn census(args: &CensusArgs) -> CliResult<Report> {
    let f = match AnyField::new(args.field)? {
        AnyField::Finite(g) => g,
        AnyField::Rational(_) => return Err(Error::UnsupportedField.into()),
    };
    let mode = match args.samples {
        Some(count) => CensusMode::Sample { count, seed: args.seed },
        None => CensusMode::Exhaustive,
    };
    let quiet = args.quiet;
    let job = || {
        enumerate_with_progress(&f, args.n, mode, |partial| {
            if !quiet {
                eprintln!("census: {} done, {} no match, {:?}", partial.total, partial.no_match, partial.counts);
            }
        })
    };
    let rep = match args.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Failure::Io(e.to_string()))?
            .install(job)?,
        None => job()?,
    };
    let mut text = String::new();
    writeln!(text, "{} n={} {} total={}", rep.field, rep.n, rep.mode, rep.total).unwrap();
    for (k, v) in &rep.counts {
        writeln!(text, "{k:<16} {v}").unwrap();
    }
    writeln!(text, "no match: {}", rep.no_match).unwrap();
    let json = serde_json::to_value(&rep).expect("report serializes");
    Ok(Report { json: into_map(json), text })
}

fn group(p: &Presentation, samples: usize, seed: u64) -> CliResult<Report> {
    let f = match AnyField::new(p.field)? {
        AnyField::Finite(g) if g.q() == 3 => g,
        _ => return Err(Error::WrongField.into()),
    };
    let l = SAAlgebra::from_presentation(&f, p)?;
    let g = group_from_saa(&l)?;
    let pres = g.presentation_text();
    let laws = check_group_laws(&g, samples, seed)?;
    let mut text = pres.clone();
    writeln!(text, "laws: pass on {samples} samples (seed {seed}); class {}", laws.class).unwrap();
    let json = json!({"presentation": pres, "laws": laws});
    Ok(Report { json: into_map(json), text })
}

fn oracle(spec: FieldSpec) -> CliResult<Report> {
    let f = match AnyField::new(spec)? {
        AnyField::Finite(g) => g,
        AnyField::Rational(_) => return Err(Error::UnsupportedField.into()),
    };
    let c = orbit_oracle_dim4(&f)?;
    let text = format!("{}: {} forms, {} orbits, sizes {:?}\n", c.field, c.forms, c.orbits, c.sizes);
    let json = serde_json::to_value(&c).expect("census serializes");
    Ok(Report { json: into_map(json), text })
}

fn into_map(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        other => Map::from_iter([("value".to_string(), other)]),
    }
}

fn execute(cmd: &Command) -> CliResult<(Report, String, &'static str)> {
    Ok(match cmd {
        Command::Analyze { file } => {
            let (bytes, p) = read(file)?;
            (with_field!(p.field, |f| analyze(&f, &p))?, digest(&[&bytes]), "analyze")
        }
        Command::Classify { file, budget } => {
            let (bytes, p) = read(file)?;
            let r = match AnyField::new(p.field)? {
                AnyField::Finite(g) => classify_file(&g, &p, *budget)?,
                AnyField::Rational(_) => return Err(Error::UnsupportedField.into()),
            };
            (r, digest(&[&bytes]), "classify")
        }
        Command::Iso { a, b, budget } => {
            let (ba, pa) = read(a)?;
            let (bb, pb) = read(b)?;
            if pa.field != pb.field {
                return Err(Error::FieldMismatch.into());
            }
            (with_field!(pa.field, |f| iso_files(&f, &pa, &pb, *budget))?, digest(&[&ba, &bb]), "iso")
        }
        Command::Catalog { field, dim } => {
            (catalog_list(*field, *dim)?, digest(&[format!("catalog {} {dim}", field.name()).as_bytes()]), "catalog")
        }
        Command::Census(args) => {
            let key = format!("census {} {} {:?} {}", args.field.name(), args.n, args.samples, args.seed);
            (census(args)?, digest(&[key.as_bytes()]), "census")
        }
        Command::Group { file, samples, seed } => {
            let (bytes, p) = read(file)?;
            (group(&p, *samples, *seed)?, digest(&[&bytes]), "group")
        }
        Command::OracleDim4 { field } => {
            (oracle(*field)?, digest(&[format!("oracle-dim4 {}", field.name()).as_bytes()]), "oracle-dim4")
        }
    })
}

fn envelope(command: &str, input_digest: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("tool".into(), json!("saalg"));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("command".into(), json!(command));
    m.insert("input_digest".into(), json!(input_digest));
    m
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: rendered, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: rendered }
            };
        }
    };
    match execute(&cli.command) {
        Ok((report, input_digest, name)) => {
            let stdout = match cli.format {
                Format::Json => {
                    let mut m = envelope(name, &input_digest);
                    m.extend(report.json);
                    serde_json::to_string_pretty(&Value::Object(m)).expect("json") + "\n"
                }
                Format::Text => report.text,
            };
            Outcome { code: 0, stdout, stderr: String::new() }
        }
        Err(fail) => {
            let (code, message) = match fail {
                Failure::Domain(e) => (e.code(), e.to_string()),
                Failure::Io(msg) => ("Io", msg),
            };
            let body = json!({"error": code, "message": message});
            let text = serde_json::to_string_pretty(&body).expect("json") + "\n";
            match cli.format {
                Format::Json => Outcome { code: 1, stdout: text, stderr: String::new() },
                Format::Text => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {code}: {message}\n") },
            }
        }
    }
}
