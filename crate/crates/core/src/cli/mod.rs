//! Command-line front end. Every command reads one `reeb-spectra/1` input
//! document and writes one output document.
//!
//! Exit codes: 0 on success, 1 on a domain error, 2 on a parse or schema
//! error. Failures are still reported as a structured output document.

pub mod doc;

use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::ech::{self, EchSpectrum};
use crate::error::Error;
use crate::models::{self, Stratum};
use crate::qlinear::{format_rational, BasisRegistry, Interval, QLinearValue};
use crate::seifert;
use doc::{
    registry_json, seifert_json, value_json, values_json, DocError, DocResult, Document, VERSION,
};

#[derive(Debug, Parser)]
#[command(
    name = "reeb-spectra",
    version,
    about = "Exact action-spectrum calculus for Reeb flows"
)]
pub struct Cli {
    /// Input document path, or `-` for stdin.
    #[arg(long, global = true, default_value = "-")]
    pub input: String,

    /// Output document path, or `-` for stdout.
    #[arg(long, global = true, default_value = "-")]
    pub output: String,

    /// Cap on the digits used when ordering irrational values.
    #[arg(long, global = true)]
    pub max_precision_digits: Option<u32>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank of the ℤ-module generated by a prime spectrum.
    Rank,
    /// Least common period of a prime spectrum.
    CommonPeriod,
    /// Besse decision with its period witness.
    BesseCheck,
    /// Zoll decision.
    ZollCheck,
    /// Action spectra generated by a prime spectrum.
    #[command(subcommand)]
    Spectrum(SpectrumCmd),
    /// Seifert invariants: normal form, Euler number, equivalence.
    #[command(subcommand)]
    Seifert(SeifertCmd),
    /// Check a Seifert tuple against the lens space L(p, q).
    LensCheck(LensArgs),
    /// Bounded check of the one-versus-two singular fiber obstruction.
    LensObstruction(ObstructionArgs),
    /// Besse models given by a period and Seifert invariants.
    #[command(subcommand)]
    Model(ModelCmd),
    /// Boundaries of the ellipsoids E(a, b).
    #[command(subcommand)]
    Ellipsoid(EllipsoidCmd),
    /// ECH spectral invariants N_k(a, b) of ellipsoids.
    #[command(subcommand)]
    Ech(EchCmd),
}

#[derive(Debug, Subcommand)]
pub enum SpectrumCmd {
    /// Full action spectrum up to a cutoff.
    Enumerate {
        #[arg(long)]
        cutoff: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SeifertCmd {
    Normalize,
    Euler,
    Equiv,
    Reverse,
    BesseOk,
}

#[derive(Debug, Args)]
pub struct LensArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub p: i64,
    #[arg(long, allow_negative_numbers = true)]
    pub q: i64,
}

#[derive(Debug, Args)]
pub struct ObstructionArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub p: i64,
    #[arg(long, allow_negative_numbers = true)]
    pub q: i64,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: i64,
    #[arg(long)]
    pub bound: u64,
}

#[derive(Debug, Subcommand)]
pub enum ModelCmd {
    Spectrum,
    Strata,
    Equiv,
    Reconstruct,
}

#[derive(Debug, Subcommand)]
pub enum EllipsoidCmd {
    Spectrum,
    Besse,
    ToModel,
}

#[derive(Debug, Subcommand)]
pub enum EchCmd {
    /// N_0, …, N_kmax.
    Values {
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// Number of generators with action at most L.
    Count {
        #[arg(long = "L")]
        level: Option<String>,
    },
    /// First k with N_{k+1} = N_k.
    Gap {
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// N_k/k at the given checkpoints.
    Sublinear {
        #[arg(long, value_delimiter = ',')]
        checkpoints: Option<Vec<usize>>,
    },
    /// N_k² / (2abk).
    Volume {
        #[arg(long)]
        k: Option<usize>,
    },
}

impl Command {
    pub fn name(&self) -> String {
        let (head, tail) = match self {
            Command::Rank => ("rank", ""),
            Command::CommonPeriod => ("common-period", ""),
            Command::BesseCheck => ("besse-check", ""),
            Command::ZollCheck => ("zoll-check", ""),
            Command::Spectrum(SpectrumCmd::Enumerate { .. }) => ("spectrum", "enumerate"),
            Command::Seifert(c) => (
                "seifert",
                match c {
                    SeifertCmd::Normalize => "normalize",
                    SeifertCmd::Euler => "euler",
                    SeifertCmd::Equiv => "equiv",
                    SeifertCmd::Reverse => "reverse",
                    SeifertCmd::BesseOk => "besse-ok",
                },
            ),
            Command::LensCheck(_) => ("lens-check", ""),
            Command::LensObstruction(_) => ("lens-obstruction", ""),
            Command::Model(c) => (
                "model",
                match c {
                    ModelCmd::Spectrum => "spectrum",
                    ModelCmd::Strata => "strata",
                    ModelCmd::Equiv => "equiv",
                    ModelCmd::Reconstruct => "reconstruct",
                },
            ),
            Command::Ellipsoid(c) => (
                "ellipsoid",
                match c {
                    EllipsoidCmd::Spectrum => "spectrum",
                    EllipsoidCmd::Besse => "besse",
                    EllipsoidCmd::ToModel => "to-model",
                },
            ),
            Command::Ech(c) => (
                "ech",
                match c {
                    EchCmd::Values { .. } => "values",
                    EchCmd::Count { .. } => "count",
                    EchCmd::Gap { .. } => "gap",
                    EchCmd::Sublinear { .. } => "sublinear",
                    EchCmd::Volume { .. } => "volume",
                },
            ),
        };
        if tail.is_empty() {
            head.to_string()
        } else {
            format!("{head} {tail}")
        }
    }

    fn needs_input(&self) -> bool {
        !matches!(self, Command::LensObstruction(_))
    }
}

/// Result of one invocation: the output document text and the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

/// Runs a parsed command against the input document text.
pub fn execute(cli: &Cli, input: Option<&str>) -> Outcome {
    let command = cli.command.name();
    let doc = match (cli.command.needs_input(), input) {
        (false, _) => None,
        (true, Some(text)) => match Document::parse(text, cli.max_precision_digits) {
            Ok(d) => Some(d),
            Err(e) => return failure(&command, None, e),
        },
        (true, None) => {
            return failure(
                &command,
                None,
                DocError::schema("", "missing input document"),
            );
        }
    };
    match dispatch(&cli.command, doc.as_ref()) {
        Ok(result) => Outcome {
            output: render(&json!({
                "version": VERSION,
                "command": command,
                "registry": registry_of(doc.as_ref()),
                "result": result,
            })),
            code: 0,
        },
        Err(e) => failure(&command, doc.as_ref(), e),
    }
}

/// Full pipeline over raw arguments and an input reader, as used by the
/// binary. Reading stdin happens only when the command needs a document.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> (Outcome, Option<String>)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (
                    Outcome {
                        output: e.to_string(),
                        code: 0,
                    },
                    None,
                );
            }
            let out = failure("", None, DocError::schema("/argv", e.to_string().trim()));
            return (out, None);
        }
    };
    let input = if cli.command.needs_input() {
        match read_input(&cli.input, stdin) {
            Ok(text) => Some(text),
            Err(msg) => {
                let out = failure(&cli.command.name(), None, DocError::schema("/input", msg));
                return (out, Some(cli.output));
            }
        }
    } else {
        None
    };
    (execute(&cli, input.as_deref()), Some(cli.output))
}

fn read_input(path: &str, stdin: &mut dyn Read) -> Result<String, String> {
    if path == "-" {
        let mut s = String::new();
        stdin
            .read_to_string(&mut s)
            .map_err(|e| format!("reading stdin: {e}"))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn main() -> i32 {
    let (outcome, output) = run(std::env::args_os(), &mut std::io::stdin());
    match output.as_deref() {
        Some(path) if path != "-" => {
            if let Err(e) = std::fs::write(path, &outcome.output) {
                eprintln!("reeb-spectra: writing {path}: {e}");
                return 2;
            }
        }
        _ => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(outcome.output.as_bytes());
        }
    }
    outcome.code
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn registry_of(doc: Option<&Document>) -> Value {
    doc.map_or_else(|| json!([]), |d| registry_json(&d.registry))
}

fn failure(command: &str, doc: Option<&Document>, e: DocError) -> Outcome {
    let (code, name, message, path) = match e {
        DocError::Schema { path, message } => (2, "SchemaError".to_string(), message, path),
        DocError::Domain { path, error } => (1, error.name().to_string(), error.to_string(), path),
    };
    Outcome {
        output: render(&json!({
            "version": VERSION,
            "command": command,
            "registry": registry_of(doc),
            "error": { "name": name, "message": message, "path": path },
        })),
        code,
    }
}

fn at(path: &str) -> impl FnOnce(Error) -> DocError + '_ {
    move |e| DocError::domain(path, e)
}

fn need<T>(value: Option<T>, path: &str, what: &str) -> DocResult<T> {
    value.ok_or_else(|| DocError::schema(path, format!("missing {what}")))
}

fn rational_str(q: &num_rational::BigRational) -> Value {
    Value::String(format_rational(q))
}

fn interval_json(iv: &Interval) -> Value {
    json!({ "lo": rational_str(&iv.lo), "hi": rational_str(&iv.hi) })
}

fn value_ref(
    doc: &Document,
    flag: Option<&String>,
    field: Option<&Value>,
    path: &str,
) -> DocResult<Option<QLinearValue>> {
    if let Some(text) = flag {
        return doc::parse_value_text(text, &doc.registry)
            .map(Some)
            .ok_or_else(|| DocError::schema(path, format!("`{text}` is not a value reference")));
    }
    field.map(|v| doc.value(v, path)).transpose()
}

fn dispatch(command: &Command, doc: Option<&Document>) -> DocResult<Value> {
    let doc = || doc.ok_or_else(|| DocError::schema("", "missing input document"));
    Ok(match command {
        Command::Rank => json!({ "rank": doc()?.spectrum()?.rank() }),
        Command::CommonPeriod => {
            json!({ "common_period": doc()?.spectrum()?.common_period().as_ref().map(value_json) })
        }
        Command::BesseCheck => {
            let sp = doc()?.spectrum()?;
            let verdict = sp.besse_verdict();
            json!({
                "verdict": if verdict.is_besse() { "besse" } else { "not-besse" },
                "witness": verdict.witness().map(value_json),
                "rank": sp.rank(),
                "rank_one_witness": sp.rank_one_witness().as_ref().map(value_json),
            })
        }
        Command::ZollCheck => json!({ "zoll": doc()?.spectrum()?.is_zoll() }),
        Command::Spectrum(SpectrumCmd::Enumerate { cutoff }) => {
            let d = doc()?;
            let sp = d.spectrum()?;
            let cutoff = need(
                value_ref(d, cutoff.as_ref(), d.optional("cutoff"), "/cutoff")?,
                "/cutoff",
                "cutoff (flag --cutoff or field `cutoff`)",
            )?;
            let values = sp
                .enumerate_action_spectrum(&cutoff)
                .map_err(at("/cutoff"))?;
            json!({ "cutoff": value_json(&cutoff), "values": values_json(&values) })
        }
        Command::Seifert(c) => seifert_cmd(c, doc()?)?,
        Command::LensCheck(LensArgs { p, q }) => {
            let s = doc()?.seifert()?;
            let passes = seifert::lens_fibration_check(*p, *q, &s).map_err(at("/argv"))?;
            json!({ "p": p, "q": q, "seifert": seifert_json(&s), "passes": passes })
        }
        Command::LensObstruction(ObstructionArgs { p, q, alpha, bound }) => {
            let ok =
                seifert::singular_count_obstruction(*p, *q, *alpha, *bound).map_err(at("/argv"))?;
            json!({ "p": p, "q": q, "alpha": alpha, "bound": bound, "obstructed": ok })
        }
        Command::Model(c) => model_cmd(c, doc()?)?,
        Command::Ellipsoid(c) => ellipsoid_cmd(c, doc()?)?,
        Command::Ech(c) => ech_cmd(c, doc()?)?,
    })
}

fn seifert_cmd(c: &SeifertCmd, d: &Document) -> DocResult<Value> {
    Ok(match c {
        SeifertCmd::Normalize => {
            let s = d.seifert()?;
            let nf = s.normalize();
            json!({
                "normal_form": {
                    "genus": nf.genus,
                    "b": nf.b,
                    "exceptional": nf.exceptional.iter().map(|&(a, r)| json!([a, r])).collect::<Vec<_>>(),
                },
                "euler": rational_str(&nf.euler_number()),
            })
        }
        SeifertCmd::Euler => json!({ "euler": rational_str(&d.seifert()?.euler_number()) }),
        SeifertCmd::Equiv => {
            let (s1, s2) = d.seifert_pair()?;
            json!({ "equivalent": s1.equivalent(&s2) })
        }
        SeifertCmd::Reverse => {
            let r = d.seifert()?.reverse_orientation();
            json!({ "seifert": seifert_json(&r), "euler": rational_str(&r.euler_number()) })
        }
        SeifertCmd::BesseOk => {
            let s = d.seifert()?;
            json!({ "besse_realizable": s.besse_realizable(), "euler": rational_str(&s.euler_number()) })
        }
    })
}

fn model_json(m: &models::BesseModel) -> Value {
    json!({ "manifold": m.manifold(), "tau": value_json(m.tau()), "seifert": seifert_json(m.seifert()) })
}

fn model_cmd(c: &ModelCmd, d: &Document) -> DocResult<Value> {
    Ok(match c {
        ModelCmd::Spectrum => {
            json!({ "prime_spectrum": values_json(d.model()?.prime_spectrum().elements()) })
        }
        ModelCmd::Strata => {
            let strata: Vec<Value> = d
                .model()?
                .multiplicity_strata()
                .into_iter()
                .map(|(alpha, s)| match s {
                    Stratum::Regular => json!({ "alpha": alpha, "fibers": "regular" }),
                    Stratum::Exceptional(n) => json!({ "alpha": alpha, "fibers": n }),
                })
                .collect();
            json!({ "strata": strata })
        }
        ModelCmd::Equiv => {
            let (m1, m2) = d.model_pair()?;
            let eq = models::besse_forms_equivalent(&m1, &m2).map_err(at("/model_pair"))?;
            json!({ "equivalent": eq })
        }
        ModelCmd::Reconstruct => {
            let sp = d.spectrum()?;
            let rec = models::reconstruct_multiplicities(&sp).map(|(tau, alphas)| {
                json!({ "tau": value_json(&tau), "multiplicities": alphas.into_iter().collect::<Vec<_>>() })
            });
            json!({ "reconstructed": rec })
        }
    })
}

fn ellipsoid_cmd(c: &EllipsoidCmd, d: &Document) -> DocResult<Value> {
    let e = d.ellipsoid()?;
    Ok(match c {
        EllipsoidCmd::Spectrum => json!({
            "a": value_json(e.a()),
            "b": value_json(e.b()),
            "prime_spectrum": values_json(e.prime_spectrum().elements()),
        }),
        EllipsoidCmd::Besse => json!({
            "besse": e.is_besse(),
            "prime_spectrum": values_json(e.prime_spectrum().elements()),
        }),
        EllipsoidCmd::ToModel => {
            let m = e.to_besse_model().map_err(at("/ellipsoid"))?;
            json!({ "model": model_json(&m), "euler": rational_str(&m.seifert().euler_number()) })
        }
    })
}

fn ech_cmd(c: &EchCmd, d: &Document) -> DocResult<Value> {
    let query = d.ech()?;
    let reg: &BasisRegistry = &d.registry;
    let (a, b) = (&query.a, &query.b);
    Ok(match c {
        EchCmd::Values { kmax } => {
            let kmax = need(
                kmax.or(query.kmax),
                "/ech/kmax",
                "kmax (flag --kmax or field `kmax`)",
            )?;
            let mut sp = EchSpectrum::new(a.clone(), b.clone(), reg.clone()).map_err(at("/ech"))?;
            let values = sp.values(kmax).map_err(at("/ech"))?;
            json!({ "kmax": kmax, "values": values_json(values) })
        }
        EchCmd::Count { level } => {
            let level = need(
                value_ref(d, level.as_ref(), None, "/ech/L")?.or(query.level.clone()),
                "/ech/L",
                "L (flag --L or field `L`)",
            )?;
            let n = ech::filtered_generator_count(a, b, &level, reg).map_err(at("/ech"))?;
            json!({ "L": value_json(&level), "count": n })
        }
        EchCmd::Gap { kmax } => {
            let kmax = need(
                kmax.or(query.kmax),
                "/ech/kmax",
                "kmax (flag --kmax or field `kmax`)",
            )?;
            let k = ech::first_gap_collision(a, b, kmax, reg).map_err(at("/ech"))?;
            json!({ "kmax": kmax, "k": k })
        }
        EchCmd::Sublinear { checkpoints } => {
            let cps = need(
                checkpoints.clone().or(query.checkpoints.clone()),
                "/ech/checkpoints",
                "checkpoints (flag --checkpoints or field `checkpoints`)",
            )?;
            let profile =
                ech::sublinearity_profile(a, b, &cps, reg).map_err(at("/ech/checkpoints"))?;
            let points: Vec<Value> = profile
                .iter()
                .map(|p| json!({ "k": p.k, "value": value_json(&p.value), "ratio": interval_json(&p.ratio) }))
                .collect();
            json!({ "profile": points, "decreasing": ech::certainly_decreasing(&profile) })
        }
        EchCmd::Volume { k } => {
            let k = need(k.or(query.k), "/ech/k", "k (flag --k or field `k`)")?;
            let iv = ech::volume_asymptotic_ratio(a, b, k, reg).map_err(at("/ech/k"))?;
            json!({ "k": k, "ratio": interval_json(&iv) })
        }
    })
}

/// Output document as read back by consumers.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Response {
    pub version: String,
    pub command: String,
    pub registry: Vec<RegistryEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<Map<String, Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegistryEntry {
    pub symbol: String,
    pub approx: String,
    pub precision_digits: u32,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorReport {
    pub name: String,
    pub message: String,
    pub path: String,
}

impl Response {
    /// Parses an output document and checks its envelope.
    pub fn parse(text: &str) -> Result<Self, String> {
        let r: Response = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if r.version != VERSION {
            return Err(format!("unexpected version {}", r.version));
        }
        if r.result.is_some() == r.error.is_some() {
            return Err("exactly one of `result` and `error` must be present".into());
        }
        Ok(r)
    }

    pub fn render(&self) -> String {
        render(&serde_json::to_value(self).expect("response serializes"))
    }

    pub fn registry(&self) -> Result<BasisRegistry, Error> {
        BasisRegistry::new(
            self.registry
                .iter()
                .map(|e| crate::qlinear::SymbolEntry::new(&e.symbol, &e.approx, e.precision_digits))
                .collect(),
        )
    }
}
