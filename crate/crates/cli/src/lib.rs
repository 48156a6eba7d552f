//! Command-line driver.
//!
//! Exit status: 0 on success, 2 for usage, I/O and input errors, 3 when an
//! input violates a tower invariant such as `N₁ ∩ N₂ = 1`, 4 when an internal
//! check or a certificate verdict fails.

pub mod doc;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use multinorm::obstruction::{
    coker_g, intersection_obstruction_order, multinorm_obstruction, phi_kernel,
    second_obstruction_bound, sha_abelian, theorem1_certificate, LocalFamily,
};
use multinorm::sweep::{run_sweep, SweepConfig};
use multinorm::wedge::exterior_square;
use multinorm::{AbHom, Error, FinAbGroup};
use serde_json::{json, Value};

use crate::doc::{ParseError, ShaInput};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "multinorm", version, about = "Norm-principle obstructions for abelian extensions")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Hasse norm principle obstruction of a field or of a group with a family.
    Sha { file: PathBuf },
    /// Multinorm obstruction of a pair, with the coker(g) cross-check.
    Multinorm { file: PathBuf },
    /// Full comparison certificate for a pair.
    Certificate { file: PathBuf },
    /// Order of the intersection obstruction of a pair.
    Intersection { file: PathBuf },
    /// Second-obstruction bound and injectivity of H^ab → G^ab for a permutation group.
    Bound { file: PathBuf },
    /// Kernel of H^ab → G^ab for a permutation group.
    Phi { file: PathBuf },
    /// Exterior square of a group given as `2,2` or as a JSON file.
    Wedge { group: String },
    /// Verify the comparison over every tower of small abelian groups.
    Sweep {
        #[arg(long, default_value_t = 32)]
        max_order: u64,
        #[arg(long, default_value_t = 25)]
        families: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Sha,
    Multinorm,
    Certificate,
    Intersection,
    Bound,
    Phi,
    Wedge,
    Sweep,
}

#[derive(Clone, Debug)]
pub enum Input {
    Document { source: String, value: Value },
    Group(FinAbGroup),
    Sweep(SweepConfig),
}

/// A fully specified job: the command, its parsed input and the output format.
#[derive(Clone, Debug)]
pub struct JobSpec {
    pub command: Command,
    pub input: Input,
    pub output_format: Format,
}

#[derive(Debug)]
pub enum CliError {
    /// Help or version text requested on the command line.
    Help(String),
    Usage(String),
    Io { path: String, message: String },
    Parse(ParseError),
    Library(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Library(Error::InvariantViolation { .. }) => 3,
            CliError::Library(Error::Internal { .. }) => 4,
            CliError::Help(_) => 0,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Help(m) | CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io { path, message } => write!(f, "{path}: {message}"),
            CliError::Parse(e) => write!(f, "parse error at {e}"),
            CliError::Library(e) => write!(f, "{e}"),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Library(e)
    }
}

/// The result of a job in both output formats.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub text: String,
    pub json: Value,
    /// False when a certificate or sweep reports a failed check.
    pub passed: bool,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("plain JSON values");
                s.push('\n');
                s
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn read_document(path: &PathBuf) -> Result<Input, CliError> {
    let source = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: source.clone(),
        message: e.to_string(),
    })?;
    let value = doc::parse_json(&source, &text)?;
    Ok(Input::Document { source, value })
}

impl JobSpec {
    pub fn from_args<I, T>(argv: I) -> Result<JobSpec, CliError>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let cli = Cli::try_parse_from(argv).map_err(|e| match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliError::Help(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        })?;
        let (command, input) = match cli.command {
            Cmd::Sha { file } => (Command::Sha, read_document(&file)?),
            Cmd::Multinorm { file } => (Command::Multinorm, read_document(&file)?),
            Cmd::Certificate { file } => (Command::Certificate, read_document(&file)?),
            Cmd::Intersection { file } => (Command::Intersection, read_document(&file)?),
            Cmd::Bound { file } => (Command::Bound, read_document(&file)?),
            Cmd::Phi { file } => (Command::Phi, read_document(&file)?),
            Cmd::Wedge { group } => match doc::group_shorthand(&group) {
                Some(g) => (Command::Wedge, Input::Group(g)),
                None => (Command::Wedge, read_document(&PathBuf::from(group))?),
            },
            Cmd::Sweep {
                max_order,
                families,
                seed,
            } => (
                Command::Sweep,
                Input::Sweep(SweepConfig {
                    max_order,
                    families,
                    seed,
                }),
            ),
        };
        Ok(JobSpec {
            command,
            input,
            output_format: cli.format,
        })
    }

    pub fn execute(&self) -> Result<Report, CliError> {
        match (&self.input, self.command) {
            (Input::Group(g), Command::Wedge) => Ok(wedge(g)),
            (Input::Document { value, .. }, Command::Wedge) => {
                Ok(wedge(&doc::group(value, "$")?))
            }
            (Input::Sweep(config), Command::Sweep) => sweep(config),
            (Input::Document { value, .. }, cmd) => match cmd {
                Command::Sha => sha(value),
                Command::Multinorm => multinorm(value),
                Command::Certificate => certificate(value),
                Command::Intersection => intersection(value),
                Command::Bound => bound(value),
                Command::Phi => phi(value),
                Command::Wedge | Command::Sweep => unreachable!("handled above"),
            },
            _ => Err(CliError::Usage("input does not match the command".into())),
        }
    }
}

/// Parses `argv` (including the program name), runs the job and renders it.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let spec = match JobSpec::from_args(argv) {
        Ok(s) => s,
        Err(CliError::Help(m)) => {
            return Outcome {
                code: 0,
                stdout: m,
                stderr: String::new(),
            }
        }
        Err(e) => return failure(e),
    };
    match spec.execute() {
        Ok(report) => Outcome {
            code: if report.passed { 0 } else { 4 },
            stdout: report.render(spec.output_format),
            stderr: if report.passed {
                String::new()
            } else {
                "error: verification failed\n".into()
            },
        },
        Err(e) => failure(e),
    }
}

fn failure(e: CliError) -> Outcome {
    let mut stderr = e.to_string();
    if !stderr.starts_with("error") {
        stderr = format!("error: {stderr}");
    }
    if !stderr.ends_with('\n') {
        stderr.push('\n');
    }
    Outcome {
        code: e.exit_code(),
        stdout: String::new(),
        stderr,
    }
}

fn group_json(g: &FinAbGroup) -> Value {
    serde_json::to_value(g).expect("plain struct")
}

fn hom_text(h: &AbHom) -> String {
    let rows: Vec<String> = (0..h.target().rank())
        .map(|i| {
            let row: Vec<String> = h.columns().iter().map(|c| c[i].to_string()).collect();
            format!("[{}]", row.join(", "))
        })
        .collect();
    format!("{} → {}: [{}]", h.source(), h.target(), rows.join(", "))
}

fn hom_json(h: &AbHom) -> Value {
    serde_json::to_value(h).expect("plain struct")
}

fn number(n: &impl std::fmt::Display) -> Value {
    let s = n.to_string();
    match s.parse::<u64>() {
        Ok(x) => json!(x),
        Err(_) => json!(s),
    }
}

fn family_json(family: &LocalFamily) -> Value {
    let labels = family.labels();
    let places: Vec<Value> = family
        .places()
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let mut o = json!({
                "generators": d.generators(),
                "group": group_json(d.abstract_group()),
            });
            if let Some(l) = labels {
                o["label"] = json!(l[i]);
            }
            o
        })
        .collect();
    Value::Array(places)
}

fn wedge(g: &FinAbGroup) -> Report {
    let w = exterior_square(g);
    Report {
        text: format!("{}\n", w.group()),
        json: json!({
            "command": "wedge",
            "group": group_json(g),
            "exterior_square": group_json(w.group()),
        }),
        passed: true,
    }
}

fn sha(value: &Value) -> Result<Report, CliError> {
    let mut out = json!({ "command": "sha" });
    let (g, family) = match doc::sha_input(value)? {
        ShaInput::Field(f) => {
            out["field"] = json!({
                "conductor": f.conductor(),
                "fixing_subgroup": f.fixing_generators(),
                "degree": f.degree(),
            });
            (f.galois_group().clone(), f.realizable_family()?)
        }
        ShaInput::Group(g, family) => (g, family),
    };
    let s = sha_abelian(&g, &family)?;
    out["group"] = group_json(&g);
    out["places"] = family_json(&family);
    out["sha"] = group_json(&s);
    Ok(Report {
        text: format!("{s}\n"),
        json: out,
        passed: true,
    })
}

fn tower(value: &Value) -> Result<doc::TowerInput, CliError> {
    Ok(doc::tower_input(value)??)
}

fn multinorm(value: &Value) -> Result<Report, CliError> {
    let t = tower(value)?;
    let sha_e = multinorm_obstruction(&t.tower, &t.family)?;
    let coker = coker_g(&t.tower, &t.family)?.coker_t;
    let holds = sha_e.is_trivial();
    let verdict = if holds {
        "multinorm principle holds"
    } else {
        "multinorm principle fails"
    };
    Ok(Report {
        text: format!("{sha_e} — {verdict}\ncoker(g): {coker}\n"),
        json: json!({
            "command": "multinorm",
            "sha_intersection": group_json(&sha_e),
            "coker_g": group_json(&coker),
            "holds": holds,
        }),
        passed: true,
    })
}

fn certificate(value: &Value) -> Result<Report, CliError> {
    let t = tower(value)?;
    let cert = theorem1_certificate(&t.tower, &t.family)?;
    let mut text = String::new();
    let groups = [
        ("Sha(L)", &cert.sha_l),
        ("Sha(L1)", &cert.sha_1),
        ("Sha(L2)", &cert.sha_2),
        ("Sha(E)", &cert.sha_e),
        ("Coker(T)", &cert.coker_t),
    ];
    for (name, g) in groups {
        writeln!(text, "{name:<9} {g}").unwrap();
    }
    writeln!(text, "{:<9} {}", "|Im T|", cert.image_t_order).unwrap();
    let maps = [("T", &cert.map_t), ("P", &cert.map_p), ("S", &cert.map_s)];
    for (name, m) in maps {
        let shown = m.as_ref().map_or("unavailable".to_string(), hom_text);
        writeln!(text, "{name:<9} {shown}").unwrap();
    }
    let failed = if cert.failures.is_empty() {
        "none".to_string()
    } else {
        cert.failures.join(", ")
    };
    writeln!(text, "{:<9} {failed}", "failed").unwrap();
    writeln!(text, "{:<9} {}", "verdict", if cert.verdict { "pass" } else { "FAIL" }).unwrap();
    let opt_hom = |m: &Option<AbHom>| m.as_ref().map_or(Value::Null, hom_json);
    let json = json!({
        "command": "certificate",
        "sha_l": group_json(&cert.sha_l),
        "sha_l1": group_json(&cert.sha_1),
        "sha_l2": group_json(&cert.sha_2),
        "sha_e": group_json(&cert.sha_e),
        "coker_t": group_json(&cert.coker_t),
        "image_t_order": number(&cert.image_t_order),
        "t": opt_hom(&cert.map_t),
        "p": opt_hom(&cert.map_p),
        "s": opt_hom(&cert.map_s),
        "failures": cert.failures,
        "verdict": cert.verdict,
    });
    Ok(Report {
        text,
        json,
        passed: cert.verdict,
    })
}

fn intersection(value: &Value) -> Result<Report, CliError> {
    let t = tower(value)?;
    let n = intersection_obstruction_order(&t.tower, &t.family)?;
    Ok(Report {
        text: format!("|Sha_∩| = {n}\n"),
        json: json!({ "command": "intersection", "intersection_order": number(&n) }),
        passed: true,
    })
}

fn bound(value: &Value) -> Result<Report, CliError> {
    let c = doc::cayley_input(value)?;
    let b = second_obstruction_bound(&c.group, &c.n1, &c.n2)?;
    let kernel = phi_kernel(&c.group, &c.n1, &c.n2)?.kernel;
    let injective = kernel.is_trivial();
    Ok(Report {
        text: format!("bound: {b}\nphi injective: {injective}\n"),
        json: json!({
            "command": "bound",
            "group_order": c.group.order(),
            "bound": b,
            "phi_injective": injective,
        }),
        passed: true,
    })
}

fn phi(value: &Value) -> Result<Report, CliError> {
    let c = doc::cayley_input(value)?;
    let k = phi_kernel(&c.group, &c.n1, &c.n2)?;
    let g = &c.group;
    let mut text = format!(
        "phi injective: {}\nker(phi): {}\n",
        k.kernel.is_trivial(),
        k.kernel.abstract_group()
    );
    let mut reps = Vec::new();
    for gen in k.kernel.generators() {
        // the least element of H in this class, written as a commutator when possible
        let Some(x) = k
            .inclusion
            .images()
            .iter()
            .copied()
            .find(|&x| k.class_of(x).as_ref() == Some(gen))
        else {
            continue;
        };
        let comm = (0..g.order())
            .flat_map(|a| (0..g.order()).map(move |b| (a, b)))
            .find(|&(a, b)| g.commutator(a, b) == x);
        match comm {
            Some((a, b)) => writeln!(text, "  class of element {x} = [{a}, {b}]").unwrap(),
            None => writeln!(text, "  class of element {x}").unwrap(),
        }
        reps.push(json!({
            "element": x,
            "permutation": g.permutation(x),
            "commutator": comm.map(|(a, b)| vec![a, b]),
        }));
    }
    Ok(Report {
        text,
        json: json!({
            "command": "phi",
            "phi_injective": k.kernel.is_trivial(),
            "kernel": group_json(k.kernel.abstract_group()),
            "kernel_generators": reps,
        }),
        passed: true,
    })
}

fn sweep(config: &SweepConfig) -> Result<Report, CliError> {
    let report = run_sweep(config)?;
    let mut text = format!(
        "groups {}, towers {}, certificates {}, nontrivial {}, failures {}\n",
        report.groups,
        report.towers,
        report.certificates,
        report.nontrivial,
        report.failures.len()
    );
    for f in &report.failures {
        writeln!(
            text,
            "FAIL {} n1={:?} n2={:?} family {}: {}",
            f.group,
            f.n1,
            f.n2,
            f.family,
            f.checks.join(", ")
        )
        .unwrap();
    }
    let mut json = serde_json::to_value(&report).expect("plain struct");
    json["command"] = json!("sweep");
    Ok(Report {
        text,
        json,
        passed: report.passed(),
    })
}
