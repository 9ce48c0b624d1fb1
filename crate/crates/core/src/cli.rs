//! Command-line front end. Every command builds a [`Report`]; text and JSON
//! output are both rendered from the same JSON value.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::dga::{validate, ChainElement, Degree, Dga, DgaPresentation};
use crate::gf2::{Gf2AffineSubspace, Gf2Subspace};
use crate::homology::{HomologyClass, HomologyError, HomologyStructure};
use crate::massey::{
    self, fourfold_bracket, left_div_subgroup, right_div_subgroup, triple_bracket, CoindetResult, DefiningSystem,
    MasseyError, DEFAULT_ENUMERATION_LIMIT,
};
use crate::oracle::{check_instance, random_instance};

#[derive(Debug, Parser)]
#[command(name = "coindet", version, about = "Massey products and fourfold-bracket definedness over F2")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate a presentation file.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Homology dimensions and basis representatives.
    Homology {
        file: PathBuf,
        /// Highest degree to report; defaults to one below the truncation.
        #[arg(long)]
        max_degree: Option<Degree>,
        #[command(flatten)]
        out: Output,
    },
    /// Threefold bracket of three cycles.
    Triple {
        file: PathBuf,
        c0: String,
        c1: String,
        c2: String,
        #[command(flatten)]
        out: Output,
    },
    /// Coindeterminacy of four cycles.
    Coindet {
        file: PathBuf,
        c0: String,
        c1: String,
        c2: String,
        c3: String,
        #[command(flatten)]
        out: Output,
    },
    /// Definedness and value set of the fourfold bracket.
    Fourfold {
        file: PathBuf,
        c0: String,
        c1: String,
        c2: String,
        c3: String,
        /// Largest number of free parameters to enumerate exhaustively.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
        enumerate_limit: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Compare the linear-algebra path against exhaustive search on random instances.
    RandomCheck {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        max_gens: usize,
        #[arg(long, default_value_t = 5)]
        max_degree: u32,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Refused,
    Error,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Refused => "refused",
            Status::Error => "error",
        }
    }

    /// 0 ran and passed, 1 usage or parse error, 2 domain refusal.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Error => 1,
            Status::Refused => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub status: Status,
    pub reason_code: Option<String>,
    pub message: Option<String>,
    pub result: Value,
}

impl Report {
    fn new(command: &str, inputs: Value) -> Self {
        Self {
            command: command.to_string(),
            inputs,
            status: Status::Ok,
            reason_code: None,
            message: None,
            result: Value::Null,
        }
    }

    fn fail(mut self, status: Status, code: &str, message: impl ToString) -> Self {
        self.status = status;
        self.reason_code = Some(code.to_string());
        self.message = Some(message.to_string());
        self
    }

    pub fn to_value(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "status": self.status.as_str(),
            "reason_code": self.reason_code,
            "message": self.message,
            "result": self.result,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("values serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Value::Object(map) = self.to_value() {
            for (k, v) in &map {
                write_text(&mut out, 0, k, v);
            }
        }
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn write_text(out: &mut String, indent: usize, key: &str, v: &Value) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, v) in map {
                write_text(out, indent + 1, k, v);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (i, item) in items.iter().enumerate() {
                write_text(out, indent + 1, &format!("[{i}]"), item);
            }
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            out.push_str(&format!("{pad}{key}: [{}]\n", parts.join(", ")));
        }
        Value::Object(_) => out.push_str(&format!("{pad}{key}: {{}}\n")),
        other => out.push_str(&format!("{pad}{key}: {}\n", scalar(other))),
    }
}

/// What a run prints and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            } else {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            };
        }
    };
    let (report, json) = execute(cli.command);
    Outcome {
        stdout: if json { report.to_json() } else { report.to_text() },
        stderr: String::new(),
        code: report.status.exit_code(),
    }
}

fn execute(command: Command) -> (Report, bool) {
    match command {
        Command::Verify { file, out } => (cmd_verify(&file), out.json),
        Command::Homology { file, max_degree, out } => (cmd_homology(&file, max_degree), out.json),
        Command::Triple { file, c0, c1, c2, out } => (cmd_triple(&file, [&c0, &c1, &c2]), out.json),
        Command::Coindet { file, c0, c1, c2, c3, out } => (cmd_coindet(&file, [&c0, &c1, &c2, &c3]), out.json),
        Command::Fourfold {
            file,
            c0,
            c1,
            c2,
            c3,
            enumerate_limit,
            out,
        } => (cmd_fourfold(&file, [&c0, &c1, &c2, &c3], enumerate_limit), out.json),
        Command::RandomCheck {
            count,
            seed,
            max_gens,
            max_degree,
            out,
        } => (cmd_random_check(count, seed, max_gens, max_degree), out.json),
    }
}

fn file_inputs(file: &std::path::Path, classes: &[&String]) -> Value {
    let mut m = Map::new();
    m.insert("file".into(), json!(file.display().to_string()));
    if !classes.is_empty() {
        m.insert("classes".into(), json!(classes));
    }
    Value::Object(m)
}

fn read_presentation(file: &std::path::Path) -> Result<DgaPresentation, (&'static str, String)> {
    let text = std::fs::read_to_string(file).map_err(|e| ("io-error", format!("{}: {e}", file.display())))?;
    text.parse::<DgaPresentation>()
        .map_err(|e| ("parse-error", format!("{}: {e}", file.display())))
}

/// Loads, validates and builds homology, or returns the finished report.
fn load(report: Report, file: &std::path::Path) -> Result<(Report, HomologyStructure), Report> {
    let p = match read_presentation(file) {
        Ok(p) => p,
        Err((code, msg)) => return Err(report.fail(Status::Error, code, msg)),
    };
    match Dga::new(p) {
        Ok(dga) => Ok((report, HomologyStructure::new(dga))),
        Err(e) => Err(report.fail(Status::Refused, "invalid-dga", e)),
    }
}

fn parse_classes(report: Report, h: &HomologyStructure, texts: &[&String]) -> Result<(Report, Vec<HomologyClass>), Report> {
    let mut out = Vec::new();
    for t in texts {
        let u = match h.dga().parse_element(t) {
            Ok(u) => u,
            Err(e) => return Err(report.fail(Status::Error, "parse-error", format!("`{t}`: {e}"))),
        };
        match h.class_of(&u) {
            Ok(c) => out.push(c),
            Err(e @ HomologyError::NotACycle { .. }) => {
                return Err(report.fail(Status::Refused, "not-a-cycle", e))
            }
            Err(e @ HomologyError::Unavailable { .. }) => {
                return Err(report.fail(Status::Refused, "degree-unavailable", e))
            }
            Err(e) => return Err(report.fail(Status::Error, "algebra-error", e)),
        }
    }
    Ok((report, out))
}

fn refuse(report: Report, e: MasseyError) -> Report {
    let status = match e {
        MasseyError::Inconsistent(_) => Status::Error,
        _ => Status::Refused,
    };
    let code = e.reason_code();
    report.fail(status, code, e)
}

fn chain(h: &HomologyStructure, u: &ChainElement) -> Value {
    json!(h.dga().format_argument(u))
}

fn class_text(h: &HomologyStructure, degree: Degree, coords: &crate::gf2::Gf2Vector) -> String {
    h.class_from_coords(degree, coords)
        .map(|c| h.format_class(&c))
        .unwrap_or_else(|_| "?".into())
}

fn subspace(h: &HomologyStructure, degree: Degree, s: &Gf2Subspace) -> Value {
    let basis: Vec<String> = s.basis().iter().map(|b| class_text(h, degree, b)).collect();
    json!({ "dim": s.dim(), "basis": basis })
}

fn coset(h: &HomologyStructure, degree: Degree, a: &Gf2AffineSubspace) -> Value {
    json!({
        "representative": class_text(h, degree, a.representative()),
        "direction": subspace(h, degree, a.direction()),
        "contains_zero": a.contains_zero(),
    })
}

fn defining(h: &HomologyStructure, d: &DefiningSystem) -> Value {
    json!({
        "a01": chain(h, &d.a01),
        "a12": chain(h, &d.a12),
        "a23": chain(h, &d.a23),
        "a02": chain(h, &d.a02),
        "a13": chain(h, &d.a13),
    })
}

fn coindet_value(h: &HomologyStructure, c: &CoindetResult) -> Result<Value, MasseyError> {
    let [s0, s1, s2, s3] = [&c.inputs[0], &c.inputs[1], &c.inputs[2], &c.inputs[3]];
    let left = left_div_subgroup(h, s0, s2, c.degree)?;
    let right = right_div_subgroup(h, s1, s3, c.degree)?;
    let coset_law = &left.sum(&right)? == c.coset.direction();
    Ok(json!({
        "degree": c.degree,
        "coset": coset(h, c.degree, &c.coset),
        "contains_zero": c.contains_zero,
        "left_div": subspace(h, c.degree, &left),
        "right_div": subspace(h, c.degree, &right),
        "direction_is_sum_of_div_subgroups": coset_law,
        "witnesses": {
            "x": chain(h, &c.witness_xz.0),
            "z": chain(h, &c.witness_xz.1),
            "y": chain(h, &c.witness_yw.0),
            "w": chain(h, &c.witness_yw.1),
        },
        "common": c.common.as_ref().map(|d| defining(h, d)),
    }))
}

pub fn cmd_verify(file: &std::path::Path) -> Report {
    let report = Report::new("verify", file_inputs(file, &[]));
    let p = match read_presentation(file) {
        Ok(p) => p,
        Err((code, msg)) => return report.fail(Status::Error, code, msg),
    };
    let v = validate(&p);
    let violations: Vec<String> = v.violations.iter().map(ToString::to_string).collect();
    let mut report = report;
    report.result = json!({
        "name": p.name(),
        "truncation": p.truncation(),
        "generators": p.generators().len(),
        "relations": p.relations().len(),
        "valid": v.passed(),
        "violations": violations,
    });
    if v.passed() {
        report
    } else {
        report.fail(Status::Refused, "invalid-dga", v)
    }
}

pub fn cmd_homology(file: &std::path::Path, max_degree: Option<Degree>) -> Report {
    let mut inputs = file_inputs(file, &[]);
    inputs["max_degree"] = json!(max_degree);
    let (mut report, h) = match load(Report::new("homology", inputs), file) {
        Ok(x) => x,
        Err(r) => return r,
    };
    let top = max_degree.unwrap_or(h.top_degree());
    if top > h.top_degree() {
        let e = HomologyError::Unavailable {
            degree: top,
            truncation: h.dga().truncation(),
        };
        return report.fail(Status::Refused, "degree-unavailable", e);
    }
    let mut dims = Vec::new();
    let mut degrees = Vec::new();
    for n in 0..=top {
        let basis: Vec<String> = h
            .basis(n)
            .expect("available")
            .iter()
            .map(|b| h.dga().format(b))
            .collect();
        dims.push(basis.len());
        degrees.push(json!({ "degree": n, "dim": basis.len(), "basis": basis }));
    }
    report.result = json!({ "dims": dims, "degrees": degrees });
    report
}

pub fn cmd_triple(file: &std::path::Path, classes: [&String; 3]) -> Report {
    let (report, h) = match load(Report::new("triple", file_inputs(file, &classes)), file) {
        Ok(x) => x,
        Err(r) => return r,
    };
    let (mut report, s) = match parse_classes(report, &h, &classes) {
        Ok(x) => x,
        Err(r) => return r,
    };
    match triple_bracket(&h, &s[0], &s[1], &s[2]) {
        Ok(t) => {
            report.result = json!({
                "degree": t.degree,
                "value": coset(&h, t.degree, &t.value),
                "contains_zero": t.contains_zero(),
                "strictly_zero": t.strictly_zero,
                "witness": { "a01": chain(&h, &t.witness.0), "a12": chain(&h, &t.witness.1) },
            });
            report
        }
        Err(e) => refuse(report, e),
    }
}

pub fn cmd_coindet(file: &std::path::Path, classes: [&String; 4]) -> Report {
    let (report, h) = match load(Report::new("coindet", file_inputs(file, &classes)), file) {
        Ok(x) => x,
        Err(r) => return r,
    };
    let (mut report, s) = match parse_classes(report, &h, &classes) {
        Ok(x) => x,
        Err(r) => return r,
    };
    match massey::coindeterminacy(&h, &s[0], &s[1], &s[2], &s[3]).and_then(|c| coindet_value(&h, &c)) {
        Ok(v) => {
            report.result = v;
            report
        }
        Err(e) => refuse(report, e),
    }
}

pub fn cmd_fourfold(file: &std::path::Path, classes: [&String; 4], limit: usize) -> Report {
    let mut inputs = file_inputs(file, &classes);
    inputs["enumerate_limit"] = json!(limit);
    let (report, h) = match load(Report::new("fourfold", inputs), file) {
        Ok(x) => x,
        Err(r) => return r,
    };
    let (mut report, s) = match parse_classes(report, &h, &classes) {
        Ok(x) => x,
        Err(r) => return r,
    };
    let coindet = match massey::coindeterminacy(&h, &s[0], &s[1], &s[2], &s[3]).and_then(|c| {
        let v = coindet_value(&h, &c)?;
        Ok((c, v))
    }) {
        Ok(x) => x,
        Err(e) => return refuse(report, e),
    };
    if !coindet.0.contains_zero {
        report.result = json!({ "defined": false, "coindeterminacy": coindet.1 });
        let e = MasseyError::FourfoldUndefined {
            coset: massey::format_coset(&h, &coindet.0),
        };
        return refuse(report, e);
    }
    match fourfold_bracket(&h, &s[0], &s[1], &s[2], &s[3], limit) {
        Ok(f) => {
            let values = f.values();
            let zero = crate::gf2::Gf2Vector::zeros(h.dim(f.degree).unwrap_or(0));
            let cosets: Vec<String> = f.cosets.iter().map(|c| class_text(&h, f.degree, c)).collect();
            report.result = json!({
                "defined": true,
                "coindeterminacy": coindet.1,
                "degree": f.degree,
                "representative": class_text(&h, f.degree, &f.representative),
                "linear_part": subspace(&h, f.degree, &f.linear_part),
                "free_parameters": f.free_parameters,
                "enumeration_truncated": f.enumeration_truncated,
                "cosets": cosets,
                "value_count": values.as_ref().map(|v| v.len()),
                "is_coset": f.is_coset(),
                "contains_zero": f.contains(&zero).ok().flatten(),
                "witness": defining(&h, &f.witness),
            });
            report
        }
        Err(e) => refuse(report, e),
    }
}

pub fn cmd_random_check(count: usize, seed: u64, max_gens: usize, max_degree: u32) -> Report {
    let inputs = json!({ "count": count, "seed": seed, "max_gens": max_gens, "max_degree": max_degree });
    let mut report = Report::new("random-check", inputs);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tallies = [0usize; 6];
    let mut mismatches = Vec::new();
    for _ in 0..count {
        let instance = random_instance(rng.gen(), max_gens, max_degree);
        let check = match check_instance(&instance) {
            Ok(c) => c,
            Err(e) => {
                mismatches.push(json!({
                    "seed": instance.seed,
                    "presentation": instance.presentation.to_string(),
                    "inputs": instance.inputs,
                    "problems": [e.to_string()],
                }));
                continue;
            }
        };
        tallies[0] += check.oracle_completed as usize;
        tallies[1] += check.hypotheses_hold as usize;
        tallies[2] += (check.fast_defined == Some(true)) as usize;
        tallies[3] += (check.fast_defined == Some(false)) as usize;
        tallies[4] += (check.half_strict == Some(true)) as usize;
        tallies[5] += (check.coset_law == Some(true)) as usize;
        if !check.passed() {
            mismatches.push(json!({
                "seed": instance.seed,
                "presentation": instance.presentation.to_string(),
                "inputs": instance.inputs,
                "problems": check.mismatches,
            }));
        }
    }
    let found = mismatches.len();
    report.result = json!({
        "instances": count,
        "oracle_completed": tallies[0],
        "hypotheses_hold": tallies[1],
        "defined": tallies[2],
        "undefined": tallies[3],
        "half_strict": tallies[4],
        "coset_law_checked": tallies[5],
        "mismatch_count": found,
        "mismatches": mismatches,
    });
    if found == 0 {
        report
    } else {
        report.fail(Status::Refused, "mismatch-found", format!("{found} instance(s) disagree"))
    }
}
