//! The `rcvf` command line: every oracle and verifier of `rcvf-core` behind a
//! JSON-speaking subcommand.
//!
//! Exit codes: 0 verified / consistent / no counterexample, 1 falsified or
//! rejected (or no conclusion reached), 2 usage or internal error.

use std::cmp::Ordering;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value as Json};

use rcvf_core::certificates::{
    check_general_characterization, check_nonneg_certificate, find_negative_point, generate_ball_certificate_report,
    CharacterizationVerdict, GenerationBudget, GenerationOutcome,
};
use rcvf_core::field::set_default_precision;
use rcvf_core::integrality::{gauss_verdict, pointwise_integral_oracle, to_polydisc};
use rcvf_core::json::{self as cj, AnyCertificateJson, CertificateJson, SetJson};
use rcvf_core::syntax::{parse_expression, parse_field_element, parse_polynomial, parse_rational_function, Parsed};
use rcvf_core::{Error, FieldElement, IntegralityVerdict, Polynomial, SampleConfig, SetDescriptor};

pub mod selftest;

#[derive(Parser, Debug)]
#[command(name = "rcvf", version, about = "Oracles and certificates over a real closed valued field")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// `ball:n` or `affine:FILE.json`
    #[arg(long, global = true)]
    pub set: Option<String>,
    /// Orders of eps kept past the leading term by inversion and square roots
    #[arg(long, global = true)]
    pub trunc: Option<i64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Indented human-readable output instead of one-line JSON
    #[arg(long, global = true)]
    pub pretty: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Value of an expression, optionally at a point
    Eval(PointArgs),
    /// Valuation of an expression's value
    Val(PointArgs),
    /// Residue of an expression's value
    Res(PointArgs),
    /// Order comparison of two constants
    Cmp { a: String, b: String },
    /// Gauss valuation on the unit polydisc (after pullback for affine sets)
    Gauss {
        #[arg(long)]
        p: String,
    },
    /// Gauss criterion and pointwise oracle side by side
    Integral {
        #[arg(long)]
        h: String,
    },
    /// Non-negativity: falsify, generate a certificate, or probe 1/(1+c^2 p)
    Psd(PsdArgs),
    #[command(subcommand)]
    Cert(CertCommand),
    /// Built-in checks of the documented examples
    Selftest,
}

#[derive(Args, Debug)]
pub struct PointArgs {
    pub expr: String,
    /// `x=value`, repeatable or comma separated
    #[arg(long)]
    pub at: Vec<String>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "mode")]
pub struct PsdMode {
    #[arg(long)]
    pub generate: bool,
    #[arg(long)]
    pub falsify: bool,
    #[arg(long)]
    pub probe41: bool,
}

#[derive(Args, Debug)]
pub struct PsdArgs {
    #[arg(long)]
    pub p: String,
    #[command(flatten)]
    pub mode: PsdMode,
}

#[derive(Subcommand, Debug)]
pub enum CertCommand {
    /// Check a certificate document
    Verify { file: PathBuf },
    /// Search for a certificate and print it as a document
    Find {
        #[arg(long)]
        p: String,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Reply {
    code: i32,
    body: Json,
}

fn reply(code: i32, body: Json) -> Result<Reply, Error> {
    Ok(Reply { code, body })
}

/// Runs `rcvf` with `args` (program name first).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                return Outcome { code, stdout: text, stderr: String::new() };
            }
            let first: Vec<&str> = text.lines().take_while(|l| !l.trim().is_empty()).map(str::trim).collect();
            let body = json!({"error": format!("usage: {}", first.join(" ").trim_start_matches("error: "))});
            return Outcome { code, stdout: format!("{body}\n"), stderr: text };
        }
    };
    let pretty = cli.global.pretty;
    match dispatch(&cli) {
        Ok(r) => Outcome { code: r.code, stdout: render(&r.body, pretty), stderr: String::new() },
        Err(e) => {
            let body = error_json(&e);
            Outcome { code: 2, stdout: render(&body, pretty), stderr: format!("error: {e}\n") }
        }
    }
}

fn error_json(e: &Error) -> Json {
    match e {
        Error::Parse { offset, expected } => json!({"error": e.to_string(), "offset": offset, "expected": expected}),
        _ => json!({"error": e.to_string()}),
    }
}

fn render(body: &Json, pretty: bool) -> String {
    if pretty {
        let mut out = String::new();
        pretty_into(&mut out, body, 0);
        out
    } else {
        format!("{body}\n")
    }
}

fn pretty_into(out: &mut String, v: &Json, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Json::Object(m) => {
            for (k, x) in m {
                match x {
                    Json::Object(_) | Json::Array(_) if !is_flat(x) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        pretty_into(out, x, indent + 1);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar_text(x))),
                }
            }
        }
        Json::Array(xs) => {
            for x in xs {
                if is_flat(x) {
                    out.push_str(&format!("{pad}- {}\n", scalar_text(x)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    pretty_into(out, x, indent + 1);
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar_text(v))),
    }
}

fn is_flat(v: &Json) -> bool {
    match v {
        Json::Array(xs) => xs.iter().all(|x| !matches!(x, Json::Array(_) | Json::Object(_))),
        Json::Object(m) => m.is_empty(),
        _ => true,
    }
}

fn scalar_text(v: &Json) -> String {
    match v {
        Json::String(s) => s.clone(),
        Json::Array(xs) => format!("[{}]", xs.iter().map(scalar_text).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn dispatch(cli: &Cli) -> Result<Reply, Error> {
    let g = &cli.global;
    if let Some(n) = g.trunc {
        if n < 1 {
            return Err(Error::Invalid("--trunc must be at least 1".into()));
        }
        set_default_precision(n);
    }
    match &cli.command {
        Command::Eval(a) => {
            let v = evaluate(a)?;
            reply(0, json!({"value": v.to_string()}))
        }
        Command::Val(a) => {
            let v = evaluate(a)?;
            reply(0, json!({"valuation": v.valuation()?.to_string()}))
        }
        Command::Res(a) => {
            let v = evaluate(a)?;
            if v.is_integral()? {
                reply(0, json!({"residue": rcvf_core::field::fmt_rational(&v.residue()?), "integral": true}))
            } else {
                reply(1, json!({"residue": null, "integral": false, "valuation": v.valuation()?.to_string()}))
            }
        }
        Command::Cmp { a, b } => {
            let ord = parse_field_element(a)?.compare(&parse_field_element(b)?)?;
            let s = match ord {
                Ordering::Less => "<",
                Ordering::Equal => "=",
                Ordering::Greater => ">",
            };
            reply(0, json!({"cmp": s}))
        }
        Command::Gauss { p } => gauss(g, p),
        Command::Integral { h } => integral(g, h),
        Command::Psd(a) => psd(g, a),
        Command::Cert(CertCommand::Verify { file }) => verify(file),
        Command::Cert(CertCommand::Find { p }) => find(g, p),
        Command::Selftest => {
            let checks = selftest::run_checks(require_seed(g).unwrap_or(0));
            let ok = checks.iter().all(|c| c.ok);
            let list: Vec<Json> = checks.iter().map(|c| json!({"name": c.name, "ok": c.ok, "detail": c.detail})).collect();
            reply(if ok { 0 } else { 1 }, json!({"checks": list, "ok": ok}))
        }
    }
}

fn require_seed(g: &Global) -> Result<u64, Error> {
    g.seed.ok_or_else(|| Error::Invalid("this command is randomized and needs --seed".into()))
}

fn sample_config(g: &Global, default_samples: usize) -> Result<SampleConfig, Error> {
    Ok(SampleConfig::with_seed(require_seed(g)?).samples(g.samples.unwrap_or(default_samples)))
}

/// `x=1,y=eps` style assignments.
fn assignments(at: &[String]) -> Result<Vec<(String, FieldElement)>, Error> {
    let mut out: Vec<(String, FieldElement)> = Vec::new();
    for part in at.iter().flat_map(|s| s.split(',')) {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Invalid(format!("expected name=value, got `{part}`")))?;
        let name = name.trim().to_string();
        if out.iter().any(|(n, _)| *n == name) {
            return Err(Error::Invalid(format!("`{name}` assigned twice")));
        }
        out.push((name, parse_field_element(value)?));
    }
    Ok(out)
}

fn evaluate(a: &PointArgs) -> Result<FieldElement, Error> {
    let point = assignments(&a.at)?;
    match parse_expression(&a.expr)? {
        Parsed::Scalar(c) => Ok(c),
        other => {
            let f = other.into_rational_function();
            let names: Vec<String> = point.iter().map(|(n, _)| n.clone()).collect();
            if let Some(v) = f.vars().iter().find(|v| !names.contains(v)) {
                return Err(Error::Invalid(format!("no value given for `{v}`")));
            }
            let values: Vec<FieldElement> = point.into_iter().map(|(_, v)| v).collect();
            f.eval_named(&names, &values)
        }
    }
}

/// The `--set` flag; without it, the unit polydisc over `used`.
fn resolve_set(g: &Global, used: &[String]) -> Result<SetDescriptor, Error> {
    let Some(text) = &g.set else {
        return Ok(SetDescriptor::unit_polydisc(&rcvf_core::json::choose_vars(used.len(), None, used)?));
    };
    let doc = if let Some(n) = text.strip_prefix("ball:") {
        let n: usize = n.parse().map_err(|_| Error::Invalid(format!("bad ball dimension in `{text}`")))?;
        SetJson::ball(n)
    } else if let Some(path) = text.strip_prefix("affine:") {
        let body = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{path}: {e}")))?;
        let doc: SetJson = cj::from_str(&body)?;
        if doc.kind != "affine" {
            return Err(Error::Invalid(format!("{path} does not describe an affine set")));
        }
        doc
    } else {
        return Err(Error::Invalid(format!("--set expects ball:n or affine:FILE, got `{text}`")));
    };
    let used = Polynomial::var_union(used, &doc.strict_vars()?);
    doc.to_set(&used)
}

fn point_json(set: &SetDescriptor, point: &[FieldElement]) -> Json {
    let mut m = Map::new();
    for (v, x) in set.vars().iter().zip(point) {
        m.insert(v.clone(), Json::String(x.to_string()));
    }
    Json::Object(m)
}

fn set_json(set: &SetDescriptor) -> Json {
    serde_json::to_value(SetJson::from_set(set)).expect("serializable")
}

fn gauss(g: &Global, p: &str) -> Result<Reply, Error> {
    let f = parse_rational_function(p)?;
    let set = resolve_set(g, &f.vars())?;
    let pulled = to_polydisc(&f, &set)?;
    reply(0, json!({"gauss": pulled.gauss_valuation()?.to_string(), "set": set_json(&set)}))
}

fn oracle_json(set: &SetDescriptor, v: &IntegralityVerdict) -> Json {
    match v {
        IntegralityVerdict::CounterexampleFound { point, value } => json!({
            "verdict": "counterexample",
            "point": point_json(set, point),
            "value": value.to_string(),
            "valuation": value.valuation().map(|x| x.to_string()).unwrap_or_else(|e| e.to_string()),
        }),
        IntegralityVerdict::NoCounterexampleFound { samples, skipped } => {
            json!({"verdict": "no-counterexample", "samples": samples, "skipped": skipped})
        }
        IntegralityVerdict::IntegralByGauss => json!({"verdict": "integral-by-gauss"}),
        IntegralityVerdict::NotIntegralByGauss { gap } => json!({"verdict": "not-integral-by-gauss", "gap": gap.to_string()}),
    }
}

fn integral(g: &Global, h: &str) -> Result<Reply, Error> {
    let f = parse_rational_function(h)?;
    let set = resolve_set(g, &f.vars())?;
    let config = sample_config(g, 2000)?;
    let (gauss_ok, gauss_json) = match gauss_verdict(&f, &set) {
        Ok(v) => (v.integral, json!({"integral": v.integral, "gap": v.gap.to_string()})),
        Err(Error::UnsupportedSet(reason)) => (true, json!({"integral": null, "reason": reason})),
        Err(e) => return Err(e),
    };
    let verdict = pointwise_integral_oracle(&f, &set, &config);
    let pointwise_ok = matches!(verdict, IntegralityVerdict::NoCounterexampleFound { .. });
    let body = json!({
        "h": f.to_string(),
        "set": set_json(&set),
        "seed": config.seed,
        "gauss": gauss_json,
        "pointwise": oracle_json(&set, &verdict),
        "divergent": gauss_ok != pointwise_ok,
    });
    reply(if gauss_ok && pointwise_ok { 0 } else { 1 }, body)
}

fn budget(g: &Global) -> Result<GenerationBudget, Error> {
    let mut b = GenerationBudget::default();
    b.falsifier = sample_config(g, b.falsifier.samples)?;
    Ok(b)
}

fn generation_json(p: &Polynomial, set: &SetDescriptor, g: &Global) -> Result<(i32, Json, Option<Json>), Error> {
    let report = generate_ball_certificate_report(p, set, &budget(g)?)?;
    let gauss = report.gauss.map(|v| v.to_string());
    let doubled = report.gauss.map(|v| v.in_double_group());
    let head = |outcome: &str| {
        let mut m = Map::new();
        m.insert("outcome".into(), json!(outcome));
        m.insert("gauss".into(), json!(gauss));
        m.insert("gauss_in_double_group".into(), json!(doubled));
        m.insert("layers".into(), json!(report.layers));
        m
    };
    Ok(match report.outcome {
        GenerationOutcome::Certificate(c) => {
            let doc = serde_json::to_value(CertificateJson::new(p, set, &c)).expect("serializable");
            let mut m = head("certificate");
            m.insert("certificate".into(), doc.clone());
            (0, Json::Object(m), Some(doc))
        }
        GenerationOutcome::NegativityWitness(x) => {
            let mut m = head("negativity-witness");
            m.insert("witness".into(), point_json(set, &x));
            m.insert("value".into(), json!(p.embed(set.vars())?.eval_named(set.vars(), &x)?.to_string()));
            (1, Json::Object(m), None)
        }
        GenerationOutcome::CandidateWithoutWitness { r, m: mult, h, oracle } => {
            let mut m = head("candidate-without-witness");
            m.insert("r".into(), json!(r.summands().iter().map(|s| s.to_string()).collect::<Vec<_>>()));
            m.insert("m".into(), json!(mult.to_string()));
            m.insert("h".into(), json!({"num": h.num().to_string(), "den": h.den().to_string()}));
            m.insert("oracle".into(), oracle_json(set, &oracle));
            (1, Json::Object(m), None)
        }
        GenerationOutcome::Unknown(reason) => {
            let mut m = head("unknown");
            m.insert("reason".into(), json!(reason));
            (1, Json::Object(m), None)
        }
    })
}

fn psd(g: &Global, a: &PsdArgs) -> Result<Reply, Error> {
    let p = parse_polynomial(&a.p)?;
    let set = resolve_set(g, &p.used_vars())?;
    if a.mode.falsify {
        let config = sample_config(g, 2000)?;
        return match find_negative_point(&p, &set, &config)? {
            Some(x) => {
                let value = p.embed(set.vars())?.eval_named(set.vars(), &x)?;
                reply(1, json!({"verdict": "negative", "witness": point_json(&set, &x), "value": value.to_string()}))
            }
            None => reply(0, json!({"verdict": "no-counterexample", "samples": config.samples})),
        };
    }
    if a.mode.generate {
        let (code, body, _) = generation_json(&p, &set, g)?;
        return reply(code, body);
    }
    let config = sample_config(g, 500)?;
    let r = check_general_characterization(&p, &set, &config)?;
    let mut body = Map::new();
    body.insert("samples".into(), json!(r.samples));
    body.insert("c_values".into(), json!(r.c_values));
    body.insert("pairs_checked".into(), json!(r.pairs_checked));
    body.insert("coherent".into(), json!(r.coherent()));
    let code = match &r.verdict {
        CharacterizationVerdict::ConsistentNonneg => {
            body.insert("verdict".into(), json!("consistent-nonneg"));
            0
        }
        CharacterizationVerdict::NegativityWitness { point, value, c, probe, valuation } => {
            body.insert("verdict".into(), json!("negativity-witness"));
            body.insert("point".into(), point_json(&set, point));
            body.insert("value".into(), json!(value.to_string()));
            body.insert("c".into(), json!(c.to_string()));
            body.insert("probe".into(), point_json(&set, probe));
            body.insert("valuation".into(), json!(valuation.map_or("pole".to_string(), |v| v.to_string())));
            1
        }
        CharacterizationVerdict::Obstruction { point, value, reason } => {
            body.insert("verdict".into(), json!("obstruction"));
            body.insert("point".into(), point_json(&set, point));
            body.insert("value".into(), json!(value.to_string()));
            body.insert("reason".into(), json!(reason));
            1
        }
        CharacterizationVerdict::Incoherent { point, c, valuation } => {
            body.insert("verdict".into(), json!("incoherent"));
            body.insert("point".into(), point_json(&set, point));
            body.insert("c".into(), json!(c.to_string()));
            body.insert("valuation".into(), json!(valuation.to_string()));
            1
        }
    };
    reply(code, Json::Object(body))
}

fn find(g: &Global, p: &str) -> Result<Reply, Error> {
    let p = parse_polynomial(p)?;
    let set = resolve_set(g, &p.used_vars())?;
    let (code, body, doc) = generation_json(&p, &set, g)?;
    reply(code, doc.unwrap_or(body))
}

fn verify(file: &PathBuf) -> Result<Reply, Error> {
    let text = std::fs::read_to_string(file).map_err(|e| Error::Invalid(format!("{}: {e}", file.display())))?;
    match cj::from_str::<AnyCertificateJson>(&text)? {
        AnyCertificateJson::Nonneg(doc) => {
            let (p, set, cert) = doc.decode()?;
            match check_nonneg_certificate(&p, &cert, &set) {
                Ok(()) => reply(0, json!({"kind": "nonneg", "verified": true})),
                Err(r) => reply(1, json!({"kind": "nonneg", "verified": false, "reason": r.code(), "detail": r.to_string()})),
            }
        }
        AnyCertificateJson::Dickmann(doc) => {
            let (p, cert) = doc.decode()?;
            match cert.violation(&p)? {
                None => reply(0, json!({"kind": "dickmann", "verified": true})),
                Some(why) => reply(1, json!({"kind": "dickmann", "verified": false, "reason": "rejected", "detail": why})),
            }
        }
    }
}
