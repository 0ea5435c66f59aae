//! The `quasilattice` command line.
//!
//! Every run writes its artifacts to the output directory and embeds the
//! parsed arguments in each JSON report, so a report can be replayed.
//! Exit codes: 0 success, 1 a certificate failed, 2 bad configuration,
//! 3 generation failed (including uncoverable truncations).

mod args;

pub use args::*;

use std::env;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;
use serde_json::{json, Value};

use crate::arith::{parse_rational, rat, Rational};
use crate::cutproject::{
    generate_model_set, meyer_check, pisot_entry_violations, pullback_containment_check, svg_ticks, write_csv,
    ApproxRingScheme, CutProjectError, CutProjectScheme, ModelSet, PAdicWindowScheme, PisotMatrixScheme,
    QuadraticScheme, Window,
};
use crate::euler::{
    associativity_sample, cocycle_sample, defect_scan, euler_cocycle_with_residual, kernel_delta, rotation_pi,
    symmetric_core, EulerError, TwistedExtension,
};
use crate::group::{
    commensurable, covering_certificate, delone_check, is_maximal_free, maximal_free_set, verify_approximate_subgroup,
    Ambient, GroupError, Integers, LineAmbient, PointSet, RationalLine, RealQuadratic, ZpAdic, ZpReal,
};
use crate::quasi::{
    approximate_kernel, brooks_value, empirical_defect, free_ball, homogenize_estimate, in_brooks_a,
    nearest_integer_sample, BrooksQm, ExponentSum, FreeGroup, FreeWord, QuasiError, Quasimorphism,
};

pub const OUT_DIR_ENV: &str = "QUASILATTICE_OUT_DIR";

pub const EXIT_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_GENERATION: i32 = 3;

/// An error that ends the run with a given exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Self { code: EXIT_CONFIG, message: message.into() }
    }

    fn generation(message: impl Into<String>) -> Self {
        Self { code: EXIT_GENERATION, message: message.into() }
    }
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        let code = match e {
            GroupError::NotSymmetric { .. } | GroupError::NotCovered { .. } => EXIT_FAILED,
            GroupError::Parse(_) | GroupError::AmbientMismatch { .. } | GroupError::ContainsIdentity => EXIT_CONFIG,
            GroupError::Uncoverable { .. }
            | GroupError::Empty
            | GroupError::TooFewPoints(_)
            | GroupError::Operation(_) => EXIT_GENERATION,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<CutProjectError> for Failure {
    fn from(e: CutProjectError) -> Self {
        match e {
            CutProjectError::Group(g) => g.into(),
            other => Self::config(other.to_string()),
        }
    }
}

impl From<QuasiError> for Failure {
    fn from(e: QuasiError) -> Self {
        match e {
            QuasiError::Group(g) => g.into(),
            QuasiError::EmptyBall => Self::generation(e.to_string()),
            other => Self::config(other.to_string()),
        }
    }
}

impl From<EulerError> for Failure {
    fn from(e: EulerError) -> Self {
        match e {
            EulerError::Group(g) => g.into(),
            EulerError::NotUnimodular(_) | EulerError::MixedPrimes | EulerError::Arith(_) => {
                Self::config(e.to_string())
            }
            _ => Self::generation(e.to_string()),
        }
    }
}

/// What a finished command reports back: the exit code and a one-line
/// summary for stdout.
struct Outcome {
    ok: bool,
    summary: String,
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I: IntoIterator<Item = OsString>>(argv: I) -> i32 {
    let argv = match expand_config(argv.into_iter().collect()) {
        Ok(a) => a,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return f.code;
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(o) => {
            println!("{}", o.summary);
            if o.ok {
                0
            } else {
                EXIT_FAILED
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

/// Replaces `--config FILE` by the flags it contains. Keys are flag names
/// (`window_exp` and `window-exp` both work); `command` holds the
/// subcommand, e.g. `"quasi brooks"`. Flags also given on the command line
/// take precedence over the file.
pub fn expand_config(argv: Vec<OsString>) -> Result<Vec<OsString>, Failure> {
    let Some(i) = argv.iter().position(|a| a == "--config") else {
        return Ok(argv);
    };
    let path = argv.get(i + 1).ok_or_else(|| Failure::config("--config needs a file"))?;
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::config(format!("cannot read {}: {e}", Path::new(path).display())))?;
    let table: toml::Table = text.parse().map_err(|e| Failure::config(format!("bad config: {e}")))?;

    let rest: Vec<OsString> = argv[1..i].iter().chain(argv.iter().skip(i + 2)).cloned().collect();
    let given: Vec<String> = rest
        .iter()
        .filter_map(|a| a.to_str())
        .filter(|a| a.starts_with("--"))
        .map(|a| a.split('=').next().unwrap_or(a).to_string())
        .collect();

    let mut out = vec![argv[0].clone()];
    if let Some(cmd) = table.get("command") {
        let cmd = cmd.as_str().ok_or_else(|| Failure::config("`command` must be a string"))?;
        out.extend(cmd.split_whitespace().map(OsString::from));
    }
    for (key, value) in table.iter().filter(|(k, _)| *k != "command") {
        let flag = format!("--{}", key.replace('_', "-"));
        if given.contains(&flag) {
            continue;
        }
        match value {
            toml::Value::Boolean(true) => out.push(flag.into()),
            toml::Value::Boolean(false) => {}
            toml::Value::String(s) => out.extend([flag.into(), s.into()]),
            toml::Value::Integer(n) => out.extend([flag.into(), n.to_string().into()]),
            _ => {
                return Err(Failure::config(format!(
                    "config key `{key}`: use a string, integer or boolean (write exact numbers as strings)"
                )))
            }
        }
    }
    out.extend(rest);
    Ok(out)
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    let out = Output::new(cli)?;
    match &cli.command {
        Command::Modelset(a) => cmd_modelset(&out, a),
        Command::Verify(a) => cmd_verify(&out, a),
        Command::Quasi(QuasiCommand::Brooks(a)) => cmd_brooks(&out, a),
        Command::Quasi(QuasiCommand::Nearint(a)) => cmd_nearint(&out, a),
        Command::Quasi(QuasiCommand::Homogenize(a)) => cmd_homogenize(&out, a),
        Command::Euler(a) => cmd_euler(&out, a),
        Command::Freeset(a) => cmd_freeset(&out, a),
    }
}

/// Output directory plus the config echoed into every report.
struct Output {
    dir: PathBuf,
    config: Value,
}

impl Output {
    fn new(cli: &Cli) -> Result<Self, Failure> {
        let dir = cli
            .out_dir
            .clone()
            .or_else(|| env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        fs::create_dir_all(&dir).map_err(|e| Failure::config(format!("cannot create {}: {e}", dir.display())))?;
        let config = serde_json::to_value(&cli.command).expect("arguments serialize");
        Ok(Self { dir, config })
    }

    fn write(&self, file: &str, contents: &[u8]) -> Result<PathBuf, Failure> {
        let path = self.dir.join(file);
        fs::write(&path, contents).map_err(|e| Failure::generation(format!("cannot write {}: {e}", path.display())))?;
        Ok(path)
    }

    fn report(&self, name: &str, ok: bool, result: Value) -> Result<PathBuf, Failure> {
        let doc = json!({
            "tool": "quasilattice",
            "version": env!("CARGO_PKG_VERSION"),
            "config": self.config,
            "ok": ok,
            "result": result,
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("json");
        text.push('\n');
        self.write(&format!("{name}.json"), text.as_bytes())
    }
}

fn exact_arg(flag: &str, value: &Option<String>) -> Result<Rational, Failure> {
    let s = value.as_ref().ok_or_else(|| Failure::config(format!("missing --{flag}")))?;
    parse_rational(s).map_err(|e| Failure::config(format!("--{flag}: {e}")))
}

fn required<T: Copy>(flag: &str, value: Option<T>) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::config(format!("missing --{flag}")))
}

fn parse_word(flag: &str, s: &str) -> Result<FreeWord, Failure> {
    s.parse().map_err(|e: GroupError| Failure::config(format!("--{flag}: {e}")))
}

enum AnyScheme {
    Quadratic(QuadraticScheme),
    Zp(PAdicWindowScheme),
    ApproxRing(ApproxRingScheme),
    Pisot(PisotMatrixScheme),
}

/// Builds the scheme and its range from the flags. The pisot scheme takes
/// its range from `--height`.
fn build_scheme(a: &SchemeArgs) -> Result<(AnyScheme, Rational), Failure> {
    let kind = required("scheme", a.scheme)?;
    Ok(match kind {
        SchemeKind::Fibonacci | SchemeKind::Quadratic => {
            let d = if kind == SchemeKind::Fibonacci { 5 } else { required("d", a.d)? };
            let radius = exact_arg("window", &a.window)?;
            let s = QuadraticScheme::new(d, Window::interval(radius))?;
            (AnyScheme::Quadratic(s), exact_arg("range", &a.range)?)
        }
        SchemeKind::Zp => {
            let s = PAdicWindowScheme::new(required("p", a.p)?, required("window-exp", a.window_exp)?)?;
            (AnyScheme::Zp(s), exact_arg("range", &a.range)?)
        }
        SchemeKind::ApproxRing => {
            let radius = match &a.window {
                Some(_) => exact_arg("window", &a.window)?,
                None => Rational::from_integer(1.into()),
            };
            let s = ApproxRingScheme::new(required("p", a.p)?, required("n", a.n)?, Window::interval(radius))?;
            (AnyScheme::ApproxRing(s), exact_arg("range", &a.range)?)
        }
        SchemeKind::Pisot => {
            let s = PisotMatrixScheme::new(required("d", a.d)?, exact_arg("eps", &a.eps)?)?;
            let h = required("height", a.height)?;
            (AnyScheme::Pisot(s), Rational::from_integer(h.into()))
        }
    })
}

fn cmd_modelset(out: &Output, a: &ModelsetArgs) -> Result<Outcome, Failure> {
    let (scheme, range) = build_scheme(&a.scheme)?;
    match scheme {
        AnyScheme::Quadratic(s) => {
            let m = generate_model_set(&s, &range)?;
            let rows = m.rows_ascending();
            emit_modelset(out, a, &m, &rows, a.svg)
        }
        AnyScheme::Zp(s) => {
            let m = generate_model_set(&s, &range)?;
            let rows = m.rows_ascending();
            emit_modelset(out, a, &m, &rows, a.svg)
        }
        AnyScheme::ApproxRing(s) => {
            let m = generate_model_set(&s, &range)?;
            let mut rows = m.rows();
            rows.sort_by(|x, y| x.2[0].total_cmp(&y.2[0]));
            emit_modelset(out, a, &m, &rows, false)
        }
        AnyScheme::Pisot(s) => {
            let m = generate_model_set(&s, &range)?;
            let rows = m.rows();
            let extra = json!({ "pisot_violations": pisot_entry_violations(&m).iter().map(ToString::to_string).collect::<Vec<_>>() });
            emit_modelset_with(out, a, &m, &rows, false, extra)
        }
    }
}

fn emit_modelset<S: CutProjectScheme>(
    out: &Output,
    a: &ModelsetArgs,
    m: &ModelSet<S>,
    rows: &[(String, String, Vec<f64>)],
    svg: bool,
) -> Result<Outcome, Failure> {
    emit_modelset_with(out, a, m, rows, svg, json!({}))
}

fn emit_modelset_with<S: CutProjectScheme>(
    out: &Output,
    a: &ModelsetArgs,
    m: &ModelSet<S>,
    rows: &[(String, String, Vec<f64>)],
    svg: bool,
    extra: Value,
) -> Result<Outcome, Failure> {
    if m.is_empty() {
        return Err(Failure::generation("the model set is empty"));
    }
    let dims = rows.first().map_or(1, |r| r.2.len());
    let names: Vec<String> = if dims == 1 {
        vec!["position".into()]
    } else if dims == 4 {
        ["m11", "m12", "m21", "m22"].map(String::from).to_vec()
    } else {
        (0..dims).map(|i| format!("c{i}")).collect()
    };
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut csv = Vec::new();
    write_csv(&mut csv, &names, rows).map_err(|e| Failure::generation(e.to_string()))?;
    out.write(&format!("{}.csv", a.name), &csv)?;

    let mut files = vec![format!("{}.csv", a.name)];
    let svg_written = svg && dims == 1;
    if svg_written {
        let positions: Vec<f64> = rows.iter().map(|r| r.2[0]).collect();
        out.write(&format!("{}.svg", a.name), svg_ticks(&positions).as_bytes())?;
        files.push(format!("{}.svg", a.name));
    }
    let violation = m.window_violation().map(ToString::to_string);
    let mut result = m.provenance_json();
    result["files"] = json!(files);
    result["svg_skipped"] = json!(svg && !svg_written);
    result["window_violation"] = json!(violation);
    if let (Value::Object(r), Value::Object(x)) = (&mut result, extra) {
        r.extend(x);
    }
    let ok = violation.is_none();
    out.report(&format!("{}.provenance", a.name), ok, result)?;
    Ok(Outcome { ok, summary: format!("{} points written to {}.csv", m.len(), a.name) })
}

enum AmbientKind {
    Integers,
    Rationals,
    Quadratic(i64),
    ZpReal(u64),
    ZpAdic(u64),
    Free,
    Twisted(u64),
}

fn header_ambient(text: &str) -> Option<&str> {
    text.lines()
        .filter_map(|l| l.trim().strip_prefix('#'))
        .find_map(|c| c.trim().strip_prefix("ambient:"))
        .map(str::trim)
}

fn parse_ambient(label: &str) -> Result<AmbientKind, Failure> {
    let num = |s: &str| s.parse::<u64>().map_err(|_| Failure::config(format!("unknown ambient {label:?}")));
    if label == "Z" {
        return Ok(AmbientKind::Integers);
    }
    if label == "Q" {
        return Ok(AmbientKind::Rationals);
    }
    if label == "F2" {
        return Ok(AmbientKind::Free);
    }
    if let Some(d) = label.strip_prefix("Q(sqrt(").and_then(|r| r.strip_suffix("))")) {
        return d
            .parse()
            .map(AmbientKind::Quadratic)
            .map_err(|_| Failure::config(format!("unknown ambient {label:?}")));
    }
    if let Some(rest) = label.strip_prefix("SL2(Z[1/") {
        let p = rest.split(']').next().unwrap_or("");
        return num(p).map(AmbientKind::Twisted);
    }
    if let Some(rest) = label.strip_prefix("Z[1/") {
        if let Some((p, tail)) = rest.split_once("] in ") {
            let p = num(p)?;
            return match tail {
                "R" => Ok(AmbientKind::ZpReal(p)),
                t if t == format!("Q_{p}") => Ok(AmbientKind::ZpAdic(p)),
                _ => Err(Failure::config(format!("unknown ambient {label:?}"))),
            };
        }
    }
    Err(Failure::config(format!("unknown ambient {label:?}")))
}

/// Binds `$g` to the ambient named by `$label` and evaluates `$body`.
macro_rules! with_ambient {
    ($label:expr, $g:ident => $body:expr) => {
        match parse_ambient($label)? {
            AmbientKind::Integers => {
                let $g = Integers;
                $body
            }
            AmbientKind::Rationals => {
                let $g = RationalLine;
                $body
            }
            AmbientKind::Quadratic(d) => {
                let $g = RealQuadratic::new(d).map_err(|e| Failure::config(e.to_string()))?;
                $body
            }
            AmbientKind::ZpReal(p) => {
                let $g = ZpReal::new(p).map_err(|e| Failure::config(e.to_string()))?;
                $body
            }
            AmbientKind::ZpAdic(p) => {
                let $g = ZpAdic::new(p).map_err(|e| Failure::config(e.to_string()))?;
                $body
            }
            AmbientKind::Free => {
                let $g = FreeGroup;
                $body
            }
            AmbientKind::Twisted(p) => {
                let $g = TwistedExtension::new(p)?;
                $body
            }
        }
    };
}

/// Like `with_ambient!` for the ambients on the real line.
macro_rules! with_line_ambient {
    ($label:expr, $g:ident => $body:expr) => {
        match parse_ambient($label)? {
            AmbientKind::Integers => {
                let $g = Integers;
                $body
            }
            AmbientKind::Rationals => {
                let $g = RationalLine;
                $body
            }
            AmbientKind::Quadratic(d) => {
                let $g = RealQuadratic::new(d).map_err(|e| Failure::config(e.to_string()))?;
                $body
            }
            AmbientKind::ZpReal(p) => {
                let $g = ZpReal::new(p).map_err(|e| Failure::config(e.to_string()))?;
                $body
            }
            _ => Err(Failure::config(format!("{} is not a subgroup of the real line", $label))),
        }
    };
}

fn read_set_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))
}

struct Verdict {
    ok: bool,
    witness: Option<String>,
    result: Value,
}

impl Verdict {
    fn passed(result: Value) -> Self {
        Self { ok: true, witness: None, result }
    }

    fn failed(witness: String, result: Value) -> Self {
        Self { ok: false, witness: Some(witness), result }
    }
}

fn cmd_verify(out: &Output, a: &VerifyArgs) -> Result<Outcome, Failure> {
    let verdict = match a.check {
        Check::Meyer => {
            let path = a.set.as_ref().ok_or_else(|| Failure::config("meyer needs --set"))?;
            let text = read_set_file(path)?;
            let (scheme, range) = build_scheme(&a.scheme)?;
            let region = region_or(a, &range)?;
            match scheme {
                AnyScheme::Quadratic(s) => meyer_verdict(&s, &range, &text, &region)?,
                AnyScheme::Zp(s) => meyer_verdict(&s, &range, &text, &region)?,
                AnyScheme::ApproxRing(s) => meyer_verdict(&s, &range, &text, &region)?,
                AnyScheme::Pisot(s) => meyer_verdict(&s, &range, &text, &region)?,
            }
        }
        Check::Pullback => {
            let (scheme, range) = build_scheme(&a.scheme)?;
            let region = region_or(a, &range)?;
            match scheme {
                AnyScheme::Quadratic(s) => pullback_verdict(&s, &region)?,
                AnyScheme::Zp(s) => pullback_verdict(&s, &region)?,
                AnyScheme::ApproxRing(s) => pullback_verdict(&s, &region)?,
                AnyScheme::Pisot(s) => pullback_verdict(&s, &region)?,
            }
        }
        _ => {
            let text = match (&a.set, a.int_range) {
                (Some(path), None) => read_set_file(path)?,
                (None, Some(n)) => {
                    let n = n as i64;
                    PointSet::new(&Integers, -n..=n, rat(n, 1)).to_text()
                }
                _ => return Err(Failure::config("give exactly one of --set and --int-range")),
            };
            let other = a.other.as_deref().map(read_set_file).transpose()?;
            let label = header_ambient(&text).ok_or_else(|| Failure::config("set file has no `# ambient:` header"))?;
            if let Some(o) = other.as_deref().and_then(header_ambient).filter(|o| *o != label) {
                return Err(GroupError::AmbientMismatch { left: label.to_string(), right: o.to_string() }.into());
            }
            if a.check == Check::Delone {
                with_line_ambient!(label, g => delone_verdict(&g, a, &text))?
            } else {
                with_ambient!(label, g => set_verdict(&g, a, &text, other.as_deref()))?
            }
        }
    };
    out.report(&a.name, verdict.ok, verdict.result)?;
    let summary = match &verdict.witness {
        None => format!("{:?}: ok", a.check),
        Some(w) => format!("{:?}: FAILED, witness {w}", a.check),
    };
    Ok(Outcome { ok: verdict.ok, summary })
}

fn region_or(a: &VerifyArgs, default: &Rational) -> Result<Rational, Failure> {
    match &a.region {
        Some(_) => exact_arg("region", &a.region),
        None => Ok(default.clone()),
    }
}

fn set_verdict<G: Ambient>(g: &G, a: &VerifyArgs, text: &str, other: Option<&str>) -> Result<Verdict, Failure> {
    let x = PointSet::parse_text(g, text)?;
    let other = other.map(|t| PointSet::parse_text(g, t)).transpose()?;
    let need_other = || other.as_ref().ok_or_else(|| Failure::config(format!("{:?} needs --other", a.check)));
    Ok(match a.check {
        Check::ApproxSubgroup => {
            let region = region_or(a, &(x.region() * rat(2, 1)))?;
            match verify_approximate_subgroup(g, &x, &region) {
                Ok(c) => Verdict::passed(json!({ "set_size": x.len(), "certificate": c.to_json() })),
                Err(GroupError::NotSymmetric { witness }) => {
                    Verdict::failed(witness.clone(), json!({ "set_size": x.len(), "not_symmetric": witness }))
                }
                Err(e) => return Err(e.into()),
            }
        }
        Check::Symmetry => match x.symmetry_witness(g)? {
            None => Verdict::passed(json!({ "set_size": x.len(), "symmetric": true })),
            Some(w) => Verdict::failed(w.clone(), json!({ "set_size": x.len(), "symmetric": false, "witness": w })),
        },
        Check::Cover => {
            let y = need_other()?;
            let region = region_or(a, y.region())?;
            let c = covering_certificate(g, &x, y, &region)?;
            Verdict::passed(json!({ "certificate": c.to_json() }))
        }
        Check::Commensurable => {
            let y = need_other()?;
            let region = region_or(a, x.region().min(y.region()))?;
            let c = commensurable(g, &x, y, &region)?;
            Verdict::passed(c.to_json())
        }
        Check::Delone | Check::Meyer | Check::Pullback => unreachable!("handled by the caller"),
    })
}

fn delone_verdict<G: LineAmbient>(g: &G, a: &VerifyArgs, text: &str) -> Result<Verdict, Failure> {
    let x = PointSet::parse_text(g, text)?;
    let interior = region_or(a, x.region())?;
    let r = delone_check(g, &x, &interior)?;
    Ok(Verdict::passed(r.to_json()))
}

fn meyer_verdict<S: CutProjectScheme>(
    scheme: &S,
    range: &Rational,
    text: &str,
    region: &Rational,
) -> Result<Verdict, Failure> {
    let s = generate_model_set(scheme, range)?;
    let m = PointSet::parse_text(&scheme.ambient(), text)?;
    let r = meyer_check(&m, &s, region)?;
    let result = json!({ "model_set": s.provenance_json(), "subset_size": m.len(), "meyer": r.to_json() });
    Ok(match (&r.subset_witness, &r.widest_anchor) {
        (Some(x), _) => Verdict::failed(format!("{x} is not in the model set"), result),
        (None, _) if r.is_meyer => Verdict::passed(result),
        (None, Some((y, f))) => Verdict::failed(format!("{y} needs translate {f} beyond reach {}", r.reach), result),
        (None, None) => Verdict::failed("no interior points".into(), result),
    })
}

fn pullback_verdict<S: CutProjectScheme>(scheme: &S, region: &Rational) -> Result<Verdict, Failure> {
    let r = pullback_containment_check(scheme, scheme.window(), region)?;
    let result = r.to_json();
    Ok(match &r.containment_witness {
        None => Verdict::passed(result),
        Some(z) => Verdict::failed(format!("{z} lies outside the pullback"), result),
    })
}

/// Largest ball radius for the exhaustive defect scan in `quasi brooks`.
const DEFECT_BALL_MAX: usize = 4;

fn cmd_brooks(out: &Output, a: &BrooksArgs) -> Result<Outcome, Failure> {
    let w = parse_word("w", &a.w)?;
    let q = BrooksQm::new(w.clone())?;
    let mut witness = Vec::new();
    for n in (-a.witness..=a.witness).filter(|&n| n != 0) {
        let g = FreeWord::x().pow(n).mul(&FreeWord::y());
        witness.push(json!({
            "n": n,
            "word": g.to_string(),
            "value": brooks_value(&w, &g)?,
            "in_A": in_brooks_a(&w, &g)?,
        }));
    }
    let defect_ball = free_ball(a.ball.min(DEFECT_BALL_MAX));
    let defect = empirical_defect(&FreeGroup, &q, &defect_ball)?;
    let mut result = json!({
        "word": w.to_string(),
        "order_witness": witness,
        "empirical_defect": { "ball_radius": a.ball.min(DEFECT_BALL_MAX), "value": defect.to_string() },
    });
    let mut summary = format!("brooks {w}: empirical defect {defect}");
    if a.kernel.is_some() {
        let bound = exact_arg("kernel", &a.kernel)?;
        let ball = free_ball(a.ball);
        let k = approximate_kernel(&q, &bound, &ball)?;
        let cert = verify_approximate_subgroup(&FreeGroup, &k, ball.region())?;
        summary = format!("{summary}; kernel of {} words, {} translates", k.len(), cert.len());
        result["kernel"] = json!({
            "bound": bound.to_string(),
            "ball_radius": a.ball,
            "ball_size": ball.len(),
            "size": k.len(),
            "certificate": cert.to_json(),
        });
    }
    out.report(&a.name, true, result)?;
    Ok(Outcome { ok: true, summary })
}

fn cmd_nearint(out: &Output, a: &NearintArgs) -> Result<Outcome, Failure> {
    let gamma = exact_arg("gamma", &Some(a.gamma.clone()))?;
    let s = nearest_integer_sample(&gamma, a.pairs, a.seed)?;
    let ok = s.violation.is_none();
    out.report(&a.name, ok, s.to_json())?;
    Ok(Outcome {
        ok,
        summary: format!("nearint gamma {gamma}: max |defect| {} over {} pairs", s.max_abs_defect(), s.pairs),
    })
}

fn cmd_homogenize(out: &Output, a: &HomogenizeArgs) -> Result<Outcome, Failure> {
    let g = parse_word("g", &a.g)?;
    let (name, h) = match a.q {
        QmKind::Brooks => {
            let q = BrooksQm::new(parse_word("w", &a.w)?)?;
            (Quasimorphism::<FreeGroup>::name(&q), homogenize_estimate(&FreeGroup, &q, &g, a.n)?)
        }
        QmKind::ExponentSumX => {
            let q = ExponentSum::x();
            (Quasimorphism::<FreeGroup>::name(&q), homogenize_estimate(&FreeGroup, &q, &g, a.n)?)
        }
        QmKind::ExponentSumY => {
            let q = ExponentSum::y();
            (Quasimorphism::<FreeGroup>::name(&q), homogenize_estimate(&FreeGroup, &q, &g, a.n)?)
        }
    };
    let result = json!({ "quasimorphism": name, "element": g.to_string(), "estimates": h.to_json() });
    out.report(&a.name, true, result)?;
    Ok(Outcome { ok: true, summary: format!("{name} at {g}: estimate {} at N = {}", h.value(), a.n) })
}

fn cmd_euler(out: &Output, a: &EulerArgs) -> Result<Outcome, Failure> {
    let sample = cocycle_sample(a.triples, a.seed)?;
    let (beta_pi, residual_pi) = euler_cocycle_with_residual(&rotation_pi(), &rotation_pi())?;
    let mut ok = sample.failures() == 0 && sample.beta_values().iter().all(|b| (0..=1).contains(b));
    let mut result = json!({
        "cocycle": sample.to_json(),
        "rotation_pi": { "beta": beta_pi, "residual": residual_pi },
    });
    out.write(&format!("{}-triples.txt", a.name), sample.per_triple_text().as_bytes())?;
    let mut summary = format!("{} triples, {} identity failures", a.triples, sample.failures());

    if a.ball > 0 {
        let ext = TwistedExtension::new(a.p)?;
        let ball = ext.ball(&ext.default_generators()?, a.ball)?;
        let scan = defect_scan(&ball)?;
        let assoc = associativity_sample(&ball, a.assoc, a.seed)?;
        ok &= scan.violation.is_none() && assoc.failure.is_none();
        summary = format!("{summary}; ball of {} elements, max |defect| {}", ball.len(), scan.max_abs);
        result["extension"] = json!({
            "p": a.p,
            "ball_radius": a.ball,
            "ball_size": ball.len(),
            "defect_scan": scan.to_json(),
            "associativity": {
                "triples": assoc.triples,
                "seed": assoc.seed,
                "failure": assoc.failure.map(|(u, v, w)| json!([u, v, w])),
            },
        });
        if a.kernel {
            let delta = kernel_delta(&ball);
            let core = symmetric_core(&delta)?;
            let cert = verify_approximate_subgroup(&ext, &core, core.region())?;
            result["extension"]["kernel"] = json!({
                "delta_size": delta.len(),
                "symmetric_core_size": core.len(),
                "certificate": cert.to_json(),
            });
        }
    }
    out.report(&a.name, ok, result)?;
    Ok(Outcome { ok, summary })
}

fn int_interval(s: &str) -> Result<PointSet<i64>, Failure> {
    let bad = || Failure::config(format!("--y-int expects lo:hi, got {s:?}"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let (lo, hi): (i64, i64) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
    Ok(PointSet::new(&Integers, lo..=hi, rat(lo.abs().max(hi.abs()), 1)))
}

fn int_list(s: &str) -> Result<PointSet<i64>, Failure> {
    let elems = s
        .split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| Failure::config(format!("--x-int expects comma-separated integers, got {s:?}")))?;
    let r = elems.iter().map(|e| e.abs()).max().unwrap_or(0);
    Ok(PointSet::new(&Integers, elems, rat(r, 1)))
}

fn cmd_freeset(out: &Output, a: &FreesetArgs) -> Result<Outcome, Failure> {
    let y_text = match (&a.y, &a.y_int) {
        (Some(p), None) => read_set_file(p)?,
        (None, Some(s)) => int_interval(s)?.to_text(),
        _ => return Err(Failure::config("give exactly one of --y and --y-int")),
    };
    let x_text = match (&a.x, &a.x_int) {
        (Some(p), None) => read_set_file(p)?,
        (None, Some(s)) => int_list(s)?.to_text(),
        _ => return Err(Failure::config("give exactly one of --x and --x-int")),
    };
    let label = header_ambient(&y_text).ok_or_else(|| Failure::config("Y has no `# ambient:` header"))?;
    let (result, b_text, size) = with_ambient!(label, g => freeset_result(&g, &y_text, &x_text))?;
    out.write(&format!("{}.txt", a.name), b_text.as_bytes())?;
    out.report(&a.name, true, result)?;
    Ok(Outcome { ok: true, summary: format!("maximal free subset of {size} elements written to {}.txt", a.name) })
}

fn freeset_result<G: Ambient>(g: &G, y_text: &str, x_text: &str) -> Result<(Value, String, usize), Failure> {
    let y = PointSet::parse_text(g, y_text)?;
    let x = PointSet::parse_text(g, x_text)?;
    let b = maximal_free_set(g, &y, &x)?;
    let maximal = is_maximal_free(g, &y, &b, &x)?;
    let result = json!({
        "y_size": y.len(),
        "x": x.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "free_set": b.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "size": b.len(),
        "maximal_checked": maximal,
    });
    Ok((result, b.to_text(), b.len()))
}
