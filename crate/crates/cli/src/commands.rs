//! Subcommand dispatch. [`run`] never touches the process's stdout or exit
//! status, so it can be driven from tests and bindings.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use orbicalc_core::mordell::{self, Sign};
use orbicalc_core::restrict::{self, Restriction};
use orbicalc_core::symdiff::{self, EnumerationLimits};
use orbicalc_core::{
    BaseMode, CurveOrbifold, Error, MorphismMode, Multiplicity, OrbifoldDivisor, OrbifoldP1Triple,
    Variant,
};
use serde_json::{json, Value};

use crate::diagnostic::Diagnostic;
use crate::document::{LookupError, SpecDocument};
use crate::parser::parse;

/// Environment variable overriding the symdiff enumeration limit.
pub const SYMDIFF_LIMIT_VAR: &str = "ORBICALC_SYMDIFF_LIMIT";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "orbicalc", version, about = "Exact calculus for geometric orbifold pairs")]
struct Cli {
    /// Spec file with the named declarations.
    #[arg(long, short, global = true)]
    file: Option<PathBuf>,
    /// Print a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Canonical degree, Kodaira dimension and specialness of a curve orbifold.
    Classify { name: String },
    /// Anticanonical degree of a plane arrangement pair.
    Fano { name: String },
    /// Expected dimension of rational curves of a given degree with divisible contacts.
    Familydim {
        name: String,
        #[arg(long)]
        degree: u64,
    },
    /// Orbifold base of a fibration.
    Base {
        name: String,
        #[arg(long, default_value = "inf")]
        mode: BaseMode,
    },
    /// Compares the two ways of computing the base of a composed fibration.
    Compose { name: String },
    /// Checks the orbifold morphism conditions.
    Morphism {
        name: String,
        #[arg(long, default_value = "inf")]
        mode: MorphismMode,
    },
    /// Restricts a plane arrangement to a parametrized curve.
    Restrict {
        name: String,
        #[arg(long)]
        against: String,
        #[arg(long, default_value = "Z")]
        variant: Variant,
    },
    /// Decides whether a parametrized curve is rational for both restrictions.
    Rational {
        name: String,
        #[arg(long)]
        against: String,
    },
    /// Non-classical rational points on (P^1 | (p,q,r)).
    MordellSearch {
        name: String,
        #[arg(long)]
        max_a: u64,
        #[arg(long)]
        max_b: u64,
        #[arg(long, default_value = "minus")]
        sign: Sign,
        #[arg(long, default_value_t = 1)]
        shards: u32,
    },
    /// Coprime solutions of a^p + b^r = c^q.
    MordellClassical {
        name: String,
        #[arg(long)]
        max: u64,
    },
    /// Counts p-full integers up to a limit.
    Pfull {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        limit: u64,
        #[arg(long)]
        density: bool,
    },
    /// Exhaustively checks the positive-floor lemma for one configuration.
    SymdiffCheck {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        /// Comma-separated multiplicities, one per coordinate.
        #[arg(long, value_delimiter = ',')]
        mults: Vec<Multiplicity>,
        /// How many lengths past the threshold to enumerate.
        #[arg(long, default_value_t = 1)]
        extra: u32,
    },
    /// Parses the spec file and lists its declarations.
    Check,
    /// Prints the spec file in canonical form.
    Fmt,
}

enum Failure {
    Usage(String),
    Parse(String, Vec<Diagnostic>),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<LookupError> for Failure {
    fn from(e: LookupError) -> Self {
        Failure::Domain(e.to_string())
    }
}

/// Report produced by one subcommand.
struct Report {
    text: String,
    json: Value,
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: rendered }
            } else {
                Outcome { code: 0, stdout: rendered, stderr: String::new() }
            };
        }
    };
    let json_mode = cli.json;
    match execute(cli) {
        Ok(report) => Outcome {
            code: 0,
            stdout: if json_mode { render_json(&report.json) } else { report.text },
            stderr: String::new(),
        },
        Err(failure) => failure_outcome(failure, json_mode),
    }
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn failure_outcome(failure: Failure, json_mode: bool) -> Outcome {
    let (code, kind, message, diags) = match failure {
        Failure::Usage(m) => (2, "usage", m, Vec::new()),
        Failure::Parse(path, d) => (2, "parse", format!("failed to parse {path}"), d.into_iter().map(|d| (path.clone(), d)).collect()),
        Failure::Domain(m) => (1, "domain", m, Vec::new()),
    };
    if json_mode {
        let diagnostics: Vec<Value> = diags
            .iter()
            .map(|(_, d)| {
                json!({
                    "severity": d.severity.to_string(),
                    "line": d.span.line,
                    "column": d.span.column,
                    "message": d.message,
                })
            })
            .collect();
        let v = json!({ "error": { "kind": kind, "message": message, "diagnostics": diagnostics } });
        return Outcome { code, stdout: render_json(&v), stderr: String::new() };
    }
    let mut stderr = String::new();
    if diags.is_empty() {
        writeln!(stderr, "error: {message}").unwrap();
    }
    for (path, d) in &diags {
        writeln!(stderr, "{path}:{d}").unwrap();
    }
    Outcome { code, stdout: String::new(), stderr }
}

fn load(file: &Option<PathBuf>) -> Result<SpecDocument, Failure> {
    let path = file
        .as_ref()
        .ok_or_else(|| Failure::Usage("this command needs --file <spec>".into()))?;
    let shown = path.display().to_string();
    let src = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {shown}: {e}")))?;
    parse(&src).map_err(|d| Failure::Parse(shown, d))
}

fn q(r: &BigRational) -> String {
    r.to_string()
}

fn marks_json(d: &OrbifoldDivisor) -> Value {
    Value::Array(
        d.iter()
            .map(|(l, m)| json!({ "label": l, "mult": m.to_string() }))
            .collect(),
    )
}

fn execute(cli: Cli) -> Result<Report, Failure> {
    let file = &cli.file;
    match cli.command {
        Command::Classify { name } => {
            let doc = load(file)?;
            let decl = doc.curve(&name)?;
            Ok(classify(&name, &decl.to_curve()))
        }
        Command::Fano { name } => {
            let doc = load(file)?;
            let pair = doc.plane(&name)?.to_pair()?;
            let ac = pair.anticanonical_degree();
            let components: Vec<Value> = pair
                .components()
                .iter()
                .map(|c| json!({ "label": c.label, "degree": c.degree, "mult": c.mult.to_string() }))
                .collect();
            Ok(Report {
                text: format!("anticanonical_degree={} fano={}\n", q(&ac), pair.is_fano()),
                json: json!({
                    "command": "fano",
                    "plane": name,
                    "components": components,
                    "anticanonical_degree": q(&ac),
                    "fano": pair.is_fano(),
                }),
            })
        }
        Command::Familydim { name, degree } => {
            let doc = load(file)?;
            let fd = doc.plane(&name)?.to_pair()?.family_dimension(degree)?;
            let mut text = format!(
                "degree={} parameters={} conditions={} expected_dim={} identity={}\n",
                fd.degree, fd.parameters, fd.conditions, fd.expected_dim, fd.identity_holds
            );
            let period = fd.period_count.as_ref().map(|pc| {
                writeln!(
                    text,
                    "period={} N={} computed=N-1={} naive=3N-1={} discrepancy={}",
                    pc.period,
                    pc.periods,
                    pc.computed,
                    pc.alternative_3n_minus_1,
                    pc.differs()
                )
                .unwrap();
                json!({
                    "period": pc.period,
                    "n": pc.periods,
                    "computed_n_minus_1": pc.computed,
                    "naive_3n_minus_1": pc.alternative_3n_minus_1,
                    "discrepancy": pc.differs(),
                })
            });
            Ok(Report {
                text,
                json: json!({
                    "command": "familydim",
                    "plane": name,
                    "degree": fd.degree,
                    "parameters": fd.parameters,
                    "conditions": fd.conditions,
                    "expected_dim": fd.expected_dim,
                    "identity_holds": fd.identity_holds,
                    "period_count": period,
                }),
            })
        }
        Command::Base { name, mode } => {
            let doc = load(file)?;
            let data = doc.fibration(&name)?.to_data()?;
            let mut text = String::new();
            let mut fibers = Vec::new();
            for (label, comps) in data.fibers() {
                let m = data.base_multiplicity(label, mode)?;
                writeln!(text, "{label} mult={m}").unwrap();
                let comps: Vec<Value> = comps
                    .iter()
                    .map(|c| json!({ "t": c.t(), "m": c.m().to_string(), "weight": c.weight().to_string() }))
                    .collect();
                fibers.push(json!({ "label": label, "components": comps, "mult": m.to_string() }));
            }
            let base = data.orbifold_base(mode)?;
            writeln!(text, "base={base}").unwrap();
            Ok(Report {
                text,
                json: json!({
                    "command": "base",
                    "fibration": name,
                    "mode": mode.to_string(),
                    "fibers": fibers,
                    "base": marks_json(&base),
                }),
            })
        }
        Command::Compose { name } => {
            let doc = load(file)?;
            let decl = doc.twostage(&name)?;
            let upper = doc.fibration(&decl.upper)?;
            let composed = decl.to_data(upper)?.compose_base()?;
            Ok(Report {
                text: format!(
                    "direct={}\nstaged={}\nagree={}\n",
                    composed.direct,
                    composed.staged,
                    composed.agree()
                ),
                json: json!({
                    "command": "compose",
                    "twostage": name,
                    "upper": decl.upper,
                    "direct": marks_json(&composed.direct),
                    "staged": marks_json(&composed.staged),
                    "agree": composed.agree(),
                }),
            })
        }
        Command::Morphism { name, mode } => {
            let doc = load(file)?;
            let report = doc.morphism(&name)?.to_data()?.check(mode)?;
            let mut text = String::new();
            let mut pairs = Vec::new();
            for p in &report.pairs {
                writeln!(
                    text,
                    "pair {} {} t={} t*m_X={} m_Y={} ok={}",
                    p.pair.y_label, p.pair.x_label, p.pair.t, p.pulled_back, p.m_y, p.ok
                )
                .unwrap();
                pairs.push(json!({
                    "y": p.pair.y_label,
                    "x": p.pair.x_label,
                    "t": p.pair.t,
                    "pulled_back": p.pulled_back.to_string(),
                    "m_y": p.m_y.to_string(),
                    "ok": p.ok,
                }));
            }
            writeln!(text, "morphism={}", report.is_morphism()).unwrap();
            Ok(Report {
                text,
                json: json!({
                    "command": "morphism",
                    "morphism": name,
                    "mode": mode.to_string(),
                    "pairs": pairs,
                    "is_morphism": report.is_morphism(),
                }),
            })
        }
        Command::Restrict { name, against, variant } => {
            let doc = load(file)?;
            let curve = doc.paramcurve(&name)?.to_curve()?;
            let arrangement = doc.plane(&against)?.to_divisor()?;
            let r = restrict::restriction(&curve, &arrangement, variant)?;
            let (text, points) = restriction_report(&r);
            let summary = orbifold_summary(&r.orbifold);
            Ok(Report {
                text: format!("{text}{}\n", summary.0),
                json: json!({
                    "command": "restrict",
                    "curve": name,
                    "against": against,
                    "variant": variant.to_string(),
                    "curve_degree": curve.degree(),
                    "points": points,
                    "orbifold": summary.1,
                }),
            })
        }
        Command::Rational { name, against } => {
            let doc = load(file)?;
            let curve = doc.paramcurve(&name)?.to_curve()?;
            let arrangement = doc.plane(&against)?.to_divisor()?;
            let mut text = String::new();
            let mut variants = serde_json::Map::new();
            for variant in [Variant::Z, Variant::Q] {
                match restrict::restriction(&curve, &arrangement, variant) {
                    Ok(r) => {
                        let (line, v) = orbifold_summary(&r.orbifold);
                        writeln!(text, "{variant}: {line}").unwrap();
                        variants.insert(variant.to_string(), v);
                    }
                    Err(e @ Error::NonIntegral { .. }) => {
                        writeln!(text, "{variant}: unavailable ({e})").unwrap();
                        variants.insert(variant.to_string(), Value::Null);
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            Ok(Report {
                text,
                json: json!({
                    "command": "rational",
                    "curve": name,
                    "against": against,
                    "variants": variants,
                }),
            })
        }
        Command::MordellSearch { name, max_a, max_b, sign, shards } => {
            let doc = load(file)?;
            let t = doc.mordell(&name)?.triple;
            let points = mordell::search_points_sharded(&t, max_a, max_b, sign, shards)?;
            let mut text = String::new();
            let mut out = Vec::new();
            for x in &points {
                let c = x.c(sign);
                writeln!(text, "{x} c={c}").unwrap();
                out.push(json!({
                    "a": x.a().to_string(),
                    "b": x.b().to_string(),
                    "c": c.to_string(),
                    "witnesses": {
                        "a": factor_string(x.a().try_into().ok()),
                        "b": factor_string(x.b().try_into().ok()),
                        "c": factor_string(c.magnitude().try_into().ok()),
                    },
                }));
            }
            writeln!(text, "count={}", points.len()).unwrap();
            Ok(Report {
                text,
                json: json!({
                    "command": "mordell-search",
                    "triple": triple_json(&t),
                    "general_type": mordell::is_general_type_triple(&t),
                    "sign": sign.to_string(),
                    "max_a": max_a,
                    "max_b": max_b,
                    "points": out,
                    "count": points.len(),
                }),
            })
        }
        Command::MordellClassical { name, max } => {
            let doc = load(file)?;
            let t = doc.mordell(&name)?.triple;
            let ws = mordell::search_classical(&t, max, max)?;
            let mut text = String::new();
            let mut out = Vec::new();
            for w in &ws {
                let point = w.point(&t).map(|x| x.to_string());
                writeln!(
                    text,
                    "{}^{} + {}^{} = {}^{} point={}",
                    w.alpha,
                    t.p(),
                    w.beta,
                    t.r(),
                    w.gamma,
                    t.q(),
                    point.as_deref().unwrap_or("none")
                )
                .unwrap();
                out.push(json!({
                    "alpha": w.alpha.to_string(),
                    "beta": w.beta.to_string(),
                    "gamma": w.gamma.to_string(),
                    "point": point,
                }));
            }
            writeln!(text, "count={}", ws.len()).unwrap();
            Ok(Report {
                text,
                json: json!({
                    "command": "mordell-classical",
                    "triple": triple_json(&t),
                    "max": max,
                    "witnesses": out,
                    "count": ws.len(),
                }),
            })
        }
        Command::Pfull { p, limit, density } => {
            if p < 2 {
                return Err(Failure::Domain(format!("p must be at least 2, got {p}")));
            }
            if limit == 0 {
                return Err(Failure::Domain("limit must be at least 1".into()));
            }
            if density {
                let r = mordell::density_report(limit, p)?;
                let mut text = format!("count={} ratio={:.6} slope={:.6}\n", r.count, r.ratio, r.slope);
                for (x, c) in &r.checkpoints {
                    writeln!(text, "checkpoint x={x} count={c}").unwrap();
                }
                let cps: Vec<Value> = r.checkpoints.iter().map(|(x, c)| json!({ "x": x, "count": c })).collect();
                return Ok(Report {
                    text,
                    json: json!({
                        "command": "pfull",
                        "p": p,
                        "limit": limit,
                        "count": r.count,
                        "ratio": format!("{:.6}", r.ratio),
                        "slope": format!("{:.6}", r.slope),
                        "checkpoints": cps,
                    }),
                });
            }
            let values = mordell::enumerate_p_full(limit, p)?;
            Ok(Report {
                text: format!("count={}\n", values.len()),
                json: json!({
                    "command": "pfull",
                    "p": p,
                    "limit": limit,
                    "count": values.len(),
                    "values": values,
                }),
            })
        }
        Command::SymdiffCheck { p, q: qq, mults, extra } => {
            let limits = symdiff_limits()?;
            let r = symdiff::check_positive_floor(p, qq, &mults, extra, limits)?;
            let first = r.n_values.first().copied().unwrap_or(r.threshold);
            let last = r.n_values.last().copied().unwrap_or(r.threshold);
            let mut text = format!(
                "threshold={} n={}..{} multi_indices={} counterexamples={}\n",
                r.threshold,
                first,
                last,
                r.multi_indices,
                r.counterexamples.len()
            );
            let ces: Vec<Value> = r
                .counterexamples
                .iter()
                .map(|j| {
                    writeln!(text, "counterexample J={:?} k={:?}", j.subsets(), j.occupancy()).unwrap();
                    json!({ "subsets": j.subsets(), "occupancy": j.occupancy() })
                })
                .collect();
            writeln!(text, "holds={}", r.holds()).unwrap();
            let mults_s: Vec<String> = mults.iter().map(ToString::to_string).collect();
            Ok(Report {
                text,
                json: json!({
                    "command": "symdiff-check",
                    "p": p,
                    "q": qq,
                    "mults": mults_s,
                    "threshold": r.threshold,
                    "n_values": r.n_values,
                    "multi_indices": r.multi_indices.to_string(),
                    "counterexamples": ces,
                    "holds": r.holds(),
                }),
            })
        }
        Command::Check => {
            let doc = load(file)?;
            let mut text = String::new();
            let mut decls = Vec::new();
            for (d, span) in doc.decls.iter().zip(&doc.spans) {
                writeln!(text, "{} {} at {span}", d.kind(), d.name()).unwrap();
                decls.push(json!({ "kind": d.kind(), "name": d.name(), "line": span.line }));
            }
            writeln!(text, "ok: {} declarations", doc.decls.len()).unwrap();
            Ok(Report { text, json: json!({ "command": "check", "declarations": decls }) })
        }
        Command::Fmt => {
            let doc = load(file)?;
            let text = doc.to_string();
            Ok(Report { json: json!({ "command": "fmt", "source": text }), text })
        }
    }
}

fn symdiff_limits() -> Result<EnumerationLimits, Failure> {
    match std::env::var(SYMDIFF_LIMIT_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map(|max_multi_indices| EnumerationLimits { max_multi_indices })
            .map_err(|_| Failure::Usage(format!("{SYMDIFF_LIMIT_VAR}={v:?} is not a count"))),
        Err(_) => Ok(EnumerationLimits::default()),
    }
}

fn classify(name: &str, curve: &CurveOrbifold) -> Report {
    let degree = curve.canonical_degree();
    let profile = curve.spherical_profile().ok().filter(|p| p.rational);
    let family = profile.as_ref().and_then(|p| p.family.map(|f| f.to_string()));
    let mut text = format!(
        "kappa={} degree={} special={}\n",
        curve.kappa(),
        q(&degree),
        curve.is_special()
    );
    if let Some(f) = &family {
        writeln!(text, "spherical={f}").unwrap();
    }
    Report {
        text,
        json: json!({
            "command": "classify",
            "curve": name,
            "genus": curve.genus(),
            "marks": marks_json(curve.marks()),
            "degree": q(&degree),
            "kappa": curve.kappa().to_string(),
            "special": curve.is_special(),
            "rational": curve.is_rational(),
            "spherical": profile.map(|p| json!({
                "multiplicities": p.multiplicities,
                "family": family,
            })),
        }),
    }
}

fn orbifold_summary(c: &CurveOrbifold) -> (String, Value) {
    let degree = c.canonical_degree();
    (
        format!(
            "kappa={} degree={} rational={} marks={}",
            c.kappa(),
            q(&degree),
            c.is_rational(),
            c.marks()
        ),
        json!({
            "kappa": c.kappa().to_string(),
            "degree": q(&degree),
            "rational": c.is_rational(),
            "marks": marks_json(c.marks()),
        }),
    )
}

fn restriction_report(r: &Restriction) -> (String, Vec<Value>) {
    let mut text = String::new();
    let mut points = Vec::new();
    for p in &r.points {
        let contacts: Vec<String> = p.record.contacts.iter().map(|(l, t)| format!("{l}:{t}")).collect();
        writeln!(
            text,
            "point {} orbit={} contacts={} mult={}",
            p.record.point,
            p.record.orbit_size(),
            contacts.join(","),
            p.mult
        )
        .unwrap();
        let contacts_json: serde_json::Map<String, Value> =
            p.record.contacts.iter().map(|(l, t)| (l.clone(), json!(t))).collect();
        points.push(json!({
            "factor": p.record.point.to_string(),
            "orbit": p.record.orbit_size(),
            "labels": restrict::point_labels(&p.record.point),
            "contacts": contacts_json,
            "mult": p.mult.to_string(),
        }));
    }
    (text, points)
}

fn triple_json(t: &OrbifoldP1Triple) -> Value {
    json!({ "p": t.p(), "q": t.q(), "r": t.r() })
}

fn factor_string(n: Option<u64>) -> String {
    match n {
        Some(0) => "0".into(),
        Some(1) => "1".into(),
        Some(n) => mordell::factorize_u64(n)
            .iter()
            .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect::<Vec<_>>()
            .join("*"),
        None => "?".into(),
    }
}
