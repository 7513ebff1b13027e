//! Command-line front end for the `conic-billiards` library.
//!
//! Every command prints a JSON report carrying `"schema": "1"` (or CSV/SVG
//! for `simulate --format`). Exit status is 0 when every check in the report
//! passes, 1 when a check fails or the library reports an error, and 2 on
//! configuration or parse errors.

use std::fmt::Display;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use conic_billiards::dualbilliard::{residue_report, BilliardSpec, ResidueReport};
use conic_billiards::exactnum::{precision_bits, Scalar};
use conic_billiards::hessianlab::{
    hess3_check, hessian_on_curve, hessian_poly, ode_check, origin_model, residue_from_hessian, FactoredG,
};
use conic_billiards::integrals::{catalog_integral, equivalence_pullback_check, verify_invariance, EquivalenceCase, Poly};
use conic_billiards::projbilliard::{
    dual_spec, field_from_spec, psi_catalog, psi_dual_constant, simulate, FlowState, Trajectory, TransversalField,
    Traversal,
};
use conic_billiards::projcore::ExtValue;
use conic_billiards::quasihomog::{build_primitive, classify_rho, classify_rho_orbit, is_eta_quasi_invariant};
use conic_billiards::sampling::SamplePlan;

#[derive(Parser)]
#[command(name = "conic-billiards", version, about = "Exact verification of integrable dual billiards on conics")]
struct Cli {
    /// Render numbers as decimals (at BILLIARD_PRECISION_BITS) instead of exact strings.
    #[arg(long, global = true)]
    approx: bool,
    /// Write the report to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the catalog specs with their residues and integrals.
    Catalog {
        /// Largest family index N of the exotic structures.
        #[arg(long, default_value_t = 5)]
        max_n: u32,
    },
    /// Check that the catalog integral of a spec is invariant under its involutions.
    Verify {
        #[command(flatten)]
        spec: SpecArg,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Residues of a spec at its singular points.
    Residues {
        #[command(flatten)]
        spec: SpecArg,
    },
    /// Classify a residue or build its primitive invariant polynomial.
    Classify(ClassifyArgs),
    /// Simulate a projective billiard on the parabola.
    Simulate(SimulateArgs),
    /// Convert between dual billiard specs and transversal fields.
    Dualize(DualizeArgs),
    /// Hessian identities.
    Hessian {
        #[command(subcommand)]
        check: HessianCmd,
    },
    /// Check a projective equivalence between two catalog structures.
    Equiv {
        /// Which pair: `b` (2b1/2b2) or `c` (2c1/2c2).
        #[arg(long, value_enum)]
        case: CaseArg,
        /// Seed for the sampled points.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct SpecArg {
    /// A BilliardSpec as inline JSON or a path to a JSON file.
    #[arg(long)]
    spec: String,
}

#[derive(Args)]
struct SamplingArgs {
    /// Number of boundary points.
    #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    /// Chart samples per boundary point.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    values_per_point: u64,
    /// Sampling seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Height bound of sampled rationals.
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    height: u64,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ClassifyArgs {
    /// Decide membership of a rational residue in the admissible set.
    #[arg(long)]
    rho: Option<String>,
    /// Build the primitive invariant polynomial for a residue.
    #[arg(long)]
    build_primitive: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum TraversalArg {
    Ray,
    Chord,
}

#[derive(Args)]
struct SimulateArgs {
    /// A TransversalField as inline JSON or a path to a JSON file.
    #[arg(long)]
    field: String,
    /// Start position `x1,x2` on the parabola.
    #[arg(long, allow_hyphen_values = true)]
    position: String,
    /// Start velocity `v1,v2`.
    #[arg(long, allow_hyphen_values = true)]
    velocity: String,
    /// Number of reflections.
    #[arg(long, default_value_t = 10)]
    steps: usize,
    /// Whether to follow the forward ray or the full chord.
    #[arg(long, value_enum, default_value_t = TraversalArg::Ray)]
    traversal: TraversalArg,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct DualizeArgs {
    /// A BilliardSpec to convert into its transversal field and integral.
    #[arg(long)]
    spec: Option<String>,
    /// A TransversalField to convert back into its dual spec.
    #[arg(long)]
    field: Option<String>,
}

#[derive(Subcommand)]
enum HessianCmd {
    /// The Hessian polynomial of `G`.
    Poly {
        /// A polynomial as a JSON term list `[{"e": [i, j, k], "coef": "c"}, ...]`.
        #[arg(long)]
        g: String,
    },
    /// Check `H(fg) = g³H(f)` at points of `{f = 0}`.
    Hess3 {
        /// The polynomial `f` (JSON term list).
        #[arg(long)]
        f: String,
        /// The polynomial `g` (JSON term list).
        #[arg(long)]
        g: String,
        /// Points `[[z, w], ...]` on `{f = 0}` as JSON.
        #[arg(long)]
        points: String,
    },
    /// Restrict `H(G)` to the curve `w^q = z^p` for a factored `G`.
    Curve {
        /// `{"p": .., "q": .., "alpha": .., "beta": .., "primes": [[c, mu], ...]}` as JSON.
        #[arg(long)]
        g: String,
    },
    /// Recover the residue at the origin from the Hessian of the local model.
    Origin {
        #[command(flatten)]
        spec: SpecArg,
    },
    /// Check `dH/dz = −3fH` along the conic.
    Ode {
        #[command(flatten)]
        spec: SpecArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    B,
    C,
}

/// Input form of a factored `G` for `hessian curve`.
#[derive(Deserialize)]
struct FactoredGInput {
    p: u32,
    q: u32,
    #[serde(default = "Scalar::zero")]
    alpha: Scalar,
    #[serde(default = "Scalar::zero")]
    beta: Scalar,
    #[serde(default)]
    primes: Vec<(Scalar, Scalar)>,
}

/// Why a command did not produce a passing report.
enum Failure {
    /// Bad flags or unparsable input (exit 2).
    Config(String),
    /// The library raised an error (exit 1).
    Library { command: &'static str, message: String },
}

fn lib<E: Display>(command: &'static str) -> impl Fn(E) -> Failure {
    move |e| Failure::Library { command, message: e.to_string() }
}

/// A finished report and whether its checks passed.
enum Report {
    Json(Value, bool),
    Text(String, bool),
}

/// Number rendering selected by `--approx`.
struct Render {
    approx: bool,
    prec: usize,
}

impl Render {
    fn s(&self, x: &Scalar) -> Value {
        Value::String(self.text(x))
    }

    fn text(&self, x: &Scalar) -> String {
        if self.approx {
            x.to_decimal_string(self.prec)
        } else {
            x.to_string()
        }
    }

    fn ext(&self, x: &ExtValue) -> Value {
        match x.value() {
            Some(v) => self.s(&v),
            None => Value::String("inf".into()),
        }
    }

    fn opt_ext(&self, x: &Option<ExtValue>) -> Value {
        x.as_ref().map_or(Value::Null, |v| self.ext(v))
    }

    fn pair(&self, v: &[Scalar; 2]) -> Value {
        json!([self.s(&v[0]), self.s(&v[1])])
    }

    fn residues(&self, r: &ResidueReport) -> Value {
        let poles: Map<String, Value> = r.finite_poles.iter().map(|(a, res)| (self.text(a), self.s(res))).collect();
        json!({ "poles": poles, "infinity": self.s(&r.infinity_residue), "total": self.s(&r.total) })
    }

    /// Replace every `{"num": n, "den": d}` object by the string `n/d` (or
    /// a decimal under `--approx`).
    fn simplify(&self, v: Value) -> Value {
        match v {
            Value::Object(m) if m.len() == 2 && m.contains_key("num") && m.contains_key("den") => {
                match serde_json::from_value::<Scalar>(Value::Object(m.clone())) {
                    Ok(s) => self.s(&s),
                    Err(_) => Value::Object(m),
                }
            }
            Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, self.simplify(v))).collect()),
            Value::Array(a) => Value::Array(a.into_iter().map(|v| self.simplify(v)).collect()),
            other => other,
        }
    }
}

fn header(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), json!("1"));
    m.insert("command".into(), json!(command));
    m
}

fn with(mut m: Map<String, Value>, extra: Value) -> Value {
    if let Value::Object(e) = extra {
        m.extend(e);
    }
    Value::Object(m)
}

/// Parse inline JSON (text starting with `{` or `[`) or read it from a file.
fn load_json<T: DeserializeOwned>(what: &str, arg: &str) -> Result<T, Failure> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| Failure::Config(format!("cannot read {what} file {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Config(format!("invalid {what} JSON: {e}")))
}

fn parse_scalar(what: &str, s: &str) -> Result<Scalar, Failure> {
    s.parse().map_err(|e| Failure::Config(format!("invalid {what} {s:?}: {e}")))
}

fn parse_pair(what: &str, s: &str) -> Result<[Scalar; 2], Failure> {
    match s.split(',').collect::<Vec<_>>().as_slice() {
        [a, b] => Ok([parse_scalar(what, a)?, parse_scalar(what, b)?]),
        _ => Err(Failure::Config(format!("{what} must be two comma-separated numbers, got {s:?}"))),
    }
}

fn spec_json(r: &Render, spec: &BilliardSpec) -> Value {
    r.simplify(serde_json::to_value(spec).expect("specs serialize"))
}

fn origin_residue(rep: &ResidueReport) -> Option<Scalar> {
    rep.finite_poles.iter().find(|(a, _)| a.is_zero()).map(|(_, res)| res.clone())
}

fn catalog(r: &Render, max_n: u32) -> Result<Report, Failure> {
    let mut entries = Vec::new();
    for spec in BilliardSpec::catalog(max_n) {
        let residues = residue_report(&spec).map_err(lib("catalog"))?;
        let integral = catalog_integral(&spec).map_err(lib("catalog"))?;
        entries.push(json!({
            "name": spec.to_string(),
            "spec": spec_json(r, &spec),
            "rho": spec.rho().map_or(Value::Null, |x| r.s(&x)),
            "residues": r.residues(&residues),
            "integral": integral.to_string(),
        }));
    }
    Ok(Report::Json(with(header("catalog"), json!({ "specs": entries })), true))
}

fn verify(r: &Render, spec: &SpecArg, s: &SamplingArgs) -> Result<Report, Failure> {
    let spec: BilliardSpec = load_json("spec", &spec.spec)?;
    let integral = catalog_integral(&spec).map_err(lib("verify"))?;
    let plan = SamplePlan {
        points: s.samples as usize,
        values_per_point: s.values_per_point as usize,
        height: s.height,
        seed: s.seed,
    };
    let report = verify_invariance(&integral, &spec, &plan);
    let passed = report.passed();
    let body = json!({
        "spec": spec_json(r, &spec),
        "integral": integral.to_string(),
        "seed": s.seed,
        "report": report,
        "passed": passed,
    });
    Ok(Report::Json(with(header("verify"), body), passed))
}

fn residues(r: &Render, spec: &SpecArg) -> Result<Report, Failure> {
    let spec: BilliardSpec = load_json("spec", &spec.spec)?;
    let rep = residue_report(&spec).map_err(lib("residues"))?;
    let passed = rep.total == Scalar::int(4);
    Ok(Report::Json(with(header("residues"), r.residues(&rep)), passed))
}

fn classify(r: &Render, args: &ClassifyArgs) -> Result<Report, Failure> {
    if let Some(text) = &args.rho {
        let rho = parse_scalar("rho", text)?;
        let closed = classify_rho(&rho);
        let orbit = classify_rho_orbit(&rho);
        let agree = closed == orbit;
        let body = json!({
            "rho": r.s(&rho),
            "in_M": closed.in_m,
            "m": closed.m,
            "orbit_in_M": orbit.in_m,
            "orbit_m": orbit.m,
            "classifiers_agree": agree,
        });
        return Ok(Report::Json(with(header("classify"), body), agree));
    }
    let text = args.build_primitive.as_deref().expect("clap enforces one of the flags");
    let rho = parse_scalar("rho", text)?;
    let prim = build_primitive(&rho).map_err(lib("classify"))?;
    let invariant = is_eta_quasi_invariant(&prim.poly, &rho).map_err(lib("classify"))?;
    let body = json!({
        "rho": r.s(&rho),
        "m": prim.m,
        "poly": prim.poly.poly.to_string(),
        "weights": [prim.poly.p, prim.poly.q],
        "c": prim.c.iter().map(|c| r.s(c)).collect::<Vec<_>>(),
        "orbit_points": prim.orbit_points.iter().map(|c| r.s(c)).collect::<Vec<_>>(),
        "has_w": prim.has_w,
        "has_z": prim.has_z,
        "quasi_invariant": invariant,
    });
    Ok(Report::Json(with(header("classify"), body), invariant))
}

fn trajectory_json(r: &Render, t: &Trajectory) -> Value {
    let bounces: Vec<Value> = t
        .bounces
        .iter()
        .map(|b| {
            json!({
                "step": b.step,
                "position": r.pair(&b.position),
                "v_in": r.pair(&b.v_in),
                "v_out": r.pair(&b.v_out),
                "psi_before": r.opt_ext(&b.psi_before),
                "psi_after": r.opt_ext(&b.psi_after),
            })
        })
        .collect();
    json!({
        "field": t.field,
        "start": { "position": r.pair(&t.start.position), "velocity": r.pair(&t.start.velocity) },
        "psi_start": r.opt_ext(&t.psi_start),
        "bounces": bounces,
        "psi_conserved": t.psi_conserved(),
    })
}

fn run_simulate(r: &Render, a: &SimulateArgs) -> Result<Report, Failure> {
    let field: TransversalField = load_json("field", &a.field)?;
    let position = parse_pair("position", &a.position)?;
    let velocity = parse_pair("velocity", &a.velocity)?;
    let start = FlowState::new(position, velocity).map_err(|e| Failure::Config(e.to_string()))?;
    let mode = match a.traversal {
        TraversalArg::Ray => Traversal::Ray,
        TraversalArg::Chord => Traversal::Chord,
    };
    let t = simulate(&field, &start, a.steps, mode).map_err(lib("simulate"))?;
    let ok = t.psi_conserved();
    Ok(match a.format {
        Format::Json => Report::Json(with(header("simulate"), trajectory_json(r, &t)), ok),
        Format::Csv => Report::Text(t.to_csv(), ok),
        Format::Svg => Report::Text(t.to_svg(), ok),
    })
}

fn dualize(r: &Render, a: &DualizeArgs) -> Result<Report, Failure> {
    if let Some(text) = &a.spec {
        let spec: BilliardSpec = load_json("spec", text)?;
        let field = field_from_spec(&spec).map_err(lib("dualize"))?;
        let psi = psi_catalog(&field).map_err(lib("dualize"))?;
        let integral = catalog_integral(&spec).map_err(lib("dualize"))?;
        let constant = psi_dual_constant(&field).map_err(lib("dualize"))?;
        let body = json!({
            "spec": spec_json(r, &spec),
            "field": r.simplify(serde_json::to_value(&field).expect("fields serialize")),
            "integral": integral.to_string(),
            "psi": psi.to_string(),
            "psi_over_dual_integral": constant.as_ref().map_or(Value::Null, |k| r.s(k)),
        });
        return Ok(Report::Json(with(header("dualize"), body), constant.is_some()));
    }
    let text = a.field.as_deref().expect("clap enforces one of the flags");
    let field: TransversalField = load_json("field", text)?;
    let spec = dual_spec(&field);
    let body = json!({
        "field": r.simplify(serde_json::to_value(&field).expect("fields serialize")),
        "spec": spec.as_ref().map_or(Value::Null, |s| spec_json(r, s)),
    });
    Ok(Report::Json(with(header("dualize"), body), spec.is_some()))
}

fn hessian(r: &Render, cmd: &HessianCmd) -> Result<Report, Failure> {
    match cmd {
        HessianCmd::Poly { g } => {
            let g: Poly = load_json("polynomial", g)?;
            let h = hessian_poly(&g);
            let body = json!({ "g": g.to_string(), "hessian": h.to_string() });
            Ok(Report::Json(with(header("hessian"), body), true))
        }
        HessianCmd::Hess3 { f, g, points } => {
            let f: Poly = load_json("polynomial", f)?;
            let g: Poly = load_json("polynomial", g)?;
            let pts: Vec<[Scalar; 2]> = load_json("points", points)?;
            let ok = hess3_check(&f, &g, &pts).map_err(lib("hessian"))?;
            let body = json!({ "f": f.to_string(), "g": g.to_string(), "points": pts.len(), "passed": ok });
            Ok(Report::Json(with(header("hessian"), body), ok))
        }
        HessianCmd::Curve { g } => {
            let input: FactoredGInput = load_json("factored G", g)?;
            let g = FactoredG::from_parts(input.p, input.q, input.alpha, input.beta, &input.primes)
                .map_err(lib("hessian"))?;
            let h = hessian_on_curve(&g).map_err(lib("hessian"))?;
            let ok = h.weighted_matches;
            let body = json!({
                "p": g.p,
                "q": g.q,
                "on_curve": r.simplify(serde_json::to_value(&h).expect("reports serialize")),
                "passed": ok,
            });
            Ok(Report::Json(with(header("hessian"), body), ok))
        }
        HessianCmd::Origin { spec } => {
            let spec: BilliardSpec = load_json("spec", &spec.spec)?;
            let g = origin_model(&spec).map_err(lib("hessian"))?;
            let h = hessian_on_curve(&g).map_err(lib("hessian"))?;
            let from_hessian = residue_from_hessian(&h.d);
            let expected = residue_report(&spec).ok().and_then(|rep| origin_residue(&rep));
            let ok = h.weighted_matches && expected.as_ref() == Some(&from_hessian);
            let body = json!({
                "spec": spec_json(r, &spec),
                "on_curve": r.simplify(serde_json::to_value(&h).expect("reports serialize")),
                "residue_from_hessian": r.s(&from_hessian),
                "residue_at_origin": expected.as_ref().map_or(Value::Null, |x| r.s(x)),
                "passed": ok,
            });
            Ok(Report::Json(with(header("hessian"), body), ok))
        }
        HessianCmd::Ode { spec } => {
            let spec: BilliardSpec = load_json("spec", &spec.spec)?;
            let report = ode_check(&spec).map_err(lib("hessian"))?;
            let ok = report.passed;
            let body = json!({ "report": report });
            Ok(Report::Json(with(header("hessian"), body), ok))
        }
    }
}

fn equiv(case: CaseArg, seed: u64) -> Result<Report, Failure> {
    let case = match case {
        CaseArg::B => EquivalenceCase::B,
        CaseArg::C => EquivalenceCase::C,
    };
    let report = equivalence_pullback_check(case, seed).map_err(lib("equiv"))?;
    let ok = report.holds;
    Ok(Report::Json(with(header("equiv"), json!({ "seed": seed, "report": report })), ok))
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let r = Render { approx: cli.approx, prec: precision_bits() };
    match &cli.command {
        Command::Catalog { max_n } => catalog(&r, *max_n),
        Command::Verify { spec, sampling } => verify(&r, spec, sampling),
        Command::Residues { spec } => residues(&r, spec),
        Command::Classify(a) => classify(&r, a),
        Command::Simulate(a) => run_simulate(&r, a),
        Command::Dualize(a) => dualize(&r, a),
        Command::Hessian { check } => hessian(&r, check),
        Command::Equiv { case, seed } => equiv(*case, *seed),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), String> {
    match &cli.output {
        Some(path) => fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, code) = match run(&cli) {
        Ok(Report::Json(v, ok)) => (pretty(&v), u8::from(!ok)),
        Ok(Report::Text(t, ok)) => (t, u8::from(!ok)),
        Err(Failure::Library { command, message }) => {
            let v = with(header(command), json!({ "error": { "kind": "library", "message": message } }));
            (pretty(&v), 1)
        }
        Err(Failure::Config(message)) => {
            let v = json!({ "schema": "1", "error": { "kind": "config", "message": message } });
            eprint!("{}", pretty(&v));
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&cli, &text) {
        eprintln!("{}", pretty(&json!({ "schema": "1", "error": { "kind": "config", "message": e } })));
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
