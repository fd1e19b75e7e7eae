//! The `thompson-renorm` command line: every library operation behind a
//! subcommand, with JSON or CSV reports that echo their full configuration.
//!
//! [`run`] is the whole program; `main` only forwards the process arguments
//! and streams to it, which keeps the CLI testable in-process.

use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::BigRational;
use serde_json::{json, Map, Value};

use thompson_renorm::categories::{common_refinement, tree_count, Tree};
use thompson_renorm::evaluate::{
    chromatic_value, closed_graph, coefficient, edge_coloring_count, face_coloring_count, Model,
};
use thompson_renorm::renorm::{
    bound_check, compare_square_forms, decay_profile, find_certificate, iterate_norms, parse_rational, scan, LoopParameter, Number,
    Outcome, Q4Vector, ScanRow, Variant,
};
use thompson_renorm::thompson::{random_f_with, random_t_with, random_v_with, rotation_element, seeded_rng, FElement, GroupElement};

/// Environment variable holding the default RNG seed.
pub const SEED_ENV: &str = "THOMPSON_RENORM_SEED";

/// Seed used when neither `--seed` nor the environment provides one.
pub const DEFAULT_SEED: u64 = 24301;

/// Significant digits used when printing floating-point diagnostics.
const FLOAT_DIGITS: usize = 12;

#[derive(Parser, Debug)]
#[command(name = "thompson-renorm", version, about = "Thompson groups, closed-diagram coefficients and certified renormalization decay")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// RNG seed; overrides the THOMPSON_RENORM_SEED environment variable.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Include wall-clock duration in the report (breaks byte-for-byte reproducibility).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Binary trees and dyadic partitions.
    #[command(subcommand)]
    Tree(TreeCommand),
    /// Elements of F, T and V.
    #[command(subcommand)]
    Group(GroupCommand),
    /// The piecewise-linear map of an element of F.
    Plmap {
        /// Element literal `T1|T2`.
        element: String,
    },
    /// The vacuum coefficient of an element of F in a closed-diagram model.
    Coeff(CoeffArgs),
    /// The renormalization map and its decay certificates.
    #[command(subcommand)]
    Renorm(RenormCommand),
}

#[derive(Subcommand, Debug)]
enum TreeCommand {
    /// All trees with a given number of leaves.
    Enumerate {
        #[arg(long)]
        leaves: usize,
    },
    /// Breakpoints of the dyadic partition a tree encodes.
    Partition { tree: String },
    /// Minimal common refinement `u = s∘p = t∘q` of two trees.
    Refine { s: String, t: String },
}

#[derive(Subcommand, Debug)]
enum GroupCommand {
    /// Reduced form of an element literal.
    Reduce { element: String },
    /// Product `a·b` (acting by `b` first).
    Mul { a: String, b: String },
    /// Inverse of an element.
    Inv { element: String },
    /// The rotation by `a/2^n` in T, with its order.
    Rotation {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        n: u32,
    },
    /// Seeded random elements built from uniform trees with `leaves` leaves.
    Random {
        #[arg(long, default_value_t = 8)]
        leaves: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Kind::F)]
        kind: Kind,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    F,
    T,
    V,
}

#[derive(Args, Debug)]
struct CoeffArgs {
    /// edge3, face:<n> or chromatic.
    #[arg(long, default_value = "edge3")]
    model: String,
    /// Loop parameter for the chromatic model.
    #[arg(long)]
    d: Option<String>,
    /// Element literal `T1|T2`.
    element: String,
}

/// Selects the loop parameter: an exact `--d`, or the family member `--m`/`--variant`.
#[derive(Args, Debug, Clone)]
struct ParamArgs {
    /// Exact rational loop parameter, e.g. `3`, `9/4` or `2.25`.
    #[arg(long, allow_hyphen_values = true)]
    d: Option<String>,
    /// Family index: d = 4cos²(π/m) ± 1.
    #[arg(long, requires = "variant")]
    m: Option<u32>,
    /// Family variant.
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
    /// Decimal digits for enclosures of irrational d.
    #[arg(long, default_value_t = 60)]
    digits: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Plus,
    Minus,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Plus => Variant::Plus,
            VariantArg::Minus => Variant::Minus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ScanVariant {
    Plus,
    Minus,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Start {
    B1,
    B2,
    B3,
}

#[derive(Subcommand, Debug)]
enum RenormCommand {
    /// ℓ¹ norms of the iterates `𝓡ⁿ(x₀)`.
    Iterate {
        #[command(flatten)]
        param: ParamArgs,
        #[arg(long, default_value_t = 8)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Start::B1)]
        start: Start,
    },
    /// Smallest n with M·‖𝓡ⁿ(b₁)‖₁ < 1.
    Certify {
        #[command(flatten)]
        param: ParamArgs,
        #[arg(long, default_value_t = 64)]
        nmax: usize,
    },
    /// Certificates over the family 4cos²(π/m) ± 1.
    Scan {
        #[arg(long, value_enum, default_value_t = ScanVariant::Both)]
        variant: ScanVariant,
        #[arg(long, default_value_t = 5)]
        m_from: u32,
        #[arg(long, default_value_t = 20)]
        m_to: u32,
        /// Append the row d = 3.
        #[arg(long)]
        d3: bool,
        #[arg(long, default_value_t = 64)]
        nmax: usize,
        #[arg(long, default_value_t = 60)]
        digits: u32,
    },
    /// Samples ‖𝓡(a)‖₁ ≤ M on the unit sphere.
    Bound {
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
    /// Compares the completed-squares display with the raw map.
    Squares {
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Log-norm decay profile along the orbit of b₁.
    Profile {
        #[command(flatten)]
        param: ParamArgs,
        #[arg(long, default_value_t = 8)]
        steps: usize,
    },
}

/// A failed run: the message goes to standard error and the exit code is 2.
#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome2<T> = Result<T, Failure>;

/// A report: header fields, a JSON body and a CSV table.
struct Report {
    command: String,
    config: Map<String, Value>,
    body: Map<String, Value>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    notes: Vec<String>,
}

impl Report {
    fn new(command: &str, columns: Vec<&'static str>) -> Self {
        Report {
            command: command.to_string(),
            config: Map::new(),
            body: Map::new(),
            columns,
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn config(&mut self, key: &str, value: impl Into<Value>) {
        self.config.insert(key.to_string(), value.into());
    }

    fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.body.insert(key.to_string(), value.into());
    }

    fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }
}

fn render(report: &Report, format: Format, wall_us: Option<u128>) -> Outcome2<String> {
    match format {
        Format::Json => {
            let mut top = Map::new();
            top.insert("command".into(), Value::String(report.command.clone()));
            top.insert("config".into(), Value::Object(report.config.clone()));
            for (k, v) in &report.body {
                top.insert(k.clone(), v.clone());
            }
            if let Some(us) = wall_us {
                top.insert("timing".into(), json!({ "wall_us": us.to_string() }));
            }
            Ok(serde_json::to_string_pretty(&Value::Object(top))? + "\n")
        }
        Format::Csv => {
            let mut out = String::new();
            out.push_str(&format!("# command: {}\n", report.command));
            let config: Vec<String> = report.config.iter().map(|(k, v)| format!("{k}={}", plain(v))).collect();
            out.push_str(&format!("# config: {}\n", config.join(" ")));
            if let Some(us) = wall_us {
                out.push_str(&format!("# wall_us: {us}\n"));
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&report.columns)?;
            for r in &report.rows {
                w.write_record(r)?;
            }
            out.push_str(&String::from_utf8(w.into_inner().map_err(|e| Failure(e.to_string()))?)?);
            for n in &report.notes {
                out.push_str(&format!("# {n}\n"));
            }
            Ok(out)
        }
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}

fn resolve_seed(flag: Option<u64>) -> Outcome2<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Failure(format!("{SEED_ENV}={v} is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// Runs the program on `args` (including the program name) and returns the
/// exit code: 0 on success, 2 on usage or domain errors.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    let started = Instant::now();
    let result = resolve_seed(cli.seed).and_then(|seed| {
        let mut report = dispatch(&cli.command, seed)?;
        report.config.insert("seed".into(), json!(seed));
        report.config.insert("format".into(), json!(format!("{:?}", cli.format).to_lowercase()));
        let wall = cli.timing.then(|| started.elapsed().as_micros());
        render(&report, cli.format, wall)
    });
    match result {
        Ok(text) => match stdout.write_all(text.as_bytes()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                2
            }
        },
        Err(Failure(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}

fn dispatch(command: &Command, seed: u64) -> Outcome2<Report> {
    match command {
        Command::Tree(t) => tree_command(t),
        Command::Group(g) => group_command(g, seed),
        Command::Plmap { element } => plmap_command(element),
        Command::Coeff(args) => coeff_command(args),
        Command::Renorm(r) => renorm_command(r, seed),
    }
}

fn parse_tree(s: &str) -> Outcome2<Tree> {
    s.parse::<Tree>().map_err(|e| Failure(format!("tree `{s}`: {e}")))
}

fn parse_element(s: &str) -> Outcome2<GroupElement> {
    s.parse::<GroupElement>().map_err(|e| Failure(format!("element `{s}`: {e}")))
}

fn parse_f(s: &str) -> Outcome2<FElement> {
    match parse_element(s)? {
        GroupElement::F(g) => Ok(g),
        other => Err(Failure(format!("element `{s}` lies in {}, but an element of F is required", other.kind()))),
    }
}

const MAX_ENUMERATED_LEAVES: usize = 14;

fn tree_command(cmd: &TreeCommand) -> Outcome2<Report> {
    match cmd {
        TreeCommand::Enumerate { leaves } => {
            if *leaves == 0 || *leaves > MAX_ENUMERATED_LEAVES {
                return Err(Failure(format!("--leaves must lie in 1..={MAX_ENUMERATED_LEAVES}")));
            }
            let trees = Tree::enumerate(*leaves);
            let mut r = Report::new("tree enumerate", vec!["index", "tree"]);
            r.config("leaves", *leaves);
            r.set("count", trees.len());
            r.set("catalan", tree_count(*leaves).to_string());
            r.set("trees", trees.iter().map(|t| Value::String(t.to_string())).collect::<Vec<_>>());
            for (i, t) in trees.iter().enumerate() {
                r.row(vec![i.to_string(), t.to_string()]);
            }
            Ok(r)
        }
        TreeCommand::Partition { tree } => {
            let t = parse_tree(tree)?;
            let points = t.partition();
            let mut r = Report::new("tree partition", vec!["interval", "left", "right"]);
            r.config("tree", tree.as_str());
            r.set("tree", t.to_string());
            r.set("leaves", t.leaves());
            r.set("breakpoints", points.iter().map(|p| Value::String(p.to_string())).collect::<Vec<_>>());
            for (i, w) in points.windows(2).enumerate() {
                r.row(vec![i.to_string(), w[0].to_string(), w[1].to_string()]);
            }
            Ok(r)
        }
        TreeCommand::Refine { s, t } => {
            let (a, b) = (parse_tree(s)?, parse_tree(t)?);
            let (u, p, q) = common_refinement(&a, &b);
            let mut r = Report::new("tree refine", vec!["name", "value"]);
            r.config("s", s.as_str());
            r.config("t", t.as_str());
            for (name, value) in [("union", u.to_string()), ("p", p.to_string()), ("q", q.to_string())] {
                r.set(name, value.clone());
                r.row(vec![name.to_string(), value]);
            }
            Ok(r)
        }
    }
}

fn element_fields(r: &mut Report, key: &str, g: &GroupElement) {
    r.set(key, g.to_string());
    r.row(vec![key.to_string(), g.kind().to_string(), g.to_string()]);
}

fn group_command(cmd: &GroupCommand, seed: u64) -> Outcome2<Report> {
    let columns = vec!["name", "kind", "element"];
    match cmd {
        GroupCommand::Reduce { element } => {
            let g = parse_element(element)?;
            let mut r = Report::new("group reduce", columns);
            r.config("element", element.as_str());
            r.set("kind", g.kind());
            element_fields(&mut r, "reduced", &g);
            Ok(r)
        }
        GroupCommand::Mul { a, b } => {
            let (x, y) = (parse_element(a)?, parse_element(b)?);
            let p = x.multiply(&y)?;
            let mut r = Report::new("group mul", columns);
            r.config("a", a.as_str());
            r.config("b", b.as_str());
            r.set("kind", p.kind());
            element_fields(&mut r, "a", &x);
            element_fields(&mut r, "b", &y);
            element_fields(&mut r, "product", &p);
            r.set("is_identity", is_identity(&p));
            Ok(r)
        }
        GroupCommand::Inv { element } => {
            let g = parse_element(element)?;
            let mut r = Report::new("group inv", columns);
            r.config("element", element.as_str());
            r.set("kind", g.kind());
            element_fields(&mut r, "element", &g);
            element_fields(&mut r, "inverse", &g.inverse());
            Ok(r)
        }
        GroupCommand::Rotation { a, n } => {
            let g = rotation_element(*a, *n)?;
            let limit = 1u64 << (*n).min(20);
            let mut power = g.clone();
            let mut order = 1u64;
            while !power.is_identity() && order <= limit {
                power = power.multiply(&g);
                order += 1;
            }
            let mut r = Report::new("group rotation", vec!["a", "n", "element", "order"]);
            r.config("a", *a);
            r.config("n", *n);
            r.set("element", g.to_string());
            r.set("order", order);
            r.row(vec![a.to_string(), n.to_string(), g.to_string(), order.to_string()]);
            Ok(r)
        }
        GroupCommand::Random { leaves, count, kind } => {
            if *leaves == 0 {
                return Err(Failure("--leaves must be positive".into()));
            }
            let mut rng = seeded_rng(seed);
            let elements: Vec<GroupElement> = (0..*count)
                .map(|_| match kind {
                    Kind::F => GroupElement::F(random_f_with(*leaves, &mut rng)),
                    Kind::T => GroupElement::T(random_t_with(*leaves, &mut rng)),
                    Kind::V => GroupElement::V(random_v_with(*leaves, &mut rng)),
                })
                .collect();
            let mut r = Report::new("group random", vec!["index", "kind", "element"]);
            r.config("leaves", *leaves);
            r.config("count", *count);
            r.config("kind", format!("{kind:?}"));
            r.set("elements", elements.iter().map(|g| Value::String(g.to_string())).collect::<Vec<_>>());
            for (i, g) in elements.iter().enumerate() {
                r.row(vec![i.to_string(), g.kind().to_string(), g.to_string()]);
            }
            Ok(r)
        }
    }
}

fn is_identity(g: &GroupElement) -> bool {
    match g {
        GroupElement::F(x) => x.is_identity(),
        GroupElement::T(x) => x.is_identity(),
        GroupElement::V(x) => x.is_identity(),
    }
}

fn plmap_command(element: &str) -> Outcome2<Report> {
    let g = parse_f(element)?;
    let map = g.to_pl_map();
    let mut r = Report::new("plmap", vec!["x", "y", "slope_log2_after"]);
    r.config("element", element);
    r.set("element", g.to_string());
    r.set("map", map.to_string());
    let slopes = map.slope_exponents();
    let points: Vec<Value> = map.points().iter().map(|(x, y)| json!({ "x": x.to_string(), "y": y.to_string() })).collect();
    r.set("breakpoints", points);
    r.set("slope_log2", slopes.clone());
    for (i, (x, y)) in map.points().iter().enumerate() {
        let s = slopes.get(i).map(i64::to_string).unwrap_or_default();
        r.row(vec![x.to_string(), y.to_string(), s]);
    }
    Ok(r)
}

fn coeff_command(args: &CoeffArgs) -> Outcome2<Report> {
    let g = parse_f(&args.element)?;
    let model = if args.model == "chromatic" {
        let d = args.d.as_deref().ok_or_else(|| Failure("the chromatic model needs --d".into()))?;
        Model::Chromatic(parse_rational(d)?)
    } else {
        if args.d.is_some() {
            return Err(Failure(format!("--d is only used by the chromatic model, not {}", args.model)));
        }
        args.model.parse::<Model>()?
    };
    let diagram = closed_graph(&g);
    let raw = match &model {
        Model::Edge3 => edge_coloring_count(&diagram, 3).to_string(),
        Model::Face(n) => face_coloring_count(&diagram, *n).to_string(),
        Model::Chromatic(d) => chromatic_value(&diagram, d)?.to_string(),
    };
    let value = coefficient(&g, &model)?;
    let mut r = Report::new("coeff", vec!["element", "model", "V", "E", "F", "raw", "coefficient"]);
    r.config("model", model.to_string());
    if let Model::Chromatic(d) = &model {
        r.config("d", d.to_string());
    }
    r.config("element", args.element.as_str());
    r.set("element", g.to_string());
    r.set("vertices", diagram.vertex_count());
    r.set("edges", diagram.edge_count());
    r.set("faces", diagram.face_count());
    r.set("raw", raw.clone());
    r.set("coefficient", value.to_string());
    r.row(vec![
        g.to_string(),
        model.to_string(),
        diagram.vertex_count().to_string(),
        diagram.edge_count().to_string(),
        diagram.face_count().to_string(),
        raw,
        value.to_string(),
    ]);
    Ok(r)
}

fn resolve_param(p: &ParamArgs) -> Outcome2<LoopParameter> {
    match (&p.d, p.m, p.variant) {
        (Some(d), None, None) => Ok(LoopParameter::exact(parse_rational(d)?)),
        (None, Some(m), Some(v)) => Ok(LoopParameter::family(m, v.into(), p.digits)?),
        _ => Err(Failure("give either --d or both --m and --variant".into())),
    }
}

fn param_config(r: &mut Report, d: &LoopParameter, p: &ParamArgs) {
    match (&p.d, p.m, p.variant) {
        (Some(s), _, _) => r.config("d", s.as_str()),
        (None, Some(m), Some(v)) => {
            r.config("m", m);
            r.config("variant", Variant::from(v).to_string());
        }
        _ => {}
    }
    r.config("digits", if d.is_exact() { Value::Null } else { json!(p.digits) });
}

fn number(n: &Number) -> Value {
    Value::String(n.to_string())
}

fn d_annotation(r: &mut Report, d: &LoopParameter) {
    // exact values print as p/q, enclosures as their decimal midpoint
    r.set("d", d.to_string());
    r.set("exact", d.is_exact());
    if let Some(digits) = d.digits() {
        r.set("digits", digits);
        r.set("d_enclosure", json!([decimal(d.lower(), digits, false), decimal(d.upper(), digits, true)]));
    }
}

fn decimal(q: BigRational, digits: u32, up: bool) -> String {
    thompson_renorm::renorm::decimal_string(&q, digits, up)
}

fn start_vector(s: Start) -> Q4Vector<BigRational> {
    match s {
        Start::B1 => Q4Vector::b1(),
        Start::B2 => Q4Vector::b2(),
        Start::B3 => Q4Vector::b3(),
    }
}

fn float(x: f64) -> String {
    format!("{x:.prec$e}", prec = FLOAT_DIGITS - 1)
}

fn renorm_command(cmd: &RenormCommand, seed: u64) -> Outcome2<Report> {
    match cmd {
        RenormCommand::Iterate { param, steps, start } => {
            let d = resolve_param(param)?;
            let norms = iterate_norms(&start_vector(*start), &d, *steps)?;
            let m = find_m(&d)?;
            let mut r = Report::new("renorm iterate", vec!["n", "l1"]);
            param_config(&mut r, &d, param);
            r.config("steps", *steps);
            r.config("start", format!("{start:?}").to_lowercase());
            d_annotation(&mut r, &d);
            r.set("M", number(&m));
            r.set("steps", norms.iter().map(|s| json!({ "n": s.n, "l1": number(&s.l1) })).collect::<Vec<_>>());
            for s in &norms {
                r.row(vec![s.n.to_string(), s.l1.to_string()]);
            }
            Ok(r)
        }
        RenormCommand::Certify { param, nmax } => {
            let d = resolve_param(param)?;
            let outcome = find_certificate(&d, *nmax)?;
            let mut r = Report::new("renorm certify", vec!["n", "l1", "MK"]);
            param_config(&mut r, &d, param);
            r.config("nmax", *nmax);
            d_annotation(&mut r, &d);
            let (m, shown) = match &outcome {
                Outcome::Certified(c) => (c.m.clone(), c.n),
                Outcome::Failed(f) => (f.m.clone(), f.steps),
            };
            r.set("M", number(&m));
            let norms = if shown == 0 { Vec::new() } else { iterate_norms(&Q4Vector::b1(), &d, shown)? };
            r.set("steps", norms.iter().map(|s| json!({ "n": s.n, "l1": number(&s.l1) })).collect::<Vec<_>>());
            for s in &norms {
                let mk = mk_number(&m, &s.l1);
                r.row(vec![s.n.to_string(), s.l1.to_string(), mk]);
            }
            match &outcome {
                Outcome::Certified(c) => {
                    r.set("certificate", json!({ "n": c.n, "K": number(&c.k), "MK": number(&c.product) }));
                    r.notes.push(format!("certificate: n={} K={} MK={}", c.n, c.k, c.product));
                }
                Outcome::Failed(f) => {
                    r.set("certificate", Value::Null);
                    r.set(
                        "failure",
                        json!({
                            "reason": f.reason.to_string(),
                            "steps": f.steps,
                            "best": f.best.as_ref().map(|(n, v)| json!({ "n": n, "MK": number(v) })),
                        }),
                    );
                    r.notes.push(format!("no certificate: {}", f.reason));
                }
            }
            Ok(r)
        }
        RenormCommand::Scan { variant, m_from, m_to, d3, nmax, digits } => {
            let variants: Vec<Variant> = match variant {
                ScanVariant::Plus => vec![Variant::Plus],
                ScanVariant::Minus => vec![Variant::Minus],
                ScanVariant::Both => vec![Variant::Plus, Variant::Minus],
            };
            let report = scan(*m_from, *m_to, &variants, *d3, *nmax, *digits)?;
            let mut r = Report::new(
                "renorm scan",
                vec!["variant", "m", "d", "status", "n", "K", "M", "MK", "reason", "best_n", "best_MK", "nmax", "digits"],
            );
            r.config("variant", format!("{variant:?}").to_lowercase());
            r.config("m_from", *m_from);
            r.config("m_to", *m_to);
            r.config("d3", *d3);
            r.config("nmax", *nmax);
            r.config("digits", *digits);
            let rows: Vec<Value> = report.rows.iter().map(|row| scan_row(row, &mut r, *nmax, *digits)).collect();
            r.set("rows", rows);
            let verdicts: Vec<Value> = report
                .verdicts
                .iter()
                .map(|v| json!({ "variant": v.variant.to_string(), "matches": v.matches(), "assessed": v.assessed, "mismatches": v.mismatches }))
                .collect();
            r.set("variants", verdicts);
            r.set("d3_certified", report.d3);
            let line = report.verdict_line();
            r.set("verdict", line.clone());
            r.notes.push(line);
            Ok(r)
        }
        RenormCommand::Bound { d, samples } => {
            let dv = parse_rational(d)?;
            let b = bound_check(&dv, *samples, seed)?;
            let mut r = Report::new("renorm bound", vec!["point", "bound_expression"]);
            r.config("d", d.as_str());
            r.config("samples", *samples);
            r.set("d", dv.to_string());
            r.set("M", b.m.to_string());
            r.set("samples", b.samples);
            r.set("violations", b.violations);
            r.set("expression_violations", b.expression_violations);
            r.set("max_norm", b.max_norm.to_string());
            let mut extremes = Map::new();
            for (name, v) in &b.extremes {
                extremes.insert((*name).to_string(), Value::String(v.to_string()));
                r.row(vec![(*name).to_string(), v.to_string()]);
            }
            r.set("extremes", Value::Object(extremes));
            r.set("extreme_max_at_b1", b.extreme_max_at_b1);
            r.set("passed", b.passed());
            r.notes.push(format!("violations={} max_norm={} M={}", b.violations, b.max_norm, b.m));
            Ok(r)
        }
        RenormCommand::Squares { d, samples } => {
            let dv = parse_rational(d)?;
            let s = compare_square_forms(&dv, *samples, seed)?;
            let mut r = Report::new("renorm squares", vec!["line", "coordinate", "max_discrepancy", "agrees"]);
            r.config("d", d.as_str());
            r.config("samples", *samples);
            r.set("d", dv.to_string());
            let lines: Vec<Value> = s
                .lines
                .iter()
                .map(|l| {
                    let agrees = l.max_discrepancy == BigRational::from_integer(0.into());
                    r.row(vec![l.name.to_string(), l.coordinate.to_string(), l.max_discrepancy.to_string(), agrees.to_string()]);
                    json!({ "line": l.name, "coordinate": l.coordinate, "max_discrepancy": l.max_discrepancy.to_string(), "agrees": agrees })
                })
                .collect();
            r.set("lines", lines);
            r.set("b3_at_unit_r", json!({ "raw": s.b3_at_unit_r.0.to_string(), "printed": s.b3_at_unit_r.1.to_string() }));
            Ok(r)
        }
        RenormCommand::Profile { param, steps } => {
            let d = resolve_param(param)?;
            let (cert, rows) = decay_profile(&d, *steps)?;
            let mut r = Report::new("renorm profile", vec!["n", "K", "log_K", "ratio", "bound_holds"]);
            param_config(&mut r, &d, param);
            r.config("steps", *steps);
            r.config("float_digits", FLOAT_DIGITS);
            d_annotation(&mut r, &d);
            r.set("M", number(&cert.m));
            r.set("certificate", json!({ "n": cert.n, "K": number(&cert.k), "MK": number(&cert.product) }));
            let opt = |x: Option<f64>| x.map(float);
            let json_rows: Vec<Value> = rows
                .iter()
                .map(|row| {
                    r.row(vec![
                        row.n.to_string(),
                        row.k.to_string(),
                        opt(row.log_k).unwrap_or_default(),
                        opt(row.ratio).unwrap_or_default(),
                        row.bound_holds.map(|b| b.to_string()).unwrap_or_default(),
                    ]);
                    json!({ "n": row.n, "K": number(&row.k), "log_K": opt(row.log_k), "ratio": opt(row.ratio), "bound_holds": row.bound_holds })
                })
                .collect();
            r.set("rows", json_rows);
            Ok(r)
        }
    }
}

fn find_m(d: &LoopParameter) -> Outcome2<Number> {
    Ok(match find_certificate(d, 1)? {
        Outcome::Certified(c) => c.m,
        Outcome::Failed(f) => f.m,
    })
}

fn mk_number(m: &Number, k: &Number) -> String {
    let product = m.value() * k.value();
    match k.digits().or(m.digits()) {
        None => product.to_string(),
        Some(digits) => decimal(product, digits, true),
    }
}

fn scan_row(row: &ScanRow, r: &mut Report, nmax: usize, digits: u32) -> Value {
    let (variant, m) = match row.family() {
        Some((m, v)) => (v.to_string(), Some(m)),
        None => ("explicit".to_string(), None),
    };
    let d = row.d.to_string();
    let (status, n, k, mm, mk, reason, best_n, best_mk) = match &row.outcome {
        Ok(Outcome::Certified(c)) => ("certified", Some(c.n), Some(c.k.to_string()), c.m.to_string(), Some(c.product.to_string()), None, None, None),
        Ok(Outcome::Failed(f)) => (
            "failed",
            None,
            None,
            f.m.to_string(),
            None,
            Some(f.reason.to_string()),
            f.best.as_ref().map(|b| b.0),
            f.best.as_ref().map(|b| b.1.to_string()),
        ),
        Err(e) => ("error", None, None, String::new(), None, Some(e.to_string()), None, None),
    };
    let cell = |x: &Option<String>| x.clone().unwrap_or_default();
    r.row(vec![
        variant.clone(),
        m.map(|m| m.to_string()).unwrap_or_default(),
        d.clone(),
        status.to_string(),
        n.map(|n| n.to_string()).unwrap_or_default(),
        cell(&k),
        mm.clone(),
        cell(&mk),
        cell(&reason),
        best_n.map(|n| n.to_string()).unwrap_or_default(),
        cell(&best_mk),
        nmax.to_string(),
        if row.d.is_exact() { String::new() } else { digits.to_string() },
    ]);
    json!({
        "variant": variant,
        "m": m,
        "d": d,
        "exact": row.d.is_exact(),
        "status": status,
        "n": n,
        "K": k,
        "M": mm,
        "MK": mk,
        "reason": reason,
        "best_n": best_n,
        "best_MK": best_mk,
        "nmax": nmax,
        "digits": if row.d.is_exact() { Value::Null } else { json!(digits) },
    })
}
