mod fan;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use limcan::grassmann::{
    brute_force_closure, brute_force_pair_closure, closure_orbit_set, in_closure, in_pair_closure,
    orbit_fingerprint, pair_closure_orbit_set, pair_orbit_fingerprint, OrbitFingerprint, Subspace,
};
use limcan::model::{
    build_model, integral_mu, multidegree_of_twisted_dualizing, twist_divisor_focus_x, twist_divisor_focus_y,
    Component, DivisorOnModel, MultiDegree,
};
use limcan::numdata::{associated_data, NumericalData};
use limcan::poset::{build_poset, components_of, count_formulas, key_label};
use limcan::rational::{parse_rational_list, Rational};
use limcan::strata::{
    key, region, stratum_dim, stratum_of, EnumerateOptions, StratumData, StratumDim, StratumKey,
};
use limcan::weier::weierstrass_degrees;
use limcan::{CurveConfig, Error};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "limcan", version, about = "Strata of limit canonical systems on two-component nodal curves")]
struct Cli {
    /// Output format; not every subcommand supports every format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for enumeration (0 = all cores).
    #[arg(long, global = true, env = "LIMCAN_JOBS", default_value_t = 0)]
    jobs: usize,
    /// Upper bound on candidate data examined during enumeration.
    #[arg(long, global = true, default_value_t = EnumerateOptions::default().cap)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
    Svg,
}

#[derive(Args, Debug, Clone)]
struct CurveArgs {
    #[arg(long)]
    gx: i64,
    #[arg(long)]
    gy: i64,
    /// Number of nodes; inferred from --mu or --labels when omitted.
    #[arg(long)]
    delta: Option<usize>,
    /// Comma-separated node labels (default p1,…,pδ).
    #[arg(long, value_delimiter = ',')]
    labels: Option<Vec<String>>,
    /// Drop the general-position assumption.
    #[arg(long)]
    no_general_position: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Numerical data (α, ρ, I) of a weight vector and an integer.
    Numdata {
        #[arg(long)]
        mu: String,
        #[arg(long, allow_hyphen_values = true)]
        upsilon: i64,
    },
    /// Dual graph, intersection matrix and twisted multidegrees.
    Model {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        mu: String,
    },
    /// Stratum of a weight vector, or of a stratum read back from JSON.
    Stratum {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, required_unless_present = "input")]
        mu: Option<String>,
        /// JSON stratum (as emitted by this command) to re-classify.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// All strata with dimensions and witnesses.
    Enumerate {
        #[command(flatten)]
        curve: CurveArgs,
    },
    /// Linear description of the weight region of a stratum.
    Region {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        mu: String,
    },
    /// Closure poset of the strata.
    Poset {
        #[command(flatten)]
        curve: CurveArgs,
    },
    /// Maximal strata and the closed-form counts.
    Components {
        #[command(flatten)]
        curve: CurveArgs,
    },
    /// Degree data of the limit Weierstrass divisor.
    Weierstrass {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        mu: String,
    },
    /// Torus orbit closure of a subspace or pair of subspaces (JSON input).
    OrbitClosure {
        #[arg(long)]
        input: PathBuf,
        /// Exponent bound of the brute-force one-parameter subgroups.
        #[arg(long, default_value_t = 3)]
        bound: i64,
    },
    /// Picture of the covering of the weight chart, δ ∈ {2, 3}.
    Fan {
        #[command(flatten)]
        curve: CurveArgs,
    },
}

#[derive(Debug)]
enum Failure {
    Flags(String),
    Math(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(m) => Failure::Flags(m),
            e => Failure::Math(e),
        }
    }
}

type Out = Result<String, Failure>;

fn config(c: &CurveArgs, mu_len: Option<usize>) -> Result<CurveConfig, Failure> {
    let delta = match (c.delta, mu_len, &c.labels) {
        (Some(d), Some(m), _) if d != m => {
            return Err(Failure::Flags(format!("--mu has {m} entries but --delta is {d}")))
        }
        (Some(d), _, Some(l)) if d != l.len() => {
            return Err(Failure::Flags(format!("--labels has {} entries but --delta is {d}", l.len())))
        }
        (Some(d), _, _) => d,
        (None, Some(m), _) => m,
        (None, None, Some(l)) => l.len(),
        (None, None, None) => return Err(Failure::Flags("--delta is required".into())),
    };
    let labels = c.labels.clone().unwrap_or_else(|| (1..=delta).map(|i| format!("p{i}")).collect());
    let mut cfg = CurveConfig::with_labels(c.gx, c.gy, labels).map_err(Failure::Math)?;
    cfg.general_position = !c.no_general_position;
    Ok(cfg)
}

fn mu_arg(s: &str) -> Result<Vec<Rational>, Failure> {
    parse_rational_list(s).map_err(|e| Failure::Flags(e.to_string()))
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn unsupported(fmt: Format, what: &str) -> Failure {
    Failure::Flags(format!("format {fmt:?} is not available for {what}").to_lowercase())
}

fn set_text(cfg: &CurveConfig, s: limcan::DeltaSet) -> String {
    format!("{{{}}}", s.iter().map(|p| cfg.labels[p].as_str()).collect::<Vec<_>>().join(","))
}

fn vec_text<T: ToString>(v: &[T]) -> String {
    format!("({})", v.iter().map(T::to_string).collect::<Vec<_>>().join(", "))
}

#[derive(Serialize)]
struct StratumReport<'a> {
    stratum: &'a StratumData,
    key: StratumKey,
    dim: StratumDim,
}

fn stratum_text(cfg: &CurveConfig, s: &StratumData) -> String {
    let d = stratum_dim(cfg, s);
    let opt = |x: Option<i64>| x.map_or("undefined".to_string(), |v| v.to_string());
    let mut t = String::new();
    let _ = writeln!(t, "alpha        {}", vec_text(&s.alpha));
    let _ = writeln!(t, "I            {}", set_text(cfg, s.i));
    let _ = writeln!(t, "beta         {}", vec_text(&s.beta));
    let _ = writeln!(t, "J            {}", set_text(cfg, s.j));
    let _ = writeln!(t, "gamma        {}", s.gamma);
    let _ = writeln!(t, "epsilon      {}", s.epsilon);
    let _ = writeln!(t, "alpha_tilde  {}", opt(s.alpha_tilde));
    let _ = writeln!(t, "beta_tilde   {}", opt(s.beta_tilde));
    let _ = writeln!(t, "witness_mu   {}", vec_text(&s.witness_mu));
    let _ = writeln!(t, "dim          {} (X {}, Y {})", d.dim, d.dim_x, d.dim_y);
    let _ = writeln!(t, "key          {}", key_label(cfg, &key(cfg, s)));
    t
}

fn cmd_numdata(fmt: Format, mu: &str, upsilon: i64) -> Out {
    let mu = mu_arg(mu)?;
    let d = associated_data(&mu, upsilon)?;
    match fmt {
        Format::Json => Ok(json(&d)),
        Format::Text => {
            let NumericalData { alpha, rho, i, level } = &d;
            Ok(format!(
                "alpha  {}\nrho    {}\nI      {:?}\nlevel  {}\n",
                vec_text(alpha),
                vec_text(rho),
                i.to_vec(),
                level
            ))
        }
        f => Err(unsupported(f, "numdata")),
    }
}

#[derive(Serialize)]
struct Entry {
    component: String,
    value: i64,
}

fn entries_of(m: &std::collections::BTreeMap<Component, i64>) -> Vec<Entry> {
    m.iter().map(|(c, &v)| Entry { component: c.to_string(), value: v }).collect()
}

#[derive(Serialize)]
struct ModelReport {
    mu: Vec<i64>,
    components: Vec<String>,
    nodes: Vec<(String, String)>,
    intersection_matrix: Vec<Vec<i64>>,
    focus_x: TwistReport,
    focus_y: TwistReport,
}

#[derive(Serialize)]
struct TwistReport {
    divisor: Vec<Entry>,
    multidegree: Vec<Entry>,
    total: i64,
}

fn twist_report(d: &DivisorOnModel, m: &MultiDegree) -> TwistReport {
    TwistReport { divisor: entries_of(&d.coefficients), multidegree: entries_of(&m.degrees), total: m.total() }
}

fn cmd_model(fmt: Format, curve: &CurveArgs, mu: &str) -> Out {
    let mu = mu_arg(mu)?;
    let cfg = config(curve, Some(mu.len()))?;
    let imu = integral_mu(&mu)?;
    let model = build_model(&imu)?;
    let dy = associated_data(&mu, cfg.g_y)?;
    let dx = associated_data(&mu, cfg.g_x)?;
    let tx = twist_divisor_focus_x(&model, &dy)?;
    let ty = twist_divisor_focus_y(&model, &dx)?;
    let mx = multidegree_of_twisted_dualizing(&model, &cfg, &tx)?;
    let my = multidegree_of_twisted_dualizing(&model, &cfg, &ty)?;
    let report = ModelReport {
        mu: imu,
        components: model.components.iter().map(Component::to_string).collect(),
        nodes: model.nodes.iter().map(|n| (n.ends.0.to_string(), n.ends.1.to_string())).collect(),
        intersection_matrix: model.intersection_matrix(),
        focus_x: twist_report(&tx, &mx),
        focus_y: twist_report(&ty, &my),
    };
    match fmt {
        Format::Json => Ok(json(&report)),
        Format::Text => {
            let w = report.components.iter().map(String::len).max().unwrap_or(1).max(4);
            let mut t = String::new();
            let _ = writeln!(t, "components: {}", report.components.join(" "));
            let _ = writeln!(t, "nodes: {}", report.nodes.iter().map(|(a, b)| format!("{a}-{b}")).collect::<Vec<_>>().join(" "));
            let _ = writeln!(t, "\nintersection matrix");
            let _ = write!(t, "{:>w$}", "");
            for c in &report.components {
                let _ = write!(t, " {c:>w$}");
            }
            t.push('\n');
            for (c, row) in report.components.iter().zip(&report.intersection_matrix) {
                let _ = write!(t, "{c:>w$}");
                for v in row {
                    let _ = write!(t, " {v:>w$}");
                }
                t.push('\n');
            }
            for (name, r) in [("focus X", &report.focus_x), ("focus Y", &report.focus_y)] {
                let _ = writeln!(t, "\n{name}: total degree {}", r.total);
                let _ = writeln!(t, "{:>w$} {:>8} {:>8}", "", "coeff", "degree");
                for (d, m) in r.divisor.iter().zip(&r.multidegree) {
                    let _ = writeln!(t, "{:>w$} {:>8} {:>8}", d.component, d.value, m.value);
                }
            }
            Ok(t)
        }
        f => Err(unsupported(f, "model")),
    }
}

fn cmd_stratum(fmt: Format, curve: &CurveArgs, mu: Option<&str>, input: Option<&PathBuf>) -> Out {
    let mu = match (mu, input) {
        (Some(m), _) => mu_arg(m)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            let v: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| Failure::Flags(format!("bad JSON: {e}")))?;
            let inner = v.get("stratum").cloned().unwrap_or(v);
            let s: StratumData =
                serde_json::from_value(inner).map_err(|e| Failure::Flags(format!("bad stratum JSON: {e}")))?;
            s.witness_mu
        }
        (None, None) => return Err(Failure::Flags("--mu or --input is required".into())),
    };
    let cfg = config(curve, Some(mu.len()))?;
    let s = stratum_of(&cfg, &mu)?;
    match fmt {
        Format::Json => Ok(json(&StratumReport { key: key(&cfg, &s), dim: stratum_dim(&cfg, &s), stratum: &s })),
        Format::Text => Ok(stratum_text(&cfg, &s)),
        f => Err(unsupported(f, "stratum")),
    }
}

#[derive(Serialize)]
struct EnumEntry<'a> {
    stratum: &'a StratumData,
    key: &'a StratumKey,
    dim: StratumDim,
    maximal: bool,
}

fn cmd_enumerate(fmt: Format, curve: &CurveArgs, opts: EnumerateOptions) -> Out {
    let cfg = config(curve, None)?;
    let poset = build_poset(&cfg, opts)?;
    let maximal: BTreeSet<usize> = poset.maximal().into_iter().collect();
    let entries: Vec<EnumEntry> = poset
        .nodes
        .iter()
        .enumerate()
        .map(|(i, s)| EnumEntry { stratum: s, key: &poset.keys[i], dim: stratum_dim(&cfg, s), maximal: maximal.contains(&i) })
        .collect();
    match fmt {
        Format::Json => Ok(json(&entries)),
        Format::Text => {
            let mut t = format!("{} strata, {} maximal\n", entries.len(), maximal.len());
            for e in &entries {
                let _ = writeln!(
                    t,
                    "{} dim {} witness {}{}",
                    key_label(&cfg, e.key),
                    e.dim.dim,
                    vec_text(&e.stratum.witness_mu),
                    if e.maximal { "  [maximal]" } else { "" }
                );
            }
            Ok(t)
        }
        f => Err(unsupported(f, "enumerate")),
    }
}

fn constraint_text(cfg: &CurveConfig, c: &limcan::feasibility::Constraint) -> String {
    use num_traits::{Signed, Zero};
    let mut lhs = String::new();
    for (p, a) in c.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let sign = if a.is_negative() { " - " } else if lhs.is_empty() { "" } else { " + " };
        let abs = a.abs();
        let coef = if abs == Rational::from_integer(1.into()) { String::new() } else { format!("{abs}·") };
        let _ = write!(lhs, "{}{}mu_{}", if lhs.is_empty() && a.is_negative() { "-" } else { sign }, coef, cfg.labels[p]);
    }
    if !c.constant.is_zero() {
        let _ = write!(lhs, " {} {}", if c.constant.is_negative() { "-" } else { "+" }, c.constant.abs());
    }
    let rel = match c.rel {
        limcan::feasibility::Relation::Eq => "=",
        limcan::feasibility::Relation::Gt => ">",
        limcan::feasibility::Relation::Ge => ">=",
    };
    format!("{lhs} {rel} 0")
}

fn cmd_region(fmt: Format, curve: &CurveArgs, mu: &str) -> Out {
    let mu = mu_arg(mu)?;
    let cfg = config(curve, Some(mu.len()))?;
    let s = stratum_of(&cfg, &mu)?;
    let r = region(&cfg, &s);
    match fmt {
        Format::Json => Ok(json(&r)),
        Format::Text => {
            let mut t = String::new();
            for c in r.equalities.iter().chain(&r.strict_inequalities) {
                let _ = writeln!(t, "{}", constraint_text(&cfg, c));
            }
            let _ = writeln!(t, "({})", r.note);
            Ok(t)
        }
        f => Err(unsupported(f, "region")),
    }
}

fn cmd_poset(fmt: Format, curve: &CurveArgs, opts: EnumerateOptions) -> Out {
    let cfg = config(curve, None)?;
    let poset = build_poset(&cfg, opts)?;
    match fmt {
        Format::Json => Ok(json(&poset)),
        Format::Dot => Ok(poset.to_dot(&cfg)),
        Format::Text => {
            let mut t = String::new();
            for (i, k) in poset.keys.iter().enumerate() {
                let below: Vec<String> = poset.covers.iter().filter(|c| c.0 == i).map(|c| c.1.to_string()).collect();
                let _ = writeln!(t, "{i}: {} dim {} covers [{}]", key_label(&cfg, k), poset.dims[i], below.join(", "));
            }
            Ok(t)
        }
        f => Err(unsupported(f, "poset")),
    }
}

#[derive(Serialize)]
struct ComponentsReport {
    count: usize,
    maximal: Vec<StratumKey>,
    formulas: Option<limcan::poset::CountFormulas>,
}

fn cmd_components(fmt: Format, curve: &CurveArgs, opts: EnumerateOptions) -> Out {
    let cfg = config(curve, None)?;
    let poset = build_poset(&cfg, opts)?;
    let c = components_of(&poset);
    let formulas = count_formulas(&cfg).ok();
    let report = ComponentsReport { count: c.count, maximal: c.maximal, formulas };
    match fmt {
        Format::Json => Ok(json(&report)),
        Format::Text => {
            let mut t = String::new();
            let _ = writeln!(t, "components            {}", report.count);
            if let Some(f) = &report.formulas {
                let none = || "-".to_string();
                let _ = writeln!(t, "n_delta(g_X)          {}", f.n_delta_gx);
                let _ = writeln!(t, "n_delta(g_Y)          {}", f.n_delta_gy);
                let _ = writeln!(t, "lower bound           {}", f.lower_bound.clone().unwrap_or_else(none));
                let _ = writeln!(t, "equal-genera formula  {}", f.statement1_value.clone().unwrap_or_else(none));
                let _ = writeln!(t, "delta = 2 formula     {}", f.closed_form_delta2.clone().unwrap_or_else(none));
                let _ = writeln!(t, "irreducible predicted {}", f.irreducible_predicted);
            }
            for k in &report.maximal {
                let _ = writeln!(t, "  {}", key_label(&cfg, k));
            }
            Ok(t)
        }
        f => Err(unsupported(f, "components")),
    }
}

fn cmd_weierstrass(fmt: Format, curve: &CurveArgs, mu: &str) -> Out {
    let mu = mu_arg(mu)?;
    let cfg = config(curve, Some(mu.len()))?;
    let s = stratum_of(&cfg, &mu)?;
    let w = weierstrass_degrees(&cfg, &s);
    match fmt {
        Format::Json => Ok(json(&w)),
        Format::Text => {
            let mut t = String::new();
            let _ = writeln!(t, "deg R_X       {}", w.deg_r_x);
            let _ = writeln!(t, "deg R_Y       {}", w.deg_r_y);
            let _ = writeln!(t, "node coeffs   {}", vec_text(&w.node_coeffs));
            let _ = writeln!(t, "total         {}", w.total);
            let _ = writeln!(
                t,
                "normalized    R_X {} R_Y {} nodes {} total {}",
                w.normalized.deg_r_x,
                w.normalized.deg_r_y,
                vec_text(&w.normalized.node_coeffs),
                w.normalized.total
            );
            for warn in &w.warnings {
                let _ = writeln!(t, "warning: {warn}");
            }
            let _ = writeln!(t, "({})", w.note);
            Ok(t)
        }
        f => Err(unsupported(f, "weierstrass")),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OrbitInput {
    Pair {
        v: Subspace,
        w: Subspace,
        lambda: i64,
        tau: i64,
        #[serde(default)]
        query: Option<(Subspace, Subspace)>,
    },
    Single {
        #[serde(flatten)]
        v: Subspace,
        #[serde(default)]
        query: Option<Subspace>,
    },
}

#[derive(Serialize)]
struct OrbitReport {
    orbit: OrbitFingerprint,
    predicted: BTreeSet<OrbitFingerprint>,
    brute_force_bound: i64,
    brute_force_count: usize,
    missing_from_brute_force: usize,
    unpredicted_in_brute_force: usize,
    agree: bool,
    query_in_closure: Option<bool>,
}

fn cmd_orbit(fmt: Format, input: &PathBuf, bound: i64) -> Out {
    let text = std::fs::read_to_string(input).map_err(|e| Failure::Io(format!("{}: {e}", input.display())))?;
    let parsed: OrbitInput =
        serde_json::from_str(&text).map_err(|e| Failure::Flags(format!("bad orbit-closure JSON: {e}")))?;
    let (orbit, predicted, brute, query) = match parsed {
        OrbitInput::Single { v, query } => {
            let q = query.map(|w| in_closure(&w, &v)).transpose()?;
            (orbit_fingerprint(&v), closure_orbit_set(&v)?, brute_force_closure(&v, bound)?, q)
        }
        OrbitInput::Pair { v, w, lambda, tau, query } => {
            let q = query.map(|(a, b)| in_pair_closure((&a, &b), (&v, &w), lambda, tau)).transpose()?;
            (
                pair_orbit_fingerprint(&v, &w, lambda, tau),
                pair_closure_orbit_set(&v, &w, lambda, tau)?,
                brute_force_pair_closure(&v, &w, lambda, tau, bound)?,
                q,
            )
        }
    };
    let report = OrbitReport {
        orbit,
        brute_force_bound: bound,
        brute_force_count: brute.len(),
        missing_from_brute_force: predicted.difference(&brute).count(),
        unpredicted_in_brute_force: brute.difference(&predicted).count(),
        agree: predicted == brute,
        query_in_closure: query,
        predicted,
    };
    match fmt {
        Format::Json => Ok(json(&report)),
        Format::Text => {
            let mut t = String::new();
            let _ = writeln!(t, "predicted orbits      {}", report.predicted.len());
            let _ = writeln!(t, "brute-force orbits    {} (|u_i| <= {bound})", report.brute_force_count);
            let _ = writeln!(t, "missing / unpredicted {} / {}", report.missing_from_brute_force, report.unpredicted_in_brute_force);
            let _ = writeln!(t, "agree                 {}", report.agree);
            if let Some(q) = report.query_in_closure {
                let _ = writeln!(t, "query in closure      {q}");
            }
            for fp in &report.predicted {
                let sup: Vec<String> = fp
                    .supports
                    .iter()
                    .map(|s| s.iter().map(|b| format!("{:?}", b.to_vec())).collect::<Vec<_>>().join(" "))
                    .collect();
                let _ = writeln!(t, "  support {} invariants {}", sup.join(" | "), vec_text(&fp.invariants));
            }
            Ok(t)
        }
        f => Err(unsupported(f, "orbit-closure")),
    }
}

fn cmd_fan(fmt: Format, curve: &CurveArgs, opts: EnumerateOptions) -> Out {
    let cfg = config(curve, None)?;
    if !(2..=3).contains(&cfg.delta) {
        return Err(Failure::Math(Error::Unsupported(format!(
            "fan pictures need δ ∈ {{2, 3}}, got δ = {}",
            cfg.delta
        ))));
    }
    let poset = build_poset(&cfg, opts)?;
    let f = fan::build_fan(&cfg, &poset)?;
    match fmt {
        Format::Svg => Ok(fan::to_svg(&f, &cfg)),
        Format::Json => Ok(json(&f)),
        Format::Text => {
            let mut t = String::new();
            for m in &f.marks {
                let _ = writeln!(t, "{:<9} {} {}", m.class, vec_text(&m.chart), m.stratum);
            }
            for s in &f.segments {
                let _ = writeln!(t, "{:<9} {} -- {}", s.class, vec_text(&s.from), vec_text(&s.to));
            }
            Ok(t)
        }
        f => Err(unsupported(f, "fan")),
    }
}

fn run(cli: &Cli) -> Out {
    let opts = EnumerateOptions { cap: cli.cap };
    let fmt = cli.format;
    match &cli.command {
        Command::Numdata { mu, upsilon } => cmd_numdata(fmt, mu, *upsilon),
        Command::Model { curve, mu } => cmd_model(fmt, curve, mu),
        Command::Stratum { curve, mu, input } => cmd_stratum(fmt, curve, mu.as_deref(), input.as_ref()),
        Command::Enumerate { curve } => cmd_enumerate(fmt, curve, opts),
        Command::Region { curve, mu } => cmd_region(fmt, curve, mu),
        Command::Poset { curve } => cmd_poset(fmt, curve, opts),
        Command::Components { curve } => cmd_components(fmt, curve, opts),
        Command::Weierstrass { curve, mu } => cmd_weierstrass(fmt, curve, mu),
        Command::OrbitClosure { input, bound } => cmd_orbit(fmt, input, *bound),
        Command::Fan { curve } => cmd_fan(fmt, curve, opts),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
            eprintln!("limcan: cannot set up {} worker threads: {e}", cli.jobs);
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(text) => {
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, text) {
                    eprintln!("limcan: {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Flags(m)) => {
            eprintln!("limcan: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Math(e @ Error::CapExceeded { .. })) => {
            eprintln!("limcan: {e}");
            ExitCode::from(4)
        }
        Err(Failure::Math(e)) => {
            eprintln!("limcan: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Io(m)) => {
            eprintln!("limcan: {m}");
            ExitCode::from(1)
        }
    }
}
