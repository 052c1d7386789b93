//! Command-line front end.
//!
//! [`run_args`] parses the arguments, dispatches to the analysis routines and
//! returns the rendered report together with the exit status. Nothing here
//! touches stdout or the filesystem; the binary does that.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Number, Value};

use crate::error::Error;
use crate::gramian::{
    closed_form_det, ellipse_area_paper, gramian_closed_form, gramian_quadrature,
    min_energy_to_reach, mixed_set,
};
use crate::pendulum::{optimal_inertia_ratio, recommend, PendulumParams};
use crate::reachability::{
    determinant_volume_measure, min_energy, optimal_ratio, p_matrix_det, sweep_objective,
    volume_measures,
};
use crate::synthesis::{default_horizon, synthesize_min_energy, SynthesisProblem};
use crate::systems::{classify, CoupledSystem, FirstOrderPair, StabilityClass, State4};

pub const SCHEMA: &str = "silverreach/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "silverreach", version, about = "Unit-energy reachable sets of two unstable plants with a shared input")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format; defaults to csv for `sweep` and `synthesize`, json otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

/// A comma-separated list taken as one value. Spelled as an alias so the
/// derive does not treat it as a repeated flag.
pub type Floats = Vec<f64>;

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Gramian P, volume measures and ratio objective of a coupled plant.
    Analyze {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_list)]
        pi: Floats,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_list, default_value = "1,1")]
        v: Floats,
    },
    /// Gramian, area and minimum energy of a first-order pair.
    Gramian {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_list)]
        alpha: Floats,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_list)]
        beta: Floats,
        /// Optional 2-vector target for the minimum-energy query.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_list)]
        target: Option<Floats>,
    },
    /// Optimal time-constant ratio.
    Optimize,
    /// Samples of the ratio objective on (0, 1].
    Sweep {
        #[arg(long, default_value_t = 200)]
        n: usize,
    },
    /// Minimum-energy trajectory through a target state.
    Synthesize {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_list)]
        pi: Floats,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_list, default_value = "1,1")]
        v: Floats,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_list)]
        target: Floats,
        /// Half-horizon T; defaults to 8 / min(pi).
        #[arg(long)]
        horizon: Option<f64>,
        /// Hold interval; defaults to T / 2000.
        #[arg(long)]
        dt: Option<f64>,
    },
    /// Linearized rigid-body pendulum and silver-ratio redesign.
    Pendulum {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_list)]
        inertia: Floats,
        #[arg(long)]
        mass: f64,
        #[arg(long)]
        arm: f64,
        #[arg(long, default_value_t = 9.81)]
        g: f64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze { .. } => "analyze",
            Command::Gramian { .. } => "gramian",
            Command::Optimize => "optimize",
            Command::Sweep { .. } => "sweep",
            Command::Synthesize { .. } => "synthesize",
            Command::Pendulum { .. } => "pendulum",
        }
    }

    fn default_format(&self) -> OutputFormat {
        match self {
            Command::Sweep { .. } | Command::Synthesize { .. } => OutputFormat::Csv,
            _ => OutputFormat::Json,
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| format!("`{t}` is not a number: {e}"))
        })
        .collect()
}

/// A validated invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        let format = cli.format.unwrap_or_else(|| cli.command.default_format());
        Self {
            command: cli.command,
            format,
            out: cli.out,
        }
    }
}

/// Rendered report and exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub body: String,
}

impl Output {
    pub fn is_success(&self) -> bool {
        self.code == EXIT_OK
    }
}

/// Failure before or during dispatch.
#[derive(Debug, Clone, PartialEq)]
pub enum RunError {
    Usage(String),
    Invalid { flag: &'static str, message: String },
    Analysis(Error),
}

impl RunError {
    pub fn code(&self) -> &'static str {
        match self {
            RunError::Usage(_) => "usage_error",
            RunError::Invalid { .. } => "invalid_argument",
            RunError::Analysis(e) => e.code(),
        }
    }

    fn message(&self) -> String {
        match self {
            RunError::Usage(m) => m.clone(),
            RunError::Invalid { flag, message } => format!("--{flag}: {message}"),
            RunError::Analysis(e) => e.to_string(),
        }
    }

    /// `{"schema": ..., "error": {"code": ..., "message": ...}}`
    pub fn to_json(&self) -> String {
        let v = json!({
            "schema": SCHEMA,
            "error": { "code": self.code(), "message": self.message() },
        });
        let mut s = serde_json::to_string_pretty(&v).expect("serializable");
        s.push('\n');
        s
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Analysis(e)
    }
}

/// Parse `args` (including the program name) and run.
pub fn run_args<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&RunConfig::from(cli)),
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                Output {
                    code: EXIT_OK,
                    body: e.to_string(),
                }
            } else {
                let msg = e.kind().to_string();
                let detail = e.to_string();
                let first = detail
                    .lines()
                    .find(|l| l.starts_with("error:"))
                    .map(|l| l.trim_start_matches("error:").trim().to_string())
                    .unwrap_or(msg);
                failure(&RunError::Usage(first))
            }
        }
    }
}

fn failure(e: &RunError) -> Output {
    Output {
        code: EXIT_INVALID,
        body: e.to_json(),
    }
}

pub fn run(config: &RunConfig) -> Output {
    match dispatch(config) {
        Ok(body) => Output {
            code: EXIT_OK,
            body,
        },
        Err(e) => failure(&e),
    }
}

fn pair(flag: &'static str, values: &[f64]) -> Result<[f64; 2], RunError> {
    match values {
        [a, b] => Ok([*a, *b]),
        _ => Err(RunError::Invalid {
            flag,
            message: format!("expected 2 comma-separated values, got {}", values.len()),
        }),
    }
}

fn positive(flag: &'static str, value: f64) -> Result<f64, RunError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(RunError::Invalid {
            flag,
            message: format!("must be finite and > 0, got {value}"),
        })
    }
}

fn dispatch(config: &RunConfig) -> Result<String, RunError> {
    match &config.command {
        Command::Analyze { pi, v } => {
            let [p1, p2] = pair("pi", pi)?;
            let [v1, v2] = pair("v", v)?;
            let sys = CoupledSystem::new(p1, p2, v1, v2)?;
            render(config.format, analyze_report(&sys))
        }
        Command::Gramian {
            alpha,
            beta,
            target,
        } => {
            let [a1, a2] = pair("alpha", alpha)?;
            let [b1, b2] = pair("beta", beta)?;
            let sys = FirstOrderPair::new(a1, a2, b1, b2)?;
            let target = target.as_deref().map(|t| pair("target", t)).transpose()?;
            render(config.format, gramian_report(&sys, target)?)
        }
        Command::Optimize => render(config.format, optimize_report()),
        Command::Sweep { n } => {
            let samples = sweep_objective(*n)?;
            match config.format {
                OutputFormat::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    let io = |e: csv::Error| RunError::Usage(e.to_string());
                    w.write_record(["epsilon", "f"]).map_err(io)?;
                    for (e, f) in &samples {
                        w.write_record([e.to_string(), f.to_string()]).map_err(io)?;
                    }
                    let bytes = w.into_inner().map_err(|e| RunError::Usage(e.to_string()))?;
                    Ok(String::from_utf8(bytes).expect("ascii"))
                }
                fmt => {
                    let rows: Vec<Value> = samples
                        .iter()
                        .map(|(e, f)| json!({ "epsilon": num(*e), "f": num(*f) }))
                        .collect();
                    let mut m = header("sweep");
                    m.insert("n".into(), json!(n));
                    m.insert("samples".into(), Value::Array(rows));
                    render(fmt, Value::Object(m))
                }
            }
        }
        Command::Synthesize {
            pi,
            v,
            target,
            horizon,
            dt,
        } => {
            let [p1, p2] = pair("pi", pi)?;
            let [v1, v2] = pair("v", v)?;
            let sys = CoupledSystem::new(p1, p2, v1, v2)?;
            let z = match target.as_slice() {
                [a, b, c, d] => State4::try_new(*a, *b, *c, *d)?,
                _ => {
                    return Err(RunError::Invalid {
                        flag: "target",
                        message: format!("expected 4 comma-separated values, got {}", target.len()),
                    })
                }
            };
            let horizon = match horizon {
                Some(h) => positive("horizon", *h)?,
                None => default_horizon(&sys),
            };
            let dt = match dt {
                Some(d) => positive("dt", *d)?,
                None => horizon / 2000.0,
            };
            let problem = SynthesisProblem::new(sys, z, horizon, dt)?;
            let traj = synthesize_min_energy(&problem)?;
            match config.format {
                OutputFormat::Csv => {
                    let mut buf = Vec::new();
                    traj.write_csv(&mut buf)
                        .map_err(|e| RunError::Usage(e.to_string()))?;
                    Ok(String::from_utf8(buf).expect("ascii"))
                }
                fmt => {
                    let mut m = header("synthesize");
                    m.insert("system".into(), system_json(&sys));
                    m.insert("target".into(), state_json(&z));
                    m.insert("horizon".into(), num(horizon));
                    m.insert("dt".into(), num(traj.dt()));
                    m.insert("samples".into(), json!(traj.len()));
                    m.insert("energy".into(), num(traj.energy));
                    let predicted = min_energy(&sys, &z).ok();
                    m.insert("predicted_energy".into(), predicted.map_or(Value::Null, num));
                    m.insert("state_at_zero".into(), state_json(traj.state_at(0.0)));
                    m.insert(
                        "final_state".into(),
                        state_json(traj.states.last().expect("nonempty")),
                    );
                    render(fmt, Value::Object(m))
                }
            }
        }
        Command::Pendulum {
            inertia,
            mass,
            arm,
            g,
        } => {
            let [i1, i2] = pair("inertia", inertia)?;
            let params = PendulumParams::new(i1, i2, *mass, *arm, *g)?;
            render(config.format, pendulum_report(&params)?)
        }
    }
}

/// 17 significant digits, positional where reasonable, trailing zeros trimmed.
pub fn format_sig17(x: f64) -> String {
    if x == 0.0 {
        return "0.0".to_string();
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let sign = if negative { "-" } else { "" };
    if !(-7..=20).contains(&exp) {
        let m = trim_fraction(&format!("{}.{}", &digits[..1], &digits[1..]));
        return format!("{sign}{m}e{exp}");
    }
    let body = if exp < 0 {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    } else {
        let int_len = exp as usize + 1;
        if int_len >= digits.len() {
            format!("{}{}.0", digits, "0".repeat(int_len - digits.len()))
        } else {
            format!("{}.{}", &digits[..int_len], &digits[int_len..])
        }
    };
    format!("{sign}{}", trim_fraction(&body))
}

fn trim_fraction(s: &str) -> String {
    match s.split_once('.') {
        Some((int, frac)) => {
            let frac = frac.trim_end_matches('0');
            if frac.is_empty() {
                format!("{int}.0")
            } else {
                format!("{int}.{frac}")
            }
        }
        None => s.to_string(),
    }
}

/// JSON number with the fixed 17-digit formatting; non-finite becomes null.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(Number::from_str(&format_sig17(x)).expect("valid JSON number"))
}

fn header(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("command".into(), json!(command));
    m
}

fn system_json(sys: &CoupledSystem) -> Value {
    json!({ "pi1": num(sys.pi1()), "pi2": num(sys.pi2()), "v1": num(sys.v1()), "v2": num(sys.v2()) })
}

fn state_json(z: &State4) -> Value {
    json!({ "x1": num(z.x1), "dx1": num(z.dx1), "x2": num(z.x2), "dx2": num(z.dx2) })
}

fn analyze_report(sys: &CoupledSystem) -> Value {
    let r = volume_measures(sys);
    let opt = optimal_ratio();
    let mut m = header("analyze");
    m.insert("system".into(), system_json(sys));
    m.insert(
        "p_matrix".into(),
        json!({ "w11": num(r.p_matrix.w11), "w12": num(r.p_matrix.w12), "w22": num(r.p_matrix.w22) }),
    );
    m.insert("det_p".into(), num(p_matrix_det(sys)));
    m.insert("epsilon".into(), num(r.epsilon));
    m.insert("objective".into(), num(r.objective));
    m.insert("objective_fraction_of_optimum".into(), num(r.objective / opt.max_objective));
    m.insert("paper_volume_measure".into(), num(r.paper_volume_measure));
    m.insert(
        "determinant_volume_measure".into(),
        num(determinant_volume_measure(sys)),
    );
    m.insert("geometric_volume".into(), num(r.geometric_volume));
    m.insert("degenerate".into(), json!(r.degenerate));
    Value::Object(m)
}

fn gramian_report(sys: &FirstOrderPair, target: Option<[f64; 2]>) -> Result<Value, RunError> {
    let class = classify(sys);
    let mut m = header("gramian");
    m.insert(
        "pair".into(),
        json!({
            "alpha1": num(sys.alpha1()), "alpha2": num(sys.alpha2()),
            "beta1": num(sys.beta1()), "beta2": num(sys.beta2()),
        }),
    );
    m.insert("class".into(), json!(class.as_str()));
    if class == StabilityClass::Mixed {
        let set = mixed_set(sys)?;
        m.insert(
            "mixed_set".into(),
            json!({
                "q11": num(set.form[(0, 0)]),
                "q22": num(set.form[(1, 1)]),
                "sqrt_det": num(set.sqrt_det()),
                "geometric_area": num(set.volume()),
            }),
        );
    } else {
        let w = gramian_closed_form(sys)?;
        let q = gramian_quadrature(sys, 1e-8)?;
        let area = ellipse_area_paper(sys)?;
        m.insert(
            "gramian".into(),
            json!({ "w11": num(w.w11), "w12": num(w.w12), "w22": num(w.w22), "det": num(closed_form_det(sys)?) }),
        );
        m.insert(
            "quadrature".into(),
            json!({ "rtol": num(1e-8), "w11": num(q.w11), "w12": num(q.w12), "w22": num(q.w22) }),
        );
        m.insert(
            "area".into(),
            json!({ "paper": num(area.paper), "geometric": num(area.geometric), "degenerate": area.degenerate }),
        );
    }
    if let Some(t) = target {
        let e = min_energy_to_reach(sys, t)?;
        m.insert(
            "min_energy".into(),
            json!({ "target": [num(t[0]), num(t[1])], "energy": num(e) }),
        );
    }
    Ok(Value::Object(m))
}

fn optimize_report() -> Value {
    let o = optimal_ratio();
    let mut m = header("optimize");
    m.insert("epsilon_star".into(), num(o.epsilon_star));
    m.insert("delta_s".into(), num(o.delta_s));
    m.insert("inertia_ratio".into(), num(optimal_inertia_ratio()));
    m.insert("searched_epsilon".into(), num(o.searched));
    m.insert("max_objective".into(), num(o.max_objective));
    Value::Object(m)
}

fn pendulum_report(params: &PendulumParams) -> Result<Value, RunError> {
    let r = recommend(params)?;
    let opt = |g: Option<f64>| g.map_or(Value::Null, num);
    let mut m = header("pendulum");
    m.insert(
        "params".into(),
        json!({
            "i1": num(params.i1), "i2": num(params.i2), "mass": num(params.mass),
            "arm": num(params.arm), "g0": num(params.g0),
        }),
    );
    m.insert("pi1".into(), num(r.pi1));
    m.insert("pi2".into(), num(r.pi2));
    m.insert("epsilon".into(), num(r.epsilon));
    m.insert("objective".into(), num(r.objective));
    m.insert("paper_volume_measure".into(), num(r.paper_volume_measure));
    m.insert("optimal_inertia_ratio".into(), num(optimal_inertia_ratio()));
    m.insert("optimal_i1".into(), num(r.optimal_i1));
    m.insert("optimal_i2".into(), num(r.optimal_i2));
    m.insert("gain_factor".into(), opt(r.gain_factor));
    m.insert("gain_holding_i2".into(), opt(r.gain_holding_i2));
    m.insert("gain_holding_i1".into(), opt(r.gain_holding_i1));
    m.insert("degenerate".into(), json!(r.degenerate));
    Ok(Value::Object(m))
}

fn render(format: OutputFormat, report: Value) -> Result<String, RunError> {
    Ok(match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("serializable");
            s.push('\n');
            s
        }
        OutputFormat::Text => {
            let mut lines = Vec::new();
            flatten("", &report, &mut lines);
            lines
                .into_iter()
                .map(|(k, v)| format!("{k} = {v}\n"))
                .collect()
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| RunError::Usage(e.to_string());
            w.write_record(["field", "value"]).map_err(io)?;
            let mut lines = Vec::new();
            flatten("", &report, &mut lines);
            for (k, v) in lines {
                w.write_record([k, v]).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| RunError::Usage(e.to_string()))?;
            String::from_utf8(bytes).expect("utf8")
        }
    })
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                flatten(&key(k), v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), v, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}
