//! Subcommand implementations.

use std::fmt;
use std::io::Write;
use std::path::Path;

use carnot47::dynamics::TRAJECTORY_HEADER;
use carnot47::expmap::{first_critical_time, CRITICAL_SCAN_STEP};
use carnot47::optimality::classify_with_grid;
use carnot47::verify::{self, Mutation};
use carnot47::{
    canonicalize, closed_form_state, geodesic_point, initial_state, integrate_numeric, level_residual, normalize,
    sphere_sample, CanonicalParams, Error, ExpParams, GeodesicAnswer, GeodesicClass, GeodesicParams, GroupPoint, Rotation,
    Slice, SphereFamily,
};
use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Config;

pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_NO_CONVERGENCE: u8 = 2;
pub const EXIT_OUT_OF_RANGE: u8 = 3;
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Solver(Error),
    Io(String),
    ChecksFailed(usize),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) => EXIT_USAGE,
            Self::Solver(Error::NoConvergence { .. } | Error::SingularJacobian(_)) => EXIT_NO_CONVERGENCE,
            Self::Solver(Error::OutOfValidatedRange) => EXIT_OUT_OF_RANGE,
            Self::Solver(Error::Origin) => EXIT_USAGE,
            Self::Solver(_) | Self::Io(_) | Self::ChecksFailed(_) => EXIT_FAILURE,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "{m}"),
            Self::Solver(e) => write!(f, "{e}"),
            Self::Io(m) => write!(f, "{m}"),
            Self::ChecksFailed(n) => write!(f, "{n} verification check(s) failed"),
        }
    }
}

fn parse_list<const N: usize>(s: &str, what: &str) -> Result<[f64; N], Failure> {
    let values = s
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Usage(format!("{what}: {e}")))?;
    let arr: [f64; N] = values
        .try_into()
        .map_err(|v: Vec<f64>| Failure::Usage(format!("{what}: expected {N} comma separated numbers, got {}", v.len())))?;
    if arr.iter().any(|v| !v.is_finite()) {
        return Err(Failure::Usage(format!("{what}: values must be finite")));
    }
    Ok(arr)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| Failure::Io(e.to_string()))
        }
    }
}

fn metadata(cfg: &Config) -> Vec<(&'static str, String)> {
    vec![
        ("version", format!("carnot47 {}", env!("CARGO_PKG_VERSION"))),
        ("config_sha256", cfg.hash()),
        ("seed", cfg.seed.to_string()),
    ]
}

fn header_lines(meta: &[(&str, String)]) -> String {
    meta.iter().map(|(k, v)| format!("# {k} {v}\n")).collect()
}

fn meta_json(meta: &[(&str, String)]) -> Value {
    Value::Object(meta.iter().map(|(k, v)| (k.to_string(), Value::String(v.clone()))).collect())
}

fn csv_text(columns: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Failure::Io(e.to_string());
    w.write_record(columns).map_err(io)?;
    for row in rows {
        w.write_record(row.iter().map(|v| v.to_string())).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Io(e.to_string()))
}

fn pretty(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn params_json(p: &ExpParams<f64>) -> Value {
    json!({ "C1": p.c1, "C2": p.c2, "C3bar": p.c3bar, "tau": p.tau })
}

fn point_json(q: &GroupPoint<f64>) -> Value {
    json!({ "x": q.x, "ell": q.ell, "y": q.y })
}

/// Cut time as JSON: a number inside C_n, `"inf"` for lines, `null` when unknown.
fn cut_time_json(class: &GeodesicClass<f64>) -> Value {
    match class.cut_time() {
        Some(t) if t.is_infinite() => json!("inf"),
        Some(t) => json!(t),
        None => Value::Null,
    }
}

fn geodesic_params(s: &str) -> Result<(GeodesicParams<f64>, f64), Failure> {
    let raw = GeodesicParams::from_array(parse_list::<7>(s, "--params")?);
    let residual = level_residual(&raw).map_err(|e| Failure::Usage(format!("--params: {e}")))?;
    let p = normalize(&raw).map_err(|e| Failure::Usage(format!("--params: {e}")))?;
    Ok((p, residual))
}

fn classification(cfg: &Config, p: &GeodesicParams<f64>) -> Value {
    match classify_with_grid(p, cfg.tolerances.level, &cfg.grid) {
        Ok(class) => json!({ "class": class.name(), "cut_time": cut_time_json(&class) }),
        Err(Error::DegenerateControls) => json!({ "class": "constant-control", "cut_time": Value::Null }),
        Err(e) => json!({ "class": "error", "error": e.to_string() }),
    }
}

#[derive(Debug, Args)]
pub struct GeodesicArgs {
    /// `C1,C2,C3,C4,K1,K2,K3`; `C` is rescaled onto the unit level set.
    #[arg(long)]
    params: String,
    #[arg(long, default_value_t = 10.0)]
    tmax: f64,
    /// Number of samples on `[0, tmax]`.
    #[arg(long, default_value_t = 1001)]
    samples: usize,
    /// Append the maximum deviation between closed form and RK4.
    #[arg(long)]
    oracle: bool,
    /// Emit the representative geodesic in the canonical frame.
    #[arg(long)]
    canonical: bool,
}

pub fn geodesic(cfg: &Config, args: &GeodesicArgs, out: Option<&Path>) -> Result<(), Failure> {
    if !(args.tmax.is_finite() && args.tmax > 0.0) {
        return Err(Failure::Usage("--tmax must be positive".into()));
    }
    if args.samples < 2 {
        return Err(Failure::Usage("--samples must be at least 2".into()));
    }
    let (p, residual) = geodesic_params(&args.params)?;
    let eval = match (args.canonical, canonicalize(&p)) {
        (true, Ok(cp)) => CanonicalParams { rotation: Rotation::identity(), ..cp }
            .to_geodesic_params()
            .map_err(Failure::Solver)?,
        _ => p,
    };
    let n = args.samples - 1;
    let rows = (0..=n).map(|i| {
        let t = if i == n { args.tmax } else { args.tmax * i as f64 / n as f64 };
        let mut row = vec![t];
        row.extend(closed_form_state(t, &eval).to_array());
        row
    });
    let mut text = header_lines(&metadata(cfg));
    text.push_str(&csv_text(&TRAJECTORY_HEADER, rows)?);

    let mut summary = classification(cfg, &p);
    summary["K"] = json!(p.k());
    summary["level_residual_input"] = json!(residual);
    summary["params"] = json!(p.to_array());
    summary["canonical"] = json!(args.canonical && !p.is_line());
    if let Ok(cp) = canonicalize(&p) {
        summary["C3bar"] = json!(cp.c3bar);
    }
    if args.oracle {
        let traj = integrate_numeric(&initial_state(&eval), args.tmax, cfg.rk4_step).map_err(Failure::Solver)?;
        let dev = traj
            .iter()
            .map(|(t, s)| carnot47::linalg::max_abs_diff(&closed_form_state(t, &eval).to_array(), &s.to_array()))
            .fold(0.0, f64::max);
        text.push_str(&format!("# oracle_max_deviation {dev}\n"));
        summary["oracle_max_deviation"] = json!(dev);
        summary["oracle_step"] = json!(cfg.rk4_step);
    }
    emit(out, &text)?;
    let summary = pretty(&summary);
    if out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct ConnectArgs {
    /// `x,l1,l2,l3,y1,y2,y3`.
    #[arg(long)]
    endpoint: String,
}

pub fn answer_json(ans: &GeodesicAnswer<f64>) -> Value {
    json!({
        "params": ans.params.as_ref().map(params_json),
        "direction": ans.direction,
        "K": ans.k,
        "R": ans.rotation.matrix(),
        "length": ans.length,
        "branch": ans.branch,
        "residual": ans.residual,
        "maxwell": ans.maxwell,
        "roots": ans.roots.iter().map(params_json).collect::<Vec<_>>(),
    })
}

pub fn connect(cfg: &Config, args: &ConnectArgs, out: Option<&Path>) -> Result<(), Failure> {
    let q = GroupPoint::from_array(parse_list::<7>(&args.endpoint, "--endpoint")?);
    if q.is_identity() {
        return Err(Failure::Usage("--endpoint: the origin has no nontrivial geodesic".into()));
    }
    let ans = carnot47::connect(&q, &cfg.connect_options()).map_err(Failure::Solver)?;
    if ans.maxwell {
        eprintln!(
            "warning: vertical endpoint is a Maxwell point; every (C1, C2) with C1^2 + C2^2 = {} reaches it at the cut time",
            ans.params.map(|p| p.c1 * p.c1 + p.c2 * p.c2).unwrap_or(f64::NAN)
        );
    }
    let mut v = answer_json(&ans);
    v["meta"] = meta_json(&metadata(cfg));
    emit(out, &pretty(&v))
}

#[derive(Debug, Args)]
pub struct CutArgs {
    /// `C1,C2,C3,C4,K1,K2,K3`; `C` is rescaled onto the unit level set.
    #[arg(long)]
    params: String,
}

pub fn cut(cfg: &Config, args: &CutArgs, out: Option<&Path>) -> Result<(), Failure> {
    let (p, _) = geodesic_params(&args.params)?;
    let class = classify_with_grid(&p, cfg.tolerances.level, &cfg.grid).map_err(Failure::Solver)?;
    let mut v = json!({ "class": class.name(), "cut_time": cut_time_json(&class), "K": p.k() });
    if let Ok(cp) = canonicalize(&p) {
        v["C1"] = json!(cp.c1);
        v["C2"] = json!(cp.c2);
        v["C3bar"] = json!(cp.c3bar);
        match class {
            GeodesicClass::InCn { cut_time } => {
                v["cut_point"] = point_json(&geodesic_point(cut_time, &p));
                v["maxwell"] = json!(true);
            }
            GeodesicClass::OffCn => {
                let tau = first_critical_time(cp.c1, cp.c2, cp.c3bar, cfg.grid.tau_max, CRITICAL_SCAN_STEP);
                v["first_critical_tau"] = json!(tau);
                v["optimal_until"] = json!(tau.map(|t| t / cp.k));
            }
            GeodesicClass::Line => {}
        }
    }
    v["meta"] = meta_json(&metadata(cfg));
    emit(out, &pretty(&v))
}

#[derive(Debug, Args)]
pub struct SphereArgs {
    /// Number of geodesics drawn.
    #[arg(long, visible_alias = "samples")]
    count: usize,
    #[arg(long, default_value = "all", value_parser = parse_family)]
    family: SphereFamily,
    /// Columns to emit, e.g. `x,l1,y2`.
    #[arg(long, default_value = "x,l1,l2,l3,y1,y2,y3")]
    slice: String,
    /// Keep only points whose other coordinates are within this band of 0.
    #[arg(long)]
    band: Option<f64>,
}

fn parse_family(s: &str) -> Result<SphereFamily, String> {
    s.parse()
}

pub fn sphere(cfg: &Config, args: &SphereArgs, out: Option<&Path>) -> Result<(), Failure> {
    if args.count == 0 {
        return Err(Failure::Usage("--count must be positive".into()));
    }
    if let Some(b) = args.band {
        if !(b.is_finite() && b >= 0.0) {
            return Err(Failure::Usage("--band must be nonnegative".into()));
        }
    }
    let slice = Slice::parse(&args.slice, args.band).map_err(Failure::Usage)?;
    let sample = sphere_sample::<f64>(args.count, args.family, &slice, cfg.seed);
    let mut meta = metadata(cfg);
    meta.push(("count", args.count.to_string()));
    meta.push(("family", format!("{:?}", args.family).to_lowercase()));
    meta.push(("slice", args.slice.clone()));
    meta.push(("band", args.band.map_or("none".into(), |b| b.to_string())));
    meta.push(("rows", sample.rows.len().to_string()));
    let columns: Vec<&str> = sample.columns.iter().map(|c| c.name()).collect();
    let mut text = header_lines(&meta);
    text.push_str(&csv_text(&columns, sample.rows)?);
    emit(out, &text)
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Inject {
    D11Flip,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Deliberate defect for mutation testing.
    #[arg(long, hide = true)]
    inject: Option<Inject>,
}

pub fn verify(cfg: &Config, args: &VerifyArgs, out: Option<&Path>) -> Result<(), Failure> {
    let mut vc = cfg.verify_config();
    vc.mutation = args.inject.map(|Inject::D11Flip| Mutation::FlipD11);
    let reports = verify::run(&vc);
    eprint!("{}", header_lines(&metadata(cfg)));
    let failed = reports.iter().filter(|r| !r.pass).count();
    eprintln!("# checks {} passed, {failed} failed", reports.len() - failed);
    emit(out, &pretty(&reports))?;
    if failed > 0 {
        return Err(Failure::ChecksFailed(failed));
    }
    Ok(())
}
