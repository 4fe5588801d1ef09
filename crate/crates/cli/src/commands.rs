use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use lensdimer::correlations::{g2_with, plateau};
use lensdimer::driven::{
    dominant_harmonic, evolve_driven_with, expansion_coefficients, first_order_excitation, modified_linewidth,
    rate, rate_scan, steady_excitation, visibility, Detector, ScanVariable,
};
use lensdimer::free::{
    emission_spectrum_with, evolve_free_with, two_atom_angular_spectrum_with, Emitter, Normalization,
    SpectrumConfig,
};
use lensdimer::model::{kappa_axis_closed_form, kappa_from_geometry, wrap_phase};
use lensdimer::oracle::integrate_free_dde;
use lensdimer::verify::{render_report, run_suite, Suite};
use lensdimer::{Atom, Execution, LensGeometry, Time};
use serde_json::{json, Value};

use crate::error::{range, CliResult};
use crate::output::{number_json, Cell, Format, Table};
use crate::params::{linspace, require_points, SystemArgs};

/// Weak-drive default for commands that need a laser, in units of γ.
const DEFAULT_RABI: f64 = 0.05;

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Directory for data files and manifests.
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Significant digits of numeric output.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u8).range(1..=17))]
    pub precision: u8,
    /// Evaluate grids on one thread.
    #[arg(long)]
    pub sequential: bool,
}

impl OutputArgs {
    pub fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }
}

/// What a command produced; the caller writes files and prints the summary.
pub struct Outcome {
    pub stem: String,
    pub table: Table,
    pub parameters: Value,
    pub summary: Vec<(String, Value)>,
    pub warnings: Vec<String>,
    /// Text printed to stdout in place of the summary.
    pub stdout: Option<String>,
    pub failed_checks: usize,
    /// Write files only when an output directory is given explicitly.
    pub files_optional: bool,
    /// Wall-clock time per verification check, kept out of the report.
    pub check_runtimes: Option<Value>,
}

impl Outcome {
    fn new(stem: &str, table: Table, parameters: Value) -> Self {
        Self {
            stem: stem.into(),
            table,
            parameters,
            summary: Vec::new(),
            warnings: Vec::new(),
            stdout: None,
            failed_checks: 0,
            files_optional: false,
            check_runtimes: None,
        }
    }
}

fn name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

fn with_options(base: Value, options: Value) -> Value {
    json!({ "system": base, "options": options })
}

fn parse_time(s: &str) -> Result<TimeArg, String> {
    match s {
        "inf" | "infinity" => Ok(TimeArg::Infinite),
        _ => s.parse::<f64>().map(TimeArg::OverTau).map_err(|_| format!("`{s}` is neither a number nor `inf`")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeArg {
    OverTau(f64),
    Infinite,
}

impl TimeArg {
    fn time(self, tau: f64) -> Time {
        match self {
            TimeArg::OverTau(x) => Time::Finite(x * tau),
            TimeArg::Infinite => Time::Infinite,
        }
    }

    fn to_json(self) -> Value {
        match self {
            TimeArg::OverTau(x) => json!(x),
            TimeArg::Infinite => json!("inf"),
        }
    }
}

// ---------------------------------------------------------------- decay

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Series,
    Dde,
}

#[derive(Debug, Clone, Args)]
pub struct DecayArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// End of the trace in units of τ.
    #[arg(long, default_value_t = 10.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 1001)]
    pub points: usize,
    #[arg(long, value_enum, default_value = "series")]
    pub solver: SolverArg,
    /// Local error tolerance of the delay-equation solver.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

pub fn decay(a: &DecayArgs) -> CliResult<Outcome> {
    let r = a.system.resolve(0.0)?;
    require_points(a.points, 2, "the time grid")?;
    if !(a.t_max > 0.0 && a.t_max.is_finite()) {
        return Err(range("--t-max must be positive"));
    }
    let times: Vec<f64> = linspace(0.0, a.t_max * r.params.tau, a.points);
    let trace = match a.solver {
        SolverArg::Series => evolve_free_with(a.output.execution(), &r.params, &r.init, &times)?,
        SolverArg::Dde => integrate_free_dde(&r.params, &r.init, &times, a.tol)?,
    };
    let mut table = Table::new(&["t_over_tau", "re_b1", "im_b1", "re_b2", "im_b2", "p1", "p2"]);
    for (i, x) in trace.times_over_tau().into_iter().enumerate() {
        let (b1, b2) = (trace.b1[i], trace.b2[i]);
        table.push(vec![
            x.into(),
            b1.re.into(),
            b1.im.into(),
            b2.re.into(),
            b2.im.into(),
            b1.norm_sqr().into(),
            b2.norm_sqr().into(),
        ]);
    }
    let last = trace.populations().last().copied().unwrap_or_default();
    let options = json!({ "t_max_over_tau": a.t_max, "points": a.points, "solver": name(&a.solver), "tol": a.tol });
    let mut out = Outcome::new("decay", table, with_options(r.to_json(), options));
    out.summary.push(("final_p1".into(), json!(last.0)));
    out.summary.push(("final_p2".into(), json!(last.1)));
    Ok(out)
}

// ---------------------------------------------------------------- spectrum

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Both,
    Atom1,
    Atom2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    Raw,
    FreeSpace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    /// (ω − ω0)/γ
    Gamma,
    /// (ω − ω0)τ/π
    PiOverTau,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Lower end of the frequency axis, in the units chosen by --axis.
    #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
    pub omega_min: f64,
    #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
    pub omega_max: f64,
    #[arg(long, default_value_t = 1001)]
    pub points: usize,
    #[arg(long, value_enum, default_value = "gamma")]
    pub axis: AxisArg,
    /// Observation time in units of τ, or `inf`.
    #[arg(long, default_value = "inf", value_parser = parse_time)]
    pub time: TimeArg,
    /// Emission direction from the emitter axis.
    #[arg(long, conflicts_with = "theta_over_pi")]
    pub theta: Option<f64>,
    #[arg(long)]
    pub theta_over_pi: Option<f64>,
    #[arg(long, value_enum, default_value = "both")]
    pub source: SourceArg,
    #[arg(long, value_enum, default_value = "raw")]
    pub normalization: NormArg,
    /// Long-time spectrum of the symmetric state on a (ϑ, ω) grid with this many angles in [0, π].
    #[arg(long, value_name = "N")]
    pub angular: Option<usize>,
}

pub fn spectrum(a: &SpectrumArgs) -> CliResult<Outcome> {
    let r = a.system.resolve(0.0)?;
    require_points(a.points, 2, "the frequency grid")?;
    if !(a.omega_min < a.omega_max) {
        return Err(range("--omega-min must be below --omega-max"));
    }
    let p = &r.params;
    let (axis_name, to_rate) = match a.axis {
        AxisArg::Gamma => ("omega_minus_omega0_over_gamma", p.gamma),
        AxisArg::PiOverTau => ("omega_minus_omega0_tau_over_pi", PI / p.tau),
    };
    let axis = linspace(a.omega_min, a.omega_max, a.points);
    let omegas: Vec<f64> = axis.iter().map(|x| x * to_rate).collect();
    let normalization = match a.normalization {
        NormArg::Raw => Normalization::RawShape,
        NormArg::FreeSpace => Normalization::FreeSpacePeak,
    };
    let exec = a.output.execution();
    let theta = a.theta.or(a.theta_over_pi.map(|x| x * PI)).unwrap_or(PI / 2.0);
    let mut options = json!({
        "omega_min": a.omega_min, "omega_max": a.omega_max, "points": a.points,
        "axis": axis_name, "normalization": name(&a.normalization),
    });
    let (stem, table) = if let Some(n) = a.angular {
        require_points(n, 2, "the angle grid")?;
        let thetas = linspace(0.0, PI, n);
        let s = two_atom_angular_spectrum_with(exec, p, &omegas, &thetas, normalization)?;
        let mut table = Table::new(&["theta", axis_name, "s_value"]);
        for (th, row) in s.thetas.iter().zip(&s.values) {
            for (x, v) in axis.iter().zip(row) {
                table.push(vec![(*th).into(), (*x).into(), (*v).into()]);
            }
        }
        options["angles"] = json!(n);
        ("spectrum_angular", table)
    } else {
        let cfg = SpectrumConfig {
            time: a.time.time(p.tau),
            theta,
            source: match a.source {
                SourceArg::Both => Emitter::Both,
                SourceArg::Atom1 => Emitter::Atom1,
                SourceArg::Atom2 => Emitter::Atom2,
            },
            normalization,
        };
        let s = emission_spectrum_with(exec, p, &r.init, &cfg, &omegas)?;
        let mut table = Table::new(&[axis_name, "s_value"]);
        for (x, v) in axis.iter().zip(&s.values) {
            table.push(vec![(*x).into(), (*v).into()]);
        }
        options["time_over_tau"] = a.time.to_json();
        options["theta"] = json!(theta);
        options["source"] = json!(name(&a.source));
        ("spectrum", table)
    };
    let peak = table
        .rows
        .iter()
        .filter_map(|row| match (&row[row.len() - 2], &row[row.len() - 1]) {
            (Cell::Num(x), Cell::Num(v)) => Some((*x, *v)),
            _ => None,
        })
        .fold((f64::NAN, f64::MIN), |best, cur| if cur.1 > best.1 { cur } else { best });
    let mut out = Outcome::new(stem, table, with_options(r.to_json(), options));
    out.summary.push(("peak_at".into(), json!(peak.0)));
    out.summary.push(("peak_value".into(), json!(peak.1)));
    Ok(out)
}

// ---------------------------------------------------------------- driven

#[derive(Debug, Clone, Args)]
pub struct DrivenArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// End of the transient in units of τ.
    #[arg(long, default_value_t = 10.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 1001)]
    pub points: usize,
}

pub fn driven(a: &DrivenArgs) -> CliResult<Outcome> {
    let r = a.system.resolve(DEFAULT_RABI)?;
    require_points(a.points, 2, "the time grid")?;
    if !(a.t_max > 0.0 && a.t_max.is_finite()) {
        return Err(range("--t-max must be positive"));
    }
    let p = &r.params;
    let times = linspace(0.0, a.t_max * p.tau, a.points);
    let trace = evolve_driven_with(a.output.execution(), p, &times)?;
    let mut table = Table::new(&["t_over_tau", "p_exc_1", "p_exc_2"]);
    for (x, (p1, p2)) in trace.times_over_tau().into_iter().zip(trace.populations()) {
        table.push(vec![x.into(), p1.into(), p2.into()]);
    }
    let options = json!({ "t_max_over_tau": a.t_max, "points": a.points });
    let mut out = Outcome::new("driven", table, with_options(r.to_json(), options));
    let (amp, phase) = expansion_coefficients(p);
    out.summary.extend([
        ("steady_p_exc_1".to_string(), json!(steady_excitation(p, Atom::One))),
        ("steady_p_exc_2".to_string(), json!(steady_excitation(p, Atom::Two))),
        ("first_order_p_exc_1".to_string(), json!(first_order_excitation(p, Atom::One))),
        ("first_order_p_exc_2".to_string(), json!(first_order_excitation(p, Atom::Two))),
        ("expansion_amplitude".to_string(), json!(amp)),
        ("expansion_phase".to_string(), json!(phase)),
    ]);
    let odd = (wrap_phase(p.phi_l - PI)).min(2.0 * PI - wrap_phase(p.phi_l - PI)) < 1e-12;
    if odd {
        let (g, d) = modified_linewidth(p);
        out.summary.push(("modified_linewidth".into(), json!(g)));
        out.summary.push(("modified_detuning".into(), json!(d)));
    }
    Ok(out)
}

// ---------------------------------------------------------------- rates

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DetectorArg {
    Incoherent,
    Coherent,
    LensMode1,
    LensMode2,
    LensTotal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanArg {
    OmegaLTau,
    PhiL,
    DetectorPhase,
}

#[derive(Debug, Clone, Args)]
pub struct RatesArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, value_enum, default_value = "incoherent")]
    pub detector: DetectorArg,
    /// Far-field phase k·(r1 − r2) of the coherent detector.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub detector_phase: f64,
    #[arg(long, value_enum, default_value = "omega-l-tau")]
    pub scan: ScanArg,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub from: f64,
    #[arg(long, default_value_t = 4.0 * PI, allow_hyphen_values = true)]
    pub to: f64,
    #[arg(long, default_value_t = 501)]
    pub points: usize,
    /// Read --from and --to in units of π.
    #[arg(long)]
    pub range_over_pi: bool,
}

pub fn rates(a: &RatesArgs) -> CliResult<Outcome> {
    let r = a.system.resolve(DEFAULT_RABI)?;
    require_points(a.points, 2, "the scan")?;
    let unit = if a.range_over_pi { PI } else { 1.0 };
    let (from, to) = (a.from * unit, a.to * unit);
    if !(from < to && to.is_finite()) {
        return Err(range("--from must be below --to"));
    }
    let detector = match a.detector {
        DetectorArg::Incoherent => Detector::Incoherent,
        DetectorArg::Coherent => Detector::CoherentFarfield { detector_phase: a.detector_phase },
        DetectorArg::LensMode1 => Detector::LensMode(Atom::One),
        DetectorArg::LensMode2 => Detector::LensMode(Atom::Two),
        DetectorArg::LensTotal => Detector::LensTotal,
    };
    let (variable, column) = match a.scan {
        ScanArg::OmegaLTau => (ScanVariable::OmegaLTau, "omega_l_tau"),
        ScanArg::PhiL => (ScanVariable::PhiL, "phi_l"),
        ScanArg::DetectorPhase if a.detector == DetectorArg::Coherent => (ScanVariable::DetectorPhase, "detector_phase"),
        ScanArg::DetectorPhase => return Err(range("--scan detector-phase needs --detector coherent")),
    };
    let p = &r.params;
    let points = linspace(from, to, a.points);
    let scan = rate_scan(a.output.execution(), p, detector, variable, &points)?;
    let mut table = Table::new(&[column, "rate_atom1", "rate_atom2", "rate_total"]);
    for (x, res) in points.iter().zip(&scan.rates) {
        table.push(vec![(*x).into(), res.atom1.into(), res.atom2.into(), res.value.into()]);
    }
    let values = scan.values();
    let max = values.iter().cloned().fold(f64::MIN, f64::max);
    let min = values.iter().cloned().fold(f64::MAX, f64::min);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let baseline = rate(&p.with_kappa(0.0), detector).value;
    let options = json!({
        "detector": name(&a.detector), "detector_phase": a.detector_phase,
        "scan": column, "from": from, "to": to, "points": a.points,
    });
    let mut out = Outcome::new("rates", table, with_options(r.to_json(), options));
    out.summary.push(("max_over_min".into(), json!(max / min)));
    out.summary.push(("peak_over_uncoupled".into(), json!(max / baseline)));
    out.summary.push(("peak_over_mean".into(), json!(max / mean)));
    match visibility(&scan) {
        Ok(v) => out.summary.push(("visibility".into(), json!(v))),
        Err(e) => out.warnings.push(format!("visibility not extracted: {e}")),
    }
    // harmonic analysis assumes whole periods with the endpoint excluded
    let periods = (to - from) / (2.0 * PI);
    if (periods - periods.round()).abs() < 1e-9 && periods.round() >= 1.0 {
        let n = points.len() - 1;
        out.summary
            .push(("dominant_harmonic".into(), json!(dominant_harmonic(&points[..n], &values[..n], 8))));
    }
    Ok(out)
}

// ---------------------------------------------------------------- g2

#[derive(Debug, Clone, Args)]
pub struct G2Args {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Phase of the detector that clicks first.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "phi1_over_pi")]
    pub phi1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi1_over_pi: Option<f64>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "phi2_over_pi")]
    pub phi2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi2_over_pi: Option<f64>,
    /// Largest delay in units of τ.
    #[arg(long, default_value_t = 3.0)]
    pub tprime_max: f64,
    #[arg(long, default_value_t = 601)]
    pub points: usize,
    /// Scan φ2 over [0, 2π] with this many values instead of using --phi2.
    #[arg(long, value_name = "N")]
    pub phi2_points: Option<usize>,
}

pub fn g2(a: &G2Args) -> CliResult<Outcome> {
    let r = a.system.resolve(DEFAULT_RABI)?;
    require_points(a.points, 2, "the delay grid")?;
    if !(a.tprime_max > 0.0 && a.tprime_max.is_finite()) {
        return Err(range("--tprime-max must be positive"));
    }
    let p = &r.params;
    let phi1 = a.phi1.or(a.phi1_over_pi.map(|x| x * PI)).unwrap_or(0.0);
    let phi2 = a.phi2.or(a.phi2_over_pi.map(|x| x * PI)).unwrap_or(0.0);
    let xs = linspace(0.0, a.tprime_max, a.points);
    let tprimes: Vec<f64> = xs.iter().map(|x| x * p.tau).collect();
    let exec = a.output.execution();
    let mut options = json!({ "phi1": phi1, "tprime_max_over_tau": a.tprime_max, "points": a.points });
    let mut warnings = Vec::new();
    let table = if let Some(n) = a.phi2_points {
        require_points(n, 2, "the φ2 grid")?;
        let mut table = Table::new(&["tprime_over_tau", "phi2", "g2_raw", "g2_normalized"]);
        for phi2 in linspace(0.0, 2.0 * PI, n) {
            let res = g2_with(exec, p, phi1, phi2, &tprimes)?;
            for (i, x) in xs.iter().enumerate() {
                let norm = res.normalized.as_ref().map(|v| v[i]);
                table.push(vec![(*x).into(), phi2.into(), res.raw[i].into(), norm.into()]);
            }
        }
        options["phi2_points"] = json!(n);
        table
    } else {
        let res = g2_with(exec, p, phi1, phi2, &tprimes)?;
        if res.normalized.is_none() {
            warnings.push("normalized correlation undefined: a detector sits on a dark fringe".to_string());
        }
        let mut table = Table::new(&["tprime_over_tau", "g2_raw", "g2_normalized"]);
        for (i, x) in xs.iter().enumerate() {
            let norm = res.normalized.as_ref().map(|v| v[i]);
            table.push(vec![(*x).into(), res.raw[i].into(), norm.into()]);
        }
        options["phi2"] = json!(phi2);
        options["params_hash"] = json!(res.params_hash);
        table
    };
    let mut out = Outcome::new("g2", table, with_options(r.to_json(), options));
    if a.phi2_points.is_none() {
        match plateau(p, phi1, phi2) {
            Ok(v) => out.summary.push(("plateau".into(), json!(v))),
            Err(_) => out.summary.push(("plateau".into(), json!(0.0))),
        }
    }
    out.warnings = warnings;
    Ok(out)
}

// ---------------------------------------------------------------- kappa

#[derive(Debug, Clone, Args)]
pub struct KappaArgs {
    #[command(flatten)]
    pub output: OutputArgs,
    /// Half opening angle θ0 of the collection cone.
    #[arg(long, conflicts_with = "half_angle_over_pi", required_unless_present = "half_angle_over_pi")]
    pub half_angle: Option<f64>,
    #[arg(long)]
    pub half_angle_over_pi: Option<f64>,
    /// Angle between the dipole and the cone axis.
    #[arg(long, conflicts_with = "dipole_angle_over_pi")]
    pub dipole_angle: Option<f64>,
    #[arg(long)]
    pub dipole_angle_over_pi: Option<f64>,
}

pub fn kappa(a: &KappaArgs) -> CliResult<Outcome> {
    let half = a.half_angle.or(a.half_angle_over_pi.map(|x| x * PI)).expect("clap requires one");
    let dipole = a.dipole_angle.or(a.dipole_angle_over_pi.map(|x| x * PI)).unwrap_or(0.0);
    let k = kappa_from_geometry(&LensGeometry { half_angle: half, dipole_angle: dipole })?;
    let axis = (dipole == 0.0).then(|| kappa_axis_closed_form(half));
    let mut table = Table::new(&["half_angle", "dipole_angle", "kappa", "kappa_closed_form"]);
    table.push(vec![half.into(), dipole.into(), k.into(), axis.into()]);
    let body = table.render(a.output.format, a.output.precision as usize)?;
    let mut out = Outcome::new("kappa", table, json!({ "half_angle": half, "dipole_angle": dipole }));
    out.stdout = Some(body);
    out.files_optional = true;
    Ok(out)
}

// ---------------------------------------------------------------- verify

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    All,
    Oracle,
    ClosedForm,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, value_enum, default_value = "all")]
    pub suite: SuiteArg,
}

pub fn verify(a: &VerifyArgs) -> CliResult<Outcome> {
    let suite = match a.suite {
        SuiteArg::All => Suite::All,
        SuiteArg::Oracle => Suite::Oracle,
        SuiteArg::ClosedForm => Suite::ClosedForm,
    };
    let outcomes = run_suite(suite, a.output.execution());
    let mut table = Table::new(&["id", "name", "status", "measured", "tolerance", "detail"]);
    for o in &outcomes {
        table.push(vec![
            Cell::Text(o.id.into()),
            Cell::Text(o.name.into()),
            Cell::Text(if o.passed { "pass" } else { "fail" }.into()),
            o.measured.into(),
            o.tolerance.into(),
            Cell::Text(o.detail.clone()),
        ]);
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let mut out = Outcome::new("verify", table, json!({ "suite": name(&a.suite) }));
    out.stdout = Some(render_report(&outcomes));
    out.failed_checks = failed;
    let mut times = serde_json::Map::new();
    for o in &outcomes {
        times.insert(o.id.into(), json!(o.elapsed.as_secs_f64()));
    }
    out.check_runtimes = Some(Value::Object(times));
    out.summary.push(("checks".into(), json!(outcomes.len())));
    out.summary.push(("failed".into(), json!(failed)));
    Ok(out)
}

pub fn summary_json(outcome: &Outcome, precision: usize) -> Value {
    let mut map = serde_json::Map::new();
    for (k, v) in &outcome.summary {
        let v = match v.as_f64() {
            Some(x) if v.is_f64() => number_json(x, precision),
            _ => v.clone(),
        };
        map.insert(k.clone(), v);
    }
    Value::Object(map)
}
