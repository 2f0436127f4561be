//! Command-line driver: exact counting runs, asymptotic comparisons,
//! generating-function diagnostics, and a consolidated JSON report.
//!
//! Every command resolves its inputs, computes through the library, and
//! writes its output exactly once at the end (stdout or --out). Warnings
//! go to stderr; --strict turns any warning into a nonzero exit.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::Deserialize;

use bosecount::asymptotics::{
    self, hardy_ramanujan, main_asymptotic, solve_saddle, surface_asymptotic_n2, upper_bound_log,
    ComparisonRow, FormulaId,
};
use bosecount::error::Error;
use bosecount::exact;
use bosecount::gpf::{self, DiagnosticRow, HalfPlanePoint, DEFAULT_TAIL_TOL};
use bosecount::spectrum::{load_custom_spectrum, zeta_profile, SpectrumModel, ZetaProfile};

#[derive(Parser)]
#[command(
    name = "bosecount",
    version,
    about = "Exact Bose-gas state counts and their asymptotic laws",
    after_help = "Set BOSECOUNT_THREADS to bound internal parallelism (defaults to the \
                  available cores)."
)]
struct Cli {
    /// Treat warnings (zero counts in comparisons, noisy quadrature,
    /// nonnegative heat-trace margins) as errors.
    #[arg(long, global = true)]
    strict: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact state counts Omega(E) for E = 0..emax.
    Count(CountArgs),
    /// Particle-resolved counts Omega(N, E).
    Joint(JointArgs),
    /// Asymptotic estimates alone (no exact table needed).
    Asymptote(AsymptoteArgs),
    /// Exact counts joined with estimates and their ratios.
    Compare(CompareArgs),
    /// Recover Omega(E) from the generating function by contour quadrature.
    Contour(ContourArgs),
    /// Heat-trace margin grid over the strip x <= y <= pi.
    #[command(name = "condition-h")]
    ConditionH(ConditionHArgs),
    /// Sweep of the principal-part decomposition residual J on the real axis.
    Residual(ResidualArgs),
    /// One JSON document: constants, tables, statistics, checks.
    Report(ReportArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Formula {
    Main1,
    Main2,
    HardyRamanujan,
    Upper,
}

#[derive(Args)]
struct CountArgs {
    /// Model: "partitions", "sphere:<n>", or "custom:<path>".
    #[arg(long)]
    model: String,
    /// Largest energy, inclusive.
    #[arg(long)]
    emax: u64,
    /// Output file (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
}

#[derive(Args)]
struct JointArgs {
    #[arg(long)]
    model: String,
    #[arg(long)]
    emax: u64,
    /// Largest particle number, inclusive.
    #[arg(long)]
    nmax: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
}

#[derive(Args)]
struct AsymptoteArgs {
    #[arg(long)]
    model: String,
    /// Comma-separated energies, strictly increasing.
    #[arg(long)]
    energies: String,
    /// Zeta profile JSON for custom models: inline text or a file path,
    /// {"n": .., "A": [..], "Z0": .., "Zprime0": ..}.
    #[arg(long)]
    profile: Option<String>,
    #[arg(long, value_enum, default_value_t = Formula::Main1)]
    formula: Formula,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    model: String,
    #[arg(long)]
    energies: String,
    #[arg(long)]
    profile: Option<String>,
    /// Comma-separated subset of {main1, main2, hardy-ramanujan}; defaults
    /// to every formula applicable to the model.
    #[arg(long)]
    formulas: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
}

#[derive(Args)]
struct ContourArgs {
    #[arg(long)]
    model: String,
    #[arg(long)]
    energies: String,
    #[arg(long)]
    profile: Option<String>,
    /// Abscissa of the contour; defaults to the saddle x_E per energy.
    #[arg(long)]
    x: Option<f64>,
    /// Quadrature nodes; defaults to 20 (E + 1), at least 64.
    #[arg(long)]
    quad: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
}

#[derive(Args)]
struct ConditionHArgs {
    #[arg(long)]
    model: String,
    #[arg(long = "x-min", default_value_t = 0.01)]
    x_min: f64,
    #[arg(long = "x-max", default_value_t = 0.2)]
    x_max: f64,
    #[arg(long = "x-count", default_value_t = 20)]
    x_count: usize,
    /// Vertical samples per abscissa, spread over [x, pi].
    #[arg(long = "y-count", default_value_t = 40)]
    y_count: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
}

#[derive(Args)]
struct ResidualArgs {
    #[arg(long)]
    model: String,
    #[arg(long)]
    profile: Option<String>,
    #[arg(long = "x-min", default_value_t = 1e-3)]
    x_min: f64,
    #[arg(long = "x-max", default_value_t = 1e-1)]
    x_max: f64,
    /// Log-spaced sample count on [x-min, x-max].
    #[arg(long, default_value_t = 20)]
    points: usize,
    /// Spectral tail truncation tolerance.
    #[arg(long = "tail-tol", default_value_t = DEFAULT_TAIL_TOL)]
    tail_tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    model: String,
    #[arg(long, default_value_t = 100)]
    emax: u64,
    /// Energies for statistics and comparisons; defaults to
    /// {emax/4, emax/2, emax}.
    #[arg(long)]
    energies: Option<String>,
    #[arg(long)]
    profile: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut warnings = Vec::new();
    let result = run(&cli.command, &mut warnings);
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    match result {
        Ok(()) => {
            if cli.strict && !warnings.is_empty() {
                eprintln!("error: --strict promoted {} warning(s) to failure", warnings.len());
                return ExitCode::FAILURE;
            }
            ExitCode::SUCCESS
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: &Command, warnings: &mut Vec<String>) -> Result<(), String> {
    match command {
        Command::Count(a) => cmd_count(a),
        Command::Joint(a) => cmd_joint(a),
        Command::Asymptote(a) => cmd_asymptote(a),
        Command::Compare(a) => cmd_compare(a, warnings),
        Command::Contour(a) => cmd_contour(a, warnings),
        Command::ConditionH(a) => cmd_condition_h(a, warnings),
        Command::Residual(a) => cmd_residual(a),
        Command::Report(a) => cmd_report(a, warnings),
    }
}

fn parse_model(spec: &str) -> Result<SpectrumModel, String> {
    if spec == "partitions" {
        return Ok(SpectrumModel::Partitions);
    }
    if let Some(rest) = spec.strip_prefix("sphere:") {
        let dim: u32 = rest
            .parse()
            .map_err(|_| format!("bad sphere dimension '{rest}'"))?;
        return SpectrumModel::sphere(dim).map_err(|e| e.to_string());
    }
    if let Some(path) = spec.strip_prefix("custom:") {
        return load_custom_spectrum(path).map_err(|e| format!("{path}: {e}"));
    }
    Err(format!(
        "unknown model '{spec}'; expected \"partitions\", \"sphere:<n>\", or \"custom:<path>\""
    ))
}

fn parse_energies(list: &str) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for part in list.split(',') {
        let e: u64 = part
            .trim()
            .parse()
            .map_err(|_| format!("bad energy '{}'", part.trim()))?;
        if e == 0 {
            return Err("energies must be positive".into());
        }
        if out.last().is_some_and(|&last| e <= last) {
            return Err("energies must be strictly increasing".into());
        }
        out.push(e);
    }
    if out.is_empty() {
        return Err("empty energy list".into());
    }
    Ok(out)
}

#[derive(Deserialize)]
struct ProfileInput {
    n: u32,
    #[serde(rename = "A", alias = "residues")]
    a: Vec<f64>,
    #[serde(rename = "Z0")]
    z0: f64,
    #[serde(rename = "Zprime0")]
    zprime0: f64,
}

/// Builds the zeta profile: closed form for built-in models, user-supplied
/// JSON (inline or a file path) otherwise. An explicit --profile wins over
/// the built-in constants.
fn resolve_profile(model: &SpectrumModel, arg: &Option<String>) -> Result<ZetaProfile, String> {
    if let Some(raw) = arg {
        let text = if raw.trim_start().starts_with('{') {
            raw.clone()
        } else {
            std::fs::read_to_string(raw).map_err(|e| format!("{raw}: {e}"))?
        };
        let input: ProfileInput =
            serde_json::from_str(&text).map_err(|e| format!("bad profile JSON: {e}"))?;
        return ZetaProfile::from_residues(input.n, input.a, input.z0, input.zprime0)
            .map_err(|e| e.to_string());
    }
    zeta_profile(model).map_err(|e| match e {
        Error::ProfileUnavailable => concat!(
            "custom models have no closed-form zeta profile; supply ",
            "--profile '{\"n\": .., \"A\": [..], \"Z0\": .., \"Zprime0\": ..}'"
        )
        .to_string(),
        other => other.to_string(),
    })
}

fn write_out(out: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => {
            std::fs::write(path, content).map_err(|e| format!("{}: {e}", path.display()))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn csv_to_string<F>(fill: F) -> Result<String, String>
where
    F: FnOnce(&mut Vec<u8>) -> bosecount::error::Result<()>,
{
    let mut buf = Vec::new();
    fill(&mut buf).map_err(|e| e.to_string())?;
    String::from_utf8(buf).map_err(|e| e.to_string())
}

fn cmd_count(args: &CountArgs) -> Result<(), String> {
    let model = parse_model(&args.model)?;
    let table = exact::count_states(&model, args.emax).map_err(|e| e.to_string())?;
    let content = match args.format {
        OutFormat::Csv => csv_to_string(|buf| table.write_csv(buf))?,
        OutFormat::Json => output::to_json(&output::count_doc(&table)),
    };
    write_out(&args.out, &content)
}

fn cmd_joint(args: &JointArgs) -> Result<(), String> {
    let model = parse_model(&args.model)?;
    let joint = exact::count_joint(&model, args.emax, args.nmax).map_err(|e| e.to_string())?;
    let content = match args.format {
        OutFormat::Csv => csv_to_string(|buf| joint.write_csv(buf))?,
        OutFormat::Json => output::to_json(&output::joint_doc(&joint)),
    };
    write_out(&args.out, &content)
}

/// One estimate row; errors carry the energy for context.
fn estimate_at(
    formula: Formula,
    model: &SpectrumModel,
    profile: &Option<ZetaProfile>,
    e: u64,
) -> Result<(f64, FormulaId), String> {
    let need_profile = || {
        profile
            .as_ref()
            .ok_or_else(|| "formula needs a zeta profile".to_string())
    };
    let r = match formula {
        Formula::Main1 => {
            let a = main_asymptotic(need_profile()?, e as f64).map_err(|er| er.to_string())?;
            (a.estimate_log, a.formula)
        }
        Formula::Main2 => {
            let a =
                surface_asymptotic_n2(need_profile()?, e as f64).map_err(|er| er.to_string())?;
            (a.estimate_log, a.formula)
        }
        Formula::HardyRamanujan => {
            if !matches!(model, SpectrumModel::Partitions) {
                return Err("hardy-ramanujan applies to the partitions model only".into());
            }
            let a = hardy_ramanujan(e as f64).map_err(|er| er.to_string())?;
            (a.estimate_log, a.formula)
        }
        Formula::Upper => {
            let v = upper_bound_log(need_profile()?, e as f64).map_err(|er| er.to_string())?;
            (v, FormulaId::UpperBound)
        }
    };
    Ok(r)
}

fn cmd_asymptote(args: &AsymptoteArgs) -> Result<(), String> {
    let model = parse_model(&args.model)?;
    let energies = parse_energies(&args.energies)?;
    let profile = match args.formula {
        Formula::HardyRamanujan => None,
        _ => Some(resolve_profile(&model, &args.profile)?),
    };
    let mut rows = Vec::new();
    for &e in &energies {
        let (ln_estimate, id) = estimate_at(args.formula, &model, &profile, e)
            .map_err(|m| format!("E={e}: {m}"))?;
        rows.push(output::EstimateRowDoc { e, ln_estimate, formula_id: id.to_string() });
    }
    let content = match args.format {
        OutFormat::Csv => {
            let mut s = String::from("E,ln_estimate,formula_id\n");
            for r in &rows {
                s.push_str(&format!("{},{},{}\n", r.e, r.ln_estimate, r.formula_id));
            }
            s
        }
        OutFormat::Json => output::to_json(&rows),
    };
    write_out(&args.out, &content)
}

fn default_formulas(model: &SpectrumModel, profile: &Option<ZetaProfile>) -> Vec<Formula> {
    let mut out = vec![Formula::Main1];
    if profile.as_ref().is_some_and(|p| p.n == 2) {
        out.push(Formula::Main2);
    }
    if matches!(model, SpectrumModel::Partitions) {
        out.push(Formula::HardyRamanujan);
    }
    out
}

fn parse_formulas(list: &str) -> Result<Vec<Formula>, String> {
    list.split(',')
        .map(|s| match s.trim() {
            "main1" => Ok(Formula::Main1),
            "main2" => Ok(Formula::Main2),
            "hardy-ramanujan" => Ok(Formula::HardyRamanujan),
            other => Err(format!(
                "unknown formula '{other}'; expected main1, main2, or hardy-ramanujan"
            )),
        })
        .collect()
}

fn cmd_compare(args: &CompareArgs, warnings: &mut Vec<String>) -> Result<(), String> {
    let model = parse_model(&args.model)?;
    let energies = parse_energies(&args.energies)?;
    // Hardy-Ramanujan needs no profile; fall back to counts-only when a
    // custom model has none and only that formula was requested.
    let profile = resolve_profile(&model, &args.profile).ok();
    let formulas = match &args.formulas {
        Some(list) => parse_formulas(list)?,
        None => default_formulas(&model, &profile),
    };
    if profile.is_none()
        && formulas
            .iter()
            .any(|f| !matches!(f, Formula::HardyRamanujan))
    {
        // Reproduce the profile error with its explanation.
        resolve_profile(&model, &args.profile)?;
    }
    let table =
        exact::count_states(&model, *energies.last().unwrap()).map_err(|e| e.to_string())?;
    let mut rows = Vec::new();
    for &e in &energies {
        let Some(ln_exact) = table.ln_omega(e) else {
            warnings.push(format!("omega({e}) = 0; ratio undefined, row skipped"));
            continue;
        };
        for &f in &formulas {
            let (ln_estimate, id) =
                estimate_at(f, &model, &profile, e).map_err(|m| format!("E={e}: {m}"))?;
            rows.push(ComparisonRow::new(e, ln_exact, ln_estimate, id));
        }
    }
    let content = match args.format {
        OutFormat::Csv => csv_to_string(|buf| asymptotics::write_comparison_csv(&rows, buf))?,
        OutFormat::Json => output::to_json(&output::comparison_rows(&rows)),
    };
    write_out(&args.out, &content)
}

fn cmd_contour(args: &ContourArgs, warnings: &mut Vec<String>) -> Result<(), String> {
    let model = parse_model(&args.model)?;
    let energies = parse_energies(&args.energies)?;
    let profile = if args.x.is_none() {
        match resolve_profile(&model, &args.profile) {
            Ok(p) => Some(p),
            Err(m) => return Err(format!("{m} (or pass a fixed --x)")),
        }
    } else {
        None
    };
    let table =
        exact::count_states(&model, *energies.last().unwrap()).map_err(|e| e.to_string())?;
    let mut rows = Vec::new();
    for &e in &energies {
        let x = match args.x {
            Some(x) => x,
            None => {
                solve_saddle(profile.as_ref().unwrap(), e as f64)
                    .map_err(|er| er.to_string())?
                    .x_e
            }
        };
        let q = args.quad.unwrap_or(20 * (e as usize + 1)).max(64);
        let est = gpf::contour_extract(&model, e, x, q).map_err(|er| er.to_string())?;
        let omega = table.omega(e);
        let omega_f = omega.to_f64().unwrap_or(f64::INFINITY);
        let rel_error = if omega_f == 0.0 {
            est.value.abs()
        } else {
            (est.value - omega_f).abs() / omega_f
        };
        if est.imag_ratio > 1e-8 {
            warnings.push(format!(
                "imaginary leak {:.2e} at E={e}; quadrature may be underresolved",
                est.imag_ratio
            ));
        }
        rows.push(output::ContourRowDoc {
            e,
            omega: omega.to_string(),
            estimate: est.value,
            rel_error,
            imag_ratio: est.imag_ratio,
        });
    }
    let content = match args.format {
        OutFormat::Csv => {
            let mut s = String::from("E,omega,estimate,rel_error,imag_ratio\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.e, r.omega, r.estimate, r.rel_error, r.imag_ratio
                ));
            }
            s
        }
        OutFormat::Json => output::to_json(&rows),
    };
    write_out(&args.out, &content)
}

fn cmd_condition_h(args: &ConditionHArgs, warnings: &mut Vec<String>) -> Result<(), String> {
    let model = parse_model(&args.model)?;
    if !(args.x_min > 0.0 && args.x_max >= args.x_min) {
        return Err("need 0 < x-min <= x-max".into());
    }
    if args.x_count == 0 || args.y_count == 0 {
        return Err("x-count and y-count must be positive".into());
    }
    let mut rows = Vec::new();
    for i in 0..args.x_count {
        let frac = if args.x_count == 1 { 0.0 } else { i as f64 / (args.x_count - 1) as f64 };
        let x = args.x_min + (args.x_max - args.x_min) * frac;
        for k in 0..args.y_count {
            let yfrac =
                if args.y_count == 1 { 1.0 } else { k as f64 / (args.y_count - 1) as f64 };
            let y = x + (std::f64::consts::PI - x) * yfrac;
            let margin = gpf::condition_h_margin(&model, x, y).map_err(|e| e.to_string())?;
            let log_g =
                gpf::log_grand_partition(&model, HalfPlanePoint::new(x, y).unwrap(), DEFAULT_TAIL_TOL)
                    .map_err(|e| e.to_string())?;
            if margin >= 0.0 {
                warnings.push(format!("condition (H) margin {margin:.3e} >= 0 at x={x} y={y}"));
            }
            rows.push(DiagnosticRow {
                x,
                y,
                re_log_g: log_g.re,
                im_log_g: log_g.im,
                re_j: None,
                im_j: None,
                margin: Some(margin),
            });
        }
    }
    let content = match args.format {
        OutFormat::Csv => csv_to_string(|buf| gpf::write_diagnostic_csv(&rows, buf))?,
        OutFormat::Json => output::to_json(&output::diagnostic_rows(&rows)),
    };
    write_out(&args.out, &content)
}

fn cmd_residual(args: &ResidualArgs) -> Result<(), String> {
    let model = parse_model(&args.model)?;
    let profile = resolve_profile(&model, &args.profile)?;
    if !(args.x_min > 0.0 && args.x_max >= args.x_min) {
        return Err("need 0 < x-min <= x-max".into());
    }
    if args.points == 0 {
        return Err("points must be positive".into());
    }
    let mut rows = Vec::new();
    for i in 0..args.points {
        let frac = if args.points == 1 { 0.0 } else { i as f64 / (args.points - 1) as f64 };
        let x = args.x_min * (args.x_max / args.x_min).powf(frac);
        let tau = HalfPlanePoint::real(x).map_err(|e| e.to_string())?;
        let dec = gpf::meinardus_residual(&model, &profile, tau, args.tail_tol)
            .map_err(|e| e.to_string())?;
        rows.push(DiagnosticRow {
            x,
            y: 0.0,
            re_log_g: dec.log_g.re,
            im_log_g: dec.log_g.im,
            re_j: Some(dec.residual_j.re),
            im_j: Some(dec.residual_j.im),
            margin: None,
        });
    }
    let content = match args.format {
        OutFormat::Csv => csv_to_string(|buf| gpf::write_diagnostic_csv(&rows, buf))?,
        OutFormat::Json => output::to_json(&output::diagnostic_rows(&rows)),
    };
    write_out(&args.out, &content)
}

fn cmd_report(args: &ReportArgs, warnings: &mut Vec<String>) -> Result<(), String> {
    let model = parse_model(&args.model)?;
    if args.emax == 0 {
        return Err("report needs emax >= 1".into());
    }
    let energies = match &args.energies {
        Some(list) => parse_energies(list)?,
        None => {
            let mut es: Vec<u64> = [args.emax / 4, args.emax / 2, args.emax]
                .into_iter()
                .filter(|&e| e > 0)
                .collect();
            es.dedup();
            es
        }
    };
    if energies.iter().any(|&e| e > args.emax) {
        return Err("all report energies must be <= emax".into());
    }

    // Custom models without a profile still get a counts-only report.
    let profile = match (&model, &args.profile) {
        (SpectrumModel::Custom { .. }, None) => None,
        _ => Some(resolve_profile(&model, &args.profile)?),
    };

    let table = exact::count_states(&model, args.emax).map_err(|e| e.to_string())?;
    let cum = exact::cumulative(&table);

    let (statistics, checks) = match &profile {
        None => (None, None),
        Some(p) => {
            let knopp_all = asymptotics::knopp_statistic(&table, p);
            let weyl_all = asymptotics::weyl_average_statistic(&cum, p);
            let pick = |stats: &[(u64, f64)]| -> Vec<output::StatisticPoint> {
                energies
                    .iter()
                    .filter_map(|&e| {
                        stats
                            .iter()
                            .find(|&&(ee, _)| ee == e)
                            .map(|&(ee, value)| output::StatisticPoint { e: ee, value })
                    })
                    .collect()
            };
            let knopp = pick(&knopp_all);
            let weyl = pick(&weyl_all);

            let mut saddle_rows = Vec::new();
            let mut saddle_ok = true;
            let mut eta_positive = true;
            for &e in &energies {
                match solve_saddle(p, e as f64) {
                    Ok(s) => {
                        if s.eta <= 0.0 {
                            eta_positive = false;
                            warnings.push(format!("eta <= 0 at E={e}"));
                        }
                        saddle_rows.push(output::SaddleRowDoc {
                            e,
                            x_e: s.x_e,
                            m_e: s.m_e,
                            eta: s.eta,
                            exponent: s.exponent,
                        });
                    }
                    Err(er) => {
                        saddle_ok = false;
                        warnings.push(format!("saddle solve failed at E={e}: {er}"));
                    }
                }
            }

            let formulas = default_formulas(&model, &profile);
            let mut rows = Vec::new();
            let mut comparison_finite = true;
            for &e in &energies {
                let Some(ln_exact) = table.ln_omega(e) else {
                    comparison_finite = false;
                    warnings.push(format!("omega({e}) = 0; comparison skipped"));
                    continue;
                };
                for &f in &formulas {
                    let (ln_estimate, id) = estimate_at(f, &model, &profile, e)
                        .map_err(|m| format!("E={e}: {m}"))?;
                    rows.push(ComparisonRow::new(e, ln_exact, ln_estimate, id));
                }
            }
            comparison_finite &= rows
                .iter()
                .all(|r| r.ln_estimate.is_finite() && r.ratio.is_finite());

            let statistics_below_limit = knopp
                .iter()
                .chain(weyl.iter())
                .all(|pt| pt.value < p.b_n);
            if !statistics_below_limit {
                warnings.push("a growth statistic overshot its limit B_n".into());
            }

            let checks = output::ChecksDoc {
                saddle_ok,
                eta_positive,
                statistics_below_limit,
                comparison_finite,
            };
            let stats = output::StatisticsDoc {
                knopp,
                weyl,
                saddle: saddle_rows,
                comparison: output::comparison_rows(&rows),
            };
            (Some(stats), Some(checks))
        }
    };

    let all_pass = checks.as_ref().map_or(true, |c| c.all_pass());
    let doc = output::ReportDoc {
        tool: output::tool_info(),
        model: model.to_string(),
        profile: profile.as_ref().map(output::profile_doc),
        tables: output::tables_doc(&table, &cum),
        statistics,
        checks,
        warnings: warnings.clone(),
    };
    write_out(&args.out, &output::to_json(&doc))?;
    if !all_pass {
        return Err("one or more report checks failed".into());
    }
    Ok(())
}
