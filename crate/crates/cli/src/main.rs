use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use noblespin::gaussian::{minimal_variance, squeezing_parameter};
use noblespin::io::csv::{self, fmt_f64};
use noblespin::io::{config_digest, parse_config, to_normalized_toml, write_atomic, RunManifest};
use noblespin::stochastic::langevin::{adiabatic_scan, reference_model, FrameModel};
use noblespin::stochastic::lifetime::{lifetime_decay, lifetime_mc};
use noblespin::stochastic::{sample_io, P_B_FEEDBACK, P_B_OUT, X_L_OUT};
use noblespin::sweep::{lifetime_curves, squeezing_map, working_points, DEFAULT_INITIAL_DB};
use noblespin::{
    derive, AxisKind, ChannelSpec, DeriveOptions, DerivedParams, McSettings, PhysicalConfig, SweepAxis,
    SweepGrid,
};

#[derive(Parser)]
#[command(name = "noblespin", version, about = "Two-cell noble-gas spin squeezing toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive dimensionless parameters from a physical configuration.
    Derive(Common),
    /// Squeezing parameter, optimal gain and EPR value of one channel.
    Squeeze {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Squeezing map over a two-parameter grid.
    Map {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        spec: SpecArgs,
        /// XMIN:XMAX:STEPS[:log],YMIN:YMAX:STEPS[:log]
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, default_value = "kappa_eff")]
        x_axis: AxisKind,
        #[arg(long, default_value = "rho")]
        y_axis: AxisKind,
    },
    /// Monte-Carlo sampling of the noisy input-output relations.
    Mc {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Full versus eliminated alkali dynamics over a decade of detuning.
    Adiabatic {
        #[command(flatten)]
        common: Common,
        /// Integration step, s. Defaults to the largest resolved step per run.
        #[arg(long)]
        dt: Option<f64>,
    },
    /// Decay of squeezing after the measurement.
    Lifetime {
        #[command(flatten)]
        common: Common,
        /// Γ_b in s⁻¹. Defaults to the configuration's value, else 0.5.
        #[arg(long)]
        gamma: Option<f64>,
        /// End time, s. Defaults to 2Γ_b·t = 3.
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long, default_value_t = 301)]
        steps: usize,
        /// Initial squeezing values, dB.
        #[arg(long, value_delimiter = ',')]
        db: Option<Vec<f64>>,
        /// Also run the Monte-Carlo check of the deepest curve with this many paths.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Monte-Carlo step, s. Defaults to 10⁻³/(2Γ_b).
        #[arg(long)]
        dt: Option<f64>,
    },
    /// The three reference working points.
    Points(Common),
}

#[derive(Args, Clone)]
struct Common {
    #[arg(short, long)]
    config: Option<PathBuf>,
    #[arg(short, long, default_value = "out")]
    out: PathBuf,
    /// Downgrade regime-guard failures to warnings.
    #[arg(long)]
    allow_regime_violation: bool,
}

/// Channel overrides. Without a config the headline tuple is the base.
#[derive(Args, Clone)]
struct SpecArgs {
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
}

#[derive(Args, Clone)]
struct McArgs {
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

const HEADLINE_SPEC: ChannelSpec = ChannelSpec {
    kappa: 2.0,
    epsilon: 0.3,
    eta: 0.125,
    rho: 0.162,
};

/// Everything a subcommand produces; nothing touches disk until it is complete.
struct Output {
    manifest: RunManifest,
    files: Vec<(&'static str, String)>,
    stdout: Vec<(String, Value)>,
}

impl Output {
    fn new(subcommand: &str) -> Self {
        Output {
            manifest: RunManifest::new(subcommand),
            files: Vec::new(),
            stdout: Vec::new(),
        }
    }

    fn report(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.stdout.push((key.into(), value.into()));
    }

    fn commit(mut self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (name, body) in &self.files {
            write_atomic(dir.join(name), body.as_bytes())?;
            self.manifest.artifacts.push((*name).to_owned());
        }
        self.manifest.write(dir)?;
        for (k, v) in &self.stdout {
            match v {
                Value::Number(n) => println!("{k} = {}", n.as_f64().map(fmt_f64).unwrap_or_else(|| n.to_string())),
                Value::String(s) => println!("{k} = {s}"),
                other => println!("{k} = {other}"),
            }
        }
        Ok(())
    }
}

fn diagnostic(level: &str, code: &str, message: &str, field: Option<&str>) {
    let mut rec = json!({ "level": level, "code": code, "message": message });
    if let Some(f) = field {
        rec["field"] = json!(f);
    }
    eprintln!("{rec}");
}

struct Loaded {
    config: PhysicalConfig,
    params: DerivedParams,
}

fn load(common: &Common, out: &mut Output) -> Result<Option<Loaded>> {
    let Some(path) = &common.config else {
        return Ok(None);
    };
    let config = parse_config(path)?;
    let options = DeriveOptions {
        allow_regime_violation: common.allow_regime_violation,
        ..Default::default()
    };
    let params = derive(&config, options)?;
    out.manifest.config_digest = Some(config_digest(&config));
    for w in &params.warnings {
        diagnostic("warning", w.code, &w.message, None);
        out.manifest.warnings.push(format!("{}: {}", w.code, w.message));
    }
    Ok(Some(Loaded { config, params }))
}

fn channel(loaded: Option<&Loaded>, args: &SpecArgs) -> Result<ChannelSpec> {
    let base = loaded.map_or(HEADLINE_SPEC, |l| l.params.channel_spec());
    let spec = ChannelSpec {
        kappa: args.kappa.unwrap_or(base.kappa),
        epsilon: args.epsilon.unwrap_or(base.epsilon),
        eta: args.eta.unwrap_or(base.eta),
        rho: args.rho.unwrap_or(base.rho),
    };
    spec.validate()?;
    Ok(spec)
}

fn spec_json(spec: &ChannelSpec) -> Value {
    json!({ "kappa": spec.kappa, "epsilon": spec.epsilon, "eta": spec.eta, "rho": spec.rho })
}

fn run_derive(common: &Common) -> Result<Output> {
    let mut out = Output::new("derive");
    if common.config.is_none() {
        return Err(noblespin::Error::Validation {
            field: "config".into(),
            message: "derive needs -c/--config".into(),
        }
        .into());
    }
    let loaded = load(common, &mut out)?.expect("config given");
    let mut report = Map::new();
    for (k, v) in loaded.params.report() {
        report.insert(k.to_owned(), json!(v));
        out.report(k, v);
    }
    out.files.push(("derived.json", serde_json::to_string_pretty(&report)? + "\n"));
    out.files.push(("config.toml", to_normalized_toml(&loaded.config)));
    Ok(out)
}

fn run_squeeze(common: &Common, args: &SpecArgs) -> Result<Output> {
    let mut out = Output::new("squeeze");
    let loaded = load(common, &mut out)?;
    let spec = channel(loaded.as_ref(), args)?;
    let r = squeezing_parameter(&spec);
    let body = json!({
        "spec": spec_json(&spec),
        "xi": r.xi,
        "var_out": r.var_out,
        "squeezing_db": r.squeezing_db,
        "gain": r.gain,
        "epr_value": r.epr_value,
        "entangled": r.entangled,
    });
    out.report("xi", r.xi);
    out.report("var_out", r.var_out);
    out.report("squeezing_db", r.squeezing_db);
    out.report("gain", r.gain);
    out.report("epr_value", r.epr_value);
    out.report("entangled", r.entangled);
    out.files.push(("squeeze.json", serde_json::to_string_pretty(&body)? + "\n"));
    Ok(out)
}

fn parse_grid(text: Option<&str>, x: AxisKind, y: AxisKind) -> Result<(SweepAxis, SweepAxis)> {
    let default = SweepGrid::default();
    let Some(text) = text else {
        let mut gx = default.x;
        let mut gy = default.y;
        gx.kind = x;
        gy.kind = y;
        return Ok((gx, gy));
    };
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(noblespin::Error::Validation {
            field: "grid".into(),
            message: format!("expected two comma-separated axes, got `{text}`"),
        }
        .into());
    }
    Ok((SweepAxis::parse(x, parts[0])?, SweepAxis::parse(y, parts[1])?))
}

fn run_map(common: &Common, args: &SpecArgs, grid: Option<&str>, x: AxisKind, y: AxisKind) -> Result<Output> {
    let mut out = Output::new("map");
    let loaded = load(common, &mut out)?;
    let base = if loaded.is_some() {
        channel(loaded.as_ref(), args)?
    } else {
        let d = SweepGrid::default().fixed;
        ChannelSpec {
            kappa: args.kappa.unwrap_or(d.kappa),
            epsilon: args.epsilon.unwrap_or(d.epsilon),
            eta: args.eta.unwrap_or(d.eta),
            rho: args.rho.unwrap_or(d.rho),
        }
    };
    let (gx, gy) = parse_grid(grid, x, y)?;
    let grid = SweepGrid { x: gx, y: gy, fixed: base };
    let result = squeezing_map(&grid)?;
    let peak = result.argmax();
    out.report(format!("peak_{}", x.name()), peak.x);
    out.report(format!("peak_{}", y.name()), peak.y);
    out.report("peak_db", peak.value_db);
    out.manifest.axes = vec![x.name().to_owned(), y.name().to_owned()];
    out.files.push(("map.csv", csv::map_csv(&result)));
    out.files.push(("map_linear.csv", csv::map_linear_csv(&result)));
    Ok(out)
}

fn run_mc(common: &Common, args: &SpecArgs, mc: &McArgs) -> Result<Output> {
    let mut out = Output::new("mc");
    let loaded = load(common, &mut out)?;
    let spec = channel(loaded.as_ref(), args)?;
    let settings = McSettings::new(mc.samples, mc.seed);
    let stats = sample_io(&spec, &settings)?;
    let ChannelSpec {
        kappa,
        epsilon,
        rho,
        ..
    } = spec;
    let expected = |label: &str| match label {
        P_B_FEEDBACK => minimal_variance(&spec),
        X_L_OUT => 0.5 * ((1.0 - epsilon) * (1.0 + kappa * kappa * (1.0 + rho)) + epsilon),
        P_B_OUT => 0.5,
        _ => f64::NAN,
    };
    let mut body = String::from("observable,mean,variance,stderr_var,closed_form\n");
    for (label, s) in stats.labels.iter().zip(&stats.observables) {
        body.push_str(&format!(
            "{label},{},{},{},{}\n",
            fmt_f64(s.mean),
            fmt_f64(s.variance),
            fmt_f64(s.stderr_var),
            fmt_f64(expected(label))
        ));
    }
    let fb = stats.get(P_B_FEEDBACK).expect("feedback observable");
    out.report("variance", fb.variance);
    out.report("stderr_var", fb.stderr_var);
    out.report("closed_form", expected(P_B_FEEDBACK));
    out.report("z_score", fb.z_score(expected(P_B_FEEDBACK)));
    out.manifest.seed = Some(mc.seed);
    out.files.push(("mc.csv", body));
    Ok(out)
}

fn run_adiabatic(common: &Common, dt: Option<f64>) -> Result<Output> {
    let mut out = Output::new("adiabatic");
    let loaded = load(common, &mut out)?;
    let base = loaded.as_ref().map_or(reference_model(), |l| FrameModel::from(&l.params));
    let detunings: Vec<f64> = [1.0, 2.0, 5.0, 10.0].iter().map(|f| f * base.detuning).collect();
    let settle = 15.0 / base.gamma_a;
    let scan = adiabatic_scan(&base, &detunings, dt, settle, settle + 5.0 / base.gamma_a)?;
    let mut body = String::from("detuning_rad_per_s,max_relative,rms_relative\n");
    for r in &scan.reports {
        body.push_str(&format!(
            "{},{},{}\n",
            fmt_f64(r.detuning),
            fmt_f64(r.max_relative),
            fmt_f64(r.rms_relative)
        ));
    }
    out.report("exponent", scan.exponent);
    out.report("max_relative_at_base", scan.reports[0].max_relative);
    out.files.push(("adiabatic.csv", body));
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn run_lifetime(
    common: &Common,
    gamma: Option<f64>,
    t_max: Option<f64>,
    steps: usize,
    db: Option<&[f64]>,
    samples: Option<usize>,
    seed: u64,
    dt: Option<f64>,
) -> Result<Output> {
    let mut out = Output::new("lifetime");
    let loaded = load(common, &mut out)?;
    let gamma = gamma.unwrap_or(loaded.as_ref().map_or(0.5, |l| l.params.big_gamma_b));
    let t_max = t_max.unwrap_or(1.5 / gamma);
    let initial = db.unwrap_or(&DEFAULT_INITIAL_DB);
    let curves = lifetime_curves(initial, gamma, t_max, steps)?;
    out.report("gamma_b", gamma);
    out.files.push(("series.csv", csv::series_csv(&curves)));

    if let Some(n) = samples {
        let deepest = initial.iter().copied().fold(0.0, f64::max);
        let var0 = noblespin::gaussian::db_to_variance(deepest);
        let mut settings = McSettings::new(n, seed);
        settings.dt = dt.unwrap_or(1e-3 / (2.0 * gamma));
        settings.t_final = t_max;
        let every = (settings.steps() / (steps - 1).max(1)).max(1);
        let series = lifetime_mc(var0, gamma, &settings, every)?;
        let analytic = lifetime_decay(var0, gamma, &series.times);
        let worst = series
            .variance
            .iter()
            .zip(&series.stderr)
            .zip(&analytic)
            .map(|((v, e), a)| (v - a).abs() / e)
            .fold(0.0, f64::max);
        out.report("mc_max_z", worst);
        out.manifest.seed = Some(seed);
        out.files.push(("series_mc.csv", csv::series_mc_csv(&series, &analytic)));
    }
    Ok(out)
}

fn run_points(common: &Common) -> Result<Output> {
    let mut out = Output::new("points");
    load(common, &mut out)?;
    let points = working_points();
    for p in &points {
        out.report(format!("{}.xi", p.label), p.xi_computed);
    }
    out.files.push(("points.csv", csv::points_csv(&points)));
    Ok(out)
}

fn run(cli: Cli) -> Result<()> {
    let (out, dir) = match &cli.command {
        Command::Derive(c) => (run_derive(c)?, &c.out),
        Command::Squeeze { common, spec } => (run_squeeze(common, spec)?, &common.out),
        Command::Map {
            common,
            spec,
            grid,
            x_axis,
            y_axis,
        } => (run_map(common, spec, grid.as_deref(), *x_axis, *y_axis)?, &common.out),
        Command::Mc { common, spec, mc } => (run_mc(common, spec, mc)?, &common.out),
        Command::Adiabatic { common, dt } => (run_adiabatic(common, *dt)?, &common.out),
        Command::Lifetime {
            common,
            gamma,
            t_max,
            steps,
            db,
            samples,
            seed,
            dt,
        } => (
            run_lifetime(common, *gamma, *t_max, *steps, db.as_deref(), *samples, *seed, *dt)?,
            &common.out,
        ),
        Command::Points(c) => (run_points(c)?, &c.out),
    };
    out.commit(dir)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            diagnostic("error", "UsageError", e.to_string().trim(), None);
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let (code, field, status) = match err.downcast_ref::<noblespin::Error>() {
                Some(e) => (e.code(), e.field(), if e.is_numerical_guard() { 2 } else { 1 }),
                None => ("Error", None, 1),
            };
            diagnostic("error", code, &format!("{err:#}"), field);
            ExitCode::from(status)
        }
    }
}
