use serde_json::{json, Value};

use unruh_core::analysis::{
    detect_kink, fit_exponential, run_sweep, sudden_change_curve, sudden_change_point_closed_form,
    sudden_death_q, Axis, KinkSettings, SweepSpec, SweepVariable,
};
use unruh_core::correlations::{correlation_report, OptimizerSettings};
use unruh_core::unruh::{
    local_temperature, model_state, schwarzschild_q, static_observer_acceleration, ModelParams,
    PhysicalDetectorParams, SchwarzschildConfig,
};

use crate::args::{
    BlackholeArgs, Cli, Command, FitArgs, Format, Method, ParamArgs, SuddenChangeArgs, SuddenDeathArgs,
    SweepArgs,
};
use crate::error::{CliError, CliResult};
use crate::output::{csv_number, emit, num, render, round_sig, Report};

const BASIS: [&str; 4] = ["0A0R", "1A0R", "0A1R", "1A1R"];

pub fn run(cli: &Cli) -> CliResult<()> {
    if cli.jobs == Some(0) {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let opt = cli.optimizer.settings();
    opt.validate()?;
    let (report, default_format) = match &cli.command {
        Command::State(p) => (state(p)?, Format::Json),
        Command::Correlations(p) => (correlations(p, &opt)?, Format::Json),
        Command::Sweep(s) => (sweep(s, &opt, cli.jobs)?, Format::Csv),
        Command::SuddenChange(s) => (sudden_change(s, &opt)?, Format::Json),
        Command::SuddenDeath(s) => (sudden_death(s)?, Format::Json),
        Command::Fit(f) => (fit(f)?, Format::Json),
        Command::Blackhole(b) => (blackhole(b)?, Format::Json),
    };
    let bytes = render(&report, cli.output.unwrap_or(default_format))?;
    emit(&bytes, cli.out.as_deref())
}

fn model_params(p: &ParamArgs) -> CliResult<ModelParams> {
    if !p.physical {
        return Ok(ModelParams::new(p.q, p.nu2, p.alpha)?);
    }
    let need = |v: Option<f64>, name: &str| v.ok_or_else(|| CliError::Usage(format!("--physical needs --{name}")));
    let det = PhysicalDetectorParams {
        omega: need(p.omega, "omega")?,
        accel: need(p.accel, "accel")?,
        eps: need(p.eps, "eps")?,
        delta: need(p.delta, "delta")?,
        kappa: p.kappa.unwrap_or(0.0),
    };
    let m = det.to_model(p.alpha)?;
    for w in det.validity_warnings() {
        eprintln!("warning: {w}");
    }
    eprintln!("derived q = {}, nu2 = {}", m.q, m.nu2);
    Ok(m)
}

fn state(p: &ParamArgs) -> CliResult<Report> {
    let m = model_params(p)?;
    let rho = model_state(&m)?;
    let entry = |i: usize, j: usize| rho.get(i, j);
    let real: Vec<Vec<Value>> = (0..4).map(|i| (0..4).map(|j| num(entry(i, j).re)).collect()).collect();
    let imag: Vec<Vec<Value>> = (0..4).map(|i| (0..4).map(|j| num(entry(i, j).im)).collect()).collect();
    let json = json!({
        "q": m.q,
        "nu2": m.nu2,
        "alpha": m.alpha,
        "basis": BASIS,
        "real": real,
        "imag": imag,
        "eigenvalues": rho.eigenvalues()?,
    });
    let rows = (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .map(|(i, j)| {
            vec![
                BASIS[i].to_string(),
                BASIS[j].to_string(),
                csv_number(entry(i, j).re),
                csv_number(entry(i, j).im),
            ]
        })
        .collect();
    Ok(Report {
        json,
        header: ["row", "col", "re", "im"].map(String::from).to_vec(),
        rows,
    })
}

fn correlations(p: &ParamArgs, opt: &OptimizerSettings) -> CliResult<Report> {
    let m = model_params(p)?;
    let rho = model_state(&m)?;
    let r = correlation_report(&rho, opt)?;
    // entanglement of α = 0 or 1 states is zero from the start
    let q_sd = if m.alpha > 0.0 && m.alpha < 1.0 { num(sudden_death_q(m.nu2)?) } else { Value::Null };
    let (a, b) = r.optimal_angles;
    let angle = |x: f64| num(round_sig(x, 10));
    let mut report = Report::record(vec![
        ("q", num(m.q)),
        ("nu2", num(m.nu2)),
        ("alpha", num(m.alpha)),
        ("I", num(r.mutual_info)),
        ("K", num(r.classical_two_side)),
        ("Q", num(r.quantum_two_side)),
        ("D_A", num(r.discord_on_a)),
        ("D_R", num(r.discord_on_r)),
        ("C", num(r.classical_one_side)),
        ("concurrence", num(r.concurrence)),
        ("negativity", num(r.negativity)),
        ("q_sd", q_sd),
        ("theta_A", angle(a.theta)),
        ("phi_A", angle(a.phi)),
        ("theta_R", angle(b.theta)),
        ("phi_R", angle(b.phi)),
    ]);
    let obj = report.json.as_object_mut().expect("record is an object");
    for k in ["theta_A", "phi_A", "theta_R", "phi_R"] {
        obj.remove(k);
    }
    obj.insert(
        "optimal_angles".into(),
        json!({
            "alice": { "theta": angle(a.theta), "phi": angle(a.phi) },
            "rob": { "theta": angle(b.theta), "phi": angle(b.phi) },
        }),
    );
    obj.insert("optimizer_evals".into(), json!(r.optimizer_evals));
    Ok(report)
}

fn default_range(v: SweepVariable) -> (f64, f64) {
    match v {
        SweepVariable::Q => (0.0, 0.999),
        SweepVariable::Nu2 => (0.0, 4.0),
        SweepVariable::Alpha => (0.0, 1.0),
    }
}

fn sweep(s: &SweepArgs, opt: &OptimizerSettings, jobs: Option<usize>) -> CliResult<Report> {
    if s.params.physical {
        return Err(CliError::Usage("sweep takes q, nu2 and alpha directly; --physical is not supported".into()));
    }
    let (lo, hi) = default_range(s.var);
    let axis = Axis { variable: s.var, lo: s.lo.unwrap_or(lo), hi: s.hi.unwrap_or(hi), points: s.points };
    let second = s.var2.map(|v| {
        let (lo, hi) = default_range(v);
        Axis { variable: v, lo: s.lo2.unwrap_or(lo), hi: s.hi2.unwrap_or(hi), points: s.points2 }
    });
    let spec = SweepSpec {
        axis,
        second,
        // swept entries are overwritten per row; validate only the rest
        fixed: ModelParams { q: s.params.q, nu2: s.params.nu2, alpha: s.params.alpha },
        quantities: s.quantities.clone(),
    };
    let rows = run_sweep(&spec, opt, jobs)?;

    let mut header: Vec<String> = spec.variables().iter().map(|v| v.name().to_string()).collect();
    header.extend(spec.quantities.iter().map(|q| q.name().to_string()));
    header.push("error".into());

    let mut failed = 0;
    let mut table = Vec::with_capacity(rows.len());
    let mut json_rows = Vec::with_capacity(rows.len());
    for row in &rows {
        let mut cells: Vec<String> = row.coords.iter().map(|&x| csv_number(x)).collect();
        let mut values: Vec<Value> = row.coords.iter().map(|&x| num(x)).collect();
        match &row.values {
            Ok(v) => {
                cells.extend(v.iter().map(|&x| csv_number(x)));
                cells.push(String::new());
                values.extend(v.iter().map(|&x| num(x)));
                values.push(Value::Null);
            }
            Err(e) => {
                failed += 1;
                cells.extend(spec.quantities.iter().map(|_| String::new()));
                cells.push(e.clone());
                values.extend(spec.quantities.iter().map(|_| Value::Null));
                values.push(Value::String(e.clone()));
            }
        }
        table.push(cells);
        json_rows.push(Value::Array(values));
    }
    if failed > 0 {
        eprintln!("warning: {failed} of {} rows failed; see the error column", rows.len());
    }
    Ok(Report {
        json: json!({ "columns": header, "rows": json_rows }),
        header,
        rows: table,
    })
}

fn sudden_change(s: &SuddenChangeArgs, opt: &OptimizerSettings) -> CliResult<Report> {
    let tol = s.tol();
    let q_sc = match s.method {
        Method::ClosedForm => {
            if (s.alpha - std::f64::consts::FRAC_1_SQRT_2).abs() > 1e-9 {
                return Err(CliError::Usage(
                    "the closed-form method needs alpha = 1/sqrt(2); use --method kink".into(),
                ));
            }
            sudden_change_point_closed_form(s.nu2, tol)?
        }
        Method::Kink => {
            let settings = KinkSettings { grid_points: s.grid_points, refine_tol_q: tol, ..KinkSettings::default() };
            detect_kink(s.measure.into(), s.nu2, s.alpha, &settings, opt)?.q
        }
    };
    Ok(Report::record(vec![
        ("nu2", num(s.nu2)),
        ("alpha", num(s.alpha)),
        ("q_sc", num(q_sc)),
        ("method", Value::String(s.method.name().into())),
        ("tol", num(tol)),
    ]))
}

fn sudden_death(s: &SuddenDeathArgs) -> CliResult<Report> {
    Ok(Report::record(vec![("nu2", num(s.nu2)), ("q_sd", num(sudden_death_q(s.nu2)?))]))
}

fn fit(f: &FitArgs) -> CliResult<Report> {
    let (lo, hi) = (f.range[0], f.range[1]);
    let pts = sudden_change_curve(lo, hi, f.points, f.tol)?;
    let fit = fit_exponential(&pts)?;
    let c = fit.coefficients;
    Ok(Report::record(vec![
        ("a", num(c.a)),
        ("b", num(c.b)),
        ("c", num(c.c)),
        ("residual", num(fit.max_log_residual)),
        ("rms_residual", num(fit.rms_log_residual)),
        ("max_q_residual", num(fit.max_q_residual)),
    ]))
}

fn blackhole(b: &BlackholeArgs) -> CliResult<Report> {
    let cfg = SchwarzschildConfig::new(b.mass, b.radius)?;
    Ok(Report::record(vec![
        ("accel", num(static_observer_acceleration(&cfg)?)),
        ("local_temperature", num(local_temperature(&cfg)?)),
        ("q", num(schwarzschild_q(&cfg, b.omega)?)),
    ]))
}
