//! One function per command. Each validates its inputs, calls the library
//! and returns an [`Output`].

use std::f64::consts::PI;

use fracwave::fractional_ops::{rl_derivative, RlOrder, DEFAULT_RATIO};
use fracwave::mittag_leffler::ml;
use fracwave::rl_solver::{
    decay_bound_ratio, decay_slopes, scalar_sampled, scalar_solution, solve_series, DEFAULT_MODES,
};
use fracwave::sampling::{data_norm, Profile};
use fracwave::trace_duality::{
    admissible_intervals, dalpha_interval, duality_check, nabla_interval, regularity_ratio,
    rellich_residual, trace_energy, xi_sweep, RegularityNorm, VectorFieldH, RELLICH_THETA,
};
use fracwave::{DataSampler, DomainSpec, MlParams, ModalData, SeriesSolution, TimeGrid};

use crate::failure::{Context, Failure};
use crate::output::{Output, Record, Table, Value};
use crate::settings::{Command, Norm, Settings};

/// Result of a command: what to write, and whether it counts as a success.
pub struct Outcome {
    pub output: Output,
    pub failure: Option<Failure>,
}

impl From<Output> for Outcome {
    fn from(output: Output) -> Self {
        Outcome {
            output,
            failure: None,
        }
    }
}

pub fn run(command: Command, s: &Settings) -> Result<Outcome, Failure> {
    match command {
        Command::Ml => ml_cmd(s).map(Into::into),
        Command::Scalar => scalar_cmd(s).map(Into::into),
        Command::Solve => solve_cmd(s).map(Into::into),
        Command::Intervals => intervals_cmd(s).map(Into::into),
        Command::Trace => trace_cmd(s).map(Into::into),
        Command::Regularity => regularity_cmd(s).map(Into::into),
        Command::Rellich => rellich_cmd(s).map(Into::into),
        Command::Decay => decay_cmd(s).map(Into::into),
        Command::Duality => duality_cmd(s).map(Into::into),
        Command::Selftest => crate::selftest::run(s.seed.unwrap_or(crate::selftest::DEFAULT_SEED)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum GradingSpec {
    Uniform,
    Geometric(f64),
}

fn parse_grading(s: &str) -> Result<GradingSpec, Failure> {
    let s = s.trim();
    if s == "uniform" {
        return Ok(GradingSpec::Uniform);
    }
    if s == "geometric" {
        return Ok(GradingSpec::Geometric(DEFAULT_RATIO));
    }
    s.strip_prefix("geometric:")
        .and_then(|r| r.trim().parse::<f64>().ok())
        .map(GradingSpec::Geometric)
        .ok_or_else(|| {
            Failure::usage(format!(
                "--grading: expected uniform or geometric:R, got '{s}'"
            ))
        })
}

fn time_grid(
    s: &Settings,
    default_grading: GradingSpec,
    default_steps: usize,
    default_horizon: f64,
) -> Result<TimeGrid, Failure> {
    let grading = match &s.grading {
        Some(g) => parse_grading(g)?,
        None => default_grading,
    };
    let horizon = s.t.unwrap_or(default_horizon);
    let steps = s.m.unwrap_or(default_steps);
    match grading {
        GradingSpec::Uniform => TimeGrid::uniform(horizon, steps),
        GradingSpec::Geometric(r) => TimeGrid::geometric(horizon, steps, r),
    }
    .during("time grid")
}

fn alpha(s: &Settings) -> Result<f64, Failure> {
    Settings::require(s.alpha, "alpha")
}

fn n_modes(s: &Settings) -> Result<usize, Failure> {
    let given = s.c1.as_ref().or(s.c2.as_ref()).map(Vec::len);
    match (s.modes, given) {
        (Some(n), Some(len)) if n != len => Err(Failure::usage(format!(
            "--modes {n} does not match {len} coefficients"
        ))),
        (Some(n), _) | (None, Some(n)) => Ok(n),
        (None, None) => Ok(DEFAULT_MODES),
    }
}

fn domain(s: &Settings) -> Result<DomainSpec, Failure> {
    let n = n_modes(s)?;
    match (s.l, s.l1, s.l2) {
        (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
            Err(Failure::usage("give either --L or --L1/--L2, not both"))
        }
        (_, Some(a), Some(b)) => DomainSpec::rectangle(a, b, n).during("domain"),
        (_, None, None) => DomainSpec::interval(s.l.unwrap_or(PI), n).during("domain"),
        _ => Err(Failure::usage("a rectangle needs both --L1 and --L2")),
    }
}

fn explicit_data(s: &Settings, d: &DomainSpec) -> Result<Option<ModalData>, Failure> {
    if s.c1.is_none() && s.c2.is_none() {
        return Ok(None);
    }
    let n = d.n_modes();
    let c1 = s.c1.clone().unwrap_or_else(|| vec![0.0; n]);
    let c2 = s.c2.clone().unwrap_or_else(|| vec![0.0; n]);
    if c1.len() != c2.len() {
        return Err(Failure::usage(format!(
            "--c1 has {} values but --c2 has {}",
            c1.len(),
            c2.len()
        )));
    }
    if s.seed.is_some() {
        return Err(Failure::usage("give either --c1/--c2 or --seed, not both"));
    }
    ModalData::new(d.clone(), c1, c2)
        .during("modal data")
        .map(Some)
}

fn sampler(s: &Settings, d: &DomainSpec) -> Result<DataSampler, Failure> {
    let seed = s
        .seed
        .ok_or_else(|| Failure::usage("random data needs --seed (or give --c1/--c2)"))?;
    let profile: Profile<f64> = s
        .profile
        .as_deref()
        .unwrap_or("flat")
        .parse()
        .during("--profile")?;
    Ok(DataSampler::new(d.clone(), profile, seed))
}

/// Explicit coefficients, or the first draw of the seeded generator.
fn data(s: &Settings, d: &DomainSpec) -> Result<ModalData, Failure> {
    match explicit_data(s, d)? {
        Some(x) => Ok(x),
        None => Ok(sampler(s, d)?.draw()),
    }
}

/// Explicit coefficients as a single set, or `--draws` seeded sets, each
/// normalised to unit data norm when `mu` is given.
fn data_sets(s: &Settings, d: &DomainSpec, mu: Option<f64>) -> Result<Vec<ModalData>, Failure> {
    if let Some(x) = explicit_data(s, d)? {
        if s.draws.is_some_and(|k| k != 1) {
            return Err(Failure::usage("--draws needs random data"));
        }
        return Ok(vec![x]);
    }
    let k = s.draws.unwrap_or(1);
    if k == 0 {
        return Err(Failure::usage("--draws must be at least 1"));
    }
    let mut gen = sampler(s, d)?;
    Ok((0..k)
        .map(|_| match mu {
            Some(m) => gen.draw_unit(m),
            None => gen.draw(),
        })
        .collect())
}

fn ml_cmd(s: &Settings) -> Result<Output, Failure> {
    let a = alpha(s)?;
    let b = s.beta.unwrap_or(1.0);
    let z = Settings::require(s.z, "z")?;
    let r = ml(&MlParams::new(a, b).during("ml")?, z).during("ml")?;
    Ok(Output::Record(
        Record::new()
            .with("alpha", a)
            .with("beta", b)
            .with("z", z)
            .with("value", r.value)
            .with("est_abs_error", r.est_abs_error)
            .with("branch", r.branch.as_str()),
    ))
}

fn scalar_cmd(s: &Settings) -> Result<Output, Failure> {
    let a = alpha(s)?;
    let lambda = s.lambda.unwrap_or(1.0);
    let first = |v: &Option<Vec<f64>>, default: f64| -> Result<f64, Failure> {
        match v.as_deref() {
            None => Ok(default),
            Some([x]) => Ok(*x),
            Some(_) => Err(Failure::usage(
                "scalar takes one value each for --c1 and --c2",
            )),
        }
    };
    let (u1, u2) = (first(&s.c1, 1.0)?, first(&s.c2, 0.0)?);
    let grid = time_grid(s, GradingSpec::Uniform, 256, 1.5)?;
    let f = scalar_sampled(a, lambda, u1, u2, &grid).during("scalar")?;
    let d = rl_derivative(RlOrder::Alpha, a, &f)
        .during("rl_derivative")?
        .evaluate();
    let mut rows = Vec::new();
    for (&t, &dv) in grid.points().iter().zip(&d).skip(1) {
        let u = scalar_solution(a, lambda, u1, u2, t).during("scalar")?;
        rows.push(vec![
            Value::Num(t),
            Value::Num(u),
            Value::Num(dv),
            Value::Num((dv + lambda * u).abs()),
        ]);
    }
    Ok(Output::Table(Table {
        columns: ["t", "u", "d_alpha_numeric", "residual"]
            .map(String::from)
            .to_vec(),
        rows,
    }))
}

fn solve_cmd(s: &Settings) -> Result<Output, Failure> {
    let d = domain(s)?;
    let grid = time_grid(s, GradingSpec::Uniform, 64, 1.0)?;
    let sol = SeriesSolution::new(alpha(s)?, data(s, &d)?, grid.horizon()).during("solve")?;
    let lambdas = d.lambdas();
    let mut columns = vec!["t".to_string()];
    columns.extend((1..=d.n_modes()).map(|k| format!("mode_{k}")));
    columns.extend(["norm_H10".into(), "norm_H2".into()]);
    let rows = solve_series(&sol, &grid, None)
        .during("solve_series")?
        .into_iter()
        .map(|snap| {
            let h1 = fracwave::spectral_domain::graded_norm(&snap.modal_values, 0.5, &lambdas);
            let h2 = fracwave::spectral_domain::graded_norm(&snap.modal_values, 1.0, &lambdas);
            let mut row = vec![Value::Num(snap.t)];
            row.extend(snap.modal_values.into_iter().map(Value::Num));
            row.extend([Value::Num(h1), Value::Num(h2)]);
            row
        })
        .collect();
    Ok(Output::Table(Table { columns, rows }))
}

fn parse_sweep(text: &str) -> Result<(f64, f64, f64), Failure> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::usage(format!("--xi-sweep: expected lo,hi,step, got '{text}'")))?;
    match parts[..] {
        [lo, hi, step] => Ok((lo, hi, step)),
        _ => Err(Failure::usage(format!(
            "--xi-sweep: expected lo,hi,step, got '{text}'"
        ))),
    }
}

fn intervals_cmd(s: &Settings) -> Result<Output, Failure> {
    let a = alpha(s)?;
    if let Some(text) = &s.xi_sweep {
        let (lo, hi, step) = parse_sweep(text)?;
        let rows = xi_sweep(a, lo, hi, step)
            .during("xi_sweep")?
            .into_iter()
            .map(|x| {
                let (nl, nh) = nabla_interval(a, x.mu);
                let (dl, dh) = dalpha_interval(a, x.mu);
                vec![
                    Value::Num(x.xi),
                    Value::Num(x.mu),
                    Value::Num(nl),
                    Value::Num(nh),
                    Value::Num(dl),
                    Value::Num(dh),
                    Value::Num(x.window.theta_lo),
                    Value::Num(x.window.theta_hi),
                    Value::Bool(x.window.empty),
                ]
            })
            .collect();
        let columns = [
            "xi",
            "mu",
            "nabla_lo",
            "nabla_hi",
            "dalpha_lo",
            "dalpha_hi",
            "theta_lo",
            "theta_hi",
            "empty",
        ];
        return Ok(Output::Table(Table {
            columns: columns.map(String::from).to_vec(),
            rows,
        }));
    }
    let (range, window) = admissible_intervals(a, s.mu).during("intervals")?;
    let mut r = Record::new().with("alpha", a).with("mu_range", range);
    if let Some(w) = window {
        r = r
            .with("mu", w.mu)
            .with("nabla_interval", nabla_interval(a, w.mu))
            .with("dalpha_interval", dalpha_interval(a, w.mu))
            .with("theta_window", (w.theta_lo, w.theta_hi))
            .with("empty", w.empty);
    }
    Ok(Output::Record(r))
}

fn trace_cmd(s: &Settings) -> Result<Output, Failure> {
    let a = alpha(s)?;
    let d = domain(s)?;
    let grid = time_grid(s, GradingSpec::Geometric(DEFAULT_RATIO), 512, 1.0)?;
    let mut rows = Vec::new();
    for (i, data) in data_sets(s, &d, s.mu)?.into_iter().enumerate() {
        let norm = s.mu.map(|m| data_norm(&data, m));
        let sol = SeriesSolution::new(a, data, grid.horizon()).during("trace")?;
        let energy = trace_energy(&sol, &grid).during("trace_energy")?;
        let ratio = norm.map(|n| if n == 0.0 { 0.0 } else { energy / (n * n) });
        rows.push(vec![
            Value::from(i),
            Value::Num(energy),
            Value::from(norm),
            Value::from(ratio),
        ]);
    }
    Ok(Output::Table(Table {
        columns: ["draw", "energy", "data_norm", "ratio"]
            .map(String::from)
            .to_vec(),
        rows,
    }))
}

fn regularity_cmd(s: &Settings) -> Result<Output, Failure> {
    let a = alpha(s)?;
    let theta = Settings::require(s.theta, "theta")?;
    let mu = Settings::require(s.mu, "mu")?;
    let d = domain(s)?;
    let grid = time_grid(s, GradingSpec::Geometric(DEFAULT_RATIO), 512, 1.0)?;
    let norms: &[(RegularityNorm, &str)] = match s.norm.unwrap_or(Norm::Both) {
        Norm::Nabla => &[(RegularityNorm::Nabla, "nabla")],
        Norm::Dalpha => &[(RegularityNorm::DAlpha, "dalpha")],
        Norm::Both => &[
            (RegularityNorm::Nabla, "nabla"),
            (RegularityNorm::DAlpha, "dalpha"),
        ],
    };
    let mut rows = Vec::new();
    for (i, data) in data_sets(s, &d, Some(mu))?.into_iter().enumerate() {
        let sol = SeriesSolution::new(a, data, grid.horizon()).during("regularity")?;
        for &(which, name) in norms {
            let r = regularity_ratio(which, &sol, theta, mu, &grid).during("regularity_ratio")?;
            rows.push(vec![
                Value::from(i),
                Value::from(name),
                Value::Num(r.lhs),
                Value::Num(r.rhs),
                Value::Num(r.ratio),
                Value::Bool(r.zero_data),
            ]);
        }
    }
    Ok(Output::Table(Table {
        columns: ["draw", "norm", "lhs", "rhs", "ratio", "zero_data"]
            .map(String::from)
            .to_vec(),
        rows,
    }))
}

fn rellich_cmd(s: &Settings) -> Result<Output, Failure> {
    let d = domain(s)?;
    let length = s.l.unwrap_or(PI);
    let horizon = s.t.unwrap_or(1.0);
    let samples = s.m.unwrap_or(5);
    if samples == 0 {
        return Err(Failure::usage("--M must be at least 1"));
    }
    let theta = s.theta.unwrap_or(RELLICH_THETA);
    let points = s.points.unwrap_or(513);
    let sol = SeriesSolution::new(alpha(s)?, data(s, &d)?, horizon).during("rellich")?;
    let h = VectorFieldH::affine(length);
    let mut rows = Vec::new();
    for j in 1..=samples {
        let t = horizon * j as f64 / samples as f64;
        let r = rellich_residual(&sol, &h, t, theta, points).during("rellich_residual")?;
        rows.push(vec![
            Value::Num(t),
            Value::Num(r.lhs),
            Value::Num(r.rhs),
            Value::Num(r.residual),
        ]);
    }
    Ok(Output::Table(Table {
        columns: ["t", "lhs", "rhs", "residual"].map(String::from).to_vec(),
        rows,
    }))
}

fn decay_cmd(s: &Settings) -> Result<Output, Failure> {
    let d = domain(s)?;
    let t0 = s.t0.unwrap_or(10.0);
    let samples = s.m.unwrap_or(16);
    let window = (t0, 10.0 * t0);
    let sol = SeriesSolution::new(alpha(s)?, data(s, &d)?, window.1).during("decay")?;
    let slopes = decay_slopes(&sol, window, samples).during("decay_slopes")?;
    let bound = decay_bound_ratio(&sol, window, samples).during("decay_bound_ratio")?;
    Ok(Output::Record(
        Record::new()
            .with("alpha", sol.alpha())
            .with("window", window)
            .with("slope_u1", slopes.u1)
            .with("slope_u2", slopes.u2)
            .with("expected_u1", -1.0)
            .with("expected_u2", -2.0)
            .with("bound_ratio", bound),
    ))
}

fn duality_cmd(s: &Settings) -> Result<Output, Failure> {
    let d = domain(s)?;
    let data = match explicit_data(s, &d)? {
        Some(x) => x,
        // random final data: only w₁ is drawn, w₂ must vanish
        None => {
            let x = sampler(s, &d)?.draw();
            ModalData::new(d.clone(), x.c1().to_vec(), vec![0.0; d.n_modes()])
                .during("modal data")?
        }
    };
    let horizon = s.t.unwrap_or(1.0);
    let steps = s.m.unwrap_or(512);
    let points = s.points.unwrap_or(257);
    let r = duality_check(&data, alpha(s)?, horizon, steps, points).during("duality_check")?;
    Ok(Output::Record(
        Record::new()
            .with("lhs", r.lhs)
            .with("rhs", r.rhs)
            .with("rel_err", r.rel_err)
            .with("lhs_alt", r.lhs_alt),
    ))
}
