//! A fixed, seeded run of the library's invariants.
//!
//! Everything here is a pure function of the seed, so two runs with the same
//! seed print the same bytes.

use std::f64::consts::PI;

use fracwave::fractional_ops::{rl_derivative, RlOrder, DEFAULT_RATIO};
use fracwave::mittag_leffler::{ml_bound_sup, ml_value};
use fracwave::rl_solver::{
    caputo_transform_check, decay_bound_ratio, initial_check, scalar_sampled, scalar_solution,
    weak_form_residual,
};
use fracwave::sampling::Profile;
use fracwave::trace_duality::{
    duality_check, exponent_window, mu_range, regularity_ratio, rellich_residual, trace_energy,
    RegularityNorm, VectorFieldH, RELLICH_THETA,
};
use fracwave::{DataSampler, DomainSpec, MlParams, ModalData, SeriesSolution, TimeGrid};

use crate::commands::Outcome;
use crate::failure::{Context, Failure};
use crate::output::{Output, Table, Value};

pub const DEFAULT_SEED: u64 = 20;

struct Check {
    name: &'static str,
    value: f64,
    threshold: f64,
    /// `value <= threshold` unless set
    at_least: bool,
}

impl Check {
    fn at_most(name: &'static str, value: f64, threshold: f64) -> Self {
        Check {
            name,
            value,
            threshold,
            at_least: false,
        }
    }

    fn at_least(name: &'static str, value: f64, threshold: f64) -> Self {
        Check {
            name,
            value,
            threshold,
            at_least: true,
        }
    }

    fn passed(&self) -> bool {
        if self.at_least {
            self.value >= self.threshold
        } else {
            self.value <= self.threshold
        }
    }
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| a + (b - a) * i as f64 / (n - 1) as f64)
}

fn max_err(
    points: impl Iterator<Item = f64>,
    f: impl Fn(f64) -> fracwave::Result<(f64, f64)>,
) -> fracwave::Result<f64> {
    let mut worst = 0.0_f64;
    for x in points {
        let (got, want) = f(x)?;
        worst = worst.max((got - want).abs() / want.abs().max(1.0));
    }
    Ok(worst)
}

fn sampler(n: usize, seed: u64) -> fracwave::Result<DataSampler> {
    Ok(DataSampler::new(
        DomainSpec::interval(PI, n)?,
        Profile::PowerLaw(2.0),
        seed,
    ))
}

fn mittag_leffler_checks(out: &mut Vec<Check>) -> fracwave::Result<()> {
    let e = max_err(linspace(-10.0, 10.0, 41), |x| {
        Ok((ml_value(1.0, 1.0, x)?, x.exp()))
    })?;
    out.push(Check::at_most("ml_exp", e, 1e-10));
    let e = max_err(linspace(0.0, 10.0, 41), |x| {
        Ok((ml_value(2.0, 1.0, -x * x)?, x.cos()))
    })?;
    out.push(Check::at_most("ml_cos", e, 1e-10));
    let e = max_err(linspace(0.25, 10.0, 40), |x| {
        Ok((ml_value(2.0, 2.0, -x * x)?, x.sin() / x))
    })?;
    out.push(Check::at_most("ml_sinc", e, 1e-10));
    let p = MlParams::new(1.8, 1.8)?;
    let (coarse, fine) = (ml_bound_sup(&p, 1e3, 2001)?, ml_bound_sup(&p, 1e3, 20001)?);
    out.push(Check::at_most(
        "ml_bound_refinement",
        (fine - coarse).abs() / fine,
        0.05,
    ));
    Ok(())
}

fn solver_checks(out: &mut Vec<Check>, seed: u64) -> fracwave::Result<()> {
    let grid = TimeGrid::uniform(1.5, 256)?;
    let u = scalar_sampled(1.7, 4.0, 1.0, 0.5, &grid)?;
    let d = rl_derivative(RlOrder::Alpha, 1.7, &u)?.evaluate();
    let mut worst = 0.0_f64;
    for (&t, dv) in grid.points().iter().zip(&d) {
        if t >= 0.1 {
            worst = worst.max((dv + 4.0 * scalar_solution(1.7, 4.0, 1.0, 0.5, t)?).abs());
        }
    }
    out.push(Check::at_most("scalar_residual", worst, 1e-3));

    let data = sampler(8, seed)?.draw_unit(0.0);
    let sol = SeriesSolution::new(1.8, data, 1.2)?;
    let r = initial_check(&sol, &[1e-1, 1e-2, 1e-3, 1e-4], 0.3)?;
    out.push(Check::at_least(
        "initial_monotone",
        if r.is_monotone() { 1.0 } else { 0.0 },
        1.0,
    ));
    out.push(Check::at_most(
        "initial_err_at_1e-3",
        r.err1[2].max(r.err2[2]),
        1e-2,
    ));

    let one = ModalData::new(DomainSpec::interval(PI, 1)?, vec![1.0], vec![0.5])?;
    let times: Vec<f64> = (0..=128).map(|i| 0.2 + i as f64 / 128.0).collect();
    out.push(Check::at_most(
        "caputo_transform",
        caputo_transform_check(&SeriesSolution::new(1.7, one, 1.2)?, &times)?,
        1e-3,
    ));

    let ts: Vec<f64> = (1..=10).map(|i| 0.1 * i as f64).collect();
    let mut worst = 0.0_f64;
    for m in 1..=8 {
        let lambda = sol.domain().eigenpairs()[m - 1].lambda;
        worst = worst.max(weak_form_residual(&sol, m, &ts)? / lambda.max(1.0));
    }
    out.push(Check::at_most("weak_form", worst, 1e-9));
    Ok(())
}

fn estimate_checks(out: &mut Vec<Check>, seed: u64) -> fracwave::Result<()> {
    let (alpha, mu, theta): (f64, f64, f64) = (1.8, 0.15, 0.25);
    let (lo, _) = mu_range(alpha)?;
    out.push(Check::at_most(
        "mu_range_lower",
        (lo - 3.0 * (2.0 - alpha) / (4.0 * alpha)).abs(),
        1e-15,
    ));
    let inside = exponent_window(alpha, mu)?;
    let at_zero = exponent_window(alpha, 0.0)?;
    out.push(Check::at_least(
        "window_flags",
        if !inside.empty && at_zero.empty {
            1.0
        } else {
            0.0
        },
        1.0,
    ));

    let grid = TimeGrid::geometric(1.0, 256, DEFAULT_RATIO)?;
    let mut gen = sampler(8, seed)?;
    let mut worst = 0.0_f64;
    for _ in 0..5 {
        let sol = SeriesSolution::new(alpha, gen.draw_unit(mu), 1.0)?;
        for which in [RegularityNorm::Nabla, RegularityNorm::DAlpha] {
            worst = worst.max(regularity_ratio(which, &sol, theta, mu, &grid)?.ratio);
        }
    }
    out.push(Check::at_most("regularity_ratio_max", worst, 1e3));

    let sol = SeriesSolution::new(alpha, gen.draw_unit(mu), 1.0)?;
    let fine = trace_energy(&sol, &TimeGrid::geometric(1.0, 512, DEFAULT_RATIO)?)?;
    let coarse = trace_energy(&sol, &grid)?;
    out.push(Check::at_most(
        "trace_energy_refinement",
        (fine - coarse).abs() / fine,
        0.02,
    ));

    let h = VectorFieldH::affine(PI);
    let mut worst = 0.0_f64;
    for t in [0.2, 0.4, 0.6, 0.8, 1.0] {
        worst = worst.max(rellich_residual(&sol, &h, t, RELLICH_THETA, 513)?.residual);
    }
    out.push(Check::at_most("rellich_residual", worst, 1e-6));

    out.push(Check::at_most(
        "decay_bound_ratio",
        decay_bound_ratio(&sol, (10.0, 100.0), 16)?,
        1.0,
    ));

    let one = ModalData::new(DomainSpec::interval(PI, 1)?, vec![1.0], vec![0.0])?;
    let r = duality_check(&one, alpha, 1.0, 256, 129)?;
    out.push(Check::at_most("duality_rel_err", r.rel_err, 2e-2));
    Ok(())
}

pub fn run(seed: u64) -> Result<Outcome, Failure> {
    let mut checks = Vec::new();
    mittag_leffler_checks(&mut checks).during("selftest: mittag-leffler")?;
    solver_checks(&mut checks, seed).during("selftest: solver")?;
    estimate_checks(&mut checks, seed).during("selftest: estimates")?;
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| c.name)
        .collect();
    let rows = checks
        .iter()
        .map(|c| {
            vec![
                Value::from(c.name),
                Value::Num(c.value),
                Value::from(if c.at_least { ">=" } else { "<=" }),
                Value::Num(c.threshold),
                Value::from(if c.passed() { "PASS" } else { "FAIL" }),
            ]
        })
        .collect();
    let output = Output::Table(Table {
        columns: ["check", "value", "relation", "threshold", "status"]
            .map(String::from)
            .to_vec(),
        rows,
    });
    let failure = (!failed.is_empty()).then(|| Failure::Numerical {
        op: "selftest".into(),
        message: format!("{} check(s) failed: {}", failed.len(), failed.join(", ")),
    });
    Ok(Outcome { output, failure })
}
