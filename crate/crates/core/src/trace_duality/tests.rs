use super::trace::{apply, trace_matrix};
use super::*;
use crate::fractional_ops::{frac_integral, PowerTerm, SampledFunction, Side, DEFAULT_RATIO};
use crate::mittag_leffler::{ml_value, rgamma};
use crate::rl_solver::{i_two_minus_alpha, scalar_solution, SeriesSolution};
use crate::sampling::{DataSampler, Profile};
use crate::spectral_domain::{DomainSpec, ModalData};
use std::f64::consts::PI;

fn one_mode(alpha: f64, c1: f64, c2: f64) -> SeriesSolution<f64> {
    let d = DomainSpec::interval(PI, 1).unwrap();
    SeriesSolution::new(alpha, ModalData::new(d, vec![c1], vec![c2]).unwrap(), 1.0).unwrap()
}

fn graded(steps: usize) -> TimeGrid<f64> {
    TimeGrid::geometric(1.0, steps, DEFAULT_RATIO).unwrap()
}

#[test]
fn interval_arithmetic_examples() {
    let (range, w) = admissible_intervals(1.8_f64, Some(0.15)).unwrap();
    assert!((range.0 - 1.0 / 12.0).abs() < 1e-15 && range.1 == 0.25);
    let w = w.unwrap();
    assert!(!w.empty);
    assert!((w.theta_lo - 0.55 / 3.0).abs() < 1e-15);
    assert!((w.theta_hi - 0.95 / 3.0).abs() < 1e-15);
    assert!(w.contains(0.25) && !w.contains(0.32));

    let (lo, hi) = mu_range(1.5 + 1e-9).unwrap();
    assert!(hi - lo < 1e-8);
    assert!(mu_range(1.5).is_err());
    assert!(mu_range(2.0).is_err());

    for alpha in [1.51, 1.7, 1.9, 1.999] {
        let w = exponent_window(alpha, 0.0).unwrap();
        assert!(w.empty);
        assert!(nabla_interval(alpha, 0.0).1 <= dalpha_interval(alpha, 0.0).0);
    }
    assert!(exponent_window(1.8, -0.1).is_err());
}

#[test]
fn xi_sweep_runs_between_the_ends_of_the_mu_range() {
    let s = xi_sweep(1.8_f64, 0.0, 1.0, 0.01).unwrap();
    assert_eq!(s.len(), 101);
    assert_eq!(s[0].mu, 0.25);
    assert!((s[100].mu - 1.0 / 12.0).abs() < 1e-15);
    assert!(s[0].window.empty && s[100].window.empty);
    assert!(s[1..100].iter().all(|p| !p.window.empty));
    assert!(xi_sweep(1.8, 1.0, 0.0, 0.1).is_err());
    assert!(xi_sweep(1.8, 0.0, 1.0, 0.0).is_err());
}

#[test]
fn trace_of_the_first_modes() {
    let d = DomainSpec::interval(PI, 2).unwrap();
    let nodes = boundary_nodes(&d);
    let m = trace_matrix(&d, &nodes);
    let s = (2.0 / PI).sqrt();
    let e1 = apply(&m, &[1.0, 0.0]);
    assert!((e1[0] + s).abs() < 1e-15 && (e1[1] + s).abs() < 1e-15);
    let e2 = apply(&m, &[0.0, 1.0]);
    assert!((e2[0] + 2.0 * s).abs() < 1e-14 && (e2[1] - 2.0 * s).abs() < 1e-14);

    let sol = one_mode(1.8, 1.0, 0.3);
    let u = sol.modal_values(0.4).unwrap()[0];
    let g = normal_trace(&sol, 0.4).unwrap();
    assert!((g[0] + s * u).abs() < 1e-15 && (g[1] + s * u).abs() < 1e-15);

    let zero = sol.with_data(ModalData::zeros(sol.domain().clone()));
    assert_eq!(normal_trace(&zero, 0.4).unwrap(), vec![0.0, 0.0]);
    assert_eq!(trace_energy(&zero, &graded(64)).unwrap(), 0.0);
    assert!(normal_trace(&sol, 0.0).is_err());
}

#[test]
fn rectangle_boundary_quadrature() {
    // ∫_{∂Ω} |∂_ν e_{ij}|² = 2(iπ/lx)²·2/lx + 2(jπ/ly)²·2/ly
    let (lx, ly) = (1.0_f64, 1.6);
    let d = DomainSpec::rectangle(lx, ly, 6).unwrap();
    let nodes = boundary_nodes(&d);
    let m = trace_matrix(&d, &nodes);
    for (k, p) in d.eigenpairs().iter().enumerate() {
        let crate::spectral_domain::ModeIndex::Tensor(i, j) = p.index else {
            unreachable!()
        };
        let mut c = vec![0.0; 6];
        c[k] = 1.0;
        let row = apply(&m, &c);
        let got: f64 = nodes.iter().zip(&row).map(|(n, g)| n.weight * g * g).sum();
        let (ki, kj) = (i as f64 * PI / lx, j as f64 * PI / ly);
        let want = 4.0 * ki * ki / lx + 4.0 * kj * kj / ly;
        assert!(
            (got - want).abs() < 1e-9 * want,
            "({i},{j}): {got} vs {want}"
        );
    }
}

#[test]
fn trace_energy_converges_and_is_quadratic() {
    let sol = one_mode(1.8, 1.0, 0.5);
    let a = trace_energy(&sol, &graded(256)).unwrap();
    let b = trace_energy(&sol, &graded(512)).unwrap();
    assert!((a - b).abs() < 0.02 * b, "{a} vs {b}");
    let double = sol.with_data(sol.data().scaled(2.0));
    let c = trace_energy(&double, &graded(256)).unwrap();
    assert!((c - 4.0 * a).abs() < 1e-13 * c);

    // u₂ = 0: the density is a smooth function of t^{α−1}; compare with a
    // brute-force Simpson integral in the variable r = t^{1/4}
    let smooth = one_mode(1.8, 1.0, 0.0);
    let e = trace_energy(&smooth, &graded(512)).unwrap();
    let n = 4000;
    let mut acc = 0.0;
    for i in 0..=n {
        let r = i as f64 / n as f64;
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let t = r.powi(4);
        if t > 0.0 {
            let u = scalar_solution(1.8, 1.0, 1.0, 0.0, t).unwrap();
            acc += w * 2.0 * (2.0 / PI) * u * u * 4.0 * r.powi(3);
        }
    }
    let want = acc / (3.0 * n as f64);
    assert!((e - want).abs() < 1e-4 * want, "{e} vs {want}");
}

#[test]
fn coarse_trace_grid_is_flagged() {
    let d = DomainSpec::interval(PI, 16).unwrap();
    let data = ModalData::new(d, vec![1.0; 16], vec![1.0; 16]).unwrap();
    let sol = SeriesSolution::new(1.8, data, 1.0).unwrap();
    let coarse = TimeGrid::uniform(1.0, 16).unwrap();
    assert!(matches!(
        trace_energy(&sol, &coarse),
        Err(Error::UnderResolved(_))
    ));
    assert!(trace_energy(&sol, &graded(512)).is_ok());
}

#[test]
fn regularity_ratio_windows() {
    let d = DomainSpec::interval(PI, 8).unwrap();
    let data = DataSampler::new(d, Profile::PowerLaw(1.0), 3).draw_unit(0.15);
    let sol = SeriesSolution::new(1.8, data, 1.0).unwrap();
    for which in [RegularityNorm::Nabla, RegularityNorm::DAlpha] {
        let r = regularity_ratio(which, &sol, 0.25, 0.15, &graded(256)).unwrap();
        assert!(r.ratio.is_finite() && r.ratio > 0.0 && !r.zero_data);
        assert!((r.rhs - 1.0).abs() < 1e-12);
    }
    assert!(matches!(
        regularity_ratio(RegularityNorm::Nabla, &sol, 0.4, 0.15, &graded(64)),
        Err(Error::InadmissibleExponent { .. })
    ));
    assert!(matches!(
        regularity_ratio(RegularityNorm::DAlpha, &sol, 0.1, 0.15, &graded(64)),
        Err(Error::InadmissibleExponent { .. })
    ));
    let zero = sol.with_data(ModalData::zeros(sol.domain().clone()));
    let r = regularity_ratio(RegularityNorm::Nabla, &zero, 0.25, 0.15, &graded(64)).unwrap();
    assert!(r.zero_data && r.ratio == 0.0);
    let low = one_mode(1.4, 1.0, 0.0);
    assert!(regularity_ratio(RegularityNorm::Nabla, &low, 0.25, 0.15, &graded(64)).is_err());
}

#[test]
fn nabla_norm_matches_a_direct_quadrature() {
    // one mode, λ = 1: ‖∇u‖² = ∫ u(t)² dt, integrated in r = t^{1/4}
    let sol = one_mode(1.8, 0.7, 0.4);
    let r = regularity_ratio(RegularityNorm::Nabla, &sol, 0.25, 0.15, &graded(512)).unwrap();
    let n = 4000;
    let mut acc = 0.0;
    for i in 1..=n {
        let s = i as f64 / n as f64;
        let w = if i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let t = s.powi(4);
        let u = scalar_solution(1.8, 1.0, 0.7, 0.4, t).unwrap();
        acc += w * u * u * 4.0 * s.powi(3);
    }
    // the integrand behaves like s^{8α−13} = s^{1.4} at 0, so Simpson loses a little
    let want = (acc / (3.0 * n as f64)).sqrt();
    assert!((r.lhs - want).abs() < 1e-3 * want, "{} vs {want}", r.lhs);
}

#[test]
fn envelope_exponents_cross_minus_one_at_the_window_ends() {
    let (alpha, mu) = (1.8_f64, 0.15);
    let (_, hi) = nabla_interval(alpha, mu);
    let (e1, e2) = envelope_exponents(RegularityNorm::Nabla, alpha, hi, mu);
    assert!((e2 + 1.0).abs() < 1e-14 && e1 > -1.0);
    let (lo, _) = dalpha_interval(alpha, mu);
    let (e1, e2) = envelope_exponents(RegularityNorm::DAlpha, alpha, lo, mu);
    assert!((e2 + 1.0).abs() < 1e-14 && e1 > -1.0);
}

#[test]
fn divergence_indicator_separates_the_window() {
    let (alpha, mu) = (1.8_f64, 0.15);
    let ind = |theta: f64, t: f64| {
        divergence_indicator(RegularityNorm::Nabla, alpha, theta, mu, t, 1.0).unwrap()
    };
    let inside = ind(0.25, 1e-8) / ind(0.25, 1e-4);
    assert!(inside < 1.2, "{inside}");
    let outside = nabla_interval(alpha, mu).1 + 0.05;
    let growth = ind(outside, 1e-8) / ind(outside, 1e-4);
    assert!(growth > 3.0, "{growth}");
}

#[test]
fn rellich_identity_single_mode() {
    let h = VectorFieldH::affine(PI);
    let sol = one_mode(1.8, 1.0, 0.0);
    let r = rellich_residual(&sol, &h, 0.5, RELLICH_THETA, 513).unwrap();
    assert!(r.residual <= 1e-6, "{r:?}");
    assert!(r.lhs > 0.0);

    let zero = sol.with_data(ModalData::zeros(sol.domain().clone()));
    let r = rellich_residual(&zero, &h, 0.5, 0.3, 513).unwrap();
    assert_eq!((r.lhs, r.rhs), (0.0, 0.0));

    let flat = VectorFieldH::new(|_| 0.0, |_| 0.0);
    assert!(rellich_residual(&sol, &flat, 0.5, 0.3, 513).is_err());
    let wrong = VectorFieldH::new(|x: f64| (2.0 * x - PI) / PI, |_| 1.0);
    assert!(rellich_residual(&sol, &wrong, 0.5, 0.3, 513).is_err());
    assert!(rellich_residual(&sol, &h, 0.5, 1.0, 513).is_err());
    let rect = DomainSpec::rectangle(1.0, 1.0, 2).unwrap();
    let rs = SeriesSolution::new(1.8, ModalData::zeros(rect), 1.0).unwrap();
    assert!(rellich_residual(&rs, &h, 0.5, 0.3, 513).is_err());
}

#[test]
fn adjoint_is_the_reversed_forward_solution() {
    let grid = TimeGrid::uniform(1.0, 32).unwrap();
    let d = DomainSpec::interval(PI, 1).unwrap();
    let data = ModalData::new(d.clone(), vec![1.0], vec![0.0]).unwrap();
    let w = adjoint_solve(&data, 1.8, &grid).unwrap();
    assert_eq!(w.rows.len(), 33);
    for (t, row) in w.times.iter().zip(&w.rows) {
        let want = scalar_solution(1.8, 1.0, 1.0, 0.0, 1.0 - t).unwrap();
        assert!((row[0] - want).abs() < 1e-13, "t = {t}");
    }
    assert_eq!(w.reversed().reversed(), w);

    let zero = adjoint_solve(&ModalData::zeros(d.clone()), 1.8, &grid).unwrap();
    assert!(zero.rows.iter().all(|r| r[0] == 0.0));

    // u₂ ≠ 0: w is singular at t = T, which is dropped
    let sing = ModalData::new(d, vec![0.0], vec![1.0]).unwrap();
    let w = adjoint_solve(&sing, 1.8, &grid).unwrap();
    assert_eq!(w.rows.len(), 32);
    assert!(*w.times.last().unwrap() < 1.0);
}

#[test]
fn right_sided_integral_of_the_adjoint() {
    // I^{2−α}_{T−} w(t) = (I^{2−α}_{0+} v)(T − t)
    let (alpha, lambda) = (1.8_f64, 1.0);
    let err = |m: usize| {
        let grid = TimeGrid::uniform(1.0, m).unwrap();
        let rem: Vec<f64> = grid
            .points()
            .iter()
            .map(|&t| {
                let s: f64 = 1.0 - t;
                if s <= 0.0 {
                    return 0.0;
                }
                -lambda
                    * s.powf(2.0 * alpha - 1.0)
                    * ml_value(alpha, 2.0 * alpha, -s.powf(alpha)).unwrap()
            })
            .collect();
        let w = SampledFunction::new(grid.clone(), rem)
            .unwrap()
            .with_term(PowerTerm::horizon(rgamma(alpha), alpha - 1.0));
        let iw = frac_integral(Side::Right, 2.0 - alpha, &w)
            .unwrap()
            .evaluate();
        let v = one_mode(alpha, 1.0, 0.0);
        grid.points()
            .iter()
            .zip(&iw)
            .map(|(&t, &got)| (got - i_two_minus_alpha(&v, 1.0 - t).unwrap()[0]).abs())
            .fold(0.0, f64::max)
    };
    let (a, b) = (err(64), err(128));
    assert!(a < 1e-3, "{a}");
    assert!(a / b > 3.0, "{a:e} → {b:e}");
}

fn manufactured_error(alpha: f64, m: usize, p: usize) -> f64 {
    // u = t² x(L−x):  ᶜD^α u − u_xx = 2t^{2−α}/Γ(3−α)·x(L−x) + 2t²
    let l = 1.0;
    let times = TimeGrid::uniform(1.0, m).unwrap();
    let zeros = vec![0.0; m + 1];
    let g3 = rgamma(3.0 - alpha);
    let f = move |t: f64, x: f64| 2.0 * t.powf(2.0 - alpha) * g3 * x * (l - x) + 2.0 * t * t;
    let out = solve_fd(&FdProblem {
        alpha,
        length: l,
        points: p,
        times: &times,
        left: &zeros,
        right: &zeros,
        source: Some(&f),
    })
    .unwrap();
    out.x
        .iter()
        .zip(&out.u)
        .zip(&out.u_t)
        .map(|((&x, &u), &ut)| {
            let e = x * (l - x);
            (u - e).abs().max((ut - 2.0 * e).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn fd_solver_manufactured_solution() {
    // ᶜD^α u ~ t^{2−α} is not smooth at 0, which caps the time order at 3−α
    let a = manufactured_error(1.2, 256, 129);
    let b = manufactured_error(1.2, 512, 257);
    assert!(a < 1e-6, "{a}");
    assert!(a / b >= 3.0, "{a:e} → {b:e}");
    for alpha in [1.5, 1.8] {
        let a = manufactured_error(alpha, 256, 129);
        let b = manufactured_error(alpha, 512, 257);
        assert!(a < 1e-3, "{a}");
        assert!(
            (a / b).log2() >= 3.0 - alpha - 0.15,
            "α = {alpha}: {a:e} → {b:e}"
        );
    }
}

#[test]
fn fd_solver_edge_cases() {
    let times = TimeGrid::uniform(1.0, 256).unwrap();
    let zeros = vec![0.0; 257];
    let p = FdProblem {
        alpha: 1.8,
        length: 1.0,
        points: 129,
        times: &times,
        left: &zeros,
        right: &zeros,
        source: None,
    };
    let out = solve_fd(&p).unwrap();
    assert!(out.u.iter().chain(&out.u_t).all(|&v| v == 0.0));

    let coarse = TimeGrid::uniform(1.0, 64).unwrap();
    let short = vec![0.0; 65];
    let p = FdProblem {
        times: &coarse,
        left: &short,
        right: &short,
        ..p
    };
    assert!(matches!(solve_fd(&p), Err(Error::GridTooCoarse(_))));
    let geo = graded(256);
    assert!(solve_fd(&FdProblem {
        times: &geo,
        left: &zeros,
        right: &zeros,
        ..p
    })
    .is_err());
}

#[test]
fn duality_single_mode() {
    let d = DomainSpec::interval(PI, 1).unwrap();
    let data = ModalData::new(d.clone(), vec![1.0], vec![0.0]).unwrap();
    let a = duality_check(&data, 1.8, 1.0, 256, 129).unwrap();
    let b = duality_check(&data, 1.8, 1.0, 512, 257).unwrap();
    assert!(b.rel_err <= 2e-2, "{b:?}");
    assert!(b.rel_err < a.rel_err, "{a:?} {b:?}");
    assert!((a.lhs_alt + a.rhs).abs() < 2e-2 * a.rhs);

    let s = duality_check(&data.scaled(3.0), 1.8, 1.0, 256, 129).unwrap();
    assert!((s.lhs - 9.0 * a.lhs).abs() < 1e-12 * s.lhs.abs());
    assert!((s.rhs - 9.0 * a.rhs).abs() < 1e-12 * s.rhs);

    let z = duality_check(&ModalData::zeros(d.clone()), 1.8, 1.0, 256, 129).unwrap();
    assert_eq!((z.lhs, z.rhs, z.rel_err), (0.0, 0.0, 0.0));

    let w2 = ModalData::new(d, vec![1.0], vec![0.5]).unwrap();
    assert!(duality_check(&w2, 1.8, 1.0, 256, 129).is_err());
}
