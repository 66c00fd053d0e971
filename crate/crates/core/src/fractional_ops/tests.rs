use super::quadrature::cell_weights;
use super::*;
use crate::mittag_leffler::{gamma, ml_value};

fn uniform(m: usize) -> TimeGrid<f64> {
    TimeGrid::uniform(1.0, m).unwrap()
}

fn max_err_from(f: &SampledFunction<f64>, from: f64, exact: impl Fn(f64) -> f64) -> f64 {
    let full = f.evaluate();
    f.grid()
        .points()
        .iter()
        .zip(&full)
        .filter(|(&t, _)| t >= from)
        .map(|(&t, &v)| (v - exact(t)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn grid_validation() {
    assert!(matches!(
        TimeGrid::uniform(1.0, 7),
        Err(crate::Error::GridTooCoarse(_))
    ));
    assert!(TimeGrid::uniform(0.0, 16).is_err());
    assert!(TimeGrid::geometric(1.0, 32, 1.0).is_err());
    assert!(TimeGrid::from_points(vec![0.0, 0.1, 0.1, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8]).is_err());
    assert!(TimeGrid::from_points(vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]).is_err());
}

#[test]
fn geometric_grid_clusters_near_origin() {
    let g = TimeGrid::geometric(2.0, 64, DEFAULT_RATIO).unwrap();
    let p = g.points();
    assert_eq!(p.len(), 65);
    assert_eq!(p[0], 0.0);
    assert_eq!(g.horizon(), 2.0);
    assert!(p.windows(2).all(|w| w[1] > w[0]));
    let inside = p.iter().filter(|&&t| t > 0.0 && t < 0.2).count();
    assert!(inside >= 15, "{inside} points in [0, T/10]");
    assert!((p[1] - 0.2 * 0.85_f64.powi(15)).abs() < 1e-15);
}

#[test]
fn coarsen_takes_every_other_point() {
    let g = uniform(32);
    let c = g.coarsen().unwrap();
    assert_eq!(c.steps(), 16);
    assert_eq!(c.points()[3], g.points()[6]);
    assert!(uniform(9).coarsen().is_none());
    assert!(uniform(14).coarsen().is_none());
}

#[test]
fn sampled_function_checks_length() {
    assert!(SampledFunction::new(uniform(8), vec![0.0; 8]).is_err());
    assert!(SampledFunction::new(uniform(8), vec![f64::NAN; 9]).is_err());
}

#[test]
fn integral_of_one_is_t() {
    let f = SampledFunction::from_fn(uniform(16), |_| 1.0).unwrap();
    let i = frac_integral(Side::Left, 1.0, &f).unwrap();
    for (v, t) in i.evaluate().iter().zip(i.grid().points()) {
        assert!((v - t).abs() < 1e-15);
    }
    let r = frac_integral(Side::Right, 1.0, &f).unwrap();
    for (v, t) in r.evaluate().iter().zip(r.grid().points()) {
        assert!((v - (1.0 - t)).abs() < 1e-15);
    }
}

#[test]
fn half_integral_of_one() {
    let f = SampledFunction::from_fn(uniform(32), |_| 1.0).unwrap();
    let i = frac_integral(Side::Left, 0.5, &f).unwrap();
    let g15 = gamma(1.5).unwrap();
    assert!(max_err_from(&i, 0.0, |t| t.sqrt() / g15) < 1e-14);
}

#[test]
fn rejects_nonpositive_order() {
    let f = SampledFunction::from_fn(uniform(16), |_| 1.0).unwrap();
    assert!(frac_integral(Side::Left, 0.0, &f).is_err());
    assert!(frac_integral(Side::Right, -0.5, &f).is_err());
}

#[test]
fn cell_weights_sum_to_the_kernel_integral() {
    for beta in [0.3_f64, 0.5, 1.0, 1.7, 2.4] {
        for a in [0.0_f64, 1e-4, 0.05, 0.5, 3.0] {
            let h = 0.01;
            let (near, far) = cell_weights(a, h, beta);
            let exact = ((a + h).powf(beta) - a.powf(beta)) / beta;
            assert!(
                ((near + far) - exact).abs() <= 1e-12 * exact,
                "a={a} β={beta}"
            );
        }
    }
    // series branch against the closed form in a well-conditioned regime
    let (n1, f1) = cell_weights(1.0_f64, 0.099, 0.6);
    let (n2, f2) = cell_weights(1.0_f64, 0.101, 0.6);
    assert!((n1 / 0.099 - n2 / 0.101).abs() < 1e-3);
    assert!((f1 / 0.099 - f2 / 0.101).abs() < 1e-3);
}

#[test]
fn left_weights_reproduce_the_trapezoid() {
    let g = TimeGrid::geometric(1.0, 32, 0.8).unwrap();
    let vals: Vec<f64> = g.points().iter().map(|&t: &f64| (3.0 * t).sin()).collect();
    let full = product_trapezoid(Side::Left, 0.4, g.points(), &vals);
    for j in [1, 7, 20, 32] {
        let w = left_weights(0.4, g.points(), j);
        let v: f64 = w.iter().zip(&vals).map(|(a, b)| a * b).sum();
        assert!((v - full[j]).abs() < 1e-14);
    }
}

#[test]
fn power_terms_are_integrated_exactly() {
    let f = SampledFunction::zeros(uniform(16)).with_term(PowerTerm::origin(2.0, -0.4));
    let i = frac_integral(Side::Left, 0.7, &f).unwrap();
    let c = 2.0 * gamma(0.6).unwrap() / gamma(1.3).unwrap();
    assert!(i.values().iter().all(|&v| v == 0.0));
    assert!(max_err_from(&i, 0.0, |t| c * t.powf(0.3)) < 1e-14);

    let r = SampledFunction::zeros(uniform(16)).with_term(PowerTerm::horizon(1.0, -0.5));
    let ir = frac_integral(Side::Right, 0.5, &r).unwrap();
    let c = gamma(0.5).unwrap();
    assert!(max_err_from(&ir, 0.0, |_| c) < 1e-13);
}

#[test]
fn singular_term_at_the_far_end_is_rejected() {
    let f = SampledFunction::zeros(uniform(16)).with_term(PowerTerm::horizon(1.0, -0.5));
    assert!(frac_integral(Side::Left, 0.5, &f).is_err());
}

#[test]
fn integrate_product_handles_terms() {
    let grid = uniform(64);
    let f = SampledFunction::zeros(grid.clone()).with_term(PowerTerm::origin(1.0, -0.5));
    let g: Vec<f64> = grid.points().iter().map(|t| 1.0 + t).collect();
    // ∫₀¹ t^{-1/2}(1+t) dt = 2 + 2/3
    let v = integrate_product(&f, &g).unwrap();
    assert!((v - 8.0 / 3.0).abs() < 1e-14);
    assert!(integrate_product(&f, &g[1..]).is_err());
}

#[test]
fn fd_weights_match_textbook_stencils() {
    let w = fd_weights(0.0, &[-1.0, 0.0, 1.0], 2);
    assert_eq!(w, vec![1.0, -2.0, 1.0]);
    let w = fd_weights(0.0, &[0.0, 1.0, 2.0], 1);
    assert_eq!(w, vec![-1.5, 2.0, -0.5]);
    let w = fd_weights(0.0, &[0.0, 1.0, 2.0, 3.0], 2);
    assert_eq!(w, vec![2.0, -5.0, 4.0, -1.0]);
}

#[test]
fn differentiate_is_exact_on_quadratics() {
    let g = TimeGrid::geometric(1.0, 32, 0.8).unwrap();
    let v: Vec<f64> = g
        .points()
        .iter()
        .map(|t| 1.0 - 2.0 * t + 3.0 * t * t)
        .collect();
    let d1 = differentiate(g.points(), &v, 1);
    let d2 = differentiate(g.points(), &v, 2);
    for (j, &t) in g.points().iter().enumerate() {
        assert!((d1[j] - (6.0 * t - 2.0)).abs() < 1e-8, "{j}");
        assert!((d2[j] - 6.0).abs() < 1e-5, "{j}");
    }
}

#[test]
fn rl_derivative_examples() {
    let g15 = gamma(1.5).unwrap();
    let one = SampledFunction::from_fn(uniform(32), |_| 1.0).unwrap();
    let d = rl_derivative(RlOrder::AlphaMinus2, 1.5, &one).unwrap();
    assert!(max_err_from(&d, 0.0, |t| t.sqrt() / g15) < 1e-14);

    let ga = gamma(1.5).unwrap();
    let f = SampledFunction::zeros(uniform(32)).with_term(PowerTerm::origin(1.0 / ga, 0.5));
    let d = rl_derivative(RlOrder::Alpha, 1.5, &f).unwrap();
    assert!(max_err_from(&d, 1e-9, |_| 0.0) < 1e-12);
}

#[test]
fn rl_derivative_of_a_scalar_mode() {
    // f = t^{α−1}E_{α,α}(−t^α); D^{α−1} f = E_α(−t^α)
    let alpha = 1.8;
    let mut errs = Vec::new();
    for m in [64, 128, 256] {
        let grid = uniform(m);
        let f = ml_kernel(alpha, alpha, -1.0, &grid).unwrap();
        let d = rl_derivative(RlOrder::AlphaMinus1, alpha, &f).unwrap();
        errs.push(max_err_from(&d, 0.1, |t| {
            ml_value(alpha, 1.0, -t.powf(alpha)).unwrap()
        }));
    }
    assert!(errs[2] < 1e-4, "{errs:?}");
    assert!(errs[1] / errs[2] > 3.0, "{errs:?}");
}

#[test]
fn derivatives_reject_bad_input() {
    let f = SampledFunction::from_fn(uniform(8), |_| 1.0).unwrap();
    assert!(matches!(
        rl_derivative(RlOrder::Alpha, 1.5, &f),
        Err(crate::Error::GridTooCoarse(_))
    ));
    let f = SampledFunction::from_fn(uniform(16), |_| 1.0).unwrap();
    assert!(rl_derivative(RlOrder::Alpha, 2.0, &f).is_err());
    assert!(caputo_derivative(1.0, &f).is_err());
    let sing = f.clone().with_term(PowerTerm::origin(1.0, -0.5));
    assert!(caputo_derivative(1.5, &sing).is_err());
}

#[test]
fn caputo_examples() {
    let grid = uniform(64);
    let affine = SampledFunction::from_fn(grid.clone(), |t| 2.0 - 3.0 * t).unwrap();
    let d = caputo_derivative(1.5, &affine).unwrap();
    assert!(max_err_from(&d, 0.0, |_| 0.0) < 1e-10);

    let sq = SampledFunction::from_fn(grid.clone(), |t| t * t).unwrap();
    let d = caputo_derivative(1.5, &sq).unwrap();
    let g15 = gamma(1.5).unwrap();
    assert!(max_err_from(&d, 0.0, |t| 2.0 * t.sqrt() / g15) < 1e-9);

    let mut errs = Vec::new();
    for m in [64, 128] {
        let cube = SampledFunction::from_fn(uniform(m), |t| t * t * t).unwrap();
        let d = caputo_derivative(1.9, &cube).unwrap();
        let c = 6.0 / gamma(2.1).unwrap();
        errs.push(max_err_from(&d, 0.1, |t| c * t.powf(1.1)));
    }
    // f'' = 6t is reproduced exactly by the stencils and the quadrature
    assert!(errs.iter().all(|&e| e < 1e-10), "{errs:?}");
}

#[test]
fn semigroup_example() {
    let f = SampledFunction::from_fn(uniform(64), |_| 1.0).unwrap();
    let r = property_residual(PropertyCheck::Semigroup {
        beta: 0.5,
        gamma: 0.5,
        f: &f,
    })
    .unwrap();
    assert!(r <= 5e-3);
}

#[test]
fn int_by_parts_example() {
    let grid = uniform(64);
    let f = SampledFunction::from_fn(grid.clone(), |_| 1.0).unwrap();
    let left = frac_integral(Side::Left, 0.5, &f).unwrap();
    let lhs = integrate_product(&left, &vec![1.0; 65]).unwrap();
    let exact = 2.0 / (3.0 * gamma(1.5).unwrap());
    assert!((lhs - exact).abs() < 1e-14);
    let r = property_residual(PropertyCheck::IntByParts {
        beta: 0.5,
        f: &f,
        g: &f,
    })
    .unwrap();
    assert!(r < 1e-14);
}

#[test]
fn ml_integral_example() {
    let grid = uniform(256);
    let r = property_residual(PropertyCheck::MlIntegral {
        alpha: 1.7,
        beta: 1.7,
        lambda: -1.0,
        grid: &grid,
    })
    .unwrap();
    assert!(r <= 1e-4, "{r}");
    assert!(property_residual(PropertyCheck::MlIntegral {
        alpha: 2.0,
        beta: 1.0,
        lambda: -1.0,
        grid: &grid,
    })
    .is_err());
}

#[test]
fn works_in_single_precision() {
    let g = TimeGrid::<f32>::uniform(1.0, 32).unwrap();
    let f = SampledFunction::from_fn(g, |t| t).unwrap();
    let i = frac_integral(Side::Left, 0.5_f32, &f).unwrap();
    let c = 1.0 / gamma(2.5_f32).unwrap();
    assert!(max_err_from_f32(&i, |t| c * t.powf(1.5)) < 1e-5);
}

fn max_err_from_f32(f: &SampledFunction<f32>, exact: impl Fn(f32) -> f32) -> f32 {
    f.evaluate()
        .iter()
        .zip(f.grid().points())
        .map(|(&v, &t)| (v - exact(t)).abs())
        .fold(0.0, f32::max)
}
