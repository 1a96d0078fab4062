use std::f64::consts::PI;

use proptest::prelude::*;
use statrs::function::gamma::gamma;
use wetspell::distributions::*;
use wetspell::Error;
use wetspell_testkit as tk;

fn mp(r: f64, l: f64, g: f64) -> ModelParams {
    ModelParams::new(r, l, g).unwrap()
}

fn nb(r: f64, p: f64) -> NegBinParams {
    NegBinParams::new(r, p).unwrap()
}

#[test]
fn cdf_matches_integrated_density() {
    let p = mp(0.5, 2.0, 1.5);
    let area = tk::tanh_sinh(|x, _, _| limit_pdf(x, &p).unwrap(), 0.0, 2.0);
    assert!((limit_cdf(2.0, &p).unwrap() - area).abs() < 1e-10);
    assert_eq!(limit_cdf(0.0, &p).unwrap(), 0.0);
    assert_eq!(limit_cdf(1.0, &mp(1.0, 1.0, 1.0)).unwrap(), 0.5);
    assert!(limit_cdf(-1.0, &p).is_err());
}

#[test]
fn density_has_unit_mass_and_power_tail() {
    let p = mp(0.85, 2.0, 1.2);
    let mass = tk::integrate_half_line(|x| limit_pdf(x, &p).unwrap(), 1.0);
    assert!((mass - 1.0).abs() < 1e-8, "{mass}");
    assert_eq!(limit_pdf(1.0, &mp(1.0, 1.0, 1.0)).unwrap(), 0.25);
    assert!(limit_pdf(0.0, &p).is_err());

    let (r, l, g) = (0.5, 1.0, 0.7);
    let p = mp(r, l, g);
    let x: f64 = 1e12;
    let scaled = limit_pdf(x, &p).unwrap() * x.powf(1.0 + g);
    assert!((scaled / (r * g / l) - 1.0).abs() < 1e-4, "{scaled}");
}

#[test]
fn quantile_against_bisection() {
    let p = mp(2.0, 0.5, 2.0);
    let oracle = tk::invert_increasing(|x| limit_cdf(x, &p).unwrap(), 0.25, 0.0, 1e3);
    assert!((limit_quantile(0.25, &p).unwrap() - oracle).abs() < 1e-9);
    assert_eq!(limit_quantile(0.5, &mp(1.0, 1.0, 1.0)).unwrap(), 1.0);
    let p = mp(0.876, 3.0, 0.9);
    let x = limit_quantile(0.123, &p).unwrap();
    assert!((limit_cdf(x, &p).unwrap() - 0.123).abs() < 1e-12);
    for eps in [0.0, 1.0, -0.5, 1.5] {
        assert!(limit_quantile(eps, &p).is_err());
    }
}

#[test]
fn moments_against_quadrature() {
    let v = limit_moment(1.0, &mp(1.0, 1.0, 2.0)).unwrap();
    let oracle = tk::integrate_half_line(|x| x * limit_pdf(x, &mp(1.0, 1.0, 2.0)).unwrap(), 1.0);
    assert!((v - PI / 2.0).abs() < 1e-12);
    assert!((v - oracle).abs() < 1e-6);
    assert!((limit_moment(1e-12, &mp(0.7, 3.0, 1.1)).unwrap() - 1.0).abs() < 1e-9);
    assert!(matches!(
        limit_moment(1.0, &mp(1.0, 1.0, 1.0)),
        Err(Error::MomentDoesNotExist { .. })
    ));

    for p in [mp(0.5, 2.0, 0.8), mp(0.876, 0.5, 1.0), mp(2.5, 1.3, 2.2)] {
        for k in 1..=9 {
            let delta = p.gamma() * k as f64 / 10.0;
            let m = limit_moment(delta, &p).unwrap();
            let f = |x: f64| x.powf(delta) * limit_pdf(x, &p).unwrap();
            let q = tk::tanh_sinh(|x, _, _| f(x), 0.0, 1.0) + tk::integrate_power_tail(f, 1.0, p.gamma() - delta, 1e-13);
            assert!((m / q - 1.0).abs() < 1e-6, "{p:?} delta={delta}: {m} vs {q}");
        }
    }
}

#[test]
fn derivative_of_cdf_is_density() {
    for p in [mp(0.5, 2.0, 1.5), mp(0.85, 1.0, 0.7), mp(3.0, 0.2, 2.0)] {
        for &x in &[0.05, 0.3, 1.0, 2.7, 15.0] {
            let h = 1e-5 * x;
            let fd = (limit_cdf(x + h, &p).unwrap() - limit_cdf(x - h, &p).unwrap()) / (2.0 * h);
            let pdf = limit_pdf(x, &p).unwrap();
            assert!((fd / pdf - 1.0).abs() < 1e-6, "{p:?} x={x}");
        }
    }
}

#[test]
fn negbin_pmf_cases() {
    let p = nb(0.847, 0.322);
    let total: f64 = (0..=500).map(|k| negbin_pmf(k, &p)).sum();
    assert!((total - 1.0).abs() < 1e-10);
    assert!((negbin_pmf(0, &p) - 0.322f64.powf(0.847)).abs() < 1e-15);
    let g = nb(1.0, 0.3);
    for k in 0..10 {
        let geo = 0.3 * 0.7f64.powi(k as i32);
        assert!((negbin_pmf(k, &g) - geo).abs() < 1e-14);
    }
    // log-gamma keeps far-tail terms finite
    assert!(negbin_pmf(500, &nb(300.0, 0.5)).is_finite());
}

/// `∫_μ^∞ g(z) p(z; r, μ) dz`, splitting at `2μ`.
fn z_expectation<G: Fn(f64) -> f64>(g: G, r: f64, mu: f64) -> f64 {
    let f = |z: f64| g(z) * theorem1_mixing_density_z(z, r, mu).unwrap();
    tk::integrate_left_singular(&f, mu, 2.0 * mu, r, 1e-14) + tk::integrate_power_tail(&f, 2.0 * mu, r, 1e-14)
}

/// `∫_p^1 g(y) h(y; r, p) dy`, splitting at the midpoint.
fn y_expectation<G: Fn(f64) -> f64>(g: G, r: f64, p: f64) -> f64 {
    let f = |y: f64| g(y) * theorem1_mixing_density_y(y, r, p).unwrap();
    let c = 0.5 * (p + 1.0);
    tk::integrate_left_singular(&f, p, c, r, 1e-14) + tk::integrate_right_singular(&f, c, 1.0, 1.0 - r, 1e-14)
}

#[test]
fn mixing_densities_normalize() {
    assert!((z_expectation(|_| 1.0, 0.5, 1.0) - 1.0).abs() < 1e-6);
    assert!((y_expectation(|_| 1.0, 0.876, 0.489) - 1.0).abs() < 1e-6);
    assert_eq!(theorem1_mixing_density_z(0.5, 0.5, 1.0).unwrap(), 0.0);
    for y in [0.1, 0.3, 1.0, 1.5] {
        assert_eq!(theorem1_mixing_density_y(y, 0.6, 0.3).unwrap(), 0.0);
    }
    assert!(theorem1_mixing_density_z(2.0, 1.0, 1.0).is_err());
    assert!(theorem1_mixing_density_y(0.5, 0.0, 0.3).is_err());
}

#[test]
fn mixing_densities_reproduce_negbin() {
    let (r, p) = (0.5, 0.3);
    let mu = p / (1.0 - p);
    for k in 0..=20 {
        let mixed = z_expectation(|z| (z / (z + 1.0)) * (1.0 / (z + 1.0)).powi(k), r, mu);
        let exact = negbin_pmf(k as u64, &nb(r, p));
        assert!((mixed - exact).abs() < 1e-8, "k={k}: {mixed} vs {exact}");
    }
    let (r, p) = (0.6, 0.4);
    for k in 0..=15 {
        let mixed = y_expectation(|y| y * (1.0 - y).powi(k), r, p);
        let exact = negbin_pmf(k as u64, &nb(r, p));
        assert!((mixed - exact).abs() < 1e-8, "k={k}: {mixed} vs {exact}");
    }
}

#[test]
fn stable_ratio_density_properties() {
    let (a, x) = (0.6, 2.5);
    let lhs = stable_ratio_density(x, a).unwrap();
    let rhs = stable_ratio_density(1.0 / x, a).unwrap() / (x * x);
    assert!((lhs - rhs).abs() < 1e-12);
    assert!((stable_ratio_density(1.0, 0.5).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-15);
    for a in [0.3, 0.5, 0.9] {
        let mass = tk::integrate_half_line(|x| stable_ratio_density(x, a).unwrap(), 1.0);
        assert!((mass - 1.0).abs() < 1e-6, "alpha={a}: {mass}");
    }
    assert!(stable_ratio_density(1.0, 1.0).is_err());
    assert!(stable_ratio_density(1.0, 0.0).is_err());
}

#[test]
fn stable_moment_values() {
    assert_eq!(stable_moment(1.0, 0.4).unwrap(), 1.0);
    let v = stable_moment(0.5, 0.25).unwrap();
    assert!((v - gamma(0.5) / gamma(0.75)).abs() < 1e-12);
    assert!((stable_moment(0.7, 1e-12).unwrap() - 1.0).abs() < 1e-9);
    assert!(stable_moment(0.5, 0.5).is_err());
    assert!(stable_moment(0.5, 0.7).is_err());
}

#[test]
fn snedecor_fisher_identity() {
    assert_eq!(snedecor_fisher_density(1.0, 1.0).unwrap(), 0.25);
    let mass = tk::integrate_half_line(|x| snedecor_fisher_density(x, 0.876).unwrap(), 1.0);
    assert!((mass - 1.0).abs() < 1e-6);

    // density of (r Q / λ)^{1/γ} by change of variables
    let (r, l, g) = (0.7, 2.0, 1.3);
    let p = mp(r, l, g);
    for i in 0..50 {
        let x = 0.02 * 1.2f64.powi(i);
        let q = l * x.powf(g) / r;
        let jac = l * g * x.powf(g - 1.0) / r;
        let transformed = snedecor_fisher_density(q, r).unwrap() * jac;
        let direct = limit_pdf(x, &p).unwrap();
        assert!((transformed / direct - 1.0).abs() < 1e-10, "x={x}");
    }
}

#[test]
fn generalized_gamma_is_power_transform() {
    for (r, g, l) in [(0.8, 1.5, 2.0), (2.0, -0.7, 0.5), (0.3, 0.4, 1.0)] {
        let gg = GGParams::new(r, g, l).unwrap();
        let base = GammaParams::new(r, l).unwrap();
        for &x in &[0.1f64, 0.5, 1.0, 2.0, 4.0] {
            let transformed = gamma_pdf(x.powf(g), &base) * (g * x.powf(g - 1.0)).abs();
            let direct = gg_pdf(x, &gg);
            assert!((transformed - direct).abs() <= 1e-10 * direct.max(1e-300), "{r} {g} {l} x={x}");
        }
    }
    assert!(GGParams::new(1.0, 0.0, 1.0).is_err());
}

#[test]
fn weibull_and_frechet_are_reciprocal() {
    for &x in &[0.2f64, 1.0, 3.0] {
        assert!((frechet_cdf(x, 1.7) - (1.0 - weibull_cdf(1.0 / x, 1.7))).abs() < 1e-15);
    }
    assert!((weibull_cdf(1.0, 0.5) - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
}

fn params() -> impl Strategy<Value = ModelParams> {
    (0.05f64..5.0, 0.05f64..5.0, 0.1f64..4.0).prop_map(|(r, l, g)| mp(r, l, g))
}

proptest! {
    #[test]
    fn cdf_is_monotone(p in params(), mut xs in prop::collection::vec(0.0f64..1e3, 2..40)) {
        xs.sort_by(f64::total_cmp);
        let vals: Vec<f64> = xs.iter().map(|&x| limit_cdf(x, &p).unwrap()).collect();
        for w in vals.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
        prop_assert!(vals.iter().all(|v| (0.0..=1.0).contains(v)));
        prop_assert!(limit_cdf(1e300, &p).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn quantile_inverts_cdf(p in params(), eps in 1e-6f64..(1.0 - 1e-6)) {
        let x = limit_quantile(eps, &p).unwrap();
        prop_assert!((limit_cdf(x, &p).unwrap() - eps).abs() < 1e-10);
    }

    #[test]
    fn cdf_inverts_quantile(p in params(), u in 0.0f64..1.0) {
        // x spread over many orders of magnitude around the median
        let median = limit_quantile(0.5, &p).unwrap();
        let x = median * 10f64.powf(4.0 * u - 2.0);
        let eps = limit_cdf(x, &p).unwrap();
        prop_assume!(eps > 1e-12 && eps < 1.0 - 1e-9);
        let back = limit_quantile(eps, &p).unwrap();
        // conditioning of the inverse: |dx| ≈ |d eps| / pdf
        let tol = 1e-10 * x.max(1.0) + 1e-13 / limit_pdf(x, &p).unwrap();
        prop_assert!((back - x).abs() < tol, "x={} back={}", x, back);
    }
}
