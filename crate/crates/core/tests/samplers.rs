use rand::Rng;
use wetspell::distributions::*;
use wetspell::gof::{ks_critical, ks_critical_two_sample, ks_one_sample, ks_two_sample};
use wetspell::rng::{open01, replicate, replicate_with_workers, RngState};
use wetspell::samplers::*;
use wetspell::Error;
use wetspell_testkit as tk;

fn mp(r: f64, l: f64, g: f64) -> ModelParams {
    ModelParams::new(r, l, g).unwrap()
}

fn draw<F: FnMut(&mut RngState) -> f64>(seed: u64, n: usize, mut f: F) -> Vec<f64> {
    let mut rng = RngState::new(seed);
    (0..n).map(|_| f(&mut rng)).collect()
}

fn mean_and_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn exp_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -(-x).exp_m1()
    }
}

fn two_sample_ok(a: &[f64], b: &[f64]) -> bool {
    ks_two_sample(a, b).unwrap().ks_distance < ks_critical_two_sample(0.01, a.len(), b.len())
}

#[test]
fn gamma_sampler() {
    let n = 10_000;
    let unit = GammaParams::new(1.0, 1.0).unwrap();
    let v = draw(1, n, |rng| sample_gamma(&unit, rng));
    assert!(ks_one_sample(&v, exp_cdf).unwrap().ks_distance < 0.0136);

    let p = GammaParams::new(0.876, 2.0).unwrap();
    let v = draw(2, 100_000, |rng| sample_gamma(&p, rng));
    let (m, se) = mean_and_se(&v);
    assert!((m - 0.438).abs() < 3.0 * se, "{m} ± {se}");
    assert!(v.iter().all(|x| *x > 0.0 && x.is_finite()));

    let shape_only = GammaParams::new(0.876, 1.0).unwrap();
    let scaled = draw(40, n, |rng| sample_gamma(&shape_only, rng) / 2.0);
    let direct = draw(41, n, |rng| sample_gamma(&p, rng));
    assert!(two_sample_ok(&scaled, &direct));
}

#[test]
fn weibull_sampler() {
    let n = 10_000;
    let v = draw(5, n, |rng| sample_weibull(1.0, rng));
    assert!(ks_one_sample(&v, exp_cdf).unwrap().ks_distance < ks_critical(0.01, n));

    let v = draw(6, 100_000, |rng| sample_weibull(0.5, rng));
    let below = v.iter().filter(|x| **x < 1.0).count() as f64 / v.len() as f64;
    let target = 1.0 - (-1.0f64).exp();
    let se = (target * (1.0 - target) / v.len() as f64).sqrt();
    assert!((below - target).abs() < 3.0 * se);

    // W_1 / S_{γ,1} has the law of W_γ
    for g in [0.4, 0.8] {
        let idx = StableIndex::new(g).unwrap();
        let mixed = draw(7, n, |rng| sample_weibull(1.0, rng) / sample_stable_onesided(idx, rng));
        let direct = draw(8, n, |rng| sample_weibull(g, rng));
        assert!(two_sample_ok(&mixed, &direct), "gamma={g}");
    }
}

#[test]
fn one_sided_stable_sampler() {
    let one = StableIndex::new(1.0).unwrap();
    assert!(draw(9, 100, |rng| sample_stable_onesided(one, rng)).iter().all(|x| *x == 1.0));

    let half = StableIndex::new(0.5).unwrap();
    let v = draw(10, 1_000_000, |rng| sample_stable_onesided(half, rng).powf(0.25));
    let (m, se) = mean_and_se(&v);
    let exact = stable_moment(0.5, 0.25).unwrap();
    assert!((m - exact).abs() < 3.0 * se, "{m} ± {se} vs {exact}");

    let n = 10_000;
    let v = draw(11, n, |rng| sample_stable_onesided(half, rng));
    assert!(ks_one_sample(&v, tk::levy_cdf).unwrap().ks_distance < ks_critical(0.01, n));

    // (S + S') / 2^{1/α} has the law of S
    for a in [0.3, 0.5, 0.8] {
        let idx = StableIndex::new(a).unwrap();
        let scale = 2f64.powf(1.0 / a);
        let sums = draw(12, n, |rng| {
            (sample_stable_onesided(idx, rng) + sample_stable_onesided(idx, rng)) / scale
        });
        let single = draw(13, n, |rng| sample_stable_onesided(idx, rng));
        assert!(two_sample_ok(&sums, &single), "alpha={a}");
        assert!(single.iter().all(|x| *x > 0.0 && x.is_finite()));
    }
}

#[test]
fn stable_ratio_sampler() {
    let n = 10_000;
    let idx = StableIndex::new(0.6).unwrap();
    let r = draw(14, n, |rng| sample_stable_ratio(idx, rng));
    let inv: Vec<f64> = draw(15, n, |rng| sample_stable_ratio(idx, rng)).iter().map(|x| 1.0 / x).collect();
    assert!(two_sample_ok(&r, &inv));

    let half = StableIndex::new(0.5).unwrap();
    let big = 100_000;
    let below = draw(16, big, |rng| sample_stable_ratio(half, rng))
        .iter()
        .filter(|x| **x < 1.0)
        .count() as f64
        / big as f64;
    assert!((below - 0.5).abs() < 3.0 * (0.25 / big as f64).sqrt());

    // Pearson test against the analytic density on log-spaced bins
    let a = 0.7;
    let idx = StableIndex::new(a).unwrap();
    let v = draw(17, big, |rng| sample_stable_ratio(idx, rng));
    let edges: Vec<f64> = (0..=18).map(|i| (-4.5 + 0.5 * i as f64).exp()).collect();
    let dens = |x: f64| stable_ratio_density(x, a).unwrap();
    let mut probs = vec![tk::tanh_sinh(|x, _, _| dens(x), 0.0, edges[0])];
    for w in edges.windows(2) {
        probs.push(tk::integrate(dens, w[0], w[1], 1e-12));
    }
    probs.push(1.0 - probs.iter().sum::<f64>());
    let mut counts = vec![0.0; probs.len()];
    for x in &v {
        let bin = edges.partition_point(|e| e <= x);
        counts[bin] += 1.0;
    }
    let expected: Vec<f64> = probs.iter().map(|p| p * big as f64).collect();
    assert!(expected.iter().all(|e| *e > 5.0));
    let stat = tk::pearson_statistic(&counts, &expected);
    let pval = tk::chi_square_p_value(stat, (probs.len() - 1) as f64);
    assert!(pval > 0.01, "chi2={stat} p={pval}");
}

#[test]
fn mixing_variable_sampler() {
    let v = draw(18, 100_000, |rng| sample_z(0.5, 2.0, rng));
    assert!(v.iter().all(|z| *z >= 2.0));

    // tail probabilities against quadrature of the mixing density
    let (r, mu) = (0.5, 1.0);
    let n = 100_000;
    let v = draw(19, n, |rng| sample_z(r, mu, rng));
    let dens = |z: f64| theorem1_mixing_density_z(z, r, mu).unwrap();
    for z in [1.01, 1.1, 1.3, 1.6, 2.0, 3.0, 5.0, 10.0, 30.0, 100.0] {
        let tail = tk::integrate_power_tail(dens, z, r, 1e-12);
        let emp = v.iter().filter(|x| **x > z).count() as f64 / n as f64;
        assert!((emp - tail).abs() < 0.01, "z={z}: {emp} vs {tail}");
    }

    let scaled: Vec<f64> = draw(20, 10_000, |rng| sample_z(0.7, 1.0, rng)).iter().map(|z| 3.0 * z).collect();
    let direct = draw(21, 10_000, |rng| sample_z(0.7, 3.0, rng));
    assert!(two_sample_ok(&scaled, &direct));
}

#[test]
fn negbin_sampler() {
    let n = 100_000;
    let geo = NegBinParams::new(1.0, 0.3).unwrap();
    let v: Vec<u64> = {
        let mut rng = RngState::new(22);
        (0..n).map(|_| sample_negbin(&geo, &mut rng)).collect()
    };
    for m in 1..=5 {
        let emp = v.iter().filter(|k| **k >= m).count() as f64 / n as f64;
        let exact = 0.7f64.powi(m as i32);
        let se = (exact * (1.0 - exact) / n as f64).sqrt();
        assert!((emp - exact).abs() < 3.0 * se, "m={m}");
    }

    let p = NegBinParams::new(0.847, 0.322).unwrap();
    let v = draw(23, n, |rng| sample_negbin(&p, rng) as f64);
    let (m, se) = mean_and_se(&v);
    assert!((m - p.mean()).abs() < 3.0 * se, "{m} vs {}", p.mean());
    assert!((p.mean() - 1.783).abs() < 1e-3);

    let p = NegBinParams::new(0.5, 0.4).unwrap();
    let v = draw(24, n, |rng| sample_negbin(&p, rng) as f64);
    let top = 12usize;
    let mut counts = vec![0.0; top + 1];
    for k in &v {
        counts[(*k as usize).min(top)] += 1.0;
    }
    let mut probs: Vec<f64> = (0..top as u64).map(|k| negbin_pmf(k, &p)).collect();
    probs.push(1.0 - probs.iter().sum::<f64>());
    let expected: Vec<f64> = probs.iter().map(|q| q * n as f64).collect();
    let stat = tk::pearson_statistic(&counts, &expected);
    assert!(tk::chi_square_p_value(stat, top as f64) > 0.01, "chi2={stat}");
}

#[test]
fn limit_sampler_examples() {
    let n = 10_000;
    let unit = mp(1.0, 1.0, 1.0);
    let v = draw(25, n, |rng| sample_limit(&unit, RepresentationTag::Direct, rng).unwrap());
    assert!(ks_one_sample(&v, |x| x / (1.0 + x)).unwrap().ks_distance < 0.0136);

    let p = mp(0.876, 1.0, 0.9);
    let a = LimitSampler::new(p, RepresentationTag::Direct).unwrap().sample_n(n, &mut RngState::new(26));
    let b = LimitSampler::new(p, RepresentationTag::FoldedNormal).unwrap().sample_n(n, &mut RngState::new(27));
    assert!(two_sample_ok(&a, &b));

    let p = mp(0.5, 2.0, 0.8);
    let big = 100_000;
    let v = LimitSampler::new(p, RepresentationTag::MixedExponential)
        .unwrap()
        .sample_n(big, &mut RngState::new(28));
    let ks = ks_one_sample(&v, |x| limit_cdf(x, &p).unwrap()).unwrap().ks_distance;
    assert!(ks < ks_critical(0.01, big), "{ks}");
}

#[test]
fn unit_domain_tags_reject_large_parameters() {
    let p = mp(0.5, 1.0, 1.5);
    for tag in RepresentationTag::ALL {
        let res = LimitSampler::new(p, tag);
        if tag.requires_unit_domain() {
            assert!(matches!(res, Err(Error::RepresentationDomain { .. })), "{tag}");
        } else {
            assert!(res.is_ok(), "{tag}");
        }
    }
    assert!(LimitSampler::new(mp(1.5, 1.0, 0.5), RepresentationTag::StableForm).is_err());
    let mut rng = RngState::new(1);
    assert!(sample_limit(&p, RepresentationTag::ParetoRatio, &mut rng).is_err());
}

#[test]
fn representations_agree_pairwise() {
    let n = 10_000;
    let p = mp(0.7, 1.3, 0.6);
    let samples: Vec<(RepresentationTag, Vec<f64>)> = RepresentationTag::ALL
        .iter()
        .enumerate()
        .map(|(i, &tag)| {
            let s = LimitSampler::new(p, tag).unwrap().sample_n(n, &mut RngState::new(100 + i as u64));
            (tag, s)
        })
        .collect();
    for (i, (ta, a)) in samples.iter().enumerate() {
        assert!(a.iter().all(|x| *x > 0.0 && x.is_finite()), "{ta}");
        for (tb, b) in &samples[i + 1..] {
            let d = ks_two_sample(a, b).unwrap().ks_distance;
            assert!(d < 1.628 * (2.0 / n as f64).sqrt(), "{ta} vs {tb}: {d}");
        }
    }
}

#[test]
fn fractional_moments_match() {
    let n = 200_000;
    for p in [mp(0.5, 2.0, 0.8), mp(2.0, 0.5, 1.7)] {
        for delta in [p.gamma() / 4.0, p.gamma() / 2.0] {
            let v = LimitSampler::new(p, RepresentationTag::Direct)
                .unwrap()
                .sample_n(n, &mut RngState::new(29))
                .into_iter()
                .map(|x| x.powf(delta))
                .collect::<Vec<_>>();
            let (m, se) = mean_and_se(&v);
            let exact = limit_moment(delta, &p).unwrap();
            assert!((m - exact).abs() < 3.0 * se, "{p:?} delta={delta}: {m} ± {se} vs {exact}");
        }
    }
}

#[test]
fn prelimit_maximum_approaches_limit() {
    let p = mp(0.85, 1.0, 1.5);
    let reps = 10_000;
    let ks_at = |n: u64, seed: u64| {
        let pm = PrelimitMax::new(n, &p, 0.5).unwrap();
        let v = draw(seed, reps, |rng| pm.sample(rng));
        ks_one_sample(&v, |x| limit_cdf(x, &p).unwrap()).unwrap().ks_distance
    };
    assert!(ks_at(10_000, 30) < 0.05);
    let small = ks_at(100, 31);
    let large = ks_at(10_000, 31);
    assert!(large < small, "{large} vs {small}");

    let pm = PrelimitMax::new(1, &mp(50.0, 1.0, 1.0), 1.0 - 1e-12).unwrap();
    assert_eq!(pm.count_law().p(), 1.0 - 1e-12);
    let mut rng = RngState::new(32);
    assert_eq!(pm.sample(&mut rng), 0.0);
    assert!(simulate_prelimit_max(0, &p, 0.5, &mut rng).is_err());
    assert!(simulate_prelimit_max(10, &p, 1.5, &mut rng).is_err());
}

#[test]
fn streams_are_reproducible() {
    let p = mp(0.6, 1.0, 0.9);
    for tag in RepresentationTag::ALL {
        let s = LimitSampler::new(p, tag).unwrap();
        let a = s.sample_n(100, &mut RngState::new(77));
        let b = s.sample_n(100, &mut RngState::new(77));
        assert_eq!(a, b);
        let c = s.sample_n(100, &mut RngState::new(78));
        assert_ne!(a, c);
    }
    let mut x = RngState::new(5);
    let mut y = RngState::new(5);
    for _ in 0..1000 {
        assert_eq!(x.random::<u64>(), y.random::<u64>());
        assert_eq!(open01(&mut x), open01(&mut y));
    }
}

#[test]
fn parallel_replicates_do_not_depend_on_worker_count() {
    let p = mp(0.8, 1.0, 0.9);
    let stat = |_: usize, rng: &mut RngState| {
        let v = LimitSampler::new(p, RepresentationTag::StableForm).unwrap().sample_n(500, rng);
        ks_one_sample(&v, |x| limit_cdf(x, &p).unwrap()).unwrap().ks_distance
    };
    let one = replicate_with_workers(9, 16, 1, stat);
    let four = replicate_with_workers(9, 16, 4, stat);
    let default = replicate(9, 16, stat);
    assert_eq!(one, four);
    assert_eq!(one, default);
}
