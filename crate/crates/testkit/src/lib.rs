//! Numerical oracles used by the test suites.
//!
//! Nothing here shares code with `wetspell`: integrals, inverses and
//! reference distributions are recomputed from first principles so that a
//! mistake in the library cannot hide behind the same mistake in its check.

use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::erf::erfc;

// 15-point Kronrod nodes on [0,1] (symmetric half) with Kronrod and embedded Gauss weights.
const XK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XK[i];
        let s = f(c - dx) + f(c + dx);
        k += WK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) quadrature on a finite interval.
///
/// Subdivides the interval with the largest error estimate until the total
/// estimate drops below `tol` or 20 000 panels have been used.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let mut panels = vec![{
        let (v, e) = kronrod(&f, a, b);
        (a, b, v, e)
    }];
    for _ in 0..20_000 {
        let total_err: f64 = panels.iter().map(|p| p.3).sum();
        if total_err <= tol {
            break;
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .unwrap();
        let (lo, hi, _, _) = panels.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = kronrod(&f, lo, mid);
        let (v2, e2) = kronrod(&f, mid, hi);
        panels.push((lo, mid, v1, e1));
        panels.push((mid, hi, v2, e2));
    }
    panels.iter().map(|p| p.2).sum()
}

/// Integral over `[a, ∞)`.
///
/// `[a, a + split]` is handled directly; the remainder through `x = a + split / w`,
/// `w ∈ (0, 1]`, which maps a polynomially decaying tail onto a finite range.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, split: f64, tol: f64) -> f64 {
    let head = integrate(&f, a, a + split, 0.5 * tol);
    let tail = integrate(
        |w: f64| {
            if w <= 0.0 {
                return 0.0;
            }
            let x = a + split / w;
            let v = f(x) * split / (w * w);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        0.5 * tol,
    );
    head + tail
}

/// Tanh–sinh quadrature on `[a, b]`; tolerant of integrable endpoint singularities.
///
/// The integrand is evaluated as `f(x, distance_to_a, distance_to_b)` so that
/// callers can avoid cancellation near the endpoints.
pub fn tanh_sinh<F: Fn(f64, f64, f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let step = 1.0 / 64.0;
    let pi2 = std::f64::consts::FRAC_PI_2;
    let mut sum = 0.0;
    let n = (4.5 / step) as i64;
    for k in -n..=n {
        let t = k as f64 * step;
        let s = pi2 * t.sinh();
        let ch = s.cosh();
        let w = pi2 * t.cosh() / (ch * ch);
        // 1 - tanh(s) and 1 + tanh(s) without cancellation.
        let e = (-2.0 * s.abs()).exp();
        let small = 2.0 * e / (1.0 + e);
        let (to_a, to_b) = if s >= 0.0 {
            (half * (2.0 - small), half * small)
        } else {
            (half * small, half * (2.0 - small))
        };
        if to_a <= 0.0 || to_b <= 0.0 {
            continue;
        }
        let x = if to_a < to_b { a + to_a } else { b - to_b };
        let v = f(x, to_a, to_b);
        if v.is_finite() {
            sum += w * v;
        }
    }
    sum * half * step
}

/// `∫_0^∞ f(x) dx` by tanh–sinh after `x = scale · t / (1 − t)`.
///
/// Algebraic behaviour at 0 and at infinity both become endpoint
/// singularities in `t`, which the double-exponential rule absorbs.
pub fn integrate_half_line<F: Fn(f64) -> f64>(f: F, scale: f64) -> f64 {
    tanh_sinh(
        |_, t, one_minus_t| {
            let x = scale * t / one_minus_t;
            f(x) * scale / (one_minus_t * one_minus_t)
        },
        0.0,
        1.0,
    )
}

/// `∫_a^b f(x) dx` for `f(x) ~ (x − a)^{−β}` near `a`, `0 ≤ β < 1`.
///
/// Uses `u = (x − a)^{1−β}`. The Jacobian is built from the offset `x − a`
/// actually realized in floating point, so that the library's own
/// `(x − a)^{−β}` factor cancels exactly; offsets below one ulp are moved to
/// the nearest representable point, harmless because the transformed
/// integrand is smooth in `u`.
pub fn integrate_left_singular<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, beta: f64, tol: f64) -> f64 {
    let k = 1.0 - beta;
    integrate(
        |u: f64| {
            if u <= 0.0 {
                return 0.0;
            }
            let mut x = a + u.powf(1.0 / k);
            if x <= a {
                x = next_toward(a, f64::INFINITY);
            }
            let d = x - a;
            f(x) * d.powf(beta) / k
        },
        0.0,
        (b - a).powf(k),
        tol,
    )
}

/// Adjacent float to `x` in the direction of `target`.
fn next_toward(x: f64, target: f64) -> f64 {
    if x == 0.0 {
        return if target > 0.0 { f64::from_bits(1) } else { -f64::from_bits(1) };
    }
    let bits = x.to_bits();
    if (target > x) == (x > 0.0) {
        f64::from_bits(bits + 1)
    } else {
        f64::from_bits(bits - 1)
    }
}

/// Mirror image of [`integrate_left_singular`]: `f(x) ~ (b − x)^{−β}` near `b`.
pub fn integrate_right_singular<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, beta: f64, tol: f64) -> f64 {
    let k = 1.0 - beta;
    integrate(
        |u: f64| {
            if u <= 0.0 {
                return 0.0;
            }
            let mut x = b - u.powf(1.0 / k);
            if x >= b {
                x = next_toward(b, f64::NEG_INFINITY);
            }
            let d = b - x;
            f(x) * d.powf(beta) / k
        },
        0.0,
        (b - a).powf(k),
        tol,
    )
}

/// `∫_a^∞ f(x) dx` for `f(x) ~ x^{−1−ρ}`, via `x = a t^{−1/ρ}`, `t ∈ (0, 1]`.
pub fn integrate_power_tail<F: Fn(f64) -> f64>(f: F, a: f64, rho: f64, tol: f64) -> f64 {
    integrate(
        |t: f64| {
            if t <= 0.0 {
                return 0.0;
            }
            let x = a * t.powf(-1.0 / rho);
            let v = f(x) * a / rho * t.powf(-1.0 / rho - 1.0);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        tol,
    )
}

/// Bisection for an increasing function: returns `x` in `[lo, hi]` with `f(x) = target`.
pub fn invert_increasing<F: Fn(f64) -> f64>(f: F, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    assert!(f(lo) <= target && f(hi) >= target, "target not bracketed");
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi.abs().max(1e-300) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Upper-tail p-value of a chi-square statistic.
pub fn chi_square_p_value(statistic: f64, dof: f64) -> f64 {
    1.0 - ChiSquared::new(dof).unwrap().cdf(statistic)
}

/// Pearson chi-square statistic of observed counts against expected counts.
pub fn pearson_statistic(observed: &[f64], expected: &[f64]) -> f64 {
    observed
        .iter()
        .zip(expected)
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum()
}

/// CDF of the positive 1/2-stable law with Laplace transform `exp(-√s)`.
///
/// That variable equals `1 / (4 Y)` with `Y ~ Gamma(1/2, 1)`, giving
/// `P(S ≤ x) = erfc(1 / (2 √x))`.
pub fn levy_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        erfc(0.5 / x.sqrt())
    }
}

/// Two-sided KS p-value approximation (asymptotic Kolmogorov series).
pub fn kolmogorov_p_value(d: f64, n: f64) -> f64 {
    let t = d * n.sqrt();
    if t < 0.2 {
        return 1.0;
    }
    let mut s = 0.0;
    for k in 1..100 {
        let k = k as f64;
        let term = (-2.0 * k * k * t * t).exp();
        s += if k as i64 % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}
