//! Nelder–Mead direct search.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    /// Offset of the initial vertices from the start along each axis.
    pub initial_step: f64,
    /// Stop once the largest vertex-to-vertex distance falls below this.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            initial_step: 0.2,
            tolerance: 1e-8,
            max_iterations: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

fn diameter(vertices: &[Vec<f64>]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, a) in vertices.iter().enumerate() {
        for b in &vertices[i + 1..] {
            let dist = a.iter().zip(b).map(|(u, v)| (u - v) * (u - v)).sum::<f64>();
            d = d.max(dist);
        }
    }
    d.sqrt()
}

fn lerp(from: &[f64], to: &[f64], t: f64) -> Vec<f64> {
    from.iter().zip(to).map(|(a, b)| a + t * (b - a)).collect()
}

/// Minimizes `f` from `x0`. Non-finite objective values count as `+∞`, so the
/// best vertex never gets worse than the starting point.
pub fn minimize<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], opts: &SimplexOptions) -> SimplexResult {
    let n = x0.len();
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut vertices: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    vertices.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += opts.initial_step;
        vertices.push(v);
    }
    let mut values: Vec<f64> = vertices.iter().map(|v| eval(v)).collect();

    let mut iterations = 0;
    let mut converged = false;
    loop {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        vertices = order.iter().map(|&i| vertices[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        if diameter(&vertices) < opts.tolerance {
            converged = true;
            break;
        }
        if iterations >= opts.max_iterations {
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for v in &vertices[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }
        let worst = vertices[n].clone();
        let f_best = values[0];
        let f_second = values[n - 1];
        let f_worst = values[n];

        let reflected = lerp(&centroid, &worst, -REFLECT);
        let f_r = eval(&reflected);
        if f_r < f_best {
            let expanded = lerp(&centroid, &worst, -REFLECT * EXPAND);
            let f_e = eval(&expanded);
            if f_e < f_r {
                vertices[n] = expanded;
                values[n] = f_e;
            } else {
                vertices[n] = reflected;
                values[n] = f_r;
            }
            continue;
        }
        if f_r < f_second {
            vertices[n] = reflected;
            values[n] = f_r;
            continue;
        }
        let (contracted, accept) = if f_r < f_worst {
            let c = lerp(&centroid, &reflected, CONTRACT);
            let f_c = eval(&c);
            let ok = f_c <= f_r;
            (Some((c, f_c)), ok)
        } else {
            let c = lerp(&centroid, &worst, CONTRACT);
            let f_c = eval(&c);
            let ok = f_c < f_worst;
            (Some((c, f_c)), ok)
        };
        if accept {
            let (c, f_c) = contracted.expect("contraction computed");
            vertices[n] = c;
            values[n] = f_c;
            continue;
        }
        let best = vertices[0].clone();
        for i in 1..=n {
            vertices[i] = lerp(&best, &vertices[i], SHRINK);
            values[i] = eval(&vertices[i]);
        }
    }

    SimplexResult {
        x: vertices[0].clone(),
        value: values[0],
        iterations,
        evaluations,
        converged,
    }
}
