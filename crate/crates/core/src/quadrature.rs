//! Fixed-rule quadrature on uniform grids.

/// Uniform grid from `a` to `b` (either direction) with spacing at most `|step|`.
pub fn uniform_grid(a: f64, b: f64, step: f64) -> Vec<f64> {
    let n = (((b - a).abs() / step.abs()).ceil() as usize).max(1);
    let h = (b - a) / n as f64;
    (0..=n).map(|i| if i == n { b } else { a + h * i as f64 }).collect()
}

/// Running trapezoid integral of sampled values over `grid`, starting at zero.
pub fn cumulative_trapezoid(grid: &[f64], values: &[f64]) -> Vec<f64> {
    debug_assert_eq!(grid.len(), values.len());
    let mut out = Vec::with_capacity(grid.len());
    let mut acc = 0.0;
    out.push(0.0);
    for i in 1..grid.len() {
        acc += 0.5 * (grid[i] - grid[i - 1]) * (values[i] + values[i - 1]);
        out.push(acc);
    }
    out
}

const GL_NODES: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];

/// Composite 5-point Gauss–Legendre rule; `panels` ≥ 1. Signed for `b < a`.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + h * (p as f64 + 0.5);
        let half = 0.5 * h;
        let mut acc = 0.0;
        for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            acc += w * f(mid + half * x);
        }
        total += half * acc;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_hits_both_ends() {
        let g = uniform_grid(0.0, 1.0, 0.3);
        assert_eq!(g.len(), 5);
        assert_eq!(*g.last().unwrap(), 1.0);
        let back = uniform_grid(2.0, 1.0, 0.5);
        assert_eq!(back, vec![2.0, 1.5, 1.0]);
    }

    #[test]
    fn trapezoid_exact_on_linear() {
        let g = uniform_grid(0.0, 2.0, 0.1);
        let v: Vec<f64> = g.iter().map(|x| 3.0 * x + 1.0).collect();
        let c = cumulative_trapezoid(&g, &v);
        assert!((c.last().unwrap() - 8.0).abs() < 1e-13);
    }

    #[test]
    fn trapezoid_second_order() {
        let err = |h: f64| {
            let g = uniform_grid(0.0, 1.0, h);
            let v: Vec<f64> = g.iter().map(|x| x.exp()).collect();
            (cumulative_trapezoid(&g, &v).last().unwrap() - (1f64.exp() - 1.0)).abs()
        };
        let ratio = err(0.01) / err(0.005);
        assert!((ratio - 4.0).abs() < 0.05, "{ratio}");
    }

    #[test]
    fn gauss_legendre_exact_to_degree_nine() {
        let v = gauss_legendre(|x| x.powi(9) + x.powi(4), 0.0, 1.0, 1);
        assert!((v - (0.1 + 0.2)).abs() < 1e-15);
        let back = gauss_legendre(|x| x * x, 1.0, 0.0, 3);
        assert!((back + 1.0 / 3.0).abs() < 1e-15);
    }
}
