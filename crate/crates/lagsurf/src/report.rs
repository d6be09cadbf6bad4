//! Residual reports and evaluation grids.

use serde::Serialize;

/// Uniform evaluation grid in the (s, t) parameter rectangle.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GridSpec {
    pub n_s: usize,
    pub n_t: usize,
    pub s_range: (f64, f64),
    pub t_range: (f64, f64),
}

impl GridSpec {
    pub fn new(n_s: usize, n_t: usize, s_range: (f64, f64), t_range: (f64, f64)) -> Self {
        Self {
            n_s,
            n_t,
            s_range,
            t_range,
        }
    }

    /// s nodes, endpoints included.
    pub fn s_nodes(&self) -> Vec<f64> {
        linspace(self.s_range.0, self.s_range.1, self.n_s, true)
    }

    /// t nodes; for a periodic direction the right endpoint is excluded so
    /// wrap-around stencils see a uniform step.
    pub fn t_nodes(&self, periodic: bool) -> Vec<f64> {
        linspace(self.t_range.0, self.t_range.1, self.n_t, !periodic)
    }

    pub fn s_step(&self) -> f64 {
        (self.s_range.1 - self.s_range.0) / (self.n_s.max(2) - 1) as f64
    }

    pub fn t_step(&self, periodic: bool) -> f64 {
        if periodic {
            (self.t_range.1 - self.t_range.0) / self.n_t as f64
        } else {
            (self.t_range.1 - self.t_range.0) / (self.n_t.max(2) - 1) as f64
        }
    }
}

fn linspace(a: f64, b: f64, n: usize, inclusive: bool) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![a];
    }
    let div = if inclusive { (n - 1) as f64 } else { n as f64 };
    (0..n).map(|i| a + (b - a) * i as f64 / div).collect()
}

/// Summary of a pointwise |residual| sweep over a grid.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    pub name: String,
    pub grid: GridSpec,
    pub max_abs: f64,
    pub mean_abs: f64,
    pub argmax: (f64, f64),
    /// Number of grid nodes excluded as degenerate.
    pub excluded: usize,
}

impl ResidualReport {
    /// Reduce ((s, t), |value|) samples. Panics if no samples survive.
    pub fn from_samples<I>(name: impl Into<String>, grid: GridSpec, samples: I, excluded: usize) -> Self
    where
        I: IntoIterator<Item = ((f64, f64), f64)>,
    {
        let mut max_abs = -1.0;
        let mut argmax = (f64::NAN, f64::NAN);
        let mut sum = 0.0;
        let mut count = 0usize;
        for ((s, t), v) in samples {
            let v = v.abs();
            sum += v;
            count += 1;
            if v > max_abs {
                max_abs = v;
                argmax = (s, t);
            }
        }
        assert!(count > 0, "residual sweep produced no samples");
        Self {
            name: name.into(),
            grid,
            max_abs,
            mean_abs: sum / count as f64,
            argmax,
            excluded,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_orders_max_above_mean() {
        let grid = GridSpec::new(2, 2, (0.0, 1.0), (0.0, 1.0));
        let samples = vec![((0.0, 0.0), 1.0), ((1.0, 0.0), -3.0), ((0.0, 1.0), 0.5)];
        let r = ResidualReport::from_samples("demo", grid, samples, 1);
        assert_eq!(r.max_abs, 3.0);
        assert_eq!(r.argmax, (1.0, 0.0));
        assert!(r.max_abs >= r.mean_abs && r.mean_abs >= 0.0);
        assert_eq!(r.excluded, 1);
    }

    #[test]
    fn periodic_t_nodes_exclude_endpoint() {
        let grid = GridSpec::new(4, 4, (0.0, 1.0), (0.0, 1.0));
        let t = grid.t_nodes(true);
        assert_eq!(t.len(), 4);
        assert!((t[3] - 0.75).abs() < 1e-15);
        let t = grid.t_nodes(false);
        assert!((t[3] - 1.0).abs() < 1e-15);
    }
}
