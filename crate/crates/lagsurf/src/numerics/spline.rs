//! Piecewise cubic Hermite interpolation of small fixed-dimension states.

/// Cubic Hermite spline through knots (x_i, y_i, y'_i), D components.
#[derive(Clone, Debug)]
pub struct HermiteSpline<const D: usize> {
    xs: Vec<f64>,
    ys: Vec<[f64; D]>,
    dys: Vec<[f64; D]>,
}

impl<const D: usize> HermiteSpline<D> {
    pub fn new(xs: Vec<f64>, ys: Vec<[f64; D]>, dys: Vec<[f64; D]>) -> Self {
        assert!(xs.len() == ys.len() && ys.len() == dys.len());
        assert!(xs.len() >= 2, "need at least two knots");
        debug_assert!(xs.windows(2).all(|w| w[1] > w[0]), "knots must increase");
        Self { xs, ys, dys }
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    pub fn knots(&self) -> (&[f64], &[[f64; D]], &[[f64; D]]) {
        (&self.xs, &self.ys, &self.dys)
    }

    fn segment(&self, x: f64) -> usize {
        match self.xs.binary_search_by(|k| k.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.xs.len() - 2),
        }
    }

    /// Interpolated value at x (clamped extrapolation uses the boundary cubic).
    pub fn eval(&self, x: f64) -> [f64; D] {
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let u = (x - self.xs[i]) / h;
        let (h00, h10, h01, h11) = hermite_basis(u);
        let mut out = [0.0; D];
        for d in 0..D {
            out[d] = h00 * self.ys[i][d]
                + h10 * h * self.dys[i][d]
                + h01 * self.ys[i + 1][d]
                + h11 * h * self.dys[i + 1][d];
        }
        out
    }

    /// First derivative of the interpolant at x.
    pub fn eval_d1(&self, x: f64) -> [f64; D] {
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let u = (x - self.xs[i]) / h;
        let (d00, d10, d01, d11) = hermite_basis_d1(u);
        let mut out = [0.0; D];
        for d in 0..D {
            out[d] = (d00 * self.ys[i][d]
                + d10 * h * self.dys[i][d]
                + d01 * self.ys[i + 1][d]
                + d11 * h * self.dys[i + 1][d])
                / h;
        }
        out
    }
}

fn hermite_basis(u: f64) -> (f64, f64, f64, f64) {
    let u2 = u * u;
    let u3 = u2 * u;
    (
        2.0 * u3 - 3.0 * u2 + 1.0,
        u3 - 2.0 * u2 + u,
        -2.0 * u3 + 3.0 * u2,
        u3 - u2,
    )
}

fn hermite_basis_d1(u: f64) -> (f64, f64, f64, f64) {
    let u2 = u * u;
    (
        6.0 * u2 - 6.0 * u,
        3.0 * u2 - 4.0 * u + 1.0,
        -6.0 * u2 + 6.0 * u,
        3.0 * u2 - 2.0 * u,
    )
}
