//! Composite 16-point Gauss-Legendre quadrature with adaptive panel
//! bisection, plus a cumulative-integral cache for translation terms.

use std::sync::Arc;

use once_cell::sync::Lazy;

use crate::error::{Error, Result};

/// Values that can be accumulated by the quadrature routines.
pub trait VectorValue: Clone + Send + Sync {
    fn zero() -> Self;
    fn add_scaled(&mut self, w: f64, v: &Self);
    fn norm(&self) -> f64;
    fn sub(&self, other: &Self) -> Self;
    fn is_finite(&self) -> bool;
}

impl VectorValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add_scaled(&mut self, w: f64, v: &Self) {
        *self += w * v;
    }
    fn norm(&self) -> f64 {
        self.abs()
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl VectorValue for num_complex::Complex64 {
    fn zero() -> Self {
        num_complex::Complex64::new(0.0, 0.0)
    }
    fn add_scaled(&mut self, w: f64, v: &Self) {
        *self += w * v;
    }
    fn norm(&self) -> f64 {
        num_complex::Complex64::norm(*self)
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// found by Newton iteration on the Legendre polynomial.
fn legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-based initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n(x) and P_n'(x) by the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

static GL16_RULE: Lazy<(Vec<f64>, Vec<f64>)> = Lazy::new(|| legendre_rule(16));

/// Single 16-point Gauss-Legendre panel over [a, b].
pub fn gl16<T, F>(f: &F, a: f64, b: f64) -> T
where
    T: VectorValue,
    F: Fn(f64) -> T + ?Sized,
{
    let (nodes, weights) = (&GL16_RULE.0, &GL16_RULE.1);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = T::zero();
    for (x, w) in nodes.iter().zip(weights.iter()) {
        let v = f(mid + half * x);
        acc.add_scaled(w * half, &v);
    }
    acc
}

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    err: f64,
    magnitude: f64,
}

fn make_segment<T, F>(f: &F, a: f64, b: f64) -> Result<Segment<T>>
where
    T: VectorValue,
    F: Fn(f64) -> T + ?Sized,
{
    let whole: T = gl16(f, a, b);
    let mid = 0.5 * (a + b);
    let left = gl16(f, a, mid);
    let right = gl16(f, mid, b);
    let mut value = left.clone();
    value.add_scaled(1.0, &right);
    if !value.is_finite() {
        return Err(Error::QuadratureFailure { a, b });
    }
    let magnitude = left.norm() + right.norm();
    let mut err = value.sub(&whole).norm();
    // Disagreement at the level of a few ulps of the local magnitude is
    // roundoff scatter, not truncation error; splitting cannot reduce it.
    if err < 5e-15 * magnitude {
        err = 0.0;
    }
    Ok(Segment {
        a,
        b,
        value,
        err,
        magnitude,
    })
}

/// Adaptive composite Gauss-Legendre integration to absolute tolerance `tol`,
/// globally refined: the segment with the largest error estimate is split
/// until the total estimate drops below max(tol, roundoff floor).
pub fn integrate_adaptive<T, F>(f: &F, a: f64, b: f64, tol: f64) -> Result<T>
where
    T: VectorValue,
    F: Fn(f64) -> T + ?Sized,
{
    if a == b {
        return Ok(T::zero());
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut segments = vec![make_segment(f, lo, hi)?];
    let max_splits = 20_000;
    let mut best_err = f64::INFINITY;
    let mut stalled = 0usize;
    for _ in 0..max_splits {
        let total_err: f64 = segments.iter().map(|s| s.err).sum();
        let total_mag: f64 = segments.iter().map(|s| s.magnitude).sum();
        // Roundoff floor: a few ulps of the total variation.
        if total_err <= tol.max(2e-14 * total_mag) {
            break;
        }
        // Once refinement stops reducing the estimate, the remainder is
        // roundoff scatter spread over many segments.
        if total_err < 0.999 * best_err {
            best_err = total_err;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled > 200 {
                break;
            }
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.partial_cmp(&y.1.err).unwrap())
            .map(|(i, s)| (i, s.err))
            .unwrap();
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid - seg.a < 1e-15 * (1.0 + mid.abs()) {
            // Cannot subdivide further in f64; keep the segment as is.
            let mut kept = seg;
            kept.err = 0.0;
            segments.push(kept);
            continue;
        }
        segments.push(make_segment(f, seg.a, mid)?);
        segments.push(make_segment(f, mid, seg.b)?);
    }
    let total_err: f64 = segments.iter().map(|s| s.err).sum();
    let total_mag: f64 = segments.iter().map(|s| s.magnitude).sum();
    if total_err > 1e3 * tol.max(2e-14 * total_mag) {
        return Err(Error::QuadratureFailure { a, b });
    }
    let mut sum = T::zero();
    for s in &segments {
        sum.add_scaled(sign, &s.value);
    }
    Ok(sum)
}

type ArcFn<T> = Arc<dyn Fn(f64) -> T + Send + Sync>;

/// Cumulative integral s -> int_{s0}^{s} f(u) du, cached at uniform knots so
/// repeated evaluations over a grid cost one short tail panel each.
///
/// Immutable after construction; safe to share across threads.
#[derive(Clone)]
pub struct CumulativeIntegral<T: VectorValue> {
    f: ArcFn<T>,
    s0: f64,
    knots: Vec<f64>,
    values: Vec<T>,
    tail_tol: f64,
}

impl<T: VectorValue + 'static> CumulativeIntegral<T> {
    pub fn new(f: ArcFn<T>, s0: f64, domain: (f64, f64), tol: f64) -> Result<Self> {
        let (a, b) = domain;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidParameter(format!(
                "cumulative integral domain [{a}, {b}] is degenerate"
            )));
        }
        let s0 = s0.clamp(a, b);
        let span = b - a;
        let n = ((span / 0.05).ceil() as usize).clamp(64, 16384);
        let h = span / n as f64;
        let panel_tol = (tol / n as f64).max(1e-14);
        // Knot grid anchored so that s0 is an exact knot.
        let i0 = ((s0 - a) / h).round() as usize;
        let mut knots = Vec::with_capacity(n + 2);
        for i in 0..=n {
            knots.push(a + i as f64 * span / n as f64);
        }
        let i0 = i0.min(n);
        knots[i0] = s0;
        let mut values: Vec<T> = vec![T::zero(); knots.len()];
        // Prefix sums forward and backward from s0.
        for i in i0..n {
            let inc = integrate_adaptive(f.as_ref(), knots[i], knots[i + 1], panel_tol)?;
            let mut v = values[i].clone();
            v.add_scaled(1.0, &inc);
            values[i + 1] = v;
        }
        for i in (0..i0).rev() {
            let inc = integrate_adaptive(f.as_ref(), knots[i], knots[i + 1], panel_tol)?;
            let mut v = values[i + 1].clone();
            v.add_scaled(-1.0, &inc);
            values[i] = v;
        }
        for v in &values {
            if !v.is_finite() {
                return Err(Error::QuadratureFailure { a, b });
            }
        }
        Ok(Self {
            f,
            s0,
            knots,
            values,
            tail_tol: panel_tol,
        })
    }

    pub fn base_point(&self) -> f64 {
        self.s0
    }

    /// Value of the cumulative integral at `s` (clamped to the domain ends).
    pub fn eval(&self, s: f64) -> T {
        let s = s.clamp(self.knots[0], *self.knots.last().unwrap());
        let idx = match self
            .knots
            .binary_search_by(|k| k.partial_cmp(&s).unwrap())
        {
            Ok(i) => return self.values[i].clone(),
            Err(i) => i.saturating_sub(1),
        };
        let tail = integrate_adaptive(self.f.as_ref(), self.knots[idx], s, self.tail_tol)
            .unwrap_or_else(|_| gl16(self.f.as_ref(), self.knots[idx], s));
        let mut v = self.values[idx].clone();
        v.add_scaled(1.0, &tail);
        v
    }
}
