//! Generating curves: planar curves, Legendrian curves of the 3-sphere and
//! Legendrian curves of the unit anti-de Sitter space, each evaluated as
//! value plus two derivatives. Backing stores are closed-form closures or
//! dense Hermite splines over ODE output.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::CumulativeIntegral;
use crate::report::{GridSpec, ResidualReport};

/// Real-valued coefficient function with two derivatives.
#[derive(Clone)]
pub struct RealFn(Arc<dyn Fn(f64) -> (f64, f64, f64) + Send + Sync>);

impl RealFn {
    pub fn new(f: impl Fn(f64) -> (f64, f64, f64) + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn constant(v: f64) -> Self {
        Self::new(move |_| (v, 0.0, 0.0))
    }

    pub fn eval(&self, s: f64) -> (f64, f64, f64) {
        (self.0)(s)
    }

    pub fn value(&self, s: f64) -> f64 {
        (self.0)(s).0
    }
}

/// Complex-valued coefficient function with two derivatives.
#[derive(Clone)]
pub struct CplxFn(Arc<dyn Fn(f64) -> (Complex64, Complex64, Complex64) + Send + Sync>);

impl CplxFn {
    pub fn new(f: impl Fn(f64) -> (Complex64, Complex64, Complex64) + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn constant(v: Complex64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self::new(move |_| (v, zero, zero))
    }

    /// a * e^{i w s}.
    pub fn rotating(a: Complex64, w: f64) -> Self {
        Self::new(move |s| {
            let e = Complex64::new(0.0, w * s).exp();
            let iw = Complex64::new(0.0, w);
            (a * e, a * iw * e, a * iw * iw * e)
        })
    }

    pub fn eval(&self, s: f64) -> (Complex64, Complex64, Complex64) {
        (self.0)(s)
    }

    pub fn value(&self, s: f64) -> Complex64 {
        (self.0)(s).0
    }
}

pub type PlanarJet = (Complex64, Complex64, Complex64);
pub type PairJet = ([Complex64; 2], [Complex64; 2], [Complex64; 2]);

/// Parametrized curve in C (or the plane R^2).
#[derive(Clone)]
pub struct CurvePlanar {
    eval: Arc<dyn Fn(f64) -> PlanarJet + Send + Sync>,
    pub domain: (f64, f64),
    pub arclength: bool,
}

impl CurvePlanar {
    pub fn from_fn(
        domain: (f64, f64),
        arclength: bool,
        f: impl Fn(f64) -> PlanarJet + Send + Sync + 'static,
    ) -> Self {
        Self {
            eval: Arc::new(f),
            domain,
            arclength,
        }
    }

    /// Circle of radius r about the origin, parametrized by arc length.
    pub fn circle(r: f64) -> Self {
        Self::from_fn((0.0, 2.0 * std::f64::consts::PI * r), true, move |s| {
            let e = Complex64::new(0.0, s / r).exp();
            let i = Complex64::new(0.0, 1.0);
            (r * e, i * e, -e / r)
        })
    }

    /// r(s) e^{i phi(s)} circle with angular speed w (not unit speed unless
    /// r*w = 1): value r e^{iws}.
    pub fn circle_angular(r: f64, w: f64, domain: (f64, f64)) -> Self {
        Self::from_fn(domain, (r * w - 1.0).abs() < 1e-15, move |s| {
            let e = Complex64::new(0.0, w * s).exp();
            let iw = Complex64::new(0.0, w);
            (r * e, r * iw * e, r * iw * iw * e)
        })
    }

    /// Straight line z0 + s*d (unit speed when |d| = 1).
    pub fn line(z0: Complex64, d: Complex64, domain: (f64, f64)) -> Self {
        let unit = (d.norm() - 1.0).abs() < 1e-14;
        Self::from_fn(domain, unit, move |s| {
            (z0 + s * d, d, Complex64::new(0.0, 0.0))
        })
    }

    pub fn jet(&self, s: f64) -> PlanarJet {
        (self.eval)(s)
    }

    pub fn value(&self, s: f64) -> Complex64 {
        (self.eval)(s).0
    }
}

/// Curve in the unit 3-sphere satisfying the Legendrian condition
/// <gamma', i gamma> = 0.
#[derive(Clone)]
pub struct CurveS3Legendrian {
    eval: Arc<dyn Fn(f64) -> PairJet + Send + Sync>,
    pub domain: (f64, f64),
    pub arclength: bool,
}

impl CurveS3Legendrian {
    pub fn from_fn(
        domain: (f64, f64),
        arclength: bool,
        f: impl Fn(f64) -> PairJet + Send + Sync + 'static,
    ) -> Self {
        Self {
            eval: Arc::new(f),
            domain,
            arclength,
        }
    }

    /// Real great circle (cos s, sin s).
    pub fn great_circle() -> Self {
        Self::from_fn((0.0, 2.0 * std::f64::consts::PI), true, |s| {
            let (c, sn) = (s.cos(), s.sin());
            (
                [Complex64::new(c, 0.0), Complex64::new(sn, 0.0)],
                [Complex64::new(-sn, 0.0), Complex64::new(c, 0.0)],
                [Complex64::new(-c, 0.0), Complex64::new(-sn, 0.0)],
            )
        })
    }

    /// Hopf great circle (e^{is}, e^{-is})/sqrt(2).
    pub fn hopf_great_circle() -> Self {
        let a = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_fn((0.0, 2.0 * std::f64::consts::PI), true, move |s| {
            let e1 = Complex64::new(0.0, s).exp() * a;
            let e2 = Complex64::new(0.0, -s).exp() * a;
            let i = Complex64::new(0.0, 1.0);
            ([e1, e2], [i * e1, -i * e2], [-e1, -e2])
        })
    }

    /// Torus curve (c e^{ias}, sqrt(1-c^2) e^{ibs}) with a, b chosen so the
    /// curve is Legendrian and unit speed: a = sqrt(1-c^2)/c,
    /// b = -c/sqrt(1-c^2). Requires 0 < c < 1.
    pub fn torus_curve(c: f64) -> Result<Self> {
        if !(0.0 < c && c < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "torus curve parameter c = {c} must lie in (0, 1)"
            )));
        }
        let d = (1.0 - c * c).sqrt();
        let a = d / c;
        let b = -c / d;
        Ok(Self::from_fn((0.0, 4.0 * std::f64::consts::PI), true, move |s| {
            let ia = Complex64::new(0.0, a);
            let ib = Complex64::new(0.0, b);
            let g1 = c * (ia * s).exp();
            let g2 = d * (ib * s).exp();
            ([g1, g2], [ia * g1, ib * g2], [ia * ia * g1, ib * ib * g2])
        }))
    }

    /// Constant point of S^3 (the degenerate Legendrian "curve").
    pub fn constant(g: [Complex64; 2]) -> Self {
        let zero = [Complex64::new(0.0, 0.0); 2];
        Self::from_fn((0.0, 1.0), false, move |_| (g, zero, zero))
    }

    /// Planar great circle rotated by a unit complex factor: (k+il)(cos s, sin s).
    pub fn rotated_great_circle(k: f64, l: f64) -> Result<Self> {
        if ((k * k + l * l) - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "rotated great circle needs k^2 + l^2 = 1, got {}",
                k * k + l * l
            )));
        }
        let u = Complex64::new(k, l);
        Ok(Self::from_fn((0.0, 2.0 * std::f64::consts::PI), true, move |s| {
            let (c, sn) = (s.cos(), s.sin());
            ([u * c, u * sn], [-u * sn, u * c], [-u * c, -u * sn])
        }))
    }

    pub fn jet(&self, s: f64) -> PairJet {
        (self.eval)(s)
    }

    pub fn value(&self, s: f64) -> [Complex64; 2] {
        (self.eval)(s).0
    }

    /// Legendrian angle beta_L = arg(g1 g2' - g2 g1').
    pub fn legendrian_angle(&self, s: f64) -> f64 {
        let (g, dg, _) = self.jet(s);
        (g[0] * dg[1] - g[1] * dg[0]).arg()
    }

    /// Curvature of a unit-speed Legendrian curve: <gamma'', i gamma'>.
    pub fn curvature(&self, s: f64) -> f64 {
        let (_, dg, ddg) = self.jet(s);
        let i = Complex64::new(0.0, 1.0);
        (ddg[0] * (i * dg[0]).conj() + ddg[1] * (i * dg[1]).conj()).re
    }
}

/// Curve in the unit anti-de Sitter space |a1|^2 - |a2|^2 = -1 satisfying the
/// Legendrian condition for the indefinite pairing.
#[derive(Clone)]
pub struct CurveAdSLegendrian {
    eval: Arc<dyn Fn(f64) -> PairJet + Send + Sync>,
    pub domain: (f64, f64),
    pub arclength: bool,
}

impl CurveAdSLegendrian {
    pub fn from_fn(
        domain: (f64, f64),
        arclength: bool,
        f: impl Fn(f64) -> PairJet + Send + Sync + 'static,
    ) -> Self {
        Self {
            eval: Arc::new(f),
            domain,
            arclength,
        }
    }

    /// The real hyperbola (sinh s, cosh s), unit speed for the indefinite metric.
    pub fn hyperbola(domain: (f64, f64)) -> Self {
        Self::from_fn(domain, true, |s| {
            let (sh, ch) = (s.sinh(), s.cosh());
            (
                [Complex64::new(sh, 0.0), Complex64::new(ch, 0.0)],
                [Complex64::new(ch, 0.0), Complex64::new(sh, 0.0)],
                [Complex64::new(sh, 0.0), Complex64::new(ch, 0.0)],
            )
        })
    }

    /// AdS analogue of the torus curve: (rho e^{ias}, sqrt(1+rho^2) e^{ibs})
    /// with a = sqrt(1+rho^2)/rho, b = rho/sqrt(1+rho^2). Requires rho > 0.
    pub fn torus_curve(rho: f64) -> Result<Self> {
        if rho <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "AdS torus curve parameter rho = {rho} must be positive"
            )));
        }
        let d = (1.0 + rho * rho).sqrt();
        let a = d / rho;
        let b = rho / d;
        Ok(Self::from_fn((0.0, 4.0 * std::f64::consts::PI), true, move |s| {
            let ia = Complex64::new(0.0, a);
            let ib = Complex64::new(0.0, b);
            let a1 = rho * (ia * s).exp();
            let a2 = d * (ib * s).exp();
            ([a1, a2], [ia * a1, ib * a2], [ia * ia * a1, ib * ib * a2])
        }))
    }

    pub fn jet(&self, s: f64) -> PairJet {
        (self.eval)(s)
    }

    pub fn value(&self, s: f64) -> [Complex64; 2] {
        (self.eval)(s).0
    }

    /// Curvature of a unit-speed Legendrian AdS curve: <alpha'', i alpha'>
    /// with the indefinite pairing Re(u1 conj(v1)) - Re(u2 conj(v2)).
    pub fn curvature(&self, s: f64) -> f64 {
        let (_, da, dda) = self.jet(s);
        let i = Complex64::new(0.0, 1.0);
        (dda[0] * (i * da[0]).conj()).re - (dda[1] * (i * da[1]).conj()).re
    }
}

fn pair_dot(u: &[Complex64; 2], v: &[Complex64; 2]) -> f64 {
    (u[0] * v[0].conj() + u[1] * v[1].conj()).re
}

fn check_finite(vals: &[Complex64], s: f64) -> Result<()> {
    for v in vals {
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFiniteEval(s));
        }
    }
    Ok(())
}

/// Curves that carry pointwise constraints which can be swept numerically.
pub trait ConstrainedCurve {
    /// Maximum violation of every subtype invariant over `n_samples` uniform
    /// parameter values.
    fn constraint_residual(&self, n_samples: usize) -> Result<ResidualReport>;
}

fn sample_grid(domain: (f64, f64), n: usize) -> GridSpec {
    GridSpec::new(n, 1, domain, (0.0, 0.0))
}

impl ConstrainedCurve for CurvePlanar {
    fn constraint_residual(&self, n_samples: usize) -> Result<ResidualReport> {
        validate_samples(self.domain, n_samples)?;
        let grid = sample_grid(self.domain, n_samples);
        let mut samples = Vec::with_capacity(n_samples);
        for s in grid.s_nodes() {
            let (v, d1, d2) = self.jet(s);
            check_finite(&[v, d1, d2], s)?;
            let viol = if self.arclength {
                (d1.norm() - 1.0).abs()
            } else {
                0.0
            };
            samples.push(((s, 0.0), viol));
        }
        Ok(ResidualReport::from_samples(
            "planar_curve_constraints",
            grid,
            samples,
            0,
        ))
    }
}

impl ConstrainedCurve for CurveS3Legendrian {
    fn constraint_residual(&self, n_samples: usize) -> Result<ResidualReport> {
        validate_samples(self.domain, n_samples)?;
        let grid = sample_grid(self.domain, n_samples);
        let mut samples = Vec::with_capacity(n_samples);
        for s in grid.s_nodes() {
            let (g, dg, ddg) = self.jet(s);
            check_finite(&[g[0], g[1], dg[0], dg[1], ddg[0], ddg[1]], s)?;
            let norm_defect = (g[0].norm_sqr() + g[1].norm_sqr() - 1.0).abs();
            let ig = [Complex64::new(0.0, 1.0) * g[0], Complex64::new(0.0, 1.0) * g[1]];
            let legendrian_defect = pair_dot(&dg, &ig).abs();
            let mut viol = norm_defect.max(legendrian_defect);
            if self.arclength {
                viol = viol.max((pair_dot(&dg, &dg) - 1.0).abs());
            }
            samples.push(((s, 0.0), viol));
        }
        Ok(ResidualReport::from_samples(
            "s3_legendrian_constraints",
            grid,
            samples,
            0,
        ))
    }
}

impl ConstrainedCurve for CurveAdSLegendrian {
    fn constraint_residual(&self, n_samples: usize) -> Result<ResidualReport> {
        validate_samples(self.domain, n_samples)?;
        let grid = sample_grid(self.domain, n_samples);
        let mut samples = Vec::with_capacity(n_samples);
        for s in grid.s_nodes() {
            let (a, da, dda) = self.jet(s);
            check_finite(&[a[0], a[1], da[0], da[1], dda[0], dda[1]], s)?;
            let i = Complex64::new(0.0, 1.0);
            let norm_defect = (a[0].norm_sqr() - a[1].norm_sqr() + 1.0).abs();
            let legendrian_defect =
                ((da[0] * (i * a[0]).conj()).re - (da[1] * (i * a[1]).conj()).re).abs();
            let mut viol = norm_defect.max(legendrian_defect);
            if self.arclength {
                let speed_defect = (da[0].norm_sqr() - da[1].norm_sqr() - 1.0).abs();
                let identity_defect = (a[0].norm() - da[1].norm()).abs();
                viol = viol.max(speed_defect).max(identity_defect);
            }
            samples.push(((s, 0.0), viol));
        }
        Ok(ResidualReport::from_samples(
            "ads_legendrian_constraints",
            grid,
            samples,
            0,
        ))
    }
}

fn validate_samples(domain: (f64, f64), n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 samples, got {n}"
        )));
    }
    if !(domain.1 > domain.0) {
        return Err(Error::InvalidParameter(format!(
            "degenerate curve domain [{}, {}]",
            domain.0, domain.1
        )));
    }
    Ok(())
}

/// Free-function form of [`ConstrainedCurve::constraint_residual`].
pub fn curve_constraint_residual<C: ConstrainedCurve>(
    curve: &C,
    n_samples: usize,
) -> Result<ResidualReport> {
    curve.constraint_residual(n_samples)
}

/// Reparametrize a planar curve by arc length. The image is unchanged; the
/// returned curve reports |d1| = 1 within `tol` and carries the arclength flag.
pub fn arclength_reparametrize(curve: &CurvePlanar, tol: f64) -> Result<CurvePlanar> {
    let (a, b) = curve.domain;
    validate_samples((a, b), 2)?;
    // Guard against vanishing speed.
    let mut min_speed = f64::INFINITY;
    let probe = GridSpec::new(257, 1, (a, b), (0.0, 0.0));
    for s in probe.s_nodes() {
        let (_, d1, _) = curve.jet(s);
        if !(d1.re.is_finite() && d1.im.is_finite()) {
            return Err(Error::NonFiniteEval(s));
        }
        let sp = d1.norm();
        if sp < min_speed {
            min_speed = sp;
        }
        if sp < 1e-10 {
            return Err(Error::DegenerateCurve { s, speed: sp });
        }
    }
    let inner = curve.clone();
    let speed = move |s: f64| inner.jet(s).1.norm();
    let length_from_a = CumulativeIntegral::new(
        Arc::new({
            let c = curve.clone();
            move |s: f64| c.jet(s).1.norm()
        }),
        a,
        (a, b),
        tol.min(1e-10) * 1e-2,
    )?;
    let total = length_from_a.eval(b);
    let base = curve.clone();
    let eval = move |ell: f64| {
        // Invert L(s) = ell by Newton with bisection safeguarding.
        let (mut lo, mut hi) = (a, b);
        let mut s = a + (b - a) * (ell / total).clamp(0.0, 1.0);
        for _ in 0..60 {
            let val = length_from_a.eval(s) - ell;
            if val > 0.0 {
                hi = s;
            } else {
                lo = s;
            }
            let ds = val / speed(s);
            let next = s - ds;
            let next = if next <= lo || next >= hi {
                0.5 * (lo + hi)
            } else {
                next
            };
            if (next - s).abs() < 1e-15 * (1.0 + s.abs()) {
                s = next;
                break;
            }
            s = next;
        }
        let (v, d1, d2) = base.jet(s);
        let sp = d1.norm();
        let t = d1 / sp;
        // Chain rule for the second derivative in the arclength parameter.
        let dsp = (d2 * d1.conj()).re / sp;
        let dd = d2 / (sp * sp) - d1 * (dsp / (sp * sp * sp));
        (v, t, dd)
    };
    Ok(CurvePlanar::from_fn((0.0, total), true, eval))
}
