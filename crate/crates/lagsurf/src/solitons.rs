//! Self-similar (mean-curvature-flow soliton) machinery: the pointwise
//! residual |H + lambda X^perp|, planar curves integrated from curvature
//! laws, product builders, the product-of-Legendrian mean-curvature oracle
//! and the lambda-scan obstruction certificates.
//!
//! Conventions. The surface residual uses the half-trace mean curvature, so
//! a circle of radius r with the centered profile law is a shrinker at
//! lambda = 1/r^2 while the standalone curve law k + lambda <X, N> = 0 puts
//! the same circle at the curve-level lambda = 1/r^2 as well; for a product
//! S^1(r) x Gamma the curve-level lambda is twice the surface lambda.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::curve::{ConstrainedCurve, CurveAdSLegendrian, CurvePlanar, CurveS3Legendrian};
use crate::diffgeo::{first_fundamental_form, mean_curvature, normal_part};
use crate::error::{Error, Result};
use crate::immersion::{CcProduct, ImmersionSpec, ProductCircleCurve};
use crate::numerics::{integrate, integrate_until, EventDirection, OdeOptions, Trajectory};
use crate::point::PointC2;
use crate::report::{GridSpec, ResidualReport};

/// Shrinker (lambda > 0) or expander (lambda < 0) scale.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct SolitonParams {
    pub lambda: f64,
}

impl SolitonParams {
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda == 0.0 || !lambda.is_finite() {
            return Err(Error::InvalidParameter(
                "soliton scale lambda must be finite and nonzero".into(),
            ));
        }
        Ok(Self { lambda })
    }
}

/// Pointwise |H + lambda X^perp| over the grid. Degenerate metric nodes are
/// excluded and counted.
pub fn self_similar_residual(
    spec: &ImmersionSpec,
    params: &SolitonParams,
    grid: &GridSpec,
) -> Result<ResidualReport> {
    let periodic = spec.periodic_t();
    let s_nodes = grid.s_nodes();
    let t_nodes = grid.t_nodes(periodic);
    let lambda = params.lambda;
    let rows: Vec<(Vec<((f64, f64), f64)>, usize)> = s_nodes
        .par_iter()
        .map(|&s| {
            let mut samples = Vec::with_capacity(t_nodes.len());
            let mut excluded = 0usize;
            for &t in &t_nodes {
                let jet = spec.jet(s, t)?;
                let m = first_fundamental_form(&jet);
                if m.is_degenerate() {
                    excluded += 1;
                    continue;
                }
                let h = mean_curvature(&jet, &m)?;
                let xperp = normal_part(&jet.x, &jet, &m);
                samples.push(((s, t), (h + xperp.scale(lambda)).norm()));
            }
            Ok((samples, excluded))
        })
        .collect::<Result<Vec<_>>>()?;
    let excluded: usize = rows.iter().map(|(_, e)| e).sum();
    Ok(ResidualReport::from_samples(
        format!("self_similar(lambda={lambda})"),
        *grid,
        rows.into_iter().flat_map(|(s, _)| s),
        excluded,
    ))
}

/// Curvature prescription k = law(position, unit tangent, normal), with the
/// normal convention N = i * tangent.
#[derive(Clone)]
pub struct CurvatureLaw(Arc<dyn Fn(Complex64, Complex64, Complex64) -> f64 + Send + Sync>);

/// Mean curvature normalization for the centered profile law.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceConvention {
    /// H is the average of the principal curvatures (the convention used by
    /// the surface residual in this crate).
    HalfTrace,
    /// H is the sum of the principal curvatures.
    FullTrace,
}

impl CurvatureLaw {
    pub fn new(f: impl Fn(Complex64, Complex64, Complex64) -> f64 + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn eval(&self, position: Complex64, tangent: Complex64, normal: Complex64) -> f64 {
        (self.0)(position, tangent, normal)
    }

    /// Standalone planar shrinker law k = -lambda <X, N>; the circle of
    /// radius r solves it with lambda = 1/r^2.
    pub fn curve_shrinker(lambda: f64) -> Self {
        Self::new(move |x, _t, n| -lambda * dot(x, n))
    }

    /// Profile law of the centered circle-foliated surfaces,
    /// k = <X, N> (1/|X|^2 - 2 lambda) under the half-trace convention
    /// (1/|X|^2 - lambda under full trace). The circle of radius r solves the
    /// half-trace form with lambda = 1/r^2, matching the surface residual.
    pub fn centered_profile(lambda: f64, convention: TraceConvention) -> Self {
        let factor = match convention {
            TraceConvention::HalfTrace => 2.0,
            TraceConvention::FullTrace => 1.0,
        };
        Self::new(move |x, _t, n| dot(x, n) * (1.0 / x.norm_sqr() - factor * lambda))
    }
}

fn dot(a: Complex64, b: Complex64) -> f64 {
    (a * b.conj()).re
}

/// Integrate gamma' = e^{i theta}, theta' = k(gamma, gamma', i gamma') from
/// the given position and tangent angle. The result is unit speed by
/// construction, with d2 obtained from the law itself.
pub fn planar_curve_from_curvature_law(
    law: &CurvatureLaw,
    initial_position: Complex64,
    initial_angle: f64,
    s_range: (f64, f64),
    tol: f64,
) -> Result<CurvePlanar> {
    let (s_lo, s_hi) = s_range;
    if !(s_hi > s_lo) || s_lo != 0.0 {
        return Err(Error::InvalidParameter(
            "curvature-law integration expects s_range = (0, L) with L > 0".into(),
        ));
    }
    let rhs_law = law.clone();
    let rhs = move |_s: f64, y: &[f64; 3]| -> [f64; 3] {
        let pos = Complex64::new(y[0], y[1]);
        let tan = Complex64::new(0.0, y[2]).exp();
        let k = rhs_law.eval(pos, tan, Complex64::new(0.0, 1.0) * tan);
        [tan.re, tan.im, k]
    };
    let opts = OdeOptions {
        abs_tol: tol,
        rel_tol: tol,
        ..OdeOptions::default()
    };
    let y0 = [initial_position.re, initial_position.im, initial_angle];
    // Guard against blow-up or an origin crossing for centered laws.
    let k0 = rhs(0.0, &y0)[2];
    if !k0.is_finite() {
        return Err(Error::OdeTruncated {
            s: 0.0,
            reason: "curvature law non-finite at the initial point".into(),
        });
    }
    let traj = integrate(&rhs, s_lo, y0, s_hi, &opts).map_err(|e| match e {
        Error::OdeTruncated { s, reason } => Error::OdeTruncated {
            s,
            reason: format!("curvature blow-up or origin crossing: {reason}"),
        },
        other => other,
    })?;
    Ok(curve_from_cartesian_trajectory(traj, law.clone()))
}

fn curve_from_cartesian_trajectory(traj: Trajectory<3>, law: CurvatureLaw) -> CurvePlanar {
    let (a, b) = traj.spline.domain();
    CurvePlanar::from_fn((a, b), true, move |s| {
        let y = traj.eval(s);
        let pos = Complex64::new(y[0], y[1]);
        let tan = Complex64::new(0.0, y[2]).exp();
        let normal = Complex64::new(0.0, 1.0) * tan;
        let k = law.eval(pos, tan, normal);
        (pos, tan, Complex64::new(0.0, k) * tan)
    })
}

/// X(s, t) = (r e^{it}, Gamma(s)): the Cartesian product of a circle with a
/// planar curve, Lagrangian for any Gamma.
pub fn make_product_circle_curve(r: f64, curve: CurvePlanar) -> Result<ImmersionSpec> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter("product radius must be positive".into()));
    }
    curve.constraint_residual(64)?;
    Ok(ImmersionSpec::ProductCircleCurve(ProductCircleCurve {
        r,
        curve,
    }))
}

const CC_CONSTRAINT_TOL: f64 = 1e-6;

/// X(s, t) = (a1(s) g1(t), a2(s) g2(t)) for unit-speed Legendrian curves; the
/// immersion is conformal and Lagrangian.
pub fn cc_product_immersion(
    alpha: CurveAdSLegendrian,
    gamma: CurveS3Legendrian,
) -> Result<ImmersionSpec> {
    if !alpha.arclength || !gamma.arclength {
        return Err(Error::InvalidParameter(
            "the product-of-Legendrian immersion needs unit-speed curves".into(),
        ));
    }
    for (name, rep) in [
        ("AdS factor", alpha.constraint_residual(129)?),
        ("S^3 factor", gamma.constraint_residual(129)?),
    ] {
        if rep.max_abs > CC_CONSTRAINT_TOL {
            return Err(Error::ConstraintViolation {
                what: if name == "AdS factor" {
                    "AdS Legendrian constraints"
                } else {
                    "S^3 Legendrian constraints"
                },
                residual: rep.max_abs,
                tol: CC_CONSTRAINT_TOL,
            });
        }
    }
    let spec = ImmersionSpec::CcProduct(CcProduct { alpha, gamma });
    // Conformality: |E - G| and |F| stay small on a probe grid.
    let grid = spec.default_grid(17, 17);
    for s in grid.s_nodes() {
        for t in grid.t_nodes(false) {
            let jet = spec.jet(s, t)?;
            let m = first_fundamental_form(&jet);
            let scale = (m.e + m.g).max(1.0);
            if (m.e - m.g).abs() > 1e-8 * scale || m.f.abs() > 1e-8 * scale {
                return Err(Error::ConstraintViolation {
                    what: "conformality of the product immersion",
                    residual: (m.e - m.g).abs().max(m.f.abs()),
                    tol: 1e-8,
                });
            }
        }
    }
    Ok(spec)
}

/// Closed-form mean curvature of the product immersion, from the Frenet
/// relations alpha'' = alpha + k_alpha i alpha' and gamma'' = -gamma +
/// k_gamma i gamma': X_ss + X_tt = k_alpha J X_s + k_gamma J X_t, so with
/// conformal factor e^{2u} = E = G the half-trace mean curvature is
/// H = e^{-2u} (k_alpha J X_s + k_gamma J X_t) / 2.
pub fn cc_mean_curvature_oracle(
    alpha: &CurveAdSLegendrian,
    gamma: &CurveS3Legendrian,
    s: f64,
    t: f64,
) -> Result<PointC2> {
    let spec = ImmersionSpec::CcProduct(CcProduct {
        alpha: alpha.clone(),
        gamma: gamma.clone(),
    });
    let jet = spec.jet(s, t)?;
    let m = first_fundamental_form(&jet);
    let k_alpha = alpha.curvature(s);
    let k_gamma = gamma.curvature(t);
    Ok((jet.xs.j().scale(k_alpha) + jet.xt.j().scale(k_gamma)).scale(0.5 / m.e))
}

/// Result of a lambda scan: one residual report per lambda plus the
/// min-over-lambda of the max residual (the non-existence certificate value).
#[derive(Debug, Clone, serde::Serialize)]
pub struct ObstructionScan {
    pub per_lambda: Vec<(f64, ResidualReport)>,
    pub min_max: f64,
}

/// Sweep the self-similar residual over a list of lambda values.
pub fn soliton_obstruction_scan(
    spec: &ImmersionSpec,
    lambdas: &[f64],
    grid: &GridSpec,
) -> Result<ObstructionScan> {
    if lambdas.is_empty() {
        return Err(Error::InvalidParameter("empty lambda list".into()));
    }
    let mut per_lambda = Vec::with_capacity(lambdas.len());
    let mut min_max = f64::INFINITY;
    for &l in lambdas {
        let rep = self_similar_residual(spec, &SolitonParams::new(l)?, grid)?;
        min_max = min_max.min(rep.max_abs);
        per_lambda.push((l, rep));
    }
    Ok(ObstructionScan { per_lambda, min_max })
}

/// A closed profile obtained by shooting on the centered law.
pub struct ShotProfile {
    pub curve: CurvePlanar,
    /// Starting leaf radius found by bisection.
    pub r0: f64,
    /// Arclength of one radial period.
    pub period: f64,
    /// Angle swept per radial period (2 pi p / q at closure).
    pub rotation_per_period: f64,
    pub closure_gap: f64,
    pub curvature_maxima: usize,
    pub winding: i32,
}

/// Polar form of the centered half-trace profile law with parameter lambda:
/// r' = cos a, a' = -2 sin a (1/r - lambda r), phi' = sin a / r.
fn centered_polar_rhs(lambda: f64) -> impl Fn(f64, &[f64; 3]) -> [f64; 3] + Clone {
    move |_s: f64, y: &[f64; 3]| {
        let (r, a) = (y[0], y[1]);
        [
            a.cos(),
            -2.0 * a.sin() * (1.0 / r - lambda * r),
            a.sin() / r,
        ]
    }
}

/// Rotation per radial period for an orbit of the centered profile system
/// started at (r0, pi/2). Returns (period, delta_phi).
fn centered_orbit_rotation(lambda: f64, r0: f64, opts: &OdeOptions) -> Result<(f64, f64)> {
    let rhs = centered_polar_rhs(lambda);
    let y0 = [r0, std::f64::consts::FRAC_PI_2, 0.0];
    // One full loop: alpha returns to pi/2 falling (it leaves falling at the
    // inner radius and crosses rising at the outer radius mid-loop).
    let (traj, t_event) = integrate_until(
        &rhs,
        0.0,
        y0,
        &|_s, y: &[f64; 3]| y[1] - std::f64::consts::FRAC_PI_2,
        EventDirection::Falling,
        0.05,
        1.0e4,
        opts,
    )?;
    Ok((t_event, traj.y_end[2]))
}

/// Shooting for a closed centered self-similar profile with winding p and q
/// curvature maxima: bisection on the initial radius until the rotation per
/// period is 2 pi p / q, then integration over q periods.
pub fn shoot_centered_profile(p: u32, q: u32, lambda: f64) -> Result<ShotProfile> {
    if p == 0 || q == 0 || gcd(p, q) != 1 {
        return Err(Error::InvalidParameter(format!(
            "(p, q) = ({p}, {q}) must be positive and coprime"
        )));
    }
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(
            "shrinker profiles need lambda > 0".into(),
        ));
    }
    let ratio = p as f64 / q as f64;
    if !(0.25 < ratio && ratio < 0.5) {
        return Err(Error::InvalidParameter(format!(
            "rotation number p/q = {ratio} is outside (1/4, 1/2)"
        )));
    }
    let target = 2.0 * std::f64::consts::PI * ratio;
    let r_star = 1.0 / lambda.sqrt();
    let opts = OdeOptions::default();
    // Rotation per period is pi at the circle limit and decreases toward
    // pi/2 as the inner radius shrinks; bracket and bisect.
    let eval = |r0: f64| -> Result<f64> {
        let (_, dphi) = centered_orbit_rotation(lambda, r0, &opts)?;
        Ok(dphi)
    };
    let mut lo = 0.05 * r_star;
    let hi = 0.995 * r_star;
    let f_hi = eval(hi)? - target;
    let mut f_lo = eval(lo)? - target;
    if f_lo * f_hi > 0.0 {
        // Extremely eccentric orbits: push the inner bracket down.
        lo = 0.005 * r_star;
        f_lo = eval(lo)? - target;
        if f_lo * f_hi > 0.0 {
            return Err(Error::BracketFailure { a: lo, b: hi });
        }
    }
    let mut a = lo;
    let mut b = hi;
    let mut fa = f_lo;
    for _ in 0..80 {
        let mid = 0.5 * (a + b);
        let fm = eval(mid)? - target;
        if fa * fm <= 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
        if (b - a) < 1e-12 * r_star {
            break;
        }
    }
    let r0 = 0.5 * (a + b);
    let (period, rotation) = centered_orbit_rotation(lambda, r0, &opts)?;
    // Integrate q full periods without events; the orbit is exactly periodic.
    let rhs = centered_polar_rhs(lambda);
    let total = q as f64 * period;
    let traj = integrate(
        &rhs,
        0.0,
        [r0, std::f64::consts::FRAC_PI_2, 0.0],
        total,
        &opts,
    )?;
    let law = CurvatureLaw::centered_profile(lambda, TraceConvention::HalfTrace);
    let curve = polar_profile_curve(traj, move |r, a| {
        // theta' = k with k from the law at (r, a).
        let pos = Complex64::new(r, 0.0);
        let tan = Complex64::new(a.cos(), a.sin());
        law.eval(pos, tan, Complex64::new(0.0, 1.0) * tan)
    });
    let start = curve.value(0.0);
    let end = curve.value(total);
    let closure_gap = (end - start).norm();
    let curvature_maxima = count_curvature_maxima(&curve, 4096);
    let winding = (q as f64 * rotation / (2.0 * std::f64::consts::PI)).round() as i32;
    Ok(ShotProfile {
        curve,
        r0,
        period,
        rotation_per_period: rotation,
        closure_gap,
        curvature_maxima,
        winding,
    })
}

/// Reconstruct gamma = r e^{i phi} from a polar trajectory (r, alpha, phi);
/// gamma' = e^{i(alpha + phi)} exactly, and gamma'' = i theta' gamma' with
/// theta' supplied by the caller as a function of (r, alpha).
pub(crate) fn polar_profile_curve(
    traj: Trajectory<3>,
    theta_rate: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
) -> CurvePlanar {
    let (a, b) = traj.spline.domain();
    CurvePlanar::from_fn((a, b), true, move |s| {
        let y = traj.eval(s);
        let (r, al, phi) = (y[0], y[1], y[2]);
        let gamma = r * Complex64::new(0.0, phi).exp();
        let d1 = Complex64::new(0.0, al + phi).exp();
        let d2 = Complex64::new(0.0, theta_rate(r, al)) * d1;
        (gamma, d1, d2)
    })
}

/// Count strict local maxima of the curvature along a closed unit-speed
/// curve, sampling cyclically.
pub fn count_curvature_maxima(curve: &CurvePlanar, n: usize) -> usize {
    let (a, b) = curve.domain;
    let ks: Vec<f64> = (0..n)
        .map(|i| {
            let s = a + (b - a) * i as f64 / n as f64;
            let (_, d1, d2) = curve.jet(s);
            // k = <gamma'', i gamma'> for unit-speed curves.
            (d2 * (Complex64::new(0.0, 1.0) * d1).conj()).re
        })
        .collect();
    let mut count = 0;
    for i in 0..n {
        let prev = ks[(i + n - 1) % n];
        let next = ks[(i + 1) % n];
        if ks[i] > prev && ks[i] > next {
            count += 1;
        }
    }
    count
}

/// Count transverse self-intersections of a closed curve by an O(n^2)
/// segment sweep.
pub fn count_self_intersections(curve: &CurvePlanar, n: usize) -> usize {
    let (a, b) = curve.domain;
    let pts: Vec<Complex64> = (0..n)
        .map(|i| curve.value(a + (b - a) * i as f64 / n as f64))
        .collect();
    let mut count = 0;
    for i in 0..n {
        let p1 = pts[i];
        let p2 = pts[(i + 1) % n];
        for j in (i + 2)..n {
            // Skip adjacent segments (including the wrap-around pair).
            if i == 0 && j == n - 1 {
                continue;
            }
            let q1 = pts[j];
            let q2 = pts[(j + 1) % n];
            if segments_cross(p1, p2, q1, q2) {
                count += 1;
            }
        }
    }
    count
}

fn segments_cross(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    fn orient(a: Complex64, b: Complex64, c: Complex64) -> f64 {
        (b.re - a.re) * (c.im - a.im) - (b.im - a.im) * (c.re - a.re)
    }
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}
