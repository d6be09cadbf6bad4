//! Hamiltonian-stationary machinery for the circle-foliated families: the
//! profile system r' = cos(a), a' = (C - 2 sin a)/r with its first integral
//! r^2 (C - 2 sin a), the angular-variation integral Phi(C) with a closed
//! form as independent oracle, closed q-symmetric profile curves, regime
//! classification in C, and contact-stationary Hopf tori.

use crate::curve::{CurvePlanar, CurveS3Legendrian};
use crate::diffgeo::{beta_derivative_field, laplace_beltrami_beta};
use crate::error::{Error, Result};
use crate::immersion::ImmersionSpec;
use crate::numerics::{brent, integrate, integrate_adaptive, integrate_until, EventDirection, OdeOptions, Trajectory};
use crate::report::{GridSpec, ResidualReport};
use crate::solitons::polar_profile_curve;

/// State of the profile system together with its flux constant
/// (c_flux = C in r (a' + 2 phi') = C; distinct from the Kaehler constant
/// r^2 K of the circle foliation).
#[derive(Clone, Copy, Debug)]
pub struct HsProfileState {
    pub r: f64,
    pub alpha: f64,
    pub c_flux: f64,
}

/// Right-hand side (r', alpha') of the profile system.
pub fn hs_profile_rhs(state: &HsProfileState) -> Result<(f64, f64)> {
    if !(state.r > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "profile radius must be positive, got {}",
            state.r
        )));
    }
    Ok((
        state.alpha.cos(),
        (state.c_flux - 2.0 * state.alpha.sin()) / state.r,
    ))
}

/// First integral r^2 (C - 2 sin alpha), conserved along trajectories.
pub fn hs_first_integral(state: &HsProfileState) -> f64 {
    state.r * state.r * (state.c_flux - 2.0 * state.alpha.sin())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhiMethod {
    Quadrature,
    ClosedForm,
}

const C_MIN_MARGIN: f64 = 1e-6;

/// Angular variation per radial period,
/// Phi(C) = int_0^{2 pi} sin(a) / (C - 2 sin a) da for |C| > 2, computed by
/// adaptive quadrature or by the closed form pi (C / sqrt(C^2 - 4) - 1)
/// (evaluated in the cancellation-free arrangement 4 pi / (sqrt(C^2-4)
/// (C + sqrt(C^2-4)))). The two routes serve as mutual oracles.
pub fn phi_of_c(c: f64, method: PhiMethod) -> Result<f64> {
    let ca = c.abs();
    if !(ca > 2.0 + C_MIN_MARGIN) {
        return Err(Error::RegimeViolation(c, 2.0 + C_MIN_MARGIN));
    }
    match method {
        PhiMethod::ClosedForm => {
            let root = (ca * ca - 4.0).sqrt();
            Ok(4.0 * std::f64::consts::PI / (root * (ca + root)))
        }
        PhiMethod::Quadrature => integrate_adaptive(
            &|a: f64| a.sin() / (ca - 2.0 * a.sin()),
            0.0,
            2.0 * std::f64::consts::PI,
            1e-12,
        ),
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// Closed-form solution of Phi(C) = 2 pi p / q: C = 2 m / sqrt(m^2 - 1) with
/// m = 1 + 2 p / q. Used as an independent oracle for the root-found value.
pub fn closed_form_c_for_winding(p: u32, q: u32) -> f64 {
    let m = 1.0 + 2.0 * p as f64 / q as f64;
    2.0 * m / (m * m - 1.0).sqrt()
}

/// The unique C > 2 with Phi(C) = 2 pi p / q, by bracketed root-finding on
/// the monotone-decreasing quadrature route.
pub fn solve_c_for_winding(p: u32, q: u32) -> Result<f64> {
    if p == 0 || q == 0 || gcd(p, q) != 1 {
        return Err(Error::InvalidParameter(format!(
            "(p, q) = ({p}, {q}) must be positive and coprime"
        )));
    }
    let target = 2.0 * std::f64::consts::PI * p as f64 / q as f64;
    let f = |c: f64| phi_of_c(c, PhiMethod::Quadrature).unwrap_or(f64::NAN) - target;
    // Phi decreases from +infinity at C -> 2+ to 0 at infinity; walk the
    // lower bracket toward 2 only as far as the target requires (the
    // integrand turns needle-like there).
    let mut lo = 2.001;
    while f(lo) < 0.0 {
        lo = 2.0 + 0.1 * (lo - 2.0);
        if lo - 2.0 < 2.0 * C_MIN_MARGIN {
            return Err(Error::BracketFailure { a: lo, b: 4.0 });
        }
    }
    let mut hi = 4.0;
    while f(hi) > 0.0 {
        hi *= 2.0;
        if hi > 1e9 {
            return Err(Error::BracketFailure { a: lo, b: hi });
        }
    }
    brent(f, lo, hi, 1e-13)
}

/// Regimes of the profile system in the flux constant C.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Regime {
    /// |C| > 2: radii bounded, countably many closed curves.
    BoundedClosedFamily,
    /// 0 < |C| < 2: both ends of the profile spiral.
    SpiralingEnds,
    /// |C| = 2: circles at the equilibria, spirals elsewhere.
    CirclesAndSpirals,
    /// C = 0: constant Lagrangian angle.
    SpecialLagrangian,
}

pub fn classify_regime(c: f64) -> Regime {
    if c == 0.0 {
        Regime::SpecialLagrangian
    } else if c.abs() > 2.0 {
        Regime::BoundedClosedFamily
    } else if c.abs() == 2.0 {
        Regime::CirclesAndSpirals
    } else {
        Regime::SpiralingEnds
    }
}

/// A closed profile curve with its construction data.
pub struct ClosedProfile {
    pub curve: CurvePlanar,
    pub c_flux: f64,
    /// Arclength of one alpha-period.
    pub period: f64,
    /// Angle swept per period (2 pi p / q).
    pub phi_per_period: f64,
    pub closure_gap: f64,
    pub p: u32,
    pub q: u32,
}

const CLOSURE_TOL: f64 = 1e-6;

fn profile_opts(samples_per_period: usize, period_hint: f64) -> OdeOptions {
    OdeOptions {
        h_max: (period_hint / samples_per_period.max(64) as f64).min(0.05),
        ..OdeOptions::default()
    }
}

/// Integrate the profile system at C = solve_c_for_winding(p, q) over q
/// alpha-periods and reconstruct the closed planar curve gamma = r e^{i phi}.
pub fn build_closed_hs_curve(p: u32, q: u32, samples_per_period: usize) -> Result<ClosedProfile> {
    let c = solve_c_for_winding(p, q)?;
    let rhs = move |_s: f64, y: &[f64; 3]| -> [f64; 3] {
        let (r, a) = (y[0], y[1]);
        [a.cos(), (c - 2.0 * a.sin()) / r, a.sin() / r]
    };
    let y0 = [1.0, 0.0, 0.0];
    // alpha is strictly increasing for C > 2; one period = alpha gain of 2 pi.
    let coarse = OdeOptions::default();
    let (one_period, t_period) = integrate_until(
        &rhs,
        0.0,
        y0,
        &|_s, y: &[f64; 3]| y[1] - 2.0 * std::f64::consts::PI,
        EventDirection::Rising,
        0.0,
        1.0e5,
        &coarse,
    )?;
    let phi_per_period = one_period.y_end[2];
    let opts = profile_opts(samples_per_period, t_period);
    let total = q as f64 * t_period;
    let traj = integrate(&rhs, 0.0, y0, total, &opts)?;
    let curve = polar_profile_curve(traj, move |r, a| (c - a.sin()) / r);
    let start = curve.value(0.0);
    let end = curve.value(total);
    let gap = (end - start).norm();
    if gap > CLOSURE_TOL {
        return Err(Error::ClosureFailure {
            gap,
            tol: CLOSURE_TOL,
        });
    }
    Ok(ClosedProfile {
        curve,
        c_flux: c,
        period: t_period,
        phi_per_period,
        closure_gap: gap,
        p,
        q,
    })
}

/// Raw profile trajectory columns for export: (s, r, alpha, phi, first
/// integral), sampled uniformly, `n_per_period` rows per alpha-period over
/// `periods` periods.
pub struct ProfileTable {
    pub c_flux: f64,
    pub rows: Vec<[f64; 5]>,
}

pub fn profile_table(c: f64, periods: u32, n_per_period: usize) -> Result<ProfileTable> {
    match classify_regime(c) {
        Regime::BoundedClosedFamily => {}
        other => {
            return Err(Error::InvalidParameter(format!(
                "profile integration needs |C| > 2 (classify_regime: {other:?})"
            )))
        }
    }
    let ca = c.abs();
    let rhs = move |_s: f64, y: &[f64; 3]| -> [f64; 3] {
        let (r, a) = (y[0], y[1]);
        [a.cos(), (ca - 2.0 * a.sin()) / r, a.sin() / r]
    };
    let y0 = [1.0, 0.0, 0.0];
    let coarse = OdeOptions::default();
    let (_, t_period) = integrate_until(
        &rhs,
        0.0,
        y0,
        &|_s, y: &[f64; 3]| y[1] - 2.0 * std::f64::consts::PI,
        EventDirection::Rising,
        0.0,
        1.0e5,
        &coarse,
    )?;
    let total = periods as f64 * t_period;
    let traj: Trajectory<3> = integrate(&rhs, 0.0, y0, total, &coarse)?;
    let n = periods as usize * n_per_period.max(8);
    let rows = (0..=n)
        .map(|i| {
            let s = total * i as f64 / n as f64;
            let y = traj.eval(s);
            let e = hs_first_integral(&HsProfileState {
                r: y[0],
                alpha: y[1],
                c_flux: ca,
            });
            [s, y[0], y[1], y[2], e]
        })
        .collect();
    Ok(ProfileTable { c_flux: ca, rows })
}

/// Contact-stationary Hopf torus: the centered type II surface over the
/// Legendrian torus curve with exponents a = sqrt(1-c^2)/c and
/// b = -c/sqrt(1-c^2), for which the Legendrian angle is affine in s. Its
/// image is a product of circles S^1(c) x S^1(sqrt(1-c^2)).
pub fn make_contact_stationary_hopf(c: f64) -> Result<ImmersionSpec> {
    if !(0.0 < c && c < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "Hopf parameter c = {c} must lie in (0, 1)"
        )));
    }
    let gamma = CurveS3Legendrian::torus_curve(c)?;
    crate::cyclic::make_centered_type2(gamma, 1.0)
}

/// Hamiltonian-stationary verdict: compose the Lagrangian-angle derivative
/// field with the divergence-form Laplacian and report max |Delta beta|.
pub fn hs_residual_suite(spec: &ImmersionSpec, grid: &GridSpec) -> Result<ResidualReport> {
    let field = beta_derivative_field(spec, grid)?;
    let mut rep = laplace_beltrami_beta(&field)?;
    rep.name = "hamiltonian_stationary".into();
    Ok(rep)
}

/// Spread (max - min) of a quantity sampled by a closure over n points; used
/// by tests and the verification front end for constancy checks.
pub fn sample_spread(n: usize, f: impl Fn(usize) -> f64) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let v = f(i);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    hi - lo
}

/// Build the centered type I surface over a closed profile curve.
pub fn hs_closed_surface(p: u32, q: u32) -> Result<ImmersionSpec> {
    let profile = build_closed_hs_curve(p, q, 256)?;
    crate::cyclic::make_centered_type1(profile.curve)
}
