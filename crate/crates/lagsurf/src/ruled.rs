//! Ruled Lagrangian surfaces: lines over a Legendrian directrix with a
//! planar translation density, the orthogonalizing reparametrization of the
//! rulings, a closed-form mean-curvature component and the ruled soliton
//! obstruction.

use std::sync::Arc;

use num_complex::Complex64;

use crate::curve::{ConstrainedCurve, CurvePlanar, CurveS3Legendrian, RealFn};
use crate::diffgeo::{first_fundamental_form, mean_curvature};
use crate::error::{Error, Result};
use crate::immersion::{ruled_integrand, ImmersionSpec, ProductLineCurve, Ruled, Translation};
use crate::numerics::CumulativeIntegral;
use crate::report::{GridSpec, ResidualReport};
use crate::solitons::soliton_obstruction_scan;

const CONSTRAINT_TOL: f64 = 1e-6;

/// X(s, t) = gamma(s) t + int_{s0}^{s} alpha(u) gamma'(u) du with gamma a
/// unit-speed Legendrian curve and alpha = x + i y a planar density.
pub fn make_ruled(
    gamma: CurveS3Legendrian,
    alpha: CurvePlanar,
    s0: f64,
) -> Result<ImmersionSpec> {
    let rep = gamma.constraint_residual(257)?;
    if rep.max_abs > CONSTRAINT_TOL {
        return Err(Error::ConstraintViolation {
            what: "S^3 Legendrian constraints",
            residual: rep.max_abs,
            tol: CONSTRAINT_TOL,
        });
    }
    if !gamma.arclength {
        return Err(Error::InvalidParameter(
            "ruled surfaces need a unit-speed directrix".into(),
        ));
    }
    make_ruled_unchecked(gamma, alpha, s0)
}

/// Same constructor without the Legendrian validation; used for sensitivity
/// experiments that deliberately perturb the directrix off the constraint.
pub fn make_ruled_unchecked(
    gamma: CurveS3Legendrian,
    alpha: CurvePlanar,
    s0: f64,
) -> Result<ImmersionSpec> {
    let trans = Translation::new(ruled_integrand(&gamma, &alpha), s0, gamma.domain)?;
    Ok(ImmersionSpec::Ruled(Ruled {
        gamma,
        alpha,
        s0,
        t_shift: None,
        trans,
    }))
}

/// Blair's Lagrangian helicoid: directrix (k + i l)(cos s, sin s) with
/// k^2 + l^2 = 1 and a constant density x0 + i y0.
pub fn make_blair_helicoid(k: f64, l: f64, x0: f64, y0: f64) -> Result<ImmersionSpec> {
    let gamma = CurveS3Legendrian::rotated_great_circle(k, l)?;
    let alpha = CurvePlanar::from_fn(gamma.domain, false, move |_| {
        (
            Complex64::new(x0, y0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        )
    });
    make_ruled(gamma, alpha, 0.0)
}

/// Product L x Gamma of a straight line in the first complex coordinate with
/// a planar curve in the second (the parallel-rulings case).
pub fn make_product_line_curve(
    dir: Complex64,
    offset: Complex64,
    curve: CurvePlanar,
) -> Result<ImmersionSpec> {
    if (dir.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(
            "line direction must be a unit complex number".into(),
        ));
    }
    curve.constraint_residual(64)?;
    Ok(ImmersionSpec::ProductLineCurve(ProductLineCurve {
        dir,
        offset,
        curve,
    }))
}

/// Reparametrize the rulings so that <X_s, X_t> = 0: X(s, t) -> X(s, t + T(s))
/// with T' = -<X_s, X_t> obtained by sampling the jets and integrating. The
/// image set is unchanged.
pub fn orthogonalize_rulings(spec: &ImmersionSpec) -> Result<ImmersionSpec> {
    let ruled = match spec {
        ImmersionSpec::Ruled(r) => r.clone(),
        _ => {
            return Err(Error::InvalidParameter(
                "orthogonalize_rulings expects a ruled spec".into(),
            ))
        }
    };
    let domain = ruled.gamma.domain;
    let probe = spec.clone();
    // F = <X_s, X_t> is independent of t for ruled immersions; sample at t = 0.
    let f_of_s = Arc::new(move |s: f64| -> f64 {
        let jet = probe.jet(s, 0.0).expect("jet inside domain");
        jet.xs.dot(&jet.xt)
    });
    let minus_f = {
        let f = f_of_s.clone();
        Arc::new(move |s: f64| -f(s))
    };
    let t_int = CumulativeIntegral::new(minus_f, ruled.s0, domain, 1e-11)?;
    let old_shift = ruled.t_shift.clone();
    let f_for_d1 = f_of_s.clone();
    let f_for_d2 = f_of_s.clone();
    let shift = RealFn::new(move |s: f64| {
        let (tau, dtau, ddtau) = match &old_shift {
            Some(g) => g.eval(s),
            None => (0.0, 0.0, 0.0),
        };
        let t_val = t_int.eval(s);
        let dt = -f_for_d1(s);
        // T'' = -F'(s) by a short central difference; F is smooth.
        let h = 1e-5 * (1.0 + s.abs());
        let ddt = -(f_for_d2(s + h) - f_for_d2(s - h)) / (2.0 * h);
        (tau + t_val, dtau + dt, ddtau + ddt)
    });
    let trans = Translation::new(
        ruled_integrand(&ruled.gamma, &ruled.alpha),
        ruled.s0,
        domain,
    )?;
    Ok(ImmersionSpec::Ruled(Ruled {
        gamma: ruled.gamma,
        alpha: ruled.alpha,
        s0: ruled.s0,
        t_shift: Some(shift),
        trans,
    }))
}

/// Closed-form normal component of the mean curvature along N_t = J X_t for
/// an orthogonalized ruled surface with density alpha = x + i y:
/// 2 <H, N_t> = -y / ((t + x)^2 + y^2).
pub fn ruled_mean_curvature_oracle(spec: &ImmersionSpec, s: f64, t: f64) -> Result<f64> {
    let ruled = match spec {
        ImmersionSpec::Ruled(r) => r,
        _ => {
            return Err(Error::InvalidParameter(
                "ruled_mean_curvature_oracle expects a ruled spec".into(),
            ))
        }
    };
    let a = ruled.alpha.value(s);
    let (x, y) = (a.re, a.im);
    let shift = ruled.t_shift.as_ref().map(|f| f.value(s)).unwrap_or(0.0);
    let te = t + shift;
    let denom = (te + x) * (te + x) + y * y;
    if denom < 1e-14 {
        return Err(Error::DegenerateMetric { s, t, det: denom });
    }
    Ok(-y / denom)
}

/// Summary of the ruled soliton obstruction: <X, N_t> does not vary along
/// the rulings while <H, N_t> does, so H + lambda X^perp = 0 cannot hold.
#[derive(Clone, Debug, serde::Serialize)]
pub struct RuledObstruction {
    /// max over s of (max - min over t) of <X, N_t>.
    pub x_nt_spread: f64,
    /// min over s of (max - min over t) of <H, N_t>.
    pub h_nt_spread: f64,
    /// min over lambda of max |H + lambda X^perp|.
    pub min_max_residual: f64,
}

pub fn ruled_soliton_obstruction(
    spec: &ImmersionSpec,
    lambdas: &[f64],
    grid: &GridSpec,
) -> Result<RuledObstruction> {
    if !matches!(spec, ImmersionSpec::Ruled(_)) {
        return Err(Error::InvalidParameter(
            "ruled_soliton_obstruction expects a ruled spec".into(),
        ));
    }
    let s_nodes = grid.s_nodes();
    let t_nodes = grid.t_nodes(false);
    let mut x_spread_max: f64 = 0.0;
    let mut h_spread_min = f64::INFINITY;
    for &s in &s_nodes {
        let mut x_lo = f64::INFINITY;
        let mut x_hi = f64::NEG_INFINITY;
        let mut h_lo = f64::INFINITY;
        let mut h_hi = f64::NEG_INFINITY;
        for &t in &t_nodes {
            let jet = spec.jet(s, t)?;
            let m = first_fundamental_form(&jet);
            if m.is_degenerate() {
                continue;
            }
            let n_t = jet
                .xt
                .j()
                .normalized()
                .ok_or(Error::DegenerateMetric { s, t, det: m.det })?;
            let xv = jet.x.dot(&n_t);
            let hv = mean_curvature(&jet, &m)?.dot(&n_t);
            x_lo = x_lo.min(xv);
            x_hi = x_hi.max(xv);
            h_lo = h_lo.min(hv);
            h_hi = h_hi.max(hv);
        }
        x_spread_max = x_spread_max.max(x_hi - x_lo);
        h_spread_min = h_spread_min.min(h_hi - h_lo);
    }
    let scan = soliton_obstruction_scan(spec, lambdas, grid)?;
    Ok(RuledObstruction {
        x_nt_spread: x_spread_max,
        h_nt_spread: h_spread_min,
        min_max_residual: scan.min_max,
    })
}

/// A residual-style report for the obstruction scan, for the CLI front end.
pub fn ruled_obstruction_report(
    spec: &ImmersionSpec,
    lambdas: &[f64],
    grid: &GridSpec,
) -> Result<ResidualReport> {
    let scan = soliton_obstruction_scan(spec, lambdas, grid)?;
    let mut best = scan.per_lambda[0].1.clone();
    for (_, rep) in scan.per_lambda {
        if rep.max_abs < best.max_abs {
            best = rep;
        }
    }
    best.name = "ruled_soliton_obstruction(min over lambda)".into();
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffgeo::lagrangian_residual;
    use crate::point::PointC2;
    use crate::solitons::{self_similar_residual, SolitonParams};
    use std::f64::consts::PI;

    fn helicoid() -> ImmersionSpec {
        make_blair_helicoid(0.6, 0.8, 1.0, 1.0).unwrap()
    }

    #[test]
    fn cone_over_legendrian_curve_is_lagrangian() {
        let alpha = CurvePlanar::from_fn((0.0, 2.0 * PI), false, |_| {
            let z = Complex64::new(0.0, 0.0);
            (z, z, z)
        });
        let spec = make_ruled(CurveS3Legendrian::torus_curve(0.6).unwrap(), alpha, 0.0).unwrap();
        let rep = lagrangian_residual(&spec, &spec.default_grid(32, 32)).unwrap();
        assert!(rep.max_abs < 1e-10, "residual {:.3e}", rep.max_abs);
    }

    #[test]
    fn helicoid_is_lagrangian_with_straight_rulings() {
        let spec = helicoid();
        let rep = lagrangian_residual(&spec, &spec.default_grid(48, 48)).unwrap();
        assert!(rep.max_abs < 1e-10, "residual {:.3e}", rep.max_abs);
        for (s, t) in [(0.3, -2.0), (2.0, 4.0)] {
            let jet = spec.jet(s, t).unwrap();
            assert_eq!(jet.xtt.norm(), 0.0);
        }
    }

    #[test]
    fn growing_density_is_lagrangian() {
        let gamma = CurveS3Legendrian::great_circle();
        let alpha = CurvePlanar::from_fn((0.0, 1.0), false, |u| {
            (
                Complex64::new(u, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
            )
        });
        let spec = make_ruled(gamma, alpha, 0.0).unwrap();
        let grid = GridSpec::new(48, 48, (0.0, 1.0), (-2.0, 2.0));
        let rep = lagrangian_residual(&spec, &grid).unwrap();
        assert!(rep.max_abs < 1e-8, "residual {:.3e}", rep.max_abs);
    }

    #[test]
    fn ruled_specs_are_orthogonal_already_and_reparametrization_is_stable() {
        let spec = helicoid();
        let ortho = orthogonalize_rulings(&spec).unwrap();
        for (s, t) in [(0.5, 0.0), (2.0, 3.0), (4.0, -1.0)] {
            let j = ortho.jet(s, t).unwrap();
            assert!(j.xs.dot(&j.xt).abs() < 1e-8);
            // T' = -F = 0 here, so the image points coincide as well.
            let a = spec.position(s, t).unwrap();
            let b = ortho.position(s, t).unwrap();
            assert!((a - b).norm() < 1e-8);
        }
    }

    #[test]
    fn sheared_spec_is_reorthogonalized_with_image_preserved() {
        // Apply a t-shift tau(s) = 0.3 sin s to the helicoid, breaking F = 0.
        let base = helicoid();
        let sheared = match base.clone() {
            ImmersionSpec::Ruled(mut r) => {
                r.t_shift = Some(RealFn::new(|s| {
                    (0.3 * s.sin(), 0.3 * s.cos(), -0.3 * s.sin())
                }));
                ImmersionSpec::Ruled(r)
            }
            _ => unreachable!(),
        };
        let f_before = {
            let j = sheared.jet(1.0, 0.5).unwrap();
            j.xs.dot(&j.xt).abs()
        };
        assert!(f_before > 1e-3, "shear did not break orthogonality");
        let ortho = orthogonalize_rulings(&sheared).unwrap();
        let mut worst_f: f64 = 0.0;
        for (s, t) in [(0.4, 0.0), (1.0, 0.5), (2.5, -2.0), (5.0, 3.0)] {
            let j = ortho.jet(s, t).unwrap();
            worst_f = worst_f.max(j.xs.dot(&j.xt).abs());
        }
        assert!(worst_f < 1e-8, "F after reparametrization {worst_f:.3e}");
        // Image preserved: the orthogonalized surface agrees with the base
        // helicoid pointwise (tau + T returns to zero up to a constant).
        let mut worst_d = f64::NEG_INFINITY;
        for (s, t) in [(0.4, 0.0), (1.0, 0.5), (2.5, -2.0)] {
            let p = ortho.position(s, t).unwrap();
            // Nearest point on the base ruling at the same s: project.
            let jet0 = base.jet(s, 0.0).unwrap();
            let d = p - jet0.x;
            let along = d.dot(&jet0.xt);
            let off = (d - jet0.xt.scale(along)).norm();
            worst_d = worst_d.max(off);
        }
        assert!(worst_d < 1e-6, "image drift {worst_d:.3e}");
    }

    #[test]
    fn oracle_matches_engine_on_a_grid() {
        let spec = helicoid();
        let grid = spec.default_grid(32, 32);
        let mut worst = 0.0f64;
        for &s in &grid.s_nodes() {
            for &t in &grid.t_nodes(false) {
                let jet = spec.jet(s, t).unwrap();
                let m = first_fundamental_form(&jet);
                let h = mean_curvature(&jet, &m).unwrap();
                let n_t = jet.xt.j().normalized().unwrap();
                let engine = 2.0 * h.dot(&n_t);
                let oracle = ruled_mean_curvature_oracle(&spec, s, t).unwrap();
                worst = worst.max((engine - oracle).abs());
            }
        }
        assert!(worst < 1e-6, "engine/oracle mismatch {worst:.3e}");
    }

    #[test]
    fn oracle_on_cone_vanishes_along_n_t() {
        // With alpha = 0 the N_t component of H vanishes identically; the
        // bending of a cone sits along N_s.
        let alpha = CurvePlanar::from_fn((0.0, 2.0 * PI), false, |_| {
            let z = Complex64::new(0.0, 0.0);
            (z, z, z)
        });
        let spec = make_ruled(CurveS3Legendrian::torus_curve(0.6).unwrap(), alpha, 0.0).unwrap();
        for (s, t) in [(1.0, 1.0), (2.0, -3.0), (4.0, 0.7)] {
            let oracle = ruled_mean_curvature_oracle(&spec, s, t).unwrap();
            assert_eq!(oracle, 0.0);
            let jet = spec.jet(s, t).unwrap();
            let m = first_fundamental_form(&jet);
            let h = mean_curvature(&jet, &m).unwrap();
            let n_t = jet.xt.j().normalized().unwrap();
            assert!(h.dot(&n_t).abs() < 1e-12);
        }
    }

    #[test]
    fn helicoid_obstruction_holds() {
        let spec = helicoid();
        let grid = spec.default_grid(24, 24);
        let obs = ruled_soliton_obstruction(&spec, &[0.5, -0.5, 1.0, -1.0], &grid).unwrap();
        assert!(obs.x_nt_spread < 1e-10, "<X, N_t> varies: {:.3e}", obs.x_nt_spread);
        assert!(obs.h_nt_spread > 1e-3, "<H, N_t> spread only {:.3e}", obs.h_nt_spread);
        assert!(obs.min_max_residual > 1e-3);
    }

    #[test]
    fn line_times_shrinker_circle_is_the_positive_control() {
        // L through the origin times the circle of radius r: a surface
        // soliton at lambda = 1/(2 r^2).
        let r = 1.3;
        let spec = make_product_line_curve(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            CurvePlanar::circle(r),
        )
        .unwrap();
        let rep = self_similar_residual(
            &spec,
            &SolitonParams::new(0.5 / (r * r)).unwrap(),
            &spec.default_grid(32, 32),
        )
        .unwrap();
        assert!(rep.max_abs < 1e-8, "residual {:.3e}", rep.max_abs);
    }

    #[test]
    fn legendrian_frame_is_orthonormal() {
        let gamma = CurveS3Legendrian::torus_curve(0.6).unwrap();
        for s in [0.0, 1.0, 2.5, 5.0] {
            let (g, dg, _) = gamma.jet(s);
            let gv = PointC2::new(g[0], g[1]);
            let dgv = PointC2::new(dg[0], dg[1]);
            let frame = [gv, gv.j(), dgv, dgv.j()];
            for i in 0..4 {
                for j in 0..4 {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (frame[i].dot(&frame[j]) - expect).abs() < 1e-10,
                        "pairing ({i},{j})"
                    );
                }
            }
        }
    }

    #[test]
    fn legendrian_defect_raises_lagrangian_residual() {
        // Perturb the directrix off the Legendrian constraint by 1e-3.
        let eps = 1e-3;
        let gamma = CurveS3Legendrian::from_fn((0.0, 2.0 * PI), false, move |s| {
            let (c, sn) = (s.cos(), s.sin());
            let e = Complex64::new(0.0, eps * s).exp();
            let ie = Complex64::new(0.0, eps) * e;
            (
                [Complex64::new(c, 0.0), sn * e],
                [Complex64::new(-sn, 0.0), c * e + sn * ie],
                [
                    Complex64::new(-c, 0.0),
                    -sn * e + 2.0 * c * ie + sn * Complex64::new(0.0, eps) * ie,
                ],
            )
        });
        let alpha = CurvePlanar::from_fn((0.0, 2.0 * PI), false, |_| {
            (
                Complex64::new(1.0, 1.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            )
        });
        let spec = make_ruled_unchecked(gamma, alpha, 0.0).unwrap();
        let rep = lagrangian_residual(&spec, &spec.default_grid(32, 32)).unwrap();
        assert!(rep.max_abs > 1e-4, "residual only {:.3e}", rep.max_abs);
    }
}
