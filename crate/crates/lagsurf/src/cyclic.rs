//! Constructors for the six cyclic Lagrangian families and the
//! cyclic-specific invariants: circle-frame extraction and the constancy of
//! r^2 K along the foliation.

use num_complex::Complex64;

use crate::curve::{
    ConstrainedCurve, CplxFn, CurveAdSLegendrian, CurvePlanar, CurveS3Legendrian, RealFn,
};
use crate::diffgeo::kahler_angle;
use crate::error::{Error, Result};
use crate::immersion::{
    type1_integrand, type2_integrand, type3_integrand, CenteredType1, CenteredType2,
    CenteredType3, GeneralType1, GeneralType2, GeneralType3, ImmersionSpec, Translation,
    Type2Form,
};
use crate::point::PointC2;
use crate::report::{GridSpec, ResidualReport};

const CONSTRAINT_TOL: f64 = 1e-6;
const CONSTRAINT_SAMPLES: usize = 257;

fn validate_constraints<C: ConstrainedCurve>(curve: &C, what: &'static str) -> Result<()> {
    let rep = curve.constraint_residual(CONSTRAINT_SAMPLES)?;
    if rep.max_abs > CONSTRAINT_TOL {
        return Err(Error::ConstraintViolation {
            what,
            residual: rep.max_abs,
            tol: CONSTRAINT_TOL,
        });
    }
    Ok(())
}

fn validate_avoids_origin(gamma: &CurvePlanar) -> Result<()> {
    let grid = GridSpec::new(257, 1, gamma.domain, (0.0, 0.0));
    for s in grid.s_nodes() {
        let r = gamma.value(s).norm();
        if !(r > 1e-9) {
            return Err(Error::DegenerateLeaf { s, radius: r });
        }
    }
    Ok(())
}

/// X(s, t) = gamma(s) (cos t, sin t), the complex-extensor family.
pub fn make_centered_type1(gamma: CurvePlanar) -> Result<ImmersionSpec> {
    validate_avoids_origin(&gamma)?;
    Ok(ImmersionSpec::CenteredType1(CenteredType1 { gamma }))
}

/// Centered type I plus a translation along e^{i phi} (W1, W2).
pub fn make_general_type1(
    gamma: CurvePlanar,
    w1: RealFn,
    w2: RealFn,
    s0: f64,
) -> Result<ImmersionSpec> {
    validate_avoids_origin(&gamma)?;
    let trans = Translation::new(type1_integrand(&gamma, &w1, &w2), s0, gamma.domain)?;
    Ok(ImmersionSpec::GeneralType1(GeneralType1 {
        gamma,
        w1,
        w2,
        s0,
        trans,
    }))
}

/// X(s, t) = c e^{it} gamma(s) over a Legendrian curve of S^3 (Hopf type).
pub fn make_centered_type2(gamma: CurveS3Legendrian, c: f64) -> Result<ImmersionSpec> {
    if c == 0.0 || !c.is_finite() {
        return Err(Error::InvalidParameter("type II needs c != 0".into()));
    }
    validate_constraints(&gamma, "S^3 Legendrian constraints")?;
    Ok(ImmersionSpec::CenteredType2(CenteredType2 { gamma, c }))
}

/// Centered type II plus a translation along the chosen orthogonal frame.
pub fn make_general_type2(
    gamma: CurveS3Legendrian,
    c: f64,
    w: CplxFn,
    s0: f64,
    form: Type2Form,
) -> Result<ImmersionSpec> {
    if c == 0.0 || !c.is_finite() {
        return Err(Error::InvalidParameter("type II needs c != 0".into()));
    }
    validate_constraints(&gamma, "S^3 Legendrian constraints")?;
    if form == Type2Form::TangentFrame && !gamma.arclength {
        return Err(Error::InvalidParameter(
            "the tangent-frame translation needs a unit-speed curve".into(),
        ));
    }
    let trans = Translation::new(type2_integrand(&gamma, &w, form), s0, gamma.domain)?;
    Ok(ImmersionSpec::GeneralType2(GeneralType2 {
        gamma,
        c,
        w,
        s0,
        form,
        trans,
    }))
}

/// X(s, t) = c (a1 e^{it}, a2 e^{-it}) over a Legendrian curve of the unit
/// anti-de Sitter space.
pub fn make_centered_type3(alpha: CurveAdSLegendrian, c: f64) -> Result<ImmersionSpec> {
    if c == 0.0 || !c.is_finite() {
        return Err(Error::InvalidParameter("type III needs c != 0".into()));
    }
    validate_constraints(&alpha, "AdS Legendrian constraints")?;
    Ok(ImmersionSpec::CenteredType3(CenteredType3 { alpha, c }))
}

/// Centered type III plus the translation (W |a2|^2, conj(W) a1 a2).
pub fn make_general_type3(
    alpha: CurveAdSLegendrian,
    c: f64,
    w: CplxFn,
    s0: f64,
) -> Result<ImmersionSpec> {
    if c == 0.0 || !c.is_finite() {
        return Err(Error::InvalidParameter("type III needs c != 0".into()));
    }
    validate_constraints(&alpha, "AdS Legendrian constraints")?;
    let trans = Translation::new(type3_integrand(&alpha, &w), s0, alpha.domain)?;
    Ok(ImmersionSpec::GeneralType3(GeneralType3 {
        alpha,
        c,
        w,
        s0,
        trans,
    }))
}

/// The leaf circle at parameter s: center, radius and an orthonormal basis of
/// its plane.
#[derive(Clone, Copy, Debug)]
pub struct CircleFrame {
    pub center: PointC2,
    pub radius: f64,
    pub e1: PointC2,
    pub e2: PointC2,
}

const ROUNDNESS_TOL: f64 = 1e-9;

/// Extract the leaf circle at s and verify its roundness over sampled t.
pub fn circle_frame(spec: &ImmersionSpec, s: f64) -> Result<CircleFrame> {
    if !spec.is_cyclic() {
        return Err(Error::NotCyclic {
            family: spec.family_name(),
        });
    }
    let center = match spec {
        ImmersionSpec::ProductCircleCurve(p) => {
            PointC2::new(Complex64::new(0.0, 0.0), p.curve.value(s))
        }
        _ => spec.translation(s),
    };
    let p0 = spec.position(s, 0.0)? - center;
    let p1 = spec.position(s, std::f64::consts::FRAC_PI_2)? - center;
    let radius = p0.norm();
    if radius < 1e-12 {
        return Err(Error::DegenerateLeaf { s, radius });
    }
    let e1 = p0.scale(1.0 / radius);
    let e2 = p1.scale(1.0 / radius);
    // Roundness: |X(s, t) - center| stays at the radius.
    let scale = radius.max(1.0);
    for k in 0..32 {
        let t = 2.0 * std::f64::consts::PI * k as f64 / 32.0;
        let d = (spec.position(s, t)? - center).norm();
        if (d - radius).abs() > ROUNDNESS_TOL * scale {
            return Err(Error::ConstraintViolation {
                what: "leaf roundness",
                residual: (d - radius).abs(),
                tol: ROUNDNESS_TOL,
            });
        }
    }
    Ok(CircleFrame {
        center,
        radius,
        e1,
        e2,
    })
}

/// r(s)^2 K(s) sampled along the foliation; reports the deviation from the
/// mean (the quantity is a constant of the surface).
pub fn r2k_invariant(spec: &ImmersionSpec, n_samples: usize) -> Result<ResidualReport> {
    if n_samples < 2 {
        return Err(Error::InvalidParameter("need at least 2 samples".into()));
    }
    let (a, b) = spec.s_domain();
    let grid = GridSpec::new(n_samples, 1, (a, b), (0.0, 0.0));
    let mut values = Vec::with_capacity(n_samples);
    for s in grid.s_nodes() {
        let frame = circle_frame(spec, s)?;
        let k = kahler_angle(&frame.e1, &frame.e2)?;
        values.push((s, frame.radius * frame.radius * k));
    }
    let mean = values.iter().map(|(_, v)| v).sum::<f64>() / values.len() as f64;
    let samples = values
        .into_iter()
        .map(|(s, v)| ((s, 0.0), v - mean))
        .collect::<Vec<_>>();
    Ok(ResidualReport::from_samples("r2K_deviation", grid, samples, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffgeo::lagrangian_residual;
    use std::f64::consts::PI;

    #[test]
    fn centered_type1_circle_profile_is_lagrangian() {
        let spec = make_centered_type1(CurvePlanar::circle(1.0)).unwrap();
        let rep = lagrangian_residual(&spec, &spec.default_grid(48, 48)).unwrap();
        assert!(rep.max_abs < 1e-12, "residual {:.3e}", rep.max_abs);
    }

    #[test]
    fn centered_type1_spiral_profile_is_lagrangian() {
        // gamma(s) = (1+s) e^{is} on [0, 1].
        let gamma = CurvePlanar::from_fn((0.0, 1.0), false, |s| {
            let e = Complex64::new(0.0, s).exp();
            let i = Complex64::new(0.0, 1.0);
            let g = (1.0 + s) * e;
            let dg = e + i * g;
            let ddg = 2.0 * i * e + i * i * g;
            (g, dg, ddg)
        });
        let spec = make_centered_type1(gamma).unwrap();
        let rep = lagrangian_residual(&spec, &spec.default_grid(40, 40)).unwrap();
        assert!(rep.max_abs < 1e-10, "residual {:.3e}", rep.max_abs);
    }

    #[test]
    fn type1_through_origin_is_rejected() {
        let gamma = CurvePlanar::line(
            Complex64::new(-1.0, 0.0),
            Complex64::new(1.0, 0.0),
            (0.0, 2.0),
        );
        assert!(matches!(
            make_centered_type1(gamma),
            Err(Error::DegenerateLeaf { .. })
        ));
    }

    #[test]
    fn general_type1_zero_translation_matches_centered() {
        let centered = make_centered_type1(CurvePlanar::circle(1.0)).unwrap();
        let general = make_general_type1(
            CurvePlanar::circle(1.0),
            RealFn::constant(0.0),
            RealFn::constant(0.0),
            0.0,
        )
        .unwrap();
        for (s, t) in [(0.3, 0.7), (2.0, 4.0), (5.5, 1.2)] {
            let a = centered.position(s, t).unwrap();
            let b = general.position(s, t).unwrap();
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn general_type1_seeded_translation_is_lagrangian() {
        let spec = make_general_type1(
            CurvePlanar::circle(1.0),
            RealFn::constant(1.0),
            RealFn::constant(0.0),
            0.0,
        )
        .unwrap();
        let rep = lagrangian_residual(&spec, &spec.default_grid(64, 64)).unwrap();
        assert!(rep.max_abs < 1e-8, "residual {:.3e}", rep.max_abs);
    }

    #[test]
    fn general_type1_constant_phi_stays_in_a_lagrangian_plane() {
        // Profile along a fixed ray: phi = pi/6 constant.
        let phi = PI / 6.0;
        let u = Complex64::new(0.0, phi).exp();
        let gamma = CurvePlanar::from_fn((1.0, 2.0), true, move |s| {
            (u * s, u, Complex64::new(0.0, 0.0))
        });
        let spec = make_general_type1(
            gamma,
            RealFn::new(|s| (s.cos(), -s.sin(), -s.cos())),
            RealFn::constant(0.4),
            1.0,
        )
        .unwrap();
        // <Y, i e^{i phi}(1,0)> = <Y, i e^{i phi}(0,1)> = 0 on the image.
        let n1 = PointC2::new(Complex64::new(0.0, 1.0) * u, Complex64::new(0.0, 0.0));
        let n2 = PointC2::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0) * u);
        for (s, t) in [(1.1, 0.0), (1.5, 2.0), (1.9, 4.4)] {
            let y = spec.position(s, t).unwrap();
            assert!(y.dot(&n1).abs() < 1e-9, "left the plane: {}", y.dot(&n1));
            assert!(y.dot(&n2).abs() < 1e-9);
        }
    }

    #[test]
    fn centered_type2_great_circle_is_lagrangian() {
        let spec = make_centered_type2(CurveS3Legendrian::great_circle(), 1.0).unwrap();
        let rep = lagrangian_residual(&spec, &spec.default_grid(48, 48)).unwrap();
        assert!(rep.max_abs < 1e-12);
    }

    #[test]
    fn general_type2_torus_curve_seeded_is_lagrangian() {
        let spec = make_general_type2(
            CurveS3Legendrian::torus_curve(0.6).unwrap(),
            1.0,
            CplxFn::rotating(Complex64::new(1.0, 0.0), 1.0),
            0.0,
            Type2Form::SymplecticOrthogonal,
        )
        .unwrap();
        let rep = lagrangian_residual(&spec, &spec.default_grid(64, 64)).unwrap();
        assert!(rep.max_abs < 1e-8, "residual {:.3e}", rep.max_abs);
    }

    #[test]
    fn general_type2_remark_form_is_lagrangian_too() {
        let spec = make_general_type2(
            CurveS3Legendrian::torus_curve(0.6).unwrap(),
            1.0,
            CplxFn::rotating(Complex64::new(0.5, 0.0), 1.0),
            0.0,
            Type2Form::TangentFrame,
        )
        .unwrap();
        let rep = lagrangian_residual(&spec, &spec.default_grid(48, 48)).unwrap();
        assert!(rep.max_abs < 1e-8, "residual {:.3e}", rep.max_abs);
    }

    #[test]
    fn type2_constant_curve_gives_circle_times_plane_curve() {
        // gamma = (1, 0) constant; translation moves the second coordinate.
        let gamma = CurveS3Legendrian::constant([Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let spec = make_general_type2(
            gamma,
            2.0,
            CplxFn::constant(Complex64::new(1.0, 0.5)),
            0.0,
            Type2Form::SymplecticOrthogonal,
        )
        .unwrap();
        // X = (c e^{it}, V2(s)); first coordinate independent of s.
        let a = spec.position(0.2, 1.0).unwrap();
        let b = spec.position(0.8, 1.0).unwrap();
        assert!((a.z1 - b.z1).norm() < 1e-12);
        assert!((a.z2 - b.z2).norm() > 1e-3);
        let rep = lagrangian_residual(&spec, &spec.default_grid(24, 24)).unwrap();
        assert!(rep.max_abs < 1e-10);
    }

    #[test]
    fn non_legendrian_gamma_is_rejected() {
        // (e^{is}, 0) is unit but not Legendrian.
        let bad = CurveS3Legendrian::from_fn((0.0, 2.0 * PI), true, |s| {
            let e = Complex64::new(0.0, s).exp();
            let i = Complex64::new(0.0, 1.0);
            let z = Complex64::new(0.0, 0.0);
            ([e, z], [i * e, z], [-e, z])
        });
        assert!(matches!(
            make_centered_type2(bad, 1.0),
            Err(Error::ConstraintViolation { .. })
        ));
    }

    #[test]
    fn centered_type3_hyperbola_is_lagrangian() {
        let spec =
            make_centered_type3(CurveAdSLegendrian::hyperbola((-1.0, 1.0)), 1.0).unwrap();
        let rep = lagrangian_residual(&spec, &spec.default_grid(48, 48)).unwrap();
        assert!(rep.max_abs < 1e-10, "residual {:.3e}", rep.max_abs);
    }

    #[test]
    fn general_type3_seeded_is_lagrangian() {
        let spec = make_general_type3(
            CurveAdSLegendrian::hyperbola((-1.0, 1.0)),
            1.0,
            CplxFn::constant(Complex64::new(1.0, 0.0)),
            0.0,
        )
        .unwrap();
        let rep = lagrangian_residual(&spec, &spec.default_grid(64, 64)).unwrap();
        assert!(rep.max_abs < 1e-8, "residual {:.3e}", rep.max_abs);
    }

    #[test]
    fn type3_with_vanishing_alpha1_is_a_circle_in_a_complex_line() {
        // alpha1 = 0 forces alpha2 constant on the unit circle (the
        // Legendrian condition kills its phase velocity); the image is a
        // single circle inside the second complex coordinate line.
        let a2 = Complex64::new(0.6, 0.8);
        let alpha = CurveAdSLegendrian::from_fn((0.0, 1.0), false, move |_| {
            let z = Complex64::new(0.0, 0.0);
            ([z, a2], [z, z], [z, z])
        });
        let spec = make_centered_type3(alpha, 1.0).unwrap();
        for t in [0.0, 1.0, 2.0] {
            let p = spec.position(0.5, t).unwrap();
            assert!(p.z1.norm() < 1e-15);
            assert!((p.z2.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn circle_frame_examples() {
        let spec = make_centered_type1(CurvePlanar::circle(1.0)).unwrap();
        let f = circle_frame(&spec, 0.0).unwrap();
        assert!(f.center.norm() < 1e-15);
        assert!((f.radius - 1.0).abs() < 1e-12);
        assert!((f.e1 - PointC2::from_re(1.0, 0.0)).norm() < 1e-12);
        assert!((f.e2 - PointC2::from_re(0.0, 1.0)).norm() < 1e-12);

        let spec3 =
            make_centered_type3(CurveAdSLegendrian::hyperbola((-2.0, 2.0)), 1.0).unwrap();
        let f3 = circle_frame(&spec3, 1.0).unwrap();
        let expect = (1f64.sinh().powi(2) + 1f64.cosh().powi(2)).sqrt();
        assert!((f3.radius - expect).abs() < 1e-12);
    }

    #[test]
    fn general_type1_center_traces_the_translation() {
        let spec = make_general_type1(
            CurvePlanar::circle(1.0),
            RealFn::constant(1.0),
            RealFn::constant(0.0),
            0.0,
        )
        .unwrap();
        // Center = int_0^s e^{i u} (1, 0) du = (-i(e^{is} - 1), 0).
        let s = 1.3;
        let f = circle_frame(&spec, s).unwrap();
        let i = Complex64::new(0.0, 1.0);
        let expect = PointC2::new(-i * (Complex64::new(0.0, s).exp() - 1.0), Complex64::new(0.0, 0.0));
        assert!((f.center - expect).norm() < 1e-9, "center error {:.2e}", (f.center - expect).norm());
    }

    #[test]
    fn r2k_values_per_family() {
        // Type I: K = 0 identically.
        let t1 = make_centered_type1(CurvePlanar::circle(1.0)).unwrap();
        let rep = r2k_invariant(&t1, 33).unwrap();
        assert!(rep.max_abs < 1e-12);
        let f = circle_frame(&t1, 0.5).unwrap();
        assert!(kahler_angle(&f.e1, &f.e2).unwrap().abs() < 1e-12);

        // Type II: K = -1, r = |c|.
        let t2 = make_centered_type2(CurveS3Legendrian::great_circle(), 1.0).unwrap();
        let f2 = circle_frame(&t2, 0.7).unwrap();
        assert!((kahler_angle(&f2.e1, &f2.e2).unwrap() + 1.0).abs() < 1e-12);
        let rep2 = r2k_invariant(&t2, 33).unwrap();
        assert!(rep2.max_abs < 1e-12);

        // Type III: r^2 K = c^2, with K = 1/(2|a1|^2 + 1).
        let t3 = make_centered_type3(CurveAdSLegendrian::hyperbola((-1.0, 1.0)), 1.0).unwrap();
        let f3 = circle_frame(&t3, 0.6).unwrap();
        let a1 = 0.6f64.sinh();
        let expect_k = 1.0 / (2.0 * a1 * a1 + 1.0);
        assert!((kahler_angle(&f3.e1, &f3.e2).unwrap() - expect_k).abs() < 1e-12);
        let rep3 = r2k_invariant(&t3, 33).unwrap();
        assert!(rep3.max_abs < 1e-9, "r2K spread {:.3e}", rep3.max_abs);
        // The constant itself is c^2 = 1.
        let r2k = f3.radius * f3.radius * kahler_angle(&f3.e1, &f3.e2).unwrap();
        assert!((r2k - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ruled_spec_is_not_cyclic() {
        let spec = crate::ruled::make_ruled(
            CurveS3Legendrian::great_circle(),
            CurvePlanar::line(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), (0.0, 1.0)),
            0.0,
        )
        .unwrap();
        assert!(matches!(
            circle_frame(&spec, 0.5),
            Err(Error::NotCyclic { .. })
        ));
    }

    #[test]
    fn translation_derivative_matches_integrand() {
        let spec = make_general_type2(
            CurveS3Legendrian::torus_curve(0.6).unwrap(),
            1.0,
            CplxFn::rotating(Complex64::new(1.0, 0.0), 1.0),
            0.0,
            Type2Form::SymplecticOrthogonal,
        )
        .unwrap();
        let h = 1e-5;
        for s in [0.5, 2.0, 5.0] {
            let fd = (spec.translation(s + h) - spec.translation(s - h)).scale(0.5 / h);
            // Integrand W (conj g2, -conj g1) at s.
            if let ImmersionSpec::GeneralType2(p) = &spec {
                let (g, _, _) = p.gamma.jet(s);
                let wv = p.w.value(s);
                let expect = PointC2::new(wv * g[1].conj(), -wv * g[0].conj());
                assert!((fd - expect).norm() < 1e-6, "at s = {s}: {:.3e}", (fd - expect).norm());
            } else {
                unreachable!()
            }
        }
    }
}
