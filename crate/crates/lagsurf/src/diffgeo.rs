//! Intrinsic and extrinsic geometry engine: first fundamental form, mean
//! curvature (half-trace convention), Lagrangian angle and its derivative
//! fields, a divergence-form Laplace-Beltrami operator, and the Kaehler angle.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::immersion::{ImmersionSpec, SurfaceJet};
use crate::point::PointC2;
use crate::report::{GridSpec, ResidualReport};

/// First fundamental form coefficients.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct Metric2 {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub det: f64,
}

impl Metric2 {
    pub fn new(e: f64, f: f64, g: f64) -> Self {
        Self {
            e,
            f,
            g,
            det: e * g - f * f,
        }
    }

    /// Degenerate relative to the local scale.
    pub fn is_degenerate(&self) -> bool {
        let scale = (self.e + self.g).max(f64::MIN_POSITIVE);
        self.det <= 1e-12 * scale * scale
    }
}

/// Evaluate the jet of an immersion (analytic derivatives per family).
pub fn surface_jet(spec: &ImmersionSpec, s: f64, t: f64) -> Result<SurfaceJet> {
    spec.jet(s, t)
}

/// E = |xs|^2, F = <xs, xt>, G = |xt|^2.
pub fn first_fundamental_form(jet: &SurfaceJet) -> Metric2 {
    Metric2::new(jet.xs.dot(&jet.xs), jet.xs.dot(&jet.xt), jet.xt.dot(&jet.xt))
}

fn tangential_part(v: &PointC2, jet: &SurfaceJet, m: &Metric2) -> PointC2 {
    let vs = v.dot(&jet.xs);
    let vt = v.dot(&jet.xt);
    let a = (m.g * vs - m.f * vt) / m.det;
    let b = (m.e * vt - m.f * vs) / m.det;
    jet.xs.scale(a) + jet.xt.scale(b)
}

/// Normal component of a vector at the given jet.
pub fn normal_part(v: &PointC2, jet: &SurfaceJet, m: &Metric2) -> PointC2 {
    *v - tangential_part(v, jet, m)
}

/// Mean curvature vector, half-trace convention:
/// 2 <H, n> (EG - F^2) = G <xss, n> + E <xtt, n> - 2 F <xst, n>.
pub fn mean_curvature(jet: &SurfaceJet, metric: &Metric2) -> Result<PointC2> {
    if metric.is_degenerate() {
        return Err(Error::DegenerateMetric {
            s: f64::NAN,
            t: f64::NAN,
            det: metric.det,
        });
    }
    let combo = jet.xss.scale(metric.g) + jet.xtt.scale(metric.e) - jet.xst.scale(2.0 * metric.f);
    Ok(normal_part(&combo.scale(0.5 / metric.det), jet, metric))
}

/// Orthonormal normal frame for a Lagrangian point: n1 = J xs normalized,
/// n2 = the component of J xt orthogonal to n1, normalized.
#[derive(Clone, Copy, Debug)]
pub struct NormalFrame {
    pub n1: PointC2,
    pub n2: PointC2,
}

pub fn normal_frame(jet: &SurfaceJet) -> Result<NormalFrame> {
    let n1 = jet
        .xs
        .j()
        .normalized()
        .ok_or(Error::DegenerateCurve { s: f64::NAN, speed: 0.0 })?;
    let jt = jet.xt.j();
    let n2 = (jt - n1.scale(jt.dot(&n1)))
        .normalized()
        .ok_or(Error::DegenerateCurve { s: f64::NAN, speed: 0.0 })?;
    Ok(NormalFrame { n1, n2 })
}

/// Kaehler angle K = <e1, J e2> of the plane spanned by an orthonormal pair.
pub fn kahler_angle(e1: &PointC2, e2: &PointC2) -> Result<f64> {
    let tol = 1e-8;
    let n1 = (e1.norm() - 1.0).abs();
    let n2 = (e2.norm() - 1.0).abs();
    let ip = e1.dot(e2).abs();
    if n1 > tol || n2 > tol || ip > tol {
        return Err(Error::NotOrthonormal(format!(
            "|e1|-1 = {n1:.2e}, |e2|-1 = {n2:.2e}, <e1,e2> = {ip:.2e}"
        )));
    }
    Ok(e1.dot(&e2.j()))
}

/// Lagrangian angle: argument of det_C of the Gram-Schmidt orthonormalized
/// tangent frame. Errors if the plane is not Lagrangian (|det| far from 1).
pub fn lagrangian_angle(jet: &SurfaceJet) -> Result<f64> {
    let m = first_fundamental_form(jet);
    if m.is_degenerate() {
        return Err(Error::DegenerateMetric {
            s: f64::NAN,
            t: f64::NAN,
            det: m.det,
        });
    }
    // Gram-Schmidt coefficients are real, so the normalized determinant is
    // det_C(xs, xt) / sqrt(EG - F^2).
    let det = jet.xs.det_c(&jet.xt) / m.det.sqrt();
    let modulus = det.norm();
    if (modulus - 1.0).abs() > 1e-6 {
        return Err(Error::NonLagrangian { modulus });
    }
    Ok(det.arg())
}

/// Pointwise Lagrangian defect |<xs, J xt>| / max(|xs||xt|, eps).
pub fn lagrangian_defect(jet: &SurfaceJet) -> f64 {
    let scale = (jet.xs.norm() * jet.xt.norm()).max(1e-12);
    jet.xs.dot(&jet.xt.j()).abs() / scale
}

/// Sweep the Lagrangian residual over a grid.
pub fn lagrangian_residual(spec: &ImmersionSpec, grid: &GridSpec) -> Result<ResidualReport> {
    let periodic = spec.periodic_t();
    let s_nodes = grid.s_nodes();
    let t_nodes = grid.t_nodes(periodic);
    let rows: Vec<Vec<((f64, f64), f64)>> = s_nodes
        .par_iter()
        .map(|&s| {
            t_nodes
                .iter()
                .map(|&t| {
                    let jet = spec.jet(s, t)?;
                    Ok(((s, t), lagrangian_defect(&jet)))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidualReport::from_samples(
        "lagrangian",
        *grid,
        rows.into_iter().flatten(),
        0,
    ))
}

/// Lagrangian-angle derivative fields with the metric, on a uniform grid.
#[derive(Clone, Debug)]
pub struct BetaField {
    pub grid: GridSpec,
    pub periodic_t: bool,
    pub beta_s: Vec<f64>,
    pub beta_t: Vec<f64>,
    pub e: Vec<f64>,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    /// Degenerate nodes (row-major indices) excluded from the field.
    pub excluded: Vec<(usize, usize)>,
}

impl BetaField {
    #[inline]
    pub fn idx(&self, i_s: usize, i_t: usize) -> usize {
        i_s * self.grid.n_t + i_t
    }
}

/// beta_s, beta_t via the logarithmic derivative of the unnormalized complex
/// determinant of (xs, xt): d(arg det) = Im(d det / det). Branch-cut free.
pub fn beta_derivative_field(spec: &ImmersionSpec, grid: &GridSpec) -> Result<BetaField> {
    let periodic = spec.periodic_t();
    let s_nodes = grid.s_nodes();
    let t_nodes = grid.t_nodes(periodic);
    let n = s_nodes.len() * t_nodes.len();
    let mut field = BetaField {
        grid: *grid,
        periodic_t: periodic,
        beta_s: vec![f64::NAN; n],
        beta_t: vec![f64::NAN; n],
        e: vec![f64::NAN; n],
        f: vec![f64::NAN; n],
        g: vec![f64::NAN; n],
        excluded: Vec::new(),
    };
    struct Node {
        i_s: usize,
        i_t: usize,
        ok: Option<(f64, f64, f64, f64, f64)>,
    }
    let nodes: Vec<Node> = s_nodes
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i_s, &s)| {
            let t_nodes = t_nodes.clone();
            t_nodes.into_iter().enumerate().map(move |(i_t, t)| (i_s, i_t, s, t))
        })
        .map(|(i_s, i_t, s, t)| {
            let jet = spec.jet(s, t)?;
            let m = first_fundamental_form(&jet);
            let det = jet.xs.det_c(&jet.xt);
            if m.is_degenerate() || det.norm_sqr() < 1e-12 * m.det.abs().max(1e-300) {
                return Ok(Node { i_s, i_t, ok: None });
            }
            let d_s = jet.xss.det_c(&jet.xt) + jet.xs.det_c(&jet.xst);
            let d_t = jet.xst.det_c(&jet.xt) + jet.xs.det_c(&jet.xtt);
            let beta_s = (d_s / det).im;
            let beta_t = (d_t / det).im;
            if !(beta_s.is_finite() && beta_t.is_finite()) {
                return Err(Error::NonFiniteEval(s));
            }
            Ok(Node {
                i_s,
                i_t,
                ok: Some((beta_s, beta_t, m.e, m.f, m.g)),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    for node in nodes {
        let k = node.i_s * t_nodes.len() + node.i_t;
        match node.ok {
            Some((bs, bt, e, f, g)) => {
                field.beta_s[k] = bs;
                field.beta_t[k] = bt;
                field.e[k] = e;
                field.f[k] = f;
                field.g[k] = g;
            }
            None => field.excluded.push((node.i_s, node.i_t)),
        }
    }
    Ok(field)
}

/// Pointwise values of the divergence-form Laplace-Beltrami of the
/// Lagrangian angle by second-order central differences, using the full
/// inverse metric (F not assumed zero). Interior nodes in s; periodic wrap
/// in t for cyclic families. Returns ((s, t), laplacian) samples plus the
/// number of excluded nodes.
pub fn laplace_beltrami_values(field: &BetaField) -> Result<(Vec<((f64, f64), f64)>, usize)> {
    let (n_s, n_t) = (field.grid.n_s, field.grid.n_t);
    if n_s < 16 || n_t < 16 {
        return Err(Error::GridTooCoarse {
            n_s,
            n_t,
            min: 16,
        });
    }
    let hs = field.grid.s_step();
    let ht = field.grid.t_step(field.periodic_t);
    let s_nodes = field.grid.s_nodes();
    let t_nodes = field.grid.t_nodes(field.periodic_t);
    // Contravariant flux components P = sqrt(g)(g^ss b_s + g^st b_t),
    // Q = sqrt(g)(g^st b_s + g^tt b_t).
    let n = n_s * n_t;
    let mut p = vec![f64::NAN; n];
    let mut q = vec![f64::NAN; n];
    let mut sqrt_det = vec![f64::NAN; n];
    for k in 0..n {
        let (e, f, g) = (field.e[k], field.f[k], field.g[k]);
        let det = e * g - f * f;
        if !(det > 0.0) || !field.beta_s[k].is_finite() {
            continue;
        }
        let sd = det.sqrt();
        let (bs, bt) = (field.beta_s[k], field.beta_t[k]);
        p[k] = sd * ((g / det) * bs + (-f / det) * bt);
        q[k] = sd * ((-f / det) * bs + (e / det) * bt);
        sqrt_det[k] = sd;
    }
    let mut samples = Vec::new();
    let mut excluded = field.excluded.len();
    for i_s in 1..n_s - 1 {
        let t_iter: Vec<usize> = if field.periodic_t {
            (0..n_t).collect()
        } else {
            (1..n_t - 1).collect()
        };
        for i_t in t_iter {
            let k = field.idx(i_s, i_t);
            let ks_p = field.idx(i_s + 1, i_t);
            let ks_m = field.idx(i_s - 1, i_t);
            let (it_p, it_m) = if field.periodic_t {
                ((i_t + 1) % n_t, (i_t + n_t - 1) % n_t)
            } else {
                (i_t + 1, i_t - 1)
            };
            let kt_p = field.idx(i_s, it_p);
            let kt_m = field.idx(i_s, it_m);
            let vals = [p[ks_p], p[ks_m], q[kt_p], q[kt_m], sqrt_det[k]];
            if vals.iter().any(|v| !v.is_finite()) {
                excluded += 1;
                continue;
            }
            let div = (p[ks_p] - p[ks_m]) / (2.0 * hs) + (q[kt_p] - q[kt_m]) / (2.0 * ht);
            let lap = div / sqrt_det[k];
            samples.push(((s_nodes[i_s], t_nodes[i_t]), lap));
        }
    }
    if samples.is_empty() {
        return Err(Error::GridTooCoarse { n_s, n_t, min: 16 });
    }
    Ok((samples, excluded))
}

/// Report form of [`laplace_beltrami_values`]: the |Delta beta| summary.
pub fn laplace_beltrami_beta(field: &BetaField) -> Result<ResidualReport> {
    let (samples, excluded) = laplace_beltrami_values(field)?;
    Ok(ResidualReport::from_samples(
        "laplace_beltrami_beta",
        field.grid,
        samples,
        excluded,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::immersion::{CenteredType1, CenteredType2, ProductCircleCurve};
    use crate::curve::{CurvePlanar, CurveS3Legendrian};
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn product_torus(r1: f64, r2: f64) -> ImmersionSpec {
        ImmersionSpec::ProductCircleCurve(ProductCircleCurve {
            r: r1,
            curve: CurvePlanar::circle(r2),
        })
    }

    #[test]
    fn product_torus_metric_is_unit_for_unit_radii() {
        // Unit-speed second factor: (e^{is}, e^{it}) has E = G = 1, F = 0.
        let spec = product_torus(1.0, 1.0);
        let j = spec.jet(1.0, 2.0).unwrap();
        let m = first_fundamental_form(&j);
        assert!((m.e - 1.0).abs() < 1e-14);
        assert!((m.g - 1.0).abs() < 1e-14);
        assert!(m.f.abs() < 1e-14);
    }

    #[test]
    fn centered_type1_metric_unit_speed() {
        let spec = ImmersionSpec::CenteredType1(CenteredType1 {
            gamma: CurvePlanar::circle(2.0),
        });
        let j = spec.jet(1.0, 0.3).unwrap();
        let m = first_fundamental_form(&j);
        assert!((m.e - 1.0).abs() < 1e-13);
        assert!(m.f.abs() < 1e-13);
        assert!((m.g - 4.0).abs() < 1e-13);
    }

    #[test]
    fn centered_type2_metric_flat() {
        let spec = ImmersionSpec::CenteredType2(CenteredType2 {
            gamma: CurveS3Legendrian::great_circle(),
            c: 1.0,
        });
        let j = spec.jet(0.7, 1.1).unwrap();
        let m = first_fundamental_form(&j);
        assert!((m.e - 1.0).abs() < 1e-13);
        assert!(m.f.abs() < 1e-13);
        assert!((m.g - 1.0).abs() < 1e-13);
    }

    #[test]
    fn clifford_torus_mean_curvature_is_minus_position() {
        let a = std::f64::consts::FRAC_1_SQRT_2;
        let spec = product_torus(a, a);
        for (s, t) in [(0.1, 0.2), (1.0, 4.0), (3.0, 5.5)] {
            let j = spec.jet(s, t).unwrap();
            let m = first_fundamental_form(&j);
            let h = mean_curvature(&j, &m).unwrap();
            assert!((h + j.x).norm() < 1e-10, "H + X = {:?}", (h + j.x).norm());
        }
    }

    #[test]
    fn product_torus_mean_curvature_magnitude() {
        let (r1, r2) = (0.8, 2.5);
        // Angular parametrizations (r1 e^{is}, r2 e^{it}).
        let spec = ImmersionSpec::ProductCircleCurve(ProductCircleCurve {
            r: r1,
            curve: CurvePlanar::circle_angular(r2, 1.0, (0.0, 2.0 * PI)),
        });
        let j = spec.jet(0.4, 1.9).unwrap();
        let m = first_fundamental_form(&j);
        let h = mean_curvature(&j, &m).unwrap();
        let expect = 0.5 * (1.0 / (r1 * r1) + 1.0 / (r2 * r2)).sqrt();
        assert!((h.norm() - expect).abs() < 1e-12);
    }

    #[test]
    fn plane_has_zero_mean_curvature() {
        let spec = ImmersionSpec::ProductLineCurve(crate::immersion::ProductLineCurve {
            dir: Complex64::new(1.0, 0.0),
            offset: Complex64::new(0.0, 0.0),
            curve: CurvePlanar::line(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), (-3.0, 3.0)),
        });
        let j = spec.jet(0.5, 1.5).unwrap();
        let m = first_fundamental_form(&j);
        let h = mean_curvature(&j, &m).unwrap();
        assert!(h.norm() < 1e-14);
    }

    #[test]
    fn lagrangian_angle_of_flat_plane_is_zero() {
        let jet = SurfaceJet {
            x: PointC2::zero(),
            xs: PointC2::from_re(1.0, 0.0),
            xt: PointC2::from_re(0.0, 1.0),
            xss: PointC2::zero(),
            xst: PointC2::zero(),
            xtt: PointC2::zero(),
        };
        assert_eq!(lagrangian_angle(&jet).unwrap(), 0.0);
    }

    #[test]
    fn lagrangian_angle_type1_is_theta_plus_phi() {
        let gamma = CurvePlanar::circle(1.0); // gamma = e^{is}, theta = s + pi/2, phi = s
        let spec = ImmersionSpec::CenteredType1(CenteredType1 { gamma });
        for s in [0.2, 1.0, 2.7] {
            let j = spec.jet(s, 0.9).unwrap();
            let beta = lagrangian_angle(&j).unwrap();
            let expected = 2.0 * s + std::f64::consts::FRAC_PI_2;
            let diff = (beta - expected).rem_euclid(2.0 * PI).min(
                (expected - beta).rem_euclid(2.0 * PI),
            );
            assert!(diff < 1e-9, "beta {beta} vs {expected}");
        }
    }

    #[test]
    fn complex_line_is_rejected_as_non_lagrangian() {
        let jet = SurfaceJet {
            x: PointC2::zero(),
            xs: PointC2::from_re(1.0, 0.0),
            xt: PointC2::new(Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)),
            xss: PointC2::zero(),
            xst: PointC2::zero(),
            xtt: PointC2::zero(),
        };
        assert!(matches!(
            lagrangian_angle(&jet),
            Err(Error::NonLagrangian { .. })
        ));
    }

    #[test]
    fn kahler_angle_examples() {
        let e1 = PointC2::from_re(1.0, 0.0);
        let e2 = PointC2::from_re(0.0, 1.0);
        assert_eq!(kahler_angle(&e1, &e2).unwrap(), 0.0);
        let e2c = PointC2::new(Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0));
        assert_eq!(kahler_angle(&e1, &e2c).unwrap(), -1.0);
        assert!(kahler_angle(&e1, &e1).is_err());
        let e_big = PointC2::from_re(2.0, 0.0);
        assert!(kahler_angle(&e_big, &e2).is_err());
    }

    #[test]
    fn beta_field_on_product_torus_is_one_one() {
        let spec = product_torus(1.0, 1.0);
        let grid = spec.default_grid(24, 24);
        let field = beta_derivative_field(&spec, &grid).unwrap();
        for k in 0..field.beta_s.len() {
            assert!((field.beta_s[k] - 1.0).abs() < 1e-12);
            assert!((field.beta_t[k] - 1.0).abs() < 1e-12);
        }
        assert!(field.excluded.is_empty());
    }

    #[test]
    fn beta_t_is_two_on_centered_type2() {
        let spec = ImmersionSpec::CenteredType2(CenteredType2 {
            gamma: CurveS3Legendrian::torus_curve(0.6).unwrap(),
            c: 1.0,
        });
        let grid = spec.default_grid(20, 20);
        let field = beta_derivative_field(&spec, &grid).unwrap();
        for k in 0..field.beta_t.len() {
            assert!((field.beta_t[k] - 2.0).abs() < 1e-11);
        }
    }

    #[test]
    fn laplacian_vanishes_on_product_torus() {
        let spec = product_torus(1.0, 2.0);
        let grid = spec.default_grid(32, 32);
        let field = beta_derivative_field(&spec, &grid).unwrap();
        let rep = laplace_beltrami_beta(&field).unwrap();
        assert!(rep.max_abs < 1e-8, "max |lap beta| = {:.3e}", rep.max_abs);
    }

    #[test]
    fn laplacian_rejects_coarse_grids() {
        let spec = product_torus(1.0, 1.0);
        let grid = spec.default_grid(8, 8);
        let field = beta_derivative_field(&spec, &grid).unwrap();
        assert!(matches!(
            laplace_beltrami_beta(&field),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn normal_frame_is_orthonormal_and_normal_on_lagrangian_spec() {
        let spec = product_torus(1.0, 2.0);
        let j = spec.jet(1.3, 0.8).unwrap();
        let f = normal_frame(&j).unwrap();
        assert!((f.n1.norm() - 1.0).abs() < 1e-12);
        assert!((f.n2.norm() - 1.0).abs() < 1e-12);
        assert!(f.n1.dot(&f.n2).abs() < 1e-12);
        for n in [f.n1, f.n2] {
            assert!(n.dot(&j.xs).abs() < 1e-10);
            assert!(n.dot(&j.xt).abs() < 1e-10);
        }
    }
}
