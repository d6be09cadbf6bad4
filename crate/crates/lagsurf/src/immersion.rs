//! The surface-family catalog: one variant per immersion, with analytic jet
//! evaluation. Translation terms are cumulative adaptive quadratures cached
//! per spec at construction.

use std::sync::Arc;

use num_complex::Complex64;

use crate::curve::{CplxFn, CurveAdSLegendrian, CurvePlanar, CurveS3Legendrian, RealFn};
use crate::error::{Error, Result};
use crate::numerics::CumulativeIntegral;
use crate::point::PointC2;
use crate::report::GridSpec;

const TRANSLATION_TOL: f64 = 1e-10;

/// Cached translation term V(s) = int_{s0}^{s} integrand(u) du.
#[derive(Clone)]
pub struct Translation {
    integral: CumulativeIntegral<PointC2>,
}

impl Translation {
    pub(crate) fn new(
        integrand: Arc<dyn Fn(f64) -> PointC2 + Send + Sync>,
        s0: f64,
        domain: (f64, f64),
    ) -> Result<Self> {
        Ok(Self {
            integral: CumulativeIntegral::new(integrand, s0, domain, TRANSLATION_TOL)?,
        })
    }

    pub fn eval(&self, s: f64) -> PointC2 {
        self.integral.eval(s)
    }

    pub fn base_point(&self) -> f64 {
        self.integral.base_point()
    }
}

/// Second form of the type II translation frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Type2Form {
    /// Along (conj g2, -conj g1): the symplectic-orthogonal basis.
    SymplecticOrthogonal,
    /// Along (g1', g2'): the tangent-frame alternative (needs unit speed).
    TangentFrame,
}

#[derive(Clone)]
pub struct CenteredType1 {
    pub gamma: CurvePlanar,
}

#[derive(Clone)]
pub struct GeneralType1 {
    pub gamma: CurvePlanar,
    pub w1: RealFn,
    pub w2: RealFn,
    pub s0: f64,
    pub(crate) trans: Translation,
}

#[derive(Clone)]
pub struct CenteredType2 {
    pub gamma: CurveS3Legendrian,
    pub c: f64,
}

#[derive(Clone)]
pub struct GeneralType2 {
    pub gamma: CurveS3Legendrian,
    pub c: f64,
    pub w: CplxFn,
    pub s0: f64,
    pub form: Type2Form,
    pub(crate) trans: Translation,
}

#[derive(Clone)]
pub struct CenteredType3 {
    pub alpha: CurveAdSLegendrian,
    pub c: f64,
}

#[derive(Clone)]
pub struct GeneralType3 {
    pub alpha: CurveAdSLegendrian,
    pub c: f64,
    pub w: CplxFn,
    pub s0: f64,
    pub(crate) trans: Translation,
}

#[derive(Clone)]
pub struct Ruled {
    pub gamma: CurveS3Legendrian,
    pub alpha: CurvePlanar,
    pub s0: f64,
    /// Optional reparametrization t -> t + tau(s); the image is unchanged.
    pub t_shift: Option<RealFn>,
    pub(crate) trans: Translation,
}

#[derive(Clone)]
pub struct ProductCircleCurve {
    pub r: f64,
    pub curve: CurvePlanar,
}

#[derive(Clone)]
pub struct ProductLineCurve {
    /// Unit direction of the line in the first complex coordinate.
    pub dir: Complex64,
    pub offset: Complex64,
    pub curve: CurvePlanar,
}

#[derive(Clone)]
pub struct CcProduct {
    pub alpha: CurveAdSLegendrian,
    pub gamma: CurveS3Legendrian,
}

/// Tagged union of every surface family handled by the crate.
#[derive(Clone)]
pub enum ImmersionSpec {
    CenteredType1(CenteredType1),
    GeneralType1(GeneralType1),
    CenteredType2(CenteredType2),
    GeneralType2(GeneralType2),
    CenteredType3(CenteredType3),
    GeneralType3(GeneralType3),
    Ruled(Ruled),
    ProductCircleCurve(ProductCircleCurve),
    ProductLineCurve(ProductLineCurve),
    CcProduct(CcProduct),
}

/// Position and first/second partial derivatives of an immersion at a point.
#[derive(Clone, Copy, Debug)]
pub struct SurfaceJet {
    pub x: PointC2,
    pub xs: PointC2,
    pub xt: PointC2,
    pub xss: PointC2,
    pub xst: PointC2,
    pub xtt: PointC2,
}

impl SurfaceJet {
    pub fn is_finite(&self) -> bool {
        self.x.is_finite()
            && self.xs.is_finite()
            && self.xt.is_finite()
            && self.xss.is_finite()
            && self.xst.is_finite()
            && self.xtt.is_finite()
    }
}

fn cs(t: f64) -> (f64, f64) {
    (t.cos(), t.sin())
}

/// Pack a complex scalar times the direction (cos t, sin t).
fn radial(z: Complex64, t: f64) -> PointC2 {
    let (c, s) = cs(t);
    PointC2::new(z * c, z * s)
}

/// Pack a complex scalar times the direction (-sin t, cos t).
fn angular(z: Complex64, t: f64) -> PointC2 {
    let (c, s) = cs(t);
    PointC2::new(-z * s, z * c)
}

impl ImmersionSpec {
    pub fn family_name(&self) -> &'static str {
        match self {
            ImmersionSpec::CenteredType1(_) => "centered_type1",
            ImmersionSpec::GeneralType1(_) => "general_type1",
            ImmersionSpec::CenteredType2(_) => "centered_type2",
            ImmersionSpec::GeneralType2(_) => "general_type2",
            ImmersionSpec::CenteredType3(_) => "centered_type3",
            ImmersionSpec::GeneralType3(_) => "general_type3",
            ImmersionSpec::Ruled(_) => "ruled",
            ImmersionSpec::ProductCircleCurve(_) => "product_circle_curve",
            ImmersionSpec::ProductLineCurve(_) => "product_line_curve",
            ImmersionSpec::CcProduct(_) => "cc_product",
        }
    }

    /// Parameter domain in s (from the generating curve).
    pub fn s_domain(&self) -> (f64, f64) {
        match self {
            ImmersionSpec::CenteredType1(p) => p.gamma.domain,
            ImmersionSpec::GeneralType1(p) => p.gamma.domain,
            ImmersionSpec::CenteredType2(p) => p.gamma.domain,
            ImmersionSpec::GeneralType2(p) => p.gamma.domain,
            ImmersionSpec::CenteredType3(p) => p.alpha.domain,
            ImmersionSpec::GeneralType3(p) => p.alpha.domain,
            ImmersionSpec::Ruled(p) => p.gamma.domain,
            ImmersionSpec::ProductCircleCurve(p) => p.curve.domain,
            ImmersionSpec::ProductLineCurve(p) => p.curve.domain,
            ImmersionSpec::CcProduct(p) => p.alpha.domain,
        }
    }

    /// Default t interval: one full circle for cyclic families, a truncated
    /// ruling interval otherwise.
    pub fn t_domain(&self) -> (f64, f64) {
        match self {
            ImmersionSpec::Ruled(_) | ImmersionSpec::ProductLineCurve(_) => (-5.0, 5.0),
            ImmersionSpec::CcProduct(p) => p.gamma.domain,
            _ => (0.0, 2.0 * std::f64::consts::PI),
        }
    }

    /// Whether the t direction is periodic with period t_domain length.
    pub fn periodic_t(&self) -> bool {
        !matches!(
            self,
            ImmersionSpec::Ruled(_) | ImmersionSpec::ProductLineCurve(_) | ImmersionSpec::CcProduct(_)
        )
    }

    /// Circle-foliated families (leaves are round circles).
    pub fn is_cyclic(&self) -> bool {
        !matches!(
            self,
            ImmersionSpec::Ruled(_) | ImmersionSpec::ProductLineCurve(_) | ImmersionSpec::CcProduct(_)
        )
    }

    pub fn default_grid(&self, n_s: usize, n_t: usize) -> GridSpec {
        GridSpec::new(n_s, n_t, self.s_domain(), self.t_domain())
    }

    /// Translation term V(s) (zero for centered families and products).
    pub fn translation(&self, s: f64) -> PointC2 {
        match self {
            ImmersionSpec::GeneralType1(p) => p.trans.eval(s),
            ImmersionSpec::GeneralType2(p) => p.trans.eval(s),
            ImmersionSpec::GeneralType3(p) => p.trans.eval(s),
            ImmersionSpec::Ruled(p) => p.trans.eval(s),
            _ => PointC2::zero(),
        }
    }

    fn in_domain(&self, s: f64, t: f64) -> bool {
        let (a, b) = self.s_domain();
        let pad = 1e-9 * (1.0 + (b - a).abs());
        if !(s >= a - pad && s <= b + pad) {
            return false;
        }
        if self.periodic_t() {
            t.is_finite()
        } else if let ImmersionSpec::CcProduct(p) = self {
            let (ta, tb) = p.gamma.domain;
            t >= ta - pad && t <= tb + pad
        } else {
            t.is_finite()
        }
    }

    /// Analytic jet of the immersion at (s, t).
    pub fn jet(&self, s: f64, t: f64) -> Result<SurfaceJet> {
        if !self.in_domain(s, t) {
            return Err(Error::OutOfDomain { s, t });
        }
        let jet = match self {
            ImmersionSpec::CenteredType1(p) => {
                let (g, dg, ddg) = p.gamma.jet(s);
                SurfaceJet {
                    x: radial(g, t),
                    xs: radial(dg, t),
                    xt: angular(g, t),
                    xss: radial(ddg, t),
                    xst: angular(dg, t),
                    xtt: -radial(g, t),
                }
            }
            ImmersionSpec::GeneralType1(p) => {
                let (g, dg, ddg) = p.gamma.jet(s);
                let (w1, dw1, _) = p.w1.eval(s);
                let (w2, dw2, _) = p.w2.eval(s);
                // e^{i phi} = gamma / r, differentiated without unwrapping.
                let r = g.norm();
                let u = g / r;
                let dr = (dg * g.conj()).re / r;
                let du = dg / r - g * (dr / (r * r));
                let v1 = PointC2::new(u * w1, u * w2);
                let dv1 = PointC2::new(du * w1 + u * dw1, du * w2 + u * dw2);
                SurfaceJet {
                    x: radial(g, t) + self.translation(s),
                    xs: radial(dg, t) + v1,
                    xt: angular(g, t),
                    xss: radial(ddg, t) + dv1,
                    xst: angular(dg, t),
                    xtt: -radial(g, t),
                }
            }
            ImmersionSpec::CenteredType2(p) => type2_jet(&p.gamma, p.c, None, s, t),
            ImmersionSpec::GeneralType2(p) => {
                type2_jet(&p.gamma, p.c, Some((&p.w, p.form, &p.trans)), s, t)
            }
            ImmersionSpec::CenteredType3(p) => type3_jet(&p.alpha, p.c, None, s, t),
            ImmersionSpec::GeneralType3(p) => {
                type3_jet(&p.alpha, p.c, Some((&p.w, &p.trans)), s, t)
            }
            ImmersionSpec::Ruled(p) => {
                let (g, dg, ddg) = p.gamma.jet(s);
                let (a, da, _) = p.alpha.jet(s);
                let (tau, dtau, ddtau) = match &p.t_shift {
                    Some(f) => f.eval(s),
                    None => (0.0, 0.0, 0.0),
                };
                let te = t + tau;
                let gv = PointC2::new(g[0], g[1]);
                let dgv = PointC2::new(dg[0], dg[1]);
                let ddgv = PointC2::new(ddg[0], ddg[1]);
                // X = gamma (t + tau) + V, V' = alpha gamma'.
                let x = gv.scale(te) + self.translation(s);
                let xs = dgv.scale(te) + gv.scale(dtau) + dgv.scale_c(a);
                let xss = ddgv.scale(te)
                    + dgv.scale(2.0 * dtau)
                    + gv.scale(ddtau)
                    + dgv.scale_c(da)
                    + ddgv.scale_c(a);
                SurfaceJet {
                    x,
                    xs,
                    xt: gv,
                    xss,
                    xst: dgv,
                    xtt: PointC2::zero(),
                }
            }
            ImmersionSpec::ProductCircleCurve(p) => {
                let (g, dg, ddg) = p.curve.jet(s);
                let e = Complex64::new(0.0, t).exp();
                let i = Complex64::new(0.0, 1.0);
                let zero = Complex64::new(0.0, 0.0);
                SurfaceJet {
                    x: PointC2::new(p.r * e, g),
                    xs: PointC2::new(zero, dg),
                    xt: PointC2::new(p.r * i * e, zero),
                    xss: PointC2::new(zero, ddg),
                    xst: PointC2::new(zero, zero),
                    xtt: PointC2::new(-p.r * e, zero),
                }
            }
            ImmersionSpec::ProductLineCurve(p) => {
                let (g, dg, ddg) = p.curve.jet(s);
                let zero = Complex64::new(0.0, 0.0);
                SurfaceJet {
                    x: PointC2::new(p.offset + t * p.dir, g),
                    xs: PointC2::new(zero, dg),
                    xt: PointC2::new(p.dir, zero),
                    xss: PointC2::new(zero, ddg),
                    xst: PointC2::new(zero, zero),
                    xtt: PointC2::new(zero, zero),
                }
            }
            ImmersionSpec::CcProduct(p) => {
                let (a, da, dda) = p.alpha.jet(s);
                let (g, dg, ddg) = p.gamma.jet(t);
                SurfaceJet {
                    x: PointC2::new(a[0] * g[0], a[1] * g[1]),
                    xs: PointC2::new(da[0] * g[0], da[1] * g[1]),
                    xt: PointC2::new(a[0] * dg[0], a[1] * dg[1]),
                    xss: PointC2::new(dda[0] * g[0], dda[1] * g[1]),
                    xst: PointC2::new(da[0] * dg[0], da[1] * dg[1]),
                    xtt: PointC2::new(a[0] * ddg[0], a[1] * ddg[1]),
                }
            }
        };
        if !jet.is_finite() {
            return Err(Error::NonFiniteEval(s));
        }
        Ok(jet)
    }

    /// Position only.
    pub fn position(&self, s: f64, t: f64) -> Result<PointC2> {
        Ok(self.jet(s, t)?.x)
    }

    /// Constraint residual of the generating curve(s) of this spec.
    pub fn constraint_residual(&self, n_samples: usize) -> Result<crate::report::ResidualReport> {
        use crate::curve::ConstrainedCurve;
        match self {
            ImmersionSpec::CenteredType1(p) => p.gamma.constraint_residual(n_samples),
            ImmersionSpec::GeneralType1(p) => p.gamma.constraint_residual(n_samples),
            ImmersionSpec::CenteredType2(p) => p.gamma.constraint_residual(n_samples),
            ImmersionSpec::GeneralType2(p) => p.gamma.constraint_residual(n_samples),
            ImmersionSpec::CenteredType3(p) => p.alpha.constraint_residual(n_samples),
            ImmersionSpec::GeneralType3(p) => p.alpha.constraint_residual(n_samples),
            ImmersionSpec::Ruled(p) => p.gamma.constraint_residual(n_samples),
            ImmersionSpec::ProductCircleCurve(p) => p.curve.constraint_residual(n_samples),
            ImmersionSpec::ProductLineCurve(p) => p.curve.constraint_residual(n_samples),
            ImmersionSpec::CcProduct(p) => {
                let a = p.alpha.constraint_residual(n_samples)?;
                let g = p.gamma.constraint_residual(n_samples)?;
                Ok(if a.max_abs >= g.max_abs { a } else { g })
            }
        }
    }
}

fn type2_jet(
    gamma: &CurveS3Legendrian,
    c: f64,
    general: Option<(&CplxFn, Type2Form, &Translation)>,
    s: f64,
    t: f64,
) -> SurfaceJet {
    let (g, dg, ddg) = gamma.jet(s);
    let e = Complex64::new(0.0, t).exp();
    let i = Complex64::new(0.0, 1.0);
    let ce = c * e;
    let mut jet = SurfaceJet {
        x: PointC2::new(ce * g[0], ce * g[1]),
        xs: PointC2::new(ce * dg[0], ce * dg[1]),
        xt: PointC2::new(i * ce * g[0], i * ce * g[1]),
        xss: PointC2::new(ce * ddg[0], ce * ddg[1]),
        xst: PointC2::new(i * ce * dg[0], i * ce * dg[1]),
        xtt: PointC2::new(-ce * g[0], -ce * g[1]),
    };
    if let Some((w, form, trans)) = general {
        let (wv, dwv, _) = w.eval(s);
        let (v1, dv1) = match form {
            Type2Form::SymplecticOrthogonal => {
                let dir = PointC2::new(g[1].conj(), -g[0].conj());
                let ddir = PointC2::new(dg[1].conj(), -dg[0].conj());
                (
                    dir.scale_c(wv),
                    dir.scale_c(dwv) + ddir.scale_c(wv),
                )
            }
            Type2Form::TangentFrame => {
                let dir = PointC2::new(dg[0], dg[1]);
                let ddir = PointC2::new(ddg[0], ddg[1]);
                (
                    dir.scale_c(wv),
                    dir.scale_c(dwv) + ddir.scale_c(wv),
                )
            }
        };
        jet.x = jet.x + trans.eval(s);
        jet.xs = jet.xs + v1;
        jet.xss = jet.xss + dv1;
    }
    jet
}

fn type3_jet(
    alpha: &CurveAdSLegendrian,
    c: f64,
    general: Option<(&CplxFn, &Translation)>,
    s: f64,
    t: f64,
) -> SurfaceJet {
    let (a, da, dda) = alpha.jet(s);
    let ep = Complex64::new(0.0, t).exp();
    let em = ep.conj();
    let i = Complex64::new(0.0, 1.0);
    let mut jet = SurfaceJet {
        x: PointC2::new(c * a[0] * ep, c * a[1] * em),
        xs: PointC2::new(c * da[0] * ep, c * da[1] * em),
        xt: PointC2::new(c * i * a[0] * ep, -c * i * a[1] * em),
        xss: PointC2::new(c * dda[0] * ep, c * dda[1] * em),
        xst: PointC2::new(c * i * da[0] * ep, -c * i * da[1] * em),
        xtt: PointC2::new(-c * a[0] * ep, -c * a[1] * em),
    };
    if let Some((w, trans)) = general {
        let (wv, dwv, _) = w.eval(s);
        // V' = (W |a2|^2, conj(W) a1 a2).
        let m2 = a[1].norm_sqr();
        let dm2 = 2.0 * (da[1] * a[1].conj()).re;
        let v1 = PointC2::new(wv * m2, wv.conj() * a[0] * a[1]);
        let dv1 = PointC2::new(
            dwv * m2 + wv * dm2,
            dwv.conj() * a[0] * a[1] + wv.conj() * (da[0] * a[1] + a[0] * da[1]),
        );
        jet.x = jet.x + trans.eval(s);
        jet.xs = jet.xs + v1;
        jet.xss = jet.xss + dv1;
    }
    jet
}

pub(crate) fn type2_integrand(
    gamma: &CurveS3Legendrian,
    w: &CplxFn,
    form: Type2Form,
) -> Arc<dyn Fn(f64) -> PointC2 + Send + Sync> {
    let gamma = gamma.clone();
    let w = w.clone();
    match form {
        Type2Form::SymplecticOrthogonal => Arc::new(move |u: f64| {
            let (g, _, _) = gamma.jet(u);
            let wv = w.value(u);
            PointC2::new(wv * g[1].conj(), -wv * g[0].conj())
        }),
        Type2Form::TangentFrame => Arc::new(move |u: f64| {
            let (_, dg, _) = gamma.jet(u);
            let wv = w.value(u);
            PointC2::new(wv * dg[0], wv * dg[1])
        }),
    }
}

pub(crate) fn type3_integrand(
    alpha: &CurveAdSLegendrian,
    w: &CplxFn,
) -> Arc<dyn Fn(f64) -> PointC2 + Send + Sync> {
    let alpha = alpha.clone();
    let w = w.clone();
    Arc::new(move |u: f64| {
        let (a, _, _) = alpha.jet(u);
        let wv = w.value(u);
        PointC2::new(wv * a[1].norm_sqr(), wv.conj() * a[0] * a[1])
    })
}

pub(crate) fn type1_integrand(
    gamma: &CurvePlanar,
    w1: &RealFn,
    w2: &RealFn,
) -> Arc<dyn Fn(f64) -> PointC2 + Send + Sync> {
    let gamma = gamma.clone();
    let w1 = w1.clone();
    let w2 = w2.clone();
    Arc::new(move |u: f64| {
        let g = gamma.value(u);
        let unit = g / g.norm();
        PointC2::new(unit * w1.value(u), unit * w2.value(u))
    })
}

pub(crate) fn ruled_integrand(
    gamma: &CurveS3Legendrian,
    alpha: &CurvePlanar,
) -> Arc<dyn Fn(f64) -> PointC2 + Send + Sync> {
    let gamma = gamma.clone();
    let alpha = alpha.clone();
    Arc::new(move |u: f64| {
        let (_, dg, _) = gamma.jet(u);
        let a = alpha.value(u);
        PointC2::new(a * dg[0], a * dg[1])
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centered_type2_jet_at_origin_parameters() {
        let spec = ImmersionSpec::CenteredType2(CenteredType2 {
            gamma: CurveS3Legendrian::great_circle(),
            c: 1.0,
        });
        let j = spec.jet(0.0, 0.0).unwrap();
        assert!((j.x - PointC2::from_re(1.0, 0.0)).norm() < 1e-15);
        assert!((j.xt - PointC2::new(Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0))).norm() < 1e-15);
    }

    #[test]
    fn centered_type3_jet_at_origin_parameters() {
        let spec = ImmersionSpec::CenteredType3(CenteredType3 {
            alpha: CurveAdSLegendrian::hyperbola((-2.0, 2.0)),
            c: 1.0,
        });
        let j = spec.jet(0.0, 0.0).unwrap();
        assert!((j.x - PointC2::from_re(0.0, 1.0)).norm() < 1e-15);
        assert!((j.xt - PointC2::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0))).norm() < 1e-15);
    }

    #[test]
    fn centered_type1_jet_quarter_turn() {
        let spec = ImmersionSpec::CenteredType1(CenteredType1 {
            gamma: CurvePlanar::circle(1.0),
        });
        let j = spec.jet(0.0, std::f64::consts::FRAC_PI_2).unwrap();
        assert!((j.x - PointC2::from_re(0.0, 1.0)).norm() < 1e-15);
        assert!((j.xs - PointC2::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0))).norm() < 1e-15);
    }

    #[test]
    fn out_of_domain_is_reported() {
        let spec = ImmersionSpec::CenteredType1(CenteredType1 {
            gamma: CurvePlanar::circle(1.0),
        });
        assert!(matches!(
            spec.jet(100.0, 0.0),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn jets_match_finite_differences_of_position() {
        // Central-difference consistency across several families.
        let specs: Vec<ImmersionSpec> = vec![
            ImmersionSpec::CenteredType1(CenteredType1 {
                gamma: CurvePlanar::circle(1.0),
            }),
            ImmersionSpec::CenteredType2(CenteredType2 {
                gamma: CurveS3Legendrian::torus_curve(0.6).unwrap(),
                c: 1.3,
            }),
            ImmersionSpec::CenteredType3(CenteredType3 {
                alpha: CurveAdSLegendrian::hyperbola((-1.5, 1.5)),
                c: 1.0,
            }),
            ImmersionSpec::CcProduct(CcProduct {
                alpha: CurveAdSLegendrian::hyperbola((-1.5, 1.5)),
                gamma: CurveS3Legendrian::hopf_great_circle(),
            }),
        ];
        for spec in &specs {
            let (a, b) = spec.s_domain();
            let s = 0.5 * (a + b);
            let t = 0.7;
            let h = 1e-5 * (b - a);
            let j = spec.jet(s, t).unwrap();
            let fd_s = (spec.position(s + h, t).unwrap() - spec.position(s - h, t).unwrap())
                .scale(0.5 / h);
            let fd_t = (spec.position(s, t + h).unwrap() - spec.position(s, t - h).unwrap())
                .scale(0.5 / h);
            let rel_s = (fd_s - j.xs).norm() / (1.0 + j.xs.norm());
            let rel_t = (fd_t - j.xt).norm() / (1.0 + j.xt.norm());
            assert!(
                rel_s < 1e-6 && rel_t < 1e-6,
                "{}: fd mismatch ({rel_s:.2e}, {rel_t:.2e})",
                spec.family_name()
            );
        }
    }
}
