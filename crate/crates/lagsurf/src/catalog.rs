//! Named built-in surfaces shared by the verification front end and the
//! acceptance tests.

use num_complex::Complex64;

use crate::curve::{CurveAdSLegendrian, CurvePlanar, CurveS3Legendrian, RealFn};
use crate::error::{Error, Result};
use crate::immersion::ImmersionSpec;

pub struct CatalogEntry {
    pub name: &'static str,
    /// Parameter names with default values.
    pub params: &'static [(&'static str, f64)],
    pub description: &'static str,
    builder: fn(&[f64]) -> Result<ImmersionSpec>,
}

impl CatalogEntry {
    pub fn build(&self, args: &[f64]) -> Result<ImmersionSpec> {
        let mut full: Vec<f64> = self.params.iter().map(|(_, d)| *d).collect();
        if args.len() > full.len() {
            return Err(Error::InvalidParameter(format!(
                "{} takes at most {} arguments, got {}",
                self.name,
                full.len(),
                args.len()
            )));
        }
        full[..args.len()].copy_from_slice(args);
        (self.builder)(&full)
    }

    pub fn build_default(&self) -> Result<ImmersionSpec> {
        self.build(&[])
    }
}

fn clifford_torus(_: &[f64]) -> Result<ImmersionSpec> {
    let a = std::f64::consts::FRAC_1_SQRT_2;
    crate::solitons::make_product_circle_curve(a, CurvePlanar::circle(a))
}

fn product_circles(args: &[f64]) -> Result<ImmersionSpec> {
    crate::solitons::make_product_circle_curve(args[0], CurvePlanar::circle(args[1]))
}

fn hopf_contact_stationary(args: &[f64]) -> Result<ImmersionSpec> {
    crate::hamstat::make_contact_stationary_hopf(args[0])
}

fn as_pq(args: &[f64]) -> Result<(u32, u32)> {
    let p = args[0];
    let q = args[1];
    if p.fract() != 0.0 || q.fract() != 0.0 || p < 1.0 || q < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "(p, q) must be positive integers, got ({p}, {q})"
        )));
    }
    Ok((p as u32, q as u32))
}

fn hs_closed(args: &[f64]) -> Result<ImmersionSpec> {
    let (p, q) = as_pq(args)?;
    crate::hamstat::hs_closed_surface(p, q)
}

fn centered_selfsimilar(args: &[f64]) -> Result<ImmersionSpec> {
    let (p, q) = as_pq(args)?;
    let shot = crate::solitons::shoot_centered_profile(p, q, args[2])?;
    crate::cyclic::make_centered_type1(shot.curve)
}

fn ads_hyperbola_type3(args: &[f64]) -> Result<ImmersionSpec> {
    let half_span = args[1].abs().max(0.1);
    crate::cyclic::make_centered_type3(
        CurveAdSLegendrian::hyperbola((-half_span, half_span)),
        args[0],
    )
}

fn blair_helicoid(args: &[f64]) -> Result<ImmersionSpec> {
    crate::ruled::make_blair_helicoid(args[0], args[1], args[2], args[3])
}

fn general_type1_demo(_: &[f64]) -> Result<ImmersionSpec> {
    crate::cyclic::make_general_type1(
        CurvePlanar::circle(1.0),
        RealFn::constant(1.0),
        RealFn::constant(0.0),
        0.0,
    )
}

fn cc_product(args: &[f64]) -> Result<ImmersionSpec> {
    let half_span = args[0].abs().max(0.1);
    crate::solitons::cc_product_immersion(
        CurveAdSLegendrian::hyperbola((-half_span, half_span)),
        CurveS3Legendrian::hopf_great_circle(),
    )
}

fn product_line_circle(args: &[f64]) -> Result<ImmersionSpec> {
    crate::ruled::make_product_line_curve(
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        CurvePlanar::circle(args[0]),
    )
}

const ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        name: "clifford_torus",
        params: &[],
        description: "product of two circles of radius 1/sqrt(2); minimal in S^3, \
                      shrinker at lambda = 1, harmonic Lagrangian angle",
        builder: clifford_torus,
    },
    CatalogEntry {
        name: "product_circles",
        params: &[("r1", 1.0), ("r2", 2.0)],
        description: "S^1(r1) x S^1(r2); Hamiltonian stationary for all radii, \
                      shrinker only when r1 = r2 (lambda = 1/(2 r^2))",
        builder: product_circles,
    },
    CatalogEntry {
        name: "hopf_contact_stationary",
        params: &[("c", 0.6)],
        description: "Hopf torus over the Legendrian torus curve with affine \
                      Legendrian angle; image is S^1(c) x S^1(sqrt(1-c^2))",
        builder: hopf_contact_stationary,
    },
    CatalogEntry {
        name: "hs_closed",
        params: &[("p", 1.0), ("q", 1.0)],
        description: "circle-foliated surface over the closed q-symmetric \
                      profile with angle variation 2 pi p / q; harmonic angle",
        builder: hs_closed,
    },
    CatalogEntry {
        name: "centered_selfsimilar",
        params: &[("p", 1.0), ("q", 3.0), ("lambda", 1.0)],
        description: "shrinker over the closed profile with winding p and q \
                      curvature maxima, found by shooting",
        builder: centered_selfsimilar,
    },
    CatalogEntry {
        name: "ads_hyperbola_type3",
        params: &[("c", 1.0), ("half_span", 1.0)],
        description: "circle foliation over the anti-de Sitter hyperbola \
                      (sinh s, cosh s); minimal but never a soliton",
        builder: ads_hyperbola_type3,
    },
    CatalogEntry {
        name: "blair_helicoid",
        params: &[("k", 0.6), ("l", 0.8), ("x0", 1.0), ("y0", 1.0)],
        description: "ruled surface over the rotated great circle with \
                      constant density x0 + i y0 (the Lagrangian helicoid)",
        builder: blair_helicoid,
    },
    CatalogEntry {
        name: "general_type1_demo",
        params: &[],
        description: "circle-foliated surface over the unit circle with a \
                      nonzero translation density (W1, W2) = (1, 0)",
        builder: general_type1_demo,
    },
    CatalogEntry {
        name: "cc_product",
        params: &[("half_span", 1.0)],
        description: "conformal Lagrangian product (a1 g1(t), a2 g2(t)) of the \
                      AdS hyperbola with the Hopf great circle",
        builder: cc_product,
    },
    CatalogEntry {
        name: "product_line_circle",
        params: &[("r", 1.0)],
        description: "line through the origin times a circle of radius r; the \
                      parallel-rulings product, shrinker at lambda = 1/(2 r^2)",
        builder: product_line_circle,
    },
];

pub fn catalog() -> &'static [CatalogEntry] {
    ENTRIES
}

pub fn build_named(name: &str, args: &[f64]) -> Result<ImmersionSpec> {
    let entry = ENTRIES
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::InvalidParameter(format!("unknown catalog surface '{name}'")))?;
    entry.build(args)
}
