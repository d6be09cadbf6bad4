//! Cyclic (circle-foliated) and ruled Lagrangian surfaces in C^2:
//! constructors for every family, residual verification for the Lagrangian,
//! self-similar and Hamiltonian-stationary equations, profile ODE
//! integration with closed-curve search, and numeric certificates for the
//! quaternion and polynomial identities behind the classification.
//!
//! Fixed conventions (used everywhere):
//! - `<u, v>` is the real scalar product of R^4, `Re(u . conj(v))`;
//! - `J` is componentwise multiplication by `i`;
//! - `omega(u, v) = <u, J v>`;
//! - the mean curvature is the half-trace (average) of the second
//!   fundamental form.

pub mod catalog;
pub mod certify;
pub mod curve;
pub mod cyclic;
pub mod diffgeo;
mod error;
pub mod hamstat;
pub mod immersion;
pub mod numerics;
pub mod point;
pub mod report;
pub mod ruled;
pub mod solitons;

pub use catalog::{build_named, catalog, CatalogEntry};
pub use certify::{
    eval_e, eval_f, eval_g, factorization_identity, nonexistence_certificate, quat_u,
    quat_u_closed, quat_v, quat_v_closed, quaternion_identity_sweep, CertificatePoint,
    NonexistenceReport, Quaternion,
};
pub use curve::{
    arclength_reparametrize, curve_constraint_residual, ConstrainedCurve, CplxFn,
    CurveAdSLegendrian, CurvePlanar, CurveS3Legendrian, RealFn,
};
pub use cyclic::{
    circle_frame, make_centered_type1, make_centered_type2, make_centered_type3,
    make_general_type1, make_general_type2, make_general_type3, r2k_invariant, CircleFrame,
};
pub use diffgeo::{
    beta_derivative_field, first_fundamental_form, kahler_angle, lagrangian_angle,
    lagrangian_defect, lagrangian_residual, laplace_beltrami_beta, laplace_beltrami_values,
    mean_curvature, normal_frame, normal_part, surface_jet, BetaField, Metric2, NormalFrame,
};
pub use error::{Error, Result};
pub use hamstat::{
    build_closed_hs_curve, classify_regime, closed_form_c_for_winding, hs_closed_surface,
    hs_first_integral, hs_profile_rhs, hs_residual_suite, make_contact_stationary_hopf, phi_of_c,
    profile_table, solve_c_for_winding, ClosedProfile, HsProfileState, PhiMethod, ProfileTable,
    Regime,
};
pub use immersion::{ImmersionSpec, SurfaceJet, Type2Form};
pub use point::PointC2;
pub use report::{GridSpec, ResidualReport};
pub use ruled::{
    make_blair_helicoid, make_product_line_curve, make_ruled, make_ruled_unchecked,
    orthogonalize_rulings, ruled_mean_curvature_oracle, ruled_soliton_obstruction,
    RuledObstruction,
};
pub use solitons::{
    cc_mean_curvature_oracle, cc_product_immersion, count_curvature_maxima,
    count_self_intersections, make_product_circle_curve, planar_curve_from_curvature_law,
    self_similar_residual, shoot_centered_profile, soliton_obstruction_scan, CurvatureLaw,
    ObstructionScan, ShotProfile, SolitonParams, TraceConvention,
};
