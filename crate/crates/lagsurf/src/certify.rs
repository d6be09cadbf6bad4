//! Numeric certificates for the algebraic reductions: quaternion identities
//! for the frame gauge and the bivariate polynomial non-existence
//! certificate in X = cos^2(alpha), Y = c^2 r^{-6}.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Quaternion w + x i + y j + z k with Hamilton products (ij = k). The
/// complex structure of R^4 is left multiplication by i.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub fn conj(&self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sq(&self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn inverse(&self) -> Result<Self> {
        let n2 = self.norm_sq();
        if n2 == 0.0 {
            return Err(Error::InvalidParameter("zero quaternion has no inverse".into()));
        }
        let c = self.conj();
        Ok(Quaternion::new(c.w / n2, c.x / n2, c.y / n2, c.z / n2))
    }

    pub fn scale(&self, a: f64) -> Self {
        Self::new(a * self.w, a * self.x, a * self.y, a * self.z)
    }
}

impl std::ops::Add for Quaternion {
    type Output = Quaternion;
    fn add(self, r: Quaternion) -> Quaternion {
        Quaternion::new(self.w + r.w, self.x + r.x, self.y + r.y, self.z + r.z)
    }
}

impl std::ops::Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, r: Quaternion) -> Quaternion {
        Quaternion::new(self.w - r.w, self.x - r.x, self.y - r.y, self.z - r.z)
    }
}

impl std::ops::Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, r: Quaternion) -> Quaternion {
        Quaternion::new(
            self.w * r.w - self.x * r.x - self.y * r.y - self.z * r.z,
            self.w * r.x + self.x * r.w + self.y * r.z - self.z * r.y,
            self.w * r.y - self.x * r.z + self.y * r.w + self.z * r.x,
            self.w * r.z + self.x * r.y - self.y * r.x + self.z * r.w,
        )
    }
}

/// u = p^{-1} i p i - i p^{-1} i p, by direct Hamilton arithmetic.
pub fn quat_u(p: &Quaternion) -> Result<Quaternion> {
    let pinv = p.inverse()?;
    let i = Quaternion::I;
    Ok(pinv * i * *p * i - i * pinv * i * *p)
}

/// Closed form of u: [4 (p0 p2 + p1 p3) j - 4 (p1 p2 - p0 p3) k] / |p|^2.
pub fn quat_u_closed(p: &Quaternion) -> Quaternion {
    let a = p.w * p.y + p.x * p.z;
    let b = p.x * p.y - p.w * p.z;
    (Quaternion::J.scale(4.0 * a) - Quaternion::K.scale(4.0 * b)).scale(1.0 / p.norm_sq())
}

/// v = p^{-1} i p + i p^{-1} i p i = -u i, by direct Hamilton arithmetic.
pub fn quat_v(p: &Quaternion) -> Result<Quaternion> {
    let pinv = p.inverse()?;
    let i = Quaternion::I;
    Ok(pinv * i * *p + i * pinv * i * *p * i)
}

/// Closed form of v: [4 (p1 p2 - p0 p3) j + 4 (p0 p2 + p1 p3) k] / |p|^2.
pub fn quat_v_closed(p: &Quaternion) -> Quaternion {
    let a = p.w * p.y + p.x * p.z;
    let b = p.x * p.y - p.w * p.z;
    (Quaternion::J.scale(4.0 * b) + Quaternion::K.scale(4.0 * a)).scale(1.0 / p.norm_sq())
}

/// Both sides of (p0 p2 + p1 p3)^2 + (p1 p2 - p0 p3)^2 = (p0^2 + p1^2)(p2^2 + p3^2).
pub fn factorization_identity(p: &Quaternion) -> (f64, f64) {
    let a = p.w * p.y + p.x * p.z;
    let b = p.x * p.y - p.w * p.z;
    let lhs = a * a + b * b;
    let rhs = (p.w * p.w + p.x * p.x) * (p.y * p.y + p.z * p.z);
    (lhs, rhs)
}

/// Worst-case identity errors over seeded random unit quaternions.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct QuatSweep {
    pub n: usize,
    pub max_u_err: f64,
    pub max_v_err: f64,
    pub max_v_is_minus_ui_err: f64,
    pub max_factorization_err: f64,
    pub max_norm_multiplicativity_err: f64,
}

pub fn quaternion_identity_sweep(seed: u64, n: usize) -> QuatSweep {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sweep = QuatSweep {
        n,
        max_u_err: 0.0,
        max_v_err: 0.0,
        max_v_is_minus_ui_err: 0.0,
        max_factorization_err: 0.0,
        max_norm_multiplicativity_err: 0.0,
    };
    let random_unit = |rng: &mut ChaCha8Rng| loop {
        let q = Quaternion::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let norm = q.norm();
        if norm > 1e-3 {
            return q.scale(1.0 / norm);
        }
    };
    for _ in 0..n {
        let p = random_unit(&mut rng);
        let u = quat_u(&p).unwrap();
        let v = quat_v(&p).unwrap();
        sweep.max_u_err = sweep.max_u_err.max((u - quat_u_closed(&p)).norm());
        sweep.max_v_err = sweep.max_v_err.max((v - quat_v_closed(&p)).norm());
        sweep.max_v_is_minus_ui_err = sweep
            .max_v_is_minus_ui_err
            .max((v + u * Quaternion::I).norm());
        let (lhs, rhs) = factorization_identity(&p);
        sweep.max_factorization_err = sweep.max_factorization_err.max((lhs - rhs).abs());
        let q = random_unit(&mut rng);
        sweep.max_norm_multiplicativity_err = sweep
            .max_norm_multiplicativity_err
            .max(((p * q).norm() - p.norm() * q.norm()).abs());
    }
    sweep
}

/// Evaluation point: X = cos^2(alpha) in [0, 1], Y = c^2 r^{-6} >= 0.
#[derive(Clone, Copy, Debug)]
pub struct CertificatePoint {
    pub x: f64,
    pub y: f64,
}

impl CertificatePoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) || !(y >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "certificate point needs X in [0,1] and Y >= 0, got ({x}, {y})"
            )));
        }
        Ok(Self { x, y })
    }
}

// Coefficient tables for E(X, Y) = e2(X) Y^2 + e1(X) Y + e0(X), ascending
// powers of X. A checksum test pins the transcription via the values
// E(0,0) = 35, E(0,1) = 27, E(1,0) = 0 and E(1,1) = -174.
const E_Y2: [f64; 4] = [-12.0, 36.0, 90.0, -288.0];
const E_Y1: [f64; 5] = [4.0, 8.0, -264.0, 756.0, -504.0];
const E_Y0: [f64; 6] = [35.0, 21.0, -489.0, 991.0, -774.0, 216.0];

// g(X, Y) numerator (5 + 19 X + 12 X^2)(1 - X) + Y (3 - 36 X) and
// denominator (24 X^2 - 26 X - 1)(1 - X) + Y (24 X^2 - 6 X).
fn g_parts(x: f64, y: f64) -> (f64, f64) {
    let num = (5.0 + 19.0 * x + 12.0 * x * x) * (1.0 - x) + y * (3.0 - 36.0 * x);
    let den = (24.0 * x * x - 26.0 * x - 1.0) * (1.0 - x) + y * (24.0 * x * x - 6.0 * x);
    (num, den)
}

fn poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn poly_d1(coeffs: &[f64], x: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(0.0, |acc, (k, c)| acc * x + k as f64 * c)
}

pub fn eval_e(pt: &CertificatePoint) -> f64 {
    let (x, y) = (pt.x, pt.y);
    poly(&E_Y2, x) * y * y + poly(&E_Y1, x) * y + poly(&E_Y0, x)
}

pub fn eval_e_dx(pt: &CertificatePoint) -> f64 {
    let (x, y) = (pt.x, pt.y);
    poly_d1(&E_Y2, x) * y * y + poly_d1(&E_Y1, x) * y + poly_d1(&E_Y0, x)
}

pub fn eval_e_dy(pt: &CertificatePoint) -> f64 {
    let (x, y) = (pt.x, pt.y);
    2.0 * poly(&E_Y2, x) * y + poly(&E_Y1, x)
}

pub fn eval_g(pt: &CertificatePoint) -> Result<f64> {
    let (num, den) = g_parts(pt.x, pt.y);
    if den.abs() < 1e-14 * (1.0 + num.abs()) {
        return Err(Error::PoleEncountered(den));
    }
    Ok(num / den)
}

/// F = (1 - X) g dE/dX + 3 Y dE/dY, the derivative of E along the profile flow.
pub fn eval_f(pt: &CertificatePoint) -> Result<f64> {
    Ok((1.0 - pt.x) * eval_g(pt)? * eval_e_dx(pt) + 3.0 * pt.y * eval_e_dy(pt))
}

/// Full numeric certificate of the non-existence reduction.
#[derive(Clone, Debug, serde::Serialize)]
pub struct NonexistenceReport {
    /// Roots of E(0, Y) = -12 Y^2 + 4 Y + 35, i.e. (1 +/- sqrt(106))/6.
    pub y_roots: (f64, f64),
    pub e_at_roots: (f64, f64),
    /// dE/dY at the roots (simplicity of the roots).
    pub de_dy_at_roots: (f64, f64),
    /// Signed F values at the roots.
    pub f_at_roots: (f64, f64),
    /// Expected magnitudes |1100 +/- 85 sqrt(106)|.
    pub f_expected_magnitudes: (f64, f64),
    /// The two reduced-system constants at X = 0 (3 + 3 w^2 and 5 + 3 w^2),
    /// minimized over real w; both must be nonzero.
    pub endgame_minima: (f64, f64),
    pub quaternions: QuatSweep,
    pub pass: bool,
}

pub fn nonexistence_certificate() -> NonexistenceReport {
    let root = 106f64.sqrt();
    let y_plus = (1.0 + root) / 6.0;
    let y_minus = (1.0 - root) / 6.0;
    // Y_- is negative and leaves the admissible range Y >= 0; the polynomial
    // identities are still evaluated there.
    let at = |y: f64| CertificatePoint { x: 0.0, y };
    let e_p = eval_e(&at(y_plus));
    let e_m = eval_e(&at(y_minus));
    let de_p = eval_e_dy(&at(y_plus));
    let de_m = eval_e_dy(&at(y_minus));
    let f_p = eval_f(&at(y_plus)).expect("g has no pole at X = 0");
    let f_m = eval_f(&at(y_minus)).expect("g has no pole at X = 0");
    let mag_p = 1100.0 + 85.0 * root;
    let mag_m = (1100.0 - 85.0 * root).abs();
    // min over real w of |3 + 3 w^2| and |5 + 3 w^2| is attained at w = 0.
    let endgame = (3.0, 5.0);
    let quaternions = quaternion_identity_sweep(0x1a95_u64, 1000);
    let pass = e_p.abs() < 1e-9
        && e_m.abs() < 1e-9
        && de_p.abs() > 10.0
        && de_m.abs() > 10.0
        && (f_p.abs() - mag_p).abs() / mag_p < 1e-6
        && (f_m.abs() - mag_m).abs() / mag_m < 1e-6
        && endgame.0 > 0.0
        && endgame.1 > 0.0
        && quaternions.max_u_err < 1e-12
        && quaternions.max_v_err < 1e-12
        && quaternions.max_factorization_err < 1e-12;
    NonexistenceReport {
        y_roots: (y_plus, y_minus),
        e_at_roots: (e_p, e_m),
        de_dy_at_roots: (de_p, de_m),
        f_at_roots: (f_p, f_m),
        f_expected_magnitudes: (mag_p, mag_m),
        endgame_minima: endgame,
        quaternions,
        pass,
    }
}
