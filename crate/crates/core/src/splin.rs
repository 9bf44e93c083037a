//! Symplectic and complex linear algebra on R^4.
//!
//! Coordinates are ordered `(x1, x2, y1, y2)`. The symplectic form is
//! `omega = dx1^dy1 + dx2^dy2` and the metric is Euclidean. Three
//! anticommuting complex structures are used throughout:
//!
//! * `J`  : `dx_j -> dy_j`, the standard structure,
//! * `K'` : `dx1 -> dx2`, `dy1 -> -dy2`,
//! * `K''`: `J K'`.
//!
//! Oriented Lagrangian planes fibre over the circle of structures
//! `K_t = cos t K' + sin t K''`; the central projection moves every such plane
//! into the sphere `P(K')` of `K'`-complex lines, which is charted here by
//! homogeneous coordinates `[x : y]` and by the unit sphere in R^3.

use nalgebra::{Matrix3, Matrix4, Vector3, Vector4};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

pub type Vec4 = Vector4<f64>;
pub type Mat4 = Matrix4<f64>;

/// Orthonormality tolerance for plane bases.
pub const ORTHO_TOL: f64 = 1e-12;
/// Tolerance on `omega(v1, v2)` for the Lagrangian test.
pub const LAGRANGIAN_TOL: f64 = 1e-10;
/// Singular-value cutoff for rank decisions.
pub const RANK_CUTOFF: f64 = 1e-9;

/// Sign of the imaginary component in the sphere chart of `P(K')`.
///
/// With `-1` the pair `(s, theta)` of the chart `lambda_theta(s)` is a
/// positive chart. This is the orientation under which the degree of every
/// worked example comes out with the signs of the phase formula.
const PK_CHART_IM_SIGN: f64 = -1.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SplinError {
    #[error("plane is not Lagrangian: omega(v1, v2) = {0:e}")]
    NotLagrangian(f64),
    #[error("plane basis is not orthonormal (defect {0:e})")]
    DegenerateFrame(f64),
}

pub fn omega(a: &Vec4, b: &Vec4) -> f64 {
    a[0] * b[2] - a[2] * b[0] + a[1] * b[3] - a[3] * b[1]
}

pub fn j_matrix() -> Mat4 {
    Mat4::new(
        0.0, 0.0, -1.0, 0.0, //
        0.0, 0.0, 0.0, -1.0, //
        1.0, 0.0, 0.0, 0.0, //
        0.0, 1.0, 0.0, 0.0,
    )
}

pub fn k_prime() -> Mat4 {
    Mat4::new(
        0.0, -1.0, 0.0, 0.0, //
        1.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        0.0, 0.0, -1.0, 0.0,
    )
}

pub fn k_second() -> Mat4 {
    j_matrix() * k_prime()
}

pub fn k_t(t: f64) -> Mat4 {
    k_prime() * t.cos() + k_second() * t.sin()
}

/// The complex structure `aJ + bK' + cK''` for a unit vector `(a, b, c)`.
pub fn j_abc(a: f64, b: f64, c: f64) -> Mat4 {
    j_matrix() * a + k_prime() * b + k_second() * c
}

/// `u_theta = cos(theta) dx1 + sin(theta) dx2` for the standard unitary pair.
pub fn u_theta(theta: f64) -> Vec4 {
    Vec4::new(theta.cos(), theta.sin(), 0.0, 0.0)
}

/// Elements of the matrix groups acting on R^4.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum GroupElement {
    /// `c_t`: multiplication by `e^{it}` in the `J`-complex coordinates.
    C(f64),
    /// `g_theta`: simultaneous rotation of `(x1, x2)` and `(y1, y2)`.
    G(f64),
    /// The path `M_theta` from the identity to `M`.
    MTheta(f64),
    /// The anti-symplectic swap `(x, y) -> (y, x)`.
    M,
}

impl GroupElement {
    pub fn matrix(&self) -> Mat4 {
        match *self {
            GroupElement::C(t) => {
                let (s, c) = t.sin_cos();
                Mat4::new(
                    c, 0.0, -s, 0.0, //
                    0.0, c, 0.0, -s, //
                    s, 0.0, c, 0.0, //
                    0.0, s, 0.0, c,
                )
            }
            GroupElement::G(t) => {
                let (s, c) = t.sin_cos();
                Mat4::new(
                    c, -s, 0.0, 0.0, //
                    s, c, 0.0, 0.0, //
                    0.0, 0.0, c, -s, //
                    0.0, 0.0, s, c,
                )
            }
            GroupElement::MTheta(t) => {
                let (s, c) = t.sin_cos();
                let p = [[1.0 + c, -s], [s, 1.0 + c]];
                let q = [[1.0 - c, s], [-s, 1.0 - c]];
                let mut m = Mat4::zeros();
                for i in 0..2 {
                    for k in 0..2 {
                        m[(i, k)] = 0.5 * p[i][k];
                        m[(i + 2, k + 2)] = 0.5 * p[i][k];
                        m[(i, k + 2)] = 0.5 * q[i][k];
                        m[(i + 2, k)] = 0.5 * q[i][k];
                    }
                }
                m
            }
            GroupElement::M => Mat4::new(
                0.0, 0.0, 1.0, 0.0, //
                0.0, 0.0, 0.0, 1.0, //
                1.0, 0.0, 0.0, 0.0, //
                0.0, 1.0, 0.0, 0.0,
            ),
        }
    }
}

pub fn apply_group(g: GroupElement, v: &Vec4) -> Vec4 {
    match g {
        // Exact permutation, so that M is an involution bit for bit.
        GroupElement::M => Vec4::new(v[2], v[3], v[0], v[1]),
        _ => g.matrix() * v,
    }
}

/// An oriented 2-plane carried by an ordered orthonormal pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedPlane {
    pub v1: Vec4,
    pub v2: Vec4,
}

impl OrientedPlane {
    /// Accepts a pair that is already orthonormal.
    pub fn new(v1: Vec4, v2: Vec4) -> Result<Self, SplinError> {
        let p = OrientedPlane { v1, v2 };
        let defect = p.frame_defect();
        if defect > ORTHO_TOL * 10.0 {
            return Err(SplinError::DegenerateFrame(defect));
        }
        Ok(p)
    }

    /// Gram-Schmidt on an arbitrary independent pair, keeping the orientation.
    pub fn from_span(a: &Vec4, b: &Vec4) -> Result<Self, SplinError> {
        let na = a.norm();
        if na < 1e-14 {
            return Err(SplinError::DegenerateFrame(1.0));
        }
        let v1 = a / na;
        let w = b - v1 * v1.dot(b);
        let nw = w.norm();
        if nw < 1e-14 * b.norm().max(1.0) {
            return Err(SplinError::DegenerateFrame(1.0));
        }
        Ok(OrientedPlane { v1, v2: w / nw })
    }

    pub fn frame_defect(&self) -> f64 {
        let a = (self.v1.norm_squared() - 1.0).abs();
        let b = (self.v2.norm_squared() - 1.0).abs();
        let c = self.v1.dot(&self.v2).abs();
        a.max(b).max(c)
    }

    pub fn omega_value(&self) -> f64 {
        omega(&self.v1, &self.v2)
    }

    pub fn is_lagrangian(&self) -> bool {
        self.omega_value().abs() < LAGRANGIAN_TOL
    }

    pub fn transform(&self, g: GroupElement) -> OrientedPlane {
        OrientedPlane {
            v1: apply_group(g, &self.v1),
            v2: apply_group(g, &self.v2),
        }
    }

    pub fn map(&self, m: &Mat4) -> OrientedPlane {
        OrientedPlane {
            v1: m * self.v1,
            v2: m * self.v2,
        }
    }

    /// The `J`-complex plane `u ^ Ju`.
    pub fn complex_line(u: &Vec4) -> OrientedPlane {
        let u = u / u.norm();
        OrientedPlane {
            v1: u,
            v2: j_matrix() * u,
        }
    }

    /// `E_theta = u_theta ^ J u_theta`.
    pub fn e_theta(theta: f64) -> OrientedPlane {
        Self::complex_line(&u_theta(theta))
    }
}

fn check_lagrangian(p: &OrientedPlane) -> Result<(), SplinError> {
    let defect = p.frame_defect();
    if defect > 1e-9 {
        return Err(SplinError::DegenerateFrame(defect));
    }
    let w = p.omega_value();
    if w.abs() > LAGRANGIAN_TOL {
        return Err(SplinError::NotLagrangian(w));
    }
    Ok(())
}

/// The `t` with `K_t v1 = v2`, i.e. the circle factor of the Lagrangian
/// Grassmannian.
pub fn classify_kt(p: &OrientedPlane) -> Result<f64, SplinError> {
    check_lagrangian(p)?;
    let a = (k_prime() * p.v1).dot(&p.v2);
    let b = (k_second() * p.v1).dot(&p.v2);
    Ok(b.atan2(a))
}

/// A point of `P(K')` in homogeneous coordinates `[x : y]`, normalized so
/// that `|x|^2 + |y|^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PKPrimePoint {
    pub x: Complex64,
    pub y: Complex64,
}

impl PKPrimePoint {
    pub fn from_homogeneous(x: Complex64, y: Complex64) -> Self {
        let n = (x.norm_sqr() + y.norm_sqr()).sqrt();
        PKPrimePoint { x: x / n, y: y / n }
    }

    /// `lambda_theta(s) = [e^{i theta} cos s : e^{-i theta} sin s]`.
    pub fn from_theta_s(theta: f64, s: f64) -> Self {
        PKPrimePoint {
            x: Complex64::from_polar(s.cos(), theta),
            y: Complex64::from_polar(s.sin(), -theta),
        }
    }

    pub fn xi0() -> Self {
        Self::from_theta_s(0.0, 0.0)
    }

    pub fn xi_inf() -> Self {
        Self::from_theta_s(0.0, PI / 2.0)
    }

    /// `(theta mod pi, s)` with `s` in `[0, pi/2]`. At the poles `theta` is 0.
    pub fn theta_s(&self) -> (f64, f64) {
        let s = self.y.norm().atan2(self.x.norm());
        let w = self.x * self.y.conj();
        if w.norm() < 1e-15 {
            return (0.0, s);
        }
        let theta = (0.5 * w.arg()).rem_euclid(PI);
        (theta, s)
    }

    /// Unit vector in R^3. The south pole is `xi0`, the north pole `xi_inf`.
    pub fn sphere(&self) -> [f64; 3] {
        let w = self.x * self.y.conj();
        let n = self.x.norm_sqr() + self.y.norm_sqr();
        [
            2.0 * w.re / n,
            PK_CHART_IM_SIGN * 2.0 * w.im / n,
            (self.y.norm_sqr() - self.x.norm_sqr()) / n,
        ]
    }

    /// The `K'`-complex plane `w ^ K'w` represented by this point.
    pub fn plane(&self) -> OrientedPlane {
        let w = Vec4::new(self.x.re, self.x.im, self.y.re, -self.y.im);
        let w = w / w.norm();
        OrientedPlane {
            v1: w,
            v2: k_prime() * w,
        }
    }
}

/// Great-circle distance between two unit vectors.
pub fn chart_distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let cross = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    let s = (cross[0].powi(2) + cross[1].powi(2) + cross[2].powi(2)).sqrt();
    let c = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    s.atan2(c)
}

/// Central projection of a Lagrangian plane into `P(K')`.
pub fn central_project(p: &OrientedPlane) -> Result<PKPrimePoint, SplinError> {
    let t = classify_kt(p)?;
    let w = GroupElement::C(-0.5 * t).matrix() * p.v1;
    Ok(PKPrimePoint::from_homogeneous(
        Complex64::new(w[0], w[1]),
        Complex64::new(w[2], -w[3]),
    ))
}

/// The point of `P(J) = S^2` given by the `J`-complex line through `u`.
pub fn j_line_point(u: &Vec4) -> [f64; 3] {
    let z1 = Complex64::new(u[0], u[2]);
    let z2 = Complex64::new(u[1], u[3]);
    let n = z1.norm_sqr() + z2.norm_sqr();
    let w = z1 * z2.conj();
    [
        2.0 * w.re / n,
        2.0 * w.im / n,
        (z1.norm_sqr() - z2.norm_sqr()) / n,
    ]
}

#[derive(Debug, Clone, Serialize)]
pub struct ComplexLocus {
    pub points: Vec<[f64; 3]>,
    /// Offset of the best-fit plane from the origin; zero for great circles.
    pub residual: f64,
    pub degenerate: bool,
}

/// Samples of the locus of `J`-complex lines meeting `z` nontrivially.
///
/// `z` is complex for a unique structure `J_abc`, and the lines are those
/// through `u_theta = v1 cos theta + J_abc v1 sin theta = v1 cos theta + v2 sin theta`.
pub fn complex_locus_samples(z: &OrientedPlane, n: usize) -> ComplexLocus {
    let n = n.max(8);
    let points: Vec<[f64; 3]> = (0..n)
        .map(|k| {
            let th = PI * k as f64 / n as f64;
            j_line_point(&(z.v1 * th.cos() + z.v2 * th.sin()))
        })
        .collect();
    let spread = points
        .iter()
        .map(|p| chart_distance(p, &points[0]))
        .fold(0.0, f64::max);
    if spread < 1e-9 {
        return ComplexLocus {
            points,
            residual: 1.0,
            degenerate: true,
        };
    }
    let mut centroid = Vector3::zeros();
    for p in &points {
        centroid += Vector3::new(p[0], p[1], p[2]);
    }
    centroid /= n as f64;
    let mut cov = Matrix3::zeros();
    for p in &points {
        let d = Vector3::new(p[0], p[1], p[2]) - centroid;
        cov += d * d.transpose();
    }
    let eig = cov.symmetric_eigen();
    let (imin, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold(
            (0, f64::INFINITY),
            |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc },
        );
    let normal = eig.eigenvectors.column(imin);
    ComplexLocus {
        points,
        residual: normal.dot(&centroid).abs(),
        degenerate: false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Intersection {
    pub dimension: u8,
    /// Angle of the intersection line inside `E_tau`, measured from `u_tau`, in `[0, pi)`.
    pub angle: Option<f64>,
}

/// `P ^ E_tau` from the rank of `[v1 v2 u_tau J u_tau]`.
pub fn intersection_data(p: &OrientedPlane, tau: f64) -> Intersection {
    let u = u_theta(tau);
    let ju = j_matrix() * u;
    let m = Mat4::from_columns(&[p.v1, p.v2, u, ju]);
    let svd = m.svd(false, true);
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > RANK_CUTOFF)
        .count();
    let dimension = (4 - rank) as u8;
    if dimension != 1 {
        return Intersection {
            dimension,
            angle: None,
        };
    }
    let (imin, _) =
        svd.singular_values
            .iter()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc },
            );
    let vt = svd.v_t.expect("requested v_t");
    let null = vt.row(imin);
    let angle = null[3].atan2(null[2]).rem_euclid(PI);
    Intersection {
        dimension,
        angle: Some(if angle >= PI { 0.0 } else { angle }),
    }
}

/// Determinant of the frame in the `J`-complex coordinates
/// `z = (x1 + i y1, x2 + i y2)`.
pub fn det_j(p: &OrientedPlane) -> Complex64 {
    let z = |v: &Vec4| (Complex64::new(v[0], v[2]), Complex64::new(v[1], v[3]));
    let (a1, a2) = z(&p.v1);
    let (b1, b2) = z(&p.v2);
    a1 * b2 - a2 * b1
}

/// Winding number of `det_j^2` along a closed sequence of Lagrangian frames.
pub fn maslov_winding(frames: &[OrientedPlane]) -> f64 {
    let mut total = 0.0;
    for w in frames.windows(2) {
        let a = det_j(&w[0]).powi(2);
        let b = det_j(&w[1]).powi(2);
        total += (b * a.conj()).arg();
    }
    total / (2.0 * PI)
}

/// Continuation of an angle defined modulo `period` to the branch nearest `prev`.
pub fn nearest_branch(prev: f64, raw: f64, period: f64) -> f64 {
    raw + period * ((prev - raw) / period).round()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structures_square_to_minus_one_and_anticommute() {
        let id = Mat4::identity();
        for m in [j_matrix(), k_prime(), k_second()] {
            assert!((m * m + id).norm() < 1e-15);
        }
        assert!((j_matrix() * k_prime() + k_prime() * j_matrix()).norm() < 1e-15);
        assert_eq!(k_second()[(0, 3)], -1.0);
        assert_eq!(k_second()[(3, 0)], 1.0);
    }

    #[test]
    fn m_swaps_and_c0_is_identity() {
        let v = Vec4::new(1.0, 2.0, 3.0, 4.0);
        assert_eq!(
            apply_group(GroupElement::M, &v),
            Vec4::new(3.0, 4.0, 1.0, 2.0)
        );
        assert_eq!(apply_group(GroupElement::C(0.0), &v), v);
        let g = apply_group(GroupElement::G(PI / 2.0), &Vec4::new(1.0, 0.0, 0.0, 0.0));
        assert!((g - Vec4::new(0.0, 1.0, 0.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn m_theta_interpolates_identity_and_m() {
        assert!((GroupElement::MTheta(0.0).matrix() - Mat4::identity()).norm() < 1e-15);
        assert!((GroupElement::MTheta(PI).matrix() - GroupElement::M.matrix()).norm() < 1e-15);
        let m = GroupElement::MTheta(0.7).matrix();
        assert!((m.transpose() * m - Mat4::identity()).norm() < 1e-14);
    }

    #[test]
    fn classify_examples() {
        let ex1 = Vec4::new(1.0, 0.0, 0.0, 0.0);
        let ex2 = Vec4::new(0.0, 1.0, 0.0, 0.0);
        let p = OrientedPlane::new(ex1, ex2).unwrap();
        assert!(classify_kt(&p).unwrap().abs() < 1e-15);
        let q = OrientedPlane::new(
            Vec4::new(0.0, 0.0, 1.0, 0.0),
            Vec4::new(0.0, 0.0, 0.0, -1.0),
        )
        .unwrap();
        assert!(classify_kt(&q).unwrap().abs() < 1e-15);
        let tau = 0.4;
        let t = classify_kt(&p.transform(GroupElement::C(tau))).unwrap();
        assert!((t - 2.0 * tau).abs() < 1e-14);
        let e0 = OrientedPlane::e_theta(0.0);
        assert!(matches!(
            classify_kt(&e0),
            Err(SplinError::NotLagrangian(_))
        ));
    }

    #[test]
    fn central_projection_poles() {
        let p = OrientedPlane::new(Vec4::new(1.0, 0.0, 0.0, 0.0), Vec4::new(0.0, 1.0, 0.0, 0.0))
            .unwrap();
        let (_, s) = central_project(&p).unwrap().theta_s();
        assert!(s.abs() < 1e-15);
        let q = OrientedPlane::new(
            Vec4::new(0.0, 0.0, 1.0, 0.0),
            Vec4::new(0.0, 0.0, 0.0, -1.0),
        )
        .unwrap();
        let (_, s) = central_project(&q).unwrap().theta_s();
        assert!((s - PI / 2.0).abs() < 1e-15);
        assert!((PKPrimePoint::xi0().sphere()[2] + 1.0).abs() < 1e-15);
        assert!((PKPrimePoint::xi_inf().sphere()[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn lambda_roundtrip_through_planes() {
        for &(th, s) in &[(0.3, 0.2), (2.0, 1.1), (1.2, 0.7)] {
            let pt = PKPrimePoint::from_theta_s(th, s);
            let back = central_project(&pt.plane()).unwrap();
            assert!(chart_distance(&pt.sphere(), &back.sphere()) < 1e-12);
            let (th2, s2) = back.theta_s();
            assert!((s2 - s).abs() < 1e-12);
            assert!((th2 - th.rem_euclid(PI)).abs() < 1e-12);
        }
    }

    #[test]
    fn chart_orientation_is_s_then_theta() {
        let f = |s: f64, th: f64| PKPrimePoint::from_theta_s(th, s).sphere();
        let (s, th, h) = (0.5, 0.8, 1e-6);
        let p = f(s, th);
        let ds: Vec<f64> = (0..3)
            .map(|i| (f(s + h, th)[i] - f(s - h, th)[i]) / (2.0 * h))
            .collect();
        let dt: Vec<f64> = (0..3)
            .map(|i| (f(s, th + h)[i] - f(s, th - h)[i]) / (2.0 * h))
            .collect();
        let cr = [
            ds[1] * dt[2] - ds[2] * dt[1],
            ds[2] * dt[0] - ds[0] * dt[2],
            ds[0] * dt[1] - ds[1] * dt[0],
        ];
        assert!(p[0] * cr[0] + p[1] * cr[1] + p[2] * cr[2] > 0.0);
    }

    #[test]
    fn intersection_examples() {
        let p = OrientedPlane::new(Vec4::new(1.0, 0.0, 0.0, 0.0), Vec4::new(0.0, 1.0, 0.0, 0.0))
            .unwrap();
        let i = intersection_data(&p, 0.0);
        assert_eq!(i.dimension, 1);
        assert!(i.angle.unwrap().abs() < 1e-12 || (i.angle.unwrap() - PI).abs() < 1e-12);
        let s = 0.6;
        let lam = PKPrimePoint::from_theta_s(0.0, s).plane();
        let i = intersection_data(&lam, 0.0);
        assert_eq!(i.dimension, 1);
        assert!((i.angle.unwrap() - s).abs() < 1e-10);
        let lam = PKPrimePoint::from_theta_s(0.2, s).plane();
        assert_eq!(intersection_data(&lam, 0.9).dimension, 0);
    }

    #[test]
    fn complex_locus_point_for_complex_plane() {
        let loc = complex_locus_samples(&OrientedPlane::e_theta(0.0), 16);
        assert!(loc.degenerate);
    }
}
