//! The unitary framing of `T*S^2` over the disk chart and the PLG map of the
//! zero section.
//!
//! A disk point `x` is sent to `G_t(th)` through the branched cover
//! `phi(x) = (x1^2 - x2^2, 2 x1 x2)` with `cos th = x1^2 - x2^2` and
//! `sin th cos 2t = 2 x1 x2`.

use crate::splin::{central_project, Mat4, OrientedPlane, Vec4};
use crate::surface::degree::{degree_oracles, regular_values, DegreeOracles, Grid, SphereMap, S3};
use serde::Serialize;
use std::f64::consts::{FRAC_PI_4, PI};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiskChartPoint {
    pub x1: f64,
    pub x2: f64,
}

impl DiskChartPoint {
    pub fn new(x1: f64, x2: f64) -> Self {
        DiskChartPoint { x1, x2 }
    }

    /// `(th, t)` with `th` in `[0, pi]` and `t` in `[0, pi/2]`; `t = pi/4`
    /// where `sin th = 0`.
    pub fn theta_t(&self) -> (f64, f64) {
        let c = (self.x1 * self.x1 - self.x2 * self.x2).clamp(-1.0, 1.0);
        let th = c.acos();
        let s = th.sin();
        if s == 0.0 {
            return (th, FRAC_PI_4);
        }
        let t = 0.5 * (2.0 * self.x1 * self.x2 / s).clamp(-1.0, 1.0).acos();
        (th, t)
    }

    /// `G_t(th)` evaluated directly from `x`, continuous on the closed disk.
    pub fn frame_matrix(&self) -> Mat4 {
        let c = self.x1 * self.x1 - self.x2 * self.x2;
        let sc = 2.0 * self.x1 * self.x2;
        let r2 = self.x1 * self.x1 + self.x2 * self.x2;
        let ss = (1.0 - r2 * r2).max(0.0).sqrt();
        frame_from(c, sc, ss)
    }
}

fn frame_from(c: f64, sc: f64, ss: f64) -> Mat4 {
    Mat4::new(
        c, -sc, -ss, 0.0, //
        sc, c, 0.0, ss, //
        ss, 0.0, c, -sc, //
        0.0, -ss, sc, c,
    )
}

/// `G_t(th)` in the basis `(x1, x2, y1, y2)`.
pub fn g_t(th: f64, t: f64) -> Mat4 {
    let (s, c) = th.sin_cos();
    let (s2, c2) = (2.0 * t).sin_cos();
    frame_from(c, s * c2, s * s2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FramedBasis {
    pub u: Vec4,
    pub v: Vec4,
}

pub fn framing_at(p: &DiskChartPoint) -> FramedBasis {
    let g = p.frame_matrix();
    FramedBasis {
        u: g.column(0).into(),
        v: g.column(1).into(),
    }
}

/// Closed form of the determinant of `(u', v', cos s' dx1 + sin s' dx2,
/// cos s' dy1 + sin s' dy2)` with `s' = pi - s`.
pub fn det_d_prime(th: f64, t: f64, s: f64) -> f64 {
    let (st, ct) = th.sin_cos();
    let (s2t, c2t) = (2.0 * t).sin_cos();
    let (s2s, c2s) = (2.0 * s).sin_cos();
    st * s2t * (c2t * c2s * st + s2s * ct)
}

/// The same determinant from the explicit matrix.
pub fn det_d_prime_oracle(th: f64, t: f64, s: f64) -> f64 {
    let g = g_t(th, t);
    let sp = PI - s;
    let m = Mat4::from_columns(&[
        g.column(0).into(),
        g.column(1).into(),
        Vec4::new(sp.cos(), sp.sin(), 0.0, 0.0),
        Vec4::new(0.0, 0.0, sp.cos(), sp.sin()),
    ]);
    m.determinant()
}

/// PLG point of the zero section's tangent plane `span(dx1, dx2)` read in
/// the frame `(u, v)`: the plane `G^T span(e1, e2)`.
pub fn zero_section_plg(p: &DiskChartPoint) -> S3 {
    let gt = p.frame_matrix().transpose();
    let plane = OrientedPlane {
        v1: gt.column(0).into(),
        v2: gt.column(1).into(),
    };
    central_project(&plane)
        .map(|q| q.sphere())
        .unwrap_or([0.0, 0.0, 1.0])
}

/// The zero-section PLG map on the polar grid `(r, angle)` of the disk.
pub struct ZeroSectionMap;

impl SphereMap for ZeroSectionMap {
    type Row = f64;
    fn row(&self, r: f64) -> f64 {
        r
    }
    fn eval(&self, r: &f64, a: f64) -> S3 {
        let (s, c) = a.sin_cos();
        zero_section_plg(&DiskChartPoint::new(r * c, r * s))
    }
}

pub fn zero_section_grid(n: usize) -> Grid {
    Grid {
        u0: 0.0,
        u1: 1.0,
        v0: 0.0,
        v1: 2.0 * PI,
        nu: n,
        nv: n,
    }
}

pub fn zero_section_oracles(n: usize, seed: u64) -> DegreeOracles {
    degree_oracles(
        &ZeroSectionMap,
        &zero_section_grid(n),
        &regular_values(seed, 12),
    )
}

/// `mu2(S)` from the Jacobian integral, when it is within `tol` of an
/// integer confirmed by the preimage majority.
pub fn zero_section_mu2(n: usize, tol: f64) -> Result<i64, f64> {
    let o = zero_section_oracles(n, 0);
    let d = o.jacobian.round();
    if (o.jacobian - d).abs() < tol && d as i64 == o.preimage_majority {
        Ok(d as i64)
    } else {
        Err(o.jacobian)
    }
}

/// `mu2` of the spheres obtained by resolving `S_j cup S_(j+1)`.
pub fn plumbed_sphere_mu2(mu_j: i64, mu_next: i64) -> i64 {
    mu_j + mu_next - 2
}

/// `mu2(S'_j)` in `W_n`, from `mu2(S_j) = 2`.
pub fn plumbed_sphere_mu2_at(j: usize) -> i64 {
    assert!(j >= 1);
    plumbed_sphere_mu2(2, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::splin::{j_matrix, omega};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn chart_relations_hold() {
        for i in 0..=40 {
            for j in 0..=40 {
                let (x1, x2) = (-1.0 + 0.05 * i as f64, -1.0 + 0.05 * j as f64);
                if x1 * x1 + x2 * x2 > 1.0 {
                    continue;
                }
                let p = DiskChartPoint::new(x1, x2);
                let (th, t) = p.theta_t();
                assert!((0.0..=PI).contains(&th) && (0.0..=FRAC_PI_2).contains(&t));
                assert!((th.cos() - (x1 * x1 - x2 * x2)).abs() < 1e-10);
                assert!((th.sin() * (2.0 * t).cos() - 2.0 * x1 * x2).abs() < 1e-10);
                assert!((g_t(th, t) - p.frame_matrix()).amax() < 1e-10);
            }
        }
    }

    #[test]
    fn frames_are_unitary() {
        let j = j_matrix();
        let n = 128;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for k in 0..n {
                let r = i as f64 / (n - 1) as f64;
                let a = 2.0 * PI * k as f64 / n as f64;
                let g = DiskChartPoint::new(r * a.cos(), r * a.sin()).frame_matrix();
                worst = worst.max((g.transpose() * g - Mat4::identity()).amax());
                worst = worst.max((g * j - j * g).amax());
                let f = framing_at(&DiskChartPoint::new(r * a.cos(), r * a.sin()));
                worst = worst.max(omega(&f.u, &f.v).abs());
            }
        }
        assert!(worst < 1e-12, "{worst}");
    }

    #[test]
    fn special_values() {
        for k in 0..16 {
            let a = 2.0 * PI * k as f64 / 16.0;
            let f = framing_at(&DiskChartPoint::new(a.cos(), a.sin()));
            let want = Vec4::new((2.0 * a).cos(), (2.0 * a).sin(), 0.0, 0.0);
            // sqrt(1 - |x|^4) turns rounding of |x| into ~1e-8.
            assert!((f.u - want).norm() < 1e-7, "{a}");
        }
        let f = framing_at(&DiskChartPoint::new(1.0, 0.0));
        assert_eq!(f.u, Vec4::new(1.0, 0.0, 0.0, 0.0));
        let f = framing_at(&DiskChartPoint::new(0.0, 0.0));
        assert_eq!(f.u, Vec4::new(0.0, 0.0, 1.0, 0.0));
        assert_eq!(f.v, Vec4::new(0.0, 0.0, 0.0, -1.0));
        // Along x2 = 0 at x1 = cos th, before the branched cover.
        for &th in &[0.3, 1.0, 2.0] {
            let g = g_t(th, 0.0);
            let u: Vec4 = g.column(0).into();
            let v: Vec4 = g.column(1).into();
            assert!((u - Vec4::new(th.cos(), th.sin(), 0.0, 0.0)).norm() < 1e-12);
            assert!((v - Vec4::new(-th.sin(), th.cos(), 0.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn shifted_and_negated_frames_are_inverse() {
        for &(th, t) in &[(0.3, 0.2), (1.7, 1.1), (2.9, 0.05)] {
            let g = g_t(th, t);
            let inv = g.try_inverse().unwrap();
            assert!((g_t(th, t + FRAC_PI_2) - inv).amax() < 1e-12);
            assert!((g_t(-th, t) - inv).amax() < 1e-12);
        }
    }

    #[test]
    fn d_prime_matches_determinant() {
        for i in 0..20 {
            for j in 0..20 {
                for k in 0..8 {
                    let th = PI * i as f64 / 19.0;
                    let t = FRAC_PI_2 * j as f64 / 19.0;
                    let s = PI * k as f64 / 8.0;
                    let a = det_d_prime(th, t, s);
                    assert!((a - det_d_prime_oracle(th, t, s)).abs() < 1e-9);
                }
            }
        }
        assert_eq!(det_d_prime(0.0, 0.4, 1.0), 0.0);
        assert!(det_d_prime(FRAC_PI_2, FRAC_PI_4, 0.0).abs() < 1e-15);
    }

    #[test]
    fn locus_is_a_pair_of_orthogonal_segments() {
        for &s in &[0.2, 0.5, 1.2] {
            let t2: f64 = (2.0f64 * s).tan();
            // Lines through the origin at angles b with tan 2b = -tan 2s.
            for b in [-s, FRAC_PI_2 - s] {
                for &r in &[0.2, 0.5, 0.9] {
                    let p = DiskChartPoint::new(r * b.cos(), r * b.sin());
                    let (x1, x2) = (p.x1, p.x2);
                    assert!((-2.0 * x1 * x2 - (x1 * x1 - x2 * x2) * t2).abs() < 1e-12);
                    let (th, t) = p.theta_t();
                    assert!(det_d_prime(th, t, s).abs() < 1e-12);
                    assert!(((2.0 * t).cos() + t2 / th.tan()).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn boundary_and_centre_degenerate() {
        for k in 0..32 {
            let a = 2.0 * PI * k as f64 / 32.0;
            let q = zero_section_plg(&DiskChartPoint::new(a.cos(), a.sin()));
            assert!((q[2] + 1.0).abs() < 1e-12, "{q:?}");
        }
        let q = zero_section_plg(&DiskChartPoint::new(0.0, 0.0));
        assert!((q[2] - 1.0).abs() < 1e-12, "{q:?}");
    }

    #[test]
    fn zero_section_has_mu2_two() {
        let o = zero_section_oracles(256, 0);
        assert!(o.preimage_counts.iter().all(|&c| c == 2), "{o:?}");
        assert!((o.jacobian - 2.0).abs() < 0.02, "{o:?}");
        assert_eq!(plumbed_sphere_mu2_at(1), 2);
        assert_eq!(plumbed_sphere_mu2(2, 2), 2);
    }
}
