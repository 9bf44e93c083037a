//! The integrable system `(G, H)` on `R^4` and its torus fibers.
//!
//! Points are written in the basis `(x1, x2, y1, y2)`. A fiber is
//! parametrized through the reduction by `G`: with `rho = |x|^2` and
//! `P = x . y`, the level `H = b` becomes `P^2 = R(rho)` where
//! `R(rho) = rho (b + rho / 2 - rho^2 / 4) - a^2`.

use crate::index::{regular_point, y_index, IndexError};
use crate::profile::{level_curve, ProfileError, DEFAULT_SAMPLES};
use crate::splin::{
    central_project, chart_distance, maslov_winding, OrientedPlane, SplinError, Vec4,
};
use crate::surface::degree::regular_values;
use crate::surface::{OrbitSurface, SurfaceError};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

/// Radicand values within this distance of zero count as the boundary of the
/// moment range.
pub const RANGE_TOL: f64 = 1e-12;
/// Smallest omitted chart ball accepted as evidence of non-surjectivity.
pub const MIN_OMITTED_RADIUS: f64 = 0.05;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FiberError {
    #[error("(a, b) = ({0}, {1}) is outside the moment range")]
    OutOfRange(f64, f64),
    #[error("(a, b) = ({0}, {1}) lies on the boundary of the moment range")]
    Degenerate(f64, f64),
    #[error("negative radicand {0}")]
    NegativeRadicand(f64),
    #[error("fiber check failed: {0}")]
    Unverified(String),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Splin(#[from] SplinError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FiberSpec {
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FiberClass {
    ChekanovType,
    WhitneySphere,
    MonotoneCliffordType,
    GeneralTorus,
    Degenerate,
}

pub fn g_value(p: &Vec4) -> f64 {
    -p[0] * p[3] + p[1] * p[2]
}

pub fn h_value(p: &Vec4) -> f64 {
    let r = p[0] * p[0] + p[1] * p[1];
    p[2] * p[2] + p[3] * p[3] - 0.5 * r + 0.25 * r * r
}

pub fn x_g(p: &Vec4) -> Vec4 {
    Vec4::new(-p[1], p[0], -p[3], p[2])
}

/// Hamiltonian vector field of `H` for `omega = dx1 ^ dy1 + dx2 ^ dy2`.
pub fn x_h(p: &Vec4) -> Vec4 {
    let r = p[0] * p[0] + p[1] * p[1];
    Vec4::new(2.0 * p[2], 2.0 * p[3], p[0] * (1.0 - r), p[1] * (1.0 - r))
}

/// The function whose zero set is where the tangent plane meets `E_0`.
pub fn gamma0(p: &Vec4) -> f64 {
    p[0] * p[1] * (p[0] * p[0] + p[1] * p[1] - 1.0) + 2.0 * p[2] * p[3]
}

impl FiberSpec {
    pub fn new(a: f64, b: f64) -> Self {
        FiberSpec { a, b }
    }

    pub fn radicand(&self, rho: f64) -> f64 {
        rho * (self.b + 0.5 * rho - 0.25 * rho * rho) - self.a * self.a
    }

    /// Maximum of the radicand over `rho` in `(0, 4]`.
    pub fn max_radicand(&self) -> (f64, f64) {
        let mut best = (1e-3, self.radicand(1e-3));
        for i in 2..=4000 {
            let r = i as f64 * 1e-3;
            let v = self.radicand(r);
            if v > best.1 {
                best = (r, v);
            }
        }
        // Concave for rho > 2/3.
        let (mut lo, mut hi) = ((best.0 - 1e-3).max(1e-9), (best.0 + 1e-3).min(4.0));
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let m1 = hi - g * (hi - lo);
            let m2 = lo + g * (hi - lo);
            if self.radicand(m1) < self.radicand(m2) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        let r = 0.5 * (lo + hi);
        let v = self.radicand(r);
        if v > best.1 {
            (r, v)
        } else {
            best
        }
    }

    pub fn check_range(&self) -> Result<(), FiberError> {
        if !(self.a.is_finite() && self.b.is_finite()) {
            return Err(FiberError::OutOfRange(self.a, self.b));
        }
        let (_, m) = self.max_radicand();
        if m < -RANGE_TOL {
            Err(FiberError::OutOfRange(self.a, self.b))
        } else if m <= RANGE_TOL {
            Err(FiberError::Degenerate(self.a, self.b))
        } else {
            Ok(())
        }
    }

    /// Interval of `rho` on which the radicand is non-negative.
    pub fn rho_range(&self) -> Result<(f64, f64), FiberError> {
        self.check_range()?;
        if self.a == 0.0 {
            let d = (1.0 + 4.0 * self.b).sqrt();
            return Ok(((1.0 - d).max(0.0), 1.0 + d));
        }
        let (rm, _) = self.max_radicand();
        let root = |mut neg: f64, mut pos: f64| {
            for _ in 0..200 {
                let m = 0.5 * (neg + pos);
                if self.radicand(m) < 0.0 {
                    neg = m;
                } else {
                    pos = m;
                }
            }
            pos
        };
        let big = 2.0 + 2.0 * (1.0 + 4.0 * self.b.abs()).sqrt();
        Ok((root(0.0, rm), root(big, rm)))
    }
}

pub fn classify_fiber(f: &FiberSpec) -> Result<FiberClass, FiberError> {
    match f.check_range() {
        Err(FiberError::Degenerate(..)) => return Ok(FiberClass::Degenerate),
        Err(e) => return Err(e),
        Ok(()) => {}
    }
    Ok(if f.a != 0.0 {
        FiberClass::GeneralTorus
    } else if f.b < 0.0 {
        FiberClass::ChekanovType
    } else if f.b == 0.0 {
        FiberClass::WhitneySphere
    } else {
        FiberClass::MonotoneCliffordType
    })
}

/// Point of the fiber with `|x|^2 = rho`, `x . y = branch * sqrt(R(rho))`
/// and `arg x = psi`.
pub fn fiber_point(f: &FiberSpec, rho: f64, branch: f64, psi: f64) -> Result<Vec4, FiberError> {
    let r = f.radicand(rho);
    if r < -RANGE_TOL || rho <= 0.0 {
        return Err(FiberError::NegativeRadicand(r));
    }
    let p = branch.signum() * r.max(0.0).sqrt();
    let sr = rho.sqrt();
    let (x1, x2) = (sr * psi.cos(), sr * psi.sin());
    Ok(Vec4::new(
        x1,
        x2,
        (p * x1 + f.a * x2) / rho,
        (p * x2 - f.a * x1) / rho,
    ))
}

/// Torus chart `(alpha, psi)`: `rho = mid - half cos alpha`, the branch of
/// `P` following the sign of `sin alpha`.
#[derive(Debug, Clone, Copy)]
pub struct TorusChart {
    pub spec: FiberSpec,
    pub mid: f64,
    pub half: f64,
}

impl TorusChart {
    pub fn new(spec: FiberSpec) -> Result<Self, FiberError> {
        let (lo, hi) = spec.rho_range()?;
        Ok(TorusChart {
            spec,
            mid: 0.5 * (lo + hi),
            half: 0.5 * (hi - lo),
        })
    }

    pub fn point(&self, alpha: f64, psi: f64) -> Result<Vec4, FiberError> {
        let rho = self.mid - self.half * alpha.cos();
        let r = self.spec.radicand(rho).max(0.0);
        let sr = rho.sqrt();
        let (x1, x2) = (sr * psi.cos(), sr * psi.sin());
        let p = alpha.sin().signum() * r.sqrt();
        if rho <= 0.0 {
            return Err(FiberError::NegativeRadicand(rho));
        }
        Ok(Vec4::new(
            x1,
            x2,
            (p * x1 + self.spec.a * x2) / rho,
            (p * x2 - self.spec.a * x1) / rho,
        ))
    }

    /// Oriented tangent plane spanned by `X_G` and `X_H`.
    pub fn tangent_plane(&self, alpha: f64, psi: f64) -> Result<OrientedPlane, FiberError> {
        let p = self.point(alpha, psi)?;
        Ok(OrientedPlane::from_span(&x_g(&p), &x_h(&p))?)
    }

    /// Cell-centred `n x n` sample, avoiding `rho = 0` when it is attained.
    pub fn sample(&self, n: usize) -> Vec<(f64, f64)> {
        let h = 2.0 * PI / n as f64;
        (0..n)
            .flat_map(|i| (0..n).map(move |j| ((i as f64 + 0.5) * h, (j as f64 + 0.5) * h)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residuals {
    pub g_max: f64,
    pub h_max: f64,
}

pub fn fiber_residuals(f: &FiberSpec, n: usize) -> Result<Residuals, FiberError> {
    let chart = TorusChart::new(*f)?;
    let mut r = Residuals {
        g_max: 0.0,
        h_max: 0.0,
    };
    for (al, ps) in chart.sample(n) {
        let p = chart.point(al, ps)?;
        r.g_max = r.g_max.max((g_value(&p) - f.a).abs());
        r.h_max = r.h_max.max((h_value(&p) - f.b).abs());
    }
    Ok(r)
}

/// `int lambda` over the `G`-orbit through the chart point, `lambda = y dx`.
pub fn orbit_liouville(f: &FiberSpec, alpha: f64, n: usize) -> Result<f64, FiberError> {
    let chart = TorusChart::new(*f)?;
    let pts: Vec<Vec4> = (0..=n)
        .map(|k| chart.point(alpha, 2.0 * PI * k as f64 / n as f64))
        .collect::<Result<_, _>>()?;
    let h = 2.0 * PI / n as f64;
    let sum: f64 = pts
        .windows(2)
        .map(|w| {
            let y = (w[0] + w[1]) * 0.5;
            let d = w[1] - w[0];
            y[2] * d[0] + y[3] * d[1]
        })
        .sum();
    // The chord sum of a uniformly sampled rotation is `n sin(h) / (2 pi)`
    // times the integral.
    Ok(sum * h / h.sin())
}

/// Maslov winding of the tangent planes along the `G`-orbit.
pub fn orbit_maslov(f: &FiberSpec, alpha: f64, n: usize) -> Result<f64, FiberError> {
    let chart = TorusChart::new(*f)?;
    let frames: Vec<OrientedPlane> = (0..=n)
        .map(|k| chart.tangent_plane(alpha, 2.0 * PI * k as f64 / n as f64))
        .collect::<Result<_, _>>()?;
    Ok(maslov_winding(&frames))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapScan {
    pub points: usize,
    pub gap_min: f64,
    pub gap_max: f64,
    /// Largest distance of the unit vectors `Z1`, `Z2` from the tangent plane.
    pub tangency_residual: f64,
}

/// Angle gap between `Z2 = (x2, 0, y2, 0)` in `E_0` and `Z1 = (0, x1, 0, y1)`
/// in `E_pi/2`, sampled along the zero set of [`gamma0`], where both are
/// tangent to the fiber.
pub fn gap_scan(f: &FiberSpec, n: usize) -> Result<GapScan, FiberError> {
    let chart = TorusChart::new(*f)?;
    let h = 2.0 * PI / n as f64;
    let mut crossings = Vec::new();
    for i in 0..n {
        let al = (i as f64 + 0.5) * h;
        let vals: Vec<f64> = (0..=n)
            .map(|j| chart.point(al, j as f64 * h).map(|p| gamma0(&p)))
            .collect::<Result<_, _>>()?;
        for j in 0..n {
            let (g0, g1) = (vals[j], vals[j + 1]);
            if g0 * g1 < 0.0 {
                let (mut lo, mut hi) = (j as f64 * h, (j + 1) as f64 * h);
                for _ in 0..60 {
                    let m = 0.5 * (lo + hi);
                    if gamma0(&chart.point(al, m)?).signum() == g0.signum() {
                        lo = m;
                    } else {
                        hi = m;
                    }
                }
                crossings.push((al, 0.5 * (lo + hi)));
            }
        }
    }
    let mut scan = GapScan {
        points: crossings.len(),
        gap_min: f64::INFINITY,
        gap_max: f64::NEG_INFINITY,
        tangency_residual: 0.0,
    };
    for (al, ps) in crossings {
        let p = chart.point(al, ps)?;
        let t = chart.tangent_plane(al, ps)?;
        let residual = |z: Vec4| {
            let z = z / z.norm();
            (z - t.v1 * z.dot(&t.v1) - t.v2 * z.dot(&t.v2)).norm()
        };
        let r2 = residual(Vec4::new(p[1], 0.0, p[3], 0.0));
        let r1 = residual(Vec4::new(0.0, p[0], 0.0, p[2]));
        // Angle of Z2 in E_0 from d/dx1 minus angle of Z1 in E_pi/2 from d/dx2.
        let d = p[3].atan2(p[1]) - p[2].atan2(p[0]);
        let gap = d - 2.0 * PI * (d / (2.0 * PI)).round();
        scan.gap_min = scan.gap_min.min(gap);
        scan.gap_max = scan.gap_max.max(gap);
        scan.tangency_residual = scan.tangency_residual.max(r1).max(r2);
    }
    Ok(scan)
}

/// Largest chart ball missed by the PLG image of an `n x n` torus sample,
/// searched over `centers` spiral points: `(radius, center)`.
pub fn omitted_ball(
    f: &FiberSpec,
    n: usize,
    centers: usize,
) -> Result<(f64, [f64; 3]), FiberError> {
    let chart = TorusChart::new(*f)?;
    let image: Vec<[f64; 3]> = chart
        .sample(n)
        .into_par_iter()
        .map(|(al, ps)| -> Result<[f64; 3], FiberError> {
            Ok(central_project(&chart.tangent_plane(al, ps)?)?.sphere())
        })
        .collect::<Result<_, _>>()?;
    let mut cs = regular_values(0, centers);
    // Include the poles, which the spiral leaves out.
    cs.push([0.0, 0.0, 1.0]);
    cs.push([0.0, 0.0, -1.0]);
    let best = cs
        .par_iter()
        .map(|c| {
            let d = image
                .iter()
                .map(|p| chart_distance(c, p))
                .fold(f64::INFINITY, f64::min);
            (d, *c)
        })
        .reduce(
            || (f64::NEG_INFINITY, [0.0; 3]),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberIndices {
    pub class: FiberClass,
    pub mu2: i64,
    pub y_bar: i64,
    pub residuals: Residuals,
    /// Present for `a != 0`.
    pub omitted_radius: Option<f64>,
    pub gap: Option<GapScan>,
}

pub fn fiber_indices(f: &FiberSpec) -> Result<FiberIndices, FiberError> {
    let class = classify_fiber(f)?;
    if class == FiberClass::Degenerate {
        return Err(FiberError::Degenerate(f.a, f.b));
    }
    let residuals = fiber_residuals(f, 64)?;
    if f.a == 0.0 {
        let s = OrbitSurface::new(&level_curve(f.b, DEFAULT_SAMPLES)?)?;
        let rep = y_index(&s, regular_point(&s))?;
        return Ok(FiberIndices {
            class,
            mu2: rep.mu2,
            y_bar: rep.y_abs,
            residuals,
            omitted_radius: None,
            gap: None,
        });
    }
    let (radius, _) = omitted_ball(f, 128, 2048)?;
    if radius < MIN_OMITTED_RADIUS {
        return Err(FiberError::Unverified(format!(
            "PLG image omits only a ball of radius {radius}"
        )));
    }
    let gap = gap_scan(f, 256)?;
    let single = gap.points > 0
        && (gap.gap_max < 0.0 || gap.gap_min > 0.0)
        && gap.gap_min > -PI
        && gap.gap_max < PI;
    if !single {
        return Err(FiberError::Unverified(format!(
            "gap along the locus changes sign: {gap:?}"
        )));
    }
    Ok(FiberIndices {
        class,
        mu2: 0,
        y_bar: 0,
        residuals,
        omitted_radius: Some(radius),
        gap: Some(gap),
    })
}

/// The reduced curve `P^2 = R(rho)` as `(rho, P)` points.
pub fn reduced_curve(f: &FiberSpec, n: usize) -> Result<Vec<[f64; 2]>, FiberError> {
    let chart = TorusChart::new(*f)?;
    Ok((0..=n)
        .map(|k| {
            let al = 2.0 * PI * k as f64 / n as f64;
            let rho = chart.mid - chart.half * al.cos();
            [rho, al.sin().signum() * f.radicand(rho).max(0.0).sqrt()]
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn classification_examples() {
        let c = |a, b| classify_fiber(&FiberSpec::new(a, b)).unwrap();
        assert_eq!(c(0.0, -0.125), FiberClass::ChekanovType);
        assert_eq!(c(0.0, 0.0), FiberClass::WhitneySphere);
        assert_eq!(c(0.0, 1.0), FiberClass::MonotoneCliffordType);
        assert_eq!(c(0.1, 0.2), FiberClass::GeneralTorus);
        assert_eq!(c(0.0, -0.25), FiberClass::Degenerate);
        assert!(matches!(
            classify_fiber(&FiberSpec::new(0.0, -0.3)),
            Err(FiberError::OutOfRange(..))
        ));
        assert!(matches!(
            classify_fiber(&FiberSpec::new(2.0, 0.0)),
            Err(FiberError::OutOfRange(..))
        ));
    }

    #[test]
    fn classification_is_locally_constant() {
        // Strata of the interior: a > 0, a < 0, and the three pieces of a = 0.
        let stratum = |a: f64, b: f64| {
            (
                a.partial_cmp(&0.0),
                if a == 0.0 { b.partial_cmp(&0.0) } else { None },
            )
        };
        let grid: Vec<Vec<(f64, f64, Option<FiberClass>)>> = (0..101)
            .map(|i| {
                (0..101)
                    .map(|j| {
                        let a = -0.5 + 0.01 * i as f64;
                        let a = if i == 50 { 0.0 } else { a };
                        let b = -0.3 + 0.013 * j as f64;
                        (a, b, classify_fiber(&FiberSpec::new(a, b)).ok())
                    })
                    .collect()
            })
            .collect();
        for i in 0..100 {
            for j in 0..100 {
                let (a, b, c) = grid[i][j];
                for (a2, b2, c2) in [grid[i + 1][j], grid[i][j + 1]] {
                    let interior =
                        |c: Option<FiberClass>| c.is_some_and(|c| c != FiberClass::Degenerate);
                    if interior(c) && interior(c2) && stratum(a, b) == stratum(a2, b2) {
                        assert_eq!(c, c2, "({a}, {b}) vs ({a2}, {b2})");
                    }
                }
            }
        }
    }

    #[test]
    fn fiber_points_lie_on_the_fiber() {
        for &(a, b) in &[(0.1, 0.2), (-0.3, 0.5), (0.0, -0.125), (0.0, 1.0)] {
            let r = fiber_residuals(&FiberSpec::new(a, b), 64).unwrap();
            assert!(r.g_max < 1e-10 && r.h_max < 1e-9, "({a}, {b}): {r:?}");
        }
        let f = FiberSpec::new(0.0, -0.125);
        let (lo, _) = f.rho_range().unwrap();
        let p = fiber_point(&f, lo, 1.0, 0.0).unwrap();
        let q = fiber_point(&f, lo, -1.0, 0.0).unwrap();
        assert!((p - q).norm() < 1e-6);
        assert_eq!((p[1], p[3]), (0.0, 0.0));
        let h = p[2] * p[2] - 0.5 * p[0] * p[0] + 0.25 * p[0].powi(4);
        assert!((h - f.b).abs() < 1e-12);
        assert!(matches!(
            fiber_point(&f, 3.0, 1.0, 0.0),
            Err(FiberError::NegativeRadicand(_))
        ));
    }

    #[test]
    fn g_and_h_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let p = Vec4::from_fn(|_, _| rng.gen_range(-2.0..2.0));
            let grad_h = {
                let r = p[0] * p[0] + p[1] * p[1];
                Vec4::new(p[0] * (r - 1.0), p[1] * (r - 1.0), 2.0 * p[2], 2.0 * p[3])
            };
            assert!(grad_h.dot(&x_g(&p)).abs() < 1e-10);
        }
    }

    #[test]
    fn orbit_loops_have_liouville_minus_two_pi_a_and_no_maslov() {
        for &a in &[0.0, 0.1, -0.1, 0.3, -0.3] {
            let f = FiberSpec::new(a, 0.5);
            for &al in &[0.4, 2.0, 4.5] {
                let l = orbit_liouville(&f, al, 4096).unwrap();
                assert!((l + 2.0 * PI * a).abs() < 1e-8, "a = {a}: {l}");
                let m = orbit_maslov(&f, al, 512).unwrap();
                assert!(m.abs() < 1e-9, "a = {a}: {m}");
            }
        }
    }

    #[test]
    fn gap_sign_follows_a() {
        for a in [0.1f64, -0.1, 0.3, -0.3] {
            let b = if a.abs() < 0.2 { 0.2 } else { 0.5 };
            let g = gap_scan(&FiberSpec::new(a, b), 128).unwrap();
            assert!(g.points > 0);
            assert!(g.tangency_residual < 1e-6, "{g:?}");
            assert!(g.gap_max < PI && g.gap_min > -PI);
            assert!(g.gap_min * g.gap_max > 0.0, "{g:?}");
            assert_eq!(g.gap_min.signum(), -a.signum(), "{g:?}");
        }
    }

    #[test]
    fn index_table() {
        let idx = |a, b| {
            let r = fiber_indices(&FiberSpec::new(a, b)).unwrap();
            (r.mu2, r.y_bar)
        };
        assert_eq!(idx(0.0, -0.125), (0, 4));
        assert_eq!(idx(0.0, 0.0), (2, 2));
        assert_eq!(idx(0.0, 1.0), (0, 0));
        assert_eq!(idx(0.1, 0.2), (0, 0));
        assert_eq!(idx(-0.3, 0.5), (0, 0));
    }
}
