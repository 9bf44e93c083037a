//! Orbit surfaces `L = Orb_G(gamma)` of profile loops and their projected
//! Lagrangian Gauss maps into `P(K')`.
//!
//! Surface coordinates are `(arc, s, theta)`: a point of the profile loop and
//! the rotation angle of `g_theta`. The pair `(d/ds, d/dtheta)` is positive.

pub mod degree;

use crate::profile::{
    builtin_loop, AngularLift, Builtin, Closure, ProfileError, ProfileLoop, Tangency, TangencyKind,
};
use crate::splin::{
    central_project, intersection_data, maslov_winding, nearest_branch, u_theta, GroupElement,
    Mat4, OrientedPlane, PKPrimePoint, SplinError, Vec4,
};
use degree::{degree_oracles, regular_values, DegreeOracles, Grid, SphereMap, S3};
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

/// Allowed distance of a degree from the nearest integer.
pub const DEGREE_RESIDUAL: f64 = 0.05;
/// Offset used to keep away from a node at the origin.
const NODE_NUDGE: f64 = 1e-7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SurfaceError {
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Splin(#[from] SplinError),
    #[error("point lies on the node at the origin")]
    NodePoint,
    #[error("profile loop must be closed")]
    NotClosed,
    #[error("degree {0} is not within tolerance of an integer")]
    NonIntegral(f64),
    #[error("tau = {0} meets a singular point of the locus")]
    ExceptionalTau(f64),
    #[error("crossing domains form an odd cycle")]
    OddCycle,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossingDomain {
    pub id: usize,
    /// Consecutive arc indices of the (resegmented) loop, cyclically.
    pub arcs: Vec<usize>,
    pub sin_sign: i8,
    pub delta_phi: f64,
    /// `sin_sign * (2 / pi) * delta_phi` before rounding.
    pub degree_value: f64,
}

impl CrossingDomain {
    pub fn degree(&self) -> Result<i64, SurfaceError> {
        let d = self.degree_value.round();
        if (self.degree_value - d).abs() >= DEGREE_RESIDUAL {
            return Err(SurfaceError::NonIntegral(self.degree_value));
        }
        Ok(d as i64)
    }

    pub fn residual(&self) -> f64 {
        (self.degree_value - self.degree_value.round()).abs()
    }
}

#[derive(Debug, Clone)]
pub struct OrbitSurface {
    pub profile: ProfileLoop,
    pub lifts: Vec<AngularLift>,
    pub tangencies: Vec<Tangency>,
    domains: Vec<CrossingDomain>,
}

fn g(theta: f64) -> Mat4 {
    GroupElement::G(theta).matrix()
}

impl OrbitSurface {
    /// Builds the surface, splitting arcs so that crossing tangencies sit at
    /// joints.
    pub fn new(profile: &ProfileLoop) -> Result<Self, SurfaceError> {
        if !profile.is_closed() {
            return Err(SurfaceError::NotClosed);
        }
        let profile = profile.resegment()?;
        let lifts = profile.lift()?;
        let tangencies = profile.tangencies()?;
        let mut s = OrbitSurface {
            profile,
            lifts,
            tangencies,
            domains: Vec::new(),
        };
        s.domains = s.build_domains();
        Ok(s)
    }

    pub fn builtin(b: &Builtin) -> Result<Self, SurfaceError> {
        Self::new(&builtin_loop(b)?)
    }

    pub fn reversed(&self) -> Result<Self, SurfaceError> {
        Self::new(&self.profile.reversed())
    }

    fn arc_is_node_end(&self, arc: usize, s: f64) -> bool {
        self.profile.closure == Closure::OriginNode
            && ((arc == 0 && s <= 0.0) || (arc + 1 == self.profile.n_arcs() && s >= 1.0))
    }

    /// Oriented tangent frame `(g_theta(gamma'), X_G)`, normalized.
    pub fn tangent_plane(
        &self,
        arc: usize,
        s: f64,
        theta: f64,
    ) -> Result<OrientedPlane, SurfaceError> {
        let (p, v) = self.profile.arcs[arc].eval(s);
        let np = p[0].hypot(p[1]);
        if np < 1e-9 || self.arc_is_node_end(arc, s) {
            return Err(SurfaceError::NodePoint);
        }
        let nv = v[0].hypot(v[1]);
        let m = g(theta);
        let v1 = m * Vec4::new(v[0] / nv, 0.0, v[1] / nv, 0.0);
        let v2 = m * Vec4::new(0.0, p[0] / np, 0.0, p[1] / np);
        Ok(OrientedPlane { v1, v2 })
    }

    /// `[e^{i theta} cos(phi/2) : e^{-i theta} sin(phi/2)]`. Defined at the
    /// node endpoints through the one-sided limits.
    pub fn plg_point(&self, arc: usize, s: f64, theta: f64) -> PKPrimePoint {
        let (sp, cp) = self.profile.arcs[arc].phi_sin_cos(s);
        let half = sp.atan2(cp) / 2.0;
        PKPrimePoint::from_theta_s(theta, half)
    }

    /// The projection of the actual tangent plane, for cross-checking.
    pub fn plg_point_generic(
        &self,
        arc: usize,
        s: f64,
        theta: f64,
    ) -> Result<PKPrimePoint, SurfaceError> {
        Ok(central_project(&self.tangent_plane(arc, s, theta)?)?)
    }

    /// `(1/2) sin phi sin 2(theta - tau)`.
    pub fn locus_determinant(&self, arc: usize, s: f64, theta: f64, tau: f64) -> f64 {
        let sp = self.profile.arcs[arc].sin_phi(s);
        0.5 * sp * (2.0 * (theta - tau)).sin()
    }

    /// `det[v1 v2 u_tau J u_tau]` on the unit frame.
    pub fn locus_determinant_oracle(
        &self,
        arc: usize,
        s: f64,
        theta: f64,
        tau: f64,
    ) -> Result<f64, SurfaceError> {
        let p = self.tangent_plane(arc, s, theta)?;
        let u = u_theta(tau);
        let ju = crate::splin::j_matrix() * u;
        Ok(Mat4::from_columns(&[p.v1, p.v2, u, ju]).determinant())
    }

    fn crossing_joints(&self) -> Vec<usize> {
        let mut j: Vec<usize> = self
            .tangencies
            .iter()
            .filter(|t| t.kind == TangencyKind::Crossing)
            .map(|t| {
                debug_assert!(t.joint);
                t.arc
            })
            .collect();
        j.sort_unstable();
        j.dedup();
        j
    }

    fn build_domains(&self) -> Vec<CrossingDomain> {
        let n = self.profile.n_arcs();
        let joints = self.crossing_joints();
        let groups: Vec<Vec<usize>> = if joints.is_empty() {
            vec![(0..n).collect()]
        } else {
            let k = joints.len();
            (0..k)
                .map(|i| {
                    let a = joints[i];
                    let b = joints[(i + 1) % k];
                    let len = if b > a { b - a } else { b + n - a };
                    (0..len).map(|m| (a + m) % n).collect()
                })
                .collect()
        };
        groups
            .into_iter()
            .enumerate()
            .map(|(id, arcs)| {
                let delta_phi: f64 = arcs.iter().map(|&a| self.lifts[a].delta_phi()).sum();
                let sin_sign = self.domain_sin_sign(&arcs);
                CrossingDomain {
                    id,
                    degree_value: sin_sign as f64 * 2.0 / PI * delta_phi,
                    arcs,
                    sin_sign,
                    delta_phi,
                }
            })
            .collect()
    }

    fn domain_sin_sign(&self, arcs: &[usize]) -> i8 {
        let (arc, s) = self.regular_point_in(arcs);
        if self.profile.arcs[arc].sin_phi(s) >= 0.0 {
            1
        } else {
            -1
        }
    }

    /// Sample of the domain with the largest `|sin phi|`.
    fn regular_point_in(&self, arcs: &[usize]) -> (usize, f64) {
        let mut best = (arcs[0], 0.5, -1.0);
        for &a in arcs {
            let arc = &self.profile.arcs[a];
            for i in (0..arc.n_samples()).step_by(8) {
                let s = arc.param(i);
                let v = arc.sin_phi(s).abs();
                if v > best.2 {
                    best = (a, s, v);
                }
            }
        }
        (best.0, best.1)
    }

    pub fn decompose(&self) -> &[CrossingDomain] {
        &self.domains
    }

    pub fn domain_of_arc(&self, arc: usize) -> usize {
        self.domains
            .iter()
            .position(|d| d.arcs.contains(&arc))
            .expect("every arc lies in a domain")
    }

    pub fn mu2_formula(&self) -> Result<i64, SurfaceError> {
        self.domains.iter().map(|d| d.degree()).sum()
    }

    /// Sphere map of one domain, or of the whole surface.
    pub fn domain_map(&self, domain: Option<usize>) -> DomainMap<'_> {
        let arcs = match domain {
            Some(d) => self.domains[d].arcs.clone(),
            None => {
                // Start at a domain boundary so the strip is contiguous.
                let mut all = Vec::new();
                for d in &self.domains {
                    all.extend(d.arcs.iter().copied());
                }
                all
            }
        };
        DomainMap {
            surface: self,
            arcs,
        }
    }

    /// Preimage and Jacobian degree of a domain (or the whole surface) on a
    /// grid with `rows` steps per arc and `cols` steps in `theta`.
    pub fn degree_oracles(
        &self,
        domain: Option<usize>,
        rows: usize,
        cols: usize,
        seed: u64,
    ) -> DegreeOracles {
        let map = self.domain_map(domain);
        let grid = Grid {
            u0: 0.0,
            u1: map.arcs.len() as f64,
            v0: 0.0,
            v1: 2.0 * PI,
            nu: rows * map.arcs.len(),
            nv: cols,
        };
        degree_oracles(&map, &grid, &regular_values(seed, 12))
    }

    /// Components of the proper locus for `tau`: per domain, the four curves
    /// `theta = tau + k pi/2` oriented so that `V_tau` lies on their left.
    pub fn proper_locus(&self, tau: f64) -> ProperLocus {
        let mut components = Vec::new();
        for d in &self.domains {
            let (arc, s) = self.regular_point_in(&d.arcs);
            for k in 0..4 {
                let theta = tau + k as f64 * PI / 2.0;
                let det = self.locus_determinant(arc, s, theta + 1e-3, tau);
                components.push(LocusComponent {
                    domain: d.id,
                    k,
                    theta,
                    orientation: if det > 0.0 { 1 } else { -1 },
                });
            }
        }
        ProperLocus { tau, components }
    }

    /// Parity of domains along the cyclic chain; `OddCycle` when it is not
    /// two-colorable.
    pub fn cyclic_parity(&self, reference: usize) -> Result<Vec<i64>, SurfaceError> {
        let n = self.domains.len();
        if n > 1 && n % 2 == 1 {
            return Err(SurfaceError::OddCycle);
        }
        Ok((0..n)
            .map(|i| {
                if i.abs_diff(reference) % 2 == 0 {
                    1
                } else {
                    -1
                }
            })
            .collect())
    }

    /// Per-domain phases `alpha_i` along the proper locus of `tau`.
    pub fn domain_phases(&self, tau: f64) -> Result<Vec<f64>, SurfaceError> {
        let locus = self.proper_locus(tau);
        let mut out = vec![0.0; self.domains.len()];
        for c in &locus.components {
            let d = &self.domains[c.domain];
            let delta = self.phase_along(&d.arcs, c.theta, tau)?;
            out[c.domain] += c.orientation as f64 * delta;
        }
        Ok(out)
    }

    /// Change of (angle in `E_tau`) minus (angle in `E_{tau + pi/2}`) along
    /// the curve `theta = const` over the given arcs.
    fn phase_along(&self, arcs: &[usize], theta: f64, tau: f64) -> Result<f64, SurfaceError> {
        let angles = |arc: usize, s: f64| -> Result<(f64, f64), SurfaceError> {
            let p = self.tangent_plane(arc, s, theta)?;
            let a = intersection_data(&p, tau);
            let b = intersection_data(&p, tau + PI / 2.0);
            match (a.angle, b.angle) {
                (Some(x), Some(y)) => Ok((x, y)),
                _ => Err(SurfaceError::ExceptionalTau(tau)),
            }
        };
        let mut total = 0.0;
        for &a in arcs {
            let arc = &self.profile.arcs[a];
            let n = arc.n_samples();
            let lo = if self.arc_is_node_end(a, 0.0) {
                NODE_NUDGE
            } else {
                0.0
            };
            let hi = if self.arc_is_node_end(a, 1.0) {
                1.0 - NODE_NUDGE
            } else {
                1.0
            };
            let params: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * arc.param(i)).collect();
            let first = angles(a, params[0])?;
            let mut prev = first;
            let mut prev_s = params[0];
            for &s in &params[1..] {
                prev = self.refine_angles(&angles, a, prev_s, prev, s, 0)?;
                prev_s = s;
            }
            total += (prev.0 - first.0) - (prev.1 - first.1);
        }
        Ok(total)
    }

    #[allow(clippy::type_complexity)]
    fn refine_angles(
        &self,
        angles: &dyn Fn(usize, f64) -> Result<(f64, f64), SurfaceError>,
        arc: usize,
        s0: f64,
        a0: (f64, f64),
        s1: f64,
        depth: usize,
    ) -> Result<(f64, f64), SurfaceError> {
        let raw = angles(arc, s1)?;
        let a1 = (
            nearest_branch(a0.0, raw.0, PI),
            nearest_branch(a0.1, raw.1, PI),
        );
        if ((a1.0 - a0.0).abs() > 0.3 || (a1.1 - a0.1).abs() > 0.3) && depth < 24 {
            let mid = 0.5 * (s0 + s1);
            let am = self.refine_angles(angles, arc, s0, a0, mid, depth + 1)?;
            return self.refine_angles(angles, arc, mid, am, s1, depth + 1);
        }
        Ok(a1)
    }

    /// `alpha_tau = sum_i eps(i0, i) alpha_i`.
    pub fn relative_phase(&self, tau: f64, reference: usize) -> Result<f64, SurfaceError> {
        let eps = self.cyclic_parity(reference)?;
        let phases = self.domain_phases(tau)?;
        let alpha: f64 = phases.iter().zip(&eps).map(|(a, e)| a * *e as f64).sum();
        let k = (alpha / (2.0 * PI)).round();
        if (alpha - 2.0 * PI * k).abs() > 1e-3 {
            return Err(SurfaceError::ExceptionalTau(tau));
        }
        Ok(alpha)
    }

    /// Retries with `tau + 1e-3` increments on exceptional values.
    pub fn relative_phase_robust(
        &self,
        tau: f64,
        reference: usize,
    ) -> Result<(f64, f64), SurfaceError> {
        let mut t = tau;
        let mut last = SurfaceError::ExceptionalTau(tau);
        for _ in 0..=5 {
            match self.relative_phase(t, reference) {
                Ok(a) => return Ok((t, a)),
                Err(e @ SurfaceError::ExceptionalTau(_)) => last = e,
                Err(e) => return Err(e),
            }
            t += 1e-3;
        }
        Err(last)
    }

    /// Winding of `det_J^2` along the profile loop (at `theta = 0`) or along
    /// the orbit through the middle of the first arc.
    pub fn maslov_winding(&self, kind: LoopKind) -> Result<i64, SurfaceError> {
        let frames: Vec<OrientedPlane> = match kind {
            LoopKind::Profile => {
                if self.profile.closure == Closure::OriginNode {
                    return Err(ProfileError::NodeLoop.into());
                }
                let mut f = Vec::new();
                for (a, arc) in self.profile.arcs.iter().enumerate() {
                    for i in 0..arc.n_samples() {
                        f.push(self.tangent_plane(a, arc.param(i), 0.0)?);
                    }
                }
                f
            }
            LoopKind::Orbit => (0..=512)
                .map(|k| self.tangent_plane(0, 0.5, 2.0 * PI * k as f64 / 512.0))
                .collect::<Result<_, _>>()?,
        };
        let w = maslov_winding(&frames);
        let r = w.round();
        if (w - r).abs() > 1e-6 {
            return Err(SurfaceError::NonIntegral(w));
        }
        Ok(r as i64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopKind {
    Profile,
    Orbit,
}

#[derive(Debug, Clone, Serialize)]
pub struct LocusComponent {
    pub domain: usize,
    pub k: usize,
    pub theta: f64,
    pub orientation: i8,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProperLocus {
    pub tau: f64,
    pub components: Vec<LocusComponent>,
}

/// The PLG map restricted to a run of arcs, with `u` in `[0, arcs.len()]`.
pub struct DomainMap<'a> {
    surface: &'a OrbitSurface,
    pub arcs: Vec<usize>,
}

impl SphereMap for DomainMap<'_> {
    type Row = (f64, f64);

    fn row(&self, u: f64) -> (f64, f64) {
        let k = (u.floor().max(0.0) as usize).min(self.arcs.len() - 1);
        let s = (u - k as f64).clamp(0.0, 1.0);
        self.surface.profile.arcs[self.arcs[k]].phi_sin_cos(s)
    }

    fn eval(&self, r: &(f64, f64), theta: f64) -> S3 {
        let (s2, c2) = (2.0 * theta).sin_cos();
        [r.0 * c2, -r.0 * s2, -r.1]
    }
}

/// The product torus `{x1^2 + y1^2 = a, x2^2 + y2^2 = b}`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProductTorus {
    pub a: f64,
    pub b: f64,
}

impl ProductTorus {
    pub fn tangent_plane(&self, u: f64, v: f64) -> OrientedPlane {
        OrientedPlane {
            v1: Vec4::new(-u.sin(), 0.0, u.cos(), 0.0),
            v2: Vec4::new(0.0, -v.sin(), 0.0, v.cos()),
        }
    }

    pub fn plg(&self, u: f64, v: f64) -> Result<PKPrimePoint, SurfaceError> {
        Ok(central_project(&self.tangent_plane(u, v))?)
    }

    /// Largest distance of image samples from their best-fit plane section
    /// of the sphere, i.e. from a circle.
    pub fn image_circle_residual(&self, n: usize) -> Result<f64, SurfaceError> {
        let mut pts = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let u = 2.0 * PI * i as f64 / n as f64;
                let v = 2.0 * PI * j as f64 / n as f64;
                pts.push(self.plg(u, v)?.sphere());
            }
        }
        Ok(plane_fit_residual(&pts))
    }
}

impl SphereMap for ProductTorus {
    type Row = f64;
    fn row(&self, u: f64) -> f64 {
        u
    }
    fn eval(&self, u: &f64, v: f64) -> S3 {
        self.plg(*u, v)
            .map(|p| p.sphere())
            .unwrap_or([0.0, 0.0, 1.0])
    }
}

/// Maximum distance of the points from their least-squares plane.
pub fn plane_fit_residual(pts: &[S3]) -> f64 {
    use nalgebra::{Matrix3, Vector3};
    let n = pts.len() as f64;
    let mut c = Vector3::zeros();
    for p in pts {
        c += Vector3::new(p[0], p[1], p[2]);
    }
    c /= n;
    let mut cov = Matrix3::zeros();
    for p in pts {
        let d = Vector3::new(p[0], p[1], p[2]) - c;
        cov += d * d.transpose();
    }
    let eig = cov.symmetric_eigen();
    let i = eig.eigenvalues.imin();
    let normal = eig.eigenvectors.column(i).into_owned();
    pts.iter()
        .map(|p| (Vector3::new(p[0], p[1], p[2]) - c).dot(&normal).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::splin::chart_distance;

    fn chekanov() -> OrbitSurface {
        OrbitSurface::builtin(&Builtin::Chekanov { r: 1.0 }).unwrap()
    }

    #[test]
    fn chekanov_frame_at_top_of_circle() {
        let s = chekanov();
        let p = s.tangent_plane(0, 0.5, 0.0).unwrap();
        assert!((p.v1 - Vec4::new(0.0, 0.0, 1.0, 0.0)).norm() < 1e-12);
        assert!((p.v2 - Vec4::new(0.0, 1.0, 0.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn frames_are_lagrangian_and_equivariant() {
        let s = chekanov();
        for &(a, u, th) in &[(0, 0.1, 0.3), (1, 0.7, 2.0), (0, 0.9, 5.0)] {
            let p = s.tangent_plane(a, u, th).unwrap();
            assert!(p.omega_value().abs() < 1e-12);
            let q = s
                .tangent_plane(a, u, 0.0)
                .unwrap()
                .transform(GroupElement::G(th));
            assert!((p.v1 - q.v1).norm() < 1e-12 && (p.v2 - q.v2).norm() < 1e-12);
        }
    }

    #[test]
    fn fast_and_generic_plg_agree() {
        for b in [
            Builtin::Chekanov { r: 1.0 },
            Builtin::Clifford { r: 0.7 },
            Builtin::Whitney,
        ] {
            let s = OrbitSurface::builtin(&b).unwrap();
            for a in 0..s.profile.n_arcs() {
                for i in 1..32 {
                    for j in 0..16 {
                        let u = i as f64 / 32.0;
                        let th = 2.0 * PI * j as f64 / 16.0;
                        let f = s.plg_point(a, u, th).sphere();
                        let g = s.plg_point_generic(a, u, th).unwrap().sphere();
                        assert!(chart_distance(&f, &g) < 1e-8, "{b:?} {a} {u} {th}");
                    }
                }
            }
        }
    }

    #[test]
    fn determinant_matches_oracle() {
        let s = chekanov();
        for &(a, u, th, tau) in &[(0, 0.2, 0.4, 0.1), (1, 0.6, 1.9, 2.2), (0, 0.5, 0.3, 0.3)] {
            let f = s.locus_determinant(a, u, th, tau);
            let o = s.locus_determinant_oracle(a, u, th, tau).unwrap();
            assert!((f - o).abs() < 1e-9, "{f} vs {o}");
        }
    }

    #[test]
    fn domains_of_builtins() {
        let c = chekanov();
        let d = c.decompose();
        assert_eq!(d.len(), 2);
        assert_eq!((d[0].sin_sign, d[0].degree().unwrap()), (1, 2));
        assert_eq!((d[1].sin_sign, d[1].degree().unwrap()), (-1, -2));
        let w = OrbitSurface::builtin(&Builtin::Whitney).unwrap();
        assert_eq!(w.decompose().len(), 1);
        assert_eq!(w.mu2_formula().unwrap(), 2);
        let cl = OrbitSurface::builtin(&Builtin::Clifford { r: 1.0 }).unwrap();
        assert_eq!(cl.decompose().len(), 1);
        assert_eq!(cl.mu2_formula().unwrap(), 0);
    }

    #[test]
    fn degree_oracles_agree_with_formula_on_chekanov() {
        let c = chekanov();
        for d in c.decompose() {
            let o = c.degree_oracles(Some(d.id), 256, 128, 11);
            let want = d.degree().unwrap();
            assert!(o.preimage_counts.iter().all(|&x| x == want), "{o:?}");
            assert!((o.jacobian - want as f64).abs() < 0.02, "{}", o.jacobian);
        }
    }

    #[test]
    fn relative_phase_examples() {
        let c = chekanov();
        let a = c.relative_phase(0.0, 0).unwrap();
        assert!((a - 8.0 * PI).abs() < 1e-3, "{a}");
        let cl = OrbitSurface::builtin(&Builtin::Clifford { r: 1.0 }).unwrap();
        assert!(cl.relative_phase(0.0, 0).unwrap().abs() < 1e-3);
        let w = OrbitSurface::builtin(&Builtin::Whitney).unwrap();
        let a = w.relative_phase_robust(0.0, 0).unwrap().1;
        assert!((a - 4.0 * PI).abs() < 1e-3, "{a}");
    }

    #[test]
    fn proper_locus_flips_under_quarter_turn() {
        let c = chekanov();
        let l0 = c.proper_locus(0.4);
        let l1 = c.proper_locus(0.4 + PI / 2.0);
        for (a, b) in l0.components.iter().zip(&l1.components) {
            // Same curve set, shifted by one index.
            assert_eq!(a.domain, b.domain);
        }
        for d in 0..2 {
            for k in 0..4 {
                let a = &l0.components[d * 4 + k];
                let b = &l1.components[d * 4 + (k + 3) % 4];
                assert!(
                    (a.theta - b.theta)
                        .rem_euclid(2.0 * PI)
                        .min((b.theta - a.theta).rem_euclid(2.0 * PI))
                        < 1e-12
                );
                assert_eq!(a.orientation, -b.orientation);
            }
        }
    }

    #[test]
    fn maslov_examples() {
        let c = chekanov();
        assert_eq!(c.maslov_winding(LoopKind::Profile).unwrap(), 2);
        assert_eq!(c.maslov_winding(LoopKind::Orbit).unwrap(), 0);
        let w = OrbitSurface::builtin(&Builtin::Whitney).unwrap();
        assert!(w.maslov_winding(LoopKind::Profile).is_err());
    }

    #[test]
    fn product_torus_image_is_a_circle() {
        let t = ProductTorus { a: 1.0, b: 2.0 };
        assert!(t.image_circle_residual(32).unwrap() < 1e-6);
    }
}
