//! Profile curves in the punctured `(x1, y1)`-plane.
//!
//! A [`ProfileLoop`] is a cyclic chain of [`ProfileArc`]s. Each arc is a
//! closed-form parametrized curve (with exact derivatives) plus a uniform
//! sample table. Arcs are traversed by a local parameter `s` in `[0, 1]`.

use serde::Serialize;
use std::f64::consts::{PI, SQRT_2};
use thiserror::Error;

pub type P2 = [f64; 2];

pub const DEFAULT_SAMPLES: usize = 1024;
pub const MIN_SAMPLES: usize = 256;
/// Below this `|sin phi|` a sample counts as tangent.
pub const TANGENCY_EPS: f64 = 1e-8;
const DEGENERATE_EPS: f64 = 1e-12;
const ORIGIN_EPS: f64 = 1e-9;
const BISECT_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProfileError {
    #[error("arc {arc} passes through the origin at s = {s}")]
    OriginCrossing { arc: usize, s: f64 },
    #[error("arc {arc} has vanishing velocity at s = {s}")]
    CuspDetected { arc: usize, s: f64 },
    #[error("sin(phi) vanishes on an interval near arc {arc}, s = {s}")]
    DegenerateTangency { arc: usize, s: f64 },
    #[error("level set h = {0} is empty in x1 >= 0")]
    EmptyLevel(f64),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("loop is not closed (gap {0:e})")]
    NotClosed(f64),
    #[error("operation undefined on a loop with a node at the origin")]
    NodeLoop,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ArcShape {
    Circle {
        center: P2,
        radius: f64,
    },
    /// `(sqrt2 cos u, sin u cos u)`, the zero level of `h` in `x1 >= 0`.
    Teardrop,
    /// The level `h = b`, parametrized by the polar angle around `(1, 0)`.
    Level {
        b: f64,
    },
    /// Star-shaped perturbation of a circle; terms are `[k, amplitude, phase]`.
    Fourier {
        center: P2,
        radius: f64,
        window: Option<(f64, f64)>,
        terms: Vec<[f64; 3]>,
    },
    /// Catmull-Rom spline through the points, parameter `u` in sample units.
    Sampled {
        points: Vec<P2>,
        periodic: bool,
    },
    Segment {
        from: P2,
        to: P2,
    },
}

fn h_level(x: f64, y: f64) -> f64 {
    y * y - 0.5 * x * x + 0.25 * x.powi(4)
}

/// Radius along the ray from `(1, 0)` at angle `alpha` where `h = b`.
fn level_radius(b: f64, alpha: f64) -> Option<f64> {
    let (sa, ca) = alpha.sin_cos();
    let g = |r: f64| {
        let q = 2.0 * r * ca + r * r * ca * ca;
        r * r * sa * sa + 0.25 * q * q - 0.25 - b
    };
    let dg = |r: f64| {
        let q = 2.0 * r * ca + r * r * ca * ca;
        2.0 * r * sa * sa + q * ca * (1.0 + r * ca)
    };
    if g(0.0) >= 0.0 {
        return None;
    }
    let mut hi = if ca < 0.0 { 1.0 / -ca } else { 1.0 };
    if ca < 0.0 {
        if g(hi) < -1e-12 {
            return None;
        }
    } else {
        while g(hi) < 0.0 {
            hi *= 2.0;
            if hi > 1e6 {
                return None;
            }
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    let mut r = 0.5 * (lo + hi);
    for _ in 0..2 {
        let d = dg(r);
        if d.abs() > 1e-12 {
            let next = r - g(r) / d;
            if next.is_finite() && (next - r).abs() < 1e-9 {
                r = next;
            }
        }
    }
    Some(r)
}

fn catmull_rom(points: &[P2], periodic: bool, u: f64) -> (P2, P2) {
    let m = points.len();
    let last = if periodic { m as f64 } else { (m - 1) as f64 };
    let u = if periodic {
        u.rem_euclid(last)
    } else {
        u.clamp(0.0, last)
    };
    let mut i = u.floor() as isize;
    if i as f64 >= last {
        i = last as isize - 1;
    }
    let f = u - i as f64;
    let get = |k: isize| -> P2 {
        if periodic {
            points[k.rem_euclid(m as isize) as usize]
        } else if k < 0 {
            let (a, b) = (points[0], points[1]);
            [2.0 * a[0] - b[0], 2.0 * a[1] - b[1]]
        } else if k as usize >= m {
            let (a, b) = (points[m - 1], points[m - 2]);
            [2.0 * a[0] - b[0], 2.0 * a[1] - b[1]]
        } else {
            points[k as usize]
        }
    };
    let (p0, p1, p2, p3) = (get(i - 1), get(i), get(i + 1), get(i + 2));
    let mut pos = [0.0; 2];
    let mut vel = [0.0; 2];
    for c in 0..2 {
        let a = 2.0 * p1[c];
        let b = p2[c] - p0[c];
        let cc = 2.0 * p0[c] - 5.0 * p1[c] + 4.0 * p2[c] - p3[c];
        let d = -p0[c] + 3.0 * p1[c] - 3.0 * p2[c] + p3[c];
        pos[c] = 0.5 * (a + b * f + cc * f * f + d * f * f * f);
        vel[c] = 0.5 * (b + 2.0 * cc * f + 3.0 * d * f * f);
    }
    (pos, vel)
}

impl ArcShape {
    /// Whether the native parametrization is periodic, so that a closed
    /// single-arc loop may be cut at any parameter and re-joined.
    pub fn is_periodic(&self) -> bool {
        match self {
            ArcShape::Circle { .. } | ArcShape::Level { .. } => true,
            ArcShape::Fourier { window, terms, .. } => {
                window.is_none() && terms.iter().all(|t| t[0].fract() == 0.0)
            }
            ArcShape::Sampled { periodic, .. } => *periodic,
            ArcShape::Teardrop | ArcShape::Segment { .. } => false,
        }
    }

    /// Position and derivative with respect to the native parameter `u`.
    pub fn eval(&self, u: f64) -> (P2, P2) {
        match self {
            ArcShape::Circle { center, radius } => {
                let (s, c) = u.sin_cos();
                (
                    [center[0] + radius * c, center[1] + radius * s],
                    [-radius * s, radius * c],
                )
            }
            ArcShape::Teardrop => {
                let (s, c) = u.sin_cos();
                ([SQRT_2 * c, s * c], [-SQRT_2 * s, (2.0 * u).cos()])
            }
            ArcShape::Level { b } => {
                let (sa, ca) = u.sin_cos();
                let r = level_radius(*b, u).unwrap_or(f64::NAN);
                let q = 2.0 * r * ca + r * r * ca * ca;
                let g_r = 2.0 * r * sa * sa + q * ca * (1.0 + r * ca);
                let g_a = 2.0 * r * r * sa * ca - q * r * sa * (1.0 + r * ca);
                let dr = -g_a / g_r;
                ([1.0 + r * ca, r * sa], [dr * ca - r * sa, dr * sa + r * ca])
            }
            ArcShape::Fourier {
                center,
                radius,
                window,
                terms,
            } => {
                let (mut f, mut df) = (0.0, 0.0);
                for t in terms {
                    let arg = t[0] * u + t[2];
                    f += t[1] * arg.cos();
                    df -= t[1] * t[0] * arg.sin();
                }
                let (w, dw) = match window {
                    None => (1.0, 0.0),
                    Some((s0, s1)) => {
                        if u <= *s0 || u >= *s1 {
                            (0.0, 0.0)
                        } else {
                            let l4 = (s1 - s0).powi(4);
                            let p = (u - s0) * (s1 - u);
                            let dp = s1 + s0 - 2.0 * u;
                            (16.0 * p * p / l4, 32.0 * p * dp / l4)
                        }
                    }
                };
                let r = radius * (1.0 + w * f);
                let dr = radius * (dw * f + w * df);
                let (s, c) = u.sin_cos();
                (
                    [center[0] + r * c, center[1] + r * s],
                    [dr * c - r * s, dr * s + r * c],
                )
            }
            ArcShape::Sampled { points, periodic } => catmull_rom(points, *periodic, u),
            ArcShape::Segment { from, to } => (
                [
                    from[0] + u * (to[0] - from[0]),
                    from[1] + u * (to[1] - from[1]),
                ],
                [to[0] - from[0], to[1] - from[1]],
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileArc {
    pub shape: ArcShape,
    /// Native parameter at `s = 0`.
    pub start: f64,
    /// Native parameter at `s = 1`.
    pub end: f64,
    /// Whether the image is reflected by `M: (x1, y1) -> (y1, x1)`.
    pub reflected: bool,
    /// Whether the image is rotated by `pi` (the action of `g_pi`).
    pub negated: bool,
    #[serde(skip)]
    pub samples: Vec<P2>,
}

impl ProfileArc {
    pub fn new(shape: ArcShape, start: f64, end: f64, n: usize) -> Result<Self, ProfileError> {
        if n < MIN_SAMPLES {
            return Err(ProfileError::BadParams(format!(
                "at least {MIN_SAMPLES} samples per arc required, got {n}"
            )));
        }
        if !(start.is_finite() && end.is_finite()) || start == end {
            return Err(ProfileError::BadParams("empty parameter range".into()));
        }
        let mut arc = ProfileArc {
            shape,
            start,
            end,
            reflected: false,
            negated: false,
            samples: Vec::new(),
        };
        arc.samples = (0..n)
            .map(|i| arc.position(i as f64 / (n - 1) as f64))
            .collect();
        if arc
            .samples
            .iter()
            .any(|p| !p[0].is_finite() || !p[1].is_finite())
        {
            return Err(ProfileError::BadParams(
                "arc does not evaluate on its range".into(),
            ));
        }
        Ok(arc)
    }

    pub fn n_samples(&self) -> usize {
        self.samples.len()
    }

    pub fn param(&self, i: usize) -> f64 {
        i as f64 / (self.samples.len() - 1) as f64
    }

    pub fn step(&self) -> f64 {
        1.0 / (self.samples.len() - 1) as f64
    }

    /// Position and velocity (with respect to `s`) at `s` in `[0, 1]`.
    pub fn eval(&self, s: f64) -> (P2, P2) {
        let span = self.end - self.start;
        let (p, v) = self.shape.eval(self.start + s * span);
        let v = [v[0] * span, v[1] * span];
        let (p, v) = if self.reflected {
            ([p[1], p[0]], [v[1], v[0]])
        } else {
            (p, v)
        };
        if self.negated {
            ([-p[0], -p[1]], [-v[0], -v[1]])
        } else {
            (p, v)
        }
    }

    pub fn position(&self, s: f64) -> P2 {
        self.eval(s).0
    }

    pub fn start_point(&self) -> P2 {
        self.samples[0]
    }

    pub fn end_point(&self) -> P2 {
        self.samples[self.samples.len() - 1]
    }

    /// `(sin phi, cos phi)` from position and velocity; at a node endpoint
    /// the one-sided limit is returned.
    pub fn phi_sin_cos(&self, s: f64) -> (f64, f64) {
        let (_, v) = self.eval(s);
        let p = self.angle_position(s);
        let d = norm(p) * norm(v);
        (cross(p, v) / d, dot(p, v) / d)
    }

    pub fn sin_phi(&self, s: f64) -> f64 {
        self.phi_sin_cos(s).0
    }

    pub fn cos_phi(&self, s: f64) -> f64 {
        self.phi_sin_cos(s).1
    }

    /// The image under `M`. Applying it twice restores the arc bit for bit.
    pub fn reflect_m(&self) -> ProfileArc {
        ProfileArc {
            shape: self.shape.clone(),
            start: self.start,
            end: self.end,
            reflected: !self.reflected,
            negated: self.negated,
            samples: self.samples.iter().map(|p| [p[1], p[0]]).collect(),
        }
    }

    /// The image under `g_pi`, i.e. `p -> -p`.
    pub fn negate(&self) -> ProfileArc {
        ProfileArc {
            shape: self.shape.clone(),
            start: self.start,
            end: self.end,
            reflected: self.reflected,
            negated: !self.negated,
            samples: self.samples.iter().map(|p| [-p[0], -p[1]]).collect(),
        }
    }

    pub fn reversed(&self) -> ProfileArc {
        let mut samples = self.samples.clone();
        samples.reverse();
        ProfileArc {
            shape: self.shape.clone(),
            start: self.end,
            end: self.start,
            reflected: self.reflected,
            negated: self.negated,
            samples,
        }
    }

    /// Sub-arc over `[s0, s1]`, resampled with the same count.
    pub fn sub_arc(&self, s0: f64, s1: f64) -> ProfileArc {
        let span = self.end - self.start;
        let mut arc = ProfileArc {
            shape: self.shape.clone(),
            start: self.start + s0 * span,
            end: self.start + s1 * span,
            reflected: self.reflected,
            negated: self.negated,
            samples: Vec::new(),
        };
        let n = self.samples.len();
        arc.samples = (0..n)
            .map(|i| arc.position(i as f64 / (n - 1) as f64))
            .collect();
        arc
    }

    /// Position used for angle computations; at an endpoint on the origin
    /// the one-sided limit direction is used instead.
    fn angle_position(&self, s: f64) -> P2 {
        let (p, v) = self.eval(s);
        if norm(p) >= ORIGIN_EPS {
            return p;
        }
        let inward = if s < 0.5 { 1.0 } else { -1.0 };
        [inward * v[0], inward * v[1]]
    }
}

pub fn cross(a: P2, b: P2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub fn dot(a: P2, b: P2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

pub fn norm(a: P2) -> f64 {
    a[0].hypot(a[1])
}

/// Continuous angular functions along one arc.
#[derive(Debug, Clone, Serialize)]
pub struct AngularLift {
    pub s: Vec<f64>,
    /// Polar angle of the position.
    pub t: Vec<f64>,
    /// Angle from the position to the tangent.
    pub phi: Vec<f64>,
}

impl AngularLift {
    pub fn delta_t(&self) -> f64 {
        self.t[self.t.len() - 1] - self.t[0]
    }

    pub fn delta_phi(&self) -> f64 {
        self.phi[self.phi.len() - 1] - self.phi[0]
    }

    fn shift(&mut self, dt: f64, dphi: f64) {
        self.t.iter_mut().for_each(|x| *x += dt);
        self.phi.iter_mut().for_each(|x| *x += dphi);
    }
}

fn unwrap_to(prev: f64, raw: f64) -> f64 {
    raw + 2.0 * PI * ((prev - raw) / (2.0 * PI)).round()
}

/// Lifts `t` and `phi` along an arc with nearest-branch continuation.
pub fn lift_angles(arc: &ProfileArc) -> Result<AngularLift, ProfileError> {
    lift_indexed(arc, 0)
}

fn lift_indexed(arc: &ProfileArc, index: usize) -> Result<AngularLift, ProfileError> {
    let n = arc.n_samples();
    let mut out = AngularLift {
        s: Vec::with_capacity(n),
        t: Vec::with_capacity(n),
        phi: Vec::with_capacity(n),
    };
    for i in 0..n {
        let s = arc.param(i);
        let (p, v) = arc.eval(s);
        if norm(p) < ORIGIN_EPS && i != 0 && i != n - 1 {
            return Err(ProfileError::OriginCrossing { arc: index, s });
        }
        if norm(v) < ORIGIN_EPS {
            return Err(ProfileError::CuspDetected { arc: index, s });
        }
        let p = arc.angle_position(s);
        let t_raw = p[1].atan2(p[0]);
        let phi_raw = cross(p, v).atan2(dot(p, v));
        let (t, phi) = match (out.t.last(), out.phi.last()) {
            (Some(&tp), Some(&pp)) => (unwrap_to(tp, t_raw), unwrap_to(pp, phi_raw)),
            _ => (t_raw, phi_raw),
        };
        out.s.push(s);
        out.t.push(t);
        out.phi.push(phi);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Closure {
    Open,
    /// The last arc ends where the first begins.
    Closed,
    /// The last arc ends at the antipode of the first start; the orbit
    /// surface closes up through `g_pi`.
    Antipodal,
    /// Both ends lie on the origin (a Whitney-type node).
    OriginNode,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileLoop {
    pub arcs: Vec<ProfileArc>,
    pub closure: Closure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TangencyKind {
    Crossing,
    Folding,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tangency {
    pub arc: usize,
    pub s: f64,
    /// Whether the tangency sits at the start of `arc` (a joint).
    pub joint: bool,
    pub kind: TangencyKind,
    /// Whether the concavity criterion gives the same classification.
    pub concavity_agrees: bool,
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Signed curvature numerator `v x a` by centred differences.
fn curvature_sign(arc: &ProfileArc, s: f64, h: f64) -> f64 {
    let p0 = arc.position(s - h);
    let p1 = arc.position(s);
    let p2 = arc.position(s + h);
    let v = [(p2[0] - p0[0]) / (2.0 * h), (p2[1] - p0[1]) / (2.0 * h)];
    let a = [
        (p2[0] - 2.0 * p1[0] + p0[0]) / (h * h),
        (p2[1] - 2.0 * p1[1] + p0[1]) / (h * h),
    ];
    sign(cross(v, a))
}

impl ProfileLoop {
    pub fn new(arcs: Vec<ProfileArc>, closure: Closure) -> Result<Self, ProfileError> {
        if arcs.is_empty() {
            return Err(ProfileError::BadParams("loop without arcs".into()));
        }
        let l = ProfileLoop { arcs, closure };
        let gap = l.closure_gap();
        if gap > 1e-7 {
            return Err(ProfileError::NotClosed(gap));
        }
        Ok(l)
    }

    pub fn n_arcs(&self) -> usize {
        self.arcs.len()
    }

    /// Largest endpoint mismatch at joints, including the closing one.
    pub fn closure_gap(&self) -> f64 {
        let n = self.arcs.len();
        let mut gap: f64 = 0.0;
        for i in 0..n.saturating_sub(1) {
            let a = self.arcs[i].end_point();
            let b = self.arcs[i + 1].start_point();
            gap = gap.max(norm([a[0] - b[0], a[1] - b[1]]));
        }
        let a = self.arcs[n - 1].end_point();
        let b = self.arcs[0].start_point();
        let closing = match self.closure {
            Closure::Open => 0.0,
            Closure::Closed => norm([a[0] - b[0], a[1] - b[1]]),
            Closure::Antipodal => norm([a[0] + b[0], a[1] + b[1]]),
            Closure::OriginNode => norm(a).max(norm(b)),
        };
        gap.max(closing)
    }

    pub fn is_closed(&self) -> bool {
        self.closure != Closure::Open
    }

    /// Same loop traversed backwards.
    pub fn reversed(&self) -> ProfileLoop {
        ProfileLoop {
            arcs: self.arcs.iter().rev().map(|a| a.reversed()).collect(),
            closure: self.closure,
        }
    }

    /// Position and velocity at global coordinate `sigma` in `[0, n_arcs]`.
    pub fn eval(&self, sigma: f64) -> (P2, P2) {
        let n = self.arcs.len();
        let i = (sigma.floor() as usize).min(n - 1);
        self.arcs[i].eval(sigma - i as f64)
    }

    /// Lifts on every arc, made continuous across the joints.
    pub fn lift(&self) -> Result<Vec<AngularLift>, ProfileError> {
        let mut lifts: Vec<AngularLift> = Vec::with_capacity(self.arcs.len());
        for (i, arc) in self.arcs.iter().enumerate() {
            let mut l = lift_indexed(arc, i)?;
            if let Some(prev) = lifts.last() {
                let tp = *prev.t.last().unwrap();
                let pp = *prev.phi.last().unwrap();
                let dt = unwrap_to(tp, l.t[0]) - l.t[0];
                let dp = unwrap_to(pp, l.phi[0]) - l.phi[0];
                l.shift(dt, dp);
            }
            lifts.push(l);
        }
        Ok(lifts)
    }

    pub fn delta_phi(&self) -> Result<f64, ProfileError> {
        Ok(self.lift()?.iter().map(|l| l.delta_phi()).sum())
    }

    pub fn delta_t(&self) -> Result<f64, ProfileError> {
        Ok(self.lift()?.iter().map(|l| l.delta_t()).sum())
    }

    /// Tangencies with the radial direction, node endpoints excluded.
    pub fn tangencies(&self) -> Result<Vec<Tangency>, ProfileError> {
        self.lift()?;
        let mut out = Vec::new();
        let n = self.arcs.len();
        for (ai, arc) in self.arcs.iter().enumerate() {
            if self.joint_is_tangent(ai) {
                out.push(self.classify_joint(ai));
            }
            out.extend(interior_tangencies(arc, ai)?);
        }
        if self.closure == Closure::Open && n > 0 {
            out.retain(|t| !(t.joint && t.arc == 0));
        }
        Ok(out)
    }

    fn prev_arc(&self, i: usize) -> Option<usize> {
        if i > 0 {
            return Some(i - 1);
        }
        match self.closure {
            Closure::Closed | Closure::Antipodal => Some(self.arcs.len() - 1),
            _ => None,
        }
    }

    fn joint_is_tangent(&self, i: usize) -> bool {
        if self.prev_arc(i).is_none() {
            return false;
        }
        self.arcs[i].sin_phi(0.0).abs() < TANGENCY_EPS
    }

    fn classify_joint(&self, i: usize) -> Tangency {
        let prev = &self.arcs[self.prev_arc(i).unwrap()];
        let next = &self.arcs[i];
        let before = prev.sin_phi(1.0 - prev.step());
        let after = next.sin_phi(next.step());
        let kind = if sign(before) != sign(after) {
            TangencyKind::Crossing
        } else {
            TangencyKind::Folding
        };
        let h = 0.5 * next.step().min(prev.step());
        let c_before = curvature_sign(prev, 1.0 - 2.0 * h, h);
        let c_after = curvature_sign(next, 2.0 * h, h);
        let concavity_kind = if c_before == c_after {
            TangencyKind::Crossing
        } else {
            TangencyKind::Folding
        };
        Tangency {
            arc: i,
            s: 0.0,
            joint: true,
            kind,
            concavity_agrees: concavity_kind == kind,
        }
    }

    /// Splits arcs at interior crossing tangencies so that every crossing
    /// tangency of the result sits at a joint. Closed loops are rotated to
    /// start at a crossing joint.
    pub fn resegment(&self) -> Result<ProfileLoop, ProfileError> {
        let tans = self.tangencies()?;
        if self.closure == Closure::Closed
            && self.arcs.len() == 1
            && self.arcs[0].shape.is_periodic()
        {
            let mut cuts: Vec<f64> = tans
                .iter()
                .filter(|t| t.kind == TangencyKind::Crossing)
                .map(|t| t.s)
                .collect();
            if cuts.is_empty() {
                return Ok(self.clone());
            }
            cuts.sort_by(f64::total_cmp);
            let arc = &self.arcs[0];
            let k = cuts.len();
            let arcs = (0..k)
                .map(|i| {
                    let hi = if i + 1 < k {
                        cuts[i + 1]
                    } else {
                        1.0 + cuts[0]
                    };
                    arc.sub_arc(cuts[i], hi)
                })
                .collect();
            return Ok(ProfileLoop {
                arcs,
                closure: self.closure,
            });
        }
        let mut arcs = Vec::new();
        let mut first_crossing_arc = None;
        for (ai, arc) in self.arcs.iter().enumerate() {
            let mut cuts: Vec<f64> = tans
                .iter()
                .filter(|t| t.arc == ai && !t.joint && t.kind == TangencyKind::Crossing)
                .map(|t| t.s)
                .collect();
            let starts_crossing = tans
                .iter()
                .any(|t| t.arc == ai && t.joint && t.kind == TangencyKind::Crossing);
            if starts_crossing && first_crossing_arc.is_none() {
                first_crossing_arc = Some(arcs.len());
            }
            if cuts.is_empty() {
                arcs.push(arc.clone());
                continue;
            }
            cuts.sort_by(f64::total_cmp);
            let mut lo = 0.0;
            for c in cuts {
                arcs.push(arc.sub_arc(lo, c));
                if first_crossing_arc.is_none() {
                    first_crossing_arc = Some(arcs.len());
                }
                lo = c;
            }
            arcs.push(arc.sub_arc(lo, 1.0));
        }
        if self.closure == Closure::Closed {
            if let Some(k) = first_crossing_arc {
                let len = arcs.len();
                arcs.rotate_left(k % len);
            }
        }
        Ok(ProfileLoop {
            arcs,
            closure: self.closure,
        })
    }

    /// `oint y1 dx1`, trapezoidal on an eightfold resampling of each arc.
    /// Antipodally closed loops integrate the open half (the orbit part of
    /// the surface loop contributes nothing).
    pub fn liouville_area(&self) -> Result<f64, ProfileError> {
        if !self.is_closed() {
            return Err(ProfileError::NotClosed(self.closure_gap()));
        }
        let mut total = 0.0;
        for arc in &self.arcs {
            let m = 8 * arc.n_samples();
            let mut prev = arc.position(0.0);
            let mut acc = 0.0;
            for k in 1..=m {
                let p = arc.position(k as f64 / m as f64);
                acc += 0.5 * (p[1] + prev[1]) * (p[0] - prev[0]);
                prev = p;
            }
            total += acc;
        }
        Ok(total)
    }

    /// `oint (x dy - y dx)`, twice the signed area swept around the origin.
    pub fn angular_area(&self) -> f64 {
        let mut total = 0.0;
        for arc in &self.arcs {
            for w in arc.samples.windows(2) {
                total += cross(w[0], w[1]);
            }
        }
        total
    }
}

fn interior_tangencies(arc: &ProfileArc, ai: usize) -> Result<Vec<Tangency>, ProfileError> {
    let n = arc.n_samples();
    let sp: Vec<f64> = (0..n).map(|i| arc.sin_phi(arc.param(i))).collect();
    let mut run = 0;
    for (i, v) in sp.iter().enumerate().take(n - 1).skip(1) {
        if v.abs() < DEGENERATE_EPS {
            run += 1;
            if run >= 3 {
                return Err(ProfileError::DegenerateTangency {
                    arc: ai,
                    s: arc.param(i),
                });
            }
        } else {
            run = 0;
        }
    }
    let mut out = Vec::new();
    let h = arc.step();
    let classify = |s: f64, kind: TangencyKind| {
        let hh = (0.5 * h).min(s / 3.0).min((1.0 - s) / 3.0);
        let before = curvature_sign(arc, s - 2.0 * hh, hh);
        let after = curvature_sign(arc, s + 2.0 * hh, hh);
        let ck = if before == after {
            TangencyKind::Crossing
        } else {
            TangencyKind::Folding
        };
        Tangency {
            arc: ai,
            s,
            joint: false,
            kind,
            concavity_agrees: ck == kind,
        }
    };
    // Sign changes strictly inside the arc. The end intervals count only
    // when the endpoint itself is not a tangency.
    for i in 0..n - 1 {
        let (a, b) = (sp[i], sp[i + 1]);
        if (i == 0 && a.abs() < TANGENCY_EPS) || (i == n - 2 && b.abs() < TANGENCY_EPS) {
            continue;
        }
        if a.abs() < TANGENCY_EPS && i > 1 && sign(sp[i - 1]) != sign(b) {
            continue;
        }
        if sign(a) * sign(b) < 0.0 || (b == 0.0 && i + 2 < n && sign(a) * sign(sp[i + 2]) < 0.0) {
            let (mut lo, mut hi) = (arc.param(i), arc.param(i + 1));
            if b == 0.0 {
                out.push(classify(hi, TangencyKind::Crossing));
                continue;
            }
            let sa = sign(a);
            while hi - lo > BISECT_TOL {
                let mid = 0.5 * (lo + hi);
                if sign(arc.sin_phi(mid)) == sa {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(classify(0.5 * (lo + hi), TangencyKind::Crossing));
        }
    }
    // Local minima of |sin phi| touching zero without a sign change.
    for i in 1..n - 1 {
        let (a, b, c) = (sp[i - 1].abs(), sp[i].abs(), sp[i + 1].abs());
        if !(b <= a && b <= c) || sign(sp[i - 1]) != sign(sp[i + 1]) || b > 1e-3 {
            continue;
        }
        let (lo, hi) = (arc.param(i - 1), arc.param(i + 1));
        let s = golden_min(|s| arc.sin_phi(s).abs(), lo, hi);
        if arc.sin_phi(s).abs() < TANGENCY_EPS && s > h && s < 1.0 - h {
            out.push(classify(s, TangencyKind::Folding));
        }
    }
    out.sort_by(|a, b| a.s.total_cmp(&b.s));
    Ok(out)
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > BISECT_TOL {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Named example loops.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Builtin {
    Chekanov { r: f64 },
    Clifford { r: f64 },
    Whitney,
    Circle { cx: f64, cy: f64, r: f64, s0: f64 },
    LevelCurve { b: f64 },
}

pub fn builtin_loop(b: &Builtin) -> Result<ProfileLoop, ProfileError> {
    builtin_loop_n(b, DEFAULT_SAMPLES)
}

pub fn builtin_loop_n(b: &Builtin, n: usize) -> Result<ProfileLoop, ProfileError> {
    match *b {
        Builtin::Chekanov { r } => {
            check_positive(r, "r")?;
            let c = ArcShape::Circle {
                center: [SQRT_2 * r, 0.0],
                radius: r,
            };
            let sigma = ProfileArc::new(c.clone(), -0.75 * PI, 0.75 * PI, n)?;
            let gamma = ProfileArc::new(c, 0.75 * PI, 1.25 * PI, n)?;
            ProfileLoop::new(vec![sigma, gamma], Closure::Closed)
        }
        Builtin::Clifford { r } => {
            let ch = builtin_loop_n(&Builtin::Chekanov { r }, n)?;
            let sigma = ch.arcs[0].clone();
            let gamma_m = ch.arcs[1].reflect_m();
            ProfileLoop::new(vec![sigma, gamma_m], Closure::Antipodal)
        }
        Builtin::Whitney => {
            let arc = ProfileArc::new(ArcShape::Teardrop, -0.5 * PI, 0.5 * PI, n)?;
            ProfileLoop::new(vec![arc], Closure::OriginNode)
        }
        Builtin::Circle { cx, cy, r, s0 } => {
            check_positive(r, "r")?;
            if (cx.hypot(cy) - r).abs() < 1e-9 {
                return Err(ProfileError::BadParams(
                    "circle passes through the origin".into(),
                ));
            }
            let c = ArcShape::Circle {
                center: [cx, cy],
                radius: r,
            };
            let arc = ProfileArc::new(c, s0, s0 + 2.0 * PI, n)?;
            ProfileLoop::new(vec![arc], Closure::Closed)?.resegment()
        }
        Builtin::LevelCurve { b } => level_curve(b, n),
    }
}

fn check_positive(v: f64, name: &str) -> Result<(), ProfileError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(ProfileError::BadParams(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

/// The `x1 >= 0` part of `h = b` with `h = y^2 - x^2/2 + x^4/4`.
pub fn level_curve(b: f64, n: usize) -> Result<ProfileLoop, ProfileError> {
    if !b.is_finite() || b <= -0.25 {
        return Err(ProfileError::EmptyLevel(b));
    }
    if b == 0.0 {
        return builtin_loop_n(&Builtin::Whitney, n);
    }
    let shape = ArcShape::Level { b };
    if b < 0.0 {
        let arc = ProfileArc::new(shape, -PI, PI, n)?;
        return ProfileLoop::new(vec![arc], Closure::Closed)?.resegment();
    }
    let a1 = PI - b.sqrt().atan();
    let arc = ProfileArc::new(shape, -a1, a1, n)?;
    ProfileLoop::new(vec![arc], Closure::Antipodal)?.resegment()
}

/// A seeded star-shaped loop: a circle with two Fourier terms. Even seeds
/// enclose the origin, odd seeds do not.
pub fn seeded_loop(seed: u64) -> ProfileLoop {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let radius: f64 = rng.gen_range(0.6..1.2);
    let d = if seed.is_multiple_of(2) {
        rng.gen_range(0.0..0.4)
    } else {
        rng.gen_range(1.4..2.5)
    } * radius;
    let beta: f64 = rng.gen_range(0.0..2.0 * PI);
    let terms = (0..2)
        .map(|_| {
            [
                rng.gen_range(2..=4) as f64,
                rng.gen_range(-0.15..0.15),
                rng.gen_range(0.0..2.0 * PI),
            ]
        })
        .collect();
    let shape = ArcShape::Fourier {
        center: [d * beta.cos(), d * beta.sin()],
        radius,
        window: None,
        terms,
    };
    let arc = ProfileArc::new(shape, 0.0, 2.0 * PI, DEFAULT_SAMPLES).expect("finite arc");
    ProfileLoop::new(vec![arc], Closure::Closed).expect("periodic arc closes")
}

/// Value of `h` on the samples, for residual checks.
pub fn level_residual(l: &ProfileLoop, b: f64) -> f64 {
    l.arcs
        .iter()
        .flat_map(|a| a.samples.iter())
        .map(|p| (h_level(p[0], p[1]) - b).abs())
        .fold(0.0, f64::max)
}

/// Smallest distance from `p` to the polyline through `pts`.
pub fn point_polyline_distance(p: P2, pts: &[P2]) -> f64 {
    let mut best = f64::INFINITY;
    for w in pts.windows(2) {
        let d = [w[1][0] - w[0][0], w[1][1] - w[0][1]];
        let l2 = dot(d, d);
        let t = if l2 > 0.0 {
            (dot([p[0] - w[0][0], p[1] - w[0][1]], d) / l2).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let q = [w[0][0] + t * d[0] - p[0], w[0][1] + t * d[1] - p[1]];
        best = best.min(norm(q));
    }
    best
}

/// Symmetric Hausdorff distance between two sampled loops.
pub fn hausdorff(a: &ProfileLoop, b: &ProfileLoop) -> f64 {
    let pa: Vec<P2> = a
        .arcs
        .iter()
        .flat_map(|x| x.samples.iter().copied())
        .collect();
    let pb: Vec<P2> = b
        .arcs
        .iter()
        .flat_map(|x| x.samples.iter().copied())
        .collect();
    let one = |x: &[P2], y: &[P2]| {
        x.iter()
            .map(|&p| point_polyline_distance(p, y))
            .fold(0.0, f64::max)
    };
    one(&pa, &pb).max(one(&pb, &pa))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chekanov_arcs_have_half_turn_phases() {
        let l = builtin_loop(&Builtin::Chekanov { r: 1.0 }).unwrap();
        let lifts = l.lift().unwrap();
        assert!((lifts[0].delta_phi() - PI).abs() < 1e-9);
        assert!((lifts[1].delta_phi() - PI).abs() < 1e-9);
        let mid = lifts[1].phi[lifts[1].phi.len() / 2];
        assert!(mid > PI && mid < 2.0 * PI);
    }

    #[test]
    fn radial_segment_has_zero_phi() {
        let arc = ProfileArc::new(
            ArcShape::Segment {
                from: [1.0, 1.0],
                to: [2.0, 2.0],
            },
            0.0,
            1.0,
            256,
        )
        .unwrap();
        let l = lift_angles(&arc).unwrap();
        assert!(l.phi.iter().all(|p| p.abs() < 1e-12));
        assert_eq!(l.delta_phi(), 0.0);
    }

    #[test]
    fn origin_crossing_is_rejected() {
        let arc = ProfileArc::new(
            ArcShape::Segment {
                from: [-1.0, 0.0],
                to: [1.0, 0.0],
            },
            0.0,
            1.0,
            257,
        )
        .unwrap();
        assert!(matches!(
            lift_angles(&arc),
            Err(ProfileError::OriginCrossing { .. })
        ));
    }

    #[test]
    fn reflect_m_matches_closed_form() {
        let r = 1.0;
        let arc = ProfileArc::new(
            ArcShape::Circle {
                center: [SQRT_2 * r, 0.0],
                radius: r,
            },
            0.75 * PI,
            1.25 * PI,
            512,
        )
        .unwrap();
        let m = arc.reflect_m();
        for i in [0, 100, 511] {
            let s = arc.start + arc.param(i) * (arc.end - arc.start);
            let want = [r * s.sin(), SQRT_2 * r + r * s.cos()];
            let got = m.samples[i];
            assert!((got[0] - want[0]).abs() < 1e-14 && (got[1] - want[1]).abs() < 1e-14);
        }
        assert_eq!(m.reflect_m(), arc);
        let d = lift_angles(&arc).unwrap().delta_phi();
        let dm = lift_angles(&m).unwrap().delta_phi();
        assert!((d + dm).abs() < 1e-9);
    }

    #[test]
    fn builtin_tangency_examples() {
        let ch = builtin_loop(&Builtin::Chekanov { r: 1.0 }).unwrap();
        let t = ch.tangencies().unwrap();
        assert_eq!(t.len(), 2);
        assert!(t
            .iter()
            .all(|x| x.kind == TangencyKind::Crossing && x.concavity_agrees));
        let cl = builtin_loop(&Builtin::Clifford { r: 1.0 }).unwrap();
        let t = cl.tangencies().unwrap();
        assert_eq!(t.len(), 2);
        assert!(t
            .iter()
            .all(|x| x.kind == TangencyKind::Folding && x.concavity_agrees));
        let wh = builtin_loop(&Builtin::Whitney).unwrap();
        assert!(wh.tangencies().unwrap().is_empty());
    }

    #[test]
    fn whitney_lift_runs_from_zero_to_pi() {
        let wh = builtin_loop(&Builtin::Whitney).unwrap();
        let l = &wh.lift().unwrap()[0];
        assert!(l.phi[0].abs() < 1e-6);
        assert!((l.delta_phi() - PI).abs() < 1e-6);
    }

    #[test]
    fn level_solver_matches_teardrop_on_open_range() {
        let a = ProfileArc::new(ArcShape::Level { b: 0.0 }, -3.0, 3.0, 512).unwrap();
        for p in &a.samples {
            assert!(h_level(p[0], p[1]).abs() < 1e-12);
        }
        let w = builtin_loop(&Builtin::Whitney).unwrap();
        let z = level_curve(0.0, 1024).unwrap();
        assert!(hausdorff(&w, &z) < 1e-9);
    }

    #[test]
    fn level_curve_derivative_matches_differences() {
        let shape = ArcShape::Level { b: -0.1 };
        for &u in &[-2.5, -0.3, 0.0, 1.1, 2.9] {
            let (_, v) = shape.eval(u);
            let h = 1e-6;
            let (p1, _) = shape.eval(u + h);
            let (p0, _) = shape.eval(u - h);
            for c in 0..2 {
                assert!((v[c] - (p1[c] - p0[c]) / (2.0 * h)).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn level_curves_close_and_stay_on_level() {
        for &b in &[-0.2, -0.125, 0.3, 1.0] {
            let l = level_curve(b, 1024).unwrap();
            assert!(l.closure_gap() < 1e-9, "b = {b}");
            assert!(level_residual(&l, b) < 1e-10, "b = {b}");
        }
        assert!(matches!(
            level_curve(-0.3, 512),
            Err(ProfileError::EmptyLevel(_))
        ));
    }

    #[test]
    fn liouville_examples() {
        for &r in &[0.5, 1.0, 2.0] {
            let l = builtin_loop(&Builtin::Chekanov { r }).unwrap();
            let a = l.liouville_area().unwrap();
            assert!((a.abs() - PI * r * r).abs() < 1e-6, "r = {r}: {a}");
        }
        let w = builtin_loop(&Builtin::Whitney).unwrap();
        let a = w.liouville_area().unwrap();
        assert!((a + 2.0 * SQRT_2 / 3.0).abs() < 1e-6, "{a}");
    }

    #[test]
    fn sampled_arc_interpolates_points() {
        let pts: Vec<P2> = (0..40)
            .map(|k| {
                let u = 2.0 * PI * k as f64 / 40.0;
                [3.0 + u.cos(), u.sin()]
            })
            .collect();
        let shape = ArcShape::Sampled {
            points: pts.clone(),
            periodic: true,
        };
        for (k, p) in pts.iter().enumerate() {
            let (q, _) = shape.eval(k as f64);
            assert!((q[0] - p[0]).abs() < 1e-12 && (q[1] - p[1]).abs() < 1e-12);
        }
        let arc = ProfileArc::new(shape, 0.0, 40.0, 512).unwrap();
        let l = ProfileLoop::new(vec![arc], Closure::Closed)
            .unwrap()
            .resegment()
            .unwrap();
        assert_eq!(l.n_arcs(), 2);
    }
}
