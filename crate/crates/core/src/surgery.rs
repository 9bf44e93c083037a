//! la-disk surgery on orbit surfaces and the symbolic surgery ledger.
//!
//! A candidate disk is the orbit of the radial segment from the origin to a
//! point `p` of the profile where the tangent is orthogonal to the position.
//! Surgery replaces the arc through `p` by its image under `M`.

use crate::profile::{
    cross, dot, norm, ArcShape, Closure, ProfileArc, ProfileLoop, TangencyKind, DEFAULT_SAMPLES, P2,
};
use crate::surface::{OrbitSurface, SurfaceError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::{PI, SQRT_2};
use thiserror::Error;

/// Fraction of the segment next to `p` that is excluded from the clearance test.
const TIP_FRACTION: f64 = 1e-4;
const CLEARANCE: f64 = 1e-6;
const JOINT_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SurgeryError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("surgery is obstructed: {0}")]
    Obstructed(String),
    #[error("candidate arc is not bounded by tangencies")]
    NotCrossing,
    #[error("ledger has no twist site")]
    NoTwistSite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaDiskCandidate {
    pub arc: usize,
    pub s: f64,
    pub point: P2,
    /// `sin phi` at the point, equal to `omega(nu, nu_C)` up to scale.
    pub sin_phi: f64,
    pub stable: bool,
    /// Distance from the segment (tip excluded) to the loop and its antipode.
    pub clearance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    Same,
    Opposite,
}

fn sub(a: P2, b: P2) -> P2 {
    [a[0] - b[0], a[1] - b[1]]
}

/// Closed segments `[a, b]` and `[c, d]` meet.
fn segments_meet(a: P2, b: P2, c: P2, d: P2) -> bool {
    let o1 = cross(sub(b, a), sub(c, a));
    let o2 = cross(sub(b, a), sub(d, a));
    let o3 = cross(sub(d, c), sub(a, c));
    let o4 = cross(sub(d, c), sub(b, c));
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        return true;
    }
    let on = |p: P2, q: P2, r: P2, o: f64| {
        o == 0.0
            && r[0] >= p[0].min(q[0])
            && r[0] <= p[0].max(q[0])
            && r[1] >= p[1].min(q[1])
            && r[1] <= p[1].max(q[1])
    };
    on(a, b, c, o1) || on(a, b, d, o2) || on(c, d, a, o3) || on(c, d, b, o4)
}

fn point_segment_distance(p: P2, a: P2, b: P2) -> (f64, f64) {
    let d = sub(b, a);
    let l2 = dot(d, d);
    let t = if l2 > 0.0 {
        (dot(sub(p, a), d) / l2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (norm(sub(p, [a[0] + t * d[0], a[1] + t * d[1]])), t)
}

/// Samples of the loop together with their images under `g_pi`.
fn section_polylines(l: &ProfileLoop) -> Vec<Vec<P2>> {
    let mut out = Vec::new();
    for a in &l.arcs {
        out.push(a.samples.clone());
        out.push(a.samples.iter().map(|p| [-p[0], -p[1]]).collect());
    }
    out
}

/// Clearance of the segment from the origin to `p`, or `None` when the
/// segment meets the section of the surface.
fn segment_clearance(p: P2, polylines: &[Vec<P2>]) -> Option<f64> {
    let tip = [(1.0 - TIP_FRACTION) * p[0], (1.0 - TIP_FRACTION) * p[1]];
    let mut clearance = f64::INFINITY;
    for line in polylines {
        for w in line.windows(2) {
            if segments_meet([0.0, 0.0], tip, w[0], w[1]) {
                return None;
            }
        }
        for &c in line {
            let (d, t) = point_segment_distance(c, [0.0, 0.0], p);
            if t < 1.0 - TIP_FRACTION {
                clearance = clearance.min(d);
            }
        }
    }
    (clearance > CLEARANCE).then_some(clearance)
}

/// Points where the tangent is orthogonal to the position and the radial
/// segment misses the surface.
pub fn candidate_disks(s: &OrbitSurface) -> Vec<LaDiskCandidate> {
    let l = &s.profile;
    let polylines = section_polylines(l);
    let orient = l.angular_area().signum();
    let mut out = Vec::new();
    for (ai, arc) in l.arcs.iter().enumerate() {
        let n = arc.n_samples();
        let cp: Vec<f64> = (0..n).map(|i| arc.cos_phi(arc.param(i))).collect();
        for i in 0..n - 1 {
            let (a, b) = (cp[i], cp[i + 1]);
            if !(a * b < 0.0 || (b == 0.0 && i + 1 < n - 1)) {
                continue;
            }
            let (mut lo, mut hi) = (arc.param(i), arc.param(i + 1));
            if b != 0.0 {
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if arc.cos_phi(mid).signum() == a.signum() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if hi - lo < 1e-13 {
                        break;
                    }
                }
            }
            let t = if b == 0.0 { hi } else { 0.5 * (lo + hi) };
            let p = arc.position(t);
            if let Some(clearance) = segment_clearance(p, &polylines) {
                let sp = arc.sin_phi(t);
                out.push(LaDiskCandidate {
                    arc: ai,
                    s: t,
                    point: p,
                    sin_phi: sp,
                    stable: orient * sp < 0.0,
                    clearance,
                });
            }
        }
    }
    out
}

/// Compares `omega(nu, nu_C)` of two candidates.
pub fn relative_polarity(c: &LaDiskCandidate, c2: &LaDiskCandidate) -> Polarity {
    if c.sin_phi.signum() == c2.sin_phi.signum() {
        Polarity::Same
    } else {
        Polarity::Opposite
    }
}

#[derive(Debug, Clone)]
pub struct SurgeryOutcome {
    pub surface: OrbitSurface,
    /// The dual disk, through `M(p)` on the new loop.
    pub dual: LaDiskCandidate,
}

fn polylines_cross(a: &[P2], b: &[P2], ends: &[P2]) -> bool {
    let near_end = |p: P2| ends.iter().any(|e| norm(sub(p, *e)) < 1e-7);
    for u in a.windows(2) {
        for v in b.windows(2) {
            if segments_meet(u[0], u[1], v[0], v[1]) {
                let shared = [u[0], u[1]].iter().any(|&p| near_end(p))
                    && [v[0], v[1]].iter().any(|&p| near_end(p));
                if !shared {
                    return true;
                }
            }
        }
    }
    false
}

/// Replaces the arc through the candidate by its `M`-image.
pub fn apply_surgery(
    s: &OrbitSurface,
    c: &LaDiskCandidate,
) -> Result<SurgeryOutcome, SurgeryError> {
    let l = &s.profile;
    let n = l.n_arcs();
    let arc = &l.arcs[c.arc];
    if arc.cos_phi(c.s).abs() > 1e-6 {
        return Err(SurgeryError::NotCrossing);
    }
    if arc.sin_phi(0.0).abs() > 1e-8 || arc.sin_phi(1.0).abs() > 1e-8 {
        return Err(SurgeryError::NotCrossing);
    }
    if n < 2 {
        return Err(SurgeryError::Obstructed("loop has a single arc".into()));
    }
    let mut arcs: Vec<ProfileArc> = match l.closure {
        Closure::Closed => {
            let mut a = l.arcs.clone();
            a.rotate_left((c.arc + 1) % n);
            a
        }
        Closure::Antipodal if c.arc + 1 == n => l.arcs.clone(),
        Closure::Antipodal => {
            let mut a: Vec<ProfileArc> = l.arcs[c.arc + 1..].to_vec();
            a.extend(l.arcs[..=c.arc].iter().map(|x| x.negate()));
            a
        }
        _ => {
            return Err(SurgeryError::Obstructed(
                "loop is not a torus profile".into(),
            ))
        }
    };
    let old = arcs.pop().expect("at least two arcs");
    let new = old.reflect_m();
    let first = arcs[0].start_point();
    let prev_end = arcs[arcs.len() - 1].end_point();
    if norm(sub(new.start_point(), prev_end)) > JOINT_TOL {
        return Err(SurgeryError::Obstructed(
            "reflected arc does not attach".into(),
        ));
    }
    let end = new.end_point();
    let closure = if norm(sub(end, first)) < JOINT_TOL {
        Closure::Closed
    } else if norm([end[0] + first[0], end[1] + first[1]]) < JOINT_TOL {
        Closure::Antipodal
    } else {
        return Err(SurgeryError::Obstructed(
            "reflected arc does not close the loop".into(),
        ));
    };
    let ends = [
        new.start_point(),
        new.end_point(),
        [-new.start_point()[0], -new.start_point()[1]],
        [-end[0], -end[1]],
    ];
    let neg: Vec<P2> = new.samples.iter().map(|p| [-p[0], -p[1]]).collect();
    if polylines_cross(&new.samples, &neg, &ends) {
        return Err(SurgeryError::Obstructed(
            "reflected arc meets its antipode".into(),
        ));
    }
    for a in &arcs {
        let an: Vec<P2> = a.samples.iter().map(|p| [-p[0], -p[1]]).collect();
        if polylines_cross(&new.samples, &a.samples, &ends)
            || polylines_cross(&new.samples, &an, &ends)
        {
            return Err(SurgeryError::Obstructed(
                "reflected arc meets the rest of the loop".into(),
            ));
        }
    }
    arcs.push(new);
    let loop_new = ProfileLoop { arcs, closure };
    let surface = OrbitSurface::new(&loop_new)?;
    let mp = [c.point[1], c.point[0]];
    let dual = candidate_disks(&surface)
        .into_iter()
        .min_by(|a, b| norm(sub(a.point, mp)).total_cmp(&norm(sub(b.point, mp))))
        .filter(|d| norm(sub(d.point, mp)) < 1e-6)
        .ok_or_else(|| SurgeryError::Obstructed("dual disk not found".into()))?;
    Ok(SurgeryOutcome { surface, dual })
}

/// The most regular sample away from the candidate's arc; the surgery
/// leaves it in place, so it serves as the common reference point.
pub fn surgery_reference(s: &OrbitSurface, c: &LaDiskCandidate) -> Option<P2> {
    let mut best: Option<(f64, P2)> = None;
    for (_, arc) in s
        .profile
        .arcs
        .iter()
        .enumerate()
        .filter(|(a, _)| *a != c.arc)
    {
        for i in (0..arc.n_samples()).step_by(8) {
            let v = arc.sin_phi(arc.param(i)).abs();
            if v > crate::index::REGULAR_SIN && best.is_none_or(|b| v > b.0) {
                best = Some((v, arc.samples[i]));
            }
        }
    }
    best.map(|b| b.1)
}

/// A Chekanov-type loop whose outer arc carries a windowed perturbation;
/// the inner arc is the exact circle arc, placed last.
pub fn seeded_admissible_loop(seed: u64) -> ProfileLoop {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r: f64 = rng.gen_range(0.5..2.0);
    let terms: Vec<[f64; 3]> = (0..3)
        .map(|_| {
            [
                rng.gen_range(1..=4) as f64,
                rng.gen_range(-0.04..0.04),
                rng.gen_range(0.0..2.0 * PI),
            ]
        })
        .collect();
    let sigma = ProfileArc::new(
        ArcShape::Fourier {
            center: [SQRT_2 * r, 0.0],
            radius: r,
            window: Some((-0.75 * PI, 0.75 * PI)),
            terms,
        },
        -0.75 * PI,
        0.75 * PI,
        DEFAULT_SAMPLES,
    )
    .expect("valid arc");
    let gamma = ProfileArc::new(
        ArcShape::Circle {
            center: [SQRT_2 * r, 0.0],
            radius: r,
        },
        0.75 * PI,
        1.25 * PI,
        DEFAULT_SAMPLES,
    )
    .expect("valid arc");
    ProfileLoop::new(vec![sigma, gamma], Closure::Closed).expect("closed loop")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerEntry {
    /// `delta phi / pi`.
    pub delta_phi_pi: i64,
    pub sin_sign: i64,
    /// Parity relative to the reference entry.
    pub parity: i64,
    pub boundary: TangencyKind,
    pub chart: String,
    /// Contributions to `y` and `mu2` when the entry was inserted; the
    /// surface itself is unchanged by the insertion.
    pub y_baseline: i64,
    pub mu2_baseline: i64,
}

impl LedgerEntry {
    fn new(delta_phi_pi: i64, sin_sign: i64, parity: i64, chart: &str) -> Self {
        LedgerEntry {
            delta_phi_pi,
            sin_sign,
            parity,
            boundary: TangencyKind::Crossing,
            chart: chart.to_string(),
            y_baseline: 0,
            mu2_baseline: 0,
        }
    }

    pub fn degree(&self) -> i64 {
        2 * self.sin_sign * self.delta_phi_pi
    }
}

/// Cyclic record of annular domains.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurgeryLedger {
    pub entries: Vec<LedgerEntry>,
    pub reference: usize,
    pub site: Option<usize>,
}

impl SurgeryLedger {
    /// The Chekanov torus: outer and inner annuli, twist site on the inner one.
    pub fn chekanov() -> Self {
        SurgeryLedger {
            entries: vec![
                LedgerEntry::new(1, 1, 1, "R4"),
                LedgerEntry::new(1, -1, -1, "R4"),
            ],
            reference: 0,
            site: Some(1),
        }
    }

    /// A surface meeting the core sphere of a `T*S^2` chart, with a twist
    /// site next to the reference annulus.
    pub fn base(chart: &str) -> Self {
        SurgeryLedger {
            entries: vec![LedgerEntry::new(1, 1, 1, chart)],
            reference: 0,
            site: Some(1),
        }
    }

    /// Shadows an orbit surface; entry parities are taken relative to `reference`.
    pub fn from_surface(s: &OrbitSurface, reference: usize) -> Result<Self, SurfaceError> {
        let eps = s.cyclic_parity(reference)?;
        let entries = s
            .decompose()
            .iter()
            .map(|d| {
                let k = (d.delta_phi / PI).round() as i64;
                LedgerEntry::new(k, d.sin_sign as i64, eps[d.id], "R4")
            })
            .collect();
        Ok(SurgeryLedger {
            entries,
            reference,
            site: None,
        })
    }

    pub fn y(&self) -> i64 {
        self.entries
            .iter()
            .map(|e| e.parity * e.degree() - e.y_baseline)
            .sum()
    }

    pub fn mu2(&self) -> i64 {
        self.entries
            .iter()
            .map(|e| e.degree() - e.mu2_baseline)
            .sum()
    }

    /// Surgery on entry `i`: the annulus is replaced by its `M`-image, which
    /// reverses its phase and its side.
    pub fn flip(&self, i: usize) -> Self {
        let mut out = self.clone();
        let e = &mut out.entries[i];
        e.delta_phi_pi = -e.delta_phi_pi;
        e.sin_sign = -e.sin_sign;
        e.parity = -e.parity;
        e.boundary = TangencyKind::Folding;
        out
    }

    /// One double Dehn twist of sign `sign`: insert an annulus with
    /// `delta phi = sign pi` at the site, then flip it.
    pub fn twist(&self, sign: i64) -> Result<Self, SurgeryError> {
        let site = self.site.ok_or(SurgeryError::NoTwistSite)?;
        let chart = self
            .entries
            .get(site.min(self.entries.len().saturating_sub(1)))
            .map_or("R4".to_string(), |e| e.chart.clone());
        let mut e = LedgerEntry::new(sign.signum(), 1, 1, &chart);
        e.y_baseline = e.parity * e.degree();
        e.mu2_baseline = e.degree();
        let mut out = self.clone();
        let at = site.min(out.entries.len());
        out.entries.insert(at, e);
        if out.reference >= at && out.reference != 0 {
            out.reference += 1;
        }
        let mut out = out.flip(at);
        out.site = Some(at);
        Ok(out)
    }

    pub fn twists(&self, n: i64) -> Result<Self, SurgeryError> {
        let mut l = self.clone();
        for _ in 0..n.abs() {
            l = l.twist(n.signum())?;
        }
        Ok(l)
    }
}

/// `y(T_k)` for `k = -1..=n` along the A_n chain of tori.
pub fn an_torus_sequence(n: usize) -> Vec<(i64, i64)> {
    let mut ledgers = vec![SurgeryLedger::chekanov()];
    let t0 = ledgers[0].flip(1);
    ledgers.push(t0);
    for k in 1..=n {
        let mut next = ledgers[ledgers.len() - 1].clone();
        if let Some(s) = next.site {
            if let Some(e) = next.entries.get_mut(s) {
                e.chart = format!("W{n}:{k}");
            }
        }
        ledgers.push(next.twist(1).expect("site is kept"));
    }
    ledgers
        .iter()
        .enumerate()
        .map(|(i, l)| (i as i64 - 1, l.y()))
        .collect()
}

/// `y(T_k, T_j) = y(T_k) - y(T_j)` for all pairs.
pub fn an_relative_table(n: usize) -> Vec<(i64, i64, i64)> {
    let seq = an_torus_sequence(n);
    let mut out = Vec::new();
    for &(k, yk) in &seq {
        for &(j, yj) in &seq {
            out.push((k, j, yk - yj));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::relative_y;
    use crate::profile::Builtin;

    fn surf(b: Builtin) -> OrbitSurface {
        OrbitSurface::builtin(&b).unwrap()
    }

    #[test]
    fn candidates_of_builtins() {
        let c = candidate_disks(&surf(Builtin::Chekanov { r: 1.0 }));
        assert_eq!(c.len(), 1);
        assert!(c[0].stable);
        assert!((c[0].point[0] - (SQRT_2 - 1.0)).abs() < 1e-9 && c[0].point[1].abs() < 1e-9);
        let c = candidate_disks(&surf(Builtin::Clifford { r: 1.0 }));
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|x| !x.stable));
        assert!(candidate_disks(&surf(Builtin::Whitney)).is_empty());
    }

    #[test]
    fn chekanov_surgery_gives_clifford_and_back() {
        let ch = surf(Builtin::Chekanov { r: 1.0 });
        let c = candidate_disks(&ch)[0];
        let out = apply_surgery(&ch, &c).unwrap();
        let cl = surf(Builtin::Clifford { r: 1.0 });
        assert_eq!(out.surface.profile, cl.profile);
        assert_eq!(relative_polarity(&c, &out.dual), Polarity::Opposite);
        assert_eq!(relative_polarity(&c, &c), Polarity::Same);
        assert!(!out.dual.stable);
        let back = apply_surgery(&out.surface, &out.dual).unwrap();
        assert_eq!(back.surface.profile, ch.profile);
        let q = ch.profile.arcs[0].position(0.5);
        assert_eq!(relative_y(&out.surface, &ch, q).unwrap(), -4);
    }

    #[test]
    fn ledger_examples() {
        let l = SurgeryLedger::chekanov();
        assert_eq!((l.y(), l.mu2()), (4, 0));
        let t0 = l.flip(1);
        assert_eq!((t0.y(), t0.mu2()), (0, 0));
        let base = SurgeryLedger::base("T*S2");
        for n in -5..=5 {
            assert_eq!(base.twists(n).unwrap().y() - base.y(), -4 * n);
        }
        let back = base.twist(1).unwrap().twist(-1).unwrap();
        assert_eq!(back.y(), base.y());
        let none = SurgeryLedger { site: None, ..base };
        assert_eq!(none.twist(1), Err(SurgeryError::NoTwistSite));
    }

    #[test]
    fn an_sequence_values() {
        let seq = an_torus_sequence(3);
        assert_eq!(seq, vec![(-1, 4), (0, 0), (1, -4), (2, -8), (3, -12)]);
        for (k, j, v) in an_relative_table(4) {
            assert_eq!(v, 4 * (j - k));
        }
    }

    #[test]
    fn ledger_shadows_chekanov() {
        let ch = surf(Builtin::Chekanov { r: 1.0 });
        let led = SurgeryLedger::from_surface(&ch, 0).unwrap();
        assert_eq!(led.y(), 4);
        assert_eq!(
            led,
            SurgeryLedger {
                site: None,
                ..SurgeryLedger::chekanov()
            }
        );
    }

    #[test]
    fn seeded_loops_shift_y_by_minus_four() {
        for seed in 0..20 {
            let s = OrbitSurface::new(&seeded_admissible_loop(seed)).unwrap();
            let c = candidate_disks(&s);
            let c = c.iter().find(|c| c.stable).expect("inner disk");
            let out = apply_surgery(&s, c).unwrap();
            let q = s.profile.arcs[0].position(0.5);
            assert_eq!(relative_y(&out.surface, &s, q).unwrap(), -4, "seed {seed}");
        }
    }
}
