//! The crossing-domain graph, its parity function and the indices
//! `mu2`, `y`, `|y|` and relative `y`.

use crate::profile::P2;
use crate::surface::{OrbitSurface, SurfaceError};
use serde::Serialize;
use std::collections::VecDeque;
use std::f64::consts::PI;
use thiserror::Error;

/// Reference points must satisfy `|sin phi(q)| > REGULAR_SIN`.
pub const REGULAR_SIN: f64 = 0.1;
/// Values of `tau` at which the phase identity is evaluated.
pub const PHASE_TAUS: [f64; 4] = [0.0, 0.3, 0.7, 1.1];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IndexError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("crossing graph has an odd cycle")]
    OddCycle,
    #[error("reference point is not regular: |sin phi| = {0}")]
    IrregularReferencePoint(f64),
    #[error("reference point does not lie on the loop")]
    PointNotOnLoop,
    #[error("surfaces share no arc around the reference point")]
    NoCommonDomain,
    #[error("degree sum {sum} and phase {phase} disagree")]
    PhaseMismatch { sum: i64, phase: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossingGraph {
    pub degrees: Vec<i64>,
    pub edges: Vec<(usize, usize)>,
    /// Two-coloring, `+1` or `-1` per vertex, with vertex 0 colored `+1`.
    pub coloring: Vec<i64>,
}

impl CrossingGraph {
    /// Builds the graph from vertex degrees and edges, two-coloring it.
    pub fn from_edges(degrees: Vec<i64>, edges: Vec<(usize, usize)>) -> Result<Self, IndexError> {
        let n = degrees.len();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut color = vec![0i64; n];
        for root in 0..n {
            if color[root] != 0 {
                continue;
            }
            color[root] = 1;
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if color[w] == 0 {
                        color[w] = -color[v];
                        queue.push_back(w);
                    } else if color[w] == color[v] {
                        return Err(IndexError::OddCycle);
                    }
                }
            }
        }
        Ok(CrossingGraph {
            degrees,
            edges,
            coloring: color,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.degrees.len()
    }

    /// `+1` when `i` and `j` are joined by an even path.
    pub fn epsilon(&self, i: usize, j: usize) -> i64 {
        self.coloring[i] * self.coloring[j]
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n_vertices();
        if n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|x| x)
    }
}

/// One vertex per crossing domain and one edge per crossing tangency orbit.
pub fn build_graph(s: &OrbitSurface) -> Result<CrossingGraph, IndexError> {
    let domains = s.decompose();
    let degrees = domains
        .iter()
        .map(|d| d.degree())
        .collect::<Result<Vec<_>, _>>()?;
    let k = domains.len();
    let crossings = s
        .tangencies
        .iter()
        .filter(|t| t.kind == crate::profile::TangencyKind::Crossing)
        .count();
    let edges = if crossings == 0 {
        Vec::new()
    } else {
        // Domain i ends at the crossing where domain i + 1 starts.
        (0..k).map(|i| (i, (i + 1) % k)).collect()
    };
    CrossingGraph::from_edges(degrees, edges)
}

pub fn mu2(s: &OrbitSurface) -> Result<i64, IndexError> {
    Ok(s.mu2_formula()?)
}

/// A point on the surface's profile loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LoopPoint {
    pub arc: usize,
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DomainEntry {
    pub id: usize,
    pub degree: i64,
    pub degree_residual: f64,
    pub sin_sign: i8,
    pub delta_phi: f64,
    pub epsilon: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseEntry {
    pub tau: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexReport {
    pub mu2: i64,
    pub y: i64,
    pub y_abs: i64,
    pub reference_domain: usize,
    pub domains: Vec<DomainEntry>,
    pub phases: Vec<PhaseEntry>,
}

/// The loop point nearest to `p`, if within `tol`.
pub fn locate(s: &OrbitSurface, p: P2, tol: f64) -> Option<LoopPoint> {
    let mut best: Option<(f64, usize, usize)> = None;
    for (a, arc) in s.profile.arcs.iter().enumerate() {
        for (i, q) in arc.samples.iter().enumerate() {
            let d = (q[0] - p[0]).hypot(q[1] - p[1]);
            if best.is_none_or(|b| d < b.0) {
                best = Some((d, a, i));
            }
        }
    }
    let (_, a, i) = best?;
    let arc = &s.profile.arcs[a];
    // Refine between neighbouring samples.
    let lo = arc.param(i.saturating_sub(1));
    let hi = arc.param((i + 1).min(arc.n_samples() - 1));
    let dist = |t: f64| {
        let q = arc.position(t);
        (q[0] - p[0]).hypot(q[1] - p[1])
    };
    let (mut x0, mut x1) = (lo, hi);
    for _ in 0..100 {
        let m1 = x0 + (x1 - x0) / 3.0;
        let m2 = x1 - (x1 - x0) / 3.0;
        if dist(m1) < dist(m2) {
            x1 = m2;
        } else {
            x0 = m1;
        }
    }
    let t = 0.5 * (x0 + x1);
    (dist(t) <= tol).then_some(LoopPoint { arc: a, s: t })
}

/// The sample of the loop with the largest `|sin phi|`.
pub fn regular_point(s: &OrbitSurface) -> LoopPoint {
    let mut best = (f64::NEG_INFINITY, LoopPoint { arc: 0, s: 0.5 });
    for (a, arc) in s.profile.arcs.iter().enumerate() {
        for i in (0..arc.n_samples()).step_by(8) {
            let t = arc.param(i);
            let v = arc.sin_phi(t).abs();
            if v > best.0 {
                best = (v, LoopPoint { arc: a, s: t });
            }
        }
    }
    best.1
}

/// `y(L, q) = sum_i eps(i0, i) d_i`, cross-checked against `alpha_tau / 2 pi`.
pub fn y_index(s: &OrbitSurface, q: LoopPoint) -> Result<IndexReport, IndexError> {
    let sp = s.profile.arcs[q.arc].sin_phi(q.s);
    if sp.is_nan() || sp.abs() <= REGULAR_SIN {
        return Err(IndexError::IrregularReferencePoint(sp.abs()));
    }
    let graph = build_graph(s)?;
    let reference = s.domain_of_arc(q.arc);
    let domains: Vec<DomainEntry> = s
        .decompose()
        .iter()
        .map(|d| DomainEntry {
            id: d.id,
            degree: graph.degrees[d.id],
            degree_residual: d.residual(),
            sin_sign: d.sin_sign,
            delta_phi: d.delta_phi,
            epsilon: graph.epsilon(reference, d.id),
        })
        .collect();
    let y: i64 = domains.iter().map(|d| d.epsilon * d.degree).sum();
    let mut phases = Vec::new();
    for &tau in &PHASE_TAUS {
        let (t, alpha) = s.relative_phase_robust(tau, reference)?;
        let k = (alpha / (2.0 * PI)).round() as i64;
        if k != y {
            return Err(IndexError::PhaseMismatch {
                sum: y,
                phase: alpha,
            });
        }
        phases.push(PhaseEntry { tau: t, alpha });
    }
    Ok(IndexReport {
        mu2: graph.degrees.iter().sum(),
        y,
        y_abs: y.abs(),
        reference_domain: reference,
        domains,
        phases,
    })
}

/// `y(S', q) - y(S, q)` when both surfaces contain bitwise the same samples
/// around `q`.
pub fn relative_y(s_new: &OrbitSurface, s_old: &OrbitSurface, q: P2) -> Result<i64, IndexError> {
    let qa = shared_point(s_new, s_old, q)?;
    let qb = shared_point(s_old, s_new, q)?;
    let a = y_index(s_new, qa)?;
    let b = y_index(s_old, qb)?;
    Ok(a.y - b.y)
}

const SHARED_WINDOW: usize = 8;

fn shared_point(a: &OrbitSurface, b: &OrbitSurface, q: P2) -> Result<LoopPoint, IndexError> {
    let pa = locate(a, q, 1e-6).ok_or(IndexError::PointNotOnLoop)?;
    let pb = locate(b, q, 1e-6).ok_or(IndexError::PointNotOnLoop)?;
    let arc_a = &a.profile.arcs[pa.arc];
    let arc_b = &b.profile.arcs[pb.arc];
    let ia = (pa.s * (arc_a.n_samples() - 1) as f64).round() as isize;
    let ib = (pb.s * (arc_b.n_samples() - 1) as f64).round() as isize;
    for k in -(SHARED_WINDOW as isize)..=SHARED_WINDOW as isize {
        let (x, y) = (ia + k, ib + k);
        let (ga, gb) = (
            usize::try_from(x).ok().and_then(|i| arc_a.samples.get(i)),
            usize::try_from(y).ok().and_then(|i| arc_b.samples.get(i)),
        );
        match (ga, gb) {
            (Some(u), Some(v))
                if u[0].to_bits() == v[0].to_bits() && u[1].to_bits() == v[1].to_bits() => {}
            (None, None) => {}
            _ => return Err(IndexError::NoCommonDomain),
        }
    }
    Ok(pa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::Builtin;

    fn surf(b: Builtin) -> OrbitSurface {
        OrbitSurface::builtin(&b).unwrap()
    }

    #[test]
    fn graphs_of_builtins() {
        let g = build_graph(&surf(Builtin::Chekanov { r: 1.0 })).unwrap();
        assert_eq!((g.n_vertices(), g.edges.len()), (2, 2));
        assert_eq!(g.epsilon(0, 1), -1);
        assert_eq!(g.epsilon(1, 1), 1);
        let g = build_graph(&surf(Builtin::Clifford { r: 1.0 })).unwrap();
        assert_eq!((g.n_vertices(), g.edges.len()), (1, 0));
        let g = build_graph(&surf(Builtin::Whitney)).unwrap();
        assert_eq!((g.n_vertices(), g.edges.len()), (1, 0));
    }

    #[test]
    fn odd_cycle_is_rejected() {
        let r = CrossingGraph::from_edges(vec![0, 0, 0], vec![(0, 1), (1, 2), (2, 0)]);
        assert_eq!(r, Err(IndexError::OddCycle));
    }

    #[test]
    fn index_examples() {
        let c = surf(Builtin::Chekanov { r: 1.0 });
        let rep = y_index(&c, LoopPoint { arc: 0, s: 0.5 }).unwrap();
        assert_eq!((rep.mu2, rep.y), (0, 4));
        let rep = y_index(&c, LoopPoint { arc: 1, s: 0.5 }).unwrap();
        assert_eq!(rep.y, -4);
        let w = surf(Builtin::Whitney);
        let rep = y_index(&w, LoopPoint { arc: 0, s: 0.3 }).unwrap();
        assert_eq!((rep.mu2, rep.y), (2, 2));
        let cl = surf(Builtin::Clifford { r: 1.0 });
        let rep = y_index(&cl, LoopPoint { arc: 0, s: 0.5 }).unwrap();
        assert_eq!((rep.mu2, rep.y), (0, 0));
    }

    #[test]
    fn irregular_reference_is_rejected() {
        let c = surf(Builtin::Chekanov { r: 1.0 });
        assert!(matches!(
            y_index(&c, LoopPoint { arc: 0, s: 0.0 }),
            Err(IndexError::IrregularReferencePoint(_))
        ));
    }

    #[test]
    fn relative_y_with_itself_is_zero() {
        let c = surf(Builtin::Chekanov { r: 1.0 });
        let q = c.profile.arcs[0].position(0.5);
        assert_eq!(relative_y(&c, &c, q).unwrap(), 0);
        let w = surf(Builtin::Whitney);
        assert_eq!(relative_y(&w, &c, q), Err(IndexError::PointNotOnLoop));
    }
}
