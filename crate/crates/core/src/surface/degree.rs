//! Mapping degree of maps from a parameter rectangle to the unit sphere.
//!
//! Two independent estimates are provided: the signed preimage count of
//! regular values over a triangulated grid, and the integral of the
//! pulled-back area form divided by `4 pi`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

pub type S3 = [f64; 3];

/// A sphere-valued map on `[u0, u1] x [v0, v1]`. Work that depends only on
/// `u` is hoisted into [`SphereMap::row`].
pub trait SphereMap: Sync {
    type Row: Send + Sync;
    fn row(&self, u: f64) -> Self::Row;
    fn eval(&self, row: &Self::Row, v: f64) -> S3;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub u0: f64,
    pub u1: f64,
    pub v0: f64,
    pub v1: f64,
    pub nu: usize,
    pub nv: usize,
}

impl Grid {
    fn u(&self, i: f64) -> f64 {
        self.u0 + (self.u1 - self.u0) * i / self.nu as f64
    }

    fn v(&self, j: f64) -> f64 {
        self.v0 + (self.v1 - self.v0) * j / self.nv as f64
    }
}

fn cross(a: &S3, b: &S3) -> S3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: &S3, b: &S3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn triple(a: &S3, b: &S3, c: &S3) -> f64 {
    dot(a, &cross(b, c))
}

/// Pairwise summation, independent of thread scheduling.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// `n` points on a golden spiral with `|z| <= 0.9`, azimuth offset drawn
/// from `seed`.
pub fn regular_values(seed: u64, n: usize) -> Vec<S3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let offset: f64 = rng.gen_range(0.0..2.0 * PI);
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let z = -0.9 + 1.8 * (k as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let a = offset + golden * k as f64;
            [r * a.cos(), r * a.sin(), z]
        })
        .collect()
}

/// Grid of images, `nu + 1` rows of `nv + 1` vertices.
pub fn vertex_grid<M: SphereMap>(map: &M, g: &Grid) -> Vec<Vec<S3>> {
    (0..=g.nu)
        .into_par_iter()
        .map(|i| {
            let row = map.row(g.u(i as f64));
            (0..=g.nv).map(|j| map.eval(&row, g.v(j as f64))).collect()
        })
        .collect()
}

fn triangle_hit(a: &S3, b: &S3, c: &S3, p: &S3) -> i64 {
    let orient = triple(a, b, c);
    if orient == 0.0 {
        return 0;
    }
    let d1 = triple(a, b, p);
    let d2 = triple(b, c, p);
    let d3 = triple(c, a, p);
    let inside = (d1 > 0.0 && d2 > 0.0 && d3 > 0.0) || (d1 < 0.0 && d2 < 0.0 && d3 < 0.0);
    let s = [a[0] + b[0] + c[0], a[1] + b[1] + c[1], a[2] + b[2] + c[2]];
    if inside && dot(p, &s) > 0.0 {
        if orient > 0.0 {
            1
        } else {
            -1
        }
    } else {
        0
    }
}

/// Signed number of preimages of each value over the triangulated grid.
pub fn preimage_counts(verts: &[Vec<S3>], values: &[S3]) -> Vec<i64> {
    let rows: Vec<Vec<i64>> = (0..verts.len().saturating_sub(1))
        .into_par_iter()
        .map(|i| {
            let mut c = vec![0i64; values.len()];
            let (lo, hi) = (&verts[i], &verts[i + 1]);
            for j in 0..lo.len() - 1 {
                let (a, b, cc, d) = (&lo[j], &hi[j], &hi[j + 1], &lo[j + 1]);
                for (k, p) in values.iter().enumerate() {
                    c[k] += triangle_hit(a, b, cc, p) + triangle_hit(a, cc, d, p);
                }
            }
            c
        })
        .collect();
    let mut out = vec![0i64; values.len()];
    for r in rows {
        for (o, x) in out.iter_mut().zip(r) {
            *o += x;
        }
    }
    out
}

/// Most frequent entry, ties resolved toward the smaller value.
pub fn majority(xs: &[i64]) -> i64 {
    let mut sorted = xs.to_vec();
    sorted.sort_unstable();
    let mut best = (0usize, 0i64);
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        if j - i > best.0 {
            best = (j - i, sorted[i]);
        }
        i = j;
    }
    best.1
}

/// `(1 / 4 pi) int F . (F_u x F_v)` by the midpoint rule; derivatives are
/// centred differences over half a cell.
pub fn jacobian_degree<M: SphereMap>(map: &M, g: &Grid) -> f64 {
    let du = (g.u1 - g.u0) / g.nu as f64;
    let dv = (g.v1 - g.v0) / g.nv as f64;
    let rows: Vec<f64> = (0..g.nu)
        .into_par_iter()
        .map(|i| {
            let um = g.u(i as f64 + 0.5);
            let r0 = map.row(um);
            let rm = map.row(um - 0.25 * du);
            let rp = map.row(um + 0.25 * du);
            let mut acc = Vec::with_capacity(g.nv);
            for j in 0..g.nv {
                let vm = g.v(j as f64 + 0.5);
                let f = map.eval(&r0, vm);
                let fu0 = map.eval(&rm, vm);
                let fu1 = map.eval(&rp, vm);
                let fv0 = map.eval(&r0, vm - 0.25 * dv);
                let fv1 = map.eval(&r0, vm + 0.25 * dv);
                let fu = [fu1[0] - fu0[0], fu1[1] - fu0[1], fu1[2] - fu0[2]];
                let fv = [fv1[0] - fv0[0], fv1[1] - fv0[1], fv1[2] - fv0[2]];
                // Each difference spans half a cell, so the product is a
                // quarter of the cell area element.
                acc.push(4.0 * triple(&f, &fu, &fv));
            }
            pairwise_sum(&acc)
        })
        .collect();
    pairwise_sum(&rows) / (4.0 * PI)
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct DegreeOracles {
    pub preimage_counts: Vec<i64>,
    pub preimage_majority: i64,
    pub jacobian: f64,
}

pub fn degree_oracles<M: SphereMap>(map: &M, g: &Grid, values: &[S3]) -> DegreeOracles {
    let verts = vertex_grid(map, g);
    let counts = preimage_counts(&verts, values);
    DegreeOracles {
        preimage_majority: majority(&counts),
        preimage_counts: counts,
        jacobian: jacobian_degree(map, g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `(u, v) -> (sin u cos kv, sin u sin kv, cos u)` on `[0, pi] x [0, 2 pi]`.
    struct Wrap(f64);

    impl SphereMap for Wrap {
        type Row = (f64, f64);
        fn row(&self, u: f64) -> (f64, f64) {
            u.sin_cos()
        }
        fn eval(&self, r: &(f64, f64), v: f64) -> S3 {
            [r.0 * (self.0 * v).cos(), r.0 * (self.0 * v).sin(), r.1]
        }
    }

    fn grid() -> Grid {
        Grid {
            u0: 0.0,
            u1: PI,
            v0: 0.0,
            v1: 2.0 * PI,
            nu: 128,
            nv: 128,
        }
    }

    #[test]
    fn wrapping_maps_have_their_degree() {
        let vals = regular_values(7, 12);
        for k in [1.0, 2.0, -1.0, -3.0] {
            let o = degree_oracles(&Wrap(k), &grid(), &vals);
            assert!(
                o.preimage_counts.iter().all(|&c| c == k as i64),
                "{k}: {o:?}"
            );
            assert!((o.jacobian - k).abs() < 0.01, "{k}: {}", o.jacobian);
        }
    }

    #[test]
    fn constant_map_has_degree_zero() {
        struct C;
        impl SphereMap for C {
            type Row = ();
            fn row(&self, _: f64) {}
            fn eval(&self, _: &(), _: f64) -> S3 {
                [0.0, 0.0, 1.0]
            }
        }
        let o = degree_oracles(&C, &grid(), &regular_values(1, 12));
        assert_eq!(o.preimage_majority, 0);
        assert_eq!(o.jacobian, 0.0);
    }

    #[test]
    fn regular_values_are_unit_and_off_the_poles() {
        for p in regular_values(3, 12) {
            assert!((dot(&p, &p) - 1.0).abs() < 1e-12);
            assert!(p[2].abs() <= 0.9);
        }
        assert_eq!(regular_values(3, 12), regular_values(3, 12));
    }

    #[test]
    fn majority_prefers_most_common() {
        assert_eq!(majority(&[2, 2, 1, 2, 0]), 2);
        assert_eq!(majority(&[]), 0);
    }
}
