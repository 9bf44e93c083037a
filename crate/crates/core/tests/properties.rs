use lagindex::cli::scene::{emit_scene, parse_scene, Scene, SurfaceSpec};
use lagindex::fibers::{fiber_residuals, orbit_liouville, FiberSpec};
use lagindex::framing::{det_d_prime, det_d_prime_oracle, g_t};
use lagindex::index::{locate, regular_point, y_index};
use lagindex::profile::{seeded_loop, Builtin, TangencyKind};
use lagindex::splin::{
    apply_group, classify_kt, k_t, omega, GroupElement, Mat4, OrientedPlane, Vec4,
};
use lagindex::surface::OrbitSurface;
use lagindex::surgery::SurgeryLedger;
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};

/// The Lagrangian plane `U (R^2 x 0)` for `U = e^{i a} [[e^{i b} cos c, -e^{-i d} sin c], [e^{i d} sin c, e^{-i b} cos c]]`.
fn unitary_plane(a: f64, b: f64, c: f64, d: f64) -> OrientedPlane {
    use num_complex::Complex64 as C;
    let e = |x: f64| C::from_polar(1.0, x);
    let u = [
        [e(a + b) * c.cos(), -e(a - d) * c.sin()],
        [e(a + d) * c.sin(), e(a - b) * c.cos()],
    ];
    let col = |k: usize| Vec4::new(u[0][k].re, u[1][k].re, u[0][k].im, u[1][k].im);
    OrientedPlane {
        v1: col(0),
        v2: col(1),
    }
}

fn angle_mod(x: f64, period: f64) -> f64 {
    let r = x.rem_euclid(period);
    r.min(period - r)
}

fn vec4() -> impl Strategy<Value = Vec4> {
    prop::array::uniform4(-10.0..10.0f64).prop_map(Vec4::from)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn kt_classification_and_c_equivariance(
        a in 0.0..2.0 * PI, b in 0.0..2.0 * PI, c in 0.05..1.5f64, d in 0.0..2.0 * PI, tau in 0.0..PI,
    ) {
        let p = unitary_plane(a, b, c, d);
        prop_assert!(p.omega_value().abs() < 1e-12);
        if let Ok(t) = classify_kt(&p) {
            prop_assert!((k_t(t) * p.v1 - p.v2).norm() < 1e-9);
            let t2 = classify_kt(&p.transform(GroupElement::C(tau))).unwrap();
            prop_assert!(angle_mod(t2 - t - 2.0 * tau, 2.0 * PI) < 1e-8);
        }
    }

    #[test]
    fn m_is_an_anti_symplectic_involution(u in vec4(), v in vec4()) {
        let (mu, mv) = (apply_group(GroupElement::M, &u), apply_group(GroupElement::M, &v));
        // Exact on basis pairs; here only up to the rounding of the sum.
        prop_assert!((omega(&mu, &mv) + omega(&u, &v)).abs() <= 1e-13 * u.norm() * v.norm());
        prop_assert_eq!(apply_group(GroupElement::M, &mu), u);
    }

    #[test]
    fn frame_inverse_identities(th in -PI..PI, t in 0.0..FRAC_PI_2) {
        let g = g_t(th, t);
        let a = g_t(th, t + FRAC_PI_2);
        let b = g_t(-th, t);
        let inv = g.try_inverse().unwrap();
        prop_assert!((a - b).amax() < 1e-12);
        prop_assert!((b - inv).amax() < 1e-12);
        prop_assert!((g.transpose() * g - Mat4::identity()).amax() < 1e-12);
    }

    #[test]
    fn d_prime_closed_form(th in 0.0..PI, t in 0.0..FRAC_PI_2, s in 0.0..PI) {
        prop_assert!((det_d_prime(th, t, s) - det_d_prime_oracle(th, t, s)).abs() < 1e-9);
    }

    #[test]
    fn twists_cancel_and_add(n in -20i64..20, m in -20i64..20) {
        let base = SurgeryLedger::base("T*S2");
        let l = base.twists(n).unwrap();
        prop_assert_eq!(l.y() - base.y(), -4 * n);
        prop_assert_eq!(l.mu2(), base.mu2());
        let back = l.twist(1).unwrap().twist(-1).unwrap();
        prop_assert_eq!(back.y(), l.y());
        prop_assert_eq!(l.twists(m).unwrap().y() - base.y(), -4 * (n + m));
    }

    #[test]
    fn ledger_flip_is_an_involution(i in 0usize..2) {
        let l = SurgeryLedger::chekanov();
        let f = l.flip(i).flip(i);
        prop_assert_eq!(f.y(), l.y());
        prop_assert_eq!(f.mu2(), l.mu2());
    }

    #[test]
    fn builtin_scenes_round_trip(r in 0.05..5.0f64, b in -0.24..2.0f64, seed in 0u64..1000, which in 0usize..4) {
        let spec = match which {
            0 => SurfaceSpec::Builtin(Builtin::Chekanov { r }),
            1 => SurfaceSpec::Builtin(Builtin::Clifford { r }),
            2 => SurfaceSpec::Builtin(Builtin::LevelCurve { b }),
            _ => SurfaceSpec::Seeded(seed),
        };
        let mut s = Scene::new(spec);
        s.seed = seed;
        let text = emit_scene(&s);
        prop_assert_eq!(parse_scene(&text).unwrap(), s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fiber_points_and_liouville(a in -0.35..0.35f64, b in 0.3..1.5f64, al in 0.1..6.2f64) {
        let f = FiberSpec::new(a, b);
        let r = fiber_residuals(&f, 16).unwrap();
        prop_assert!(r.g_max < 1e-9 && r.h_max < 1e-9);
        let l = orbit_liouville(&f, al, 2048).unwrap();
        prop_assert!((l + 2.0 * PI * a).abs() < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn seeded_loop_invariants(seed in 0u64..10_000) {
        let l = seeded_loop(seed);
        let t = l.tangencies().unwrap();
        let crossings = t.iter().filter(|x| x.kind == TangencyKind::Crossing).count();
        prop_assert_eq!(crossings % 2, 0);
        prop_assert!(t.iter().all(|x| x.concavity_agrees));

        let reflected = l.arcs.iter().map(|a| a.reflect_m().reflect_m()).collect::<Vec<_>>();
        prop_assert_eq!(&reflected, &l.arcs);

        let s = OrbitSurface::new(&l).unwrap();
        let q = regular_point(&s);
        // y_index fails with PhaseMismatch when the degree sum and phase disagree.
        let rep = y_index(&s, q).unwrap();
        prop_assert_eq!(rep.mu2, s.mu2_formula().unwrap());
        prop_assert_eq!(rep.y.abs(), rep.y_abs);

        let rs = s.reversed().unwrap();
        let rq = locate(&rs, s.profile.arcs[q.arc].position(q.s), 1e-9).unwrap();
        let rrep = y_index(&rs, rq).unwrap();
        prop_assert_eq!((rrep.mu2, rrep.y), (rep.mu2, rep.y));
    }
}

/// `u_(tau + pi) = -u_tau`: the sign choice in `u_theta` must not be visible.
#[test]
fn u_theta_sign_flip_is_invisible() {
    use lagindex::splin::intersection_data;
    for b in [
        Builtin::Chekanov { r: 1.0 },
        Builtin::Clifford { r: 1.0 },
        Builtin::Whitney,
    ] {
        let s = OrbitSurface::builtin(&b).unwrap();
        let r = s.domain_of_arc(regular_point(&s).arc);
        for tau in [0.3, 0.7] {
            let a = s.relative_phase_robust(tau, r).unwrap().1;
            let c = s.relative_phase_robust(tau + PI, r).unwrap().1;
            assert!((a - c).abs() < 1e-9, "{b:?} tau = {tau}: {a} vs {c}");
        }
    }
    for k in 0..200 {
        let x = k as f64;
        let p = unitary_plane(0.37 * x, 1.1 * x, 0.05 + (0.13 * x) % 1.4, 0.71 * x);
        let tau = (0.29 * x) % PI;
        let (a, c) = (intersection_data(&p, tau), intersection_data(&p, tau + PI));
        assert_eq!(a.dimension, c.dimension);
        if let (Some(a), Some(c)) = (a.angle, c.angle) {
            assert!(angle_mod(a - c, PI) < 1e-9, "{a} vs {c}");
        }
    }
}
