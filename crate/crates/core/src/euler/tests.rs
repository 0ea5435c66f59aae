use std::f64::consts::{FRAC_PI_2, PI, TAU};

use super::*;
use crate::group::verify_approximate_subgroup;

/// Closed-form oracle for the lift: `s(θ) = s(0) + ((α(θ) − α(0)) mod 2π)
/// + 2π·⌊θ/2π⌋`, valid because the circle map has degree one.
fn lift_oracle(g: &RealMat2, theta: f64) -> f64 {
    let a0 = circle_action(g, 0.0).unwrap();
    let turns = (theta / TAU).floor();
    let rest = theta - turns * TAU;
    let at = circle_action(g, rest).unwrap();
    a0 + (at - a0).rem_euclid(TAU) + TAU * turns
}

fn beta_oracle(g: &RealMat2, h: &RealMat2) -> i64 {
    let lhs = lift_oracle(g, lift_oracle(h, 0.0));
    let rhs = lift_oracle(&g.mul(h), 0.0);
    ((lhs - rhs) / TAU).round() as i64
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-9
}

#[test]
fn circle_action_examples() {
    let id = RealMat2::identity();
    assert!(close(circle_action(&id, 1.0).unwrap(), 1.0));
    assert!(close(circle_action(&RealMat2::rotation(FRAC_PI_2), 0.0).unwrap(), FRAC_PI_2));
    let diag = RealMat2::new([[2.0, 0.0], [0.0, 0.5]]).unwrap();
    assert_eq!(circle_action(&diag, 0.0).unwrap(), 0.0);
}

#[test]
fn non_unimodular_is_rejected() {
    assert!(RealMat2::new([[2.0, 0.0], [0.0, 1.0]]).is_err());
}

#[test]
fn lift_examples() {
    let id = RealMat2::identity();
    for t in [0.0, 0.5, 3.0, 7.0, 12.0] {
        assert!(close(lift_eval(&id, t).unwrap(), t));
    }
    assert!(close(lift_eval(&rotation_pi(), 0.0).unwrap(), PI));
    let g = RealMat2::new([[1.5, -0.7], [0.4, 0.48]]).unwrap();
    assert!(close(lift_eval(&g, TAU).unwrap(), lift_eval(&g, 0.0).unwrap() + TAU));
}

#[test]
fn lift_matches_closed_form_and_is_monotone() {
    for g in random_matrices(200, 3) {
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=40 {
            let t = 4.0 * PI * i as f64 / 40.0;
            let v = lift_eval(&g, t).unwrap();
            assert!((v - lift_oracle(&g, t)).abs() < 1e-9, "{g:?} at {t}");
            assert!(v > prev);
            prev = v;
        }
    }
}

#[test]
fn cocycle_examples() {
    let id = RealMat2::identity();
    assert_eq!(euler_cocycle(&id, &id).unwrap(), 0);
    assert_eq!(euler_cocycle(&rotation_pi(), &rotation_pi()).unwrap(), 1);
    let quarter = RealMat2::rotation(FRAC_PI_2);
    assert_eq!(euler_cocycle(&quarter, &quarter).unwrap(), 0);
}

#[test]
fn cocycle_matches_oracle_and_is_normalized() {
    let mats = random_matrices(400, 11);
    let id = RealMat2::identity();
    for pair in mats.chunks_exact(2) {
        let (g, h) = (&pair[0], &pair[1]);
        let b = euler_cocycle(g, h).unwrap();
        assert_eq!(b, beta_oracle(g, h));
        assert!(b == 0 || b == 1);
        assert_eq!(euler_cocycle(g, &id).unwrap(), 0);
        assert_eq!(euler_cocycle(&id, g).unwrap(), 0);
    }
}

#[test]
fn cocycle_identity_on_rotations_and_samples() {
    let r = |t: f64| RealMat2::rotation(t);
    assert!(cocycle_identity_check(&r(1.0), &r(2.5), &r(4.0)).unwrap());
    let id = RealMat2::identity();
    assert!(cocycle_identity_check(&id, &id, &id).unwrap());
    let s = cocycle_sample(500, 42).unwrap();
    assert_eq!(s.failures(), 0);
    assert!(s.max_residual() < ROUNDING_TOL);
    assert!(s.beta_values().iter().all(|b| *b == 0 || *b == 1));
    assert_eq!(s, cocycle_sample(500, 42).unwrap());
}

#[test]
fn beta_is_stable_under_tiny_perturbation() {
    for g in random_matrices(200, 5).chunks_exact(2) {
        let b = euler_cocycle(&g[0], &g[1]).unwrap();
        let [[a, bb], [c, _]] = g[0].entries();
        let (a, bb, c) = (a + 1e-10, bb - 1e-10, c + 1e-10);
        let moved = RealMat2::new([[a, bb], [c, (1.0 + bb * c) / a]]).unwrap();
        assert_eq!(euler_cocycle(&moved, &g[1]).unwrap(), b);
    }
}

fn ext() -> TwistedExtension {
    TwistedExtension::new(2).unwrap()
}

#[test]
fn twisted_product_examples() {
    let e = ext();
    let id = e.identity();
    assert_eq!(twisted_product(&id, &id).unwrap(), id);
    let gens = e.default_generators().unwrap();
    let lambda = twisted_product(&gens[0], &gens[4]).unwrap();
    let u = ExtElem::new(lambda.lambda().clone(), PScaled::new(crate::arith::rat(3, 2), 2).unwrap()).unwrap();
    let v = ExtElem::new(u.lambda().inv().unwrap(), -u.a()).unwrap();
    let w = twisted_product(&u, &v).unwrap();
    let beta = beta_exact(u.lambda(), v.lambda()).unwrap();
    assert_eq!(w, e.central(beta));

    let shifted =
        twisted_product(&e.central(1), &ExtElem::new(u.lambda().clone(), PScaled::from_int(0, 2).unwrap()).unwrap())
            .unwrap();
    assert_eq!(shifted.a(), &PScaled::from_int(1, 2).unwrap());
    assert_eq!(delta_qm(&u), PScaled::new(crate::arith::rat(-3, 2), 2).unwrap());
}

#[test]
fn inverse_is_two_sided() {
    let e = ext();
    let ball = e.ball(&e.default_generators().unwrap(), 2).unwrap();
    for u in ball.iter() {
        let inv = twisted_inverse(u).unwrap();
        assert_eq!(twisted_product(u, &inv).unwrap(), e.identity());
        assert_eq!(twisted_product(&inv, u).unwrap(), e.identity());
    }
    assert!(ball.symmetry_witness(&e).unwrap().is_none());
}

#[test]
fn elements_round_trip_through_text() {
    let e = ext();
    let ball = e.ball(&e.default_generators().unwrap(), 2).unwrap();
    let back = PointSet::parse_text(&e, &ball.to_text()).unwrap();
    assert_eq!(back, ball);
}

#[test]
fn defect_bounded_on_small_ball() {
    let e = ext();
    let ball = e.ball(&e.default_generators().unwrap(), 3).unwrap();
    let scan = defect_scan(&ball).unwrap();
    assert!(scan.violation.is_none());
    assert!(scan.max_abs <= Rational::from_integer(1.into()));
    assert_eq!(scan.pairs, ball.len() * ball.len());
    // Cross-check a slice of pairs against the product itself.
    for u in ball.iter().take(15) {
        for v in ball.iter().take(15) {
            let d = delta_qm(&twisted_product(u, v).unwrap()) - delta_qm(u) - delta_qm(v);
            assert!(d == PScaled::from_int(0, 2).unwrap() || d == PScaled::from_int(-1, 2).unwrap());
        }
    }
    let assoc = associativity_sample(&ball, 200, 1).unwrap();
    assert!(assoc.failure.is_none());
}

#[test]
fn delta_kernel_membership() {
    let e = ext();
    let ball = e.ball(&e.default_generators().unwrap(), 2).unwrap();
    let k = kernel_delta(&ball);
    assert!(k.contains(&e.identity()));
    assert!(!k.contains(&e.central(2)) && ball.contains(&e.central(2)));
    assert!(!k.contains(&e.central(-2)));
    assert!(k.contains(&e.central(1)));
}

#[test]
fn delta_kernel_core_is_approximate_subgroup() {
    let e = ext();
    let ball = e.ball(&e.default_generators().unwrap(), 2).unwrap();
    let core = symmetric_core(&kernel_delta(&ball)).unwrap();
    let interior = core.region().clone();
    let cert = verify_approximate_subgroup(&e, &core, &interior).unwrap();
    assert!(cert.validated);
}
