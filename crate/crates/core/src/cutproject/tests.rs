use super::*;
use crate::arith::{Mat2, PScaled};
use crate::group::{delone_check, Sl2Group};

fn ps(v: Rational, p: u64) -> PScaled {
    PScaled::new(v, p).unwrap()
}

fn phi_pow(k: u32) -> QuadScalar {
    let phi = QuadScalar::golden_ratio();
    (0..k).fold(QuadScalar::one(5).unwrap(), |acc, _| &acc * &phi)
}

#[test]
fn zp_unit_ball_gives_integers() {
    let s = generate_model_set(&PAdicWindowScheme::new(2, 0).unwrap(), &rat(5, 1)).unwrap();
    let expected: Vec<PScaled> = (-5..=5).map(|n| PScaled::from_int(n, 2).unwrap()).collect();
    assert_eq!(s.len(), 11);
    assert!(expected.iter().all(|x| s.contains(x)));
}

#[test]
fn zp_radius_two_gives_half_integers() {
    let s = generate_model_set(&PAdicWindowScheme::new(2, 1).unwrap(), &rat(3, 1)).unwrap();
    assert_eq!(s.len(), 13);
    for a in -6..=6 {
        assert!(s.contains(&ps(rat(a, 2), 2)));
    }
}

#[test]
fn fibonacci_spot_checks() {
    let s = fibonacci_model_set(&rat(1, 1), &rat(10, 1)).unwrap();
    let q = |a: i64, b: i64| QuadScalar::new(rat(a, 1), rat(b, 1), 5).unwrap();
    assert!(s.contains(&q(0, 0)));
    assert!(s.contains(&q(1, 0)));
    assert!(s.contains(&phi_pow(1)));
    assert!(s.contains(&phi_pow(2)));
    assert!(!s.contains(&q(2, 0)));
    assert!(s.window_violation().is_none());
}

/// Oracle: enumerate `a + bφ` over a generous box in f64-free integer
/// coordinates and filter with the exact conjugate test.
fn fibonacci_oracle(range: i64) -> Vec<QuadScalar> {
    let phi = QuadScalar::golden_ratio();
    let mut out = Vec::new();
    for a in -3 * range..=3 * range {
        for b in -3 * range..=3 * range {
            let x = &QuadScalar::from_rational(rat(a, 1), 5).unwrap()
                + &(&phi * &QuadScalar::from_rational(rat(b, 1), 5).unwrap());
            if x.abs_le(&rat(range, 1)) && x.conj().abs_le(&rat(1, 1)) {
                out.push(x);
            }
        }
    }
    out
}

#[test]
fn fibonacci_matches_oracle_and_min_gap() {
    let s = fibonacci_model_set(&rat(1, 1), &rat(12, 1)).unwrap();
    let oracle = fibonacci_oracle(12);
    assert_eq!(s.len(), oracle.len());
    assert!(oracle.iter().all(|x| s.contains(x)));

    let g = s.scheme().ambient();
    let report = delone_check(&g, s.points(), &rat(6, 1)).unwrap();
    let mut best: Option<QuadScalar> = None;
    for x in &oracle {
        for y in &oracle {
            if x != y {
                let d = (x - y).abs();
                if best.as_ref().is_none_or(|b| d.cmp_real(b) == std::cmp::Ordering::Less) {
                    best = Some(d);
                }
            }
        }
    }
    assert_eq!(report.min_gap_element, best.unwrap());
    assert!(report.gap_alphabet.len() <= 3);
}

#[test]
fn regeneration_is_identical() {
    let s = fibonacci_model_set(&rat(1, 1), &rat(20, 1)).unwrap();
    let t = s.regenerate().unwrap();
    assert_eq!(s.points(), t.points());
    assert_eq!(s.rows(), t.rows());
}

#[test]
fn monotone_in_window() {
    let small = fibonacci_model_set(&rat(1, 2), &rat(15, 1)).unwrap();
    let big = fibonacci_model_set(&rat(1, 1), &rat(15, 1)).unwrap();
    assert!(small.points().iter().all(|x| big.contains(x)));
    assert!(small.len() < big.len());
}

#[test]
fn subgroup_window_gives_closed_set() {
    let s = generate_model_set(&PAdicWindowScheme::new(3, 1).unwrap(), &rat(4, 1)).unwrap();
    let bound = rat(4, 1);
    for x in s.points().iter() {
        for y in s.points().iter() {
            let z = x + y;
            if z.abs() <= bound {
                assert!(s.contains(&z), "{x} + {y}");
            }
        }
    }
}

#[test]
fn nonpositive_range_is_rejected() {
    assert!(fibonacci_model_set(&rat(1, 1), &rat(0, 1)).is_err());
}

#[test]
fn approximate_ring_examples() {
    let s = approximate_ring_zp(2, 0, &rat(100, 1)).unwrap();
    let mut got: Vec<Rational> = s.points().iter().map(|x| x.value().clone()).collect();
    got.sort();
    assert_eq!(got, [rat(-1, 1), rat(0, 1), rat(1, 1)]);

    // Oracle: {a/2^k : k ≤ n, |a| ≤ 2^k}, deduplicated.
    for (p, n) in [(2u64, 1i64), (3, 1), (2, 3)] {
        let mut oracle = std::collections::HashSet::new();
        for k in 0..=n as u32 {
            let pk = (p as i64).pow(k);
            for a in -pk..=pk {
                oracle.insert(rat(a, pk));
            }
        }
        let s = approximate_ring_zp(p, n, &rat(1000, 1)).unwrap();
        let got: std::collections::HashSet<Rational> = s.points().iter().map(|x| x.value().clone()).collect();
        assert_eq!(got, oracle, "p={p} n={n}");
    }
}

#[test]
fn approximate_ring_range_caps_gauge() {
    let s = approximate_ring_zp(2, 3, &rat(2, 1)).unwrap();
    assert!(s.points().iter().all(|x| x.padic_norm() <= rat(2, 1)));
    assert!(s.contains(&ps(rat(1, 2), 2)));
    assert!(!s.contains(&ps(rat(1, 4), 2)));
}

#[test]
fn pisot_set_small_instance() {
    let s = pisot_matrix_set(5, &rat(1, 5), 4).unwrap();
    let g = s.scheme().ambient();
    assert!(s.contains(&g.identity()));
    assert!(s.points().symmetry_witness(&g).unwrap().is_none());
    let one = QuadScalar::one(5).unwrap();
    for m in s.points().iter() {
        assert_eq!(m.det(), one);
        assert!(s.scheme().window().contains_matrix(&m.map(QuadScalar::conj)));
    }
    assert!(pisot_entry_violations(&s).is_empty());
}

#[test]
fn unipotent_membership_follows_conjugate() {
    let s = pisot_matrix_set(5, &rat(1, 5), 7).unwrap();
    let one = QuadScalar::one(5).unwrap();
    let zero = QuadScalar::zero(5).unwrap();
    let up = |x: QuadScalar| Mat2::new(one.clone(), x, zero.clone(), one.clone());
    // √5 has conjugate −√5.
    assert!(!s.contains(&up(QuadScalar::sqrt_d(5).unwrap())));
    // φ³ = 2 + √5 has conjugate 2 − √5 ≈ −0.236.
    assert!(!s.contains(&up(phi_pow(3))));
    // φ⁴ has conjugate ≈ 0.146.
    assert!(s.contains(&up(phi_pow(4))));
}

#[test]
fn pisot_products_respect_submultiplicative_bound() {
    let s = pisot_matrix_set(5, &rat(1, 5), 4).unwrap();
    let g: Sl2Group<QuadScalar> = s.scheme().ambient();
    let bound = Window::MatrixBall { radius: rat(1, 5) }.difference();
    let pts: Vec<_> = s.points().iter().take(20).cloned().collect();
    for a in &pts {
        for b in &pts {
            let c = g.compose(a, b).unwrap();
            assert!(bound.contains_matrix(&c.map(QuadScalar::conj)));
        }
    }
}

#[test]
fn meyer_trivial_and_sparse_subsets() {
    let s = fibonacci_model_set(&rat(1, 1), &rat(30, 1)).unwrap();
    let r = meyer_check(s.points(), &s, &rat(15, 1)).unwrap();
    assert!(r.is_meyer);

    let g = s.scheme().ambient();
    let mut sorted = s.points().elements().to_vec();
    sorted.sort_by(|a, b| g.cmp_position(a, b));
    let thinned: Vec<QuadScalar> =
        sorted.iter().enumerate().filter(|(i, _)| i % 3 != 2).map(|(_, x)| x.clone()).collect();
    let m = PointSet::new(&g, thinned, s.points().region().clone());
    let r = meyer_check(&m, &s, &rat(15, 1)).unwrap();
    assert!(r.is_meyer, "{}", r.to_json());
}

#[test]
fn meyer_one_sided_fails() {
    let s = fibonacci_model_set(&rat(1, 1), &rat(30, 1)).unwrap();
    let zero = Rational::from_integer(0.into());
    let half = s.points().filter(|x| x.cmp_rational(&zero) != std::cmp::Ordering::Less);
    let r = meyer_check(&half, &s, &rat(15, 1)).unwrap();
    assert!(!r.is_meyer);
    assert!(r.widest_anchor.is_some());
}

#[test]
fn meyer_non_subset_reports_witness() {
    let s = fibonacci_model_set(&rat(1, 1), &rat(10, 1)).unwrap();
    let g = s.scheme().ambient();
    let two = QuadScalar::from_rational(rat(2, 1), 5).unwrap();
    let m = PointSet::new(&g, [two.clone()], rat(10, 1));
    let r = meyer_check(&m, &s, &rat(5, 1)).unwrap();
    assert_eq!(r.subset_witness, Some(two));
}

#[test]
fn pullback_containment_examples() {
    let r =
        pullback_containment_check(&QuadraticScheme::fibonacci(rat(1, 1)), &Window::interval(rat(1, 1)), &rat(15, 1))
            .unwrap();
    assert!(r.contained());
    assert!(r.certificate.validated && !r.certificate.is_empty());

    let zp = PAdicWindowScheme::new(2, 0).unwrap();
    for exp in [0, 1] {
        let w = Window::PadicBall { p: 2, exp };
        let r = pullback_containment_check(&zp, &w, &rat(8, 1)).unwrap();
        assert!(r.contained());
        assert_eq!(r.difference_window, w);
        assert!(r.certificate.validated);
    }
}
