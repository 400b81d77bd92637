use std::f64::consts::PI;

use proptest::prelude::*;

use super::*;
use crate::coefficients::{default_nodes, moments, Builtin, MeasureSpec};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn poly(v: &[(f64, f64)]) -> ComplexPoly {
    ComplexPoly::new(v.iter().map(|&(a, b)| c(a, b)).collect())
}

fn mu(count: usize) -> CoefficientSchedule {
    Builtin::GeronimusMu.schedule(count, c(1.0, 0.0)).unwrap()
}

fn mu_rotated(count: usize) -> CoefficientSchedule {
    Builtin::GeronimusMu.schedule(count, C64::from_polar(1.0, PI / 4.0)).unwrap()
}

/// `sqrt(2/((n+1)(n+2))) sum_{k<=n} (k+1) z^k`.
fn mu_closed_form(n: usize) -> ComplexPoly {
    let s = (2.0 / ((n + 1) * (n + 2)) as f64).sqrt();
    ComplexPoly::new((0..=n).map(|k| c(s * (k + 1) as f64, 0.0)).collect())
}

/// `(1 - n a/2)^{-1/2} (z^n - a (z^{n-1} + ... + 1))` with `a = 1/(n+1)`.
fn nu_closed_form(n: usize) -> ComplexPoly {
    if n == 0 {
        return ComplexPoly::one();
    }
    let a = 1.0 / (n as f64 + 1.0);
    let s = (1.0 - 0.5 * n as f64 * a).powf(-0.5);
    let mut v = vec![c(-a * s, 0.0); n + 1];
    v[n] = c(s, 0.0);
    ComplexPoly::new(v)
}

fn arb_schedule(len: usize) -> impl Strategy<Value = CoefficientSchedule> {
    prop::collection::vec((0.0f64..0.95, -PI..PI, -PI..PI), len).prop_map(|v| {
        let alpha = v.iter().map(|&(r, t, _)| C64::from_polar(r, t)).collect();
        let zeta = v.iter().map(|&(_, _, p)| C64::from_polar(1.0, p)).collect();
        CoefficientSchedule::half_lattice(alpha, zeta).unwrap()
    })
}

fn arb_disk(radius: f64) -> impl Strategy<Value = C64> {
    (0.0..radius, -PI..PI).prop_map(|(r, t)| C64::from_polar(r, t))
}

#[test]
fn reverse_examples() {
    let p = poly(&[(0.5, 0.0), (1.0, 0.0)]);
    assert_eq!(reverse(&p, 1).unwrap(), poly(&[(1.0, 0.0), (0.5, 0.0)]));
    assert_eq!(reverse(&ComplexPoly::one(), 0).unwrap(), ComplexPoly::one());
    assert_eq!(reverse(&ComplexPoly::monomial(5), 5).unwrap(), ComplexPoly::one());
    assert!(matches!(reverse(&ComplexPoly::monomial(3), 2), Err(Error::DegreeTooLarge { .. })));
}

#[test]
fn reverse_conjugates_coefficients() {
    let p = poly(&[(1.0, 2.0), (3.0, -1.0)]);
    assert_eq!(reverse(&p, 2).unwrap(), poly(&[(0.0, 0.0), (3.0, 1.0), (1.0, -2.0)]));
}

#[test]
fn rotated_reverse_matches_rotated_star() {
    let zeta = C64::from_polar(1.0, PI / 4.0);
    let s = mu_rotated(1);
    let pairs = opuc_sequence(&s, 1, Variant::Rotated).unwrap();
    let plain = opuc_sequence(&s, 1, Variant::Standard).unwrap();
    let rr = rotated_reverse(&pairs[1].p, 1, &[zeta]).unwrap();
    assert!(rr.max_abs_diff(&pairs[1].p_star) < 1e-15);
    assert!(rr.max_abs_diff(&plain[1].p_star.scale(zeta)) < 1e-15);
    assert!(rr.max_abs_diff(&reverse(&pairs[1].p, 1).unwrap().scale(c(0.0, 1.0))) < 1e-15);
}

#[test]
fn rotated_reverse_trivial_cases() {
    let p = poly(&[(0.3, 0.1), (0.0, 2.0), (1.0, 0.0)]);
    assert_eq!(rotated_reverse(&p, 2, &[c(1.0, 0.0); 2]).unwrap(), reverse(&p, 2).unwrap());
    assert_eq!(rotated_reverse(&ComplexPoly::one(), 0, &[]).unwrap(), ComplexPoly::one());
    assert!(matches!(rotated_reverse(&p, 2, &[c(1.0, 0.0)]), Err(Error::MissingPhases { .. })));
}

#[test]
fn first_step_geronimus() {
    let one = PolyPair::initial();
    let next = szego_forward(&one, c(-0.5, 0.0), c(1.0, 0.0), Variant::Standard).unwrap();
    let s3 = 3f64.sqrt();
    assert!(next.p.max_abs_diff(&poly(&[(1.0 / s3, 0.0), (2.0 / s3, 0.0)])) < 1e-15);
}

#[test]
fn free_step_shifts() {
    let pair = PolyPair { p: ComplexPoly::monomial(3), p_star: ComplexPoly::one(), n: 3 };
    let next = szego_forward(&pair, c(0.0, 0.0), c(1.0, 0.0), Variant::Standard).unwrap();
    assert_eq!(next.p, ComplexPoly::monomial(4));
    assert_eq!(next.p_star, ComplexPoly::one());
}

#[test]
fn rotated_first_step() {
    let zeta = C64::from_polar(1.0, PI / 4.0);
    let next = szego_forward(&PolyPair::initial(), c(-0.5, 0.0), zeta, Variant::Rotated).unwrap();
    let expected = mu_closed_form(1).scale(zeta);
    assert!(next.p.max_abs_diff(&expected) < 1e-15);
}

#[test]
fn forward_rejects_unimodular() {
    let err = szego_forward(&PolyPair::initial(), c(0.0, -1.0), c(1.0, 0.0), Variant::Standard).unwrap_err();
    assert!(matches!(err, Error::SingularCoefficient { index: 0 }));
}

#[test]
fn backward_geronimus_example() {
    let s3 = 3f64.sqrt();
    let q = ComplexPoly::new(vec![c(1.0 / s3, 0.0), c(2.0 / s3, 0.0)]);
    let pair = PolyPair { p_star: reverse(&q, 1).unwrap(), p: q, n: 1 };
    let back = szego_backward(&pair, c(-0.5, 0.0), c(1.0, 0.0), Variant::Standard).unwrap();
    assert!(back.p.max_abs_diff(&ComplexPoly::one()) < 1e-15);
    assert!(back.p_star.max_abs_diff(&ComplexPoly::one()) < 1e-15);
}

#[test]
fn backward_detects_inconsistent_pair() {
    let pair = PolyPair { p: ComplexPoly::one(), p_star: ComplexPoly::one(), n: 1 };
    let err = szego_backward(&pair, c(0.0, 0.0), c(1.0, 0.0), Variant::Standard).unwrap_err();
    assert!(matches!(err, Error::NonzeroConstantTerm { .. }));
}

#[test]
fn geronimus_closed_forms() {
    let pairs = opuc_sequence(&mu(20), 20, Variant::Standard).unwrap();
    for (n, pair) in pairs.iter().enumerate() {
        assert!(pair.p.max_abs_diff(&mu_closed_form(n)) < 1e-13, "n = {n}");
        assert_eq!(pair.p.degree(), n);
    }
    let s = (2.0f64 / 12.0).sqrt();
    assert!(pairs[2].p.max_abs_diff(&poly(&[(s, 0.0), (2.0 * s, 0.0), (3.0 * s, 0.0)])) < 1e-15);
}

#[test]
fn second_kind_closed_forms() {
    let pairs = second_kind_sequence(&mu(20), 20, false).unwrap();
    for (n, pair) in pairs.iter().enumerate() {
        assert!(pair.p.max_abs_diff(&nu_closed_form(n)) < 1e-13, "n = {n}");
    }
    let s3 = 3f64.sqrt();
    assert!(pairs[1].p.max_abs_diff(&poly(&[(-1.0 / s3, 0.0), (2.0 / s3, 0.0)])) < 1e-15);
    let nu_first = opuc_sequence(&Builtin::GeronimusNu.schedule(20, c(1.0, 0.0)).unwrap(), 20, Variant::Standard).unwrap();
    for (a, b) in pairs.iter().zip(&nu_first) {
        assert!(a.max_abs_diff(b) < 1e-15);
    }
}

#[test]
fn free_second_kind_equals_first_kind() {
    let s = Builtin::Lebesgue.schedule(6, c(1.0, 0.0)).unwrap();
    let psi = second_kind_sequence(&s, 6, false).unwrap();
    for (n, pair) in psi.iter().enumerate() {
        assert_eq!(pair.p, ComplexPoly::monomial(n));
    }
}

#[test]
fn rotated_example_phases() {
    let zeta = C64::from_polar(1.0, PI / 4.0);
    let rot = opuc_sequence(&mu_rotated(6), 6, Variant::Rotated).unwrap();
    let psi_rot = second_kind_sequence(&mu_rotated(6), 6, true).unwrap();
    let psi = second_kind_sequence(&mu(6), 6, false).unwrap();
    for n in 0..=6 {
        let phase = zeta.powi(n as i32);
        assert!(rot[n].p.max_abs_diff(&mu_closed_form(n).scale(phase)) < 1e-14);
        assert!(psi_rot[n].p.max_abs_diff(&psi[n].p.scale(phase)) < 1e-14);
    }
    assert!(rot[2].p.max_abs_diff(&mu_closed_form(2).scale(c(0.0, 1.0))) < 1e-15);
}

#[test]
fn monic_norm_values() {
    assert_eq!(monic_norm(&mu(4), 0).unwrap(), 1.0);
    assert!((monic_norm(&mu(4), 1).unwrap() - 3f64.sqrt() / 2.0).abs() < 1e-15);
    assert!((monic_norm(&mu(4), 2).unwrap() - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
}

#[test]
fn monic_norm_matches_quadrature() {
    for b in Builtin::ALL {
        let s = b.schedule(8, c(1.0, 0.0)).unwrap();
        let pairs = opuc_sequence(&s, 8, Variant::Standard).unwrap();
        for (n, pair) in pairs.iter().enumerate() {
            let norm = monic_norm(&s, n).unwrap();
            let monic = pair.p.scale(c(norm, 0.0));
            assert!((monic.coeff(n) - 1.0).norm() < 1e-13);
            let q = MeasureSpec::Builtin(b).integrate(512, |xi| c(monic.eval(xi).norm_sqr(), 0.0)).unwrap();
            assert!((q.re.sqrt() - norm).abs() < 1e-10, "{b:?} n = {n}");
            assert!((reverse(&monic, n).unwrap().eval(c(0.0, 0.0)) - 1.0).norm() < 1e-13);
        }
    }
}

#[test]
fn orthonormal_under_quadrature() {
    for b in Builtin::ALL {
        let s = b.schedule(10, c(1.0, 0.0)).unwrap();
        let pairs = opuc_sequence(&s, 10, Variant::Standard).unwrap();
        for j in 0..=10 {
            for k in 0..=10 {
                let v = MeasureSpec::Builtin(b)
                    .integrate(512, |xi| pairs[j].p.eval(xi).conj() * pairs[k].p.eval(xi))
                    .unwrap();
                let expected = if j == k { 1.0 } else { 0.0 };
                assert!((v - expected).norm() < 1e-9, "{b:?} ({j},{k})");
            }
        }
    }
}

#[test]
fn gram_schmidt_small_cases() {
    let m = moments(&MeasureSpec::Builtin(Builtin::Lebesgue), 5, 512).unwrap();
    for (n, p) in gram_schmidt_oracle(&m, 5).unwrap().iter().enumerate() {
        assert!(p.max_abs_diff(&ComplexPoly::monomial(n)) < 1e-14);
    }
    let exact = crate::coefficients::Moments::from_nonnegative(&[c(1.0, 0.0), c(-0.5, 0.0), c(0.0, 0.0)]);
    let gs = gram_schmidt_oracle(&exact, 2).unwrap();
    assert!(gs[1].max_abs_diff(&mu_closed_form(1)) < 1e-15);
    assert!(gs[2].max_abs_diff(&mu_closed_form(2)) < 1e-10);
}

#[test]
fn gram_schmidt_matches_recursion() {
    for b in Builtin::ALL {
        let m = moments(&MeasureSpec::Builtin(b), 16, default_nodes(16)).unwrap();
        let gs = gram_schmidt_oracle(&m, 16).unwrap();
        let rec = opuc_sequence(&b.schedule(16, c(1.0, 0.0)).unwrap(), 16, Variant::Standard).unwrap();
        for (g, r) in gs.iter().zip(&rec) {
            assert!(g.max_abs_diff(&r.p) < 1e-9, "{b:?}");
        }
    }
}

#[test]
fn gram_schmidt_rejects_singular() {
    let point_mass = crate::coefficients::Moments::from_nonnegative(&[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
    assert!(matches!(gram_schmidt_oracle(&point_mass, 2), Err(Error::NotPositiveDefinite { order: 1 })));
}

#[test]
fn cd_kernel_order_zero() {
    let s = mu(3);
    let k = cd_kernel(&s, 0, c(0.3, 0.2), c(-0.1, 0.5), KernelVariant::Standard).unwrap();
    assert!((k.sum - 1.0).norm() < 1e-15);
    assert!((k.closed - 1.0).norm() < 1e-14);
}

#[test]
fn cd_kernel_at_origin() {
    let s = mu(6);
    let k = cd_kernel(&s, 5, c(0.0, 0.0), c(0.0, 0.0), KernelVariant::Standard).unwrap();
    let direct: f64 = (0..=5).map(|n| mu_closed_form(n).coeff(0).norm_sqr()).sum();
    assert!((k.sum - direct).norm() < 1e-14);
    assert!(k.residual() < 1e-13);
}

#[test]
fn cd_kernel_rejects_vanishing_denominator() {
    let z = C64::from_polar(1.0, 0.4);
    assert!(matches!(cd_kernel(&mu(3), 1, z, z, KernelVariant::Standard), Err(Error::VanishingDenominator)));
}

#[test]
fn pairing_examples() {
    let p0 = pairing_identity(&mu(2), 0, c(0.4, -0.7), false).unwrap();
    assert!((p0.lhs - 2.0).norm() < 1e-15 && (p0.rhs - 2.0).norm() < 1e-15);
    let p1 = pairing_identity(&mu(2), 1, c(0.0, 1.0), false).unwrap();
    assert!((p1.lhs - c(0.0, 2.0)).norm() < 1e-14);
    assert!((p1.rhs - c(0.0, 2.0)).norm() < 1e-15);
    assert!((p1.circle_real_part.unwrap() - 1.0).abs() < 1e-14);
    let r1 = pairing_identity(&mu_rotated(2), 1, c(0.0, 1.0), true).unwrap();
    assert!((r1.lhs - c(-2.0, 0.0)).norm() < 1e-14);
    assert!((r1.rhs - c(-2.0, 0.0)).norm() < 1e-14);
}

#[test]
fn scalar_values_match_polynomials() {
    let s = mu_rotated(12);
    let z = c(0.3, -0.8);
    for v in [Variant::Standard, Variant::Rotated, Variant::SecondKind, Variant::RotatedSecondKind] {
        let pairs = opuc_sequence(&s, 12, v).unwrap();
        let vals = values_at(&s, z, 12, v).unwrap();
        for (p, (a, b)) in pairs.iter().zip(vals) {
            let (pa, pb) = p.eval(z);
            assert!((pa - a).norm() < 1e-12 && (pb - b).norm() < 1e-12, "{v:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn forward_backward_round_trip(s in arb_schedule(64)) {
        for v in [Variant::Standard, Variant::Rotated, Variant::SecondKind, Variant::RotatedSecondKind] {
            let pairs = opuc_sequence(&s, 64, v).unwrap();
            for n in 0..64 {
                let a = s.alpha(n as i64).unwrap();
                let z = s.zeta(n as i64).unwrap();
                let back = szego_backward(&pairs[n + 1], a, z, v).unwrap();
                let scale = pairs[n].p.coeffs().iter().map(|x| x.norm()).fold(1.0, f64::max);
                prop_assert!(back.max_abs_diff(&pairs[n]) < 1e-13 * scale, "{:?} n = {}", v, n);
            }
        }
    }

    #[test]
    fn reverse_is_involution(coeffs in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..20), extra in 0usize..4, phases in prop::collection::vec(-PI..PI, 24)) {
        let p = ComplexPoly::new(coeffs.iter().map(|&(a, b)| c(a, b)).collect());
        let n = p.degree() + extra;
        prop_assert_eq!(reverse(&reverse(&p, n).unwrap(), n).unwrap(), p.clone());
        let zetas: Vec<C64> = phases.iter().map(|&t| C64::from_polar(1.0, t)).collect();
        let twice = rotated_reverse(&rotated_reverse(&p, n, &zetas).unwrap(), n, &zetas).unwrap();
        prop_assert!(twice.max_abs_diff(&p) < 1e-14 * 10.0);
    }

    #[test]
    fn rotation_covariance(s in arb_schedule(32)) {
        let plain = opuc_sequence(&s, 32, Variant::Standard).unwrap();
        let rot = opuc_sequence(&s, 32, Variant::Rotated).unwrap();
        for n in 0..=32 {
            let ph = s.phase_product(n).unwrap();
            let scale = plain[n].p.coeffs().iter().map(|x| x.norm()).fold(1.0, f64::max);
            prop_assert!(rot[n].p.max_abs_diff(&plain[n].p.scale(ph)) < 1e-13 * scale);
            prop_assert!(rot[n].p_star.max_abs_diff(&plain[n].p_star.scale(ph)) < 1e-13 * scale);
            let rr = rotated_reverse(&rot[n].p, n, s.zetas()).unwrap();
            prop_assert!(rr.max_abs_diff(&rot[n].p_star) < 1e-12 * scale);
            prop_assert_eq!(rot[n].p.degree(), n);
        }
    }

    #[test]
    fn christoffel_darboux_identities(s in arb_schedule(12), xi in arb_disk(1.2), z in arb_disk(1.2), n in 0usize..11) {
        prop_assume!((1.0 - xi.conj() * z).norm() > 1e-3);
        let plain = cd_kernel(&s, n, xi, z, KernelVariant::Standard).unwrap();
        let rot = cd_kernel(&s, n, xi, z, KernelVariant::Rotated).unwrap();
        let mixed = cd_kernel(&s, n, xi, z, KernelVariant::Mixed).unwrap();
        let rmixed = cd_kernel(&s, n, xi, z, KernelVariant::RotatedMixed).unwrap();
        let scale = plain.sum.norm().max(mixed.sum.norm()).max(1.0);
        prop_assert!(plain.residual() < 1e-10 * scale);
        prop_assert!(rot.residual() < 1e-10 * scale);
        prop_assert!(mixed.residual() < 1e-10 * scale);
        prop_assert!(rmixed.residual() < 1e-10 * scale);
        prop_assert!((plain.sum - rot.sum).norm() < 1e-14 * scale * 10.0);
        prop_assert!((mixed.sum - rmixed.sum).norm() < 1e-14 * scale * 10.0);
    }

    #[test]
    fn pairing_holds(s in arb_schedule(10), z in arb_disk(1.5), theta in -PI..PI, n in 0usize..10) {
        for rotated in [false, true] {
            let p = pairing_identity(&s, n, z, rotated).unwrap();
            prop_assert!(p.residual() < 1e-10 * p.rhs.norm().max(1.0));
            let w = C64::from_polar(1.0, theta);
            let q = pairing_identity(&s, n, w, rotated).unwrap();
            let (phi, _) = values_at(&s, w, n, Variant::new(rotated, false)).unwrap()[n];
            let (psi, _) = values_at(&s, w, n, Variant::new(rotated, true)).unwrap()[n];
            let scale = (phi.norm() * psi.norm()).max(1.0);
            prop_assert!((q.circle_real_part.unwrap() - 1.0).abs() < 1e-10 * scale);
        }
    }
}
