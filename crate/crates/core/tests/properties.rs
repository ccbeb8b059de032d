use besov_lab::corpus::random_band_limited;
use besov_lab::dyadic::{besov_norm, block_decomposition, psi, Exponent, FilterKind, GridFunction};
use besov_lab::dynamics::{pressure, CircleMap, Weight};
use besov_lab::kernel::{b_m_eval, filter_kernel};
use besov_lab::transfer::{apply, duality_residual, TransferOp};
use besov_lab::Complex64;
use proptest::prelude::*;

fn random_member(n: usize, band: usize, seed: u64) -> GridFunction {
    random_band_limited(n, 1, band, 1.0, seed).unwrap().remove(0)
}

fn exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![
        Just(Exponent::Infinity),
        (1.0f64..6.0).prop_map(Exponent::Finite),
    ]
}

fn op_strategy() -> impl Strategy<Value = TransferOp> {
    (2u32..4, 0.0f64..0.35, prop::bool::ANY).prop_map(|(d, eps, jac)| {
        let map = CircleMap::perturbed(d, eps).unwrap();
        let g = if jac { Weight::inverse_jacobian() } else { Weight::trigonometric(0.3) };
        TransferOp::new(map, g).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn filters_sum_to_one(t in 0.0f64..16384.0) {
        let total: f64 = (0..=14).map(|n| psi(n, FilterKind::Standard, t)).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn blocks_reconstruct(seed in any::<u64>(), band in 1usize..127) {
        let u = random_member(256, band, seed);
        let blocks = block_decomposition(&u, FilterKind::Standard);
        let mut sum = GridFunction::zeros(256).unwrap();
        for b in &blocks {
            sum = sum.add(b).unwrap();
        }
        prop_assert!(sum.sub(&u).unwrap().l2() <= 1e-12 * u.l2());
    }

    #[test]
    fn norm_is_homogeneous(seed in any::<u64>(), c in -5.0f64..5.0, s in 0.1f64..2.5, p in exponent(), q in exponent()) {
        let u = random_member(128, 40, seed);
        let a = besov_norm(&u.scale(Complex64::new(c, 0.0)), s, p, q);
        let b = c.abs() * besov_norm(&u, s, p, q);
        prop_assert!((a - b).abs() <= 1e-12 * b.max(1e-300));
    }

    #[test]
    fn norm_grows_with_smoothness(seed in any::<u64>(), s in 0.1f64..2.0, ds in 0.0f64..1.0, p in exponent(), q in exponent()) {
        let u = random_member(128, 60, seed);
        prop_assert!(besov_norm(&u, s, p, q) <= besov_norm(&u, s + ds, p, q) * (1.0 + 1e-14));
    }

    #[test]
    fn norm_shrinks_with_q(seed in any::<u64>(), s in 0.1f64..2.0, p in exponent(), q in 1.0f64..5.0, dq in 0.0f64..5.0) {
        let u = random_member(128, 60, seed);
        let small = besov_norm(&u, s, p, Exponent::Finite(q));
        let large = besov_norm(&u, s, p, Exponent::Finite(q + dq));
        let sup = besov_norm(&u, s, p, Exponent::Infinity);
        prop_assert!(large <= small * (1.0 + 1e-14));
        prop_assert!(sup <= large * (1.0 + 1e-14));
    }

    #[test]
    fn operator_is_linear(op in op_strategy(), s1 in any::<u64>(), s2 in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let u = random_member(128, 20, s1);
        let v = random_member(128, 20, s2);
        let (ca, cb) = (Complex64::new(a, 0.5), Complex64::new(b, -1.0));
        let lhs = apply(&op, &u.scale(ca).add(&v.scale(cb)).unwrap()).unwrap().function;
        let rhs = apply(&op, &u).unwrap().function.scale(ca)
            .add(&apply(&op, &v).unwrap().function.scale(cb)).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().l2() <= 1e-12 * (1.0 + rhs.l2()));
    }

    #[test]
    fn inverse_jacobian_preserves_mean(d in 2u32..4, eps in 0.0f64..0.35, seed in any::<u64>()) {
        let op = TransferOp::new(CircleMap::perturbed(d, eps).unwrap(), Weight::inverse_jacobian()).unwrap();
        let u = random_member(64, 8, seed);
        let fine = GridFunction::from_modes(
            1024,
            &(-8..=8).map(|k| (k, u.coefficient(k))).collect::<Vec<_>>(),
        ).unwrap();
        let lu = apply(&op, &fine).unwrap().function;
        prop_assert!((lu.coefficient(0) - u.coefficient(0)).norm() < 1e-10);
    }

    #[test]
    fn duality_holds(op in op_strategy(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let u = random_member(64, 6, s1);
        let phi = random_member(64, 6, s2);
        prop_assert!(duality_residual(&op, &u, &phi).unwrap() <= 1e-8);
    }

    #[test]
    fn b_m_rescales(m in 0u32..12, x in -50.0f64..50.0) {
        let lhs = b_m_eval(m + 1, x);
        let rhs = 2.0 * b_m_eval(m, 2.0 * x);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs);
    }

    #[test]
    fn filter_kernels_are_self_similar(n in 2u32..9, z in -3.0f64..3.0) {
        for kind in [FilterKind::Standard, FilterKind::Wide] {
            let lhs = filter_kernel(n, kind, z);
            let rhs = 2.0 * filter_kernel(n - 1, kind, 2.0 * z);
            prop_assert!((lhs - rhs).abs() <= 1e-9 * 2f64.powi(n as i32));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn pressure_shifts_with_constants(eps in 0.0f64..0.3, c in -2.0f64..2.0) {
        let map = CircleMap::perturbed(2, eps).unwrap();
        let phi = |x: f64| 0.3 * (std::f64::consts::TAU * x).cos();
        let shifted = move |x: f64| phi(x) + c;
        let a = pressure(&map, &phi, 6).unwrap();
        let b = pressure(&map, &shifted, 6).unwrap();
        for (x, y) in a.fixed_point.iter().zip(&b.fixed_point) {
            prop_assert!((y - x - c).abs() < 1e-12);
        }
        for (x, y) in a.symbolic.iter().zip(&b.symbolic) {
            prop_assert!((y - x - c).abs() < 1e-12);
        }
    }
}
