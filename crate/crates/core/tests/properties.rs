mod common;

use proptest::prelude::*;
use weighted_radius::ensemble::{random_weight, sample, EnsembleConfig, EnsembleKind};
use weighted_radius::radius::{a_numerical_radius, weighted_radius, weighted_radius_imaginary, WeightPair};
use weighted_radius::spectral::{a_spectral_radius, distance_to_scalars, numerical_index};
use weighted_radius::{ComplexMatrix, Matrix, Weight, C64};

const TOL: f64 = 1e-7;

#[derive(Debug, Clone)]
struct Case {
    kind: EnsembleKind,
    w: Weight<f64>,
    x: ComplexMatrix,
    y: ComplexMatrix,
}

fn kinds() -> impl Strategy<Value = EnsembleKind> {
    prop_oneof![
        Just(EnsembleKind::GeneralMember),
        Just(EnsembleKind::ASelfAdjoint),
        Just(EnsembleKind::NilpotentAx2Zero),
        Just(EnsembleKind::CommutativeDiagonal),
        Just(EnsembleKind::APositive),
    ]
}

fn cases() -> impl Strategy<Value = Case> {
    (any::<u64>(), 2usize..=4, 0usize..=1, kinds()).prop_map(|(seed, n, drop, kind)| {
        let mut rank = n - drop;
        if kind == EnsembleKind::NilpotentAx2Zero {
            rank = rank.max(2);
        }
        let diagonal = kind == EnsembleKind::CommutativeDiagonal;
        let w = random_weight::<f64>(seed, n, rank, diagonal).unwrap();
        let x = sample(&EnsembleConfig::new(seed ^ 1, n, rank, kind), &w).unwrap();
        let y = sample(&EnsembleConfig::new(seed ^ 2, n, rank, kind), &w).unwrap();
        Case { kind, w, x, y }
    })
}

fn pairs() -> impl Strategy<Value = WeightPair<f64>> {
    (0.0..2.0f64, 0.05..2.0f64).prop_map(|(t, s)| WeightPair::new(t, s).unwrap())
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn seminorm_axioms(c in cases(), re in -3.0..3.0f64, im in -3.0..3.0f64) {
        let w = &c.w;
        let (nx, ny) = (w.seminorm_of_member(&c.x).unwrap(), w.seminorm_of_member(&c.y).unwrap());
        let sum = w.seminorm_of_member(&(&c.x + &c.y)).unwrap();
        prop_assert!(sum <= nx + ny + TOL * (1.0 + nx + ny));
        let lam = C64::new(re, im);
        let scaled = w.seminorm_of_member(&c.x.scale(lam)).unwrap();
        prop_assert!(close(scaled, lam.norm() * nx, 1e-10));
    }

    #[test]
    fn seminorm_matches_compression_oracle(c in cases()) {
        let ours = c.w.seminorm_of_member(&c.x).unwrap();
        let oracle = common::seminorm(c.w.matrix(), &c.x);
        prop_assert!(close(ours, oracle, 1e-9), "{ours} vs {oracle}");
    }

    #[test]
    fn adjoint_identities(c in cases()) {
        let w = &c.w;
        let xs = w.adjoint(&c.x).unwrap();
        // A x♯ = x* A.
        let lhs = w.matrix().matmul(&xs);
        let rhs = c.x.adjoint().matmul(w.matrix());
        prop_assert!((&lhs - &rhs).frobenius_norm() <= 1e-9 * (1.0 + rhs.frobenius_norm()));
        // (xy)♯ = y♯ x♯ for the distinguished adjoint.
        let xy_s = w.adjoint(&c.x.matmul(&c.y)).unwrap();
        let ys_xs = w.adjoint(&c.y).unwrap().matmul(&xs);
        prop_assert!((&xy_s - &ys_xs).frobenius_norm() <= 1e-8 * (1.0 + xy_s.frobenius_norm()));
        // ‖x‖² = ‖x x♯‖ = ‖x♯ x‖ = ‖x♯‖².
        let nx = w.seminorm_of_member(&c.x).unwrap();
        let sq = nx * nx;
        let red = w.compress_reduced(&c.x).unwrap();
        let red_s = w.compress_reduced(&xs).unwrap();
        prop_assert!((&red.adjoint() - &red_s).frobenius_norm() <= 1e-8 * (1.0 + red.frobenius_norm()));
        for v in [
            common::op_norm(&common::to_na(&red.matmul(&red_s))),
            common::op_norm(&common::to_na(&red_s.matmul(&red))),
            w.seminorm_of_member(&xs).unwrap().powi(2),
        ] {
            prop_assert!(close(v, sq, TOL));
        }
    }

    #[test]
    fn adjoint_choice_is_irrelevant(c in cases(), seed in any::<u64>()) {
        let w = &c.w;
        let xs = w.adjoint(&c.x).unwrap();
        let k = sample(&EnsembleConfig::new(seed, w.dim(), w.dim(), EnsembleKind::GeneralMember), &Weight::identity(w.dim())).unwrap();
        let other = &xs + &w.kernel_proj().matmul(&k);
        prop_assert!(close(w.seminorm(&other).unwrap().value, w.seminorm_of_member(&xs).unwrap(), 1e-9));
    }

    #[test]
    fn reduced_compression_is_multiplicative(c in cases()) {
        let w = &c.w;
        let prod = w.compress_reduced(&c.x.matmul(&c.y)).unwrap();
        let split = w.compress_reduced(&c.x).unwrap().matmul(&w.compress_reduced(&c.y).unwrap());
        prop_assert!((&prod - &split).frobenius_norm() <= 1e-10 * (1.0 + split.frobenius_norm()));
        let sq = c.w.compress(&c.x.matmul(&c.y)).unwrap();
        let sq_split = c.w.compress(&c.x).unwrap().matmul(&c.w.compress(&c.y).unwrap());
        prop_assert!((&sq - &sq_split).frobenius_norm() <= 1e-8 * (1.0 + sq_split.frobenius_norm()));
    }

    #[test]
    fn submultiplicative(c in cases()) {
        let w = &c.w;
        let lhs = common::op_norm(&common::to_na(&w.compress_reduced(&c.x).unwrap().matmul(&w.compress_reduced(&c.y).unwrap())));
        let rhs = w.seminorm_of_member(&c.x).unwrap() * w.seminorm_of_member(&c.y).unwrap();
        prop_assert!(lhs <= rhs + TOL * (1.0 + rhs));
    }

    #[test]
    fn weighted_radius_is_a_seminorm(c in cases(), p in pairs(), re in -3.0..3.0f64, im in -3.0..3.0f64) {
        let w = &c.w;
        let vx = weighted_radius(w, &c.x, p).unwrap().value;
        let vy = weighted_radius(w, &c.y, p).unwrap().value;
        let vs = weighted_radius(w, &(&c.x + &c.y), p).unwrap().value;
        prop_assert!(vs <= vx + vy + TOL * (1.0 + vx + vy));
        let lam = C64::new(re, im);
        let vl = weighted_radius(w, &c.x.scale(lam), p).unwrap().value;
        prop_assert!(close(vl, lam.norm() * vx, TOL));
    }

    #[test]
    fn weighted_radius_bracket_and_symmetries(c in cases(), p in pairs(), k in 0.1..5.0f64) {
        let w = &c.w;
        let nx = w.seminorm_of_member(&c.x).unwrap();
        let v = weighted_radius(w, &c.x, p).unwrap().value;
        prop_assert!(p.max() * nx <= v + TOL * (1.0 + v));
        prop_assert!(v <= p.sum() * nx + TOL * (1.0 + p.sum() * nx));
        let xs = w.adjoint(&c.x).unwrap();
        prop_assert!(close(weighted_radius(w, &xs, p).unwrap().value, v, TOL));
        prop_assert!(close(weighted_radius_imaginary(w, &c.x, p).unwrap().value, v, TOL));
        let scaled = WeightPair::new(k * p.t(), k * p.s()).unwrap();
        prop_assert!(close(weighted_radius(w, &c.x, scaled).unwrap().value, k * v, TOL));
    }

    #[test]
    fn spectral_radius_is_cyclic(c in cases()) {
        let r1 = a_spectral_radius(&c.w, &c.x.matmul(&c.y)).unwrap().r_eig;
        let r2 = a_spectral_radius(&c.w, &c.y.matmul(&c.x)).unwrap().r_eig;
        prop_assert!(close(r1, r2, 1e-8));
        let oracle = common::spectral_radius(&common::compressed(c.w.matrix(), &c.x));
        let ours = a_spectral_radius(&c.w, &c.x).unwrap().r_eig;
        if c.kind == EnsembleKind::NilpotentAx2Zero {
            // A defective zero eigenvalue is only resolved to about √eps·‖x‖.
            let scale = 1.0 + c.w.seminorm_of_member(&c.x).unwrap();
            prop_assert!(ours <= 1e-6 * scale && oracle <= 1e-6 * scale, "{ours} vs {oracle}");
        } else {
            prop_assert!(close(ours, oracle, 1e-8), "{:?}: {ours} vs {oracle}", c.kind);
        }
    }

    #[test]
    fn f32_agrees_with_f64(c in cases()) {
        let w32 = Weight::<f32>::new(&c.w.matrix().cast()).unwrap();
        let x32: Matrix<f32> = c.x.cast();
        if w32.is_member(&x32).unwrap() {
            let v64 = a_numerical_radius(&c.w, &c.x).unwrap().value;
            let v32 = a_numerical_radius(&w32, &x32).unwrap().value as f64;
            prop_assert!(close(v32, v64, 1e-3), "{v32} vs {v64}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn distance_to_scalars_is_translation_covariant(c in cases(), re in -2.0..2.0f64, im in -2.0..2.0f64) {
        let w = &c.w;
        let d = distance_to_scalars(w, &c.x).unwrap();
        let v = a_numerical_radius(w, &c.x).unwrap().value;
        prop_assert!(d.value <= v + 1e-12);
        let shifted = &c.x + &Matrix::identity(w.dim()).scale(C64::new(re, im));
        let ds = distance_to_scalars(w, &shifted).unwrap().value;
        prop_assert!((ds - d.value).abs() <= 1e-6 * (1.0 + d.value), "{ds} vs {}", d.value);
    }

    #[test]
    fn index_bracket(seed in any::<u64>(), n in 2usize..=3, drop in 0usize..=1) {
        let w = random_weight::<f64>(seed, n, n - drop, false).unwrap();
        let est = numerical_index(&w, None, 200, seed).unwrap();
        prop_assert!(est.lower >= 0.5 - 1e-7 && est.upper <= 1.0 + 1e-7);
        prop_assert!(est.lower <= est.upper + 1e-7);
    }
}

proptest! {
    #[test]
    fn matrix_json_round_trip_is_exact(n in 1usize..=4, entries in proptest::collection::vec((any::<f64>(), any::<f64>()), 16)) {
        prop_assume!(entries.iter().all(|(a, b)| a.is_finite() && b.is_finite()));
        let m = Matrix::<f64>::from_fn(n, n, |i, j| {
            let (re, im) = entries[i * n + j];
            C64::new(re, im)
        });
        let text = weighted_radius::io::matrix_to_json(&m).unwrap();
        let back: ComplexMatrix = weighted_radius::io::matrix_from_json(&text).unwrap();
        for (a, b) in m.as_slice().iter().zip(back.as_slice()) {
            prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
            prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }
}
