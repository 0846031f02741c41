use boostlab::channel::Simulator;
use boostlab::kinematics::{
    boost_matrix, boost_momentum, energy, minkowski_metric, wigner_angle, wigner_angle_from_composition,
    wigner_unitary, BoostSpec, ThreeMomentum,
};
use boostlab::momentum::{build_grid, model_amplitude, normalize, MomentumModel, ModelKind};
use boostlab::spin::{
    bell_state, concurrence, in_separable_octahedron, is_bell_diagonal, t_vector, BellState, TwoQubitState,
};
use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn momentum() -> impl Strategy<Value = ThreeMomentum> {
    (-50.0..50.0f64, -50.0..50.0f64, -120.0..120.0f64).prop_map(|(x, y, z)| ThreeMomentum::new(x, y, z))
}

#[test]
fn wigner_unitary_is_unitary_on_a_million_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..1_000_000 {
        let p = ThreeMomentum::new(rng.gen_range(-100.0..100.0), rng.gen_range(-100.0..100.0), rng.gen_range(-100.0..100.0));
        let u = wigner_unitary(rng.gen_range(0.0..7.0), &p);
        worst = worst.max(u.unitarity_defect());
    }
    assert!(worst < 1e-11, "worst unitarity defect {worst:e}");
}

#[test]
fn half_tan_formula_matches_composition_on_a_grid() {
    let n = 20;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let xi1 = 0.2 + 3.8 * i as f64 / (n - 1) as f64;
                let xi2 = 0.2 + 3.8 * j as f64 / (n - 1) as f64;
                let theta = 0.1 + 3.0 * k as f64 / (n - 1) as f64;
                let b1 = BoostSpec::along_z(xi1).unwrap();
                let b2 = BoostSpec::new(xi2, [theta.sin(), 0.0, theta.cos()]).unwrap();
                let composed = wigner_angle_from_composition(&b1, &b2).unwrap().angle;
                worst = worst.max((composed - wigner_angle(xi1, xi2, theta)).abs());
            }
        }
    }
    assert!(worst < 1e-10, "{worst:e}");
}

#[test]
fn wigner_angle_grows_with_rapidity() {
    for k in 1..40 {
        let theta = std::f64::consts::PI * k as f64 / 40.0;
        let mut prev = 0.0;
        for i in 0..=140 {
            let xi = 0.05 * i as f64;
            let w = wigner_angle(xi, xi, theta);
            assert!(w >= prev - 1e-12, "theta={theta} xi={xi}");
            prev = w;
        }
    }
}

proptest! {
    #[test]
    fn boosts_preserve_invariant_mass(p in momentum(), xi in 0.0..7.0f64,
                                      ax in -1.0..1.0f64, ay in -1.0..1.0f64, az in -1.0..1.0f64) {
        prop_assume!(ax * ax + ay * ay + az * az > 1e-3);
        let b = BoostSpec::new(xi, [ax, ay, az]).unwrap();
        let q = boost_momentum(&b, &p);
        let e = boost_matrix(&b) * p.four_vector();
        let rel = (e[0] * e[0] - q.norm_squared() - 1.0).abs() / e[0].powi(2).max(1.0);
        prop_assert!(rel < 1e-12);
        prop_assert!((energy(&q) - e[0]).abs() < 1e-9 * e[0]);
        let m = boost_matrix(&b);
        let eta = minkowski_metric();
        let scale = m.amax().powi(2);
        prop_assert!((m.transpose() * eta * m - eta).amax() < 1e-13 * scale);
    }

    #[test]
    fn xz_plane_momenta_rotate_about_y(px in -100.0..100.0f64, pz in -100.0..100.0f64, xi in 0.0..7.0f64) {
        let u = wigner_unitary(xi, &ThreeMomentum::new(px, 0.0, pz)).0;
        prop_assert!(u[(0, 1)].im.abs() < 1e-12 && u[(1, 0)].im.abs() < 1e-12);
        prop_assert!((u[(0, 1)] + u[(1, 0)]).norm() < 1e-12);
        prop_assert!(u[(0, 0)].im.abs() < 1e-12);
    }

    #[test]
    fn amplitudes_are_nonnegative_and_mirror_symmetric(p in momentum(), q in momentum(),
                                                      a in momentum(), b in momentum(), sigma in 0.5..8.0f64) {
        let models = [
            MomentumModel::eprb(a, sigma).unwrap(),
            MomentumModel::axis_centered(a.pz, sigma).unwrap(),
            MomentumModel::from_centers(ModelKind::SumTwoLobes, vec![a, -a], vec![b, -b], sigma).unwrap(),
            MomentumModel::from_centers(ModelKind::CrossFourLobes, vec![a, -a, b, -b], vec![b, -b, a, -a], sigma).unwrap(),
            MomentumModel::from_centers(ModelKind::EntangledPhiPlus, vec![a, -a], vec![b, -b], sigma).unwrap(),
        ];
        for m in &models {
            let f = model_amplitude(m, &p, &q);
            prop_assert!(f >= 0.0);
        }
        for m in &models[2..] {
            prop_assert_eq!(model_amplitude(m, &p, &q), model_amplitude(m, &-p, &-q));
        }
    }
}

fn bell_mixture(w: [f64; 4]) -> TwoQubitState {
    let mut m = Matrix4::<Complex64>::zeros();
    for (b, wi) in BellState::ALL.iter().zip(w) {
        m += bell_state(*b).matrix() * c(wi, 0.0);
    }
    TwoQubitState::new(m).unwrap()
}

#[test]
fn octahedron_test_matches_concurrence_for_bell_diagonal_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10_000 {
        let raw: [f64; 4] = std::array::from_fn(|_| -rng.gen_range(1e-12..1.0f64).ln());
        let s: f64 = raw.iter().sum();
        let rho = bell_mixture(raw.map(|x| x / s));
        assert!(is_bell_diagonal(&rho, 1e-12));
        let t = t_vector(&rho);
        let cc = concurrence(&rho);
        // Near the octahedron faces both sides are within rounding of zero.
        if (t.l1_norm() - 1.0).abs() < 1e-6 {
            assert!(cc < 1e-6);
            continue;
        }
        assert_eq!(cc > 0.0, !in_separable_octahedron(&t), "t={t} C={cc}");
    }
}

fn random_pure(rng: &mut ChaCha8Rng) -> Vector4<Complex64> {
    let v = Vector4::from_fn(|_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    v / c(v.norm(), 0.0)
}

#[test]
fn pure_state_concurrence_is_twice_the_schmidt_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for _ in 0..2000 {
        let v = random_pure(&mut rng);
        let coeffs = Matrix2::new(v[0], v[1], v[2], v[3]);
        let s = coeffs.svd(false, false).singular_values;
        let rho = TwoQubitState::pure(&v).unwrap();
        let cc = concurrence(&rho);
        worst = worst.max((cc - 2.0 * s[0] * s[1]).abs());
        assert!((0.0..=1.0).contains(&cc));
        let t = t_vector(&rho);
        assert!(t.as_array().iter().all(|x| x.abs() <= 1.0 + 1e-12));
    }
    // Rank-1 input: square roots of rounding-level eigenvalues bound the
    // absolute accuracy near sqrt(eps).
    assert!(worst < 1e-7, "{worst:e}");
    // Maximal only when the Schmidt coefficients are equal.
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let tilted = Vector4::new(c(0.8, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.6, 0.0));
    assert!(concurrence(&TwoQubitState::pure(&tilted).unwrap()) < 1.0 - 1e-3);
    let maximal = Vector4::new(c(0.0, 0.0), c(h, 0.0), c(0.0, h), c(0.0, 0.0));
    assert!((concurrence(&TwoQubitState::pure(&maximal).unwrap()) - 1.0).abs() < 1e-12);
}

#[test]
fn concurrence_is_local_unitary_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let su2 = |rng: &mut ChaCha8Rng| {
        let q: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        let [a, b, x, y] = q.map(|v| v / n);
        Matrix2::new(c(a, b), c(x, y), c(-x, y), c(a, -b))
    };
    for _ in 0..500 {
        let a = Matrix4::from_fn(|_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let m = a * a.adjoint();
        let tr = m.trace();
        let rho = TwoQubitState::new(m / tr).unwrap();
        let moved = rho.local_unitary(&su2(&mut rng), &su2(&mut rng));
        assert!((concurrence(&rho) - concurrence(&moved)).abs() < 1e-10);
    }
}

#[test]
fn channel_output_is_a_state_for_random_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let rho = bell_state(BellState::PsiMinus);
    for _ in 0..12 {
        let mut r = || ThreeMomentum::new(rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0), rng.gen_range(-100.0..100.0));
        let (a, b) = (r(), r());
        let mut model = MomentumModel::from_centers(ModelKind::EntangledPhiPlus, vec![a, -a], vec![b, -b], 1.0).unwrap();
        let grid = build_grid(&model, 15, 5.0).unwrap();
        normalize(&mut model, &grid).unwrap();
        let sim = Simulator::new(model, grid).unwrap();
        let xi = rng.gen_range(0.0..6.5);
        let raw = sim.boost_raw(&rho, xi).unwrap();
        assert!((raw.trace().re - 1.0).abs() < 1e-9);
        assert!(TwoQubitState::new((raw + raw.adjoint()) * c(0.5, 0.0)).is_ok());
    }
}
