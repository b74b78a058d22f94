use std::f64::consts::{FRAC_1_SQRT_2, PI};

use coherence_bell::matcore::{self, kron_vec, ComplexMatrix, C0, C1, CI};
use coherence_bell::quantum::*;
use coherence_bell::Error;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
    a.max_abs_diff(b) <= tol
}

/// |⟨u|v⟩| = 1, i.e. equal up to a global phase.
fn same_ray(u: &[Complex64], v: &[Complex64]) -> bool {
    let ip: Complex64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
    (ip.norm() - 1.0).abs() < 1e-12
}

#[test]
fn pauli_matrices() {
    assert_eq!(
        pauli(Axis::Z).matrix(),
        &ComplexMatrix::diag_real(&[1.0, -1.0])
    );
    assert_eq!(
        pauli(Axis::X).matrix(),
        &ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
    );
    let y = pauli(Axis::Y);
    assert_eq!(y.matrix()[(0, 1)], -CI);
    assert_eq!(y.matrix()[(1, 0)], CI);
    for a in [Axis::X, Axis::Y, Axis::Z] {
        assert!(pauli(a).is_dichotomic());
        assert!(Observable::new(pauli(a).matrix().clone())
            .unwrap()
            .is_dichotomic());
    }
}

#[test]
fn bloch_observable_examples() {
    assert!(close(
        bloch_observable(0.0, 0.0).matrix(),
        pauli(Axis::Z).matrix(),
        1e-15
    ));
    assert!(close(
        bloch_observable(PI / 2.0, 0.0).matrix(),
        pauli(Axis::X).matrix(),
        1e-15
    ));
    let m = bloch_observable(PI / 6.0, 0.0);
    let expected = Observable::combine(
        (PI / 6.0).cos(),
        &pauli(Axis::Z),
        (PI / 6.0).sin(),
        &pauli(Axis::X),
    )
    .unwrap();
    assert!(close(m.matrix(), expected.matrix(), 1e-15));
    // With φ = π the x-component flips sign, giving M_B^1 of the rotated settings.
    let flipped = bloch_observable(PI / 6.0, PI);
    let mb1 = Observable::combine(
        (PI / 6.0).cos(),
        &pauli(Axis::Z),
        -(PI / 6.0).sin(),
        &pauli(Axis::X),
    )
    .unwrap();
    assert!(close(flipped.matrix(), mb1.matrix(), 1e-15));
}

#[test]
fn non_dichotomic_observable_rejected() {
    let half = pauli(Axis::Z).matrix().scale_real(0.5);
    let obs = Observable::new(half.clone()).unwrap();
    assert!(!obs.is_dichotomic());
    assert!(Observable::dichotomic(half).is_err());
    let bad = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    assert!(matches!(
        Observable::new(bad),
        Err(Error::NotHermitian { .. })
    ));
}

#[test]
fn w_family() {
    let w = w_state();
    let a = 1.0 / 3f64.sqrt();
    for (i, z) in w.amplitudes().iter().enumerate() {
        let expected = if [1, 2, 4].contains(&i) { a } else { 0.0 };
        assert!((z.re - expected).abs() < 1e-15 && z.im == 0.0, "index {i}");
    }
    let k = w_class_pure(PI / 2.0, 1.234);
    assert!((k.amplitudes()[4].re - 1.0).abs() < 1e-15);
    assert!(k.amplitudes()[1].norm() < 1e-15 && k.amplitudes()[2].norm() < 1e-15);
    assert!((norm(w_class_pure(0.7, 1.3).amplitudes()) - 1.0).abs() < 1e-12);
}

#[test]
fn ghz_family() {
    let g = ghz_state();
    assert!((g.amplitudes()[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
    assert!((g.amplitudes()[7].re - FRAC_1_SQRT_2).abs() < 1e-15);
    assert_eq!(ghz_class_pure(0.0), Ket::basis(8, 0));
    let k = ghz_class_pure(PI / 2.0);
    assert!((k.amplitudes()[7].re - 1.0).abs() < 1e-15);
    assert!(k.amplitudes()[0].norm() < 1e-15);
}

#[test]
fn pure_density_examples() {
    assert_eq!(
        pure_density(&Ket::basis(2, 0)).matrix(),
        &ComplexMatrix::diag_real(&[1.0, 0.0])
    );
    let plus = Ket::normalized(vec![C1, C1]).unwrap();
    let p = pure_density(&plus);
    assert!(p
        .matrix()
        .entries()
        .iter()
        .all(|z| (z - 0.5).norm() < 1e-15));
    let rw = pure_density(&w_state());
    for i in 0..8 {
        for j in 0..8 {
            let on = [1, 2, 4].contains(&i) && [1, 2, 4].contains(&j);
            let expected = if on { 1.0 / 3.0 } else { 0.0 };
            assert!((rw.matrix()[(i, j)].re - expected).abs() < 1e-15);
        }
    }
    // Idempotent projector.
    assert!(close(&rw.matrix().matmul(rw.matrix()), rw.matrix(), 1e-14));
}

#[test]
fn werner_examples() {
    let rg = pure_density(&ghz_state());
    assert_eq!(werner_mix(&rg, 0.0).unwrap().matrix(), rg.matrix());
    assert!(close(
        werner_mix(&rg, 1.0).unwrap().matrix(),
        DensityMatrix::maximally_mixed(8).matrix(),
        1e-15
    ));
    let rw = werner_mix(&pure_density(&w_state()), 0.5).unwrap();
    for i in 0..8 {
        for j in 0..8 {
            let on = [1, 2, 4].contains(&i) && [1, 2, 4].contains(&j);
            let mut expected = if on { 1.0 / 6.0 } else { 0.0 };
            if i == j {
                expected += 1.0 / 16.0;
            }
            assert!(
                (rw.matrix()[(i, j)].re - expected).abs() < 1e-15,
                "({i},{j})"
            );
        }
    }
    assert!(DensityMatrix::new(rw.matrix().clone()).is_ok());
    assert!(matches!(
        werner_mix(&rg, 1.5),
        Err(Error::ParameterOutOfRange(_))
    ));
    assert!(werner_mix(&rg, -0.1).is_err());
}

#[test]
fn werner_spectrum() {
    let p = 0.3;
    let rw = werner_mix(&pure_density(&w_state()), p).unwrap();
    let e = rw.eigen();
    for (k, l) in e.eigenvalues.iter().enumerate() {
        let expected = if k == 7 { 1.0 - p + p / 8.0 } else { p / 8.0 };
        assert!((l - expected).abs() < 1e-12);
    }
}

#[test]
fn werner_off_diagonals_scale_in_any_basis() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let rho = pure_density(&random_ket(&mut rng, 8));
    let p = 0.37;
    let mixed = werner_mix(&rho, p).unwrap();
    for _ in 0..20 {
        let b = product_basis(
            &random_dichotomic(&mut rng),
            &random_dichotomic(&mut rng),
            &random_dichotomic(&mut rng),
        )
        .unwrap();
        let t0 = rho.matrix().congruence(b.basis().unitary());
        let t1 = mixed.matrix().congruence(b.basis().unitary());
        for i in 0..8 {
            for j in 0..8 {
                if i != j {
                    assert!((t1[(i, j)] - t0[(i, j)] * (1.0 - p)).norm() <= 1e-12);
                }
            }
        }
    }
}

#[test]
fn product_state_examples() {
    let zero = pure_density(&Ket::basis(2, 0));
    let s = product_state(&zero, &zero, &zero).unwrap();
    assert_eq!(s.matrix(), pure_density(&Ket::basis(8, 0)).matrix());
    let mm = DensityMatrix::maximally_mixed(2);
    let s = product_state(&mm, &mm, &mm).unwrap();
    assert!(close(
        s.matrix(),
        DensityMatrix::maximally_mixed(8).matrix(),
        1e-15
    ));
    for seed in 0..50 {
        let a = random_single_qubit_state(seed);
        let b = random_single_qubit_state(seed + 1000);
        let c = random_single_qubit_state(seed + 2000);
        let s = product_state(&a, &b, &c).unwrap();
        assert!((s.matrix().trace().re - 1.0).abs() < 1e-12);
    }
    assert!(product_state(&s, &mm, &mm).is_err());
}

#[test]
fn eigenbasis_examples() {
    let (lo, hi) = eigenbasis(&pauli(Axis::Z)).unwrap();
    assert_eq!(lo, Ket::basis(2, 1));
    assert_eq!(hi, Ket::basis(2, 0));

    // Listed x-basis for M_A^1: (1,−1)/√2 then (1,1)/√2.
    let h = FRAC_1_SQRT_2;
    let (lo, hi) = eigenbasis(&pauli(Axis::X)).unwrap();
    assert!(same_ray(
        lo.amplitudes(),
        &[Complex64::new(h, 0.0), Complex64::new(-h, 0.0)]
    ));
    assert!(same_ray(
        hi.amplitudes(),
        &[Complex64::new(h, 0.0), Complex64::new(h, 0.0)]
    ));
    assert!((lo.amplitudes()[1].re + h).abs() < 1e-12);

    // Listed basis for qubit B under −σ_y: (1, i)/√2 and (i, 1)/√2.
    let (lo, hi) = eigenbasis(&pauli(Axis::Y).negate()).unwrap();
    assert!(same_ray(
        lo.amplitudes(),
        &[Complex64::new(h, 0.0), Complex64::new(0.0, h)]
    ));
    assert!(same_ray(
        hi.amplitudes(),
        &[Complex64::new(0.0, h), Complex64::new(h, 0.0)]
    ));
}

#[test]
fn eigenbasis_consistent_with_observable() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let m = random_dichotomic(&mut rng);
        let (lo, hi) = eigenbasis(&m).unwrap();
        for (v, lambda) in [(lo, -1.0), (hi, 1.0)] {
            let mv = m.matrix().apply(v.amplitudes());
            for (a, b) in mv.iter().zip(v.amplitudes()) {
                assert!((a - b * lambda).norm() <= 1e-10);
            }
        }
    }
}

#[test]
fn product_basis_examples() {
    let z = pauli(Axis::Z);
    let b = product_basis(&z, &z, &z).unwrap();
    // Each ket is a computational basis vector, each used once.
    let mut seen = [false; 8];
    for k in b.kets() {
        let idx = k
            .amplitudes()
            .iter()
            .position(|a| (a.norm() - 1.0).abs() < 1e-12)
            .unwrap();
        assert!(!seen[idx]);
        seen[idx] = true;
    }
    assert!(seen.iter().all(|&s| s));
    assert_eq!(ProductBasis::labels()[0], (1, 1, 1));
    assert_eq!(ProductBasis::labels()[1], (1, 1, 2));
    assert_eq!(ProductBasis::labels()[7], (2, 2, 2));

    // σx, −σy, σz eigenvectors in label order, up to phase.
    let x = pauli(Axis::X);
    let my = pauli(Axis::Y).negate();
    let b = product_basis(&x, &my, &z).unwrap();
    let h = FRAC_1_SQRT_2;
    let a_kets = [
        [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
        [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
    ];
    let b_kets = [
        [Complex64::new(h, 0.0), Complex64::new(0.0, h)],
        [Complex64::new(0.0, h), Complex64::new(h, 0.0)],
    ];
    let c_kets = [[C0, C1], [C1, C0]];
    for (n, (i, j, k)) in ProductBasis::labels().into_iter().enumerate() {
        let listed = kron_vec(
            &kron_vec(&a_kets[i as usize - 1], &b_kets[j as usize - 1]),
            &c_kets[k as usize - 1],
        );
        assert!(
            same_ray(b.kets()[n].amplitudes(), &listed),
            "label {:?}",
            (i, j, k)
        );
        assert_eq!(b.ket((i, j, k)), b.kets()[n]);
    }
}

#[test]
fn product_basis_orthonormal_and_complete() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let b = product_basis(
            &random_dichotomic(&mut rng),
            &random_dichotomic(&mut rng),
            &random_dichotomic(&mut rng),
        )
        .unwrap();
        let u = b.basis().unitary();
        let gram = matcore::adjoint(u).matmul(u);
        assert!(close(&gram, &ComplexMatrix::identity(8), 1e-10));
        let mut sum = ComplexMatrix::zeros(8, 8);
        for k in b.kets() {
            sum = &sum + &ComplexMatrix::outer(k.amplitudes(), k.amplitudes());
        }
        assert!(close(&sum, &ComplexMatrix::identity(8), 1e-10));
    }
}

#[test]
fn collective_observable_examples() {
    let z = pauli(Axis::Z);
    let c = collective_observable(&z, &z, &z).unwrap();
    assert_eq!(
        c,
        ComplexMatrix::diag_real(&[3.0, 1.0, 1.0, -1.0, 1.0, -1.0, -1.0, -3.0])
    );
    let id = Observable::new(ComplexMatrix::identity(2)).unwrap();
    let c = collective_observable(&id, &id, &id).unwrap();
    assert_eq!(c, ComplexMatrix::identity(8).scale_real(3.0));
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..100 {
        let c = collective_observable(
            &random_dichotomic(&mut rng),
            &random_dichotomic(&mut rng),
            &random_dichotomic(&mut rng),
        )
        .unwrap();
        assert!(c.is_hermitian(1e-12));
    }
}

#[test]
fn random_states_are_valid_and_deterministic() {
    assert_eq!(random_single_qubit_state(42), random_single_qubit_state(42));
    let mut saw_pure_ish = false;
    let mut saw_mixed = false;
    for seed in 0..1000 {
        let r = random_single_qubit_state(seed);
        assert!((r.matrix().trace().re - 1.0).abs() <= 1e-12);
        let e = r.eigen();
        assert!(e.eigenvalues[0] >= -1e-12);
        let purity = r.purity();
        saw_pure_ish |= purity > 0.99;
        saw_mixed |= purity < 0.6;
        DensityMatrix::new(r.matrix().clone()).unwrap();
    }
    assert!(saw_pure_ish && saw_mixed);
}

#[test]
fn density_matrix_validation() {
    let bad_trace = ComplexMatrix::diag_real(&[1.0, 1.0]);
    assert!(matches!(
        DensityMatrix::new(bad_trace),
        Err(Error::InvalidState(_))
    ));
    let not_psd = ComplexMatrix::diag_real(&[1.5, -0.5]);
    assert!(matches!(
        DensityMatrix::new(not_psd),
        Err(Error::InvalidState(_))
    ));
    let wrong_dim = ComplexMatrix::identity(4).scale_real(0.25);
    assert!(matches!(
        DensityMatrix::new(wrong_dim),
        Err(Error::DimensionMismatch { .. })
    ));
    assert!(Ket::new(vec![C1, C1]).is_err());
}
