use coherence_bell::matcore::{self, ComplexMatrix};
use coherence_bell::measures::*;
use coherence_bell::quantum::*;
use coherence_bell::Error;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn plus() -> DensityMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    pure_density(&Ket::new(vec![Complex64::new(h, 0.0), Complex64::new(h, 0.0)]).unwrap())
}

fn zero() -> DensityMatrix {
    pure_density(&Ket::basis(2, 0))
}

fn random_basis<R: Rng>(rng: &mut R) -> ProductBasis {
    product_basis(
        &random_dichotomic(rng),
        &random_dichotomic(rng),
        &random_dichotomic(rng),
    )
    .unwrap()
}

fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let data = (0..n * n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let g = ComplexMatrix::from_rows(n, n, data);
    (&g + &matcore::adjoint(&g)).scale_real(0.5)
}

#[test]
fn l1_examples() {
    let comp2 = Basis::computational(2);
    assert!((c_l1(&plus(), &comp2).unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(c_l1(&zero(), &comp2).unwrap(), 0.0);
    let rw = pure_density(&w_state());
    assert!((c_l1(&rw, Basis::computational(8)).unwrap() - 2.0).abs() < 1e-12);
    assert!(matches!(
        c_l1(&rw, &comp2),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn entropy_examples() {
    assert!(von_neumann_entropy(&pure_density(&w_state())) < 1e-9);
    assert!(von_neumann_entropy(&plus()) < 1e-9);
    assert!((von_neumann_entropy(&DensityMatrix::maximally_mixed(8)) - 3.0).abs() < 1e-12);
    let mut d = vec![0.0; 8];
    d[0] = 0.5;
    d[1] = 0.5;
    let rho = DensityMatrix::new(ComplexMatrix::diag_real(&d)).unwrap();
    assert!((von_neumann_entropy(&rho) - 1.0).abs() < 1e-12);
}

#[test]
fn dephase_examples() {
    let comp2 = Basis::computational(2);
    let d = dephase(&plus(), &comp2).unwrap();
    assert!(
        d.matrix()
            .max_abs_diff(DensityMatrix::maximally_mixed(2).matrix())
            < 1e-15
    );

    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let rho = random_mixed_state(&mut rng, 8);
    let eig = rho.eigen();
    let eigbasis = Basis::from_kets(
        &(0..8)
            .map(|k| Ket::new(eig.eigenvector(k)).unwrap())
            .collect::<Vec<_>>(),
    )
    .unwrap();
    let d = dephase(&rho, &eigbasis).unwrap();
    assert!(d.matrix().max_abs_diff(rho.matrix()) <= 1e-10);

    let rg = pure_density(&ghz_state());
    let d = dephase(&rg, Basis::computational(8)).unwrap();
    let mut expected = vec![0.0; 8];
    expected[0] = 0.5;
    expected[7] = 0.5;
    assert!(
        d.matrix()
            .max_abs_diff(&ComplexMatrix::diag_real(&expected))
            < 1e-15
    );
}

#[test]
fn dephase_idempotent_and_trace_preserving() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..50 {
        let rho = random_mixed_state(&mut rng, 8);
        let b = random_basis(&mut rng);
        let d1 = dephase(&rho, &b).unwrap();
        let d2 = dephase(&d1, &b).unwrap();
        assert!(d1.matrix().max_abs_diff(d2.matrix()) <= 1e-12);
        assert!((d1.matrix().trace().re - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn rel_ent_examples() {
    let comp2 = Basis::computational(2);
    assert!((c_rel_ent(&plus(), &comp2).unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(c_rel_ent(&zero(), &comp2).unwrap(), 0.0);
    let rw = pure_density(&w_state());
    let v = c_rel_ent(&rw, Basis::computational(8)).unwrap();
    assert!((v - 3f64.log2()).abs() < 1e-9);
    assert!((v - 1.584963).abs() < 1e-6);
}

#[test]
fn rel_ent_matches_dephase_route() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..50 {
        let rho = random_mixed_state(&mut rng, 8);
        let b = random_basis(&mut rng);
        let via_dephase =
            von_neumann_entropy(&dephase(&rho, &b).unwrap()) - von_neumann_entropy(&rho);
        assert!((c_rel_ent(&rho, &b).unwrap() - via_dephase.max(0.0)).abs() <= 1e-10);
    }
}

#[test]
fn skew_examples() {
    let z = pauli(Axis::Z);
    let x = pauli(Axis::X);
    let mm = DensityMatrix::maximally_mixed(2);
    assert!(skew_information(&mm, z.matrix()).unwrap() < 1e-15);
    let rho = DensityMatrix::new(ComplexMatrix::diag_real(&[0.75, 0.25])).unwrap();
    let expected = 1.0 - 3f64.sqrt() / 2.0;
    let got = skew_information(&rho, x.matrix()).unwrap();
    assert!((got - expected).abs() < 1e-12);
    assert!((got - 0.133975).abs() < 1e-6);

    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..100 {
        let rho = pure_density(&random_ket(&mut rng, 2));
        let m = random_dichotomic(&mut rng);
        let s = skew_information(&rho, m.matrix()).unwrap();
        let v = variance(&rho, m.matrix()).unwrap();
        assert!((s - v).abs() <= 1e-9);
    }
}

#[test]
fn skew_errors() {
    let rho = DensityMatrix::maximally_mixed(2);
    let big = ComplexMatrix::identity(8);
    assert!(matches!(
        skew_information(&rho, &big),
        Err(Error::DimensionMismatch { .. })
    ));
    let nh = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    assert!(matches!(
        skew_information(&rho, &nh),
        Err(Error::NotHermitian { .. })
    ));
    assert!(matches!(
        variance(&rho, &nh),
        Err(Error::NotHermitian { .. })
    ));
}

#[test]
fn variance_examples() {
    let z = pauli(Axis::Z);
    let x = pauli(Axis::X);
    assert!((variance(&zero(), x.matrix()).unwrap() - 1.0).abs() < 1e-15);
    assert_eq!(variance(&zero(), z.matrix()).unwrap(), 0.0);
    let mm = DensityMatrix::maximally_mixed(2);
    assert!((variance(&mm, z.matrix()).unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn coherence_is_basis_gauge_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for _ in 0..200 {
        let rho = random_mixed_state(&mut rng, 8);
        let b = random_basis(&mut rng);
        let mut kets = b.kets();
        // Random permutation and random phases.
        for i in (1..8).rev() {
            let j = rng.gen_range(0..=i);
            kets.swap(i, j);
        }
        let kets: Vec<Ket> = kets
            .into_iter()
            .map(|k| {
                let phase = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
                Ket::new(k.amplitudes().iter().map(|a| a * phase).collect()).unwrap()
            })
            .collect();
        let b2 = Basis::from_kets(&kets).unwrap();
        assert!((c_l1(&rho, &b).unwrap() - c_l1(&rho, &b2).unwrap()).abs() <= 1e-10);
        assert!((c_rel_ent(&rho, &b).unwrap() - c_rel_ent(&rho, &b2).unwrap()).abs() <= 1e-10);
    }
}

#[test]
fn coherence_ranges() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for n in 0..1000 {
        let rho = if n % 2 == 0 {
            random_mixed_state(&mut rng, 8)
        } else {
            pure_density(&random_ket(&mut rng, 8))
        };
        let b = random_basis(&mut rng);
        let l1 = c_l1(&rho, &b).unwrap();
        let cr = c_rel_ent(&rho, &b).unwrap();
        assert!((0.0..=7.0 + 1e-9).contains(&l1));
        assert!((0.0..=3.0 + 1e-9).contains(&cr));
    }
}

#[test]
fn skew_bounded_by_variance_and_shift_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..1000 {
        let rho = random_mixed_state(&mut rng, 8);
        let x = random_hermitian(&mut rng, 8);
        let s = skew_information(&rho, &x).unwrap();
        let v = variance(&rho, &x).unwrap();
        assert!(s >= 0.0 && s <= v + 1e-9);
    }
    for _ in 0..100 {
        let rho = random_mixed_state(&mut rng, 8);
        let x = random_hermitian(&mut rng, 8);
        let shift: f64 = rng.gen_range(-5.0..5.0);
        let shifted = &x + &ComplexMatrix::identity(8).scale_real(shift);
        let a = skew_information(&rho, &x).unwrap();
        let b = skew_information(&rho, &shifted).unwrap();
        assert!((a - b).abs() <= 1e-10);
    }
}

#[test]
fn single_qubit_skew_at_most_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    for seed in 0..1000 {
        let rho = random_single_qubit_state(seed);
        let m = random_dichotomic(&mut rng);
        assert!(skew_information(&rho, m.matrix()).unwrap() <= 1.0 + 1e-9);
    }
    // Saturated by a pure state whose Bloch vector is orthogonal to the observable.
    let s = skew_information(&plus(), pauli(Axis::Z).matrix()).unwrap();
    assert!((s - 1.0).abs() < 1e-12);
}
