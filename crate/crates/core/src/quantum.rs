//! States, observables and observable-induced reference bases.
//!
//! Qubit ordering: the basis ket |abc⟩ has index 4a + 2b + c, so qubit A is
//! the most significant.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matcore::{self, herm_eig, kron, kron3, ComplexMatrix, HermEigen, C0, C1, CI};

pub const STATE_TOLERANCE: f64 = 1e-10;
pub const DICHOTOMIC_TOLERANCE: f64 = 1e-9;

/// A normalized state vector on one or three qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amplitudes: Vec<Complex64>,
}

impl Ket {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != 2 && amplitudes.len() != 8 {
            return Err(Error::dims("2 or 8 amplitudes", amplitudes.len()));
        }
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > STATE_TOLERANCE {
            return Err(Error::InvalidState(format!("ket norm {norm} != 1")));
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes before validating; fails only on a zero vector.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = norm(&amplitudes);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Self::new(amplitudes.into_iter().map(|z| z / n).collect())
    }

    /// Computational basis ket |index⟩.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amplitudes = vec![C0; dim];
        amplitudes[index] = C1;
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn inner(&self, other: &Ket) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Hermitian, unit-trace, positive-semidefinite matrix on one or three qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() || !(matrix.rows() == 2 || matrix.rows() == 8) {
            return Err(Error::dims(
                "2x2 or 8x8",
                format!("{}x{}", matrix.rows(), matrix.cols()),
            ));
        }
        let herm = matrix.hermiticity_error();
        if herm > STATE_TOLERANCE {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let trace = matrix.trace();
        if (trace - C1).norm() > STATE_TOLERANCE {
            return Err(Error::InvalidState(format!("trace {trace} != 1")));
        }
        let eig = herm_eig(&matrix, STATE_TOLERANCE)?;
        matcore::check_psd(&eig).map_err(|e| Error::InvalidState(e.to_string()))?;
        Ok(Self { matrix })
    }

    /// Skips validation for matrices that are density matrices by construction.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.is_hermitian(1e-9));
        Self { matrix }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_trusted(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn eigen(&self) -> HermEigen {
        herm_eig(&self.matrix, 1e-9).expect("density matrix is Hermitian")
    }

    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }
}

/// A Hermitian single-qubit observable, with a certificate that records
/// whether its eigenvalues are ±1.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: ComplexMatrix,
    dichotomic: bool,
}

impl Observable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.rows() != 2 || matrix.cols() != 2 {
            return Err(Error::dims(
                "2x2",
                format!("{}x{}", matrix.rows(), matrix.cols()),
            ));
        }
        let deviation = matrix.hermiticity_error();
        if deviation > STATE_TOLERANCE {
            return Err(Error::NotHermitian { deviation });
        }
        let dichotomic = matrix
            .matmul(&matrix)
            .max_abs_diff(&ComplexMatrix::identity(2))
            <= DICHOTOMIC_TOLERANCE;
        Ok(Self { matrix, dichotomic })
    }

    /// Like [`Observable::new`] but fails unless M² = I.
    pub fn dichotomic(matrix: ComplexMatrix) -> Result<Self> {
        let obs = Self::new(matrix)?;
        if !obs.dichotomic {
            return Err(Error::ParameterOutOfRange(
                "observable is not dichotomic (M² ≠ I)".into(),
            ));
        }
        Ok(obs)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn is_dichotomic(&self) -> bool {
        self.dichotomic
    }

    pub fn negate(&self) -> Self {
        Self {
            matrix: -&self.matrix,
            dichotomic: self.dichotomic,
        }
    }

    /// Real linear combination a·self + b·other.
    pub fn combine(a: f64, x: &Observable, b: f64, y: &Observable) -> Result<Self> {
        Self::new(&x.matrix.scale_real(a) + &y.matrix.scale_real(b))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

pub fn pauli(axis: Axis) -> Observable {
    let matrix = match axis {
        Axis::X => ComplexMatrix::from_rows(2, 2, vec![C0, C1, C1, C0]),
        Axis::Y => ComplexMatrix::from_rows(2, 2, vec![C0, -CI, CI, C0]),
        Axis::Z => ComplexMatrix::from_rows(2, 2, vec![C1, C0, C0, -C1]),
    };
    Observable {
        matrix,
        dichotomic: true,
    }
}

/// n·σ for the unit vector with polar angle `theta` and azimuth `phi`.
pub fn bloch_observable(theta: f64, phi: f64) -> Observable {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let (nx, ny, nz) = (st * cp, st * sp, ct);
    let matrix = ComplexMatrix::from_rows(
        2,
        2,
        vec![
            Complex64::new(nz, 0.0),
            Complex64::new(nx, -ny),
            Complex64::new(nx, ny),
            Complex64::new(-nz, 0.0),
        ],
    );
    Observable {
        matrix,
        dichotomic: true,
    }
}

/// cosθcosφ|001⟩ + cosθsinφ|010⟩ + sinθ|100⟩
pub fn w_class_pure(theta: f64, phi: f64) -> Ket {
    let mut amplitudes = vec![C0; 8];
    amplitudes[1] = Complex64::new(theta.cos() * phi.cos(), 0.0);
    amplitudes[2] = Complex64::new(theta.cos() * phi.sin(), 0.0);
    amplitudes[4] = Complex64::new(theta.sin(), 0.0);
    Ket { amplitudes }
}

/// cosθ|000⟩ + sinθ|111⟩
pub fn ghz_class_pure(theta: f64) -> Ket {
    let mut amplitudes = vec![C0; 8];
    amplitudes[0] = Complex64::new(theta.cos(), 0.0);
    amplitudes[7] = Complex64::new(theta.sin(), 0.0);
    Ket { amplitudes }
}

/// (|001⟩ + |010⟩ + |100⟩)/√3
pub fn w_state() -> Ket {
    w_class_pure((1.0f64 / 3.0).sqrt().asin(), PI / 4.0)
}

/// (|000⟩ + |111⟩)/√2
pub fn ghz_state() -> Ket {
    ghz_class_pure(PI / 4.0)
}

pub fn pure_density(k: &Ket) -> DensityMatrix {
    DensityMatrix::from_trusted(ComplexMatrix::outer(&k.amplitudes, &k.amplitudes))
}

/// (p/8)·I₈ + (1−p)·ρ
pub fn werner_mix(rho: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
    if rho.dim() != 8 {
        return Err(Error::dims(
            "8x8 state",
            format!("{}x{}", rho.dim(), rho.dim()),
        ));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ParameterOutOfRange(format!(
            "mixing parameter p = {p} outside [0, 1]"
        )));
    }
    let noise = ComplexMatrix::identity(8).scale_real(p / 8.0);
    Ok(DensityMatrix::from_trusted(
        &noise + &rho.matrix.scale_real(1.0 - p),
    ))
}

/// ρ_A ⊗ ρ_B ⊗ ρ_C
pub fn product_state(
    a: &DensityMatrix,
    b: &DensityMatrix,
    c: &DensityMatrix,
) -> Result<DensityMatrix> {
    for (name, r) in [("A", a), ("B", b), ("C", c)] {
        if r.dim() != 2 {
            return Err(Error::dims(
                format!("single-qubit state for party {name}"),
                format!("{}x{}", r.dim(), r.dim()),
            ));
        }
    }
    Ok(DensityMatrix::from_trusted(kron3(
        &a.matrix, &b.matrix, &c.matrix,
    )))
}

/// An orthonormal basis, stored as the unitary whose columns are its kets.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    unitary: ComplexMatrix,
}

impl Basis {
    pub fn computational(dim: usize) -> Self {
        Self {
            unitary: ComplexMatrix::identity(dim),
        }
    }

    pub fn from_kets(kets: &[Ket]) -> Result<Self> {
        let columns: Vec<Vec<Complex64>> = kets.iter().map(|k| k.amplitudes.clone()).collect();
        if columns.is_empty() || columns.iter().any(|c| c.len() != kets.len()) {
            return Err(Error::dims(
                "d kets of dimension d",
                format!("{} kets", kets.len()),
            ));
        }
        let unitary = ComplexMatrix::from_columns(&columns);
        let gram = matcore::adjoint(&unitary).matmul(&unitary);
        let err = gram.max_abs_diff(&ComplexMatrix::identity(kets.len()));
        if err > STATE_TOLERANCE {
            return Err(Error::InvalidState(format!(
                "basis is not orthonormal (Gram deviation {err:e})"
            )));
        }
        Ok(Self { unitary })
    }

    pub(crate) fn from_unitary(unitary: ComplexMatrix) -> Self {
        Self { unitary }
    }

    pub fn dim(&self) -> usize {
        self.unitary.rows()
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn ket(&self, i: usize) -> Ket {
        Ket {
            amplitudes: self.unitary.column(i),
        }
    }

    pub fn kets(&self) -> Vec<Ket> {
        (0..self.dim()).map(|i| self.ket(i)).collect()
    }
}

impl AsRef<Basis> for Basis {
    fn as_ref(&self) -> &Basis {
        self
    }
}

/// Eigenvectors of a single-qubit observable, ascending by eigenvalue.
pub fn eigenbasis(m: &Observable) -> Result<(Ket, Ket)> {
    let eig = herm_eig(&m.matrix, STATE_TOLERANCE)?;
    Ok((
        Ket {
            amplitudes: eig.eigenvector(0),
        },
        Ket {
            amplitudes: eig.eigenvector(1),
        },
    ))
}

pub(crate) fn eigenbasis_unitary(m: &Observable) -> Result<ComplexMatrix> {
    Ok(herm_eig(&m.matrix, STATE_TOLERANCE)?.eigenvectors)
}

/// Three-qubit basis built from the eigenvectors of one observable per party.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductBasis {
    basis: Basis,
}

impl ProductBasis {
    /// Labels (i, j, k) in ket order, 1-based: (1,1,1), (1,1,2), …, (2,2,2).
    pub fn labels() -> [(u8, u8, u8); 8] {
        let mut out = [(0, 0, 0); 8];
        for (n, slot) in out.iter_mut().enumerate() {
            *slot = (
                (n >> 2) as u8 + 1,
                ((n >> 1) & 1) as u8 + 1,
                (n & 1) as u8 + 1,
            );
        }
        out
    }

    pub fn kets(&self) -> Vec<Ket> {
        self.basis.kets()
    }

    pub fn ket(&self, label: (u8, u8, u8)) -> Ket {
        let (i, j, k) = label;
        let index = (usize::from(i) - 1) * 4 + (usize::from(j) - 1) * 2 + usize::from(k) - 1;
        self.basis.ket(index)
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }
}

impl AsRef<Basis> for ProductBasis {
    fn as_ref(&self) -> &Basis {
        &self.basis
    }
}

pub fn product_basis(x: &Observable, y: &Observable, z: &Observable) -> Result<ProductBasis> {
    let u = kron3(
        &eigenbasis_unitary(x)?,
        &eigenbasis_unitary(y)?,
        &eigenbasis_unitary(z)?,
    );
    Ok(ProductBasis {
        basis: Basis::from_unitary(u),
    })
}

/// Product basis from already-computed single-qubit eigenbasis unitaries.
pub(crate) fn product_basis_from_unitaries(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
) -> ProductBasis {
    ProductBasis {
        basis: Basis::from_unitary(kron3(a, b, c)),
    }
}

/// X⊗I⊗I + I⊗Y⊗I + I⊗I⊗Z
pub fn collective_observable(
    x: &Observable,
    y: &Observable,
    z: &Observable,
) -> Result<ComplexMatrix> {
    for m in [x, y, z] {
        let deviation = m.matrix.hermiticity_error();
        if deviation > STATE_TOLERANCE {
            return Err(Error::NotHermitian { deviation });
        }
    }
    let i2 = ComplexMatrix::identity(2);
    let i4 = ComplexMatrix::identity(4);
    let a = kron(&x.matrix, &i4);
    let b = kron3(&i2, &y.matrix, &i2);
    let c = kron(&i4, &z.matrix);
    Ok(&(&a + &b) + &c)
}

/// Single-qubit state from a Bloch vector of length ≤ 1.
pub fn bloch_state(r: [f64; 3]) -> Result<DensityMatrix> {
    let len = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    if len > 1.0 + 1e-12 {
        return Err(Error::ParameterOutOfRange(format!(
            "Bloch vector length {len} > 1"
        )));
    }
    let half = |z: Complex64| z * 0.5;
    Ok(DensityMatrix::from_trusted(ComplexMatrix::from_rows(
        2,
        2,
        vec![
            half(Complex64::new(1.0 + r[2], 0.0)),
            half(Complex64::new(r[0], -r[1])),
            half(Complex64::new(r[0], r[1])),
            half(Complex64::new(1.0 - r[2], 0.0)),
        ],
    )))
}

/// Uniform direction on the sphere as (polar, azimuth).
pub fn random_direction<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi = rng.gen_range(0.0..2.0 * PI);
    (z.clamp(-1.0, 1.0).acos(), phi)
}

/// Bloch direction uniform on the sphere, radius uniform in [0, 1].
pub fn random_single_qubit_state_with<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let (theta, phi) = random_direction(rng);
    let radius: f64 = rng.gen_range(0.0..=1.0);
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    bloch_state([radius * st * cp, radius * st * sp, radius * ct]).expect("radius is at most 1")
}

pub fn random_single_qubit_state(seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_single_qubit_state_with(&mut rng)
}

pub fn random_dichotomic<R: Rng + ?Sized>(rng: &mut R) -> Observable {
    let (theta, phi) = random_direction(rng);
    bloch_observable(theta, phi)
}

/// Haar-like random ket from i.i.d. Gaussian amplitudes (Box–Muller).
pub fn random_ket<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Ket {
    let mut gauss = || {
        let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.gen_range(0.0..1.0);
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * PI * u2).sin_cos();
        Complex64::new(r * c, r * s)
    };
    let amplitudes = (0..dim).map(|_| gauss()).collect();
    Ket::normalized(amplitudes).expect("Gaussian vector is nonzero")
}

/// Hermitian matrix with entries drawn uniformly from the unit square.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let data = (0..dim * dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let g = ComplexMatrix::from_rows(dim, dim, data);
    (&g + &matcore::adjoint(&g)).scale_real(0.5)
}

/// Random full-rank mixed state G†G / Tr(G†G).
pub fn random_mixed_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    let data = (0..dim * dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let g = ComplexMatrix::from_rows(dim, dim, data);
    let a = matcore::adjoint(&g).matmul(&g);
    let tr = a.trace().re;
    let mut m = a.scale_real(1.0 / tr);
    for i in 0..dim {
        m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
    }
    DensityMatrix::from_trusted(m)
}
