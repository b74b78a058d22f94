//! Coherence quantifiers and Wigner–Yanase skew information.
//!
//! Entropies are in bits. Every returned quantity is provably nonnegative, so
//! negative round-off is clamped to zero.

use crate::error::{Error, Result};
use crate::matcore::{self, ComplexMatrix, EIGENVALUE_FLOOR};
use crate::quantum::{Basis, DensityMatrix, STATE_TOLERANCE};

fn check_basis(rho: &DensityMatrix, basis: &Basis) -> Result<()> {
    if basis.dim() != rho.dim() {
        return Err(Error::dims(
            format!("basis of dimension {}", rho.dim()),
            basis.dim(),
        ));
    }
    Ok(())
}

fn clamp_nonnegative(x: f64) -> f64 {
    x.max(0.0)
}

/// ρ expressed in `basis`: entries ⟨b_i|ρ|b_j⟩.
pub fn in_basis(rho: &DensityMatrix, basis: impl AsRef<Basis>) -> Result<ComplexMatrix> {
    let basis = basis.as_ref();
    check_basis(rho, basis)?;
    Ok(rho.matrix().congruence(basis.unitary()))
}

/// l1-norm of coherence: Σ_{i≠j} |⟨b_i|ρ|b_j⟩|.
pub fn c_l1(rho: &DensityMatrix, basis: impl AsRef<Basis>) -> Result<f64> {
    Ok(l1_of_transformed(&in_basis(rho, basis)?))
}

pub(crate) fn l1_of_transformed(t: &ComplexMatrix) -> f64 {
    let total: f64 = t.entries().iter().map(|z| z.norm()).sum();
    clamp_nonnegative(total - 1.0)
}

/// −Σ λ log₂ λ, with eigenvalues below 1e-14 contributing nothing.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    shannon_bits(rho.eigen().eigenvalues.iter().copied())
}

pub(crate) fn shannon_bits(probs: impl IntoIterator<Item = f64>) -> f64 {
    let h: f64 = probs
        .into_iter()
        .filter(|&p| p >= EIGENVALUE_FLOOR)
        .map(|p| -p * p.log2())
        .sum();
    clamp_nonnegative(h)
}

/// Σ_i ⟨b_i|ρ|b_i⟩ |b_i⟩⟨b_i|
pub fn dephase(rho: &DensityMatrix, basis: impl AsRef<Basis>) -> Result<DensityMatrix> {
    let basis = basis.as_ref();
    let t = in_basis(rho, basis)?;
    let diag: Vec<f64> = t.diagonal().iter().map(|z| z.re).collect();
    let u = basis.unitary();
    let d = ComplexMatrix::diag_real(&diag);
    Ok(DensityMatrix::from_trusted(
        u.matmul(&d).matmul(&matcore::adjoint(u)),
    ))
}

/// Relative entropy of coherence S(ρ_d) − S(ρ).
pub fn c_rel_ent(rho: &DensityMatrix, basis: impl AsRef<Basis>) -> Result<f64> {
    let t = in_basis(rho, basis)?;
    Ok(rel_ent_of_transformed(&t, von_neumann_entropy(rho)))
}

/// The dephased state is diagonal in the basis, so its spectrum is the
/// diagonal of the transformed matrix.
pub(crate) fn rel_ent_of_transformed(t: &ComplexMatrix, entropy: f64) -> f64 {
    let dephased = shannon_bits(t.diagonal().iter().map(|z| z.re));
    clamp_nonnegative(dephased - entropy)
}

fn check_observable(rho: &DensityMatrix, x: &ComplexMatrix) -> Result<()> {
    if !x.is_square() || x.rows() != rho.dim() {
        return Err(Error::dims(
            format!("{0}x{0} observable", rho.dim()),
            format!("{}x{}", x.rows(), x.cols()),
        ));
    }
    let deviation = x.hermiticity_error();
    if deviation > STATE_TOLERANCE {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// Wigner–Yanase skew information −½ Tr([√ρ, X]²).
pub fn skew_information(rho: &DensityMatrix, x: &ComplexMatrix) -> Result<f64> {
    check_observable(rho, x)?;
    let sqrt_rho = matcore::psd_sqrt(rho.matrix())?;
    skew_with_sqrt(&sqrt_rho, x)
}

pub(crate) fn skew_with_sqrt(sqrt_rho: &ComplexMatrix, x: &ComplexMatrix) -> Result<f64> {
    let c = matcore::commutator(sqrt_rho, x)?;
    Ok(clamp_nonnegative(-0.5 * c.trace_product(&c).re))
}

/// Tr(ρX²) − (Tr ρX)²
pub fn variance(rho: &DensityMatrix, x: &ComplexMatrix) -> Result<f64> {
    check_observable(rho, x)?;
    let rx = rho.matrix().matmul(x);
    let mean = rx.trace().re;
    let second = rx.trace_product(x).re;
    Ok(clamp_nonnegative(second - mean * mean))
}
