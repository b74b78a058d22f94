//! Tripartite Bell-type functionals.
//!
//! Every functional combines four terms with signs (+, +, +, −). Term
//! (i, j, k) uses the settings (M_A^i, M_B^j, M_C^k); the four terms are
//! (1,1,2), (1,2,1), (2,1,1) and (2,2,2). The MABK value is the absolute value
//! of the correlation combination; the coherence and skew functionals are
//! returned signed, since their product-state bounds constrain the signed sum.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matcore::{self, kron3, ComplexMatrix};
use crate::measures;
use crate::quantum::{
    self, bloch_observable, collective_observable, eigenbasis_unitary, ghz_class_pure, pauli,
    pure_density, w_class_pure, werner_mix, Axis, DensityMatrix, Observable,
};

/// Tolerance on `value > bound` before a report counts as a violation.
pub const VIOLATION_TOLERANCE: f64 = 1e-9;

/// Setting indices (0-based) and sign of the four terms.
pub const TERMS: [([usize; 3], f64); 4] = [
    ([0, 0, 1], 1.0),
    ([0, 1, 0], 1.0),
    ([1, 0, 0], 1.0),
    ([1, 1, 1], -1.0),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FunctionalKind {
    Mabk,
    L1,
    RelEnt,
    Skew,
}

impl FunctionalKind {
    pub const ALL: [FunctionalKind; 4] = [
        FunctionalKind::Mabk,
        FunctionalKind::L1,
        FunctionalKind::RelEnt,
        FunctionalKind::Skew,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FunctionalKind::Mabk => "mabk",
            FunctionalKind::L1 => "l1",
            FunctionalKind::RelEnt => "rel-ent",
            FunctionalKind::Skew => "skew",
        }
    }
}

impl fmt::Display for FunctionalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FunctionalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                Error::ParameterOutOfRange(format!(
                    "unknown functional '{s}' (expected mabk, l1, rel-ent or skew)"
                ))
            })
    }
}

/// Maximum of each functional over fully product states.
pub fn product_bound(kind: FunctionalKind) -> f64 {
    match kind {
        FunctionalKind::Mabk => 2.0,
        FunctionalKind::L1 => 14.0,
        FunctionalKind::RelEnt => 6.0,
        FunctionalKind::Skew => 6.0,
    }
}

/// The six dichotomic measurement observables M_K^i.
#[derive(Debug, Clone)]
pub struct BellSettings {
    observables: [[Observable; 2]; 3],
    bases: [[ComplexMatrix; 2]; 3],
    terms: Vec<TermOperators>,
    label: String,
}

/// Per-term 8×8 operators: product-basis unitary, collective observable and
/// correlation operator M_A ⊗ M_B ⊗ M_C.
#[derive(Debug, Clone)]
struct TermOperators {
    basis: ComplexMatrix,
    collective: ComplexMatrix,
    product: ComplexMatrix,
}

impl BellSettings {
    pub fn new(
        m_a: [Observable; 2],
        m_b: [Observable; 2],
        m_c: [Observable; 2],
        label: impl Into<String>,
    ) -> Result<Self> {
        let observables = [m_a, m_b, m_c];
        for (party, pair) in ["A", "B", "C"].iter().zip(&observables) {
            for (i, m) in pair.iter().enumerate() {
                let certified = m
                    .matrix()
                    .matmul(m.matrix())
                    .max_abs_diff(&ComplexMatrix::identity(2))
                    <= quantum::DICHOTOMIC_TOLERANCE;
                if !m.is_dichotomic() || !certified {
                    return Err(Error::ParameterOutOfRange(format!(
                        "M_{party}^{} is not dichotomic",
                        i + 1
                    )));
                }
            }
        }
        let basis = |m: &Observable| eigenbasis_unitary(m);
        let bases = [
            [basis(&observables[0][0])?, basis(&observables[0][1])?],
            [basis(&observables[1][0])?, basis(&observables[1][1])?],
            [basis(&observables[2][0])?, basis(&observables[2][1])?],
        ];
        let terms = TERMS
            .iter()
            .map(|&(idx, _)| {
                let [a, b, c] = [
                    &observables[0][idx[0]],
                    &observables[1][idx[1]],
                    &observables[2][idx[2]],
                ];
                Ok(TermOperators {
                    basis: kron3(&bases[0][idx[0]], &bases[1][idx[1]], &bases[2][idx[2]]),
                    collective: collective_observable(a, b, c)?,
                    product: kron3(a.matrix(), b.matrix(), c.matrix()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            observables,
            bases,
            terms,
            label: label.into(),
        })
    }

    /// Settings from twelve Bloch angles (θ, φ) ordered
    /// M_A^1, M_A^2, M_B^1, M_B^2, M_C^1, M_C^2.
    pub fn from_angles(angles: &[f64; 12]) -> Self {
        let obs = |n: usize| bloch_observable(angles[2 * n], angles[2 * n + 1]);
        let label = format!(
            "angles:{}",
            angles
                .iter()
                .map(|a| format!("{a}"))
                .collect::<Vec<_>>()
                .join(",")
        );
        Self::new([obs(0), obs(1)], [obs(2), obs(3)], [obs(4), obs(5)], label)
            .expect("Bloch observables are dichotomic")
    }

    /// `party` ∈ 0..3 for A, B, C; `setting` ∈ 0..2 for superscripts 1, 2.
    pub fn observable(&self, party: usize, setting: usize) -> &Observable {
        &self.observables[party][setting]
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Unitary of the product basis used by term `t` (index into [`TERMS`]).
    pub fn term_basis(&self, t: usize) -> &ComplexMatrix {
        &self.terms[t].basis
    }

    /// Collective observable of term `t`.
    pub fn term_collective(&self, t: usize) -> &ComplexMatrix {
        &self.terms[t].collective
    }

    /// Correlation operator M_A ⊗ M_B ⊗ M_C of term `t`.
    pub fn term_product(&self, t: usize) -> &ComplexMatrix {
        &self.terms[t].product
    }

    /// Eigenbasis unitary of M_K^i for `party` ∈ 0..3 and `setting` ∈ 0..2.
    pub fn local_basis(&self, party: usize, setting: usize) -> &ComplexMatrix {
        &self.bases[party][setting]
    }

    /// Product basis of term (i, j, k), 1-based as in the functional.
    pub fn term_product_basis(&self, i: usize, j: usize, k: usize) -> quantum::ProductBasis {
        quantum::product_basis_from_unitaries(
            &self.bases[0][i - 1],
            &self.bases[1][j - 1],
            &self.bases[2][k - 1],
        )
    }
}

/// M_A = (σx, σz), M_B = (−σy, σz), M_C = (σx, σz).
pub fn example1_settings() -> BellSettings {
    let (x, y, z) = (pauli(Axis::X), pauli(Axis::Y), pauli(Axis::Z));
    BellSettings::new(
        [x.clone(), z.clone()],
        [y.negate(), z.clone()],
        [x, z],
        "example1",
    )
    .expect("Pauli settings are dichotomic")
}

/// Rotated settings in the x–z plane: A at (0, π/2), B at (π/6, …), C at (π/3, …).
pub fn example2_settings() -> BellSettings {
    let (x, z) = (pauli(Axis::X), pauli(Axis::Z));
    let rotated = |angle: f64| {
        let (s, c) = angle.sin_cos();
        [
            Observable::combine(c, &z, -s, &x).expect("Hermitian"),
            Observable::combine(s, &z, c, &x).expect("Hermitian"),
        ]
    };
    BellSettings::new(
        [z.clone(), x.clone()],
        rotated(PI / 6.0),
        rotated(PI / 3.0),
        "example2",
    )
    .expect("rotated Pauli settings are dichotomic")
}

/// Bloch angles reproducing [`example1_settings`].
pub const EXAMPLE1_ANGLES: [f64; 12] = [
    PI / 2.0,
    0.0, // σx
    0.0,
    0.0, // σz
    PI / 2.0,
    3.0 * PI / 2.0, // −σy
    0.0,
    0.0, // σz
    PI / 2.0,
    0.0, // σx
    0.0,
    0.0, // σz
];

/// Bloch angles reproducing [`example2_settings`].
pub const EXAMPLE2_ANGLES: [f64; 12] = [
    0.0,
    0.0, // σz
    PI / 2.0,
    0.0, // σx
    PI / 6.0,
    PI, // cos(π/6)σz − sin(π/6)σx
    PI / 3.0,
    0.0, // sin(π/6)σz + cos(π/6)σx
    PI / 3.0,
    PI, // cos(π/3)σz − sin(π/3)σx
    PI / 6.0,
    0.0, // sin(π/3)σz + cos(π/3)σx
];

fn check_three_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 8 {
        return Err(Error::dims(
            "8x8 three-qubit state",
            format!("{0}x{0}", rho.dim()),
        ));
    }
    Ok(())
}

/// A three-qubit state with the spectral data every functional needs.
#[derive(Debug, Clone)]
pub struct PreparedState {
    rho: DensityMatrix,
    entropy: f64,
    sqrt_rho: ComplexMatrix,
}

impl PreparedState {
    pub fn new(rho: &DensityMatrix) -> Result<Self> {
        check_three_qubit(rho)?;
        let eig = rho.eigen();
        matcore::check_psd(&eig)?;
        let entropy = measures::shannon_bits(eig.eigenvalues.iter().copied());
        let sqrt_rho = eig.map_spectrum(|l| {
            if l < matcore::EIGENVALUE_FLOOR {
                0.0
            } else {
                l.sqrt()
            }
        });
        Ok(Self {
            rho: rho.clone(),
            entropy,
            sqrt_rho,
        })
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    /// Unsigned per-term values, indexed `[kind][term]` in the order of
    /// [`FunctionalKind::ALL`] and [`TERMS`]. The MABK row holds the
    /// correlations E(i, j, k).
    pub fn term_values(&self, s: &BellSettings) -> [[f64; 4]; 4] {
        let m = self.rho.matrix();
        let mut out = [[0.0; 4]; 4];
        for t in 0..TERMS.len() {
            out[0][t] = m.trace_product(s.term_product(t)).re;
            let transformed = m.congruence(s.term_basis(t));
            out[1][t] = measures::l1_of_transformed(&transformed);
            out[2][t] = measures::rel_ent_of_transformed(&transformed, self.entropy);
            out[3][t] = measures::skew_with_sqrt(&self.sqrt_rho, s.term_collective(t))
                .expect("collective observable matches the state dimension");
        }
        out
    }

    /// All four functionals in the order of [`FunctionalKind::ALL`].
    pub fn evaluate_all(&self, s: &BellSettings) -> [f64; 4] {
        let terms = self.term_values(s);
        let mut out = [0.0; 4];
        for (k, row) in terms.iter().enumerate() {
            out[k] = combine(row);
        }
        out[0] = out[0].abs();
        out
    }
}

/// Signed (+, +, +, −) combination of four term values.
pub fn combine(values: &[f64; 4]) -> f64 {
    TERMS
        .iter()
        .zip(values)
        .map(|(&(_, sign), v)| sign * v)
        .sum()
}

/// |E(1,1,2) + E(1,2,1) + E(2,1,1) − E(2,2,2)| with E = Tr ρ (M_A ⊗ M_B ⊗ M_C).
pub fn mabk(rho: &DensityMatrix, s: &BellSettings) -> Result<f64> {
    check_three_qubit(rho)?;
    let e: Vec<f64> = (0..TERMS.len())
        .map(|t| rho.matrix().trace_product(s.term_product(t)).re)
        .collect();
    Ok(combine(&[e[0], e[1], e[2], e[3]]).abs())
}

pub fn bell_l1(rho: &DensityMatrix, s: &BellSettings) -> Result<f64> {
    check_three_qubit(rho)?;
    let mut v = [0.0; 4];
    for (t, slot) in v.iter_mut().enumerate() {
        *slot = measures::l1_of_transformed(&rho.matrix().congruence(s.term_basis(t)));
    }
    Ok(combine(&v))
}

pub fn bell_rel_ent(rho: &DensityMatrix, s: &BellSettings) -> Result<f64> {
    check_three_qubit(rho)?;
    let entropy = measures::von_neumann_entropy(rho);
    let mut v = [0.0; 4];
    for (t, slot) in v.iter_mut().enumerate() {
        let transformed = rho.matrix().congruence(s.term_basis(t));
        *slot = measures::rel_ent_of_transformed(&transformed, entropy);
    }
    Ok(combine(&v))
}

pub fn bell_skew(rho: &DensityMatrix, s: &BellSettings) -> Result<f64> {
    check_three_qubit(rho)?;
    let sqrt_rho = matcore::psd_sqrt(rho.matrix())?;
    let mut v = [0.0; 4];
    for (t, slot) in v.iter_mut().enumerate() {
        *slot = measures::skew_with_sqrt(&sqrt_rho, s.term_collective(t))?;
    }
    Ok(combine(&v))
}

pub fn evaluate(kind: FunctionalKind, rho: &DensityMatrix, s: &BellSettings) -> Result<f64> {
    match kind {
        FunctionalKind::Mabk => mabk(rho, s),
        FunctionalKind::L1 => bell_l1(rho, s),
        FunctionalKind::RelEnt => bell_rel_ent(rho, s),
        FunctionalKind::Skew => bell_skew(rho, s),
    }
}

/// All four functionals at once, in the order of [`FunctionalKind::ALL`].
pub fn evaluate_all(rho: &DensityMatrix, s: &BellSettings) -> Result<[f64; 4]> {
    Ok(PreparedState::new(rho)?.evaluate_all(s))
}

/// An evaluated functional together with its product-state bound.
#[derive(Debug, Clone, PartialEq)]
pub struct BellReport {
    pub kind: FunctionalKind,
    pub value: f64,
    pub bound: f64,
    pub violated: bool,
    pub settings: String,
    pub state: String,
}

impl BellReport {
    pub fn new(
        kind: FunctionalKind,
        value: f64,
        settings: impl Into<String>,
        state: impl Into<String>,
    ) -> Self {
        let bound = product_bound(kind);
        Self {
            kind,
            value,
            bound,
            violated: value > bound + VIOLATION_TOLERANCE,
            settings: settings.into(),
            state: state.into(),
        }
    }

    pub fn evaluate(
        kind: FunctionalKind,
        rho: &DensityMatrix,
        s: &BellSettings,
        state: impl Into<String>,
    ) -> Result<Self> {
        Ok(Self::new(kind, evaluate(kind, rho, s)?, s.label(), state))
    }
}

/// Parametric state families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// cosθcosφ|001⟩ + cosθsinφ|010⟩ + sinθ|100⟩, parameters (θ, φ)
    WPure,
    /// cosθ|000⟩ + sinθ|111⟩, parameter θ
    GhzPure,
    /// (p/8)I + (1−p)|W⟩⟨W|, parameter p
    WWerner,
    /// (p/8)I + (1−p)|GHZ⟩⟨GHZ|, parameter p
    GhzWerner,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::WPure,
        Family::GhzPure,
        Family::WWerner,
        Family::GhzWerner,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::WPure => "w-pure",
            Family::GhzPure => "ghz-pure",
            Family::WWerner => "w-werner",
            Family::GhzWerner => "ghz-werner",
        }
    }

    /// Closed parameter domain, one range per parameter.
    pub fn domain(self) -> &'static [(f64, f64)] {
        match self {
            Family::WPure => &[(0.0, PI), (0.0, 2.0 * PI)],
            Family::GhzPure => &[(0.0, PI)],
            Family::WWerner | Family::GhzWerner => &[(0.0, 1.0)],
        }
    }

    pub fn arity(self) -> usize {
        self.domain().len()
    }

    pub fn state(self, params: &[f64]) -> Result<DensityMatrix> {
        let domain = self.domain();
        if params.len() != domain.len() {
            return Err(Error::ParameterOutOfRange(format!(
                "{} takes {} parameter(s), got {}",
                self.name(),
                domain.len(),
                params.len()
            )));
        }
        for (&x, &(lo, hi)) in params.iter().zip(domain) {
            if !(lo..=hi).contains(&x) {
                return Err(Error::ParameterOutOfRange(format!(
                    "{} parameter {x} outside [{lo}, {hi}]",
                    self.name()
                )));
            }
        }
        match self {
            Family::WPure => Ok(pure_density(&w_class_pure(params[0], params[1]))),
            Family::GhzPure => Ok(pure_density(&ghz_class_pure(params[0]))),
            Family::WWerner => werner_mix(&pure_density(&quantum::w_state()), params[0]),
            Family::GhzWerner => werner_mix(&pure_density(&quantum::ghz_state()), params[0]),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::ParameterOutOfRange(format!("unknown family '{s}'")))
    }
}

/// A functional evaluated along a state family under fixed settings.
#[derive(Debug, Clone)]
pub struct FamilyCurve {
    pub family: Family,
    pub kind: FunctionalKind,
    pub settings: BellSettings,
}

impl FamilyCurve {
    pub fn new(family: Family, kind: FunctionalKind, settings: BellSettings) -> Self {
        Self {
            family,
            kind,
            settings,
        }
    }
}

pub fn evaluate_family(curve: &FamilyCurve, params: &[f64]) -> Result<f64> {
    let rho = curve.family.state(params)?;
    evaluate(curve.kind, &rho, &curve.settings)
}

pub const DEFAULT_BISECT_TOLERANCE: f64 = 1e-9;
const MONOTONE_SAMPLES: usize = 16;
const MONOTONE_SLACK: f64 = 1e-10;

/// Root of `value(x) = product_bound(kind)` on a bracket of a one-parameter
/// family, by bisection on the direct evaluation.
pub fn threshold_bisect(curve: &FamilyCurve, bracket: (f64, f64), tol: f64) -> Result<f64> {
    if curve.family.arity() != 1 {
        return Err(Error::ParameterOutOfRange(format!(
            "threshold search needs a one-parameter family, {} has {}",
            curve.family,
            curve.family.arity()
        )));
    }
    let (mut lo, mut hi) = bracket;
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::ParameterOutOfRange(format!(
            "invalid bracket [{lo}, {hi}] or tolerance {tol}"
        )));
    }
    let bound = product_bound(curve.kind);
    let f = |x: f64| evaluate_family(curve, &[x]).map(|v| v - bound);

    let samples = (0..=MONOTONE_SAMPLES + 1)
        .map(|k| f(lo + (hi - lo) * k as f64 / (MONOTONE_SAMPLES + 1) as f64))
        .collect::<Result<Vec<_>>>()?;
    let non_increasing = samples.windows(2).all(|w| w[1] <= w[0] + MONOTONE_SLACK);
    let non_decreasing = samples.windows(2).all(|w| w[1] >= w[0] - MONOTONE_SLACK);
    if !non_increasing && !non_decreasing {
        return Err(Error::NotMonotone { lo, hi });
    }

    let (f_lo, f_hi) = (samples[0], samples[samples.len() - 1]);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange {
            lo,
            hi,
            f_lo: f_lo + bound,
            f_hi: f_hi + bound,
            bound,
        });
    }
    let lo_sign = f_lo.signum();
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub const OPTIMIZER_INITIAL_STEP: f64 = PI / 8.0;
pub const OPTIMIZER_STEP_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct Optimized {
    pub settings: BellSettings,
    pub angles: [f64; 12],
    pub value: f64,
}

/// Multi-start coordinate search over the twelve Bloch angles.
///
/// Restart 0 starts from [`EXAMPLE1_ANGLES`], restart 1 from [`EXAMPLE2_ANGLES`], and
/// later restarts from seeded uniform angles. Each pass tries ±step on every
/// coordinate, accepting strict improvements; a pass without improvement
/// halves the step, and the restart stops once the step would drop below the
/// floor. `iterations` caps the number of passes per restart.
pub fn optimize_settings(
    rho: &DensityMatrix,
    kind: FunctionalKind,
    restarts: usize,
    iterations: usize,
    seed: u64,
) -> Result<Optimized> {
    check_three_qubit(rho)?;
    let restarts = restarts.max(1);
    let iterations = iterations.max(1);
    let objective = |a: &[f64; 12]| evaluate(kind, rho, &BellSettings::from_angles(a));

    let results = (0..restarts)
        .into_par_iter()
        .map(|r| -> Result<([f64; 12], f64)> {
            let mut x = match r {
                0 => EXAMPLE1_ANGLES,
                1 => EXAMPLE2_ANGLES,
                _ => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(r as u64);
                    let mut a = [0.0; 12];
                    for pair in a.chunks_mut(2) {
                        let (theta, phi) = quantum::random_direction(&mut rng);
                        pair[0] = theta;
                        pair[1] = phi;
                    }
                    // Touch the generator once more so streams stay independent of
                    // how many draws random_direction makes.
                    let _: f64 = rng.gen();
                    a
                }
            };
            let mut best = objective(&x)?;
            let mut step = OPTIMIZER_INITIAL_STEP;
            for _ in 0..iterations {
                let mut improved = false;
                for c in 0..12 {
                    for dir in [1.0, -1.0] {
                        let mut trial = x;
                        trial[c] += dir * step;
                        let v = objective(&trial)?;
                        if v > best {
                            best = v;
                            x = trial;
                            improved = true;
                            break;
                        }
                    }
                }
                if !improved {
                    if step * 0.5 < OPTIMIZER_STEP_FLOOR {
                        break;
                    }
                    step *= 0.5;
                }
            }
            Ok((x, best))
        })
        .collect::<Result<Vec<_>>>()?;

    let (angles, value) = results
        .into_iter()
        .fold(None, |acc: Option<([f64; 12], f64)>, cur| match acc {
            Some(a) if a.1 >= cur.1 => Some(a),
            _ => Some(cur),
        })
        .expect("at least one restart");
    Ok(Optimized {
        settings: BellSettings::from_angles(&angles),
        angles,
        value,
    })
}
