//! Self-verification suite.
//!
//! Each [`Row`] checks one reproducible number or property at a fixed
//! tolerance. The `acceptance` integration test and the `verify` CLI command
//! both run these rows. [`adjudication`] recomputes reference closed
//! forms that disagree with direct evaluation, next to the direct values.

use std::f64::consts::{PI, SQRT_2};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bell::{
    self, evaluate_family, example1_settings, example2_settings, product_bound, threshold_bisect,
    BellSettings, Family, FamilyCurve, FunctionalKind, PreparedState,
};
use crate::error::Error;
use crate::matcore::{self, ComplexMatrix};
use crate::measures;
use crate::quantum::{
    self, pauli, product_state, pure_density, random_single_qubit_state, Axis, Basis,
    DensityMatrix, Ket,
};

/// Product-state bounds the suite checks against. Overridable for fault injection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundTable {
    pub mabk: f64,
    pub l1: f64,
    pub rel_ent: f64,
    pub skew: f64,
}

impl Default for BoundTable {
    fn default() -> Self {
        Self {
            mabk: product_bound(FunctionalKind::Mabk),
            l1: product_bound(FunctionalKind::L1),
            rel_ent: product_bound(FunctionalKind::RelEnt),
            skew: product_bound(FunctionalKind::Skew),
        }
    }
}

impl BoundTable {
    pub fn get(&self, kind: FunctionalKind) -> f64 {
        match kind {
            FunctionalKind::Mabk => self.mabk,
            FunctionalKind::L1 => self.l1,
            FunctionalKind::RelEnt => self.rel_ent,
            FunctionalKind::Skew => self.skew,
        }
    }

    pub fn set(&mut self, kind: FunctionalKind, value: f64) {
        match kind {
            FunctionalKind::Mabk => self.mabk = value,
            FunctionalKind::L1 => self.l1 = value,
            FunctionalKind::RelEnt => self.rel_ent = value,
            FunctionalKind::Skew => self.skew = value,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub criterion: u8,
    pub name: String,
    pub value: f64,
    pub expected: String,
    pub passed: bool,
}

impl Row {
    fn close(criterion: u8, name: &str, value: f64, target: f64, tol: f64) -> Self {
        Self {
            criterion,
            name: name.to_string(),
            value,
            expected: format!("{target:.12} ± {tol:e}"),
            passed: (value - target).abs() <= tol,
        }
    }

    fn check(
        criterion: u8,
        name: &str,
        value: f64,
        expected: impl Into<String>,
        passed: bool,
    ) -> Self {
        Self {
            criterion,
            name: name.to_string(),
            value,
            expected: expected.into(),
            passed,
        }
    }
}

pub const CRITERIA: std::ops::RangeInclusive<u8> = 1..=10;

pub const ENSEMBLE_STATES: usize = 1000;
pub const ENSEMBLE_SETTINGS: usize = 100;
const ENSEMBLE_SEED: u64 = 0x5EED_0008;
const MEASURE_SEED: u64 = 0x5EED_0009;
const BISECT_TOL: f64 = 1e-12;

fn rho_w() -> DensityMatrix {
    pure_density(&quantum::w_state())
}

fn rho_ghz() -> DensityMatrix {
    pure_density(&quantum::ghz_state())
}

fn eval(kind: FunctionalKind, rho: &DensityMatrix, s: &BellSettings) -> f64 {
    bell::evaluate(kind, rho, s).expect("8x8 state")
}

fn family_value(family: Family, kind: FunctionalKind, s: &BellSettings, params: &[f64]) -> f64 {
    let curve = FamilyCurve::new(family, kind, s.clone());
    evaluate_family(&curve, params).expect("parameters inside the family domain")
}

/// p_k = k/100 for k = 1..=99.
pub fn interior_p_grid() -> Vec<f64> {
    (1..=99).map(|k| k as f64 / 100.0).collect()
}

/// Reference closed form for the W-Werner relative-entropy functional.
pub fn w_werner_rel_ent_closed_form(p: f64) -> f64 {
    let a = (8.0 - 5.0 * p) / 24.0;
    let b = (4.0 - p) / 24.0;
    let c = (2.0 + p) / 24.0;
    a * a.log2() - (4.0 - p) / 3.0 * b.log2() + 3.0 * p / 8.0 * (p / 8.0).log2()
        - (2.0 + p) / 2.0 * c.log2()
}

/// Reference closed form for the GHZ-Werner relative-entropy functional.
pub fn ghz_werner_rel_ent_closed_form(p: f64) -> f64 {
    6.0 + (1.0 - 0.75 * p) * (4.0 - 3.0 * p).log2() + 0.75 * p * p.log2()
}

/// 6 + √3 − (4 + √3) cos 4θ
pub fn ghz_pure_skew_closed_form(theta: f64) -> f64 {
    let r3 = 3f64.sqrt();
    6.0 + r3 - (4.0 + r3) * (4.0 * theta).cos()
}

/// Settings whose eigenbases are all mutually unbiased with the σ_y eigenstates.
pub fn saturating_settings() -> BellSettings {
    let (x, z) = (pauli(Axis::X), pauli(Axis::Z));
    BellSettings::new(
        [x.clone(), z.clone()],
        [x.clone(), z.clone()],
        [x, z],
        "x/z on every party",
    )
    .expect("Pauli settings")
}

/// |+i⟩⊗|+i⟩⊗|+i⟩: maximally coherent in every x or z eigenbasis, and a
/// pure single-qubit state with unit skew information for σx and σz.
pub fn saturating_state() -> DensityMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus_i = pure_density(
        &Ket::new(vec![
            num_complex::Complex64::new(h, 0.0),
            num_complex::Complex64::new(0.0, h),
        ])
        .expect("unit ket"),
    );
    product_state(&plus_i, &plus_i, &plus_i).expect("single-qubit factors")
}

/// |000⟩ with σz everywhere reaches the MABK product bound.
fn mabk_saturation() -> (DensityMatrix, BellSettings) {
    let z = pauli(Axis::Z);
    let s = BellSettings::new(
        [z.clone(), z.clone()],
        [z.clone(), z.clone()],
        [z.clone(), z],
        "z",
    )
    .expect("Pauli settings");
    (pure_density(&Ket::basis(8, 0)), s)
}

fn criterion_1() -> Vec<Row> {
    let v = eval(FunctionalKind::L1, &rho_w(), &example1_settings());
    vec![
        Row::close(1, "W, example1: l1 functional ≈ 15.876", v, 15.87587, 1e-3),
        Row::close(
            1,
            "W, example1: l1 functional = (25+16√2)/3",
            v,
            (25.0 + 16.0 * SQRT_2) / 3.0,
            1e-9,
        ),
    ]
}

fn criterion_2() -> Vec<Row> {
    let v = eval(FunctionalKind::RelEnt, &rho_w(), &example1_settings());
    vec![Row::close(
        2,
        "W, example1: rel-ent functional ≈ 6.503",
        v,
        6.503,
        1e-3,
    )]
}

fn criterion_3() -> Vec<Row> {
    let e1 = example1_settings();
    vec![
        Row::close(
            3,
            "GHZ, example1: l1 functional = 20",
            eval(FunctionalKind::L1, &rho_ghz(), &e1),
            20.0,
            1e-9,
        ),
        Row::close(
            3,
            "GHZ, example1: rel-ent functional = 8",
            eval(FunctionalKind::RelEnt, &rho_ghz(), &e1),
            8.0,
            1e-9,
        ),
    ]
}

fn criterion_4() -> Vec<Row> {
    let e2 = example2_settings();
    vec![
        Row::close(
            4,
            "W, example2: skew functional = 10",
            eval(FunctionalKind::Skew, &rho_w(), &e2),
            10.0,
            1e-9,
        ),
        Row::close(
            4,
            "GHZ, example2: skew functional = 10+2√3",
            eval(FunctionalKind::Skew, &rho_ghz(), &e2),
            13.46410,
            1e-3,
        ),
    ]
}

fn threshold(family: Family, kind: FunctionalKind, s: BellSettings) -> Result<f64, Error> {
    threshold_bisect(&FamilyCurve::new(family, kind, s), (0.0, 1.0), BISECT_TOL)
}

fn criterion_5() -> Vec<Row> {
    let w_l1 =
        threshold(Family::WWerner, FunctionalKind::L1, example1_settings()).unwrap_or(f64::NAN);
    let g_skew =
        threshold(Family::GhzWerner, FunctionalKind::Skew, example2_settings()).unwrap_or(f64::NAN);
    let g_l1 =
        threshold(Family::GhzWerner, FunctionalKind::L1, example1_settings()).unwrap_or(f64::NAN);

    // W-Werner/skew: under example2 the curve never reaches 6; under example1
    // the crossing lands on (11−√57)/20.
    let ex2 = threshold(Family::WWerner, FunctionalKind::Skew, example2_settings());
    let ex1 =
        threshold(Family::WWerner, FunctionalKind::Skew, example1_settings()).unwrap_or(f64::NAN);
    let endpoint = (11.0 - 57f64.sqrt()) / 20.0;
    let adjudicated =
        matches!(ex2, Err(Error::NoSignChange { .. })) && (ex1 - endpoint).abs() <= 1e-6;

    vec![
        Row::close(5, "W-Werner/l1 threshold", w_l1, 0.118163, 1e-5),
        Row::close(
            5,
            "GHZ-Werner/skew threshold = (5−√3)/11",
            g_skew,
            (5.0 - 3f64.sqrt()) / 11.0,
            1e-6,
        ),
        Row::close(5, "GHZ-Werner/l1 threshold = 0.3", g_l1, 0.3, 1e-6),
        Row::check(
            5,
            "W-Werner/skew threshold adjudicated (example1 crossing, none under example2)",
            ex1,
            format!("{endpoint:.12} ± 1e-6 with no example2 crossing"),
            adjudicated,
        ),
    ]
}

fn max_deviation(
    points: &[f64],
    direct: impl Fn(f64) -> f64 + Sync,
    closed: impl Fn(f64) -> f64 + Sync,
) -> f64 {
    points
        .par_iter()
        .map(|&x| (direct(x) - closed(x)).abs())
        .reduce(|| 0.0, f64::max)
}

fn criterion_6() -> Vec<Row> {
    let e1 = example1_settings();
    let e2 = example2_settings();
    let ps = interior_p_grid();
    let w = max_deviation(
        &ps,
        |p| family_value(Family::WWerner, FunctionalKind::RelEnt, &e1, &[p]),
        w_werner_rel_ent_closed_form,
    );
    let g = max_deviation(
        &ps,
        |p| family_value(Family::GhzWerner, FunctionalKind::RelEnt, &e1, &[p]),
        ghz_werner_rel_ent_closed_form,
    );
    let thetas: Vec<f64> = (0..100).map(|k| k as f64 / 99.0 * PI).collect();
    let s = max_deviation(
        &thetas,
        |t| family_value(Family::GhzPure, FunctionalKind::Skew, &e2, &[t]),
        ghz_pure_skew_closed_form,
    );
    vec![
        Row::check(
            6,
            "W-Werner rel-ent closed form vs direct (max |Δ|, 99 p)",
            w,
            "≤ 1e-9",
            w <= 1e-9,
        ),
        Row::check(
            6,
            "GHZ-Werner rel-ent closed form vs direct (max |Δ|, 99 p)",
            g,
            "≤ 1e-9",
            g <= 1e-9,
        ),
        Row::check(
            6,
            "GHZ-pure skew closed form vs direct (max |Δ|, 100 θ)",
            s,
            "≤ 1e-9",
            s <= 1e-9,
        ),
    ]
}

fn minimum(values: impl ParallelIterator<Item = f64>) -> f64 {
    values.reduce(|| f64::INFINITY, f64::min)
}

fn criterion_7() -> Vec<Row> {
    let e1 = example1_settings();
    let rel = FunctionalKind::RelEnt;
    let w_pure = minimum((0..50 * 50).into_par_iter().map(|n| {
        let theta = PI * ((n / 50) + 1) as f64 / 51.0;
        let phi = 2.0 * PI * ((n % 50) + 1) as f64 / 51.0;
        family_value(Family::WPure, rel, &e1, &[theta, phi])
    }));
    let ps = interior_p_grid();
    let w_werner = minimum(
        ps.par_iter()
            .map(|&p| family_value(Family::WWerner, rel, &e1, &[p])),
    );
    let g_werner = minimum(
        ps.par_iter()
            .map(|&p| family_value(Family::GhzWerner, rel, &e1, &[p])),
    );

    // θ_k = kπ/100 includes the product points 0 and π/2.
    let ghz: Vec<(f64, f64)> = (0..100)
        .into_par_iter()
        .map(|k| {
            let t = k as f64 * PI / 100.0;
            (t, family_value(Family::GhzPure, rel, &e1, &[t]))
        })
        .collect();
    let ghz_ok = ghz.iter().all(|&(t, v)| {
        let product = (2.0 * t).sin().abs() < 1e-12;
        if product {
            (v - 6.0).abs() <= 1e-9
        } else {
            v > 6.0 + 1e-9
        }
    });
    let ghz_min = ghz.iter().map(|&(_, v)| v).fold(f64::INFINITY, f64::min);

    vec![
        Row::check(
            7,
            "W-pure 50×50: min rel-ent functional > 6",
            w_pure,
            "> 6",
            w_pure > 6.0,
        ),
        Row::check(
            7,
            "W-Werner 99 p: min rel-ent functional > 6",
            w_werner,
            "> 6",
            w_werner > 6.0,
        ),
        Row::check(
            7,
            "GHZ-Werner 99 p: min rel-ent functional > 6",
            g_werner,
            "> 6",
            g_werner > 6.0,
        ),
        Row::check(
            7,
            "GHZ-pure 100 θ: rel-ent functional ≥ 6, equality only at product θ",
            ghz_min,
            "≥ 6 − 1e-9",
            ghz_ok && ghz_min >= 6.0 - 1e-9,
        ),
    ]
}

/// Random product states and random dichotomic settings, both seeded.
pub fn product_ensemble(
    states: usize,
    settings: usize,
) -> (Vec<[DensityMatrix; 3]>, Vec<BellSettings>) {
    let factors = (0..states as u64)
        .map(|n| {
            let base = ENSEMBLE_SEED.wrapping_add(3 * n);
            [
                random_single_qubit_state(base),
                random_single_qubit_state(base + 1),
                random_single_qubit_state(base + 2),
            ]
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(ENSEMBLE_SEED);
    let settings = (0..settings)
        .map(|_| {
            let mut m = || quantum::random_dichotomic(&mut rng);
            BellSettings::new([m(), m()], [m(), m()], [m(), m()], "random").expect("dichotomic")
        })
        .collect();
    (factors, settings)
}

#[derive(Debug, Clone, Copy, Default)]
struct EnsembleStats {
    max_excess: [f64; 4],
    factorization: f64,
    rel_ent_additivity: f64,
    skew_additivity: f64,
}

impl EnsembleStats {
    fn merge(mut self, other: Self) -> Self {
        for k in 0..4 {
            self.max_excess[k] = self.max_excess[k].max(other.max_excess[k]);
        }
        self.factorization = self.factorization.max(other.factorization);
        self.rel_ent_additivity = self.rel_ent_additivity.max(other.rel_ent_additivity);
        self.skew_additivity = self.skew_additivity.max(other.skew_additivity);
        self
    }
}

fn ensemble_stats(bounds: &BoundTable, states: usize, settings: usize) -> EnsembleStats {
    let (factors, settings) = product_ensemble(states, settings);
    let init = EnsembleStats {
        max_excess: [f64::NEG_INFINITY; 4],
        ..Default::default()
    };
    factors
        .par_iter()
        .map(|parts| {
            let rho = product_state(&parts[0], &parts[1], &parts[2]).expect("qubits");
            let prepared = PreparedState::new(&rho).expect("valid state");
            let sqrt_parts: Vec<ComplexMatrix> = parts
                .iter()
                .map(|r| matcore::psd_sqrt(r.matrix()).expect("PSD"))
                .collect();
            let mut stats = init;
            for s in &settings {
                let terms = prepared.term_values(s);
                let mut values = [0.0; 4];
                for (k, row) in terms.iter().enumerate() {
                    values[k] = bell::combine(row);
                }
                values[0] = values[0].abs();
                for (k, kind) in FunctionalKind::ALL.into_iter().enumerate() {
                    stats.max_excess[k] = stats.max_excess[k].max(values[k] - bounds.get(kind));
                }
                // Per-term identities against the single-qubit factors.
                for (t, &(idx, _)) in bell::TERMS.iter().enumerate() {
                    let mut product = 1.0;
                    let mut rel_sum = 0.0;
                    let mut skew_sum = 0.0;
                    for party in 0..3 {
                        let basis = Basis::from_unitary(s.local_basis(party, idx[party]).clone());
                        product *= measures::c_l1(&parts[party], &basis).expect("2x2") + 1.0;
                        rel_sum += measures::c_rel_ent(&parts[party], &basis).expect("2x2");
                        skew_sum += measures::skew_with_sqrt(
                            &sqrt_parts[party],
                            s.observable(party, idx[party]).matrix(),
                        )
                        .expect("2x2");
                    }
                    stats.factorization =
                        stats.factorization.max((terms[1][t] + 1.0 - product).abs());
                    stats.rel_ent_additivity =
                        stats.rel_ent_additivity.max((terms[2][t] - rel_sum).abs());
                    stats.skew_additivity =
                        stats.skew_additivity.max((terms[3][t] - skew_sum).abs());
                }
            }
            stats
        })
        .reduce(|| init, EnsembleStats::merge)
}

/// Largest value of each functional over the saturating constructions.
pub fn saturation_values() -> [f64; 4] {
    let s = saturating_settings();
    let rho = saturating_state();
    let (rho_m, s_m) = mabk_saturation();
    [
        eval(FunctionalKind::Mabk, &rho_m, &s_m),
        eval(FunctionalKind::L1, &rho, &s),
        eval(FunctionalKind::RelEnt, &rho, &s),
        eval(FunctionalKind::Skew, &rho, &s),
    ]
}

/// Bounds hold on the ensemble and are reached by a product construction.
fn criterion_8(bounds: &BoundTable) -> Vec<Row> {
    criterion_8_sized(bounds, ENSEMBLE_STATES, ENSEMBLE_SETTINGS)
}

pub fn criterion_8_sized(bounds: &BoundTable, states: usize, settings: usize) -> Vec<Row> {
    let stats = ensemble_stats(bounds, states, settings);
    let reached = saturation_values();
    let names = [
        "MABK product bound",
        "l1 product bound",
        "rel-ent product bound",
        "skew product bound",
    ];
    let mut rows: Vec<Row> = FunctionalKind::ALL
        .into_iter()
        .enumerate()
        .map(|(k, kind)| {
            let bound = bounds.get(kind);
            let excess = stats.max_excess[k].max(reached[k] - bound);
            let tight = (reached[k] - bound).abs() <= 1e-9;
            Row::check(
                8,
                &format!(
                    "{} = {bound} ({states}×{settings} product ensemble)",
                    names[k]
                ),
                excess,
                "max(value − bound) ≤ 1e-9 and bound reached",
                excess <= 1e-9 && tight,
            )
        })
        .collect();
    rows.push(Row::check(
        8,
        "l1 factorization C+1 = Π(C_K+1)",
        stats.factorization,
        "≤ 1e-9",
        stats.factorization <= 1e-9,
    ));
    rows.push(Row::check(
        8,
        "rel-ent additivity over parties",
        stats.rel_ent_additivity,
        "≤ 1e-9",
        stats.rel_ent_additivity <= 1e-9,
    ));
    rows.push(Row::check(
        8,
        "skew additivity over parties",
        stats.skew_additivity,
        "≤ 1e-9",
        stats.skew_additivity <= 1e-9,
    ));
    rows
}

fn criterion_9() -> Vec<Row> {
    let mut rng = ChaCha8Rng::seed_from_u64(MEASURE_SEED);
    let pure: Vec<(DensityMatrix, ComplexMatrix)> = (0..500)
        .map(|_| {
            let rho = pure_density(&quantum::random_ket(&mut rng, 8));
            (rho, quantum::random_hermitian(&mut rng, 8))
        })
        .collect();
    let mixed: Vec<(DensityMatrix, ComplexMatrix)> = (0..1000)
        .map(|_| {
            let rho = quantum::random_mixed_state(&mut rng, 8);
            (rho, quantum::random_hermitian(&mut rng, 8))
        })
        .collect();
    let qubits: Vec<(DensityMatrix, ComplexMatrix)> = (0..1000u64)
        .map(|n| {
            let rho = random_single_qubit_state(MEASURE_SEED + n);
            (rho, quantum::random_dichotomic(&mut rng).matrix().clone())
        })
        .collect();

    let pure_gap = pure
        .par_iter()
        .map(|(r, x)| {
            (measures::skew_information(r, x).unwrap() - measures::variance(r, x).unwrap()).abs()
        })
        .reduce(|| 0.0, f64::max);
    // Largest violation of 0 ≤ I ≤ V.
    let mixed_excess = mixed
        .par_iter()
        .map(|(r, x)| {
            let i = measures::skew_information(r, x).unwrap();
            let v = measures::variance(r, x).unwrap();
            (i - v).max(-i)
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    let qubit_max = qubits
        .par_iter()
        .map(|(r, x)| measures::skew_information(r, x).unwrap())
        .reduce(|| f64::NEG_INFINITY, f64::max);
    vec![
        Row::check(
            9,
            "skew = variance on 500 pure states (max |Δ|)",
            pure_gap,
            "≤ 1e-9",
            pure_gap <= 1e-9,
        ),
        Row::check(
            9,
            "0 ≤ skew ≤ variance on 1000 mixed states (max excess)",
            mixed_excess,
            "≤ 1e-9",
            mixed_excess <= 1e-9,
        ),
        Row::check(
            9,
            "single-qubit skew ≤ 1 (max over 1000)",
            qubit_max,
            "≤ 1 + 1e-9",
            qubit_max <= 1.0 + 1e-9,
        ),
    ]
}

fn criterion_10(bounds: &BoundTable) -> Vec<Row> {
    let reached = saturation_values();
    vec![
        Row::close(
            10,
            "maximally coherent product: l1 functional = bound",
            reached[1],
            bounds.l1,
            1e-9,
        ),
        Row::close(
            10,
            "maximally coherent product: rel-ent functional = bound",
            reached[2],
            bounds.rel_ent,
            1e-9,
        ),
        Row::close(
            10,
            "pure product: skew functional = bound",
            reached[3],
            bounds.skew,
            1e-9,
        ),
    ]
}

pub fn criterion(n: u8, bounds: &BoundTable) -> Vec<Row> {
    match n {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(),
        6 => criterion_6(),
        7 => criterion_7(),
        8 => criterion_8(bounds),
        9 => criterion_9(),
        10 => criterion_10(bounds),
        _ => Vec::new(),
    }
}

pub fn run_suite(bounds: &BoundTable) -> Vec<Row> {
    CRITERIA.flat_map(|n| criterion(n, bounds)).collect()
}

/// A reference value next to what direct evaluation gives.
#[derive(Debug, Clone, PartialEq)]
pub struct Finding {
    pub topic: String,
    pub reference: String,
    pub direct: String,
    pub verdict: String,
}

fn finding(topic: &str, reference: String, direct: String, verdict: &str) -> Finding {
    Finding {
        topic: topic.into(),
        reference,
        direct,
        verdict: verdict.into(),
    }
}

pub fn adjudication() -> Vec<Finding> {
    let e1 = example1_settings();
    let e2 = example2_settings();
    let l1 = FunctionalKind::L1;
    let mut out = Vec::new();

    let ghz_pi4 = family_value(Family::GhzPure, l1, &e1, &[PI / 4.0]);
    let fit = (1..100)
        .map(|k| {
            let t = k as f64 * PI / 100.0;
            (family_value(Family::GhzPure, l1, &e1, &[t]) - (9.0 + 11.0 * (2.0 * t).sin().abs()))
                .abs()
        })
        .fold(0.0, f64::max);
    let theta_star = threshold_bisect(
        &FamilyCurve::new(Family::GhzPure, l1, e1.clone()),
        (1e-3, PI / 4.0),
        BISECT_TOL,
    )
    .unwrap_or(f64::NAN);
    out.push(finding(
        "GHZ-pure l1 functional",
        "11 + 11|sin 2θ| (22 at θ=π/4); violation for |sin 2θ| > 3/11".into(),
        format!(
            "{ghz_pi4:.12} at θ=π/4; 9 + 11|sin 2θ| fits to {fit:.1e}; |sin 2θ*| = {:.12} (5/11 = {:.12})",
            (2.0 * theta_star).sin(),
            5.0 / 11.0
        ),
        "intercept is 9 and the critical ratio is 5/11",
    ));

    let w0 = family_value(Family::WWerner, l1, &e1, &[0.0]);
    let w_half = family_value(Family::WWerner, l1, &e1, &[0.5]);
    out.push(finding(
        "W-Werner l1 functional",
        format!(
            "[31+16√2 − (25+16√2)p]/3 ({:.6} at p=0)",
            (31.0 + 16.0 * SQRT_2) / 3.0
        ),
        format!("{w0:.12} at p=0, {w_half:.12} at p=0.5"),
        "(1−p)(25+16√2)/3; the printed threshold (−17+16√2)/(25+16√2) is consistent with it",
    ));

    let g0 = family_value(Family::GhzWerner, l1, &e1, &[0.0]);
    let g3 = family_value(Family::GhzWerner, l1, &e1, &[0.3]);
    out.push(finding(
        "GHZ-Werner l1 functional",
        "22 − 20p (22 at p=0)".into(),
        format!("{g0:.12} at p=0, {g3:.12} at p=0.3"),
        "20 − 20p; no violation for p ≥ 0.3",
    ));

    let skew = FunctionalKind::Skew;
    let w_e2 = eval(skew, &rho_w(), &e2);
    let w_e1 = eval(skew, &rho_w(), &e1);
    let ex1_star = threshold_bisect(
        &FamilyCurve::new(Family::WWerner, skew, e1.clone()),
        (0.0, 1.0),
        BISECT_TOL,
    )
    .unwrap_or(f64::NAN);
    let ex2_max = (0..=100)
        .map(|k| family_value(Family::WWerner, skew, &e2, &[k as f64 / 100.0]))
        .fold(f64::NEG_INFINITY, f64::max);
    let printed = |p: f64| 10.0 - 7.5 * p - 2.5 * (8.0 * p - p * p).sqrt();
    out.push(finding(
        "W / W-Werner skew functional",
        format!(
            "W = 10; 10 − 7.5p − 2.5√(8p−p²) (= 6 at p = 0.16, value {:.6} at p=0.1); violation for p < (11−√57)/20 = {:.12}",
            printed(0.1),
            (11.0 - 57f64.sqrt()) / 20.0
        ),
        format!(
            "example2: W = {w_e2:.12}, Werner max over p = {ex2_max:.6} (no crossing); example1: W = {w_e1:.12}, p* = {ex1_star:.12}, value at p=0.1 = {:.6}",
            family_value(Family::WWerner, skew, &e1, &[0.1])
        ),
        "W-family numbers belong to the example1 settings; the threshold (11−√57)/20 is right, the closed form is not",
    ));

    let rel = FunctionalKind::RelEnt;
    let p = 0.5;
    let entropy =
        measures::von_neumann_entropy(&Family::GhzWerner.state(&[p]).expect("p in range"));
    let w_direct = family_value(Family::WWerner, rel, &e1, &[p]);
    let g_direct = family_value(Family::GhzWerner, rel, &e1, &[p]);
    out.push(finding(
        "Werner rel-ent closed forms",
        format!(
            "W: {:.12}, GHZ: {:.12} at p=0.5",
            w_werner_rel_ent_closed_form(p),
            ghz_werner_rel_ent_closed_form(p)
        ),
        format!(
            "W: {w_direct:.12}, GHZ: {g_direct:.12}; reference − direct = {:.12}, {:.12}; 2·S(ρ) = {:.12}",
            w_werner_rel_ent_closed_form(p) - w_direct,
            ghz_werner_rel_ent_closed_form(p) - g_direct,
            2.0 * entropy
        ),
        "closed forms omit the −2·S(ρ) contribution of the four C_r terms",
    ));

    let w_star = threshold(Family::WWerner, rel, e1.clone()).unwrap_or(f64::NAN);
    let g_star = threshold(Family::GhzWerner, rel, e1).unwrap_or(f64::NAN);
    out.push(finding(
        "Werner rel-ent witness range",
        "violated for all p ∈ (0, 1)".into(),
        format!("W-Werner crosses 6 at p = {w_star:.12}; GHZ-Werner at p = {g_star:.12}"),
        "violation only below these p",
    ));
    out
}
