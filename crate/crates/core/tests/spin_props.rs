mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use qzeno::linalg::CMat;
use qzeno::spin::*;

fn model_for(spin: Spin) -> CoherenceModel {
    CoherenceModel::general_for(spin)
}

/// Mixture of up to `dim` pure states from raw Gaussian-like amplitudes.
fn mixture(dim: usize, amps: &[f64], weights: &[f64]) -> DensityMatrix {
    let mut m = CMat::zeros(dim);
    let total: f64 = weights.iter().sum();
    for (k, w) in weights.iter().enumerate() {
        let psi: Vec<Complex64> = (0..dim)
            .map(|i| Complex64::new(amps[2 * (k * dim + i)], amps[2 * (k * dim + i) + 1]))
            .collect();
        if psi.iter().all(|z| z.norm() < 1e-6) {
            continue;
        }
        m += DensityMatrix::pure(&psi).0.scale(w / total);
    }
    if m.trace().re < 0.5 {
        return DensityMatrix::maximally_mixed(dim);
    }
    DensityMatrix(m.scale(1.0 / m.trace().re))
}

fn arb_state() -> impl Strategy<Value = (Spin, DensityMatrix)> {
    (0usize..3)
        .prop_flat_map(|i| {
            let spin = Spin::ALL[i];
            let d = spin.dim();
            (
                Just(spin),
                prop::collection::vec(-1.0f64..1.0, 2 * d * d),
                prop::collection::vec(0.05f64..1.0, d),
            )
        })
        .prop_map(|(spin, amps, w)| (spin, mixture(spin.dim(), &amps, &w)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn coherence_round_trip((spin, rho) in arb_state()) {
        let sys = SpinSystem::new(spin);
        let cv = density_to_coherence(&rho, model_for(spin)).unwrap();
        let back = coherence_to_density(&cv, &sys).unwrap();
        prop_assert!((back.0 - rho.0).max_abs() <= 1e-12);
        let again = density_to_coherence(&back, model_for(spin)).unwrap();
        for (a, b) in again.values.iter().zip(&cv.values) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn closed_form_components_match_traces((spin, rho) in arb_state()) {
        let sys = SpinSystem::new(spin);
        let cv = density_to_coherence(&rho, model_for(spin)).unwrap();
        let a = spin_components(&cv, &sys).unwrap();
        let b = spin_components(&rho, &sys).unwrap();
        prop_assert!((a.sx - b.sx).abs() <= 1e-12);
        prop_assert!((a.sy - b.sy).abs() <= 1e-12);
        prop_assert!((a.sz - b.sz).abs() <= 1e-12);
        let s = spin.value() + 1e-9;
        prop_assert!(b.sx.abs() <= s && b.sy.abs() <= s && b.sz.abs() <= s);
    }

    #[test]
    fn purity_closed_form_and_bounds((spin, rho) in arb_state()) {
        let cv = density_to_coherence(&rho, model_for(spin)).unwrap();
        let p = purity(&rho);
        prop_assert!((purity(&cv) - p).abs() <= 1e-12);
        let d = spin.dim() as f64;
        prop_assert!(p >= 1.0 / d - 1e-12 && p <= 1.0 + 1e-12);
    }

    #[test]
    fn random_states_are_physical((_spin, rho) in arb_state()) {
        let report = check_physical(&rho, PhysicalityTolerance::default());
        prop_assert!(report.passed, "{report:?}");
    }

    #[test]
    fn bloch_vector_inside_unit_ball((_spin, rho) in arb_state().prop_filter("spin 1/2", |(s, _)| *s == Spin::Half)) {
        let r = density_to_coherence(&rho, CoherenceModel::Bloch3).unwrap().values;
        prop_assert!(r.iter().map(|x| x * x).sum::<f64>().sqrt() <= 1.0 + 1e-9);
    }
}

#[test]
fn spin_system_examples() {
    let half = build_spin_system("1/2").unwrap();
    assert_eq!(half.sz, CMat::from_diagonal(&[0.5, -0.5]));
    let [sx, sy, sz] = pauli();
    assert!((half.sx - sx.scale(0.5)).max_abs() == 0.0);
    assert!((half.sy - sy.scale(0.5)).max_abs() == 0.0);
    assert!((half.sz - sz.scale(0.5)).max_abs() == 0.0);

    let three_halves = build_spin_system("3/2").unwrap();
    let c = three_halves.sx.commutator(&three_halves.sy) - three_halves.sz.scale_complex(Complex64::new(0.0, 1.0));
    assert!(c.max_abs() <= 1e-12);
    assert!(build_spin_system("5/2").is_err());
}

#[test]
fn generator_basis_examples() {
    let gm = generator_basis(BasisKind::GellMann);
    let r3 = 3f64.sqrt();
    assert!((gm.matrices[7] - CMat::from_diagonal(&[1.0 / r3, 1.0 / r3, -2.0 / r3])).max_abs() < 1e-15);
    let su = generator_basis(BasisKind::Su2xSu2);
    assert_eq!(su.matrices[14], CMat::from_diagonal(&[1.0, -1.0, -1.0, 1.0]));
    for kind in [BasisKind::Pauli, BasisKind::GellMann, BasisKind::Su2xSu2] {
        assert!(generator_basis(kind).matrices.iter().all(|g| g.trace().norm() == 0.0));
    }
}

#[test]
fn eigenprojectors_map_to_axis_vectors() {
    for spin in Spin::ALL {
        let sys = SpinSystem::new(spin);
        for &m in &sys.sz_eigenvalues {
            let rho = DensityMatrix::eigenstate(&sys, m).unwrap();
            let cv = density_to_coherence(&rho, model_for(spin)).unwrap();
            let c = spin_components(&cv, &sys).unwrap();
            assert!(c.sx.abs() <= 1e-12 && c.sy.abs() <= 1e-12);
            assert!((c.sz - m).abs() <= 1e-12);
            assert!((purity(&cv) - 1.0).abs() <= 1e-12);
        }
    }
}

#[test]
fn spin_one_plus_state_coordinates() {
    let sys = SpinSystem::new(Spin::One);
    let rho = DensityMatrix::eigenstate(&sys, 1.0).unwrap();
    let cv = density_to_coherence(&rho, CoherenceModel::Gm8).unwrap();
    let want = [0.0, 0.0, 3f64.sqrt() / 2.0, 0.0, 0.0, 0.0, 0.0, 0.5];
    for (a, b) in cv.values.iter().zip(want) {
        assert!((a - b).abs() <= 1e-15);
    }
}

#[test]
fn physicality_report_examples() {
    let r = check_physical(&DensityMatrix::maximally_mixed(2), PhysicalityTolerance::default());
    assert!(r.passed);
    assert!((r.det - 0.25).abs() < 1e-15);
    let bad = check_physical(
        &DensityMatrix(CMat::from_diagonal(&[1.2, -0.2])),
        PhysicalityTolerance::default(),
    );
    assert!(!bad.passed);
    assert_eq!(bad.log_det, f64::NEG_INFINITY);
}
