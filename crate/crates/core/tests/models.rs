mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

use common::{assert_close, random_density};
use qzeno::models::*;
use qzeno::sde::{euler_maruyama_step, QsdOperators};
use qzeno::spin::{
    density_to_coherence, generator_basis, BasisKind, CoherenceModel, DensityMatrix, Spin,
    SpinSystem,
};

fn operators(spin: Spin, eps: f64, alpha: f64) -> (SpinSystem, QsdOperators) {
    let sys = SpinSystem::new(spin);
    let ops = QsdOperators::new(sys.sx.scale(eps), vec![sys.sz.scale(alpha)]).unwrap();
    (sys, ops)
}

/// Drift and noise of `Tr(G ρ) · scale` for each generator under the matrix equation.
fn projected(ops: &QsdOperators, rho: &DensityMatrix, kind: BasisKind, scale: f64) -> (Vec<f64>, Vec<f64>) {
    let d = ops.drift(rho.matrix());
    let n = ops.noise(rho.matrix(), 0);
    let b = generator_basis(kind);
    (
        b.matrices.iter().map(|g| scale * g.trace_product(&d).re).collect(),
        b.matrices.iter().map(|g| scale * g.trace_product(&n).re).collect(),
    )
}

#[test]
fn rabi_angle_examples() {
    assert_eq!(rabi_angle_coefficients(0.0, 1.0, 5.0), (1.0, 0.0));
    let (a, b) = rabi_angle_coefficients(FRAC_PI_4, 1.0, 2.0);
    assert_close(a, 0.0, 1e-15, "drift at π/4");
    assert_close(b, -SQRT_2, 1e-15, "diffusion at π/4");
    let (a, b) = rabi_angle_coefficients(FRAC_PI_2, 1.0, 2.0);
    assert_close(a, 1.0, 1e-15, "drift at π/2");
    assert_close(b, -2.0, 1e-15, "diffusion at π/2");
}

#[test]
fn rabi_angle_step_at_eigenstate_is_pure_drift() {
    let sys = RabiAngleSystem { epsilon: 1.0, alpha: 3.0 };
    for dw in [-0.3, 0.0, 0.7] {
        let x = euler_maruyama_step(&sys, &[0.0], 1e-3, &[dw]).unwrap();
        assert_close(x[0], 1e-3, 1e-18, "φ after one step");
    }
}

#[test]
fn spin_half_components_examples() {
    for sz in [0.5, -0.5] {
        let (_, b) = spin_half_component_coefficients([sz, 0.0, 0.0], 1.0, 2.0);
        assert_eq!(b[0], 0.0);
    }
    let (a, b) = spin_half_component_coefficients([0.3, 0.1, -0.2], 1.0, 0.0);
    assert_eq!(a, [-0.2, 0.0, -0.3]);
    assert_eq!(b, [0.0; 3]);
}

#[test]
fn spin_half_models_match_matrix_equation() {
    let (sys, ops) = operators(Spin::Half, 0.8, 1.3);
    for seed in 0..20 {
        let rho = random_density(2, 2, seed);
        let (d, n) = projected(&ops, &rho, BasisKind::Pauli, 1.0);
        let r = density_to_coherence(&rho, CoherenceModel::Bloch3).unwrap().values;
        let (a, b) = bloch_coefficients([r[0], r[1], r[2]], 0.8, 1.3);
        for i in 0..3 {
            assert_close(a[i], d[i], 1e-12, "bloch drift");
            assert_close(b[i], n[i], 1e-12, "bloch noise");
        }
        let comps = [rho.expectation(&sys.sz), rho.expectation(&sys.sx), rho.expectation(&sys.sy)];
        let (a, b) = spin_half_component_coefficients(comps, 0.8, 1.3);
        let ops_order = [&sys.sz, &sys.sx, &sys.sy];
        for i in 0..3 {
            let dm = ops.drift(rho.matrix());
            let nm = ops.noise(rho.matrix(), 0);
            assert_close(a[i], ops_order[i].trace_product(&dm).re, 1e-12, "component drift");
            assert_close(b[i], ops_order[i].trace_product(&nm).re, 1e-12, "component noise");
        }
    }
}

#[test]
fn purity_increment_examples() {
    assert_eq!(spin_half_purity_increment([0.1, 0.2, 0.3], 1.0, 2.0, 1e-3, 0.4), 0.0);
    let drift_only = spin_half_purity_increment([0.0, 0.0, 1.0], 0.7, 2.0, 1e-3, 0.0);
    assert_eq!(drift_only, 0.0);
    assert_close(
        spin_half_purity_increment([0.0; 3], 0.5, 1.0, 1e-3, 0.0),
        5e-4,
        1e-18,
        "purity increment",
    );
}

#[test]
fn purity_increment_matches_matrix_step() {
    let (_, ops) = operators(Spin::Half, 1.0, 1.5);
    for seed in 0..10 {
        let rho = random_density(2, 2, seed + 100);
        let r = density_to_coherence(&rho, CoherenceModel::Bloch3).unwrap().values;
        let p = rho.purity();
        let d = ops.drift(rho.matrix());
        let n = ops.noise(rho.matrix(), 0);
        // dP = 2Tr(ρ dρ) + Tr(dρ²), with Tr(N²) contributing at order dt
        let drift = 2.0 * rho.0.trace_product(&d).re + n.trace_product(&n).re;
        let noise = 2.0 * rho.0.trace_product(&n).re;
        let dt = 1e-3;
        let want = drift * dt + noise * 0.02;
        let got = spin_half_purity_increment([r[0], r[1], r[2]], p, 1.5, dt, 0.02);
        assert_close(got, want, 1e-12, "purity increment vs matrix");
    }
}

#[test]
fn spin1_coherence_examples() {
    let r3 = 3f64.sqrt();
    let plus_one = [0.0, 0.0, r3 / 2.0, 0.0, 0.0, 0.0, 0.0, 0.5];
    let (a, b) = spin1_coherence_coefficients(&plus_one, 0.0, 2.0);
    assert!(a.iter().chain(&b).all(|c| c.abs() <= 1e-12), "{a:?} {b:?}");

    let (_, b) = spin1_coherence_coefficients(&[0.0; 8], 0.0, 1.0);
    assert_close(b[7], 1.0, 1e-15, "dz diffusion at origin");
    assert_close(b[2], 1.0 / r3, 1e-15, "du diffusion at origin");
}

#[test]
fn spin1_coherence_matches_matrix_equation() {
    let (_, ops) = operators(Spin::One, 1.1, 0.9);
    for seed in 0..20 {
        let rho = random_density(3, 1 + (seed as usize % 3), seed);
        let (d, n) = projected(&ops, &rho, BasisKind::GellMann, 3f64.sqrt() / 2.0);
        let r = density_to_coherence(&rho, CoherenceModel::Gm8).unwrap().values;
        let (a, b) = spin1_coherence_coefficients(&r.try_into().unwrap(), 1.1, 0.9);
        for i in 0..8 {
            assert_close(a[i], d[i], 1e-12, "gm8 drift");
            assert_close(b[i], n[i], 1e-12, "gm8 noise");
        }
    }
}

#[test]
fn spin1_component_examples() {
    let sys = SpinSystem::new(Spin::One);
    let rho = DensityMatrix::eigenstate(&sys, 1.0).unwrap();
    let st = Spin1ComponentState::from_density(&rho, &sys);
    assert_eq!((st.sz, st.sz2), (1.0, 1.0));
    let (_, b) = spin1_component_coefficients(&st, 0.0, 3.0);
    assert_close(b[0], 0.0, 1e-15, "d⟨Sz⟩ diffusion");
    assert_close(b[4], 0.0, 1e-15, "d⟨Sz²⟩ diffusion");

    let st = Spin1ComponentState::from_array(&[0.3, 0.1, -0.4, 0.5, 0.6, 0.05, 0.02, 0.01, -0.03]);
    let (a, b) = spin1_component_coefficients(&st, 1.0, 0.0);
    assert_eq!(a[0], -0.4);
    assert_eq!(a[2], -0.3);
    assert!(b.iter().all(|&x| x == 0.0));
}

/// Random spin-1 state with `s = k = x = 0`, the invariant set that contains
/// the S_z eigenstates under this drive.
fn manifold_state(seed: u64) -> DensityMatrix {
    let rho = random_density(3, 1 + (seed as usize % 3), seed);
    let mut r = density_to_coherence(&rho, CoherenceModel::Gm8).unwrap();
    r.values[0] = 0.0; // s
    r.values[4] = 0.0; // k
    r.values[5] = 0.0; // x
    // shrink towards 𝕀/3
    for v in r.values.iter_mut() {
        *v *= 0.5;
    }
    qzeno::spin::coherence_to_density(&r, &SpinSystem::new(Spin::One)).unwrap()
}

#[test]
fn spin1_components_match_matrix_equation_on_rabi_manifold() {
    let (sys, ops) = operators(Spin::One, 0.7, 1.2);
    for seed in 0..20 {
        let rho = manifold_state(seed);
        let st = Spin1ComponentState::from_density(&rho, &sys);
        let (a, b) = spin1_component_coefficients(&st, 0.7, 1.2);
        let d = DensityMatrix(ops.drift(rho.matrix()));
        let n = DensityMatrix(ops.noise(rho.matrix(), 0));
        let da = Spin1ComponentState::from_density(&d, &sys).to_array();
        let na = Spin1ComponentState::from_density(&n, &sys).to_array();
        for i in 0..9 {
            assert_close(a[i], da[i], 1e-12, &format!("component drift {i}"));
            assert_close(b[i], na[i], 1e-12, &format!("component noise {i}"));
        }
    }
}

#[test]
fn spin1_component_reconstruction_round_trips_on_manifold() {
    let sys = SpinSystem::new(Spin::One);
    for seed in 0..10 {
        let rho = manifold_state(seed + 50);
        let back = Spin1ComponentState::from_density(&rho, &sys).to_density();
        assert!((back.0 - rho.0).max_abs() < 1e-12);
    }
}

#[test]
fn spin32_examples() {
    let mut top = [0.0; 15];
    top[2] = 1.0;
    top[11] = 1.0;
    top[14] = 1.0;
    let (a, b) = spin32_coherence_coefficients(&top, 0.0, 2.5);
    assert!(a.iter().chain(&b).all(|c| c.abs() <= 1e-12), "{a:?} {b:?}");
}

#[test]
fn spin32_coherence_matches_matrix_equation() {
    let (_, ops) = operators(Spin::ThreeHalves, 0.9, 1.4);
    for seed in 0..20 {
        let rho = random_density(4, 1 + (seed as usize % 4), seed);
        let (d, n) = projected(&ops, &rho, BasisKind::Su2xSu2, 1.0);
        let s = density_to_coherence(&rho, CoherenceModel::Su15).unwrap().values;
        let (a, b) = spin32_coherence_coefficients(&s.try_into().unwrap(), 0.9, 1.4);
        for i in 0..15 {
            assert_close(a[i], d[i], 1e-12, &format!("su15 drift {i}"));
            assert_close(b[i], n[i], 1e-12, &format!("su15 noise {i}"));
        }
    }
}

#[test]
fn eigenstates_are_fixed_points_of_every_model_without_drive() {
    let alpha = 1.7;
    for spin in Spin::ALL {
        let sys = SpinSystem::new(spin);
        for &m in &sys.sz_eigenvalues {
            let rho = DensityMatrix::eigenstate(&sys, m).unwrap();
            let coeffs: Vec<f64> = match spin {
                Spin::Half => {
                    let r = density_to_coherence(&rho, CoherenceModel::Bloch3).unwrap().values;
                    let (a, b) = bloch_coefficients([r[0], r[1], r[2]], 0.0, alpha);
                    let (c, d) = spin_half_component_coefficients([m, 0.0, 0.0], 0.0, alpha);
                    [a, b, c, d].concat()
                }
                Spin::One => {
                    let r = density_to_coherence(&rho, CoherenceModel::Gm8).unwrap().values;
                    let (a, b) = spin1_coherence_coefficients(&r.try_into().unwrap(), 0.0, alpha);
                    let st = Spin1ComponentState::from_density(&rho, &sys);
                    let (c, d) = spin1_component_coefficients(&st, 0.0, alpha);
                    [a.to_vec(), b.to_vec(), c.to_vec(), d.to_vec()].concat()
                }
                Spin::ThreeHalves => {
                    let s = density_to_coherence(&rho, CoherenceModel::Su15).unwrap().values;
                    let (a, b) = spin32_coherence_coefficients(&s.try_into().unwrap(), 0.0, alpha);
                    [a.to_vec(), b.to_vec()].concat()
                }
            };
            assert!(
                coeffs.iter().all(|c| c.abs() <= 1e-12),
                "spin {spin} m = {m}: {coeffs:?}"
            );
        }
    }
}

#[test]
fn rabi_angle_drift_matches_components_through_ito() {
    // d⟨Sz⟩ = −½ sinφ dφ − ¼ cosφ (dφ)² must equal the component equation.
    let (eps, alpha) = (1.0, 1.3);
    for phi in [0.2, 1.0, 2.5, 4.0] {
        let (a, b) = rabi_angle_coefficients(phi, eps, alpha);
        let drift = -0.5 * phi.sin() * a - 0.25 * phi.cos() * b * b;
        let noise = -0.5 * phi.sin() * b;
        let (ca, cb) = spin_half_component_coefficients(
            [0.5 * phi.cos(), 0.0, -0.5 * phi.sin()],
            eps,
            alpha,
        );
        assert_close(drift, ca[0], 1e-14, "Sz drift");
        assert_close(noise, cb[0], 1e-14, "Sz noise");
    }
}
