mod common;

use std::f64::consts::{PI, TAU};

use common::assert_close;
use proptest::prelude::*;
use qzeno::analysis::*;
use qzeno::error::AnalysisError;
use qzeno::sde::{
    run_ensemble_records, run_trajectory, InitialState, ModelKind, ModelParams, RecordOptions,
    TrajectorySpec,
};
use qzeno::spin::{Spin, SpinSystem};

fn grid(n: usize, dt: f64) -> Vec<f64> {
    (0..n).map(|i| i as f64 * dt).collect()
}

fn spin1_spec() -> VicinitySpec {
    VicinitySpec::for_system(&SpinSystem::new(Spin::One))
}

#[test]
fn vicinities_must_not_overlap() {
    assert!(VicinitySpec::new(vec![0.5, -0.5], 0.1).is_ok());
    assert!(matches!(
        VicinitySpec::new(vec![0.5, -0.5], 0.5),
        Err(AnalysisError::OverlappingVicinities { .. })
    ));
}

#[test]
fn empty_series_is_an_error() {
    let spec = spin1_spec();
    assert!(matches!(
        residence_probabilities(&[], &spec),
        Err(AnalysisError::EmptyTrajectory)
    ));
    assert!(matches!(
        mean_return_times(&[], &[], &spec),
        Err(AnalysisError::EmptyTrajectory)
    ));
    assert!(matches!(
        angle_pdf(&[], 100, 0.1, 1.0, 0.0),
        Err(AnalysisError::NoInput)
    ));
    assert!(matches!(
        mean_rabi_rate(&[0.0], &[0.0]),
        Err(AnalysisError::ZeroDuration)
    ));
}

#[test]
fn square_wave_between_two_levels() {
    // +1/2 on [0, 5), −1/2 on [5, 10), repeated for 4 periods.
    let dt = 0.01;
    let times = grid(4000, dt);
    let sz: Vec<f64> = times
        .iter()
        .map(|t| if (t / 5.0).floor() as i64 % 2 == 0 { 0.5 } else { -0.5 })
        .collect();
    let spec = VicinitySpec::new(vec![0.5, -0.5], 0.1).unwrap();
    let res = residence_probabilities(&sz, &spec).unwrap();
    assert_close(res[0].probability, 0.5, 1e-3, "P(+1/2)");
    assert_close(res[1].probability, 0.5, 1e-3, "P(-1/2)");
    let rt = mean_return_times(&times, &sz, &spec).unwrap();
    assert_close(rt[0].mean.unwrap(), 5.0, 0.02, "return to +1/2");
    assert_eq!(rt[0].count, 3);
    assert_close(rt[1].mean.unwrap(), 5.0, 0.02, "return to -1/2");
    assert_eq!(rt[1].count, 3);
}

#[test]
fn unarmed_and_open_episodes_are_discarded() {
    let spec = VicinitySpec::new(vec![0.5, -0.5], 0.1).unwrap();
    // Leaves +1/2 to 0 and comes back without visiting −1/2, then leaves for good.
    let sz = [0.5, 0.0, 0.5, 0.0, -0.5, 0.0];
    let times = grid(sz.len(), 1.0);
    let ep = return_episodes(&times, &sz, &spec).unwrap();
    assert_eq!(ep[0].exits, 2);
    assert_eq!(ep[0].unarmed, 1);
    assert!(ep[0].durations.is_empty());
    let rt = mean_return_times(&times, &sz, &spec).unwrap();
    assert_eq!(rt[0].count, 0);
    assert_eq!(rt[0].mean, None);
}

#[test]
fn arming_at_the_exit_sample_counts() {
    let spec = VicinitySpec::new(vec![0.5, -0.5], 0.1).unwrap();
    let sz = [0.5, -0.5, 0.5];
    let rt = mean_return_times(&grid(3, 0.5), &sz, &spec).unwrap();
    assert_eq!(rt[0].count, 1);
    assert_close(rt[0].mean.unwrap(), 0.5, 1e-15, "single hop");
}

#[test]
fn free_precession_circle_for_spin_one() {
    // ⟨S_z⟩ = cos t for the m = +1 start with no measurement.
    let dt = 1e-4;
    let times = grid((200.0 * TAU / dt) as usize, dt);
    let sz: Vec<f64> = times.iter().map(|t| t.cos()).collect();
    let spec = spin1_spec();
    let res = residence_probabilities(&sz, &spec).unwrap();
    assert_close(res[0].probability, 0.1436, 1e-3, "P(+1)");
    assert_close(res[1].probability, 0.0638, 1e-3, "P(0)");
    assert_close(res[2].probability, 0.1436, 1e-3, "P(-1)");
    let rt = mean_return_times(&times, &sz, &spec).unwrap();
    assert_close(rt[0].mean.unwrap(), 5.381, 1e-3, "return to +1");
}

#[test]
fn simulated_precession_matches_the_circle() {
    let spec = TrajectorySpec {
        spin: Spin::One,
        model: ModelKind::Kraus,
        params: ModelParams {
            epsilon: 1.0,
            alpha: 0.0,
            dt: 1e-3,
            duration: 20.0 * TAU,
            seed: 1,
        },
        initial: InitialState::Eigenstate(1.0),
    };
    let rec = run_trajectory(&spec, 0, RecordOptions::with_stride(1)).unwrap();
    let vspec = spin1_spec();
    let res = residence_probabilities(&rec.sz(), &vspec).unwrap();
    assert_close(res[0].probability, 0.1436, 2e-3, "P(+1)");
    assert_close(res[1].probability, 0.0638, 2e-3, "P(0)");
    let rt = mean_return_times(&rec.times, &rec.sz(), &vspec).unwrap();
    assert_close(rt[0].mean.unwrap(), 5.381, 5e-3, "return to +1");
}

#[test]
fn angle_pdf_is_normalized_and_uniform_for_uniform_rotation() {
    let phi: Vec<f64> = grid(100_000, 1e-3).iter().map(|t| t * 1.0).collect();
    let pdf = angle_pdf(&[&phi], 100, 0.1, 1.0, 0.0).unwrap();
    assert_eq!(pdf.edges.len(), 101);
    assert_close(pdf.integral(), 1.0, 1e-12, "integral");
    for p in &pdf.density {
        assert_close(*p, 1.0 / TAU, 0.05 / TAU, "density");
    }
    assert!(chi_square_uniform(&pdf.counts).p_value > 0.05);
    assert!(pdf.reference.iter().all(|r| (r - 1.0 / TAU).abs() < 1e-15));
}

#[test]
fn angle_pdf_wraps_negative_angles() {
    let phi = [-0.01, -TAU - 0.01, 0.01];
    let pdf = angle_pdf(&[&phi], 10, 0.0, 1.0, 0.0).unwrap();
    assert_eq!(pdf.counts[9], 2);
    assert_eq!(pdf.counts[0], 1);
    assert!(matches!(
        angle_pdf(&[&phi], 4, 0.0, 1.0, 0.0),
        Err(AnalysisError::TooFewBins { .. })
    ));
}

#[test]
fn reference_density_and_modes() {
    // Sample exactly proportional to 1 + 0.5 sin 2φ on a fine grid.
    let n = 200_000;
    let phi: Vec<f64> = (0..n)
        .map(|i| {
            let u = (i as f64 + 0.5) / n as f64;
            // invert the CDF by bisection
            let cdf = |x: f64| (x + 0.25 * (1.0 - (2.0 * x).cos())) / TAU;
            let (mut lo, mut hi) = (0.0, TAU);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if cdf(mid) < u {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        })
        .collect();
    let alpha = (0.5f64 * 4.0 / 3.0).sqrt();
    let pdf = angle_pdf(&[&phi], 100, 0.0, 1.0, alpha).unwrap();
    for (p, r) in pdf.density.iter().zip(&pdf.reference) {
        assert_close(*p, *r, 2e-3, "density vs reference");
    }
    assert!(pdf.sin2_correlation() > 0.99);
    let (a, b) = pdf.two_modes();
    let near = |x: f64, y: f64| circular_distance(x, y) < 0.1;
    assert!(near(a, PI / 4.0) || near(a, 5.0 * PI / 4.0));
    assert!(near(b, PI / 4.0) || near(b, 5.0 * PI / 4.0));
    assert!(circular_distance(a, b) > 3.0);
    assert_close(pdf.mass_near(0.0, PI), 1.0, 1e-12, "whole circle");
}

#[test]
fn stationarity_detects_drift() {
    let steady: Vec<f64> = grid(50_000, 0.01).to_vec();
    assert!(stationarity_check(&[&steady], 50, 0.1).unwrap().p_value > 0.05);
    // Second half stuck near zero.
    let drifting: Vec<f64> = (0..50_000)
        .map(|i| if i < 25_000 { i as f64 * 0.01 } else { 0.1 })
        .collect();
    assert!(stationarity_check(&[&drifting], 50, 0.0).unwrap().p_value < 1e-6);
}

#[test]
fn occupancy_counts_and_bounds() {
    let occ = occupancy_2d(&[0.0, 1.0, -1.0, 2.0], &[0.0, 1.0, -1.0, 0.0], 51, 1.0);
    assert_eq!(occ.total(), 4);
    assert_eq!(occ.outside, 1);
    assert_eq!(occ.counts[25 * 51 + 25], 1);
    assert_eq!(occ.counts[50 * 51 + 50], 1);
    assert_eq!(occ.counts[0], 1);
    assert_close(occ.fraction_where(|y, z| y * y + z * z < 0.01), 0.25, 1e-15, "centre");
}

#[test]
fn rabi_rate_of_linear_ramp() {
    let times = grid(1001, 0.01);
    let phi: Vec<f64> = times.iter().map(|t| 0.7 * t + 0.3).collect();
    let r = mean_rabi_rate(&times, &phi).unwrap();
    assert_close(r.rate, 0.7, 1e-12, "rate");
    assert!(r.stderr < 1e-12);
    assert_eq!(mean_rabi_rate(&times, &phi).unwrap(), r);
}

#[test]
fn summary_pools_rabi_angle_records() {
    let spec = TrajectorySpec {
        spin: Spin::Half,
        model: ModelKind::RabiAngle,
        params: ModelParams {
            epsilon: 1.0,
            alpha: 0.5,
            dt: 1e-3,
            duration: 50.0,
            seed: 3,
        },
        initial: InitialState::UniformAngle,
    };
    let recs = run_ensemble_records(&spec, 8, RecordOptions::with_stride(10)).unwrap();
    let s = summarize(&recs, &SummaryOptions::default()).unwrap();
    assert_eq!(s.n_trajectories, 8);
    assert_eq!(s.residence.len(), 2);
    assert_eq!(s.occupancy.total() as usize, s.n_samples);
    let angle = s.angle.as_ref().unwrap();
    assert_close(angle.pdf.integral(), 1.0, 1e-12, "pdf integral");
    let rate = s.rabi_rate.unwrap();
    assert!(rate.rate > 0.8 && rate.rate < 1.2, "{rate:?}");
    let json = serde_json::to_string(&s).unwrap();
    let back: AnalysisSummary = serde_json::from_str(&json).unwrap();
    assert_eq!(back.n_samples, s.n_samples);
    assert!(matches!(
        summarize(&[], &SummaryOptions::default()),
        Err(AnalysisError::NoInput)
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn residences_are_probabilities(sz in prop::collection::vec(-1.2f64..1.2, 1..400)) {
        let res = residence_probabilities(&sz, &spin1_spec()).unwrap();
        let total: f64 = res.iter().map(|r| r.probability).sum();
        prop_assert!(res.iter().all(|r| (0.0..=1.0).contains(&r.probability)));
        prop_assert!(total <= 1.0 + 1e-12);
    }

    #[test]
    fn completed_returns_never_exceed_exits(sz in prop::collection::vec(-1.2f64..1.2, 1..400)) {
        let times = grid(sz.len(), 0.1);
        let spec = spin1_spec();
        let ep = return_episodes(&times, &sz, &spec).unwrap();
        for e in &ep {
            prop_assert!(e.durations.len() + e.unarmed <= e.exits);
            prop_assert!(e.durations.iter().all(|d| *d > 0.0));
        }
    }

    #[test]
    fn pdf_always_integrates_to_one(phi in prop::collection::vec(-20.0f64..20.0, 1..300)) {
        let pdf = angle_pdf(&[&phi], 100, 0.0, 1.0, 0.3).unwrap();
        prop_assert!((pdf.integral() - 1.0).abs() < 1e-12);
        prop_assert_eq!(pdf.n_samples as usize, phi.len());
    }
}
