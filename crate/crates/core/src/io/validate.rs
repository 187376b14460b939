use serde::Serialize;

use crate::error::SdeError;
use crate::sde::{
    lindblad_integrate, run_ensemble, run_trajectory, InitialState, KrausSet, ModelKind,
    ModelParams, NoiseSource, QsdOperators, RecordOptions, TrajectorySpec, WienerSource,
};
use crate::spin::{DensityMatrix, Spin, SpinSystem};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn passed(&self) -> bool {
        self.failed() == 0
    }
}

fn check(name: &str, result: Result<(bool, String), SdeError>) -> Check {
    let (passed, detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    Check {
        name: name.to_string(),
        passed,
        detail,
    }
}

fn spec(spin: Spin, model: ModelKind, eps: f64, alpha: f64, dt: f64, t: f64, init: InitialState) -> TrajectorySpec {
    TrajectorySpec {
        spin,
        model,
        params: ModelParams {
            epsilon: eps,
            alpha,
            dt,
            duration: t,
            seed: 11,
        },
        initial: init,
    }
}

fn fixed_points() -> Result<(bool, String), SdeError> {
    let mut worst = 0.0f64;
    for spin in Spin::ALL {
        let sys = SpinSystem::new(spin);
        for &m in &sys.sz_eigenvalues {
            for model in [ModelKind::Matrix, ModelKind::Kraus, ModelKind::Coherence] {
                let s = spec(spin, model, 0.0, 1.0, 1e-3, 0.05, InitialState::Eigenstate(m));
                let rec = run_trajectory(&s, 0, RecordOptions::with_stride(1))?;
                let first = rec.state(0).unwrap_or_default().to_vec();
                for i in 1..rec.len() {
                    let row = rec.state(i).unwrap_or_default();
                    for (a, b) in row.iter().zip(&first) {
                        worst = worst.max((a - b).abs());
                    }
                }
            }
        }
    }
    Ok((worst <= 1e-12, format!("largest drift {worst:.3e}")))
}

fn trace_preservation() -> Result<(bool, String), SdeError> {
    let sys = SpinSystem::new(Spin::One);
    let ops = QsdOperators::new(sys.sx, vec![sys.sz])?;
    let dt = 1e-4;
    let mut noise = WienerSource::new(3, 0, dt);
    let mut rho = DensityMatrix::eigenstate(&sys, -1.0)?;
    let mut worst = 0.0f64;
    for _ in 0..20_000 {
        let dw = [noise.increment()];
        rho = ops.step(rho.matrix(), dt, &dw)?.rho;
        worst = worst.max((rho.matrix().trace().re - 1.0).abs());
    }
    Ok((worst <= 1e-9, format!("max |Tr ρ − 1| = {worst:.3e}")))
}

fn kraus_positivity() -> Result<(bool, String), SdeError> {
    let sys = SpinSystem::new(Spin::ThreeHalves);
    let dt = 1e-4;
    let kraus = KrausSet::new(&sys.sx, &[sys.sz.scale(3.0)], dt)?;
    let mut noise = WienerSource::new(5, 0, dt);
    let mut rho = *DensityMatrix::maximally_mixed(4).matrix();
    let mut worst = f64::INFINITY;
    for _ in 0..10_000 {
        rho = kraus.step(&rho, noise.uniform())?.0;
        worst = worst.min(rho.hermitian_eigenvalues()[0]);
    }
    let residual = kraus.completeness_residual();
    Ok((
        worst >= -1e-8 && residual <= dt,
        format!("min eigenvalue {worst:.3e}, completeness residual {residual:.3e}"),
    ))
}

fn sup_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn pathwise_equivalence() -> Result<(bool, String), SdeError> {
    let run = |spin, model, m| {
        let s = spec(spin, model, 1.0, 1.0, 1e-4, 2.0, InitialState::Eigenstate(m));
        run_trajectory(&s, 0, RecordOptions::with_stride(100)).map(|r| r.sz())
    };
    let one = run(Spin::One, ModelKind::Matrix, -1.0)?;
    let g1 = sup_gap(&one, &run(Spin::One, ModelKind::Coherence, -1.0)?);
    let g2 = sup_gap(&one, &run(Spin::One, ModelKind::Components, -1.0)?);
    let three = run(Spin::ThreeHalves, ModelKind::Matrix, -1.5)?;
    let g3 = sup_gap(&three, &run(Spin::ThreeHalves, ModelKind::Coherence, -1.5)?);
    let worst = g1.max(g2).max(g3);
    Ok((
        worst <= 0.05,
        format!("sup gaps {g1:.2e} (spin 1 coherence), {g2:.2e} (spin 1 components), {g3:.2e} (spin 3/2)"),
    ))
}

fn lindblad_oracle() -> Result<(bool, String), SdeError> {
    let s = spec(
        Spin::Half,
        ModelKind::Matrix,
        1.0,
        1.0,
        1e-3,
        2.0,
        InitialState::Coherence(vec![0.6, 0.0, 0.8]),
    );
    let ens = run_ensemble(&s, 1000, RecordOptions::with_stride(100))?;
    let sys = SpinSystem::new(Spin::Half);
    let rho0 = ens.mean_density[0];
    let oracle = lindblad_integrate(&rho0, &sys, &sys.sx, &[sys.sz], 1e-3, 2.0, 100)?;
    let mut worst = 0.0f64;
    for (m, o) in ens.mean.iter().zip(&oracle.components) {
        worst = worst.max((m.sz - o.sz).abs()).max((m.sx - o.sx).abs());
    }
    Ok((worst <= 0.06, format!("largest mean deviation {worst:.3e}")))
}

fn free_circle() -> Result<(bool, String), SdeError> {
    let s = spec(Spin::One, ModelKind::Kraus, 1.0, 0.0, 1e-4, 10.0, InitialState::Eigenstate(-1.0));
    let rec = run_trajectory(&s, 0, RecordOptions::with_stride(100))?;
    let worst = rec
        .components
        .iter()
        .map(|c| (c.sy * c.sy + c.sz * c.sz - 1.0).abs())
        .fold(0.0, f64::max);
    Ok((worst <= 5e-3, format!("max radius² deviation {worst:.3e}")))
}

/// Fast invariant checks over all steppers.
pub fn validate() -> ValidationReport {
    ValidationReport {
        checks: vec![
            check("fixed-points", fixed_points()),
            check("trace-preservation", trace_preservation()),
            check("kraus-positivity", kraus_positivity()),
            check("pathwise-equivalence", pathwise_equivalence()),
            check("lindblad-oracle", lindblad_oracle()),
            check("free-precession-circle", free_circle()),
        ],
    }
}
