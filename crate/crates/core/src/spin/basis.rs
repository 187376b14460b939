use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::linalg::{CMat, I};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisKind {
    /// σ_x, σ_y, σ_z.
    Pauli,
    /// λ_1 … λ_8.
    GellMann,
    /// Σ_k = σ_i ⊗ σ_j, fifteen products excluding 𝕀⊗𝕀.
    Su2xSu2,
}

impl BasisKind {
    pub fn dim(self) -> usize {
        match self {
            BasisKind::Pauli => 2,
            BasisKind::GellMann => 3,
            BasisKind::Su2xSu2 => 4,
        }
    }

    pub fn len(self) -> usize {
        match self {
            BasisKind::Pauli => 3,
            BasisKind::GellMann => 8,
            BasisKind::Su2xSu2 => 15,
        }
    }
}

/// Traceless Hermitian generators with `Tr(G_i G_j) = normalization · δ_ij`.
#[derive(Debug, Clone)]
pub struct GeneratorBasis {
    pub kind: BasisKind,
    pub matrices: Vec<CMat>,
    pub normalization: f64,
}

pub fn pauli() -> [CMat; 3] {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    [
        CMat::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]),
        CMat::from_rows(&[&[c(0.0, 0.0), c(0.0, -1.0)], &[c(0.0, 1.0), c(0.0, 0.0)]]),
        CMat::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]),
    ]
}

fn gell_mann() -> Vec<CMat> {
    // Symmetric (off-diagonal real), antisymmetric (±i) pairs, then the two diagonals.
    let sym = |a: usize, b: usize| {
        let mut m = CMat::zeros(3);
        m[(a, b)] = Complex64::new(1.0, 0.0);
        m[(b, a)] = Complex64::new(1.0, 0.0);
        m
    };
    let asym = |a: usize, b: usize| {
        let mut m = CMat::zeros(3);
        m[(a, b)] = -I;
        m[(b, a)] = I;
        m
    };
    let r3 = 3f64.sqrt();
    vec![
        sym(0, 1),
        asym(0, 1),
        CMat::from_diagonal(&[1.0, -1.0, 0.0]),
        sym(0, 2),
        asym(0, 2),
        sym(1, 2),
        asym(1, 2),
        CMat::from_diagonal(&[1.0 / r3, 1.0 / r3, -2.0 / r3]),
    ]
}

fn su2_x_su2() -> Vec<CMat> {
    let [sx, sy, sz] = pauli();
    let id = CMat::identity(2);
    let factors = [id, sx, sy, sz];
    let mut out = Vec::with_capacity(15);
    // Σ_1..Σ_15 run over (a, b) ≠ (𝕀, 𝕀) with the left factor slowest.
    for (a, left) in factors.iter().enumerate() {
        for (b, right) in factors.iter().enumerate() {
            if a == 0 && b == 0 {
                continue;
            }
            out.push(left.kron(right));
        }
    }
    out
}

/// Shared, lazily built copy of each basis for hot paths.
pub(crate) fn cached_basis(kind: BasisKind) -> &'static GeneratorBasis {
    static CACHE: [OnceLock<GeneratorBasis>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let slot = match kind {
        BasisKind::Pauli => 0,
        BasisKind::GellMann => 1,
        BasisKind::Su2xSu2 => 2,
    };
    CACHE[slot].get_or_init(|| generator_basis(kind))
}

pub fn generator_basis(kind: BasisKind) -> GeneratorBasis {
    let (matrices, normalization) = match kind {
        BasisKind::Pauli => (pauli().to_vec(), 2.0),
        BasisKind::GellMann => (gell_mann(), 2.0),
        BasisKind::Su2xSu2 => (su2_x_su2(), 4.0),
    };
    GeneratorBasis {
        kind,
        matrices,
        normalization,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_8_matches_reference() {
        let b = generator_basis(BasisKind::GellMann);
        let r3 = 3f64.sqrt();
        let expected = CMat::from_diagonal(&[1.0, 1.0, -2.0]).scale(1.0 / r3);
        assert!((b.matrices[7] - expected).max_abs() < 1e-15);
    }

    #[test]
    fn sigma_15_is_sz_sz() {
        let b = generator_basis(BasisKind::Su2xSu2);
        assert_eq!(b.matrices[14], CMat::from_diagonal(&[1.0, -1.0, -1.0, 1.0]));
    }

    #[test]
    fn sigma_products_match_explicit_entries() {
        let b = generator_basis(BasisKind::Su2xSu2);
        let c = |re: f64, im: f64| Complex64::new(re, im);
        // Σ_6 = σx⊗σy, Σ_9 = σy⊗σx, Σ_11 = σy⊗σz
        assert_eq!(b.matrices[5][(0, 3)], c(0.0, -1.0));
        assert_eq!(b.matrices[5][(1, 2)], c(0.0, 1.0));
        assert_eq!(b.matrices[8][(0, 3)], c(0.0, -1.0));
        assert_eq!(b.matrices[8][(1, 2)], c(0.0, -1.0));
        assert_eq!(b.matrices[10][(1, 3)], c(0.0, 1.0));
        assert_eq!(b.matrices[9][(0, 3)], c(-1.0, 0.0));
        assert_eq!(b.matrices[12][(2, 3)], c(-1.0, 0.0));
    }

    #[test]
    fn generators_hermitian_traceless_orthogonal() {
        for kind in [BasisKind::Pauli, BasisKind::GellMann, BasisKind::Su2xSu2] {
            let b = generator_basis(kind);
            assert_eq!(b.matrices.len(), kind.len());
            for (i, gi) in b.matrices.iter().enumerate() {
                assert_eq!(gi.dim(), kind.dim());
                assert!(gi.hermiticity_deviation() <= 1e-12);
                assert!(gi.trace().norm() <= 1e-12);
                for (j, gj) in b.matrices.iter().enumerate() {
                    let t = gi.trace_product(gj);
                    let want = if i == j { b.normalization } else { 0.0 };
                    assert!((t - Complex64::new(want, 0.0)).norm() <= 1e-12, "{kind:?} {i} {j}");
                }
            }
        }
    }
}
