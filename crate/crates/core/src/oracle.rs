//! Independent numeric verification of the combinatorial attractor.
//!
//! Nothing here looks at cycles, walks or the random-walk operator: the spectrum of `E` comes
//! from a complex Schur decomposition, and each unit-modulus eigenspace from the numeric null
//! space of `E - λ`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c, operator_norm, norm_sqr, null_space, CMatrix, CVector, C64};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    /// Eigenvalues with `|λ| >= 1 - unit_circle_gap` count as unit modulus.
    pub unit_circle_gap: f64,
    /// Unit-circle eigenvalues closer than this are one cluster.
    pub cluster_tol: f64,
    /// Singular values at or below this span `ker(E - λ)`.
    pub null_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            unit_circle_gap: 1e-8,
            cluster_tol: 1e-6,
            null_tol: 1e-7,
        }
    }
}

/// One distinct eigenvalue on the unit circle.
#[derive(Clone, Debug)]
pub struct UnitEigenspace {
    pub eigenvalue: C64,
    pub algebraic: usize,
    pub geometric: usize,
    /// Orthonormal basis of `ker(E - λ)`.
    pub basis: CMatrix,
}

#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<C64>,
    pub unit_circle: Vec<usize>,
    pub r_max: f64,
    pub eigenspaces: Vec<UnitEigenspace>,
    /// Unit-circle clusters whose geometric multiplicity falls short of the algebraic one.
    pub defective_blocks: Vec<usize>,
    /// `||E - Q T Q^*||`.
    pub schur_residual: f64,
}

impl SpectrumReport {
    pub fn max_modulus(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Algebraic count of eigenvalues within `tol` of `target`.
    pub fn count_near(&self, target: C64, tol: f64) -> usize {
        self.eigenvalues.iter().filter(|z| (**z - target).norm() < tol).count()
    }

    /// Geometric multiplicity of the unit eigenvalue nearest `target` (0 if none).
    pub fn geometric_near(&self, target: C64, tol: f64) -> usize {
        self.eigenspaces
            .iter()
            .filter(|s| (s.eigenvalue - target).norm() < tol)
            .map(|s| s.geometric)
            .sum()
    }

    pub fn attractor_dim(&self) -> usize {
        self.eigenspaces.iter().map(|s| s.geometric).sum()
    }

    pub fn to_json(&self) -> SpectrumJson {
        SpectrumJson {
            eigenvalues: self
                .eigenvalues
                .iter()
                .map(|z| EigenvalueJson {
                    re: z.re,
                    im: z.im,
                    modulus: z.norm(),
                })
                .collect(),
            unit_circle: self.unit_circle.clone(),
            r_max: self.r_max,
            attractor_dim: self.attractor_dim(),
            defective_blocks: self.defective_blocks.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenvalueJson {
    pub re: f64,
    pub im: f64,
    pub modulus: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumJson {
    pub eigenvalues: Vec<EigenvalueJson>,
    pub unit_circle: Vec<usize>,
    pub r_max: f64,
    pub attractor_dim: usize,
    pub defective_blocks: Vec<usize>,
}

/// Complex Schur form `E = Q T Q^*`. The shifted QR iteration occasionally stalls on spectra
/// that are symmetric under rotation; `e^{iα} E` has the same Schur vectors and a different
/// shift sequence, so a few rotated attempts are made before giving up.
fn schur_with_retries(e: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    for k in 0..8 {
        let phase = C64::from_polar(1.0, 0.7 * k as f64);
        if let Some(schur) = nalgebra::linalg::Schur::try_new(e * phase, 1e-15, 10_000) {
            let (q, t) = schur.unpack();
            return Ok((q, t / phase));
        }
    }
    Err(Error::Eigensolver("Schur iteration did not converge".into()))
}

/// Full spectrum of `E` with unit-circle classification and eigenspaces.
pub fn numeric_spectrum(e: &CMatrix, config: &OracleConfig) -> Result<SpectrumReport> {
    let n = e.nrows();
    if e.ncols() != n {
        return Err(Error::Eigensolver("matrix is not square".into()));
    }
    if n == 0 {
        return Ok(SpectrumReport {
            eigenvalues: Vec::new(),
            unit_circle: Vec::new(),
            r_max: 0.0,
            eigenspaces: Vec::new(),
            defective_blocks: Vec::new(),
            schur_residual: 0.0,
        });
    }
    let (q, t) = schur_with_retries(e)?;
    let schur_residual = (&q * &t * q.adjoint() - e).norm();
    let lower: f64 = (0..n)
        .flat_map(|i| (0..i).map(move |j| (i, j)))
        .map(|(i, j)| t[(i, j)].norm())
        .fold(0.0, f64::max);
    let scale = e.norm().max(1.0);
    if schur_residual > 1e-10 * scale || lower > 1e-10 * scale {
        return Err(Error::Eigensolver(format!(
            "Schur form inaccurate (residual {schur_residual:.2e}, subdiagonal {lower:.2e})"
        )));
    }
    let eigenvalues: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();

    let unit_circle: Vec<usize> = (0..n)
        .filter(|&i| eigenvalues[i].norm() >= 1.0 - config.unit_circle_gap)
        .collect();
    let r_max = eigenvalues
        .iter()
        .map(|z| z.norm())
        .filter(|&m| m < 1.0 - config.unit_circle_gap)
        .fold(0.0, f64::max);

    // cluster unit-circle eigenvalues
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &i in &unit_circle {
        match clusters
            .iter_mut()
            .find(|cl| (eigenvalues[cl[0]] - eigenvalues[i]).norm() < config.cluster_tol)
        {
            Some(cl) => cl.push(i),
            None => clusters.push(vec![i]),
        }
    }
    let mut eigenspaces = Vec::with_capacity(clusters.len());
    let mut defective_blocks = Vec::new();
    for (k, cl) in clusters.iter().enumerate() {
        let mean = cl.iter().map(|&i| eigenvalues[i]).sum::<C64>() / c(cl.len() as f64, 0.0);
        let shifted = e - CMatrix::identity(n, n) * mean;
        let basis = null_space(&shifted, config.null_tol);
        let geometric = basis.ncols();
        if geometric < cl.len() {
            defective_blocks.push(k);
        }
        eigenspaces.push(UnitEigenspace {
            eigenvalue: mean,
            algebraic: cl.len(),
            geometric,
            basis,
        });
    }
    eigenspaces.sort_by(|a, b| {
        a.eigenvalue
            .arg()
            .partial_cmp(&b.eigenvalue.arg())
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    Ok(SpectrumReport {
        eigenvalues,
        unit_circle,
        r_max,
        eigenspaces,
        defective_blocks,
        schur_residual,
    })
}

/// Orthogonal projector onto the span of all unit-modulus eigenvectors. The union of the
/// per-eigenvalue bases is re-orthonormalized globally (SVD), so orthogonality between
/// eigenspaces is not assumed.
pub fn numeric_attractor_projector(e: &CMatrix, spectrum: &SpectrumReport) -> CMatrix {
    let n = e.nrows();
    let total: usize = spectrum.eigenspaces.iter().map(|s| s.basis.ncols()).sum();
    if total == 0 {
        return CMatrix::zeros(n, n);
    }
    let mut stacked = CMatrix::zeros(n, total);
    let mut col = 0;
    for s in &spectrum.eigenspaces {
        stacked.view_mut((0, col), (n, s.basis.ncols())).copy_from(&s.basis);
        col += s.basis.ncols();
    }
    let svd = stacked.svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let rank = svd.singular_values.iter().filter(|&&s| s > 1e-8).count();
    let q = u.columns(0, rank).into_owned();
    &q * q.adjoint()
}

/// `||P_1 - P_2||` in operator norm: the sine of the largest principal angle when both are
/// orthogonal projectors of equal rank.
pub fn subspace_distance(p1: &CMatrix, p2: &CMatrix) -> f64 {
    operator_norm(&(p1 - p2))
}

/// Survival probability as `||P phi_0||^2` with the numeric projector.
pub fn brute_force_survival(projector: &CMatrix, phi0: &CVector) -> f64 {
    norm_sqr(&(projector * phi0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::GraphSpec;
    use crate::operators::build_e;

    #[test]
    fn unitary_matrix_has_identity_projector() {
        let g0 = GraphSpec {
            vertices: 4,
            edges: vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)],
            loops: vec![1],
            sinks: vec![],
        }
        .internal()
        .unwrap();
        let e = build_e(&g0);
        let spectrum = numeric_spectrum(&e, &OracleConfig::default()).unwrap();
        assert_eq!(spectrum.unit_circle.len(), e.nrows());
        assert!(spectrum.defective_blocks.is_empty());
        let p = numeric_attractor_projector(&e, &spectrum);
        let id = CMatrix::identity(e.nrows(), e.nrows());
        assert!(subspace_distance(&p, &id) < 1e-9);
        assert_eq!(spectrum.r_max, 0.0);
    }

    #[test]
    fn distance_between_complementary_projectors() {
        let mut p = CMatrix::zeros(3, 3);
        p[(0, 0)] = c(1.0, 0.0);
        let q = CMatrix::identity(3, 3) - &p;
        assert!((subspace_distance(&p, &q) - 1.0).abs() < 1e-12);
        assert_eq!(subspace_distance(&p, &p), 0.0);
    }

    #[test]
    fn zero_state_has_zero_survival() {
        let p = CMatrix::identity(4, 4);
        assert_eq!(brute_force_survival(&p, &CVector::zeros(4)), 0.0);
    }
}
