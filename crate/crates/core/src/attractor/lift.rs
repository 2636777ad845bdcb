//! Interior-supported eigenvectors of `T` and their lifts to eigenvectors of `E`.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::graph::InternalGraph;
use crate::linalg::{c, null_space, CVector, C64};
use crate::operators::{apply_d1_adjoint, apply_flip};

/// Eigenvalues of `T` closer than this are one eigenspace.
const MU_CLUSTER_TOL: f64 = 1e-9;
/// Singular-value threshold for the boundary-vanishing intersection.
const SUPPORT_RANK_TOL: f64 = 1e-9;
/// `|mu|` at or above this is treated as `±1`.
const UNIT_MU: f64 = 1.0 - 1e-9;

/// An eigenspace of `T` restricted to vectors vanishing on the boundary.
#[derive(Clone, Debug)]
pub struct InteriorEigenspace {
    pub mu: f64,
    /// Orthonormal real columns.
    pub vectors: DMatrix<f64>,
}

impl InteriorEigenspace {
    pub fn dim(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn vector(&self, k: usize) -> CVector {
        self.vectors.column(k).map(|x| c(x, 0.0))
    }

    pub fn is_unit(&self) -> bool {
        self.mu.abs() >= UNIT_MU
    }
}

/// `φ_± = (1 - λ_± S) d_1^* f` for `T f = μ f`, `λ_± = μ ± i sqrt(1 - μ²)`.
#[derive(Clone, Debug)]
pub struct LiftedEigenpair {
    pub f: CVector,
    pub mu: f64,
    pub theta: f64,
    pub phi_plus: CVector,
    pub phi_minus: CVector,
}

impl LiftedEigenpair {
    pub fn lambda_plus(&self) -> C64 {
        C64::from_polar(1.0, self.theta)
    }

    pub fn lambda_minus(&self) -> C64 {
        C64::from_polar(1.0, -self.theta)
    }
}

/// Eigenspaces of the symmetric matrix `t` intersected with `{f : f|boundary = 0}`, sorted by
/// decreasing `mu`. Empty intersections are dropped. Eigenvalues `±1` are kept; they only
/// occur when the boundary is empty and are handled separately by the caller.
pub fn interior_dirichlet_eigenpairs(t: &DMatrix<f64>, boundary: &[usize]) -> Vec<InteriorEigenspace> {
    let n = t.nrows();
    if n == 0 {
        return Vec::new();
    }
    let eigen = SymmetricEigen::new(t.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eigen.eigenvalues[j].total_cmp(&eigen.eigenvalues[i]));

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match clusters.last_mut() {
            Some(cl) if (eigen.eigenvalues[cl[0]] - eigen.eigenvalues[i]).abs() < MU_CLUSTER_TOL => cl.push(i),
            _ => clusters.push(vec![i]),
        }
    }

    let mut out = Vec::new();
    for cl in clusters {
        let mu = cl.iter().map(|&i| eigen.eigenvalues[i]).sum::<f64>() / cl.len() as f64;
        let space = DMatrix::from_fn(n, cl.len(), |r, k| eigen.eigenvectors[(r, cl[k])]);
        let rows = DMatrix::from_fn(boundary.len(), cl.len(), |r, k| space[(boundary[r], k)]);
        let coeffs = null_space(&rows, SUPPORT_RANK_TOL);
        if coeffs.ncols() == 0 {
            continue;
        }
        let mut vectors = &space * coeffs;
        for mut col in vectors.column_iter_mut() {
            // fix the sign so that the first significant entry is positive
            if let Some(x) = col.iter().copied().find(|x| x.abs() > 1e-12) {
                if x < 0.0 {
                    col.neg_mut();
                }
            }
            for &b in boundary {
                col[b] = 0.0;
            }
        }
        out.push(InteriorEigenspace {
            mu: mu.clamp(-1.0, 1.0),
            vectors,
        });
    }
    out
}

/// Interior eigenspaces of `T` for the given internal graph.
pub fn interior_eigenspaces(g0: &InternalGraph) -> Vec<InteriorEigenspace> {
    let boundary: Vec<usize> = g0.boundary().iter().map(|v| v.0).collect();
    interior_dirichlet_eigenpairs(&crate::operators::build_t(g0), &boundary)
}

pub fn lift(g0: &InternalGraph, f: &CVector, mu: f64) -> Result<LiftedEigenpair> {
    if mu.abs() >= 1.0 {
        return Err(Error::InvalidState(format!("lift needs |mu| < 1, got {mu}")));
    }
    let theta = mu.acos();
    let base = apply_d1_adjoint(g0, f)?;
    let flipped = apply_flip(g0.graph(), &base)?;
    let lambda_plus = C64::from_polar(1.0, theta);
    let lambda_minus = lambda_plus.conj();
    let phi_plus = &base - &flipped * lambda_plus;
    let phi_minus = &base - &flipped * lambda_minus;
    let scale = f.norm().max(f64::MIN_POSITIVE);
    if phi_plus.norm() <= 1e-10 * scale || phi_minus.norm() <= 1e-10 * scale {
        return Err(Error::ZeroLift { mu });
    }
    Ok(LiftedEigenpair {
        f: f.clone(),
        mu,
        theta,
        phi_plus,
        phi_minus,
    })
}
