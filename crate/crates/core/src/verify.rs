//! Cross-checks of every construction on one graph against the numeric oracle and direct
//! simulation.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::attractor::{attractor_basis, dimension_report, eigen_residual, survival_spectral, DimensionReport};
use crate::cycles::{fundamental_cycle_basis, CaseLabel};
use crate::dynamics::{random_walk_survival, survival_sequence, tail_stationary_state};
use crate::error::{Error, Result};
use crate::format::GraphSpec;
use crate::graph::{InternalGraph, SymmetricDigraph};
use crate::linalg::{c, max_abs, CMatrix, CVector, C64};
use crate::operators::{build_e, build_t, check_chain_condition, delta, grover_matrix};
use crate::oracle::{brute_force_survival, numeric_attractor_projector, numeric_spectrum, subspace_distance, OracleConfig};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub unitarity: f64,
    pub chain: f64,
    pub spectral_radius: f64,
    pub eigen_residual: f64,
    pub projector_distance: f64,
    pub projector_algebra: f64,
    pub survival: f64,
    pub accounting: f64,
    pub kirchhoff: f64,
    pub fixed_point: f64,
    pub random_walk: f64,
    /// Survival probabilities above this count as positive.
    pub positive_survival: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            unitarity: 1e-12,
            chain: 1e-12,
            spectral_radius: 1e-10,
            eigen_residual: 1e-10,
            projector_distance: 1e-8,
            projector_algebra: 1e-10,
            survival: 1e-8,
            accounting: 1e-10,
            kirchhoff: 1e-12,
            fixed_point: 1e-10,
            random_walk: 1e-6,
            positive_survival: 1e-10,
        }
    }
}

impl Tolerances {
    pub const KEYS: [&'static str; 12] = [
        "unitarity",
        "chain",
        "spectral_radius",
        "eigen_residual",
        "projector_distance",
        "projector_algebra",
        "survival",
        "accounting",
        "kirchhoff",
        "fixed_point",
        "random_walk",
        "positive_survival",
    ];

    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidState(format!("tolerance {key} must be positive, got {value}")));
        }
        let slot = match key {
            "unitarity" => &mut self.unitarity,
            "chain" => &mut self.chain,
            "spectral_radius" => &mut self.spectral_radius,
            "eigen_residual" => &mut self.eigen_residual,
            "projector_distance" => &mut self.projector_distance,
            "projector_algebra" => &mut self.projector_algebra,
            "survival" => &mut self.survival,
            "accounting" => &mut self.accounting,
            "kirchhoff" => &mut self.kirchhoff,
            "fixed_point" => &mut self.fixed_point,
            "random_walk" => &mut self.random_walk,
            "positive_survival" => &mut self.positive_survival,
            other => {
                return Err(Error::InvalidState(format!(
                    "unknown tolerance `{other}` (known: {})",
                    Self::KEYS.join(", ")
                )))
            }
        };
        *slot = value;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Length of the simulated run used for norm accounting.
    pub steps: usize,
    /// Seeds the random initial state and inflows.
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { steps: 200, seed: 0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RandomWalkCheck {
    /// Spectral radius of the absorbing transition matrix.
    pub spectral_radius: f64,
    /// Step at which the spectral estimate guarantees `random_walk` tolerance.
    pub horizon: usize,
    /// Remaining mass at `horizon` from the uniform start.
    pub survival: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct KirchhoffCheck {
    pub tails: usize,
    /// Largest current for equal inflows.
    pub equal_current: f64,
    /// Largest deviation of `ψ_∞` from the common inflow.
    pub equal_spread: f64,
    /// Worst Kirchhoff-law residual for random inflows.
    pub laws: f64,
    pub fixed_point: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphCheck {
    pub name: String,
    pub spec: GraphSpec,
    pub case: CaseLabel,
    pub internal_vertices: usize,
    pub internal_arcs: usize,
    pub is_tree: bool,
    pub dims: DimensionReport,
    pub unitarity: f64,
    pub chain: f64,
    pub spectral_radius: f64,
    pub defective_blocks: usize,
    pub eigen_residual: f64,
    pub projector_distance: f64,
    pub projector_algebra: f64,
    /// `max |γ_spectral - γ_numeric|` over delta states and one random state.
    pub survival_gap: f64,
    /// `max_a γ(δ_a)`.
    pub max_delta_survival: f64,
    pub accounting: f64,
    pub random_walk: Option<RandomWalkCheck>,
    pub kirchhoff: Option<KirchhoffCheck>,
    pub failures: Vec<String>,
}

impl GraphCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `max |(U^* U - I)_{ij}|` together with the norm change on one random vector.
pub fn unitarity_defect(graph: &SymmetricDigraph, rng: &mut impl Rng) -> f64 {
    let u = grover_matrix(graph);
    let n = u.nrows();
    let gram = u.adjoint() * &u - CMatrix::identity(n, n);
    let psi = random_state(n, rng);
    let norm_change = ((&u * &psi).norm() - psi.norm()).abs();
    gram.iter().map(|z| z.norm()).fold(norm_change, f64::max)
}

/// Normalized complex vector with uniform entries in the unit square.
pub fn random_state(n: usize, rng: &mut impl Rng) -> CVector {
    let v = CVector::from_fn(n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let norm = v.norm();
    if norm == 0.0 {
        v
    } else {
        v / c(norm, 0.0)
    }
}

/// Random-walk survival at the step where `sqrt(|V_0| d_max / d_min) ρ^n` drops below `tol`.
pub fn random_walk_check(g0: &InternalGraph, tol: f64) -> Result<Option<RandomWalkCheck>> {
    if g0.sinks().is_empty() {
        return Ok(None);
    }
    // P' is similar to the symmetric T, which has a reliable eigensolver
    let rho = build_t(g0).symmetric_eigenvalues().amax();
    let n = g0.vertex_count();
    let degrees: Vec<f64> = g0.graph().vertices().map(|v| g0.ambient_degree(v) as f64).collect();
    let dmax = degrees.iter().copied().fold(0.0, f64::max);
    let dmin = degrees.iter().copied().fold(f64::INFINITY, f64::min);
    let prefactor = (n as f64 * dmax / dmin).sqrt();
    let horizon = if rho == 0.0 {
        1
    } else {
        ((tol / (2.0 * prefactor)).ln() / rho.ln()).ceil().max(1.0) as usize
    };
    let p0 = DVector::from_element(n, 1.0 / n as f64);
    let survival = random_walk_survival(g0, &p0, horizon)?[horizon];
    Ok(Some(RandomWalkCheck {
        spectral_radius: rho,
        horizon,
        survival,
    }))
}

pub fn verify_graph(name: &str, spec: &GraphSpec, tol: &Tolerances, options: &VerifyOptions) -> Result<GraphCheck> {
    let g0 = spec.internal()?;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let e = build_e(&g0);
    let n = e.nrows();

    let unitarity = unitarity_defect(g0.ambient(), &mut rng);
    let cycles = fundamental_cycle_basis(&g0);
    let chain = check_chain_condition(&g0, &cycles);

    let spectrum = numeric_spectrum(&e, &OracleConfig::default())?;
    let basis = attractor_basis(&g0)?;
    let dims = dimension_report(&g0, &basis, &spectrum);
    let numeric = numeric_attractor_projector(&e, &spectrum);
    let p = &basis.projector;
    let projector_distance = subspace_distance(p, &numeric);
    let projector_algebra = [
        (p * p - p).norm(),
        (p.adjoint() - p).norm(),
        (&e * p - p * &e).norm(),
    ]
    .into_iter()
    .fold(0.0, f64::max);

    let mut survival_gap: f64 = 0.0;
    let mut max_delta_survival: f64 = 0.0;
    for a in g0.graph().arcs() {
        let phi = delta(n, a);
        let spectral = survival_spectral(&basis, &phi)?.gamma;
        survival_gap = survival_gap.max((spectral - brute_force_survival(&numeric, &phi)).abs());
        max_delta_survival = max_delta_survival.max(spectral);
    }
    let phi0 = random_state(n, &mut rng);
    let spectral = survival_spectral(&basis, &phi0)?.gamma;
    survival_gap = survival_gap.max((spectral - brute_force_survival(&numeric, &phi0)).abs());
    let accounting = survival_sequence(&g0, &phi0, options.steps)?.accounting_residual;

    let random_walk = random_walk_check(&g0, tol.random_walk)?;
    let kirchhoff = if g0.sink_arcs().is_empty() {
        None
    } else {
        let tails = g0.sink_arcs().len();
        let alpha = c(1.0, 0.5);
        let equal = tail_stationary_state(&g0, &vec![alpha; tails])?;
        let alphas: Vec<C64> = (0..tails)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let random = tail_stationary_state(&g0, &alphas)?;
        let r = random.residuals;
        Some(KirchhoffCheck {
            tails,
            equal_current: max_abs(&equal.current),
            equal_spread: equal.psi_inf.iter().map(|z| (z - alpha).norm()).fold(0.0, f64::max),
            laws: [r.current_law, r.voltage_law, r.antisymmetry, r.boundary]
                .into_iter()
                .fold(0.0, f64::max),
            fixed_point: r.fixed_point.max(equal.residuals.fixed_point),
        })
    };

    let is_tree = cycles.is_empty();
    let mut check = GraphCheck {
        name: name.to_string(),
        spec: spec.clone(),
        case: basis.case,
        internal_vertices: g0.vertex_count(),
        internal_arcs: n,
        is_tree,
        dims,
        unitarity,
        chain,
        spectral_radius: spectrum.max_modulus(),
        defective_blocks: spectrum.defective_blocks.len(),
        eigen_residual: eigen_residual(&g0, &basis),
        projector_distance,
        projector_algebra,
        survival_gap,
        max_delta_survival,
        accounting,
        random_walk,
        kirchhoff,
        failures: Vec::new(),
    };
    check.failures = failures(&check, &g0, tol);
    Ok(check)
}

fn failures(check: &GraphCheck, g0: &InternalGraph, tol: &Tolerances) -> Vec<String> {
    let mut out = Vec::new();
    let mut require = |ok: bool, what: String| {
        if !ok {
            out.push(what);
        }
    };
    require(check.unitarity <= tol.unitarity, format!("unitarity defect {:.3e}", check.unitarity));
    require(check.chain <= tol.chain, format!("chain condition {:.3e}", check.chain));
    require(
        check.spectral_radius <= 1.0 + tol.spectral_radius,
        format!("spectral radius {:.15}", check.spectral_radius),
    );
    require(check.defective_blocks == 0, format!("{} defective unit eigenvalues", check.defective_blocks));
    require(
        check.eigen_residual <= tol.eigen_residual,
        format!("eigenvector residual {:.3e}", check.eigen_residual),
    );
    require(check.dims.matches(), format!("dimension mismatch {:?}", check.dims));
    require(
        check.projector_distance <= tol.projector_distance,
        format!("projector distance {:.3e}", check.projector_distance),
    );
    require(
        check.projector_algebra <= tol.projector_algebra,
        format!("projector algebra {:.3e}", check.projector_algebra),
    );
    require(check.survival_gap <= tol.survival, format!("survival gap {:.3e}", check.survival_gap));
    require(check.accounting <= tol.accounting, format!("norm accounting {:.3e}", check.accounting));
    let loops = g0.graph().loops().len();
    let sinked = !g0.sinks().is_empty();
    if sinked && (!check.is_tree || loops >= 2) {
        require(
            check.max_delta_survival > tol.positive_survival,
            format!("no delta state survives ({:.3e})", check.max_delta_survival),
        );
    }
    if sinked && check.is_tree && loops == 0 {
        require(
            check.dims.constructed_plus == 0 && check.dims.constructed_minus == 0,
            "loop-free tree with a ±1 eigenvector".to_string(),
        );
    }
    if let Some(rw) = &check.random_walk {
        require(
            rw.spectral_radius < 1.0 && rw.survival <= tol.random_walk,
            format!("random walk survives ({:.3e} at step {})", rw.survival, rw.horizon),
        );
    }
    if let Some(k) = &check.kirchhoff {
        require(
            k.equal_current <= tol.kirchhoff && k.equal_spread <= tol.kirchhoff,
            format!("equal inflow current {:.3e}", k.equal_current.max(k.equal_spread)),
        );
        require(k.laws <= tol.kirchhoff, format!("Kirchhoff residual {:.3e}", k.laws));
        require(k.fixed_point <= tol.fixed_point, format!("tail fixed point {:.3e}", k.fixed_point));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_passes() {
        let spec = GraphSpec {
            vertices: 6,
            edges: vec![(0, 1), (1, 2), (2, 3), (3, 0), (1, 4), (3, 5)],
            loops: vec![0, 2],
            sinks: vec![4, 5],
        };
        let check = verify_graph("square", &spec, &Tolerances::default(), &VerifyOptions::default()).unwrap();
        assert!(check.passed(), "{:?}", check.failures);
        assert!(check.max_delta_survival > 0.5);
        assert_eq!(check.kirchhoff.as_ref().unwrap().tails, 2);
    }

    #[test]
    fn tolerance_overrides() {
        let mut tol = Tolerances::default();
        tol.set("survival", 1e-6).unwrap();
        assert_eq!(tol.survival, 1e-6);
        assert!(tol.set("nonsense", 1.0).is_err());
        assert!(tol.set("chain", -1.0).is_err());
    }

    #[test]
    fn a_tight_tolerance_is_reported() {
        let spec = GraphSpec {
            vertices: 4,
            edges: vec![(0, 1), (1, 2), (2, 0), (2, 3)],
            loops: vec![],
            sinks: vec![3],
        };
        let mut tol = Tolerances::default();
        tol.set("accounting", 1e-300).unwrap();
        let check = verify_graph("triangle", &spec, &tol, &VerifyOptions::default()).unwrap();
        assert!(check.failures.iter().any(|f| f.starts_with("norm accounting")), "{:?}", check.failures);
    }
}
