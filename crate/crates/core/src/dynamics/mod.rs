//! Time evolution with sinks, the random-walk baseline and convergence bookkeeping.

pub mod kirchhoff;

use nalgebra::DVector;
use serde::Serialize;

use crate::attractor::AttractorBasis;
use crate::error::{Error, Result};
use crate::graph::{ArcId, InternalGraph};
use crate::linalg::{norm_sqr, CVector, C64, ZERO};
use crate::operators::{apply_grover, dirichlet_transition};
use crate::oracle::SpectrumReport;

pub use kirchhoff::{tail_stationary_state, TailState};

/// One step of the walk with sinks: `U_G` on the full arc space, then truncation to `A_0`.
/// Returns the new state and the probability that left through arcs into the sinks.
pub fn step_with_sinks(g0: &InternalGraph, psi: &CVector) -> Result<(CVector, f64)> {
    if psi.len() != g0.arc_count() {
        return Err(Error::DomainMismatch {
            expected: g0.arc_count(),
            found: psi.len(),
        });
    }
    let ambient = g0.ambient();
    let mut full = CVector::from_element(ambient.arc_count(), ZERO);
    for a in g0.graph().arcs() {
        full[g0.ambient_arc(a).0] = psi[a.0];
    }
    let moved = apply_grover(ambient, &full)?;
    let next = CVector::from_iterator(
        g0.arc_count(),
        g0.graph().arcs().map(|a| moved[g0.ambient_arc(a).0]),
    );
    let outflow = g0.sink_arcs().iter().map(|&(_, a)| moved[a.0].norm_sqr()).sum();
    Ok((next, outflow))
}

#[derive(Clone, Debug, Serialize)]
pub struct SinkRun {
    #[serde(skip)]
    pub states: Vec<CVector>,
    /// `γ_n = ||φ_n||²`.
    pub gammas: Vec<f64>,
    /// `τ_n`, with `τ_0 = 0`.
    pub outflows: Vec<f64>,
    /// `max_n |γ_n + Σ_{k≤n} τ_k - γ_0|`.
    pub accounting_residual: f64,
}

impl SinkRun {
    pub fn steps(&self) -> usize {
        self.gammas.len() - 1
    }

    pub fn final_gamma(&self) -> f64 {
        *self.gammas.last().expect("a run has at least the initial state")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,gamma_n,tau_n\n");
        for (n, (g, t)) in self.gammas.iter().zip(&self.outflows).enumerate() {
            out.push_str(&format!("{n},{g:.17e},{t:.17e}\n"));
        }
        out
    }
}

/// `φ_n = E^n φ_0` for `n ≤ n_max`, with outflows and the norm-accounting check.
pub fn survival_sequence(g0: &InternalGraph, phi0: &CVector, n_max: usize) -> Result<SinkRun> {
    let mut states = Vec::with_capacity(n_max + 1);
    let mut gammas = Vec::with_capacity(n_max + 1);
    let mut outflows = Vec::with_capacity(n_max + 1);
    let gamma0 = norm_sqr(phi0);
    states.push(phi0.clone());
    gammas.push(gamma0);
    outflows.push(0.0);
    let mut drained = 0.0;
    let mut accounting_residual: f64 = 0.0;
    for _ in 0..n_max {
        let (next, tau) = step_with_sinks(g0, states.last().expect("non-empty"))?;
        drained += tau;
        let gamma = norm_sqr(&next);
        accounting_residual = accounting_residual.max((gamma + drained - gamma0).abs());
        states.push(next);
        gammas.push(gamma);
        outflows.push(tau);
    }
    Ok(SinkRun {
        states,
        gammas,
        outflows,
        accounting_residual,
    })
}

/// Remaining mass of the random walk absorbed at the sinks, `Σ_v p_n(v)` with
/// `p_{n+1} = P'^T p_n`.
pub fn random_walk_survival(g0: &InternalGraph, p0: &DVector<f64>, n_max: usize) -> Result<Vec<f64>> {
    if p0.len() != g0.vertex_count() {
        return Err(Error::DomainMismatch {
            expected: g0.vertex_count(),
            found: p0.len(),
        });
    }
    if p0.iter().any(|&x| x < 0.0) || (p0.sum() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidState("initial distribution must be a probability vector".into()));
    }
    let step = dirichlet_transition(g0).transpose();
    let mut p = p0.clone();
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(p.sum());
    for _ in 0..n_max {
        p = &step * p;
        out.push(p.sum());
    }
    Ok(out)
}

/// `W^n P_c φ_0` with `W = P_c E`, evaluated block by block as `λ^n Q Q^* φ_0`.
pub fn asymptotic_evolve(basis: &AttractorBasis, phi0: &CVector, n: u64) -> Result<CVector> {
    if phi0.len() != basis.arc_count() {
        return Err(Error::DomainMismatch {
            expected: basis.arc_count(),
            found: phi0.len(),
        });
    }
    let mut out = CVector::zeros(phi0.len());
    for b in &basis.blocks {
        let phase = power(b.eigenvalue, n);
        out += &b.orthonormal * (b.orthonormal.adjoint() * phi0) * phase;
    }
    Ok(out)
}

/// `λ^n` for a unit-modulus `λ`, through its argument to avoid drift.
fn power(lambda: C64, n: u64) -> C64 {
    C64::from_polar(1.0, lambda.arg() * n as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvergenceEstimate {
    /// `dim H_s = |A_0| - dim H_c`.
    pub kappa: usize,
    pub r_max: f64,
    /// `C` in `|γ_n - γ| ≤ C n^κ r_max^n`, fitted at `fit_step`.
    pub bound_constant: f64,
    pub fit_step: usize,
}

impl ConvergenceEstimate {
    /// `C n^κ r_max^n` (0 when `r_max` is 0).
    pub fn bound(&self, n: usize) -> f64 {
        if self.r_max == 0.0 {
            return 0.0;
        }
        if n == 0 {
            return if self.kappa == 0 { self.bound_constant } else { 0.0 };
        }
        let nf = n as f64;
        self.bound_constant * (self.kappa as f64 * nf.ln() + nf * self.r_max.ln()).exp()
    }
}

/// Fits `C` so that the bound is tight at `fit_step`.
pub fn convergence_estimate(
    spectrum: &SpectrumReport,
    gammas: &[f64],
    gamma: f64,
    fit_step: usize,
) -> Result<ConvergenceEstimate> {
    if fit_step >= gammas.len() {
        return Err(Error::InvalidState(format!(
            "fit step {fit_step} beyond a run of {} states",
            gammas.len()
        )));
    }
    let kappa = spectrum.eigenvalues.len() - spectrum.attractor_dim();
    let mut estimate = ConvergenceEstimate {
        kappa,
        r_max: spectrum.r_max,
        bound_constant: 1.0,
        fit_step,
    };
    let unit = estimate.bound(fit_step);
    estimate.bound_constant = if unit > 0.0 {
        (gammas[fit_step] - gamma).abs() / unit
    } else {
        0.0
    };
    Ok(estimate)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceCheck {
    pub checked_from: usize,
    pub checked_to: usize,
    /// Steps where `|γ_n - γ| > bound(n) + floor`.
    pub violations: Vec<usize>,
    /// `max_n |γ_n - γ| / (bound(n) + floor)`.
    pub worst_ratio: f64,
}

/// Checks the bound on `from..=to`; `floor` absorbs rounding once the true error is below it.
pub fn check_convergence(
    estimate: &ConvergenceEstimate,
    gammas: &[f64],
    gamma: f64,
    from: usize,
    to: usize,
    floor: f64,
) -> ConvergenceCheck {
    let to = to.min(gammas.len().saturating_sub(1));
    let mut violations = Vec::new();
    let mut worst_ratio: f64 = 0.0;
    for (n, g) in gammas.iter().enumerate().take(to + 1).skip(from) {
        let allowed = estimate.bound(n) + floor;
        let err = (g - gamma).abs();
        if err > allowed {
            violations.push(n);
        }
        if allowed > 0.0 {
            worst_ratio = worst_ratio.max(err / allowed);
        } else if err > 0.0 {
            worst_ratio = f64::INFINITY;
        }
    }
    ConvergenceCheck {
        checked_from: from,
        checked_to: to,
        violations,
        worst_ratio,
    }
}

/// `δ_a` restricted to `A_0` for an internal arc.
pub fn delta_state(g0: &InternalGraph, a: ArcId) -> Result<CVector> {
    if a.0 >= g0.arc_count() {
        return Err(Error::DomainMismatch {
            expected: g0.arc_count(),
            found: a.0 + 1,
        });
    }
    Ok(crate::operators::delta(g0.arc_count(), a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attractor::{attractor_basis, survival_spectral};
    use crate::format::GraphSpec;
    use crate::linalg::c;
    use crate::operators::build_e;
    use crate::oracle::{numeric_spectrum, OracleConfig};

    fn square() -> InternalGraph {
        GraphSpec {
            vertices: 6,
            edges: vec![(0, 1), (1, 2), (2, 3), (3, 0), (1, 4), (3, 5)],
            loops: vec![0, 2],
            sinks: vec![4, 5],
        }
        .internal()
        .unwrap()
    }

    #[test]
    fn step_agrees_with_e() {
        let g0 = square();
        let e = build_e(&g0);
        let psi = CVector::from_fn(10, |i, _| c(i as f64 - 3.0, 0.5 * i as f64));
        let (next, tau) = step_with_sinks(&g0, &psi).unwrap();
        assert!((&next - &e * &psi).norm() < 1e-12);
        assert!((norm_sqr(&next) + tau - norm_sqr(&psi)).abs() < 1e-10);
    }

    #[test]
    fn cycle_flow_is_fixed() {
        let g0 = square();
        let basis = attractor_basis(&g0).unwrap();
        let xi = basis.k_part[0].carrier.clone();
        let (next, tau) = step_with_sinks(&g0, &xi).unwrap();
        assert!((next - xi).norm() < 1e-14);
        assert!(tau < 1e-28);
    }

    #[test]
    fn square_run_converges_to_one_half() {
        let g0 = square();
        let run = survival_sequence(&g0, &delta_state(&g0, ArcId(8)).unwrap(), 500).unwrap();
        assert!((run.final_gamma() - 0.5).abs() < 1e-6);
        assert!(run.accounting_residual < 1e-10);
        assert!(run.gammas.windows(2).all(|w| w[1] <= w[0] + 1e-14));
        assert!(run.to_csv().starts_with("n,gamma_n,tau_n\n0,"));
    }

    #[test]
    fn random_walk_dies_out() {
        let g0 = square();
        let mut p0 = DVector::zeros(4);
        p0[0] = 1.0;
        let mass = random_walk_survival(&g0, &p0, 200).unwrap();
        assert_eq!(mass[0], 1.0);
        assert!(mass[200] <= 1e-6);
    }

    #[test]
    fn random_walk_without_sinks_keeps_mass() {
        let g0 = GraphSpec {
            vertices: 3,
            edges: vec![(0, 1), (1, 2)],
            loops: vec![2],
            sinks: vec![],
        }
        .internal()
        .unwrap();
        let p0 = DVector::from_vec(vec![0.2, 0.3, 0.5]);
        let mass = random_walk_survival(&g0, &p0, 50).unwrap();
        assert!(mass.iter().all(|m| (m - 1.0).abs() < 1e-12));
    }

    #[test]
    fn asymptotic_state_tracks_direct_run() {
        let g0 = square();
        let basis = attractor_basis(&g0).unwrap();
        let phi0 = delta_state(&g0, ArcId(8)).unwrap();
        let run = survival_sequence(&g0, &phi0, 300).unwrap();
        let w = asymptotic_evolve(&basis, &phi0, 300).unwrap();
        assert!(crate::linalg::max_abs(&(&run.states[300] - w)) < 1e-6);
        let s = survival_spectral(&basis, &phi0).unwrap();
        assert!((s.gamma - 0.5).abs() < 1e-12);
    }

    #[test]
    fn lifted_state_rotates() {
        let g0 = square();
        let basis = attractor_basis(&g0).unwrap();
        let pair = &basis.t_part[0];
        let phi = &pair.phi_plus / c(pair.phi_plus.norm(), 0.0);
        let w = asymptotic_evolve(&basis, &phi, 7).unwrap();
        let expected = &phi * C64::from_polar(1.0, 7.0 * pair.theta);
        assert!((w - expected).norm() < 1e-12);
    }

    #[test]
    fn convergence_constant_on_square() {
        let g0 = square();
        let run = survival_sequence(&g0, &delta_state(&g0, ArcId(8)).unwrap(), 60).unwrap();
        let spectrum = numeric_spectrum(&build_e(&g0), &OracleConfig::default()).unwrap();
        let est = convergence_estimate(&spectrum, &run.gammas, 0.5, 10).unwrap();
        assert_eq!(est.kappa, 5);
        assert!((est.r_max - 0.719_602_797_773_084).abs() < 1e-9);
        assert!((est.bound(10) - (run.gammas[10] - 0.5).abs()).abs() < 1e-15);
        let check = check_convergence(&est, &run.gammas, 0.5, 10, 60, 1e-12);
        assert!(check.violations.is_empty(), "{check:?}");
    }
}
