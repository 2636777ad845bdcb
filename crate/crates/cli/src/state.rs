//! Initial-state presets: `delta:<arc>`, `uniform-cycle:<k>`, `file:<path>`.

use anyhow::{anyhow, bail, Context, Result};
use grover_sink::linalg::{c, CVector};
use grover_sink::{fundamental_cycle_basis, ArcId, InternalGraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StatePreset {
    Delta(usize),
    UniformCycle(usize),
    File(String),
}

impl std::str::FromStr for StatePreset {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| anyhow!("state `{s}` is not of the form kind:value"))?;
        let index = || {
            arg.parse::<usize>()
                .with_context(|| format!("state `{s}`: `{arg}` is not an index"))
        };
        Ok(match kind {
            "delta" => Self::Delta(index()?),
            "uniform-cycle" => Self::UniformCycle(index()?),
            "file" => Self::File(arg.to_string()),
            other => bail!("unknown state kind `{other}` (expected delta, uniform-cycle or file)"),
        })
    }
}

impl std::fmt::Display for StatePreset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Delta(a) => write!(f, "delta:{a}"),
            Self::UniformCycle(k) => write!(f, "uniform-cycle:{k}"),
            Self::File(p) => write!(f, "file:{p}"),
        }
    }
}

/// Amplitudes in a state file: a JSON array with one entry per internal arc, each entry a
/// number or an `[re, im]` pair.
#[derive(serde::Deserialize)]
#[serde(untagged)]
enum Amplitude {
    Real(f64),
    Complex([f64; 2]),
}

/// Normalized initial state on the internal arcs.
pub fn build_state(g0: &InternalGraph, preset: &StatePreset) -> Result<CVector> {
    let n = g0.arc_count();
    let v = match preset {
        StatePreset::Delta(a) => {
            if *a >= n {
                bail!("arc {a} out of range: the internal graph has {n} arcs");
            }
            grover_sink::operators::delta(n, ArcId(*a))
        }
        StatePreset::UniformCycle(k) => {
            let basis = fundamental_cycle_basis(g0);
            let cycle = basis
                .cycles
                .get(*k)
                .ok_or_else(|| anyhow!("cycle {k} out of range: the basis has {} cycles", basis.len()))?;
            let mut v = CVector::zeros(n);
            for a in &cycle.arcs {
                v[a.0] = c(1.0, 0.0);
            }
            v
        }
        StatePreset::File(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading state file {path}"))?;
            let amps: Vec<Amplitude> =
                serde_json::from_str(&text).with_context(|| format!("parsing state file {path}"))?;
            if amps.len() != n {
                bail!("state file {path} has {} amplitudes, the internal graph has {n} arcs", amps.len());
            }
            CVector::from_iterator(
                n,
                amps.into_iter().map(|a| match a {
                    Amplitude::Real(re) => c(re, 0.0),
                    Amplitude::Complex([re, im]) => c(re, im),
                }),
            )
        }
    };
    let norm = v.norm();
    if !(norm.is_finite() && norm > 0.0) {
        bail!("initial state {preset} cannot be normalized (norm {norm})");
    }
    Ok(v / c(norm, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_presets() {
        assert_eq!("delta:8".parse::<StatePreset>().unwrap(), StatePreset::Delta(8));
        assert_eq!("uniform-cycle:0".parse::<StatePreset>().unwrap(), StatePreset::UniformCycle(0));
        assert_eq!("file:a:b.json".parse::<StatePreset>().unwrap(), StatePreset::File("a:b.json".into()));
        assert!("delta".parse::<StatePreset>().is_err());
        assert!("delta:x".parse::<StatePreset>().is_err());
        assert!("gauss:1".parse::<StatePreset>().is_err());
    }

    #[test]
    fn uniform_cycle_is_normalized() {
        let g0 = grover_sink::GraphSpec {
            vertices: 4,
            edges: vec![(0, 1), (1, 2), (2, 3), (3, 0)],
            loops: vec![],
            sinks: vec![],
        }
        .internal()
        .unwrap();
        let v = build_state(&g0, &StatePreset::UniformCycle(0)).unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-15);
        assert_eq!(v.iter().filter(|z| z.norm() > 0.0).count(), 4);
        assert!(build_state(&g0, &StatePreset::UniformCycle(1)).is_err());
        assert!(build_state(&g0, &StatePreset::Delta(8)).is_err());
    }
}
