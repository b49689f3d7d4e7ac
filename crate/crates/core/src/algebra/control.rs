use serde::Serialize;

use super::matrix::Coefficient;
use super::module::Site;
use super::morphism::GeomMorphism;
use crate::error::{Error, Result};

/// A box `B_ρ(x) × (1 − ε, 1)` to test.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ControlProbe {
    pub point: usize,
    pub rho: f64,
    pub eps: f64,
}

/// A nonzero block joining the inner box `V` to the outside of `U`.
#[derive(Clone, Debug, Serialize)]
pub struct ControlViolation {
    pub probe: usize,
    pub row: (String, String),
    pub col: (String, String),
    pub inner_gap: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ControlCheck {
    pub passed: bool,
    pub probes: usize,
    pub witness: Option<ControlViolation>,
}

/// Discretized control: with `U = B_ρ(x) × (1 − ε, 1)` and `V = B_ρ(x) × (1 − δ(ρ, ε), 1)`,
/// no nonzero block may join a site of `V` to a site outside `U`, in either direction.
pub fn check_control_certificate<R: Coefficient>(
    phi: &GeomMorphism<R>,
    probes: &[ControlProbe],
    delta: impl Fn(f64, f64) -> f64,
) -> Result<ControlCheck> {
    let space = phi.source().space();
    let base = space.base();
    let label = |s: Site| (base.id_of(s.point).to_string(), space.time(s).to_string());
    for (k, probe) in probes.iter().enumerate() {
        base.check_index(probe.point)?;
        if !(probe.eps > 0.0 && probe.eps <= 1.0) || !(probe.rho.is_finite() && probe.rho > 0.0) {
            return Err(Error::Invalid(format!("probe {k}: need ρ > 0 and 0 < ε ≤ 1")));
        }
        let gap = delta(probe.rho, probe.eps);
        if !(gap > 0.0 && gap < probe.eps) {
            return Err(Error::Invalid(format!("probe {k}: δ({}, {}) = {gap} does not shrink the gap", probe.rho, probe.eps)));
        }
        let inside = |s: Site, e: f64| base.dist(probe.point, s.point).lt(probe.rho) && space.time_f64(s) > 1.0 - e;
        for &(x, y) in phi.blocks().keys() {
            if (inside(y, gap) && !inside(x, probe.eps)) || (inside(x, gap) && !inside(y, probe.eps)) {
                return Ok(ControlCheck {
                    passed: false,
                    probes: k + 1,
                    witness: Some(ControlViolation { probe: k, row: label(x), col: label(y), inner_gap: gap }),
                });
            }
        }
    }
    Ok(ControlCheck { passed: true, probes: probes.len(), witness: None })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use num_rational::Ratio;

    use super::*;
    use crate::algebra::{GeometricModule, IntMorphism, Matrix, ModuleSpace};
    use crate::metric::MetricSpace;

    fn grid_module() -> GeometricModule {
        let x = Arc::new(MetricSpace::integer_interval(0, 10).unwrap());
        let grid = vec![Ratio::new(0, 1), Ratio::new(1, 4), Ratio::new(1, 2), Ratio::new(99, 100)];
        let sp = ModuleSpace::with_grid(x, grid).unwrap();
        let sites: Vec<_> = sp.sites().map(|s| (s, 1)).collect();
        GeometricModule::new(sp, sites).unwrap()
    }

    fn probes(eps: &[f64]) -> Vec<ControlProbe> {
        (0..11).flat_map(|p| eps.iter().map(move |&e| ControlProbe { point: p, rho: 2.0, eps: e })).collect()
    }

    #[test]
    fn early_blocks_pass() {
        let m = grid_module();
        let blocks = [((Site { point: 0, time: 2 }, Site { point: 9, time: 1 }), Matrix::try_from(vec![vec![1i64]]).unwrap())];
        let phi = IntMorphism::new(m.clone(), m.clone(), blocks).unwrap();
        assert!(check_control_certificate(&phi, &probes(&[0.1, 0.4]), |_, e| e / 2.0).unwrap().passed);
        let zero = IntMorphism::zero(m.clone(), m);
        assert!(check_control_certificate(&zero, &probes(&[0.3]), |_, e| e / 3.0).unwrap().passed);
    }

    #[test]
    fn late_far_block_is_caught() {
        let m = grid_module();
        let blocks = [((Site { point: 9, time: 3 }, Site { point: 1, time: 3 }), Matrix::try_from(vec![vec![3i64]]).unwrap())];
        let phi = IntMorphism::new(m.clone(), m, blocks).unwrap();
        let probe = [ControlProbe { point: 1, rho: 4.0, eps: 0.05 }];
        let check = check_control_certificate(&phi, &probe, |_, _| 0.02).unwrap();
        assert!(!check.passed);
        let w = check.witness.unwrap();
        assert_eq!((w.row.0.as_str(), w.col.0.as_str()), ("9", "1"));
    }

    #[test]
    fn non_shrinking_delta_is_an_error() {
        let m = grid_module();
        let phi = IntMorphism::identity(&m);
        assert!(check_control_certificate(&phi, &probes(&[0.2]), |_, e| e).is_err());
    }
}
