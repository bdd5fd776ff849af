use serde::{Deserialize, Serialize};

use super::plan::{run_prepared, PreparedPlan, RunMode};
use super::resource::ResourceSpec;
use crate::cluster::{build_cluster_with, Boundary, ClusterSpec};
use crate::error::{MbqcError, Result};
use crate::linalg::{self, Matrix, C64, ZERO};
use crate::mps::dilation_circuit_open;
use crate::par::Exec;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalCheck {
    pub family: String,
    pub sites: usize,
    pub steps: usize,
    pub branches: usize,
    /// Largest `1 − F` between the measured physical remainder and the state
    /// predicted from the virtual net operator.
    pub max_infidelity: f64,
    /// Largest gap between physical and virtual branch probabilities.
    pub max_probability_gap: f64,
    pub pass: bool,
}

/// Projects the most significant site of `state` onto row `o` of `w`.
fn measure_first(state: &[C64], p: usize, w: &Matrix, o: usize) -> Vec<C64> {
    let rest = state.len() / p;
    let mut out = vec![ZERO; rest];
    for (j, chunk) in state.chunks(rest).enumerate() {
        let c = w[(o, j)];
        if c.norm() > 0.0 {
            for (acc, z) in out.iter_mut().zip(chunk) {
                *acc += c * z;
            }
        }
    }
    out
}

/// State of the unmeasured sites predicted by the virtual picture: the same
/// resource with `net|in⟩` as its boundary.
fn expected_remainder(plan: &PreparedPlan, n_sites: usize, steps: usize, v: &[C64]) -> Result<Vec<C64>> {
    let r = plan.resource();
    let rest = n_sites - steps;
    match r.spec() {
        ResourceSpec::Cluster { d, x, y } => {
            let y = y.unwrap_or(d - x);
            if rest == 1 {
                return Ok(v.to_vec());
            }
            let norm = linalg::norm(v);
            if norm < 1e-14 {
                return Ok(vec![ZERO; d.pow(rest as u32)]);
            }
            let (a, b) = if steps.is_multiple_of(2) { (x, y) } else { (y, x) };
            let spec = ClusterSpec::with_orders(d, a, b, rest, Boundary::Obc)?;
            let s = build_cluster_with(&spec, Some(v), Exec::Sequential)?;
            Ok(s.iter().map(|z| z * norm).collect())
        }
        _ => dilation_circuit_open(r.site(0), rest, v),
    }
}

/// Measures the first `plan.len()` sites of an explicit `n_sites` physical
/// state (cluster chain or dilation circuit) in every branch and compares the
/// post-measurement state with the correlation-space prediction.
pub fn real_vs_virtual_check(plan: &PreparedPlan, n_sites: usize, exec: Exec) -> Result<PhysicalCheck> {
    let r = plan.resource();
    let steps = plan.len();
    let p = r.phys_dim();
    let min_sites = if r.is_cluster() { steps + 1 } else { steps };
    if n_sites < min_sites {
        return Err(MbqcError::OutOfRange(format!("{n_sites} sites cannot host {steps} measurements")));
    }
    let physical = match r.spec() {
        ResourceSpec::Cluster { d, x, y } => {
            let spec = ClusterSpec::with_orders(d, x, y.unwrap_or(d - x), n_sites, Boundary::Obc)?;
            build_cluster_with(&spec, Some(plan.input()), exec)?
        }
        _ => dilation_circuit_open(r.site(0), n_sites, plan.input())?,
    };
    let branches = run_prepared(plan, RunMode::Enumerate, exec)?;
    let gaps: Vec<Result<(f64, f64)>> = exec.map_slice(&branches, |b| {
        let mut s = physical.clone();
        for (rot, &o) in b.rotations.iter().zip(&b.outcomes) {
            s = measure_first(&s, p, rot, o);
        }
        let v = b.net_operator.apply(plan.input());
        let expected = expected_remainder(plan, n_sites, steps, &v)?;
        let prob = linalg::norm(&s).powi(2);
        let gap = (prob - b.probability).abs().max((linalg::norm(&expected).powi(2) - prob).abs());
        let infidelity = match (linalg::normalized(&s), linalg::normalized(&expected)) {
            (Some(a), Some(e)) if prob > 1e-12 => 1.0 - linalg::fidelity(&a, &e),
            _ => 0.0,
        };
        Ok((infidelity, gap))
    });
    let mut max_infidelity = 0.0f64;
    let mut max_probability_gap = 0.0f64;
    for g in gaps {
        let (i, p) = g?;
        max_infidelity = max_infidelity.max(i);
        max_probability_gap = max_probability_gap.max(p);
    }
    Ok(PhysicalCheck {
        family: r.spec().name(),
        sites: n_sites,
        steps,
        branches: branches.len(),
        max_infidelity,
        max_probability_gap,
        pass: max_infidelity < 1e-8 && max_probability_gap < 1e-9,
    })
}
