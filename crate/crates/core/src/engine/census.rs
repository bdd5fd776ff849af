use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::lift::projection_basis;
use super::plan::{run_prepared, PlanStep, PreparedPlan, RunMode, StepClass};
use super::resource::Resource;
use crate::error::{MbqcError, Result};
use crate::linalg::{realify, Matrix, RealSpan, C64, I};
use crate::ops::{pauli_word, sp_pauli_sets};
use crate::par::Exec;

/// Angle used for census steps; any value with `e^{−2iθG} ≠ 1` works.
pub const CENSUS_ANGLE: f64 = 0.3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusRow {
    pub outcome: usize,
    pub class: StepClass,
    pub byproduct: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorCensus {
    pub generator: String,
    pub active: usize,
    pub total: usize,
    pub anomalies: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub family: String,
    pub fraction: Ratio<usize>,
    pub per_generator: Vec<GeneratorCensus>,
    /// Every generator yields the same active count.
    pub uniform: bool,
    /// Branch table of the first (or requested) generator.
    pub table: Vec<CensusRow>,
}

fn reference_input(chi: usize) -> Vec<C64> {
    crate::cluster::reference_input(chi)
}

fn single_step_rows(r: &Resource, step: PlanStep, exec: Exec) -> Result<Vec<CensusRow>> {
    let plan = PreparedPlan::with_resource(r.clone(), &reference_input(r.bond_dim()), &[step])?;
    let branches = run_prepared(&plan, RunMode::Enumerate, exec)?;
    Ok(branches
        .iter()
        .map(|b| CensusRow {
            outcome: b.outcomes[0],
            class: b.classes[0],
            byproduct: b.byproduct.as_ref().map_or_else(|| "?".into(), |w| w.label(r.table())),
        })
        .collect())
}

/// Counts outcomes of a single gate step that enact a nontrivial gate, for
/// every elementary generator of the family (or only `target`).
pub fn success_census(r: &Resource, target: Option<&str>, exec: Exec) -> Result<CensusReport> {
    let labels = match target {
        Some(t) => {
            r.generator(t)?;
            vec![t.to_string()]
        }
        None => r.generator_labels()?,
    };
    let rows: Vec<Vec<CensusRow>> = exec
        .map_slice(&labels, |l| {
            let step = PlanStep::Gate { generator: l.clone(), theta: CENSUS_ANGLE, adaptive: false };
            single_step_rows(r, step, Exec::Sequential)
        })
        .into_iter()
        .collect::<Result<_>>()?;
    let per_generator: Vec<GeneratorCensus> = labels
        .iter()
        .zip(&rows)
        .map(|(l, rs)| GeneratorCensus {
            generator: l.clone(),
            active: rs.iter().filter(|c| c.class == StepClass::ActiveGate).count(),
            total: rs.len(),
            anomalies: rs.iter().filter(|c| c.class == StepClass::Other).count(),
        })
        .collect();
    let first = &per_generator[0];
    let uniform = per_generator.iter().all(|g| g.active == first.active);
    Ok(CensusReport {
        family: r.spec().name(),
        fraction: Ratio::new(first.active, first.total),
        uniform,
        table: rows.into_iter().next().unwrap_or_default(),
        per_generator,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionCensus {
    pub family: String,
    pub rotation: Matrix,
    pub fraction: Ratio<usize>,
    pub hits: usize,
    pub total: usize,
    pub table: Vec<CensusRow>,
}

/// Outcomes of the projection basis that give a byproduct times a projector.
pub fn projection_census(r: &Resource, exec: Exec) -> Result<ProjectionCensus> {
    let rotation = projection_basis(r)?;
    let table = single_step_rows(r, PlanStep::Projection, exec)?;
    let hits = table.iter().filter(|c| c.class == StepClass::ProjectionHit).count();
    Ok(ProjectionCensus {
        family: r.spec().name(),
        rotation,
        fraction: Ratio::new(hits, table.len()),
        hits,
        total: table.len(),
        table,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpCensusEntry {
    pub from: char,
    pub to: char,
    /// Closed-form count, when one is stated.
    pub expected: Option<usize>,
    pub observed_min: usize,
    pub observed_max: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpCommutationTable {
    pub n: usize,
    pub sizes: [usize; 3],
    pub entries: Vec<SpCensusEntry>,
    pub pass: bool,
}

/// For every element of `{X_ij}`, `{Y_ij}`, `{Z_j}` (Pauli-word form) counts
/// its commuting partners inside each set, itself included.
pub fn sp_commutation_census(n: usize) -> Result<SpCommutationTable> {
    if n < 2 || !n.is_power_of_two() {
        return Err(MbqcError::NotPowerOfTwo(n));
    }
    let m = n.trailing_zeros() as usize;
    let (xs, ys, zs) = sp_pauli_sets(m)?;
    let mats = |ws: &[String]| ws.iter().map(|w| pauli_word(w)).collect::<Result<Vec<_>>>();
    let sets = [('X', mats(&xs)?), ('Y', mats(&ys)?), ('Z', mats(&zs)?)];
    let q = n * n / 4;
    let expected = |a: char, b: char| -> Option<usize> {
        match (a, b) {
            ('X', 'X') | ('Y', 'Y') => Some(q),
            ('X', 'Y') | ('Y', 'X') | ('Z', 'X') | ('Z', 'Y') => Some(q - n / 2),
            ('X', 'Z') | ('Y', 'Z') => Some(n / 2 - 1),
            ('Z', 'Z') => Some(n - 1),
            _ => None,
        }
    };
    let mut entries = Vec::new();
    for (a, sa) in &sets {
        for (b, sb) in &sets {
            let counts: Vec<usize> =
                sa.iter().map(|g| sb.iter().filter(|h| g.commutes_with(h, 1e-9)).count()).collect();
            let lo = counts.iter().copied().min().unwrap_or(0);
            let hi = counts.iter().copied().max().unwrap_or(0);
            let exp = expected(*a, *b);
            entries.push(SpCensusEntry {
                from: *a,
                to: *b,
                expected: exp,
                observed_min: lo,
                observed_max: hi,
                pass: exp.is_none_or(|e| lo == e && hi == e),
            });
        }
    }
    let pass = entries.iter().all(|e| e.pass);
    Ok(SpCommutationTable { n, sizes: [xs.len(), ys.len(), zs.len()], entries, pass })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpanReport {
    pub family: String,
    pub generators: usize,
    pub rank: usize,
    pub expected: usize,
    pub pass: bool,
}

fn traceless(m: &Matrix) -> Matrix {
    let t = m.trace() / m.dim() as f64;
    m - &Matrix::identity(m.dim()).scale(t)
}

/// Real dimension of the Lie algebra generated by `gens` (traceless parts,
/// closed under `i[A, B]`).
pub fn lie_closure_rank(gens: &[Matrix]) -> usize {
    let Some(first) = gens.first() else { return 0 };
    let cap = first.dim() * first.dim() - 1;
    let mut span = RealSpan::new();
    let mut elems: Vec<Matrix> = Vec::new();
    for g in gens {
        let t = traceless(g);
        if span.insert(&realify(&t), 1e-9) {
            elems.push(t);
        }
    }
    let mut frontier = 0;
    while frontier < elems.len() && span.rank() < cap {
        let a = elems[frontier].clone();
        let mut j = 0;
        while j < elems.len() && span.rank() < cap {
            let c = traceless(&a.commutator(&elems[j]).scale(I));
            if span.insert(&realify(&c), 1e-9) {
                elems.push(c);
            }
            j += 1;
        }
        frontier += 1;
    }
    span.rank()
}

pub fn universality_span_check(r: &Resource) -> Result<SpanReport> {
    let gens = r.universality_generators()?;
    let rank = lie_closure_rank(&gens);
    let expected = r.expected_algebra_dim();
    Ok(SpanReport { family: r.spec().name(), generators: gens.len(), rank, expected, pass: rank == expected })
}
