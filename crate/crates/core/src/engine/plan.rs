use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::byproduct::ByproductWord;
use super::lift::{elementary_gate_rotation, projection_basis, wire_rotation};
use super::resource::{projector_rank, Resource, ResourceSpec};
use crate::error::{MbqcError, Result};
use crate::linalg::{self, Matrix, C64};
use crate::mps::check_budget;
use crate::par::Exec;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "intent", rename_all = "lowercase")]
pub enum PlanStep {
    /// Measurement that only transports the state (up to byproduct).
    Wire,
    /// `exp(−iθG)` with `G` named by `generator`. With `adaptive`, `θ` flips
    /// sign whenever the accumulated byproduct anticommutes with `G`.
    Gate {
        generator: String,
        theta: f64,
        #[serde(default)]
        adaptive: bool,
    },
    Projection,
    /// An explicit measurement-basis rotation `W` on the physical site.
    Rotation {
        basis: Matrix,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeName {
    #[default]
    Enumerate,
    Sample,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunMode {
    Enumerate,
    Sample(u64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementPlan {
    #[serde(flatten)]
    pub family: ResourceSpec,
    pub input: Vec<C64>,
    pub steps: Vec<PlanStep>,
    #[serde(default)]
    pub mode: ModeName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl MeasurementPlan {
    pub fn new(family: ResourceSpec, input: Vec<C64>, steps: Vec<PlanStep>) -> Self {
        Self { family, input, steps, mode: ModeName::Enumerate, seed: None }
    }

    pub fn run_mode(&self) -> RunMode {
        match self.mode {
            ModeName::Enumerate => RunMode::Enumerate,
            ModeName::Sample => RunMode::Sample(self.seed.unwrap_or(0)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepClass {
    /// Phase times a byproduct word.
    CleanIdentity,
    /// Byproduct word times a nontrivial unitary.
    ActiveGate,
    /// Byproduct word times a projector of the expected rank.
    ProjectionHit,
    Other,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchRecord {
    pub outcomes: Vec<usize>,
    pub probability: f64,
    /// `Ã_{i_N} ⋯ Ã_{i_1}` including Kraus weights.
    pub net_operator: Matrix,
    /// Accumulated byproduct in the logical frame; `None` once a step had no
    /// identifiable byproduct.
    pub byproduct: Option<ByproductWord>,
    pub classes: Vec<StepClass>,
    /// Signed angles actually used by gate steps (after adaptation).
    pub angles: Vec<Option<f64>>,
    /// `(frame · byproduct)† · net`, rescaled to unit Hilbert-Schmidt norm per
    /// dimension; equals the enacted gate when all steps were unitary.
    pub logical: Option<Matrix>,
    /// `net|in⟩`, normalized (zero when the branch has probability zero).
    pub output: Vec<C64>,
    /// Measurement rotations used at each step.
    #[serde(skip)]
    pub rotations: Vec<Matrix>,
}

impl BranchRecord {
    pub fn anomaly(&self) -> bool {
        self.classes.contains(&StepClass::Other)
    }

    pub fn fully_active(&self) -> bool {
        self.classes.iter().all(|c| *c == StepClass::ActiveGate)
    }
}

#[derive(Clone, Debug)]
enum Compiled {
    Fixed {
        w: Matrix,
    },
    /// Rotations for `+θ` and `−θ`.
    Gate {
        g: Matrix,
        theta: f64,
        adaptive: bool,
        w: Matrix,
        w_flipped: Matrix,
    },
}

/// A plan bound to its resource, with fixed rotations precomputed.
#[derive(Clone, Debug)]
pub struct PreparedPlan {
    resource: Resource,
    input: Vec<C64>,
    steps: Vec<Compiled>,
}

struct Walker<'a> {
    plan: &'a PreparedPlan,
    net: Matrix,
    frame: Matrix,
    word: Option<ByproductWord>,
    classes: Vec<StepClass>,
    angles: Vec<Option<f64>>,
    rotations: Vec<Matrix>,
    outcomes: Vec<usize>,
}

impl PreparedPlan {
    pub fn new(plan: &MeasurementPlan) -> Result<Self> {
        let resource = plan.family.build()?;
        Self::with_resource(resource, &plan.input, &plan.steps)
    }

    pub fn with_resource(resource: Resource, input: &[C64], steps: &[PlanStep]) -> Result<Self> {
        let chi = resource.bond_dim();
        if input.len() != chi {
            return Err(MbqcError::DimensionMismatch { expected: chi, found: input.len() });
        }
        if steps.is_empty() {
            return Err(MbqcError::InvalidSpec("a plan needs at least one step".into()));
        }
        let input = linalg::normalized(input).ok_or_else(|| MbqcError::InvalidSpec("zero input state".into()))?;
        let p = resource.phys_dim();
        let compiled = steps
            .iter()
            .map(|s| {
                Ok(match s {
                    PlanStep::Wire => Compiled::Fixed { w: wire_rotation(&resource)? },
                    PlanStep::Projection => Compiled::Fixed { w: projection_basis(&resource)? },
                    PlanStep::Rotation { basis } => {
                        if basis.dim() != p {
                            return Err(MbqcError::DimensionMismatch { expected: p, found: basis.dim() });
                        }
                        let defect = basis.unitarity_defect();
                        if defect > 1e-8 {
                            return Err(MbqcError::NonUnitary(defect));
                        }
                        Compiled::Fixed { w: basis.clone() }
                    }
                    PlanStep::Gate { generator, theta, adaptive } => {
                        let g = resource.generator(generator)?;
                        let w = elementary_gate_rotation(&resource, &g, *theta)?;
                        let w_flipped =
                            if *adaptive { elementary_gate_rotation(&resource, &g, -*theta)? } else { w.clone() };
                        Compiled::Gate { g, theta: *theta, adaptive: *adaptive, w, w_flipped }
                    }
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { resource, input, steps: compiled })
    }

    pub fn resource(&self) -> &Resource {
        &self.resource
    }

    pub fn input(&self) -> &[C64] {
        &self.input
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    fn walker(&self) -> Walker<'_> {
        let chi = self.resource.bond_dim();
        Walker {
            plan: self,
            net: Matrix::identity(chi),
            frame: Matrix::identity(chi),
            word: Some(ByproductWord::identity()),
            classes: Vec::new(),
            angles: Vec::new(),
            rotations: Vec::new(),
            outcomes: Vec::new(),
        }
    }

    /// Replays one branch given its outcomes.
    pub fn branch(&self, outcomes: &[usize]) -> Result<BranchRecord> {
        if outcomes.len() != self.steps.len() {
            return Err(MbqcError::MismatchedCount(outcomes.len(), self.steps.len()));
        }
        let mut w = self.walker();
        let p = self.resource.phys_dim();
        for &o in outcomes {
            if o >= p {
                return Err(MbqcError::OutOfRange(format!("outcome {o} for {p} outcomes")));
            }
            let (rot, angle) = w.rotation();
            let ops = self.resource.site(w.outcomes.len()).ops();
            let mut induced = Matrix::zeros(self.resource.bond_dim());
            for (j, a) in ops.iter().enumerate() {
                let c = rot[(o, j)];
                if c.norm() > 0.0 {
                    induced = &induced + &a.scale(c);
                }
            }
            w.advance(o, &induced, rot, angle);
        }
        Ok(w.finish())
    }

    fn sample(&self, seed: u64) -> Result<BranchRecord> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut w = self.walker();
        for _ in 0..self.steps.len() {
            let (rot, angle) = w.rotation();
            let induced = self.resource.site(w.outcomes.len()).rotated(&rot)?;
            let state = w.net.apply(&self.input);
            let probs: Vec<f64> = induced.ops().iter().map(|a| linalg::norm(&a.apply(&state)).powi(2)).collect();
            let total: f64 = probs.iter().sum();
            let mut draw = rng.random::<f64>() * total;
            let mut pick = probs.len() - 1;
            for (i, p) in probs.iter().enumerate() {
                if draw < *p {
                    pick = i;
                    break;
                }
                draw -= p;
            }
            w.advance(pick, &induced.ops()[pick], rot, angle);
        }
        Ok(w.finish())
    }
}

impl Walker<'_> {
    fn rotation(&self) -> (Matrix, Option<f64>) {
        let r = &self.plan.resource;
        match &self.plan.steps[self.outcomes.len()] {
            Compiled::Fixed { w } => (w.clone(), None),
            Compiled::Gate { g, theta, adaptive, w, w_flipped } => {
                let flip = *adaptive
                    && self.word.as_ref().is_some_and(|word| {
                        let b = word.matrix(r.table());
                        let g_logical = &(&self.frame.adjoint() * g) * &self.frame;
                        b.anticommutes_with(&g_logical, 1e-9)
                    });
                if flip {
                    (w_flipped.clone(), Some(-theta))
                } else {
                    (w.clone(), Some(*theta))
                }
            }
        }
    }

    fn advance(&mut self, outcome: usize, induced: &Matrix, rot: Matrix, angle: Option<f64>) {
        let r = &self.plan.resource;
        let step = self.outcomes.len();
        let site_frame = r.frame(step);
        let chi = r.bond_dim() as f64;
        let c = &site_frame.adjoint() * induced;
        let scale = (c.hs_inner(&c).re / chi).sqrt();
        let table = r.table();
        let (class, local_word) = if scale < 1e-12 {
            (StepClass::Other, None)
        } else {
            let cn = c.scale_real(1.0 / scale);
            if let Some((idx, ph)) = table.identify(&cn) {
                (StepClass::CleanIdentity, Some(ByproductWord::single(idx, ph / ph.norm())))
            } else if cn.is_unitary(1e-8) {
                let designated = match &self.plan.steps[step] {
                    Compiled::Gate { g, .. } if r.is_cluster() => {
                        let v = g.exp_hermitian(angle.unwrap_or(0.0));
                        table.identify(&(&cn * &v.adjoint())).map(|(i, ph)| ByproductWord::single(i, ph / ph.norm()))
                    }
                    Compiled::Gate { .. } => Some(ByproductWord::single(Some(outcome), C64::new(1.0, 0.0))),
                    _ => None,
                };
                (StepClass::ActiveGate, designated)
            } else {
                match find_projection(r, &cn) {
                    Some(word) => (StepClass::ProjectionHit, Some(word)),
                    None => (StepClass::Other, None),
                }
            }
        };
        // express the local word in the logical frame: Fr† B Fr
        let logical_word = local_word.and_then(|w| {
            let m = &(&self.frame.adjoint() * &w.matrix(table)) * &self.frame;
            table.identify(&m).map(|(i, ph)| ByproductWord::single(i, ph / ph.norm()))
        });
        self.word = match (self.word.take(), logical_word) {
            (Some(acc), Some(new)) => Some(new.then(&acc).reduce(table)),
            _ => None,
        };
        self.net = induced * &self.net;
        self.frame = site_frame * &self.frame;
        self.classes.push(class);
        self.angles.push(angle);
        self.rotations.push(rot);
        self.outcomes.push(outcome);
    }

    fn finish(self) -> BranchRecord {
        let r = &self.plan.resource;
        let out = self.net.apply(&self.plan.input);
        let probability = linalg::norm(&out).powi(2);
        let output = linalg::normalized(&out).unwrap_or_else(|| vec![C64::new(0.0, 0.0); out.len()]);
        let logical = self.word.as_ref().and_then(|w| {
            let full = &self.frame * &w.matrix(r.table());
            let l = &full.adjoint() * &self.net;
            let s = (l.hs_inner(&l).re / r.bond_dim() as f64).sqrt();
            (s > 1e-12).then(|| l.scale_real(1.0 / s))
        });
        BranchRecord {
            outcomes: self.outcomes,
            probability,
            net_operator: self.net,
            byproduct: self.word,
            classes: self.classes,
            angles: self.angles,
            logical,
            output,
            rotations: self.rotations,
        }
    }
}

/// A word `B` with `B† C ∝` projector of the expected rank.
fn find_projection(r: &Resource, c: &Matrix) -> Option<ByproductWord> {
    let table = r.table();
    let want = r.projection_rank();
    let candidates = std::iter::once(None).chain((0..table.basis().len()).map(Some));
    for idx in candidates {
        let b = table.matrix_of(idx);
        if projector_rank(&(&b.adjoint() * c), 1e-8) == Some(want) {
            return Some(ByproductWord::single(idx, C64::new(1.0, 0.0)));
        }
    }
    None
}

/// Runs a plan. Enumeration returns every `p^steps` branch in lexicographic
/// outcome order; sampling returns one seeded trajectory.
pub fn run_plan(plan: &MeasurementPlan, mode: RunMode) -> Result<Vec<BranchRecord>> {
    run_prepared(&PreparedPlan::new(plan)?, mode, Exec::default())
}

pub fn run_prepared(plan: &PreparedPlan, mode: RunMode, exec: Exec) -> Result<Vec<BranchRecord>> {
    match mode {
        RunMode::Sample(seed) => Ok(vec![plan.sample(seed)?]),
        RunMode::Enumerate => {
            let p = plan.resource.phys_dim();
            let n = plan.steps.len();
            check_budget(p, n, 1)?;
            let dims = vec![p; n];
            exec.map_range(p.pow(n as u32), |idx| plan.branch(&linalg::digits(idx, &dims))).into_iter().collect()
        }
    }
}

/// Sum of branch probabilities minus one.
pub fn probability_defect(branches: &[BranchRecord]) -> f64 {
    (branches.iter().map(|b| b.probability).sum::<f64>() - 1.0).abs()
}
