//! Translation-invariant matrix product states given by a Kraus set.
//!
//! Amplitudes follow the sequential-preparation order: site 1 acts first on
//! the left boundary,
//! `ψ(i_1 … i_N) = ⟨R| A_{i_N} ⋯ A_{i_1} |L⟩`,
//! which is exactly what the dilation circuit produces when the ancilla meets
//! site 1 first.

use serde::{Deserialize, Serialize};

use crate::error::{MbqcError, Result};
use crate::linalg::{self, inner, normalized, Matrix, C64, EPS, ONE, ZERO};
use crate::par::Exec;

/// Default cap on the number of amplitudes of any assembled state.
pub const DEFAULT_BUDGET: u128 = 20_000_000;

/// The amplitude budget, overridable through `MBQC_BUDGET`.
pub fn amplitude_budget() -> u128 {
    std::env::var("MBQC_BUDGET").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

/// Errors unless `base^sites · extra` fits the amplitude budget.
pub fn check_budget(base: usize, sites: usize, extra: usize) -> Result<()> {
    let budget = amplitude_budget();
    let mut required: u128 = extra as u128;
    for _ in 0..sites {
        required = required.saturating_mul(base as u128);
        if required > budget {
            break;
        }
    }
    if required > budget {
        return Err(MbqcError::BudgetExceeded { required, budget });
    }
    Ok(())
}

/// The site tensor of a translation-invariant MPS.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausSet {
    phys_dim: usize,
    bond_dim: usize,
    ops: Vec<Matrix>,
    weight: f64,
}

impl KrausSet {
    /// A general Kraus set with unit weight.
    pub fn new(ops: Vec<Matrix>) -> Result<Self> {
        let bond_dim = ops.first().map(Matrix::dim).ok_or(MbqcError::InvalidDimension(0))?;
        if let Some(bad) = ops.iter().find(|m| m.dim() != bond_dim) {
            return Err(MbqcError::DimensionMismatch { expected: bond_dim, found: bad.dim() });
        }
        Ok(Self { phys_dim: ops.len(), bond_dim, ops, weight: 1.0 })
    }

    /// `A_i = weight · words_i`.
    pub fn weighted(words: &[Matrix], weight: f64) -> Result<Self> {
        let mut k = Self::new(words.iter().map(|w| w.scale_real(weight)).collect())?;
        k.weight = weight;
        Ok(k)
    }

    /// Equal weights `1/√p` for `p` words.
    pub fn uniform(words: &[Matrix]) -> Result<Self> {
        Self::weighted(words, 1.0 / (words.len() as f64).sqrt())
    }

    pub fn phys_dim(&self) -> usize {
        self.phys_dim
    }

    pub fn bond_dim(&self) -> usize {
        self.bond_dim
    }

    pub fn ops(&self) -> &[Matrix] {
        &self.ops
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// Every operator transposed (spatial inversion of the chain).
    pub fn transposed(&self) -> Self {
        Self { ops: self.ops.iter().map(Matrix::transpose).collect(), ..self.clone() }
    }

    /// `Ã_i = Σ_j w_ij A_j`.
    pub fn rotated(&self, w: &Matrix) -> Result<Self> {
        if w.dim() != self.phys_dim {
            return Err(MbqcError::DimensionMismatch { expected: self.phys_dim, found: w.dim() });
        }
        let ops = (0..self.phys_dim)
            .map(|i| {
                let mut acc = Matrix::zeros(self.bond_dim);
                for (j, a) in self.ops.iter().enumerate() {
                    let c = w[(i, j)];
                    if c != ZERO {
                        acc = &acc + &a.scale(c);
                    }
                }
                acc
            })
            .collect();
        Ok(Self { ops, ..self.clone() })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelReport {
    pub deviation: f64,
    pub pass: bool,
}

/// Max-norm deviation of `Σ A_i†A_i` from the identity.
pub fn validate_channel(k: &KrausSet) -> ChannelReport {
    let mut acc = Matrix::zeros(k.bond_dim);
    for a in &k.ops {
        acc = &acc + &(&a.adjoint() * a);
    }
    let deviation = acc.dist(&Matrix::identity(k.bond_dim));
    ChannelReport { deviation, pass: deviation < EPS }
}

/// The unitary `U` on `phys ⊗ bond` with `U(|0⟩⊗|v⟩) = Σ_i |i⟩⊗A_i|v⟩`.
///
/// The remaining columns come from Gram-Schmidt over the canonical basis in
/// index order.
pub fn dilation_unitary(k: &KrausSet) -> Result<Matrix> {
    let report = validate_channel(k);
    if !report.pass {
        return Err(MbqcError::ChannelInvalid(report.deviation));
    }
    let (p, chi) = (k.phys_dim, k.bond_dim);
    let n = p * chi;
    let mut columns: Vec<Vec<C64>> = (0..chi)
        .map(|c| {
            let mut col = vec![ZERO; n];
            for (i, a) in k.ops.iter().enumerate() {
                for r in 0..chi {
                    col[i * chi + r] = a[(r, c)];
                }
            }
            col
        })
        .collect();
    for e in 0..n {
        if columns.len() == n {
            break;
        }
        let mut v = vec![ZERO; n];
        v[e] = ONE;
        for _ in 0..2 {
            for col in &columns {
                let p = inner(col, &v);
                v.iter_mut().zip(col).for_each(|(x, c)| *x -= p * c);
            }
        }
        if linalg::norm(&v) > 1e-6 {
            columns.push(normalized(&v).expect("nonzero"));
        }
    }
    let mut u = Matrix::zeros(n);
    // the defined columns sit at |0⟩⊗|v_c⟩, i.e. indices 0..χ
    for (c, col) in columns.iter().enumerate() {
        u.set_column(c, col);
    }
    let defect = u.unitarity_defect();
    if defect > EPS {
        return Err(MbqcError::NonUnitary(defect));
    }
    Ok(u)
}

/// Boundary vectors `|L⟩` and `⟨R|`, both unit norm.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryPair {
    pub left: Vec<C64>,
    pub right: Vec<C64>,
}

impl BoundaryPair {
    pub fn new(left: &[C64], right: &[C64]) -> Result<Self> {
        if left.len() != right.len() {
            return Err(MbqcError::DimensionMismatch { expected: left.len(), found: right.len() });
        }
        let l = normalized(left).ok_or_else(|| MbqcError::InvalidSpec("zero left boundary".into()))?;
        let r = normalized(right).ok_or_else(|| MbqcError::InvalidSpec("zero right boundary".into()))?;
        Ok(Self { left: l, right: r })
    }

    /// `|L⟩ = |0⟩`, `⟨R|` uniform.
    pub fn standard(chi: usize) -> Self {
        let mut left = vec![ZERO; chi];
        left[0] = ONE;
        let right = vec![C64::new(1.0 / (chi as f64).sqrt(), 0.0); chi];
        Self { left, right }
    }

    pub fn with_left(&self, left: &[C64]) -> Result<Self> {
        Self::new(left, &self.right)
    }
}

/// Unnormalized amplitudes with an open right bond: entry
/// `idx · χ + r` holds `⟨r| A_{i_N} ⋯ A_{i_1} |left⟩`.
pub fn assemble_open(k: &KrausSet, n: usize, left: &[C64], exec: Exec) -> Result<Vec<C64>> {
    if left.len() != k.bond_dim {
        return Err(MbqcError::DimensionMismatch { expected: k.bond_dim, found: left.len() });
    }
    check_budget(k.phys_dim, n, k.bond_dim)?;
    let chi = k.bond_dim;
    let mut level: Vec<C64> = left.to_vec();
    for _ in 0..n {
        let prefixes = level.len() / chi;
        let blocks = exec.map_range(prefixes * k.phys_dim, |t| {
            let (prefix, i) = (t / k.phys_dim, t % k.phys_dim);
            k.ops[i].apply(&level[prefix * chi..(prefix + 1) * chi])
        });
        level = blocks.concat();
    }
    Ok(level)
}

/// Unnormalized state `ψ(i_1 … i_N) = ⟨R| A_{i_N} ⋯ A_{i_1} |L⟩`.
pub fn assemble_amplitudes(k: &KrausSet, n: usize, b: &BoundaryPair, exec: Exec) -> Result<Vec<C64>> {
    if b.right.len() != k.bond_dim {
        return Err(MbqcError::DimensionMismatch { expected: k.bond_dim, found: b.right.len() });
    }
    let open = assemble_open(k, n, &b.left, exec)?;
    Ok(exec.map_range(open.len() / k.bond_dim, |idx| inner(&b.right, &open[idx * k.bond_dim..(idx + 1) * k.bond_dim])))
}

/// Normalized physical state of `n` sites.
pub fn assemble_state_with(k: &KrausSet, n: usize, b: &BoundaryPair, exec: Exec) -> Result<Vec<C64>> {
    let amps = assemble_amplitudes(k, n, b, exec)?;
    normalized(&amps).ok_or_else(|| MbqcError::InvalidSpec("boundary pair annihilates the state".into()))
}

pub fn assemble_state(k: &KrausSet, n: usize, b: &BoundaryPair) -> Result<Vec<C64>> {
    assemble_state_with(k, n, b, Exec::default())
}

/// The same state obtained by contracting the dilation circuit: every site
/// starts in `|0⟩`, the ancilla in `|L⟩`, `U` acts on (site n, ancilla) for
/// n = 1..N, and the ancilla is finally projected on `⟨R|`.
pub fn dilation_circuit_state(k: &KrausSet, n: usize, b: &BoundaryPair) -> Result<Vec<C64>> {
    let chi = k.bond_dim;
    let state = dilation_circuit_open(k, n, &b.left)?;
    let amps: Vec<C64> = state.chunks(chi).map(|c| inner(&b.right, c)).collect();
    normalized(&amps).ok_or_else(|| MbqcError::InvalidSpec("boundary pair annihilates the state".into()))
}

/// Dilation circuit output before the ancilla is projected: sites first,
/// ancilla last (least significant).
pub fn dilation_circuit_open(k: &KrausSet, n: usize, left: &[C64]) -> Result<Vec<C64>> {
    if left.len() != k.bond_dim {
        return Err(MbqcError::DimensionMismatch { expected: k.bond_dim, found: left.len() });
    }
    let u = dilation_unitary(k)?;
    check_budget(k.phys_dim, n, k.bond_dim)?;
    let chi = k.bond_dim;
    let mut dims = vec![k.phys_dim; n];
    dims.push(chi);
    let mut state = vec![ZERO; k.phys_dim.pow(n as u32) * chi];
    state[..chi].copy_from_slice(left);
    for site in 0..n {
        state = linalg::apply_on_sites(&state, &dims, &[site, n], &u);
    }
    Ok(state)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub phase: f64,
    pub deviation: f64,
    pub pass: bool,
}

/// Checks `Σ_j u_ij A_j = e^{iφ} V†A_iV` for all `i`, with one global phase
/// fitted from the largest entry on the right-hand side.
pub fn check_symmetry_condition(k: &KrausSet, ug: &Matrix, vg: &Matrix) -> Result<SymmetryReport> {
    if ug.dim() != k.phys_dim {
        return Err(MbqcError::DimensionMismatch { expected: k.phys_dim, found: ug.dim() });
    }
    if vg.dim() != k.bond_dim {
        return Err(MbqcError::DimensionMismatch { expected: k.bond_dim, found: vg.dim() });
    }
    let lhs = k.rotated(ug)?;
    let vd = vg.adjoint();
    let rhs: Vec<Matrix> = k.ops.iter().map(|a| &(&vd * a) * vg).collect();
    let lhs_flat: Vec<C64> = lhs.ops.iter().flat_map(|m| m.data().iter().copied()).collect();
    let rhs_flat: Vec<C64> = rhs.iter().flat_map(|m| m.data().iter().copied()).collect();
    let pivot = (0..rhs_flat.len()).max_by(|&a, &b| rhs_flat[a].norm().total_cmp(&rhs_flat[b].norm()));
    let phase = match pivot {
        Some(p) if lhs_flat[p].norm() > 1e-12 => (lhs_flat[p] / rhs_flat[p]).arg(),
        _ => 0.0,
    };
    let e = C64::from_polar(1.0, phase);
    let deviation = lhs_flat.iter().zip(&rhs_flat).map(|(l, r)| (l - e * r).norm()).fold(0.0, f64::max);
    Ok(SymmetryReport { phase, deviation, pass: deviation < EPS })
}
