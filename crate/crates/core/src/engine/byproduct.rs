use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::linalg::{Matrix, C64, ONE};
use crate::ops::OperatorBasis;

/// Lookup from monomial unitaries (Weyl or Pauli words) to basis indices.
/// Index `None` is the identity.
#[derive(Clone, Debug)]
pub struct WordTable {
    basis: OperatorBasis,
    index: HashMap<Vec<(usize, i64)>, Option<usize>>,
}

const PHASE_STEPS: f64 = 1_048_576.0;

/// Column of the single nonzero entry per row plus the phase of that entry
/// relative to row 0, or `None` when `m` is not monomial.
fn monomial_key(m: &Matrix) -> Option<(Vec<(usize, i64)>, C64)> {
    let dim = m.dim();
    let scale = m.max_abs();
    if scale < 1e-12 {
        return None;
    }
    let mut key = Vec::with_capacity(dim);
    let mut lead = None;
    for r in 0..dim {
        let row = m.row(r);
        let mut nz = row.iter().enumerate().filter(|(_, z)| z.norm() > 1e-7 * scale);
        let (c, z) = nz.next()?;
        if nz.next().is_some() || (z.norm() - scale).abs() > 1e-7 * scale {
            return None;
        }
        let z0 = *lead.get_or_insert(*z);
        let turn = ((z / z0).arg() / (2.0 * std::f64::consts::PI)).rem_euclid(1.0);
        key.push((c, ((turn * PHASE_STEPS).round() as i64) % PHASE_STEPS as i64));
    }
    Some((key, lead.expect("nonempty")))
}

impl WordTable {
    /// # Panics
    /// If an element of `basis` is not a monomial unitary.
    pub fn new(basis: &OperatorBasis) -> Self {
        let mut index = HashMap::new();
        let (id_key, _) = monomial_key(&Matrix::identity(basis.dim())).expect("identity");
        index.insert(id_key, None);
        for (i, m) in basis.elements().iter().enumerate() {
            let (k, _) = monomial_key(m).expect("byproduct words must be monomial");
            index.entry(k).or_insert(Some(i));
        }
        Self { basis: basis.clone(), index }
    }

    pub fn basis(&self) -> &OperatorBasis {
        &self.basis
    }

    pub fn matrix_of(&self, idx: Option<usize>) -> Matrix {
        idx.map_or_else(|| Matrix::identity(self.basis.dim()), |i| self.basis.elements()[i].clone())
    }

    pub fn label_of(&self, idx: Option<usize>) -> String {
        idx.map_or_else(|| "1".to_string(), |i| self.basis.labels()[i].clone())
    }

    /// `m = phase · word` with a possibly non-unit `phase`.
    pub fn identify(&self, m: &Matrix) -> Option<(Option<usize>, C64)> {
        let (key, lead) = monomial_key(m)?;
        let idx = *self.index.get(&key)?;
        let w = self.matrix_of(idx);
        let c = (0..w.dim()).find(|&c| w[(0, c)].norm() > 0.5)?;
        Some((idx, lead / w[(0, c)]))
    }

    /// `a · b = phase · c`.
    pub fn mul(&self, a: Option<usize>, b: Option<usize>) -> (Option<usize>, C64) {
        match (a, b) {
            (None, x) | (x, None) => (x, ONE),
            (Some(_), Some(_)) => {
                let p = &self.matrix_of(a) * &self.matrix_of(b);
                self.identify(&p).expect("word basis is closed under products")
            }
        }
    }

    /// Number of ordered pairs whose product falls outside the basis.
    pub fn closure_failures(&self) -> usize {
        let els = self.basis.elements();
        let mut bad = 0;
        for a in els {
            for b in els {
                if self.identify(&(a * b)).is_none() {
                    bad += 1;
                }
            }
        }
        bad
    }
}

/// A product of byproduct-basis words times a phase. After `reduce` at most
/// one factor remains (none for the identity).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ByproductWord {
    pub factors: Vec<usize>,
    pub phase: C64,
}

impl ByproductWord {
    pub fn identity() -> Self {
        Self { factors: Vec::new(), phase: ONE }
    }

    pub fn single(idx: Option<usize>, phase: C64) -> Self {
        Self { factors: idx.into_iter().collect(), phase }
    }

    pub fn head(&self) -> Option<usize> {
        self.factors.first().copied()
    }

    pub fn is_normal(&self) -> bool {
        self.factors.len() <= 1
    }

    /// `self · other`, unreduced.
    pub fn then(&self, other: &ByproductWord) -> Self {
        let mut factors = self.factors.clone();
        factors.extend(&other.factors);
        Self { factors, phase: self.phase * other.phase }
    }

    /// Left-to-right reduction.
    pub fn reduce(&self, t: &WordTable) -> Self {
        let mut acc: Option<usize> = None;
        let mut phase = self.phase;
        for &f in &self.factors {
            let (c, p) = t.mul(acc, Some(f));
            acc = c;
            phase *= p;
        }
        Self::single(acc, phase)
    }

    /// Right-to-left reduction.
    pub fn reduce_right(&self, t: &WordTable) -> Self {
        let mut acc: Option<usize> = None;
        let mut phase = self.phase;
        for &f in self.factors.iter().rev() {
            let (c, p) = t.mul(Some(f), acc);
            acc = c;
            phase *= p;
        }
        Self::single(acc, phase)
    }

    pub fn matrix(&self, t: &WordTable) -> Matrix {
        let mut m = Matrix::identity(t.basis().dim());
        for &f in &self.factors {
            m = &m * &t.basis().elements()[f];
        }
        m.scale(self.phase)
    }

    pub fn label(&self, t: &WordTable) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        self.factors.iter().map(|&f| t.label_of(Some(f))).collect::<Vec<_>>().join("·")
    }

    pub fn approx_eq(&self, other: &ByproductWord, tol: f64) -> bool {
        self.factors == other.factors && (self.phase - other.phase).norm() < tol
    }
}
