//! Operator families and the Hilbert-Schmidt geometry that relates them.

mod lie;
mod weyl;

pub use lie::*;
pub use weyl::*;

use crate::error::{MbqcError, Result};
use crate::linalg::{Matrix, C64};

/// An ordered, labelled list of operators on a common space.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorBasis {
    dim: usize,
    elements: Vec<Matrix>,
    labels: Vec<String>,
}

impl OperatorBasis {
    /// # Panics
    /// If the label count differs from the element count or an element has
    /// the wrong dimension.
    pub fn new(dim: usize, elements: Vec<Matrix>, labels: Vec<String>) -> Self {
        assert_eq!(elements.len(), labels.len(), "one label per element");
        assert!(elements.iter().all(|m| m.dim() == dim), "element dimension mismatch");
        Self { dim, elements, labels }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Matrix, &str)> {
        self.elements.iter().zip(self.labels.iter().map(String::as_str))
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn concat(&self, other: &OperatorBasis) -> OperatorBasis {
        assert_eq!(self.dim, other.dim);
        let mut elements = self.elements.clone();
        elements.extend(other.elements.iter().cloned());
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        OperatorBasis { dim: self.dim, elements, labels }
    }

    pub fn select(&self, indices: &[usize]) -> OperatorBasis {
        OperatorBasis {
            dim: self.dim,
            elements: indices.iter().map(|&i| self.elements[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i].clone()).collect(),
        }
    }

    /// Every element multiplied by `s`.
    pub fn scaled(&self, s: f64) -> OperatorBasis {
        OperatorBasis {
            dim: self.dim,
            elements: self.elements.iter().map(|m| m.scale_real(s)).collect(),
            labels: self.labels.clone(),
        }
    }

    /// Hilbert-Schmidt norms `√tr(A†A)`.
    pub fn norms(&self) -> Vec<f64> {
        self.elements.iter().map(Matrix::frobenius_norm).collect()
    }

    /// Largest normalized overlap `|tr(A_i†A_j)|/(‖A_i‖‖A_j‖)` over `i ≠ j`.
    pub fn orthogonality_defect(&self) -> f64 {
        let norms = self.norms();
        let mut worst: f64 = 0.0;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let o = self.elements[i].hs_inner(&self.elements[j]).norm() / (norms[i] * norms[j]);
                worst = worst.max(o);
            }
        }
        worst
    }

    /// Spread of the norms relative to the largest one.
    pub fn norm_spread(&self) -> f64 {
        let norms = self.norms();
        let hi = norms.iter().copied().fold(0.0, f64::max);
        let lo = norms.iter().copied().fold(f64::INFINITY, f64::min);
        if hi == 0.0 {
            0.0
        } else {
            (hi - lo) / hi
        }
    }
}

/// The `d²` Weyl words `W_α = X^j Z^k` with `α = j + d·k`, identity included.
pub fn weyl_basis(d: usize) -> Result<OperatorBasis> {
    let mut elements = Vec::with_capacity(d * d);
    let mut labels = Vec::with_capacity(d * d);
    for k in 0..d {
        for j in 0..d {
            elements.push(weyl(d, j, k)?);
            labels.push(weyl_label(j, k));
        }
    }
    Ok(OperatorBasis::new(d, elements, labels))
}

/// Exponent pairs of the non-identity Weyl words grouped by X power:
/// `X Z^0..X Z^{d−1}, X² Z^0.., …, Z, …, Z^{d−1}`.
pub fn weyl_exponents_x_major(d: usize) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = (1..d).flat_map(|j| (0..d).map(move |k| (j, k))).collect();
    out.extend((1..d).map(|k| (0, k)));
    out
}

/// The non-identity Weyl words in X-power-major order.
pub fn weyl_words_x_major(d: usize) -> Result<OperatorBasis> {
    let exps = weyl_exponents_x_major(d);
    let elements = exps.iter().map(|&(j, k)| weyl(d, j, k)).collect::<Result<Vec<_>>>()?;
    let labels = exps.iter().map(|&(j, k)| weyl_label(j, k)).collect();
    Ok(OperatorBasis::new(d, elements, labels))
}

/// Unitary `U` with `Σ_β u_{αβ} from_β = to_α`, after normalizing every
/// element of both bases to unit Hilbert-Schmidt norm.
pub fn basis_change(from: &OperatorBasis, to: &OperatorBasis) -> Result<Matrix> {
    if from.len() != to.len() {
        return Err(MbqcError::MismatchedCount(from.len(), to.len()));
    }
    if from.dim() != to.dim() {
        return Err(MbqcError::DimensionMismatch { expected: from.dim(), found: to.dim() });
    }
    for b in [from, to] {
        let defect = b.orthogonality_defect();
        if defect > crate::linalg::EPS {
            return Err(MbqcError::NonOrthogonalBasis(defect));
        }
    }
    let unit = |b: &OperatorBasis| -> Vec<Matrix> {
        b.elements().iter().map(|m| m.scale_real(1.0 / m.frobenius_norm())).collect()
    };
    let (f, t) = (unit(from), unit(to));
    let n = f.len();
    let u = Matrix::from_fn(n, |a, b| f[b].hs_inner(&t[a]));
    let mut span_dev: f64 = 0.0;
    for (a, ta) in t.iter().enumerate() {
        let mut acc = Matrix::zeros(from.dim());
        for (b, fb) in f.iter().enumerate() {
            acc = &acc + &fb.scale(u[(a, b)]);
        }
        span_dev = span_dev.max(acc.dist(ta));
    }
    if span_dev > crate::linalg::EPS {
        return Err(MbqcError::SpanMismatch(span_dev));
    }
    let defect = u.unitarity_defect();
    if defect > crate::linalg::EPS {
        return Err(MbqcError::NonUnitary(defect));
    }
    Ok(u)
}

/// The qutrit matrix `E` that completes `diag(F, F, E)` for su(3).
pub fn su3_e_matrix() -> Matrix {
    let w = crate::linalg::root_of_unity(3, 1);
    let s3 = 3f64.sqrt();
    let one = C64::new(1.0, 0.0);
    Matrix::from_rows(&[vec![one - w * w, one - w], vec![-w * s3, (one + w) * s3]])
        .unwrap()
        .scale_real(1.0 / 6f64.sqrt())
}
