use serde::{Deserialize, Serialize};

use super::resource::{Resource, ResourceSpec};
use crate::error::{MbqcError, Result};
use crate::linalg::{Matrix, C64, EPS};
use crate::mps::KrausSet;
use crate::ops::{fourier_k, pauli, OperatorBasis};

/// `Ã_i = Σ_j w_ij A_j` for a unitary measurement-basis rotation `W`.
pub fn induced_operators(k: &KrausSet, w: &Matrix) -> Result<Vec<Matrix>> {
    let defect = w.unitarity_defect();
    if defect > 1e-8 {
        return Err(MbqcError::NonUnitary(defect));
    }
    Ok(k.rotated(w)?.ops().to_vec())
}

/// Physical unitary `u_ij = tr(G_j† V† G_i V) / (‖G_i‖‖G_j‖)` restricted to
/// the first `subset` basis elements, so that `Σ_j u_ij G_j = V† G_i V`.
pub fn adjoint_lift(v: &Matrix, basis: &OperatorBasis, subset: usize) -> Result<Matrix> {
    if v.dim() != basis.dim() {
        return Err(MbqcError::DimensionMismatch { expected: basis.dim(), found: v.dim() });
    }
    let defect = v.unitarity_defect();
    if defect > 1e-8 {
        return Err(MbqcError::NonUnitary(defect));
    }
    let subset = subset.min(basis.len());
    let norms = basis.norms();
    let vd = v.adjoint();
    let conj: Vec<Matrix> = basis.elements()[..subset].iter().map(|g| &(&vd * g) * v).collect();
    let u = Matrix::from_fn(subset, |i, j| basis.elements()[j].hs_inner(&conj[i]) / (norms[i] * norms[j]));
    let leak = u.unitarity_defect();
    if leak > 1e-8 {
        return Err(MbqcError::Leakage(leak));
    }
    Ok(u)
}

/// Measurement-basis rotation that induces `exp(−iθG)` conjugation on the
/// Kraus words (AKLT) or the diagonal pre-gate `exp(−iθG)` (cluster).
pub fn elementary_gate_rotation(r: &Resource, g: &Matrix, theta: f64) -> Result<Matrix> {
    let v = g.exp_hermitian(theta);
    if r.is_cluster() {
        let d = r.bond_dim();
        let off_diag = (0..d).flat_map(|a| (0..d).map(move |b| (a, b))).filter(|(a, b)| a != b);
        if off_diag.map(|(a, b)| g[(a, b)].norm()).fold(0.0, f64::max) > EPS {
            return Err(MbqcError::UnknownGenerator("cluster gates must be diagonal".into()));
        }
        return Ok(&fourier_k(d, 1)? * &v);
    }
    adjoint_lift(&v, r.table().basis(), r.kraus_word_count())
}

/// Named-generator form of [`elementary_gate_rotation`].
pub fn elementary_gate_plan(r: &Resource, generator: &str, theta: f64) -> Result<Matrix> {
    elementary_gate_rotation(r, &r.generator(generator)?, theta)
}

/// Measurement basis used for wire steps.
pub fn wire_rotation(r: &Resource) -> Result<Matrix> {
    if r.is_cluster() {
        fourier_k(r.bond_dim(), 1)
    } else {
        Ok(Matrix::identity(r.phys_dim()))
    }
}

/// Rotation for projection steps.
///
/// su(d): `diag(F, …, F, 1_{d−1})` on the X-power-major Kraus order.
/// so/sp: Kraus words `A` and `A' = c⁻¹·A·O` with `O = Z` on the last bond
/// qubit are paired into `A(1 ± O)/√2`. Cluster: the computational basis.
pub fn projection_basis(r: &Resource) -> Result<Matrix> {
    match r.spec() {
        ResourceSpec::Cluster { .. } => Ok(Matrix::identity(r.phys_dim())),
        ResourceSpec::Su { n, .. } => {
            let f = fourier_k(n, 1)?;
            let mut blocks = vec![f; n - 1];
            blocks.push(Matrix::identity(n - 1));
            Ok(Matrix::direct_sum(&blocks))
        }
        ResourceSpec::Spin1 => Err(MbqcError::NoProjectionBasis(r.spec().name())),
        _ => {
            let chi = r.bond_dim();
            let q = chi.trailing_zeros() as usize;
            let mut factors = vec![Matrix::identity(2); q];
            factors[q - 1] = pauli('Z').expect("Z");
            let o = Matrix::kron_all(&factors);
            let words = r.family().expect("family").kraus_words();
            let p = words.len();
            let mut w = Matrix::identity(p);
            let mut paired = vec![false; p];
            let s = std::f64::consts::FRAC_1_SQRT_2;
            for a in 0..p {
                if paired[a] {
                    continue;
                }
                let ao = &words.elements()[a] * &o;
                let partner = (a + 1..p).filter(|&b| !paired[b]).find_map(|b| {
                    let c = words.elements()[b].hs_inner(&ao) / chi as f64;
                    ((c.norm() - 1.0).abs() < 1e-9).then_some((b, c))
                });
                if let Some((b, c)) = partner {
                    paired[a] = true;
                    paired[b] = true;
                    // rows: A + c·A' and A − c·A'
                    w[(a, a)] = C64::new(s, 0.0);
                    w[(a, b)] = c * s;
                    w[(b, a)] = C64::new(s, 0.0);
                    w[(b, b)] = -c * s;
                }
            }
            Ok(w)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PullClass {
    Commute,
    Anticommute,
    Other,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PullThrough {
    pub word: Matrix,
    /// `T = B† V B`, so that `V · B = B · T`.
    pub transformed: Matrix,
    pub class: PullClass,
    /// Largest deviation among the identities checked for this class.
    pub deviation: f64,
}

/// Moves the byproduct `B` to the left of the pending gate `V = exp(−iθG)`.
pub fn byproduct_pullthrough(word: &Matrix, g: &Matrix, theta: f64) -> PullThrough {
    let v = g.exp_hermitian(theta);
    let transformed = &(&word.adjoint() * &v) * word;
    let mut deviation = (&v * word).dist(&(word * &transformed));
    let class = if word.commutes_with(g, EPS) {
        deviation = deviation.max(transformed.dist(&v));
        PullClass::Commute
    } else if word.anticommutes_with(g, EPS) {
        deviation = deviation.max(transformed.dist(&g.exp_hermitian(-theta)));
        // B·V induced by conjugation: V†BV = B·V²
        let enacted = &(&v.adjoint() * word) * &v;
        deviation = deviation.max(enacted.dist(&(word * &g.exp_hermitian(2.0 * theta))));
        PullClass::Anticommute
    } else {
        PullClass::Other
    };
    PullThrough { word: word.clone(), transformed, class, deviation }
}
