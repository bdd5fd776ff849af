//! AKLT-type resource states with SU(N), SO(2ℓ+1) and Sp(2n) symmetry.
//!
//! Every family stores unitary Kraus words with equal weight `1/√p`, so each
//! measurement outcome occurs with probability `1/p` whatever the input.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::engine::adjoint_lift;
use crate::error::{MbqcError, Result};
use crate::linalg::Matrix;
use crate::mps::{check_symmetry_condition, KrausSet};
use crate::ops::{
    all_pauli_words, clifford_matrices, gellmann_basis, pauli_word, so_spinor_generators, sp_canonical_generators,
    weyl_words_x_major, OperatorBasis,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilyTag {
    Spin1,
    Su {
        #[serde(rename = "N")]
        n: usize,
    },
    SoFund {
        l: usize,
    },
    SoAdj {
        l: usize,
    },
    Sp {
        m: usize,
    },
}

impl FamilyTag {
    /// `(phys_dim, bond_dim)`.
    pub fn dims(&self) -> (usize, usize) {
        match *self {
            FamilyTag::Spin1 => (3, 2),
            FamilyTag::Su { n } => (n * n - 1, n),
            FamilyTag::SoFund { l } => (2 * l + 1, 1 << l),
            FamilyTag::SoAdj { l } => (l * (2 * l + 1), 1 << l),
            FamilyTag::Sp { m } => {
                let n = 1 << m;
                (n * (2 * n + 1), 2 * n)
            }
        }
    }

    pub fn name(&self) -> String {
        match *self {
            FamilyTag::Spin1 => "spin1".into(),
            FamilyTag::Su { n } => format!("su({n})"),
            FamilyTag::SoFund { l } => format!("so-fund(l={l})"),
            FamilyTag::SoAdj { l } => format!("so-adj(l={l})"),
            FamilyTag::Sp { m } => format!("sp(m={m})"),
        }
    }

    pub fn build(&self) -> Result<AkltFamily> {
        match *self {
            FamilyTag::Spin1 => spin1_kraus(),
            FamilyTag::Su { n } => su_family(n),
            FamilyTag::SoFund { l } => so_fund_family(l),
            FamilyTag::SoAdj { l } => so_adj_family(l),
            FamilyTag::Sp { m } => sp_family(m),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AkltFamily {
    tag: FamilyTag,
    transposed: bool,
    kraus: KrausSet,
    byproduct_basis: OperatorBasis,
    lie_generators: OperatorBasis,
}

impl AkltFamily {
    fn new(
        tag: FamilyTag,
        words: OperatorBasis,
        completion: OperatorBasis,
        lie_generators: OperatorBasis,
    ) -> Result<Self> {
        let kraus = KrausSet::uniform(words.elements())?;
        Ok(Self { tag, transposed: false, kraus, byproduct_basis: words.concat(&completion), lie_generators })
    }

    pub fn tag(&self) -> FamilyTag {
        self.tag
    }

    pub fn is_transposed(&self) -> bool {
        self.transposed
    }

    pub fn phys_dim(&self) -> usize {
        self.kraus.phys_dim()
    }

    pub fn bond_dim(&self) -> usize {
        self.kraus.bond_dim()
    }

    pub fn kraus(&self) -> &KrausSet {
        &self.kraus
    }

    /// Unitary byproduct words; the first `phys_dim` are the Kraus words.
    pub fn byproduct_basis(&self) -> &OperatorBasis {
        &self.byproduct_basis
    }

    /// The Kraus words without the weight.
    pub fn kraus_words(&self) -> OperatorBasis {
        self.byproduct_basis.select(&(0..self.phys_dim()).collect::<Vec<_>>())
    }

    /// Hermitian generators of the virtual symmetry algebra.
    pub fn lie_generators(&self) -> &OperatorBasis {
        &self.lie_generators
    }

    /// The spatially inverted state: every Kraus and byproduct word transposed.
    pub fn transposed(&self) -> Self {
        let t = |b: &OperatorBasis| {
            OperatorBasis::new(b.dim(), b.elements().iter().map(Matrix::transpose).collect(), b.labels().to_vec())
        };
        Self {
            tag: self.tag,
            transposed: !self.transposed,
            kraus: self.kraus.transposed(),
            byproduct_basis: t(&self.byproduct_basis),
            lie_generators: OperatorBasis::new(
                self.lie_generators.dim(),
                self.lie_generators.elements().iter().map(|g| g.transpose().scale_real(-1.0)).collect(),
                self.lie_generators.labels().to_vec(),
            ),
        }
    }
}

fn pauli_basis(words: &[String]) -> Result<OperatorBasis> {
    let dim = 1 << words.first().map_or(0, String::len);
    let elements = words.iter().map(|w| pauli_word(w)).collect::<Result<Vec<_>>>()?;
    Ok(OperatorBasis::new(dim, elements, words.to_vec()))
}

/// Non-identity Pauli words on `q` qubits that are not ± a member of `taken`.
fn pauli_completion(q: usize, taken: &OperatorBasis) -> Result<OperatorBasis> {
    let chi = (1usize << q) as f64;
    let rest: Vec<String> = all_pauli_words(q)
        .into_iter()
        .skip(1)
        .filter(|w| {
            let m = pauli_word(w).expect("valid word");
            taken.elements().iter().all(|t| t.hs_inner(&m).norm() < 0.5 * chi)
        })
        .collect();
    if rest.is_empty() {
        return Ok(OperatorBasis::new(taken.dim(), Vec::new(), Vec::new()));
    }
    pauli_basis(&rest)
}

/// Spin-1 AKLT: `{X, Y, Z}/√3` on a qubit bond.
pub fn spin1_kraus() -> Result<AkltFamily> {
    let words = pauli_basis(&["X".into(), "Y".into(), "Z".into()])?;
    let empty = OperatorBasis::new(2, Vec::new(), Vec::new());
    AkltFamily::new(FamilyTag::Spin1, words.clone(), empty, words)
}

/// SU(N) AKLT in the Weyl-word picture: the `N²−1` words `X^jZ^k`.
pub fn su_family(n: usize) -> Result<AkltFamily> {
    if n < 2 {
        return Err(MbqcError::InvalidDimension(n));
    }
    let words = weyl_words_x_major(n)?;
    let empty = OperatorBasis::new(n, Vec::new(), Vec::new());
    AkltFamily::new(FamilyTag::Su { n }, words, empty, gellmann_basis(n)?)
}

/// SO(2ℓ+1) AKLT with the fundamental on-site irrep: Clifford matrices.
pub fn so_fund_family(l: usize) -> Result<AkltFamily> {
    let words = clifford_matrices(l)?;
    let completion = pauli_completion(l, &words)?;
    AkltFamily::new(FamilyTag::SoFund { l }, words, completion, so_spinor_generators(l)?)
}

/// SO(2ℓ+1) AKLT with the adjoint on-site irrep: spinor generators `Γ^{ab}`.
pub fn so_adj_family(l: usize) -> Result<AkltFamily> {
    let words = so_spinor_generators(l)?;
    let completion = pauli_completion(l, &words)?;
    AkltFamily::new(FamilyTag::SoAdj { l }, words.clone(), completion, words)
}

/// Sp(2n) AKLT, `n = 2^m`: the canonical Pauli-word generators.
pub fn sp_family(m: usize) -> Result<AkltFamily> {
    if m == 0 || m > 8 {
        return Err(MbqcError::OutOfRange(format!("sp family needs 1 ≤ m ≤ 8, got {m}")));
    }
    let words = sp_canonical_generators(1 << m)?;
    let completion = pauli_completion(m + 1, &words)?;
    AkltFamily::new(FamilyTag::Sp { m }, words.clone(), completion, words)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySymmetryReport {
    pub samples: usize,
    pub max_deviation: f64,
    pub pass: bool,
}

/// Samples `V = exp(−iθG)` with `G` a random real combination of the family's
/// Lie generators and checks `Σ_j u_ij A_j = V†A_iV` with `U` the adjoint lift.
pub fn verify_family_symmetry(f: &AkltFamily, samples: usize, seed: u64) -> Result<FamilySymmetryReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words = f.byproduct_basis();
    let p = f.phys_dim();
    let mut max_deviation: f64 = 0.0;
    for _ in 0..samples {
        let mut g = Matrix::zeros(f.bond_dim());
        for gen in f.lie_generators().elements() {
            g = &g + &gen.scale_real(rng.random_range(-1.0..1.0));
        }
        let theta = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let v = g.exp_hermitian(theta);
        let u = adjoint_lift(&v, words, p)?;
        let report = check_symmetry_condition(f.kraus(), &u, &v)?;
        max_deviation = max_deviation.max(report.deviation);
    }
    Ok(FamilySymmetryReport { samples, max_deviation, pass: max_deviation < 1e-7 })
}

/// Every family of the success-probability table at desk sizes.
pub fn desk_families() -> Vec<FamilyTag> {
    let mut out = vec![FamilyTag::Spin1];
    out.extend((2..=5).map(|n| FamilyTag::Su { n }));
    out.extend((1..=3).map(|l| FamilyTag::SoFund { l }));
    out.extend((1..=3).map(|l| FamilyTag::SoAdj { l }));
    out.extend((1..=2).map(|m| FamilyTag::Sp { m }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::EPS;
    use crate::mps::validate_channel;
    use crate::ops::{basis_change, symplectic_form};

    #[test]
    fn table_dimensions_and_channels() {
        for tag in desk_families() {
            let f = tag.build().unwrap();
            assert_eq!((f.phys_dim(), f.bond_dim()), tag.dims(), "{}", tag.name());
            assert!(validate_channel(f.kraus()).pass, "{}", tag.name());
            for w in f.byproduct_basis().elements() {
                assert!(w.is_unitary(EPS));
            }
            let chi = f.bond_dim();
            assert_eq!(f.byproduct_basis().len(), chi * chi - 1, "{}", tag.name());
            assert!(f.byproduct_basis().orthogonality_defect() < EPS);
        }
    }

    #[test]
    fn kraus_counts_from_examples() {
        assert_eq!(su_family(3).unwrap().phys_dim(), 8);
        assert_eq!(su_family(5).unwrap().phys_dim(), 24);
        assert_eq!(so_fund_family(2).unwrap().phys_dim(), 5);
        assert_eq!(so_fund_family(3).unwrap().bond_dim(), 8);
        assert_eq!(so_adj_family(2).unwrap().phys_dim(), 10);
        assert_eq!(sp_family(2).unwrap().phys_dim(), 36);
    }

    #[test]
    fn spin1_matches_su2_up_to_relabeling() {
        let s = spin1_kraus().unwrap();
        let su2 = su_family(2).unwrap();
        let u = basis_change(&s.kraus_words(), &su2.kraus_words()).unwrap();
        // every row has a single unimodular entry
        for r in 0..3 {
            let nz: Vec<f64> = u.row(r).iter().map(|z| z.norm()).filter(|&x| x > 1e-9).collect();
            assert_eq!(nz.len(), 1);
            assert!((nz[0] - 1.0).abs() < EPS);
        }
    }

    #[test]
    fn hermiticity_of_words() {
        for l in 1..=3 {
            for w in so_fund_family(l).unwrap().kraus_words().elements() {
                assert!(w.is_hermitian(EPS) && w.is_unitary(EPS));
            }
        }
        let su3 = su_family(3).unwrap();
        assert!(su3.kraus_words().elements().iter().any(|w| !w.is_hermitian(EPS)));
    }

    #[test]
    fn sp_words_preserve_symplectic_form() {
        for m in 1..=2 {
            let f = sp_family(m).unwrap();
            let delta = symplectic_form(1 << m).unwrap();
            for g in f.kraus_words().elements() {
                let u = g.exp_hermitian(0.613);
                assert!((&(&u.transpose() * &delta) * &u).approx_eq(&delta, 1e-9));
            }
        }
    }

    #[test]
    fn sp_m1_equivalent_to_so_adj_l2() {
        let sp = sp_family(1).unwrap().kraus_words();
        let so = so_adj_family(2).unwrap().kraus_words();
        let i = crate::linalg::I;
        let one = crate::linalg::ONE;
        let s_gate = Matrix::diag(&[one, i]).kron(&Matrix::identity(2));
        let matches = |t: &Matrix| {
            so.elements().iter().all(|w| {
                let c = &(t * w) * &t.adjoint();
                sp.elements().iter().any(|x| c.approx_eq(x, EPS) || c.approx_eq(&x.scale_real(-1.0), EPS))
            })
        };
        assert!(matches(&s_gate) || matches(&s_gate.adjoint()));
    }

    #[test]
    fn symmetry_holds_for_random_group_elements() {
        for tag in [
            FamilyTag::Spin1,
            FamilyTag::Su { n: 3 },
            FamilyTag::SoFund { l: 2 },
            FamilyTag::SoAdj { l: 2 },
            FamilyTag::Sp { m: 1 },
        ] {
            let f = tag.build().unwrap();
            let r = verify_family_symmetry(&f, 10, 7).unwrap();
            assert!(r.pass, "{} {r:?}", tag.name());
        }
        let r = verify_family_symmetry(&su_family(3).unwrap().transposed(), 5, 1).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn family_tags_parse_from_json() {
        let t: FamilyTag = serde_json::from_str(r#"{"family":"su","N":3}"#).unwrap();
        assert_eq!(t, FamilyTag::Su { n: 3 });
        let t: FamilyTag = serde_json::from_str(r#"{"family":"so-fund","l":2}"#).unwrap();
        assert_eq!(t, FamilyTag::SoFund { l: 2 });
        let t: FamilyTag = serde_json::from_str(r#"{"family":"spin1"}"#).unwrap();
        assert_eq!(t, FamilyTag::Spin1);
    }
}
