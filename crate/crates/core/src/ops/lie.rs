//! Generator sets of su(n), so(2ℓ+1) and sp(2n), plus Pauli words and the
//! symplectic structures they preserve.

use super::OperatorBasis;
use crate::error::{MbqcError, Result};
use crate::linalg::{Matrix, C64, I, ONE, ZERO};

pub fn pauli(c: char) -> Option<Matrix> {
    let m = match c {
        '1' | 'I' => Matrix::identity(2),
        'X' => Matrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]])?,
        'Y' => Matrix::from_rows(&[vec![ZERO, -I], vec![I, ZERO]])?,
        'Z' => Matrix::from_rows(&[vec![ONE, ZERO], vec![ZERO, -ONE]])?,
        _ => return None,
    };
    Some(m)
}

/// Tensor product of Pauli factors, first character as the most significant
/// factor: `pauli_word("XZ") = X ⊗ Z`.
pub fn pauli_word(word: &str) -> Result<Matrix> {
    let factors: Option<Vec<Matrix>> = word.chars().map(pauli).collect();
    match factors {
        Some(f) if !f.is_empty() => Ok(Matrix::kron_all(&f)),
        _ => Err(MbqcError::InvalidSpec(format!("bad Pauli word {word:?}"))),
    }
}

/// All `4^q` Pauli words on `q` qubits in lexicographic order over `1XYZ`.
pub fn all_pauli_words(q: usize) -> Vec<String> {
    let mut words = vec![String::new()];
    for _ in 0..q {
        words = words.iter().flat_map(|w| "1XYZ".chars().map(move |c| format!("{w}{c}"))).collect();
    }
    words
}

fn unit(n: usize, i: usize, j: usize) -> Matrix {
    Matrix::from_fn(n, |r, c| if r == i && c == j { ONE } else { ZERO })
}

/// `X_ij = (E_ij + E_ji)/2` (0-based indices).
pub fn gellmann_x(n: usize, i: usize, j: usize) -> Matrix {
    (&unit(n, i, j) + &unit(n, j, i)).scale_real(0.5)
}

/// `Y_ij = −i(E_ij − E_ji)/2` (0-based indices).
pub fn gellmann_y(n: usize, i: usize, j: usize) -> Matrix {
    (&unit(n, i, j) - &unit(n, j, i)).scale(C64::new(0.0, -0.5))
}

/// `Z_j = (Σ_{ℓ<j} E_ℓℓ − (j−1)E_jj)/√(2j(j−1))` with 1-based `j ≥ 2`.
pub fn gellmann_z(n: usize, j: usize) -> Matrix {
    let norm = (2.0 * (j * (j - 1)) as f64).sqrt();
    let diag: Vec<C64> = (1..=n)
        .map(|l| match l.cmp(&j) {
            std::cmp::Ordering::Less => C64::new(1.0 / norm, 0.0),
            std::cmp::Ordering::Equal => C64::new(-((j - 1) as f64) / norm, 0.0),
            std::cmp::Ordering::Greater => ZERO,
        })
        .collect();
    Matrix::diag(&diag)
}

/// The three Gell-Mann groups `({X_ij}, {Y_ij}, {Z_j})`, labelled with
/// 1-based indices and ordered lexicographically.
pub fn gellmann_groups(n: usize) -> (OperatorBasis, OperatorBasis, OperatorBasis) {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let xs = OperatorBasis::new(
        n,
        pairs.iter().map(|&(i, j)| gellmann_x(n, i, j)).collect(),
        pairs.iter().map(|&(i, j)| format!("X{}{}", i + 1, j + 1)).collect(),
    );
    let ys = OperatorBasis::new(
        n,
        pairs.iter().map(|&(i, j)| gellmann_y(n, i, j)).collect(),
        pairs.iter().map(|&(i, j)| format!("Y{}{}", i + 1, j + 1)).collect(),
    );
    let zs =
        OperatorBasis::new(n, (2..=n).map(|j| gellmann_z(n, j)).collect(), (2..=n).map(|j| format!("Z{j}")).collect());
    (xs, ys, zs)
}

/// The `n²−1` generalized Gell-Mann matrices, `{X_ij}`, then `{Y_ij}`, then `{Z_j}`.
pub fn gellmann_basis(n: usize) -> Result<OperatorBasis> {
    if n < 2 {
        return Err(MbqcError::InvalidDimension(n));
    }
    let (xs, ys, zs) = gellmann_groups(n);
    Ok(xs.concat(&ys).concat(&zs))
}

/// The su(3) ladder operators in the order
/// `(V⁻, U⁺, I⁺, I⁻, V⁺, U⁻, √2T³, √2T⁸)` with `T^a = (√3/2)λ_a`,
/// so that every element has squared Hilbert-Schmidt norm 3.
pub fn su3_ladder_basis() -> OperatorBasis {
    let s3 = 3f64.sqrt();
    let e = |i, j| unit(3, i, j).scale_real(s3);
    let t3 = Matrix::diag(&[ONE, -ONE, ZERO]).scale_real(s3 / 2.0 * 2f64.sqrt());
    let t8 = Matrix::diag(&[ONE, ONE, C64::new(-2.0, 0.0)]).scale_real(0.5 * 2f64.sqrt());
    OperatorBasis::new(
        3,
        vec![e(2, 0), e(1, 2), e(0, 1), e(1, 0), e(0, 2), e(2, 1), t3, t8],
        ["V-", "U+", "I+", "I-", "V+", "U-", "T3", "T8"].iter().map(|s| s.to_string()).collect(),
    )
}

/// Clifford words for `2^ℓ`-dimensional spinors: `{X, Y, Z}` for `ℓ = 1`,
/// then `Γ_i = X⊗Γ'_i`, `Γ_{2ℓ} = Y⊗1`, `Γ_{2ℓ+1} = Z⊗1`.
pub fn clifford_words(l: usize) -> Result<Vec<String>> {
    if l == 0 {
        return Err(MbqcError::OutOfRange("ℓ must be at least 1".into()));
    }
    let mut words: Vec<String> = vec!["X".into(), "Y".into(), "Z".into()];
    for level in 2..=l {
        let pad = "1".repeat(level - 1);
        let mut next: Vec<String> = words.iter().map(|w| format!("X{w}")).collect();
        next.push(format!("Y{pad}"));
        next.push(format!("Z{pad}"));
        words = next;
    }
    Ok(words)
}

pub fn clifford_matrices(l: usize) -> Result<OperatorBasis> {
    let words = clifford_words(l)?;
    let elements = words.iter().map(|w| pauli_word(w)).collect::<Result<Vec<_>>>()?;
    Ok(OperatorBasis::new(1 << l, elements, words))
}

/// Spinor generators `Γ^{ab} = −iΓ^aΓ^b` for `a < b`, labelled `G{a}{b}`
/// with 1-based indices (comma-separated when an index exceeds 9).
pub fn so_spinor_generators(l: usize) -> Result<OperatorBasis> {
    let gammas = clifford_matrices(l)?;
    let n = gammas.len();
    let mut elements = Vec::new();
    let mut labels = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            elements.push((&gammas.elements()[a] * &gammas.elements()[b]).scale(-I));
            labels.push(so_generator_label(a + 1, b + 1));
        }
    }
    Ok(OperatorBasis::new(gammas.dim(), elements, labels))
}

pub fn so_generator_label(a: usize, b: usize) -> String {
    if a < 10 && b < 10 {
        format!("G{a}{b}")
    } else {
        format!("G{a},{b}")
    }
}

/// Parses `G12` or `G3,11` into 1-based `(a, b)` with `a < b`.
pub fn parse_so_generator(label: &str) -> Option<(usize, usize)> {
    let rest = label.strip_prefix('G')?;
    let (a, b): (usize, usize) = if let Some((a, b)) = rest.split_once(',') {
        (a.parse().ok()?, b.parse().ok()?)
    } else if rest.len() == 2 && rest.is_ascii() {
        (rest[..1].parse().ok()?, rest[1..].parse().ok()?)
    } else {
        return None;
    };
    (a >= 1 && a < b).then_some((a, b))
}

const SIGMAS: [char; 3] = ['X', 'Y', 'Z'];

/// The `n(2n+1)` generators `{X_ij⊗σ_k, Y_ij⊗1, Z_j⊗σ_k, 1_n⊗σ_k}` built from
/// the Gell-Mann matrices of su(n).
pub fn sp_generators(n: usize) -> Result<OperatorBasis> {
    if n < 2 {
        return Err(MbqcError::OutOfRange(format!("sp generators need n ≥ 2, got {n}")));
    }
    let (xs, ys, zs) = gellmann_groups(n);
    let one2 = Matrix::identity(2);
    let mut elements = Vec::new();
    let mut labels = Vec::new();
    for (m, l) in xs.iter() {
        for s in SIGMAS {
            elements.push(m.kron(&pauli(s).unwrap()));
            labels.push(format!("{l}.{s}"));
        }
    }
    for (m, l) in ys.iter() {
        elements.push(m.kron(&one2));
        labels.push(format!("{l}.1"));
    }
    for (m, l) in zs.iter() {
        for s in SIGMAS {
            elements.push(m.kron(&pauli(s).unwrap()));
            labels.push(format!("{l}.{s}"));
        }
    }
    for s in SIGMAS {
        elements.push(Matrix::identity(n).kron(&pauli(s).unwrap()));
        labels.push(format!("1.{s}"));
    }
    Ok(OperatorBasis::new(2 * n, elements, labels))
}

/// Pauli-word versions of `({X_ij}, {Y_ij}, {Z_j})` for `n = 2^m`, grown by
/// the set recursion that appends one qubit per level.
pub fn sp_pauli_sets(m: usize) -> Result<(Vec<String>, Vec<String>, Vec<String>)> {
    if m == 0 {
        return Err(MbqcError::OutOfRange("sp needs m ≥ 1".into()));
    }
    fn app(set: &[String], c: char) -> Vec<String> {
        set.iter().map(|w| format!("{w}{c}")).collect()
    }
    let mut xs = vec!["X".to_string()];
    let mut ys = vec!["Y".to_string()];
    let mut zs = vec!["Z".to_string()];
    for level in 1..m {
        let one = "1".repeat(level);
        let mut nx = app(&xs, '1');
        nx.extend(app(&xs, 'X'));
        nx.extend(app(&xs, 'Z'));
        nx.extend(app(&ys, 'Y'));
        nx.extend(app(&zs, 'X'));
        nx.push(format!("{one}X"));
        let mut ny = app(&ys, '1');
        ny.extend(app(&ys, 'X'));
        ny.extend(app(&ys, 'Z'));
        ny.extend(app(&xs, 'Y'));
        ny.extend(app(&zs, 'Y'));
        ny.push(format!("{one}Y"));
        let mut nz = app(&zs, '1');
        nz.extend(app(&zs, 'Z'));
        nz.push(format!("{one}Z"));
        xs = nx;
        ys = ny;
        zs = nz;
    }
    Ok((xs, ys, zs))
}

/// The canonical Pauli-word generators of sp(2n), `n = 2^m`, in the order
/// `{X_ij⊗σ_k, Y_ij⊗1, Z_j⊗σ_k, 1⊗σ_k}`.
pub fn sp_canonical_words(m: usize) -> Result<Vec<String>> {
    let (xs, ys, zs) = sp_pauli_sets(m)?;
    let one = "1".repeat(m);
    let mut words = Vec::new();
    for w in &xs {
        words.extend(SIGMAS.iter().map(|s| format!("{w}{s}")));
    }
    words.extend(ys.iter().map(|w| format!("{w}1")));
    for w in &zs {
        words.extend(SIGMAS.iter().map(|s| format!("{w}{s}")));
    }
    words.extend(SIGMAS.iter().map(|s| format!("{one}{s}")));
    Ok(words)
}

/// Canonical (Pauli-word) sp(2n) generators; `n` must be a power of two.
pub fn sp_canonical_generators(n: usize) -> Result<OperatorBasis> {
    if n < 2 || !n.is_power_of_two() {
        return Err(MbqcError::NotPowerOfTwo(n));
    }
    let m = n.trailing_zeros() as usize;
    let words = sp_canonical_words(m)?;
    let elements = words.iter().map(|w| pauli_word(w)).collect::<Result<Vec<_>>>()?;
    Ok(OperatorBasis::new(2 * n, elements, words))
}

fn j2() -> Matrix {
    Matrix::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]).unwrap()
}

/// `Δ = 1_n ⊗ [[0,−1],[1,0]]`, the form preserved by the sp(2n) generators in
/// the `A ⊗ σ_k` ordering.
pub fn symplectic_form(n: usize) -> Result<Matrix> {
    if n == 0 {
        return Err(MbqcError::InvalidDimension(0));
    }
    Ok(Matrix::identity(n).kron(&j2()))
}

/// `Δ = [[0,−1_n],[1_n,0]]`, the split form preserved by rebit embeddings.
pub fn split_symplectic_form(n: usize) -> Result<Matrix> {
    if n == 0 {
        return Err(MbqcError::InvalidDimension(0));
    }
    Ok(j2().kron(&Matrix::identity(n)))
}

/// `S_U = [[V, −W], [W, V]]` for `U = V + iW`.
pub fn rebit_embed(u: &Matrix) -> Result<Matrix> {
    let defect = u.unitarity_defect();
    if defect > crate::linalg::EPS {
        return Err(MbqcError::NonUnitary(defect));
    }
    let n = u.dim();
    Ok(Matrix::from_fn(2 * n, |r, c| {
        let z = u[(r % n, c % n)];
        match (r < n, c < n) {
            (true, true) | (false, false) => C64::new(z.re, 0.0),
            (true, false) => C64::new(-z.im, 0.0),
            (false, true) => C64::new(z.im, 0.0),
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::EPS;

    #[test]
    fn gellmann_counts_and_properties() {
        for n in 2..=5 {
            let b = gellmann_basis(n).unwrap();
            assert_eq!(b.len(), n * n - 1);
            for (m, _) in b.iter() {
                assert!(m.is_hermitian(EPS));
                assert!(m.trace().norm() < EPS);
                assert!((m.hs_inner(m).re - 0.5).abs() < EPS);
            }
            assert!(b.orthogonality_defect() < EPS);
        }
        let b2 = gellmann_basis(2).unwrap();
        for (m, c) in b2.elements().iter().zip(['X', 'Y', 'Z']) {
            assert!(m.approx_eq(&pauli(c).unwrap().scale_real(0.5), EPS));
        }
    }

    #[test]
    fn clifford_examples() {
        assert_eq!(clifford_words(1).unwrap(), ["X", "Y", "Z"]);
        assert_eq!(clifford_words(2).unwrap(), ["XX", "XY", "XZ", "Y1", "Z1"]);
        let g3 = clifford_matrices(3).unwrap();
        assert_eq!(g3.len(), 7);
        for (a, ga) in g3.elements().iter().enumerate() {
            for (b, gb) in g3.elements().iter().enumerate() {
                let expected = if a == b { Matrix::identity(8).scale_real(2.0) } else { Matrix::zeros(8) };
                assert!(ga.anticommutator(gb).approx_eq(&expected, EPS));
            }
        }
    }

    #[test]
    fn spinor_generators_match_the_ten_words() {
        let g = so_spinor_generators(2).unwrap();
        assert_eq!(g.len(), 10);
        for w in ["1X", "1Y", "1Z", "ZX", "ZY", "ZZ", "YX", "YY", "YZ", "X1"] {
            let p = pauli_word(w).unwrap();
            let hit = g.elements().iter().any(|m| m.approx_eq(&p, EPS) || m.approx_eq(&p.scale_real(-1.0), EPS));
            assert!(hit, "{w} missing");
        }
        for (m, _) in g.iter() {
            assert!(m.is_hermitian(EPS) && m.is_unitary(EPS) && m.trace().norm() < EPS);
        }
        assert_eq!(parse_so_generator("G12"), Some((1, 2)));
        assert_eq!(parse_so_generator("G3,11"), Some((3, 11)));
        assert_eq!(parse_so_generator("G21"), None);
    }

    #[test]
    fn sp_canonical_words_match_tables() {
        let w2 = sp_canonical_words(1).unwrap();
        assert_eq!(w2, ["XX", "XY", "XZ", "Y1", "ZX", "ZY", "ZZ", "1X", "1Y", "1Z"]);
        let w4 = sp_canonical_words(2).unwrap();
        assert_eq!(w4.len(), 36);
        let mut expected: Vec<String> = Vec::new();
        for p in ["1X", "X1", "XX", "ZX", "XZ", "YY", "Z1", "1Z", "ZZ", "11"] {
            for s in SIGMAS {
                expected.push(format!("{p}{s}"));
            }
        }
        for p in ["1Y", "Y1", "YX", "ZY", "YZ", "XY"] {
            expected.push(format!("{p}1"));
        }
        let mut got = w4.clone();
        got.sort();
        expected.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn sp_canonical_spans_gellmann_groups() {
        for m in 1..=3 {
            let n = 1 << m;
            let (gx, gy, gz) = gellmann_groups(n);
            let (px, py, pz) = sp_pauli_sets(m).unwrap();
            for (g, p) in [(gx, px), (gy, py), (gz, pz)] {
                let elements = p.iter().map(|w| pauli_word(w).unwrap()).collect();
                let pb = OperatorBasis::new(n, elements, p.clone());
                assert!(crate::ops::basis_change(&g, &pb).is_ok(), "m={m}");
            }
        }
    }

    #[test]
    fn symplectic_forms() {
        assert!(symplectic_form(1).unwrap().approx_eq(&j2(), EPS));
        for n in 1..=4 {
            let d = symplectic_form(n).unwrap();
            assert!(d.transpose().approx_eq(&d.scale_real(-1.0), EPS));
            assert!((&d * &d).approx_eq(&Matrix::identity(2 * n).scale_real(-1.0), EPS));
        }
        let delta = symplectic_form(2).unwrap();
        for (g, _) in sp_generators(2).unwrap().iter() {
            let u = g.exp_hermitian(0.731);
            assert!((&(&u.transpose() * &delta) * &u).approx_eq(&delta, 1e-9));
        }
        assert_eq!(sp_generators(3).unwrap().len(), 21);
        assert_eq!(sp_canonical_generators(3).unwrap_err(), MbqcError::NotPowerOfTwo(3));
    }

    #[test]
    fn rebit_embedding_examples() {
        assert!(rebit_embed(&Matrix::identity(3)).unwrap().approx_eq(&Matrix::identity(6), EPS));
        let iz = pauli('Z').unwrap().scale(I);
        let s = rebit_embed(&iz).unwrap();
        let delta = split_symplectic_form(2).unwrap();
        assert!(s.is_real(EPS));
        assert!((&s.transpose() * &s).approx_eq(&Matrix::identity(4), EPS));
        assert!((&(&s.transpose() * &delta) * &s).approx_eq(&delta, EPS));
        assert!(rebit_embed(&Matrix::identity(2).scale_real(2.0)).is_err());
    }
}
