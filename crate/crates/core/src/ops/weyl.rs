//! Heisenberg-Weyl operators, generalized Fourier operators and the mutually
//! unbiased eigenbases of prime-dimensional qudits.

use crate::error::{MbqcError, Result};
use crate::linalg::{root_of_unity, Matrix, C64, ONE, ZERO};

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|p| p * p <= n).all(|p| !n.is_multiple_of(p))
}

/// Multiplicative inverse of `k` modulo `d`, if it exists.
pub fn mod_inverse(k: usize, d: usize) -> Option<usize> {
    (1..d).find(|&m| (k * m) % d == 1 % d)
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(MbqcError::InvalidDimension(d));
    }
    Ok(())
}

/// `X^j = Σ_ℓ |ℓ⟩⟨ℓ+j|`.
pub fn shift(d: usize, j: usize) -> Matrix {
    Matrix::from_fn(d, |r, c| if c == (r + j) % d { ONE } else { ZERO })
}

/// `Z^k = Σ_ℓ ω^{kℓ} |ℓ⟩⟨ℓ|`.
pub fn clock(d: usize, k: usize) -> Matrix {
    let diag: Vec<C64> = (0..d).map(|l| root_of_unity(d, (k * l) as i64)).collect();
    Matrix::diag(&diag)
}

/// `X^j Z^k` with exponents reduced mod `d`.
pub fn weyl(d: usize, j: usize, k: usize) -> Result<Matrix> {
    check_dim(d)?;
    Ok(&shift(d, j % d) * &clock(d, k % d))
}

/// The phase `ω^{jk}` in `X^j Z^k = ω^{jk} Z^k X^j`.
pub fn weyl_commutation_phase(d: usize, j: usize, k: usize) -> Result<C64> {
    check_dim(d)?;
    Ok(root_of_unity(d, ((j % d) * (k % d)) as i64))
}

/// `|ℓ⟩⟨ℓ|`.
pub fn basis_projector(d: usize, l: usize) -> Matrix {
    Matrix::from_fn(d, |r, c| if r == c && r == l % d { ONE } else { ZERO })
}

/// `|+_d⟩ = Σ_ℓ |ℓ⟩ / √d`.
pub fn plus_state(d: usize) -> Vec<C64> {
    vec![C64::new(1.0 / (d as f64).sqrt(), 0.0); d]
}

/// `(F_k)_{jℓ} = ω^{kjℓ}/√d` for any `k`; unitary only when `gcd(k, d) = 1`.
pub fn fourier_matrix(d: usize, k: usize) -> Matrix {
    let s = 1.0 / (d as f64).sqrt();
    Matrix::from_fn(d, |j, l| root_of_unity(d, (k * j * l) as i64) * s)
}

/// The generalized Fourier operator `F_k`.
pub fn fourier_k(d: usize, k: usize) -> Result<Matrix> {
    check_dim(d)?;
    if k == 0 || k >= d {
        return Err(MbqcError::OutOfRange(format!("Fourier index {k} for d = {d}")));
    }
    if gcd(k, d) != 1 {
        return Err(MbqcError::NotCoprime { k, d });
    }
    Ok(fourier_matrix(d, k))
}

/// `Π = Σ_ℓ |ℓ⟩⟨−ℓ|`.
pub fn permutation_pi(d: usize) -> Result<Matrix> {
    check_dim(d)?;
    Ok(Matrix::from_fn(d, |r, c| if (r + c) % d == 0 { ONE } else { ZERO }))
}

/// Label of `X^j Z^k` such as `X2Z`, `Z`, or `1`.
pub fn weyl_label(j: usize, k: usize) -> String {
    let part = |name: &str, p: usize| match p {
        0 => String::new(),
        1 => name.to_string(),
        _ => format!("{name}{p}"),
    };
    let s = format!("{}{}", part("X", j), part("Z", k));
    if s.is_empty() {
        "1".into()
    } else {
        s
    }
}

/// Parses labels produced by [`weyl_label`]; also accepts `X^2Z^3`.
pub fn parse_weyl_label(label: &str, d: usize) -> Option<(usize, usize)> {
    let s = label.replace('^', "");
    if s == "1" {
        return Some((0, 0));
    }
    let (mut j, mut k) = (0, 0);
    let mut chars = s.chars().peekable();
    let mut seen = String::new();
    while let Some(c) = chars.next() {
        if c != 'X' && c != 'Z' {
            return None;
        }
        if seen.contains(c) || (c == 'X' && seen.contains('Z')) {
            return None;
        }
        seen.push(c);
        let mut digits = String::new();
        while let Some(&n) = chars.peek() {
            if n.is_ascii_digit() {
                digits.push(n);
                chars.next();
            } else {
                break;
            }
        }
        let p: usize = if digits.is_empty() { 1 } else { digits.parse().ok()? };
        if c == 'X' {
            j = p % d;
        } else {
            k = p % d;
        }
    }
    (!seen.is_empty()).then_some((j, k))
}

/// The `d+1` operators `{Z, X, XZ, X²Z, …, X^{d−1}Z}` whose eigenbases are
/// mutually unbiased for prime `d`.
pub fn mub_operators(d: usize) -> Result<Vec<(String, Matrix)>> {
    check_dim(d)?;
    if !is_prime(d) {
        return Err(MbqcError::NotPrime(d));
    }
    let mut out = vec![(weyl_label(0, 1), weyl(d, 0, 1)?), (weyl_label(1, 0), weyl(d, 1, 0)?)];
    for j in 1..d {
        out.push((weyl_label(j, 1), weyl(d, j, 1)?));
    }
    Ok(out)
}

/// Eigenvectors of a unitary with non-degenerate spectrum, ordered by
/// eigenvalue angle in `[0, 2π)`. Each vector is phase-fixed so that its
/// largest component is real and positive.
pub fn unitary_eigenvectors(u: &Matrix) -> Option<Vec<(f64, Vec<C64>)>> {
    let d = u.dim();
    let tilt = C64::from_polar(1.0, -0.123_456_7);
    let h = &u.scale(tilt * 0.5) + &u.adjoint().scale(tilt.conj() * 0.5);
    let (_, vecs) = h.eigh();
    let mut out = Vec::with_capacity(d);
    for c in 0..d {
        let mut v = vecs.column(c);
        let w = u.apply(&v);
        let lambda: C64 = v.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
        let residual = w.iter().zip(&v).map(|(a, b)| (a - lambda * b).norm()).fold(0.0, f64::max);
        if residual > 1e-8 {
            return None;
        }
        let pivot = v.iter().cloned().max_by(|a, b| a.norm().total_cmp(&b.norm()))?;
        let fix = pivot.conj() / pivot.norm();
        v.iter_mut().for_each(|z| *z *= fix);
        out.push((lambda.arg().rem_euclid(2.0 * std::f64::consts::PI), v));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    let distinct = out.windows(2).all(|w| (w[1].0 - w[0].0).abs() > 1e-6);
    distinct.then_some(out)
}

/// Rank-one eigenprojectors of `X^j Z^k`; fails when the spectrum is degenerate.
pub fn weyl_eigenprojectors(d: usize, j: usize, k: usize) -> Result<Vec<Matrix>> {
    let w = weyl(d, j, k)?;
    let vecs = unitary_eigenvectors(&w)
        .ok_or_else(|| MbqcError::OutOfRange(format!("{} has a degenerate spectrum for d = {d}", weyl_label(j, k))))?;
    Ok(vecs.iter().map(|(_, v)| Matrix::outer(v, v)).collect())
}

/// All `d(d+1)` MUB eigenprojectors for prime `d`, grouped by operator.
pub fn mub_projectors(d: usize) -> Result<Vec<(String, Matrix)>> {
    let mut out = Vec::new();
    for (label, op) in mub_operators(d)? {
        let vecs = unitary_eigenvectors(&op).ok_or_else(|| MbqcError::OutOfRange(format!("{label} is degenerate")))?;
        for (idx, (_, v)) in vecs.iter().enumerate() {
            out.push((format!("{label}-mub:{idx}"), Matrix::outer(v, v)));
        }
    }
    Ok(out)
}
