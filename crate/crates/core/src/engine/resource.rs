use serde::{Deserialize, Serialize};

use super::byproduct::WordTable;
use crate::aklt::{AkltFamily, FamilyTag};
use crate::error::{MbqcError, Result};
use crate::linalg::{Matrix, I};
use crate::mps::KrausSet;
use crate::ops::{
    basis_projector, fourier_matrix, gcd, is_prime, mub_operators, parse_so_generator, parse_weyl_label, pauli,
    so_generator_label, unitary_eigenvectors, weyl, weyl_eigenprojectors, weyl_exponents_x_major, weyl_label,
    weyl_words_x_major,
};

/// A resource family as it appears in plans and on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum ResourceSpec {
    Spin1,
    Su {
        #[serde(rename = "N")]
        n: usize,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        transpose: bool,
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
    Cluster {
        d: usize,
        x: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        y: Option<usize>,
    },
}

impl ResourceSpec {
    pub fn aklt_tag(&self) -> Option<FamilyTag> {
        match *self {
            ResourceSpec::Spin1 => Some(FamilyTag::Spin1),
            ResourceSpec::Su { n, .. } => Some(FamilyTag::Su { n }),
            ResourceSpec::SoFund { l } => Some(FamilyTag::SoFund { l }),
            ResourceSpec::SoAdj { l } => Some(FamilyTag::SoAdj { l }),
            ResourceSpec::Sp { m } => Some(FamilyTag::Sp { m }),
            ResourceSpec::Cluster { .. } => None,
        }
    }

    pub fn name(&self) -> String {
        match (self, self.aklt_tag()) {
            (ResourceSpec::Cluster { d, x, y }, _) => format!("cluster(d={d},x={x},y={})", y.unwrap_or(d - x)),
            (ResourceSpec::Su { transpose: true, .. }, Some(t)) => format!("{}ᵀ", t.name()),
            (_, Some(t)) => t.name(),
            _ => unreachable!(),
        }
    }

    pub fn build(&self) -> Result<Resource> {
        Resource::new(*self)
    }
}

impl From<FamilyTag> for ResourceSpec {
    fn from(t: FamilyTag) -> Self {
        match t {
            FamilyTag::Spin1 => ResourceSpec::Spin1,
            FamilyTag::Su { n } => ResourceSpec::Su { n, transpose: false },
            FamilyTag::SoFund { l } => ResourceSpec::SoFund { l },
            FamilyTag::SoAdj { l } => ResourceSpec::SoAdj { l },
            FamilyTag::Sp { m } => ResourceSpec::Sp { m },
        }
    }
}

/// A resource prepared for correlation-space simulation.
///
/// Sites cycle through `sites`; site kind `k` carries Kraus set `sites[k]`
/// whose operators all factor as `frames[k] · (byproduct word or gate)`.
#[derive(Clone, Debug)]
pub struct Resource {
    spec: ResourceSpec,
    family: Option<AkltFamily>,
    sites: Vec<KrausSet>,
    frames: Vec<Matrix>,
    table: WordTable,
}

impl Resource {
    pub fn new(spec: ResourceSpec) -> Result<Self> {
        if let ResourceSpec::Cluster { d, x, y } = spec {
            let y = y.unwrap_or(d.wrapping_sub(x));
            for v in [x, y] {
                if d < 2 || v == 0 || v >= d {
                    return Err(MbqcError::OutOfRange(format!("cluster order {v} for d = {d}")));
                }
                if gcd(v, d) != 1 {
                    return Err(MbqcError::NotCoprime { k: v, d });
                }
            }
            let frame = |v| fourier_matrix(d, v);
            let kraus = |v| KrausSet::new((0..d).map(|s| &frame(v) * &basis_projector(d, s)).collect());
            return Ok(Self {
                spec,
                family: None,
                sites: vec![kraus(x)?, kraus(y)?],
                frames: vec![frame(x), frame(y)],
                table: WordTable::new(&weyl_words_x_major(d)?),
            });
        }
        let tag = spec.aklt_tag().expect("aklt family");
        let mut family = tag.build()?;
        if let ResourceSpec::Su { transpose: true, .. } = spec {
            family = family.transposed();
        }
        let chi = family.bond_dim();
        Ok(Self {
            spec,
            table: WordTable::new(family.byproduct_basis()),
            sites: vec![family.kraus().clone()],
            frames: vec![Matrix::identity(chi)],
            family: Some(family),
        })
    }

    pub fn spec(&self) -> ResourceSpec {
        self.spec
    }

    pub fn family(&self) -> Option<&AkltFamily> {
        self.family.as_ref()
    }

    pub fn is_cluster(&self) -> bool {
        self.family.is_none()
    }

    pub fn phys_dim(&self) -> usize {
        self.sites[0].phys_dim()
    }

    pub fn bond_dim(&self) -> usize {
        self.sites[0].bond_dim()
    }

    pub fn period(&self) -> usize {
        self.sites.len()
    }

    pub fn site(&self, step: usize) -> &KrausSet {
        &self.sites[step % self.sites.len()]
    }

    pub fn frame(&self, step: usize) -> &Matrix {
        &self.frames[step % self.frames.len()]
    }

    pub fn table(&self) -> &WordTable {
        &self.table
    }

    /// Number of leading byproduct words that are Kraus words.
    pub fn kraus_word_count(&self) -> usize {
        if self.is_cluster() {
            0
        } else {
            self.phys_dim()
        }
    }

    /// Rank of a projection hit: `χ/d` for su and cluster, `χ/2` otherwise.
    pub fn projection_rank(&self) -> usize {
        match self.spec {
            ResourceSpec::Su { .. } | ResourceSpec::Cluster { .. } => 1,
            _ => self.bond_dim() / 2,
        }
    }

    /// Hermitian `G` of the elementary gate `exp(−iθG)` named by `label`.
    pub fn generator(&self, label: &str) -> Result<Matrix> {
        let unknown = || MbqcError::UnknownGenerator(format!("{label} for {}", self.spec.name()));
        match self.spec {
            ResourceSpec::Spin1 => {
                let mut chars = label.chars();
                match (chars.next(), chars.next()) {
                    (Some(c @ ('X' | 'Y' | 'Z')), None) => Ok(pauli(c).expect("pauli")),
                    _ => Err(unknown()),
                }
            }
            ResourceSpec::Su { n, transpose } => {
                let (word, idx) = label
                    .strip_suffix("-mub")
                    .map(|w| (w, 0))
                    .map_or_else(
                        || {
                            let (w, rest) = label.split_once("-mub:")?;
                            Some((w, rest.parse().ok()?))
                        },
                        Some,
                    )
                    .ok_or_else(unknown)?;
                let (j, k) = parse_weyl_label(word, n).ok_or_else(unknown)?;
                if (j, k) == (0, 0) {
                    return Err(unknown());
                }
                let projs = weyl_eigenprojectors(n, j, k)?;
                let p = projs.get(idx).ok_or_else(unknown)?;
                let p = if transpose { p.transpose() } else { p.clone() };
                Ok(p.scale_real(-1.0))
            }
            ResourceSpec::SoFund { .. } | ResourceSpec::SoAdj { .. } => {
                let (a, b) = parse_so_generator(label).ok_or_else(unknown)?;
                let gens = crate::ops::so_spinor_generators(self.bond_dim().trailing_zeros() as usize)?;
                gens.position(&so_generator_label(a, b)).map(|i| gens.elements()[i].clone()).ok_or_else(unknown)
            }
            ResourceSpec::Sp { .. } => {
                let words = self.family.as_ref().expect("family").kraus_words();
                if let Ok(i) = label.parse::<usize>() {
                    return words.elements().get(i).cloned().ok_or_else(unknown);
                }
                words.position(label).map(|i| words.elements()[i].clone()).ok_or_else(unknown)
            }
            ResourceSpec::Cluster { d, .. } => {
                let (word, sine) = match label.strip_suffix(":s") {
                    Some(w) => (w, true),
                    None => (label, false),
                };
                let (j, k) = parse_weyl_label(word, d).ok_or_else(unknown)?;
                if j != 0 || k == 0 || (sine && 2 * k == d) {
                    return Err(unknown());
                }
                let z = weyl(d, 0, k)?;
                let zd = z.adjoint();
                Ok(if sine { (&z - &zd).scale(-I * 0.5) } else { (&z + &zd).scale_real(0.5) })
            }
        }
    }

    /// Every elementary generator label of the family.
    pub fn generator_labels(&self) -> Result<Vec<String>> {
        Ok(match self.spec {
            ResourceSpec::Spin1 => vec!["X".into(), "Y".into(), "Z".into()],
            ResourceSpec::Su { n, .. } => {
                let ops: Vec<String> = if is_prime(n) {
                    mub_operators(n)?.into_iter().map(|(l, _)| l).collect()
                } else {
                    weyl_exponents_x_major(n)
                        .into_iter()
                        .filter(|&(j, k)| weyl(n, j, k).ok().and_then(|w| unitary_eigenvectors(&w)).is_some())
                        .map(|(j, k)| weyl_label(j, k))
                        .collect()
                };
                ops.iter().flat_map(|l| (0..n).map(move |i| format!("{l}-mub:{i}"))).collect()
            }
            ResourceSpec::SoFund { l } | ResourceSpec::SoAdj { l } => {
                let n = 2 * l + 1;
                (1..=n).flat_map(|a| (a + 1..=n).map(move |b| so_generator_label(a, b))).collect()
            }
            ResourceSpec::Sp { .. } => self.family.as_ref().expect("family").kraus_words().labels().to_vec(),
            ResourceSpec::Cluster { d, .. } => {
                let mut out: Vec<String> = (1..=d / 2).map(|k| weyl_label(0, k)).collect();
                out.extend((1..d.div_ceil(2)).map(|k| format!("{}:s", weyl_label(0, k))));
                out
            }
        })
    }

    /// Operators whose Lie closure measures universality: the elementary
    /// generators, plus their frame conjugates for the cluster wire.
    pub fn universality_generators(&self) -> Result<Vec<Matrix>> {
        let mut out = Vec::new();
        for label in self.generator_labels()? {
            let g = self.generator(&label)?;
            if self.is_cluster() {
                let f = self.frame(0);
                out.push(&(&f.adjoint() * &g) * f);
            }
            out.push(g);
        }
        Ok(out)
    }

    /// Expected real dimension of the simulable Lie algebra.
    pub fn expected_algebra_dim(&self) -> usize {
        let chi = self.bond_dim();
        match self.spec {
            ResourceSpec::Spin1 | ResourceSpec::Su { .. } | ResourceSpec::Cluster { .. } => chi * chi - 1,
            ResourceSpec::SoFund { l } | ResourceSpec::SoAdj { l } => l * (2 * l + 1),
            ResourceSpec::Sp { m } => {
                let n = 1 << m;
                n * (2 * n + 1)
            }
        }
    }
}

/// `e^{iθ}`-free check that `m = c · projector` with `c ≠ 0`; returns the rank.
pub(crate) fn projector_rank(m: &Matrix, tol: f64) -> Option<usize> {
    let t = m.trace();
    if t.norm() < tol {
        return None;
    }
    let mp = m.scale(t.conj() / t.norm());
    if !mp.is_hermitian(tol) {
        return None;
    }
    let sq = &mp * &mp;
    let kappa = sq.trace().re / mp.trace().re;
    if kappa <= tol || !sq.approx_eq(&mp.scale_real(kappa), tol * kappa.max(1.0)) {
        return None;
    }
    Some((mp.trace().re / kappa).round() as usize)
}
