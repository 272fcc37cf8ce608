//! Hamiltonian families `Ĥ(λ) = Σ_i λ_i Ĥ_i`: lattice density-functional
//! families and the truncated harmonic-oscillator family.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::fock::{
    enumerate_basis, hopping_operator, interaction_operator, number_operator, FockBasis, Operator,
    Statistics,
};
use crate::linalg::{eigh, CMatrix};
use crate::surd::{ExactEntry, Surd};
use crate::CoreError;

/// What kind of operator subspace a family spans.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FamilyKind {
    Dft {
        sites: usize,
        particles: usize,
        statistics: Statistics,
    },
    Oscillator {
        truncation: usize,
    },
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDescriptor {
    /// Hilbert-space dimension `N`.
    pub hilbert_dim: usize,
    /// Number of basis operators `M`.
    pub family_dim: usize,
    #[serde(flatten)]
    pub kind: FamilyKind,
}

/// Lattice model parameters. Sites are 0-based; all values exact.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelSpec {
    pub sites: usize,
    pub particles: usize,
    pub statistics: Statistics,
    /// Symmetric hopping amplitudes `t_ij` with zero diagonal.
    pub hopping: Vec<Vec<BigRational>>,
    /// On-site interaction `U` multiplying `n̂_i (n̂_i − 1) / 2`.
    pub onsite: BigRational,
    /// Symmetric inter-site interactions `U′_ij` multiplying `n̂_i n̂_j` for `i < j`.
    pub intersite: Vec<Vec<BigRational>>,
    /// Default external potentials `V_i`.
    pub potentials: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl ModelSpec {
    /// Two-site model with hopping `t`, on-site `U` and inter-site `U′`.
    pub fn dimer(
        particles: usize,
        statistics: Statistics,
        t: BigRational,
        onsite: BigRational,
        intersite: BigRational,
    ) -> Self {
        let z = BigRational::zero();
        ModelSpec {
            sites: 2,
            particles,
            statistics,
            hopping: vec![vec![z.clone(), t.clone()], vec![t, z.clone()]],
            onsite,
            intersite: vec![vec![z.clone(), intersite.clone()], vec![intersite, z.clone()]],
            potentials: vec![z.clone(), z],
        }
    }

    /// The two-boson dimer with `t = 1, U = 1, U′ = 0`.
    pub fn toy() -> Self {
        Self::dimer(2, Statistics::Bose, rat(1), rat(1), rat(0))
    }

    /// Checks shapes and symmetry; returns warnings for parameters that have no effect.
    pub fn validate(&self) -> Result<Vec<String>, CoreError> {
        let q = self.sites;
        let bad = |m: String| Err(CoreError::InvalidSpec(m));
        if q == 0 || self.particles == 0 {
            return bad("sites and particles must be positive".into());
        }
        for (name, mat) in [("hopping", &self.hopping), ("intersite", &self.intersite)] {
            if mat.len() != q || mat.iter().any(|r| r.len() != q) {
                return bad(format!("{name} matrix must be {q}x{q}"));
            }
            for i in 0..q {
                for j in 0..q {
                    if mat[i][j] != mat[j][i] {
                        return bad(format!("{name} matrix is not symmetric at ({i},{j})"));
                    }
                }
            }
        }
        if (0..q).any(|i| !self.hopping[i][i].is_zero()) {
            return bad("hopping matrix must have a zero diagonal".into());
        }
        if self.potentials.len() != q {
            return bad(format!("expected {q} potentials, found {}", self.potentials.len()));
        }
        let mut warnings = Vec::new();
        if self.statistics == Statistics::Fermi && !self.onsite.is_zero() {
            warnings.push("on-site U has no effect for spinless fermions".to_string());
        }
        if (0..q).any(|i| !self.intersite[i][i].is_zero()) {
            warnings.push("diagonal of the inter-site interaction matrix is ignored".to_string());
        }
        Ok(warnings)
    }

    pub fn basis(&self) -> Result<FockBasis, CoreError> {
        enumerate_basis(self.sites, self.particles, self.statistics)
    }

    /// `Ĥ₀ = Σ_{i<j} −t_ij (a_i†a_j + h.c.) + U Σ_i n̂_i(n̂_i−1)/2 + Σ_{i<j} U′_ij n̂_i n̂_j`.
    pub fn interaction_hamiltonian(&self, basis: &FockBasis) -> Result<Operator, CoreError> {
        let q = self.sites;
        let mut h0 = Operator::zero(basis.dim());
        for i in 0..q {
            for j in (i + 1)..q {
                let t = &self.hopping[i][j];
                if !t.is_zero() {
                    h0 = h0.add(&hopping_operator(basis, i, j)?.scale(&-t.clone()))?;
                }
                let u = &self.intersite[i][j];
                if !u.is_zero() {
                    h0 = h0.add(&interaction_operator(basis, i, j)?.scale(u))?;
                }
            }
            if !self.onsite.is_zero() {
                h0 = h0.add(&interaction_operator(basis, i, i)?.scale(&self.onsite))?;
            }
        }
        Ok(h0)
    }
}

/// An ordered operator basis of the subspace `O` with coordinate labels.
#[derive(Clone, Debug)]
pub struct HamiltonianFamily {
    operators: Vec<Operator>,
    labels: Vec<String>,
    descriptor: FamilyDescriptor,
    conserved_total: Option<usize>,
    warnings: Vec<String>,
}

/// Relative eigenvalue threshold for the Gram-matrix rank test.
const GRAM_RANK_TOL: f64 = 1e-10;

impl HamiltonianFamily {
    /// Validates a family: common dimension, Hermitian members, `M < 2N` and
    /// linear independence under the trace inner product.
    pub fn new(
        operators: Vec<Operator>,
        labels: Vec<String>,
        kind: FamilyKind,
        conserved_total: Option<usize>,
    ) -> Result<Self, CoreError> {
        let m = operators.len();
        if m == 0 || labels.len() != m {
            return Err(CoreError::InvalidFamily(format!(
                "{m} operators with {} labels",
                labels.len()
            )));
        }
        let n = operators[0].dim();
        if let Some(op) = operators.iter().find(|op| op.dim() != n) {
            return Err(CoreError::DimensionMismatch {
                expected: n,
                found: op.dim(),
            });
        }
        if let Some(k) = operators.iter().position(|op| !op.is_hermitian()) {
            return Err(CoreError::InvalidFamily(format!(
                "operator {} is not Hermitian",
                labels[k]
            )));
        }
        if m >= 2 * n {
            return Err(CoreError::InvalidFamily(format!(
                "family dimension M={m} must be below 2N={}",
                2 * n
            )));
        }
        let rank = gram_rank(&operators)?;
        if rank < m {
            return Err(CoreError::LinearlyDependent { rank, size: m });
        }
        Ok(HamiltonianFamily {
            operators,
            labels,
            descriptor: FamilyDescriptor {
                hilbert_dim: n,
                family_dim: m,
                kind,
            },
            conserved_total,
            warnings: Vec::new(),
        })
    }

    pub fn operators(&self) -> &[Operator] {
        &self.operators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn descriptor(&self) -> &FamilyDescriptor {
        &self.descriptor
    }

    pub fn hilbert_dim(&self) -> usize {
        self.descriptor.hilbert_dim
    }

    pub fn size(&self) -> usize {
        self.descriptor.family_dim
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.descriptor.kind
    }

    /// For lattice families, the fixed particle number `Σ n_i`.
    pub fn conserved_total(&self) -> Option<usize> {
        self.conserved_total
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// `Σ λ_i Ĥ_i` in floating point.
    pub fn assemble(&self, lambda: &[f64]) -> Result<CMatrix, CoreError> {
        if lambda.len() != self.size() {
            return Err(CoreError::DimensionMismatch {
                expected: self.size(),
                found: lambda.len(),
            });
        }
        let n = self.hilbert_dim();
        let mut out = CMatrix::zeros(n, n);
        for (op, &l) in self.operators.iter().zip(lambda) {
            if l != 0.0 {
                out.add_scaled(op.float_view(), l);
            }
        }
        Ok(out)
    }

    /// `Σ λ_i Ĥ_i` with exact rational weights.
    pub fn assemble_exact(&self, lambda: &[BigRational]) -> Result<Operator, CoreError> {
        if lambda.len() != self.size() {
            return Err(CoreError::DimensionMismatch {
                expected: self.size(),
                found: lambda.len(),
            });
        }
        let mut out = Operator::zero(self.hilbert_dim());
        for (op, l) in self.operators.iter().zip(lambda) {
            if !l.is_zero() {
                out = out.add(&op.scale(l))?;
            }
        }
        Ok(out)
    }
}

fn gram_rank(ops: &[Operator]) -> Result<usize, CoreError> {
    let m = ops.len();
    let mut gram = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            gram[i * m + j] = ops[i].trace_inner(&ops[j]);
        }
    }
    let spec = eigh(&CMatrix::from_real(m, m, &gram))?;
    let top = spec.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    Ok(spec
        .eigenvalues
        .iter()
        .filter(|&&e| e > GRAM_RANK_TOL * top)
        .count())
}

/// Lattice family `(Ĥ₀, n̂₁, …, n̂_q)` with labels `H0, n1, …, nq`.
pub fn build_dft_family(spec: &ModelSpec) -> Result<HamiltonianFamily, CoreError> {
    let warnings = spec.validate()?;
    let basis = spec.basis()?;
    let mut operators = vec![spec.interaction_hamiltonian(&basis)?];
    let mut labels = vec!["H0".to_string()];
    for i in 0..spec.sites {
        operators.push(number_operator(&basis, i)?);
        labels.push(format!("n{}", i + 1));
    }
    let kind = FamilyKind::Dft {
        sites: spec.sites,
        particles: spec.particles,
        statistics: spec.statistics,
    };
    let mut family = HamiltonianFamily::new(operators, labels, kind, Some(spec.particles))?;
    family.warnings = warnings;
    Ok(family)
}

/// Exact ladder matrices in a `dim`-level truncation: `(x̂, p̂)` with
/// `x̂ = (a + a†)/√2`, `p̂ = i(a† − a)/√2` and ħ = 1.
pub fn oscillator_quadratures(dim: usize) -> (Operator, Operator) {
    let mut x = vec![ExactEntry::zero(); dim * dim];
    let mut p = vec![ExactEntry::zero(); dim * dim];
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    for k in 0..dim.saturating_sub(1) {
        // √(k+1)/√2 = √(2(k+1))/2
        let amp = Surd::sqrt(2 * (k as u64 + 1)).scale(&half);
        x[k * dim + k + 1] = ExactEntry::real(amp.clone());
        x[(k + 1) * dim + k] = ExactEntry::real(amp.clone());
        p[(k + 1) * dim + k] = ExactEntry::imag(amp.clone());
        p[k * dim + k + 1] = ExactEntry::imag(-&amp);
    }
    (Operator::from_entries(dim, x), Operator::from_entries(dim, p))
}

/// Smallest accepted oscillator truncation.
pub const MIN_TRUNCATION: usize = 4;

/// The family `(p̂², x̂², p̂, x̂, Î)` in a `truncation`-level Fock space, with
/// `x̂²` and `p̂²` the squares of the truncated quadratures.
pub fn build_oscillator_family(truncation: usize) -> Result<HamiltonianFamily, CoreError> {
    if truncation < MIN_TRUNCATION {
        return Err(CoreError::InvalidFamily(format!(
            "oscillator truncation {truncation} below the minimum {MIN_TRUNCATION}"
        )));
    }
    let (x, p) = oscillator_quadratures(truncation);
    let x2 = x.matmul(&x)?;
    let p2 = p.matmul(&p)?;
    let operators = vec![p2, x2, p, x, Operator::identity(truncation)];
    let labels = ["p2", "x2", "p", "x", "I"].iter().map(|s| s.to_string()).collect();
    HamiltonianFamily::new(operators, labels, FamilyKind::Oscillator { truncation }, None)
}

/// Converts an `f64` parameter vector to exact rationals when every entry is
/// a dyadic rational (always true for finite doubles).
pub fn exact_lambda(lambda: &[f64]) -> Option<Vec<BigRational>> {
    lambda.iter().map(|&x| BigRational::from_float(x)).collect()
}

/// Lossy conversion of exact parameters.
pub fn float_lambda(lambda: &[BigRational]) -> Vec<f64> {
    lambda.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
}
