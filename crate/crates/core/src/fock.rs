//! Occupation-number bases and number-conserving second-quantized operators.
//!
//! Basis states are ordered descending-lexicographically on occupation
//! vectors, so `(2,0), (1,1), (0,2)` for two bosons on two sites. Fermionic
//! states are `∏_{i ascending} (a_i†)^{n_i} |0⟩`, which fixes hopping signs.

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::linalg::CMatrix;
use crate::surd::{ExactEntry, Surd};
use crate::CoreError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Bose,
    Fermi,
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Statistics::Bose => "bose",
            Statistics::Fermi => "fermi",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockBasis {
    sites: usize,
    particles: usize,
    statistics: Statistics,
    states: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

fn binomial(n: u64, k: u64) -> Option<u64> {
    let k = k.min(n.saturating_sub(k));
    let mut acc: u64 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Dimension of the sector, or `None` on integer overflow.
pub fn sector_dimension(q: usize, n: usize, statistics: Statistics) -> Option<u64> {
    match statistics {
        Statistics::Bose => binomial((q + n - 1) as u64, n as u64),
        Statistics::Fermi if n > q => Some(0),
        Statistics::Fermi => binomial(q as u64, n as u64),
    }
}

/// Largest sector the dense representation accepts.
pub const MAX_DIMENSION: u64 = 1 << 16;

/// Builds the `n`-particle, `q`-site basis.
pub fn enumerate_basis(q: usize, n: usize, statistics: Statistics) -> Result<FockBasis, CoreError> {
    if q == 0 || n == 0 {
        return Err(CoreError::InvalidSector(format!(
            "need at least one site and one particle, got q={q}, n={n}"
        )));
    }
    if statistics == Statistics::Fermi && n > q {
        return Err(CoreError::EmptySector { q, n });
    }
    let dim = sector_dimension(q, n, statistics)
        .filter(|&d| d <= MAX_DIMENSION)
        .ok_or(CoreError::Capacity { q, n })?;
    let max_occ = match statistics {
        Statistics::Bose => n as u32,
        Statistics::Fermi => 1,
    };
    let mut states = Vec::with_capacity(dim as usize);
    let mut current = vec![0u32; q];
    fill(&mut states, &mut current, 0, n as u32, max_occ);
    debug_assert_eq!(states.len() as u64, dim);
    let index = states.iter().enumerate().map(|(k, s)| (s.clone(), k)).collect();
    Ok(FockBasis {
        sites: q,
        particles: n,
        statistics,
        states,
        index,
    })
}

// Emits occupation vectors in descending lexicographic order.
fn fill(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, site: usize, left: u32, max_occ: u32) {
    let q = cur.len();
    if site == q - 1 {
        if left <= max_occ {
            cur[site] = left;
            out.push(cur.clone());
        }
        return;
    }
    for k in (0..=left.min(max_occ)).rev() {
        cur[site] = k;
        fill(out, cur, site + 1, left - k, max_occ);
    }
    cur[site] = 0;
}

impl FockBasis {
    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Vec<u32>] {
        &self.states
    }

    pub fn position(&self, occupations: &[u32]) -> Option<usize> {
        self.index.get(occupations).copied()
    }

    fn check_site(&self, i: usize) -> Result<(), CoreError> {
        if i >= self.sites {
            Err(CoreError::SiteOutOfRange {
                site: i,
                sites: self.sites,
            })
        } else {
            Ok(())
        }
    }
}

/// A Hermitian operator on one particle-number sector with exact entries and
/// a cached double-precision view.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    dim: usize,
    entries: Vec<ExactEntry>,
    float_view: CMatrix,
}

impl Operator {
    pub fn from_entries(dim: usize, entries: Vec<ExactEntry>) -> Self {
        assert_eq!(entries.len(), dim * dim);
        let float_view = CMatrix::from_fn(dim, dim, |i, j| entries[i * dim + j].to_complex());
        Operator {
            dim,
            entries,
            float_view,
        }
    }

    pub fn from_real_fn(dim: usize, f: impl Fn(usize, usize) -> Surd) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(ExactEntry::real(f(i, j)));
            }
        }
        Self::from_entries(dim, entries)
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_entries(dim, vec![ExactEntry::zero(); dim * dim])
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_real_fn(dim, |i, j| if i == j { Surd::one() } else { Surd::zero() })
    }

    pub fn diagonal(values: &[Surd]) -> Self {
        let dim = values.len();
        Self::from_real_fn(dim, |i, j| if i == j { values[i].clone() } else { Surd::zero() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> &ExactEntry {
        &self.entries[i * self.dim + j]
    }

    pub fn float_view(&self) -> &CMatrix {
        &self.float_view
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(ExactEntry::is_real)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| i == j || self.entry(i, j).is_zero()))
    }

    /// Exact check `A = A†` in the coefficient ring.
    pub fn is_hermitian(&self) -> bool {
        (0..self.dim).all(|i| (i..self.dim).all(|j| *self.entry(i, j) == self.entry(j, i).conj()))
    }

    /// Squarefree radicands occurring in any entry.
    pub fn radicands(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .entries
            .iter()
            .flat_map(|e| e.re.radicands().chain(e.im.radicands()).collect::<Vec<_>>())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn check_dim(&self, other: &Operator) -> Result<(), CoreError> {
        if self.dim != other.dim {
            return Err(CoreError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Operator) -> Result<Operator, CoreError> {
        self.check_dim(other)?;
        Ok(Operator::from_entries(
            self.dim,
            self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator, CoreError> {
        self.check_dim(other)?;
        Ok(Operator::from_entries(
            self.dim,
            self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn scale(&self, c: &BigRational) -> Operator {
        Operator::from_entries(self.dim, self.entries.iter().map(|e| e.scale(c)).collect())
    }

    pub fn matmul(&self, other: &Operator) -> Result<Operator, CoreError> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ExactEntry::zero();
                for k in 0..n {
                    let a = self.entry(i, k);
                    let b = other.entry(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                entries.push(acc);
            }
        }
        Ok(Operator::from_entries(n, entries))
    }

    /// Exact commutator `[A, B]`.
    pub fn commutator(&self, other: &Operator) -> Result<Operator, CoreError> {
        self.matmul(other)?.sub(&other.matmul(self)?)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ExactEntry::is_zero)
    }

    /// Real part of the trace inner product `Tr(A† B)` in floating point.
    pub fn trace_inner(&self, other: &Operator) -> f64 {
        self.float_view
            .data()
            .iter()
            .zip(other.float_view.data())
            .map(|(a, b)| (a.conj() * b).re)
            .sum()
    }
}

/// `n̂_i` (sites are 0-based).
pub fn number_operator(basis: &FockBasis, i: usize) -> Result<Operator, CoreError> {
    basis.check_site(i)?;
    let diag: Vec<Surd> = basis
        .states
        .iter()
        .map(|s| Surd::from_integer(s[i] as i64))
        .collect();
    Ok(Operator::diagonal(&diag))
}

/// Total number operator `Σ_i n̂_i`.
pub fn total_number_operator(basis: &FockBasis) -> Operator {
    let n = basis.particles as i64;
    Operator::diagonal(&vec![Surd::from_integer(n); basis.dim()])
}

/// `a_i† a_j + a_j† a_i` for `i ≠ j`.
pub fn hopping_operator(basis: &FockBasis, i: usize, j: usize) -> Result<Operator, CoreError> {
    basis.check_site(i)?;
    basis.check_site(j)?;
    if i == j {
        return Err(CoreError::SameSiteHopping(i));
    }
    let dim = basis.dim();
    let mut entries = vec![ExactEntry::zero(); dim * dim];
    for (src, occ) in basis.states.iter().enumerate() {
        for (to, from) in [(i, j), (j, i)] {
            if let Some((target, amp)) = apply_hop(basis, occ, to, from) {
                let slot = &mut entries[target * dim + src];
                *slot = &*slot + &ExactEntry::real(amp);
            }
        }
    }
    Ok(Operator::from_entries(dim, entries))
}

/// `a_to† a_from |occ⟩ = amp |target⟩`, or `None` if it vanishes.
fn apply_hop(basis: &FockBasis, occ: &[u32], to: usize, from: usize) -> Option<(usize, Surd)> {
    if occ[from] == 0 {
        return None;
    }
    let mut next = occ.to_vec();
    next[from] -= 1;
    match basis.statistics {
        Statistics::Bose => {
            let amp = Surd::sqrt(((occ[to] + 1) * occ[from]) as u64);
            next[to] += 1;
            Some((basis.position(&next)?, amp))
        }
        Statistics::Fermi => {
            if next[to] == 1 {
                return None;
            }
            // Removing at `from` passes the occupied sites before it, adding at
            // `to` passes those before it in the intermediate state.
            let before_from: u32 = occ[..from].iter().sum();
            let before_to: u32 = next[..to].iter().sum();
            next[to] = 1;
            let sign = if (before_from + before_to).is_multiple_of(2) { 1 } else { -1 };
            Some((basis.position(&next)?, Surd::from_integer(sign)))
        }
    }
}

/// `n̂_i n̂_j` for `i ≠ j`, or `n̂_i (n̂_i − 1) / 2` for `i = j`.
pub fn interaction_operator(basis: &FockBasis, i: usize, j: usize) -> Result<Operator, CoreError> {
    basis.check_site(i)?;
    basis.check_site(j)?;
    let diag: Vec<Surd> = basis
        .states
        .iter()
        .map(|s| {
            let (a, b) = (s[i] as i64, s[j] as i64);
            if i == j {
                Surd::from_integer(a * (a - 1) / 2)
            } else {
                Surd::from_integer(a * b)
            }
        })
        .collect();
    Ok(Operator::diagonal(&diag))
}

/// Relative size of an imaginary residue that is still attributed to rounding.
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-12;

/// `ψ† A ψ` in floating point (no normalization).
pub fn expectation(op: &Operator, state: &[Complex64]) -> Result<f64, CoreError> {
    expectation_matrix(op.float_view(), state)
}

pub fn expectation_matrix(a: &CMatrix, state: &[Complex64]) -> Result<f64, CoreError> {
    if state.len() != a.cols() {
        return Err(CoreError::DimensionMismatch {
            expected: a.cols(),
            found: state.len(),
        });
    }
    let z = a.quadratic_form(state);
    let scale = a.frobenius_norm() * crate::linalg::norm(state).powi(2);
    if z.im.abs() > IMAGINARY_RESIDUE_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(CoreError::ComplexExpectation(z.im));
    }
    Ok(z.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn int(n: i64) -> Surd {
        Surd::from_integer(n)
    }

    fn toy() -> FockBasis {
        enumerate_basis(2, 2, Statistics::Bose).unwrap()
    }

    #[test]
    fn basis_dimensions_and_order() {
        let b = toy();
        assert_eq!(b.states(), &[vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(enumerate_basis(3, 2, Statistics::Bose).unwrap().dim(), 6);
        let f = enumerate_basis(4, 2, Statistics::Fermi).unwrap();
        assert_eq!(f.dim(), 6);
        assert!(f.states().iter().all(|s| s.iter().all(|&x| x <= 1)));
        for w in f.states().windows(2) {
            assert!(w[0] > w[1]);
        }
        for (k, s) in f.states().iter().enumerate() {
            assert_eq!(f.position(s), Some(k));
            assert_eq!(s.iter().sum::<u32>(), 2);
        }
    }

    #[test]
    fn basis_errors() {
        assert!(matches!(
            enumerate_basis(2, 3, Statistics::Fermi),
            Err(CoreError::EmptySector { .. })
        ));
        assert!(matches!(
            enumerate_basis(200, 200, Statistics::Bose),
            Err(CoreError::Capacity { .. })
        ));
        assert!(enumerate_basis(0, 1, Statistics::Bose).is_err());
    }

    #[test]
    fn number_operators() {
        let b = toy();
        let n1 = number_operator(&b, 0).unwrap();
        assert_eq!(n1, Operator::diagonal(&[int(2), int(1), int(0)]));
        let sum = number_operator(&b, 0).unwrap().add(&number_operator(&b, 1).unwrap()).unwrap();
        assert_eq!(sum, Operator::identity(3).scale(&BigRational::from_integer(2.into())));
        assert!(matches!(
            number_operator(&b, 2),
            Err(CoreError::SiteOutOfRange { .. })
        ));
        let f = enumerate_basis(4, 2, Statistics::Fermi).unwrap();
        for i in 0..4 {
            let n = number_operator(&f, i).unwrap();
            for k in 0..f.dim() {
                let v = n.entry(k, k).re.as_rational().unwrap();
                assert!(v.is_zero() || v == BigRational::from_integer(1.into()));
            }
        }
    }

    #[test]
    fn bosonic_hopping_amplitude() {
        let b = toy();
        let h = hopping_operator(&b, 0, 1).unwrap();
        // ⟨(1,1)| a_1† a_2 |(0,2)⟩ = √2
        assert_eq!(h.entry(1, 2).re, Surd::sqrt(2));
        assert_eq!(h.entry(0, 1).re, Surd::sqrt(2));
        assert!(h.entry(0, 2).is_zero());
        assert!(h.is_hermitian());
        assert!(matches!(hopping_operator(&b, 1, 1), Err(CoreError::SameSiteHopping(1))));
    }

    #[test]
    fn fermionic_hopping_sign() {
        let b = enumerate_basis(3, 2, Statistics::Fermi).unwrap();
        let (target, amp) = apply_hop(&b, &[1, 1, 0], 2, 0).unwrap();
        assert_eq!(b.states()[target], vec![0, 1, 1]);
        assert_eq!(amp, int(-1));
        let h = hopping_operator(&b, 0, 2).unwrap();
        assert!(h.is_hermitian());
    }

    #[test]
    fn interaction_operators() {
        let b = toy();
        assert_eq!(
            interaction_operator(&b, 0, 0).unwrap(),
            Operator::diagonal(&[int(1), int(0), int(0)])
        );
        assert_eq!(
            interaction_operator(&b, 0, 1).unwrap(),
            Operator::diagonal(&[int(0), int(1), int(0)])
        );
        let f = enumerate_basis(4, 2, Statistics::Fermi).unwrap();
        assert!(interaction_operator(&f, 1, 1).unwrap().is_zero());
    }

    #[test]
    fn expectation_values() {
        let b = toy();
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let id = Operator::identity(3);
        assert_eq!(expectation(&id, &[one, zero, zero]).unwrap(), 1.0);
        let n1 = number_operator(&b, 0).unwrap();
        assert_eq!(expectation(&n1, &[one, zero, zero]).unwrap(), 2.0);
        assert!(matches!(
            expectation(&n1, &[one, zero]),
            Err(CoreError::DimensionMismatch { .. })
        ));
        // A non-Hermitian matrix can give a complex "expectation".
        let bad = Operator::from_real_fn(2, |i, j| if i == 0 && j == 1 { int(1) } else { Surd::zero() });
        let psi = [one, Complex64::new(0.0, 1.0)];
        assert!(matches!(expectation(&bad, &psi), Err(CoreError::ComplexExpectation(_))));
    }
}
