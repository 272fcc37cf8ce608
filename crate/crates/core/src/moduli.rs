//! Exact eigenstate relations: the symbolic Jacobian `𝒥 = [ψ̄ᵀĤ_i, ψᵀĤ_iᵀ]`,
//! its maximal-minor ideal, and elimination of the wavefunction down to a
//! relation `f(ρ) = 0` among expectation values.
//!
//! `ψ` and `ψ̄` are independent indeterminates. Irrational amplitudes `√m`
//! are written as products of one symbol `s_p` per prime `p` (with
//! `s_p² = p`), so the whole computation stays over ℚ.

use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use eigenmoduli_poly::{
    eliminate_with, gcd, squarefree_part, GroebnerConfig, GroebnerStats, MPoly, Monomial,
    MonomialOrder, PolyDocument, DEFAULT_STEP_BUDGET,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::family::{FamilyDescriptor, FamilyKind, HamiltonianFamily};
use crate::surd::{prime_factors, Surd};
use crate::CoreError;

/// Upper limit on the number of column subsets expanded during minor generation.
pub const MAX_MINOR_SUBSETS: usize = 2_000_000;

/// Variable positions in the ring `ℚ[ψ̄₁…ψ̄_N, ψ₁…ψ_N, s_p…, ρ₁…ρ_M]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableLayout {
    n: usize,
    primes: Vec<u64>,
    labels: Vec<String>,
}

impl VariableLayout {
    pub fn new(n: usize, primes: Vec<u64>, labels: Vec<String>) -> Self {
        VariableLayout { n, primes, labels }
    }

    pub fn hilbert_dim(&self) -> usize {
        self.n
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn psibar(&self, j: usize) -> usize {
        j
    }

    pub fn psi(&self, j: usize) -> usize {
        self.n + j
    }

    pub fn radical(&self, k: usize) -> usize {
        2 * self.n + k
    }

    pub fn rho(&self, i: usize) -> usize {
        2 * self.n + self.primes.len() + i
    }

    /// Count of leading variables removed by the elimination.
    pub fn eliminated(&self) -> usize {
        2 * self.n + self.primes.len()
    }

    pub fn arity(&self) -> usize {
        self.eliminated() + self.labels.len()
    }

    pub fn names(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.arity());
        out.extend((1..=self.n).map(|j| format!("pb{j}")));
        out.extend((1..=self.n).map(|j| format!("p{j}")));
        out.extend(self.primes.iter().map(|p| format!("s{p}")));
        out.extend(self.labels.iter().cloned());
        out
    }

    fn order(&self) -> MonomialOrder {
        MonomialOrder::GrevLex
    }

    /// Exact surd as a polynomial in the radical symbols.
    fn surd_poly(&self, value: &Surd, var: Option<usize>) -> MPoly {
        let arity = self.arity();
        let terms = value
            .terms()
            .map(|(radicand, c)| {
                let mut e = vec![0u16; arity];
                if let Some(v) = var {
                    e[v] += 1;
                }
                for p in prime_factors(radicand) {
                    let k = self
                        .primes
                        .iter()
                        .position(|&q| q == p)
                        .expect("radicand prime registered in layout");
                    e[self.radical(k)] += 1;
                }
                (Monomial::from_exponents(&e), c.clone())
            })
            .collect();
        MPoly::from_terms(arity, self.order(), terms)
    }

    /// Normal form modulo `s_p² − p`: every radical exponent becomes 0 or 1.
    pub fn reduce_radicals(&self, p: &MPoly) -> MPoly {
        if self.primes.is_empty() {
            return p.clone();
        }
        let terms = p
            .terms()
            .iter()
            .map(|(m, c)| {
                let mut e = m.exponents().to_vec();
                let mut c = c.clone();
                for (k, &prime) in self.primes.iter().enumerate() {
                    let v = self.radical(k);
                    let half = e[v] / 2;
                    if half > 0 {
                        c *= BigRational::from_integer(BigInt::from(prime).pow(half as u32));
                        e[v] %= 2;
                    }
                }
                (Monomial::from_exponents(&e), c)
            })
            .collect();
        MPoly::from_terms(p.arity(), p.order(), terms)
    }

    /// The relations `s_p² − p`.
    pub fn radical_relations(&self) -> Vec<MPoly> {
        let arity = self.arity();
        (0..self.primes.len())
            .map(|k| {
                let mut e = vec![0u16; arity];
                e[self.radical(k)] = 2;
                MPoly::from_terms(
                    arity,
                    self.order(),
                    vec![
                        (Monomial::from_exponents(&e), BigRational::one()),
                        (
                            Monomial::one(arity),
                            -BigRational::from_integer(BigInt::from(self.primes[k])),
                        ),
                    ],
                )
            })
            .collect()
    }
}

/// Coordinate names for the expectation values; for lattice families the
/// `Ĥ₀` coordinate is the functional value `F`.
pub fn coordinate_labels(family: &HamiltonianFamily) -> Vec<String> {
    let dft = matches!(family.kind(), FamilyKind::Dft { .. });
    family
        .labels()
        .iter()
        .map(|l| {
            if dft && l == "H0" {
                "F".to_string()
            } else {
                l.clone()
            }
        })
        .collect()
}

/// The congruent family `SĤ_iS` with `S = diag(√(∏_k n_k!))` over the
/// occupation basis, for bosonic lattice families.
///
/// Substituting `ψ = Sφ` leaves every expectation value unchanged and
/// multiplies the Jacobian on the right by the invertible `diag(S, S)`, so
/// the minor ideal and the eliminated relation are the same; the rescaled
/// bosonic amplitudes `√((n+1)m)·√(∏n!)·√(∏n′!)` are integers, which removes
/// every radical symbol. Returns `None` when the family is not bosonic
/// lattice, already rational, or does not become rational.
pub fn rational_congruence(family: &HamiltonianFamily) -> Result<Option<HamiltonianFamily>, CoreError> {
    let FamilyKind::Dft {
        sites,
        particles,
        statistics: crate::fock::Statistics::Bose,
    } = family.kind().clone()
    else {
        return Ok(None);
    };
    if family.operators().iter().all(|op| op.radicands().is_empty()) {
        return Ok(None);
    }
    let basis = crate::fock::enumerate_basis(sites, particles, crate::fock::Statistics::Bose)?;
    let scale: Vec<Surd> = basis
        .states()
        .iter()
        .map(|occ| {
            let fact = occ
                .iter()
                .map(|&n| (1..=n as u64).product::<u64>())
                .try_fold(1u64, |a, b| a.checked_mul(b));
            fact.map(Surd::sqrt)
        })
        .collect::<Option<_>>()
        .ok_or_else(|| CoreError::InvalidFamily("occupation factorials overflow".into()))?;
    let n = basis.dim();
    let mut ops = Vec::with_capacity(family.size());
    for op in family.operators() {
        let entries: Vec<crate::surd::ExactEntry> = (0..n * n)
            .map(|idx| {
                let (i, j) = (idx / n, idx % n);
                let e = op.entry(i, j);
                crate::surd::ExactEntry {
                    re: &(&scale[i] * &e.re) * &scale[j],
                    im: &(&scale[i] * &e.im) * &scale[j],
                }
            })
            .collect();
        if entries.iter().any(|e| !e.re.is_rational() || !e.im.is_rational()) {
            return Ok(None);
        }
        ops.push(crate::fock::Operator::from_entries(n, entries));
    }
    HamiltonianFamily::new(
        ops,
        family.labels().to_vec(),
        family.kind().clone(),
        family.conserved_total(),
    )
    .map(Some)
}

/// Builds the variable layout for a family, rejecting complex entries.
pub fn layout_for(family: &HamiltonianFamily) -> Result<VariableLayout, CoreError> {
    let mut primes = BTreeSet::new();
    for (op, label) in family.operators().iter().zip(family.labels()) {
        if !op.is_real() {
            return Err(CoreError::NonExactFamily(format!(
                "operator {label} has imaginary entries; only real families are eliminated"
            )));
        }
        for r in op.radicands() {
            primes.extend(prime_factors(r));
        }
    }
    Ok(VariableLayout::new(
        family.hilbert_dim(),
        primes.into_iter().collect(),
        coordinate_labels(family),
    ))
}

/// The `M × 2N` matrix `[ψ̄ᵀĤ_i, ψᵀĤ_iᵀ]` with linear polynomial entries.
#[derive(Clone, Debug)]
pub struct SymbolicJacobian {
    rows: usize,
    cols: usize,
    entries: Vec<MPoly>,
    layout: VariableLayout,
}

impl SymbolicJacobian {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &MPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn layout(&self) -> &VariableLayout {
        &self.layout
    }

    /// Numerical substitution `ψ̄ → conj(state)`, `ψ → state`, `s_p → √p`.
    pub fn substitute(&self, state: &[num_complex::Complex64]) -> crate::linalg::CMatrix {
        let n = self.layout.hilbert_dim();
        let mut re = vec![0.0; self.layout.arity()];
        let mut im = vec![0.0; self.layout.arity()];
        for (k, &p) in self.layout.primes().iter().enumerate() {
            re[self.layout.radical(k)] = (p as f64).sqrt();
            im[self.layout.radical(k)] = (p as f64).sqrt();
        }
        for j in 0..n {
            re[self.layout.psibar(j)] = state[j].re;
            im[self.layout.psibar(j)] = -state[j].im;
            re[self.layout.psi(j)] = state[j].re;
            im[self.layout.psi(j)] = state[j].im;
        }
        // Entries are linear in the wavefunction variables, so real and
        // imaginary parts evaluate separately with the radicals held fixed.
        crate::linalg::CMatrix::from_fn(self.rows, self.cols, |i, j| {
            let e = self.entry(i, j);
            num_complex::Complex64::new(e.eval_f64(&re), e.eval_f64(&im))
        })
    }
}

pub fn symbolic_jacobian(family: &HamiltonianFamily) -> Result<SymbolicJacobian, CoreError> {
    let layout = layout_for(family)?;
    let n = family.hilbert_dim();
    let m = family.size();
    let order = layout.order();
    let arity = layout.arity();
    let mut entries = Vec::with_capacity(m * 2 * n);
    for op in family.operators() {
        // (ψ̄ᵀ Ĥ)_j = Σ_k ψ̄_k H_kj
        for j in 0..n {
            let mut acc = MPoly::zero(arity, order);
            for k in 0..n {
                let h = &op.entry(k, j).re;
                if !h.is_zero() {
                    acc = acc.add(&layout.surd_poly(h, Some(layout.psibar(k))))?;
                }
            }
            entries.push(acc);
        }
        // (ψᵀ Ĥᵀ)_j = Σ_k H_jk ψ_k
        for j in 0..n {
            let mut acc = MPoly::zero(arity, order);
            for k in 0..n {
                let h = &op.entry(j, k).re;
                if !h.is_zero() {
                    acc = acc.add(&layout.surd_poly(h, Some(layout.psi(k))))?;
                }
            }
            entries.push(acc);
        }
    }
    Ok(SymbolicJacobian {
        rows: m,
        cols: 2 * n,
        entries,
        layout,
    })
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// All `k`-subsets of `0..n` as bitmasks, in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<u64> {
    fn rec(start: usize, n: usize, k: usize, mask: u64, out: &mut Vec<u64>) {
        if k == 0 {
            out.push(mask);
            return;
        }
        for j in start..=(n - k) {
            rec(j + 1, n, k - 1, mask | (1 << j), out);
        }
    }
    let mut out = Vec::with_capacity(binomial(n, k));
    if k <= n {
        rec(0, n, k, 0, &mut out);
    }
    out
}

/// Nonzero `M × M` minors with `k` columns from the `ψ̄` block and `k′` from
/// the `ψ` block, `k + k′ = M`, `k, k′ ≤ N`; reduced modulo the radical
/// relations, in lexicographic column order.
pub fn minor_generators(jac: &SymbolicJacobian) -> Result<Vec<MPoly>, CoreError> {
    let (m, cols) = (jac.rows(), jac.cols());
    let n = cols / 2;
    if m > cols {
        return Err(CoreError::InvalidFamily(format!(
            "{m} rows exceed {cols} Jacobian columns"
        )));
    }
    if cols > 64 {
        return Err(CoreError::InvalidFamily(format!(
            "minor expansion supports at most 64 columns, found {cols}"
        )));
    }
    let total: usize = (1..=m).map(|k| binomial(cols, k)).sum();
    if total > MAX_MINOR_SUBSETS {
        return Err(CoreError::InvalidFamily(format!(
            "minor expansion needs {total} column subsets (limit {MAX_MINOR_SUBSETS})"
        )));
    }
    let layout = jac.layout();
    let zero = MPoly::zero(layout.arity(), layout.order());

    // Laplace expansion along the last row, memoized over column subsets.
    let mut prev: HashMap<u64, MPoly> = HashMap::new();
    prev.insert(0, MPoly::one(layout.arity(), layout.order()));
    for row in 0..m {
        let subsets = combinations(cols, row + 1);
        let layer: Vec<(u64, MPoly)> = subsets
            .into_par_iter()
            .map(|mask| -> Result<(u64, MPoly), CoreError> {
                let mut acc = zero.clone();
                let mut pos = 0usize;
                for j in 0..cols {
                    if mask & (1 << j) == 0 {
                        continue;
                    }
                    let sub = &prev[&(mask & !(1 << j))];
                    let e = jac.entry(row, j);
                    if !sub.is_zero() && !e.is_zero() {
                        let term = layout.reduce_radicals(&e.mul(sub)?);
                        acc = if (row + pos).is_multiple_of(2) {
                            acc.add(&term)?
                        } else {
                            acc.sub(&term)?
                        };
                    }
                    pos += 1;
                }
                Ok((mask, acc))
            })
            .collect::<Result<_, _>>()?;
        prev = layer.into_iter().collect();
    }
    let block = (1u64 << n) - 1;
    Ok(combinations(cols, m)
        .into_iter()
        .filter(|mask| {
            let k = (mask & block).count_ones() as usize;
            k <= n && m - k <= n
        })
        .filter_map(|mask| prev.remove(&mask))
        .filter(|p| !p.is_zero())
        .collect())
}

/// `ψ̄ᵀĤ_iψ − ρ_i` for every family member, with unnormalized `ψ`.
pub fn expectation_relations(
    family: &HamiltonianFamily,
    layout: &VariableLayout,
) -> Result<Vec<MPoly>, CoreError> {
    let n = family.hilbert_dim();
    let arity = layout.arity();
    let order = layout.order();
    let mut out = Vec::with_capacity(family.size());
    for (i, op) in family.operators().iter().enumerate() {
        if !op.is_real() {
            return Err(CoreError::NonExactFamily(format!(
                "operator {} has imaginary entries",
                family.labels()[i]
            )));
        }
        let mut acc = MPoly::variable(arity, order, layout.rho(i)).neg();
        for j in 0..n {
            let bar = MPoly::variable(arity, order, layout.psibar(j));
            for k in 0..n {
                let h = &op.entry(j, k).re;
                if !h.is_zero() {
                    let term = layout.surd_poly(h, Some(layout.psi(k))).mul(&bar)?;
                    acc = acc.add(&term)?;
                }
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// How the designated relation was obtained from the elimination ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Principality {
    /// A single generator.
    Principal,
    /// Several generators with a nonconstant common factor, which is
    /// designated as `f`; the ideal itself is not principal.
    CommonFactor,
    /// Several generators without a common factor; no `f` is designated.
    NonPrincipal,
}

#[derive(Clone, Debug)]
pub struct FunctionalConfig {
    pub step_budget: u64,
    /// Rescale bosonic lattice families to rational matrices before
    /// eliminating (see [`rational_congruence`]).
    pub rationalize: bool,
}

impl Default for FunctionalConfig {
    fn default() -> Self {
        FunctionalConfig {
            step_budget: DEFAULT_STEP_BUDGET,
            rationalize: true,
        }
    }
}

/// Generators of the elimination ideal in the expectation coordinates.
#[derive(Clone, Debug)]
pub struct FunctionalResult {
    pub labels: Vec<String>,
    pub generators: Vec<MPoly>,
    pub principal: Option<MPoly>,
    pub principality: Principality,
    /// True when repeated factors were stripped from the designated relation.
    pub squarefree_reduced: bool,
    pub degree: Option<u32>,
    pub homogeneous: bool,
    pub descriptor: FamilyDescriptor,
    pub radical_primes: Vec<u64>,
    /// True when the family was rescaled to rational matrices first.
    pub rationalized: bool,
    pub minors: usize,
    pub stats: GroebnerStats,
    pub wall_time_ms: f64,
}

impl FunctionalResult {
    /// The relation used for numerical checks: the designated `f`, if any.
    pub fn relation(&self) -> Option<&MPoly> {
        self.principal.as_ref()
    }

    pub fn to_document(&self) -> Result<FunctionalDocument, CoreError> {
        Ok(FunctionalDocument {
            format: FUNCTIONAL_FORMAT.to_string(),
            labels: self.labels.clone(),
            descriptor: self.descriptor.clone(),
            principality: self.principality,
            squarefree_reduced: self.squarefree_reduced,
            degree: self.degree,
            homogeneous: self.homogeneous,
            principal: self
                .principal
                .as_ref()
                .map(|p| PolyDocument::from_poly(p, &self.labels))
                .transpose()?,
            generators: self
                .generators
                .iter()
                .map(|g| PolyDocument::from_poly(g, &self.labels))
                .collect::<Result<_, _>>()?,
            radical_primes: self.radical_primes.clone(),
            rationalized: self.rationalized,
            minors: self.minors,
            stats: self.stats.clone(),
            wall_time_ms: self.wall_time_ms,
        })
    }
}

pub const FUNCTIONAL_FORMAT: &str = "eigenmoduli-functional/1";

/// Serialized form of a [`FunctionalResult`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FunctionalDocument {
    pub format: String,
    pub labels: Vec<String>,
    pub descriptor: FamilyDescriptor,
    pub principality: Principality,
    pub squarefree_reduced: bool,
    pub degree: Option<u32>,
    pub homogeneous: bool,
    pub principal: Option<PolyDocument>,
    pub generators: Vec<PolyDocument>,
    pub radical_primes: Vec<u64>,
    #[serde(default)]
    pub rationalized: bool,
    pub minors: usize,
    pub stats: GroebnerStats,
    pub wall_time_ms: f64,
}

impl FunctionalDocument {
    pub fn principal_poly(&self) -> Result<Option<MPoly>, CoreError> {
        Ok(self.principal.as_ref().map(|d| d.to_poly()).transpose()?)
    }

    pub fn generator_polys(&self) -> Result<Vec<MPoly>, CoreError> {
        Ok(self
            .generators
            .iter()
            .map(|d| d.to_poly())
            .collect::<Result<_, _>>()?)
    }
}

/// Eliminates `ψ̄, ψ` and the radical symbols from
/// `⟨minors⟩ + ⟨ψ̄ᵀĤ_iψ − ρ_i⟩ + ⟨s_p² − p⟩`.
pub fn compute_functional(
    family: &HamiltonianFamily,
    config: &FunctionalConfig,
) -> Result<FunctionalResult, CoreError> {
    let start = Instant::now();
    let rescaled = if config.rationalize {
        rational_congruence(family)?
    } else {
        None
    };
    let target = rescaled.as_ref().unwrap_or(family);
    let jac = symbolic_jacobian(target)?;
    let layout = jac.layout().clone();
    let minors = minor_generators(&jac)?;
    let minor_count = minors.len();
    let mut ideal = minors;
    ideal.extend(expectation_relations(target, &layout)?);
    ideal.extend(layout.radical_relations());

    let elim = eliminate_with(
        &ideal,
        layout.eliminated(),
        &GroebnerConfig {
            step_budget: config.step_budget,
        },
    )?;
    let generators = elim.generators;
    if generators.is_empty() {
        return Err(CoreError::EmptyElimination);
    }

    let (principality, common) = if generators.len() == 1 {
        (Principality::Principal, Some(generators[0].clone()))
    } else {
        let mut g = generators[0].clone();
        for h in &generators[1..] {
            g = gcd(&g, h)?;
            if g.is_constant() {
                break;
            }
        }
        if g.is_constant() {
            (Principality::NonPrincipal, None)
        } else {
            (Principality::CommonFactor, Some(g))
        }
    };
    let (principal, squarefree_reduced) = match common {
        Some(f) => {
            let sf = squarefree_part(&f)?;
            let reduced = sf.total_degree() != f.total_degree();
            (Some(sf), reduced)
        }
        None => (None, false),
    };
    let degree = principal.as_ref().and_then(|p| p.total_degree());
    let homogeneous = principal
        .as_ref()
        .map_or_else(|| generators.iter().all(|g| g.is_homogeneous()), |p| p.is_homogeneous());
    Ok(FunctionalResult {
        labels: layout.labels().to_vec(),
        generators,
        principal,
        principality,
        squarefree_reduced,
        degree,
        homogeneous,
        descriptor: family.descriptor().clone(),
        radical_primes: layout.primes().to_vec(),
        rationalized: rescaled.is_some(),
        minors: minor_count,
        stats: elim.stats,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{build_dft_family, ModelSpec};
    use crate::fock::Operator;

    #[test]
    fn identity_family_row_is_all_variables() {
        let fam =
            HamiltonianFamily::new(vec![Operator::identity(3)], vec!["I".into()], FamilyKind::Custom, None)
                .unwrap();
        let jac = symbolic_jacobian(&fam).unwrap();
        assert_eq!((jac.rows(), jac.cols()), (1, 6));
        let minors = minor_generators(&jac).unwrap();
        assert_eq!(minors.len(), 6);
        for (j, m) in minors.iter().enumerate() {
            assert_eq!(*m, MPoly::variable(jac.layout().arity(), MonomialOrder::GrevLex, j));
        }
        let rel = expectation_relations(&fam, jac.layout()).unwrap();
        let names = jac.layout().names();
        assert_eq!(rel[0].display_with(&names).to_string(), "pb1*p1 + pb2*p2 + pb3*p3 - I");
    }

    #[test]
    fn toy_jacobian_and_minors() {
        let fam = build_dft_family(&ModelSpec::toy()).unwrap();
        let jac = symbolic_jacobian(&fam).unwrap();
        assert_eq!((jac.rows(), jac.cols()), (3, 6));
        assert_eq!(jac.layout().primes(), &[2]);
        let layout = jac.layout();
        for i in 0..3 {
            for j in 0..6 {
                let e = jac.entry(i, j);
                let block = if j < 3 { 0..3 } else { 3..6 };
                for (m, _) in e.terms() {
                    assert_eq!(m.degree_in(block.clone()), 1);
                    assert_eq!(m.degree_in(0..6), 1);
                }
            }
        }
        let minors = minor_generators(&jac).unwrap();
        assert_eq!(minors.len(), 20);
        for m in &minors {
            for (mono, _) in m.terms() {
                assert_eq!(mono.degree_in(0..6), 3);
                assert!(mono.exponent(layout.radical(0)) <= 1);
            }
        }
        let rel = expectation_relations(&fam, layout).unwrap();
        let names = layout.names();
        assert_eq!(rel[1].display_with(&names).to_string(), "2*pb1*p1 + pb2*p2 - n1");
    }

    #[test]
    fn toy_functional_is_symmetric_sextic() {
        let fam = build_dft_family(&ModelSpec::toy()).unwrap();
        let res = compute_functional(&fam, &FunctionalConfig::default()).unwrap();
        assert_eq!(res.labels, vec!["F", "n1", "n2"]);
        assert_eq!(res.principality, Principality::Principal);
        assert_eq!(res.degree, Some(6));
        assert!(res.homogeneous);
        let f = res.principal.clone().unwrap();
        assert_eq!(f.permute_vars(&[0, 2, 1]), f);
        assert!(res.rationalized && res.radical_primes.is_empty());
        let doc = res.to_document().unwrap();
        assert_eq!(doc.principal_poly().unwrap().unwrap(), f);

        let radical = compute_functional(
            &fam,
            &FunctionalConfig {
                rationalize: false,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(radical.radical_primes, vec![2]);
        assert_eq!(radical.principal.unwrap(), f);
    }

    #[test]
    fn rescaled_toy_is_integral() {
        let fam = build_dft_family(&ModelSpec::toy()).unwrap();
        let r = rational_congruence(&fam).unwrap().unwrap();
        // S = diag(√2, 1, √2): hopping entries −√2·√2 = −2.
        assert_eq!(r.operators()[0].entry(0, 1).re, Surd::from_integer(-2));
        assert_eq!(r.operators()[0].entry(0, 0).re, Surd::from_integer(2));
        assert_eq!(r.operators()[1].entry(0, 0).re, Surd::from_integer(4));
        assert!(rational_congruence(&r).unwrap().is_none());
    }
}
