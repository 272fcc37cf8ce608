//! Buchberger's algorithm, multivariate division and elimination ideals.
//!
//! Internally the engine keeps every basis element monic over the rationals,
//! so coefficients stay in lowest terms throughout reduction, and tail-reduces
//! the active basis whenever a new element arrives. Pairs are pruned with the
//! Gebauer–Möller formulation of Buchberger's product and chain criteria.
//!
//! Pair selection is either by sugar (smallest sugar degree, then smallest
//! lcm in the term order, then basis indices) or by the term order alone.
//! Each strategy has inputs on which it builds long chains of huge
//! intermediate elements, so [`buchberger_with`] races them under a growing
//! work allowance.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::MPoly;
use crate::PolyError;

/// Default bound on elementary reduction steps before giving up.
pub const DEFAULT_STEP_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug)]
pub struct GroebnerConfig {
    pub step_budget: u64,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        GroebnerConfig {
            step_budget: DEFAULT_STEP_BUDGET,
        }
    }
}

/// Counters collected during a Buchberger run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroebnerStats {
    pub input_generators: usize,
    pub pairs_created: u64,
    pub pairs_reduced: u64,
    pub zero_reductions: u64,
    pub product_criterion: u64,
    pub chain_criterion: u64,
    pub reduction_steps: u64,
    pub max_basis_size: usize,
    pub final_basis_size: usize,
    pub pairs_pending: usize,
    /// Attempts abandoned for a different pair-selection strategy.
    #[serde(default)]
    pub restarts: u32,
}

impl std::fmt::Display for GroebnerStats {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} pairs reduced ({} to zero), {} pruned by product / {} by chain criterion, \
             {} reduction steps, basis peak {} final {}, {} pairs pending, {} restarts",
            self.pairs_reduced,
            self.zero_reductions,
            self.product_criterion,
            self.chain_criterion,
            self.reduction_steps,
            self.max_basis_size,
            self.final_basis_size,
            self.pairs_pending,
            self.restarts
        )
    }
}

// ---------------------------------------------------------------------------
// Monic rational polynomials used inside the engine.

type Term = (Monomial, BigRational);

#[derive(Clone, Debug)]
struct QPoly {
    terms: Vec<Term>,
    /// Sugar degree: the total degree this element would have if every
    /// generator had been homogenized.
    sugar: u32,
    /// Largest coefficient size in bits (numerator plus denominator).
    bits: u64,
}

impl QPoly {
    fn from_mpoly(p: &MPoly, order: MonomialOrder) -> QPoly {
        let terms = p.with_order(order).monic().into_terms();
        QPoly {
            bits: max_bits(&terms),
            terms,
            sugar: p.total_degree().unwrap_or(0),
        }
    }

    fn to_mpoly(&self, arity: usize, order: MonomialOrder) -> MPoly {
        MPoly::from_terms(arity, order, self.terms.clone())
    }

    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn make_monic(mut terms: Vec<Term>, sugar: u32) -> QPoly {
        if let Some((_, lc)) = terms.first() {
            if !lc.is_one() {
                let inv = lc.recip();
                for (_, c) in terms.iter_mut() {
                    *c *= &inv;
                }
            }
        }
        QPoly {
            bits: max_bits(&terms),
            terms,
            sugar,
        }
    }
}

fn coefficient_bits(c: &BigRational) -> u64 {
    c.numer().bits() + c.denom().bits()
}

fn max_bits(terms: &[Term]) -> u64 {
    terms.iter().map(|(_, c)| coefficient_bits(c)).max().unwrap_or(0)
}

/// `p - a * mono * g` for monic `g`, skipping the leading terms of both (they cancel).
fn cancel_lead(
    order: MonomialOrder,
    p: &[Term],
    a: &BigRational,
    mono: &Monomial,
    g: &[Term],
) -> Vec<Term> {
    let mut out = Vec::with_capacity(p.len() + g.len());
    let mut i = 1;
    let mut j = 1;
    let mut pending: Option<Term> = None;
    loop {
        if pending.is_none() && j < g.len() {
            let (m, c) = &g[j];
            pending = Some((m.mul(mono), -(a * c)));
            j += 1;
        }
        match (p.get(i), pending.as_ref()) {
            (None, None) => break,
            (Some(t), None) => {
                out.push(t.clone());
                i += 1;
            }
            (None, Some(_)) => out.push(pending.take().unwrap()),
            (Some((mp, cp)), Some((mg, _))) => match order.cmp(mp, mg) {
                Ordering::Greater => {
                    out.push((mp.clone(), cp.clone()));
                    i += 1;
                }
                Ordering::Less => out.push(pending.take().unwrap()),
                Ordering::Equal => {
                    let (m, cg) = pending.take().unwrap();
                    let c = cp + cg;
                    if !c.is_zero() {
                        out.push((m, c));
                    }
                    i += 1;
                }
            },
        }
    }
    out
}

/// Why a run stopped early.
#[derive(Debug)]
enum Abort {
    /// The caller's step budget is used up.
    Steps,
    /// This attempt's work allowance is used up; another strategy may be faster.
    Work,
}

/// Effort accounting shared by every reduction in a run. `work` weights each
/// step by term count and coefficient size, so it tracks time far better than
/// the bare step count once coefficients grow.
struct Meter {
    steps: u64,
    step_budget: u64,
    work: u64,
    work_limit: u64,
}

impl Meter {
    fn charge(&mut self, terms: usize, bits: u64) -> Result<(), Abort> {
        self.steps += 1;
        if self.steps > self.step_budget {
            return Err(Abort::Steps);
        }
        // Rational arithmetic normalizes by a gcd: quadratic in limb count.
        let limbs = 1 + bits / 64;
        self.work = self
            .work
            .saturating_add((terms as u64).saturating_mul(limbs.saturating_mul(limbs)));
        if self.work > self.work_limit {
            return Err(Abort::Work);
        }
        Ok(())
    }
}

struct Reducer<'a> {
    order: MonomialOrder,
    meter: &'a mut Meter,
}

impl Reducer<'_> {
    fn find_divisor<'b>(&self, m: &Monomial, basis: &[&'b QPoly]) -> Option<&'b QPoly> {
        basis
            .iter()
            .filter(|g| g.lm().divides(m))
            .min_by_key(|g| g.terms.len())
            .copied()
    }

    /// Full reduction of `p` modulo the monic `basis`; the result is monic.
    /// With `keep_lead` the leading term is left in place (tail reduction).
    fn reduce(&mut self, p: &QPoly, basis: &[&QPoly], keep_lead: bool) -> Result<QPoly, Abort> {
        let mut done: Vec<Term> = Vec::new();
        let mut sugar = p.sugar;
        let mut rest: Vec<Term> = if keep_lead && !p.is_zero() {
            done.push(p.terms[0].clone());
            p.terms[1..].to_vec()
        } else {
            p.terms.clone()
        };
        while !rest.is_empty() {
            let lead = rest[0].0.clone();
            match self.find_divisor(&lead, basis) {
                None => {
                    // Move every leading term that stays irreducible at once.
                    let mut k = 1;
                    while k < rest.len() && self.find_divisor(&rest[k].0, basis).is_none() {
                        k += 1;
                    }
                    done.extend(rest.drain(..k));
                }
                Some(g) => {
                    let a = rest[0].1.clone();
                    self.meter
                        .charge(rest.len() + g.terms.len(), coefficient_bits(&a) + g.bits)?;
                    let mono = lead.div(g.lm()).expect("divisor");
                    sugar = sugar.max(mono.degree() + g.sugar);
                    rest = cancel_lead(self.order, &rest, &a, &mono, &g.terms);
                }
            }
        }
        Ok(QPoly::make_monic(done, sugar))
    }
}

fn s_poly(order: MonomialOrder, f: &QPoly, g: &QPoly) -> QPoly {
    let lcm = f.lm().lcm(g.lm());
    let mf = lcm.div(f.lm()).unwrap();
    let mg = lcm.div(g.lm()).unwrap();
    // mf*f - mg*g with the leading terms cancelled (both monic).
    let shifted: Vec<Term> = f.terms.iter().map(|(m, c)| (m.mul(&mf), c.clone())).collect();
    let terms = cancel_lead(order, &shifted, &BigRational::one(), &mg, &g.terms);
    QPoly {
        bits: max_bits(&terms),
        terms,
        sugar: (f.sugar + mf.degree()).max(g.sugar + mg.degree()),
    }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

/// How the next critical pair is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Selection {
    /// Smallest sugar degree, then smallest lcm in the term order.
    Sugar,
    /// Smallest lcm in the term order.
    TermOrder,
}

struct Engine {
    order: MonomialOrder,
    selection: Selection,
    polys: Vec<QPoly>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
    stats: GroebnerStats,
}

impl Engine {
    /// Adds a reduced element, updates the pair set and tail-reduces the
    /// active elements it touches. Leading monomials never change, so the
    /// pair bookkeeping stays valid; without this, stale tails feed huge
    /// intermediate coefficients back into every later reduction.
    fn insert(&mut self, p: QPoly, meter: &mut Meter) -> Result<(), Abort> {
        self.polys.push(p);
        let h = self.polys.len() - 1;
        self.update(h);
        let lm_h = self.polys[h].lm().clone();
        for k in 0..self.active.len() {
            let g = self.active[k];
            if g == h || !self.polys[g].terms[1..].iter().any(|(m, _)| lm_h.divides(m)) {
                continue;
            }
            let basis: Vec<&QPoly> = self
                .active
                .iter()
                .filter(|&&l| l != g)
                .map(|&l| &self.polys[l])
                .collect();
            let mut r = Reducer {
                order: self.order,
                meter: &mut *meter,
            };
            let tail_reduced = r.reduce(&self.polys[g], &basis, true)?;
            self.polys[g] = tail_reduced;
        }
        Ok(())
    }

    /// Gebauer–Möller update for a new basis element `h`.
    fn update(&mut self, h: usize) {
        let lm_h = self.polys[h].lm().clone();
        struct Cand {
            g: usize,
            lcm: Monomial,
            coprime: bool,
            keep: bool,
        }
        let mut cands: Vec<Cand> = self
            .active
            .iter()
            .map(|&g| {
                let lm_g = self.polys[g].lm();
                Cand {
                    g,
                    lcm: lm_h.lcm(lm_g),
                    coprime: lm_h.is_coprime(lm_g),
                    keep: true,
                }
            })
            .collect();
        self.stats.pairs_created += cands.len() as u64;
        // Chain criterion among the new pairs: drop (h, g1) if another still
        // alive (h, g2) has an lcm dividing lcm(h, g1).
        for k in 0..cands.len() {
            if cands[k].coprime {
                continue;
            }
            let dominated = cands.iter().enumerate().any(|(l, c)| {
                l != k && c.keep && c.lcm.divides(&cands[k].lcm)
            });
            if dominated {
                cands[k].keep = false;
                self.stats.chain_criterion += 1;
            }
        }
        // Old pairs made redundant by h.
        let before = self.pairs.len();
        let polys = &self.polys;
        self.pairs.retain(|p| {
            if !lm_h.divides(&p.lcm) {
                return true;
            }
            let l1 = polys[p.i].lm().lcm(&lm_h);
            let l2 = polys[p.j].lm().lcm(&lm_h);
            l1 == p.lcm || l2 == p.lcm
        });
        self.stats.chain_criterion += (before - self.pairs.len()) as u64;
        for c in cands {
            if !c.keep {
                continue;
            }
            if c.coprime {
                self.stats.product_criterion += 1;
                continue;
            }
            let (ph, pg) = (&self.polys[h], &self.polys[c.g]);
            let sugar = (ph.sugar + c.lcm.degree() - ph.lm().degree())
                .max(pg.sugar + c.lcm.degree() - pg.lm().degree());
            self.pairs.push(Pair {
                i: c.g.min(h),
                j: c.g.max(h),
                lcm: c.lcm,
                sugar,
            });
        }
        self.active.retain(|&g| !lm_h.divides(polys[g].lm()));
        self.active.push(h);
        self.stats.max_basis_size = self.stats.max_basis_size.max(self.active.len());
    }

    fn next_pair(&mut self) -> Option<Pair> {
        let best = self
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                let first = match self.selection {
                    Selection::Sugar => a.sugar.cmp(&b.sugar),
                    Selection::TermOrder => Ordering::Equal,
                };
                first
                    .then_with(|| self.order.cmp(&a.lcm, &b.lcm))
                    .then(a.i.cmp(&b.i))
                    .then(a.j.cmp(&b.j))
            })
            .map(|(k, _)| k)?;
        Some(self.pairs.swap_remove(best))
    }
}

fn check_arity(polys: &[MPoly]) -> Result<usize, PolyError> {
    let arity = polys.first().map(|p| p.arity()).ok_or(PolyError::EmptyInput)?;
    for p in polys {
        if p.arity() != arity {
            return Err(PolyError::ArityMismatch {
                expected: arity,
                found: p.arity(),
            });
        }
    }
    Ok(arity)
}

/// Computes the reduced Gröbner basis of the ideal generated by `generators`.
pub fn buchberger(generators: &[MPoly], order: MonomialOrder) -> Result<Vec<MPoly>, PolyError> {
    buchberger_with(generators, order, &GroebnerConfig::default()).map(|(b, _)| b)
}

/// Buchberger with an explicit configuration, also returning run statistics.
///
/// The output is reduced: monic, sorted by ascending leading monomial, and no
/// term of any element is divisible by the leading monomial of another.
///
/// No single pair-selection strategy is safe on every input: sugar is the
/// right choice for elimination orders built from graded blocks but can
/// derail into enormous intermediate coefficients, and selection by the term
/// order alone has the opposite failure mode. The two are raced in
/// alternation under a work allowance that quadruples each round, which is
/// deterministic and costs at most a small constant factor over the better
/// strategy. The step budget bounds the total across all attempts.
pub fn buchberger_with(
    generators: &[MPoly],
    order: MonomialOrder,
    config: &GroebnerConfig,
) -> Result<(Vec<MPoly>, GroebnerStats), PolyError> {
    let arity = check_arity(generators)?;
    let mut meter = Meter {
        steps: 0,
        step_budget: config.step_budget,
        work: 0,
        work_limit: INITIAL_WORK_LIMIT,
    };
    let mut restarts = 0;
    loop {
        for selection in [Selection::Sugar, Selection::TermOrder] {
            meter.work = 0;
            let mut engine = Engine {
                order,
                selection,
                polys: Vec::new(),
                active: Vec::new(),
                pairs: Vec::new(),
                stats: GroebnerStats {
                    input_generators: generators.len(),
                    restarts,
                    ..Default::default()
                },
            };
            match engine.run(generators, &mut meter) {
                Ok(()) => return Ok(engine.finish(arity, &mut meter)),
                Err(Abort::Steps) => return Err(budget_error(engine, meter.steps)),
                Err(Abort::Work) => restarts += 1,
            }
        }
        meter.work_limit = meter.work_limit.saturating_mul(4);
    }
}

/// Work allowance of the first attempt; enough for small systems to finish
/// on the first try.
const INITIAL_WORK_LIMIT: u64 = 1 << 20;

impl Engine {
    fn run(&mut self, generators: &[MPoly], meter: &mut Meter) -> Result<(), Abort> {
        for g in generators {
            if g.is_zero() {
                continue;
            }
            let ip = QPoly::from_mpoly(g, self.order);
            let reduced = self.reduce(&ip, meter)?;
            if !reduced.is_zero() {
                self.insert(reduced, meter)?;
            }
        }
        while let Some(pair) = self.next_pair() {
            self.stats.pairs_reduced += 1;
            let s = s_poly(self.order, &self.polys[pair.i], &self.polys[pair.j]);
            let reduced = self.reduce(&s, meter)?;
            if reduced.is_zero() {
                self.stats.zero_reductions += 1;
            } else {
                self.insert(reduced, meter)?;
            }
        }
        Ok(())
    }

    fn reduce(&self, p: &QPoly, meter: &mut Meter) -> Result<QPoly, Abort> {
        let basis: Vec<&QPoly> = self.active.iter().map(|&k| &self.polys[k]).collect();
        Reducer {
            order: self.order,
            meter,
        }
        .reduce(p, &basis, false)
    }

    /// Interreduces the minimal basis into the reduced one.
    fn finish(mut self, arity: usize, meter: &mut Meter) -> (Vec<MPoly>, GroebnerStats) {
        let order = self.order;
        let mut minimal: Vec<QPoly> = self.active.iter().map(|&k| self.polys[k].clone()).collect();
        minimal.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
        meter.step_budget = u64::MAX;
        meter.work_limit = u64::MAX;
        let mut reduced_basis = Vec::with_capacity(minimal.len());
        for k in 0..minimal.len() {
            let others: Vec<&QPoly> = minimal
                .iter()
                .enumerate()
                .filter(|&(l, _)| l != k)
                .map(|(_, p)| p)
                .collect();
            let full = Reducer {
                order,
                meter: &mut *meter,
            }
            .reduce(&minimal[k], &others, true)
            .expect("unbounded allowance");
            reduced_basis.push(full.to_mpoly(arity, order));
        }
        self.stats.reduction_steps = meter.steps;
        self.stats.final_basis_size = reduced_basis.len();
        (reduced_basis, self.stats)
    }
}

fn budget_error(engine: Engine, steps: u64) -> PolyError {
    let mut stats = engine.stats;
    stats.reduction_steps = steps;
    stats.pairs_pending = engine.pairs.len();
    stats.final_basis_size = engine.active.len();
    PolyError::BudgetExceeded(Box::new(stats))
}

/// Multivariate division: returns quotients `q_i` and remainder `r` with
/// `p = Σ q_i g_i + r` and no term of `r` divisible by any `lm(g_i)`.
pub fn divide(
    p: &MPoly,
    divisors: &[MPoly],
    order: MonomialOrder,
) -> Result<(Vec<MPoly>, MPoly), PolyError> {
    if divisors.is_empty() {
        return Err(PolyError::EmptyInput);
    }
    let arity = p.arity();
    for g in divisors {
        if g.arity() != arity {
            return Err(PolyError::ArityMismatch {
                expected: arity,
                found: g.arity(),
            });
        }
        if g.is_zero() {
            return Err(PolyError::ZeroDivisor);
        }
    }
    let divisors: Vec<MPoly> = divisors.iter().map(|g| g.with_order(order)).collect();
    let mut quotients: Vec<Vec<(Monomial, BigRational)>> = vec![Vec::new(); divisors.len()];
    let mut rest = p.with_order(order);
    let mut remainder = Vec::new();
    while let Some((lm, lc)) = rest.terms().first().cloned() {
        let hit = divisors
            .iter()
            .enumerate()
            .find(|(_, g)| g.leading_monomial().unwrap().divides(&lm));
        match hit {
            Some((k, g)) => {
                let mono = lm.div(g.leading_monomial().unwrap()).unwrap();
                let c = &lc / g.leading_coefficient().unwrap();
                quotients[k].push((mono.clone(), c.clone()));
                rest = rest.add_scaled_shifted(g, &-c, Some(&mono));
            }
            None => {
                remainder.push((lm.clone(), lc.clone()));
                rest = MPoly::from_terms(arity, order, rest.terms()[1..].to_vec());
            }
        }
    }
    Ok((
        quotients
            .into_iter()
            .map(|t| MPoly::from_terms(arity, order, t))
            .collect(),
        MPoly::from_terms(arity, order, remainder),
    ))
}

/// Remainder of `p` on multivariate division by `basis`.
pub fn normal_form(p: &MPoly, basis: &[MPoly], order: MonomialOrder) -> Result<MPoly, PolyError> {
    divide(p, basis, order).map(|(_, r)| r)
}

/// The S-polynomial `lcm/lt(f) * f - lcm/lt(g) * g`.
pub fn s_polynomial(f: &MPoly, g: &MPoly, order: MonomialOrder) -> Result<MPoly, PolyError> {
    let f = f.with_order(order);
    let g = g.with_order(order);
    let (lf, cf) = f.terms().first().ok_or(PolyError::ZeroDivisor)?;
    let (lg, cg) = g.terms().first().ok_or(PolyError::ZeroDivisor)?;
    let lcm = lf.lcm(lg);
    let a = f.mul_term(&lcm.div(lf).unwrap(), &cf.recip());
    let b = g.mul_term(&lcm.div(lg).unwrap(), &cg.recip());
    a.sub(&b)
}

/// Checks Buchberger's criterion: every S-polynomial reduces to zero.
pub fn is_groebner_basis(basis: &[MPoly], order: MonomialOrder) -> Result<bool, PolyError> {
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            let s = s_polynomial(&basis[i], &basis[j], order)?;
            if !normal_form(&s, basis, order)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Checks the reduced-basis conditions: monic, and no term of any element is
/// divisible by another element's leading monomial.
pub fn is_reduced(basis: &[MPoly], order: MonomialOrder) -> bool {
    basis.iter().enumerate().all(|(i, p)| {
        let p = p.with_order(order);
        p.leading_coefficient().is_some_and(|c| c.is_one())
            && basis.iter().enumerate().all(|(j, g)| {
                i == j || {
                    let lg = g.with_order(order).leading_monomial().unwrap().clone();
                    p.terms().iter().all(|(m, _)| !lg.divides(m))
                }
            })
    })
}

/// Result of an elimination: generators of `I ∩ ℚ[x_k, ..., x_{n-1}]`,
/// expressed in the `n - k` remaining variables.
#[derive(Clone, Debug)]
pub struct Elimination {
    pub generators: Vec<MPoly>,
    pub stats: GroebnerStats,
}

/// Eliminates the first `drop` variables.
pub fn eliminate(generators: &[MPoly], drop: usize) -> Result<Vec<MPoly>, PolyError> {
    eliminate_with(generators, drop, &GroebnerConfig::default()).map(|e| e.generators)
}

pub fn eliminate_with(
    generators: &[MPoly],
    drop: usize,
    config: &GroebnerConfig,
) -> Result<Elimination, PolyError> {
    let arity = check_arity(generators)?;
    if drop > arity {
        return Err(PolyError::ArityMismatch {
            expected: arity,
            found: drop,
        });
    }
    let order = MonomialOrder::Block { front: drop };
    let (basis, stats) = buchberger_with(generators, order, config)?;
    let kept = MonomialOrder::GrevLex;
    let generators = basis
        .into_iter()
        .filter(|p| p.is_free_of(0..drop))
        .map(|p| p.drop_front_vars(drop, kept).map(|q| q.primitive()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Elimination { generators, stats })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex() -> MonomialOrder {
        MonomialOrder::Lex
    }

    #[test]
    fn normal_form_examples() {
        let o = lex();
        // NF(x^2 y, {x^2 - 1}) = y
        let p = MPoly::from_int_terms(2, o, &[(&[2, 1], 1, 1)]);
        let g = MPoly::from_int_terms(2, o, &[(&[2, 0], 1, 1), (&[0, 0], -1, 1)]);
        assert_eq!(
            normal_form(&p, std::slice::from_ref(&g), o).unwrap(),
            MPoly::from_int_terms(2, o, &[(&[0, 1], 1, 1)])
        );
        assert!(normal_form(&g, std::slice::from_ref(&g), o).unwrap().is_zero());
        // NF(x^2 + y^2, {x - y}) = 2 y^2
        let p = MPoly::from_int_terms(2, o, &[(&[2, 0], 1, 1), (&[0, 2], 1, 1)]);
        let g = MPoly::from_int_terms(2, o, &[(&[1, 0], 1, 1), (&[0, 1], -1, 1)]);
        assert_eq!(
            normal_form(&p, &[g], o).unwrap(),
            MPoly::from_int_terms(2, o, &[(&[0, 2], 2, 1)])
        );
    }

    #[test]
    fn normal_form_rejects_arity_mismatch() {
        let p = MPoly::variable(2, lex(), 0);
        let g = MPoly::variable(3, lex(), 0);
        assert!(matches!(
            normal_form(&p, &[g], lex()),
            Err(PolyError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn single_generator_is_its_own_basis() {
        let o = lex();
        let g = MPoly::from_int_terms(2, o, &[(&[1, 0], 1, 1), (&[0, 1], -1, 1)]);
        assert_eq!(buchberger(std::slice::from_ref(&g), o).unwrap(), vec![g]);
    }

    #[test]
    fn textbook_basis_contains_y2_minus_y() {
        let o = lex();
        // x^2 - y, xy - x
        let f1 = MPoly::from_int_terms(2, o, &[(&[2, 0], 1, 1), (&[0, 1], -1, 1)]);
        let f2 = MPoly::from_int_terms(2, o, &[(&[1, 1], 1, 1), (&[1, 0], -1, 1)]);
        let basis = buchberger(&[f1.clone(), f2.clone()], o).unwrap();
        let target = MPoly::from_int_terms(2, o, &[(&[0, 2], 1, 1), (&[0, 1], -1, 1)]);
        assert!(basis.contains(&target), "{basis:?}");
        assert!(normal_form(&f1, &basis, o).unwrap().is_zero());
        assert!(normal_form(&f2, &basis, o).unwrap().is_zero());
        assert!(is_groebner_basis(&basis, o).unwrap());
        assert!(is_reduced(&basis, o));
    }

    #[test]
    fn twisted_cubic_implicitization() {
        // variables (x, y, z); eliminate x from y - x^2, z - x^3.
        let o = MonomialOrder::GrevLex;
        let f1 = MPoly::from_int_terms(3, o, &[(&[0, 1, 0], 1, 1), (&[2, 0, 0], -1, 1)]);
        let f2 = MPoly::from_int_terms(3, o, &[(&[0, 0, 1], 1, 1), (&[3, 0, 0], -1, 1)]);
        let elim = eliminate(&[f1, f2], 1).unwrap();
        assert_eq!(elim.len(), 1);
        let expected = MPoly::from_int_terms(2, o, &[(&[3, 0], 1, 1), (&[0, 2], -1, 1)]);
        assert_eq!(elim[0].primitive(), expected.primitive());
    }

    #[test]
    fn trivial_elimination() {
        let o = MonomialOrder::GrevLex;
        let f1 = MPoly::from_int_terms(2, o, &[(&[1, 0], 1, 1), (&[0, 0], -1, 1)]);
        let f2 = MPoly::from_int_terms(2, o, &[(&[0, 1], 1, 1), (&[1, 0], -1, 1)]);
        let elim = eliminate(&[f1, f2], 1).unwrap();
        assert_eq!(elim, vec![MPoly::from_int_terms(1, o, &[(&[1], 1, 1), (&[0], -1, 1)])]);
    }

    #[test]
    fn budget_exhaustion_reports_stats() {
        let o = MonomialOrder::GrevLex;
        let f1 = MPoly::from_int_terms(3, o, &[(&[0, 1, 0], 1, 1), (&[2, 0, 0], -1, 1)]);
        let f2 = MPoly::from_int_terms(3, o, &[(&[0, 0, 1], 1, 1), (&[3, 0, 0], -1, 1)]);
        let cfg = GroebnerConfig { step_budget: 1 };
        match eliminate_with(&[f1, f2], 1, &cfg) {
            Err(PolyError::BudgetExceeded(stats)) => assert!(stats.reduction_steps > 1),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn division_identity_holds() {
        let o = MonomialOrder::GrevLex;
        let p = MPoly::from_int_terms(2, o, &[(&[3, 1], 2, 1), (&[1, 1], -1, 3), (&[0, 2], 5, 1)]);
        let g1 = MPoly::from_int_terms(2, o, &[(&[1, 1], 1, 1), (&[0, 0], -1, 1)]);
        let g2 = MPoly::from_int_terms(2, o, &[(&[0, 2], 1, 1), (&[1, 0], -1, 1)]);
        let (qs, r) = divide(&p, &[g1.clone(), g2.clone()], o).unwrap();
        let rebuilt = qs[0]
            .mul(&g1)
            .unwrap()
            .add(&qs[1].mul(&g2).unwrap())
            .unwrap()
            .add(&r)
            .unwrap();
        assert_eq!(rebuilt, p);
    }
}
