//! Sparse multivariate polynomials with arbitrary-precision rational coefficients.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::monomial::{Monomial, MonomialOrder};
use crate::PolyError;

/// A polynomial in `arity` variables over ℚ.
///
/// Terms are kept sorted in strictly descending order under `order` and no
/// stored coefficient is zero, so structural equality is polynomial equality
/// for a fixed order.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    arity: usize,
    order: MonomialOrder,
    terms: Vec<(Monomial, BigRational)>,
}

impl MPoly {
    pub fn zero(arity: usize, order: MonomialOrder) -> Self {
        MPoly {
            arity,
            order,
            terms: Vec::new(),
        }
    }

    pub fn constant(arity: usize, order: MonomialOrder, c: BigRational) -> Self {
        Self::from_terms(arity, order, vec![(Monomial::one(arity), c)])
    }

    pub fn one(arity: usize, order: MonomialOrder) -> Self {
        Self::constant(arity, order, BigRational::one())
    }

    pub fn variable(arity: usize, order: MonomialOrder, var: usize) -> Self {
        Self::from_terms(
            arity,
            order,
            vec![(Monomial::variable(arity, var), BigRational::one())],
        )
    }

    /// Builds a polynomial from unsorted terms, merging duplicates and
    /// dropping zeros.
    pub fn from_terms(
        arity: usize,
        order: MonomialOrder,
        mut terms: Vec<(Monomial, BigRational)>,
    ) -> Self {
        debug_assert!(terms.iter().all(|(m, _)| m.arity() == arity));
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut merged: Vec<(Monomial, BigRational)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match merged.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => merged.push((m, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        MPoly {
            arity,
            order,
            terms: merged,
        }
    }

    /// Convenience constructor from `(exponents, numerator, denominator)` triples.
    pub fn from_int_terms(arity: usize, order: MonomialOrder, terms: &[(&[u16], i64, i64)]) -> Self {
        Self::from_terms(
            arity,
            order,
            terms
                .iter()
                .map(|(e, n, d)| {
                    assert_eq!(e.len(), arity);
                    (
                        Monomial::from_exponents(e),
                        BigRational::new(BigInt::from(*n), BigInt::from(*d)),
                    )
                })
                .collect(),
        )
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.arity
    }

    #[inline]
    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    #[inline]
    pub fn terms(&self) -> &[(Monomial, BigRational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, BigRational)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn leading_coefficient(&self) -> Option<&BigRational> {
        self.terms.first().map(|(_, c)| c)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.iter().map(|(m, _)| m.exponent(var)).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m0, _)) => {
                let d = m0.degree();
                self.terms.iter().all(|(m, _)| m.degree() == d)
            }
        }
    }

    /// Whether variable `var` occurs in any term.
    pub fn involves(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exponent(var) > 0)
    }

    pub fn is_free_of(&self, vars: std::ops::Range<usize>) -> bool {
        self.terms.iter().all(|(m, _)| m.is_free_of(vars.clone()))
    }

    /// Re-sorts the terms under another order.
    pub fn with_order(&self, order: MonomialOrder) -> MPoly {
        if order == self.order {
            return self.clone();
        }
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        MPoly {
            arity: self.arity,
            order,
            terms,
        }
    }

    fn check_compatible(&self, other: &MPoly) -> Result<(), PolyError> {
        if self.arity != other.arity {
            return Err(PolyError::ArityMismatch {
                expected: self.arity,
                found: other.arity,
            });
        }
        Ok(())
    }

    /// `self + scale * mono * other`, merging in one pass.
    pub(crate) fn add_scaled_shifted(
        &self,
        other: &MPoly,
        scale: &BigRational,
        mono: Option<&Monomial>,
    ) -> MPoly {
        let order = self.order;
        let other = if other.order == order {
            std::borrow::Cow::Borrowed(other)
        } else {
            std::borrow::Cow::Owned(other.with_order(order))
        };
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other
            .terms
            .iter()
            .map(|(m, c)| {
                (
                    match mono {
                        Some(s) => m.mul(s),
                        None => m.clone(),
                    },
                    c * scale,
                )
            })
            .peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => out.push(b.next().unwrap()),
                (Some((ma, _)), Some((mb, _))) => match order.cmp(ma, mb) {
                    Ordering::Greater => out.push(a.next().unwrap().clone()),
                    Ordering::Less => out.push(b.next().unwrap()),
                    Ordering::Equal => {
                        let (m, ca) = a.next().unwrap();
                        let (_, cb) = b.next().unwrap();
                        let c = ca + cb;
                        if !c.is_zero() {
                            out.push((m.clone(), c));
                        }
                    }
                },
            }
        }
        MPoly {
            arity: self.arity,
            order,
            terms: out,
        }
    }

    pub fn add(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.check_compatible(other)?;
        Ok(self.add_scaled_shifted(other, &BigRational::one(), None))
    }

    pub fn sub(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.check_compatible(other)?;
        Ok(self.add_scaled_shifted(other, &-BigRational::one(), None))
    }

    pub fn neg(&self) -> MPoly {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, c: &BigRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.arity, self.order);
        }
        MPoly {
            arity: self.arity,
            order: self.order,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Multiplication by a single term keeps the term order.
    pub fn mul_term(&self, mono: &Monomial, c: &BigRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.arity, self.order);
        }
        MPoly {
            arity: self.arity,
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.mul(mono), a * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.check_compatible(other)?;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                terms.push((ma.mul(mb), ca * cb));
            }
        }
        Ok(MPoly::from_terms(self.arity, self.order, terms))
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one(self.arity, self.order);
        for _ in 0..e {
            acc = acc.mul(self).expect("same arity");
        }
        acc
    }

    /// Partial derivative with respect to `var`.
    pub fn derivative(&self, var: usize) -> MPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponent(var) > 0)
            .map(|(m, c)| {
                let e = m.exponent(var);
                let mut m2 = m.clone();
                m2.exps_mut()[var] = e - 1;
                (m2, c * BigRational::from_integer(BigInt::from(e)))
            })
            .collect();
        MPoly::from_terms(self.arity, self.order, terms)
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> MPoly {
        match self.leading_coefficient() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    /// The integer-coefficient polynomial with coprime coefficients and
    /// positive leading coefficient that is a rational multiple of `self`.
    pub fn primitive(&self) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut den_lcm = BigInt::one();
        for (_, c) in &self.terms {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for (_, c) in &self.terms {
            num_gcd = num_gcd.gcd(&(c.numer() * (&den_lcm / c.denom())));
        }
        let mut factor = BigRational::new(den_lcm, num_gcd);
        if self.terms[0].1.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Substitutes `value` for `var`, keeping the arity.
    pub fn substitute(&self, var: usize, value: &BigRational) -> MPoly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let e = m.exponent(var);
                let mut m2 = m.clone();
                m2.exps_mut()[var] = 0;
                (m2, c * pow_rational(value, e as u32))
            })
            .collect();
        MPoly::from_terms(self.arity, self.order, terms)
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational, PolyError> {
        if point.len() != self.arity {
            return Err(PolyError::ArityMismatch {
                expected: self.arity,
                found: point.len(),
            });
        }
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t *= pow_rational(v, e as u32);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Floating-point evaluation returning `(value, sum of |term|)`.
    pub fn eval_f64_with_magnitude(&self, point: &[f64]) -> (f64, f64) {
        assert_eq!(point.len(), self.arity);
        let mut value = 0.0;
        let mut magnitude = 0.0;
        for (m, c) in &self.terms {
            let mut t = c.to_f64().unwrap_or(f64::NAN);
            for (v, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t *= v.powi(e as i32);
                }
            }
            value += t;
            magnitude += t.abs();
        }
        (value, magnitude)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.eval_f64_with_magnitude(point).0
    }

    /// Removes the leading `count` variables, which must not occur.
    pub fn drop_front_vars(&self, count: usize, order: MonomialOrder) -> Result<MPoly, PolyError> {
        if !self.is_free_of(0..count.min(self.arity)) {
            return Err(PolyError::VariableOccurs { count });
        }
        Ok(MPoly::from_terms(
            self.arity - count,
            order,
            self.terms
                .iter()
                .map(|(m, c)| (m.drop_front(count), c.clone()))
                .collect(),
        ))
    }

    /// Embeds into a ring with `front` new leading and `back` new trailing variables.
    pub fn pad_vars(&self, front: usize, back: usize, order: MonomialOrder) -> MPoly {
        MPoly::from_terms(
            self.arity + front + back,
            order,
            self.terms
                .iter()
                .map(|(m, c)| (m.pad(front, back), c.clone()))
                .collect(),
        )
    }

    /// Renames variables: variable `i` becomes variable `perm[i]`.
    ///
    /// # Panics
    /// If `perm` is not a permutation of `0..arity`.
    pub fn permute_vars(&self, perm: &[usize]) -> MPoly {
        assert_eq!(perm.len(), self.arity, "permutation length");
        let mut seen = vec![false; self.arity];
        for &p in perm {
            assert!(p < self.arity && !seen[p], "not a permutation");
            seen[p] = true;
        }
        MPoly::from_terms(
            self.arity,
            self.order,
            self.terms
                .iter()
                .map(|(m, c)| {
                    let mut e = vec![0u16; self.arity];
                    for (i, &x) in m.exponents().iter().enumerate() {
                        e[perm[i]] = x;
                    }
                    (Monomial::from_exponents(&e), c.clone())
                })
                .collect(),
        )
    }

    /// Renders with the given variable names, e.g. `3/2*x^2*y - z`.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

pub(crate) fn pow_rational(v: &BigRational, e: u32) -> BigRational {
    num_traits::pow(v.clone(), e as usize)
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.arity).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.display_with(&names))
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a MPoly,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.poly.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (v, &e) in m.exponents().iter().enumerate() {
                let name = self.names.get(v).cloned().unwrap_or_else(|| format!("x{v}"));
                match e {
                    0 => {}
                    1 => factors.push(name),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
