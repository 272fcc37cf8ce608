//! Exact real numbers of the form `Σ c_m √m` with rational `c_m` and
//! squarefree radicands `m`, closed under `+`, `-` and `*`.
//!
//! Bosonic ladder amplitudes `√((n_i+1) n_j)` and oscillator matrix elements
//! live here, so operator matrices stay exact.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Splits `n` into `(k, r)` with `n = k² r` and `r` squarefree.
pub fn squarefree_split(mut n: u64) -> (u64, u64) {
    assert!(n > 0, "radicand must be positive");
    let mut k = 1u64;
    let mut r = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        k *= p.pow(e / 2);
        if e % 2 == 1 {
            r *= p;
        }
        p += 1;
    }
    r *= n;
    (k, r)
}

/// Prime factors of a squarefree integer, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        while n.is_multiple_of(p) {
            out.push(p);
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Surd {
    // radicand (squarefree, 1 = rational part) -> nonzero coefficient
    terms: BTreeMap<u64, BigRational>,
}

impl Surd {
    pub fn zero() -> Self {
        Surd::default()
    }

    pub fn one() -> Self {
        Surd::from_rational(BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Surd::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(c: BigRational) -> Self {
        let mut s = Surd::zero();
        s.add_term(1, c);
        s
    }

    /// `√n` for a nonnegative integer `n`.
    pub fn sqrt(n: u64) -> Self {
        if n == 0 {
            return Surd::zero();
        }
        let (k, r) = squarefree_split(n);
        let mut s = Surd::zero();
        s.add_term(r, BigRational::from_integer(BigInt::from(k)));
        s
    }

    fn add_term(&mut self, radicand: u64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(radicand).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&radicand);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|&m| m == 1)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.terms.get(&1).cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    /// `(radicand, coefficient)` pairs, radicands ascending and squarefree.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.terms.iter().map(|(&m, c)| (m, c))
    }

    /// Radicands other than 1.
    pub fn radicands(&self) -> impl Iterator<Item = u64> + '_ {
        self.terms.keys().copied().filter(|&m| m != 1)
    }

    pub fn scale(&self, c: &BigRational) -> Surd {
        if c.is_zero() {
            return Surd::zero();
        }
        Surd {
            terms: self.terms.iter().map(|(&m, a)| (m, a * c)).collect(),
        }
    }

    /// The square, when `self` is a single term `c√m`: `c² m`.
    pub fn square_if_monomial(&self) -> Option<BigRational> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&m, c) = self.terms.iter().next().unwrap();
        Some(c * c * BigRational::from_integer(BigInt::from(m)))
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(&m, c)| {
                let cf = c.to_f64().unwrap_or(f64::NAN);
                if m == 1 {
                    cf
                } else {
                    cf * (m as f64).sqrt()
                }
            })
            .sum()
    }
}

impl Add for &Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        let mut out = self.clone();
        for (&m, c) in &rhs.terms {
            out.add_term(m, c.clone());
        }
        out
    }
}

impl Sub for &Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        let mut out = self.clone();
        for (&m, c) in &rhs.terms {
            out.add_term(m, -c.clone());
        }
        out
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        let mut out = Surd::zero();
        for (&a, ca) in &self.terms {
            for (&b, cb) in &rhs.terms {
                // √a √b = g √(a/g · b/g) with g = gcd(a, b), both squarefree.
                let g = a.gcd(&b);
                let r = (a / g) * (b / g);
                out.add_term(r, ca * cb * BigRational::from_integer(BigInt::from(g)));
            }
        }
        out
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (&m, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            match (m, a.is_one()) {
                (1, _) => write!(f, "{a}")?,
                (_, true) => write!(f, "√{m}")?,
                _ => write!(f, "{a}*√{m}")?,
            }
        }
        Ok(())
    }
}

/// A complex exact entry `re + i·im`.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct ExactEntry {
    pub re: Surd,
    pub im: Surd,
}

impl ExactEntry {
    pub fn real(re: Surd) -> Self {
        ExactEntry {
            re,
            im: Surd::zero(),
        }
    }

    pub fn imag(im: Surd) -> Self {
        ExactEntry {
            re: Surd::zero(),
            im,
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        ExactEntry {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        ExactEntry {
            re: self.re.scale(c),
            im: self.im.scale(c),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl Add for &ExactEntry {
    type Output = ExactEntry;
    fn add(self, rhs: &ExactEntry) -> ExactEntry {
        ExactEntry {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &ExactEntry {
    type Output = ExactEntry;
    fn sub(self, rhs: &ExactEntry) -> ExactEntry {
        ExactEntry {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &ExactEntry {
    type Output = ExactEntry;
    fn mul(self, rhs: &ExactEntry) -> ExactEntry {
        ExactEntry {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}
