//! Exponent vectors and the monomial orders used by the Gröbner engine.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// Inline capacity for exponent vectors; larger arities spill to the heap.
const INLINE_VARS: usize = 16;

/// An exponent vector `x_0^{e_0} ... x_{n-1}^{e_{n-1}}`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: SmallVec<[u16; INLINE_VARS]>,
}

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, arity),
        }
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        Monomial {
            exps: SmallVec::from_slice(exps),
        }
    }

    /// The monomial `x_var`.
    pub fn variable(arity: usize, var: usize) -> Self {
        let mut m = Self::one(arity);
        m.exps[var] = 1;
        m
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.exps.len()
    }

    #[inline]
    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    #[inline]
    pub fn exponent(&self, var: usize) -> u16 {
        self.exps[var]
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn degree_in(&self, vars: std::ops::Range<usize>) -> u32 {
        self.exps[vars].iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// True when no variable in `vars` occurs.
    pub fn is_free_of(&self, vars: std::ops::Range<usize>) -> bool {
        self.exps[vars].iter().all(|&e| e == 0)
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        debug_assert_eq!(self.arity(), other.arity());
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(other.exps.iter())
            .all(|(&a, &b)| a == 0 || b == 0)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(other.exps.iter())
                .map(|(&a, &b)| a.max(b))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(other.exps.iter())
                .map(|(&a, &b)| a.checked_add(b).expect("exponent overflow"))
                .collect(),
        }
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = SmallVec::with_capacity(self.arity());
        for (&a, &b) in self.exps.iter().zip(other.exps.iter()) {
            if b > a {
                return None;
            }
            exps.push(a - b);
        }
        Some(Monomial { exps })
    }

    /// Drops the leading `count` variables (they must not occur).
    pub fn drop_front(&self, count: usize) -> Monomial {
        debug_assert!(self.is_free_of(0..count));
        Monomial::from_exponents(&self.exps[count..])
    }

    /// Embeds into a larger ring: `front` new variables before, `back` after.
    pub fn pad(&self, front: usize, back: usize) -> Monomial {
        let mut exps = SmallVec::with_capacity(front + self.arity() + back);
        exps.extend(std::iter::repeat_n(0, front));
        exps.extend_from_slice(&self.exps);
        exps.extend(std::iter::repeat_n(0, back));
        Monomial { exps }
    }

    pub(crate) fn exps_mut(&mut self) -> &mut [u16] {
        &mut self.exps
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps.as_slice())
    }
}

/// A total, multiplicative well-order on monomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum MonomialOrder {
    /// Pure lexicographic with `x_0 > x_1 > ...`.
    Lex,
    /// Graded reverse lexicographic.
    #[default]
    GrevLex,
    /// Grevlex on the first `front` variables, ties broken by grevlex on the
    /// rest. Any monomial involving the front block beats every monomial free
    /// of it, which is what elimination needs.
    Block { front: usize },
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (a, b) = (a.exponents(), b.exponents());
        debug_assert_eq!(a.len(), b.len());
        match *self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::GrevLex => grevlex(a, b),
            MonomialOrder::Block { front } => {
                let front = front.min(a.len());
                grevlex(&a[..front], &b[..front]).then_with(|| grevlex(&a[front..], &b[front..]))
            }
        }
    }
}

fn grevlex(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    da.cmp(&db).then_with(|| {
        // The smaller exponent in the last differing variable wins.
        for (x, y) in a.iter().zip(b.iter()).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}
