//! Polynomial gcd, lcm and squarefree parts, computed through the elimination
//! identity `⟨t·f, (1−t)·g⟩ ∩ ℚ[x] = ⟨lcm(f, g)⟩`.

use num_rational::BigRational;
use num_traits::One;

use crate::groebner::{divide, eliminate_with, GroebnerConfig};
use crate::monomial::MonomialOrder;
use crate::poly::MPoly;
use crate::PolyError;

/// Exact quotient `p / d`; fails if `d` does not divide `p`.
pub fn div_exact(p: &MPoly, d: &MPoly) -> Result<MPoly, PolyError> {
    let order = p.order();
    let (q, r) = divide(p, std::slice::from_ref(d), order)?;
    if !r.is_zero() {
        return Err(PolyError::InexactDivision);
    }
    Ok(q.into_iter().next().unwrap())
}

/// Least common multiple, primitive with positive leading coefficient.
pub fn lcm(f: &MPoly, g: &MPoly) -> Result<MPoly, PolyError> {
    if f.arity() != g.arity() {
        return Err(PolyError::ArityMismatch {
            expected: f.arity(),
            found: g.arity(),
        });
    }
    if f.is_zero() || g.is_zero() {
        return Ok(MPoly::zero(f.arity(), f.order()));
    }
    if f.is_constant() {
        return Ok(g.primitive());
    }
    if g.is_constant() {
        return Ok(f.primitive());
    }
    let order = MonomialOrder::GrevLex;
    let t = MPoly::variable(f.arity() + 1, order, 0);
    let one = MPoly::one(f.arity() + 1, order);
    let fe = f.pad_vars(1, 0, order);
    let ge = g.pad_vars(1, 0, order);
    let a = t.mul(&fe)?;
    let b = one.sub(&t)?.mul(&ge)?;
    let elim = eliminate_with(&[a, b], 1, &GroebnerConfig::default())?;
    let l = elim
        .generators
        .into_iter()
        .next()
        .ok_or(PolyError::InexactDivision)?;
    Ok(l.with_order(f.order()).primitive())
}

/// Greatest common divisor, primitive with positive leading coefficient.
pub fn gcd(f: &MPoly, g: &MPoly) -> Result<MPoly, PolyError> {
    if f.arity() != g.arity() {
        return Err(PolyError::ArityMismatch {
            expected: f.arity(),
            found: g.arity(),
        });
    }
    if f.is_zero() {
        return Ok(g.primitive());
    }
    if g.is_zero() {
        return Ok(f.primitive());
    }
    if f.is_constant() || g.is_constant() {
        return Ok(MPoly::constant(f.arity(), f.order(), BigRational::one()));
    }
    let l = lcm(f, g)?;
    let fg = f.mul(g)?;
    Ok(div_exact(&fg, &l)?.primitive())
}

/// Removes repeated factors: `f / gcd(f, ∂f/∂x_1, ..., ∂f/∂x_n)`.
pub fn squarefree_part(f: &MPoly) -> Result<MPoly, PolyError> {
    if f.is_zero() || f.is_constant() {
        return Ok(f.primitive());
    }
    let mut g = f.clone();
    for var in 0..f.arity() {
        if !f.involves(var) {
            continue;
        }
        g = gcd(&g, &f.derivative(var))?;
        if g.is_constant() {
            return Ok(f.primitive());
        }
    }
    Ok(div_exact(f, &g)?.primitive())
}
