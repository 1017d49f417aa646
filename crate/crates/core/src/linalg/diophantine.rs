use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::LinalgError;

/// Extended gcd with `a*x + b*y == g >= 0`.
///
/// When `a` divides `b` the whole weight goes on `a`: `(|a|, sign(a), 0)`.
pub fn extended_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    if b.is_zero() || (!a.is_zero() && b.is_multiple_of(a)) {
        return (a.abs(), a.signum(), BigInt::zero());
    }
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (BigInt::one(), BigInt::zero());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_negative() {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Canonical integer solution `b` of `b · chi == t`.
///
/// The gcd coefficients are built by folding the extended gcd left to right.
/// Afterwards `b[0]` is reduced into `(-m/2, m/2]` with `m = |chi[1]| / gcd(chi[0], chi[1])`
/// when `m > 1`, compensating in `b[1]`.
pub fn solve_diophantine(chi: &[BigInt], t: &BigInt) -> Result<Vec<BigInt>, LinalgError> {
    if chi.is_empty() {
        return if t.is_zero() {
            Ok(Vec::new())
        } else {
            Err(LinalgError::NoSolution)
        };
    }
    let mut g = chi[0].abs();
    let mut coeffs = vec![chi[0].signum()];
    for c in &chi[1..] {
        let (g2, x, y) = extended_gcd(&g, c);
        for k in coeffs.iter_mut() {
            *k *= &x;
        }
        coeffs.push(y);
        g = g2;
    }
    if g.is_zero() {
        return if t.is_zero() {
            Ok(vec![BigInt::zero(); chi.len()])
        } else {
            Err(LinalgError::NoSolution)
        };
    }
    if !t.is_multiple_of(&g) {
        return Err(LinalgError::NoSolution);
    }
    let scale = t / &g;
    let mut b: Vec<BigInt> = coeffs.into_iter().map(|k| k * &scale).collect();

    if chi.len() >= 2 && !chi[1].is_zero() {
        let g01 = chi[0].gcd(&chi[1]);
        let s0 = &chi[0] / &g01;
        let s1 = &chi[1] / &g01;
        let m = s1.abs();
        if m > BigInt::one() {
            let mut r = b[0].mod_floor(&m);
            if &r * 2 > m {
                r -= &m;
            }
            let k = (&r - &b[0]) / &s1;
            b[0] += &k * &s1;
            b[1] -= &k * &s0;
        }
    }
    Ok(b)
}
