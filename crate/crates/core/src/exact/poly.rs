//! Polynomial helpers over Q used by the number-field arithmetic:
//! evaluation (point and interval), division, extended gcd for inverses,
//! and Sturm chains for root counting.
//!
//! Polynomials are coefficient vectors in ascending degree order.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type QPoly = Vec<BigRational>;

pub fn from_int_coeffs(coeffs: &[BigInt]) -> QPoly {
    coeffs
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect()
}

pub fn degree(p: &[BigRational]) -> usize {
    p.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

pub fn is_zero(p: &[BigRational]) -> bool {
    p.iter().all(Zero::is_zero)
}

pub fn normalize(p: &mut QPoly) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    if p.is_empty() {
        p.push(BigRational::zero());
    }
}

pub fn eval(p: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn eval_int_poly(p: &[BigInt], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + BigRational::from_integer(c.clone());
    }
    acc
}

/// Interval Horner evaluation: encloses p(x) for all x in [lo, hi].
pub fn eval_interval(
    p: &[BigRational],
    lo: &BigRational,
    hi: &BigRational,
) -> (BigRational, BigRational) {
    let mut acc_lo = BigRational::zero();
    let mut acc_hi = BigRational::zero();
    for c in p.iter().rev() {
        let candidates = [
            &acc_lo * lo,
            &acc_lo * hi,
            &acc_hi * lo,
            &acc_hi * hi,
        ];
        let mut new_lo = candidates[0].clone();
        let mut new_hi = candidates[0].clone();
        for cand in &candidates[1..] {
            if *cand < new_lo {
                new_lo = cand.clone();
            }
            if *cand > new_hi {
                new_hi = cand.clone();
            }
        }
        acc_lo = new_lo + c;
        acc_hi = new_hi + c;
    }
    (acc_lo, acc_hi)
}

pub fn derivative(p: &[BigRational]) -> QPoly {
    if p.len() <= 1 {
        return vec![BigRational::zero()];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect()
}

pub fn mul(a: &[BigRational], b: &[BigRational]) -> QPoly {
    if is_zero(a) || is_zero(b) {
        return vec![BigRational::zero()];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if !cb.is_zero() {
                out[i + j] += ca * cb;
            }
        }
    }
    normalize(&mut out);
    out
}

pub fn sub(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let len = a.len().max(b.len());
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
        out.push(x - y);
    }
    normalize(&mut out);
    out
}

/// Division with remainder: a = b*q + r with deg r < deg b.
pub fn div_rem(a: &[BigRational], b: &[BigRational]) -> (QPoly, QPoly) {
    assert!(!is_zero(b), "polynomial division by zero");
    let db = degree(b);
    let lead_inv = b[db].recip();
    let mut rem: QPoly = a.to_vec();
    normalize(&mut rem);
    if degree(&rem) < db && !(db == 0) {
        return (vec![BigRational::zero()], rem);
    }
    let mut quot = vec![BigRational::zero(); degree(&rem).saturating_sub(db) + 1];
    while !is_zero(&rem) && degree(&rem) >= db {
        let dr = degree(&rem);
        let coeff = &rem[dr] * &lead_inv;
        let shift = dr - db;
        quot[shift] = coeff.clone();
        for (i, bc) in b.iter().enumerate().take(db + 1) {
            rem[shift + i] -= &coeff * bc;
        }
        normalize(&mut rem);
        if dr == 0 {
            break;
        }
    }
    normalize(&mut quot);
    (quot, rem)
}

/// Extended gcd: returns (g, s, t) monic with g = s*a + t*b.
pub fn extended_gcd(a: &[BigRational], b: &[BigRational]) -> (QPoly, QPoly, QPoly) {
    let mut old_r: QPoly = a.to_vec();
    let mut r: QPoly = b.to_vec();
    normalize(&mut old_r);
    normalize(&mut r);
    let mut old_s: QPoly = vec![BigRational::one()];
    let mut s: QPoly = vec![BigRational::zero()];
    let mut old_t: QPoly = vec![BigRational::zero()];
    let mut t: QPoly = vec![BigRational::one()];

    while !is_zero(&r) {
        let (q, rem) = div_rem(&old_r, &r);
        let new_s = sub(&old_s, &mul(&q, &s));
        let new_t = sub(&old_t, &mul(&q, &t));
        old_r = std::mem::replace(&mut r, rem);
        old_s = std::mem::replace(&mut s, new_s);
        old_t = std::mem::replace(&mut t, new_t);
    }

    if is_zero(&old_r) {
        return (old_r, old_s, old_t);
    }
    let lead = old_r[degree(&old_r)].clone();
    let scale = lead.recip();
    let norm = |p: &QPoly| -> QPoly {
        let mut q: QPoly = p.iter().map(|c| c * &scale).collect();
        normalize(&mut q);
        q
    };
    (norm(&old_r), norm(&old_s), norm(&old_t))
}

fn sign(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Sturm chain of p (assumed squarefree for exact counts).
pub fn sturm_chain(p: &[BigRational]) -> Vec<QPoly> {
    let mut chain: Vec<QPoly> = Vec::new();
    let mut p0: QPoly = p.to_vec();
    normalize(&mut p0);
    if is_zero(&p0) {
        return chain;
    }
    let mut p1 = derivative(&p0);
    chain.push(p0.clone());
    if is_zero(&p1) {
        return chain;
    }
    chain.push(p1.clone());
    loop {
        let (_, mut rem) = div_rem(&p0, &p1);
        if is_zero(&rem) {
            break;
        }
        for c in rem.iter_mut() {
            *c = -c.clone();
        }
        chain.push(rem.clone());
        p0 = std::mem::replace(&mut p1, rem);
    }
    chain
}

fn sign_variations(chain: &[QPoly], x: &BigRational) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for p in chain {
        let s = sign(&eval(p, x));
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct real roots of `p` in the open interval (lo, hi).
/// Assumes p(lo) != 0 and p(hi) != 0.
pub fn count_roots(p: &[BigRational], lo: &BigRational, hi: &BigRational) -> usize {
    let chain = sturm_chain(p);
    sign_variations(&chain, lo).saturating_sub(sign_variations(&chain, hi))
}

/// gcd(p, p') is constant exactly when p is squarefree.
pub fn is_squarefree(p: &[BigRational]) -> bool {
    let d = derivative(p);
    if is_zero(&d) {
        return degree(p) == 0;
    }
    let (g, _, _) = extended_gcd(p, &d);
    degree(&g) == 0
}
