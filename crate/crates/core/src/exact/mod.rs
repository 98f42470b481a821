//! Exact real numbers: rationals, real number-field elements with isolating
//! intervals, and precision-tracked floats.
//!
//! The JPA digit extraction needs error-free floors and sign tests, so the
//! exact tiers never touch floating point: number-field elements are
//! coordinate vectors over Q in the power basis of a monic integer minimal
//! polynomial, and every sign question is settled by refining the root's
//! isolating interval with rational-endpoint bisection.
//!
//! The float tier carries an explicit error radius. It is used by the
//! sampler and the convergence diagnostics only; it never feeds
//! periodicity detection.

pub mod parse;
pub mod poly;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Hard cap on bisection depth; hitting it means the context invariant
/// (exactly one root in the interval) is broken.
const MAX_REFINE_BITS: u32 = 1 << 16;

/// A real number field Q(alpha) with a distinguished real root.
///
/// `min_poly` is monic with integer coefficients (ascending order) and the
/// isolating interval [lo, hi] contains exactly one real root, the chosen
/// embedding of alpha. Refinements are cached per bisection depth.
pub struct FieldContext {
    min_poly: Vec<BigInt>,
    lo: BigRational,
    hi: BigRational,
    sign_lo: i8,
    cache: Mutex<BTreeMap<u32, (BigRational, BigRational)>>,
}

impl fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldContext")
            .field("min_poly", &self.min_poly)
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .finish()
    }
}

impl FieldContext {
    /// Creates a context after validating the invariants that the exact
    /// arithmetic depends on: monic polynomial of degree >= 2, squarefree,
    /// no rational root among small candidates, and an interval isolating
    /// exactly one real root with a sign change across it.
    pub fn new(min_poly: Vec<BigInt>, lo: BigRational, hi: BigRational) -> Result<Arc<Self>> {
        if min_poly.len() < 3 {
            return Err(Error::Domain(
                "minimal polynomial must have degree >= 2".into(),
            ));
        }
        if min_poly.last().map(|c| !c.is_one()).unwrap_or(true) {
            return Err(Error::Domain("minimal polynomial must be monic".into()));
        }
        if lo >= hi {
            return Err(Error::Domain("isolating interval is empty".into()));
        }
        let qp = poly::from_int_coeffs(&min_poly);
        if !poly::is_squarefree(&qp) {
            return Err(Error::Domain(
                "minimal polynomial is not squarefree, hence reducible".into(),
            ));
        }
        Self::check_no_small_rational_root(&min_poly)?;
        let v_lo = poly::eval_int_poly(&min_poly, &lo);
        let v_hi = poly::eval_int_poly(&min_poly, &hi);
        if v_lo.is_zero() || v_hi.is_zero() {
            return Err(Error::Domain(
                "isolating interval endpoint is a rational root".into(),
            ));
        }
        if v_lo.is_positive() == v_hi.is_positive() {
            return Err(Error::Domain(
                "minimal polynomial has no sign change across the interval".into(),
            ));
        }
        if poly::count_roots(&qp, &lo, &hi) != 1 {
            return Err(Error::Domain(
                "isolating interval does not contain exactly one root".into(),
            ));
        }
        let sign_lo = if v_lo.is_positive() { 1 } else { -1 };
        Ok(Arc::new(FieldContext {
            min_poly,
            lo,
            hi,
            sign_lo,
            cache: Mutex::new(BTreeMap::new()),
        }))
    }

    /// Rational-root screen. Complete for degree <= 3 (where no rational
    /// root means irreducible); for higher degrees irreducibility is the
    /// caller's contract and reducibility surfaces later as a failed
    /// inversion.
    fn check_no_small_rational_root(min_poly: &[BigInt]) -> Result<()> {
        let a0 = &min_poly[0];
        if a0.is_zero() {
            return Err(Error::Domain(
                "minimal polynomial has root 0, hence is reducible".into(),
            ));
        }
        let bound = BigInt::from(1_000_000u64);
        if a0.abs() > bound {
            return Ok(());
        }
        let a0_abs = a0.abs().to_u64().unwrap();
        for d in 1..=a0_abs {
            if a0_abs % d != 0 {
                continue;
            }
            for cand in [BigInt::from(d), -BigInt::from(d)] {
                let v = poly::eval_int_poly(min_poly, &BigRational::from_integer(cand));
                if v.is_zero() {
                    return Err(Error::Domain(
                        "minimal polynomial has a rational root, hence is reducible".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    pub fn interval(&self) -> (BigRational, BigRational) {
        (self.lo.clone(), self.hi.clone())
    }

    /// Isolating interval after `bits` bisection steps. Cached; idempotent
    /// under concurrent insertion.
    pub fn refined(&self, bits: u32) -> Result<(BigRational, BigRational)> {
        if bits == 0 {
            return Ok((self.lo.clone(), self.hi.clone()));
        }
        if bits > MAX_REFINE_BITS {
            return Err(Error::NonRealState(
                "refinement depth exhausted without separating the root".into(),
            ));
        }
        {
            let cache = self.cache.lock().unwrap();
            if let Some(hit) = cache.get(&bits) {
                return Ok(hit.clone());
            }
            // resume from the deepest cached refinement below `bits`
        }
        let (mut depth, mut lo, mut hi) = {
            let cache = self.cache.lock().unwrap();
            match cache.range(..bits).next_back() {
                Some((&d, (l, h))) => (d, l.clone(), h.clone()),
                None => (0, self.lo.clone(), self.hi.clone()),
            }
        };
        let two = BigRational::from_integer(BigInt::from(2));
        while depth < bits {
            let mid = (&lo + &hi) / &two;
            let v_mid = poly::eval_int_poly(&self.min_poly, &mid);
            if v_mid.is_zero() {
                return Err(Error::NonRealState(
                    "bisection hit a rational root of the minimal polynomial".into(),
                ));
            }
            let s_mid = if v_mid.is_positive() { 1 } else { -1 };
            if s_mid == self.sign_lo {
                lo = mid;
            } else {
                hi = mid;
            }
            depth += 1;
        }
        let mut cache = self.cache.lock().unwrap();
        cache.insert(bits, (lo.clone(), hi.clone()));
        Ok((lo, hi))
    }

    /// True when `other` describes the same real algebraic number: equal
    /// minimal polynomial and intervals that select the same root.
    pub fn same_root(&self, other: &FieldContext) -> bool {
        if std::ptr::eq(self, other) {
            return true;
        }
        if self.min_poly != other.min_poly {
            return false;
        }
        let lo = if self.lo > other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi < other.hi { &self.hi } else { &other.hi };
        if lo >= hi {
            return false;
        }
        let qp = poly::from_int_coeffs(&self.min_poly);
        poly::count_roots(&qp, lo, hi) == 1
    }
}

/// Certified float: value plus accumulated error radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackedFloat {
    pub value: f64,
    pub err: f64,
}

fn ulp(v: f64) -> f64 {
    (v.abs() * f64::EPSILON).max(f64::MIN_POSITIVE)
}

impl TrackedFloat {
    pub fn new(value: f64, err: f64) -> Result<Self> {
        if !value.is_finite() || !err.is_finite() || err < 0.0 {
            return Err(Error::Domain(
                "float value and error radius must be finite, radius >= 0".into(),
            ));
        }
        Ok(TrackedFloat { value, err })
    }

    pub fn exactly(value: f64) -> Self {
        TrackedFloat { value, err: 0.0 }
    }

    pub fn add(self, o: TrackedFloat) -> TrackedFloat {
        let v = self.value + o.value;
        TrackedFloat {
            value: v,
            err: self.err + o.err + ulp(v),
        }
    }

    pub fn sub(self, o: TrackedFloat) -> TrackedFloat {
        let v = self.value - o.value;
        TrackedFloat {
            value: v,
            err: self.err + o.err + ulp(v),
        }
    }

    pub fn mul(self, o: TrackedFloat) -> TrackedFloat {
        let v = self.value * o.value;
        TrackedFloat {
            value: v,
            err: self.value.abs() * o.err + o.value.abs() * self.err + self.err * o.err + ulp(v),
        }
    }

    pub fn div(self, o: TrackedFloat) -> Result<TrackedFloat> {
        if o.value.abs() <= o.err {
            return Err(Error::DivisionByZero);
        }
        let v = self.value / o.value;
        let denom = o.value.abs() - o.err;
        let err = (self.err + v.abs() * o.err) / denom + ulp(v);
        Ok(TrackedFloat { value: v, err })
    }

    /// Floor certified against the error interval; ambiguous when the
    /// interval straddles an integer or exceeds f64's exact-integer range.
    pub fn checked_floor(self) -> Result<BigInt> {
        let lo = self.value - self.err;
        let hi = self.value + self.err;
        if hi.abs() >= 9.0e15 || lo.abs() >= 9.0e15 {
            return Err(Error::AmbiguousFloat(self.value));
        }
        let flo = lo.floor();
        let fhi = hi.floor();
        if flo != fhi {
            return Err(Error::AmbiguousFloat(self.value));
        }
        Ok(BigInt::from(flo as i64))
    }

    /// Sign certified against the error interval.
    pub fn checked_sign(self) -> Result<i8> {
        if self.value.abs() > self.err {
            Ok(if self.value > 0.0 { 1 } else { -1 })
        } else if self.value == 0.0 && self.err == 0.0 {
            Ok(0)
        } else {
            Err(Error::AmbiguousFloat(self.value))
        }
    }
}

/// A real number represented exactly (rational or number-field element)
/// or as a precision-tracked float.
///
/// `PartialEq` compares representations (variant, context and
/// coordinates); use [`ExactReal::eq_exact`] for mathematical equality
/// across tiers.
#[derive(Debug, Clone)]
pub enum ExactReal {
    Rational(BigRational),
    NumberField {
        ctx: Arc<FieldContext>,
        coords: Vec<BigRational>,
    },
    Float(TrackedFloat),
}

impl ExactReal {
    pub fn from_int(n: i64) -> Self {
        ExactReal::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        ExactReal::Rational(BigRational::from_integer(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Domain("zero denominator".into()));
        }
        Ok(ExactReal::Rational(BigRational::new(
            BigInt::from(num),
            BigInt::from(den),
        )))
    }

    pub fn from_rational(r: BigRational) -> Self {
        ExactReal::Rational(r)
    }

    pub fn float(value: f64) -> Result<Self> {
        Ok(ExactReal::Float(TrackedFloat::new(value, 0.0)?))
    }

    /// Number-field element from power-basis coordinates.
    pub fn in_field(ctx: Arc<FieldContext>, coords: Vec<BigRational>) -> Result<Self> {
        if coords.len() != ctx.degree() {
            return Err(Error::Domain(format!(
                "coordinate vector length {} does not match field degree {}",
                coords.len(),
                ctx.degree()
            )));
        }
        Ok(ExactReal::NumberField { ctx, coords })
    }

    /// The field generator alpha itself.
    pub fn generator(ctx: Arc<FieldContext>) -> Self {
        let mut coords = vec![BigRational::zero(); ctx.degree()];
        coords[1] = BigRational::one();
        ExactReal::NumberField { ctx, coords }
    }

    pub fn zero() -> Self {
        ExactReal::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactReal::Rational(BigRational::one())
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, ExactReal::Float(_))
    }

    pub fn field_context(&self) -> Option<&Arc<FieldContext>> {
        match self {
            ExactReal::NumberField { ctx, .. } => Some(ctx),
            _ => None,
        }
    }

    /// Rational value when the representation is degenerate (rational tier,
    /// or field coordinates with no generator component).
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            ExactReal::Rational(r) => Some(r.clone()),
            ExactReal::NumberField { coords, .. } => {
                if coords[1..].iter().all(Zero::is_zero) {
                    Some(coords[0].clone())
                } else {
                    None
                }
            }
            ExactReal::Float(_) => None,
        }
    }

    pub fn is_zero_exact(&self) -> Result<bool> {
        match self {
            ExactReal::Rational(r) => Ok(r.is_zero()),
            ExactReal::NumberField { coords, .. } => Ok(coords.iter().all(Zero::is_zero)),
            ExactReal::Float(f) => {
                if f.err == 0.0 {
                    Ok(f.value == 0.0)
                } else {
                    Err(Error::InexactState(
                        "zero test on a float with nonzero error radius".into(),
                    ))
                }
            }
        }
    }

    fn unify(&self, other: &ExactReal) -> Result<Unified> {
        use ExactReal::*;
        match (self, other) {
            (Rational(a), Rational(b)) => Ok(Unified::Rational(a.clone(), b.clone())),
            (NumberField { ctx, coords }, Rational(b)) => {
                let mut bc = vec![BigRational::zero(); ctx.degree()];
                bc[0] = b.clone();
                Ok(Unified::Field(ctx.clone(), coords.clone(), bc))
            }
            (Rational(a), NumberField { ctx, coords }) => {
                let mut ac = vec![BigRational::zero(); ctx.degree()];
                ac[0] = a.clone();
                Ok(Unified::Field(ctx.clone(), ac, coords.clone()))
            }
            (
                NumberField { ctx: ca, coords: xa },
                NumberField { ctx: cb, coords: xb },
            ) => {
                if Arc::ptr_eq(ca, cb) || ca.same_root(cb) {
                    Ok(Unified::Field(ca.clone(), xa.clone(), xb.clone()))
                } else {
                    Err(Error::MixedContext(format!(
                        "cannot combine elements of {:?} and {:?}",
                        ca.min_poly(),
                        cb.min_poly()
                    )))
                }
            }
            (Float(a), Float(b)) => Ok(Unified::Float(*a, *b)),
            (Float(a), _) => Ok(Unified::Float(*a, other.to_tracked_f64()?)),
            (_, Float(b)) => Ok(Unified::Float(self.to_tracked_f64()?, *b)),
        }
    }

    pub fn try_add(&self, other: &ExactReal) -> Result<ExactReal> {
        match self.unify(other)? {
            Unified::Rational(a, b) => Ok(ExactReal::Rational(a + b)),
            Unified::Field(ctx, a, b) => {
                let coords = a.iter().zip(&b).map(|(x, y)| x + y).collect();
                Ok(ExactReal::NumberField { ctx, coords })
            }
            Unified::Float(a, b) => Ok(ExactReal::Float(a.add(b))),
        }
    }

    pub fn try_sub(&self, other: &ExactReal) -> Result<ExactReal> {
        match self.unify(other)? {
            Unified::Rational(a, b) => Ok(ExactReal::Rational(a - b)),
            Unified::Field(ctx, a, b) => {
                let coords = a.iter().zip(&b).map(|(x, y)| x - y).collect();
                Ok(ExactReal::NumberField { ctx, coords })
            }
            Unified::Float(a, b) => Ok(ExactReal::Float(a.sub(b))),
        }
    }

    pub fn try_mul(&self, other: &ExactReal) -> Result<ExactReal> {
        match self.unify(other)? {
            Unified::Rational(a, b) => Ok(ExactReal::Rational(a * b)),
            Unified::Field(ctx, a, b) => {
                let prod = poly::mul(&a, &b);
                let coords = reduce_mod_min_poly(prod, &ctx);
                Ok(ExactReal::NumberField { ctx, coords })
            }
            Unified::Float(a, b) => Ok(ExactReal::Float(a.mul(b))),
        }
    }

    pub fn try_div(&self, other: &ExactReal) -> Result<ExactReal> {
        match self.unify(other)? {
            Unified::Rational(a, b) => {
                if b.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(ExactReal::Rational(a / b))
            }
            Unified::Field(ctx, a, b) => {
                let inv = field_inverse(&b, &ctx)?;
                let prod = poly::mul(&a, &inv);
                let coords = reduce_mod_min_poly(prod, &ctx);
                Ok(ExactReal::NumberField { ctx, coords })
            }
            Unified::Float(a, b) => Ok(ExactReal::Float(a.div(b)?)),
        }
    }

    pub fn neg(&self) -> ExactReal {
        match self {
            ExactReal::Rational(r) => ExactReal::Rational(-r.clone()),
            ExactReal::NumberField { ctx, coords } => ExactReal::NumberField {
                ctx: ctx.clone(),
                coords: coords.iter().map(|c| -c.clone()).collect(),
            },
            ExactReal::Float(f) => ExactReal::Float(TrackedFloat {
                value: -f.value,
                err: f.err,
            }),
        }
    }

    /// Multiplication by a rational scalar without a field lookup.
    pub fn scale_rational(&self, s: &BigRational) -> ExactReal {
        match self {
            ExactReal::Rational(r) => ExactReal::Rational(r * s),
            ExactReal::NumberField { ctx, coords } => ExactReal::NumberField {
                ctx: ctx.clone(),
                coords: coords.iter().map(|c| c * s).collect(),
            },
            ExactReal::Float(f) => {
                let sv = s.to_f64().unwrap_or(f64::NAN);
                ExactReal::Float(f.mul(TrackedFloat::exactly(sv)))
            }
        }
    }

    pub fn scale_int(&self, s: &BigInt) -> ExactReal {
        self.scale_rational(&BigRational::from_integer(s.clone()))
    }

    /// Enclosing rational interval after `bits` bisection refinements of
    /// the field generator. Exact variants only.
    pub fn value_interval(&self, bits: u32) -> Result<(BigRational, BigRational)> {
        match self {
            ExactReal::Rational(r) => Ok((r.clone(), r.clone())),
            ExactReal::NumberField { ctx, coords } => {
                let (lo, hi) = ctx.refined(bits)?;
                Ok(poly::eval_interval(coords, &lo, &hi))
            }
            ExactReal::Float(_) => Err(Error::InexactState(
                "value_interval on a float-tier value".into(),
            )),
        }
    }

    /// Exact sign: -1, 0, +1. Exact variants only.
    pub fn sign_exact(&self) -> Result<i8> {
        match self {
            ExactReal::Rational(r) => Ok(rational_sign(r)),
            ExactReal::NumberField { coords, .. } => {
                if coords.iter().all(Zero::is_zero) {
                    return Ok(0);
                }
                if let Some(r) = self.as_rational() {
                    return Ok(rational_sign(&r));
                }
                let mut bits = 8u32;
                loop {
                    let (lo, hi) = self.value_interval(bits)?;
                    if lo.is_positive() {
                        return Ok(1);
                    }
                    if hi.is_negative() {
                        return Ok(-1);
                    }
                    bits = bits.checked_mul(2).ok_or_else(|| {
                        Error::NonRealState("sign refinement overflow".into())
                    })?;
                    if bits > MAX_REFINE_BITS {
                        return Err(Error::NonRealState(
                            "sign test failed to separate a nonzero value from 0".into(),
                        ));
                    }
                }
            }
            ExactReal::Float(f) => f.checked_sign(),
        }
    }

    /// Exact floor. Requires an exact variant; refines the isolating
    /// interval until it contains no integer in its interior or the value
    /// is proven rational.
    pub fn floor_int(&self) -> Result<BigInt> {
        match self {
            ExactReal::Rational(r) => Ok(r.floor().to_integer()),
            ExactReal::NumberField { .. } => {
                if let Some(r) = self.as_rational() {
                    return Ok(r.floor().to_integer());
                }
                let mut bits = 8u32;
                loop {
                    let (lo, hi) = self.value_interval(bits)?;
                    let flo = lo.floor().to_integer();
                    let fhi = hi.floor().to_integer();
                    if flo == fhi {
                        return Ok(flo);
                    }
                    bits = bits.checked_mul(2).ok_or_else(|| {
                        Error::NonRealState("floor refinement overflow".into())
                    })?;
                    if bits > MAX_REFINE_BITS {
                        return Err(Error::NonRealState(
                            "floor refinement failed to localize an irrational value".into(),
                        ));
                    }
                }
            }
            ExactReal::Float(_) => Err(Error::InexactState(
                "exact floor on a float-tier value; use the float path".into(),
            )),
        }
    }

    /// Exact trichotomy between exact values (rationals may mix with one
    /// number field; distinct fields are rejected).
    pub fn cmp_exact(&self, other: &ExactReal) -> Result<Ordering> {
        if !self.is_exact() || !other.is_exact() {
            return Err(Error::InexactState(
                "exact comparison on a float-tier value".into(),
            ));
        }
        let diff = self.try_sub(other)?;
        Ok(match diff.sign_exact()? {
            0 => Ordering::Equal,
            s if s < 0 => Ordering::Less,
            _ => Ordering::Greater,
        })
    }

    pub fn eq_exact(&self, other: &ExactReal) -> Result<bool> {
        Ok(self.cmp_exact(other)? == Ordering::Equal)
    }

    /// Float approximation with a certified error radius.
    pub fn to_tracked_f64(&self) -> Result<TrackedFloat> {
        match self {
            ExactReal::Rational(r) => {
                let v = r.to_f64().ok_or_else(|| {
                    Error::Domain("rational exceeds f64 range".into())
                })?;
                Ok(TrackedFloat { value: v, err: ulp(v) })
            }
            ExactReal::NumberField { .. } => {
                let mut bits = 32u32;
                loop {
                    let (lo, hi) = self.value_interval(bits)?;
                    let width = &hi - &lo;
                    let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
                    let v = mid.to_f64().ok_or_else(|| {
                        Error::Domain("field value exceeds f64 range".into())
                    })?;
                    let w = width.to_f64().unwrap_or(f64::INFINITY);
                    if w <= 2.0 * ulp(v).max(1e-300) || bits >= 4096 {
                        return Ok(TrackedFloat {
                            value: v,
                            err: w / 2.0 + 2.0 * ulp(v),
                        });
                    }
                    bits *= 2;
                }
            }
            ExactReal::Float(f) => Ok(*f),
        }
    }

    pub fn to_f64(&self) -> Result<f64> {
        Ok(self.to_tracked_f64()?.value)
    }
}

impl PartialEq for ExactReal {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (ExactReal::Rational(a), ExactReal::Rational(b)) => a == b,
            (
                ExactReal::NumberField { ctx: ca, coords: xa },
                ExactReal::NumberField { ctx: cb, coords: xb },
            ) => xa == xb && (Arc::ptr_eq(ca, cb) || ca.same_root(cb)),
            (ExactReal::Float(a), ExactReal::Float(b)) => {
                a.value == b.value && a.err == b.err
            }
            _ => false,
        }
    }
}

fn rational_sign(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

enum Unified {
    Rational(BigRational, BigRational),
    Field(Arc<FieldContext>, Vec<BigRational>, Vec<BigRational>),
    Float(TrackedFloat, TrackedFloat),
}

/// Reduces a product polynomial modulo the monic minimal polynomial and
/// pads to the field degree.
fn reduce_mod_min_poly(mut p: Vec<BigRational>, ctx: &FieldContext) -> Vec<BigRational> {
    let d = ctx.degree();
    let mp = ctx.min_poly();
    while p.len() > d {
        let top = p.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        let k = p.len() - d; // x^(d+k) = -sum a_i x^(i+k)
        for i in 0..d {
            let a = BigRational::from_integer(mp[i].clone());
            p[k + i] -= &top * a;
        }
    }
    p.resize(d, BigRational::zero());
    p
}

/// Inverse in Q[t]/(min_poly) via the extended Euclidean algorithm.
fn field_inverse(coords: &[BigRational], ctx: &FieldContext) -> Result<Vec<BigRational>> {
    if coords.iter().all(Zero::is_zero) {
        return Err(Error::DivisionByZero);
    }
    let mp = poly::from_int_coeffs(ctx.min_poly());
    let (g, s, _) = poly::extended_gcd(coords, &mp);
    if poly::degree(&g) != 0 || g[0].is_zero() {
        return Err(Error::NonRealState(
            "gcd with the minimal polynomial is nonconstant; polynomial is reducible".into(),
        ));
    }
    // g is monic constant 1 after normalization in extended_gcd
    let mut inv = s;
    let reduced = reduce_mod_min_poly(std::mem::take(&mut inv), ctx);
    Ok(reduced)
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactReal::Rational(r) => write!(f, "{}", r),
            ExactReal::NumberField { ctx, coords } => {
                write!(f, "nf:")?;
                write_poly(f, ctx.min_poly())?;
                let (lo, hi) = ctx.interval();
                write!(f, "@[{},{}]:(", lo, hi)?;
                for (i, c) in coords.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", c)?;
                }
                write!(f, ")")
            }
            ExactReal::Float(t) => write!(f, "float:{}", t.value),
        }
    }
}

fn write_poly(f: &mut fmt::Formatter<'_>, coeffs: &[BigInt]) -> fmt::Result {
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
        } else if c.is_negative() {
            write!(f, "-")?;
        } else {
            write!(f, "+")?;
        }
        match i {
            0 => write!(f, "{}", mag)?,
            1 => {
                if !mag.is_one() {
                    write!(f, "{}", mag)?;
                }
                write!(f, "t")?;
            }
            _ => {
                if !mag.is_one() {
                    write!(f, "{}", mag)?;
                }
                write!(f, "t^{}", i)?;
            }
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Convenience constructors for the fields used throughout the tests and
/// examples: sqrt(d) and cbrt(m).
pub fn sqrt_context(d: i64) -> Result<Arc<FieldContext>> {
    if d <= 1 {
        return Err(Error::Domain("sqrt context needs d >= 2".into()));
    }
    let hi_guess = (1..).find(|k| k * k > d).unwrap();
    FieldContext::new(
        vec![BigInt::from(-d), BigInt::zero(), BigInt::one()],
        BigRational::from_integer(BigInt::from(hi_guess - 1)),
        BigRational::from_integer(BigInt::from(hi_guess)),
    )
}

pub fn cbrt_context(m: i64) -> Result<Arc<FieldContext>> {
    if m <= 1 {
        return Err(Error::Domain("cbrt context needs m >= 2".into()));
    }
    let hi_guess = (1..).find(|k| k * k * k > m).unwrap();
    FieldContext::new(
        vec![
            BigInt::from(-m),
            BigInt::zero(),
            BigInt::zero(),
            BigInt::one(),
        ],
        BigRational::from_integer(BigInt::from(hi_guess - 1)),
        BigRational::from_integer(BigInt::from(hi_guess)),
    )
}
