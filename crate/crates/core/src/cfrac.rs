//! Euclidean algorithm, regular continued fractions, and the Jacobi-Perron
//! algorithm in forward (digit) and matrix (convergent) form.
//!
//! The forward step follows the classical Jacobi-Perron rule: for a positive
//! vector (l_1, ..., l_n) with l_1 > 0,
//!
//! ```text
//! b_i  = floor(l_{i+1} / l_1)                 i = 1..n-1
//! next = (l_2 - b_1 l_1, ..., l_n - b_{n-1} l_1, l_1)
//! ```
//!
//! which is the unique floor-type inverse of the digit matrices
//!
//! ```text
//! B(b) = | 0  0 .. 0  1      |
//!        | 1  0 .. 0  b_1    |
//!        | .  . .. .  .      |
//!        | 0  0 .. 1  b_{n-1}|
//! ```
//!
//! so that B(b) * next = l holds exactly at every step. At rank 2 the digit
//! stream coincides with the regular continued fraction of l_2 / l_1.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::ExactReal;
use crate::matrix::IntMatrix;

/// The digit of one Jacobi-Perron step: n-1 non-negative integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitVector(Vec<BigInt>);

impl DigitVector {
    pub fn new(entries: Vec<BigInt>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Domain("digit vector must have length >= 1".into()));
        }
        if entries.iter().any(Signed::is_negative) {
            return Err(Error::Domain("digit entries must be non-negative".into()));
        }
        Ok(DigitVector(entries))
    }

    pub fn from_ints(entries: &[i64]) -> Result<Self> {
        DigitVector::new(entries.iter().map(|&e| BigInt::from(e)).collect())
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Rank of the expansion this digit belongs to.
    pub fn rank(&self) -> usize {
        self.0.len() + 1
    }
}

/// The n x n unimodular matrix attached to one digit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JpaMatrix {
    digit: DigitVector,
}

impl JpaMatrix {
    pub fn from_digit(digit: DigitVector) -> Self {
        JpaMatrix { digit }
    }

    pub fn digit(&self) -> &DigitVector {
        &self.digit
    }

    /// Materializes the block matrix: top row (0..0 1), unit subdiagonal,
    /// digit entries down the last column.
    pub fn matrix(&self) -> IntMatrix {
        let n = self.digit.rank();
        let mut m = IntMatrix::zeros(n, n);
        m.set(0, n - 1, BigInt::one());
        for i in 0..n - 1 {
            m.set(i + 1, i, BigInt::one());
            m.set(i + 1, n - 1, self.digit.entries()[i].clone());
        }
        m
    }

    /// Reads the digit back from a matrix of the expected block shape.
    pub fn from_matrix(m: &IntMatrix) -> Result<Self> {
        let n = m.n_rows();
        if !m.is_square() || n < 2 {
            return Err(Error::Domain("JPA matrix must be square of size >= 2".into()));
        }
        let mut digit = Vec::with_capacity(n - 1);
        for r in 0..n {
            for c in 0..n {
                let v = m.get(r, c);
                let expected_unit = (r == 0 && c == n - 1) || (r >= 1 && c == r - 1);
                if expected_unit {
                    if !v.is_one() {
                        return Err(Error::Domain("not a JPA digit matrix".into()));
                    }
                } else if c == n - 1 && r >= 1 {
                    if v.is_negative() {
                        return Err(Error::Domain("negative digit in matrix".into()));
                    }
                    digit.push(v.clone());
                } else if !v.is_zero() {
                    return Err(Error::Domain("not a JPA digit matrix".into()));
                }
            }
        }
        Ok(JpaMatrix {
            digit: DigitVector::new(digit)?,
        })
    }
}

/// How an expansion stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Still extendable (only observed while an expansion is being built).
    Running,
    /// A remainder coordinate forced l_1 = 0: the input had a rational
    /// dependence and the digit list is complete.
    RationalDependence,
    /// Stopped by the step budget (or, on the float tier, by a floor that
    /// could no longer be certified).
    Truncated,
}

/// A Jacobi-Perron expansion: digits plus the exact remainder states.
#[derive(Debug, Clone)]
pub struct JpaExpansion {
    rank: usize,
    digits: Vec<DigitVector>,
    states: Vec<Vec<ExactReal>>,
    termination: Termination,
    ambiguous_stop: bool,
}

impl JpaExpansion {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn digits(&self) -> &[DigitVector] {
        &self.digits
    }

    /// Remainder states l^(0), l^(1), ...; one more than the digit count.
    pub fn states(&self) -> &[Vec<ExactReal>] {
        &self.states
    }

    pub fn termination(&self) -> Termination {
        self.termination
    }

    pub fn terminated(&self) -> bool {
        self.termination == Termination::RationalDependence
    }

    /// True when a float-tier expansion stopped because a floor became
    /// precision-ambiguous before the step budget ran out.
    pub fn ambiguous_stop(&self) -> bool {
        self.ambiguous_stop
    }

    pub fn from_parts(
        rank: usize,
        digits: Vec<DigitVector>,
        states: Vec<Vec<ExactReal>>,
        termination: Termination,
    ) -> Result<Self> {
        if states.len() != digits.len() + 1 {
            return Err(Error::Domain(
                "expansion must carry one more state than digits".into(),
            ));
        }
        if digits.iter().any(|d| d.rank() != rank) || states.iter().any(|s| s.len() != rank) {
            return Err(Error::Domain("rank mismatch inside expansion".into()));
        }
        Ok(JpaExpansion {
            rank,
            digits,
            states,
            termination,
            ambiguous_stop: false,
        })
    }
}

/// Euclidean algorithm on a1 >= a2 >= 1: gcd plus the quotient list, which
/// is also the regular continued fraction of a1/a2.
pub fn euclid(a1: &BigInt, a2: &BigInt) -> Result<(BigInt, Vec<BigInt>)> {
    if a2 < &BigInt::one() || a1 < a2 {
        return Err(Error::Domain(format!(
            "euclid requires a1 >= a2 >= 1, got ({a1}, {a2})"
        )));
    }
    let mut r_prev = a1.clone();
    let mut r = a2.clone();
    let mut quotients = Vec::new();
    while !r.is_zero() {
        let (q, rem) = r_prev.div_rem(&r);
        quotients.push(q);
        r_prev = std::mem::replace(&mut r, rem);
    }
    Ok((r_prev, quotients))
}

/// Result of a regular continued-fraction expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularCf {
    pub digits: Vec<BigInt>,
    /// True when a remainder hit zero exactly (rational input).
    pub terminated: bool,
    /// True when the input was float-tier, so digits past the certified
    /// range are absent and termination cannot be trusted.
    pub inexact: bool,
}

/// Regular continued fraction of x > 0: b_1 = floor(x), x <- 1/(x - b).
pub fn regular_cf(x: &ExactReal, max_terms: usize) -> Result<RegularCf> {
    let lambda = vec![ExactReal::one(), x.clone()];
    if x.is_exact() {
        if x.sign_exact()? <= 0 {
            return Err(Error::Domain("regular_cf requires x > 0".into()));
        }
        let exp = jpa_expand(&lambda, max_terms)?;
        Ok(RegularCf {
            digits: exp
                .digits()
                .iter()
                .map(|d| d.entries()[0].clone())
                .collect(),
            terminated: exp.terminated(),
            inexact: false,
        })
    } else {
        let tf = x.to_tracked_f64()?;
        if tf.value - tf.err <= 0.0 {
            return Err(Error::Domain("regular_cf requires x > 0".into()));
        }
        let exp = jpa_expand(&lambda, max_terms)?;
        Ok(RegularCf {
            digits: exp
                .digits()
                .iter()
                .map(|d| d.entries()[0].clone())
                .collect(),
            terminated: exp.terminated(),
            inexact: true,
        })
    }
}

/// Outcome of a single JPA step.
#[derive(Debug, Clone)]
pub enum JpaStep {
    Step {
        digit: DigitVector,
        next: Vec<ExactReal>,
    },
    /// l_1 = 0 on entry: the expansion has terminated.
    RationalDependence,
}

fn any_float(lambda: &[ExactReal]) -> bool {
    lambda.iter().any(|x| !x.is_exact())
}

/// One Jacobi-Perron step. Exact when all entries are exact; certified
/// float arithmetic when any entry is float-tier, in which case an
/// uncertifiable floor surfaces as [`Error::AmbiguousFloat`].
pub fn jpa_step(lambda: &[ExactReal]) -> Result<JpaStep> {
    let n = lambda.len();
    if n < 2 {
        return Err(Error::Domain("JPA needs rank >= 2".into()));
    }
    if any_float(lambda) {
        return jpa_step_float(lambda);
    }
    let s1 = lambda[0].sign_exact()?;
    if s1 < 0 {
        return Err(Error::Domain("JPA requires l_1 > 0".into()));
    }
    if s1 == 0 {
        return Ok(JpaStep::RationalDependence);
    }
    for (i, x) in lambda.iter().enumerate().skip(1) {
        if x.sign_exact()? < 0 {
            return Err(Error::Domain(format!("negative JPA coordinate {}", i + 1)));
        }
    }
    let inv = ExactReal::one().try_div(&lambda[0])?;
    let mut digit = Vec::with_capacity(n - 1);
    let mut next = Vec::with_capacity(n);
    for i in 1..n {
        let ratio = lambda[i].try_mul(&inv)?;
        let b = ratio.floor_int()?;
        let rem = lambda[i].try_sub(&lambda[0].scale_int(&b))?;
        digit.push(b);
        next.push(rem);
    }
    next.push(lambda[0].clone());
    Ok(JpaStep::Step {
        digit: DigitVector::new(digit)?,
        next,
    })
}

fn jpa_step_float(lambda: &[ExactReal]) -> Result<JpaStep> {
    let n = lambda.len();
    let l: Vec<_> = lambda
        .iter()
        .map(|x| x.to_tracked_f64())
        .collect::<Result<Vec<_>>>()?;
    let s1 = l[0].checked_sign()?;
    if s1 < 0 {
        return Err(Error::Domain("JPA requires l_1 > 0".into()));
    }
    if s1 == 0 {
        return Ok(JpaStep::RationalDependence);
    }
    let mut digit = Vec::with_capacity(n - 1);
    let mut next = Vec::with_capacity(n);
    for i in 1..n {
        let ratio = l[i].div(l[0])?;
        let b = ratio.checked_floor()?;
        let bf = b
            .to_f64()
            .ok_or(Error::AmbiguousFloat(ratio.value))?;
        let scaled = l[0].mul(crate::exact::TrackedFloat::exactly(bf));
        let rem = l[i].sub(scaled);
        digit.push(b);
        next.push(ExactReal::Float(rem));
    }
    next.push(ExactReal::Float(l[0]));
    Ok(JpaStep::Step {
        digit: DigitVector::new(digit)?,
        next,
    })
}

fn validate_initial(lambda: &[ExactReal]) -> Result<()> {
    if lambda.len() < 2 {
        return Err(Error::Domain("JPA needs rank >= 2".into()));
    }
    for (i, x) in lambda.iter().enumerate() {
        let positive = if x.is_exact() {
            x.sign_exact()? > 0
        } else {
            let t = x.to_tracked_f64()?;
            t.value - t.err > 0.0
        };
        if !positive {
            return Err(Error::Domain(format!(
                "initial JPA vector must be strictly positive (coordinate {})",
                i + 1
            )));
        }
    }
    Ok(())
}

/// Full expansion: iterates [`jpa_step`] up to `max_steps` or a rational
/// dependence. Float-tier expansions additionally stop at the first
/// precision-ambiguous floor.
pub fn jpa_expand(lambda: &[ExactReal], max_steps: usize) -> Result<JpaExpansion> {
    validate_initial(lambda)?;
    let rank = lambda.len();
    let mut exp = JpaExpansion {
        rank,
        digits: Vec::new(),
        states: vec![lambda.to_vec()],
        termination: Termination::Running,
        ambiguous_stop: false,
    };
    for _ in 0..max_steps {
        let current = exp.states.last().unwrap();
        match jpa_step(current) {
            Ok(JpaStep::Step { digit, next }) => {
                exp.digits.push(digit);
                exp.states.push(next);
            }
            Ok(JpaStep::RationalDependence) => {
                exp.termination = Termination::RationalDependence;
                return Ok(exp);
            }
            Err(Error::AmbiguousFloat(_)) => {
                exp.termination = Termination::Truncated;
                exp.ambiguous_stop = true;
                return Ok(exp);
            }
            Err(e) => return Err(e),
        }
    }
    // the budget ran out; the state may still be extendable
    exp.termination = match jpa_step(exp.states.last().unwrap()) {
        Ok(JpaStep::RationalDependence) => Termination::RationalDependence,
        _ => Termination::Truncated,
    };
    Ok(exp)
}

/// Convergent matrix B_1 ... B_k and its last column.
pub fn convergents(digits: &[DigitVector], k: usize) -> Result<(IntMatrix, Vec<BigInt>)> {
    if k > digits.len() {
        return Err(Error::Domain(format!(
            "k = {k} out of range for {} digits",
            digits.len()
        )));
    }
    let rank = digits.first().map_or(2, DigitVector::rank);
    if digits.iter().any(|d| d.rank() != rank) {
        return Err(Error::Domain("inconsistent digit lengths".into()));
    }
    let mut product = IntMatrix::identity(rank);
    for digit in &digits[..k] {
        product = product.mul(&JpaMatrix::from_digit(digit.clone()).matrix())?;
    }
    let column = product.column(rank - 1);
    Ok((product, column))
}

/// Canonical key of a projective state: coordinates after normalizing the
/// last entry to 1.
fn projective_key(state: &[ExactReal]) -> Result<String> {
    let last = state.last().unwrap();
    if !last.is_exact() {
        return Err(Error::InexactState(
            "periodicity detection requires exact remainder states".into(),
        ));
    }
    let mut key = String::new();
    for x in &state[..state.len() - 1] {
        if !x.is_exact() {
            return Err(Error::InexactState(
                "periodicity detection requires exact remainder states".into(),
            ));
        }
        let norm = x.try_div(last)?;
        key.push_str(&norm.to_string());
        key.push(';');
    }
    Ok(key)
}

/// Least (preperiod, period) with l^(p + len) = l^(p) as exact projective
/// states, or `None` when no repeat occurs among the computed states or
/// the expansion terminated.
pub fn detect_period(expansion: &JpaExpansion) -> Result<Option<(usize, usize)>> {
    if expansion.terminated() {
        return Ok(None);
    }
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (idx, state) in expansion.states().iter().enumerate() {
        let key = projective_key(state)?;
        if let Some(&first) = seen.get(&key) {
            return Ok(Some((first, idx - first)));
        }
        seen.insert(key, idx);
    }
    Ok(None)
}

/// Expands while watching for a projective state repeat, stopping at the
/// first one or at `horizon` states. Returns the expansion together with
/// the detected (preperiod, period), if any.
pub fn jpa_expand_detecting(
    lambda: &[ExactReal],
    horizon: usize,
) -> Result<(JpaExpansion, Option<(usize, usize)>)> {
    validate_initial(lambda)?;
    if any_float(lambda) {
        return Err(Error::InexactState(
            "periodicity detection requires exact input".into(),
        ));
    }
    let rank = lambda.len();
    let mut exp = JpaExpansion {
        rank,
        digits: Vec::new(),
        states: vec![lambda.to_vec()],
        termination: Termination::Running,
        ambiguous_stop: false,
    };
    let mut seen: HashMap<String, usize> = HashMap::new();
    seen.insert(projective_key(&exp.states[0])?, 0);
    for _ in 0..horizon {
        let current = exp.states.last().unwrap();
        match jpa_step(current)? {
            JpaStep::Step { digit, next } => {
                exp.digits.push(digit);
                let key = projective_key(&next)?;
                let idx = exp.states.len();
                exp.states.push(next);
                if let Some(&first) = seen.get(&key) {
                    exp.termination = Termination::Truncated;
                    return Ok((exp, Some((first, idx - first))));
                }
                seen.insert(key, idx);
            }
            JpaStep::RationalDependence => {
                exp.termination = Termination::RationalDependence;
                return Ok((exp, None));
            }
        }
    }
    exp.termination = Termination::Truncated;
    Ok((exp, None))
}

/// Whether the diagnostic considers the convergents to be closing in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConvergenceDecision {
    Improving,
    Stalled,
}

/// Angular-distance trace of the convergent directions against a target.
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub angles: Vec<f64>,
    pub decided: ConvergenceDecision,
}

fn column_to_f64(col: &[BigInt]) -> Vec<f64> {
    let max = col.iter().map(Signed::abs).max().unwrap_or_else(BigInt::one);
    let max = if max.is_zero() { BigInt::one() } else { max };
    col.iter()
        .map(|c| {
            num_rational::BigRational::new(c.clone(), max.clone())
                .to_f64()
                .unwrap_or(0.0)
        })
        .collect()
}

fn angle_between(u: &[f64], v: &[f64]) -> f64 {
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu: f64 = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nv: f64 = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        return std::f64::consts::FRAC_PI_2;
    }
    (dot / (nu * nv)).clamp(-1.0, 1.0).acos()
}

/// True when the convergent column is exactly proportional to the target
/// (all 2x2 cross-determinants vanish). Exact inputs only.
fn exactly_proportional(col: &[BigInt], target: &[ExactReal]) -> Result<bool> {
    for i in 0..col.len() {
        for j in i + 1..col.len() {
            let lhs = target[j].scale_int(&col[i]);
            let rhs = target[i].scale_int(&col[j]);
            if !lhs.eq_exact(&rhs)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Angular distances between the convergent directions of `expansion` and
/// `target`, plus an improving/stalled call against `threshold`.
///
/// This is a numerical heuristic, not a convergence-set membership test.
pub fn convergence_diagnostic(
    expansion: &JpaExpansion,
    target: &[ExactReal],
    threshold: f64,
) -> Result<ConvergenceReport> {
    if target.len() != expansion.rank() {
        return Err(Error::RankMismatch(target.len(), expansion.rank()));
    }
    let target_f: Vec<f64> = target
        .iter()
        .map(|x| x.to_f64())
        .collect::<Result<Vec<_>>>()?;
    let all_exact = target.iter().all(ExactReal::is_exact);
    let steps = expansion.digits().len();
    let mut angles = Vec::with_capacity(steps);
    let mut product = IntMatrix::identity(expansion.rank());
    for (k, digit) in expansion.digits().iter().enumerate() {
        product = product.mul(&JpaMatrix::from_digit(digit.clone()).matrix())?;
        let col = product.column(expansion.rank() - 1);
        let is_last = k + 1 == steps;
        if is_last && all_exact && exactly_proportional(&col, target)? {
            angles.push(0.0);
        } else {
            angles.push(angle_between(&column_to_f64(&col), &target_f));
        }
    }
    let decided = decide(&angles, threshold);
    Ok(ConvergenceReport { angles, decided })
}

fn decide(angles: &[f64], threshold: f64) -> ConvergenceDecision {
    let Some(&last) = angles.last() else {
        return ConvergenceDecision::Stalled;
    };
    if last > threshold {
        return ConvergenceDecision::Stalled;
    }
    let window = angles.len().min(5);
    let tail = &angles[angles.len() - window..];
    for pair in tail.windows(2) {
        let both_below = pair[0] <= threshold && pair[1] <= threshold;
        if pair[1] > pair[0] && !both_below {
            return ConvergenceDecision::Stalled;
        }
    }
    ConvergenceDecision::Improving
}
