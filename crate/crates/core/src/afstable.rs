//! Stable-isomorphism verdicts between toric AF-algebras.
//!
//! At rank 2 the verdict is decisive for exact rational and
//! eventually-periodic (quadratic) inputs: two regular continued
//! fractions have eventually equal tails exactly when their complete
//! quotients coincide somewhere, and for periodic expansions that reduces
//! to rotation equivalence of the primitive digit cycles. Both facts are
//! checked with exact arithmetic, so an `Isomorphic` or `Distinct`
//! outcome at rank 2 is proof-grade.
//!
//! Above rank 2 no digit-tail criterion is known to characterize
//! GL_n(Z)-equivalence, so the verdict is `Isomorphic` only on a tail
//! match or a verified (matrix, scale) module witness, `Distinct` only
//! when the digit structures are provably incompatible (terminating vs
//! infinite) and every candidate scale fails the module test, and
//! `Unknown` otherwise.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::cfrac::{jpa_expand, jpa_expand_detecting, DigitVector, JpaExpansion};
use crate::error::{Error, Result};
use crate::exact::ExactReal;
use crate::bratteli::ToricAfAlgebra;
use crate::lattice::{basis_change, lift, module_coords, module_equal, BasisChange};
use crate::matrix::IntMatrix;

/// Three-valued verdict outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Isomorphic,
    Distinct,
    Unknown,
}

/// A checkable isomorphism witness.
#[derive(Debug, Clone)]
pub enum Witness {
    /// Digit tails coincide from these offsets on.
    TailOffsets { a: usize, b: usize },
    /// A unimodular matrix and scale mapping one module onto the other.
    Module { matrix: IntMatrix, scale: ExactReal },
}

/// Outcome plus the evidence: `Isomorphic` carries a witness, `Distinct`
/// a named separating invariant, `Unknown` neither.
#[derive(Debug, Clone)]
pub struct StableIsoVerdict {
    pub outcome: Outcome,
    pub witness: Option<Witness>,
    pub separating: Option<String>,
}

impl StableIsoVerdict {
    fn isomorphic(witness: Witness) -> Self {
        StableIsoVerdict {
            outcome: Outcome::Isomorphic,
            witness: Some(witness),
            separating: None,
        }
    }

    fn distinct(invariant: impl Into<String>) -> Self {
        StableIsoVerdict {
            outcome: Outcome::Distinct,
            witness: None,
            separating: Some(invariant.into()),
        }
    }

    fn unknown() -> Self {
        StableIsoVerdict {
            outcome: Outcome::Unknown,
            witness: None,
            separating: None,
        }
    }
}

/// Search controls for [`stable_iso`].
#[derive(Debug, Clone)]
pub struct StableIsoOptions {
    /// State/digit horizon for expansions and tail searches.
    pub horizon: usize,
    /// Candidate scales for the module search; defaults to the ratios of
    /// the two generator families.
    pub scale_candidates: Option<Vec<ExactReal>>,
    /// A user-supplied (matrix, scale) witness to verify first.
    pub witness: Option<(BasisChange, ExactReal)>,
}

impl Default for StableIsoOptions {
    fn default() -> Self {
        StableIsoOptions {
            horizon: 512,
            scale_candidates: None,
            witness: None,
        }
    }
}

/// Minimum matched-window length for a tail witness used in a verdict;
/// an overlap of a few digits at the end of truncated streams is noise.
const TAIL_WITNESS_MIN_OVERLAP: usize = 8;

/// Least offsets (k, k') with a[k+i] = b[k'+i] over the computed overlap,
/// up to `horizon`; `None` when no offsets match. Offsets are ordered by
/// k + k', then k. At least one digit must overlap.
pub fn tail_equivalent(
    a: &[DigitVector],
    b: &[DigitVector],
    horizon: usize,
) -> Option<(usize, usize)> {
    tail_equivalent_with(a, b, horizon, 1)
}

/// [`tail_equivalent`] with an explicit minimum overlap requirement.
pub fn tail_equivalent_with(
    a: &[DigitVector],
    b: &[DigitVector],
    horizon: usize,
    min_overlap: usize,
) -> Option<(usize, usize)> {
    let ka_max = a.len().min(horizon);
    let kb_max = b.len().min(horizon);
    for s in 0..=(ka_max + kb_max) {
        for k in s.saturating_sub(kb_max)..=s.min(ka_max) {
            let kp = s - k;
            let overlap = (a.len() - k).min(b.len() - kp).min(horizon);
            if overlap < min_overlap.max(1) {
                continue;
            }
            if (0..overlap).all(|i| a[k + i] == b[kp + i]) {
                return Some((k, kp));
            }
        }
    }
    None
}

/// Canonical key of a projective remainder state that is stable across
/// expansions whose contexts select the same root.
fn state_key(state: &[ExactReal]) -> Result<String> {
    let last = state.last().unwrap();
    let mut key = String::new();
    for x in &state[..state.len() - 1] {
        let norm = x.try_div(last)?;
        match &norm {
            ExactReal::Rational(r) => key.push_str(&format!("q:{r};")),
            ExactReal::NumberField { ctx, coords } => {
                key.push_str("f:");
                for c in coords {
                    key.push_str(&format!("{c},"));
                }
                key.push_str(&format!("|{:?};", ctx.min_poly()));
            }
            ExactReal::Float(_) => {
                return Err(Error::InexactState("float state in exact search".into()))
            }
        }
    }
    Ok(key)
}

/// Exact complete-quotient coincidence between two expansions sharing a
/// field: equal states prove equal digit tails forever. Returns the least
/// offsets by (sum, first).
fn state_coincidence(a: &JpaExpansion, b: &JpaExpansion) -> Result<Option<(usize, usize)>> {
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (i, s) in a.states().iter().enumerate() {
        let k = state_key(s)?;
        seen.entry(k).or_insert(i);
    }
    let mut best: Option<(usize, usize)> = None;
    for (j, s) in b.states().iter().enumerate() {
        if let Some(&i) = seen.get(&state_key(s)?) {
            let cand = (i, j);
            best = Some(match best {
                None => cand,
                Some(cur) => {
                    if (cand.0 + cand.1, cand.0) < (cur.0 + cur.1, cur.0) {
                        cand
                    } else {
                        cur
                    }
                }
            });
        }
    }
    Ok(best)
}

/// First rotation r with z = w[r..] + w[..r], for equal-length cycles.
fn rotation_offset(w: &[DigitVector], z: &[DigitVector]) -> Option<usize> {
    if w.len() != z.len() || w.is_empty() {
        return None;
    }
    (0..w.len()).find(|&r| (0..w.len()).all(|i| w[(r + i) % w.len()] == z[i]))
}

fn contexts_shared(a: &ToricAfAlgebra, b: &ToricAfAlgebra) -> bool {
    let ca = a.theta().thetas().iter().find_map(|t| t.field_context());
    let cb = b.theta().thetas().iter().find_map(|t| t.field_context());
    match (ca, cb) {
        (Some(x), Some(y)) => x.same_root(y),
        (None, None) => true, // both purely rational
        _ => false,
    }
}

/// Degree of Q(theta) over Q when it is pinned by the representation:
/// rational values give 1; an irrational value in a prime-degree field
/// has exactly that degree. `None` when undecided.
fn known_degree(x: &ExactReal) -> Option<usize> {
    if x.as_rational().is_some() {
        return Some(1);
    }
    match x {
        ExactReal::NumberField { ctx, .. } => {
            let d = ctx.degree();
            if is_prime(d) {
                Some(d)
            } else {
                None
            }
        }
        _ => None,
    }
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

/// Rank over Q of the coordinate rows (Gaussian elimination).
fn rational_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][c].clone().recip();
        for x in rows[rank].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = rows[r][c].clone();
                for cc in 0..cols {
                    let sub = &rows[rank][cc] * &f;
                    rows[r][cc] -= sub;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// True when (1, theta) is provably Q-linearly independent, in which case
/// the expansion can never hit a rational dependence.
fn provably_infinite(alg: &ToricAfAlgebra) -> Result<bool> {
    let pl = lift(alg.theta(), &ExactReal::one())?;
    let mc = module_coords(&pl)?;
    Ok(rational_rank(mc.rows().to_vec()) == alg.rank())
}

fn require_exact(alg: &ToricAfAlgebra) -> Result<()> {
    if alg.theta().thetas().iter().any(|t| !t.is_exact()) {
        return Err(Error::InexactInput(
            "stable-isomorphism verdicts require exact theta".into(),
        ));
    }
    Ok(())
}

/// Verifies a (matrix, scale) witness: the scaled, basis-changed module of
/// (1, theta) must equal the module of (1, theta'), with every transformed
/// generator staying positive (which is k0-positivity of its class).
pub fn verify_witness(
    a: &ToricAfAlgebra,
    b: &ToricAfAlgebra,
    matrix: &BasisChange,
    scale: &ExactReal,
) -> Result<bool> {
    if a.rank() != b.rank() {
        return Err(Error::RankMismatch(a.rank(), b.rank()));
    }
    require_exact(a)?;
    require_exact(b)?;
    if scale.sign_exact()? <= 0 {
        return Err(Error::Domain("witness scale must be > 0".into()));
    }
    let pl_a = lift(a.theta(), &ExactReal::one())?.scale(scale)?;
    let transformed = match basis_change(&pl_a, matrix) {
        Ok(t) => t,
        Err(Error::LeftCone(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    let pl_b = lift(b.theta(), &ExactReal::one())?;
    module_equal(&transformed, &pl_b)
}

/// Stable-isomorphism verdict between two toric AF-algebras of equal rank.
pub fn stable_iso(
    a: &ToricAfAlgebra,
    b: &ToricAfAlgebra,
    options: &StableIsoOptions,
) -> Result<StableIsoVerdict> {
    if a.rank() != b.rank() {
        return Err(Error::RankMismatch(a.rank(), b.rank()));
    }
    require_exact(a)?;
    require_exact(b)?;

    if let Some((matrix, scale)) = &options.witness {
        if verify_witness(a, b, matrix, scale)? {
            return Ok(StableIsoVerdict::isomorphic(Witness::Module {
                matrix: matrix.matrix().clone(),
                scale: scale.clone(),
            }));
        }
    }

    if a.rank() == 2 {
        stable_iso_rank2(a, b, options)
    } else {
        stable_iso_higher(a, b, options)
    }
}

fn stable_iso_rank2(
    a: &ToricAfAlgebra,
    b: &ToricAfAlgebra,
    options: &StableIsoOptions,
) -> Result<StableIsoVerdict> {
    let rational_a = a.theta().thetas()[0].as_rational().is_some();
    let rational_b = b.theta().thetas()[0].as_rational().is_some();
    match (rational_a, rational_b) {
        (true, true) => {
            // both expansions terminate: the diagrams are finite with the
            // same number of simple summands, hence stably isomorphic
            // (empty tails coincide)
            let ea = jpa_expand(&a.theta().vector(), options.horizon)?;
            let eb = jpa_expand(&b.theta().vector(), options.horizon)?;
            if !(ea.terminated() && eb.terminated()) {
                return Ok(StableIsoVerdict::unknown());
            }
            Ok(StableIsoVerdict::isomorphic(Witness::TailOffsets {
                a: ea.digits().len(),
                b: eb.digits().len(),
            }))
        }
        (true, false) | (false, true) => {
            Ok(StableIsoVerdict::distinct("terminating-vs-infinite digits"))
        }
        (false, false) => {
            let (ea, pa) = jpa_expand_detecting(&a.theta().vector(), options.horizon)?;
            let (eb, pb) = jpa_expand_detecting(&b.theta().vector(), options.horizon)?;
            // exact complete-quotient coincidence proves tail equality
            if contexts_shared(a, b) {
                if let Some((i, j)) = state_coincidence(&ea, &eb)? {
                    return Ok(StableIsoVerdict::isomorphic(Witness::TailOffsets {
                        a: i,
                        b: j,
                    }));
                }
            }
            match (pa, pb) {
                (Some((preper_a, len_a)), Some((preper_b, len_b))) => {
                    let cycle_a = &ea.digits()[preper_a..preper_a + len_a];
                    let cycle_b = &eb.digits()[preper_b..preper_b + len_b];
                    match rotation_offset(cycle_a, cycle_b) {
                        Some(r) => Ok(StableIsoVerdict::isomorphic(Witness::TailOffsets {
                            a: preper_a + r,
                            b: preper_b,
                        })),
                        None => Ok(StableIsoVerdict::distinct(
                            "distinct periodic tails at rank 2",
                        )),
                    }
                }
                (Some(_), None) | (None, Some(_)) => {
                    // periodic means quadratic; a provably different field
                    // degree separates the tails
                    let da = known_degree(&a.theta().thetas()[0]);
                    let db = known_degree(&b.theta().thetas()[0]);
                    match (da, db) {
                        (Some(x), Some(y)) if x != y => Ok(StableIsoVerdict::distinct(
                            "periodic (quadratic) vs non-periodic field degree",
                        )),
                        _ => Ok(StableIsoVerdict::unknown()),
                    }
                }
                (None, None) => Ok(StableIsoVerdict::unknown()),
            }
        }
    }
}

fn stable_iso_higher(
    a: &ToricAfAlgebra,
    b: &ToricAfAlgebra,
    options: &StableIsoOptions,
) -> Result<StableIsoVerdict> {
    let ea = jpa_expand(&a.theta().vector(), options.horizon)?;
    let eb = jpa_expand(&b.theta().vector(), options.horizon)?;

    if ea.terminated() && eb.terminated() {
        // both algebras are finite-dimensional with the same number of
        // simple summands
        return Ok(StableIsoVerdict::isomorphic(Witness::TailOffsets {
            a: ea.digits().len(),
            b: eb.digits().len(),
        }));
    }

    if contexts_shared(a, b) {
        if let Some((i, j)) = state_coincidence(&ea, &eb)? {
            return Ok(StableIsoVerdict::isomorphic(Witness::TailOffsets { a: i, b: j }));
        }
    }

    // a finite digit list can never tail-match an infinite one, so the
    // window search only applies when both streams are truncated
    if !ea.terminated() && !eb.terminated() {
        if let Some((k, kp)) = tail_equivalent_with(
            ea.digits(),
            eb.digits(),
            options.horizon,
            TAIL_WITNESS_MIN_OVERLAP,
        ) {
            // the matched window witnesses diagram equivalence after
            // telescoping past (k, k') at the configured horizon
            return Ok(StableIsoVerdict::isomorphic(Witness::TailOffsets {
                a: k,
                b: kp,
            }));
        }
    }

    // Distinct needs incompatible digit structures and a failed module
    // search over every candidate scale.
    let incompatible = (ea.terminated() && provably_infinite(b)?)
        || (eb.terminated() && provably_infinite(a)?);
    if incompatible && contexts_shared(a, b) {
        let pl_a = lift(a.theta(), &ExactReal::one())?;
        let pl_b = lift(b.theta(), &ExactReal::one())?;
        let candidates = match &options.scale_candidates {
            Some(c) => c.clone(),
            None => {
                let mut all = Vec::new();
                for gb in pl_b.lambdas() {
                    for ga in pl_a.lambdas() {
                        all.push(gb.try_div(ga)?);
                    }
                }
                all
            }
        };
        if !candidates.is_empty() {
            let mut all_differ = true;
            for c in &candidates {
                if c.sign_exact()? <= 0 {
                    continue;
                }
                if module_equal(&pl_a.scale(c)?, &pl_b)? {
                    all_differ = false;
                    break;
                }
            }
            if all_differ {
                return Ok(StableIsoVerdict::distinct(
                    "terminating-vs-infinite digits; modules differ at all candidate scales",
                ));
            }
        }
    }

    Ok(StableIsoVerdict::unknown())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse::parse_exact_real, sqrt_context};
    use crate::lattice::ProjectivePseudoLattice;
    use num_bigint::BigInt;

    fn er(s: &str) -> ExactReal {
        parse_exact_real(s).unwrap()
    }

    fn alg1(theta: ExactReal) -> ToricAfAlgebra {
        ToricAfAlgebra::from_theta(
            ProjectivePseudoLattice::new(vec![theta]).unwrap(),
            64,
        )
        .unwrap()
    }

    fn dv(entries: &[i64]) -> DigitVector {
        DigitVector::from_ints(entries).unwrap()
    }

    fn sqrt2() -> ExactReal {
        ExactReal::generator(sqrt_context(2).unwrap())
    }

    // -- tail_equivalent ----------------------------------------------------

    #[test]
    fn identical_sequences_match_at_origin() {
        let a = vec![dv(&[1]), dv(&[2]), dv(&[3])];
        assert_eq!(tail_equivalent(&a, &a, 10), Some((0, 0)));
    }

    #[test]
    fn shifted_quadratic_tails() {
        // sqrt2+1 = [2;2,2,...] vs sqrt2 = [1;2,2,...] -> (0,1)
        let a: Vec<_> = std::iter::repeat(dv(&[2])).take(8).collect();
        let mut b = vec![dv(&[1])];
        b.extend(std::iter::repeat(dv(&[2])).take(7));
        assert_eq!(tail_equivalent(&a, &b, 10), Some((0, 1)));
    }

    #[test]
    fn all_ones_vs_all_twos_never_match() {
        let a = vec![dv(&[1]); 20];
        let b = vec![dv(&[2]); 20];
        assert_eq!(tail_equivalent(&a, &b, 100), None);
    }

    // -- rank-2 verdicts ------------------------------------------------------

    #[test]
    fn mobius_pair_isomorphic_with_tail_witness() {
        // sqrt2 - 1 = [0;2,2,...] and sqrt2 + 1 = [2;2,2,...]
        let t1 = sqrt2().try_sub(&ExactReal::one()).unwrap();
        let t2 = sqrt2().try_add(&ExactReal::one()).unwrap();
        let v = stable_iso(&alg1(t1), &alg1(t2), &StableIsoOptions::default()).unwrap();
        assert_eq!(v.outcome, Outcome::Isomorphic);
        match v.witness {
            Some(Witness::TailOffsets { .. }) => {}
            other => panic!("expected tail witness, got {other:?}"),
        }
    }

    #[test]
    fn phi_vs_sqrt2_distinct_periodic_tails() {
        let phi = er("nf:t^2-t-1@[1,2]:(0,1)");
        let v = stable_iso(&alg1(phi), &alg1(sqrt2()), &StableIsoOptions::default()).unwrap();
        assert_eq!(v.outcome, Outcome::Distinct);
        assert!(v.separating.unwrap().contains("periodic"));
    }

    #[test]
    fn rational_vs_irrational_distinct() {
        let v = stable_iso(&alg1(er("7/3")), &alg1(sqrt2()), &StableIsoOptions::default()).unwrap();
        assert_eq!(v.outcome, Outcome::Distinct);
        assert_eq!(
            v.separating.as_deref(),
            Some("terminating-vs-infinite digits")
        );
    }

    #[test]
    fn rationals_mutually_isomorphic() {
        let v = stable_iso(&alg1(er("7/3")), &alg1(er("5/2")), &StableIsoOptions::default()).unwrap();
        assert_eq!(v.outcome, Outcome::Isomorphic);
    }

    #[test]
    fn reflexivity_for_quadratic_and_rational() {
        for theta in [er("7/3"), sqrt2(), er("nf:t^2-t-1@[1,2]:(0,1)")] {
            let x = alg1(theta);
            let v = stable_iso(&x, &x, &StableIsoOptions::default()).unwrap();
            assert_eq!(v.outcome, Outcome::Isomorphic);
        }
    }

    #[test]
    fn reflexivity_for_cubic_theta_at_rank2() {
        // non-periodic CF; equality is caught by state coincidence
        let cbrt3 = er("nf:t^3-3@[1,2]:(0,1,0)");
        let x = alg1(cbrt3);
        let opts = StableIsoOptions {
            horizon: 40,
            ..Default::default()
        };
        let v = stable_iso(&x, &x, &opts).unwrap();
        assert_eq!(v.outcome, Outcome::Isomorphic);
    }

    #[test]
    fn quadratic_vs_cubic_distinct_by_degree() {
        let cbrt3 = er("nf:t^3-3@[1,2]:(0,1,0)");
        let opts = StableIsoOptions {
            horizon: 60,
            ..Default::default()
        };
        let v = stable_iso(&alg1(sqrt2()), &alg1(cbrt3), &opts).unwrap();
        assert_eq!(v.outcome, Outcome::Distinct);
    }

    #[test]
    fn different_quadratic_fields_distinct_by_cycles() {
        let sqrt3 = ExactReal::generator(crate::exact::sqrt_context(3).unwrap());
        let v = stable_iso(&alg1(sqrt2()), &alg1(sqrt3), &StableIsoOptions::default()).unwrap();
        assert_eq!(v.outcome, Outcome::Distinct);
    }

    #[test]
    fn rank_mismatch_rejected() {
        let ctx = crate::exact::cbrt_context(3).unwrap();
        let g = ExactReal::generator(ctx.clone());
        let g2 = g.try_mul(&g).unwrap();
        let rank3 = ToricAfAlgebra::from_theta(
            ProjectivePseudoLattice::new(vec![g, g2]).unwrap(),
            16,
        )
        .unwrap();
        assert!(matches!(
            stable_iso(&alg1(sqrt2()), &rank3, &StableIsoOptions::default()),
            Err(Error::RankMismatch(..))
        ));
    }

    #[test]
    fn float_theta_rejected_for_verdicts() {
        let f = ToricAfAlgebra::from_theta(
            ProjectivePseudoLattice::new(vec![ExactReal::float(1.5).unwrap()]).unwrap(),
            8,
        )
        .unwrap();
        assert!(matches!(
            stable_iso(&f, &f, &StableIsoOptions::default()),
            Err(Error::InexactInput(_))
        ));
    }

    // -- rank > 2 ---------------------------------------------------------------

    #[test]
    fn identical_cubic_triple_isomorphic() {
        let ctx = crate::exact::cbrt_context(3).unwrap();
        let g = ExactReal::generator(ctx.clone());
        let g2 = g.try_mul(&g).unwrap();
        let mk = || {
            ToricAfAlgebra::from_theta(
                ProjectivePseudoLattice::new(vec![g.clone(), g2.clone()]).unwrap(),
                32,
            )
            .unwrap()
        };
        let opts = StableIsoOptions {
            horizon: 32,
            ..Default::default()
        };
        let v = stable_iso(&mk(), &mk(), &opts).unwrap();
        assert_eq!(v.outcome, Outcome::Isomorphic);
    }

    #[test]
    fn inconclusive_higher_rank_is_unknown() {
        let ctx = crate::exact::cbrt_context(3).unwrap();
        let g = ExactReal::generator(ctx.clone());
        let g2 = g.try_mul(&g).unwrap();
        let x = ToricAfAlgebra::from_theta(
            ProjectivePseudoLattice::new(vec![g.clone(), g2.clone()]).unwrap(),
            24,
        )
        .unwrap();
        // rationally rescaled coordinates: same field, different orbit
        // (integer translates would share states after one step and be
        // correctly proven isomorphic)
        let y = ToricAfAlgebra::from_theta(
            ProjectivePseudoLattice::new(vec![
                g.scale_rational(&BigRational::new(BigInt::from(1), BigInt::from(2))),
                g2.scale_rational(&BigRational::new(BigInt::from(1), BigInt::from(3))),
            ])
            .unwrap(),
            24,
        )
        .unwrap();
        let opts = StableIsoOptions {
            horizon: 24,
            ..Default::default()
        };
        let v = stable_iso(&x, &y, &opts).unwrap();
        assert_eq!(v.outcome, Outcome::Unknown);
        assert!(v.witness.is_none());
        assert!(v.separating.is_none());
    }

    // -- verify_witness -----------------------------------------------------------

    #[test]
    fn identity_witness_on_equal_theta() {
        let x = alg1(sqrt2());
        let ok = verify_witness(
            &x,
            &alg1(sqrt2()),
            &BasisChange::identity(2),
            &ExactReal::one(),
        )
        .unwrap();
        assert!(ok);
    }

    #[test]
    fn shear_witness_maps_sqrt2_to_one_plus_sqrt2() {
        // theta = sqrt2, theta' = 1 + sqrt2: modules Z + sqrt2 Z coincide
        let a = alg1(sqrt2());
        let b = alg1(ExactReal::one().try_add(&sqrt2()).unwrap());
        let shear = BasisChange::new(
            IntMatrix::from_rows(vec![
                vec![BigInt::from(1), BigInt::from(1)],
                vec![BigInt::from(0), BigInt::from(1)],
            ])
            .unwrap(),
        )
        .unwrap();
        assert!(verify_witness(&a, &b, &shear, &ExactReal::one()).unwrap());
    }

    #[test]
    fn scaling_breaks_the_module_witness() {
        // theta' = 2*sqrt2 generates an index-2 submodule
        let a = alg1(sqrt2());
        let b = alg1(sqrt2().scale_rational(&BigRational::from_integer(BigInt::from(2))));
        assert!(!verify_witness(&a, &b, &BasisChange::identity(2), &ExactReal::one()).unwrap());
    }

    #[test]
    fn witness_option_short_circuits() {
        let a = alg1(sqrt2());
        let b = alg1(ExactReal::one().try_add(&sqrt2()).unwrap());
        let shear = BasisChange::new(
            IntMatrix::from_rows(vec![
                vec![BigInt::from(1), BigInt::from(1)],
                vec![BigInt::from(0), BigInt::from(1)],
            ])
            .unwrap(),
        )
        .unwrap();
        let opts = StableIsoOptions {
            witness: Some((shear, ExactReal::one())),
            ..Default::default()
        };
        let v = stable_iso(&a, &b, &opts).unwrap();
        assert_eq!(v.outcome, Outcome::Isomorphic);
        assert!(matches!(v.witness, Some(Witness::Module { .. })));
    }

    #[test]
    fn symmetry_of_decisive_outcomes() {
        let pairs = [
            (er("7/3"), er("5/2")),
            (er("7/3"), sqrt2()),
            (sqrt2(), er("nf:t^2-t-1@[1,2]:(0,1)")),
            (
                sqrt2().try_sub(&ExactReal::one()).unwrap(),
                sqrt2().try_add(&ExactReal::one()).unwrap(),
            ),
        ];
        for (x, y) in pairs {
            let ab = stable_iso(&alg1(x.clone()), &alg1(y.clone()), &StableIsoOptions::default())
                .unwrap();
            let ba = stable_iso(&alg1(y), &alg1(x), &StableIsoOptions::default()).unwrap();
            let contradictory = (ab.outcome == Outcome::Isomorphic
                && ba.outcome == Outcome::Distinct)
                || (ab.outcome == Outcome::Distinct && ba.outcome == Outcome::Isomorphic);
            assert!(!contradictory);
        }
    }
}
