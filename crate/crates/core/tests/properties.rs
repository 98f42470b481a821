//! Property tests for the module invariants: field axioms and floor
//! bounds in the exact tier, reconstruction and scaling invariance of the
//! JPA, functoriality and module invariance of the basis-change action,
//! telescoping invariance, verdict reflexivity/symmetry, and sampler
//! determinism.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use toric_af::exact::{cbrt_context, sqrt_context, ExactReal, FieldContext};
use toric_af::json::{digits_from_json, digits_to_json, ExactRealDto};
use toric_af::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Small rational coordinate strategy.
fn coord() -> impl Strategy<Value = BigRational> {
    (-9i64..=9, 1i64..=6).prop_map(|(n, d)| q(n, d))
}

fn positive_coord() -> impl Strategy<Value = BigRational> {
    (0i64..=6, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

/// One of the two workhorse contexts.
fn context() -> impl Strategy<Value = Arc<FieldContext>> {
    prop_oneof![
        Just(sqrt_context(2).unwrap()),
        Just(sqrt_context(5).unwrap()),
        Just(cbrt_context(3).unwrap()),
    ]
}

fn element_in(ctx: &Arc<FieldContext>, coords: Vec<BigRational>) -> ExactReal {
    let mut c = coords;
    c.truncate(ctx.degree());
    while c.len() < ctx.degree() {
        c.push(BigRational::zero());
    }
    ExactReal::in_field(ctx.clone(), c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // -- exact tier -----------------------------------------------------

    #[test]
    fn floor_bounds_hold(ctx in context(), c0 in coord(), c1 in coord(), c2 in coord()) {
        let x = element_in(&ctx, vec![c0, c1, c2]);
        let f = x.floor_int().unwrap();
        let lo = ExactReal::from_bigint(f.clone());
        let hi = ExactReal::from_bigint(f + BigInt::from(1));
        prop_assert!(lo.cmp_exact(&x).unwrap() != std::cmp::Ordering::Greater);
        prop_assert!(x.cmp_exact(&hi).unwrap() == std::cmp::Ordering::Less);
    }

    #[test]
    fn field_axioms_exact(
        ctx in context(),
        a0 in coord(), a1 in coord(),
        b0 in coord(), b1 in coord(),
        c0 in coord(), c1 in coord(),
    ) {
        let a = element_in(&ctx, vec![a0, a1]);
        let b = element_in(&ctx, vec![b0, b1]);
        let c = element_in(&ctx, vec![c0, c1]);
        // associativity
        let add_l = a.try_add(&b).unwrap().try_add(&c).unwrap();
        let add_r = a.try_add(&b.try_add(&c).unwrap()).unwrap();
        prop_assert!(add_l.eq_exact(&add_r).unwrap());
        let mul_l = a.try_mul(&b).unwrap().try_mul(&c).unwrap();
        let mul_r = a.try_mul(&b.try_mul(&c).unwrap()).unwrap();
        prop_assert!(mul_l.eq_exact(&mul_r).unwrap());
        // distributivity
        let dist_l = a.try_mul(&b.try_add(&c).unwrap()).unwrap();
        let dist_r = a.try_mul(&b).unwrap().try_add(&a.try_mul(&c).unwrap()).unwrap();
        prop_assert!(dist_l.eq_exact(&dist_r).unwrap());
        // multiplicative inverse when nonzero
        if !a.is_zero_exact().unwrap() {
            let inv = ExactReal::one().try_div(&a).unwrap();
            prop_assert!(a.try_mul(&inv).unwrap().eq_exact(&ExactReal::one()).unwrap());
        }
    }

    #[test]
    fn refined_intervals_nest(ctx in context(), bits in 1u32..64) {
        let (lo1, hi1) = ctx.refined(bits).unwrap();
        let (lo2, hi2) = ctx.refined(bits * 2).unwrap();
        prop_assert!(lo2 >= lo1 && hi2 <= hi1);
        prop_assert!(hi2 - lo2 > BigRational::zero());
    }

    // -- cfrac -------------------------------------------------------------

    #[test]
    fn reconstruction_and_domination_rational(
        nums in prop::collection::vec((1i64..=60, 1i64..=20), 2..=5),
        steps in 1usize..=25,
    ) {
        let lambda: Vec<ExactReal> = nums
            .iter()
            .map(|&(n, d)| ExactReal::from_ratio(n, d).unwrap())
            .collect();
        let exp = jpa_expand(&lambda, steps).unwrap();
        let rank = lambda.len();
        let mut product = IntMatrix::identity(rank);
        for (k, digit) in exp.digits().iter().enumerate() {
            product = product.mul(&JpaMatrix::from_digit(digit.clone()).matrix()).unwrap();
            let state = &exp.states()[k + 1];
            // reconstruction
            for r in 0..rank {
                let mut acc = ExactReal::zero();
                for c in 0..rank {
                    acc = acc.try_add(&state[c].scale_int(product.get(r, c))).unwrap();
                }
                prop_assert!(acc.eq_exact(&lambda[r]).unwrap());
            }
            // remainder domination
            let last = state.last().unwrap();
            for x in &state[..rank - 1] {
                prop_assert!(x.sign_exact().unwrap() >= 0);
                prop_assert!(x.cmp_exact(last).unwrap() == std::cmp::Ordering::Less);
            }
        }
    }

    #[test]
    fn scaling_invariance(
        nums in prop::collection::vec((1i64..=40, 1i64..=12), 2..=4),
        c_num in 1i64..=15,
        c_den in 1i64..=15,
    ) {
        let lambda: Vec<ExactReal> = nums
            .iter()
            .map(|&(n, d)| ExactReal::from_ratio(n, d).unwrap())
            .collect();
        let c = ExactReal::from_ratio(c_num, c_den).unwrap();
        let scaled: Vec<ExactReal> = lambda.iter().map(|x| x.try_mul(&c).unwrap()).collect();
        let a = jpa_expand(&lambda, 20).unwrap();
        let b = jpa_expand(&scaled, 20).unwrap();
        prop_assert_eq!(a.digits(), b.digits());
        prop_assert_eq!(a.termination(), b.termination());
    }

    #[test]
    fn rank2_digits_agree_with_regular_cf(n in 1i64..=400, d in 1i64..=400) {
        let theta = ExactReal::from_ratio(n, d).unwrap();
        let cf = regular_cf(&theta, 40).unwrap();
        let exp = jpa_expand(&[ExactReal::one(), theta], 40).unwrap();
        let jd: Vec<BigInt> = exp.digits().iter().map(|x| x.entries()[0].clone()).collect();
        prop_assert_eq!(cf.digits, jd);
        prop_assert_eq!(cf.terminated, exp.terminated());
    }

    #[test]
    fn digit_matrices_unimodular(entries in prop::collection::vec(0i64..=1000, 1..=6)) {
        let digit = DigitVector::from_ints(&entries).unwrap();
        let m = JpaMatrix::from_digit(digit).matrix();
        prop_assert!(m.is_unimodular().unwrap());
    }

    #[test]
    fn detected_period_implies_digit_periodicity(
        d in 2i64..=30,
        p_num in 0i64..=6,
        den in 1i64..=4,
    ) {
        prop_assume!(![4, 9, 16, 25].contains(&d));
        let ctx = sqrt_context(d).unwrap();
        let theta = ExactReal::in_field(ctx, vec![q(p_num, den), q(1, den)]).unwrap();
        let (_, period) = jpa_expand_detecting(&[ExactReal::one(), theta.clone()], 5000).unwrap();
        let (p, l) = period.expect("quadratic CF must be eventually periodic");
        let long = jpa_expand(&[ExactReal::one(), theta], p + 3 * l + 5).unwrap();
        for k in p..long.digits().len() - l {
            prop_assert_eq!(&long.digits()[k], &long.digits()[k + l]);
        }
    }

    // -- lattice ----------------------------------------------------------

    #[test]
    fn module_invariance_and_functoriality(
        seed in 0u64..10_000,
        coords in prop::collection::vec((positive_coord(), positive_coord()), 2..=3),
    ) {
        prop_assume!(coords.iter().any(|(a, b)| !a.is_zero() || !b.is_zero()));
        let ctx = sqrt_context(2).unwrap();
        let lambdas: Vec<ExactReal> = coords
            .iter()
            .map(|(a, b)| {
                // keep entries strictly positive
                let c0 = a + q(1, 3);
                element_in(&ctx, vec![c0, b.clone()])
            })
            .collect();
        let pl = PseudoLattice::new(lambdas, None).unwrap();
        let n = pl.rank();
        let (a, b) = unimodular_pair(seed, n);
        let moved = basis_change(&pl, &a).unwrap();
        prop_assert!(module_equal(&pl, &moved).unwrap());
        let seq = basis_change(&moved, &b).unwrap();
        let prod = basis_change(&pl, &a.compose(&b).unwrap()).unwrap();
        for (x, y) in seq.lambdas().iter().zip(prod.lambdas()) {
            prop_assert!(x.eq_exact(y).unwrap());
        }
    }

    #[test]
    fn kernel_property(
        t0 in positive_coord(),
        t1 in positive_coord(),
        s_num in 1i64..=9,
        s_den in 1i64..=9,
    ) {
        let ctx = sqrt_context(3).unwrap();
        let theta = element_in(&ctx, vec![t0 + q(1, 5), t1]);
        let ppl = ProjectivePseudoLattice::new(vec![theta]).unwrap();
        let scale = ExactReal::from_ratio(s_num, s_den).unwrap();
        let (back, s) = projectivize(&lift(&ppl, &scale).unwrap()).unwrap();
        prop_assert!(back.eq_exact(&ppl).unwrap());
        prop_assert!(s.eq_exact(&scale).unwrap());
    }

    #[test]
    fn module_equal_is_equivalence(seed in 0u64..10_000) {
        let ctx = sqrt_context(2).unwrap();
        let base = PseudoLattice::new(
            vec![ExactReal::one(), ExactReal::generator(ctx)],
            None,
        ).unwrap();
        let (u1, u2) = unimodular_pair(seed, 2);
        let b = basis_change(&base, &u1).unwrap();
        let c = basis_change(&b, &u2).unwrap();
        // reflexive
        prop_assert!(module_equal(&base, &base).unwrap());
        // symmetric
        prop_assert_eq!(module_equal(&base, &b).unwrap(), module_equal(&b, &base).unwrap());
        // transitive on the related triple
        prop_assert!(module_equal(&base, &b).unwrap());
        prop_assert!(module_equal(&b, &c).unwrap());
        prop_assert!(module_equal(&base, &c).unwrap());
    }

    #[test]
    fn hnf_idempotent_and_span_invariant(
        rows in prop::collection::vec(prop::collection::vec(-20i64..=20, 3), 1..=4),
        seed in 0u64..10_000,
    ) {
        let m = IntMatrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        ).unwrap();
        let h = hnf(&m);
        prop_assert_eq!(hnf(&h), h.clone());
        // left-multiplying by a unimodular matrix preserves the row span
        let n = m.n_rows();
        if n >= 2 {
            let (u, _) = unimodular_pair(seed, n);
            let um = u.matrix().mul(&m).unwrap();
            prop_assert_eq!(hnf(&um), h);
        }
    }

    // -- bratteli -----------------------------------------------------------

    #[test]
    fn diagram_digit_duality(
        raw in prop::collection::vec(prop::collection::vec(0i64..=9, 2), 1..=6),
    ) {
        let digits: Vec<DigitVector> = raw.iter().map(|d| DigitVector::from_ints(d).unwrap()).collect();
        let diagram = build_toric_af(&digits, digits.len()).unwrap();
        prop_assert_eq!(diagram.digits().unwrap(), digits);
        for m in diagram.matrices() {
            prop_assert!(m.is_unimodular().unwrap());
        }
    }

    #[test]
    fn telescoping_preserves_dimensions(
        raw in prop::collection::vec(prop::collection::vec(0i64..=5, 2), 3..=8),
        cut_mask in 0u32..,
    ) {
        let digits: Vec<DigitVector> = raw.iter().map(|d| DigitVector::from_ints(d).unwrap()).collect();
        let diagram = build_toric_af(&digits, digits.len()).unwrap();
        let levels = diagram.num_levels();
        let mut cuts: Vec<usize> = (1..=levels).filter(|i| cut_mask >> (i % 30) & 1 == 1).collect();
        if cuts.len() < 2 {
            cuts = vec![1, levels];
        }
        let dims = level_dimensions(&diagram);
        let tel = telescope(&diagram, &cuts).unwrap();
        let tdims = level_dimensions(&tel);
        for (i, &c) in cuts.iter().enumerate() {
            prop_assert_eq!(&tdims[i], &dims[c - 1]);
        }
    }

    #[test]
    fn fibonacci_recurrence(depth in 2usize..=12) {
        let digits = vec![DigitVector::from_ints(&[1]).unwrap(); depth];
        let diagram = build_toric_af(&digits, depth).unwrap();
        let dims = level_dimensions(&diagram);
        let sums: Vec<BigInt> = dims.iter().map(|v| v.iter().sum()).collect();
        for k in 2..sums.len() {
            prop_assert_eq!(sums[k].clone(), &sums[k - 1] + &sums[k - 2]);
        }
    }

    // -- afstable -------------------------------------------------------------

    #[test]
    fn stable_iso_reflexive(d in 2i64..=20, p_num in 0i64..=5, den in 1i64..=3) {
        prop_assume!(![4, 9, 16].contains(&d));
        let ctx = sqrt_context(d).unwrap();
        let theta = ExactReal::in_field(ctx, vec![q(p_num, den), q(1, den)]).unwrap();
        let alg = ToricAfAlgebra::from_theta(
            ProjectivePseudoLattice::new(vec![theta]).unwrap(),
            48,
        ).unwrap();
        let v = stable_iso(&alg, &alg, &StableIsoOptions::default()).unwrap();
        prop_assert_eq!(v.outcome, Outcome::Isomorphic);
        prop_assert!(v.witness.is_some());
    }

    #[test]
    fn stable_iso_symmetric_outcomes(
        d1 in 2i64..=12,
        d2 in 2i64..=12,
        n1 in 1i64..=30,
        n2 in 1i64..=30,
        rational1 in proptest::bool::ANY,
        rational2 in proptest::bool::ANY,
    ) {
        prop_assume!(![4, 9].contains(&d1) && ![4, 9].contains(&d2));
        let mk = |rational: bool, d: i64, n: i64| {
            let theta = if rational {
                ExactReal::from_ratio(n, 7).unwrap()
            } else {
                let ctx = sqrt_context(d).unwrap();
                ExactReal::in_field(ctx, vec![q(n, 6), q(1, 2)]).unwrap()
            };
            ToricAfAlgebra::from_theta(
                ProjectivePseudoLattice::new(vec![theta]).unwrap(),
                48,
            ).unwrap()
        };
        let a = mk(rational1, d1, n1);
        let b = mk(rational2, d2, n2);
        let ab = stable_iso(&a, &b, &StableIsoOptions::default()).unwrap();
        let ba = stable_iso(&b, &a, &StableIsoOptions::default()).unwrap();
        let contradiction = (ab.outcome == Outcome::Isomorphic && ba.outcome == Outcome::Distinct)
            || (ab.outcome == Outcome::Distinct && ba.outcome == Outcome::Isomorphic);
        prop_assert!(!contradiction);
    }

    // -- sampler ------------------------------------------------------------------

    #[test]
    fn sampler_deterministic(seed in 0u64.., rank in 2usize..=4) {
        let params = GenericityParams {
            rank,
            trials: 40,
            steps: 20,
            tol: 1e-6,
            seed,
            workers: 1,
        };
        let a = sample_genericity(&params).unwrap();
        let b = sample_genericity(&params).unwrap();
        prop_assert_eq!(a.clone(), b);
        let parallel = sample_genericity(&GenericityParams { workers: 3, ..params }).unwrap();
        prop_assert_eq!(a, parallel);
    }

    // -- json -----------------------------------------------------------------------

    #[test]
    fn exact_real_json_roundtrip(ctx in context(), c0 in coord(), c1 in coord()) {
        let x = element_in(&ctx, vec![c0, c1]);
        let dto = ExactRealDto::from(&x);
        let text = serde_json::to_string(&dto).unwrap();
        let back: ExactRealDto = serde_json::from_str(&text).unwrap();
        let y = ExactReal::try_from(&back).unwrap();
        prop_assert!(x.eq_exact(&y).unwrap());
    }

    #[test]
    fn digits_json_roundtrip(raw in prop::collection::vec(prop::collection::vec(0i64..=1_000_000, 1..=5), 0..=6)) {
        prop_assume!(raw.iter().all(|d| !d.is_empty()));
        let digits: Vec<DigitVector> = raw.iter().map(|d| DigitVector::from_ints(d).unwrap()).collect();
        let js = digits_to_json(&digits);
        let text = serde_json::to_string(&js).unwrap();
        let parsed: Vec<Vec<String>> = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(digits_from_json(&parsed).unwrap(), digits);
    }
}

/// Deterministic pair of positivity-preserving unimodular matrices.
fn unimodular_pair(seed: u64, n: usize) -> (BasisChange, BasisChange) {
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut make = |rng: &mut rand_chacha::ChaCha8Rng| {
        let mut m = IntMatrix::identity(n);
        for _ in 0..3 {
            let i = (rng.next_u64() % n as u64) as usize;
            let mut j = (rng.next_u64() % n as u64) as usize;
            if i == j {
                j = (j + 1) % n;
            }
            let mut e = IntMatrix::identity(n);
            e.set(i, j, BigInt::from(1 + (rng.next_u64() % 2) as i64));
            m = m.mul(&e).unwrap();
        }
        BasisChange::new(m).unwrap()
    };
    (make(&mut rng), make(&mut rng))
}
