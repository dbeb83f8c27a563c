//! Acceptance suite: every criterion runs at its stated tolerance and
//! prints one pass/fail line. Run with
//! `cargo test -p kummer5 --test acceptance -- --nocapture`.

mod common;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use kummer5::arith::is_prime_trial_division;
use kummer5::certify::{certify, validate_task, Outcome, TaskCheck};
use kummer5::field::{Field, WordField};
use kummer5::kummer::{is_on_kummer, kappa, projectively_equal};
use kummer5::genus2::Curve;
use kummer5::oracle::{
    enumerate_jacobian, indeterminate_fraction, verify_five_part_cyclic, verify_two_torsion,
    SeedSweep,
};
use kummer5::pipeline::{primes_found, scan, ScanOutcome};
use kummer5::sqrt5::reference_map_h2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "acceptance {criterion}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

/// Criterion 1: published row m = 1 over odd n in [3, 500) with the h = 3
/// pack and the h = 10 fallback; exact prime-set equality.
///
/// The published run retried n = 3 with the fallback pack. Here the first
/// pack already decides it: the annihilation index of the h = 3 seed at
/// lambda = 499 is exactly r = 5 = T_safe, which the threshold contract
/// (prime iff T_safe <= r <= 2n, gcds trivial) accepts. The fallback pack
/// must also prove n = 3 on its own, which is asserted separately.
#[test]
fn acceptance_1_row_m1() {
    let packs = common::table_packs();
    let rows = scan(
        1,
        3,
        500,
        &[packs.h3_m1.clone(), packs.h10_m1.clone()],
    )
    .unwrap();
    let primes: BTreeSet<u64> = primes_found(&rows).into_iter().collect();
    let expected: BTreeSet<u64> = [3u64, 9, 13, 15, 25, 39, 69, 165, 171, 209, 339]
        .into_iter()
        .collect();
    let n3 = rows.iter().find(|r| r.n == 3).unwrap();
    let n3_prime_with_threshold_hit = matches!(
        &n3.outcome,
        ScanOutcome::Decided { verdict, .. }
            if verdict.outcome == Outcome::Prime
                && verdict.r == verdict.t_safe
    );
    // the fallback pack alone also settles n = 3
    let t3 = match validate_task(1, 3).unwrap() {
        TaskCheck::Task(t) => t,
        _ => unreachable!(),
    };
    let v_fallback = certify(&t3, &packs.h10_m1.map, &packs.h10_m1.start.coords);
    println!(
        "note: n=3 decided by the first pack at r = T_safe exactly; the published \
         run's retry is reproducible only with a strict r > T_safe rule"
    );
    report(
        "1 (table row m=1)",
        primes == expected && n3_prime_with_threshold_hit
            && v_fallback.outcome == Outcome::Prime,
        &format!("primes {primes:?}; n=3 at the threshold: {n3_prime_with_threshold_hit}"),
    );
}

/// Criterion 2: rows m = 3, 7, 11; exact prime-set equality.
#[test]
fn acceptance_2_rows_m3_m7_m11() {
    let packs = common::table_packs();
    let r3 = scan(3, 3, 500, &[packs.h2_m3.clone()]).unwrap();
    let p3: BTreeSet<u64> = primes_found(&r3).into_iter().collect();
    let e3: BTreeSet<u64> = [7u64, 39].into_iter().collect();

    let r7 = scan(7, 5, 500, &[packs.hm31_m7.clone()]).unwrap();
    let p7: BTreeSet<u64> = primes_found(&r7).into_iter().collect();
    let e7: BTreeSet<u64> = [39u64, 53].into_iter().collect();

    let r11 = scan(11, 5, 500, &[packs.h10_m11.clone()]).unwrap();
    let p11: BTreeSet<u64> = primes_found(&r11).into_iter().collect();
    let e11: BTreeSet<u64> = [19u64, 55, 89, 91, 119, 123, 177, 225, 295]
        .into_iter()
        .collect();
    report(
        "2 (table rows m=3,7,11)",
        p3 == e3 && p7 == e7 && p11 == e11,
        &format!("m=3 {p3:?}; m=7 {p7:?}; m=11 {p11:?}"),
    );
}

/// Criterion 3: the synthesized h = 2 map equals the printed one as a map
/// on K: projective equality on >= 100 random Jacobian images over >= 5
/// primes p = 1 (mod 5); zero mismatches.
#[test]
fn acceptance_3_printed_map_agreement() {
    let map = common::pack(2, 3).map;
    let reference = reference_map_h2();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC3);
    let mut checked = 0usize;
    let mut mismatches = 0usize;
    for p in kummer5::arith::primes_one_mod_five(&BigInt::from(2), 5) {
        let field = WordField::new(p);
        let curve = Curve::new(field, field.from_bigint(&BigInt::from(2))).unwrap();
        for _ in 0..25 {
            let d = common::random_divisor(&curve, &mut rng);
            let src = kappa(&curve, &d);
            let a = map.eval_in_field(&field, &src.x);
            let b = reference.eval_in_field(&field, &src.x);
            if a.iter().all(|v| field.is_zero(v)) || !projectively_equal(&field, &a, &b) {
                mismatches += 1;
            }
            checked += 1;
        }
    }
    report(
        "3 (printed-map agreement on K)",
        checked >= 100 && mismatches == 0,
        &format!("{checked} evaluations over 5 primes, {mismatches} mismatches"),
    );
}

/// Criterion 4: start vectors: m = 1 exactly the 8-digit tuple; m = 2 the
/// printed 114-digit coordinates byte-for-byte; m = 3 between 578 and 580
/// digits.
#[test]
fn acceptance_4_start_vectors() {
    let sv1 = common::start_vector(2, 1);
    let ok1 = sv1.coords
        == [
            BigInt::from(2624400),
            BigInt::from(-3559904),
            BigInt::from(1744784),
            BigInt::from(4190401),
        ];

    let printed_m2: [&str; 4] = [
        "404639466968853040724837894653841687144570565354154879586235105531112025243056923459621450802999130059192965945600",
        "151745807268799064958389324832732916992098986356237799611186211315039106660124123347467785740933508167817531798016",
        "-519775702244808047789789255873896726222838826011524190361702788673015740605567989171463669584295088827451720640256",
        "770605931674056814506337558989036249244738836104752323662620042074686653408771113007590496528284727186389858585601",
    ];
    let sv2 = common::start_vector(2, 2);
    let ok2 = sv2
        .coords
        .iter()
        .zip(printed_m2.iter())
        .all(|(c, s)| c.to_string() == *s);
    let digits2: Vec<usize> = sv2
        .coords
        .iter()
        .map(|c| c.magnitude().to_string().len())
        .collect();

    let sv3 = common::start_vector(2, 3);
    let digits3: Vec<usize> = sv3
        .coords
        .iter()
        .map(|c| c.magnitude().to_string().len())
        .collect();
    let ok3 = digits3.iter().all(|&d| (578..=580).contains(&d));

    report(
        "4 (start-vector bit-exactness)",
        ok1 && ok2 && ok3,
        &format!("m=2 digit counts {digits2:?}, m=3 digit counts {digits3:?}"),
    );
}

/// Criterion 5: group structure at lambda = 499 (m = 1, n = 3, h = 3):
/// order 250000 = 16 * 5^6, exactly 3 involutions with the rational one at
/// (-3)^299 mod 499, 5-part cyclic with annihilator exponent 6, full group
/// congruent to (Z/500)^2.
#[test]
fn acceptance_5_group_structure_499() {
    let table = enumerate_jacobian(499, 3).unwrap();
    let order_ok = table.order() == 250_000;
    let tt = verify_two_torsion(&table);
    let alpha = BigInt::from(-3).mod_floor(&BigInt::from(499)).modpow(
        &BigInt::from(299),
        &BigInt::from(499),
    );
    let alpha_u64: u64 = alpha.to_string().parse().unwrap();
    let tt_ok = tt.involutions == 3
        && tt.rational_root == Some(alpha_u64)
        && tt.irreducible_quadratic == 2;
    let fp = verify_five_part_cyclic(&table, 1, 3).unwrap();
    let fp_ok = fp.five_part_order == 5usize.pow(6)
        && fp.generator_exponent == 6
        && fp.image_equals_five_part
        && fp.shape_matches;
    report(
        "5 (group-structure oracle at 499)",
        order_ok && tt_ok && fp_ok,
        &format!(
            "order {}, involutions {}, rational root {:?} (expected {alpha_u64}), five-part {} exp {}, shape {}",
            table.order(),
            tt.involutions,
            tt.rational_root,
            fp.five_part_order,
            fp.generator_exponent,
            fp.shape_matches
        ),
    );
}

/// Criterion 6: exhaustive seed sweep at lambda = 499: indeterminate
/// fraction bounded by 2/5^1.5, and the brute-force sets satisfy
/// #Y = (#X)^2 / 2 exactly.
#[test]
fn acceptance_6_seed_experiment_499() {
    let report6 = indeterminate_fraction(1, 3, SeedSweep::Exhaustive, Some(3)).unwrap();
    let x = report6.x_size.unwrap();
    let y = report6.y_size.unwrap();
    let y_ok = 2 * y == x * x;
    report(
        "6 (indeterminate fraction at 499)",
        report6.within_bound && y_ok && report6.x_bound_ok.unwrap(),
        &format!(
            "members {}/{} (bound 2/5^1.5 = 0.178885), #X = {x}, #Y = {y}",
            report6.member_seeds, report6.total_seeds
        ),
    );
}

/// Criterion 7: soundness battery over every valid task with
/// lambda < 10^6 (ground truth by trial division) across >= 3 seed packs:
/// never a wrong Prime/Composite; Unknown permitted. Prime verdicts sit in
/// T_safe <= r <= 2n.
#[test]
fn acceptance_7_soundness_battery() {
    let mut tasks = vec![];
    for m in 1..=8u64 {
        if m % 5 == 0 {
            continue;
        }
        for n in (1..=9u64).step_by(2) {
            match validate_task(m, n) {
                Ok(TaskCheck::Task(t)) if t.lambda < BigInt::from(1_000_000) => tasks.push(t),
                _ => {}
            }
        }
    }
    assert!(tasks.len() >= 12, "battery should cover the desk range");
    let mut runs = 0usize;
    let mut wrong = 0usize;
    let mut range_violations = 0usize;
    for task in &tasks {
        let truth = is_prime_trial_division(&task.lambda);
        for h in [3i64, 10, 2] {
            let pack = common::pack(h, task.m);
            let verdict = certify(task, &pack.map, &pack.start.coords);
            runs += 1;
            match &verdict.outcome {
                Outcome::Prime => {
                    if !truth {
                        wrong += 1;
                    }
                    if !(verdict.t_safe <= verdict.r && verdict.r <= 2 * task.n) {
                        range_violations += 1;
                    }
                }
                Outcome::Composite { factor } => {
                    if truth {
                        wrong += 1;
                    }
                    if let Some(f) = factor {
                        let valid = f > &BigInt::one()
                            && f < &task.lambda
                            && (&task.lambda % f).is_zero();
                        if !valid {
                            wrong += 1;
                        }
                    }
                }
                Outcome::Unknown { .. } => {}
            }
        }
    }
    report(
        "7 (soundness battery, lambda < 10^6)",
        wrong == 0 && range_violations == 0 && runs == 3 * tasks.len(),
        &format!(
            "{} tasks x 3 packs = {runs} runs, {wrong} wrong verdicts, {range_violations} r-range violations",
            tasks.len()
        ),
    );
}

/// Criterion 8: the property suites at their stated sample sizes.
#[test]
fn acceptance_8_property_suites() {
    let mut failures: Vec<String> = vec![];

    // Field axioms: >= 1000 random triples per context (delegated to the
    // same checks the unit suite runs; re-run compactly here).
    {
        use kummer5::field::{CyclotomicField, PrimeField, QuadExtField, Rationals};
        use num_rational::BigRational;
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(0xACC8);
        let mut rat = |rng: &mut ChaCha8Rng| {
            BigRational::new(
                BigInt::from(rng.gen_range(-50i64..=50)),
                BigInt::from(rng.gen_range(1i64..=20)),
            )
        };
        macro_rules! axioms {
            ($field:expr, $sample:expr, $name:literal) => {{
                let f = $field;
                for _ in 0..1000 {
                    let a = $sample(&mut rng);
                    let b = $sample(&mut rng);
                    let c = $sample(&mut rng);
                    let assoc = f.mul(&f.mul(&a, &b), &c) == f.mul(&a, &f.mul(&b, &c));
                    let dist = f.mul(&a, &f.add(&b, &c))
                        == f.add(&f.mul(&a, &b), &f.mul(&a, &c));
                    let inv_ok = f.is_zero(&a)
                        || f.mul(&a, &f.inv(&a).unwrap()) == f.one();
                    if !(assoc && dist && inv_ok) {
                        failures.push(format!("field axioms: {}", $name));
                        break;
                    }
                }
            }};
        }
        axioms!(Rationals, |r: &mut ChaCha8Rng| rat(r), "Q");
        axioms!(
            CyclotomicField,
            |r: &mut ChaCha8Rng| kummer5::field::Cyclo::new([
                rat(r), rat(r), rat(r), rat(r)
            ]),
            "Q(zeta)"
        );
        let fp = PrimeField::new(BigInt::from(1009));
        axioms!(fp.clone(), |r: &mut ChaCha8Rng| BigInt::from(
            r.gen_range(0u64..1009)
        ), "F_p");
        let fp2 = QuadExtField::new(BigInt::from(499));
        axioms!(fp2.clone(), |r: &mut ChaCha8Rng| kummer5::field::Fp2 {
            a: BigInt::from(r.gen_range(0u64..499)),
            b: BigInt::from(r.gen_range(0u64..499)),
        }, "F_p^2");
    }

    // Cantor group laws on >= 500 random triples over several primes.
    {
        let mut rng = ChaCha8Rng::seed_from_u64(0xACC9);
        let mut checked = 0;
        'outer: for p in [19u64, 29, 59, 1009, 2029] {
            let curve = Curve::new(WordField::new(p), 2u64).unwrap();
            for _ in 0..110 {
                let a = common::random_divisor(&curve, &mut rng);
                let b = common::random_divisor(&curve, &mut rng);
                let c = common::random_divisor(&curve, &mut rng);
                if curve.add(&a, &b) != curve.add(&b, &a)
                    || curve.add(&curve.add(&a, &b), &c) != curve.add(&a, &curve.add(&b, &c))
                    || curve.check_divisor(&curve.add(&a, &b)).is_err()
                {
                    failures.push(format!("Cantor laws at p={p}"));
                    break 'outer;
                }
                checked += 1;
            }
        }
        if checked < 500 {
            failures.push("Cantor law sample size".into());
        }
    }

    // Phi_5 relation, [sqrt5]^2 = [5], kappa(D) = kappa(-D), quartic
    // vanishing.
    {
        let mut rng = ChaCha8Rng::seed_from_u64(0xACCA);
        let mut quartic_checked = 0;
        for p in [31u64, 41, 61, 71, 101, 131, 151, 181, 191, 211] {
            let field = WordField::new(p);
            let curve = Curve::new(field, 3u64).unwrap();
            for _ in 0..100 {
                let d = common::random_divisor(&curve, &mut rng);
                // quartic vanishing + evenness
                let k = kappa(&curve, &d);
                if !is_on_kummer(&curve, &k) {
                    failures.push(format!("quartic vanishing at p={p}"));
                }
                let kneg = kappa(&curve, &curve.negate(&d));
                if !k.projectively_equal(&field, &kneg) {
                    failures.push(format!("kappa evenness at p={p}"));
                }
                quartic_checked += 1;
            }
            // zeta-dependent identities need p = 1 mod 5
            if p % 5 == 1 {
                for _ in 0..25 {
                    let d = common::random_divisor(&curve, &mut rng);
                    let mut acc = curve.identity();
                    for k in 0..5 {
                        acc = curve.add(&acc, &curve.zeta_action(&d, k).unwrap());
                    }
                    if !acc.is_identity() {
                        failures.push(format!("Phi_5 relation at p={p}"));
                    }
                    let s2 = curve.sqrt5(&curve.sqrt5(&d).unwrap()).unwrap();
                    if s2 != curve.scalar_mul_u64(&d, 5) {
                        failures.push(format!("[sqrt5]^2 = [5] at p={p}"));
                    }
                }
            }
        }
        if quartic_checked < 1000 {
            failures.push("quartic sample size".into());
        }
    }

    // Scaling invariance of the iteration predicates.
    {
        use kummer5::certify::{iterate_step, ReducedMap, ResidueVector};
        use rand::Rng;
        let map = reference_map_h2();
        let lambda = BigInt::from(4499);
        let reduced = ReducedMap::new(&map, &lambda);
        let mut rng = ChaCha8Rng::seed_from_u64(0xACCB);
        for _ in 0..100 {
            let v = ResidueVector {
                v: [
                    BigInt::from(rng.gen_range(0u64..4499)),
                    BigInt::from(rng.gen_range(0u64..4499)),
                    BigInt::from(rng.gen_range(0u64..4499)),
                    BigInt::from(rng.gen_range(0u64..4499)),
                ],
                lambda: lambda.clone(),
            };
            let c = loop {
                let c = BigInt::from(rng.gen_range(1u64..4499));
                if c.gcd(&lambda).is_one() {
                    break c;
                }
            };
            let scaled = ResidueVector {
                v: [
                    (&v.v[0] * &c).mod_floor(&lambda),
                    (&v.v[1] * &c).mod_floor(&lambda),
                    (&v.v[2] * &c).mod_floor(&lambda),
                    (&v.v[3] * &c).mod_floor(&lambda),
                ],
                lambda: lambda.clone(),
            };
            let s1 = iterate_step(&v, &reduced);
            let s2 = iterate_step(&scaled, &reduced);
            if s1.is_identity_pattern() != s2.is_identity_pattern() {
                failures.push("identity-pattern scaling invariance".into());
            }
            let gcds = |w: &ResidueVector| -> Vec<BigInt> {
                (0..3)
                    .map(|i| w.v[i].gcd(&lambda))
                    .filter(|d| *d > BigInt::one() && *d < lambda)
                    .collect()
            };
            if gcds(&s1) != gcds(&s2) {
                failures.push("gcd-set scaling invariance".into());
            }
        }
    }

    // Determinism of synthesis: the h = 3 pack rebuilt from scratch is
    // byte-identical to the cached artifact.
    {
        let cached = common::pack(3, 1);
        let (alpha, beta) = common::seed_for_h(3);
        let rebuilt = kummer5::pipeline::build_seed_pack(
            &BigInt::from(3),
            &alpha,
            &beta,
            1,
            &kummer5::sqrt5::SynthConfig::default(),
        )
        .unwrap();
        if kummer5::files::map_to_string(&rebuilt.map)
            != kummer5::files::map_to_string(&cached.map)
            || kummer5::files::start_to_string(&rebuilt.start)
                != kummer5::files::start_to_string(&cached.start)
        {
            failures.push("synthesis determinism".into());
        }
    }

    report(
        "8 (property suites)",
        failures.is_empty(),
        &format!("failures: {failures:?}"),
    );
}
