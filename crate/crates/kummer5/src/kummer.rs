//! The Kummer surface K = J/<±1> of y^2 = x^5 + h as a quartic in P^3:
//! the quotient map kappa in the quintic-model coordinates
//! (1 : x1+x2 : x1*x2 : b0), the defining quartic, and projective point
//! handling. kappa sends the identity to (0:0:0:1) and a degree-1 class
//! [(x,y) - inf] to (0 : 1 : x : x^2).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::field::{Cyclo, CyclotomicField, Field, Rationals};
use crate::genus2::{Curve, MumfordDivisor};

/// Projective 4-tuple on the Kummer quartic; coordinates not all zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct KummerPoint<F: Field> {
    pub x: [F::Elem; 4],
}

impl<F: Field> KummerPoint<F> {
    pub fn new(field: &F, x: [F::Elem; 4]) -> Self {
        assert!(
            x.iter().any(|c| !field.is_zero(c)),
            "projective point must have a nonzero coordinate"
        );
        KummerPoint { x }
    }

    /// Projective equality: x = c*y for some nonzero scalar c.
    pub fn projectively_equal(&self, field: &F, other: &Self) -> bool {
        projectively_equal(field, &self.x, &other.x)
    }
}

pub fn projectively_equal<F: Field>(field: &F, a: &[F::Elem; 4], b: &[F::Elem; 4]) -> bool {
    for i in 0..4 {
        for j in (i + 1)..4 {
            let lhs = field.mul(&a[i], &b[j]);
            let rhs = field.mul(&a[j], &b[i]);
            if lhs != rhs {
                return false;
            }
        }
    }
    // rule out pairing a nonzero point with zero patterns
    a.iter().zip(b.iter()).all(|(x, y)| field.is_zero(x) == field.is_zero(y))
}

/// Scale so the last nonzero coordinate is 1 (canonical form over a field;
/// used for hashing and fiber counting).
pub fn normalize_projective<F: Field>(field: &F, p: &KummerPoint<F>) -> KummerPoint<F> {
    let idx = (0..4)
        .rev()
        .find(|&i| !field.is_zero(&p.x[i]))
        .expect("nonzero point");
    let inv = field.inv(&p.x[idx]).expect("nonzero coordinate");
    KummerPoint {
        x: [
            field.mul(&p.x[0], &inv),
            field.mul(&p.x[1], &inv),
            field.mul(&p.x[2], &inv),
            field.mul(&p.x[3], &inv),
        ],
    }
}

/// kappa: J -> K in the quintic-model convention pinned by the start
/// vectors: identity -> (0:0:0:1), [(x,y) - inf] -> (0:1:x:x^2), and a
/// generic degree-2 class <X^2 - AX + B, v> to
/// (1 : A : B : (2h + A B^2 - 2 y1 y2) / (A^2 - 4B)),
/// with the tangent limit (1 : 2t : t^2 : (t^8 - 24 h t^3)/(4 y^2)) at
/// repeated support.
pub fn kappa<F: Field>(curve: &Curve<F>, d: &MumfordDivisor<F>) -> KummerPoint<F> {
    let f = curve.field();
    let h = curve.h();
    match d.degree() {
        0 => KummerPoint {
            x: [f.zero(), f.zero(), f.zero(), f.one()],
        },
        1 => {
            let x = f.neg(&d.u.coeff(f, 0));
            let x2 = f.mul(&x, &x);
            KummerPoint {
                x: [f.zero(), f.one(), x, x2],
            }
        }
        2 => {
            let a = f.neg(&d.u.coeff(f, 1));
            let b = d.u.coeff(f, 0);
            let v1 = d.v.coeff(f, 1);
            let v0 = d.v.coeff(f, 0);
            // y1*y2 = v(x1)*v(x2) as a symmetric function
            let y1y2 = f.add(
                &f.add(
                    &f.mul(&f.mul(&v1, &v1), &b),
                    &f.mul(&f.mul(&v1, &v0), &a),
                ),
                &f.mul(&v0, &v0),
            );
            let disc = f.sub(&f.mul(&a, &a), &f.mul(&f.from_i64(4), &b));
            let b0 = if !f.is_zero(&disc) {
                // (2h + A*B^2 - 2*y1y2) / disc
                let num = f.sub(
                    &f.add(
                        &f.mul(&f.from_i64(2), h),
                        &f.mul(&a, &f.mul(&b, &b)),
                    ),
                    &f.mul(&f.from_i64(2), &y1y2),
                );
                f.div(&num, &disc).expect("nonzero discriminant")
            } else {
                // repeated support at t = A/2 with y = v(t) != 0
                let t = f
                    .div(&a, &f.from_i64(2))
                    .expect("characteristic is odd");
                let y = d.v.eval(f, &t);
                let t3 = f.mul(&f.mul(&t, &t), &t);
                let t8 = f.mul(&f.mul(&t3, &t3), &f.mul(&t, &t));
                let num = f.sub(
                    &t8,
                    &f.mul(&f.from_i64(24), &f.mul(h, &t3)),
                );
                let den = f.mul(&f.from_i64(4), &f.mul(&y, &y));
                f.div(&num, &den)
                    .expect("doubled point has nonzero y on a squarefree quintic")
            };
            KummerPoint {
                x: [f.one(), a, b, b0],
            }
        }
        _ => unreachable!("reduced divisors have degree <= 2"),
    }
}

/// The defining quartic of K for y^2 = x^5 + h:
/// (x1^2 - 4 x0 x2) x3^2 - (4h x0^3 + 2 x1 x2^2) x3
///   + (x2^4 - 4h x0 x1^3 + 4h x0^2 x1 x2).
/// Returned as sparse (exponents, coefficient) terms of total degree 4.
pub fn kummer_quartic<F: Field>(curve: &Curve<F>) -> Vec<([u8; 4], F::Elem)> {
    let f = curve.field();
    let h = curve.h();
    let four_h = f.mul(&f.from_i64(4), h);
    vec![
        ([0, 2, 0, 2], f.one()),
        ([1, 0, 1, 2], f.from_i64(-4)),
        ([3, 0, 0, 1], f.neg(&four_h)),
        ([0, 1, 2, 1], f.from_i64(-2)),
        ([0, 0, 4, 0], f.one()),
        ([1, 3, 0, 0], f.neg(&four_h)),
        ([2, 1, 1, 0], four_h),
    ]
}

/// Evaluate the quartic at a point.
pub fn quartic_eval<F: Field>(curve: &Curve<F>, p: &KummerPoint<F>) -> F::Elem {
    let f = curve.field();
    let mut acc = f.zero();
    for (e, c) in kummer_quartic(curve) {
        let mut term = c;
        for (i, &exp) in e.iter().enumerate() {
            for _ in 0..exp {
                term = f.mul(&term, &p.x[i]);
            }
        }
        acc = f.add(&acc, &term);
    }
    acc
}

pub fn is_on_kummer<F: Field>(curve: &Curve<F>, p: &KummerPoint<F>) -> bool {
    curve.field().is_zero(&quartic_eval(curve, p))
}

/// Canonical coprime-integer coordinates over Q: clear denominators,
/// divide by the content, make the last nonzero coordinate positive.
pub fn canonical_integer_coords(p: &KummerPoint<Rationals>) -> [BigInt; 4] {
    let mut lcm = BigInt::one();
    for c in &p.x {
        lcm = lcm.lcm(c.denom());
    }
    let mut ints: Vec<BigInt> = p
        .x
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let mut content = BigInt::zero();
    for v in &ints {
        content = content.gcd(v);
    }
    if !content.is_zero() && !content.is_one() {
        for v in ints.iter_mut() {
            *v = &*v / &content;
        }
    }
    let last = ints
        .iter()
        .rev()
        .find(|v| !v.is_zero())
        .expect("nonzero point");
    if last.is_negative() {
        for v in ints.iter_mut() {
            *v = -&*v;
        }
    }
    [
        ints[0].clone(),
        ints[1].clone(),
        ints[2].clone(),
        ints[3].clone(),
    ]
}

/// kappa over Q followed by canonical integer normalization.
pub fn kappa_canonical_q(curve: &Curve<Rationals>, d: &MumfordDivisor<Rationals>) -> [BigInt; 4] {
    canonical_integer_coords(&kappa(curve, d))
}

/// Over Q(zeta): clear denominators across all 16 rational coordinates,
/// divide by the integer content, make the first nonzero component
/// positive. Deterministic representative used by the interpolation.
pub fn integral_cyclo_coords(p: &KummerPoint<CyclotomicField>) -> [Cyclo; 4] {
    let mut lcm = BigInt::one();
    for c in &p.x {
        for r in &c.c {
            lcm = lcm.lcm(r.denom());
        }
    }
    let mut flat: Vec<BigInt> = Vec::with_capacity(16);
    for c in &p.x {
        for r in &c.c {
            flat.push(r.numer() * (&lcm / r.denom()));
        }
    }
    let mut content = BigInt::zero();
    for v in &flat {
        content = content.gcd(v);
    }
    if content.is_zero() {
        content = BigInt::one();
    }
    let first = flat.iter().find(|v| !v.is_zero());
    if let Some(first) = first {
        if first.is_negative() {
            content = -content;
        }
    }
    let out: Vec<BigInt> = flat.iter().map(|v| v / &content).collect();
    let mk = |i: usize| {
        Cyclo::new([
            BigRational::from_integer(out[4 * i].clone()),
            BigRational::from_integer(out[4 * i + 1].clone()),
            BigRational::from_integer(out[4 * i + 2].clone()),
            BigRational::from_integer(out[4 * i + 3].clone()),
        ])
    };
    [mk(0), mk(1), mk(2), mk(3)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::WordField;
    use num_bigint::BigUint;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn curve_q(h: i64) -> Curve<Rationals> {
        Curve::new(Rationals, rat(h)).unwrap()
    }

    #[test]
    fn identity_maps_to_0001() {
        let c = curve_q(2);
        let k = kappa(&c, &c.identity());
        assert_eq!(k.x, [rat(0), rat(0), rat(0), rat(1)]);
        assert!(is_on_kummer(&c, &k));
    }

    #[test]
    fn printed_start_vector_m1() {
        // kappa(4 * [(-1,1) - inf]) on y^2 = x^5 + 2.
        let c = curve_q(2);
        let q0 = c.embed_point(&rat(-1), &rat(1)).unwrap();
        let p = c.scalar_mul(&q0, &BigUint::from(4u32));
        let coords = kappa_canonical_q(&c, &p);
        assert_eq!(
            coords,
            [
                BigInt::from(2624400),
                BigInt::from(-3559904),
                BigInt::from(1744784),
                BigInt::from(4190401),
            ]
        );
    }

    #[test]
    fn kappa_even_under_negation() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for p in [19u64, 29, 41] {
            let f = WordField::new(p);
            let c = Curve::new(f, 2u64).unwrap();
            for _ in 0..100 {
                let d = random_divisor(&c, &mut rng);
                let k1 = kappa(&c, &d);
                let k2 = kappa(&c, &c.negate(&d));
                assert!(k1.projectively_equal(&f, &k2));
            }
        }
    }

    fn random_divisor(
        c: &Curve<WordField>,
        rng: &mut ChaCha8Rng,
    ) -> MumfordDivisor<WordField> {
        let f = *c.field();
        let p = f.modulus();
        let choice = rng.gen_range(0u8..8);
        let mut point = || loop {
            let x = rng.gen_range(0..p);
            let fx = c.f().eval(&f, &x);
            if let Some(y) = f.sqrt(fx) {
                let y = if rng.gen_bool(0.5) { y } else { f.neg(&y) };
                return c.embed_point(&x, &y).unwrap();
            }
        };
        match choice {
            0 => c.identity(),
            1 => point(),
            _ => {
                let a = point();
                let b = point();
                c.add(&a, &b)
            }
        }
    }

    #[test]
    fn quartic_vanishes_on_images() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let mut count = 0;
        for p in [19u64, 29, 41, 59, 61, 79, 89, 101, 109, 151] {
            let f = WordField::new(p);
            let c = Curve::new(f, 3u64).unwrap();
            for _ in 0..100 {
                let d = random_divisor(&c, &mut rng);
                let k = kappa(&c, &d);
                assert!(is_on_kummer(&c, &k), "K(kappa(D)) != 0 at p={p}");
                count += 1;
            }
        }
        assert!(count >= 1000);
    }

    #[test]
    fn random_points_rarely_on_quartic() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let f = WordField::new(1009);
        let c = Curve::new(f, 2u64).unwrap();
        let mut off = 0;
        for _ in 0..200 {
            let pt = KummerPoint::new(
                &f,
                [
                    rng.gen_range(0..1009),
                    rng.gen_range(0..1009),
                    rng.gen_range(0..1009),
                    rng.gen_range(1..1009),
                ],
            );
            if !is_on_kummer(&c, &pt) {
                off += 1;
            }
        }
        assert!(off > 190);
    }

    #[test]
    fn node_1000_is_on_quartic_but_outside_f19_image() {
        // (1:0:0:0) satisfies the quartic identically; over F_19 with h = 2
        // it is not hit by kappa because 2 is a quadratic nonresidue mod 19
        // (it is the image of 2[(0, sqrt(h))] when sqrt(h) exists).
        let f = WordField::new(19);
        let c = Curve::new(f, 2u64).unwrap();
        let node = KummerPoint::new(&f, [1u64, 0, 0, 0]);
        assert!(is_on_kummer(&c, &node));
        assert!(f.sqrt(2).is_none());
        let all = enumerate_all_images(&c);
        assert!(!all.contains(&normalize_projective(&f, &node).x));
        // and over F_41, where 2 is a square, the node IS an image
        let f41 = WordField::new(41);
        let c41 = Curve::new(f41, 2u64).unwrap();
        let r = f41.sqrt(2).unwrap();
        let d = c41.double(&c41.embed_point(&0, &r).unwrap());
        let k = kappa(&c41, &d);
        assert!(k.projectively_equal(&f41, &KummerPoint::new(&f41, [1u64, 0, 0, 0])));
    }

    /// kappa images of every enumerated divisor class (brute force).
    fn enumerate_all_images(c: &Curve<WordField>) -> HashSet<[u64; 4]> {
        let f = *c.field();
        let mut images = HashSet::new();
        for d in &crate::oracle::enumerate_divisors(c) {
            images.insert(normalize_projective(&f, &kappa(c, d)).x);
        }
        images
    }

    #[test]
    fn fiber_structure_over_f19() {
        // #kappa-images = (#J + #J[2]) / 2 = (400 + 4)/2 = 202 for p = 19.
        let f = WordField::new(19);
        let c = Curve::new(f, 2u64).unwrap();
        let divisors = crate::oracle::enumerate_divisors(&c);
        assert_eq!(divisors.len(), 400);
        let mut images = HashSet::new();
        for d in &divisors {
            images.insert(normalize_projective(&f, &kappa(&c, d)).x);
        }
        assert_eq!(images.len(), 202);
    }

    #[test]
    fn canonical_normalization_is_coprime_and_sign_fixed() {
        let c = curve_q(2);
        let q0 = c.embed_point(&rat(-1), &rat(1)).unwrap();
        let mut d = q0.clone();
        for _ in 0..3 {
            d = c.add(&d, &q0);
            let coords = canonical_integer_coords(&kappa(&c, &d));
            let mut g = BigInt::zero();
            for v in &coords {
                g = g.gcd(v);
            }
            assert!(g.is_one());
            let last = coords.iter().rev().find(|v| !v.is_zero()).unwrap();
            assert!(last.is_positive());
        }
    }
}
