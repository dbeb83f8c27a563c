//! Desk-scale ground truth: exhaustive enumeration of J(F_p) for small p,
//! structural checks (group order, 2-torsion, the cyclic Z[sqrt5]-module
//! structure of the 5-part), and the indeterminate-seed experiment with
//! its X / Y set counts.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{is_prime_trial_division, is_prime_u64};
use crate::certify::{lambda_value, safe_threshold};
use crate::field::{Field, WordField, WordFp2, WordQuadExt};
use crate::genus2::{Curve, CurveError, MumfordDivisor};
use crate::poly::Poly;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("p = {0} must be an odd prime not dividing 10h")]
    BadPrime(u64),
    #[error("p = {p} exceeds the exhaustive ceiling {ceiling} (set {env} to raise it)")]
    CeilingExceeded { p: u64, ceiling: u64, env: &'static str },
    #[error("lambda = {0} is composite; the experiment assumes a prime")]
    CompositeLambda(BigInt),
    #[error("lambda = {0} <= 100 is below the theorem's range")]
    LambdaTooSmall(BigInt),
    #[error("the five-part analysis needs n > 1")]
    NeedsLargerN,
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Task(#[from] crate::certify::TaskError),
}

/// Environment variable bounding exhaustive sweeps and enumerations.
pub const EXHAUSTIVE_CEILING_ENV: &str = "KUMMER5_EXHAUSTIVE_CEILING";
pub const DEFAULT_EXHAUSTIVE_CEILING: u64 = 2000;

pub fn exhaustive_ceiling() -> u64 {
    std::env::var(EXHAUSTIVE_CEILING_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_EXHAUSTIVE_CEILING)
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

type Key = (u8, u64, u64, u64, u64);

fn divisor_key(d: &MumfordDivisor<WordField>) -> Key {
    let f = WordField::new(3); // only used for coeff(); modulus irrelevant
    let deg = d.degree() as u8;
    (
        deg,
        d.u.coeff(&f, 1),
        d.u.coeff(&f, 0),
        d.v.coeff(&f, 1),
        d.v.coeff(&f, 0),
    )
}

/// Exhaustively enumerated J(F_p) with an index for membership queries.
pub struct GroupTable {
    pub p: u64,
    pub h: i64,
    pub curve: Curve<WordField>,
    pub elements: Vec<MumfordDivisor<WordField>>,
    index: HashMap<Key, u32>,
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn position(&self, d: &MumfordDivisor<WordField>) -> Option<usize> {
        self.index.get(&divisor_key(d)).map(|&i| i as usize)
    }

    pub fn contains(&self, d: &MumfordDivisor<WordField>) -> bool {
        self.position(d).is_some()
    }
}

/// All reduced divisor classes over F_p, by support type: the identity,
/// degree-1 classes, and degree-2 classes with split, repeated or
/// conjugate support.
pub fn enumerate_divisors(curve: &Curve<WordField>) -> Vec<MumfordDivisor<WordField>> {
    let f = *curve.field();
    let p = f.modulus();
    let mut out = vec![curve.identity()];
    let fx_at = |x: u64| curve.f().eval(&f, &x);
    // degree 1
    for x in 0..p {
        let fx = fx_at(x);
        if fx == 0 {
            out.push(curve.embed_point(&x, &0).unwrap());
        } else if let Some(y) = f.sqrt(fx) {
            out.push(curve.embed_point(&x, &y).unwrap());
            out.push(curve.embed_point(&x, &f.neg(&y)).unwrap());
        }
    }
    // degree 2, by monic u = X^2 + u1 X + u0
    let ext = WordQuadExt::new(p);
    let inv2 = f.inv(&2).unwrap();
    let rows: Vec<Vec<MumfordDivisor<WordField>>> = (0..p)
        .into_par_iter()
        .map(|u1| {
            let mut row = Vec::new();
            for u0 in 0..p {
                let disc = f.sub(&f.mul(&u1, &u1), &f.mul(&4, &u0));
                if disc == 0 {
                    // repeated support at t = -u1/2
                    let t = f.mul(&f.neg(&u1), &inv2);
                    let ft = fx_at(t);
                    if ft == 0 {
                        continue; // would need a repeated root of f
                    }
                    if let Some(y) = f.sqrt(ft) {
                        for yy in [y, f.neg(&y)] {
                            let fp = f.mul(&5, &f.pow_u64(&t, 4));
                            let slope = f.div(&fp, &f.mul(&2, &yy)).unwrap();
                            let v = Poly::new(
                                &f,
                                vec![f.sub(&yy, &f.mul(&slope, &t)), slope],
                            );
                            let u =
                                Poly::new(&f, vec![u0, u1, 1]);
                            row.push(MumfordDivisor { u, v });
                        }
                    }
                } else if let Some(sq) = f.sqrt(disc) {
                    // split support a != b
                    let a = f.mul(&f.add(&f.neg(&u1), &sq), &inv2);
                    let b = f.mul(&f.sub(&f.neg(&u1), &sq), &inv2);
                    let (fa, fb) = (fx_at(a), fx_at(b));
                    let ya = if fa == 0 { Some(0) } else { f.sqrt(fa) };
                    let yb = if fb == 0 { Some(0) } else { f.sqrt(fb) };
                    let (Some(ya), Some(yb)) = (ya, yb) else {
                        continue;
                    };
                    if fa == 0 && fb == 0 {
                        continue; // two rational Weierstrass points cannot both exist
                    }
                    let yas: &[u64] = if ya == 0 { &[0] } else { &[ya, p - ya] };
                    let ybs: &[u64] = if yb == 0 { &[0] } else { &[yb, p - yb] };
                    for &sa in yas {
                        for &sb in ybs {
                            // v interpolates (a, sa), (b, sb)
                            let denom = f.inv(&f.sub(&a, &b)).unwrap();
                            let v1 = f.mul(&f.sub(&sa, &sb), &denom);
                            let v0 = f.mul(
                                &f.sub(&f.mul(&a, &sb), &f.mul(&b, &sa)),
                                &denom,
                            );
                            let u = Poly::new(&f, vec![u0, u1, 1]);
                            let v = Poly::new(&f, vec![v0, v1]);
                            row.push(MumfordDivisor { u, v });
                        }
                    }
                } else {
                    // irreducible u: conjugate points over F_p^2
                    // root a = (-u1 + s)/2 with s^2 = disc; use s = c*t with
                    // t^2 = q and c = sqrt(disc/q) in F_p.
                    let q = ext.nonresidue();
                    let c = f
                        .sqrt(f.div(&disc, &q).unwrap())
                        .expect("disc/q is a residue when disc is not");
                    let s = WordFp2 { a: 0, b: c };
                    let a2 = ext.mul(
                        &ext.add(&ext.embed_base(f.neg(&u1)), &s),
                        &ext.embed_base(inv2),
                    );
                    // f(a) in F_p^2
                    let mut fa = ext.embed_base(curve.h().clone());
                    let a5 = ext.pow_u64(&a2, 5);
                    fa = ext.add(&fa, &a5);
                    if ext.is_zero(&fa) {
                        // conjugate pair of Weierstrass points: 2-torsion
                        let u = Poly::new(&f, vec![u0, u1, 1]);
                        row.push(MumfordDivisor { u, v: Poly::zero() });
                        continue;
                    }
                    if let Some(y) = ext.sqrt(&fa) {
                        for yy in [y, ext.neg(&y)] {
                            // v(X) = 2*f X + (e + u1*f) for y = e + f*t... here
                            // y = e + d*t with a = (-u1)/2 + (c/2) t:
                            // v1 * (c/2) = d  => v1 = 2 d / c
                            // v0 = e - v1 * (-u1/2) = e + v1*u1/2
                            let e = yy.a;
                            let d = yy.b;
                            let v1 = f.div(&f.mul(&2, &d), &c).unwrap();
                            let v0 = f.add(
                                &e,
                                &f.mul(&f.mul(&v1, &u1), &inv2),
                            );
                            let u = Poly::new(&f, vec![u0, u1, 1]);
                            let v = Poly::new(&f, vec![v0, v1]);
                            row.push(MumfordDivisor { u, v });
                        }
                    }
                }
            }
            row
        })
        .collect();
    for row in rows {
        out.extend(row);
    }
    out
}

/// Enumerate J(F_p) and index it; refuses p | 10h and p beyond the ceiling.
pub fn enumerate_jacobian(p: u64, h: i64) -> Result<GroupTable, OracleError> {
    let ceiling = exhaustive_ceiling();
    if p > ceiling {
        return Err(OracleError::CeilingExceeded {
            p,
            ceiling,
            env: EXHAUSTIVE_CEILING_ENV,
        });
    }
    if !is_prime_u64(p) || p == 2 || p == 5 || BigInt::from(h).mod_floor(&BigInt::from(p)).is_zero()
    {
        return Err(OracleError::BadPrime(p));
    }
    let field = WordField::new(p);
    let curve = Curve::new(field, field.from_bigint(&BigInt::from(h)))?;
    let elements = enumerate_divisors(&curve);
    let mut index = HashMap::with_capacity(elements.len());
    for (i, d) in elements.iter().enumerate() {
        let prev = index.insert(divisor_key(d), i as u32);
        assert!(prev.is_none(), "duplicate divisor in enumeration");
    }
    let table = GroupTable {
        p,
        h,
        curve,
        elements,
        index,
    };
    // spot-check closure under the group law
    let mut rng = ChaCha8Rng::seed_from_u64(p);
    let sample = if table.order() <= 500 {
        table.order()
    } else {
        2000
    };
    for _ in 0..sample {
        let a = &table.elements[rng.gen_range(0..table.order())];
        let b = &table.elements[rng.gen_range(0..table.order())];
        let s = table.curve.add(a, b);
        assert!(
            table.contains(&s),
            "table not closed under addition at p = {p}"
        );
    }
    Ok(table)
}

// ---------------------------------------------------------------------------
// Structure reports
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct TwoTorsionReport {
    /// elements of order exactly 2
    pub involutions: usize,
    /// the x-coordinate of the rational Weierstrass point, if a degree-1
    /// involution exists
    pub rational_root: Option<u64>,
    /// involutions with irreducible quadratic u
    pub irreducible_quadratic: usize,
}

/// The 2-torsion from an enumerated table: v = 0 classes.
pub fn verify_two_torsion(table: &GroupTable) -> TwoTorsionReport {
    let f = *table.curve.field();
    let mut involutions = 0;
    let mut rational_root = None;
    let mut irreducible_quadratic = 0;
    for d in &table.elements {
        if d.is_identity() || !d.v.is_zero() {
            continue;
        }
        involutions += 1;
        match d.degree() {
            1 => {
                rational_root = Some(f.neg(&d.u.coeff(&f, 0)));
            }
            2 => {
                let u1 = d.u.coeff(&f, 1);
                let u0 = d.u.coeff(&f, 0);
                let disc = f.sub(&f.mul(&u1, &u1), &f.mul(&4, &u0));
                if f.sqrt(disc).is_none() {
                    irreducible_quadratic += 1;
                }
            }
            _ => {}
        }
    }
    TwoTorsionReport {
        involutions,
        rational_root,
        irreducible_quadratic,
    }
}

/// Lift a base-field divisor into F_p^2 coordinates.
pub fn lift_divisor(
    ext: &WordQuadExt,
    d: &MumfordDivisor<WordField>,
) -> MumfordDivisor<WordQuadExt> {
    let lift = |poly: &Poly<WordField>| {
        Poly::new(
            ext,
            poly.coeffs().iter().map(|&c| ext.embed_base(c)).collect(),
        )
    };
    MumfordDivisor {
        u: lift(&d.u),
        v: lift(&d.v),
    }
}

/// Project back to the base field; `None` when any coefficient has a
/// nonzero t-component.
pub fn project_divisor(
    ext: &WordQuadExt,
    field: &WordField,
    d: &MumfordDivisor<WordQuadExt>,
) -> Option<MumfordDivisor<WordField>> {
    let project = |poly: &Poly<WordQuadExt>| -> Option<Poly<WordField>> {
        let mut coeffs = Vec::with_capacity(poly.coeffs().len());
        for c in poly.coeffs() {
            coeffs.push(ext.project_base(c)?);
        }
        Some(Poly::new(field, coeffs))
    };
    Some(MumfordDivisor {
        u: project(&d.u)?,
        v: project(&d.v)?,
    })
}

/// Apply [sqrt5] to a base-field divisor through the quadratic extension,
/// asserting the result is rational.
pub fn sqrt5_via_extension(
    curve: &Curve<WordField>,
    ext_curve: &Curve<WordQuadExt>,
    d: &MumfordDivisor<WordField>,
) -> MumfordDivisor<WordField> {
    let ext = ext_curve.field();
    let lifted = lift_divisor(ext, d);
    let image = ext_curve.sqrt5(&lifted).expect("zeta exists in F_p^2");
    project_divisor(ext, curve.field(), &image)
        .expect("[sqrt5] of a rational divisor is rational")
}

#[derive(Clone, Debug)]
pub struct FivePartReport {
    pub five_part_order: usize,
    /// annihilation exponent of the found generator under [sqrt5]
    pub generator_exponent: u64,
    /// true when 4m^2 * J equals the 5-primary part
    pub image_equals_five_part: bool,
    /// order histogram matches (Z/4m^2 5^n)^2
    pub shape_matches: bool,
}

/// Check the 5-primary structure of J(F_lambda) for lambda = 4 m^2 5^n - 1
/// prime, n > 1: 4m^2*J has order 5^(2n), is [sqrt5]-cyclic with a
/// generator killed in exactly 2n steps, and the full group has the
/// order profile of (Z/4m^2 5^n)^2.
pub fn verify_five_part_cyclic(
    table: &GroupTable,
    m: u64,
    n: u64,
) -> Result<FivePartReport, OracleError> {
    if n <= 1 {
        return Err(OracleError::NeedsLargerN);
    }
    let lambda = lambda_value(m, n);
    assert_eq!(
        lambda,
        BigInt::from(table.p),
        "table prime must be the task lambda"
    );
    let curve = &table.curve;
    let four_m2 = 4 * m * m;
    // 4m^2 * J, deduplicated
    let five_part: Vec<MumfordDivisor<WordField>> = {
        let imgs: Vec<MumfordDivisor<WordField>> = table
            .elements
            .par_iter()
            .map(|d| curve.scalar_mul_u64(d, four_m2))
            .collect();
        let mut seen = HashMap::new();
        let mut out = Vec::new();
        for d in imgs {
            if seen.insert(divisor_key(&d), ()).is_none() {
                out.push(d);
            }
        }
        out
    };
    let expected = 5usize.pow(2 * n as u32);
    let five_part_order = five_part.len();
    // every element killed by 5^n (sampled)
    let five_n = 5u64.pow(n as u32);
    let mut rng = ChaCha8Rng::seed_from_u64(0xF1FE);
    for _ in 0..50.min(five_part.len()) {
        let d = &five_part[rng.gen_range(0..five_part.len())];
        assert!(curve.scalar_mul_u64(d, five_n).is_identity());
    }
    // [sqrt5]-cyclicity: find a generator with exponent exactly 2n
    let ext = WordQuadExt::new(table.p);
    let ext_curve = Curve::new(ext, ext.embed_base(curve.h().clone()))?;
    let mut generator_exponent = 0u64;
    for d in &five_part {
        if d.is_identity() {
            continue;
        }
        let mut cur = d.clone();
        let mut steps = 0u64;
        while !cur.is_identity() && steps <= 2 * n {
            cur = sqrt5_via_extension(curve, &ext_curve, &cur);
            steps += 1;
        }
        if steps == 2 * n && cur.is_identity() {
            generator_exponent = steps;
            break;
        }
    }
    // image equals the five-part: orders of five-part elements are powers
    // of five and the count matches 5^(2n)
    let image_equals_five_part = five_part_order == expected;
    // order profile of the full group vs (Z/N)^2, N = 4 m^2 5^n
    let group_exp = BigInt::from(four_m2) * BigInt::from(5u32).pow(n as u32);
    let (_, digits) = group_exp.to_u64_digits();
    let nn = digits[0];
    let mut predicted: HashMap<u64, u64> = HashMap::new();
    // order histogram of (Z/nn): ord(a) = nn/gcd(nn,a); combine two picks
    let mut ord1: HashMap<u64, u64> = HashMap::new();
    for a in 0..nn {
        *ord1.entry(nn / gcd_u64(nn, a)).or_default() += 1;
    }
    for (&o1, &c1) in &ord1 {
        for (&o2, &c2) in &ord1 {
            *predicted.entry(lcm_u64(o1, o2)).or_default() += c1 * c2;
        }
    }
    let mut actual: HashMap<u64, u64> = HashMap::new();
    let orders: Vec<u64> = table
        .elements
        .par_iter()
        .map(|d| element_order(curve, d, nn))
        .collect();
    for o in orders {
        *actual.entry(o).or_default() += 1;
    }
    let shape_matches = predicted == actual;
    Ok(FivePartReport {
        five_part_order,
        generator_exponent,
        image_equals_five_part,
        shape_matches,
    })
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

fn lcm_u64(a: u64, b: u64) -> u64 {
    a / gcd_u64(a, b) * b
}

/// Order of an element given the group exponent.
fn element_order(curve: &Curve<WordField>, d: &MumfordDivisor<WordField>, exponent: u64) -> u64 {
    // factor the exponent (tiny), then strip primes
    let mut factors = Vec::new();
    let mut e = exponent;
    let mut q = 2;
    while q * q <= e {
        if e % q == 0 {
            factors.push(q);
            while e % q == 0 {
                e /= q;
            }
        }
        q += 1;
    }
    if e > 1 {
        factors.push(e);
    }
    let mut order = exponent;
    for &p in &factors {
        while order % p == 0 && curve.scalar_mul_u64(d, order / p).is_identity() {
            order /= p;
        }
    }
    order
}

// ---------------------------------------------------------------------------
// The indeterminate-seed experiment
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedSweep {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub lambda: BigInt,
    pub m: u64,
    pub n: u64,
    /// membership depth: seeds whose P lands in [sqrt5]^k J, k = 2n - (T_safe - 1)
    pub k: u64,
    pub total_seeds: u64,
    pub member_seeds: u64,
    /// member_seeds / total_seeds <= 2m / 5^(n/2), compared exactly
    pub within_bound: bool,
    /// #X and #Y for the designated curve, when computed
    pub x_size: Option<u64>,
    pub y_size: Option<u64>,
    /// (#X)^2 * 5^k <= 2 (lambda+1)^2, the upper bound on #X, exact
    pub x_bound_ok: Option<bool>,
}

/// Membership of P in Im ([sqrt5]^k) tested as [sqrt5]^(2n-k) P = 0,
/// using [sqrt5]^2 = [5] so only an odd leftover step needs F_p^2.
fn annihilated_by_sqrt5_power(
    curve: &Curve<WordField>,
    ext_curve: &Curve<WordQuadExt>,
    p0: &MumfordDivisor<WordField>,
    j: u64,
) -> bool {
    let half = j / 2;
    let mut cur = p0.clone();
    if half > 0 {
        cur = curve.scalar_mul_u64(&cur, 5u64.pow(half as u32));
    }
    if j % 2 == 1 {
        if cur.is_identity() {
            return true;
        }
        cur = sqrt5_via_extension(curve, ext_curve, &cur);
    }
    cur.is_identity()
}

/// Direct repeated application of [sqrt5] over F_p^2; the cross-check
/// oracle for the fast membership path.
pub fn annihilated_by_sqrt5_power_direct(
    curve: &Curve<WordField>,
    ext_curve: &Curve<WordQuadExt>,
    p0: &MumfordDivisor<WordField>,
    j: u64,
) -> bool {
    let mut cur = p0.clone();
    for _ in 0..j {
        if cur.is_identity() {
            return true;
        }
        cur = sqrt5_via_extension(curve, ext_curve, &cur);
    }
    cur.is_identity()
}

/// Sweep seeds (alpha, beta) with h = beta^2 - alpha^5 nonzero mod lambda,
/// counting those that land in the indeterminate region of the test
/// (identity before the safe threshold). X and Y are computed for the
/// designated h (`x_h`), when given.
pub fn indeterminate_fraction(
    m: u64,
    n: u64,
    sweep: SeedSweep,
    x_h: Option<u64>,
) -> Result<ExperimentReport, OracleError> {
    let lambda = lambda_value(m, n);
    if lambda <= BigInt::from(100) {
        return Err(OracleError::LambdaTooSmall(lambda));
    }
    if !is_prime_trial_division(&lambda) {
        return Err(OracleError::CompositeLambda(lambda));
    }
    let ceiling = BigInt::from(exhaustive_ceiling());
    if matches!(sweep, SeedSweep::Exhaustive) && lambda > ceiling {
        let (_, d) = lambda.to_u64_digits();
        return Err(OracleError::CeilingExceeded {
            p: d[0],
            ceiling: exhaustive_ceiling(),
            env: EXHAUSTIVE_CEILING_ENV,
        });
    }
    let (_, digits) = lambda.to_u64_digits();
    let lam = digits[0];
    let field = WordField::new(lam);
    let t_safe = safe_threshold(&lambda);
    let j = t_safe - 1; // identity within < T_safe steps
    let k = 2 * n - j;
    let four_m2 = 4 * m * m;
    // fifth-root exponent: alpha = (beta^2 - h)^d with d = inverse of 5 mod lam-1
    let d_exp = {
        let lm1 = BigInt::from(lam - 1);
        crate::field::inv_mod(&BigInt::from(5), &lm1).expect("gcd(5, lambda-1) = 1")
    };
    let (_, dd) = d_exp.to_u64_digits();
    let d_exp = dd.first().copied().unwrap_or(0);

    let member_for_h = |h: u64| -> u64 {
        let curve = Curve::new(field, h).expect("h nonzero, p odd");
        let ext = WordQuadExt::new(lam);
        let ext_curve = Curve::new(ext, ext.embed_base(h)).unwrap();
        let mut count = 0u64;
        for beta in 0..lam {
            let b2 = field.mul(&beta, &beta);
            let rhs = field.sub(&b2, &h);
            let alpha = crate::field::pow_mod_u64(rhs, d_exp, lam);
            debug_assert_eq!(field.pow_u64(&alpha, 5), rhs);
            let q = curve.embed_point(&alpha, &beta).unwrap();
            let p0 = curve.scalar_mul_u64(&q, four_m2);
            if annihilated_by_sqrt5_power(&curve, &ext_curve, &p0, j) {
                count += 1;
            }
        }
        count
    };

    let (total_seeds, member_seeds) = match sweep {
        SeedSweep::Exhaustive => {
            let counts: Vec<u64> = (1..lam).into_par_iter().map(member_for_h).collect();
            ((lam as u64 - 1) * lam as u64, counts.iter().sum())
        }
        SeedSweep::Sampled { count, seed } => {
            let members: u64 = (0..count as u64)
                .into_par_iter()
                .map(|i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ i);
                    // rejection-sample a seed with h != 0
                    loop {
                        let alpha = rng.gen_range(0..lam);
                        let beta = rng.gen_range(0..lam);
                        let h = field.sub(
                            &field.mul(&beta, &beta),
                            &field.pow_u64(&alpha, 5),
                        );
                        if h == 0 {
                            continue;
                        }
                        let curve = Curve::new(field, h).unwrap();
                        let ext = WordQuadExt::new(lam);
                        let ext_curve = Curve::new(ext, ext.embed_base(h)).unwrap();
                        let q = curve.embed_point(&alpha, &beta).unwrap();
                        let p0 = curve.scalar_mul_u64(&q, four_m2);
                        return annihilated_by_sqrt5_power(&curve, &ext_curve, &p0, j)
                            as u64;
                    }
                })
                .sum();
            (count as u64, members)
        }
    };

    // exact comparison member/total <= 2m/5^(n/2):
    // member^2 * 5^n <= 4 m^2 total^2
    let within_bound = {
        let lhs = BigInt::from(member_seeds).pow(2) * BigInt::from(5u32).pow(n as u32);
        let rhs = BigInt::from(4u32)
            * BigInt::from(m)
            * BigInt::from(m)
            * BigInt::from(total_seeds).pow(2);
        lhs <= rhs
    };

    // X and Y for the designated curve
    let (x_size, y_size, x_bound_ok) = if let Some(h) = x_h {
        let curve = Curve::new(field, h % lam).expect("nonzero h");
        let ext = WordQuadExt::new(lam);
        let ext_curve = Curve::new(ext, ext.embed_base(h % lam)).unwrap();
        let mut x_set = vec![curve.identity()];
        for beta in 0..lam {
            let b2 = field.mul(&beta, &beta);
            let rhs = field.sub(&b2, &(h % lam));
            let alpha = crate::field::pow_mod_u64(rhs, d_exp, lam);
            let q = curve.embed_point(&alpha, &beta).unwrap();
            let p0 = curve.scalar_mul_u64(&q, four_m2);
            if annihilated_by_sqrt5_power(&curve, &ext_curve, &p0, j) {
                x_set.push(q);
            }
        }
        let mut y_keys = std::collections::HashSet::new();
        for a in &x_set {
            for b in &x_set {
                y_keys.insert(divisor_key(&curve.add(a, b)));
            }
        }
        let xs = x_set.len() as u64;
        let ys = y_keys.len() as u64;
        // (#X)^2 * 5^k <= 2 (lambda+1)^2
        let bound_ok = BigInt::from(xs).pow(2) * BigInt::from(5u32).pow(k as u32)
            <= BigInt::from(2u32) * BigInt::from(lam + 1).pow(2);
        (Some(xs), Some(ys), Some(bound_ok))
    } else {
        (None, None, None)
    };

    Ok(ExperimentReport {
        lambda,
        m,
        n,
        k,
        total_seeds,
        member_seeds,
        within_bound,
        x_size,
        y_size,
        x_bound_ok,
    })
}
