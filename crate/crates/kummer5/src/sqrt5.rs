//! Recovery of the four degree-N homogeneous forms representing
//! [sqrt(5)]: K -> K by interpolation: enumerate a Z[zeta]-orbit of a base
//! point, project sample/image pairs to the Kummer surface, assemble the
//! projective linear system, extract a kernel element with all pair
//! constants nonzero, and validate the result over random prime fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arith::primes_one_mod_five;
use crate::field::{Cyclo, CyclotomicField, Field, WordField};
use crate::genus2::{Curve, CyclotomicIntegerEndo, MumfordDivisor};
use crate::kummer::{integral_cyclo_coords, kappa, projectively_equal};
use crate::linalg::{kernel, IntMat, KernelStrategy, LinalgError};
use crate::monomial::{eval_monomials, monomial_count, monomials};

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("basis bound {bound} yields only {got} usable divisors, need {need}")]
    BoundTooSmall { bound: i64, got: usize, need: usize },
    #[error("empty system")]
    EmptySystem,
    #[error("kernel has no element with every pair constant nonzero; enlarge the sample set")]
    DegenerateSamples,
    #[error("map fails validation at p = {p} (trial {trial})")]
    MapInvalid { p: u64, trial: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Curve(#[from] crate::genus2::CurveError),
}

/// Integer coefficient table for the degree-N map on K. Rows follow the
/// shared monomial order; the 4 x M(N) table has content 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sqrt5Map {
    pub h: BigInt,
    pub degree: u32,
    pub coeffs: [Vec<BigInt>; 4],
    validated: bool,
}

impl Sqrt5Map {
    pub fn new(h: BigInt, degree: u32, coeffs: [Vec<BigInt>; 4]) -> Self {
        let m = monomial_count(degree);
        for row in &coeffs {
            assert_eq!(row.len(), m, "coefficient row length mismatch");
        }
        Sqrt5Map {
            h,
            degree,
            coeffs,
            validated: false,
        }
    }

    /// Build from sparse (exponents, coefficient) terms.
    pub fn from_terms(h: BigInt, degree: u32, terms: [&[([u8; 4], i64)]; 4]) -> Self {
        let ms = monomials(degree);
        let mut coeffs: [Vec<BigInt>; 4] = [
            vec![BigInt::zero(); ms.len()],
            vec![BigInt::zero(); ms.len()],
            vec![BigInt::zero(); ms.len()],
            vec![BigInt::zero(); ms.len()],
        ];
        for (i, row) in terms.iter().enumerate() {
            for (e, c) in row.iter() {
                let idx = ms.iter().position(|m| m == e).expect("degree-N exponents");
                coeffs[i][idx] = BigInt::from(*c);
            }
        }
        Sqrt5Map::new(h, degree, coeffs)
    }

    pub fn validated(&self) -> bool {
        self.validated
    }

    pub fn mark_validated(&mut self) {
        self.validated = true;
    }

    /// Overall content of the 4 x M table.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for row in &self.coeffs {
            for c in row {
                g = g.gcd(c);
            }
        }
        g
    }

    /// Evaluate the four forms at a point of any field, reducing the
    /// integer coefficients into the field.
    pub fn eval_in_field<F: Field>(&self, field: &F, x: &[F::Elem; 4]) -> [F::Elem; 4] {
        let monos = eval_monomials(x, self.degree, field.one(), |a, b| field.mul(a, b));
        let mut out = [field.zero(), field.zero(), field.zero(), field.zero()];
        for i in 0..4 {
            let mut acc = field.zero();
            for (c, m) in self.coeffs[i].iter().zip(monos.iter()) {
                if c.is_zero() {
                    continue;
                }
                acc = field.add(&acc, &field.mul(&field.from_bigint(c), m));
            }
            out[i] = acc;
        }
        out
    }

    /// Evaluate over the integral model of Q(zeta).
    pub fn eval_icyclo(&self, x: &[ICyclo; 4]) -> [ICyclo; 4] {
        let monos = eval_monomials(x, self.degree, icyclo_one(), icyclo_mul);
        let mut out = [
            icyclo_zero(),
            icyclo_zero(),
            icyclo_zero(),
            icyclo_zero(),
        ];
        for i in 0..4 {
            let mut acc = icyclo_zero();
            for (c, m) in self.coeffs[i].iter().zip(monos.iter()) {
                if c.is_zero() {
                    continue;
                }
                for k in 0..4 {
                    acc[k] += c * &m[k];
                }
            }
            out[i] = acc;
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Integral Z[zeta] helpers (hot path of the system build)
// ---------------------------------------------------------------------------

/// Element of Z[zeta] on the basis {1, zeta, zeta^2, zeta^3}.
pub type ICyclo = [BigInt; 4];

pub fn icyclo_zero() -> ICyclo {
    [
        BigInt::zero(),
        BigInt::zero(),
        BigInt::zero(),
        BigInt::zero(),
    ]
}

pub fn icyclo_one() -> ICyclo {
    [
        BigInt::one(),
        BigInt::zero(),
        BigInt::zero(),
        BigInt::zero(),
    ]
}

pub fn icyclo_is_zero(a: &ICyclo) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn icyclo_mul(a: &ICyclo, b: &ICyclo) -> ICyclo {
    let mut conv = [
        BigInt::zero(),
        BigInt::zero(),
        BigInt::zero(),
        BigInt::zero(),
        BigInt::zero(),
        BigInt::zero(),
        BigInt::zero(),
    ];
    for i in 0..4 {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..4 {
            if b[j].is_zero() {
                continue;
            }
            conv[i + j] += &a[i] * &b[j];
        }
    }
    let mut out = [
        conv[0].clone(),
        conv[1].clone(),
        conv[2].clone(),
        conv[3].clone(),
    ];
    if !conv[4].is_zero() {
        for o in out.iter_mut() {
            *o -= &conv[4];
        }
    }
    if !conv[5].is_zero() {
        out[0] += &conv[5];
    }
    if !conv[6].is_zero() {
        out[1] += &conv[6];
    }
    out
}

/// Multiply by zeta (basis rotation with the Phi_5 reduction).
pub fn icyclo_mul_zeta(a: &ICyclo) -> ICyclo {
    // zeta * (c0 + c1 z + c2 z^2 + c3 z^3) = c3 z^4 + ... with
    // z^4 = -(1 + z + z^2 + z^3)
    [
        -&a[3],
        &a[0] - &a[3],
        &a[1] - &a[3],
        &a[2] - &a[3],
    ]
}

pub fn icyclo_from_cyclo(c: &Cyclo) -> ICyclo {
    let mut out = icyclo_zero();
    for (o, r) in out.iter_mut().zip(c.c.iter()) {
        assert!(r.denom().is_one(), "expected integral cyclotomic value");
        *o = r.numer().clone();
    }
    out
}

// ---------------------------------------------------------------------------
// Sample generation
// ---------------------------------------------------------------------------

/// A projected interpolation pair: a Kummer point and its image under
/// [sqrt(5)], both with content-reduced integral Z[zeta] coordinates.
#[derive(Clone, Debug)]
pub struct SamplePair {
    pub source: [ICyclo; 4],
    pub image: [ICyclo; 4],
}

/// Z[zeta]-multiples of Q0 ordered by coefficient norm then lexicographic
/// order, keeping tuples whose first nonzero coordinate is positive so a
/// divisor and its negative never both appear.
pub fn endo_tuples(bound: i64) -> Vec<[i64; 4]> {
    let mut tuples = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            for c in -bound..=bound {
                for d in -bound..=bound {
                    let t = [a, b, c, d];
                    let first = t.iter().find(|&&x| x != 0);
                    match first {
                        None => continue,
                        Some(&x) if x < 0 => continue,
                        _ => tuples.push(t),
                    }
                }
            }
        }
    }
    tuples.sort_by_key(|t| {
        (
            t.iter().map(|&x| x * x).sum::<i64>(),
            *t,
        )
    });
    tuples
}

/// Distinct non-identity divisors [a + b zeta + c zeta^2 + d zeta^3] Q0,
/// no pair {P, -P}; fails with `BoundTooSmall` when the orbit within the
/// bound cannot reach `target`.
pub fn build_sample_set(
    curve: &Curve<CyclotomicField>,
    q0: &MumfordDivisor<CyclotomicField>,
    bound: i64,
    target: usize,
) -> Result<Vec<MumfordDivisor<CyclotomicField>>, SynthError> {
    let mut out: Vec<MumfordDivisor<CyclotomicField>> = Vec::with_capacity(target);
    let mut seen: std::collections::HashSet<MumfordDivisor<CyclotomicField>> =
        std::collections::HashSet::new();
    for t in endo_tuples(bound) {
        if out.len() >= target {
            break;
        }
        let endo = CyclotomicIntegerEndo::new(t[0], t[1], t[2], t[3]);
        let d = curve.apply_endo(q0, &endo)?;
        if d.is_identity() {
            continue;
        }
        let neg = curve.negate(&d);
        if seen.contains(&d) || seen.contains(&neg) {
            continue;
        }
        seen.insert(d.clone());
        out.push(d);
    }
    if out.len() < target {
        return Err(SynthError::BoundTooSmall {
            bound,
            got: out.len(),
            need: target,
        });
    }
    Ok(out)
}

/// kappa-project a divisor set together with its [sqrt(5)] images.
pub fn build_pairs(
    curve: &Curve<CyclotomicField>,
    divisors: &[MumfordDivisor<CyclotomicField>],
) -> Result<Vec<SamplePair>, SynthError> {
    let mut pairs = Vec::with_capacity(divisors.len());
    for d in divisors {
        let src = integral_cyclo_coords(&kappa(curve, d));
        let img_div = curve.sqrt5(d)?;
        let img = integral_cyclo_coords(&kappa(curve, &img_div));
        pairs.push(SamplePair {
            source: src.map(|c| icyclo_from_cyclo(&c)),
            image: img.map(|c| icyclo_from_cyclo(&c)),
        });
    }
    Ok(pairs)
}

// ---------------------------------------------------------------------------
// The projective linear system
// ---------------------------------------------------------------------------

/// The block system L: for each pair j and coordinate i, the Q(zeta)
/// relation sum_mu a_{i,mu} mu(v_j) - lambda_j w_{j,i} = 0 split into four
/// rational component rows. Unknown order: the 4*M(N) rational a-columns
/// (phi_0 block first), then per pair the four zeta-components of
/// lambda_j. Rows are stored sparse.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub rows: usize,
    pub cols: usize,
    pub degree: u32,
    pub pair_count: usize,
    pub entries: Vec<Vec<(u32, BigInt)>>,
}

pub fn build_linear_system(pairs: &[SamplePair], degree: u32) -> Result<LinearSystem, SynthError> {
    if pairs.is_empty() {
        return Err(SynthError::EmptySystem);
    }
    let m = monomial_count(degree);
    let a_cols = 4 * m;
    let cols = a_cols + 4 * pairs.len();
    let mut entries = Vec::with_capacity(16 * pairs.len());
    for (j, pair) in pairs.iter().enumerate() {
        let monos = eval_monomials(&pair.source, degree, icyclo_one(), icyclo_mul);
        // zeta^k * w_i for k = 0..3
        let mut zw = Vec::with_capacity(4);
        for i in 0..4 {
            let mut pows = Vec::with_capacity(4);
            let mut cur = pair.image[i].clone();
            for _ in 0..4 {
                pows.push(cur.clone());
                cur = icyclo_mul_zeta(&cur);
            }
            zw.push(pows);
        }
        for i in 0..4 {
            for c in 0..4 {
                let mut row: Vec<(u32, BigInt)> = Vec::new();
                for (mu, val) in monos.iter().enumerate() {
                    if !val[c].is_zero() {
                        row.push(((i * m + mu) as u32, val[c].clone()));
                    }
                }
                for k in 0..4 {
                    let coeff = -&zw[i][k][c];
                    if !coeff.is_zero() {
                        row.push(((a_cols + 4 * j + k) as u32, coeff));
                    }
                }
                entries.push(row);
            }
        }
    }
    Ok(LinearSystem {
        rows: entries.len(),
        cols,
        degree,
        pair_count: pairs.len(),
        entries,
    })
}

// ---------------------------------------------------------------------------
// Solving
// ---------------------------------------------------------------------------

/// Eliminate the pair constants exactly (per-pair cross-multiplication
/// against the first nonzero image coordinate), leaving an integer system
/// in the a-unknowns only.
fn reduced_a_system(pairs: &[SamplePair], degree: u32) -> IntMat {
    let m = monomial_count(degree);
    let a_cols = 4 * m;
    let mut rows_data: Vec<BigInt> = Vec::new();
    let mut nrows = 0usize;
    for pair in pairs {
        let monos = eval_monomials(&pair.source, degree, icyclo_one(), icyclo_mul);
        let i0 = (0..4)
            .find(|&i| !icyclo_is_zero(&pair.image[i]))
            .expect("image is a projective point");
        for i in 0..4 {
            if i == i0 {
                continue;
            }
            // phi_i(v) * w_{i0} - phi_{i0}(v) * w_i = 0
            let mut row = vec![BigInt::zero(); a_cols];
            let mut rows4 = vec![row.clone(), row.clone(), row.clone(), row.clone()];
            row.clear();
            for (mu, val) in monos.iter().enumerate() {
                let a = icyclo_mul(val, &pair.image[i0]);
                let b = icyclo_mul(val, &pair.image[i]);
                for c in 0..4 {
                    if !a[c].is_zero() {
                        rows4[c][i * m + mu] = a[c].clone();
                    }
                    if !b[c].is_zero() {
                        rows4[c][i0 * m + mu] = -b[c].clone();
                    }
                }
            }
            for r in rows4 {
                rows_data.extend(r);
                nrows += 1;
            }
        }
    }
    IntMat {
        rows: nrows,
        cols: a_cols,
        data: rows_data,
    }
}

/// The pair constant lambda_j of a candidate coefficient table, as an
/// exact Q(zeta) ratio; `None` when the candidate is not a projective
/// multiple of the image at pair j (or the multiple is zero).
fn pair_constant(candidate: &Sqrt5Map, pair: &SamplePair) -> Option<ICyclo> {
    let vals = candidate.eval_icyclo(&pair.source);
    // lambda = phi_{i0}(v) / w_{i0} over Q(zeta); verify cross ratios.
    let cy = CyclotomicField;
    let to_cy = |a: &ICyclo| {
        Cyclo::new([
            num_rational::BigRational::from_integer(a[0].clone()),
            num_rational::BigRational::from_integer(a[1].clone()),
            num_rational::BigRational::from_integer(a[2].clone()),
            num_rational::BigRational::from_integer(a[3].clone()),
        ])
    };
    for i in 0..4 {
        for k in (i + 1)..4 {
            let lhs = icyclo_mul(&vals[i], &pair.image[k]);
            let rhs = icyclo_mul(&vals[k], &pair.image[i]);
            if lhs != rhs {
                return None;
            }
        }
    }
    let i0 = (0..4).find(|&i| !icyclo_is_zero(&pair.image[i]))?;
    if icyclo_is_zero(&vals[i0]) {
        return None;
    }
    let lam = cy
        .div(&to_cy(&vals[i0]), &to_cy(&pair.image[i0]))
        .ok()?;
    if cy.is_zero(&lam) {
        None
    } else {
        Some(icyclo_scaled(&lam))
    }
}

fn icyclo_scaled(c: &Cyclo) -> ICyclo {
    // clear denominators; only used as a nonzero witness
    let mut lcm = BigInt::one();
    for r in &c.c {
        lcm = lcm.lcm(r.denom());
    }
    [
        c.c[0].numer() * (&lcm / c.c[0].denom()),
        c.c[1].numer() * (&lcm / c.c[1].denom()),
        c.c[2].numer() * (&lcm / c.c[2].denom()),
        c.c[3].numer() * (&lcm / c.c[3].denom()),
    ]
}

/// Extract the map from the kernel of L: among canonical kernel basis
/// vectors whose pair constants are all nonzero, take the one minimizing
/// the largest absolute coefficient (ties: lexicographic order), divide
/// out the content and any monomial factor common to all four forms.
pub fn solve_map(
    h: &BigInt,
    system: &LinearSystem,
    pairs: &[SamplePair],
    degree: u32,
    strategy: KernelStrategy,
) -> Result<Sqrt5Map, SynthError> {
    if pairs.is_empty() || system.rows == 0 {
        return Err(SynthError::EmptySystem);
    }
    assert_eq!(system.pair_count, pairs.len(), "system/pair mismatch");
    let m = monomial_count(degree);
    let reduced = reduced_a_system(pairs, degree);
    let basis = kernel(&reduced, strategy)?;
    let mut best: Option<Sqrt5Map> = None;
    let mut best_key: Option<(BigInt, Vec<BigInt>)> = None;
    for vec in &basis {
        let mut coeffs: [Vec<BigInt>; 4] = [
            vec[0..m].to_vec(),
            vec[m..2 * m].to_vec(),
            vec[2 * m..3 * m].to_vec(),
            vec[3 * m..4 * m].to_vec(),
        ];
        // quick reject: a form that is identically zero cannot be the map
        if coeffs.iter().any(|row| row.iter().all(|c| c.is_zero())) {
            continue;
        }
        let content = {
            let mut g = BigInt::zero();
            for row in &coeffs {
                for c in row {
                    g = g.gcd(c);
                }
            }
            g
        };
        if content > BigInt::one() {
            for row in coeffs.iter_mut() {
                for c in row.iter_mut() {
                    *c = &*c / &content;
                }
            }
        }
        let candidate = Sqrt5Map::new(h.clone(), degree, coeffs);
        // all pair constants nonzero
        if pairs.iter().all(|p| pair_constant(&candidate, p).is_some()) {
            let maxabs = candidate
                .coeffs
                .iter()
                .flat_map(|r| r.iter())
                .map(|c| c.abs())
                .max()
                .unwrap();
            let flat: Vec<BigInt> = candidate
                .coeffs
                .iter()
                .flat_map(|r| r.iter().cloned())
                .collect();
            let key = (maxabs, flat);
            if best_key.as_ref().map_or(true, |k| key < *k) {
                best_key = Some(key);
                best = Some(candidate);
            }
        }
    }
    let map = best.ok_or(SynthError::DegenerateSamples)?;
    Ok(remove_common_monomial(map))
}

/// Divide out a monomial factor common to all four forms (arises when the
/// requested degree exceeds the true one), then re-reduce the content.
fn remove_common_monomial(map: Sqrt5Map) -> Sqrt5Map {
    let ms = monomials(map.degree);
    let mut min_exp = [u8::MAX; 4];
    for row in &map.coeffs {
        for (e, c) in ms.iter().zip(row.iter()) {
            if c.is_zero() {
                continue;
            }
            for v in 0..4 {
                min_exp[v] = min_exp[v].min(e[v]);
            }
        }
    }
    let shift: u32 = min_exp.iter().map(|&x| x as u32).sum();
    if shift == 0 || min_exp == [u8::MAX; 4] {
        return map;
    }
    let new_degree = map.degree - shift;
    let new_ms = monomials(new_degree);
    let mut coeffs: [Vec<BigInt>; 4] = [
        vec![BigInt::zero(); new_ms.len()],
        vec![BigInt::zero(); new_ms.len()],
        vec![BigInt::zero(); new_ms.len()],
        vec![BigInt::zero(); new_ms.len()],
    ];
    for i in 0..4 {
        for (e, c) in ms.iter().zip(map.coeffs[i].iter()) {
            if c.is_zero() {
                continue;
            }
            let reduced = [
                e[0] - min_exp[0],
                e[1] - min_exp[1],
                e[2] - min_exp[2],
                e[3] - min_exp[3],
            ];
            let idx = new_ms.iter().position(|m| *m == reduced).unwrap();
            coeffs[i][idx] = c.clone();
        }
    }
    Sqrt5Map::new(map.h, new_degree, coeffs)
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub primes: Vec<(u64, usize)>,
    pub trials_per_prime: usize,
}

/// Randomized finite-field validation: over `prime_count` primes
/// p = 1 (mod 5) coprime to 10h, draw `trials` random divisors D and check
/// phi(kappa(D)) = kappa([sqrt5] D) projectively.
pub fn validate_map(
    map: &Sqrt5Map,
    trials: usize,
    prime_count: usize,
    seed: u64,
) -> Result<ValidationReport, SynthError> {
    let primes = primes_one_mod_five(&map.h, prime_count);
    let mut report = Vec::with_capacity(primes.len());
    for &p in &primes {
        let field = WordField::new(p);
        let curve = Curve::new(field, field.from_bigint(&map.h))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p);
        for trial in 0..trials {
            let d = random_divisor(&curve, &mut rng, trial);
            let src = kappa(&curve, &d);
            let img_div = curve.sqrt5(&d)?;
            let img = kappa(&curve, &img_div);
            let lhs = map.eval_in_field(&field, &src.x);
            if lhs.iter().all(|v| field.is_zero(v))
                || !projectively_equal(&field, &lhs, &img.x)
            {
                return Err(SynthError::MapInvalid { p, trial });
            }
        }
        report.push((p, trials));
    }
    Ok(ValidationReport {
        primes: report,
        trials_per_prime: trials,
    })
}

pub(crate) fn random_divisor(
    curve: &Curve<WordField>,
    rng: &mut ChaCha8Rng,
    trial: usize,
) -> MumfordDivisor<WordField> {
    let f = *curve.field();
    let p = f.modulus();
    let point = |rng: &mut ChaCha8Rng| loop {
        let x = rng.gen_range(0..p);
        let fx = curve.f().eval(&f, &x);
        if let Some(y) = f.sqrt(fx) {
            let y = if rng.gen_bool(0.5) { y } else { f.neg(&y) };
            return curve.embed_point(&x, &y).unwrap();
        }
    };
    match trial % 10 {
        0 => point(rng),
        1 => curve.double(&point(rng)),
        _ => {
            let a = point(rng);
            let b = point(rng);
            curve.add(&a, &b)
        }
    }
}

// ---------------------------------------------------------------------------
// Full synthesis driver
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct SynthConfig {
    pub basis_bound: i64,
    pub pair_target: usize,
    pub degree: u32,
    pub validation_trials: usize,
    pub validation_primes: usize,
    pub validation_seed: u64,
    pub strategy: KernelStrategy,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            basis_bound: 4,
            pair_target: 120,
            degree: 5,
            validation_trials: 50,
            validation_primes: 5,
            validation_seed: 0x5C4A_11E5,
            strategy: KernelStrategy::Auto,
        }
    }
}

/// End-to-end synthesis: samples, pairs, system, kernel, validation.
/// Falls back to degree N+1 when the requested degree only admits
/// degenerate solutions.
pub fn synthesize_sqrt5_map(
    h: &BigInt,
    alpha: &BigInt,
    beta: &BigInt,
    config: &SynthConfig,
) -> Result<(Sqrt5Map, ValidationReport), SynthError> {
    let cy = CyclotomicField;
    let curve = Curve::new(cy, cy.from_bigint(h))?;
    let q0 = curve.embed_point(&cy.from_bigint(alpha), &cy.from_bigint(beta))?;
    let divisors = build_sample_set(&curve, &q0, config.basis_bound, config.pair_target)?;
    let pairs = build_pairs(&curve, &divisors)?;
    let attempt = |degree: u32| -> Result<Sqrt5Map, SynthError> {
        let system = build_linear_system(&pairs, degree)?;
        solve_map(h, &system, &pairs, degree, config.strategy)
    };
    let map = match attempt(config.degree) {
        Ok(m) => m,
        Err(SynthError::DegenerateSamples) => attempt(config.degree + 1)?,
        Err(e) => return Err(e),
    };
    let mut map = map;
    let report = validate_map(
        &map,
        config.validation_trials,
        config.validation_primes,
        config.validation_seed,
    )?;
    map.mark_validated();
    Ok((map, report))
}

/// The reference degree-5 coefficient table for h = 2 printed in the
/// worked example; used as a fixture to confirm synthesized maps agree
/// with it as maps on K.
pub fn reference_map_h2() -> Sqrt5Map {
    let phi0: &[([u8; 4], i64)] = &[
        ([3, 2, 0, 0], 320),
        ([2, 1, 0, 2], 80),
        ([2, 0, 2, 1], 40),
        ([1, 2, 1, 1], 80),
        ([1, 1, 3, 0], -120),
        ([1, 0, 0, 4], 5),
        ([0, 3, 2, 0], 40),
        ([0, 1, 1, 3], 10),
        ([0, 0, 3, 2], 10),
    ];
    let phi1: &[([u8; 4], i64)] = &[
        ([3, 1, 1, 0], 640),
        ([2, 3, 0, 0], -320),
        ([2, 0, 1, 2], -160),
        ([1, 2, 0, 2], 120),
        ([1, 1, 2, 1], -40),
        ([1, 0, 4, 0], 120),
        ([0, 3, 1, 1], -80),
        ([0, 2, 3, 0], 40),
        ([0, 1, 0, 4], -5),
        ([0, 0, 2, 3], 10),
    ];
    let phi2: &[([u8; 4], i64)] = &[
        ([3, 0, 2, 0], 320),
        ([2, 2, 1, 0], -320),
        ([2, 0, 0, 3], -40),
        ([1, 4, 0, 0], -320),
        ([1, 1, 1, 2], -200),
        ([1, 0, 3, 1], 40),
        ([0, 3, 0, 2], 80),
        ([0, 2, 2, 1], -120),
        ([0, 0, 1, 4], 5),
    ];
    let phi3: &[([u8; 4], i64)] = &[
        ([5, 0, 0, 0], 512),
        ([2, 2, 0, 1], 320),
        ([2, 1, 2, 0], 320),
        ([1, 1, 0, 3], -40),
        ([1, 0, 2, 2], -360),
        ([0, 5, 0, 0], 64),
        ([0, 1, 3, 1], -40),
        ([0, 0, 5, 0], 24),
        ([0, 0, 0, 5], 1),
    ];
    Sqrt5Map::from_terms(BigInt::from(2), 5, [phi0, phi1, phi2, phi3])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_enumeration_properties() {
        let ts = endo_tuples(4);
        // first nonzero coordinate positive
        for t in &ts {
            let first = t.iter().find(|&&x| x != 0).unwrap();
            assert!(*first > 0);
        }
        // sorted by norm
        let norms: Vec<i64> = ts
            .iter()
            .map(|t| t.iter().map(|&x| x * x).sum())
            .collect();
        assert!(norms.windows(2).all(|w| w[0] <= w[1]));
        // enough tuples for the default target
        assert!(ts.len() > 120);
        assert_eq!(ts[0], [0, 0, 0, 1]);
    }

    #[test]
    fn bound_zero_is_too_small() {
        let cy = CyclotomicField;
        let curve = Curve::new(cy, cy.from_i64(2)).unwrap();
        let q0 = curve
            .embed_point(&cy.from_i64(-1), &cy.from_i64(1))
            .unwrap();
        match build_sample_set(&curve, &q0, 0, 1) {
            Err(SynthError::BoundTooSmall { got, .. }) => assert_eq!(got, 0),
            other => panic!("expected BoundTooSmall, got {other:?}"),
        }
    }

    #[test]
    fn reference_map_h2_validates() {
        let map = reference_map_h2();
        assert!(map.content().is_one());
        validate_map(&map, 50, 5, 7).expect("printed map must validate");
    }

    #[test]
    fn corrupted_reference_map_fails_validation() {
        let mut map = reference_map_h2();
        map.coeffs[0][0] += 1;
        assert!(matches!(
            validate_map(&map, 50, 5, 7),
            Err(SynthError::MapInvalid { .. })
        ));
    }

    #[test]
    fn reference_map_wrong_curve_fails_validation() {
        let mut map = reference_map_h2();
        map.h = BigInt::from(3);
        assert!(matches!(
            validate_map(&map, 50, 5, 7),
            Err(SynthError::MapInvalid { .. })
        ));
    }

    #[test]
    fn reference_map_fixes_identity() {
        // phi(0,0,0,1) is (0,0,0,1) up to scalar: only phi_3 contains x3^5.
        let map = reference_map_h2();
        let f = WordField::new(101);
        let out = map.eval_in_field(&f, &[0, 0, 0, 1]);
        assert_eq!(out, [0, 0, 0, 1]);
    }

    #[test]
    fn system_shape_matches_contract() {
        let cy = CyclotomicField;
        let curve = Curve::new(cy, cy.from_i64(2)).unwrap();
        let q0 = curve
            .embed_point(&cy.from_i64(-1), &cy.from_i64(1))
            .unwrap();
        let divisors = build_sample_set(&curve, &q0, 2, 10).unwrap();
        let pairs = build_pairs(&curve, &divisors).unwrap();
        let system = build_linear_system(&pairs, 5).unwrap();
        assert_eq!(system.rows, 16 * 10);
        assert_eq!(system.cols, 224 + 4 * 10);
        assert!(matches!(
            build_linear_system(&[], 5),
            Err(SynthError::EmptySystem)
        ));
    }

    #[test]
    fn kernel_engines_agree_on_a_real_subsystem() {
        // a genuinely interpolation-shaped matrix, small enough for the
        // fraction-free engine
        let cy = CyclotomicField;
        let curve = Curve::new(cy, cy.from_i64(2)).unwrap();
        let q0 = curve
            .embed_point(&cy.from_i64(-1), &cy.from_i64(1))
            .unwrap();
        let divisors = build_sample_set(&curve, &q0, 2, 12).unwrap();
        let pairs = build_pairs(&curve, &divisors).unwrap();
        let reduced = reduced_a_system(&pairs, 3);
        let exact = kernel(&reduced, KernelStrategy::Exact).unwrap();
        let modular = kernel(&reduced, KernelStrategy::Modular).unwrap();
        assert_eq!(exact, modular);
    }

    #[test]
    fn projective_scaling_of_pairs_preserves_reduced_kernel() {
        let cy = CyclotomicField;
        let curve = Curve::new(cy, cy.from_i64(2)).unwrap();
        let q0 = curve
            .embed_point(&cy.from_i64(-1), &cy.from_i64(1))
            .unwrap();
        let divisors = build_sample_set(&curve, &q0, 2, 6).unwrap();
        let mut pairs = build_pairs(&curve, &divisors).unwrap();
        let r1 = reduced_a_system(&pairs, 3);
        // scale one source by 2 and one image by 3
        for c in pairs[0].source.iter_mut() {
            for x in c.iter_mut() {
                *x = &*x * 2;
            }
        }
        for c in pairs[1].image.iter_mut() {
            for x in c.iter_mut() {
                *x = &*x * 3;
            }
        }
        let r2 = reduced_a_system(&pairs, 3);
        let k1 = kernel(&r1, KernelStrategy::Exact).unwrap();
        let k2 = kernel(&r2, KernelStrategy::Exact).unwrap();
        assert_eq!(k1, k2);
    }
}
