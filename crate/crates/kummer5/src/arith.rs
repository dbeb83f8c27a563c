//! Small integer utilities shared by the multi-modular paths: u64
//! primality, prime streams, CRT accumulation and rational reconstruction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::field::pow_mod_u64;

/// Deterministic Miller-Rabin for u64 (the 12 smallest prime bases decide
/// primality for every 64-bit integer).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Descending stream of primes starting just below `start`.
pub fn primes_below(start: u64) -> impl Iterator<Item = u64> {
    let mut n = if start % 2 == 0 { start - 1 } else { start - 2 };
    std::iter::from_fn(move || {
        while n > 2 {
            let cand = n;
            n -= 2;
            if is_prime_u64(cand) {
                return Some(cand);
            }
        }
        None
    })
}

/// Ascending primes p = 1 (mod 5) with p not dividing 10*h, from 11 up.
pub fn primes_one_mod_five(h: &BigInt, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut p = 11u64;
    while out.len() < count {
        if p % 5 == 1 && is_prime_u64(p) && !(h % BigInt::from(p)).is_zero() {
            out.push(p);
        }
        p += 2;
    }
    out
}

/// Trial division primality for desk-scale moduli.
pub fn is_prime_trial_division(n: &BigInt) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    let mut d = BigInt::from(2);
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            return false;
        }
        d += 1u32;
    }
    true
}

/// Smallest nontrivial factor by trial division, if composite.
pub fn smallest_factor(n: &BigInt) -> Option<BigInt> {
    if *n < BigInt::from(4) {
        return None;
    }
    let mut d = BigInt::from(2);
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            return Some(d);
        }
        d += 1u32;
    }
    None
}

/// Incremental CRT state: a value known modulo a growing modulus.
#[derive(Clone, Debug)]
pub struct CrtAccumulator {
    pub residue: BigInt,
    pub modulus: BigInt,
}

impl CrtAccumulator {
    pub fn new(residue: BigInt, modulus: BigInt) -> Self {
        CrtAccumulator { residue, modulus }
    }

    /// Fold in `value mod p`; p must be coprime to the current modulus.
    pub fn push(&mut self, value: u64, p: u64) {
        let p = BigInt::from(p);
        let value = BigInt::from(value);
        // x = residue + modulus * t with t = (value - residue)/modulus mod p
        let minv = crate::field::inv_mod(&self.modulus, &p).expect("coprime moduli");
        let t = ((&value - &self.residue) * minv).mod_floor(&p);
        self.residue += &self.modulus * t;
        self.modulus *= p;
    }

    /// Merge another accumulator (coprime modulus) in one pass; folding a
    /// whole batch this way touches the big residue once per batch instead
    /// of once per prime.
    pub fn merge(&mut self, other: &CrtAccumulator) {
        let minv =
            crate::field::inv_mod(&self.modulus, &other.modulus).expect("coprime moduli");
        let t = ((&other.residue - &self.residue) * minv).mod_floor(&other.modulus);
        self.residue += &self.modulus * t;
        self.modulus *= &other.modulus;
    }

    /// Fold in a batch of per-prime residues.
    pub fn push_batch(&mut self, batch: &[(u64, u64)]) {
        if batch.is_empty() {
            return;
        }
        let mut small = CrtAccumulator::new(BigInt::from(batch[0].0), BigInt::from(batch[0].1));
        for &(v, p) in &batch[1..] {
            small.push(v, p);
        }
        if self.modulus.is_one() {
            *self = small;
        } else {
            self.merge(&small);
        }
    }
}

/// Rational reconstruction (Wang): find n/d with n = r*d (mod m),
/// |n| <= bound, 0 < d <= bound, bound = floor(sqrt((m-1)/2)).
///
/// The remainder sequence is driven by Lehmer batches (simulate Euclid on
/// 127-bit leading digits, apply the accumulated 2x2 matrix to the full
/// numbers) until close to the bound crossing, then classical steps find
/// the exact convergent. Quadratic-with-small-constant instead of the
/// word-by-word classical loop.
pub fn rational_reconstruct(r: &BigInt, m: &BigInt) -> Option<(BigInt, BigInt)> {
    let bound = ((m - 1u32) / 2u32).sqrt();
    let bound_bits = bound.bits();
    let mut r0 = m.clone();
    let mut r1 = r.mod_floor(m);
    let mut t0 = BigInt::zero();
    let mut t1 = BigInt::one();
    // Lehmer phase, staying safely above the crossing so batches cannot
    // jump past the convergent the bound selects.
    while !r1.is_zero() && r1.bits() > bound_bits + 192 {
        match lehmer_matrix(&r0, &r1) {
            Some((mu, mv, mu1, mv1)) => {
                let nr0 = &r0 * mu + &r1 * mv;
                let nr1 = &r0 * mu1 + &r1 * mv1;
                let nt0 = &t0 * mu + &t1 * mv;
                let nt1 = &t0 * mu1 + &t1 * mv1;
                r0 = nr0;
                r1 = nr1;
                t0 = nt0;
                t1 = nt1;
            }
            None => {
                let (q, rem) = r0.div_rem(&r1);
                let t2 = &t0 - &q * &t1;
                r0 = std::mem::replace(&mut r1, rem);
                t0 = std::mem::replace(&mut t1, t2);
            }
        }
    }
    while r1 > bound {
        let (q, rem) = r0.div_rem(&r1);
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, rem);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let (n, d) = (r1, t1);
    if d.is_zero() || d.abs() > bound {
        return None;
    }
    let (n, d) = if d.is_negative() { (-n, -d) } else { (n, d) };
    if !n.gcd(&d).is_one() || !d.gcd(m).is_one() {
        return None;
    }
    Some((n, d))
}

/// Simulate Euclid on the 127-bit leading digits of (r0, r1) with the
/// classical certainty test; returns the accumulated unimodular matrix
/// (u, v, u', v') meaning r0' = u r0 + v r1, r1' = u' r0 + v' r1, or
/// `None` when no step is certain at this precision.
fn lehmer_matrix(r0: &BigInt, r1: &BigInt) -> Option<(i128, i128, i128, i128)> {
    let bits = r0.bits();
    if bits <= 127 || r1.is_zero() {
        return None;
    }
    let shift = bits - 127;
    let a0: BigInt = r0 >> shift;
    let b0: BigInt = r1 >> shift;
    let mut a = to_u128(&a0);
    let mut b = to_u128(&b0);
    if b == 0 {
        return None;
    }
    let (mut u, mut v, mut u1, mut v1): (i128, i128, i128, i128) = (1, 0, 0, 1);
    loop {
        // certainty test (leading-digit quotients agree for both remainder
        // bounds); also keep cofactors far from overflow
        let bu = b as i128 + u1;
        let bv = b as i128 + v1;
        if bu == 0 || bv == 0 {
            break;
        }
        let q1 = (a as i128 + u) / bu;
        let q2 = (a as i128 + v) / bv;
        if q1 != q2 || q1 < 0 {
            break;
        }
        let q = q1;
        if q.checked_mul(u1.abs().max(v1.abs()))
            .map_or(true, |x| x > (1 << 100))
        {
            break;
        }
        let na = b;
        let nb = a - (q as u128) * b;
        a = na;
        b = nb;
        let nu = u1;
        let nu1 = u - q * u1;
        u = nu;
        u1 = nu1;
        let nv = v1;
        let nv1 = v - q * v1;
        v = nv;
        v1 = nv1;
        if b == 0 {
            break;
        }
    }
    if v == 0 {
        // no step performed
        return None;
    }
    Some((u, v, u1, v1))
}

fn to_u128(x: &BigInt) -> u128 {
    let (_, digits) = x.to_u64_digits();
    match digits.len() {
        0 => 0,
        1 => digits[0] as u128,
        _ => (digits[1] as u128) << 64 | digits[0] as u128,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_agrees_with_trial_division() {
        for n in 0u64..2000 {
            assert_eq!(
                is_prime_u64(n),
                is_prime_trial_division(&BigInt::from(n)),
                "mismatch at {n}"
            );
        }
        assert!(is_prime_u64(4611686018427387847)); // prime just below 2^62
    }

    #[test]
    fn crt_and_rational_reconstruction_roundtrip() {
        let target_n = BigInt::from(-12345678901i64);
        let target_d = BigInt::from(99991u32);
        let mut acc = CrtAccumulator::new(BigInt::zero(), BigInt::one());
        for p in primes_below(1 << 62).take(4) {
            let pb = BigInt::from(p);
            let dinv = crate::field::inv_mod(&target_d, &pb).unwrap();
            let residue = ((&target_n).mod_floor(&pb) * dinv).mod_floor(&pb);
            let (_, digits) = residue.to_u64_digits();
            acc.push(digits.first().copied().unwrap_or(0), p);
        }
        let (n, d) = rational_reconstruct(&acc.residue, &acc.modulus).unwrap();
        assert_eq!(n, target_n);
        assert_eq!(d, target_d);
    }

    #[test]
    fn primes_one_mod_five_respect_h() {
        let h = BigInt::from(-31);
        let ps = primes_one_mod_five(&h, 6);
        assert_eq!(ps.len(), 6);
        for p in ps {
            assert_eq!(p % 5, 1);
            assert!(is_prime_u64(p));
            assert_ne!(p, 31);
        }
    }
}

#[cfg(test)]
mod lehmer_tests {
    use super::*;
    use num_traits::One;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reconstruction_recovers_large_random_rationals() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for digits in [50usize, 500, 5000] {
            for _ in 0..3 {
                let mut ns = String::from("1");
                let mut ds = String::from("1");
                for _ in 0..digits {
                    ns.push(char::from(b'0' + rng.gen_range(0..10)));
                    ds.push(char::from(b'0' + rng.gen_range(0..10)));
                }
                let n: BigInt = ns.parse().unwrap();
                let d: BigInt = ds.parse::<BigInt>().unwrap() | BigInt::one(); // make odd
                let n = if rng.gen_bool(0.5) { -n } else { n };
                // modulus comfortably above 2*n*d
                let mut acc = CrtAccumulator::new(BigInt::zero(), BigInt::one());
                let needed = digits / 8 + 8;
                for p in primes_below(1 << 62).take(needed) {
                    let pb = BigInt::from(p);
                    if (&d % &pb).is_zero() {
                        continue;
                    }
                    let dinv = crate::field::inv_mod(&d, &pb).unwrap();
                    let residue = (n.mod_floor(&pb) * dinv).mod_floor(&pb);
                    let (_, dig) = residue.to_u64_digits();
                    acc.push(dig.first().copied().unwrap_or(0), p);
                }
                let (rn, rd) = rational_reconstruct(&acc.residue, &acc.modulus)
                    .expect("enough primes");
                let g = n.gcd(&d);
                assert_eq!(rn, &n / &g);
                assert_eq!(rd, &d / &g);
            }
        }
    }
}
