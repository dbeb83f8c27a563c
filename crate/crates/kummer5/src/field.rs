//! Exact field arithmetic behind one context abstraction: the rationals,
//! the cyclotomic field Q(zeta_5), prime fields F_p, and quadratic
//! extensions F_p^2, plus a machine-word prime field used by the
//! brute-force and multi-modular paths.
//!
//! A [`Field`] value is the *context* (modulus, nonresidue, chosen root of
//! unity); elements are plain data. All operations are pure, so contexts
//! and elements can be shared freely across threads.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not invertible modulo {0}")]
    NotInvertible(BigInt),
    #[error("no primitive 5th root of unity in the base field (p = {0} is not 1 mod 5)")]
    NotInBaseField(BigInt),
    #[error("no primitive 5th root of unity exists in characteristic 5")]
    BadCharacteristic,
    #[error("denominator not invertible modulo {0}")]
    BadDenominator(BigInt),
}

/// Field context. `Elem` is the carrier type; every operation takes the
/// context so moduli live in one place instead of inside each element.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError>;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;

    /// Characteristic of the field; zero for Q and Q(zeta).
    fn characteristic(&self) -> BigInt;

    /// The context's fixed primitive 5th root of unity, when one exists.
    fn zeta(&self) -> Option<Self::Elem>;

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(n))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    fn pow_u64(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.square(&base);
            e >>= 1;
        }
        acc
    }

    fn pow_bigint(&self, a: &Self::Elem, e: &BigInt) -> Self::Elem {
        assert!(!e.is_negative(), "negative exponent");
        let mut acc = self.one();
        for bit in (0..e.bits()).rev() {
            acc = self.square(&acc);
            if e.bit(bit) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Rationals
// ---------------------------------------------------------------------------

/// The field Q with arbitrary-precision reduced fractions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Result<BigRational, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(a.recip())
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn characteristic(&self) -> BigInt {
        BigInt::zero()
    }
    fn zeta(&self) -> Option<BigRational> {
        None
    }
}

// ---------------------------------------------------------------------------
// Q(zeta_5)
// ---------------------------------------------------------------------------

/// An element of Q(zeta_5) on the basis {1, zeta, zeta^2, zeta^3}, with
/// reduction by zeta^4 = -1 - zeta - zeta^2 - zeta^3.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclo {
    pub c: [BigRational; 4],
}

impl Cyclo {
    pub fn new(c: [BigRational; 4]) -> Self {
        Cyclo { c }
    }

    pub fn from_rational(r: BigRational) -> Self {
        Cyclo {
            c: [r, BigRational::zero(), BigRational::zero(), BigRational::zero()],
        }
    }

    pub fn from_integer_coords(c: [i64; 4]) -> Self {
        Cyclo {
            c: c.map(|x| BigRational::from_integer(BigInt::from(x))),
        }
    }

    /// True when the zeta, zeta^2, zeta^3 coordinates all vanish.
    pub fn is_rational(&self) -> bool {
        self.c[1].is_zero() && self.c[2].is_zero() && self.c[3].is_zero()
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.c[0]
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} + {}*z + {}*z^2 + {}*z^3)",
            self.c[0], self.c[1], self.c[2], self.c[3]
        )
    }
}

/// The cyclotomic field Q(zeta_5).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CyclotomicField;

impl CyclotomicField {
    /// zeta as an element.
    pub fn gen(&self) -> Cyclo {
        Cyclo::from_integer_coords([0, 1, 0, 0])
    }

    /// Multiply by zeta^k for k taken mod 5.
    pub fn mul_zeta_pow(&self, a: &Cyclo, k: i64) -> Cyclo {
        let k = k.rem_euclid(5) as u64;
        let mut out = a.clone();
        for _ in 0..k {
            out = self.mul(&out, &self.gen());
        }
        out
    }
}

impl Field for CyclotomicField {
    type Elem = Cyclo;

    fn zero(&self) -> Cyclo {
        Cyclo::from_integer_coords([0, 0, 0, 0])
    }
    fn one(&self) -> Cyclo {
        Cyclo::from_integer_coords([1, 0, 0, 0])
    }
    fn is_zero(&self, a: &Cyclo) -> bool {
        a.c.iter().all(|x| x.is_zero())
    }
    fn add(&self, a: &Cyclo, b: &Cyclo) -> Cyclo {
        Cyclo::new([
            &a.c[0] + &b.c[0],
            &a.c[1] + &b.c[1],
            &a.c[2] + &b.c[2],
            &a.c[3] + &b.c[3],
        ])
    }
    fn sub(&self, a: &Cyclo, b: &Cyclo) -> Cyclo {
        Cyclo::new([
            &a.c[0] - &b.c[0],
            &a.c[1] - &b.c[1],
            &a.c[2] - &b.c[2],
            &a.c[3] - &b.c[3],
        ])
    }
    fn neg(&self, a: &Cyclo) -> Cyclo {
        Cyclo::new([-&a.c[0], -&a.c[1], -&a.c[2], -&a.c[3]])
    }
    fn mul(&self, a: &Cyclo, b: &Cyclo) -> Cyclo {
        // Convolve to degree 6, then fold zeta^4 = -(1+z+z^2+z^3),
        // zeta^5 = 1, zeta^6 = zeta.
        let mut conv = [
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        ];
        for i in 0..4 {
            if a.c[i].is_zero() {
                continue;
            }
            for j in 0..4 {
                if b.c[j].is_zero() {
                    continue;
                }
                conv[i + j] = &conv[i + j] + &a.c[i] * &b.c[j];
            }
        }
        let mut out = [
            conv[0].clone(),
            conv[1].clone(),
            conv[2].clone(),
            conv[3].clone(),
        ];
        let c4 = conv[4].clone();
        if !c4.is_zero() {
            for o in out.iter_mut() {
                *o = &*o - &c4;
            }
        }
        if !conv[5].is_zero() {
            out[0] = &out[0] + &conv[5];
        }
        if !conv[6].is_zero() {
            out[1] = &out[1] + &conv[6];
        }
        Cyclo::new(out)
    }
    fn inv(&self, a: &Cyclo) -> Result<Cyclo, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::DivisionByZero);
        }
        // Solve the 4x4 rational system M x = e0 where M is multiplication
        // by a on the power basis.
        let cols: Vec<Cyclo> = (0..4).map(|j| self.mul(a, &zeta_pow(j))).collect();
        // Augmented 4x5 matrix.
        let mut aug: Vec<Vec<BigRational>> = (0..4)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..4).map(|j| cols[j].c[i].clone()).collect();
                row.push(if i == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
                row
            })
            .collect();
        // Gauss-Jordan.
        for col in 0..4 {
            let piv = (col..4)
                .find(|&r| !aug[r][col].is_zero())
                .expect("multiplication by a nonzero cyclotomic element is invertible");
            aug.swap(col, piv);
            let inv_p = aug[col][col].recip();
            for j in col..5 {
                aug[col][j] = &aug[col][j] * &inv_p;
            }
            for r in 0..4 {
                if r != col && !aug[r][col].is_zero() {
                    let factor = aug[r][col].clone();
                    for j in col..5 {
                        aug[r][j] = &aug[r][j] - &factor * &aug[col][j];
                    }
                }
            }
        }
        Ok(Cyclo::new([
            aug[0][4].clone(),
            aug[1][4].clone(),
            aug[2][4].clone(),
            aug[3][4].clone(),
        ]))
    }
    fn from_bigint(&self, n: &BigInt) -> Cyclo {
        Cyclo::from_rational(BigRational::from_integer(n.clone()))
    }
    fn characteristic(&self) -> BigInt {
        BigInt::zero()
    }
    fn zeta(&self) -> Option<Cyclo> {
        Some(self.gen())
    }
}

fn zeta_pow(k: usize) -> Cyclo {
    match k {
        0 => Cyclo::from_integer_coords([1, 0, 0, 0]),
        1 => Cyclo::from_integer_coords([0, 1, 0, 0]),
        2 => Cyclo::from_integer_coords([0, 0, 1, 0]),
        3 => Cyclo::from_integer_coords([0, 0, 0, 1]),
        4 => Cyclo::from_integer_coords([-1, -1, -1, -1]),
        _ => unreachable!(),
    }
}

// ---------------------------------------------------------------------------
// F_p with arbitrary-precision modulus
// ---------------------------------------------------------------------------

/// Prime field with big modulus. Primality of `p` is assumed, not checked.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: BigInt,
    zeta: Option<BigInt>,
}

impl PrimeField {
    pub fn new(p: BigInt) -> Self {
        assert!(p > BigInt::one(), "modulus must exceed 1");
        let zeta = find_zeta_mod_p(&p).ok();
        PrimeField { p, zeta }
    }

    pub fn modulus(&self) -> &BigInt {
        &self.p
    }

    /// Square root by Tonelli-Shanks; `None` when `a` is a nonresidue.
    pub fn sqrt(&self, a: &BigInt) -> Option<BigInt> {
        let order = &self.p - 1;
        tonelli_shanks(self, a, &order, || {
            (2i64..).map(|c| BigInt::from(c) % &self.p)
        })
    }
}

impl Field for PrimeField {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let s = a + b;
        if s >= self.p {
            s - &self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let d = a - b;
        if d.is_negative() {
            d + &self.p
        } else {
            d
        }
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        if a.is_zero() {
            BigInt::zero()
        } else {
            &self.p - a
        }
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b).mod_floor(&self.p)
    }
    fn inv(&self, a: &BigInt) -> Result<BigInt, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        inv_mod(a, &self.p).ok_or_else(|| FieldError::NotInvertible(self.p.clone()))
    }
    fn from_bigint(&self, n: &BigInt) -> BigInt {
        n.mod_floor(&self.p)
    }
    fn characteristic(&self) -> BigInt {
        self.p.clone()
    }
    fn zeta(&self) -> Option<BigInt> {
        self.zeta.clone()
    }
}

/// A primitive 5th root of unity in F_p.
///
/// One exists in the base field exactly when p = 1 (mod 5); the
/// deterministic choice raises the smallest working base g = 2, 3, ... to
/// (p-1)/5 and takes the first result that is not 1.
pub fn find_zeta_mod_p(p: &BigInt) -> Result<BigInt, FieldError> {
    if (p % BigInt::from(5)).is_zero() {
        return Err(FieldError::BadCharacteristic);
    }
    if (p - 1u32).mod_floor(&BigInt::from(5)) != BigInt::zero() {
        return Err(FieldError::NotInBaseField(p.clone()));
    }
    let exp = (p - 1u32) / BigInt::from(5);
    let mut g = BigInt::from(2);
    while &g < p {
        let z = g.modpow(&exp, p);
        if !z.is_one() {
            return Ok(z);
        }
        g += 1;
    }
    unreachable!("a primitive 5th root exists whenever 5 | p-1")
}

/// Extended-Euclid modular inverse; `None` when gcd(a, m) != 1.
pub fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(m);
    let egcd = BigInt::extended_gcd(&a, m);
    if !egcd.gcd.is_one() {
        return None;
    }
    Some(egcd.x.mod_floor(m))
}

// ---------------------------------------------------------------------------
// F_p^2 = F_p[t]/(t^2 - q), q the smallest positive quadratic nonresidue
// ---------------------------------------------------------------------------

/// Element a + b*t of F_p^2.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Fp2 {
    pub a: BigInt,
    pub b: BigInt,
}

impl fmt::Debug for Fp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}*t)", self.a, self.b)
    }
}

/// Quadratic extension of F_p as F_p[t]/(t^2 - q).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExtField {
    base: PrimeField,
    q: BigInt,
    zeta: Option<Fp2>,
}

impl QuadExtField {
    /// Build F_p^2 with the smallest positive quadratic nonresidue as q.
    pub fn new(p: BigInt) -> Self {
        let base = PrimeField::new(p.clone());
        let q = smallest_nonresidue(&base);
        let mut f = QuadExtField {
            base,
            q,
            zeta: None,
        };
        f.zeta = f.find_zeta();
        f
    }

    pub fn modulus(&self) -> &BigInt {
        self.base.modulus()
    }

    pub fn nonresidue(&self) -> &BigInt {
        &self.q
    }

    pub fn base(&self) -> &PrimeField {
        &self.base
    }

    pub fn embed_base(&self, a: &BigInt) -> Fp2 {
        Fp2 {
            a: self.base.from_bigint(a),
            b: BigInt::zero(),
        }
    }

    /// Project to F_p; `None` if the element has a nonzero t-component.
    pub fn project_base(&self, a: &Fp2) -> Option<BigInt> {
        if a.b.is_zero() {
            Some(a.a.clone())
        } else {
            None
        }
    }

    /// Deterministic search for a primitive 5th root of unity: raise
    /// t, t+1, t+2, ... to (p^2-1)/5 and keep the first value != 1.
    fn find_zeta(&self) -> Option<Fp2> {
        let p = self.base.modulus();
        let order = p * p - 1u32;
        if (&order % BigInt::from(5)).is_zero() {
            let exp = &order / BigInt::from(5);
            let mut c = BigInt::zero();
            loop {
                let cand = Fp2 {
                    a: c.clone(),
                    b: BigInt::one(),
                };
                let z = self.pow_bigint(&cand, &exp);
                if z != self.one() {
                    return Some(z);
                }
                c += 1;
            }
        } else {
            None
        }
    }

    /// Square root in F_p^2 by Tonelli-Shanks over the full group.
    pub fn sqrt(&self, a: &Fp2) -> Option<Fp2> {
        let p = self.base.modulus();
        let order = p * p - 1;
        let candidates = || {
            (0i64..).map(|c| Fp2 {
                a: BigInt::from(c).mod_floor(self.base.modulus()),
                b: BigInt::one(),
            })
        };
        tonelli_shanks(self, a, &order, candidates)
    }
}

fn smallest_nonresidue(f: &PrimeField) -> BigInt {
    let exp = (f.modulus() - 1) / BigInt::from(2);
    let mut q = BigInt::from(2);
    loop {
        if !q.modpow(&exp, f.modulus()).is_one() {
            return q;
        }
        q += 1;
    }
}

impl Field for QuadExtField {
    type Elem = Fp2;

    fn zero(&self) -> Fp2 {
        Fp2 {
            a: BigInt::zero(),
            b: BigInt::zero(),
        }
    }
    fn one(&self) -> Fp2 {
        Fp2 {
            a: BigInt::one(),
            b: BigInt::zero(),
        }
    }
    fn is_zero(&self, x: &Fp2) -> bool {
        x.a.is_zero() && x.b.is_zero()
    }
    fn add(&self, x: &Fp2, y: &Fp2) -> Fp2 {
        Fp2 {
            a: self.base.add(&x.a, &y.a),
            b: self.base.add(&x.b, &y.b),
        }
    }
    fn sub(&self, x: &Fp2, y: &Fp2) -> Fp2 {
        Fp2 {
            a: self.base.sub(&x.a, &y.a),
            b: self.base.sub(&x.b, &y.b),
        }
    }
    fn neg(&self, x: &Fp2) -> Fp2 {
        Fp2 {
            a: self.base.neg(&x.a),
            b: self.base.neg(&x.b),
        }
    }
    fn mul(&self, x: &Fp2, y: &Fp2) -> Fp2 {
        // (a + bt)(c + dt) = ac + q bd + (ad + bc) t
        let ac = self.base.mul(&x.a, &y.a);
        let bd = self.base.mul(&x.b, &y.b);
        let ad = self.base.mul(&x.a, &y.b);
        let bc = self.base.mul(&x.b, &y.a);
        Fp2 {
            a: self.base.add(&ac, &self.base.mul(&self.q, &bd)),
            b: self.base.add(&ad, &bc),
        }
    }
    fn inv(&self, x: &Fp2) -> Result<Fp2, FieldError> {
        if self.is_zero(x) {
            return Err(FieldError::DivisionByZero);
        }
        // (a + bt)^-1 = (a - bt) / (a^2 - q b^2)
        let norm = self.base.sub(
            &self.base.mul(&x.a, &x.a),
            &self.base.mul(&self.q, &self.base.mul(&x.b, &x.b)),
        );
        let ninv = self.base.inv(&norm)?;
        Ok(Fp2 {
            a: self.base.mul(&x.a, &ninv),
            b: self.base.mul(&self.base.neg(&x.b), &ninv),
        })
    }
    fn from_bigint(&self, n: &BigInt) -> Fp2 {
        self.embed_base(n)
    }
    fn characteristic(&self) -> BigInt {
        self.base.modulus().clone()
    }
    fn zeta(&self) -> Option<Fp2> {
        self.zeta.clone()
    }
}

// ---------------------------------------------------------------------------
// Machine-word prime field
// ---------------------------------------------------------------------------

/// F_p with p < 2^63, elements as bare u64. Same contract as [`PrimeField`];
/// used where enumeration or per-prime work would drown in allocations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WordField {
    p: u64,
    zeta: Option<u64>,
}

impl WordField {
    pub fn new(p: u64) -> Self {
        assert!(p > 1 && p < (1 << 63), "modulus out of range");
        let zeta = if p % 5 == 1 {
            let exp = (p - 1) / 5;
            let mut g = 2u64;
            loop {
                let z = pow_mod_u64(g % p, exp, p);
                if z != 1 {
                    break Some(z);
                }
                g += 1;
            }
        } else {
            None
        };
        WordField { p, zeta }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn sqrt(&self, a: u64) -> Option<u64> {
        let order = self.p - 1;
        tonelli_shanks(self, &a, &BigInt::from(order), || (2u64..).map(|c| c % self.p))
    }
}

pub fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    acc
}

impl Field for WordField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> Result<u64, FieldError> {
        if *a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        // p is prime, so Fermat suffices.
        Ok(pow_mod_u64(*a, self.p - 2, self.p))
    }
    fn from_bigint(&self, n: &BigInt) -> u64 {
        let r = n.mod_floor(&BigInt::from(self.p));
        let (_, digits) = r.to_u64_digits();
        digits.first().copied().unwrap_or(0)
    }
    fn characteristic(&self) -> BigInt {
        BigInt::from(self.p)
    }
    fn zeta(&self) -> Option<u64> {
        self.zeta
    }
}

// ---------------------------------------------------------------------------
// Machine-word quadratic extension
// ---------------------------------------------------------------------------

/// Element a + b*t of the word-size F_p^2.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct WordFp2 {
    pub a: u64,
    pub b: u64,
}

impl fmt::Debug for WordFp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}*t)", self.a, self.b)
    }
}

/// F_p^2 over a word-size prime, same construction as [`QuadExtField`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WordQuadExt {
    base: WordField,
    q: u64,
    zeta: Option<WordFp2>,
}

impl WordQuadExt {
    pub fn new(p: u64) -> Self {
        let base = WordField::new(p);
        let exp = (p - 1) / 2;
        let mut q = 2u64;
        while pow_mod_u64(q, exp, p) == 1 {
            q += 1;
        }
        let mut f = WordQuadExt {
            base,
            q,
            zeta: None,
        };
        let order = BigInt::from(p) * BigInt::from(p) - 1u32;
        if (&order % BigInt::from(5)).is_zero() {
            let e = &order / BigInt::from(5);
            let mut c = 0u64;
            f.zeta = loop {
                let cand = WordFp2 { a: c, b: 1 };
                let z = f.pow_bigint(&cand, &e);
                if z != f.one() {
                    break Some(z);
                }
                c += 1;
            };
        }
        f
    }

    pub fn modulus(&self) -> u64 {
        self.base.modulus()
    }

    pub fn nonresidue(&self) -> u64 {
        self.q
    }

    pub fn embed_base(&self, a: u64) -> WordFp2 {
        WordFp2 { a: a % self.modulus(), b: 0 }
    }

    pub fn project_base(&self, x: &WordFp2) -> Option<u64> {
        if x.b == 0 {
            Some(x.a)
        } else {
            None
        }
    }

    pub fn sqrt(&self, a: &WordFp2) -> Option<WordFp2> {
        let p = self.modulus();
        let order = BigInt::from(p) * BigInt::from(p) - 1u32;
        tonelli_shanks(self, a, &order, || {
            (0u64..).map(|c| WordFp2 { a: c % p, b: 1 })
        })
    }
}

impl Field for WordQuadExt {
    type Elem = WordFp2;

    fn zero(&self) -> WordFp2 {
        WordFp2 { a: 0, b: 0 }
    }
    fn one(&self) -> WordFp2 {
        WordFp2 { a: 1 % self.modulus(), b: 0 }
    }
    fn is_zero(&self, x: &WordFp2) -> bool {
        x.a == 0 && x.b == 0
    }
    fn add(&self, x: &WordFp2, y: &WordFp2) -> WordFp2 {
        WordFp2 {
            a: self.base.add(&x.a, &y.a),
            b: self.base.add(&x.b, &y.b),
        }
    }
    fn sub(&self, x: &WordFp2, y: &WordFp2) -> WordFp2 {
        WordFp2 {
            a: self.base.sub(&x.a, &y.a),
            b: self.base.sub(&x.b, &y.b),
        }
    }
    fn neg(&self, x: &WordFp2) -> WordFp2 {
        WordFp2 {
            a: self.base.neg(&x.a),
            b: self.base.neg(&x.b),
        }
    }
    fn mul(&self, x: &WordFp2, y: &WordFp2) -> WordFp2 {
        let ac = self.base.mul(&x.a, &y.a);
        let bd = self.base.mul(&x.b, &y.b);
        let ad = self.base.mul(&x.a, &y.b);
        let bc = self.base.mul(&x.b, &y.a);
        WordFp2 {
            a: self.base.add(&ac, &self.base.mul(&self.q, &bd)),
            b: self.base.add(&ad, &bc),
        }
    }
    fn inv(&self, x: &WordFp2) -> Result<WordFp2, FieldError> {
        if self.is_zero(x) {
            return Err(FieldError::DivisionByZero);
        }
        let norm = self.base.sub(
            &self.base.mul(&x.a, &x.a),
            &self.base.mul(&self.q, &self.base.mul(&x.b, &x.b)),
        );
        let ninv = self.base.inv(&norm)?;
        Ok(WordFp2 {
            a: self.base.mul(&x.a, &ninv),
            b: self.base.mul(&self.base.neg(&x.b), &ninv),
        })
    }
    fn from_bigint(&self, n: &BigInt) -> WordFp2 {
        self.embed_base(self.base.from_bigint(n))
    }
    fn characteristic(&self) -> BigInt {
        BigInt::from(self.modulus())
    }
    fn zeta(&self) -> Option<WordFp2> {
        self.zeta
    }
}

// ---------------------------------------------------------------------------
// Generic Tonelli-Shanks
// ---------------------------------------------------------------------------

/// Square root of `a` in a field whose multiplicative group has the given
/// order. `nonresidue_candidates` supplies a deterministic search sequence
/// for an element of the nonresidue class.
fn tonelli_shanks<F, I, G>(
    field: &F,
    a: &F::Elem,
    group_order: &BigInt,
    nonresidue_candidates: G,
) -> Option<F::Elem>
where
    F: Field,
    I: Iterator<Item = F::Elem>,
    G: Fn() -> I,
{
    if field.is_zero(a) {
        return Some(field.zero());
    }
    let half = group_order / 2;
    if field.pow_bigint(a, &half) != field.one() {
        return None;
    }
    // group_order = 2^s * q with q odd
    let mut s = 0u64;
    let mut q = group_order.clone();
    while q.is_even() {
        q /= 2;
        s += 1;
    }
    if s == 1 {
        // order = 2 mod 4: exponent (q+1)/2 with q = order/2 odd
        let e = (&q + 1) / 2;
        return Some(field.pow_bigint(a, &e));
    }
    // Find z of maximal 2-order.
    let mut z = field.one();
    for cand in nonresidue_candidates() {
        if field.is_zero(&cand) {
            continue;
        }
        if field.pow_bigint(&cand, &half) != field.one() {
            z = field.pow_bigint(&cand, &q);
            break;
        }
    }
    let mut m = s;
    let mut c = z;
    let mut t = field.pow_bigint(a, &q);
    let mut r = field.pow_bigint(a, &((&q + 1) / 2));
    loop {
        if t == field.one() {
            return Some(r);
        }
        // Least i with t^(2^i) = 1.
        let mut i = 0u64;
        let mut t2 = t.clone();
        while t2 != field.one() {
            t2 = field.square(&t2);
            i += 1;
            if i == m {
                return None;
            }
        }
        let mut b = c.clone();
        for _ in 0..(m - i - 1) {
            b = field.square(&b);
        }
        m = i;
        c = field.square(&b);
        t = field.mul(&t, &c);
        r = field.mul(&r, &b);
    }
}
