//! Divisor-class arithmetic on the Jacobian of y^2 = x^5 + h in Mumford
//! coordinates, over any [`Field`] context: Cantor composition/reduction,
//! the order-5 automorphism (x, y) -> (zeta*x, y), and Z[zeta]-endomorphisms
//! including real multiplication by sqrt(5) = 1 + 2*zeta^2 + 2*zeta^3.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::field::{Field, FieldError};
use crate::poly::Poly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("h must be nonzero in the field")]
    ZeroH,
    #[error("bad reduction: the field characteristic divides 10h")]
    BadReduction,
    #[error("point is not on the curve")]
    InvalidPoint,
    #[error("divisor is not in reduced Mumford form on this curve")]
    InvalidDivisor,
    #[error("field has no primitive 5th root of unity")]
    NoZetaInField,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A reduced Mumford divisor class <u, v>: u monic of degree <= 2,
/// deg v < max(deg u, 1), and u | f - v^2. The identity is <1, 0>.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MumfordDivisor<F: Field> {
    pub u: Poly<F>,
    pub v: Poly<F>,
}

impl<F: Field> MumfordDivisor<F> {
    pub fn degree(&self) -> usize {
        self.u.degree().unwrap_or(0)
    }

    pub fn is_identity(&self) -> bool {
        self.degree() == 0
    }
}

/// The curve y^2 = x^5 + h over a field context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve<F: Field> {
    field: F,
    h: F::Elem,
    f: Poly<F>,
}

/// An element a + b*zeta + c*zeta^2 + d*zeta^3 of Z[zeta] acting as an
/// endomorphism of the Jacobian.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicIntegerEndo {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl CyclotomicIntegerEndo {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        CyclotomicIntegerEndo {
            a: BigInt::from(a),
            b: BigInt::from(b),
            c: BigInt::from(c),
            d: BigInt::from(d),
        }
    }

    /// sqrt(5) = 1 + 2*zeta^2 + 2*zeta^3.
    pub fn sqrt5() -> Self {
        CyclotomicIntegerEndo::new(1, 0, 2, 2)
    }
}

impl<F: Field> Curve<F> {
    pub fn new(field: F, h: F::Elem) -> Result<Self, CurveError> {
        if field.is_zero(&h) {
            return Err(CurveError::ZeroH);
        }
        let p = field.characteristic();
        if !p.is_zero() {
            let two = BigInt::from(2);
            let five = BigInt::from(5);
            if p == two || p == five {
                return Err(CurveError::BadReduction);
            }
            // p | h would collapse the curve as well (h = 0 in the field was
            // already rejected by is_zero above, so nothing more to check).
        }
        let f = Poly::quintic_plus(&field, &h);
        Ok(Curve { field, h, f })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn h(&self) -> &F::Elem {
        &self.h
    }

    /// The curve polynomial f(X) = X^5 + h.
    pub fn f(&self) -> &Poly<F> {
        &self.f
    }

    pub fn identity(&self) -> MumfordDivisor<F> {
        MumfordDivisor {
            u: Poly::one(&self.field),
            v: Poly::zero(),
        }
    }

    pub fn is_on_curve(&self, x: &F::Elem, y: &F::Elem) -> bool {
        let fx = self.f.eval(&self.field, x);
        self.field.mul(y, y) == fx
    }

    /// The class [(x, y) - inf] as <X - x, y>.
    pub fn embed_point(&self, x: &F::Elem, y: &F::Elem) -> Result<MumfordDivisor<F>, CurveError> {
        if !self.is_on_curve(x, y) {
            return Err(CurveError::InvalidPoint);
        }
        Ok(MumfordDivisor {
            u: Poly::linear_monic(&self.field, x),
            v: Poly::constant(&self.field, y.clone()),
        })
    }

    /// Full reduced-form check: monic u of degree <= 2, deg v < max(deg u, 1),
    /// and u | f - v^2.
    pub fn check_divisor(&self, d: &MumfordDivisor<F>) -> Result<(), CurveError> {
        let f = &self.field;
        let udeg = match d.u.degree() {
            Some(x) if x <= 2 => x,
            _ => return Err(CurveError::InvalidDivisor),
        };
        if !d.u.is_monic(f) {
            return Err(CurveError::InvalidDivisor);
        }
        match d.v.degree() {
            None => {}
            Some(vd) if vd < udeg.max(1) => {}
            _ => return Err(CurveError::InvalidDivisor),
        }
        if udeg == 0 && !d.v.is_zero() {
            return Err(CurveError::InvalidDivisor);
        }
        let fv2 = self.f.sub(f, &d.v.mul(f, &d.v));
        if !fv2.rem(f, &d.u)?.is_zero() {
            return Err(CurveError::InvalidDivisor);
        }
        Ok(())
    }

    /// Hyperelliptic involution: <u, -v>.
    pub fn negate(&self, d: &MumfordDivisor<F>) -> MumfordDivisor<F> {
        MumfordDivisor {
            u: d.u.clone(),
            v: d.v.neg(&self.field),
        }
    }

    /// Cantor composition and reduction. Handles every reduced input:
    /// identity, degree-1, degree-2, shared support, Weierstrass points.
    pub fn add(&self, d1: &MumfordDivisor<F>, d2: &MumfordDivisor<F>) -> MumfordDivisor<F> {
        let f = &self.field;
        // Composition.
        let (g1, e1, e2) = d1.u.ext_gcd(f, &d2.u);
        let vsum = d1.v.add(f, &d2.v);
        let (g, c1, c2) = g1.ext_gcd(f, &vsum);
        // s1 = c1*e1, s2 = c1*e2, s3 = c2 with
        // g = s1*u1 + s2*u2 + s3*(v1+v2)
        let s1 = c1.mul(f, &e1);
        let s2 = c1.mul(f, &e2);
        let s3 = c2;

        let u1u2 = d1.u.mul(f, &d2.u);
        let gg = g.mul(f, &g);
        let mut u = u1u2.div_exact(f, &gg);

        // v = (s1*u1*v2 + s2*u2*v1 + s3*(v1*v2 + f)) / g  mod u
        let t1 = s1.mul(f, &d1.u).mul(f, &d2.v);
        let t2 = s2.mul(f, &d2.u).mul(f, &d1.v);
        let t3 = s3.mul(f, &d1.v.mul(f, &d2.v).add(f, &self.f));
        let num = t1.add(f, &t2).add(f, &t3);
        let mut v = num
            .div_exact(f, &g)
            .rem(f, &u)
            .expect("u is nonzero");

        // Reduction to degree <= 2.
        while u.degree().unwrap_or(0) > 2 {
            let fv2 = self.f.sub(f, &v.mul(f, &v));
            let unew = fv2.div_exact(f, &u);
            let unew = unew.make_monic(f).expect("nonzero by construction");
            let vnew = v
                .neg(f)
                .rem(f, &unew)
                .expect("nonzero modulus");
            u = unew;
            v = vnew;
        }
        let u = u.make_monic(f).expect("nonzero");
        let v = v.rem(f, &u).expect("nonzero");
        // Degree-0 classes are the identity; keep v = 0 there.
        if u.degree() == Some(0) {
            return self.identity();
        }
        MumfordDivisor { u, v }
    }

    pub fn double(&self, d: &MumfordDivisor<F>) -> MumfordDivisor<F> {
        self.add(d, d)
    }

    /// k-fold sum by double-and-add.
    pub fn scalar_mul(&self, d: &MumfordDivisor<F>, k: &BigUint) -> MumfordDivisor<F> {
        let bits = k.bits();
        if bits == 0 {
            return self.identity();
        }
        let mut acc = d.clone();
        for i in (0..bits - 1).rev() {
            acc = self.double(&acc);
            if k.bit(i) {
                acc = self.add(&acc, d);
            }
        }
        acc
    }

    pub fn scalar_mul_u64(&self, d: &MumfordDivisor<F>, k: u64) -> MumfordDivisor<F> {
        self.scalar_mul(d, &BigUint::from(k))
    }

    /// The automorphism [zeta^k]: substitutes X -> zeta^{-k} X in u and v
    /// and rescales u monic, realizing (x, y) -> (zeta^k x, y) on points.
    pub fn zeta_action(
        &self,
        d: &MumfordDivisor<F>,
        k: i64,
    ) -> Result<MumfordDivisor<F>, CurveError> {
        let f = &self.field;
        let zeta = f.zeta().ok_or(CurveError::NoZetaInField)?;
        let k = k.rem_euclid(5) as u64;
        if k == 0 || d.is_identity() {
            return Ok(d.clone());
        }
        let zk_inv = f.pow_u64(&zeta, 5 - k);
        let u = d
            .u
            .substitute_scaled_var(f, &zk_inv)
            .make_monic(f)
            .expect("monic input stays nonzero");
        let v = d.v.substitute_scaled_var(f, &zk_inv);
        Ok(MumfordDivisor { u, v })
    }

    /// [a + b*zeta + c*zeta^2 + d*zeta^3] D by combining the zeta action,
    /// scalar multiples and Cantor addition.
    pub fn apply_endo(
        &self,
        d: &MumfordDivisor<F>,
        e: &CyclotomicIntegerEndo,
    ) -> Result<MumfordDivisor<F>, CurveError> {
        let mut acc = self.identity();
        let coeffs = [&e.a, &e.b, &e.c, &e.d];
        for (k, coef) in coeffs.into_iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            let zd = self.zeta_action(d, k as i64)?;
            let term = self.scalar_mul(&zd, coef.magnitude());
            let term = if coef.is_negative() {
                self.negate(&term)
            } else {
                term
            };
            acc = self.add(&acc, &term);
        }
        Ok(acc)
    }

    /// Real multiplication by sqrt(5): D + 2*[zeta^2]D + 2*[zeta^3]D.
    pub fn sqrt5(&self, d: &MumfordDivisor<F>) -> Result<MumfordDivisor<F>, CurveError> {
        self.apply_endo(d, &CyclotomicIntegerEndo::sqrt5())
    }
}
