//! Dense univariate polynomials over a [`Field`] context, sized for the
//! degree-5 Cantor arithmetic (everything here stays below degree 10).

use crate::field::{Field, FieldError};

/// Coefficients ascending, no trailing zeros. The zero polynomial has an
/// empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<F: Field> {
    coeffs: Vec<F::Elem>,
}

impl<F: Field> Poly<F> {
    pub fn new(field: &F, mut coeffs: Vec<F::Elem>) -> Self {
        while let Some(last) = coeffs.last() {
            if field.is_zero(last) {
                coeffs.pop();
            } else {
                break;
            }
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one(field: &F) -> Self {
        Poly {
            coeffs: vec![field.one()],
        }
    }

    pub fn constant(field: &F, c: F::Elem) -> Self {
        Poly::new(field, vec![c])
    }

    /// X - r
    pub fn linear_monic(field: &F, r: &F::Elem) -> Self {
        Poly {
            coeffs: vec![field.neg(r), field.one()],
        }
    }

    /// X^5 + h, the curve polynomial.
    pub fn quintic_plus(field: &F, h: &F::Elem) -> Self {
        let mut c = vec![field.zero(); 6];
        c[0] = h.clone();
        c[5] = field.one();
        Poly::new(field, c)
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, field: &F, i: usize) -> F::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with deg 0 for nonzero constants; `None` for the zero poly.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&F::Elem> {
        self.coeffs.last()
    }

    pub fn is_monic(&self, field: &F) -> bool {
        match self.leading() {
            Some(l) => *l == field.one(),
            None => false,
        }
    }

    pub fn add(&self, field: &F, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(field.add(&self.coeff(field, i), &rhs.coeff(field, i)));
        }
        Poly::new(field, out)
    }

    pub fn sub(&self, field: &F, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(field.sub(&self.coeff(field, i), &rhs.coeff(field, i)));
        }
        Poly::new(field, out)
    }

    pub fn neg(&self, field: &F) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| field.neg(c)).collect(),
        }
    }

    pub fn mul(&self, field: &F, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if field.is_zero(a) {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if field.is_zero(b) {
                    continue;
                }
                out[i + j] = field.add(&out[i + j], &field.mul(a, b));
            }
        }
        Poly::new(field, out)
    }

    pub fn scale(&self, field: &F, c: &F::Elem) -> Self {
        Poly::new(
            field,
            self.coeffs.iter().map(|a| field.mul(a, c)).collect(),
        )
    }

    /// Euclidean division; the divisor must be nonzero.
    pub fn divmod(&self, field: &F, div: &Self) -> Result<(Self, Self), FieldError> {
        let dlead = div.leading().ok_or(FieldError::DivisionByZero)?;
        let dinv = field.inv(dlead)?;
        let ddeg = div.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() < div.coeffs.len() {
            return Ok((Poly::zero(), self.clone()));
        }
        let qlen = rem.len() - ddeg;
        let mut quot = vec![field.zero(); qlen];
        for k in (0..qlen).rev() {
            let lead = rem[k + ddeg].clone();
            if field.is_zero(&lead) {
                continue;
            }
            let q = field.mul(&lead, &dinv);
            for (i, dc) in div.coeffs.iter().enumerate() {
                rem[k + i] = field.sub(&rem[k + i], &field.mul(&q, dc));
            }
            quot[k] = q;
        }
        Ok((Poly::new(field, quot), Poly::new(field, rem)))
    }

    pub fn rem(&self, field: &F, div: &Self) -> Result<Self, FieldError> {
        Ok(self.divmod(field, div)?.1)
    }

    /// Exact division; panics if a remainder is left (caller invariant).
    pub fn div_exact(&self, field: &F, div: &Self) -> Self {
        let (q, r) = self.divmod(field, div).expect("division by zero poly");
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn make_monic(&self, field: &F) -> Result<Self, FieldError> {
        let lead = self.leading().ok_or(FieldError::DivisionByZero)?;
        if *lead == field.one() {
            return Ok(self.clone());
        }
        let linv = field.inv(lead)?;
        Ok(self.scale(field, &linv))
    }

    pub fn eval(&self, field: &F, x: &F::Elem) -> F::Elem {
        let mut acc = field.zero();
        for c in self.coeffs.iter().rev() {
            acc = field.add(&field.mul(&acc, x), c);
        }
        acc
    }

    /// Substitute X -> c*X.
    pub fn substitute_scaled_var(&self, field: &F, c: &F::Elem) -> Self {
        let mut pow = field.one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for coef in &self.coeffs {
            out.push(field.mul(coef, &pow));
            pow = field.mul(&pow, c);
        }
        Poly::new(field, out)
    }

    /// Monic extended gcd: returns (g, s, t) with s*self + t*rhs = g and g
    /// monic (or zero when both inputs are zero).
    pub fn ext_gcd(&self, field: &F, rhs: &Self) -> (Self, Self, Self) {
        let mut r0 = self.clone();
        let mut r1 = rhs.clone();
        let mut s0 = Poly::one(field);
        let mut s1 = Poly::zero();
        let mut t0 = Poly::zero();
        let mut t1 = Poly::one(field);
        while !r1.is_zero() {
            let (q, r) = r0.divmod(field, &r1).expect("nonzero divisor");
            let s = s0.sub(field, &q.mul(field, &s1));
            let t = t0.sub(field, &q.mul(field, &t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let lead = r0.leading().unwrap().clone();
        if lead == field.one() {
            (r0, s0, t0)
        } else {
            let linv = field.inv(&lead).expect("nonzero leading coefficient");
            (
                r0.scale(field, &linv),
                s0.scale(field, &linv),
                t0.scale(field, &linv),
            )
        }
    }
}
