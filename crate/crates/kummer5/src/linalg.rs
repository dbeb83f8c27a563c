//! Exact integer kernel computation, two ways: fraction-free (Bareiss)
//! elimination for small systems, and a multi-modular path (row reduction
//! mod word-size primes, CRT, rational reconstruction, exact verification)
//! for the production-size interpolation systems. Both produce the same
//! canonical kernel basis: for each free column f of the lex-first pivot
//! set, the primitive integer vector with positive entry at f and zeros at
//! the other free columns.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{primes_below, rational_reconstruct, CrtAccumulator};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("kernel reconstruction did not stabilize within the prime budget")]
    ReconstructionFailed,
    #[error("empty system")]
    EmptySystem,
}

/// Dense integer matrix, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<BigInt>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }

    pub fn max_bits(&self) -> u64 {
        self.data.iter().map(|x| x.bits()).max().unwrap_or(0)
    }

    /// M * x over the integers.
    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = BigInt::zero();
                for c in 0..self.cols {
                    let m = self.at(r, c);
                    if !m.is_zero() && !x[c].is_zero() {
                        acc += m * &x[c];
                    }
                }
                acc
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelStrategy {
    /// Fraction-free elimination over the integers.
    Exact,
    /// Row reduction modulo word-size primes with CRT + rational
    /// reconstruction, verified exactly at the end.
    Modular,
    /// Exact for small matrices, modular otherwise.
    Auto,
}

/// Canonical primitive integer kernel basis of the matrix.
pub fn kernel(mat: &IntMat, strategy: KernelStrategy) -> Result<Vec<Vec<BigInt>>, LinalgError> {
    if mat.rows == 0 || mat.cols == 0 {
        return Err(LinalgError::EmptySystem);
    }
    match strategy {
        KernelStrategy::Exact => Ok(kernel_exact(mat)),
        KernelStrategy::Modular => kernel_modular(mat),
        KernelStrategy::Auto => {
            if mat.rows * mat.cols <= 40_000 && mat.max_bits() <= 96 {
                Ok(kernel_exact(mat))
            } else {
                kernel_modular(mat)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Exact path
// ---------------------------------------------------------------------------

/// Bareiss fraction-free forward elimination, then rational back-substitution
/// into the canonical kernel basis.
pub fn kernel_exact(mat: &IntMat) -> Vec<Vec<BigInt>> {
    let mut m = mat.clone();
    let rows = m.rows;
    let cols = m.cols;
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut prev = BigInt::one();
    let mut rank = 0usize;
    for col in 0..cols {
        // find pivot row
        let piv = (rank..rows).find(|&r| !m.at(r, col).is_zero());
        let Some(piv) = piv else { continue };
        if piv != rank {
            for c in 0..cols {
                let a = m.at(piv, c).clone();
                let b = m.at(rank, c).clone();
                *m.at_mut(piv, c) = b;
                *m.at_mut(rank, c) = a;
            }
        }
        let pivot = m.at(rank, col).clone();
        for r in (rank + 1)..rows {
            let factor = m.at(r, col).clone();
            if factor.is_zero() {
                // still divide the untouched row by prev per Bareiss? No:
                // rows with zero factor still need the scaling step applied
                // to stay on the fraction-free invariant.
            }
            for c in (col + 1)..cols {
                let val = &pivot * m.at(r, c) - &factor * m.at(rank, c);
                let (q, rem) = val.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                *m.at_mut(r, c) = q;
            }
            *m.at_mut(r, col) = BigInt::zero();
        }
        prev = pivot;
        pivot_cols.push(col);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    kernel_from_echelon_rational(&m, rank, &pivot_cols)
}

/// Back-substitute an integer row-echelon form into the canonical kernel.
fn kernel_from_echelon_rational(
    m: &IntMat,
    rank: usize,
    pivot_cols: &[usize],
) -> Vec<Vec<BigInt>> {
    let cols = m.cols;
    let pivot_set: Vec<bool> = {
        let mut s = vec![false; cols];
        for &c in pivot_cols {
            s[c] = true;
        }
        s
    };
    let free_cols: Vec<usize> = (0..cols).filter(|&c| !pivot_set[c]).collect();
    let mut basis = Vec::with_capacity(free_cols.len());
    for &f in &free_cols {
        let mut x = vec![BigRational::zero(); cols];
        x[f] = BigRational::one();
        for i in (0..rank).rev() {
            let pc = pivot_cols[i];
            let mut acc = BigRational::zero();
            for c in (pc + 1)..cols {
                let mc = m.at(i, c);
                if !mc.is_zero() && !x[c].is_zero() {
                    acc += BigRational::from_integer(mc.clone()) * &x[c];
                }
            }
            if !acc.is_zero() {
                x[pc] = -acc / BigRational::from_integer(m.at(i, pc).clone());
            }
        }
        basis.push(primitive_integer_vector(&x, f));
    }
    basis
}

/// Clear denominators, divide content, make the entry at `sign_col`
/// positive.
fn primitive_integer_vector(x: &[BigRational], sign_col: usize) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for v in x {
        lcm = lcm.lcm(v.denom());
    }
    let mut ints: Vec<BigInt> = x.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
    let mut content = BigInt::zero();
    for v in &ints {
        content = content.gcd(v);
    }
    if content.is_zero() {
        return ints;
    }
    if ints[sign_col].is_negative() {
        content = -content;
    }
    for v in ints.iter_mut() {
        *v = &*v / &content;
    }
    ints
}

// ---------------------------------------------------------------------------
// Modular path
// ---------------------------------------------------------------------------

struct ModKernel {
    p: u64,
    pivot_cols: Vec<usize>,
    /// kernel vectors in canonical form, one per free column, entries mod p
    vectors: Vec<Val>,
}

type Val = Vec<u64>;

fn rref_kernel_mod_p(mat: &IntMat, p: u64) -> ModKernel {
    let rows = mat.rows;
    let cols = mat.cols;
    let pb = BigInt::from(p);
    let mut m: Vec<Vec<u64>> = (0..rows)
        .map(|r| {
            (0..cols)
                .map(|c| {
                    let v = mat.at(r, c).mod_floor(&pb);
                    let (_, d) = v.to_u64_digits();
                    d.first().copied().unwrap_or(0)
                })
                .collect()
        })
        .collect();
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let submod = |a: u64, b: u64| if a >= b { a - b } else { a + p - b };
    let mut pivot_cols = Vec::new();
    let mut rank = 0usize;
    for col in 0..cols {
        let piv = (rank..rows).find(|&r| m[r][col] != 0);
        let Some(piv) = piv else { continue };
        m.swap(rank, piv);
        let inv = crate::field::pow_mod_u64(m[rank][col], p - 2, p);
        for c in col..cols {
            m[rank][c] = mulmod(m[rank][c], inv);
        }
        for r in 0..rows {
            if r != rank && m[r][col] != 0 {
                let f = m[r][col];
                for c in col..cols {
                    let t = mulmod(f, m[rank][c]);
                    m[r][c] = submod(m[r][c], t);
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    let pivot_set: Vec<bool> = {
        let mut s = vec![false; cols];
        for &c in &pivot_cols {
            s[c] = true;
        }
        s
    };
    let free_cols: Vec<usize> = (0..cols).filter(|&c| !pivot_set[c]).collect();
    let mut vectors = Vec::with_capacity(free_cols.len());
    for &f in &free_cols {
        let mut x = vec![0u64; cols];
        x[f] = 1;
        for (i, &pc) in pivot_cols.iter().enumerate() {
            // row i: x[pc] + sum over free c of m[i][c] * x[c] = 0
            let v = m[i][f];
            x[pc] = if v == 0 { 0 } else { p - v };
        }
        vectors.push(x);
    }
    ModKernel {
        p,
        pivot_cols,
        vectors,
    }
}

/// Multi-modular kernel with exact verification. Deterministic: primes are
/// drawn from a fixed descending sequence and merged in fixed batches.
pub fn kernel_modular(mat: &IntMat) -> Result<Vec<Vec<BigInt>>, LinalgError> {
    const BATCH: usize = 4;
    const MAX_PRIMES: usize = 160;
    let mut prime_iter = primes_below(1 << 62);
    let mut reference: Option<ModKernel> = None;
    let mut acc: Vec<Vec<CrtAccumulator>> = Vec::new();
    let mut used = 0usize;
    while used < MAX_PRIMES {
        let batch: Vec<u64> = (&mut prime_iter).take(BATCH).collect();
        if batch.is_empty() {
            break;
        }
        used += batch.len();
        let kernels: Vec<ModKernel> = batch
            .par_iter()
            .map(|&p| rref_kernel_mod_p(mat, p))
            .collect();
        for k in kernels {
            match &reference {
                None => {
                    acc = k
                        .vectors
                        .iter()
                        .map(|v| {
                            v.iter()
                                .map(|&e| {
                                    CrtAccumulator::new(BigInt::from(e), BigInt::from(k.p))
                                })
                                .collect()
                        })
                        .collect();
                    reference = Some(k);
                }
                Some(r) => {
                    if r.pivot_cols != k.pivot_cols {
                        // One of the primes is unlucky. Prefer the larger
                        // rank (a rank drop can only lose pivots); on equal
                        // rank keep the incumbent and skip the newcomer.
                        if k.pivot_cols.len() > r.pivot_cols.len() {
                            acc = k
                                .vectors
                                .iter()
                                .map(|v| {
                                    v.iter()
                                        .map(|&e| {
                                            CrtAccumulator::new(
                                                BigInt::from(e),
                                                BigInt::from(k.p),
                                            )
                                        })
                                        .collect()
                                })
                                .collect();
                            reference = Some(k);
                        }
                        continue;
                    }
                    for (av, kv) in acc.iter_mut().zip(k.vectors.iter()) {
                        for (a, &e) in av.iter_mut().zip(kv.iter()) {
                            a.push(e, k.p);
                        }
                    }
                }
            }
        }
        // Attempt reconstruction.
        if let Some(r) = &reference {
            if let Some(result) = try_reconstruct(mat, r, &acc) {
                return Ok(result);
            }
        }
    }
    Err(LinalgError::ReconstructionFailed)
}

fn try_reconstruct(
    mat: &IntMat,
    reference: &ModKernel,
    acc: &[Vec<CrtAccumulator>],
) -> Option<Vec<Vec<BigInt>>> {
    let pivot_set: Vec<bool> = {
        let mut s = vec![false; mat.cols];
        for &c in &reference.pivot_cols {
            s[c] = true;
        }
        s
    };
    let free_cols: Vec<usize> = (0..mat.cols).filter(|&c| !pivot_set[c]).collect();
    let mut out = Vec::with_capacity(acc.len());
    for (vec_acc, &f) in acc.iter().zip(free_cols.iter()) {
        let mut rat = vec![BigRational::zero(); mat.cols];
        for (c, a) in vec_acc.iter().enumerate() {
            if a.residue.is_zero() {
                continue;
            }
            let (n, d) = rational_reconstruct(&a.residue, &a.modulus)?;
            rat[c] = BigRational::new(n, d);
        }
        let ints = primitive_integer_vector(&rat, f);
        // exact check
        if mat.apply(&ints).iter().any(|v| !v.is_zero()) {
            return None;
        }
        out.push(ints);
    }
    Some(out)
}
