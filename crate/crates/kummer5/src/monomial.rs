//! The fixed monomial order shared by the interpolation, the modular
//! iteration and the file format: exponent tuples (e0,e1,e2,e3) summing to
//! N, sorted lexicographically descending, so x0^N comes first and x3^N
//! last. M(5) = 56.

/// Number of degree-n monomials in four variables: C(n+3, 3).
pub fn monomial_count(n: u32) -> usize {
    let n = n as usize;
    (n + 1) * (n + 2) * (n + 3) / 6
}

/// All exponent tuples of total degree `n`, lex-descending.
pub fn monomials(n: u32) -> Vec<[u8; 4]> {
    let n = n as i32;
    let mut out = Vec::with_capacity(monomial_count(n as u32));
    for e0 in (0..=n).rev() {
        for e1 in (0..=n - e0).rev() {
            for e2 in (0..=n - e0 - e1).rev() {
                let e3 = n - e0 - e1 - e2;
                out.push([e0 as u8, e1 as u8, e2 as u8, e3 as u8]);
            }
        }
    }
    out
}

/// Index of one exponent tuple in [`monomials`] order.
pub fn monomial_index(n: u32, e: [u8; 4]) -> usize {
    monomials(n)
        .iter()
        .position(|m| *m == e)
        .expect("exponent tuple of the right degree")
}

/// Evaluate every degree-`n` monomial at a point, sharing products: each
/// degree-d monomial is one multiplication on top of a degree-(d-1) one.
/// `mul` is the ring multiplication; the ring need not be a field.
pub fn eval_monomials<T: Clone>(
    vars: &[T; 4],
    n: u32,
    one: T,
    mul: impl Fn(&T, &T) -> T,
) -> Vec<T> {
    if n == 0 {
        return vec![one];
    }
    // Level d holds values in monomials(d) order.
    let mut level: Vec<T> = vec![one];
    let mut exps: Vec<[u8; 4]> = vec![[0, 0, 0, 0]];
    for d in 1..=n {
        let next_exps = monomials(d);
        let mut next: Vec<T> = Vec::with_capacity(next_exps.len());
        for e in &next_exps {
            // Divide by the last variable with a positive exponent; the
            // quotient is a degree-(d-1) monomial already computed.
            let var = (0..4).rev().find(|&i| e[i] > 0).unwrap();
            let mut prev = *e;
            prev[var] -= 1;
            let idx = exps.iter().position(|x| *x == prev).unwrap();
            next.push(mul(&level[idx], &vars[var]));
        }
        level = next;
        exps = next_exps;
    }
    level
}
