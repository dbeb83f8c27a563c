//! Precomputation drivers tying the library together: start-vector
//! computation (exact over Q, or multi-modular with projective rational
//! reconstruction and fresh-prime verification), map synthesis, and the
//! scan loop that tries seed packs in order for a range of n.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{primes_below, rational_reconstruct, CrtAccumulator};
use crate::certify::{certify, validate_task, CertificationTask, TaskCheck, TaskError, Verdict};
use crate::field::{Field, Rationals, WordField};
use crate::files::{SeedPack, StartVector};
use crate::genus2::{Curve, CurveError};
use crate::kummer::{kappa, kappa_canonical_q, projectively_equal};
use crate::sqrt5::{synthesize_sqrt5_map, Sqrt5Map, SynthConfig, SynthError, ValidationReport};

/// Beyond this the coordinate count (about 16 m^4 h_can(Q0) / ln 10 digits,
/// observed 8 / 114 / 579 digits at m = 1, 2, 3 for the h = 2 seed) makes
/// offline precomputation pointless.
pub const MAX_START_VECTOR_M: u64 = 32;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(
        "m = {0} exceeds the supported cap {MAX_START_VECTOR_M}: coordinate sizes grow like \
         16 m^4 / ln(10) digits times the seed height, so the vector would not be practical"
    )]
    MTooLarge(u64),
    #[error("seed point is not on the curve: beta^2 != alpha^5 + h")]
    SeedNotOnCurve,
    #[error("start-vector reconstruction did not stabilize")]
    ReconstructionFailed,
    #[error("pack {index} has m = {pack_m}, task has m = {task_m}")]
    PackMMismatch { index: usize, pack_m: u64, task_m: u64 },
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    File(#[from] crate::files::FileError),
    #[error(transparent)]
    Task(#[from] TaskError),
}

// ---------------------------------------------------------------------------
// Start vectors
// ---------------------------------------------------------------------------

fn check_seed(h: &BigInt, alpha: &BigInt, beta: &BigInt) -> Result<(), PipelineError> {
    if beta * beta != alpha.pow(5) + h {
        return Err(PipelineError::SeedNotOnCurve);
    }
    Ok(())
}

/// kappa(4 m^2 [Q0 - inf]) over Q, canonicalized to coprime integers.
/// Exact reference path; cost grows quartically with m.
pub fn compute_start_vector_exact(
    h: &BigInt,
    alpha: &BigInt,
    beta: &BigInt,
    m: u64,
) -> Result<StartVector, PipelineError> {
    check_seed(h, alpha, beta)?;
    if m == 0 || m > MAX_START_VECTOR_M {
        return Err(PipelineError::MTooLarge(m));
    }
    let q = Rationals;
    let curve = Curve::new(q, q.from_bigint(h))?;
    let q0 = curve.embed_point(&q.from_bigint(alpha), &q.from_bigint(beta))?;
    let p0 = curve.scalar_mul(&q0, &BigUint::from(4 * m * m));
    let coords = kappa_canonical_q(&curve, &p0);
    Ok(StartVector {
        h: h.clone(),
        alpha: alpha.clone(),
        beta: beta.clone(),
        m,
        coords,
    })
}

/// Per-prime image of the canonical vector, up to a scalar.
fn start_vector_mod_p(
    h: &BigInt,
    alpha: &BigInt,
    beta: &BigInt,
    k: u64,
    p: u64,
) -> Option<[u64; 4]> {
    let f = WordField::new(p);
    let hp = f.from_bigint(h);
    if hp == 0 {
        return None;
    }
    let curve = Curve::new(f, hp).ok()?;
    let x = f.from_bigint(alpha);
    let y = f.from_bigint(beta);
    let q0 = curve.embed_point(&x, &y).ok()?;
    let p0 = curve.scalar_mul_u64(&q0, k);
    Some(kappa(&curve, &p0).x)
}

/// Multi-modular start vector: compute the Kummer image modulo a stream of
/// word-size primes, reconstruct the coordinate ratios by CRT + rational
/// reconstruction, rescale to the canonical coprime-integer vector, and
/// verify against fresh primes. Bit-identical to the exact path.
///
/// The prime budget is estimated from the exact m = 1 vector: the
/// canonical height is quadratic in the multiplier, so coordinate sizes
/// scale like m^4.
pub fn compute_start_vector(
    h: &BigInt,
    alpha: &BigInt,
    beta: &BigInt,
    m: u64,
) -> Result<StartVector, PipelineError> {
    check_seed(h, alpha, beta)?;
    if m == 0 || m > MAX_START_VECTOR_M {
        return Err(PipelineError::MTooLarge(m));
    }
    if m == 1 {
        return compute_start_vector_exact(h, alpha, beta, 1);
    }
    let base = compute_start_vector_exact(h, alpha, beta, 1)?;
    let digits_m1 = base
        .coords
        .iter()
        .map(|c| c.magnitude().to_string().len())
        .max()
        .unwrap();
    let predicted_digits = digits_m1 * (m as usize).pow(4) + 16;
    // ratio reconstruction needs the modulus past 2 * |x_i| * |x_pivot|
    let needed_bits = (2.0 * predicted_digits as f64 * std::f64::consts::LOG2_10) + 128.0;
    let mut target_primes = (needed_bits / 61.9 * 1.05) as usize + 16;

    let k = 4 * m * m;
    let mut primes = primes_below(1 << 62);
    let (first_p, first_v) = loop {
        let p = primes.next().expect("prime stream is unbounded");
        if let Some(v) = start_vector_mod_p(h, alpha, beta, k, p) {
            break (p, v);
        }
    };
    // pivot: the last coordinate that is nonzero for the first good prime
    let pivot = (0..4)
        .rev()
        .find(|&i| first_v[i] != 0)
        .expect("projective point");
    let f1 = WordField::new(first_p);
    let pinv = f1.inv(&first_v[pivot]).unwrap();
    let mut acc: Vec<CrtAccumulator> = (0..4)
        .map(|i| {
            CrtAccumulator::new(BigInt::from(f1.mul(&first_v[i], &pinv)), BigInt::from(first_p))
        })
        .collect();
    let mut collected = 1usize;

    const BATCH: usize = 256;
    for _attempt in 0..16 {
        // gather primes up to the current target
        while collected < target_primes {
            let want = BATCH.min(target_primes - collected);
            let batch: Vec<u64> = (&mut primes).take(want).collect();
            let results: Vec<(u64, [u64; 4])> = batch
                .par_iter()
                .filter_map(|&p| start_vector_mod_p(h, alpha, beta, k, p).map(|v| (p, v)))
                .collect();
            let mut normalized: Vec<[(u64, u64); 4]> = Vec::with_capacity(results.len());
            for (p, v) in results {
                if v[pivot] == 0 {
                    continue; // p divides the pivot coordinate
                }
                let f = WordField::new(p);
                let pinv = f.inv(&v[pivot]).unwrap();
                let mut row = [(0u64, p); 4];
                for i in 0..4 {
                    row[i] = (f.mul(&v[i], &pinv), p);
                }
                normalized.push(row);
                collected += 1;
            }
            acc.par_iter_mut().enumerate().for_each(|(i, a)| {
                let batch_i: Vec<(u64, u64)> = normalized.iter().map(|row| row[i]).collect();
                a.push_batch(&batch_i);
            });
        }
        // reconstruction: probe one non-pivot coordinate first
        let probe = (0..4).find(|&i| i != pivot).unwrap();
        let candidate = if rational_reconstruct(&acc[probe].residue, &acc[probe].modulus)
            .is_some()
        {
            let ratios: Option<Vec<(BigInt, BigInt)>> = acc
                .par_iter()
                .map(|a| rational_reconstruct(&a.residue, &a.modulus))
                .collect();
            ratios.and_then(|ratios| {
                let mut lcm = BigInt::one();
                for (_, d) in &ratios {
                    lcm = lcm.lcm(d);
                }
                let mut ints: Vec<BigInt> =
                    ratios.iter().map(|(n, d)| n * (&lcm / d)).collect();
                let mut content = BigInt::zero();
                for v in &ints {
                    content = content.gcd(v);
                }
                if content.is_zero() {
                    return None;
                }
                let last = ints.iter().rev().find(|v| !v.is_zero()).unwrap();
                if last.is_negative() {
                    content = -content;
                }
                for v in ints.iter_mut() {
                    *v = &*v / &content;
                }
                Some([
                    ints[0].clone(),
                    ints[1].clone(),
                    ints[2].clone(),
                    ints[3].clone(),
                ])
            })
        } else {
            None
        };
        if let Some(candidate) = candidate {
            // verify against fresh primes
            let fresh: Vec<u64> = (&mut primes).take(3).collect();
            let mut verified = 0;
            let mut failed = false;
            for p in fresh {
                let Some(v) = start_vector_mod_p(h, alpha, beta, k, p) else {
                    continue;
                };
                let f = WordField::new(p);
                let reduced = candidate.clone().map(|c| f.from_bigint(&c));
                if !projectively_equal(&f, &reduced, &v) {
                    failed = true;
                    break;
                }
                verified += 1;
            }
            if !failed && verified >= 2 {
                let sv = StartVector {
                    h: h.clone(),
                    alpha: alpha.clone(),
                    beta: beta.clone(),
                    m,
                    coords: candidate,
                };
                sv.check_invariants()?;
                return Ok(sv);
            }
        }
        target_primes += target_primes / 2;
    }
    Err(PipelineError::ReconstructionFailed)
}

// ---------------------------------------------------------------------------
// Map synthesis + pack assembly
// ---------------------------------------------------------------------------

/// Synthesize and validate the degree-N map for the seed curve.
pub fn precompute_map(
    h: &BigInt,
    alpha: &BigInt,
    beta: &BigInt,
    config: &SynthConfig,
) -> Result<(Sqrt5Map, ValidationReport), PipelineError> {
    check_seed(h, alpha, beta)?;
    Ok(synthesize_sqrt5_map(h, alpha, beta, config)?)
}

/// Build a full seed pack (map + start vector) in memory.
pub fn build_seed_pack(
    h: &BigInt,
    alpha: &BigInt,
    beta: &BigInt,
    m: u64,
    config: &SynthConfig,
) -> Result<SeedPack, PipelineError> {
    let (map, _) = precompute_map(h, alpha, beta, config)?;
    let start = compute_start_vector(h, alpha, beta, m)?;
    Ok(SeedPack::assemble(map, start)?)
}

// ---------------------------------------------------------------------------
// Scan
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub enum ScanOutcome {
    /// certified by the pack at this index (None: no pack involved, e.g.
    /// the even-n factorization)
    Decided {
        verdict: Verdict,
        pack_index: Option<usize>,
    },
    /// every pack returned unknown; the last unknown verdict is kept
    AllUnknown { verdict: Verdict },
    /// the task does not run for this n (bound violated etc.)
    Skipped { reason: String },
}

#[derive(Clone, Debug)]
pub struct ScanRow {
    pub n: u64,
    pub lambda: BigInt,
    pub outcome: ScanOutcome,
}

/// Certify one task against packs in order until a decisive verdict.
pub fn certify_with_packs(
    task: &CertificationTask,
    packs: &[SeedPack],
) -> Result<(Verdict, Option<usize>), PipelineError> {
    use crate::certify::Outcome;
    let mut last: Option<Verdict> = None;
    for (i, pack) in packs.iter().enumerate() {
        if pack.start.m != task.m {
            return Err(PipelineError::PackMMismatch {
                index: i,
                pack_m: pack.start.m,
                task_m: task.m,
            });
        }
        let v = certify(task, &pack.map, &pack.start.coords);
        match v.outcome {
            Outcome::Unknown { .. } => last = Some(v),
            _ => return Ok((v, Some(i))),
        }
    }
    Ok((last.expect("at least one pack"), None))
}

/// Scan n in [n_from, n_to): even n short-circuit to the factorization,
/// odd n run through the packs. Rows come back ordered by n.
pub fn scan(
    m: u64,
    n_from: u64,
    n_to: u64,
    packs: &[SeedPack],
) -> Result<Vec<ScanRow>, PipelineError> {
    use crate::certify::Outcome;
    assert!(!packs.is_empty(), "scan needs at least one pack");
    for pack in packs {
        if pack.start.m != m {
            return Err(PipelineError::PackMMismatch {
                index: 0,
                pack_m: pack.start.m,
                task_m: m,
            });
        }
    }
    let ns: Vec<u64> = (n_from..n_to).collect();
    let rows: Vec<ScanRow> = ns
        .par_iter()
        .map(|&n| {
            let lambda = crate::certify::lambda_value(m, n);
            let outcome = match validate_task(m, n) {
                Err(e) => ScanOutcome::Skipped {
                    reason: e.to_string(),
                },
                Ok(TaskCheck::EvenComposite { factors }) => ScanOutcome::Decided {
                    verdict: Verdict {
                        outcome: Outcome::Composite {
                            factor: Some(factors.0),
                        },
                        r: 0,
                        t_safe: 0,
                        wall: std::time::Duration::ZERO,
                    },
                    pack_index: None,
                },
                Ok(TaskCheck::Task(task)) => match certify_with_packs(&task, packs) {
                    Err(e) => ScanOutcome::Skipped {
                        reason: e.to_string(),
                    },
                    Ok((verdict, Some(i))) => ScanOutcome::Decided {
                        verdict,
                        pack_index: Some(i),
                    },
                    Ok((verdict, None)) => ScanOutcome::AllUnknown { verdict },
                },
            };
            ScanRow { n, lambda, outcome }
        })
        .collect();
    Ok(rows)
}

/// The n for which the scan proved primality.
pub fn primes_found(rows: &[ScanRow]) -> Vec<u64> {
    use crate::certify::Outcome;
    rows.iter()
        .filter_map(|row| match &row.outcome {
            ScanOutcome::Decided { verdict, .. } if verdict.outcome == Outcome::Prime => {
                Some(row.n)
            }
            _ => None,
        })
        .collect()
}
