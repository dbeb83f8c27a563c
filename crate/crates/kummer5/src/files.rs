//! Bit-exact text formats for the precomputed artifacts: the coefficient
//! table of the degree-N map (`kummer-sqrt5-map/1`), the start vector
//! (`kummer-start-vector/1`), one-line verdict records, and seed-pack
//! directories consumed by the scan driver. Big integers are decimal
//! strings with an optional leading minus; every file carries a sha256
//! content hash over its canonical bytes.

use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::certify::Verdict;
use crate::monomial::monomial_count;
use crate::sqrt5::Sqrt5Map;

pub const MAP_FORMAT: &str = "kummer-sqrt5-map/1";
pub const START_FORMAT: &str = "kummer-start-vector/1";
pub const VERDICT_FORMAT: &str = "kummer-verdict/1";
pub const MONOMIAL_ORDER_TAG: &str = "lex-desc-e0e1e2e3";
/// kappa convention note: quintic model, identity at (0:0:0:1),
/// coordinates (1 : x1+x2 : x1 x2 : b0); no permutation applied.
pub const KAPPA_CONVENTION: &str = "quintic-cassels-flynn identity=(0:0:0:1)";

#[derive(Debug, Error)]
pub enum FileError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("unsupported format version {0:?}")]
    UnknownVersion(String),
    #[error("content hash mismatch (file corrupt or edited)")]
    HashMismatch,
    #[error("invariant violated: {0}")]
    Invariant(String),
}

fn sha256_hex(payload: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(payload.as_bytes());
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        let _ = write!(out, "{b:02x}");
    }
    out
}

// ---------------------------------------------------------------------------
// Map file
// ---------------------------------------------------------------------------

/// Serialize a map. Layout: header key-value lines, the hash line, then
/// one coefficient line per form in the shared monomial order.
pub fn map_to_string(map: &Sqrt5Map) -> String {
    let mut body = String::new();
    let _ = writeln!(body, "format: {MAP_FORMAT}");
    let _ = writeln!(body, "h: {}", map.h);
    let _ = writeln!(body, "degree: {}", map.degree);
    let _ = writeln!(body, "monomial-order: {MONOMIAL_ORDER_TAG}");
    let _ = writeln!(body, "convention: {KAPPA_CONVENTION}");
    for (i, row) in map.coeffs.iter().enumerate() {
        let coeffs: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(body, "phi{}: {}", i, coeffs.join(" "));
    }
    let hash = sha256_hex(&body);
    // hash line goes right after the header block
    let mut out = String::new();
    for (i, line) in body.lines().enumerate() {
        out.push_str(line);
        out.push('\n');
        if i == 4 {
            let _ = writeln!(out, "hash: {hash}");
        }
    }
    out
}

pub fn map_file_hash(map: &Sqrt5Map) -> String {
    let s = map_to_string(map);
    extract_hash(&s).expect("serializer always embeds a hash")
}

fn extract_hash(text: &str) -> Option<String> {
    text.lines()
        .find(|l| l.starts_with("hash: "))
        .map(|l| l["hash: ".len()..].to_string())
}

fn parse_kv<'a>(line: &'a str, key: &str, lineno: usize) -> Result<&'a str, FileError> {
    let prefix = format!("{key}: ");
    line.strip_prefix(&prefix).ok_or_else(|| FileError::Parse {
        line: lineno,
        reason: format!("expected `{key}:`"),
    })
}

fn parse_bigint(s: &str, lineno: usize) -> Result<BigInt, FileError> {
    s.parse().map_err(|_| FileError::Parse {
        line: lineno,
        reason: format!("bad integer {s:?}"),
    })
}

/// Parse and check a map file: version, hash, coefficient count, content
/// coprimality.
pub fn map_from_string(text: &str) -> Result<Sqrt5Map, FileError> {
    let lines: Vec<&str> = text.lines().collect();
    if lines.len() < 10 {
        return Err(FileError::Parse {
            line: lines.len(),
            reason: "truncated file".into(),
        });
    }
    let version = parse_kv(lines[0], "format", 1)?;
    if version != MAP_FORMAT {
        return Err(FileError::UnknownVersion(version.to_string()));
    }
    let h = parse_bigint(parse_kv(lines[1], "h", 2)?, 2)?;
    let degree: u32 = parse_kv(lines[2], "degree", 3)?
        .parse()
        .map_err(|_| FileError::Parse {
            line: 3,
            reason: "bad degree".into(),
        })?;
    let order = parse_kv(lines[3], "monomial-order", 4)?;
    if order != MONOMIAL_ORDER_TAG {
        return Err(FileError::Parse {
            line: 4,
            reason: format!("unknown monomial order {order:?}"),
        });
    }
    let _convention = parse_kv(lines[4], "convention", 5)?;
    let hash = parse_kv(lines[5], "hash", 6)?.to_string();
    let m = monomial_count(degree);
    let mut coeffs: Vec<Vec<BigInt>> = Vec::with_capacity(4);
    for i in 0..4 {
        let lineno = 7 + i;
        let row_str = parse_kv(lines[6 + i], &format!("phi{i}"), lineno)?;
        let row: Result<Vec<BigInt>, FileError> = row_str
            .split_whitespace()
            .map(|t| parse_bigint(t, lineno))
            .collect();
        let row = row?;
        if row.len() != m {
            return Err(FileError::Parse {
                line: lineno,
                reason: format!("expected {m} coefficients, found {}", row.len()),
            });
        }
        coeffs.push(row);
    }
    let map = Sqrt5Map::new(
        h,
        degree,
        [
            coeffs[0].clone(),
            coeffs[1].clone(),
            coeffs[2].clone(),
            coeffs[3].clone(),
        ],
    );
    // verify the hash against a re-serialization
    let expect = map_file_hash(&map);
    if expect != hash {
        return Err(FileError::HashMismatch);
    }
    if !map.content().is_one() {
        return Err(FileError::Invariant(
            "coefficient table content must be 1".into(),
        ));
    }
    Ok(map)
}

pub fn write_map(path: &Path, map: &Sqrt5Map) -> Result<(), FileError> {
    std::fs::write(path, map_to_string(map))?;
    Ok(())
}

pub fn read_map(path: &Path) -> Result<Sqrt5Map, FileError> {
    map_from_string(&std::fs::read_to_string(path)?)
}

// ---------------------------------------------------------------------------
// Start vector file
// ---------------------------------------------------------------------------

/// kappa(4 m^2 [Q0 - inf]) over Z as coprime integers, with the defining
/// data of the seed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StartVector {
    pub h: BigInt,
    pub alpha: BigInt,
    pub beta: BigInt,
    pub m: u64,
    pub coords: [BigInt; 4],
}

impl StartVector {
    pub fn check_invariants(&self) -> Result<(), FileError> {
        if &self.beta * &self.beta != self.alpha.pow(5) + &self.h {
            return Err(FileError::Invariant(
                "beta^2 = alpha^5 + h fails over Z".into(),
            ));
        }
        let mut g = BigInt::zero();
        for c in &self.coords {
            g = g.gcd(c);
        }
        if !g.is_one() {
            return Err(FileError::Invariant(
                "coordinates must be coprime".into(),
            ));
        }
        let last = self.coords.iter().rev().find(|c| !c.is_zero());
        match last {
            Some(l) if l.is_positive() => Ok(()),
            _ => Err(FileError::Invariant(
                "last nonzero coordinate must be positive".into(),
            )),
        }
    }
}

pub fn start_to_string(sv: &StartVector) -> String {
    let mut body = String::new();
    let _ = writeln!(body, "format: {START_FORMAT}");
    let _ = writeln!(body, "h: {}", sv.h);
    let _ = writeln!(body, "alpha: {}", sv.alpha);
    let _ = writeln!(body, "beta: {}", sv.beta);
    let _ = writeln!(body, "m: {}", sv.m);
    for (i, c) in sv.coords.iter().enumerate() {
        let _ = writeln!(body, "x{i}: {c}");
    }
    let hash = sha256_hex(&body);
    let mut out = String::new();
    for (i, line) in body.lines().enumerate() {
        out.push_str(line);
        out.push('\n');
        if i == 4 {
            let _ = writeln!(out, "hash: {hash}");
        }
    }
    out
}

pub fn start_file_hash(sv: &StartVector) -> String {
    extract_hash(&start_to_string(sv)).expect("serializer embeds a hash")
}

pub fn start_from_string(text: &str) -> Result<StartVector, FileError> {
    let lines: Vec<&str> = text.lines().collect();
    if lines.len() < 10 {
        return Err(FileError::Parse {
            line: lines.len(),
            reason: "truncated file".into(),
        });
    }
    let version = parse_kv(lines[0], "format", 1)?;
    if version != START_FORMAT {
        return Err(FileError::UnknownVersion(version.to_string()));
    }
    let h = parse_bigint(parse_kv(lines[1], "h", 2)?, 2)?;
    let alpha = parse_bigint(parse_kv(lines[2], "alpha", 3)?, 3)?;
    let beta = parse_bigint(parse_kv(lines[3], "beta", 4)?, 4)?;
    let m: u64 = parse_kv(lines[4], "m", 5)?
        .parse()
        .map_err(|_| FileError::Parse {
            line: 5,
            reason: "bad m".into(),
        })?;
    let hash = parse_kv(lines[5], "hash", 6)?.to_string();
    let mut coords = Vec::with_capacity(4);
    for i in 0..4 {
        let lineno = 7 + i;
        coords.push(parse_bigint(
            parse_kv(lines[6 + i], &format!("x{i}"), lineno)?,
            lineno,
        )?);
    }
    let sv = StartVector {
        h,
        alpha,
        beta,
        m,
        coords: [
            coords[0].clone(),
            coords[1].clone(),
            coords[2].clone(),
            coords[3].clone(),
        ],
    };
    if start_file_hash(&sv) != hash {
        return Err(FileError::HashMismatch);
    }
    sv.check_invariants()?;
    Ok(sv)
}

pub fn write_start(path: &Path, sv: &StartVector) -> Result<(), FileError> {
    sv.check_invariants()?;
    std::fs::write(path, start_to_string(sv))?;
    Ok(())
}

pub fn read_start(path: &Path) -> Result<StartVector, FileError> {
    start_from_string(&std::fs::read_to_string(path)?)
}

// ---------------------------------------------------------------------------
// Verdict records
// ---------------------------------------------------------------------------

/// One-line machine-readable verdict. Identical inputs reproduce the line
/// byte-for-byte except for the wall_ms field.
pub fn verdict_record(
    m: u64,
    n: u64,
    lambda: &BigInt,
    verdict: &Verdict,
    map_hash: &str,
    start_hash: &str,
) -> String {
    use crate::certify::{Outcome, UnknownReason};
    let (outcome, factor, reason) = match &verdict.outcome {
        Outcome::Prime => ("prime", "-".to_string(), "-"),
        Outcome::Composite { factor } => (
            "composite",
            factor
                .as_ref()
                .map(|f| f.to_string())
                .unwrap_or_else(|| "-".to_string()),
            "-",
        ),
        Outcome::Unknown { reason } => (
            "unknown",
            "-".to_string(),
            match reason {
                UnknownReason::LambdaDividesH => "lambda-divides-h",
                UnknownReason::IndeterminateSeed => "indeterminate-seed",
            },
        ),
    };
    format!(
        "{VERDICT_FORMAT} m={m} n={n} lambda={lambda} outcome={outcome} factor={factor} \
         reason={reason} r={r} t_safe={t} wall_ms={w} map=sha256:{map_hash} start=sha256:{start_hash}",
        r = verdict.r,
        t = verdict.t_safe,
        w = verdict.wall.as_millis(),
    )
}

// ---------------------------------------------------------------------------
// Seed packs
// ---------------------------------------------------------------------------

pub const PACK_MAP_NAME: &str = "sqrt5-map.txt";
pub const PACK_START_NAME: &str = "start-vector.txt";

/// A matched (map, start vector) pair for one (h, Q0, m).
#[derive(Clone, Debug)]
pub struct SeedPack {
    pub map: Sqrt5Map,
    pub start: StartVector,
    pub map_hash: String,
    pub start_hash: String,
}

impl SeedPack {
    pub fn assemble(map: Sqrt5Map, start: StartVector) -> Result<Self, FileError> {
        if map.h != start.h {
            return Err(FileError::Invariant(format!(
                "pack mismatch: map h = {}, start vector h = {}",
                map.h, start.h
            )));
        }
        let map_hash = map_file_hash(&map);
        let start_hash = start_file_hash(&start);
        Ok(SeedPack {
            map,
            start,
            map_hash,
            start_hash,
        })
    }

    pub fn load(dir: &Path) -> Result<Self, FileError> {
        let map = read_map(&dir.join(PACK_MAP_NAME))?;
        let start = read_start(&dir.join(PACK_START_NAME))?;
        SeedPack::assemble(map, start)
    }

    pub fn save(&self, dir: &Path) -> Result<(), FileError> {
        std::fs::create_dir_all(dir)?;
        write_map(&dir.join(PACK_MAP_NAME), &self.map)?;
        write_start(&dir.join(PACK_START_NAME), &self.start)?;
        Ok(())
    }
}
