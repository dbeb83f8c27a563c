//! Shared fixtures and property-check helpers for the integration suites.
//! Seed packs are deterministic, so they are cached under target/ and
//! reused across runs.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::OnceLock;

use num_bigint::BigInt;

use kummer5::field::{Field, WordField};
use kummer5::files::SeedPack;
use kummer5::genus2::{Curve, MumfordDivisor};
use kummer5::pipeline::compute_start_vector;
use kummer5::sqrt5::SynthConfig;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed-point table: h -> (alpha, beta).
pub const SEEDS: &[(i64, i64, i64)] = &[(3, 1, 2), (10, -1, 3), (2, -1, 1), (-31, 2, 1)];

pub fn seed_for_h(h: i64) -> (BigInt, BigInt) {
    let (_, a, b) = SEEDS.iter().find(|(hh, _, _)| *hh == h).expect("known h");
    (BigInt::from(*a), BigInt::from(*b))
}

fn cache_dir() -> PathBuf {
    let target = std::env::var("CARGO_TARGET_DIR").unwrap_or_else(|_| {
        format!(
            "{}/target",
            std::env::var("CARGO_MANIFEST_DIR").expect("run under cargo")
        )
    });
    // the manifest dir is crates/kummer5; the workspace target sits two up
    let mut p = PathBuf::from(target);
    if !p.exists() {
        p = PathBuf::from(std::env::var("CARGO_MANIFEST_DIR").unwrap())
            .join("../../target");
    }
    p.join("kummer5-fixtures")
}

/// The degree-5 map for a curve, synthesized once per h and cached.
pub fn map_for_h(h: i64) -> kummer5::sqrt5::Sqrt5Map {
    let dir = cache_dir().join(format!("map-h{h}"));
    let path = dir.join("sqrt5-map.txt");
    if let Ok(map) = kummer5::files::read_map(&path) {
        if map.h == BigInt::from(h) {
            return map;
        }
    }
    let (alpha, beta) = seed_for_h(h);
    let (map, _) =
        kummer5::pipeline::precompute_map(&BigInt::from(h), &alpha, &beta, &SynthConfig::default())
            .expect("map synthesis");
    std::fs::create_dir_all(&dir).expect("cache dir");
    kummer5::files::write_map(&path, &map).expect("cache write");
    map
}

/// Build (or load from the cache) the pack for (h, m). The map is shared
/// across m through the per-h cache.
pub fn pack(h: i64, m: u64) -> SeedPack {
    let dir = cache_dir().join(format!("pack-h{h}-m{m}"));
    if let Ok(pack) = SeedPack::load(&dir) {
        if pack.start.m == m {
            return pack;
        }
    }
    let map = map_for_h(h);
    let start = start_vector(h, m);
    let pack = SeedPack::assemble(map, start).expect("consistent pack");
    pack.save(&dir).expect("cache write");
    pack
}

/// Start vector only, cached per (h, m).
pub fn start_vector(h: i64, m: u64) -> kummer5::files::StartVector {
    let dir = cache_dir().join(format!("sv-h{h}-m{m}"));
    let path = dir.join("start-vector.txt");
    if let Ok(sv) = kummer5::files::read_start(&path) {
        if sv.m == m {
            return sv;
        }
    }
    let (alpha, beta) = seed_for_h(h);
    let sv = compute_start_vector(&BigInt::from(h), &alpha, &beta, m).expect("start vector");
    std::fs::create_dir_all(&dir).expect("cache dir");
    kummer5::files::write_start(&path, &sv).expect("cache write");
    sv
}

/// The main packs the published table rows need, built once.
pub struct TablePacks {
    pub h3_m1: SeedPack,
    pub h10_m1: SeedPack,
    pub h2_m3: SeedPack,
    pub hm31_m7: SeedPack,
    pub h10_m11: SeedPack,
}

static TABLE_PACKS: OnceLock<TablePacks> = OnceLock::new();

pub fn table_packs() -> &'static TablePacks {
    TABLE_PACKS.get_or_init(|| {
        // build the four maps in parallel; start vectors after
        let jobs: Vec<(i64, u64)> = vec![(3, 1), (10, 1), (2, 3), (-31, 7), (10, 11)];
        let packs: BTreeMap<(i64, u64), SeedPack> = {
            use rayon::prelude::*;
            jobs.par_iter()
                .map(|&(h, m)| ((h, m), pack(h, m)))
                .collect()
        };
        TablePacks {
            h3_m1: packs[&(3, 1)].clone(),
            h10_m1: packs[&(10, 1)].clone(),
            h2_m3: packs[&(2, 3)].clone(),
            hm31_m7: packs[&(-31, 7)].clone(),
            h10_m11: packs[&(10, 11)].clone(),
        }
    })
}

/// Random reduced divisor over a word-size prime field.
pub fn random_divisor(
    curve: &Curve<WordField>,
    rng: &mut ChaCha8Rng,
) -> MumfordDivisor<WordField> {
    let f = *curve.field();
    let p = f.modulus();
    let choice = rng.gen_range(0u8..8);
    let mut point = || loop {
        let x = rng.gen_range(0..p);
        let fx = curve.f().eval(&f, &x);
        if let Some(y) = f.sqrt(fx) {
            let y = if rng.gen_bool(0.5) { y } else { f.neg(&y) };
            return curve.embed_point(&x, &y).unwrap();
        }
    };
    match choice {
        0 => curve.identity(),
        1 => point(),
        _ => {
            let a = point();
            let b = point();
            curve.add(&a, &b)
        }
    }
}
