//! Replays the checked-in fuzz corpus, plus truncated and byte-flipped
//! variants, through the same entry points as the fuzz targets.

use std::path::PathBuf;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hyperdef::hyper::{build_di_gr, PCharacter};
use hyperdef::serial::{parse_algebra, parse_representation};
use hyperdef::Field;

fn corpus(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<Vec<u8>> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| std::fs::read(e.unwrap().path()).unwrap())
        .collect();
    assert!(!out.is_empty(), "empty corpus for {target}");
    out.sort();
    out
}

fn variants(seed: &[u8], rng: &mut ChaCha8Rng) -> Vec<Vec<u8>> {
    let mut out = vec![seed.to_vec()];
    for cut in [seed.len() / 2, seed.len().saturating_sub(1)] {
        out.push(seed[..cut].to_vec());
    }
    for _ in 0..24 {
        let mut v = seed.to_vec();
        if !v.is_empty() {
            let i = rng.gen_range(0..v.len());
            v[i] = rng.gen();
        }
        out.push(v);
    }
    out
}

fn replay(target: &str, mut run: impl FnMut(&str)) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for seed in corpus(target) {
        for v in variants(&seed, &mut rng) {
            if let Ok(s) = std::str::from_utf8(&v) {
                run(s);
            }
        }
    }
}

#[test]
fn field_parse_corpus() {
    replay("field_parse", |s| {
        let mut parts = s.splitn(3, ' ');
        let (Some(p), Some(k), Some(elem)) = (parts.next(), parts.next(), parts.next()) else { return };
        let (Ok(p), Ok(k)) = (p.parse::<u32>(), k.parse::<u32>()) else { return };
        let Ok(f) = Field::new(p, k) else { return };
        if let Ok(x) = f.parse(elem) {
            assert_eq!(f.parse(&f.format(x)).unwrap(), x);
        }
    });
}

#[test]
fn chi_parse_corpus() {
    let f = Field::new(3, 2).unwrap();
    replay("chi_parse", |s| {
        if let Ok(chi) = PCharacter::parse(s, &f) {
            assert_eq!(PCharacter::parse(&chi.format(&f), &f).unwrap(), chi);
        }
    });
}

#[test]
fn algebra_json_corpus() {
    let mut accepted = 0;
    for seed in corpus("algebra_json") {
        accepted += usize::from(parse_algebra(std::str::from_utf8(&seed).unwrap()).is_ok());
    }
    assert!(accepted >= 4, "well-formed seeds must parse");
    replay("algebra_json", |s| {
        let _ = parse_algebra(s);
    });
}

#[test]
fn representation_json_corpus() {
    let alg = Arc::new(build_di_gr(1, Field::prime(2).unwrap()).unwrap());
    let mut accepted = 0;
    for seed in corpus("representation_json") {
        accepted += usize::from(parse_representation(std::str::from_utf8(&seed).unwrap(), alg.clone()).is_ok());
    }
    assert_eq!(accepted, 2, "both module seeds must parse");
    replay("representation_json", |s| {
        let _ = parse_representation(s, alg.clone());
    });
}
