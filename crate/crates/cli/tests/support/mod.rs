//! Running the binary and building synthetic batch inputs.

#![allow(dead_code)]

use std::fmt::Write as _;
use std::path::Path;
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn isoscreen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isoscreen"))
        .args(args)
        .output()
        .expect("run isoscreen")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

/// Writes the fixture line for `label` alone into `dir/<name>.jsonl`.
pub fn single_fixture(dir: &Path, label: &str) -> std::path::PathBuf {
    let all = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../fixtures/images.jsonl"
    ))
    .unwrap();
    let needle = format!("{{\"label\":{}", serde_json::to_string(label).unwrap());
    let line = all
        .lines()
        .find(|l| l.starts_with(&needle))
        .unwrap_or_else(|| panic!("no fixture {label}"));
    let path = dir.join(format!("{}.jsonl", label.replace(['/', '='], "_")));
    std::fs::write(&path, format!("{line}\n")).unwrap();
    path
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `count` records at small moduli. Each image is one or two random
/// matrices plus `diag(1, u)` for every unit `u`, so the determinant is
/// surjective. Every 997th record is broken on purpose.
pub fn synthetic_batch(count: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut text = String::new();
    for i in 0..count {
        let n: i64 = rng.gen_range(2..=24);
        let mut gens: Vec<[i64; 4]> = Vec::new();
        let k = rng.gen_range(1..=2);
        while gens.len() < k {
            let g = [0; 4].map(|_: i64| rng.gen_range(0..n));
            if gcd(g[0] * g[3] - g[1] * g[2], n) == 1 {
                gens.push(g);
            }
        }
        gens.extend((1..n).filter(|&u| gcd(u, n) == 1).map(|u| [1, 0, 0, u]));
        if i % 997 == 996 {
            gens.push([n, 0, 0, 1]);
        }
        let rows: Vec<String> = gens
            .iter()
            .map(|g| format!("[{},{},{},{}]", g[0], g[1], g[2], g[3]))
            .collect();
        writeln!(
            text,
            "{{\"label\":\"syn-{i:05}\",\"j\":null,\"adelic_level\":{n},\"generators\":[{}]}}",
            rows.join(",")
        )
        .unwrap();
    }
    text
}
