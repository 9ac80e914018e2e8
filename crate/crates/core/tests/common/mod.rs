//! Fixture loading and brute-force oracles shared by the integration tests.
//! Nothing here calls into the library's group algorithms.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};
use std::path::PathBuf;

use isoscreen::record::{parse_records, ImageRecord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Raw = [u32; 4];

pub fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/images.jsonl")
}

pub fn fixtures() -> Vec<ImageRecord> {
    let text = std::fs::read_to_string(fixture_path()).expect("fixture file");
    parse_records(&text)
        .into_iter()
        .map(|(line, r)| r.unwrap_or_else(|e| panic!("fixture line {line}: {e}")))
        .collect()
}

pub fn fixture(label: &str) -> ImageRecord {
    fixtures()
        .into_iter()
        .find(|r| r.label == label)
        .unwrap_or_else(|| panic!("no fixture {label}"))
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn primes_of(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn phi(n: u64) -> u64 {
    (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64
}

pub fn mul(a: &Raw, b: &Raw, n: u32) -> Raw {
    let n = n as u64;
    let [a0, a1, a2, a3] = a.map(|x| x as u64);
    let [b0, b1, b2, b3] = b.map(|x| x as u64);
    [
        ((a0 * b0 + a1 * b2) % n) as u32,
        ((a0 * b1 + a1 * b3) % n) as u32,
        ((a2 * b0 + a3 * b2) % n) as u32,
        ((a2 * b1 + a3 * b3) % n) as u32,
    ]
}

pub fn det(a: &Raw, n: u32) -> u32 {
    let n = n as u64;
    let ad = a[0] as u64 * a[3] as u64 % n;
    let bc = a[1] as u64 * a[2] as u64 % n;
    ((ad + n - bc) % n) as u32
}

pub fn apply(g: &Raw, v: (u32, u32), n: u32) -> (u32, u32) {
    let n = n as u64;
    let (x, y) = (v.0 as u64, v.1 as u64);
    (
        ((g[0] as u64 * x + g[1] as u64 * y) % n) as u32,
        ((g[2] as u64 * x + g[3] as u64 * y) % n) as u32,
    )
}

/// Every element of the group generated by `gens`, by breadth-first closure.
pub fn closure(gens: &[Raw], n: u32) -> Vec<Raw> {
    let id = [1 % n, 0, 0, 1 % n];
    let mut seen: HashSet<Raw> = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    let mut out = vec![id];
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = mul(g, &x, n);
            if seen.insert(y) {
                queue.push_back(y);
                out.push(y);
            }
        }
    }
    out
}

/// Orbit of `v` under an explicitly listed group.
pub fn orbit(elements: &[Raw], v: (u32, u32), n: u32) -> HashSet<(u32, u32)> {
    elements.iter().map(|g| apply(g, v, n)).collect()
}

/// `N^4 prod (1 - 1/p)(1 - 1/p^2)` evaluated exactly.
pub fn gl2_order(n: u64) -> u64 {
    let mut num = n.pow(4);
    for p in primes_of(n) {
        num = num / p.pow(3) * ((p - 1) * (p * p - 1));
    }
    num
}

/// `g = ±[[1, *], [0, 1]]` mod `a`.
fn in_pm_gamma1(g: &Raw, a: u32) -> bool {
    let r = g.map(|x| x % a);
    r[2] == 0 && ((r[0] == 1 % a && r[3] == 1 % a) || (r[0] == (a - 1) % a && r[3] == (a - 1) % a))
}

/// `[±Γ1(a) : ±Γ1(m)]` for every `a | m`, counted inside `SL2(Z/m)`.
pub fn gamma1_indices(m: u32) -> Vec<(u32, u64)> {
    let divs: Vec<u32> = (1..=m).filter(|a| m.is_multiple_of(*a)).collect();
    let mut counts = vec![0u64; divs.len()];
    for e0 in 0..m {
        for e1 in 0..m {
            for e2 in 0..m {
                for e3 in 0..m {
                    let g = [e0, e1, e2, e3];
                    if det(&g, m) != 1 % m {
                        continue;
                    }
                    for (i, &a) in divs.iter().enumerate() {
                        if in_pm_gamma1(&g, a) {
                            counts[i] += 1;
                        }
                    }
                }
            }
        }
    }
    let small = *counts.last().unwrap();
    divs.iter()
        .zip(&counts)
        .map(|(&a, &c)| {
            assert_eq!(c % small, 0);
            (a, c / small)
        })
        .collect()
}

/// Closed form for the genus of `X1(N)`:
/// `1 + mu/24 - (1/4) sum_{d | N} phi(d) phi(N/d)` for `N >= 5`, and 0 below.
pub fn x1_genus_closed_form(n: u64) -> u64 {
    if n <= 4 {
        return 0;
    }
    let mut mu = n * n;
    for p in primes_of(n) {
        mu = mu / (p * p) * (p * p - 1);
    }
    let cusp_sum: u64 = (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| phi(d) * phi(n / d))
        .sum();
    let twenty_four_g = 24 + mu as i64 - 6 * cusp_sum as i64;
    assert!(twenty_four_g >= 0 && twenty_four_g % 24 == 0);
    (twenty_four_g / 24) as u64
}

/// A random subgroup of `GL2(Z/N)`: modulus in `2..=max`, one to three
/// random invertible generators.
pub fn random_subgroup(rng: &mut ChaCha8Rng, max: u32) -> (u32, Vec<Raw>) {
    let n = rng.gen_range(2..=max);
    let k = rng.gen_range(1..=3);
    let mut gens = Vec::new();
    while gens.len() < k {
        let g = [0; 4].map(|_: u32| rng.gen_range(0..n));
        if gcd(det(&g, n) as u64, n as u64) == 1 {
            gens.push(g);
        }
    }
    (n, gens)
}

/// The fixed random corpus used by the group-theory and degree properties.
pub fn random_corpus(count: usize) -> Vec<(u32, Vec<Raw>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x150_5c4e);
    (0..count).map(|_| random_subgroup(&mut rng, 24)).collect()
}

pub fn to_rows(gens: &[Raw]) -> Vec<[i64; 4]> {
    gens.iter().map(|g| g.map(|x| x as i64)).collect()
}
