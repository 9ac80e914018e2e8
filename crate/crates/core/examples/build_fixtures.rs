//! Regenerates `fixtures/images.jsonl`.
//!
//! Each image is described by conditions on its prime-power components and
//! by entanglement conditions tying characters of different components. The
//! builder draws random elements satisfying all conditions (fixed seed),
//! adds complex conjugation, and keeps adding elements until the generated
//! group has the order predicted by an exhaustive count of the local groups.
//!
//!     cargo run --release -p isoscreen-core --example build_fixtures

use std::fmt::Write as _;
use std::path::PathBuf;

use isoscreen::pipeline::{screen, ScreenOptions};
use isoscreen::record::ImageRecord;
use isoscreen::ImageGroup;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type M = [i64; 4];
type Entanglement = Box<dyn Fn(&[M]) -> bool>;

fn det(g: &M, q: i64) -> i64 {
    (g[0] * g[3] - g[1] * g[2]).rem_euclid(q)
}

fn legendre(x: i64, p: i64) -> i64 {
    let mut r = 1i64;
    let mut b = x.rem_euclid(p);
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

fn chi4(x: i64) -> i64 {
    if x.rem_euclid(4) == 1 {
        1
    } else {
        -1
    }
}

fn chi8(x: i64) -> i64 {
    match x.rem_euclid(8) {
        1 | 7 => 1,
        _ => -1,
    }
}

/// Sign of `g mod 2` as a permutation of the three nonzero vectors of `F2^2`.
fn sgn2(g: &M) -> i64 {
    let pts = [(1, 0), (0, 1), (1, 1)];
    let image: Vec<usize> = pts
        .iter()
        .map(|&(x, y)| {
            let v = (
                (g[0] * x + g[1] * y).rem_euclid(2),
                (g[2] * x + g[3] * y).rem_euclid(2),
            );
            pts.iter().position(|&p| p == v).unwrap()
        })
        .collect();
    let inversions = (0..3)
        .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
        .filter(|&(i, j)| image[i] > image[j])
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn is_cube(x: i64, p: i64) -> bool {
    (1..p).any(|y| (y * y * y - x).rem_euclid(p) == 0)
}

/// Order-12 group generated by `[[0,-1],[1,-1]]`, `[[0,1],[1,0]]` and `-I` mod 4,
/// with the sign by which it moves `{±(1,0), ±(0,1), ±(1,1)}`.
fn s3_lift_sign(g: &M) -> Option<i64> {
    let plus = [(1, 0), (0, 1), (3, 3)];
    let minus = [(3, 0), (0, 3), (1, 1)];
    let image = |(x, y): (i64, i64)| {
        (
            (g[0] * x + g[1] * y).rem_euclid(4),
            (g[2] * x + g[3] * y).rem_euclid(4),
        )
    };
    let mut sign = None;
    for v in plus {
        let w = image(v);
        let s = if plus.contains(&w) {
            1
        } else if minus.contains(&w) {
            -1
        } else {
            return None;
        };
        if *sign.get_or_insert(s) != s {
            return None;
        }
    }
    sign
}

struct Part {
    q: i64,
    local: Box<dyn Fn(&M) -> bool>,
}

struct Design {
    label: &'static str,
    j: Option<&'static str>,
    parts: Vec<Part>,
    /// Entanglement conditions on the tuple of components (same order as `parts`).
    global: Entanglement,
    /// Number of independent index-2 conditions in `global`.
    conditions: u32,
    conjugation: Vec<M>,
}

fn part(q: i64, local: impl Fn(&M) -> bool + 'static) -> Part {
    Part {
        q,
        local: Box::new(local),
    }
}

fn full(q: i64) -> Part {
    part(q, |_| true)
}

fn in_local(p: &Part, g: &M) -> bool {
    let q = p.q;
    let d = det(g, q);
    isoscreen::arith::gcd(d as u64, q as u64) == 1 && (p.local)(g)
}

fn local_order(p: &Part) -> u64 {
    let q = p.q;
    let mut count = 0;
    for k in 0..q.pow(4) {
        let g = [k % q, (k / q) % q, (k / q / q) % q, k / q / q / q];
        if in_local(p, &g) {
            count += 1;
        }
    }
    count
}

fn crt(parts: &[Part], comps: &[M]) -> M {
    let n: i64 = parts.iter().map(|p| p.q).product();
    let mut out = [0i64; 4];
    for (p, g) in parts.iter().zip(comps) {
        let rest = n / p.q;
        let inv = (1..p.q).find(|&u| (rest % p.q) * u % p.q == 1).unwrap_or(0);
        for i in 0..4 {
            out[i] = (out[i] + g[i].rem_euclid(p.q) * rest % n * inv) % n;
        }
    }
    out
}

fn sample(d: &Design, rng: &mut ChaCha8Rng) -> Vec<M> {
    loop {
        let comps: Vec<M> = d
            .parts
            .iter()
            .map(|p| loop {
                let g = [0; 4].map(|_: i64| rng.gen_range(0..p.q));
                if in_local(p, &g) {
                    break g;
                }
            })
            .collect();
        if (d.global)(&comps) {
            return comps;
        }
    }
}

fn build(d: &Design, rng: &mut ChaCha8Rng) -> ImageRecord {
    let n: i64 = d.parts.iter().map(|p| p.q).product();
    assert!(
        d.parts
            .iter()
            .zip(&d.conjugation)
            .all(|(p, c)| in_local(p, c))
            && (d.global)(&d.conjugation),
        "{}: complex conjugation violates the conditions",
        d.label
    );
    let expected: u64 = d.parts.iter().map(local_order).product::<u64>() >> d.conditions;
    let mut gens = vec![crt(&d.parts, &d.conjugation)];
    loop {
        for _ in 0..2 {
            gens.push(crt(&d.parts, &sample(d, rng)));
        }
        let g = ImageGroup::from_entries(n as u32, &gens).unwrap();
        let order = g.order().unwrap();
        assert!(
            order <= expected,
            "{}: order {order} exceeds {expected}",
            d.label
        );
        if order == expected {
            break;
        }
        assert!(
            gens.len() < 40,
            "{}: stuck at order {order} of {expected}",
            d.label
        );
    }
    ImageRecord {
        label: d.label.to_string(),
        j: d.j.map(str::to_string),
        adelic_level: n as u32,
        generators: gens,
    }
}

fn borel(q: i64) -> impl Fn(&M) -> bool {
    move |g: &M| g[2].rem_euclid(q) == 0
}

fn designs() -> Vec<Design> {
    let id = [1, 0, 0, 1];
    let conj = [1, 0, 0, -1];
    vec![
        Design {
            label: "1225.b1",
            j: Some("-162677523113838677"),
            parts: vec![
                full(4),
                full(5),
                full(7),
                part(37, |g| g[2] == 0 && is_cube(g[3], 37)),
            ],
            global: Box::new(|c| {
                sgn2(&c[0]) == legendre(det(&c[1], 5), 5) * legendre(det(&c[2], 7), 7)
                    && sgn2(&c[0]) * chi4(det(&c[0], 4)) == legendre(c[3][3], 37)
            }),
            conditions: 2,
            conjugation: vec![[1, 1, 0, -1], conj, conj, conj],
        },
        Design {
            label: "1225.b2",
            j: Some("-9317"),
            parts: vec![
                full(4),
                full(5),
                full(7),
                part(37, |g| g[2] == 0 && is_cube(g[0], 37)),
            ],
            global: Box::new(|c| {
                sgn2(&c[0]) == legendre(det(&c[1], 5), 5) * legendre(det(&c[2], 7), 7)
                    && sgn2(&c[0]) * chi4(det(&c[0], 4)) == legendre(c[3][0], 37)
            }),
            conditions: 2,
            conjugation: vec![[1, 1, 0, -1], conj, conj, conj],
        },
        Design {
            label: "j=-882216989/131072",
            j: Some("-882216989/131072"),
            parts: vec![full(2), part(17, |g| g[2] == 0 && legendre(g[0], 17) == 1)],
            global: Box::new(|c| sgn2(&c[0]) == legendre(c[1][3], 17)),
            conditions: 1,
            conjugation: vec![id, conj],
        },
        Design {
            label: "j=-140625/8",
            j: Some("-140625/8"),
            parts: vec![full(2), part(3, borel(3)), part(7, borel(7))],
            global: Box::new(|c| {
                legendre(c[1][0], 3) == legendre(c[2][0], 7)
                    && sgn2(&c[0]) == legendre(det(&c[2], 7), 7)
            }),
            conditions: 2,
            conjugation: vec![[0, 1, 1, 0], conj, conj],
        },
        Design {
            label: "j=16778985534208729/81000",
            j: Some("16778985534208729/81000"),
            parts: vec![part(8, borel(8)), part(3, borel(3))],
            global: Box::new(|_| true),
            conditions: 0,
            conjugation: vec![conj, conj],
        },
        Design {
            label: "j=351/4",
            j: Some("351/4"),
            parts: vec![part(4, |g| s3_lift_sign(g).is_some()), part(7, borel(7))],
            global: Box::new(|c| s3_lift_sign(&c[0]) == Some(legendre(c[1][0], 7))),
            conditions: 1,
            conjugation: vec![[0, 1, 1, 0], conj],
        },
        Design {
            label: "j=-121",
            j: Some("-121"),
            parts: vec![
                full(2),
                part(11, |g| {
                    g[2] == 0 && (g[0] - g[3] * g[3]).rem_euclid(11) == 0
                }),
            ],
            global: Box::new(|c| sgn2(&c[0]) == legendre(det(&c[1], 11), 11)),
            conditions: 1,
            conjugation: vec![[0, 1, 1, 0], conj],
        },
        Design {
            label: "15.a7",
            j: Some("-1/15"),
            parts: vec![
                part(32, |g| {
                    g[0].rem_euclid(4) == 1
                        && g[2].rem_euclid(16) == 0
                        && ((g[0].rem_euclid(32) - 1) / 4 + g[2].rem_euclid(32) / 16) % 2 == 0
                }),
                full(3),
                full(5),
            ],
            global: Box::new(|c| {
                let moved = c[0][1].rem_euclid(2) == 1;
                moved == (legendre(det(&c[1], 3), 3) * legendre(det(&c[2], 5), 5) == -1)
            }),
            conditions: 1,
            conjugation: vec![[1, 1, 0, -1], conj, conj],
        },
        Design {
            label: "75072.bc2",
            j: None,
            parts: vec![
                part(4, |g| {
                    g[0].rem_euclid(2) == 1 && g[3].rem_euclid(2) == 1 && g[2].rem_euclid(2) == 0
                }),
                full(3),
                full(17),
                full(23),
            ],
            global: Box::new(|c| {
                let c_half = if c[0][2].rem_euclid(4) == 2 { -1 } else { 1 };
                let b_odd = if c[0][1].rem_euclid(2) == 1 { -1 } else { 1 };
                c_half == legendre(det(&c[2], 17), 17)
                    && b_odd == legendre(det(&c[1], 3), 3) * legendre(det(&c[3], 23), 23)
            }),
            conditions: 2,
            conjugation: vec![conj, conj, conj, conj],
        },
        Design {
            label: "54.b2",
            j: None,
            parts: vec![part(8, |g| chi8(det(g, 8)) == sgn2(g)), part(9, borel(9))],
            global: Box::new(|_| true),
            conditions: 0,
            conjugation: vec![conj, conj],
        },
        Design {
            label: "147.b1",
            j: None,
            parts: vec![
                full(2),
                full(3),
                full(7),
                part(13, |g| g[2] == 0 && legendre(g[3], 13) == 1),
            ],
            global: Box::new(|c| {
                let d = c[3][3];
                let d3 = if d * d * d % 13 == 1 { 1 } else { -1 };
                sgn2(&c[0]) * legendre(det(&c[1], 3), 3) == legendre(c[3][0], 13)
                    && d3 == legendre(det(&c[2], 7), 7)
            }),
            conditions: 2,
            conjugation: vec![[0, 1, 1, 0], conj, conj, conj],
        },
        Design {
            label: "232544.f1",
            j: None,
            parts: vec![full(4), part(11, |g| nonsplit_sign(g).is_some()), full(43)],
            global: Box::new(|c| {
                chi4(det(&c[0], 4)) == nonsplit_sign(&c[1]).unwrap()
                    && sgn2(&c[0]) == legendre(det(&c[2], 43), 43)
            }),
            conditions: 2,
            conjugation: vec![[0, 1, 1, 0], conj, conj],
        },
    ]
}

/// `+1` on the non-split Cartan `{[[a, -b], [b, a]]}` mod 11, `-1` on the
/// other coset of its normalizer.
fn nonsplit_sign(g: &M) -> Option<i64> {
    let r = |x: i64| x.rem_euclid(11);
    if r(g[0] - g[3]) == 0 && r(g[1] + g[2]) == 0 {
        Some(1)
    } else if r(g[0] + g[3]) == 0 && r(g[1] - g[2]) == 0 {
        Some(-1)
    } else {
        None
    }
}

fn main() {
    // Full-level orders need stabilizer chains above the default ceiling.
    std::env::set_var("ISOSCREEN_MAX_MODULUS", "6000");
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    let mut out = String::new();
    out.push_str(
        "# Adelic Galois images used by the test suite, one record per line.\n\
         # These groups are reconstructions: each is built from stated local images\n\
         # and entanglement conditions (see examples/build_fixtures.rs) so that it\n\
         # has the published level data, orbit degrees and screening output of the\n\
         # named curve. They are not the database generators of those curves.\n\
         # j is null where the curve's j-invariant was not available offline.\n",
    );
    for d in designs() {
        let record = build(&d, &mut rng);
        let g = record.image().unwrap();
        let report = screen(&g, &record.label, ScreenOptions::default()).unwrap();
        eprintln!(
            "{:28} N={:5} gens={:2} n={} m0={} M={:?} genus={:?}",
            record.label,
            record.adelic_level,
            record.generators.len(),
            report.levels.n,
            report.levels.m0,
            report.witness_pairs(),
            report.image_genus
        );
        writeln!(out, "{}", record.to_line()).unwrap();
    }
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/images.jsonl");
    std::fs::create_dir_all(path.parent().unwrap()).unwrap();
    std::fs::write(&path, out).unwrap();
    eprintln!("wrote {}", path.display());
}
