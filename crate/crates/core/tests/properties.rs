mod common;

use std::collections::HashSet;

use common::{
    closure, gamma1_indices, gl2_order, orbit, random_corpus, to_rows, x1_genus_closed_form, Raw,
};
use isoscreen::degrees::{map_degree, DegreeTable};
use isoscreen::genus::{genus_of_image, genus_x1};
use isoscreen::record::{parse_record, ImageRecord};
use isoscreen::{ImageGroup, Mat2, Vec2};
use proptest::prelude::*;

fn group(n: u32, gens: &[Raw]) -> ImageGroup {
    ImageGroup::from_entries(n, &to_rows(gens)).unwrap()
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

#[test]
fn chain_order_matches_closure_on_corpus() {
    for (n, gens) in random_corpus(200) {
        let g = group(n, &gens);
        let elements = closure(&gens, n);
        assert_eq!(
            g.order().unwrap(),
            elements.len() as u64,
            "mod {n}: {gens:?}"
        );
        for x in elements.iter().step_by(17) {
            assert!(g
                .contains(&Mat2::new(n, x.map(|e| e as i64)).unwrap())
                .unwrap());
        }
    }
}

#[test]
fn orbits_partition_the_plane_on_corpus() {
    for (n, gens) in random_corpus(200) {
        let g = group(n, &gens);
        let order = g.order().unwrap();
        let table = g.orbits().unwrap();
        let elements = closure(&gens, n);
        let total: u64 = table.orbits().iter().map(|o| o.size).sum();
        assert_eq!(total, (n as u64).pow(2));
        for o in table.orbits() {
            assert_eq!(order % o.size, 0);
            let rep = (o.representative.x, o.representative.y);
            let brute = orbit(&elements, rep, n);
            assert_eq!(brute.len() as u64, o.size);
            for &(x, y) in &brute {
                assert_eq!(table.orbit_id(Vec2::new(x, y)), o.id);
            }
        }
    }
}

#[test]
fn full_group_orders() {
    for n in 1..=30u32 {
        assert_eq!(
            ImageGroup::full(n).unwrap().order().unwrap(),
            gl2_order(n as u64),
            "mod {n}"
        );
    }
    // Brute count as a check on the formula itself.
    for n in [2u32, 3, 4, 6] {
        let count = (0..n.pow(4))
            .filter(|k| {
                let g = [k % n, k / n % n, k / n / n % n, k / n / n / n];
                common::gcd(common::det(&g, n) as u64, n as u64) == 1
            })
            .count() as u64;
        assert_eq!(count, gl2_order(n as u64));
    }
}

#[test]
fn map_degree_matches_gamma1_index() {
    for m in 1..=40u32 {
        for (a, index) in gamma1_indices(m) {
            assert_eq!(
                map_degree(a as u64, (m / a) as u64),
                index,
                "a = {a}, b = {}",
                m / a
            );
        }
    }
}

/// Orbits of `<G, -I>` on order-`n` vectors mod `N` and mod `n` correspond
/// under `v -> (N/n) v`, with equal sizes.
#[test]
fn scaling_bijection_on_corpus() {
    for (big, gens) in random_corpus(200) {
        let g = group(big, &gens).adjoin_minus_identity();
        let top = DegreeTable::new(&g).unwrap();
        let mut with_minus = gens.clone();
        with_minus.push([big - 1, 0, 0, big - 1]);
        for n in divisors(big) {
            let low = DegreeTable::new(&g.reduce_mod(n).unwrap()).unwrap();
            let elements = closure(
                &with_minus
                    .iter()
                    .map(|x| x.map(|e| e % n))
                    .collect::<Vec<_>>(),
                n,
            );
            let mut seen_top = HashSet::new();
            for c in low.classes_at(n) {
                let scaled = c.representative.scale((big / n) as u64, big);
                let up = top.class_of(scaled);
                assert_eq!(up.level, n);
                assert_eq!(up.degree, c.degree, "mod {big}, level {n}");
                let brute =
                    orbit(&elements, (c.representative.x, c.representative.y), n).len() as u64;
                assert_eq!(top.table().orbits()[up.orbit].size, brute);
                assert!(seen_top.insert(up.orbit));
            }
            assert_eq!(seen_top.len(), top.classes_at(n).count());
        }
    }
}

#[test]
fn x1_genus_matches_closed_form() {
    for n in 1..=60u32 {
        let s = genus_of_image(&ImageGroup::borel_one(n).unwrap()).unwrap();
        assert_eq!(s.genus, x1_genus_closed_form(n as u64), "N = {n}");
        assert_eq!(genus_x1(n).unwrap(), s.genus);
    }
    assert_eq!(x1_genus_closed_form(13), 2);
    assert_eq!(x1_genus_closed_form(21), 5);
    assert_eq!(genus_x1(13).unwrap(), 2);
    assert_eq!(genus_x1(21).unwrap(), 5);
}

fn invertible(n: u32) -> impl Strategy<Value = [i64; 4]> {
    prop::array::uniform4(0..n as i64).prop_filter("unit determinant", move |g| {
        let d = (g[0] * g[3] - g[1] * g[2]).rem_euclid(n as i64) as u64;
        common::gcd(d, n as u64) == 1
    })
}

fn subgroup() -> impl Strategy<Value = (u32, Vec<[i64; 4]>)> {
    (2u32..=20).prop_flat_map(|n| (Just(n), prop::collection::vec(invertible(n), 1..=3)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn map_degree_is_multiplicative(a in 1u64..12, b in 1u64..8, c in 1u64..8) {
        prop_assert_eq!(map_degree(a, b * c), map_degree(a, b) * map_degree(a * b, c));
    }

    #[test]
    fn reduction_is_a_homomorphism((n, rows) in subgroup(), k in 0usize..3) {
        let g = ImageGroup::from_entries(n, &rows).unwrap();
        let m = divisors(n)[k % divisors(n).len()];
        let h = g.reduce_mod(m).unwrap();
        prop_assert_eq!(g.order().unwrap() % h.order().unwrap(), 0);
        for x in g.generators() {
            prop_assert!(h.contains(&x.reduce(m).unwrap()).unwrap());
        }
    }

    #[test]
    fn minus_identity_at_most_doubles((n, rows) in subgroup()) {
        let g = ImageGroup::from_entries(n, &rows).unwrap();
        let h = g.adjoin_minus_identity();
        let ratio = h.order().unwrap() / g.order().unwrap();
        prop_assert!(ratio == 1 || ratio == 2);
        prop_assert!(h.contains(&Mat2::minus_identity(n)).unwrap());
    }

    #[test]
    fn point_degrees_are_integral((n, rows) in subgroup()) {
        let g = ImageGroup::from_entries(n, &rows).unwrap();
        let table = DegreeTable::new(&g).unwrap();
        for c in table.classes() {
            let e = table.primitive_target(c.orbit);
            prop_assert_eq!(c.level % e.target_level, 0);
            let drop = map_degree(e.target_level as u64, (c.level / e.target_level) as u64);
            prop_assert_eq!(c.degree, e.target_degree * drop);
        }
    }

    #[test]
    fn record_round_trip(
        (n, rows) in subgroup(),
        num in -10_000i64..10_000,
        den in 1i64..500,
        label in "[a-z0-9.]{1,12}",
        known in any::<bool>(),
    ) {
        let j = format!("{num}/{den}");
        let rec = ImageRecord { label, j: known.then_some(j), adelic_level: n, generators: rows };
        let line = rec.to_line();
        match parse_record(&line, 1) {
            Ok(back) => prop_assert_eq!(back, rec),
            // The generated j happened to be a CM value.
            Err(e) => prop_assert_eq!(e.field, "j"),
        }
    }
}
