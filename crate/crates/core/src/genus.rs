//! Genus of `X_H` from the permutation action of `SL2(Z/N)` on cosets.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gl2::{check_ceiling, enumerate_elements, sl2_generators, ImageGroup, Mat2};

/// Index, elliptic points, cusps and genus of a congruence subgroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CongruenceSignature {
    pub level: u32,
    pub index: u64,
    pub nu2: u64,
    pub nu3: u64,
    pub cusps: u64,
    pub genus: u64,
}

impl CongruenceSignature {
    fn from_counts(level: u32, index: u64, nu2: u64, nu3: u64, cusps: u64) -> Result<Self> {
        let twelve_g = 12 + index as i64 - 3 * nu2 as i64 - 4 * nu3 as i64 - 6 * cusps as i64;
        if twelve_g < 0 || twelve_g % 12 != 0 {
            return Err(Error::Invariant(format!(
                "non-integral genus at level {level}: mu={index} nu2={nu2} nu3={nu3} c={cusps}"
            )));
        }
        Ok(CongruenceSignature {
            level,
            index,
            nu2,
            nu3,
            cusps,
            genus: (twelve_g / 12) as u64,
        })
    }
}

/// Generators of `H ∩ SL2`, as Schreier generators for `det`.
pub fn sl2_kernel_generators(h: &ImageGroup) -> Result<Vec<Mat2>> {
    let n = h.modulus();
    let n64 = n as u64;
    let mut transversal: HashMap<u32, Mat2> = HashMap::new();
    let mut queue = vec![1 % n];
    transversal.insert(1 % n, Mat2::identity(n));
    let mut head = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        let tu = transversal[&u];
        for x in h.generators() {
            let v = (x.det() as u64 * u as u64 % n64) as u32;
            if let std::collections::hash_map::Entry::Vacant(e) = transversal.entry(v) {
                e.insert(x.mul_unchecked(&tu));
                queue.push(v);
            }
        }
    }
    let mut kernel = ImageGroup::trivial(n)?;
    for &u in &queue {
        let tu = transversal[&u];
        for x in h.generators() {
            let v = (x.det() as u64 * u as u64 % n64) as u32;
            let s = transversal[&v]
                .inverse()
                .mul_unchecked(&x.mul_unchecked(&tu));
            if !kernel.contains(&s)? {
                let mut gens = kernel.generators().to_vec();
                gens.push(s);
                kernel = ImageGroup::new(n, gens)?;
            }
        }
    }
    Ok(kernel.generators().to_vec())
}

/// Signature of `X_H` for `H <= GL2(Z/N)` with surjective determinant.
/// `-I` is adjoined first; it does not change the curve.
pub fn genus_of_image(h: &ImageGroup) -> Result<CongruenceSignature> {
    let n = h.modulus();
    if n == 1 {
        return CongruenceSignature::from_counts(1, 1, 1, 1, 1);
    }
    h.require_surjective_det()?;
    check_ceiling(n)?;
    let hpm = h.adjoin_minus_identity();
    let kernel_gens = sl2_kernel_generators(&hpm)?;
    let kernel = enumerate_elements(n, &kernel_gens, usize::MAX).expect("no limit");
    coset_signature(n, &kernel)
}

fn coset_signature(n: u32, kernel: &[Mat2]) -> Result<CongruenceSignature> {
    let sl2 = enumerate_elements(n, &sl2_generators(n), usize::MAX).expect("no limit");
    if !sl2.len().is_multiple_of(kernel.len()) {
        return Err(Error::Invariant(format!(
            "|K| = {} does not divide |SL2(Z/{n})| = {}",
            kernel.len(),
            sl2.len()
        )));
    }
    let mu = sl2.len() / kernel.len();
    let mut coset_of: FxHashMap<u64, u32> = FxHashMap::default();
    coset_of.reserve(sl2.len());
    let mut reps = Vec::with_capacity(mu);
    for g in &sl2 {
        if coset_of.contains_key(&g.key()) {
            continue;
        }
        let id = reps.len() as u32;
        reps.push(*g);
        for k in kernel {
            coset_of.insert(k.mul_unchecked(g).key(), id);
        }
    }
    if reps.len() != mu {
        return Err(Error::Invariant(format!(
            "found {} cosets, expected {mu}",
            reps.len()
        )));
    }
    let gens = sl2_generators(n);
    let (sigma, tau) = (gens[0], gens[1]);
    let rho = sigma.mul_unchecked(&tau);
    let act = |m: &Mat2| -> Vec<u32> {
        reps.iter()
            .map(|g| coset_of[&g.mul_unchecked(m).key()])
            .collect()
    };
    let fixed = |perm: &[u32]| {
        perm.iter()
            .enumerate()
            .filter(|(i, &j)| *i as u32 == j)
            .count() as u64
    };
    let nu2 = fixed(&act(&sigma));
    let nu3 = fixed(&act(&rho));
    let tau_perm = act(&tau);
    let mut seen = vec![false; mu];
    let mut cusps = 0;
    for start in 0..mu {
        if seen[start] {
            continue;
        }
        cusps += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = tau_perm[i] as usize;
        }
    }
    CongruenceSignature::from_counts(n, mu as u64, nu2, nu3, cusps)
}

/// Genus of `X1(N)`, computed from `B1(N)` and memoized per process.
pub fn genus_x1(n: u32) -> Result<u64> {
    static CACHE: OnceLock<Mutex<HashMap<u32, u64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(&g) = cache.lock().expect("genus cache poisoned").get(&n) {
        return Ok(g);
    }
    let g = genus_of_image(&ImageGroup::borel_one(n)?)?.genus;
    cache.lock().expect("genus cache poisoned").insert(n, g);
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_group_is_the_j_line() {
        for n in [1u32, 2, 3, 5, 6, 12] {
            let s = genus_of_image(&ImageGroup::full(n).unwrap()).unwrap();
            assert_eq!((s.index, s.genus), (1, 0));
        }
    }

    #[test]
    fn small_x1() {
        assert_eq!(genus_x1(1).unwrap(), 0);
        assert_eq!(genus_x1(11).unwrap(), 1);
        assert_eq!(genus_x1(13).unwrap(), 2);
        assert_eq!(genus_x1(21).unwrap(), 5);
    }

    #[test]
    fn x0_signature() {
        // X0(11): index 12, two cusps, genus 1.
        let b = ImageGroup::from_entries(11, &[[1, 1, 0, 1], [2, 0, 0, 1], [1, 0, 0, 2]]).unwrap();
        let s = genus_of_image(&b).unwrap();
        assert_eq!((s.index, s.nu2, s.nu3, s.cusps, s.genus), (12, 0, 0, 2, 1));
    }

    #[test]
    fn kernel_of_borel_mod_5() {
        let b = ImageGroup::from_entries(5, &[[2, 0, 0, 1], [1, 1, 0, 1], [1, 0, 0, 2]]).unwrap();
        let k = sl2_kernel_generators(&b).unwrap();
        assert!(k.iter().all(|m| m.det() == 1));
        let size = enumerate_elements(5, &k, 1000).unwrap().len();
        assert_eq!(size, 20);
    }

    #[test]
    fn rejects_small_determinant() {
        let g = ImageGroup::from_entries(5, &[[4, 0, 0, 1]]).unwrap();
        assert!(matches!(
            genus_of_image(&g),
            Err(Error::DeterminantNotSurjective { .. })
        ));
    }
}
