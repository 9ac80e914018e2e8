use std::collections::HashSet;
use std::sync::{Arc, OnceLock};

use crate::arith::{divisors, gcd, is_unitary_divisor, unit_subgroup_size};
use crate::error::{Error, Result};
use crate::gl2::orbits::OrbitTable;
use crate::gl2::{Mat2, Vec2};

/// Default ceiling on moduli for which orbit tables and stabilizer chains are built.
pub const DEFAULT_MAX_MODULUS: u32 = 1000;

/// The active modulus ceiling: `ISOSCREEN_MAX_MODULUS` if set and parseable,
/// otherwise [`DEFAULT_MAX_MODULUS`]. Read once per process.
pub fn max_modulus() -> u32 {
    static CEILING: OnceLock<u32> = OnceLock::new();
    *CEILING.get_or_init(|| {
        std::env::var("ISOSCREEN_MAX_MODULUS")
            .ok()
            .and_then(|s| s.trim().parse::<u32>().ok())
            .filter(|&n| n > 0 && n < (1 << 16))
            .unwrap_or(DEFAULT_MAX_MODULUS)
    })
}

pub(crate) fn check_ceiling(modulus: u32) -> Result<()> {
    let ceiling = max_modulus();
    if modulus > ceiling {
        return Err(Error::ModulusTooLarge { modulus, ceiling });
    }
    Ok(())
}

/// A subgroup of `GL2(Z/NZ)` given by generators.
///
/// The stabilizer chain (and with it the order) is built lazily, once, and
/// shared between clones.
#[derive(Clone)]
pub struct ImageGroup {
    modulus: u32,
    generators: Vec<Mat2>,
    chain: OnceLock<Arc<StabChain>>,
}

impl std::fmt::Debug for ImageGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ImageGroup")
            .field("modulus", &self.modulus)
            .field("generators", &self.generators)
            .finish()
    }
}

impl ImageGroup {
    pub fn new(modulus: u32, generators: Vec<Mat2>) -> Result<ImageGroup> {
        if modulus == 0 || modulus >= (1 << 16) {
            return Err(Error::InvalidModulus(modulus));
        }
        if let Some(g) = generators.iter().find(|g| g.modulus() != modulus) {
            return Err(Error::ModulusMismatch {
                left: modulus,
                right: g.modulus(),
            });
        }
        Ok(ImageGroup {
            modulus,
            generators,
            chain: OnceLock::new(),
        })
    }

    pub fn from_entries(modulus: u32, rows: &[[i64; 4]]) -> Result<ImageGroup> {
        let gens = rows
            .iter()
            .map(|r| Mat2::new(modulus, *r))
            .collect::<Result<Vec<_>>>()?;
        ImageGroup::new(modulus, gens)
    }

    /// The trivial subgroup; at modulus 1 this is all of `GL2(Z/1Z)`.
    pub fn trivial(modulus: u32) -> Result<ImageGroup> {
        ImageGroup::new(modulus, Vec::new())
    }

    /// All of `GL2(Z/NZ)`.
    pub fn full(modulus: u32) -> Result<ImageGroup> {
        let mut gens = sl2_generators(modulus);
        gens.extend(
            unit_generators(modulus)
                .into_iter()
                .map(|u| Mat2::from_reduced(modulus, 1 % modulus, 0, 0, u)),
        );
        ImageGroup::new(modulus, gens)
    }

    /// `B1(N)`: upper triangular matrices with upper-left entry 1.
    pub fn borel_one(modulus: u32) -> Result<ImageGroup> {
        let one = 1 % modulus;
        let mut gens = vec![Mat2::from_reduced(modulus, one, one, 0, one)];
        gens.extend(
            unit_generators(modulus)
                .into_iter()
                .map(|u| Mat2::from_reduced(modulus, one, 0, 0, u)),
        );
        ImageGroup::new(modulus, gens)
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn generators(&self) -> &[Mat2] {
        &self.generators
    }

    pub(crate) fn chain(&self) -> Result<&StabChain> {
        if let Some(c) = self.chain.get() {
            return Ok(c);
        }
        check_ceiling(self.modulus)?;
        Ok(self
            .chain
            .get_or_init(|| Arc::new(StabChain::build(self.modulus, &self.generators))))
    }

    /// `|<generators>|`, via the stabilizer chain.
    pub fn order(&self) -> Result<u64> {
        Ok(self.chain()?.order())
    }

    pub fn contains(&self, m: &Mat2) -> Result<bool> {
        if m.modulus() != self.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus,
                right: m.modulus(),
            });
        }
        Ok(self.chain()?.contains(m))
    }

    /// `<G, -I>`.
    pub fn adjoin_minus_identity(&self) -> ImageGroup {
        let minus = Mat2::minus_identity(self.modulus);
        let present = minus.is_identity()
            || self.generators.contains(&minus)
            || self
                .chain
                .get()
                .map(|c| c.contains(&minus))
                .unwrap_or(false);
        if present {
            return self.clone();
        }
        let mut gens = self.generators.clone();
        gens.push(minus);
        ImageGroup::new(self.modulus, gens).expect("same modulus")
    }

    /// Image of the group under reduction mod `a`, for `a | N`.
    pub fn reduce_mod(&self, a: u32) -> Result<ImageGroup> {
        if a == 0 || !self.modulus.is_multiple_of(a) {
            return Err(Error::NotADivisor {
                divisor: a,
                modulus: self.modulus,
            });
        }
        if a == self.modulus {
            return Ok(self.clone());
        }
        let mut gens: Vec<Mat2> = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let r = g.reduce(a)?;
            if !r.is_identity() && !gens.contains(&r) {
                gens.push(r);
            }
        }
        ImageGroup::new(a, gens)
    }

    /// Projection onto the `GL2(Z/qZ)` factor of the CRT splitting, `q || N`.
    pub fn crt_project(&self, q: u32) -> Result<ImageGroup> {
        if !is_unitary_divisor(q as u64, self.modulus as u64) {
            return Err(Error::NotUnitaryDivisor {
                divisor: q,
                modulus: self.modulus,
            });
        }
        self.reduce_mod(q)
    }

    /// Size of `det(G)` inside `(Z/NZ)^x`.
    pub fn det_image_size(&self) -> usize {
        let dets: Vec<u64> = self.generators.iter().map(|g| g.det() as u64).collect();
        unit_subgroup_size(&dets, self.modulus as u64)
    }

    pub fn has_surjective_det(&self) -> bool {
        self.det_image_size() as u64 == crate::arith::euler_phi(self.modulus as u64)
    }

    pub(crate) fn require_surjective_det(&self) -> Result<()> {
        let phi = crate::arith::euler_phi(self.modulus as u64);
        let size = self.det_image_size() as u64;
        if size != phi {
            return Err(Error::DeterminantNotSurjective {
                modulus: self.modulus,
                index: phi / size,
            });
        }
        Ok(())
    }

    /// Orbits of the group on `(Z/NZ)^2`.
    pub fn orbits(&self) -> Result<OrbitTable> {
        OrbitTable::build(self)
    }

    /// Whether the group is all of `GL2(Z/NZ)`.
    pub fn is_full(&self) -> Result<bool> {
        Ok(self.order()? == crate::levels::gl2_order_formula(self.modulus as u64))
    }

    /// Same group, fewer generators: keeps a generator only if it is not in
    /// the span of the ones kept so far. Useful before coset enumeration.
    pub fn pruned(&self) -> Result<ImageGroup> {
        let mut kept = ImageGroup::trivial(self.modulus)?;
        for g in &self.generators {
            if !kept.contains(g)? {
                let mut gens = kept.generators.clone();
                gens.push(*g);
                kept = ImageGroup::new(self.modulus, gens)?;
            }
        }
        Ok(kept)
    }
}

/// Generators of `SL2(Z/NZ)`: images of `S` and `T` (reduction from `SL2(Z)` is onto).
pub fn sl2_generators(modulus: u32) -> Vec<Mat2> {
    let n = modulus;
    let one = 1 % n;
    let minus_one = (n - 1) % n;
    vec![
        Mat2::from_reduced(n, 0, minus_one, one, 0),
        Mat2::from_reduced(n, one, one, 0, one),
    ]
}

/// A small generating set for `(Z/NZ)^x`, chosen greedily in increasing order.
pub fn unit_generators(modulus: u32) -> Vec<u32> {
    let n = modulus as u64;
    let phi = crate::arith::euler_phi(n);
    let mut gens: Vec<u64> = Vec::new();
    let mut size = 1u64;
    let mut u = 2;
    while size < phi && u < n {
        if gcd(u, n) == 1 {
            let mut trial = gens.clone();
            trial.push(u);
            let s = unit_subgroup_size(&trial, n) as u64;
            if s > size {
                gens = trial;
                size = s;
            }
        }
        u += 1;
    }
    gens.into_iter().map(|u| u as u32).collect()
}

/// Breadth-first closure of `generators`; `None` once more than `limit`
/// elements have been found. This is the brute-force oracle for orders and
/// membership, and the element enumerator for small groups.
pub fn enumerate_elements(modulus: u32, generators: &[Mat2], limit: usize) -> Option<Vec<Mat2>> {
    let id = Mat2::identity(modulus);
    let mut seen = HashSet::new();
    seen.insert(id.key());
    let mut elements = vec![id];
    let mut head = 0;
    while head < elements.len() {
        let x = elements[head];
        head += 1;
        for g in generators {
            let y = g.mul_unchecked(&x);
            if seen.insert(y.key()) {
                if elements.len() >= limit {
                    return None;
                }
                elements.push(y);
            }
        }
    }
    Some(elements)
}

/// Stabilizer chain for the natural action on `(Z/NZ)^2` with base `(e1, e2)`.
///
/// A matrix fixing both `e1` and `e2` is the identity, so the chain has
/// exactly two levels and the second level needs no transversal: an element
/// of `Stab(e1)` lies in the group iff its image of `e2` lies in the
/// second-level orbit.
pub(crate) struct StabChain {
    modulus: u32,
    /// Position of each point in `transversal`, or `u32::MAX`.
    orbit0: Vec<u32>,
    /// `transversal[i]` maps `e1` to the i-th point of the first orbit.
    transversal: Vec<Mat2>,
    level1: Vec<bool>,
    level1_points: Vec<Vec2>,
    stab_gens: Vec<Mat2>,
}

impl StabChain {
    fn build(n: u32, gens: &[Mat2]) -> StabChain {
        let size = n as usize * n as usize;
        let e1 = Vec2::new(1 % n, 0);
        let e2 = Vec2::new(0, 1 % n);
        let mut chain = StabChain {
            modulus: n,
            orbit0: vec![u32::MAX; size],
            transversal: Vec::new(),
            level1: vec![false; size],
            level1_points: Vec::new(),
            stab_gens: Vec::new(),
        };
        if n == 1 {
            chain.orbit0[0] = 0;
            chain.transversal.push(Mat2::identity(1));
            chain.level1[0] = true;
            chain.level1_points.push(e2);
            return chain;
        }

        // First level: orbit of e1 with transversal.
        let mut points = vec![e1];
        chain.orbit0[e1.index(n)] = 0;
        chain.transversal.push(Mat2::identity(n));
        let mut head = 0;
        while head < points.len() {
            let beta = points[head];
            let u = chain.transversal[head];
            head += 1;
            for g in gens {
                let gamma = g.apply(beta);
                let slot = &mut chain.orbit0[gamma.index(n)];
                if *slot == u32::MAX {
                    *slot = points.len() as u32;
                    points.push(gamma);
                    chain.transversal.push(g.mul_unchecked(&u));
                }
            }
        }

        // Second level: orbit of e2 under Stab(e1), generated by Schreier
        // generators u_{g beta}^{-1} g u_beta.
        chain.level1[e2.index(n)] = true;
        chain.level1_points.push(e2);
        for (i, &beta) in points.iter().enumerate() {
            let u = chain.transversal[i];
            for g in gens {
                let gamma = g.apply(beta);
                let w = chain.transversal[chain.orbit0[gamma.index(n)] as usize];
                let s = w.inverse().mul_unchecked(&g.mul_unchecked(&u));
                if !chain.level1[s.apply(e2).index(n)] {
                    chain.add_stab_generator(s);
                }
            }
        }
        chain
    }

    fn add_stab_generator(&mut self, s: Mat2) {
        let n = self.modulus;
        self.stab_gens.push(s);
        let mut queue = Vec::new();
        for p in self.level1_points.iter() {
            let q = s.apply(*p);
            if !self.level1[q.index(n)] {
                self.level1[q.index(n)] = true;
                queue.push(q);
            }
        }
        while let Some(p) = queue.pop() {
            self.level1_points.push(p);
            for t in &self.stab_gens {
                let q = t.apply(p);
                if !self.level1[q.index(n)] {
                    self.level1[q.index(n)] = true;
                    queue.push(q);
                }
            }
        }
    }

    pub(crate) fn order(&self) -> u64 {
        self.transversal.len() as u64 * self.level1_points.len() as u64
    }

    pub(crate) fn contains(&self, m: &Mat2) -> bool {
        let n = self.modulus;
        if n == 1 {
            return true;
        }
        let beta = m.apply(Vec2::new(1, 0));
        let pos = self.orbit0[beta.index(n)];
        if pos == u32::MAX {
            return false;
        }
        let residue = self.transversal[pos as usize].inverse().mul_unchecked(m);
        self.level1[residue.apply(Vec2::new(0, 1)).index(n)]
    }
}

/// Divisors `m | N` at which a group is still the full preimage of its
/// reduction, i.e. candidates for its level; used by tests and diagnostics.
pub fn preimage_divisors(g: &ImageGroup) -> Result<Vec<u32>> {
    let n = g.modulus() as u64;
    let order = g.order()?;
    let mut out = Vec::new();
    for m in divisors(n) {
        let r = g.reduce_mod(m as u32)?;
        if order == r.order()? * crate::levels::kernel_size(n, m)? {
            out.push(m as u32);
        }
    }
    Ok(out)
}
