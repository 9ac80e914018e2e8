use serde::Serialize;

use crate::error::Result;
use crate::gl2::group::check_ceiling;
use crate::gl2::{ImageGroup, Vec2};

/// One orbit of a group acting on `(Z/NZ)^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub id: usize,
    /// Lexicographically least member.
    pub representative: Vec2,
    pub size: u64,
    /// Additive order shared by every member.
    pub order: u32,
}

/// Partition of `(Z/NZ)^2` into orbits.
///
/// Orbits are numbered in order of their least member, so the numbering is
/// a function of the group alone and not of its generating set.
#[derive(Debug, Clone)]
pub struct OrbitTable {
    modulus: u32,
    orbit_of: Vec<u32>,
    orbits: Vec<Orbit>,
}

impl OrbitTable {
    pub(crate) fn build(g: &ImageGroup) -> Result<OrbitTable> {
        let n = g.modulus();
        check_ceiling(n)?;
        let size = n as usize * n as usize;
        let mut orbit_of = vec![u32::MAX; size];
        let mut orbits = Vec::new();
        let mut stack = Vec::new();
        for start in 0..size {
            if orbit_of[start] != u32::MAX {
                continue;
            }
            let id = orbits.len() as u32;
            orbit_of[start] = id;
            stack.push(start);
            let mut count = 0u64;
            while let Some(i) = stack.pop() {
                count += 1;
                let v = Vec2::from_index(i, n);
                for m in g.generators() {
                    let j = m.apply(v).index(n);
                    if orbit_of[j] == u32::MAX {
                        orbit_of[j] = id;
                        stack.push(j);
                    }
                }
            }
            let representative = Vec2::from_index(start, n);
            orbits.push(Orbit {
                id: id as usize,
                representative,
                size: count,
                order: representative.order(n),
            });
        }
        Ok(OrbitTable {
            modulus: n,
            orbit_of,
            orbits,
        })
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn orbits(&self) -> &[Orbit] {
        &self.orbits
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    /// Id of the orbit containing `v` (reduced mod N first).
    pub fn orbit_id(&self, v: Vec2) -> usize {
        let n = self.modulus;
        self.orbit_of[v.reduce(n).index(n)] as usize
    }

    pub fn orbit_of(&self, v: Vec2) -> &Orbit {
        &self.orbits[self.orbit_id(v)]
    }

    pub fn members(&self, id: usize) -> Vec<Vec2> {
        self.orbit_of
            .iter()
            .enumerate()
            .filter(|(_, &o)| o as usize == id)
            .map(|(i, _)| Vec2::from_index(i, self.modulus))
            .collect()
    }
}
