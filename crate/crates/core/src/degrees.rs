//! Degrees of closed points on `X1(n)` above a fixed `j`, and primitive
//! targets.
//!
//! Vectors of order `n` in `(Z/m0)^2` are the `(m0/n)`-multiples of vectors
//! of order `n` in `(Z/n)^2`, and `<G, -I>`-orbits correspond under that
//! scaling. So a single orbit table at `m0` answers degree questions at every
//! level dividing `m0`.

use serde::Serialize;

use crate::arith::{divisors, prime_divisors};
use crate::error::{Error, Result};
use crate::gl2::{ImageGroup, OrbitTable, Vec2};

/// Degree of the natural map `X1(ab) -> X1(a)`.
pub fn map_degree(a: u64, b: u64) -> u64 {
    assert!(a >= 1 && b >= 1);
    let mut num = b * b;
    for p in prime_divisors(b) {
        if !a.is_multiple_of(p) {
            num = num / (p * p) * (p * p - 1);
        }
    }
    if a <= 2 && a * b > 2 {
        assert!(
            num.is_multiple_of(2),
            "map_degree({a}, {b}) is not integral"
        );
        num /= 2;
    }
    num
}

/// Degree of the closed point attached to an orbit of vectors of the given
/// additive order, for a group containing `-I`.
pub fn point_degree(orbit_size: u64, order: u32) -> Result<u64> {
    if order > 2 {
        if !orbit_size.is_multiple_of(2) {
            return Err(Error::OddOrbit {
                size: orbit_size,
                order,
            });
        }
        Ok(orbit_size / 2)
    } else {
        Ok(orbit_size)
    }
}

/// A closed point on `X1(level)`, one per orbit of the ambient table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointClass {
    pub orbit: usize,
    pub representative: Vec2,
    pub level: u32,
    pub degree: u64,
}

/// `<n, (a, d)>`: a point on `X1(n)` and the point on `X1(a)` it maps to
/// with full degree drop.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimitiveEntry {
    pub orbit: usize,
    pub representative: Vec2,
    pub source_level: u32,
    pub source_degree: u64,
    pub target_level: u32,
    pub target_degree: u64,
}

impl PrimitiveEntry {
    /// The entry is its own target.
    pub fn is_sink(&self) -> bool {
        self.source_level == self.target_level
    }
}

/// Orbit table of `<G, -I>` at `m0` together with the point class of each orbit.
#[derive(Debug, Clone)]
pub struct DegreeTable {
    group: ImageGroup,
    table: OrbitTable,
    classes: Vec<PointClass>,
}

impl DegreeTable {
    /// `g` is the image at `m0`; `-I` is adjoined here.
    pub fn new(g: &ImageGroup) -> Result<DegreeTable> {
        let group = g.adjoin_minus_identity();
        let table = group.orbits()?;
        let classes = table
            .orbits()
            .iter()
            .map(|o| {
                Ok(PointClass {
                    orbit: o.id,
                    representative: o.representative,
                    level: o.order,
                    degree: point_degree(o.size, o.order)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DegreeTable {
            group,
            table,
            classes,
        })
    }

    pub fn modulus(&self) -> u32 {
        self.table.modulus()
    }

    /// `<G, -I>` at `m0`.
    pub fn group(&self) -> &ImageGroup {
        &self.group
    }

    pub fn table(&self) -> &OrbitTable {
        &self.table
    }

    pub fn classes(&self) -> &[PointClass] {
        &self.classes
    }

    pub fn class_of(&self, v: Vec2) -> &PointClass {
        &self.classes[self.table.orbit_id(v)]
    }

    /// Closed points on `X1(level)`, for `level | m0`.
    pub fn classes_at(&self, level: u32) -> impl Iterator<Item = &PointClass> {
        self.classes.iter().filter(move |c| c.level == level)
    }

    fn qualifies(&self, v: Vec2, n: u32, deg: u64, e: u32) -> bool {
        let image = self.class_of(v.scale(e as u64, self.modulus()));
        deg == image.degree * map_degree((n / e) as u64, e as u64)
    }

    /// Every `e | n` for which `x -> e.x` drops the full map degree.
    pub fn qualifying_divisors(&self, orbit: usize) -> Vec<u32> {
        let class = &self.classes[orbit];
        let n = class.level;
        divisors(n as u64)
            .into_iter()
            .map(|e| e as u32)
            .filter(|&e| self.qualifies(class.representative, n, class.degree, e))
            .collect()
    }

    /// The primitive entry for one orbit: largest qualifying `e`, scanning
    /// divisors of `n` downward.
    pub fn primitive_target(&self, orbit: usize) -> PrimitiveEntry {
        let class = &self.classes[orbit];
        let n = class.level;
        let v = class.representative;
        let e = divisors(n as u64)
            .into_iter()
            .rev()
            .map(|e| e as u32)
            .find(|&e| self.qualifies(v, n, class.degree, e))
            .expect("e = 1 always qualifies");
        debug_assert!(
            divisor_closed_with_max(&self.qualifying_divisors(orbit), e),
            "qualifying divisors of orbit {orbit} are not divisor-closed"
        );
        let target = self.class_of(v.scale(e as u64, self.modulus()));
        PrimitiveEntry {
            orbit,
            representative: v,
            source_level: n,
            source_degree: class.degree,
            target_level: n / e,
            target_degree: target.degree,
        }
    }
}

/// `set` is closed under taking divisors and every member divides `max`.
pub fn divisor_closed_with_max(set: &[u32], max: u32) -> bool {
    set.contains(&max)
        && set.iter().all(|&e| {
            max.is_multiple_of(e)
                && divisors(e as u64)
                    .into_iter()
                    .all(|f| set.contains(&(f as u32)))
        })
        && divisors(max as u64)
            .into_iter()
            .all(|f| set.contains(&(f as u32)))
}

/// The multiset `D` for an image at `m0`, one entry per orbit (zero orbit included).
#[derive(Debug, Clone)]
pub struct PrimitiveDegrees {
    pub table: DegreeTable,
    pub entries: Vec<PrimitiveEntry>,
}

pub fn primitive_degrees(g: &ImageGroup) -> Result<PrimitiveDegrees> {
    let table = DegreeTable::new(g)?;
    let entries = (0..table.classes().len())
        .map(|i| table.primitive_target(i))
        .collect();
    Ok(PrimitiveDegrees { table, entries })
}
