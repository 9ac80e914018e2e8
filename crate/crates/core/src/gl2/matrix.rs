use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, inv_mod};
use crate::error::{Error, Result};

/// A 2x2 matrix over `Z/NZ`, entries kept reduced into `[0, N)`.
///
/// Invertibility is checked on construction through [`Mat2::new`]; the
/// unchecked constructor is for products of already-valid matrices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    modulus: u32,
    a: u32,
    b: u32,
    c: u32,
    d: u32,
}

/// A vector in `(Z/NZ)^2`, acted on by [`Mat2`] from the left.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: u32,
    pub y: u32,
}

impl Mat2 {
    /// Build `[[a, b], [c, d]]` mod `modulus`, rejecting non-invertible matrices.
    pub fn new(modulus: u32, entries: [i64; 4]) -> Result<Mat2> {
        if modulus == 0 {
            return Err(Error::InvalidModulus(0));
        }
        let n = modulus as u64;
        let r = |x: i64| crate::arith::reduce_signed(x, n) as u32;
        let m = Mat2 {
            modulus,
            a: r(entries[0]),
            b: r(entries[1]),
            c: r(entries[2]),
            d: r(entries[3]),
        };
        if gcd(m.det() as u64, n) != 1 {
            return Err(Error::NotInvertible {
                entries: m.entries(),
                modulus,
            });
        }
        Ok(m)
    }

    pub(crate) fn from_reduced(modulus: u32, a: u32, b: u32, c: u32, d: u32) -> Mat2 {
        Mat2 {
            modulus,
            a,
            b,
            c,
            d,
        }
    }

    pub fn identity(modulus: u32) -> Mat2 {
        let one = if modulus == 1 { 0 } else { 1 };
        Mat2::from_reduced(modulus, one, 0, 0, one)
    }

    pub fn minus_identity(modulus: u32) -> Mat2 {
        let m1 = modulus - 1;
        Mat2::from_reduced(modulus, m1, 0, 0, m1)
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Entries in row-major order `[a, b, c, d]`.
    pub fn entries(&self) -> [u32; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> u32 {
        let n = self.modulus as u64;
        let ad = self.a as u64 * self.d as u64 % n;
        let bc = self.b as u64 * self.c as u64 % n;
        ((ad + n - bc) % n) as u32
    }

    pub fn trace(&self) -> u32 {
        ((self.a as u64 + self.d as u64) % self.modulus as u64) as u32
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat2::identity(self.modulus)
    }

    /// Product `self * rhs`; the moduli must agree.
    pub fn mul(&self, rhs: &Mat2) -> Result<Mat2> {
        if self.modulus != rhs.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus,
                right: rhs.modulus,
            });
        }
        Ok(self.mul_unchecked(rhs))
    }

    #[inline]
    pub(crate) fn mul_unchecked(&self, rhs: &Mat2) -> Mat2 {
        let n = self.modulus as u64;
        let (a, b, c, d) = (self.a as u64, self.b as u64, self.c as u64, self.d as u64);
        let (e, f, g, h) = (rhs.a as u64, rhs.b as u64, rhs.c as u64, rhs.d as u64);
        Mat2 {
            modulus: self.modulus,
            a: ((a * e + b * g) % n) as u32,
            b: ((a * f + b * h) % n) as u32,
            c: ((c * e + d * g) % n) as u32,
            d: ((c * f + d * h) % n) as u32,
        }
    }

    pub fn inverse(&self) -> Mat2 {
        let n = self.modulus as u64;
        let di = inv_mod(self.det() as u64, n).expect("Mat2 invariant: unit determinant");
        let neg = |x: u32| (n - x as u64) % n;
        Mat2 {
            modulus: self.modulus,
            a: (self.d as u64 * di % n) as u32,
            b: (neg(self.b) * di % n) as u32,
            c: (neg(self.c) * di % n) as u32,
            d: (self.a as u64 * di % n) as u32,
        }
    }

    pub fn pow(&self, mut e: u64) -> Mat2 {
        let mut base = *self;
        let mut acc = Mat2::identity(self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    /// Reduce entrywise modulo a divisor of the modulus.
    pub fn reduce(&self, m: u32) -> Result<Mat2> {
        if m == 0 || !self.modulus.is_multiple_of(m) {
            return Err(Error::NotADivisor {
                divisor: m,
                modulus: self.modulus,
            });
        }
        Ok(Mat2 {
            modulus: m,
            a: self.a % m,
            b: self.b % m,
            c: self.c % m,
            d: self.d % m,
        })
    }

    #[inline]
    pub fn apply(&self, v: Vec2) -> Vec2 {
        let n = self.modulus as u64;
        let (x, y) = (v.x as u64, v.y as u64);
        Vec2 {
            x: ((self.a as u64 * x + self.b as u64 * y) % n) as u32,
            y: ((self.c as u64 * x + self.d as u64 * y) % n) as u32,
        }
    }

    /// Dense key, injective for a fixed modulus below 2^16.
    #[inline]
    pub(crate) fn key(&self) -> u64 {
        let n = self.modulus as u64;
        ((self.a as u64 * n + self.b as u64) * n + self.c as u64) * n + self.d as u64
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]] mod {}",
            self.a, self.b, self.c, self.d, self.modulus
        )
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Vec2 {
    pub fn new(x: u32, y: u32) -> Vec2 {
        Vec2 { x, y }
    }

    pub fn zero() -> Vec2 {
        Vec2 { x: 0, y: 0 }
    }

    /// Additive order of the vector in `(Z/nZ)^2`.
    pub fn order(&self, n: u32) -> u32 {
        let g = gcd(gcd(self.x as u64, self.y as u64), n as u64);
        (n as u64 / g) as u32
    }

    pub fn scale(&self, k: u64, n: u32) -> Vec2 {
        let n = n as u64;
        Vec2 {
            x: (self.x as u64 * (k % n) % n) as u32,
            y: (self.y as u64 * (k % n) % n) as u32,
        }
    }

    pub fn reduce(&self, m: u32) -> Vec2 {
        Vec2 {
            x: self.x % m,
            y: self.y % m,
        }
    }

    #[inline]
    pub(crate) fn index(&self, n: u32) -> usize {
        self.x as usize * n as usize + self.y as usize
    }

    #[inline]
    pub(crate) fn from_index(i: usize, n: u32) -> Vec2 {
        Vec2 {
            x: (i / n as usize) as u32,
            y: (i % n as usize) as u32,
        }
    }
}

impl fmt::Debug for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: u32, e: [i64; 4]) -> Mat2 {
        Mat2::new(n, e).unwrap()
    }

    #[test]
    fn products() {
        let i5 = Mat2::identity(5);
        assert_eq!(i5.mul(&i5).unwrap(), i5);
        let t = m(7, [1, 1, 0, 1]);
        assert_eq!(t.mul(&t).unwrap(), m(7, [1, 2, 0, 1]));
        assert!(matches!(
            t.mul(&Mat2::identity(5)),
            Err(Error::ModulusMismatch { .. })
        ));
    }

    #[test]
    fn determinant_is_multiplicative_mod_12() {
        // Exhaustive over a slice of GL2(Z/12Z).
        let all: Vec<Mat2> = (0..12i64.pow(4)).step_by(7).filter_map(m12).collect();
        for a in all.iter().take(200) {
            for b in all.iter().take(200) {
                let ab = a.mul(b).unwrap();
                assert_eq!(ab.det() as u64, a.det() as u64 * b.det() as u64 % 12);
            }
        }
    }

    fn m12(k: i64) -> Option<Mat2> {
        Mat2::new(12, [k % 12, (k / 12) % 12, (k / 144) % 12, (k / 1728) % 12]).ok()
    }

    #[test]
    fn inverse_and_rejection() {
        let g = m(148, [3, 5, 7, 14]);
        assert!(g.mul(&g.inverse()).unwrap().is_identity());
        assert!(matches!(
            Mat2::new(4, [2, 0, 0, 2]),
            Err(Error::NotInvertible { .. })
        ));
        assert_eq!(m(5, [-1, 0, 0, -1]), Mat2::minus_identity(5));
    }

    #[test]
    fn modulus_one_is_trivial() {
        let i = Mat2::identity(1);
        assert_eq!(i.entries(), [0, 0, 0, 0]);
        assert_eq!(i, Mat2::minus_identity(1));
        assert_eq!(Mat2::new(1, [5, 3, 2, 7]).unwrap(), i);
        assert_eq!(i.apply(Vec2::zero()), Vec2::zero());
    }

    #[test]
    fn vector_orders() {
        assert_eq!(Vec2::new(0, 0).order(12), 1);
        assert_eq!(Vec2::new(6, 0).order(12), 2);
        assert_eq!(Vec2::new(4, 6).order(12), 6);
        assert_eq!(Vec2::new(1, 0).order(12), 12);
    }
}
