//! Level reduction: from the adelic level to the smallest level that
//! still sees every torsion degree.

use serde::Serialize;

use crate::arith::{divisors, factorize, prime_divisors, valuation};
use crate::error::{Error, Result};
use crate::gl2::ImageGroup;

/// `|GL2(Z/nZ)| = n^4 * prod_{p | n} (1 - 1/p)(1 - 1/p^2)`.
pub fn gl2_order_formula(n: u64) -> u64 {
    let mut order: u128 = (n as u128).pow(4);
    for p in prime_divisors(n) {
        let p = p as u128;
        order = order / (p * p * p) * ((p - 1) * (p * p - 1));
    }
    u64::try_from(order).expect("|GL2| overflows u64")
}

/// `|ker(GL2(Z/nZ) -> GL2(Z/mZ))|` for `m | n`.
pub fn kernel_size(n: u64, m: u64) -> Result<u64> {
    if m == 0 || !n.is_multiple_of(m) {
        return Err(Error::NotADivisor {
            divisor: m as u32,
            modulus: n as u32,
        });
    }
    Ok(gl2_order_formula(n) / gl2_order_formula(m))
}

/// `{2, 3}` together with the primes `l >= 5` dividing the level at which the
/// mod-`l` image is not all of `GL2(F_l)`. Sorted ascending.
///
/// Fails with [`Error::DeterminantNotSurjective`] when `det(G)` is a proper
/// subgroup of the units, which never happens for an image over `Q`.
pub fn nonsurjective_primes(g: &ImageGroup) -> Result<Vec<u32>> {
    g.require_surjective_det()?;
    let mut out = vec![2, 3];
    for l in prime_divisors(g.modulus() as u64) {
        if l < 5 {
            continue;
        }
        let local = g.reduce_mod(l as u32)?;
        if local.order()? < gl2_order_formula(l) {
            out.push(l as u32);
        }
    }
    Ok(out)
}

/// Outcome of level reduction.
#[derive(Debug, Clone, Serialize)]
pub struct LevelReduction {
    pub adelic_level: u32,
    pub primes: Vec<u32>,
    /// Part of the adelic level supported on the non-surjective primes.
    pub n: u32,
    /// Smallest divisor of `n` at which `G(n)` is a full preimage.
    pub m0: u32,
    #[serde(skip)]
    pub group: ImageGroup,
}

/// Compute `n`, `m0` and `G(m0)` for an image given at its adelic level.
pub fn reduce_level(g: &ImageGroup) -> Result<LevelReduction> {
    let big_n = g.modulus();
    let primes = nonsurjective_primes(g)?;
    let n: u32 = primes
        .iter()
        .map(|&l| l.pow(valuation(big_n as u64, l as u64)))
        .product();
    let gn = g.reduce_mod(n)?;
    let order_n = gn.order()?;
    for m in divisors(n as u64) {
        let gm = gn.reduce_mod(m as u32)?;
        if gm.order()? * kernel_size(n as u64, m)? == order_n {
            return Ok(LevelReduction {
                adelic_level: big_n,
                primes,
                n,
                m0: m as u32,
                group: gm,
            });
        }
    }
    unreachable!("m = n always qualifies")
}

/// Prime-power factors `l^v` of `n`, e.g. for CRT projections.
pub fn prime_power_parts(n: u32) -> Vec<u32> {
    factorize(n as u64)
        .into_iter()
        .map(|(p, e)| (p as u32).pow(e))
        .collect()
}
