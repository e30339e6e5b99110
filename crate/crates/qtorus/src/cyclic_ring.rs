//! Exact arithmetic in the cyclic rings `Z/(m)`, with `m = 0` encoding `Z`.
//!
//! Beyond plain residue arithmetic this module knows the multiplicative
//! structure a principal ideal ring needs for normal forms: the unit group,
//! additive orders, ring divisibility (`a | b` iff `bZ` is contained in `aZ`),
//! and the multiplicatively closed representative set `P` of prime-power
//! products. Every element factors as `unit * rep` with `rep` in `P`, and the
//! `rep` is the canonical generator of the ideal the element spans.

use crate::{Error, Result};
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Modulus of a cyclic ring; `0` means the infinite ring `Z`.
///
/// Finite moduli are capped at `2^32` so that products of canonical residues
/// never overflow an `i128` intermediate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Modulus(u64);

impl Modulus {
    pub const Z: Modulus = Modulus(0);

    pub fn new(m: u64) -> Result<Modulus> {
        if m > (1 << 32) {
            return Err(Error::ModulusTooLarge(m));
        }
        Ok(Modulus(m))
    }

    pub fn value(self) -> u64 {
        self.0
    }

    /// True when the ring is infinite (`m = 0`).
    pub fn is_z(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_z() {
            write!(f, "Z")
        } else {
            write!(f, "Z/({})", self.0)
        }
    }
}

/// An element of `Z/(m)`, stored as the canonical residue in `[0, m)`.
///
/// For `m = 0` the value is a plain (desk-scale) integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingElt {
    value: i64,
    modulus: Modulus,
}

/// Reduces `x` to its canonical residue; the identity map when `m = 0`.
pub fn canonical(x: i64, m: Modulus) -> RingElt {
    RingElt::new(x, m)
}

impl RingElt {
    pub fn new(x: i64, m: Modulus) -> RingElt {
        let value = if m.is_z() {
            x
        } else {
            x.rem_euclid(m.0 as i64)
        };
        RingElt { value, modulus: m }
    }

    pub fn zero(m: Modulus) -> RingElt {
        RingElt::new(0, m)
    }

    pub fn one(m: Modulus) -> RingElt {
        RingElt::new(1, m)
    }

    pub fn value(self) -> i64 {
        self.value
    }

    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn require_same(self, other: RingElt) {
        assert_eq!(
            self.modulus, other.modulus,
            "ring elements have mismatched moduli"
        );
    }

    pub fn add(self, other: RingElt) -> RingElt {
        self.require_same(other);
        if self.modulus.is_z() {
            RingElt::new(
                self.value.checked_add(other.value).expect("Z-element overflow"),
                self.modulus,
            )
        } else {
            let m = self.modulus.0 as i128;
            let v = (self.value as i128 + other.value as i128).rem_euclid(m);
            RingElt {
                value: v as i64,
                modulus: self.modulus,
            }
        }
    }

    pub fn neg(self) -> RingElt {
        if self.modulus.is_z() {
            RingElt::new(-self.value, self.modulus)
        } else {
            RingElt::new(
                if self.value == 0 {
                    0
                } else {
                    self.modulus.0 as i64 - self.value
                },
                self.modulus,
            )
        }
    }

    pub fn sub(self, other: RingElt) -> RingElt {
        self.add(other.neg())
    }

    pub fn mul(self, other: RingElt) -> RingElt {
        self.require_same(other);
        if self.modulus.is_z() {
            RingElt::new(
                self.value.checked_mul(other.value).expect("Z-element overflow"),
                self.modulus,
            )
        } else {
            let m = self.modulus.0 as i128;
            let v = (self.value as i128 * other.value as i128).rem_euclid(m);
            RingElt {
                value: v as i64,
                modulus: self.modulus,
            }
        }
    }

    pub fn pow(self, mut k: u64) -> RingElt {
        let mut base = self;
        let mut acc = RingElt::one(self.modulus);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            k >>= 1;
        }
        acc
    }

    /// True iff the element is invertible: `gcd(x, m) = 1` for finite `m`,
    /// `x = +-1` over `Z`.
    pub fn is_unit(self) -> bool {
        if self.modulus.is_z() {
            self.value == 1 || self.value == -1
        } else {
            self.value.gcd(&(self.modulus.0 as i64)) == 1
        }
    }

    /// Multiplicative inverse of a unit.
    pub fn inverse(self) -> Result<RingElt> {
        if self.modulus.is_z() {
            return if self.value == 1 || self.value == -1 {
                Ok(self)
            } else {
                Err(Error::NotInvertible)
            };
        }
        let m = self.modulus.0 as i64;
        let ext = self.value.extended_gcd(&m);
        if ext.gcd != 1 {
            return Err(Error::NotInvertible);
        }
        Ok(RingElt::new(ext.x, self.modulus))
    }

    /// Additive order of the element; `0` encodes infinite order.
    pub fn additive_order(self) -> u64 {
        if self.modulus.is_z() {
            if self.value == 0 {
                1
            } else {
                0
            }
        } else {
            let m = self.modulus.0;
            m / (self.value as u64).gcd(&m)
        }
    }
}

impl fmt::Display for RingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// An element known to lie in the representative set `P`.
///
/// For finite `m` with prime factorization `p_1^{l_1} ... p_k^{l_k}`, `P` is
/// the set of residues `p_1^{j_1} ... p_k^{j_k}` with `0 <= j_i <= l_i`; it is
/// multiplicatively closed and meets every coset of the unit group exactly
/// once. Over `Z` the representatives are the non-negative integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PRep(RingElt);

impl PRep {
    pub fn elt(self) -> RingElt {
        self.0
    }

    pub fn value(self) -> i64 {
        self.0.value
    }

    pub fn modulus(self) -> Modulus {
        self.0.modulus
    }

    pub fn is_zero(self) -> bool {
        self.0.is_zero()
    }

    pub fn one(m: Modulus) -> PRep {
        PRep(RingElt::one(m))
    }

    pub fn zero(m: Modulus) -> PRep {
        PRep(RingElt::zero(m))
    }
}

impl fmt::Display for PRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Prime factorization by trial division; moduli are desk scale.
pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All elements of `P`, sorted by descending additive order and then by value.
///
/// Rejects `m = 0`, where `P` is infinite; use [`prep_of`] instead.
pub fn p_representatives(m: Modulus) -> Result<Vec<PRep>> {
    if m.is_z() {
        return Err(Error::InfiniteRing);
    }
    let factors = factorize(m.0);
    let mut reps = vec![1u64];
    for &(p, l) in &factors {
        let mut next = Vec::with_capacity(reps.len() * (l as usize + 1));
        for &r in &reps {
            let mut pw = 1u64;
            for _ in 0..=l {
                next.push(r * pw % m.0.max(1));
                pw *= p;
            }
        }
        reps = next;
    }
    if m.0 == 1 {
        reps = vec![0];
    }
    let mut out: Vec<PRep> = reps
        .into_iter()
        .map(|v| PRep(RingElt::new(v as i64, m)))
        .collect();
    out.sort_by(|a, b| {
        b.0.additive_order()
            .cmp(&a.0.additive_order())
            .then(a.value().cmp(&b.value()))
    });
    out.dedup();
    Ok(out)
}

/// Factors `x = u * h` with `u` a unit and `h` in `P`; `h` generates `xZ`.
pub fn prep_of(x: RingElt) -> (PRep, RingElt) {
    let m = x.modulus;
    if m.is_z() {
        let h = PRep(RingElt::new(x.value.abs(), m));
        let u = RingElt::new(if x.value < 0 { -1 } else { 1 }, m);
        return (h, u);
    }
    if m.0 == 1 {
        return (PRep(RingElt::zero(m)), RingElt::zero(m));
    }
    if x.is_zero() {
        return (PRep(RingElt::zero(m)), RingElt::one(m));
    }
    let mut h = 1u64;
    for (p, l) in factorize(m.0) {
        let mut v = 0u32;
        let mut t = x.value as u64;
        while v < l && t.is_multiple_of(p) {
            t /= p;
            v += 1;
        }
        h *= p.pow(v);
    }
    // x / h is exact over Z; bump it into the unit class mod m.
    let mut u = (x.value as u64 / h) % m.0;
    let step = m.0 / h;
    while (u).gcd(&m.0) != 1 {
        u = (u + step) % m.0;
    }
    (PRep(RingElt::new(h as i64, m)), RingElt::new(u as i64, m))
}

/// Ring divisibility: `a | b` iff `bZ` is a subset of `aZ`.
///
/// Uses the convention `gcd(m, 0) = m`, so `a | 0` always holds.
pub fn divides(a: RingElt, b: RingElt) -> bool {
    assert_eq!(a.modulus, b.modulus, "divides: mismatched moduli");
    if a.modulus.is_z() {
        if a.value == 0 {
            return b.value == 0;
        }
        return b.value % a.value == 0;
    }
    let m = a.modulus.0 as i64;
    let g = a.value.gcd(&m);
    b.value % g == 0
}

/// The unique `h` in `P` with `h2 = h1 * h`, for nonzero `h1 | h2` in `P`.
pub fn p_quotient(h1: PRep, h2: PRep) -> Result<PRep> {
    let m = h1.modulus();
    assert_eq!(m, h2.modulus(), "p_quotient: mismatched moduli");
    if h1.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if h2.is_zero() {
        return Err(Error::NotDivisible(h1.value(), h2.value()));
    }
    if m.is_z() {
        if h2.value() % h1.value() != 0 {
            return Err(Error::NotDivisible(h1.value(), h2.value()));
        }
        return Ok(PRep(RingElt::new(h2.value() / h1.value(), m)));
    }
    let mut q = 1u64;
    for (p, l) in factorize(m.0) {
        let vp = |mut t: u64| {
            let mut v = 0u32;
            while v < l && t.is_multiple_of(p) {
                t /= p;
                v += 1;
            }
            v
        };
        let v1 = vp(h1.value() as u64);
        let v2 = vp(h2.value() as u64);
        if v1 > v2 {
            return Err(Error::NotDivisible(h1.value(), h2.value()));
        }
        q *= p.pow(v2 - v1);
    }
    Ok(PRep(RingElt::new(q as i64, m)))
}

/// All units of `Z/(m)` in ascending order; rejects `m = 0`.
pub fn unit_group(m: Modulus) -> Result<Vec<RingElt>> {
    if m.is_z() {
        return Err(Error::InfiniteRing);
    }
    Ok((0..m.0)
        .map(|v| RingElt::new(v as i64, m))
        .filter(|x| x.is_unit())
        .collect())
}
