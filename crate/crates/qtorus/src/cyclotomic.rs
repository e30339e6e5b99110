//! Exact arithmetic in the cyclotomic fields `Q(zeta_M)`.
//!
//! Elements are rational polynomial residues modulo the `M`-th cyclotomic
//! polynomial `Phi_M`, stored as dense coefficient vectors of length
//! `phi(M)`. This is the concrete scalar field for torus elements: a root of
//! unity `q` of order `m` lives in the field of conductor `lcm(m, 2)`, which
//! always contains `-1`.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

pub type Rational = BigRational;

/// Euler totient by trial-division factorization.
pub fn euler_phi(m: u64) -> u64 {
    let mut phi = 1u64;
    for (p, e) in crate::cyclic_ring::factorize(m) {
        phi *= p.pow(e - 1) * (p - 1);
    }
    phi
}

fn poly_cache() -> &'static RwLock<HashMap<u64, Arc<Vec<BigInt>>>> {
    static CACHE: std::sync::OnceLock<RwLock<HashMap<u64, Arc<Vec<BigInt>>>>> =
        std::sync::OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Exact division of integer polynomials; panics if the division is inexact.
/// Only used with divisors that are products of cyclotomic polynomials, where
/// exactness is guaranteed.
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dlead = den.last().expect("nonzero divisor");
    let dn = den.len() - 1;
    assert!(rem.len() > dn, "degree underflow in exact division");
    let qn = rem.len() - 1 - dn;
    let mut quot = vec![BigInt::zero(); qn + 1];
    for k in (0..=qn).rev() {
        let c = &rem[k + dn] / dlead;
        assert_eq!(&c * dlead, rem[k + dn], "inexact polynomial division");
        quot[k] = c.clone();
        for i in 0..=dn {
            let t = &c * &den[i];
            rem[k + i] -= t;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "nonzero remainder");
    quot
}

fn int_poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn divisors(m: u64) -> Vec<u64> {
    let mut d: Vec<u64> = (1..=m).filter(|k| m.is_multiple_of(*k)).collect();
    d.sort_unstable();
    d
}

/// The `M`-th cyclotomic polynomial as an integer coefficient vector
/// (constant term first). Computed by exact division of `x^M - 1` by the
/// lower cyclotomic factors and cached per conductor.
pub fn cyclotomic_poly(m: u64) -> Arc<Vec<BigInt>> {
    assert!(m >= 1, "conductor must be positive");
    if let Some(hit) = poly_cache().read().unwrap().get(&m) {
        return hit.clone();
    }
    let poly = if m == 1 {
        vec![BigInt::from(-1), BigInt::from(1)]
    } else {
        // x^M - 1 divided by the product of Phi_d over proper divisors d.
        let mut xm1 = vec![BigInt::zero(); m as usize + 1];
        xm1[0] = BigInt::from(-1);
        xm1[m as usize] = BigInt::from(1);
        let mut den = vec![BigInt::one()];
        for d in divisors(m) {
            if d < m {
                den = int_poly_mul(&den, &cyclotomic_poly(d));
            }
        }
        int_poly_div_exact(&xm1, &den)
    };
    debug_assert_eq!(poly.len() as u64 - 1, euler_phi(m));
    let arc = Arc::new(poly);
    // Insert-once: a racing thread may have beaten us; keep whichever is in.
    poly_cache()
        .write()
        .unwrap()
        .entry(m)
        .or_insert_with(|| arc.clone());
    arc
}

/// An element of `Q(zeta_M)` as a residue modulo `Phi_M`.
///
/// The coefficient vector always has length `phi(M)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycloElt {
    conductor: u64,
    coeffs: Vec<Rational>,
}

impl CycloElt {
    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn from_coeffs(conductor: u64, mut coeffs: Vec<Rational>) -> Result<CycloElt> {
        let deg = euler_phi(conductor) as usize;
        if coeffs.len() > deg {
            return Err(Error::Unsupported(format!(
                "coefficient vector of length {} exceeds phi({}) = {}",
                coeffs.len(),
                conductor,
                deg
            )));
        }
        coeffs.resize(deg, Rational::zero());
        Ok(CycloElt {
            conductor,
            coeffs,
        })
    }

    pub fn zero(conductor: u64) -> CycloElt {
        CycloElt {
            conductor,
            coeffs: vec![Rational::zero(); euler_phi(conductor) as usize],
        }
    }

    pub fn one(conductor: u64) -> CycloElt {
        Self::from_rational(conductor, Rational::one())
    }

    pub fn from_rational(conductor: u64, r: Rational) -> CycloElt {
        let mut e = Self::zero(conductor);
        e.coeffs[0] = r;
        e
    }

    pub fn from_integer(conductor: u64, n: i64) -> CycloElt {
        Self::from_rational(conductor, Rational::from(BigInt::from(n)))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(self.conductor)
    }

    fn require_same(&self, other: &CycloElt) {
        assert_eq!(
            self.conductor, other.conductor,
            "cyclotomic elements have mismatched conductors"
        );
    }

    pub fn add(&self, other: &CycloElt) -> CycloElt {
        self.require_same(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        CycloElt {
            conductor: self.conductor,
            coeffs,
        }
    }

    pub fn neg(&self) -> CycloElt {
        CycloElt {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &CycloElt) -> CycloElt {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &CycloElt) -> CycloElt {
        self.require_same(other);
        let deg = self.coeffs.len();
        let mut prod = vec![Rational::zero(); 2 * deg.max(1)];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                prod[i + j] += a * b;
            }
        }
        CycloElt {
            conductor: self.conductor,
            coeffs: reduce_mod_phi(self.conductor, prod),
        }
    }

    pub fn scale(&self, r: &Rational) -> CycloElt {
        CycloElt {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in `Q[x]`.
    pub fn inv(&self) -> Result<CycloElt> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let phi: Vec<Rational> = cyclotomic_poly(self.conductor)
            .iter()
            .map(|c| Rational::from(c.clone()))
            .collect();
        let a = trim(self.coeffs.clone());
        let (g, s) = ext_gcd_bezout(&a, &phi);
        // Phi_M is irreducible over Q, so the gcd is a nonzero constant.
        assert_eq!(g.len(), 1, "cyclotomic polynomial must be coprime to a nonzero residue");
        let ginv = g[0].recip();
        let s_scaled: Vec<Rational> = s.iter().map(|c| c * &ginv).collect();
        CycloElt::from_coeffs(self.conductor, reduce_mod_phi(self.conductor, s_scaled))
    }

    pub fn pow(&self, k: i64) -> Result<CycloElt> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = CycloElt::one(self.conductor);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Smallest `k >= 1` with `a^k = 1`, or `0` when `a = 0` or no `k <= 2M`
    /// works (non-torsion elements do not occur as inputs here).
    pub fn torsion_order(&self) -> u64 {
        if self.is_zero() {
            return 0;
        }
        let mut acc = self.clone();
        for k in 1..=2 * self.conductor {
            if acc.is_one() {
                return k;
            }
            acc = acc.mul(self);
        }
        0
    }
}

impl fmt::Display for CycloElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{}", c)?;
            } else if c.is_one() {
                write!(f, "z^{}", i)?;
            } else {
                write!(f, "{}*z^{}", c, i)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `zeta_M^k` as a residue; `root_of_unity(M, 0) = 1`.
pub fn root_of_unity(conductor: u64, k: i64) -> CycloElt {
    assert!(conductor >= 1, "conductor must be positive");
    let e = k.rem_euclid(conductor as i64) as u64;
    // x^e mod Phi_M by repeated multiplication by x.
    let mut acc = CycloElt::one(conductor);
    let deg = euler_phi(conductor) as usize;
    for _ in 0..e {
        let mut next = vec![Rational::zero(); deg + 1];
        for (i, c) in acc.coeffs.iter().enumerate() {
            next[i + 1] = c.clone();
        }
        acc.coeffs = reduce_mod_phi(conductor, next);
    }
    acc
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.len() > 1 && v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

/// Reduces a coefficient vector modulo `Phi_M`, returning exactly `phi(M)`
/// coefficients.
fn reduce_mod_phi(conductor: u64, mut coeffs: Vec<Rational>) -> Vec<Rational> {
    let phi = cyclotomic_poly(conductor);
    let deg = phi.len() - 1;
    // Phi is monic, so elimination of the leading term is division-free.
    while coeffs.len() > deg {
        let lead = coeffs.pop().unwrap();
        if lead.is_zero() {
            continue;
        }
        let top = coeffs.len() - deg;
        for i in 0..deg {
            let t = &lead * Rational::from(phi[i].clone());
            coeffs[top + i] -= t;
        }
    }
    coeffs.resize(deg, Rational::zero());
    coeffs
}

fn poly_divmod(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let den = trim(den.to_vec());
    let dlead = den.last().unwrap().clone();
    assert!(!dlead.is_zero(), "division by zero polynomial");
    let mut rem = trim(num.to_vec());
    if rem.len() < den.len() {
        return (vec![Rational::zero()], rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - den.len() + 1];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + den.len() - 1] / &dlead;
        quot[k] = c.clone();
        for i in 0..den.len() {
            let t = &c * &den[i];
            rem[k + i] -= t;
        }
    }
    (trim(quot), trim(rem))
}

/// Returns `(gcd, s)` with `s * a = gcd (mod b)`.
fn ext_gcd_bezout(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r0 = trim(a.to_vec());
    let mut r1 = trim(b.to_vec());
    let mut s0 = vec![Rational::one()];
    let mut s1 = vec![Rational::zero()];
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divmod(&r0, &r1);
        let qs = poly_mul(&q, &s1);
        let s = poly_sub(&s0, &qs);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    (r0, s0)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(out)
}

/// Pretty integer rendering for tests and reports.
pub fn rational_is_integer(r: &Rational) -> bool {
    r.denom().is_one() || r.numer().is_zero()
}

pub fn rational_abs_height(r: &Rational) -> BigInt {
    r.numer().abs().max(r.denom().abs())
}
