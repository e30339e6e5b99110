//! Alternating matrices over cyclic rings and their congruence orbits.
//!
//! The congruence action `g.A = g A g^T` of `GL_n(Z)` on alternating matrices
//! over `Z/(m)` classifies rank-`n` torus presentations. Every orbit contains
//! a block form `N(h_1, ..., h_s)` built from hyperbolic `2x2` blocks
//! `[[0, h], [-h, 0]]` with a divisor chain `h_1 | ... | h_s` in `P`; when the
//! blocks fill the whole matrix a single residual unit `z` twists the last
//! block, and equality of twists is controlled by the stabilizer determinant
//! group `D`. This module computes the block form with an explicit integer
//! transform, canonicalizes `z`, decides orbit equality with witnesses, and
//! provides exhaustive enumeration oracles at desk scale.

use crate::cyclic_ring::{canonical, divides, prep_of, unit_group, Modulus, PRep, RingElt};
use crate::matrix::{canonical_unit_for, lift_gl, IntMat, RingMat};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use std::collections::HashMap;

/// Alternating matrix: zero diagonal, `a_ji = -a_ij`. Only the strict upper
/// triangle is stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AltMat {
    n: usize,
    modulus: Modulus,
    upper: Vec<i64>,
}

fn upper_len(n: usize) -> usize {
    n * (n - 1) / 2
}

fn upper_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    // Row-major over the strict upper triangle.
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl AltMat {
    pub fn zero(n: usize, m: Modulus) -> AltMat {
        AltMat {
            n,
            modulus: m,
            upper: vec![0; upper_len(n)],
        }
    }

    /// Builds from the strict upper triangle, row-major.
    pub fn from_upper(n: usize, m: Modulus, upper: &[i64]) -> Result<AltMat> {
        if upper.len() != upper_len(n) {
            return Err(Error::DimensionMismatch(upper.len(), upper_len(n)));
        }
        Ok(AltMat {
            n,
            modulus: m,
            upper: upper.iter().map(|&v| canonical(v, m).value()).collect(),
        })
    }

    /// Builds from full rows, validating alternating shape.
    pub fn from_rows(rows: &[Vec<i64>], m: Modulus) -> Result<AltMat> {
        let full = RingMat::from_rows(rows, m)?;
        Self::from_ring_mat(&full)
    }

    pub fn from_ring_mat(full: &RingMat) -> Result<AltMat> {
        let n = full.size();
        let m = full.modulus();
        for i in 0..n {
            if !full.at(i, i).is_zero() {
                return Err(Error::NotAlternating);
            }
            for j in i + 1..n {
                if full.at(j, i) != full.at(i, j).neg() {
                    return Err(Error::NotAlternating);
                }
            }
        }
        let mut upper = Vec::with_capacity(upper_len(n));
        for i in 0..n {
            for j in i + 1..n {
                upper.push(full.raw(i, j));
            }
        }
        Ok(AltMat {
            n,
            modulus: m,
            upper,
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn entry(&self, i: usize, j: usize) -> RingElt {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => RingElt::zero(self.modulus),
            Less => canonical(self.upper[upper_index(self.n, i, j)], self.modulus),
            Greater => canonical(self.upper[upper_index(self.n, j, i)], self.modulus).neg(),
        }
    }

    pub fn to_ring_mat(&self) -> RingMat {
        let n = self.n;
        let mut out = RingMat::zero(n, self.modulus);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.entry(i, j));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.upper.iter().all(|&v| v == 0)
    }

    /// Integer lift that is genuinely alternating over `Z`: the upper
    /// triangle keeps its canonical residues and the lower triangle takes
    /// their negatives (the entrywise canonical lift would not alternate).
    pub fn lift_alternating(&self) -> IntMat {
        let n = self.n;
        let mut out = IntMat::zero(n);
        for i in 0..n {
            for j in i + 1..n {
                let v = self.upper[upper_index(n, i, j)];
                out.set(i, j, BigInt::from(v));
                out.set(j, i, BigInt::from(-v));
            }
        }
        out
    }

    /// The congruence action `g.A = g A g^T`.
    pub fn congruence(&self, g: &RingMat) -> AltMat {
        let full = self.to_ring_mat();
        let moved = g.mul(&full).mul(&g.transpose());
        AltMat::from_ring_mat(&moved).expect("congruence preserves alternating shape")
    }

    /// Evaluates the associated biadditive form `(a, b) -> b^T A a`.
    pub fn form(&self, a: &[i64], b: &[i64]) -> RingElt {
        assert_eq!(a.len(), self.n);
        assert_eq!(b.len(), self.n);
        let mut acc = RingElt::zero(self.modulus);
        for i in 0..self.n {
            for j in 0..self.n {
                let term = self
                    .entry(j, i)
                    .mul(canonical(a[i], self.modulus))
                    .mul(canonical(b[j], self.modulus));
                acc = acc.add(term);
            }
        }
        acc
    }
}

/// Block matrix `N(h_1, ..., h_s)`: hyperbolic blocks padded with zeros.
pub fn build_n(h: &[RingElt], n: usize, m: Modulus) -> Result<AltMat> {
    if 2 * h.len() > n {
        return Err(Error::ChainTooLong(h.len(), n));
    }
    let mut out = AltMat::zero(n, m);
    for (k, &hk) in h.iter().enumerate() {
        assert_eq!(hk.modulus(), m);
        out.upper[upper_index(n, 2 * k, 2 * k + 1)] = hk.value();
    }
    Ok(out)
}

/// Skew normal form data: `reduce(g) . A = N(h_1, ..., z h_s)` exactly.
///
/// The chain lives in `P` with `h_1 | ... | h_s`, all nonzero; `z` is a unit
/// and is only meaningful when the blocks fill the matrix (`2s = n`),
/// otherwise it is pinned to one.
#[derive(Debug, Clone)]
pub struct SkewNF {
    pub s: usize,
    pub chain: Vec<PRep>,
    pub z: RingElt,
    pub g: IntMat,
}

impl SkewNF {
    /// The normal form as a matrix, `z` twisting the last block.
    pub fn normal_matrix(&self, n: usize, m: Modulus) -> AltMat {
        let mut h: Vec<RingElt> = self.chain.iter().map(|p| p.elt()).collect();
        if let Some(last) = h.last_mut() {
            *last = last.mul(self.z);
        }
        build_n(&h, n, m).expect("chain fits by construction")
    }

    /// Checks `reduce(g) . A = N` exactly.
    pub fn verify(&self, a: &AltMat) -> bool {
        let m = a.modulus();
        let g = match self.g.reduce_mod(m) {
            Ok(g) => g,
            Err(_) => return false,
        };
        self.g.is_unimodular() && a.congruence(&g) == self.normal_matrix(a.size(), m)
    }

    pub fn chain_values(&self) -> Vec<i64> {
        self.chain.iter().map(|p| p.value()).collect()
    }
}

/// Congruence reduction over `Z`: returns `g` in `GL_n(Z)` and the positive
/// divisor chain with `g A g^T = N(chain)`.
fn skew_reduce_z(a: &IntMat) -> (IntMat, Vec<BigInt>) {
    let n = a.size();
    let mut m = a.clone();
    let mut g = IntMat::identity(n);

    // Simultaneous row/column operations keep the matrix alternating.
    let addmul = |m: &mut IntMat, g: &mut IntMat, i: usize, j: usize, q: &BigInt| {
        for c in 0..n {
            let t = q * m.at(j, c);
            let cur = m.at(i, c).clone();
            m.set(i, c, cur + &t);
        }
        for r in 0..n {
            let t = q * m.at(r, j);
            let cur = m.at(r, i).clone();
            m.set(r, i, cur + t);
        }
        for c in 0..n {
            let t = q * g.at(j, c);
            let cur = g.at(i, c).clone();
            g.set(i, c, cur + t);
        }
    };
    let swap = |m: &mut IntMat, g: &mut IntMat, i: usize, j: usize| {
        if i == j {
            return;
        }
        for c in 0..n {
            let a = m.at(i, c).clone();
            let b = m.at(j, c).clone();
            m.set(i, c, b);
            m.set(j, c, a);
        }
        for r in 0..n {
            let a = m.at(r, i).clone();
            let b = m.at(r, j).clone();
            m.set(r, i, b);
            m.set(r, j, a);
        }
        for c in 0..n {
            let a = g.at(i, c).clone();
            let b = g.at(j, c).clone();
            g.set(i, c, b);
            g.set(j, c, a);
        }
    };
    let negate = |m: &mut IntMat, g: &mut IntMat, i: usize| {
        for c in 0..n {
            let v = -m.at(i, c);
            m.set(i, c, v);
        }
        for r in 0..n {
            let v = -m.at(r, i);
            m.set(r, i, v);
        }
        for c in 0..n {
            let v = -g.at(i, c);
            g.set(i, c, v);
        }
    };

    let mut chain: Vec<BigInt> = Vec::new();
    let mut b = 0usize;
    while b + 1 < n {
        // Re-selecting the globally smallest entry as pivot after every
        // change keeps the quotients small; swapping remainders in without
        // reselection lets entries grow out of control.
        let mut exhausted = false;
        'reduce: loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in b..n {
                for j in i + 1..n {
                    if m.at(i, j).is_zero() {
                        continue;
                    }
                    let better = match pivot {
                        None => true,
                        Some((pi, pj)) => m.at(i, j).abs() < m.at(pi, pj).abs(),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
            let (pi, pj) = match pivot {
                Some(p) => p,
                None => {
                    exhausted = true;
                    break;
                }
            };
            // pi >= b and pj > pi force pj >= b + 1, so the second swap
            // cannot displace the freshly placed pivot row.
            swap(&mut m, &mut g, pi, b);
            swap(&mut m, &mut g, pj, b + 1);
            // Clear rows b and b+1 beyond the pivot pair.
            for k in b + 2..n {
                if !m.at(b, k).is_zero() {
                    let q = -(m.at(b, k).div_floor(m.at(b, b + 1)));
                    addmul(&mut m, &mut g, k, b + 1, &q);
                    if !m.at(b, k).is_zero() {
                        continue 'reduce; // strictly smaller remainder
                    }
                }
                if !m.at(b + 1, k).is_zero() {
                    let q = m.at(b + 1, k).div_floor(m.at(b, b + 1));
                    addmul(&mut m, &mut g, k, b, &q);
                    if !m.at(b + 1, k).is_zero() {
                        continue 'reduce;
                    }
                }
            }
            // Pivot must divide the trailing block; if not, fold the bad row
            // in and keep reducing.
            let p = m.at(b, b + 1).clone();
            for i in b + 2..n {
                for j in i + 1..n {
                    if !(m.at(i, j) % &p).is_zero() {
                        let one = BigInt::from(1);
                        addmul(&mut m, &mut g, b, i, &one);
                        continue 'reduce;
                    }
                }
            }
            break;
        }
        if exhausted {
            break;
        }
        if m.at(b, b + 1).is_negative() {
            negate(&mut m, &mut g, b);
        }
        chain.push(m.at(b, b + 1).clone());
        b += 2;
    }
    (g, chain)
}

/// Skew normal form over `Z` (`m = 0`): canonical positive chain, no twist.
pub fn skew_normal_form_z(a: &AltMat) -> Result<SkewNF> {
    if !a.modulus().is_z() {
        return Err(Error::Unsupported(
            "skew_normal_form_z requires modulus 0".into(),
        ));
    }
    let (g, chain_z) = skew_reduce_z(&a.lift_alternating());
    let chain = chain_z
        .iter()
        .map(|h| {
            let v = i64::try_from(h).map_err(|_| Error::IntegerOverflow)?;
            Ok(prep_of(canonical(v, Modulus::Z)).0)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SkewNF {
        s: chain.len(),
        chain,
        z: RingElt::one(Modulus::Z),
        g,
    })
}

/// Skew normal form over `Z/(m)`, `m > 0`: lift, reduce over `Z`, push the
/// chain down to `unit * P` form and absorb the units with a determinant-one
/// diagonal matrix acting on the blocks.
pub fn skew_normal_form(a: &AltMat) -> Result<SkewNF> {
    let m = a.modulus();
    if m.is_z() {
        return Err(Error::InfiniteRing);
    }
    let n = a.size();
    let (g_z, chain_z) = skew_reduce_z(&a.lift_alternating());

    // Reduce the integer chain mod m; trailing entries may die.
    let mut units: Vec<RingElt> = Vec::new();
    let mut chain: Vec<PRep> = Vec::new();
    for h in &chain_z {
        let r = h.mod_floor(&BigInt::from(m.value()));
        let (p, u) = prep_of(canonical(i64::try_from(&r).unwrap(), m));
        if p.is_zero() {
            break; // divisibility zeroes everything after as well
        }
        chain.push(p);
        units.push(u);
    }
    let s = chain.len();
    if s == 0 {
        return Ok(SkewNF {
            s: 0,
            chain,
            z: RingElt::one(m),
            g: g_z,
        });
    }

    // diag(z_1^{-1}, 1, ..., z_s^{-1}, 1, ..., 1, prod z_i) has determinant
    // one and strips the unit off every block; when the blocks fill the
    // matrix the accumulated product lands on the last block instead.
    let mut d = vec![RingElt::one(m); n];
    let full = 2 * s == n;
    let limit = if full { s - 1 } else { s };
    let mut stripped = RingElt::one(m);
    for (k, &u) in units.iter().enumerate().take(limit) {
        d[2 * k] = u.inverse()?;
        stripped = stripped.mul(u);
    }
    d[n - 1] = stripped;
    let d_mat = RingMat::diagonal(&d, m);
    debug_assert!(d_mat.is_sl());
    let d_lift = lift_gl(&d_mat)?;
    let g = d_lift.mul(&g_z);

    let z_raw = if full {
        units.iter().fold(RingElt::one(m), |acc, &u| acc.mul(u))
    } else {
        RingElt::one(m)
    };
    let z = canonical_unit_for(z_raw, chain[s - 1]);
    let nf = SkewNF { s, chain, z, g };
    debug_assert!(nf.verify(a), "reconstruction identity");
    Ok(nf)
}

/// How a stabilizer determinant group was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DGroupMethod {
    /// Proven closed form: `2s < n` (all units), `n = 2`, an equal chain, or
    /// coinciding two-sided bounds.
    ClosedForm,
    /// Exhaustive stabilizer scan over `GL_n(Z/m)`.
    BruteForce,
    /// Guard exceeded: only the two bracketing sets are known. `elements`
    /// holds the proven inner bound `{z : z h_s = h_s}`.
    BoundsOnly,
}

/// Determinants of congruence stabilizers of `N(h_1, ..., h_s)`.
#[derive(Debug, Clone)]
pub struct DGroupResult {
    pub chain: Vec<PRep>,
    pub elements: Vec<i64>,
    pub method: DGroupMethod,
    /// `{z : z h_s = h_s}`, always a subgroup of the result.
    pub inner: Vec<i64>,
    /// `{z : z^2 h_s = h_s}`, always containing the result.
    pub outer: Vec<i64>,
    witnesses: HashMap<i64, RingMat>,
}

impl DGroupResult {
    pub fn contains(&self, z: i64) -> bool {
        self.elements.binary_search(&z).is_ok()
    }

    /// A stabilizer of `N(chain)` with the requested determinant, when one is
    /// known. Inner-bound determinants always have the diagonal witness
    /// `diag(1, ..., 1, d)`.
    pub fn stabilizer_with_det(&self, d: i64, n: usize, m: Modulus) -> Option<RingMat> {
        let d = canonical(d, m);
        let h_s = self.chain.last()?.elt();
        if d.is_unit() && d.mul(h_s) == h_s {
            let mut diag = vec![RingElt::one(m); n];
            diag[n - 1] = d;
            return Some(RingMat::diagonal(&diag, m));
        }
        self.witnesses.get(&d.value()).cloned()
    }
}

fn unit_values(m: Modulus) -> Vec<i64> {
    unit_group(m)
        .expect("finite modulus")
        .iter()
        .map(|u| u.value())
        .collect()
}

fn stabilizing_units(h: RingElt, square: bool) -> Vec<i64> {
    let m = h.modulus();
    unit_values(m)
        .into_iter()
        .filter(|&z| {
            let z = canonical(z, m);
            let lhs = if square { z.mul(z).mul(h) } else { z.mul(h) };
            lhs == h
        })
        .collect()
}

/// The group `D_(h_1, ..., h_s)` of determinants of stabilizers of the block
/// form, for a nonzero chain over `Z/(m)`.
///
/// Closed forms cover `2s < n` (all units), `n = 2`, equal chains, and the
/// case where the two-sided bounds pinch; otherwise the stabilizer scan runs
/// under `max_work`, and an exceeded guard yields an explicit bounds-only
/// result rather than a truncated scan.
pub fn d_group(chain: &[PRep], n: usize, m: Modulus, max_work: u64) -> Result<DGroupResult> {
    if m.is_z() {
        return Err(Error::InfiniteRing);
    }
    let s = chain.len();
    if s == 0 || chain.iter().any(|h| h.is_zero()) {
        return Err(Error::Unsupported(
            "stabilizer determinant group needs a nonzero chain".into(),
        ));
    }
    if 2 * s > n {
        return Err(Error::ChainTooLong(s, n));
    }
    let h_s = chain[s - 1].elt();
    let inner = stabilizing_units(h_s, false);
    let outer = stabilizing_units(h_s, true);

    if 2 * s < n {
        // diag(1, ..., 1, z) fixes the padded block form for every unit z.
        return Ok(DGroupResult {
            chain: chain.to_vec(),
            elements: unit_values(m),
            method: DGroupMethod::ClosedForm,
            inner,
            outer,
            witnesses: HashMap::new(),
        });
    }
    let equal_chain = chain.iter().all(|h| *h == chain[0]);
    if n == 2 || equal_chain || inner == outer {
        // n = 2: g N g^T = det(g) N pins the group exactly. Equal chains:
        // stabilizers reduce mod ord(h_s) into the symplectic group, which
        // forces det = 1 there. Coinciding bounds need no search at all.
        return Ok(DGroupResult {
            chain: chain.to_vec(),
            elements: inner.clone(),
            method: DGroupMethod::ClosedForm,
            inner,
            outer,
            witnesses: HashMap::new(),
        });
    }
    match stabilizer_scan(chain, n, m, max_work)? {
        Some((elements, witnesses)) => Ok(DGroupResult {
            chain: chain.to_vec(),
            elements,
            method: DGroupMethod::BruteForce,
            inner,
            outer,
            witnesses,
        }),
        None => Ok(DGroupResult {
            chain: chain.to_vec(),
            elements: inner.clone(),
            method: DGroupMethod::BoundsOnly,
            inner,
            outer,
            witnesses: HashMap::new(),
        }),
    }
}

/// Unconditional stabilizer determinant scan (no closed forms); exceeding the
/// guard is an error rather than a bounds-only fallback.
pub fn d_group_brute_force(
    chain: &[PRep],
    n: usize,
    m: Modulus,
    max_work: u64,
) -> Result<DGroupResult> {
    let s = chain.len();
    let h_s = chain[s - 1].elt();
    let inner = stabilizing_units(h_s, false);
    let outer = stabilizing_units(h_s, true);
    match stabilizer_scan(chain, n, m, max_work)? {
        Some((elements, witnesses)) => Ok(DGroupResult {
            chain: chain.to_vec(),
            elements,
            method: DGroupMethod::BruteForce,
            inner,
            outer,
            witnesses,
        }),
        None => Err(Error::FeasibilityExceeded {
            required: (m.value() as u128)
                .checked_pow((n * n) as u32)
                .map(|v| v.min(u64::MAX as u128) as u64)
                .unwrap_or(u64::MAX),
            budget: max_work,
        }),
    }
}

/// Scans all of `GL_n(Z/m)` for stabilizers of `N(chain)`; returns the sorted
/// determinant set plus one witness per determinant, or `None` past the
/// guard.
#[allow(clippy::type_complexity)]
fn stabilizer_scan(
    chain: &[PRep],
    n: usize,
    m: Modulus,
    max_work: u64,
) -> Result<Option<(Vec<i64>, HashMap<i64, RingMat>)>> {
    let mv = m.value();
    let total = match (mv as u128).checked_pow((n * n) as u32) {
        Some(t) if t <= max_work as u128 => t as u64,
        _ => return Ok(None),
    };
    let h: Vec<RingElt> = chain.iter().map(|p| p.elt()).collect();
    let target = build_n(&h, n, m)?;
    let target_key = pack_alt(&target);
    let found: Vec<(i64, u64)> = (0..total)
        .into_par_iter()
        .filter_map(|idx| {
            let mat = unpack_matrix(idx, n, mv);
            let d = small_det(&mat, n, mv);
            if (d as u64).gcd(&mv) != 1 {
                return None;
            }
            if congr_key(&mat, &target, n, mv) == target_key {
                Some((d, idx))
            } else {
                None
            }
        })
        .collect();
    let mut witnesses: HashMap<i64, RingMat> = HashMap::new();
    let mut dets: Vec<i64> = Vec::new();
    for (d, idx) in found {
        witnesses.entry(d).or_insert_with(|| {
            let rows = unpack_rows(idx, n, mv);
            RingMat::from_rows(&rows, m).unwrap()
        });
        dets.push(d);
    }
    dets.sort_unstable();
    dets.dedup();
    Ok(Some((dets, witnesses)))
}

fn unpack_matrix(mut idx: u64, n: usize, m: u64) -> Vec<i64> {
    let mut out = vec![0i64; n * n];
    for slot in out.iter_mut() {
        *slot = (idx % m) as i64;
        idx /= m;
    }
    out
}

fn unpack_rows(idx: u64, n: usize, m: u64) -> Vec<Vec<i64>> {
    let flat = unpack_matrix(idx, n, m);
    (0..n).map(|i| flat[i * n..(i + 1) * n].to_vec()).collect()
}

/// Determinant of a small packed matrix mod m, by cofactor recursion.
fn small_det(mat: &[i64], n: usize, m: u64) -> i64 {
    fn rec(mat: &[i64], cols: &mut Vec<usize>, row: usize, n: usize, m: i128) -> i128 {
        if cols.is_empty() {
            return 1;
        }
        let mut acc: i128 = 0;
        for k in 0..cols.len() {
            let c = cols[k];
            let a = mat[row * n + c] as i128;
            if a != 0 {
                cols.remove(k);
                let sub = rec(mat, cols, row + 1, n, m);
                cols.insert(k, c);
                let term = (a * sub).rem_euclid(m);
                acc = if k % 2 == 0 { acc + term } else { acc - term };
                acc = acc.rem_euclid(m);
            }
        }
        acc
    }
    let mut cols: Vec<usize> = (0..n).collect();
    rec(mat, &mut cols, 0, n, m as i128) as i64
}

/// Packs the upper triangle of `g A g^T` into a mixed-radix key.
fn congr_key(g: &[i64], a: &AltMat, n: usize, m: u64) -> u64 {
    let mi = m as i128;
    let mut key = 0u64;
    let mut radix = 1u64;
    for i in 0..n {
        for j in i + 1..n {
            // (g A g^T)_{ij} = sum_{k,l} g_{ik} A_{kl} g_{jl}
            let mut acc: i128 = 0;
            for k in 0..n {
                let gik = g[i * n + k] as i128;
                if gik == 0 {
                    continue;
                }
                for l in 0..n {
                    let a_kl = a.entry(k, l).value() as i128;
                    if a_kl == 0 {
                        continue;
                    }
                    acc += gik * a_kl * (g[j * n + l] as i128);
                }
            }
            let v = acc.rem_euclid(mi) as u64;
            key += v * radix;
            radix *= m;
        }
    }
    key
}

fn pack_alt(a: &AltMat) -> u64 {
    let m = a.modulus().value();
    let mut key = 0u64;
    let mut radix = 1u64;
    for &v in &a.upper {
        key += v as u64 * radix;
        radix *= m;
    }
    key
}

fn unpack_alt(mut key: u64, n: usize, m: Modulus) -> AltMat {
    let mut upper = vec![0i64; upper_len(n)];
    for slot in upper.iter_mut() {
        *slot = (key % m.value()) as i64;
        key /= m.value();
    }
    AltMat::from_upper(n, m, &upper).unwrap()
}

/// Canonical orbit representative: the skew normal form with the twist `z`
/// replaced by the smallest canonical residue in the coset `+-z D`.
///
/// When the stabilizer scan for `D` is infeasible the proven inner bound
/// `{z : z h_s = h_s}` canonicalizes instead (exact whenever the bounds
/// pinch); the accompanying transform is updated so the reconstruction
/// identity keeps holding.
pub fn canonical_rep(a: &AltMat, max_work: u64) -> Result<SkewNF> {
    let m = a.modulus();
    if m.is_z() {
        return skew_normal_form_z(a);
    }
    let nf = skew_normal_form(a)?;
    let n = a.size();
    if nf.s == 0 || 2 * nf.s < n {
        return Ok(nf);
    }
    let d = d_group(&nf.chain, n, m, max_work)?;
    let z_raw = nf.z;
    let mut best = z_raw;
    for &dv in &d.elements {
        for sign in [1i64, -1] {
            let cand = z_raw.mul(canonical(dv, m)).mul(canonical(sign, m));
            if cand.value() < best.value() {
                best = cand;
            }
        }
    }
    if best == z_raw {
        return Ok(nf);
    }
    let u = connecting_transform(&d, z_raw, best, n, m)
        .expect("coset member must admit a connecting stabilizer");
    let g = lift_gl(&u)?.mul(&nf.g);
    let z = canonical_unit_for(best, nf.chain[nf.s - 1]);
    let out = SkewNF {
        s: nf.s,
        chain: nf.chain,
        z,
        g,
    };
    debug_assert!(out.verify(a));
    Ok(out)
}

/// A determinant-`+-1` matrix `u` with `u . N(..., z_from h_s) =
/// N(..., z_to h_s)`, built as `sigma(z_to) * stab * sigma(z_from)^{-1}` from
/// a stabilizer with determinant `+- z_from z_to^{-1}`.
fn connecting_transform(
    d: &DGroupResult,
    z_from: RingElt,
    z_to: RingElt,
    n: usize,
    m: Modulus,
) -> Option<RingMat> {
    let z_to_inv = z_to.inverse().ok()?;
    for sign in [1i64, -1] {
        let det = z_from.mul(z_to_inv).mul(canonical(sign, m));
        if let Some(stab) = d.stabilizer_with_det(det.value(), n, m) {
            let sigma = |z: RingElt| {
                let mut diag = vec![RingElt::one(m); n];
                diag[n - 1] = z;
                RingMat::diagonal(&diag, m)
            };
            let u = sigma(z_to).mul(&stab).mul(&sigma(z_from.inverse().ok()?));
            debug_assert!({
                let dv = u.det();
                dv == RingElt::one(m) || dv == canonical(-1, m)
            });
            return Some(u);
        }
    }
    None
}

/// Orbit equality decision with a composite witness `g A g^T = B`.
pub fn same_orbit(a: &AltMat, b: &AltMat, max_work: u64) -> Result<(bool, Option<IntMat>)> {
    if a.size() != b.size() {
        return Err(Error::DimensionMismatch(a.size(), b.size()));
    }
    if a.modulus() != b.modulus() {
        return Err(Error::ModulusMismatch(
            a.modulus().value(),
            b.modulus().value(),
        ));
    }
    let ca = canonical_rep(a, max_work)?;
    let cb = canonical_rep(b, max_work)?;
    let n = a.size();
    let m = a.modulus();
    if ca.normal_matrix(n, m) != cb.normal_matrix(n, m) {
        return Ok((false, None));
    }
    // reduce(g_a).A = N = reduce(g_b).B, so g_b^{-1} g_a carries A to B.
    let witness = cb.g.inverse_unimodular()?.mul(&ca.g);
    debug_assert_eq!(a.congruence(&witness.reduce_mod(m).unwrap()), *b);
    Ok((true, Some(witness)))
}

/// One orbit of the congruence action: its canonical form, size, and sorted
/// member list.
#[derive(Debug, Clone)]
pub struct OrbitData {
    pub rep: SkewNF,
    pub size: usize,
    pub members: Vec<AltMat>,
}

/// Full partition of the alternating matrices over `Z/(m)` into orbits under
/// the determinant-`+-1` subgroup of `GL_n(Z/m)` (the reduction image of
/// `GL_n(Z)`).
pub fn orbit_enumeration(n: usize, m: Modulus, max_work: u64) -> Result<Vec<OrbitData>> {
    if m.is_z() {
        return Err(Error::InfiniteRing);
    }
    let mv = m.value();
    let alt_count = match (mv as u128).checked_pow(upper_len(n) as u32) {
        Some(c) if c <= 1_000_000 => c as u64,
        other => {
            return Err(Error::FeasibilityExceeded {
                required: other
                    .map(|v| v.min(u64::MAX as u128) as u64)
                    .unwrap_or(u64::MAX),
                budget: 1_000_000,
            })
        }
    };
    let group = enumerate_det_pm_one(n, m, max_work)?;
    let mut visited = vec![false; alt_count as usize];
    let mut orbits = Vec::new();
    for key in 0..alt_count {
        if visited[key as usize] {
            continue;
        }
        let a = unpack_alt(key, n, m);
        let mut members: Vec<u64> = group.par_iter().map(|g| congr_key(g, &a, n, mv)).collect();
        members.sort_unstable();
        members.dedup();
        for &k in &members {
            visited[k as usize] = true;
        }
        let rep = canonical_rep(&a, max_work)?;
        let members: Vec<AltMat> = members.into_iter().map(|k| unpack_alt(k, n, m)).collect();
        orbits.push(OrbitData {
            rep,
            size: members.len(),
            members,
        });
    }
    Ok(orbits)
}

/// All matrices of `GL_n(Z/m)` with determinant `+-1`, as packed rows.
pub(crate) fn enumerate_det_pm_one(n: usize, m: Modulus, max_work: u64) -> Result<Vec<Vec<i64>>> {
    let mv = m.value();
    let total = match (mv as u128).checked_pow((n * n) as u32) {
        Some(t) if t <= max_work as u128 => t as u64,
        other => {
            return Err(Error::FeasibilityExceeded {
                required: other
                    .map(|v| v.min(u64::MAX as u128) as u64)
                    .unwrap_or(u64::MAX),
                budget: max_work,
            })
        }
    };
    let minus_one = canonical(-1, m).value();
    Ok((0..total)
        .into_par_iter()
        .filter_map(|idx| {
            let mat = unpack_matrix(idx, n, mv);
            let d = small_det(&mat, n, mv);
            if d == 1 || d == minus_one {
                Some(mat)
            } else {
                None
            }
        })
        .collect())
}

/// Outcome of the twist-stabilizer check for one chain.
#[derive(Debug, Clone)]
pub struct ConjectureEntry {
    pub chain: Vec<i64>,
    /// `Some(true)` when `D h_s = {h_s}` is established, `None` when only
    /// bounds are known and they do not settle it.
    pub holds: Option<bool>,
    pub equal_chain_case: bool,
    pub method: DGroupMethod,
    pub d_elements: Vec<i64>,
    pub inner: Vec<i64>,
    pub outer: Vec<i64>,
}

/// Scans every nonzero full chain (`2s = n`) over `Z/(m)` and reports whether
/// the stabilizer determinants fix `h_s`. Equal chains are settled by the
/// proven special case even when the scan is infeasible.
pub fn conjecture_scan(n: usize, m: Modulus, max_work: u64) -> Result<Vec<ConjectureEntry>> {
    if m.is_z() {
        return Err(Error::InfiniteRing);
    }
    if !n.is_multiple_of(2) {
        return Err(Error::Unsupported(
            "full hyperbolic chains need even dimension".into(),
        ));
    }
    let s = n / 2;
    let reps: Vec<PRep> = crate::cyclic_ring::p_representatives(m)?
        .into_iter()
        .filter(|p| !p.is_zero())
        .collect();
    let mut chains: Vec<Vec<PRep>> = vec![Vec::new()];
    for _ in 0..s {
        let mut next = Vec::new();
        for c in &chains {
            for &r in &reps {
                let ok = match c.last() {
                    None => true,
                    Some(&prev) => divides(prev.elt(), r.elt()),
                };
                if ok {
                    let mut c2 = c.clone();
                    c2.push(r);
                    next.push(c2);
                }
            }
        }
        chains = next;
    }
    let mut out = Vec::new();
    for chain in chains {
        let d = d_group(&chain, n, m, max_work)?;
        let h_s = chain[s - 1].elt();
        let equal_chain_case = chain.iter().all(|h| *h == chain[0]);
        let fixes = |set: &[i64]| set.iter().all(|&z| canonical(z, m).mul(h_s) == h_s);
        let holds = match d.method {
            DGroupMethod::BoundsOnly => {
                if fixes(&d.outer) || equal_chain_case {
                    Some(true)
                } else {
                    None
                }
            }
            _ => Some(fixes(&d.elements)),
        };
        out.push(ConjectureEntry {
            chain: chain.iter().map(|p| p.value()).collect(),
            holds,
            equal_chain_case,
            method: d.method,
            d_elements: d.elements.clone(),
            inner: d.inner.clone(),
            outer: d.outer.clone(),
        });
    }
    Ok(out)
}
