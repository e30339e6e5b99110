//! Exact square matrices over `Z` and `Z/(m)`.
//!
//! Integer matrices ([`IntMat`]) carry arbitrary-precision entries and back
//! every kernel that could overflow: Smith reduction, determinants, adjugate
//! inverses, minors. Residue matrices ([`RingMat`]) store canonical `i64`
//! residues. The two are connected by entrywise reduction and lifting, and by
//! [`lift_gl`], which lifts an invertible residue matrix with determinant
//! `+-1` to a genuinely unimodular integer matrix.
//!
//! Smith normal form is computed over `Z` first and then pushed down to
//! `Z/(m)` by absorbing unit factors of the diagonal into the right-hand
//! transform, so one integer kernel serves both rings.

use crate::cyclic_ring::{canonical, prep_of, Modulus, PRep, RingElt};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Square integer matrix with arbitrary-precision entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMat {
    pub fn zero(n: usize) -> IntMat {
        IntMat {
            n,
            entries: vec![BigInt::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> IntMat {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Result<IntMat> {
        let n = rows.len();
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch(r.len(), n));
            }
        }
        Ok(IntMat {
            n,
            entries: rows.iter().flatten().map(|&v| BigInt::from(v)).collect(),
        })
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<IntMat> {
        let n = rows.len();
        for r in &rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch(r.len(), n));
            }
        }
        Ok(IntMat {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.n + j] = v;
    }

    pub fn transpose(&self) -> IntMat {
        let mut out = Self::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.entries[j * self.n + i] = self.at(i, j).clone();
            }
        }
        out
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let t = a * other.at(k, j);
                    out.entries[i * n + j] += t;
                }
            }
        }
        out
    }

    pub fn neg(&self) -> IntMat {
        IntMat {
            n: self.n,
            entries: self.entries.iter().map(|v| -v).collect(),
        }
    }

    /// Fraction-free determinant (Bareiss with row pivoting).
    pub fn det(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.entries.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k * n + k].is_zero() {
                match (k + 1..n).find(|&r| !m[r * n + k].is_zero()) {
                    Some(r) => {
                        for j in 0..n {
                            m.swap(k * n + j, r * n + j);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &m[i * n + j] * &m[k * n + k] - &m[i * n + k] * &m[k * n + j];
                    m[i * n + j] = &t / &prev;
                }
            }
            prev = m[k * n + k].clone();
        }
        let d = m[(n - 1) * n + (n - 1)].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Determinant of the submatrix picked out by `rows` x `cols`.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> BigInt {
        let k = rows.len();
        let mut sub = IntMat::zero(k);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                sub.entries[a * k + b] = self.at(i, j).clone();
            }
        }
        sub.det()
    }

    /// Exact inverse of a matrix with determinant `+-1`.
    pub fn inverse_unimodular(&self) -> Result<IntMat> {
        let d = self.det();
        if !(d.clone().abs().is_one()) {
            return Err(Error::NotInvertible);
        }
        let n = self.n;
        let mut adj = IntMat::zero(n);
        let all: Vec<usize> = (0..n).collect();
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = all.iter().copied().filter(|&r| r != j).collect();
                let cols: Vec<usize> = all.iter().copied().filter(|&c| c != i).collect();
                let mut c = self.minor(&rows, &cols);
                if (i + j) % 2 == 1 {
                    c = -c;
                }
                adj.entries[i * n + j] = c;
            }
        }
        if d == BigInt::from(-1) {
            adj = adj.neg();
        }
        Ok(adj)
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    /// Entrywise canonical reduction; the identity map when `m = 0`.
    pub fn reduce_mod(&self, m: Modulus) -> Result<RingMat> {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for v in &self.entries {
            entries.push(reduce_bigint(v, m)?);
        }
        Ok(RingMat {
            n,
            modulus: m,
            entries,
        })
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.at(i, j).clone()).collect())
            .collect()
    }
}

impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.at(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

fn reduce_bigint(v: &BigInt, m: Modulus) -> Result<i64> {
    if m.is_z() {
        i64::try_from(v).map_err(|_| Error::IntegerOverflow)
    } else {
        let r = v.mod_floor(&BigInt::from(m.value()));
        Ok(i64::try_from(&r).expect("residue fits i64"))
    }
}

/// Free-function form of entrywise reduction, for integer row data.
pub fn reduce_mod(rows: &[Vec<i64>], m: Modulus) -> Result<RingMat> {
    IntMat::from_rows_i64(rows)?.reduce_mod(m)
}

/// Square matrix over `Z/(m)` (or `Z`, for `m = 0`) with canonical entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingMat {
    n: usize,
    modulus: Modulus,
    entries: Vec<i64>,
}

impl RingMat {
    pub fn zero(n: usize, m: Modulus) -> RingMat {
        RingMat {
            n,
            modulus: m,
            entries: vec![0; n * n],
        }
    }

    pub fn identity(n: usize, m: Modulus) -> RingMat {
        let mut out = Self::zero(n, m);
        for i in 0..n {
            out.entries[i * n + i] = canonical(1, m).value();
        }
        out
    }

    pub fn from_rows(rows: &[Vec<i64>], m: Modulus) -> Result<RingMat> {
        let n = rows.len();
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch(r.len(), n));
            }
        }
        let entries = rows
            .iter()
            .flatten()
            .map(|&v| canonical(v, m).value())
            .collect();
        Ok(RingMat {
            n,
            modulus: m,
            entries,
        })
    }

    pub fn diagonal(diag: &[RingElt], m: Modulus) -> RingMat {
        let n = diag.len();
        let mut out = Self::zero(n, m);
        for (i, d) in diag.iter().enumerate() {
            assert_eq!(d.modulus(), m);
            out.entries[i * n + i] = d.value();
        }
        out
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn at(&self, i: usize, j: usize) -> RingElt {
        canonical(self.entries[i * self.n + j], self.modulus)
    }

    pub fn raw(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RingElt) {
        assert_eq!(v.modulus(), self.modulus);
        self.entries[i * self.n + j] = v.value();
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.raw(i, j)).collect())
            .collect()
    }

    fn require_same(&self, other: &RingMat) {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        assert_eq!(self.modulus, other.modulus, "matrix modulus mismatch");
    }

    pub fn mul(&self, other: &RingMat) -> RingMat {
        self.require_same(other);
        let n = self.n;
        let mut out = Self::zero(n, self.modulus);
        if self.modulus.is_z() {
            for i in 0..n {
                for j in 0..n {
                    let mut acc: i128 = 0;
                    for k in 0..n {
                        acc += self.raw(i, k) as i128 * other.raw(k, j) as i128;
                    }
                    out.entries[i * n + j] = i64::try_from(acc).expect("Z-matrix overflow");
                }
            }
        } else {
            let m = self.modulus.value() as i128;
            for i in 0..n {
                for j in 0..n {
                    let mut acc: i128 = 0;
                    for k in 0..n {
                        acc += self.raw(i, k) as i128 * other.raw(k, j) as i128;
                        acc %= m;
                    }
                    out.entries[i * n + j] = acc.rem_euclid(m) as i64;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> RingMat {
        let mut out = Self::zero(self.n, self.modulus);
        for i in 0..self.n {
            for j in 0..self.n {
                out.entries[j * self.n + i] = self.raw(i, j);
            }
        }
        out
    }

    /// Canonical integer lift, entries in `[0, m)`.
    pub fn lift(&self) -> IntMat {
        IntMat {
            n: self.n,
            entries: self.entries.iter().map(|&v| BigInt::from(v)).collect(),
        }
    }

    /// Determinant, computed as the integer determinant of the canonical lift
    /// reduced back into the ring (no division in a non-domain).
    pub fn det(&self) -> RingElt {
        let d = self.lift().det();
        if self.modulus.is_z() {
            canonical(i64::try_from(&d).expect("Z determinant fits i64"), self.modulus)
        } else {
            let r = d.mod_floor(&BigInt::from(self.modulus.value()));
            canonical(i64::try_from(&r).unwrap(), self.modulus)
        }
    }

    pub fn is_gl(&self) -> bool {
        self.det().is_unit()
    }

    pub fn is_sl(&self) -> bool {
        self.det() == RingElt::one(self.modulus)
    }

    /// Inverse over the ring, via the integer adjugate of the canonical lift.
    pub fn inverse(&self) -> Result<RingMat> {
        let d = self.det();
        let dinv = d.inverse().map_err(|_| Error::NotInvertible)?;
        let n = self.n;
        let lift = self.lift();
        let all: Vec<usize> = (0..n).collect();
        let mut out = Self::zero(n, self.modulus);
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = all.iter().copied().filter(|&r| r != j).collect();
                let cols: Vec<usize> = all.iter().copied().filter(|&c| c != i).collect();
                let mut cof = lift.minor(&rows, &cols);
                if (i + j) % 2 == 1 {
                    cof = -cof;
                }
                let r = reduce_bigint(&cof, self.modulus)?;
                out.entries[i * n + j] = canonical(r, self.modulus).mul(dinv).value();
            }
        }
        Ok(out)
    }
}

impl fmt::Display for RingMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.raw(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Which two-sided action the transform pair belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnfVariant {
    Gl,
    Sl,
}

/// Smith data: `g * A * h^{-1}` equals the stated diagonal.
///
/// In the `Gl` variant the diagonal is `diag(h_1, ..., h_n)` with each `h_i`
/// in `P` and `h_1 | h_2 | ... | h_n`. In the `Sl` variant both transforms
/// have determinant one and the last diagonal entry picks up the unit `z`.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub diag: Vec<PRep>,
    pub g: RingMat,
    pub h: RingMat,
    pub h_inv: RingMat,
    pub variant: SnfVariant,
    pub z: RingElt,
}

impl SmithForm {
    /// The diagonal as a matrix, including the `z` twist in the SL variant.
    pub fn diagonal_matrix(&self) -> RingMat {
        let m = self.g.modulus();
        let mut d: Vec<RingElt> = self.diag.iter().map(|p| p.elt()).collect();
        if let Some(last) = d.last_mut() {
            if self.variant == SnfVariant::Sl {
                *last = last.mul(self.z);
            }
        }
        RingMat::diagonal(&d, m)
    }

    /// Checks the reconstruction identity `g * A * h^{-1} = diag` exactly.
    pub fn verify(&self, a: &RingMat) -> bool {
        self.g.mul(a).mul(&self.h_inv) == self.diagonal_matrix()
            && self.h.mul(&self.h_inv) == RingMat::identity(a.size(), a.modulus())
    }
}

/// Integer Smith reduction with explicit transforms.
///
/// Returns `(u, v, v_inv, diag)` with `u * a * v = diag(d)`, `u`, `v`
/// unimodular, `d_i >= 0` and `d_1 | d_2 | ... | d_n`.
pub(crate) fn smith_z(a: &IntMat) -> (IntMat, IntMat, IntMat, Vec<BigInt>) {
    let n = a.size();
    let mut m = a.clone();
    let mut u = IntMat::identity(n);
    let mut v = IntMat::identity(n);
    let mut v_inv = IntMat::identity(n);

    let row_sub = |m: &mut IntMat, u: &mut IntMat, i: usize, j: usize, q: &BigInt| {
        for c in 0..n {
            let t = q * m.at(j, c);
            let cur = m.at(i, c).clone();
            m.set(i, c, cur - &t);
            let t = q * u.at(j, c);
            let cur = u.at(i, c).clone();
            u.set(i, c, cur - t);
        }
    };
    let col_sub = |m: &mut IntMat, v: &mut IntMat, v_inv: &mut IntMat, i: usize, j: usize, q: &BigInt| {
        // col_i -= q * col_j; inverse op adds q*row_i to row_j of v_inv.
        for r in 0..n {
            let t = q * m.at(r, j);
            let cur = m.at(r, i).clone();
            m.set(r, i, cur - &t);
            let t = q * v.at(r, j);
            let cur = v.at(r, i).clone();
            v.set(r, i, cur - t);
        }
        for c in 0..n {
            let t = q * v_inv.at(i, c);
            let cur = v_inv.at(j, c).clone();
            v_inv.set(j, c, cur + t);
        }
    };
    let swap_rows = |m: &mut IntMat, u: &mut IntMat, i: usize, j: usize| {
        for c in 0..n {
            let a = m.at(i, c).clone();
            let b = m.at(j, c).clone();
            m.set(i, c, b);
            m.set(j, c, a);
            let a = u.at(i, c).clone();
            let b = u.at(j, c).clone();
            u.set(i, c, b);
            u.set(j, c, a);
        }
    };
    let swap_cols = |m: &mut IntMat, v: &mut IntMat, v_inv: &mut IntMat, i: usize, j: usize| {
        for r in 0..n {
            let a = m.at(r, i).clone();
            let b = m.at(r, j).clone();
            m.set(r, i, b);
            m.set(r, j, a);
            let a = v.at(r, i).clone();
            let b = v.at(r, j).clone();
            v.set(r, i, b);
            v.set(r, j, a);
        }
        for c in 0..n {
            let a = v_inv.at(i, c).clone();
            let b = v_inv.at(j, c).clone();
            v_inv.set(i, c, b);
            v_inv.set(j, c, a);
        }
    };
    let negate_row = |m: &mut IntMat, u: &mut IntMat, i: usize| {
        for c in 0..n {
            let a = -m.at(i, c);
            m.set(i, c, a);
            let a = -u.at(i, c);
            u.set(i, c, a);
        }
    };

    let diagonalize = |m: &mut IntMat, u: &mut IntMat, v: &mut IntMat, v_inv: &mut IntMat| {
        let mut t = 0;
        while t < n {
            // Pivot: smallest nonzero absolute value, then lexicographic.
            // Reselecting after every change keeps the quotients (and hence
            // the entries) small.
            'clear: loop {
                let mut pivot: Option<(usize, usize)> = None;
                for i in t..n {
                    for j in t..n {
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
                    None => return,
                };
                if pi != t {
                    swap_rows(m, u, pi, t);
                }
                if pj != t {
                    swap_cols(m, v, v_inv, pj, t);
                }
                for r in t + 1..n {
                    if m.at(r, t).is_zero() {
                        continue;
                    }
                    let q = m.at(r, t).div_floor(m.at(t, t));
                    row_sub(m, u, r, t, &q);
                    if !m.at(r, t).is_zero() {
                        continue 'clear; // strictly smaller remainder
                    }
                }
                for c in t + 1..n {
                    if m.at(t, c).is_zero() {
                        continue;
                    }
                    let q = m.at(t, c).div_floor(m.at(t, t));
                    col_sub(m, v, v_inv, c, t, &q);
                    if !m.at(t, c).is_zero() {
                        continue 'clear;
                    }
                }
                break;
            }
            t += 1;
        }
    };

    if n == 0 {
        return (u, v, v_inv, Vec::new());
    }
    diagonalize(&mut m, &mut u, &mut v, &mut v_inv);
    // Normalize signs and enforce the divisibility chain, re-running the
    // elimination after each gcd fix; entries only shrink, so this terminates.
    loop {
        for i in 0..n {
            if m.at(i, i).is_negative() {
                negate_row(&mut m, &mut u, i);
            }
        }
        let mut violation = None;
        for i in 0..n - 1 {
            let a = m.at(i, i);
            let b = m.at(i + 1, i + 1);
            if a.is_zero() {
                if !b.is_zero() {
                    violation = Some(i);
                    break;
                }
            } else if !(b % a).is_zero() {
                violation = Some(i);
                break;
            }
        }
        match violation {
            None => break,
            Some(i) => {
                // Fold column i+1 into column i and rediagonalize.
                let one = BigInt::from(-1);
                col_sub(&mut m, &mut v, &mut v_inv, i, i + 1, &one);
                diagonalize(&mut m, &mut u, &mut v, &mut v_inv);
            }
        }
    }
    let diag = (0..n).map(|i| m.at(i, i).clone()).collect();
    (u, v, v_inv, diag)
}

/// Smith normal form over the ring of `a`: the unique `P`-valued divisor
/// chain in the `GL^2`-orbit, with invertible transforms realizing it.
pub fn smith_normal_form(a: &RingMat) -> Result<SmithForm> {
    let m = a.modulus();
    let n = a.size();
    let (u, v, v_inv, diag_z) = smith_z(&a.lift());
    if m.is_z() {
        let diag = diag_z
            .iter()
            .map(|d| {
                let v = i64::try_from(d).map_err(|_| Error::IntegerOverflow)?;
                Ok(prep_of(canonical(v, m)).0)
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(SmithForm {
            diag,
            g: u.reduce_mod(m)?,
            h: v_inv.reduce_mod(m)?,
            h_inv: v.reduce_mod(m)?,
            variant: SnfVariant::Gl,
            z: RingElt::one(m),
        });
    }
    let mut diag = Vec::with_capacity(n);
    let mut units = Vec::with_capacity(n);
    for d in &diag_z {
        let (h, unit) = prep_of(canonical(reduce_bigint(d, m)?, m));
        diag.push(h);
        units.push(unit);
    }
    // u*A*v = D over Z; mod m, D = diag(h_i) * diag(unit_i), so absorbing the
    // units into the right transform leaves the pure P-chain.
    let g = u.reduce_mod(m)?;
    let unit_mat = RingMat::diagonal(&units, m);
    let unit_inv: Vec<RingElt> = units.iter().map(|&x| x.inverse().unwrap()).collect();
    let unit_inv_mat = RingMat::diagonal(&unit_inv, m);
    let h = unit_mat.mul(&v_inv.reduce_mod(m)?);
    let h_inv = v.reduce_mod(m)?.mul(&unit_inv_mat);
    Ok(SmithForm {
        diag,
        g,
        h,
        h_inv,
        variant: SnfVariant::Gl,
        z: RingElt::one(m),
    })
}

/// `SL^2` Smith form: transforms of determinant one and the canonical
/// `(chain, z)` orbit datum, with the unit `z` scaling the last diagonal
/// entry.
///
/// `z` is reported as the smallest unit producing the invariant last entry
/// `z * h_n`.
pub fn sl_smith_normal_form(a: &RingMat) -> Result<SmithForm> {
    let m = a.modulus();
    let n = a.size();
    let gl = smith_normal_form(a)?;
    let det_g = gl.g.det();
    let det_h = gl.h.det();
    // g = sigma(det g) g1, h = sigma(det h) h1 with g1, h1 in SL; then
    // g1 * A * h1^{-1} = sigma(det(g)^{-1} det(h)) * diag.
    let sigma = |z: RingElt| -> RingMat {
        let mut d: Vec<RingElt> = vec![RingElt::one(m); n];
        d[n - 1] = z;
        RingMat::diagonal(&d, m)
    };
    let a_inv = det_g.inverse().map_err(|_| Error::NotInvertible)?;
    let b_inv = det_h.inverse().map_err(|_| Error::NotInvertible)?;
    let g_sl = sigma(a_inv).mul(&gl.g);
    let h_sl = sigma(b_inv).mul(&gl.h);
    let h_sl_inv = gl.h_inv.mul(&sigma(det_h));
    let twist = a_inv.mul(det_h);
    let h_n = *gl.diag.last().expect("nonempty diagonal");
    let z = canonical_unit_for(twist, h_n);
    Ok(SmithForm {
        diag: gl.diag,
        g: g_sl,
        h: h_sl,
        h_inv: h_sl_inv,
        variant: SnfVariant::Sl,
        z,
    })
}

/// Smallest unit `u` with `u * h = z * h`; pins down the reported `z` when
/// the stabilizer `{w : w h = h}` is nontrivial.
pub(crate) fn canonical_unit_for(z: RingElt, h: PRep) -> RingElt {
    let m = z.modulus();
    if m.is_z() {
        return if h.is_zero() { RingElt::one(m) } else { z };
    }
    if h.is_zero() {
        return RingElt::one(m);
    }
    let target = z.mul(h.elt());
    let mv = m.value() as i64;
    let g = h.value().gcd(&mv);
    let step = mv / g;
    let mut best: Option<i64> = None;
    let mut w = RingElt::one(m);
    // Units congruent to 1 mod m/gcd(h, m) form the stabilizer of h.
    for _ in 0..g {
        let u = z.mul(w);
        if u.is_unit() && u.mul(h.elt()) == target {
            best = Some(best.map_or(u.value(), |b: i64| b.min(u.value())));
        }
        w = w.add(canonical(step, m));
    }
    canonical(best.unwrap_or(1), m)
}

/// Determinantal divisors `d_1, ..., d_n`: the `P`-generator of the subgroup
/// spanned by all `i x i` minors. Invariant under one- and two-sided
/// multiplication by invertible matrices.
pub fn determinantal_divisors(a: &RingMat) -> Result<Vec<PRep>> {
    let m = a.modulus();
    let n = a.size();
    let lift = a.lift();
    let mut out = Vec::with_capacity(n);
    let mut all_zero_from_here = false;
    for k in 1..=n {
        if all_zero_from_here {
            out.push(PRep::zero(m));
            continue;
        }
        let mut g = BigInt::zero();
        let mut rows = first_combination(k);
        loop {
            let mut cols = first_combination(k);
            loop {
                let d = lift.minor(&rows, &cols);
                g = g.gcd(&d);
                if g.is_one() {
                    break;
                }
                if !next_combination(&mut cols, n) {
                    break;
                }
            }
            if g.is_one() {
                break;
            }
            if !next_combination(&mut rows, n) {
                break;
            }
        }
        let elt = if m.is_z() {
            canonical(i64::try_from(&g).map_err(|_| Error::IntegerOverflow)?, m)
        } else {
            canonical(reduce_bigint(&g, m)?, m)
        };
        let rep = prep_of(elt).0;
        if rep.is_zero() {
            all_zero_from_here = true;
        }
        out.push(rep);
    }
    Ok(out)
}

fn first_combination(k: usize) -> Vec<usize> {
    (0..k).collect()
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - (k - i) {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Lifts `g` in `GL_n(Z/m)` with `det(g) = +-1 mod m` to a matrix in
/// `GL_n(Z)` reducing to it, with determinant the sign lift of `det(g)`.
///
/// The part of determinant one is decomposed into elementary transvections
/// over `Z/(m)`, each lifted verbatim; a final `diag(1, ..., +-1)` restores
/// the sign. Residue classes without a `+-1` determinant have no unimodular
/// preimage and are rejected.
pub fn lift_gl(g: &RingMat) -> Result<IntMat> {
    let m = g.modulus();
    if m.is_z() {
        let lift = g.lift();
        return if lift.is_unimodular() {
            Ok(lift)
        } else {
            Err(Error::NotInvertible)
        };
    }
    let n = g.size();
    let mv = m.value();
    let d = g.det().value();
    let negative = mv != 1 && d != 1 && d == (mv as i64 - 1);
    if d != 1 && !negative && mv != 1 {
        return Err(Error::NoUnimodularLift(d, mv));
    }
    // Strip the sign so the rest has determinant one.
    let mut sigma = RingMat::identity(n, m);
    let mut sign_lift = IntMat::identity(n);
    if negative {
        sigma.set(n - 1, n - 1, canonical(-1, m));
        sign_lift.set(n - 1, n - 1, BigInt::from(-1));
    }
    let s = g.mul(&sigma); // sigma is its own inverse
    let trans = transvection_decomposition(&s)?;
    let mut lift = IntMat::identity(n);
    for (i, j, lam) in trans {
        let mut t = IntMat::identity(n);
        t.set(i, j, BigInt::from(lam));
        lift = lift.mul(&t);
    }
    Ok(lift.mul(&sign_lift))
}

/// Writes `s` in `SL_n(Z/m)` as an ordered product of transvections
/// `I + lambda * e_{ij}`.
fn transvection_decomposition(s: &RingMat) -> Result<Vec<(usize, usize, i64)>> {
    let m = s.modulus();
    let n = s.size();
    if !s.is_sl() && m.value() != 1 {
        return Err(Error::NotInvertible);
    }
    if n == 1 {
        return Ok(Vec::new());
    }
    let mut w = s.clone();
    let mut applied: Vec<(usize, usize, i64)> = Vec::new();
    let mut row_add = |w: &mut RingMat, i: usize, j: usize, lam: RingElt| {
        if lam.is_zero() {
            return;
        }
        for c in 0..n {
            let t = w.at(i, c).add(lam.mul(w.at(j, c)));
            w.set(i, c, t);
        }
        applied.push((i, j, lam.value()));
    };

    for c in 0..n {
        // Drain every lower entry of column c into the pivot by Euclidean
        // descent on canonical representatives. Row ops preserve the ideal
        // the column generates, and the trailing block is invertible, so the
        // surviving pivot is a unit.
        for r in c + 1..n {
            loop {
                let a = w.at(c, c).value();
                let b = w.at(r, c).value();
                if b == 0 {
                    break;
                }
                if a == 0 {
                    row_add(&mut w, c, r, RingElt::one(m));
                    row_add(&mut w, r, c, canonical(-1, m));
                    break;
                }
                if b >= a {
                    row_add(&mut w, r, c, canonical(-(b / a), m));
                } else {
                    row_add(&mut w, c, r, canonical(-(a / b), m));
                }
            }
        }
        let pinv = w.at(c, c).inverse()?;
        for r in 0..n {
            if r == c || w.at(r, c).is_zero() {
                continue;
            }
            let lam = w.at(r, c).mul(pinv).neg();
            row_add(&mut w, r, c, lam);
        }
    }
    // W is now diagonal with unit entries of product one. Sweep the units to
    // the last slot via 2x2 Whitehead moves, which are transvection products.
    for i in 0..n - 1 {
        let u = w.at(i, i);
        if u == RingElt::one(m) {
            continue;
        }
        let a = u.inverse()?;
        let a_inv = u;
        // E = diag(a, a^{-1}) on rows (i, i+1):
        //   [[1,a],[0,1]] [[1,0],[-a^{-1},1]] [[1,a],[0,1]] [[0,-1],[1,0]]
        // with the rotation itself a product of three transvections.
        let (r1, r2) = (i, i + 1);
        row_add(&mut w, r1, r2, canonical(-1, m));
        row_add(&mut w, r2, r1, RingElt::one(m));
        row_add(&mut w, r1, r2, canonical(-1, m));
        row_add(&mut w, r1, r2, a);
        row_add(&mut w, r2, r1, a_inv.neg());
        row_add(&mut w, r1, r2, a);
    }
    debug_assert_eq!(w, RingMat::identity(n, m), "reduction must reach identity");
    // W was reduced by T_k ... T_1 * s = I, so s is the product of the
    // inverses in application order.
    Ok(applied
        .into_iter()
        .map(|(i, j, lam)| (i, j, canonical(-lam, m).value()))
        .collect())
}
