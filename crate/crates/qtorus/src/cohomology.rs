//! Biadditive 2-cocycles on `Z^n` with cyclic scalar exponents.
//!
//! A cocycle is stored through its exponent matrix `B`: the scalar value on
//! a pair `(g, g')` is `q^(g^T B g')` for the distinguished root of unity
//! `q` of order `m`. Since `Z^n` is free, every cohomology class has such a
//! biadditive representative, and the commutator map `B -> B - B^T` onto
//! alternating matrices is an isomorphism on classes. Coboundaries of
//! quadratic forms supply the witnesses: two cocycles are cohomologous
//! exactly when their difference is symmetric, and the symmetric difference
//! is the polarization of an explicit quadratic form in the basis
//! `binom(g_i, 2)`, `g_i g_j`, `g_i`.

use crate::alternating::AltMat;
use crate::cyclic_ring::{canonical, Modulus, RingElt};
use crate::matrix::{IntMat, RingMat};
use crate::{Error, Result};
use num_integer::Integer;
use num_traits::{One, Signed};

/// Biadditive 2-cocycle `f(g, g') = q^(g^T B g')` on `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiCocycle {
    n: usize,
    modulus: Modulus,
    b: Vec<i64>,
}

impl BiCocycle {
    pub fn from_rows(rows: &[Vec<i64>], m: Modulus) -> Result<BiCocycle> {
        let mat = RingMat::from_rows(rows, m)?;
        Ok(Self::from_ring_mat(&mat))
    }

    pub fn from_ring_mat(mat: &RingMat) -> BiCocycle {
        let n = mat.size();
        BiCocycle {
            n,
            modulus: mat.modulus(),
            b: (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| mat.raw(i, j))
                .collect(),
        }
    }

    pub fn zero(n: usize, m: Modulus) -> BiCocycle {
        BiCocycle {
            n,
            modulus: m,
            b: vec![0; n * n],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn exponent_matrix(&self) -> RingMat {
        let rows: Vec<Vec<i64>> = (0..self.n)
            .map(|i| self.b[i * self.n..(i + 1) * self.n].to_vec())
            .collect();
        RingMat::from_rows(&rows, self.modulus).unwrap()
    }

    pub fn at(&self, i: usize, j: usize) -> RingElt {
        canonical(self.b[i * self.n + j], self.modulus)
    }

    /// Exponent of the cocycle value on a pair of group elements.
    pub fn eval(&self, g: &[i64], g2: &[i64]) -> RingElt {
        assert_eq!(g.len(), self.n);
        assert_eq!(g2.len(), self.n);
        let mut acc: i128 = 0;
        for i in 0..self.n {
            if g[i] == 0 {
                continue;
            }
            for j in 0..self.n {
                acc += g[i] as i128 * self.b[i * self.n + j] as i128 * g2[j] as i128;
            }
        }
        reduce_i128(acc, self.modulus)
    }

    pub fn add(&self, other: &BiCocycle) -> BiCocycle {
        assert_eq!(self.n, other.n);
        assert_eq!(self.modulus, other.modulus);
        BiCocycle {
            n: self.n,
            modulus: self.modulus,
            b: self
                .b
                .iter()
                .zip(&other.b)
                .map(|(&x, &y)| canonical(x, self.modulus).add(canonical(y, self.modulus)).value())
                .collect(),
        }
    }

    /// Pullback along an integer matrix: exponent matrix `phi^T B phi`.
    pub fn pullback(&self, phi: &IntMat) -> BiCocycle {
        let n = self.n;
        assert_eq!(phi.size(), n);
        let mut out = vec![0i64; n * n];
        for k in 0..n {
            for l in 0..n {
                let mut acc: i128 = 0;
                for i in 0..n {
                    let p_ik = i64::try_from(phi.at(i, k)).expect("desk-scale base change") as i128;
                    if p_ik == 0 {
                        continue;
                    }
                    for j in 0..n {
                        let p_jl =
                            i64::try_from(phi.at(j, l)).expect("desk-scale base change") as i128;
                        acc += p_ik * self.b[i * n + j] as i128 * p_jl;
                    }
                }
                out[k * n + l] = reduce_i128(acc, self.modulus).value();
            }
        }
        BiCocycle {
            n,
            modulus: self.modulus,
            b: out,
        }
    }
}

fn reduce_i128(v: i128, m: Modulus) -> RingElt {
    if m.is_z() {
        canonical(i64::try_from(v).expect("exponent overflow"), m)
    } else {
        canonical(v.rem_euclid(m.value() as i128) as i64, m)
    }
}

/// The commutator map: `B - B^T`, the alternating form of the extension the
/// cocycle defines.
pub fn commutator_form(f: &BiCocycle) -> AltMat {
    let n = f.n;
    let mut upper = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            upper.push(f.at(i, j).sub(f.at(j, i)).value());
        }
    }
    AltMat::from_upper(n, f.modulus, &upper).unwrap()
}

/// Section of the commutator map: the strictly lower-triangular cocycle with
/// `f(e_i, e_j) = eta(e_i, e_j)` for `i > j` and `0` otherwise. Splitting:
/// `commutator_form(alternating_section(eta)) = eta`.
pub fn alternating_section(eta: &AltMat) -> BiCocycle {
    let n = eta.size();
    let m = eta.modulus();
    let mut b = vec![0i64; n * n];
    for i in 0..n {
        for j in 0..i {
            b[i * n + j] = eta.entry(i, j).value();
        }
    }
    BiCocycle { n, modulus: m, b }
}

/// Quadratic form on `Z^n` in the integer-valued basis: coefficients of
/// `binom(g_i, 2)`, of `g_i g_j` for `i < j`, and of the linear terms `g_i`,
/// all exponents of `q` mod `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    n: usize,
    modulus: Modulus,
    a: Vec<i64>,
    b_upper: Vec<i64>,
    c: Vec<i64>,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl QuadraticForm {
    pub fn zero(n: usize, m: Modulus) -> QuadraticForm {
        QuadraticForm {
            n,
            modulus: m,
            a: vec![0; n],
            b_upper: vec![0; n * (n - 1) / 2],
            c: vec![0; n],
        }
    }

    pub fn new(
        n: usize,
        m: Modulus,
        a: &[i64],
        b_upper: &[i64],
        c: &[i64],
    ) -> Result<QuadraticForm> {
        if a.len() != n || c.len() != n || b_upper.len() != n * (n - 1) / 2 {
            return Err(Error::DimensionMismatch(a.len(), n));
        }
        Ok(QuadraticForm {
            n,
            modulus: m,
            a: a.iter().map(|&v| canonical(v, m).value()).collect(),
            b_upper: b_upper.iter().map(|&v| canonical(v, m).value()).collect(),
            c: c.iter().map(|&v| canonical(v, m).value()).collect(),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn diag_coeff(&self, i: usize) -> i64 {
        self.a[i]
    }

    pub fn pair_coeff(&self, i: usize, j: usize) -> i64 {
        self.b_upper[pair_index(self.n, i, j)]
    }

    pub fn linear_coeff(&self, i: usize) -> i64 {
        self.c[i]
    }

    pub fn set_pair_coeff(&mut self, i: usize, j: usize, v: i64) {
        self.b_upper[pair_index(self.n, i, j)] = canonical(v, self.modulus).value();
    }

    pub fn set_diag_coeff(&mut self, i: usize, v: i64) {
        self.a[i] = canonical(v, self.modulus).value();
    }

    pub fn set_linear_coeff(&mut self, i: usize, v: i64) {
        self.c[i] = canonical(v, self.modulus).value();
    }

    /// Drops the linear part (it polarizes to zero).
    pub fn without_linear_part(&self) -> QuadraticForm {
        let mut out = self.clone();
        out.c = vec![0; self.n];
        out
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|&v| v == 0)
            && self.b_upper.iter().all(|&v| v == 0)
            && self.c.iter().all(|&v| v == 0)
    }

    /// Whether the quadratic (non-linear) part vanishes.
    pub fn is_linear(&self) -> bool {
        self.a.iter().all(|&v| v == 0) && self.b_upper.iter().all(|&v| v == 0)
    }

    /// Exponent value at a lattice point.
    pub fn eval(&self, g: &[i64]) -> RingElt {
        assert_eq!(g.len(), self.n);
        let mut acc: i128 = 0;
        for i in 0..self.n {
            let gi = g[i] as i128;
            acc += self.a[i] as i128 * (gi * (gi - 1) / 2);
            acc += self.c[i] as i128 * gi;
            for j in i + 1..self.n {
                acc += self.b_upper[pair_index(self.n, i, j)] as i128 * gi * (g[j] as i128);
            }
        }
        reduce_i128(acc, self.modulus)
    }

    pub fn add(&self, other: &QuadraticForm) -> QuadraticForm {
        assert_eq!(self.n, other.n);
        assert_eq!(self.modulus, other.modulus);
        let m = self.modulus;
        QuadraticForm {
            n: self.n,
            modulus: m,
            a: zip_add(&self.a, &other.a, m),
            b_upper: zip_add(&self.b_upper, &other.b_upper, m),
            c: zip_add(&self.c, &other.c, m),
        }
    }

    pub fn neg(&self) -> QuadraticForm {
        let m = self.modulus;
        QuadraticForm {
            n: self.n,
            modulus: m,
            a: self.a.iter().map(|&v| canonical(-v, m).value()).collect(),
            b_upper: self
                .b_upper
                .iter()
                .map(|&v| canonical(-v, m).value())
                .collect(),
            c: self.c.iter().map(|&v| canonical(-v, m).value()).collect(),
        }
    }

    /// The symmetric matrix of the polarization `(g, g') -> chi(g + g') -
    /// chi(g) - chi(g')`: diagonal from the binomial coefficients, off
    /// diagonal from the product coefficients. Linear terms do not
    /// contribute.
    pub fn polarize(&self) -> RingMat {
        let n = self.n;
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..n {
            rows[i][i] = self.a[i];
            for j in i + 1..n {
                let b = self.b_upper[pair_index(n, i, j)];
                rows[i][j] = b;
                rows[j][i] = b;
            }
        }
        RingMat::from_rows(&rows, self.modulus).unwrap()
    }

    /// Composition with an integer linear map: the form `g -> chi(phi g)`,
    /// re-expanded exactly in the binomial basis via
    /// `binom(a x, 2) = a^2 binom(x, 2) + binom(a, 2) x` and
    /// `x^2 = 2 binom(x, 2) + x`.
    pub fn compose_linear(&self, phi: &IntMat) -> QuadraticForm {
        let n = self.n;
        assert_eq!(phi.size(), n);
        let p = |i: usize, k: usize| -> i128 {
            i64::try_from(phi.at(i, k)).expect("desk-scale base change") as i128
        };
        let mut a = vec![0i128; n];
        let mut b = vec![0i128; n * (n - 1) / 2];
        let mut c = vec![0i128; n];
        let binom2 = |x: i128| x * (x - 1) / 2;
        for i in 0..n {
            let ai = self.a[i] as i128;
            if ai != 0 {
                for k in 0..n {
                    let pik = p(i, k);
                    a[k] += ai * pik * pik;
                    c[k] += ai * binom2(pik);
                    for l in k + 1..n {
                        b[pair_index(n, k, l)] += ai * pik * p(i, l);
                    }
                }
            }
            for j in i + 1..n {
                let bij = self.b_upper[pair_index(n, i, j)] as i128;
                if bij == 0 {
                    continue;
                }
                for k in 0..n {
                    let prod = p(i, k) * p(j, k);
                    a[k] += 2 * bij * prod;
                    c[k] += bij * prod;
                    for l in k + 1..n {
                        b[pair_index(n, k, l)] += bij * (p(i, k) * p(j, l) + p(i, l) * p(j, k));
                    }
                }
            }
            let ci = self.c[i] as i128;
            if ci != 0 {
                for k in 0..n {
                    c[k] += ci * p(i, k);
                }
            }
        }
        let m = self.modulus;
        QuadraticForm {
            n,
            modulus: m,
            a: a.into_iter().map(|v| reduce_i128(v, m).value()).collect(),
            b_upper: b.into_iter().map(|v| reduce_i128(v, m).value()).collect(),
            c: c.into_iter().map(|v| reduce_i128(v, m).value()).collect(),
        }
    }
}

fn zip_add(x: &[i64], y: &[i64], m: Modulus) -> Vec<i64> {
    x.iter()
        .zip(y)
        .map(|(&a, &b)| canonical(a, m).add(canonical(b, m)).value())
        .collect()
}

/// Decides whether two cocycles differ by a quadratic-form coboundary and
/// returns the minimal witness (`c = 0`): `chi` with
/// `f2(g, g') - f1(g, g') = chi(g + g') - chi(g) - chi(g')` in exponents.
///
/// A witness exists exactly when the commutator forms agree, i.e. when the
/// exponent difference is symmetric.
pub fn cohomologous(f1: &BiCocycle, f2: &BiCocycle) -> Option<QuadraticForm> {
    assert_eq!(f1.n, f2.n, "cocycles on different ranks");
    assert_eq!(f1.modulus, f2.modulus, "cocycles over different moduli");
    let n = f1.n;
    let m = f1.modulus;
    let mut t = vec![0i64; n * n];
    for i in 0..n {
        for j in 0..n {
            t[i * n + j] = f2.at(i, j).sub(f1.at(i, j)).value();
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if t[i * n + j] != t[j * n + i] {
                return None;
            }
        }
    }
    let mut chi = QuadraticForm::zero(n, m);
    for i in 0..n {
        chi.a[i] = t[i * n + i];
        for j in i + 1..n {
            chi.b_upper[pair_index(n, i, j)] = t[i * n + j];
        }
    }
    Some(chi)
}

/// Checks the lifting condition for a base change: `phi^T B phi - B` must be
/// symmetric and equal to the polarization of `chi`. The linear part of
/// `chi` (and any unit character) polarizes away and never affects the test.
pub fn cocycle_condition(f: &BiCocycle, phi: &IntMat, chi: &QuadraticForm) -> Result<bool> {
    if phi.size() != f.n {
        return Err(Error::DimensionMismatch(phi.size(), f.n));
    }
    if !phi.det().abs().is_one() {
        return Err(Error::NotInvertible);
    }
    let pulled = f.pullback(phi);
    let t = pulled.exponent_matrix();
    let b = f.exponent_matrix();
    let diff = sub_ring_mat(&t, &b);
    if diff != diff.transpose() {
        return Ok(false);
    }
    Ok(diff == chi.polarize())
}

fn sub_ring_mat(a: &RingMat, b: &RingMat) -> RingMat {
    let n = a.size();
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| a.at(i, j).sub(b.at(i, j)).value()).collect())
        .collect();
    RingMat::from_rows(&rows, a.modulus()).unwrap()
}

/// Structure of the degree-two cohomology of a direct sum of cyclic groups
/// with cyclic coefficients: one symmetric-extension factor per finite
/// summand and one alternating factor per pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H2Descriptor {
    /// Orders of the symmetric (abelian-extension) factors, one per nonzero
    /// summand order; `0` encodes an infinite factor.
    pub ext_factors: Vec<u64>,
    /// Orders of the alternating factors, one per unordered pair `i < j`;
    /// `0` encodes an infinite factor.
    pub alt_factors: Vec<u64>,
}

/// Computes the factor orders of `H^2` for `Gamma = sum of Z/(m_i)` with a
/// cyclic coefficient group of order `z_order` (`0` for `Z`), using the
/// convention `gcd(m, 0) = m`.
pub fn h2_structure(gamma: &[u64], z_order: Modulus) -> H2Descriptor {
    let z0 = z_order.value();
    let ext_factors = gamma
        .iter()
        .filter(|&&mi| mi != 0)
        .map(|&mi| if z0 == 0 { mi } else { mi.gcd(&z0) })
        .collect();
    let mut alt_factors = Vec::new();
    for i in 0..gamma.len() {
        for j in i + 1..gamma.len() {
            let k = gamma[i].gcd(&gamma[j]); // gcd(m, 0) = m
            let order = if z0 == 0 {
                if k == 0 {
                    0
                } else {
                    1
                }
            } else {
                k.gcd(&z0)
            };
            alt_factors.push(order);
        }
    }
    H2Descriptor {
        ext_factors,
        alt_factors,
    }
}
