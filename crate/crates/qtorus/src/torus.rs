//! Twisted group algebras of `Z^n` and their graded classification.
//!
//! A presentation is an exponent matrix `B` over `Z/(m)`: basis elements
//! multiply as `d_g * d_h = q^(g^T B h) * d_{g+h}` with `q` a fixed root of
//! unity of order `m`. Elements live over the concrete field `Q(zeta_M)`
//! with conductor `M = lcm(max(m,1), 2)`, so `-1` is always available.
//!
//! The classification pipeline: the commutator matrix `B - B^T` determines
//! the commutator subgroup `C_A = <q^(g_0)>`; rescaling by its generator and
//! taking the canonical orbit representative of the alternating matrix
//! yields the tensor normal form (hyperbolic factors with a divisor chain, a
//! twist when the blocks fill the rank, and a commutative remainder), with
//! an explicit base-change-plus-coboundary witness. Two presentations are
//! graded isomorphic exactly when these invariants coincide.

use crate::alternating::{canonical_rep, AltMat};
use crate::cohomology::{cohomologous, BiCocycle, QuadraticForm};
use crate::cyclic_ring::{canonical, Modulus, RingElt};
use crate::cyclotomic::{root_of_unity, CycloElt};
use crate::matrix::{IntMat, RingMat};
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Presentation of a rank-`n` torus by an exponent matrix mod `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusPresentation {
    n: usize,
    q_order: u64,
    modulus: Modulus,
    conductor: u64,
    b: Vec<i64>,
}

impl TorusPresentation {
    pub fn new(n: usize, q_order: u64, rows: &[Vec<i64>]) -> Result<TorusPresentation> {
        let modulus = Modulus::new(q_order)?;
        let mat = RingMat::from_rows(rows, modulus)?;
        if mat.size() != n {
            return Err(Error::DimensionMismatch(mat.size(), n));
        }
        let conductor = lcm(q_order.max(1), 2);
        Ok(TorusPresentation {
            n,
            q_order,
            modulus,
            conductor,
            b: (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| mat.raw(i, j))
                .collect(),
        })
    }

    /// The standard rank-2 presentation: `u1 u2 = q u2 u1`.
    pub fn standard(q_order: u64) -> TorusPresentation {
        Self::new(2, q_order, &[vec![0, 1], vec![0, 0]]).unwrap()
    }

    /// Rank-2 presentation with `u1 u2 = q^e u2 u1`.
    pub fn standard_power(q_order: u64, e: i64) -> TorusPresentation {
        Self::new(2, q_order, &[vec![0, e], vec![0, 0]]).unwrap()
    }

    /// Commutative presentation of the given rank.
    pub fn laurent(n: usize, q_order: u64) -> TorusPresentation {
        Self::new(n, q_order, &vec![vec![0; n]; n]).unwrap()
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn q_order(&self) -> u64 {
        self.q_order
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn exponent_rows(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|i| self.b[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    pub fn cocycle(&self) -> BiCocycle {
        BiCocycle::from_rows(&self.exponent_rows(), self.modulus).unwrap()
    }

    /// The root of unity `q` inside `Q(zeta_M)`; needs `m >= 1`.
    pub fn q(&self) -> Result<CycloElt> {
        if self.q_order == 0 {
            return Err(Error::NonTorsionScalars);
        }
        Ok(root_of_unity(
            self.conductor,
            (self.conductor / self.q_order) as i64,
        ))
    }

    /// `q^e` as a concrete field element.
    pub fn scalar(&self, e: RingElt) -> Result<CycloElt> {
        if self.q_order == 0 {
            return Err(Error::NonTorsionScalars);
        }
        let step = (self.conductor / self.q_order) as i64;
        Ok(root_of_unity(self.conductor, step * e.value()))
    }

    /// Cocycle value `f(g, g') = q^(g^T B g')` in the field.
    pub fn twist(&self, g: &[i64], g2: &[i64]) -> Result<CycloElt> {
        self.scalar(self.cocycle().eval(g, g2))
    }

    /// The alternating commutator matrix `B - B^T`.
    pub fn commutator_matrix(&self) -> AltMat {
        crate::cohomology::commutator_form(&self.cocycle())
    }

    /// Order and generator exponent of the commutator subgroup
    /// `C_A = <q^(g_0)>`: `g_0` is the gcd of the commutator entries with
    /// `m`, and the order is `m / g_0` (with `0` = infinite, `1` = trivial).
    pub fn commutator_group(&self) -> (u64, u64) {
        let lam = self.commutator_matrix();
        let mut g0: u64 = self.q_order;
        for i in 0..self.n {
            for j in i + 1..self.n {
                g0 = gcd(g0, lam.entry(i, j).value().unsigned_abs());
            }
        }
        if self.q_order == 0 {
            if g0 == 0 {
                (1, 0)
            } else {
                (0, g0)
            }
        } else {
            match self.q_order.checked_div(g0) {
                // Zero commutator matrix: trivial group, generator exponent m.
                None => (1, self.q_order),
                Some(order) => (order, g0),
            }
        }
    }

    /// Rational means every commutator is torsion: automatic for `m > 0`,
    /// and for `m = 0` only when the commutator matrix vanishes.
    pub fn is_rational(&self) -> bool {
        self.q_order > 0 || self.commutator_matrix().is_zero()
    }

    /// Base change: the presentation with exponent matrix `phi^T B phi`.
    pub fn pullback(&self, phi: &IntMat) -> Result<TorusPresentation> {
        if !phi.is_unimodular() {
            return Err(Error::NotInvertible);
        }
        let pulled = self.cocycle().pullback(phi);
        Self::new(self.n, self.q_order, &pulled.exponent_matrix().to_rows())
    }

    /// Adds a symmetric coboundary to the exponent matrix; the graded class
    /// is unchanged.
    pub fn twist_by_symmetric(&self, sym_rows: &[Vec<i64>]) -> Result<TorusPresentation> {
        let s = RingMat::from_rows(sym_rows, self.modulus)?;
        if s != s.transpose() {
            return Err(Error::Unsupported("coboundary matrix must be symmetric".into()));
        }
        let mut rows = self.exponent_rows();
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = canonical(*v, self.modulus).add(s.at(i, j)).value();
            }
        }
        Self::new(self.n, self.q_order, &rows)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Sparse element: finitely many lattice points with nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusElement {
    pres: Arc<TorusPresentation>,
    terms: BTreeMap<Vec<i64>, CycloElt>,
}

impl TorusElement {
    pub fn zero(pres: Arc<TorusPresentation>) -> TorusElement {
        TorusElement {
            pres,
            terms: BTreeMap::new(),
        }
    }

    /// The basis element `d_g`.
    pub fn basis(pres: Arc<TorusPresentation>, degree: Vec<i64>) -> Result<TorusElement> {
        let coeff = CycloElt::one(pres.conductor());
        Self::single(pres, degree, coeff)
    }

    pub fn single(
        pres: Arc<TorusPresentation>,
        degree: Vec<i64>,
        coeff: CycloElt,
    ) -> Result<TorusElement> {
        if degree.len() != pres.rank() {
            return Err(Error::DimensionMismatch(degree.len(), pres.rank()));
        }
        if coeff.conductor() != pres.conductor() {
            return Err(Error::PresentationMismatch);
        }
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(degree, coeff);
        }
        Ok(TorusElement { pres, terms })
    }

    pub fn from_terms(
        pres: Arc<TorusPresentation>,
        terms: Vec<(Vec<i64>, CycloElt)>,
    ) -> Result<TorusElement> {
        let mut out = Self::zero(pres.clone());
        for (g, c) in terms {
            out = out.add(&Self::single(pres.clone(), g, c)?)?;
        }
        Ok(out)
    }

    pub fn presentation(&self) -> &Arc<TorusPresentation> {
        &self.pres
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &CycloElt)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn require_same(&self, other: &TorusElement) -> Result<()> {
        if self.pres.as_ref() != other.pres.as_ref() {
            return Err(Error::PresentationMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &TorusElement) -> Result<TorusElement> {
        self.require_same(other)?;
        let mut terms = self.terms.clone();
        for (g, c) in &other.terms {
            let entry = terms.entry(g.clone()).or_insert_with(|| CycloElt::zero(c.conductor()));
            *entry = entry.add(c);
            if entry.is_zero() {
                terms.remove(g);
            }
        }
        Ok(TorusElement {
            pres: self.pres.clone(),
            terms,
        })
    }

    pub fn neg(&self) -> TorusElement {
        TorusElement {
            pres: self.pres.clone(),
            terms: self.terms.iter().map(|(g, c)| (g.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &CycloElt) -> TorusElement {
        if c.is_zero() {
            return Self::zero(self.pres.clone());
        }
        TorusElement {
            pres: self.pres.clone(),
            terms: self.terms.iter().map(|(g, x)| (g.clone(), x.mul(c))).collect(),
        }
    }

    /// Twisted product: bilinear extension of
    /// `d_g * d_h = q^(g^T B h) d_{g+h}`.
    pub fn multiply(&self, other: &TorusElement) -> Result<TorusElement> {
        self.require_same(other)?;
        if self.pres.q_order() == 0 {
            return Err(Error::NonTorsionScalars);
        }
        let mut terms: BTreeMap<Vec<i64>, CycloElt> = BTreeMap::new();
        for (g, a) in &self.terms {
            for (h, b) in &other.terms {
                let twist = self.pres.twist(g, h)?;
                let coeff = a.mul(b).mul(&twist);
                let degree: Vec<i64> = g.iter().zip(h).map(|(x, y)| x + y).collect();
                let entry = terms
                    .entry(degree)
                    .or_insert_with(|| CycloElt::zero(coeff.conductor()));
                *entry = entry.add(&coeff);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(TorusElement {
            pres: self.pres.clone(),
            terms,
        })
    }

    /// Units are exactly the single-term elements.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    /// Inverse of a single-term element; anything else is rejected.
    pub fn unit_inverse(&self) -> Result<TorusElement> {
        if !self.is_unit() {
            return Err(Error::NonHomogeneous);
        }
        let (g, c) = self.terms.iter().next().unwrap();
        let unit = HomogeneousUnit {
            degree: g.clone(),
            coeff: c.clone(),
        };
        let inv = homogeneous_inv(&self.pres, &unit)?;
        Self::single(self.pres.clone(), inv.degree, inv.coeff)
    }
}

/// Whether two nonzero elements multiply to zero. The algebra is a domain,
/// so the answer is always `false`; this is exposed as a testable probe.
pub fn zero_divisor_probe(x: &TorusElement, y: &TorusElement) -> Result<bool> {
    if x.is_zero() || y.is_zero() {
        return Err(Error::Unsupported("probe needs nonzero elements".into()));
    }
    Ok(x.multiply(y)?.is_zero())
}

/// Homogeneous unit `c * d_g`, the group of which is a central extension of
/// `Z^n` by the scalar group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousUnit {
    pub degree: Vec<i64>,
    pub coeff: CycloElt,
}

impl HomogeneousUnit {
    pub fn new(degree: Vec<i64>, coeff: CycloElt) -> Result<HomogeneousUnit> {
        if coeff.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(HomogeneousUnit { degree, coeff })
    }

    pub fn identity(pres: &TorusPresentation) -> HomogeneousUnit {
        HomogeneousUnit {
            degree: vec![0; pres.rank()],
            coeff: CycloElt::one(pres.conductor()),
        }
    }
}

/// Group law `(c, g)(c', g') = (c c' f(g, g'), g + g')`.
pub fn homogeneous_mul(
    pres: &TorusPresentation,
    u: &HomogeneousUnit,
    v: &HomogeneousUnit,
) -> Result<HomogeneousUnit> {
    let twist = pres.twist(&u.degree, &v.degree)?;
    Ok(HomogeneousUnit {
        degree: u.degree.iter().zip(&v.degree).map(|(a, b)| a + b).collect(),
        coeff: u.coeff.mul(&v.coeff).mul(&twist),
    })
}

/// Inverse `(c, g)^{-1} = (c^{-1} f(g, -g)^{-1}, -g)`.
pub fn homogeneous_inv(
    pres: &TorusPresentation,
    u: &HomogeneousUnit,
) -> Result<HomogeneousUnit> {
    let neg: Vec<i64> = u.degree.iter().map(|v| -v).collect();
    let twist = pres.twist(&u.degree, &neg)?;
    Ok(HomogeneousUnit {
        degree: neg,
        coeff: u.coeff.inv()?.mul(&twist.inv()?),
    })
}

/// Graded isomorphism witness: `d_g -> q^(chi(g)) d_(phi g)`.
///
/// Valid from `src` to `dst` when `phi^T B_dst phi - B_src` equals the
/// polarization of `chi`.
#[derive(Debug, Clone)]
pub struct IsoWitness {
    pub phi: IntMat,
    pub chi: QuadraticForm,
}

impl IsoWitness {
    pub fn identity(pres: &TorusPresentation) -> IsoWitness {
        IsoWitness {
            phi: IntMat::identity(pres.rank()),
            chi: QuadraticForm::zero(pres.rank(), pres.modulus()),
        }
    }

    /// Checks the transport condition from `src` to `dst` exactly.
    pub fn verify(&self, src: &TorusPresentation, dst: &TorusPresentation) -> bool {
        if src.rank() != dst.rank() || src.q_order() != dst.q_order() {
            return false;
        }
        if !self.phi.is_unimodular() {
            return false;
        }
        let pulled = dst.cocycle().pullback(&self.phi);
        match cohomologous(&src.cocycle(), &pulled) {
            Some(chi) => chi.polarize() == self.chi.polarize(),
            None => false,
        }
    }

    /// Composition `other after self`.
    pub fn then(&self, other: &IsoWitness) -> IsoWitness {
        IsoWitness {
            phi: other.phi.mul(&self.phi),
            chi: self.chi.add(&other.chi.compose_linear(&self.phi)),
        }
    }

    pub fn inverse(&self) -> Result<IsoWitness> {
        let phi_inv = self.phi.inverse_unimodular()?;
        Ok(IsoWitness {
            phi: phi_inv.clone(),
            chi: self.chi.compose_linear(&phi_inv).neg(),
        })
    }
}

/// Tensor normal form of a rational presentation.
#[derive(Debug, Clone)]
pub struct NormalFormData {
    /// Exponent `g_0` with `C_A = <q^(g_0)>`.
    pub generator_exponent: u64,
    /// Order of the commutator subgroup (`0` = infinite, `1` = trivial).
    pub commutator_order: u64,
    /// Number of hyperbolic factors.
    pub s: usize,
    /// Divisor chain beyond the leading 1: `h_2 | ... | h_s` over
    /// `Z/(commutator_order)`.
    pub chain: Vec<u64>,
    /// Canonical twist on the last factor; `1` unless `2s = n` over a finite
    /// commutator group.
    pub z: u64,
    /// Rank of the commutative remainder.
    pub laurent_rank: usize,
    /// The assembled block presentation over the same ambient scalars.
    pub normal: TorusPresentation,
    /// Witness transporting the input onto `normal`.
    pub witness: IsoWitness,
}

/// Computes the tensor normal form. Requires a rational presentation (or a
/// commutator-free one); the infinite cyclic case (`m = 0`) carries a chain
/// but no twist.
pub fn normal_form(t: &TorusPresentation, max_work: u64) -> Result<NormalFormData> {
    let n = t.rank();
    let m = t.modulus();
    let (order, g0) = t.commutator_group();
    let lam = t.commutator_matrix();

    // Divide the commutator matrix by the generator exponent; entries of the
    // canonical lift are exact multiples of g_0.
    let sub_modulus = if m.is_z() {
        Modulus::Z
    } else {
        Modulus::new(order)?
    };
    let mut upper = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let e = lam.entry(i, j).value();
            let reduced = if g0 == 0 { 0 } else { e / g0 as i64 };
            upper.push(reduced);
        }
    }
    let lam_scaled = AltMat::from_upper(n, sub_modulus, &upper)?;
    let rep = canonical_rep(&lam_scaled, max_work)?;
    let s = rep.s;
    if s > 0 {
        // The leading chain entry is forced to 1 once the generator is
        // divided out.
        debug_assert_eq!(rep.chain[0].value(), 1);
    }

    // Assemble the block presentation in ambient exponents: factor i has
    // f(e1, e2) = q^(g_0 h_i), the last one twisted by z when the blocks
    // fill the rank.
    let z = rep.z.value().unsigned_abs();
    let mut rows = vec![vec![0i64; n]; n];
    for (i, h) in rep.chain.iter().enumerate() {
        let mut e = h.elt();
        if i + 1 == s && 2 * s == n {
            e = e.mul(rep.z);
        }
        let ambient = if m.is_z() {
            g0 as i64 * e.value()
        } else {
            (g0 as i64).checked_mul(e.value()).expect("desk scale") % m.value().max(1) as i64
        };
        rows[2 * i][2 * i + 1] = ambient;
    }
    let normal = TorusPresentation::new(n, t.q_order(), &rows)?;

    // Witness: with reduce(g) lam reduce(g)^T = N, the base change
    // phi = g^{-T} pulls the normal cocycle back to one cohomologous to the
    // input, and the coboundary supplies chi.
    let phi = rep.g.inverse_unimodular()?.transpose();
    let pulled = normal.cocycle().pullback(&phi);
    let chi = cohomologous(&t.cocycle(), &pulled).ok_or_else(|| {
        Error::Unsupported("normal form transport must be cohomologous".into())
    })?;
    let witness = IsoWitness { phi, chi };
    debug_assert!(witness.verify(t, &normal));

    Ok(NormalFormData {
        generator_exponent: g0,
        commutator_order: order,
        s,
        chain: rep.chain.iter().skip(1).map(|p| p.value() as u64).collect(),
        z,
        laurent_rank: n - 2 * s,
        normal,
        witness,
    })
}

/// The tensor factors of the normal form: one rank-2 presentation per
/// hyperbolic block (the last twisted by `z` when they fill the rank), plus
/// a commutative factor for the remainder.
#[derive(Debug, Clone)]
pub struct TensorDecomposition {
    pub factors: Vec<TorusPresentation>,
    pub laurent_rank: usize,
    pub assembled: TorusPresentation,
    pub witness: IsoWitness,
}

pub fn tensor_decomposition(t: &TorusPresentation, max_work: u64) -> Result<TensorDecomposition> {
    let nf = normal_form(t, max_work)?;
    let mut factors = Vec::new();
    let rows = nf.normal.exponent_rows();
    for i in 0..nf.s {
        let e = rows[2 * i][2 * i + 1];
        factors.push(TorusPresentation::standard_power(t.q_order(), e));
    }
    if nf.laurent_rank > 0 {
        factors.push(TorusPresentation::laurent(nf.laurent_rank, t.q_order()));
    }
    Ok(TensorDecomposition {
        factors,
        laurent_rank: nf.laurent_rank,
        assembled: nf.normal.clone(),
        witness: nf.witness,
    })
}

/// Graded isomorphism decision. Invariants compared: rank, commutator order,
/// number of factors, divisor chain, and (for full rank over a finite
/// commutator group) the canonical twist. A witness is produced whenever the
/// ambient scalar orders agree.
pub fn is_isomorphic(
    t1: &TorusPresentation,
    t2: &TorusPresentation,
    max_work: u64,
) -> Result<(bool, Option<IsoWitness>)> {
    if t1.rank() != t2.rank() {
        return Ok((false, None));
    }
    if !t1.is_rational() || !t2.is_rational() {
        // Infinite commutator groups: the chain comparison below still
        // decides (no twist is involved), per the infinite-order case.
        if t1.q_order() != 0 || t2.q_order() != 0 {
            return Ok((false, None));
        }
    }
    let nf1 = normal_form(t1, max_work)?;
    let nf2 = normal_form(t2, max_work)?;
    // Over a finite commutator group the order pins the subgroup (the
    // canonical generator is the same primitive root); for non-torsion
    // scalars the subgroup <q^(g_0)> is the generator exponent itself.
    let same_group = nf1.commutator_order == nf2.commutator_order
        && (t1.q_order() > 0 || nf1.generator_exponent == nf2.generator_exponent);
    let same = same_group
        && nf1.s == nf2.s
        && nf1.chain == nf2.chain
        && nf1.z == nf2.z;
    if !same {
        return Ok((false, None));
    }
    if t1.q_order() != t2.q_order() {
        // Isomorphic as graded algebras, but the two presentations name
        // scalars by different roots of unity; no single-field witness.
        return Ok((true, None));
    }
    debug_assert_eq!(nf1.normal, nf2.normal);
    let witness = nf1.witness.then(&nf2.witness.inverse()?);
    debug_assert!(witness.verify(t1, t2));
    Ok((true, Some(witness)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::Rational;
    use crate::DEFAULT_MAX_WORK;
    use num_bigint::BigInt;

    fn pres(n: usize, m: u64, rows: &[&[i64]]) -> Arc<TorusPresentation> {
        let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        Arc::new(TorusPresentation::new(n, m, &rows).unwrap())
    }

    #[test]
    fn standard_presentation_twist() {
        let t = TorusPresentation::standard(8);
        assert_eq!(t.conductor(), 8);
        let q = t.q().unwrap();
        assert_eq!(q.torsion_order(), 8);
        // f(e1, e2) = q, f(e2, e1) = 1.
        assert_eq!(t.twist(&[1, 0], &[0, 1]).unwrap(), q);
        assert!(t.twist(&[0, 1], &[1, 0]).unwrap().is_one());
    }

    #[test]
    fn odd_order_conductor_contains_minus_one() {
        let t = TorusPresentation::standard(5);
        assert_eq!(t.conductor(), 10);
        let q = t.q().unwrap();
        assert_eq!(q.torsion_order(), 5);
        let minus_one = root_of_unity(10, 5);
        assert_eq!(minus_one.mul(&minus_one), CycloElt::one(10));
        assert!(!minus_one.is_one());
    }

    #[test]
    fn multiply_q_commutation() {
        let p = pres(2, 8, &[&[0, 1], &[0, 0]]);
        let u1 = TorusElement::basis(p.clone(), vec![1, 0]).unwrap();
        let u2 = TorusElement::basis(p.clone(), vec![0, 1]).unwrap();
        let lhs = u1.multiply(&u2).unwrap();
        let q = p.q().unwrap();
        let rhs = u2.multiply(&u1).unwrap().scale(&q);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn multiply_inverse_pair() {
        let p = pres(2, 8, &[&[0, 1], &[0, 0]]);
        let g = vec![2, -1];
        let neg: Vec<i64> = g.iter().map(|v| -v).collect();
        let a = TorusElement::basis(p.clone(), g.clone()).unwrap();
        let b = TorusElement::basis(p.clone(), neg.clone()).unwrap();
        let prod = a.multiply(&b).unwrap();
        let expect = TorusElement::single(
            p.clone(),
            vec![0, 0],
            p.twist(&g, &neg).unwrap(),
        )
        .unwrap();
        assert_eq!(prod, expect);
    }

    #[test]
    fn multiply_commutative_square() {
        let p = pres(1, 4, &[&[0]]);
        let one = TorusElement::basis(p.clone(), vec![0]).unwrap();
        let x = TorusElement::basis(p.clone(), vec![1]).unwrap();
        let sum = one.add(&x).unwrap();
        let sq = sum.multiply(&sum).unwrap();
        let two = CycloElt::from_integer(p.conductor(), 2);
        let expect = TorusElement::from_terms(
            p.clone(),
            vec![
                (vec![0], CycloElt::one(p.conductor())),
                (vec![1], two),
                (vec![2], CycloElt::one(p.conductor())),
            ],
        )
        .unwrap();
        assert_eq!(sq, expect);
    }

    #[test]
    fn multiply_is_associative_on_samples() {
        let p = pres(2, 4, &[&[1, 3], &[0, 2]]);
        let m = p.conductor();
        let elts = [
            TorusElement::from_terms(
                p.clone(),
                vec![
                    (vec![1, 0], CycloElt::from_integer(m, 2)),
                    (vec![0, 1], root_of_unity(m, 1)),
                ],
            )
            .unwrap(),
            TorusElement::from_terms(
                p.clone(),
                vec![
                    (vec![-1, 2], CycloElt::from_integer(m, 1)),
                    (vec![0, 0], CycloElt::from_rational(m, Rational::new(BigInt::from(1), BigInt::from(2)))),
                ],
            )
            .unwrap(),
            TorusElement::from_terms(
                p.clone(),
                vec![
                    (vec![1, 1], CycloElt::from_integer(m, -3)),
                    (vec![2, -1], root_of_unity(m, 3)),
                ],
            )
            .unwrap(),
        ];
        for a in &elts {
            for b in &elts {
                for c in &elts {
                    let lhs = a.multiply(b).unwrap().multiply(c).unwrap();
                    let rhs = a.multiply(&b.multiply(c).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn homogeneous_unit_group_laws() {
        let p = pres(2, 8, &[&[0, 1], &[0, 0]]);
        let e1 = HomogeneousUnit::new(vec![1, 0], CycloElt::one(8)).unwrap();
        let e2 = HomogeneousUnit::new(vec![0, 1], CycloElt::one(8)).unwrap();
        let prod = homogeneous_mul(&p, &e1, &e2).unwrap();
        assert_eq!(prod.degree, vec![1, 1]);
        assert_eq!(prod.coeff, p.q().unwrap());

        let inv = homogeneous_inv(&p, &prod).unwrap();
        let id = homogeneous_mul(&p, &prod, &inv).unwrap();
        assert_eq!(id, HomogeneousUnit::identity(&p));

        // Commutator of basis units is q^(B_12 - B_21).
        let a = homogeneous_mul(&p, &e1, &e2).unwrap();
        let b = homogeneous_mul(&p, &e2, &e1).unwrap();
        let com = homogeneous_mul(&p, &a, &homogeneous_inv(&p, &b).unwrap()).unwrap();
        assert_eq!(com.degree, vec![0, 0]);
        assert_eq!(com.coeff, p.q().unwrap());
    }

    #[test]
    fn commutator_data() {
        let t = TorusPresentation::standard(8);
        assert_eq!(t.commutator_group(), (8, 1));
        let lam = t.commutator_matrix();
        assert_eq!(lam.entry(0, 1).value(), 1);

        let sym = pres(2, 8, &[&[2, 3], &[3, 1]]);
        assert_eq!(sym.commutator_group().0, 1);
        assert!(sym.is_rational());

        // N(2, 4) commutators over m = 8: order 4, generator exponent 2.
        let t = pres(
            4,
            8,
            &[
                &[0, 2, 0, 0],
                &[0, 0, 0, 0],
                &[0, 0, 0, 4],
                &[0, 0, 0, 0],
            ],
        );
        assert_eq!(t.commutator_group(), (4, 2));

        let free = pres(2, 0, &[&[0, 3], &[0, 0]]);
        assert!(!free.is_rational());
        assert_eq!(free.commutator_group(), (0, 3));
        let free_sym = pres(2, 0, &[&[1, 2], &[2, 5]]);
        assert!(free_sym.is_rational());
        assert_eq!(free_sym.commutator_group().0, 1);
    }

    #[test]
    fn normal_form_standard() {
        let t = TorusPresentation::standard(8);
        let nf = normal_form(&t, DEFAULT_MAX_WORK).unwrap();
        assert_eq!(nf.generator_exponent, 1);
        assert_eq!(nf.commutator_order, 8);
        assert_eq!(nf.s, 1);
        assert!(nf.chain.is_empty());
        assert_eq!(nf.z, 1);
        assert_eq!(nf.laurent_rank, 0);
        assert!(nf.witness.verify(&t, &nf.normal));
    }

    #[test]
    fn normal_form_two_blocks() {
        let t = pres(
            4,
            8,
            &[
                &[0, 1, 0, 0],
                &[0, 0, 0, 0],
                &[0, 0, 0, 2],
                &[0, 0, 0, 0],
            ],
        );
        let nf = normal_form(&t, DEFAULT_MAX_WORK).unwrap();
        assert_eq!(nf.s, 2);
        assert_eq!(nf.chain, vec![2]);
        assert_eq!(nf.z, 1);
        assert_eq!(nf.laurent_rank, 0);
        assert!(nf.witness.verify(&t, &nf.normal));
    }

    #[test]
    fn normal_form_rescales_generator() {
        // Commutator entries 3 mod 5 generate everything: chain collapses.
        let t = pres(3, 5, &[&[0, 3, 0], &[0, 0, 0], &[0, 0, 0]]);
        let nf = normal_form(&t, DEFAULT_MAX_WORK).unwrap();
        assert_eq!(nf.generator_exponent, 1);
        assert_eq!(nf.commutator_order, 5);
        assert_eq!(nf.s, 1);
        assert!(nf.chain.is_empty());
        assert_eq!(nf.laurent_rank, 1);
        assert!(nf.witness.verify(&t, &nf.normal));
    }

    #[test]
    fn normal_form_infinite_order() {
        let t = pres(2, 0, &[&[0, 6], &[0, 0]]);
        let nf = normal_form(&t, DEFAULT_MAX_WORK).unwrap();
        assert_eq!(nf.generator_exponent, 6);
        assert_eq!(nf.commutator_order, 0);
        assert_eq!(nf.s, 1);
        assert!(nf.chain.is_empty());
        assert_eq!(nf.z, 1);
        assert!(nf.witness.verify(&t, &nf.normal));
    }

    #[test]
    fn infinite_order_isomorphism_needs_equal_generators() {
        // <q^6> and <q^4> differ for non-torsion q even though both have
        // infinite order.
        let a = pres(2, 0, &[&[0, 6], &[0, 0]]);
        let b = pres(2, 0, &[&[0, 4], &[0, 0]]);
        let (iso, _) = is_isomorphic(&a, &b, DEFAULT_MAX_WORK).unwrap();
        assert!(!iso);
        // Opposite orientation generates the same subgroup.
        let c = pres(2, 0, &[&[0, 0], &[6, 0]]);
        let (iso, w) = is_isomorphic(&a, &c, DEFAULT_MAX_WORK).unwrap();
        assert!(iso);
        assert!(w.unwrap().verify(&a, &c));
    }

    #[test]
    fn tensor_decomposition_cases() {
        let t = TorusPresentation::standard(8);
        let d = tensor_decomposition(&t, DEFAULT_MAX_WORK).unwrap();
        assert_eq!(d.factors.len(), 1);
        assert_eq!(d.factors[0], t);

        let t = pres(
            4,
            8,
            &[
                &[0, 1, 0, 0],
                &[0, 0, 0, 0],
                &[0, 0, 0, 2],
                &[0, 0, 0, 0],
            ],
        );
        let d = tensor_decomposition(&t, DEFAULT_MAX_WORK).unwrap();
        assert_eq!(d.factors.len(), 2);
        assert_eq!(d.factors[0], TorusPresentation::standard(8));
        assert_eq!(d.factors[1], TorusPresentation::standard_power(8, 2));
        let (iso, w) = is_isomorphic(&t, &d.assembled, DEFAULT_MAX_WORK).unwrap();
        assert!(iso);
        assert!(w.unwrap().verify(&t, &d.assembled));

        let t = TorusPresentation::laurent(3, 8);
        let d = tensor_decomposition(&t, DEFAULT_MAX_WORK).unwrap();
        assert_eq!(d.factors.len(), 1);
        assert_eq!(d.laurent_rank, 3);
    }

    #[test]
    fn isomorphism_decision_examples() {
        // q vs q^3 of order 8: twists 1 vs 3 are in different cosets.
        let a = TorusPresentation::standard(8);
        let b = TorusPresentation::standard_power(8, 3);
        let (iso, _) = is_isomorphic(&a, &b, DEFAULT_MAX_WORK).unwrap();
        assert!(!iso);

        // q^2 vs q^3 of order 5: +-2 {1} = {2, 3} contains 3.
        let a = TorusPresentation::standard_power(5, 2);
        let b = TorusPresentation::standard_power(5, 3);
        let (iso, w) = is_isomorphic(&a, &b, DEFAULT_MAX_WORK).unwrap();
        assert!(iso);
        assert!(w.unwrap().verify(&a, &b));
    }

    #[test]
    fn isomorphism_after_perturbation() {
        let t = pres(
            4,
            8,
            &[
                &[0, 1, 2, 0],
                &[0, 0, 0, 3],
                &[0, 0, 0, 1],
                &[0, 0, 0, 0],
            ],
        );
        let phi = IntMat::from_rows_i64(&[
            vec![1, 2, 0, -1],
            vec![0, 1, 1, 0],
            vec![0, 0, 1, 3],
            vec![0, 0, 0, 1],
        ])
        .unwrap();
        let sym = vec![
            vec![3, 1, 0, 5],
            vec![1, 0, 2, 2],
            vec![0, 2, 7, 0],
            vec![5, 2, 0, 4],
        ];
        let moved = t.pullback(&phi).unwrap().twist_by_symmetric(&sym).unwrap();
        let (iso, w) = is_isomorphic(&t, &moved, DEFAULT_MAX_WORK).unwrap();
        assert!(iso);
        assert!(w.unwrap().verify(&t, &moved));
    }

    #[test]
    fn twist_order_side_condition() {
        // ord(q^(z h_s)) = ord(q^(h_s)) for every emitted normal form.
        for e in 1..8i64 {
            let t = TorusPresentation::standard_power(8, e);
            let nf = normal_form(&t, DEFAULT_MAX_WORK).unwrap();
            if nf.commutator_order <= 1 {
                continue;
            }
            let mm = nf.commutator_order;
            let h_s = if nf.s >= 1 {
                *nf.chain.last().unwrap_or(&1)
            } else {
                continue;
            };
            let ord = |x: u64| mm / gcd(x % mm, mm).max(1);
            assert_eq!(ord(nf.z * h_s % mm), ord(h_s % mm), "e={e}");
        }
    }

    #[test]
    fn units_are_single_terms() {
        let p = pres(2, 8, &[&[0, 1], &[0, 0]]);
        let three = CycloElt::from_integer(8, 3);
        let u = TorusElement::single(p.clone(), vec![2, -1], three).unwrap();
        assert!(u.is_unit());
        let inv = u.unit_inverse().unwrap();
        let prod = u.multiply(&inv).unwrap();
        assert_eq!(
            prod,
            TorusElement::basis(p.clone(), vec![0, 0]).unwrap()
        );

        let mixed = u
            .add(&TorusElement::basis(p.clone(), vec![0, 0]).unwrap())
            .unwrap();
        assert!(!mixed.is_unit());
        assert!(matches!(mixed.unit_inverse(), Err(Error::NonHomogeneous)));
        assert!(!TorusElement::zero(p.clone()).is_unit());
    }

    #[test]
    fn no_zero_divisors_on_samples() {
        let p = pres(2, 4, &[&[0, 1], &[0, 0]]);
        let m = p.conductor();
        let a = TorusElement::from_terms(
            p.clone(),
            vec![
                (vec![0, 0], CycloElt::one(m)),
                (vec![1, 0], CycloElt::from_integer(m, -1)),
            ],
        )
        .unwrap();
        let b = TorusElement::from_terms(
            p.clone(),
            vec![
                (vec![0, 0], CycloElt::one(m)),
                (vec![1, 0], CycloElt::one(m)),
            ],
        )
        .unwrap();
        assert!(!zero_divisor_probe(&a, &b).unwrap());
        assert!(zero_divisor_probe(&TorusElement::zero(p.clone()), &b).is_err());
    }
}
