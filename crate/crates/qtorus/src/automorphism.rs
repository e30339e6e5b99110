//! Graded automorphisms of the rank-2 torus and the splitting of its
//! automorphism sequence.
//!
//! An automorphism acts as `d_g -> chi(g) d_(phi g)` with `phi` in `GL_n(Z)`
//! and `chi` a scalar character. `chi` is kept in split coordinates: a
//! homomorphism part (one symbolic scalar per basis vector) times `q` raised
//! to a quadratic form. Characters live in a symbolic scalar group - a free
//! abelian group over an on-demand symbol alphabet times the roots of unity
//! of conductor `M` - so relations among lifts are verified for all
//! parameter values at once, and numeric checks just bind the symbols.
//!
//! The base-change images of the generator matrices `[[0,1],[-1,0]]` and
//! `[[1,1],[-1,0]]` (plus the swap when `q^2 = 1`) have explicit lifts whose
//! parameters, constrained by the relations of the matrix group, enumerate
//! every homomorphic section of the quotient map.

use crate::cohomology::{cocycle_condition, QuadraticForm};
use crate::cyclic_ring::Modulus;
use crate::cyclotomic::{root_of_unity, CycloElt};
use crate::matrix::IntMat;
use crate::torus::TorusPresentation;
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// Element of the symbolic scalar group: a root-of-unity part (an exponent
/// of `zeta_M`) times a product of free symbols with integer exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarElt {
    conductor: u64,
    torsion: i64,
    free: BTreeMap<String, i64>,
}

impl ScalarElt {
    pub fn one(conductor: u64) -> ScalarElt {
        ScalarElt {
            conductor,
            torsion: 0,
            free: BTreeMap::new(),
        }
    }

    /// `zeta_M^k`.
    pub fn root(conductor: u64, k: i64) -> ScalarElt {
        ScalarElt {
            conductor,
            torsion: k.rem_euclid(conductor as i64),
            free: BTreeMap::new(),
        }
    }

    /// The distinguished root of unity of order `m` inside conductor `M`.
    pub fn q(conductor: u64, q_order: u64) -> ScalarElt {
        assert!(q_order >= 1 && conductor.is_multiple_of(q_order));
        Self::root(conductor, (conductor / q_order) as i64)
    }

    pub fn minus_one(conductor: u64) -> ScalarElt {
        assert!(conductor.is_multiple_of(2), "conductor must be even");
        Self::root(conductor, (conductor / 2) as i64)
    }

    /// A free symbol.
    pub fn symbol(conductor: u64, name: &str) -> ScalarElt {
        let mut free = BTreeMap::new();
        free.insert(name.to_string(), 1);
        ScalarElt {
            conductor,
            torsion: 0,
            free,
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn torsion_exponent(&self) -> i64 {
        self.torsion
    }

    pub fn free_symbols(&self) -> impl Iterator<Item = (&str, i64)> {
        self.free.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn is_one(&self) -> bool {
        self.torsion == 0 && self.free.is_empty()
    }

    pub fn mul(&self, other: &ScalarElt) -> ScalarElt {
        assert_eq!(self.conductor, other.conductor, "conductor mismatch");
        let mut free = self.free.clone();
        for (k, v) in &other.free {
            let e = free.entry(k.clone()).or_insert(0);
            *e += v;
            if *e == 0 {
                free.remove(k);
            }
        }
        ScalarElt {
            conductor: self.conductor,
            torsion: (self.torsion + other.torsion).rem_euclid(self.conductor as i64),
            free,
        }
    }

    pub fn pow(&self, k: i64) -> ScalarElt {
        let mut free = BTreeMap::new();
        for (name, e) in &self.free {
            let v = e * k;
            if v != 0 {
                free.insert(name.clone(), v);
            }
        }
        ScalarElt {
            conductor: self.conductor,
            torsion: (self.torsion * k).rem_euclid(self.conductor as i64),
            free,
        }
    }

    pub fn inv(&self) -> ScalarElt {
        self.pow(-1)
    }

    /// Concrete field value; needs every symbol bound away.
    pub fn to_cyclotomic(&self) -> Result<CycloElt> {
        if let Some(name) = self.free.keys().next() {
            return Err(Error::UnboundSymbol(name.clone()));
        }
        Ok(root_of_unity(self.conductor, self.torsion))
    }

    /// Substitutes root-of-unity exponents for symbols.
    pub fn bind(&self, assignment: &BTreeMap<String, i64>) -> Result<ScalarElt> {
        let mut torsion = self.torsion;
        for (name, e) in &self.free {
            let k = assignment
                .get(name)
                .ok_or_else(|| Error::UnboundSymbol(name.clone()))?;
            torsion += e * k;
        }
        Ok(ScalarElt::root(self.conductor, torsion))
    }
}

impl fmt::Display for ScalarElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.torsion != 0 {
            parts.push(format!("zeta^{}", self.torsion));
        }
        for (name, e) in &self.free {
            if *e == 1 {
                parts.push(name.clone());
            } else {
                parts.push(format!("{}^{}", name, e));
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

fn conductor_for(q_order: u64) -> u64 {
    let m = q_order.max(1);
    if m.is_multiple_of(2) {
        m
    } else {
        2 * m
    }
}

/// Graded automorphism in split coordinates.
///
/// The character is `chi(g) = prod hom_i^(g_i) * q^(quad(g))`; the linear
/// part of `quad` is always folded into `hom`, making the representation
/// canonical, so equality of automorphisms is plain field equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedAut {
    n: usize,
    q_order: u64,
    conductor: u64,
    phi: IntMat,
    hom: Vec<ScalarElt>,
    quad: QuadraticForm,
}

impl GradedAut {
    pub fn new(
        q_order: u64,
        phi: IntMat,
        hom: Vec<ScalarElt>,
        quad: QuadraticForm,
    ) -> Result<GradedAut> {
        if q_order == 0 {
            return Err(Error::NonTorsionScalars);
        }
        let n = phi.size();
        if hom.len() != n || quad.size() != n {
            return Err(Error::DimensionMismatch(hom.len(), n));
        }
        if !phi.is_unimodular() {
            return Err(Error::NotInvertible);
        }
        let conductor = conductor_for(q_order);
        if quad.modulus().value() != q_order {
            return Err(Error::ModulusMismatch(quad.modulus().value(), q_order));
        }
        for h in &hom {
            if h.conductor() != conductor {
                return Err(Error::ModulusMismatch(h.conductor(), conductor));
            }
        }
        Ok(Self::normalized(q_order, conductor, phi, hom, quad))
    }

    /// Folds the linear part of the quadratic coordinate into the
    /// homomorphism part.
    fn normalized(
        q_order: u64,
        conductor: u64,
        phi: IntMat,
        mut hom: Vec<ScalarElt>,
        quad: QuadraticForm,
    ) -> GradedAut {
        let n = phi.size();
        let step = (conductor / q_order) as i64;
        let mut stripped = quad.clone();
        for (i, h) in hom.iter_mut().enumerate().take(n) {
            let c = quad.linear_coeff(i);
            if c != 0 {
                *h = h.mul(&ScalarElt::root(conductor, step * c));
                stripped.set_linear_coeff(i, 0);
            }
        }
        GradedAut {
            n,
            q_order,
            conductor,
            phi,
            hom,
            quad: stripped,
        }
    }

    pub fn identity(n: usize, q_order: u64) -> GradedAut {
        let conductor = conductor_for(q_order);
        GradedAut {
            n,
            q_order,
            conductor,
            phi: IntMat::identity(n),
            hom: vec![ScalarElt::one(conductor); n],
            quad: QuadraticForm::zero(n, Modulus::new(q_order).unwrap()),
        }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn q_order(&self) -> u64 {
        self.q_order
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn base_change(&self) -> &IntMat {
        &self.phi
    }

    pub fn hom_part(&self) -> &[ScalarElt] {
        &self.hom
    }

    pub fn quad_part(&self) -> &QuadraticForm {
        &self.quad
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n, self.q_order)
    }

    /// Whether the base change is trivial and the character is a plain
    /// homomorphism.
    pub fn is_scalar(&self) -> bool {
        self.phi == IntMat::identity(self.n) && self.quad.is_zero()
    }

    /// The character value at a lattice point, symbolically.
    pub fn character(&self, g: &[i64]) -> ScalarElt {
        assert_eq!(g.len(), self.n);
        let mut acc = ScalarElt::one(self.conductor);
        for (h, &e) in self.hom.iter().zip(g) {
            acc = acc.mul(&h.pow(e));
        }
        let step = (self.conductor / self.q_order) as i64;
        acc.mul(&ScalarElt::root(
            self.conductor,
            step * self.quad.eval(g).value(),
        ))
    }

    /// Image of a symbolic homogeneous unit: `(c, g) -> (c chi(g), phi g)`.
    pub fn apply(&self, u: &SymbolicUnit) -> SymbolicUnit {
        assert_eq!(u.degree.len(), self.n);
        let moved: Vec<i64> = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|k| i64::try_from(self.phi.at(i, k)).expect("desk scale") * u.degree[k])
                    .sum()
            })
            .collect();
        SymbolicUnit {
            degree: moved,
            coeff: u.coeff.mul(&self.character(&u.degree)),
        }
    }

    /// Composition `self` after `other`: the character picks up
    /// `chi_self(phi_other g) * chi_other(g)`, re-expanded exactly in split
    /// coordinates.
    pub fn compose(&self, other: &GradedAut) -> GradedAut {
        assert_eq!(self.n, other.n);
        assert_eq!(self.q_order, other.q_order);
        let n = self.n;
        let phi = self.phi.mul(&other.phi);
        // hom'_k = prod_i hom_self_i^((phi_other)_{ik}) * hom_other_k
        let mut hom = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = other.hom[k].clone();
            for i in 0..n {
                let e = i64::try_from(other.phi.at(i, k)).expect("desk scale");
                if e != 0 {
                    acc = acc.mul(&self.hom[i].pow(e));
                }
            }
            hom.push(acc);
        }
        let quad = other.quad.add(&self.quad.compose_linear(&other.phi));
        GradedAut::normalized(self.q_order, self.conductor, phi, hom, quad)
    }

    pub fn inverse(&self) -> Result<GradedAut> {
        let phi_inv = self.phi.inverse_unimodular()?;
        // chi_inv(g) = chi(phi^{-1} g)^{-1}
        let n = self.n;
        let mut hom = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = ScalarElt::one(self.conductor);
            for i in 0..n {
                let e = i64::try_from(phi_inv.at(i, k)).expect("desk scale");
                if e != 0 {
                    acc = acc.mul(&self.hom[i].pow(e));
                }
            }
            hom.push(acc.inv());
        }
        let quad = self.quad.compose_linear(&phi_inv).neg();
        let out = GradedAut::normalized(self.q_order, self.conductor, phi_inv, hom, quad);
        debug_assert!(self.compose(&out).is_identity());
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> GradedAut {
        let mut acc = GradedAut::identity(self.n, self.q_order);
        for _ in 0..k {
            acc = self.compose(&acc);
        }
        acc
    }
}

impl fmt::Display for GradedAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let homs: Vec<String> = self.hom.iter().map(|h| h.to_string()).collect();
        write!(f, "phi={:?} hom=[{}]", self.phi.to_rows(), homs.join(", "))
    }
}

/// Symbolic homogeneous unit for exercising automorphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicUnit {
    pub degree: Vec<i64>,
    pub coeff: ScalarElt,
}

impl SymbolicUnit {
    pub fn basis(n: usize, i: usize, conductor: u64) -> SymbolicUnit {
        let mut degree = vec![0; n];
        degree[i] = 1;
        SymbolicUnit {
            degree,
            coeff: ScalarElt::one(conductor),
        }
    }
}

/// Decides the lifting condition against a concrete presentation: the hom
/// part is invisible, only the base change and the quadratic coordinate
/// enter.
pub fn is_automorphism(aut: &GradedAut, t: &TorusPresentation) -> Result<bool> {
    if aut.rank() != t.rank() {
        return Err(Error::DimensionMismatch(aut.rank(), t.rank()));
    }
    if aut.q_order() != t.q_order() {
        return Err(Error::ModulusMismatch(aut.q_order(), t.q_order()));
    }
    cocycle_condition(&t.cocycle(), &aut.phi, &aut.quad)
}

/// The symmetry group of the rank-2 commutator form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AutGroupKind {
    Sl2,
    Gl2,
}

/// Determinant-one matrices preserve the form always; the full group does
/// exactly when `q^2 = 1`.
pub fn aut_gamma_lambda(q_order: u64) -> AutGroupKind {
    if q_order == 1 || q_order == 2 {
        AutGroupKind::Gl2
    } else {
        AutGroupKind::Sl2
    }
}

fn rank2_phi(rows: [[i64; 2]; 2]) -> IntMat {
    IntMat::from_rows_i64(&[rows[0].to_vec(), rows[1].to_vec()]).unwrap()
}

/// Lift of `[[0,1],[-1,0]]`: `d_g -> r1^(g1) s1^(g2) q^(-g1 g2) d_(phi g)`.
pub fn lift_g1(q_order: u64, r1: ScalarElt, s1: ScalarElt) -> Result<GradedAut> {
    let m = Modulus::new(q_order)?;
    let quad = QuadraticForm::new(2, m, &[0, 0], &[-1], &[0, 0])?;
    GradedAut::new(q_order, rank2_phi([[0, 1], [-1, 0]]), vec![r1, s1], quad)
}

/// Lift of `[[1,1],[-1,0]]`:
/// `d_g -> r2^(g1) s2^(g2) q^(-binom(g1,2) - g1 g2) d_(phi g)`.
pub fn lift_g2(q_order: u64, r2: ScalarElt, s2: ScalarElt) -> Result<GradedAut> {
    let m = Modulus::new(q_order)?;
    let quad = QuadraticForm::new(2, m, &[-1, 0], &[-1], &[0, 0])?;
    GradedAut::new(q_order, rank2_phi([[1, 1], [-1, 0]]), vec![r2, s2], quad)
}

/// Lift of the swap `[[0,1],[1,0]]`, available only when `q^2 = 1`; the
/// involution condition forces the second scalar to be `r0^{-1}`.
pub fn lift_g0(q_order: u64, r0: ScalarElt) -> Result<GradedAut> {
    if aut_gamma_lambda(q_order) != AutGroupKind::Gl2 {
        return Err(Error::Unsupported(
            "the swap preserves the form only when q^2 = 1".into(),
        ));
    }
    let m = Modulus::new(q_order)?;
    let quad = QuadraticForm::new(2, m, &[0, 0], &[1], &[0, 0])?;
    let s0 = r0.inv();
    GradedAut::new(q_order, rank2_phi([[0, 1], [1, 0]]), vec![r0, s0], quad)
}

/// Trivial base change with a prescribed homomorphism part: the kernel of
/// the map onto the form-preserving matrix group.
pub fn scalar_aut(q_order: u64, hom: Vec<ScalarElt>) -> Result<GradedAut> {
    let n = hom.len();
    let m = Modulus::new(q_order)?;
    GradedAut::new(q_order, IntMat::identity(n), hom, QuadraticForm::zero(n, m))
}

/// Which matrix group a splitting section is defined on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplittingMode {
    Sl2,
    Gl2,
}

/// Scalar parameters of a candidate section.
#[derive(Debug, Clone)]
pub struct SplittingParams {
    pub mode: SplittingMode,
    pub r0: Option<ScalarElt>,
    pub r1: ScalarElt,
    pub r2: ScalarElt,
    pub s1: ScalarElt,
    pub s2: ScalarElt,
}

impl SplittingParams {
    /// Determinant-one section: `s1` is forced and `s2` is `s1` up to the
    /// sign choice.
    pub fn sl2(q_order: u64, r1: ScalarElt, r2: ScalarElt, sign: i64) -> SplittingParams {
        let conductor = conductor_for(q_order);
        let q = ScalarElt::q(conductor, q_order.max(1));
        let s1 = r2.pow(2).mul(&q).mul(&r1.inv());
        let s2 = if sign >= 0 {
            s1.clone()
        } else {
            s1.mul(&ScalarElt::minus_one(conductor))
        };
        SplittingParams {
            mode: SplittingMode::Sl2,
            r0: None,
            r1,
            r2,
            s1,
            s2,
        }
    }

    /// Full-group section (`q^2 = 1`): `s1 = r2^2 q / r1`, `s2 = q / r0`.
    pub fn gl2(q_order: u64, r0: ScalarElt, r1: ScalarElt, r2: ScalarElt) -> SplittingParams {
        let conductor = conductor_for(q_order);
        let q = ScalarElt::q(conductor, q_order.max(1));
        let s1 = r2.pow(2).mul(&q).mul(&r1.inv());
        let s2 = q.mul(&r0.inv());
        SplittingParams {
            mode: SplittingMode::Gl2,
            r0: Some(r0),
            r1,
            r2,
            s1,
            s2,
        }
    }

    /// Raw parameters, not necessarily satisfying the constraints; used to
    /// watch relations fail.
    pub fn sl2_raw(r1: ScalarElt, r2: ScalarElt, s1: ScalarElt, s2: ScalarElt) -> SplittingParams {
        SplittingParams {
            mode: SplittingMode::Sl2,
            r0: None,
            r1,
            r2,
            s1,
            s2,
        }
    }

    pub fn gl2_raw(
        r0: ScalarElt,
        r1: ScalarElt,
        r2: ScalarElt,
        s1: ScalarElt,
        s2: ScalarElt,
    ) -> SplittingParams {
        SplittingParams {
            mode: SplittingMode::Gl2,
            r0: Some(r0),
            r1,
            r2,
            s1,
            s2,
        }
    }

    /// Checks the constraint equations, naming the first one that fails.
    pub fn check(&self, q_order: u64) -> Result<()> {
        let conductor = conductor_for(q_order);
        let q = ScalarElt::q(conductor, q_order.max(1));
        if self.s1.pow(2) != self.s2.pow(2) {
            return Err(Error::ConstraintViolation("s1^2 = s2^2".into()));
        }
        if self.s1.mul(&self.r1) != self.r2.pow(2).mul(&q) {
            return Err(Error::ConstraintViolation("s1 = r2^2 q / r1".into()));
        }
        if self.mode == SplittingMode::Gl2 {
            let r0 = self
                .r0
                .as_ref()
                .ok_or_else(|| Error::ConstraintViolation("r0 required".into()))?;
            if !r0.pow(2).mul(&self.s1.pow(2)).is_one() {
                return Err(Error::ConstraintViolation("r0^2 s1^2 = 1".into()));
            }
            if r0.mul(&self.s2) != q {
                return Err(Error::ConstraintViolation("r0 s2 = q".into()));
            }
        }
        Ok(())
    }
}

/// Generators of the form-preserving matrix group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gen {
    G0,
    G1,
    G2,
}

/// A candidate homomorphic section, stored through its generator lifts.
#[derive(Debug, Clone)]
pub struct Splitting {
    pub mode: SplittingMode,
    pub q_order: u64,
    pub g0: Option<GradedAut>,
    pub g1: GradedAut,
    pub g2: GradedAut,
}

/// Builds the section after validating the parameter constraints.
pub fn splitting(q_order: u64, params: &SplittingParams) -> Result<Splitting> {
    params.check(q_order)?;
    splitting_unchecked(q_order, params)
}

/// Builds the section without the constraint check (the relations may then
/// fail; `verify_presentation` reports which).
pub fn splitting_unchecked(q_order: u64, params: &SplittingParams) -> Result<Splitting> {
    let g1 = lift_g1(q_order, params.r1.clone(), params.s1.clone())?;
    let g2 = lift_g2(q_order, params.r2.clone(), params.s2.clone())?;
    let g0 = match params.mode {
        SplittingMode::Sl2 => None,
        SplittingMode::Gl2 => {
            let r0 = params
                .r0
                .clone()
                .ok_or_else(|| Error::ConstraintViolation("r0 required".into()))?;
            Some(lift_g0(q_order, r0)?)
        }
    };
    Ok(Splitting {
        mode: params.mode,
        q_order,
        g0,
        g1,
        g2,
    })
}

impl Splitting {
    /// Evaluates the section on a generator word by composing lifts
    /// left-to-right (leftmost acts last).
    pub fn sigma(&self, word: &[Gen]) -> Result<GradedAut> {
        let mut acc = GradedAut::identity(2, self.q_order);
        for gen in word.iter().rev() {
            let lift = match gen {
                Gen::G0 => self
                    .g0
                    .as_ref()
                    .ok_or_else(|| {
                        Error::Unsupported("swap generator needs the full-group mode".into())
                    })?
                    .clone(),
                Gen::G1 => self.g1.clone(),
                Gen::G2 => self.g2.clone(),
            };
            acc = lift.compose(&acc);
        }
        Ok(acc)
    }
}

/// One relation outcome: on failure the residual automorphism (left side
/// composed with the inverse of the right) exposes the obstructing scalar
/// character.
#[derive(Debug, Clone)]
pub struct RelationCheck {
    pub name: &'static str,
    pub pass: bool,
    pub residual: Option<GradedAut>,
}

#[derive(Debug, Clone)]
pub struct PresentationReport {
    pub relations: Vec<RelationCheck>,
}

impl PresentationReport {
    pub fn all_pass(&self) -> bool {
        self.relations.iter().all(|r| r.pass)
    }
}

/// Checks the defining relations of the matrix group on the lifted
/// generators: the fourth/sixth powers, the shared square/cube, and in the
/// full-group mode the swap involution and both conjugation relations.
pub fn verify_presentation(s: &Splitting) -> PresentationReport {
    let mut relations = Vec::new();
    let id = GradedAut::identity(2, s.q_order);
    let mut check = |name: &'static str, lhs: GradedAut, rhs: GradedAut| {
        let pass = lhs == rhs;
        let residual = if pass {
            None
        } else {
            // rhs^{-1} lhs: the scalar character separating the two sides.
            rhs.inverse().ok().map(|ri| ri.compose(&lhs))
        };
        relations.push(RelationCheck {
            name,
            pass,
            residual,
        });
    };
    let g1 = &s.g1;
    let g2 = &s.g2;
    check("g1^4 = 1", g1.pow(4), id.clone());
    check("g2^6 = 1", g2.pow(6), id.clone());
    check("g1^2 = g2^3", g1.pow(2), g2.pow(3));
    if let Some(g0) = &s.g0 {
        check("g0^2 = 1", g0.pow(2), id.clone());
        check("g0 g1 g0 = g1^3", g0.compose(&g1.compose(g0)), g1.pow(3));
        check("g0 g2 g0 = g2^5", g0.compose(&g2.compose(g0)), g2.pow(5));
    }
    PresentationReport { relations }
}

/// Counts the parameter tuples over the roots of unity of order `mu_order`.
///
/// Determinant-one mode: `(r1, r2)` free plus a square root of one, so
/// `mu^2 * |mu[2]|`. Full-group mode: the constraint `r2^4 r0^2 = r1^2`
/// counted exhaustively over exponents. Passing an odd `mu_order` models a
/// scalar group without `-1` (the characteristic-two picture), where the
/// sign choice collapses.
pub fn z1_count(mode: SplittingMode, mu_order: u64) -> u64 {
    assert!(mu_order >= 1);
    match mode {
        SplittingMode::Sl2 => {
            let two_torsion = if mu_order.is_multiple_of(2) { 2 } else { 1 };
            mu_order * mu_order * two_torsion
        }
        SplittingMode::Gl2 => {
            let mu = mu_order as i64;
            let mut count = 0u64;
            for x0 in 0..mu {
                for x1 in 0..mu {
                    for x2 in 0..mu {
                        if (4 * x2 + 2 * x0 - 2 * x1).rem_euclid(mu) == 0 {
                            count += 1;
                        }
                    }
                }
            }
            count
        }
    }
}
