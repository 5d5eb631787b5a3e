//! Diagonal hermitian forms on V = A^m and the combinatorics of their vectors.
//!
//! Vectors are coordinate slices `&[AElem]`. Two flat indexings are used: the
//! full index `Σ v_i |A|^i` over all of V, and the transversal index over T,
//! the vectors whose coordinates have no y^j terms for j ≥ ℓ. T is a set of
//! representatives for V/iV, i = y^ℓ A, and reducing mod iV is truncation.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, resource, Error, Result};
use crate::gf::{FieldSpec, Fq};
use crate::ring::{AElem, Ring, RingSpec};

/// Largest |V| for which the exhaustive vector scans run.
pub const MAX_VECTORS: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormType {
    #[serde(rename = "type1")]
    Type1,
    #[serde(rename = "typedelta")]
    TypeDelta,
}

impl FormType {
    pub fn name(self) -> &'static str {
        match self {
            FormType::Type1 => "type1",
            FormType::TypeDelta => "typedelta",
        }
    }
}

/// How the diagonal is given.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiagSpec {
    Standard(FormType),
    /// Each entry lists the coefficients of 1, x, x², ... in R, as integers mod p.
    Entries(Vec<Vec<i64>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormSpec {
    pub ring: RingSpec,
    pub m: usize,
    pub diag: DiagSpec,
}

impl FormSpec {
    pub fn new(field: FieldSpec, ell: usize, m: usize, diag: DiagSpec) -> FormSpec {
        FormSpec { ring: RingSpec { field, ell }, m, diag }
    }

    pub fn standard(p: u32, ell: usize, m: usize, ty: FormType) -> FormSpec {
        FormSpec::new(FieldSpec::prime(p), ell, m, DiagSpec::Standard(ty))
    }

    pub fn diagonal(p: u32, ell: usize, diag: &[i64]) -> FormSpec {
        let entries = diag.iter().map(|&d| vec![d]).collect();
        FormSpec::new(FieldSpec::prime(p), ell, diag.len(), DiagSpec::Entries(entries))
    }
}

/// The diagonal of the standard form of a type, as elements of F_p ⊂ F_q.
fn standard_diag(m: usize, ty: FormType, eps: Fq, ring: &Ring) -> Vec<AElem> {
    let f = ring.field();
    let one = f.from_int(1);
    let minus_one = f.from_int(-1);
    let mut d: Vec<Fq> = Vec::with_capacity(m);
    if m == 1 {
        d.push(match ty {
            FormType::Type1 => one,
            FormType::TypeDelta => eps,
        });
    } else {
        for _ in 0..m / 2 {
            d.push(one);
            d.push(minus_one);
        }
        if m % 2 == 1 {
            d.push(minus_one);
        }
        if ty == FormType::TypeDelta {
            let last = d.last_mut().expect("m >= 2");
            *last = f.neg(eps);
        }
    }
    d.into_iter().map(|c| ring.from_fq(c)).collect()
}

/// Determinant of the standard type-1 form, in the residue field.
fn reference_det(m: usize, ring: &Ring) -> Fq {
    let f = ring.field();
    let r = m / 2;
    if m == 1 {
        f.from_int(1)
    } else if m % 2 == 0 {
        f.from_int(if r % 2 == 0 { 1 } else { -1 })
    } else {
        f.from_int(if r % 2 == 0 { -1 } else { 1 })
    }
}

#[derive(Debug)]
pub struct Form {
    ring: Arc<Ring>,
    diag: Vec<AElem>,
    /// q^ℓ, the number of residues per coordinate in T.
    tq: usize,
}

impl Form {
    pub fn new(ring: Arc<Ring>, diag: Vec<AElem>) -> Result<Form> {
        if diag.is_empty() {
            return domain("rank m must be positive");
        }
        for &r in &diag {
            if !ring.in_r(r) || !ring.is_unit(r) {
                return domain("diagonal entries must be units of R");
            }
        }
        let tq = ring.qpow(ring.len().div_ceil(2));
        let size = ring.size() as u128;
        if size.pow(diag.len() as u32) > MAX_VECTORS as u128 {
            return resource(format!("|V| = {}^{} exceeds {MAX_VECTORS}", ring.size(), diag.len()));
        }
        Ok(Form { ring, diag, tq })
    }

    pub fn build(spec: &FormSpec) -> Result<Form> {
        if spec.m == 0 {
            return domain("rank m must be positive");
        }
        let ring = Arc::new(Ring::for_spec(&spec.ring)?);
        let diag = match &spec.diag {
            DiagSpec::Standard(ty) => {
                let eps = ring.field().nonsquare_unit();
                standard_diag(spec.m, *ty, eps, &ring)
            }
            DiagSpec::Entries(e) => {
                if e.len() != spec.m {
                    return domain(format!("{} diagonal entries given for m = {}", e.len(), spec.m));
                }
                e.iter()
                    .map(|c| {
                        if c.len() > spec.ring.ell {
                            return domain("diagonal entry has more coefficients than R has");
                        }
                        let mut a = vec![0i64; 2 * c.len()];
                        for (j, &x) in c.iter().enumerate() {
                            a[2 * j] = x;
                        }
                        ring.from_ints(&a)
                    })
                    .collect::<Result<_>>()?
            }
        };
        Form::new(ring, diag)
    }

    /// The standard form of a type over an existing ring.
    pub fn standard(ring: Arc<Ring>, m: usize, ty: FormType) -> Result<Form> {
        if m == 0 {
            return domain("rank m must be positive");
        }
        let eps = ring.field().nonsquare_unit();
        let diag = standard_diag(m, ty, eps, &ring);
        Form::new(ring, diag)
    }

    /// The induced form on (A/y^len)^m.
    pub fn reduce(&self, len: usize) -> Result<Form> {
        let target = Arc::new(self.ring.quotient(len)?);
        let diag = self.diag.iter().map(|&r| self.ring.reduce_into(r, &target)).collect();
        Form::new(target, diag)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn ring_arc(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn m(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[AElem] {
        &self.diag
    }

    /// ℓ, the exponent with i = y^ℓ A; for odd-length quotient rings it is rounded up.
    pub fn ell(&self) -> usize {
        self.ring.len().div_ceil(2)
    }

    /// h(u, v) = Σ u_i* r_i v_i.
    #[inline]
    pub fn h(&self, u: &[AElem], v: &[AElem]) -> AElem {
        let a = &self.ring;
        let mut s = AElem::ZERO;
        for ((&ui, &ri), &vi) in u.iter().zip(&self.diag).zip(v) {
            s = a.add(s, a.mul(a.mul(a.conj(ui), ri), vi));
        }
        s
    }

    /// f = d ∘ h.
    pub fn f(&self, u: &[AElem], v: &[AElem]) -> AElem {
        self.ring.dmap(self.h(u, v))
    }

    pub fn length(&self, v: &[AElem]) -> AElem {
        self.h(v, v)
    }

    pub fn is_primitive(&self, v: &[AElem]) -> bool {
        v.iter().any(|&c| self.ring.is_unit(c))
    }

    pub fn det(&self) -> AElem {
        self.diag.iter().fold(AElem::ONE, |acc, &r| self.ring.mul(acc, r))
    }

    /// Type 1 iff det differs from the standard type-1 determinant by a square.
    pub fn form_type(&self) -> FormType {
        let f = self.ring.field();
        let d0 = self.ring.coeff(self.det(), 0);
        if f.is_square(f.mul(d0, reference_det(self.m(), &self.ring))) {
            FormType::Type1
        } else {
            FormType::TypeDelta
        }
    }

    /// |V| = |A|^m.
    pub fn vsize(&self) -> usize {
        self.ring.size().pow(self.m() as u32)
    }

    pub fn vec_of(&self, mut idx: usize) -> Vec<AElem> {
        let n = self.ring.size();
        (0..self.m())
            .map(|_| {
                let c = AElem((idx % n) as u16);
                idx /= n;
                c
            })
            .collect()
    }

    pub fn vindex(&self, v: &[AElem]) -> usize {
        let n = self.ring.size();
        v.iter().rev().fold(0usize, |acc, c| acc * n + c.index())
    }

    /// |T| = q^{ℓm}.
    pub fn tsize(&self) -> usize {
        self.tq.pow(self.m() as u32)
    }

    /// The transversal vector with index t.
    pub fn t_vec(&self, mut t: usize) -> Vec<AElem> {
        (0..self.m())
            .map(|_| {
                let c = AElem((t % self.tq) as u16);
                t /= self.tq;
                c
            })
            .collect()
    }

    /// Index in T of the representative of v mod iV.
    #[inline]
    pub fn t_index(&self, v: &[AElem]) -> usize {
        v.iter().rev().fold(0usize, |acc, c| acc * self.tq + c.index() % self.tq)
    }

    pub fn truncate(&self, v: &[AElem]) -> Vec<AElem> {
        v.iter().map(|c| AElem((c.index() % self.tq) as u16)).collect()
    }

    pub fn scale(&self, a: AElem, v: &[AElem]) -> Vec<AElem> {
        v.iter().map(|&c| self.ring.mul(a, c)).collect()
    }

    pub fn add(&self, u: &[AElem], v: &[AElem]) -> Vec<AElem> {
        u.iter().zip(v).map(|(&a, &b)| self.ring.add(a, b)).collect()
    }

    pub fn neg(&self, v: &[AElem]) -> Vec<AElem> {
        v.iter().map(|&a| self.ring.neg(a)).collect()
    }

    /// Membership in y^j V.
    pub fn in_y_power(&self, v: &[AElem], j: usize) -> bool {
        v.iter().all(|&c| self.ring.valuation(c) >= j)
    }

    /// The class of a length modulo i ∩ R.
    pub fn length_class(&self, v: &[AElem]) -> AElem {
        self.ring.truncate(self.length(v), self.ell())
    }

    /// Λ: lengths of primitive vectors, sorted by R-index.
    pub fn length_set(&self) -> Vec<AElem> {
        let mut seen = vec![false; self.ring.size()];
        for idx in 0..self.vsize() {
            let v = self.vec_of(idx);
            if self.is_primitive(&v) {
                seen[self.length(&v).index()] = true;
            }
        }
        let mut out: Vec<AElem> =
            seen.iter().enumerate().filter(|(_, &s)| s).map(|(i, _)| AElem(i as u16)).collect();
        out.sort_by_key(|&r| self.ring.r_index(r));
        out
    }

    /// v ≃ w iff their lengths agree modulo i ∩ R.
    pub fn equiv_by_length(&self, v: &[AElem], w: &[AElem]) -> Result<bool> {
        if !self.is_primitive(v) || !self.is_primitive(w) {
            return Err(Error::Domain("length equivalence is defined on primitive vectors".into()));
        }
        Ok(self.length_class(v) == self.length_class(w))
    }

    /// One primitive vector of T per length class, in T-index order.
    pub fn canonical_reps(&self) -> Vec<Vec<AElem>> {
        let mut seen = vec![false; self.ring.size()];
        let mut reps = Vec::new();
        for t in 0..self.tsize() {
            let v = self.t_vec(t);
            if !self.is_primitive(&v) {
                continue;
            }
            let c = self.length_class(&v).index();
            if !seen[c] {
                seen[c] = true;
                reps.push(v);
            }
        }
        reps
    }

    /// |R ∩ i|.
    pub fn r_cap_i_size(&self) -> usize {
        let even_in_range = (self.ell()..self.ring.len()).filter(|j| j % 2 == 0).count();
        self.ring.field().q().pow(even_in_range as u32)
    }

    /// The standard basis vector e_i.
    pub fn basis(&self, i: usize) -> Vec<AElem> {
        let mut v = vec![AElem::ZERO; self.m()];
        v[i] = AElem::ONE;
        v
    }

    /// Every nonzero v has some u with f(v, u) ≠ 0; scans all of V.
    pub fn f_nondegenerate(&self) -> bool {
        (1..self.vsize()).all(|i| {
            let v = self.vec_of(i);
            (0..self.vsize()).any(|j| self.f(&v, &self.vec_of(j)) != AElem::ZERO)
        })
    }

    /// (iV)^⊥ = iV, by exhaustion.
    pub fn i_perp_is_i(&self) -> bool {
        let ell = self.ell();
        let iv: Vec<Vec<AElem>> =
            (0..self.vsize()).map(|i| self.vec_of(i)).filter(|v| self.in_y_power(v, ell)).collect();
        (0..self.vsize()).all(|i| {
            let v = self.vec_of(i);
            let perp = iv.iter().all(|w| self.h(&v, w) == AElem::ZERO);
            perp == self.in_y_power(&v, ell)
        })
    }

    /// Canonical bytes of a vector: the coordinate encodings in order.
    pub fn encode(&self, v: &[AElem], out: &mut Vec<u8>) {
        for &c in v {
            self.ring.encode(c, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(p: u32, ell: usize, diag: &[i64]) -> Form {
        Form::build(&FormSpec::diagonal(p, ell, diag)).unwrap()
    }

    fn v(f: &Form, coords: &[&[i64]]) -> Vec<AElem> {
        coords.iter().map(|c| f.ring().from_ints(c).unwrap()).collect()
    }

    #[test]
    fn h_examples() {
        let f1 = form(3, 1, &[1]);
        assert_eq!(f1.h(&v(&f1, &[&[1]]), &v(&f1, &[&[1]])), AElem::ONE);
        let y = f1.ring().y_pow(1);
        assert_eq!(f1.h(&v(&f1, &[&[1]]), &[y]), y);
        let f2 = form(3, 1, &[1, -1]);
        assert_eq!(f2.h(&f2.basis(0), &f2.basis(1)), AElem::ZERO);
    }

    #[test]
    fn h_is_hermitian() {
        let f = form(3, 2, &[1, 2]);
        let a = f.ring();
        for i in (0..f.vsize()).step_by(37) {
            for j in (0..f.vsize()).step_by(41) {
                let (u, w) = (f.vec_of(i), f.vec_of(j));
                assert_eq!(f.h(&w, &u), a.conj(f.h(&u, &w)));
            }
            assert!(a.in_r(f.length(&f.vec_of(i))));
        }
    }

    #[test]
    fn f_examples() {
        let f1 = form(3, 1, &[1]);
        let y = f1.ring().y_pow(1);
        assert_eq!(f1.f(&[AElem::ONE], &[y]), f1.ring().from_int(2));
        assert_eq!(f1.f(&[y], &[AElem::ONE]), f1.ring().from_int(1));
        for i in 0..f1.vsize() {
            let w = f1.vec_of(i);
            assert_eq!(f1.f(&w, &w), AElem::ZERO);
        }
    }

    #[test]
    fn primitivity() {
        let f = form(3, 2, &[1, 1]);
        let a = f.ring();
        assert!(f.is_primitive(&[AElem::ONE, a.y_pow(1)]));
        assert!(!f.is_primitive(&[a.y_pow(1), a.y_pow(3)]));
        assert!(!f.is_primitive(&[AElem::ZERO, AElem::ZERO]));
    }

    #[test]
    fn form_types() {
        assert_eq!(form(3, 1, &[1, -1]).form_type(), FormType::Type1);
        assert_eq!(form(3, 1, &[1, 1]).form_type(), FormType::TypeDelta);
        assert_eq!(form(3, 1, &[2]).form_type(), FormType::TypeDelta);
        assert_eq!(form(3, 1, &[1]).form_type(), FormType::Type1);
        for (p, m) in [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (5, 3), (7, 4)] {
            for ty in [FormType::Type1, FormType::TypeDelta] {
                let f = Form::build(&FormSpec::standard(p, 1, m, ty)).unwrap();
                assert_eq!(f.form_type(), ty, "p={p} m={m}");
            }
        }
    }

    #[test]
    fn standard_diagonals() {
        let d = |p, m, ty| {
            let f = Form::build(&FormSpec::standard(p, 1, m, ty)).unwrap();
            f.diag().iter().map(|r| r.index()).collect::<Vec<_>>()
        };
        assert_eq!(d(3, 2, FormType::Type1), vec![1, 2]);
        assert_eq!(d(3, 2, FormType::TypeDelta), vec![1, 1]);
        assert_eq!(d(3, 3, FormType::Type1), vec![1, 2, 2]);
        assert_eq!(d(5, 1, FormType::TypeDelta), vec![2]);
    }

    #[test]
    fn length_sets() {
        let idx = |f: &Form| f.length_set().iter().map(|r| r.index()).collect::<Vec<_>>();
        assert_eq!(idx(&form(3, 1, &[1, -1])), vec![0, 1, 2]);
        assert_eq!(idx(&form(3, 1, &[1, 1])), vec![1, 2]);
        assert_eq!(idx(&form(3, 1, &[1])), vec![1]);
    }

    #[test]
    fn length_equivalence() {
        let f = form(3, 1, &[1, -1]);
        assert!(f.equiv_by_length(&f.basis(0), &f.basis(0)).unwrap());
        assert!(!f.equiv_by_length(&f.basis(0), &f.basis(1)).unwrap());
        assert!(f.equiv_by_length(&f.basis(0), &[AElem::ZERO, AElem::ZERO]).is_err());
        let g = form(3, 2, &[1]);
        let a = g.ring();
        // (1+x)^2 = 1+2x agrees with 1 modulo i ∩ R = xR
        let one_plus_x = a.from_ints(&[1, 0, 1]).unwrap();
        assert!(g.equiv_by_length(&[AElem::ONE], &[one_plus_x]).unwrap());
        let g2 = form(3, 2, &[1, 1]);
        assert!(!g2.equiv_by_length(&[AElem::ONE, AElem::ZERO], &[AElem::ONE, AElem::ONE]).unwrap());

    }

    #[test]
    fn representatives() {
        assert_eq!(form(3, 1, &[1, -1]).canonical_reps().len(), 3);
        assert_eq!(form(3, 1, &[1]).canonical_reps().len(), 1);
        assert_eq!(form(3, 1, &[1, 1]).canonical_reps().len(), 2);
        let f = form(3, 2, &[1]);
        // Λ = R^{×2} has 3 elements and R ∩ i = xR has 3, so one class
        assert_eq!(f.r_cap_i_size(), 3);
        assert_eq!(f.canonical_reps().len(), f.length_set().len() / f.r_cap_i_size());
    }

    #[test]
    fn transversal_indexing() {
        let f = form(3, 2, &[1, 1]);
        assert_eq!(f.tsize(), 81);
        for t in 0..f.tsize() {
            assert_eq!(f.t_index(&f.t_vec(t)), t);
        }
        // T is closed under negation
        for t in 0..f.tsize() {
            let w = f.neg(&f.t_vec(t));
            assert_eq!(f.t_vec(f.t_index(&w)), w);
        }
    }

    #[test]
    fn nondegeneracy_and_i_perp() {
        for (p, ell, d) in [(3, 1, vec![1, -1]), (3, 2, vec![1]), (5, 1, vec![1, 2])] {
            let f = form(p, ell, &d);
            assert!(f.f_nondegenerate());
            assert!(f.i_perp_is_i());
        }
    }

    #[test]
    fn rejects_non_units() {
        let spec = FormSpec::new(FieldSpec::prime(3), 2, 1, DiagSpec::Entries(vec![vec![0, 1]]));
        assert!(matches!(Form::build(&spec), Err(Error::Domain(_))));
    }
}
