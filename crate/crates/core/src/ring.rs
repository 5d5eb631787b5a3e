//! The truncated polynomial ring F_q[y]/(y^n) with the involution y ↦ -y.
//!
//! With n = 2ℓ this is the ramified quadratic extension A = R[y], y² = x, of
//! R = F_q[x]/(x^ℓ); R sits inside as the span of even powers of y. Quotients
//! A/y^j are the same construction with n = j, so the reduction maps between
//! levels are plain truncations of coefficient vectors.
//!
//! Elements are indices `Σ c_j q^j` into full operation tables.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, resource, Result};
use crate::gf::{Field, FieldSpec, Fq};
use crate::phase::Phase;

/// Largest ring order for which tables are built.
pub const MAX_RING_ORDER: usize = 4096;

const NO_INVERSE: u16 = u16::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSpec {
    pub field: FieldSpec,
    pub ell: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AElem(pub(crate) u16);

impl AElem {
    pub const ZERO: AElem = AElem(0);
    pub const ONE: AElem = AElem(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug)]
pub struct Ring {
    field: Arc<Field>,
    len: usize,
    size: usize,
    qpow: Vec<usize>,
    coef: Vec<u16>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    conj: Vec<u16>,
    inv: Vec<u16>,
    val: Vec<u8>,
}

impl Ring {
    /// Builds F_q[y]/(y^len).
    pub fn new(field: Arc<Field>, len: usize) -> Result<Ring> {
        if len == 0 {
            return domain("ring length must be positive");
        }
        let q = field.q();
        let size = match q.checked_pow(len as u32) {
            Some(s) if s <= MAX_RING_ORDER => s,
            _ => return resource(format!("ring of order {q}^{len} exceeds the table cap {MAX_RING_ORDER}")),
        };
        let qpow: Vec<usize> = (0..=len).map(|j| q.pow(j as u32)).collect();

        let mut coef = vec![0u16; size * len];
        for a in 0..size {
            let mut x = a;
            for j in 0..len {
                coef[a * len + j] = (x % q) as u16;
                x /= q;
            }
        }
        let index = |c: &[Fq]| -> u16 { c.iter().rev().fold(0usize, |acc, d| acc * q + d.index()) as u16 };
        let cf = |a: usize, j: usize| Fq(coef[a * len + j]);

        let mut neg = vec![0u16; size];
        let mut conj = vec![0u16; size];
        let mut val = vec![len as u8; size];
        let mut buf = vec![Fq::ZERO; len];
        for a in 0..size {
            for (j, b) in buf.iter_mut().enumerate() {
                *b = field.neg(cf(a, j));
            }
            neg[a] = index(&buf);
            for (j, b) in buf.iter_mut().enumerate() {
                *b = if j % 2 == 1 { field.neg(cf(a, j)) } else { cf(a, j) };
            }
            conj[a] = index(&buf);
            if let Some(j) = (0..len).find(|&j| !cf(a, j).is_zero()) {
                val[a] = j as u8;
            }
        }

        let mut add = vec![0u16; size * size];
        let mut mul = vec![0u16; size * size];
        for a in 0..size {
            for b in 0..size {
                for (j, s) in buf.iter_mut().enumerate() {
                    *s = field.add(cf(a, j), cf(b, j));
                }
                add[a * size + b] = index(&buf);
                buf.iter_mut().for_each(|s| *s = Fq::ZERO);
                for i in (val[a] as usize)..len {
                    let ai = cf(a, i);
                    if ai.is_zero() {
                        continue;
                    }
                    for j in 0..len - i {
                        buf[i + j] = field.add(buf[i + j], field.mul(ai, cf(b, j)));
                    }
                }
                mul[a * size + b] = index(&buf);
            }
        }

        let mut inv = vec![NO_INVERSE; size];
        for a in 0..size {
            if val[a] == 0 && inv[a] == NO_INVERSE {
                let b = (0..size).find(|&b| mul[a * size + b] == 1).expect("units are invertible");
                inv[a] = b as u16;
                inv[b] = a as u16;
            }
        }

        Ok(Ring { field, len, size, qpow, coef, add, mul, neg, conj, inv, val })
    }

    /// The ring A = F_q[y]/(y^{2ℓ}) of a spec.
    pub fn for_spec(spec: &RingSpec) -> Result<Ring> {
        if spec.ell == 0 {
            return domain("ell must be positive");
        }
        Ring::new(Arc::new(Field::new(spec.field.clone())?), 2 * spec.ell)
    }

    /// The quotient of this ring by y^len.
    pub fn quotient(&self, len: usize) -> Result<Ring> {
        if len == 0 || len > self.len {
            return domain(format!("quotient length {len} outside 1..={}", self.len));
        }
        Ring::new(self.field.clone(), len)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<Field> {
        &self.field
    }

    /// Number of y-coefficients.
    pub fn len(&self) -> usize {
        self.len
    }

    /// ℓ such that the ring is A = R[y] with R of length ℓ; only meaningful when `len` is even.
    pub fn ell(&self) -> usize {
        self.len / 2
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// q^j.
    pub fn qpow(&self, j: usize) -> usize {
        self.qpow[j]
    }

    pub fn elem(&self, index: usize) -> AElem {
        assert!(index < self.size);
        AElem(index as u16)
    }

    pub fn elements(&self) -> impl Iterator<Item = AElem> {
        (0..self.size as u16).map(AElem)
    }

    pub fn units(&self) -> impl Iterator<Item = AElem> + '_ {
        self.elements().filter(move |&a| self.is_unit(a))
    }

    /// Elements of R, in the order of their R-index.
    pub fn r_elements(&self) -> impl Iterator<Item = AElem> + '_ {
        let q = self.field.q();
        let n = self.len.div_ceil(2);
        (0..q.pow(n as u32)).map(move |i| self.from_r_index(i))
    }

    pub fn from_coeffs(&self, c: &[Fq]) -> Result<AElem> {
        if c.len() > self.len {
            return domain(format!("{} coefficients do not fit in length {}", c.len(), self.len));
        }
        let q = self.field.q();
        Ok(AElem(c.iter().rev().fold(0usize, |acc, d| acc * q + d.index()) as u16))
    }

    /// Coefficients given as integers mod p; convenient for prime fields.
    pub fn from_ints(&self, c: &[i64]) -> Result<AElem> {
        let c: Vec<Fq> = c.iter().map(|&x| self.field.from_int(x)).collect();
        self.from_coeffs(&c)
    }

    pub fn from_fq(&self, c: Fq) -> AElem {
        AElem(c.0)
    }

    pub fn from_int(&self, n: i64) -> AElem {
        self.from_fq(self.field.from_int(n))
    }

    #[inline]
    pub fn coeff(&self, a: AElem, j: usize) -> Fq {
        Fq(self.coef[a.index() * self.len + j])
    }

    pub fn coeffs(&self, a: AElem) -> Vec<Fq> {
        (0..self.len).map(|j| self.coeff(a, j)).collect()
    }

    /// y^j, zero once j reaches the length.
    pub fn y_pow(&self, j: usize) -> AElem {
        if j >= self.len {
            AElem::ZERO
        } else {
            AElem(self.qpow[j] as u16)
        }
    }

    #[inline]
    pub fn add(&self, a: AElem, b: AElem) -> AElem {
        AElem(self.add[a.index() * self.size + b.index()])
    }

    #[inline]
    pub fn neg(&self, a: AElem) -> AElem {
        AElem(self.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: AElem, b: AElem) -> AElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: AElem, b: AElem) -> AElem {
        AElem(self.mul[a.index() * self.size + b.index()])
    }

    /// The involution (r + sy)* = r - sy.
    #[inline]
    pub fn conj(&self, a: AElem) -> AElem {
        AElem(self.conj[a.index()])
    }

    pub fn try_inv(&self, a: AElem) -> Option<AElem> {
        let i = self.inv[a.index()];
        (i != NO_INVERSE).then_some(AElem(i))
    }

    pub fn inv(&self, a: AElem) -> Result<AElem> {
        self.try_inv(a).map_or_else(|| domain("inverting a non-unit"), Ok)
    }

    #[inline]
    pub fn is_unit(&self, a: AElem) -> bool {
        self.val[a.index()] == 0
    }

    /// Least index with a nonzero coefficient; the length for zero.
    #[inline]
    pub fn valuation(&self, a: AElem) -> usize {
        self.val[a.index()] as usize
    }

    /// Membership in R, the fixed ring of the involution.
    pub fn in_r(&self, a: AElem) -> bool {
        self.conj(a) == a
    }

    /// a mod y^j, as an element of this ring.
    #[inline]
    pub fn truncate(&self, a: AElem, j: usize) -> AElem {
        AElem((a.index() % self.qpow[j.min(self.len)]) as u16)
    }

    /// The image of a in a quotient ring of this one.
    #[inline]
    pub fn reduce_into(&self, a: AElem, target: &Ring) -> AElem {
        debug_assert!(target.len <= self.len);
        AElem((a.index() % target.size) as u16)
    }

    /// d(r + sy) = 2s, with s = Σ c_{2j+1} x^j.
    pub fn dmap(&self, a: AElem) -> AElem {
        let f = &self.field;
        let two = f.from_int(2);
        let mut c = vec![Fq::ZERO; self.len];
        for j in (1..self.len).step_by(2) {
            c[j - 1] = f.mul(two, self.coeff(a, j));
        }
        self.from_coeffs(&c).expect("length preserved")
    }

    pub fn norm(&self, a: AElem) -> AElem {
        self.mul(a, self.conj(a))
    }

    /// For r ∈ R, the index Σ idx(c_{2j}) q^j of r as an element of F_q[x]/(x^ℓ).
    pub fn r_index(&self, r: AElem) -> usize {
        let q = self.field.q();
        (0..self.len).step_by(2).rev().fold(0usize, |acc, j| acc * q + self.coeff(r, j).index())
    }

    pub fn from_r_index(&self, mut i: usize) -> AElem {
        let q = self.field.q();
        let mut c = vec![Fq::ZERO; self.len];
        for j in (0..self.len).step_by(2) {
            c[j] = Fq((i % q) as u16);
            i /= q;
        }
        self.from_coeffs(&c).expect("length preserved")
    }

    /// Canonical bytes: the k residues of each coefficient, lowest coefficient first.
    pub fn encode(&self, a: AElem, out: &mut Vec<u8>) {
        for j in 0..self.len {
            for d in self.field.coeffs(self.coeff(a, j)) {
                out.push(d as u8);
            }
        }
    }

    pub fn encoded_len(&self) -> usize {
        self.len * self.field.k() as usize
    }

    pub fn decode(&self, bytes: &[u8]) -> Result<AElem> {
        let k = self.field.k() as usize;
        if bytes.len() != self.len * k {
            return domain("encoded ring element has the wrong length");
        }
        let c: Vec<Fq> = bytes
            .chunks(k)
            .map(|ch| self.field.from_coeffs(&ch.iter().map(|&b| b as u32).collect::<Vec<_>>()))
            .collect::<Result<_>>()?;
        self.from_coeffs(&c)
    }

    /// Evaluates an additive character.
    pub fn char_value(&self, ch: &AddChar, a: AElem) -> Result<Phase> {
        if self.len % 2 == 1 {
            return domain("additive characters need an even-length ring");
        }
        let f = &self.field;
        match ch.kind {
            CharKind::Lambda => {
                if !self.in_r(a) {
                    return domain("lambda is defined on R only");
                }
                Ok(f.psi(f.mul(ch.scale, self.coeff(a, self.len - 2))))
            }
            CharKind::Mu => {
                let dtop = self.coeff(self.dmap(a), self.len - 2);
                Ok(f.psi(f.mul(ch.scale, dtop)))
            }
        }
    }

    /// Numerators `n(a)` with μ_u(a) = exp(2πi·n(a)/p), for every element a.
    pub fn mu_numerators(&self, scale: Fq) -> Vec<u16> {
        assert!(self.len % 2 == 0, "mu needs an even-length ring");
        let f = &self.field;
        let two_u = f.mul(f.from_int(2), scale);
        self.elements().map(|a| f.trace(f.mul(two_u, self.coeff(a, self.len - 1))) as u16).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CharKind {
    /// λ_u on R: r ↦ ψ(u · coefficient of x^{ℓ-1}).
    Lambda,
    /// μ_u = λ_u ∘ d on A.
    Mu,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AddChar {
    pub kind: CharKind,
    pub scale: Fq,
}

impl AddChar {
    pub fn lambda(scale: Fq) -> AddChar {
        AddChar { kind: CharKind::Lambda, scale }
    }

    pub fn mu(scale: Fq) -> AddChar {
        AddChar { kind: CharKind::Mu, scale }
    }
}

/// Nontrivial on the minimal ideal, which in a chain ring means primitive.
pub fn primitivity_check(ring: &Ring, ch: &AddChar) -> Result<bool> {
    let top = match ch.kind {
        CharKind::Lambda => ring.len() - 2,
        CharKind::Mu => ring.len() - 1,
    };
    for c in ring.field().elements() {
        let mut coeffs = vec![Fq::ZERO; ring.len()];
        coeffs[top] = c;
        if !ring.char_value(ch, ring.from_coeffs(&coeffs)?)?.is_one() {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Clone, Debug)]
pub struct NormImage {
    pub image: Vec<AElem>,
    pub unit_squares: Vec<AElem>,
    /// [R^× : R^{×2}]
    pub square_index: usize,
}

impl NormImage {
    pub fn holds(&self) -> bool {
        self.image == self.unit_squares && self.square_index == 2
    }
}

/// Compares Q(A^×) with R^{×2} by exhaustion.
pub fn norm_image_check(ring: &Ring) -> NormImage {
    let mut image: Vec<AElem> = ring.units().map(|a| ring.norm(a)).collect();
    image.sort();
    image.dedup();
    let r_units: Vec<AElem> = ring.r_elements().filter(|&r| ring.is_unit(r)).collect();
    let mut unit_squares: Vec<AElem> = r_units.iter().map(|&r| ring.mul(r, r)).collect();
    unit_squares.sort();
    unit_squares.dedup();
    let square_index = r_units.len() / unit_squares.len();
    NormImage { image, unit_squares, square_index }
}

/// N = {z : zz* = 1}, sorted by index.
pub fn norm_one_group(ring: &Ring) -> Vec<AElem> {
    ring.units().filter(|&z| ring.norm(z) == AElem::ONE).collect()
}
