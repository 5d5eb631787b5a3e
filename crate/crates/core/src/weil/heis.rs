//! The Heisenberg group H(h) and the radical of the central character.

use rayon::prelude::*;

use crate::error::{resource, Result};
use crate::herm::Form;
use crate::ring::AElem;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeisElem {
    pub scalar: AElem,
    pub vector: Vec<AElem>,
}

/// (r, v)(s, w) = (r + s + h(v, w), v + w).
pub fn heis_mul(form: &Form, a: &HeisElem, b: &HeisElem) -> HeisElem {
    let r = form.ring();
    HeisElem {
        scalar: r.add(r.add(a.scalar, b.scalar), form.h(&a.vector, &b.vector)),
        vector: form.add(&a.vector, &b.vector),
    }
}

/// (r, v)⁻¹ = (−r + h(v, v), −v).
pub fn heis_inv(form: &Form, a: &HeisElem) -> HeisElem {
    let r = form.ring();
    HeisElem { scalar: r.add(r.neg(a.scalar), form.length(&a.vector)), vector: form.neg(&a.vector) }
}

/// x y x⁻¹ equals y (h(v, w) − h(w, v), 0) for x = (r, v), y = (s, w).
pub fn conjugation_identity(form: &Form, x: &HeisElem, y: &HeisElem) -> bool {
    let r = form.ring();
    let lhs = heis_mul(form, &heis_mul(form, x, y), &heis_inv(form, x));
    let c = r.sub(form.h(&x.vector, &y.vector), form.h(&y.vector, &x.vector));
    let rhs = heis_mul(form, y, &HeisElem { scalar: c, vector: vec![AElem::ZERO; form.m()] });
    lhs == rhs
}

/// V(μ) = {v : μ(h(v, u) − h(u, v)) = 1 for all u}, by brute force.
///
/// `mu` holds the character's numerators, so the condition is `mu[..] == 0`.
pub fn radical(form: &Form, mu: &[u16]) -> Result<Vec<usize>> {
    let n = form.vsize();
    if (n as u128) * (n as u128) > 1u128 << 40 {
        return resource("radical scan is too large");
    }
    let r = form.ring();
    let vecs: Vec<Vec<AElem>> = (0..n).map(|i| form.vec_of(i)).collect();
    Ok((0..n)
        .into_par_iter()
        .filter(|&i| {
            vecs.iter().all(|u| mu[r.sub(form.h(&vecs[i], u), form.h(u, &vecs[i])).index()] == 0)
        })
        .collect())
}
