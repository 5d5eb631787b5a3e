//! Closed-form orbit and length counts, compared against enumeration.

use crate::herm::{Form, FormType};
use crate::ring::AElem;

/// Number of U-orbits on V, which is also the number of constituents of X.
pub fn total_orbits(q: u64, ell: u32, m: usize, ty: FormType) -> u64 {
    match (m, ty) {
        (1, _) => q.pow(ell),
        (2, FormType::TypeDelta) => 2 * q.pow(ell) - 1,
        _ => 2 * (1..=ell).map(|j| q.pow(j)).sum::<u64>() + 1,
    }
}

/// Number of constituents of Top.
pub fn top_constituent_count(q: u64, ell: u32, m: usize, ty: FormType) -> u64 {
    match (m, ty) {
        (1, _) => q.pow(ell) - q.pow(ell - 1),
        (2, FormType::TypeDelta) => 2 * (q.pow(ell) - q.pow(ell - 1)),
        _ => 2 * q.pow(ell),
    }
}

/// The expected length set Λ, sorted by R-index.
pub fn expected_length_set(form: &Form) -> Vec<AElem> {
    let ring = form.ring();
    let f = ring.field();
    let unit_square = |r: AElem| ring.is_unit(r) && f.is_square(ring.coeff(r, 0));
    let ty = form.form_type();
    let mut out: Vec<AElem> = ring
        .r_elements()
        .filter(|&r| match (form.m(), ty) {
            (1, FormType::Type1) => unit_square(r),
            (1, FormType::TypeDelta) => ring.is_unit(r) && !unit_square(r),
            (2, FormType::TypeDelta) => ring.is_unit(r),
            _ => true,
        })
        .collect();
    out.sort_by_key(|&r| ring.r_index(r));
    out
}
