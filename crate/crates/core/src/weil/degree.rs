//! Closed-form degrees of Top^±(s) when ℓ = 1, where U reduces onto O_m(q).
//!
//! Write m = 2r or 2r + 1 and let t = h(s, s) ∈ F_q.

use crate::error::{domain, Result};
use crate::herm::FormType;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TClass {
    Zero,
    Square,
    NonSquare,
}

/// Which formula applied; the letters follow the usual case table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeCase {
    RankOne,
    A1,
    A2,
    A3,
    A4,
    B1,
    B2,
    B3,
    B4,
    C,
    D,
    E,
    F,
    G,
}

impl DegreeCase {
    pub fn name(self) -> &'static str {
        match self {
            DegreeCase::RankOne => "m1",
            DegreeCase::A1 => "a1",
            DegreeCase::A2 => "a2",
            DegreeCase::A3 => "a3",
            DegreeCase::A4 => "a4",
            DegreeCase::B1 => "b1",
            DegreeCase::B2 => "b2",
            DegreeCase::B3 => "b3",
            DegreeCase::B4 => "b4",
            DegreeCase::C => "c",
            DegreeCase::D => "d",
            DegreeCase::E => "e",
            DegreeCase::F => "f",
            DegreeCase::G => "g",
        }
    }
}

/// The case that applies, or a domain error if no vector of that length exists.
pub fn degree_case(m: usize, ty: FormType, neg_one_square: bool, t: TClass) -> Result<DegreeCase> {
    use DegreeCase::*;
    use FormType::*;
    use TClass::*;
    if m == 0 {
        return domain("rank must be positive");
    }
    if m == 1 {
        return match (ty, t) {
            (Type1, Square) | (TypeDelta, NonSquare) => Ok(RankOne),
            _ => domain("no primitive vector of that length in rank one"),
        };
    }
    if m % 2 == 0 {
        return match (ty, t) {
            (Type1, Zero) => Ok(E),
            (TypeDelta, Zero) if m == 2 => domain("the anisotropic plane has no isotropic primitive vectors"),
            (TypeDelta, Zero) => Ok(F),
            (TypeDelta, _) => Ok(C),
            (Type1, _) => Ok(D),
        };
    }
    Ok(match (ty, neg_one_square, t) {
        (_, _, Zero) => G,
        (Type1, true, Square) => A1,
        (Type1, false, NonSquare) => A2,
        (TypeDelta, true, NonSquare) => A3,
        (TypeDelta, false, Square) => A4,
        (Type1, true, NonSquare) => B1,
        (Type1, false, Square) => B2,
        (TypeDelta, true, Square) => B3,
        (TypeDelta, false, NonSquare) => B4,
    })
}

pub fn degree_closed_form(m: usize, q: u64, ty: FormType, neg_one_square: bool, t: TClass) -> Result<u64> {
    use DegreeCase::*;
    let r = (m / 2) as u32;
    let qr = q.pow(r);
    let q_r1 = if r >= 1 { q.pow(r - 1) } else { 0 };
    Ok(match degree_case(m, ty, neg_one_square, t)? {
        RankOne => 1,
        A1 | A2 | A3 | A4 => qr * (qr + 1) / 2,
        B1 | B2 | B3 | B4 => qr * (qr - 1) / 2,
        C => q_r1 * (qr + 1) / 2,
        D => q_r1 * (qr - 1) / 2,
        E => (qr - 1) * (q_r1 + 1) / 2,
        F => (qr + 1) * (q_r1 - 1) / 2,
        G => (qr * qr - 1) / 2,
    })
}
