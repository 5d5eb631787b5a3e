//! Subgroups of an enumerated group, held as sorted index lists.

use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::grp::table::GroupTable;
use crate::herm::Form;
use crate::phase::Phase;
use crate::ring::AElem;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    members: Vec<u32>,
}

impl Subgroup {
    pub fn from_indices(mut members: Vec<u32>) -> Subgroup {
        members.sort_unstable();
        members.dedup();
        Subgroup { members }
    }

    pub fn whole(table: &GroupTable) -> Subgroup {
        Subgroup { members: (0..table.order() as u32).collect() }
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&(i as u32)).is_ok()
    }

    /// Position of element i in the member list.
    pub fn position(&self, i: usize) -> Option<usize> {
        self.members.binary_search(&(i as u32)).ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&i| other.contains(i as usize))
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        Subgroup { members: self.members.iter().copied().filter(|&i| other.contains(i as usize)).collect() }
    }
}

/// Elements whose matrices satisfy `pred`.
pub fn filter(table: &GroupTable, pred: impl Fn(&[AElem]) -> bool + Sync + Send) -> Subgroup {
    let keep = table.par_map(|i| pred(table.elem(i)));
    Subgroup { members: keep.iter().enumerate().filter(|(_, &k)| k).map(|(i, _)| i as u32).collect() }
}

/// The scalar matrices zI, z ∈ N.
pub fn scalar_subgroup(table: &GroupTable) -> Subgroup {
    let m = table.m();
    filter(table, |g| {
        (0..m).all(|i| (0..m).all(|j| if i == j { g[i * m + j] == g[0] } else { g[i * m + j] == AElem::ZERO }))
    })
}

/// U(y^j) = {g : g ≡ 1 mod y^j}.
pub fn congruence_subgroup(table: &GroupTable, j: usize) -> Result<Subgroup> {
    let a = table.ring();
    if j > a.len() {
        return domain(format!("congruence level {j} outside 0..={}", a.len()));
    }
    let m = table.m();
    Ok(filter(table, |g| {
        (0..m * m).all(|k| {
            let e = if k / m == k % m { a.sub(g[k], AElem::ONE) } else { g[k] };
            a.valuation(e) >= j
        })
    }))
}

/// C(v) = {g : gv ≡ v mod iV}.
pub fn c_subgroup(table: &GroupTable, v: &[AElem]) -> Subgroup {
    let form = table.form();
    let tv = form.t_index(v);
    filter(table, |g| form.t_index(&table.apply(g, v)) == tv)
}

/// The product set C·N.
pub fn product_set(table: &GroupTable, c: &Subgroup, n: &Subgroup) -> Subgroup {
    let prods: Vec<u32> = c
        .members()
        .par_iter()
        .flat_map_iter(|&x| n.members().iter().map(move |&z| table.mul(x as usize, z as usize) as u32))
        .collect();
    Subgroup::from_indices(prods)
}

/// B(v) = C(v)N.
pub fn b_subgroup(table: &GroupTable, v: &[AElem]) -> Subgroup {
    product_set(table, &c_subgroup(table, v), &scalar_subgroup(table))
}

pub fn is_closed(table: &GroupTable, s: &Subgroup) -> bool {
    s.members().par_iter().all(|&x| {
        s.contains(table.inv(x as usize)) && s.members().iter().all(|&y| s.contains(table.mul(x as usize, y as usize)))
    })
}

pub fn is_abelian(table: &GroupTable, s: &Subgroup) -> bool {
    s.members().par_iter().enumerate().all(|(k, &x)| {
        s.members()[k + 1..].iter().all(|&y| table.mul(x as usize, y as usize) == table.mul(y as usize, x as usize))
    })
}

/// Every member commutes with every element of `within`.
pub fn centralizes(table: &GroupTable, s: &Subgroup, within: &Subgroup) -> bool {
    within.members().par_iter().all(|&g| {
        s.members().iter().all(|&x| table.mul(x as usize, g as usize) == table.mul(g as usize, x as usize))
    })
}

/// g s g⁻¹ ∈ s for all g ∈ sup.
pub fn is_normal_in(table: &GroupTable, s: &Subgroup, sup: &Subgroup) -> bool {
    sup.members().par_iter().all(|&g| {
        let gm = table.elem(g as usize);
        let gi = table.inv_mat(gm);
        s.members().iter().all(|&x| {
            let c = table.mul_mat(&table.mul_mat(gm, table.elem(x as usize)), &gi);
            table.index_of(&c).is_some_and(|i| s.contains(i))
        })
    })
}

/// v ↦ v + a h(z1, v) z2 − a* h(z2, v) z1, as a matrix.
pub fn rho_generator(form: &Form, a: AElem, z1: &[AElem], z2: &[AElem]) -> Result<Vec<AElem>> {
    let r = form.ring();
    if r.valuation(a) < form.ell() {
        return domain("rho generators need a ∈ i");
    }
    let m = form.m();
    let mut g = vec![AElem::ZERO; m * m];
    for j in 0..m {
        let e = form.basis(j);
        let c1 = r.mul(a, form.h(z1, &e));
        let c2 = r.mul(r.conj(a), form.h(z2, &e));
        for i in 0..m {
            let mut x = e[i];
            x = r.add(x, r.mul(c1, z2[i]));
            x = r.sub(x, r.mul(c2, z1[i]));
            g[i * m + j] = x;
        }
    }
    Ok(g)
}

/// A linear character of a subgroup, stored alongside its member list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearChar {
    pub domain: Subgroup,
    pub values: Vec<Phase>,
}

impl LinearChar {
    pub fn value(&self, i: usize) -> Option<Phase> {
        self.domain.position(i).map(|k| self.values[k])
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|v| v.is_one())
    }
}

/// α_v(g) = μ(h(gv, v)) on U(i).
pub fn alpha_char(table: &GroupTable, ui: &Subgroup, v: &[AElem], mu: &[u16]) -> LinearChar {
    let form = table.form();
    let p = table.ring().field().p() as u64;
    let values = ui
        .members()
        .par_iter()
        .map(|&g| {
            let gv = table.apply(table.elem(g as usize), v);
            Phase::new(mu[form.h(&gv, v).index()] as i64, p)
        })
        .collect();
    LinearChar { domain: ui.clone(), values }
}

/// χ(xy) = χ(x)χ(y) over all pairs of the domain.
pub fn is_multiplicative(table: &GroupTable, ch: &LinearChar) -> bool {
    let d = &ch.domain;
    d.members().par_iter().enumerate().all(|(a, &x)| {
        d.members().iter().enumerate().all(|(b, &y)| {
            ch.value(table.mul(x as usize, y as usize)) == Some(ch.values[a] + ch.values[b])
        })
    })
}

/// {g : ch(g⁻¹ u g) = ch(u) for all u}, by brute force over the domain.
pub fn stabilizer_of_char(table: &GroupTable, ch: &LinearChar) -> Subgroup {
    let keep = table.par_map(|g| {
        let gm = table.elem(g);
        let gi = table.inv_mat(gm);
        ch.domain.members().iter().zip(&ch.values).all(|(&u, &val)| {
            let c = table.mul_mat(&table.mul_mat(&gi, table.elem(u as usize)), gm);
            table.index_of(&c).and_then(|i| ch.value(i)) == Some(val)
        })
    });
    Subgroup { members: keep.iter().enumerate().filter(|(_, &k)| k).map(|(i, _)| i as u32).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::table::DEFAULT_CAP;
    use crate::herm::FormSpec;
    use std::sync::Arc;

    fn table(p: u32, ell: usize, diag: &[i64]) -> GroupTable {
        let form = Arc::new(Form::build(&FormSpec::diagonal(p, ell, diag)).unwrap());
        GroupTable::enumerate(form, DEFAULT_CAP).unwrap()
    }

    #[test]
    fn scalars() {
        let t1 = table(3, 1, &[1]);
        assert_eq!(scalar_subgroup(&t1).order(), 6);
        let t2 = table(3, 1, &[1, -1]);
        let n = scalar_subgroup(&t2);
        assert_eq!(n.order(), 6);
        assert!(n.contains(t2.identity()));
        assert!(centralizes(&t2, &n, &Subgroup::whole(&t2)));
    }

    #[test]
    fn congruence_levels() {
        let t = table(3, 1, &[1, -1]);
        assert_eq!(congruence_subgroup(&t, 0).unwrap().order(), 108);
        assert_eq!(congruence_subgroup(&t, 1).unwrap().order(), 27);
        assert_eq!(congruence_subgroup(&t, 2).unwrap().order(), 1);
        assert!(congruence_subgroup(&t, 3).is_err());
        assert!(is_abelian(&t, &congruence_subgroup(&t, 1).unwrap()));
    }

    #[test]
    fn c_and_b() {
        let t = table(3, 1, &[1, -1]);
        let zero = vec![AElem::ZERO; 2];
        assert_eq!(c_subgroup(&t, &zero).order(), 108);
        let e0 = t.form().basis(0);
        let c = c_subgroup(&t, &e0);
        let b = b_subgroup(&t, &e0);
        assert!(c.is_subset_of(&b));
        assert_eq!(b.order() / c.order(), 2);
        assert!(is_closed(&t, &b));
        assert!(is_normal_in(&t, &c, &b));
        let iota: Vec<AElem> = vec![t.ring().from_int(-1), AElem::ZERO, AElem::ZERO, t.ring().from_int(-1)];
        assert!(!c.contains(t.index_of(&iota).unwrap()));
    }

    #[test]
    fn b_over_c_at_ell_two() {
        let t = table(3, 2, &[1]);
        let v = t.form().basis(0);
        let c = c_subgroup(&t, &v);
        assert_eq!(b_subgroup(&t, &v).order() / c.order(), 6);
    }

    #[test]
    fn rho_generators() {
        let t = table(3, 1, &[1, -1]);
        let f = t.form();
        let ui = congruence_subgroup(&t, 1).unwrap();
        let (e0, e1) = (f.basis(0), f.basis(1));
        let id = rho_generator(f, AElem::ZERO, &e0, &e1).unwrap();
        assert_eq!(t.index_of(&id), Some(t.identity()));
        let g = rho_generator(f, t.ring().y_pow(1), &e0, &e1).unwrap();
        assert!(t.is_unitary(&g));
        assert!(ui.contains(t.index_of(&g).unwrap()));
        let g2 = rho_generator(f, t.ring().y_pow(1), &e0, &e0).unwrap();
        assert!(ui.contains(t.index_of(&g2).unwrap()));
        assert!(rho_generator(f, AElem::ONE, &e0, &e1).is_err());
    }

    #[test]
    fn alpha_and_stabilizer() {
        let t = table(3, 1, &[1, -1]);
        let mu = t.ring().mu_numerators(crate::gf::Fq::ONE);
        let ui = congruence_subgroup(&t, 1).unwrap();
        let zero = vec![AElem::ZERO; 2];
        let triv = alpha_char(&t, &ui, &zero, &mu);
        assert!(triv.is_trivial());
        assert_eq!(stabilizer_of_char(&t, &triv).order(), 108);
        let e0 = t.form().basis(0);
        let a = alpha_char(&t, &ui, &e0, &mu);
        assert!(is_multiplicative(&t, &a));
        assert_eq!(a.value(t.identity()), Some(Phase::ONE));
        assert_eq!(stabilizer_of_char(&t, &a), b_subgroup(&t, &e0));
    }
}
