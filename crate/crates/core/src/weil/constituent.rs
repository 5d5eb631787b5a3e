//! The constituents Top(φ, s), built two independent ways.
//!
//! Induced path. The character of ind_{B(s)}^U φγ_s at g is a sum over coset
//! representatives t_j of U/B(s). With w_j = t_j s, the conjugate t_j⁻¹ g t_j
//! lies in B(s) exactly when g w_j ≡ z w_j mod iV for some z ∈ N, and then
//! contributes φ(z) δ_s(z) μ(z h(g w_j, w_j)).
//!
//! Subspace path. The vector E_{φ,s} = Σ_z φ(z⁻¹) γ_s(z⁻¹) z e_s is spun up
//! under all of U to an orthonormal basis, and the trace of W(g) on that span
//! is the character.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::grp::chars::{FiniteAbelian, RootRule};
use crate::grp::table::GroupTable;
use crate::phase::Phase;
use crate::ring::{norm_one_group, AElem};
use crate::weil::classfn::ClassFunction;
use crate::weil::module::WeilModule;

/// Everything attached to one representative s ∈ S.
#[derive(Debug)]
pub struct TopSite {
    pub s: Vec<AElem>,
    /// N, in ring index order; positions index the character vectors below.
    pub n_elems: Vec<AElem>,
    pub n_group: FiniteAbelian,
    /// N ∩ (1 + i)
    pub n_kernel: Vec<bool>,
    /// C(s) ∩ N
    pub n_stab: Vec<bool>,
    /// The characters φ of N trivial on N ∩ (1 + i).
    pub phis: Vec<Vec<Phase>>,
    /// δ_s, extending β_s from C(s) ∩ N to N.
    pub delta: Vec<Phase>,
    /// Coset representatives of U/B(s), as table indices.
    pub cosets: Vec<usize>,
    pub w: Vec<Vec<AElem>>,
    /// Per coset: T-index of z w_j mod iV ↦ 1 + position of z, or 0.
    lookup: Vec<Vec<u16>>,
}

impl TopSite {
    pub fn new(table: &GroupTable, module: &WeilModule, s: &[AElem], rule: RootRule) -> Result<TopSite> {
        let form = table.form();
        let ring = table.ring();
        if !form.is_primitive(s) {
            return domain("top constituents need a primitive s");
        }
        let n_elems = norm_one_group(ring);
        let mut pos = vec![u16::MAX; ring.size()];
        for (k, z) in n_elems.iter().enumerate() {
            pos[z.index()] = k as u16;
        }
        let n_group =
            FiniteAbelian::new(n_elems.len(), |a, b| pos[ring.mul(n_elems[a], n_elems[b]).index()] as usize)?;
        let ell = form.ell();
        let n_kernel: Vec<bool> = n_elems.iter().map(|&z| ring.truncate(z, ell) == AElem::ONE).collect();
        let phis = n_group.characters_trivial_on(&n_kernel)?;

        let ts = form.t_index(s);
        let n_stab: Vec<bool> = n_elems.iter().map(|&z| form.t_index(&form.scale(z, s)) == ts).collect();
        let p = module.p() as u64;
        let beta: Vec<Phase> =
            n_elems.iter().map(|&z| Phase::new(module.mu(form.h(&form.scale(z, s), s)) as i64, p)).collect();
        let delta = n_group.extend(&n_stab, &beta, rule)?;

        // gB(s) = g'B(s) iff g's ≡ z gs mod iV for some z ∈ N
        let keys: Vec<usize> = table.par_map(|g| {
            let gs = table.apply(table.elem(g), s);
            n_elems.iter().map(|&z| form.t_index(&form.scale(z, &gs))).min().expect("N is nonempty")
        });
        let mut seen = std::collections::HashSet::new();
        let cosets: Vec<usize> = (0..table.order()).filter(|&g| seen.insert(keys[g])).collect();
        let w: Vec<Vec<AElem>> = cosets.iter().map(|&g| table.apply(table.elem(g), s)).collect();
        let lookup = w
            .iter()
            .map(|wj| {
                let mut l = vec![0u16; form.tsize()];
                for (k, &z) in n_elems.iter().enumerate().rev() {
                    l[form.t_index(&form.scale(z, wj))] = k as u16 + 1;
                }
                l
            })
            .collect();
        Ok(TopSite { s: s.to_vec(), n_elems, n_group, n_kernel, n_stab, phis, delta, cosets, w, lookup })
    }

    /// [U : B(s)], the degree of every Top(φ, s).
    pub fn degree(&self) -> usize {
        self.cosets.len()
    }

    /// The induced characters, one per φ.
    pub fn induced_characters(&self, table: &GroupTable, module: &WeilModule) -> Vec<ClassFunction> {
        let form = table.form();
        let ring = table.ring();
        let p = module.p() as usize;
        let nphi = self.phis.len();
        // value of φ(z) δ(z) ζ_p^k, by (φ, z, k)
        let vals: Vec<Complex64> = (0..nphi)
            .flat_map(|f| {
                (0..self.n_elems.len()).flat_map(move |z| {
                    (0..p).map(move |k| (self.phis[f][z] + self.delta[z] + Phase::new(k as i64, p as u64)).to_complex())
                })
            })
            .collect();
        let nz = self.n_elems.len();
        let rows: Vec<Vec<Complex64>> = table.par_map(|g| {
            let gm = table.elem(g);
            let mut acc = vec![Complex64::new(0.0, 0.0); nphi];
            let mut gw = vec![AElem::ZERO; form.m()];
            for (wj, look) in self.w.iter().zip(&self.lookup) {
                table.apply_into(gm, wj, &mut gw);
                let zp = look[form.t_index(&gw)];
                if zp == 0 {
                    continue;
                }
                let z = (zp - 1) as usize;
                let k = module.mu(ring.mul(self.n_elems[z], form.h(&gw, wj))) as usize;
                for (f, a) in acc.iter_mut().enumerate() {
                    *a += vals[(f * nz + z) * p + k];
                }
            }
            acc
        });
        (0..nphi).map(|f| ClassFunction::new(rows.iter().map(|r| r[f]).collect())).collect()
    }

    /// E_{φ,s} = Σ_z φ(z⁻¹) δ_s(z⁻¹) W(z) e_s.
    pub fn projector(&self, module: &WeilModule, phi: usize) -> Vec<Complex64> {
        let form = module.form();
        let p = module.p() as u64;
        let mut e = vec![Complex64::new(0.0, 0.0); module.dim()];
        for (k, &z) in self.n_elems.iter().enumerate() {
            let zs = form.scale(z, &self.s);
            let t = form.t_index(&zs);
            let ph = Phase::new(module.mu(form.h(&zs, module.t_vec(t))) as i64, p) - self.phis[phi][k] - self.delta[k];
            e[t] += ph.to_complex();
        }
        e
    }

    /// The eigenvalue φ(z)δ_s(z) of z ∈ N on E_{φ,s}, by N position.
    pub fn eigenvalue(&self, phi: usize, z: usize) -> Phase {
        self.phis[phi][z] + self.delta[z]
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).fold(Complex64::new(0.0, 0.0), |s, (x, y)| s + x.conj() * y)
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Orthonormal basis of span{W(g) e : g ∈ U}, visiting g in index order.
pub fn spin_up(table: &GroupTable, module: &WeilModule, e: &[Complex64], tol: f64) -> Result<Vec<Vec<Complex64>>> {
    let n0 = norm(e);
    if n0 < tol {
        return Err(Error::Numerical("projector vector vanishes".into()));
    }
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for g in 0..table.order() {
        let mut x = module.action(table, table.elem(g)).apply(e, module.zeta());
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &x);
                for (xi, qi) in x.iter_mut().zip(q) {
                    *xi -= c * qi;
                }
            }
        }
        let nx = norm(&x);
        if nx > tol * n0 {
            basis.push(x.iter().map(|c| c / nx).collect());
        }
    }
    Ok(basis)
}

/// χ(g) = Σ_i ⟨q_i, W(g) q_i⟩ for an orthonormal basis of an invariant subspace.
pub fn trace_on_span(table: &GroupTable, module: &WeilModule, basis: &[Vec<Complex64>]) -> ClassFunction {
    let zeta = module.zeta();
    ClassFunction::new(table.par_map(|g| {
        let a = module.action(table, table.elem(g));
        basis.iter().fold(Complex64::new(0.0, 0.0), |s, q| {
            q.iter().enumerate().fold(s, |s, (t, &c)| {
                s + q[a.perm[t] as usize].conj() * zeta[a.phase[t] as usize] * c
            })
        })
    }))
}

/// Largest |W(g)E − λ(g)E| over the given elements with their expected eigenvalues.
pub fn eigen_defect(
    table: &GroupTable,
    module: &WeilModule,
    e: &[Complex64],
    elems: &[(Vec<AElem>, Phase)],
) -> f64 {
    elems
        .par_iter()
        .map(|(g, lam)| {
            let x = module.action(table, g).apply(e, module.zeta());
            let l = lam.to_complex();
            x.iter().zip(e).map(|(a, b)| (a - l * b).norm()).fold(0.0, f64::max)
        })
        .collect::<Vec<f64>>()
        .into_iter()
        .fold(0.0, f64::max)
}
