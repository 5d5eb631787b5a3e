//! The Weil module X with basis e_v, v ∈ T, and the action
//! g e_v = μ(h(gv, v')) e_{v'}, where v' ∈ T is congruent to gv mod iV.
//!
//! Every value of μ is a p-th root of unity, so an action matrix is stored
//! exactly as a permutation of T together with phase numerators mod p.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::gf::Fq;
use crate::grp::table::GroupTable;
use crate::herm::Form;
use crate::phase::Phase;
use crate::ring::AElem;
use crate::weil::classfn::ClassFunction;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    /// g e_t = ζ_p^{phase[t]} e_{perm[t]}.
    pub perm: Vec<u32>,
    pub phase: Vec<u16>,
}

impl Monomial {
    /// The product self · other.
    pub fn compose(&self, other: &Monomial, p: u16) -> Monomial {
        let perm = other.perm.iter().map(|&t| self.perm[t as usize]).collect();
        let phase = other
            .perm
            .iter()
            .zip(&other.phase)
            .map(|(&t, &ph)| (ph + self.phase[t as usize]) % p)
            .collect();
        Monomial { perm, phase }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(t, &u)| t == u as usize) && self.phase.iter().all(|&ph| ph == 0)
    }

    pub fn apply(&self, x: &[Complex64], zeta: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); x.len()];
        for (t, &c) in x.iter().enumerate() {
            out[self.perm[t] as usize] += zeta[self.phase[t] as usize] * c;
        }
        out
    }
}

#[derive(Debug)]
pub struct WeilModule {
    form: Arc<Form>,
    scale: Fq,
    mu: Vec<u16>,
    p: u32,
    tvecs: Vec<AElem>,
    primitive: Vec<bool>,
    zeta: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopBotSplit {
    pub top: Vec<usize>,
    pub bot: Vec<usize>,
    pub top_plus: usize,
    pub top_minus: usize,
}

impl WeilModule {
    /// The module of type μ_u for the scale u.
    pub fn new(form: Arc<Form>, scale: Fq) -> Result<WeilModule> {
        if scale.is_zero() {
            return domain("the Weil module needs a primitive character");
        }
        if form.ring().len() % 2 == 1 {
            return domain("the Weil module needs A = F_q[y]/(y^{2l})");
        }
        let mu = form.ring().mu_numerators(scale);
        let p = form.ring().field().p();
        let m = form.m();
        let mut tvecs = Vec::with_capacity(form.tsize() * m);
        let mut primitive = Vec::with_capacity(form.tsize());
        for t in 0..form.tsize() {
            let v = form.t_vec(t);
            primitive.push(form.is_primitive(&v));
            tvecs.extend(v);
        }
        let zeta = (0..p).map(|k| Phase::new(k as i64, p as u64).to_complex()).collect();
        Ok(WeilModule { form, scale, mu, p, tvecs, primitive, zeta })
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn scale(&self) -> Fq {
        self.scale
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.primitive.len()
    }

    pub fn mu_table(&self) -> &[u16] {
        &self.mu
    }

    #[inline]
    pub fn mu(&self, a: AElem) -> u16 {
        self.mu[a.index()]
    }

    pub fn zeta(&self) -> &[Complex64] {
        &self.zeta
    }

    #[inline]
    pub fn t_vec(&self, t: usize) -> &[AElem] {
        let m = self.form.m();
        &self.tvecs[t * m..(t + 1) * m]
    }

    pub fn is_primitive(&self, t: usize) -> bool {
        self.primitive[t]
    }

    /// g e_t = ζ_p^k e_u, returned as (u, k).
    pub fn act(&self, table: &GroupTable, g: &[AElem], t: usize) -> (usize, u16) {
        let gv = table.apply(g, self.t_vec(t));
        let u = self.form.t_index(&gv);
        (u, self.mu(self.form.h(&gv, self.t_vec(u))))
    }

    pub fn action(&self, table: &GroupTable, g: &[AElem]) -> Monomial {
        let mut gv = vec![AElem::ZERO; self.form.m()];
        let mut perm = Vec::with_capacity(self.dim());
        let mut phase = Vec::with_capacity(self.dim());
        for t in 0..self.dim() {
            table.apply_into(g, self.t_vec(t), &mut gv);
            let u = self.form.t_index(&gv);
            perm.push(u as u32);
            phase.push(self.mu(self.form.h(&gv, self.t_vec(u))));
        }
        Monomial { perm, phase }
    }

    /// Counts, by phase numerator, of the diagonal entries of W(g) over the
    /// basis vectors selected by `keep`.
    fn trace_counts(&self, table: &GroupTable, g: &[AElem], keep: impl Fn(usize) -> bool) -> Vec<u32> {
        let ring = table.ring();
        let m = self.form.m();
        let tq = ring.qpow(self.form.ell());
        let mut counts = vec![0u32; self.p as usize];
        let mut gv = vec![AElem::ZERO; m];
        'basis: for t in 0..self.dim() {
            if !keep(t) {
                continue;
            }
            let v = self.t_vec(t);
            for i in 0..m {
                let mut s = AElem::ZERO;
                for k in 0..m {
                    s = ring.add(s, ring.mul(g[i * m + k], v[k]));
                }
                if s.index() % tq != v[i].index() {
                    continue 'basis;
                }
                gv[i] = s;
            }
            counts[self.mu(self.form.h(&gv, v)) as usize] += 1;
        }
        counts
    }

    fn sum_counts(&self, counts: &[u32]) -> Complex64 {
        counts.iter().zip(&self.zeta).fold(Complex64::new(0.0, 0.0), |s, (&c, z)| s + z * c as f64)
    }

    /// The trace of W(g) on the span of the selected basis vectors.
    pub fn partial_trace(&self, table: &GroupTable, g: &[AElem], keep: impl Fn(usize) -> bool) -> Complex64 {
        self.sum_counts(&self.trace_counts(table, g, keep))
    }

    /// Ω(g) = Σ μ(h(gv, v)) over v ∈ T with gv ≡ v mod iV.
    pub fn character(&self, table: &GroupTable) -> ClassFunction {
        ClassFunction::new(table.par_map(|g| self.partial_trace(table, table.elem(g), |_| true)))
    }

    /// The character of Bot, the span of e_v with v not primitive.
    pub fn bot_character(&self, table: &GroupTable) -> ClassFunction {
        ClassFunction::new(table.par_map(|g| self.partial_trace(table, table.elem(g), |t| !self.primitive[t])))
    }

    pub fn top_character(&self, table: &GroupTable) -> ClassFunction {
        ClassFunction::new(table.par_map(|g| self.partial_trace(table, table.elem(g), |t| self.primitive[t])))
    }

    /// Top and Bot index sets, and the dimensions of the ι-eigenspaces of Top
    /// read off from the trace of ι = −1 on Top.
    pub fn top_bot_split(&self, table: &GroupTable) -> TopBotSplit {
        let top: Vec<usize> = (0..self.dim()).filter(|&t| self.primitive[t]).collect();
        let bot: Vec<usize> = (0..self.dim()).filter(|&t| !self.primitive[t]).collect();
        let m = self.form.m();
        let minus_one = table.ring().from_int(-1);
        let iota: Vec<AElem> =
            (0..m * m).map(|k| if k / m == k % m { minus_one } else { AElem::ZERO }).collect();
        let tr = self.partial_trace(table, &iota, |t| self.primitive[t]).re.round() as i64;
        let n = top.len() as i64;
        TopBotSplit { top_plus: ((n + tr) / 2) as usize, top_minus: ((n - tr) / 2) as usize, top, bot }
    }
}
