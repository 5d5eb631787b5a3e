//! The verification suite for one parameter point, and its JSON report.
//!
//! Checks that would be quadratic in a large group run exhaustively up to a
//! budget and on seeded random samples above it; sampled checks carry a
//! `:sampled` suffix and skipped ones say why.

use std::io;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Value};

use crate::counts::{expected_length_set, top_constituent_count, total_orbits};
use crate::error::{Error, Result};
use crate::gf::Fq;
use crate::grp::orbits::{orbits, transversal_orbits, OrbitDomain, OrbitReport};
use crate::grp::quotient::reduction_map;
use crate::grp::subgroup::{
    alpha_char, b_subgroup, c_subgroup, congruence_subgroup, filter, rho_generator, scalar_subgroup,
    stabilizer_of_char,
};
use crate::grp::table::GroupTable;
use crate::herm::{Form, FormSpec, FormType};
use crate::ring::{norm_image_check, norm_one_group, primitivity_check, AElem, AddChar, Ring};
use crate::weil::classfn::{inner_product, inner_product_raw, round_integer, ClassFunction};
use crate::weil::constituent::{eigen_defect, spin_up, trace_on_span, TopSite};
use crate::weil::decompose::{bot_constituents, character_sum, top_constituents, Constituent, DecomposeOptions};
use crate::weil::degree::{degree_closed_form, TClass};
use crate::weil::heis::{conjugation_identity, heis_inv, heis_mul, radical, HeisElem};
use crate::weil::module::{Monomial, WeilModule};

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    pub decompose: DecomposeOptions,
    /// Run every check, not only the decomposition ones.
    pub full: bool,
    /// Largest number of pairs a brute-force check visits exhaustively.
    pub brute_budget: usize,
    /// Largest |U|·dim X for which the subspace path runs.
    pub subspace_budget: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            decompose: DecomposeOptions::default(),
            full: true,
            brute_budget: 10_000_000,
            subspace_budget: 50_000_000,
            samples: 100_000,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Params {
    pub p: u32,
    pub k: u32,
    pub ell: usize,
    pub m: usize,
    /// R-coefficients of each diagonal entry, as field element indices.
    pub diag: Vec<Vec<usize>>,
    #[serde(rename = "type")]
    pub ty: FormType,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitCounts {
    #[serde(rename = "V")]
    pub v: usize,
    #[serde(rename = "V_minus_yV")]
    pub v_minus_yv: usize,
    #[serde(rename = "V_minus_y2V")]
    pub v_minus_y2v: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstituentRow {
    pub layer: usize,
    pub s_length: Option<usize>,
    pub phi_index: Option<usize>,
    pub degree: u64,
    pub norm: f64,
    pub multiplicity: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub lhs: Value,
    pub rhs: Value,
    pub tol: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub params: Params,
    pub group_order: usize,
    pub orbit_counts: OrbitCounts,
    pub constituents: Vec<ConstituentRow>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Sorted keys, two-space indent, floats with 12 decimals, trailing newline.
    pub fn to_json(&self) -> String {
        canonical_json(&serde_json::to_value(self).expect("report serializes"))
    }
}

struct Canonical<'a>(PrettyFormatter<'a>);

impl Formatter for Canonical<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        let v = if v == 0.0 { 0.0 } else { v };
        write!(w, "{v:.12}")
    }
    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serializes a JSON value canonically; object keys come out sorted because
/// `serde_json::Map` is ordered.
pub fn canonical_json(v: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Canonical(PrettyFormatter::with_indent(b"  ")));
    v.serialize(&mut ser).expect("writing to a Vec cannot fail");
    let mut s = String::from_utf8(out).expect("serde_json writes UTF-8");
    s.push('\n');
    s
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: impl Into<String>, ok: bool, lhs: Value, rhs: Value, tol: Option<f64>) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.0.push(Check { name: name.into(), status, lhs, rhs, tol });
    }

    fn exact<T: Serialize + PartialEq>(&mut self, name: impl Into<String>, lhs: T, rhs: T) {
        let ok = lhs == rhs;
        self.push(name, ok, json!(lhs), json!(rhs), None);
    }

    /// Passes when |lhs − rhs| < tol.
    fn close(&mut self, name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) {
        self.push(name, (lhs - rhs).abs() < tol, json!(lhs), json!(rhs), Some(tol));
    }

    fn deviation(&mut self, name: impl Into<String>, dev: f64, tol: f64) {
        self.push(name, dev < tol, json!(dev), json!(0.0), Some(tol));
    }

    /// A failure count that must be zero, named by whether it was sampled.
    fn failures(&mut self, name: &str, (fails, sampled): (usize, bool)) {
        let name = if sampled { format!("{name}:sampled") } else { name.to_string() };
        self.exact(name, fails, 0);
    }

    fn skipped(&mut self, name: impl Into<String>, reason: &str) {
        self.0.push(Check { name: name.into(), status: Status::Skipped, lhs: json!(reason), rhs: Value::Null, tol: None });
    }
}

/// Counts pairs (a, b) ∈ [0, n1) × [0, n2) failing `ok`, over all pairs when
/// there are at most `budget`, otherwise over `samples` seeded random ones.
fn pair_failures(
    n1: usize,
    n2: usize,
    budget: usize,
    samples: usize,
    rng: &mut ChaCha8Rng,
    ok: impl Fn(usize, usize) -> bool + Sync,
) -> (usize, bool) {
    if (n1 as u128) * (n2 as u128) <= budget as u128 {
        let f = (0..n1).into_par_iter().map(|a| (0..n2).filter(|&b| !ok(a, b)).count()).sum();
        (f, false)
    } else {
        let pairs: Vec<(usize, usize)> = (0..samples).map(|_| (rng.gen_range(0..n1), rng.gen_range(0..n2))).collect();
        (pairs.par_iter().filter(|&&(a, b)| !ok(a, b)).count(), true)
    }
}

/// Builds the form and its group, then runs the suite.
pub fn run_suite(spec: &FormSpec, opts: &SuiteOptions) -> Result<Report> {
    let form = Arc::new(Form::build(spec)?);
    let table = GroupTable::enumerate(form, opts.decompose.cap)?;
    run_on_table(&table, opts)
}

pub fn params_of(form: &Form) -> Params {
    let ring = form.ring();
    let f = ring.field();
    Params {
        p: f.p(),
        k: f.k(),
        ell: form.ell(),
        m: form.m(),
        diag: form
            .diag()
            .iter()
            .map(|&r| (0..ring.len()).step_by(2).map(|j| ring.coeff(r, j).index()).collect())
            .collect(),
        ty: form.form_type(),
    }
}

pub fn run_on_table(table: &GroupTable, opts: &SuiteOptions) -> Result<Report> {
    let form = table.form();
    let ring = table.ring();
    let tol = opts.decompose.tol;
    let ell = form.ell();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut c = Checks::default();

    let orb = orbits(table);
    let module = WeilModule::new(Arc::clone(table.form_arc()), Fq::ONE)?;
    let omega = module.character(table);
    let (sites, top) = top_constituents(table, &module, 0, &opts.decompose)?;
    let bot = bot_constituents(table, Fq::ONE, 0, &opts.decompose)?;
    let all: Vec<&Constituent> = top.iter().chain(&bot).collect();

    let mut rows = Vec::with_capacity(all.len());
    for x in &all {
        rows.push(ConstituentRow {
            layer: x.layer,
            s_length: x.s_length,
            phi_index: x.phi_index,
            degree: x.degree,
            norm: inner_product_raw(&x.character, &x.character).re,
            multiplicity: inner_product(&x.character, &omega, tol)?,
        });
    }

    decomposition_checks(&mut c, table, &orb, &omega, &sites, &top, &bot, &rows, tol)?;
    if ell == 1 {
        closed_form_checks(&mut c, table, &sites)?;
    }
    if opts.full {
        field_ring_checks(&mut c, ring, opts);
        form_checks(&mut c, table, &orb, opts);
        group_checks(&mut c, table, &orb, &sites, opts, &mut rng)?;
        weil_checks(&mut c, table, &module, &omega, &sites, &top, &bot, opts, &mut rng)?;
    }

    Ok(Report {
        params: params_of(form),
        group_order: table.order(),
        orbit_counts: OrbitCounts {
            v: orb.count(OrbitDomain::AllV),
            v_minus_yv: orb.count(OrbitDomain::VMinusYV),
            v_minus_y2v: orb.count(OrbitDomain::VMinusY2V),
        },
        constituents: rows,
        checks: c.0,
    })
}

#[allow(clippy::too_many_arguments)]
fn decomposition_checks(
    c: &mut Checks,
    table: &GroupTable,
    orb: &OrbitReport,
    omega: &ClassFunction,
    sites: &[TopSite],
    top: &[Constituent],
    bot: &[Constituent],
    rows: &[ConstituentRow],
    tol: f64,
) -> Result<()> {
    let form = table.form();
    let q = table.ring().field().q() as u64;
    let (ell, m, ty) = (form.ell() as u32, form.m(), form.form_type());
    let dim = q.pow(ell * m as u32);
    let n_orbits = orb.count(OrbitDomain::AllV);

    c.close("weil.omega_degree", omega.at(table.identity()).re, dim as f64, tol);
    let oo = inner_product_raw(omega, omega);
    c.push(
        "weil.omega_norm",
        (oo - Complex64::new(n_orbits as f64, 0.0)).norm() < tol,
        json!(oo.re),
        json!(n_orbits),
        Some(tol),
    );
    let triv = ClassFunction::constant(table.order(), 1.0);
    c.close("weil.omega_trivial", inner_product_raw(omega, &triv).re, 1.0, tol);

    let n = rows.len();
    c.exact("weil.constituent_count", n, n_orbits);
    c.exact("weil.constituent_count_formula", n as u64, total_orbits(q, ell, m, ty));
    let norm_dev = rows.iter().map(|r| (r.norm - 1.0).abs()).fold(0.0, f64::max);
    c.deviation("weil.norms", norm_dev, tol);
    c.exact("weil.multiplicities", rows.iter().filter(|r| r.multiplicity != 1).count(), 0);
    let chars: Vec<&ClassFunction> = top.iter().chain(bot).map(|x| &x.character).collect();
    let cross = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| inner_product_raw(chars[i], chars[j]).norm())
        .fold(0.0, f64::max);
    c.deviation("weil.orthogonality", cross, tol);
    c.exact("weil.degree_sum", rows.iter().map(|r| r.degree).sum::<u64>(), dim);
    let sum = character_sum(&top.iter().chain(bot).cloned().collect::<Vec<_>>(), table.order());
    c.deviation("weil.completeness", sum.max_deviation(omega), tol);

    let g_size = sites.first().map_or(0, |s| s.phis.len());
    c.exact("weil.top_count", top.len(), orb.count(OrbitDomain::VMinusY2V));
    c.exact("weil.top_count_sites", top.len(), sites.len() * g_size);
    c.exact("weil.top_count_formula", top.len() as u64, top_constituent_count(q, ell, m, ty));
    Ok(())
}

fn closed_form_checks(c: &mut Checks, table: &GroupTable, sites: &[TopSite]) -> Result<()> {
    let form = table.form();
    let ring = table.ring();
    let f = ring.field();
    let neg_one_square = f.is_square(f.from_int(-1));
    for site in sites {
        let t = ring.coeff(form.length(&site.s), 0);
        let class = if t.is_zero() {
            TClass::Zero
        } else if f.is_square(t) {
            TClass::Square
        } else {
            TClass::NonSquare
        };
        let want = degree_closed_form(form.m(), f.q() as u64, form.form_type(), neg_one_square, class)?;
        c.exact(format!("weil.closed_form[t={}]", t.index()), site.degree() as u64, want);
    }
    Ok(())
}

fn field_ring_checks(c: &mut Checks, ring: &Ring, opts: &SuiteOptions) {
    let f = ring.field();
    let q = f.q();
    let psi_fail = (0..q)
        .into_par_iter()
        .map(|a| {
            let a = f.elem(a);
            f.elements().filter(|&b| f.psi(f.add(a, b)) != f.psi(a) + f.psi(b)).count()
        })
        .sum::<usize>();
    c.exact("field.psi_additive", psi_fail, 0);
    c.exact("field.psi_nontrivial", f.elements().any(|a| !f.psi(a).is_one()), true);
    c.exact("field.unit_squares", f.elements().filter(|&a| !a.is_zero() && f.is_square(a)).count(), (q - 1) / 2);

    let n = ring.size();
    let budget = opts.brute_budget.max(n * n);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 1);
    let pairs = pair_failures(n, n, budget, opts.samples, &mut rng, |i, j| {
        let (a, b) = (ring.elem(i), ring.elem(j));
        ring.conj(ring.add(a, b)) == ring.add(ring.conj(a), ring.conj(b))
            && ring.conj(ring.mul(a, b)) == ring.mul(ring.conj(a), ring.conj(b))
            && ring.norm(ring.mul(a, b)) == ring.mul(ring.norm(a), ring.norm(b))
    });
    c.failures("ring.involution_and_norm", pairs);
    let single = ring.elements().filter(|&a| {
        let fixed = ring.conj(a) == a;
        !(ring.conj(ring.conj(a)) == a && fixed == ring.in_r(a) && ring.dmap(ring.add(a, ring.conj(a))) == AElem::ZERO)
    });
    c.exact("ring.involution_order_two", single.count(), 0);
    let degenerate = ring
        .elements()
        .filter(|&a| a != AElem::ZERO && ring.elements().all(|b| ring.dmap(ring.mul(a, b)) == AElem::ZERO))
        .count();
    c.exact("ring.d_nondegenerate", degenerate, 0);
    let img = norm_image_check(ring);
    c.push(
        "ring.norm_image",
        img.holds(),
        json!(img.image.len()),
        json!(img.unit_squares.len()),
        None,
    );
    c.exact("ring.square_index", img.square_index, 2);
    let nn = norm_one_group(ring);
    let closed = nn.iter().all(|&a| nn.iter().all(|&b| nn.contains(&ring.mul(a, b))));
    c.exact("ring.norm_one_closed", closed, true);
    c.exact("ring.norm_one_order", nn.len() * img.unit_squares.len(), ring.units().count());
    let ell = ring.ell();
    let kernel = nn.iter().filter(|&&z| ring.truncate(z, ell) == AElem::ONE).count();
    let r_cap_i = ring.r_elements().filter(|&r| ring.valuation(r) >= ell).count();
    c.exact("ring.n_mod_one_plus_i", nn.len() / kernel, 2 * r_cap_i);
    c.exact("ring.mu_primitive", primitivity_check(ring, &AddChar::mu(Fq::ONE)).unwrap_or(false), true);
    c.exact("ring.lambda_primitive", primitivity_check(ring, &AddChar::lambda(Fq::ONE)).unwrap_or(false), true);
}

fn form_checks(c: &mut Checks, table: &GroupTable, orb: &OrbitReport, opts: &SuiteOptions) {
    let form = table.form();
    let ring = form.ring();
    let vs = form.vsize();
    let alt = (0..vs).into_par_iter().filter(|&i| {
        let v = form.vec_of(i);
        form.f(&v, &v) != AElem::ZERO
    });
    c.exact("herm.f_alternating", alt.count(), 0);
    if (vs as u128) * (vs as u128) <= 100 * opts.brute_budget as u128 {
        c.exact("herm.f_nondegenerate", form.f_nondegenerate(), true);
        c.exact("herm.i_perp", form.i_perp_is_i(), true);
    } else {
        c.skipped("herm.f_nondegenerate", "|V|^2 over budget");
        c.skipped("herm.i_perp", "|V|^2 over budget");
    }
    let lam: Vec<usize> = form.length_set().iter().map(|&r| ring.r_index(r)).collect();
    let want: Vec<usize> = expected_length_set(form).iter().map(|&r| ring.r_index(r)).collect();
    c.exact("herm.length_set", lam.clone(), want);
    let reps = form.canonical_reps();
    c.exact("herm.reps_count", reps.len(), orb.k() / form.r_cap_i_size());

    // ≃ (lengths mod i ∩ R) against ∼ (orbits on V/iV) on primitive T
    let tor = transversal_orbits(table);
    let mut class_of_orbit = std::collections::BTreeMap::new();
    let mut orbit_of_class = std::collections::BTreeMap::new();
    let mut bad = 0usize;
    for (t, &o) in tor.iter().enumerate() {
        let v = form.t_vec(t);
        if !form.is_primitive(&v) {
            continue;
        }
        let cl = form.length_class(&v).index();
        if *class_of_orbit.entry(o).or_insert(cl) != cl || *orbit_of_class.entry(cl).or_insert(o) != o {
            bad += 1;
        }
    }
    c.exact("herm.length_equivalence_is_orbit_equivalence", bad, 0);
    c.exact("herm.orbits_mod_i", class_of_orbit.len(), reps.len());
}

fn group_checks(
    c: &mut Checks,
    table: &GroupTable,
    orb: &OrbitReport,
    sites: &[TopSite],
    opts: &SuiteOptions,
    rng: &mut ChaCha8Rng,
) -> Result<()> {
    let form = table.form();
    let ring = table.ring();
    let n = table.order();
    let ell = form.ell();
    let m = form.m();
    let q = ring.field().q() as u64;
    let (budget, samples) = (opts.brute_budget, opts.samples);

    let nonunitary = (0..n).into_par_iter().filter(|&g| !table.is_unitary(table.elem(g))).count();
    c.exact("grp.unitary", nonunitary, 0);
    let inv_fail = (0..n)
        .into_par_iter()
        .filter(|&g| {
            let gi = table.inv_mat(table.elem(g));
            table.index_of(&table.mul_mat(table.elem(g), &gi)) != Some(table.identity())
                || table.index_of(&gi).is_none()
        })
        .count();
    c.exact("grp.inverses", inv_fail, 0);
    let clo = pair_failures(n, n, budget, samples, rng, |a, b| {
        table.index_of(&table.mul_mat(table.elem(a), table.elem(b))).is_some()
    });
    c.failures("grp.closure", clo);

    let vecs: Vec<(Vec<AElem>, Vec<AElem>)> = (0..16)
        .map(|_| (form.vec_of(rng.gen_range(0..form.vsize())), form.vec_of(rng.gen_range(0..form.vsize()))))
        .collect();
    let pres = pair_failures(n, vecs.len(), budget, samples, rng, |g, k| {
        let (u, v) = &vecs[k];
        let gm = table.elem(g);
        form.f(&table.apply(gm, u), &table.apply(gm, v)) == form.f(u, v)
    });
    c.failures("grp.preserves_f", pres);

    let red = reduction_map(table, 1, opts.decompose.cap)?;
    let u1 = congruence_subgroup(table, 1)?;
    let kernel = red.kernel();
    c.push("grp.reduction_kernel", kernel == u1, json!(kernel.order()), json!(u1.order()), None);
    c.exact("grp.reduction_order", n, u1.order() * red.target.order());

    let nsub = scalar_subgroup(table);
    c.exact("grp.n_is_norm_one", nsub.order(), norm_one_group(ring).len());
    let cen = pair_failures(nsub.order(), n, budget, samples, rng, |a, g| {
        let z = nsub.members()[a] as usize;
        table.mul(z, g) == table.mul(g, z)
    });
    c.failures("grp.n_central", cen);
    let ui = congruence_subgroup(table, ell)?;
    let ab = pair_failures(ui.order(), ui.order(), budget, samples, rng, |a, b| {
        let (x, y) = (ui.members()[a] as usize, ui.members()[b] as usize);
        table.mul(x, y) == table.mul(y, x)
    });
    c.failures("grp.ui_abelian", ab);

    let k = orb.k();
    c.exact(
        "grp.orbits_total",
        orb.count(OrbitDomain::AllV) as u64,
        total_orbits(q, ell as u32, m, form.form_type()),
    );
    c.exact("grp.orbits_mod_y2", orb.count(OrbitDomain::VMinusY2V), 2 * k);
    c.exact("grp.primitive_orbits_are_lengths", k, form.length_set().len());

    // ρ_{a,z1,z2} ∈ U(i) for a ∈ i and basis vectors z1, z2
    let i_elems: Vec<AElem> = ring.elements().filter(|&a| ring.valuation(a) >= ell).collect();
    let mut rho_fail = 0usize;
    let mut rho_count = 0usize;
    for &a in &i_elems {
        for j1 in 0..m {
            for j2 in 0..m {
                let g = rho_generator(form, a, &form.basis(j1), &form.basis(j2))?;
                rho_count += 1;
                if !table.index_of(&g).is_some_and(|i| ui.contains(i)) {
                    rho_fail += 1;
                }
            }
        }
    }
    c.push("grp.rho_generators_in_ui", rho_fail == 0, json!(rho_count - rho_fail), json!(rho_count), None);

    let mu = ring.mu_numerators(Fq::ONE);
    for site in sites {
        let s = &site.s;
        let tag = ring.r_index(form.length(s));
        let alpha = alpha_char(table, &ui, s, &mu);
        let mult = pair_failures(ui.order(), ui.order(), budget, samples, rng, |a, b| {
            let (x, y) = (ui.members()[a] as usize, ui.members()[b] as usize);
            alpha.value(table.mul(x, y)) == Some(alpha.values[a] + alpha.values[b])
        });
        c.failures(&format!("grp.alpha_multiplicative[s={tag}]"), mult);

        let cs = c_subgroup(table, s);
        let bs = b_subgroup(table, s);
        if (n as u128) * (ui.order() as u128) <= budget as u128 {
            let stab = stabilizer_of_char(table, &alpha);
            c.push(format!("grp.stabilizer_is_b[s={tag}]"), stab == bs, json!(stab.order()), json!(bs.order()), None);
        } else {
            c.skipped(format!("grp.stabilizer_is_b[s={tag}]"), "|U|·|U(i)| over budget");
        }
        let bc = bs.order() / cs.order();
        c.exact(format!("grp.b_over_c[s={tag}]"), bc as u64, 2 * q.pow((ell / 2) as u32));
        let normal = pair_failures(bs.order(), cs.order(), budget, samples, rng, |a, b| {
            let gm = table.elem(bs.members()[a] as usize);
            let conj = table.mul_mat(&table.mul_mat(gm, table.elem(cs.members()[b] as usize)), &table.inv_mat(gm));
            table.index_of(&conj).is_some_and(|i| cs.contains(i))
        });
        c.failures(&format!("grp.c_normal_in_b[s={tag}]"), normal);
        c.exact(format!("grp.coset_count[s={tag}]"), site.degree() * bs.order(), n);
    }

    // [Ū : D(s)] over A/i against the degree
    let red_i = reduction_map(table, ell, opts.decompose.cap)?;
    let tgt = &red_i.target;
    for site in sites {
        let tag = ring.r_index(form.length(&site.s));
        let sbar: Vec<AElem> = site.s.iter().map(|&a| ring.reduce_into(a, tgt.ring())).collect();
        let d = filter(tgt, |g| tgt.apply(g, &sbar) == sbar);
        let ubar_d = tgt.order() / d.order();
        let cs = c_subgroup(table, &site.s);
        let bc = b_subgroup(table, &site.s).order() / cs.order();
        c.exact(format!("grp.index_c_is_index_d[s={tag}]"), n / cs.order(), ubar_d);
        c.push(
            format!("weil.degree_ledger[s={tag}]"),
            ubar_d % bc == 0 && ubar_d / bc == site.degree(),
            json!(ubar_d as f64 / bc as f64),
            json!(site.degree()),
            None,
        );
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn weil_checks(
    c: &mut Checks,
    table: &GroupTable,
    module: &WeilModule,
    omega: &ClassFunction,
    sites: &[TopSite],
    top: &[Constituent],
    bot: &[Constituent],
    opts: &SuiteOptions,
    rng: &mut ChaCha8Rng,
) -> Result<()> {
    let form = table.form();
    let ring = table.ring();
    let n = table.order();
    let m = form.m();
    let ell = form.ell();
    let q = ring.field().q();
    let p = module.p() as u16;
    let tol = opts.decompose.tol;
    let dim = module.dim();

    let vs = form.vsize();
    if (vs as u128) * (vs as u128) <= 100 * opts.brute_budget as u128 {
        let rad = radical(form, module.mu_table())?;
        c.exact("weil.radical_trivial", rad, vec![0]);
    } else {
        c.skipped("weil.radical_trivial", "|V|^2 over budget");
    }
    let mut heis_fail = 0usize;
    let rand_heis = |rng: &mut ChaCha8Rng| HeisElem {
        scalar: ring.elem(rng.gen_range(0..ring.size())),
        vector: form.vec_of(rng.gen_range(0..vs)),
    };
    for _ in 0..1000 {
        let (x, y, z) = (rand_heis(rng), rand_heis(rng), rand_heis(rng));
        let assoc = heis_mul(form, &heis_mul(form, &x, &y), &z) == heis_mul(form, &x, &heis_mul(form, &y, &z));
        let unit = heis_mul(form, &x, &heis_inv(form, &x)).vector.iter().all(|&a| a == AElem::ZERO);
        if !(assoc && unit && conjugation_identity(form, &x, &y)) {
            heis_fail += 1;
        }
    }
    c.exact("weil.heisenberg:sampled", heis_fail, 0);

    c.exact("weil.identity_acts_trivially", module.action(table, table.elem(table.identity())).is_identity(), true);
    let hom = if n <= 10_000 {
        let acts: Vec<Monomial> = table.par_map(|g| module.action(table, table.elem(g)));
        pair_failures(n, n, usize::MAX, 0, rng, |a, b| acts[table.mul(a, b)] == acts[a].compose(&acts[b], p))
    } else {
        pair_failures(n, n, 0, opts.samples, rng, |a, b| {
            let wa = module.action(table, table.elem(a));
            let wb = module.action(table, table.elem(b));
            module.action(table, table.elem(table.mul(a, b))) == wa.compose(&wb, p)
        })
    };
    c.failures("weil.homomorphism", hom);

    let split = module.top_bot_split(table);
    let bot_dim = q.pow(((ell - 1) * m) as u32);
    let top_dim = dim - bot_dim;
    c.exact(
        "weil.top_bot_dims",
        vec![split.top.len(), split.bot.len(), split.top_plus, split.top_minus],
        vec![top_dim, bot_dim, top_dim / 2, top_dim / 2],
    );

    // notriviality and fixed points of K = U(y^{2(ℓ-1)})
    let kern = congruence_subgroup(table, 2 * (ell - 1))?;
    let kb = pair_failures(kern.order(), split.bot.len(), usize::MAX, 0, rng, |a, b| {
        let t = split.bot[b];
        module.act(table, table.elem(kern.members()[a] as usize), t) == (t, 0)
    });
    c.failures("weil.kernel_trivial_on_bot", kb);
    let mean_on_kernel = |f: &ClassFunction| -> Complex64 {
        kern.members().iter().fold(Complex64::new(0.0, 0.0), |s, &g| s + f.at(g as usize)) / kern.order() as f64
    };
    let fixed = mean_on_kernel(omega);
    c.close("weil.kernel_fixed_dim", fixed.re, bot_dim as f64, tol);
    let mut trivial_on_top = 0usize;
    for x in top {
        let fx = round_integer(mean_on_kernel(&x.character), tol, "kernel-fixed dimension")?;
        if fx as u64 >= x.degree {
            trivial_on_top += 1;
        }
    }
    c.exact("weil.kernel_nontrivial_on_top", trivial_on_top, 0);

    let bot_char = module.bot_character(table);
    if ell == 1 {
        c.deviation("weil.bot_is_trivial", bot_char.max_deviation(&ClassFunction::constant(n, 1.0)), tol);
    } else {
        let red = reduction_map(table, 2 * (ell - 1), opts.decompose.cap)?;
        let wbar = WeilModule::new(Arc::clone(red.target.form_arc()), ring.field().neg(Fq::ONE))?;
        let pulled = ClassFunction::new(red.pull_back(&wbar.character(&red.target).values));
        c.deviation("weil.bot_is_pulled_back_weil", bot_char.max_deviation(&pulled), tol);
    }
    c.deviation("weil.bot_sum", character_sum(bot, n).max_deviation(&bot_char), tol);
    c.deviation("weil.top_sum", character_sum(top, n).max_deviation(&module.top_character(table)), tol);

    // E_{φ,s}: eigenvectors for N and C(s), mutually orthogonal across φ,
    // and spinning up to the induced character
    let subspace = (n as u128) * (dim as u128) <= opts.subspace_budget as u128;
    let mut max_dual = 0.0f64;
    let mut max_eigen = 0.0f64;
    let mut max_cross = 0.0f64;
    let mut k = 0;
    for site in sites {
        let cs = c_subgroup(table, &site.s);
        let mut eig_elems: Vec<(Vec<AElem>, crate::phase::Phase)> = Vec::new();
        if subspace {
            for &g in cs.members() {
                let gm = table.elem(g as usize);
                let gs = table.apply(gm, &site.s);
                let ph = crate::phase::Phase::new(module.mu(form.h(&gs, &site.s)) as i64, module.p() as u64);
                eig_elems.push((gm.to_vec(), ph));
            }
        }
        let es: Vec<Vec<Complex64>> = (0..site.phis.len()).map(|f| site.projector(module, f)).collect();
        for (f, e) in es.iter().enumerate() {
            let mut elems = eig_elems.clone();
            for (zi, &z) in site.n_elems.iter().enumerate() {
                let zm: Vec<AElem> =
                    (0..m * m).map(|kk| if kk / m == kk % m { z } else { AElem::ZERO }).collect();
                elems.push((zm, site.eigenvalue(f, zi)));
            }
            max_eigen = max_eigen.max(eigen_defect(table, module, e, &elems));
            for e2 in &es[f + 1..] {
                let d: Complex64 = e.iter().zip(e2).map(|(a, b)| a.conj() * b).sum();
                let n1: f64 = e.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
                let n2: f64 = e2.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
                max_cross = max_cross.max(d.norm() / (n1 * n2));
            }
            if subspace {
                let basis = spin_up(table, module, e, 1e-9)?;
                if basis.len() as u64 != top[k].degree {
                    return Err(Error::Consistency(format!(
                        "subspace of dimension {} for a constituent of degree {}",
                        basis.len(),
                        top[k].degree
                    )));
                }
                max_dual = max_dual.max(trace_on_span(table, module, &basis).max_deviation(&top[k].character));
            }
            k += 1;
        }
    }
    let eig_name = if subspace { "weil.projector_eigen" } else { "weil.projector_eigen_n" };
    c.deviation(eig_name, max_eigen, tol);
    c.deviation("weil.projector_orthogonal", max_cross, tol);
    if subspace {
        c.deviation("weil.dual_path", max_dual, tol);
    } else {
        c.skipped("weil.dual_path", "|U|·dim over the subspace budget");
    }
    Ok(())
}
