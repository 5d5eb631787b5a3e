//! Full decomposition of X: Top at the current level, then Bot through the
//! reduction U → Ū over A/y^{2(ℓ-1)}.
//!
//! Bot is a Weil module of Ū whose central character is a ↦ μ(−y² a) on
//! lifts. On F_q[y]/(y^{2(ℓ-1)}) that is the standard character with the scale
//! negated, so each recursion step flips the sign of the scale.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gf::Fq;
use crate::grp::chars::RootRule;
use crate::grp::quotient::reduction_map;
use crate::grp::table::{GroupTable, DEFAULT_CAP};
use crate::ring::AElem;
use crate::weil::classfn::{round_integer, ClassFunction, DEFAULT_TOL};
use crate::weil::constituent::TopSite;
use crate::weil::module::WeilModule;

#[derive(Clone, Copy, Debug)]
pub struct DecomposeOptions {
    pub tol: f64,
    pub cap: usize,
    pub root_rule: RootRule,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions { tol: DEFAULT_TOL, cap: DEFAULT_CAP, root_rule: RootRule::SmallestArgument }
    }
}

#[derive(Clone, Debug)]
pub struct Constituent {
    /// 0 for Top of X itself, k for Top of the k-th reduction.
    pub layer: usize,
    /// The representative s, over the ring of its layer; `None` for the trivial constituent.
    pub s: Option<Vec<AElem>>,
    /// R-index of h(s, s) in the ring of its layer.
    pub s_length: Option<usize>,
    pub phi_index: Option<usize>,
    pub degree: u64,
    pub character: ClassFunction,
}

/// The Top constituents at one level, with the sites they came from.
pub fn top_constituents(
    table: &GroupTable,
    module: &WeilModule,
    layer: usize,
    opts: &DecomposeOptions,
) -> Result<(Vec<TopSite>, Vec<Constituent>)> {
    let form = table.form();
    let mut sites = Vec::new();
    let mut out = Vec::new();
    for s in form.canonical_reps() {
        let site = TopSite::new(table, module, &s, opts.root_rule)?;
        for (f, chi) in site.induced_characters(table, module).into_iter().enumerate() {
            let degree = round_integer(chi.at(table.identity()), opts.tol, "character degree")?;
            if degree as usize != site.degree() {
                return Err(Error::Consistency(format!(
                    "induced character has degree {degree} but [U:B(s)] = {}",
                    site.degree()
                )));
            }
            out.push(Constituent {
                layer,
                s: Some(s.clone()),
                s_length: Some(form.ring().r_index(form.length(&s))),
                phi_index: Some(f),
                degree: degree as u64,
                character: chi,
            });
        }
        sites.push(site);
    }
    Ok((sites, out))
}

/// Constituents of Bot, as characters of `table`'s group.
pub fn bot_constituents(
    table: &GroupTable,
    scale: Fq,
    layer: usize,
    opts: &DecomposeOptions,
) -> Result<Vec<Constituent>> {
    let ell = table.form().ell();
    if ell == 1 {
        return Ok(vec![Constituent {
            layer,
            s: None,
            s_length: None,
            phi_index: None,
            degree: 1,
            character: ClassFunction::constant(table.order(), 1.0),
        }]);
    }
    let q = reduction_map(table, 2 * (ell - 1), opts.cap)?;
    let sub = decompose(&q.target, bar_scale(table, scale), layer + 1, opts)?;
    Ok(sub
        .into_iter()
        .map(|mut c| {
            c.character = ClassFunction::new(q.pull_back(&c.character.values));
            c
        })
        .collect())
}

/// The scale of the Weil type carried by Bot.
pub fn bar_scale(table: &GroupTable, scale: Fq) -> Fq {
    table.ring().field().neg(scale)
}

/// All constituents of the Weil module of type μ_scale, Top first.
pub fn decompose(table: &GroupTable, scale: Fq, layer: usize, opts: &DecomposeOptions) -> Result<Vec<Constituent>> {
    let module = WeilModule::new(Arc::clone(table.form_arc()), scale)?;
    let (_, mut out) = top_constituents(table, &module, layer, opts)?;
    out.extend(bot_constituents(table, scale, layer, opts)?);
    Ok(out)
}

/// Σ χ over constituents, valuewise.
pub fn character_sum(cs: &[Constituent], n: usize) -> ClassFunction {
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    for c in cs {
        for (a, b) in v.iter_mut().zip(&c.character.values) {
            *a += b;
        }
    }
    ClassFunction::new(v)
}
