//! Acceptance suite: prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use ramweil::grp::orbits::{orbits, OrbitDomain};
use ramweil::grp::quotient::reduction_map;
use ramweil::grp::subgroup::{alpha_char, b_subgroup, congruence_subgroup, stabilizer_of_char};
use ramweil::grp::table::DEFAULT_CAP;
use ramweil::ring::{norm_image_check, norm_one_group};
use ramweil::weil::classfn::{inner_product_raw, ClassFunction};
use ramweil::weil::constituent::{spin_up, trace_on_span, TopSite};
use ramweil::weil::degree::{degree_case, degree_closed_form, TClass};
use ramweil::{
    decompose, DecomposeOptions, FieldSpec, Form, FormSpec, FormType, Fq, GroupTable, Ring, RingSpec, WeilModule,
};

/// Tolerance on every value that must be an integer or must vanish.
const TOL: f64 = 1e-6;
/// Wall-clock budgets per run.
const BUDGET: Duration = Duration::from_secs(60);
const BUDGET_M3: Duration = Duration::from_secs(300);
/// Tolerance for the Gram–Schmidt cut-off in the subspace path.
const SPIN_TOL: f64 = 1e-9;

struct Outcome {
    ok: bool,
    detail: String,
}

fn table(spec: &FormSpec) -> GroupTable {
    GroupTable::enumerate(Arc::new(Form::build(spec).expect("valid form")), DEFAULT_CAP).expect("enumerates")
}

fn module(t: &GroupTable, scale: Fq) -> WeilModule {
    WeilModule::new(Arc::clone(t.form_arc()), scale).expect("module")
}

struct Run {
    name: &'static str,
    expected: usize,
    constituents: usize,
    orbits_v: usize,
    orbits_top: usize,
    top_count: usize,
    omega_norm_dev: f64,
    omega_norm: f64,
    mult_dev: f64,
    cross_max: f64,
    elapsed: Duration,
    budget: Duration,
}

fn count_runs() -> Vec<Run> {
    let points: Vec<(&'static str, FormSpec, usize)> = vec![
        ("(3,1,1,type1)", FormSpec::standard(3, 1, 1, FormType::Type1), 3),
        ("(3,1,2,{1,-1})", FormSpec::diagonal(3, 1, &[1, -1]), 7),
        ("(3,1,2,{1,1})", FormSpec::diagonal(3, 1, &[1, 1]), 5),
        ("(3,2,1)", FormSpec::diagonal(3, 2, &[1]), 9),
        ("(3,1,3,type1)", FormSpec::standard(3, 1, 3, FormType::Type1), 7),
        ("(5,1,2,{1,-1})", FormSpec::diagonal(5, 1, &[1, -1]), 11),
    ];
    points
        .into_iter()
        .map(|(name, spec, expected)| {
            let start = Instant::now();
            let t = table(&spec);
            let o = orbits(&t);
            let omega = module(&t, Fq::ONE).character(&t);
            let cs = decompose(&t, Fq::ONE, 0, &DecomposeOptions::default()).expect("decomposes");
            let elapsed = start.elapsed();
            let n_orb = o.count(OrbitDomain::AllV);
            let oo = inner_product_raw(&omega, &omega);
            let mult_dev =
                cs.iter().map(|c| (inner_product_raw(&c.character, &omega) - 1.0).norm()).fold(0.0, f64::max);
            let mut cross_max = 0.0f64;
            for i in 0..cs.len() {
                for j in i + 1..cs.len() {
                    cross_max = cross_max.max(inner_product_raw(&cs[i].character, &cs[j].character).norm());
                }
            }
            Run {
                name,
                expected,
                constituents: cs.len(),
                orbits_v: n_orb,
                orbits_top: o.count(OrbitDomain::VMinusY2V),
                top_count: cs.iter().filter(|c| c.s.is_some() && c.layer == 0).count(),
                omega_norm_dev: (oo - n_orb as f64).norm(),
                omega_norm: oo.re,
                mult_dev,
                cross_max,
                elapsed,
                budget: if spec.m >= 3 { BUDGET_M3 } else { BUDGET },
            }
        })
        .collect()
}

fn criterion1(runs: &[Run]) -> Outcome {
    let ok = runs.iter().all(|r| r.constituents == r.expected && r.elapsed < r.budget);
    let detail = runs
        .iter()
        .map(|r| format!("{} {}/{} in {:.1}s", r.name, r.constituents, r.expected, r.elapsed.as_secs_f64()))
        .collect::<Vec<_>>()
        .join("; ");
    Outcome { ok, detail }
}

fn criterion2(runs: &[Run]) -> Outcome {
    let ok = runs.iter().all(|r| r.omega_norm_dev < TOL);
    let detail = runs
        .iter()
        .map(|r| format!("{} <Ω,Ω>={:.9} orbits={} dev={:.1e}", r.name, r.omega_norm, r.orbits_v, r.omega_norm_dev))
        .collect::<Vec<_>>()
        .join("; ");
    Outcome { ok, detail: format!("tol {TOL:e}: {detail}") }
}

fn criterion3(runs: &[Run]) -> Outcome {
    let mult = runs.iter().map(|r| r.mult_dev).fold(0.0, f64::max);
    let cross = runs.iter().map(|r| r.cross_max).fold(0.0, f64::max);
    Outcome {
        ok: mult < TOL && cross < TOL,
        detail: format!("max |<χ,Ω>-1| = {mult:.1e}, max |<χ,χ'>| = {cross:.1e}, tol {TOL:e}"),
    }
}

fn criterion4() -> Outcome {
    let mut ok = true;
    let mut cases = BTreeSet::new();
    let mut notes = Vec::new();
    for q in [3u32, 5] {
        for m in 1..=3usize {
            for ty in [FormType::Type1, FormType::TypeDelta] {
                let start = Instant::now();
                let t = table(&FormSpec::standard(q, 1, m, ty));
                let cs = decompose(&t, Fq::ONE, 0, &DecomposeOptions::default()).expect("decomposes");
                let form = t.form();
                let f = form.ring().field();
                let neg_one_square = f.is_square(f.from_int(-1));
                let mut sum = 0u64;
                for c in &cs {
                    sum += c.degree;
                    let Some(s) = &c.s else { continue };
                    let t0 = form.ring().coeff(form.length(s), 0);
                    let class = match (t0.is_zero(), f.is_square(t0)) {
                        (true, _) => TClass::Zero,
                        (false, true) => TClass::Square,
                        (false, false) => TClass::NonSquare,
                    };
                    let want = degree_closed_form(m, q as u64, form.form_type(), neg_one_square, class);
                    let case = degree_case(m, form.form_type(), neg_one_square, class);
                    match (want, case) {
                        (Ok(w), Ok(k)) if w == c.degree => {
                            cases.insert((q, m, k.name()));
                        }
                        (w, _) => {
                            ok = false;
                            notes.push(format!("q={q} m={m} {ty:?} t={}: got {} want {w:?}", t0.index(), c.degree));
                        }
                    }
                }
                let dim = (q as u64).pow(m as u32);
                if sum != dim {
                    ok = false;
                    notes.push(format!("q={q} m={m} {ty:?}: Σdeg {sum} ≠ {dim}"));
                }
                let budget = if m >= 3 { BUDGET_M3 } else { BUDGET };
                if start.elapsed() >= budget {
                    ok = false;
                    notes.push(format!("q={q} m={m} {ty:?}: {:.1}s over budget", start.elapsed().as_secs_f64()));
                }
            }
        }
    }
    let required = [
        (3, 3, "a2"),
        (3, 3, "b2"),
        (3, 3, "g"),
        (5, 3, "a1"),
        (5, 3, "b1"),
        (5, 3, "g"),
        (3, 2, "c"),
        (3, 2, "d"),
        (3, 2, "e"),
        (5, 2, "c"),
        (5, 2, "d"),
        (5, 2, "e"),
        (3, 1, "m1"),
        (5, 1, "m1"),
    ];
    for r in required {
        if !cases.contains(&r) {
            ok = false;
            notes.push(format!("branch {r:?} not reached"));
        }
    }
    let hit: Vec<String> = cases.iter().map(|(q, m, k)| format!("q{q}m{m}:{k}")).collect();
    Outcome { ok, detail: format!("branches {}{}", hit.join(","), if notes.is_empty() { String::new() } else { format!("; {}", notes.join("; ")) }) }
}

fn small_points() -> Vec<(&'static str, FormSpec)> {
    vec![
        ("(3,1,2,type1)", FormSpec::standard(3, 1, 2, FormType::Type1)),
        ("(3,1,2,typedelta)", FormSpec::standard(3, 1, 2, FormType::TypeDelta)),
        ("(3,2,1)", FormSpec::diagonal(3, 2, &[1])),
    ]
}

fn criterion5() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, spec) in small_points() {
        let t = table(&spec);
        let ui = congruence_subgroup(&t, t.form().ell()).expect("U(i)");
        let mu = t.ring().mu_numerators(Fq::ONE);
        let mut sizes = Vec::new();
        for s in t.form().canonical_reps() {
            let stab = stabilizer_of_char(&t, &alpha_char(&t, &ui, &s, &mu));
            let b = b_subgroup(&t, &s);
            ok &= stab == b;
            sizes.push(format!("{}={}", stab.order(), b.order()));
        }
        parts.push(format!("{name} |Stab|=|B|: {}", sizes.join(",")));
    }
    Outcome { ok, detail: parts.join("; ") }
}

fn criterion6() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut ok = true;
    for (_, spec) in small_points() {
        let t = table(&spec);
        let w = module(&t, Fq::ONE);
        for s in t.form().canonical_reps() {
            let site = TopSite::new(&t, &w, &s, ramweil::grp::chars::RootRule::SmallestArgument).expect("site");
            for (f, chi) in site.induced_characters(&t, &w).iter().enumerate() {
                let basis = spin_up(&t, &w, &site.projector(&w, f), SPIN_TOL).expect("spin up");
                ok &= basis.len() == site.degree();
                worst = worst.max(trace_on_span(&t, &w, &basis).max_deviation(chi));
                count += 1;
            }
        }
    }
    Outcome { ok: ok && worst < TOL, detail: format!("{count} constituents, max deviation {worst:.1e}, tol {TOL:e}") }
}

fn criterion7() -> Outcome {
    let t = table(&FormSpec::diagonal(3, 2, &[1]));
    let w = module(&t, Fq::ONE);
    let red = reduction_map(&t, 2, DEFAULT_CAP).expect("reduction");
    let wbar = module(&red.target, t.ring().field().neg(Fq::ONE));
    let pulled = ClassFunction::new(red.pull_back(&wbar.character(&red.target).values));
    let dev = w.bot_character(&t).max_deviation(&pulled);
    let k = congruence_subgroup(&t, 2).expect("U(y^2)");
    let omega = w.character(&t);
    let fixed: f64 = k.members().iter().map(|&g| omega.at(g as usize).re).sum::<f64>() / k.order() as f64;
    let ok = dev < TOL && (fixed - 3.0).abs() < TOL && red.target.order() == 6;
    Outcome {
        ok,
        detail: format!(
            "|Ū|={}, max |Bot − pullback| = {dev:.1e}, dim Fix U(y²) = {fixed:.9} (want 3), tol {TOL:e}",
            red.target.order()
        ),
    }
}

fn criterion8(runs: &[Run]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (p, ell) in [(3u32, 1usize), (3, 2), (5, 1), (7, 1)] {
        let ring = Ring::for_spec(&RingSpec { field: FieldSpec::prime(p), ell }).expect("ring");
        let img = norm_image_check(&ring);
        let n = norm_one_group(&ring);
        let kernel = n.iter().filter(|&&z| ring.truncate(z, ell) == ramweil::AElem::ONE).count();
        let r_cap_i = ring.r_elements().filter(|&r| ring.valuation(r) >= ell).count();
        let k3 = n.len() / kernel == 2 * r_cap_i && n.len() % kernel == 0;
        ok &= img.holds() && k3;
        parts.push(format!("(q={p},l={ell}) Q(A^x)=R^x2:{} k3 {}={}", img.holds(), n.len() / kernel, 2 * r_cap_i));
    }
    for r in runs {
        ok &= r.top_count == r.orbits_top;
        parts.push(format!("{} #Top={} orbits(V-y2V)={}", r.name, r.top_count, r.orbits_top));
    }
    Outcome { ok, detail: parts.join("; ") }
}

fn cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_ramweil")).args(args).output().expect("runs the binary");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = std::fs::read_dir(dir)
        .expect("dir")
        .map(|e| {
            let e = e.expect("entry");
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).expect("read"))
        })
        .collect();
    v.sort();
    v
}

fn criterion9() -> Outcome {
    let tmp = tempfile::tempdir().expect("tempdir");
    let (d1, d2) = (tmp.path().join("a"), tmp.path().join("b"));
    let (c1, o1) = cli(&["selftest", "--bless", d1.to_str().unwrap()]);
    let (c2, o2) = cli(&["selftest", "--bless", d2.to_str().unwrap()]);
    let selftest_same = c1 == 0 && c2 == 0 && o1 == o2 && read_dir_sorted(&d1) == read_dir_sorted(&d2);
    let mut threads_same = true;
    for form in [["--p", "3", "--ell", "1", "--m", "2", "--form", "1,-1"], ["--p", "3", "--ell", "1", "--m", "3", "--form", "type1"]] {
        let mut outs = Vec::new();
        for n in ["1", "8"] {
            let path = tmp.path().join(format!("t{n}.json"));
            let mut args = vec!["verify"];
            args.extend_from_slice(&form);
            args.extend_from_slice(&["--threads", n, "--out", path.to_str().unwrap()]);
            let (code, _) = cli(&args);
            threads_same &= code == 0;
            outs.push(std::fs::read(&path).unwrap_or_default());
        }
        threads_same &= !outs[0].is_empty() && outs[0] == outs[1];
    }
    Outcome {
        ok: selftest_same && threads_same,
        detail: format!("selftest twice identical: {selftest_same}; 1 vs 8 threads identical: {threads_same}"),
    }
}

fn main() {
    let runs = count_runs();
    let results: Vec<(usize, &str, Outcome)> = vec![
        (1, "constituent counts", criterion1(&runs)),
        (2, "<Ω,Ω> equals the orbit count", criterion2(&runs)),
        (3, "multiplicity-free and orthogonal", criterion3(&runs)),
        (4, "degrees at l=1 match the closed forms", criterion4()),
        (5, "stabilizer of α_s equals B(s)", criterion5()),
        (6, "induced and subspace characters agree", criterion6()),
        (7, "Bot is the pulled-back Weil character", criterion7()),
        (8, "norm and counting lemmas", criterion8(&runs)),
        (9, "determinism", criterion9()),
    ];
    let mut failed = 0;
    for (n, what, o) in &results {
        println!("{} criterion {n} ({what}): {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
        if !o.ok {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
