//! Enumeration results checked against independent brute-force oracles that
//! use their own polynomial arithmetic rather than the library's tables.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_complex::Complex64;
use ramweil::grp::orbits::{orbits, OrbitDomain};
use ramweil::grp::table::DEFAULT_CAP;
use ramweil::ring::{norm_image_check, Ring};
use ramweil::weil::decompose::top_constituents;
use ramweil::{DecomposeOptions, Form, FormSpec, FormType, Fq, GroupTable, RingSpec, WeilModule};

/// F_p[y]/(y^n) with coefficient vectors, independent of `ramweil::ring`.
#[derive(Clone, Copy)]
struct Poly {
    p: i64,
    n: usize,
}

impl Poly {
    fn size(&self) -> usize {
        (self.p as usize).pow(self.n as u32)
    }
    fn from_index(&self, mut i: usize) -> Vec<i64> {
        (0..self.n)
            .map(|_| {
                let c = (i % self.p as usize) as i64;
                i /= self.p as usize;
                c
            })
            .collect()
    }
    fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| (x + y).rem_euclid(self.p)).collect()
    }
    fn mul(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut c = vec![0; self.n];
        for i in 0..self.n {
            for j in 0..self.n - i {
                c[i + j] = (c[i + j] + a[i] * b[j]).rem_euclid(self.p);
            }
        }
        c
    }
    fn conj(&self, a: &[i64]) -> Vec<i64> {
        a.iter().enumerate().map(|(j, &c)| if j % 2 == 1 { (-c).rem_euclid(self.p) } else { c }).collect()
    }
    fn zero(&self) -> Vec<i64> {
        vec![0; self.n]
    }
    fn constant(&self, c: i64) -> Vec<i64> {
        let mut v = self.zero();
        v[0] = c.rem_euclid(self.p);
        v
    }
}

/// All m×m matrices g over A with g* D g = D, as coefficient vectors.
fn brute_unitary(a: Poly, diag: &[i64]) -> Vec<Vec<Vec<i64>>> {
    let m = diag.len();
    let d: Vec<Vec<i64>> = diag.iter().map(|&r| a.constant(r)).collect();
    let total = a.size().pow((m * m) as u32);
    let mut out = Vec::new();
    for idx in 0..total {
        let mut k = idx;
        let g: Vec<Vec<i64>> = (0..m * m)
            .map(|_| {
                let e = a.from_index(k % a.size());
                k /= a.size();
                e
            })
            .collect();
        let ok = (0..m).all(|i| {
            (0..m).all(|j| {
                let mut s = a.zero();
                for k in 0..m {
                    s = a.add(&s, &a.mul(&a.mul(&a.conj(&g[k * m + i]), &d[k]), &g[k * m + j]));
                }
                s == if i == j { d[i].clone() } else { a.zero() }
            })
        });
        if ok {
            out.push(g);
        }
    }
    out
}

fn table(p: u32, ell: usize, diag: &[i64]) -> GroupTable {
    let form = Arc::new(Form::build(&FormSpec::diagonal(p, ell, diag)).unwrap());
    GroupTable::enumerate(form, DEFAULT_CAP).unwrap()
}

fn to_coeffs(ring: &Ring, g: &[ramweil::AElem]) -> Vec<Vec<i64>> {
    g.iter().map(|&e| ring.coeffs(e).iter().map(|c| c.index() as i64).collect()).collect()
}

#[test]
fn group_matches_brute_force_filter() {
    for (p, ell, diag, order) in [
        (3u32, 1usize, vec![1i64], 6usize),
        (3, 1, vec![1, -1], 108),
        (3, 1, vec![1, 1], 216),
        (3, 2, vec![1], 18),
        (5, 1, vec![1], 10),
        (3, 3, vec![1], 54),
    ] {
        let poly = Poly { p: p as i64, n: 2 * ell };
        let brute: BTreeSet<Vec<Vec<i64>>> = brute_unitary(poly, &diag).into_iter().collect();
        let t = table(p, ell, &diag);
        let ours: BTreeSet<Vec<Vec<i64>>> = (0..t.order()).map(|i| to_coeffs(t.ring(), t.elem(i))).collect();
        assert_eq!(brute.len(), order, "{p} {ell} {diag:?}");
        assert_eq!(ours, brute, "{p} {ell} {diag:?}");
    }
}

/// |O(b)| for the diagonal quadratic form b over F_p, by brute force.
fn orthogonal_order(p: i64, diag: &[i64]) -> usize {
    let m = diag.len();
    let total = (p as usize).pow((m * m) as u32);
    (0..total)
        .filter(|&idx| {
            let mut k = idx;
            let g: Vec<i64> = (0..m * m)
                .map(|_| {
                    let e = (k % p as usize) as i64;
                    k /= p as usize;
                    e
                })
                .collect();
            (0..m).all(|i| {
                (0..m).all(|j| {
                    let s: i64 = (0..m).map(|k| g[k * m + i] * diag[k] * g[k * m + j]).sum();
                    s.rem_euclid(p) == if i == j { diag[i].rem_euclid(p) } else { 0 }
                })
            })
        })
        .count()
}

#[test]
fn orders_at_level_one_factor_through_orthogonal_groups() {
    // U → O(b) is onto with kernel of order q^{m(m+1)/2} when ℓ = 1
    for (p, m, ty, expected) in [
        (3u32, 3usize, FormType::Type1, 34992usize),
        (3, 3, FormType::TypeDelta, 34992),
        (5, 2, FormType::Type1, 1000),
        (5, 2, FormType::TypeDelta, 1500),
    ] {
        let form = Form::build(&FormSpec::standard(p, 1, m, ty)).unwrap();
        let diag: Vec<i64> = form.diag().iter().map(|&r| form.ring().coeff(r, 0).index() as i64).collect();
        let o = orthogonal_order(p as i64, &diag);
        let predicted = (p as usize).pow((m * (m + 1) / 2) as u32) * o;
        assert_eq!(predicted, expected);
        let t = GroupTable::enumerate(Arc::new(form), DEFAULT_CAP).unwrap();
        assert_eq!(t.order(), expected);
    }
}

#[test]
fn orbit_counts_match_burnside() {
    for (p, ell, diag) in [(3u32, 1usize, vec![1i64]), (3, 1, vec![1, -1]), (3, 1, vec![1, 1]), (3, 2, vec![1])] {
        let t = table(p, ell, &diag);
        let poly = Poly { p: p as i64, n: 2 * ell };
        let m = diag.len();
        let vecs: Vec<Vec<Vec<i64>>> = (0..poly.size().pow(m as u32))
            .map(|mut i| {
                (0..m)
                    .map(|_| {
                        let v = poly.from_index(i % poly.size());
                        i /= poly.size();
                        v
                    })
                    .collect()
            })
            .collect();
        let mut fixed = 0usize;
        for g in 0..t.order() {
            let gm = to_coeffs(t.ring(), t.elem(g));
            for v in &vecs {
                let gv: Vec<Vec<i64>> = (0..m)
                    .map(|i| (0..m).fold(poly.zero(), |s, k| poly.add(&s, &poly.mul(&gm[i * m + k], &v[k]))))
                    .collect();
                if &gv == v {
                    fixed += 1;
                }
            }
        }
        assert_eq!(fixed % t.order(), 0);
        assert_eq!(orbits(&t).count(OrbitDomain::AllV), fixed / t.order(), "{diag:?}");
    }
}

#[test]
fn norm_image_is_unit_squares() {
    for (p, ell) in [(3u32, 1usize), (3, 2), (5, 1), (7, 1)] {
        let ring = Ring::for_spec(&RingSpec { field: ramweil::FieldSpec::prime(p), ell }).unwrap();
        let poly = Poly { p: p as i64, n: 2 * ell };
        let mut image = BTreeSet::new();
        for i in 0..poly.size() {
            let a = poly.from_index(i);
            if a[0] != 0 {
                image.insert(poly.mul(&a, &poly.conj(&a)));
            }
        }
        let mut squares = BTreeSet::new();
        for i in 0..poly.size() {
            let r = poly.from_index(i);
            if r[0] != 0 && r.iter().skip(1).step_by(2).all(|&c| c == 0) {
                squares.insert(poly.mul(&r, &r));
            }
        }
        assert_eq!(image, squares);
        let ours = norm_image_check(&ring);
        assert!(ours.holds());
        assert_eq!(ours.image.len(), squares.len());
    }
}

/// Ω(g) = Σ μ(h(gv, v)) over v ∈ T fixed mod iV, with μ(a) = exp(2πi·2a_{n−1}/p).
fn omega_oracle(t: &GroupTable) -> Vec<Complex64> {
    let form = t.form();
    let ring = t.ring();
    let p = ring.field().p() as i64;
    let n = ring.len();
    let ell = n / 2;
    let poly = Poly { p, n };
    let m = form.m();
    let diag: Vec<Vec<i64>> = form.diag().iter().map(|&r| to_coeffs(ring, &[r]).remove(0)).collect();
    let tq = (p as usize).pow(ell as u32);
    let tvecs: Vec<Vec<Vec<i64>>> = (0..tq.pow(m as u32))
        .map(|mut i| {
            (0..m)
                .map(|_| {
                    let v = poly.from_index(i % tq);
                    i /= tq;
                    v
                })
                .collect()
        })
        .collect();
    (0..t.order())
        .map(|g| {
            let gm = to_coeffs(ring, t.elem(g));
            let mut s = Complex64::new(0.0, 0.0);
            for v in &tvecs {
                let gv: Vec<Vec<i64>> = (0..m)
                    .map(|i| (0..m).fold(poly.zero(), |s, k| poly.add(&s, &poly.mul(&gm[i * m + k], &v[k]))))
                    .collect();
                if gv.iter().zip(v).all(|(a, b)| a[..ell] == b[..ell]) {
                    let h = (0..m).fold(poly.zero(), |s, i| {
                        poly.add(&s, &poly.mul(&poly.mul(&poly.conj(&gv[i]), &diag[i]), &v[i]))
                    });
                    let k = (2 * h[n - 1]).rem_euclid(p);
                    s += Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / p as f64);
                }
            }
            s
        })
        .collect()
}

#[test]
fn weil_character_matches_direct_trace() {
    for (p, ell, diag) in [(3u32, 1usize, vec![1i64]), (3, 1, vec![1, -1]), (3, 1, vec![1, 1]), (3, 2, vec![1])] {
        let t = table(p, ell, &diag);
        let w = WeilModule::new(Arc::clone(t.form_arc()), Fq::ONE).unwrap();
        let ours = w.character(&t);
        let oracle = omega_oracle(&t);
        let dev = ours.values.iter().zip(&oracle).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(dev < 1e-9, "{diag:?}: {dev}");
    }
}

#[test]
fn induced_characters_match_literal_induction() {
    for (p, ell, diag) in [(3u32, 1usize, vec![1i64, -1]), (3, 1, vec![1, 1]), (3, 2, vec![1])] {
        let t = table(p, ell, &diag);
        let form = t.form();
        let ring = t.ring();
        let w = WeilModule::new(Arc::clone(t.form_arc()), Fq::ONE).unwrap();
        let (sites, cons) = top_constituents(&t, &w, 0, &DecomposeOptions::default()).unwrap();
        let mut k = 0;
        for site in &sites {
            let s = &site.s;
            // γ(b) for b with b s ≡ z s: μ(h(z⁻¹ b s, s)) δ(z) φ(z); None off B(s)
            let gamma = |b: usize, f: usize| -> Option<Complex64> {
                let bs = t.apply(t.elem(b), s);
                let tb = form.t_index(&bs);
                let zi = site.n_elems.iter().position(|&z| form.t_index(&form.scale(z, s)) == tb)?;
                let zinv = ring.inv(site.n_elems[zi]).unwrap();
                let c = form.h(&form.scale(zinv, &bs), s);
                let ph = ramweil::Phase::new(w.mu(c) as i64, p as u64) + site.delta[zi] + site.phis[f][zi];
                Some(ph.to_complex())
            };
            let b_order = (0..t.order()).filter(|&b| gamma(b, 0).is_some()).count();
            for f in 0..site.phis.len() {
                let chi = &cons[k].character;
                for g in 0..t.order() {
                    let mut sum = Complex64::new(0.0, 0.0);
                    for x in 0..t.order() {
                        let conj = t.mul(t.mul(t.inv(x), g), x);
                        if let Some(v) = gamma(conj, f) {
                            sum += v;
                        }
                    }
                    let lit = sum / b_order as f64;
                    assert!((lit - chi.at(g)).norm() < 1e-9, "{diag:?} s={s:?} φ={f} g={g}");
                }
                k += 1;
            }
        }
    }
}
