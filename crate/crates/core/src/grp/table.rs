//! Exhaustive enumeration of U = U_m(A) and the element table.
//!
//! Column j of a unitary matrix is a vector w with h(w, w) = r_j and
//! h(c_i, w) = 0 for the earlier columns c_i. The orthogonality conditions
//! are linear in w, and because the earlier columns are orthogonal with unit
//! lengths they can be row reduced on unit pivots. So only the free
//! coordinates are enumerated and the pivot coordinates are solved for.
//!
//! Each matrix is packed into a `u128` key, its row-major entries read as
//! digits base |A|. Keys are kept sorted, so the position of a matrix is
//! found by binary search and table order is lexicographic in the entries.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{resource, Error, Result};
use crate::gf::FieldSpec;
use crate::herm::Form;
use crate::ring::{AElem, Ring};

pub const DEFAULT_CAP: usize = 10_000_000;

const MAGIC: &str = "ramweil-group 1";

#[derive(Debug)]
pub struct GroupTable {
    form: Arc<Form>,
    keys: Vec<u128>,
    entries: Vec<AElem>,
    identity: usize,
}

/// Row reduction of the orthogonality constraints for one column.
struct Solver {
    /// For each pivot: its column, and the row coefficients on the free columns.
    pivots: Vec<(usize, Vec<AElem>)>,
    free: Vec<usize>,
}

impl Solver {
    fn new(form: &Form, cols: &[Vec<AElem>]) -> Result<Solver> {
        let a = form.ring();
        let m = form.m();
        let mut rows: Vec<Vec<AElem>> =
            cols.iter().map(|c| (0..m).map(|k| a.mul(a.conj(c[k]), form.diag()[k])).collect()).collect();
        let mut piv_cols: Vec<usize> = Vec::new();
        for i in 0..rows.len() {
            for (pi, &pc) in piv_cols.iter().enumerate() {
                let f = rows[i][pc];
                if f != AElem::ZERO {
                    for k in 0..m {
                        rows[i][k] = a.sub(rows[i][k], a.mul(f, rows[pi][k]));
                    }
                }
            }
            let k = (0..m)
                .find(|&k| !piv_cols.contains(&k) && a.is_unit(rows[i][k]))
                .ok_or_else(|| Error::Consistency("orthogonality constraints have no unit pivot".into()))?;
            let s = a.inv(rows[i][k])?;
            for c in rows[i].iter_mut() {
                *c = a.mul(s, *c);
            }
            for pi in 0..i {
                let f = rows[pi][k];
                if f != AElem::ZERO {
                    for c in 0..m {
                        rows[pi][c] = a.sub(rows[pi][c], a.mul(f, rows[i][c]));
                    }
                }
            }
            piv_cols.push(k);
        }
        let free: Vec<usize> = (0..m).filter(|k| !piv_cols.contains(k)).collect();
        let pivots = piv_cols
            .iter()
            .zip(&rows)
            .map(|(&pc, row)| (pc, free.iter().map(|&f| row[f]).collect()))
            .collect();
        Ok(Solver { pivots, free })
    }

    /// All w satisfying the constraints with h(w, w) = target.
    fn solutions(&self, form: &Form, target: AElem) -> Vec<Vec<AElem>> {
        let a = form.ring();
        let n = a.size();
        let count = n.pow(self.free.len() as u32);
        let mut out = Vec::new();
        let mut w = vec![AElem::ZERO; form.m()];
        for mut idx in 0..count {
            for &f in &self.free {
                w[f] = AElem((idx % n) as u16);
                idx /= n;
            }
            for (pc, row) in &self.pivots {
                let mut s = AElem::ZERO;
                for (&f, &c) in self.free.iter().zip(row) {
                    s = a.add(s, a.mul(c, w[f]));
                }
                w[*pc] = a.neg(s);
            }
            if form.length(&w) == target {
                out.push(w.clone());
            }
        }
        out
    }
}

impl GroupTable {
    /// Enumerates every unitary matrix; fails once more than `cap` are found.
    pub fn enumerate(form: Arc<Form>, cap: usize) -> Result<GroupTable> {
        let m = form.m();
        let n = form.ring().size() as u128;
        if n.checked_pow((m * m) as u32).is_none() {
            return resource("matrices do not fit the 128-bit key");
        }
        let first = Solver::new(&form, &[])?.solutions(&form, form.diag()[0]);
        let found = AtomicUsize::new(0);
        let over = AtomicBool::new(false);

        fn extend(
            form: &Form,
            cols: &mut Vec<Vec<AElem>>,
            out: &mut Vec<u128>,
            found: &AtomicUsize,
            over: &AtomicBool,
            cap: usize,
        ) -> Result<()> {
            let m = form.m();
            if over.load(Ordering::Relaxed) {
                return Ok(());
            }
            if cols.len() == m {
                let n = form.ring().size() as u128;
                let mut key = 0u128;
                for r in 0..m {
                    for col in cols.iter() {
                        key = key * n + col[r].index() as u128;
                    }
                }
                out.push(key);
                if found.fetch_add(1, Ordering::Relaxed) + 1 > cap {
                    over.store(true, Ordering::Relaxed);
                }
                return Ok(());
            }
            let j = cols.len();
            for w in Solver::new(form, cols)?.solutions(form, form.diag()[j]) {
                cols.push(w);
                extend(form, cols, out, found, over, cap)?;
                cols.pop();
            }
            Ok(())
        }

        let chunks: Vec<Vec<u128>> = first
            .par_iter()
            .map(|c0| {
                let mut out = Vec::new();
                let mut cols = vec![c0.clone()];
                extend(&form, &mut cols, &mut out, &found, &over, cap).map(|_| out)
            })
            .collect::<Result<_>>()?;
        if over.load(Ordering::Relaxed) {
            return resource(format!("unitary group has more than {cap} elements"));
        }
        let mut keys: Vec<u128> = chunks.into_iter().flatten().collect();
        keys.par_sort_unstable();
        GroupTable::from_sorted_keys(form, keys)
    }

    fn from_sorted_keys(form: Arc<Form>, keys: Vec<u128>) -> Result<GroupTable> {
        let m = form.m();
        let n = form.ring().size() as u128;
        let mut entries = vec![AElem::ZERO; keys.len() * m * m];
        entries.par_chunks_mut(m * m).zip(keys.par_iter()).for_each(|(e, &k)| {
            let mut k = k;
            for slot in e.iter_mut().rev() {
                *slot = AElem((k % n) as u16);
                k /= n;
            }
        });
        let mut t = GroupTable { form, keys, entries, identity: 0 };
        let id: Vec<AElem> =
            (0..m * m).map(|i| if i / m == i % m { AElem::ONE } else { AElem::ZERO }).collect();
        t.identity = t.index_of(&id).ok_or_else(|| Error::Consistency("identity missing from the table".into()))?;
        Ok(t)
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn form_arc(&self) -> &Arc<Form> {
        &self.form
    }

    pub fn ring(&self) -> &Ring {
        self.form.ring()
    }

    pub fn m(&self) -> usize {
        self.form.m()
    }

    pub fn order(&self) -> usize {
        self.keys.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// Row-major entries of element i.
    #[inline]
    pub fn elem(&self, i: usize) -> &[AElem] {
        let mm = self.m() * self.m();
        &self.entries[i * mm..(i + 1) * mm]
    }

    pub fn key_of(&self, g: &[AElem]) -> u128 {
        let n = self.ring().size() as u128;
        g.iter().fold(0u128, |k, e| k * n + e.index() as u128)
    }

    pub fn index_of(&self, g: &[AElem]) -> Option<usize> {
        self.keys.binary_search(&self.key_of(g)).ok()
    }

    #[inline]
    pub fn mul_into(&self, a: &[AElem], b: &[AElem], out: &mut [AElem]) {
        let r = self.ring();
        let m = self.m();
        for i in 0..m {
            for j in 0..m {
                let mut s = AElem::ZERO;
                for k in 0..m {
                    s = r.add(s, r.mul(a[i * m + k], b[k * m + j]));
                }
                out[i * m + j] = s;
            }
        }
    }

    pub fn mul_mat(&self, a: &[AElem], b: &[AElem]) -> Vec<AElem> {
        let mut out = vec![AElem::ZERO; a.len()];
        self.mul_into(a, b, &mut out);
        out
    }

    /// Index of the product; panics if the table is not closed.
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.index_of(&self.mul_mat(self.elem(i), self.elem(j))).expect("group table is closed")
    }

    /// g⁻¹ = G⁻¹ g* G for the Gram matrix G.
    pub fn inv_mat(&self, g: &[AElem]) -> Vec<AElem> {
        let r = self.ring();
        let m = self.m();
        let d = self.form.diag();
        let mut out = vec![AElem::ZERO; m * m];
        for i in 0..m {
            let di = r.inv(d[i]).expect("diagonal is a unit");
            for j in 0..m {
                out[i * m + j] = r.mul(r.mul(di, r.conj(g[j * m + i])), d[j]);
            }
        }
        out
    }

    pub fn inv(&self, i: usize) -> usize {
        self.index_of(&self.inv_mat(self.elem(i))).expect("group table is closed")
    }

    #[inline]
    pub fn apply_into(&self, g: &[AElem], v: &[AElem], out: &mut [AElem]) {
        let r = self.ring();
        let m = self.m();
        for i in 0..m {
            let mut s = AElem::ZERO;
            for k in 0..m {
                s = r.add(s, r.mul(g[i * m + k], v[k]));
            }
            out[i] = s;
        }
    }

    pub fn apply(&self, g: &[AElem], v: &[AElem]) -> Vec<AElem> {
        let mut out = vec![AElem::ZERO; v.len()];
        self.apply_into(g, v, &mut out);
        out
    }

    /// g* G g = G, exactly.
    pub fn is_unitary(&self, g: &[AElem]) -> bool {
        let m = self.m();
        let col = |j: usize| -> Vec<AElem> { (0..m).map(|i| g[i * m + j]).collect() };
        let cols: Vec<Vec<AElem>> = (0..m).map(col).collect();
        (0..m).all(|i| {
            (0..m).all(|j| {
                let want = if i == j { self.form.diag()[i] } else { AElem::ZERO };
                self.form.h(&cols[i], &cols[j]) == want
            })
        })
    }

    /// Maps `f` over element indices in parallel, preserving order.
    pub fn par_map<T: Send>(&self, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
        (0..self.order()).into_par_iter().with_min_len(1024).map(f).collect()
    }

    /// Writes a magic line, a JSON header line and the element encodings.
    pub fn save(&self, path: &Path) -> Result<()> {
        let f = self.ring().field().spec().clone();
        let a = self.ring();
        let header = Header {
            p: f.p,
            k: f.k,
            modulus: f.modulus,
            ell: a.ell(),
            m: self.m(),
            diag: self
                .form
                .diag()
                .iter()
                .map(|&r| (0..a.len()).step_by(2).map(|j| a.coeff(r, j).index() as u32).collect())
                .collect(),
            order: self.order(),
        };
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(w, "{MAGIC}")?;
        serde_json::to_writer(&mut w, &header).map_err(|e| Error::Format(e.to_string()))?;
        writeln!(w)?;
        let mut buf = Vec::new();
        for i in 0..self.order() {
            buf.clear();
            for &e in self.elem(i) {
                a.encode(e, &mut buf);
            }
            w.write_all(&buf)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a saved table, rechecking unitarity of every element and closure
    /// on a seeded 1% sample of products.
    pub fn load(path: &Path) -> Result<GroupTable> {
        let mut r = BufReader::new(std::fs::File::open(path)?);
        let mut line = String::new();
        r.read_line(&mut line)?;
        if line.trim_end() != MAGIC {
            return Err(Error::Format("not a group table file".into()));
        }
        line.clear();
        r.read_line(&mut line)?;
        let h: Header = serde_json::from_str(&line).map_err(|e| Error::Format(e.to_string()))?;
        let field = crate::gf::Field::new(FieldSpec::new(h.p, h.k, h.modulus.clone()))?;
        let ring = Arc::new(Ring::new(Arc::new(field), 2 * h.ell)?);
        let diag = h
            .diag
            .iter()
            .map(|c| {
                let mut coeffs = vec![crate::gf::Fq::ZERO; ring.len()];
                for (j, &x) in c.iter().enumerate() {
                    *coeffs.get_mut(2 * j).ok_or_else(|| Error::Format("diagonal entry too long".into()))? =
                        ring.field().elem(x as usize);
                }
                ring.from_coeffs(&coeffs)
            })
            .collect::<Result<Vec<_>>>()?;
        if diag.len() != h.m {
            return Err(Error::Format("header rank disagrees with the diagonal".into()));
        }
        let form = Arc::new(Form::new(ring, diag)?);
        let a = form.ring();
        let width = a.encoded_len();
        let mm = h.m * h.m;
        let mut body = Vec::new();
        r.read_to_end(&mut body)?;
        if body.len() != h.order * mm * width {
            return Err(Error::Format("body length disagrees with the header".into()));
        }
        let n = a.size() as u128;
        let mut keys = Vec::with_capacity(h.order);
        for chunk in body.chunks(mm * width) {
            let mut k = 0u128;
            for e in chunk.chunks(width) {
                k = k * n + a.decode(e)?.index() as u128;
            }
            keys.push(k);
        }
        if keys.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Format("elements are not in canonical order".into()));
        }
        let t = GroupTable::from_sorted_keys(form, keys)?;
        if !(0..t.order()).into_par_iter().all(|i| t.is_unitary(t.elem(i))) {
            return Err(Error::Consistency("loaded element is not unitary".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let samples = (t.order() / 100).max(1);
        for _ in 0..samples {
            let (i, j) = (rng.gen_range(0..t.order()), rng.gen_range(0..t.order()));
            if t.index_of(&t.mul_mat(t.elem(i), t.elem(j))).is_none() {
                return Err(Error::Consistency("loaded table is not closed".into()));
            }
        }
        Ok(t)
    }
}

#[derive(Serialize, Deserialize)]
struct Header {
    p: u32,
    k: u32,
    modulus: Vec<u32>,
    ell: usize,
    m: usize,
    diag: Vec<Vec<u32>>,
    order: usize,
}
