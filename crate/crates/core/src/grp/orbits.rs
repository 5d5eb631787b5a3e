//! Orbits of U on V and on V/iV.
//!
//! The number of orbits is small, so each one is swept out by applying every
//! group element to its first unvisited vector.

use rayon::prelude::*;

use crate::grp::table::GroupTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitDomain {
    AllV,
    /// primitive vectors
    VMinusYV,
    VMinusY2V,
    Y2V,
}

#[derive(Clone, Debug)]
pub struct OrbitReport {
    /// Orbit id of every vector, by full V index.
    pub orbit_of: Vec<u32>,
    /// First vector of each orbit, by full V index.
    pub reps: Vec<usize>,
    /// The least j with each orbit inside y^j V but not y^{j+1} V (the length for 0).
    pub depth: Vec<usize>,
}

impl OrbitReport {
    pub fn count(&self, d: OrbitDomain) -> usize {
        self.depth
            .iter()
            .filter(|&&j| match d {
                OrbitDomain::AllV => true,
                OrbitDomain::VMinusYV => j == 0,
                OrbitDomain::VMinusY2V => j < 2,
                OrbitDomain::Y2V => j >= 2,
            })
            .count()
    }

    /// K, the number of orbits of primitive vectors.
    pub fn k(&self) -> usize {
        self.count(OrbitDomain::VMinusYV)
    }

    /// L, the number of orbits in yV \ y²V.
    pub fn l(&self) -> usize {
        self.count(OrbitDomain::VMinusY2V) - self.count(OrbitDomain::VMinusYV)
    }
}

fn sweep(n: usize, image_of_orbit: impl Fn(usize) -> Vec<usize>) -> (Vec<u32>, Vec<usize>) {
    let mut orbit_of = vec![u32::MAX; n];
    let mut reps = Vec::new();
    for v in 0..n {
        if orbit_of[v] != u32::MAX {
            continue;
        }
        let id = reps.len() as u32;
        reps.push(v);
        for w in image_of_orbit(v) {
            orbit_of[w] = id;
        }
    }
    (orbit_of, reps)
}

/// The orbit partition of V.
pub fn orbits(table: &GroupTable) -> OrbitReport {
    let form = table.form();
    let (orbit_of, reps) = sweep(form.vsize(), |v| {
        let vec = form.vec_of(v);
        table.par_map(|g| form.vindex(&table.apply(table.elem(g), &vec)))
    });
    let len = table.ring().len();
    let depth = reps
        .iter()
        .map(|&r| {
            let v = form.vec_of(r);
            v.iter().map(|&c| table.ring().valuation(c)).min().unwrap_or(len)
        })
        .collect();
    OrbitReport { orbit_of, reps, depth }
}

/// Orbit ids of the transversal T under v ↦ gv mod iV.
pub fn transversal_orbits(table: &GroupTable) -> Vec<u32> {
    let form = table.form();
    sweep(form.tsize(), |t| {
        let vec = form.t_vec(t);
        (0..table.order())
            .into_par_iter()
            .with_min_len(1024)
            .map(|g| form.t_index(&table.apply(table.elem(g), &vec)))
            .collect()
    })
    .0
}
