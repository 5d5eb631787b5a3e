//! Linear characters of small abelian groups.
//!
//! A character is extended from a subgroup H by adjoining one generator at a
//! time. The next generator is an element of largest order relative to the
//! current H, taking the lowest index on ties. If g has relative order n then
//! g^n ∈ H, and χ(g) can be any n-th root of χ(g^n). The choice of root is the
//! only freedom, and a `RootRule` fixes it. Generator choice depends only on
//! H, so the tower is the same for every character extended from H.

use crate::error::{domain, Result};
use crate::grp::subgroup::Subgroup;
use crate::grp::table::GroupTable;
use crate::phase::Phase;

/// A finite abelian group given by its Cayley table on 0..n.
#[derive(Clone, Debug)]
pub struct FiniteAbelian {
    n: usize,
    cayley: Vec<u32>,
    identity: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootRule {
    /// The root of smallest argument in [0, 2π).
    SmallestArgument,
    /// The root of largest argument in [0, 2π).
    LargestArgument,
}

impl FiniteAbelian {
    pub fn new(n: usize, mul: impl Fn(usize, usize) -> usize) -> Result<FiniteAbelian> {
        let mut cayley = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                cayley[a * n + b] = mul(a, b) as u32;
            }
        }
        if (0..n).any(|a| (0..a).any(|b| cayley[a * n + b] != cayley[b * n + a])) {
            return domain("group is not abelian");
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| cayley[e * n + a] as usize == a))
            .ok_or_else(|| crate::Error::Domain("no identity".into()))?;
        Ok(FiniteAbelian { n, cayley, identity })
    }

    /// The subgroup as an abstract group; element k is the k-th member.
    pub fn from_subgroup(table: &GroupTable, s: &Subgroup) -> Result<FiniteAbelian> {
        let mem = s.members();
        FiniteAbelian::new(s.order(), |a, b| {
            s.position(table.mul(mem[a] as usize, mem[b] as usize)).expect("subgroup is closed")
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.cayley[a * self.n + b] as usize
    }

    pub fn pow(&self, a: usize, e: u64) -> usize {
        (0..e).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn is_character(&self, values: &[Phase]) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| values[self.mul(a, b)] == values[a] + values[b]))
    }

    fn check_subgroup(&self, mask: &[bool]) -> Result<()> {
        if mask.len() != self.n || !mask[self.identity] {
            return domain("subgroup mask must cover the identity");
        }
        for a in (0..self.n).filter(|&a| mask[a]) {
            for b in (0..self.n).filter(|&b| mask[b]) {
                if !mask[self.mul(a, b)] {
                    return domain("mask is not a subgroup");
                }
            }
        }
        Ok(())
    }

    /// Extends a character of the subgroup `mask`, choosing the k-th root at
    /// each adjoined generator with `choose(step, n)`.
    pub fn extend_with(
        &self,
        mask: &[bool],
        values: &[Phase],
        mut choose: impl FnMut(usize, u64) -> u64,
    ) -> Result<Vec<Phase>> {
        self.check_subgroup(mask)?;
        let mut val: Vec<Option<Phase>> = (0..self.n).map(|a| mask[a].then(|| values[a])).collect();
        for a in (0..self.n).filter(|&a| mask[a]) {
            for b in (0..self.n).filter(|&b| mask[b]) {
                if val[self.mul(a, b)] != Some(values[a] + values[b]) {
                    return domain("values are not multiplicative on the subgroup");
                }
            }
        }
        let mut step = 0;
        loop {
            let in_h: Vec<usize> = (0..self.n).filter(|&a| val[a].is_some()).collect();
            if in_h.len() == self.n {
                break;
            }
            let rel_order = |g: usize| -> u64 {
                let mut x = g;
                let mut k = 1;
                while val[x].is_none() {
                    x = self.mul(x, g);
                    k += 1;
                }
                k
            };
            let (g, n) = (0..self.n)
                .filter(|&g| val[g].is_none())
                .map(|g| (g, rel_order(g)))
                .fold((usize::MAX, 0), |best, c| if c.1 > best.1 { c } else { best });
            let base = val[self.pow(g, n)].expect("g^n lies in H");
            let root = base.root(n, choose(step, n));
            let mut gp = self.identity;
            let mut gp_val = Phase::ONE;
            for _ in 1..n {
                gp = self.mul(gp, g);
                gp_val += root;
                for &h in &in_h {
                    val[self.mul(h, gp)] = Some(val[h].expect("h in H") + gp_val);
                }
            }
            step += 1;
        }
        Ok(val.into_iter().map(|v| v.expect("all assigned")).collect())
    }

    pub fn extend(&self, mask: &[bool], values: &[Phase], rule: RootRule) -> Result<Vec<Phase>> {
        self.extend_with(mask, values, |_, n| match rule {
            RootRule::SmallestArgument => 0,
            RootRule::LargestArgument => n - 1,
        })
    }

    /// Relative orders of the generators adjoined when extending from `mask`.
    pub fn tower_orders(&self, mask: &[bool]) -> Result<Vec<u64>> {
        let mut orders = Vec::new();
        self.extend_with(mask, &vec![Phase::ONE; self.n], |_, n| {
            orders.push(n);
            0
        })?;
        Ok(orders)
    }

    /// All characters trivial on the subgroup `kernel`, in lexicographic order
    /// of the root choices; the first is trivial.
    pub fn characters_trivial_on(&self, kernel: &[bool]) -> Result<Vec<Vec<Phase>>> {
        let orders = self.tower_orders(kernel)?;
        let total: u64 = orders.iter().product();
        let ones = vec![Phase::ONE; self.n];
        (0..total)
            .map(|mut idx| {
                let mut digits = vec![0u64; orders.len()];
                for (d, &n) in digits.iter_mut().zip(&orders).rev() {
                    *d = idx % n;
                    idx /= n;
                }
                self.extend_with(kernel, &ones, |step, _| digits[step])
            })
            .collect()
    }
}
