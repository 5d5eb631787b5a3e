//! Reduction U → Ū over the quotient ring A/y^j.

use std::sync::Arc;

use crate::error::{domain, Error, Result};
use crate::grp::subgroup::Subgroup;
use crate::grp::table::GroupTable;
use crate::ring::AElem;

#[derive(Debug)]
pub struct QuotientData {
    pub power: usize,
    /// Ū, enumerated on its own over A/y^power.
    pub target: GroupTable,
    /// Index in `target` of the image of each element.
    pub projection: Vec<u32>,
}

impl QuotientData {
    pub fn kernel(&self) -> Subgroup {
        let id = self.target.identity() as u32;
        Subgroup::from_indices(
            self.projection.iter().enumerate().filter(|(_, &t)| t == id).map(|(i, _)| i as u32).collect(),
        )
    }

    pub fn image_size(&self) -> usize {
        let mut hit = vec![false; self.target.order()];
        for &t in &self.projection {
            hit[t as usize] = true;
        }
        hit.iter().filter(|&&h| h).count()
    }

    /// Pulls a function on Ū back to U.
    pub fn pull_back<T: Copy>(&self, values: &[T]) -> Vec<T> {
        self.projection.iter().map(|&t| values[t as usize]).collect()
    }
}

/// Reduces every element mod y^power and locates it in an independently
/// enumerated Ū; fails unless the map is onto.
pub fn reduction_map(table: &GroupTable, power: usize, cap: usize) -> Result<QuotientData> {
    let a = table.ring();
    if power == 0 || power >= a.len() {
        return domain(format!("reduction power {power} outside 1..{}", a.len()));
    }
    let target = GroupTable::enumerate(Arc::new(table.form().reduce(power)?), cap)?;
    let tr = target.ring();
    let projection = table
        .par_map(|g| {
            let img: Vec<AElem> = table.elem(g).iter().map(|&e| a.reduce_into(e, tr)).collect();
            target.index_of(&img).map(|t| t as u32)
        })
        .into_iter()
        .collect::<Option<Vec<u32>>>()
        .ok_or_else(|| Error::Consistency("reduced element is not unitary over the quotient".into()))?;
    let q = QuotientData { power, target, projection };
    if q.image_size() != q.target.order() {
        return Err(Error::Consistency(format!(
            "reduction mod y^{power} hits {} of {} elements",
            q.image_size(),
            q.target.order()
        )));
    }
    Ok(q)
}
