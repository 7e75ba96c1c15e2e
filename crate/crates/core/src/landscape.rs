//! Exhaustive census of the cost landscape under the elementary move.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::puzzle::{Assignment, PAIRS, STATE_COUNT};

const FACTORIALS: [u64; 10] = [362_880, 40_320, 5_040, 720, 120, 24, 6, 2, 1, 1];

/// Rank of the digit sequence (canonical letter order) in lexicographic
/// order of all permutations: the identity is 0, the reversal is 10! - 1.
#[inline]
pub fn permutation_index(a: &Assignment) -> u64 {
    rank_digits(&a.digits())
}

#[inline]
fn rank_digits(digits: &[u8; 10]) -> u64 {
    let mut used = 0u16;
    let mut index = 0u64;
    for (i, &d) in digits.iter().enumerate() {
        let smaller_used = (used & ((1u16 << d) - 1)).count_ones() as u64;
        index += (u64::from(d) - smaller_used) * FACTORIALS[i];
        used |= 1 << d;
    }
    index
}

/// Inverse of [`permutation_index`].
pub fn assignment_at(index: u64) -> Result<Assignment> {
    if index >= STATE_COUNT {
        return Err(Error::IndexOutOfRange(index));
    }
    Ok(Assignment::from_digits(&unrank_digits(index)).expect("unranking yields a permutation"))
}

fn unrank_digits(mut index: u64) -> [u8; 10] {
    let mut available: Vec<u8> = (0..10).collect();
    let mut digits = [0u8; 10];
    for (i, slot) in digits.iter_mut().enumerate() {
        let q = (index / FACTORIALS[i]) as usize;
        index %= FACTORIALS[i];
        *slot = available.remove(q);
    }
    digits
}

/// An assignment none of whose 45 neighbors costs less.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Minimum {
    pub assignment: Assignment,
    pub cost: u32,
    pub index: u64,
    /// Every neighbor costs strictly more (no equal-cost neighbor).
    pub strict: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimaReport {
    pub total_states: u64,
    pub minima_count: usize,
    pub global_minima_count: usize,
    pub local_minima_count: usize,
    /// Minima that also beat every neighbor strictly.
    pub strict_minima_count: usize,
    /// Sorted by cost, then index.
    pub minima: Vec<Minimum>,
}

impl MinimaReport {
    /// Re-checks every listed minimum against its 45 neighbors and the
    /// count fields against the list.
    pub fn verify(&self) -> std::result::Result<(), String> {
        for m in &self.minima {
            if m.assignment.cost() != m.cost || permutation_index(&m.assignment) != m.index {
                return Err(format!("stale entry for {}", m.assignment));
            }
            let neighbors = m.assignment.neighbors();
            if let Some(n) = neighbors.iter().find(|n| n.cost() < m.cost) {
                return Err(format!("{} has a cheaper neighbor {n}", m.assignment));
            }
            if m.strict != neighbors.iter().all(|n| n.cost() > m.cost) {
                return Err(format!("wrong strictness flag on {}", m.assignment));
            }
        }
        let global = self.minima.iter().filter(|m| m.cost == 0).count();
        let strict = self.minima.iter().filter(|m| m.strict).count();
        if global != self.global_minima_count
            || strict != self.strict_minima_count
            || self.minima.len() != self.minima_count
            || self.minima_count != self.global_minima_count + self.local_minima_count
        {
            return Err("counts do not match the listed minima".into());
        }
        Ok(())
    }
}

const CHUNK: usize = 1 << 16;

/// Costs of all 10! assignments, indexed by [`permutation_index`].
pub fn cost_table() -> Vec<u32> {
    let mut costs = vec![0u32; STATE_COUNT as usize];
    costs
        .par_chunks_mut(CHUNK)
        .enumerate()
        .for_each(|(chunk, out)| {
            let start = (chunk * CHUNK) as u64;
            for (offset, slot) in out.iter_mut().enumerate() {
                let digits = unrank_digits(start + offset as u64);
                *slot = Assignment::from_digits(&digits).unwrap().cost();
            }
        });
    costs
}

/// Every assignment with no cheaper neighbor.
pub fn enumerate_minima() -> MinimaReport {
    let costs = cost_table();
    let found: Vec<Vec<(u64, bool)>> = (0..costs.len().div_ceil(CHUNK))
        .into_par_iter()
        .map(|chunk| {
            let lo = chunk * CHUNK;
            let hi = (lo + CHUNK).min(costs.len());
            (lo..hi)
                .filter_map(|i| classify(&costs, i as u64).map(|strict| (i as u64, strict)))
                .collect()
        })
        .collect();

    let mut minima: Vec<Minimum> = found
        .into_iter()
        .flatten()
        .map(|(index, strict)| Minimum {
            assignment: assignment_at(index).unwrap(),
            cost: costs[index as usize],
            index,
            strict,
        })
        .collect();
    minima.sort_by_key(|m| (m.cost, m.index));

    let global = minima.iter().filter(|m| m.cost == 0).count();
    MinimaReport {
        total_states: STATE_COUNT,
        minima_count: minima.len(),
        global_minima_count: global,
        local_minima_count: minima.len() - global,
        strict_minima_count: minima.iter().filter(|m| m.strict).count(),
        minima,
    }
}

/// `None` if some neighbor is cheaper, else whether all are strictly dearer.
fn classify(costs: &[u32], index: u64) -> Option<bool> {
    let own = costs[index as usize];
    let digits = unrank_digits(index);
    let mut strict = true;
    for &(x, y) in &PAIRS {
        let mut n = digits;
        n.swap(x.index(), y.index());
        let c = costs[rank_digits(&n) as usize];
        if c < own {
            return None;
        }
        strict &= c > own;
    }
    Some(strict)
}
