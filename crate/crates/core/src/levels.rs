//! Best-first enumeration of the lowest values of an additive energy over
//! integer occupation labels.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

/// Energies closer than this (relative) are ordered by label instead.
pub(crate) const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Level {
    pub energy: f64,
    pub label: Vec<u32>,
}

struct Entry(Level);

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // reversed so the max-heap pops the lowest energy first
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .energy
            .total_cmp(&self.0.energy)
            .then_with(|| other.0.label.cmp(&self.0.label))
    }
}

/// The `count` lowest labels reachable from `start`.
///
/// `neighbors` must generate, for every label other than the start, at least
/// one predecessor chain from `start` along which the energy never
/// decreases; then popping in energy order yields the exact ascending list.
/// Levels within [`TIE_TOL`] of each other are emitted in label order.
pub(crate) fn lowest<E, N>(start: Vec<u32>, count: usize, energy: E, neighbors: N) -> Vec<Level>
where
    E: Fn(&[u32]) -> f64,
    N: Fn(&[u32]) -> Vec<Vec<u32>>,
{
    let mut out = Vec::with_capacity(count);
    let mut seen = HashSet::new();
    let mut heap = BinaryHeap::new();
    seen.insert(start.clone());
    heap.push(Entry(Level { energy: energy(&start), label: start }));

    while out.len() < count {
        let Some(Entry(first)) = heap.pop() else { break };
        let tol = TIE_TOL * first.energy.abs().max(1.0);
        let mut cluster = vec![first];
        let mut i = 0;
        loop {
            while i < cluster.len() {
                for next in neighbors(&cluster[i].label) {
                    if seen.insert(next.clone()) {
                        heap.push(Entry(Level { energy: energy(&next), label: next }));
                    }
                }
                i += 1;
            }
            match heap.peek() {
                Some(Entry(top)) if top.energy - cluster[0].energy <= tol => {
                    let Entry(level) = heap.pop().unwrap();
                    cluster.push(level);
                }
                _ => break,
            }
        }
        cluster.sort_by(|a, b| a.label.cmp(&b.label));
        out.extend(cluster);
    }
    out.truncate(count);
    out
}
