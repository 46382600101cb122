//! Suffix minimum of `D(u) = F(u) - P(c(u) + 2)` over occupied slots.
//!
//! Inserting a slot `s` shifts every `D(u)` with `u > s` by the same harvest
//! and moves its energy index up by one. For two occupied slots `a < b` the
//! gap `D(b) - D(a)` can only shrink under such shifts, because energies are
//! sorted. So each node caches its argmin together with the offset (number
//! of occupied slots before the node) at which that cache may go stale.

use super::Occupancy;
use crate::model::Slot;

const NEVER: usize = usize::MAX;

#[derive(Debug, Clone, Copy)]
struct Node {
    count: usize,
    best: Option<Slot>,
    limit: usize,
}

const EMPTY: Node = Node {
    count: 0,
    best: None,
    limit: NEVER,
};

pub(super) struct SlackTree {
    horizon: Slot,
    nodes: Vec<Node>,
}

fn shift_limit(limit: usize, by: usize) -> usize {
    if limit == NEVER {
        NEVER
    } else {
        limit.saturating_sub(by)
    }
}

impl SlackTree {
    pub fn new(horizon: Slot) -> Self {
        SlackTree {
            horizon,
            nodes: vec![EMPTY; 4 * horizon.max(1)],
        }
    }

    /// Marks `slot` occupied. `occ` must already include it.
    pub fn insert(&mut self, occ: &Occupancy, slot: Slot) {
        self.insert_at(occ, 1, 1, self.horizon, 0, slot);
    }

    /// `min D(u)` over occupied `u >= from`, or `None` if there is none.
    pub fn min_from(&mut self, occ: &Occupancy, from: Slot) -> Option<i128> {
        if from > self.horizon {
            return None;
        }
        self.query(occ, 1, 1, self.horizon, 0, from)
    }

    fn insert_at(&mut self, occ: &Occupancy, node: usize, lo: Slot, hi: Slot, off: usize, slot: Slot) {
        if lo == hi {
            self.nodes[node] = Node {
                count: 1,
                best: Some(lo),
                limit: NEVER,
            };
            return;
        }
        let mid = (lo + hi) / 2;
        let (left, right) = (2 * node, 2 * node + 1);
        if slot <= mid {
            self.insert_at(occ, left, lo, mid, off, slot);
            let right_off = off + self.nodes[left].count;
            self.ensure(occ, right, mid + 1, hi, right_off);
        } else {
            self.ensure(occ, left, lo, mid, off);
            let right_off = off + self.nodes[left].count;
            self.insert_at(occ, right, mid + 1, hi, right_off, slot);
        }
        self.pull(occ, node, off);
    }

    fn ensure(&mut self, occ: &Occupancy, node: usize, lo: Slot, hi: Slot, off: usize) {
        let current = self.nodes[node];
        if current.count == 0 || off < current.limit {
            return;
        }
        let mid = (lo + hi) / 2;
        let (left, right) = (2 * node, 2 * node + 1);
        self.ensure(occ, left, lo, mid, off);
        let right_off = off + self.nodes[left].count;
        self.ensure(occ, right, mid + 1, hi, right_off);
        self.pull(occ, node, off);
    }

    fn pull(&mut self, occ: &Occupancy, node: usize, off: usize) {
        let (left, right) = (self.nodes[2 * node], self.nodes[2 * node + 1]);
        let right_limit = shift_limit(right.limit, left.count);
        let (best, limit) = match (left.best, right.best) {
            (None, None) => (None, NEVER),
            (Some(a), None) => (Some(a), left.limit),
            (None, Some(b)) => (Some(b), right_limit),
            (Some(a), Some(b)) => {
                let children = left.limit.min(right_limit);
                let (va, vb) = (occ.slack(a), occ.slack(b));
                if vb <= va {
                    (Some(b), children)
                } else {
                    let flip = occ.crossing(a, va, b, vb).map_or(NEVER, |d| off + d);
                    (Some(a), children.min(flip))
                }
            }
        };
        self.nodes[node] = Node {
            count: left.count + right.count,
            best,
            limit,
        };
    }

    fn query(&mut self, occ: &Occupancy, node: usize, lo: Slot, hi: Slot, off: usize, from: Slot) -> Option<i128> {
        if hi < from || self.nodes[node].count == 0 {
            return None;
        }
        if lo >= from {
            self.ensure(occ, node, lo, hi, off);
            return self.nodes[node].best.map(|u| occ.slack(u));
        }
        let mid = (lo + hi) / 2;
        let (left, right) = (2 * node, 2 * node + 1);
        let right_off = off + self.nodes[left].count;
        let a = self.query(occ, left, lo, mid, off, from);
        let b = self.query(occ, right, mid + 1, hi, right_off, from);
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        }
    }
}
