//! Persistent treap over opaque `u32` items with caller-supplied order.
//!
//! Updates copy the search path and return a new root, so every earlier
//! root stays a valid snapshot. The slab point-location structure keeps
//! one root per slab.

use std::cmp::Ordering;

pub const NIL: u32 = u32::MAX;

#[derive(Clone, Copy, Debug)]
struct Node {
    item: u32,
    prio: u32,
    left: u32,
    right: u32,
}

#[derive(Clone, Debug, Default)]
pub struct Treap {
    nodes: Vec<Node>,
}

/// Deterministic priority from the item id.
fn prio(item: u32) -> u32 {
    let mut x = item.wrapping_mul(0x9E37_79B9) ^ 0x85EB_CA6B;
    x ^= x >> 15;
    x = x.wrapping_mul(0x2C1B_3C6D);
    x ^ (x >> 12)
}

impl Treap {
    pub fn new() -> Self {
        Treap { nodes: Vec::new() }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn alloc(&mut self, n: Node) -> u32 {
        self.nodes.push(n);
        (self.nodes.len() - 1) as u32
    }

    fn with_children(&mut self, at: u32, left: u32, right: u32) -> u32 {
        let n = self.nodes[at as usize];
        self.alloc(Node { left, right, ..n })
    }

    /// Splits into items ordered before `pivot` and the rest. `before(x)`
    /// must be monotone in the tree order.
    fn split(&mut self, root: u32, before: &mut impl FnMut(u32) -> bool) -> (u32, u32) {
        if root == NIL {
            return (NIL, NIL);
        }
        let n = self.nodes[root as usize];
        if before(n.item) {
            let (l, r) = self.split(n.right, before);
            let copy = self.with_children(root, n.left, l);
            (copy, r)
        } else {
            let (l, r) = self.split(n.left, before);
            let copy = self.with_children(root, r, n.right);
            (l, copy)
        }
    }

    fn merge(&mut self, a: u32, b: u32) -> u32 {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        let (na, nb) = (self.nodes[a as usize], self.nodes[b as usize]);
        if na.prio >= nb.prio {
            let r = self.merge(na.right, b);
            self.with_children(a, na.left, r)
        } else {
            let l = self.merge(a, nb.left);
            self.with_children(b, l, nb.right)
        }
    }

    /// Inserts `item`; `cmp(x)` orders tree item `x` against `item`.
    pub fn insert(&mut self, root: u32, item: u32, mut cmp: impl FnMut(u32) -> Ordering) -> u32 {
        let (l, r) = self.split(root, &mut |x| cmp(x) == Ordering::Less);
        let node = self.alloc(Node {
            item,
            prio: prio(item),
            left: NIL,
            right: NIL,
        });
        let l = self.merge(l, node);
        self.merge(l, r)
    }

    /// Removes the item for which `cmp` returns `Equal`, if present.
    pub fn remove(&mut self, root: u32, mut cmp: impl FnMut(u32) -> Ordering) -> u32 {
        let (l, rest) = self.split(root, &mut |x| cmp(x) == Ordering::Less);
        let (_, r) = self.split(rest, &mut |x| cmp(x) != Ordering::Greater);
        self.merge(l, r)
    }

    /// First item (in tree order) with `pred(item)` true; `pred` must be
    /// monotone (false then true).
    pub fn first_where(&self, root: u32, mut pred: impl FnMut(u32) -> bool) -> Option<u32> {
        let mut at = root;
        let mut best = None;
        while at != NIL {
            let n = self.nodes[at as usize];
            if pred(n.item) {
                best = Some(n.item);
                at = n.left;
            } else {
                at = n.right;
            }
        }
        best
    }

    /// Last item with `pred(item)` false, under the same monotonicity.
    pub fn last_where_not(&self, root: u32, mut pred: impl FnMut(u32) -> bool) -> Option<u32> {
        let mut at = root;
        let mut best = None;
        while at != NIL {
            let n = self.nodes[at as usize];
            if pred(n.item) {
                at = n.left;
            } else {
                best = Some(n.item);
                at = n.right;
            }
        }
        best
    }

    pub fn items(&self, root: u32) -> Vec<u32> {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        let mut at = root;
        while at != NIL || !stack.is_empty() {
            while at != NIL {
                stack.push(at);
                at = self.nodes[at as usize].left;
            }
            let n = self.nodes[stack.pop().unwrap() as usize];
            out.push(n.item);
            at = n.right;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    proptest! {
        #[test]
        fn snapshots_match_a_sorted_set(ops in proptest::collection::vec((any::<bool>(), 0u32..64), 1..200)) {
            let mut t = Treap::new();
            let mut roots = vec![NIL];
            let mut sets = vec![BTreeSet::new()];
            for (ins, v) in ops {
                let root = *roots.last().unwrap();
                let mut s: BTreeSet<u32> = sets.last().unwrap().clone();
                let next = if ins {
                    if s.insert(v) { t.insert(root, v, |x| x.cmp(&v)) } else { root }
                } else {
                    s.remove(&v);
                    t.remove(root, |x| x.cmp(&v))
                };
                roots.push(next);
                sets.push(s);
            }
            for (r, s) in roots.iter().zip(&sets) {
                prop_assert_eq!(t.items(*r), s.iter().copied().collect::<Vec<_>>());
            }
            let last = *roots.last().unwrap();
            let s = sets.last().unwrap();
            prop_assert_eq!(t.first_where(last, |x| x >= 20), s.range(20..).next().copied());
            prop_assert_eq!(t.last_where_not(last, |x| x >= 20), s.range(..20).next_back().copied());
        }
    }
}
