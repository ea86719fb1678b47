//! Broadcast/aggregation tree over machine ids.
//!
//! Level 0 is the central machine `0`; level `l >= 1` holds ids in
//! `[f^(l-1), f^l)`. The root's children are `1..f`, every other node `i` has
//! children `i*f .. i*f + f`. Each node therefore sends at most `f` copies and
//! the depth is `ceil(log_f M)`.

use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tree {
    pub machines: usize,
    pub fanout: usize,
}

impl Tree {
    pub fn new(machines: usize, fanout: usize) -> Self {
        assert!(fanout >= 2, "fanout must be at least 2");
        assert!(machines >= 1, "at least one machine");
        Tree { machines, fanout }
    }

    pub fn depth(&self) -> usize {
        ceil_log(self.fanout, self.machines)
    }

    pub fn level(&self, id: usize) -> usize {
        ceil_log(self.fanout, id + 1)
    }

    pub fn parent(&self, id: usize) -> Option<usize> {
        match id {
            0 => None,
            i if i < self.fanout => Some(0),
            i => Some(i / self.fanout),
        }
    }

    pub fn children(&self, id: usize) -> Range<usize> {
        let (lo, hi) = if id == 0 {
            (1, self.fanout)
        } else {
            match id.checked_mul(self.fanout) {
                Some(lo) => (lo, lo.saturating_add(self.fanout)),
                None => return 0..0,
            }
        };
        lo.min(self.machines)..hi.min(self.machines)
    }
}

/// Exact `ceil(log_base(x))`; `0` when `x <= 1`.
pub fn ceil_log(base: usize, x: usize) -> usize {
    let mut depth = 0;
    let mut reach = 1usize;
    while reach < x {
        reach = reach.saturating_mul(base);
        depth += 1;
    }
    depth
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depths() {
        assert_eq!(Tree::new(9, 3).depth(), 2);
        assert_eq!(Tree::new(1, 3).depth(), 0);
        assert_eq!(Tree::new(100, 10).depth(), 2);
        assert_eq!(Tree::new(101, 10).depth(), 3);
    }

    #[test]
    fn parent_child_consistency() {
        for machines in 1..70 {
            for fanout in 2..6 {
                let t = Tree::new(machines, fanout);
                let mut seen = vec![false; machines];
                seen[0] = true;
                for id in 0..machines {
                    assert!(t.children(id).len() <= fanout);
                    for child in t.children(id) {
                        assert_eq!(t.parent(child), Some(id));
                        assert_eq!(t.level(child), t.level(id) + 1);
                        assert!(!seen[child]);
                        seen[child] = true;
                    }
                    assert!(t.level(id) <= t.depth());
                }
                assert!(seen.iter().all(|&s| s), "M={machines} f={fanout}");
            }
        }
    }
}
