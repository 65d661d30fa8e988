//! Bulk layout of a B-tree of minimum degree `t` over `count` sorted keys.
//!
//! The layout has minimal height, all leaves on level 0, every non-root node
//! with between `t - 1` and `2t - 1` keys, and the root with at least one key
//! (unless empty) and at least two children when internal.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayoutNode {
    /// Indices into the sorted key sequence, ascending.
    pub keys: Vec<usize>,
    pub children: Vec<usize>,
    /// Height above the leaves.
    pub level: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub nodes: Vec<LayoutNode>,
    pub root: usize,
    pub height: u32,
}

fn pow_sat(base: u128, exp: u32) -> u128 {
    base.checked_pow(exp).unwrap_or(u128::MAX)
}

/// Fewest keys a non-root subtree of height `h` can hold.
fn min_keys(t: usize, h: u32) -> u128 {
    pow_sat(t as u128, h + 1).saturating_sub(1)
}

/// Most keys any subtree of height `h` can hold.
fn max_keys(t: usize, h: u32) -> u128 {
    pow_sat(2 * t as u128, h + 1).saturating_sub(1)
}

/// Minimal height of a B-tree holding `count` keys.
pub fn min_height(count: usize, t: usize) -> u32 {
    let mut h = 0;
    while max_keys(t, h) < count as u128 {
        h += 1;
    }
    h
}

pub fn layout(count: usize, t: usize) -> Layout {
    assert!(t >= 2, "minimum degree must be at least 2");
    let height = min_height(count, t);
    let mut nodes = Vec::new();
    let root = build(&mut nodes, 0, count, height, true, t);
    Layout {
        nodes,
        root,
        height,
    }
}

fn build(nodes: &mut Vec<LayoutNode>, lo: usize, hi: usize, h: u32, root: bool, t: usize) -> usize {
    let k = hi - lo;
    if h == 0 {
        nodes.push(LayoutNode {
            keys: (lo..hi).collect(),
            children: Vec::new(),
            level: 0,
        });
        return nodes.len() - 1;
    }
    let lo_c = if root { 2 } else { t };
    let (cmin, cmax) = (min_keys(t, h - 1), max_keys(t, h - 1));
    let c = (lo_c..=2 * t)
        .find(|&c| {
            let m = (k + 1).checked_sub(c).map(|m| m as u128);
            m.is_some_and(|m| c as u128 * cmin <= m && m <= c as u128 * cmax)
        })
        .unwrap_or_else(|| panic!("no feasible fan-out for {k} keys at height {h}"));
    let m = k + 1 - c;
    let (base, extra) = (m / c, m % c);
    let mut keys = Vec::with_capacity(c - 1);
    let mut children = Vec::with_capacity(c);
    let mut at = lo;
    for j in 0..c {
        let size = base + usize::from(j < extra);
        children.push(build(nodes, at, at + size, h - 1, false, t));
        at += size;
        if j + 1 < c {
            keys.push(at);
            at += 1;
        }
    }
    debug_assert_eq!(at, hi);
    nodes.push(LayoutNode {
        keys,
        children,
        level: h,
    });
    nodes.len() - 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(l: &Layout, count: usize, t: usize) {
        let mut seen = Vec::new();
        walk(l, l.root, t, true, &mut seen);
        assert_eq!(seen, (0..count).collect::<Vec<_>>(), "in-order keys");
    }

    fn walk(l: &Layout, v: usize, t: usize, root: bool, out: &mut Vec<usize>) {
        let n = &l.nodes[v];
        if !root {
            assert!(
                n.keys.len() >= t - 1 && n.keys.len() < 2 * t,
                "key count {}",
                n.keys.len()
            );
        } else {
            assert!(n.keys.len() < 2 * t);
        }
        if n.children.is_empty() {
            assert_eq!(n.level, 0);
            out.extend(&n.keys);
            return;
        }
        assert_eq!(n.children.len(), n.keys.len() + 1);
        for (j, &c) in n.children.iter().enumerate() {
            assert_eq!(l.nodes[c].level + 1, n.level);
            walk(l, c, t, false, out);
            if j < n.keys.len() {
                out.push(n.keys[j]);
            }
        }
    }

    #[test]
    fn valid_for_many_sizes() {
        for t in [2, 3, 4, 8] {
            for count in 0..300 {
                let l = layout(count, t);
                check(&l, count, t);
                assert_eq!(l.nodes[l.root].level, l.height);
            }
        }
        let l = layout(4096, 32);
        check(&l, 4096, 32);
    }

    #[test]
    fn heights() {
        assert_eq!(layout(1, 2).height, 0);
        assert_eq!(layout(15, 2).height, 1);
        assert_eq!(layout(16, 2).height, 2);
        assert_eq!(layout(0, 2).nodes.len(), 1);
    }
}
