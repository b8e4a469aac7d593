//! Label-preserving isomorphism by backtracking.
//!
//! Candidates for a vertex must agree on in/out degree, on the set of
//! descendant taxa and on the multiplicity of every arc from an already
//! mapped parent. Leaves are fixed by their labels.

use std::collections::HashMap;

use super::{Network, NodeId, TaxonSet};

struct Side<'a> {
    net: &'a Network,
    below: Vec<TaxonSet>,
}

impl<'a> Side<'a> {
    fn new(net: &'a Network, order: &[NodeId]) -> Self {
        let mut below = vec![TaxonSet::new(); net.node_count()];
        for &v in order.iter().rev() {
            let mut s = TaxonSet::new();
            if let Some(l) = net.label(v) {
                if net.is_leaf(v) {
                    s.insert(l.to_string());
                }
            }
            for &c in net.children(v) {
                s.extend(below[c].iter().cloned());
            }
            below[v] = s;
        }
        Side { net, below }
    }

    fn arc_count(&self, u: NodeId, v: NodeId) -> usize {
        self.net.children(u).iter().filter(|&&c| c == v).count()
    }
}

impl Network {
    /// Whether a label-preserving digraph isomorphism exists.
    pub fn isomorphic(&self, other: &Network) -> bool {
        if self.node_count() != other.node_count()
            || self.arc_count() != other.arc_count()
            || self.taxa() != other.taxa()
        {
            return false;
        }
        let (Some(order_a), Some(order_b)) = (self.topological_order(), other.topological_order())
        else {
            return false;
        };
        let a = Side::new(self, &order_a);
        let b = Side::new(other, &order_b);
        let mut map = vec![usize::MAX; self.node_count()];
        let mut used = vec![false; other.node_count()];
        let leaves_b: HashMap<&str, NodeId> = other
            .leaves()
            .collect::<Vec<_>>()
            .into_iter()
            .map(|(v, l)| (l, v))
            .collect();
        for (v, l) in self.leaves() {
            let w = leaves_b[l];
            map[v] = w;
            used[w] = true;
        }
        search(&a, &b, &order_a, 0, &mut map, &mut used)
    }
}

fn compatible(a: &Side, b: &Side, v: NodeId, w: NodeId, map: &[NodeId]) -> bool {
    let (na, nb) = (a.net, b.net);
    if na.indegree(v) != nb.indegree(w) || na.outdegree(v) != nb.outdegree(w) {
        return false;
    }
    if a.below[v] != b.below[w] {
        return false;
    }
    na.parents(v)
        .iter()
        .all(|&p| map[p] == usize::MAX || a.arc_count(p, v) == b.arc_count(map[p], w))
}

fn search(
    a: &Side,
    b: &Side,
    order: &[NodeId],
    pos: usize,
    map: &mut Vec<NodeId>,
    used: &mut Vec<bool>,
) -> bool {
    let Some(&v) = order.get(pos) else {
        return a
            .net
            .arcs()
            .all(|(u, x)| a.arc_count(u, x) == b.arc_count(map[u], map[x]));
    };
    if map[v] != usize::MAX {
        let w = map[v];
        return compatible(a, b, v, w, map) && search(a, b, order, pos + 1, map, used);
    }
    for w in 0..b.net.node_count() {
        if used[w] || !compatible(a, b, v, w, map) {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if search(a, b, order, pos + 1, map, used) {
            return true;
        }
        map[v] = usize::MAX;
        used[w] = false;
    }
    false
}
