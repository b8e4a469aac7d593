//! Restriction of a network to a subset of its taxa, and the trinet and
//! binet collections derived from it.

use crate::collection::TrinetCollection;
use crate::error::{Error, Result};
use crate::network::{Dominators, Network, NodeId};

/// Mutable multigraph used while simplifying a restriction.
struct Scratch {
    children: Vec<Vec<NodeId>>,
    parents: Vec<Vec<NodeId>>,
    alive: Vec<bool>,
    root: NodeId,
}

impl Scratch {
    fn remove_one(list: &mut Vec<NodeId>, x: NodeId) {
        let i = list.iter().position(|&y| y == x).expect("arc present");
        list.swap_remove(i);
    }

    fn merge_parallel(&mut self, v: NodeId) -> bool {
        let mut changed = false;
        let mut seen: Vec<NodeId> = Vec::with_capacity(2);
        let kids = std::mem::take(&mut self.children[v]);
        for c in kids {
            if seen.contains(&c) {
                Self::remove_one(&mut self.parents[c], v);
                changed = true;
            } else {
                seen.push(c);
            }
        }
        self.children[v] = seen;
        changed
    }

    fn suppress(&mut self, v: NodeId) {
        let p = self.parents[v][0];
        let c = self.children[v][0];
        for x in self.children[p].iter_mut() {
            if *x == v {
                *x = c;
                break;
            }
        }
        for x in self.parents[c].iter_mut() {
            if *x == v {
                *x = p;
                break;
            }
        }
        self.children[v].clear();
        self.parents[v].clear();
        self.alive[v] = false;
    }

    /// Merges parallel arcs and suppresses indegree-1 outdegree-1 vertices
    /// until neither applies; a root left with one child is contracted.
    fn simplify(&mut self) {
        loop {
            let mut changed = false;
            for v in 0..self.alive.len() {
                if !self.alive[v] {
                    continue;
                }
                changed |= self.merge_parallel(v);
                if v == self.root {
                    if self.children[v].len() == 1 {
                        let c = self.children[v][0];
                        Self::remove_one(&mut self.parents[c], v);
                        self.children[v].clear();
                        self.alive[v] = false;
                        self.root = c;
                        changed = true;
                    }
                } else if self.parents[v].len() == 1 && self.children[v].len() == 1 {
                    self.suppress(v);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }
}

/// Restriction to the given leaf vertices, reusing a dominator tree.
pub(crate) fn restrict_to_nodes(net: &Network, dom: &Dominators, leaves: &[NodeId]) -> Network {
    restrict_below(net, dom.lowest_common(leaves), leaves)
}

/// Keeps what lies on a path from `lsa` to one of `leaves`, then simplifies.
fn restrict_below(net: &Network, lsa: NodeId, leaves: &[NodeId]) -> Network {
    let below = net.descendants(lsa);
    let above = net.ancestors_of(leaves);
    let keep: Vec<bool> = (0..net.node_count())
        .map(|v| below[v] && above[v])
        .collect();
    let mut s = Scratch {
        children: vec![Vec::new(); net.node_count()],
        parents: vec![Vec::new(); net.node_count()],
        alive: keep.clone(),
        root: lsa,
    };
    for (u, v) in net.arcs() {
        if keep[u] && keep[v] {
            s.children[u].push(v);
            s.parents[v].push(u);
        }
    }
    s.simplify();
    let labels: Vec<Option<String>> = (0..net.node_count())
        .map(|v| {
            if s.alive[v] && leaves.contains(&v) {
                net.label(v).map(str::to_string)
            } else {
                None
            }
        })
        .collect();
    let root = s.root;
    let full = Network::from_children(s.children, labels);
    let out = full.compact(|v| s.alive[v]);
    debug_assert!(s.alive[root]);
    out
}

/// Whether the paths from the root to leaf `v` still pass through a
/// reticulation once everything else is removed.
pub(crate) fn reticulate_above(net: &Network, v: NodeId) -> bool {
    restrict_below(net, net.root(), &[v]).reticulation_count() > 0
}

/// Removes the lowest blob whose only leaf is `taxon`, hanging the leaf
/// directly from the blob's parent. `None` if there is no such blob.
pub(crate) fn strip_blob_above(net: &Network, taxon: &str) -> Option<Network> {
    let leaf = net.leaf(taxon)?;
    let order = net.topological_order()?;
    let lowest = order.iter().rev().copied().find(|&v| {
        net.is_reticulation(v) && net.is_ancestor(v, leaf) && net.descendant_taxa(v).len() == 1
    })?;
    let comp = net
        .biconnected_components()
        .into_iter()
        .find(|c| c.len() > 1 && c.iter().any(|&(_, h)| h == lowest))?;
    let mut inside = vec![false; net.node_count()];
    for &(u, v) in &comp {
        inside[u] = true;
        inside[v] = true;
    }
    let top =
        (0..net.node_count()).find(|&v| inside[v] && !net.parents(v).iter().any(|&p| inside[p]))?;
    if net.descendant_taxa(top).len() != 1 {
        return None;
    }
    let parent = *net.parents(top).first()?;
    let exits: Vec<(NodeId, NodeId)> = net
        .arcs()
        .filter(|&(u, v)| inside[u] && !inside[v])
        .collect();
    let [(_, below)] = exits[..] else { return None };
    let arcs = net
        .arcs()
        .filter(|&(u, v)| !inside[u] && !inside[v])
        .chain(std::iter::once((parent, below)));
    let labels = net
        .leaves()
        .map(|(v, l)| (v, l.to_string()))
        .collect::<Vec<_>>();
    let full = Network::from_arcs(net.node_count(), arcs, labels);
    Some(full.compact(|v| !inside[v]))
}

impl Network {
    /// Restriction to a set of at least two taxa: keep what lies on a path
    /// from their LSA to one of them, then simplify.
    pub fn restrict<'a, I>(&self, taxa: I) -> Result<Network>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut nodes = self.resolve_taxa(taxa)?;
        nodes.sort_unstable();
        nodes.dedup();
        if nodes.len() < 2 {
            return Err(Error::RestrictionTooSmall(nodes.len()));
        }
        Ok(restrict_to_nodes(self, &self.dominators()?, &nodes))
    }

    /// The trinets of the network: one restriction per 3-subset of taxa.
    pub fn trinets(&self) -> Result<TrinetCollection> {
        self.subset_restrictions(false)
    }

    /// Binets and trinets: restrictions to every 2- and 3-subset.
    pub fn binets_and_trinets(&self) -> Result<TrinetCollection> {
        self.subset_restrictions(true)
    }

    fn subset_restrictions(&self, with_binets: bool) -> Result<TrinetCollection> {
        let mut leaves: Vec<(&str, NodeId)> = self.leaves().map(|(v, l)| (l, v)).collect();
        leaves.sort();
        let n = leaves.len();
        if n < 3 && !(with_binets && n == 2) {
            return Err(Error::TooFewLeaves(n));
        }
        let dom = self.dominators()?;
        let mut out = TrinetCollection::new();
        for i in 0..n {
            for j in i + 1..n {
                if with_binets {
                    out.insert(restrict_to_nodes(self, &dom, &[leaves[i].1, leaves[j].1]));
                }
                for k in j + 1..n {
                    let set = [leaves[i].1, leaves[j].1, leaves[k].1];
                    out.insert(restrict_to_nodes(self, &dom, &set));
                }
            }
        }
        Ok(out)
    }
}
