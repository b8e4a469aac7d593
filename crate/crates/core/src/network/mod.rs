//! Rooted binary phylogenetic networks.
//!
//! A [`Network`] is a directed acyclic multigraph with a single root and
//! labelled leaves. Vertex ids are plain indices and carry no meaning; every
//! result that leaves this crate is phrased in terms of taxa.
//!
//! Construction never fails. Use [`Network::validate`] to check the binary
//! network invariants.

mod blobs;
mod iso;
mod lsa;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

pub use blobs::CutArcSetReport;
pub use lsa::Dominators;

pub type NodeId = usize;
pub type Taxon = String;
pub type TaxonSet = BTreeSet<Taxon>;

/// A rooted phylogenetic network. Arcs form a multiset.
#[derive(Clone)]
pub struct Network {
    children: Vec<Vec<NodeId>>,
    parents: Vec<Vec<NodeId>>,
    labels: Vec<Option<Taxon>>,
    root: NodeId,
}

/// Incremental construction of a [`Network`].
#[derive(Debug, Default, Clone)]
pub struct NetworkBuilder {
    children: Vec<Vec<NodeId>>,
    labels: Vec<Option<Taxon>>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self) -> NodeId {
        self.children.push(Vec::new());
        self.labels.push(None);
        self.children.len() - 1
    }

    pub fn add_leaf(&mut self, label: impl Into<Taxon>) -> NodeId {
        let v = self.add_node();
        self.labels[v] = Some(label.into());
        v
    }

    pub fn add_arc(&mut self, from: NodeId, to: NodeId) -> &mut Self {
        self.children[from].push(to);
        self
    }

    pub fn set_label(&mut self, v: NodeId, label: impl Into<Taxon>) -> &mut Self {
        self.labels[v] = Some(label.into());
        self
    }

    pub fn node_count(&self) -> usize {
        self.children.len()
    }

    pub fn build(self) -> Network {
        Network::from_children(self.children, self.labels)
    }
}

/// A violated network invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoRoot,
    MultipleRoots(Vec<NodeId>),
    RootOutdegree {
        vertex: NodeId,
        outdegree: usize,
    },
    VertexDegree {
        vertex: NodeId,
        indegree: usize,
        outdegree: usize,
    },
    Cycle,
    Unreachable(NodeId),
    UnlabelledLeaf(NodeId),
    LabelledInternal(NodeId, Taxon),
    EmptyLabel(NodeId),
    DuplicateLabel(Taxon),
    ParallelArcs {
        from: NodeId,
        to: NodeId,
        count: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoRoot => write!(f, "no vertex of indegree 0"),
            Violation::MultipleRoots(v) => write!(f, "multiple vertices of indegree 0: {v:?}"),
            Violation::RootOutdegree { vertex, outdegree } => {
                write!(f, "root {vertex} has outdegree {outdegree}, expected 2")
            }
            Violation::VertexDegree {
                vertex,
                indegree,
                outdegree,
            } => write!(
                f,
                "vertex degree: vertex {vertex} has indegree {indegree} and outdegree {outdegree}"
            ),
            Violation::Cycle => write!(f, "graph contains a directed cycle"),
            Violation::Unreachable(v) => write!(f, "vertex {v} is not reachable from the root"),
            Violation::UnlabelledLeaf(v) => write!(f, "leaf {v} has no label"),
            Violation::LabelledInternal(v, l) => {
                write!(f, "internal vertex {v} carries label `{l}`")
            }
            Violation::EmptyLabel(v) => write!(f, "leaf {v} has an empty label"),
            Violation::DuplicateLabel(l) => write!(f, "label `{l}` used more than once"),
            Violation::ParallelArcs { from, to, count } => {
                write!(f, "arc ({from},{to}) occurs {count} times")
            }
        }
    }
}

impl Network {
    /// Builds a network from child lists. The root is the first vertex of
    /// indegree 0 (vertex 0 if there is none).
    pub fn from_children(children: Vec<Vec<NodeId>>, labels: Vec<Option<Taxon>>) -> Self {
        assert_eq!(children.len(), labels.len());
        let mut parents = vec![Vec::new(); children.len()];
        for (u, cs) in children.iter().enumerate() {
            for &c in cs {
                parents[c].push(u);
            }
        }
        let root = (0..children.len())
            .find(|&v| parents[v].is_empty())
            .unwrap_or(0);
        Network {
            children,
            parents,
            labels,
            root,
        }
    }

    pub fn from_arcs(
        node_count: usize,
        arcs: impl IntoIterator<Item = (NodeId, NodeId)>,
        labels: impl IntoIterator<Item = (NodeId, Taxon)>,
    ) -> Self {
        let mut children = vec![Vec::new(); node_count];
        for (u, v) in arcs {
            children[u].push(v);
        }
        let mut lab = vec![None; node_count];
        for (v, l) in labels {
            lab[v] = Some(l);
        }
        Self::from_children(children, lab)
    }

    pub fn node_count(&self) -> usize {
        self.children.len()
    }

    pub fn arc_count(&self) -> usize {
        self.children.iter().map(Vec::len).sum()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.children[v]
    }

    pub fn parents(&self, v: NodeId) -> &[NodeId] {
        &self.parents[v]
    }

    pub fn indegree(&self, v: NodeId) -> usize {
        self.parents[v].len()
    }

    pub fn outdegree(&self, v: NodeId) -> usize {
        self.children[v].len()
    }

    pub fn label(&self, v: NodeId) -> Option<&str> {
        self.labels[v].as_deref()
    }

    pub fn is_leaf(&self, v: NodeId) -> bool {
        self.children[v].is_empty()
    }

    pub fn is_reticulation(&self, v: NodeId) -> bool {
        self.parents[v].len() >= 2
    }

    pub fn reticulation_count(&self) -> usize {
        (0..self.node_count())
            .filter(|&v| self.is_reticulation(v))
            .count()
    }

    /// All arcs, parallel arcs repeated.
    pub fn arcs(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.children
            .iter()
            .enumerate()
            .flat_map(|(u, cs)| cs.iter().map(move |&c| (u, c)))
    }

    /// Labelled leaves as `(vertex, taxon)` pairs.
    pub fn leaves(&self) -> impl Iterator<Item = (NodeId, &str)> + '_ {
        (0..self.node_count())
            .filter(|&v| self.is_leaf(v))
            .filter_map(|v| self.label(v).map(|l| (v, l)))
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves().count()
    }

    pub fn taxa(&self) -> TaxonSet {
        self.leaves().map(|(_, l)| l.to_string()).collect()
    }

    pub fn leaf(&self, taxon: &str) -> Option<NodeId> {
        self.leaves().find(|&(_, l)| l == taxon).map(|(v, _)| v)
    }

    pub(crate) fn leaf_index(&self) -> HashMap<&str, NodeId> {
        self.leaves().map(|(v, l)| (l, v)).collect()
    }

    pub(crate) fn resolve_taxa<'a, I>(&self, taxa: I) -> Result<Vec<NodeId>>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let index = self.leaf_index();
        taxa.into_iter()
            .map(|t| {
                index
                    .get(t)
                    .copied()
                    .ok_or_else(|| Error::UnknownTaxon(t.to_string()))
            })
            .collect()
    }

    /// Vertices in topological order (parents first). `None` if the graph has
    /// a cycle.
    pub fn topological_order(&self) -> Option<Vec<NodeId>> {
        let n = self.node_count();
        let mut indeg: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut stack: Vec<NodeId> = (0..n).filter(|&v| indeg[v] == 0).rev().collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = stack.pop() {
            order.push(v);
            for &c in self.children[v].iter().rev() {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    stack.push(c);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Vertices reachable from `v`, including `v`.
    pub fn descendants(&self, v: NodeId) -> Vec<bool> {
        let mut seen = vec![false; self.node_count()];
        let mut stack = vec![v];
        seen[v] = true;
        while let Some(u) = stack.pop() {
            for &c in &self.children[u] {
                if !seen[c] {
                    seen[c] = true;
                    stack.push(c);
                }
            }
        }
        seen
    }

    /// Vertices from which some vertex in `targets` is reachable.
    pub fn ancestors_of(&self, targets: &[NodeId]) -> Vec<bool> {
        let mut seen = vec![false; self.node_count()];
        let mut stack = Vec::new();
        for &t in targets {
            if !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
        while let Some(u) = stack.pop() {
            for &p in &self.parents[u] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// Taxa of the leaves below `v`.
    pub fn descendant_taxa(&self, v: NodeId) -> TaxonSet {
        let reach = self.descendants(v);
        self.leaves()
            .filter(|&(u, _)| reach[u])
            .map(|(_, l)| l.to_string())
            .collect()
    }

    /// Whether `u` is an ancestor of `v` (a vertex is its own ancestor).
    pub fn is_ancestor(&self, u: NodeId, v: NodeId) -> bool {
        self.descendants(u)[v]
    }

    /// Checks every binary network invariant except recoverability.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.node_count();
        if n == 0 {
            out.push(Violation::NoRoot);
            return out;
        }
        let roots: Vec<NodeId> = (0..n).filter(|&v| self.parents[v].is_empty()).collect();
        match roots.len() {
            0 => out.push(Violation::NoRoot),
            1 => {
                let r = roots[0];
                if self.outdegree(r) != 2 {
                    out.push(Violation::RootOutdegree {
                        vertex: r,
                        outdegree: self.outdegree(r),
                    });
                }
            }
            _ => out.push(Violation::MultipleRoots(roots.clone())),
        }
        for v in 0..n {
            let (i, o) = (self.indegree(v), self.outdegree(v));
            if i == 0 {
                continue;
            }
            if !matches!((i, o), (1, 2) | (2, 1) | (1, 0)) {
                out.push(Violation::VertexDegree {
                    vertex: v,
                    indegree: i,
                    outdegree: o,
                });
            }
        }
        if self.topological_order().is_none() {
            out.push(Violation::Cycle);
        } else if roots.len() == 1 {
            let reach = self.descendants(roots[0]);
            out.extend((0..n).filter(|&v| !reach[v]).map(Violation::Unreachable));
        }
        let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
        for v in 0..n {
            match (self.is_leaf(v), self.label(v)) {
                (true, None) => out.push(Violation::UnlabelledLeaf(v)),
                (true, Some("")) => out.push(Violation::EmptyLabel(v)),
                (true, Some(l)) => *seen.entry(l).or_default() += 1,
                (false, Some(l)) => out.push(Violation::LabelledInternal(v, l.to_string())),
                (false, None) => {}
            }
        }
        out.extend(
            seen.into_iter()
                .filter(|&(_, c)| c > 1)
                .map(|(l, _)| Violation::DuplicateLabel(l.to_string())),
        );
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Arcs occurring more than once.
    pub fn parallel_arcs(&self) -> Vec<Violation> {
        let mut counts: BTreeMap<(NodeId, NodeId), usize> = BTreeMap::new();
        for a in self.arcs() {
            *counts.entry(a).or_default() += 1;
        }
        counts
            .into_iter()
            .filter(|&(_, c)| c > 1)
            .map(|((from, to), count)| Violation::ParallelArcs { from, to, count })
            .collect()
    }

    /// A copy with leaf `from` renamed to `to`.
    pub fn relabel(&self, from: &str, to: &str) -> Result<Network> {
        let v = self
            .leaf(from)
            .ok_or_else(|| Error::UnknownTaxon(from.to_string()))?;
        let mut out = self.clone();
        out.labels[v] = Some(to.to_string());
        Ok(out)
    }

    /// Replaces leaf `taxon` by the whole of `other`, identifying the leaf
    /// with the root of `other`.
    pub fn graft(&self, taxon: &str, other: &Network) -> Result<Network> {
        let leaf = self
            .leaf(taxon)
            .ok_or_else(|| Error::NotALeaf(taxon.to_string()))?;
        let mine = self.taxa();
        if let Some(t) = other
            .taxa()
            .into_iter()
            .find(|t| t != taxon && mine.contains(t))
        {
            return Err(Error::LabelCollision(t));
        }
        let offset = self.node_count();
        let mut children = self.children.clone();
        let mut labels = self.labels.clone();
        children.extend(
            other
                .children
                .iter()
                .map(|cs| cs.iter().map(|&c| c + offset).collect::<Vec<_>>()),
        );
        labels.extend(other.labels.iter().cloned());
        let new_root = other.root + offset;
        for cs in children.iter_mut() {
            for c in cs.iter_mut() {
                if *c == leaf {
                    *c = new_root;
                }
            }
        }
        children[leaf].clear();
        labels[leaf] = None;
        Ok(Network::from_children(children, labels).compact(|v| v != leaf))
    }

    /// Keeps the vertices selected by `keep`, renumbering densely. The root
    /// is recomputed.
    pub(crate) fn compact(&self, keep: impl Fn(NodeId) -> bool) -> Network {
        let mut map = vec![usize::MAX; self.node_count()];
        let mut next = 0;
        for (v, slot) in map.iter_mut().enumerate() {
            if keep(v) {
                *slot = next;
                next += 1;
            }
        }
        let mut children = vec![Vec::new(); next];
        let mut labels = vec![None; next];
        for v in 0..self.node_count() {
            if map[v] == usize::MAX {
                continue;
            }
            children[map[v]] = self.children[v]
                .iter()
                .filter(|&&c| map[c] != usize::MAX)
                .map(|&c| map[c])
                .collect();
            labels[map[v]] = self.labels[v].clone();
        }
        Network::from_children(children, labels)
    }
}

impl fmt::Debug for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::enewick::write(self))
    }
}

impl fmt::Display for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::enewick::write(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enewick::parse;

    #[test]
    fn three_leaf_tree_is_valid() {
        let n = parse("((a,b),c);").unwrap();
        assert!(n.validate().is_empty());
        assert_eq!(n.leaf_count(), 3);
    }

    #[test]
    fn degree_four_vertex_is_reported() {
        let mut b = NetworkBuilder::new();
        let r = b.add_node();
        let u = b.add_node();
        let w = b.add_leaf("w");
        b.add_arc(r, u).add_arc(r, w);
        for name in ["a", "b", "c"] {
            let l = b.add_leaf(name);
            b.add_arc(u, l);
        }
        let diag = b.build().validate();
        assert_eq!(diag.len(), 1);
        assert!(diag[0].to_string().contains("vertex degree"));
    }

    #[test]
    fn duplicate_labels_and_cycles_are_reported() {
        let n = Network::from_arcs(
            3,
            [(0, 1), (0, 2)],
            [(1, "a".to_string()), (2, "a".to_string())],
        );
        assert_eq!(n.validate(), vec![Violation::DuplicateLabel("a".into())]);

        let c = Network::from_arcs(4, [(0, 1), (0, 3), (1, 2), (2, 1)], [(3, "x".into())]);
        assert!(c.validate().contains(&Violation::Cycle));
    }

    #[test]
    fn graft_replaces_leaf_by_root() {
        let star = parse("(astar,z);").unwrap();
        let cherry = parse("(x,y);").unwrap();
        let g = star.graft("astar", &cherry).unwrap();
        assert!(g.is_valid());
        assert!(g.isomorphic(&parse("((x,y),z);").unwrap()));
        assert!(matches!(
            star.graft("astar", &parse("(z,q);").unwrap()),
            Err(Error::LabelCollision(_))
        ));
    }
}
