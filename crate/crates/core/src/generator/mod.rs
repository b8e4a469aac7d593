//! Generators of simple networks and the placement of leaves on their sides.
//!
//! Deleting the leaves of a simple network and suppressing the vertices left
//! with one parent and one child gives its underlying generator, a small
//! directed multigraph. Arcs of the generator and its childless
//! reticulations are *sides*; every leaf of the network sits on exactly one
//! side, and leaves on an arc side are ordered from tail to head.

mod catalog;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::network::{Network, NetworkBuilder, NodeId, Taxon};

pub use catalog::{catalog, CatalogEntry, CatalogId, GeneratorMatch, SymmetryClasses};

/// A side of a generator: an arc (by index) or a childless reticulation
/// (by vertex).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SideRef {
    Arc(usize),
    Reticulation(usize),
}

/// Directed multigraph with a single root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    vertex_count: usize,
    root: usize,
    arcs: Vec<(usize, usize)>,
}

impl Generator {
    pub fn new(vertex_count: usize, arcs: Vec<(usize, usize)>) -> Self {
        let mut indeg = vec![0; vertex_count];
        for &(_, v) in &arcs {
            indeg[v] += 1;
        }
        let root = (0..vertex_count).find(|&v| indeg[v] == 0).unwrap_or(0);
        Generator {
            vertex_count,
            root,
            arcs,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn indegree(&self, v: usize) -> usize {
        self.arcs.iter().filter(|a| a.1 == v).count()
    }

    pub fn outdegree(&self, v: usize) -> usize {
        self.arcs.iter().filter(|a| a.0 == v).count()
    }

    pub fn arc_multiplicity(&self, u: usize, v: usize) -> usize {
        self.arcs.iter().filter(|&&a| a == (u, v)).count()
    }

    /// Vertices of indegree 2 (all reticulations, with or without a child).
    pub fn reticulation_count(&self) -> usize {
        (0..self.vertex_count)
            .filter(|&v| self.indegree(v) == 2)
            .count()
    }

    /// Childless reticulations in vertex order.
    pub fn reticulation_sides(&self) -> Vec<usize> {
        (0..self.vertex_count)
            .filter(|&v| self.indegree(v) == 2 && self.outdegree(v) == 0)
            .collect()
    }

    /// Arc sides first, then reticulation sides.
    pub fn sides(&self) -> Vec<SideRef> {
        (0..self.arcs.len())
            .map(SideRef::Arc)
            .chain(
                self.reticulation_sides()
                    .into_iter()
                    .map(SideRef::Reticulation),
            )
            .collect()
    }

    /// Index pairs of parallel arcs.
    pub fn parallel_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.arcs.len() {
            for j in i + 1..self.arcs.len() {
                if self.arcs[i] == self.arcs[j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Vertex-degree check: root (0,2), others (1,2), (2,1) or (2,0).
    pub fn degree_violations(&self) -> Vec<usize> {
        (0..self.vertex_count)
            .filter(|&v| {
                let d = (self.indegree(v), self.outdegree(v));
                if v == self.root {
                    d != (0, 2)
                } else {
                    !matches!(d, (1, 2) | (2, 1) | (2, 0))
                }
            })
            .collect()
    }
}

/// Leaves placed on the sides of a generator.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SideAssignment {
    pub leaf_side: BTreeMap<Taxon, SideRef>,
    /// Leaves of each arc side from tail to head.
    pub side_order: BTreeMap<usize, Vec<Taxon>>,
}

impl SideAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn place_on_reticulation(&mut self, taxon: impl Into<Taxon>, vertex: usize) {
        self.leaf_side
            .insert(taxon.into(), SideRef::Reticulation(vertex));
    }

    /// Appends to the head end of an arc side.
    pub fn push_on_arc(&mut self, taxon: impl Into<Taxon>, arc: usize) {
        let t = taxon.into();
        self.leaf_side.insert(t.clone(), SideRef::Arc(arc));
        self.side_order.entry(arc).or_default().push(t);
    }

    pub fn side_of(&self, taxon: &str) -> Option<SideRef> {
        self.leaf_side.get(taxon).copied()
    }

    /// Leaf on a reticulation side.
    pub fn reticulation_leaf(&self, vertex: usize) -> Option<&str> {
        self.leaf_side
            .iter()
            .find(|(_, &s)| s == SideRef::Reticulation(vertex))
            .map(|(t, _)| t.as_str())
    }

    pub fn on_arc(&self, arc: usize) -> &[Taxon] {
        self.side_order.get(&arc).map_or(&[], Vec::as_slice)
    }
}

/// Underlying generator of a simple network with at least one reticulation,
/// and the side of every leaf.
pub fn underlying_generator(net: &Network) -> Result<(Generator, SideAssignment)> {
    if net.is_tree() {
        return Err(Error::NoGenerator);
    }
    if !net.is_simple() {
        return Err(Error::NotSimple);
    }
    let n = net.node_count();
    let inner_children = |v: NodeId| {
        net.children(v)
            .iter()
            .copied()
            .filter(|&c| !net.is_leaf(c))
            .collect::<Vec<_>>()
    };
    let kept: Vec<bool> = (0..n)
        .map(|v| !net.is_leaf(v) && !(net.indegree(v) == 1 && inner_children(v).len() == 1))
        .collect();
    let mut index = vec![usize::MAX; n];
    let mut count = 0;
    for v in 0..n {
        if kept[v] {
            index[v] = count;
            count += 1;
        }
    }
    let mut arcs = Vec::new();
    let mut assignment = SideAssignment::new();
    // which generator arc a subdivision vertex lies on
    let mut on_arc: Vec<Option<usize>> = vec![None; n];
    for u in (0..n).filter(|&u| kept[u]) {
        for c in inner_children(u) {
            let mut path = Vec::new();
            let mut cur = c;
            while !kept[cur] {
                path.push(cur);
                cur = inner_children(cur)[0];
            }
            let arc = arcs.len();
            arcs.push((index[u], index[cur]));
            for &p in &path {
                on_arc[p] = Some(arc);
                for &x in net.children(p) {
                    if net.is_leaf(x) {
                        assignment.push_on_arc(label_of(net, x)?, arc);
                    }
                }
            }
        }
    }
    for (x, label) in net.leaves() {
        if assignment.leaf_side.contains_key(label) {
            continue;
        }
        let p = net.parents(x)[0];
        if kept[p] && net.indegree(p) == 2 {
            assignment.place_on_reticulation(label, index[p]);
        } else {
            return Err(Error::NotSimple);
        }
    }
    Ok((Generator::new(count, arcs), assignment))
}

fn label_of(net: &Network, v: NodeId) -> Result<String> {
    net.label(v)
        .map(str::to_string)
        .ok_or_else(|| Error::InvalidNetwork(format!("leaf {v} has no label")))
}

/// Builds the network obtained by hanging the assigned leaves on the sides
/// of `g`.
pub fn attach(g: &Generator, assignment: &SideAssignment) -> Result<Network> {
    for r in g.reticulation_sides() {
        if assignment.reticulation_leaf(r).is_none() {
            return Err(Error::EmptyReticulationSide(format!("vertex {r}")));
        }
    }
    for (t, &s) in &assignment.leaf_side {
        let ok = match s {
            SideRef::Arc(i) => i < g.arcs().len() && assignment.on_arc(i).contains(t),
            SideRef::Reticulation(v) => g.reticulation_sides().contains(&v),
        };
        if !ok {
            return Err(Error::InvalidAssignment(format!("leaf {t} on {s:?}")));
        }
    }
    let mut b = NetworkBuilder::new();
    let verts: Vec<NodeId> = (0..g.vertex_count()).map(|_| b.add_node()).collect();
    for (i, &(u, v)) in g.arcs().iter().enumerate() {
        let mut prev = verts[u];
        for t in assignment.on_arc(i) {
            let p = b.add_node();
            let x = b.add_leaf(t.clone());
            b.add_arc(prev, p).add_arc(p, x);
            prev = p;
        }
        b.add_arc(prev, verts[v]);
    }
    for r in g.reticulation_sides() {
        let t = assignment.reticulation_leaf(r).expect("checked above");
        let x = b.add_leaf(t);
        b.add_arc(verts[r], x);
    }
    let out = b.build();
    debug_assert_eq!(out.root(), verts[g.root()]);
    Ok(out)
}

/// Whether the trinet `trinet` of the simple network `net` is crucial: it
/// has a leaf on every reticulation side of the underlying generator of
/// `net`, and on at least one side of every pair of parallel arcs.
pub fn is_crucial(net: &Network, trinet: &Network) -> Result<bool> {
    let (g, sides) = underlying_generator(net)?;
    let taxa = trinet.taxa();
    for t in &taxa {
        if !sides.leaf_side.contains_key(t) {
            return Err(Error::UnknownTaxon(t.clone()));
        }
    }
    let has = |s: SideRef| taxa.iter().any(|t| sides.side_of(t) == Some(s));
    let rets = g
        .reticulation_sides()
        .into_iter()
        .all(|r| has(SideRef::Reticulation(r)));
    let pairs = g
        .parallel_pairs()
        .into_iter()
        .all(|(i, j)| has(SideRef::Arc(i)) || has(SideRef::Arc(j)));
    Ok(rets && pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enewick::parse;

    #[test]
    fn two_leaf_blob_has_generator_one() {
        let n = parse("((x,(y)#H1),#H1);").unwrap();
        assert!(n.is_valid());
        let (g, a) = underlying_generator(&n).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.parallel_pairs().len(), 1);
        assert!(matches!(a.side_of("x"), Some(SideRef::Arc(_))));
        assert!(matches!(a.side_of("y"), Some(SideRef::Reticulation(_))));
        assert_eq!(g.identify().unwrap().id, CatalogId::G1);
        let back = attach(&g, &a).unwrap();
        assert!(back.isomorphic(&n));
    }

    #[test]
    fn trees_and_non_simple_networks_have_no_generator() {
        assert_eq!(
            underlying_generator(&parse("((a,b),c);").unwrap()).unwrap_err(),
            Error::NoGenerator
        );
        let n = parse("(((a,(b)#H1),#H1),c);").unwrap();
        assert_eq!(underlying_generator(&n).unwrap_err(), Error::NotSimple);
    }

    #[test]
    fn side_order_runs_from_tail_to_head() {
        let n = parse("(((((r)#H1,c),b),a),#H1);").unwrap();
        assert!(n.is_valid() && n.is_simple());
        let (_, a) = underlying_generator(&n).unwrap();
        let SideRef::Arc(i) = a.side_of("a").unwrap() else {
            panic!()
        };
        assert_eq!(a.on_arc(i), ["a", "b", "c"]);
    }

    #[test]
    fn attach_requires_reticulation_leaves() {
        let g = catalog::entry(CatalogId::G1).generator.clone();
        let mut a = SideAssignment::new();
        a.push_on_arc("x", 0);
        assert!(matches!(
            attach(&g, &a),
            Err(Error::EmptyReticulationSide(_))
        ));
    }

    #[test]
    fn crucial_trinets_cover_reticulations_and_parallel_pairs() {
        // a on one parallel side, b and c on the other
        let n2 = parse("((a,(r)#H1),(b,(c,#H1)));").unwrap();
        assert!(n2.is_simple());
        let t = n2.restrict(["a", "b", "r"]).unwrap();
        assert!(is_crucial(&n2, &t).unwrap());
        let t = n2.restrict(["a", "b", "c"]).unwrap();
        assert!(!is_crucial(&n2, &t).unwrap());
    }
}
