//! Digraphs on taxa built from trinet collections, their sink sets, and the
//! search for a minimal cut-arc set.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::collection::TrinetCollection;
use crate::error::{Error, Result};
use crate::network::{Taxon, TaxonSet};

/// Loop-free digraph whose vertices are taxa in sorted order.
#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    taxa: Vec<Taxon>,
    adj: Vec<Vec<bool>>,
}

impl Digraph {
    pub fn empty(taxa: impl IntoIterator<Item = Taxon>) -> Self {
        let taxa: Vec<Taxon> = taxa
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let n = taxa.len();
        Digraph {
            taxa,
            adj: vec![vec![false; n]; n],
        }
    }

    pub fn taxa(&self) -> &[Taxon] {
        &self.taxa
    }

    pub fn len(&self) -> usize {
        self.taxa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taxa.is_empty()
    }

    fn index(&self, t: &str) -> Option<usize> {
        self.taxa.binary_search_by(|x| x.as_str().cmp(t)).ok()
    }

    /// Adds the arc `x -> y`. Loops and unknown taxa are ignored.
    pub fn add_arc(&mut self, x: &str, y: &str) {
        if let (Some(i), Some(j)) = (self.index(x), self.index(y)) {
            if i != j {
                self.adj[i][j] = true;
            }
        }
    }

    pub fn has_arc(&self, x: &str, y: &str) -> bool {
        matches!((self.index(x), self.index(y)), (Some(i), Some(j)) if self.adj[i][j])
    }

    pub fn arcs(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        (0..self.len()).flat_map(move |i| {
            (0..self.len())
                .filter(move |&j| self.adj[i][j])
                .map(move |j| (self.taxa[i].as_str(), self.taxa[j].as_str()))
        })
    }

    pub fn arc_count(&self) -> usize {
        self.adj
            .iter()
            .map(|r| r.iter().filter(|&&b| b).count())
            .sum()
    }

    /// Whether no arc leaves `set`.
    pub fn is_sink_set(&self, set: &TaxonSet) -> bool {
        self.arcs()
            .all(|(x, y)| !set.contains(x) || set.contains(y))
    }

    pub fn condense(&self) -> Condensation {
        let mut g = DiGraph::<(), ()>::with_capacity(self.len(), self.arc_count());
        let nodes: Vec<NodeIndex> = (0..self.len()).map(|_| g.add_node(())).collect();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if self.adj[i][j] {
                    g.add_edge(nodes[i], nodes[j], ());
                }
            }
        }
        let mut sccs: Vec<Vec<usize>> = tarjan_scc(&g)
            .into_iter()
            .map(|c| {
                let mut c: Vec<usize> = c.into_iter().map(NodeIndex::index).collect();
                c.sort_unstable();
                c
            })
            .collect();
        sccs.sort();
        let mut component_of = vec![0; self.len()];
        for (k, c) in sccs.iter().enumerate() {
            for &v in c {
                component_of[v] = k;
            }
        }
        let mut children = vec![BTreeSet::new(); sccs.len()];
        for i in 0..self.len() {
            for j in 0..self.len() {
                if self.adj[i][j] && component_of[i] != component_of[j] {
                    children[component_of[i]].insert(component_of[j]);
                }
            }
        }
        let components = sccs
            .iter()
            .map(|c| c.iter().map(|&v| self.taxa[v].clone()).collect())
            .collect();
        Condensation {
            components,
            children,
        }
    }

    /// All minimal sink sets: sink sets of at least two taxa containing no
    /// smaller such set.
    pub fn minimal_sink_sets(&self) -> BTreeSet<TaxonSet> {
        let c = self.condense();
        let closures: Vec<TaxonSet> = (0..c.len()).map(|k| c.closure(k)).collect();
        let mut candidates: Vec<TaxonSet> =
            closures.iter().filter(|s| s.len() > 1).cloned().collect();
        let singleton_sinks: Vec<&Taxon> = (0..c.len())
            .filter(|&k| closures[k].len() == 1)
            .map(|k| c.components[k].iter().next().expect("nonempty component"))
            .collect();
        for (i, a) in singleton_sinks.iter().enumerate() {
            for b in &singleton_sinks[i + 1..] {
                candidates.push([(*a).clone(), (*b).clone()].into_iter().collect());
            }
        }
        candidates
            .iter()
            .filter(|s| {
                !candidates
                    .iter()
                    .any(|w| w.len() < s.len() && w.is_subset(s))
            })
            .cloned()
            .collect()
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph")
            .field("taxa", &self.taxa)
            .field("arcs", &self.arcs().collect::<Vec<_>>())
            .finish()
    }
}

/// Strongly connected components and the acyclic digraph between them.
/// Components are ordered by their smallest taxon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condensation {
    pub components: Vec<TaxonSet>,
    pub children: Vec<BTreeSet<usize>>,
}

impl Condensation {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_sink(&self, k: usize) -> bool {
        self.children[k].is_empty()
    }

    /// Taxa of every component reachable from component `k`.
    pub fn closure(&self, k: usize) -> TaxonSet {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![k];
        seen[k] = true;
        let mut out = TaxonSet::new();
        while let Some(c) = stack.pop() {
            out.extend(self.components[c].iter().cloned());
            for &d in &self.children[c] {
                if !seen[d] {
                    seen[d] = true;
                    stack.push(d);
                }
            }
        }
        out
    }
}

/// For each ordered pair of taxa, the number of trinets (with multiplicity)
/// containing both that have a minimal cut-arc set avoiding the second.
#[derive(Debug, Clone)]
pub struct PairDeficiency {
    taxa: Vec<Taxon>,
    index: HashMap<Taxon, usize>,
    counts: Vec<Vec<usize>>,
}

impl PairDeficiency {
    pub fn taxa(&self) -> &[Taxon] {
        &self.taxa
    }

    pub fn get(&self, x: &str, y: &str) -> usize {
        match (self.index.get(x), self.index.get(y)) {
            (Some(&i), Some(&j)) => self.counts[i][j],
            _ => 0,
        }
    }

    /// Smallest value over ordered pairs of distinct taxa.
    pub fn min(&self) -> Option<usize> {
        let n = self.taxa.len();
        (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| self.counts[i][j])
            .min()
    }

    pub fn max(&self) -> usize {
        self.counts.iter().flatten().copied().max().unwrap_or(0)
    }
}

pub fn pair_deficiency(t: &TrinetCollection) -> PairDeficiency {
    let taxa: Vec<Taxon> = t.taxa().iter().cloned().collect();
    let index: HashMap<Taxon, usize> = taxa
        .iter()
        .enumerate()
        .map(|(i, x)| (x.clone(), i))
        .collect();
    let mut counts = vec![vec![0; taxa.len()]; taxa.len()];
    for e in t.trinets() {
        let sets = &e.info().minimal_cut_sets;
        if sets.is_empty() {
            continue;
        }
        for x in e.taxa() {
            for y in e.taxa() {
                if x != y && sets.iter().any(|s| !s.contains(y)) {
                    counts[index[x]][index[y]] += e.multiplicity;
                }
            }
        }
    }
    PairDeficiency {
        taxa,
        index,
        counts,
    }
}

/// The digraph with an arc `(x, y)` whenever at most `i` trinets
/// containing `x` and `y` have a minimal cut-arc set avoiding `y`.
pub fn omega(t: &TrinetCollection, i: usize) -> Digraph {
    omega_from(&pair_deficiency(t), i)
}

fn omega_from(phi: &PairDeficiency, i: usize) -> Digraph {
    let mut d = Digraph::empty(phi.taxa.iter().cloned());
    for x in &phi.taxa {
        for y in &phi.taxa {
            if x != y && phi.get(x, y) <= i {
                d.add_arc(x, y);
            }
        }
    }
    d
}

/// Arc `(x, y)` iff for every other taxon `z` some trinet on `{x, y, z}`
/// has `y` below the LSA of `x` and `z`.
pub fn closure_digraph(t: &TrinetCollection) -> Digraph {
    let taxa: Vec<Taxon> = t.taxa().iter().cloned().collect();
    let index: HashMap<&str, usize> = taxa
        .iter()
        .enumerate()
        .map(|(i, x)| (x.as_str(), i))
        .collect();
    // (min(x,z), max(x,z), y) for which the condition holds in some trinet
    let mut witnessed: HashSet<(usize, usize, usize)> = HashSet::new();
    for e in t.trinets() {
        let net = &e.network;
        let ids: Vec<usize> = e.taxa().iter().map(|x| index[x.as_str()]).collect();
        for k in 0..3 {
            let (x, z, y) = (&e.taxa()[(k + 1) % 3], &e.taxa()[(k + 2) % 3], &e.taxa()[k]);
            let Ok(lsa) = net.lsa([x.as_str(), z.as_str()]) else {
                continue;
            };
            let leaf = net.leaf(y).expect("taxon of the entry");
            if net.is_ancestor(lsa, leaf) {
                let (a, b) = (ids[(k + 1) % 3], ids[(k + 2) % 3]);
                witnessed.insert((a.min(b), a.max(b), ids[k]));
            }
        }
    }
    let mut d = Digraph::empty(taxa.iter().cloned());
    let n = taxa.len();
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let all = (0..n)
                .filter(|&z| z != x && z != y)
                .all(|z| witnessed.contains(&(x.min(z), x.max(z), y)));
            if all {
                d.add_arc(&taxa[x], &taxa[y]);
            }
        }
    }
    d
}

/// Outcome of the cut-arc set search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutArcSearch {
    pub set: TaxonSet,
    /// Threshold `i` of the digraph the set was read from.
    pub threshold: usize,
    /// Whether the set is a strongly connected minimal sink set, as opposed
    /// to a component together with its children.
    pub from_sink_component: bool,
}

fn sorted_key(s: &TaxonSet) -> (usize, Vec<&Taxon>) {
    (s.len(), s.iter().collect())
}

/// A set of taxa that is a minimal cut-arc set whenever the collection is
/// consistent with a level-2 network.
pub fn find_cut_arc_set(t: &TrinetCollection) -> Result<TaxonSet> {
    search_cut_arc_set(t).map(|s| s.set)
}

pub fn search_cut_arc_set(t: &TrinetCollection) -> Result<CutArcSearch> {
    if t.taxa().len() < 2 {
        return Err(Error::InsufficientTrinets(t.taxa().len()));
    }
    let phi = pair_deficiency(t);
    // the first threshold at which an arc appears
    let i = phi
        .min()
        .ok_or(Error::InsufficientTrinets(t.taxa().len()))?;
    let d = omega_from(&phi, i);
    let c = d.condense();
    let sink_component = (0..c.len())
        .filter(|&k| c.is_sink(k) && c.components[k].len() > 1)
        .map(|k| &c.components[k])
        .min_by(|a, b| sorted_key(a).cmp(&sorted_key(b)));
    if let Some(s) = sink_component {
        return Ok(CutArcSearch {
            set: s.clone(),
            threshold: i,
            from_sink_component: true,
        });
    }
    let fewest = (0..c.len())
        .filter(|&k| !c.is_sink(k))
        .map(|k| c.children[k].len())
        .min()
        .ok_or(Error::InsufficientTrinets(t.taxa().len()))?;
    let set = (0..c.len())
        .filter(|&k| c.children[k].len() == fewest)
        .map(|k| {
            let mut s = c.components[k].clone();
            for &ch in &c.children[k] {
                s.extend(c.components[ch].iter().cloned());
            }
            s
        })
        .min_by(|a, b| sorted_key(a).cmp(&sorted_key(b)))
        .expect("some component has children");
    Ok(CutArcSearch {
        set,
        threshold: i,
        from_sink_component: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enewick::parse;

    fn set(xs: &[&str]) -> TaxonSet {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn single(s: &str) -> TrinetCollection {
        [parse(s).unwrap()].into_iter().collect()
    }

    #[test]
    fn no_trinets_means_no_deficiency() {
        let mut t = TrinetCollection::new();
        t.insert(parse("(a,b);").unwrap());
        t.insert(parse("(b,c);").unwrap());
        let phi = pair_deficiency(&t);
        assert_eq!(phi.max(), 0);
        assert_eq!(omega(&t, 0).arc_count(), 6);
    }

    #[test]
    fn deficiency_of_a_single_tree_trinet() {
        let phi = pair_deficiency(&single("((x,y),z);"));
        let mut nonzero = Vec::new();
        for a in ["x", "y", "z"] {
            for b in ["x", "y", "z"] {
                if phi.get(a, b) > 0 {
                    nonzero.push((a, b, phi.get(a, b)));
                }
            }
        }
        assert_eq!(nonzero, vec![("x", "z", 1), ("y", "z", 1)]);
        assert_eq!(
            find_cut_arc_set(&single("((x,y),z);")).unwrap(),
            set(&["x", "y"])
        );
    }

    #[test]
    fn deficiency_counts_multiplicity() {
        let mut t = TrinetCollection::new();
        t.insert_many(parse("((x,y),z);").unwrap(), 3);
        let phi = pair_deficiency(&t);
        assert_eq!(phi.get("x", "z"), 3);
        assert_eq!(omega(&t, 0), omega(&single("((x,y),z);"), 0));
        assert!(omega(&t, 3).arc_count() == 6);
    }

    #[test]
    fn simple_trinet_gives_complete_digraph() {
        let t = single("((a,(b)#H1),(#H1,c));");
        let d = omega(&t, 0);
        assert_eq!(d.arc_count(), 6);
        assert_eq!(
            d.minimal_sink_sets(),
            [set(&["a", "b", "c"])].into_iter().collect()
        );
        assert_eq!(closure_digraph(&t), d);
    }

    #[test]
    fn two_taxa_closure_is_complete() {
        let t: TrinetCollection = [parse("(a,b);").unwrap()].into_iter().collect();
        let d = closure_digraph(&t);
        assert!(d.has_arc("a", "b") && d.has_arc("b", "a"));
    }

    #[test]
    fn acyclic_digraph_has_no_sink_components() {
        let mut d = Digraph::empty(["a", "b", "c"].map(String::from));
        d.add_arc("a", "b");
        d.add_arc("b", "c");
        let c = d.condense();
        assert_eq!(c.len(), 3);
        assert!(c.components.iter().all(|s| s.len() == 1));
        // the only sink set with two or more taxa containing c is {b, c}
        assert_eq!(
            d.minimal_sink_sets(),
            [set(&["b", "c"])].into_iter().collect()
        );
    }

    #[test]
    fn two_singleton_sinks_form_a_minimal_sink_set() {
        let mut d = Digraph::empty(["a", "b", "c"].map(String::from));
        d.add_arc("a", "b");
        d.add_arc("a", "c");
        assert_eq!(
            d.minimal_sink_sets(),
            [set(&["b", "c"])].into_iter().collect()
        );
        assert!(d.is_sink_set(&set(&["b", "c"])));
        assert!(!d.is_sink_set(&set(&["a", "b"])));
    }

    #[test]
    fn component_with_fewest_children_is_returned_with_them() {
        // every pair is deficient once in some trinet, so Omega_0 is sparse
        let mut t = TrinetCollection::new();
        for s in ["((a,b),c);", "((b,c),a);", "((c,a),b);"] {
            t.insert(parse(s).unwrap());
        }
        let r = search_cut_arc_set(&t).unwrap();
        assert_eq!(r.threshold, 1);
        assert_eq!(r.set, set(&["a", "b", "c"]));
    }

    #[test]
    fn cherry_in_a_larger_tree() {
        let n = parse("(((a,b),c),(d,e));").unwrap();
        let t = n.trinets().unwrap();
        let d = omega(&t, 0);
        assert_eq!(d, closure_digraph(&t));
        assert_eq!(d.minimal_sink_sets(), n.minimal_cut_arc_sets_or_all());
        let found = find_cut_arc_set(&t).unwrap();
        assert!(n.minimal_cut_arc_sets_or_all().contains(&found));
    }
}
