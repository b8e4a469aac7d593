//! Cut-arcs, biconnected components and the structural queries built on
//! them (level, cut-arc sets, simplicity).

use std::collections::BTreeSet;

use super::{Network, NodeId, TaxonSet};

/// All cut-arc sets of a network and the minimal ones among them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutArcSetReport {
    /// Descendant-leaf sets of the cut-arcs, together with the full taxon set.
    pub sets: BTreeSet<TaxonSet>,
    /// Proper cut-arc sets with more than one taxon that contain no smaller
    /// such set.
    pub minimal_sets: BTreeSet<TaxonSet>,
}

impl Network {
    /// Cut-arc flag per arc, arcs indexed in [`Network::arcs`] order.
    /// Parallel arcs are never cut-arcs.
    pub fn cut_arc_flags(&self) -> Vec<bool> {
        let arcs: Vec<(NodeId, NodeId)> = self.arcs().collect();
        let n = self.node_count();
        let mut incident: Vec<Vec<(NodeId, usize)>> = vec![Vec::new(); n];
        for (i, &(u, v)) in arcs.iter().enumerate() {
            incident[u].push((v, i));
            incident[v].push((u, i));
        }
        // Iterative bridge finding on the underlying undirected multigraph.
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut bridge = vec![false; arcs.len()];
        let mut time = 0;
        for start in 0..n {
            if disc[start] != usize::MAX {
                continue;
            }
            disc[start] = time;
            low[start] = time;
            time += 1;
            // (vertex, arc used to enter it, next incident position)
            let mut stack = vec![(start, usize::MAX, 0usize)];
            while let Some(&mut (v, via, ref mut pos)) = stack.last_mut() {
                if *pos < incident[v].len() {
                    let (w, arc) = incident[v][*pos];
                    *pos += 1;
                    if arc == via {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        disc[w] = time;
                        low[w] = time;
                        time += 1;
                        stack.push((w, arc, 0));
                    } else {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p] = low[p].min(low[v]);
                        if low[v] > disc[p] {
                            bridge[via] = true;
                        }
                    }
                }
            }
        }
        bridge
    }

    /// Cut-arcs as `(tail, head)` pairs.
    pub fn cut_arcs(&self) -> Vec<(NodeId, NodeId)> {
        self.arcs()
            .zip(self.cut_arc_flags())
            .filter(|&(_, c)| c)
            .map(|(a, _)| a)
            .collect()
    }

    /// Partition of the arcs into biconnected components. A cut-arc forms a
    /// component on its own; the other arcs are grouped by the connected
    /// components left after deleting all cut-arcs.
    pub fn biconnected_components(&self) -> Vec<Vec<(NodeId, NodeId)>> {
        let arcs: Vec<(NodeId, NodeId)> = self.arcs().collect();
        let cut = self.cut_arc_flags();
        let n = self.node_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (i, &(u, v)) in arcs.iter().enumerate() {
            if !cut[i] {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                parent[a] = b;
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<(NodeId, NodeId)>> =
            Default::default();
        let mut out = Vec::new();
        for (i, &(u, v)) in arcs.iter().enumerate() {
            if cut[i] {
                out.push(vec![(u, v)]);
            } else {
                let r = find(&mut parent, u);
                groups.entry(r).or_default().push((u, v));
            }
        }
        out.extend(groups.into_values());
        out
    }

    /// Maximum number of reticulations in a biconnected component.
    pub fn level(&self) -> usize {
        self.biconnected_components()
            .iter()
            .map(|comp| {
                let heads: BTreeSet<NodeId> = comp.iter().map(|&(_, v)| v).collect();
                heads
                    .into_iter()
                    .filter(|&v| {
                        self.is_reticulation(v)
                            && comp.iter().filter(|&&(_, h)| h == v).count() >= 2
                    })
                    .count()
            })
            .max()
            .unwrap_or(0)
    }

    pub fn is_strict_level(&self, k: usize) -> bool {
        self.level() == k
    }

    pub fn cut_arc_sets(&self) -> CutArcSetReport {
        let all = self.taxa();
        let mut sets: BTreeSet<TaxonSet> = self
            .cut_arcs()
            .into_iter()
            .map(|(_, v)| self.descendant_taxa(v))
            .collect();
        sets.insert(all.clone());
        let candidates: Vec<&TaxonSet> =
            sets.iter().filter(|s| s.len() > 1 && **s != all).collect();
        let minimal_sets = candidates
            .iter()
            .filter(|a| {
                !candidates
                    .iter()
                    .any(|b| b.len() < a.len() && b.is_subset(a))
            })
            .map(|a| (*a).clone())
            .collect();
        CutArcSetReport { sets, minimal_sets }
    }

    /// Minimal cut-arc sets where the full taxon set counts when no proper
    /// one exists. This is the notion that minimal sink sets of the closure
    /// digraph characterise.
    pub fn minimal_cut_arc_sets_or_all(&self) -> BTreeSet<TaxonSet> {
        let report = self.cut_arc_sets();
        if report.minimal_sets.is_empty() && self.leaf_count() > 1 {
            std::iter::once(self.taxa()).collect()
        } else {
            report.minimal_sets
        }
    }

    pub fn is_simple(&self) -> bool {
        self.cut_arc_sets().minimal_sets.is_empty()
    }

    pub fn is_tree(&self) -> bool {
        self.reticulation_count() == 0
    }
}

#[cfg(test)]
mod tests {
    use crate::enewick::parse;
    use crate::network::TaxonSet;

    fn set(xs: &[&str]) -> TaxonSet {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn tree_arcs_are_all_cut_arcs() {
        let n = parse("(((a,b),c),(d,e));").unwrap();
        assert!(n.cut_arc_flags().iter().all(|&c| c));
        assert!(n.biconnected_components().iter().all(|c| c.len() == 1));
        assert_eq!(n.level(), 0);
        assert!(n.is_tree());
        assert!(!n.is_simple());
    }

    #[test]
    fn cherry_is_the_only_minimal_set() {
        let n = parse("((a,b),c);").unwrap();
        let r = n.cut_arc_sets();
        assert_eq!(r.minimal_sets, [set(&["a", "b"])].into_iter().collect());
        assert!(r.sets.contains(&set(&["a", "b", "c"])));
    }

    #[test]
    fn parallel_pair_is_one_component() {
        let n = parse("(((x)#H1,#H1),y);").unwrap();
        let comps = n.biconnected_components();
        let big: Vec<_> = comps.iter().filter(|c| c.len() > 1).collect();
        assert_eq!(big.len(), 1);
        assert_eq!(big[0].len(), 2);
        assert_eq!(big[0][0], big[0][1]);
        assert_eq!(n.level(), 1);
    }

    #[test]
    fn level_one_blob_with_one_leaf_per_side() {
        let n = parse("((a,(r)#H1),(#H1,b));").unwrap();
        assert!(n.is_simple());
        assert_eq!(n.level(), 1);
        let r = n.cut_arc_sets();
        assert!(r.minimal_sets.is_empty());
        assert_eq!(r.sets.iter().filter(|s| s.len() > 1).count(), 1);
    }
}
