//! Lowest stable ancestors through the dominator tree.
//!
//! `v` lies on every root-to-`a` path exactly when `v` dominates `a`. The
//! vertices on every root path of every `a` in `A` are therefore the common
//! dominators of `A`, which form a chain in the dominator tree; the lowest
//! one is the tree LCA.

use super::{Network, NodeId};
use crate::error::{Error, Result};

/// Dominator tree of an acyclic network.
#[derive(Debug, Clone)]
pub struct Dominators {
    idom: Vec<Option<NodeId>>,
    depth: Vec<usize>,
    root: NodeId,
}

impl Dominators {
    /// Immediate dominators computed in one topological sweep: the idom of a
    /// vertex is the dominator-tree LCA of its parents.
    pub fn new(net: &Network) -> Result<Self> {
        let order = net
            .topological_order()
            .ok_or_else(|| Error::InvalidNetwork("directed cycle".into()))?;
        let n = net.node_count();
        let root = net.root();
        let mut dom = Dominators {
            idom: vec![None; n],
            depth: vec![0; n],
            root,
        };
        let mut reached = vec![false; n];
        reached[root] = true;
        for v in order {
            if v == root {
                continue;
            }
            let mut ps = net.parents(v).iter().copied().filter(|&p| reached[p]);
            let Some(first) = ps.next() else { continue };
            let d = ps.fold(first, |acc, p| dom.lca(acc, p));
            dom.idom[v] = Some(d);
            dom.depth[v] = dom.depth[d] + 1;
            reached[v] = true;
        }
        Ok(dom)
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn immediate_dominator(&self, v: NodeId) -> Option<NodeId> {
        self.idom[v]
    }

    fn lca(&self, mut a: NodeId, mut b: NodeId) -> NodeId {
        while self.depth[a] > self.depth[b] {
            a = self.idom[a].expect("non-root vertex has an idom");
        }
        while self.depth[b] > self.depth[a] {
            b = self.idom[b].expect("non-root vertex has an idom");
        }
        while a != b {
            a = self.idom[a].expect("non-root vertex has an idom");
            b = self.idom[b].expect("non-root vertex has an idom");
        }
        a
    }

    /// Whether `a` dominates `b`.
    pub fn dominates(&self, a: NodeId, mut b: NodeId) -> bool {
        loop {
            if a == b {
                return true;
            }
            match self.idom[b] {
                Some(p) => b = p,
                None => return false,
            }
        }
    }

    /// Lowest common dominator of a nonempty vertex set.
    pub fn lowest_common(&self, vs: &[NodeId]) -> NodeId {
        let (&first, rest) = vs.split_first().expect("nonempty vertex set");
        rest.iter().fold(first, |acc, &v| self.lca(acc, v))
    }
}

impl Network {
    pub fn dominators(&self) -> Result<Dominators> {
        Dominators::new(self)
    }

    /// Lowest stable ancestor of a set of taxa.
    pub fn lsa<'a, I>(&self, taxa: I) -> Result<NodeId>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let nodes = self.resolve_taxa(taxa)?;
        if nodes.is_empty() {
            return Err(Error::EmptyTaxonSet);
        }
        Ok(self.dominators()?.lowest_common(&nodes))
    }

    /// True when the LSA of all leaves is the root.
    pub fn is_recoverable(&self) -> bool {
        let leaves: Vec<NodeId> = self.leaves().map(|(v, _)| v).collect();
        if leaves.is_empty() {
            return false;
        }
        match self.dominators() {
            Ok(d) => d.lowest_common(&leaves) == self.root(),
            Err(_) => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::enewick::parse;
    use crate::network::{Network, NodeId};

    /// `v` is stable for `a` when removing `v` cuts every root path to `a`.
    fn stable_for(net: &Network, v: NodeId, a: NodeId) -> bool {
        if v == a || v == net.root() {
            return true;
        }
        let mut seen = vec![false; net.node_count()];
        let mut stack = vec![net.root()];
        seen[net.root()] = true;
        while let Some(u) = stack.pop() {
            for &c in net.children(u) {
                if c != v && !seen[c] {
                    seen[c] = true;
                    stack.push(c);
                }
            }
        }
        !seen[a]
    }

    fn brute_lsa(net: &Network, taxa: &[&str]) -> NodeId {
        let nodes: Vec<NodeId> = taxa.iter().map(|t| net.leaf(t).unwrap()).collect();
        let stable: Vec<NodeId> = (0..net.node_count())
            .filter(|&v| nodes.iter().all(|&a| stable_for(net, v, a)))
            .collect();
        let lowest: Vec<NodeId> = stable
            .iter()
            .copied()
            .filter(|&v| stable.iter().all(|&u| u == v || !net.is_ancestor(v, u)))
            .collect();
        assert_eq!(lowest.len(), 1, "lowest stable ancestor is unique");
        lowest[0]
    }

    #[test]
    fn cherry_lsa_is_parent() {
        let n = parse("((a,b),c);").unwrap();
        let v = n.lsa(["a", "b"]).unwrap();
        assert_eq!(n.children(v).len(), 2);
        assert_eq!(n.parents(n.leaf("a").unwrap()), &[v]);
        assert_eq!(n.lsa(["a", "b", "c"]).unwrap(), n.root());
        assert!(n.is_recoverable());
    }

    #[test]
    fn unknown_taxon_is_an_error() {
        let n = parse("((a,b),c);").unwrap();
        assert!(n.lsa(["a", "q"]).is_err());
    }

    #[test]
    fn rejoining_root_paths_are_not_recoverable() {
        let n = parse("(((x,y))#H1,#H1);").unwrap();
        assert!(n.validate().is_empty());
        assert!(!n.is_recoverable());
    }

    #[test]
    fn dominator_lsa_matches_path_removal() {
        for text in [
            "((a,(b)#H1),(#H1,c));",
            "((((c,d),(e)#H1),(#H1,(a)#H2)),((b,#H2),f));",
            "(((a,(b,(c)#H1)),#H1),(d,e));",
        ] {
            let n = parse(text).unwrap();
            let taxa: Vec<String> = n.taxa().into_iter().collect();
            for i in 0..taxa.len() {
                for j in i..taxa.len() {
                    let set = [taxa[i].as_str(), taxa[j].as_str()];
                    assert_eq!(n.lsa(set).unwrap(), brute_lsa(&n, &set), "{text} {set:?}");
                }
            }
            let all: Vec<&str> = taxa.iter().map(String::as_str).collect();
            assert_eq!(n.lsa(all.iter().copied()).unwrap(), brute_lsa(&n, &all));
        }
    }
}
