//! Multisets of trinets and binets keyed by canonical form.

use std::collections::btree_map::{self, BTreeMap};
use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use crate::enewick::canonical_key;
use crate::network::{Network, Taxon, TaxonSet};

/// Structural facts about an entry, computed on first use.
#[derive(Debug, Clone)]
pub struct EntryInfo {
    pub taxa: Vec<Taxon>,
    pub level: usize,
    pub simple: bool,
    pub minimal_cut_sets: Vec<TaxonSet>,
}

/// One distinct network of a collection together with its multiplicity.
/// Copies of an entry share the network and its cached structure.
#[derive(Debug, Clone)]
pub struct Entry {
    pub key: String,
    pub network: Arc<Network>,
    pub multiplicity: usize,
    info: Arc<OnceLock<EntryInfo>>,
}

impl Entry {
    pub fn info(&self) -> &EntryInfo {
        self.info.get_or_init(|| {
            let report = self.network.cut_arc_sets();
            let minimal_cut_sets: Vec<TaxonSet> = report.minimal_sets.into_iter().collect();
            EntryInfo {
                taxa: self.network.taxa().into_iter().collect(),
                level: self.network.level(),
                simple: minimal_cut_sets.is_empty(),
                minimal_cut_sets,
            }
        })
    }

    pub fn taxa(&self) -> &[Taxon] {
        &self.info().taxa
    }

    pub fn leaf_count(&self) -> usize {
        self.taxa().len()
    }

    pub fn is_trinet(&self) -> bool {
        self.leaf_count() == 3
    }

    pub fn is_binet(&self) -> bool {
        self.leaf_count() == 2
    }

    pub fn contains(&self, taxon: &str) -> bool {
        self.taxa().iter().any(|t| t == taxon)
    }
}

/// A multiset of small networks. Isomorphic networks share one entry.
#[derive(Debug, Clone, Default)]
pub struct TrinetCollection {
    entries: BTreeMap<String, Entry>,
    taxa: TaxonSet,
}

impl TrinetCollection {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, net: Network) {
        self.insert_many(net, 1);
    }

    pub fn insert_many(&mut self, net: Network, multiplicity: usize) {
        if multiplicity == 0 {
            return;
        }
        let key = canonical_key(&net);
        match self.entries.entry(key) {
            btree_map::Entry::Occupied(mut e) => e.get_mut().multiplicity += multiplicity,
            btree_map::Entry::Vacant(e) => {
                self.taxa.extend(net.taxa());
                let key = e.key().clone();
                e.insert(Entry {
                    key,
                    network: Arc::new(net),
                    multiplicity,
                    info: Arc::default(),
                });
            }
        }
    }

    /// Adds a copy of an entry of another collection, keeping its key and
    /// cached structure.
    pub fn insert_entry(&mut self, e: &Entry) {
        match self.entries.entry(e.key.clone()) {
            btree_map::Entry::Occupied(mut o) => o.get_mut().multiplicity += e.multiplicity,
            btree_map::Entry::Vacant(v) => {
                self.taxa.extend(e.taxa().iter().cloned());
                v.insert(e.clone());
            }
        }
    }

    /// Number of distinct entries.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of networks counted with multiplicity.
    pub fn total(&self) -> usize {
        self.entries.values().map(|e| e.multiplicity).sum()
    }

    /// Union of the leaf sets of all entries.
    pub fn taxa(&self) -> &TaxonSet {
        &self.taxa
    }

    /// Entries in canonical-key order.
    pub fn iter(&self) -> impl Iterator<Item = &Entry> {
        self.entries.values()
    }

    pub fn trinets(&self) -> impl Iterator<Item = &Entry> {
        self.iter().filter(|e| e.is_trinet())
    }

    pub fn binets(&self) -> impl Iterator<Item = &Entry> {
        self.iter().filter(|e| e.is_binet())
    }

    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key)
    }

    pub fn multiplicity_of(&self, net: &Network) -> usize {
        self.entries
            .get(&canonical_key(net))
            .map_or(0, |e| e.multiplicity)
    }

    /// The underlying set: canonical keys without multiplicities.
    pub fn key_set(&self) -> BTreeSet<&str> {
        self.entries.keys().map(String::as_str).collect()
    }

    pub fn set_equal(&self, other: &TrinetCollection) -> bool {
        self.key_set() == other.key_set()
    }

    /// Keeps the entries satisfying `keep`.
    pub fn filtered(&self, mut keep: impl FnMut(&Entry) -> bool) -> TrinetCollection {
        let mut out = TrinetCollection::new();
        for e in self.iter().filter(|e| keep(e)) {
            out.taxa.extend(e.taxa().iter().cloned());
            out.entries.insert(e.key.clone(), e.clone());
        }
        out
    }
}

impl FromIterator<Network> for TrinetCollection {
    fn from_iter<I: IntoIterator<Item = Network>>(iter: I) -> Self {
        let mut c = TrinetCollection::new();
        for n in iter {
            c.insert(n);
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enewick::parse;

    #[test]
    fn isomorphic_networks_share_an_entry() {
        let mut c = TrinetCollection::new();
        c.insert(parse("((a,b),c);").unwrap());
        c.insert(parse("(c,(b,a));").unwrap());
        c.insert_many(parse("((a,c),b);").unwrap(), 3);
        assert_eq!(c.len(), 2);
        assert_eq!(c.total(), 5);
        assert_eq!(c.multiplicity_of(&parse("((b,a),c);").unwrap()), 2);
        assert_eq!(c.taxa().len(), 3);
    }

    #[test]
    fn entry_info_reports_structure() {
        let c: TrinetCollection = [parse("((a,(b)#H1),(#H1,c));").unwrap()]
            .into_iter()
            .collect();
        let e = c.iter().next().unwrap();
        assert_eq!(e.info().level, 1);
        assert!(e.info().simple);
        assert!(e.is_trinet());
    }
}
