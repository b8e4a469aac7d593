//! Seeded random networks of level at most 2.
//!
//! Networks are composed recursively: the taxa are split into groups, and a
//! group is either a single leaf, a tree vertex over two smaller groups, or
//! a catalog generator whose sides carry smaller groups. Every composed part
//! is checked to be recoverable on its own, so no part of the result is
//! hidden from its trinets.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::generator::{attach, CatalogId, SideAssignment, SideRef};
use crate::network::{Network, NetworkBuilder, Taxon};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomNetSpec {
    pub leaves: usize,
    /// Largest number of reticulations in one blob, at most 2.
    pub max_level: usize,
    pub seed: u64,
}

impl RandomNetSpec {
    pub fn new(leaves: usize, max_level: usize, seed: u64) -> Self {
        RandomNetSpec {
            leaves,
            max_level,
            seed,
        }
    }
}

/// Taxon names `t1`, `t2`, ... .
pub fn taxon_names(n: usize) -> Vec<Taxon> {
    (1..=n).map(|i| format!("t{i}")).collect()
}

pub fn random_network(spec: &RandomNetSpec) -> Result<Network> {
    if spec.leaves < 3 {
        return Err(Error::TooFewLeaves(spec.leaves));
    }
    if spec.max_level > 2 {
        return Err(Error::LevelTooHigh("random network".into(), spec.max_level));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let taxa = taxon_names(spec.leaves);
    Ok(fragment(taxa, spec.max_level, &mut rng))
}

/// Leaves or parts that must be present: one per reticulation side and one
/// per pair of parallel arcs.
fn required_groups(id: CatalogId) -> usize {
    let g = &id.entry().generator;
    (g.reticulation_sides().len() + g.parallel_pairs().len()).max(2)
}

fn leaf(t: Taxon) -> Network {
    let mut b = NetworkBuilder::new();
    b.add_leaf(t);
    b.build()
}

fn slot(i: usize) -> String {
    format!("\u{27e8}slot:{i}\u{27e9}")
}

fn fragment<R: Rng>(mut taxa: Vec<Taxon>, max_level: usize, rng: &mut R) -> Network {
    if taxa.len() == 1 {
        return leaf(taxa.pop().expect("one taxon"));
    }
    let mut kinds: Vec<Option<CatalogId>> = vec![None, None];
    for id in CatalogId::ALL {
        if id.level() <= max_level && required_groups(id) <= taxa.len() {
            kinds.push(Some(id));
        }
    }
    taxa.shuffle(rng);
    if let Some(id) = *kinds.choose(rng).expect("tree always allowed") {
        for _ in 0..32 {
            let max_groups = taxa.len().min(required_groups(id) + 4);
            let k = rng.gen_range(required_groups(id)..=max_groups);
            let groups = split(&taxa, k, rng);
            let parts: Vec<Network> = groups
                .into_iter()
                .map(|g| fragment(g, max_level, rng))
                .collect();
            if let Some(n) = blob(id, parts, rng) {
                return n;
            }
        }
    }
    let cut = rng.gen_range(1..taxa.len());
    let right = taxa.split_off(cut);
    let (a, b) = (
        fragment(taxa, max_level, rng),
        fragment(right, max_level, rng),
    );
    let mut nb = NetworkBuilder::new();
    let root = nb.add_node();
    let x = nb.add_leaf(slot(0));
    let y = nb.add_leaf(slot(1));
    nb.add_arc(root, x).add_arc(root, y);
    nb.build()
        .graft(&slot(0), &a)
        .and_then(|n| n.graft(&slot(1), &b))
        .expect("disjoint taxa")
}

/// Splits `taxa` into `k` nonempty consecutive groups.
fn split<R: Rng>(taxa: &[Taxon], k: usize, rng: &mut R) -> Vec<Vec<Taxon>> {
    let mut cuts: Vec<usize> = (1..taxa.len()).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(k - 1).collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(k);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(taxa.len())) {
        out.push(taxa[prev..c].to_vec());
        prev = c;
    }
    out
}

/// Hangs `parts` on the sides of generator `id`: one on each reticulation
/// side, one on a side of each parallel pair, the rest anywhere on arc
/// sides. `None` if the result is not recoverable.
fn blob<R: Rng>(id: CatalogId, parts: Vec<Network>, rng: &mut R) -> Option<Network> {
    let g = &id.entry().generator;
    let mut sides: Vec<SideRef> = g
        .reticulation_sides()
        .into_iter()
        .map(SideRef::Reticulation)
        .collect();
    for (i, j) in g.parallel_pairs() {
        sides.push(SideRef::Arc(if rng.gen_bool(0.5) { i } else { j }));
    }
    while sides.len() < parts.len() {
        sides.push(SideRef::Arc(rng.gen_range(0..g.arcs().len())));
    }
    let mut assignment = SideAssignment::new();
    let mut order: Vec<usize> = (0..parts.len()).collect();
    order.shuffle(rng);
    for &i in &order {
        match sides[i] {
            SideRef::Reticulation(v) => assignment.place_on_reticulation(slot(i), v),
            SideRef::Arc(a) => assignment.push_on_arc(slot(i), a),
        }
    }
    let mut net = attach(g, &assignment).ok()?;
    for (i, p) in parts.iter().enumerate() {
        net = net.graft(&slot(i), p).ok()?;
    }
    net.is_recoverable().then_some(net)
}

/// A simple network with generator `id` on `n` leaves named `t1..tn`.
pub fn random_simple_network<R: Rng>(id: CatalogId, n: usize, rng: &mut R) -> Result<Network> {
    if n < required_groups(id) || n < 3 {
        return Err(Error::TooFewLeaves(n));
    }
    let mut taxa = taxon_names(n);
    for _ in 0..64 {
        taxa.shuffle(rng);
        let parts: Vec<Network> = taxa.iter().cloned().map(leaf).collect();
        if let Some(net) = blob(id, parts, rng) {
            return Ok(net);
        }
    }
    Err(Error::InvalidNetwork(format!(
        "no recoverable simple network with generator {id}"
    )))
}
