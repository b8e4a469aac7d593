//! The top-level recursion: find a minimal cut-arc set, build the simple
//! network below it, collapse it to a fresh leaf, recurse and graft.

use std::collections::HashMap;
use std::fmt;

use crate::collection::TrinetCollection;
use crate::cutset::search_cut_arc_set;
use crate::error::{Error, Result};
use crate::generator::CatalogId;
use crate::network::{Network, TaxonSet};
use crate::restriction::{reticulate_above, strip_blob_above};
use crate::simple::build_simple_with_report;

/// Name of the leaf standing in for a collapsed cut-arc set at a given
/// recursion depth. The brackets keep it outside the taxon alphabet.
pub fn collapse_taxon(depth: usize) -> String {
    format!("\u{27e8}collapse:{depth}\u{27e9}")
}

/// Replaces the taxa of `a` by the single taxon `a_star`. Entries inside
/// `a` are dropped; entries meeting `a` are restricted to their taxa
/// outside `a` plus the smallest taxon they share with `a`, which is then
/// renamed. When the paths from the root of `n_prime` (the network on `a`)
/// to that taxon pass through a reticulation, the blob left above it is
/// removed as well.
pub fn collapse_collection(
    t: &TrinetCollection,
    a: &TaxonSet,
    a_star: &str,
    n_prime: &Network,
) -> Result<TrinetCollection> {
    let mut out = TrinetCollection::new();
    let mut strip: HashMap<&str, bool> = HashMap::new();
    for e in t.iter() {
        let outside: Vec<&str> = e
            .taxa()
            .iter()
            .filter(|x| !a.contains(*x))
            .map(String::as_str)
            .collect();
        if outside.is_empty() {
            continue;
        }
        let Some(inside) = e.taxa().iter().find(|x| a.contains(*x)) else {
            out.insert_entry(e);
            continue;
        };
        let keep = outside
            .iter()
            .copied()
            .chain(std::iter::once(inside.as_str()));
        let mut r = e.network.restrict(keep)?.relabel(inside, a_star)?;
        let blob_above = *strip.entry(inside.as_str()).or_insert_with(|| {
            n_prime
                .leaf(inside)
                .is_some_and(|v| reticulate_above(n_prime, v))
        });
        if blob_above {
            r = strip_blob_above(&r, a_star).unwrap_or(r);
        }
        out.insert_many(r, e.multiplicity);
    }
    Ok(out)
}

/// Restrictions of the entries sharing at least two taxa with `a` to those
/// taxa.
pub fn restrict_collection(t: &TrinetCollection, a: &TaxonSet) -> Result<TrinetCollection> {
    let mut out = TrinetCollection::new();
    for e in t.iter() {
        let inside: Vec<&str> = e
            .taxa()
            .iter()
            .filter(|x| a.contains(*x))
            .map(String::as_str)
            .collect();
        if inside.len() < 2 {
            continue;
        }
        if inside.len() == e.leaf_count() {
            out.insert_entry(e);
        } else {
            out.insert_many(e.network.restrict(inside)?, e.multiplicity);
        }
    }
    Ok(out)
}

/// Replaces leaf `a_star` of `n_star` by the root of `n_prime`.
pub fn graft(n_star: &Network, a_star: &str, n_prime: &Network) -> Result<Network> {
    n_star.graft(a_star, n_prime)
}

/// One level of the recursion.
#[derive(Debug, Clone)]
pub struct Step {
    pub depth: usize,
    pub taxa: usize,
    pub cut_set: TaxonSet,
    pub threshold: usize,
    pub from_sink_component: bool,
    pub k: usize,
    pub generator: Option<CatalogId>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct ReconstructReport {
    pub input_entries: usize,
    pub dropped_non_recoverable: usize,
    pub steps: Vec<Step>,
}

impl fmt::Display for ReconstructReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "entries: {} (dropped non-recoverable: {})",
            self.input_entries, self.dropped_non_recoverable
        )?;
        for s in &self.steps {
            let set: Vec<&str> = s.cut_set.iter().map(String::as_str).collect();
            let generator = s
                .generator
                .map_or_else(|| "-".to_string(), |g| g.to_string());
            let source = if s.from_sink_component {
                "sink"
            } else {
                "children"
            };
            writeln!(
                f,
                "depth {}: taxa={} A={{{}}} i={} via={} k={} generator={}",
                s.depth,
                s.taxa,
                set.join(","),
                s.threshold,
                source,
                s.k,
                generator
            )?;
            for n in &s.notes {
                writeln!(f, "  note: {n}")?;
            }
        }
        Ok(())
    }
}

/// Drops non-recoverable entries and rejects anything that is not a valid
/// binet or trinet of level at most 2. Returns the kept entries and the
/// number of dropped networks (with multiplicity).
pub fn ingest(t: &TrinetCollection) -> Result<(TrinetCollection, usize)> {
    let mut dropped = 0;
    for e in t.iter() {
        let n = e.leaf_count();
        if !(2..=3).contains(&n) {
            return Err(Error::InvalidNetwork(format!("{}: {n} leaves", e.key)));
        }
        if let Some(v) = e.network.validate().first() {
            return Err(Error::InvalidNetwork(format!("{}: {v}", e.key)));
        }
        if !e.network.is_recoverable() {
            dropped += e.multiplicity;
        } else if e.info().level > 2 {
            return Err(Error::LevelTooHigh(e.key.clone(), e.info().level));
        }
    }
    let kept = t.filtered(|e| e.network.is_recoverable());
    Ok((kept, dropped))
}

/// A level-2 network on the taxa of `t`; the network itself whenever `t`
/// consists of its trinets (and possibly binets).
pub fn reconstruct(t: &TrinetCollection) -> Result<Network> {
    reconstruct_with_report(t).map(|r| r.0)
}

pub fn reconstruct_with_report(t: &TrinetCollection) -> Result<(Network, ReconstructReport)> {
    let (kept, dropped) = ingest(t)?;
    let mut report = ReconstructReport {
        input_entries: t.total(),
        dropped_non_recoverable: dropped,
        steps: Vec::new(),
    };
    if kept.taxa().len() < 2 {
        return Err(Error::TooFewLeaves(kept.taxa().len()));
    }
    let net = recurse(&kept, 0, &mut report)?;
    Ok((net, report))
}

fn recurse(t: &TrinetCollection, depth: usize, report: &mut ReconstructReport) -> Result<Network> {
    let found = search_cut_arc_set(t)?;
    let a = found.set;
    let t_prime = restrict_collection(t, &a)?;
    let (n_prime, simple) = build_simple_with_report(&t_prime)?;
    report.steps.push(Step {
        depth,
        taxa: t.taxa().len(),
        cut_set: a.clone(),
        threshold: found.threshold,
        from_sink_component: found.from_sink_component,
        k: simple.k,
        generator: simple.generator,
        notes: simple.notes,
    });
    if a.len() == t.taxa().len() {
        return Ok(n_prime);
    }
    let a_star = collapse_taxon(depth);
    if t.taxa().contains(&a_star) {
        return Err(Error::LabelCollision(a_star));
    }
    let t_star = collapse_collection(t, &a, &a_star, &n_prime)?;
    let n_star = if t_star.taxa().contains(&a_star) {
        recurse(&t_star, depth + 1, report)?
    } else {
        // no entry links the collapsed set to the rest; hang both parts
        // below a new root
        report
            .steps
            .last_mut()
            .expect("pushed above")
            .notes
            .push(format!(
                "collapsed leaf for {{{}}} missing from the remaining entries",
                a.iter().map(String::as_str).collect::<Vec<_>>().join(",")
            ));
        let rest = if t_star.taxa().len() >= 2 {
            recurse(&t_star, depth + 1, report)?
        } else {
            let mut b = crate::network::NetworkBuilder::new();
            let x = t_star.taxa().iter().next().cloned().unwrap_or_default();
            b.add_leaf(x);
            b.build()
        };
        return join(&rest, &n_prime);
    };
    graft(&n_star, &a_star, &n_prime)
}

/// Network whose root has the roots of `a` and `b` as children.
fn join(a: &Network, b: &Network) -> Result<Network> {
    let mut nb = crate::network::NetworkBuilder::new();
    let root = nb.add_node();
    let x = nb.add_leaf("\u{27e8}join:a\u{27e9}");
    let y = nb.add_leaf("\u{27e8}join:b\u{27e9}");
    nb.add_arc(root, x).add_arc(root, y);
    nb.build()
        .graft("\u{27e8}join:a\u{27e9}", a)?
        .graft("\u{27e8}join:b\u{27e9}", b)
}
