//! Construction of a simple network of level at most 2 from trinets and
//! binets on the leaves below one cut-arc.
//!
//! The stages run in order: level, generator, reticulation leaves, arc
//! classes, sides within each class, alignment (generator 2c only), and the
//! order of the leaves along every arc side. Each stage is exposed on its
//! own so it can be checked against a known network.

mod scores;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::collection::TrinetCollection;
use crate::error::{Error, Result, Stage};
use crate::generator::{attach, CatalogEntry, CatalogId, SideAssignment, SideRef};
use crate::network::{Network, Taxon};

use scores::{analyse, Analysed};
pub use scores::{Precedence, SameSide, EPS};

fn stage(stage: Stage, message: impl Into<String>) -> Error {
    Error::Stage {
        stage,
        message: message.into(),
    }
}

/// Outcome of the level stage.
#[derive(Debug, Clone)]
pub enum LevelChoice {
    /// Two leaves: the binet of maximum multiplicity.
    Binet(Network),
    Level {
        k: usize,
        p2: f64,
    },
}

/// Level of the simple network: 1 when the strictly level-2 trinets make up
/// less than `(n - 2) / (2 C(n, 3))` of all trinets, 2 otherwise.
pub fn choose_level(t: &TrinetCollection) -> Result<LevelChoice> {
    if t.is_empty() {
        return Err(Error::EmptyCollection);
    }
    let n = t.taxa().len();
    if n < 2 {
        return Err(Error::TooFewLeaves(n));
    }
    if n == 2 {
        let mut best: Option<&crate::collection::Entry> = None;
        for e in t.binets() {
            if best.is_none_or(|b| e.multiplicity > b.multiplicity) {
                best = Some(e);
            }
        }
        return best
            .map(|e| LevelChoice::Binet(Network::clone(&e.network)))
            .ok_or_else(|| stage(Stage::Level, "two taxa but no binet"));
    }
    // distinct trinets: collapsing repeats entries unevenly
    let total = t.trinets().count();
    let strict = t.trinets().filter(|e| e.info().level == 2).count();
    let p2 = if total == 0 {
        0.0
    } else {
        strict as f64 / total as f64
    };
    // p2 < (n-2) / (2 C(n,3)), compared exactly
    let k = if (strict as u128) * 2 * choose3(n) < (n as u128 - 2) * total as u128 {
        1
    } else {
        2
    };
    Ok(LevelChoice::Level { k, p2 })
}

pub(crate) fn choose3(n: usize) -> u128 {
    let n = n as u128;
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

/// Catalog generator underlying the most strictly level-`k` simple trinets.
pub fn choose_generator(t: &TrinetCollection, k: usize) -> Result<CatalogId> {
    choose_generator_from(&analyse(t), k)
}

fn choose_generator_from(trinets: &[Analysed<'_>], k: usize) -> Result<CatalogId> {
    if k == 1 {
        return Ok(CatalogId::G1);
    }
    let mut counts: BTreeMap<CatalogId, usize> = BTreeMap::new();
    for a in trinets.iter().filter(|a| a.level() == k) {
        if let Ok(m) = a.generator.identify() {
            *counts.entry(m.id).or_default() += a.weight();
        }
    }
    let mut best: Option<(CatalogId, usize)> = None;
    for (id, c) in counts {
        if best.is_none_or(|b| c > b.1) {
            best = Some((id, c));
        }
    }
    best.map(|b| b.0).ok_or_else(|| {
        stage(
            Stage::Generator,
            format!("no simple strictly level-{k} trinet"),
        )
    })
}

/// Leaf chosen for each reticulation side (catalog vertex) of a generator.
#[derive(Debug, Clone, PartialEq)]
pub struct ReticulationChoice {
    pub leaves: BTreeMap<usize, Taxon>,
    /// `p(x, C)` for every leaf and reticulation class index.
    pub scores: BTreeMap<(Taxon, usize), f64>,
}

/// Greedy assignment of leaves to reticulation sides by `p(x, C)`, the
/// fraction of trinets with generator `id` having `x` on a side in class
/// `C`.
pub fn assign_reticulation_leaves(
    t: &TrinetCollection,
    id: CatalogId,
) -> Result<ReticulationChoice> {
    let trinets = analyse(t);
    assign_reticulation_from(&with_generator(&trinets, id), id.entry())
}

fn with_generator<'a, 'b>(trinets: &'b [Analysed<'a>], id: CatalogId) -> Vec<&'b Analysed<'a>> {
    trinets
        .iter()
        .filter(|a| a.generator.identify().is_ok_and(|m| m.id == id))
        .collect()
}

fn assign_reticulation_from(
    t_g: &[&Analysed<'_>],
    entry: &CatalogEntry,
) -> Result<ReticulationChoice> {
    let classes = &entry.symmetry().reticulation_classes;
    let total: usize = t_g.iter().map(|a| a.weight()).sum();
    let mut counts: BTreeMap<(Taxon, usize), usize> = BTreeMap::new();
    let mut taxa: BTreeSet<Taxon> = BTreeSet::new();
    for a in t_g {
        let m = a.generator.identify()?;
        taxa.extend(a.entry.taxa().iter().cloned());
        for (x, &s) in &a.sides.leaf_side {
            if let Some(c) = entry.symmetry().reticulation_class_of(m.side(s)) {
                *counts.entry((x.clone(), c)).or_default() += a.weight();
            }
        }
    }
    let mut scores = BTreeMap::new();
    for x in &taxa {
        for c in 0..classes.len() {
            let v = counts.get(&(x.clone(), c)).copied().unwrap_or(0);
            scores.insert(
                (x.clone(), c),
                if total == 0 {
                    0.0
                } else {
                    v as f64 / total as f64
                },
            );
        }
    }
    let mut leaves: BTreeMap<usize, Taxon> = BTreeMap::new();
    let side_count: usize = classes.iter().map(Vec::len).sum();
    while leaves.len() < side_count {
        let mut best: Option<(&Taxon, usize, f64)> = None;
        for x in &taxa {
            if leaves.values().any(|y| y == x) {
                continue;
            }
            for (c, class) in classes.iter().enumerate() {
                let open = class
                    .iter()
                    .any(|s| matches!(s, SideRef::Reticulation(v) if !leaves.contains_key(v)));
                let p = scores[&(x.clone(), c)];
                if open && best.is_none_or(|b| p > b.2 + EPS) {
                    best = Some((x, c, p));
                }
            }
        }
        let (x, c, _) = best.ok_or_else(|| {
            stage(
                Stage::ReticulationLeaves,
                "not enough leaves for the reticulation sides",
            )
        })?;
        let side = classes[c]
            .iter()
            .find_map(|s| match s {
                SideRef::Reticulation(v) if !leaves.contains_key(v) => Some(*v),
                _ => None,
            })
            .expect("class has an open side");
        leaves.insert(side, x.clone());
    }
    Ok(ReticulationChoice { leaves, scores })
}

/// A trinet of `T_G^r` with its leaves placed on catalog sides.
struct Placed {
    weight: usize,
    side: BTreeMap<Taxon, SideRef>,
}

/// Trinets with generator `entry` that can be matched so that every
/// reticulation side holds its assigned leaf.
fn placed_trinets(
    t_g: &[&Analysed<'_>],
    entry: &CatalogEntry,
    rets: &BTreeMap<usize, Taxon>,
) -> Vec<Placed> {
    let mut out = Vec::new();
    for a in t_g {
        let good = a.generator.matches().into_iter().find(|m| {
            a.sides.leaf_side.iter().all(|(x, &s)| match m.side(s) {
                SideRef::Reticulation(v) => rets.get(&v) == Some(x),
                SideRef::Arc(_) => true,
            })
        });
        if let Some(m) = good {
            debug_assert_eq!(m.id, entry.id);
            let side = a
                .sides
                .leaf_side
                .iter()
                .map(|(x, &s)| (x.clone(), m.side(s)))
                .collect();
            out.push(Placed {
                weight: a.weight(),
                side,
            });
        }
    }
    out
}

/// Class of symmetric arc sides (index into the catalog entry's arc
/// classes) for every leaf not on a reticulation side, by the fraction of
/// consistently matched trinets placing it in that class.
pub fn assign_arc_classes(
    t: &TrinetCollection,
    id: CatalogId,
    reticulation_leaves: &BTreeMap<usize, Taxon>,
) -> BTreeMap<Taxon, usize> {
    let trinets = analyse(t);
    let entry = id.entry();
    let placed = placed_trinets(&with_generator(&trinets, id), entry, reticulation_leaves);
    let rest: Vec<Taxon> = t
        .taxa()
        .iter()
        .filter(|x| !reticulation_leaves.values().any(|y| y == *x))
        .cloned()
        .collect();
    assign_arc_classes_from(&placed, entry, &rest, &mut Vec::new())
}

fn assign_arc_classes_from(
    placed: &[Placed],
    entry: &CatalogEntry,
    leaves: &[Taxon],
    notes: &mut Vec<String>,
) -> BTreeMap<Taxon, usize> {
    let classes = &entry.symmetry().arc_classes;
    let mut out = BTreeMap::new();
    for x in leaves {
        let mut hits = vec![0usize; classes.len()];
        let mut containing = 0;
        for p in placed {
            if let Some(&s) = p.side.get(x) {
                containing += p.weight;
                if let Some(c) = entry.symmetry().arc_class_of(s) {
                    hits[c] += p.weight;
                }
            }
        }
        if containing == 0 {
            notes.push(format!(
                "leaf {x} is in no usable trinet; placed on {}",
                class_name(entry, 0)
            ));
        }
        let mut best = 0;
        for c in 1..classes.len() {
            if hits[c] > hits[best] {
                best = c;
            }
        }
        out.insert(x.clone(), best);
    }
    out
}

fn class_name(entry: &CatalogEntry, c: usize) -> String {
    let names: Vec<&str> = entry.symmetry().arc_classes[c]
        .iter()
        .map(|&s| entry.side_name(s))
        .collect();
    format!("{{{}}}", names.join(","))
}

/// Splits the leaves of one class of symmetric arc sides into at most
/// `side_count` parts by greedy merging on the average `r` score. Parts are
/// returned in lexicographic order of their sorted contents.
pub fn partition_arc_class(xc: &[Taxon], side_count: usize, q: &SameSide) -> Vec<Vec<Taxon>> {
    let mut xc: Vec<Taxon> = xc.to_vec();
    xc.sort();
    let n = xc.len();
    let mut r = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                r[i][j] = q.r(&xc, &xc[i], &xc[j]);
            }
        }
    }
    let mut parts: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    while parts.len() > 1 {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                let sum: f64 = parts[i]
                    .iter()
                    .flat_map(|&x| parts[j].iter().map(move |&y| (x, y)))
                    .map(|(x, y)| r[x][y])
                    .sum();
                let avg = sum / (parts[i].len() * parts[j].len()) as f64;
                if best.is_none_or(|b| avg > b.2 + EPS) {
                    best = Some((i, j, avg));
                }
            }
        }
        let (i, j, score) = best.expect("at least two parts");
        if parts.len() <= side_count && score <= EPS {
            break;
        }
        let merged = parts.remove(j);
        parts[i].extend(merged);
        parts[i].sort_unstable();
        parts.sort();
    }
    parts
        .into_iter()
        .map(|p| p.into_iter().map(|i| xc[i].clone()).collect())
        .collect()
}

/// The four ways of aligning the sides of generator 2c.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alignment {
    Identity,
    Swap2,
    Swap3,
    SwapBoth,
}

impl fmt::Display for Alignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Alignment::Identity => "identity",
            Alignment::Swap2 => "swap L2/R2",
            Alignment::Swap3 => "swap L3/R3",
            Alignment::SwapBoth => "swap L2/R2 and L3/R3",
        })
    }
}

/// Chooses whether to swap `L2`/`R2` and `L3`/`R3` so that
/// `u(L1,L2) + u(L1,L3) + u(L2,L3) + u(R1,R2) + u(R1,R3) + u(R2,R3)` is
/// maximal. `sides` maps side names to leaves and is updated in place.
pub fn align_sides_2c(sides: &mut BTreeMap<&'static str, Vec<Taxon>>, q: &SameSide) -> Alignment {
    let get =
        |s: &BTreeMap<&'static str, Vec<Taxon>>, k: &str| s.get(k).cloned().unwrap_or_default();
    let options = [
        Alignment::Identity,
        Alignment::Swap2,
        Alignment::Swap3,
        Alignment::SwapBoth,
    ];
    let mut best: Option<(Alignment, f64)> = None;
    for opt in options {
        let (s2, s3) = match opt {
            Alignment::Identity => (false, false),
            Alignment::Swap2 => (true, false),
            Alignment::Swap3 => (false, true),
            Alignment::SwapBoth => (true, true),
        };
        let l1 = get(sides, "L1");
        let r1 = get(sides, "R1");
        let (l2, r2) = if s2 {
            (get(sides, "R2"), get(sides, "L2"))
        } else {
            (get(sides, "L2"), get(sides, "R2"))
        };
        let (l3, r3) = if s3 {
            (get(sides, "R3"), get(sides, "L3"))
        } else {
            (get(sides, "L3"), get(sides, "R3"))
        };
        let score = q.u(&l1, &l2)
            + q.u(&l1, &l3)
            + q.u(&l2, &l3)
            + q.u(&r1, &r2)
            + q.u(&r1, &r3)
            + q.u(&r2, &r3);
        if best.is_none_or(|b| score > b.1 + EPS) {
            best = Some((opt, score));
        }
    }
    let choice = best.expect("four options").0;
    if matches!(choice, Alignment::Swap2 | Alignment::SwapBoth) {
        swap(sides, "L2", "R2");
    }
    if matches!(choice, Alignment::Swap3 | Alignment::SwapBoth) {
        swap(sides, "L3", "R3");
    }
    choice
}

fn swap(sides: &mut BTreeMap<&'static str, Vec<Taxon>>, a: &'static str, b: &'static str) {
    let x = sides.remove(a).unwrap_or_default();
    let y = sides.remove(b).unwrap_or_default();
    sides.insert(a, y);
    sides.insert(b, x);
}

/// Orders the leaves of one arc side from tail to head: repeatedly appends
/// the leaf maximizing `sum a(x, y) - a(y, x)` over the leaves not yet
/// placed.
pub fn order_side(xs: &[Taxon], a: &Precedence) -> Vec<Taxon> {
    let mut rest: Vec<Taxon> = xs.to_vec();
    rest.sort();
    let mut out = Vec::with_capacity(rest.len());
    while !rest.is_empty() {
        let mut best: Option<(usize, f64)> = None;
        for (i, x) in rest.iter().enumerate() {
            let s: f64 = rest.iter().map(|y| a.get(x, y) - a.get(y, x)).sum();
            if best.is_none_or(|b| s > b.1 + EPS) {
                best = Some((i, s));
            }
        }
        out.push(rest.remove(best.expect("nonempty").0));
    }
    out
}

/// What each stage of [`build_simple`] decided.
#[derive(Debug, Clone, Default)]
pub struct SimpleReport {
    pub leaves: usize,
    pub k: usize,
    pub p2: Option<f64>,
    pub generator: Option<CatalogId>,
    pub reticulation_leaves: Vec<(&'static str, Taxon)>,
    pub sides: Vec<(&'static str, Vec<Taxon>)>,
    pub alignment: Option<Alignment>,
    /// Trinets with the chosen generator, and those consistent with the
    /// reticulation leaves.
    pub generator_trinets: usize,
    pub aligned_trinets: usize,
    pub notes: Vec<String>,
}

pub fn build_simple(t: &TrinetCollection) -> Result<Network> {
    build_simple_with_report(t).map(|r| r.0)
}

pub fn build_simple_with_report(t: &TrinetCollection) -> Result<(Network, SimpleReport)> {
    let mut report = SimpleReport {
        leaves: t.taxa().len(),
        ..SimpleReport::default()
    };
    let k = match choose_level(t)? {
        LevelChoice::Binet(n) => return Ok((n, report)),
        LevelChoice::Level { k, p2 } => {
            report.p2 = Some(p2);
            k
        }
    };
    report.k = k;
    let trinets = analyse(t);
    let id = choose_generator_from(&trinets, k)?;
    report.generator = Some(id);
    let entry = id.entry();
    let t_g = with_generator(&trinets, id);
    report.generator_trinets = t_g.iter().map(|a| a.weight()).sum();
    let rets = assign_reticulation_from(&t_g, entry)?.leaves;
    for (&v, x) in &rets {
        report
            .reticulation_leaves
            .push((entry.side_name(SideRef::Reticulation(v)), x.clone()));
    }

    let placed = placed_trinets(&t_g, entry, &rets);
    report.aligned_trinets = placed.iter().map(|p| p.weight).sum();
    let rest: Vec<Taxon> = t
        .taxa()
        .iter()
        .filter(|x| !rets.values().any(|y| y == *x))
        .cloned()
        .collect();
    let classes = assign_arc_classes_from(&placed, entry, &rest, &mut report.notes);

    let q = SameSide::from_analysed(&trinets);
    let mut sides: BTreeMap<&'static str, Vec<Taxon>> = BTreeMap::new();
    for (c, class) in entry.symmetry().arc_classes.iter().enumerate() {
        let xc: Vec<Taxon> = classes
            .iter()
            .filter(|(_, &k)| k == c)
            .map(|(x, _)| x.clone())
            .collect();
        if xc.is_empty() {
            continue;
        }
        let parts = partition_arc_class(&xc, class.len(), &q);
        if parts.len() > class.len() {
            return Err(stage(
                Stage::Partition,
                format!("{} parts for {}", parts.len(), class_name(entry, c)),
            ));
        }
        for (side, part) in class.iter().zip(parts) {
            sides.insert(entry.side_name(*side), part);
        }
    }
    if id == CatalogId::G2c {
        report.alignment = Some(align_sides_2c(&mut sides, &q));
    }

    let a = Precedence::from_analysed(&trinets);
    let mut assignment = SideAssignment::new();
    for (&v, x) in &rets {
        assignment.place_on_reticulation(x.clone(), v);
    }
    for (name, xs) in &sides {
        let SideRef::Arc(i) = entry.side_by_name(name).expect("catalog side") else {
            return Err(stage(Stage::Ordering, format!("{name} is not an arc side")));
        };
        let order = order_side(xs, &a);
        for x in &order {
            assignment.push_on_arc(x.clone(), i);
        }
        report.sides.push((name, order));
    }
    report
        .sides
        .sort_by_key(|(name, _)| entry.side_by_name(name));

    let net =
        attach(&entry.generator, &assignment).map_err(|e| stage(Stage::Attach, e.to_string()))?;
    let violations = net.validate();
    if !violations.is_empty() || !net.parallel_arcs().is_empty() {
        let msg: Vec<String> = violations
            .iter()
            .chain(net.parallel_arcs().iter())
            .map(|v| v.to_string())
            .collect();
        return Err(stage(Stage::Attach, msg.join("; ")));
    }
    Ok((net, report))
}
