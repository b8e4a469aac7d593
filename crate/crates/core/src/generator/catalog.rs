//! The generators of simple level-1 and level-2 networks.
//!
//! Vertex 0 is the root of every shape. Side names follow the usual
//! drawings: symmetric arc pairs are `L`/`R` (indexed for 2c), the other
//! arcs are lettered, reticulation sides are `H`, `H1`, `H2`.

use std::fmt;
use std::sync::OnceLock;

use super::{Generator, SideRef};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CatalogId {
    G1,
    G2a,
    G2b,
    G2c,
    G2d,
}

impl CatalogId {
    pub const ALL: [CatalogId; 5] = [
        CatalogId::G1,
        CatalogId::G2a,
        CatalogId::G2b,
        CatalogId::G2c,
        CatalogId::G2d,
    ];

    pub fn entry(self) -> &'static CatalogEntry {
        entry(self)
    }

    /// Number of reticulations of the generator.
    pub fn level(self) -> usize {
        match self {
            CatalogId::G1 => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for CatalogId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CatalogId::G1 => "1",
            CatalogId::G2a => "2a",
            CatalogId::G2b => "2b",
            CatalogId::G2c => "2c",
            CatalogId::G2d => "2d",
        })
    }
}

/// Equivalence classes of sides under generator automorphisms. Arc classes
/// only use automorphisms fixing every reticulation side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryClasses {
    pub reticulation_classes: Vec<Vec<SideRef>>,
    pub arc_classes: Vec<Vec<SideRef>>,
}

impl SymmetryClasses {
    pub fn reticulation_class_of(&self, side: SideRef) -> Option<usize> {
        self.reticulation_classes
            .iter()
            .position(|c| c.contains(&side))
    }

    pub fn arc_class_of(&self, side: SideRef) -> Option<usize> {
        self.arc_classes.iter().position(|c| c.contains(&side))
    }
}

pub struct CatalogEntry {
    pub id: CatalogId,
    pub generator: Generator,
    arc_names: Vec<&'static str>,
    reticulation_names: Vec<(usize, &'static str)>,
    symmetry: SymmetryClasses,
}

impl CatalogEntry {
    fn new(
        id: CatalogId,
        vertex_count: usize,
        arcs: &[(usize, usize, &'static str)],
        reticulations: &[(usize, &'static str)],
    ) -> Self {
        let generator =
            Generator::new(vertex_count, arcs.iter().map(|&(u, v, _)| (u, v)).collect());
        let symmetry = symmetry_classes(&generator);
        CatalogEntry {
            id,
            generator,
            arc_names: arcs.iter().map(|a| a.2).collect(),
            reticulation_names: reticulations.to_vec(),
            symmetry,
        }
    }

    pub fn side_name(&self, side: SideRef) -> &'static str {
        match side {
            SideRef::Arc(i) => self.arc_names[i],
            SideRef::Reticulation(v) => self
                .reticulation_names
                .iter()
                .find(|r| r.0 == v)
                .map(|r| r.1)
                .expect("named reticulation side"),
        }
    }

    pub fn side_by_name(&self, name: &str) -> Option<SideRef> {
        self.generator
            .sides()
            .into_iter()
            .find(|&s| self.side_name(s) == name)
    }

    pub fn symmetry(&self) -> &SymmetryClasses {
        &self.symmetry
    }
}

/// The five generator shapes.
pub fn catalog() -> &'static [CatalogEntry] {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        vec![
            CatalogEntry::new(CatalogId::G1, 2, &[(0, 1, "L"), (0, 1, "R")], &[(1, "H")]),
            CatalogEntry::new(
                CatalogId::G2a,
                4,
                &[
                    (0, 1, "A"),
                    (0, 2, "B"),
                    (1, 2, "C"),
                    (1, 3, "D"),
                    (2, 3, "E"),
                ],
                &[(3, "H")],
            ),
            CatalogEntry::new(
                CatalogId::G2b,
                5,
                &[
                    (0, 1, "A"),
                    (0, 3, "B"),
                    (1, 2, "C"),
                    (1, 4, "D"),
                    (2, 3, "E"),
                    (2, 4, "F"),
                ],
                &[(3, "H1"), (4, "H2")],
            ),
            CatalogEntry::new(
                CatalogId::G2c,
                5,
                &[
                    (0, 1, "L1"),
                    (0, 2, "R1"),
                    (1, 3, "L2"),
                    (2, 3, "R2"),
                    (1, 4, "L3"),
                    (2, 4, "R3"),
                ],
                &[(3, "H1"), (4, "H2")],
            ),
            CatalogEntry::new(
                CatalogId::G2d,
                4,
                &[
                    (0, 1, "A"),
                    (0, 3, "B"),
                    (1, 2, "L"),
                    (1, 2, "R"),
                    (2, 3, "C"),
                ],
                &[(3, "H")],
            ),
        ]
    })
}

pub fn entry(id: CatalogId) -> &'static CatalogEntry {
    catalog()
        .iter()
        .find(|e| e.id == id)
        .expect("every id is in the catalog")
}

/// An isomorphism from a generator onto a catalog shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMatch {
    pub id: CatalogId,
    /// Catalog vertex of each generator vertex.
    pub vertex_map: Vec<usize>,
    /// Catalog arc of each generator arc.
    pub arc_map: Vec<usize>,
}

impl GeneratorMatch {
    pub fn side(&self, side: SideRef) -> SideRef {
        match side {
            SideRef::Arc(i) => SideRef::Arc(self.arc_map[i]),
            SideRef::Reticulation(v) => SideRef::Reticulation(self.vertex_map[v]),
        }
    }

    pub fn entry(&self) -> &'static CatalogEntry {
        entry(self.id)
    }
}

/// Calls `f` with every permutation of `0..n`.
pub(crate) fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    fn rec(k: usize, perm: &mut Vec<usize>, used: &mut Vec<bool>, f: &mut dyn FnMut(&[usize])) {
        if k == perm.len() {
            f(perm);
            return;
        }
        for v in 0..perm.len() {
            if !used[v] {
                used[v] = true;
                perm[k] = v;
                rec(k + 1, perm, used, f);
                used[v] = false;
            }
        }
    }
    let mut perm = vec![0; n];
    let mut used = vec![false; n];
    rec(0, &mut perm, &mut used, &mut f);
}

/// Vertex bijections `a -> b` that carry the arc multiset of `a` onto that
/// of `b`, in lexicographic order.
pub(crate) fn vertex_isomorphisms(a: &Generator, b: &Generator) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if a.vertex_count() != b.vertex_count() || a.arcs().len() != b.arcs().len() {
        return out;
    }
    for_each_permutation(a.vertex_count(), |perm| {
        let ok = a
            .arcs()
            .iter()
            .all(|&(u, v)| a.arc_multiplicity(u, v) == b.arc_multiplicity(perm[u], perm[v]));
        if ok {
            out.push(perm.to_vec());
        }
    });
    out
}

fn arc_map(a: &Generator, b: &Generator, perm: &[usize]) -> Vec<usize> {
    let mut used = vec![false; b.arcs().len()];
    a.arcs()
        .iter()
        .map(|&(u, v)| {
            let target = (perm[u], perm[v]);
            let j = (0..b.arcs().len())
                .find(|&j| !used[j] && b.arcs()[j] == target)
                .expect("vertex isomorphism preserves arcs");
            used[j] = true;
            j
        })
        .collect()
}

impl Generator {
    /// Catalog shape isomorphic to this generator, with the lexicographically
    /// smallest vertex correspondence.
    pub fn identify(&self) -> Result<GeneratorMatch> {
        self.matches()
            .into_iter()
            .next()
            .ok_or(Error::UnknownGenerator)
    }

    /// Every isomorphism onto the matching catalog shape.
    pub fn matches(&self) -> Vec<GeneratorMatch> {
        for e in catalog() {
            let isos = vertex_isomorphisms(self, &e.generator);
            if !isos.is_empty() {
                return isos
                    .into_iter()
                    .map(|perm| GeneratorMatch {
                        id: e.id,
                        arc_map: arc_map(self, &e.generator, &perm),
                        vertex_map: perm,
                    })
                    .collect();
            }
        }
        Vec::new()
    }
}

/// Symmetry classes by enumerating automorphisms.
pub fn symmetry_classes(g: &Generator) -> SymmetryClasses {
    let autos = vertex_isomorphisms(g, g);
    let rets = g.reticulation_sides();
    let mut reticulation_classes: Vec<Vec<SideRef>> = Vec::new();
    for &r in &rets {
        if reticulation_classes
            .iter()
            .any(|c| c.contains(&SideRef::Reticulation(r)))
        {
            continue;
        }
        let mut class: Vec<SideRef> = rets
            .iter()
            .copied()
            .filter(|&s| autos.iter().any(|f| f[r] == s))
            .map(SideRef::Reticulation)
            .collect();
        class.sort();
        reticulation_classes.push(class);
    }
    let fixing: Vec<&Vec<usize>> = autos
        .iter()
        .filter(|f| rets.iter().all(|&r| f[r] == r))
        .collect();
    let mut arc_classes: Vec<Vec<SideRef>> = Vec::new();
    for (i, &(u, v)) in g.arcs().iter().enumerate() {
        if arc_classes.iter().any(|c| c.contains(&SideRef::Arc(i))) {
            continue;
        }
        let class: Vec<SideRef> = g
            .arcs()
            .iter()
            .enumerate()
            .filter(|&(_, &(x, y))| fixing.iter().any(|f| f[u] == x && f[v] == y))
            .map(|(j, _)| SideRef::Arc(j))
            .collect();
        arc_classes.push(class);
    }
    SymmetryClasses {
        reticulation_classes,
        arc_classes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(e: &CatalogEntry, classes: &[Vec<SideRef>]) -> Vec<Vec<&'static str>> {
        classes
            .iter()
            .map(|c| c.iter().map(|&s| e.side_name(s)).collect())
            .collect()
    }

    #[test]
    fn catalog_shapes_are_generators() {
        for e in catalog() {
            let g = &e.generator;
            assert!(g.degree_violations().is_empty(), "{}", e.id);
            assert_eq!(g.reticulation_count(), e.id.level(), "{}", e.id);
            assert_eq!(g.identify().unwrap().id, e.id);
        }
    }

    #[test]
    fn symmetric_sides_match_the_drawings() {
        let c = entry(CatalogId::G2c);
        assert_eq!(
            names(c, &c.symmetry().arc_classes),
            vec![vec!["L1", "R1"], vec!["L2", "R2"], vec!["L3", "R3"]]
        );
        assert_eq!(
            names(c, &c.symmetry().reticulation_classes),
            vec![vec!["H1", "H2"]]
        );
        for id in [CatalogId::G1, CatalogId::G2d] {
            let e = entry(id);
            let pairs: Vec<_> = names(e, &e.symmetry().arc_classes)
                .into_iter()
                .filter(|c| c.len() > 1)
                .collect();
            assert_eq!(pairs, vec![vec!["L", "R"]], "{id}");
        }
        for id in [CatalogId::G2a, CatalogId::G2b] {
            let e = entry(id);
            assert!(
                e.symmetry().arc_classes.iter().all(|c| c.len() == 1),
                "{id}"
            );
            assert!(
                e.symmetry()
                    .reticulation_classes
                    .iter()
                    .all(|c| c.len() == 1),
                "{id}"
            );
        }
        let with_symmetric_reticulations: Vec<CatalogId> = catalog()
            .iter()
            .filter(|e| {
                e.symmetry()
                    .reticulation_classes
                    .iter()
                    .any(|c| c.len() > 1)
            })
            .map(|e| e.id)
            .collect();
        assert_eq!(with_symmetric_reticulations, vec![CatalogId::G2c]);
    }

    #[test]
    fn identification_ignores_vertex_numbering() {
        for e in catalog() {
            let g = &e.generator;
            let n = g.vertex_count();
            let perm: Vec<usize> = (0..n).map(|v| (v + 1) % n).collect();
            let arcs: Vec<(usize, usize)> = g
                .arcs()
                .iter()
                .rev()
                .map(|&(u, v)| (perm[u], perm[v]))
                .collect();
            let h = Generator::new(n, arcs);
            let m = h.identify().unwrap();
            assert_eq!(m.id, e.id);
            for (i, &(u, v)) in h.arcs().iter().enumerate() {
                assert_eq!(g.arcs()[m.arc_map[i]], (m.vertex_map[u], m.vertex_map[v]));
            }
        }
    }

    #[test]
    fn level_three_shape_is_unknown() {
        // three reticulations below a chain of tree vertices
        let g = Generator::new(
            7,
            vec![
                (0, 1),
                (0, 4),
                (1, 2),
                (1, 5),
                (2, 4),
                (2, 6),
                (4, 5),
                (5, 6),
            ],
        );
        let _ = g.degree_violations();
        assert_eq!(g.identify().unwrap_err(), Error::UnknownGenerator);
    }

    /// Every biconnected generator with one or two reticulations, by brute
    /// force over topologically numbered multigraphs.
    fn enumerate_generators(reticulations: usize) -> Vec<Generator> {
        let mut found: Vec<Generator> = Vec::new();
        for n in 2..=6 {
            let mut options: Vec<Vec<Vec<usize>>> = Vec::new();
            for u in 0..n {
                let mut opts = vec![vec![]];
                for a in u + 1..n {
                    opts.push(vec![a]);
                    for b in a..n {
                        opts.push(vec![a, b]);
                    }
                }
                options.push(opts);
            }
            let mut choice = vec![0usize; n];
            loop {
                let arcs: Vec<(usize, usize)> = (0..n)
                    .flat_map(|u| options[u][choice[u]].iter().map(move |&v| (u, v)))
                    .collect();
                let g = Generator::new(n, arcs);
                let roots = (0..n).filter(|&v| g.indegree(v) == 0).count();
                if roots == 1
                    && g.root() == 0
                    && g.degree_violations().is_empty()
                    && g.reticulation_count() == reticulations
                    && biconnected(&g)
                    && !found.iter().any(|f| !vertex_isomorphisms(f, &g).is_empty())
                {
                    found.push(g);
                }
                let mut k = 0;
                while k < n {
                    choice[k] += 1;
                    if choice[k] < options[k].len() {
                        break;
                    }
                    choice[k] = 0;
                    k += 1;
                }
                if k == n {
                    break;
                }
            }
        }
        found
    }

    fn biconnected(g: &Generator) -> bool {
        let n = g.vertex_count();
        let connected_without = |skip: Option<usize>| {
            let mut seen = vec![false; n];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(u) = stack.pop() {
                for (i, &(a, b)) in g.arcs().iter().enumerate() {
                    if Some(i) == skip {
                        continue;
                    }
                    for (x, y) in [(a, b), (b, a)] {
                        if x == u && !seen[y] {
                            seen[y] = true;
                            stack.push(y);
                        }
                    }
                }
            }
            seen.iter().all(|&s| s)
        };
        connected_without(None) && (0..g.arcs().len()).all(|i| connected_without(Some(i)))
    }

    #[test]
    fn catalog_is_complete() {
        let level1 = enumerate_generators(1);
        assert_eq!(level1.len(), 1);
        assert_eq!(level1[0].identify().unwrap().id, CatalogId::G1);
        let level2 = enumerate_generators(2);
        let mut ids: Vec<CatalogId> = level2.iter().map(|g| g.identify().unwrap().id).collect();
        ids.sort();
        assert_eq!(
            ids,
            vec![
                CatalogId::G2a,
                CatalogId::G2b,
                CatalogId::G2c,
                CatalogId::G2d
            ]
        );
    }
}
