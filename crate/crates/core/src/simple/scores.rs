//! Pairwise evidence tables over the simple trinets of a collection.

use std::collections::HashMap;

use crate::collection::{Entry, TrinetCollection};
use crate::generator::{underlying_generator, Generator, SideAssignment, SideRef};
use crate::network::Taxon;

/// Tolerance for comparing scores.
pub const EPS: f64 = 1e-9;

/// A simple trinet with its generator and the side of each leaf.
pub(crate) struct Analysed<'a> {
    pub entry: &'a Entry,
    pub generator: Generator,
    pub sides: SideAssignment,
}

impl Analysed<'_> {
    pub fn weight(&self) -> usize {
        self.entry.multiplicity
    }

    pub fn level(&self) -> usize {
        self.entry.info().level
    }

    /// Position of `x` on its arc side, counted from the tail.
    fn position(&self, x: &str) -> Option<(usize, usize)> {
        match self.sides.side_of(x)? {
            SideRef::Arc(i) => self
                .sides
                .on_arc(i)
                .iter()
                .position(|t| t == x)
                .map(|p| (i, p)),
            SideRef::Reticulation(_) => None,
        }
    }
}

pub(crate) fn analyse(t: &TrinetCollection) -> Vec<Analysed<'_>> {
    t.trinets()
        .filter(|e| e.info().simple)
        .filter_map(|e| {
            let (generator, sides) = underlying_generator(&e.network).ok()?;
            Some(Analysed {
                entry: e,
                generator,
                sides,
            })
        })
        .collect()
}

fn pair(x: &str, y: &str) -> (Taxon, Taxon) {
    if x <= y {
        (x.to_string(), y.to_string())
    } else {
        (y.to_string(), x.to_string())
    }
}

/// `q(x, y)`: fraction of the simple trinets containing `x` and `y` that
/// have both on the same side.
#[derive(Debug, Clone, Default)]
pub struct SameSide {
    counts: HashMap<(Taxon, Taxon), (usize, usize)>,
}

impl SameSide {
    pub fn new(t: &TrinetCollection) -> Self {
        Self::from_analysed(&analyse(t))
    }

    pub(crate) fn from_analysed(trinets: &[Analysed<'_>]) -> Self {
        let mut counts: HashMap<(Taxon, Taxon), (usize, usize)> = HashMap::new();
        for a in trinets {
            let taxa = a.entry.taxa();
            for i in 0..taxa.len() {
                for j in i + 1..taxa.len() {
                    let c = counts.entry(pair(&taxa[i], &taxa[j])).or_default();
                    c.1 += a.weight();
                    if a.sides.side_of(&taxa[i]) == a.sides.side_of(&taxa[j]) {
                        c.0 += a.weight();
                    }
                }
            }
        }
        SameSide { counts }
    }

    pub fn get(&self, x: &str, y: &str) -> f64 {
        if x == y {
            return 1.0;
        }
        match self.counts.get(&pair(x, y)) {
            Some(&(s, t)) if t > 0 => s as f64 / t as f64,
            _ => 0.0,
        }
    }

    /// `r(x, y) = 3 sum min(q_xz, q_yz) - sum q_xz - sum q_yz` over `z` in
    /// `within`.
    pub fn r(&self, within: &[Taxon], x: &str, y: &str) -> f64 {
        let mut both = 0.0;
        let mut sx = 0.0;
        let mut sy = 0.0;
        for z in within {
            let (a, b) = (self.get(x, z), self.get(y, z));
            both += a.min(b);
            sx += a;
            sy += b;
        }
        3.0 * both - sx - sy
    }

    /// `u(S, T) = sum q_xy - |S||T|` over `x` in `s` and `y` in `t`.
    pub fn u(&self, s: &[Taxon], t: &[Taxon]) -> f64 {
        let total: f64 = s
            .iter()
            .flat_map(|x| t.iter().map(move |y| (x, y)))
            .map(|(x, y)| self.get(x, y))
            .sum();
        total - (s.len() * t.len()) as f64
    }
}

/// `a(x, y)`: among the simple trinets with `x` and `y` on one arc side,
/// the fraction in which the parent of `x` is an ancestor of `y`.
#[derive(Debug, Clone, Default)]
pub struct Precedence {
    counts: HashMap<(Taxon, Taxon), usize>,
    totals: HashMap<(Taxon, Taxon), usize>,
}

impl Precedence {
    pub fn new(t: &TrinetCollection) -> Self {
        Self::from_analysed(&analyse(t))
    }

    pub(crate) fn from_analysed(trinets: &[Analysed<'_>]) -> Self {
        let mut out = Precedence::default();
        for a in trinets {
            let taxa = a.entry.taxa();
            for x in taxa {
                for y in taxa {
                    if x >= y {
                        continue;
                    }
                    let (Some((sx, px)), Some((sy, py))) = (a.position(x), a.position(y)) else {
                        continue;
                    };
                    if sx != sy {
                        continue;
                    }
                    *out.totals.entry(pair(x, y)).or_default() += a.weight();
                    let first = if px < py {
                        (x.clone(), y.clone())
                    } else {
                        (y.clone(), x.clone())
                    };
                    *out.counts.entry(first).or_default() += a.weight();
                }
            }
        }
        out
    }

    pub fn get(&self, x: &str, y: &str) -> f64 {
        match self.totals.get(&pair(x, y)) {
            Some(&t) if t > 0 => {
                let c = self
                    .counts
                    .get(&(x.to_string(), y.to_string()))
                    .copied()
                    .unwrap_or(0);
                c as f64 / t as f64
            }
            _ => 0.0,
        }
    }

    /// Whether some trinet has `x` and `y` on one arc side.
    pub fn has_evidence(&self, x: &str, y: &str) -> bool {
        self.totals.get(&pair(x, y)).is_some_and(|&t| t > 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enewick::parse;

    #[test]
    fn same_side_counts_with_multiplicity() {
        let mut t = TrinetCollection::new();
        // x and y on one arc side, r below the reticulation
        t.insert_many(parse("((x,(y,(r)#H1)),#H1);").unwrap(), 3);
        // x and y on the two parallel sides
        t.insert(parse("((x,(r)#H1),(y,#H1));").unwrap());
        let q = SameSide::new(&t);
        assert!((q.get("x", "y") - 0.75).abs() < EPS);
        assert_eq!(q.get("x", "x"), 1.0);
        assert_eq!(q.get("x", "r"), 0.0);
        assert_eq!(q.get("x", "zz"), 0.0);
        let a = Precedence::new(&t);
        assert_eq!(a.get("x", "y"), 1.0);
        assert_eq!(a.get("y", "x"), 0.0);
        assert!(!a.has_evidence("x", "r"));
    }

    #[test]
    fn r_separates_sides() {
        // a, b on one parallel side and c, d on the other
        let n = parse("((a,(b,(r)#H1)),(c,(d,#H1)));").unwrap();
        let q = SameSide::new(&n.trinets().unwrap());
        let xc: Vec<Taxon> = ["a", "b", "c", "d"].map(String::from).to_vec();
        assert!((q.r(&xc, "a", "b") - 2.0).abs() < EPS);
        assert!(q.r(&xc, "a", "c") <= -2.0 + EPS);
        assert!((q.r(&xc, "a", "b") - q.r(&xc, "b", "a")).abs() < EPS);
        let ab = ["a", "b"].map(String::from);
        let cd = ["c", "d"].map(String::from);
        assert_eq!(q.u(&ab, &ab), 0.0);
        assert_eq!(q.u(&ab, &cd), -4.0);
    }
}
