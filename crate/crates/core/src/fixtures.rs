//! Bundled example networks. Each loader checks the properties it promises
//! and panics if the bundled data does not have them.

use crate::collection::TrinetCollection;
use crate::enewick::parse;
use crate::generator::{CatalogId, Generator};
use crate::network::Network;

pub const LEVEL3_N1: &str = include_str!("../data/level3_n1.enwk");
pub const LEVEL3_N2: &str = include_str!("../data/level3_n2.enwk");
pub const CUT_SET_EXAMPLE: &str = include_str!("../data/cut_set_example.enwk");
pub const CUT_SET_EXAMPLE_TRINETS: &str = include_str!("../data/cut_set_example.tnt");

fn load(text: &str) -> Network {
    parse(text.trim()).expect("bundled network parses")
}

/// Two distinct level-3 networks on `a..d` with the same trinets.
pub fn level3_pair() -> (Network, Network) {
    let (n1, n2) = (load(LEVEL3_N1), load(LEVEL3_N2));
    assert!(
        n1.is_strict_level(3) && n2.is_strict_level(3),
        "bundled pair is not level 3"
    );
    (n1, n2)
}

/// A level-2 network on `a..e` whose only minimal cut-arc set is `{c, d}`.
pub fn cut_set_example() -> Network {
    let n = load(CUT_SET_EXAMPLE);
    assert!(n.is_strict_level(2), "bundled example is not level 2");
    let sets = n.minimal_cut_arc_sets_or_all();
    assert!(
        sets.len() == 1
            && sets
                .iter()
                .next()
                .is_some_and(|s| s.iter().eq(["c", "d"].iter())),
        "bundled example has minimal cut-arc sets {sets:?}"
    );
    n
}

/// The trinets of [`cut_set_example`], read from the bundled trinet file.
pub fn cut_set_example_trinets() -> TrinetCollection {
    let t = crate::trinet_file::read(CUT_SET_EXAMPLE_TRINETS).expect("bundled trinet file parses");
    assert_eq!(t.total(), 10, "bundled trinet file is incomplete");
    t
}

/// The catalog generators in catalog order.
pub fn generators() -> Vec<(CatalogId, Generator)> {
    CatalogId::ALL
        .into_iter()
        .map(|id| (id, id.entry().generator.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level3_pair_shares_trinets() {
        let (n1, n2) = level3_pair();
        assert!(n1.is_valid() && n2.is_valid());
        assert!(n1.is_recoverable() && n2.is_recoverable());
        assert_eq!((n1.level(), n2.level()), (3, 3));
        assert!(!n1.isomorphic(&n2));
        assert!(n1.trinets().unwrap().set_equal(&n2.trinets().unwrap()));
    }

    #[test]
    fn cut_set_example_is_level_two() {
        let n = cut_set_example();
        assert!(n.is_valid() && n.is_recoverable());
        assert_eq!(n.level(), 2);
        let only: std::collections::BTreeSet<_> =
            [["c", "d"].into_iter().map(String::from).collect()]
                .into_iter()
                .collect();
        assert_eq!(n.minimal_cut_arc_sets_or_all(), only);
        let t = n.trinets().unwrap();
        assert_eq!(
            crate::cutset::find_cut_arc_set(&t).unwrap(),
            only.into_iter().next().unwrap()
        );
        assert!(crate::reconstruct::reconstruct(&t).unwrap().isomorphic(&n));
        assert!(cut_set_example_trinets().set_equal(&t));
        assert_eq!(cut_set_example_trinets().total(), t.total());
    }

    #[test]
    fn generators_are_identified_as_themselves() {
        for (id, g) in generators() {
            assert_eq!(g.identify().unwrap().id, id);
        }
    }
}
