use proptest::prelude::*;
use trinets::cutset::{closure_digraph, omega};
use trinets::{enewick, random_network, reconstruct, trinet_file, Network, RandomNetSpec};

fn network(leaves: usize, level: usize, seed: u64) -> Network {
    random_network(&RandomNetSpec::new(leaves, level, seed)).unwrap()
}

/// The same network with its vertices renumbered by `perm`.
fn renumber(net: &Network, perm: &[usize]) -> Network {
    let n = net.node_count();
    let mut children = vec![Vec::new(); n];
    let mut labels = vec![None; n];
    for v in 0..n {
        children[perm[v]] = net.children(v).iter().rev().map(|&c| perm[c]).collect();
        labels[perm[v]] = net.label(v).map(String::from);
    }
    Network::from_children(children, labels)
}

fn choose3(n: usize) -> usize {
    n * (n - 1) * (n - 2) / 6
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn writer_output_reparses_to_the_same_text(leaves in 3usize..12, level in 0usize..3, seed in any::<u64>()) {
        let net = network(leaves, level, seed);
        let text = enewick::write(&net);
        let back = enewick::parse(&text).unwrap();
        prop_assert!(back.isomorphic(&net));
        prop_assert_eq!(enewick::write(&back), text);
    }

    #[test]
    fn canonical_key_ignores_vertex_numbering(leaves in 3usize..10, seed in any::<u64>(), shuffle in any::<u64>()) {
        let net = network(leaves, 2, seed);
        let mut perm: Vec<usize> = (0..net.node_count()).collect();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(shuffle);
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
        let other = renumber(&net, &perm);
        prop_assert!(other.isomorphic(&net));
        prop_assert_eq!(enewick::canonical_key(&other), enewick::canonical_key(&net));
    }

    #[test]
    fn random_networks_are_recoverable_level_two(leaves in 3usize..13, level in 0usize..3, seed in any::<u64>()) {
        let net = network(leaves, level, seed);
        prop_assert!(net.is_valid());
        prop_assert!(net.is_recoverable());
        prop_assert!(net.level() <= level);
        prop_assert_eq!(net.leaf_count(), leaves);
    }

    #[test]
    fn trinets_cover_every_triple(leaves in 3usize..10, seed in any::<u64>()) {
        let net = network(leaves, 2, seed);
        let t = net.trinets().unwrap();
        prop_assert_eq!(t.total(), choose3(leaves));
        prop_assert_eq!(t.taxa(), &net.taxa());
        for e in t.iter() {
            prop_assert!(e.network.is_valid() && e.network.is_recoverable());
            prop_assert!(e.info().level <= net.level());
        }
        let all = net.restrict(net.taxa().iter().map(String::as_str)).unwrap();
        prop_assert!(all.isomorphic(&net));
    }

    #[test]
    fn trinet_files_keep_multiplicities(leaves in 3usize..9, seed in any::<u64>()) {
        let t = network(leaves, 2, seed).binets_and_trinets().unwrap();
        let back = trinet_file::read(&trinet_file::write_collection(&t)).unwrap();
        prop_assert!(back.set_equal(&t));
        for e in t.iter() {
            prop_assert_eq!(back.multiplicity_of(&e.network), e.multiplicity);
        }
    }

    #[test]
    fn omega_zero_is_the_closure_digraph(leaves in 3usize..10, seed in any::<u64>()) {
        let net = network(leaves, 2, seed);
        let t = net.trinets().unwrap();
        let d = closure_digraph(&t);
        prop_assert_eq!(&omega(&t, 0), &d);
        prop_assert_eq!(d.minimal_sink_sets(), net.minimal_cut_arc_sets_or_all());
    }

    #[test]
    fn trinets_determine_the_network(leaves in 3usize..11, seed in any::<u64>(), binets in any::<bool>()) {
        let net = network(leaves, 2, seed);
        let t = if binets { net.binets_and_trinets().unwrap() } else { net.trinets().unwrap() };
        let r = reconstruct(&t).unwrap();
        prop_assert!(r.isomorphic(&net), "{} rebuilt as {}", net, r);
    }

    #[test]
    fn repeated_entries_do_not_change_the_result(leaves in 3usize..9, seed in any::<u64>(), extra in 1usize..4) {
        let net = network(leaves, 2, seed);
        let mut t = net.trinets().unwrap();
        let first = t.iter().next().unwrap().network.as_ref().clone();
        t.insert_many(first, extra);
        prop_assert!(reconstruct(&t).unwrap().isomorphic(&net));
    }
}
