use num_traits::Zero;
use proptest::prelude::*;
use relpoly::analysis::{product_reliability, ProductSpec};
use relpoly::complete::CompleteCache;
use relpoly::graphs::{bridges, brute_force_spanning_counts, is_connected, one_point_union, SimpleGraph};
use relpoly::poly::rational::int;
use relpoly::poly::{from_spanning_form, spanning_derivative, Polynomial};

fn graph(v: usize, mask: u32) -> SimpleGraph {
    let pairs: Vec<(usize, usize)> = (0..v).flat_map(|u| (u + 1..v).map(move |w| (u, w))).collect();
    let edges = pairs.into_iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e).collect();
    SimpleGraph::new(v, edges).unwrap()
}

fn reliability(g: &SimpleGraph) -> Polynomial {
    from_spanning_form(&brute_force_spanning_counts(g).unwrap())
}

fn connected() -> impl Strategy<Value = SimpleGraph> {
    (2usize..5, any::<u32>()).prop_map(|(v, m)| graph(v, m)).prop_filter("connected", is_connected)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn one_point_union_multiplies_reliability(g in connected(), h in connected(), a in 0usize..4, b in 0usize..4) {
        let (a, b) = (a % g.vertex_count(), b % h.vertex_count());
        let u = one_point_union(&[g.clone(), h.clone()], &[a, b]).unwrap();
        prop_assert_eq!(reliability(&u), &reliability(&g) * &reliability(&h));
    }

    #[test]
    fn bridgeless_iff_flat_at_zero(g in connected()) {
        let d = reliability(&g).derivative();
        prop_assert_eq!(d.eval(&int(0)).is_zero(), bridges(&g).unwrap().is_empty());
    }

    #[test]
    fn spanning_derivative_matches_expansion(g in connected()) {
        let s = brute_force_spanning_counts(&g).unwrap();
        prop_assert_eq!(from_spanning_form(&spanning_derivative(&s).unwrap()), reliability(&g).derivative());
    }
}

#[test]
fn complete_products_match_glued_graphs() {
    let cache = CompleteCache::new();
    let glued = one_point_union(&[SimpleGraph::complete(3), SimpleGraph::complete(4), SimpleGraph::complete(3)], &[0, 2, 1]).unwrap();
    let spec = ProductSpec::from_pairs(&[(3, 2), (4, 1)]).unwrap();
    assert_eq!(reliability(&glued), product_reliability(&spec, &cache).unwrap());
}
