//! Property tests for the pointwise layer: extents against incidence,
//! classification against extents, and transport functoriality.

use proptest::prelude::*;

use catdb_core::cls::Classification;
use catdb_core::map::FinMap;
use catdb_core::sig::{classify_tuple, tuple_transport, Signature, Tup};

fn arb_classification() -> impl Strategy<Value = Classification> {
    (1usize..=4, 1usize..=5)
        .prop_flat_map(|(nt, ni)| {
            (
                Just(nt),
                Just(ni),
                proptest::collection::vec(any::<bool>(), nt * ni),
            )
        })
        .prop_map(|(nt, ni, bits)| {
            let types: Vec<String> = (0..nt).map(|i| format!("T{i}")).collect();
            let instances: Vec<String> = (0..ni).map(|i| format!("y{i}")).collect();
            let mut incidence = Vec::new();
            for (idx, bit) in bits.iter().enumerate() {
                if *bit {
                    incidence.push((instances[idx / nt].clone(), types[idx % nt].clone()));
                }
            }
            Classification::new(types, instances, incidence).unwrap()
        })
}

proptest! {
    #[test]
    fn extent_respects_incidence_exactly(e in arb_classification()) {
        for x in e.types() {
            let extent = e.extent(x).unwrap();
            for y in e.instances() {
                prop_assert_eq!(extent.contains(y), e.holds(y, x));
            }
        }
    }

    #[test]
    fn classification_is_pointwise_extent_membership(
        e in arb_classification(),
        col_sorts in proptest::collection::vec(0usize..4, 0..4),
        entries in proptest::collection::vec(0usize..5, 0..4),
    ) {
        let types: Vec<String> = e.types().iter().cloned().collect();
        let instances: Vec<String> = e.instances().iter().cloned().collect();
        let sig = Signature::new(
            e.types().iter().cloned(),
            col_sorts
                .iter()
                .enumerate()
                .map(|(i, s)| (format!("c{i}"), types[s % types.len()].clone())),
        )
        .unwrap();
        let tup = Tup::new(
            entries
                .iter()
                .enumerate()
                .map(|(i, y)| (format!("c{i}"), instances[y % instances.len()].clone())),
        )
        .unwrap();
        let classified = classify_tuple(&e, &sig, &tup);
        let pointwise = sig.arity() == tup.arity()
            && sig.sorts().iter().all(|(col, sort)| {
                e.extent(sort).unwrap().contains(tup.get(col).unwrap())
            });
        prop_assert_eq!(classified, pointwise);
    }

    #[test]
    fn transport_is_functorial(
        n1 in 1usize..4,
        n2 in 1usize..4,
        n3 in 1usize..4,
        ny in 1usize..4,
        h1_idx in proptest::collection::vec(any::<usize>(), 4),
        h2_idx in proptest::collection::vec(any::<usize>(), 4),
        g1_idx in proptest::collection::vec(any::<usize>(), 4),
        g2_idx in proptest::collection::vec(any::<usize>(), 4),
        t_idx in proptest::collection::vec(any::<usize>(), 4),
    ) {
        let index_set = |prefix: &str, n: usize| -> Vec<String> {
            (0..n).map(|i| format!("{prefix}{i}")).collect()
        };
        let i1 = index_set("a", n1);
        let i2 = index_set("b", n2);
        let i3 = index_set("c", n3);
        let y1 = index_set("u", ny);
        let y2 = index_set("v", ny);
        let y3 = index_set("w", ny);
        let map_from = |dom: &[String], cod: &[String], idx: &[usize]| -> FinMap {
            FinMap::new(
                dom.iter()
                    .enumerate()
                    .map(|(i, d)| (d.clone(), cod[idx[i % idx.len()] % cod.len()].clone()))
                    .collect::<Vec<_>>(),
            )
            .unwrap()
        };
        let h1 = map_from(&i2, &i1, &h1_idx);
        let h2 = map_from(&i3, &i2, &h2_idx);
        let g1 = map_from(&y1, &y2, &g1_idx);
        let g2 = map_from(&y2, &y3, &g2_idx);
        let t1 = Tup::new(
            i1.iter()
                .enumerate()
                .map(|(i, c)| (c.clone(), y1[t_idx[i % t_idx.len()] % ny].clone()))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        // sequential transport equals transport along the composites
        let step = tuple_transport(&tuple_transport(&t1, &h1, &g1).unwrap(), &h2, &g2).unwrap();
        let direct =
            tuple_transport(&t1, &h2.then(&h1).unwrap(), &g1.then(&g2).unwrap()).unwrap();
        prop_assert_eq!(step, direct);
        // transport along identities is the identity
        let same = tuple_transport(
            &t1,
            &FinMap::identity(i1.iter().cloned()),
            &FinMap::identity(y1.iter().cloned()),
        )
        .unwrap();
        prop_assert_eq!(same, t1);
    }
}
