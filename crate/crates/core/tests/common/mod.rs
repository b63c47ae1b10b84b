#![allow(dead_code)]

use proptest::prelude::*;
use tgs_core::fixtures;
use tgs_core::{Elem, Tgs};

/// Subsets of a 3-bit universe closed under the given operations, with
/// `⊕ = ∪`. With `ring` the family is also closed under `∩` and the ternary
/// product is the triple intersection; otherwise the product is zero.
pub fn set_family(generators: &[u8], ring: bool) -> Tgs {
    let mut family: Vec<u8> = vec![0];
    family.extend(generators.iter().map(|g| g & 0b111));
    loop {
        let mut next = family.clone();
        for &a in &family {
            for &b in &family {
                next.push(a | b);
                if ring {
                    next.push(a & b);
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        if next == family {
            break;
        }
        family = next;
    }
    let labels: Vec<String> = family.iter().map(|s| format!("s{s}")).collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let idx = |s: u8| {
        family
            .iter()
            .position(|&x| x == s)
            .expect("family is closed")
    };
    let f = family.clone();
    let tern = move |x: usize, y: usize, z: usize| if ring { idx(f[x] & f[y] & f[z]) } else { 0 };
    Tgs::from_fns(
        &refs,
        0,
        |x, y| idx(family[x] | family[y]),
        tern,
        &[("e", &|x| x)],
    )
    .expect("tables are in range")
}

/// Structures known to satisfy every axiom.
pub fn valid_tgs() -> impl Strategy<Value = Tgs> {
    prop_oneof![
        Just(fixtures::m3()),
        Just(fixtures::chain2()),
        Just(fixtures::m3xm3()),
        Just(fixtures::diamond()),
        (prop::collection::vec(any::<u8>(), 1..4), any::<bool>())
            .prop_map(|(g, ring)| set_family(&g, ring)),
    ]
}

/// Arbitrary tables over 2 to 4 elements; usually invalid.
pub fn any_tgs() -> impl Strategy<Value = Tgs> {
    (2usize..=4).prop_flat_map(|m| {
        (
            prop::collection::vec(0..m, m * m),
            prop::collection::vec(0..m, m * m * m),
            prop::collection::vec(0..m, m),
        )
            .prop_map(move |(plus, ternary, gamma)| {
                let labels = (0..m).map(|i| format!("e{i}")).collect();
                Tgs::from_tables(
                    labels,
                    Elem::from_index(0),
                    plus.into_iter().map(Elem::from_index).collect(),
                    ternary.into_iter().map(Elem::from_index).collect(),
                    vec!["g".into()],
                    gamma.into_iter().map(Elem::from_index).collect(),
                )
                .expect("tables are in range")
            })
    })
}
