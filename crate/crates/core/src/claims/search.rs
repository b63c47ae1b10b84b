//! Seeded random search for small valid structures.
//!
//! Candidates have a carrier of at most four elements, a random idempotent
//! commutative addition with zero as identity, a ternary product
//! `[x,y,z] = (x·y)·z` from a random commutative binary table with zero
//! absorbing, and a trivial Γ-action. Each is filtered through the axiom
//! checker.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::axioms::is_valid;
use crate::elem::Elem;
use crate::tgs::Tgs;

pub const DEFAULT_CANDIDATES: u64 = 100_000;
pub const MAX_SEARCH_CARRIER: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub seed: u64,
    pub candidates: u64,
    /// Carrier sizes are drawn from `2..=max_size`, capped at four.
    pub max_size: usize,
    /// Stop after this many distinct valid structures.
    pub keep: usize,
}

impl SearchConfig {
    pub fn new(seed: u64) -> SearchConfig {
        SearchConfig {
            seed,
            candidates: DEFAULT_CANDIDATES,
            max_size: MAX_SEARCH_CARRIER,
            keep: 4,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// Candidates actually generated.
    pub candidates: u64,
    /// Distinct valid structures in discovery order, excluding those whose
    /// ternary product is constantly zero.
    pub found: Vec<Tgs>,
}

fn candidate(rng: &mut ChaCha8Rng, m: usize) -> Tgs {
    let mut plus = vec![0usize; m * m];
    let mut mul = vec![0usize; m * m];
    for x in 0..m {
        plus[x] = x;
        plus[x * m] = x;
        plus[x * m + x] = x;
    }
    for x in 1..m {
        for y in x..m {
            if x != y {
                let s = rng.random_range(0..m);
                plus[x * m + y] = s;
                plus[y * m + x] = s;
            }
            let p = rng.random_range(0..m);
            mul[x * m + y] = p;
            mul[y * m + x] = p;
        }
    }
    let mut ternary = Vec::with_capacity(m * m * m);
    for x in 0..m {
        for y in 0..m {
            for z in 0..m {
                ternary.push(Elem::from_index(mul[mul[x * m + y] * m + z]));
            }
        }
    }
    let labels = (0..m)
        .map(|i| {
            if i == 0 {
                "0".to_string()
            } else {
                format!("x{i}")
            }
        })
        .collect();
    Tgs::from_tables(
        labels,
        Elem::from_index(0),
        plus.into_iter().map(Elem::from_index).collect(),
        ternary,
        vec!["e".into()],
        (0..m).map(Elem::from_index).collect(),
    )
    .expect("candidate tables are well formed")
    .with_description(format!("random search candidate, |T| = {m}"))
}

pub fn search_valid(cfg: &SearchConfig) -> SearchOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let top = cfg.max_size.clamp(2, MAX_SEARCH_CARRIER);
    let mut found: Vec<Tgs> = Vec::new();
    let mut generated = 0;
    while generated < cfg.candidates && found.len() < cfg.keep {
        generated += 1;
        let m = rng.random_range(2..=top);
        let t = candidate(&mut rng, m);
        let trivial = t.elements().all(|x| {
            t.elements()
                .all(|y| t.elements().all(|z| t.ternary(x, y, z) == t.zero()))
        });
        if !trivial && is_valid(&t) && !found.contains(&t) {
            found.push(t);
        }
    }
    SearchOutcome {
        candidates: generated,
        found,
    }
}
