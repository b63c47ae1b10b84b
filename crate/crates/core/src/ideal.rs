//! k-ideals: membership test, enumeration, generated ideals, annihilators,
//! and prime/semiprime tests.

use serde::Serialize;
use serde_json::{json, Value};

use crate::elem::{Elem, ElemSet};
use crate::error::{Result, TgsError};
use crate::tgs::Tgs;

/// Which predicate defines a k-ideal.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdealMode {
    /// Zero, downward closure, absorption, and closure under `⊕`.
    #[default]
    PlusClosed,
    /// Zero, downward closure, and absorption only.
    Literal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "clause", rename_all = "kebab-case")]
pub enum IdealViolation {
    MissingZero,
    /// `below ≤ member`, `member` in the set, `below` not.
    NotDownwardClosed {
        member: Elem,
        below: Elem,
    },
    /// The product of `args` (one of them a member) leaves the set.
    NotAbsorbing {
        args: [Elem; 3],
        value: Elem,
    },
    NotPlusClosed {
        x: Elem,
        y: Elem,
        sum: Elem,
    },
}

impl IdealViolation {
    pub fn render(&self, t: &Tgs) -> String {
        let l = |x: Elem| t.label(x);
        match *self {
            IdealViolation::MissingZero => format!("zero {} is missing", l(t.zero())),
            IdealViolation::NotDownwardClosed { member, below } => {
                format!("{} ≤ {} but {} is missing", l(below), l(member), l(below))
            }
            IdealViolation::NotAbsorbing { args, value } => {
                format!(
                    "[{},{},{}] = {} is missing",
                    l(args[0]),
                    l(args[1]),
                    l(args[2]),
                    l(value)
                )
            }
            IdealViolation::NotPlusClosed { x, y, sum } => {
                format!("{}⊕{} = {} is missing", l(x), l(y), l(sum))
            }
        }
    }

    pub fn to_json(&self, t: &Tgs) -> Value {
        let clause = match self {
            IdealViolation::MissingZero => "missing-zero",
            IdealViolation::NotDownwardClosed { .. } => "not-downward-closed",
            IdealViolation::NotAbsorbing { .. } => "not-absorbing",
            IdealViolation::NotPlusClosed { .. } => "not-plus-closed",
        };
        json!({ "clause": clause, "text": self.render(t) })
    }
}

/// A subset of the carrier satisfying the k-ideal predicate of `mode`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct KIdeal {
    members: ElemSet,
    mode: IdealMode,
    owner: u64,
}

impl KIdeal {
    pub fn new(
        t: &Tgs,
        members: ElemSet,
        mode: IdealMode,
    ) -> std::result::Result<KIdeal, IdealViolation> {
        is_k_ideal(t, members, mode)?;
        Ok(KIdeal {
            members,
            mode,
            owner: t.fingerprint(),
        })
    }

    /// `{0}`. It is an ideal exactly when zero is absorbing.
    pub fn zero(t: &Tgs, mode: IdealMode) -> std::result::Result<KIdeal, IdealViolation> {
        KIdeal::new(t, ElemSet::singleton(t.zero()), mode)
    }

    pub fn members(&self) -> ElemSet {
        self.members
    }

    pub fn mode(&self) -> IdealMode {
        self.mode
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.members.contains(x)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.members.len() == 1
    }

    pub fn belongs_to(&self, t: &Tgs) -> bool {
        self.owner == t.fingerprint()
    }

    fn same_parent(&self, other: &KIdeal) -> Result<()> {
        if self.owner != other.owner || self.mode != other.mode {
            return Err(TgsError::Usage(
                "ideals belong to different structures or modes".into(),
            ));
        }
        Ok(())
    }
}

/// Checks the clauses in order: zero, downward closure, absorption, `⊕`.
///
/// Absorption first scans products with at least one multiplier from outside
/// the set, then products whose three arguments all lie inside it.
pub fn is_k_ideal(t: &Tgs, s: ElemSet, mode: IdealMode) -> std::result::Result<(), IdealViolation> {
    if !s.contains(t.zero()) {
        return Err(IdealViolation::MissingZero);
    }
    for member in s.iter() {
        for below in t.elements() {
            if t.leq(below, member) && !s.contains(below) {
                return Err(IdealViolation::NotDownwardClosed { member, below });
            }
        }
    }
    for inside in [false, true] {
        for a in s.iter() {
            for x in t.elements() {
                for y in t.elements() {
                    if (s.contains(x) && s.contains(y)) != inside {
                        continue;
                    }
                    for args in [[x, y, a], [x, a, y], [a, x, y]] {
                        let value = t.ternary(args[0], args[1], args[2]);
                        if !s.contains(value) {
                            return Err(IdealViolation::NotAbsorbing { args, value });
                        }
                    }
                }
            }
        }
    }
    if mode == IdealMode::PlusClosed {
        for x in s.iter() {
            for y in s.iter() {
                let sum = t.plus(x, y);
                if !s.contains(sum) {
                    return Err(IdealViolation::NotPlusClosed { x, y, sum });
                }
            }
        }
    }
    Ok(())
}

/// Largest carrier [`enumerate_k_ideals`] accepts by default.
pub const DEFAULT_IDEAL_CARRIER_BOUND: usize = 12;

/// All k-ideals in canonical order (cardinality, then member lists).
///
/// Candidates are the downsets of the `⊕`-order that contain zero, generated
/// by walking the elements in a linear extension of the order; each
/// candidate is then filtered through [`is_k_ideal`].
pub fn enumerate_k_ideals(t: &Tgs, mode: IdealMode, carrier_bound: usize) -> Result<Vec<KIdeal>> {
    let m = t.size();
    if m > carrier_bound {
        return Err(TgsError::BoundExceeded {
            what: "carrier for ideal enumeration".into(),
            size: m as u128,
            bound: carrier_bound as u128,
        });
    }
    let mut order: Vec<Elem> = t.elements().collect();
    order.sort_by_key(|&x| (t.below(x).len(), x));
    let strictly_below: Vec<ElemSet> = t
        .elements()
        .map(|x| {
            let mut b = t.below(x);
            b.remove(x);
            b
        })
        .collect();

    let mut candidates = Vec::new();
    fn walk(
        i: usize,
        current: ElemSet,
        order: &[Elem],
        strictly_below: &[ElemSet],
        zero: Elem,
        out: &mut Vec<ElemSet>,
    ) {
        if i == order.len() {
            out.push(current);
            return;
        }
        let x = order[i];
        if x != zero {
            walk(i + 1, current, order, strictly_below, zero, out);
        }
        if strictly_below[x.index()].is_subset(current) || x == zero {
            let mut next = current;
            next.insert(x);
            walk(i + 1, next, order, strictly_below, zero, out);
        }
    }
    walk(
        0,
        ElemSet::EMPTY,
        &order,
        &strictly_below,
        t.zero(),
        &mut candidates,
    );

    let owner = t.fingerprint();
    let mut ideals: Vec<KIdeal> = candidates
        .into_iter()
        .filter(|&s| is_k_ideal(t, s, mode).is_ok())
        .map(|members| KIdeal {
            members,
            mode,
            owner,
        })
        .collect();
    ideals.sort_by(|a, b| a.members.canonical_cmp(b.members));
    ideals.dedup();
    Ok(ideals)
}

/// The least k-ideal containing `seed` (and zero).
pub fn ideal_closure(t: &Tgs, seed: ElemSet, mode: IdealMode) -> KIdeal {
    let mut s = seed;
    s.insert(t.zero());
    loop {
        let mut next = s;
        for a in s.iter() {
            next = next.union(t.below(a));
            for x in t.elements() {
                for y in t.elements() {
                    next.insert(t.ternary(x, y, a));
                    next.insert(t.ternary(x, a, y));
                    next.insert(t.ternary(a, x, y));
                }
            }
            if mode == IdealMode::PlusClosed {
                for b in s.iter() {
                    next.insert(t.plus(a, b));
                }
            }
        }
        if next == s {
            break;
        }
        s = next;
    }
    debug_assert!(is_k_ideal(t, s, mode).is_ok());
    KIdeal {
        members: s,
        mode,
        owner: t.fingerprint(),
    }
}

pub fn meet(i: &KIdeal, j: &KIdeal) -> Result<KIdeal> {
    i.same_parent(j)?;
    Ok(KIdeal {
        members: i.members.intersection(j.members),
        ..*i
    })
}

pub fn join(t: &Tgs, i: &KIdeal, j: &KIdeal) -> Result<KIdeal> {
    i.same_parent(j)?;
    if !i.belongs_to(t) {
        return Err(TgsError::Usage(
            "ideals do not belong to this structure".into(),
        ));
    }
    Ok(ideal_closure(t, i.members.union(j.members), i.mode))
}

/// Members `x ≠ 0` with no other nonzero member strictly below them. Empty
/// for the zero ideal.
pub fn minimal_nonzero_elements(t: &Tgs, members: ElemSet) -> ElemSet {
    let mut nonzero = members;
    nonzero.remove(t.zero());
    nonzero
        .iter()
        .filter(|&x| !nonzero.iter().any(|y| y != x && t.leq(y, x)))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Annihilator {
    pub members: ElemSet,
    /// Whether the annihilator itself passes the k-ideal test.
    pub ideal_check: std::result::Result<(), IdealViolation>,
}

/// `{x : [x,a,y] = 0 for all a ∈ A, y ∈ T}`.
pub fn annihilator(t: &Tgs, a: ElemSet, mode: IdealMode) -> Annihilator {
    let zero = t.zero();
    let members: ElemSet = t
        .elements()
        .filter(|&x| {
            a.iter()
                .all(|ai| t.elements().all(|y| t.ternary(x, ai, y) == zero))
        })
        .collect();
    Annihilator {
        members,
        ideal_check: is_k_ideal(t, members, mode),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum PrimeVerdict {
    Holds,
    /// `[x,y,z]` lies in the ideal but none of `x, y, z` does.
    Fails {
        args: [Elem; 3],
        value: Elem,
    },
    /// The ideal is the whole carrier.
    NotApplicable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SemiprimeVerdict {
    Holds,
    /// `[x,x,x]` lies in the ideal but `x` does not.
    Fails {
        x: Elem,
        value: Elem,
    },
    NotApplicable,
}

pub fn is_prime(t: &Tgs, p: &KIdeal) -> PrimeVerdict {
    if p.members == t.carrier() {
        return PrimeVerdict::NotApplicable;
    }
    for x in t.elements() {
        for y in t.elements() {
            for z in t.elements() {
                let value = t.ternary(x, y, z);
                if p.contains(value) && !p.contains(x) && !p.contains(y) && !p.contains(z) {
                    return PrimeVerdict::Fails {
                        args: [x, y, z],
                        value,
                    };
                }
            }
        }
    }
    PrimeVerdict::Holds
}

pub fn is_semiprime(t: &Tgs, p: &KIdeal) -> SemiprimeVerdict {
    if p.members == t.carrier() {
        return SemiprimeVerdict::NotApplicable;
    }
    for x in t.elements() {
        let value = t.ternary(x, x, x);
        if p.contains(value) && !p.contains(x) {
            return SemiprimeVerdict::Fails { x, value };
        }
    }
    SemiprimeVerdict::Holds
}
