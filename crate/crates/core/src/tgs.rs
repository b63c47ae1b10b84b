//! Finite commutative ternary Γ-semirings given by explicit operation tables.
//!
//! A [`Tgs`] owns a carrier of labelled elements, the addition table, the
//! ternary product table, and one unary table per Γ-action label. Nothing
//! about the axioms is enforced at construction time; see
//! [`crate::axioms::check_axioms`] for that. Only the table shapes and index
//! ranges are validated, so broken structures can still be loaded and
//! diagnosed.

use std::collections::{BTreeMap, HashSet};
use std::hash::{Hash, Hasher};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::elem::{Elem, ElemSet, MAX_CARRIER};
use crate::error::{Result, TgsError};

/// JSON interchange form of a [`Tgs`]. Every table entry is an element label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TgsDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub elements: Vec<String>,
    pub zero: String,
    pub gamma: Vec<String>,
    pub plus: Vec<Vec<String>>,
    pub ternary: Vec<Vec<Vec<String>>>,
    pub gamma_action: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tgs {
    description: Option<String>,
    labels: Vec<String>,
    zero: Elem,
    plus: Vec<Elem>,
    ternary: Vec<Elem>,
    gamma: Vec<String>,
    gamma_action: Vec<Elem>,
    leq: Vec<bool>,
}

/// The relation `x ≤ y ⇔ x ⊕ y = y`, tabulated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderRelation {
    m: usize,
    leq: Vec<bool>,
}

impl OrderRelation {
    pub fn leq(&self, x: Elem, y: Elem) -> bool {
        self.leq[x.index() * self.m + y.index()]
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.m).all(|x| self.leq[x * self.m + x])
    }

    pub fn is_antisymmetric(&self) -> bool {
        let m = self.m;
        (0..m).all(|x| (0..m).all(|y| x == y || !(self.leq[x * m + y] && self.leq[y * m + x])))
    }

    pub fn is_transitive(&self) -> bool {
        let m = self.m;
        (0..m).all(|x| {
            (0..m).all(|y| {
                !self.leq[x * m + y] || (0..m).all(|z| !self.leq[y * m + z] || self.leq[x * m + z])
            })
        })
    }

    pub fn is_partial_order(&self) -> bool {
        self.is_reflexive() && self.is_antisymmetric() && self.is_transitive()
    }

    /// The element below every other element, if there is one.
    pub fn minimum(&self) -> Option<Elem> {
        let m = self.m;
        (0..m)
            .find(|&x| (0..m).all(|y| self.leq[x * m + y]))
            .map(Elem::from_index)
    }
}

impl Tgs {
    /// Builds a structure from flat tables. `plus` is row-major `m×m`,
    /// `ternary` is `m×m×m` with the first argument slowest, and
    /// `gamma_action` is `|Γ|×m`.
    pub fn from_tables(
        labels: Vec<String>,
        zero: Elem,
        plus: Vec<Elem>,
        ternary: Vec<Elem>,
        gamma: Vec<String>,
        gamma_action: Vec<Elem>,
    ) -> Result<Tgs> {
        let m = labels.len();
        if m == 0 {
            return Err(TgsError::Malformed("carrier is empty".into()));
        }
        if m > MAX_CARRIER {
            return Err(TgsError::BoundExceeded {
                what: "carrier".into(),
                size: m as u128,
                bound: MAX_CARRIER as u128,
            });
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(TgsError::Malformed(format!(
                    "duplicate element label `{l}`"
                )));
            }
        }
        let mut seen = HashSet::new();
        for g in &gamma {
            if !seen.insert(g.as_str()) {
                return Err(TgsError::Malformed(format!("duplicate gamma label `{g}`")));
            }
        }
        if plus.len() != m * m {
            return Err(TgsError::Malformed(format!(
                "plus table has {} entries, expected {}",
                plus.len(),
                m * m
            )));
        }
        if ternary.len() != m * m * m {
            return Err(TgsError::Malformed(format!(
                "ternary table has {} entries, expected {}",
                ternary.len(),
                m * m * m
            )));
        }
        if gamma_action.len() != gamma.len() * m {
            return Err(TgsError::Malformed(
                "gamma_action table does not match gamma labels".into(),
            ));
        }
        for e in std::iter::once(&zero)
            .chain(&plus)
            .chain(&ternary)
            .chain(&gamma_action)
        {
            if e.index() >= m {
                return Err(TgsError::IndexOutOfRange {
                    index: e.index(),
                    size: m,
                });
            }
        }
        let leq = (0..m * m)
            .map(|i| plus[i] == Elem::from_index(i % m))
            .collect();
        Ok(Tgs {
            description: None,
            labels,
            zero,
            plus,
            ternary,
            gamma,
            gamma_action,
            leq,
        })
    }

    /// Tabulates operations given as closures over element indices.
    pub fn from_fns(
        labels: &[&str],
        zero: usize,
        plus: impl Fn(usize, usize) -> usize,
        ternary: impl Fn(usize, usize, usize) -> usize,
        gamma: &[(&str, &dyn Fn(usize) -> usize)],
    ) -> Result<Tgs> {
        let m = labels.len();
        let e = Elem::from_index;
        let mut p = Vec::with_capacity(m * m);
        for x in 0..m {
            for y in 0..m {
                p.push(e(plus(x, y)));
            }
        }
        let mut t = Vec::with_capacity(m * m * m);
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    t.push(e(ternary(x, y, z)));
                }
            }
        }
        let mut ga = Vec::with_capacity(gamma.len() * m);
        for (_, f) in gamma {
            for x in 0..m {
                ga.push(e(f(x)));
            }
        }
        Tgs::from_tables(
            labels.iter().map(|s| s.to_string()).collect(),
            e(zero),
            p,
            t,
            gamma.iter().map(|(g, _)| g.to_string()).collect(),
            ga,
        )
    }

    pub fn with_description(mut self, description: impl Into<String>) -> Tgs {
        self.description = Some(description.into());
        self
    }

    pub fn description(&self) -> Option<&str> {
        self.description.as_deref()
    }

    pub fn from_document(doc: &TgsDocument) -> Result<Tgs> {
        let m = doc.elements.len();
        let lookup = |label: &str| -> Result<Elem> {
            doc.elements
                .iter()
                .position(|l| l == label)
                .map(Elem::from_index)
                .ok_or_else(|| TgsError::UnknownLabel(label.to_string()))
        };
        if m == 0 {
            return Err(TgsError::Malformed("carrier is empty".into()));
        }
        if m > MAX_CARRIER {
            return Err(TgsError::BoundExceeded {
                what: "carrier".into(),
                size: m as u128,
                bound: MAX_CARRIER as u128,
            });
        }
        let zero = lookup(&doc.zero)?;
        if doc.plus.len() != m || doc.plus.iter().any(|row| row.len() != m) {
            return Err(TgsError::Malformed(format!("plus table must be {m}×{m}")));
        }
        let plus = doc
            .plus
            .iter()
            .flatten()
            .map(|l| lookup(l))
            .collect::<Result<Vec<_>>>()?;
        if doc.ternary.len() != m
            || doc
                .ternary
                .iter()
                .any(|plane| plane.len() != m || plane.iter().any(|row| row.len() != m))
        {
            return Err(TgsError::Malformed(format!(
                "ternary table must be {m}×{m}×{m}"
            )));
        }
        let ternary = doc
            .ternary
            .iter()
            .flatten()
            .flatten()
            .map(|l| lookup(l))
            .collect::<Result<Vec<_>>>()?;
        for key in doc.gamma_action.keys() {
            if !doc.gamma.contains(key) {
                return Err(TgsError::UnknownLabel(key.clone()));
            }
        }
        let mut gamma_action = Vec::with_capacity(doc.gamma.len() * m);
        for g in &doc.gamma {
            let row = doc.gamma_action.get(g).ok_or_else(|| {
                TgsError::Malformed(format!("gamma_action missing entry for `{g}`"))
            })?;
            if row.len() != m {
                return Err(TgsError::Malformed(format!(
                    "gamma_action for `{g}` must have {m} entries"
                )));
            }
            for l in row {
                gamma_action.push(lookup(l)?);
            }
        }
        let mut t = Tgs::from_tables(
            doc.elements.clone(),
            zero,
            plus,
            ternary,
            doc.gamma.clone(),
            gamma_action,
        )?;
        t.description = doc.description.clone();
        Ok(t)
    }

    pub fn to_document(&self) -> TgsDocument {
        let m = self.size();
        let l = |e: &Elem| self.labels[e.index()].clone();
        TgsDocument {
            description: self.description.clone(),
            elements: self.labels.clone(),
            zero: self.labels[self.zero.index()].clone(),
            gamma: self.gamma.clone(),
            plus: self
                .plus
                .chunks(m)
                .map(|row| row.iter().map(l).collect())
                .collect(),
            ternary: self
                .ternary
                .chunks(m * m)
                .map(|plane| {
                    plane
                        .chunks(m)
                        .map(|row| row.iter().map(l).collect())
                        .collect()
                })
                .collect(),
            gamma_action: self
                .gamma
                .iter()
                .zip(self.gamma_action.chunks(m))
                .map(|(g, row)| (g.clone(), row.iter().map(l).collect()))
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Tgs> {
        let doc: TgsDocument = serde_json::from_str(text)?;
        Tgs::from_document(&doc)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Tgs> {
        Tgs::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("document serializes")
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn zero(&self) -> Elem {
        self.zero
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.size()).map(Elem::from_index)
    }

    pub fn carrier(&self) -> ElemSet {
        ElemSet::full(self.size())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: Elem) -> &str {
        &self.labels[x.index()]
    }

    pub fn elem(&self, label: &str) -> Result<Elem> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(Elem::from_index)
            .ok_or_else(|| TgsError::UnknownLabel(label.to_string()))
    }

    pub fn set_of(&self, labels: &[impl AsRef<str>]) -> Result<ElemSet> {
        labels.iter().map(|l| self.elem(l.as_ref())).collect()
    }

    pub fn set_labels(&self, s: ElemSet) -> Vec<String> {
        s.iter().map(|x| self.label(x).to_string()).collect()
    }

    pub fn gammas(&self) -> &[String] {
        &self.gamma
    }

    pub fn gamma_index(&self, label: &str) -> Result<usize> {
        self.gamma
            .iter()
            .position(|g| g == label)
            .ok_or_else(|| TgsError::UnknownLabel(label.to_string()))
    }

    #[inline]
    pub fn plus(&self, x: Elem, y: Elem) -> Elem {
        self.plus[x.index() * self.size() + y.index()]
    }

    #[inline]
    pub fn ternary(&self, x: Elem, y: Elem, z: Elem) -> Elem {
        let m = self.size();
        self.ternary[(x.index() * m + y.index()) * m + z.index()]
    }

    /// Applies the Γ-action with index `g` (position in [`Tgs::gammas`]).
    #[inline]
    pub fn act(&self, g: usize, x: Elem) -> Elem {
        self.gamma_action[g * self.size() + x.index()]
    }

    #[inline]
    pub fn leq(&self, x: Elem, y: Elem) -> bool {
        self.leq[x.index() * self.size() + y.index()]
    }

    fn check(&self, x: Elem) -> Result<Elem> {
        if x.index() < self.size() {
            Ok(x)
        } else {
            Err(TgsError::IndexOutOfRange {
                index: x.index(),
                size: self.size(),
            })
        }
    }

    pub fn eval_plus(&self, x: Elem, y: Elem) -> Result<Elem> {
        Ok(self.plus(self.check(x)?, self.check(y)?))
    }

    pub fn eval_ternary(&self, x: Elem, y: Elem, z: Elem) -> Result<Elem> {
        Ok(self.ternary(self.check(x)?, self.check(y)?, self.check(z)?))
    }

    pub fn eval_gamma(&self, gamma: &str, x: Elem) -> Result<Elem> {
        let g = self.gamma_index(gamma)?;
        Ok(self.act(g, self.check(x)?))
    }

    pub fn try_leq(&self, x: Elem, y: Elem) -> Result<bool> {
        Ok(self.leq(self.check(x)?, self.check(y)?))
    }

    pub fn order(&self) -> OrderRelation {
        OrderRelation {
            m: self.size(),
            leq: self.leq.clone(),
        }
    }

    /// Elements `y` with `y ≤ x`.
    pub fn below(&self, x: Elem) -> ElemSet {
        self.elements().filter(|&y| self.leq(y, x)).collect()
    }

    /// Identifies the tables; used to detect values from different structures
    /// being combined.
    pub fn fingerprint(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.labels.hash(&mut h);
        self.zero.hash(&mut h);
        self.plus.hash(&mut h);
        self.ternary.hash(&mut h);
        self.gamma.hash(&mut h);
        self.gamma_action.hash(&mut h);
        h.finish()
    }

    /// Componentwise direct product. Elements are labelled `x:y`, and the
    /// Γ-labels are pairs `g:h` acting componentwise.
    pub fn product(a: &Tgs, b: &Tgs) -> Result<Tgs> {
        let (ma, mb) = (a.size(), b.size());
        let m = ma * mb;
        if m > MAX_CARRIER {
            return Err(TgsError::BoundExceeded {
                what: "product carrier".into(),
                size: m as u128,
                bound: MAX_CARRIER as u128,
            });
        }
        let split = |i: usize| (Elem::from_index(i / mb), Elem::from_index(i % mb));
        let join = |x: Elem, y: Elem| Elem::from_index(x.index() * mb + y.index());
        let labels = (0..m)
            .map(|i| {
                let (x, y) = split(i);
                format!("{}:{}", a.label(x), b.label(y))
            })
            .collect();
        let mut plus = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                let ((x1, y1), (x2, y2)) = (split(i), split(j));
                plus.push(join(a.plus(x1, x2), b.plus(y1, y2)));
            }
        }
        let mut ternary = Vec::with_capacity(m * m * m);
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let ((x1, y1), (x2, y2), (x3, y3)) = (split(i), split(j), split(k));
                    ternary.push(join(a.ternary(x1, x2, x3), b.ternary(y1, y2, y3)));
                }
            }
        }
        let mut gamma = Vec::new();
        let mut gamma_action = Vec::new();
        for (g, gl) in a.gamma.iter().enumerate() {
            for (h, hl) in b.gamma.iter().enumerate() {
                gamma.push(format!("{gl}:{hl}"));
                for i in 0..m {
                    let (x, y) = split(i);
                    gamma_action.push(join(a.act(g, x), b.act(h, y)));
                }
            }
        }
        Tgs::from_tables(
            labels,
            join(a.zero, b.zero),
            plus,
            ternary,
            gamma,
            gamma_action,
        )
    }
}
