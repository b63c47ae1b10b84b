//! Quotients `T/I` by the congruence generated from a k-ideal.

use serde::Serialize;
use serde_json::{json, Value};

use crate::elem::{Elem, ElemSet};
use crate::error::Result;
use crate::ideal::KIdeal;
use crate::tgs::Tgs;

/// Relation whose equivalence closure partitions the carrier.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Congruence {
    /// `x ~ y ⇔ x ⊕ i = y ⊕ j` for some `i, j ∈ I`.
    #[default]
    Bourne,
    /// Collapse `I` to a point, leave everything else alone.
    Rees,
}

impl Congruence {
    pub fn related(self, t: &Tgs, ideal: ElemSet, x: Elem, y: Elem) -> bool {
        match self {
            Congruence::Bourne => ideal
                .iter()
                .any(|i| ideal.iter().any(|j| t.plus(x, i) == t.plus(y, j))),
            Congruence::Rees => x == y || (ideal.contains(x) && ideal.contains(y)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    /// Classes ordered by their least member.
    pub classes: Vec<ElemSet>,
    pub class_of: Vec<usize>,
}

impl Partition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Partition generated by the reflexive-symmetric-transitive closure of an
/// arbitrary relation.
pub fn partition_with(t: &Tgs, related: impl Fn(Elem, Elem) -> bool) -> Partition {
    let m = t.size();
    let mut parent: Vec<usize> = (0..m).collect();
    for x in t.elements() {
        for y in t.elements() {
            if x < y && (related(x, y) || related(y, x)) {
                let (a, b) = (find(&mut parent, x.index()), find(&mut parent, y.index()));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut classes: Vec<ElemSet> = Vec::new();
    let mut root_class = vec![usize::MAX; m];
    let mut class_of = vec![0; m];
    for x in t.elements() {
        let r = find(&mut parent, x.index());
        if root_class[r] == usize::MAX {
            root_class[r] = classes.len();
            classes.push(ElemSet::EMPTY);
        }
        classes[root_class[r]].insert(x);
        class_of[x.index()] = root_class[r];
    }
    Partition { classes, class_of }
}

pub fn bourne_partition(t: &Tgs, ideal: &KIdeal) -> Partition {
    congruence_partition(t, ideal, Congruence::Bourne)
}

pub fn congruence_partition(t: &Tgs, ideal: &KIdeal, relation: Congruence) -> Partition {
    let members = ideal.members();
    partition_with(t, |x, y| relation.related(t, members, x, y))
}

/// Evidence that an induced operation depends on the representatives chosen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepresentativeClash {
    /// `"plus"`, `"ternary"` or the Γ-label.
    pub operation: String,
    pub inputs: Vec<Elem>,
    /// Class of the operation applied to `inputs`.
    pub class_from_inputs: usize,
    pub representatives: Vec<Elem>,
    /// Class of the operation applied to the canonical representatives.
    pub class_from_representatives: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientTgs {
    pub relation: Congruence,
    pub partition: Partition,
    /// Least member of each class.
    pub representatives: Vec<Elem>,
    pub zero_class: usize,
    plus: Vec<usize>,
    ternary: Vec<usize>,
    gamma: Vec<usize>,
    gamma_labels: Vec<String>,
    pub well_defined: bool,
    pub clash: Option<RepresentativeClash>,
    ideal: ElemSet,
    labels: Vec<String>,
}

pub fn build_quotient(t: &Tgs, ideal: &KIdeal) -> QuotientTgs {
    build_quotient_with(t, ideal, Congruence::Bourne)
}

pub fn build_quotient_with(t: &Tgs, ideal: &KIdeal, relation: Congruence) -> QuotientTgs {
    let partition = congruence_partition(t, ideal, relation);
    let k = partition.len();
    let reps: Vec<Elem> = partition
        .classes
        .iter()
        .map(|c| c.first().expect("classes are nonempty"))
        .collect();
    let cls = |x: Elem| partition.class_of[x.index()];

    let mut plus = Vec::with_capacity(k * k);
    for &a in &reps {
        for &b in &reps {
            plus.push(cls(t.plus(a, b)));
        }
    }
    let mut ternary = Vec::with_capacity(k * k * k);
    for &a in &reps {
        for &b in &reps {
            for &c in &reps {
                ternary.push(cls(t.ternary(a, b, c)));
            }
        }
    }
    let mut gamma = Vec::with_capacity(t.gammas().len() * k);
    for g in 0..t.gammas().len() {
        for &a in &reps {
            gamma.push(cls(t.act(g, a)));
        }
    }

    let rep = |x: Elem| reps[cls(x)];
    let mut clash = None;
    'scan: {
        for x in t.elements() {
            for y in t.elements() {
                let (from_inputs, from_reps) = (cls(t.plus(x, y)), plus[cls(x) * k + cls(y)]);
                if from_inputs != from_reps {
                    clash = Some(RepresentativeClash {
                        operation: "plus".into(),
                        inputs: vec![x, y],
                        class_from_inputs: from_inputs,
                        representatives: vec![rep(x), rep(y)],
                        class_from_representatives: from_reps,
                    });
                    break 'scan;
                }
            }
        }
        for x in t.elements() {
            for y in t.elements() {
                for z in t.elements() {
                    let from_inputs = cls(t.ternary(x, y, z));
                    let from_reps = ternary[(cls(x) * k + cls(y)) * k + cls(z)];
                    if from_inputs != from_reps {
                        clash = Some(RepresentativeClash {
                            operation: "ternary".into(),
                            inputs: vec![x, y, z],
                            class_from_inputs: from_inputs,
                            representatives: vec![rep(x), rep(y), rep(z)],
                            class_from_representatives: from_reps,
                        });
                        break 'scan;
                    }
                }
            }
        }
        for g in 0..t.gammas().len() {
            for x in t.elements() {
                let (from_inputs, from_reps) = (cls(t.act(g, x)), gamma[g * k + cls(x)]);
                if from_inputs != from_reps {
                    clash = Some(RepresentativeClash {
                        operation: t.gammas()[g].clone(),
                        inputs: vec![x],
                        class_from_inputs: from_inputs,
                        representatives: vec![rep(x)],
                        class_from_representatives: from_reps,
                    });
                    break 'scan;
                }
            }
        }
    }

    let labels = reps.iter().map(|&r| format!("{}+I", t.label(r))).collect();
    QuotientTgs {
        relation,
        zero_class: cls(t.zero()),
        representatives: reps,
        partition,
        plus,
        ternary,
        gamma,
        gamma_labels: t.gammas().to_vec(),
        well_defined: clash.is_none(),
        clash,
        ideal: ideal.members(),
        labels,
    }
}

impl QuotientTgs {
    pub fn len(&self) -> usize {
        self.partition.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partition.is_empty()
    }

    pub fn project(&self, x: Elem) -> usize {
        self.partition.class_of[x.index()]
    }

    pub fn ideal(&self) -> ElemSet {
        self.ideal
    }

    pub fn plus(&self, a: usize, b: usize) -> usize {
        self.plus[a * self.len() + b]
    }

    pub fn ternary(&self, a: usize, b: usize, c: usize) -> usize {
        let k = self.len();
        self.ternary[(a * k + b) * k + c]
    }

    pub fn class_label(&self, class: usize) -> &str {
        &self.labels[class]
    }

    /// The induced structure as a standalone [`Tgs`] whose elements are the
    /// classes, labelled by their least representative with a `+I` suffix.
    pub fn to_tgs(&self) -> Result<Tgs> {
        Tgs::from_tables(
            self.labels.clone(),
            Elem::from_index(self.zero_class),
            self.plus.iter().map(|&c| Elem::from_index(c)).collect(),
            self.ternary.iter().map(|&c| Elem::from_index(c)).collect(),
            self.gamma_labels.clone(),
            self.gamma.iter().map(|&c| Elem::from_index(c)).collect(),
        )
    }

    /// `project` commutes with `⊕` and the ternary product on every input.
    pub fn projection_is_morphism(&self, t: &Tgs) -> bool {
        t.elements().all(|x| {
            t.elements().all(|y| {
                self.project(t.plus(x, y)) == self.plus(self.project(x), self.project(y))
                    && t.elements().all(|z| {
                        self.project(t.ternary(x, y, z))
                            == self.ternary(self.project(x), self.project(y), self.project(z))
                    })
            })
        })
    }

    pub fn to_json(&self, t: &Tgs) -> Value {
        let tgs = self
            .to_tgs()
            .expect("quotient tables are in range")
            .to_document();
        json!({
            "relation": self.relation,
            "ideal": t.set_labels(self.ideal),
            "classes": self.partition.classes.iter().map(|&c| t.set_labels(c)).collect::<Vec<_>>(),
            "zero_class": self.zero_class,
            "well_defined": self.well_defined,
            "clash": self.clash.as_ref().map(|c| json!({
                "operation": c.operation,
                "inputs": c.inputs.iter().map(|&x| t.label(x)).collect::<Vec<_>>(),
                "class_from_inputs": self.labels[c.class_from_inputs],
                "representatives": c.representatives.iter().map(|&x| t.label(x)).collect::<Vec<_>>(),
                "class_from_representatives": self.labels[c.class_from_representatives],
            })),
            "tgs": tgs,
        })
    }
}
