//! Exhaustive adjudication of the theory's claims on concrete fixtures.
//!
//! Every check produces a [`ClaimResult`]. A falsified result always carries
//! a [`Counterexample`]: a standalone document embedding the structure and,
//! where relevant, the code spec, which [`Counterexample::replay`] re-checks
//! through the public operations.

mod checks;
pub mod search;
mod suite;

use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::code::{
    code_params, generated_code, ideal_power_code, lattice_prediction, tgs_weight, word_plus,
    word_ternary, Word,
};
use crate::decoder::decode;
use crate::error::{Result, TgsError};
use crate::fixtures::CodeSpec;
use crate::ideal::{self, IdealMode, KIdeal};
use crate::tgs::{Tgs, TgsDocument};

pub use checks::*;
pub use suite::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimId {
    ConstraintEquivalence,
    DecoderCorrectness,
    Dimension,
    DistributiveLattice,
    InteractionJoin,
    LocalizedPropagation,
    MinDistance,
    Monotonicity,
    Span,
    SyndromeInvariance,
}

impl ClaimId {
    pub const ALL: [ClaimId; 10] = [
        ClaimId::ConstraintEquivalence,
        ClaimId::DecoderCorrectness,
        ClaimId::Dimension,
        ClaimId::DistributiveLattice,
        ClaimId::InteractionJoin,
        ClaimId::LocalizedPropagation,
        ClaimId::MinDistance,
        ClaimId::Monotonicity,
        ClaimId::Span,
        ClaimId::SyndromeInvariance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClaimId::ConstraintEquivalence => "constraint-equivalence",
            ClaimId::DecoderCorrectness => "decoder-correctness",
            ClaimId::Dimension => "dimension",
            ClaimId::DistributiveLattice => "distributive-lattice",
            ClaimId::InteractionJoin => "interaction-join",
            ClaimId::LocalizedPropagation => "localized-propagation",
            ClaimId::MinDistance => "min-distance",
            ClaimId::Monotonicity => "monotonicity",
            ClaimId::Span => "span",
            ClaimId::SyndromeInvariance => "syndrome-invariance",
        }
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimStatus {
    Verified,
    Falsified,
    HypothesisNotMet,
    NotApplicable,
}

impl ClaimStatus {
    pub fn name(self) -> &'static str {
        match self {
            ClaimStatus::Verified => "verified",
            ClaimStatus::Falsified => "falsified",
            ClaimStatus::HypothesisNotMet => "hypothesis-not-met",
            ClaimStatus::NotApplicable => "not-applicable",
        }
    }

    /// One-letter code for the summary matrix.
    pub fn short(self) -> char {
        match self {
            ClaimStatus::Verified => 'V',
            ClaimStatus::Falsified => 'F',
            ClaimStatus::HypothesisNotMet => 'H',
            ClaimStatus::NotApplicable => '-',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimResult {
    pub claim: ClaimId,
    pub fixture: String,
    /// Which instance of the claim was checked, e.g. the ideal and length.
    pub instance: String,
    pub status: ClaimStatus,
    pub detail: String,
    /// Number of tuples, words or pairs examined.
    pub scan_size: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    /// Name under which the suite stores the counterexample.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample_id: Option<String>,
    /// Left out of serialized output so reports stay byte-identical.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl ClaimResult {
    pub fn to_json(&self, timings: bool) -> Value {
        let mut v = serde_json::to_value(self).expect("result serializes");
        if timings {
            v["wall_time_ms"] = Value::from(self.wall_time.as_secs_f64() * 1e3);
        }
        v
    }
}

/// The concrete data that violates a claim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Witness {
    Dimension {
        ideal: Vec<String>,
        n: usize,
        enumerated: u128,
        predicted: u128,
    },
    MinDistance {
        ideal: Vec<String>,
        n: usize,
        exhaustive: usize,
        predicted: usize,
    },
    Monotonicity {
        smaller: Vec<String>,
        larger: Vec<String>,
        n: usize,
        d_smaller: usize,
        d_larger: usize,
    },
    Distributivity {
        ideals: [Vec<String>; 3],
        /// `I ∧ (J ∨ K)`.
        lhs: Vec<String>,
        /// `(I ∧ J) ∨ (I ∧ K)`.
        rhs: Vec<String>,
    },
    LocalizedPropagation {
        c: Vec<String>,
        e: Vec<String>,
        weight_sum: usize,
        weight_c: usize,
        weight_e: usize,
    },
    InteractionJoin {
        leader_alpha: Vec<String>,
        leader_beta: Vec<String>,
        alpha: String,
        beta: String,
        product: Vec<String>,
        syndrome: String,
        join: String,
    },
    SyndromeInvariance {
        c: Vec<String>,
        e: Vec<String>,
        syndrome_shifted: String,
        syndrome_error: String,
    },
    DecoderCorrectness {
        c: Vec<String>,
        e: Vec<String>,
        received: Vec<String>,
        output: Vec<String>,
    },
    Span {
        outside: Vec<String>,
    },
    ConstraintEquivalence {
        word: Vec<String>,
        in_constraint_code: bool,
        phi_in_ideal: bool,
    },
}

/// A self-contained, replayable record of a falsified claim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Counterexample {
    pub claim: ClaimId,
    pub fixture: String,
    pub literal_ideals: bool,
    pub tgs: TgsDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code: Option<CodeSpec>,
    pub witness: Witness,
}

fn mode_of(literal: bool) -> IdealMode {
    if literal {
        IdealMode::Literal
    } else {
        IdealMode::PlusClosed
    }
}

impl Counterexample {
    pub fn from_json(text: &str) -> Result<Counterexample> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("counterexample serializes")
    }

    fn mode(&self) -> IdealMode {
        mode_of(self.literal_ideals)
    }

    /// Recomputes the witness from scratch. `Ok(true)` means every stored
    /// value was reproduced and the violation is real.
    pub fn replay(&self) -> Result<bool> {
        let t = Tgs::from_document(&self.tgs)?;
        let mode = self.mode();
        let ideal = |labels: &[String]| -> Result<KIdeal> {
            KIdeal::new(&t, t.set_of(labels)?, mode)
                .map_err(|v| TgsError::InvalidStructure(v.render(&t)))
        };
        let word = |labels: &[String]| Word::from_labels(&t, labels);
        let bound = u128::MAX;
        let resolved = || -> Result<_> {
            let spec = self
                .code
                .as_ref()
                .ok_or_else(|| TgsError::Malformed("counterexample lacks a code spec".into()))?;
            spec.resolve_with(t.clone(), mode)
        };
        Ok(match &self.witness {
            Witness::Dimension {
                ideal: i,
                n,
                enumerated,
                predicted,
            } => {
                let i = ideal(i)?;
                let got = ideal_power_code(&t, &i, *n, bound)?.len() as u128;
                let formula = (i.len() as u128).pow(*n as u32);
                got == *enumerated && formula == *predicted && got != formula
            }
            Witness::MinDistance {
                ideal: i,
                n,
                exhaustive,
                predicted,
            } => {
                let i = ideal(i)?;
                let d = code_params(&t, &ideal_power_code(&t, &i, *n, bound)?).d;
                let p = lattice_prediction(&t, i.members(), *n);
                d == Some(*exhaustive) && p == Some(*predicted) && exhaustive != predicted
            }
            Witness::Monotonicity {
                smaller,
                larger,
                n,
                d_smaller,
                d_larger,
            } => {
                let (i, j) = (ideal(smaller)?, ideal(larger)?);
                let di = code_params(&t, &ideal_power_code(&t, &i, *n, bound)?).d;
                let dj = code_params(&t, &ideal_power_code(&t, &j, *n, bound)?).d;
                i.members().is_subset(j.members())
                    && di == Some(*d_smaller)
                    && dj == Some(*d_larger)
                    && d_larger > d_smaller
            }
            Witness::Distributivity { ideals, lhs, rhs } => {
                let [i, j, k] = [ideal(&ideals[0])?, ideal(&ideals[1])?, ideal(&ideals[2])?];
                let l = ideal::meet(&i, &ideal::join(&t, &j, &k)?)?;
                let r = ideal::join(&t, &ideal::meet(&i, &j)?, &ideal::meet(&i, &k)?)?;
                t.set_labels(l.members()) == *lhs && t.set_labels(r.members()) == *rhs && lhs != rhs
            }
            Witness::LocalizedPropagation {
                c,
                e,
                weight_sum,
                weight_c,
                weight_e,
            } => {
                let r = resolved()?;
                let (c, e) = (word(c)?, word(e)?);
                let code = r.build_code(bound)?;
                let disjoint = c.support(&t).all(|i| e.0[i] == t.zero());
                let ws = tgs_weight(&t, &word_plus(&t, &c, &e));
                code.contains(&c)
                    && disjoint
                    && ws == *weight_sum
                    && tgs_weight(&t, &c) == *weight_c
                    && tgs_weight(&t, &e) == *weight_e
                    && ws != weight_c + weight_e
            }
            Witness::InteractionJoin {
                leader_alpha,
                leader_beta,
                alpha,
                beta,
                product,
                syndrome,
                join,
            } => {
                let r = resolved()?;
                let table = r
                    .coset_table(bound)?
                    .ok_or_else(|| TgsError::Malformed("code spec has no syndrome map".into()))?;
                let q = &table.quotient;
                let (ea, eb) = (word(leader_alpha)?, word(leader_beta)?);
                let (a, b) = (table.syndrome(&t, &ea)?, table.syndrome(&t, &eb)?);
                let is_leader =
                    |s: usize, w: &Word| table.class(s).is_some_and(|c| c.chosen_leader == *w);
                let p = word_ternary(&t, &ea, &eb, &ea);
                let s = table.syndrome(&t, &p)?;
                let jn = q.plus(a, b);
                is_leader(a, &ea)
                    && is_leader(b, &eb)
                    && q.class_label(a) == alpha
                    && q.class_label(b) == beta
                    && p.labels(&t) == *product
                    && q.class_label(s) == syndrome
                    && q.class_label(jn) == join
                    && s != jn
            }
            Witness::SyndromeInvariance {
                c,
                e,
                syndrome_shifted,
                syndrome_error,
            } => {
                let r = resolved()?;
                let table = r
                    .coset_table(bound)?
                    .ok_or_else(|| TgsError::Malformed("code spec has no syndrome map".into()))?;
                let (c, e) = (word(c)?, word(e)?);
                let code = r.build_code(bound)?;
                let s1 = table.syndrome(&t, &word_plus(&t, &c, &e))?;
                let s2 = table.syndrome(&t, &e)?;
                code.contains(&c)
                    && table.quotient.class_label(s1) == syndrome_shifted
                    && table.quotient.class_label(s2) == syndrome_error
                    && s1 != s2
            }
            Witness::DecoderCorrectness {
                c,
                e,
                received,
                output,
            } => {
                let r = resolved()?;
                let table = r
                    .coset_table(bound)?
                    .ok_or_else(|| TgsError::Malformed("code spec has no syndrome map".into()))?;
                let code = r.build_code(bound)?;
                let (c, e) = (word(c)?, word(e)?);
                let class = table
                    .class(table.syndrome(&t, &e)?)
                    .expect("class of an existing word");
                let rcv = word_plus(&t, &c, &e);
                let out = decode(&t, &table, &code, &rcv)?.output;
                table.all_leaders_unique()
                    && code.contains(&c)
                    && tgs_weight(&t, &e) <= class.leader_weight
                    && rcv.labels(&t) == *received
                    && out.labels(&t) == *output
                    && out != c
            }
            Witness::Span { outside } => {
                let r = resolved()?;
                let i = r
                    .ideal
                    .ok_or_else(|| TgsError::Malformed("code spec has no ideal".into()))?;
                let w = word(outside)?;
                let inside = r
                    .generators
                    .iter()
                    .all(|g| g.0.iter().all(|&x| i.contains(x)));
                inside
                    && generated_code(&t, &r.generators, bound)?.contains(&w)
                    && !w.0.iter().all(|&x| i.contains(x))
            }
            Witness::ConstraintEquivalence {
                word: w,
                in_constraint_code,
                phi_in_ideal,
            } => {
                let r = resolved()?;
                let (phi, i) = match (&r.phi, &r.ideal) {
                    (Some(p), Some(i)) => (p, i),
                    _ => return Err(TgsError::Malformed("code spec lacks a map or ideal".into())),
                };
                let w = word(w)?;
                let a = phi.all_terms_in(&t, &w, i.members());
                let b = i.contains(phi.eval(&t, &w)?);
                a == *in_constraint_code && b == *phi_in_ideal && a != b
            }
        })
    }
}

#[cfg(test)]
mod tests;
