//! Words over a carrier and the four code constructions: ideal powers,
//! constraint codes, kernel codes and generated substructures.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::elem::{Elem, ElemSet};
use crate::error::{Result, TgsError};
use crate::ideal::{minimal_nonzero_elements, KIdeal};
use crate::tgs::Tgs;

/// Default cap on the number of words any enumeration may touch.
pub const DEFAULT_WORD_BOUND: u128 = 1 << 20;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Word(pub Vec<Elem>);

impl Word {
    pub fn zero(t: &Tgs, n: usize) -> Word {
        Word(vec![t.zero(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[Elem] {
        &self.0
    }

    /// Parses comma-separated labels such as `a,0,1`.
    pub fn parse(t: &Tgs, text: &str) -> Result<Word> {
        let coords = text
            .split(',')
            .map(|s| t.elem(s.trim()))
            .collect::<Result<Vec<_>>>()?;
        if coords.is_empty() {
            return Err(TgsError::Malformed("empty word".into()));
        }
        Ok(Word(coords))
    }

    pub fn from_labels(t: &Tgs, labels: &[impl AsRef<str>]) -> Result<Word> {
        if labels.is_empty() {
            return Err(TgsError::Malformed("empty word".into()));
        }
        Ok(Word(
            labels
                .iter()
                .map(|l| t.elem(l.as_ref()))
                .collect::<Result<_>>()?,
        ))
    }

    pub fn labels(&self, t: &Tgs) -> Vec<String> {
        self.0.iter().map(|&x| t.label(x).to_string()).collect()
    }

    pub fn render(&self, t: &Tgs) -> String {
        format!("({})", self.labels(t).join(","))
    }

    pub fn support(&self, t: &Tgs) -> impl Iterator<Item = usize> + '_ {
        let zero = t.zero();
        self.0
            .iter()
            .enumerate()
            .filter(move |(_, &x)| x != zero)
            .map(|(i, _)| i)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.0.iter().map(|e| e.index()))
            .finish()
    }
}

fn same_len(u: &Word, v: &Word) -> Result<()> {
    if u.len() != v.len() {
        return Err(TgsError::Usage(format!(
            "word lengths differ: {} vs {}",
            u.len(),
            v.len()
        )));
    }
    Ok(())
}

/// Number of nonzero coordinates.
pub fn tgs_weight(t: &Tgs, w: &Word) -> usize {
    w.support(t).count()
}

/// Coordinatewise: zero where `uᵢ ≤ vᵢ`, otherwise `uᵢ`. Incomparable
/// coordinates keep `uᵢ`.
pub fn ominus(t: &Tgs, u: &Word, v: &Word) -> Result<Word> {
    same_len(u, v)?;
    Ok(ominus_unchecked(t, u, v))
}

pub(crate) fn ominus_unchecked(t: &Tgs, u: &Word, v: &Word) -> Word {
    Word(
        u.0.iter()
            .zip(&v.0)
            .map(|(&a, &b)| if t.leq(a, b) { t.zero() } else { a })
            .collect(),
    )
}

/// `wt(u ⊖ v)`. Not symmetric, and zero on some pairs of distinct words, so
/// it is reported but never used for nearest-codeword search.
pub fn discrepancy(t: &Tgs, u: &Word, v: &Word) -> Result<usize> {
    Ok(tgs_weight(t, &ominus(t, u, v)?))
}

/// Number of coordinates where the words differ.
pub fn hamming(u: &Word, v: &Word) -> Result<usize> {
    same_len(u, v)?;
    Ok(hamming_unchecked(u, v))
}

pub(crate) fn hamming_unchecked(u: &Word, v: &Word) -> usize {
    u.0.iter().zip(&v.0).filter(|(a, b)| a != b).count()
}

pub fn word_plus(t: &Tgs, u: &Word, v: &Word) -> Word {
    Word(u.0.iter().zip(&v.0).map(|(&a, &b)| t.plus(a, b)).collect())
}

pub fn word_ternary(t: &Tgs, u: &Word, v: &Word, w: &Word) -> Word {
    Word(
        u.0.iter()
            .zip(&v.0)
            .zip(&w.0)
            .map(|((&a, &b), &c)| t.ternary(a, b, c))
            .collect(),
    )
}

pub fn word_act(t: &Tgs, g: usize, u: &Word) -> Word {
    Word(u.0.iter().map(|&a| t.act(g, a)).collect())
}

pub(crate) fn check_word_bound(what: &str, alphabet: usize, n: usize, bound: u128) -> Result<u128> {
    let size = (alphabet as u128)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX);
    if size > bound {
        return Err(TgsError::BoundExceeded {
            what: what.into(),
            size,
            bound,
        });
    }
    Ok(size)
}

/// All words of length `n` over `alphabet`, lexicographic in index order.
pub fn words_over(alphabet: ElemSet, n: usize) -> impl Iterator<Item = Word> {
    let letters: Vec<Elem> = alphabet.iter().collect();
    let k = letters.len();
    let mut digits = vec![0usize; n];
    let mut done = k == 0;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let w = Word(digits.iter().map(|&d| letters[d]).collect());
        let mut i = n;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < k {
                break;
            }
            digits[i] = 0;
        }
        Some(w)
    })
}

/// The map `c ↦ ⊕_{i,j} [aᵢ, cᵢ, bⱼ]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Morphism {
    pub a: Vec<Elem>,
    pub b: Vec<Elem>,
}

pub fn build_phi(a: Vec<Elem>, b: Vec<Elem>) -> Result<Morphism> {
    if a.len() != b.len() || a.is_empty() {
        return Err(TgsError::Usage(format!(
            "parameter families must have equal nonzero length, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(Morphism { a, b })
}

impl Morphism {
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn eval(&self, t: &Tgs, w: &Word) -> Result<Elem> {
        if w.len() != self.len() {
            return Err(TgsError::Usage(format!(
                "word has length {}, map expects {}",
                w.len(),
                self.len()
            )));
        }
        Ok(self.eval_unchecked(t, w))
    }

    pub(crate) fn eval_unchecked(&self, t: &Tgs, w: &Word) -> Elem {
        let mut terms = self
            .a
            .iter()
            .zip(&w.0)
            .flat_map(|(&ai, &ci)| self.b.iter().map(move |&bj| (ai, ci, bj)))
            .map(|(ai, ci, bj)| t.ternary(ai, ci, bj));
        let first = terms.next().expect("map has at least one coordinate");
        terms.fold(first, |acc, x| t.plus(acc, x))
    }

    /// Every individual term `[aᵢ, cᵢ, bⱼ]` lies in `ideal`.
    pub fn all_terms_in(&self, t: &Tgs, w: &Word, ideal: ElemSet) -> bool {
        self.a.iter().zip(&w.0).all(|(&ai, &ci)| {
            self.b
                .iter()
                .all(|&bj| ideal.contains(t.ternary(ai, ci, bj)))
        })
    }

    pub fn to_json(&self, t: &Tgs) -> Value {
        json!({
            "A": self.a.iter().map(|&x| t.label(x)).collect::<Vec<_>>(),
            "B": self.b.iter().map(|&x| t.label(x)).collect::<Vec<_>>(),
        })
    }
}

pub fn eval_phi(t: &Tgs, phi: &Morphism, w: &Word) -> Result<Elem> {
    phi.eval(t, w)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    IdealPower {
        ideal: ElemSet,
    },
    Constraint {
        phi: Morphism,
        ideal: ElemSet,
        /// The member set equals `{w : Φ(w) ∈ I}`.
        matches_phi: bool,
    },
    Kernel {
        phi: Morphism,
    },
    Generated {
        generators: Vec<Word>,
    },
}

impl Provenance {
    pub fn name(&self) -> &'static str {
        match self {
            Provenance::IdealPower { .. } => "ideal-power",
            Provenance::Constraint { .. } => "constraint",
            Provenance::Kernel { .. } => "kernel",
            Provenance::Generated { .. } => "generated",
        }
    }

    pub fn ideal(&self) -> Option<ElemSet> {
        match self {
            Provenance::IdealPower { ideal } | Provenance::Constraint { ideal, .. } => Some(*ideal),
            _ => None,
        }
    }

    pub fn to_json(&self, t: &Tgs) -> Value {
        match self {
            Provenance::IdealPower { ideal } => {
                json!({ "construction": self.name(), "ideal": t.set_labels(*ideal) })
            }
            Provenance::Constraint {
                phi,
                ideal,
                matches_phi,
            } => json!({
                "construction": self.name(),
                "ideal": t.set_labels(*ideal),
                "phi": phi.to_json(t),
                "matches_phi": matches_phi,
            }),
            Provenance::Kernel { phi } => {
                json!({ "construction": self.name(), "phi": phi.to_json(t) })
            }
            Provenance::Generated { generators } => json!({
                "construction": self.name(),
                "generators": generators.iter().map(|g| g.labels(t)).collect::<Vec<_>>(),
            }),
        }
    }
}

/// An explicitly enumerated subset of `Tⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Code {
    pub n: usize,
    /// Sorted lexicographically by element index.
    pub members: Vec<Word>,
    pub provenance: Provenance,
}

impl Code {
    pub fn from_members(n: usize, mut members: Vec<Word>, provenance: Provenance) -> Code {
        members.sort();
        members.dedup();
        Code {
            n,
            members,
            provenance,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.members.binary_search(w).is_ok()
    }

    /// Closed under coordinatewise `⊕`, ternary product and Γ-actions.
    pub fn is_closed(&self, t: &Tgs) -> bool {
        let m = &self.members;
        m.iter().all(|u| {
            (0..t.gammas().len()).all(|g| self.contains(&word_act(t, g, u)))
                && m.iter().all(|v| {
                    self.contains(&word_plus(t, u, v))
                        && m.iter().all(|w| self.contains(&word_ternary(t, u, v, w)))
                })
        })
    }
}

pub fn ideal_power_code(t: &Tgs, ideal: &KIdeal, n: usize, bound: u128) -> Result<Code> {
    if n == 0 {
        return Err(TgsError::Usage("code length must be at least 1".into()));
    }
    if !ideal.belongs_to(t) {
        return Err(TgsError::Usage(
            "ideal belongs to a different structure".into(),
        ));
    }
    check_word_bound("ideal power code", ideal.len(), n, bound)?;
    let members = words_over(ideal.members(), n).collect();
    Ok(Code {
        n,
        members,
        provenance: Provenance::IdealPower {
            ideal: ideal.members(),
        },
    })
}

fn check_phi_len(phi: &Morphism, n: usize) -> Result<()> {
    if phi.len() != n {
        return Err(TgsError::Usage(format!(
            "map has length {}, code length is {n}",
            phi.len()
        )));
    }
    Ok(())
}

/// Words whose every term `[aᵢ, cᵢ, bⱼ]` lies in `ideal`.
pub fn constraint_code(
    t: &Tgs,
    phi: &Morphism,
    ideal: &KIdeal,
    n: usize,
    bound: u128,
) -> Result<Code> {
    check_phi_len(phi, n)?;
    check_word_bound("constraint code search space", t.size(), n, bound)?;
    let members_set = ideal.members();
    let mut members = Vec::new();
    let mut matches_phi = true;
    for w in words_over(t.carrier(), n) {
        let termwise = phi.all_terms_in(t, &w, members_set);
        let folded = members_set.contains(phi.eval_unchecked(t, &w));
        matches_phi &= termwise == folded;
        if termwise {
            members.push(w);
        }
    }
    Ok(Code {
        n,
        members,
        provenance: Provenance::Constraint {
            phi: phi.clone(),
            ideal: members_set,
            matches_phi,
        },
    })
}

/// `Φ⁻¹(0)`.
pub fn kernel_code(t: &Tgs, phi: &Morphism, n: usize, bound: u128) -> Result<Code> {
    check_phi_len(phi, n)?;
    check_word_bound("kernel code search space", t.size(), n, bound)?;
    let members = words_over(t.carrier(), n)
        .filter(|w| phi.eval_unchecked(t, w) == t.zero())
        .collect();
    Ok(Code {
        n,
        members,
        provenance: Provenance::Kernel { phi: phi.clone() },
    })
}

/// Least superset of `generators` closed under coordinatewise `⊕`, ternary
/// product and Γ-actions. Downward closure is not applied.
pub fn generated_code(t: &Tgs, generators: &[Word], bound: u128) -> Result<Code> {
    let n = generators
        .first()
        .map(Word::len)
        .ok_or_else(|| TgsError::Usage("at least one generator is required".into()))?;
    if generators.iter().any(|g| g.len() != n) {
        return Err(TgsError::Usage("generators have different lengths".into()));
    }
    let mut all: Vec<Word> = Vec::new();
    let mut seen: HashSet<Word> = HashSet::new();
    for g in generators {
        if seen.insert(g.clone()) {
            all.push(g.clone());
        }
    }
    let push = |w: Word, all: &mut Vec<Word>, seen: &mut HashSet<Word>| -> Result<()> {
        if seen.insert(w.clone()) {
            all.push(w);
            if all.len() as u128 > bound {
                return Err(TgsError::BoundExceeded {
                    what: "generated code".into(),
                    size: all.len() as u128,
                    bound,
                });
            }
        }
        Ok(())
    };
    // Semi-naive closure: each round only combines tuples that involve at
    // least one word discovered in the previous round.
    let mut old = 0;
    loop {
        let end = all.len();
        if old == end {
            break;
        }
        let mut fresh = Vec::new();
        for w in &all[old..end] {
            for g in 0..t.gammas().len() {
                fresh.push(word_act(t, g, w));
            }
        }
        for i in 0..end {
            for j in 0..end {
                if i.max(j) < old {
                    continue;
                }
                fresh.push(word_plus(t, &all[i], &all[j]));
                for k in 0..end {
                    if i.max(j).max(k) < old {
                        continue;
                    }
                    fresh.push(word_ternary(t, &all[i], &all[j], &all[k]));
                }
            }
            for w in fresh.drain(..) {
                push(w, &mut all, &mut seen)?;
            }
        }
        for w in fresh.drain(..) {
            push(w, &mut all, &mut seen)?;
        }
        old = end;
    }
    Ok(Code::from_members(
        n,
        all,
        Provenance::Generated {
            generators: generators.to_vec(),
        },
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SpanReport {
    /// Some generator has a coordinate outside the ideal.
    PreconditionViolated { generator: usize, coordinate: usize },
    Checked {
        generated: usize,
        power: u128,
        /// `⟨G⟩ ⊆ Iⁿ`.
        inclusion: bool,
        /// `⟨G⟩ = Iⁿ`.
        equality: bool,
    },
}

pub fn check_span_theorem(
    t: &Tgs,
    generators: &[Word],
    ideal: &KIdeal,
    bound: u128,
) -> Result<SpanReport> {
    for (gi, g) in generators.iter().enumerate() {
        if let Some(ci) = g.0.iter().position(|&x| !ideal.contains(x)) {
            return Ok(SpanReport::PreconditionViolated {
                generator: gi,
                coordinate: ci,
            });
        }
    }
    let code = generated_code(t, generators, bound)?;
    let inclusion = code
        .members
        .iter()
        .all(|w| w.0.iter().all(|&x| ideal.contains(x)));
    let power = (ideal.len() as u128).pow(code.n as u32);
    Ok(SpanReport::Checked {
        generated: code.len(),
        power,
        inclusion,
        equality: inclusion && code.len() as u128 == power,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceKind {
    /// Minimum weight of a nonzero member; the code contains the zero word.
    MinWeight,
    /// The code lacks the zero word; minimum pairwise Hamming distance.
    MinPairwiseHamming,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CodeParams {
    pub n: usize,
    pub cardinality: u128,
    /// `log_{|T|} |C|`.
    pub k: f64,
    /// `None` when the code has fewer than two members.
    pub d: Option<usize>,
    pub distance_kind: DistanceKind,
    /// `|C| = |I|ⁿ`, for ideal powers only.
    pub dimension_formula_holds: Option<bool>,
    /// Minimum weight of a nonzero word supported on the minimal nonzero
    /// elements of the ideal, for ideal powers only.
    pub lattice_prediction: Option<usize>,
    /// Minimum weight of a nonzero scalar of the ideal, viewed as a length-1
    /// word.
    pub literal_mu: Option<usize>,
}

pub fn log_base(base: usize, x: u128) -> f64 {
    if x <= 1 || base <= 1 {
        0.0
    } else {
        (x as f64).ln() / (base as f64).ln()
    }
}

pub fn code_params(t: &Tgs, code: &Code) -> CodeParams {
    let zero = Word::zero(t, code.n);
    let has_zero = code.contains(&zero);
    let d = if code.len() < 2 {
        None
    } else if has_zero {
        code.members
            .iter()
            .filter(|w| **w != zero)
            .map(|w| tgs_weight(t, w))
            .min()
    } else {
        let mut best = usize::MAX;
        for (i, u) in code.members.iter().enumerate() {
            for v in &code.members[i + 1..] {
                best = best.min(hamming_unchecked(u, v));
            }
        }
        Some(best)
    };
    let ideal = code.provenance.ideal();
    let (dimension_formula_holds, lattice_prediction) = match code.provenance {
        Provenance::IdealPower { ideal } => {
            let formula =
                (ideal.len() as u128).checked_pow(code.n as u32) == Some(code.len() as u128);
            (Some(formula), lattice_prediction(t, ideal, code.n))
        }
        _ => (None, None),
    };
    let literal_mu = ideal.and_then(|i| {
        i.iter()
            .filter(|&x| x != t.zero())
            .map(|x| tgs_weight(t, &Word(vec![x])))
            .min()
    });
    CodeParams {
        n: code.n,
        cardinality: code.len() as u128,
        k: log_base(t.size(), code.len() as u128),
        d,
        distance_kind: if has_zero {
            DistanceKind::MinWeight
        } else {
            DistanceKind::MinPairwiseHamming
        },
        dimension_formula_holds,
        lattice_prediction,
        literal_mu,
    }
}

/// Minimum weight over nonzero words whose coordinates are zero or minimal
/// nonzero elements of `ideal`. Such a word of weight one exists whenever
/// the ideal is nonzero.
pub fn lattice_prediction(t: &Tgs, ideal: ElemSet, n: usize) -> Option<usize> {
    let atom = minimal_nonzero_elements(t, ideal).first()?;
    let mut w = Word::zero(t, n);
    w.0[0] = atom;
    Some(tgs_weight(t, &w))
}
