use std::time::Instant;

use crate::axioms::{check_axioms, Axiom};
use crate::bounds::Bounds;
use crate::code::{
    check_span_theorem, code_params, generated_code, ideal_power_code, lattice_prediction,
    log_base, tgs_weight, word_plus, word_ternary, words_over, SpanReport,
};
use crate::decoder::decode;
use crate::error::{Result, TgsError};
use crate::fixtures::{CodeSpec, Construction, ResolvedCodeSpec};
use crate::ideal::{IdealMode, KIdeal};
use crate::lattice::IdealLattice;
use crate::tgs::Tgs;

use super::{ClaimId, ClaimResult, ClaimStatus, Counterexample, Witness};

/// A structure under test, with its axiom verdict computed once.
#[derive(Clone, Debug)]
pub struct Subject {
    pub id: String,
    pub t: Tgs,
    pub failed_axioms: Vec<Axiom>,
    pub mode: IdealMode,
    pub bounds: Bounds,
}

impl Subject {
    pub fn new(id: impl Into<String>, t: Tgs, mode: IdealMode, bounds: Bounds) -> Subject {
        let failed_axioms = check_axioms(&t).failed();
        Subject {
            id: id.into(),
            t,
            failed_axioms,
            mode,
            bounds,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.failed_axioms.is_empty()
    }

    fn axiom_gate(&self) -> Option<Outcome> {
        if self.is_valid() {
            return None;
        }
        let names: Vec<&str> = self.failed_axioms.iter().map(|a| a.name()).collect();
        Some(Outcome::status(
            ClaimStatus::HypothesisNotMet,
            format!("axioms fail: {}", names.join(", ")),
        ))
    }

    fn ideal_label(&self, i: &KIdeal) -> String {
        format!("{{{}}}", self.t.set_labels(i.members()).join(","))
    }
}

/// A code spec under test together with its structure.
#[derive(Clone, Debug)]
pub struct CodeSubject {
    pub subject: Subject,
    pub spec: ResolvedCodeSpec,
}

impl CodeSubject {
    pub fn new(id: impl Into<String>, spec: ResolvedCodeSpec, bounds: Bounds) -> CodeSubject {
        CodeSubject {
            subject: Subject::new(id, spec.t.clone(), spec.mode, bounds),
            spec,
        }
    }

    /// The ideal power code `Iⁿ` over a structure, as a subject.
    pub fn ideal_power(s: &Subject, ideal: &KIdeal, n: usize) -> Result<CodeSubject> {
        let spec = CodeSpec {
            description: None,
            tgs: format!("{}.json", s.id),
            construction: Construction::IdealPower,
            n,
            ideal: Some(s.t.set_labels(ideal.members())),
            a: None,
            b: None,
            generators: None,
        };
        let spec = spec.resolve_with(s.t.clone(), ideal.mode())?;
        Ok(CodeSubject {
            subject: s.clone(),
            spec,
        })
    }
}

struct Outcome {
    status: ClaimStatus,
    detail: String,
    scan: u64,
    witness: Option<Witness>,
}

impl Outcome {
    fn status(status: ClaimStatus, detail: impl Into<String>) -> Outcome {
        Outcome {
            status,
            detail: detail.into(),
            scan: 0,
            witness: None,
        }
    }

    fn verified(detail: impl Into<String>, scan: u64) -> Outcome {
        Outcome {
            status: ClaimStatus::Verified,
            detail: detail.into(),
            scan,
            witness: None,
        }
    }

    fn falsified(detail: impl Into<String>, scan: u64, witness: Witness) -> Outcome {
        Outcome {
            status: ClaimStatus::Falsified,
            detail: detail.into(),
            scan,
            witness: Some(witness),
        }
    }
}

fn finish(
    claim: ClaimId,
    s: &Subject,
    code: Option<&CodeSpec>,
    instance: String,
    start: Instant,
    body: Result<Outcome>,
) -> ClaimResult {
    let o = body
        .unwrap_or_else(|e| Outcome::status(ClaimStatus::NotApplicable, format!("skipped: {e}")));
    let counterexample = o.witness.map(|witness| Counterexample {
        claim,
        fixture: s.id.clone(),
        literal_ideals: s.mode == IdealMode::Literal,
        tgs: s.t.to_document(),
        code: code.cloned(),
        witness,
    });
    ClaimResult {
        claim,
        fixture: s.id.clone(),
        instance,
        status: o.status,
        detail: o.detail,
        scan_size: o.scan,
        counterexample,
        counterexample_id: None,
        wall_time: start.elapsed(),
    }
}

fn check_pairs(what: &str, a: usize, b: u128, bound: u128) -> Result<()> {
    let size = (a as u128).saturating_mul(b);
    if size > bound {
        return Err(TgsError::BoundExceeded {
            what: what.into(),
            size,
            bound,
        });
    }
    Ok(())
}

fn word_space(t: &Tgs, n: usize) -> u128 {
    (t.size() as u128)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX)
}

/// `|Iⁿ| = |I|ⁿ` and `k = n·log_{|T|}|I|`.
pub fn verify_dimension(s: &Subject, ideal: &KIdeal, n: usize) -> ClaimResult {
    let start = Instant::now();
    let body = || -> Result<Outcome> {
        if let Some(o) = s.axiom_gate() {
            return Ok(o);
        }
        let code = ideal_power_code(&s.t, ideal, n, s.bounds.words)?;
        let enumerated = code.len() as u128;
        let predicted = (ideal.len() as u128).pow(n as u32);
        let k = log_base(s.t.size(), enumerated);
        let k_pred = n as f64 * log_base(s.t.size(), ideal.len() as u128);
        let scan = enumerated as u64;
        if enumerated != predicted {
            let w = Witness::Dimension {
                ideal: s.t.set_labels(ideal.members()),
                n,
                enumerated,
                predicted,
            };
            return Ok(Outcome::falsified(
                format!("|C| = {enumerated}, formula gives {predicted}"),
                scan,
                w,
            ));
        }
        if (k - k_pred).abs() > 1e-9 {
            return Err(TgsError::Usage(format!(
                "k = {k} disagrees with {k_pred} although counts agree"
            )));
        }
        Ok(Outcome::verified(
            format!("{enumerated} = {}^{n}", ideal.len()),
            scan,
        ))
    };
    finish(
        ClaimId::Dimension,
        s,
        None,
        format!("I={} n={n}", s.ideal_label(ideal)),
        start,
        body(),
    )
}

/// Exhaustive minimum distance of `Iⁿ` against the minimal-element
/// prediction.
pub fn verify_min_distance(s: &Subject, ideal: &KIdeal, n: usize) -> ClaimResult {
    let start = Instant::now();
    let body = || -> Result<Outcome> {
        if let Some(o) = s.axiom_gate() {
            return Ok(o);
        }
        if ideal.is_zero() {
            return Ok(Outcome::status(
                ClaimStatus::NotApplicable,
                "zero ideal: distance undefined",
            ));
        }
        let code = ideal_power_code(&s.t, ideal, n, s.bounds.words)?;
        let d = code_params(&s.t, &code)
            .d
            .expect("nonzero ideal gives two or more words");
        let predicted = lattice_prediction(&s.t, ideal.members(), n)
            .expect("nonzero ideal has a minimal element");
        let scan = code.len() as u64;
        if d != predicted {
            let w = Witness::MinDistance {
                ideal: s.t.set_labels(ideal.members()),
                n,
                exhaustive: d,
                predicted,
            };
            return Ok(Outcome::falsified(
                format!("exhaustive d = {d}, prediction {predicted}"),
                scan,
                w,
            ));
        }
        Ok(Outcome::verified(format!("d = {d}"), scan))
    };
    finish(
        ClaimId::MinDistance,
        s,
        None,
        format!("I={} n={n}", s.ideal_label(ideal)),
        start,
        body(),
    )
}

/// `d(Jⁿ) ≤ d(Iⁿ)` for `I ⊆ J`.
pub fn verify_monotonicity(
    s: &Subject,
    smaller: &KIdeal,
    larger: &KIdeal,
    n: usize,
) -> Result<ClaimResult> {
    if !smaller.members().is_subset(larger.members()) {
        return Err(TgsError::Usage(
            "monotonicity needs the first ideal inside the second".into(),
        ));
    }
    let start = Instant::now();
    let body = || -> Result<Outcome> {
        if let Some(o) = s.axiom_gate() {
            return Ok(o);
        }
        if smaller.is_zero() || larger.is_zero() {
            return Ok(Outcome::status(
                ClaimStatus::NotApplicable,
                "zero ideal: distance undefined",
            ));
        }
        let ci = ideal_power_code(&s.t, smaller, n, s.bounds.words)?;
        let cj = ideal_power_code(&s.t, larger, n, s.bounds.words)?;
        let di = code_params(&s.t, &ci).d.expect("nonzero ideal");
        let dj = code_params(&s.t, &cj).d.expect("nonzero ideal");
        let scan = (ci.len() + cj.len()) as u64;
        if dj > di {
            let w = Witness::Monotonicity {
                smaller: s.t.set_labels(smaller.members()),
                larger: s.t.set_labels(larger.members()),
                n,
                d_smaller: di,
                d_larger: dj,
            };
            return Ok(Outcome::falsified(format!("{dj} > {di}"), scan, w));
        }
        Ok(Outcome::verified(format!("{dj} <= {di}"), scan))
    };
    let instance = format!(
        "I={} J={} n={n}",
        s.ideal_label(smaller),
        s.ideal_label(larger)
    );
    Ok(finish(
        ClaimId::Monotonicity,
        s,
        None,
        instance,
        start,
        body(),
    ))
}

/// The k-ideals form a distributive lattice.
pub fn verify_distributive_lattice(s: &Subject) -> ClaimResult {
    let start = Instant::now();
    let body = || -> Result<Outcome> {
        if let Some(o) = s.axiom_gate() {
            return Ok(o);
        }
        let l = IdealLattice::build(&s.t, s.mode, s.bounds.carrier)?;
        let scan = (l.len() as u64).pow(3);
        match l.check_distributive() {
            Ok(()) => Ok(Outcome::verified(format!("{} ideals", l.len()), scan)),
            Err([i, j, k]) => {
                let labels = |x: usize| s.t.set_labels(l.ideals[x].members());
                let w = Witness::Distributivity {
                    ideals: [labels(i), labels(j), labels(k)],
                    lhs: labels(l.meet(i, l.join(j, k))),
                    rhs: labels(l.join(l.meet(i, j), l.meet(i, k))),
                };
                Ok(Outcome::falsified(
                    "meet does not distribute over join",
                    scan,
                    w,
                ))
            }
        }
    };
    finish(
        ClaimId::DistributiveLattice,
        s,
        None,
        String::new(),
        start,
        body(),
    )
}

fn code_instance(cs: &CodeSubject) -> String {
    let spec = &cs.spec.spec;
    let mut s = format!("{} n={}", spec.construction.name(), spec.n);
    if let Some(i) = &cs.spec.ideal {
        s.push_str(&format!(" I={}", cs.subject.ideal_label(i)));
    }
    s
}

/// `wt(c ⊕ e) = wt(c) + wt(e)` whenever `c ∈ C` and `e` has support
/// disjoint from `c`.
pub fn verify_localized_propagation(cs: &CodeSubject) -> ClaimResult {
    let s = &cs.subject;
    let t = &s.t;
    let start = Instant::now();
    let body = || -> Result<Outcome> {
        if let Some(o) = s.axiom_gate() {
            return Ok(o);
        }
        let code = cs.spec.build_code(s.bounds.words)?;
        let n = code.n;
        check_pairs(
            "propagation scan",
            code.len(),
            word_space(t, n),
            s.bounds.words,
        )?;
        let mut scan = 0u64;
        for c in &code.members {
            let wc = tgs_weight(t, c);
            for e in words_over(t.carrier(), n) {
                if c.0
                    .iter()
                    .zip(&e.0)
                    .any(|(&x, &y)| x != t.zero() && y != t.zero())
                {
                    continue;
                }
                scan += 1;
                let we = tgs_weight(t, &e);
                let ws = tgs_weight(t, &word_plus(t, c, &e));
                if ws != wc + we {
                    let w = Witness::LocalizedPropagation {
                        c: c.labels(t),
                        e: e.labels(t),
                        weight_sum: ws,
                        weight_c: wc,
                        weight_e: we,
                    };
                    return Ok(Outcome::falsified(
                        format!("{} + {} has weight {ws}", c.render(t), e.render(t)),
                        scan,
                        w,
                    ));
                }
            }
        }
        Ok(Outcome::verified(format!("{scan} disjoint pairs"), scan))
    };
    finish(
        ClaimId::LocalizedPropagation,
        s,
        Some(&cs.spec.spec),
        code_instance(cs),
        start,
        body(),
    )
}

/// For the chosen leaders `e_α, e_β`, the syndrome of `[e_α, e_β, e_α]` is `α ∨ β`.
/// One result per ordered pair of syndrome classes.
pub fn verify_interaction_join(cs: &CodeSubject) -> Vec<ClaimResult> {
    let s = &cs.subject;
    let t = &s.t;
    let start = Instant::now();
    let single = |o: Result<Outcome>| {
        vec![finish(
            ClaimId::InteractionJoin,
            s,
            Some(&cs.spec.spec),
            code_instance(cs),
            start,
            o,
        )]
    };
    if let Some(o) = s.axiom_gate() {
        return single(Ok(o));
    }
    let table = match cs.spec.coset_table(s.bounds.words) {
        Ok(Some(table)) => table,
        Ok(None) => {
            return single(Ok(Outcome::status(
                ClaimStatus::NotApplicable,
                "no syndrome map",
            )))
        }
        Err(e) => return single(Err(e)),
    };
    let q = &table.quotient;
    if !q.well_defined {
        return single(Ok(Outcome::status(
            ClaimStatus::HypothesisNotMet,
            "quotient operations are not well defined",
        )));
    }
    let order_ok = q.to_tgs().map(|qt| {
        let o = qt.order();
        o.is_partial_order() && o.minimum() == Some(qt.zero())
    });
    if !matches!(order_ok, Ok(true)) {
        return single(Ok(Outcome::status(
            ClaimStatus::HypothesisNotMet,
            "class order is not a lattice",
        )));
    }
    let mut results = Vec::new();
    for ca in &table.classes {
        for cb in &table.classes {
            let start = Instant::now();
            let (a, b) = (ca.syndrome, cb.syndrome);
            let join = q.plus(a, b);
            let (ea, eb) = (&ca.chosen_leader, &cb.chosen_leader);
            let scan = 1u64;
            let p = word_ternary(t, ea, eb, ea);
            let syn = q.project(table.phi.eval(t, &p).expect("lengths agree"));
            let mut outcome = None;
            if syn != join {
                let w = Witness::InteractionJoin {
                    leader_alpha: ea.labels(t),
                    leader_beta: eb.labels(t),
                    alpha: q.class_label(a).into(),
                    beta: q.class_label(b).into(),
                    product: p.labels(t),
                    syndrome: q.class_label(syn).into(),
                    join: q.class_label(join).into(),
                };
                let detail = format!(
                    "[{0}, {1}, {0}] = {2} has syndrome {3}, join is {4}",
                    ea.render(t),
                    eb.render(t),
                    p.render(t),
                    q.class_label(syn),
                    q.class_label(join)
                );
                outcome = Some(Outcome::falsified(detail, scan, w));
            }
            let o = outcome.unwrap_or_else(|| {
                Outcome::verified(format!("syndrome {}", q.class_label(join)), scan)
            });
            let instance = format!(
                "{} alpha={} beta={}",
                code_instance(cs),
                q.class_label(a),
                q.class_label(b)
            );
            results.push(finish(
                ClaimId::InteractionJoin,
                s,
                Some(&cs.spec.spec),
                instance,
                start,
                Ok(o),
            ));
        }
    }
    results
}

/// `S(c ⊕ e) = S(e)` for every codeword `c` and word `e`.
pub fn verify_syndrome_invariance(cs: &CodeSubject) -> ClaimResult {
    let s = &cs.subject;
    let t = &s.t;
    let start = Instant::now();
    let body = || -> Result<Outcome> {
        if let Some(o) = s.axiom_gate() {
            return Ok(o);
        }
        let Some(table) = cs.spec.coset_table(s.bounds.words)? else {
            return Ok(Outcome::status(
                ClaimStatus::NotApplicable,
                "no syndrome map",
            ));
        };
        let code = cs.spec.build_code(s.bounds.words)?;
        check_pairs(
            "invariance scan",
            code.len(),
            word_space(t, code.n),
            s.bounds.words,
        )?;
        let mut scan = 0u64;
        for e in words_over(t.carrier(), code.n) {
            let se = table.syndrome(t, &e)?;
            for c in &code.members {
                scan += 1;
                let sc = table.syndrome(t, &word_plus(t, c, &e))?;
                if sc != se {
                    let q = &table.quotient;
                    let w = Witness::SyndromeInvariance {
                        c: c.labels(t),
                        e: e.labels(t),
                        syndrome_shifted: q.class_label(sc).into(),
                        syndrome_error: q.class_label(se).into(),
                    };
                    let detail = format!(
                        "S({} + {}) = {}, S(e) = {}",
                        c.render(t),
                        e.render(t),
                        q.class_label(sc),
                        q.class_label(se)
                    );
                    return Ok(Outcome::falsified(detail, scan, w));
                }
            }
        }
        Ok(Outcome::verified(format!("{scan} pairs"), scan))
    };
    finish(
        ClaimId::SyndromeInvariance,
        s,
        Some(&cs.spec.spec),
        code_instance(cs),
        start,
        body(),
    )
}

/// With unique leaders, `decode(c ⊕ e) = c` whenever `wt(e)` is at most the
/// leader weight of its class.
pub fn verify_decoder_correctness(cs: &CodeSubject) -> ClaimResult {
    let s = &cs.subject;
    let t = &s.t;
    let start = Instant::now();
    let body = || -> Result<Outcome> {
        if let Some(o) = s.axiom_gate() {
            return Ok(o);
        }
        let Some(table) = cs.spec.coset_table(s.bounds.words)? else {
            return Ok(Outcome::status(
                ClaimStatus::NotApplicable,
                "no syndrome map",
            ));
        };
        if let Some(c) = table.classes.iter().find(|c| !c.unique_leader) {
            let detail = format!(
                "class {} has {} minimum-weight members",
                table.quotient.class_label(c.syndrome),
                c.leaders.len()
            );
            return Ok(Outcome::status(ClaimStatus::HypothesisNotMet, detail));
        }
        let code = cs.spec.build_code(s.bounds.words)?;
        check_pairs(
            "decoder scan",
            code.len(),
            word_space(t, code.n),
            s.bounds.words,
        )?;
        let mut scan = 0u64;
        for class in &table.classes {
            for e in class
                .members
                .iter()
                .filter(|e| tgs_weight(t, e) <= class.leader_weight)
            {
                for c in &code.members {
                    scan += 1;
                    let r = word_plus(t, c, e);
                    let out = decode(t, &table, &code, &r)?.output;
                    if out != *c {
                        let w = Witness::DecoderCorrectness {
                            c: c.labels(t),
                            e: e.labels(t),
                            received: r.labels(t),
                            output: out.labels(t),
                        };
                        let detail = format!(
                            "{} + {} = {} decodes to {}",
                            c.render(t),
                            e.render(t),
                            r.render(t),
                            out.render(t)
                        );
                        return Ok(Outcome::falsified(detail, scan, w));
                    }
                }
            }
        }
        Ok(Outcome::verified(format!("{scan} pairs"), scan))
    };
    finish(
        ClaimId::DecoderCorrectness,
        s,
        Some(&cs.spec.spec),
        code_instance(cs),
        start,
        body(),
    )
}

/// `G ⊆ Iⁿ` implies `⟨G⟩ ⊆ Iⁿ`; equality is reported, not required.
pub fn verify_span(cs: &CodeSubject) -> ClaimResult {
    let s = &cs.subject;
    let t = &s.t;
    let start = Instant::now();
    let body = || -> Result<Outcome> {
        if let Some(o) = s.axiom_gate() {
            return Ok(o);
        }
        let (Construction::Generated, Some(ideal)) = (cs.spec.spec.construction, cs.spec.ideal)
        else {
            return Ok(Outcome::status(
                ClaimStatus::NotApplicable,
                "needs a generated code with an ideal",
            ));
        };
        match check_span_theorem(t, &cs.spec.generators, &ideal, s.bounds.words)? {
            SpanReport::PreconditionViolated {
                generator,
                coordinate,
            } => Ok(Outcome::status(
                ClaimStatus::HypothesisNotMet,
                format!("generator {generator} leaves the ideal at coordinate {coordinate}"),
            )),
            SpanReport::Checked {
                generated,
                inclusion: true,
                equality,
                power,
            } => Ok(Outcome::verified(
                format!("|<G>| = {generated}, |I^n| = {power}, equality {equality}"),
                generated as u64,
            )),
            SpanReport::Checked { generated, .. } => {
                let code = generated_code(t, &cs.spec.generators, s.bounds.words)?;
                let out = code
                    .members
                    .iter()
                    .find(|w| !w.0.iter().all(|&x| ideal.contains(x)))
                    .expect("inclusion failed");
                let detail = format!("{} is generated but leaves the ideal", out.render(t));
                Ok(Outcome::falsified(
                    detail,
                    generated as u64,
                    Witness::Span {
                        outside: out.labels(t),
                    },
                ))
            }
        }
    };
    finish(
        ClaimId::Span,
        s,
        Some(&cs.spec.spec),
        code_instance(cs),
        start,
        body(),
    )
}

/// Every term `[aᵢ, cᵢ, bⱼ]` lies in `I` exactly when `Φ(c)` does.
pub fn verify_constraint_equivalence(cs: &CodeSubject) -> ClaimResult {
    let s = &cs.subject;
    let t = &s.t;
    let start = Instant::now();
    let body = || -> Result<Outcome> {
        if let Some(o) = s.axiom_gate() {
            return Ok(o);
        }
        let (Some(phi), Some(ideal)) = (&cs.spec.phi, &cs.spec.ideal) else {
            return Ok(Outcome::status(
                ClaimStatus::NotApplicable,
                "needs a map and an ideal",
            ));
        };
        let n = cs.spec.n();
        check_pairs("word space", 1, word_space(t, n), s.bounds.words)?;
        let mut scan = 0u64;
        for w in words_over(t.carrier(), n) {
            scan += 1;
            let a = phi.all_terms_in(t, &w, ideal.members());
            let b = ideal.contains(phi.eval(t, &w)?);
            if a != b {
                let detail = format!("{}: terms in ideal {a}, fold in ideal {b}", w.render(t));
                let witness = Witness::ConstraintEquivalence {
                    word: w.labels(t),
                    in_constraint_code: a,
                    phi_in_ideal: b,
                };
                return Ok(Outcome::falsified(detail, scan, witness));
            }
        }
        Ok(Outcome::verified(format!("{scan} words"), scan))
    };
    finish(
        ClaimId::ConstraintEquivalence,
        s,
        Some(&cs.spec.spec),
        code_instance(cs),
        start,
        body(),
    )
}

/// The single result recorded for a claim on a structure that fails its
/// axioms, or for a claim that does not apply to this kind of fixture.
pub(super) fn placeholder(claim: ClaimId, s: &Subject, detail: &str) -> ClaimResult {
    let o = s
        .axiom_gate()
        .unwrap_or_else(|| Outcome::status(ClaimStatus::NotApplicable, detail));
    finish(claim, s, None, String::new(), Instant::now(), Ok(o))
}

pub(super) fn skipped(claim: ClaimId, s: &Subject, err: TgsError) -> ClaimResult {
    finish(claim, s, None, String::new(), Instant::now(), Err(err))
}
