//! Exhaustive axiom scans with replayable witnesses.
//!
//! Every scan walks its input tuples in lexicographic index order and keeps
//! at most `cap` witnesses per axiom; the total number of violations is
//! still counted.

use serde::Serialize;
use serde_json::{json, Value};

use crate::elem::Elem;
use crate::tgs::Tgs;

pub const DEFAULT_WITNESS_CAP: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    /// Idempotent, commutative, associative addition.
    Addition,
    Monotonicity,
    Distributivity,
    GammaCompatibility,
    /// Balanced ternary associativity.
    Associativity,
    /// `x ⊕ 0 = x`.
    ZeroIdentity,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [
        Axiom::Addition,
        Axiom::Monotonicity,
        Axiom::Distributivity,
        Axiom::GammaCompatibility,
        Axiom::Associativity,
        Axiom::ZeroIdentity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Addition => "addition",
            Axiom::Monotonicity => "monotonicity",
            Axiom::Distributivity => "distributivity",
            Axiom::GammaCompatibility => "gamma-compatibility",
            Axiom::Associativity => "associativity",
            Axiom::ZeroIdentity => "zero-identity",
        }
    }
}

/// The concrete law a witness breaks. Slots are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "law", rename_all = "kebab-case")]
pub enum Law {
    /// inputs `[x]`: `x ⊕ x` vs `x`
    Idempotent,
    /// inputs `[x, y]`: `x ⊕ y` vs `y ⊕ x`
    Commutative,
    /// inputs `[x, y, z]`: `(x ⊕ y) ⊕ z` vs `x ⊕ (y ⊕ z)`
    Associative,
    /// inputs `[x, y, z, x', y', z']` differing only in `slot`, with the
    /// smaller value first: `[x,y,z]` must be `≤ [x',y',z']`.
    Monotone { slot: usize },
    /// inputs `[a, b, c, d]`: `a ⊕ b` placed in `slot`, `c` and `d` filling
    /// the remaining slots in order.
    Distributive { slot: usize },
    /// inputs `[a, b, c]`: `γ·[a,b,c]` vs the product with `γ` applied in `slot`.
    GammaCompatible { gamma: usize, slot: usize },
    /// inputs `[a, b, c, d, e]`: `[[a,b,c],d,e]` vs `[a,[b,c,d],e]` (form 1)
    /// or `[a,b,[c,d,e]]` (form 2).
    Balanced { form: usize },
    /// inputs `[x]`: `x ⊕ 0` vs `x`
    ZeroIdentity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub axiom: Axiom,
    pub law: Law,
    pub inputs: Vec<Elem>,
    pub lhs: Elem,
    pub rhs: Elem,
}

fn place(slot: usize, v: Elem, c: Elem, d: Elem) -> [Elem; 3] {
    match slot {
        0 => [v, c, d],
        1 => [c, v, d],
        _ => [c, d, v],
    }
}

fn tern(t: &Tgs, a: [Elem; 3]) -> Elem {
    t.ternary(a[0], a[1], a[2])
}

impl Law {
    /// Recomputes both sides of the law for `inputs`.
    pub fn evaluate(self, t: &Tgs, inputs: &[Elem]) -> (Elem, Elem) {
        let i = inputs;
        match self {
            Law::Idempotent => (t.plus(i[0], i[0]), i[0]),
            Law::Commutative => (t.plus(i[0], i[1]), t.plus(i[1], i[0])),
            Law::Associative => (
                t.plus(t.plus(i[0], i[1]), i[2]),
                t.plus(i[0], t.plus(i[1], i[2])),
            ),
            Law::Monotone { .. } => (t.ternary(i[0], i[1], i[2]), t.ternary(i[3], i[4], i[5])),
            Law::Distributive { slot } => {
                let (a, b, c, d) = (i[0], i[1], i[2], i[3]);
                let lhs = tern(t, place(slot, t.plus(a, b), c, d));
                let rhs = t.plus(tern(t, place(slot, a, c, d)), tern(t, place(slot, b, c, d)));
                (lhs, rhs)
            }
            Law::GammaCompatible { gamma, slot } => {
                let mut args = [i[0], i[1], i[2]];
                let lhs = t.act(gamma, tern(t, args));
                args[slot] = t.act(gamma, args[slot]);
                (lhs, tern(t, args))
            }
            Law::Balanced { form } => {
                let (a, b, c, d, e) = (i[0], i[1], i[2], i[3], i[4]);
                let lhs = t.ternary(t.ternary(a, b, c), d, e);
                let rhs = if form == 1 {
                    t.ternary(a, t.ternary(b, c, d), e)
                } else {
                    t.ternary(a, b, t.ternary(c, d, e))
                };
                (lhs, rhs)
            }
            Law::ZeroIdentity => (t.plus(i[0], t.zero()), i[0]),
        }
    }

    fn violated(self, t: &Tgs, lhs: Elem, rhs: Elem) -> bool {
        match self {
            Law::Monotone { .. } => !t.leq(lhs, rhs),
            _ => lhs != rhs,
        }
    }
}

impl Witness {
    /// True when re-evaluating the law reproduces the recorded values and they
    /// still constitute a violation.
    pub fn replay(&self, t: &Tgs) -> bool {
        if self.inputs.iter().any(|x| x.index() >= t.size()) {
            return false;
        }
        if let Law::Monotone { slot } = self.law {
            let (lo, hi) = (self.inputs[slot], self.inputs[slot + 3]);
            let others_equal = (0..3)
                .filter(|&s| s != slot)
                .all(|s| self.inputs[s] == self.inputs[s + 3]);
            if !others_equal || !t.leq(lo, hi) {
                return false;
            }
        }
        let (lhs, rhs) = self.law.evaluate(t, &self.inputs);
        lhs == self.lhs && rhs == self.rhs && self.law.violated(t, lhs, rhs)
    }

    pub fn render(&self, t: &Tgs) -> String {
        let l = |x: Elem| t.label(x).to_string();
        let i: Vec<String> = self.inputs.iter().map(|&x| l(x)).collect();
        match self.law {
            Law::Idempotent => format!("{0}⊕{0} = {1} ≠ {0}", i[0], l(self.lhs)),
            Law::Commutative => format!(
                "{0}⊕{1} = {2} ≠ {1}⊕{0} = {3}",
                i[0],
                i[1],
                l(self.lhs),
                l(self.rhs)
            ),
            Law::Associative => format!(
                "({0}⊕{1})⊕{2} = {3} ≠ {0}⊕({1}⊕{2}) = {4}",
                i[0],
                i[1],
                i[2],
                l(self.lhs),
                l(self.rhs)
            ),
            Law::Monotone { .. } => format!(
                "[{},{},{}] = {} is not ≤ [{},{},{}] = {}",
                i[0],
                i[1],
                i[2],
                l(self.lhs),
                i[3],
                i[4],
                i[5],
                l(self.rhs)
            ),
            Law::Distributive { slot } => {
                let s = ["a⊕b", &i[2], &i[3]];
                let args = match slot {
                    0 => [s[0], s[1], s[2]],
                    1 => [s[1], s[0], s[2]],
                    _ => [s[1], s[2], s[0]],
                };
                format!(
                    "distributivity in slot {} with a={}, b={}: [{}] = {} ≠ {}",
                    slot + 1,
                    i[0],
                    i[1],
                    args.join(","),
                    l(self.lhs),
                    l(self.rhs)
                )
            }
            Law::GammaCompatible { gamma, slot } => format!(
                "{}·[{},{},{}] = {} ≠ product with the action in slot {} = {}",
                t.gammas()[gamma],
                i[0],
                i[1],
                i[2],
                l(self.lhs),
                slot + 1,
                l(self.rhs)
            ),
            Law::Balanced { form } => format!(
                "[[{0},{1},{2}],{3},{4}] = {5} ≠ {6} = {7}",
                i[0],
                i[1],
                i[2],
                i[3],
                i[4],
                l(self.lhs),
                if form == 1 {
                    format!("[{},[{},{},{}],{}]", i[0], i[1], i[2], i[3], i[4])
                } else {
                    format!("[{},{},[{},{},{}]]", i[0], i[1], i[2], i[3], i[4])
                },
                l(self.rhs)
            ),
            Law::ZeroIdentity => format!(
                "{}⊕{} = {} ≠ {}",
                i[0],
                t.label(t.zero()),
                l(self.lhs),
                i[0]
            ),
        }
    }

    pub fn to_json(&self, t: &Tgs) -> Value {
        json!({
            "axiom": self.axiom,
            "law": self.law,
            "inputs": self.inputs.iter().map(|&x| t.label(x)).collect::<Vec<_>>(),
            "lhs": t.label(self.lhs),
            "rhs": t.label(self.rhs),
            "text": self.render(t),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomStatus {
    pub axiom: Axiom,
    pub holds: bool,
    /// Total violations found, including those beyond the witness cap.
    pub violations: u64,
    pub tuples_checked: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub statuses: Vec<AxiomStatus>,
    pub witnesses: Vec<Witness>,
    pub witness_cap: usize,
    /// `[x,y,0] = 0` in every slot. Informational only.
    pub zero_absorbing: bool,
    /// The ternary product is invariant under permuting its arguments.
    /// Informational only.
    pub ternary_symmetric: bool,
}

impl AxiomReport {
    pub fn is_valid(&self) -> bool {
        self.statuses.iter().all(|s| s.holds)
    }

    pub fn status(&self, axiom: Axiom) -> &AxiomStatus {
        self.statuses
            .iter()
            .find(|s| s.axiom == axiom)
            .expect("all axioms are reported")
    }

    pub fn witnesses_for(&self, axiom: Axiom) -> impl Iterator<Item = &Witness> {
        self.witnesses.iter().filter(move |w| w.axiom == axiom)
    }

    pub fn failed(&self) -> Vec<Axiom> {
        self.statuses
            .iter()
            .filter(|s| !s.holds)
            .map(|s| s.axiom)
            .collect()
    }

    pub fn to_json(&self, t: &Tgs) -> Value {
        json!({
            "valid": self.is_valid(),
            "statuses": self.statuses,
            "witness_cap": self.witness_cap,
            "witnesses": self.witnesses.iter().map(|w| w.to_json(t)).collect::<Vec<_>>(),
            "informational": {
                "zero_absorbing": self.zero_absorbing,
                "ternary_symmetric": self.ternary_symmetric,
            },
        })
    }

    pub fn to_text(&self, t: &Tgs) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "carrier size {}; {}\n",
            t.size(),
            if self.is_valid() { "VALID" } else { "INVALID" }
        ));
        for s in &self.statuses {
            out.push_str(&format!(
                "  {:<20} {:<4} {:>8} violations / {} tuples\n",
                s.axiom.name(),
                if s.holds { "pass" } else { "FAIL" },
                s.violations,
                s.tuples_checked
            ));
        }
        out.push_str(&format!("  zero absorbing:    {}\n", self.zero_absorbing));
        out.push_str(&format!(
            "  ternary symmetric: {}\n",
            self.ternary_symmetric
        ));
        if !self.witnesses.is_empty() {
            out.push_str(&format!(
                "witnesses (at most {} per axiom):\n",
                self.witness_cap
            ));
            for w in &self.witnesses {
                out.push_str(&format!("  [{}] {}\n", w.axiom.name(), w.render(t)));
            }
        }
        out
    }
}

struct Scan<'t> {
    t: &'t Tgs,
    cap: usize,
    first_only: bool,
    stopped: bool,
    witnesses: Vec<Witness>,
    statuses: Vec<AxiomStatus>,
}

impl<'t> Scan<'t> {
    fn begin(&mut self, axiom: Axiom) {
        self.statuses.push(AxiomStatus {
            axiom,
            holds: true,
            violations: 0,
            tuples_checked: 0,
        });
    }

    fn test(&mut self, axiom: Axiom, law: Law, inputs: &[Elem]) {
        let status = self.statuses.last_mut().expect("begin called");
        status.tuples_checked += 1;
        let (lhs, rhs) = law.evaluate(self.t, inputs);
        if law.violated(self.t, lhs, rhs) {
            status.holds = false;
            status.violations += 1;
            if status.violations as usize <= self.cap {
                self.witnesses.push(Witness {
                    axiom,
                    law,
                    inputs: inputs.to_vec(),
                    lhs,
                    rhs,
                });
            }
            if self.first_only {
                self.stopped = true;
            }
        }
    }
}

pub fn check_axioms(t: &Tgs) -> AxiomReport {
    check_axioms_capped(t, DEFAULT_WITNESS_CAP)
}

pub fn check_axioms_capped(t: &Tgs, cap: usize) -> AxiomReport {
    let mut scan = Scan {
        t,
        cap,
        first_only: false,
        stopped: false,
        witnesses: Vec::new(),
        statuses: Vec::new(),
    };
    run(&mut scan);
    finish(t, scan)
}

/// Stops at the first violation; used where only the verdict matters.
pub fn is_valid(t: &Tgs) -> bool {
    let mut scan = Scan {
        t,
        cap: 1,
        first_only: true,
        stopped: false,
        witnesses: Vec::new(),
        statuses: Vec::new(),
    };
    run(&mut scan);
    !scan.stopped
}

fn finish(t: &Tgs, scan: Scan<'_>) -> AxiomReport {
    let zero = t.zero();
    let zero_absorbing = t.elements().all(|x| {
        t.elements().all(|y| {
            t.ternary(x, y, zero) == zero
                && t.ternary(x, zero, y) == zero
                && t.ternary(zero, x, y) == zero
        })
    });
    let ternary_symmetric = t.elements().all(|x| {
        t.elements().all(|y| {
            t.elements().all(|z| {
                let v = t.ternary(x, y, z);
                v == t.ternary(x, z, y) && v == t.ternary(y, x, z) && v == t.ternary(z, y, x)
            })
        })
    });
    AxiomReport {
        statuses: scan.statuses,
        witnesses: scan.witnesses,
        witness_cap: scan.cap,
        zero_absorbing,
        ternary_symmetric,
    }
}

macro_rules! bail_if_stopped {
    ($scan:expr) => {
        if $scan.stopped {
            return;
        }
    };
}

fn run(scan: &mut Scan<'_>) {
    let t = scan.t;
    let els: Vec<Elem> = t.elements().collect();

    scan.begin(Axiom::Addition);
    for &x in &els {
        scan.test(Axiom::Addition, Law::Idempotent, &[x]);
        bail_if_stopped!(scan);
    }
    for &x in &els {
        for &y in &els {
            scan.test(Axiom::Addition, Law::Commutative, &[x, y]);
            bail_if_stopped!(scan);
        }
    }
    for &x in &els {
        for &y in &els {
            for &z in &els {
                scan.test(Axiom::Addition, Law::Associative, &[x, y, z]);
                bail_if_stopped!(scan);
            }
        }
    }

    scan.begin(Axiom::Monotonicity);
    for slot in 0..3 {
        for &lo in &els {
            for &hi in &els {
                if lo == hi || !t.leq(lo, hi) {
                    continue;
                }
                for &c in &els {
                    for &d in &els {
                        let small = place(slot, lo, c, d);
                        let large = place(slot, hi, c, d);
                        let inputs = [small[0], small[1], small[2], large[0], large[1], large[2]];
                        scan.test(Axiom::Monotonicity, Law::Monotone { slot }, &inputs);
                        bail_if_stopped!(scan);
                    }
                }
            }
        }
    }

    scan.begin(Axiom::Distributivity);
    for slot in 0..3 {
        for &a in &els {
            for &b in &els {
                for &c in &els {
                    for &d in &els {
                        scan.test(
                            Axiom::Distributivity,
                            Law::Distributive { slot },
                            &[a, b, c, d],
                        );
                        bail_if_stopped!(scan);
                    }
                }
            }
        }
    }

    scan.begin(Axiom::GammaCompatibility);
    for gamma in 0..t.gammas().len() {
        for &a in &els {
            for &b in &els {
                for &c in &els {
                    for slot in 0..3 {
                        scan.test(
                            Axiom::GammaCompatibility,
                            Law::GammaCompatible { gamma, slot },
                            &[a, b, c],
                        );
                        bail_if_stopped!(scan);
                    }
                }
            }
        }
    }

    scan.begin(Axiom::Associativity);
    for &a in &els {
        for &b in &els {
            for &c in &els {
                for &d in &els {
                    for &e in &els {
                        for form in 1..=2 {
                            scan.test(
                                Axiom::Associativity,
                                Law::Balanced { form },
                                &[a, b, c, d, e],
                            );
                            bail_if_stopped!(scan);
                        }
                    }
                }
            }
        }
    }

    scan.begin(Axiom::ZeroIdentity);
    for &x in &els {
        scan.test(Axiom::ZeroIdentity, Law::ZeroIdentity, &[x]);
        bail_if_stopped!(scan);
    }
}
