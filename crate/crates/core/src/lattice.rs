use serde_json::{json, Value};

use crate::error::{Result, TgsError};
use crate::ideal::{self, IdealMode, KIdeal};
use crate::tgs::Tgs;

/// The k-ideals of a structure ordered by inclusion.
#[derive(Clone, Debug)]
pub struct IdealLattice {
    pub mode: IdealMode,
    pub ideals: Vec<KIdeal>,
    /// `meet[i * k + j]` indexes the meet of ideals `i` and `j`.
    meet: Vec<usize>,
    join: Vec<usize>,
    /// Covering pairs `(lower, upper)` of the Hasse diagram.
    pub covers: Vec<(usize, usize)>,
    /// First triple `(I, J, K)` with `I ∧ (J ∨ K) ≠ (I ∧ J) ∨ (I ∧ K)`.
    pub distributivity_counterexample: Option<[usize; 3]>,
}

impl IdealLattice {
    pub fn build(t: &Tgs, mode: IdealMode, carrier_bound: usize) -> Result<IdealLattice> {
        let ideals = ideal::enumerate_k_ideals(t, mode, carrier_bound)?;
        let k = ideals.len();
        let find = |i: &KIdeal| -> Result<usize> {
            ideals
                .iter()
                .position(|x| x.members() == i.members())
                .ok_or_else(|| {
                    TgsError::Malformed(
                        "lattice operation produced a set outside the enumeration".into(),
                    )
                })
        };
        let mut meet = Vec::with_capacity(k * k);
        let mut join = Vec::with_capacity(k * k);
        for a in &ideals {
            for b in &ideals {
                meet.push(find(&ideal::meet(a, b)?)?);
                join.push(find(&ideal::join(t, a, b)?)?);
            }
        }
        let subset = |i: usize, j: usize| ideals[i].members().is_subset(ideals[j].members());
        let mut covers = Vec::new();
        for lo in 0..k {
            for hi in 0..k {
                if lo == hi || !subset(lo, hi) {
                    continue;
                }
                let between = (0..k).any(|m| m != lo && m != hi && subset(lo, m) && subset(m, hi));
                if !between {
                    covers.push((lo, hi));
                }
            }
        }
        let mut lattice = IdealLattice {
            mode,
            ideals,
            meet,
            join,
            covers,
            distributivity_counterexample: None,
        };
        lattice.distributivity_counterexample = lattice.check_distributive().err();
        Ok(lattice)
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.meet[i * self.len() + j]
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.join[i * self.len() + j]
    }

    pub fn includes(&self, lower: usize, upper: usize) -> bool {
        self.ideals[lower]
            .members()
            .is_subset(self.ideals[upper].members())
    }

    /// Scans every triple for `I ∧ (J ∨ K) = (I ∧ J) ∨ (I ∧ K)`.
    pub fn check_distributive(&self) -> std::result::Result<(), [usize; 3]> {
        let k = self.len();
        for i in 0..k {
            for j in 0..k {
                for l in 0..k {
                    let lhs = self.meet(i, self.join(j, l));
                    let rhs = self.join(self.meet(i, j), self.meet(i, l));
                    if lhs != rhs {
                        return Err([i, j, l]);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_distributive(&self) -> bool {
        self.distributivity_counterexample.is_none()
    }

    /// Length of the longest chain from the bottom to each node.
    pub fn ranks(&self) -> Vec<usize> {
        let mut rank = vec![0; self.len()];
        // Ideals are sorted by size, so covers always point to later entries.
        for hi in 0..self.len() {
            for &(lo, h) in &self.covers {
                if h == hi {
                    rank[hi] = rank[hi].max(rank[lo] + 1);
                }
            }
        }
        rank
    }

    fn name(&self, t: &Tgs, i: usize) -> String {
        format!("{{{}}}", t.set_labels(self.ideals[i].members()).join(","))
    }

    pub fn to_json(&self, t: &Tgs) -> Value {
        let k = self.len();
        let rows = |table: &Vec<usize>| -> Vec<Vec<usize>> {
            table.chunks(k.max(1)).map(|r| r.to_vec()).collect()
        };
        json!({
            "mode": self.mode,
            "ideals": self.ideals.iter().map(|i| t.set_labels(i.members())).collect::<Vec<_>>(),
            "hasse_edges": self.covers.iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>(),
            "meet": rows(&self.meet),
            "join": rows(&self.join),
            "distributive": self.is_distributive(),
            "counterexample": self.distributivity_counterexample,
        })
    }

    /// Text rendering: one row per rank, top first, then the covering edges.
    pub fn to_ascii(&self, t: &Tgs) -> String {
        let ranks = self.ranks();
        let top = ranks.iter().copied().max().unwrap_or(0);
        let mut out = String::new();
        for r in (0..=top).rev() {
            let row: Vec<String> = (0..self.len())
                .filter(|&i| ranks[i] == r)
                .map(|i| format!("[{i}] {}", self.name(t, i)))
                .collect();
            out.push_str(&format!("rank {r}: {}\n", row.join("   ")));
            if r > 0 {
                let edges: Vec<String> = self
                    .covers
                    .iter()
                    .filter(|&&(_, hi)| ranks[hi] == r)
                    .map(|&(lo, hi)| format!("{hi}-{lo}"))
                    .collect();
                out.push_str(&format!(
                    "        {}\n",
                    edges.iter().map(|_| "|").collect::<Vec<_>>().join("  ")
                ));
                out.push_str(&format!("        edges: {}\n", edges.join(", ")));
            }
        }
        match self.distributivity_counterexample {
            None => out.push_str("distributive: yes\n"),
            Some([i, j, k]) => out.push_str(&format!(
                "distributive: NO, I={} J={} K={}\n",
                self.name(t, i),
                self.name(t, j),
                self.name(t, k)
            )),
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn m3_chain_is_distributive() {
        let t = fixtures::m3();
        let l = IdealLattice::build(&t, IdealMode::PlusClosed, 12).unwrap();
        assert_eq!(l.len(), 3);
        assert!(l.is_distributive());
        assert_eq!(l.covers, vec![(0, 1), (1, 2)]);
        assert_eq!(l.ranks(), vec![0, 1, 2]);
    }

    #[test]
    fn one_node_lattice() {
        let t = Tgs::from_fns(&["0"], 0, |_, _| 0, |_, _, _| 0, &[]).unwrap();
        let l = IdealLattice::build(&t, IdealMode::PlusClosed, 12).unwrap();
        assert_eq!(l.len(), 1);
        assert!(l.check_distributive().is_ok());
    }

    #[test]
    fn grid_lattice_closure_and_absorption() {
        let t = fixtures::m3xm3();
        for mode in [IdealMode::PlusClosed, IdealMode::Literal] {
            let l = IdealLattice::build(&t, mode, 12).unwrap();
            assert!(l.is_distributive());
            for i in 0..l.len() {
                for j in 0..l.len() {
                    assert_eq!(l.meet(i, l.join(i, j)), i);
                    assert_eq!(l.join(i, l.meet(i, j)), i);
                    let m = l.ideals[i].members().intersection(l.ideals[j].members());
                    assert_eq!(l.ideals[l.meet(i, j)].members(), m);
                }
            }
        }
    }

    #[test]
    fn non_distributive_lattice_is_detected() {
        // The diamond {0, p, q, r, 1}: ⊕ is its join, ternary
        // product x∧y∧z. Every nonzero principal downset is an ideal, so the
        // ideal lattice contains the diamond.
        let labels = ["0", "p", "q", "r", "1"];
        let join = |x: usize, y: usize| {
            if x == y || y == 0 {
                x
            } else if x == 0 {
                y
            } else {
                4
            }
        };
        let meet2 = |x: usize, y: usize| {
            if x == y || y == 4 {
                x
            } else if x == 4 {
                y
            } else {
                0
            }
        };
        let t = Tgs::from_fns(&labels, 0, join, |x, y, z| meet2(meet2(x, y), z), &[]).unwrap();
        let l = IdealLattice::build(&t, IdealMode::PlusClosed, 12).unwrap();
        let [i, j, k] = l
            .distributivity_counterexample
            .expect("diamond is not distributive");
        assert_ne!(l.meet(i, l.join(j, k)), l.join(l.meet(i, j), l.meet(i, k)));
        assert!(l.to_ascii(&t).contains("distributive: NO"));
    }
}
