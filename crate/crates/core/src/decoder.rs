//! Syndromes, coset tables, the absorption decoder and a brute-force
//! nearest-codeword oracle, plus a channel simulator for both.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::code::{
    check_word_bound, hamming_unchecked, ominus_unchecked, tgs_weight, word_plus, words_over, Code,
    CodeParams, Morphism, Word,
};
use crate::error::{Result, TgsError};
use crate::quotient::QuotientTgs;
use crate::tgs::Tgs;

/// Class of `Φ(r)` in the quotient.
pub fn syndrome(t: &Tgs, phi: &Morphism, q: &QuotientTgs, r: &Word) -> Result<usize> {
    if q.partition.class_of.len() != t.size() {
        return Err(TgsError::Usage(
            "quotient was built over a different carrier".into(),
        ));
    }
    Ok(q.project(phi.eval(t, r)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetClass {
    /// Quotient class index of the syndrome.
    pub syndrome: usize,
    pub members: Vec<Word>,
    /// Every minimum-weight member, lexicographic.
    pub leaders: Vec<Word>,
    pub leader_weight: usize,
    /// First entry of `leaders`.
    pub chosen_leader: Word,
    pub unique_leader: bool,
}

/// `Tⁿ` split by syndrome. Only nonempty classes are kept, in quotient order.
#[derive(Clone, Debug)]
pub struct CosetTable {
    pub n: usize,
    pub phi: Morphism,
    pub quotient: QuotientTgs,
    pub classes: Vec<CosetClass>,
}

pub fn build_coset_table(
    t: &Tgs,
    phi: &Morphism,
    q: &QuotientTgs,
    n: usize,
    bound: u128,
) -> Result<CosetTable> {
    if phi.len() != n {
        return Err(TgsError::Usage(format!(
            "map has length {}, table length is {n}",
            phi.len()
        )));
    }
    check_word_bound("coset table", t.size(), n, bound)?;
    let mut buckets: Vec<Vec<Word>> = vec![Vec::new(); q.len()];
    for w in words_over(t.carrier(), n) {
        let s = q.project(phi.eval_unchecked(t, &w));
        buckets[s].push(w);
    }
    let classes = buckets
        .into_iter()
        .enumerate()
        .filter(|(_, m)| !m.is_empty())
        .map(|(syndrome, members)| {
            let leader_weight = members
                .iter()
                .map(|w| tgs_weight(t, w))
                .min()
                .expect("nonempty");
            let leaders: Vec<Word> = members
                .iter()
                .filter(|w| tgs_weight(t, w) == leader_weight)
                .cloned()
                .collect();
            CosetClass {
                syndrome,
                chosen_leader: leaders[0].clone(),
                unique_leader: leaders.len() == 1,
                leaders,
                leader_weight,
                members,
            }
        })
        .collect();
    Ok(CosetTable {
        n,
        phi: phi.clone(),
        quotient: q.clone(),
        classes,
    })
}

impl CosetTable {
    pub fn syndrome(&self, t: &Tgs, r: &Word) -> Result<usize> {
        syndrome(t, &self.phi, &self.quotient, r)
    }

    pub fn class(&self, syndrome: usize) -> Option<&CosetClass> {
        self.classes.iter().find(|c| c.syndrome == syndrome)
    }

    pub fn zero_syndrome(&self) -> usize {
        self.quotient.zero_class
    }

    pub fn all_leaders_unique(&self) -> bool {
        self.classes.iter().all(|c| c.unique_leader)
    }

    pub fn to_json(&self, t: &Tgs) -> Value {
        json!({
            "n": self.n,
            "phi": self.phi.to_json(t),
            "classes": self.classes.iter().map(|c| json!({
                "syndrome": self.quotient.class_label(c.syndrome),
                "size": c.members.len(),
                "leader_weight": c.leader_weight,
                "leaders": c.leaders.iter().map(|w| w.labels(t)).collect::<Vec<_>>(),
                "chosen_leader": c.chosen_leader.labels(t),
                "unique_leader": c.unique_leader,
            })).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecodeStatus {
    /// Zero syndrome; the word is returned unchanged.
    Clean,
    /// A leader was removed and the result is a codeword.
    Corrected,
    /// A leader was removed and the result is not a codeword.
    FailedNotCodeword,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeResult {
    pub output: Word,
    pub status: DecodeStatus,
    /// The syndrome class had more than one minimum-weight member.
    pub ambiguous_leader: bool,
    pub applied_leader: Option<Word>,
    pub syndrome: usize,
}

impl DecodeResult {
    pub fn to_json(&self, t: &Tgs, table: &CosetTable) -> Value {
        json!({
            "output": self.output.labels(t),
            "status": self.status,
            "ambiguous_leader": self.ambiguous_leader,
            "applied_leader": self.applied_leader.as_ref().map(|w| w.labels(t)),
            "syndrome": table.quotient.class_label(self.syndrome),
        })
    }
}

/// Zero syndrome: return `r`. Otherwise return `r ⊖ e` for the chosen leader
/// `e` of the syndrome class.
pub fn decode(t: &Tgs, table: &CosetTable, code: &Code, r: &Word) -> Result<DecodeResult> {
    if r.len() != table.n || code.n != table.n {
        return Err(TgsError::Usage(
            "word, code and table lengths differ".into(),
        ));
    }
    let s = table.syndrome(t, r)?;
    if s == table.zero_syndrome() {
        return Ok(DecodeResult {
            output: r.clone(),
            status: DecodeStatus::Clean,
            ambiguous_leader: false,
            applied_leader: None,
            syndrome: s,
        });
    }
    let class = table
        .class(s)
        .expect("every syndrome of a word has a class");
    let output = ominus_unchecked(t, r, &class.chosen_leader);
    let status = if code.contains(&output) {
        DecodeStatus::Corrected
    } else {
        DecodeStatus::FailedNotCodeword
    };
    Ok(DecodeResult {
        output,
        status,
        ambiguous_leader: !class.unique_leader,
        applied_leader: Some(class.chosen_leader.clone()),
        syndrome: s,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RadiusReport {
    /// `⌊(d−1)/2⌋` from the code's minimum distance.
    pub radius: Option<usize>,
    pub d: Option<usize>,
    /// Minimum weight of a nonzero scalar of the ideal.
    pub literal_mu: Option<usize>,
    /// `⌊(μ−1)/2⌋` from that scalar weight.
    pub literal_radius: Option<usize>,
}

pub fn decoding_radius(params: &CodeParams) -> RadiusReport {
    let half = |x: usize| x.saturating_sub(1) / 2;
    RadiusReport {
        radius: params.d.map(half),
        d: params.d,
        literal_mu: params.literal_mu,
        literal_radius: params.literal_mu.map(half),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nearest {
    pub word: Word,
    pub distance: usize,
    pub unique: bool,
}

/// Brute force over all members by Hamming distance; ties go to the
/// lexicographically least member.
pub fn nearest_codeword(code: &Code, r: &Word) -> Result<Nearest> {
    if r.len() != code.n {
        return Err(TgsError::Usage(
            "word length differs from code length".into(),
        ));
    }
    let mut best: Option<(usize, &Word)> = None;
    let mut ties = 0;
    for c in &code.members {
        let d = hamming_unchecked(c, r);
        match best {
            Some((bd, _)) if d > bd => {}
            Some((bd, _)) if d == bd => ties += 1,
            _ => {
                best = Some((d, c));
                ties = 1;
            }
        }
    }
    let (distance, word) = best.ok_or_else(|| TgsError::Usage("code is empty".into()))?;
    Ok(Nearest {
        word: word.clone(),
        distance,
        unique: ties == 1,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Layer {
    pub syndrome: String,
    /// Longest chain from the zero class in the induced order.
    pub height: usize,
    pub size: usize,
    pub leader_weight: usize,
}

/// Syndrome classes sorted by their height in the quotient order. Purely
/// descriptive.
pub fn stratification(table: &CosetTable) -> Vec<Layer> {
    let q = &table.quotient;
    let k = q.len();
    let leq = |a: usize, b: usize| q.plus(a, b) == b;
    let mut height = vec![0usize; k];
    // Longest-path relaxation; k rounds suffice on an acyclic order.
    for _ in 0..k {
        for a in 0..k {
            for b in 0..k {
                if a != b && leq(a, b) && !leq(b, a) {
                    height[b] = height[b].max(height[a] + 1);
                }
            }
        }
    }
    let mut layers: Vec<Layer> = table
        .classes
        .iter()
        .map(|c| Layer {
            syndrome: q.class_label(c.syndrome).to_string(),
            height: height[c.syndrome],
            size: c.members.len(),
            leader_weight: c.leader_weight,
        })
        .collect();
    layers.sort_by_key(|l| l.height);
    layers
}

#[derive(Clone, Copy, Debug)]
pub enum Decoder<'a> {
    Syndrome(&'a CosetTable),
    Nearest,
}

impl Decoder<'_> {
    pub fn name(&self) -> &'static str {
        match self {
            Decoder::Syndrome(_) => "syndrome",
            Decoder::Nearest => "nearest",
        }
    }

    fn run(&self, t: &Tgs, code: &Code, r: &Word) -> Result<Word> {
        match self {
            Decoder::Syndrome(table) => Ok(decode(t, table, code, r)?.output),
            Decoder::Nearest => Ok(nearest_codeword(code, r)?.word),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimMode {
    Exhaustive,
    Sampled { trials: u64, seed: Option<u64> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationReport {
    pub decoder: String,
    pub w_max: usize,
    pub mode: String,
    pub trials: u64,
    pub successes: u64,
    pub rate: f64,
    pub seed: Option<u64>,
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Sends `c ⊕ e` through the decoder for codewords `c` and errors `e` of
/// weight at most `w_max`; success means the decoder returns `c`.
///
/// Exhaustive mode covers every pair. Sampled mode draws `c` uniformly and
/// `e` uniformly from the same error set.
pub fn simulate_channel(
    t: &Tgs,
    code: &Code,
    decoder: Decoder<'_>,
    w_max: usize,
    mode: SimMode,
    bound: u128,
) -> Result<SimulationReport> {
    if code.is_empty() {
        return Err(TgsError::Usage("cannot simulate an empty code".into()));
    }
    let n = code.n;
    let (mut trials, mut successes) = (0u64, 0u64);
    let mut check = |c: &Word, e: &Word| -> Result<()> {
        let r = word_plus(t, c, e);
        trials += 1;
        if decoder.run(t, code, &r)? == *c {
            successes += 1;
        }
        Ok(())
    };
    let (mode_name, seed) = match mode {
        SimMode::Exhaustive => {
            check_word_bound("error space", t.size(), n, bound)?;
            let errors: Vec<Word> = words_over(t.carrier(), n)
                .filter(|e| tgs_weight(t, e) <= w_max)
                .collect();
            let pairs = code.len() as u128 * errors.len() as u128;
            if pairs > bound {
                return Err(TgsError::BoundExceeded {
                    what: "simulation pairs".into(),
                    size: pairs,
                    bound,
                });
            }
            for c in &code.members {
                for e in &errors {
                    check(c, e)?;
                }
            }
            ("exhaustive", None)
        }
        SimMode::Sampled {
            trials: count,
            seed,
        } => {
            let seed = seed.ok_or(TgsError::MissingSeed)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let nonzero: Vec<_> = t.elements().filter(|&x| x != t.zero()).collect();
            let w_top = w_max.min(n);
            let per_weight: Vec<u64> = (0..=w_top)
                .map(|w| {
                    binomial(n as u64, w as u64)
                        .saturating_mul((nonzero.len() as u64).saturating_pow(w as u32))
                })
                .collect();
            let total: u64 = per_weight.iter().fold(0u64, |a, &b| a.saturating_add(b));
            for _ in 0..count {
                let c = &code.members[rng.random_range(0..code.len())];
                let mut pick = rng.random_range(0..total);
                let mut w = 0;
                while pick >= per_weight[w] {
                    pick -= per_weight[w];
                    w += 1;
                }
                let mut e = Word::zero(t, n);
                for i in sample(&mut rng, n, w).into_iter() {
                    e.0[i] = nonzero[rng.random_range(0..nonzero.len())];
                }
                check(c, &e)?;
            }
            ("sampled", Some(seed))
        }
    };
    Ok(SimulationReport {
        decoder: decoder.name().into(),
        w_max,
        mode: mode_name.into(),
        trials,
        successes,
        rate: if trials == 0 {
            1.0
        } else {
            successes as f64 / trials as f64
        },
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{
        build_phi, code_params, generated_code, ideal_power_code, DEFAULT_WORD_BOUND,
    };
    use crate::fixtures;
    use crate::ideal::{IdealMode, KIdeal};
    use crate::quotient::build_quotient;

    struct Setup {
        t: Tgs,
        code: Code,
        table: CosetTable,
    }

    fn m3_power(n: usize) -> Setup {
        let t = fixtures::m3();
        let i = KIdeal::new(&t, t.set_of(&["0", "a"]).unwrap(), IdealMode::PlusClosed).unwrap();
        let one = t.elem("1").unwrap();
        let phi = build_phi(vec![one; n], vec![one; n]).unwrap();
        let q = build_quotient(&t, &i);
        let code = ideal_power_code(&t, &i, n, DEFAULT_WORD_BOUND).unwrap();
        let table = build_coset_table(&t, &phi, &q, n, DEFAULT_WORD_BOUND).unwrap();
        Setup { t, code, table }
    }

    fn w(t: &Tgs, s: &str) -> Word {
        Word::parse(t, s).unwrap()
    }

    #[test]
    fn syndromes() {
        let s = m3_power(3);
        let t = &s.t;
        assert_eq!(
            s.table.syndrome(t, &w(t, "a,0,a")).unwrap(),
            s.table.zero_syndrome()
        );
        assert_eq!(
            s.table.syndrome(t, &Word::zero(t, 3)).unwrap(),
            s.table.zero_syndrome()
        );
        let one = s.table.syndrome(t, &w(t, "a,0,1")).unwrap();
        assert_eq!(s.table.quotient.class_label(one), "1+I");
    }

    #[test]
    fn coset_table_n3() {
        let s = m3_power(3);
        let t = &s.t;
        assert_eq!(s.table.classes.len(), 2);
        let zero = s.table.class(s.table.zero_syndrome()).unwrap();
        assert_eq!(zero.members, s.code.members);
        assert_eq!(zero.chosen_leader, Word::zero(t, 3));
        let other = &s.table.classes[1];
        assert_eq!(other.members.len(), 19);
        assert_eq!(
            other.leaders,
            vec![w(t, "0,0,1"), w(t, "0,1,0"), w(t, "1,0,0")]
        );
        assert!(!other.unique_leader);
    }

    #[test]
    fn coset_table_n1() {
        let s = m3_power(1);
        let t = &s.t;
        let sets: Vec<Vec<Word>> = s.table.classes.iter().map(|c| c.members.clone()).collect();
        assert_eq!(sets, vec![vec![w(t, "0"), w(t, "a")], vec![w(t, "1")]]);
        assert!(s.table.all_leaders_unique());
    }

    #[test]
    fn trivial_map_gives_one_class() {
        let t = fixtures::m3();
        let i = KIdeal::zero(&t, IdealMode::PlusClosed).unwrap();
        let phi = build_phi(vec![t.zero(); 2], vec![t.zero(); 2]).unwrap();
        let table =
            build_coset_table(&t, &phi, &build_quotient(&t, &i), 2, DEFAULT_WORD_BOUND).unwrap();
        assert_eq!(table.classes.len(), 1);
        assert_eq!(table.classes[0].members.len(), 9);
    }

    #[test]
    fn decode_examples() {
        let s = m3_power(3);
        let t = &s.t;
        let r = decode(t, &s.table, &s.code, &w(t, "a,0,1")).unwrap();
        assert_eq!(r.output, w(t, "a,0,0"));
        assert_eq!(r.status, DecodeStatus::Corrected);
        assert!(r.ambiguous_leader);
        assert_eq!(r.applied_leader, Some(w(t, "0,0,1")));

        for c in &s.code.members {
            let r = decode(t, &s.table, &s.code, c).unwrap();
            assert_eq!((r.status, &r.output), (DecodeStatus::Clean, c));
        }

        let r = decode(t, &s.table, &s.code, &w(t, "1,1,0")).unwrap();
        assert_eq!(r.output, w(t, "1,1,0"));
        assert_eq!(r.status, DecodeStatus::FailedNotCodeword);
    }

    #[test]
    fn radius_examples() {
        let s = m3_power(3);
        let r = decoding_radius(&code_params(&s.t, &s.code));
        assert_eq!(
            (r.d, r.radius, r.literal_radius),
            (Some(1), Some(0), Some(0))
        );

        let t = &s.t;
        let rep = generated_code(t, &[w(t, "0,0,0"), w(t, "a,a,a")], DEFAULT_WORD_BOUND).unwrap();
        let r = decoding_radius(&code_params(t, &rep));
        assert_eq!((r.d, r.radius), (Some(3), Some(1)));

        let single = generated_code(t, &[w(t, "0,0,0")], DEFAULT_WORD_BOUND).unwrap();
        assert_eq!(decoding_radius(&code_params(t, &single)).radius, None);
    }

    #[test]
    fn nearest_examples() {
        let s = m3_power(3);
        let t = &s.t;
        let rep = generated_code(t, &[w(t, "0,0,0"), w(t, "a,a,a")], DEFAULT_WORD_BOUND).unwrap();
        let n = nearest_codeword(&rep, &w(t, "a,0,a")).unwrap();
        assert_eq!((n.word, n.distance, n.unique), (w(t, "a,a,a"), 1, true));
        let n = nearest_codeword(&rep, &w(t, "a,a,a")).unwrap();
        assert_eq!((n.distance, n.unique), (0, true));
        // every member of {0,a}³ is at distance 3 from (1,1,1)
        let n = nearest_codeword(&s.code, &w(t, "1,1,1")).unwrap();
        assert_eq!((n.word, n.distance, n.unique), (Word::zero(t, 3), 3, false));
    }

    #[test]
    fn simulation_without_errors_always_succeeds() {
        let s = m3_power(3);
        for d in [Decoder::Syndrome(&s.table), Decoder::Nearest] {
            let r = simulate_channel(&s.t, &s.code, d, 0, SimMode::Exhaustive, DEFAULT_WORD_BOUND)
                .unwrap();
            assert_eq!(r.rate, 1.0);
            assert_eq!(r.trials, 8);
        }
    }

    #[test]
    fn sampled_mode_needs_a_seed_and_is_reproducible() {
        let s = m3_power(3);
        let d = Decoder::Syndrome(&s.table);
        let err = simulate_channel(
            &s.t,
            &s.code,
            d,
            1,
            SimMode::Sampled {
                trials: 10,
                seed: None,
            },
            DEFAULT_WORD_BOUND,
        );
        assert!(matches!(err, Err(TgsError::MissingSeed)));
        let mode = SimMode::Sampled {
            trials: 500,
            seed: Some(7),
        };
        let a = simulate_channel(&s.t, &s.code, d, 1, mode, DEFAULT_WORD_BOUND).unwrap();
        let b = simulate_channel(&s.t, &s.code, d, 1, mode, DEFAULT_WORD_BOUND).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.trials, 500);
        // exhaustive rate is 3/7; 500 samples land well within ±0.1 of it
        assert!((a.rate - 3.0 / 7.0).abs() < 0.1, "{}", a.rate);
    }

    #[test]
    fn stratification_orders_by_height() {
        let s = m3_power(3);
        let layers = stratification(&s.table);
        assert_eq!(
            layers.iter().map(|l| l.height).collect::<Vec<_>>(),
            vec![0, 1]
        );
        assert_eq!(layers[0].syndrome, "0+I");
        assert_eq!((layers[1].size, layers[1].leader_weight), (19, 1));
    }
}
