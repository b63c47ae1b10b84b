use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::Bounds;
use crate::error::Result;
use crate::fixtures::{CodeSpec, Construction, ResolvedCodeSpec, BUNDLE};
use crate::ideal::{enumerate_k_ideals, IdealMode};
use crate::tgs::{Tgs, TgsDocument};

use super::checks::{placeholder, skipped};
use super::search::{search_valid, SearchConfig};
use super::*;

#[derive(Clone, Debug)]
pub enum FixtureContent {
    Text(String),
    Structure(Tgs),
}

#[derive(Clone, Debug)]
pub struct FixtureEntry {
    pub id: String,
    /// Directory that relative structure paths in code specs resolve against.
    pub base: Option<PathBuf>,
    pub content: FixtureContent,
}

/// Every `*.json` in `dir` except `MANIFEST.json`, sorted by file name.
pub fn load_fixture_dir(dir: &Path) -> Result<Vec<FixtureEntry>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    paths.retain(|p| {
        p.extension().is_some_and(|e| e == "json")
            && p.file_name().is_some_and(|n| n != "MANIFEST.json")
    });
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            Ok(FixtureEntry {
                id: stem(&p),
                base: Some(dir.to_path_buf()),
                content: FixtureContent::Text(fs::read_to_string(&p)?),
            })
        })
        .collect()
}

fn stem(p: &Path) -> String {
    p.file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or_default()
        .to_string()
}

pub fn bundled_fixtures() -> Vec<FixtureEntry> {
    BUNDLE
        .iter()
        .map(|(name, text)| FixtureEntry {
            id: stem(Path::new(name)),
            base: None,
            content: FixtureContent::Text(text.to_string()),
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub bounds: Bounds,
    pub mode: IdealMode,
    /// Code lengths for the structure-level claims.
    pub lengths: Vec<usize>,
    /// Code lengths for propagation scans over ideal powers.
    pub propagation_lengths: Vec<usize>,
    pub search: Option<SearchConfig>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            bounds: Bounds::default(),
            mode: IdealMode::PlusClosed,
            lengths: vec![1, 2, 3],
            propagation_lengths: vec![1, 2],
            search: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FixtureKind {
    Structure,
    Code,
    LoadFailure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureStatus {
    pub id: String,
    pub kind: FixtureKind,
    /// Whether the structure passes its axioms; absent on load failure.
    pub valid: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchSummary {
    pub seed: u64,
    pub candidates: u64,
    pub found: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub fixtures: Vec<FixtureStatus>,
    /// Sorted by claim, then fixture; instances keep generation order.
    pub results: Vec<ClaimResult>,
    pub search: Option<SearchSummary>,
}

enum Loaded {
    Structure(Tgs),
    Code(Box<ResolvedCodeSpec>),
}

fn load(entry: &FixtureEntry, mode: IdealMode) -> Result<Loaded> {
    let text = match &entry.content {
        FixtureContent::Structure(t) => return Ok(Loaded::Structure(t.clone())),
        FixtureContent::Text(text) => text,
    };
    let value: Value = serde_json::from_str(text)?;
    if value.get("construction").is_some() {
        let spec = CodeSpec::from_json(text)?;
        return Ok(Loaded::Code(Box::new(
            spec.resolve(entry.base.as_deref(), mode)?,
        )));
    }
    let doc: TgsDocument = serde_json::from_value(value)?;
    Ok(Loaded::Structure(Tgs::from_document(&doc)?))
}

fn structure_claims(s: &Subject, opts: &SuiteOptions, out: &mut Vec<ClaimResult>) {
    const CODE_ONLY: [ClaimId; 6] = [
        ClaimId::ConstraintEquivalence,
        ClaimId::DecoderCorrectness,
        ClaimId::InteractionJoin,
        ClaimId::Span,
        ClaimId::SyndromeInvariance,
        ClaimId::LocalizedPropagation,
    ];
    if !s.is_valid() {
        out.extend(ClaimId::ALL.iter().map(|&c| placeholder(c, s, "")));
        return;
    }
    for c in &CODE_ONLY[..5] {
        out.push(placeholder(*c, s, "needs a code spec"));
    }
    out.push(verify_distributive_lattice(s));
    let ideals = match enumerate_k_ideals(&s.t, s.mode, s.bounds.carrier) {
        Ok(i) => i,
        Err(e) => {
            for c in [
                ClaimId::Dimension,
                ClaimId::MinDistance,
                ClaimId::Monotonicity,
                ClaimId::LocalizedPropagation,
            ] {
                out.push(skipped(c, s, TgsError::Usage(e.to_string())));
            }
            return;
        }
    };
    for &n in &opts.lengths {
        for i in &ideals {
            out.push(verify_dimension(s, i, n));
            out.push(verify_min_distance(s, i, n));
            for j in ideals.iter().filter(|j| i.members().is_subset(j.members())) {
                out.push(verify_monotonicity(s, i, j, n).expect("pairs are nested"));
            }
        }
    }
    for &n in &opts.propagation_lengths {
        for i in &ideals {
            match CodeSubject::ideal_power(s, i, n) {
                Ok(cs) => out.push(verify_localized_propagation(&cs)),
                Err(e) => out.push(skipped(ClaimId::LocalizedPropagation, s, e)),
            }
        }
    }
}

fn code_claims(cs: &CodeSubject, out: &mut Vec<ClaimResult>) {
    let s = &cs.subject;
    if !s.is_valid() {
        out.extend(ClaimId::ALL.iter().map(|&c| placeholder(c, s, "")));
        return;
    }
    out.push(verify_constraint_equivalence(cs));
    out.push(verify_decoder_correctness(cs));
    out.extend(verify_interaction_join(cs));
    out.push(verify_localized_propagation(cs));
    out.push(verify_span(cs));
    out.push(verify_syndrome_invariance(cs));
    out.push(placeholder(
        ClaimId::DistributiveLattice,
        s,
        "structure-level claim",
    ));
    let n = cs.spec.n();
    match (cs.spec.spec.construction, cs.spec.ideal) {
        (Construction::IdealPower, Some(i)) => {
            out.push(verify_dimension(s, &i, n));
            out.push(verify_min_distance(s, &i, n));
        }
        _ => {
            out.push(placeholder(
                ClaimId::Dimension,
                s,
                "needs an ideal power code",
            ));
            out.push(placeholder(
                ClaimId::MinDistance,
                s,
                "needs an ideal power code",
            ));
        }
    }
    // Monotonicity concerns the structure's ideals, checked at the code's length.
    match enumerate_k_ideals(&s.t, s.mode, s.bounds.carrier) {
        Ok(all) => {
            let before = out.len();
            for i in all.iter().filter(|i| !i.is_zero()) {
                for j in all.iter().filter(|j| i.members().is_subset(j.members())) {
                    out.push(verify_monotonicity(s, i, j, n).expect("pairs are nested"));
                }
            }
            if out.len() == before {
                out.push(placeholder(ClaimId::Monotonicity, s, "no nonzero ideal"));
            }
        }
        Err(e) => out.push(skipped(ClaimId::Monotonicity, s, e)),
    }
}

/// Runs every claim on every fixture. Fixtures that fail to load are listed
/// as load failures and contribute no results.
pub fn run_suite(entries: &[FixtureEntry], opts: &SuiteOptions) -> SuiteReport {
    let mut entries = entries.to_vec();
    let search = opts.search.as_ref().map(|cfg| {
        let outcome = search_valid(cfg);
        for (k, t) in outcome.found.iter().enumerate() {
            entries.push(FixtureEntry {
                id: format!("search-{}-{k:02}", cfg.seed),
                base: None,
                content: FixtureContent::Structure(t.clone()),
            });
        }
        SearchSummary {
            seed: cfg.seed,
            candidates: outcome.candidates,
            found: outcome.found.len(),
        }
    });
    let mut fixtures = Vec::new();
    let mut results = Vec::new();
    for entry in &entries {
        match load(entry, opts.mode) {
            Ok(Loaded::Structure(t)) => {
                let s = Subject::new(&entry.id, t, opts.mode, opts.bounds);
                fixtures.push(FixtureStatus {
                    id: entry.id.clone(),
                    kind: FixtureKind::Structure,
                    valid: Some(s.is_valid()),
                    error: None,
                });
                structure_claims(&s, opts, &mut results);
            }
            Ok(Loaded::Code(spec)) => {
                let cs = CodeSubject::new(&entry.id, *spec, opts.bounds);
                fixtures.push(FixtureStatus {
                    id: entry.id.clone(),
                    kind: FixtureKind::Code,
                    valid: Some(cs.subject.is_valid()),
                    error: None,
                });
                code_claims(&cs, &mut results);
            }
            Err(e) => fixtures.push(FixtureStatus {
                id: entry.id.clone(),
                kind: FixtureKind::LoadFailure,
                valid: None,
                error: Some(e.to_string()),
            }),
        }
    }
    results.sort_by(|a, b| (a.claim, &a.fixture).cmp(&(b.claim, &b.fixture)));
    let mut counters: BTreeMap<(ClaimId, String), usize> = BTreeMap::new();
    for r in &mut results {
        if r.counterexample.is_some() {
            let k = counters.entry((r.claim, r.fixture.clone())).or_default();
            r.counterexample_id = Some(format!("{}--{}--{k}", r.claim, r.fixture));
            *k += 1;
        }
    }
    SuiteReport {
        fixtures,
        results,
        search,
    }
}

impl SuiteReport {
    /// One status per claim and fixture: falsified beats hypothesis-not-met
    /// beats verified beats not-applicable.
    pub fn matrix(&self) -> BTreeMap<ClaimId, BTreeMap<String, ClaimStatus>> {
        let rank = |s: ClaimStatus| match s {
            ClaimStatus::Falsified => 3,
            ClaimStatus::HypothesisNotMet => 2,
            ClaimStatus::Verified => 1,
            ClaimStatus::NotApplicable => 0,
        };
        let mut m: BTreeMap<ClaimId, BTreeMap<String, ClaimStatus>> = BTreeMap::new();
        for r in &self.results {
            let cell = m
                .entry(r.claim)
                .or_default()
                .entry(r.fixture.clone())
                .or_insert(r.status);
            if rank(r.status) > rank(*cell) {
                *cell = r.status;
            }
        }
        m
    }

    pub fn cell(&self, claim: ClaimId, fixture: &str) -> Option<ClaimStatus> {
        self.matrix()
            .get(&claim)
            .and_then(|row| row.get(fixture).copied())
    }

    pub fn results_for<'a>(
        &'a self,
        claim: ClaimId,
        fixture: &'a str,
    ) -> impl Iterator<Item = &'a ClaimResult> + 'a {
        self.results
            .iter()
            .filter(move |r| r.claim == claim && r.fixture == fixture)
    }

    /// `(id, counterexample)` for every falsified result.
    pub fn counterexamples(&self) -> impl Iterator<Item = (&str, &Counterexample)> {
        self.results
            .iter()
            .filter_map(|r| Some((r.counterexample_id.as_deref()?, r.counterexample.as_ref()?)))
    }

    pub fn to_json(&self, timings: bool) -> Value {
        let full = self.matrix();
        let matrix: BTreeMap<&str, BTreeMap<&str, &str>> = full
            .iter()
            .map(|(c, row)| {
                (
                    c.name(),
                    row.iter().map(|(f, s)| (f.as_str(), s.name())).collect(),
                )
            })
            .collect();
        let matrix = serde_json::to_value(matrix).expect("matrix serializes");
        json!({
            "fixtures": self.fixtures,
            "search": self.search,
            "matrix": matrix,
            "results": self.results.iter().map(|r| r.to_json(timings)).collect::<Vec<_>>(),
        })
    }

    /// Fixture list, status matrix and the falsified instances.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("fixtures:\n");
        for f in &self.fixtures {
            let state = match (f.kind, f.valid) {
                (FixtureKind::LoadFailure, _) => {
                    format!("load-failure: {}", f.error.as_deref().unwrap_or(""))
                }
                (_, Some(true)) => "valid".into(),
                _ => "axioms fail".into(),
            };
            let kind = match f.kind {
                FixtureKind::Structure => "structure",
                FixtureKind::Code => "code",
                FixtureKind::LoadFailure => "-",
            };
            out.push_str(&format!("  {:<20} {:<9} {state}\n", f.id, kind));
        }
        let matrix = self.matrix();
        let ids: Vec<&str> = self
            .fixtures
            .iter()
            .filter(|f| f.kind != FixtureKind::LoadFailure)
            .map(|f| f.id.as_str())
            .collect();
        out.push_str(
            "\nmatrix (V verified, F falsified, H hypothesis not met, - not applicable):\n",
        );
        for (k, id) in ids.iter().enumerate() {
            out.push_str(&format!("  [{k}] {id}\n"));
        }
        out.push_str(&format!("  {:<24}", "claim"));
        for k in 0..ids.len() {
            out.push_str(&format!("{:>4}", format!("[{k}]")));
        }
        out.push('\n');
        for (claim, row) in &matrix {
            out.push_str(&format!("  {:<24}", claim.name()));
            for id in &ids {
                let c = row.get(*id).map_or(' ', |s| s.short());
                out.push_str(&format!("{c:>4}"));
            }
            out.push('\n');
        }
        let falsified: Vec<&ClaimResult> = self
            .results
            .iter()
            .filter(|r| r.status == ClaimStatus::Falsified)
            .collect();
        out.push_str(&format!("\nfalsified instances: {}\n", falsified.len()));
        for r in falsified {
            out.push_str(&format!(
                "  {} on {} ({}): {} [{}]\n",
                r.claim,
                r.fixture,
                r.instance,
                r.detail,
                r.counterexample_id.as_deref().unwrap_or("")
            ));
        }
        out
    }
}
