//! End-to-end acceptance checks. Each criterion prints one line and the test
//! fails at the end if any criterion failed.
//!
//! Expected values come from small oracles written here against plain
//! integers (M3 is the chain 0 < 1 < 2 with max and min), not from the
//! library under test.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;
use tgs_core::claims::{bundled_fixtures, run_suite, ClaimId, ClaimStatus, SuiteOptions};
use tgs_core::code::{code_params, ideal_power_code, DEFAULT_WORD_BOUND};
use tgs_core::fixtures;
use tgs_core::ideal::{enumerate_k_ideals, is_k_ideal, IdealViolation};
use tgs_core::quotient::build_quotient;
use tgs_core::{check_axioms, IdealMode};

fn tgs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tgs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tgs_json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = tgs(&full);
    assert!(
        out.status.success(),
        "tgs {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json output")
}

type Check = Result<String, String>;
type Criterion<'a> = (&'a str, Box<dyn Fn() -> Check>);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, format!("took {took:?}, limit {limit:?}"))
}

// Independent M3 arithmetic on indices 0 = 0, 1 = a, 2 = 1.

fn m3_words(alphabet: &[u8], n: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| alphabet.iter().map(move |&x| [w.clone(), vec![x]].concat()))
            .collect();
    }
    out
}

fn weight(w: &[u8]) -> usize {
    w.iter().filter(|&&x| x != 0).count()
}

fn add(u: &[u8], v: &[u8]) -> Vec<u8> {
    u.iter().zip(v).map(|(&x, &y)| x.max(y)).collect()
}

/// Syndrome class for A = B = (1,...,1) and I = {0,a}: the syndrome is the
/// largest coordinate, and it lands in I unless it is 1.
fn m3_class(w: &[u8]) -> u8 {
    u8::from(w.iter().copied().max().unwrap_or(0) == 2)
}

/// Lexicographically least minimum-weight word of the given class.
fn m3_leader(n: usize, class: u8) -> Vec<u8> {
    m3_words(&[0, 1, 2], n)
        .into_iter()
        .filter(|w| m3_class(w) == class)
        .min_by_key(|w| (weight(w), w.clone()))
        .unwrap()
}

fn m3_decode(r: &[u8]) -> Vec<u8> {
    let leader = m3_leader(r.len(), m3_class(r));
    r.iter()
        .zip(&leader)
        .map(|(&x, &l)| if x <= l { 0 } else { x })
        .collect()
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let p = tgs_json(&["code", "params", "--spec", "m3-power"]);
    let oracle_size = m3_words(&[0, 1], 3).len();
    let oracle_k = (oracle_size as f64).ln() / 3f64.ln();
    ensure(
        p["cardinality"].as_str() == Some(oracle_size.to_string().as_str()),
        format!("|C| = {}", p["cardinality"]),
    )?;
    let k = p["k"].as_f64().ok_or("k missing")?;
    ensure(
        (k - oracle_k).abs() < 1e-9,
        format!("k = {k}, want {oracle_k}"),
    )?;
    ensure(p["d"] == 1, format!("d = {}", p["d"]))?;
    ensure(
        p["quotient_size"] == 2,
        format!("|T/I| = {}", p["quotient_size"]),
    )?;
    let mut sizes: Vec<u64> = p["syndrome_classes"]
        .as_array()
        .ok_or("classes missing")?
        .iter()
        .filter_map(|c| c["size"].as_u64())
        .collect();
    sizes.sort_unstable();
    let mut oracle = [0u64; 2];
    for w in m3_words(&[0, 1, 2], 3) {
        oracle[m3_class(&w) as usize] += 1;
    }
    ensure(
        sizes == oracle,
        format!("class sizes {sizes:?}, want {oracle:?}"),
    )?;
    ensure(
        oracle == [8, 19],
        "oracle class sizes differ from the published 8 and 19",
    )?;
    within(Duration::from_secs(1), start)?;
    Ok(format!("|C|=8 k={k} d=1 |T/I|=2 classes {sizes:?}"))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let out = tgs(&["check", "P3"]);
    ensure(out.status.success(), "check P3 exited non-zero")?;
    let text = String::from_utf8_lossy(&out.stdout);
    ensure(
        text.contains("[a,a,1] = 1 is not ≤ [a,1,1] = a"),
        "monotonicity witness ([a,a,1], [a,1,1]) not reported",
    )?;
    let p3 = fixtures::p3();
    let ideal = p3.set_of(&["0", "a"]).map_err(|e| e.to_string())?;
    match is_k_ideal(&p3, ideal, IdealMode::Literal) {
        Err(IdealViolation::NotAbsorbing { args, value }) => {
            let got: Vec<&str> = args.iter().map(|&x| p3.label(x)).collect();
            ensure(
                got == ["a", "1", "a"] && p3.label(value) == "1",
                format!("witness {got:?} = {}", p3.label(value)),
            )?;
        }
        other => return Err(format!("is_k_ideal(P3, {{0,a}}) = {other:?}")),
    }
    within(Duration::from_secs(1), start)?;
    Ok("monotonicity witness and [a,1,a] = 1 reported".into())
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let mut checked = 0;
    for (name, t) in [
        ("M3", fixtures::m3()),
        ("M3xM3", fixtures::m3xm3()),
        ("chain2", fixtures::chain2()),
        ("diamond", fixtures::diamond()),
    ] {
        ensure(check_axioms(&t).is_valid(), format!("{name} is not valid"))?;
        for ideal in enumerate_k_ideals(&t, IdealMode::PlusClosed, 12).map_err(|e| e.to_string())? {
            let members: Vec<usize> = ideal.members().iter().map(|x| x.index()).collect();
            let zero = t.zero().index();
            for n in 1..=3usize {
                let code = ideal_power_code(&t, &ideal, n, DEFAULT_WORD_BOUND)
                    .map_err(|e| e.to_string())?;
                let params = code_params(&t, &code);
                // Oracle: every word over I, and the smallest nonzero weight among them.
                let mut words: Vec<Vec<usize>> = vec![vec![]];
                for _ in 0..n {
                    words = words
                        .into_iter()
                        .flat_map(|w| members.iter().map(move |&x| [w.clone(), vec![x]].concat()))
                        .collect();
                }
                let d = words
                    .iter()
                    .map(|w| w.iter().filter(|&&x| x != zero).count())
                    .filter(|&k| k > 0)
                    .min();
                // The lattice predicts one nonzero coordinate for any nonzero ideal.
                let predicted = if members.len() > 1 { Some(1) } else { None };
                ensure(
                    code.len() == members.len().pow(n as u32) && code.len() == words.len(),
                    format!("{name} n={n}: |I^n| = {}", code.len()),
                )?;
                ensure(
                    params.d == d && d == predicted,
                    format!("{name} n={n}: d = {:?}, oracle {d:?}", params.d),
                )?;
                checked += 1;
            }
        }
    }
    within(Duration::from_secs(10), start)?;
    Ok(format!("{checked} (fixture, ideal, n) cases agree"))
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let mut pairs = 0;
    for n in 1..=3 {
        for c in m3_words(&[0, 1], n) {
            for e in m3_words(&[0, 1, 2], n) {
                ensure(
                    m3_class(&add(&c, &e)) == m3_class(&e),
                    format!("oracle violation c={c:?} e={e:?}"),
                )?;
                pairs += 1;
            }
        }
    }
    let report = run_suite(&bundled_fixtures(), &SuiteOptions::default());
    for f in ["m3-power", "m3-power-n2", "m3-power-n1"] {
        let scanned: u64 = report
            .results_for(ClaimId::SyndromeInvariance, f)
            .map(|r| r.scan_size)
            .sum();
        ensure(
            report.cell(ClaimId::SyndromeInvariance, f) == Some(ClaimStatus::Verified),
            format!("{f} not verified"),
        )?;
        let n = if f == "m3-power" {
            3
        } else if f == "m3-power-n2" {
            2
        } else {
            1
        };
        let want = 2u64.pow(n) * 3u64.pow(n);
        ensure(
            scanned == want,
            format!("{f}: scanned {scanned} pairs, want {want}"),
        )?;
    }
    within(Duration::from_secs(5), start)?;
    Ok(format!("{pairs} pairs, zero violations"))
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let report = run_suite(&bundled_fixtures(), &SuiteOptions::default());
    let mut failures = Vec::new();
    for f in report.fixtures.iter().map(|f| f.id.as_str()) {
        for r in report.results_for(ClaimId::DecoderCorrectness, f) {
            if r.status == ClaimStatus::Falsified {
                failures.push(format!("{f}: {}", r.detail));
            }
        }
    }
    // Oracle for the unique-leader M3 fixture: n = 1, leaders 0 and 1.
    let mut oracle_failures = 0;
    for c in m3_words(&[0, 1], 1) {
        for e in m3_words(&[0, 1, 2], 1) {
            if weight(&e) <= weight(&m3_leader(1, m3_class(&e))) && m3_decode(&add(&c, &e)) != c {
                oracle_failures += 1;
            }
        }
    }
    let decoded = tgs_json(&["decode", "--code", "m3-power", "--word", "0,0,1"]);
    ensure(
        decoded["ambiguous_leader"] == true,
        "ambiguous-leader flag missing on m3-power",
    )?;
    let sim = tgs_json(&[
        "simulate",
        "--code",
        "m3-power",
        "--wmax",
        "1",
        "--mode",
        "exhaustive",
    ]);
    let (mut trials, mut ok) = (0u64, 0u64);
    for c in m3_words(&[0, 1], 3) {
        for e in m3_words(&[0, 1, 2], 3)
            .into_iter()
            .filter(|e| weight(e) <= 1)
        {
            trials += 1;
            ok += u64::from(m3_decode(&add(&c, &e)) == c);
        }
    }
    ensure(
        sim["trials"] == trials && sim["successes"] == ok,
        format!(
            "simulate {}/{}, oracle {ok}/{trials}",
            sim["successes"], sim["trials"]
        ),
    )?;
    let rate = sim["rate"].as_f64().ok_or("rate missing")?;
    ensure(
        rate < 1.0 && (rate - ok as f64 / trials as f64).abs() < 1e-12,
        format!("rate {rate}"),
    )?;
    within(Duration::from_secs(10), start)?;
    ensure(
        failures.is_empty(),
        format!(
            "unique leaders yet {} decoding failure(s), oracle agrees ({oracle_failures}): {}; m3-power flagged ambiguous, rate {ok}/{trials}",
            failures.len(),
            failures.join("; ")
        ),
    )?;
    Ok(format!(
        "zero failures; m3-power ambiguous, rate {ok}/{trials}"
    ))
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let p = tgs_json(&["code", "params", "--spec", "repetition"]);
    let code = [[0u8, 0, 0], [1, 1, 1]];
    let d = code
        .iter()
        .flat_map(|u| code.iter().map(move |v| (u, v)))
        .filter(|(u, v)| u != v)
        .map(|(u, v)| u.iter().zip(v.iter()).filter(|(x, y)| x != y).count())
        .min()
        .unwrap();
    let t = (d - 1) / 2;
    ensure(
        p["cardinality"].as_str() == Some(code.len().to_string().as_str())
            && p["d"] == d
            && p["t"] == t,
        format!("|C|={} d={} t={}", p["cardinality"], p["d"], p["t"]),
    )?;
    let sim = tgs_json(&[
        "simulate",
        "--code",
        "repetition",
        "--wmax",
        "1",
        "--decoder",
        "nearest",
    ]);
    ensure(
        sim["rate"].as_f64() == Some(1.0),
        format!("nearest-codeword rate {}", sim["rate"]),
    )?;
    within(Duration::from_secs(2), start)?;
    Ok(format!(
        "|C|=2 d={d} t={t} rate 1.0 over {} trials",
        sim["trials"]
    ))
}

fn criterion_7() -> Check {
    let start = Instant::now();
    let m3 = fixtures::m3();
    let ideal = enumerate_k_ideals(&m3, IdealMode::PlusClosed, 12)
        .map_err(|e| e.to_string())?
        .into_iter()
        .find(|i| i.members() == m3.set_of(&["0", "a"]).unwrap())
        .ok_or("{0,a} is not a k-ideal of M3")?;
    let q = build_quotient(&m3, &ideal);
    ensure(q.well_defined, "quotient is not well defined")?;
    ensure(
        q.partition.classes[q.zero_class] == ideal.members(),
        "zero class differs from {0,a}",
    )?;
    let qt = q.to_tgs().map_err(|e| e.to_string())?;
    ensure(check_axioms(&qt).is_valid(), "quotient fails its axioms")?;
    let cli = tgs_json(&["quotient", "M3", "--ideal", "0,a"]);
    ensure(
        cli["well_defined"] == true && cli["axioms_valid"] == true,
        "cli quotient disagrees",
    )?;
    within(Duration::from_secs(1), start)?;
    Ok(format!("{} classes, valid", q.len()))
}

fn criterion_8(dir: &Path) -> Check {
    let start = Instant::now();
    let out_file = dir.join("report.json");
    let cx_dir = dir.join("cx");
    let out = tgs(&[
        "verify-claims",
        "--out",
        out_file.to_str().unwrap(),
        "--counterexamples",
        cx_dir.to_str().unwrap(),
    ]);
    ensure(out.status.success(), "verify-claims failed")?;
    let report: Value =
        serde_json::from_str(&fs::read_to_string(&out_file).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
    let valid: Vec<&str> = report["fixtures"]
        .as_array()
        .ok_or("fixtures missing")?
        .iter()
        .filter(|f| f["valid"] == true)
        .filter_map(|f| f["id"].as_str())
        .collect();
    ensure(!valid.is_empty(), "no valid fixtures")?;
    for claim in ["monotonicity", "localized-propagation"] {
        for f in &valid {
            ensure(
                report["matrix"][claim][f] == "verified",
                format!("{claim} on {f}: {}", report["matrix"][claim][f]),
            )?;
        }
    }
    let mut replayed = 0;
    for entry in fs::read_dir(&cx_dir).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        if name.starts_with("interaction-join--m3-power--") {
            let r = tgs(&["verify-claims", "--replay", path.to_str().unwrap()]);
            ensure(r.status.code() == Some(0), format!("{name} did not replay"))?;
            replayed += 1;
        }
    }
    ensure(
        replayed > 0,
        "no interaction-join counterexample on m3-power",
    )?;
    within(Duration::from_secs(10), start)?;
    Ok(format!(
        "{} valid fixtures verified, {replayed} interaction-join counterexample(s) replayed",
        valid.len()
    ))
}

fn criterion_9(dir: &Path) -> Check {
    let start = Instant::now();
    let commands: Vec<Vec<&str>> = vec![
        vec!["check", "P3"],
        vec!["check", "M3xM3"],
        vec!["ideals", "diamond"],
        vec!["lattice", "M3xM3"],
        vec!["quotient", "M3", "--ideal", "0,a"],
        vec!["quotient", "M3", "--ideal", "0,a", "--relation", "rees"],
        vec!["code", "params", "--spec", "m3-power"],
        vec!["code", "export", "--spec", "repetition"],
        vec!["decode", "--code", "m3-power", "--word", "a,0,1"],
        vec!["simulate", "--code", "m3-power", "--wmax", "2"],
        vec![
            "simulate", "--code", "m3-power", "--wmax", "2", "--mode", "sampled", "--trials",
            "500", "--seed", "7",
        ],
        vec![
            "simulate",
            "--code",
            "repetition",
            "--wmax",
            "1",
            "--decoder",
            "nearest",
        ],
        vec!["fixtures"],
        vec![
            "verify-claims",
            "--search-seed",
            "3",
            "--search-candidates",
            "2000",
        ],
    ];
    let mut files = 0;
    for (i, cmd) in commands.iter().enumerate() {
        for format in ["text", "json", "csv"] {
            let mut outputs = Vec::new();
            for run in 0..2 {
                let mut args = vec!["--format", format];
                args.extend(cmd);
                let out = tgs(&args);
                let path = dir.join(format!("out-{i}-{format}-{run}"));
                fs::write(&path, &out.stdout).map_err(|e| e.to_string())?;
                outputs.push((
                    fs::read(&path).map_err(|e| e.to_string())?,
                    out.stderr,
                    out.status.code(),
                ));
            }
            ensure(
                outputs[0] == outputs[1],
                format!("{cmd:?} --format {format} differs between runs"),
            )?;
            files += 2;
        }
    }
    for run in 0..2 {
        let d = dir.join(format!("run{run}"));
        let args = [
            "verify-claims",
            "--out",
            "r.json",
            "--counterexamples",
            "cx",
        ]
        .map(String::from);
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_tgs"));
        fs::create_dir_all(&d).map_err(|e| e.to_string())?;
        ensure(
            cmd.args(&args)
                .current_dir(&d)
                .output()
                .map_err(|e| e.to_string())?
                .status
                .success(),
            "verify-claims failed",
        )?;
        let out = Command::new(env!("CARGO_BIN_EXE_tgs"))
            .args(["fixtures", "--export", "bundle"])
            .current_dir(&d)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.success(), "fixtures --export failed")?;
    }
    let listing = |root: &Path| -> Result<Vec<(String, Vec<u8>)>, String> {
        let mut all = Vec::new();
        for sub in ["", "cx", "bundle"] {
            let d = root.join(sub);
            for e in fs::read_dir(&d).map_err(|e| e.to_string())? {
                let p = e.map_err(|e| e.to_string())?.path();
                if p.is_file() {
                    all.push((
                        format!("{sub}/{}", p.file_name().unwrap().to_string_lossy()),
                        fs::read(&p).map_err(|e| e.to_string())?,
                    ));
                }
            }
        }
        all.sort();
        Ok(all)
    };
    let (a, b) = (listing(&dir.join("run0"))?, listing(&dir.join("run1"))?);
    ensure(
        a == b,
        "written report, counterexamples or bundle differ between runs",
    )?;
    files += a.len() * 2;
    within(Duration::from_secs(60), start)?;
    Ok(format!(
        "{files} output files byte-identical across paired runs"
    ))
}

#[test]
fn acceptance() {
    let tmp = tempfile::tempdir().unwrap();
    fs::create_dir_all(tmp.path().join("c8")).unwrap();
    fs::create_dir_all(tmp.path().join("c9")).unwrap();
    let criteria: Vec<Criterion> = vec![
        (
            "parameter reproduction on M3, I = {0,a}, n = 3",
            Box::new(criterion_1),
        ),
        (
            "inconsistent 3-element table detected",
            Box::new(criterion_2),
        ),
        (
            "ideal powers match the lattice prediction",
            Box::new(criterion_3),
        ),
        ("syndrome invariance", Box::new(criterion_4)),
        ("conditional decoder correctness", Box::new(criterion_5)),
        (
            "repetition code distance and nearest decoding",
            Box::new(criterion_6),
        ),
        ("quotient soundness", Box::new(criterion_7)),
        (
            "claim matrix and interaction-join counterexample",
            Box::new({
                let d = tmp.path().join("c8");
                move || criterion_8(&d)
            }),
        ),
        (
            "round-trip determinism",
            Box::new({
                let d = tmp.path().join("c9");
                move || criterion_9(&d)
            }),
        ),
    ];
    let mut failed = Vec::new();
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = check();
        let ms = start.elapsed().as_millis();
        match verdict {
            Ok(detail) => println!("criterion {}: PASS {name} ({ms} ms): {detail}", k + 1),
            Err(why) => {
                println!("criterion {}: FAIL {name} ({ms} ms): {why}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
