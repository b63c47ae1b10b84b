use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};
use tgs_core::axioms::{check_axioms_capped, is_valid};
use tgs_core::bounds::{fmt_sig12, round_sig12};
use tgs_core::claims::search::SearchConfig;
use tgs_core::claims::{
    bundled_fixtures, load_fixture_dir, run_suite, ClaimStatus, Counterexample, SuiteOptions,
};
use tgs_core::code::{code_params, CodeParams, Word};
use tgs_core::decoder::{self, decode, decoding_radius, nearest_codeword, stratification, Decoder};
use tgs_core::fixtures::{self, CodeSpec, ResolvedCodeSpec};
use tgs_core::ideal::{
    enumerate_k_ideals, is_prime, is_semiprime, minimal_nonzero_elements, PrimeVerdict,
    SemiprimeVerdict,
};
use tgs_core::quotient::{build_quotient_with, Congruence};
use tgs_core::{IdealLattice, IdealMode, KIdeal, Result, Tgs, TgsError};

use crate::{Cli, CodeCommand, Command, DecoderKind, Format, Relation, SimMode, VerifyArgs};

/// One command's result in every format it supports.
struct Output {
    json: Value,
    text: String,
    csv: Option<String>,
}

fn emit(format: Format, out: Output) -> Result<()> {
    let body = match format {
        Format::Json => serde_json::to_string_pretty(&out.json)? + "\n",
        Format::Text => out.text,
        Format::Csv => match out.csv {
            Some(csv) => csv,
            None => {
                return Err(TgsError::Usage(
                    "csv output is not available for this command".into(),
                ))
            }
        },
    };
    let mut stdout = std::io::stdout().lock();
    match stdout
        .write_all(body.as_bytes())
        .and_then(|()| stdout.flush())
    {
        // A closed pipe (`tgs ... | head`) is not an error worth reporting.
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn mode(cli: &Cli) -> IdealMode {
    if cli.global.literal_ideals {
        IdealMode::Literal
    } else {
        IdealMode::PlusClosed
    }
}

/// A path on disk, or the name of a bundled document with or without the
/// `.json` suffix.
fn read_source(arg: &str) -> Result<(String, Option<&Path>)> {
    let p = Path::new(arg);
    if p.is_file() {
        return Ok((fs::read_to_string(p)?, p.parent()));
    }
    let name = if arg.ends_with(".json") {
        arg.to_string()
    } else {
        format!("{arg}.json")
    };
    match fixtures::bundled(&name) {
        Some(text) => Ok((text.to_string(), None)),
        None => Err(TgsError::Usage(format!(
            "`{arg}` is neither a file nor a bundled fixture"
        ))),
    }
}

fn load_tgs(arg: &str) -> Result<Tgs> {
    Tgs::from_json(&read_source(arg)?.0)
}

fn load_spec(arg: &str, mode: IdealMode) -> Result<ResolvedCodeSpec> {
    let (text, base) = read_source(arg)?;
    CodeSpec::from_json(&text)?.resolve(base, mode)
}

fn gate(cli: &Cli, t: &Tgs) -> Result<()> {
    if cli.global.force || is_valid(t) {
        return Ok(());
    }
    let failed: Vec<&str> = check_axioms_capped(t, 0)
        .failed()
        .iter()
        .map(|a| a.name())
        .collect();
    Err(TgsError::InvalidStructure(format!(
        "failing: {}",
        failed.join(", ")
    )))
}

fn set_text(t: &Tgs, s: tgs_core::ElemSet) -> String {
    format!("{{{}}}", t.set_labels(s).join(","))
}

/// In-memory CSV with a header row.
struct Csv(csv::Writer<Vec<u8>>);

impl Csv {
    fn new<T: AsRef<[u8]>>(header: impl IntoIterator<Item = T>) -> Csv {
        let mut csv = Csv(csv::Writer::from_writer(Vec::new()));
        csv.row(header);
        csv
    }

    fn row<T: AsRef<[u8]>>(&mut self, fields: impl IntoIterator<Item = T>) {
        self.0.write_record(fields).expect("writing to memory");
    }

    fn finish(self) -> String {
        let bytes = self.0.into_inner().expect("writing to memory");
        String::from_utf8(bytes).expect("fields are utf-8")
    }
}

pub fn run(cli: &Cli) -> Result<u8> {
    let format = cli.global.format;
    let out = match &cli.command {
        Command::Check { tgs } => check(cli, tgs)?,
        Command::Ideals { tgs } => ideals(cli, tgs)?,
        Command::Lattice { tgs } => lattice(cli, tgs)?,
        Command::Quotient {
            tgs,
            ideal,
            relation,
        } => quotient(cli, tgs, ideal, *relation)?,
        Command::Code(CodeCommand::Params { spec }) => code_params_cmd(cli, spec)?,
        Command::Code(CodeCommand::Export { spec }) => code_export(cli, spec)?,
        Command::Decode { code, word } => decode_cmd(cli, code, word)?,
        Command::Simulate {
            code,
            wmax,
            mode,
            decoder,
            trials,
            seed,
        } => simulate(cli, code, *wmax, *mode, *decoder, *trials, *seed)?,
        Command::VerifyClaims(args) => {
            if let Some(path) = &args.replay {
                let (out, reproduced) = replay(path)?;
                emit(format, out)?;
                return Ok(if reproduced { 0 } else { 1 });
            }
            verify_claims(cli, args)?
        }
        Command::Fixtures { export } => fixtures_cmd(export.as_deref())?,
    };
    emit(format, out)?;
    Ok(0)
}

fn check(cli: &Cli, arg: &str) -> Result<Output> {
    let t = load_tgs(arg)?;
    let report = check_axioms_capped(&t, cli.global.bounds.witnesses);
    let mut csv = Csv::new(["axiom", "holds", "violations", "tuples_checked"]);
    for s in &report.statuses {
        csv.row([
            s.axiom.name().to_string(),
            s.holds.to_string(),
            s.violations.to_string(),
            s.tuples_checked.to_string(),
        ]);
    }
    Ok(Output {
        json: report.to_json(&t),
        text: report.to_text(&t),
        csv: Some(csv.finish()),
    })
}

fn prime_text(t: &Tgs, v: PrimeVerdict) -> (String, Value) {
    match v {
        PrimeVerdict::Holds => ("yes".into(), json!(true)),
        PrimeVerdict::NotApplicable => ("n/a".into(), Value::Null),
        PrimeVerdict::Fails { args, value } => {
            let w = format!(
                "[{},{},{}] = {}",
                t.label(args[0]),
                t.label(args[1]),
                t.label(args[2]),
                t.label(value)
            );
            (format!("no, {w}"), json!({ "holds": false, "witness": w }))
        }
    }
}

fn semiprime_text(t: &Tgs, v: SemiprimeVerdict) -> (String, Value) {
    match v {
        SemiprimeVerdict::Holds => ("yes".into(), json!(true)),
        SemiprimeVerdict::NotApplicable => ("n/a".into(), Value::Null),
        SemiprimeVerdict::Fails { x, value } => {
            let w = format!("[{0},{0},{0}] = {1}", t.label(x), t.label(value));
            (format!("no, {w}"), json!({ "holds": false, "witness": w }))
        }
    }
}

fn ideals(cli: &Cli, arg: &str) -> Result<Output> {
    let t = load_tgs(arg)?;
    gate(cli, &t)?;
    let all = enumerate_k_ideals(&t, mode(cli), cli.global.bounds.carrier)?;
    let mut json_rows = Vec::new();
    let mut text = format!("{} k-ideals\n", all.len());
    let mut csv = Csv::new(["index", "members", "prime", "semiprime", "minimal_nonzero"]);
    for (k, i) in all.iter().enumerate() {
        let (p, pj) = prime_text(&t, is_prime(&t, i));
        let (s, sj) = semiprime_text(&t, is_semiprime(&t, i));
        let minimal = minimal_nonzero_elements(&t, i.members());
        text.push_str(&format!(
            "[{k}] {:<16} prime: {p}; semiprime: {s}; minimal nonzero: {}\n",
            set_text(&t, i.members()),
            set_text(&t, minimal)
        ));
        csv.row([
            k.to_string(),
            set_text(&t, i.members()),
            p.clone(),
            s.clone(),
            set_text(&t, minimal),
        ]);
        json_rows.push(json!({
            "members": t.set_labels(i.members()),
            "prime": pj,
            "semiprime": sj,
            "minimal_nonzero": t.set_labels(minimal),
        }));
    }
    Ok(Output {
        json: json!({ "mode": mode(cli), "ideals": json_rows }),
        text,
        csv: Some(csv.finish()),
    })
}

fn lattice(cli: &Cli, arg: &str) -> Result<Output> {
    let t = load_tgs(arg)?;
    gate(cli, &t)?;
    let l = IdealLattice::build(&t, mode(cli), cli.global.bounds.carrier)?;
    let mut csv = Csv::new(["lower", "upper"]);
    for &(lo, hi) in &l.covers {
        csv.row([lo.to_string(), hi.to_string()]);
    }
    Ok(Output {
        json: l.to_json(&t),
        text: l.to_ascii(&t),
        csv: Some(csv.finish()),
    })
}

fn parse_ideal(cli: &Cli, t: &Tgs, labels: &str) -> Result<KIdeal> {
    let labels: Vec<&str> = labels
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    let set = t.set_of(&labels)?;
    KIdeal::new(t, set, mode(cli))
        .map_err(|v| TgsError::Usage(format!("not a k-ideal: {}", v.render(t))))
}

fn quotient(cli: &Cli, arg: &str, ideal: &str, relation: Relation) -> Result<Output> {
    let t = load_tgs(arg)?;
    gate(cli, &t)?;
    let i = parse_ideal(cli, &t, ideal)?;
    let relation = match relation {
        Relation::Bourne => Congruence::Bourne,
        Relation::Rees => Congruence::Rees,
    };
    let q = build_quotient_with(&t, &i, relation);
    let qt = q.to_tgs()?;
    let q_valid = is_valid(&qt);
    let mut json = q.to_json(&t);
    json["axioms_valid"] = json!(q_valid);
    json["projection_is_morphism"] = json!(q.projection_is_morphism(&t));
    let mut text = format!(
        "{} classes, zero class {}\n",
        q.len(),
        q.class_label(q.zero_class)
    );
    let mut csv = Csv::new(["class", "members"]);
    for (k, c) in q.partition.classes.iter().enumerate() {
        text.push_str(&format!("  {:<8} {}\n", q.class_label(k), set_text(&t, *c)));
        csv.row([q.class_label(k).to_string(), set_text(&t, *c)]);
    }
    text.push_str(&format!("well defined: {}\n", q.well_defined));
    if let Some(c) = &q.clash {
        let labels =
            |xs: &[tgs_core::Elem]| xs.iter().map(|&x| t.label(x)).collect::<Vec<_>>().join(",");
        text.push_str(&format!(
            "  clash in {}: inputs ({}) give {}, representatives ({}) give {}\n",
            c.operation,
            labels(&c.inputs),
            q.class_label(c.class_from_inputs),
            labels(&c.representatives),
            q.class_label(c.class_from_representatives)
        ));
    }
    text.push_str(&format!(
        "quotient axioms: {}\n",
        if q_valid { "pass" } else { "FAIL" }
    ));
    Ok(Output {
        json,
        text,
        csv: Some(csv.finish()),
    })
}

fn num(x: f64) -> Value {
    json!(round_sig12(x))
}

fn params_json(r: &ResolvedCodeSpec, p: &CodeParams) -> Value {
    let radius = decoding_radius(p);
    json!({
        "construction": r.spec.construction.name(),
        "n": p.n,
        "tgs_size": r.t.size(),
        "ideal_size": r.ideal.map(|i| i.len()),
        "cardinality": p.cardinality.to_string(),
        "k": num(p.k),
        "d": p.d,
        "distance_kind": p.distance_kind,
        "t": radius.radius,
        "literal_mu": radius.literal_mu,
        "literal_t": radius.literal_radius,
        "dimension_formula_holds": p.dimension_formula_holds,
        "lattice_prediction": p.lattice_prediction,
    })
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map_or_else(|| "-".to_string(), |v| v.to_string())
}

fn code_params_cmd(cli: &Cli, spec: &str) -> Result<Output> {
    let r = load_spec(spec, mode(cli))?;
    gate(cli, &r.t)?;
    let bound = cli.global.bounds.words;
    let code = r.build_code(bound)?;
    let p = code_params(&r.t, &code);
    let radius = decoding_radius(&p);
    let mut json = params_json(&r, &p);
    let mut text = String::new();
    let mut line = |k: &str, v: String| text.push_str(&format!("{k:<20} {v}\n"));
    line("construction", r.spec.construction.name().into());
    line("n", p.n.to_string());
    line("|T|", r.t.size().to_string());
    line("|I|", opt(r.ideal.map(|i| i.len())));
    line("|C|", p.cardinality.to_string());
    line("k", fmt_sig12(p.k));
    line("d", opt(p.d));
    line("t", opt(radius.radius));
    line(
        "literal mu",
        format!(
            "{} (t = {})",
            opt(radius.literal_mu),
            opt(radius.literal_radius)
        ),
    );
    if let Some(h) = p.dimension_formula_holds {
        line("|C| = |I|^n", h.to_string());
    }
    if let Some(lp) = p.lattice_prediction {
        line("lattice prediction", lp.to_string());
    }
    if let Some(table) = r.coset_table(bound)? {
        line("|T/I|", table.quotient.len().to_string());
        line(
            "syndrome classes",
            table
                .classes
                .iter()
                .map(|c| {
                    format!(
                        "{}:{}",
                        table.quotient.class_label(c.syndrome),
                        c.members.len()
                    )
                })
                .collect::<Vec<_>>()
                .join(" "),
        );
        line("unique leaders", table.all_leaders_unique().to_string());
        json["quotient_size"] = json!(table.quotient.len());
        json["syndrome_classes"] = json!(table
            .classes
            .iter()
            .map(|c| json!({
                "syndrome": table.quotient.class_label(c.syndrome),
                "size": c.members.len(),
                "leader_weight": c.leader_weight,
                "leaders": c.leaders.iter().map(|w| w.render(&r.t)).collect::<Vec<_>>(),
                "unique_leader": c.unique_leader,
            }))
            .collect::<Vec<_>>());
        json["stratification"] = json!(stratification(&table));
    }
    let mut csv = Csv::new(["construction", "n", "|T|", "|I|", "|C|", "k", "d", "t"]);
    csv.row([
        r.spec.construction.name().to_string(),
        p.n.to_string(),
        r.t.size().to_string(),
        r.ideal.map(|i| i.len().to_string()).unwrap_or_default(),
        p.cardinality.to_string(),
        fmt_sig12(p.k),
        p.d.map(|d| d.to_string()).unwrap_or_default(),
        radius.radius.map(|d| d.to_string()).unwrap_or_default(),
    ]);
    Ok(Output {
        json,
        text,
        csv: Some(csv.finish()),
    })
}

fn code_export(cli: &Cli, spec: &str) -> Result<Output> {
    let r = load_spec(spec, mode(cli))?;
    gate(cli, &r.t)?;
    let code = r.build_code(cli.global.bounds.words)?;
    let p = code_params(&r.t, &code);
    let mut json = serde_json::to_value(r.export(&code))?;
    json["params"] = params_json(&r, &p);
    let mut text = format!("{} members of length {}\n", code.len(), code.n);
    let mut csv = Csv::new((1..=code.n).map(|i| format!("c{i}")));
    for w in &code.members {
        text.push_str(&format!("{}\n", w.render(&r.t)));
        csv.row(w.labels(&r.t));
    }
    Ok(Output {
        json,
        text,
        csv: Some(csv.finish()),
    })
}

fn decode_cmd(cli: &Cli, spec: &str, word: &str) -> Result<Output> {
    let r = load_spec(spec, mode(cli))?;
    gate(cli, &r.t)?;
    let t = &r.t;
    let bound = cli.global.bounds.words;
    let code = r.build_code(bound)?;
    let table = r
        .coset_table(bound)?
        .ok_or_else(|| TgsError::Usage("code spec has no syndrome map (A, B)".into()))?;
    let w = Word::parse(t, word)?;
    let res = decode(t, &table, &code, &w)?;
    let near = nearest_codeword(&code, &w)?;
    let mut json = res.to_json(t, &table);
    json["received"] = json!(w.labels(t));
    json["nearest"] =
        json!({ "word": near.word.labels(t), "distance": near.distance, "unique": near.unique });
    let status = serde_json::to_value(res.status)?
        .as_str()
        .unwrap_or_default()
        .to_string();
    let leader = res
        .applied_leader
        .as_ref()
        .map_or("-".to_string(), |l| l.render(t));
    let mut text = String::new();
    text.push_str(&format!("received  {}\n", w.render(t)));
    text.push_str(&format!(
        "syndrome  {}\n",
        table.quotient.class_label(res.syndrome)
    ));
    text.push_str(&format!(
        "leader    {leader}{}\n",
        if res.ambiguous_leader {
            " (ambiguous leader)"
        } else {
            ""
        }
    ));
    text.push_str(&format!("output    {}\n", res.output.render(t)));
    text.push_str(&format!("status    {status}\n"));
    text.push_str(&format!(
        "nearest   {} at distance {}{}\n",
        near.word.render(t),
        near.distance,
        if near.unique { "" } else { " (tie)" }
    ));
    let mut csv = Csv::new([
        "received",
        "syndrome",
        "leader",
        "output",
        "status",
        "ambiguous_leader",
    ]);
    csv.row([
        w.render(t),
        table.quotient.class_label(res.syndrome).to_string(),
        leader.clone(),
        res.output.render(t),
        status.to_string(),
        res.ambiguous_leader.to_string(),
    ]);
    Ok(Output {
        json,
        text,
        csv: Some(csv.finish()),
    })
}

fn simulate(
    cli: &Cli,
    spec: &str,
    wmax: usize,
    mode_arg: SimMode,
    kind: DecoderKind,
    trials: u64,
    seed: Option<u64>,
) -> Result<Output> {
    let r = load_spec(spec, mode(cli))?;
    gate(cli, &r.t)?;
    let bound = cli.global.bounds.words;
    let code = r.build_code(bound)?;
    let table = match kind {
        DecoderKind::Syndrome => Some(
            r.coset_table(bound)?
                .ok_or_else(|| TgsError::Usage("code spec has no syndrome map (A, B)".into()))?,
        ),
        DecoderKind::Nearest => None,
    };
    let dec = match &table {
        Some(table) => Decoder::Syndrome(table),
        None => Decoder::Nearest,
    };
    let sim_mode = match mode_arg {
        SimMode::Exhaustive => decoder::SimMode::Exhaustive,
        SimMode::Sampled => decoder::SimMode::Sampled { trials, seed },
    };
    let rep = decoder::simulate_channel(&r.t, &code, dec, wmax, sim_mode, bound)?;
    let mut json = serde_json::to_value(&rep)?;
    json["rate"] = num(rep.rate);
    let seed_text = rep.seed.map(|s| s.to_string()).unwrap_or_default();
    let text = format!(
        "decoder {}, w_max {}, {} mode: {}/{} successes, rate {}{}\n",
        rep.decoder,
        rep.w_max,
        rep.mode,
        rep.successes,
        rep.trials,
        fmt_sig12(rep.rate),
        rep.seed.map(|s| format!(", seed {s}")).unwrap_or_default()
    );
    let mut csv = Csv::new([
        "decoder",
        "w_max",
        "mode",
        "trials",
        "successes",
        "rate",
        "seed",
    ]);
    csv.row([
        rep.decoder.to_string(),
        rep.w_max.to_string(),
        rep.mode.to_string(),
        rep.trials.to_string(),
        rep.successes.to_string(),
        fmt_sig12(rep.rate),
        seed_text,
    ]);
    Ok(Output {
        json,
        text,
        csv: Some(csv.finish()),
    })
}

fn verify_claims(cli: &Cli, args: &VerifyArgs) -> Result<Output> {
    let entries = match &args.fixtures {
        Some(dir) => load_fixture_dir(dir)?,
        None => bundled_fixtures(),
    };
    let opts = SuiteOptions {
        bounds: cli.global.bounds,
        mode: mode(cli),
        search: args.search_seed.map(|seed| SearchConfig {
            candidates: args.search_candidates,
            ..SearchConfig::new(seed)
        }),
        ..SuiteOptions::default()
    };
    let report = run_suite(&entries, &opts);
    let json = report.to_json(args.timings);
    if let Some(path) = &args.out {
        fs::write(path, serde_json::to_string_pretty(&json)? + "\n")?;
    }
    if let Some(dir) = &args.counterexamples {
        fs::create_dir_all(dir)?;
        for (id, cx) in report.counterexamples() {
            fs::write(dir.join(format!("{id}.json")), cx.to_json() + "\n")?;
        }
    }
    let mut csv = Csv::new([
        "claim",
        "fixture",
        "instance",
        "status",
        "scan_size",
        "counterexample",
    ]);
    for r in &report.results {
        csv.row([
            r.claim.to_string(),
            r.fixture.clone(),
            r.instance.clone(),
            r.status.name().to_string(),
            r.scan_size.to_string(),
            r.counterexample_id.clone().unwrap_or_default(),
        ]);
    }
    let falsified = report
        .results
        .iter()
        .filter(|r| r.status == ClaimStatus::Falsified)
        .count();
    let mut text = report.to_text();
    text.push_str(&format!(
        "{} results, {falsified} falsified\n",
        report.results.len()
    ));
    Ok(Output {
        json,
        text,
        csv: Some(csv.finish()),
    })
}

fn replay(path: &Path) -> Result<(Output, bool)> {
    let cx = Counterexample::from_json(&fs::read_to_string(path)?)?;
    let reproduced = cx.replay()?;
    let json = json!({ "claim": cx.claim, "fixture": cx.fixture, "reproduced": reproduced });
    let text = format!(
        "{} on {}: {}\n",
        cx.claim,
        cx.fixture,
        if reproduced {
            "violation reproduced"
        } else {
            "NOT reproduced"
        }
    );
    let mut csv = Csv::new(["claim", "fixture", "reproduced"]);
    csv.row([
        cx.claim.to_string(),
        cx.fixture.clone(),
        reproduced.to_string(),
    ]);
    Ok((
        Output {
            json,
            text,
            csv: Some(csv.finish()),
        },
        reproduced,
    ))
}

fn fixtures_cmd(export: Option<&Path>) -> Result<Output> {
    fixtures::verify_bundle()?;
    let manifest = fixtures::manifest();
    let mut text = format!(
        "{} bundled fixtures, checksums verified\n",
        manifest.files.len()
    );
    let mut csv = Csv::new(["name", "sha256"]);
    for (name, sum) in &manifest.files {
        text.push_str(&format!("  {name:<22} {sum}\n"));
        csv.row([name, sum]);
    }
    if let Some(dir) = export {
        let written = fixtures::export_bundle(dir)?;
        text.push_str(&format!(
            "exported {} files to {}\n",
            written.len(),
            dir.display()
        ));
    }
    Ok(Output {
        json: serde_json::to_value(&manifest)?,
        text,
        csv: Some(csv.finish()),
    })
}
