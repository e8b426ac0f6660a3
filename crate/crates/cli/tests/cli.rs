mod common;

use common::{conjugate, corpus, form_json, temp_json, CORPUS, HARD_E8H};
use covermap_cli::{run, AnalysisReport, BranchMode, Outcome, EXIT_INCONCLUSIVE, EXIT_INVALID, EXIT_OK, SCHEMA};
use covermap_core::classify::Classification;
use covermap_core::lattice::GramForm;
use covermap_core::planner::{BaseManifold, Verdict};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("covermap").chain(args.iter().copied()), None)
}

fn analyze(path: &str, extra: &[&str]) -> Outcome {
    let mut args = vec!["analyze", "--input", path];
    args.extend_from_slice(extra);
    cli(&args)
}

fn report(out: &Outcome) -> AnalysisReport {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}\n{}", out.stdout))
}

const FOUR: [BaseManifold; 4] = [BaseManifold::CP2, BaseManifold::CP2bar, BaseManifold::S2xS2, BaseManifold::S2twistedS2];

/// Table rows as (base, verdict, immersed, embedded, witness degree).
fn text_rows(text: &str) -> Vec<(String, String, String, String, Option<String>)> {
    let mut lines = text.lines().skip_while(|l| !l.starts_with("BASE"));
    lines.next().expect("table header");
    lines
        .map(|l| {
            let t: Vec<&str> = l.split_whitespace().collect();
            let witness = t.get(4).and_then(|w| w.strip_prefix("d=")).map(|d| d.trim_end_matches(':').to_string());
            (t[0].into(), t[1].into(), t[2].into(), t[3].into(), witness)
        })
        .collect()
}

#[test]
fn cp2_is_the_only_standard_base_of_cp2() {
    let path = corpus("cp2");
    let out = analyze(path.to_str().unwrap(), &["--all", "--json"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let r = report(&out);
    for base in FOUR {
        let row = r.reports.iter().find(|x| x.base == base).unwrap();
        assert_eq!(row.feasible(), base == BaseManifold::CP2, "{base}");
    }
    let cp2 = &r.reports[0];
    assert_eq!((cp2.base, cp2.immersed_degree, cp2.embedded_degree), (BaseManifold::CP2, Some(4), Some(9)));

    let text = analyze(path.to_str().unwrap(), &["--all"]).stdout;
    let rows = text_rows(&text);
    assert_eq!(rows[0], ("CP2".into(), "feasible".into(), "4".into(), "9".into(), Some("4".into())));
    assert!(rows[1..].iter().all(|r| r.1 == "infeasible"), "{text}");
}

#[test]
fn indefinite_corpus_covers_all_four() {
    for name in ["cp2_cp2bar", "h", "h2", "e8h", "neg_e8_2h"] {
        let r = report(&analyze(corpus(name).to_str().unwrap(), &["--all", "--max-sum", "1", "--json"]));
        assert_eq!(r.reports.len(), 5, "{name}");
        for base in FOUR {
            assert!(r.reports.iter().any(|x| x.base == base && x.feasible()), "{name}: {base}");
        }
    }
    let r = report(&analyze(corpus("diag111").to_str().unwrap(), &["--all", "--json"]));
    let feasible: Vec<_> = r.reports.iter().filter(|x| FOUR.contains(&x.base) && x.feasible()).map(|x| x.base).collect();
    assert_eq!(feasible, vec![BaseManifold::CP2]);
}

#[test]
fn malformed_input_names_the_field() {
    let cases = [
        (r#"{"gram": [[1, 2], [3, 1]]}"#, "gram[0][1]"),
        (r#"{"gram": [[1, 0], [0]]}"#, "gram[1]"),
        (r#"{"gram": [[1, "x"], [0, 1]]}"#, "gram[0][1]"),
        (r#"{"gram": [[2, 1], [1, 2]]}"#, "gram"),
        (r#"{"gram": [[1]], "b1": -1}"#, "b1"),
        (r#"{"gram": [[1]], "extra": 0}"#, "extra"),
        (r#"{"gram": [[1]], "b1": 0, "free_quotient_rank": 1}"#, "free_quotient_rank"),
        ("not json", "expected"),
    ];
    for (doc, field) in cases {
        let f = temp_json(doc);
        let out = analyze(f.path().to_str().unwrap(), &["--all"]);
        assert_eq!(out.code, EXIT_INVALID, "{doc}");
        assert!(out.stdout.is_empty());
        assert!(out.stderr.contains(field), "{doc}: {}", out.stderr);
    }
    let missing = analyze("/nonexistent/inv.json", &["--all"]);
    assert_eq!(missing.code, EXIT_INVALID);
}

#[test]
fn usage_errors_exit_one() {
    let path = corpus("cp2");
    let p = path.to_str().unwrap();
    for args in [vec!["analyze", "--input", p], vec!["analyze", "--input", p, "--all", "--base", "CP2"], vec!["bogus"]] {
        assert_eq!(cli(&args).code, EXIT_INVALID, "{args:?}");
    }
    let out = analyze(p, &["--base", "nowhere"]);
    assert_eq!(out.code, EXIT_INVALID);
    assert!(out.stderr.contains("nowhere"));
    assert_eq!(analyze(p, &["--base", "sum:0,0"]).code, EXIT_INVALID);
    assert_eq!(analyze(p, &["--all", "--max-sum", "0"]).code, EXIT_INVALID);
    assert_eq!(cli(&["--help"]).code, EXIT_OK);
}

#[test]
fn e8_plus_h_embedded_over_cp2_has_degree_six() {
    let path = corpus("e8h");
    let out = analyze(path.to_str().unwrap(), &["--base", "sum:1,0", "--embedded", "--json"]);
    assert_eq!(out.code, EXIT_OK);
    let r = report(&out);
    assert_eq!(r.branch, BranchMode::Embedded);
    assert_eq!(r.reports.len(), 1);
    let row = &r.reports[0];
    assert_eq!((row.base, row.verdict, row.embedded_degree), (BaseManifold::CP2, Verdict::Feasible, Some(6)));
    let w = row.witness(true).unwrap();
    assert_eq!(w.degree, 6);
    assert_eq!(w.witness.max_residual(&r.input.form), Ok(0));

    let text = analyze(path.to_str().unwrap(), &["--base", "sum:1,0", "--embedded", "--text"]).stdout;
    assert_eq!(text_rows(&text), vec![("CP2".into(), "feasible".into(), "4".into(), "6".into(), Some("6".into()))]);
}

#[test]
fn json_report_round_trips() {
    for name in CORPUS {
        for mode in [&["--json"][..], &["--json", "--embedded"][..]] {
            let mut extra = vec!["--all"];
            extra.extend_from_slice(mode);
            let out = analyze(corpus(name).to_str().unwrap(), &extra);
            let r = report(&out);
            assert_eq!(r.schema, SCHEMA);
            assert_eq!(r.to_json(), out.stdout, "{name}");
            let again: AnalysisReport = serde_json::from_str(&r.to_json()).unwrap();
            assert_eq!(again, r);
        }
    }
}

fn assert_modes_agree(path: &str, extra: &[&str]) {
    let mut json_args = extra.to_vec();
    json_args.push("--json");
    let json = analyze(path, &json_args);
    let text = analyze(path, extra);
    assert_eq!(json.code, text.code);
    let r = report(&json);
    let rows = text_rows(&text.stdout);
    assert_eq!(rows.len(), r.reports.len());
    let show = |d: Option<u32>| d.map_or("-".to_string(), |d| d.to_string());
    let embedded = r.branch == BranchMode::Embedded;
    for (row, rep) in rows.iter().zip(&r.reports) {
        assert_eq!(row.0, rep.base.to_string());
        assert_eq!(row.1, serde_json::to_value(rep.verdict).unwrap().as_str().unwrap());
        assert_eq!(row.2, show(rep.immersed_degree));
        assert_eq!(row.3, show(rep.embedded_degree));
        assert_eq!(row.4, rep.witness(embedded).map(|w| w.degree.to_string()));
    }
    let i = &r.invariants;
    let header = format!("rank {}  signature ({},{})  {}  det {}  b1 {}", i.rank, i.signature_pos, i.signature_neg, i.parity, i.determinant, r.input.b1);
    assert!(text.stdout.contains(&header), "{}", text.stdout);
}

#[test]
fn text_and_json_agree() {
    for name in CORPUS {
        let p = corpus(name);
        assert_modes_agree(p.to_str().unwrap(), &["--all"]);
        assert_modes_agree(p.to_str().unwrap(), &["--all", "--embedded"]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let h = GramForm::hyperbolic();
    let bases = [GramForm::diagonal(&[1, 1, -1]).unwrap(), h.direct_sum(&h).unwrap(), GramForm::diagonal(&[-1, -1]).unwrap()];
    for base in &bases {
        let f = temp_json(&form_json(&conjugate(&mut rng, base, 3)));
        assert_modes_agree(f.path().to_str().unwrap(), &["--all", "--max-sum", "3"]);
    }
}

#[test]
fn b1_and_free_quotient_reach_the_report() {
    let f = temp_json(r#"{"gram": [[0, 1], [1, 0]], "b1": 2, "free_quotient_rank": 2}"#);
    let r = report(&analyze(f.path().to_str().unwrap(), &["--all", "--json"]));
    let s3 = r.reports.iter().find(|x| x.base == BaseManifold::SumS3xS1(2)).unwrap();
    assert_eq!(s3.verdict, Verdict::Feasible);
    let text = analyze(f.path().to_str().unwrap(), &["--all"]).stdout;
    assert!(text.contains("free quotient rank 2"));
}

#[test]
fn enumeration_ceiling_from_environment() {
    let f = temp_json(HARD_E8H);
    let p = f.path().to_str().unwrap();
    let args = ["covermap", "analyze", "--input", p, "--base", "CP2"];
    let small = run(args, Some("2"));
    assert_eq!(small.code, EXIT_INCONCLUSIVE);
    assert!(small.stdout.contains("undetermined"));
    assert!(small.stderr.contains("COVERMAP_ENUM_CEILING"));
    let default = run(args, None);
    assert_eq!(default.code, EXIT_OK, "{}", default.stderr);
    assert!(default.stdout.contains("feasible"));

    for bad in ["0", "-3", "lots", ""] {
        let out = run(args, Some(bad));
        assert_eq!(out.code, EXIT_INVALID, "{bad:?}");
        assert!(out.stderr.contains("COVERMAP_ENUM_CEILING"));
    }
    // Commands without a search ignore the variable.
    assert_eq!(run(["covermap", "selfcheck"], Some("lots")).code, EXIT_OK);

    let classify = run(["covermap", "lattice", "classify", "--input", p], Some("1"));
    assert_eq!(classify.code, EXIT_INCONCLUSIVE);
}

#[test]
fn lattice_classify_outputs() {
    let p = corpus("e8h");
    let text = cli(&["lattice", "classify", "--input", p.to_str().unwrap()]);
    assert_eq!(text.code, EXIT_OK);
    assert!(text.stdout.contains("form: 1·E8 ⊕ 1·H"), "{}", text.stdout);
    let json = cli(&["lattice", "classify", "--input", p.to_str().unwrap(), "--json"]);
    let c: Classification = serde_json::from_str(&json.stdout).unwrap();
    c.verify().unwrap();

    let p = corpus("cp2_cp2bar");
    let text = cli(&["lattice", "classify", "--input", p.to_str().unwrap()]).stdout;
    assert!(text.contains("1⟨1⟩ ⊕ 1⟨−1⟩"), "{text}");
}

#[test]
fn selfcheck_is_deterministic() {
    let a = cli(&["selfcheck"]);
    let b = cli(&["selfcheck"]);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a, b);
    assert!(a.stdout.ends_with("14/14 checks passed\n"), "{}", a.stdout);
}

#[test]
fn monodromy_build_then_verify() {
    for (g, d) in [(0, 2), (1, 3), (3, 5)] {
        let (gs, ds) = (g.to_string(), d.to_string());
        let built = cli(&["monodromy", "build", "-g", &gs, "-d", &ds]);
        assert_eq!(built.code, EXIT_OK);
        let f = temp_json(&built.stdout);
        let text = cli(&["monodromy", "verify", f.path().to_str().unwrap()]);
        assert_eq!(text.code, EXIT_OK);
        assert_eq!(text.stdout, format!("ok: degree {d} with {} branch points, genus {g}\n", 2 * (g + d - 1)));
        let json = cli(&["monodromy", "verify", f.path().to_str().unwrap(), "--json"]);
        let v: serde_json::Value = serde_json::from_str(&json.stdout).unwrap();
        assert_eq!(v["valid"], true);
        assert_eq!(v["genus"], g);
    }
    assert!(cli(&["monodromy", "build", "-g", "1", "-d", "3", "--text"]).stdout.contains("branch points 6"));
    assert_eq!(cli(&["monodromy", "build", "-g", "1", "-d", "1"]).code, EXIT_INVALID);
}

#[test]
fn monodromy_verify_rejects_bad_data() {
    let cases = [
        (r#"{"degree": 3, "points": [[1, 2], [2, 3]]}"#, "product_not_identity"),
        (r#"{"degree": 3, "points": [[1, 2], [1, 2]]}"#, "not_transitive"),
        (r#"{"degree": 3, "points": [[1, 4], [1, 4]]}"#, "invalid_point"),
        (r#"{"degree": 1, "points": []}"#, "degree_too_small"),
    ];
    for (doc, tag) in cases {
        let f = temp_json(doc);
        let out = cli(&["monodromy", "verify", f.path().to_str().unwrap(), "--json"]);
        assert_eq!(out.code, EXIT_INVALID, "{doc}");
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["valid"], false);
        assert_eq!(v["violation"]["violation"], tag, "{doc}");
    }
    let f = temp_json(r#"{"degree": 3, "points": [[1, 2]], "genus": 0}"#);
    let out = cli(&["monodromy", "verify", f.path().to_str().unwrap()]);
    assert_eq!(out.code, EXIT_INVALID);
    assert!(out.stderr.contains("genus"));
}
