use std::path::Path;
use std::process::{Command, Output};

fn aodkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aodkit")).args(args).output().expect("spawn aodkit")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = aodkit(args);
    assert!(o.status.success(), "{args:?}: {}", stderr(&o));
    stdout(&o)
}

fn fails_with(args: &[&str], code: i32, category: &str) {
    let o = aodkit(args);
    assert_eq!(o.status.code(), Some(code), "{args:?}: {}", stderr(&o));
    if !category.is_empty() {
        assert!(stderr(&o).contains(&format!("error[{category}]")), "{}", stderr(&o));
    }
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_g8_as_ostbc() {
    assert_eq!(ok(&["verify", "G8", "--level", "ostbc"]).trim(), "G8: PASS");
}

#[test]
fn table1_rows() {
    let out = ok(&["tables", "--table", "1", "--format", "delimited"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 4);
    let row = |code: &str| -> Vec<&str> {
        lines.iter().find(|l| l.starts_with(&format!("{code},"))).unwrap().split(',').collect()
    };
    assert_eq!(row("TH").last(), Some(&"yes"));
    assert_eq!(row("G8").last(), Some(&"yes"));
    // TS agrees on the three power columns; only its type sum is flagged
    let ts = row("TS");
    assert_eq!(&ts[2..5], &["2.000000", "inf", "0.125000"]);
    assert_eq!(ts[5], "14");
    assert_eq!(ts.last(), Some(&"no"));
    let text = ok(&["tables", "--table", "1"]);
    assert!(text.contains("note: type sum: computed 14"));
}

#[test]
fn table2_marks_reference_rows() {
    let out = ok(&["tables", "--table", "2", "--format", "delimited"]);
    assert_eq!(out.lines().filter(|l| l.ends_with(",reference-only")).count(), 2);
    for code in ["TJC", "GS", "G4"] {
        let line = out.lines().find(|l| l.starts_with(&format!("{code},"))).unwrap();
        assert!(line.ends_with(",yes"), "{line}");
    }
}

#[test]
fn construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let fam = dir.path().join("g8.json");
    ok(&["construct", "c1", "--input", "af2-ex1", "--mn", "mn-eq6", "--out", path_str(&fam)]);
    assert_eq!(ok(&["verify", path_str(&fam), "--level", "aod"]).trim(), "c1(af2-ex1, mn-eq6): PASS");
    assert!(ok(&["verify", path_str(&fam), "--level", "ostbc"]).contains("PASS"));

    let inner = dir.path().join("inner.json");
    ok(&[
        "construct",
        "c1",
        "--input",
        path_str(&fam),
        "--mn",
        "mn-eq16",
        "--kron",
        "seed-inner",
        "--out",
        path_str(&inner),
    ]);
    assert!(ok(&["verify", path_str(&inner), "--level", "aod"]).contains("PASS"));

    let g4 = dir.path().join("g4.json");
    ok(&["construct", "c2", "--input", "aod2-ex3", "--out", path_str(&g4)]);
    assert!(ok(&["verify", path_str(&g4), "--level", "af"]).contains("PASS"));
    fails_with(&["verify", path_str(&g4), "--level", "aod"], 1, "check-failed");
}

#[test]
fn construct_to_stdout_is_a_family_document() {
    let json = ok(&["construct", "c2", "--input", "aod1-unit"]);
    assert!(json.contains("\"a_mats\""));
    assert!(json.contains("\"order\": 2"));
}

#[test]
fn structured_show_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    for (name, level) in
        [("G8", "ostbc"), ("TS", "ostbc"), ("af2-ex1", "af"), ("aod2-ex3", "aod"), ("mn-eq6", "mn-seed")]
    {
        let file = dir.path().join(format!("{name}.json"));
        std::fs::write(&file, ok(&["catalog", "show", name, "--format", "structured"])).unwrap();
        for format in ["text", "structured"] {
            let a = aodkit(&["verify", name, "--level", level, "--format", format]);
            let b = aodkit(&["verify", path_str(&file), "--level", level, "--format", format]);
            assert_eq!(a.status.code(), b.status.code(), "{name}");
            assert_eq!(stdout(&a), stdout(&b), "{name}");
        }
    }
}

#[test]
fn catalog_listing() {
    let text = ok(&["catalog", "list"]);
    for name in ["G8", "TJC", "af2-ex1", "mn-eq16", "aod1-unit"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
    let json: serde_json::Value = serde_json::from_str(&ok(&["catalog", "list", "--format", "structured"])).unwrap();
    let entries = json.as_array().unwrap();
    assert_eq!(entries.len(), 14);
    let g8 = entries.iter().find(|e| e["name"] == "G8").unwrap();
    assert_eq!(g8["rate"], "1/2");
    let ex3 = entries.iter().find(|e| e["name"] == "aod2-ex3").unwrap();
    assert_eq!(ex3["class"], "AF");
}

#[test]
fn metrics_with_rotation() {
    let out = ok(&["metrics", "--code", "G4", "--rotate", "x2=45", "--format", "delimited"]);
    let fields: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(fields[1], "qpsk qpsk@45 qpsk");
    let peak: f64 = fields[2].parse().unwrap();
    assert!((peak - (4.0 / 3.0 + 2f64.sqrt() * 2.0 / 3.0)).abs() < 1e-6);
    assert_eq!(fields[8], "yes");

    let plain = ok(&["metrics", "--code", "TH"]);
    assert!(plain.contains("ave/min:         inf"));
    assert!(plain.contains("P_o:             1/2"));
}

#[test]
fn equivalence_subcommands() {
    let blocks = ok(&["equiv", "blocks", "--code", "G8"]);
    assert!(blocks.starts_with("pattern: Q8"));
    let dir = tempfile::tempdir().unwrap();
    let moved = dir.path().join("moved.json");
    ok(&["equiv", "apply", "--code", "F8", "--transform", "appendix", "--out", path_str(&moved)]);
    assert!(ok(&["verify", path_str(&moved), "--level", "ostbc"]).contains("PASS"));
    ok(&["equiv", "apply", "--code", "F8", "--transform", "appendix", "--compare", path_str(&moved)]);
    fails_with(&["equiv", "apply", "--code", "F8", "--transform", "appendix", "--compare", "F8"], 1, "check-failed");

    let tr = dir.path().join("id.json");
    let identity: Vec<(usize, i8)> = (0..8).map(|i| (i, 1)).collect();
    std::fs::write(&tr, serde_json::json!({ "left": identity, "right": identity }).to_string()).unwrap();
    ok(&["equiv", "apply", "--code", "G8", "--transform", path_str(&tr), "--compare", "G8"]);
}

#[test]
fn simulation_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let args = |out: &str| {
        vec!["simulate", "--code", "G4", "--snr", "0:5:10", "--trials", "400", "--seed", "7", "--out", out]
            .into_iter()
            .map(String::from)
            .collect::<Vec<_>>()
    };
    let run = |p: &Path| {
        let v = args(path_str(p));
        ok(&v.iter().map(String::as_str).collect::<Vec<_>>());
        std::fs::read_to_string(p).unwrap()
    };
    let first = run(&a);
    assert_eq!(first, run(&dir.path().join("b.csv")));
    let lines: Vec<&str> = first.lines().collect();
    assert_eq!(lines[0], "snr_db,trials,bit_errors,ber,std_err,code,seed");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("0,400,"));
    assert!(lines[3].starts_with("10,400,"));

    let stdout_csv = ok(&["simulate", "--code", "G4", "--snr", "0:5:10", "--trials", "400", "--seed", "7"]);
    assert_eq!(stdout_csv, first);
}

#[test]
fn error_categories() {
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{ not json").unwrap();
    let odd = dir.path().join("odd.json");
    std::fs::write(&odd, "{\"x\": 1}").unwrap();

    fails_with(&["verify", "G8", "--level", "ostbc", "--bogus"], 2, "");
    fails_with(&["simulate", "--code", "G8", "--snr", "5:-1:0", "--trials", "1", "--seed", "1"], 2, "");
    fails_with(&["metrics", "--code", "G8", "--rotate", "x9=45"], 2, "usage");
    fails_with(&["verify", "/no/such/file.json", "--level", "af"], 3, "io");
    fails_with(&["verify", path_str(&junk), "--level", "af"], 4, "malformed");
    fails_with(&["verify", path_str(&odd), "--level", "af"], 4, "malformed");
    fails_with(&["verify", "no-such-code", "--level", "af"], 5, "unknown-name");
    fails_with(&["catalog", "show", "no-such-code"], 5, "unknown-name");
    fails_with(&["construct", "c1", "--input", "af2-ex1", "--mn", "af2-ex1"], 6, "invalid-input");
    fails_with(&["verify", "G8", "--level", "mn-seed"], 6, "invalid-input");
    fails_with(&["verify", "aod2-ex3", "--level", "aod"], 1, "check-failed");
}
