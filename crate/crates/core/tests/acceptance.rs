//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use aodkit::*;
use num_rational::Ratio;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn r(p: i128, q: i128) -> Ratio<i128> {
    Ratio::new(p, q)
}

fn exact_rational(m: &Metric) -> Option<Ratio<i128>> {
    m.exact().and_then(|x| x.as_rational())
}

fn build(name: &str) -> DispersionFamily {
    let (input, seed) = fixture_recipe(name).expect("constructed fixture");
    let fam = catalog_family(input).unwrap();
    match seed {
        Some(s) => construct1(&fam, &catalog_seed(s).unwrap()).unwrap(),
        None => construct2(&fam).unwrap(),
    }
}

fn criterion1() -> Outcome {
    let mut bad = Vec::new();
    for name in FIXTURE_NAMES {
        if !verify_ostbc(&fixture(name).unwrap()).passed {
            bad.push(format!("{name} fails orthogonality"));
        }
    }
    for name in ["af2-ex1", "af2-ex2-complex", "aod2-ex3", "mn-eq6", "mn-eq16"] {
        let report = match seed_catalog(name).unwrap() {
            CatalogEntry::Seed(s) => verify_mn_seed(&s, Target::Aod),
            CatalogEntry::Family(f) if name.starts_with("aod") => verify_aod(&f),
            CatalogEntry::Family(f) => verify_af(&f),
        };
        if !report.passed {
            let mut ids: Vec<_> = report.violations.iter().map(|v| v.condition.id()).collect();
            ids.dedup();
            bad.push(format!("{name} fails its verifier on {}", ids.join(",")));
        }
    }
    if bad.is_empty() {
        outcome(true, "8 fixtures orthogonal, 5 catalog objects pass their verifiers")
    } else {
        outcome(false, bad.join("; "))
    }
}

fn criterion2() -> Outcome {
    let mut bad = Vec::new();
    for name in ["G8", "H8", "F8", "G4"] {
        let code = assemble(&build(name), &frozen_pairing(name).unwrap()).unwrap();
        if code.entries() != fixture(name).unwrap().entries() {
            bad.push(name);
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() { "G8, H8, F8, G4 reproduced entry for entry".into() } else { format!("mismatch: {bad:?}") },
    )
}

fn criterion3() -> Outcome {
    let rows = table_report(1).unwrap();
    let get = |n: &str| rows.iter().find(|r| r.code == n).and_then(|r| r.computed.clone()).unwrap();
    let th = get("TH");
    let ts = get("TS");
    let g8 = get("G8");
    let ts_row = rows.iter().find(|r| r.code == "TS").unwrap();
    let checks = [
        exact_rational(&th.peak_ave) == Some(r(2, 1)),
        th.ave_min.is_infinite(),
        th.p_o == Ratio::new(1, 2),
        th.type_sum == Ratio::from_integer(8),
        exact_rational(&ts.peak_ave) == Some(r(2, 1)),
        ts.ave_min.is_infinite(),
        ts.p_o == Ratio::new(1, 8),
        !ts_row.notes.is_empty() && ts_row.printed.type_sum.text == "10" && !ts_row.matches,
        exact_rational(&g8.peak_ave) == Some(r(1, 1)),
        exact_rational(&g8.ave_min) == Some(r(1, 1)),
        g8.p_o == Ratio::from_integer(0),
        g8.type_sum == Ratio::from_integer(16),
    ];
    outcome(
        checks.iter().all(|c| *c),
        format!(
            "TH (2, inf, 1/2, 8), TS (2, inf, 1/8, computed Σ={} vs table 10, flagged), G8 (1, 1, 0, 16)",
            ts.type_sum
        ),
    )
}

fn criterion4() -> Outcome {
    let start = Instant::now();
    let rows = table_report(2).unwrap();
    let elapsed = start.elapsed();
    let get = |n: &str| rows.iter().find(|r| r.code == n).and_then(|r| r.computed.clone()).unwrap();
    let close = |m: &Metric, v: f64| (m.to_f64() - v).abs() <= 0.005;
    let tjc = get("TJC");
    let gs = get("GS");
    let g4 = get("G4");
    let refs = rows.iter().filter(|r| r.reference_only()).count();
    let checks = [
        exact_rational(&tjc.peak_ave) == Some(r(4, 3)),
        exact_rational(&tjc.ave_min) == Some(r(3, 2)),
        tjc.p_o == Ratio::from_integer(0),
        tjc.type_sum == Ratio::from_integer(8),
        exact_rational(&gs.peak_ave) == Some(r(4, 3)),
        gs.ave_min.is_infinite(),
        gs.p_o == Ratio::new(1, 4),
        gs.type_sum == Ratio::from_integer(6),
        close(&g4.peak_ave, 2.28),
        close(&g4.ave_min, 2.56),
        g4.peak_ave.exact() == Some(RealSqrt2::new(r(4, 3), r(2, 3))),
        g4.ave_min.exact() == Some(RealSqrt2::new(r(3, 2), r(3, 4))),
        g4.p_o == Ratio::from_integer(0),
        g4.type_sum == Ratio::from_integer(12),
        refs == 2,
        elapsed < Duration::from_secs(1),
    ];
    outcome(
        checks.iter().all(|c| *c),
        format!(
            "TJC (4/3, 3/2, 0, 8), GS (4/3, inf, 1/4, 6), G4 ({} = {:.4}, {} = {:.4}, 0, 12)",
            g4.peak_ave.exact().unwrap(),
            g4.peak_ave.to_f64(),
            g4.ave_min.exact().unwrap(),
            g4.ave_min.to_f64()
        ),
    )
}

fn criterion5() -> Outcome {
    let start = Instant::now();
    let unit = catalog_family("aod1-unit").unwrap();
    let mut trace = Vec::new();
    let mut ok = true;
    let mut fam = unit.clone();
    for (order, vars) in [(2, 4), (4, 6), (8, 8), (16, 10), (32, 12)] {
        fam = construct2(&fam).unwrap();
        ok &= fam.order == order && fam.variables() == vars && vars == max_variables_bound(order);
        ok &= verify_aod(&fam).passed;
        trace.push(format!("{order}:{}", fam.variables()));
    }
    // interleave Construction 1: 1 → 2 → 8 → 32
    let seed = catalog_seed("mn-eq6").unwrap();
    let mut fam = construct2(&unit).unwrap();
    for order in [8, 32] {
        fam = construct1(&fam, &seed).unwrap();
        ok &= fam.order == order && fam.variables() == max_variables_bound(order) && verify_aod(&fam).passed;
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(5);
    outcome(ok, format!("orders:variables {} (and 2→8→32 via c1)", trace.join(" ")))
}

fn criterion6() -> Outcome {
    let f8 = fixture("F8").unwrap();
    let g8 = fixture("G8").unwrap();
    let f8_blocks = extract_blocks(&f8).unwrap();
    let g8_blocks = extract_blocks(&g8).unwrap();
    let moved = apply_transform(&f8, &appendix_transform()).unwrap();
    let swapped = match_layout(&moved, &SWAPPED_Q2).unwrap();
    let ok = g8_blocks.pattern == PatternId::Q8
        && f8_blocks.pattern == PatternId::Q2
        && swapped.is_some()
        && swapped == f8_blocks.blocks;
    outcome(
        ok,
        format!("G8 → {}, F8 → {}, transformed F8 matches the swapped-Q2 layout", g8_blocks.pattern, f8_blocks.pattern),
    )
}

fn criterion7() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for table in [1, 2] {
        for row in table_report(table).unwrap() {
            let Some(c) = &row.computed else { continue };
            let verdict_ok = row.printed.sum_ge_2n == Some(c.guideline_sum_ge_2n);
            let printed = row.printed.type_sum.value.unwrap();
            let sum_ok = if row.code == "TS" {
                // the table prints 10; the stated type (1,1,1,4;1,1,1,4) gives 14
                c.type_sum == Ratio::from_integer(14)
            } else {
                c.type_sum == Ratio::from_integer(printed as i64)
            };
            ok &= verdict_ok && sum_ok;
            // necessity direction: P_o = 0 implies Σ type ≥ 2n
            if c.p_o == Ratio::from_integer(0) {
                ok &= c.guideline_sum_ge_2n;
            }
            detail.push(format!("{}:{}", row.code, if c.guideline_sum_ge_2n { "Yes" } else { "No" }));
        }
    }
    let g4 = fixture("G4").unwrap();
    let plain = power_report(&g4, &vec![Constellation::qpsk(); 3]).unwrap();
    let rotated = power_report(&g4, &table_constellations("G4", 3)).unwrap();
    ok &= plain.p_o > Ratio::from_integer(0) && rotated.p_o == Ratio::from_integer(0);
    outcome(ok, format!("{}; G4 P_o {} un-rotated, {} with x2 at 45°", detail.join(" "), plain.p_o, rotated.p_o))
}

fn ber_close(a: &BerPoint, b: &BerPoint) -> bool {
    (a.ber - b.ber).abs() <= 3.0 * (a.std_err + b.std_err)
}

fn criterion8() -> Outcome {
    let start = Instant::now();
    let snr = vec![6.0, 10.0, 14.0];
    let trials = 100_000;
    let seed = 20_240_601;
    let run = |name: &str| {
        let code = fixture(name).unwrap();
        let mut cfg = SimConfig::qpsk(code.clone(), snr.clone(), trials, seed);
        cfg.constellations = table_constellations(name, code.k());
        run_ber(&cfg).unwrap()
    };
    let g8 = run("G8");
    let th = run("TH");
    let g4 = run("G4");
    let tjc = run("TJC");
    let gs = run("GS");
    let mut ok = true;
    let pairs = [(&g8, &th), (&g4, &tjc), (&g4, &gs), (&tjc, &gs)];
    for (a, b) in pairs {
        for (pa, pb) in a.points.iter().zip(&b.points) {
            ok &= ber_close(pa, pb);
        }
    }
    let again = run("G8");
    let deterministic = again == g8;
    ok &= deterministic;
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(120);
    let fmt = |r: &BerResult| r.points.iter().map(|p| format!("{:.2e}", p.ber)).collect::<Vec<_>>().join("/");
    outcome(
        ok,
        format!(
            "BER at 6/10/14 dB: G8 {} TH {} | G4 {} TJC {} GS {}; deterministic={deterministic}",
            fmt(&g8),
            fmt(&th),
            fmt(&g4),
            fmt(&tjc),
            fmt(&gs)
        ),
    )
}

fn criterion9() -> Outcome {
    let mut bad = Vec::new();
    for name in FIXTURE_NAMES {
        let code = fixture(name).unwrap();
        let back = SymbolicCode::from_json(&code.to_json()).unwrap();
        if back != code || verify_ostbc(&back) != verify_ostbc(&code) {
            bad.push(name.to_string());
        }
    }
    for name in ["G8", "H8", "F8", "G4"] {
        let fam = build(name);
        let back = DispersionFamily::from_json(&fam.to_json()).unwrap();
        if back != fam || verify_aod(&back) != verify_aod(&fam) || verify_af(&back) != verify_af(&fam) {
            bad.push(format!("family {name}"));
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() { "8 codes and 4 constructed families round-trip".into() } else { format!("{bad:?}") },
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("constraint verification", criterion1),
        ("construction reproduction", criterion2),
        ("table 1 reproduction", criterion3),
        ("table 2 reproduction", criterion4),
        ("maximal-variable chains", criterion5),
        ("block forms under the witness transform", criterion6),
        ("design guidelines", criterion7),
        ("simulator equivalence", criterion8),
        ("round trip", criterion9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        if !o.ok {
            failed += 1;
        }
        println!(
            "criterion {} [{}] {name}: {} ({:.2?})",
            i + 1,
            if o.ok { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
