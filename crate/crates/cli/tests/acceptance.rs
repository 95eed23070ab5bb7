//! Acceptance criterion for the command-line surface: the golden-file
//! sweep is reproduced byte for byte, and `verify` distinguishes a clean
//! build from one with an injected off-by-one index fault.

use std::path::Path;
use std::process::Command;

fn abflux(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_abflux"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn criterion_9_cli_golden_and_verify_gate() {
    // Golden 41 x 31 sweep.
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/phase_diagram_41x31.csv");
    let expected = std::fs::read_to_string(&golden).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = abflux(&[
        "phase-diagram",
        "--kappa",
        "-1:1:41",
        "--alpha",
        "-2:1:31",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let got = std::fs::read_to_string(&path).unwrap();
    assert_eq!(got, expected, "golden sweep mismatch");
    assert_eq!(got.lines().count(), 1272); // header + 41*31 cells

    // Spot checks on the physics in the sweep: on the alpha = 0 row the
    // index is 1 exactly at integer flux and 2 elsewhere, and along the
    // kappa = 0 column the index never increases with alpha.
    let cells: Vec<(f64, f64, usize)> = got
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect();
    let alpha0: Vec<_> = cells.iter().filter(|c| c.1 == 0.0).collect();
    assert_eq!(alpha0.len(), 41);
    for &&(kappa, _, n) in &alpha0 {
        let expect = if kappa == kappa.round() { 1 } else { 2 };
        assert_eq!(n, expect, "alpha = 0 row at kappa = {kappa}");
    }
    let column: Vec<usize> = cells.iter().filter(|c| c.0 == 0.0).map(|c| c.2).collect();
    assert_eq!(column.len(), 31);
    assert!(column.windows(2).all(|w| w[0] >= w[1]), "kappa = 0 column not monotone");

    // verify: exit 0 on the clean build...
    let clean = abflux(&["verify", "--seed", "3", "--cases", "2000"]);
    assert_eq!(clean.status.code(), Some(0), "clean verify must pass");

    // ...and exit 1 with a witness under an injected off-by-one fault.
    let faulty = abflux(&[
        "verify",
        "--seed",
        "3",
        "--cases",
        "2000",
        "--inject-index-fault",
    ]);
    assert_eq!(faulty.status.code(), Some(1), "fault must be detected");
    let text = String::from_utf8_lossy(&faulty.stdout);
    assert!(
        text.contains("FAIL oracle-equality") && text.contains("kappa="),
        "failure report must name a witness: {text}"
    );

    println!("criterion 9 PASS: golden sweep byte-identical; verify gate 0/1 exit codes correct");
}
