use std::fs;
use std::process::{Command, Output};

use irrcert::Certificate;

fn irrcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_irrcert"))
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const U: &str = "7,5,-16,6,2,7,1,6,2,8,4";
const V: &str = "49147,49153,0,36864,12288";

#[test]
fn certify_writes_a_verifiable_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u.irrcert.json");
    let out = irrcert(&["certify", "-p", U, "-n", "10", "-o", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let c = Certificate::deserialize(&fs::read(&path).unwrap()).unwrap();
    assert_eq!(
        (c.p.to_string(), c.k, c.d.to_string(), c.j),
        ("137".into(), 5, "1".into(), 1)
    );

    let ok = irrcert(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&ok), 0, "{}", stderr(&ok));

    let text = fs::read_to_string(&path)
        .unwrap()
        .replace("\"137\"", "\"139\"");
    fs::write(&path, text).unwrap();
    let bad = irrcert(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&bad), 1);
    assert!(stderr(&bad).contains("failed"));
}

#[test]
fn stdout_is_reproducible() {
    let a = irrcert(&[
        "search",
        "-p",
        V,
        "--n-max",
        "30",
        "--variants",
        "girstmair",
        "--seed",
        "7",
    ]);
    let b = irrcert(&[
        "search",
        "-p",
        V,
        "--n-max",
        "30",
        "--variants",
        "girstmair",
        "--seed",
        "7",
    ]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = Certificate::deserialize(&a.stdout).unwrap();
    assert_eq!(
        (c.n.to_string(), c.p.to_string(), c.d.to_string()),
        ("20".into(), "251336023".into(), "9".into())
    );
}

#[test]
fn below_bound_is_criterion_not_met() {
    let out = irrcert(&["certify", "-p", V, "-n", "5"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("n < H+d+1"), "{}", stderr(&out));
}

#[test]
fn tight_factoring_budget_is_inconclusive() {
    // u(12) = 17·1153·1427·10369 cannot be split with these limits.
    let out = irrcert(&[
        "certify",
        "-p",
        U,
        "-n",
        "12",
        "--trial-bound",
        "10",
        "--rho-cap",
        "1",
    ]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
}

#[test]
fn input_errors_exit_3() {
    let out = irrcert(&["certify", "-p", "2,4,6", "-n", "5"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("polynomial is not primitive (content 2)"));
    assert_eq!(code(&irrcert(&["certify", "-p", "1,2,x", "-n", "5"])), 3);
    assert_eq!(code(&irrcert(&["search", "-p", "3,1"])), 3);
    assert_eq!(code(&irrcert(&["bogus"])), 3);
    assert_eq!(code(&irrcert(&["verify", "/nonexistent/cert.json"])), 3);
}

#[test]
fn malformed_certificate_is_invalid() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.irrcert.json");
    fs::write(&path, "{\"format_version\": 1}").unwrap();
    assert_eq!(code(&irrcert(&["verify", path.to_str().unwrap()])), 1);
}

#[test]
fn poly_file_and_expression_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.txt");
    fs::write(&path, "12288*x^4 + 36864*x^3 + 49153*x + 49147\n").unwrap();
    let out = irrcert(&["certify", "-f", path.to_str().unwrap(), "-n", "20"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

#[test]
fn compare_prints_one_row_per_variant() {
    let out = irrcert(&["compare", "-p", U, "--n-max", "12"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "variant\tsmallest_n\tp\tk\td\tj");
    assert_eq!(lines.len(), 4);
    assert!(
        lines
            .iter()
            .any(|l| l.starts_with("theorem1\t10\t137\t5\t1\t1")),
        "{text}"
    );
    assert!(lines.iter().all(|l| l.split('\t').count() == 6));
}

#[test]
fn oracle_check_exit_codes() {
    let irr = irrcert(&["oracle-check", "-p", "1,0,1"]);
    assert_eq!(
        (code(&irr), String::from_utf8(irr.stdout).unwrap()),
        (0, "irreducible\n".into())
    );
    let red = irrcert(&["oracle-check", "-p", "x^2-1"]);
    assert_eq!(code(&red), 1);
    let inc = irrcert(&["oracle-check", "-p", U, "--budget", "1"]);
    assert_eq!(code(&inc), 2);
}
