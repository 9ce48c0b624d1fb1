use std::path::Path;
use std::process::Command;

use coindet::cli::run;
use serde_json::Value;

const GOLDEN: &[(&str, &[&str])] = &[
    ("verify_A", &["verify", "fixtures/A.dga", "--json"]),
    ("homology_A_1", &["homology", "fixtures/A.dga", "--max-degree", "1", "--json"]),
    ("triple_A", &["triple", "fixtures/A.dga", "a0", "a1", "a2", "--json"]),
    ("triple_A_not_cycle", &["triple", "fixtures/A.dga", "a01", "a1", "a2", "--json"]),
    ("coindet_A", &["coindet", "fixtures/A.dga", "a0", "a1", "a2", "a3", "--json"]),
    ("coindet_A_prime", &["coindet", "fixtures/A_prime.dga", "a0", "a1", "a2", "a3", "--json"]),
    ("fourfold_A", &["fourfold", "fixtures/A.dga", "a0", "a1", "a2", "a3", "--json"]),
    ("fourfold_A_prime", &["fourfold", "fixtures/A_prime.dga", "a0", "a1", "a2", "a3", "--json"]),
    (
        "fourfold_A_limit_0",
        &["fourfold", "fixtures/A.dga", "a0", "a1", "a2", "a3", "--enumerate-limit", "0", "--json"],
    ),
    ("random_check_small", &["random-check", "--count", "5", "--seed", "7", "--json"]),
];

fn cli(args: &[&str]) -> coindet::cli::Outcome {
    run(std::iter::once("coindet").chain(args.iter().copied()))
}

#[test]
fn golden_json_is_byte_stable() {
    let dir = Path::new("tests/golden");
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (name, args) in GOLDEN {
        let out = cli(args);
        let path = dir.join(format!("{name}.json"));
        if update {
            std::fs::write(&path, &out.stdout).unwrap();
        }
        let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
        assert_eq!(out.stdout, expected, "{name} drifted");
    }
}

#[test]
fn exit_codes() {
    let cases: &[(&[&str], i32)] = &[
        (&["verify", "fixtures/A.dga"], 0),
        (&["verify", "tests/data/d_squared.dga"], 2),
        (&["verify", "tests/data/malformed.dga"], 1),
        (&["verify", "tests/data/missing.dga"], 1),
        (&["homology", "fixtures/A.dga", "--max-degree", "5"], 2),
        (&["triple", "fixtures/A.dga", "a0", "a0", "a0"], 2),
        (&["triple", "fixtures/A.dga", "a01", "a1", "a2"], 2),
        (&["triple", "fixtures/A.dga", "a0", "a1", "a2 +"], 1),
        (&["coindet", "fixtures/A_prime.dga", "a0", "a1", "a2", "a3"], 0),
        (&["fourfold", "fixtures/A_prime.dga", "a0", "a1", "a2", "a3"], 2),
        (&["fourfold", "fixtures/A.dga", "a0", "a1", "a2", "a3"], 0),
        (&["random-check", "--count", "0"], 0),
        (&["no-such-command"], 1),
        (&["--help"], 0),
    ];
    for (args, code) in cases {
        assert_eq!(cli(args).code, *code, "{args:?}");
    }
}

#[test]
fn refusals_carry_reason_codes() {
    let cases: &[(&[&str], &str)] = &[
        (&["verify", "tests/data/d_squared.dga", "--json"], "invalid-dga"),
        (&["verify", "tests/data/malformed.dga", "--json"], "parse-error"),
        (&["homology", "fixtures/A.dga", "--max-degree", "7", "--json"], "degree-unavailable"),
        (&["triple", "fixtures/A.dga", "a0", "a0", "a0", "--json"], "threefold-undefined"),
        (&["triple", "fixtures/A.dga", "a01", "a1", "a2", "--json"], "not-a-cycle"),
        (&["fourfold", "fixtures/A_prime.dga", "a0", "a1", "a2", "a3", "--json"], "fourfold-undefined"),
    ];
    for (args, reason) in cases {
        let v: Value = serde_json::from_str(&cli(args).stdout).unwrap();
        assert_eq!(v["reason_code"], *reason, "{args:?}");
        assert_ne!(v["status"], "ok");
    }
}

#[test]
fn verify_reports_the_offending_monomial_and_line() {
    let v: Value = serde_json::from_str(&cli(&["verify", "tests/data/d_squared.dga", "--json"]).stdout).unwrap();
    assert_eq!(v["result"]["violations"][0], "d(d(s)) = x^3");
    let v: Value = serde_json::from_str(&cli(&["verify", "tests/data/malformed.dga", "--json"]).stdout).unwrap();
    assert!(v["message"].as_str().unwrap().contains("line 4"));
}

#[test]
fn text_and_json_carry_the_same_data() {
    for (_, args) in GOLDEN {
        let json_out = cli(args).stdout;
        let text_args: Vec<&str> = args.iter().copied().filter(|a| *a != "--json").collect();
        let text_out = cli(&text_args).stdout;
        let v: Value = serde_json::from_str(&json_out).unwrap();
        let report = coindet::cli::Report {
            command: v["command"].as_str().unwrap().to_string(),
            inputs: v["inputs"].clone(),
            status: match v["status"].as_str().unwrap() {
                "ok" => coindet::cli::Status::Ok,
                "refused" => coindet::cli::Status::Refused,
                _ => coindet::cli::Status::Error,
            },
            reason_code: v["reason_code"].as_str().map(String::from),
            message: v["message"].as_str().map(String::from),
            result: v["result"].clone(),
        };
        assert_eq!(report.to_text(), text_out, "{args:?}");
    }
}

#[test]
fn random_check_is_deterministic() {
    let a = cli(&["random-check", "--count", "8", "--seed", "11", "--json"]);
    let b = cli(&["random-check", "--count", "8", "--seed", "11", "--json"]);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(v["result"]["mismatch_count"], 0);
}

#[test]
fn binary_matches_library_entry_point() {
    let out = Command::new(env!("CARGO_BIN_EXE_coindet"))
        .args(["coindet", "fixtures/A.dga", "a0", "a1", "a2", "a3", "--json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let lib = cli(&["coindet", "fixtures/A.dga", "a0", "a1", "a2", "a3", "--json"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), lib.stdout);

    let out = Command::new(env!("CARGO_BIN_EXE_coindet"))
        .args(["verify", "tests/data/malformed.dga"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
