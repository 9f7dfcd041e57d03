use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use ptekit::designs::{self, DesignInstance};
use ptekit::fano;
use ptekit::linalg::{frac, int, Matrix};
use ptekit::n2;
use ptekit::pte::PteSolution;
use ptekit::quadform::{self, QuadraticForm};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn fx(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptekit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), v)
}

fn load<T: serde::de::DeserializeOwned>(name: &str) -> T {
    serde_json::from_str(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

#[test]
fn verify_pte_accepts_solutions() {
    let (c, v) = json(&["verify-pte", &fx("fano.json")]);
    assert_eq!(c, 0);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["details"]["holds"], true);
    assert_eq!(code(&["verify-pte", &fx("pte_1d.json")]), 0);
    assert_eq!(code(&["verify-pte", &fx("fano_normalized.json")]), 0);
}

#[test]
fn verify_pte_reports_the_first_violation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let mut sol: Value = load("pte_1d.json");
    sol["m"] = 3.into();
    std::fs::write(&path, sol.to_string()).unwrap();
    let (c, v) = json(&["verify-pte", path.to_str().unwrap()]);
    assert_eq!(c, 1);
    assert_eq!(v["status"], "violation");
    assert_eq!(
        v["details"]["violation"]["exponents"],
        serde_json::json!([3])
    );
}

#[test]
fn normalize_writes_the_reduced_solution() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("norm.json");
    let o = out.to_str().unwrap();
    assert_eq!(code(&["normalize", &fx("fano.json"), "-o", o]), 0);
    let written: PteSolution =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(written, fano::expected_normalized());
}

#[test]
fn demo_fano_and_its_negative_control() {
    let (c, v) = json(&["demo-fano"]);
    assert_eq!(c, 0);
    let stages: Vec<&str> = v["details"]["stages"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["status"].as_str().unwrap())
        .collect();
    assert!(stages.iter().all(|s| *s == "ok"), "{stages:?}");
    let (c, v) = json(&["demo-fano", "--perturb"]);
    assert_eq!(c, 1);
    assert_eq!(v["status"], "violation");
}

#[test]
fn n2_verbs() {
    assert_eq!(code(&["n2", "check", &fx("fano_element.json")]), 0);
    assert_eq!(code(&["n2", "check", &fx("cyclic3.json")]), 0);
    let (c, v) = json(&["n2", "check", &fx("not_member.json")]);
    assert_eq!(c, 1);
    assert_eq!(v["details"]["member"], false);

    let (c, v) = json(&["n2", "decompose", &fx("swap2.json")]);
    assert_eq!(c, 0);
    assert_eq!(v["details"]["perm"], serde_json::json!([1, 0]));
    // with no permutation budget there is nothing to find
    let (c, _) = json(&[
        "n2",
        "decompose",
        &fx("swap2.json"),
        "--lex-budget",
        "1",
        "--random-tries",
        "0",
    ]);
    assert_eq!(c, 1);

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cyc.json");
    assert_eq!(
        code(&[
            "n2",
            "cayley",
            "--skew",
            &fx("skew3.json"),
            "-o",
            out.to_str().unwrap()
        ]),
        0
    );
    let m: Matrix = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(m, load::<Matrix>("cyclic3.json"));

    let (c, v) = json(&["n2", "to-block", &fx("swap2.json")]);
    assert_eq!(c, 0);
    assert_eq!(v["details"]["block"]["data"], serde_json::json!([["-1"]]));
    let (c, v) = json(&["n2", "from-block", &fx("block_minus_one.json"), "--n", "2"]);
    assert_eq!(c, 0);
    assert_eq!(
        serde_json::from_value::<Matrix>(v["details"]["matrix"].clone()).unwrap(),
        load::<Matrix>("swap2.json")
    );
    // a block that does not preserve Q' is a violation
    assert_eq!(
        code(&["n2", "from-block", &fx("form_x2_3y2.json"), "--n", "3"]),
        1
    );
    assert_eq!(
        code(&["n2", "from-block", &fx("block_minus_one.json"), "--n", "4"]),
        2
    );

    let (c, v) = json(&["n2", "random", "--n", "5", "--seed", "9"]);
    assert_eq!(c, 0);
    let m: Matrix = serde_json::from_value(v["details"]["matrix"].clone()).unwrap();
    assert!(n2::is_member(&m));
}

#[test]
fn qf_verbs() {
    let (c, v) = json(&["qf", "paper", "--n", "5"]);
    assert_eq!(c, 0);
    let q: QuadraticForm = serde_json::from_value(v["details"]["form"].clone()).unwrap();
    assert_eq!(q, quadform::paper_form(5).unwrap());

    for (n, similar) in [
        ("4", true),
        ("5", false),
        ("9", true),
        ("10", true),
        ("6", false),
    ] {
        let (c, v) = json(&["qf", "schoenberg", "--n", n]);
        assert_eq!(c, 0);
        assert_eq!(v["details"]["similar"], similar, "n = {n}");
    }
    assert_eq!(code(&["qf", "schoenberg", "--n", "1"]), 2);

    let args = [
        "qf",
        "witness",
        &fx("form_x2_3y2.json"),
        &fx("form_eisenstein.json"),
        &fx("witness_completed_square.json"),
    ];
    assert_eq!(code(&args), 0);
    let mut scaled = args.to_vec();
    scaled.extend(["--scale", "2"]);
    assert_eq!(code(&scaled), 1);

    assert_eq!(
        code(&[
            "qf",
            "member",
            &fx("swap2.json"),
            "--form",
            &fx("form_circle.json")
        ]),
        0
    );
    assert_eq!(
        code(&[
            "qf",
            "member",
            &fx("swap2.json"),
            "--form",
            &fx("form_x2_3y2.json")
        ]),
        1
    );
}

#[test]
fn design_verbs() {
    assert_eq!(code(&["design", "verify", &fx("hexagon.json")]), 0);
    assert_eq!(code(&["design", "verify", &fx("square.json")]), 0);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hex6.json");
    let mut hex: Value = load("hexagon.json");
    hex["t"] = 6.into();
    std::fs::write(&path, hex.to_string()).unwrap();
    let (c, v) = json(&["design", "verify", path.to_str().unwrap()]);
    assert_eq!(c, 1);
    assert_eq!(v["details"]["failing_degree"], 6);
    assert_eq!(v["details"]["pair_sums"][5], "36");

    let (_, v) = json(&["design", "tight-size", "--n", "2", "--t", "5"]);
    assert_eq!(v["details"]["size"], "6");

    let out = dir.path().join("pts.json");
    let args = [
        "design",
        "points",
        "--form",
        &fx("form_x2_3y2.json"),
        "--base",
        "1,0",
        "--height",
        "10",
        "-o",
        out.to_str().unwrap(),
    ];
    assert_eq!(code(&args), 0);
    let pts: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(pts["points"].as_array().unwrap().len() >= 20);
    // the base point is checked
    assert_eq!(
        code(&[
            "design",
            "points",
            "--form",
            &fx("form_x2_3y2.json"),
            "--base",
            "1,1"
        ]),
        2
    );

    let (c, v) = json(&[
        "design",
        "search",
        "--form",
        &fx("form_eisenstein.json"),
        "--pool",
        &fx("hexagon_pool.json"),
        "--t",
        "5",
    ]);
    assert_eq!(c, 0);
    assert_eq!(v["details"]["report"]["hits"], 1);

    let (c, v) = json(&[
        "design",
        "search",
        "--paper-form-n",
        "5",
        "--base",
        "1,0,0,0",
        "--t",
        "2",
        "--budget",
        "50000",
    ]);
    assert_eq!(c, 0);
    assert_eq!(v["details"]["report"]["pool_size"], 28);
    assert_eq!(v["details"]["report"]["budget_exhausted"], false);
}

#[test]
fn json_output_is_reproducible() {
    for args in [
        vec!["n2", "random", "--n", "6", "--seed", "3"],
        vec!["demo-fano"],
        vec![
            "design",
            "search",
            "--form",
            &fx("form_eisenstein.json"),
            "--pool",
            &fx("hexagon_pool.json"),
            "--t",
            "5",
            "--workers",
            "3",
        ],
    ] {
        let mut all = vec!["--json"];
        all.extend_from_slice(&args);
        let a = run(&all).stdout;
        let b = run(&all).stdout;
        assert!(!a.is_empty());
        assert_eq!(a, b, "{args:?}");
    }
    let (_, v) = json(&["demo-fano", "--timing"]);
    assert!(v["elapsed_ms"].is_u64());
    let (_, v) = json(&["demo-fano"]);
    assert!(v.get("elapsed_ms").is_none());
}

#[test]
fn errors_exit_with_two() {
    assert_eq!(code(&["no-such-verb"]), 2);
    assert_eq!(code(&["verify-pte", "/nonexistent/file.json"]), 2);
    assert_eq!(code(&["verify-pte", &fx("swap2.json")]), 2);
    let out = run(&["n2", "check", "/nonexistent.json"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn fixtures_match_library_values() {
    assert_eq!(load::<PteSolution>("fano.json"), fano::solution());
    assert_eq!(
        load::<PteSolution>("fano_normalized.json"),
        fano::expected_normalized()
    );
    let sol = fano::solution();
    let elem = n2::from_pte(sol.a(), sol.b()).unwrap();
    assert_eq!(&load::<Matrix>("fano_element.json"), elem.matrix());
    assert_eq!(
        &load::<Matrix>("fano_element.json"),
        fano::expected_normalized().b()
    );

    let pte_1d: PteSolution = load("pte_1d.json");
    assert_eq!(pte_1d.a(), &Matrix::from_ints(&[[1, 2, 4, 7]]));
    assert!(pte_1d.verify().holds);

    assert!(load::<Matrix>("identity3.json").is_identity());
    let skew: Matrix = load("skew3.json");
    let cyc = n2::cayley(&skew, &ptekit::perm::Permutation::identity(3)).unwrap();
    assert_eq!(cyc.matrix(), &load::<Matrix>("cyclic3.json"));
    assert_eq!(
        load::<Matrix>("cyclic3.json"),
        Matrix::from_ints(&[[0, 0, 1], [1, 0, 0], [0, 1, 0]])
    );
    assert_eq!(
        load::<Matrix>("swap2.json"),
        Matrix::from_ints(&[[0, 1], [1, 0]])
    );
    assert_eq!(
        load::<Matrix>("block_minus_one.json"),
        Matrix::from_ints(&[[-1]])
    );
    assert!(!n2::is_member(&load::<Matrix>("not_member.json")));

    let x2_3y2: QuadraticForm = load("form_x2_3y2.json");
    assert_eq!(x2_3y2, QuadraticForm::diagonal(&[int(1), int(3)]).unwrap());
    let eis: QuadraticForm = load("form_eisenstein.json");
    assert_eq!(
        eis.gram(),
        &Matrix::from_rows(vec![vec![int(1), frac(1, 2)], vec![frac(1, 2), int(1)]]).unwrap()
    );
    assert!(load::<QuadraticForm>("form_circle.json")
        .gram()
        .is_identity());
    let g: Matrix = load("witness_completed_square.json");
    assert!(quadform::equivalence_witness_check(&x2_3y2, &eis, &g, &int(1)).unwrap());

    let hex: DesignInstance = load("hexagon.json");
    assert_eq!(hex.strength(), 5);
    assert!(designs::verify_design(&hex).holds);
    let pool: Value = load("hexagon_pool.json");
    let pool_len = pool
        .get("points")
        .unwrap_or(&pool)
        .as_array()
        .unwrap()
        .len();
    assert_eq!(pool_len, 6);
    let square: DesignInstance = load("square.json");
    assert_eq!(square.strength(), 3);
    assert!(designs::verify_design(&square).holds);

    for n in 2..=12 {
        let q: QuadraticForm = load(&format!("forms/paper_form_n{n}.json"));
        assert_eq!(q, quadform::paper_form(n).unwrap());
        let want: Vec<_> = (0..n as i64 - 1)
            .map(|i| frac((i + 1) * (i + 2), 2))
            .collect();
        assert_eq!(q.gram(), &Matrix::diag(&want), "n = {n}");
        let qp: QuadraticForm = load(&format!("forms/paper_form_prime_n{n}.json"));
        assert_eq!(qp, quadform::paper_form_prime(n).unwrap());
        assert_eq!(qp.gram(), &q.gram().scale(&int(2)));
    }
}
