use std::path::Path;
use std::process::{Command, Output};

use fkalg::presentations::GeneratorLabel;
use fkalg::{NCPolynomial, Presentation, Scalar, Word};
use serde_json::Value;

fn fkalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fkalg"))
        .args(args)
        .env_remove("FKALG_MAX_BASIS_SIZE")
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = fkalg(&full);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), v)
}

fn u64s(v: &Value) -> Vec<u64> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect()
}

#[test]
fn dims_e3() {
    let (code, v) = json(&["dims", "--n", "3", "--max-degree", "6"]);
    assert_eq!(code, 0);
    assert_eq!(
        u64s(&v["series"]["coefficients"]),
        vec![1, 3, 4, 3, 1, 0, 0]
    );
    assert_eq!(v["series"]["complete"], true);
    assert_eq!(v["dimension"]["status"], "finite");
    assert_eq!(v["dimension"]["value"], 12);
    assert_eq!(v["config"]["n"], 3);
    assert_eq!(v["config"]["max_degree"], 6);
    assert_eq!(v["tool"]["name"], "fkalg");
    assert!(v["timings"]["total"].is_number());
    assert_eq!(u64s(&v["factorization"]["factors"]), vec![3, 2, 2]);
}

#[test]
fn dims_e6_is_inconclusive() {
    let (code, v) = json(&["dims", "--n", "6", "--max-degree", "4"]);
    assert_eq!(code, 1);
    assert_eq!(
        u64s(&v["series"]["coefficients"]),
        vec![1, 15, 125, 765, 3831]
    );
    assert_eq!(v["dimension"]["status"], "inconclusive");
    assert_eq!(v["status"], "inconclusive");
}

#[test]
fn small_n_is_a_usage_error() {
    for cmd in [
        &["dims", "--n", "2", "--max-degree", "4"][..],
        &["nichols", "--n", "2", "--max-degree", "2"],
        &["ybe", "--n", "2"],
    ] {
        let out = fkalg(cmd);
        assert_eq!(out.status.code(), Some(2), "{cmd:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("at least 3"));
    }
}

#[test]
fn max_degree_below_relations_is_a_usage_error() {
    assert_eq!(
        fkalg(&["dims", "--n", "3", "--max-degree", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn basis_budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_fkalg"))
        .args(["dims", "--n", "4", "--max-degree", "13", "--format", "json"])
        .env("FKALG_MAX_BASIS_SIZE", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "budget_exceeded");
    assert_eq!(v["config"]["budgets"]["max_basis_size"], 10);
    let coeffs = u64s(&v["series"]["coefficients"]);
    assert_eq!(
        coeffs[..],
        [1, 6, 19, 42, 71, 96, 106, 96, 71, 42, 19, 6, 1, 0][..coeffs.len()]
    );
}

#[test]
fn modular_field_gives_same_series() {
    let (_, rational) = json(&["dims", "--n", "4", "--max-degree", "13"]);
    let (code, modular) = json(&["dims", "--n", "4", "--max-degree", "13", "--field", "32003"]);
    assert_eq!(code, 0);
    assert_eq!(rational["series"], modular["series"]);
    assert_eq!(
        fkalg(&["dims", "--n", "4", "--max-degree", "4", "--field", "32004"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn order_seed_does_not_change_series() {
    let (_, a) = json(&["dims", "--n", "4", "--max-degree", "13"]);
    let (_, b) = json(&[
        "dims",
        "--n",
        "4",
        "--max-degree",
        "13",
        "--order-seed",
        "99",
    ]);
    assert_eq!(a["series"], b["series"]);
    assert_eq!(b["config"]["order_seed"], 99);
}

#[test]
fn presentation_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plane.json");
    let r = NCPolynomial::from_terms([
        (Scalar::from(1), Word::from_indices([0, 1])),
        (Scalar::from(-1), Word::from_indices([1, 0])),
    ])
    .unwrap();
    let p = Presentation::new(
        0,
        vec![
            GeneratorLabel::Named("a".into()),
            GeneratorLabel::Named("b".into()),
        ],
        vec![1, 1],
        vec![r],
    )
    .unwrap();
    p.save(&path).unwrap();
    let (code, v) = json(&[
        "dims",
        "--presentation",
        path.to_str().unwrap(),
        "--max-degree",
        "4",
    ]);
    assert_eq!(code, 1);
    assert_eq!(u64s(&v["series"]["coefficients"]), vec![1, 2, 3, 4, 5]);
    assert!(v.get("numerology").is_none());

    std::fs::write(&path, "{not json").unwrap();
    assert_eq!(
        fkalg(&[
            "dims",
            "--presentation",
            path.to_str().unwrap(),
            "--max-degree",
            "4"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        fkalg(&[
            "dims",
            "--presentation",
            "/nonexistent/p.json",
            "--max-degree",
            "4"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn nichols_examples() {
    for (n, d, want) in [
        (3, 5, vec![1, 3, 4, 3, 1, 0]),
        (4, 3, vec![1, 6, 19, 42]),
        (5, 2, vec![1, 10, 55]),
    ] {
        let (code, v) = json(&[
            "nichols",
            "--n",
            &n.to_string(),
            "--max-degree",
            &d.to_string(),
        ]);
        assert_eq!(code, 0);
        assert_eq!(u64s(&v["nichols"]["dims"]), want);
        assert_eq!(v["nichols"]["method"], "modular");
        assert_eq!(
            u64s(&v["nichols"]["primes_used"]),
            vec![2147483629, 2147483587]
        );
    }
}

#[test]
fn nichols_budget_and_primes() {
    let (code, v) = json(&[
        "nichols",
        "--n",
        "4",
        "--max-degree",
        "3",
        "--max-tensor-dim",
        "100",
    ]);
    assert_eq!(code, 1);
    assert_eq!(u64s(&v["nichols"]["dims"]), vec![1, 6, 19]);
    assert_eq!(v["status"], "budget_exceeded");

    let (code, v) = json(&[
        "nichols",
        "--n",
        "3",
        "--max-degree",
        "3",
        "--primes",
        "65537,1000003",
    ]);
    assert_eq!(code, 0);
    assert_eq!(u64s(&v["nichols"]["primes_used"]), vec![65537, 1000003]);
    assert_eq!(
        fkalg(&[
            "nichols",
            "--n",
            "3",
            "--max-degree",
            "3",
            "--primes",
            "65539"
        ])
        .status
        .code(),
        Some(0)
    );
    assert_eq!(
        fkalg(&[
            "nichols",
            "--n",
            "3",
            "--max-degree",
            "3",
            "--primes",
            "32003"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        fkalg(&[
            "nichols",
            "--n",
            "3",
            "--max-degree",
            "3",
            "--primes",
            "1000001"
        ])
        .status
        .code(),
        Some(2)
    );

    let (code, v) = json(&[
        "nichols",
        "--n",
        "3",
        "--max-degree",
        "3",
        "--backend",
        "rational",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["nichols"]["method"], "rational");
}

#[test]
fn compare_examples() {
    let (code, v) = json(&["compare", "--n", "3", "--max-degree", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["compare"]["all_equal"], true);
    assert_eq!(v["compare"]["kernel_verdict"], "equal (dim 5)");
    let (_, v) = json(&["compare", "--n", "4", "--max-degree", "4"]);
    assert_eq!(v["compare"]["all_equal"], true);
    let (_, v) = json(&["compare", "--n", "6", "--max-degree", "2"]);
    assert_eq!(v["compare"]["kernel_verdict"], "equal (dim 100)");
    assert_eq!(v["compare"]["kernel"]["kernel_dim"], 100);
}

#[test]
fn factor_examples() {
    let (code, v) = json(&["factor", "1,3,4,3,1", "--complete"]);
    assert_eq!(code, 0);
    assert_eq!(u64s(&v["factor"]["factors"]), vec![3, 2, 2]);

    let (_, v) = json(&["factor", "1,15,125", "--prefix"]);
    assert_eq!(v["factor"]["result"], "refuted");
    assert!(v["factor"]["reason"].as_str().unwrap().contains("20"));

    let (_, v) = json(&["factor", "1", "--complete"]);
    assert_eq!(v["factor"]["result"], "product");
    assert!(v["factor"]["factors"].as_array().unwrap().is_empty());
    let human = String::from_utf8(fkalg(&["factor", "1", "--complete"]).stdout).unwrap();
    assert!(human.contains("empty product"));

    for bad in [
        &["factor", "1,x"][..],
        &["factor", "1,2", "--prefix", "--depth", "5"],
        &["factor", "2,1", "--prefix"],
        &["factor", ""],
    ] {
        assert_eq!(fkalg(bad).status.code(), Some(2), "{bad:?}");
    }
}

#[test]
fn factor_reads_series_files() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("dims.json");
    let out = fkalg(&[
        "dims",
        "--n",
        "4",
        "--max-degree",
        "13",
        "--format",
        "json",
        "--output",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    // A dims report's series section is itself a valid series file.
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let series = dir.path().join("series.json");
    std::fs::write(&series, v["series"].to_string()).unwrap();
    let (_, f) = json(&["factor", "--series", series.to_str().unwrap()]);
    assert_eq!(u64s(&f["factor"]["factors"]), vec![4, 4, 3, 3, 2, 2]);

    let prefix = dir.path().join("e6.json");
    std::fs::write(
        &prefix,
        r#"{"coefficients": [1, 15, 125, 765], "complete": false}"#,
    )
    .unwrap();
    let (_, f) = json(&["factor", "--series", prefix.to_str().unwrap()]);
    assert_eq!(f["factor"]["result"], "refuted");
    assert_eq!(f["config"]["mode"], "prefix");

    let text = dir.path().join("plain.txt");
    std::fs::write(&text, "1 3 4 3 1\n").unwrap();
    let (_, f) = json(&["factor", "--series", text.to_str().unwrap()]);
    assert_eq!(u64s(&f["factor"]["factors"]), vec![3, 2, 2]);
}

#[test]
fn ybe_exit_codes() {
    for n in ["3", "5"] {
        let (code, v) = json(&["ybe", "--n", n]);
        assert_eq!(code, 0);
        assert_eq!(v["ybe"]["holds"], true);
    }
}

#[test]
fn csv_and_human_formats() {
    let out = fkalg(&["dims", "--n", "3", "--max-degree", "6", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("degree,coefficient\n0,1\n1,3\n2,4\n"));
    let out = fkalg(&[
        "compare",
        "--n",
        "3",
        "--max-degree",
        "2",
        "--format",
        "csv",
    ]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "degree,fk,nichols,equal\n0,1,1,true\n1,3,3,true\n2,4,4,true\n"
    );
    let human =
        String::from_utf8(fkalg(&["dims", "--n", "3", "--max-degree", "6"]).stdout).unwrap();
    assert!(human.contains("dimension: 12"));
    assert!(human.contains("match: degree 4 = indecomposables 4 = clusters 4"));
}

fn run_in(dir: &Path, args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_fkalg"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap();
    assert!(out.status.code().unwrap() <= 1);
    std::fs::read(dir.join("report.json")).unwrap()
}

#[test]
fn output_is_independent_of_worker_count() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let base = [
        "dims",
        "--n",
        "5",
        "--max-degree",
        "7",
        "--format",
        "json",
        "--no-timings",
        "--output",
        "report.json",
    ];
    let one = run_in(a.path(), &[&base[..], &["--workers", "1"]].concat());
    let four = run_in(b.path(), &[&base[..], &["--workers", "4"]].concat());
    assert_eq!(one, four);
    assert!(!String::from_utf8(one).unwrap().contains("workers"));
}
