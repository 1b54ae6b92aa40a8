use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn cayley(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cayley"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn spectrum_values(csv: &str) -> Vec<(String, String)> {
    csv.lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].to_string(), f[1].to_string())
        })
        .collect()
}

#[test]
fn construct_product_set() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().to_str().unwrap();
    let res = cayley(&[
        "construct",
        "theorem33",
        "--s",
        "4",
        "--r",
        "4",
        "--out",
        out,
        "--format",
        "dot",
    ]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    let verdict = read_json(&dir.path().join("verdict.json"));
    assert_eq!(verdict["isRamanujan"], Value::Bool(true));
    let spec = fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    let pairs = spectrum_values(&spec);
    let expected = [("6", "1"), ("2", "6"), ("-2", "9")];
    assert_eq!(pairs.len(), 3);
    for (p, e) in pairs.iter().zip(expected) {
        assert_eq!((p.0.as_str(), p.1.as_str()), e);
    }
    assert!(dir.path().join("graph.dot").exists());
    assert!(String::from_utf8_lossy(&res.stdout).contains("ramanujan=true"));
}

#[test]
fn construct_polar_trace() {
    let dir = TempDir::new().unwrap();
    let res = cayley(&[
        "construct",
        "polar-trace",
        "--m",
        "2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&res), 0);
    let spec = fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    let values: Vec<String> = spectrum_values(&spec).into_iter().map(|p| p.0).collect();
    assert_eq!(values, ["4", "2", "0", "-2", "-4"]);
    let report = read_json(&dir.path().join("report.json"));
    assert_eq!(report["stats"]["diameter"], Value::from(4));
}

#[test]
fn construct_kloosterman_smallest() {
    let dir = TempDir::new().unwrap();
    let cache = dir.path().join("cache");
    let res = cayley(&[
        "construct",
        "kloosterman-trace",
        "--m",
        "1",
        "--out",
        dir.path().to_str().unwrap(),
        "--cache",
        cache.to_str().unwrap(),
    ]);
    assert_eq!(code(&res), 0);
    let graph = read_json(&dir.path().join("graph.json"));
    assert_eq!(graph["factors"], serde_json::json!([2]));
    assert_eq!(graph["connection_set"], serde_json::json!([[1]]));
}

#[test]
fn bad_parameters_exit_two() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(
        code(&cayley(&[
            "construct",
            "theorem33",
            "--s",
            "3",
            "--r",
            "4",
            "--out",
            out
        ])),
        2
    );
    assert_eq!(
        code(&cayley(&[
            "construct",
            "theorem33",
            "--s",
            "4",
            "--out",
            out
        ])),
        2
    );
    assert_eq!(
        code(&cayley(&[
            "construct",
            "dij",
            "--m",
            "3",
            "--i",
            "0",
            "--j",
            "0",
            "--out",
            out
        ])),
        2
    );
    assert_eq!(
        code(&cayley(&[
            "construct",
            "bent-hadamard",
            "--u",
            "99",
            "--out",
            out
        ])),
        2
    );
    assert_eq!(
        code(&cayley(&["search", "gds", "--n", "40", "--out", out])),
        2
    );
    assert_eq!(
        code(&cayley(&["search", "ramanujan", "--n", "2", "--out", out])),
        2
    );
    assert_eq!(code(&cayley(&["construct", "theorem33", "--bogus"])), 2);
}

#[test]
fn analyze_examples() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("z20.json");
    fs::write(
        &input,
        r#"{"factors":[20],"connection_set":[[4],[8],[12],[16]]}"#,
    )
    .unwrap();
    let out = dir.path().join("z20");
    let res = cayley(&[
        "analyze",
        input.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&res), 0);
    let a = read_json(&out.join("analysis.json"));
    assert_eq!(a["stats"]["componentCount"], Value::from(4));
    assert_eq!(a["verdict"]["isRamanujan"], Value::Bool(false));
    assert_eq!(a["gds"]["n"], Value::from(20));
    assert_eq!(a["gds"]["S"].as_array().unwrap().len(), 16);
    assert_eq!(
        (
            a["gds"]["k"].clone(),
            a["gds"]["mu1"].clone(),
            a["gds"]["mu2"].clone()
        ),
        (4.into(), 0.into(), 3.into())
    );

    let built = dir.path().join("built");
    assert_eq!(
        code(&cayley(&[
            "construct",
            "theorem33",
            "--s",
            "4",
            "--r",
            "4",
            "--out",
            built.to_str().unwrap()
        ])),
        0
    );
    let out2 = dir.path().join("ex2");
    let res = cayley(&[
        "analyze",
        built.join("graph.json").to_str().unwrap(),
        "--out",
        out2.to_str().unwrap(),
    ]);
    assert_eq!(code(&res), 0);
    let a = read_json(&out2.join("analysis.json"));
    assert_eq!(
        a["srg"],
        serde_json::json!({"v": 16, "k": 6, "lambda": 2, "mu": 2})
    );
    assert_eq!(a["verdict"]["isRamanujan"], Value::Bool(true));
    assert!(a["oracleAgreement"].as_str().unwrap().contains("agrees"));
}

#[test]
fn analyze_invalid_input() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("o");
    let asym = dir.path().join("asym.json");
    fs::write(&asym, r#"{"factors":[20],"connection_set":[[4],[8],[12]]}"#).unwrap();
    assert_eq!(
        code(&cayley(&[
            "analyze",
            asym.to_str().unwrap(),
            "--out",
            out.to_str().unwrap()
        ])),
        3
    );
    let ident = dir.path().join("ident.json");
    fs::write(&ident, r#"{"factors":[5],"connection_set":[[0],[1],[4]]}"#).unwrap();
    assert_eq!(
        code(&cayley(&[
            "analyze",
            ident.to_str().unwrap(),
            "--out",
            out.to_str().unwrap()
        ])),
        3
    );
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"factors":[20],"connection_set":"#).unwrap();
    assert_eq!(
        code(&cayley(&[
            "analyze",
            bad.to_str().unwrap(),
            "--out",
            out.to_str().unwrap()
        ])),
        2
    );
    let extra = dir.path().join("extra.json");
    fs::write(
        &extra,
        r#"{"factors":[5],"connection_set":[[1],[4]],"x":1}"#,
    )
    .unwrap();
    assert_eq!(
        code(&cayley(&[
            "analyze",
            extra.to_str().unwrap(),
            "--out",
            out.to_str().unwrap()
        ])),
        2
    );
}

#[test]
fn round_trip_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let first = dir.path().join("first");
    let second = dir.path().join("second");
    assert_eq!(
        code(&cayley(&[
            "construct",
            "bent-hadamard",
            "--u",
            "2",
            "--out",
            first.to_str().unwrap()
        ])),
        0
    );
    let res = cayley(&[
        "analyze",
        first.join("graph.json").to_str().unwrap(),
        "--out",
        second.to_str().unwrap(),
    ]);
    assert_eq!(code(&res), 0);
    for name in ["graph.json", "spectrum.csv", "verdict.json"] {
        assert_eq!(
            fs::read(first.join(name)).unwrap(),
            fs::read(second.join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn analyze_seed_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("g.json");
    fs::write(
        &input,
        r#"{"factors":[13],"connection_set":[[1],[3],[4],[9],[10],[12]]}"#,
    )
    .unwrap();
    let run = |sub: &str, seed: &str| {
        let out = dir.path().join(sub);
        let res = cayley(&[
            "analyze",
            input.to_str().unwrap(),
            "--seed",
            seed,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&res), 0);
        fs::read(out.join("analysis.json")).unwrap()
    };
    assert_eq!(run("a", "11"), run("b", "11"));
}

#[test]
fn searches_stream_expected_sets() {
    let dir = TempDir::new().unwrap();
    let s3 = dir.path().join("s3");
    let res = cayley(&[
        "search",
        "ramanujan",
        "--n",
        "3",
        "--out",
        s3.to_str().unwrap(),
    ]);
    assert_eq!(code(&res), 0);
    let lines = fs::read_to_string(s3.join("hits.jsonl")).unwrap();
    let hits: Vec<Value> = lines
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(hits.len(), 1);
    assert_eq!(hits[0]["C"], serde_json::json!([1, 2]));

    let r20 = dir.path().join("r20");
    let res = cayley(&[
        "search",
        "ramanujan",
        "--n",
        "20",
        "--minDegree",
        "2",
        "--format",
        "csv",
        "--out",
        r20.to_str().unwrap(),
    ]);
    assert_eq!(code(&res), 0);
    let text = fs::read_to_string(r20.join("hits.jsonl")).unwrap();
    assert!(text.contains(r#""C":[1,3,4,7,8,9,11,12,13,16,17,19]"#));
    assert!(fs::read_to_string(r20.join("hits.csv"))
        .unwrap()
        .starts_with("n,s,k,lambda2,ramanujan\n"));
    assert!(String::from_utf8_lossy(&res.stdout).contains("hits=880"));

    let g20 = dir.path().join("g20");
    let res = cayley(&[
        "--jobs",
        "1",
        "search",
        "gds",
        "--n",
        "20",
        "--no-prune",
        "--out",
        g20.to_str().unwrap(),
    ]);
    assert_eq!(code(&res), 0);
    let text = fs::read_to_string(g20.join("hits.jsonl")).unwrap();
    assert!(text.contains(r#""residues":[4,8,12,16]"#));

    let pruned = dir.path().join("pruned");
    assert_eq!(
        code(&cayley(&[
            "search",
            "gds",
            "--n",
            "20",
            "--out",
            pruned.to_str().unwrap()
        ])),
        0
    );
    let text = fs::read_to_string(pruned.join("hits.jsonl")).unwrap();
    assert!(text.contains(r#""residues":[0,4,8,12]"#));
}
