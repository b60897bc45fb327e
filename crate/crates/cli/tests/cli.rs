use std::path::Path;
use std::process::{Command, Output};

fn hycone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hycone"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn cuts_and_convert() {
    let dir = tempfile::tempdir().unwrap();
    let cone = dir.path().join("cut4.json");
    let o = hycone(&["cuts", "--n", "4", "--out", cone.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cone).unwrap()).unwrap();
    assert_eq!(v["rays"].as_array().unwrap().len(), 7);
    let o = hycone(&["convert", "--in", cone.to_str().unwrap(), "--to", "facets"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["facets"].as_array().unwrap().len(), 12);
}

#[test]
fn hull_of_cut_polytope() {
    let dir = tempfile::tempdir().unwrap();
    let o = hycone(&["cuts", "--n", "5", "--polytope"]);
    assert!(o.status.success());
    let pts = write(dir.path(), "pts.json", &stdout(&o));
    let o = hycone(&["hull", "--in", &pts]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 16);
    assert_eq!(v["facets"].as_array().unwrap().len(), 56);
}

#[test]
fn membership_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let k23 = write(
        dir.path(),
        "k23.json",
        r#"{"n": 5, "d": ["2", "2", "1", "1", "2", "1", "1", "1", "1", "2"]}"#,
    );
    let o = hycone(&["member", "--family", "hyp", "--in", &k23, "--witness"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.starts_with("violated\n"));
    assert!(text.contains("violation\t2\n"));
    let cut = write(dir.path(), "cut.json", r#"{"n": 3, "d": ["1", "1", "0"]}"#);
    for family in ["hyp", "hypp"] {
        let o = hycone(&["member", "--family", family, "--in", &cut]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), "member\n");
    }
    let bad = write(dir.path(), "bad.json", r#"{"n": 4, "d": ["1", "1"]}"#);
    let o = hycone(&["member", "--family", "hyp", "--in", &bad]);
    assert_eq!(o.status.code(), Some(2));
    let o = hycone(&["member", "--family", "hyp", "--in", "/nonexistent/file.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn max_scale_of_equidistant() {
    let dir = tempfile::tempdir().unwrap();
    let d = write(dir.path(), "d.json", r#"{"n": 3, "d": ["1", "1", "1"]}"#);
    let o = hycone(&["max-scale", "--in", &d]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "2/3\n");
}

#[test]
fn orbit_table() {
    let o = hycone(&["orbit", "--n", "5", "--b", "1,1,1,-1,-1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "group\trepresentative\torbit_size\tstabilizer\tclass");
    assert_eq!(lines[1], "Sym\t-1,-1,1,1,1\t10\t12\t-1,-1,-1,-1,-1");
    let o = hycone(&["orbit", "--n", "5", "--b=-1,1,1,1,-1", "--switch"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("ARes\t"));
    let o = hycone(&["orbit", "--n", "4", "--b", "1,1,1,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gen_ineq_lists() {
    let o = hycone(&["gen-ineq", "--family", "met", "--n", "4"]);
    assert!(o.status.success());
    assert_eq!(json(&o).as_array().unwrap().len(), 12);
    let o = hycone(&["gen-ineq", "--family", "hyp", "--n", "5", "--max-abs", "1"]);
    assert!(o.status.success());
    let list = json(&o);
    assert!(list.as_array().unwrap().iter().all(|x| x["rhs"] == "0"));
}

#[test]
fn lift_into_pentagon() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.json", r#"{"n": 5, "edges": [[0,1],[1,2],[2,3],[3,4],[0,4]]}"#);
    let f = write(dir.path(), "f.json", r#"{"n": 3, "b": [-1, 1, 1], "rhs": 0}"#);
    let p = write(dir.path(), "p.json", r#"{"0,1": [3,4,0], "0,2": [3,2,1], "1,2": [0,1]}"#);
    let o = hycone(&["lift", "--graph", &g, "--ineq", &f, "--paths", &p]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["coef"]["0,1"], "1");
    assert_eq!(v["coef"]["3,4"], "-1");
    assert_eq!(v["rhs"], "0");
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("valid"));
}

#[test]
fn repartition_square() {
    let dir = tempfile::tempdir().unwrap();
    let pts = write(dir.path(), "sq.json", "[[0,0],[1,0],[0,1],[1,1]]");
    let o = hycone(&["repartition", "--points", &pts]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["plus"].as_array().unwrap().len(), 2);
    assert_eq!(v["minus"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_tables() {
    let o = hycone(&["--jobs", "2", "verify", "--table", "t2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("table\trow\tcheck\texpected\tcomputed\tstatus\n"));
    assert!(text.lines().skip(1).all(|l| l.ends_with("\tOK")));
    let o = hycone(&["verify", "--table", "gcd"]);
    assert_eq!(o.status.code(), Some(0));
    let o = hycone(&["verify", "--table", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_arguments() {
    assert_eq!(hycone(&["--jobs", "0", "cuts", "--n", "3"]).status.code(), Some(2));
    assert_eq!(hycone(&["cuts"]).status.code(), Some(2));
    assert_eq!(hycone(&["cuts", "--n", "1"]).status.code(), Some(2));
}

#[test]
fn data_directory_override() {
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data");
    let dir = tempfile::tempdir().unwrap();
    for e in std::fs::read_dir(&src).unwrap() {
        let e = e.unwrap();
        std::fs::copy(e.path(), dir.path().join(e.file_name())).unwrap();
    }
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_hycone"))
            .args(["verify", "--table", "gcd"])
            .env("HYCONE_DATA", dir.path())
            .output()
            .unwrap()
    };
    assert_eq!(run().status.code(), Some(0));
    let gcd = dir.path().join("gcd.tsv");
    let text = std::fs::read_to_string(&gcd).unwrap().replace("56", "28");
    std::fs::write(&gcd, text).unwrap();
    let o = run();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("gcd.tsv"));
}
