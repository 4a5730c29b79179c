use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_prenichols"))
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("PRENICHOLS_MAX_DEGREE").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn roots_in_height_lex_order() {
    let o = run(&["roots", "--type", "G2"]);
    assert!(o.status.success());
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines, ["1", "2", "1 2", "1^2 2", "1^3 2", "1^3 2^2"]);
}

#[test]
fn closed_set_counts() {
    for (file, n) in [("g23_d1.json", "50"), ("g23_d2.json", "50"), ("g23_d3.json", "14"), ("a2_g3.json", "25")] {
        let o = run(&["closed-sets", "--datum", &data(file), "--count"]);
        assert!(o.status.success(), "{file}");
        assert_eq!(stdout(&o).trim(), n, "{file}");
    }
    let o = run(&["closed-sets", "--datum", &data("super_a3_2.json"), "--list"]);
    assert_eq!(stdout(&o).lines().count(), 8);
}

#[test]
fn verification_commands_pass() {
    for args in [
        vec!["verify", "lemma-sums", "--type", "D4", "--max-parts", "5"],
        vec!["verify", "duality", "--type", "B3"],
        vec!["verify", "duality", "--datum", &data("g23_d1.json")],
        vec!["verify", "lie-bijection", "--type", "G2"],
        vec!["verify", "primitives", "--type", "A3"],
        vec!["verify", "hopf-ideal", "--type", "A2", "--set", "1,12"],
        vec!["verify", "hopf-ideal", "--type", "A3", "--max-degree", "6"],
        vec!["verify", "z1234"],
        vec!["verify", "series-oracle", "--datum", &data("g23_d3.json"), "--max-degree", "8"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains("PASS"), "{args:?}");
    }
}

#[test]
fn input_errors_exit_2() {
    // {1, 2} is not closed by sums.
    let o = run(&["verify", "hopf-ideal", "--type", "A3", "--set", "1,2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not closed"));
    assert_eq!(run(&["--cap", "40", "closed-sets", "--datum", &data("a2_g3.json")]).status.code(), Some(2));
    assert_eq!(run(&["roots", "--type", "Q7"]).status.code(), Some(2));
    assert_eq!(run(&["roots", "--type", "A2", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["closed-sets", "--datum", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(
        run(&["hilbert", "--datum", &data("a2_g3.json"), "--set", "1^3,2^3"]).status.code(),
        Some(2)
    );
}

#[test]
fn verification_edge_cases_exit_0() {
    let o = run(&["verify", "primitives", "--type", "A2", "--max-degree", "1"]);
    // Only the simple degrees exist at D = 1, so the total is still 2.
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["verify", "lemma-sums", "--type", "A2", "--max-parts", "3"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn poset_dot_output() {
    let dir = std::env::temp_dir().join(format!("prenichols-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("d3.dot");
    let o = run(&["poset", "--datum", &data("g23_d3.json"), "--dot", out.to_str().unwrap()]);
    assert!(o.status.success());
    let dot = std::fs::read_to_string(&out).unwrap();
    assert_eq!(dot.matches("gkdim=").count(), 14);
    assert_eq!(dot.matches(" -> ").count(), 25);
    assert!(dot.contains("𝓑̃_q/⟨z_{1³2³}, z_{1³2⁶3³}⟩"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn poset_text_lists_descriptions() {
    let o = run(&["poset", "--datum", &data("a2_g3.json"), "--max-degree", "4"]);
    let text = stdout(&o);
    assert!(text.starts_with("25 pre-Nichols algebras"));
    assert!(text.contains("𝓑_q, dim 27, GKdim 0"));
    assert!(text.contains("𝓑̂_q, GKdim 5"));
}

#[test]
fn hilbert_formats() {
    let o = run(&["hilbert", "--datum", &data("a2_g3.json"), "--set", "1^3,1^3 2^3,2^3", "--max-degree", "3", "--format", "csv"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("degree,coefficient\n"));
    assert!(text.contains("\n1 2,2\n"), "{text}");
    let text = stdout(&run(&["hilbert", "--datum", &data("a2_g3.json"), "--max-degree", "2"]));
    assert!(text.starts_with("1 + "));
}

#[test]
fn max_degree_from_environment() {
    let o = bin()
        .args(["hilbert", "--datum", &data("cartan_a2_n5.json"), "--format", "csv"])
        .env("PRENICHOLS_MAX_DEGREE", "1")
        .output()
        .unwrap();
    assert_eq!(stdout(&o), "degree,coefficient\n0,1\n1,1\n2,1\n");
}

#[test]
fn datum_from_braiding_and_roots_files() {
    let dir = std::env::temp_dir().join(format!("prenichols-datum-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let full: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(data("g23_d3.json")).unwrap()).unwrap();
    let b = dir.join("braiding.json");
    let r = dir.join("roots.json");
    std::fs::write(&b, full["braiding"].to_string()).unwrap();
    std::fs::write(&r, full["positive_roots"].to_string()).unwrap();
    let o = run(&["datum", "--braiding-file", b.to_str().unwrap(), "--roots-file", r.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("GKdim of eminent pre-Nichols algebra: 4"));
    // Without roots the d3 diagram is not a built-in family.
    let o = run(&["datum", "--braiding-file", b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();

    let o = run(&["datum", "--datum", &data("g23_d1.json"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["hoc"].as_array().unwrap().len(), 6);
    assert_eq!(v["datum"]["family_tag"], "g23_d1");
}

#[test]
fn decompose_reports_product() {
    let o = run(&["decompose", "--datum", &data("a2_g3_and_super_a3_2.json")]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("product 200, whole datum 200"));
}

#[test]
fn output_independent_of_worker_count() {
    let args = ["poset", "--datum", &data("g23_d1.json"), "--max-degree", "6"];
    let one = run(&[&["--workers", "1"], &args[..]].concat());
    let many = run(&[&["--workers", "4"], &args[..]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
}
