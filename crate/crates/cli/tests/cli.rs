use std::path::PathBuf;

use multinorm::{Error, FinAbGroup};
use multinorm_cli::{run, CliError, Outcome};
use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "data", name].iter().collect();
    p.display().to_string()
}

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("multinorm").chain(args.iter().copied()))
}

fn scratch(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("multinorm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p.display().to_string()
}

fn group(v: &Value) -> FinAbGroup {
    serde_json::from_value(v.clone()).unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = cli(&full);
    assert_eq!(out.code, 0, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn documented_examples() {
    let out = cli(&["wedge", "2,2"]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "Z/2\n"));

    let out = cli(&["sha", &data("biquadratic_13_17.json")]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "Z/2\n"));

    let out = cli(&["multinorm", &data("cyclic_pair.json")]);
    assert_eq!(out.code, 0);
    assert_eq!(
        out.stdout.lines().next(),
        Some("trivial — multinorm principle holds")
    );
}

#[test]
fn wedge_accepts_group_files() {
    let f = scratch("g.json", r#"{"invariant_factors": [2, 4, 8]}"#);
    assert_eq!(cli(&["wedge", &f]).stdout, "Z/2 ⊕ Z/2 ⊕ Z/4\n");
    assert_eq!(cli(&["wedge", "12"]).stdout, "trivial\n");
}

#[test]
fn quartic_model_bound() {
    let out = cli(&["bound", &data("quartic_model.json")]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "bound: 1\nphi injective: false\n");
    let v = json_of(&["phi", &data("quartic_model.json")]);
    assert_eq!(v["phi_injective"], false);
    assert_eq!(group(&v["kernel"]).invariant_factors(), &[2]);
    assert!(v["kernel_generators"][0]["commutator"].is_array());
}

#[test]
fn exit_codes() {
    let out = cli(&["multinorm", &data("overlapping_tower.json")]);
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("n1_meets_n2_trivially"), "{}", out.stderr);

    let bad = scratch("bad.json", "{\n  \"group\": [1,\n");
    let out = cli(&["sha", &bad]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("bad.json:3:"), "{}", out.stderr);

    let missing = scratch("missing.json", r#"{"group": {"invariant_factors": [2, 2]}, "n1": {"generators": [[1, 0]]}}"#);
    let out = cli(&["certificate", &missing]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("missing key \"n2\""), "{}", out.stderr);

    let wrong = scratch(
        "wrong.json",
        r#"{"group": {"invariant_factors": [2, 2]}, "n1": {"generators": [[1]]}, "n2": {"generators": []}}"#,
    );
    let out = cli(&["certificate", &wrong]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("$.n1.generators[0]"), "{}", out.stderr);

    assert_eq!(cli(&["sha", "/nonexistent/file.json"]).code, 2);
    assert_eq!(cli(&["frobnicate"]).code, 2);
    assert_eq!(cli(&["sweep", "--max-order", "128"]).code, 2);
    let help = cli(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("certificate"));
    assert_eq!(
        CliError::Library(Error::Internal { check: "x" }).exit_code(),
        4
    );
}

#[test]
fn output_is_deterministic() {
    let jobs: Vec<Vec<String>> = vec![
        vec!["sha".into(), data("biquadratic_13_17.json")],
        vec!["certificate".into(), data("tower.json")],
        vec!["certificate".into(), data("biquadratic_pair.json")],
        vec!["phi".into(), data("quartic_model.json")],
        vec!["sweep".into(), "--max-order".into(), "8".into(), "--families".into(), "2".into(), "--seed".into(), "3".into()],
    ];
    for job in jobs {
        for format in ["text", "json"] {
            let mut args = vec!["--format", format];
            args.extend(job.iter().map(String::as_str));
            let a = cli(&args);
            let b = cli(&args);
            assert_eq!(a.code, 0, "{}", a.stderr);
            assert_eq!(a, b, "{job:?}");
        }
    }
}

#[test]
fn text_and_json_agree() {
    let cases = [
        ("sha", data("biquadratic_13_17.json")),
        ("sha", data("klein_four.json")),
        ("multinorm", data("cyclic_pair.json")),
        ("multinorm", data("biquadratic_pair.json")),
        ("certificate", data("tower.json")),
        ("certificate", data("biquadratic_pair.json")),
        ("intersection", data("biquadratic_pair.json")),
        ("bound", data("quartic_model.json")),
        ("wedge", "2,4,8".to_string()),
    ];
    for (cmd, file) in cases {
        let text = cli(&[cmd, &file]).stdout;
        let v = json_of(&[cmd, &file]);
        let rebuilt = match cmd {
            "sha" => format!("{}\n", group(&v["sha"])),
            "wedge" => format!("{}\n", group(&v["exterior_square"])),
            "multinorm" => {
                let s = group(&v["sha_intersection"]);
                let verdict = if v["holds"] == true { "holds" } else { "fails" };
                format!(
                    "{s} — multinorm principle {verdict}\ncoker(g): {}\n",
                    group(&v["coker_g"])
                )
            }
            "intersection" => format!("|Sha_∩| = {}\n", v["intersection_order"]),
            "bound" => format!("bound: {}\nphi injective: {}\n", v["bound"], v["phi_injective"]),
            "certificate" => {
                let rows = [
                    ("Sha(L)", "sha_l"),
                    ("Sha(L1)", "sha_l1"),
                    ("Sha(L2)", "sha_l2"),
                    ("Sha(E)", "sha_e"),
                    ("Coker(T)", "coker_t"),
                ];
                let mut s = String::new();
                for (name, key) in rows {
                    s += &format!("{name:<9} {}\n", group(&v[key]));
                }
                s += &format!("{:<9} {}\n", "|Im T|", v["image_t_order"]);
                let verdict = if v["verdict"] == true { "pass" } else { "FAIL" };
                assert!(text.ends_with(&format!("{:<9} {verdict}\n", "verdict")));
                assert!(text.starts_with(&s), "{text}\n{s}");
                continue;
            }
            _ => unreachable!(),
        };
        assert_eq!(text, rebuilt, "{cmd} {file}");
    }
}
