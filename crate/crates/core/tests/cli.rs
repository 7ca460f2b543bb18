//! The `fabercone` binary end to end.

use std::path::Path;
use std::process::{Command, Output};

fn fabercone(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fabercone"))
        .args(args)
        .env("FABERCONE_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn named(class: &str, g: &str, dir: &Path) -> std::path::PathBuf {
    let o = fabercone(&["divisor", "--named", class, "-g", g], dir);
    assert!(o.status.success());
    let path = dir.join(format!("{class}-{g}.json"));
    std::fs::write(&path, &o.stdout).unwrap();
    path
}

#[test]
fn strata_listing() {
    let dir = tempfile::tempdir().unwrap();
    for (g, n, k) in [("0", "4", 1), ("0", "5", 10), ("1", "1", 1), ("2", "0", 2), ("0", "6", 65)] {
        let o = fabercone(&["strata", "-g", g, "-n", n], dir.path());
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        assert!(text.starts_with(&format!("M_{{{g},{n}}}: {k} strata\n")), "{text}");
        assert_eq!(text.lines().count(), k + 1);
    }
    let o = fabercone(&["strata", "-g", "0", "-n", "5", "--json"], dir.path());
    let items: Vec<serde_json::Value> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(items.len(), 10);
    assert!(items.iter().all(|s| s["type"] == 6 && s["legs"].as_array().unwrap().len() == 4));
    assert_eq!(fabercone(&["strata", "-g", "0", "-n", "3"], dir.path()).status.code(), Some(2));
}

#[test]
fn fnef_verdicts_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = fabercone(&["fnef", named("cornalba-harris", "3", dir.path()).to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("F-nef: no"), "{text}");
    assert!(text.contains("violated: T1 value -2"), "{text}");

    let o = fabercone(&["fnef", "--report", named("genus-ten-vertex", "10", dir.path()).to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["verdict"], true);
    assert_eq!(report["tight_rank"], 6);

    for class in ["eleven-lambda", "ten-lambda"] {
        let o = fabercone(&["fnef", named(class, "7", dir.path()).to_str().unwrap()], dir.path());
        assert_eq!(o.status.code(), Some(0), "{class}");
    }

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"g":3,"n":0,"lambda":"1/0"}"#).unwrap();
    assert_eq!(fabercone(&["fnef", bad.to_str().unwrap()], dir.path()).status.code(), Some(2));
}

#[test]
fn faber_cone_rays_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let o = fabercone(&["faber-cone", "-g", "3", "-n", "0", "--rays"], dir.path());
    let text = stdout(&o);
    let rays: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rays, ["(1,0,0)", "(10,1,2)", "(12,1,0)"]);

    let first = fabercone(&["faber-cone", "-g", "10", "-n", "0", "--rays"], dir.path());
    assert!(stdout(&first).lines().any(|l| l == "(30,3,6,6,2,4,6)"));
    assert!(std::fs::read_dir(dir.path()).unwrap().count() >= 1);
    let second = fabercone(&["faber-cone", "-g", "10", "-n", "0", "--rays"], dir.path());
    let fresh = fabercone(&["faber-cone", "-g", "10", "-n", "0", "--rays", "--no-cache"], dir.path());
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stdout, fresh.stdout);
}

#[test]
fn fulton_certificates_close_the_loop() {
    let dir = tempfile::tempdir().unwrap();
    let certs = dir.path().join("certs");
    let o = fabercone(&["fulton", "-n", "5", "--certificates", certs.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.ends_with("YES\n"), "{text}");
    let mut files: Vec<_> = std::fs::read_dir(&certs).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert_eq!(files.len(), 10);
    for f in &files {
        let v = fabercone(&["membership", "--verify", f.to_str().unwrap()], dir.path());
        assert_eq!(v.status.code(), Some(0), "{}", f.display());
        assert!(stdout(&v).starts_with("verified: member"));
    }
    let mut json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&files[0]).unwrap()).unwrap();
    json["target"][0] = serde_json::Value::String("12345".into());
    let tampered = dir.path().join("tampered.json");
    std::fs::write(&tampered, serde_json::to_string(&json).unwrap()).unwrap();
    let v = fabercone(&["membership", "--verify", tampered.to_str().unwrap()], dir.path());
    assert_eq!(v.status.code(), Some(1));
    assert!(stdout(&v).starts_with("rejected"));
}

#[test]
fn fulton_budget_and_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let o = fabercone(&["fulton", "-n", "6", "--max-rays", "5"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(fabercone(&["fulton", "-n", "3"], dir.path()).status.code(), Some(2));
    assert_eq!(fabercone(&["fulton", "-n", "9"], dir.path()).status.code(), Some(2));
}

#[test]
fn membership_in_a_matrix_cone() {
    let dir = tempfile::tempdir().unwrap();
    let cone = dir.path().join("cone.json");
    std::fs::write(&cone, r#"{"dim":2,"rows":[["1","0"],["1","1"]],"linearity":[]}"#).unwrap();
    let cert = dir.path().join("cert.json");
    let o = fabercone(
        &["membership", "--cone", cone.to_str().unwrap(), "--vector", "(3,1/2)", "--out", cert.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("member\n"));
    assert_eq!(fabercone(&["membership", "--verify", cert.to_str().unwrap()], dir.path()).status.code(), Some(0));

    let o = fabercone(&["membership", "--cone", cone.to_str().unwrap(), "--vector", "(0,-1)"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("separated\n"));

    let rays = fabercone(&["facets", cone.to_str().unwrap()], dir.path());
    let h = dir.path().join("h.json");
    std::fs::write(&h, &rays.stdout).unwrap();
    let back = fabercone(&["extremal-rays", h.to_str().unwrap()], dir.path());
    let v: serde_json::Value = serde_json::from_slice(&back.stdout).unwrap();
    assert_eq!(v["rows"], serde_json::json!([["1", "0"], ["1", "1"]]));
}

#[test]
fn genus_zero_commands() {
    let dir = tempfile::tempdir().unwrap();
    for (n, d) in [("4", 1), ("5", 5), ("6", 16), ("7", 42)] {
        assert_eq!(stdout(&fabercone(&["relations", "-n", n], dir.path())), format!("dim V = {d}\n"));
    }
    let o = fabercone(&["kappa", "-n", "6"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("effective: yes\n"));
    let o = fabercone(&["lemma44", "-n", "5", "--partition", "12|345", "--e", "12=-1"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\nmember\n"));
    let o = fabercone(&["lemma44", "-n", "5", "--partition", "1|2345"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn flag_divisor_checks() {
    let dir = tempfile::tempdir().unwrap();
    let o = fabercone(&["flag-divisor", "-g", "2", "-n", "1", "-a", "17", "-b", "3/2", "--verify"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("all checks pass\n"));
    let o = fabercone(&["flag-divisor", "-g", "4", "-n", "0", "-a", "100", "-b", "13", "--verify"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("strict conditions on a and b_irr: no"));
    assert!(text.contains("zero on every type 6 stratum: yes"));
}

#[test]
fn output_does_not_depend_on_threads() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["faber-cone", "-g", "8", "-n", "0", "--rays", "--no-cache"],
        vec!["strata", "-g", "2", "-n", "3"],
        vec!["fulton", "-n", "5"],
    ] {
        let outs: Vec<Vec<u8>> = ["1", "4"]
            .iter()
            .map(|t| {
                let mut a = vec!["--threads", t];
                a.extend(&args);
                fabercone(&a, dir.path()).stdout
            })
            .collect();
        assert_eq!(outs[0], outs[1], "{args:?}");
    }
}
