use std::process::{Command, Output};

fn tropgr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropgr"))
        .env_remove("TROPGR_THREADS")
        .env("TROPGR_CACHE_DIR", std::env::temp_dir().join("tropgr-cli-tests"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn orderings_lists_catalog() {
    let o = tropgr(&["orderings", "--n", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 12);
    assert_eq!(text.lines().next(), Some("1,2,3,4,5"));
}

#[test]
fn intersect_pair() {
    let o = tropgr(&["intersect", "--alpha", "1,2,3,4,5", "--beta", "1,2,3,4,5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("5"));
    let o = tropgr(&["intersect", "--alpha", "1,2,3,4,5", "--beta", "1,3,5,2,4", "--binary"]);
    assert_eq!(stdout(&o).lines().next(), Some("0"));
}

#[test]
fn invalid_input_exits_with_2() {
    for args in [
        vec!["intersect", "--alpha", "1,2,3,4,5", "--beta", "1,2,3,4"],
        vec!["intersect", "--alpha", "1,2,2,4,5", "--beta", "1,2,3,4,5"],
        vec!["orderings", "--n", "2"],
        vec!["search", "--n", "6", "--budget", "lots"],
        vec!["frobnicate"],
    ] {
        let o = tropgr(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn zero_threads_is_rejected() {
    let o = Command::new(env!("CARGO_BIN_EXE_tropgr"))
        .env("TROPGR_THREADS", "0")
        .args(["orderings", "--n", "5"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_reports_pass_as_json() {
    let o = tropgr(&["verify", "--n", "5", "--seed", "7"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["numerical_rank"], 2);
    assert_eq!(v["signed_exact_rank"], 2);
}

#[test]
fn search_writes_verifiable_witness() {
    let dir = std::env::temp_dir().join(format!("tropgr-cli-witness-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("w.json");
    let o = tropgr(&["search", "--n", "6", "--output", path.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["size"], 4);
    assert_eq!(v["lower_bound"], false);
    std::fs::remove_dir_all(&dir).ok();
}
