use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_galois-points"))
}

#[test]
fn passing_run_exits_zero_with_json() {
    let out = bin()
        .args(["--p", "3", "--m", "2", "--check", "thm1a", "--json", "-"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "pass");
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["millis"] == 0));
}

#[test]
fn output_is_deterministic() {
    let go = || {
        bin()
            .args(["--p", "2", "--r", "2", "--check", "thm2", "--seed", "5", "--json", "-"])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(go(), go());
}

#[test]
fn bad_parameters_exit_two() {
    for args in [
        &["--p", "4", "--m", "2"][..],
        &["--p", "3", "--m", "3", "--check", "thm1a"],
        &["--p", "3", "--m", "2", "--check", "bogus"],
        &["--m", "2"],
    ] {
        let out = bin().args(args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn grid_file_sweeps() {
    let dir = std::env::temp_dir().join(format!("gp-grid-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let grid = dir.join("grid.txt");
    std::fs::write(&grid, "# p n m|r selector\n3 1 2 thm1b\n2 1 2 thm2\n").unwrap();
    let json = dir.join("out.json");
    let out = bin()
        .arg("--grid")
        .arg(&grid)
        .arg("--json")
        .arg(&json)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["entries"].as_array().unwrap().len(), 2);
    std::fs::remove_dir_all(&dir).ok();
}
