use std::path::PathBuf;

use serde_json::Value;

use qgl::cli::run_with_env;

fn qgl(args: &[&str], env_cache: Option<PathBuf>) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("qgl")
        .chain(args.iter().copied())
        .map(String::from)
        .collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with_env(argv, env_cache, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn corrupt_cache_line_is_named() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join(qgl::cache::CACHE_FILE),
        "{\"kind\":\"h\"}\nnot json\n",
    )
    .unwrap();
    let (code, _, err) = qgl(&["orbits", "--d", "1"], Some(dir.path().into()));
    assert_eq!(code, 2);
    let e: Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(e["line"], 1);
}

#[test]
fn cache_dir_flag_beats_environment() {
    let (flag, env) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let (code, _, _) = qgl(
        &[
            "verify",
            "relations-dot",
            "--cache-dir",
            flag.path().to_str().unwrap(),
        ],
        Some(env.path().into()),
    );
    assert_eq!(code, 0);
    assert!(flag.path().join(qgl::cache::CACHE_FILE).exists());
    assert!(!env.path().join(qgl::cache::CACHE_FILE).exists());
}

#[test]
fn config_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("qgl.json");
    std::fs::write(&cfg, r#"{"n": 3, "q": [2, 3]}"#).unwrap();
    let (code, out, _) = qgl(
        &["--config", cfg.to_str().unwrap(), "verify", "determinant"],
        None,
    );
    assert_eq!(code, 0);
    let reports: Value = serde_json::from_str(out.trim()).unwrap();
    let reports = reports.as_array().unwrap();
    assert_eq!(reports.len(), 2);
    assert!(reports.iter().all(|r| r["n"] == 3));

    std::fs::write(&cfg, r#"{"colour": "blue"}"#).unwrap();
    let (code, _, err) = qgl(&["--config", cfg.to_str().unwrap(), "nf", "v"], None);
    assert_eq!(code, 2);
    let e: Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(e["error"], "config");
}
