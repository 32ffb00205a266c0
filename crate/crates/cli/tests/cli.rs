use std::process::{Command, Output};

fn hopping(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hopping")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn ids_shift_rows() {
    let o = hopping(&["--study", "ids-shift", "--model", "ZComb(1)", "--n", "250,500,1000"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next(), Some("n,delta,distance"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.windows(2).all(|w| w[1][2] <= w[0][2]));
}

#[test]
fn norms_json_reports_hidden_spectrum() {
    let o = hopping(&["--study", "norms", "--model", "NComb(2)", "--format", "json"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("\"hidden\": true"), "{text}");
    assert!(text.contains("\"comb_norm\": 4.0575327045638"));
}

#[test]
fn table_is_reproducible() {
    let a = hopping(&["--study", "table"]);
    let b = hopping(&["--study", "table", "--workers", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.contains("NComb(2),0.249719,T,"));
    assert!(text.contains("star graph,external reference - not computed"));
}

#[test]
fn invalid_input_exits_with_two() {
    for args in [
        &["--study", "norms", "--model", "Foo(2)"][..],
        &["--study", "nonsense", "--model", "N"],
        &["--study", "density-limit", "--model", "ZComb(1)", "--n", "0"],
    ] {
        let o = hopping(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = std::env::temp_dir().join(format!("hopping-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("study.cfg");
    std::fs::write(&cfg, "# norms of a comb\nstudy = norms\nmodel = NComb(1)\nformat = json\n").unwrap();
    let from_file = stdout(&hopping(&["--config", cfg.to_str().unwrap()]));
    assert!(from_file.contains("\"model\": \"NComb(1)\""));
    let out = dir.join("out.csv");
    let o = hopping(&["--config", cfg.to_str().unwrap(), "--model", "ZComb(3)", "--format", "csv", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let written = std::fs::read_to_string(&out).unwrap();
    assert!(written.starts_with("# hopping v0.1.0 spec="));
    assert!(written.contains("ZComb(3),6.32455532"), "{written}");
    std::fs::remove_dir_all(&dir).ok();
}
