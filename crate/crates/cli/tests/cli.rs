use odgrid::config::{Model, PricingConfig};
use std::path::Path;
use std::process::{Command, Output};

const LV1D: &str = r#"
model = "lv1d"
maturity = 1.0
steps = 100
grid_finess = [0.5]

[market]
assets = ["asset1"]

[payoff]
kind = "call"
strike = 100.0
"#;

fn odgrid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_odgrid")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn price_reports_implied_vol_near_market() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "job.toml", LV1D);
    let o = odgrid(&["price", &cfg, "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let vol = v["implied_vol"].as_f64().unwrap();
    assert!((vol - 0.25).abs() < 1e-3, "{vol}");
    assert!(v["wall_time_s"].as_f64().unwrap() >= 0.0);
    assert_eq!(v["grid"]["steps"].as_u64(), Some(100));

    let o = odgrid(&["price", &cfg]);
    assert!(stdout(&o).contains("implied vol"));
}

#[test]
fn out_of_range_grid_finess_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.toml", &LV1D.replace("[0.5]", "[1.7]"));
    let o = odgrid(&["price", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("(0, 1]"), "{}", stderr(&o));
}

#[test]
fn unknown_field_and_missing_file_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.toml", &LV1D.replace("steps = 100", "steps = 100\ncolour = 1"));
    let o = odgrid(&["price", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("colour"));
    assert_eq!(odgrid(&["price", "/nonexistent/job.toml"]).status.code(), Some(2));
}

#[test]
fn unstable_calibration_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"
model = "glv"
maturity = 1.0
steps = 52
grid_finess = [0.33, 0.5]

[market]
assets = ["asset1"]

[payoff]
kind = "call"
strike = 100.0

[glv]
digital = "market"
vega_cutoff = 1e-6
"#;
    let cfg = write_config(dir.path(), "glv.toml", text);
    let o = odgrid(&["price", &cfg]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("step"));
}

#[test]
fn dump_sheets_writes_header() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "job.toml", LV1D);
    let out = dir.path().join("sheets.csv");
    let o = odgrid(&["price", &cfg, "--dump-sheets", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("step,node,state,value"));
    assert!(lines.count() > 100);
}

#[test]
fn unknown_table_exits_2() {
    let o = odgrid(&["table", "basket4d"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("lv1d_calib"));
}

#[test]
fn table_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (f, threads) in [(&a, "1"), (&b, "2")] {
        let o = odgrid(&[
            "table",
            "heston",
            "--with-mc",
            "--paths",
            "20000",
            "--seed",
            "7",
            "--threads",
            threads,
            "--out",
            f.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert!(text.starts_with("strike,mc_call,mc_call_full,mc_call_stderr,mc_call_stderr_full,grid_call,grid_call_full"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn thread_count_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_odgrid"))
        .args(["table", "hw_adj", "--json"])
        .env("ODGRID_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["id"], "hw_adj");
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn example_configs_revalidate() {
    for m in Model::ALL {
        let o = odgrid(&["example", m.name()]);
        assert_eq!(o.status.code(), Some(0));
        let cfg = PricingConfig::from_toml_str(&stdout(&o)).unwrap();
        assert_eq!(cfg.model, m);
    }
    assert_eq!(odgrid(&["example", "lv4d"]).status.code(), Some(2));
}
